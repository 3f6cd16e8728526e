//! Sparse alternating forms.
//!
//! A [`KForm`] of degree `k` on an `n`-dimensional space is a map from
//! strictly increasing index tuples to nonzero coefficients; `e^{i₁…i_k}`
//! evaluates on `(e_{i₁}, …, e_{i_k})` to 1 (determinant convention, no
//! factorial normalisation).  Indices are 0-based internally and printed
//! 1-based.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{Endomorphism, Matrix, Vector};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KForm {
    degree: usize,
    dim: usize,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
pub(crate) fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl KForm {
    pub fn zero(degree: usize, dim: usize) -> Self {
        KForm {
            degree,
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The constant degree-0 form.
    pub fn constant(dim: usize, c: Scalar) -> Self {
        let mut f = Self::zero(0, dim);
        f.add_term(Vec::new(), c);
        f
    }

    /// `e^{i₁} ∧ … ∧ e^{i_k}` for 0-based indices in any order.
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        Self::monomial(dim, indices, Scalar::one())
    }

    pub fn monomial(dim: usize, indices: &[usize], c: Scalar) -> Self {
        let mut f = Self::zero(indices.len(), dim);
        f.add_term(indices.to_vec(), c);
        f
    }

    /// The 1-form with the given coordinates.
    pub fn covector(coords: &Vector) -> Self {
        let mut f = Self::zero(1, coords.dim());
        for (i, c) in coords.iter().enumerate() {
            f.add_term(vec![i], c.clone());
        }
        f
    }

    /// Adds `c·e^{idx}`; `idx` may be unsorted (sign applied) and repeated
    /// indices contribute nothing.
    pub fn add_term(&mut self, mut idx: Vec<usize>, c: Scalar) {
        assert_eq!(idx.len(), self.degree, "term degree mismatch");
        assert!(idx.iter().all(|&i| i < self.dim), "index out of range");
        if c.is_zero() {
            return;
        }
        let Some(sign) = sort_with_sign(&mut idx) else {
            return;
        };
        let c = if sign < 0 { -c } else { c };
        match self.terms.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Scalar)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `e^{idx}` (indices in any order).
    pub fn coeff(&self, idx: &[usize]) -> Scalar {
        let mut k = idx.to_vec();
        match sort_with_sign(&mut k) {
            None => Scalar::zero(),
            Some(sign) => {
                let c = self.terms.get(&k).cloned().unwrap_or_default();
                if sign < 0 {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// First nonzero component in canonical order.
    pub fn first_nonzero(&self) -> Option<(&[usize], &Scalar)> {
        self.terms().next()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.degree, self.dim);
        }
        KForm {
            degree: self.degree,
            dim: self.dim,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
        }
    }

    fn check_same(&self, o: &KForm) -> Result<()> {
        if self.dim != o.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: o.dim,
            });
        }
        if self.degree != o.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: o.degree,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, o: &KForm) -> Result<KForm> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    /// Value on `degree` vectors: `Σ c_I det[v_j(i)]_{i∈I}`.
    pub fn evaluate(&self, vs: &[Vector]) -> Result<Scalar> {
        if vs.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: vs.len(),
            });
        }
        if let Some(v) = vs.iter().find(|v| v.dim() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        let mut acc = Scalar::zero();
        for (idx, c) in &self.terms {
            let m = Matrix::from_fn(self.degree, self.degree, |r, col| vs[col][idx[r]].clone());
            let det = m.determinant();
            if !det.is_zero() {
                acc += &(c * &det);
            }
        }
        Ok(acc)
    }

    /// Largest radicand among coefficients.
    pub fn radicand(&self) -> u64 {
        self.terms.values().map(Scalar::radicand).max().unwrap_or(1)
    }
}

impl Add for &KForm {
    type Output = KForm;
    fn add(self, o: &KForm) -> KForm {
        self.try_add(o).expect("adding incompatible forms")
    }
}

impl Sub for &KForm {
    type Output = KForm;
    fn sub(self, o: &KForm) -> KForm {
        self.try_add(&-o).expect("subtracting incompatible forms")
    }
}

impl Neg for &KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        self.scale(&Scalar::from_int(-1))
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let name: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
            if idx.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "e^{}", name.join(","))?;
            } else {
                write!(f, "({c})e^{}", name.join(","))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm[{};{}]({})", self.degree, self.dim, self)
    }
}

/// `a ∧ b`.  Degree-0 operands act as scalars.
pub fn wedge(a: &KForm, b: &KForm) -> Result<KForm> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    let mut out = KForm::zero(a.degree + b.degree, a.dim);
    if out.degree > out.dim {
        return Ok(out);
    }
    for (ia, ca) in &a.terms {
        for (ib, cb) in &b.terms {
            if ib.iter().any(|i| ia.contains(i)) {
                continue;
            }
            let mut idx = ia.clone();
            idx.extend_from_slice(ib);
            out.add_term(idx, ca * cb);
        }
    }
    Ok(out)
}

/// m-fold wedge power; `a⁰ = 1`.
pub fn wedge_power(a: &KForm, m: usize) -> KForm {
    let mut acc = KForm::constant(a.dim, Scalar::one());
    for _ in 0..m {
        acc = wedge(&acc, a).expect("same dimension");
    }
    acc
}

/// Interior product `ι_x a`.
pub fn contract(x: &Vector, a: &KForm) -> Result<KForm> {
    if a.degree == 0 {
        return Err(Error::DegreeZero);
    }
    if x.dim() != a.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: x.dim(),
        });
    }
    let mut out = KForm::zero(a.degree - 1, a.dim);
    for (idx, c) in &a.terms {
        for (m, &i) in idx.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            let mut rest = idx.clone();
            rest.remove(m);
            let v = c * &x[i];
            out.add_term(rest, if m % 2 == 1 { -v } else { v });
        }
    }
    Ok(out)
}

fn check_square(m: &Endomorphism, a: &KForm) -> Result<()> {
    if !m.is_square() || m.rows() != a.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: m.rows(),
        });
    }
    Ok(())
}

/// Pullback `(M*a)(v₁,…,v_k) = a(Mv₁,…,Mv_k)`.
pub fn pullback(m: &Endomorphism, a: &KForm) -> Result<KForm> {
    check_square(m, a)?;
    let rows: Vec<KForm> = (0..a.dim).map(|r| KForm::covector(&m.row(r))).collect();
    let mut out = KForm::zero(a.degree, a.dim);
    for (idx, c) in &a.terms {
        let mut prod = KForm::constant(a.dim, c.clone());
        for &i in idx {
            prod = wedge(&prod, &rows[i])?;
            if prod.is_zero() {
                break;
            }
        }
        out = out.try_add(&prod)?;
    }
    Ok(out)
}

/// `(Ja)(v₁,…,v_k) = a(Jv₁,…,Jv_k)`.
pub fn j_transform(j: &Endomorphism, a: &KForm) -> Result<KForm> {
    pullback(j, a)
}

/// `C*a = −Σ_m a(·,…,C·,…,·)`, the dual derivation action of `C`.
pub fn endo_star(c: &Endomorphism, a: &KForm) -> Result<KForm> {
    check_square(c, a)?;
    let rows: Vec<KForm> = (0..a.dim).map(|r| KForm::covector(&c.row(r))).collect();
    let mut out = KForm::zero(a.degree, a.dim);
    for (idx, coef) in &a.terms {
        for m in 0..idx.len() {
            let mut prod = KForm::constant(a.dim, -coef.clone());
            for (p, &i) in idx.iter().enumerate() {
                let factor = if p == m {
                    rows[i].clone()
                } else {
                    KForm::basis(a.dim, &[i])
                };
                prod = wedge(&prod, &factor)?;
            }
            out = out.try_add(&prod)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn e(n: usize, idx: &[usize]) -> KForm {
        KForm::basis(n, &idx.iter().map(|i| i - 1).collect::<Vec<_>>())
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge(&e(3, &[1]), &e(3, &[2])).unwrap(), e(3, &[1, 2]));
        assert!(wedge(&e(3, &[1]), &e(3, &[1])).unwrap().is_zero());
        let sum = &e(3, &[1]) + &e(3, &[2]);
        assert_eq!(wedge(&sum, &e(3, &[1, 3])).unwrap(), -&e(3, &[1, 2, 3]));
        assert!(wedge(&e(3, &[1]), &e(4, &[1])).is_err());
    }

    #[test]
    fn contraction_examples() {
        let x1 = Vector::basis(3, 0);
        assert_eq!(contract(&x1, &e(3, &[1, 2])).unwrap(), e(3, &[2]));
        assert!(contract(&Vector::basis(3, 2), &e(3, &[1, 2])).unwrap().is_zero());
        let x = Vector::from_ints(&[1, 1, 0]);
        assert_eq!(contract(&x, &e(3, &[1, 2])).unwrap(), &e(3, &[2]) - &e(3, &[1]));
        assert_eq!(
            contract(&x1, &KForm::constant(3, Scalar::one())),
            Err(Error::DegreeZero)
        );
    }

    #[test]
    fn endo_star_examples() {
        let a = e(2, &[1, 2]);
        let id = Matrix::identity(2);
        assert_eq!(endo_star(&id, &a).unwrap(), a.scale(&Scalar::from_int(-2)));
        assert!(endo_star(&Matrix::zeros(2, 2), &a).unwrap().is_zero());
        // e1 ↦ e2, e2 ↦ −e1
        let rot = Matrix::from_int_rows(&[&[0, -1], &[1, 0]]);
        assert!(endo_star(&rot, &a).unwrap().is_zero());
    }

    #[test]
    fn j_transform_examples() {
        let j = Matrix::from_int_rows(&[&[0, -1], &[1, 0]]);
        let a = e(2, &[1, 2]);
        assert_eq!(j_transform(&j, &a).unwrap(), a);
        assert_eq!(j_transform(&Matrix::identity(2), &a).unwrap(), a);
        let c = KForm::constant(2, Scalar::from_int(5));
        assert_eq!(j_transform(&j, &c).unwrap(), c);
    }

    #[test]
    fn wedge_power_examples() {
        let w = &e(4, &[1, 2]) + &e(4, &[3, 4]);
        assert_eq!(wedge_power(&w, 2), e(4, &[1, 2, 3, 4]).scale(&Scalar::from_int(2)));
        assert_eq!(wedge_power(&w, 0), KForm::constant(4, Scalar::one()));
        assert_eq!(wedge_power(&w, 1), w);
    }

    #[test]
    fn evaluation_is_determinant() {
        let a = e(3, &[1, 2]);
        let v = [Vector::from_ints(&[1, 2, 0]), Vector::from_ints(&[3, 4, 5])];
        assert_eq!(a.evaluate(&v).unwrap(), Scalar::from_int(-2));
    }

    #[test]
    fn unsorted_terms_take_sign() {
        let mut f = KForm::zero(2, 3);
        f.add_term(vec![1, 0], Scalar::one());
        assert_eq!(f, -&e(3, &[1, 2]));
        f.add_term(vec![0, 1], Scalar::one());
        assert!(f.is_zero());
    }
}
