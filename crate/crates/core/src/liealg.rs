//! Lie algebras given by structure constants.
//!
//! Brackets are stored for basis pairs `i < j`.  The Chevalley–Eilenberg
//! differential uses `de(x, y) = −e([x, y])`, so a structure-equation list
//! `(de¹, …, deⁿ)` determines `[e_i, e_j] = −Σ_k (coefficient of e^{ij} in
//! de^k)·e_k`.

use crate::error::{Error, Result};
use crate::exterior::{wedge, KForm};
use crate::linalg::{Endomorphism, Matrix, Subspace, Vector};
use crate::scalar::Scalar;

pub mod nilradical;

pub use nilradical::{verify_nilradical, NilradicalVerdict};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LieAlgebra {
    dim: usize,
    /// `[e_i, e_j]` for `i < j`, indexed by [`pair_index`].
    table: Vec<Vector>,
    labels: Vec<String>,
    validated: bool,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl LieAlgebra {
    /// The abelian algebra of dimension `n` (validated).
    pub fn abelian(n: usize) -> Self {
        LieAlgebra {
            dim: n,
            table: vec![Vector::zeros(n); n * n.saturating_sub(1) / 2],
            labels: (1..=n).map(|i| format!("e{i}")).collect(),
            validated: true,
        }
    }

    /// Unvalidated algebra from basis brackets `([i, j], value)` (0-based);
    /// pairs not listed bracket to zero.  Later entries for the same pair
    /// overwrite earlier ones; `i > j` entries are stored antisymmetrically.
    pub fn from_brackets(n: usize, brackets: &[((usize, usize), Vector)]) -> Result<Self> {
        let mut alg = Self::abelian(n);
        alg.validated = false;
        for ((i, j), v) in brackets {
            alg.set_bracket(*i, *j, v.clone())?;
        }
        Ok(alg)
    }

    fn set_bracket(&mut self, i: usize, j: usize, v: Vector) -> Result<()> {
        let n = self.dim;
        if i >= n || j >= n {
            return Err(Error::InvalidArgument(format!(
                "basis index out of range in bracket [{}, {}]",
                i + 1,
                j + 1
            )));
        }
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.table[pair_index(n, i, j)] = v,
            std::cmp::Ordering::Greater => self.table[pair_index(n, j, i)] = -&v,
            std::cmp::Ordering::Equal if !v.is_zero() => {
                return Err(Error::InvalidArgument(format!(
                    "[e{0}, e{0}] must vanish",
                    i + 1
                )))
            }
            std::cmp::Ordering::Equal => {}
        }
        self.validated = false;
        Ok(())
    }

    /// Unvalidated algebra from the differentials `de¹, …, deⁿ`.
    pub fn from_differentials(des: &[KForm]) -> Result<Self> {
        let n = des.len();
        let mut alg = Self::abelian(n);
        alg.validated = false;
        for (k, de) in des.iter().enumerate() {
            if de.dim() != n || (de.degree() != 2 && !de.is_zero()) {
                return Err(Error::InvalidArgument(format!(
                    "de^{} must be a 2-form on the {n}-dimensional algebra",
                    k + 1
                )));
            }
            for (idx, c) in de.terms() {
                let slot = &mut alg.table[pair_index(n, idx[0], idx[1])];
                slot[k] -= c;
            }
        }
        Ok(alg)
    }

    /// Checks the Jacobi identity and marks the algebra validated.
    pub fn validate(mut self) -> Result<Self> {
        if let Some(t) = self.jacobi_check() {
            return Err(Error::Jacobi(t));
        }
        self.validated = true;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub(crate) fn require_validated(&self) -> Result<()> {
        if self.validated {
            Ok(())
        } else {
            Err(Error::NotValidated)
        }
    }

    /// `[e_i, e_j]` (0-based).
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.table[pair_index(self.dim, i, j)].clone(),
            std::cmp::Ordering::Greater => -&self.table[pair_index(self.dim, j, i)],
            std::cmp::Ordering::Equal => Vector::zeros(self.dim),
        }
    }

    /// Structure constant `c^k_{ij}`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.bracket_basis(i, j)[k].clone()
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        for v in [x, y] {
            if v.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: v.dim(),
                });
            }
        }
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim;
        let mut out = Vector::zeros(n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if i == j || y[j].is_zero() {
                    continue;
                }
                let b = if i < j {
                    &self.table[pair_index(n, i, j)]
                } else {
                    &self.table[pair_index(n, j, i)]
                };
                if b.is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                out.axpy(&(if i < j { c } else { -c }), b);
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(Vector::is_zero)
    }

    /// First basis triple violating Jacobi, or `None` if the identity holds.
    pub fn jacobi_check(&self) -> Option<[usize; 3]> {
        let n = self.dim;
        let e = |i| Vector::basis(n, i);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = self.bracket_unchecked(&e(i), &self.bracket_basis(j, k));
                    let b = self.bracket_unchecked(&e(j), &self.bracket_basis(k, i));
                    let c = self.bracket_unchecked(&e(k), &self.bracket_basis(i, j));
                    if !(&(&a + &b) + &c).is_zero() {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    /// `ad_x` as a matrix (column `j` is `[x, e_j]`).
    pub fn ad(&self, x: &Vector) -> Endomorphism {
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.bracket_unchecked(x, &Vector::basis(self.dim, j)))
            .collect();
        Matrix::from_columns(self.dim, &cols)
    }

    /// `de^k` for each basis covector.
    pub fn differentials(&self) -> Vec<KForm> {
        let n = self.dim;
        let mut des: Vec<KForm> = (0..n).map(|_| KForm::zero(2, n)).collect();
        for i in 0..n {
            for j in i + 1..n {
                for (k, c) in self.table[pair_index(n, i, j)].iter().enumerate() {
                    if !c.is_zero() {
                        des[k].add_term(vec![i, j], -c.clone());
                    }
                }
            }
        }
        des
    }

    /// Chevalley–Eilenberg differential, extended from 1-forms by the graded
    /// Leibniz rule.
    pub fn ce_differential(&self, a: &KForm) -> Result<KForm> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: a.dim(),
            });
        }
        let n = self.dim;
        let des = self.differentials();
        let mut out = KForm::zero(a.degree() + 1, n);
        if a.degree() + 1 > n {
            return Ok(out);
        }
        for (idx, c) in a.terms() {
            for (m, &i) in idx.iter().enumerate() {
                if des[i].is_zero() {
                    continue;
                }
                let sign = if m % 2 == 0 { c.clone() } else { -c.clone() };
                let mut prod = KForm::constant(n, sign);
                for (p, &t) in idx.iter().enumerate() {
                    let factor = if p == m {
                        des[i].clone()
                    } else {
                        KForm::basis(n, &[t])
                    };
                    prod = wedge(&prod, &factor)?;
                }
                out = out.try_add(&prod)?;
            }
        }
        Ok(out)
    }

    /// `[S, T] = span{[s, t]}`.
    pub fn bracket_subspaces(&self, s: &Subspace, t: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for a in s.basis() {
            for b in t.basis() {
                let v = self.bracket_unchecked(a, b);
                if !v.is_zero() {
                    vs.push(v);
                }
            }
        }
        Subspace::span(self.dim, &vs)
    }

    /// `g, [g,g], [g¹,g¹], …` up to and including the stable term.
    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::full(self.dim)];
        loop {
            let last = series.last().expect("non-empty");
            let next = self.bracket_subspaces(last, last);
            if next == *last {
                return series;
            }
            let done = next.is_zero();
            series.push(next);
            if done {
                return series;
            }
        }
    }

    /// `g, [g,g], [g,[g,g]], …` up to and including the stable term.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        self.lower_central_series_of(&Subspace::full(self.dim))
    }

    /// Lower central series of the subalgebra `h`: `h, [h,h], [h,[h,h]], …`.
    pub fn lower_central_series_of(&self, h: &Subspace) -> Vec<Subspace> {
        let mut series = vec![h.clone()];
        loop {
            let last = series.last().expect("non-empty");
            let next = self.bracket_subspaces(h, last);
            if next == *last {
                return series;
            }
            let done = next.is_zero();
            series.push(next);
            if done {
                return series;
            }
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(Subspace::is_zero)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_some_and(Subspace::is_zero)
    }

    /// Whether the subalgebra `h` (assumed closed under the bracket) is nilpotent.
    pub fn is_nilpotent_subalgebra(&self, h: &Subspace) -> bool {
        self.lower_central_series_of(h).last().is_some_and(Subspace::is_zero)
    }

    /// Nilpotency step of `h`, `None` if not nilpotent.
    pub fn nilpotency_step(&self, h: &Subspace) -> Option<usize> {
        let s = self.lower_central_series_of(h);
        s.last()
            .is_some_and(Subspace::is_zero)
            .then(|| s.len() - 1)
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        s.contains_subspace(&self.bracket_subspaces(s, s))
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        s.contains_subspace(&self.bracket_subspaces(&Subspace::full(self.dim), s))
    }

    pub fn center(&self) -> Subspace {
        self.centralizer(&Subspace::full(self.dim))
    }

    /// `{x ∈ g : [x, s] = 0 ∀ s ∈ S}`.
    pub fn centralizer(&self, s: &Subspace) -> Subspace {
        let n = self.dim;
        let mut rows = Vec::new();
        for b in s.basis() {
            let m = self.ad(b); // [b, x] = ad_b x; need ad_b x = 0
            for r in 0..n {
                rows.push(m.row(r).0);
            }
        }
        if rows.is_empty() {
            return Subspace::full(n);
        }
        let m = Matrix::from_rows(rows).expect("rectangular");
        Subspace::span(n, &m.kernel())
    }

    /// `tr ad_{e_i} = 0` for every basis vector.
    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|i| self.ad(&Vector::basis(self.dim, i)).trace().is_zero())
    }

    /// `D[x, y] = [Dx, y] + [x, Dy]` on all basis pairs.
    pub fn is_derivation(&self, d: &Endomorphism) -> bool {
        let n = self.dim;
        if !d.is_square() || d.rows() != n {
            return false;
        }
        let cols: Vec<Vector> = (0..n).map(|j| d.column(j)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = d.apply(&self.bracket_basis(i, j));
                let e_i = Vector::basis(n, i);
                let e_j = Vector::basis(n, j);
                let rhs = &self.bracket_unchecked(&cols[i], &e_j) + &self.bracket_unchecked(&e_i, &cols[j]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Basis of the derivation algebra `Der(g)` (as matrices).
    pub fn derivations(&self) -> Vec<Endomorphism> {
        let n = self.dim;
        // unknown D[a][b] at column a*n + b; equation per (i<j, k)
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let bij = self.bracket_basis(i, j);
                for k in 0..n {
                    let mut row = vec![Scalar::zero(); n * n];
                    // (D[e_i,e_j])_k = Σ_m D[k][m] b_ij[m]
                    for (m, c) in bij.iter().enumerate() {
                        if !c.is_zero() {
                            row[k * n + m] += c;
                        }
                    }
                    // − [De_i, e_j]_k = − Σ_m D[m][i] c^k_{mj}
                    for m in 0..n {
                        let c = self.constant(m, j, k);
                        if !c.is_zero() {
                            row[m * n + i] -= &c;
                        }
                        let c = self.constant(i, m, k);
                        if !c.is_zero() {
                            row[m * n + j] -= &c;
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let kernel = if rows.is_empty() {
            (0..n * n).map(|c| Vector::basis(n * n, c)).collect()
        } else {
            Matrix::from_rows(rows).expect("rectangular").kernel()
        };
        kernel
            .into_iter()
            .map(|v| Matrix::from_fn(n, n, |r, c| v[r * n + c].clone()))
            .collect()
    }

    /// The Lie algebra structure induced on the subalgebra `h`, written in
    /// the echelon basis of `h`.
    pub fn restrict(&self, h: &Subspace) -> Result<LieAlgebra> {
        let b = h.basis();
        let mut brackets = Vec::new();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let v = self.bracket_unchecked(&b[i], &b[j]);
                let coords = h.coordinates(&v).ok_or_else(|| {
                    Error::InvalidArgument("subspace is not closed under the bracket".into())
                })?;
                brackets.push(((i, j), coords));
            }
        }
        let alg = LieAlgebra::from_brackets(b.len(), &brackets)?;
        if self.validated {
            alg.validate()
        } else {
            Ok(alg)
        }
    }

    /// Direct sum with the abelian algebra ℝ^m (new basis vectors appended).
    pub fn direct_sum_abelian(&self, m: usize) -> LieAlgebra {
        let n = self.dim + m;
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let mut v = self.bracket_basis(i, j).0;
                v.resize(n, Scalar::zero());
                brackets.push(((i, j), Vector(v)));
            }
        }
        let mut out = LieAlgebra::from_brackets(n, &brackets).expect("in range");
        out.validated = self.validated;
        out
    }

    /// Largest radicand among the structure constants.
    pub fn radicand(&self) -> u64 {
        self.table
            .iter()
            .flat_map(|v| v.iter().map(Scalar::radicand))
            .max()
            .unwrap_or(1)
    }
}

/// `h ⋊_θ a`: new generators `U_1..U_m` appended after the basis of `h`,
/// with `[U_i, Y] = θ_i Y` and `[U_i, U_j] = extra(i, j)` (a vector of `h`).
pub fn semidirect_product(
    h: &LieAlgebra,
    theta: &[Endomorphism],
    extra: &[((usize, usize), Vector)],
) -> Result<LieAlgebra> {
    h.require_validated()?;
    let nh = h.dim();
    let m = theta.len();
    let n = nh + m;
    for (idx, t) in theta.iter().enumerate() {
        if !t.is_square() || t.rows() != nh {
            return Err(Error::DimensionMismatch {
                expected: nh,
                found: t.rows(),
            });
        }
        if !h.is_derivation(t) {
            return Err(Error::NotDerivation { index: idx });
        }
    }
    let mut v_table = vec![vec![Vector::zeros(nh); m]; m];
    for ((i, j), v) in extra {
        if *i >= m || *j >= m || i == j {
            return Err(Error::InvalidArgument(format!(
                "extra bracket indices ({}, {}) out of range",
                i + 1,
                j + 1
            )));
        }
        if v.dim() != nh {
            return Err(Error::DimensionMismatch {
                expected: nh,
                found: v.dim(),
            });
        }
        v_table[*i][*j] = v.clone();
        v_table[*j][*i] = -v;
    }
    for i in 0..m {
        for j in i + 1..m {
            let comm = theta[i].commutator(&theta[j]);
            let ad_v = h.ad(&v_table[i][j]);
            if comm != ad_v {
                return Err(Error::HomomorphismViolation(format!(
                    "[theta_{}, theta_{}] differs from ad of [U_{}, U_{}]",
                    i + 1,
                    j + 1,
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let lift = |v: &Vector| {
        let mut w = v.0.clone();
        w.resize(n, Scalar::zero());
        Vector(w)
    };
    let mut brackets = Vec::new();
    for i in 0..nh {
        for j in i + 1..nh {
            brackets.push(((i, j), lift(&h.bracket_basis(i, j))));
        }
    }
    for (a, t) in theta.iter().enumerate() {
        for y in 0..nh {
            brackets.push(((nh + a, y), lift(&t.column(y))));
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            brackets.push(((nh + i, nh + j), lift(&v_table[i][j])));
        }
    }
    let mut labels: Vec<String> = h.labels().to_vec();
    labels.extend((1..=m).map(|i| format!("U{i}")));
    let g = LieAlgebra::from_brackets(n, &brackets)?.with_labels(labels);
    g.validate().map_err(|e| match e {
        Error::Jacobi(t) => Error::HomomorphismViolation(format!(
            "Jacobi fails on ({}, {}, {})",
            t[0] + 1,
            t[1] + 1,
            t[2] + 1
        )),
        other => other,
    })
}
