//! Random instances for randomized checks.
//!
//! All coefficients are small integers, so every instance is exact.

use rand::Rng;

use crate::constructions::{admissible_derivations, nilpotent_family_hermitian, ExtensionSpec, Rho};
use crate::error::Result;
use crate::exterior::KForm;
use crate::hermitian::{is_integrable, ComplexStructure, HermitianData, Metric};
use crate::liealg::{semidirect_product, verify_nilradical, LieAlgebra, NilradicalVerdict};
use crate::linalg::{Endomorphism, Matrix, Subspace, Vector};
use crate::scalar::Scalar;

pub fn small_int<R: Rng>(rng: &mut R, r: i64) -> Scalar {
    Scalar::from_int(rng.gen_range(-r..=r))
}

/// `Σ c_i basis_i` with `c_i ∈ [−r, r]`.
pub fn combination<R: Rng>(rng: &mut R, basis: &[Matrix], n: usize, r: i64) -> Matrix {
    let mut out = Matrix::zeros(n, n);
    for b in basis {
        let c = small_int(rng, r);
        if !c.is_zero() {
            out = &out + &b.scale(&c);
        }
    }
    out
}

fn flatten(m: &Matrix) -> Vec<Scalar> {
    (0..m.rows())
        .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
        .map(|(r, c)| m[(r, c)].clone())
        .collect()
}

/// Basis of the elements of `span(space)` commuting with every matrix in `with`.
pub fn commutant(space: &[Matrix], with: &[Matrix]) -> Vec<Matrix> {
    if space.is_empty() {
        return Vec::new();
    }
    let n = space[0].rows();
    if with.is_empty() {
        return space.to_vec();
    }
    let cols: Vec<Vec<Scalar>> = space
        .iter()
        .map(|d| with.iter().flat_map(|t| flatten(&d.commutator(t))).collect())
        .collect();
    let m = Matrix::from_fn(cols[0].len(), space.len(), |r, c| cols[c][r].clone());
    m.kernel()
        .iter()
        .map(|x| {
            let mut out = Matrix::zeros(n, n);
            for (d, c) in space.iter().zip(x.iter()) {
                if !c.is_zero() {
                    out = &out + &d.scale(c);
                }
            }
            out
        })
        .collect()
}

/// A member of the six-dimensional SKT nilpotent family with random
/// parameters; each of the four isomorphism classes is drawn equally often.
pub fn nilpotent_skt_base<R: Rng>(rng: &mut R) -> HermitianData {
    let half = Scalar::from_frac(1, 2);
    let nonzero = |rng: &mut R| loop {
        let q = Scalar::from_frac(rng.gen_range(-6..=6), rng.gen_range(1..=4));
        if !q.is_zero() {
            break q;
        }
    };
    let (rho, gamma, delta) = match rng.gen_range(0..4) {
        0 => (Rho::Zero, Scalar::zero(), nonzero(rng)),
        1 => (Rho::Zero, Scalar::zero(), Scalar::zero()),
        2 => (Rho::One, half, &Scalar::sqrt_of(3) * &Scalar::from_frac(if rng.gen() { 1 } else { -1 }, 2)),
        _ => loop {
            let d = Scalar::from_frac(rng.gen_range(-3..=3), rng.gen_range(1..=4));
            if &(&d * &d) * &Scalar::from_int(4) != Scalar::from_int(3) {
                break (Rho::One, half, d);
            }
        },
    };
    nilpotent_family_hermitian(rho, &gamma, &delta).expect("family is Hermitian")
}

/// Random pairwise commuting elements of `Der ∩ so ∩ sp` of the base, `2k` of them.
pub fn extension_spec<R: Rng>(rng: &mut R, base: HermitianData, k: usize) -> ExtensionSpec {
    let n = base.algebra().dim();
    let space = admissible_derivations(&base);
    let mut theta: Vec<Matrix> = Vec::new();
    for _ in 0..2 * k {
        let allowed = commutant(&space, &theta);
        theta.push(combination(rng, &allowed, n, 3));
    }
    ExtensionSpec::new(base, theta)
}

/// `g₀ + Jᵀ g₀ J` for a random positive definite `g₀ = MᵀM + I`.
pub fn compatible_metric<R: Rng>(rng: &mut R, j: &ComplexStructure) -> Metric {
    let n = j.dim();
    let m = Matrix::from_fn(n, n, |_, _| if rng.gen_bool(0.3) { small_int(rng, 1) } else { Scalar::zero() });
    let g0 = &(&m.transpose() * &m) + &Matrix::identity(n);
    let jm = j.matrix();
    Metric::new(&g0 + &(&(&jm.transpose() * &g0) * jm)).expect("sum of positive definite forms")
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BaseKind {
    /// ℝ⁴ or ℝ⁶.
    Abelian,
    /// Abelian, `h₃ ⊕ ℝ`, or a six-dimensional SKT nilpotent algebra.
    Any,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Codim2Options {
    pub base: BaseKind,
    /// `A, B` skew and commuting with `J_h` for the identity metric.
    pub skew: bool,
    /// Allow `[U, JU] ≠ 0`.
    pub bracket: bool,
    /// Random compatible metric instead of the identity.
    pub random_metric: bool,
}

/// Solvable Hermitian algebra `h ⋊ span(U, JU)` with integrable `J` and
/// `J`-invariant nilradical `h` (the first coordinates).
#[derive(Clone, Debug)]
pub struct Codim2Instance {
    pub hermitian: HermitianData,
    pub nilradical: Subspace,
    pub a: Endomorphism,
    pub b: Endomorphism,
    pub v: Vector,
}

fn abelian_base(n: usize) -> HermitianData {
    HermitianData::new(LieAlgebra::abelian(n), ComplexStructure::standard(n).unwrap(), Metric::identity(n))
        .unwrap()
}

fn h3_plus_r() -> HermitianData {
    let mut des = vec![KForm::zero(2, 4); 4];
    des[3].add_term(vec![0, 1], Scalar::one());
    let alg = LieAlgebra::from_differentials(&des).unwrap().validate().unwrap();
    HermitianData::new(alg, ComplexStructure::standard(4).unwrap(), Metric::identity(4)).unwrap()
}

fn pick_base<R: Rng>(rng: &mut R, kind: BaseKind) -> HermitianData {
    match (kind, rng.gen_range(0..4)) {
        (BaseKind::Abelian, 0 | 1) | (BaseKind::Any, 0) => abelian_base(4),
        (BaseKind::Abelian, _) | (BaseKind::Any, 1) => abelian_base(6),
        (BaseKind::Any, 2) => h3_plus_r(),
        _ => nilpotent_skt_base(rng),
    }
}

/// One attempt; `None` when the draw misses a hypothesis (nilradical larger
/// than `h`, unsolvable constraints).
pub fn codim2_instance<R: Rng>(rng: &mut R, opts: Codim2Options) -> Result<Option<Codim2Instance>> {
    let base = pick_base(rng, opts.base);
    let h = base.algebra().clone();
    let m = h.dim();
    let jh = base.complex_structure().matrix().clone();
    let space = if opts.skew {
        admissible_derivations(&base)
    } else {
        h.derivations()
    };
    if space.is_empty() {
        return Ok(None);
    }
    // a generic A rarely admits a partner B; favour J-linear A
    let a = if opts.skew || rng.gen_bool(0.3) {
        combination(rng, &space, m, 2)
    } else {
        combination(rng, &commutant(&space, std::slice::from_ref(&jh)), m, 2)
    };
    // B = Σ y_i D_i, V = Σ z_j e_j:
    //   [J, B] = −[J, A] J   and   [A, B] = ad_V
    let ads: Vec<Matrix> = if opts.bracket {
        (0..m).map(|j| h.ad(&Vector::basis(m, j))).collect()
    } else {
        Vec::new()
    };
    let unknowns = space.len() + ads.len();
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(unknowns);
    for d in &space {
        let mut c = flatten(&jh.commutator(d));
        c.extend(flatten(&a.commutator(d)));
        cols.push(c);
    }
    for ad in &ads {
        let mut c = vec![Scalar::zero(); m * m];
        c.extend(flatten(&ad.scale(&-Scalar::one())));
        cols.push(c);
    }
    let rows = 2 * m * m;
    let system = Matrix::from_fn(rows, unknowns, |r, c| cols[c][r].clone());
    let mut rhs = flatten(&(&jh.commutator(&a) * &jh).scale(&-Scalar::one()));
    rhs.extend(vec![Scalar::zero(); m * m]);
    let Some(mut x) = system.solve(&Vector(rhs)) else {
        return Ok(None);
    };
    for k in system.kernel() {
        x.axpy(&small_int(rng, 2), &k);
    }
    let mut b = Matrix::zeros(m, m);
    for (d, c) in space.iter().zip(x.iter()) {
        b = &b + &d.scale(c);
    }
    let mut v = Vector::zeros(m);
    for (j, c) in x.iter().skip(space.len()).enumerate() {
        v[j] = c.clone();
    }
    if opts.bracket {
        for z in h.center().basis() {
            v.axpy(&small_int(rng, 1), z);
        }
    }
    let extra = if v.is_zero() { vec![] } else { vec![((0, 1), v.clone())] };
    let alg = semidirect_product(&h, &[a.clone(), b.clone()], &extra)?.validate()?;
    let j = ComplexStructure::new(jh.direct_sum(ComplexStructure::standard(2)?.matrix()))?;
    if !is_integrable(&alg, &j) {
        return Ok(None);
    }
    let nil = Subspace::coordinate(m + 2, &(0..m).collect::<Vec<_>>());
    if verify_nilradical(&alg, &nil)? != NilradicalVerdict::IsNilradical {
        return Ok(None);
    }
    let g = if opts.random_metric {
        compatible_metric(rng, &j)
    } else {
        Metric::identity(m + 2)
    };
    Ok(Some(Codim2Instance {
        hermitian: HermitianData::new(alg, j, g)?,
        nilradical: nil,
        a,
        b,
        v,
    }))
}

/// Draws until `count` instances are found or `max_attempts` is exhausted.
pub fn codim2_instances<R: Rng>(
    rng: &mut R,
    opts: Codim2Options,
    count: usize,
    max_attempts: usize,
) -> Result<Vec<Codim2Instance>> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..max_attempts {
        if out.len() == count {
            break;
        }
        if let Some(inst) = codim2_instance(rng, opts)? {
            out.push(inst);
        }
    }
    Ok(out)
}
