//! Exact search for SKT or Kähler metrics compatible with a fixed complex
//! structure.
//!
//! The admissible fundamental forms are the kernel of a linear system; a
//! kernel point is a witness when the induced `g(x, y) = ω(x, Jy)` is
//! positive definite.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exterior::{j_transform, KForm};
use crate::hermitian::{is_integrable, ComplexStructure, Metric};
use crate::liealg::LieAlgebra;
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

pub const DEFAULT_BUDGET: usize = 512;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MetricKind {
    Skt,
    Kahler,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SearchStatus {
    Found,
    EmptyLinear,
    Unknown,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Found => "FOUND",
            SearchStatus::EmptyLinear => "EMPTY_LINEAR",
            SearchStatus::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub omega: Option<KForm>,
    pub metric: Option<Metric>,
    pub kernel_dim: usize,
    pub attempts: usize,
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn form_from_coords(n: usize, coords: &Vector) -> KForm {
    let mut f = KForm::zero(2, n);
    for ((i, j), c) in pairs(n).into_iter().zip(coords.iter()) {
        if !c.is_zero() {
            f.add_term(vec![i, j], c.clone());
        }
    }
    f
}

fn coords_of(form: &KForm, index: &[Vec<usize>]) -> Vec<Scalar> {
    index.iter().map(|idx| form.coeff(idx)).collect()
}

fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Basis of the 2-forms satisfying the (1,1) condition and the closedness
/// condition selected by `kind`.
pub fn solution_space(alg: &LieAlgebra, j: &ComplexStructure, kind: MetricKind) -> Result<Vec<KForm>> {
    alg.require_validated()?;
    if j.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: j.dim(),
        });
    }
    if !is_integrable(alg, j) {
        return Err(Error::NotIntegrable);
    }
    let n = alg.dim();
    let basis: Vec<KForm> = pairs(n).iter().map(|&(a, b)| KForm::basis(n, &[a, b])).collect();
    let idx2 = all_tuples(n, 2);
    let idx_closed = match kind {
        MetricKind::Skt => all_tuples(n, 4),
        MetricKind::Kahler => all_tuples(n, 3),
    };
    // one column per unknown
    let columns: Vec<Vec<Scalar>> = basis
        .iter()
        .map(|e| {
            let jm = j_transform(j.matrix(), e).expect("dims");
            let mut col = coords_of(&(&jm - e), &idx2);
            let dw = alg.ce_differential(e).expect("dims");
            let closed = match kind {
                MetricKind::Kahler => dw,
                MetricKind::Skt => {
                    let c = j_transform(j.matrix(), &dw).expect("dims");
                    alg.ce_differential(&c).expect("dims")
                }
            };
            col.extend(coords_of(&closed, &idx_closed));
            col
        })
        .collect();
    let rows = columns[0].len();
    let m = Matrix::from_fn(rows, columns.len(), |r, c| columns[c][r].clone());
    Ok(m.kernel().iter().map(|v| form_from_coords(n, v)).collect())
}

/// Whether `omega` lies in the span of `space`.
pub fn in_span(space: &[KForm], omega: &KForm) -> bool {
    let n = omega.dim();
    let idx = all_tuples(n, 2);
    let mut cols: Vec<Vector> = space.iter().map(|f| Vector(coords_of(f, &idx))).collect();
    let target = Vector(coords_of(omega, &idx));
    if cols.is_empty() {
        return target.is_zero();
    }
    let m = Matrix::from_columns(idx.len(), &cols);
    cols.clear();
    m.solve(&target).is_some()
}

/// `g(x, y) = ω(x, Jy)`, i.e. `g = W·J` with `W_{ab} = ω(e_a, e_b)`.
pub fn induced_metric(omega: &KForm, j: &ComplexStructure) -> Matrix {
    let n = omega.dim();
    let mut w = Matrix::zeros(n, n);
    for (idx, c) in omega.terms() {
        w[(idx[0], idx[1])] = c.clone();
        w[(idx[1], idx[0])] = -c.clone();
    }
    &w * j.matrix()
}

fn as_witness(omega: KForm, j: &ComplexStructure) -> Option<(KForm, Metric)> {
    let g = induced_metric(&omega, j);
    if !g.is_symmetric() || !g.is_positive_definite() {
        return None;
    }
    let g = Metric::new(g).ok()?;
    Some((omega, g))
}

fn combine(space: &[KForm], coeffs: &[Scalar], n: usize) -> KForm {
    let mut out = KForm::zero(2, n);
    for (f, c) in space.iter().zip(coeffs) {
        if !c.is_zero() {
            out = &out + &f.scale(c);
        }
    }
    out
}

/// Orthogonal projection of `target` onto the span of `space` in
/// coefficient coordinates.
fn project(space: &[KForm], target: &KForm) -> KForm {
    let n = target.dim();
    let idx = all_tuples(n, 2);
    let vecs: Vec<Vector> = space.iter().map(|f| Vector(coords_of(f, &idx))).collect();
    let t = Vector(coords_of(target, &idx));
    let k = vecs.len();
    let gram = Matrix::from_fn(k, k, |r, c| vecs[r].dot(&vecs[c]));
    let rhs = Vector(vecs.iter().map(|v| v.dot(&t)).collect());
    let x = gram.solve(&rhs).expect("basis is independent");
    combine(space, &x.0, n)
}

fn search(
    alg: &LieAlgebra,
    j: &ComplexStructure,
    kind: MetricKind,
    seed: u64,
    budget: usize,
) -> Result<SearchOutcome> {
    let space = solution_space(alg, j, kind)?;
    let n = alg.dim();
    let kernel_dim = space.len();
    let mut outcome = SearchOutcome {
        status: SearchStatus::EmptyLinear,
        omega: None,
        metric: None,
        kernel_dim,
        attempts: 0,
    };
    if kernel_dim == 0 {
        return Ok(outcome);
    }
    outcome.status = SearchStatus::Unknown;
    // ω₀ of the compatible metric I + JᵀJ
    let jm = j.matrix();
    let g0 = &Matrix::identity(n) + &(&jm.transpose() * jm);
    let w0 = &jm.transpose() * &g0;
    let mut omega0 = KForm::zero(2, n);
    for a in 0..n {
        for b in a + 1..n {
            omega0.add_term(vec![a, b], w0[(a, b)].clone());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..budget {
        outcome.attempts = attempt + 1;
        let candidate = if attempt == 0 {
            project(&space, &omega0)
        } else {
            let coeffs: Vec<Scalar> = (0..kernel_dim)
                .map(|_| Scalar::from_int(rng.gen_range(-3..=3)))
                .collect();
            combine(&space, &coeffs, n)
        };
        if candidate.is_zero() {
            continue;
        }
        if let Some((omega, g)) = as_witness(candidate, j) {
            outcome.status = SearchStatus::Found;
            outcome.omega = Some(omega);
            outcome.metric = Some(g);
            return Ok(outcome);
        }
    }
    Ok(outcome)
}

pub fn skt_metric_search(
    alg: &LieAlgebra,
    j: &ComplexStructure,
    seed: u64,
    budget: usize,
) -> Result<SearchOutcome> {
    search(alg, j, MetricKind::Skt, seed, budget)
}

pub fn kahler_metric_search(
    alg: &LieAlgebra,
    j: &ComplexStructure,
    seed: u64,
    budget: usize,
) -> Result<SearchOutcome> {
    search(alg, j, MetricKind::Kahler, seed, budget)
}
