//! Nilradical certification for ideals of codimension at most two.

use std::fmt;

use super::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Evidence that a strictly larger nilpotent ideal exists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Certificate {
    /// `x ∉ h` with `ad_x|_h` nilpotent.
    Witness(Vector),
    /// The characteristic-polynomial coefficients of `t·ad_{u₁} + ad_{u₂}`
    /// restricted to `h` share a squarefree factor of this degree with no
    /// root in the working field.
    NonconstantGcd { degree: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NilradicalVerdict {
    IsNilradical,
    NotIdeal,
    NotNilpotent,
    MissesDerived,
    LargerNilpotentIdeal(Certificate),
}

impl NilradicalVerdict {
    pub fn code(&self) -> &'static str {
        match self {
            NilradicalVerdict::IsNilradical => "IS_NILRADICAL",
            NilradicalVerdict::NotIdeal => "NOT_IDEAL",
            NilradicalVerdict::NotNilpotent => "NOT_NILPOTENT",
            NilradicalVerdict::MissesDerived => "MISSES_DERIVED",
            NilradicalVerdict::LargerNilpotentIdeal(_) => "LARGER_NILPOTENT_IDEAL",
        }
    }
}

impl fmt::Display for NilradicalVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NilradicalVerdict::LargerNilpotentIdeal(Certificate::Witness(v)) => {
                write!(f, "{} witness {:?}", self.code(), v)
            }
            NilradicalVerdict::LargerNilpotentIdeal(Certificate::NonconstantGcd { degree }) => {
                write!(
                    f,
                    "{} nonconstant gcd of minor forms (degree {degree})",
                    self.code()
                )
            }
            _ => f.write_str(self.code()),
        }
    }
}

fn restricted_ad(alg: &LieAlgebra, h: &Subspace, x: &Vector) -> Matrix {
    h.restrict(&alg.ad(x)).expect("h is an ideal")
}

/// Decides whether `h` is the nilradical of the solvable algebra `alg`.
pub fn verify_nilradical(alg: &LieAlgebra, h: &Subspace) -> Result<NilradicalVerdict> {
    alg.require_validated()?;
    if h.ambient() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: h.ambient(),
        });
    }
    if h.codim() > 2 {
        return Err(Error::UnsupportedCodim(h.codim()));
    }
    if !alg.is_solvable() {
        return Err(Error::NotSolvable);
    }
    if !alg.is_ideal(h) {
        return Ok(NilradicalVerdict::NotIdeal);
    }
    if !alg.is_nilpotent_subalgebra(h) {
        return Ok(NilradicalVerdict::NotNilpotent);
    }
    let derived = &alg.derived_series()[1.min(alg.derived_series().len() - 1)];
    if !h.contains_subspace(derived) {
        return Ok(NilradicalVerdict::MissesDerived);
    }
    let comp = h.coordinate_complement();
    let witness = |v: Vector| Ok(NilradicalVerdict::LargerNilpotentIdeal(Certificate::Witness(v)));
    match comp.as_slice() {
        [] => Ok(NilradicalVerdict::IsNilradical),
        [u] => {
            if restricted_ad(alg, h, u).is_nilpotent() {
                witness(u.clone())
            } else {
                Ok(NilradicalVerdict::IsNilradical)
            }
        }
        [u1, u2] => {
            let a = restricted_ad(alg, h, u1);
            if a.is_nilpotent() {
                return witness(u1.clone());
            }
            let b = restricted_ad(alg, h, u2);
            let m = h.dim();
            // char poly of t·A + B sampled at t = 0..m, coefficient by coefficient
            let samples: Vec<Vec<Scalar>> = (0..=m)
                .map(|t| (&a.scale(&Scalar::from_int(t as i64)) + &b).char_poly())
                .collect();
            let mut g = Poly::zero();
            for k in 0..m {
                let vals: Vec<Scalar> = samples.iter().map(|s| s[k].clone()).collect();
                g = g.gcd(&Poly::interpolate(&vals));
            }
            let g = g.squarefree_part();
            match g.degree() {
                Some(0) => Ok(NilradicalVerdict::IsNilradical),
                None => witness(u2.clone()),
                Some(degree) => {
                    let field = a.radicand().max(b.radicand());
                    match g.small_roots(field).into_iter().next() {
                        Some(t0) => {
                            let mut x = u2.clone();
                            x.axpy(&t0, u1);
                            witness(x)
                        }
                        None => Ok(NilradicalVerdict::LargerNilpotentIdeal(
                            Certificate::NonconstantGcd { degree },
                        )),
                    }
                }
            }
        }
        _ => unreachable!("codimension checked above"),
    }
}
