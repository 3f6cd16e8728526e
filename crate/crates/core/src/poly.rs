//! Univariate polynomials over [`Scalar`].

use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly(Vec<Scalar>);

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.0.last()
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        self.0
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| &(&acc * t) + c)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.recip();
                Poly(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.leading().expect("nonzero").recip();
        let mut r = self.0.clone();
        let mut q = vec![Scalar::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let shift = r.len() - 1 - dd;
            let c = &r[r.len() - 1] * &lead_inv;
            for (i, d) in divisor.0.iter().enumerate() {
                let v = &r[shift + i] - &(&c * d);
                r[shift + i] = v;
            }
            r.pop();
            q[shift] = c;
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Scalar::from_int(i as i64))
                .collect(),
        )
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn squarefree_part(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Roots lying in ℚ(√d) for polynomials of degree ≤ 2.
    pub fn small_roots(&self, radicand: u64) -> Vec<Scalar> {
        match self.degree() {
            Some(1) => vec![-(&self.0[0] / &self.0[1])],
            Some(2) => {
                let (c, b, a) = (&self.0[0], &self.0[1], &self.0[2]);
                let disc = &(b * b) - &(&(a * c) * &Scalar::from_int(4));
                let Some(r) = disc.sqrt_in(radicand) else {
                    return Vec::new();
                };
                let two_a = a * &Scalar::from_int(2);
                let mut roots = vec![&(-b + r.clone()) / &two_a, &(-b - r) / &two_a];
                roots.dedup();
                roots
            }
            _ => Vec::new(),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The polynomial of degree ≤ `values.len() − 1` taking `values[i]` at `t = i`.
    pub fn interpolate(values: &[Scalar]) -> Poly {
        let m = values.len();
        if m == 0 {
            return Poly::zero();
        }
        let vander = Matrix::from_fn(m, m, |r, c| Scalar::from_int(r as i64).pow(c as u32));
        let coeffs = vander
            .solve(&Vector(values.to_vec()))
            .expect("Vandermonde matrix at distinct nodes is invertible");
        Poly::new(coeffs.0)
    }
}
