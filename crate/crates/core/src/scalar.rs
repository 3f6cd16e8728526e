//! Exact scalars in a real quadratic field ℚ(√d).
//!
//! A [`Scalar`] is `rat + surd·√d` with arbitrary-precision rational parts.
//! Pure rationals carry `radicand == 1` and a zero surd part; that form is
//! canonical, so derived equality is value equality.  Mixing two different
//! irrational radicands in one operation is a programming error and panics:
//! a computation lives in a single field fixed by its inputs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseScalarError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    rat: BigRational,
    surd: BigRational,
    radicand: u64,
}

fn rat_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// True when `d` has no repeated prime factor.
pub fn is_square_free(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut p = 2u64;
    let mut m = d;
    while p * p <= m {
        if m.is_multiple_of(p * p) {
            return false;
        }
        if m.is_multiple_of(p) {
            m /= p;
        }
        p += 1;
    }
    true
}

fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = integer_sqrt(q.numer())?;
    let d = integer_sqrt(q.denom())?;
    Some(BigRational::new(n, d))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            rat: BigRational::zero(),
            surd: BigRational::zero(),
            radicand: 1,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(rat_int(v))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar {
            rat: q,
            surd: BigRational::zero(),
            radicand: 1,
        }
    }

    /// `rat + surd·√d`.  `d` must be square-free; `d == 1` folds the surd
    /// into the rational part.
    pub fn new(rat: BigRational, surd: BigRational, d: u64) -> Self {
        assert!(is_square_free(d), "radicand {d} is not square-free");
        if d == 1 {
            return Self::from_rational(rat + surd);
        }
        Scalar {
            rat,
            surd,
            radicand: d,
        }
        .canonical()
    }

    /// `√d` itself.
    pub fn sqrt_of(d: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    fn canonical(mut self) -> Self {
        if self.surd.is_zero() {
            self.radicand = 1;
        }
        self
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    /// Radicand of the field this value needs; 1 for rationals.
    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.surd.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.surd.is_zero() && self.rat.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rat)
    }

    fn join(a: u64, b: u64) -> u64 {
        match (a, b) {
            (1, r) | (r, 1) => r,
            (r, s) if r == s => r,
            (r, s) => panic!("mixed quadratic fields: sqrt({r}) and sqrt({s})"),
        }
    }

    /// Sign of `rat + surd·√d`: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.rat);
        let sb = sign_of(&self.surd);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare rat² with surd²·d
        let lhs = &self.rat * &self.rat;
        let rhs = &self.surd * &self.surd * rat_int(self.radicand as i64);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `rat − surd·√d`.
    pub fn conjugate(&self) -> Self {
        Scalar {
            rat: self.rat.clone(),
            surd: -self.surd.clone(),
            radicand: self.radicand,
        }
    }

    /// Field norm `rat² − d·surd²`, always rational.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - &self.surd * &self.surd * rat_int(self.radicand as i64)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero scalar");
        let n = self.norm();
        let c = self.conjugate();
        Scalar {
            rat: c.rat / &n,
            surd: c.surd / &n,
            radicand: c.radicand,
        }
        .canonical()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Square root inside ℚ(√field_radicand), if it exists there.
    pub fn sqrt_in(&self, field_radicand: u64) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let d = Self::join(self.radicand, field_radicand);
        if self.is_rational() {
            if let Some(r) = rational_sqrt(&self.rat) {
                return Some(Self::from_rational(r));
            }
            if d > 1 {
                // q = d·s²  ⇒  √q = s·√d
                let s2 = &self.rat / rat_int(d as i64);
                if let Some(s) = rational_sqrt(&s2) {
                    return Some(Self::new(BigRational::zero(), s, d));
                }
            }
            return None;
        }
        // (p + q√d)² = p² + d q² + 2pq√d; p² solves x² − a x + d b²/4 = 0
        let a = &self.rat;
        let b = &self.surd;
        let disc = rational_sqrt(&self.norm())?;
        let two = rat_int(2);
        for cand in [(a + &disc) / &two, (a - &disc) / &two] {
            if cand.is_positive() {
                if let Some(p) = rational_sqrt(&cand) {
                    let q = b / (&two * &p);
                    let root = Self::new(p, q, d);
                    if root.is_positive() && &root * &root == *self {
                        return Some(root);
                    }
                }
            }
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        self.rat.to_f64().unwrap_or(f64::NAN)
            + self.surd.to_f64().unwrap_or(f64::NAN) * (self.radicand as f64).sqrt()
    }
}

fn sign_of(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar {
            rat: &self.rat + &o.rat,
            surd: &self.surd + &o.surd,
            radicand: Scalar::join(self.radicand, o.radicand),
        }
        .canonical()
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar {
            rat: &self.rat - &o.rat,
            surd: &self.surd - &o.surd,
            radicand: Scalar::join(self.radicand, o.radicand),
        }
        .canonical()
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let d = Scalar::join(self.radicand, o.radicand);
        if self.surd.is_zero() && o.surd.is_zero() {
            return Scalar::from_rational(&self.rat * &o.rat);
        }
        Scalar {
            rat: &self.rat * &o.rat + &self.surd * &o.surd * rat_int(d as i64),
            surd: &self.rat * &o.surd + &self.surd * &o.rat,
            radicand: d,
        }
        .canonical()
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        if o.is_rational() {
            assert!(!o.rat.is_zero(), "division by zero scalar");
            return Scalar {
                rat: &self.rat / &o.rat,
                surd: &self.surd / &o.rat,
                radicand: self.radicand,
            }
            .canonical();
        }
        self * &o.recip()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            rat: -self.rat,
            surd: -self.surd,
            radicand: self.radicand,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact text form: `p`, `p/q`, `r/s*sqrt(d)` or `p/q+r/s*sqrt(d)`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            return write!(f, "{}", fmt_rat(&self.rat));
        }
        let surd = format!("{}*sqrt({})", fmt_rat(&self.surd.abs()), self.radicand);
        if self.rat.is_zero() {
            if self.surd.is_negative() {
                write!(f, "-{surd}")
            } else {
                write!(f, "{surd}")
            }
        } else {
            let sign = if self.surd.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}", fmt_rat(&self.rat), sign, surd)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses an unsigned rational literal `p` or `p/q` at the start of `s`;
/// returns the value and the number of bytes consumed.
pub(crate) fn parse_rational_prefix(s: &str) -> Option<(BigRational, usize)> {
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i == 0 {
        return None;
    }
    let num: BigInt = s[..i].parse().ok()?;
    if i < bytes.len() && bytes[i] == b'/' {
        let mut j = i + 1;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j == i + 1 {
            return None;
        }
        let den: BigInt = s[i + 1..j].parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some((BigRational::new(num, den), j));
    }
    Some((BigRational::from_integer(num), i))
}

/// Parses `sqrt(d)` at the start of `s`.
pub(crate) fn parse_sqrt_prefix(s: &str) -> Option<(u64, usize)> {
    let rest = s.strip_prefix("sqrt(")?;
    let close = rest.find(')')?;
    let d: u64 = rest[..close].trim().parse().ok()?;
    Some((d, 5 + close + 1))
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Accepts signed sums of terms `q`, `q*sqrt(d)` and `sqrt(d)`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(ParseScalarError::new(text, "empty"));
        }
        let mut acc = Scalar::zero();
        let mut pos = 0;
        let mut first = true;
        while pos < s.len() {
            let mut sign = 1;
            match s.as_bytes()[pos] {
                b'+' => pos += 1,
                b'-' => {
                    sign = -1;
                    pos += 1
                }
                _ if !first => return Err(ParseScalarError::new(text, "expected '+' or '-'")),
                _ => {}
            }
            first = false;
            let mut coef = BigRational::one();
            let mut had_number = false;
            if let Some((q, used)) = parse_rational_prefix(&s[pos..]) {
                coef = q;
                pos += used;
                had_number = true;
                if s[pos..].starts_with("*") {
                    pos += 1;
                    if !s[pos..].starts_with("sqrt(") {
                        return Err(ParseScalarError::new(text, "expected sqrt(d) after '*'"));
                    }
                }
            }
            let mut radicand = 1;
            if let Some((d, used)) = parse_sqrt_prefix(&s[pos..]) {
                if !is_square_free(d) {
                    return Err(ParseScalarError::new(text, "radicand must be square-free"));
                }
                radicand = d;
                pos += used;
            } else if !had_number {
                return Err(ParseScalarError::new(text, "expected a number"));
            }
            if sign < 0 {
                coef = -coef;
            }
            let term = if radicand == 1 {
                Scalar::from_rational(coef)
            } else {
                Scalar::new(BigRational::zero(), coef, radicand)
            };
            if acc.radicand != 1 && term.radicand != 1 && acc.radicand != term.radicand {
                return Err(ParseScalarError::new(text, "mixed radicands"));
            }
            acc += &term;
        }
        Ok(acc)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Scalar;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an exact scalar string or an integer")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Scalar, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar::from_int(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Scalar, E> {
                i64::try_from(v)
                    .map(Scalar::from_int)
                    .map_err(|_| E::custom("integer out of range"))
            }
        }
        d.deserialize_any(V)
    }
}
