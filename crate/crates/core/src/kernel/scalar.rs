//! Exact Gaussian rationals, complex floats and the `Scalar` wrapper.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::KernelError;

pub type Rational = BigRational;

/// `p/q` as a rational.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Always `p/q`, also for integers.
pub fn rational_to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Short human form: `3`, `-1/2`.
pub fn rational_to_short(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, KernelError> {
    let t = s.trim();
    let bad = || KernelError::Parse(format!("not a rational: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(KernelError::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p = BigInt::from_str(t.strip_prefix('+').unwrap_or(t)).map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// An element `re + i·im` of ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        GaussianRational::from_rational(Rational::one())
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational::new(re, Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::from_rational(rat_int(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        GaussianRational::from_rational(rat(p, q))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational::new(&self.re / &n, -&self.im / &n))
    }

    /// `i^k`.
    pub fn i_pow(k: u32) -> Self {
        match k % 4 {
            0 => GaussianRational::one(),
            1 => GaussianRational::i(),
            2 => -GaussianRational::one(),
            _ => -GaussianRational::i(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = GaussianRational::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Human form: `3`, `-1/2`, `2i`, `-i`, `(1+2i)`.
    pub fn to_short(&self) -> String {
        let im_part = |im: &Rational| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}i", rational_to_short(im))
            }
        };
        if self.im.is_zero() {
            rational_to_short(&self.re)
        } else if self.re.is_zero() {
            im_part(&self.im)
        } else {
            let im = im_part(&self.im);
            let sep = if im.starts_with('-') { "" } else { "+" };
            format!("({}{}{})", rational_to_short(&self.re), sep, im)
        }
    }

    /// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`, optionally parenthesized.
    pub fn parse(s: &str) -> Result<Self, KernelError> {
        let mut t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.starts_with('(') && t.ends_with(')') {
            t = t[1..t.len() - 1].to_string();
        }
        if t.is_empty() {
            return Err(KernelError::Parse("empty scalar".into()));
        }
        if let Some(body) = t.strip_suffix('i') {
            let split = body
                .char_indices()
                .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
                .map(|(k, _)| k)
                .last();
            let (re_s, im_s) = match split {
                Some(k) => (&body[..k], &body[k..]),
                None => ("", body),
            };
            let im = match im_s {
                "" | "+" => Rational::one(),
                "-" => -Rational::one(),
                other => parse_rational(other)?,
            };
            let re = if re_s.is_empty() {
                Rational::zero()
            } else {
                parse_rational(re_s)?
            };
            Ok(GaussianRational::new(re, im))
        } else {
            Ok(GaussianRational::from_rational(parse_rational(&t)?))
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_short())
    }
}

impl FromStr for GaussianRational {
    type Err = KernelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GaussianRational::parse(s)
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        GaussianRational::from_rational(r)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        let inv = o.inv().expect("division by zero Gaussian rational");
        self * &inv
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: &GaussianRational) -> GaussianRational {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, o: &GaussianRational) {
        *self = &*self * o;
    }
}

/// Numeric kind of a [`Scalar`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarKind {
    Exact,
    Float,
}

/// A scalar that is either exact or a complex float. Binary operations on
/// mixed kinds are refused; use [`Scalar::to_float`] to promote.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(GaussianRational),
    Float(Complex64),
}

impl Scalar {
    pub fn kind(&self) -> ScalarKind {
        match self {
            Scalar::Exact(_) => ScalarKind::Exact,
            Scalar::Float(_) => ScalarKind::Float,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(q) => q.to_complex(),
            Scalar::Float(c) => *c,
        }
    }

    /// Explicit promotion to the float kind.
    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_complex())
    }

    pub fn as_exact(&self) -> Option<&GaussianRational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(q.conj()),
            Scalar::Float(c) => Scalar::Float(c.conj()),
        }
    }

    pub fn is_zero_tol(&self, tol: f64) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(c) => c.norm() <= tol,
        }
    }

    fn binop(
        &self,
        o: &Scalar,
        fe: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational,
        ff: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Scalar, KernelError> {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(fe(a, b))),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(ff(*a, *b))),
            _ => Err(KernelError::KindMismatch),
        }
    }

    pub fn checked_add(&self, o: &Scalar) -> Result<Scalar, KernelError> {
        self.binop(o, |a, b| a + b, |a, b| a + b)
    }

    pub fn checked_sub(&self, o: &Scalar) -> Result<Scalar, KernelError> {
        self.binop(o, |a, b| a - b, |a, b| a - b)
    }

    pub fn checked_mul(&self, o: &Scalar) -> Result<Scalar, KernelError> {
        self.binop(o, |a, b| a * b, |a, b| a * b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(c) => write!(f, "{}{:+}i", c.re, c.im),
        }
    }
}

/// Commutative ring operations used by the generic algebra containers.
pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_gauss(c: &GaussianRational) -> Self;
    fn scaled(&self, c: &GaussianRational) -> Self {
        self.times(&Self::from_gauss(c))
    }
}

/// Fields admitting the Hermitian factorization.
pub trait Field: Ring {
    fn divided(&self, o: &Self) -> Self;
    fn conj(&self) -> Self;
    fn is_negligible(&self, tol: f64) -> bool;
    /// Sign of the real part, `Equal` when within the tolerance.
    fn re_sign(&self, tol: f64) -> Ordering;
    /// Compares absolute values of real parts.
    fn abs_re_cmp(&self, o: &Self) -> Ordering;
    fn is_finite(&self) -> bool;
    fn to_complex(&self) -> Complex64;
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_gauss(c: &GaussianRational) -> Self {
        c.clone()
    }
}

impl Field for GaussianRational {
    fn divided(&self, o: &Self) -> Self {
        self / o
    }
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        GaussianRational::is_zero(self)
    }
    fn re_sign(&self, _tol: f64) -> Ordering {
        if self.re.is_positive() {
            Ordering::Greater
        } else if self.re.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn abs_re_cmp(&self, o: &Self) -> Ordering {
        self.re.abs().cmp(&o.re.abs())
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn to_complex(&self) -> Complex64 {
        GaussianRational::to_complex(self)
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_gauss(c: &GaussianRational) -> Self {
        c.to_complex()
    }
}

impl Field for Complex64 {
    fn divided(&self, o: &Self) -> Self {
        self / o
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
    fn re_sign(&self, tol: f64) -> Ordering {
        if self.re > tol {
            Ordering::Greater
        } else if self.re < -tol {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn abs_re_cmp(&self, o: &Self) -> Ordering {
        self.re.abs().total_cmp(&o.re.abs())
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}
