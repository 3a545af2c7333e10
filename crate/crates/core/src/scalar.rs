//! Exact scalar fields.
//!
//! Everything above this module is written against [`Field`], a small
//! num-traits based interface for exact division rings with cheap by-reference
//! arithmetic. The concrete field used by the Dirac systems is the field of
//! Gaussian rationals `Q(i)`, see [`GaussRational`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// An exact field.
///
/// Equality is exact: `a == b` iff `a - b` is zero. The `*_ref` methods exist
/// so that generic elimination loops can work on borrowed entries without
/// cloning big integers.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn div_ref(&self, rhs: &Self) -> Self;

    fn neg_ref(&self) -> Self {
        -self.clone()
    }

    /// Multiplicative inverse. Panics on zero, like integer division.
    fn inv(&self) -> Self {
        Self::one().div_ref(self)
    }

    /// `self - a * b`, the elimination kernel.
    fn sub_mul(&self, a: &Self, b: &Self) -> Self {
        if a.is_zero() || b.is_zero() {
            return self.clone();
        }
        self.sub_ref(&a.mul_ref(b))
    }

    /// Image under a ring map into `Z/p`, or `None` if the field has no such
    /// map or a denominator vanishes mod `p`.
    fn residue(&self, _m: &Modulus) -> Option<u64> {
        None
    }
}

/// A prime `p ≡ 1 (mod 4)` together with a square root of `-1` mod `p`, so
/// that Gaussian rationals with denominators prime to `p` reduce into `Z/p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Modulus {
    pub p: u64,
    pub sqrt_neg1: u64,
}

impl Modulus {
    /// Fails unless `p` is a prime below `2^31` with `p ≡ 1 (mod 4)`.
    pub fn new(p: u64) -> Option<Modulus> {
        if p >= 1 << 31 || p % 4 != 1 || !(2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            return None;
        }
        let mut m = Modulus { p, sqrt_neg1: 0 };
        // g^((p-1)/4) squares to -1 exactly when g is a non-residue.
        m.sqrt_neg1 = (2..p).map(|g| m.pow(g, (p - 1) / 4)).find(|r| m.mul(*r, *r) == p - 1)?;
        Some(m)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero residue.
    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn reduce_int<T: ExactInt>(&self, v: &T) -> u64 {
        let p = T::from_u64(self.p).expect("integer type too small");
        v.mod_floor(&p).to_u64().expect("residue fits in u64")
    }

    fn reduce_ratio<T: ExactInt>(&self, v: &Ratio<T>) -> Option<u64> {
        let den = self.reduce_int(v.denom());
        (den != 0).then(|| self.mul(self.reduce_int(v.numer()), self.inv(den)))
    }
}

/// A field that contains a square root of `-1`.
pub trait ComplexField: Field {
    fn imag_unit() -> Self;
}

/// Integer types usable as numerators and denominators.
pub trait ExactInt:
    Integer + Signed + Clone + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> ExactInt for T where
    T: Integer + Signed + Clone + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T: ExactInt> Field for Ratio<T> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(T::from_i64(v).expect("integer type too small"))
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return -rhs.clone();
        }
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Ratio::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        self * rhs
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        if rhs.is_one() {
            return self.clone();
        }
        self / rhs
    }

    fn residue(&self, m: &Modulus) -> Option<u64> {
        m.reduce_ratio(self)
    }
}

/// A Gaussian rational `re + im·i` with `re, im ∈ Q`.
///
/// Both parts are kept as reduced fractions with positive denominators, so
/// the derived equality is exact equality of numbers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRational<T: ExactInt> {
    pub re: Ratio<T>,
    pub im: Ratio<T>,
}

impl<T: ExactInt> GaussRational<T> {
    pub fn new(re: Ratio<T>, im: Ratio<T>) -> Self {
        GaussRational { re, im }
    }

    pub fn real(re: Ratio<T>) -> Self {
        GaussRational { re, im: Ratio::zero() }
    }

    /// `num / den + 0i`.
    pub fn frac(num: i64, den: i64) -> Self {
        let num = T::from_i64(num).expect("integer type too small");
        let den = T::from_i64(den).expect("integer type too small");
        Self::real(Ratio::new(num, den))
    }

    pub fn i() -> Self {
        GaussRational { re: Ratio::zero(), im: Ratio::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> Ratio<T> {
        self.re.mul_ref(&self.re).add_ref(&self.im.mul_ref(&self.im))
    }
}

impl<T: ExactInt> fmt::Display for GaussRational<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write_imag(f, &self.im, false),
            (false, false) => {
                write!(f, "{}", self.re)?;
                write_imag(f, &self.im, true)
            }
        }
    }
}

fn write_imag<T: ExactInt>(f: &mut fmt::Formatter<'_>, im: &Ratio<T>, signed: bool) -> fmt::Result {
    let neg = im.is_negative();
    let mag = im.abs();
    if neg {
        write!(f, "-")?;
    } else if signed {
        write!(f, "+")?;
    }
    if mag.is_one() {
        write!(f, "i")
    } else {
        write!(f, "{}i", mag)
    }
}

impl<T: ExactInt> fmt::Debug for GaussRational<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: ExactInt> Zero for GaussRational<T> {
    fn zero() -> Self {
        GaussRational { re: Ratio::zero(), im: Ratio::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<T: ExactInt> One for GaussRational<T> {
    fn one() -> Self {
        GaussRational { re: Ratio::one(), im: Ratio::zero() }
    }
}

impl<T: ExactInt> Neg for GaussRational<T> {
    type Output = Self;

    fn neg(self) -> Self {
        GaussRational { re: -self.re, im: -self.im }
    }
}

impl<T: ExactInt> Add for GaussRational<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<T: ExactInt> Sub for GaussRational<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl<T: ExactInt> Mul for GaussRational<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<T: ExactInt> Div for GaussRational<T> {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        self.div_ref(&rhs)
    }
}

impl<T: ExactInt> Field for GaussRational<T> {
    fn from_i64(v: i64) -> Self {
        Self::real(<Ratio<T> as Field>::from_i64(v))
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        GaussRational { re: self.re.add_ref(&rhs.re), im: self.im.add_ref(&rhs.im) }
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        GaussRational { re: self.re.sub_ref(&rhs.re), im: self.im.sub_ref(&rhs.im) }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => Self::real(self.re.mul_ref(&rhs.re)),
            (true, false) => GaussRational {
                re: self.re.mul_ref(&rhs.re),
                im: self.re.mul_ref(&rhs.im),
            },
            (false, true) => GaussRational {
                re: self.re.mul_ref(&rhs.re),
                im: self.im.mul_ref(&rhs.re),
            },
            (false, false) => GaussRational {
                re: self.re.mul_ref(&rhs.re).sub_ref(&self.im.mul_ref(&rhs.im)),
                im: self.re.mul_ref(&rhs.im).add_ref(&self.im.mul_ref(&rhs.re)),
            },
        }
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero in Q(i)");
        if rhs.im.is_zero() {
            return GaussRational {
                re: self.re.div_ref(&rhs.re),
                im: self.im.div_ref(&rhs.re),
            };
        }
        let n = rhs.norm_sqr();
        let p = self.mul_ref(&rhs.conj());
        GaussRational { re: p.re.div_ref(&n), im: p.im.div_ref(&n) }
    }

    fn neg_ref(&self) -> Self {
        GaussRational { re: -self.re.clone(), im: -self.im.clone() }
    }

    fn residue(&self, m: &Modulus) -> Option<u64> {
        let re = m.reduce_ratio(&self.re)?;
        let im = m.reduce_ratio(&self.im)?;
        Some(m.add(re, m.mul(im, m.sqrt_neg1)))
    }
}

impl<T: ExactInt> ComplexField for GaussRational<T> {
    fn imag_unit() -> Self {
        Self::i()
    }
}
