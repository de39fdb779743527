use core::fmt;
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
#[allow(unused_imports)] // inherent under std
use num_traits::Float;

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

/// A point of the circle `T = R/Z`, stored as `raw / 2^128`.
///
/// Addition, subtraction and multiplication by integers wrap modulo `2^128`,
/// which is arithmetic modulo one, so they are exact.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusScalar(u128);

impl TorusScalar {
    pub const ZERO: Self = TorusScalar(0);
    pub const HALF: Self = TorusScalar(1 << 127);

    pub const fn from_raw(raw: u128) -> Self {
        TorusScalar(raw)
    }

    pub const fn raw(self) -> u128 {
        self.0
    }

    /// Reduces a finite real modulo one. Exact: every `f64` is a dyadic
    /// rational and its fractional part fits in 128 bits unless it is
    /// smaller than `2^-128`.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonFinite("TorusScalar::from_f64"));
        }
        let frac = x - x.floor();
        if frac >= 1.0 {
            return Ok(Self::ZERO);
        }
        Ok(TorusScalar((frac * TWO_POW_128) as u128))
    }

    /// `p / q mod 1`, rounded down to the 128-bit grid.
    pub fn from_ratio(p: i128, q: u128) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        let num: BigInt = BigInt::from(p) << 128usize;
        Ok(Self::from_bigint_floor(&num.div_floor(&BigInt::from(q))))
    }

    /// Interprets `v` as a multiple of `2^-128` and reduces it modulo one.
    pub(crate) fn from_bigint_floor(v: &BigInt) -> Self {
        let modulus = BigInt::from(1u8) << 128;
        let r = v.mod_floor(&modulus);
        TorusScalar(r.to_u128().expect("reduced below 2^128"))
    }

    /// Representative in `[0, 1)`.
    pub fn to_f64(self) -> f64 {
        let v = self.0 as f64 / TWO_POW_128;
        if v >= 1.0 {
            0.0
        } else {
            v
        }
    }

    /// Signed representative `raw` in `[-2^127, 2^127)`.
    pub const fn centered_raw(self) -> i128 {
        self.0 as i128
    }

    /// Representative in `[-1/2, 1/2)`.
    pub fn to_centered_f64(self) -> f64 {
        self.centered_raw() as f64 / TWO_POW_128
    }

    /// Distance to the nearest integer, `||x||_T`, in `[0, 1/2]`.
    pub fn norm(self) -> f64 {
        let d = self.0.min(self.0.wrapping_neg());
        d as f64 / TWO_POW_128
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub const fn mul_int(self, k: i128) -> Self {
        TorusScalar(self.0.wrapping_mul(k as u128))
    }

    /// Multiplication by an integer given modulo `2^128`.
    pub const fn mul_wrapping(self, k: u128) -> Self {
        TorusScalar(self.0.wrapping_mul(k))
    }
}

impl fmt::Debug for TorusScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusScalar({})", self.to_f64())
    }
}

impl fmt::Display for TorusScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl Add for TorusScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        TorusScalar(self.0.wrapping_add(rhs.0))
    }
}

impl AddAssign for TorusScalar {
    fn add_assign(&mut self, rhs: Self) {
        self.0 = self.0.wrapping_add(rhs.0);
    }
}

impl Sub for TorusScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        TorusScalar(self.0.wrapping_sub(rhs.0))
    }
}

impl SubAssign for TorusScalar {
    fn sub_assign(&mut self, rhs: Self) {
        self.0 = self.0.wrapping_sub(rhs.0);
    }
}

impl Neg for TorusScalar {
    type Output = Self;
    fn neg(self) -> Self {
        TorusScalar(self.0.wrapping_neg())
    }
}

/// `min_m |x - m|` for a real `x`.
pub fn torus_norm(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("torus_norm"));
    }
    Ok((x - x.round()).abs())
}

/// Wraparound distance between two points of the circle.
pub fn circle_distance(a: TorusScalar, b: TorusScalar) -> f64 {
    (a - b).norm()
}
