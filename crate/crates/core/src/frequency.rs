//! Frequency descriptors.
//!
//! Two textual forms are accepted:
//!
//! - `surd:(a+b*sqrt(d))/c`, a quadratic surd. The outer parentheses, the
//!   `/c` part, the `b*` factor and either term may be omitted, so
//!   `surd:(sqrt(5)-1)/2`, `surd:sqrt(2)-1` and `surd:(3-sqrt(5))/2` are all
//!   valid. Only one radicand may appear.
//! - `dec:<digits>`, a decimal literal such as `dec:0.61803398874989484820`.
//!   A bare decimal without prefix is read the same way.
//!
//! Both are evaluated exactly to the 128-bit torus grid (floor of
//! `2^128 * frac(value)`), using integer square roots for surds.

use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::torus::TorusScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frequency {
    pub value: TorusScalar,
    descriptor: String,
    rational: bool,
}

impl Frequency {
    pub fn parse(input: &str) -> Result<Self> {
        let trimmed = input.trim();
        let (value, rational) = if let Some(body) = trimmed.strip_prefix("surd:") {
            let surd = parse_surd(body).map_err(|reason| parse_error(input, reason))?;
            (surd.evaluate(), surd.is_rational())
        } else {
            let body = trimmed.strip_prefix("dec:").unwrap_or(trimmed);
            (parse_decimal(body).map_err(|reason| parse_error(input, reason))?, false)
        };
        Ok(Frequency {
            value,
            descriptor: trimmed.to_string(),
            rational,
        })
    }

    pub fn from_torus(value: TorusScalar) -> Self {
        Frequency {
            value,
            descriptor: alloc::format!("raw:{:#034x}", value.raw()),
            rational: false,
        }
    }

    /// The golden-ratio conjugate `(sqrt(5)-1)/2`.
    pub fn golden() -> Self {
        Self::parse("surd:(sqrt(5)-1)/2").expect("valid literal")
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// True when the descriptor is a surd that is exactly rational
    /// (`b = 0` or a perfect-square radicand).
    pub fn is_known_rational(&self) -> bool {
        self.rational
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor)
    }
}

impl core::str::FromStr for Frequency {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Frequency::parse(s)
    }
}

fn parse_error(input: &str, reason: &str) -> Error {
    Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    }
}

/// `(a + b sqrt(d)) / c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Surd {
    a: i128,
    b: i128,
    d: i128,
    c: i128,
}

impl Surd {
    fn is_rational(&self) -> bool {
        if self.b == 0 || self.d == 0 {
            return true;
        }
        let root = BigUint::from(self.d as u128).sqrt();
        &root * &root == BigUint::from(self.d as u128)
    }

    fn evaluate(&self) -> TorusScalar {
        let (mut a, mut b, mut c) = (self.a, self.b, self.c);
        if c < 0 {
            a = -a;
            b = -b;
            c = -c;
        }
        let scaled_a: BigInt = BigInt::from(a) << 128usize;
        // floor(b * sqrt(d) * 2^128)
        let scaled_b = if b == 0 || self.d == 0 {
            BigInt::zero()
        } else {
            let square: BigUint = (BigUint::from(b.unsigned_abs()).pow(2) * BigUint::from(self.d as u128)) << 256usize;
            let root = square.sqrt();
            let exact = &root * &root == square;
            let root = BigInt::from_biguint(Sign::Plus, root);
            if b > 0 {
                root
            } else if exact {
                -root
            } else {
                -root - 1
            }
        };
        let total: BigInt = scaled_a + scaled_b;
        TorusScalar::from_bigint_floor(&total.div_floor(&BigInt::from(c)))
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, lit: &str) -> bool {
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<i128> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        core::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }
}

fn parse_surd(body: &str) -> core::result::Result<Surd, &'static str> {
    let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cur = Cursor {
        s: compact.as_bytes(),
        pos: 0,
    };
    let parenthesized = cur.eat(b'(');
    let mut surd = Surd { a: 0, b: 0, d: 0, c: 1 };
    let mut first = true;
    loop {
        let sign: i128 = if cur.eat(b'-') {
            -1
        } else if cur.eat(b'+') || first {
            1
        } else {
            break;
        };
        first = false;
        let coeff = cur.integer();
        let has_root = if coeff.is_some() {
            cur.eat(b'*') && {
                if !cur.eat_str("sqrt(") {
                    return Err("expected sqrt( after '*'");
                }
                true
            }
        } else {
            if !cur.eat_str("sqrt(") {
                return Err("expected an integer or sqrt(d)");
            }
            true
        };
        if has_root {
            let d = cur.integer().ok_or("expected radicand")?;
            if !cur.eat(b')') {
                return Err("unclosed sqrt(");
            }
            if surd.b != 0 && surd.d != d {
                return Err("at most one radicand is supported");
            }
            surd.d = d;
            surd.b = surd
                .b
                .checked_add(sign * coeff.unwrap_or(1))
                .ok_or("coefficient overflow")?;
        } else {
            surd.a = surd
                .a
                .checked_add(sign * coeff.unwrap_or(0))
                .ok_or("coefficient overflow")?;
        }
    }
    if parenthesized && !cur.eat(b')') {
        return Err("unbalanced parentheses");
    }
    if cur.eat(b'/') {
        surd.c = cur.integer().ok_or("expected denominator")?;
        if surd.c == 0 {
            return Err("zero denominator");
        }
    }
    if cur.pos != compact.len() {
        return Err("trailing characters");
    }
    Ok(surd)
}

fn parse_decimal(body: &str) -> core::result::Result<TorusScalar, &'static str> {
    let body = body.trim();
    let (negative, digits) = match body.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, body.strip_prefix('+').unwrap_or(body)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err("empty decimal");
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|c| c.is_ascii_digit()) {
        return Err("decimal may only contain digits and one '.'");
    }
    let mut all = String::with_capacity(int_part.len() + frac_part.len());
    all.push_str(int_part);
    all.push_str(frac_part);
    let mut numerator = BigInt::parse_bytes(all.as_bytes(), 10).ok_or("bad digits")?;
    if negative {
        numerator = -numerator;
    }
    let denominator = BigInt::from(10u8).pow(frac_part.len() as u32);
    let scaled = (numerator << 128usize).div_floor(&denominator);
    debug_assert!(!denominator.is_negative());
    Ok(TorusScalar::from_bigint_floor(&scaled))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio() {
        let g = Frequency::parse("surd:(sqrt(5)-1)/2").unwrap();
        assert!((g.value.to_f64() - 0.618_033_988_749_894_8).abs() < 2e-16);
        assert!(!g.is_known_rational());
        // (1+sqrt 5)/2 is the same point of the torus.
        let phi = Frequency::parse("surd:(1+sqrt(5))/2").unwrap();
        assert_eq!(phi.value, g.value);
    }

    #[test]
    fn surd_forms() {
        let r2 = Frequency::parse("surd:sqrt(2)-1").unwrap();
        assert!((r2.value.to_f64() - (core::f64::consts::SQRT_2 - 1.0)).abs() < 2e-16);
        let general = Frequency::parse("surd: (3 + 2*sqrt(7)) / 5").unwrap();
        let want = (3.0 + 2.0 * libm::sqrt(7.0)) / 5.0;
        assert!((general.value.to_f64() - (want - libm::floor(want))).abs() < 1e-15);
        let neg = Frequency::parse("surd:(3-sqrt(5))/2").unwrap();
        assert!((neg.value.to_f64() - 0.381_966_011_250_105_1).abs() < 2e-16);
        assert!(Frequency::parse("surd:(1+sqrt(4))/3").unwrap().is_known_rational());
    }

    #[test]
    fn surd_and_decimal_agree_to_many_digits() {
        let g = Frequency::parse("surd:(sqrt(5)-1)/2").unwrap();
        let d = Frequency::parse("dec:0.6180339887498948482045868343656381177203").unwrap();
        let diff = (g.value - d.value).norm();
        assert!(diff < 1e-38, "diff {diff:e}");
    }

    #[test]
    fn decimals() {
        assert_eq!(Frequency::parse("dec:0.5").unwrap().value, TorusScalar::HALF);
        assert_eq!(Frequency::parse("0.25").unwrap().value.to_f64(), 0.25);
        assert_eq!(Frequency::parse("dec:-0.25").unwrap().value.to_f64(), 0.75);
        assert_eq!(Frequency::parse("dec:3.").unwrap().value, TorusScalar::ZERO);
    }

    #[test]
    fn malformed_descriptors() {
        for bad in [
            "surd:(sqrt(5)-1",
            "surd:sqrt(2)+sqrt(3)",
            "surd:1/0",
            "dec:0.1.2",
            "dec:",
            "surd:2*x",
            "dec:abc",
        ] {
            assert!(Frequency::parse(bad).is_err(), "{bad}");
        }
    }
}
