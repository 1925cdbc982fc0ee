//! Exact arithmetic in `Q(√d)` for a fixed positive radicand `d`.
//!
//! The radicand need not be squarefree: `Z[√q]` for square `q` is handled by
//! the same type, and every comparison is exact either way.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `x + y·√d` with rational `x, y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadFieldElem {
    d: u64,
    x: BigRational,
    y: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn is_squarefree(n: u64) -> bool {
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    n > 0
}

/// `floor(sqrt(r))` for a nonnegative rational.
pub fn floor_sqrt_rational(r: &BigRational) -> BigInt {
    assert!(!r.is_negative());
    // floor(sqrt(n/m)) = floor(isqrt(n*m) / m)
    let n = r.numer();
    let m = r.denom();
    let s = (n * m).sqrt();
    num_integer::Integer::div_floor(&s, m)
}

impl QuadFieldElem {
    pub fn new(d: u64, x: BigRational, y: BigRational) -> QuadFieldElem {
        assert!(d > 0, "radicand must be positive");
        let r = num_integer::Roots::sqrt(&d);
        if r * r == d {
            // Rational √d: keep the canonical form with y = 0.
            return QuadFieldElem {
                d,
                x: x + y * rat(r as i64),
                y: BigRational::zero(),
            };
        }
        QuadFieldElem { d, x, y }
    }

    /// An element of a genuine real quadratic field (squarefree `d > 1`).
    pub fn in_field(d: u64, x: BigRational, y: BigRational) -> Result<QuadFieldElem> {
        if d < 2 || !is_squarefree(d) {
            return Err(Error::InvalidInput(format!(
                "{d} is not a squarefree radicand > 1"
            )));
        }
        Ok(QuadFieldElem::new(d, x, y))
    }

    pub fn from_ints(d: u64, x: i64, y: i64) -> QuadFieldElem {
        QuadFieldElem::new(d, rat(x), rat(y))
    }

    pub fn rational(d: u64, x: BigRational) -> QuadFieldElem {
        QuadFieldElem::new(d, x, BigRational::zero())
    }

    /// The element `√d`.
    pub fn sqrt(d: u64) -> QuadFieldElem {
        QuadFieldElem::new(d, BigRational::zero(), BigRational::one())
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }
    pub fn rational_part(&self) -> &BigRational {
        &self.x
    }
    pub fn surd_part(&self) -> &BigRational {
        &self.y
    }
    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// `x² - d·y²`.
    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - &self.y * &self.y * rat(self.d as i64)
    }

    pub fn conjugate(&self) -> QuadFieldElem {
        QuadFieldElem::new(self.d, self.x.clone(), -self.y.clone())
    }

    pub fn inv(&self) -> Result<QuadFieldElem> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::InvalidInput("division by zero in Q(√d)".into()));
        }
        Ok(QuadFieldElem::new(self.d, &self.x / &n, -&self.y / &n))
    }

    pub fn pow(&self, e: u32) -> QuadFieldElem {
        let mut acc = QuadFieldElem::rational(self.d, BigRational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact sign of `x + y√d`.
    pub fn signum(&self) -> Ordering {
        let sx = self.x.cmp(&BigRational::zero());
        let sy = self.y.cmp(&BigRational::zero());
        if sx == sy || sy == Ordering::Equal {
            return sx;
        }
        if sx == Ordering::Equal {
            return sy;
        }
        // Opposite signs: compare x² with d·y².
        let lhs = &self.x * &self.x;
        let rhs = &self.y * &self.y * rat(self.d as i64);
        match lhs.cmp(&rhs) {
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => sx,
            Ordering::Less => sy,
        }
    }

    /// Exact floor as an integer.
    pub fn floor(&self) -> BigInt {
        let y_part = {
            let r = &self.y * &self.y * rat(self.d as i64);
            let s = floor_sqrt_rational(&r);
            if self.y.is_negative() {
                -s - BigInt::one()
            } else {
                s
            }
        };
        let mut n = self.x.floor().to_integer() + y_part;
        // n is within 2 of the true floor; settle it exactly.
        loop {
            let diff =
                self - &QuadFieldElem::rational(self.d, BigRational::from_integer(n.clone()));
            if diff.signum() == Ordering::Less {
                n -= 1;
                continue;
            }
            let up = &diff - &QuadFieldElem::rational(self.d, BigRational::one());
            if up.signum() != Ordering::Less {
                n += 1;
                continue;
            }
            return n;
        }
    }

    /// Floating approximation for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        self.x.to_f64().unwrap_or(f64::NAN)
            + self.y.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    fn check(&self, o: &QuadFieldElem) {
        assert_eq!(self.d, o.d, "mixing different radicands");
    }
}

impl PartialOrd for QuadFieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.d != other.d {
            return None;
        }
        Some((self - other).signum())
    }
}

impl std::ops::Add for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn add(self, o: &QuadFieldElem) -> QuadFieldElem {
        self.check(o);
        QuadFieldElem::new(self.d, &self.x + &o.x, &self.y + &o.y)
    }
}
impl std::ops::Sub for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn sub(self, o: &QuadFieldElem) -> QuadFieldElem {
        self.check(o);
        QuadFieldElem::new(self.d, &self.x - &o.x, &self.y - &o.y)
    }
}
impl std::ops::Mul for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn mul(self, o: &QuadFieldElem) -> QuadFieldElem {
        self.check(o);
        let d = rat(self.d as i64);
        QuadFieldElem::new(
            self.d,
            &self.x * &o.x + &self.y * &o.y * d,
            &self.x * &o.y + &self.y * &o.x,
        )
    }
}
impl std::ops::Neg for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn neg(self) -> QuadFieldElem {
        QuadFieldElem::new(self.d, -self.x.clone(), -self.y.clone())
    }
}

impl fmt::Display for QuadFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        let sign = if self.y.is_negative() { "-" } else { "+" };
        let ay = self.y.abs();
        let coef = if ay.is_one() {
            String::new()
        } else {
            format!("{ay}*")
        };
        if self.x.is_zero() {
            let lead = if self.y.is_negative() { "-" } else { "" };
            write!(f, "{lead}{coef}sqrt({})", self.d)
        } else {
            write!(f, "{} {sign} {coef}sqrt({})", self.x, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(d: u64, x: i64, y: i64) -> QuadFieldElem {
        QuadFieldElem::from_ints(d, x, y)
    }

    #[test]
    fn floors() {
        assert_eq!(q(2, 0, 1).floor(), BigInt::from(1));
        assert_eq!(q(2, 0, -1).floor(), BigInt::from(-2));
        assert_eq!(q(4, 1, 1).floor(), BigInt::from(3));
        assert_eq!(q(4, 0, -1).floor(), BigInt::from(-2));
        assert_eq!(q(3, 5, 2).floor(), BigInt::from(8));
    }

    #[test]
    fn inverse_and_display() {
        let a = q(2, 1, 1);
        let b = a.inv().unwrap();
        assert_eq!(&a * &b, q(2, 1, 0));
        assert_eq!(q(2, -1, 1).to_string(), "-1 + sqrt(2)");
        assert_eq!(q(5, 0, -3).to_string(), "-3*sqrt(5)");
        assert!(q(4, 2, -1).inv().is_err());
    }

    proptest! {
        #[test]
        fn floor_matches_float(x in -1000i64..1000, y in -1000i64..1000, d in 2u64..50) {
            let e = q(d, x, y);
            let fl = e.to_f64().floor();
            let got = e.floor().to_f64().unwrap();
            // Exact and float floors agree away from integer boundaries.
            if (e.to_f64() - e.to_f64().round()).abs() > 1e-6 {
                prop_assert_eq!(got, fl);
            } else {
                prop_assert!((got - fl).abs() <= 1.0);
            }
        }

        #[test]
        fn ring_laws(a in -50i64..50, b in -50i64..50, c in -50i64..50, e in -50i64..50) {
            let x = q(7, a, b);
            let y = q(7, c, e);
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x + &y) * &x, &(&x * &x) + &(&y * &x));
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }
    }
}
