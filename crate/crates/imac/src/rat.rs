//! Exact rational arithmetic for bound formulas.
//!
//! The upper bounds mix integers with halves and thirds (`n1 - ni/2`,
//! `2/3 * (...)`). Keeping them as reduced fractions avoids any rounding
//! question when bounds are compared against integer rates or against each
//! other at regime breakpoints.

use std::cmp::Ordering;
use std::fmt;

/// A reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rat {
    num: i64,
    den: i64,
}

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        Rat {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn int(n: i64) -> Self {
        Rat { num: n, den: 1 }
    }

    pub fn zero() -> Self {
        Rat::int(0)
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn floor(&self) -> i64 {
        self.num.div_euclid(self.den)
    }

    pub fn ceil(&self) -> i64 {
        -((-self.num).div_euclid(self.den))
    }

    /// `max(self, 0)`, the positive-part operator.
    pub fn pos(&self) -> Self {
        if self.num < 0 {
            Rat::zero()
        } else {
            *self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

impl std::ops::Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        let num = (self.num as i128) * (rhs.den as i128) + (rhs.num as i128) * (self.den as i128);
        let den = (self.den as i128) * (rhs.den as i128);
        reduce128(num, den)
    }
}

impl std::ops::Sub for Rat {
    type Output = Rat;
    fn sub(self, rhs: Rat) -> Rat {
        self + Rat {
            num: -rhs.num,
            den: rhs.den,
        }
    }
}

impl std::ops::Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        reduce128(
            (self.num as i128) * (rhs.num as i128),
            (self.den as i128) * (rhs.den as i128),
        )
    }
}

fn reduce128(num: i128, den: i128) -> Rat {
    let sign = if den < 0 { -1 } else { 1 };
    let g = gcd128(num.unsigned_abs(), den.unsigned_abs()) as i128;
    let num = sign * num / g;
    let den = sign * den / g;
    assert!(
        num <= i64::MAX as i128 && num >= i64::MIN as i128 && den <= i64::MAX as i128,
        "rational overflow"
    );
    Rat {
        num: num as i64,
        den: den as i64,
    }
}

fn gcd128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a.max(1)
    } else {
        gcd128(b, a % b)
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = (self.num as i128) * (other.den as i128);
        let rhs = (other.num as i128) * (self.den as i128);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::int(n)
    }
}

impl From<u32> for Rat {
    fn from(n: u32) -> Self {
        Rat::int(n as i64)
    }
}
