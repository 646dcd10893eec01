//! Checked exact rationals for evaluating printed index formulas.
//!
//! `Q` is `Copy` so formulas read like the algebra they transcribe. Overflow
//! and division by zero are sticky states rather than panics.

use std::ops::{Add, Div, Mul, Sub};

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Q {
    Val(Ratio<i128>),
    Overflow,
    DivByZero,
}

impl Q {
    pub fn int(v: usize) -> Self {
        i128::try_from(v).map_or(Q::Overflow, |v| Q::Val(Ratio::from_integer(v)))
    }

    pub fn value(self) -> Option<Ratio<i128>> {
        match self {
            Q::Val(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_f64(self) -> Option<f64> {
        self.value().and_then(|r| r.to_f64())
    }

    pub fn is_zero(self) -> bool {
        matches!(self, Q::Val(r) if r.is_zero())
    }

    pub fn pow(self, e: u32) -> Self {
        (0..e).fold(Q::int(1), |acc, _| acc * self)
    }

    fn lift(self, rhs: Self, op: impl FnOnce(Ratio<i128>, Ratio<i128>) -> Q) -> Q {
        match (self, rhs) {
            (Q::Val(a), Q::Val(b)) => op(a, b),
            (Q::DivByZero, _) | (_, Q::DivByZero) => Q::DivByZero,
            _ => Q::Overflow,
        }
    }
}

impl From<i64> for Q {
    fn from(v: i64) -> Self {
        Q::Val(Ratio::from_integer(v.into()))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for Q {
            type Output = Q;
            fn $method(self, rhs: Q) -> Q {
                self.lift(rhs, |a, b| a.$checked(&b).map_or(Q::Overflow, Q::Val))
            }
        }
        impl $tr<i64> for Q {
            type Output = Q;
            fn $method(self, rhs: i64) -> Q {
                self.$method(Q::from(rhs))
            }
        }
        impl $tr<Q> for i64 {
            type Output = Q;
            fn $method(self, rhs: Q) -> Q {
                Q::from(self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Div for Q {
    type Output = Q;
    fn div(self, rhs: Q) -> Q {
        // A zero divisor makes the expression undefined even if the numerator overflowed.
        if rhs.is_zero() {
            return Q::DivByZero;
        }
        self.lift(rhs, |a, b| a.checked_div(&b).map_or(Q::Overflow, Q::Val))
    }
}

impl Div<i64> for Q {
    type Output = Q;
    fn div(self, rhs: i64) -> Q {
        self / Q::from(rhs)
    }
}

impl Div<Q> for i64 {
    type Output = Q;
    fn div(self, rhs: Q) -> Q {
        Q::from(self) / rhs
    }
}
