//! Exact rationals with an `i64` fast path.
//!
//! Almost every coefficient met in the realization is a small rational, so
//! arithmetic is attempted on `Ratio<i64>` with checked operations and only
//! promoted to `BigRational` when a checked operation overflows. Values that
//! fit back into `i64` are demoted, which keeps the representation canonical:
//! `Small` and `Big` never describe the same number.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, One, Signed, ToPrimitive, Zero};

type Small = Ratio<i64>;

#[derive(Clone)]
pub enum Rat {
    Small(Small),
    Big(BigRational),
}

fn to_big(r: &Small) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

impl Rat {
    pub fn zero() -> Rat {
        Rat::Small(Small::zero())
    }

    pub fn one() -> Rat {
        Rat::Small(Small::one())
    }

    pub fn from_int(n: i64) -> Rat {
        Rat::Small(Small::from_integer(n))
    }

    /// `num/den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat::Small(Small::new(num, den))
    }

    pub fn from_big(b: BigRational) -> Rat {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::Small(Small::new_raw(n, d)),
            _ => Rat::Big(b),
        }
    }

    fn big(&self) -> BigRational {
        match self {
            Rat::Small(s) => to_big(s),
            Rat::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(s) => s.is_zero(),
            Rat::Big(b) => b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rat::Small(s) => s.is_one(),
            Rat::Big(_) => false,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(s) => s.is_negative(),
            Rat::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(s) => s.is_integer(),
            Rat::Big(b) => b.is_integer(),
        }
    }

    /// The value as an `i64`, if it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Rat::Small(s) if s.is_integer() => Some(*s.numer()),
            _ => None,
        }
    }

    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "reciprocal of zero");
        match self {
            Rat::Small(s) => Rat::Small(s.recip()),
            Rat::Big(b) => Rat::from_big(b.recip()),
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, e: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn numer_string(&self) -> String {
        match self {
            Rat::Small(s) => s.numer().to_string(),
            Rat::Big(b) => b.numer().to_string(),
        }
    }

    pub fn denom_string(&self) -> String {
        match self {
            Rat::Small(s) => s.denom().to_string(),
            Rat::Big(b) => b.denom().to_string(),
        }
    }
}

fn add_impl(a: &Rat, b: &Rat) -> Rat {
    if let (Rat::Small(x), Rat::Small(y)) = (a, b) {
        if *x.denom() == 1 && *y.denom() == 1 {
            if let Some(n) = x.numer().checked_add(y.numer()) {
                return Rat::Small(Small::from_integer(n));
            }
        } else if let Some(r) = x.checked_add(y) {
            return Rat::Small(r);
        }
    }
    Rat::from_big(a.big() + b.big())
}

fn sub_impl(a: &Rat, b: &Rat) -> Rat {
    add_impl(a, &-b)
}

fn mul_impl(a: &Rat, b: &Rat) -> Rat {
    if let (Rat::Small(x), Rat::Small(y)) = (a, b) {
        if *x.denom() == 1 && *y.denom() == 1 {
            if let Some(n) = x.numer().checked_mul(y.numer()) {
                return Rat::Small(Small::from_integer(n));
            }
        } else if let Some(r) = x.checked_mul(y) {
            return Rat::Small(r);
        }
    }
    Rat::from_big(a.big() * b.big())
}

fn div_impl(a: &Rat, b: &Rat) -> Rat {
    assert!(!b.is_zero(), "division by zero");
    if let (Rat::Small(x), Rat::Small(y)) = (a, b) {
        if let Some(r) = x.checked_div(y) {
            return Rat::Small(r);
        }
    }
    Rat::from_big(a.big() / b.big())
}

macro_rules! forward_ops {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                $imp(self, rhs)
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                $imp(&self, &rhs)
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                $imp(&self, rhs)
            }
        }
    };
}

forward_ops!(Add, add, add_impl);
forward_ops!(Sub, sub, sub_impl);
forward_ops!(Mul, mul, mul_impl);
forward_ops!(Div, div, div_impl);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        *self = add_impl(self, rhs);
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        *self = sub_impl(self, rhs);
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        *self = mul_impl(self, rhs);
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            Rat::Small(s) => match s.numer().checked_neg() {
                Some(n) => Rat::Small(Small::new_raw(n, *s.denom())),
                None => Rat::from_big(-to_big(s)),
            },
            Rat::Big(b) => Rat::from_big(-b.clone()),
        }
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Rat) -> bool {
        match (self, other) {
            (Rat::Small(a), Rat::Small(b)) => a == b,
            (Rat::Big(a), Rat::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Rat::Small(s) => {
                0u8.hash(state);
                s.numer().hash(state);
                s.denom().hash(state);
            }
            Rat::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        match (self, other) {
            (Rat::Small(a), Rat::Small(b)) => a.cmp(b),
            _ => self.big().cmp(&other.big()),
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(s) => write!(f, "{}", s),
            Rat::Big(b) => write!(f, "{}", b),
        }
    }
}

impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
