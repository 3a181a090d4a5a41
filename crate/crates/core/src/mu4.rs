//! Exact arithmetic in μ₄ = {1, i, −1, −i} and its subgroup {±1}.

use std::fmt;
use std::ops::{Mul, MulAssign};
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of μ₄, stored as the exponent `k` in `i^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mu4(u8);

impl Mu4 {
    pub const ONE: Mu4 = Mu4(0);
    pub const I: Mu4 = Mu4(1);
    pub const MINUS_ONE: Mu4 = Mu4(2);
    pub const MINUS_I: Mu4 = Mu4(3);
    pub const ALL: [Mu4; 4] = [Mu4::ONE, Mu4::I, Mu4::MINUS_ONE, Mu4::MINUS_I];

    pub fn from_exponent(k: i64) -> Mu4 {
        Mu4(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn pow(self, e: u64) -> Mu4 {
        Mu4(((self.0 as u64 * (e % 4)) % 4) as u8)
    }

    pub fn inverse(self) -> Mu4 {
        Mu4((4 - self.0) % 4)
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Coerces to ±1; `None` for ±i.
    pub fn to_sign(self) -> Option<Sign> {
        match self.0 {
            0 => Some(Sign::Plus),
            2 => Some(Sign::Minus),
            _ => None,
        }
    }

    /// Coercion used at sites where the product is known to be real for any
    /// consistent catalog.
    pub fn expect_sign(self, context: impl fmt::Display) -> Result<Sign> {
        self.to_sign().ok_or_else(|| Error::NonRealProduct {
            context: context.to_string(),
            value: self.to_string(),
        })
    }

    pub fn product<I: IntoIterator<Item = Mu4>>(it: I) -> Mu4 {
        it.into_iter().fold(Mu4::ONE, |a, b| a * b)
    }
}

impl Mul for Mu4 {
    type Output = Mu4;
    fn mul(self, rhs: Mu4) -> Mu4 {
        Mu4((self.0 + rhs.0) % 4)
    }
}

impl MulAssign for Mu4 {
    fn mul_assign(&mut self, rhs: Mu4) {
        *self = *self * rhs;
    }
}

impl From<Sign> for Mu4 {
    fn from(s: Sign) -> Mu4 {
        match s {
            Sign::Plus => Mu4::ONE,
            Sign::Minus => Mu4::MINUS_ONE,
        }
    }
}

impl fmt::Display for Mu4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "1",
            1 => "i",
            2 => "-1",
            _ => "-i",
        })
    }
}

impl fmt::Debug for Mu4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Mu4 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mu4> {
        match s {
            "1" => Ok(Mu4::ONE),
            "i" => Ok(Mu4::I),
            "-1" => Ok(Mu4::MINUS_ONE),
            "-i" => Ok(Mu4::MINUS_I),
            other => Err(Error::Schema(format!(
                "invalid μ₄ value `{other}` (expected \"1\", \"-1\", \"i\" or \"-i\")"
            ))),
        }
    }
}

impl Serialize for Mu4 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Mu4 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Mu4, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// A sign ±1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn pow(self, e: u64) -> Sign {
        if e % 2 == 1 {
            self
        } else {
            Sign::Plus
        }
    }

    pub fn product<I: IntoIterator<Item = Sign>>(it: I) -> Sign {
        it.into_iter().fold(Sign::Plus, |a, b| a * b)
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self.is_minus() != rhs.is_minus())
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl fmt::Debug for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl TryFrom<i64> for Sign {
    type Error = Error;
    fn try_from(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::Schema(format!("invalid sign {other} (expected 1 or -1)"))),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.to_i64())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Sign, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::try_from(v).map_err(de::Error::custom)
    }
}
