//! Ternary signs and (partial) sign vectors.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Answer of a ternary linear query `sign(<q, x>)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub const ALL: [Sign; 3] = [Sign::Neg, Sign::Zero, Sign::Pos];

    pub fn of_f64(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Pos
        } else if v < 0.0 {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn of_ordering(o: std::cmp::Ordering) -> Sign {
        match o {
            std::cmp::Ordering::Less => Sign::Neg,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Pos,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Sign> {
        match v {
            -1 => Some(Sign::Neg),
            0 => Some(Sign::Zero),
            1 => Some(Sign::Pos),
            _ => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    /// Sign of a product.
    pub fn times(self, other: Sign) -> Sign {
        Sign::from_i8(self.as_i8() * other.as_i8()).expect("product of signs is a sign")
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.as_i8()
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> Result<Sign, String> {
        Sign::from_i8(v).ok_or_else(|| format!("invalid sign {v}"))
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Neg => "-1",
            Sign::Zero => "0",
            Sign::Pos => "+1",
        })
    }
}

/// Label tuple over a hyperplane set; `None` marks an entry that is not known.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SignVector(pub Vec<Option<Sign>>);

impl SignVector {
    pub fn unknown(n: usize) -> SignVector {
        SignVector(vec![None; n])
    }

    pub fn from_signs(signs: impl IntoIterator<Item = Sign>) -> SignVector {
        SignVector(signs.into_iter().map(Some).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Sign> {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, s: Sign) {
        self.0[i] = Some(s);
    }

    pub fn is_complete(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    pub fn known_count(&self) -> usize {
        self.0.iter().filter(|s| s.is_some()).count()
    }

    /// The entries as plain signs, if every entry is known.
    pub fn to_signs(&self) -> Option<Vec<Sign>> {
        self.0.iter().copied().collect()
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match s {
                Some(s) => write!(f, "{s}")?,
                None => f.write_str("?")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display() {
        let v = SignVector(vec![Some(Sign::Pos), Some(Sign::Neg), Some(Sign::Zero), None]);
        assert_eq!(v.to_string(), "+1 -1 0 ?");
        assert!(!v.is_complete());
        assert_eq!(v.known_count(), 3);
    }

    #[test]
    fn products() {
        for a in Sign::ALL {
            for b in Sign::ALL {
                assert_eq!(a.times(b).as_i8(), a.as_i8() * b.as_i8());
            }
            assert_eq!(a.flip().flip(), a);
        }
    }
}
