//! Formal degree-0 twists.
//!
//! A twist is an integer combination of named generators of Pic⁰ of the base
//! curve, e.g. `k-L1`. Nothing numerical depends on it; it only records which
//! line bundles must be chosen general and the relation `L2 = k - L1` forced
//! by the determinant.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Generator name of the degree-0 part of the canonical bundle.
pub const CANONICAL_GENERATOR: &str = "k";

#[derive(Clone, Default)]
pub struct TwistLabel {
    name: Option<String>,
    terms: BTreeMap<String, i64>,
}

impl TwistLabel {
    /// A fresh generator, e.g. `L1`.
    pub fn generator(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(name.to_string(), 1);
        TwistLabel {
            name: Some(name.to_string()),
            terms,
        }
    }

    pub fn canonical() -> Self {
        Self::generator(CANONICAL_GENERATOR)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Attaches a display name without changing the formal expression.
    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Anything but the trivial twist may be chosen general in Pic⁰.
    pub fn is_general(&self) -> bool {
        !self.is_zero()
    }

    pub fn coefficient(&self, generator: &str) -> i64 {
        self.terms.get(generator).copied().unwrap_or(0)
    }

    /// Canonical formal expression: positive terms then negative terms, each
    /// group ordered by generator name. The zero twist renders as `0`.
    pub fn expression(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        let pos = self.terms.iter().filter(|(_, c)| **c > 0);
        let neg = self.terms.iter().filter(|(_, c)| **c < 0);
        for (gen, &c) in pos.chain(neg) {
            if c < 0 {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(gen);
        }
        out
    }

    fn combine(mut self, rhs: &TwistLabel, sign: i64) -> Self {
        for (gen, c) in &rhs.terms {
            let entry = self.terms.entry(gen.clone()).or_insert(0);
            *entry += sign * c;
            if *entry == 0 {
                self.terms.remove(gen);
            }
        }
        self.name = None;
        self
    }
}

impl PartialEq for TwistLabel {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for TwistLabel {}

impl std::hash::Hash for TwistLabel {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Debug for TwistLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) if *n != self.expression() => write!(f, "{}={}", n, self.expression()),
            _ => f.write_str(&self.expression()),
        }
    }
}

impl fmt::Display for TwistLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.expression())
    }
}

impl Add<&TwistLabel> for TwistLabel {
    type Output = TwistLabel;
    fn add(self, rhs: &TwistLabel) -> TwistLabel {
        self.combine(rhs, 1)
    }
}

impl Sub<&TwistLabel> for TwistLabel {
    type Output = TwistLabel;
    fn sub(self, rhs: &TwistLabel) -> TwistLabel {
        self.combine(rhs, -1)
    }
}

impl Neg for TwistLabel {
    type Output = TwistLabel;
    fn neg(self) -> TwistLabel {
        TwistLabel::zero().combine(&self, -1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse twist expression {0:?}")]
pub struct ParseTwistError(String);

impl FromStr for TwistLabel {
    type Err = ParseTwistError;

    /// Parses the output of [`TwistLabel::expression`] (and the empty string as zero).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseTwistError(s.to_string());
        let s_trim: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s_trim.is_empty() || s_trim == "0" {
            return Ok(TwistLabel::zero());
        }
        let mut label = TwistLabel::zero();
        let bytes = s_trim.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let sign = match bytes[i] {
                b'+' => {
                    i += 1;
                    1
                }
                b'-' => {
                    i += 1;
                    -1
                }
                _ if i == 0 => 1,
                _ => return Err(bad()),
            };
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: i64 = if i == start {
                1
            } else {
                s_trim[start..i].parse().map_err(|_| bad())?
            };
            let gen_start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            if gen_start == i {
                return Err(bad());
            }
            let gen = &s_trim[gen_start..i];
            let mut term = TwistLabel::zero();
            term.terms.insert(gen.to_string(), sign * coeff);
            label = label + &term;
        }
        Ok(label)
    }
}

impl Serialize for TwistLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.expression())
    }
}

impl<'de> Deserialize<'de> for TwistLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A genericity hypothesis a construction relies on. These are recorded, never checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Genericity<T> {
    /// The twist must be a general point of Pic⁰(C).
    GeneralTwist { label: TwistLabel },
    /// `Z` must be a general zero-dimensional subscheme of the given length.
    GeneralSubscheme { length: T },
    /// The pushforward of `I_Z` must be `O_C(-(p_1+...+p_n))` with distinct `p_i`.
    DistinctBasePoints { count: T },
}

impl<T: fmt::Display> fmt::Display for Genericity<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genericity::GeneralTwist { label } => write!(f, "{label} general in Pic0(C)"),
            Genericity::GeneralSubscheme { length } => {
                write!(f, "Z general zero-dimensional of length {length}")
            }
            Genericity::DistinctBasePoints { count } => {
                write!(f, "pi(Z) consists of {count} distinct points")
            }
        }
    }
}
