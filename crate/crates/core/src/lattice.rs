//! Numerical divisor classes on a geometrically ruled surface `X → C`.
//!
//! The numerical group is generated by the minimal section `C0` and a fibre
//! `F`, with `C0² = -e`, `C0·F = 1`, `F² = 0`. The canonical class is
//! `-2C0 + (2g-2-e)F` twisted by the formal degree-0 label `k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{exact_half, Scalar};
use crate::twist::TwistLabel;

/// A numerical class `a·C0 + b·F`, optionally twisted by a degree-0 label.
///
/// The twist never enters an intersection number or Euler characteristic.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct DivisorClass<T> {
    pub a: T,
    pub b: T,
    #[serde(default)]
    pub twist: TwistLabel,
}

impl<T: Scalar> DivisorClass<T> {
    pub fn new(a: T, b: T) -> Self {
        DivisorClass {
            a,
            b,
            twist: TwistLabel::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// Class of the minimal section `C0`.
    pub fn section() -> Self {
        Self::new(T::one(), T::zero())
    }

    /// Class of a fibre `F`.
    pub fn fibre() -> Self {
        Self::new(T::zero(), T::one())
    }

    pub fn with_twist(mut self, twist: TwistLabel) -> Self {
        self.twist = twist;
        self
    }

    pub fn untwisted(&self) -> Self {
        Self::new(self.a.clone(), self.b.clone())
    }

    pub fn is_twisted(&self) -> bool {
        !self.twist.is_zero()
    }

    /// Equality of the numerical classes, ignoring twists.
    pub fn numerically_eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }

    /// `(a, b)` as a plain pair.
    pub fn coords(&self) -> (T, T) {
        (self.a.clone(), self.b.clone())
    }
}

impl<T: Scalar> From<(T, T)> for DivisorClass<T> {
    fn from((a, b): (T, T)) -> Self {
        Self::new(a, b)
    }
}

impl<T: Scalar> Add<&DivisorClass<T>> for &DivisorClass<T> {
    type Output = DivisorClass<T>;
    fn add(self, rhs: &DivisorClass<T>) -> DivisorClass<T> {
        DivisorClass {
            a: self.a.clone() + rhs.a.clone(),
            b: self.b.clone() + rhs.b.clone(),
            twist: self.twist.clone() + &rhs.twist,
        }
    }
}

impl<T: Scalar> Sub<&DivisorClass<T>> for &DivisorClass<T> {
    type Output = DivisorClass<T>;
    fn sub(self, rhs: &DivisorClass<T>) -> DivisorClass<T> {
        DivisorClass {
            a: self.a.clone() - rhs.a.clone(),
            b: self.b.clone() - rhs.b.clone(),
            twist: self.twist.clone() - &rhs.twist,
        }
    }
}

impl<T: Scalar> Add for DivisorClass<T> {
    type Output = DivisorClass<T>;
    fn add(self, rhs: DivisorClass<T>) -> DivisorClass<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for DivisorClass<T> {
    type Output = DivisorClass<T>;
    fn sub(self, rhs: DivisorClass<T>) -> DivisorClass<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Neg for &DivisorClass<T> {
    type Output = DivisorClass<T>;
    fn neg(self) -> DivisorClass<T> {
        DivisorClass {
            a: -self.a.clone(),
            b: -self.b.clone(),
            twist: -self.twist.clone(),
        }
    }
}

/// Integer multiple; the twist is scaled formally as well.
impl<T: Scalar> Mul<&DivisorClass<T>> for i64 {
    type Output = DivisorClass<T>;
    fn mul(self, rhs: &DivisorClass<T>) -> DivisorClass<T> {
        let k = T::lit(self);
        let mut twist = TwistLabel::zero();
        for _ in 0..self.unsigned_abs() {
            twist = twist + &rhs.twist;
        }
        if self < 0 {
            twist = -twist;
        }
        DivisorClass {
            a: k.clone() * rhs.a.clone(),
            b: k * rhs.b.clone(),
            twist,
        }
    }
}

impl<T: fmt::Display> fmt::Display for DivisorClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)?;
        if !self.twist.is_zero() {
            write!(f, "[{}]", self.twist)?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for DivisorClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.a, self.b)?;
        if !self.twist.is_zero() {
            write!(f, "[{}]", self.twist)?;
        }
        Ok(())
    }
}

/// A geometrically ruled surface over a genus-`g` curve with invariant `e ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuledSurface<T> {
    g: T,
    e: T,
    k_twist: TwistLabel,
}

impl<T: Scalar> RuledSurface<T> {
    pub fn new(g: T, e: T) -> Result<Self> {
        if g.is_negative() || e < T::one() {
            return Err(Error::InvalidSurface {
                g: g.to_string(),
                e: e.to_string(),
            });
        }
        Ok(RuledSurface {
            g,
            e,
            k_twist: TwistLabel::canonical(),
        })
    }

    /// The Hirzebruch surface `F_e` (base curve of genus 0).
    pub fn hirzebruch(e: T) -> Result<Self> {
        Self::new(T::zero(), e)
    }

    pub fn genus(&self) -> &T {
        &self.g
    }

    pub fn invariant(&self) -> &T {
        &self.e
    }

    pub fn canonical_twist(&self) -> &TwistLabel {
        &self.k_twist
    }

    /// `χ(O_X) = 1 - g`.
    pub fn chi_structure_sheaf(&self) -> T {
        T::one() - self.g.clone()
    }

    /// `d1·d2 = -a1·a2·e + a1·b2 + a2·b1`.
    pub fn intersect(&self, d1: &DivisorClass<T>, d2: &DivisorClass<T>) -> T {
        let (a1, b1) = d1.coords();
        let (a2, b2) = d2.coords();
        -(a1.clone() * a2.clone() * self.e.clone()) + a1 * b2 + a2 * b1
    }

    pub fn self_intersection(&self, d: &DivisorClass<T>) -> T {
        self.intersect(d, d)
    }

    /// `K = -2C0 + (2g-2-e)F ⊗ k`.
    pub fn canonical_class(&self) -> DivisorClass<T> {
        let two = T::lit(2);
        DivisorClass::new(
            -two.clone(),
            two * self.g.clone() - T::lit(2) - self.e.clone(),
        )
        .with_twist(self.k_twist.clone())
    }

    /// Riemann–Roch for a line bundle in factored form:
    /// `χ(aC0 + bF) = (a+1)(b+1-g) - (a+1)·a·e/2`.
    pub fn euler_char_line(&self, d: &DivisorClass<T>) -> Result<T> {
        let (a, b) = d.coords();
        let a1 = a.clone() + T::one();
        let half = exact_half(a1.clone() * a * self.e.clone(), "euler_char_line")?;
        Ok(a1 * (b + T::one() - self.g.clone()) - half)
    }

    /// `χ(O) + ½·d·(d-K)`, the unfactored Riemann–Roch form.
    pub fn euler_char_line_rr(&self, d: &DivisorClass<T>) -> Result<T> {
        let k = self.canonical_class();
        let dk = d - &k;
        let half = exact_half(self.intersect(d, &dk), "euler_char_line_rr")?;
        Ok(self.chi_structure_sheaf() + half)
    }

    /// Riemann–Roch for a rank-2 bundle: `2χ(O) + ½·c1·(c1-K) - c2`.
    pub fn rank2_chi(&self, c1: &DivisorClass<T>, c2: &T) -> Result<T> {
        let k = self.canonical_class();
        let half = exact_half(self.intersect(c1, &(c1 - &k)), "rank2_chi")?;
        Ok(T::lit(2) * self.chi_structure_sheaf() + half - c2.clone())
    }

    /// Chern classes of `E ⊗ O(d)` for a rank-2 `E`:
    /// `(c1 + 2d, c2 + c1·d + d²)`.
    pub fn twist_chern(
        &self,
        c1: &DivisorClass<T>,
        c2: &T,
        d: &DivisorClass<T>,
    ) -> (DivisorClass<T>, T) {
        let new_c1 = c1 + &(2 * d);
        let new_c2 = c2.clone() + self.intersect(c1, d) + self.self_intersection(d);
        (new_c1, new_c2)
    }
}

/// A polarization `H ≡ αC0 + βF` with `α ≥ 1` and `β > αe`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polarization<T> {
    alpha: T,
    beta: T,
}

impl<T: Scalar> Polarization<T> {
    pub fn new(alpha: T, beta: T, surface: &RuledSurface<T>) -> Result<Self> {
        let bound = alpha.clone() * surface.invariant().clone();
        if alpha < T::one() || beta <= bound {
            return Err(Error::InvalidPolarization {
                alpha: alpha.to_string(),
                beta: beta.to_string(),
                e: surface.invariant().to_string(),
            });
        }
        Ok(Polarization { alpha, beta })
    }

    pub fn alpha(&self) -> &T {
        &self.alpha
    }

    pub fn beta(&self) -> &T {
        &self.beta
    }

    pub fn class(&self) -> DivisorClass<T> {
        DivisorClass::new(self.alpha.clone(), self.beta.clone())
    }
}
