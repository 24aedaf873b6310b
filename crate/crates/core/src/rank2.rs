//! Rank-2 special Ulrich bundles (`c1 = K + 3H`) as extensions
//! `0 → O(A) → E → I_Z(B) → 0`, described by their numerical data.
//!
//! * α = 1: an extension of the two Ulrich line bundles, `Z = ∅`.
//! * α = 2: `A = 2C0 + (β+g−1)F`, `B = 2C0 + (2β+g−1−e)F`, `ℓ(Z) = β − e`.
//! * α ≥ 3: `A = αC0 + (β+g−1)F`, `B = (2α−2)C0 + (2β+g−1−e)F`,
//!   `ℓ(Z) = (α−1)(β − eα/2)`, under `2β > max{(α−3)(g−1)+eα, (g−1)+eα}`.
//!
//! Every constructor re-derives `c1` and `c2` and checks them against
//! `K + 3H` and `½H·(5H+3K) + 2χ(O)` before returning.

use serde::{Deserialize, Serialize};

use crate::error::{CondBranch, Error, Result};
use crate::lattice::{DivisorClass, Polarization, RuledSurface};
use crate::scalar::{exact_half, Scalar};
use crate::twist::{Genericity, TwistLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    StrictlySemistable,
    Stable,
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stability::StrictlySemistable => "strictly_semistable",
            Stability::Stable => "stable",
        })
    }
}

/// Numerical data of one family of rank-2 special Ulrich bundles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct ExtensionData<T> {
    pub sub: DivisorClass<T>,
    pub quot: DivisorClass<T>,
    pub z_length: T,
    pub c1: DivisorClass<T>,
    pub c2: T,
    /// `dim Ext¹(L1, L2)`, α = 1 only.
    pub ext_dim: Option<T>,
    /// Dimension of the family of extensions, α = 1 only.
    pub family_dim: Option<T>,
    pub stability: Stability,
    pub genericity: Vec<Genericity<T>>,
}

/// `c2 = ½·H·(5H + 3K) + 2χ(O_X)`.
pub fn special_c2<T: Scalar>(s: &RuledSurface<T>, h: &Polarization<T>) -> Result<T> {
    let hc = h.class();
    let k = s.canonical_class();
    let five_h_three_k = &(5 * &hc) + &(3 * &k);
    let half = exact_half(s.intersect(&hc, &five_h_three_k), "special_c2")?;
    let c2 = half + T::lit(2) * s.chi_structure_sheaf();
    let explicit = special_c2_polynomial(s, h)?;
    if c2 != explicit {
        return Err(Error::Internal(format!(
            "c2 forms disagree: {c2} (intersection form) vs {explicit} (polynomial)"
        )));
    }
    Ok(c2)
}

/// The same `c2` written out in the coefficients:
/// `−α(5α−3)e/2 + β(5α−3) + (3α−2)(g−1)`.
pub fn special_c2_polynomial<T: Scalar>(s: &RuledSurface<T>, h: &Polarization<T>) -> Result<T> {
    let (alpha, beta) = (h.alpha().clone(), h.beta().clone());
    let (g, e) = (s.genus().clone(), s.invariant().clone());
    let five_a3 = T::lit(5) * alpha.clone() - T::lit(3);
    let half = exact_half(alpha.clone() * five_a3.clone() * e, "special_c2_polynomial")?;
    Ok(-half + beta * five_a3 + (T::lit(3) * alpha - T::lit(2)) * (g - T::one()))
}

/// `(χ(E(−H)), χ(E(−2H)))` for a rank-2 bundle with the given Chern classes.
pub fn initialized_chis<T: Scalar>(
    s: &RuledSurface<T>,
    h: &Polarization<T>,
    c1: &DivisorClass<T>,
    c2: &T,
) -> Result<(T, T)> {
    let hc = h.class();
    let (c1_h, c2_h) = s.twist_chern(c1, c2, &(-&hc));
    let (c1_2h, c2_2h) = s.twist_chern(c1, c2, &(-2 * &hc));
    Ok((s.rank2_chi(&c1_h, &c2_h)?, s.rank2_chi(&c1_2h, &c2_2h)?))
}

/// `c1 = K + 3H`.
pub fn special_c1<T: Scalar>(s: &RuledSurface<T>, h: &Polarization<T>) -> DivisorClass<T> {
    &s.canonical_class() + &(3 * &h.class())
}

/// The χ half of the "initialized ⟺ Ulrich" reduction: both twisted Euler
/// characteristics vanish for `c1 = K + 3H` and the special `c2`.
pub fn verify_initialized_reduction<T: Scalar>(
    s: &RuledSurface<T>,
    h: &Polarization<T>,
) -> Result<bool> {
    let (x1, x2) = initialized_chis(s, h, &special_c1(s, h), &special_c2(s, h)?)?;
    Ok(x1.is_zero() && x2.is_zero())
}

/// Branches of `2β > max{(α−3)(g−1)+eα, (g−1)+eα}` that fail. Empty means it holds.
pub fn violated_condition<T: Scalar>(s: &RuledSurface<T>, h: &Polarization<T>) -> Vec<CondBranch> {
    let (alpha, beta) = (h.alpha().clone(), h.beta().clone());
    let g1 = s.genus().clone() - T::one();
    let e_alpha = s.invariant().clone() * alpha.clone();
    let two_beta = T::lit(2) * beta;
    let mut out = Vec::new();
    if two_beta <= (alpha - T::lit(3)) * g1.clone() + e_alpha.clone() {
        out.push(CondBranch::Budget);
    }
    if two_beta <= g1 + e_alpha {
        out.push(CondBranch::Genus);
    }
    out
}

fn require_condition<T: Scalar>(s: &RuledSurface<T>, h: &Polarization<T>) -> Result<()> {
    let branches = violated_condition(s, h);
    if branches.is_empty() {
        Ok(())
    } else {
        Err(Error::ConditionViolated { branches })
    }
}

/// `ℓ(Z) = (α−1)(2β − eα)/2`, exact.
pub fn ideal_length<T: Scalar>(s: &RuledSurface<T>, h: &Polarization<T>) -> Result<T> {
    let alpha = h.alpha().clone();
    let doubled =
        (alpha.clone() - T::one()) * (T::lit(2) * h.beta().clone() - s.invariant().clone() * alpha);
    exact_half(doubled, "ideal_length")
}

/// Sub and quotient classes of the ideal-sheaf extension, with `ℓ(Z)`, from
/// the α ≥ 3 formulas. No range check on α, so it can be evaluated at α = 2.
pub fn ideal_extension_recipe<T: Scalar>(
    s: &RuledSurface<T>,
    h: &Polarization<T>,
) -> Result<(DivisorClass<T>, DivisorClass<T>, T)> {
    let (alpha, beta) = (h.alpha().clone(), h.beta().clone());
    let (g, e) = (s.genus().clone(), s.invariant().clone());
    let one = T::one();
    let two = T::lit(2);
    let l1 = TwistLabel::generator("L1");
    let l2 = (s.canonical_twist().clone() - &l1).named("L2");
    let sub =
        DivisorClass::new(alpha.clone(), beta.clone() + g.clone() - one.clone()).with_twist(l1);
    let quot = DivisorClass::new(two.clone() * alpha - two.clone(), two * beta + g - one - e)
        .with_twist(l2);
    Ok((sub, quot, ideal_length(s, h)?))
}

fn alpha2_recipe<T: Scalar>(
    s: &RuledSurface<T>,
    h: &Polarization<T>,
) -> (DivisorClass<T>, DivisorClass<T>, T) {
    let beta = h.beta().clone();
    let (g, e) = (s.genus().clone(), s.invariant().clone());
    let one = T::one();
    let two = T::lit(2);
    let l1 = TwistLabel::generator("L1");
    let l2 = (s.canonical_twist().clone() - &l1).named("L2");
    let sub = DivisorClass::new(two.clone(), beta.clone() + g.clone() - one.clone()).with_twist(l1);
    let quot =
        DivisorClass::new(two.clone(), two * beta.clone() + g - one - e.clone()).with_twist(l2);
    (sub, quot, beta - e)
}

/// The α = 2 recipe on its own, for comparison with the α ≥ 3 formulas.
pub fn construct_alpha2_recipe<T: Scalar>(
    s: &RuledSurface<T>,
    h: &Polarization<T>,
) -> Result<(DivisorClass<T>, DivisorClass<T>, T)> {
    if *h.alpha() != T::lit(2) {
        return Err(Error::Internal(format!(
            "alpha = 2 recipe called with alpha = {}",
            h.alpha()
        )));
    }
    Ok(alpha2_recipe(s, h))
}

/// Builds the numerical data of a rank-2 special Ulrich bundle for `H`.
pub fn construct_rank2<T: Scalar>(
    s: &RuledSurface<T>,
    h: &Polarization<T>,
) -> Result<ExtensionData<T>> {
    let alpha = h.alpha().clone();
    let (g, e, beta) = (s.genus().clone(), s.invariant().clone(), h.beta().clone());
    let two = T::lit(2);

    let data = if alpha.is_one() {
        let l1 = TwistLabel::generator("L1");
        let l2 = (s.canonical_twist().clone() - &l1).named("L2");
        let sub =
            DivisorClass::new(T::one(), beta.clone() + g.clone() - T::one()).with_twist(l2.clone());
        let quot = DivisorClass::new(
            T::zero(),
            two.clone() * beta.clone() + g.clone() - T::one() - e.clone(),
        )
        .with_twist(l1.clone());
        let ext_dim = two.clone() * beta.clone() - e.clone() + two.clone() * (g.clone() - T::one());
        // dim Ext¹(L1, L2) = h1(L2 − L1) = −χ(L2 − L1)
        let by_chi = -s.euler_char_line(&(&sub - &quot))?;
        if by_chi != ext_dim {
            return Err(Error::Internal(format!(
                "ext dimension {ext_dim} disagrees with -chi(L2-L1) = {by_chi}"
            )));
        }
        let family_dim = two * beta - e + T::lit(4) * g - T::lit(3);
        ExtensionData {
            c1: &sub + &quot,
            c2: s.intersect(&sub, &quot),
            sub,
            quot,
            z_length: T::zero(),
            ext_dim: Some(ext_dim),
            family_dim: Some(family_dim),
            stability: Stability::StrictlySemistable,
            genericity: vec![
                Genericity::GeneralTwist { label: l1 },
                Genericity::GeneralTwist { label: l2 },
            ],
        }
    } else {
        let (sub, quot, z_length) = if alpha == two {
            alpha2_recipe(s, h)
        } else {
            require_condition(s, h)?;
            ideal_extension_recipe(s, h)?
        };
        let mut genericity = vec![
            Genericity::GeneralTwist {
                label: sub.twist.clone(),
            },
            Genericity::GeneralSubscheme {
                length: z_length.clone(),
            },
        ];
        if alpha == two {
            genericity.push(Genericity::GeneralTwist {
                label: quot.twist.clone(),
            });
            genericity.push(Genericity::DistinctBasePoints {
                count: z_length.clone(),
            });
        }
        ExtensionData {
            c1: &sub + &quot,
            c2: s.intersect(&sub, &quot) + z_length.clone(),
            sub,
            quot,
            z_length,
            ext_dim: None,
            family_dim: None,
            stability: Stability::Stable,
            genericity,
        }
    };

    if data.c1 != special_c1(s, h) {
        return Err(Error::Internal(format!(
            "c1 = {} is not K + 3H = {}",
            data.c1,
            special_c1(s, h)
        )));
    }
    let expected_c2 = special_c2(s, h)?;
    if data.c2 != expected_c2 {
        return Err(Error::Internal(format!(
            "c2 = {} differs from the special value {expected_c2}",
            data.c2
        )));
    }
    Ok(data)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyBacharachBudget<T> {
    /// `h0` of the linear system `Z` must impose independent conditions on.
    pub h0_budget: T,
    pub z_length: T,
    /// `h0_budget ≤ ℓ(Z) − 1`.
    pub ok: bool,
}

/// `(α−3)(g−1+β−eα/2)` against `ℓ(Z) − 1`, for α ≥ 3 under the condition.
pub fn cayley_bacharach_budget<T: Scalar>(
    s: &RuledSurface<T>,
    h: &Polarization<T>,
) -> Result<CayleyBacharachBudget<T>> {
    let alpha = h.alpha().clone();
    if alpha < T::lit(3) {
        return Err(Error::AlphaTooSmall("Cayley-Bacharach budget", 3));
    }
    require_condition(s, h)?;
    let (g, e, beta) = (s.genus().clone(), s.invariant().clone(), h.beta().clone());
    let two = T::lit(2);
    let doubled = (alpha.clone() - T::lit(3))
        * (two.clone() * (g - T::one()) + two * beta.clone() - e.clone() * alpha.clone());
    let h0_budget = exact_half(doubled, "cayley_bacharach_budget")?;

    // The same number as χ(K + (α−2)C0 + (β−e)F).
    let system = &s.canonical_class() + &DivisorClass::new(alpha - T::lit(2), beta - e);
    let by_chi = s.euler_char_line(&system)?;
    if by_chi != h0_budget {
        return Err(Error::Internal(format!(
            "budget {h0_budget} disagrees with chi of the linear system {by_chi}"
        )));
    }
    let z_length = ideal_length(s, h)?;
    let ok = h0_budget <= z_length.clone() - T::one();
    Ok(CayleyBacharachBudget {
        h0_budget,
        z_length,
        ok,
    })
}

/// `−α(α−1)e/2 + (α−1)β`, the number of sections `Z` has to kill in the
/// initializedness step. Zero at α = 1.
pub fn step2_section_count<T: Scalar>(s: &RuledSurface<T>, h: &Polarization<T>) -> Result<T> {
    let alpha = h.alpha().clone();
    let a1 = alpha.clone() - T::one();
    let half = exact_half(
        alpha * a1.clone() * s.invariant().clone(),
        "step2_section_count",
    )?;
    Ok(-half + a1 * h.beta().clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport<T> {
    /// `H·A` for the sub-line bundle `A`.
    pub sub_degree: T,
    /// `½·H·c1`, i.e. the slope of `E`.
    pub slope: T,
    pub stability: Stability,
    /// `Some(true)` when `H·A = ½H·c1` was checked (α = 1).
    pub slopes_equal: Option<bool>,
    pub justification: String,
}

pub fn stability_report<T: Scalar>(
    s: &RuledSurface<T>,
    h: &Polarization<T>,
    x: &ExtensionData<T>,
) -> Result<StabilityReport<T>> {
    let hc = h.class();
    let sub_degree = s.intersect(&hc, &x.sub);
    let slope = exact_half(s.intersect(&hc, &x.c1), "slope")?;
    if h.alpha().is_one() {
        if sub_degree != slope {
            return Err(Error::Internal(format!(
                "alpha = 1 but H.sub = {sub_degree} differs from slope {slope}"
            )));
        }
        Ok(StabilityReport {
            sub_degree,
            slope,
            stability: Stability::StrictlySemistable,
            slopes_equal: Some(true),
            justification: "the Ulrich sub-line bundle has the same slope as E".to_string(),
        })
    } else {
        Ok(StabilityReport {
            sub_degree,
            slope,
            stability: x.stability,
            slopes_equal: None,
            justification: "Ulrich bundles are semistable, and a destabilizing subsheaf would be \
                            an Ulrich line bundle, which does not exist for alpha >= 2"
                .to_string(),
        })
    }
}
