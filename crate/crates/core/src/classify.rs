//! Ulrich line bundles: the pairing `L ↦ K + 3H − L`, the χ-vanishing test,
//! and the closed-form classification (a pair of classes exactly when α = 1).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::{DivisorClass, Polarization, RuledSurface};
use crate::oracle::{search_ulrich_lines, SearchBox};
use crate::scalar::{exact_half, Scalar};
use crate::twist::{Genericity, TwistLabel};

/// `K + 3H − d`. The twist becomes `k − (twist of d)`.
pub fn ulrich_pair<T: Scalar>(
    d: &DivisorClass<T>,
    h: &Polarization<T>,
    s: &RuledSurface<T>,
) -> DivisorClass<T> {
    let target = &s.canonical_class() + &(3 * &h.class());
    &target - d
}

/// `½·H·(K + 3H)`, the degree every Ulrich line bundle has.
pub fn ulrich_degree<T: Scalar>(h: &Polarization<T>, s: &RuledSurface<T>) -> Result<T> {
    let hc = h.class();
    let target = &s.canonical_class() + &(3 * &hc);
    exact_half(s.intersect(&hc, &target), "ulrich_degree")
}

/// Necessary condition: `χ(d − H) = χ(d − 2H) = 0`.
///
/// Classes passing this are numeric candidates only; full vanishing also
/// needs the genericity of the twist.
pub fn numeric_ulrich_line<T: Scalar>(
    d: &DivisorClass<T>,
    h: &Polarization<T>,
    s: &RuledSurface<T>,
) -> Result<bool> {
    let hc = h.class();
    let once = d - &hc;
    let twice = &once - &hc;
    let ok = s.euler_char_line(&once)?.is_zero() && s.euler_char_line(&twice)?.is_zero();
    if ok {
        // χ(d−2H) = χ(d−H) − H·d + ½H·(K+3H)
        assert_eq!(
            s.intersect(&hc, d),
            ulrich_degree(h, s)?,
            "χ-vanishing without the degree identity"
        );
    }
    Ok(ok)
}

/// Which factor of `χ(aC0 + bF) = (a+1)(b+1−g−ae/2)` vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChiZeroLine {
    /// `a = −1`.
    SectionCoefficient,
    /// `2b = 2(g−1) + a·e`.
    FibreCoefficient,
    /// Both factors vanish (`a = −1` and `2b = 2(g−1) − e`).
    Both,
}

pub fn chi_zero_line<T: Scalar>(d: &DivisorClass<T>, s: &RuledSurface<T>) -> Option<ChiZeroLine> {
    let two = T::lit(2);
    let on_section = d.a == -T::one();
    let on_fibre = two.clone() * d.b.clone()
        == two * (s.genus().clone() - T::one()) + d.a.clone() * s.invariant().clone();
    match (on_section, on_fibre) {
        (true, true) => Some(ChiZeroLine::Both),
        (true, false) => Some(ChiZeroLine::SectionCoefficient),
        (false, true) => Some(ChiZeroLine::FibreCoefficient),
        (false, false) => None,
    }
}

/// If both `D1 = L1 − H` and `D2 = L2 − H` sat on the fibre-coefficient line,
/// summing the two equations against `D1 + D2 = K + H` pins `2β = α·e`.
/// Returns that forced value of `2β`.
pub fn twice_beta_forced_by_fibre_lines<T: Scalar>(alpha: &T, s: &RuledSurface<T>) -> T {
    // 2(b1+b2) = 4(g−1) + (a1+a2)e and b1+b2 = β+2(g−1)−e, a1+a2 = α−2.
    let e = s.invariant().clone();
    let g1 = s.genus().clone() - T::one();
    let two = T::lit(2);
    let sum_a = alpha.clone() - two.clone();
    let twice_sum_b = two.clone() * two.clone() * g1.clone() + sum_a * e.clone();
    // 2β = 2(b1+b2) − 4(g−1) + 2e
    twice_sum_b - two.clone() * two.clone() * g1 + two * e
}

/// If both `D1` and `D2` had section coefficient −1, `a1 + a2 = α − 2` forces this α.
pub fn alpha_forced_by_section_lines<T: Scalar>() -> T {
    let minus_one = -T::one();
    minus_one.clone() + minus_one + T::lit(2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Classification<T> {
    /// No Ulrich line bundles.
    Empty,
    /// The two Ulrich classes; `l1` is the fibre multiple.
    Pair {
        l1: DivisorClass<T>,
        l2: DivisorClass<T>,
        genericity: Vec<Genericity<T>>,
    },
}

impl<T: Scalar> Classification<T> {
    pub fn classes(&self) -> Vec<DivisorClass<T>> {
        match self {
            Classification::Empty => Vec::new(),
            Classification::Pair { l1, l2, .. } => vec![l1.clone(), l2.clone()],
        }
    }

    pub fn is_pair(&self) -> bool {
        matches!(self, Classification::Pair { .. })
    }
}

/// Closed-form answer: empty for α ≥ 2; for α = 1 the classes
/// `L1 = (2β+g−1−e)F ⊗ L1` and `L2 = C0 + (β+g−1)F ⊗ (k − L1)`.
pub fn classify_line_bundles<T: Scalar>(
    s: &RuledSurface<T>,
    h: &Polarization<T>,
) -> Classification<T> {
    if !h.alpha().is_one() {
        return Classification::Empty;
    }
    let g = s.genus().clone();
    let e = s.invariant().clone();
    let beta = h.beta().clone();
    let one = T::one();
    let l1_twist = TwistLabel::generator("L1");
    let l2_twist = (s.canonical_twist().clone() - &l1_twist).named("L2");
    let l1 = DivisorClass::new(
        T::zero(),
        T::lit(2) * beta.clone() + g.clone() - one.clone() - e,
    )
    .with_twist(l1_twist.clone());
    let l2 = DivisorClass::new(one.clone(), beta + g - one).with_twist(l2_twist.clone());
    debug_assert!(ulrich_pair(&l1, h, s) == l2);
    Classification::Pair {
        l1,
        l2,
        genericity: vec![
            Genericity::GeneralTwist { label: l1_twist },
            Genericity::GeneralTwist { label: l2_twist },
        ],
    }
}

/// Exhaustive oracle scan on `F_e` against the closed form, compared as sets
/// of numerical classes.
pub fn reconcile_with_oracle<T: Scalar>(
    e: &T,
    h: &Polarization<T>,
    area: &SearchBox<T>,
) -> Result<bool> {
    let s = RuledSurface::hirzebruch(e.clone())?;
    let scanned = search_ulrich_lines(e, h, area)?;
    let mut expected: Vec<_> = classify_line_bundles(&s, h)
        .classes()
        .iter()
        .map(DivisorClass::untwisted)
        .filter(|d| area.contains(d))
        .collect();
    expected.sort_by_key(DivisorClass::coords);
    Ok(scanned == expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surf(g: i64, e: i64) -> RuledSurface<i64> {
        RuledSurface::new(g, e).unwrap()
    }

    fn pol(alpha: i64, beta: i64, s: &RuledSurface<i64>) -> Polarization<i64> {
        Polarization::new(alpha, beta, s).unwrap()
    }

    #[test]
    fn pairing_is_an_involution() {
        let s = surf(2, 3);
        let h = pol(2, 7, &s);
        let d = DivisorClass::new(4, -5).with_twist(TwistLabel::generator("M"));
        let back = ulrich_pair(&ulrich_pair(&d, &h, &s), &h, &s);
        assert_eq!(back, d);
    }

    #[test]
    fn pairing_on_f1() {
        let s = surf(0, 1);
        let h = pol(1, 2, &s);
        let p = ulrich_pair(&DivisorClass::new(0, 2), &h, &s);
        assert_eq!(p.coords(), (1, 1));
        assert_eq!(p.twist, TwistLabel::canonical());
    }

    #[test]
    fn pair_of_l1_is_l2_for_all_genera() {
        for g in 0..5 {
            for e in 1..4 {
                let s = surf(g, e);
                let h = pol(1, e + 3, &s);
                match classify_line_bundles(&s, &h) {
                    Classification::Pair { l1, l2, .. } => {
                        assert_eq!(ulrich_pair(&l1, &h, &s), l2);
                        assert_eq!(l2.coords(), (1, e + 3 + g - 1));
                        assert_eq!(l2.twist.expression(), "k-L1");
                    }
                    Classification::Empty => panic!("alpha = 1 must give a pair"),
                }
            }
        }
    }

    #[test]
    fn numeric_condition_examples() {
        for (g, e, beta) in [(0, 1, 2), (3, 2, 7), (5, 4, 6)] {
            let s = surf(g, e);
            let h = pol(1, beta, &s);
            let l1 = DivisorClass::new(0, 2 * beta + g - 1 - e);
            assert!(numeric_ulrich_line(&l1, &h, &s).unwrap());
        }
        let s = surf(0, 1);
        let h = pol(1, 2, &s);
        assert!(!numeric_ulrich_line(&DivisorClass::zero(), &h, &s).unwrap());
        assert_eq!(s.euler_char_line(&DivisorClass::new(-1, -2)).unwrap(), 0);
        assert_eq!(s.euler_char_line(&DivisorClass::new(-2, -4)).unwrap(), 2);
    }

    #[test]
    fn chi_zero_set_is_the_two_solution_lines() {
        for g in 0..4 {
            for e in 1..5 {
                let s = surf(g, e);
                for a in -6..6 {
                    for b in -20..20 {
                        let d = DivisorClass::new(a, b);
                        let zero = s.euler_char_line(&d).unwrap() == 0;
                        assert_eq!(zero, chi_zero_line(&d, &s).is_some(), "{g} {e} {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn classification_examples() {
        let s = surf(0, 1);
        match classify_line_bundles(&s, &pol(1, 2, &s)) {
            Classification::Pair { l1, l2, genericity } => {
                assert_eq!(l1.coords(), (0, 2));
                assert_eq!(l2.coords(), (1, 1));
                assert_eq!(genericity.len(), 2);
            }
            _ => panic!(),
        }
        for g in 0..4 {
            let s = surf(g, 2);
            assert_eq!(
                classify_line_bundles(&s, &pol(3, 7, &s)),
                Classification::Empty
            );
        }
        let s = surf(2, 1);
        let c = classify_line_bundles(&s, &pol(1, 5, &s));
        let coords: Vec<_> = c.classes().iter().map(|d| d.coords()).collect();
        assert_eq!(coords, vec![(0, 10), (1, 6)]);
    }

    #[test]
    fn reconcile_examples() {
        let s1 = surf(0, 1);
        let s2 = surf(0, 2);
        for (e, h) in [
            (1, pol(1, 2, &s1)),
            (2, pol(1, 4, &s2)),
            (1, pol(2, 3, &s1)),
        ] {
            assert!(reconcile_with_oracle(&e, &h, &SearchBox::default_for(&h)).unwrap());
        }
    }

    #[test]
    fn impossible_branches() {
        for g in 0..4 {
            for e in 1..5 {
                let s = surf(g, e);
                for alpha in 1..6 {
                    assert_eq!(twice_beta_forced_by_fibre_lines(&alpha, &s), alpha * e);
                }
            }
        }
        assert_eq!(alpha_forced_by_section_lines::<i64>(), 0);
    }
}
