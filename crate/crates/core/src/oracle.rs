//! Exact line-bundle cohomology on Hirzebruch surfaces `F_e`.
//!
//! For `a ≥ 0`, `π_* O(aC0 + bF) = ⊕_{k=0..a} O_P1(b - ke)` and the higher
//! direct image vanishes, so `h0` and `h1` are sums of `P1` section counts and
//! `h2 = 0`. For `a = -1` every direct image vanishes. For `a ≤ -2` we use
//! Serre duality `h^i(D) = h^{2-i}(K - D)`, which lands back in `a ≥ 0`.
//!
//! Nothing here uses the classification results; it is an independent check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, Polarization};
use crate::scalar::{exact_half, max, min, Scalar};

/// `(h0, h1, h2)` of a line bundle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohTable<T> {
    pub h0: T,
    pub h1: T,
    pub h2: T,
}

impl<T: Scalar> CohTable<T> {
    pub fn euler_characteristic(&self) -> T {
        self.h0.clone() - self.h1.clone() + self.h2.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.h0.is_zero() && self.h1.is_zero() && self.h2.is_zero()
    }

    /// Entry `h^i`, for `i` in `0..=2`.
    pub fn h(&self, i: usize) -> &T {
        match i {
            0 => &self.h0,
            1 => &self.h1,
            2 => &self.h2,
            _ => panic!("cohomological degree {i} out of range on a surface"),
        }
    }

    fn dual(self) -> Self {
        CohTable {
            h0: self.h2,
            h1: self.h1,
            h2: self.h0,
        }
    }
}

fn check_invariant<T: Scalar>(e: &T) -> Result<()> {
    if *e < T::one() {
        return Err(Error::InvalidSurface {
            g: "0".into(),
            e: e.to_string(),
        });
    }
    Ok(())
}

/// `Σ_{k=0..a} h0(O_P1(b - ke))` and `Σ_{k=0..a} h1(O_P1(b - ke))` for `a ≥ 0`,
/// summed in closed form.
fn pushforward_sums<T: Scalar>(e: &T, a: &T, b: &T) -> Result<(T, T)> {
    let one = T::one();
    let b1 = b.clone() + one.clone();

    // h0 terms b + 1 - ke are positive for 0 ≤ k ≤ floor(b / e).
    let h0 = if b.is_negative() {
        T::zero()
    } else {
        let m = min(a.clone(), b.div_floor(e));
        let m1 = m.clone() + one.clone();
        m1.clone() * b1.clone() - e.clone() * exact_half(m * m1, "h0 sum")?
    };

    // h1 terms ke - b - 1 are positive for k ≥ floor((b + 1) / e) + 1.
    let lo = max(b1.div_floor(e) + one.clone(), T::zero());
    let h1 = if lo > *a {
        T::zero()
    } else {
        let n = a.clone() - lo.clone() + one;
        let k_sum = exact_half((lo + a.clone()) * n.clone(), "h1 sum")?;
        e.clone() * k_sum - n * b1
    };
    Ok((h0, h1))
}

/// Cohomology of the untwisted line bundle `O(d)` on `F_e`.
pub fn cohomology<T: Scalar>(e: &T, d: &DivisorClass<T>) -> Result<CohTable<T>> {
    check_invariant(e)?;
    if d.is_twisted() {
        return Err(Error::TwistedClass(d.twist.to_string()));
    }
    let minus_one = -T::one();
    if d.a >= T::zero() {
        let (h0, h1) = pushforward_sums(e, &d.a, &d.b)?;
        Ok(CohTable {
            h0,
            h1,
            h2: T::zero(),
        })
    } else if d.a == minus_one {
        Ok(CohTable {
            h0: T::zero(),
            h1: T::zero(),
            h2: T::zero(),
        })
    } else {
        // K - d on F_e: (-2 - a, -2 - e - b), whose section coefficient is ≥ 0.
        let two = T::lit(2);
        let dual = DivisorClass::new(-two.clone() - d.a.clone(), -two - e.clone() - d.b.clone());
        let (h0, h1) = pushforward_sums(e, &dual.a, &dual.b)?;
        Ok(CohTable {
            h0,
            h1,
            h2: T::zero(),
        }
        .dual())
    }
}

/// Full-vanishing Ulrich test for a line bundle: all cohomology of `d - H`
/// and of `d - 2H` is zero.
pub fn is_ulrich_line<T: Scalar>(e: &T, h: &Polarization<T>, d: &DivisorClass<T>) -> Result<bool> {
    let hc = h.class();
    let once = d - &hc;
    if !cohomology(e, &once)?.is_zero() {
        return Ok(false);
    }
    let twice = &once - &hc;
    Ok(cohomology(e, &twice)?.is_zero())
}

/// An inclusive rectangle of `(a, b)` coefficients. Empty when either range is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox<T> {
    pub a_min: T,
    pub a_max: T,
    pub b_min: T,
    pub b_max: T,
}

impl<T: Scalar> SearchBox<T> {
    pub fn new(a_min: T, a_max: T, b_min: T, b_max: T) -> Self {
        SearchBox {
            a_min,
            a_max,
            b_min,
            b_max,
        }
    }

    /// `a ∈ [-2, 3α+3]`, `b ∈ [-3β-3, 3β+3]`.
    pub fn default_for(h: &Polarization<T>) -> Self {
        let three = T::lit(3);
        let a_max = three.clone() * h.alpha().clone() + three.clone();
        let b_max = three.clone() * h.beta().clone() + three;
        SearchBox {
            a_min: T::lit(-2),
            a_max,
            b_min: -b_max.clone(),
            b_max,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.a_min > self.a_max || self.b_min > self.b_max
    }

    pub fn contains(&self, d: &DivisorClass<T>) -> bool {
        self.a_min <= d.a && d.a <= self.a_max && self.b_min <= d.b && d.b <= self.b_max
    }

    /// Every class of the box in lexicographic `(a, b)` order.
    pub fn classes(&self) -> Vec<DivisorClass<T>> {
        let bs = span(&self.b_min, &self.b_max);
        span(&self.a_min, &self.a_max)
            .into_iter()
            .flat_map(|a| {
                bs.iter()
                    .map(move |b| DivisorClass::new(a.clone(), b.clone()))
            })
            .collect()
    }
}

fn span<T: Scalar>(lo: &T, hi: &T) -> Vec<T> {
    let mut out = Vec::new();
    let mut x = lo.clone();
    while x <= *hi {
        out.push(x.clone());
        x = x + T::one();
    }
    out
}

/// All classes in `area` that pass [`is_ulrich_line`], sorted lexicographically.
pub fn search_ulrich_lines<T: Scalar>(
    e: &T,
    h: &Polarization<T>,
    area: &SearchBox<T>,
) -> Result<Vec<DivisorClass<T>>> {
    check_invariant(e)?;
    if area.is_empty() {
        return Ok(Vec::new());
    }
    let bs = span(&area.b_min, &area.b_max);
    let per_row: Result<Vec<Vec<DivisorClass<T>>>> = span(&area.a_min, &area.a_max)
        .into_par_iter()
        .map(|a| {
            let mut hits = Vec::new();
            for b in &bs {
                let d = DivisorClass::new(a.clone(), b.clone());
                if is_ulrich_line(e, h, &d)? {
                    hits.push(d);
                }
            }
            Ok(hits)
        })
        .collect();
    let mut found: Vec<_> = per_row?.into_iter().flatten().collect();
    found.sort_by_key(DivisorClass::coords);
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::RuledSurface;
    use crate::twist::TwistLabel;
    use num_bigint::BigInt;

    fn cls(a: i64, b: i64) -> DivisorClass<i64> {
        DivisorClass::new(a, b)
    }

    fn table(h0: i64, h1: i64, h2: i64) -> CohTable<i64> {
        CohTable { h0, h1, h2 }
    }

    /// Term-by-term pushforward sums, the way one would do them by hand.
    fn naive(e: i64, a: i64, b: i64) -> CohTable<i64> {
        if a >= 0 {
            let mut t = table(0, 0, 0);
            for k in 0..=a {
                let deg = b - k * e;
                t.h0 += (deg + 1).max(0);
                t.h1 += (-deg - 1).max(0);
            }
            t
        } else if a == -1 {
            table(0, 0, 0)
        } else {
            let t = naive(e, -2 - a, -2 - e - b);
            table(t.h2, t.h1, t.h0)
        }
    }

    #[test]
    fn closed_form_matches_termwise_sums() {
        for e in 1..=5 {
            for a in -12..=12 {
                for b in -40..=40 {
                    assert_eq!(
                        cohomology(&e, &cls(a, b)).unwrap(),
                        naive(e, a, b),
                        "e={e} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn documented_tables() {
        for e in 1..=4 {
            assert_eq!(cohomology(&e, &cls(0, 0)).unwrap(), table(1, 0, 0));
            for b in -7..=7 {
                assert_eq!(cohomology(&e, &cls(-1, b)).unwrap(), table(0, 0, 0));
            }
        }
        assert_eq!(cohomology(&1, &cls(1, 1)).unwrap(), table(3, 0, 0));
        assert_eq!(cohomology(&1, &cls(2, 0)).unwrap(), table(1, 1, 0));
    }

    #[test]
    fn rejects_twists_and_bad_invariant() {
        let tw = cls(0, 0).with_twist(TwistLabel::generator("L1"));
        assert!(matches!(cohomology(&1, &tw), Err(Error::TwistedClass(_))));
        assert!(cohomology(&0, &cls(0, 0)).is_err());
        assert!(cohomology(&-3, &cls(0, 0)).is_err());
    }

    #[test]
    fn ulrich_examples_on_f1() {
        let s = RuledSurface::hirzebruch(1).unwrap();
        let h = Polarization::new(1, 2, &s).unwrap();
        assert!(is_ulrich_line(&1, &h, &cls(0, 2)).unwrap());
        assert!(is_ulrich_line(&1, &h, &cls(1, 1)).unwrap());
        assert!(!is_ulrich_line(&1, &h, &cls(0, 0)).unwrap());
        // h2((0,0) - 2H) = h0(K + 2H) = h0((0, 1)) = 2
        assert_eq!(cohomology(&1, &cls(-2, -4)).unwrap().h2, 2);
    }

    #[test]
    fn search_examples() {
        let s = RuledSurface::hirzebruch(1).unwrap();
        let area = SearchBox::new(-2, 6, -10, 10);
        let h = Polarization::new(1, 2, &s).unwrap();
        assert_eq!(
            search_ulrich_lines(&1, &h, &area).unwrap(),
            vec![cls(0, 2), cls(1, 1)]
        );
        let h = Polarization::new(2, 3, &s).unwrap();
        assert!(search_ulrich_lines(&1, &h, &area).unwrap().is_empty());
        let empty = SearchBox::new(3, 2, 0, 5);
        assert!(empty.is_empty());
        assert!(search_ulrich_lines(&1, &h, &empty).unwrap().is_empty());
    }

    #[test]
    fn default_box_bounds() {
        let s = RuledSurface::hirzebruch(2).unwrap();
        let h = Polarization::new(2, 5, &s).unwrap();
        assert_eq!(SearchBox::default_for(&h), SearchBox::new(-2, 9, -18, 18));
    }

    #[test]
    fn duality_and_chi_on_a_box() {
        for e in 1..=3i64 {
            let s = RuledSurface::hirzebruch(e).unwrap();
            let k = s.canonical_class().untwisted();
            for a in -8..=8 {
                for b in -25..=25 {
                    let d = cls(a, b);
                    let t = cohomology(&e, &d).unwrap();
                    let dual = cohomology(&e, &(&k - &d)).unwrap();
                    for i in 0..=2 {
                        assert_eq!(t.h(i), dual.h(2 - i));
                    }
                    assert_eq!(t.euler_characteristic(), s.euler_char_line(&d).unwrap());
                    if a < 0 {
                        assert_eq!(t.h0, 0);
                    } else {
                        assert!(cohomology(&e, &cls(a, b + 1)).unwrap().h0 >= t.h0);
                    }
                }
            }
        }
    }

    #[test]
    fn bigint_cohomology_agrees_with_i64() {
        for (e, a, b) in [(1, 5, 3), (3, -4, 9), (2, 7, -11), (4, 0, 0)] {
            let small = cohomology(&e, &cls(a, b)).unwrap();
            let big = cohomology(
                &BigInt::from(e),
                &DivisorClass::new(BigInt::from(a), BigInt::from(b)),
            )
            .unwrap();
            assert_eq!(big.h0, BigInt::from(small.h0));
            assert_eq!(big.h1, BigInt::from(small.h1));
            assert_eq!(big.h2, BigInt::from(small.h2));
        }
    }

    proptest::proptest! {
        #[test]
        fn pair_of_an_ulrich_class_is_ulrich(e in 1i64..=4, alpha in 1i64..=3, extra in 1i64..=5, a in -2i64..=5, b in -15i64..=15) {
            let s = RuledSurface::hirzebruch(e).unwrap();
            let h = Polarization::new(alpha, alpha * e + extra, &s).unwrap();
            let d = cls(a, b);
            if is_ulrich_line(&e, &h, &d).unwrap() {
                let partner = crate::classify::ulrich_pair(&d, &h, &s).untwisted();
                proptest::prop_assert!(is_ulrich_line(&e, &h, &partner).unwrap());
            }
        }

        #[test]
        fn tables_are_dual_and_nonnegative(e in 1i64..=8, a in -60i64..=60, b in -200i64..=200) {
            let s = RuledSurface::hirzebruch(e).unwrap();
            let d = cls(a, b);
            let t = cohomology(&e, &d).unwrap();
            let dual = cohomology(&e, &(&s.canonical_class().untwisted() - &d)).unwrap();
            proptest::prop_assert_eq!(&t, &CohTable { h0: dual.h2, h1: dual.h1, h2: dual.h0 });
            proptest::prop_assert!(t.h0 >= 0 && t.h1 >= 0 && t.h2 >= 0);
            proptest::prop_assert_eq!(t.euler_characteristic(), s.euler_char_line(&d).unwrap());
        }
    }
}
