//! Sweep rows, verification flags and the CSV / JSON / markdown writers the
//! command-line front end uses.
//!
//! Flags are always recomputed from a row's own numbers, so a row read back
//! from JSON can be re-verified with [`SweepRow::reverify`].

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify_line_bundles, Classification};
use crate::error::{CondBranch, Error, Result};
use crate::lattice::{DivisorClass, Polarization, RuledSurface};
use crate::oracle::{search_ulrich_lines, SearchBox};
use crate::rank2::{
    construct_rank2, initialized_chis, special_c1, special_c2, special_c2_polynomial,
    stability_report, violated_condition, ExtensionData, StabilityReport,
};
use crate::scalar::exact_half;

type Divisor = DivisorClass<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    InvalidSurface,
    InvalidPolarization,
    ConditionViolated,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::InvalidSurface => "invalid_surface",
            RowStatus::InvalidPolarization => "invalid_polarization",
            RowStatus::ConditionViolated => "condition_violated",
        }
    }
}

/// Verification outcomes. `None` means the check does not apply to the row.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    /// `χ(E(−H)) = χ(E(−2H)) = 0` for the stored `c1`, `c2`.
    pub chi: Option<bool>,
    /// `sub·quot + ℓ(Z) = c2 =` both closed forms of the special `c2`.
    pub c2: Option<bool>,
    /// Classification has a pair iff α = 1, and the pair sums to `K + 3H`.
    pub pair: Option<bool>,
    /// α ≥ 3 hypothesis on β.
    pub cond: Option<bool>,
    /// Cayley–Bacharach budget `h0 ≤ ℓ(Z) − 1` (α ≥ 3).
    pub cb: Option<bool>,
    /// Exhaustive oracle scan equals the classification (g = 0).
    pub oracle: Option<bool>,
    /// `H·sub = ½H·c1` (α = 1).
    pub slope: Option<bool>,
    /// `ext_dim = 2β−e+2(g−1) > 0`, `family_dim = 2β−e+4g−3` (α = 1).
    pub dims: Option<bool>,
}

impl Flags {
    pub const NAMES: [&'static str; 8] =
        ["chi", "c2", "pair", "cond", "cb", "oracle", "slope", "dims"];

    pub fn values(&self) -> [Option<bool>; 8] {
        [
            self.chi,
            self.c2,
            self.pair,
            self.cond,
            self.cb,
            self.oracle,
            self.slope,
            self.dims,
        ]
    }

    /// True when no applicable check other than `cond` failed.
    pub fn consistent(&self) -> bool {
        self.values()
            .iter()
            .zip(Self::NAMES)
            .all(|(v, name)| name == "cond" || *v != Some(false))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub g: i64,
    pub e: i64,
    pub alpha: i64,
    pub beta: i64,
    pub status: RowStatus,
    /// Short comma-free rejection code; empty for valid rows.
    pub reason: String,
    pub classification: Option<Classification<i64>>,
    pub extension: Option<ExtensionData<i64>>,
    pub flags: Flags,
}

fn reason_for(err: &Error) -> String {
    match err {
        Error::InvalidSurface { .. } => "need g>=0 and e>=1".into(),
        Error::InvalidPolarization { .. } => "beta<=alpha*e or alpha<1".into(),
        Error::ConditionViolated { branches } => format!(
            "cond:{}",
            branches
                .iter()
                .map(CondBranch::to_string)
                .collect::<Vec<_>>()
                .join("|")
        ),
        other => other.to_string().replace(',', ";"),
    }
}

impl SweepRow {
    pub fn build(g: i64, e: i64, alpha: i64, beta: i64) -> Result<SweepRow> {
        let mut row = SweepRow {
            g,
            e,
            alpha,
            beta,
            status: RowStatus::Ok,
            reason: String::new(),
            classification: None,
            extension: None,
            flags: Flags::default(),
        };
        let s = match RuledSurface::new(g, e) {
            Ok(s) => s,
            Err(err) => {
                row.status = RowStatus::InvalidSurface;
                row.reason = reason_for(&err);
                return Ok(row);
            }
        };
        let h = match Polarization::new(alpha, beta, &s) {
            Ok(h) => h,
            Err(err) => {
                row.status = RowStatus::InvalidPolarization;
                row.reason = reason_for(&err);
                return Ok(row);
            }
        };
        row.classification = Some(classify_line_bundles(&s, &h));
        match construct_rank2(&s, &h) {
            Ok(x) => row.extension = Some(x),
            Err(err @ Error::ConditionViolated { .. }) => {
                row.status = RowStatus::ConditionViolated;
                row.reason = reason_for(&err);
            }
            Err(err) => return Err(err),
        }
        row.flags = row.compute_flags()?;
        Ok(row)
    }

    /// Derives every flag from the numbers stored in the row.
    pub fn compute_flags(&self) -> Result<Flags> {
        let (s, h) = match RuledSurface::new(self.g, self.e)
            .and_then(|s| Polarization::new(self.alpha, self.beta, &s).map(|h| (s, h)))
        {
            Ok(sh) => sh,
            Err(_) => return Ok(Flags::default()),
        };
        let (g, e, alpha, beta) = (self.g, self.e, self.alpha, self.beta);
        let mut flags = Flags::default();
        let target = special_c1(&s, &h);

        if let Some(c) = &self.classification {
            let classes = c.classes();
            flags.pair = Some(match c {
                Classification::Empty => alpha != 1,
                Classification::Pair { l1, l2, .. } => {
                    alpha == 1 && (l1 + l2).numerically_eq(&target)
                }
            });
            if g == 0 {
                let scan = search_ulrich_lines(&e, &h, &SearchBox::default_for(&h))?;
                let mut expected: Vec<_> = classes.iter().map(Divisor::untwisted).collect();
                expected.sort_by_key(|d| d.coords());
                flags.oracle = Some(scan == expected);
            }
        }

        if alpha >= 3 {
            flags.cond = Some(violated_condition(&s, &h).is_empty());
        }

        if let Some(x) = &self.extension {
            let (x1, x2) = initialized_chis(&s, &h, &x.c1, &x.c2)?;
            flags.chi = Some(x.c1.numerically_eq(&target) && x1 == 0 && x2 == 0);
            let lemma = special_c2(&s, &h).unwrap_or(i64::MIN);
            let poly = special_c2_polynomial(&s, &h)?;
            flags.c2 = Some(
                s.intersect(&x.sub, &x.quot) + x.z_length == x.c2 && x.c2 == lemma && lemma == poly,
            );
            if alpha >= 3 {
                // (α−3)(g−1+β−eα/2), doubled then halved exactly
                let budget = exact_half((alpha - 3) * (2 * (g - 1) + 2 * beta - e * alpha), "cb")?;
                flags.cb = Some(budget < x.z_length);
            }
            if alpha == 1 {
                let hc = h.class();
                let slope = exact_half(s.intersect(&hc, &x.c1), "slope")?;
                flags.slope = Some(s.intersect(&hc, &x.sub) == slope);
                let ext = 2 * beta - e + 2 * (g - 1);
                flags.dims = Some(
                    x.ext_dim == Some(ext)
                        && ext > 0
                        && x.family_dim == Some(2 * beta - e + 4 * g - 3),
                );
            }
        }
        Ok(flags)
    }

    /// Recomputes the flags and reports every one that differs from the stored value.
    pub fn reverify(&self) -> Result<Vec<String>> {
        let fresh = self.compute_flags()?;
        Ok(Flags::NAMES
            .iter()
            .zip(self.flags.values().iter().zip(fresh.values()))
            .filter(|(_, (stored, fresh))| **stored != *fresh)
            .map(|(name, (stored, fresh))| {
                format!(
                    "({},{},{},{}) flag {name}: stored {stored:?}, recomputed {fresh:?}",
                    self.g, self.e, self.alpha, self.beta
                )
            })
            .collect())
    }
}

/// How β is swept: absolute values, or offsets above `α·e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BetaRange {
    Absolute(RangeInclusive<i64>),
    AboveAlphaE(RangeInclusive<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub g: RangeInclusive<i64>,
    pub e: RangeInclusive<i64>,
    pub alpha: RangeInclusive<i64>,
    pub beta: BetaRange,
}

impl SweepSpec {
    /// Parameter tuples in lexicographic `(g, e, α, β)` order.
    pub fn tuples(&self) -> Vec<(i64, i64, i64, i64)> {
        let mut out = Vec::new();
        for g in self.g.clone() {
            for e in self.e.clone() {
                for alpha in self.alpha.clone() {
                    let betas = match &self.beta {
                        BetaRange::Absolute(r) => r.clone(),
                        BetaRange::AboveAlphaE(r) => {
                            (alpha * e + r.start())..=(alpha * e + r.end())
                        }
                    };
                    for beta in betas {
                        out.push((g, e, alpha, beta));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.tuples()
        .par_iter()
        .map(|&(g, e, alpha, beta)| SweepRow::build(g, e, alpha, beta))
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagCount {
    pub name: String,
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    pub ok: usize,
    pub invalid: usize,
    pub condition_violated: usize,
    pub flags: Vec<FlagCount>,
}

impl Summary {
    pub fn of(rows: &[SweepRow]) -> Summary {
        let mut flags: Vec<FlagCount> = Flags::NAMES
            .iter()
            .map(|n| FlagCount {
                name: n.to_string(),
                ..Default::default()
            })
            .collect();
        for row in rows {
            for (count, v) in flags.iter_mut().zip(row.flags.values()) {
                match v {
                    Some(true) => count.pass += 1,
                    Some(false) => count.fail += 1,
                    None => count.not_applicable += 1,
                }
            }
        }
        let by = |st: RowStatus| rows.iter().filter(|r| r.status == st).count();
        Summary {
            rows: rows.len(),
            ok: by(RowStatus::Ok),
            invalid: by(RowStatus::InvalidSurface) + by(RowStatus::InvalidPolarization),
            condition_violated: by(RowStatus::ConditionViolated),
            flags,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "rows={} ok={} invalid={} condition_violated={}\n",
            self.rows, self.ok, self.invalid, self.condition_violated
        );
        for f in &self.flags {
            let _ = writeln!(
                out,
                "{}: pass={} fail={} n/a={}",
                f.name, f.pass, f.fail, f.not_applicable
            );
        }
        out
    }
}

pub const CSV_HEADER: &str = "g,e,alpha,beta,status,reason,classification,\
l1_a,l1_b,l2_a,l2_b,sub_a,sub_b,sub_twist,quot_a,quot_b,quot_twist,c1_a,c1_b,c2,z_length,\
ext_dim,family_dim,stability,chi_ok,c2_ok,pair_ok,cond_ok,cb_ok,oracle_ok,slope_ok,dims_ok";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn class_cells(d: Option<&Divisor>) -> [String; 2] {
    [opt(d.map(|d| d.a)), opt(d.map(|d| d.b))]
}

fn classification_name(c: Option<&Classification<i64>>) -> &'static str {
    match c {
        None => "",
        Some(Classification::Empty) => "empty",
        Some(Classification::Pair { .. }) => "pair",
    }
}

fn row_cells(r: &SweepRow) -> Vec<String> {
    let classes = r
        .classification
        .as_ref()
        .map(|c| c.classes())
        .unwrap_or_default();
    let x = r.extension.as_ref();
    let mut cells = vec![
        r.g.to_string(),
        r.e.to_string(),
        r.alpha.to_string(),
        r.beta.to_string(),
        r.status.as_str().to_string(),
        r.reason.clone(),
        classification_name(r.classification.as_ref()).to_string(),
    ];
    cells.extend(class_cells(classes.first()));
    cells.extend(class_cells(classes.get(1)));
    cells.extend(class_cells(x.map(|x| &x.sub)));
    cells.push(opt(x.map(|x| x.sub.twist.expression())));
    cells.extend(class_cells(x.map(|x| &x.quot)));
    cells.push(opt(x.map(|x| x.quot.twist.expression())));
    cells.extend(class_cells(x.map(|x| &x.c1)));
    cells.push(opt(x.map(|x| x.c2)));
    cells.push(opt(x.map(|x| x.z_length)));
    cells.push(opt(x.and_then(|x| x.ext_dim)));
    cells.push(opt(x.and_then(|x| x.family_dim)));
    cells.push(opt(x.map(|x| x.stability)));
    cells.extend(r.flags.values().iter().map(|v| opt(*v)));
    cells
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&row_cells(r).join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(rows: &[SweepRow]) -> String {
    let mut out = serde_json::to_string_pretty(rows).expect("rows serialize");
    out.push('\n');
    out
}

pub fn from_json(text: &str) -> serde_json::Result<Vec<SweepRow>> {
    serde_json::from_str(text)
}

/// Markdown table followed by the summary footer.
pub fn to_markdown(rows: &[SweepRow]) -> String {
    let header: Vec<&str> = CSV_HEADER.split(',').collect();
    let mut out = format!(
        "| {} |\n|{}\n",
        header.join(" | "),
        "---|".repeat(header.len())
    );
    for r in rows {
        let _ = writeln!(out, "| {} |", row_cells(r).join(" | "));
    }
    let summary = Summary::of(rows);
    let _ = writeln!(
        out,
        "\n**Summary:** {} rows, {} ok, {} invalid, {} condition violated\n",
        summary.rows, summary.ok, summary.invalid, summary.condition_violated
    );
    out.push_str("| flag | pass | fail | n/a |\n|---|---|---|---|\n");
    for f in &summary.flags {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            f.name, f.pass, f.fail, f.not_applicable
        );
    }
    out
}

/// Everything `construct` prints for one polarization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructReport {
    pub g: i64,
    pub e: i64,
    pub alpha: i64,
    pub beta: i64,
    pub extension: ExtensionData<i64>,
    pub stability: StabilityReport<i64>,
    pub flags: Flags,
}

pub fn construct_report(g: i64, e: i64, alpha: i64, beta: i64) -> Result<ConstructReport> {
    let s = RuledSurface::new(g, e)?;
    let h = Polarization::new(alpha, beta, &s)?;
    let extension = construct_rank2(&s, &h)?;
    let stability = stability_report(&s, &h, &extension)?;
    let row = SweepRow {
        g,
        e,
        alpha,
        beta,
        status: RowStatus::Ok,
        reason: String::new(),
        classification: Some(classify_line_bundles(&s, &h)),
        extension: Some(extension.clone()),
        flags: Flags::default(),
    };
    let flags = row.compute_flags()?;
    Ok(ConstructReport {
        g,
        e,
        alpha,
        beta,
        extension,
        stability,
        flags,
    })
}

impl ConstructReport {
    pub fn to_markdown(&self) -> String {
        let x = &self.extension;
        let mut out = format!(
            "## Rank-2 special Ulrich bundle: g={} e={} alpha={} beta={}\n\n",
            self.g, self.e, self.alpha, self.beta
        );
        out.push_str("| quantity | value |\n|---|---|\n");
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "| {k} | {v} |");
        };
        line("sub", x.sub.to_string());
        line("quot", x.quot.to_string());
        line("l(Z)", x.z_length.to_string());
        line("c1", x.c1.to_string());
        line("c2", x.c2.to_string());
        line("ext_dim", opt(x.ext_dim));
        line("family_dim", opt(x.family_dim));
        line("stability", x.stability.to_string());
        line("H.sub", self.stability.sub_degree.to_string());
        line("slope", self.stability.slope.to_string());
        for (name, v) in Flags::NAMES.iter().zip(self.flags.values()) {
            line(&format!("flag {name}"), opt(v));
        }
        out.push_str("\nGenericity:\n");
        for req in &x.genericity {
            let _ = writeln!(out, "- {req}");
        }
        let _ = writeln!(out, "\nStability: {}", self.stability.justification);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> SweepSpec {
        SweepSpec {
            g: 0..=0,
            e: 1..=2,
            alpha: 1..=3,
            beta: BetaRange::AboveAlphaE(1..=4),
        }
    }

    #[test]
    fn small_grid_all_flags_pass() {
        let rows = sweep(&grid()).unwrap();
        assert_eq!(rows.len(), 24);
        for r in &rows {
            assert_eq!(r.status, RowStatus::Ok);
            assert!(r.flags.values().iter().all(|v| *v != Some(false)), "{r:?}");
            assert_eq!(r.flags.oracle, Some(true));
        }
        let keys: Vec<_> = rows.iter().map(|r| (r.g, r.e, r.alpha, r.beta)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    #[allow(clippy::reversed_empty_ranges)]
    fn empty_range_gives_header_only() {
        let spec = SweepSpec { g: 1..=0, ..grid() };
        let rows = sweep(&spec).unwrap();
        assert!(rows.is_empty());
        assert_eq!(to_csv(&rows), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn invalid_and_violated_rows_are_kept() {
        let spec = SweepSpec {
            g: 9..=9,
            e: 1..=1,
            alpha: 3..=3,
            beta: BetaRange::Absolute(2..=7),
        };
        let rows = sweep(&spec).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].status, RowStatus::InvalidPolarization);
        assert_eq!(rows[1].status, RowStatus::InvalidPolarization);
        // β = 4, 5: 2β ≤ (g−1)+eα = 11
        assert_eq!(rows[2].status, RowStatus::ConditionViolated);
        assert_eq!(rows[2].flags.cond, Some(false));
        assert_eq!(rows[2].reason, "cond:(g-1)+e*alpha");
        assert_eq!(rows[3].status, RowStatus::ConditionViolated);
        assert_eq!(rows[4].status, RowStatus::Ok);
        assert_eq!(rows[4].flags.cond, Some(true));
    }

    #[test]
    fn csv_cells_never_need_quoting() {
        let rows = sweep(&SweepSpec {
            g: 0..=2,
            e: 1..=2,
            alpha: 1..=4,
            beta: BetaRange::Absolute(0..=9),
        })
        .unwrap();
        let csv = to_csv(&rows);
        let width = CSV_HEADER.split(',').count();
        for line in csv.lines() {
            assert_eq!(line.split(',').count(), width, "{line}");
            assert!(!line.contains('"'));
        }
    }

    #[test]
    fn json_round_trip_reverifies() {
        let rows = sweep(&grid()).unwrap();
        let back = from_json(&to_json(&rows)).unwrap();
        assert_eq!(back, rows);
        for r in &back {
            assert!(r.reverify().unwrap().is_empty());
        }
    }

    #[test]
    fn tampered_row_is_caught() {
        let mut row = SweepRow::build(0, 1, 3, 4).unwrap();
        row.extension.as_mut().unwrap().c2 += 1;
        let problems = row.reverify().unwrap();
        assert!(problems.iter().any(|p| p.contains("flag c2")));
        assert!(problems.iter().any(|p| p.contains("flag chi")));
    }

    #[test]
    fn construct_report_json_shape() {
        let r = construct_report(0, 1, 3, 4).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(
            v["extension"]["sub"],
            serde_json::json!({"a": 3, "b": 3, "twist": "L1"})
        );
        assert_eq!(v["extension"]["quot"]["b"], 6);
        assert_eq!(v["extension"]["z_length"], 5);
        assert_eq!(v["extension"]["c2"], 23);
        assert!(r.flags.consistent());
        assert!(r.to_markdown().contains("| c2 | 23 |"));
    }
}
