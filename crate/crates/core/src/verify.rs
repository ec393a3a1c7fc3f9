//! Cross-checking harness: closed forms against the shortest-path oracle
//! over parameter grids, plus seeded property runs for the structural
//! lemmas the closed forms rest on.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::changemaking::{colex_compare, greedy_presentation, is_orderly, repunit, CoinSystem};
use crate::closed_forms::{
    apery_closed_unchecked, build_generators, frobenius_unchecked, genus_unchecked, n_dr,
    pf_closed, FamilyParams,
};
use crate::error::{Error, Result};
use crate::semigroup::{apery_set_with, AperySet, OracleConfig};

/// Oracle feasibility cutoff for grid cases.
pub const GRID_ORACLE_LIMIT: u64 = 100_000;

/// Largest `m` probed for `N_dr(m)` monotonicity.
pub const MONOTONE_M_MAX: u64 = 5;

/// Inclusive parameter ranges and check toggles for [`cross_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub a: (u64, u64),
    pub b: (u32, u32),
    pub d: (u64, u64),
    pub k: (u32, u32),
    pub check_apery: bool,
    pub check_pf: bool,
    pub check_monotone: bool,
    pub include_hypothesis_violations: bool,
    /// Adds 1 to every closed-form Frobenius value; exercises the mismatch
    /// reporting path end to end.
    pub inject_fault: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            a: (2, 60),
            b: (2, 5),
            d: (1, 5),
            k: (1, 4),
            check_apery: true,
            check_pf: true,
            check_monotone: false,
            include_hypothesis_violations: false,
            inject_fault: false,
        }
    }
}

impl GridSpec {
    /// A grid containing exactly one parameter point.
    pub fn single(p: &FamilyParams) -> Result<Self> {
        let a =
            p.a.to_u64()
                .ok_or_else(|| Error::InvalidParams(format!("a = {} too large for a grid", p.a)))?;
        let d =
            p.d.to_u64()
                .ok_or_else(|| Error::InvalidParams(format!("d = {} too large for a grid", p.d)))?;
        Ok(Self {
            a: (a, a),
            b: (p.b, p.b),
            d: (d, d),
            k: (p.k, p.k),
            ..Self::default()
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParams(format!("grid: {what}")));
        if self.a.0 < 2 {
            return bad("a must start at 2 or above");
        }
        if self.b.0 < 2 {
            return bad("b must start at 2 or above");
        }
        if self.d.0 < 1 {
            return bad("d must start at 1 or above");
        }
        if self.k.0 < 1 {
            return bad("k must start at 1 or above");
        }
        if self.a.0 > self.a.1 || self.b.0 > self.b.1 || self.d.0 > self.d.1 || self.k.0 > self.k.1
        {
            return bad("empty range");
        }
        Ok(())
    }

    fn points(&self) -> Vec<(u64, u32, u64, u32)> {
        let mut out = Vec::new();
        for b in self.b.0..=self.b.1 {
            for k in self.k.0..=self.k.1 {
                for d in self.d.0..=self.d.1 {
                    for a in self.a.0..=self.a.1 {
                        out.push((a, b, d, k));
                    }
                }
            }
        }
        out
    }
}

/// Which quantity disagreed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Frobenius,
    Genus,
    Apery,
    PseudoFrobenius,
    NdrMonotone,
    Orderly,
    ColexWeight,
    Evaluation,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("plain enum");
        f.write_str(s.as_str().expect("string tag"))
    }
}

/// One disagreement. `params` is the human-readable input; values are
/// decimal renderings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mismatch {
    pub params: String,
    pub quantity: Quantity,
    pub closed_value: String,
    pub oracle_value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerifyReport {
    pub cases_run: u64,
    pub cases_passed: u64,
    /// Skipped parameter points by reason.
    pub skipped: BTreeMap<String, u64>,
    pub mismatches: Vec<Mismatch>,
    /// Points outside `a ≥ k - 1`, probed only on request.
    pub probes_run: u64,
    /// Informational differences found by the probes; never failures.
    pub divergences: Vec<Mismatch>,
    pub elapsed_ms: u64,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Zeroes the timing so two runs can be compared for equality.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = 0;
        self
    }
}

enum CaseOutcome {
    Checked(Vec<Mismatch>),
    Probed(Vec<Mismatch>),
    Skipped(&'static str),
}

/// Runs the grid on the current rayon pool.
pub fn cross_check(grid: &GridSpec) -> Result<VerifyReport> {
    grid.validate()?;
    let start = Instant::now();
    let outcomes: Vec<CaseOutcome> = grid
        .points()
        .into_par_iter()
        .map(|(a, b, d, k)| run_case(grid, a, b, d, k))
        .collect();

    let mut report = VerifyReport::default();
    for outcome in outcomes {
        match outcome {
            CaseOutcome::Checked(m) => {
                report.cases_run += 1;
                if m.is_empty() {
                    report.cases_passed += 1;
                }
                report.mismatches.extend(m);
            }
            CaseOutcome::Probed(m) => {
                report.probes_run += 1;
                report.divergences.extend(m);
            }
            CaseOutcome::Skipped(reason) => {
                *report.skipped.entry(reason.to_string()).or_default() += 1;
            }
        }
    }
    report.mismatches.sort();
    report.divergences.sort();
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Runs the grid on a dedicated pool of `jobs` worker threads.
pub fn cross_check_with_jobs(grid: &GridSpec, jobs: usize) -> Result<VerifyReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    pool.install(|| cross_check(grid))
}

fn run_case(grid: &GridSpec, a: u64, b: u32, d: u64, k: u32) -> CaseOutcome {
    if a.gcd(&d) != 1 {
        return CaseOutcome::Skipped("gcd(a,d) != 1");
    }
    let Ok(p) = FamilyParams::from_u64s(a, b, d, k) else {
        return CaseOutcome::Skipped("invalid parameters");
    };
    let hypothesis = p.meets_hypothesis();
    if !hypothesis && !grid.include_hypothesis_violations {
        return CaseOutcome::Skipped("a < k-1");
    }
    if a > GRID_ORACLE_LIMIT {
        return CaseOutcome::Skipped("oracle infeasible");
    }
    let cfg = OracleConfig::with_residue_cap(GRID_ORACLE_LIMIT as usize);
    let oracle = match build_generators(&p).and_then(|g| apery_set_with(&g, &cfg)) {
        Ok(ape) => ape,
        Err(_) => return CaseOutcome::Skipped("oracle infeasible"),
    };
    let mismatches = compare_case(grid, &p, &oracle, &cfg);
    if hypothesis {
        CaseOutcome::Checked(mismatches)
    } else {
        CaseOutcome::Probed(mismatches)
    }
}

fn compare_case(
    grid: &GridSpec,
    p: &FamilyParams,
    oracle: &AperySet,
    cfg: &OracleConfig,
) -> Vec<Mismatch> {
    let label = p.to_string();
    let mut out = Vec::new();
    let mut record = |quantity: Quantity, closed: String, oracle: String| {
        if closed != oracle {
            out.push(Mismatch {
                params: label.clone(),
                quantity,
                closed_value: closed,
                oracle_value: oracle,
            });
        }
    };

    match frobenius_unchecked(p) {
        Ok(mut f) => {
            if grid.inject_fault {
                f += 1;
            }
            record(
                Quantity::Frobenius,
                f.to_string(),
                oracle.frobenius().to_string(),
            );
        }
        Err(e) => record(Quantity::Evaluation, e.to_string(), String::new()),
    }

    let oracle_genus = oracle
        .genus()
        .map(|g| g.to_string())
        .unwrap_or_else(|e| e.to_string());
    match genus_unchecked(p) {
        Ok(g) => record(Quantity::Genus, g.to_string(), oracle_genus),
        Err(e) => record(Quantity::Evaluation, e.to_string(), String::new()),
    }

    if grid.check_apery {
        match apery_closed_unchecked(p, cfg) {
            Ok(ape) => record(
                Quantity::Apery,
                render_list(ape.minima()),
                render_list(oracle.minima()),
            ),
            // A structurally broken closed Apéry set is itself a mismatch.
            Err(e) => record(Quantity::Apery, e.to_string(), render_list(oracle.minima())),
        }
    }

    if grid.check_pf {
        if let Some(n) = p.repunit_n() {
            if let Ok((pf, _)) = pf_closed(p.b, n, &p.d) {
                record(
                    Quantity::PseudoFrobenius,
                    render_list(&pf),
                    render_list(&oracle.pseudo_frobenius()),
                );
            }
        }
    }

    if grid.check_monotone && p.meets_hypothesis() {
        if let Some(violation) = ndr_monotone_violation(p) {
            record(Quantity::NdrMonotone, violation, "non-decreasing".into());
        }
    }

    out
}

fn render_list<T: ToString>(values: &[T]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// `O(M) = min Σ b^i x_i` subject to `Σ x_i (b^i-1)/(b-1) = M`, for every
/// `M ≤ max`, by exact dynamic programming over amounts.
pub fn weighted_opt_table(b: u32, k: u32, max: usize) -> Vec<u128> {
    let coins: Vec<(usize, u128)> = (1..=k)
        .map(|i| (repunit(b, i), (b as u128).pow(i)))
        .filter_map(|(c, w)| c.to_usize().map(|c| (c, w)))
        .filter(|&(c, _)| c <= max)
        .collect();
    let mut table = vec![u128::MAX; max + 1];
    table[0] = 0;
    for m in 1..=max {
        let mut best = u128::MAX;
        for &(c, w) in &coins {
            if c <= m && table[m - c] != u128::MAX {
                best = best.min(table[m - c] + w);
            }
        }
        table[m] = best;
    }
    table
}

/// `N_dr(m) = O(ma + r)·a + (ma + r)·d` for `m = 0..=m_max`.
pub fn ndr_sequence(p: &FamilyParams, r: u64, m_max: u64, table: &[u128]) -> Option<Vec<u128>> {
    let a = p.a.to_u64()? as u128;
    let d = p.d.to_u64()? as u128;
    (0..=m_max)
        .map(|m| {
            let amount = m as u128 * a + r as u128;
            let cost = *table.get(amount as usize)?;
            Some(cost * a + amount * d)
        })
        .collect()
}

/// Returns a description of the first place where `N_dr(m)` decreases in
/// `m`, or where `N_dr(0)` disagrees with the closed `n_dr`.
fn ndr_monotone_violation(p: &FamilyParams) -> Option<String> {
    let a = p.a.to_u64()?;
    let table = weighted_opt_table(p.b, p.k, ((MONOTONE_M_MAX + 1) * a) as usize);
    for r in 0..a {
        let seq = ndr_sequence(p, r, MONOTONE_M_MAX, &table)?;
        if let Some(m) = seq.windows(2).position(|w| w[1] < w[0]) {
            return Some(format!("r={r}: N_dr({}) > N_dr({})", m, m + 1));
        }
        let closed = n_dr(p, &BigUint::from(r)).ok()?;
        if BigUint::from(seq[0]) != closed {
            return Some(format!(
                "r={r}: N_dr(0) = {} but closed n_dr = {closed}",
                seq[0]
            ));
        }
    }
    None
}

/// Seeded property run over the three structural facts behind the closed
/// forms: `B(b, k)` is orderly, weight is monotone in colex order, and
/// `N_dr(m)` is non-decreasing in `m` when `a ≥ k - 1`. Case `i` runs check
/// `i mod 3`; the report is a pure function of `(seed, budget)`.
pub fn property_suite(seed: u64, budget: u64) -> Result<VerifyReport> {
    if budget == 0 {
        return Err(Error::InvalidParams("budget must be at least 1".into()));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport::default();
    for i in 0..budget {
        let found = match i % 3 {
            0 => orderly_case(&mut rng)?,
            1 => colex_case(&mut rng)?,
            _ => monotone_case(&mut rng)?,
        };
        report.cases_run += 1;
        if found.is_empty() {
            report.cases_passed += 1;
        }
        report.mismatches.extend(found);
    }
    report.mismatches.sort();
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn orderly_case(rng: &mut ChaCha8Rng) -> Result<Vec<Mismatch>> {
    let b = rng.gen_range(2..=10);
    let k = rng.gen_range(1..=6);
    let result = is_orderly(&CoinSystem::repunit_base(b, k)?)?;
    Ok(if result.orderly {
        vec![]
    } else {
        vec![Mismatch {
            params: format!("B(b={b}, k={k})"),
            quantity: Quantity::Orderly,
            closed_value: "orderly".into(),
            oracle_value: format!(
                "counterexample {}",
                result
                    .counterexample
                    .map(|c| c.to_string())
                    .unwrap_or_default()
            ),
        }]
    })
}

const COLEX_PAIRS: usize = 64;

fn colex_case(rng: &mut ChaCha8Rng) -> Result<Vec<Mismatch>> {
    let b = rng.gen_range(2..=5);
    let k = rng.gen_range(1..=5);
    let mut out = Vec::new();
    for _ in 0..COLEX_PAIRS {
        let r1 = BigUint::from(rng.gen_range(0..=5000u32));
        let r2 = BigUint::from(rng.gen_range(0..=5000u32));
        let x = greedy_presentation(b, k, &r1)?;
        let y = greedy_presentation(b, k, &r2)?;
        if colex_compare(x.digits(), y.digits())?.is_le() && x.weight() > y.weight() {
            out.push(Mismatch {
                params: format!("b={b}, k={k}, r1={r1}, r2={r2}"),
                quantity: Quantity::ColexWeight,
                closed_value: format!("w(r1)={}", x.weight()),
                oracle_value: format!("w(r2)={}", y.weight()),
            });
        }
    }
    Ok(out)
}

fn monotone_case(rng: &mut ChaCha8Rng) -> Result<Vec<Mismatch>> {
    let b = rng.gen_range(2..=5);
    let k = rng.gen_range(1..=4);
    let lo = 2.max(k as u64 - 1).max(2);
    let (a, d) = loop {
        let a = rng.gen_range(lo..=40u64);
        let d = rng.gen_range(1..=5u64);
        if a.gcd(&d) == 1 {
            break (a, d);
        }
    };
    let p = FamilyParams::from_u64s(a, b, d, k)?;
    Ok(match ndr_monotone_violation(&p) {
        None => vec![],
        Some(v) => vec![Mismatch {
            params: p.to_string(),
            quantity: Quantity::NdrMonotone,
            closed_value: v,
            oracle_value: "non-decreasing".into(),
        }],
    })
}

/// `td ∉ ⟨A⟩` for `t = 1..=n-2` in the repunit specialization.
pub fn multiples_of_d_outside(b: u32, n: u32, d: &BigUint, cfg: &OracleConfig) -> Result<bool> {
    let p = crate::closed_forms::repunit_params(b, n, d)?;
    let ape = apery_set_with(&build_generators(&p)?, cfg)?;
    let d = BigInt::from(d.clone());
    Ok((1..n.saturating_sub(1)).all(|t| !ape.contains(&(&d * t))))
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cases_run {}", self.cases_run)?;
        writeln!(f, "cases_passed {}", self.cases_passed)?;
        for (reason, count) in &self.skipped {
            writeln!(f, "skipped[{reason}] {count}")?;
        }
        writeln!(f, "mismatches {}", self.mismatches.len())?;
        for m in &self.mismatches {
            writeln!(
                f,
                "  {} {}: closed {} oracle {}",
                m.params, m.quantity, m.closed_value, m.oracle_value
            )?;
        }
        if self.probes_run > 0 {
            writeln!(f, "probes_run {}", self.probes_run)?;
            writeln!(f, "divergences {}", self.divergences.len())?;
        }
        write!(f, "elapsed_ms {}", self.elapsed_ms)
    }
}
