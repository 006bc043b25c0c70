//! Monte Carlo experiments over walk lengths: certification surveys, hitting
//! times of certification, and the decay of non-regular elements.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{mix64, substream, StreamRng};
use crate::stats::{log_linear_fit, wilson_interval, Z95};
use crate::walker::{run_walk, GroupSpec, WalkConfig, WalkMode, WalkState, Walker};
use crate::weyl::{enumerate_classes, ClassTable, Verdict, WeylClass};

use super::galois::{certify_state, PrimeBudget};

/// Walk substream index of trial `t` at length `n`, so that each length
/// gets fresh, independent walks.
pub fn trial_index(n: usize, t: u64) -> u64 {
    ((n as u64) << 32) | (t & 0xffff_ffff)
}

const CERT_STREAM: u64 = 0x6365_7274;

/// Randomness for factoring, kept apart from the walk streams.
fn cert_rng(master: u64, index: u64) -> StreamRng {
    substream(mix64(master, CERT_STREAM), index)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveySpec {
    pub grid: Vec<usize>,
    pub trials: u64,
    pub budget: PrimeBudget,
    /// Record per-trial wall time; makes the JSONL non-reproducible.
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub n: usize,
    pub verdict: Verdict,
    pub observed: Vec<WeylClass>,
    pub missing: Vec<WeylClass>,
    pub primes_used: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub n: usize,
    pub trials: u64,
    pub certified: u64,
    pub fraction: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub mean_primes: f64,
    /// Number of trials in which each class was observed.
    pub histogram: BTreeMap<String, u64>,
}

/// Rate `c` in `1 - fraction ~ c^{-n}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayEstimate {
    /// Regression of `log(1 - fraction)` on `n` over lengths with
    /// `0 < fraction < 1`.
    Fitted { c_hat: f64, slope: f64, r_squared: f64, points: usize },
    /// All trials certified at length `n`: the Wilson upper bound `u` on the
    /// failure rate gives `c >= u^{-1/n}`.
    LowerBound { c_at_least: f64, n: usize },
    Unavailable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyResult {
    pub group: GroupSpec,
    pub rows: Vec<SurveyRow>,
    pub decay: DecayEstimate,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

impl SurveyResult {
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n,trials,certified,fraction,wilson_lo,wilson_hi,mean_primes")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.n, r.trials, r.certified, r.fraction, r.wilson_lo, r.wilson_hi, r.mean_primes
            )?;
        }
        Ok(())
    }
}

fn run_trial(config: &WalkConfig, table: &ClassTable, budget: PrimeBudget, n: usize, t: u64, timing: bool) -> Result<TrialRecord> {
    let start = timing.then(Instant::now);
    let index = trial_index(n, t);
    let state = run_walk(config, index)?;
    let out = certify_state(&state, table, budget, &mut cert_rng(config.master_seed, index))?;
    Ok(TrialRecord {
        trial: t,
        n,
        verdict: out.verdict(),
        primes_used: out.primes_used(),
        observed: out.certificate.observed.into_iter().collect(),
        missing: out.certificate.missing,
        wall_ms: start.map(|s| s.elapsed().as_secs_f64() * 1e3),
    })
}

fn summarize(n: usize, records: &[TrialRecord]) -> SurveyRow {
    let trials = records.len() as u64;
    let certified = records.iter().filter(|r| r.verdict == Verdict::ProvenFullWeyl).count() as u64;
    let (wilson_lo, wilson_hi) = wilson_interval(certified, trials, Z95);
    let mut histogram = BTreeMap::new();
    for c in records.iter().flat_map(|r| &r.observed) {
        *histogram.entry(c.to_string()).or_insert(0) += 1;
    }
    let used: usize = records.iter().map(|r| r.primes_used).sum();
    SurveyRow {
        n,
        trials,
        certified,
        fraction: if trials == 0 { 0.0 } else { certified as f64 / trials as f64 },
        wilson_lo,
        wilson_hi,
        mean_primes: if trials == 0 { 0.0 } else { used as f64 / trials as f64 },
        histogram,
    }
}

pub fn decay_estimate(rows: &[SurveyRow]) -> DecayEstimate {
    let inner: Vec<&SurveyRow> = rows.iter().filter(|r| r.fraction > 0.0 && r.fraction < 1.0).collect();
    if inner.len() >= 2 {
        let xs: Vec<f64> = inner.iter().map(|r| r.n as f64).collect();
        let ys: Vec<f64> = inner.iter().map(|r| 1.0 - r.fraction).collect();
        if let Some(fit) = log_linear_fit(&xs, &ys) {
            return DecayEstimate::Fitted {
                c_hat: (-fit.slope).exp(),
                slope: fit.slope,
                r_squared: fit.r_squared,
                points: fit.points,
            };
        }
    }
    match rows.iter().filter(|r| r.trials > 0 && r.certified == r.trials && r.n > 0).max_by_key(|r| r.n) {
        Some(r) => DecayEstimate::LowerBound { c_at_least: (1.0 - r.wilson_lo).powf(-1.0 / r.n as f64), n: r.n },
        None => DecayEstimate::Unavailable,
    }
}

fn check_budget(config: &WalkConfig, budget: PrimeBudget) -> Result<()> {
    let primes = config.mode.primes();
    if !primes.is_empty() {
        let carried = primes.iter().filter(|&&p| p >= budget.floor).count();
        if carried < budget.count {
            return Err(Error::config(format!(
                "prime budget {} exceeds the {carried} carried primes >= {}",
                budget.count, budget.floor
            )));
        }
    }
    Ok(())
}

/// Certification survey: `spec.trials` fresh walks at every length of the
/// grid. Records come out in grid order, then trial order, whatever the
/// thread count.
pub fn survey(config: &WalkConfig, spec: &SurveySpec) -> Result<SurveyResult> {
    if spec.grid.is_empty() {
        return Err(Error::config("survey grid is empty"));
    }
    config.validate()?;
    check_budget(config, spec.budget)?;
    if spec.trials == 0 {
        return Ok(SurveyResult { group: config.group, rows: Vec::new(), decay: DecayEstimate::Unavailable, records: Vec::new() });
    }
    let table = enumerate_classes(config.group.weyl())?;
    let mut rows = Vec::with_capacity(spec.grid.len());
    let mut records = Vec::new();
    for &n in &spec.grid {
        let cfg = config.with_length(n);
        let batch = (0..spec.trials)
            .into_par_iter()
            .map(|t| run_trial(&cfg, &table, spec.budget, n, t, spec.timing))
            .collect::<Result<Vec<_>>>()?;
        rows.push(summarize(n, &batch));
        records.extend(batch);
    }
    Ok(SurveyResult { group: config.group, decay: decay_estimate(&rows), rows, records })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauSample {
    pub trial: u64,
    /// First length at which the prefix certifies; `None` when censored.
    pub tau: Option<usize>,
    pub censored: bool,
}

/// First certified prefix of each walk, scanning `X_1, ..., X_{n_max}` with
/// the same prime set throughout. Needs a modular walk: certifying every
/// prefix exactly is far too costly.
pub fn estimate_tau(config: &WalkConfig, trials: u64, n_max: usize, budget: PrimeBudget) -> Result<Vec<TauSample>> {
    if matches!(config.mode, WalkMode::Exact) {
        return Err(Error::config("tau estimation needs a modular or dual walk"));
    }
    config.validate()?;
    check_budget(config, budget)?;
    let table = enumerate_classes(config.group.weyl())?;
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut walker = Walker::new(config, t)?;
            let mut rng = cert_rng(config.master_seed, t);
            for n in 1..=n_max {
                walker.step()?;
                if certify_state(walker.state(), &table, budget, &mut rng)?.verdict() == Verdict::ProvenFullWeyl {
                    return Ok(TauSample { trial: t, tau: Some(n), censored: false });
                }
            }
            Ok(TauSample { trial: t, tau: None, censored: true })
        })
        .collect()
}

/// Median of the uncensored samples, counting censored ones as `+inf`.
/// `None` when the median itself is censored or there are no samples.
pub fn tau_median(samples: &[TauSample]) -> Option<f64> {
    let mut v: Vec<f64> = samples.iter().map(|s| s.tau.map_or(f64::INFINITY, |t| t as f64)).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let k = v.len();
    let m = if k % 2 == 1 { v[k / 2] } else { (v[k / 2 - 1] + v[k / 2]) / 2.0 };
    m.is_finite().then_some(m)
}

pub fn write_tau_csv<W: Write>(samples: &[TauSample], mut out: W) -> Result<()> {
    writeln!(out, "trial,tau,censored")?;
    for s in samples {
        let tau = s.tau.map(|t| t.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{}", s.trial, tau, s.censored)?;
    }
    Ok(())
}

/// Minimum number of carried primes for the modular non-regularity proxy.
pub const MIN_PROXY_PRIMES: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonregRow {
    pub n: usize,
    pub trials: u64,
    pub nonregular: u64,
    pub fraction: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

pub fn write_nonreg_csv<W: Write>(rows: &[NonregRow], mut out: W) -> Result<()> {
    writeln!(out, "n,trials,nonregular,fraction,wilson_lo,wilson_hi")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{},{}", r.n, r.trials, r.nonregular, r.fraction, r.wilson_lo, r.wilson_hi)?;
    }
    Ok(())
}

/// Repeated eigenvalues: zero discriminant when the exact matrix is carried,
/// otherwise a non-squarefree reduction at every carried prime.
fn is_nonregular(state: &WalkState) -> Result<bool> {
    match &state.exact {
        Some(x) => Ok(x.charpoly().discriminant()?.is_zero()),
        None => Ok(state.modular.iter().all(|m| !m.charpoly().is_squarefree())),
    }
}

/// Fraction of walks of each length whose characteristic polynomial has a
/// repeated root.
pub fn nonreg_decay(config: &WalkConfig, grid: &[usize], trials: u64) -> Result<Vec<NonregRow>> {
    if !config.mode.carries_exact() && config.mode.primes().len() < MIN_PROXY_PRIMES {
        return Err(Error::config(format!("modular non-regularity needs at least {MIN_PROXY_PRIMES} primes")));
    }
    config.validate()?;
    grid.iter()
        .map(|&n| {
            let cfg = config.with_length(n);
            let nonregular = (0..trials)
                .into_par_iter()
                .map(|t| is_nonregular(&run_walk(&cfg, trial_index(n, t))?).map(u64::from))
                .sum::<Result<u64>>()?;
            let (wilson_lo, wilson_hi) = wilson_interval(nonregular, trials, Z95);
            let fraction = if trials == 0 { 0.0 } else { nonregular as f64 / trials as f64 };
            Ok(NonregRow { n, trials, nonregular, fraction, wilson_lo, wilson_hi })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::prime::primes_from;

    fn sl3(primes: usize, seed: u64) -> WalkConfig {
        WalkConfig::new(GroupSpec::SL { m: 3 }, 0, seed, WalkMode::Modular(primes_from(2, primes))).unwrap()
    }

    #[test]
    fn survey_shapes_and_determinism() {
        let cfg = sl3(40, 11);
        let spec = SurveySpec { grid: vec![0, 20, 40], trials: 30, budget: PrimeBudget::new(40, 2), timing: false };
        let a = survey(&cfg, &spec).unwrap();
        let b = survey(&cfg, &spec).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.rows.len(), 3);
        assert_eq!(a.records.len(), 90);
        // the identity is degenerate
        assert_eq!(a.rows[0].certified, 0);
        assert!(a.records[..30].iter().all(|r| r.verdict == Verdict::Degenerate));
        for row in &a.rows {
            let recount = a.records.iter().filter(|r| r.n == row.n && r.verdict == Verdict::ProvenFullWeyl).count();
            assert_eq!(recount as u64, row.certified);
            assert!(row.wilson_lo <= row.fraction && row.fraction <= row.wilson_hi);
        }
        let mut text = Vec::new();
        a.write_jsonl(&mut text).unwrap();
        let first = std::str::from_utf8(&text).unwrap().lines().next().unwrap().to_string();
        assert!(first.starts_with(r#"{"trial":0,"n":0,"verdict":"degenerate","observed":[],"missing":[],"primes_used":40}"#));
    }

    #[test]
    fn empty_and_invalid_surveys() {
        let cfg = sl3(20, 1);
        let none = SurveySpec { grid: vec![10], trials: 0, budget: PrimeBudget::new(5, 2), timing: false };
        let r = survey(&cfg, &none).unwrap();
        assert!(r.rows.is_empty() && r.records.is_empty());
        let empty = SurveySpec { grid: vec![], ..none.clone() };
        assert!(survey(&cfg, &empty).is_err());
        let greedy = SurveySpec { budget: PrimeBudget::new(21, 2), trials: 1, ..none };
        assert!(matches!(survey(&cfg, &greedy), Err(Error::Config(_))));
    }

    #[test]
    fn decay_estimates() {
        let row = |n, certified, trials| {
            let mut r = summarize(n, &[]);
            r.trials = trials;
            r.certified = certified;
            r.fraction = certified as f64 / trials as f64;
            let (lo, hi) = wilson_interval(certified, trials, Z95);
            r.wilson_lo = lo;
            r.wilson_hi = hi;
            r
        };
        // 1 - fraction = 2^{-n/10}
        let rows: Vec<SurveyRow> = (1..=4).map(|k| row(10 * k, 1024 - (1024 >> k), 1024)).collect();
        match decay_estimate(&rows) {
            DecayEstimate::Fitted { c_hat, r_squared, .. } => {
                assert!((c_hat - 2f64.powf(0.1)).abs() < 1e-9);
                assert!(r_squared > 0.999);
            }
            other => panic!("{other:?}"),
        }
        match decay_estimate(&[row(10, 5, 10), row(50, 100, 100)]) {
            DecayEstimate::LowerBound { n, c_at_least } => {
                assert_eq!(n, 50);
                assert!(c_at_least > 1.0);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(decay_estimate(&[]), DecayEstimate::Unavailable);
    }

    #[test]
    fn tau_is_monotone_in_budget() {
        let cfg = WalkConfig::new(GroupSpec::SL { m: 2 }, 0, 5, WalkMode::Modular(primes_from(2, 30))).unwrap();
        let small = estimate_tau(&cfg, 40, 60, PrimeBudget::new(5, 2)).unwrap();
        let large = estimate_tau(&cfg, 40, 60, PrimeBudget::new(30, 2)).unwrap();
        for (a, b) in small.iter().zip(&large) {
            assert!(a.tau.unwrap_or(usize::MAX) >= b.tau.unwrap_or(usize::MAX));
            assert!(a.censored || a.tau.unwrap() >= 1);
        }
        let exact = WalkConfig::new(GroupSpec::SL { m: 2 }, 0, 5, WalkMode::Exact).unwrap();
        assert!(estimate_tau(&exact, 1, 5, PrimeBudget::new(5, 2)).is_err());
    }

    #[test]
    fn nonregular_at_identity() {
        let cfg = WalkConfig::new(GroupSpec::SL { m: 2 }, 0, 2, WalkMode::Exact).unwrap();
        let rows = nonreg_decay(&cfg, &[0, 30], 50).unwrap();
        assert_eq!(rows[0].fraction, 1.0);
        assert!(rows[1].fraction < 1.0);
        let few = WalkConfig::new(GroupSpec::SL { m: 2 }, 0, 2, WalkMode::Modular(vec![3, 5])).unwrap();
        assert!(nonreg_decay(&few, &[1], 1).is_err());
    }

    #[test]
    fn tau_median_rules() {
        let s = |tau: Option<usize>| TauSample { trial: 0, tau, censored: tau.is_none() };
        assert_eq!(tau_median(&[s(Some(3)), s(Some(5)), s(None)]), Some(5.0));
        assert_eq!(tau_median(&[s(Some(3)), s(None), s(None)]), None);
        assert_eq!(tau_median(&[]), None);
    }
}
