//! Finite coset Markov chains: kernels induced by a symmetric step
//! distribution acting on a finite quotient, spectral gaps, visit-count
//! large deviations and the explicit exponential bound.

use std::collections::HashMap;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::prime::prime_count;
use crate::census::rational_to_f64;
use crate::error::{Error, Result};
use crate::rng::{substream, RationalSampler};
use crate::walker::{bfs_closure, format_rational, parse_rational, WalkConfig};
use crate::weyl::{ClassTable, WeylClass};

/// Largest chain accepted by the eigensolver.
pub const MAX_STATES: usize = 4096;

/// Symmetric stochastic kernel over a finite set of states, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSpec {
    states: Vec<String>,
    kernel: Vec<Vec<BigRational>>,
    start: usize,
}

impl ChainSpec {
    /// Rows must sum to exactly 1, entries be nonnegative, and the kernel be
    /// symmetric (reversible for the uniform law).
    pub fn new(states: Vec<String>, kernel: Vec<Vec<BigRational>>, start: usize) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::input("chain needs at least one state"));
        }
        if kernel.len() != n || kernel.iter().any(|r| r.len() != n) {
            return Err(Error::input("kernel must be a square matrix matching the state list"));
        }
        if start >= n {
            return Err(Error::input(format!("start state {start} out of range")));
        }
        for (i, row) in kernel.iter().enumerate() {
            if row.iter().any(Signed::is_negative) {
                return Err(Error::input(format!("negative entry in kernel row {i}")));
            }
            if !row.iter().sum::<BigRational>().is_one() {
                return Err(Error::input(format!("kernel row {i} does not sum to 1")));
            }
            for j in 0..i {
                if kernel[i][j] != kernel[j][i] {
                    return Err(Error::input(format!("kernel is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(ChainSpec { states, kernel, start })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn kernel(&self) -> &[Vec<BigRational>] {
        &self.kernel
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn kernel_f64(&self) -> Vec<Vec<f64>> {
        self.kernel.iter().map(|r| r.iter().map(rational_to_f64).collect()).collect()
    }

    /// Every state reachable from every other.
    pub fn is_irreducible(&self) -> bool {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for (j, k) in self.kernel[i].iter().enumerate() {
                if !seen[j] && !k.is_zero() {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        // symmetric kernel: reachability from state 0 suffices
        seen.into_iter().all(|b| b)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ChainFile = serde_json::from_str(text)?;
        let kernel = raw
            .kernel
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        ChainSpec::new(raw.states, kernel, raw.start)
    }

    pub fn to_json(&self) -> String {
        let raw = ChainFile {
            states: self.states.clone(),
            kernel: self.kernel.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
            start: self.start,
        };
        serde_json::to_string(&raw).expect("chain serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainFile {
    states: Vec<String>,
    kernel: Vec<Vec<String>>,
    start: usize,
}

/// One step of the walk seen on the quotient: `action[c]` is the state
/// reached from state `c` by this step.
#[derive(Clone, Debug)]
pub struct StepAction {
    pub label: String,
    /// Label of the inverse step.
    pub inverse: String,
    pub weight: BigRational,
    pub action: Vec<usize>,
}

/// `K(c, c') = sum of p(s) over steps s with c.s = c'`.
pub fn kernel_from_walk(states: Vec<String>, steps: &[StepAction], start: usize) -> Result<ChainSpec> {
    let n = states.len();
    let by_label: HashMap<&str, &StepAction> = steps.iter().map(|s| (s.label.as_str(), s)).collect();
    if by_label.len() != steps.len() {
        return Err(Error::input("duplicate step labels"));
    }
    RationalSampler::new(&steps.iter().map(|s| s.weight.clone()).collect::<Vec<_>>())
        .map_err(|e| Error::input(e.to_string()))?;
    for s in steps {
        let mut hit = vec![false; n];
        if s.action.len() != n || s.action.iter().any(|&t| t >= n || std::mem::replace(&mut hit[t], true)) {
            return Err(Error::input(format!("step {} does not act as a permutation of the states", s.label)));
        }
        let inv = by_label
            .get(s.inverse.as_str())
            .ok_or_else(|| Error::input(format!("inverse {} of step {} is missing", s.inverse, s.label)))?;
        if inv.weight != s.weight {
            return Err(Error::input(format!(
                "asymmetric weights: p({}) = {} but p({}) = {}",
                s.label, s.weight, inv.label, inv.weight
            )));
        }
        if (0..n).any(|c| inv.action[s.action[c]] != c) {
            return Err(Error::input(format!("step {} is not inverse to {}", inv.label, s.label)));
        }
    }
    let mut kernel = vec![vec![BigRational::zero(); n]; n];
    for s in steps {
        for (c, &t) in s.action.iter().enumerate() {
            kernel[c][t] += &s.weight;
        }
    }
    let spec = ChainSpec::new(states, kernel, start)?;
    if !spec.is_irreducible() {
        return Err(Error::input("induced chain is not irreducible"));
    }
    Ok(spec)
}

/// Chain induced by a walk config on its reduction `G(F_p)`, with states
/// the group elements and right multiplication by the generators.
pub fn kernel_from_reduction(config: &WalkConfig, p: u64) -> Result<ChainSpec> {
    let gens: Vec<_> = config.generators.iter().map(|g| g.matrix.reduce(p)).collect();
    let elements = bfs_closure(&gens, MAX_STATES)?;
    let index: HashMap<Box<[u64]>, usize> = elements.iter().enumerate().map(|(i, x)| (x.packed_key(), i)).collect();
    let mut steps = Vec::with_capacity(gens.len());
    for (g, gm) in config.generators.iter().zip(&gens) {
        let inv = g.matrix.inverse().ok_or_else(|| Error::config(format!("{} is not invertible", g.label)))?;
        let inverse = config
            .generators
            .iter()
            .find(|h| h.matrix == inv)
            .ok_or_else(|| Error::config(format!("inverse of {} is not a generator", g.label)))?;
        let action = elements.iter().map(|x| index[&x.mul(gm).packed_key()]).collect();
        let weight = config.weights[config.generators.iter().position(|h| h.label == g.label).unwrap()].clone();
        steps.push(StepAction { label: g.label.clone(), inverse: inverse.label.clone(), weight, action });
    }
    let states = (0..elements.len()).map(|i| format!("g{i}")).collect();
    kernel_from_walk(states, &steps, 0)
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// sorted in decreasing order.
pub fn symmetric_eigenvalues(matrix: &[Vec<f64>]) -> Vec<f64> {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    eig
}

/// `beta = 1 - lambda_2`, with `lambda_2` the second-largest eigenvalue.
/// A one-state chain has gap 1.
pub fn spectral_gap(spec: &ChainSpec) -> Result<f64> {
    if spec.len() > MAX_STATES {
        return Err(Error::input(format!("{} states exceed the eigensolver cap {MAX_STATES}", spec.len())));
    }
    if spec.len() == 1 {
        return Ok(1.0);
    }
    let eig = symmetric_eigenvalues(&spec.kernel_f64());
    Ok(1.0 - eig[1])
}

/// `e^{beta/5} |C|^{3/2} exp(-beta (n+1) / (12 (2|C|)^2))`: the bound on
/// `P(iota_n < (n+1)/(2|C|))` summed over the states.
pub fn lezaud_bound(beta: f64, states: usize, n: usize) -> f64 {
    let c = states as f64;
    (beta / 5.0).exp() * c.powf(1.5) * (-beta * (n as f64 + 1.0) / (12.0 * (2.0 * c).powi(2))).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub states: usize,
    pub trials: u64,
    pub beta: f64,
    pub n: Vec<usize>,
    /// Trials with `iota_n < (n+1)/(2|C|)`, per grid point.
    pub events: Vec<u64>,
    pub empirical: Vec<f64>,
    pub bound: Vec<f64>,
}

impl DeviationReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n,empirical,bound,beta")?;
        for i in 0..self.n.len() {
            writeln!(out, "{},{},{},{}", self.n[i], self.empirical[i], self.bound[i], self.beta)?;
        }
        Ok(())
    }
}

fn row_samplers(spec: &ChainSpec) -> Vec<(Vec<usize>, RationalSampler)> {
    spec.kernel
        .iter()
        .map(|row| {
            let support: Vec<usize> = (0..row.len()).filter(|&j| !row[j].is_zero()).collect();
            let weights: Vec<BigRational> = support.iter().map(|&j| row[j].clone()).collect();
            (support, RationalSampler::new(&weights).expect("kernel rows are distributions"))
        })
        .collect()
}

/// Monte Carlo estimate of `P(iota_n < (n+1)/(2|C|))` at each grid point,
/// where `iota_n` counts the indices `0 <= i <= n` with `X_i = X_n`.
/// Trial `t` uses substream `(seed, t)`.
pub fn simulate_iota(spec: &ChainSpec, grid: &[usize], trials: u64, seed: u64) -> Result<DeviationReport> {
    if trials == 0 {
        return Err(Error::input("trials must be at least 1"));
    }
    let beta = spectral_gap(spec)?;
    let mut grid = grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let n_max = grid.last().copied().unwrap_or(0);
    let states = spec.len();
    let samplers = row_samplers(spec);
    let events = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, t);
            let mut visits = vec![0u64; states];
            let mut x = spec.start;
            visits[x] = 1;
            let mut hits = vec![0u64; grid.len()];
            let mut g = 0;
            for n in 0..=n_max {
                if n > 0 {
                    let (support, sampler) = &samplers[x];
                    x = support[sampler.sample(&mut rng)];
                    visits[x] += 1;
                }
                while g < grid.len() && grid[g] == n {
                    if 2 * states as u64 * visits[x] < n as u64 + 1 {
                        hits[g] += 1;
                    }
                    g += 1;
                }
            }
            hits
        })
        .reduce(
            || vec![0u64; grid.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let empirical = events.iter().map(|&e| e as f64 / trials as f64).collect();
    let bound = grid.iter().map(|&n| lezaud_bound(beta, states, n)).collect();
    Ok(DeviationReport { states, trials, beta, n: grid, events, empirical, bound })
}

/// Empirical law of `X_steps` over independent trials.
pub fn empirical_distribution(spec: &ChainSpec, steps: usize, trials: u64, seed: u64) -> Vec<f64> {
    let samplers = row_samplers(spec);
    let counts = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, t);
            let mut x = spec.start;
            for _ in 0..steps {
                let (support, sampler) = &samplers[x];
                x = support[sampler.sample(&mut rng)];
            }
            x
        })
        .fold(
            || vec![0u64; spec.len()],
            |mut c, x| {
                c[x] += 1;
                c
            },
        )
        .reduce(
            || vec![0u64; spec.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    counts.into_iter().map(|c| c as f64 / trials as f64).collect()
}

/// Leading-order sieve mass `V = (|C|/|W|) * pi(L)` for a single-coset group.
pub fn sieve_density(table: &ClassTable, class: &WeylClass, prime_bound: u64) -> Result<BigRational> {
    if prime_bound < 2 {
        return Err(Error::input("prime bound must be at least 2"));
    }
    let fraction = table
        .fraction(class)
        .ok_or_else(|| Error::input(format!("class {class} does not belong to {}", table.group())))?;
    Ok(fraction * BigRational::from_integer(BigInt::from(prime_count(prime_bound))))
}

/// Symmetric two-state chain staying put with probability `stay`.
pub fn two_state(stay: BigRational) -> Result<ChainSpec> {
    let leave = BigRational::one() - &stay;
    ChainSpec::new(vec!["a".into(), "b".into()], vec![vec![stay.clone(), leave.clone()], vec![leave, stay]], 0)
}
