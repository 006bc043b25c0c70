//! Random walks `X_0 = 1, X_{n+1} = X_n * s_{n+1}` on `SL(m, Z)` and
//! `Sp(2g, Z)`, carried exactly, modulo a list of primes, or both.

use std::collections::{HashSet, VecDeque};
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::prime::{check_modulus, mul_mod};
use crate::algebra::{primes_from, IntMatrix, IntPoly, ModMatrix, ModPoly};
use crate::error::{Error, Result};
use crate::rng::{substream, RationalSampler, StreamRng};
use crate::weyl::GroupDescriptor;

/// Split simply connected group: `SL(m)` (type A) or `Sp(2g)` (type C).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum GroupSpec {
    #[serde(rename = "SL")]
    SL { m: usize },
    #[serde(rename = "Sp")]
    Sp { g: usize },
}

impl GroupSpec {
    pub fn sl(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::config("SL(m) needs m >= 2"));
        }
        Ok(GroupSpec::SL { m })
    }

    pub fn sp(g: usize) -> Result<Self> {
        if g < 1 {
            return Err(Error::config("Sp(2g) needs g >= 1"));
        }
        Ok(GroupSpec::Sp { g })
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            GroupSpec::SL { m } => Self::sl(m),
            GroupSpec::Sp { g } => Self::sp(g),
        }
    }

    /// Dimension of the natural representation.
    pub fn dim(self) -> usize {
        match self {
            GroupSpec::SL { m } => m,
            GroupSpec::Sp { g } => 2 * g,
        }
    }

    pub fn weyl(self) -> GroupDescriptor {
        match self {
            GroupSpec::SL { m } => GroupDescriptor::A(m),
            GroupSpec::Sp { g } => GroupDescriptor::C(g),
        }
    }

    pub fn is_symplectic(self) -> bool {
        matches!(self, GroupSpec::Sp { .. })
    }

    /// `J = [[0, I_g], [-I_g, 0]]`.
    pub fn symplectic_form(g: usize) -> IntMatrix {
        let mut j = IntMatrix::zero(2 * g);
        for i in 0..g {
            j.set(i, g + i, BigInt::one());
            j.set(g + i, i, -BigInt::one());
        }
        j
    }

    /// `det M = 1` for SL, `M^T J M = J` for Sp.
    pub fn contains(self, m: &IntMatrix) -> bool {
        if m.dim() != self.dim() {
            return false;
        }
        match self {
            GroupSpec::SL { .. } => m.det().is_one(),
            GroupSpec::Sp { g } => {
                let j = Self::symplectic_form(g);
                m.transpose().mul(&j).mul(m) == j
            }
        }
    }

    pub fn contains_mod(self, m: &ModMatrix) -> bool {
        if m.dim() != self.dim() {
            return false;
        }
        let p = m.modulus();
        match self {
            GroupSpec::SL { .. } => m.det() == 1 % p,
            GroupSpec::Sp { g } => {
                let j = Self::symplectic_form(g).reduce(p);
                m.transpose().mul(&j).mul(m) == j
            }
        }
    }

    /// `|G(F_p)|`.
    pub fn order_mod(self, p: u64) -> BigUint {
        let q = BigUint::from(p);
        match self {
            GroupSpec::SL { m } => {
                let mut order = num_traits::pow(q.clone(), m * (m - 1) / 2);
                for i in 2..=m {
                    order *= num_traits::pow(q.clone(), i) - BigUint::one();
                }
                order
            }
            GroupSpec::Sp { g } => {
                let mut order = num_traits::pow(q.clone(), g * g);
                for i in 1..=g {
                    order *= num_traits::pow(q.clone(), 2 * i) - BigUint::one();
                }
                order
            }
        }
    }
}

impl std::fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupSpec::SL { m } => write!(f, "SL({m})"),
            GroupSpec::Sp { g } => write!(f, "Sp({})", 2 * g),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub matrix: IntMatrix,
}

/// Identity plus `I ± E_ij` (SL) or identity plus the symplectic
/// transvections `I ± v v^T J` for `v` ranging over the standard basis
/// vectors and the sums `e_i + e_j`, `i < j` (Sp).
pub fn default_generators(group: GroupSpec) -> Vec<Generator> {
    let n = group.dim();
    let mut out = vec![Generator { label: "id".into(), matrix: IntMatrix::identity(n) }];
    match group {
        GroupSpec::SL { m } => {
            for i in 0..m {
                for j in 0..m {
                    if i == j {
                        continue;
                    }
                    for (sign, tag) in [(1, '+'), (-1, '-')] {
                        let mut e = IntMatrix::identity(m);
                        e.set(i, j, BigInt::from(sign));
                        out.push(Generator { label: format!("E{i}{j}{tag}"), matrix: e });
                    }
                }
            }
        }
        GroupSpec::Sp { g } => {
            let j = GroupSpec::symplectic_form(g);
            let mut vectors: Vec<(String, Vec<i64>)> = Vec::new();
            for i in 0..n {
                let mut v = vec![0; n];
                v[i] = 1;
                vectors.push((format!("e{i}"), v));
            }
            for a in 0..n {
                for b in a + 1..n {
                    let mut v = vec![0; n];
                    v[a] = 1;
                    v[b] = 1;
                    vectors.push((format!("e{a}+e{b}"), v));
                }
            }
            for (name, v) in vectors {
                for (sign, tag) in [(1i64, '+'), (-1, '-')] {
                    let mut m = IntMatrix::identity(n);
                    // (v v^T J)_{rc} = v_r * (v^T J)_c
                    for r in 0..n {
                        for c in 0..n {
                            let vj: BigInt = (0..n).map(|k| BigInt::from(v[k]) * j.get(k, c)).sum();
                            let delta = BigInt::from(sign * v[r]) * vj;
                            if !delta.is_zero() {
                                let cur = m.get(r, c).clone();
                                m.set(r, c, cur + delta);
                            }
                        }
                    }
                    out.push(Generator { label: format!("T[{name}]{tag}"), matrix: m });
                }
            }
        }
    }
    out
}

/// Breadth-first closure of a set of matrices mod p under right
/// multiplication, visiting each element once. Fails if more than `cap`
/// elements are reached.
pub fn bfs_closure(gens: &[ModMatrix], cap: usize) -> Result<Vec<ModMatrix>> {
    let first = gens.first().ok_or_else(|| Error::input("empty generator list"))?;
    let id = ModMatrix::identity(first.dim(), first.modulus());
    let mut seen: HashSet<Box<[u64]>> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    seen.insert(id.packed_key());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = x.mul(s);
            if seen.insert(y.packed_key()) {
                if seen.len() > cap {
                    return Err(Error::config(format!("closure exceeds cap of {cap} elements")));
                }
                queue.push_back(y);
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// Largest finite group the generation check will enumerate.
pub const GENERATION_CAP: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationCheck {
    pub generated: bool,
    pub closure_size: u64,
    pub group_order: BigUint,
}

/// Whether the generators reduce to a generating set of `G(F_p)`.
pub fn verify_generation_mod_p(group: GroupSpec, generators: &[IntMatrix], p: u64) -> Result<GenerationCheck> {
    check_modulus(p)?;
    let order = group.order_mod(p);
    if order > BigUint::from(GENERATION_CAP) {
        return Err(Error::config(format!("|{group}(F_{p})| = {order} exceeds the enumeration cap")));
    }
    let reduced: Vec<ModMatrix> = generators.iter().map(|g| g.reduce(p)).collect();
    let closure = bfs_closure(&reduced, GENERATION_CAP)?;
    let size = closure.len() as u64;
    Ok(GenerationCheck { generated: BigUint::from(size) == order, closure_size: size, group_order: order })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkMode {
    Exact,
    Modular(Vec<u64>),
    /// Exact and modular simultaneously, for cross-checks.
    Dual(Vec<u64>),
}

impl WalkMode {
    pub fn primes(&self) -> &[u64] {
        match self {
            WalkMode::Exact => &[],
            WalkMode::Modular(p) | WalkMode::Dual(p) => p,
        }
    }

    pub fn carries_exact(&self) -> bool {
        !matches!(self, WalkMode::Modular(_))
    }
}

/// Default interval between group-membership audits along a walk.
pub const DEFAULT_CHECK_EVERY: usize = 64;
/// Default bound on the recorded generator-label trace.
pub const DEFAULT_TRACE_LIMIT: usize = 256;

#[derive(Clone, Debug)]
pub struct WalkConfig {
    pub group: GroupSpec,
    pub generators: Vec<Generator>,
    pub weights: Vec<BigRational>,
    pub length: usize,
    pub master_seed: u64,
    pub mode: WalkMode,
    pub check_every: usize,
    pub trace_limit: usize,
}

impl WalkConfig {
    /// Default generators with uniform weights.
    pub fn new(group: GroupSpec, length: usize, master_seed: u64, mode: WalkMode) -> Result<Self> {
        let group = group.validate()?;
        let generators = default_generators(group);
        let w = BigRational::new(BigInt::one(), BigInt::from(generators.len()));
        let cfg = WalkConfig {
            group,
            weights: vec![w; generators.len()],
            generators,
            length,
            master_seed,
            mode,
            check_every: DEFAULT_CHECK_EVERY,
            trace_limit: DEFAULT_TRACE_LIMIT,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_length(&self, length: usize) -> Self {
        WalkConfig { length, ..self.clone() }
    }

    /// Checks every structural invariant: positive weights summing to 1,
    /// group membership, the identity present, and symmetry
    /// `p(s) = p(s^{-1})` with inverses found by inversion over Z.
    pub fn validate(&self) -> Result<()> {
        let n = self.group.dim();
        if self.generators.is_empty() || self.generators.len() != self.weights.len() {
            return Err(Error::config("generator and weight lists must be nonempty and of equal length"));
        }
        RationalSampler::new(&self.weights)?;
        for g in &self.generators {
            if g.matrix.dim() != n || !self.group.contains(&g.matrix) {
                return Err(Error::config(format!("generator {} is not in {}", g.label, self.group)));
            }
        }
        if !self.generators.iter().any(|g| g.matrix.is_identity()) {
            return Err(Error::config("generator set must contain the identity"));
        }
        symmetry_audit(&self.generators, &self.weights)?;
        for &p in self.mode.primes() {
            check_modulus(p).map_err(|e| Error::config(e.to_string()))?;
            if self.group.is_symplectic() && p == 2 {
                return Err(Error::config("p = 2 is excluded for symplectic groups"));
            }
        }
        if self.check_every == 0 {
            return Err(Error::config("check_every must be positive"));
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: WalkConfigFile = serde_json::from_str(&text)?;
        file.resolve(path.parent().unwrap_or(Path::new(".")))
    }
}

/// `sum_s w(s) ([s] - [s^{-1}]) = 0` as a formal sum over matrices:
/// every generator's inverse carries the same total weight.
pub fn symmetry_audit(generators: &[Generator], weights: &[BigRational]) -> Result<()> {
    for g in generators {
        let inv = g
            .matrix
            .inverse()
            .ok_or_else(|| Error::config(format!("generator {} is not invertible over Z", g.label)))?;
        let weight_of = |m: &IntMatrix| -> BigRational {
            generators.iter().zip(weights).filter(|(h, _)| h.matrix == *m).map(|(_, w)| w.clone()).sum()
        };
        let (fwd, back) = (weight_of(&g.matrix), weight_of(&inv));
        if fwd != back {
            return Err(Error::config(format!(
                "asymmetric step distribution: {} has total weight {fwd} but its inverse has {back}",
                g.label
            )));
        }
    }
    Ok(())
}

/// Nonzero entries `(row, col, value)` of a generator mod p.
#[derive(Clone, Debug)]
struct SparseMod {
    entries: Vec<(usize, usize, u64)>,
}

impl SparseMod {
    fn new(m: &ModMatrix) -> Self {
        let n = m.dim();
        let mut entries = Vec::new();
        for r in 0..n {
            for c in 0..n {
                let v = m.get(r, c);
                if v != 0 {
                    entries.push((r, c, v));
                }
            }
        }
        SparseMod { entries }
    }

    /// `out <- x * self`.
    fn right_mul(&self, x: &[u64], n: usize, p: u64, out: &mut [u64]) {
        out.fill(0);
        for &(k, j, v) in &self.entries {
            for i in 0..n {
                let a = x[i * n + k];
                if a == 0 {
                    continue;
                }
                let term = if v == 1 {
                    a
                } else if v == p - 1 {
                    p - a
                } else {
                    mul_mod(a, v, p)
                };
                let s = out[i * n + j] + term;
                out[i * n + j] = if s >= p { s - p } else { s };
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkState {
    pub step: usize,
    pub exact: Option<IntMatrix>,
    pub modular: Vec<ModMatrix>,
    /// Indices of the first `trace_limit` generators drawn.
    pub trace: Vec<usize>,
}

/// Incremental walk for one trial, used when every prefix is needed.
pub struct Walker<'a> {
    config: &'a WalkConfig,
    sampler: RationalSampler,
    rng: StreamRng,
    sparse: Vec<Vec<SparseMod>>,
    scratch: Vec<u64>,
    state: WalkState,
}

impl<'a> Walker<'a> {
    pub fn new(config: &'a WalkConfig, trial_index: u64) -> Result<Self> {
        let sampler = RationalSampler::new(&config.weights)?;
        let n = config.group.dim();
        let primes = config.mode.primes();
        let sparse = primes
            .iter()
            .map(|&p| config.generators.iter().map(|g| SparseMod::new(&g.matrix.reduce(p))).collect())
            .collect();
        let state = WalkState {
            step: 0,
            exact: config.mode.carries_exact().then(|| IntMatrix::identity(n)),
            modular: primes.iter().map(|&p| ModMatrix::identity(n, p)).collect(),
            trace: Vec::new(),
        };
        Ok(Walker {
            config,
            sampler,
            rng: substream(config.master_seed, trial_index),
            sparse,
            scratch: vec![0; n * n],
            state,
        })
    }

    pub fn state(&self) -> &WalkState {
        &self.state
    }

    pub fn into_state(self) -> WalkState {
        self.state
    }

    /// Draws the next generator and multiplies it on the right.
    pub fn step(&mut self) -> Result<()> {
        let idx = self.sampler.sample(&mut self.rng);
        let n = self.config.group.dim();
        if let Some(x) = self.state.exact.as_mut() {
            *x = x.mul(&self.config.generators[idx].matrix);
        }
        for (slot, gens) in self.state.modular.iter_mut().zip(&self.sparse) {
            let p = slot.modulus();
            gens[idx].right_mul(slot.entries(), n, p, &mut self.scratch);
            *slot = ModMatrix::from_reduced(n, p, self.scratch.clone());
        }
        if self.state.trace.len() < self.config.trace_limit {
            self.state.trace.push(idx);
        }
        self.state.step += 1;
        if self.state.step % self.config.check_every == 0 {
            self.audit()?;
        }
        Ok(())
    }

    /// Group membership of every carried component, and agreement between
    /// the exact matrix and its modular shadows.
    pub fn audit(&self) -> Result<()> {
        let group = self.config.group;
        if let Some(x) = &self.state.exact {
            if !group.contains(x) {
                return Err(Error::invariant(format!("walk left {group} at step {}", self.state.step)));
            }
        }
        for m in &self.state.modular {
            if !group.contains_mod(m) {
                return Err(Error::invariant(format!(
                    "walk left {group}(F_{}) at step {}",
                    m.modulus(),
                    self.state.step
                )));
            }
            if let Some(x) = &self.state.exact {
                if x.reduce(m.modulus()) != *m {
                    return Err(Error::invariant("exact and modular walk components disagree"));
                }
            }
        }
        Ok(())
    }
}

/// State after `config.length` steps of trial `trial_index`. The trial is
/// fully determined by `(master_seed, trial_index)`.
pub fn run_walk(config: &WalkConfig, trial_index: u64) -> Result<WalkState> {
    let mut w = Walker::new(config, trial_index)?;
    for _ in 0..config.length {
        w.step()?;
    }
    Ok(w.into_state())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WalkCharpoly {
    Exact(IntPoly),
    Modular(Vec<ModPoly>),
}

/// Exact characteristic polynomial when the state carries the exact matrix,
/// otherwise the family of reductions.
pub fn walk_charpoly(state: &WalkState) -> WalkCharpoly {
    match &state.exact {
        Some(x) => WalkCharpoly::Exact(x.charpoly()),
        None => WalkCharpoly::Modular(state.modular.iter().map(ModMatrix::charpoly).collect()),
    }
}

/// Primes listed explicitly or as "the first `count` primes `>= from`".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrimeSpec {
    List(Vec<u64>),
    First { first: usize, from: u64 },
}

impl PrimeSpec {
    pub fn resolve(&self) -> Vec<u64> {
        match self {
            PrimeSpec::List(v) => v.clone(),
            PrimeSpec::First { first, from } => primes_from(*from, *first),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub label: String,
    pub path: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    Exact,
    Modular,
    Dual,
}

/// On-disk walk configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfigFile {
    pub group: GroupSpec,
    #[serde(default)]
    pub generators: Option<Vec<GeneratorFile>>,
    /// Exact weights as `"num/den"` strings, one per generator.
    #[serde(default)]
    pub weights: Option<Vec<String>>,
    #[serde(default)]
    pub length: usize,
    pub mode: ModeName,
    #[serde(default)]
    pub primes: Option<PrimeSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub check_every: Option<usize>,
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| Error::config(format!("bad rational {s:?}")))?;
    let den: BigInt = den.parse().map_err(|_| Error::config(format!("bad rational {s:?}")))?;
    if den.is_zero() {
        return Err(Error::config(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl WalkConfigFile {
    /// Builds a validated config; generator paths are relative to `base`.
    pub fn resolve(&self, base: &Path) -> Result<WalkConfig> {
        let group = self.group.validate()?;
        let generators = match &self.generators {
            None => default_generators(group),
            Some(files) => files
                .iter()
                .map(|f| {
                    let text = std::fs::read_to_string(base.join(&f.path))?;
                    let matrix = IntMatrix::parse_text(&text).map_err(|e| Error::config(format!("{}: {e}", f.path)))?;
                    Ok(Generator { label: f.label.clone(), matrix })
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let weights = match &self.weights {
            None => vec![BigRational::new(BigInt::one(), BigInt::from(generators.len())); generators.len()],
            Some(ws) => ws.iter().map(|w| parse_rational(w)).collect::<Result<Vec<_>>>()?,
        };
        let primes = self.primes.as_ref().map(PrimeSpec::resolve);
        let mode = match (self.mode, primes) {
            (ModeName::Exact, _) => WalkMode::Exact,
            (ModeName::Modular, Some(p)) => WalkMode::Modular(p),
            (ModeName::Dual, Some(p)) => WalkMode::Dual(p),
            (_, None) => return Err(Error::config("modular and dual modes need a prime list")),
        };
        let cfg = WalkConfig {
            group,
            generators,
            weights,
            length: self.length,
            master_seed: self.seed,
            mode,
            check_every: self.check_every.unwrap_or(DEFAULT_CHECK_EVERY),
            trace_limit: DEFAULT_TRACE_LIMIT,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_generator_counts() {
        assert_eq!(default_generators(GroupSpec::SL { m: 2 }).len(), 5);
        assert_eq!(default_generators(GroupSpec::SL { m: 3 }).len(), 13);
        let sp4 = GroupSpec::Sp { g: 2 };
        let gens = default_generators(sp4);
        assert_eq!(gens.len(), 1 + 2 * (4 + 6));
        for g in &gens {
            assert!(sp4.contains(&g.matrix), "{}", g.label);
        }
    }

    #[test]
    fn generation_mod_small_primes() {
        let sl2 = GroupSpec::SL { m: 2 };
        let mats: Vec<IntMatrix> = default_generators(sl2).into_iter().map(|g| g.matrix).collect();
        let check = verify_generation_mod_p(sl2, &mats, 3).unwrap();
        assert!(check.generated);
        assert_eq!(check.closure_size, 24);

        let only_id = [IntMatrix::identity(2)];
        let check = verify_generation_mod_p(sl2, &only_id, 3).unwrap();
        assert!(!check.generated);
        assert_eq!(check.closure_size, 1);
    }

    #[test]
    fn orders() {
        assert_eq!(GroupSpec::SL { m: 2 }.order_mod(5), BigUint::from(120u32));
        assert_eq!(GroupSpec::SL { m: 3 }.order_mod(2), BigUint::from(168u32));
        assert_eq!(GroupSpec::Sp { g: 2 }.order_mod(3), BigUint::from(51840u32));
        assert_eq!(GroupSpec::Sp { g: 1 }.order_mod(7), GroupSpec::SL { m: 2 }.order_mod(7));
    }

    #[test]
    fn walk_basics() {
        let cfg = WalkConfig::new(GroupSpec::SL { m: 3 }, 0, 5, WalkMode::Exact).unwrap();
        assert!(run_walk(&cfg, 0).unwrap().exact.unwrap().is_identity());
        let cfg = cfg.with_length(40);
        let a = run_walk(&cfg, 3).unwrap();
        let b = run_walk(&cfg, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.step, 40);
        assert_eq!(a.trace.len(), 40);
        assert_ne!(a.exact, run_walk(&cfg, 4).unwrap().exact);
    }

    #[test]
    fn dual_mode_components_agree() {
        let primes = primes_from(2, 20);
        let cfg = WalkConfig::new(GroupSpec::SL { m: 3 }, 30, 11, WalkMode::Dual(primes.clone())).unwrap();
        let st = run_walk(&cfg, 0).unwrap();
        let x = st.exact.unwrap();
        for (m, p) in st.modular.iter().zip(&primes) {
            assert_eq!(&x.reduce(*p), m);
        }
    }

    #[test]
    fn config_validation() {
        let sl2 = GroupSpec::SL { m: 2 };
        let mut cfg = WalkConfig::new(sl2, 10, 0, WalkMode::Exact).unwrap();
        // move weight from E01- to E01+: sums still to 1 but asymmetric
        let fifth = BigRational::new(BigInt::one(), BigInt::from(5));
        let tenth = BigRational::new(BigInt::one(), BigInt::from(10));
        cfg.weights[1] = &fifth + &tenth;
        cfg.weights[2] = tenth;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));

        let mut cfg = WalkConfig::new(sl2, 10, 0, WalkMode::Exact).unwrap();
        cfg.generators.remove(0);
        cfg.weights = vec![BigRational::new(BigInt::one(), BigInt::from(4)); 4];
        assert!(cfg.validate().is_err());

        assert!(WalkConfig::new(GroupSpec::Sp { g: 1 }, 1, 0, WalkMode::Modular(vec![2, 3])).is_err());
        assert!(WalkConfig::new(sl2, 1, 0, WalkMode::Modular(vec![4])).is_err());
    }

    #[test]
    fn config_file_parsing() {
        let json = r#"{"group":{"family":"Sp","g":2},"mode":"modular","primes":{"first":3,"from":5},"seed":9,"length":12}"#;
        let file: WalkConfigFile = serde_json::from_str(json).unwrap();
        let cfg = file.resolve(Path::new(".")).unwrap();
        assert_eq!(cfg.mode, WalkMode::Modular(vec![5, 7, 11]));
        assert_eq!(cfg.generators.len(), 21);
        let json = r#"{"group":{"family":"SL","m":2},"mode":"exact","weights":["1/5","1/5","1/5","1/5","1/5"]}"#;
        let cfg = serde_json::from_str::<WalkConfigFile>(json).unwrap().resolve(Path::new(".")).unwrap();
        assert_eq!(cfg.length, 0);
        assert_eq!(parse_rational(" 3/6 ").unwrap(), BigRational::new(BigInt::one(), BigInt::from(2)));
        assert!(parse_rational("1/0").is_err());
    }
}
