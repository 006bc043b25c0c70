//! Conjugacy classes of the Weyl groups of types A (symmetric groups) and
//! C (hyperoctahedral groups), their exact class fractions, and the
//! one-sided Jordan certificate.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on `m` (type A) and `g` (type C) accepted by the class
/// enumerator.
pub const MAX_RANK: usize = 64;

/// Weyl group descriptor: `A(m)` is the symmetric group on `m` letters
/// (Weyl group of `SL(m)`), `C(g)` the signed permutations of `g` letters
/// (Weyl group of `Sp(2g)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupDescriptor {
    A(usize),
    C(usize),
}

impl GroupDescriptor {
    pub fn validate(self) -> Result<Self> {
        match self {
            GroupDescriptor::A(m) if (2..=MAX_RANK).contains(&m) => Ok(self),
            GroupDescriptor::C(g) if (1..=MAX_RANK).contains(&g) => Ok(self),
            _ => Err(Error::input(format!("group descriptor {self} out of range"))),
        }
    }

    /// `|W|`: `m!` or `2^g g!`.
    pub fn order(self) -> BigInt {
        match self {
            GroupDescriptor::A(m) => factorial(m),
            GroupDescriptor::C(g) => factorial(g) << g,
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::A(m) => write!(f, "A(m={m})"),
            GroupDescriptor::C(g) => write!(f, "C(g={g})"),
        }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Conjugacy class label. Parts are kept weakly decreasing, so equality and
/// ordering are structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", try_from = "RawClass", into = "RawClass")]
pub enum WeylClass {
    /// Cycle type of a permutation.
    A { parts: Vec<u32> },
    /// Signed cycle type: `pos` are positive cycles, `neg` negative cycles.
    C { pos: Vec<u32>, neg: Vec<u32> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type")]
enum RawClass {
    A { parts: Vec<u32> },
    C { pos: Vec<u32>, neg: Vec<u32> },
}

impl TryFrom<RawClass> for WeylClass {
    type Error = Error;

    fn try_from(raw: RawClass) -> Result<Self> {
        let check = |v: &[u32]| {
            if v.contains(&0) {
                Err(Error::Parse("partition parts must be positive".into()))
            } else {
                Ok(())
            }
        };
        match raw {
            RawClass::A { parts } => {
                check(&parts)?;
                Ok(WeylClass::type_a(parts))
            }
            RawClass::C { pos, neg } => {
                check(&pos)?;
                check(&neg)?;
                Ok(WeylClass::type_c(pos, neg))
            }
        }
    }
}

impl From<WeylClass> for RawClass {
    fn from(c: WeylClass) -> Self {
        match c {
            WeylClass::A { parts } => RawClass::A { parts },
            WeylClass::C { pos, neg } => RawClass::C { pos, neg },
        }
    }
}

fn canonical(mut parts: Vec<u32>) -> Vec<u32> {
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

impl WeylClass {
    /// Type-A class; parts are sorted into canonical order.
    pub fn type_a(parts: Vec<u32>) -> Self {
        WeylClass::A { parts: canonical(parts) }
    }

    pub fn type_c(pos: Vec<u32>, neg: Vec<u32>) -> Self {
        WeylClass::C { pos: canonical(pos), neg: canonical(neg) }
    }

    /// Number of letters permuted (`m` or `g`).
    pub fn size(&self) -> usize {
        match self {
            WeylClass::A { parts } => parts.iter().sum::<u32>() as usize,
            WeylClass::C { pos, neg } => (pos.iter().sum::<u32>() + neg.iter().sum::<u32>()) as usize,
        }
    }

    pub fn belongs_to(&self, group: GroupDescriptor) -> bool {
        match (self, group) {
            (WeylClass::A { .. }, GroupDescriptor::A(m)) => self.size() == m,
            (WeylClass::C { .. }, GroupDescriptor::C(g)) => self.size() == g,
            _ => false,
        }
    }

    /// `|C| / |W|`, i.e. the inverse of the centralizer order.
    pub fn fraction(&self) -> BigRational {
        let centralizer = match self {
            WeylClass::A { parts } => multiplicity_product(parts, |j| BigInt::from(j)),
            WeylClass::C { pos, neg } => {
                multiplicity_product(pos, |j| BigInt::from(2 * j))
                    * multiplicity_product(neg, |j| BigInt::from(2 * j))
            }
        };
        BigRational::new(BigInt::one(), centralizer)
    }
}

/// `prod_j weight(j)^{a_j} a_j!` where `a_j` counts parts equal to `j`.
fn multiplicity_product(parts: &[u32], weight: impl Fn(u32) -> BigInt) -> BigInt {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &j in parts {
        *counts.entry(j).or_default() += 1;
    }
    counts
        .into_iter()
        .fold(BigInt::one(), |acc, (j, a)| acc * num_traits::pow(weight(j), a) * factorial(a))
}

fn fmt_parts(parts: &[u32]) -> String {
    if parts.is_empty() {
        return "-".into();
    }
    parts.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for WeylClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeylClass::A { parts } => write!(f, "({})", fmt_parts(parts)),
            WeylClass::C { pos, neg } => write!(f, "({}|{})", fmt_parts(pos), fmt_parts(neg)),
        }
    }
}

/// All partitions of `n`, each weakly decreasing, in reverse lexicographic
/// order starting from `[n]`.
pub fn partitions(n: usize) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n as u32, n as u32, &mut Vec::new(), &mut out);
    out
}

/// Partition numbers `p(0..=n)` by the standard "largest part" recurrence.
pub fn partition_counts(n: usize) -> Vec<u64> {
    let mut ways = vec![0u64; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways
}

/// Every class of a Weyl group together with its exact fraction.
#[derive(Clone, Debug)]
pub struct ClassTable {
    group: GroupDescriptor,
    classes: Vec<WeylClass>,
    fractions: Vec<BigRational>,
    index: HashMap<WeylClass, usize>,
}

impl ClassTable {
    pub fn group(&self) -> GroupDescriptor {
        self.group
    }

    pub fn classes(&self) -> &[WeylClass] {
        &self.classes
    }

    pub fn fractions(&self) -> &[BigRational] {
        &self.fractions
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn index_of(&self, class: &WeylClass) -> Option<usize> {
        self.index.get(class).copied()
    }

    pub fn contains(&self, class: &WeylClass) -> bool {
        self.index.contains_key(class)
    }

    pub fn fraction(&self, class: &WeylClass) -> Option<&BigRational> {
        self.index_of(class).map(|i| &self.fractions[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WeylClass, &BigRational)> {
        self.classes.iter().zip(&self.fractions)
    }
}

pub fn enumerate_classes(group: GroupDescriptor) -> Result<ClassTable> {
    let group = group.validate()?;
    let classes: Vec<WeylClass> = match group {
        GroupDescriptor::A(m) => partitions(m).into_iter().map(WeylClass::type_a).collect(),
        GroupDescriptor::C(g) => {
            let all: Vec<Vec<Vec<u32>>> = (0..=g).map(partitions).collect();
            let mut v = Vec::new();
            for k in (0..=g).rev() {
                for pos in &all[k] {
                    for neg in &all[g - k] {
                        v.push(WeylClass::type_c(pos.clone(), neg.clone()));
                    }
                }
            }
            v
        }
    };
    let fractions = classes.iter().map(WeylClass::fraction).collect();
    let index = classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    Ok(ClassTable { group, classes, fractions, index })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every conjugacy class was observed, so the Galois group is all of W.
    ProvenFullWeyl,
    /// Some classes are still missing; no claim either way.
    Inconclusive,
    /// The characteristic polynomial has repeated roots.
    Degenerate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ProvenFullWeyl => "proven_full_weyl",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Degenerate => "degenerate",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub observed: BTreeSet<WeylClass>,
    pub missing: Vec<WeylClass>,
}

impl Certificate {
    pub fn degenerate() -> Self {
        Certificate { verdict: Verdict::Degenerate, observed: BTreeSet::new(), missing: Vec::new() }
    }
}

/// A subgroup of a finite group meeting every conjugacy class is the whole
/// group. Given the a priori inclusion of the Galois group in W, observing
/// all classes of W as Frobenius classes proves equality.
pub fn jordan_certificate(table: &ClassTable, observed: &BTreeSet<WeylClass>) -> Result<Certificate> {
    if let Some(bad) = observed.iter().find(|c| !table.contains(c)) {
        return Err(Error::input(format!("class {bad} does not belong to {}", table.group())));
    }
    let missing: Vec<WeylClass> = table.classes().iter().filter(|c| !observed.contains(c)).cloned().collect();
    let verdict = if missing.is_empty() { Verdict::ProvenFullWeyl } else { Verdict::Inconclusive };
    Ok(Certificate { verdict, observed: observed.clone(), missing })
}

/// Explicit element of a Weyl group. For signed permutations, letter `i`
/// maps to `±(image[i])` with the minus sign when `negate[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Perm(Vec<usize>),
    Signed { image: Vec<usize>, negate: Vec<bool> },
}

impl GroupElement {
    pub fn class(&self) -> WeylClass {
        match self {
            GroupElement::Perm(image) => {
                WeylClass::type_a(cycles(image).into_iter().map(|c| c.len() as u32).collect())
            }
            GroupElement::Signed { image, negate } => {
                let (mut pos, mut neg) = (Vec::new(), Vec::new());
                for cyc in cycles(image) {
                    let flips = cyc.iter().filter(|&&i| negate[i]).count();
                    if flips % 2 == 0 {
                        pos.push(cyc.len() as u32);
                    } else {
                        neg.push(cyc.len() as u32);
                    }
                }
                WeylClass::type_c(pos, neg)
            }
        }
    }
}

fn cycles(image: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; image.len()];
    let mut out = Vec::new();
    for start in 0..image.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cyc.push(i);
            i = image[i];
        }
        out.push(cyc);
    }
    out
}

/// Explicit enumeration of a small Weyl group.
#[derive(Clone, Debug)]
pub struct BruteForce {
    pub elements: Vec<(GroupElement, WeylClass)>,
    pub counts: BTreeMap<WeylClass, u64>,
}

impl BruteForce {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// `count / |W|` for a class (zero if the class never occurs).
    pub fn empirical_fraction(&self, class: &WeylClass) -> BigRational {
        let count = self.counts.get(class).copied().unwrap_or(0);
        if count == 0 {
            return BigRational::zero();
        }
        BigRational::new(BigInt::from(count), BigInt::from(self.order()))
    }
}

/// Enumerates every element for `m <= 8` or `g <= 5`.
pub fn brute_force_group(group: GroupDescriptor) -> Result<BruteForce> {
    let n = match group {
        GroupDescriptor::A(m) if (1..=8).contains(&m) => m,
        GroupDescriptor::C(g) if (1..=5).contains(&g) => g,
        _ => return Err(Error::input(format!("{group} too large for brute-force enumeration"))),
    };
    let mut elements = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        match group {
            GroupDescriptor::A(_) => {
                let e = GroupElement::Perm(perm.clone());
                let c = e.class();
                elements.push((e, c));
            }
            GroupDescriptor::C(_) => {
                for mask in 0u32..(1 << n) {
                    let negate = (0..n).map(|i| mask >> i & 1 == 1).collect();
                    let e = GroupElement::Signed { image: perm.clone(), negate };
                    let c = e.class();
                    elements.push((e, c));
                }
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let mut counts = BTreeMap::new();
    for (_, c) in &elements {
        *counts.entry(c.clone()).or_insert(0) += 1;
    }
    Ok(BruteForce { elements, counts })
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
