//! Census of `G(F_q)`: tallies of Frobenius classes over the whole finite
//! group (or a uniform sample of it), compared with the exact Weyl class
//! fractions.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::prime::{check_modulus, inv_mod, mul_mod};
use crate::algebra::ModMatrix;
use crate::error::{Error, Result};
use crate::frobenius::{classify_poly, Theta};
use crate::rng::{substream, StreamRng};
use crate::walker::{bfs_closure, default_generators, format_rational, GroupSpec, GENERATION_CAP};
use crate::weyl::{enumerate_classes, WeylClass};

/// Largest q accepted by the SL(2) enumerator.
pub const MAX_SL2_Q: u64 = 512;

/// Elements drawn per substream when sampling.
const SAMPLE_CHUNK: u64 = 1 << 14;

/// Every element of `SL(2, F_q)` exactly once. Rows `(a, b; c, d)`: for
/// `a != 0`, `b` and `c` are free and `d = (1 + bc)/a`; for `a = 0`,
/// `c = -1/b` with `b != 0` and `d` free.
pub fn enumerate_sl2(q: u64) -> Result<impl Iterator<Item = ModMatrix>> {
    check_sl2_q(q)?;
    Ok((0..q).flat_map(move |a| sl2_with_top_left(q, a)))
}

fn check_sl2_q(q: u64) -> Result<()> {
    check_modulus(q)?;
    if q > MAX_SL2_Q {
        return Err(Error::input(format!("q = {q} exceeds the SL(2) enumeration cap {MAX_SL2_Q}")));
    }
    Ok(())
}

fn sl2_with_top_left(q: u64, a: u64) -> Box<dyn Iterator<Item = ModMatrix>> {
    let mk = move |a, b, c, d| ModMatrix::from_reduced(2, q, vec![a, b, c, d]);
    if a != 0 {
        let a_inv = inv_mod(a, q);
        Box::new((0..q).flat_map(move |b| {
            (0..q).map(move |c| {
                let d = mul_mod((1 + mul_mod(b, c, q)) % q, a_inv, q);
                mk(a, b, c, d)
            })
        }))
    } else {
        Box::new((1..q).flat_map(move |b| {
            let c = (q - inv_mod(b, q)) % q;
            (0..q).map(move |d| mk(0, b, c, d))
        }))
    }
}

/// One uniform sample of `SL(m, F_q)`: a uniformly random invertible matrix
/// with its first row scaled by `det^{-1}`. The map `GL -> SL` is exactly
/// `(q-1)`-to-one, so the result is uniform.
pub fn sample_sl_one<R: Rng + ?Sized>(m: usize, q: u64, rng: &mut R) -> ModMatrix {
    loop {
        let entries: Vec<u64> = (0..m * m).map(|_| rng.gen_range(0..q)).collect();
        let mut x = ModMatrix::from_reduced(m, q, entries);
        let det = x.det();
        if det != 0 {
            x.scale_row(0, inv_mod(det, q));
            return x;
        }
    }
}

/// `count` i.i.d. uniform samples of `SL(m, F_q)`.
pub fn sample_sl_uniform<'r, R: Rng + ?Sized>(
    m: usize,
    q: u64,
    count: u64,
    rng: &'r mut R,
) -> Result<impl Iterator<Item = ModMatrix> + 'r> {
    check_modulus(q)?;
    if m < 2 {
        return Err(Error::input("SL(m) needs m >= 2"));
    }
    Ok((0..count).map(move |_| sample_sl_one(m, q, rng)))
}

/// Closure of the default generators mod q, checked against `|G(F_q)|`.
pub fn enumerate_by_bfs(group: GroupSpec, q: u64) -> Result<Vec<ModMatrix>> {
    check_modulus(q)?;
    let order = group.order_mod(q);
    if order > BigUint::from(GENERATION_CAP) {
        return Err(Error::input(format!("|{group}(F_{q})| = {order} exceeds the enumeration cap")));
    }
    let gens: Vec<ModMatrix> = default_generators(group).iter().map(|g| g.matrix.reduce(q)).collect();
    let elements = bfs_closure(&gens, GENERATION_CAP)?;
    if BigUint::from(elements.len()) != order {
        return Err(Error::invariant(format!(
            "closure of {group} generators mod {q} has {} elements, expected {order}",
            elements.len()
        )));
    }
    Ok(elements)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Population {
    Enumerate,
    Sample(u64),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassCount {
    pub class: WeylClass,
    pub count: u64,
    /// Exact `|C|/|W|` as `"num/den"`.
    pub target: String,
    pub target_f64: f64,
    /// `count / total`.
    pub freq: f64,
    /// `count / rs_count`.
    pub freq_rs: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusReport {
    pub group: GroupSpec,
    pub q: u64,
    pub population: Population,
    pub total: u64,
    pub rs_count: u64,
    pub classes: Vec<ClassCount>,
    pub max_deviation: f64,
    /// Both groups are simply connected, so the image of the simply
    /// connected cover is the whole group: a single coset.
    pub cosets: u32,
}

impl CensusReport {
    pub fn rs_fraction(&self) -> f64 {
        self.rs_count as f64 / self.total as f64
    }

    pub fn count(&self, class: &WeylClass) -> Option<u64> {
        self.classes.iter().find(|c| &c.class == class).map(|c| c.count)
    }

    pub fn get(&self, class: &WeylClass) -> Option<&ClassCount> {
        self.classes.iter().find(|c| &c.class == class)
    }
}

#[derive(Default)]
struct Tally {
    total: u64,
    rs: u64,
    classes: HashMap<WeylClass, u64>,
}

impl Tally {
    fn add(&mut self, x: &ModMatrix, group: GroupSpec, rng: &mut StreamRng) -> Result<()> {
        self.total += 1;
        match classify_poly(&x.charpoly(), group.weyl(), rng)? {
            Theta::Good(c) => {
                self.rs += 1;
                *self.classes.entry(c).or_default() += 1;
            }
            Theta::NotSquarefree => {}
            Theta::WrongCharacteristic => {
                return Err(Error::input("census of a symplectic group needs odd q"));
            }
        }
        Ok(())
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        self.rs += other.rs;
        for (c, n) in other.classes {
            *self.classes.entry(c).or_default() += n;
        }
        self
    }
}

/// Tallies θ over the population. Work is split into index ranges with
/// their own substreams, so the report depends only on the arguments.
pub fn run_census(group: GroupSpec, q: u64, population: Population, seed: u64) -> Result<CensusReport> {
    let group = group.validate()?;
    check_modulus(q)?;
    if group.is_symplectic() && q == 2 {
        return Err(Error::input("census of a symplectic group needs odd q"));
    }
    let reduce = |a: Result<Tally>, b: Result<Tally>| -> Result<Tally> { Ok(a?.merge(b?)) };
    let tally = match (population, group) {
        (Population::Enumerate, GroupSpec::SL { m: 2 }) => {
            check_sl2_q(q)?;
            (0..q)
                .into_par_iter()
                .map(|a| {
                    let mut rng = substream(seed, a);
                    let mut t = Tally::default();
                    for x in sl2_with_top_left(q, a) {
                        t.add(&x, group, &mut rng)?;
                    }
                    Ok(t)
                })
                .reduce(|| Ok(Tally::default()), reduce)?
        }
        (Population::Enumerate, _) => {
            let elements = enumerate_by_bfs(group, q)?;
            elements
                .par_chunks(4096)
                .enumerate()
                .map(|(i, chunk)| {
                    let mut rng = substream(seed, i as u64);
                    let mut t = Tally::default();
                    for x in chunk {
                        t.add(x, group, &mut rng)?;
                    }
                    Ok(t)
                })
                .reduce(|| Ok(Tally::default()), reduce)?
        }
        (Population::Sample(count), GroupSpec::SL { m }) => {
            let chunks = count.div_ceil(SAMPLE_CHUNK);
            (0..chunks)
                .into_par_iter()
                .map(|i| {
                    let mut rng = substream(seed, i);
                    let n = SAMPLE_CHUNK.min(count - i * SAMPLE_CHUNK);
                    let mut t = Tally::default();
                    for _ in 0..n {
                        let x = sample_sl_one(m, q, &mut rng);
                        t.add(&x, group, &mut rng)?;
                    }
                    Ok(t)
                })
                .reduce(|| Ok(Tally::default()), reduce)?
        }
        (Population::Sample(_), GroupSpec::Sp { .. }) => {
            return Err(Error::config("sampled censuses are only available for SL; use enumeration for Sp"));
        }
    };
    build_report(group, q, population, tally)
}

fn build_report(group: GroupSpec, q: u64, population: Population, tally: Tally) -> Result<CensusReport> {
    let table = enumerate_classes(group.weyl())?;
    let total = tally.total;
    let mut classes = Vec::with_capacity(table.len());
    for (class, target) in table.iter() {
        let count = tally.classes.get(class).copied().unwrap_or(0);
        let target_f64 = rational_to_f64(target);
        let freq = count as f64 / total as f64;
        classes.push(ClassCount {
            class: class.clone(),
            count,
            target: format_rational(target),
            target_f64,
            freq,
            freq_rs: if tally.rs == 0 { 0.0 } else { count as f64 / tally.rs as f64 },
            deviation: (freq - target_f64).abs(),
        });
    }
    let tallied: u64 = classes.iter().map(|c| c.count).sum();
    if tallied != tally.rs || tally.classes.keys().any(|c| !table.contains(c)) {
        return Err(Error::invariant("census produced a class outside the Weyl group"));
    }
    let max_deviation = classes.iter().map(|c| c.deviation).fold(0.0, f64::max);
    Ok(CensusReport { group, q, population, total, rs_count: tally.rs, classes, max_deviation, cosets: 1 })
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn sl2_enumeration_counts() {
        for (q, n) in [(3u64, 24usize), (5, 120), (7, 336)] {
            let all: Vec<ModMatrix> = enumerate_sl2(q).unwrap().collect();
            assert_eq!(all.len(), n);
            assert!(all.iter().all(|x| x.det() == 1));
            let distinct: HashSet<_> = all.iter().map(ModMatrix::packed_key).collect();
            assert_eq!(distinct.len(), n);
        }
        assert!(enumerate_sl2(521).is_err());
        assert!(enumerate_sl2(9).is_err());
    }

    #[test]
    fn bfs_matches_orders() {
        assert_eq!(enumerate_by_bfs(GroupSpec::Sp { g: 1 }, 5).unwrap().len(), 120);
        assert_eq!(enumerate_by_bfs(GroupSpec::SL { m: 2 }, 5).unwrap().len(), 120);
        assert_eq!(enumerate_by_bfs(GroupSpec::SL { m: 3 }, 3).unwrap().len(), 5616);
    }

    #[test]
    fn samples_have_unit_determinant() {
        let mut rng = substream(3, 0);
        for x in sample_sl_uniform(3, 7, 500, &mut rng).unwrap() {
            assert_eq!(x.det(), 1);
        }
    }

    #[test]
    fn sp2_and_sl2_censuses_agree() {
        // Sp(2) = SL(2), and the two Weyl groups S_2 and W(C_1) both have
        // two classes: split torus (1,1) <-> (1|-), non-split (2) <-> (-|1).
        let a = run_census(GroupSpec::SL { m: 2 }, 5, Population::Enumerate, 0).unwrap();
        let c = run_census(GroupSpec::Sp { g: 1 }, 5, Population::Enumerate, 0).unwrap();
        assert_eq!(a.total, c.total);
        assert_eq!(a.rs_count, c.rs_count);
        assert_eq!(
            a.count(&WeylClass::type_a(vec![1, 1])),
            c.count(&WeylClass::type_c(vec![1], vec![]))
        );
        assert_eq!(a.count(&WeylClass::type_a(vec![2])), c.count(&WeylClass::type_c(vec![], vec![1])));
    }

    #[test]
    fn sl2_census_closed_form() {
        // split regular: (q-3)/2 traces, q(q+1) elements each;
        // non-split: (q-1)/2 traces, q(q-1) elements each
        for q in [5u64, 7, 11, 13] {
            let r = run_census(GroupSpec::SL { m: 2 }, q, Population::Enumerate, 1).unwrap();
            assert_eq!(r.count(&WeylClass::type_a(vec![1, 1])), Some((q - 3) / 2 * q * (q + 1)));
            assert_eq!(r.count(&WeylClass::type_a(vec![2])), Some((q - 1) / 2 * q * (q - 1)));
            assert_eq!(r.total - r.rs_count, 2 * q * q);
        }
    }

    #[test]
    fn census_is_deterministic() {
        let a = run_census(GroupSpec::SL { m: 3 }, 5, Population::Sample(40_000), 17).unwrap();
        let b = run_census(GroupSpec::SL { m: 3 }, 5, Population::Sample(40_000), 17).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(run_census(GroupSpec::Sp { g: 2 }, 5, Population::Sample(10), 0).is_err());
        assert!(run_census(GroupSpec::Sp { g: 1 }, 2, Population::Enumerate, 0).is_err());
    }
}
