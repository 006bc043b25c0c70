//! One-sided certification that a Galois group is the full Weyl group.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::prime::{check_modulus, primes_from};
use crate::algebra::{IntMatrix, IntPoly, ModMatrix, ModPoly};
use crate::error::{Error, Result};
use crate::frobenius::{classify_poly, FrobeniusObservation};
use crate::walker::WalkState;
use crate::weyl::{enumerate_classes, Certificate, ClassTable, GroupDescriptor, Verdict, WeylClass};

/// First prime considered by default: 2 for type A, 5 for type C (skips the
/// characteristic-2 and -3 edge cases).
pub fn default_prime_floor(group: GroupDescriptor) -> u64 {
    match group {
        GroupDescriptor::A(_) => 2,
        GroupDescriptor::C(_) => 5,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeBudget {
    /// Maximum number of primes consumed.
    pub count: usize,
    /// Primes are taken ascending from the first prime `>= floor`.
    pub floor: u64,
}

impl PrimeBudget {
    pub fn new(count: usize, floor: u64) -> Self {
        PrimeBudget { count, floor }
    }

    pub fn default_for(group: GroupDescriptor, count: usize) -> Self {
        PrimeBudget { count, floor: default_prime_floor(group) }
    }

    fn validate(self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::config("prime budget must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisOutcome {
    pub certificate: Certificate,
    /// Observations in the order the primes were tried.
    pub observations: Vec<FrobeniusObservation>,
}

impl GaloisOutcome {
    pub fn verdict(&self) -> Verdict {
        self.certificate.verdict
    }

    pub fn primes_used(&self) -> usize {
        self.observations.len()
    }
}

/// Classifies the reductions in turn, stopping as soon as every class of
/// the table has been seen.
fn certify_reductions<R, I>(table: &ClassTable, reductions: I, rng: &mut R) -> Result<(BTreeSet<WeylClass>, Vec<FrobeniusObservation>)>
where
    R: Rng + ?Sized,
    I: IntoIterator<Item = ModPoly>,
{
    let mut observed = BTreeSet::new();
    let mut observations = Vec::new();
    for poly in reductions {
        let obs = FrobeniusObservation::new(poly.modulus(), classify_poly(&poly, table.group(), rng)?);
        if let Some(c) = &obs.class {
            observed.insert(c.clone());
        }
        observations.push(obs);
        if observed.len() == table.len() {
            break;
        }
    }
    Ok((observed, observations))
}

/// Certification of an integer matrix at the first `budget.count` primes
/// `>= budget.floor`. A vanishing discriminant gives `Degenerate`.
pub fn galois_certify<R: Rng + ?Sized>(
    m: &IntMatrix,
    group: GroupDescriptor,
    budget: PrimeBudget,
    rng: &mut R,
) -> Result<GaloisOutcome> {
    budget.validate()?;
    let table = enumerate_classes(group)?;
    galois_certify_poly(&m.charpoly(), &table, budget, rng)
}

/// As [`galois_certify`], from the exact characteristic polynomial.
pub fn galois_certify_poly<R: Rng + ?Sized>(
    charpoly: &IntPoly,
    table: &ClassTable,
    budget: PrimeBudget,
    rng: &mut R,
) -> Result<GaloisOutcome> {
    budget.validate()?;
    if charpoly.discriminant()?.is_zero() {
        return Ok(GaloisOutcome { certificate: Certificate::degenerate(), observations: Vec::new() });
    }
    let primes = primes_from(budget.floor, budget.count);
    let (observed, observations) = certify_reductions(table, primes.iter().map(|&p| charpoly.reduce(p)), rng)?;
    Ok(GaloisOutcome { certificate: crate::weyl::jordan_certificate(table, &observed)?, observations })
}

/// Certification from reductions carried by a modular walk. Only the
/// carried primes are available: asking for more than are carried above
/// the floor is a configuration error. If none of the `budget.count` primes
/// is good the element is reported `Degenerate`.
pub fn galois_certify_modular<R: Rng + ?Sized>(
    reductions: &[ModMatrix],
    table: &ClassTable,
    budget: PrimeBudget,
    rng: &mut R,
) -> Result<GaloisOutcome> {
    budget.validate()?;
    let mut usable: Vec<&ModMatrix> = reductions.iter().filter(|m| m.modulus() >= budget.floor).collect();
    for m in &usable {
        check_modulus(m.modulus())?;
    }
    usable.sort_by_key(|m| m.modulus());
    if usable.len() < budget.count {
        return Err(Error::config(format!(
            "prime budget {} exceeds the {} carried primes >= {}",
            budget.count,
            usable.len(),
            budget.floor
        )));
    }
    let chosen = &usable[..budget.count];
    let (observed, observations) = certify_reductions(table, chosen.iter().map(|m| m.charpoly()), rng)?;
    if observations.len() == budget.count && observations.iter().all(|o| !o.is_good()) {
        return Ok(GaloisOutcome { certificate: Certificate::degenerate(), observations });
    }
    Ok(GaloisOutcome { certificate: crate::weyl::jordan_certificate(table, &observed)?, observations })
}

/// Certifies a walk state, from its reductions when it carries any and from
/// the exact matrix otherwise.
pub fn certify_state<R: Rng + ?Sized>(
    state: &WalkState,
    table: &ClassTable,
    budget: PrimeBudget,
    rng: &mut R,
) -> Result<GaloisOutcome> {
    if !state.modular.is_empty() {
        galois_certify_modular(&state.modular, table, budget, rng)
    } else if let Some(x) = &state.exact {
        galois_certify_poly(&x.charpoly(), table, budget, rng)
    } else {
        Err(Error::invariant("walk state carries no matrix"))
    }
}
