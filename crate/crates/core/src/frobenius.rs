//! Frobenius classes at good primes, read off factorization patterns.
//!
//! For a monic integer polynomial `P` and a prime `p` with `P mod p`
//! squarefree, the Frobenius at `p` acts on the roots of `P` with cycle
//! type given by the degrees of the irreducible factors of `P mod p`. For
//! palindromic `P` (symplectic characteristic polynomials) the roots come in
//! pairs `{a, 1/a}` and the action is a signed permutation of the pairs:
//! a self-reciprocal irreducible factor of degree `2d` is a negative
//! `d`-cycle, and a pair `{f, f*}` of reciprocal factors of degree `d` is a
//! positive `d`-cycle.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::factor::{degree_pattern_squarefree, factor_mod};
use crate::algebra::{IntMatrix, ModMatrix, ModPoly};
use crate::error::{Error, Result};
use crate::weyl::{GroupDescriptor, WeylClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "good")]
    Good,
    /// Ramified prime or non-regular reduction; the prime is skipped.
    #[serde(rename = "not_squarefree")]
    NotSquarefree,
    /// Characteristic 2 for a symplectic group.
    #[serde(rename = "wrong_char")]
    WrongCharacteristic,
}

/// Result of the θ map on one reduced characteristic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theta {
    Good(WeylClass),
    NotSquarefree,
    WrongCharacteristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusObservation {
    #[serde(rename = "p")]
    pub prime: u64,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<WeylClass>,
}

impl FrobeniusObservation {
    pub fn new(prime: u64, theta: Theta) -> Self {
        let (status, class) = match theta {
            Theta::Good(c) => (Status::Good, Some(c)),
            Theta::NotSquarefree => (Status::NotSquarefree, None),
            Theta::WrongCharacteristic => (Status::WrongCharacteristic, None),
        };
        FrobeniusObservation { prime, status, class }
    }

    pub fn is_good(&self) -> bool {
        self.status == Status::Good
    }
}

/// Type A: the partition of `m` formed by the degrees of the irreducible
/// factors. Only distinct-degree factorization is needed.
pub fn theta_type_a(poly: &ModPoly) -> Theta {
    if !poly.is_squarefree() {
        return Theta::NotSquarefree;
    }
    let parts = degree_pattern_squarefree(poly).into_iter().map(|d| d as u32).collect();
    Theta::Good(WeylClass::type_a(parts))
}

/// Type C: signed cycle type from the full factorization of a monic
/// palindromic polynomial of degree `2g` over an odd prime field.
pub fn theta_type_c<R: Rng + ?Sized>(poly: &ModPoly, rng: &mut R) -> Result<Theta> {
    let p = poly.modulus();
    if p == 2 {
        return Ok(Theta::WrongCharacteristic);
    }
    let deg = poly.degree();
    if !poly.is_monic() || deg % 2 != 0 || deg == 0 {
        return Err(Error::input(format!("type C needs a monic polynomial of even degree, got {poly}")));
    }
    if (0..=deg).any(|i| poly.coeff(i) != poly.coeff(deg - i)) {
        return Err(Error::input(format!("polynomial {poly} is not palindromic")));
    }
    if !poly.is_squarefree() {
        return Ok(Theta::NotSquarefree);
    }
    // P(1) = 0 or P(-1) = 0 would force P'(±1) = 0 for palindromic P of even degree
    if poly.eval(1) == 0 || poly.eval(p - 1) == 0 {
        return Err(Error::invariant(format!("squarefree palindromic {poly} has a root at ±1 mod {p}")));
    }
    let fact = factor_mod(poly, rng)?;
    let mut unpaired: Vec<ModPoly> = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for (f, _) in fact.factors() {
        let recip = f.reciprocal();
        if recip == *f {
            if f.degree() % 2 != 0 {
                return Err(Error::invariant(format!("self-reciprocal factor {f} of odd degree")));
            }
            neg.push((f.degree() / 2) as u32);
        } else if let Some(idx) = unpaired.iter().position(|g| *g == recip) {
            unpaired.swap_remove(idx);
            pos.push(f.degree() as u32);
        } else {
            unpaired.push(f.clone());
        }
    }
    if !unpaired.is_empty() {
        return Err(Error::invariant(format!("factors of {poly} mod {p} do not pair up under reciprocation")));
    }
    let class = WeylClass::type_c(pos, neg);
    debug_assert_eq!(class.size() * 2, deg);
    Ok(Theta::Good(class))
}

/// θ applied to a reduced characteristic polynomial.
pub fn classify_poly<R: Rng + ?Sized>(poly: &ModPoly, group: GroupDescriptor, rng: &mut R) -> Result<Theta> {
    match group {
        GroupDescriptor::A(m) => {
            if poly.degree() != m {
                return Err(Error::input(format!("expected degree {m}, got {}", poly.degree())));
            }
            Ok(theta_type_a(poly))
        }
        GroupDescriptor::C(g) => {
            if poly.modulus() != 2 && poly.degree() != 2 * g {
                return Err(Error::input(format!("expected degree {}, got {}", 2 * g, poly.degree())));
            }
            theta_type_c(poly, rng)
        }
    }
}

/// Matrix dimension of the natural representation.
pub fn natural_dim(group: GroupDescriptor) -> usize {
    match group {
        GroupDescriptor::A(m) => m,
        GroupDescriptor::C(g) => 2 * g,
    }
}

/// Frobenius observation for an element carried natively mod p.
pub fn classify_modular<R: Rng + ?Sized>(
    state: &ModMatrix,
    group: GroupDescriptor,
    rng: &mut R,
) -> Result<FrobeniusObservation> {
    if state.dim() != natural_dim(group) {
        return Err(Error::input(format!("{}x{} matrix does not belong to {group}", state.dim(), state.dim())));
    }
    let p = state.modulus();
    if let GroupDescriptor::C(_) = group {
        if p == 2 {
            return Ok(FrobeniusObservation::new(p, Theta::WrongCharacteristic));
        }
    }
    let theta = classify_poly(&state.charpoly(), group, rng)?;
    Ok(FrobeniusObservation::new(p, theta))
}

/// Frobenius observation for an integer matrix at the prime `p`.
pub fn classify<R: Rng + ?Sized>(
    m: &IntMatrix,
    group: GroupDescriptor,
    p: u64,
    rng: &mut R,
) -> Result<FrobeniusObservation> {
    crate::algebra::prime::check_modulus(p)?;
    classify_modular(&m.reduce(p), group, rng)
}
