//! Factorization over F_p: squarefree decomposition, distinct-degree
//! factorization and Cantor-Zassenhaus equal-degree splitting.

use rand::Rng;

use super::modp::ModPoly;
use crate::error::{Error, Result};

/// Complete factorization `unit * prod f_i^{e_i}` with monic, pairwise
/// distinct irreducible `f_i`, sorted by (degree, coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    p: u64,
    unit: u64,
    factors: Vec<(ModPoly, u32)>,
}

impl Factorization {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    pub fn factors(&self) -> &[(ModPoly, u32)] {
        &self.factors
    }

    /// Sorted irreducible-factor degrees, repeated by multiplicity.
    pub fn degree_pattern(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, e)| std::iter::repeat_n(f.degree(), *e as usize))
            .collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Product of the factors with multiplicity, times the unit.
    pub fn expand(&self) -> ModPoly {
        let mut acc = ModPoly::new(self.p, vec![self.unit]);
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul(f);
            }
        }
        acc
    }

    /// Re-multiplies to `input` and re-certifies every factor as
    /// irreducible through a distinct-degree pass.
    pub fn verify(&self, input: &ModPoly) -> Result<()> {
        if self.expand() != *input {
            return Err(Error::invariant("factorization does not multiply back to its input"));
        }
        for (i, (f, _)) in self.factors.iter().enumerate() {
            if !f.is_monic() || !is_irreducible(f) {
                return Err(Error::invariant(format!("factor {f} is not a monic irreducible")));
            }
            if self.factors[..i].iter().any(|(g, _)| g == f) {
                return Err(Error::invariant("repeated factor in factorization"));
            }
        }
        Ok(())
    }
}

/// Squarefree decomposition of a monic polynomial: pairs `(g_i, i)` with
/// `f = prod g_i^i`, each `g_i` squarefree and pairwise coprime.
pub fn squarefree_decomposition(f: &ModPoly) -> Vec<(ModPoly, u32)> {
    let p = f.modulus();
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        // c is a p-th power: c(T) = r(T^p) with r = c^{1/p} (Frobenius is the identity on F_p)
        let root = ModPoly::new(p, c.coeffs().iter().step_by(p as usize).copied().collect());
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs
/// `(g_d, d)` where `g_d` is the product of all irreducible factors of
/// degree `d`.
pub fn distinct_degree(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.modulus();
    let x = ModPoly::x(p);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut d = 0;
    while 2 * (d + 1) <= rest.degree() {
        d += 1;
        h = h.pow_mod(p, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.degree() > 0 {
        let deg = rest.degree();
        out.push((rest, deg));
    }
    out
}

/// Irreducibility by the distinct-degree criterion: no factor of degree
/// `<= deg/2`.
pub fn is_irreducible(f: &ModPoly) -> bool {
    let n = f.degree();
    if n == 0 {
        return false;
    }
    let p = f.modulus();
    let x = ModPoly::x(p);
    let mut h = x.rem(f);
    for _ in 0..n / 2 {
        h = h.pow_mod(p, f);
        if !h.sub(&x).gcd(f).is_one() {
            return false;
        }
    }
    true
}

/// Splits a monic product of distinct irreducibles, all of degree `d`.
pub fn equal_degree<R: Rng + ?Sized>(f: &ModPoly, d: usize, rng: &mut R) -> Vec<ModPoly> {
    let n = f.degree();
    if n == d {
        return vec![f.clone()];
    }
    debug_assert!(n % d == 0);
    let p = f.modulus();
    loop {
        let a = random_poly(p, n, rng);
        if a.degree() == 0 {
            continue;
        }
        let g = a.gcd(f);
        let candidate = if !g.is_one() {
            g
        } else if p == 2 {
            // absolute trace a + a^2 + ... + a^(2^(d-1))
            let mut term = a.clone();
            let mut trace = a.clone();
            for _ in 1..d {
                term = term.mul_mod(&term, f);
                trace = trace.add(&term);
            }
            trace.gcd(f)
        } else {
            // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
            let mut conj = a.clone();
            let mut norm = a.clone();
            for _ in 1..d {
                conj = conj.pow_mod(p, f);
                norm = norm.mul_mod(&conj, f);
            }
            let b = norm.pow_mod((p - 1) / 2, f);
            b.sub(&ModPoly::one(p)).gcd(f)
        };
        let k = candidate.degree();
        if k > 0 && k < n {
            let other = f.div_exact(&candidate);
            let mut out = equal_degree(&candidate, d, rng);
            out.extend(equal_degree(&other, d, rng));
            return out;
        }
    }
}

fn random_poly<R: Rng + ?Sized>(p: u64, len: usize, rng: &mut R) -> ModPoly {
    ModPoly::new(p, (0..len).map(|_| rng.gen_range(0..p)).collect())
}

/// Complete factorization into monic irreducibles. Las Vegas: the random
/// stream only affects running time; the output is always correct and
/// deterministic given the seed.
pub fn factor_mod<R: Rng + ?Sized>(f: &ModPoly, rng: &mut R) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::input("cannot factor the zero polynomial"));
    }
    let p = f.modulus();
    let unit = f.leading();
    let monic = f.monic();
    let mut factors = Vec::new();
    for (g, mult) in squarefree_decomposition(&monic) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d, rng) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    let fact = Factorization { p, unit, factors };
    fact.verify(f)?;
    Ok(fact)
}

/// Degrees of the irreducible factors of a squarefree polynomial, read off
/// the distinct-degree stages without splitting them (descending order).
pub fn degree_pattern_squarefree(f: &ModPoly) -> Vec<usize> {
    let mut parts: Vec<usize> = distinct_degree(&f.monic())
        .into_iter()
        .flat_map(|(g, d)| std::iter::repeat_n(d, g.degree() / d))
        .collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    /// Brute-force factorization oracle: trial division by every monic
    /// polynomial of increasing degree.
    fn brute_factor(f: &ModPoly) -> Vec<ModPoly> {
        let p = f.modulus();
        let mut rest = f.monic();
        let mut out = Vec::new();
        let mut d = 1;
        while rest.degree() > 0 {
            if 2 * d > rest.degree() {
                out.push(rest.clone());
                break;
            }
            let count = p.pow(d as u32);
            let mut found = false;
            for idx in 0..count {
                let mut c = Vec::with_capacity(d + 1);
                let mut v = idx;
                for _ in 0..d {
                    c.push(v % p);
                    v /= p;
                }
                c.push(1);
                let g = ModPoly::new(p, c);
                let (q, r) = rest.div_rem(&g);
                if r.is_zero() {
                    out.push(g);
                    rest = q;
                    found = true;
                    break;
                }
            }
            if !found {
                d += 1;
            }
        }
        out.sort();
        out
    }

    fn flat(f: &Factorization) -> Vec<ModPoly> {
        let mut v: Vec<ModPoly> = f
            .factors()
            .iter()
            .flat_map(|(g, e)| std::iter::repeat_n(g.clone(), *e as usize))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn spec_examples() {
        let f = factor_mod(&ModPoly::from_i64(5, &[1, 0, 1]), &mut rng()).unwrap();
        assert_eq!(flat(&f), vec![ModPoly::from_i64(5, &[2, 1]), ModPoly::from_i64(5, &[3, 1])]);

        let f = factor_mod(&ModPoly::from_i64(3, &[1, 0, 1]), &mut rng()).unwrap();
        assert_eq!(f.factors().len(), 1);

        let target = ModPoly::from_i64(5, &[-1, -1, 0, 1]);
        let f = factor_mod(&target, &mut rng()).unwrap();
        assert_eq!(flat(&f), vec![ModPoly::from_i64(5, &[-2, 1]), ModPoly::from_i64(5, &[3, 2, 1])]);
        assert_eq!(flat(&f), brute_factor(&target));
    }

    #[test]
    fn repeated_and_pth_power_factors() {
        // (T+1)^3 (T^2+1)^2 over F_3: the cube is a p-th power
        let p = 3;
        let a = ModPoly::from_i64(p, &[1, 1]);
        let b = ModPoly::from_i64(p, &[1, 0, 1]);
        let f = a.mul(&a).mul(&a).mul(&b).mul(&b);
        let fact = factor_mod(&f, &mut rng()).unwrap();
        assert_eq!(fact.factors(), &[(a, 3), (b, 2)]);
        assert!(!fact.is_squarefree());
    }

    #[test]
    fn characteristic_two() {
        let p = 2;
        // T^6 + T + 1 ... compare against brute force for every degree-6 poly with T | f excluded
        for idx in 0..64u64 {
            let mut c: Vec<u64> = (0..6).map(|i| (idx >> i) & 1).collect();
            c.push(1);
            let f = ModPoly::new(p, c);
            let fact = factor_mod(&f, &mut rng()).unwrap();
            assert_eq!(flat(&fact), brute_factor(&f), "{f}");
        }
    }

    #[test]
    fn against_brute_force_small_fields() {
        let mut r = rng();
        for &p in &[3u64, 5, 7] {
            for _ in 0..60 {
                let mut c: Vec<u64> = (0..5).map(|_| r.gen_range(0..p)).collect();
                c.push(1);
                let f = ModPoly::new(p, c);
                let fact = factor_mod(&f, &mut r).unwrap();
                assert_eq!(flat(&fact), brute_factor(&f), "p={p} f={f}");
            }
        }
    }

    #[test]
    fn degree_patterns() {
        assert_eq!(degree_pattern_squarefree(&ModPoly::from_i64(2, &[-1, -1, 0, 1])), vec![3]);
        assert_eq!(degree_pattern_squarefree(&ModPoly::from_i64(5, &[-1, -1, 0, 1])), vec![2, 1]);
        let split = ModPoly::from_i64(7, &[-1, 1])
            .mul(&ModPoly::from_i64(7, &[-2, 1]))
            .mul(&ModPoly::from_i64(7, &[-3, 1]));
        assert_eq!(degree_pattern_squarefree(&split), vec![1, 1, 1]);
    }

    #[test]
    fn seeded_output_is_deterministic() {
        let f = ModPoly::from_i64(101, &[5, 0, 3, 0, 0, 7, 1, 1]);
        let a = factor_mod(&f, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let b = factor_mod(&f, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let c = factor_mod(&f, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn verify_rejects_bad_factorizations() {
        let f = ModPoly::from_i64(5, &[1, 0, 1]);
        let bogus = Factorization { p: 5, unit: 1, factors: vec![(f.clone(), 1)] };
        assert!(bogus.verify(&f).is_err());
        assert!(factor_mod(&ModPoly::zero(5), &mut rng()).is_err());
    }
}
