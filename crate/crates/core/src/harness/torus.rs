//! Lazy simple random walk on `Z` with steps uniform on `{-1, 0, +1}`, the
//! abelian case where a walk returns to a proper subvariety with only
//! polynomially small probability.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::substream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusMode {
    ExactDp,
    MonteCarlo { trials: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusRow {
    pub n: usize,
    /// `P(S_n = 0)`.
    pub probability: f64,
    /// `sqrt(n) * P(S_n = 0)`, which tends to `sqrt(3 / (4 pi))`.
    pub scaled: f64,
}

/// Limit of `sqrt(n) P(S_n = 0)`.
pub fn torus_limit() -> f64 {
    (3.0 / (4.0 * std::f64::consts::PI)).sqrt()
}

/// Number of step sequences of length `n` summing to zero, for every
/// `n <= n_max` (central trinomial coefficients), by the holonomic recurrence
/// `n T_n = (2n - 1) T_{n-1} + 3 (n - 1) T_{n-2}`.
pub fn central_trinomials(n_max: usize) -> Vec<BigUint> {
    let mut t: Vec<BigUint> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let next = if n < 2 {
            BigUint::from(1u32)
        } else {
            let num = &t[n - 1] * (2 * n as u64 - 1) + &t[n - 2] * (3 * (n as u64 - 1));
            let q = &num / n as u64;
            debug_assert!((num % n as u64).is_zero());
            q
        };
        t.push(next);
    }
    t
}

/// Full law of `S_n` by repeated convolution, as counts over `3^n`
/// sequences indexed by `S_n + n`.
pub fn sum_counts(n: usize) -> Vec<BigUint> {
    let mut dist = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); dist.len() + 2];
        for (i, c) in dist.iter().enumerate() {
            for slot in &mut next[i..i + 3] {
                *slot += c;
            }
        }
        dist = next;
    }
    dist
}

/// Exact `P(S_n = 0)`.
pub fn return_probability(n: usize) -> BigRational {
    let t = central_trinomials(n).pop().expect("nonempty");
    BigRational::new(BigInt::from(t), BigInt::from(BigUint::from(3u32).pow(n as u32)))
}

/// `a / b` in floating point without overflowing on huge operands.
fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let sa = a.bits().saturating_sub(64);
    let sb = b.bits().saturating_sub(64);
    let x = (a >> sa).to_f64().unwrap_or(f64::NAN) / (b >> sb).to_f64().unwrap_or(f64::NAN);
    x * 2f64.powi(sa as i32 - sb as i32)
}

fn row(n: usize, probability: f64) -> TorusRow {
    TorusRow { n, probability, scaled: (n as f64).sqrt() * probability }
}

/// `P(S_n = 0)` for `n = 1..=n_max`, exactly or by simulation (trial `t`
/// uses substream `(seed, t)`).
pub fn torus_demo(n_max: usize, mode: TorusMode, seed: u64) -> Result<Vec<TorusRow>> {
    match mode {
        TorusMode::ExactDp => {
            let t = central_trinomials(n_max);
            let mut pow3 = BigUint::from(1u32);
            let mut rows = Vec::with_capacity(n_max);
            for (n, tn) in t.iter().enumerate().skip(1) {
                pow3 *= 3u32;
                rows.push(row(n, ratio_f64(tn, &pow3)));
            }
            Ok(rows)
        }
        TorusMode::MonteCarlo { trials } => {
            if trials == 0 {
                return Err(Error::input("trials must be at least 1"));
            }
            let zeros = (0..trials)
                .into_par_iter()
                .fold(
                    || vec![0u64; n_max + 1],
                    |mut acc, t| {
                        let mut rng = substream(seed, t);
                        let mut s = 0i64;
                        for slot in acc.iter_mut().skip(1) {
                            s += rng.gen_range(-1i64..=1);
                            *slot += u64::from(s == 0);
                        }
                        acc
                    },
                )
                .reduce(
                    || vec![0u64; n_max + 1],
                    |mut a, b| {
                        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                        a
                    },
                );
            Ok((1..=n_max).map(|n| row(n, zeros[n] as f64 / trials as f64)).collect())
        }
    }
}

pub fn write_torus_csv<W: Write>(rows: &[TorusRow], mut out: W) -> Result<()> {
    writeln!(out, "n,probability,sqrt_n_probability")?;
    for r in rows {
        writeln!(out, "{},{},{}", r.n, r.probability, r.scaled)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn small_cases() {
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        assert_eq!(return_probability(1), third);
        assert_eq!(return_probability(2), third);
        assert_eq!(return_probability(0), BigRational::one());
    }

    #[test]
    fn recurrence_matches_convolution() {
        let t = central_trinomials(150);
        for n in [0, 1, 2, 3, 7, 40, 150] {
            assert_eq!(sum_counts(n)[n], t[n], "n = {n}");
        }
        let counts = sum_counts(9);
        let total: BigUint = counts.iter().sum();
        assert_eq!(total, BigUint::from(3u32).pow(9));
    }

    #[test]
    fn float_conversion_of_huge_ratio() {
        let rows = torus_demo(2000, TorusMode::ExactDp, 0).unwrap();
        assert_eq!(rows.len(), 2000);
        let exact = return_probability(2000);
        let direct = ratio_f64(&exact.numer().magnitude().clone(), &exact.denom().magnitude().clone());
        assert!((rows[1999].probability - direct).abs() < 1e-15);
        assert!((rows[0].probability - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn monte_carlo_close_to_exact() {
        let exact = torus_demo(50, TorusMode::ExactDp, 0).unwrap();
        let mc = torus_demo(50, TorusMode::MonteCarlo { trials: 40_000 }, 9).unwrap();
        for (e, m) in exact.iter().zip(&mc) {
            let sigma = (e.probability * (1.0 - e.probability) / 40_000.0).sqrt();
            assert!((e.probability - m.probability).abs() < 5.0 * sigma, "n = {}", e.n);
        }
        assert_eq!(mc, torus_demo(50, TorusMode::MonteCarlo { trials: 40_000 }, 9).unwrap());
    }
}
