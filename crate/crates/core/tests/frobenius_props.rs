use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weylwalk::algebra::factor::distinct_degree;
use weylwalk::algebra::prime::primes_from;
use weylwalk::algebra::{ModMatrix, ModPoly};
use weylwalk::census::sample_sl_one;
use weylwalk::frobenius::{classify, classify_modular, theta_type_a, theta_type_c, Status, Theta};
use weylwalk::walker::{run_walk, GroupSpec, WalkConfig, WalkMode};
use weylwalk::weyl::{GroupDescriptor, WeylClass};

fn random_palindromic(p: u64, g: usize, rng: &mut ChaCha8Rng) -> ModPoly {
    let mut c = vec![0u64; 2 * g + 1];
    c[0] = 1;
    c[2 * g] = 1;
    for i in 1..=g {
        let v = rng.gen_range(0..p);
        c[i] = v;
        c[2 * g - i] = v;
    }
    ModPoly::new(p, c)
}

#[test]
fn squarefree_palindromic_polynomials_avoid_plus_minus_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let primes = [3u64, 5, 7, 11, 13, 31, 101];
    let mut checked = 0;
    while checked < 10_000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let g = rng.gen_range(1..=4);
        let f = random_palindromic(p, g, &mut rng);
        if !f.is_squarefree() {
            continue;
        }
        assert_ne!(f.eval(1), 0, "{f} mod {p}");
        assert_ne!(f.eval(p - 1), 0, "{f} mod {p}");
        match theta_type_c(&f, &mut rng).unwrap() {
            Theta::Good(WeylClass::C { pos, neg }) => {
                let total: u32 = pos.iter().chain(&neg).sum();
                assert_eq!(total as usize, g);
            }
            other => panic!("{other:?}"),
        }
        checked += 1;
    }
}

#[test]
fn type_a_partition_matches_distinct_degree_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2000 {
        let p = [2u64, 3, 5, 7, 13][rng.gen_range(0..5)];
        let m = rng.gen_range(1..=8);
        let mut c: Vec<u64> = (0..m).map(|_| rng.gen_range(0..p)).collect();
        c.push(1);
        let f = ModPoly::new(p, c);
        match theta_type_a(&f) {
            Theta::Good(WeylClass::A { parts }) => {
                assert_eq!(parts.iter().sum::<u32>() as usize, m);
                let mut expected: Vec<u32> = distinct_degree(&f)
                    .into_iter()
                    .flat_map(|(g, d)| std::iter::repeat(d as u32).take(g.degree() / d))
                    .collect();
                expected.sort_unstable_by(|a, b| b.cmp(a));
                assert_eq!(parts, expected);
            }
            Theta::NotSquarefree => assert!(!f.is_squarefree()),
            other => panic!("{other:?}"),
        }
    }
}

fn conjugate(x: &ModMatrix, c: &ModMatrix) -> ModMatrix {
    c.mul(x).mul(&c.inverse().unwrap())
}

#[test]
fn classes_are_conjugation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for &p in &[5u64, 7, 101, 65_521] {
        for _ in 0..150 {
            let x = sample_sl_one(3, p, &mut rng);
            let c = sample_sl_one(3, p, &mut rng);
            let a = classify_modular(&x, GroupDescriptor::A(3), &mut rng).unwrap();
            let b = classify_modular(&conjugate(&x, &c), GroupDescriptor::A(3), &mut rng).unwrap();
            assert_eq!(a, b);
        }
    }
    // symplectic conjugators: other walk products
    let cfg = WalkConfig::new(GroupSpec::Sp { g: 2 }, 25, 3, WalkMode::Modular(vec![7, 101])).unwrap();
    for t in 0..100 {
        let x = run_walk(&cfg, 2 * t).unwrap();
        let c = run_walk(&cfg, 2 * t + 1).unwrap();
        for (xm, cm) in x.modular.iter().zip(&c.modular) {
            let a = classify_modular(xm, GroupDescriptor::C(2), &mut rng).unwrap();
            let b = classify_modular(&conjugate(xm, cm), GroupDescriptor::C(2), &mut rng).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn skipped_primes_are_exactly_the_discriminant_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let primes = primes_from(2, 60);
    for (group, floor) in [(GroupSpec::SL { m: 3 }, 2u64), (GroupSpec::Sp { g: 2 }, 3)] {
        let cfg = WalkConfig::new(group, 12, 21, WalkMode::Exact).unwrap();
        let mut tested = 0;
        for t in 0..200 {
            let x = run_walk(&cfg, t).unwrap().exact.unwrap();
            let disc = x.charpoly().discriminant().unwrap();
            if disc.is_zero() {
                continue;
            }
            for &p in primes.iter().filter(|&&p| p >= floor) {
                let obs = classify(&x, group.weyl(), p, &mut rng).unwrap();
                let divides = (&disc % BigInt::from(p)).is_zero();
                assert_eq!(obs.status != Status::Good, divides, "p = {p}, disc = {disc}");
            }
            tested += 1;
        }
        assert!(tested > 50);
    }
}

#[test]
fn integer_and_modular_classification_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let primes = primes_from(3, 10);
    let mut pairs = 0;
    for group in [GroupSpec::SL { m: 3 }, GroupSpec::SL { m: 4 }, GroupSpec::Sp { g: 2 }] {
        let cfg = WalkConfig::new(group, 20, 9, WalkMode::Dual(primes.clone())).unwrap();
        for t in 0..17 {
            let state = run_walk(&cfg, t).unwrap();
            let x = state.exact.as_ref().unwrap();
            for m in &state.modular {
                let a = classify(x, group.weyl(), m.modulus(), &mut rng).unwrap();
                let b = classify_modular(m, group.weyl(), &mut rng).unwrap();
                assert_eq!(a, b);
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 500);
}
