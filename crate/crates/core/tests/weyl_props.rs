use num_rational::BigRational;
use num_traits::{One, Zero};

use weylwalk::weyl::{brute_force_group, enumerate_classes, partitions, GroupDescriptor};

/// Partition numbers by the Euler recurrence over generalized pentagonal numbers.
fn euler_partition_numbers(n: usize) -> Vec<u64> {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut k = 1i64;
        loop {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let mut done = true;
            for g in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
                if g as usize <= m {
                    p[m] += sign * p[m - g as usize];
                    done = false;
                }
            }
            if done {
                break;
            }
            k += 1;
        }
    }
    p.into_iter().map(|x| x as u64).collect()
}

#[test]
fn fractions_sum_to_one() {
    for m in 2..=20 {
        let t = enumerate_classes(GroupDescriptor::A(m)).unwrap();
        assert!(t.fractions().iter().sum::<BigRational>().is_one(), "A{m}");
    }
    for g in 1..=12 {
        let t = enumerate_classes(GroupDescriptor::C(g)).unwrap();
        assert!(t.fractions().iter().sum::<BigRational>().is_one(), "C{g}");
        assert!(t.fractions().iter().all(|f| f > &BigRational::zero()));
    }
}

#[test]
fn class_counts_match_partition_numbers() {
    let p = euler_partition_numbers(20);
    for m in 2..=20 {
        assert_eq!(enumerate_classes(GroupDescriptor::A(m)).unwrap().len() as u64, p[m]);
        assert_eq!(partitions(m).len() as u64, p[m]);
    }
    for g in 1..=12 {
        let expected: u64 = (0..=g).map(|k| p[k] * p[g - k]).sum();
        assert_eq!(enumerate_classes(GroupDescriptor::C(g)).unwrap().len() as u64, expected);
    }
}

#[test]
fn formula_fractions_match_brute_force() {
    let groups = (2..=8).map(GroupDescriptor::A).chain((1..=5).map(GroupDescriptor::C));
    for group in groups {
        let table = enumerate_classes(group).unwrap();
        let bf = brute_force_group(group).unwrap();
        assert_eq!(BigRational::from_integer(group.order()), BigRational::from_integer(bf.order().into()));
        for (class, fraction) in table.iter() {
            assert_eq!(&bf.empirical_fraction(class), fraction, "{group} {class}");
        }
        assert_eq!(bf.counts.len(), table.len(), "{group}");
    }
}
