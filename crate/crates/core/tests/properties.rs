use num_bigint::BigInt;
use proptest::prelude::*;

use tribracket::ring::ModulusRing;
use tribracket::tribracket::{
    dehn, enumerate_tribrackets, make_alexander, make_dehn, GroupTable, Tribracket,
};

fn big_mod(x: BigInt, m: u32) -> u32 {
    let m = BigInt::from(m);
    let r = ((x % &m) + &m) % &m;
    u32::try_from(r).unwrap()
}

proptest! {
    #[test]
    fn ring_matches_bigint(m in 2u32..=u32::MAX, a in any::<i64>(), b in any::<i64>()) {
        let ring = ModulusRing::new(m).unwrap();
        let (x, y) = (ring.elem(a), ring.elem(b));
        let (ba, bb) = (BigInt::from(a), BigInt::from(b));
        prop_assert_eq!(x.value(), big_mod(ba.clone(), m));
        prop_assert_eq!((x + y).value(), big_mod(&ba + &bb, m));
        prop_assert_eq!((x - y).value(), big_mod(&ba - &bb, m));
        prop_assert_eq!((x * y).value(), big_mod(&ba * &bb, m));
        prop_assert_eq!((-x).value(), big_mod(-ba.clone(), m));
    }

    #[test]
    fn inverses_match_bigint(m in 2u32..100_000, a in any::<i64>()) {
        let ring = ModulusRing::new(m).unwrap();
        let x = ring.elem(a);
        let g = gcd(x.value() as u64, m as u64);
        match x.inv() {
            Ok(y) => {
                prop_assert_eq!(g, 1);
                prop_assert_eq!((x * y).value(), 1 % m);
            }
            Err(_) => prop_assert_ne!(g, 1),
        }
    }

    #[test]
    fn powers_match_bigint(m in 2u32..100_000, a in any::<i64>(), e in 0i64..200) {
        let ring = ModulusRing::new(m).unwrap();
        let x = ring.elem(a);
        let expected = BigInt::from(x.value()).modpow(&BigInt::from(e), &BigInt::from(m));
        prop_assert_eq!(x.pow(e).unwrap().value(), u32::try_from(expected).unwrap());
        if let Ok(inv) = x.inv() {
            prop_assert_eq!(x.pow(-e).unwrap(), inv.pow(e).unwrap());
        }
    }

    #[test]
    fn alexander_tribrackets_are_valid(m in 2u32..12, x in 1u32..12, y in 1u32..12) {
        let ring = ModulusRing::new(m).unwrap();
        let (ex, ey) = (ring.elem(x as i64), ring.elem(y as i64));
        match make_alexander(m, x, y) {
            Ok(t) => {
                prop_assert!(ex.is_unit() && ey.is_unit());
                prop_assert!(t.verify().valid);
                prop_assert!(oracle_valid(&t));
            }
            Err(_) => prop_assert!(!ex.is_unit() || !ey.is_unit()),
        }
    }

    #[test]
    fn divisions_invert_the_operation(k in 0usize..1000) {
        let all = small_tribrackets();
        let x = &all[k % all.len()];
        let d = x.divisions().unwrap();
        let n = x.size();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = x.get(a, b, c);
                    prop_assert_eq!(d.left(b, c, v), a);
                    prop_assert_eq!(d.center(a, c, v), b);
                    prop_assert_eq!(d.right(a, b, v), c);
                }
            }
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn small_tribrackets() -> Vec<Tribracket> {
    let mut all = enumerate_tribrackets(2).unwrap();
    all.extend(enumerate_tribrackets(3).unwrap());
    all
}

/// Both axioms checked straight from the definition.
fn oracle_valid(x: &Tribracket) -> bool {
    let n = x.size();
    let t = |a, b, c| x.get(a, b, c);
    let unique = |f: &dyn Fn(usize) -> usize, d: usize| (0..n).filter(|&v| f(v) == d).count() == 1;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let d = t(a, b, c);
                if !unique(&|v| t(v, b, c), d)
                    || !unique(&|v| t(a, v, c), d)
                    || !unique(&|v| t(a, b, v), d)
                {
                    return false;
                }
                for dd in 0..n {
                    let abc = t(a, b, c);
                    let acd = t(a, c, dd);
                    let abd = t(a, b, dd);
                    let first = t(c, abc, acd);
                    if first != t(b, abc, abd) || first != t(dd, abd, acd) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Every function `{0,1}^3 -> {0,1}` and the valid ones among them.
fn brute_force_two() -> Vec<Vec<usize>> {
    (0u32..256)
        .map(|bits| {
            (0..8)
                .map(|i| ((bits >> (7 - i)) & 1) as usize)
                .collect::<Vec<_>>()
        })
        .filter(|flat| {
            let tensor: Vec<Vec<Vec<usize>>> = (0..2)
                .map(|a| {
                    (0..2)
                        .map(|b| (0..2).map(|c| flat[a * 4 + b * 2 + c] + 1).collect())
                        .collect()
                })
                .collect();
            oracle_valid(&Tribracket::from_tensor(&tensor).unwrap())
        })
        .collect()
}

fn flat(x: &Tribracket) -> Vec<usize> {
    let n = x.size();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                out.push(x.get(a, b, c));
            }
        }
    }
    out
}

#[test]
fn enumeration_of_two_matches_brute_force() {
    let found: Vec<Vec<usize>> = enumerate_tribrackets(2).unwrap().iter().map(flat).collect();
    assert_eq!(found, brute_force_two());
    assert_eq!(found.len(), 2);
}

#[test]
fn enumeration_of_three_is_sorted_valid_and_complete() {
    let found = enumerate_tribrackets(3).unwrap();
    let flats: Vec<Vec<usize>> = found.iter().map(flat).collect();
    assert!(flats.windows(2).all(|w| w[0] < w[1]));
    assert!(found.iter().all(oracle_valid));
    // every Latin cube of order 3 is [a,b,c] = pa + qb + rc + s over Z/3
    // with p, q, r nonzero; keep the valid ones
    let mut oracle = Vec::new();
    for p in 1..3 {
        for q in 1..3 {
            for r in 1..3 {
                for s in 0..3 {
                    let tensor: Vec<Vec<Vec<usize>>> = (0..3)
                        .map(|a| {
                            (0..3)
                                .map(|b| {
                                    (0..3)
                                        .map(|c| (p * a + q * b + r * c + s) % 3 + 1)
                                        .collect()
                                })
                                .collect()
                        })
                        .collect();
                    let x = Tribracket::from_tensor(&tensor).unwrap();
                    if oracle_valid(&x) {
                        oracle.push(flat(&x));
                    }
                }
            }
        }
    }
    oracle.sort();
    assert_eq!(flats, oracle);
}

#[test]
fn enumeration_agrees_with_verify() {
    for x in small_tribrackets() {
        assert!(x.verify().valid);
    }
    // [a,b,c] = a and [a,b,c] = b + c: neither is a ternary quasigroup
    for tensor in [
        vec![vec![vec![1, 1], vec![1, 1]], vec![vec![2, 2], vec![2, 2]]],
        vec![vec![vec![1, 2], vec![2, 1]], vec![vec![1, 2], vec![2, 1]]],
    ] {
        let x = Tribracket::from_tensor(&tensor).unwrap();
        assert_eq!(x.verify().valid, oracle_valid(&x));
    }
}

fn cyclic(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect()
}

fn klein() -> Vec<Vec<usize>> {
    (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect()
}

/// S3 as permutations of {0,1,2}, composed right to left.
fn s3() -> Vec<Vec<usize>> {
    let perms = [
        [0, 1, 2],
        [1, 2, 0],
        [2, 0, 1],
        [0, 2, 1],
        [2, 1, 0],
        [1, 0, 2],
    ];
    let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    (0..6)
        .map(|i| {
            (0..6)
                .map(|j| index([0, 1, 2].map(|k| perms[i][perms[j][k]])))
                .collect()
        })
        .collect()
}

#[test]
fn dehn_tribrackets_of_small_groups() {
    let mut groups: Vec<Vec<Vec<usize>>> = (1..=6).map(cyclic).collect();
    groups.push(klein());
    groups.push(s3());
    for table in groups {
        let x = make_dehn(&table).unwrap();
        assert!(x.verify().valid);
        assert!(oracle_valid(&x));
        let g = GroupTable::new(&table).unwrap();
        let n = table.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    // b a^-1 c, computed from the raw table
                    let inv = (0..n).find(|&i| table[a][i] == 0).unwrap();
                    assert_eq!(x.get(a, b, c), table[table[b][inv]][c]);
                }
            }
        }
        assert_eq!(dehn(&g), x);
    }
}

#[test]
fn dehn_rejects_non_groups() {
    let not_associative = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 2, 1]];
    assert!(make_dehn(&not_associative).is_err());
    let no_identity = vec![vec![1, 0], vec![0, 0]];
    assert!(make_dehn(&no_identity).is_err());
    // a Latin square with identity 0 that is not associative
    let loop5 = vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 4, 0, 1, 3],
        vec![3, 2, 4, 0, 1],
        vec![4, 3, 1, 2, 0],
    ];
    assert!(make_dehn(&loop5).is_err());
}

#[test]
fn non_abelian_dehn_is_not_alexander_shaped() {
    let x = make_dehn(&s3()).unwrap();
    // [a,b,c] = b a^-1 c is not symmetric in b and c for S3
    let asym = (0..6).any(|a| (0..6).any(|b| (0..6).any(|c| x.get(a, b, c) != x.get(a, c, b))));
    assert!(asym);
}
