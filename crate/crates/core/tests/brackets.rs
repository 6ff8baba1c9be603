use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tribracket::bracket::{
    search_brackets, verify_bracket, CoefficientTensor, SearchOptions, SkeinVariant,
    TribracketBracket,
};
use tribracket::builtins;
use tribracket::ring::ModulusRing;
use tribracket::tribracket::Tribracket;

/// Modular helpers kept separate from the library's ring type.
struct Zm(i64);

impl Zm {
    fn r(&self, x: i64) -> i64 {
        x.rem_euclid(self.0)
    }

    fn inv(&self, x: i64) -> Option<i64> {
        (1..self.0).find(|&y| self.r(x * y) == 1)
    }
}

/// The bracket axioms with the four-term (ii.iv), straight from the
/// definition, on zero-based flat tensors.
fn oracle_valid(x: &Tribracket, m: i64, a: &[i64], b: &[i64]) -> bool {
    let z = Zm(m);
    let n = x.size();
    let ix = |p: usize, q: usize, r: usize| (p * n + q) * n + r;
    if a.iter().chain(b).any(|&v| z.inv(v).is_none()) {
        return false;
    }
    let deltas: Vec<i64> = (0..n * n * n)
        .map(|i| z.r(-a[i] * z.inv(b[i]).unwrap() - z.inv(a[i]).unwrap() * b[i]))
        .collect();
    if deltas.iter().any(|&d| d != deltas[0]) {
        return false;
    }
    let delta = deltas[0];
    let t = |p, q, r| x.get(p, q, r);
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let (abc, abd, acd) = (t(p, q, r), t(p, q, s), t(p, r, s));
                    let l1 = ix(p, q, r);
                    let l2 = ix(r, abc, acd);
                    let l3 = ix(p, r, s);
                    let r1 = ix(q, abc, abd);
                    let r2 = ix(p, q, s);
                    let r3 = ix(s, abd, acd);
                    let eqs = [
                        (a[l1] * a[l2] * a[l3], a[r1] * a[r2] * a[r3]),
                        (a[l1] * b[l2] * b[l3], b[r1] * a[r2] * b[r3]),
                        (b[l1] * b[l2] * a[l3], a[r1] * b[r2] * b[r3]),
                        (
                            a[l1] * b[l2] * a[l3],
                            a[r1] * a[r2] * b[r3]
                                + b[r1] * a[r2] * a[r3]
                                + delta * b[r1] * a[r2] * b[r3]
                                + b[r1] * b[r2] * b[r3],
                        ),
                        (
                            a[l1] * a[l2] * b[l3]
                                + b[l1] * a[l2] * a[l3]
                                + delta * b[l1] * a[l2] * b[l3]
                                + b[l1] * b[l2] * b[l3],
                            a[r1] * b[r2] * a[r3],
                        ),
                    ];
                    if eqs.iter().any(|&(l, r)| z.r(l) != z.r(r)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Every `(A, B)` over the units of Z/m that passes the oracle, in the
/// library's canonical order (concatenated residues).
fn brute_force(x: &Tribracket, m: i64) -> Vec<(Vec<i64>, Vec<i64>)> {
    let z = Zm(m);
    let units: Vec<i64> = (1..m).filter(|&v| z.inv(v).is_some()).collect();
    let slots = 2 * x.size().pow(3);
    let total = units.len().pow(slots as u32);
    let mut out = Vec::new();
    for mut k in 0..total {
        let mut v = vec![0; slots];
        for slot in (0..slots).rev() {
            v[slot] = units[k % units.len()];
            k /= units.len();
        }
        let (a, b) = v.split_at(slots / 2);
        if oracle_valid(x, m, a, b) {
            out.push((a.to_vec(), b.to_vec()));
        }
    }
    out
}

fn flat(b: &TribracketBracket) -> (Vec<i64>, Vec<i64>) {
    let f = |t: &CoefficientTensor| t.values().iter().map(|&v| v as i64).collect();
    (f(b.a()), f(b.b()))
}

fn search(x: &Tribracket, m: u32, prune: bool) -> Vec<(Vec<i64>, Vec<i64>)> {
    let options = SearchOptions {
        prune,
        ..SearchOptions::default()
    };
    search_brackets(x, ModulusRing::new(m).unwrap(), &options)
        .unwrap()
        .iter()
        .map(flat)
        .collect()
}

#[test]
fn one_element_search_matches_oracles() {
    let x = Tribracket::trivial();
    for m in 2..=7 {
        let pruned = search(&x, m, true);
        assert_eq!(pruned, search(&x, m, false), "m = {m}");
        assert_eq!(pruned, brute_force(&x, m as i64), "m = {m}");
    }
}

#[test]
fn two_element_search_matches_brute_force() {
    let x = builtins::two_element_tribracket();
    for m in [2, 3, 4, 6] {
        assert_eq!(search(&x, m, true), brute_force(&x, m as i64), "m = {m}");
    }
}

#[test]
#[ignore = "unpruned search over 4^16 candidates; run with --ignored"]
fn two_element_z5_pruned_matches_unpruned() {
    let x = builtins::two_element_tribracket();
    assert_eq!(search(&x, 5, true), search(&x, 5, false));
}

#[test]
fn z7_search_recovers_the_example() {
    let x = builtins::two_element_tribracket();
    let found = search(&x, 7, true);
    assert!(found.contains(&flat(&builtins::z7_bracket())));
    let limited = search_brackets(
        &x,
        ModulusRing::new(7).unwrap(),
        &SearchOptions {
            limit: Some(3),
            ..SearchOptions::default()
        },
    )
    .unwrap();
    assert_eq!(limited.iter().map(flat).collect::<Vec<_>>(), found[..3]);
}

#[test]
fn z5_search_recovers_both_table_brackets() {
    let x = builtins::two_element_tribracket();
    let found = search(&x, 5, true);
    assert_eq!(found.len(), 1024);
    for b in [builtins::beta1(), builtins::beta2()] {
        assert!(found.contains(&flat(&b)));
    }
    assert!(found.iter().all(|(a, b)| oracle_valid(&x, 5, a, b)));
}

#[test]
fn search_is_independent_of_worker_count() {
    let x = builtins::two_element_tribracket();
    let ring = ModulusRing::new(7).unwrap();
    let run = |workers| {
        search_brackets(
            &x,
            ring,
            &SearchOptions {
                workers: Some(workers),
                ..SearchOptions::default()
            },
        )
        .unwrap()
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn shipped_brackets_pass_both_checks() {
    for b in [builtins::z7_bracket(), builtins::beta1(), builtins::beta2()] {
        let (a, bb) = flat(&b);
        let m = b.ring().modulus() as i64;
        assert!(oracle_valid(b.tribracket(), m, &a, &bb));
        assert!(b.verify().valid);
    }
}

#[test]
fn printed_beta2_is_not_a_bracket() {
    let x = builtins::two_element_tribracket();
    let ring = ModulusRing::new(5).unwrap();
    let a = CoefficientTensor::from_tensor(
        ring,
        &[vec![vec![1, 2], vec![2, 1]], vec![vec![1, 1], vec![3, 1]]],
    )
    .unwrap();
    let b = CoefficientTensor::from_tensor(
        ring,
        &[vec![vec![4, 3], vec![3, 4]], vec![vec![4, 2], vec![2, 4]]],
    )
    .unwrap();
    let report = verify_bracket(&x, &a, &b, SkeinVariant::Corrected);
    assert!(!report.valid && !report.delta_ok);
    let flat = |t: &CoefficientTensor| t.values().iter().map(|&v| v as i64).collect::<Vec<_>>();
    assert!(!oracle_valid(&x, 5, &flat(&a), &flat(&b)));
}

/// Changes entry `slot` (A first, then B) to `value`.
fn mutate(
    b: &TribracketBracket,
    slot: usize,
    value: u32,
) -> (CoefficientTensor, CoefficientTensor) {
    let ring = b.ring();
    let n = b.tribracket().size();
    let cells = n * n * n;
    let rebuild = |t: &CoefficientTensor, offset: usize| {
        CoefficientTensor::from_fn(ring, n, |p, q, r| {
            let i = (p * n + q) * n + r + offset;
            if i == slot {
                value as i64
            } else {
                t.get(p, q, r).value() as i64
            }
        })
    };
    (rebuild(b.a(), 0), rebuild(b.b(), cells))
}

#[test]
fn every_single_unit_mutation_is_rejected() {
    for b in [builtins::z7_bracket(), builtins::beta1(), builtins::beta2()] {
        let cells = b.tribracket().size().pow(3);
        let original = flat(&b);
        let units: Vec<u32> = b.ring().units().iter().map(|u| u.value()).collect();
        let mut tried = 0;
        for slot in 0..2 * cells {
            let current = if slot < cells {
                original.0[slot]
            } else {
                original.1[slot - cells]
            } as u32;
            for &u in units.iter().filter(|&&u| u != current) {
                let (a, bb) = mutate(&b, slot, u);
                let report = verify_bracket(b.tribracket(), &a, &bb, SkeinVariant::Corrected);
                assert!(!report.valid, "slot {slot} -> {u} still valid");
                tried += 1;
            }
        }
        assert!(tried >= 20);
    }
}

#[test]
fn random_mutations_are_rejected_by_both_checks() {
    let mut rng = StdRng::seed_from_u64(0x7219);
    for b in [builtins::z7_bracket(), builtins::beta1(), builtins::beta2()] {
        let cells = b.tribracket().size().pow(3);
        let m = b.ring().modulus();
        let units: Vec<u32> = b.ring().units().iter().map(|u| u.value()).collect();
        let original = flat(&b);
        for _ in 0..25 {
            let slot = rng.gen_range(0..2 * cells);
            let current = if slot < cells {
                original.0[slot]
            } else {
                original.1[slot - cells]
            } as u32;
            let choices: Vec<u32> = units.iter().copied().filter(|&u| u != current).collect();
            let u = choices[rng.gen_range(0..choices.len())];
            let (a, bb) = mutate(&b, slot, u);
            assert!(!verify_bracket(b.tribracket(), &a, &bb, SkeinVariant::Corrected).valid);
            let f =
                |t: &CoefficientTensor| t.values().iter().map(|&v| v as i64).collect::<Vec<_>>();
            assert!(!oracle_valid(b.tribracket(), m as i64, &f(&a), &f(&bb)));
        }
    }
}

#[test]
fn non_unit_entry_is_reported() {
    let b = builtins::beta1();
    let (a, bb) = mutate(&b, 3, 0);
    let report = verify_bracket(b.tribracket(), &a, &bb, SkeinVariant::Corrected);
    assert!(!report.valid && !report.units_ok);
    assert_eq!(a.first_non_unit().map(|(_, v)| v), Some(0));
}
