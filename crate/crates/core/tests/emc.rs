use hypermatch::bounds::{emc_conjecture_bound, emc_main_bound, frankl_linear_bound};
use hypermatch::constructions::{build_a_ks, build_a_n1s, build_g, enumerate_hext};
use hypermatch::emc::*;
use hypermatch::random::{random_shape_family, rng};
use hypermatch::rational::{int, ratio};
use hypermatch::solve::matching_number;
use hypermatch::{Hypergraph, Rational, VertexSet};
use num::bigint::BigUint;
use num::One;

const CAP: u64 = 5_000_000;

fn brute_max_nu_le(n: usize, k: usize, s: usize) -> usize {
    // independent oracle: every subfamily of C([n],k), ν by subset enumeration
    let all: Vec<u64> = Hypergraph::complete(n, k)
        .unwrap()
        .edges()
        .iter()
        .map(|e| e.mask())
        .collect();
    let mut best = 0;
    for mask in 0u64..1 << all.len() {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let chosen: Vec<u64> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
        if naive_nu(&chosen) <= s {
            best = size;
        }
    }
    best
}

fn naive_nu(edges: &[u64]) -> usize {
    fn go(edges: &[u64], used: u64) -> usize {
        let Some((&e, rest)) = edges.split_first() else {
            return 0;
        };
        let skip = go(rest, used);
        if e & used == 0 {
            skip.max(1 + go(rest, used | e))
        } else {
            skip
        }
    }
    go(edges, 0)
}

#[test]
fn erdos_gallai_small_values() {
    assert_eq!(emc_extremal_search(6, 2, 1, false, CAP).unwrap().value, 5);
    assert_eq!(emc_extremal_search(6, 2, 2, false, CAP).unwrap().value, 10);
    assert_eq!(brute_max_nu_le(6, 2, 1), 5);
    assert_eq!(brute_max_nu_le(5, 2, 1), 4);
}

#[test]
fn ekr_seven_points() {
    let r = emc_extremal_search(7, 3, 1, true, CAP).unwrap();
    assert_eq!(r.value, 15);
    assert!(r.witness_nu <= 1);
    assert_eq!(r.witness.len(), 15);
}

fn legal_alphas(n: usize, k: usize, s: usize) -> Vec<Rational> {
    let top = int(2) - ratio(1, k as i64);
    (1..=8)
        .map(|i| Rational::one() + (&top - Rational::one()) * ratio(i, 8))
        .filter(|a| int(n as i64) >= a * int((k * (s + 1)) as i64) + int(k as i64 - 1))
        .collect()
}

#[test]
fn desk_scale_conjecture_and_bounds() {
    let cases = [
        (5, 2, 1, true),
        (6, 2, 1, true),
        (6, 2, 2, true),
        (7, 2, 2, true),
        (5, 3, 1, true),
        (6, 3, 1, true),
        (7, 3, 1, true),
        (8, 3, 1, true),
        (9, 3, 2, false),
    ];
    for (n, k, s, both) in cases {
        let stable = emc_extremal_search(n, k, s, true, CAP).unwrap();
        let conj = emc_conjecture_bound(n, k, s).unwrap();
        assert_eq!(BigUint::from(stable.value), conj, "({n},{k},{s})");
        for alpha in legal_alphas(n, k, s) {
            assert!(BigUint::from(stable.value) <= emc_main_bound(n, k, s, &alpha).unwrap());
        }
        if n >= k * (s + 1) {
            assert!(BigUint::from(stable.value) <= frankl_linear_bound(n, k, s).unwrap());
        }
        assert!(is_stable(&stable.witness));
        if both {
            if let Ok(full) = emc_extremal_search(n, k, s, false, CAP) {
                assert_eq!(full.value, stable.value, "({n},{k},{s})");
            }
        }
    }
}

#[test]
fn exhaustive_matches_independent_oracle() {
    for (n, k, s) in [(5, 2, 1), (6, 2, 1), (5, 3, 1), (6, 3, 1)] {
        let r = emc_search_with_mode(n, k, s, SearchMode::Exhaustive, CAP).unwrap();
        assert_eq!(r.value as usize, brute_max_nu_le(n, k, s), "({n},{k},{s})");
    }
}

#[test]
fn pruned_matches_exhaustive() {
    for (n, k, s) in [(5, 2, 1), (6, 2, 1), (6, 2, 2), (6, 3, 1), (5, 3, 1)] {
        let a = emc_search_with_mode(n, k, s, SearchMode::Exhaustive, CAP).unwrap();
        let b = emc_search_with_mode(n, k, s, SearchMode::Pruned, CAP).unwrap();
        let c = emc_search_with_mode(n, k, s, SearchMode::Stable, CAP).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.value, c.value);
    }
}

#[test]
fn search_caps() {
    assert!(emc_search_with_mode(8, 3, 1, SearchMode::Exhaustive, CAP).is_err());
    assert!(emc_extremal_search(20, 4, 1, true, CAP).is_err());
    let low = emc_extremal_search(4, 2, 2, false, CAP).unwrap();
    assert!(!low.warnings.is_empty());
}

#[test]
fn shift_preserves_size() {
    let mut r = rng(7);
    for _ in 0..200 {
        let f = random_shape_family(&mut r, 10, 4);
        for j in 1..f.n() {
            for i in 0..j {
                let g = shift(&f, i, j).unwrap();
                assert_eq!(g.len(), f.len());
            }
        }
    }
}

#[test]
fn stabilize_properties() {
    let mut r = rng(2024);
    for _ in 0..500 {
        let f = random_shape_family(&mut r, 9, 3);
        let g = stabilize(&f);
        assert!(is_stable(&g));
        assert_eq!(stabilize(&g), g);
        assert_eq!(g.len(), f.len());
        assert!(matching_number(&g) <= matching_number(&f));
    }
}

#[test]
fn shadow_theorem_fuzz_and_constructions() {
    let mut r = rng(99);
    for _ in 0..1000 {
        let f = random_shape_family(&mut r, 10, 4);
        assert!(verify_shadow_theorem(&f).unwrap().holds);
    }
    let mut all = vec![
        build_a_ks(3, 2, 9).unwrap(),
        build_a_ks(2, 2, 6).unwrap(),
        build_a_n1s(8, 3, 2).unwrap(),
        build_g(9, 3, 2).unwrap(),
    ];
    all.extend(enumerate_hext(8, 4).unwrap().map(|(_, h)| h));
    for f in all {
        assert!(verify_shadow_theorem(&f).unwrap().holds);
    }
    let e = Hypergraph::new(5, 3, [VertexSet::from_vertices([0, 1, 2]).unwrap()]).unwrap();
    let rep = verify_shadow_theorem(&e).unwrap();
    assert_eq!((rep.nu, rep.shadow_size, rep.family_size), (1, 3, 1));
    assert!(verify_shadow_theorem(&Hypergraph::empty(4, 2).unwrap()).is_err());
}

#[test]
fn nested_inequality_on_random_sequences() {
    let mut r = rng(31);
    for i in 0..300 {
        let y = 3 + (i % 6);
        let ell = 1 + i % 2;
        let s = 1 + i % 2;
        let seq = random_nested_cross_dependent(&mut r, y, ell, s);
        assert!(is_nested(&seq));
        assert!(is_cross_dependent(&seq).cross_dependent);
        // any beta < 1 with t = ceil(beta(2s+1)) and |Y| >= t*l
        for beta in [ratio(1, 2), ratio(1, 3), ratio(2, 3)] {
            let t = (&beta * int(2 * s as i64 + 1)).ceil().to_integer();
            let t: usize = t.try_into().unwrap();
            if y >= t * ell {
                assert!(check_nested_inequality(&seq, &beta, t).unwrap().holds);
            }
        }
    }
}

#[test]
fn nested_inequality_preconditions() {
    let e = Hypergraph::empty(6, 2).unwrap();
    let seq = FamilySequence::new(vec![e.clone(), e.clone(), e]).unwrap();
    let rep = check_nested_inequality(&seq, &ratio(1, 2), 3).unwrap();
    assert_eq!(rep.lhs, 0);
    assert!(rep.holds);
    assert!(check_nested_inequality(&seq, &int(1), 3).is_err());
    assert!(check_nested_inequality(&seq, &ratio(1, 2), 2).is_err());
    assert!(check_nested_inequality(&seq, &ratio(1, 2), 4).is_err());
}

#[test]
fn partition_pipeline_on_stable_families() {
    let mut r = rng(5);
    let mut seen = 0;
    for _ in 0..300 {
        let f = stabilize(&random_shape_family(&mut r, 9, 3));
        if f.k() < 2 || matching_number(&f) + 1 >= f.n() {
            continue;
        }
        let rep = partition_report(&f, None).unwrap();
        assert!(rep.a_counts_match && rep.f_below_a && rep.shadow_absorbed);
        assert!(rep.nested && rep.cross_dependent);
        seen += 1;
    }
    assert!(seen > 50);
}

#[test]
fn partition_pipeline_with_inequality() {
    // stable families with ν = s on n >= αk(s+1)+k-1 vertices
    for (n, k, s, alpha) in [
        (10, 3, 1, ratio(3, 2)),
        (13, 3, 2, ratio(4, 3)),
        (12, 2, 2, ratio(5, 4)),
    ] {
        for f in [build_a_n1s(n, k, s).unwrap(), build_a_ks(k, s, n).unwrap()] {
            assert_eq!(matching_number(&f), s);
            let rep = partition_report(&f, Some(&alpha)).unwrap();
            assert!(rep.all_hold(), "({n},{k},{s})");
            assert!(rep.nested_inequality.is_some());
        }
    }
}

#[test]
fn linear_bound_fails_below_k_times_s_plus_one() {
    // every 3-set on 5 points meets every other, so ν = 1 with all 10 sets
    let r = emc_extremal_search(5, 3, 1, false, CAP).unwrap();
    assert_eq!(r.value, 10);
    assert_eq!(frankl_linear_bound(5, 3, 1).unwrap(), BigUint::from(6u32));
}

#[test]
fn top_alpha_gives_unit_beta() {
    let f = build_a_n1s(12, 2, 2).unwrap();
    assert!(partition_report(&f, Some(&ratio(3, 2))).is_err());
    assert!(partition_report(&f, None).unwrap().all_hold());
}
