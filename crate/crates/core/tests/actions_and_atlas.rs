use num_bigint::BigUint;
use pq_census::actions::{act_on_cosets, act_on_pairs, act_on_subsets, projective_line_action};
use pq_census::atlas::{self, list_rows, AtlasEntry, Family, TableSource};
use pq_census::field::FiniteField;
use pq_census::nc::{is_prime, nc_check, nc_enumerate};
use pq_census::structure::classify;
use pq_census::{build_chain, PermGroup, Permutation, DEFAULT_SEED};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn order(g: &PermGroup) -> BigUint {
    build_chain(g, 11).order().clone()
}

fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn gl_order(n: u32, s: u64) -> BigUint {
    let sn = BigUint::from(s).pow(n);
    (0..n).map(|i| &sn - BigUint::from(s).pow(i)).product()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn psl_order(n: u32, s: u64) -> BigUint {
    gl_order(n, s) / BigUint::from(s - 1) / BigUint::from(gcd(n as u64, s - 1))
}

/// Socle orders from the standard formulas, independent of the atlas module.
fn expected_order(e: &AtlasEntry) -> BigUint {
    use Family::*;
    let q = e.params.q.unwrap_or(0);
    match e.family {
        AqPairs => factorial(q) / 2u32,
        Aq1Pairs => factorial(q + 1) / 2u32,
        A7On35 | A7On15 => BigUint::from(2520u32),
        ApqNatural => factorial(e.degree) / 2u32,
        Psl2Pairs | Psl2CosetsD | Psl2CosetsA4 | Psl2CosetsS4 | Psl2CosetsA5 => psl_order(2, q),
        Psl2P2CosetsPgl => psl_order(2, e.params.p.unwrap().pow(2)),
        PslN2Lines => gl_order(e.params.n.unwrap(), 2),
        PslNsPoints => psl_order(e.params.n.unwrap(), e.params.s.unwrap()),
        M11Pairs => BigUint::from(7920u32),
        M23Pairs => BigUint::from(10_200_960u32),
        other => panic!("{other} is not constructible"),
    }
}

/// Image of a source element on the k-subsets labelled `{a,b,...}`.
fn induced_on_subsets(labels: &[Vec<usize>], g: &Permutation) -> Permutation {
    let images: Vec<usize> = labels
        .iter()
        .map(|set| {
            let mut image: Vec<usize> = set.iter().map(|&x| g.apply(x)).collect();
            image.sort_unstable();
            labels.iter().position(|l| *l == image).expect("image is a subset")
        })
        .collect();
    Permutation::from_images(&images).unwrap()
}

fn parse_labels(labels: &[String]) -> Vec<Vec<usize>> {
    labels
        .iter()
        .map(|l| {
            l.trim_matches(|c| c == '{' || c == '}')
                .split(',')
                .map(|x| x.parse().unwrap())
                .collect()
        })
        .collect()
}

#[test]
fn induced_action_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for (g, k) in [
        (PermGroup::symmetric(6), 2),
        (PermGroup::alternating(7), 3),
        (atlas::mathieu_11(), 2),
    ] {
        let action = act_on_subsets(&g, k).unwrap();
        let labels = parse_labels(&action.point_labels);
        for (s, t) in g.generators().iter().zip(action.target.generators()) {
            assert_eq!(&induced_on_subsets(&labels, s), t);
        }
        let chain = build_chain(&g, 1);
        for _ in 0..100 {
            let a = chain.random_element(rng.gen());
            let b = chain.random_element(rng.gen());
            let lhs = induced_on_subsets(&labels, &(&a * &b));
            let rhs = &induced_on_subsets(&labels, &a) * &induced_on_subsets(&labels, &b);
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn pairs_of_multiply_transitive_groups() {
    for g in [
        PermGroup::symmetric(5),
        PermGroup::alternating(6),
        atlas::mathieu_11(),
        atlas::mathieu_23(),
    ] {
        let target = act_on_pairs(&g).unwrap().target;
        let p = classify(&target);
        assert!(p.transitive, "{}", g.label());
    }
    // M_11 and M_23 are 4-transitive
    for g in [atlas::mathieu_11(), atlas::mathieu_23()] {
        let p = classify(&act_on_pairs(&g).unwrap().target);
        assert!(p.primitive && p.rank == 3);
        // simple, so the action is faithful
        assert_eq!(order(&g), order(&act_on_pairs(&g).unwrap().target));
    }
}

#[test]
fn coset_index_times_subgroup_order() {
    let a7 = PermGroup::alternating(7);
    let subgroups: Vec<Vec<Permutation>> = vec![
        vec![Permutation::parse_cycles(7, "(0 1 2)").unwrap()],
        vec![
            Permutation::parse_cycles(7, "(0 1 2 3 4)").unwrap(),
            Permutation::parse_cycles(7, "(1 4)(2 3)").unwrap(),
        ],
        PermGroup::alternating(5)
            .generators()
            .iter()
            .map(|g| extend(g, 7))
            .collect(),
    ];
    for h in subgroups {
        let action = act_on_cosets(&a7, &h).unwrap();
        let h_order = order(&PermGroup::new(h).unwrap());
        assert_eq!(BigUint::from(action.degree()) * h_order, BigUint::from(2520u32));
    }
}

fn extend(g: &Permutation, n: usize) -> Permutation {
    let mut images: Vec<usize> = g.images().iter().map(|&x| x as usize).collect();
    images.extend(images.len()..n);
    Permutation::from_images(&images).unwrap()
}

#[test]
fn projective_lines_are_two_transitive() {
    for s in (4u64..=128).filter(|&s| FiniteField::new(s).is_ok()) {
        let field = FiniteField::new(s).unwrap();
        let g = projective_line_action(&field).unwrap();
        let p = classify(&g);
        assert!(p.two_transitive, "PSL(2,{s})");
        assert_eq!(order(&g), psl_order(2, s), "PSL(2,{s})");
    }
}

#[test]
fn constructible_rows_match_their_table() {
    let rows: Vec<_> = list_rows(300).into_iter().filter(|e| e.constructible).collect();
    assert!(rows.len() >= 30);
    for e in &rows {
        let action = atlas::build(e, DEFAULT_SEED).unwrap();
        assert_eq!(action.degree() as u64, e.degree, "{}", e.label());
        assert_eq!(action.degree() as u64, e.p * e.q);
        assert_eq!(order(&action.target), expected_order(e), "{}", e.label());
        assert_eq!(e.socle_order(), expected_order(e), "{}", e.label());
        let p = classify(&action.target);
        match e.table_source {
            TableSource::Prop1 => assert!(p.two_transitive, "{}", e.label()),
            // PSL(2,7) on the cosets of D8 and PSL(2,11) on the cosets of A4 are imprimitive;
            // their primitive overgroups are covered by the census tests
            _ if !p.primitive => assert!(
                matches!((e.family, e.q), (Family::Psl2CosetsD, 7) | (Family::Psl2CosetsA4, 11)),
                "{} is imprimitive",
                e.label()
            ),
            _ => assert!(p.uniprimitive, "{}", e.label()),
        }
        assert_eq!(
            atlas::build(e, DEFAULT_SEED).unwrap(),
            action,
            "{} is not deterministic",
            e.label()
        );
    }
}

/// The five conditions, evaluated directly.
fn nc_oracle(p: u64, q: u64) -> bool {
    let power_of_two = |n: u64| n > 0 && n & (n - 1) == 0;
    let c1 = (q - 1) % (p * p) == 0;
    let c2 = q + 1 == 2 * p || 2 * q == p * p + 1;
    let c3 = power_of_two(q - 1) && {
        let t = (q - 1).trailing_zeros();
        ((1u64 << t) - 1) % p == 0 || p + 1 == 1 << (t - 1)
    };
    let c4 = power_of_two(q + 1) && {
        let t = (q + 1).trailing_zeros();
        p == (1 << (t - 1)) + 1
    };
    c1 || c2 || c3 || c4 || (p, q) == (7, 11)
}

#[test]
fn nc_check_matches_direct_evaluation() {
    let primes: Vec<u64> = (2..50_000).filter(|&n| is_prime(n)).collect();
    let mut listed = 0;
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[i + 1..] {
            if p * q > 100_000 {
                break;
            }
            let w = nc_check(p, q).unwrap();
            assert_eq!(w.is_some(), nc_oracle(p, q), "({p},{q})");
            assert!(w.is_none_or(|w| w.recheck()));
            listed += w.is_some() as usize;
        }
    }
    assert_eq!(nc_enumerate(100_000).unwrap().len(), listed);
    assert!(nc_check(11, 7).is_err());
    assert!(nc_check(7, 7).is_err());
}

#[test]
fn table_rows_and_nc_agree() {
    for e in list_rows(2000) {
        let in_nc = nc_check(e.p, e.q).unwrap().is_some();
        match e.table_source {
            TableSource::Table2 => {
                assert!(!in_nc, "{}", e.label());
                assert_eq!((e.q - 1) % e.p, 0, "{}: p does not divide q - 1", e.label());
            }
            TableSource::Table1 => assert!(in_nc, "{}", e.label()),
            TableSource::Prop1 => {}
        }
    }
}
