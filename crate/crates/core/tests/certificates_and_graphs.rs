use pq_census::actions::act_on_pairs;
use pq_census::atlas::{self, AtlasEntry, Family, RowParams};
use pq_census::frobenius::{find_regular_frobenius, verify_certificate, FrobeniusCertificate};
use pq_census::graphs::{export_graph6, orbital_graphs, parse_graph6, Graph};
use pq_census::structure::rank_and_suborbits;
use pq_census::{PermGroup, Permutation, DEFAULT_SEED};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn row(family: Family, q: Option<u64>) -> PermGroup {
    let e = AtlasEntry::from_params(
        family,
        RowParams {
            q,
            ..Default::default()
        },
    )
    .unwrap();
    atlas::build(&e, DEFAULT_SEED).unwrap().target
}

fn certificate(g: &PermGroup, p: u64, q: u64) -> FrobeniusCertificate {
    find_regular_frobenius(g, p, q, DEFAULT_SEED)
        .unwrap()
        .expect("certificate")
}

#[test]
fn certificates_round_trip_and_mutations_fail() {
    let cases = [
        (row(Family::AqPairs, Some(7)), 3, 7),
        (row(Family::M11Pairs, None), 5, 11),
        (row(Family::Psl2CosetsD, Some(11)), 5, 11),
    ];
    for (g, p, q) in cases {
        let cert = certificate(&g, p, q);
        assert!(verify_certificate(&g, &cert).passed());
        let json = serde_json::to_string(&cert).unwrap();
        let back: FrobeniusCertificate = serde_json::from_str(&json).unwrap();
        assert!(verify_certificate(&g, &back).passed());

        let n = g.degree();
        let swap = Permutation::parse_cycles(n, "(0 1)").unwrap();
        let mutants = [
            FrobeniusCertificate {
                p: p + 2,
                ..cert.clone()
            },
            FrobeniusCertificate {
                q: q + 2,
                ..cert.clone()
            },
            FrobeniusCertificate {
                r: cert.r % q + 1,
                ..cert.clone()
            },
            FrobeniusCertificate {
                x: &cert.x * &swap,
                ..cert.clone()
            },
            FrobeniusCertificate {
                y: &cert.y * &swap,
                ..cert.clone()
            },
            FrobeniusCertificate {
                x: cert.y.clone(),
                y: cert.x.clone(),
                ..cert.clone()
            },
            FrobeniusCertificate {
                y: Permutation::identity(n),
                ..cert.clone()
            },
        ];
        for (i, m) in mutants.iter().enumerate() {
            assert!(!verify_certificate(&g, m).passed(), "{} mutant {i} accepted", g.label());
        }
    }
}

#[test]
fn orbital_valencies_are_suborbit_lengths() {
    for g in [
        row(Family::AqPairs, Some(7)),
        row(Family::M11Pairs, None),
        row(Family::Psl2Pairs, Some(13)),
        act_on_pairs(&PermGroup::symmetric(6)).unwrap().target,
    ] {
        let report = orbital_graphs(&g).unwrap();
        let (rank, lengths) = rank_and_suborbits(&g).unwrap();
        assert_eq!(report.rank, rank);
        let mut from_orbitals: Vec<usize> = report.orbitals.iter().map(|o| o.length).collect();
        // the diagonal orbital is left out
        let mut expected = lengths[1..].to_vec();
        from_orbitals.sort_unstable();
        expected.sort_unstable();
        assert_eq!(from_orbitals, expected);
        let mut union = Graph::empty(g.degree());
        for og in &report.graphs {
            assert!(og.graph.is_invariant_under(&g));
            assert_eq!(og.graph.regular_degree(), Some(og.valency));
            let summed: usize = og
                .suborbits
                .iter()
                .map(|&s| report.orbitals.iter().find(|o| o.representative == s).unwrap().length)
                .sum();
            assert_eq!(og.valency, summed);
            for (u, v) in og.graph.edges() {
                assert!(!union.has_edge(u, v), "orbital graphs overlap");
                union.add_edge(u, v);
            }
        }
        assert_eq!(union, Graph::complete(g.degree()));
    }
}

#[test]
fn a7_orbital_graphs_are_complementary() {
    let report = orbital_graphs(&row(Family::AqPairs, Some(7))).unwrap();
    assert_eq!(report.graphs.len(), 2);
    assert_eq!(report.graphs[0].graph.complement(), report.graphs[1].graph);
    assert_eq!(report.graphs[0].valency, 10);
    assert_eq!(report.graphs[1].valency, 10);
}

#[test]
fn random_invariant_graphs_round_trip() {
    let groups = [
        row(Family::AqPairs, Some(7)),
        row(Family::M11Pairs, None),
        row(Family::Psl2Pairs, Some(13)),
        row(Family::Psl2CosetsD, Some(11)),
        act_on_pairs(&PermGroup::symmetric(5)).unwrap().target,
    ];
    let reports: Vec<_> = groups.iter().map(|g| orbital_graphs(g).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for _ in 0..100 {
        let i = rng.gen_range(0..groups.len());
        let (g, report) = (&groups[i], &reports[i]);
        let mut graph = Graph::empty(g.degree());
        for og in &report.graphs {
            if rng.gen_bool(0.5) {
                for (u, v) in og.graph.edges() {
                    graph.add_edge(u, v);
                }
            }
        }
        assert!(graph.is_invariant_under(g));
        let text = export_graph6(&graph).unwrap();
        assert_eq!(parse_graph6(&text).unwrap(), graph);
    }
}
