//! Property tests for the structural invariants: path classification
//! implications, lattice closure, serialization round trips, termination
//! and *-compatibility of normalization, unit behavior, and the graph
//! embedding of the relation system.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{random_expression, Rng};
use hyperck::analysis::{giut_status, GiutVerdict};
use hyperck::hypergraph::{EdgeId, Hypergraph, HypergraphKind, PathClass, VertexId};
use hyperck::io::{parse_hg, serialize_hg, serialize_hg_json, HgDocument};
use hyperck::rewrite::{
    derive_forced_equalities, equal_mod_relations, normalize, normalize_counting, Equality,
};
use hyperck::star::{Generator, StarExpression, Word};

fn hypergraph_strategy(max_v: usize, max_e: usize) -> impl Strategy<Value = Hypergraph> {
    (1..=max_v).prop_flat_map(move |n| {
        let mask = 1u32..(1u32 << n);
        proptest::collection::vec((mask.clone(), mask), 0..=max_e).prop_map(move |edges| {
            let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
            let pick = |mask: u32| -> Vec<&str> {
                names
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, v)| v.as_str())
                    .collect()
            };
            let mut b = Hypergraph::builder();
            for v in &names {
                b = b.vertex(v);
            }
            for (j, (smask, rmask)) in edges.iter().enumerate() {
                b = b.edge(&format!("e{}", j + 1), pick(*smask), pick(*rmask));
            }
            b.build().expect("masked construction is valid")
        })
    })
}

/// Independent predicates, quantifying over every consecutive joint.
fn path_predicates(h: &Hypergraph, path: &[EdgeId]) -> (bool, bool, bool) {
    let mut perfect = true;
    let mut quasi = true;
    let mut partial = true;
    for pair in path.windows(2) {
        let r = h.range(&pair[0]).unwrap();
        let s = h.source(&pair[1]).unwrap();
        perfect &= s == r;
        quasi &= s.is_subset(r);
        partial &= !s.is_disjoint(r);
    }
    (perfect, quasi, partial)
}

proptest! {
    #[test]
    fn path_class_matches_predicates(
        h in hypergraph_strategy(5, 4),
        picks in proptest::collection::vec(0usize..64, 1..4),
    ) {
        prop_assume!(h.edge_count() > 0);
        let edges: Vec<EdgeId> = h.edges().keys().cloned().collect();
        let path: Vec<EdgeId> = picks.iter().map(|i| edges[i % edges.len()].clone()).collect();
        let (perfect, quasi, partial) = path_predicates(&h, &path);
        // the predicate hierarchy
        prop_assert!(!perfect || quasi);
        prop_assert!(!quasi || partial);
        let class = h.classify_path(&path).unwrap();
        let expected = if perfect {
            PathClass::Perfect
        } else if quasi {
            PathClass::QuasiPerfect
        } else if partial {
            PathClass::Partial
        } else {
            PathClass::NotComposable
        };
        prop_assert_eq!(class, expected);
    }

    #[test]
    fn quasi_perfect_only_agrees_with_pairwise_classification(h in hypergraph_strategy(5, 4)) {
        let by_pairs = h.edges().keys().all(|e| {
            h.edges().keys().all(|f| {
                let r = h.range(e).unwrap();
                let s = h.source(f).unwrap();
                if s.is_disjoint(r) {
                    true // not composable, imposes nothing
                } else {
                    matches!(
                        h.classify_path(&[e.clone(), f.clone()]).unwrap(),
                        PathClass::Perfect | PathClass::QuasiPerfect
                    )
                }
            })
        });
        prop_assert_eq!(h.quasi_perfect_only(), by_pairs);
    }

    #[test]
    fn lattice_closure_is_closed_and_bounded(h in hypergraph_strategy(5, 4)) {
        let lattice = h.gen_vertex_lattice();
        prop_assert!(lattice.base.iter().all(|s| lattice.closure.contains(s)));
        for v in h.vertices() {
            prop_assert!(lattice.closure.contains(&BTreeSet::from([v.clone()])));
        }
        for ends in h.edges().values() {
            prop_assert!(lattice.closure.contains(&ends.source));
            prop_assert!(lattice.closure.contains(&ends.range));
        }
        let sets: Vec<&BTreeSet<VertexId>> = lattice.closure.iter().collect();
        for a in &sets {
            for b in &sets {
                let union: BTreeSet<VertexId> = a.union(b).cloned().collect();
                prop_assert!(lattice.closure.contains(&union));
                let inter: BTreeSet<VertexId> = a.intersection(b).cloned().collect();
                prop_assert!(inter.is_empty() || lattice.closure.contains(&inter));
            }
        }
        prop_assert!(lattice.closure.len() <= 1 << h.vertex_count());
    }

    #[test]
    fn serialization_round_trips(h in hypergraph_strategy(6, 5)) {
        let doc = HgDocument {
            name: "prop".into(),
            hypergraph: h,
            citation: None,
            partitions: Default::default(),
        };
        let text = serialize_hg(&doc);
        let back = parse_hg(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        // serialize ∘ parse is the canonical form, hence idempotent
        prop_assert_eq!(serialize_hg(&back), text);
        let json = serialize_hg_json(&doc);
        prop_assert_eq!(&parse_hg(&json).unwrap(), &doc);
    }

    #[test]
    fn normalization_terminates_and_is_idempotent(
        h in hypergraph_strategy(6, 4),
        seed in any::<u64>(),
    ) {
        let rs = derive_forced_equalities(&h);
        let mut rng = Rng(seed);
        let x = random_expression(&mut rng, &h, 4, 12);
        let (normal, steps) = normalize_counting(&x, &rs).unwrap();
        // far below the bound; hitting it would mean runaway rewriting
        prop_assert!(steps < 100_000, "steps = {steps}");
        prop_assert_eq!(normalize(&normal, &rs).unwrap(), normal);
    }

    #[test]
    fn normalization_commutes_with_adjoint(
        h in hypergraph_strategy(5, 4),
        seed in any::<u64>(),
    ) {
        let rs = derive_forced_equalities(&h);
        let mut rng = Rng(seed);
        let x = random_expression(&mut rng, &h, 3, 8);
        let lhs = normalize(&x.adjoint(), &rs).unwrap();
        let rhs = normalize(&x, &rs).unwrap().adjoint();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn full_vertex_sum_acts_as_the_unit(h in hypergraph_strategy(5, 4)) {
        let rs = derive_forced_equalities(&h);
        let unit = rs.unit_expression();
        let mut generators: Vec<StarExpression> = h
            .vertices()
            .iter()
            .map(|v| StarExpression::from_word(Word(vec![Generator::ProjV(v.clone())])))
            .collect();
        for e in h.edges().keys() {
            generators.push(StarExpression::iso(e));
            generators.push(StarExpression::iso_star(e));
        }
        for g in generators {
            prop_assert_eq!(
                equal_mod_relations(&unit.mul(&g), &g, &rs).unwrap(),
                Equality::Equal
            );
            prop_assert_eq!(
                equal_mod_relations(&g.mul(&unit), &g, &rs).unwrap(),
                Equality::Equal
            );
        }
    }

    #[test]
    fn canonical_key_is_relabeling_invariant(
        h in hypergraph_strategy(6, 5),
        shift in 0usize..7,
    ) {
        use hyperck::canonical::{canonical_key, is_isomorphic};
        // rename vertices by a rotation of the sorted order and tag edges
        let names: Vec<VertexId> = h.vertices().iter().cloned().collect();
        let n = names.len();
        let renamed: std::collections::BTreeMap<&VertexId, String> = names
            .iter()
            .enumerate()
            .map(|(i, v)| (v, format!("u{}", (i + shift) % n)))
            .collect();
        let mut b = Hypergraph::builder();
        for v in h.vertices() {
            b = b.vertex(&renamed[v]);
        }
        for (e, ends) in h.edges() {
            let s: Vec<&str> = ends.source.iter().map(|v| renamed[v].as_str()).collect();
            let r: Vec<&str> = ends.range.iter().map(|v| renamed[v].as_str()).collect();
            b = b.edge(&format!("renamed_{e}"), s, r);
        }
        let relabeled = b.build().unwrap();
        prop_assert_eq!(canonical_key(&h), canonical_key(&relabeled));
        prop_assert!(is_isomorphic(&h, &relabeled));
    }

    #[test]
    fn giut_satisfied_implies_conditions(h in hypergraph_strategy(5, 4)) {
        let status = giut_status(&h);
        if status.verdict == GiutVerdict::Satisfied {
            prop_assert!(h.quasi_perfect_only());
            prop_assert!(h.sinks_sources().0.is_empty());
        }
    }

    #[test]
    fn graph_relation_systems_recover_full_vertex_equalities(h in hypergraph_strategy(5, 5)) {
        prop_assume!(h.classify_kind() == HypergraphKind::Graph);
        let rs = derive_forced_equalities(&h);
        for v in h.vertices() {
            let out = h.outgoing(v);
            if out.is_empty() {
                prop_assert_eq!(rs.forced_vertex(v), None);
            } else {
                prop_assert_eq!(rs.forced_vertex(v), Some(&out));
            }
        }
    }
}
