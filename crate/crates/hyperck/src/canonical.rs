//! Canonical labeling of hypergraphs, used to decide isomorphism
//! "up to relabeling" of vertices and edges.
//!
//! Two hypergraphs are isomorphic when some vertex bijection carries the edge
//! multiset of one onto the other; parallel edges are interchangeable, so no
//! explicit edge bijection has to be searched. The canonical key is the
//! lexicographically least encoding of the edge multiset over all admissible
//! vertex orderings, found by color refinement plus individualization. A
//! cheap transposition check prunes branches that differ by an evident
//! automorphism, which keeps fully symmetric inputs (all edges touching every
//! vertex) from exploding. Intended for the small instances handled here
//! (up to roughly a dozen vertices).

use std::collections::BTreeMap;

use crate::hypergraph::{Hypergraph, VertexId};

/// Order-invariant fingerprint of a hypergraph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalKey {
    vertex_count: usize,
    edges: Vec<(Vec<usize>, Vec<usize>)>,
}

/// True iff the two hypergraphs are isomorphic (vertices and edges may be
/// renamed arbitrarily).
pub fn is_isomorphic(a: &Hypergraph, b: &Hypergraph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    canonical_key(a) == canonical_key(b)
}

pub fn canonical_key(h: &Hypergraph) -> CanonicalKey {
    let verts: Vec<&VertexId> = h.vertices().iter().collect();
    let n = verts.len();
    let index: BTreeMap<&VertexId, usize> =
        verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let edges: Vec<(Vec<usize>, Vec<usize>)> = h
        .edges()
        .values()
        .map(|ends| {
            let s: Vec<usize> = ends.source.iter().map(|v| index[v]).collect();
            let r: Vec<usize> = ends.range.iter().map(|v| index[v]).collect();
            (s, r)
        })
        .collect();
    let mut search = Search {
        n,
        edges,
        best: None,
    };
    search.run(vec![0; n]);
    CanonicalKey {
        vertex_count: n,
        edges: search.best.unwrap_or_default(),
    }
}

struct Search {
    n: usize,
    /// Edge endpoints as indices into the initial vertex order.
    edges: Vec<(Vec<usize>, Vec<usize>)>,
    best: Option<Vec<(Vec<usize>, Vec<usize>)>>,
}

impl Search {
    fn run(&mut self, colors: Vec<usize>) {
        let colors = self.refine(colors);
        match self.first_split_class(&colors) {
            None => {
                // Discrete coloring: each color is one vertex; encode and keep the min.
                let encoded = self.encode(&colors);
                if self.best.as_ref().is_none_or(|b| encoded < *b) {
                    self.best = Some(encoded);
                }
            }
            Some(class) => {
                let fresh = self.n; // strictly above every existing color
                let mut seen_reps: Vec<usize> = Vec::new();
                for &v in &class {
                    if seen_reps.iter().any(|&r| self.swap_is_automorphism(r, v)) {
                        continue;
                    }
                    seen_reps.push(v);
                    let mut next = colors.clone();
                    next[v] = fresh;
                    self.run(next);
                }
            }
        }
    }

    /// Stable color refinement; signatures use only colors and set sizes,
    /// never the input labels.
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        type VertexSignature = (usize, Vec<Vec<usize>>, Vec<Vec<usize>>);
        loop {
            let mut sigs: Vec<VertexSignature> = (0..self.n)
                .map(|v| {
                    let mut out_sigs: Vec<Vec<usize>> = Vec::new();
                    let mut in_sigs: Vec<Vec<usize>> = Vec::new();
                    for (s, r) in &self.edges {
                        let sig = || {
                            let mut sc: Vec<usize> = s.iter().map(|&u| colors[u]).collect();
                            let mut rc: Vec<usize> = r.iter().map(|&u| colors[u]).collect();
                            sc.sort_unstable();
                            rc.sort_unstable();
                            let mut flat = vec![sc.len(), rc.len()];
                            flat.extend(sc);
                            flat.push(usize::MAX);
                            flat.extend(rc);
                            flat
                        };
                        if s.contains(&v) {
                            out_sigs.push(sig());
                        }
                        if r.contains(&v) {
                            in_sigs.push(sig());
                        }
                    }
                    out_sigs.sort();
                    in_sigs.sort();
                    (colors[v], out_sigs, in_sigs)
                })
                .collect();
            let mut unique = sigs.clone();
            unique.sort();
            unique.dedup();
            let next: Vec<usize> = sigs
                .drain(..)
                .map(|sig| unique.binary_search(&sig).expect("own signature"))
                .collect();
            let classes_before = count_classes(&colors);
            let classes_after = count_classes(&next);
            colors = next;
            if classes_after == classes_before {
                return colors;
            }
        }
    }

    /// Vertices of the first (lowest-color) class with more than one member.
    fn first_split_class(&self, colors: &[usize]) -> Option<Vec<usize>> {
        let mut by_color: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            by_color.entry(c).or_default().push(v);
        }
        by_color.into_values().find(|class| class.len() > 1)
    }

    /// Does swapping vertices `a` and `b` leave the edge multiset unchanged?
    fn swap_is_automorphism(&self, a: usize, b: usize) -> bool {
        let swap = |x: usize| {
            if x == a {
                b
            } else if x == b {
                a
            } else {
                x
            }
        };
        let mut original: Vec<(Vec<usize>, Vec<usize>)> = self
            .edges
            .iter()
            .map(|(s, r)| {
                let mut s = s.clone();
                let mut r = r.clone();
                s.sort_unstable();
                r.sort_unstable();
                (s, r)
            })
            .collect();
        let mut swapped: Vec<(Vec<usize>, Vec<usize>)> = self
            .edges
            .iter()
            .map(|(s, r)| {
                let mut s: Vec<usize> = s.iter().map(|&x| swap(x)).collect();
                let mut r: Vec<usize> = r.iter().map(|&x| swap(x)).collect();
                s.sort_unstable();
                r.sort_unstable();
                (s, r)
            })
            .collect();
        original.sort();
        swapped.sort();
        original == swapped
    }

    /// Encoding under a discrete coloring: relabel each vertex by its color
    /// rank and emit the sorted edge list.
    fn encode(&self, colors: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut ranked: Vec<usize> = (0..self.n).collect();
        ranked.sort_by_key(|&v| colors[v]);
        let mut position = vec![0usize; self.n];
        for (rank, &v) in ranked.iter().enumerate() {
            position[v] = rank;
        }
        let mut out: Vec<(Vec<usize>, Vec<usize>)> = self
            .edges
            .iter()
            .map(|(s, r)| {
                let mut s: Vec<usize> = s.iter().map(|&v| position[v]).collect();
                let mut r: Vec<usize> = r.iter().map(|&v| position[v]).collect();
                s.sort_unstable();
                r.sort_unstable();
                (s, r)
            })
            .collect();
        out.sort();
        out
    }
}

fn count_classes(colors: &[usize]) -> usize {
    let mut seen: Vec<usize> = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}
