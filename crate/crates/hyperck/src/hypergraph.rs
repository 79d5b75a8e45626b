//! Finite directed hypergraphs.
//!
//! A hypergraph is a finite vertex set together with edges whose source and
//! range are nonempty vertex *subsets*. Graphs (singleton source and range)
//! and ultragraphs (singleton source) are the two special cases that many
//! downstream checks care about.
//!
//! All sets are ordered (`BTreeSet`/`BTreeMap`) so every iteration order, and
//! therefore every output of this crate, is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a vertex: a nonempty token without whitespace or reserved
/// punctuation (`{ } ; : , | "`), totally ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub String);

/// Identifier of an edge, same token rules as [`VertexId`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub String);

impl VertexId {
    pub fn new(s: impl Into<String>) -> Self {
        VertexId(s.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl EdgeId {
    pub fn new(s: impl Into<String>) -> Self {
        EdgeId(s.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v:{}", self.0)
    }
}

impl fmt::Debug for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e:{}", self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_owned())
    }
}

impl From<&str> for EdgeId {
    fn from(s: &str) -> Self {
        EdgeId(s.to_owned())
    }
}

/// Characters that may not appear in identifiers (they are format/CLI syntax).
pub const RESERVED_ID_CHARS: &[char] = &['{', '}', ';', ':', ',', '|', '"'];

/// Checks the token rules shared by vertex and edge identifiers.
pub fn valid_id_token(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || RESERVED_ID_CHARS.contains(&c))
}

/// Source and range of one hyperedge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEnds {
    pub source: BTreeSet<VertexId>,
    pub range: BTreeSet<VertexId>,
}

impl EdgeEnds {
    pub fn new(
        source: impl IntoIterator<Item = VertexId>,
        range: impl IntoIterator<Item = VertexId>,
    ) -> Self {
        EdgeEnds {
            source: source.into_iter().collect(),
            range: range.into_iter().collect(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("edge {0} has an empty source set")]
    EmptySource(EdgeId),
    #[error("edge {0} has an empty range set")]
    EmptyRange(EdgeId),
    #[error("edge {edge} references vertex {vertex} which is not declared")]
    UnknownVertex { edge: EdgeId, vertex: VertexId },
    #[error("duplicate identifier {0}")]
    DuplicateId(String),
    #[error("invalid identifier token {0:?}")]
    InvalidId(String),
}

/// A finite directed hypergraph. Immutable once built; use [`Hypergraph::builder`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, EdgeEnds>,
}

/// Structural class of a hypergraph, by the cardinality of edge endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HypergraphKind {
    /// `|s(e)| = |r(e)| = 1` for every edge.
    Graph,
    /// `|s(e)| = 1` for every edge, and not a graph.
    Ultragraph,
    /// Everything else.
    GeneralHypergraph,
}

impl fmt::Display for HypergraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypergraphKind::Graph => write!(f, "graph"),
            HypergraphKind::Ultragraph => write!(f, "ultragraph"),
            HypergraphKind::GeneralHypergraph => write!(f, "hypergraph"),
        }
    }
}

/// How a sequence of edges composes, from strongest to weakest.
///
/// A perfect path also satisfies the quasi-perfect and partial predicates;
/// the classifier returns the strongest class that holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathClass {
    /// `s(next) = r(prev)` at every joint.
    Perfect,
    /// `s(next) ⊆ r(prev)` at every joint.
    QuasiPerfect,
    /// `s(next) ∩ r(prev) ≠ ∅` at every joint.
    Partial,
    NotComposable,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("path must contain at least one edge")]
    EmptyPath,
}

impl Hypergraph {
    pub fn builder() -> HypergraphBuilder {
        HypergraphBuilder::default()
    }

    /// Builds from already-structured parts and validates.
    pub fn from_parts(
        vertices: BTreeSet<VertexId>,
        edges: BTreeMap<EdgeId, EdgeEnds>,
    ) -> Result<Self, ValidationError> {
        let h = Hypergraph { vertices, edges };
        h.validate()?;
        Ok(h)
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeMap<EdgeId, EdgeEnds> {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }

    pub fn edge(&self, e: &EdgeId) -> Option<&EdgeEnds> {
        self.edges.get(e)
    }

    pub fn source(&self, e: &EdgeId) -> Result<&BTreeSet<VertexId>, QueryError> {
        self.edges
            .get(e)
            .map(|ends| &ends.source)
            .ok_or_else(|| QueryError::UnknownEdge(e.clone()))
    }

    pub fn range(&self, e: &EdgeId) -> Result<&BTreeSet<VertexId>, QueryError> {
        self.edges
            .get(e)
            .map(|ends| &ends.range)
            .ok_or_else(|| QueryError::UnknownEdge(e.clone()))
    }

    /// Edges whose source contains `v`.
    pub fn outgoing(&self, v: &VertexId) -> BTreeSet<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, ends)| ends.source.contains(v))
            .map(|(e, _)| e.clone())
            .collect()
    }

    /// Edges whose range contains `v`.
    pub fn incoming(&self, v: &VertexId) -> BTreeSet<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, ends)| ends.range.contains(v))
            .map(|(e, _)| e.clone())
            .collect()
    }

    /// Checks every structural invariant: identifier tokens, nonempty
    /// endpoints, and endpoint vertices being declared.
    pub fn validate(&self) -> Result<(), ValidationError> {
        for v in &self.vertices {
            if !valid_id_token(v.as_str()) {
                return Err(ValidationError::InvalidId(v.0.clone()));
            }
        }
        for (e, ends) in &self.edges {
            if !valid_id_token(e.as_str()) {
                return Err(ValidationError::InvalidId(e.0.clone()));
            }
            if ends.source.is_empty() {
                return Err(ValidationError::EmptySource(e.clone()));
            }
            if ends.range.is_empty() {
                return Err(ValidationError::EmptyRange(e.clone()));
            }
            for v in ends.source.iter().chain(ends.range.iter()) {
                if !self.vertices.contains(v) {
                    return Err(ValidationError::UnknownVertex {
                        edge: e.clone(),
                        vertex: v.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn classify_kind(&self) -> HypergraphKind {
        let singleton_sources = self.edges.values().all(|ends| ends.source.len() == 1);
        let singleton_ranges = self.edges.values().all(|ends| ends.range.len() == 1);
        if singleton_sources && singleton_ranges {
            HypergraphKind::Graph
        } else if singleton_sources {
            HypergraphKind::Ultragraph
        } else {
            HypergraphKind::GeneralHypergraph
        }
    }

    /// Sinks emit no edge (`v ∉ s(e)` for all `e`); sources receive none
    /// (`v ∉ r(e)` for all `e`).
    pub fn sinks_sources(&self) -> (BTreeSet<VertexId>, BTreeSet<VertexId>) {
        let mut emitting: BTreeSet<&VertexId> = BTreeSet::new();
        let mut receiving: BTreeSet<&VertexId> = BTreeSet::new();
        for ends in self.edges.values() {
            emitting.extend(ends.source.iter());
            receiving.extend(ends.range.iter());
        }
        let sinks = self
            .vertices
            .iter()
            .filter(|v| !emitting.contains(v))
            .cloned()
            .collect();
        let sources = self
            .vertices
            .iter()
            .filter(|v| !receiving.contains(v))
            .cloned()
            .collect();
        (sinks, sources)
    }

    pub fn is_sink(&self, v: &VertexId) -> bool {
        self.edges.values().all(|ends| !ends.source.contains(v))
    }

    pub fn is_source(&self, v: &VertexId) -> bool {
        self.edges.values().all(|ends| !ends.range.contains(v))
    }

    /// True iff every edge whose source contains `w` has source exactly `{w}`.
    pub fn is_locally_ultra_at(&self, w: &VertexId) -> Result<bool, QueryError> {
        if !self.vertices.contains(w) {
            return Err(QueryError::UnknownVertex(w.clone()));
        }
        Ok(self
            .edges
            .values()
            .filter(|ends| ends.source.contains(w))
            .all(|ends| ends.source.len() == 1))
    }

    /// Classifies an edge sequence by its strongest composition property.
    /// Single-edge sequences are perfect (there is no joint to test).
    pub fn classify_path(&self, edges: &[EdgeId]) -> Result<PathClass, QueryError> {
        if edges.is_empty() {
            return Err(QueryError::EmptyPath);
        }
        let mut perfect = true;
        let mut quasi = true;
        let mut partial = true;
        for pair in edges.windows(2) {
            let prev_range = self.range(&pair[0])?;
            let next_source = self.source(&pair[1])?;
            perfect &= next_source == prev_range;
            quasi &= next_source.is_subset(prev_range);
            partial &= !next_source.is_disjoint(prev_range);
        }
        // Make sure the trailing edge exists even when there is no pair.
        self.source(edges.last().expect("nonempty"))?;
        self.source(&edges[0])?;
        Ok(if perfect {
            PathClass::Perfect
        } else if quasi {
            PathClass::QuasiPerfect
        } else if partial {
            PathClass::Partial
        } else {
            PathClass::NotComposable
        })
    }

    /// True iff for every ordered edge pair `(e, f)`,
    /// `s(f) ∩ r(e) ≠ ∅` implies `s(f) ⊆ r(e)`, i.e. every composable pair of
    /// edges forms a quasi-perfect (or perfect) path.
    pub fn quasi_perfect_only(&self) -> bool {
        for e in self.edges.values() {
            for f in self.edges.values() {
                if !f.source.is_disjoint(&e.range) && !f.source.is_subset(&e.range) {
                    return false;
                }
            }
        }
        true
    }

    /// Generalized-vertex lattice: singletons and edge endpoints, closed
    /// under pairwise union and intersection. The empty set is not stored
    /// (its projection is zero).
    pub fn gen_vertex_lattice(&self) -> GenVertexLattice {
        let mut base: BTreeSet<BTreeSet<VertexId>> = BTreeSet::new();
        for v in &self.vertices {
            base.insert(BTreeSet::from([v.clone()]));
        }
        for ends in self.edges.values() {
            base.insert(ends.source.clone());
            base.insert(ends.range.clone());
        }
        let mut closure = base.clone();
        loop {
            let mut fresh: BTreeSet<BTreeSet<VertexId>> = BTreeSet::new();
            let sets: Vec<&BTreeSet<VertexId>> = closure.iter().collect();
            for (i, a) in sets.iter().enumerate() {
                for b in sets.iter().skip(i + 1) {
                    let union: BTreeSet<VertexId> = a.union(b).cloned().collect();
                    if !closure.contains(&union) {
                        fresh.insert(union);
                    }
                    let inter: BTreeSet<VertexId> = a.intersection(b).cloned().collect();
                    if !inter.is_empty() && !closure.contains(&inter) {
                        fresh.insert(inter);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            closure.extend(fresh);
        }
        GenVertexLattice { base, closure }
    }
}

/// The base family and its union/intersection closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenVertexLattice {
    pub base: BTreeSet<BTreeSet<VertexId>>,
    pub closure: BTreeSet<BTreeSet<VertexId>>,
}

impl GenVertexLattice {
    pub fn contains(&self, set: &BTreeSet<VertexId>) -> bool {
        self.closure.contains(set)
    }
}

/// Collects vertices and edges as plain strings, then validates on `build`.
#[derive(Default, Clone)]
pub struct HypergraphBuilder {
    vertices: Vec<String>,
    edges: Vec<(String, Vec<String>, Vec<String>)>,
}

impl HypergraphBuilder {
    pub fn vertex(mut self, id: &str) -> Self {
        self.vertices.push(id.to_owned());
        self
    }

    pub fn vertices<'a>(mut self, ids: impl IntoIterator<Item = &'a str>) -> Self {
        self.vertices.extend(ids.into_iter().map(str::to_owned));
        self
    }

    pub fn edge<'a>(
        mut self,
        id: &str,
        source: impl IntoIterator<Item = &'a str>,
        range: impl IntoIterator<Item = &'a str>,
    ) -> Self {
        self.edges.push((
            id.to_owned(),
            source.into_iter().map(str::to_owned).collect(),
            range.into_iter().map(str::to_owned).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<Hypergraph, ValidationError> {
        let mut vertices = BTreeSet::new();
        for v in &self.vertices {
            if !vertices.insert(VertexId::new(v.clone())) {
                return Err(ValidationError::DuplicateId(v.clone()));
            }
        }
        let mut edges = BTreeMap::new();
        for (id, src, rng) in &self.edges {
            let ends = EdgeEnds::new(
                src.iter().map(|s| VertexId::new(s.clone())),
                rng.iter().map(|s| VertexId::new(s.clone())),
            );
            if edges.insert(EdgeId::new(id.clone()), ends).is_some() {
                return Err(ValidationError::DuplicateId(id.clone()));
            }
        }
        Hypergraph::from_parts(vertices, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Toeplitz-algebra hypergraph: one edge `{w} -> {v, w}`.
    pub fn toeplitz1() -> Hypergraph {
        Hypergraph::builder()
            .vertices(["v", "w"])
            .edge("e", ["w"], ["v", "w"])
            .build()
            .unwrap()
    }

    /// Cuntz-algebra hypergraph on `n` vertices: `s(e_i) = {v_i}`, `r(e_i) = V`.
    fn cuntz(n: usize) -> Hypergraph {
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let mut b = Hypergraph::builder();
        for v in &names {
            b = b.vertex(v);
        }
        for (i, v) in names.iter().enumerate() {
            b = b.edge(
                &format!("e{}", i + 1),
                [v.as_str()],
                names.iter().map(String::as_str),
            );
        }
        b.build().unwrap()
    }

    /// Single full edge `s(e) = r(e) = V` on `n` vertices.
    fn full_single_edge(n: usize) -> Hypergraph {
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let mut b = Hypergraph::builder();
        for v in &names {
            b = b.vertex(v);
        }
        b = b.edge(
            "e1",
            names.iter().map(String::as_str),
            names.iter().map(String::as_str),
        );
        b.build().unwrap()
    }

    #[test]
    fn validation_accepts_toeplitz() {
        assert!(toeplitz1().validate().is_ok());
    }

    #[test]
    fn validation_rejects_empty_source() {
        let err = Hypergraph::builder()
            .vertex("v")
            .edge("e", [], ["v"])
            .build()
            .unwrap_err();
        assert_eq!(err, ValidationError::EmptySource(EdgeId::new("e")));
    }

    #[test]
    fn validation_rejects_empty_range() {
        let err = Hypergraph::builder()
            .vertex("v")
            .edge("e", ["v"], [])
            .build()
            .unwrap_err();
        assert_eq!(err, ValidationError::EmptyRange(EdgeId::new("e")));
    }

    #[test]
    fn validation_rejects_unknown_vertex() {
        let err = Hypergraph::builder()
            .vertex("v")
            .edge("e", ["v"], ["x"])
            .build()
            .unwrap_err();
        assert_eq!(
            err,
            ValidationError::UnknownVertex {
                edge: EdgeId::new("e"),
                vertex: VertexId::new("x"),
            }
        );
    }

    #[test]
    fn validation_rejects_duplicates_and_bad_tokens() {
        let err = Hypergraph::builder()
            .vertex("v")
            .vertex("v")
            .build()
            .unwrap_err();
        assert_eq!(err, ValidationError::DuplicateId("v".into()));
        let err = Hypergraph::builder().vertex("a b").build().unwrap_err();
        assert_eq!(err, ValidationError::InvalidId("a b".into()));
    }

    #[test]
    fn classify_kind_cases() {
        let graph = Hypergraph::builder()
            .vertices(["v", "w"])
            .edge("e", ["v"], ["w"])
            .build()
            .unwrap();
        assert_eq!(graph.classify_kind(), HypergraphKind::Graph);

        let ultra = Hypergraph::builder()
            .vertices(["v", "v1", "v2"])
            .edge("e", ["v"], ["v1", "v2"])
            .build()
            .unwrap();
        assert_eq!(ultra.classify_kind(), HypergraphKind::Ultragraph);

        assert_eq!(
            full_single_edge(2).classify_kind(),
            HypergraphKind::GeneralHypergraph
        );
        // Toeplitz's first shape has a singleton source, so it is an ultragraph.
        assert_eq!(toeplitz1().classify_kind(), HypergraphKind::Ultragraph);
    }

    #[test]
    fn sinks_and_sources() {
        let (sinks, sources) = toeplitz1().sinks_sources();
        assert_eq!(sinks, BTreeSet::from([VertexId::new("v")]));
        assert!(sources.is_empty());

        let lone = Hypergraph::builder().vertex("v").build().unwrap();
        let (sinks, sources) = lone.sinks_sources();
        assert_eq!(sinks, BTreeSet::from([VertexId::new("v")]));
        assert_eq!(sources, BTreeSet::from([VertexId::new("v")]));

        let (sinks, sources) = cuntz(3).sinks_sources();
        assert!(sinks.is_empty());
        assert!(sources.is_empty());
    }

    #[test]
    fn locally_ultra() {
        let ultra = Hypergraph::builder()
            .vertices(["v", "v1", "v2"])
            .edge("e", ["v"], ["v1", "v2"])
            .build()
            .unwrap();
        for v in ["v", "v1", "v2"] {
            assert!(ultra.is_locally_ultra_at(&VertexId::new(v)).unwrap());
        }

        let full = full_single_edge(2);
        assert!(!full.is_locally_ultra_at(&VertexId::new("v1")).unwrap());

        let iso = Hypergraph::builder().vertex("z").build().unwrap();
        assert!(iso.is_locally_ultra_at(&VertexId::new("z")).unwrap());
        assert_eq!(
            iso.is_locally_ultra_at(&VertexId::new("missing")),
            Err(QueryError::UnknownVertex(VertexId::new("missing")))
        );
    }

    #[test]
    fn path_classification() {
        let h = cuntz(2);
        assert_eq!(
            h.classify_path(&[EdgeId::new("e1")]).unwrap(),
            PathClass::Perfect
        );
        // s(e_j) is a proper subset of r(e_i) = V, so pairs are quasi-perfect.
        assert_eq!(
            h.classify_path(&[EdgeId::new("e1"), EdgeId::new("e2")])
                .unwrap(),
            PathClass::QuasiPerfect
        );

        let line = Hypergraph::builder()
            .vertices(["a", "b", "c"])
            .edge("e", ["a"], ["b"])
            .edge("f", ["c"], ["a"])
            .build()
            .unwrap();
        assert_eq!(
            line.classify_path(&[EdgeId::new("e"), EdgeId::new("f")])
                .unwrap(),
            PathClass::NotComposable
        );
        assert_eq!(line.classify_path(&[]), Err(QueryError::EmptyPath));
        assert_eq!(
            line.classify_path(&[EdgeId::new("zz")]),
            Err(QueryError::UnknownEdge(EdgeId::new("zz")))
        );
    }

    #[test]
    fn partial_but_not_quasi() {
        let h = Hypergraph::builder()
            .vertices(["a", "x", "y", "z"])
            .edge("e", ["a"], ["x", "y"])
            .edge("f", ["y", "z"], ["a"])
            .build()
            .unwrap();
        assert_eq!(
            h.classify_path(&[EdgeId::new("e"), EdgeId::new("f")])
                .unwrap(),
            PathClass::Partial
        );
        assert!(!h.quasi_perfect_only());
    }

    #[test]
    fn quasi_perfect_only_cases() {
        // Ultragraphs always qualify: singleton sources meet a range iff contained.
        let ultra = Hypergraph::builder()
            .vertices(["v", "v1", "v2"])
            .edge("e", ["v"], ["v1", "v2"])
            .edge("f", ["v1"], ["v"])
            .build()
            .unwrap();
        assert!(ultra.quasi_perfect_only());

        let edgeless = Hypergraph::builder().vertex("v").build().unwrap();
        assert!(edgeless.quasi_perfect_only());

        assert!(cuntz(3).quasi_perfect_only());
        assert!(full_single_edge(3).quasi_perfect_only());
    }

    #[test]
    fn lattice_small_cases() {
        let lone = Hypergraph::builder().vertex("v").build().unwrap();
        let lat = lone.gen_vertex_lattice();
        assert_eq!(lat.closure.len(), 1);

        let lat = toeplitz1().gen_vertex_lattice();
        let v = |s: &str| VertexId::new(s);
        let expect: BTreeSet<BTreeSet<VertexId>> = BTreeSet::from([
            BTreeSet::from([v("v")]),
            BTreeSet::from([v("w")]),
            BTreeSet::from([v("v"), v("w")]),
        ]);
        assert_eq!(lat.closure, expect);

        let lat = cuntz(2).gen_vertex_lattice();
        assert_eq!(lat.closure.len(), 3);
    }

    #[test]
    fn lattice_closure_is_closed() {
        let h = Hypergraph::builder()
            .vertices(["a", "b", "c", "d"])
            .edge("e", ["a", "b"], ["b", "c"])
            .edge("f", ["c", "d"], ["a"])
            .build()
            .unwrap();
        let lat = h.gen_vertex_lattice();
        for x in &lat.closure {
            for y in &lat.closure {
                let u: BTreeSet<VertexId> = x.union(y).cloned().collect();
                assert!(lat.closure.contains(&u));
                let i: BTreeSet<VertexId> = x.intersection(y).cloned().collect();
                assert!(i.is_empty() || lat.closure.contains(&i));
            }
        }
        assert!(lat.closure.len() <= 1 << h.vertex_count());
    }
}
