//! Hypergraph-to-hypergraph constructions: range decomposition, edge merging,
//! the dual graph, moves S/R/O/I, the indelay, the attach product, and
//! vertex-subset restriction.
//!
//! Every operation is a pure function; the input value is never modified.
//! Freshly created identifiers are composite tokens that carry their
//! provenance (`e@v` for range pieces, `e#j` for split copies, `w^j` for
//! vertex copies, `f_j@w` for delay edges, `g(e+f)` for merges) and are
//! collision-checked against existing names, gaining an integer suffix if
//! needed.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{EdgeEnds, EdgeId, Hypergraph, VertexId};

/// One-to-one renamings performed by a transform. Identifiers that keep
/// their name are omitted; identifiers that are split into several copies or
/// merged away have no entry (their provenance is readable from the composite
/// fresh names).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Relabeling {
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
}

/// Conditions under which a transform result is outside the cleanly
/// understood regime; the construction is still performed as defined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TransformWarning {
    /// Move R applied where an edge into `w` has a range beyond `{w}`;
    /// the replacement edge mixes the two ranges.
    MoveRWeakened { edges: BTreeSet<EdgeId> },
    /// Move I applied where an edge both enters and leaves `w`; all its
    /// copies are retargeted by the block of the original edge.
    MoveILoopOverlap { edges: BTreeSet<EdgeId> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformResult {
    pub hypergraph: Hypergraph,
    pub relabeling: Relabeling,
    pub warnings: Vec<TransformWarning>,
}

impl TransformResult {
    fn new(hypergraph: Hypergraph) -> Self {
        TransformResult {
            hypergraph,
            relabeling: Relabeling::default(),
            warnings: Vec::new(),
        }
    }
}

/// An ordered list of disjoint nonempty edge-id blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition(pub Vec<BTreeSet<EdgeId>>);

impl Partition {
    pub fn singletons(edges: impl IntoIterator<Item = EdgeId>) -> Self {
        Partition(edges.into_iter().map(|e| BTreeSet::from([e])).collect())
    }

    pub fn single_block(edges: impl IntoIterator<Item = EdgeId>) -> Self {
        Partition(vec![edges.into_iter().collect()])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the block containing `e`, if any.
    fn block_of(&self, e: &EdgeId) -> Option<usize> {
        self.0.iter().position(|b| b.contains(e))
    }

    /// Blocks must be nonempty, pairwise disjoint, and cover `required`.
    pub fn validate_over(&self, required: &BTreeSet<EdgeId>) -> Result<(), TransformError> {
        let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
        for block in &self.0 {
            if block.is_empty() {
                return Err(TransformError::BadPartition("empty block".into()));
            }
            for e in block {
                if !seen.insert(e.clone()) {
                    return Err(TransformError::BadPartition(format!(
                        "edge {e} appears in two blocks"
                    )));
                }
            }
        }
        if &seen != required {
            return Err(TransformError::BadPartition(format!(
                "blocks cover {{{}}} but must cover {{{}}}",
                join(&seen),
                join(required)
            )));
        }
        Ok(())
    }
}

fn join(set: &BTreeSet<EdgeId>) -> String {
    set.iter().map(EdgeId::as_str).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("edges {0} and {1} have different sources")]
    SourceMismatch(EdgeId, EdgeId),
    #[error("edges {0} and {1} have overlapping ranges")]
    RangesOverlap(EdgeId, EdgeId),
    #[error("vertex {0} is not a source")]
    NotASource(VertexId),
    #[error("vertex {0} does not emit exactly one edge with source {{{0}}}")]
    EmitsNotOne(VertexId),
    #[error("vertex {0} is not received from exactly one other vertex")]
    MultipleEmitters(VertexId),
    #[error("vertex {0} is a sink")]
    IsSink(VertexId),
    #[error("vertex {0} is a source")]
    IsSourceVertex(VertexId),
    #[error("restriction vertex set is empty")]
    EmptyRestriction,
}

/// Picks `candidate` unless taken, otherwise appends `.2`, `.3`, ...
fn fresh(candidate: String, taken: &mut BTreeSet<String>) -> String {
    let name = if taken.contains(&candidate) {
        let mut k = 2usize;
        loop {
            let probe = format!("{candidate}.{k}");
            if !taken.contains(&probe) {
                break probe;
            }
            k += 1;
        }
    } else {
        candidate
    };
    taken.insert(name.clone());
    name
}

fn edge_name_pool(h: &Hypergraph) -> BTreeSet<String> {
    h.edges().keys().map(|e| e.0.clone()).collect()
}

fn vertex_name_pool(h: &Hypergraph) -> BTreeSet<String> {
    h.vertices().iter().map(|v| v.0.clone()).collect()
}

fn build(vertices: BTreeSet<VertexId>, edges: BTreeMap<EdgeId, EdgeEnds>) -> Hypergraph {
    Hypergraph::from_parts(vertices, edges).expect("transform output must be a valid hypergraph")
}

/// Splits every range into its single vertices: edge `e` with `v ∈ r(e)`
/// becomes `e@v` with range `{v}` and the source of `e`. The resulting
/// hypergraph generates the same algebra and has only singleton ranges, so
/// ultragraph inputs come out as graphs.
pub fn decompose_ranges(h: &Hypergraph) -> TransformResult {
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut edges = BTreeMap::new();
    let mut relabeling = Relabeling::default();
    for (e, ends) in h.edges() {
        for v in &ends.range {
            let id = EdgeId::new(fresh(format!("{e}@{v}"), &mut taken));
            if ends.range.len() == 1 {
                relabeling.edge_map.insert(e.clone(), id.clone());
            }
            edges.insert(
                id,
                EdgeEnds {
                    source: ends.source.clone(),
                    range: BTreeSet::from([v.clone()]),
                },
            );
        }
    }
    TransformResult {
        hypergraph: build(h.vertices().clone(), edges),
        relabeling,
        warnings: Vec::new(),
    }
}

/// Like [`decompose_ranges`] but splitting each range along a given partition
/// into nonempty disjoint blocks. Edges without an entry keep their whole
/// range as a single block.
pub fn decompose_ranges_partitioned(
    h: &Hypergraph,
    partitions: &BTreeMap<EdgeId, Vec<BTreeSet<VertexId>>>,
) -> Result<TransformResult, TransformError> {
    for e in partitions.keys() {
        if !h.edges().contains_key(e) {
            return Err(TransformError::UnknownEdge(e.clone()));
        }
    }
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut edges = BTreeMap::new();
    let mut relabeling = Relabeling::default();
    for (e, ends) in h.edges() {
        let whole = vec![ends.range.clone()];
        let blocks = partitions.get(e).unwrap_or(&whole);
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        for block in blocks {
            if block.is_empty() {
                return Err(TransformError::BadPartition(format!(
                    "edge {e}: empty block"
                )));
            }
            for v in block {
                if !seen.insert(v.clone()) {
                    return Err(TransformError::BadPartition(format!(
                        "edge {e}: vertex {v} in two blocks"
                    )));
                }
            }
        }
        if seen != ends.range {
            return Err(TransformError::BadPartition(format!(
                "edge {e}: blocks must cover exactly the range"
            )));
        }
        for block in blocks {
            let label = block
                .iter()
                .map(VertexId::as_str)
                .collect::<Vec<_>>()
                .join("+");
            let id = EdgeId::new(fresh(format!("{e}@{label}"), &mut taken));
            if blocks.len() == 1 {
                relabeling.edge_map.insert(e.clone(), id.clone());
            }
            edges.insert(
                id,
                EdgeEnds {
                    source: ends.source.clone(),
                    range: block.clone(),
                },
            );
        }
    }
    Ok(TransformResult {
        hypergraph: build(h.vertices().clone(), edges),
        relabeling,
        warnings: Vec::new(),
    })
}

/// Replaces two edges with equal sources and disjoint ranges by one edge
/// whose range is the union.
pub fn merge_edges(
    h: &Hypergraph,
    e: &EdgeId,
    f: &EdgeId,
) -> Result<TransformResult, TransformError> {
    let ee = h
        .edge(e)
        .ok_or_else(|| TransformError::UnknownEdge(e.clone()))?;
    let fe = h
        .edge(f)
        .ok_or_else(|| TransformError::UnknownEdge(f.clone()))?;
    if e == f {
        return Err(TransformError::RangesOverlap(e.clone(), f.clone()));
    }
    if ee.source != fe.source {
        return Err(TransformError::SourceMismatch(e.clone(), f.clone()));
    }
    if !ee.range.is_disjoint(&fe.range) {
        return Err(TransformError::RangesOverlap(e.clone(), f.clone()));
    }
    let mut edges = h.edges().clone();
    edges.remove(e);
    edges.remove(f);
    let mut taken: BTreeSet<String> = edges.keys().map(|x| x.0.clone()).collect();
    let g = EdgeId::new(fresh(format!("g({e}+{f})"), &mut taken));
    edges.insert(
        g,
        EdgeEnds {
            source: ee.source.clone(),
            range: ee.range.union(&fe.range).cloned().collect(),
        },
    );
    Ok(TransformResult::new(build(h.vertices().clone(), edges)))
}

/// The dual graph: one vertex per edge of `h`, and an arrow `(e, f)` whenever
/// `s(f)` meets `r(e)`. The output is always a graph (or edgeless).
pub fn dual_graph(h: &Hypergraph) -> Hypergraph {
    let mut vertices: BTreeSet<VertexId> = BTreeSet::new();
    for e in h.edges().keys() {
        vertices.insert(VertexId::new(e.0.clone()));
    }
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut edges = BTreeMap::new();
    for (e, e_ends) in h.edges() {
        for (f, f_ends) in h.edges() {
            if !f_ends.source.is_disjoint(&e_ends.range) {
                let id = EdgeId::new(fresh(format!("{e}.{f}"), &mut taken));
                edges.insert(
                    id,
                    EdgeEnds {
                        source: BTreeSet::from([VertexId::new(e.0.clone())]),
                        range: BTreeSet::from([VertexId::new(f.0.clone())]),
                    },
                );
            }
        }
    }
    build(vertices, edges)
}

/// Move S: removes a source vertex together with every edge it emits.
pub fn move_s(h: &Hypergraph, w: &VertexId) -> Result<TransformResult, TransformError> {
    if !h.has_vertex(w) {
        return Err(TransformError::UnknownVertex(w.clone()));
    }
    if !h.is_source(w) {
        return Err(TransformError::NotASource(w.clone()));
    }
    let vertices: BTreeSet<VertexId> = h.vertices().iter().filter(|v| *v != w).cloned().collect();
    let edges: BTreeMap<EdgeId, EdgeEnds> = h
        .edges()
        .iter()
        .filter(|(_, ends)| !ends.source.contains(w))
        .map(|(e, ends)| (e.clone(), ends.clone()))
        .collect();
    Ok(TransformResult::new(build(vertices, edges)))
}

/// Move R: removes a vertex `w` that emits exactly one edge `f` (with source
/// exactly `{w}`) and is reached from exactly one other vertex. Every edge
/// into `w` is replaced by a composite that jumps straight to `r(f)`.
///
/// When some edge into `w` has a range beyond `{w}` the construction still
/// applies but leaves the cleanly understood regime, which is reported as a
/// [`TransformWarning::MoveRWeakened`].
pub fn move_r(h: &Hypergraph, w: &VertexId) -> Result<TransformResult, TransformError> {
    if !h.has_vertex(w) {
        return Err(TransformError::UnknownVertex(w.clone()));
    }
    let out = h.outgoing(w);
    if out.len() != 1 {
        return Err(TransformError::EmitsNotOne(w.clone()));
    }
    let f = out.into_iter().next().expect("one edge");
    let f_ends = h.edge(&f).expect("edge exists").clone();
    if f_ends.source.len() != 1 {
        return Err(TransformError::EmitsNotOne(w.clone()));
    }
    let incoming = h.incoming(w);
    let mut emitters: BTreeSet<VertexId> = BTreeSet::new();
    for e in &incoming {
        emitters.extend(h.edge(e).expect("edge exists").source.iter().cloned());
    }
    if emitters.len() != 1 || emitters.contains(w) {
        return Err(TransformError::MultipleEmitters(w.clone()));
    }

    let vertices: BTreeSet<VertexId> = h.vertices().iter().filter(|v| *v != w).cloned().collect();
    let mut edges: BTreeMap<EdgeId, EdgeEnds> = h
        .edges()
        .iter()
        .filter(|(e, _)| **e != f && !incoming.contains(*e))
        .map(|(e, ends)| (e.clone(), ends.clone()))
        .collect();
    let mut taken: BTreeSet<String> = edges.keys().map(|x| x.0.clone()).collect();
    let mut relabeling = Relabeling::default();
    let mut widened: BTreeSet<EdgeId> = BTreeSet::new();
    for e in &incoming {
        let ends = h.edge(e).expect("edge exists");
        if ends.range.len() > 1 {
            widened.insert(e.clone());
        }
        let id = EdgeId::new(fresh(format!("{e}_{f}"), &mut taken));
        relabeling.edge_map.insert(e.clone(), id.clone());
        let mut range: BTreeSet<VertexId> =
            ends.range.iter().filter(|v| *v != w).cloned().collect();
        range.extend(f_ends.range.iter().cloned());
        edges.insert(
            id,
            EdgeEnds {
                source: ends.source.clone(),
                range,
            },
        );
    }
    let warnings = if widened.is_empty() {
        Vec::new()
    } else {
        vec![TransformWarning::MoveRWeakened { edges: widened }]
    };
    Ok(TransformResult {
        hypergraph: build(vertices, edges),
        relabeling,
        warnings,
    })
}

fn vertex_copies(h: &Hypergraph, w: &VertexId, n: usize) -> (BTreeSet<VertexId>, Vec<VertexId>) {
    let mut taken = vertex_name_pool(h);
    taken.remove(&w.0);
    let copies: Vec<VertexId> = (1..=n)
        .map(|i| VertexId::new(fresh(format!("{w}^{i}"), &mut taken)))
        .collect();
    let mut vertices: BTreeSet<VertexId> =
        h.vertices().iter().filter(|v| *v != w).cloned().collect();
    vertices.extend(copies.iter().cloned());
    (vertices, copies)
}

/// Move O (outsplitting): splits `w` into `w^1..w^n` along a partition of its
/// outgoing edges. Edges into `w` are copied `n` times, the first copy
/// keeping the rest of the range plus `w^1` and copy `i > 1` pointing at
/// `w^i` alone; sources route each outgoing edge to the copy of its block.
pub fn move_o(
    h: &Hypergraph,
    w: &VertexId,
    partition: &Partition,
) -> Result<TransformResult, TransformError> {
    if !h.has_vertex(w) {
        return Err(TransformError::UnknownVertex(w.clone()));
    }
    if h.is_sink(w) {
        return Err(TransformError::IsSink(w.clone()));
    }
    partition.validate_over(&h.outgoing(w))?;
    let n = partition.len();
    let (vertices, copies) = vertex_copies(h, w, n);
    let mut relabeling = Relabeling::default();
    relabeling.vertex_map.insert(w.clone(), copies[0].clone());

    let mut taken: BTreeSet<String> = h
        .edges()
        .keys()
        .filter(|e| {
            // ids of edges that keep their name
            !h.edge(e).expect("edge exists").range.contains(w)
        })
        .map(|e| e.0.clone())
        .collect();
    let mut edges: BTreeMap<EdgeId, EdgeEnds> = BTreeMap::new();
    for (e, ends) in h.edges() {
        let new_source = |_copy_index: usize| -> BTreeSet<VertexId> {
            if ends.source.contains(w) {
                let j = partition
                    .block_of(e)
                    .expect("outgoing edge is in the partition");
                let mut s: BTreeSet<VertexId> =
                    ends.source.iter().filter(|v| *v != w).cloned().collect();
                s.insert(copies[j].clone());
                s
            } else {
                ends.source.clone()
            }
        };
        if ends.range.contains(w) {
            for i in 1..=n {
                let id = EdgeId::new(fresh(format!("{e}#{i}"), &mut taken));
                if i == 1 {
                    relabeling.edge_map.insert(e.clone(), id.clone());
                }
                let range = if i == 1 {
                    let mut r: BTreeSet<VertexId> =
                        ends.range.iter().filter(|v| *v != w).cloned().collect();
                    r.insert(copies[0].clone());
                    r
                } else {
                    BTreeSet::from([copies[i - 1].clone()])
                };
                edges.insert(
                    id,
                    EdgeEnds {
                        source: new_source(i),
                        range,
                    },
                );
            }
        } else {
            edges.insert(
                e.clone(),
                EdgeEnds {
                    source: new_source(1),
                    range: ends.range.clone(),
                },
            );
        }
    }
    Ok(TransformResult {
        hypergraph: build(vertices, edges),
        relabeling,
        warnings: Vec::new(),
    })
}

/// Move I (insplitting): splits `w` into `w^1..w^n` along a partition of its
/// incoming edges. Every edge into `w` is retargeted to the copy of its
/// block (all copies of an edge share that retargeting); edges out of `w`
/// are copied, the first copy keeping the rest of the source plus `w^1` and
/// copy `i > 1` emanating from `w^i` alone.
pub fn move_i(
    h: &Hypergraph,
    w: &VertexId,
    partition: &Partition,
) -> Result<TransformResult, TransformError> {
    if !h.has_vertex(w) {
        return Err(TransformError::UnknownVertex(w.clone()));
    }
    if h.is_source(w) {
        return Err(TransformError::IsSourceVertex(w.clone()));
    }
    partition.validate_over(&h.incoming(w))?;
    let n = partition.len();
    let (vertices, copies) = vertex_copies(h, w, n);
    let mut relabeling = Relabeling::default();
    relabeling.vertex_map.insert(w.clone(), copies[0].clone());

    let mut overlap: BTreeSet<EdgeId> = BTreeSet::new();
    let mut taken: BTreeSet<String> = h
        .edges()
        .keys()
        .filter(|e| !h.edge(e).expect("edge exists").source.contains(w))
        .map(|e| e.0.clone())
        .collect();
    let mut edges: BTreeMap<EdgeId, EdgeEnds> = BTreeMap::new();
    for (e, ends) in h.edges() {
        let new_range: BTreeSet<VertexId> = if ends.range.contains(w) {
            let j = partition
                .block_of(e)
                .expect("incoming edge is in the partition");
            let mut r: BTreeSet<VertexId> =
                ends.range.iter().filter(|v| *v != w).cloned().collect();
            r.insert(copies[j].clone());
            r
        } else {
            ends.range.clone()
        };
        if ends.source.contains(w) {
            if ends.range.contains(w) {
                overlap.insert(e.clone());
            }
            for i in 1..=n {
                let id = EdgeId::new(fresh(format!("{e}#{i}"), &mut taken));
                if i == 1 {
                    relabeling.edge_map.insert(e.clone(), id.clone());
                }
                let source = if i == 1 {
                    let mut s: BTreeSet<VertexId> =
                        ends.source.iter().filter(|v| *v != w).cloned().collect();
                    s.insert(copies[0].clone());
                    s
                } else {
                    BTreeSet::from([copies[i - 1].clone()])
                };
                edges.insert(
                    id,
                    EdgeEnds {
                        source,
                        range: new_range.clone(),
                    },
                );
            }
        } else {
            edges.insert(
                e.clone(),
                EdgeEnds {
                    source: ends.source.clone(),
                    range: new_range,
                },
            );
        }
    }
    let warnings = if overlap.is_empty() {
        Vec::new()
    } else {
        vec![TransformWarning::MoveILoopOverlap { edges: overlap }]
    };
    Ok(TransformResult {
        hypergraph: build(vertices, edges),
        relabeling,
        warnings,
    })
}

/// Indelay: splits `w` into `w^1..w^n` along a partition of its incoming
/// edges, retargets each incoming edge to the copy of its block, moves `w`
/// in sources to `w^1`, and inserts the delay chain
/// `f_j: {w^{j+1}} -> {w^j}` for `j = 1..n-1`.
pub fn indelay(
    h: &Hypergraph,
    w: &VertexId,
    partition: &Partition,
) -> Result<TransformResult, TransformError> {
    if !h.has_vertex(w) {
        return Err(TransformError::UnknownVertex(w.clone()));
    }
    if h.is_source(w) {
        return Err(TransformError::IsSourceVertex(w.clone()));
    }
    partition.validate_over(&h.incoming(w))?;
    let n = partition.len();
    let (vertices, copies) = vertex_copies(h, w, n);
    let mut relabeling = Relabeling::default();
    relabeling.vertex_map.insert(w.clone(), copies[0].clone());

    let mut taken = edge_name_pool(h);
    let mut edges: BTreeMap<EdgeId, EdgeEnds> = BTreeMap::new();
    for (e, ends) in h.edges() {
        let range: BTreeSet<VertexId> = if ends.range.contains(w) {
            let j = partition
                .block_of(e)
                .expect("incoming edge is in the partition");
            let mut r: BTreeSet<VertexId> =
                ends.range.iter().filter(|v| *v != w).cloned().collect();
            r.insert(copies[j].clone());
            r
        } else {
            ends.range.clone()
        };
        let source: BTreeSet<VertexId> = if ends.source.contains(w) {
            let mut s: BTreeSet<VertexId> =
                ends.source.iter().filter(|v| *v != w).cloned().collect();
            s.insert(copies[0].clone());
            s
        } else {
            ends.source.clone()
        };
        edges.insert(e.clone(), EdgeEnds { source, range });
    }
    for j in 1..n {
        let id = EdgeId::new(fresh(format!("f_{j}@{w}"), &mut taken));
        edges.insert(
            id,
            EdgeEnds {
                source: BTreeSet::from([copies[j].clone()]),
                range: BTreeSet::from([copies[j - 1].clone()]),
            },
        );
    }
    Ok(TransformResult {
        hypergraph: build(vertices, edges),
        relabeling,
        warnings: Vec::new(),
    })
}

/// Disjoint union of two hypergraphs in which the vertex `w` of the second
/// is added to the source of the edge `f` of the first. Colliding names in
/// the second hypergraph are renamed automatically; the relabeling records
/// those renames.
pub fn attach_product(
    first: &Hypergraph,
    second: &Hypergraph,
    f: &EdgeId,
    w: &VertexId,
) -> Result<TransformResult, TransformError> {
    if !first.edges().contains_key(f) {
        return Err(TransformError::UnknownEdge(f.clone()));
    }
    if !second.has_vertex(w) {
        return Err(TransformError::UnknownVertex(w.clone()));
    }
    let mut vertex_names = vertex_name_pool(first);
    let mut edge_names = edge_name_pool(first);
    let mut relabeling = Relabeling::default();
    let mut vmap: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for v in second.vertices() {
        let name = fresh(v.0.clone(), &mut vertex_names);
        let new = VertexId::new(name);
        if new != *v {
            relabeling.vertex_map.insert(v.clone(), new.clone());
        }
        vmap.insert(v.clone(), new);
    }
    let mut vertices = first.vertices().clone();
    vertices.extend(vmap.values().cloned());

    let mut edges = first.edges().clone();
    for (e, ends) in second.edges() {
        let name = fresh(e.0.clone(), &mut edge_names);
        let new = EdgeId::new(name);
        if new != *e {
            relabeling.edge_map.insert(e.clone(), new.clone());
        }
        edges.insert(
            new,
            EdgeEnds {
                source: ends.source.iter().map(|v| vmap[v].clone()).collect(),
                range: ends.range.iter().map(|v| vmap[v].clone()).collect(),
            },
        );
    }
    let linked = edges.get_mut(f).expect("edge of the first hypergraph");
    linked.source.insert(vmap[w].clone());
    Ok(TransformResult {
        hypergraph: build(vertices, edges),
        relabeling,
        warnings: Vec::new(),
    })
}

/// Metadata witnessing that the restriction is a quotient of the original
/// algebra: vanishing the projections and isometries outside the kept sets
/// maps one Cuntz-Krieger family onto the other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientCertificate {
    pub kept_vertices: BTreeSet<VertexId>,
    pub kept_edges: BTreeSet<EdgeId>,
    pub dropped_vertices: BTreeSet<VertexId>,
    pub dropped_edges: BTreeSet<EdgeId>,
}

impl Relabeling {
    /// Applies the recorded renames to a hypergraph (identity elsewhere),
    /// for "isomorphic via this relabeling" checks.
    pub fn apply(&self, h: &Hypergraph) -> Hypergraph {
        let vertices: BTreeSet<VertexId> = h
            .vertices()
            .iter()
            .map(|v| self.vertex_map.get(v).unwrap_or(v).clone())
            .collect();
        let edges: BTreeMap<EdgeId, EdgeEnds> = h
            .edges()
            .iter()
            .map(|(e, ends)| {
                (
                    self.edge_map.get(e).unwrap_or(e).clone(),
                    EdgeEnds {
                        source: ends
                            .source
                            .iter()
                            .map(|v| self.vertex_map.get(v).unwrap_or(v).clone())
                            .collect(),
                        range: ends
                            .range
                            .iter()
                            .map(|v| self.vertex_map.get(v).unwrap_or(v).clone())
                            .collect(),
                    },
                )
            })
            .collect();
        Hypergraph::from_parts(vertices, edges).expect("renaming preserves validity")
    }
}

/// Restricts to the vertex subset `keep`: an edge survives iff both its
/// source and range meet `keep`, with endpoints intersected down to `keep`.
pub fn restrict_subhypergraph(
    h: &Hypergraph,
    keep: &BTreeSet<VertexId>,
) -> Result<(Hypergraph, QuotientCertificate), TransformError> {
    if keep.is_empty() {
        return Err(TransformError::EmptyRestriction);
    }
    for v in keep {
        if !h.has_vertex(v) {
            return Err(TransformError::UnknownVertex(v.clone()));
        }
    }
    let mut edges = BTreeMap::new();
    for (e, ends) in h.edges() {
        let source: BTreeSet<VertexId> = ends.source.intersection(keep).cloned().collect();
        let range: BTreeSet<VertexId> = ends.range.intersection(keep).cloned().collect();
        if !source.is_empty() && !range.is_empty() {
            edges.insert(e.clone(), EdgeEnds { source, range });
        }
    }
    let kept_edges: BTreeSet<EdgeId> = edges.keys().cloned().collect();
    let certificate = QuotientCertificate {
        kept_vertices: keep.clone(),
        kept_edges: kept_edges.clone(),
        dropped_vertices: h.vertices().difference(keep).cloned().collect(),
        dropped_edges: h
            .edges()
            .keys()
            .filter(|e| !kept_edges.contains(*e))
            .cloned()
            .collect(),
    };
    Ok((build(keep.clone(), edges), certificate))
}
