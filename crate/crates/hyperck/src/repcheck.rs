//! Numeric verification of candidate Cuntz-Krieger families given as complex
//! matrices, standard path-space representations for acyclic graphs, and the
//! seeded symbolic-vs-numeric consistency oracle.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{EdgeId, Hypergraph, HypergraphKind, VertexId};
use crate::matrix::{min_eigenvalue, CMatrix};
use crate::rewrite::{derive_forced_equalities, normalize, RewriteError};
use crate::scalar::Scalar;
use crate::star::{Generator, StarExpression, Word};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// An assignment of a matrix to every vertex and edge, all square of one
/// dimension, together with the tolerance it is checked at.
#[derive(Clone, Debug)]
pub struct MatrixFamily {
    pub dim: usize,
    pub vertices: BTreeMap<VertexId, CMatrix>,
    pub edges: BTreeMap<EdgeId, CMatrix>,
    pub tol: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("matrix for {0} has a different dimension")]
    DimensionMismatch(String),
    #[error("no matrix assigned to {0}")]
    MissingMatrix(String),
    #[error("hypergraph is not a graph")]
    NotAGraph,
    #[error("graph has a directed cycle through {0}")]
    HasCycle(VertexId),
    #[error("family fails verification (worst residual {0:.3e})")]
    Unverified(f64),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// Residuals of every relation family, plus the overall verdict.
/// `pass` holds iff every residual is at most `tol` and both eigenvalue
/// floors are at least `-tol`. Residuals over empty index sets are 0 and
/// eigenvalue floors over empty index sets are `+inf`.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub proj_idempotent: f64,
    pub proj_selfadjoint: f64,
    pub mutual_orthogonality: f64,
    pub partial_isometry: f64,
    pub hr1: f64,
    pub hr2a_min_eig: f64,
    pub hr2b_min_eig: f64,
    pub tol: f64,
    pub pass: bool,
}

impl VerificationReport {
    pub fn worst_residual(&self) -> f64 {
        [
            self.proj_idempotent,
            self.proj_selfadjoint,
            self.mutual_orthogonality,
            self.partial_isometry,
            self.hr1,
            (-self.hr2a_min_eig).max(0.0),
            (-self.hr2b_min_eig).max(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl MatrixFamily {
    pub fn vertex(&self, v: &VertexId) -> Result<&CMatrix, RepError> {
        self.vertices
            .get(v)
            .ok_or_else(|| RepError::MissingMatrix(format!("vertex {v}")))
    }

    pub fn edge(&self, e: &EdgeId) -> Result<&CMatrix, RepError> {
        self.edges
            .get(e)
            .ok_or_else(|| RepError::MissingMatrix(format!("edge {e}")))
    }

    fn check_shape(&self, h: &Hypergraph) -> Result<(), RepError> {
        for v in h.vertices() {
            if self.vertex(v)?.dim() != self.dim {
                return Err(RepError::DimensionMismatch(format!("vertex {v}")));
            }
        }
        for e in h.edges().keys() {
            if self.edge(e)?.dim() != self.dim {
                return Err(RepError::DimensionMismatch(format!("edge {e}")));
            }
        }
        Ok(())
    }
}

/// Checks all hypergraph relations in spectral terms: projections are
/// self-adjoint idempotents and mutually orthogonal, edge matrices are
/// partial isometries, `S_e* S_f = δ_ef Σ_{v∈r(e)} P_v`, and the two order
/// relations hold as eigenvalue floors of the hermitized differences.
pub fn verify_ck_family(
    h: &Hypergraph,
    fam: &MatrixFamily,
) -> Result<VerificationReport, RepError> {
    fam.check_shape(h)?;
    let d = fam.dim;
    let mut proj_idempotent = 0.0f64;
    let mut proj_selfadjoint = 0.0f64;
    for v in h.vertices() {
        let p = fam.vertex(v)?;
        proj_idempotent = proj_idempotent.max(p.mul(p).sub(p).op_norm());
        proj_selfadjoint = proj_selfadjoint.max(p.sub(&p.adjoint()).op_norm());
    }
    let mut mutual_orthogonality = 0.0f64;
    let verts: Vec<&VertexId> = h.vertices().iter().collect();
    for (i, v) in verts.iter().enumerate() {
        for w in verts.iter().skip(i + 1) {
            let prod = fam.vertex(v)?.mul(fam.vertex(w)?);
            mutual_orthogonality = mutual_orthogonality.max(prod.op_norm());
        }
    }
    let mut partial_isometry = 0.0f64;
    for e in h.edges().keys() {
        let s = fam.edge(e)?;
        let sss = s.mul(&s.adjoint()).mul(s);
        partial_isometry = partial_isometry.max(s.sub(&sss).op_norm());
    }
    let mut hr1 = 0.0f64;
    for (e, e_ends) in h.edges() {
        for f in h.edges().keys() {
            let lhs = fam.edge(e)?.adjoint().mul(fam.edge(f)?);
            let rhs = if e == f {
                let mut sum = CMatrix::zeros(d);
                for v in &e_ends.range {
                    sum = sum.add(fam.vertex(v)?);
                }
                sum
            } else {
                CMatrix::zeros(d)
            };
            hr1 = hr1.max(lhs.sub(&rhs).op_norm());
        }
    }
    let mut hr2a_min_eig = f64::INFINITY;
    for (e, ends) in h.edges() {
        let s = fam.edge(e)?;
        let mut sum = CMatrix::zeros(d);
        for v in &ends.source {
            sum = sum.add(fam.vertex(v)?);
        }
        let diff = sum.sub(&s.mul(&s.adjoint()));
        hr2a_min_eig = hr2a_min_eig.min(min_eigenvalue(&diff));
    }
    let mut hr2b_min_eig = f64::INFINITY;
    for v in h.vertices() {
        let out = h.outgoing(v);
        if out.is_empty() {
            continue; // sinks carry no relation
        }
        let mut sum = CMatrix::zeros(d);
        for e in &out {
            let s = fam.edge(e)?;
            sum = sum.add(&s.mul(&s.adjoint()));
        }
        let diff = sum.sub(fam.vertex(v)?);
        hr2b_min_eig = hr2b_min_eig.min(min_eigenvalue(&diff));
    }
    let tol = fam.tol;
    let pass = proj_idempotent <= tol
        && proj_selfadjoint <= tol
        && mutual_orthogonality <= tol
        && partial_isometry <= tol
        && hr1 <= tol
        && hr2a_min_eig >= -tol
        && hr2b_min_eig >= -tol;
    Ok(VerificationReport {
        proj_idempotent,
        proj_selfadjoint,
        mutual_orthogonality,
        partial_isometry,
        hr1,
        hr2a_min_eig,
        hr2b_min_eig,
        tol,
        pass,
    })
}

/// A path that ends at a sink: its start vertex and edge sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct SinkPath {
    start: VertexId,
    edges: Vec<EdgeId>,
}

/// The standard representation of an acyclic graph on the basis of directed
/// paths ending at sinks: `P_v` projects onto paths starting at `v`, and
/// `S_e` prepends `e` to paths starting at `r(e)`. Entries are exactly 0 or
/// 1, so verification passes at machine precision.
pub fn standard_graph_representation(h: &Hypergraph) -> Result<MatrixFamily, RepError> {
    if h.classify_kind() != HypergraphKind::Graph {
        return Err(RepError::NotAGraph);
    }
    let single = |set: &std::collections::BTreeSet<VertexId>| -> VertexId {
        set.iter()
            .next()
            .expect("graph endpoints are singletons")
            .clone()
    };
    // cycle detection: colors 0 = new, 1 = on stack, 2 = done
    let mut color: BTreeMap<VertexId, u8> = h.vertices().iter().map(|v| (v.clone(), 0)).collect();
    let mut stack: Vec<(VertexId, Vec<EdgeId>)> = Vec::new();
    for v in h.vertices() {
        if color[v] != 0 {
            continue;
        }
        stack.push((v.clone(), h.outgoing(v).into_iter().collect()));
        color.insert(v.clone(), 1);
        while let Some((top, todo)) = stack.last_mut() {
            match todo.pop() {
                None => {
                    color.insert(top.clone(), 2);
                    stack.pop();
                }
                Some(e) => {
                    let next = single(h.range(&e).expect("edge exists"));
                    match color[&next] {
                        0 => {
                            color.insert(next.clone(), 1);
                            stack.push((next.clone(), h.outgoing(&next).into_iter().collect()));
                        }
                        1 => return Err(RepError::HasCycle(next)),
                        _ => {}
                    }
                }
            }
        }
    }
    // enumerate paths ending at sinks, walking backwards from each sink
    let mut paths: Vec<SinkPath> = Vec::new();
    let (sinks, _) = h.sinks_sources();
    let mut frontier: Vec<SinkPath> = sinks
        .iter()
        .map(|v| SinkPath {
            start: v.clone(),
            edges: Vec::new(),
        })
        .collect();
    while let Some(path) = frontier.pop() {
        for (e, ends) in h.edges() {
            if single(&ends.range) == path.start {
                let mut edges = vec![e.clone()];
                edges.extend(path.edges.iter().cloned());
                frontier.push(SinkPath {
                    start: single(&ends.source),
                    edges,
                });
            }
        }
        paths.push(path);
    }
    paths.sort();
    let index: BTreeMap<&SinkPath, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let d = paths.len();

    let mut vertices = BTreeMap::new();
    for v in h.vertices() {
        let mut p = CMatrix::zeros(d);
        for (path, &i) in &index {
            if path.start == *v {
                p[(i, i)] = Complex64::new(1.0, 0.0);
            }
        }
        vertices.insert(v.clone(), p);
    }
    let mut edges = BTreeMap::new();
    for (e, ends) in h.edges() {
        let mut s = CMatrix::zeros(d);
        for (path, &col) in &index {
            if path.start == single(&ends.range) {
                let mut prefixed = vec![e.clone()];
                prefixed.extend(path.edges.iter().cloned());
                let target = SinkPath {
                    start: single(&ends.source),
                    edges: prefixed,
                };
                let row = index[&target];
                s[(row, col)] = Complex64::new(1.0, 0.0);
            }
        }
        edges.insert(e.clone(), s);
    }
    Ok(MatrixFamily {
        dim: d,
        vertices,
        edges,
        tol: 1e-12,
    })
}

/// The *-homomorphic image of an expression: words become matrix products,
/// the empty word the identity, with complex-linear extension.
pub fn evaluate(
    x: &StarExpression,
    h: &Hypergraph,
    fam: &MatrixFamily,
) -> Result<CMatrix, RepError> {
    fam.check_shape(h)?;
    let d = fam.dim;
    let mut acc = CMatrix::zeros(d);
    for (word, coeff) in x.terms() {
        let mut prod = CMatrix::identity(d);
        for g in &word.0 {
            let m = match g {
                Generator::ProjV(v) => fam.vertex(v)?.clone(),
                Generator::Iso(e) => fam.edge(e)?.clone(),
                Generator::IsoStar(e) => fam.edge(e)?.adjoint(),
            };
            prod = prod.mul(&m);
        }
        acc = acc.add(&prod.scale(coeff.to_complex64()));
    }
    Ok(acc)
}

/// Deterministic generator used by the oracle; splitmix64 keeps the stream
/// identical across platforms.
pub(crate) struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound.max(1) as u64) as usize
    }
}

const ORACLE_COEFFICIENTS: [(i64, i64, i64); 6] = [
    (1, 0, 1),
    (-1, 0, 1),
    (0, 1, 1),
    (0, -1, 1),
    (1, 0, 2),
    (-1, 0, 2),
];

/// One random expression: up to 5 terms of words of length up to 8 with
/// small coefficients, over the generators of `h`.
fn random_expression(h: &Hypergraph, rng: &mut SplitMix64) -> StarExpression {
    let vertices: Vec<&VertexId> = h.vertices().iter().collect();
    let edges: Vec<&EdgeId> = h.edges().keys().collect();
    let mut out = StarExpression::zero();
    let terms = 1 + rng.below(5);
    for _ in 0..terms {
        let len = rng.below(9);
        let mut letters = Vec::with_capacity(len);
        for _ in 0..len {
            let kind = if edges.is_empty() { 0 } else { rng.below(3) };
            letters.push(match kind {
                0 => Generator::ProjV(vertices[rng.below(vertices.len())].clone()),
                1 => Generator::Iso(edges[rng.below(edges.len())].clone()),
                _ => Generator::IsoStar(edges[rng.below(edges.len())].clone()),
            });
        }
        let (re, im, den) = ORACLE_COEFFICIENTS[rng.below(ORACLE_COEFFICIENTS.len())];
        let coeff = Scalar::from_ratio(re, den) + Scalar::from_ratio(im, den) * Scalar::i();
        out.add_term(Word(letters), coeff);
    }
    out
}

/// Generates `trials` seeded random expressions and returns the largest
/// entrywise deviation between `evaluate(x)` and `evaluate(normalize(x))`.
/// The family must verify first; rewriting is only sound against families
/// that actually satisfy the relations.
pub fn symbolic_numeric_consistency(
    h: &Hypergraph,
    fam: &MatrixFamily,
    trials: u32,
    seed: u64,
) -> Result<f64, RepError> {
    let report = verify_ck_family(h, fam)?;
    if !report.pass {
        return Err(RepError::Unverified(report.worst_residual()));
    }
    let rs = derive_forced_equalities(h);
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let mut rng =
            SplitMix64(seed.wrapping_add(u64::from(trial).wrapping_mul(0x9e3779b97f4a7c15)));
        let x = random_expression(h, &mut rng);
        let normalized = normalize(&x, &rs)?;
        let direct = evaluate(&x, h, fam)?;
        let rewritten = evaluate(&normalized, h, fam)?;
        worst = worst.max(direct.sub(&rewritten).max_abs());
    }
    Ok(worst)
}

/// Serialized form of a matrix family: row-major matrices with `[re, im]`
/// entry pairs.
#[derive(Serialize, Deserialize)]
pub struct MatrixFamilyFile {
    pub dim: usize,
    pub vertices: BTreeMap<String, Vec<Vec<[f64; 2]>>>,
    pub edges: BTreeMap<String, Vec<Vec<[f64; 2]>>>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Error)]
pub enum FamilyFileError {
    #[error("invalid matrix family JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix for {0} is not {1}x{1} row-major")]
    Shape(String, usize),
}

pub fn family_from_json(text: &str) -> Result<MatrixFamily, FamilyFileError> {
    let file: MatrixFamilyFile = serde_json::from_str(text)?;
    let dim = file.dim;
    let read = |name: &str, rows: &Vec<Vec<[f64; 2]>>| -> Result<CMatrix, FamilyFileError> {
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(FamilyFileError::Shape(name.to_owned(), dim));
        }
        Ok(CMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                .collect(),
        ))
    };
    let mut vertices = BTreeMap::new();
    for (name, rows) in &file.vertices {
        vertices.insert(VertexId::new(name.clone()), read(name, rows)?);
    }
    let mut edges = BTreeMap::new();
    for (name, rows) in &file.edges {
        edges.insert(EdgeId::new(name.clone()), read(name, rows)?);
    }
    Ok(MatrixFamily {
        dim,
        vertices,
        edges,
        tol: file.tol,
    })
}

pub fn family_to_json(fam: &MatrixFamily) -> String {
    let dump = |m: &CMatrix| -> Vec<Vec<[f64; 2]>> {
        (0..m.dim())
            .map(|i| {
                (0..m.dim())
                    .map(|j| {
                        let z = m[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect()
    };
    let file = MatrixFamilyFile {
        dim: fam.dim,
        vertices: fam
            .vertices
            .iter()
            .map(|(v, m)| (v.0.clone(), dump(m)))
            .collect(),
        edges: fam
            .edges
            .iter()
            .map(|(e, m)| (e.0.clone(), dump(m)))
            .collect(),
        tol: fam.tol,
    };
    serde_json::to_string_pretty(&file).expect("family serialization")
}
