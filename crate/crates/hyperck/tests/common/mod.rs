//! Shared fixtures and seeded generators for the integration suites.
#![allow(dead_code)] // not every test binary uses every helper

use hyperck::hypergraph::{EdgeId, Hypergraph, VertexId};
use hyperck::scalar::Scalar;
use hyperck::star::{Generator, StarExpression, Word};

/// Deterministic splitmix64 stream; all random corpora are seeded.
pub struct Rng(pub u64);

impl Rng {
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

    pub fn chance(&mut self, num: usize, den: usize) -> bool {
        self.below(den) < num
    }
}

pub fn vertex_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

fn subset(rng: &mut Rng, pool: &[String], nonempty: bool) -> Vec<String> {
    let picked: Vec<String> = pool.iter().filter(|_| rng.chance(2, 5)).cloned().collect();
    if picked.is_empty() && nonempty {
        // force one element rather than re-draw on unlucky rolls
        vec![pool[rng.below(pool.len())].clone()]
    } else {
        picked
    }
}

/// Random valid hypergraph with 1..=max_v vertices and 0..=max_e edges.
pub fn random_hypergraph(rng: &mut Rng, max_v: usize, max_e: usize) -> Hypergraph {
    let n = 1 + rng.below(max_v);
    let names = vertex_names(n);
    let mut b = Hypergraph::builder();
    for v in &names {
        b = b.vertex(v);
    }
    let m = rng.below(max_e + 1);
    for j in 0..m {
        let source = subset(rng, &names, true);
        let range = subset(rng, &names, true);
        b = b.edge(
            &format!("e{}", j + 1),
            source.iter().map(String::as_str),
            range.iter().map(String::as_str),
        );
    }
    b.build().expect("generated hypergraph is valid")
}

/// Random ultragraph: singleton sources, arbitrary nonempty ranges.
pub fn random_ultragraph(rng: &mut Rng, max_v: usize, max_e: usize) -> Hypergraph {
    let n = 1 + rng.below(max_v);
    let names = vertex_names(n);
    let mut b = Hypergraph::builder();
    for v in &names {
        b = b.vertex(v);
    }
    let m = rng.below(max_e + 1);
    for j in 0..m {
        let source = [names[rng.below(n)].clone()];
        let range = subset(rng, &names, true);
        b = b.edge(
            &format!("e{}", j + 1),
            source.iter().map(String::as_str),
            range.iter().map(String::as_str),
        );
    }
    b.build().expect("generated ultragraph is valid")
}

/// Random graph: singleton sources and ranges.
pub fn random_graph(rng: &mut Rng, max_v: usize, max_e: usize) -> Hypergraph {
    let n = 1 + rng.below(max_v);
    let names = vertex_names(n);
    let mut b = Hypergraph::builder();
    for v in &names {
        b = b.vertex(v);
    }
    let m = rng.below(max_e + 1);
    for j in 0..m {
        b = b.edge(
            &format!("e{}", j + 1),
            [names[rng.below(n)].as_str()],
            [names[rng.below(n)].as_str()],
        );
    }
    b.build().expect("generated graph is valid")
}

/// Random ultragraph in which every vertex emits at least one edge.
pub fn random_ultragraph_without_sinks(rng: &mut Rng, max_v: usize, extra_e: usize) -> Hypergraph {
    let n = 1 + rng.below(max_v);
    let names = vertex_names(n);
    let mut b = Hypergraph::builder();
    for v in &names {
        b = b.vertex(v);
    }
    for (j, v) in names.iter().enumerate() {
        let range = subset(rng, &names, true);
        b = b.edge(
            &format!("e{}", j + 1),
            [v.as_str()],
            range.iter().map(String::as_str),
        );
    }
    for k in 0..rng.below(extra_e + 1) {
        let source = [names[rng.below(n)].clone()];
        let range = subset(rng, &names, true);
        b = b.edge(
            &format!("x{}", k + 1),
            source.iter().map(String::as_str),
            range.iter().map(String::as_str),
        );
    }
    b.build().expect("generated ultragraph is valid")
}

/// The Toeplitz shape with a full range: one edge `{w} -> {v, w}`.
pub fn toeplitz_full_range() -> Hypergraph {
    Hypergraph::builder()
        .vertices(["v", "w"])
        .edge("e", ["w"], ["v", "w"])
        .build()
        .unwrap()
}

/// The Toeplitz shape with a full source: one edge `{v, w} -> {w}`.
pub fn toeplitz_full_source() -> Hypergraph {
    Hypergraph::builder()
        .vertices(["v", "w"])
        .edge("e", ["v", "w"], ["w"])
        .build()
        .unwrap()
}

/// `n` vertices, edge `e_i` from `{v_i}` onto all vertices.
pub fn cuntz(n: usize) -> Hypergraph {
    let names = vertex_names(n);
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

/// `m` edges with full source and range on `n` vertices.
pub fn full_edges(n: usize, m: usize) -> Hypergraph {
    let names = vertex_names(n);
    let mut b = Hypergraph::builder();
    for v in &names {
        b = b.vertex(v);
    }
    for j in 1..=m {
        b = b.edge(
            &format!("e{j}"),
            names.iter().map(String::as_str),
            names.iter().map(String::as_str),
        );
    }
    b.build().unwrap()
}

/// Line graph `v_n -> ... -> v_1`.
pub fn line_graph(n: usize) -> Hypergraph {
    let names = vertex_names(n);
    let mut b = Hypergraph::builder();
    for v in &names {
        b = b.vertex(v);
    }
    for j in 1..n {
        b = b.edge(
            &format!("e{j}"),
            [names[j].as_str()],
            [names[j - 1].as_str()],
        );
    }
    b.build().unwrap()
}

/// Star graph with `n - 1` edges into the center.
pub fn star_graph(n: usize) -> Hypergraph {
    let mut b = Hypergraph::builder().vertex("v");
    for j in 1..n {
        b = b.vertex(&format!("w{j}"));
    }
    for j in 1..n {
        b = b.edge(&format!("e{j}"), [format!("w{j}").as_str()], ["v"]);
    }
    b.build().unwrap()
}

/// Two vertices joined by `m` parallel edges.
pub fn parallel_edges(m: usize) -> Hypergraph {
    let mut b = Hypergraph::builder().vertices(["v", "w"]);
    for j in 1..=m {
        b = b.edge(&format!("e{j}"), ["v"], ["w"]);
    }
    b.build().unwrap()
}

/// The worked quotient shape: `w` feeds `v_n` by one edge while a second
/// edge is full on `{v_1..v_n}`.
pub fn attached_full_edge(n: usize) -> Hypergraph {
    let names = vertex_names(n);
    let mut b = Hypergraph::builder().vertex("w");
    for v in &names {
        b = b.vertex(v);
    }
    b.edge("e", ["w"], [names[n - 1].as_str()])
        .edge(
            "f",
            names.iter().map(String::as_str),
            names.iter().map(String::as_str),
        )
        .build()
        .unwrap()
}

const COEFFS: [(i64, i64, i64); 6] = [
    (1, 0, 1),
    (-1, 0, 1),
    (0, 1, 1),
    (0, -1, 1),
    (1, 0, 2),
    (-1, 0, 2),
];

pub fn random_coefficient(rng: &mut Rng) -> Scalar {
    let (re, im, den) = COEFFS[rng.below(COEFFS.len())];
    Scalar::from_ratio(re, den) + Scalar::from_ratio(im, den) * Scalar::i()
}

pub fn random_word(rng: &mut Rng, h: &Hypergraph, max_len: usize) -> Word {
    let vertices: Vec<&VertexId> = h.vertices().iter().collect();
    let edges: Vec<&EdgeId> = h.edges().keys().collect();
    let len = rng.below(max_len + 1);
    let mut letters = Vec::with_capacity(len);
    for _ in 0..len {
        let kind = if edges.is_empty() { 0 } else { rng.below(3) };
        letters.push(match kind {
            0 => Generator::ProjV(vertices[rng.below(vertices.len())].clone()),
            1 => Generator::Iso(edges[rng.below(edges.len())].clone()),
            _ => Generator::IsoStar(edges[rng.below(edges.len())].clone()),
        });
    }
    Word(letters)
}

pub fn random_expression(
    rng: &mut Rng,
    h: &Hypergraph,
    max_terms: usize,
    max_len: usize,
) -> StarExpression {
    let mut out = StarExpression::zero();
    for _ in 0..(1 + rng.below(max_terms)) {
        out.add_term(random_word(rng, h, max_len), random_coefficient(rng));
    }
    out
}

/// A nonzero expression whose support words all share one gauge degree.
pub fn random_homogeneous_expression(
    rng: &mut Rng,
    h: &Hypergraph,
    max_len: usize,
) -> StarExpression {
    let lead = random_word(rng, h, max_len);
    let degree = lead.degree();
    let mut out = StarExpression::from_term(lead, random_coefficient(rng));
    let mut attempts = 0;
    while out.term_count() < 3 && attempts < 24 {
        attempts += 1;
        let w = random_word(rng, h, max_len);
        if w.degree() == degree {
            out.add_term(w, random_coefficient(rng));
        }
    }
    if out.is_zero() {
        // coefficients may have cancelled; fall back to a fresh single term
        out = StarExpression::from_term(random_word(rng, h, max_len), Scalar::one());
    }
    out
}
