//! DOT output. A hyperedge `e` with source `S` and range `R` is drawn as
//! `|S|·|R|` arrows sharing the label `e` and one color per edge, following
//! the figure convention for hyperedges.

use crate::hypergraph::Hypergraph;

const PALETTE: [&str; 10] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
    "#1f78b4", "#b2182b",
];

pub fn emit_dot(h: &Hypergraph, name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("digraph \"{name}\" {{\n"));
    out.push_str("  node [shape=circle];\n");
    for v in h.vertices() {
        out.push_str(&format!("  \"{v}\";\n"));
    }
    for (i, (e, ends)) in h.edges().iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for s in &ends.source {
            for r in &ends.range {
                out.push_str(&format!(
                    "  \"{s}\" -> \"{r}\" [label=\"{e}\", color=\"{color}\"];\n"
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_edge_graph_has_one_arrow() {
        let h = Hypergraph::builder()
            .vertices(["v", "w"])
            .edge("e", ["v"], ["w"])
            .build()
            .unwrap();
        let dot = emit_dot(&h, "g");
        assert_eq!(dot.matches("->").count(), 1);
        assert!(dot.contains("\"v\" -> \"w\""));
    }

    #[test]
    fn hyperedge_expands_to_product_arrows() {
        let h = Hypergraph::builder()
            .vertices(["a", "b", "c"])
            .edge("e", ["a", "b"], ["c"])
            .build()
            .unwrap();
        let dot = emit_dot(&h, "g");
        assert_eq!(dot.matches("label=\"e\"").count(), 2);
        // both arrows share one color
        assert_eq!(dot.matches(PALETTE[0]).count(), 2);
    }

    #[test]
    fn edgeless_graph_lists_nodes_only() {
        let h = Hypergraph::builder().vertices(["a", "b"]).build().unwrap();
        let dot = emit_dot(&h, "g");
        assert_eq!(dot.matches("->").count(), 0);
        assert!(dot.contains("\"a\";"));
    }
}
