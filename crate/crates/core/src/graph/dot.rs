//! Graphviz output.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{Edge, Graph, VertexId};

/// Extra `key=value` attributes per vertex and per edge.
#[derive(Clone, Debug, Default)]
pub struct DotAttributes {
    pub vertices: BTreeMap<VertexId, Vec<(String, String)>>,
    pub edges: BTreeMap<Edge, Vec<(String, String)>>,
}

fn attr_list(attrs: Option<&Vec<(String, String)>>) -> String {
    match attrs {
        Some(a) if !a.is_empty() => {
            let body: Vec<String> = a.iter().map(|(k, v)| format!("{k}=\"{}\"", v.replace('"', "\\\""))).collect();
            format!(" [{}]", body.join(", "))
        }
        _ => String::new(),
    }
}

pub fn to_dot(g: &Graph, name: &str, attrs: &DotAttributes) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {name} {{");
    for v in g.vertices() {
        let _ = writeln!(out, "  {v}{};", attr_list(attrs.vertices.get(&v)));
    }
    for &e in g.edges() {
        let _ = writeln!(out, "  {} -- {}{};", e.lo(), e.hi(), attr_list(attrs.edges.get(&e)));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::lozenge;

    #[test]
    fn renders_edges_and_attributes() {
        let mut attrs = DotAttributes::default();
        attrs.edges.insert(Edge::new(0, 1), vec![("color".into(), "black".into())]);
        attrs.vertices.insert(2, vec![("label".into(), "apex".into())]);
        let dot = to_dot(&lozenge(), "F1", &attrs);
        assert!(dot.starts_with("graph F1 {"));
        assert!(dot.contains("  0 -- 1 [color=\"black\"];"));
        assert!(dot.contains("  2 [label=\"apex\"];"));
        assert!(dot.contains("  1 -- 3;"));
    }
}
