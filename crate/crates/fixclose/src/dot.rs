//! Graphviz rendering of core graphs. The base vertex is double-circled.

use std::fmt::Write;

use fixclose_core::SubgroupGraph;

pub fn to_dot(h: &SubgroupGraph, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {name} {{");
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n  0 [shape=doublecircle];\n");
    for v in 1..h.vertex_count() {
        let _ = writeln!(out, "  {v};");
    }
    for (s, x, t) in h.edges() {
        let _ = writeln!(out, "  {s} -> {t} [label=\"{x}\"];");
    }
    out.push_str("}\n");
    out
}
