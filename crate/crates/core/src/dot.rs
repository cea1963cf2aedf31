//! Graphviz export, levels drawn top to bottom.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::bratteli::{BratteliDiagram, DiagramError};

/// Multiplicities up to this are drawn as parallel edges.
pub const MAX_PARALLEL: u64 = 4;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Levels `0..=depth` of `d` as a DOT digraph with vertex ids
/// `v_<level>_<index>`.
pub fn export_dot(d: &BratteliDiagram, depth: usize) -> Result<String, DiagramError> {
    d.check_depth(depth)?;
    let mut out = String::new();
    let name = d.name().unwrap_or("bratteli");
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    out.push_str("  rankdir=TB;\n");
    out.push_str("  node [shape=circle, label=\"\", width=0.15];\n");
    out.push_str("  edge [arrowhead=none];\n");
    for n in 0..=depth {
        out.push_str("  { rank=same;");
        for i in 0..d.width(n) {
            write!(out, " v_{n}_{i};").unwrap();
        }
        out.push_str(" }\n");
    }
    for n in 1..=depth {
        let m = d.matrix(n);
        for j in 0..d.width(n - 1) {
            for i in 0..d.width(n) {
                let k = m.get(i, j);
                match k.to_u64() {
                    Some(k) if k <= MAX_PARALLEL => {
                        for _ in 0..k {
                            writeln!(out, "  v_{}_{j} -> v_{n}_{i};", n - 1).unwrap();
                        }
                    }
                    _ => labeled(&mut out, n, i, j, k),
                }
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

fn labeled(out: &mut String, n: usize, i: usize, j: usize, k: &BigUint) {
    writeln!(out, "  v_{}_{j} -> v_{n}_{i} [label=\"{k}\"];", n - 1).unwrap();
}
