//! Graphviz export.

use std::fmt::Write;

use crate::automaton::Pdfa;

/// Renders the automaton as a DOT digraph: one node per state labeled with
/// its id and terminal probability, one edge per (state, symbol) labeled
/// `symbol/probability`.
pub fn to_dot(pdfa: &Pdfa) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph pdfa {{");
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  init [shape=point, label=\"\"];");
    let _ = writeln!(out, "  init -> q{};", pdfa.initial());
    for q in pdfa.states() {
        let _ = writeln!(
            out,
            "  q{q} [shape=circle, label=\"q{q}\\n$:{}\"];",
            pdfa.dist(q).terminal()
        );
    }
    for q in pdfa.states() {
        for sym in pdfa.alphabet().symbols() {
            let _ = writeln!(
                out,
                "  q{q} -> q{} [label=\"{}/{}\"];",
                pdfa.step(q, sym),
                pdfa.alphabet().name(sym),
                pdfa.dist(q).symbol(sym)
            );
        }
    }
    let _ = writeln!(out, "}}");
    out
}
