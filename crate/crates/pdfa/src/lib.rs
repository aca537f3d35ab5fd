//! Active learning of probabilistic deterministic finite automata (PDFA).
//!
//! A PDFA attaches to every state a next-symbol distribution over the
//! alphabet plus a terminal symbol `$`, together with deterministic
//! transitions. This crate provides:
//!
//! - the PDFA algebra: probability semantics, congruences, quotients and
//!   weak minimality ([`automaton`], [`partition`]);
//! - interval quantization of distributions, the equivalence underlying the
//!   tree learner ([`quantize`]);
//! - a teacher answering membership and equivalence queries over a hidden
//!   target, with a Hopcroft-Karp product equivalence check ([`teacher`]);
//! - the quantized n-ary classification-tree learner ([`quant`]) and the
//!   observation-table baseline with greedy clustering ([`lpstar`]);
//! - a random PDFA generator with Lambert-W nominal sizing ([`randgen`]);
//! - next-symbol evaluation metrics and a benchmark harness ([`bench`],
//!   [`metrics`]).

pub mod alphabet;
pub mod automaton;
pub mod bench;
pub mod distribution;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod lpstar;
pub mod metrics;
pub mod partition;
pub mod quant;
pub mod quantize;
pub mod randgen;
pub mod teacher;

pub use alphabet::{Alphabet, Sym, Word, TERMINAL};
pub use automaton::{Pdfa, StateId};
pub use distribution::Distribution;
pub use error::{Error, Result};
pub use json::{PdfaDoc, Violation};
pub use partition::{
    compute_partition, exact_partition, is_weakly_minimal, quantized_partition, quotient,
    Partition,
};
pub use quantize::{interval_index, linf_distance, quant_equal, quantize_distribution, QuantVector};
pub use teacher::{
    eq_quantized, eq_tolerance, oracle_bisim, Comparator, Counterexample, PdfaTeacher, Teacher,
};
