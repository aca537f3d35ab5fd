//! The on-disk JSON document form of an automaton.
//!
//! ```json
//! {
//!   "alphabet": ["0", "1"],
//!   "initial": 0,
//!   "states": [
//!     { "id": 0, "dist": {"$": 0.0, "0": 0.5, "1": 0.5}, "trans": {"0": 1, "1": 2} }
//!   ]
//! }
//! ```
//!
//! The key `"$"` is reserved for the terminal. The document form is looser
//! than [`Pdfa`]: it can hold broken automata, which is what
//! [`PdfaDoc::validate`] reports on. Serialization is deterministic (BTreeMap
//! keys, shortest-roundtrip doubles), so equal automata produce identical
//! bytes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, TERMINAL};
use crate::automaton::Pdfa;
use crate::distribution::{Distribution, SIMPLEX_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PdfaDoc {
    pub alphabet: Vec<String>,
    pub initial: usize,
    pub states: Vec<StateDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateDoc {
    pub id: usize,
    pub dist: BTreeMap<String, f64>,
    pub trans: BTreeMap<String, usize>,
}

/// A single validation finding. Only [`Violation::Unreachable`] is a warning;
/// everything else makes the document unloadable.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    BadAlphabet(String),
    BadStateIds(String),
    BadInitial(usize),
    Simplex { state: usize, sum: f64 },
    BadProbability { state: usize, symbol: String, value: f64 },
    MissingOutcome { state: usize, symbol: String },
    UnknownSymbol { state: usize, symbol: String },
    MissingTransition { state: usize, symbol: String },
    DanglingTransition { state: usize, symbol: String, target: usize },
    Unreachable { states: Vec<usize> },
}

impl Violation {
    pub fn is_warning(&self) -> bool {
        matches!(self, Violation::Unreachable { .. })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadAlphabet(msg) => write!(f, "bad alphabet: {msg}"),
            Violation::BadStateIds(msg) => write!(f, "bad state ids: {msg}"),
            Violation::BadInitial(q) => write!(f, "initial state {q} does not exist"),
            Violation::Simplex { state, sum } => {
                write!(f, "state {state}: distribution sums to {sum}, not 1")
            }
            Violation::BadProbability { state, symbol, value } => {
                write!(f, "state {state}: probability of {symbol:?} is {value}")
            }
            Violation::MissingOutcome { state, symbol } => {
                write!(f, "state {state}: no probability for {symbol:?}")
            }
            Violation::UnknownSymbol { state, symbol } => {
                write!(f, "state {state}: symbol {symbol:?} not in the alphabet")
            }
            Violation::MissingTransition { state, symbol } => {
                write!(f, "state {state}: no transition on {symbol:?} (τ must be total)")
            }
            Violation::DanglingTransition { state, symbol, target } => {
                write!(f, "state {state}: transition on {symbol:?} to missing state {target}")
            }
            Violation::Unreachable { states } => {
                write!(f, "warning: unreachable states {states:?}")
            }
        }
    }
}

impl PdfaDoc {
    /// Checks the document and returns every violation found. An empty result
    /// (or warnings only) means the document loads as a [`Pdfa`].
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let alphabet = match Alphabet::new(self.alphabet.clone()) {
            Ok(a) => a,
            Err(e) => {
                out.push(Violation::BadAlphabet(e.to_string()));
                return out;
            }
        };

        let n = self.states.len();
        let ids: Vec<usize> = self.states.iter().map(|s| s.id).collect();
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            out.push(Violation::BadStateIds(format!(
                "expected dense ids 0..{n}, got {ids:?}"
            )));
            return out;
        }
        if self.initial >= n {
            out.push(Violation::BadInitial(self.initial));
        }

        for s in &self.states {
            let mut sum = 0.0;
            let mut complete = true;
            for pos in 0..alphabet.dist_len() {
                let name = alphabet.layout_name(pos);
                match s.dist.get(name) {
                    Some(&p) if (-1e-12..=1.0 + 1e-12).contains(&p) && p.is_finite() => sum += p,
                    Some(&p) => {
                        out.push(Violation::BadProbability {
                            state: s.id,
                            symbol: name.to_string(),
                            value: p,
                        });
                        complete = false;
                    }
                    None => {
                        out.push(Violation::MissingOutcome {
                            state: s.id,
                            symbol: name.to_string(),
                        });
                        complete = false;
                    }
                }
            }
            for key in s.dist.keys() {
                if key != TERMINAL && alphabet.lookup(key).is_err() {
                    out.push(Violation::UnknownSymbol {
                        state: s.id,
                        symbol: key.clone(),
                    });
                }
            }
            if complete && (sum - 1.0).abs() > SIMPLEX_TOL {
                out.push(Violation::Simplex { state: s.id, sum });
            }

            for sym in alphabet.symbols() {
                let name = alphabet.name(sym);
                match s.trans.get(name) {
                    Some(&t) if t < n => {}
                    Some(&t) => out.push(Violation::DanglingTransition {
                        state: s.id,
                        symbol: name.to_string(),
                        target: t,
                    }),
                    None => out.push(Violation::MissingTransition {
                        state: s.id,
                        symbol: name.to_string(),
                    }),
                }
            }
            for key in s.trans.keys() {
                if alphabet.lookup(key).is_err() {
                    out.push(Violation::UnknownSymbol {
                        state: s.id,
                        symbol: key.clone(),
                    });
                }
            }
        }

        if out.iter().all(|v| v.is_warning()) && self.initial < n {
            let by_id = self.sorted_states();
            let mut seen = vec![false; n];
            let mut stack = vec![self.initial];
            seen[self.initial] = true;
            while let Some(q) = stack.pop() {
                for sym in alphabet.symbols() {
                    let t = by_id[q].trans[alphabet.name(sym)];
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            let unreachable: Vec<usize> = (0..n).filter(|&q| !seen[q]).collect();
            if !unreachable.is_empty() {
                out.push(Violation::Unreachable { states: unreachable });
            }
        }
        out
    }

    fn sorted_states(&self) -> Vec<&StateDoc> {
        let mut by_id: Vec<&StateDoc> = self.states.iter().collect();
        by_id.sort_by_key(|s| s.id);
        by_id
    }

    /// Loads the document into a [`Pdfa`], failing on any non-warning
    /// violation.
    pub fn to_pdfa(&self) -> Result<Pdfa> {
        let violations: Vec<_> = self.validate().into_iter().filter(|v| !v.is_warning()).collect();
        if !violations.is_empty() {
            let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidAutomaton(msgs.join("; ")));
        }
        let alphabet = Alphabet::new(self.alphabet.clone())?;
        let states = self
            .sorted_states()
            .iter()
            .map(|s| {
                let probs = (0..alphabet.dist_len())
                    .map(|pos| s.dist[alphabet.layout_name(pos)])
                    .collect();
                let trans = alphabet
                    .symbols()
                    .map(|sym| s.trans[alphabet.name(sym)])
                    .collect();
                Ok((Distribution::new(probs)?, trans))
            })
            .collect::<Result<Vec<_>>>()?;
        Pdfa::new(alphabet, self.initial, states)
    }

    pub fn from_pdfa(pdfa: &Pdfa) -> Self {
        let alphabet = pdfa.alphabet();
        let states = pdfa
            .states()
            .map(|q| {
                let dist = (0..alphabet.dist_len())
                    .map(|pos| (alphabet.layout_name(pos).to_string(), pdfa.dist(q).layout(pos)))
                    .collect();
                let trans = alphabet
                    .symbols()
                    .map(|sym| (alphabet.name(sym).to_string(), pdfa.step(q, sym)))
                    .collect();
                StateDoc { id: q, dist, trans }
            })
            .collect();
        PdfaDoc {
            alphabet: (0..alphabet.len()).map(|s| alphabet.name(s).to_string()).collect(),
            initial: pdfa.initial(),
            states,
        }
    }
}

impl Pdfa {
    /// Re-checks numeric invariants and reports unreachable states.
    pub fn validate(&self) -> Vec<Violation> {
        PdfaDoc::from_pdfa(self).validate()
    }

    pub fn to_json(&self) -> String {
        let mut bytes = serde_json::to_vec_pretty(&PdfaDoc::from_pdfa(self)).expect("serialize");
        bytes.push(b'\n');
        String::from_utf8(bytes).expect("json is utf-8")
    }

    pub fn from_json(text: &str) -> Result<Pdfa> {
        let doc: PdfaDoc = serde_json::from_str(text)?;
        doc.to_pdfa()
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_json())?)
    }

    pub fn read_json(path: &Path) -> Result<Pdfa> {
        Pdfa::from_json(&std::fs::read_to_string(path)?)
    }
}
