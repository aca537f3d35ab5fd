use crate::alphabet::{Alphabet, Sym};
use crate::distribution::Distribution;
use crate::error::{Error, Result};

/// Dense index of a state.
pub type StateId = usize;

#[derive(Debug, Clone)]
struct State {
    dist: Distribution,
    // Transition targets in symbol order; always length |Σ|.
    trans: Vec<StateId>,
}

/// A probabilistic deterministic finite automaton.
///
/// Every state carries a next-symbol distribution over `Σ ∪ {$}` and a total
/// transition function over `Σ`. A `Pdfa` is immutable after construction and
/// structurally valid by construction; reachability of all states is *not*
/// required (generators produce unreachable states transiently).
///
/// The automaton computes `f(s) = P(s | initial)` with
/// `P(λ|q) = π(q)($)` and `P(σs|q) = π(q)(σ) · P(s|τ(q,σ))`.
#[derive(Debug, Clone)]
pub struct Pdfa {
    alphabet: Alphabet,
    initial: StateId,
    states: Vec<State>,
}

impl Pdfa {
    /// Builds an automaton from per-state `(distribution, transitions)` rows.
    /// Each transition row must list one valid target per alphabet symbol.
    pub fn new(
        alphabet: Alphabet,
        initial: StateId,
        states: Vec<(Distribution, Vec<StateId>)>,
    ) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        if initial >= n {
            return Err(Error::InvalidAutomaton(format!(
                "initial state {initial} out of range"
            )));
        }
        let mut built = Vec::with_capacity(n);
        for (i, (dist, trans)) in states.into_iter().enumerate() {
            if dist.len() != alphabet.dist_len() {
                return Err(Error::InvalidAutomaton(format!(
                    "state {i}: distribution over {} outcomes, alphabet needs {}",
                    dist.len(),
                    alphabet.dist_len()
                )));
            }
            if trans.len() != alphabet.len() {
                return Err(Error::InvalidAutomaton(format!(
                    "state {i}: {} transitions, alphabet needs {}",
                    trans.len(),
                    alphabet.len()
                )));
            }
            if let Some(&t) = trans.iter().find(|&&t| t >= n) {
                return Err(Error::InvalidAutomaton(format!(
                    "state {i}: transition target {t} out of range"
                )));
            }
            built.push(State { dist, trans });
        }
        Ok(Pdfa {
            alphabet,
            initial,
            states: built,
        })
    }

    /// Single state with the given distribution and a self-loop per symbol.
    pub fn single_state(alphabet: Alphabet, dist: Distribution) -> Result<Self> {
        let loops = vec![0; alphabet.len()];
        Pdfa::new(alphabet, 0, vec![(dist, loops)])
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.states.len()
    }

    /// Next-symbol distribution `π(q)`.
    pub fn dist(&self, q: StateId) -> &Distribution {
        &self.states[q].dist
    }

    /// Transition `τ(q, σ)`.
    pub fn step(&self, q: StateId, sym: Sym) -> StateId {
        self.states[q].trans[sym]
    }

    /// `τ*(q, s)`: the state reached from `q` by traversing `s`.
    pub fn tau_star(&self, q: StateId, s: &[Sym]) -> StateId {
        s.iter().fold(q, |q, &sym| self.step(q, sym))
    }

    /// `π*(s | q) = π(τ*(q, s))`.
    pub fn pi_star_from(&self, q: StateId, s: &[Sym]) -> &Distribution {
        self.dist(self.tau_star(q, s))
    }

    /// `π*(s)` from the initial state.
    pub fn pi_star(&self, s: &[Sym]) -> &Distribution {
        self.pi_star_from(self.initial, s)
    }

    /// Probability of the last symbol of `prefix · last` read from `q`,
    /// where `last` of `None` denotes the terminal `$`:
    /// `πℓ_q(s σ) = π*(s | q)(σ)`.
    pub fn last_symbol_prob(&self, q: StateId, prefix: &[Sym], last: Option<Sym>) -> f64 {
        self.pi_star_from(q, prefix).prob_of(last)
    }

    /// `f(s) = P(s | initial)` via the probability recursion.
    pub fn string_prob(&self, s: &[Sym]) -> f64 {
        self.string_prob_from(self.initial, s)
    }

    pub fn string_prob_from(&self, q: StateId, s: &[Sym]) -> f64 {
        let mut p = 1.0;
        let mut q = q;
        for &sym in s {
            p *= self.dist(q).symbol(sym);
            q = self.step(q, sym);
        }
        p * self.dist(q).terminal()
    }

    /// States reachable from the initial state, in BFS order (symbol order
    /// within each state).
    pub fn reachable(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.states.len()];
        let mut order = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        seen[self.initial] = true;
        queue.push_back(self.initial);
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for sym in self.alphabet.symbols() {
                let t = self.step(q, sym);
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Disjoint union of two automata over the same alphabet. States of
    /// `other` are shifted by `self.num_states()`; the union keeps `self`'s
    /// initial state. Returns the union and the shift offset.
    pub fn disjoint_union(&self, other: &Pdfa) -> Result<(Pdfa, usize)> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let offset = self.states.len();
        let mut states: Vec<(Distribution, Vec<StateId>)> = self
            .states
            .iter()
            .map(|s| (s.dist.clone(), s.trans.clone()))
            .collect();
        states.extend(other.states.iter().map(|s| {
            (
                s.dist.clone(),
                s.trans.iter().map(|&t| t + offset).collect(),
            )
        }));
        let union = Pdfa::new(self.alphabet.clone(), self.initial, states)?;
        Ok((union, offset))
    }
}
