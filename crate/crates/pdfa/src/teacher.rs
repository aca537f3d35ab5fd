//! The teacher side of the learning protocol: membership and equivalence
//! oracles over a hidden target automaton.
//!
//! Membership queries return the next-symbol distribution reached by a string
//! (or the probability of a string's last symbol). Equivalence queries run a
//! Hopcroft-Karp product traversal of target and hypothesis and either close
//! — the automata are equivalent under the chosen comparator — or return the
//! breadth-first-shortest access string to a failing state pair.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, Sym, Word};
use crate::automaton::Pdfa;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::partition::quantized_partition;
use crate::quantize::{linf_distance, quantize_distribution};

/// A string on which target and hypothesis disagree.
///
/// For a quantized check, `π*_target(γ)` and `π*_hyp(γ)` fall in different
/// quantization cells; for a tolerance check, the pair of states reached by
/// `γ` fails the `L∞ ≤ t` test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub gamma: Word,
}

impl Counterexample {
    pub fn format(&self, alphabet: &Alphabet) -> String {
        alphabet.format_word(&self.gamma)
    }
}

/// How the equivalence oracle compares state distributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Comparator {
    /// Same κ-quantization cell per coordinate. An equivalence relation, so
    /// `None` certifies target ≡_κ hypothesis.
    Quantized(u32),
    /// `L∞ ≤ t`. Not transitive, so `None` only certifies that every pair the
    /// traversal compared directly passed.
    Tolerance(f64),
}

/// A minimally adequate teacher. One learner drives one teacher at a time;
/// answers must be deterministic for equal queries.
pub trait Teacher {
    fn alphabet(&self) -> &Alphabet;

    /// `MQ(s) = π*(s)`: the next-symbol distribution after reading `s`.
    fn mq_next_symbol(&mut self, s: &[Sym]) -> Result<Distribution>;

    /// `MQ(s σ) = πℓ(s σ)`: the probability that `s` is continued by `last`
    /// (`None` is the terminal).
    fn mq_last_symbol(&mut self, prefix: &[Sym], last: Option<Sym>) -> Result<f64>;

    /// Equivalence query; `None` means no counterexample was found.
    fn eq(&mut self, hypothesis: &Pdfa, comparator: Comparator) -> Result<Option<Counterexample>>;

    /// Raw membership queries asked so far (before any caching).
    fn mq_count(&self) -> u64;

    /// Equivalence queries asked so far.
    fn eq_count(&self) -> u64;
}

/// Teacher backed by an explicit target automaton.
pub struct PdfaTeacher {
    target: Pdfa,
    cache: Option<HashMap<Word, Distribution>>,
    mq_calls: u64,
    mq_misses: u64,
    eq_calls: u64,
}

impl PdfaTeacher {
    /// Teacher with the answer cache enabled.
    pub fn new(target: Pdfa) -> Self {
        PdfaTeacher::with_cache(target, true)
    }

    pub fn with_cache(target: Pdfa, cache: bool) -> Self {
        PdfaTeacher {
            target,
            cache: cache.then(HashMap::new),
            mq_calls: 0,
            mq_misses: 0,
            eq_calls: 0,
        }
    }

    pub fn target(&self) -> &Pdfa {
        &self.target
    }

    /// Membership queries that actually reached the target (cache misses).
    pub fn mq_miss_count(&self) -> u64 {
        self.mq_misses
    }

    fn answer(&mut self, s: &[Sym]) -> Distribution {
        self.mq_calls += 1;
        match &mut self.cache {
            Some(cache) => {
                if let Some(d) = cache.get(s) {
                    return d.clone();
                }
                self.mq_misses += 1;
                let d = self.target.pi_star(s).clone();
                cache.insert(s.to_vec(), d.clone());
                d
            }
            None => {
                self.mq_misses += 1;
                self.target.pi_star(s).clone()
            }
        }
    }
}

impl Teacher for PdfaTeacher {
    fn alphabet(&self) -> &Alphabet {
        self.target.alphabet()
    }

    fn mq_next_symbol(&mut self, s: &[Sym]) -> Result<Distribution> {
        Ok(self.answer(s))
    }

    fn mq_last_symbol(&mut self, prefix: &[Sym], last: Option<Sym>) -> Result<f64> {
        Ok(self.answer(prefix).prob_of(last))
    }

    fn eq(&mut self, hypothesis: &Pdfa, comparator: Comparator) -> Result<Option<Counterexample>> {
        self.eq_calls += 1;
        match comparator {
            Comparator::Quantized(kappa) => eq_quantized(&self.target, hypothesis, kappa),
            Comparator::Tolerance(t) => eq_tolerance(&self.target, hypothesis, t),
        }
    }

    fn mq_count(&self) -> u64 {
        self.mq_calls
    }

    fn eq_count(&self) -> u64 {
        self.eq_calls
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[rb] = ra;
        true
    }
}

/// Hopcroft-Karp product traversal. Starts from the paired initial states and
/// walks the product breadth-first (symbol order within each pair), merging
/// paired states in a union-find; every merged pair is compared directly with
/// `pass`. On failure, the access string to the failing pair is rebuilt from
/// parent links, so counterexamples are deterministic and BFS-shortest.
fn product_check<F>(target: &Pdfa, hyp: &Pdfa, pass: F) -> Result<Option<Counterexample>>
where
    F: Fn(&Distribution, &Distribution) -> bool,
{
    if target.alphabet() != hyp.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let offset = target.num_states();
    let mut uf = UnionFind::new(offset + hyp.num_states());
    // (target state, hypothesis state, parent pair index + symbol taken)
    let mut pairs: Vec<(usize, usize, Option<(usize, Sym)>)> =
        vec![(target.initial(), hyp.initial(), None)];
    uf.union(target.initial(), hyp.initial() + offset);

    let mut next = 0;
    while next < pairs.len() {
        let (t, h, _) = pairs[next];
        if !pass(target.dist(t), hyp.dist(h)) {
            let mut gamma = Vec::new();
            let mut at = next;
            while let (_, _, Some((parent, sym))) = pairs[at] {
                gamma.push(sym);
                at = parent;
            }
            gamma.reverse();
            return Ok(Some(Counterexample { gamma }));
        }
        for sym in target.alphabet().symbols() {
            let tn = target.step(t, sym);
            let hn = hyp.step(h, sym);
            if uf.union(tn, hn + offset) {
                pairs.push((tn, hn, Some((next, sym))));
            }
        }
        next += 1;
    }
    Ok(None)
}

/// Equivalence up to κ-quantization. `None` iff target ≡_κ hypothesis.
pub fn eq_quantized(target: &Pdfa, hyp: &Pdfa, kappa: u32) -> Result<Option<Counterexample>> {
    if kappa < 1 {
        return Err(Error::InvalidKappa);
    }
    product_check(target, hyp, |a, b| {
        quantize_distribution(a, kappa).expect("distribution entries lie in [0,1]")
            == quantize_distribution(b, kappa).expect("distribution entries lie in [0,1]")
    })
}

/// Similarity up to tolerance `t`. Because `L∞ ≤ t` is not transitive, `None`
/// only guarantees that every directly compared pair passed.
pub fn eq_tolerance(target: &Pdfa, hyp: &Pdfa, t: f64) -> Result<Option<Counterexample>> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange(t));
    }
    product_check(target, hyp, |a, b| linf_distance(a, b) <= t)
}

/// Independent κ-equivalence check: computes the quantized congruence over
/// the disjoint union of the two automata and reports whether the initial
/// states share a class.
pub fn oracle_bisim(target: &Pdfa, hyp: &Pdfa, kappa: u32) -> Result<bool> {
    let (union, offset) = target.disjoint_union(hyp)?;
    let partition = quantized_partition(&union, kappa)?;
    Ok(partition.same_class(target.initial(), hyp.initial() + offset))
}
