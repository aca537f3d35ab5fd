//! Next-symbol evaluation metrics.
//!
//! All three metrics compare target and hypothesis along the prefixes of a
//! sampled test set: word error rate counts positions where the most likely
//! next symbol differs, NDCG scores the hypothesis's ranking of next symbols
//! against the target's probabilities, and the log-probability error compares
//! whole-string probabilities on a log scale.

use rand::Rng;

use crate::alphabet::Word;
use crate::automaton::Pdfa;
use crate::distribution::Distribution;

/// Floor for string probabilities before taking logs.
const LOG_FLOOR: f64 = 1e-300;

/// An evaluation corpus sampled from (or supplied for) a target automaton.
#[derive(Debug, Clone)]
pub struct TestSet {
    pub strings: Vec<Word>,
    pub max_len: usize,
    truncated: usize,
}

impl TestSet {
    pub fn from_strings(strings: Vec<Word>) -> Self {
        let max_len = strings.iter().map(Vec::len).max().unwrap_or(0);
        TestSet {
            strings,
            max_len,
            truncated: 0,
        }
    }

    /// Strings that hit the length cap instead of drawing the terminal.
    pub fn truncated_count(&self) -> usize {
        self.truncated
    }
}

/// Samples `count` strings by walking the target: at each state the next
/// symbol is drawn from its distribution and the walk stops on the terminal
/// or at `max_len` (truncated strings are kept and flagged).
pub fn sample_strings<R: Rng>(target: &Pdfa, count: usize, max_len: usize, rng: &mut R) -> TestSet {
    let mut strings = Vec::with_capacity(count);
    let mut truncated = 0;
    for _ in 0..count {
        let mut q = target.initial();
        let mut s = Word::new();
        loop {
            if s.len() == max_len {
                truncated += 1;
                break;
            }
            let dist = target.dist(q);
            let mut u: f64 = rng.gen();
            let mut stop = true;
            if u < dist.terminal() {
                // Terminal drawn.
            } else {
                u -= dist.terminal();
                for sym in target.alphabet().symbols() {
                    if u < dist.symbol(sym) || sym == target.alphabet().len() - 1 {
                        s.push(sym);
                        q = target.step(q, sym);
                        stop = false;
                        break;
                    }
                    u -= dist.symbol(sym);
                }
            }
            if stop {
                break;
            }
        }
        strings.push(s);
    }
    TestSet {
        strings,
        max_len,
        truncated,
    }
}

/// Index of the largest entry, first-in-layout-order on ties.
fn argmax(d: &Distribution) -> usize {
    let mut best = 0;
    for (i, &p) in d.as_slice().iter().enumerate() {
        if p > d.layout(best) {
            best = i;
        }
    }
    best
}

/// Walks target and hypothesis together over every prefix of every test
/// string (including the empty and the full prefix) and folds the paired
/// next-symbol distributions.
fn fold_positions<F>(target: &Pdfa, hyp: &Pdfa, ts: &TestSet, mut f: F) -> usize
where
    F: FnMut(&Distribution, &Distribution),
{
    let mut positions = 0;
    for s in &ts.strings {
        let mut tq = target.initial();
        let mut hq = hyp.initial();
        for i in 0..=s.len() {
            f(target.dist(tq), hyp.dist(hq));
            positions += 1;
            if i < s.len() {
                tq = target.step(tq, s[i]);
                hq = hyp.step(hq, s[i]);
            }
        }
    }
    positions
}

/// Fraction of positions where the hypothesis's most likely next symbol
/// differs from the target's (ties broken by layout order on both sides).
pub fn wer(target: &Pdfa, hyp: &Pdfa, ts: &TestSet) -> f64 {
    let mut errors = 0usize;
    let positions = fold_positions(target, hyp, ts, |td, hd| {
        if argmax(td) != argmax(hd) {
            errors += 1;
        }
    });
    if positions == 0 {
        return 0.0;
    }
    errors as f64 / positions as f64
}

/// Symbol indices sorted by descending probability, layout order on ties.
fn ranking(d: &Distribution) -> Vec<usize> {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d.layout(b).partial_cmp(&d.layout(a)).expect("finite probs"));
    order
}

/// Mean normalized discounted cumulative gain over all positions: the
/// hypothesis ranks the next symbols, gains are the target's probabilities,
/// and the normalizer is the target's own best ordering. Positions with a
/// zero ideal gain contribute 1.
pub fn ndcg(target: &Pdfa, hyp: &Pdfa, ts: &TestSet) -> f64 {
    let mut total = 0.0;
    let positions = fold_positions(target, hyp, ts, |td, hd| {
        let dcg: f64 = ranking(hd)
            .iter()
            .enumerate()
            .map(|(r, &sym)| td.layout(sym) / ((r + 2) as f64).log2())
            .sum();
        let idcg: f64 = ranking(td)
            .iter()
            .enumerate()
            .map(|(r, &sym)| td.layout(sym) / ((r + 2) as f64).log2())
            .sum();
        total += if idcg == 0.0 { 1.0 } else { dcg / idcg };
    });
    if positions == 0 {
        return 1.0;
    }
    total / positions as f64
}

/// Mean absolute difference of log string probabilities, floored at 1e-300
/// so that strings both sides assign probability 0 contribute nothing.
pub fn logprob_err(target: &Pdfa, hyp: &Pdfa, ts: &TestSet) -> f64 {
    if ts.strings.is_empty() {
        return 0.0;
    }
    let sum: f64 = ts
        .strings
        .iter()
        .map(|s| {
            let ft = target.string_prob(s).max(LOG_FLOOR).ln();
            let fh = hyp.string_prob(s).max(LOG_FLOOR).ln();
            (ft - fh).abs()
        })
        .sum();
    sum / ts.strings.len() as f64
}
