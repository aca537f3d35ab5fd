//! Small hand-built automata shared by the test suites and docs.

use crate::alphabet::Alphabet;
use crate::automaton::Pdfa;
use crate::distribution::Distribution;

fn build(alphabet: Alphabet, initial: usize, rows: &[(&[f64], &[usize])]) -> Pdfa {
    let states = rows
        .iter()
        .map(|(probs, trans)| {
            (
                Distribution::new(probs.to_vec()).expect("fixture distribution"),
                trans.to_vec(),
            )
        })
        .collect();
    Pdfa::new(alphabet, initial, states).expect("fixture automaton")
}

/// Two states over `{a}`: maps λ to 0 and every `a^n`, n ≥ 1, to `0.5^n`.
/// Minimal (and therefore weakly minimal).
pub fn unary_geometric() -> Pdfa {
    build(
        Alphabet::new(["a"]).unwrap(),
        0,
        &[(&[0.0, 1.0], &[1]), (&[0.5, 0.5], &[1])],
    )
}

/// [`unary_geometric`] with the loop state perturbed by `eps`: maps `a^n` to
/// `(0.5 - eps)^{n-1} · (0.5 + eps)`.
pub fn unary_geometric_perturbed(eps: f64) -> Pdfa {
    build(
        Alphabet::new(["a"]).unwrap(),
        0,
        &[(&[0.0, 1.0], &[1]), (&[0.5 + eps, 0.5 - eps], &[1])],
    )
}

/// Four states over `{a, b}` assigning `(0.1·0.2)^{k}·0.3` to `(ab)^k`, k ≥ 1,
/// and 0 elsewhere. Weakly minimal.
pub fn ab_cycle_small() -> Pdfa {
    build(
        Alphabet::new(["a", "b"]).unwrap(),
        0,
        &[
            (&[0.0, 0.1, 0.9], &[1, 3]),
            (&[0.0, 0.8, 0.2], &[3, 2]),
            (&[0.3, 0.1, 0.6], &[1, 3]),
            (&[0.0, 0.5, 0.5], &[3, 3]),
        ],
    )
}

/// Five states computing the same function as [`ab_cycle_small`] by
/// alternating between two ab-cycles. Weakly minimal but not minimal, so the
/// two automata witness that equal functions do not imply congruent automata.
pub fn ab_cycle_large() -> Pdfa {
    build(
        Alphabet::new(["a", "b"]).unwrap(),
        0,
        &[
            (&[0.0, 0.1, 0.9], &[1, 3]),
            (&[0.0, 0.8, 0.2], &[3, 2]),
            (&[0.3, 0.2, 0.5], &[4, 3]),
            (&[0.0, 0.5, 0.5], &[3, 3]),
            (&[0.0, 0.9, 0.1], &[3, 2]),
        ],
    )
}

/// Weighted adaptation of the Tomita-2 grammar over `{0, 1}`: four states
/// (initial, after-0, after-1, after-10) where the after-0 and after-10
/// states share a distribution but differ in their continuations.
pub fn weighted_tomita2() -> Pdfa {
    build(
        Alphabet::new(["0", "1"]).unwrap(),
        0,
        &[
            (&[0.0, 0.5, 0.5], &[1, 2]),
            (&[0.1, 0.3, 0.6], &[1, 3]),
            (&[0.1, 0.6, 0.3], &[3, 2]),
            (&[0.1, 0.3, 0.6], &[1, 2]),
        ],
    )
}
