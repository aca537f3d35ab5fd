//! Random PDFA generation.
//!
//! A random DFA of `N = round(n·m/ρ_m)` total states (with
//! `ρ_m = m + W₀(−m·e^{−m})`) is drawn with uniform transition targets and
//! trimmed to its accessible part, which makes the accessible size
//! concentrate around the nominal size `n` without rejection sampling. The
//! trimmed DFA is then decorated with a random next-symbol distribution per
//! state, either fresh per state or drawn uniformly from a pre-sampled pool
//! of `d` shared distributions.
//!
//! All randomness flows through a seeded ChaCha generator; callers that need
//! independent trials use one child stream per trial via
//! [`random_pdfa_stream`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::alphabet::Alphabet;
use crate::automaton::Pdfa;
use crate::distribution::Distribution;
use crate::error::{Error, Result};

/// Principal branch of the Lambert W function, for `x ≥ -1/e`.
///
/// Damped Halley iteration from a branch-appropriate initial guess; the
/// result satisfies `|w·e^w - x| ≤ 1e-12`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    let min = -(-1.0f64).exp();
    if !x.is_finite() || x < min {
        return Err(Error::LambertDomain(x));
    }
    if x == min {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = if x < 0.0 {
        // Series around the branch point -1/e.
        let p = (2.0 * (std::f64::consts::E * x + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    } else if x > std::f64::consts::E {
        let l = x.ln();
        l - l.ln()
    } else {
        x / (1.0 + x)
    };
    for _ in 0..200 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= 1e-12 {
            return Ok(w);
        }
        let df = ew * (w + 1.0);
        let halley = df - (w + 2.0) * f / (2.0 * (w + 1.0));
        let mut step = f / halley;
        // Stay on the principal branch.
        while w - step <= -1.0 {
            step /= 2.0;
        }
        let next = w - step;
        if next == w {
            // Floating-point fixpoint; the residual is as small as f64 gets.
            break;
        }
        w = next;
    }
    Ok(w)
}

/// Total state count to draw so that the accessible part concentrates around
/// the nominal size `n`: `round(n·m/ρ_m)` with `ρ_m = m + W₀(-m·e^{-m})`.
/// The formula degenerates at `m = 1`, where the accessible part of a chain
/// is the chain itself, so `N = n`.
pub fn sample_size(n: usize, m: usize) -> Result<usize> {
    if n < 1 {
        return Err(Error::Config("nominal size must be >= 1".into()));
    }
    match m {
        0 => Err(Error::Config("alphabet size must be >= 1".into())),
        1 => Ok(n),
        _ => {
            let mf = m as f64;
            let rho = mf + lambert_w0(-mf * (-mf).exp())?;
            Ok(((n as f64) * mf / rho).round() as usize)
        }
    }
}

/// A bare transition table; state 0 is initial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet_size: usize,
    /// `trans[state][symbol]`.
    pub trans: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn num_states(&self) -> usize {
        self.trans.len()
    }
}

/// Uniformly random transition table over `n` states.
pub fn random_dfa<R: Rng>(n: usize, m: usize, rng: &mut R) -> Dfa {
    let trans = (0..n)
        .map(|_| (0..m).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    Dfa {
        alphabet_size: m,
        trans,
    }
}

/// Subautomaton reachable from state 0, renumbered in depth-first discovery
/// order (children visited in symbol order).
pub fn accessible_part(dfa: &Dfa) -> Dfa {
    let n = dfa.num_states();
    let mut number = vec![usize::MAX; n];
    let mut order = Vec::new();
    number[0] = 0;
    order.push(0);
    let mut stack = vec![(0usize, 0usize)];
    while let Some((q, sym)) = stack.pop() {
        if sym < dfa.alphabet_size {
            stack.push((q, sym + 1));
            let t = dfa.trans[q][sym];
            if number[t] == usize::MAX {
                number[t] = order.len();
                order.push(t);
                stack.push((t, 0));
            }
        }
    }
    let trans = order
        .iter()
        .map(|&q| dfa.trans[q].iter().map(|&t| number[t]).collect())
        .collect();
    Dfa {
        alphabet_size: dfa.alphabet_size,
        trans,
    }
}

/// Uniform point on the `(m+1)`-simplex: normalized unit exponentials.
pub fn random_distribution<R: Rng>(m: usize, rng: &mut R) -> Distribution {
    let draws: Vec<f64> = (0..=m).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let sum: f64 = draws.iter().sum();
    Distribution::new(draws.into_iter().map(|e| e / sum).collect())
        .expect("normalized exponentials form a simplex")
}

/// Generator configuration.
#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Nominal (desired accessible) state count.
    pub nominal_size: usize,
    /// Alphabet size; symbols are named "0", "1", ....
    pub alphabet_size: usize,
    /// When set, draw this many distributions up front and label each state
    /// with a uniformly picked member of the pool.
    pub shared_dists: Option<usize>,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(nominal_size: usize, alphabet_size: usize, seed: u64) -> Self {
        GenConfig {
            nominal_size,
            alphabet_size,
            shared_dists: None,
            seed,
        }
    }

    pub fn with_shared_dists(mut self, d: usize) -> Self {
        self.shared_dists = Some(d);
        self
    }
}

/// Generates a random PDFA. The accessible size is *not* forced to equal the
/// nominal size, only concentrated around it; the caller reads the actual
/// size off the result.
pub fn random_pdfa(cfg: &GenConfig) -> Result<Pdfa> {
    random_pdfa_stream(cfg, 0)
}

/// Like [`random_pdfa`] but on a dedicated ChaCha stream, so concurrent
/// trials under one master seed stay statistically independent and
/// individually reproducible.
pub fn random_pdfa_stream(cfg: &GenConfig, stream: u64) -> Result<Pdfa> {
    if cfg.nominal_size < 1 {
        return Err(Error::Config("nominal size must be >= 1".into()));
    }
    if cfg.alphabet_size < 1 {
        return Err(Error::Config("alphabet size must be >= 1".into()));
    }
    if cfg.shared_dists == Some(0) {
        return Err(Error::Config("shared distribution count must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);

    let total = sample_size(cfg.nominal_size, cfg.alphabet_size)?;
    let dfa = random_dfa(total, cfg.alphabet_size, &mut rng);
    let dfa = accessible_part(&dfa);

    let dists: Vec<Distribution> = match cfg.shared_dists {
        None => (0..dfa.num_states())
            .map(|_| random_distribution(cfg.alphabet_size, &mut rng))
            .collect(),
        Some(d) => {
            let pool: Vec<Distribution> = (0..d)
                .map(|_| random_distribution(cfg.alphabet_size, &mut rng))
                .collect();
            (0..dfa.num_states())
                .map(|_| pool[rng.gen_range(0..d)].clone())
                .collect()
        }
    };
    let states = dists.into_iter().zip(dfa.trans).collect();
    Pdfa::new(Alphabet::numeric(cfg.alphabet_size), 0, states)
}
