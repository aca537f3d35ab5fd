//! Interval quantization of probabilities and distributions.
//!
//! A quantization parameter `κ ≥ 1` cuts `[0, 1]` into κ cells
//! `[n/κ, (n+1)/κ)` with the last cell closed at 1. Two values are
//! κ-equivalent when they land in the same cell; unlike a tolerance test this
//! is a genuine equivalence relation, which is what lets the learner treat
//! quantized distributions as state keys.
//!
//! Cell indices are computed as `min(floor(x·κ), κ-1)` in plain double
//! precision. Inputs within one ulp below a cell boundary land in the lower
//! cell; no epsilon snapping is applied, so the cells partition `[0, 1]`
//! exactly and all comparisons stay index-based.

use std::fmt;

use crate::distribution::Distribution;
use crate::error::{Error, Result};

/// Returns the index `n` of the cell of `x`, in `[0, κ-1]`.
pub fn interval_index(x: f64, kappa: u32) -> Result<u32> {
    if kappa < 1 {
        return Err(Error::InvalidKappa);
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(x));
    }
    Ok(((x * kappa as f64).floor() as u32).min(kappa - 1))
}

/// The cell-index vector of a distribution under a fixed κ.
///
/// Layout follows the distribution: position 0 is the terminal. Vectors are
/// equal only when both κ and all indices agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantVector {
    kappa: u32,
    cells: Vec<u32>,
}

impl QuantVector {
    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }
}

impl fmt::Display for QuantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Componentwise [`interval_index`] of a distribution.
pub fn quantize_distribution(d: &Distribution, kappa: u32) -> Result<QuantVector> {
    let cells = d
        .as_slice()
        .iter()
        .map(|&p| interval_index(p, kappa))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuantVector { kappa, cells })
}

/// True iff the two distributions share a quantization cell per coordinate.
pub fn quant_equal(d1: &Distribution, d2: &Distribution, kappa: u32) -> Result<bool> {
    Ok(quantize_distribution(d1, kappa)? == quantize_distribution(d2, kappa)?)
}

/// `L∞` distance: the maximum absolute componentwise difference.
pub fn linf_distance(d1: &Distribution, d2: &Distribution) -> f64 {
    d1.as_slice()
        .iter()
        .zip(d2.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn dist(probs: &[f64]) -> Distribution {
        Distribution::new(probs.to_vec()).unwrap()
    }

    #[test]
    fn interval_index_examples() {
        assert_eq!(interval_index(0.5, 2).unwrap(), 1);
        for kappa in [1, 2, 5, 10, 1000] {
            assert_eq!(interval_index(1.0, kappa).unwrap(), kappa - 1);
            assert_eq!(interval_index(0.0, kappa).unwrap(), 0);
        }
        assert_eq!(interval_index(0.45, 5).unwrap(), 2);
        assert_eq!(interval_index(0.55, 5).unwrap(), 2);
    }

    #[test]
    fn interval_index_rejects_bad_input() {
        assert!(matches!(
            interval_index(-0.1, 5),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(interval_index(1.1, 5), Err(Error::OutOfRange(_))));
        assert!(matches!(interval_index(0.5, 0), Err(Error::InvalidKappa)));
    }

    #[test]
    fn quantize_distribution_examples() {
        let v = quantize_distribution(&dist(&[0.1, 0.3, 0.6]), 2).unwrap();
        assert_eq!(v.cells(), &[0, 0, 1]);
        let v = quantize_distribution(&dist(&[0.0, 0.5, 0.5]), 10).unwrap();
        assert_eq!(v.cells(), &[0, 5, 5]);
        assert_eq!(v.to_string(), "(0, 5, 5)");
        let v = quantize_distribution(&dist(&[1.0, 0.0, 0.0]), 7).unwrap();
        assert_eq!(v.cells(), &[6, 0, 0]);
    }

    #[test]
    fn tomita2_cells_at_kappa_10() {
        let t = fixtures::weighted_tomita2();
        let cells: Vec<_> = t
            .states()
            .map(|q| quantize_distribution(t.dist(q), 10).unwrap())
            .collect();
        assert_eq!(cells[0].cells(), &[0, 5, 5]);
        assert_eq!(cells[1].cells(), &[1, 3, 6]);
        assert_eq!(cells[2].cells(), &[1, 6, 3]);
        assert_eq!(cells[3].cells(), &[1, 3, 6]);
    }

    #[test]
    fn quant_equal_examples() {
        // Perturbing within the κ=5 cells keeps states equivalent.
        let a = fixtures::unary_geometric();
        let ae = fixtures::unary_geometric_perturbed(0.05);
        for q in 0..2 {
            assert!(quant_equal(a.dist(q), ae.dist(q), 5).unwrap());
        }
        let d = dist(&[0.2, 0.5, 0.3]);
        assert!(quant_equal(&d, &d, 17).unwrap());
        assert!(!quant_equal(&dist(&[0.19, 0.81, 0.0]), &dist(&[0.21, 0.79, 0.0]), 10).unwrap());
    }

    #[test]
    fn kappa_mismatch_is_never_equal() {
        let d = dist(&[0.2, 0.8]);
        let v5 = quantize_distribution(&d, 5).unwrap();
        let v10 = quantize_distribution(&d, 10).unwrap();
        assert_ne!(v5, v10);
    }

    #[test]
    fn linf_examples() {
        let d = dist(&[0.3, 0.7]);
        assert_eq!(linf_distance(&d, &d), 0.0);
        assert_eq!(
            linf_distance(&dist(&[0.0, 0.5, 0.5]), &dist(&[0.1, 0.6, 0.3])),
            0.2
        );
        let a = fixtures::unary_geometric();
        let ae = fixtures::unary_geometric_perturbed(0.05);
        assert!((linf_distance(a.dist(1), ae.dist(1)) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn kappa_one_collapses_everything() {
        for probs in [&[1.0, 0.0][..], &[0.25, 0.75], &[0.0, 0.5, 0.5]] {
            let v = quantize_distribution(&dist(probs), 1).unwrap();
            assert!(v.cells().iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn quant_equal_is_an_equivalence_on_a_grid() {
        // Exhaustive triples over a grid of two-coordinate distributions.
        let grid: Vec<Distribution> = (0..=20).map(|i| dist(&[i as f64 / 20.0, 1.0 - i as f64 / 20.0])).collect();
        for kappa in [1, 2, 3, 5, 10] {
            for a in &grid {
                assert!(quant_equal(a, a, kappa).unwrap());
                for b in &grid {
                    assert_eq!(
                        quant_equal(a, b, kappa).unwrap(),
                        quant_equal(b, a, kappa).unwrap()
                    );
                    for c in &grid {
                        if quant_equal(a, b, kappa).unwrap() && quant_equal(b, c, kappa).unwrap() {
                            assert!(quant_equal(a, c, kappa).unwrap());
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn index_is_monotone_and_total(x in 0.0f64..=1.0, y in 0.0f64..=1.0, kappa in 1u32..500) {
            let ix = interval_index(x, kappa).unwrap();
            let iy = interval_index(y, kappa).unwrap();
            prop_assert!(ix < kappa);
            if x <= y {
                prop_assert!(ix <= iy);
            }
        }

        #[test]
        fn same_cell_implies_close(a in 0.0f64..=1.0, b in 0.0f64..=1.0, kappa in 1u32..200) {
            let pa = dist(&[a, 1.0 - a]);
            let pb = dist(&[b, 1.0 - b]);
            if quant_equal(&pa, &pb, kappa).unwrap() {
                prop_assert!(linf_distance(&pa, &pb) <= 1.0 / kappa as f64);
            }
        }
    }
}
