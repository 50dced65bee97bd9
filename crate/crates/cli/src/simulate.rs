//! Nine-block grid images with Gaussian noise.

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{CliError, Result};

/// Block means, row-major over the 3×3 block layout.
pub const BLOCK_MEANS: [[f64; 3]; 3] = [[1.0, 5.0, 3.0], [2.0, 7.0, 4.0], [6.0, 9.0, 8.0]];

/// Noise levels of the published sweep.
pub const SIGMA_SWEEP: [f64; 9] = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25];

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub rows: usize,
    pub cols: usize,
    /// One feature column, pixel `(r, c)` at row `r * cols + c`.
    pub features: Array2<f64>,
    /// Block index `0..9` of every pixel.
    pub truth: Vec<usize>,
}

pub fn block_of(rows: usize, cols: usize, r: usize, c: usize) -> usize {
    (r / (rows / 3)) * 3 + c / (cols / 3)
}

pub fn simulate(rows: usize, cols: usize, sigma: f64, seed: u64) -> Result<Simulation> {
    if rows == 0 || cols == 0 || rows % 3 != 0 || cols % 3 != 0 {
        return Err(CliError::Validation(format!(
            "grid {rows}x{cols}: both dimensions must be positive multiples of 3"
        )));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(CliError::Validation(format!("sigma must be finite and non-negative (got {sigma})")));
    }
    let noise = Normal::new(0.0, sigma).expect("checked above");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut features = Array2::zeros((rows * cols, 1));
    let mut truth = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let b = block_of(rows, cols, r, c);
            features[[r * cols + c, 0]] = BLOCK_MEANS[b / 3][b % 3] + noise.sample(&mut rng);
            truth.push(b);
        }
    }
    Ok(Simulation {
        rows,
        cols,
        features,
        truth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_image_equals_block_means() {
        let s = simulate(30, 30, 0.0, 1).unwrap();
        assert_eq!(s.features[[0, 0]], 1.0);
        assert_eq!(s.features[[15 * 30 + 15, 0]], 7.0);
        assert_eq!(s.features[[29 * 30 + 29, 0]], 8.0);
        assert_eq!(s.truth[15 * 30 + 15], 4);
        assert!(simulate(10, 30, 0.5, 1).is_err());
        assert!(simulate(30, 30, -1.0, 1).is_err());
    }

    #[test]
    fn seeded() {
        assert_eq!(simulate(9, 9, 0.5, 7).unwrap(), simulate(9, 9, 0.5, 7).unwrap());
        assert_ne!(simulate(9, 9, 0.5, 7).unwrap(), simulate(9, 9, 0.5, 8).unwrap());
    }
}
