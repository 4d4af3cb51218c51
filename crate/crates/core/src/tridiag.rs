//! Tridiagonal matrices in banded storage, with the Thomas solve used by the
//! implicit half of the diffusion step.

use crate::error::{Error, Result};

/// Banded storage: row `i` is `(sub[i], diag[i], sup[i])` acting on
/// `(x[i-1], x[i], x[i+1])`; `sub[0]` and `sup[n-1]` are ignored.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Self {
            sub: vec![0.0; n],
            diag: vec![0.0; n],
            sup: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `out = A x`.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = self.len();
        debug_assert_eq!(x.len(), n);
        debug_assert_eq!(out.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.sub[i] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.sup[i] * x[i + 1];
            }
            out[i] = acc;
        }
    }

    /// Thomas algorithm without pivoting. The diffusion matrices this crate
    /// builds are strictly diagonally dominant, so a vanishing pivot means a
    /// bug upstream, not an unlucky input.
    pub fn solve_into(&self, rhs: &[f64], scratch: &mut Vec<f64>, out: &mut Vec<f64>) -> Result<()> {
        let n = self.len();
        debug_assert_eq!(rhs.len(), n);
        scratch.clear();
        scratch.resize(n, 0.0);
        out.clear();
        out.resize(n, 0.0);

        let mut beta = self.diag[0];
        if beta == 0.0 {
            return Err(Error::InternalConsistency(
                "tridiagonal solve hit a zero pivot in row 0".into(),
            ));
        }
        out[0] = rhs[0] / beta;
        for i in 1..n {
            scratch[i] = self.sup[i - 1] / beta;
            beta = self.diag[i] - self.sub[i] * scratch[i];
            if beta == 0.0 {
                return Err(Error::InternalConsistency(format!(
                    "tridiagonal solve hit a zero pivot in row {i}"
                )));
            }
            out[i] = (rhs[i] - self.sub[i] * out[i - 1]) / beta;
        }
        for i in (0..n - 1).rev() {
            out[i] -= scratch[i + 1] * out[i + 1];
        }
        Ok(())
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut scratch = Vec::new();
        let mut out = Vec::new();
        self.solve_into(rhs, &mut scratch, &mut out)?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_recovers_known_solution() {
        let n = 12;
        let mut a = Tridiagonal::zeros(n);
        for i in 0..n {
            a.diag[i] = 4.0 + (i as f64) * 0.1;
            if i > 0 {
                a.sub[i] = -1.0;
            }
            if i + 1 < n {
                a.sup[i] = -1.3;
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        let mut rhs = vec![0.0; n];
        a.apply(&x_true, &mut rhs);
        let x = a.solve(&rhs).unwrap();
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).abs() < 1e-12, "{xi} vs {ti}");
        }
    }
}
