//! Double-homodyne (heterodyne) detection of one support mode jointly with
//! a reference mode, and the Gaussian state it leaves on the other modes.
//!
//! The measured mode `a` and the reference mode `b` are mixed so that the
//! recorded quadrature pair is `z = x_a - P·x_b`, `P = Diag(1, -1)`. For a
//! support with blocks `A` (measured mode), `B` (remaining modes) and
//! coupling `C`, the outcome is Gaussian with covariance `A + M`,
//! `M = P·σ_ref·P`, and the remaining modes are left with
//!
//! ```text
//! σ_c = B - Cᵀ(A + M)⁻¹C,    H = m_B + Cᵀ(A + M)⁻¹X,    X = z + P·x_ref - m_A.
//! ```

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use super::GaussianState;
use crate::error::{Error, Result};

/// Largest accepted condition number of `A + M`.
pub const MAX_CONDITION: f64 = 1e12;

/// Result `z` of a double-homodyne detection, in quadrature units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOutcome {
    z: Vector2<f64>,
}

impl MeasurementOutcome {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::domain(format!(
                "non-finite measurement outcome ({re}, {im})"
            )));
        }
        Ok(Self {
            z: Vector2::new(re, im),
        })
    }

    pub fn from_vector(z: Vector2<f64>) -> Result<Self> {
        Self::new(z[0], z[1])
    }

    pub fn z(&self) -> Vector2<f64> {
        self.z
    }
}

/// Everything about a double-homodyne measurement that does not depend on
/// the particular outcome.
#[derive(Debug, Clone)]
pub struct ConditionalGaussian {
    remaining: Vec<usize>,
    rest_mean: DVector<f64>,
    cond_cov: DMatrix<f64>,
    gain: DMatrix<f64>,
    outcome_mean: Vector2<f64>,
    outcome_cov: Matrix2<f64>,
    outcome_cov_inv: Matrix2<f64>,
    outcome_cov_det: f64,
}

impl ConditionalGaussian {
    pub fn new(
        support: &GaussianState,
        measured_mode: usize,
        reference_cov: &Matrix2<f64>,
        reference_mean: &Vector2<f64>,
    ) -> Result<Self> {
        let n = support.n_modes();
        if n < 2 {
            return Err(Error::domain(
                "conditioning needs a support of at least 2 modes",
            ));
        }
        if measured_mode >= n {
            return Err(Error::domain(format!(
                "measured mode {measured_mode} out of range for {n} modes"
            )));
        }
        if (reference_cov - reference_cov.transpose()).amax()
            > 1e-12 * reference_cov.amax().max(1.0)
            || reference_cov.cholesky().is_none()
        {
            return Err(Error::domain(
                "reference covariance must be symmetric positive definite",
            ));
        }

        let p = super::reflection();
        let remaining: Vec<usize> = (0..n).filter(|&k| k != measured_mode).collect();
        let idx: Vec<usize> = remaining.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let cov = support.cov();
        let a = support.mode_cov(measured_mode);
        let b = DMatrix::from_fn(idx.len(), idx.len(), |r, c| cov[(idx[r], idx[c])]);
        let c = DMatrix::from_fn(2, idx.len(), |r, col| {
            cov[(2 * measured_mode + r, idx[col])]
        });

        let s = a + p * reference_cov * p;
        let s = (s + s.transpose()) * 0.5;
        let eig = s.symmetric_eigenvalues();
        let (lo, hi) = (eig.min(), eig.max());
        if lo <= 0.0 || hi / lo > MAX_CONDITION {
            return Err(Error::numerical(format!(
                "A + M is singular or ill-conditioned (eigenvalues {lo:.3e}, {hi:.3e})"
            )));
        }
        let chol = s
            .cholesky()
            .ok_or_else(|| Error::numerical("Cholesky factorization of A + M failed"))?;
        let s_inv = chol.inverse();
        let s_inv_dyn = DMatrix::from_column_slice(2, 2, s_inv.as_slice());
        let ct = c.transpose();
        let gain = &ct * &s_inv_dyn;
        let cond_cov = &b - &gain * &c;
        let cond_cov = (&cond_cov + cond_cov.transpose()) * 0.5;

        let rest_mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| support.mean()[i]));
        let outcome_mean = support.mode_mean(measured_mode) - p * reference_mean;

        Ok(Self {
            remaining,
            rest_mean,
            cond_cov,
            gain,
            outcome_mean,
            outcome_cov: s,
            outcome_cov_inv: s_inv,
            outcome_cov_det: s.determinant(),
        })
    }

    /// Original indices of the unmeasured modes, in output order.
    pub fn remaining_modes(&self) -> &[usize] {
        &self.remaining
    }

    /// `σ_c`, independent of the outcome.
    pub fn conditional_cov(&self) -> &DMatrix<f64> {
        &self.cond_cov
    }

    /// `Cᵀ(A + M)⁻¹`: how the conditional mean responds to the outcome.
    pub fn gain(&self) -> &DMatrix<f64> {
        &self.gain
    }

    /// Mean of the outcome distribution.
    pub fn outcome_mean(&self) -> Vector2<f64> {
        self.outcome_mean
    }

    /// Covariance `A + M` of the outcome distribution.
    pub fn outcome_cov(&self) -> Matrix2<f64> {
        self.outcome_cov
    }

    /// Centred outcome `X`.
    pub fn centred(&self, outcome: &MeasurementOutcome) -> Vector2<f64> {
        outcome.z() - self.outcome_mean
    }

    /// Normalized probability density of the outcome over the real plane.
    pub fn density(&self, outcome: &MeasurementOutcome) -> f64 {
        let x = self.centred(outcome);
        let quad = (x.transpose() * self.outcome_cov_inv * x)[(0, 0)];
        (-0.5 * quad).exp() / (2.0 * std::f64::consts::PI * self.outcome_cov_det.sqrt())
    }

    /// Conditional state of the remaining modes and the outcome density.
    pub fn at(&self, outcome: &MeasurementOutcome) -> (GaussianState, f64) {
        let x = self.centred(outcome);
        let x = DVector::from_column_slice(x.as_slice());
        let mean = &self.rest_mean + &self.gain * x;
        (
            GaussianState::from_parts(mean, self.cond_cov.clone()),
            self.density(outcome),
        )
    }
}

impl GaussianState {
    /// Measures `measured_mode` jointly with a reference mode in the Gaussian
    /// state `(reference_mean, reference_cov)` and returns the conditional
    /// state of the other modes together with the outcome density.
    pub fn condition_on_double_homodyne(
        &self,
        measured_mode: usize,
        reference_cov: &Matrix2<f64>,
        reference_mean: &Vector2<f64>,
        outcome: &MeasurementOutcome,
    ) -> Result<(GaussianState, f64)> {
        let cg = ConditionalGaussian::new(self, measured_mode, reference_cov, reference_mean)?;
        Ok(cg.at(outcome))
    }
}
