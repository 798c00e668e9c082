//! Gaussian states of `n` bosonic modes in the quadrature representation.
//!
//! Quadratures are ordered `(q_1, p_1, ..., q_n, p_n)` with
//! `q = (a + a†)/√2`, so the vacuum has covariance `½·I` and a coherent
//! state `|α⟩` has mean `√2·(Re α, Im α)`.

mod measurement;
mod symplectic;

pub use measurement::{ConditionalGaussian, MeasurementOutcome};
pub use symplectic::{ppt_min_symplectic, symplectic_eigenvalues, symplectic_form, ModePartition};

use nalgebra::{Complex, DMatrix, DVector, Matrix2, Vector2};

use crate::error::{Error, Result};

/// Absolute tolerance on `cov - covᵀ` accepted on construction (scaled by
/// the largest entry when that exceeds one).
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Slack below ½ tolerated on the smallest symplectic eigenvalue.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Reflection `Diag(1, -1)` acting on one mode.
pub fn reflection() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

/// Quadrature mean of the coherent state `|α⟩`.
pub fn coherent_mean(alpha: Complex<f64>) -> Vector2<f64> {
    Vector2::new(
        std::f64::consts::SQRT_2 * alpha.re,
        std::f64::consts::SQRT_2 * alpha.im,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state after checking dimensions, symmetry and physicality.
    /// The covariance is symmetrized as `(M + Mᵀ)/2`.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "mean vector must have positive even length, got {dim}"
            )));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::domain(format!(
                "covariance must be {dim}x{dim}, got {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.iter().chain(cov.iter()).any(|x| !x.is_finite()) {
            return Err(Error::domain("non-finite entry in mean or covariance"));
        }
        let cov = symmetrized(&cov)?;
        let state = Self::from_parts(mean, cov);
        let nu_min = state.min_symplectic_eigenvalue()?;
        if nu_min < 0.5 - PHYSICALITY_TOL {
            return Err(Error::domain(format!(
                "unphysical covariance: smallest symplectic eigenvalue {nu_min} < 1/2"
            )));
        }
        Ok(state)
    }

    /// Internal constructor for operations that preserve symmetry and
    /// physicality by construction.
    pub(crate) fn from_parts(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        debug_assert_eq!(mean.len() % 2, 0);
        debug_assert_eq!(cov.nrows(), mean.len());
        Self {
            n_modes: mean.len() / 2,
            mean,
            cov,
        }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self::thermal(n_modes, 0.0)
    }

    /// Product of `n_modes` thermal states with `mu` mean photons each.
    pub fn thermal(n_modes: usize, mu: f64) -> Self {
        let dim = 2 * n_modes;
        Self::from_parts(
            DVector::zeros(dim),
            DMatrix::identity(dim, dim) * (mu + 0.5),
        )
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Mean of one mode.
    pub fn mode_mean(&self, mode: usize) -> Vector2<f64> {
        Vector2::new(self.mean[2 * mode], self.mean[2 * mode + 1])
    }

    /// 2x2 covariance block of one mode.
    pub fn mode_cov(&self, mode: usize) -> Matrix2<f64> {
        self.cov.fixed_view::<2, 2>(2 * mode, 2 * mode).into_owned()
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(&self.cov)
    }

    pub fn min_symplectic_eigenvalue(&self) -> Result<f64> {
        Ok(self.symplectic_eigenvalues()?[0])
    }

    /// Tensor product `self ⊗ other`, with `other`'s modes appended.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (d1, d2) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(d1 + d2);
        mean.rows_mut(0, d1).copy_from(&self.mean);
        mean.rows_mut(d1, d2).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(d1 + d2, d1 + d2);
        cov.view_mut((0, 0), (d1, d1)).copy_from(&self.cov);
        cov.view_mut((d1, d1), (d2, d2)).copy_from(&other.cov);
        GaussianState::from_parts(mean, cov)
    }

    /// Thermal-loss channel on every mode: `cov' = G^½ cov G^½ + (1 - G)(μ + ½)`,
    /// `mean' = G^½ mean`, with `G = ⊕ e^{-τ_k} I₂`.
    pub fn apply_thermal_loss(&self, params: &[ThermalLossParams]) -> Result<GaussianState> {
        if params.len() != self.n_modes {
            return Err(Error::domain(format!(
                "expected {} channel parameters, got {}",
                self.n_modes,
                params.len()
            )));
        }
        let gains: Vec<f64> = params.iter().map(|p| (-0.5 * p.tau).exp()).collect();
        let dim = 2 * self.n_modes;
        let mut mean = self.mean.clone();
        let mut cov = self.cov.clone();
        for i in 0..dim {
            mean[i] *= gains[i / 2];
            for j in 0..dim {
                cov[(i, j)] *= gains[i / 2] * gains[j / 2];
            }
        }
        for (k, p) in params.iter().enumerate() {
            let added = (1.0 - (-p.tau).exp()) * p.kappa();
            cov[(2 * k, 2 * k)] += added;
            cov[(2 * k + 1, 2 * k + 1)] += added;
        }
        Ok(GaussianState::from_parts(mean, cov))
    }

    /// Product displacement: `mean += (shift_1, ..., shift_n)`.
    pub fn displace(&self, shifts: &[Vector2<f64>]) -> Result<GaussianState> {
        if shifts.len() != self.n_modes {
            return Err(Error::domain(format!(
                "expected {} displacements, got {}",
                self.n_modes,
                shifts.len()
            )));
        }
        let mut mean = self.mean.clone();
        for (k, s) in shifts.iter().enumerate() {
            mean[2 * k] += s[0];
            mean[2 * k + 1] += s[1];
        }
        Ok(GaussianState::from_parts(mean, self.cov.clone()))
    }

    /// Reduced state on the modes in `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<GaussianState> {
        if keep.is_empty() {
            return Err(Error::domain("partial trace must keep at least one mode"));
        }
        let mut seen = vec![false; self.n_modes];
        for &k in keep {
            if k >= self.n_modes || seen[k] {
                return Err(Error::domain(format!(
                    "invalid or repeated mode index {k} for a {}-mode state",
                    self.n_modes
                )));
            }
            seen[k] = true;
        }
        let idx: Vec<usize> = keep.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.cov[(idx[r], idx[c])]);
        Ok(GaussianState::from_parts(mean, cov))
    }

    /// Overlap `⟨α|ρ|α⟩` of a single-mode state with a coherent state:
    /// `exp{-½ δᵀ(σ + ½I)⁻¹δ} / √det(σ + ½I)`, `δ` the mean offset.
    pub fn fidelity_to_coherent(&self, alpha: Complex<f64>) -> Result<f64> {
        if self.n_modes != 1 {
            return Err(Error::domain(format!(
                "fidelity to a coherent state needs a 1-mode state, got {} modes",
                self.n_modes
            )));
        }
        Ok(coherent_overlap(
            &self.mode_cov(0),
            &(self.mode_mean(0) - coherent_mean(alpha)),
        ))
    }
}

/// Gaussian overlap with a coherent state given the 2x2 covariance and the
/// mean offset from the coherent amplitude.
pub(crate) fn coherent_overlap(cov: &Matrix2<f64>, offset: &Vector2<f64>) -> f64 {
    let shifted = cov + Matrix2::identity() * 0.5;
    let det = shifted.determinant();
    // σ + ½I is positive definite for any physical σ, so the inverse exists.
    let inv = shifted.try_inverse().unwrap_or_else(Matrix2::zeros);
    let quad = (offset.transpose() * inv * offset)[(0, 0)];
    (-0.5 * quad).exp() / det.sqrt()
}

/// Coherent state `|α⟩`.
pub fn coherent_state(alpha: Complex<f64>) -> Result<GaussianState> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::domain(format!(
            "non-finite coherent amplitude {alpha}"
        )));
    }
    let m = coherent_mean(alpha);
    Ok(GaussianState::from_parts(
        DVector::from_column_slice(m.as_slice()),
        DMatrix::identity(2, 2) * 0.5,
    ))
}

/// Per-mode parameters of a lossy thermal channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalLossParams {
    tau: f64,
    mu: f64,
}

impl ThermalLossParams {
    /// `tau` is the effective propagation time, `mu` the mean thermal
    /// photon number of the environment.
    pub fn new(tau: f64, mu: f64) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::domain(format!(
                "propagation time must be >= 0, got {tau}"
            )));
        }
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::domain(format!(
                "thermal photon number must be >= 0, got {mu}"
            )));
        }
        Ok(Self { tau, mu })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Variance of the channel fixed point, `μ + ½`.
    pub fn kappa(&self) -> f64 {
        self.mu + 0.5
    }
}

fn symmetrized(cov: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let scale = cov.amax().max(1.0);
    let asym = (cov - cov.transpose()).amax();
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::domain(format!(
            "covariance is not symmetric (max asymmetry {asym:.3e})"
        )));
    }
    Ok((cov + cov.transpose()) * 0.5)
}

pub(crate) fn check_symmetric(cov: &DMatrix<f64>) -> Result<()> {
    symmetrized(cov).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn loss(taus: &[f64], mu: f64) -> Vec<ThermalLossParams> {
        taus.iter()
            .map(|&t| ThermalLossParams::new(t, mu).unwrap())
            .collect()
    }

    #[test]
    fn coherent_state_convention() {
        let s = std::f64::consts::SQRT_2;
        let vac = coherent_state(c(0.0, 0.0)).unwrap();
        assert_eq!(vac.mean().as_slice(), &[0.0, 0.0]);
        assert_eq!(vac.cov(), &(DMatrix::identity(2, 2) * 0.5));
        assert_eq!(
            coherent_state(c(1.0, 0.0)).unwrap().mean().as_slice(),
            &[s, 0.0]
        );
        assert_eq!(
            coherent_state(c(0.0, 1.0)).unwrap().mean().as_slice(),
            &[0.0, s]
        );
        assert!(coherent_state(c(f64::NAN, 0.0)).is_err());
        assert!(coherent_state(c(0.0, f64::INFINITY)).is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        let mean = DVector::zeros(2);
        let asym = DMatrix::from_row_slice(2, 2, &[0.5, 0.1, 0.0, 0.5]);
        assert!(matches!(
            GaussianState::new(mean.clone(), asym),
            Err(Error::Domain(_))
        ));
        let squeezed_too_much = DMatrix::from_row_slice(2, 2, &[0.1, 0.0, 0.0, 0.1]);
        assert!(GaussianState::new(mean.clone(), squeezed_too_much).is_err());
        assert!(GaussianState::new(DVector::zeros(3), DMatrix::identity(3, 3)).is_err());
        let squeezed = DMatrix::from_row_slice(2, 2, &[0.25, 0.0, 0.0, 1.0]);
        assert!(GaussianState::new(mean, squeezed).is_ok());
    }

    #[test]
    fn identity_channel_is_noop() {
        let st = coherent_state(c(1.3, -0.4))
            .unwrap()
            .tensor(&GaussianState::thermal(1, 0.7));
        let out = st.apply_thermal_loss(&loss(&[0.0, 0.0], 0.9)).unwrap();
        assert_eq!(out, st);
    }

    #[test]
    fn long_propagation_reaches_fixed_point() {
        let st = coherent_state(c(2.0, 1.0)).unwrap();
        let out = st.apply_thermal_loss(&loss(&[100.0], 0.3)).unwrap();
        assert_abs_diff_eq!(
            out.cov().clone(),
            DMatrix::identity(2, 2) * 0.8,
            epsilon = 1e-10
        );
        assert!(out.mean().amax() < 1e-10);
    }

    #[test]
    fn coherent_loss_example() {
        let out = coherent_state(c(2.0, 0.0))
            .unwrap()
            .apply_thermal_loss(&loss(&[std::f64::consts::LN_2], 0.5))
            .unwrap();
        assert_abs_diff_eq!(out.mean()[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.mean()[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            out.cov().clone(),
            DMatrix::identity(2, 2) * 0.75,
            epsilon = 1e-12
        );
    }

    #[test]
    fn channel_rejects_bad_params() {
        assert!(ThermalLossParams::new(-0.1, 0.0).is_err());
        assert!(ThermalLossParams::new(0.1, -1.0).is_err());
        let st = GaussianState::vacuum(2);
        assert!(st.apply_thermal_loss(&loss(&[0.1], 0.0)).is_err());
    }

    #[test]
    fn displacement_group_laws() {
        let st = coherent_state(c(0.3, 0.2))
            .unwrap()
            .tensor(&GaussianState::thermal(1, 0.4));
        let zero = [Vector2::zeros(), Vector2::zeros()];
        assert_eq!(st.displace(&zero).unwrap(), st);
        let shift = [Vector2::new(0.7, -1.1), Vector2::new(-2.0, 0.5)];
        let neg: Vec<_> = shift.iter().map(|s| -s).collect();
        let back = st.displace(&shift).unwrap().displace(&neg).unwrap();
        assert_abs_diff_eq!(back.mean().clone(), st.mean().clone(), epsilon = 1e-15);
        assert!(st.displace(&shift[..1]).is_err());

        let shifted_vac = coherent_state(c(0.0, 0.0))
            .unwrap()
            .displace(&[Vector2::new(std::f64::consts::SQRT_2, 0.0)])
            .unwrap();
        assert_eq!(shifted_vac, coherent_state(c(1.0, 0.0)).unwrap());
    }

    #[test]
    fn partial_trace_examples() {
        let mu = 0.6;
        let st = GaussianState::vacuum(1).tensor(&GaussianState::thermal(1, mu));
        assert_eq!(st.partial_trace(&[0, 1]).unwrap(), st);
        let th = st.partial_trace(&[1]).unwrap();
        assert_eq!(th.cov(), &(DMatrix::identity(2, 2) * (mu + 0.5)));
        assert!(st.partial_trace(&[]).is_err());
        assert!(st.partial_trace(&[2]).is_err());
        assert!(st.partial_trace(&[1, 1]).is_err());
        let swapped = st.partial_trace(&[1, 0]).unwrap();
        assert_eq!(swapped.mode_cov(0), st.mode_cov(1));
    }

    #[test]
    fn fidelity_examples() {
        let alpha = c(0.8, -1.7);
        let coh = coherent_state(alpha).unwrap();
        assert_abs_diff_eq!(
            coh.fidelity_to_coherent(alpha).unwrap(),
            1.0,
            epsilon = 1e-15
        );

        // Thermal overlap with vacuum is ⟨0|ρ_th|0⟩ = 1/(1+μ).
        for mu in [0.0, 0.3, 2.5] {
            let f = GaussianState::thermal(1, mu)
                .fidelity_to_coherent(c(0.0, 0.0))
                .unwrap();
            assert_abs_diff_eq!(f, 1.0 / (1.0 + mu), epsilon = 1e-14);
        }

        // Isotropic clone covariance (1/F - ½)I centred on α has fidelity F.
        for target in [0.2, 0.5, 2.0 / 3.0, 0.95] {
            let mean = coherent_mean(alpha);
            let st = GaussianState::new(
                DVector::from_column_slice(mean.as_slice()),
                DMatrix::identity(2, 2) * (1.0 / target - 0.5),
            )
            .unwrap();
            assert_abs_diff_eq!(
                st.fidelity_to_coherent(alpha).unwrap(),
                target,
                epsilon = 1e-14
            );
        }

        // Two coherent states overlap as exp(-|α-β|²).
        let beta = c(0.1, 0.5);
        let f = coherent_state(beta)
            .unwrap()
            .fidelity_to_coherent(alpha)
            .unwrap();
        assert_abs_diff_eq!(f, (-(alpha - beta).norm_sqr()).exp(), epsilon = 1e-15);

        assert!(GaussianState::vacuum(2)
            .fidelity_to_coherent(alpha)
            .is_err());
    }
}
