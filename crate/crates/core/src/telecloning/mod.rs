//! Telecloning over a noisy SU(m,1) support.
//!
//! Mode `a_0` travels for `τ0` and the receivers for `τc`, all through
//! channels with `μ` thermal photons. The sender measures `a_0` jointly with
//! the input `|α⟩`, broadcasts the outcome, and every receiver displaces its
//! mode by `-P·z`.

mod monte_carlo;
mod optimize;

pub use monte_carlo::{monte_carlo_protocol, MonteCarloClone, MIN_SAMPLES};
pub use optimize::{
    classify_regime, fidelity_a, fidelity_b, fidelity_c, numeric_optimal, optimal_symmetric,
    symmetric_fidelity, useful_time_thresholds, OptimalStrategy, PhotonNumber, Regime,
    UsefulTimeThresholds,
};

use nalgebra::{Complex, DMatrix, DVector, Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::gaussian::{
    coherent_mean, reflection, ConditionalGaussian, GaussianState, ThermalLossParams,
};
use crate::sum1::{covariance_matrix, Sum1Params};

#[derive(Debug, Clone, PartialEq)]
pub struct TelecloningConfig {
    source: Sum1Params,
    tau0: f64,
    tauc: f64,
    mu: f64,
}

impl TelecloningConfig {
    pub fn new(source: Sum1Params, tau0: f64, tauc: f64, mu: f64) -> Result<Self> {
        for (name, v) in [("tau0", tau0), ("tauc", tauc), ("mu", mu)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::domain(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(Self {
            source,
            tau0,
            tauc,
            mu,
        })
    }

    /// Symmetric support with `n` photons per receiver.
    pub fn symmetric(m: usize, n: f64, tau0: f64, tauc: f64, mu: f64) -> Result<Self> {
        Self::new(Sum1Params::symmetric(m, n)?, tau0, tauc, mu)
    }

    pub fn source(&self) -> &Sum1Params {
        &self.source
    }

    pub fn m(&self) -> usize {
        self.source.m()
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn tauc(&self) -> f64 {
        self.tauc
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn tau_tot(&self) -> f64 {
        self.tau0 + self.tauc
    }

    /// Channel parameters in support mode order (`a_0` first).
    pub fn channel_params(&self) -> Vec<ThermalLossParams> {
        std::iter::once(self.tau0)
            .chain(std::iter::repeat_n(self.tauc, self.m()))
            .map(|t| ThermalLossParams::new(t, self.mu).expect("validated on construction"))
            .collect()
    }
}

/// Blocks of the propagated support: `A` on `a_0`, `B` on the receivers,
/// `C` coupling them.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisySupportBlocks {
    pub a_block: Matrix2<f64>,
    pub b_block: DMatrix<f64>,
    pub c_block: DMatrix<f64>,
}

/// Support after propagation, assembled block by block.
pub fn noisy_support(config: &TelecloningConfig) -> (GaussianState, NoisySupportBlocks) {
    let src = config.source();
    let m = src.m();
    let n0 = src.n0();
    let kappa = config.mu() + 0.5;
    let e0 = (-config.tau0()).exp();
    let ec = (-config.tauc()).exp();
    let etot = (-config.tau_tot()).exp();

    let a_block = Matrix2::identity() * (e0 * (n0 + 0.5) + kappa * (1.0 - e0));
    let mut c_block = DMatrix::zeros(2, 2 * m);
    let mut b_block = DMatrix::zeros(2 * m, 2 * m);
    for h in 0..m {
        let nh = src.photon_numbers()[h];
        let a = etot.sqrt() * (nh * (n0 + 1.0)).sqrt();
        c_block[(0, 2 * h)] = a;
        c_block[(1, 2 * h + 1)] = -a;
        for j in 0..m {
            let v = if h == j {
                ec * (nh + 0.5) + kappa * (1.0 - ec)
            } else {
                ec * (nh * src.photon_numbers()[j]).sqrt()
            };
            b_block[(2 * h, 2 * j)] = v;
            b_block[(2 * h + 1, 2 * j + 1)] = v;
        }
    }

    let dim = 2 * (m + 1);
    let mut cov = DMatrix::zeros(dim, dim);
    cov.fixed_view_mut::<2, 2>(0, 0).copy_from(&a_block);
    cov.view_mut((0, 2), (2, 2 * m)).copy_from(&c_block);
    cov.view_mut((2, 0), (2 * m, 2))
        .copy_from(&c_block.transpose());
    cov.view_mut((2, 2), (2 * m, 2 * m)).copy_from(&b_block);
    (
        GaussianState::from_parts(DVector::zeros(dim), cov),
        NoisySupportBlocks {
            a_block,
            b_block,
            c_block,
        },
    )
}

/// Clone fidelity `F_h` in closed form, for clone `h = 1..=m`:
///
/// `F_h = {2 + 2μ + e^{-τ0}(N_0 - μ) + e^{-τc}(N_h - μ) - 2√(e^{-τ} N_h (N_0 + 1))}⁻¹`.
pub fn clone_fidelity_closed(config: &TelecloningConfig, h: usize) -> Result<f64> {
    if h == 0 || h > config.m() {
        return Err(Error::domain(format!(
            "clone index {h} out of range 1..={}",
            config.m()
        )));
    }
    let mu = config.mu();
    let n0 = config.source().n0();
    let nh = config.source().photon_number(h);
    let s =
        2.0 + 2.0 * mu + (-config.tau0()).exp() * (n0 - mu) + (-config.tauc()).exp() * (nh - mu)
            - 2.0 * ((-config.tau_tot()).exp() * nh * (n0 + 1.0)).sqrt();
    Ok(1.0 / s)
}

/// One clone after averaging over all measurement outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct CloneResult {
    pub fidelity: f64,
    pub clone_cov: Matrix2<f64>,
    pub clone_mean: Vector2<f64>,
}

/// Per-receiver displacement `-P·z` applied after outcome `z`, stacked over
/// the `m` receivers.
fn displacement_map(m: usize) -> DMatrix<f64> {
    let mp = -reflection();
    let mut d = DMatrix::zeros(2 * m, 2);
    for h in 0..m {
        d.fixed_view_mut::<2, 2>(2 * h, 0).copy_from(&mp);
    }
    d
}

/// Joint state of the `m` receivers after the measure-and-displace protocol,
/// averaged over outcomes.
///
/// Starts from the generic channel applied to the support. With outcome
/// `z ~ N(z̄, S)`, conditional mean `m_R + K(z - z̄)` and displacement `Dz`,
/// the average output has mean `m_R + D z̄` and covariance
/// `σ_c + (K + D) S (K + D)ᵀ`.
pub fn telecloning_output_state(
    config: &TelecloningConfig,
    alpha: Complex<f64>,
) -> Result<GaussianState> {
    let support =
        covariance_matrix(config.source()).apply_thermal_loss(&config.channel_params())?;
    let input_cov = Matrix2::identity() * 0.5;
    let cg = ConditionalGaussian::new(&support, 0, &input_cov, &coherent_mean(alpha))?;
    let d = displacement_map(config.m());
    let zbar = DVector::from_column_slice(cg.outcome_mean().as_slice());
    let s = DMatrix::from_column_slice(2, 2, cg.outcome_cov().as_slice());
    let rest_mean = DVector::from_iterator(
        2 * config.m(),
        cg.remaining_modes()
            .iter()
            .flat_map(|&k| [support.mean()[2 * k], support.mean()[2 * k + 1]]),
    );
    let mean = rest_mean + &d * zbar;
    let response = cg.gain() + &d;
    let cov = cg.conditional_cov() + &response * s * response.transpose();
    let cov = (&cov + cov.transpose()) * 0.5;
    Ok(GaussianState::from_parts(mean, cov))
}

/// Matrix route to every clone's averaged state and fidelity.
pub fn telecloning_pipeline(
    config: &TelecloningConfig,
    alpha: Complex<f64>,
) -> Result<Vec<CloneResult>> {
    let out = telecloning_output_state(config, alpha)?;
    (0..config.m())
        .map(|h| {
            let clone = out.partial_trace(&[h])?;
            Ok(CloneResult {
                fidelity: clone.fidelity_to_coherent(alpha)?,
                clone_cov: clone.mode_cov(0),
                clone_mean: clone.mode_mean(0),
            })
        })
        .collect()
}
