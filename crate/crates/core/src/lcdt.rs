//! Local cloning and direct transmission: the sender's state travels for
//! `τ0`, is cloned by an optimal covariant Gaussian cloner, and each clone
//! travels the remaining `τc` on its own.
//!
//! Only the single-clone marginal is modelled. The cloner adds `n̄ = (m-1)/m`
//! of variance per quadrature, so after both channels a clone of `|α⟩` has
//!
//! ```text
//! F_d = exp(-K/D) / D,   D = 1 + n̄ e^{-τc} + (1 - e^{-τ})μ,   K = (1 - e^{-τ/2})²|α|².
//! ```

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::gaussian::{coherent_state, GaussianState, ThermalLossParams};
use crate::optim::{bisect, golden_max, grid_argmax};
use crate::quadrature::disc_integral;
use crate::telecloning::{classify_regime, fidelity_a, fidelity_c, optimal_symmetric, Regime};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcdtConfig {
    m: usize,
    tau0: f64,
    tauc: f64,
    mu: f64,
}

impl LcdtConfig {
    pub fn new(m: usize, tau0: f64, tauc: f64, mu: f64) -> Result<Self> {
        check_m(m)?;
        for (name, v) in [("tau0", tau0), ("tauc", tauc), ("mu", mu)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::domain(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(Self { m, tau0, tauc, mu })
    }

    /// Cloner at the sending station: all of `τ` after cloning.
    pub fn at_sender(m: usize, tau_tot: f64, mu: f64) -> Result<Self> {
        Self::new(m, 0.0, tau_tot, mu)
    }

    pub fn m(&self) -> usize {
        self.m
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

    pub fn nbar(&self) -> f64 {
        nbar(self.m)
    }

    /// `D`, the inverse fidelity at `α = 0`.
    fn noise(&self) -> f64 {
        1.0 + self.nbar() * (-self.tauc).exp() + (1.0 - (-self.tau_tot()).exp()) * self.mu
    }
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::domain(format!(
            "need at least 2 clones, got m = {m}"
        )));
    }
    Ok(())
}

fn nbar(m: usize) -> f64 {
    (m as f64 - 1.0) / m as f64
}

/// Coefficient of `|α|²` in `K`.
fn amplitude_loss(tau_tot: f64) -> f64 {
    (1.0 - (-0.5 * tau_tot).exp()).powi(2)
}

/// Single-clone marginal of the optimal covariant `1 → m` cloner.
pub fn apply_cloning_map(state: &GaussianState, m: usize) -> Result<GaussianState> {
    check_m(m)?;
    if state.n_modes() != 1 {
        return Err(Error::domain(format!(
            "cloning map acts on one mode, got {}",
            state.n_modes()
        )));
    }
    let cov = state.cov() + nalgebra::DMatrix::identity(2, 2) * nbar(m);
    Ok(GaussianState::from_parts(state.mean().clone(), cov))
}

/// Closed-form clone fidelity `F_d`.
pub fn lcdt_fidelity(config: &LcdtConfig, alpha: Complex<f64>) -> f64 {
    let d = config.noise();
    let k = amplitude_loss(config.tau_tot()) * alpha.norm_sqr();
    (-k / d).exp() / d
}

/// A received clone of `|α⟩`: propagate, clone, propagate.
pub fn lcdt_output_state(config: &LcdtConfig, alpha: Complex<f64>) -> Result<GaussianState> {
    let input = coherent_state(alpha)?;
    let sent = input.apply_thermal_loss(&[ThermalLossParams::new(config.tau0, config.mu)?])?;
    let clone = apply_cloning_map(&sent, config.m)?;
    clone.apply_thermal_loss(&[ThermalLossParams::new(config.tauc, config.mu)?])
}

/// `F_d` through the matrix route.
pub fn lcdt_pipeline_fidelity(config: &LcdtConfig, alpha: Complex<f64>) -> Result<f64> {
    lcdt_output_state(config, alpha)?.fidelity_to_coherent(alpha)
}

/// `|α̃|² = [n̄ - μ + e^τ(1 + μ)] / (e^{τ/2} - 1)²`: below it the cloner
/// belongs at the sender.
pub fn admissibility_threshold(m: usize, tau_tot: f64, mu: f64) -> Result<f64> {
    check_m(m)?;
    check_tau(tau_tot)?;
    let e = (0.5 * tau_tot).exp();
    Ok((nbar(m) - mu + tau_tot.exp() * (1.0 + mu)) / (e - 1.0).powi(2))
}

/// The threshold as printed in the literature, twice
/// [`admissibility_threshold`]; the factor comes from the ½ in its
/// fidelity exponent. Kept for comparison reports.
pub fn admissibility_threshold_printed(m: usize, tau_tot: f64, mu: f64) -> Result<f64> {
    Ok(2.0 * admissibility_threshold(m, tau_tot, mu)?)
}

fn check_tau(tau_tot: f64) -> Result<()> {
    if !(tau_tot > 0.0 && tau_tot.is_finite()) {
        return Err(Error::domain(format!(
            "tau_tot must be finite and > 0, got {tau_tot}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClonerPlacement {
    /// Post-cloning propagation time; `τ_tot` means cloning at the sender.
    pub tau_c_opt: f64,
    pub fidelity: f64,
    /// Whether the optimum lies strictly inside `(0, τ_tot)`.
    pub interior: bool,
    /// Stationary point `D = K` of `F_d` along the whole `τc` line and its
    /// fidelity `1/(eK)`, reported when `|α|² > |α̃|²`. It can fall below 0,
    /// in which case the optimum is the receivers' end.
    pub stationary: Option<(f64, f64)>,
}

/// Best location of the cloner along the link for a given input.
///
/// `F_d` depends on `τc` only through `D`, and `-ln D - K/D` peaks at
/// `D = K`. Since `D` falls as `τc` grows, the optimum is the sender unless
/// `K` exceeds the smallest reachable `D`.
pub fn optimize_cloner_location(
    m: usize,
    tau_tot: f64,
    mu: f64,
    alpha: Complex<f64>,
) -> Result<ClonerPlacement> {
    let threshold = admissibility_threshold(m, tau_tot, mu)?;
    let at = |tauc: f64| -> Result<f64> {
        Ok(lcdt_fidelity(
            &LcdtConfig::new(m, tau_tot - tauc, tauc, mu)?,
            alpha,
        ))
    };
    let (tauc, f_stat) = stationary_point(m, tau_tot, mu, alpha);
    if alpha.norm_sqr() <= threshold || tauc >= tau_tot {
        return Ok(ClonerPlacement {
            tau_c_opt: tau_tot,
            fidelity: at(tau_tot)?,
            interior: false,
            stationary: None,
        });
    }
    if tauc <= 0.0 {
        // D cannot rise to K: the receivers' end is best.
        return Ok(ClonerPlacement {
            tau_c_opt: 0.0,
            fidelity: at(0.0)?,
            interior: false,
            stationary: Some((tauc, f_stat)),
        });
    }
    Ok(ClonerPlacement {
        tau_c_opt: tauc,
        fidelity: f_stat,
        interior: true,
        stationary: Some((tauc, f_stat)),
    })
}

/// `τc = τ - ln{[|α|²(e^{τ/2} - 1)² + μ - e^τ(1 + μ)] / n̄}` and `1/(eK)`.
/// Requires `|α|²` above the admissibility threshold.
fn stationary_point(m: usize, tau_tot: f64, mu: f64, alpha: Complex<f64>) -> (f64, f64) {
    let k = amplitude_loss(tau_tot) * alpha.norm_sqr();
    let excess = k - 1.0 - (1.0 - (-tau_tot).exp()) * mu;
    (-(excess / nbar(m)).ln(), 1.0 / (std::f64::consts::E * k))
}

/// `F_d` at post-cloning time `tauc` without the physical restriction
/// `0 ≤ τc ≤ τ_tot`, for locating stationary points that fall outside it.
pub fn lcdt_fidelity_extended(
    m: usize,
    tau_tot: f64,
    tauc: f64,
    mu: f64,
    alpha: Complex<f64>,
) -> f64 {
    let d = 1.0 + nbar(m) * (-tauc).exp() + (1.0 - (-tau_tot).exp()) * mu;
    let k = amplitude_loss(tau_tot) * alpha.norm_sqr();
    (-k / d).exp() / d
}

/// Grid scan of `F_d` over `τc` with spacing `step`, refined by golden
/// section around the best grid point.
pub fn scan_cloner_location(
    m: usize,
    tau_tot: f64,
    mu: f64,
    alpha: Complex<f64>,
    step: f64,
) -> Result<ClonerPlacement> {
    check_m(m)?;
    check_tau(tau_tot)?;
    let f = |tauc: f64| {
        let tauc = tauc.clamp(0.0, tau_tot);
        lcdt_fidelity(
            &LcdtConfig {
                m,
                tau0: tau_tot - tauc,
                tauc,
                mu,
            },
            alpha,
        )
    };
    let n = ((tau_tot / step).ceil() as usize).max(2);
    let (i, _, _) = grid_argmax(f, 0.0, tau_tot, n);
    let h = tau_tot / n as f64;
    let lo = (i as f64 - 1.0).max(0.0) * h;
    let hi = ((i as f64 + 1.0) * h).min(tau_tot);
    let best = golden_max(f, lo, hi, 1e-12, 500);
    Ok(ClonerPlacement {
        tau_c_opt: best.x,
        fidelity: best.value,
        interior: best.x > 0.0 && best.x < tau_tot,
        stationary: None,
    })
}

/// Input amplitudes drawn from `exp(-|α|²/Ω²)/(πΩ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianAlphabet {
    omega_sq: f64,
}

impl GaussianAlphabet {
    pub fn new(omega_sq: f64) -> Result<Self> {
        if !(omega_sq >= 0.0 && omega_sq.is_finite()) {
            return Err(Error::domain(format!(
                "omega^2 must be finite and >= 0, got {omega_sq}"
            )));
        }
        Ok(Self { omega_sq })
    }

    pub fn from_omega(omega: f64) -> Result<Self> {
        if omega.is_nan() || omega < 0.0 {
            return Err(Error::domain(format!("omega must be >= 0, got {omega}")));
        }
        Self::new(omega * omega)
    }

    pub fn omega_sq(&self) -> f64 {
        self.omega_sq
    }

    pub fn density(&self, alpha: Complex<f64>) -> f64 {
        (-alpha.norm_sqr() / self.omega_sq).exp() / (std::f64::consts::PI * self.omega_sq)
    }
}

/// Alphabet-averaged clone fidelity with the cloner at the sender,
/// `1/(D + bΩ²)` with `b = (1 - e^{-τ/2})²`.
pub fn averaged_fidelity(
    m: usize,
    tau_tot: f64,
    mu: f64,
    alphabet: GaussianAlphabet,
) -> Result<f64> {
    let cfg = LcdtConfig::at_sender(m, tau_tot, mu)?;
    Ok(1.0 / (cfg.noise() + amplitude_loss(tau_tot) * alphabet.omega_sq))
}

/// The averaged fidelity as printed in the literature,
/// `m e^τ / (m[1 - μ + Ω²(1 - 2e^{τ/2}) + e^τ(1 + μ + Ω²)])`, which lacks the
/// `-1` of [`averaged_fidelity`]. Kept for comparison reports.
pub fn averaged_fidelity_printed(
    m: usize,
    tau_tot: f64,
    mu: f64,
    alphabet: GaussianAlphabet,
) -> Result<f64> {
    LcdtConfig::at_sender(m, tau_tot, mu)?;
    let (mf, w) = (m as f64, alphabet.omega_sq);
    let e = tau_tot.exp();
    Ok(mf * e / (mf * (1.0 - mu + w * (1.0 - 2.0 * (0.5 * tau_tot).exp()) + e * (1.0 + mu + w))))
}

/// Averaged fidelity by integrating the matrix-route `F_d` against the
/// alphabet density over a disc of radius `8Ω`.
pub fn averaged_fidelity_quadrature(
    m: usize,
    tau_tot: f64,
    mu: f64,
    alphabet: GaussianAlphabet,
) -> Result<f64> {
    let cfg = LcdtConfig::at_sender(m, tau_tot, mu)?;
    if alphabet.omega_sq == 0.0 {
        return lcdt_pipeline_fidelity(&cfg, Complex::new(0.0, 0.0));
    }
    let radius = 8.0 * alphabet.omega_sq.sqrt();
    let value = disc_integral(
        |x, y| {
            let alpha = Complex::new(x, y);
            lcdt_pipeline_fidelity(&cfg, alpha).unwrap_or(f64::NAN) * alphabet.density(alpha)
        },
        radius,
        16,
        1e-11,
    );
    if !value.is_finite() {
        return Err(Error::numerical(
            "averaged fidelity quadrature produced a non-finite value",
        ));
    }
    Ok(value)
}

/// Alphabet widths (as `Ω²`) above which optimized telecloning beats the
/// local strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaThresholds {
    /// `(1 + e^{τ/2})(m - 1) / ((e^{τ/2} - 1)m)`, the crossover with `F^a`.
    pub omega_sq_a: f64,
    /// Crossover with `F^c`; present only in regime C.
    pub omega_sq_c: Option<f64>,
    /// Crossover with whichever regime applies, clamped at 0 when
    /// telecloning wins for every alphabet.
    pub omega_sq: f64,
    pub regime: Regime,
}

pub fn omega_thresholds(m: usize, tau_tot: f64, mu: f64) -> Result<OmegaThresholds> {
    check_m(m)?;
    check_tau(tau_tot)?;
    let mf = m as f64;
    let e = (0.5 * tau_tot).exp();
    let omega_sq_a = (1.0 + e) * (mf - 1.0) / ((e - 1.0) * mf);
    let regime = classify_regime(m, tau_tot, mu);
    let omega_sq_c = (regime == Regime::C).then(|| {
        (1.0 + mf * (mu - 1.0) + mf * tau_tot.exp() * (1.0 + mu)
            - mf.sqrt() * e * (1.0 + mu + mf * mu))
            / (mf * (e - 1.0).powi(2))
    });
    let f_tele = optimal_symmetric(m, tau_tot, mu)?.f_max;
    let cfg = LcdtConfig::at_sender(m, tau_tot, mu)?;
    let omega_sq = ((1.0 / f_tele - cfg.noise()) / amplitude_loss(tau_tot)).max(0.0);
    Ok(OmegaThresholds {
        omega_sq_a,
        omega_sq_c,
        omega_sq,
        regime,
    })
}

/// `Ω²` at which the averaged fidelity equals `f_tele`, by bisection. Zero
/// when `f_tele` already beats the zero-width alphabet.
pub fn crossover_omega_sq(m: usize, tau_tot: f64, mu: f64, f_tele: f64) -> Result<f64> {
    check_tau(tau_tot)?;
    let gap = |w: f64| -> f64 {
        averaged_fidelity(m, tau_tot, mu, GaussianAlphabet { omega_sq: w }).unwrap_or(f64::NAN)
            - f_tele
    };
    let g0 = averaged_fidelity(m, tau_tot, mu, GaussianAlphabet { omega_sq: 0.0 })? - f_tele;
    if g0 <= 0.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while gap(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::numerical(
                "no crossover: local strategy wins for every width",
            ));
        }
    }
    bisect(gap, 0.0, hi, 1e-15)
}

/// Numeric crossovers with `F^a` and (in regime C) `F^c`.
pub fn crossover_thresholds(m: usize, tau_tot: f64, mu: f64) -> Result<(f64, Option<f64>)> {
    let a = crossover_omega_sq(m, tau_tot, mu, fidelity_a(m, tau_tot, mu))?;
    let c = if classify_regime(m, tau_tot, mu) == Regime::C {
        Some(crossover_omega_sq(
            m,
            tau_tot,
            mu,
            fidelity_c(m, tau_tot, mu),
        )?)
    } else {
        None
    };
    Ok((a, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn cloning_map_examples() {
        let st = coherent_state(c(0.3, -1.0)).unwrap();
        let out = apply_cloning_map(&st, 2).unwrap();
        assert_abs_diff_eq!(
            out.cov().clone(),
            nalgebra::DMatrix::identity(2, 2),
            epsilon = 1e-15
        );
        assert_eq!(out.mean(), st.mean());
        assert_abs_diff_eq!(
            out.fidelity_to_coherent(c(0.3, -1.0)).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-15
        );
        let big = apply_cloning_map(&st, 1_000_000).unwrap();
        assert!((big.cov()[(0, 0)] - 1.5).abs() <= 1e-6 + 1e-15);
        assert!(apply_cloning_map(&st, 1).is_err());
        assert!(apply_cloning_map(&GaussianState::vacuum(2), 2).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let cfg = LcdtConfig::new(3, 0.4, 0.7, 0.3).unwrap();
        let d = 1.0 + (2.0 / 3.0) * (-0.7f64).exp() + (1.0 - (-1.1f64).exp()) * 0.3;
        assert_abs_diff_eq!(lcdt_fidelity(&cfg, c(0.0, 0.0)), 1.0 / d, epsilon = 1e-15);

        let ideal = LcdtConfig::new(2, 0.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(
            lcdt_fidelity(&ideal, c(2.0, 1.0)),
            2.0 / 3.0,
            epsilon = 1e-15
        );

        let cfg = LcdtConfig::new(2, 0.0, 1.0, 0.3).unwrap();
        let a = c(1.5, 0.0);
        assert_abs_diff_eq!(
            lcdt_fidelity(&cfg, a),
            lcdt_pipeline_fidelity(&cfg, a).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn cloner_at_sender_for_small_amplitudes() {
        let th = admissibility_threshold(2, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(
            th,
            (0.5 + 1f64.exp()) / (0.5f64.exp() - 1.0).powi(2),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            admissibility_threshold_printed(2, 1.0, 0.0).unwrap(),
            15.30,
            epsilon = 0.01
        );
        let p = optimize_cloner_location(2, 1.0, 0.0, c(0.0, 0.0)).unwrap();
        assert_eq!(p.tau_c_opt, 1.0);
        assert!(!p.interior);
    }

    #[test]
    fn interior_optimum_for_intermediate_amplitudes() {
        // |α̃|² ≈ 7.65 here; the interior window ends where K reaches 1 + n̄.
        let a = c(3.0, 0.0);
        let p = optimize_cloner_location(2, 1.0, 0.0, a).unwrap();
        assert!(p.interior);
        assert!(p.fidelity < (-1f64).exp());
        let scan = scan_cloner_location(2, 1.0, 0.0, a, 1e-3).unwrap();
        assert_abs_diff_eq!(scan.tau_c_opt, p.tau_c_opt, epsilon = 1e-6);
        assert_abs_diff_eq!(scan.fidelity, p.fidelity, epsilon = 1e-12);
        let cfg = LcdtConfig::new(2, 1.0 - p.tau_c_opt, p.tau_c_opt, 0.0).unwrap();
        assert_abs_diff_eq!(lcdt_fidelity(&cfg, a), p.fidelity, epsilon = 1e-14);
    }

    #[test]
    fn large_amplitude_stationary_point_is_unreachable() {
        let a = c(10.0, 0.0);
        let p = optimize_cloner_location(2, 1.0, 0.0, a).unwrap();
        let (tauc, f) = p.stationary.unwrap();
        assert!(tauc < 0.0);
        assert!(!p.interior);
        assert_eq!(p.tau_c_opt, 0.0);
        assert!(f < (-1f64).exp() && p.fidelity < (-1f64).exp());
        let best = golden_max(
            |t| lcdt_fidelity_extended(2, 1.0, t, 0.0, a),
            -10.0,
            1.0,
            1e-12,
            500,
        );
        assert_abs_diff_eq!(best.x, tauc, epsilon = 1e-6);
        assert_abs_diff_eq!(best.value, f, epsilon = 1e-14);
    }

    #[test]
    fn receiver_end_when_noise_cannot_match() {
        // K beyond the largest reachable D.
        let p = optimize_cloner_location(2, 0.5, 0.0, c(40.0, 0.0)).unwrap();
        let scan = scan_cloner_location(2, 0.5, 0.0, c(40.0, 0.0), 1e-3).unwrap();
        assert_eq!(p.tau_c_opt, 0.0);
        assert!(!p.interior);
        assert_abs_diff_eq!(scan.tau_c_opt, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn averaged_fidelity_examples() {
        let zero = GaussianAlphabet::new(0.0).unwrap();
        let cfg = LcdtConfig::at_sender(3, 0.8, 0.2).unwrap();
        assert_abs_diff_eq!(
            averaged_fidelity(3, 0.8, 0.2, zero).unwrap(),
            lcdt_fidelity(&cfg, c(0.0, 0.0)),
            epsilon = 1e-15
        );
        let wide = GaussianAlphabet::from_omega(100.0).unwrap();
        assert!(averaged_fidelity(2, 0.5, 0.0, wide).unwrap() < 0.01);
        for m in 2..6 {
            let f = averaged_fidelity(m, 0.0, 0.0, zero).unwrap();
            assert_abs_diff_eq!(f, m as f64 / (2.0 * m as f64 - 1.0), epsilon = 1e-15);
        }
        let one = GaussianAlphabet::from_omega(1.0).unwrap();
        let q = averaged_fidelity_quadrature(2, 0.5, 0.0, one).unwrap();
        assert_abs_diff_eq!(
            averaged_fidelity(2, 0.5, 0.0, one).unwrap(),
            q,
            epsilon = 1e-6
        );
        assert!(GaussianAlphabet::new(-1.0).is_err());
    }

    #[test]
    fn printed_average_differs_by_the_constant() {
        let w = GaussianAlphabet::new(2.0).unwrap();
        let (m, tau, mu) = (2, 0.7, 0.1);
        let ours = averaged_fidelity(m, tau, mu, w).unwrap();
        let printed = averaged_fidelity_printed(m, tau, mu, w).unwrap();
        let e = tau.exp();
        assert_abs_diff_eq!(
            1.0 / printed - 1.0 / ours,
            1.0 / (m as f64 * e),
            epsilon = 1e-12
        );
    }

    #[test]
    fn omega_threshold_examples() {
        let ln2 = std::f64::consts::LN_2;
        let t = omega_thresholds(2, ln2, 0.0).unwrap();
        assert_abs_diff_eq!(
            t.omega_sq_a,
            (3.0 + 2.0 * 2f64.sqrt()) / 2.0,
            epsilon = 1e-12
        );
        let (a, _) = crossover_thresholds(2, ln2, 0.0).unwrap();
        assert_abs_diff_eq!(a, t.omega_sq_a, epsilon = 1e-6);
        assert_eq!(
            omega_thresholds(2, 0.9, 0.0).unwrap().omega_sq_a,
            omega_thresholds(2, 0.9, 0.4).unwrap().omega_sq_a
        );
        for m in [2, 5] {
            let limit = (m as f64 - 1.0) / m as f64;
            let t = omega_thresholds(m, 20.0, 0.0).unwrap();
            let rel = 2.0 / (10f64.exp() - 1.0);
            assert_abs_diff_eq!(t.omega_sq_a / limit - 1.0, rel, epsilon = 1e-12);
            let t = omega_thresholds(m, 40.0, 0.0).unwrap();
            assert_abs_diff_eq!(t.omega_sq_a, limit, epsilon = 1e-6);
        }
        assert!(omega_thresholds(2, 1.5, 2.0).unwrap().omega_sq_c.is_none());
        assert!(omega_thresholds(2, 0.0, 0.0).is_err());
    }

    #[test]
    fn regime_c_threshold_matches_root() {
        for (m, tau, mu) in [(2, 1.5, 0.2), (3, 2.0, 0.1), (2, 2.5, 0.0)] {
            let t = omega_thresholds(m, tau, mu).unwrap();
            let (_, c_num) = crossover_thresholds(m, tau, mu).unwrap();
            let (c, c_num) = (t.omega_sq_c.unwrap(), c_num.unwrap());
            assert!((c - c_num).abs() < 1e-6, "{c} vs {c_num}");
            assert_abs_diff_eq!(t.omega_sq, c, epsilon = 1e-9);
        }
    }

    proptest! {
        #[test]
        fn closed_form_matches_pipeline(
            m in 2usize..=8, tau0 in 0.0f64..1.5, tauc in 0.0f64..1.5, mu in 0.0f64..1.0,
            r in 0.0f64..3.0, phi in 0.0f64..6.3,
        ) {
            let cfg = LcdtConfig::new(m, tau0, tauc, mu).unwrap();
            let a = Complex::from_polar(r, phi);
            prop_assert!((lcdt_fidelity(&cfg, a) - lcdt_pipeline_fidelity(&cfg, a).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn sender_optimal_below_threshold(m in 2usize..6, tau in 0.05f64..3.0, mu in 0.0f64..1.0, frac in 0.0f64..1.0) {
            let th = admissibility_threshold(m, tau, mu).unwrap();
            let a = Complex::new((frac * th).sqrt(), 0.0);
            let at_sender = lcdt_fidelity(&LcdtConfig::at_sender(m, tau, mu).unwrap(), a);
            for i in 0..=200 {
                let tauc = tau * i as f64 / 200.0;
                let f = lcdt_fidelity(&LcdtConfig::new(m, (tau - tauc).max(0.0), tauc, mu).unwrap(), a);
                prop_assert!(f <= at_sender + 1e-15);
            }
        }

        #[test]
        fn interior_optimum_below_inverse_e(m in 2usize..6, tau in 0.1f64..3.0, mu in 0.0f64..1.0, extra in 0.01f64..100.0) {
            let th = admissibility_threshold(m, tau, mu).unwrap();
            let p = optimize_cloner_location(m, tau, mu, Complex::new((th + extra).sqrt(), 0.0)).unwrap();
            prop_assert!(p.fidelity < (-1f64).exp());
        }

        #[test]
        fn averaged_fidelity_decreasing(m in 2usize..8, tau in 0.01f64..3.0, mu in 0.0f64..1.0, w in 0.0f64..10.0, dw in 1e-3f64..1.0) {
            let f = |w| averaged_fidelity(m, tau, mu, GaussianAlphabet::new(w).unwrap()).unwrap();
            prop_assert!(f(w + dw) < f(w));
        }

        #[test]
        fn crossover_with_regime_a(m in 2usize..8, frac in 0.05f64..1.0, mu in 0.0f64..1.0) {
            let tau = frac * (m as f64).ln();
            let t = omega_thresholds(m, tau, mu).unwrap();
            let w = GaussianAlphabet::new(t.omega_sq_a).unwrap();
            let f = averaged_fidelity(m, tau, mu, w).unwrap();
            prop_assert!((f - fidelity_a(m, tau, mu)).abs() < 1e-9);
        }
    }
}
