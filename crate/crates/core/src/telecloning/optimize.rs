//! Optimal symmetric telecloning: choice of the per-receiver photon number
//! `N` and of the support location `τ0` for a fixed link `τ = τ0 + τc`.
//!
//! Three regimes occur:
//!
//! | regime | condition                                          | `τ0`          | `N`                  |
//! |--------|----------------------------------------------------|---------------|----------------------|
//! | A      | `τ ≤ ln m`                                         | `τ`           | `1/(m(m e^{-τ}-1))`  |
//! | C      | `μ < 1/(m-1)`, `ln m < τ ≤ ln[(1+μ)²/(mμ²)]`        | `(τ + ln m)/2`| `∞`                  |
//! | B      | otherwise                                          | `τ`           | `e^{-τ}/(1-m e^{-τ})`|
//!
//! Boundaries go to the regime listed first; the fidelity is continuous
//! across them.

use std::fmt;

use crate::error::{Error, Result};
use crate::optim::{golden_max, grid_argmax};

/// Photon numbers above this are reported as infinite by the numeric search.
const NUMERIC_INFINITY: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    A,
    B,
    C,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::A => "A",
            Regime::B => "B",
            Regime::C => "C",
        };
        f.write_str(s)
    }
}

/// Photon number per receiver, possibly the `N → ∞` limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhotonNumber {
    Finite(f64),
    Infinite,
}

impl PhotonNumber {
    pub fn value(&self) -> f64 {
        match *self {
            PhotonNumber::Finite(n) => n,
            PhotonNumber::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PhotonNumber::Finite(_))
    }
}

impl fmt::Display for PhotonNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhotonNumber::Finite(n) => write!(f, "{n}"),
            PhotonNumber::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalStrategy {
    pub n_opt: PhotonNumber,
    pub tau0_opt: f64,
    pub f_max: f64,
    pub regime: Regime,
}

fn validate(m: usize, tau_tot: f64, mu: f64) -> Result<()> {
    if m < 2 {
        return Err(Error::domain(format!(
            "need at least 2 clones, got m = {m}"
        )));
    }
    if !(tau_tot >= 0.0 && tau_tot.is_finite()) {
        return Err(Error::domain(format!(
            "tau_tot must be finite and >= 0, got {tau_tot}"
        )));
    }
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::domain(format!(
            "mu must be finite and >= 0, got {mu}"
        )));
    }
    Ok(())
}

/// Upper end of the regime-C window, `ln[(1+μ)²/(mμ²)]` (infinite at μ = 0).
fn regime_c_limit(m: usize, mu: f64) -> f64 {
    if mu == 0.0 {
        f64::INFINITY
    } else {
        ((1.0 + mu).powi(2) / (m as f64 * mu * mu)).ln()
    }
}

pub fn classify_regime(m: usize, tau_tot: f64, mu: f64) -> Regime {
    let mf = m as f64;
    if tau_tot <= mf.ln() {
        Regime::A
    } else if mu * (mf - 1.0) < 1.0 && tau_tot <= regime_c_limit(m, mu) {
        Regime::C
    } else {
        Regime::B
    }
}

/// `F^a = m / (m[2 + μ(1 - e^{-τ})] - 1)`.
pub fn fidelity_a(m: usize, tau_tot: f64, mu: f64) -> f64 {
    let mf = m as f64;
    mf / (mf * (2.0 + mu * (1.0 - (-tau_tot).exp())) - 1.0)
}

/// `F^b = [2 + μ - (1 + μ) e^{-τ}]⁻¹`.
pub fn fidelity_b(tau_tot: f64, mu: f64) -> f64 {
    1.0 / (2.0 + mu - (1.0 + mu) * (-tau_tot).exp())
}

/// `F^c = {2 + 2μ - √(e^{-τ}/m) [1 + μ(1 + m)]}⁻¹`.
pub fn fidelity_c(m: usize, tau_tot: f64, mu: f64) -> f64 {
    let mf = m as f64;
    1.0 / (2.0 + 2.0 * mu - ((-tau_tot).exp() / mf).sqrt() * (1.0 + mu * (1.0 + mf)))
}

/// Optimal symmetric strategy from the regime formulas.
pub fn optimal_symmetric(m: usize, tau_tot: f64, mu: f64) -> Result<OptimalStrategy> {
    validate(m, tau_tot, mu)?;
    let mf = m as f64;
    let x = (-tau_tot).exp();
    let regime = classify_regime(m, tau_tot, mu);
    let strategy = match regime {
        Regime::A => OptimalStrategy {
            n_opt: finite_or_infinite(1.0 / (mf * (mf * x - 1.0))),
            tau0_opt: tau_tot,
            f_max: fidelity_a(m, tau_tot, mu),
            regime,
        },
        Regime::C => OptimalStrategy {
            n_opt: PhotonNumber::Infinite,
            tau0_opt: 0.5 * (tau_tot + mf.ln()),
            f_max: fidelity_c(m, tau_tot, mu),
            regime,
        },
        Regime::B => OptimalStrategy {
            n_opt: finite_or_infinite(x / (1.0 - mf * x)),
            tau0_opt: tau_tot,
            f_max: fidelity_b(tau_tot, mu),
            regime,
        },
    };
    Ok(strategy)
}

/// At `τ = ln m` the photon-number formulas divide by zero.
fn finite_or_infinite(n: f64) -> PhotonNumber {
    if n.is_finite() && n >= 0.0 {
        PhotonNumber::Finite(n)
    } else {
        PhotonNumber::Infinite
    }
}

/// Symmetric clone fidelity in a cancellation-free form valid up to
/// `N = ∞`. With `p = e^{-τ0}`, `q = e^{-τc}`, `x = pq`:
///
/// `1/F = 2 + 2μ - μ(p + q) + N(√(mp) - √q)² - 2√x / (√m + √(m + 1/N))`,
///
/// which equals the closed form at finite `N`. As `N → ∞` the fidelity
/// vanishes unless `mp = q`.
pub fn symmetric_fidelity(m: usize, n: PhotonNumber, tau0: f64, tau_tot: f64, mu: f64) -> f64 {
    let mf = m as f64;
    let p = (-tau0).exp();
    let q = (-(tau_tot - tau0)).exp();
    let x = (-tau_tot).exp();
    let mismatch = ((mf * p).sqrt() - q.sqrt()).powi(2);
    let base = 2.0 + 2.0 * mu - mu * (p + q);
    let s = match n {
        PhotonNumber::Finite(0.0) => base,
        PhotonNumber::Finite(n) => {
            base + n * mismatch - 2.0 * x.sqrt() / (mf.sqrt() + (mf + 1.0 / n).sqrt())
        }
        PhotonNumber::Infinite => {
            if mismatch > 0.0 {
                return 0.0;
            }
            base - x.sqrt() / mf.sqrt()
        }
    };
    1.0 / s
}

/// Direct numeric maximization of the symmetric clone fidelity over
/// `τ0 ∈ [0, τ]` and `u = N/(1+N) ∈ [0, 1]`.
///
/// For fixed `τ0` the fidelity is unimodal in `N`, so the inner problem is a
/// golden-section search in `u` (with `u = 1` the `N → ∞` limit). The outer
/// profile is scanned on a grid and refined by golden section around the
/// best grid point.
pub fn numeric_optimal(m: usize, tau_tot: f64, mu: f64) -> Result<OptimalStrategy> {
    validate(m, tau_tot, mu)?;
    let eval_u = |tau0: f64, u: f64| {
        let n = if u >= 1.0 {
            PhotonNumber::Infinite
        } else {
            PhotonNumber::Finite(u / (1.0 - u))
        };
        symmetric_fidelity(m, n, tau0, tau_tot, mu)
    };
    let profile = |tau0: f64| golden_max(|u| eval_u(tau0, u), 0.0, 1.0, 1e-15, 500);

    const GRID: usize = 200;
    let (i, _, _) = grid_argmax(|t| profile(t).value, 0.0, tau_tot, GRID);
    let step = tau_tot / GRID as f64;
    let lo = (i as f64 - 1.0).max(0.0) * step;
    let hi = ((i as f64 + 1.0) * step).min(tau_tot);
    let outer = golden_max(|t| profile(t).value, lo, hi, 1e-13 * tau_tot.max(1.0), 500);
    let inner = profile(outer.x);
    if !outer.converged || !inner.converged {
        return Err(Error::NoConvergence {
            tau0: outer.x,
            u: inner.x,
            fidelity: inner.value,
        });
    }
    let n = if inner.x >= 1.0 {
        f64::INFINITY
    } else {
        inner.x / (1.0 - inner.x)
    };
    Ok(OptimalStrategy {
        n_opt: if n > NUMERIC_INFINITY {
            PhotonNumber::Infinite
        } else {
            PhotonNumber::Finite(n)
        },
        tau0_opt: outer.x,
        f_max: inner.value,
        regime: classify_regime(m, tau_tot, mu),
    })
}

/// Link lengths beyond which optimized telecloning falls below the classical
/// fidelity ½. Only one branch applies for a given `μ`; the other is `∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UsefulTimeThresholds {
    /// `ln[(1 + μ + mμ)²/(4mμ²)]`, for `μ < 1/(m-1)`.
    pub tau_a_th: f64,
    /// `-ln[1 - 1/(mμ)]`, for `μ ≥ 1/(m-1)`.
    pub tau_c_th: f64,
}

pub fn useful_time_thresholds(m: usize, mu: f64) -> Result<UsefulTimeThresholds> {
    validate(m, 0.0, mu)?;
    let mf = m as f64;
    if mu == 0.0 {
        return Ok(UsefulTimeThresholds {
            tau_a_th: f64::INFINITY,
            tau_c_th: f64::INFINITY,
        });
    }
    if mu * (mf - 1.0) < 1.0 {
        Ok(UsefulTimeThresholds {
            tau_a_th: ((1.0 + mu + mf * mu).powi(2) / (4.0 * mf * mu * mu)).ln(),
            tau_c_th: f64::INFINITY,
        })
    } else {
        Ok(UsefulTimeThresholds {
            tau_a_th: f64::INFINITY,
            tau_c_th: -(1.0 - 1.0 / (mf * mu)).ln(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::telecloning::{clone_fidelity_closed, TelecloningConfig};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    #[test]
    fn regime_a_example() {
        let s = optimal_symmetric(2, 0.3, 0.0).unwrap();
        assert_eq!(s.regime, Regime::A);
        assert_eq!(s.tau0_opt, 0.3);
        assert_abs_diff_eq!(
            s.n_opt.value(),
            1.0 / (2.0 * (2.0 * (-0.3f64).exp() - 1.0)),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(s.f_max, 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn regime_c_example() {
        let s = optimal_symmetric(2, 1.5, 0.2).unwrap();
        assert_eq!(s.regime, Regime::C);
        assert_eq!(s.n_opt, PhotonNumber::Infinite);
        assert_abs_diff_eq!(s.tau0_opt, 0.5 * (1.5 + 2f64.ln()), epsilon = 1e-15);
        assert_abs_diff_eq!(s.f_max, fidelity_c(2, 1.5, 0.2), epsilon = 1e-15);
    }

    #[test]
    fn regime_b_examples() {
        let s = optimal_symmetric(2, 1.0, 2.0).unwrap();
        assert_eq!(s.regime, Regime::B);
        assert_abs_diff_eq!(s.f_max, fidelity_b(1.0, 2.0), epsilon = 1e-15);
        // Beyond the regime-C window.
        assert_eq!(classify_regime(2, 3.0, 0.2), Regime::B);
    }

    #[test]
    fn boundaries_are_continuous() {
        for m in 2..6 {
            let lnm = (m as f64).ln();
            for mu in [0.0, 0.1, 0.2] {
                if mu * (m as f64 - 1.0) < 1.0 {
                    assert_abs_diff_eq!(
                        fidelity_a(m, lnm, mu),
                        fidelity_c(m, lnm, mu),
                        epsilon = 1e-12
                    );
                }
            }
            let mu = 0.1;
            if mu * (m as f64 - 1.0) < 1.0 {
                let edge = regime_c_limit(m, mu);
                assert_abs_diff_eq!(
                    fidelity_c(m, edge, mu),
                    fidelity_b(edge, mu),
                    epsilon = 1e-12
                );
            }
        }
        assert_eq!(classify_regime(3, 3f64.ln(), 0.0), Regime::A);
        let ideal = 2.0 / 3.0;
        assert_abs_diff_eq!(fidelity_a(2, 2f64.ln(), 0.0), ideal, epsilon = 1e-15);
        assert_abs_diff_eq!(fidelity_c(2, 2f64.ln(), 0.0), ideal, epsilon = 1e-15);
    }

    #[test]
    fn closed_form_reproduced_at_optimum() {
        for (m, tau, mu) in [(2, 0.3, 0.0), (3, 0.5, 0.4), (2, 2.0, 0.5), (4, 3.0, 1.0)] {
            let s = optimal_symmetric(m, tau, mu).unwrap();
            let cfg =
                TelecloningConfig::symmetric(m, s.n_opt.value(), s.tau0_opt, tau - s.tau0_opt, mu)
                    .unwrap();
            assert_abs_diff_eq!(
                clone_fidelity_closed(&cfg, 1).unwrap(),
                s.f_max,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn regime_c_approached_monotonically() {
        let (m, tau, mu) = (2, 1.5, 0.2);
        let s = optimal_symmetric(m, tau, mu).unwrap();
        let mut last = 0.0;
        for n in [1.0, 10.0, 100.0, 1e4, 1e6] {
            let f = symmetric_fidelity(m, PhotonNumber::Finite(n), s.tau0_opt, tau, mu);
            assert!(f > last && f < s.f_max);
            last = f;
        }
        assert!(s.f_max - last < 1e-6);
    }

    #[test]
    fn numeric_search_examples() {
        let s = numeric_optimal(2, 0.3, 0.0).unwrap();
        assert_abs_diff_eq!(s.f_max, 2.0 / 3.0, epsilon = 1e-6);
        assert_relative_eq!(s.tau0_opt, 0.3, max_relative = 1e-4);
        let n_opt = 1.0 / (2.0 * (2.0 * (-0.3f64).exp() - 1.0));
        assert_abs_diff_eq!(s.n_opt.value(), n_opt, epsilon = 1e-4);

        let closed = optimal_symmetric(3, 2.0, 0.4).unwrap();
        let numeric = numeric_optimal(3, 2.0, 0.4).unwrap();
        assert_abs_diff_eq!(numeric.f_max, closed.f_max, epsilon = 1e-6);

        let c = numeric_optimal(2, 1.5, 0.2).unwrap();
        assert_eq!(c.n_opt, PhotonNumber::Infinite);
        assert_relative_eq!(c.tau0_opt, 0.5 * (1.5 + 2f64.ln()), max_relative = 1e-4);
        assert_abs_diff_eq!(c.f_max, fidelity_c(2, 1.5, 0.2), epsilon = 1e-6);
    }

    #[test]
    fn usefulness_thresholds() {
        let t = useful_time_thresholds(2, 0.4).unwrap();
        assert_abs_diff_eq!(t.tau_a_th, (4.84f64 / 1.28).ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(t.tau_a_th, 1.330_055, epsilon = 1e-6);
        assert!(t.tau_c_th.is_infinite());
        let f = optimal_symmetric(2, t.tau_a_th, 0.4).unwrap().f_max;
        assert_abs_diff_eq!(f, 0.5, epsilon = 1e-9);

        let t = useful_time_thresholds(2, 1.0).unwrap();
        assert_abs_diff_eq!(t.tau_c_th, 2f64.ln(), epsilon = 1e-15);
        assert!(t.tau_a_th.is_infinite());
        assert_abs_diff_eq!(
            optimal_symmetric(2, t.tau_c_th, 1.0).unwrap().f_max,
            0.5,
            epsilon = 1e-9
        );

        let t = useful_time_thresholds(3, 0.0).unwrap();
        assert!(t.tau_a_th.is_infinite() && t.tau_c_th.is_infinite());
        assert!(useful_time_thresholds(1, 0.3).is_err());
    }

    #[test]
    fn validation() {
        assert!(optimal_symmetric(1, 0.5, 0.0).is_err());
        assert!(optimal_symmetric(2, -0.5, 0.0).is_err());
        assert!(optimal_symmetric(2, 0.5, -1.0).is_err());
        assert!(numeric_optimal(2, f64::NAN, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn stable_form_matches_closed_form(
            m in 2usize..6, n in 0.0f64..50.0, tau0 in 0.0f64..3.0, tauc in 0.0f64..3.0, mu in 0.0f64..2.0,
        ) {
            let cfg = TelecloningConfig::symmetric(m, n, tau0, tauc, mu).unwrap();
            let closed = clone_fidelity_closed(&cfg, 1).unwrap();
            let stable = symmetric_fidelity(m, PhotonNumber::Finite(n), tau0, tau0 + tauc, mu);
            prop_assert!((closed - stable).abs() < 1e-11);
        }

        #[test]
        fn optimum_non_increasing_in_noise(m in 2usize..8, tau in 0.01f64..4.0, mu in 0.0f64..2.0, d in 0.001f64..0.5) {
            let f = optimal_symmetric(m, tau, mu).unwrap().f_max;
            prop_assert!(optimal_symmetric(m, tau + d, mu).unwrap().f_max <= f + 1e-12);
            prop_assert!(optimal_symmetric(m, tau, mu + d).unwrap().f_max <= f + 1e-12);
        }

        #[test]
        fn ideal_cloning_saturated_below_ln_m(m in 2usize..10, frac in 0.0f64..1.0) {
            let tau = frac * (m as f64).ln();
            let f = optimal_symmetric(m, tau, 0.0).unwrap().f_max;
            prop_assert!((f - m as f64 / (2.0 * m as f64 - 1.0)).abs() < 1e-12);
        }

        #[test]
        fn regime_b_never_beats_classical_limit(m in 2usize..8, tau in 0.0f64..6.0, mu in 0.0f64..3.0) {
            if classify_regime(m, tau, mu) == Regime::B {
                prop_assert!(optimal_symmetric(m, tau, mu).unwrap().f_max <= 0.5 + 1e-12);
            }
        }
    }
}
