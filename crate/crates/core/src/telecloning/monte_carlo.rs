//! Sampled measure-and-displace loop: draw outcomes from the exact outcome
//! density, condition, displace, and estimate each clone's averaged moments.

use nalgebra::{Complex, Matrix2, Vector2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::TelecloningConfig;
use crate::error::{Error, Result};
use crate::gaussian::{coherent_mean, reflection, ConditionalGaussian, MeasurementOutcome};
use crate::sum1::covariance_matrix;

pub const MIN_SAMPLES: usize = 1000;

/// Empirical averaged state of one clone with standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloClone {
    pub fidelity: f64,
    pub mean: Vector2<f64>,
    pub mean_se: Vector2<f64>,
    pub cov: Matrix2<f64>,
    pub cov_se: Matrix2<f64>,
}

pub fn monte_carlo_protocol(
    config: &TelecloningConfig,
    alpha: Complex<f64>,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<MonteCarloClone>> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::domain(format!(
            "need at least {MIN_SAMPLES} samples, got {n_samples}"
        )));
    }
    let m = config.m();
    let support =
        covariance_matrix(config.source()).apply_thermal_loss(&config.channel_params())?;
    let input_cov = Matrix2::identity() * 0.5;
    let input_mean = coherent_mean(alpha);
    let cg = ConditionalGaussian::new(&support, 0, &input_cov, &input_mean)?;
    let chol = cg
        .outcome_cov()
        .cholesky()
        .ok_or_else(|| Error::numerical("outcome covariance is not positive definite"))?;
    let l = chol.l();
    let p = reflection();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // samples[h][i]: displaced conditional mean of clone h for draw i.
    let mut samples: Vec<Vec<Vector2<f64>>> = vec![Vec::with_capacity(n_samples); m];
    let mut cond_cov = None;
    for _ in 0..n_samples {
        let e = Vector2::new(
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
        );
        let z = cg.outcome_mean() + l * e;
        let outcome = MeasurementOutcome::from_vector(z)?;
        let (state, _) =
            support.condition_on_double_homodyne(0, &input_cov, &input_mean, &outcome)?;
        for (h, s) in samples.iter_mut().enumerate() {
            s.push(state.mode_mean(h) - p * z);
        }
        if cond_cov.is_none() {
            cond_cov = Some(state);
        }
    }
    let cond = cond_cov.expect("n_samples >= MIN_SAMPLES");

    samples
        .iter()
        .enumerate()
        .map(|(h, xs)| {
            let (mean, mean_se, spread, spread_se) = moments(xs);
            let cov = cond.mode_cov(h) + spread;
            let offset = mean - input_mean;
            Ok(MonteCarloClone {
                fidelity: crate::gaussian::coherent_overlap(&cov, &offset),
                mean,
                mean_se,
                cov,
                cov_se: spread_se,
            })
        })
        .collect()
}

/// Sample mean, its standard error, sample covariance and the standard
/// error of each covariance entry. Two passes for stability.
fn moments(xs: &[Vector2<f64>]) -> (Vector2<f64>, Vector2<f64>, Matrix2<f64>, Matrix2<f64>) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<Vector2<f64>>() / n;
    let mut cov = Matrix2::zeros();
    for x in xs {
        let d = x - mean;
        cov += d * d.transpose();
    }
    cov /= n - 1.0;
    let mut var_prod = Matrix2::zeros();
    for x in xs {
        let d = x - mean;
        let prod = d * d.transpose() - cov;
        var_prod += prod.component_mul(&prod);
    }
    var_prod /= n - 1.0;
    let mean_se = Vector2::new((cov[(0, 0)] / n).sqrt(), (cov[(1, 1)] / n).sqrt());
    let cov_se = var_prod.map(|v| (v / n).sqrt());
    (mean, mean_se, cov, cov_se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::telecloning::clone_fidelity_closed;

    #[test]
    fn agrees_with_closed_form_within_five_standard_errors() {
        let cfg = TelecloningConfig::symmetric(2, 0.6, 0.3, 0.4, 0.2).unwrap();
        let alpha = Complex::new(1.2, -0.7);
        let target = coherent_mean(alpha);
        let clones = monte_carlo_protocol(&cfg, alpha, 100_000, 7).unwrap();
        for (h, c) in clones.iter().enumerate() {
            let f = clone_fidelity_closed(&cfg, h + 1).unwrap();
            let sigma = Matrix2::identity() * (1.0 / f - 0.5);
            for i in 0..2 {
                assert!(
                    (c.mean[i] - target[i]).abs() < 5.0 * c.mean_se[i],
                    "mean {i}: {c:?}"
                );
                for j in 0..2 {
                    let tol = 5.0 * c.cov_se[(i, j)];
                    assert!(
                        (c.cov[(i, j)] - sigma[(i, j)]).abs() < tol,
                        "cov {i}{j}: {c:?}"
                    );
                }
            }
            assert!((c.fidelity - f).abs() < 0.01);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = TelecloningConfig::symmetric(3, 0.4, 0.1, 0.2, 0.0).unwrap();
        let a = monte_carlo_protocol(&cfg, Complex::new(0.5, 0.5), 2000, 99).unwrap();
        let b = monte_carlo_protocol(&cfg, Complex::new(0.5, 0.5), 2000, 99).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo_protocol(&cfg, Complex::new(0.5, 0.5), 2000, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn too_few_samples() {
        let cfg = TelecloningConfig::symmetric(2, 0.4, 0.1, 0.2, 0.0).unwrap();
        assert!(matches!(
            monte_carlo_protocol(&cfg, Complex::new(0.0, 0.0), 999, 1),
            Err(Error::Domain(_))
        ));
    }
}
