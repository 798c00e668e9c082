//! Truncated number-basis expansion of the SU(m,1) support, used as an
//! independent check of its covariance matrix.
//!
//! Basis states are `|n_0; n_1, ..., n_m⟩` with `n_0 = Σ n_k`; the cutoff
//! bounds the total receiver photon number.

use std::collections::HashMap;

use nalgebra::DMatrix;

use super::Sum1Params;
use crate::error::{Error, Result};

pub const DEFAULT_CUTOFF: usize = 40;

/// Captured norm below which the expansion is flagged as unreliable.
const LOW_NORM_WARNING: f64 = 0.5;

/// Captured norm required by the covariance oracle.
const ORACLE_NORM: f64 = 1.0 - 1e-8;

#[derive(Debug, Clone)]
pub struct FockAmplitudes {
    cutoff: usize,
    amplitudes: HashMap<Vec<u32>, f64>,
    captured_norm: f64,
}

impl FockAmplitudes {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Amplitude of the receiver occupation `(n_1, ..., n_m)`; zero outside
    /// the truncated support.
    pub fn amplitude(&self, occupation: &[u32]) -> f64 {
        self.amplitudes.get(occupation).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.amplitudes.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    /// `Σ |amplitude|²` over the truncated support.
    pub fn captured_norm(&self) -> f64 {
        self.captured_norm
    }

    /// Set when the cutoff captures less than half of the state.
    pub fn low_norm_warning(&self) -> bool {
        self.captured_norm < LOW_NORM_WARNING
    }
}

/// Amplitudes `√Z_m · Π C_k^{n_k} · √((Σn_k)!) / √(Π n_k!)` for all receiver
/// occupations with `Σ n_k ≤ cutoff`, evaluated in log space.
pub fn fock_state_amplitudes(params: &Sum1Params, cutoff: usize) -> FockAmplitudes {
    let m = params.m();
    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=cutoff).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    let ln_c: Vec<f64> = (1..=m).map(|k| params.amplitude_ratio(k).ln()).collect();
    let ln_norm = 0.5 * params.normalization().ln();

    let mut amplitudes = HashMap::new();
    let mut captured_norm = 0.0;
    let mut occ = vec![0u32; m];
    loop {
        let total: usize = occ.iter().map(|&n| n as usize).sum();
        // Modes with C_k = 0 only contribute at n_k = 0.
        let on_support = occ
            .iter()
            .zip(&ln_c)
            .all(|(&n, &lc)| n == 0 || lc.is_finite());
        if on_support {
            let mut ln_amp = ln_norm + 0.5 * ln_fact[total];
            for (&n, &lc) in occ.iter().zip(&ln_c) {
                if n > 0 {
                    ln_amp += n as f64 * lc - 0.5 * ln_fact[n as usize];
                }
            }
            let amp = ln_amp.exp();
            captured_norm += amp * amp;
            amplitudes.insert(occ.clone(), amp);
        }
        if !next_occupation(&mut occ, cutoff) {
            break;
        }
    }
    FockAmplitudes {
        cutoff,
        amplitudes,
        captured_norm,
    }
}

/// Advances to the next occupation tuple with total `≤ cutoff`, odometer
/// style. Returns false after the last one.
fn next_occupation(occ: &mut [u32], cutoff: usize) -> bool {
    let mut total: usize = occ.iter().map(|&n| n as usize).sum();
    for o in occ.iter_mut() {
        if total < cutoff {
            *o += 1;
            return true;
        }
        total -= *o as usize;
        *o = 0;
    }
    false
}

#[derive(Clone, Copy)]
enum Ladder {
    Lower(usize),
    Raise(usize),
}

/// `⟨ψ| op_1 op_2 ... |ψ⟩` over the truncated expansion. Mode 0 is `a_0`;
/// the rightmost operator acts first.
fn expectation(amps: &FockAmplitudes, ops: &[Ladder]) -> f64 {
    let mut total = 0.0;
    for (occ, amp) in amps.iter() {
        let mut full: Vec<i64> = std::iter::once(occ.iter().map(|&n| n as i64).sum())
            .chain(occ.iter().map(|&n| n as i64))
            .collect();
        let mut coef = amp;
        for op in ops.iter().rev() {
            match *op {
                Ladder::Lower(k) => {
                    coef *= (full[k] as f64).sqrt();
                    full[k] -= 1;
                }
                Ladder::Raise(k) => {
                    full[k] += 1;
                    coef *= (full[k] as f64).sqrt();
                }
            }
            if full[k_of(op)] < 0 || coef == 0.0 {
                coef = 0.0;
                break;
            }
        }
        if coef == 0.0 {
            continue;
        }
        let receivers: i64 = full[1..].iter().sum();
        if full[0] != receivers {
            continue;
        }
        let key: Vec<u32> = full[1..].iter().map(|&n| n as u32).collect();
        total += coef * amps.amplitude(&key);
    }
    total
}

fn k_of(op: &Ladder) -> usize {
    match *op {
        Ladder::Lower(k) | Ladder::Raise(k) => k,
    }
}

/// Covariance matrix from number-basis expectation values
/// `⟨a_j a_k⟩` and `⟨a_j† a_k⟩` of the truncated (renormalized) state.
pub fn covariance_from_fock_oracle(params: &Sum1Params, cutoff: usize) -> Result<DMatrix<f64>> {
    let amps = fock_state_amplitudes(params, cutoff);
    if amps.captured_norm() < ORACLE_NORM {
        return Err(Error::InsufficientCutoff {
            cutoff,
            captured_norm: amps.captured_norm(),
            required: ORACLE_NORM,
        });
    }
    let norm = amps.captured_norm();
    let n_modes = params.m() + 1;
    let mut cov = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for j in 0..n_modes {
        for k in j..n_modes {
            let aa = expectation(&amps, &[Ladder::Lower(j), Ladder::Lower(k)]) / norm;
            let ad_a = expectation(&amps, &[Ladder::Raise(j), Ladder::Lower(k)]) / norm;
            let vac = if j == k { 0.5 } else { 0.0 };
            // Real amplitudes: every q-p cross moment vanishes.
            let qq = aa + ad_a + vac;
            let pp = -aa + ad_a + vac;
            for (r, c, v) in [(2 * j, 2 * k, qq), (2 * j + 1, 2 * k + 1, pp)] {
                cov[(r, c)] = v;
                cov[(c, r)] = v;
            }
        }
    }
    Ok(cov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sum1::covariance_matrix;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_expansion() {
        let p = Sum1Params::symmetric(3, 0.0).unwrap();
        let amps = fock_state_amplitudes(&p, 10);
        assert_eq!(amps.len(), 1);
        assert_eq!(amps.amplitude(&[0, 0, 0]), 1.0);
        let cov = covariance_from_fock_oracle(&p, 10).unwrap();
        assert_eq!(cov, DMatrix::identity(8, 8) * 0.5);
    }

    #[test]
    fn twin_beam_schmidt_form() {
        for n in [0.3, 1.0, 2.5] {
            let amps = fock_state_amplitudes(&Sum1Params::symmetric(1, n).unwrap(), 30);
            for k in 0..=30u32 {
                let expected = (1.0 + n).powf(-0.5) * (n / (1.0 + n)).powf(k as f64 / 2.0);
                assert_abs_diff_eq!(amps.amplitude(&[k]), expected, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn captured_norm_converges() {
        let amps = fock_state_amplitudes(&Sum1Params::symmetric(2, 0.2).unwrap(), 60);
        assert!(amps.captured_norm() >= 1.0 - 1e-8);
        assert!(amps.captured_norm() <= 1.0 + 1e-12);
        assert!(!amps.low_norm_warning());
        let short = fock_state_amplitudes(&Sum1Params::symmetric(2, 5.0).unwrap(), 3);
        assert!(short.low_norm_warning());
    }

    #[test]
    fn oracle_matches_closed_form() {
        for p in [
            Sum1Params::symmetric(2, 0.2).unwrap(),
            Sum1Params::symmetric(3, 0.1).unwrap(),
            Sum1Params::new(vec![0.05, 0.3]).unwrap(),
        ] {
            let oracle = covariance_from_fock_oracle(&p, DEFAULT_CUTOFF).unwrap();
            let diff = (oracle - covariance_matrix(&p).cov()).amax();
            assert!(diff < 1e-6, "max difference {diff}");
        }
    }

    #[test]
    fn insufficient_cutoff_is_an_error() {
        let err =
            covariance_from_fock_oracle(&Sum1Params::symmetric(2, 1.0).unwrap(), 5).unwrap_err();
        assert!(matches!(err, Error::InsufficientCutoff { cutoff: 5, .. }));
    }

    #[test]
    fn odometer_enumerates_simplex() {
        let p = Sum1Params::symmetric(3, 0.4).unwrap();
        // Number of triples with total <= 10 is C(13, 3).
        assert_eq!(fock_state_amplitudes(&p, 10).len(), 286);
    }
}
