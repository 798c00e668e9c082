//! The SU(m,1) multimode entangled support: mode `a_0` followed by the
//! receiver modes `a_1..a_m`, all starting from the vacuum so that
//! `N_0 = Σ N_k`.

mod fock;

pub use fock::{
    covariance_from_fock_oracle, fock_state_amplitudes, FockAmplitudes, DEFAULT_CUTOFF,
};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::{ppt_min_symplectic, GaussianState, ModePartition};

/// Largest number of modes (`m + 1`) for exhaustive bipartition checks.
pub const MAX_ENUMERATED_MODES: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct Sum1Params {
    photon_numbers: Vec<f64>,
}

impl Sum1Params {
    /// Receiver photon numbers `N_1..N_m`.
    pub fn new(photon_numbers: Vec<f64>) -> Result<Self> {
        if photon_numbers.is_empty() {
            return Err(Error::domain("need at least one receiver mode"));
        }
        if let Some(bad) = photon_numbers
            .iter()
            .find(|n| !(**n >= 0.0 && n.is_finite()))
        {
            return Err(Error::domain(format!(
                "photon numbers must be finite and >= 0, got {bad}"
            )));
        }
        Ok(Self { photon_numbers })
    }

    pub fn symmetric(m: usize, n_per_mode: f64) -> Result<Self> {
        SymmetricSum1::new(m, n_per_mode)?.to_params()
    }

    pub fn m(&self) -> usize {
        self.photon_numbers.len()
    }

    pub fn photon_numbers(&self) -> &[f64] {
        &self.photon_numbers
    }

    /// `N_h` for `h = 1..=m`.
    pub fn photon_number(&self, h: usize) -> f64 {
        self.photon_numbers[h - 1]
    }

    pub fn n0(&self) -> f64 {
        self.photon_numbers.iter().sum()
    }

    /// `C_k = √(N_k / (1 + N_0))`, `k = 1..=m`.
    pub fn amplitude_ratio(&self, k: usize) -> f64 {
        (self.photon_number(k) / (1.0 + self.n0())).sqrt()
    }

    /// `Z_m = 1 / (1 + N_0)`.
    pub fn normalization(&self) -> f64 {
        1.0 / (1.0 + self.n0())
    }
}

/// Support with every receiver carrying the same photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricSum1 {
    m: usize,
    n_per_mode: f64,
}

impl SymmetricSum1 {
    pub fn new(m: usize, n_per_mode: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("need at least one receiver mode"));
        }
        if !(n_per_mode >= 0.0 && n_per_mode.is_finite()) {
            return Err(Error::domain(format!(
                "photon number must be finite and >= 0, got {n_per_mode}"
            )));
        }
        Ok(Self { m, n_per_mode })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_per_mode(&self) -> f64 {
        self.n_per_mode
    }

    pub fn to_params(&self) -> Result<Sum1Params> {
        Sum1Params::new(vec![self.n_per_mode; self.m])
    }
}

/// Covariance matrix of the support: diagonal blocks `(N_k + ½)I`, blocks
/// `√(N_h(N_0 + 1))·P` between `a_0` and `a_h`, and `√(N_i N_j)·I` between
/// receivers.
pub fn covariance_matrix(params: &Sum1Params) -> GaussianState {
    let m = params.m();
    let n0 = params.n0();
    let dim = 2 * (m + 1);
    let occupation = |k: usize| if k == 0 { n0 } else { params.photon_number(k) };
    let mut cov = DMatrix::zeros(dim, dim);
    for k in 0..=m {
        cov[(2 * k, 2 * k)] = occupation(k) + 0.5;
        cov[(2 * k + 1, 2 * k + 1)] = occupation(k) + 0.5;
    }
    for h in 1..=m {
        let a = (params.photon_number(h) * (n0 + 1.0)).sqrt();
        for (r, c, v) in [(0, 2 * h, a), (1, 2 * h + 1, -a)] {
            cov[(r, c)] = v;
            cov[(c, r)] = v;
        }
        for j in (h + 1)..=m {
            let b = (params.photon_number(h) * params.photon_number(j)).sqrt();
            for d in 0..2 {
                cov[(2 * h + d, 2 * j + d)] = b;
                cov[(2 * j + d, 2 * h + d)] = b;
            }
        }
    }
    GaussianState::from_parts(DVector::zeros(dim), cov)
}

/// PPT value `ν̃_min` for every bipartition of the `m + 1` support modes.
pub fn check_full_inseparability(params: &Sum1Params) -> Result<Vec<(ModePartition, f64)>> {
    let n_modes = params.m() + 1;
    if n_modes > MAX_ENUMERATED_MODES {
        return Err(Error::domain(format!(
            "{n_modes} modes is too many for exhaustive enumeration (max {MAX_ENUMERATED_MODES}); \
             supply explicit partitions to ppt_min_symplectic instead"
        )));
    }
    let state = covariance_matrix(params);
    ModePartition::all_bipartitions(n_modes)
        .into_iter()
        .map(|p| ppt_min_symplectic(&state, &p).map(|v| (p, v)))
        .collect()
}
