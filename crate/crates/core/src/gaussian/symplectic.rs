use std::collections::BTreeSet;

use nalgebra::{DMatrix, SymmetricEigen};

use super::{check_symmetric, GaussianState};
use crate::error::{Error, Result};

/// Tolerance for pairing the doubly degenerate spectrum of `-K²`, relative
/// to its largest value (the eigensolver's error scales with it).
const PAIRING_TOL: f64 = 1e-9;

/// Standard symplectic form `⊕ ((0, 1), (-1, 0))` on `n_modes` modes.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Symplectic eigenvalues of a positive semi-definite covariance matrix,
/// ascending.
///
/// These are the moduli of the eigenvalues of `iΩσ`. They are obtained from
/// the real antisymmetric matrix `K = σ^½ Ω σ^½`, which is similar to `Ωσ`:
/// the symmetric matrix `KᵀK` has each `ν²` twice.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = cov.nrows();
    if dim == 0 || !dim.is_multiple_of(2) || cov.ncols() != dim {
        return Err(Error::domain(format!(
            "covariance must be square with even dimension, got {}x{}",
            cov.nrows(),
            cov.ncols()
        )));
    }
    check_symmetric(cov)?;
    let sym = (cov + cov.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let scale = eig.eigenvalues.amax().max(1.0);
    if eig.eigenvalues.min() < -1e-12 * scale {
        return Err(Error::domain(format!(
            "covariance has a negative eigenvalue {}",
            eig.eigenvalues.min()
        )));
    }
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let sqrt_cov =
        &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose();
    let k = &sqrt_cov * symplectic_form(dim / 2) * &sqrt_cov;
    let gram = k.transpose() * &k;
    let gram = (&gram + gram.transpose()) * 0.5;
    let mut sq: Vec<f64> = SymmetricEigen::new(gram)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    sq.sort_by(f64::total_cmp);

    let scale = sq.last().copied().unwrap_or(0.0).max(1.0);
    let mut out = Vec::with_capacity(dim / 2);
    for pair in sq.chunks(2) {
        let (a, b) = (pair[0].max(0.0), pair[1].max(0.0));
        if (a - b).abs() > PAIRING_TOL * scale {
            return Err(Error::numerical(format!(
                "symplectic spectrum failed to pair: {a} vs {b}"
            )));
        }
        out.push((0.5 * (a + b)).sqrt());
    }
    Ok(out)
}

/// A bipartition of the modes of a state into two nonempty groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModePartition {
    group_a: BTreeSet<usize>,
    group_b: BTreeSet<usize>,
}

impl ModePartition {
    pub fn new(
        group_a: impl IntoIterator<Item = usize>,
        group_b: impl IntoIterator<Item = usize>,
        n_modes: usize,
    ) -> Result<Self> {
        let group_a: BTreeSet<usize> = group_a.into_iter().collect();
        let group_b: BTreeSet<usize> = group_b.into_iter().collect();
        if group_a.is_empty() || group_b.is_empty() {
            return Err(Error::domain("both sides of a partition must be nonempty"));
        }
        if !group_a.is_disjoint(&group_b) {
            return Err(Error::domain("partition groups overlap"));
        }
        let covered = group_a.len() + group_b.len();
        let in_range = group_a.iter().chain(&group_b).all(|&k| k < n_modes);
        if covered != n_modes || !in_range {
            return Err(Error::domain(format!(
                "partition does not cover modes 0..{n_modes} exactly"
            )));
        }
        Ok(Self { group_a, group_b })
    }

    /// All bipartitions of `n_modes` modes, each listed once (mode 0 is
    /// always in `group_a`).
    pub fn all_bipartitions(n_modes: usize) -> Vec<ModePartition> {
        if n_modes < 2 {
            return Vec::new();
        }
        (1u64..(1 << (n_modes - 1)))
            .map(|mask| {
                let b: BTreeSet<usize> = (1..n_modes)
                    .filter(|k| mask & (1 << (k - 1)) != 0)
                    .collect();
                let a: BTreeSet<usize> = (0..n_modes).filter(|k| !b.contains(k)).collect();
                ModePartition {
                    group_a: a,
                    group_b: b,
                }
            })
            .collect()
    }

    pub fn group_a(&self) -> &BTreeSet<usize> {
        &self.group_a
    }

    pub fn group_b(&self) -> &BTreeSet<usize> {
        &self.group_b
    }

    fn n_modes(&self) -> usize {
        self.group_a.len() + self.group_b.len()
    }
}

impl std::fmt::Display for ModePartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |s: &BTreeSet<usize>| {
            s.iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{{{}|{}}}", join(&self.group_a), join(&self.group_b))
    }
}

/// Smallest symplectic eigenvalue of the partially transposed covariance
/// (momentum sign flip on `group_b`). A value below ½ certifies
/// entanglement across the partition.
pub fn ppt_min_symplectic(state: &GaussianState, partition: &ModePartition) -> Result<f64> {
    if partition.n_modes() != state.n_modes() {
        return Err(Error::domain(format!(
            "partition covers {} modes, state has {}",
            partition.n_modes(),
            state.n_modes()
        )));
    }
    let mut flipped = state.cov().clone();
    for &k in partition.group_b() {
        let p = 2 * k + 1;
        flipped.row_mut(p).neg_mut();
        flipped.column_mut(p).neg_mut();
    }
    Ok(symplectic_eigenvalues(&flipped)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use proptest::prelude::*;

    pub(crate) fn twin_beam(n: f64) -> GaussianState {
        let c = (n * (n + 1.0)).sqrt();
        let cov = DMatrix::from_row_slice(
            4,
            4,
            &[
                n + 0.5,
                0.0,
                c,
                0.0, //
                0.0,
                n + 0.5,
                0.0,
                -c, //
                c,
                0.0,
                n + 0.5,
                0.0, //
                0.0,
                -c,
                0.0,
                n + 0.5,
            ],
        );
        GaussianState::new(DVector::zeros(4), cov).unwrap()
    }

    /// Two-mode symplectic spectrum from the invariants
    /// `Δ = det A + det B + 2 det C` and `det σ`.
    fn two_mode_spectrum(cov: &DMatrix<f64>) -> Vec<f64> {
        let a = cov.view((0, 0), (2, 2)).determinant();
        let b = cov.view((2, 2), (2, 2)).determinant();
        let c = cov.view((0, 2), (2, 2)).determinant();
        let delta = a + b + 2.0 * c;
        let disc = (delta * delta - 4.0 * cov.determinant()).max(0.0).sqrt();
        vec![((delta - disc) / 2.0).sqrt(), ((delta + disc) / 2.0).sqrt()]
    }

    #[test]
    fn vacuum_and_thermal_spectra() {
        for n in 1..4 {
            for nu in symplectic_eigenvalues(&(DMatrix::identity(2 * n, 2 * n) * 0.5)).unwrap() {
                assert_abs_diff_eq!(nu, 0.5, epsilon = 1e-14);
            }
            for nu in GaussianState::thermal(n, 1.7)
                .symplectic_eigenvalues()
                .unwrap()
            {
                assert_abs_diff_eq!(nu, 2.2, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn twin_beam_is_pure() {
        for n in [0.0, 0.3, 1.0, 5.0] {
            let st = twin_beam(n);
            let nu = st.symplectic_eigenvalues().unwrap();
            assert_abs_diff_eq!(nu[0], 0.5, epsilon = 1e-10);
            assert_abs_diff_eq!(nu[1], 0.5, epsilon = 1e-10);
            for g in two_mode_spectrum(st.cov()) {
                // The discriminant cancels for pure states; only ~√ε accuracy.
                assert_abs_diff_eq!(g, 0.5, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.0, 1.0]);
        assert!(matches!(symplectic_eigenvalues(&m), Err(Error::Domain(_))));
    }

    #[test]
    fn ppt_examples() {
        let vac = GaussianState::vacuum(3);
        for p in ModePartition::all_bipartitions(3) {
            assert_abs_diff_eq!(ppt_min_symplectic(&vac, &p).unwrap(), 0.5, epsilon = 1e-14);
        }
        // Two-mode squeezed vacuum: ν̃ = e^{-2r}/2 with cosh 2r = 2N + 1.
        let p = ModePartition::new([0], [1], 2).unwrap();
        let nu = ppt_min_symplectic(&twin_beam(1.0), &p).unwrap();
        let expected = 1.0 / (2.0 * (3.0 + 2.0 * 2f64.sqrt()));
        assert_abs_diff_eq!(nu, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(nu, 0.085_786_437_626_904_95, epsilon = 1e-12);

        let mut flipped = twin_beam(1.0).cov().clone();
        flipped.row_mut(3).neg_mut();
        flipped.column_mut(3).neg_mut();
        assert_abs_diff_eq!(two_mode_spectrum(&flipped)[0], expected, epsilon = 1e-9);
    }

    #[test]
    fn partition_validation() {
        assert!(ModePartition::new([0], [], 1).is_err());
        assert!(ModePartition::new([0, 1], [1], 2).is_err());
        assert!(ModePartition::new([0], [2], 2).is_err());
        assert!(ModePartition::new([0], [1], 3).is_err());
        assert_eq!(ModePartition::all_bipartitions(3).len(), 3);
        assert_eq!(ModePartition::all_bipartitions(4).len(), 7);
        let p = ModePartition::new([0], [1], 2).unwrap();
        assert!(ppt_min_symplectic(&GaussianState::vacuum(3), &p).is_err());
        assert_eq!(p.to_string(), "{0|1}");
    }

    proptest! {
        #[test]
        fn spectrum_invariant_under_local_rotations(n in 0.0f64..3.0, theta in 0.0f64..6.3) {
            let st = twin_beam(n);
            let (s, c) = theta.sin_cos();
            let mut r = DMatrix::identity(4, 4);
            r[(0, 0)] = c; r[(0, 1)] = -s; r[(1, 0)] = s; r[(1, 1)] = c;
            let rotated = &r * st.cov() * r.transpose();
            let p = ModePartition::new([0], [1], 2).unwrap();
            let rotated = GaussianState::new(DVector::zeros(4), rotated).unwrap();
            let a = ppt_min_symplectic(&st, &p).unwrap();
            let b = ppt_min_symplectic(&rotated, &p).unwrap();
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
