//! Scalar figures of merit: entanglement entropy, logarithmic negativity,
//! Gaussian fidelity against a pure state, input energy and the
//! energy-constrained entropy bound. All entropic quantities are in bits.

use crate::error::{Error, Result};
use crate::gaussian::{
    partial_transpose, physicality_check, purity_defect, reduce_modes, symplectic_spectrum,
    CovarianceMatrix, ModePartition,
};

/// Symplectic eigenvalues within this distance above 1 contribute exactly
/// zero entropy (the x log x -> 0 limit).
const UNIT_EIGENVALUE_TOL: f64 = 1e-12;

/// What a scalar result measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    EntropyBits,
    LogNegativityBits,
    Fidelity,
    Energy,
    EntropyBoundBits,
}

/// A labelled scalar measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureResult {
    pub value: f64,
    pub kind: MeasureKind,
}

fn log2(x: f64) -> f64 {
    x.log2()
}

/// Entropy contribution of one symplectic eigenvalue, in bits.
fn entropy_term(mu: f64) -> f64 {
    if mu <= 1.0 + UNIT_EIGENVALUE_TOL {
        return 0.0;
    }
    let up = (mu + 1.0) / 2.0;
    let dn = (mu - 1.0) / 2.0;
    up * log2(up) - dn * log2(dn)
}

/// Von Neumann entropy of a reduced Gaussian state, in bits:
/// `sum_i [(mu_i+1)/2 log2((mu_i+1)/2) - (mu_i-1)/2 log2((mu_i-1)/2)]`.
/// For a pure global state this is the entropy of entanglement of the
/// partition that produced the reduction.
pub fn entropy_of_entanglement(gamma_reduced: &CovarianceMatrix) -> Result<f64> {
    if !physicality_check(gamma_reduced) {
        return Err(Error::invalid(
            "entropy of entanglement needs a physical covariance matrix",
        ));
    }
    let spectrum = symplectic_spectrum(gamma_reduced)?;
    Ok(spectrum.iter().map(|&mu| entropy_term(mu)).sum())
}

/// Logarithmic negativity across a bipartition, in bits:
/// `-sum_j log2(min(1, mu~_j))` over the symplectic spectrum of the partial
/// transpose. When the partition covers a strict subset of the modes the
/// state is first reduced to that subset.
pub fn log_negativity(gamma: &CovarianceMatrix, part: &ModePartition) -> Result<f64> {
    if part.max_index() >= gamma.n_modes() {
        return Err(Error::invalid(format!(
            "partition index {} out of range for {} modes",
            part.max_index(),
            gamma.n_modes()
        )));
    }
    if !physicality_check(gamma) {
        return Err(Error::invalid(
            "log-negativity needs a physical covariance matrix",
        ));
    }
    let union = part.union();
    let (state, part) = if union.len() == gamma.n_modes() {
        (gamma.clone(), part.clone())
    } else {
        // Relabel partition indices into the reduced state's mode order.
        let position = |site: usize| union.binary_search(&site).unwrap();
        let a: Vec<usize> = part.side_a().iter().map(|&s| position(s)).collect();
        let b: Vec<usize> = part.side_b().iter().map(|&s| position(s)).collect();
        (reduce_modes(gamma, &union)?, ModePartition::new(a, b)?)
    };
    let pt = partial_transpose(&state, &part)?;
    let spectrum = symplectic_spectrum(&pt)?;
    let n: f64 = spectrum
        .iter()
        .map(|&mu| -log2(mu.min(1.0)))
        .sum();
    // Guard against -0.0 from eigenvalues a hair above 1.
    Ok(n.max(0.0))
}

/// Overlap fidelity between a pure single-mode state and another single-mode
/// state (zero displacements): `F = 2 / sqrt(det(gamma_pure + gamma))`.
pub fn gaussian_fidelity_pure(
    gamma_pure: &CovarianceMatrix,
    gamma: &CovarianceMatrix,
) -> Result<f64> {
    if gamma_pure.n_modes() != 1 || gamma.n_modes() != 1 {
        return Err(Error::invalid(
            "fidelity is defined for single-mode states only",
        ));
    }
    if purity_defect(gamma_pure)? > 1e-8 {
        return Err(Error::invalid("reference state must be pure"));
    }
    let total = gamma_pure.matrix() + gamma.matrix();
    let det = total.determinant();
    if det <= 0.0 {
        return Err(Error::numerical(format!(
            "non-positive determinant {det:.3e} in fidelity"
        )));
    }
    Ok(2.0 / det.sqrt())
}

/// Energy supplied by squeezing the input oscillator to parameter `z`,
/// shifted so coherent states carry zero: `E_T = (z + 1/z)/2 - 1`.
pub fn input_energy(z: f64) -> Result<f64> {
    if z < 1.0 {
        return Err(Error::invalid(format!("z must be >= 1, got {z}")));
    }
    Ok(0.5 * (z + 1.0 / z) - 1.0)
}

/// Largest entropy of entanglement attainable with the input energy budget
/// `E_T(z)`, in bits:
/// `S_max = [ (E_T/2) ln(2/E_T + 1) + ln(E_T/2 + 1) ] / ln 2`, with the
/// `E_T -> 0` limit 0 at `z = 1`.
pub fn max_entropy_bound(z: f64) -> Result<f64> {
    let e_t = input_energy(z)?;
    if e_t <= 0.0 {
        return Ok(0.0);
    }
    Ok((e_t / 2.0 * (2.0 / e_t + 1.0).ln() + (e_t / 2.0 + 1.0).ln()) / std::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{
        single_mode_squeezed_cov, single_mode_thermal_cov, two_mode_squeezed_cov, vacuum_cov,
    };
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    // Frozen from a high-precision evaluation of the closed forms.
    const S_Z10_N2: f64 = 1.152_244_164_766_825_3;
    const S_Z10_N4: f64 = 0.999_386_348_657_333_3;
    const SMAX_Z10: f64 = 2.769_436_942_026_921;
    const F_Z10_N2: f64 = 0.630_097_081_810_575_8;
    const F_SQZ10_VAC: f64 = 0.574_959_574_576_069;

    fn diag2(a: f64, b: f64) -> CovarianceMatrix {
        CovarianceMatrix::new(DMatrix::from_diagonal(&nalgebra::dvector![a, b])).unwrap()
    }

    #[test]
    fn entropy_of_vacuum_is_zero() {
        let v = vacuum_cov(2).unwrap();
        assert_abs_diff_eq!(entropy_of_entanglement(&v).unwrap(), 0.0);
    }

    #[test]
    fn entropy_at_y_output_eigenvalue() {
        // mu_1 = (1/2) sqrt(z + 1/z + 2) at z = 10, carried by diag(5.5, 0.55).
        let g = diag2(5.5, 0.55);
        assert_abs_diff_eq!(entropy_of_entanglement(&g).unwrap(), S_Z10_N2, epsilon = 1e-9);
    }

    #[test]
    fn entropy_at_star4_eigenvalue() {
        let g = diag2(3.25, 0.775);
        assert_abs_diff_eq!(entropy_of_entanglement(&g).unwrap(), S_Z10_N4, epsilon = 1e-9);
    }

    #[test]
    fn entropy_rejects_unphysical() {
        let g = diag2(0.5, 0.5);
        assert!(entropy_of_entanglement(&g).is_err());
    }

    #[test]
    fn log_negativity_of_vacuum_and_tms() {
        let v = vacuum_cov(2).unwrap();
        let part = ModePartition::new(vec![0], vec![1]).unwrap();
        assert_abs_diff_eq!(log_negativity(&v, &part).unwrap(), 0.0, epsilon = 1e-12);

        let g = two_mode_squeezed_cov(10.0).unwrap();
        // -log2(e^{-r}) = r / ln 2 with r = arccosh(10).
        let expected = 10.0f64.acosh() / std::f64::consts::LN_2;
        assert_abs_diff_eq!(log_negativity(&g, &part).unwrap(), expected, epsilon = 1e-9);
    }

    #[test]
    fn log_negativity_reduces_subset_partitions() {
        // TMS on modes (0, 1) of a 4-mode state; partition over (0, 1) only.
        let vac = vacuum_cov(4).unwrap();
        let g = crate::gaussian::embed_excitation(
            &vac,
            &crate::gaussian::InitialExcitation::TwoModeSqueezed {
                z: 10.0,
                sites: (0, 1),
            },
        )
        .unwrap();
        let part = ModePartition::new(vec![0], vec![1]).unwrap();
        let expected = 10.0f64.acosh() / std::f64::consts::LN_2;
        assert_abs_diff_eq!(log_negativity(&g, &part).unwrap(), expected, epsilon = 1e-9);
        // Unentangled pair of the same state.
        let part23 = ModePartition::new(vec![2], vec![3]).unwrap();
        assert_abs_diff_eq!(log_negativity(&g, &part23).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_of_state_with_itself() {
        let g = single_mode_squeezed_cov(7.0).unwrap();
        assert_abs_diff_eq!(gaussian_fidelity_pure(&g, &g).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_squeezed_vs_vacuum() {
        let sq = single_mode_squeezed_cov(10.0).unwrap();
        let vac = vacuum_cov(1).unwrap();
        assert_abs_diff_eq!(
            gaussian_fidelity_pure(&sq, &vac).unwrap(),
            F_SQZ10_VAC,
            epsilon = 1e-12
        );
    }

    #[test]
    fn fidelity_squeezed_vs_y_output() {
        let sq = single_mode_squeezed_cov(10.0).unwrap();
        let out = diag2(5.5, 0.55);
        assert_abs_diff_eq!(
            gaussian_fidelity_pure(&sq, &out).unwrap(),
            F_Z10_N2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn fidelity_input_validation() {
        let sq = single_mode_squeezed_cov(10.0).unwrap();
        let multi = vacuum_cov(2).unwrap();
        assert!(gaussian_fidelity_pure(&sq, &multi).is_err());
        let thermal = single_mode_thermal_cov(5.0).unwrap();
        assert!(gaussian_fidelity_pure(&thermal, &sq).is_err());
    }

    #[test]
    fn input_energy_values() {
        assert_abs_diff_eq!(input_energy(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(input_energy(10.0).unwrap(), 4.05, epsilon = 1e-15);
        assert_abs_diff_eq!(input_energy(2.0).unwrap(), 0.25, epsilon = 1e-15);
        assert!(input_energy(0.9).is_err());
    }

    #[test]
    fn max_entropy_bound_values() {
        assert_abs_diff_eq!(max_entropy_bound(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(max_entropy_bound(10.0).unwrap(), SMAX_Z10, epsilon = 1e-12);
        assert!(max_entropy_bound(0.5).is_err());
    }
}
