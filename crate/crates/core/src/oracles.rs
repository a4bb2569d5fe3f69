//! Closed-form reference results for the engineered structures, implemented
//! independently of the dynamics pipeline so that agreement between the two
//! routes is evidence rather than tautology.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;

fn check_inputs(z: f64, n_arms: usize) -> Result<()> {
    if z < 1.0 {
        return Err(Error::invalid(format!("z must be >= 1, got {z}")));
    }
    if n_arms < 2 {
        return Err(Error::invalid(format!(
            "n_arms must be >= 2, got {n_arms}"
        )));
    }
    Ok(())
}

/// Arm-end covariance at the transmission time of an `N_A`-arm star fed with
/// a squeezed input: `gamma_A = [diag(z, 1/z) + (N_A - 1) I] / N_A`.
/// Reduces to `(gamma_1 + I)/2` for the y-shape.
pub fn star_output_cov(z: f64, n_arms: usize) -> Result<CovarianceMatrix> {
    check_inputs(z, n_arms)?;
    let na = n_arms as f64;
    let qq = (z + na - 1.0) / na;
    let pp = (1.0 / z + na - 1.0) / na;
    CovarianceMatrix::new(DMatrix::from_diagonal(&nalgebra::dvector![qq, pp]))
}

/// Positive symplectic eigenvalue of the star arm-end state:
/// `mu_1 = (1/N_A) sqrt((z + N_A - 1)(1/z + N_A - 1))`.
pub fn star_mu1(z: f64, n_arms: usize) -> Result<f64> {
    check_inputs(z, n_arms)?;
    let na = n_arms as f64;
    Ok(((z + na - 1.0) * (1.0 / z + na - 1.0)).sqrt() / na)
}

/// Cloning fidelity between the squeezed input and one arm-end copy:
/// `F = 2 N_A / sqrt((N_A^2 - 1)(z + 1/z) + 2 N_A^2 + 2)`.
pub fn star_fidelity(z: f64, n_arms: usize) -> Result<f64> {
    check_inputs(z, n_arms)?;
    let na = n_arms as f64;
    Ok(2.0 * na / ((na * na - 1.0) * (z + 1.0 / z) + 2.0 * na * na + 2.0).sqrt())
}

/// Image of the two-mode squeezed input under the two-arm decoupling
/// transform: a product of two oppositely squeezed single modes,
/// `diag(e^r, e^{-r}) (+) diag(e^{-r}, e^r)` with `e^r = z + sqrt(z^2 - 1)`.
pub fn tms_split_cov(z: f64) -> Result<CovarianceMatrix> {
    if z < 1.0 {
        return Err(Error::invalid(format!("z must be >= 1, got {z}")));
    }
    let e_r = z + (z * z - 1.0).sqrt();
    let e_mr = 1.0 / e_r;
    // qqpp ordering for modes (sym, anti): (q_s, q_a, p_s, p_a).
    CovarianceMatrix::new(DMatrix::from_diagonal(&nalgebra::dvector![
        e_r, e_mr, e_mr, e_r
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{symplectic_spectrum, ModePartition};
    use crate::measures::{entropy_of_entanglement, gaussian_fidelity_pure, log_negativity};
    use approx::assert_abs_diff_eq;

    const MU1_Z10_N2: f64 = 1.739_252_713_092_608_6;
    const MU1_Z10_N4: f64 = 1.587_057_024_810_387_8;
    const F_Z10_N2: f64 = 0.630_097_081_810_575_8;
    const F_Z10_LARGE: f64 = 0.574_959_576_500_520_4;
    const EXP_R_Z10: f64 = 19.949_874_371_066_2;
    const EXP_NEG_R_Z10: f64 = 0.050_125_628_933_800_45;

    #[test]
    fn star_output_special_cases() {
        let g = star_output_cov(10.0, 2).unwrap();
        assert_abs_diff_eq!(g.qq(0, 0), 5.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g.pp(0, 0), 0.55, epsilon = 1e-15);
        let g = star_output_cov(1.0, 7).unwrap();
        assert_abs_diff_eq!(g.qq(0, 0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.pp(0, 0), 1.0, epsilon = 1e-15);
        let g = star_output_cov(10.0, 4).unwrap();
        assert_abs_diff_eq!(g.qq(0, 0), 3.25, epsilon = 1e-15);
        assert_abs_diff_eq!(g.pp(0, 0), 0.775, epsilon = 1e-15);
        assert!(star_output_cov(10.0, 1).is_err());
    }

    #[test]
    fn star_mu1_values() {
        assert_abs_diff_eq!(star_mu1(10.0, 2).unwrap(), MU1_Z10_N2, epsilon = 1e-14);
        assert_abs_diff_eq!(star_mu1(1.0, 5).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(star_mu1(10.0, 4).unwrap(), MU1_Z10_N4, epsilon = 1e-14);
        assert!(star_mu1(0.5, 2).is_err());
    }

    #[test]
    fn star_fidelity_values() {
        assert_abs_diff_eq!(star_fidelity(10.0, 2).unwrap(), F_Z10_N2, epsilon = 1e-14);
        assert_abs_diff_eq!(star_fidelity(1.0, 9).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            star_fidelity(10.0, 1_000_000).unwrap(),
            2.0 / 12.1f64.sqrt(),
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            star_fidelity(10.0, 10_000).unwrap(),
            F_Z10_LARGE,
            epsilon = 1e-12
        );
    }

    #[test]
    fn tms_split_values() {
        let g = tms_split_cov(1.0).unwrap();
        assert!(g.max_norm_diff(&crate::gaussian::vacuum_cov(2).unwrap()) < 1e-15);
        let g = tms_split_cov(10.0).unwrap();
        assert_abs_diff_eq!(g.qq(0, 0), EXP_R_Z10, epsilon = 1e-12);
        assert_abs_diff_eq!(g.qq(1, 1), EXP_NEG_R_Z10, epsilon = 1e-14);
        assert_abs_diff_eq!(g.pp(0, 0), EXP_NEG_R_Z10, epsilon = 1e-14);
        assert_abs_diff_eq!(g.pp(1, 1), EXP_R_Z10, epsilon = 1e-12);
        // Product state: no entanglement across the transformed pair.
        let part = ModePartition::new(vec![0], vec![1]).unwrap();
        assert_abs_diff_eq!(log_negativity(&g, &part).unwrap(), 0.0, epsilon = 1e-10);
        assert!(tms_split_cov(0.3).is_err());
    }

    #[test]
    fn closed_form_identities_on_z_grid() {
        // y-shape reductions of the N_A-arm forms, checked on 50 z points.
        for k in 0..50 {
            let z = 1.0 + 99.0 * k as f64 / 49.0;
            let mu = star_mu1(z, 2).unwrap();
            assert_abs_diff_eq!(
                mu,
                0.5 * (z + 1.0 / z + 2.0).sqrt(),
                epsilon = 1e-12
            );
            let f = star_fidelity(z, 2).unwrap();
            assert_abs_diff_eq!(
                f,
                4.0 / (3.0 * z + 3.0 / z + 10.0).sqrt(),
                epsilon = 1e-12
            );
            let g = star_output_cov(z, 2).unwrap();
            assert_abs_diff_eq!(g.qq(0, 0), (z + 1.0) / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(g.pp(0, 0), (1.0 / z + 1.0) / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn output_cov_and_mu1_are_consistent() {
        for &z in &[1.0, 2.0, 10.0, 50.0] {
            for n_arms in 2..=6 {
                let g = star_output_cov(z, n_arms).unwrap();
                let spec = symplectic_spectrum(&g).unwrap();
                assert_abs_diff_eq!(spec[0], star_mu1(z, n_arms).unwrap(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn entropy_decreases_with_arms() {
        let mut last = f64::INFINITY;
        for n_arms in 2..=10 {
            let s =
                entropy_of_entanglement(&star_output_cov(10.0, n_arms).unwrap()).unwrap();
            assert!(s < last, "entropy not decreasing at n_arms = {n_arms}");
            last = s;
        }
    }

    #[test]
    fn fidelity_decreases_with_arms() {
        let mut last = f64::INFINITY;
        for n_arms in 2..=10 {
            let f = star_fidelity(10.0, n_arms).unwrap();
            assert!(f < last, "fidelity not decreasing at n_arms = {n_arms}");
            last = f;
        }
    }

    #[test]
    fn fidelity_routes_agree() {
        // Eq-route: closed form. Matrix route: 2/sqrt(det(gamma_1 + gamma_A)).
        let sq = crate::gaussian::single_mode_squeezed_cov(10.0).unwrap();
        for n_arms in 2..=8 {
            let direct = gaussian_fidelity_pure(&sq, &star_output_cov(10.0, n_arms).unwrap())
                .unwrap();
            assert_abs_diff_eq!(
                direct,
                star_fidelity(10.0, n_arms).unwrap(),
                epsilon = 1e-12
            );
        }
    }
}
