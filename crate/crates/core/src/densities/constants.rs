use std::f64::consts::PI;

use serde::Serialize;

/// `Γ(k/2)` for a positive integer `k`, by the recursion from `Γ(1/2)` and `Γ(1)`.
pub fn gamma_half(k: u32) -> f64 {
    assert!(k > 0, "Γ(0) is undefined");
    let mut x = if k % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut j = 2 - k % 2;
    while j < k {
        x *= j as f64 / 2.0;
        j += 2;
    }
    x
}

/// Surface area `ω_d = 2π^{d/2}/Γ(d/2)` of the unit sphere in `R^d`.
pub fn omega(d: u32) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / gamma_half(d)
}

/// Volume `κ_d = π^{d/2}/Γ(1+d/2)` of the unit ball in `R^d`.
pub fn kappa(d: u32) -> f64 {
    PI.powf(d as f64 / 2.0) / gamma_half(d + 2)
}

/// Intensity `γ` of the isotropic hyperplane process that arises as the
/// limit of the rescaled cone profiles.
pub fn intensity_gamma(d: u32) -> f64 {
    gamma_half(d + 1) / (PI.sqrt() * gamma_half(d))
}

/// `c_d = (1/κ_d)(ω_{d+1}/κ_{d-1})^d`, the mean volume of the typical cell
/// at intensity `γ(d)`.
pub fn c_d(d: u32) -> f64 {
    (omega(d + 1) / kappa(d - 1)).powi(d as i32) / kappa(d)
}

pub fn factorial(k: u32) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub d: u32,
    /// `ω_d`
    pub omega: f64,
    /// `ω_{d+1}`
    pub omega_next: f64,
    /// `κ_d`
    pub kappa: f64,
    pub gamma_intensity: f64,
    pub c_d: f64,
}

impl Constants {
    pub fn new(d: u32) -> Self {
        Self {
            d,
            omega: omega(d),
            omega_next: omega(d + 1),
            kappa: kappa(d),
            gamma_intensity: intensity_gamma(d),
            c_d: c_d(d),
        }
    }

    /// Normalizing constant `2/ω_{d+1}` of the Cauchy density in `R^d`.
    pub fn cauchy_norm(&self) -> f64 {
        2.0 / self.omega_next
    }

    /// Relative deviations of the three identities `ω_d = dκ_d`,
    /// `κ_dω_{d+1} = 2^{d+1}π^d/d!` and `2c_d/(d!ω_{d+1}) = 1`.
    pub fn identity_residuals(&self) -> [f64; 3] {
        let d = self.d;
        let a = self.omega / (d as f64 * self.kappa) - 1.0;
        let b = self.kappa * self.omega_next * factorial(d) / (2f64.powi(d as i32 + 1) * PI.powi(d as i32)) - 1.0;
        let c = 2.0 * self.c_d / (factorial(d) * self.omega_next) - 1.0;
        [a, b, c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert!((omega(2) - 2.0 * PI).abs() < 1e-15);
        assert!((omega(3) - 4.0 * PI).abs() < 1e-14);
        assert!((omega(1) - 2.0).abs() < 1e-15);
        assert!((kappa(2) - PI).abs() < 1e-15);
        assert!((kappa(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert_eq!(kappa(0), 1.0);
        assert!((intensity_gamma(2) - 0.5).abs() < 1e-15);
        assert!((intensity_gamma(1) - 1.0 / PI).abs() < 1e-15);
        assert!((c_d(2) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn gamma_matches_known_values() {
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-15);
        assert_eq!(gamma_half(8), 6.0);
    }

    #[test]
    fn identities_hold_up_to_dimension_ten() {
        for d in 1..=10 {
            let c = Constants::new(d);
            for r in c.identity_residuals() {
                assert!(r.abs() < 1e-12, "d={d}: {r}");
            }
            let g = (c.omega / 2.0) * c.cauchy_norm();
            assert!((g - c.gamma_intensity).abs() < 1e-12);
        }
    }
}
