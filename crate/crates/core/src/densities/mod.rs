//! Explicit densities of the limiting hull laws and the integrals they need.

pub mod constants;
pub mod exterior;
pub mod pc;
pub mod phi;
pub mod quadrature;

pub use constants::Constants;
pub use exterior::{cauchy_exterior_mass, exterior_inverse_power_integral};
pub use pc::{pc_beta_prime, PcMode, Region};
pub use phi::{
    eval_phi, eval_phi_n, l1_distance, l1_terms, limit_density_factor, size_bias_weight, size_bias_weight_from_profile,
    typical_zero_ratio, CoordinateRep, DensityValue, L1Estimate,
};
pub use quadrature::{directional_integral_3d, Integral};
