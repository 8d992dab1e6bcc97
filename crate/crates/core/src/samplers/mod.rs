//! Random generators: sphere and Cauchy points, the random cones, uniform
//! points in spherical cells and the Poisson process whose hull is the
//! limit of rescaled Cauchy hulls.

pub mod cell_uniform;
pub mod cones;
pub mod points;
pub mod rng;

pub use cell_uniform::{sample_uniform_in_cell, sample_uniform_in_cell_by_cap};
pub use cones::{
    cover_efron_trial, sample_cover_efron, sample_hyperplanes, sample_r_n, sample_s_minus_e, sample_schlaefli_cone,
    uniform_cell_by_corners, uniform_cell_by_enumeration, ConeKind, ConeSample,
};
pub use points::{sample_cauchy_point, sample_half_sphere, sample_poisson_pi, sample_uniform_sphere, PiSample};
pub use rng::RngStream;
