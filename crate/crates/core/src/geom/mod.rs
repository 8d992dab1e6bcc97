//! Geometric primitives: cones on the sphere, Euclidean polytopes, hulls.

pub mod cone;
pub mod hull;
pub mod linalg;
pub mod polytope;
pub mod solid_angle;

pub use cone::{
    contains, extreme_rays, face_counts_spherical, polar_cone, LinearHyperplane, PolyhedralCone, Ray, SignVector,
    UnitVector,
};
pub use polytope::{convex_hull, polar_polytope, Facet, Polytope};
pub use solid_angle::{solid_angle, solid_angle_exact, solid_angle_mc, SolidAngleEstimate};

/// Tolerance for sign and incidence tests on unit vectors.
pub const SIGN_EPS: f64 = 1e-12;

/// Largest hyperplane count for which extreme rays are found by trying
/// every `(D-1)`-subset.
pub const SUBSET_LIMIT: usize = 64;
