use conehull::arrangement::{enumerate_cones, schlaefli_count};
use conehull::geom::linalg::{distance, dot, norm};
use conehull::geom::{
    convex_hull, extreme_rays, polar_cone, polar_polytope, solid_angle_exact, LinearHyperplane, Polytope, UnitVector,
};
use proptest::prelude::*;

fn cloud(dim: usize, range: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, dim), range)
}

fn normals(range: std::ops::Range<usize>) -> impl Strategy<Value = Vec<LinearHyperplane>> {
    prop::collection::vec(prop::array::uniform3(-1.0f64..1.0), range)
        .prop_filter("normals away from zero", |v| v.iter().all(|p| norm(p) > 1e-3))
        .prop_map(|v| {
            v.iter()
                .map(|p| LinearHyperplane::new(UnitVector::normalize(p).unwrap()))
                .collect()
        })
}

/// Points of the cube plus a skewed cross-polytope so
/// that the origin is interior.
fn around_origin(dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    cloud(dim, 3..20).prop_map(move |mut pts| {
        let skew = [[0.3, 0.011, 0.007], [0.013, 0.3, 0.005], [0.017, 0.009, 0.3]];
        for row in &skew[..dim] {
            for s in [-1.0, 1.0] {
                pts.push(row[..dim].iter().map(|x| s * x).collect());
            }
        }
        pts
    })
}

fn same_vertex_set(a: &Polytope, b: &Polytope, tol: f64) -> bool {
    a.num_vertices() == b.num_vertices()
        && a.vertices()
            .iter()
            .all(|v| b.vertices().iter().any(|w| distance(v, w) <= tol))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planar_hull_contains_its_input(pts in cloud(2, 3..40)) {
        let Ok(hull) = convex_hull(&pts, 2) else { return Ok(()) };
        for p in &pts {
            prop_assert!(hull.contains(p, 1e-9));
        }
        for v in hull.vertices() {
            prop_assert!(pts.contains(v));
        }
        prop_assert!(hull.volume() > 0.0);
    }

    #[test]
    fn spatial_hull_contains_its_input(pts in cloud(3, 4..40)) {
        let Ok(hull) = convex_hull(&pts, 3) else { return Ok(()) };
        for p in &pts {
            prop_assert!(hull.contains(p, 1e-9));
        }
        let f = hull.f_vector();
        // Euler: v - e + f = 2
        prop_assert_eq!(f[0] + f[2], f[1] + 2);
    }

    #[test]
    fn polar_is_an_involution_in_the_plane(pts in around_origin(2)) {
        let p = convex_hull(&pts, 2).unwrap();
        let back = polar_polytope(&polar_polytope(&p).unwrap()).unwrap();
        prop_assert!(same_vertex_set(&p, &back, 1e-8));
    }

    #[test]
    fn polar_is_an_involution_in_space(pts in around_origin(3)) {
        let p = convex_hull(&pts, 3).unwrap();
        let back = polar_polytope(&polar_polytope(&p).unwrap()).unwrap();
        prop_assert!(same_vertex_set(&p, &back, 1e-8));
    }

    #[test]
    fn polar_vertices_satisfy_every_inequality(pts in around_origin(2)) {
        let p = convex_hull(&pts, 2).unwrap();
        let q = polar_polytope(&p).unwrap();
        for x in p.vertices() {
            for y in q.vertices() {
                prop_assert!(dot(x, y) <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn cell_solid_angles_partition_the_sphere(hs in normals(1..8)) {
        let n = hs.len() as u64;
        let Ok(arr) = enumerate_cones(hs) else { return Ok(()) };
        prop_assert_eq!(arr.cells.len() as u128, schlaefli_count(n, 3));
        let total: f64 = arr.cells.iter().map(|c| solid_angle_exact(c).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-9, "total {}", total);
    }

    #[test]
    fn antipodal_cells_have_equal_angles(hs in normals(3..8)) {
        let Ok(arr) = enumerate_cones(hs) else { return Ok(()) };
        for c in &arr.cells {
            let flipped: Vec<i8> = c.cell().as_slice().iter().map(|s| -s).collect();
            let twin = arr.cells.iter().find(|d| d.cell().as_slice() == flipped.as_slice());
            prop_assert!(twin.is_some());
            let (a, b) = (solid_angle_exact(c).unwrap(), solid_angle_exact(twin.unwrap()).unwrap());
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn flipping_a_normal_keeps_the_tessellation(hs in normals(3..8), which in 0usize..8) {
        let Ok(arr) = enumerate_cones(hs.clone()) else { return Ok(()) };
        let i = which % hs.len();
        let mut flipped = hs;
        flipped[i] = LinearHyperplane::new(flipped[i].normal.negated());
        let other = enumerate_cones(flipped).unwrap();
        prop_assert_eq!(arr.cells.len(), other.cells.len());
        let mut a: Vec<f64> = arr.cells.iter().map(|c| solid_angle_exact(c).unwrap()).collect();
        let mut b: Vec<f64> = other.cells.iter().map(|c| solid_angle_exact(c).unwrap()).collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn double_polar_cone_has_the_same_rays(hs in normals(3..8)) {
        let Ok(arr) = enumerate_cones(hs) else { return Ok(()) };
        for c in &arr.cells {
            let back = polar_cone(&polar_cone(c).unwrap()).unwrap();
            let (r1, r2) = (extreme_rays(c).unwrap(), extreme_rays(&back).unwrap());
            prop_assert_eq!(r1.len(), r2.len());
            for r in &r1 {
                prop_assert!(r2.iter().any(|s| distance(&r.direction, &s.direction) < 1e-9));
            }
        }
    }
}
