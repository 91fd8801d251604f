use std::f64::consts::PI;

use proptest::prelude::*;
use rand::Rng;

use super::*;
use crate::mesh::{circle_mesh, sphere_mesh};
use crate::sampling::{box_point, rng, sphere_point};

const TOL: f64 = 1e-9;

fn v(c: &[f64]) -> Vector {
    Vector::new(c)
}

fn cube() -> Polytope {
    let mut pts = Vec::new();
    for x in [-1.0, 1.0] {
        for y in [-1.0, 1.0] {
            for z in [-1.0, 1.0] {
                pts.push(v(&[x, y, z]));
            }
        }
    }
    convex_hull(&pts, 3, TOL).unwrap()
}

fn axis_halfspaces(dim: usize, offset: f64) -> Vec<HalfSpace> {
    (0..dim)
        .flat_map(|i| {
            [1.0, -1.0].map(|s| {
                HalfSpace::new(
                    UnitVector::new_unchecked(Vector::basis(dim, i).scale(s)),
                    offset,
                )
                .unwrap()
            })
        })
        .collect()
}

fn uniform_halfspaces(dirs: &[UnitVector], offset: f64) -> Vec<HalfSpace> {
    dirs.iter()
        .map(|d| HalfSpace::new(*d, offset).unwrap())
        .collect()
}

/// Independent membership oracle: is `p` a convex combination of `pts`?
/// Brute force over triangles (2D) or tetrahedra (3D) of the vertex set.
fn in_hull_brute(pts: &[Vector], p: &Vector, tol: f64) -> bool {
    let n = pts.len();
    if p.dim() == 2 {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (pts[i], pts[j], pts[k]);
                    let area = (b - a).perp_dot(&(c - a));
                    if area.abs() < 1e-12 {
                        continue;
                    }
                    let l1 = (b - *p).perp_dot(&(c - *p)) / area;
                    let l2 = (c - *p).perp_dot(&(a - *p)) / area;
                    let l3 = 1.0 - l1 - l2;
                    if l1 >= -tol && l2 >= -tol && l3 >= -tol {
                        return true;
                    }
                }
            }
        }
        false
    } else {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let (a, b, c, d) = (pts[i], pts[j], pts[k], pts[l]);
                        let vol = (b - a).cross(&(c - a)).dot(&(d - a));
                        if vol.abs() < 1e-12 {
                            continue;
                        }
                        let q = *p - a;
                        let l1 = q.cross(&(c - a)).dot(&(d - a)) / vol;
                        let l2 = (b - a).cross(&q).dot(&(d - a)) / vol;
                        let l3 = (b - a).cross(&(c - a)).dot(&q) / vol;
                        let l0 = 1.0 - l1 - l2 - l3;
                        if [l0, l1, l2, l3].iter().all(|&x| x >= -tol) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

#[test]
fn triangle_with_interior_point() {
    let pts = [
        v(&[0.0, 0.0]),
        v(&[1.0, 0.0]),
        v(&[0.0, 1.0]),
        v(&[0.2, 0.2]),
    ];
    let t = convex_hull(&pts, 2, TOL).unwrap();
    assert_eq!(t.vertices().len(), 3);
    assert_eq!(t.facets().len(), 3);
    assert!(!t.vertices().contains(&pts[3]));
    assert!(t.contains(&pts[3], 0.0));
}

#[test]
fn cube_corners_give_six_quads() {
    let c = cube();
    assert_eq!(c.vertices().len(), 8);
    assert_eq!(c.facets().len(), 6);
    assert_eq!(c.edges().len(), 12);
    assert!(c.facets().iter().all(|f| f.ring.len() == 4));
    assert!(c.adjacency().iter().all(|a| a.len() == 4));
    assert!(c.origin_interior());
}

#[test]
fn points_on_circle_are_all_extreme() {
    let mut r = rng(11);
    let pts: Vec<Vector> = (0..100)
        .map(|_| Vector::from_angle(r.random_range(0.0..2.0 * PI)))
        .collect();
    let h = convex_hull(&pts, 2, TOL).unwrap();
    assert_eq!(h.vertices().len(), 100);
    // Brute-force check: no input point lies in the hull of the others.
    for i in 0..pts.len() {
        let others: Vec<Vector> = pts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| *p)
            .collect();
        let h = convex_hull(&others, 2, TOL).unwrap();
        assert!(!h.contains(&pts[i], 0.0));
    }
}

#[test]
fn degenerate_input_names_rank() {
    let line = [v(&[0.0, 0.0]), v(&[1.0, 1.0]), v(&[2.0, 2.0])];
    assert_eq!(
        convex_hull(&line, 2, TOL),
        Err(Error::Degenerate {
            rank: 1,
            required: 2
        })
    );
    let flat = [
        v(&[0.0, 0.0, 0.0]),
        v(&[1.0, 0.0, 0.0]),
        v(&[0.0, 1.0, 0.0]),
        v(&[1.0, 1.0, 0.0]),
    ];
    assert_eq!(
        convex_hull(&flat, 3, TOL),
        Err(Error::Degenerate {
            rank: 2,
            required: 3
        })
    );
    let same = [v(&[1.0, 1.0, 1.0]); 5];
    assert_eq!(
        convex_hull(&same, 3, TOL),
        Err(Error::Degenerate {
            rank: 0,
            required: 3
        })
    );
}

#[test]
fn sphere_points_hull_has_valid_incidences() {
    let mut r = rng(5);
    let pts: Vec<Vector> = (0..500).map(|_| *sphere_point(&mut r, 3)).collect();
    let h = convex_hull(&pts, 3, TOL).unwrap();
    assert_eq!(h.vertices().len(), 500);
    let (v_, e, f) = (h.vertices().len(), h.edges().len(), h.facets().len());
    assert_eq!(v_ + f, e + 2);
    assert!(h.max_inequality_violation() <= TOL);
    for f in h.facets() {
        for &i in &f.ring {
            assert!((f.normal.dot(&h.vertices()[i]) - f.offset).abs() <= TOL);
        }
    }
}

#[test]
fn square_from_four_halfspaces() {
    let sq = halfspace_intersection(&axis_halfspaces(2, 1.0), 2, TOL).unwrap();
    assert_eq!(sq.vertices().len(), 4);
    for p in sq.vertices() {
        assert!((p[0].abs() - 1.0).abs() < 1e-12 && (p[1].abs() - 1.0).abs() < 1e-12);
    }
    let c = halfspace_intersection(&axis_halfspaces(3, 1.0), 3, TOL).unwrap();
    assert_eq!(c.vertices().len(), 8);
    assert_eq!(c.facets().len(), 6);
    assert!(hausdorff_distance(&c, &cube()) < 1e-12);
}

#[test]
fn regular_polygon_circumradius() {
    let dirs = circle_mesh(64).unwrap();
    let p = halfspace_intersection(&uniform_halfspaces(&dirs, 1.0), 2, TOL).unwrap();
    assert_eq!(p.vertices().len(), 64);
    let expect = 1.0 / (PI / 64.0).cos();
    for x in p.vertices() {
        assert!((x.norm() - expect).abs() < 1e-12);
        for d in &dirs {
            assert!(d.dot(x) <= 1.0 + TOL);
        }
    }
}

#[test]
fn unbounded_intersection_has_witness() {
    let hs: Vec<HalfSpace> = [0.0, PI / 2.0, PI / 4.0]
        .iter()
        .map(|&a| HalfSpace::new(UnitVector::from_angle(a), 1.0).unwrap())
        .collect();
    let Err(Error::Unbounded { witness }) = halfspace_intersection(&hs, 2, TOL) else {
        panic!("expected unbounded");
    };
    let w = v(&witness);
    assert!(w.norm() > 0.5);
    for h in &hs {
        assert!(h.normal.dot(&w) <= 1e-12);
    }

    let one = [HalfSpace::new(UnitVector::basis(3, 2), 1.0).unwrap()];
    let Err(Error::Unbounded { witness }) = halfspace_intersection(&one, 3, TOL) else {
        panic!("expected unbounded");
    };
    assert!(v(&witness).dot(&UnitVector::basis(3, 2)).abs() < 1e-12);
}

#[test]
fn near_parallel_halfspaces_keep_the_tighter() {
    let mut hs = axis_halfspaces(2, 1.0);
    let tilted = UnitVector::from_angle(1e-12);
    hs.push(HalfSpace::new(tilted, 0.5).unwrap());
    let p = halfspace_intersection(&hs, 2, TOL).unwrap();
    assert_eq!(p.facets().len(), 4);
    assert!((p.support(&UnitVector::basis(2, 0)) - 0.5).abs() < 1e-9);
}

#[test]
fn nonpositive_offsets_are_rejected() {
    assert!(HalfSpace::new(UnitVector::basis(2, 0), 0.0).is_err());
    assert!(HalfSpace::new(UnitVector::basis(2, 0), -1.0).is_err());
}

#[test]
fn support_and_radial_on_cube() {
    let c = cube();
    let diag = UnitVector::from_slice(&[1.0, 1.0, 1.0]).unwrap();
    assert!((c.support(&UnitVector::basis(3, 0)) - 1.0).abs() < 1e-12);
    assert!((c.support(&diag) - 3f64.sqrt()).abs() < 1e-12);
    assert!((c.radial(&diag).unwrap() - 3f64.sqrt()).abs() < 1e-12);
    assert!((c.radial(&UnitVector::basis(3, 0)).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn radial_of_polygon_at_mesh_normals() {
    let dirs = circle_mesh(64).unwrap();
    let p = halfspace_intersection(&uniform_halfspaces(&dirs, 1.0), 2, TOL).unwrap();
    for d in &dirs {
        assert!((p.radial(d).unwrap() - 1.0).abs() <= TOL);
    }
}

#[test]
fn radial_requires_interior_origin() {
    let pts = [v(&[1.0, 0.0]), v(&[2.0, 0.0]), v(&[1.0, 1.0])];
    let t = convex_hull(&pts, 2, TOL).unwrap();
    assert!(!t.origin_interior());
    assert_eq!(
        t.radial(&UnitVector::basis(2, 0)),
        Err(Error::OriginNotInterior)
    );
}

#[test]
fn containment_semantics() {
    let c = cube();
    assert!(c.contains(&v(&[0.0, 0.0, 0.0]), TOL));
    assert!(!c.contains(&v(&[1.1, 0.0, 0.0]), TOL));
    assert!(c.contains(&v(&[1.0 + TOL / 2.0, 0.0, 0.0]), TOL));
}

#[test]
fn containment_matches_brute_force() {
    let mut r = rng(19);
    for dim in [2, 3] {
        let pts: Vec<Vector> = (0..12).map(|_| box_point(&mut r, dim, 1.0)).collect();
        let h = convex_hull(&pts, dim, TOL).unwrap();
        for _ in 0..1000 {
            let x = box_point(&mut r, dim, 1.2);
            // Skip the thin shell where rounding could flip either test.
            if h.facet_margin(&x).abs() < 1e-9 {
                continue;
            }
            assert_eq!(
                h.contains(&x, 0.0),
                in_hull_brute(h.vertices(), &x, 1e-12),
                "{x:?}"
            );
        }
    }
}

#[test]
fn polar_of_cube_is_octahedron() {
    let o = cube().polar_body(TOL).unwrap();
    assert_eq!(o.vertices().len(), 6);
    assert_eq!(o.facets().len(), 8);
    for p in o.vertices() {
        let l1: f64 = p.as_slice().iter().map(|c| c.abs()).sum();
        assert!((l1 - 1.0).abs() < 1e-12);
    }
    // Brute-force: polar inequality y·x ≤ 1 against all cube corners.
    for y in o.vertices() {
        for x in cube().vertices() {
            assert!(y.dot(x) <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn polar_of_square_is_diamond() {
    let sq = halfspace_intersection(&axis_halfspaces(2, 1.0), 2, TOL).unwrap();
    let d = sq.polar_body(TOL).unwrap();
    let mut got: Vec<Vec<f64>> = d
        .vertices()
        .iter()
        .map(|p| p.as_slice().iter().map(|c| c.round()).collect())
        .collect();
    got.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(
        got,
        vec![
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0]
        ]
    );
}

#[test]
fn polar_of_ball_scales_inversely() {
    let dirs = sphere_mesh(2, 3).unwrap();
    let b = halfspace_intersection(&uniform_halfspaces(&dirs, 2.0), 3, TOL).unwrap();
    let p = b.polar_body(TOL).unwrap();
    assert!(hausdorff_to_ball(&p, 0.5) < 0.5 * 1e-2);
    let pp = p.polar_body(TOL).unwrap();
    assert!(hausdorff_distance(&pp, &b) <= 1e-6);
}

#[test]
fn support_radial_duality() {
    let dirs = sphere_mesh(2, 2).unwrap();
    let mut r = rng(23);
    let hs: Vec<HalfSpace> = dirs
        .iter()
        .map(|d| HalfSpace::new(*d, r.random_range(0.8..1.2)).unwrap())
        .collect();
    let w = halfspace_intersection(&hs, 3, TOL).unwrap();
    let polar = w.polar_body(TOL).unwrap();
    for u in &dirs {
        assert!((w.support(u) * polar.radial(u).unwrap() - 1.0).abs() <= 1e-6);
    }
}

#[test]
fn flat_spot_examples() {
    let c = cube();
    let fs = c.flat_spots(1.0);
    assert_eq!(fs.len(), 6);
    for (_, d) in &fs {
        assert!((d - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }
    assert_eq!(c.flat_spots(0.0).len(), 6);

    let disk = halfspace_intersection(&uniform_halfspaces(&circle_mesh(256).unwrap(), 1.0), 2, TOL)
        .unwrap();
    assert!(disk.flat_spots(0.1).is_empty());
    assert_eq!(disk.flat_spots(0.0).len(), 256);
}

#[test]
fn hausdorff_examples() {
    let sq = halfspace_intersection(&axis_halfspaces(2, 1.0), 2, TOL).unwrap();
    let big = sq.scaled(1.5);
    assert!(hausdorff_distance(&sq, &sq) == 0.0);
    assert!((hausdorff_distance(&sq, &big) - 0.5 * 2f64.sqrt()).abs() < 1e-12);
    assert!((hausdorff_distance(&big, &sq) - 0.5 * 2f64.sqrt()).abs() < 1e-12);

    let tri = [v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])];
    let mut more = tri.to_vec();
    more.push(v(&[0.25, 0.25]));
    let a = convex_hull(&tri, 2, TOL).unwrap();
    let b = convex_hull(&more, 2, TOL).unwrap();
    assert_eq!(hausdorff_distance(&a, &b), 0.0);
}

#[test]
fn hausdorff_matches_farthest_point_brute_force() {
    let mut r = rng(29);
    let a: Vec<Vector> = (0..15).map(|_| box_point(&mut r, 3, 1.0)).collect();
    let b: Vec<Vector> = (0..15).map(|_| box_point(&mut r, 3, 1.0)).collect();
    let (pa, pb) = (
        convex_hull(&a, 3, TOL).unwrap(),
        convex_hull(&b, 3, TOL).unwrap(),
    );
    let h = hausdorff_distance(&pa, &pb);
    // Support discrepancy over a dense mesh approaches the metric from below.
    let dirs = sphere_mesh(2, 5).unwrap();
    let lower = support_discrepancy(&pa, &pb, &dirs);
    assert!(lower <= h + 1e-12);
    assert!(h - lower < 0.05 * h.max(1e-3));
}

#[test]
fn scaled_and_reflected() {
    let c = cube().scaled(2.0);
    assert!((c.support(&UnitVector::basis(3, 1)) - 2.0).abs() < 1e-12);
    let pts = [v(&[-1.0, -1.0]), v(&[2.0, -1.0]), v(&[-1.0, 3.0])];
    let t = convex_hull(&pts, 2, TOL).unwrap();
    let r = t.reflected();
    let u = UnitVector::from_angle(0.3);
    assert!((r.support(&u) - t.support(&-u)).abs() < 1e-12);
    assert!(r.max_inequality_violation() <= 1e-12);
}

#[test]
fn output_is_canonical() {
    let mut r = rng(31);
    let mut pts: Vec<Vector> = (0..200).map(|_| *sphere_point(&mut r, 3)).collect();
    let a = convex_hull(&pts, 3, TOL).unwrap();
    pts.reverse();
    let b = convex_hull(&pts, 3, TOL).unwrap();
    assert_eq!(a.vertices(), b.vertices());
    assert_eq!(a.facets().len(), b.facets().len());
    for (fa, fb) in a.facets().iter().zip(b.facets()) {
        assert_eq!(fa.ring, fb.ring);
    }
}

fn point_strategy(dim: usize) -> impl Strategy<Value = Vec<Vector>> {
    prop::collection::vec(prop::collection::vec(-10.0f64..10.0, dim), dim + 1..40)
        .prop_map(|rows| rows.iter().map(|r| Vector::new(r)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radial_walk_matches_facet_scan(seed in 0u64..100_000, dim in 2usize..=3) {
        let mut r = rng(seed);
        let pts: Vec<Vector> = (0..300)
            .map(|_| sphere_point(&mut r, dim).scale(r.random_range(0.8..1.2)))
            .collect();
        let w = convex_hull(&pts, dim, 1e-9).unwrap();
        prop_assume!(w.facets().len() > 64);
        for _ in 0..50 {
            let u = sphere_point(&mut r, dim);
            let scan = w
                .facets()
                .iter()
                .filter(|f| f.normal.dot(&u) > 0.0)
                .map(|f| f.offset / f.normal.dot(&u))
                .fold(f64::INFINITY, f64::min);
            prop_assert!((w.radial(&u).unwrap() - scan).abs() <= 1e-12 * scan);
        }
    }

    #[test]
    fn hull_contains_input_and_is_idempotent(pts in point_strategy(3)) {
        let Ok(h) = convex_hull(&pts, 3, TOL) else { return Ok(()); };
        for p in &pts {
            prop_assert!(h.contains(p, 1e-8));
        }
        prop_assert!(h.max_inequality_violation() <= 1e-8);
        let again = convex_hull(h.vertices(), 3, TOL).unwrap();
        prop_assert_eq!(again.vertices(), h.vertices());
        prop_assert_eq!(again.facets().len(), h.facets().len());
        prop_assert_eq!(h.vertices().len() + h.facets().len(), h.edges().len() + 2);
    }

    #[test]
    fn planar_hull_contains_input(pts in point_strategy(2)) {
        let Ok(h) = convex_hull(&pts, 2, TOL) else { return Ok(()); };
        for p in &pts {
            prop_assert!(h.contains(p, 1e-8));
        }
        prop_assert_eq!(h.vertices().len(), h.facets().len());
    }

    #[test]
    fn intersection_vertices_satisfy_every_halfspace(
        offsets in prop::collection::vec(0.5f64..2.0, 42)
    ) {
        let dirs = sphere_mesh(2, 1).unwrap();
        let hs: Vec<HalfSpace> = dirs.iter().zip(&offsets).map(|(d, &c)| HalfSpace::new(*d, c).unwrap()).collect();
        let w = halfspace_intersection(&hs, 3, TOL).unwrap();
        for x in w.vertices() {
            for h in &hs {
                prop_assert!(h.contains(x, TOL));
            }
        }
        // Every input half-space is active or redundant.
        for h in &hs {
            let active = w.vertices().iter().any(|x| (h.normal.dot(x) - h.offset()).abs() <= 1e-8);
            let redundant = w.support(&h.normal) < h.offset() - 1e-8;
            prop_assert!(active || redundant);
        }
    }

    #[test]
    fn double_polar_round_trip(pts in point_strategy(3)) {
        let shifted: Vec<Vector> = pts.to_vec();
        let Ok(h) = convex_hull(&shifted, 3, TOL) else { return Ok(()); };
        prop_assume!(h.origin_interior() && h.min_facet_offset() > 0.1);
        let pp = h.polar_body(TOL).unwrap().polar_body(TOL).unwrap();
        prop_assert!(hausdorff_distance(&pp, &h) <= 1e-6);
    }
}
