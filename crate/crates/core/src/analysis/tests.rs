use std::f64::consts::PI;

use super::*;
use crate::geom::{UnitVector, Vector};
use crate::hull::Polytope;
use crate::sampling::rng;
use crate::wulff::convex_integrand_at;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn cfg() -> AnalysisConfig {
    AnalysisConfig::default()
}

fn cube() -> GammaField {
    GammaField::cube_support(&[1.0, 1.0, 1.0]).unwrap()
}

fn ellipse() -> GammaField {
    GammaField::ellipsoid(&[2.0, 1.0]).unwrap()
}

fn integrands(gamma: &GammaField, levels: &[usize]) -> Vec<IntegrandSamples> {
    levels
        .iter()
        .map(|&l| convex_integrand_at(&wulff_shape(gamma, l, &tol()).unwrap(), l, &tol()).unwrap())
        .collect()
}

fn bodies(gamma: &GammaField, levels: &[usize]) -> (Vec<Polytope>, Vec<MeshKind>) {
    let w = levels
        .iter()
        .map(|&l| wulff_shape(gamma, l, &tol()).unwrap())
        .collect();
    (w, levels.iter().map(|&l| mesh_kind(gamma.n(), l)).collect())
}

#[test]
fn constant_field_has_no_kinks() {
    let g = GammaField::constant(1, 1.0).unwrap();
    let r = c1_report(&integrands(&g, &[128, 256, 512]), 1e-6, &cfg()).unwrap();
    assert_eq!(r.detection, Detection::Absent);
    assert!(r.max_gap.iter().all(|&j| j < 1e-6), "{:?}", r.max_gap);
}

#[test]
fn lens_input_kinks_at_vertical_directions() {
    let levels = [128, 256, 512];
    let samples: Vec<_> = levels
        .iter()
        .map(|&l| samples_of(&GammaField::lens(), l).unwrap())
        .collect();
    let r = c1_report(&samples, 1e-6, &cfg()).unwrap();
    assert_eq!(r.detection, Detection::Present);
    let peaks = r.cluster_peaks(0.2);
    assert_eq!(peaks.len(), 2);
    for p in &peaks {
        assert!(
            (p.direction.angle().abs() - PI / 2.0).abs() < 0.1,
            "{}",
            p.direction.angle()
        );
        // The slope of ∓0.5 sin θ flips by one across ±π/2.
        assert!((p.gaps.last().unwrap() - 1.0).abs() < 0.05, "{:?}", p.gaps);
    }
    for k in &r.kinks {
        assert!(k.direction[0].abs() < 0.1);
    }
}

#[test]
fn cube_integrand_kinks_on_coordinate_circles() {
    let r = c1_report(&integrands(&cube(), &[3, 4, 5]), 1e-6, &cfg()).unwrap();
    assert_eq!(r.detection, Detection::Present);
    let spacing = MeshKind::Icosphere { level: 3 }.spacing().unwrap();
    let mut seen = [false; 3];
    for k in &r.kinks {
        let (axis, dist) = (0..3)
            .map(|i| (i, k.direction[i].abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!(dist < 2.0 * spacing, "{k:?}");
        seen[axis] = true;
    }
    assert_eq!(seen, [true; 3]);
    // The gradient of |x| + |y| + |z| jumps by 2 across a coordinate plane,
    // and by up to 2√2 where two of the planes cross.
    for k in &r.kinks {
        let g = k.gaps.last().unwrap();
        assert!(*g > 1.5 && *g < 2.0 * 2f64.sqrt() * 1.25, "{g}");
    }
}

#[test]
fn mismatched_meshes_rejected() {
    let g = GammaField::constant(1, 1.0).unwrap();
    let mut s = integrands(&g, &[64, 128]);
    assert!(c1_report(&s[..1], 1e-6, &cfg()).is_err());
    s.swap(0, 1);
    assert!(matches!(
        c1_report(&s, 1e-6, &cfg()),
        Err(Error::MeshMismatch(_))
    ));
    let mut bad = integrands(&g, &[64, 128]);
    bad[0].mesh = MeshKind::Circle { count: 65 };
    assert!(matches!(
        c1_report(&bad, 1e-6, &cfg()),
        Err(Error::MeshMismatch(_))
    ));
    let mixed = vec![
        integrands(&g, &[64]).remove(0),
        integrands(&cube(), &[2]).remove(0),
    ];
    assert!(c1_report(&mixed, 1e-6, &cfg()).is_err());
}

#[test]
fn disk_has_no_flat_spots() {
    let (w, k) = bodies(&GammaField::constant(1, 1.0).unwrap(), &[128, 256, 512]);
    let r = strict_convexity_report(&w, &k, &cfg()).unwrap();
    assert_eq!(r.detection, Detection::Absent);
    for (d, l) in r.max_diameter.iter().zip([128.0, 256.0, 512.0]) {
        let edge = 2.0 * (PI / l).tan();
        assert!((d - edge).abs() < 1e-9, "{d} vs {edge}");
    }
}

#[test]
fn cube_has_six_flat_faces() {
    let (w, k) = bodies(&cube(), &[3, 4, 5]);
    let r = strict_convexity_report(&w, &k, &cfg()).unwrap();
    assert_eq!(r.detection, Detection::Present);
    assert_eq!(r.flats.len(), 6);
    for f in &r.flats {
        for d in &f.diameters {
            assert!((d - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        }
    }
}

#[test]
fn lens_body_is_strictly_convex() {
    let (w, k) = bodies(&GammaField::lens(), &[128, 256, 512]);
    let r = strict_convexity_report(&w, &k, &cfg()).unwrap();
    assert_eq!(r.detection, Detection::Absent, "{r:?}");
}

#[test]
fn smooth_flat_spots_decay_linearly() {
    for g in [ellipse(), GammaField::ellipsoid(&[2.0, 1.0, 1.0]).unwrap()] {
        let levels = default_levels(g.n());
        let (w, k) = bodies(&g, &levels);
        let r = strict_convexity_report(&w, &k, &cfg()).unwrap();
        for pair in r.max_diameter.windows(2) {
            assert!(pair[1] <= 0.6 * pair[0], "{:?}", r.max_diameter);
        }
    }
}

#[test]
fn crosscheck_presets() {
    let cases: Vec<(GammaField, bool)> = vec![
        (GammaField::constant(1, 1.0).unwrap(), false),
        (GammaField::constant(2, 1.0).unwrap(), false),
        (ellipse(), false),
        (GammaField::ellipsoid(&[2.0, 1.0, 1.0]).unwrap(), false),
        (cube(), true),
        (GammaField::cube_support(&[1.0, 2.0]).unwrap(), true),
        (GammaField::lens(), false),
    ];
    for (g, kinked) in cases {
        let r = regularity_crosscheck(&g, &default_levels(g.n()), &tol(), &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent, "{:?}", g.as_preset());
        assert_eq!(r.integrand_kinks.detection == Detection::Present, kinked);
        assert_eq!(r.flat_spots.detection == Detection::Present, kinked);
    }
}

#[test]
fn lens_is_non_smooth_admissible() {
    let r = regularity_crosscheck(&GammaField::lens(), &[128, 256, 512], &tol(), &cfg()).unwrap();
    assert!(r.non_smooth_admissible);
    assert_eq!(r.input_kinks.detection, Detection::Present);
    assert!(r.integrand_kinks.is_smooth());
    let c = regularity_crosscheck(&cube(), &[3, 4, 5], &tol(), &cfg()).unwrap();
    assert!(!c.non_smooth_admissible);
}

#[test]
fn two_levels_are_inconclusive() {
    let r = regularity_crosscheck(&cube(), &[3, 4], &tol(), &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
}

#[test]
fn random_fields_are_consistent() {
    let mut r = rng(41);
    for n in [1, 2] {
        for _ in 0..2 {
            let smooth = GammaField::random_trig_poly(n, &mut r).unwrap();
            let rep = regularity_crosscheck(&smooth, &default_levels(n), &tol(), &cfg()).unwrap();
            assert_eq!(rep.verdict, Verdict::Consistent, "{:?}", smooth.as_preset());
            assert!(rep.flat_spots.is_strictly_convex());

            let poly = random_polytope_field(n, &mut r, &tol()).unwrap();
            let rep = regularity_crosscheck(&poly, &default_levels(n), &tol(), &cfg()).unwrap();
            assert_eq!(rep.verdict, Verdict::Consistent, "{:?}", poly.as_preset());
            assert_eq!(rep.flat_spots.detection, Detection::Present);
        }
    }
}

#[test]
fn smooth_presets_pass_field_suite() {
    let fields = [
        (
            "constant".to_string(),
            GammaField::constant(1, 1.0).unwrap(),
        ),
        ("ellipse".to_string(), ellipse()),
        (
            "ellipsoid".to_string(),
            GammaField::ellipsoid(&[2.0, 1.0, 1.0]).unwrap(),
        ),
    ];
    let out: Vec<_> = fields
        .iter()
        .map(|(name, g)| {
            smooth_field_suite(
                &[(name.clone(), g.clone())],
                &default_levels(g.n()),
                &tol(),
                &cfg(),
            )
            .unwrap()
        })
        .collect();
    for e in out.iter().flatten() {
        assert!(e.passed, "{e:?}");
    }
}

#[test]
fn pedal_of_sphere_from_centre() {
    let w = wulff_shape(&GammaField::constant(2, 2.0).unwrap(), 3, &tol()).unwrap();
    for p in pedal(&w, &Vector::zeros(3), &tol()).unwrap() {
        assert!((p.point.norm() - 2.0).abs() < 1e-12);
        assert!(p.point.distance(&p.direction.scale(2.0)) < 1e-12);
    }
}

#[test]
fn pedal_of_ellipse_along_major_axis() {
    let w = wulff_shape(&ellipse(), 256, &tol()).unwrap();
    let feet = pedal(&w, &Vector::zeros(2), &tol()).unwrap();
    let e1 = UnitVector::basis(2, 0);
    let foot = feet
        .iter()
        .find(|p| p.direction.distance(&e1) < 1e-12)
        .unwrap();
    assert!(foot.point.distance(&Vector::new(&[2.0, 0.0])) < 1e-12);
    assert!(pedal_integrand_deviation(&w, &tol()).unwrap() < 1e-6);
}

#[test]
fn pedal_feet_are_perpendicular() {
    let w = wulff_shape(&cube(), 2, &tol()).unwrap();
    let p = Vector::new(&[0.2, -0.3, 0.5]);
    for (f, foot) in w.facets().iter().zip(pedal(&w, &p, &tol()).unwrap()) {
        assert!((f.normal.dot(&foot.point) - f.offset).abs() < 1e-12);
        let along = foot.point - p;
        assert!(along.cross(&f.normal).norm() < 1e-12);
    }
    assert!(pedal_integrand_deviation(&w, &tol()).unwrap() < 1e-9);
}

#[test]
fn pedal_rejects_outside_points() {
    let w = wulff_shape(&cube(), 2, &tol()).unwrap();
    assert!(matches!(
        pedal(&w, &Vector::new(&[2.0, 0.0, 0.0]), &tol()),
        Err(Error::PointOutside)
    ));
    assert!(matches!(
        pedal(&w, &Vector::new(&[1.0, 0.0, 0.0]), &tol()),
        Err(Error::PointOutside)
    ));
}
