//! The full verification battery.
//!
//! Every check runs on its own seeded substream, so results do not depend on
//! scheduling. Checks run in parallel and are reported in a fixed order.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    pedal_integrand_deviation, random_polytope_field, regularity_crosscheck, smooth_field_suite,
    AnalysisConfig, Detection, Verdict,
};
use crate::error::Result;
use crate::geom::{PolarPoint, Tolerance, UnitVector, Vector};
use crate::hull::{hausdorff_distance, hausdorff_to_ball};
use crate::mesh::{mesh_kind, sphere_mesh};
use crate::sampling::{sphere_point, substream, SeededRng, DEFAULT_SEED};
use crate::spherical::{
    double_polar_check, dual_integrand_check, dual_membership_check, dual_oracle_check, dual_wulff,
    inversion_factorization_check, maehara_check, polar_antitone_check, polytope_duality,
    psi_property_check, random_hemispherical, spherical_wulff_route, MembershipReport,
};
use crate::wulff::{
    convex_integrand_at, is_convex_integrand, minimality_check, same_wulff_check, wulff_shape,
    GammaField,
};

pub const SCHEMA: &str = "wulffkit-report/1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub tol: Tolerance,
    pub analysis: AnalysisConfig,
    /// Direction counts on S¹ for the detector battery.
    pub circle_levels: Vec<usize>,
    /// Icosphere levels for the detector battery.
    pub sphere_levels: Vec<usize>,
    /// S¹ direction count and S² level for single-level oracle checks.
    pub oracle_levels: (usize, usize),
    /// Probes per randomized membership instance.
    pub probes: usize,
    /// Randomized instances per spherical-polar check.
    pub instances: usize,
    pub minimality_fields: usize,
    pub smooth_fields: usize,
    pub random_polytopes: usize,
    /// Checks to leave out; they are still listed, as skipped.
    pub skip: Vec<String>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: DEFAULT_SEED,
            tol: Tolerance::default(),
            analysis: AnalysisConfig::default(),
            circle_levels: vec![128, 256, 512],
            sphere_levels: vec![3, 4, 5],
            oracle_levels: (512, 4),
            probes: 10_000,
            instances: 20,
            minimality_fields: 50,
            smooth_fields: 20,
            random_polytopes: 5,
            skip: Vec::new(),
        }
    }
}

impl VerifyConfig {
    fn oracle_level(&self, n: usize) -> usize {
        if n == 1 {
            self.oracle_levels.0
        } else {
            self.oracle_levels.1
        }
    }

    fn levels(&self, n: usize) -> &[usize] {
        if n == 1 {
            &self.circle_levels
        } else {
            &self.sphere_levels
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckVerdict {
    Pass,
    Fail,
    Skipped { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub statement: String,
    pub verdict: CheckVerdict,
    /// Bound applied to the headline quantities.
    pub tolerance: f64,
    pub levels: Vec<usize>,
    pub evidence: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.verdict != CheckVerdict::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: String,
    pub seed: u64,
    pub tolerances: Tolerance,
    pub config: VerifyConfig,
    pub checks: Vec<CheckResult>,
    pub all_pass: bool,
}

/// Evidence accumulator: records named values and whether each one met its
/// bound.
struct Evidence {
    evidence: BTreeMap<String, f64>,
    notes: Vec<String>,
    ok: bool,
}

impl Evidence {
    fn new() -> Self {
        Evidence {
            evidence: BTreeMap::new(),
            notes: Vec::new(),
            ok: true,
        }
    }

    fn put(&mut self, key: impl Into<String>, v: f64) {
        self.evidence.insert(key.into(), v);
    }

    fn at_most(&mut self, key: impl Into<String>, v: f64, bound: f64) {
        let key = key.into();
        if !(v <= bound) {
            self.fail(format!("{key} = {v:e} exceeds {bound:e}"));
        }
        self.put(key, v);
    }

    fn at_least(&mut self, key: impl Into<String>, v: f64, bound: f64) {
        let key = key.into();
        if !(v >= bound) {
            self.fail(format!("{key} = {v:e} is below {bound:e}"));
        }
        self.put(key, v);
    }

    fn flag(&mut self, key: impl Into<String>, v: bool, expected: bool) {
        let key = key.into();
        if v != expected {
            self.fail(format!("{key} is {v}, expected {expected}"));
        }
        self.put(key, if v { 1.0 } else { 0.0 });
    }

    fn membership(&mut self, key: &str, rep: &MembershipReport) {
        self.put(format!("{key}.probes"), rep.probes as f64);
        self.put(format!("{key}.in_band"), rep.in_band as f64);
        self.put(format!("{key}.inside"), rep.inside as f64);
        self.at_most(
            format!("{key}.disagreements"),
            rep.disagreements as f64,
            0.0,
        );
    }

    fn fail(&mut self, note: String) {
        self.ok = false;
        self.notes.push(note);
    }
}

type CheckFn = fn(&VerifyConfig, &mut SeededRng, &mut Evidence) -> Result<()>;

struct Spec {
    name: &'static str,
    statement: &'static str,
    run: CheckFn,
    levels: fn(&VerifyConfig) -> Vec<usize>,
}

fn oracle_levels(c: &VerifyConfig) -> Vec<usize> {
    vec![c.oracle_levels.0, c.oracle_levels.1]
}

fn battery_levels(c: &VerifyConfig) -> Vec<usize> {
    c.circle_levels
        .iter()
        .chain(&c.sphere_levels)
        .copied()
        .collect()
}

fn no_levels(_: &VerifyConfig) -> Vec<usize> {
    Vec::new()
}

fn disk_levels(_: &VerifyConfig) -> Vec<usize> {
    DISK_LEVELS.to_vec()
}

const DISK_LEVELS: [usize; 3] = [64, 128, 256];

const CHECKS: &[Spec] = &[
    Spec {
        name: "integrand_support_oracle",
        statement: "the convex integrand of a Wulff polytope equals its support function",
        run: integrand_support_oracle,
        levels: oracle_levels,
    },
    Spec {
        name: "convex_integrand_test",
        statement: "inverted graphs of integrands lie on their hull boundary; the lens field does not",
        run: convex_integrand_test,
        levels: oracle_levels,
    },
    Spec {
        name: "same_wulff_equivalence",
        statement: "equal hulls of inverted graphs exactly when equal Wulff shapes",
        run: same_wulff_equivalence,
        levels: oracle_levels,
    },
    Spec {
        name: "integrand_idempotence",
        statement: "the convex integrand of a body is an integrand with the same Wulff shape",
        run: integrand_idempotence,
        levels: oracle_levels,
    },
    Spec {
        name: "minimality",
        statement: "the convex integrand never exceeds the field it was built from",
        run: minimality,
        levels: oracle_levels,
    },
    Spec {
        name: "inversion_factorization",
        statement: "inversion equals unprojection, the map psi, and projection in sequence",
        run: inversion_factorization,
        levels: no_levels,
    },
    Spec {
        name: "psi_properties",
        statement: "psi maps to unit vectors orthogonal to the input, in span with the pole, on the upper side, involutively",
        run: psi_properties,
        levels: no_levels,
    },
    Spec {
        name: "spherical_wulff_route",
        statement: "membership through the spherical polar of the psi-image agrees with the half-space kernel",
        run: spherical_route,
        levels: oracle_levels,
    },
    Spec {
        name: "maehara",
        statement: "the polar of a spherical hull is the intersection of the generator hemispheres",
        run: maehara,
        levels: no_levels,
    },
    Spec {
        name: "double_polar",
        statement: "a spherical hull equals its twice-polar set",
        run: double_polar,
        levels: no_levels,
    },
    Spec {
        name: "polar_antitone",
        statement: "polar sets reverse inclusion",
        run: polar_antitone,
        levels: no_levels,
    },
    Spec {
        name: "dual_wulff_oracle",
        statement: "the dual Wulff shape is the reflected polar body and dualizing twice is the identity",
        run: dual_wulff_oracle,
        levels: oracle_levels,
    },
    Spec {
        name: "dual_integrand",
        statement: "the integrand of the dual shape is the inverted radial function of the body",
        run: dual_integrand,
        levels: oracle_levels,
    },
    Spec {
        name: "dual_membership",
        statement: "dual shape membership agrees with the spherical polar of the unprojected vertices",
        run: dual_membership,
        levels: oracle_levels,
    },
    Spec {
        name: "polytope_duality",
        statement: "vertices and facets swap under the dual Wulff shape",
        run: polytope_duality_check,
        levels: no_levels,
    },
    Spec {
        name: "regularity_battery",
        statement: "integrands are smooth exactly when Wulff shapes are strictly convex",
        run: regularity_battery,
        levels: battery_levels,
    },
    Spec {
        name: "smooth_field_consequences",
        statement: "smooth fields give strictly convex non-polytopal shapes with smooth dual integrands",
        run: smooth_field_consequences,
        levels: battery_levels,
    },
    Spec {
        name: "pedal_origin",
        statement: "the pedal from the origin traces the convex integrand",
        run: pedal_origin,
        levels: oracle_levels,
    },
    Spec {
        name: "disk_refinement",
        statement: "disk approximations converge at the polygon rate",
        run: disk_refinement,
        levels: disk_levels,
    },
];

/// Names of all checks, in report order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

pub fn run_verify(cfg: &VerifyConfig) -> VerifyReport {
    let checks: Vec<CheckResult> = CHECKS
        .par_iter()
        .enumerate()
        .map(|(i, spec)| run_one(cfg, i as u64, spec))
        .collect();
    VerifyReport {
        schema: SCHEMA.to_string(),
        seed: cfg.seed,
        tolerances: cfg.tol,
        config: cfg.clone(),
        all_pass: checks.iter().all(CheckResult::passed),
        checks,
    }
}

fn run_one(cfg: &VerifyConfig, index: u64, spec: &Spec) -> CheckResult {
    let mut result = CheckResult {
        name: spec.name.to_string(),
        statement: spec.statement.to_string(),
        verdict: CheckVerdict::Pass,
        tolerance: cfg.tol.report_tol,
        levels: (spec.levels)(cfg),
        evidence: BTreeMap::new(),
        notes: Vec::new(),
    };
    if cfg.skip.iter().any(|s| s == spec.name) {
        result.verdict = CheckVerdict::Skipped {
            reason: "excluded by configuration".into(),
        };
        return result;
    }
    let mut ev = Evidence::new();
    let mut rng = substream(cfg.seed, index);
    if let Err(e) = (spec.run)(cfg, &mut rng, &mut ev) {
        ev.fail(format!("error: {e}"));
    }
    result.verdict = if ev.ok {
        CheckVerdict::Pass
    } else {
        CheckVerdict::Fail
    };
    result.evidence = ev.evidence;
    result.notes = ev.notes;
    result
}

/// The named preset fields used throughout the battery.
pub fn presets() -> Vec<(&'static str, GammaField)> {
    vec![
        ("constant_s1", GammaField::constant(1, 1.0).expect("valid")),
        ("constant_s2", GammaField::constant(2, 1.0).expect("valid")),
        (
            "ellipse",
            GammaField::ellipsoid(&[2.0, 1.0]).expect("valid"),
        ),
        (
            "ellipsoid",
            GammaField::ellipsoid(&[2.0, 1.0, 1.0]).expect("valid"),
        ),
        (
            "cube",
            GammaField::cube_support(&[1.0, 1.0, 1.0]).expect("valid"),
        ),
        ("lens", GammaField::lens()),
    ]
}

fn integrand_support_oracle(cfg: &VerifyConfig, _: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    for (name, g) in presets() {
        let level = cfg.oracle_level(g.n());
        let w = wulff_shape(&g, level, &cfg.tol)?;
        let gw = convex_integrand_at(&w, level, &cfg.tol)?;
        let dev = gw
            .directions
            .iter()
            .zip(&gw.values)
            .map(|(d, v)| (v - w.support(d)).abs())
            .fold(0.0, f64::max);
        l.at_most(format!("{name}.max_deviation"), dev, cfg.tol.report_tol);
    }
    Ok(())
}

fn convex_integrand_test(cfg: &VerifyConfig, _: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    for (name, g) in presets() {
        let t = is_convex_integrand(&g, cfg.oracle_level(g.n()), cfg.tol.report_tol, &cfg.tol)?;
        l.put(format!("{name}.worst_depth"), t.worst.depth);
        l.put(format!("{name}.interior_count"), t.interior_count as f64);
        l.flag(
            format!("{name}.is_integrand"),
            t.is_integrand,
            name != "lens",
        );
        if name == "lens" {
            // The deepest inverted point sits at a kink of the field.
            l.at_most(
                "lens.witness_offset_from_vertical",
                t.worst.direction[0].abs(),
                0.05,
            );
        }
    }
    Ok(())
}

fn same_wulff_equivalence(cfg: &VerifyConfig, _: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    let level = cfg.oracle_levels.0;
    let one = GammaField::constant(1, 1.0)?;
    let two = GammaField::constant(1, 2.0)?;
    let lens = GammaField::lens();
    let lens_integrand =
        convex_integrand_at(&wulff_shape(&lens, level, &cfg.tol)?, level, &cfg.tol)?
            .to_field(&cfg.tol)?;
    for (name, a, b, equal) in [
        ("unit_unit", &one, &one, true),
        ("lens_integrand", &lens, &lens_integrand, true),
        ("unit_double", &one, &two, false),
    ] {
        let r = same_wulff_check(a, b, level, &cfg.tol)?;
        l.put(format!("{name}.hull_distance"), r.hull_distance);
        l.put(format!("{name}.wulff_distance"), r.wulff_distance);
        l.flag(format!("{name}.hulls_equal"), r.hulls_equal, equal);
        l.flag(format!("{name}.wulffs_equal"), r.wulffs_equal, equal);
        l.flag(format!("{name}.inconsistent"), r.inconsistent, false);
    }
    Ok(())
}

fn integrand_idempotence(cfg: &VerifyConfig, _: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    for (name, g) in presets() {
        let level = cfg.oracle_level(g.n());
        let w = wulff_shape(&g, level, &cfg.tol)?;
        let field = convex_integrand_at(&w, level, &cfg.tol)?.to_field(&cfg.tol)?;
        let t = is_convex_integrand(&field, level, cfg.tol.report_tol, &cfg.tol)?;
        l.flag(
            format!("{name}.integrand_is_integrand"),
            t.is_integrand,
            true,
        );
        let again = wulff_shape(&field, level, &cfg.tol)?;
        l.at_most(
            format!("{name}.wulff_distance"),
            hausdorff_distance(&again, &w),
            cfg.tol.report_tol,
        );
    }
    Ok(())
}

fn minimality(cfg: &VerifyConfig, rng: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    for (name, g) in presets() {
        let r = minimality_check(&g, cfg.oracle_level(g.n()), &cfg.tol)?;
        l.at_most(
            format!("{name}.max_violation"),
            r.max_violation,
            cfg.tol.report_tol,
        );
        if name == "lens" {
            let up = UnitVector::basis(2, 1);
            for (side, target) in [("top", up), ("bottom", -up)] {
                let i = r
                    .integrand
                    .directions
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.dot(&target).total_cmp(&b.1.dot(&target)))
                    .map(|(i, _)| i)
                    .unwrap();
                l.at_least(
                    format!("lens.gap_{side}"),
                    r.gamma[i] - r.integrand.values[i],
                    0.1,
                );
            }
        }
    }
    let fields: Vec<GammaField> = (0..cfg.minimality_fields)
        .map(|i| GammaField::random_trig_poly(1 + i % 2, rng))
        .collect::<Result<_>>()?;
    let worst = fields
        .par_iter()
        .map(|g| Ok(minimality_check(g, cfg.oracle_level(g.n()), &cfg.tol)?.max_violation))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    l.put("random.fields", fields.len() as f64);
    if !fields.is_empty() {
        l.at_most("random.max_violation", worst, cfg.tol.report_tol);
    }
    Ok(())
}

fn inversion_factorization(_: &VerifyConfig, rng: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    let samples: Vec<PolarPoint> = (0..1000)
        .map(|i| {
            let d = sphere_point(rng, 2 + i % 2);
            PolarPoint::new(d, rng.random_range(0.1..=10.0))
        })
        .collect::<Result<_>>()?;
    let r = inversion_factorization_check(&samples, 1e-12)?;
    l.put("samples", r.samples as f64);
    l.at_most("max_discrepancy", r.max_discrepancy, 1e-10);
    Ok(())
}

fn psi_properties(_: &VerifyConfig, rng: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    let pts: Vec<UnitVector> = (0..10_000).map(|i| sphere_point(rng, 2 + i % 2)).collect();
    let r = psi_property_check(&pts, 1e-12);
    l.put("points", r.points as f64);
    l.put("skipped", r.skipped as f64);
    l.at_most("orthogonality", r.orthogonality, 1e-12);
    l.at_most("span_residual", r.span_residual, 1e-12);
    l.at_least("min_north", r.min_north, 0.0);
    l.at_most("involution", r.involution, 1e-10);
    Ok(())
}

fn spherical_route(cfg: &VerifyConfig, rng: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    let cases = [
        ("constant_s1", GammaField::constant(1, 1.0)?),
        ("lens", GammaField::lens()),
        ("cube", GammaField::cube_support(&[1.0, 1.0, 1.0])?),
    ];
    for (name, g) in cases {
        let seed = rng.random();
        let r =
            spherical_wulff_route(&g, cfg.oracle_level(g.n()), cfg.probes, &[], seed, &cfg.tol)?;
        l.membership(name, &r);
    }
    Ok(())
}

fn instance_dim(i: usize) -> usize {
    3 + i % 2
}

fn maehara(cfg: &VerifyConfig, rng: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    let inputs: Vec<(Vec<UnitVector>, u64)> = (0..cfg.instances)
        .map(|i| {
            let k = rng.random_range(3..=10);
            (random_hemispherical(rng, instance_dim(i), k), rng.random())
        })
        .collect();
    let reps = inputs
        .par_iter()
        .map(|(pts, seed)| maehara_check(pts, cfg.probes, *seed, &cfg.tol))
        .collect::<Result<Vec<_>>>()?;
    aggregate(l, "instances", &reps);
    Ok(())
}

fn double_polar(cfg: &VerifyConfig, rng: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    let inputs: Vec<(Vec<UnitVector>, u64)> = (0..cfg.instances)
        .map(|i| {
            let k = rng.random_range(3..=10);
            (random_hemispherical(rng, instance_dim(i), k), rng.random())
        })
        .collect();
    let reps = inputs
        .par_iter()
        .map(|(pts, seed)| double_polar_check(pts, cfg.probes, *seed, &cfg.tol))
        .collect::<Result<Vec<_>>>()?;
    aggregate(l, "instances", &reps);
    Ok(())
}

fn polar_antitone(cfg: &VerifyConfig, rng: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    let inputs: Vec<(Vec<UnitVector>, Vec<UnitVector>, u64)> = (0..cfg.instances)
        .map(|i| {
            let k = rng.random_range(4..=10);
            let b = random_hemispherical(rng, instance_dim(i), k);
            let a = b[..k / 2].to_vec();
            (a, b, rng.random())
        })
        .collect();
    let reps = inputs
        .par_iter()
        .map(|(a, b, seed)| polar_antitone_check(a, b, cfg.probes, *seed, &cfg.tol))
        .collect::<Result<Vec<_>>>()?;
    aggregate(l, "instances", &reps);
    Ok(())
}

fn aggregate(l: &mut Evidence, key: &str, reps: &[MembershipReport]) {
    let mut total = MembershipReport::default();
    for r in reps {
        total.merge(r);
    }
    l.put(key, reps.len() as f64);
    l.membership("total", &total);
}

fn dual_wulff_oracle(cfg: &VerifyConfig, _: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    let bound = cfg.tol.report_tol;
    for (name, g) in presets() {
        let w = wulff_shape(&g, cfg.oracle_level(g.n()), &cfg.tol)?;
        let r = dual_oracle_check(&w, &cfg.tol)?;
        l.at_most(
            format!("{name}.reflected_polar_distance"),
            r.oracle_distance,
            bound,
        );
        l.at_most(
            format!("{name}.involution_distance"),
            r.involution_distance,
            bound,
        );
    }

    let cube = wulff_shape(
        &GammaField::cube_support(&[1.0, 1.0, 1.0])?,
        cfg.oracle_levels.1,
        &cfg.tol,
    )?;
    let oct = dual_wulff(&cube, &cfg.tol)?;
    let axes: Vec<Vector> = (0..3)
        .flat_map(|i| [Vector::basis(3, i), -Vector::basis(3, i)])
        .collect();
    let off = oct
        .vertices()
        .iter()
        .map(|v| {
            axes.iter()
                .map(|a| a.distance(v))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let covered = axes
        .iter()
        .all(|a| oct.vertices().iter().any(|v| v.distance(a) <= 1e-9));
    l.at_most("cube.dual_vertex_count", oct.vertices().len() as f64, 6.0);
    l.at_most("cube.dual_vertex_offset", off, 1e-9);
    l.flag("cube.dual_covers_axes", covered, true);

    for n in [1, 2] {
        let level = cfg.oracle_level(n);
        let ball = wulff_shape(&GammaField::constant(n, 2.0)?, level, &cfg.tol)?;
        let d = dual_wulff(&ball, &cfg.tol)?;
        let err = sphere_mesh(n, level)?
            .iter()
            .map(|u| Ok((d.radial(u)? - 0.5).abs()))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        l.at_most(format!("ball_s{n}.radial_error"), err, bound);
        l.put(
            format!("ball_s{n}.hausdorff_to_half_ball"),
            hausdorff_to_ball(&d, 0.5),
        );
    }
    Ok(())
}

fn dual_integrand(cfg: &VerifyConfig, _: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    for (name, g) in presets() {
        let level = cfg.oracle_level(g.n());
        let w = wulff_shape(&g, level, &cfg.tol)?;
        let r = dual_integrand_check(&w, &sphere_mesh(g.n(), level)?, &cfg.tol)?;
        l.at_most(
            format!("{name}.dual_deviation"),
            r.dual_deviation,
            cfg.tol.report_tol,
        );
        l.at_most(
            format!("{name}.primal_deviation"),
            r.primal_deviation,
            cfg.tol.report_tol,
        );
    }
    Ok(())
}

fn dual_membership(cfg: &VerifyConfig, rng: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    for (name, g) in presets() {
        let w = wulff_shape(&g, cfg.oracle_level(g.n()), &cfg.tol)?;
        let r = dual_membership_check(&w, cfg.probes, rng.random(), &cfg.tol)?;
        l.membership(name, &r);
    }
    Ok(())
}

fn polytope_duality_check(cfg: &VerifyConfig, rng: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    let cube = wulff_shape(&GammaField::cube_support(&[1.0, 1.0, 1.0])?, 2, &cfg.tol)?;
    let d = polytope_duality(&cube, &cfg.tol)?;
    l.put("cube.vertices", d.vertices as f64);
    l.put("cube.facets", d.facets as f64);
    l.flag(
        "cube.swapped",
        d.swapped() && d.vertices == 8 && d.facets == 6,
        true,
    );
    for i in 0..cfg.random_polytopes {
        let n = 1 + i % 2;
        let g = random_polytope_field(n, rng, &cfg.tol)?;
        let w = wulff_shape(&g, cfg.levels(n)[0], &cfg.tol)?;
        l.flag(
            format!("random_{i}.swapped"),
            polytope_duality(&w, &cfg.tol)?.swapped(),
            true,
        );
    }
    Ok(())
}

fn regularity_battery(cfg: &VerifyConfig, rng: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    let mut cases: Vec<(String, GammaField)> = presets()
        .into_iter()
        .map(|(n, g)| (n.to_string(), g))
        .collect();
    for i in 0..cfg.smooth_fields {
        cases.push((
            format!("smooth_{i}"),
            GammaField::random_trig_poly(1 + i % 2, rng)?,
        ));
    }
    for i in 0..cfg.random_polytopes {
        cases.push((
            format!("polytope_{i}"),
            random_polytope_field(1 + i % 2, rng, &cfg.tol)?,
        ));
    }
    let reports = cases
        .par_iter()
        .map(|(_, g)| regularity_crosscheck(g, cfg.levels(g.n()), &cfg.tol, &cfg.analysis))
        .collect::<Result<Vec<_>>>()?;

    for ((name, _), r) in cases.iter().zip(&reports) {
        l.flag(
            format!("{name}.consistent"),
            r.verdict == Verdict::Consistent,
            true,
        );
        let kinked = r.integrand_kinks.detection == Detection::Present;
        let flat = r.flat_spots.detection == Detection::Present;
        let expect_flat = name == "cube" || name.starts_with("polytope_");
        l.flag(format!("{name}.integrand_kinked"), kinked, expect_flat);
        l.flag(format!("{name}.flat_spotted"), flat, expect_flat);
        l.flag(
            format!("{name}.non_smooth_admissible"),
            r.non_smooth_admissible,
            name == "lens",
        );
    }

    let (cube_i, _) = cases
        .iter()
        .enumerate()
        .find(|(_, c)| c.0 == "cube")
        .expect("cube preset");
    let cube = &reports[cube_i];
    let target = 2.0 * 2f64.sqrt();
    l.at_most(
        "cube.flat_spot_count",
        cube.flat_spots.flats.len() as f64,
        6.0,
    );
    l.at_least(
        "cube.flat_spot_count_min",
        cube.flat_spots.flats.len() as f64,
        6.0,
    );
    let worst = cube
        .flat_spots
        .flats
        .iter()
        .flat_map(|f| f.diameters.iter().map(|d| (d - target).abs()))
        .fold(0.0, f64::max);
    l.at_most("cube.flat_spot_diameter_error", worst, 1e-6);
    let spacing = mesh_kind(2, cfg.sphere_levels[0]).spacing().unwrap_or(0.0);
    let mut circles = [false; 3];
    let mut off_circle: f64 = 0.0;
    for k in &cube.integrand_kinks.kinks {
        let (axis, dist) = (0..3)
            .map(|i| (i, k.direction[i].abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("three axes");
        circles[axis] = true;
        off_circle = off_circle.max(dist);
    }
    l.at_most(
        "cube.kink_distance_to_coordinate_circles",
        off_circle,
        2.0 * spacing,
    );
    l.flag(
        "cube.kinks_on_all_three_circles",
        circles.iter().all(|&c| c),
        true,
    );
    Ok(())
}

fn smooth_field_consequences(
    cfg: &VerifyConfig,
    _: &mut SeededRng,
    l: &mut Evidence,
) -> Result<()> {
    let fields = [
        ("constant_s1", GammaField::constant(1, 1.0)?),
        ("ellipse", GammaField::ellipsoid(&[2.0, 1.0])?),
        ("ellipsoid", GammaField::ellipsoid(&[2.0, 1.0, 1.0])?),
    ];
    let entries = fields
        .par_iter()
        .map(|(name, g)| {
            smooth_field_suite(
                &[(name.to_string(), g.clone())],
                cfg.levels(g.n()),
                &cfg.tol,
                &cfg.analysis,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    for e in entries.iter().flatten() {
        l.flag(
            format!("{}.strictly_convex", e.name),
            e.strictly_convex,
            true,
        );
        l.flag(format!("{}.not_polytope", e.name), e.not_polytope, true);
        l.flag(format!("{}.dual_smooth", e.name), e.dual_smooth, true);
        l.at_most(
            format!("{}.dual_deviation", e.name),
            e.dual_deviation,
            cfg.tol.report_tol,
        );
    }
    Ok(())
}

fn pedal_origin(cfg: &VerifyConfig, _: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    for (name, g) in presets() {
        let w = wulff_shape(&g, cfg.oracle_level(g.n()), &cfg.tol)?;
        l.at_most(
            format!("{name}.max_deviation"),
            pedal_integrand_deviation(&w, &cfg.tol)?,
            cfg.tol.report_tol,
        );
    }
    Ok(())
}

fn disk_refinement(cfg: &VerifyConfig, _: &mut SeededRng, l: &mut Evidence) -> Result<()> {
    let g = GammaField::constant(1, 1.0)?;
    let mut last = f64::INFINITY;
    for count in DISK_LEVELS {
        let w = wulff_shape(&g, count, &cfg.tol)?;
        let h = hausdorff_to_ball(&w, 1.0);
        let a = PI / count as f64;
        l.at_most(format!("{count}.hausdorff"), h, 1.0 / a.cos() - 1.0 + 1e-9);
        l.flag(format!("{count}.hausdorff_decreased"), h < last, true);
        last = h;
        let diam = (0..w.facets().len())
            .map(|f| w.facet_diameter(f))
            .fold(0.0, f64::max);
        // A circumscribed regular polygon has edges of length 2 tan(π/L).
        l.at_most(
            format!("{count}.max_facet_diameter"),
            diam,
            2.0 * a.tan() + 1e-9,
        );
        l.put(format!("{count}.chord_length"), 2.0 * a.sin());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            circle_levels: vec![64, 128, 256],
            sphere_levels: vec![2, 3, 4],
            oracle_levels: (128, 2),
            probes: 300,
            instances: 3,
            minimality_fields: 4,
            smooth_fields: 2,
            random_polytopes: 2,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn small_battery_passes() {
        let r = run_verify(&small());
        for c in &r.checks {
            assert!(c.passed(), "{}: {:?}", c.name, c.notes);
        }
        assert!(r.all_pass);
        assert_eq!(r.schema, SCHEMA);
        assert_eq!(r.checks.len(), check_names().len());
    }

    #[test]
    fn skipped_checks_are_listed() {
        let mut cfg = small();
        cfg.skip = check_names().iter().map(|s| s.to_string()).collect();
        cfg.skip.retain(|s| s != "psi_properties");
        let r = run_verify(&cfg);
        assert_eq!(r.checks.len(), check_names().len());
        let ran: Vec<_> = r
            .checks
            .iter()
            .filter(|c| c.verdict == CheckVerdict::Pass)
            .collect();
        assert_eq!(ran.len(), 1);
        assert_eq!(ran[0].name, "psi_properties");
        assert!(r.all_pass);
    }

    #[test]
    fn same_seed_same_report() {
        let mut cfg = small();
        cfg.skip = vec![
            "regularity_battery".into(),
            "smooth_field_consequences".into(),
        ];
        let a = serde_json::to_string(&run_verify(&cfg)).unwrap();
        let b = serde_json::to_string(&run_verify(&cfg)).unwrap();
        assert_eq!(a, b);
        cfg.seed += 1;
        let c = serde_json::to_string(&run_verify(&cfg)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn looser_tolerance_still_passes() {
        let mut cfg = small();
        cfg.tol = cfg.tol.with_report_tol(1e-3).unwrap();
        cfg.skip = vec!["regularity_battery".into()];
        assert!(run_verify(&cfg).all_pass);
    }
}
