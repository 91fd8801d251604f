use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn wulffkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wulffkit"))
        .args(args)
        .env_remove("WULFFKIT_SEED")
        .output()
        .unwrap()
}

fn spec(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

/// Every SVG `points` attribute, parsed.
fn svg_layers(text: &str) -> Vec<(String, Vec<(f64, f64)>)> {
    text.lines()
        .filter_map(|l| {
            let id = l.split("id=\"").nth(1)?.split('"').next()?.to_string();
            let pts = l.split("points=\"").nth(1)?.split('"').next()?;
            let pts = pts
                .split(' ')
                .map(|p| {
                    let (x, y) = p.split_once(',').unwrap();
                    (x.parse().unwrap(), y.parse().unwrap())
                })
                .collect();
            Some((id, pts))
        })
        .collect()
}

#[test]
fn build_constant_circle_is_a_polygon() {
    let dir = TempDir::new().unwrap();
    let g = spec(&dir, "c.json", r#"{"n": 1, "preset": "constant"}"#);
    let out = dir.path().join("w.svg");
    let o = wulffkit(&["build", s(&g), "--mesh", "256", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let layers = svg_layers(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(layers.len(), 1);
    assert_eq!(layers[0].1.len(), 256);
    let sec = 1.0 / (std::f64::consts::PI / 256.0).cos();
    for (x, y) in &layers[0].1 {
        assert!((x.hypot(*y) - sec).abs() < 1e-8);
    }
}

#[test]
fn build_cube_obj() {
    let dir = TempDir::new().unwrap();
    let g = spec(
        &dir,
        "cube.json",
        r#"{"n": 2, "preset": "cube_support", "params": {"weights": [1, 1, 1]}}"#,
    );
    let o = wulffkit(&["build", s(&g)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 8);
    let faces: Vec<_> = text.lines().filter(|l| l.starts_with("f ")).collect();
    assert_eq!(faces.len(), 6);
    assert!(faces.iter().all(|f| f.split_whitespace().count() == 5));
}

#[test]
fn build_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = spec(
        &dir,
        "e.json",
        r#"{"n": 2, "preset": "ellipsoid", "params": {"axes": [2, 1, 1]}}"#,
    );
    let a = wulffkit(&["build", s(&g), "--mesh", "2"]);
    let b = wulffkit(&["build", s(&g), "--mesh", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = spec(&dir, "bad.json", "{\n  \"n\": 1,\n  \"preset\": ]\n}");
    let o = wulffkit(&["build", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let neg = spec(
        &dir,
        "neg.json",
        r#"{"n": 1, "samples": [[1, 0, 1], [0, 1, -2]]}"#,
    );
    let o = wulffkit(&["build", s(&neg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("samples[1]"));

    assert_eq!(wulffkit(&["build"]).status.code(), Some(1));
    assert_eq!(wulffkit(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        wulffkit(&["build", "/nonexistent/spec.json"]).status.code(),
        Some(1)
    );
    assert_eq!(wulffkit(&["--help"]).status.code(), Some(0));

    let g = spec(&dir, "c.json", r#"{"n": 1, "preset": "constant"}"#);
    assert_eq!(
        wulffkit(&["build", s(&g), "--format", "obj"]).status.code(),
        Some(1)
    );
    assert_eq!(
        wulffkit(&["build", s(&g), "--tol", "-1"]).status.code(),
        Some(1)
    );
}

#[test]
fn integrand_tables() {
    let dir = TempDir::new().unwrap();
    let lens = spec(&dir, "lens.json", r#"{"n": 1, "preset": "lens"}"#);
    let o = wulffkit(&["integrand", s(&lens), "--mesh", "512"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("x,y,gamma,gamma_w,equal\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 512);
    for row in &rows {
        let y: f64 = row[1].parse().unwrap();
        if (y.abs() - 1.0).abs() < 1e-12 {
            let (g, gw): (f64, f64) = (row[2].parse().unwrap(), row[3].parse().unwrap());
            assert!((g - 1.0).abs() < 1e-9);
            assert!((gw - 3f64.sqrt() / 2.0).abs() < 1e-4, "{gw}");
            assert_eq!(row[4], "false");
        }
    }

    for body in [
        r#"{"n": 1, "preset": "constant", "params": {"r": 1.5}}"#,
        r#"{"n": 2, "preset": "cube"}"#,
    ] {
        let g = spec(&dir, "g.json", body);
        let o = wulffkit(&["integrand", s(&g), "--mesh", "3"]);
        assert!(o.status.success());
        assert!(
            csv_rows(&stdout(&o))
                .iter()
                .all(|r| r.last().unwrap() == "true"),
            "{body}"
        );
    }
}

#[test]
fn dual_outputs() {
    let dir = TempDir::new().unwrap();
    let ball = spec(
        &dir,
        "ball.json",
        r#"{"n": 1, "preset": "constant", "params": {"r": 2}}"#,
    );
    let out = dir.path().join("d.svg");
    let o = wulffkit(&["dual", s(&ball), "--mesh", "512", "--out", s(&out)]);
    assert!(o.status.success());
    let block: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(block["schema"], "wulffkit-report/1");
    assert!((block["dual_circumradius"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((block["dual_inradius"].as_f64().unwrap() - 0.5).abs() < 1e-4);
    assert_eq!(block["within_tol"], true);

    let cube = spec(&dir, "cube.json", r#"{"n": 2, "preset": "cube"}"#);
    let out = dir.path().join("oct.obj");
    let o = wulffkit(&["dual", s(&cube), "--out", s(&out)]);
    let block: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(block["dual_vertices"], 6);
    assert_eq!(block["dual_facets"], 8);
    let obj = std::fs::read_to_string(&out).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 8);

    // The octahedron read back from the OBJ has the cube as its dual.
    let out2 = dir.path().join("cube.obj");
    let o = wulffkit(&["dual", s(&out), "--out", s(&out2)]);
    assert!(o.status.success());
    let block: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(block["dual_vertices"], 8);
    assert_eq!(block["dual_facets"], 6);

    let lens = spec(&dir, "lens.json", r#"{"n": 1, "preset": "lens"}"#);
    let o = wulffkit(&["dual", s(&lens), "--out", s(&dir.path().join("l.svg"))]);
    let block: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(block["oracle_distance"].as_f64().unwrap() <= 1e-6);
    assert!(block["involution_distance"].as_f64().unwrap() <= 1e-6);

    let garbage = spec(&dir, "g.obj", "v 1 0 nope\n");
    assert_eq!(
        wulffkit(&["dual", s(&garbage), "--out", s(&out2)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(wulffkit(&["dual", s(&lens)]).status.code(), Some(1));
}

#[test]
fn analyze_reports() {
    let dir = TempDir::new().unwrap();
    let lens = spec(&dir, "lens.json", r#"{"n": 1, "preset": "lens"}"#);
    let o = wulffkit(&["analyze", s(&lens), "--levels", "128,256,512"]);
    assert!(o.status.success());
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["schema"], "wulffkit-report/1");
    let a = &r["analysis"];
    assert_eq!(a["verdict"], "consistent");
    assert_eq!(a["non_smooth_admissible"], true);
    assert_eq!(a["input_kinks"]["detection"], "present");
    assert_eq!(a["flat_spots"]["detection"], "absent");

    let cube = spec(&dir, "cube.json", r#"{"n": 2, "preset": "cube"}"#);
    let o = wulffkit(&["analyze", s(&cube), "--levels", "2,3,4"]);
    let a = &serde_json::from_slice::<Value>(&o.stdout).unwrap()["analysis"];
    assert_eq!(a["verdict"], "consistent");
    assert_eq!(a["flat_spots"]["flats"].as_array().unwrap().len(), 6);

    let o = wulffkit(&["analyze", s(&cube), "--levels", "2,3"]);
    let a = &serde_json::from_slice::<Value>(&o.stdout).unwrap()["analysis"];
    assert_eq!(a["verdict"], "inconclusive");
    assert_eq!(
        wulffkit(&["analyze", s(&cube), "--levels", "3,2,4"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn pedal_figures() {
    let dir = TempDir::new().unwrap();
    let ellipse = spec(
        &dir,
        "e.json",
        r#"{"n": 1, "preset": "ellipse", "params": {"axes": [2, 1]}}"#,
    );
    let o = wulffkit(&["pedal", s(&ellipse), "--point", "0,0", "--mesh", "128"]);
    assert!(o.status.success());
    let layers = svg_layers(&stdout(&o));
    let ids: Vec<&str> = layers.iter().map(|l| l.0.as_str()).collect();
    assert_eq!(ids, ["body", "pedal", "integrand"]);
    // Facet normals are the mesh directions, so the two curves coincide.
    assert_eq!(layers[1].1.len(), layers[2].1.len());
    for (p, q) in layers[1].1.iter().zip(&layers[2].1) {
        assert!((p.0 - q.0).abs() < 1e-8 && (p.1 - q.1).abs() < 1e-8);
    }

    let off = wulffkit(&[
        "pedal",
        s(&ellipse),
        "--point",
        "0.5,-0.25",
        "--mesh",
        "128",
    ]);
    assert!(off.status.success());
    assert_eq!(svg_layers(&stdout(&off)).len(), 2);

    let sphere = spec(
        &dir,
        "s.json",
        r#"{"n": 2, "preset": "constant", "params": {"r": 2}}"#,
    );
    let o = wulffkit(&["pedal", s(&sphere), "--point", "0,0,0", "--mesh", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let pedal = text
        .split("o pedal")
        .nth(1)
        .unwrap()
        .split("o integrand")
        .next()
        .unwrap();
    let mut count = 0;
    for l in pedal.lines().filter(|l| l.starts_with("v ")) {
        let c: Vec<f64> = l
            .split_whitespace()
            .skip(1)
            .map(|x| x.parse().unwrap())
            .collect();
        assert!(((c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt() - 2.0).abs() < 1e-8);
        count += 1;
    }
    assert_eq!(count, 162);

    assert_eq!(
        wulffkit(&["pedal", s(&ellipse), "--point", "3,0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        wulffkit(&["pedal", s(&ellipse), "--point", "0,0,0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn verify_writes_report_and_lists_skips() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let mut args = vec!["verify", "--probes", "100", "--out", s(&out)];
    let names = [
        "integrand_support_oracle",
        "convex_integrand_test",
        "same_wulff_equivalence",
        "integrand_idempotence",
        "minimality",
        "spherical_wulff_route",
        "maehara",
        "double_polar",
        "polar_antitone",
        "dual_wulff_oracle",
        "dual_integrand",
        "dual_membership",
        "polytope_duality",
        "regularity_battery",
        "smooth_field_consequences",
        "pedal_origin",
        "disk_refinement",
    ];
    for n in &names {
        args.extend(["--skip", n]);
    }
    let o = Command::new(env!("CARGO_BIN_EXE_wulffkit"))
        .args(&args)
        .env("WULFFKIT_SEED", "77")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["schema"], "wulffkit-report/1");
    assert_eq!(r["seed"], 77);
    assert_eq!(r["all_pass"], true);
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), names.len() + 2);
    let skipped = checks
        .iter()
        .filter(|c| c["verdict"]["status"] == "skipped")
        .count();
    assert_eq!(skipped, names.len());
    assert!(checks
        .iter()
        .all(|c| c["verdict"]["status"] == "skipped" || c["verdict"]["status"] == "pass"));

    assert_eq!(
        wulffkit(&["verify", "--skip", "nonsense"]).status.code(),
        Some(1)
    );
}

#[test]
fn verify_failure_exits_4_and_still_writes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let mut args = vec![
        "verify",
        "--levels",
        "8,16,32",
        "--sphere-levels",
        "1,2,3",
        "--out",
        s(&out),
    ];
    for n in [
        "integrand_support_oracle",
        "convex_integrand_test",
        "same_wulff_equivalence",
        "integrand_idempotence",
        "minimality",
        "inversion_factorization",
        "psi_properties",
        "spherical_wulff_route",
        "maehara",
        "double_polar",
        "polar_antitone",
        "dual_wulff_oracle",
        "dual_integrand",
        "dual_membership",
        "polytope_duality",
        "regularity_battery",
        "pedal_origin",
        "disk_refinement",
    ] {
        args.extend(["--skip", n]);
    }
    let o = wulffkit(&args);
    assert_eq!(o.status.code(), Some(4));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["all_pass"], false);
}
