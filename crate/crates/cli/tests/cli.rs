use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn trikit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trikit"))
        .args(args)
        .current_dir(dir)
        .env_remove("TRIKIT_SEED")
        .env_remove("TRIKIT_FORMAT")
        .output()
        .expect("runs")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = trikit(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str], dir: &Path) -> i32 {
    trikit(args, dir).status.code().unwrap()
}

fn structured(args: &[&str], dir: &Path) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "structured"]);
    serde_json::from_slice(&trikit(&a, dir).stdout).unwrap()
}

fn surface(dir: &Path, name: &str, body: &str) {
    fs::write(dir.join(name), body).unwrap();
}

#[test]
fn validate_skeleton_homology() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(ok(&["validate", "one_tet.tri"], p), "valid, 4 boundary faces\n");
    fs::write(p.join("mine.tri"), "tets 1\n0: - - - -\n").unwrap();
    assert_eq!(ok(&["validate", "mine.tri"], p), "valid, 4 boundary faces\n");
    // Face 0 glued to itself.
    fs::write(p.join("bad.tri"), "tets 1\n0: 0/0123 - - -\n").unwrap();
    assert_eq!(code(&["validate", "bad.tri"], p), 5);
    assert!(ok(&["skeleton", "s3_two"], p).contains("euler characteristic 0"));
    assert!(ok(&["homology", "lens_3_1"], p).starts_with("H1 = Z_3\n"));
    assert_eq!(structured(&["homology", "s2xs1"], p)["result"]["betti_rational"], 1);
}

#[test]
fn move_commands() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert!(ok(&["moves", "list", "one_tet"], p).ends_with("11 legal moves\n"));
    ok(&["moves", "apply", "one_tet", "M14 tet=0", "-o", "coned.tri"], p);
    assert!(fs::read_to_string(p.join("coned.tri")).unwrap().starts_with("tets 4\n"));
    assert_eq!(code(&["moves", "apply", "one_tet", "M41 tet=0 vertex=0"], p), 3);
    assert_eq!(code(&["moves", "apply", "one_tet", "M99 tet=0"], p), 2);

    let walk = ok(&["moves", "walk", "s3_two", "--steps", "200", "--seed", "5", "-o", "end.tri"], p);
    assert!(walk.contains("invariants preserved: yes"));
    assert_eq!(walk, ok(&["moves", "walk", "s3_two", "--steps", "200", "--seed", "5", "-o", "end.tri"], p));
    fs::write(p.join("walk.rec"), &walk).unwrap();
    let replayed = ok(&["moves", "replay", "s3_two", "walk.rec"], p);
    assert!(replayed.ends_with(&fs::read_to_string(p.join("end.tri")).unwrap()));
    ok(&["moves", "apply", "s3_two", "--record", "walk.rec"], p);
    // A record whose sizes disagree with the replay.
    fs::write(p.join("wrong.rec"), "M14 tet=0 tets=9\n").unwrap();
    assert_eq!(code(&["moves", "replay", "s3_two", "wrong.rec"], p), 5);
}

#[test]
fn surface_commands() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let m = ok(&["surfaces", "matching", "solid_torus_2"], p);
    assert!(m.starts_with("coordinates 14 (7 x 2 tetrahedra)\nequations 9 (3 x 3 interior faces)\n"));
    assert!(ok(&["surfaces", "enum-vertex", "one_tet"], p).contains("7 vertex rays"));
    assert!(ok(&["surfaces", "enum-fundamental", "s3_two"], p).contains("fundamental surfaces"));
    assert_eq!(code(&["surfaces", "enum-fundamental", "s3_five"], p), 4);

    let b = ok(&["surfaces", "verify-bounds", "solid_torus_2"], p);
    assert!(b.contains("<= 16384") && b.contains("<= 229376") && b.contains("bounds hold: yes"));
    let v = structured(&["surfaces", "verify-bounds", "ball_3", "--vertex-only"], p);
    assert_eq!(v["result"]["vertex_threshold"], "2097152");

    surface(p, "disc.srf", "surface over one_tet t=1\n1 0 0 0 0 0 0\n");
    surface(p, "quad.srf", "surface over one_tet t=1\n0 0 0 0 1 0 0\n");
    surface(p, "quad2.srf", "surface over one_tet t=1\n0 0 0 0 0 1 0\n");
    surface(p, "short.srf", "surface over one_tet t=1\n0 0 0\n");
    let c = ok(&["surfaces", "classify", "one_tet", "quad.srf", "--pattern", "0:0,0:1,0:3"], p);
    assert!(c.contains("class=disc") && c.contains("intersection with pattern 2"));
    assert_eq!(code(&["surfaces", "classify", "one_tet", "quad.srf", "--pattern", "0:0,0:1"], p), 3);
    assert_eq!(code(&["surfaces", "classify", "one_tet", "short.srf"], p), 2);
    ok(&["surfaces", "sum", "one_tet", "disc.srf", "quad.srf", "-o", "sum.srf"], p);
    assert_eq!(fs::read_to_string(p.join("sum.srf")).unwrap().lines().nth(1), Some("1 0 0 0 1 0 0"));
    assert_eq!(code(&["surfaces", "sum", "one_tet", "quad.srf", "quad2.srf"], p), 3);
}

#[test]
fn subdivide_and_realize() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    surface(p, "disc.srf", "surface over one_tet t=1\n1 0 0 0 0 0 0\n");
    let s = ok(&["subdivide", "one_tet", "disc.srf", "-o", "t1.tri", "--embedding", "t1.emb"], p);
    assert!(s.contains("tetrahedra 1 -> 12 (bound 20(n+t) = 40)"));
    assert!(ok(&["validate", "t1.tri"], p).starts_with("valid"));
    assert_eq!(fs::read_to_string(p.join("t1.emb")).unwrap().lines().count(), 1);

    let r = ok(&["realize", "one_tet", "disc.srf", "-o", "t1.rec"], p);
    assert!(r.contains("allowed 200"));
    ok(&["moves", "replay", "one_tet", "t1.rec", "-o", "replayed.tri"], p);
    let iso = structured(&["connect", "replayed.tri", "t1.tri", "--max-depth", "0"], p);
    assert_eq!(iso["result"]["outcome"]["record"]["entries"].as_array().map(Vec::len), Some(0));
}

#[test]
fn bound_commands() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(ok(&["bounds", "eval", "(e 2 3)"], p), "256\n");
    assert_eq!(ok(&["bounds", "eval", "(* 7 t (^ 2 (* 7 t)))", "--bind", "t=2"], p), "229376\n");
    assert!(ok(&["bounds", "eval", "(e 4 3)", "--bit-ceiling", "64"], p).starts_with("symbolic"));
    assert_eq!(code(&["bounds", "eval", "(+ t"], p), 2);
    assert_eq!(code(&["bounds", "eval", "(+ t 1)"], p), 3);
    let cmp = ok(&["bounds", "compare", "(* 20 (+ 10 (e 2 400)))", "(e 3 500)"], p);
    assert!(cmp.contains(" < "));
    assert_eq!(ok(&["bounds", "catalogue", "hass_vertex", "2"], p), "hass_vertex(2) = 16384\n");
    assert!(ok(&["bounds", "catalogue"], p).contains("main_bound(p, q)"));
    assert_eq!(code(&["bounds", "catalogue", "nonsense"], p), 2);
}

#[test]
fn connect_and_probes() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let probes = ok(&["connect", "solid_torus_2", "--walk", "6", "--trials", "3", "--seed", "4"], p);
    assert!(probes.contains("all within bound: yes"));
    let again = ok(&["connect", "solid_torus_2", "--walk", "6", "--trials", "3", "--seed", "4", "--jobs", "2"], p);
    assert_eq!(probes, again);
    assert_eq!(code(&["connect", "one_tet", "s3_two"], p), 3);
    ok(&["moves", "apply", "s3_two", "M14 tet=0", "M14 tet=1", "-o", "b.tri"], p);
    assert_eq!(code(&["connect", "s3_two", "b.tri", "--max-depth", "1"], p), 4);
    let found = structured(&["connect", "s3_two", "b.tri"], p);
    assert_eq!(found["ok"], true);
    assert_eq!(found["result"]["outcome"]["within_bound"], true);
}

#[test]
fn environment_overrides_and_errors() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let out = Command::new(env!("CARGO_BIN_EXE_trikit"))
        .args(["bounds", "eval", "(e 2 3)"])
        .env("TRIKIT_FORMAT", "structured")
        .current_dir(p)
        .output()
        .unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["value"], "256");
    let err = structured(&["validate", "missing.tri"], p);
    assert_eq!(err["error"]["category"], "parse");
    assert_eq!(code(&["frobnicate"], p), 2);
}

#[test]
fn golden_reports() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (file, args) in [
        ("verify_bounds_solid_torus_2.txt", &["surfaces", "verify-bounds", "solid_torus_2"][..]),
        ("skeleton_solid_torus_2.txt", &["skeleton", "solid_torus_2"][..]),
        ("walk_s3_two.txt", &["moves", "walk", "s3_two", "--steps", "20", "--seed", "1"][..]),
    ] {
        let want = fs::read_to_string(golden.join(file)).unwrap();
        assert_eq!(ok(args, p), want, "{file}");
    }
}
