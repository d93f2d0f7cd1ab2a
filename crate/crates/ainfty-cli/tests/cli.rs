//! End-to-end runs of the binary against the fixture files, checking
//! stdout, exit codes, and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn ainfty(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ainfty"))
        .args(args)
        .output()
        .expect("running the binary")
}

fn fixture(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.push("tests/fixtures");
    path.push(name);
    path.to_str().unwrap().to_string()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("an exit code")
}

#[test]
fn validate_reports_pass_and_fail() {
    let good = ainfty(&["validate", &fixture("curved.alg")]);
    assert_eq!(code(&good), 0, "{}", stderr(&good));
    assert_eq!(stdout(&good), "pass\n");

    let bad = ainfty(&["validate", &fixture("broken.alg")]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).starts_with("fail at arity 0"));
}

#[test]
fn parse_errors_exit_2_with_positions() {
    let out = ainfty(&["validate", &fixture("bad.alg")]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("bad.alg:3:5"), "{err}");
    assert!(err.contains("unknown basis vector 'w'"), "{err}");

    let missing = ainfty(&["validate", "/nonexistent/x.alg"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn curvature_prints_structure_and_element_curvature() {
    let structure = ainfty(&["curvature", &fixture("curved.alg")]);
    assert_eq!(code(&structure), 0);
    assert_eq!(stdout(&structure), "v\n");

    let at_u = ainfty(&["curvature", &fixture("curved.alg"), "--element", "u"]);
    assert_eq!(stdout(&at_u), "0\n");

    let at_3u = ainfty(&["curvature", &fixture("curved.alg"), "--element", "3*u"]);
    assert_eq!(stdout(&at_3u), "-8*v\n");
}

#[test]
fn twist_output_validates_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("twisted.alg");
    let run = ainfty(&[
        "twist",
        &fixture("curved.alg"),
        "--element",
        "u",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0, "{}", stderr(&run));

    let check = ainfty(&["validate", out_path.to_str().unwrap()]);
    assert_eq!(code(&check), 0, "{}", stderr(&check));

    // Twisting by a Maurer-Cartan element kills the curvature term.
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(!text.contains("Q 0"), "{text}");

    let once = ainfty(&["twist", &fixture("curved.alg"), "--element", "u"]);
    let twice = ainfty(&["twist", &fixture("curved.alg"), "--element", "u"]);
    assert_eq!(once.stdout, twice.stdout);
    assert_eq!(stdout(&once), text);
}

#[test]
fn mc_check_distinguishes_solutions() {
    let yes = ainfty(&["mc-check", &fixture("curved.alg"), "--element", "u"]);
    assert_eq!(code(&yes), 0);
    assert_eq!(stdout(&yes), "maurer-cartan\n");

    let no = ainfty(&["mc-check", &fixture("curved.alg"), "--element", "2*u"]);
    assert_eq!(code(&no), 1);
    assert_eq!(stdout(&no), "not maurer-cartan: curvature -3*v\n");

    let wrong_degree = ainfty(&["mc-check", &fixture("curved.alg"), "--element", "v"]);
    assert_eq!(code(&wrong_degree), 2);
}

#[test]
fn mc_enumerate_lists_points_over_finite_fields_only() {
    let points = ainfty(&["mc-enumerate", &fixture("curved_f3.alg")]);
    assert_eq!(code(&points), 0);
    assert_eq!(stdout(&points), "u\n2*u\n");

    let components = ainfty(&["mc-enumerate", &fixture("curved_f3.alg"), "--components"]);
    assert_eq!(stdout(&components), "component 0: u\ncomponent 1: 2*u\n");

    let rational = ainfty(&["mc-enumerate", &fixture("curved.alg")]);
    assert_eq!(code(&rational), 2);
}

#[test]
fn mc_simplex_check_accepts_constant_edges() {
    let constant = ainfty(&[
        "mc-simplex-check",
        &fixture("curved_f3.alg"),
        "--dim",
        "1",
        "--element",
        "u#0 + u#1",
    ]);
    assert_eq!(code(&constant), 0, "{}", stderr(&constant));
    assert_eq!(stdout(&constant), "simplex\n");

    // u and 2u sit in different gauge components, so no edge joins them.
    let crossing = ainfty(&[
        "mc-simplex-check",
        &fixture("curved_f3.alg"),
        "--dim",
        "1",
        "--element",
        "u#0 + 2*u#1",
    ]);
    assert_eq!(code(&crossing), 1);
    assert_eq!(stdout(&crossing), "not a simplex\n");
}

#[test]
fn horn_fill_produces_verified_fillers() {
    let fill = ainfty(&[
        "horn-fill",
        &fixture("curved_f3.alg"),
        "--dim",
        "1",
        "--missing",
        "1",
        "--face",
        "0: u#0",
    ]);
    assert_eq!(code(&fill), 0, "{}", stderr(&fill));
    let filler = stdout(&fill);
    assert!(!filler.trim().is_empty());

    let check = ainfty(&[
        "mc-simplex-check",
        &fixture("curved_f3.alg"),
        "--dim",
        "1",
        "--element",
        filler.trim(),
    ]);
    assert_eq!(code(&check), 0, "{}", stderr(&check));

    let again = ainfty(&[
        "horn-fill",
        &fixture("curved_f3.alg"),
        "--dim",
        "1",
        "--missing",
        "1",
        "--face",
        "0: u#0",
    ]);
    assert_eq!(fill.stdout, again.stdout);
}

#[test]
fn horn_fill_rejects_incompatible_faces() {
    let out = ainfty(&[
        "horn-fill",
        &fixture("curved_f3.alg"),
        "--dim",
        "2",
        "--missing",
        "1",
        "--face",
        "0: u#0 + u#1",
        "--face",
        "2: 2*u#0 + 2*u#1",
    ]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));

    let misindexed = ainfty(&[
        "horn-fill",
        &fixture("curved_f3.alg"),
        "--dim",
        "1",
        "--missing",
        "1",
        "--face",
        "1: u#0",
    ]);
    assert_eq!(code(&misindexed), 2);
}

#[test]
fn gauge_check_separates_the_two_points() {
    let same = ainfty(&[
        "gauge-check",
        &fixture("curved_f3.alg"),
        "--left",
        "u",
        "--right",
        "u",
    ]);
    assert_eq!(code(&same), 0, "{}", stderr(&same));
    assert_eq!(stdout(&same), "gauge equivalent\n");

    let different = ainfty(&[
        "gauge-check",
        &fixture("curved_f3.alg"),
        "--left",
        "u",
        "--right",
        "2*u",
    ]);
    assert_eq!(code(&different), 1);
    assert_eq!(stdout(&different), "not gauge equivalent\n");

    let witnessed = ainfty(&[
        "gauge-check",
        &fixture("curved_f3.alg"),
        "--left",
        "u",
        "--right",
        "u",
        "--witness",
        "u#0 + u#1",
    ]);
    assert_eq!(code(&witnessed), 0, "{}", stderr(&witnessed));
}

#[test]
fn cochain_dumps_reload_as_dg_algebras() {
    let dump = ainfty(&["cochains", "dump", "--dim", "1"]);
    assert_eq!(code(&dump), 0);
    let text = stdout(&dump);
    assert!(text.starts_with("field Q\n"), "{text}");
    assert!(text.contains("basis 01 1\n"), "{text}");
    assert!(text.contains("d 1 -> "), "{text}");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cochains.dga");
    std::fs::write(&path, &text).unwrap();
    let reload = ainfty(&[
        "deformation-complex",
        "--source",
        path.to_str().unwrap(),
        "--target",
        path.to_str().unwrap(),
        "--weight",
        "1",
    ]);
    assert_eq!(code(&reload), 0, "{}", stderr(&reload));

    let modular = ainfty(&["cochains", "dump", "--dim", "2", "--field", "F5"]);
    assert_eq!(code(&modular), 0);
    assert!(stdout(&modular).starts_with("field F5\n"));

    let bad_field = ainfty(&["cochains", "dump", "--dim", "2", "--field", "F6"]);
    assert_eq!(code(&bad_field), 2);
}

#[test]
fn convolution_build_emits_a_valid_structure() {
    let build = ainfty(&[
        "convolution",
        "build",
        "--coalgebra",
        &fixture("twostage.coa"),
        "--algebra",
        &fixture("dual.dga"),
        "--weight",
        "2",
    ]);
    assert_eq!(code(&build), 0, "{}", stderr(&build));
    let text = stdout(&build);
    assert!(text.contains("basis c1>e 0 1"), "{text}");
    assert!(text.contains("basis c2>e 1 2"), "{text}");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("conv.alg");
    std::fs::write(&path, &text).unwrap();
    let check = ainfty(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&check), 0, "{}", stderr(&check));

    let again = ainfty(&[
        "convolution",
        "build",
        "--coalgebra",
        &fixture("twostage.coa"),
        "--algebra",
        &fixture("dual.dga"),
        "--weight",
        "2",
    ]);
    assert_eq!(build.stdout, again.stdout);
}

#[test]
fn bar_constructions_print_as_coalgebra_files() {
    let bar = ainfty(&[
        "convolution",
        "bar",
        "--algebra",
        &fixture("dual.dga"),
        "--weight",
        "2",
    ]);
    assert_eq!(code(&bar), 0, "{}", stderr(&bar));
    let text = stdout(&bar);
    assert!(text.starts_with("field F2\n"), "{text}");
    assert!(text.contains("basis e|e -2 2"), "{text}");
    assert!(text.contains("coproduct e|e -> 1 e e\n"), "{text}");
    // Over F2 the bar differential merges e|e to e.
    assert!(text.contains("d e|e -> 1 e"), "{text}");
}

#[test]
fn deformation_complex_feeds_mc_as_twisting() {
    let complex = ainfty(&[
        "deformation-complex",
        "--source",
        &fixture("dual.dga"),
        "--target",
        &fixture("dual.dga"),
        "--weight",
        "2",
    ]);
    assert_eq!(code(&complex), 0, "{}", stderr(&complex));
    assert!(stdout(&complex).contains("basis e>e 0 1"));

    let strict_identity = ainfty(&[
        "mc-as-twisting",
        "--source",
        &fixture("dual.dga"),
        "--target",
        &fixture("dual.dga"),
        "--weight",
        "2",
        "--element",
        "e>e + t>t",
    ]);
    assert_eq!(code(&strict_identity), 0, "{}", stderr(&strict_identity));
    assert_eq!(stdout(&strict_identity), "twisting morphism\n");

    let not_unital = ainfty(&[
        "mc-as-twisting",
        "--source",
        &fixture("dual.dga"),
        "--target",
        &fixture("dual.dga"),
        "--weight",
        "2",
        "--element",
        "t>t",
    ]);
    assert_eq!(code(&not_unital), 1);
    assert_eq!(stdout(&not_unital), "not a twisting morphism\n");
}

#[test]
fn morphism_check_runs_both_ways() {
    let good = ainfty(&[
        "morphism-check",
        "--source",
        &fixture("curved.alg"),
        "--target",
        &fixture("curved.alg"),
        "--morphism",
        &fixture("identity.mor"),
    ]);
    assert_eq!(code(&good), 0, "{}", stderr(&good));
    assert_eq!(stdout(&good), "pass\n");

    let bad = ainfty(&[
        "morphism-check",
        "--source",
        &fixture("curved.alg"),
        "--target",
        &fixture("curved.alg"),
        "--morphism",
        &fixture("wrong.mor"),
    ]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).starts_with("fail at weight"));
}
