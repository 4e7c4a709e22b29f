//! The `hopfkit` binary: exit codes, output formats, files and determinism.

use std::io::Write;
use std::process::{Command, Output};

use hopfkit::builtin::builtin;
use hopfkit::presentation::save_presentation;

fn hopfkit(args: &[&str]) -> Output {
    hopfkit_env(args, &[])
}

fn hopfkit_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hopfkit"));
    cmd.args(args).env_remove("HOPFKIT_ORDER");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn verify_uh_sl2_exits_zero() {
    let o = hopfkit(&["verify", "uh-sl2", "--checks", "hopf", "--order", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("hopfkit-report v1\n"));
}

#[test]
fn verify_osc4_names_the_failing_axiom() {
    let o = hopfkit(&["verify", "osc4", "--checks", "hopf"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("fail H1.coproduct.[A+,N]"), "{out}");
    assert!(out.contains("  witness: "));
    assert!(stderr(&o).contains("H1.coproduct.[A+,N]"));
}

#[test]
fn osc4_subalgebra_passes_on_its_own() {
    let o = hopfkit(&[
        "verify",
        "osc4",
        "--checks",
        "consistency",
        "--subalgebra",
        "A,N",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("[subalgebra osc4{A,N}]"));
    let o = hopfkit(&[
        "verify",
        "osc4",
        "--checks",
        "consistency",
        "--subalgebra",
        "A,A+",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn contraction_to_poincare_has_one_annotation() {
    let o = hopfkit(&[
        "contract",
        "--from",
        "uh-sl2",
        "--scaling",
        "poincare",
        "--target",
        "uh-p11",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("annotation: ").count(), 1);
}

#[test]
fn every_builtin_contraction_exits_zero() {
    for (from, scaling) in [
        ("fun-slh2", "poincare"),
        ("uh-sl2", "poincare"),
        ("uh-sl2", "heisenberg"),
        ("uh-sl2", "oscillator"),
    ] {
        let o = hopfkit(&["contract", "--from", from, "--scaling", scaling]);
        assert_eq!(o.status.code(), Some(0), "{from} {scaling}: {}", stdout(&o));
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(hopfkit(&[]).status.code(), Some(2));
    assert_eq!(
        hopfkit(&["verify", "uh-sl2", "--checks", "bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hopfkit(&["contract", "--from", "uh-sl2", "--scaling", "poincare-x"])
            .status
            .code(),
        Some(2)
    );
    let o = hopfkit(&["normal-form", "uh-sl2", "J3 J+"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error"));
    let o = hopfkit(&["normal-form", "uh-sl2", "sinh(h*J+)*J-*(1/h)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("divh"), "{}", stderr(&o));
}

#[test]
fn resource_limits_exit_three() {
    let o = hopfkit(&["verify", "uh-sl2", "--checks", "hopf", "--degree-cap", "2"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn normal_form_and_pair_print_canonical_text() {
    let o = hopfkit(&["normal-form", "fun-slh2", "b*a"]);
    assert_eq!(stdout(&o), "h - h*a^2 + a*b\n");
    let o = hopfkit(&["pair", "J3", "b*a - a*b - h + h*a^2"]);
    assert_eq!(stdout(&o), "0\n");
    let o = hopfkit(&["pair", "J3", "a*b*c*d", "--degree", "3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn order_comes_from_the_environment() {
    let o = hopfkit_env(
        &["verify", "heis3", "--checks", "hopf"],
        &[("HOPFKIT_ORDER", "2")],
    );
    assert!(stdout(&o).contains("config: order = 2\n"));
    let o = hopfkit_env(
        &["verify", "heis3", "--checks", "hopf", "--order", "1"],
        &[("HOPFKIT_ORDER", "2")],
    );
    assert!(stdout(&o).contains("config: order = 1\n"));
}

#[test]
fn tree_format_is_json_after_the_header() {
    let o = hopfkit(&["verify", "heis3", "--format", "tree"]);
    let out = stdout(&o);
    let (head, body) = out.split_once('\n').unwrap();
    assert_eq!(head, "hopfkit-report v1");
    let v: serde_json::Value = serde_json::from_str(body).unwrap();
    assert_eq!(v["overall"], "pass");
    assert_eq!(v["reports"][0]["kind"], "hopf");
}

#[test]
fn presentation_and_scaling_files() {
    let heis = temp_file(&save_presentation(&builtin("heis3").unwrap()));
    let path = heis.path().to_str().unwrap();
    let o = hopfkit(&["verify", path]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let scaling = temp_file(
        "scaling heis-file\n  source uh-sl2\n  target heis3\n  map A = J+\n  map A+ = e*J-\n  map H = e*J3\nend\n",
    );
    let o = hopfkit(&[
        "contract",
        "--from",
        "uh-sl2",
        "--scaling",
        scaling.path().to_str().unwrap(),
        "--target",
        path,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));

    let wrong = temp_file(
        "scaling bad\n  source uh-sl2\n  target heis3\n  map A = J+\n  map A+ = e*J-\n  map H = -e*J3\nend\n",
    );
    let o = hopfkit(&[
        "contract",
        "--from",
        "uh-sl2",
        "--scaling",
        wrong.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("K1.relation."), "{}", stderr(&o));

    let broken = temp_file("algebra x\ngens a < b\nrel [b,a] = a b\n");
    let o = hopfkit(&["verify", broken.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let args = [
        "verify",
        "uh-sl2",
        "--checks",
        "hopf,consistency,casimir,rmatrix,pairing",
        "--samples",
        "200",
    ];
    let one = hopfkit_env(&args, &[("RAYON_NUM_THREADS", "1")]);
    let many = hopfkit_env(&args, &[("RAYON_NUM_THREADS", "4")]);
    let again = hopfkit_env(&args, &[("RAYON_NUM_THREADS", "4")]);
    assert_eq!(one.status.code(), Some(0), "{}", stdout(&one));
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(many.stdout, again.stdout);
    let tree: Vec<_> = (0..2)
        .map(|_| hopfkit(&["verify", "osc4", "--format", "tree"]).stdout)
        .collect();
    assert_eq!(tree[0], tree[1]);
}

#[test]
fn list_shows_the_catalogue() {
    let o = hopfkit(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("uh-p11: P+ < K < P-"));
    assert!(out.contains("oscillator: uh-sl2 -> osc4"));
    assert!(out.contains("casimir-p11 in uh-p11"));
}
