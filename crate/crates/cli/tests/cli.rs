use std::path::PathBuf;
use std::process::{Command, Output};

fn smsafe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smsafe"))
        .args(args)
        .env_remove("SMSAFE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn corpus_file(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn safety_reports_semi_safe_only() {
    let out = smsafe(&["safety", "forall X (not p(X) -> q)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("verdict semiSafeOnly\n"), "{}", stdout(&out));

    let out = smsafe(&["safety", "--json", "forall X (not p(X) -> q)"]);
    assert!(stdout(&out).starts_with(r#"{"verdict":"semiSafeOnly""#));
}

#[test]
fn sm_finds_the_single_herbrand_model() {
    let out = smsafe(&["sm", "--herbrand", "p(a) & forall X (p(X) -> q(X))"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1 stable model\n{p(a), q(a)}\n");

    let out = smsafe(&["sm", "--json", "p(a) & forall X (p(X) -> q(X))"]);
    assert_eq!(
        stdout(&out).trim(),
        r#"[{"universe":["a"],"constants":{"a":"a"},"predicates":{"p":[["a"]],"q":[["a"]]}}]"#
    );
}

#[test]
fn sm_over_a_finite_universe() {
    let out = smsafe(&["sm", "--universe", "2", "--all-const-maps", "--json", "p(a) & forall X (p(X) -> q(X))"]);
    assert_eq!(out.status.code(), Some(0));
    let models: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(models.as_array().unwrap().len(), 2);
}

#[test]
fn extra_constants_change_the_herbrand_universe() {
    let out = smsafe(&["sm", "--constants", "a", "forall X (not q(X) -> p(X))"]);
    assert_eq!(stdout(&out), "1 stable model\n{p(a)}\n");
}

#[test]
fn ground_and_prenex_print_text() {
    let out = smsafe(&["ground", "--constants", "a,b", "forall X (p(X) -> q(X))"]);
    assert_eq!(stdout(&out), "(p(a) -> q(a)) & (p(b) -> q(b))\n");

    let out = smsafe(&["prenex", "not exists X (p(X)) -> q"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "exists X1 (not p(X1) -> q)\n");
}

#[test]
fn ground_without_constants_is_an_input_error() {
    let out = smsafe(&["ground", "forall X (p(X) -> q(X))"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn characterize_reports_the_case() {
    let out = smsafe(&["characterize", "--json", "p(a) & forall X (p(X) -> q(X))"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["case"], "grounded");

    let out = smsafe(&["characterize", "forall X (not q(X) -> p(X))"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_with_two() {
    let out = smsafe(&["parse", "p &"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax error"));
    assert_eq!(smsafe(&["verify", "prop9"]).status.code(), Some(2));
    assert_eq!(smsafe(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_with_three() {
    let out = smsafe(&["sm", "--universe", "3", "--budget", "10", "forall X Y (e(X, Y) -> e(Y, X))"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_safe_corpus() {
    let path = corpus_file(
        "safe.cor",
        "# rules\n\
         fact_and_rule\tsafe\tp(a) & forall X (p(X) -> q(X))\n\
         constraint\tsafe\tp(a) & forall X (p(X) & q(X) -> false)\n",
    );
    let out = smsafe(&["verify", "prop3", "--corpus", path.to_str().unwrap(), "--universe", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("prop3: verified"));
}

#[test]
fn verify_reports_violations_with_exit_one() {
    let path = corpus_file("unsafe.cor", "rule\tunsafe\tforall X (not q(X) -> p(X))\n");
    let corpus = path.to_str().unwrap();
    let out = smsafe(&["verify", "prop3", "--corpus", corpus, "--universe", "2", "--force", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["counterexample"]["entry"], "rule");

    let out = smsafe(&["verify", "prop3", "--corpus", corpus]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn counterexample_suite_passes() {
    let out = smsafe(&["verify", "counterexamples"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}
