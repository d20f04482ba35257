use std::process::Command;

fn rsym(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rsym").chain(args.iter().copied());
    let code = rsym::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn contou_carrere_of_mixed_pair() {
    let (code, out, _) = rsym(&["symbol", "cc", "--ring", "F3[e]/(e^2)", "--f", "1 - e*t^-1", "--g", "1 - t"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1+e");
}

#[test]
fn anderson_romo_example_passes() {
    let (code, out, _) = rsym(&["verify", "reciprocity-ar", "--ring", "F3[e]/(e^2)", "--f", "(x - e)", "--g", "(x - 1)"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("product: 1"), "{out}");
}

#[test]
fn kato_symbol_examples() {
    let (_, out, _) = rsym(&["symbol", "kato", "--ring", "F5[x]/(x^3)", "--f", "1 - 2*z", "--g", "1 - x*z^-1"]);
    assert_eq!(out.trim(), "1+3*x");
    let (_, out, _) = rsym(&["symbol", "kato", "--ring", "F5[x]/(x^3)", "--f", "x", "--g", "z"]);
    assert_eq!(out.trim(), "x");
}

#[test]
fn tame_symbol_at_a_point() {
    let (code, out, _) = rsym(&["symbol", "tame", "--ring", "F7", "--f", "x", "--g", "x", "--at", "0"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "6");
}

#[test]
fn decompose_prints_coordinates() {
    let (code, out, _) = rsym(&["decompose", "--ring", "F5", "--f", "2 + 3*t + t^2 + O(t^3)"]);
    assert_eq!(code, 0);
    assert!(out.contains("a0 = 2") && out.contains("a_1 = 1") && out.contains("a_2 = 2"), "{out}");
}

#[test]
fn json_output_is_valid() {
    let (code, out, _) = rsym(&[
        "symbol", "cc", "--ring", "F5", "--f", "2*t", "--g", "3*t", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"], "1", "{v}");
    assert_eq!(v["pass"], true);
}

#[test]
fn suite_reports_are_deterministic() {
    let args = ["suite", "dlog-square", "--ring", "F5[e]/(e^3)", "--cases", "100", "--seed", "7"];
    let (code, first, _) = rsym(&args);
    assert_eq!(code, 0, "{first}");
    let (_, second, _) = rsym(&args);
    assert_eq!(first, second);
    let json = [&args[..], &["--format", "json"]].concat();
    assert_eq!(rsym(&json).1, rsym(&json).1);
}

#[test]
fn single_case_replays_the_full_run() {
    let (_, all, _) = rsym(&["suite", "lemma34", "--cases", "20", "--seed", "3", "--format", "json"]);
    let (_, one, _) = rsym(&["suite", "lemma34", "--cases", "20", "--seed", "3", "--case", "13", "--format", "json"]);
    let all: serde_json::Value = serde_json::from_str(&all).unwrap();
    let one: serde_json::Value = serde_json::from_str(&one).unwrap();
    assert_eq!(all["cases"][13], one["cases"][0]);
}

#[test]
fn exit_codes() {
    assert_eq!(rsym(&["symbol", "cc", "--ring", "F4", "--f", "t", "--g", "t"]).0, 2);
    assert_eq!(rsym(&["symbol", "cc", "--ring", "F5", "--f", "t +", "--g", "t"]).0, 2);
    assert_eq!(rsym(&["symbol", "cc", "--ring", "F5[e]/(e^2)", "--f", "e*t", "--g", "t"]).0, 2);
    assert_eq!(rsym(&["no-such-verb"]).0, 2);
    assert_eq!(rsym(&["--help"]).0, 0);
    let (code, _, err) = rsym(&["symbol", "cc", "--ring", "F5", "--f", "t +", "--g", "t"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn failing_check_exits_with_one() {
    // one coefficient above the winding index cannot determine these symbols
    let args = ["suite", "bilinearity-steinberg", "--ring", "F3[e]/(e^3)", "--tprec", "1", "--cases", "20"];
    let (code, out, _) = rsym(&args);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL case 0"), "{out}");
    // an unbalanced residue assignment is an input error
    let (code, _, err) = rsym(&["verify", "residue-sum", "--ring", "F3[e]/(e^2)", "--poles", "1: e; inf: 1"]);
    assert_eq!(code, 2);
    assert!(err.contains("not zero"), "{err}");
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = rsym(&["suite", "weil", "--cases", "10", "--format", "json", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suite"], "weil");
    assert_eq!(v["failures"], 0);
    assert_eq!(v["cases"].as_array().unwrap().len(), 10);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_rsym"))
        .args(["symbol", "cc", "--ring", "F3[e]/(e^2)", "--f", "1 - e*t^-1", "--g", "1 - t"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1+e");
}
