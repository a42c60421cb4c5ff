use std::process::Command;

use serde_json::Value;

fn jacbound(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_jacbound")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, stdout, stderr) = jacbound(args);
    assert_eq!(code, 0, "{args:?}: {stderr}");
    serde_json::from_str(&stdout).unwrap()
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/output.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &Value) {
    let errors: Vec<String> = validator().iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{v}");
}

#[test]
fn bounds_quaternionic_plane() {
    let v = json(&["bounds", "--d", "4", "--n", "2", "--j", "1", "--delta", "8", "--certify"]);
    assert_valid(&v);
    assert_eq!(v["formula"], "ExceptionalTable");
    assert_eq!(v["certified_lt_one"], "yes");
    let dec: f64 = v["value"]["decimal"].as_str().unwrap().parse().unwrap();
    assert!((dec - 0.8689994123).abs() < 5e-11);
}

#[test]
fn bounds_accepts_fraction_and_decimal_delta() {
    let a = json(&["bounds", "--d", "4", "--n", "3", "--j", "1", "--delta", "12/1", "--certify"]);
    let b = json(&["bounds", "--d", "4", "--n", "3", "--j", "1", "--delta", "12.0", "--certify"]);
    assert_eq!(a["value"], b["value"]);
    let c = json(&["bounds", "--d", "4", "--n", "3", "--j", "1", "--delta", "16/3"]);
    assert_valid(&c);
    assert_eq!(c["delta"], "16/3");
    assert_eq!(c["mode"], "float");
    assert!(c["value"].get("lo").is_none());
}

#[test]
fn certified_decimal_lies_between_endpoints() {
    let v = json(&["bounds", "--d", "8", "--n", "2", "--j", "3", "--delta", "16", "--certify"]);
    let value = &v["value"];
    let f = |k: &str| value[k].as_str().unwrap().parse::<f64>().unwrap();
    assert!(f("lo_decimal") <= f("hi_decimal"));
    assert!((f("decimal") - 0.92495456626).abs() < 5e-11);
    let exact: jacbound::ExactReal = v["exact"].as_str().unwrap().parse().unwrap();
    let lo = jacbound::numerics::parse_rat(value["lo"].as_str().unwrap()).unwrap();
    let hi = jacbound::numerics::parse_rat(value["hi"].as_str().unwrap()).unwrap();
    let iv = exact.enclose(256).unwrap();
    assert!(&lo <= iv.lo() && iv.hi() <= &hi);
}

#[test]
fn bounds_input_errors_exit_one() {
    let (code, _, err) = jacbound(&["bounds", "--d", "4", "--n", "2", "--j", "2", "--delta", "8"]);
    assert_eq!(code, 1);
    assert!(err.contains("unsupported case"), "{err}");
    let (code, _, err) = jacbound(&["bounds", "--d", "3", "--n", "2", "--j", "1", "--delta", "8"]);
    assert_eq!(code, 1);
    assert!(err.contains("d must be one of"));
    let (code, _, _) = jacbound(&["bounds", "--d", "4", "--n", "3", "--j", "1", "--delta", "-1"]);
    assert_eq!(code, 1);
    let (code, _, _) = jacbound(&["bounds", "--d", "4", "--n", "3", "--j", "1", "--delta", "x"]);
    assert_eq!(code, 1);
    let (code, _, _) = jacbound(&["bounds", "--d", "4"]);
    assert_eq!(code, 1);
    let (code, _, _) = jacbound(&["nonsense"]);
    assert_eq!(code, 1);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = jacbound(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("vanishing"));
}

#[test]
fn vanishing_json_and_csv() {
    let v = json(&["vanishing", "--d", "8", "--n", "2"]);
    assert_valid(&v);
    assert_eq!(v["vanishing_degrees"], serde_json::json!([13, 14, 15]));
    let (code, csv, _) = jacbound(&["vanishing", "--d", "4", "--n", "5", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "degree,j,delta,bound_lo,bound_hi,certified");
    assert_eq!(lines.len(), 5);
    assert!(lines[4].starts_with("19,1,20,") && lines[4].ends_with(",true"));
    assert!(lines[1..4].iter().all(|l| l.ends_with(",false")));
    let (code, _, err) = jacbound(&["vanishing", "--d", "2", "--n", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("d = 2"));
}

#[test]
fn cn_table() {
    let (code, csv, _) = jacbound(&["cn", "--from", "1", "--to", "34"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 35);
    assert_eq!(rows[2][..3], ["3", "0.846901051047", "true"]);
    assert_eq!(rows[1][2], "false");
    assert!(rows[1][1].starts_with("1.116"));
    assert!(!rows[1][3].is_empty());
    assert_eq!(rows[34][..3], ["limit", "0.52026009502", "true"]);
    for r in &rows[..34] {
        assert_eq!(r[1].split('.').nth(1).unwrap().len(), 12);
    }
    let (code, _, _) = jacbound(&["cn", "--from", "5", "--to", "4"]);
    assert_eq!(code, 1);
    let (code, _, _) = jacbound(&["cn", "--from", "1", "--to", "10001"]);
    assert_eq!(code, 1);
}

#[test]
fn cn_svg_is_self_contained() {
    let (code, svg, _) = jacbound(&["cn", "--from", "1", "--to", "34", "--format", "svg"]);
    assert_eq!(code, 0);
    assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("sqrt(2)/e = 0.52026009502"));
    assert_eq!(svg.matches("<circle").count(), 34);
    assert!(!svg.contains("href"));
}

#[test]
fn critexp_values() {
    let v = json(&["critexp", "--d", "4", "--n", "3", "--hd", "11"]);
    assert_valid(&v);
    assert_eq!(v["larger"], "cfm");
    assert_eq!(v["kapovich_bound"], "10");
    let dec: f64 = v["cfm_bound"]["decimal"].as_str().unwrap().parse().unwrap();
    assert!((dec - 12.1827).abs() < 1e-4);
    let v = json(&["critexp", "--d", "4", "--n", "3", "--hd", "12"]);
    assert_eq!(v["cfm_exact"], "14");
    let v = json(&["critexp", "--d", "4", "--epsilon", "2"]);
    assert_valid(&v);
    assert_eq!(v["n_epsilon"], 5);
    let (code, _, _) = jacbound(&["critexp", "--d", "4", "--n", "3", "--hd", "8"]);
    assert_eq!(code, 1);
    let (code, _, _) = jacbound(&["critexp", "--d", "4", "--n", "2", "--hd", "8"]);
    assert_eq!(code, 1);
    let (code, _, _) = jacbound(&["critexp", "--d", "4"]);
    assert_eq!(code, 1);
}

#[test]
fn critexp_epsilon_below_limit_hits_cap() {
    let (code, _, err) = jacbound(&["critexp", "--d", "4", "--epsilon", "1/2", "--cap", "5000"]);
    assert_eq!(code, 2);
    assert!(err.contains("5000"));
}

#[test]
fn verify_small_suites() {
    for suite in ["pest", "matching"] {
        let v = json(&["verify", "--suite", suite, "--trials", "50"]);
        assert_valid(&v);
        assert_eq!(v["report"]["passed"], true);
    }
    let v = json(&["verify", "--suite", "fiedler", "--trials", "100", "--seed", "7"]);
    assert_eq!(v["report"]["results"][0]["sweep"]["passed"], 100);
    let (code, _, err) = jacbound(&["verify", "--suite", "bogus"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown suite"));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--suite", "kxw", "--trials", "20", "--seed", "9"];
    assert_eq!(jacbound(&args).1, jacbound(&args).1);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("jacbound-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("v.json");
    let p = path.to_str().unwrap();
    let (code, stdout, _) = jacbound(&["vanishing", "--d", "8", "--n", "2", "--out", p]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "vanishing");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn library_entry_point_matches_binary() {
    let args = ["jacbound", "bounds", "--d", "8", "--n", "2", "--j", "1", "--delta", "16", "--certify"];
    let lib = jacbound_cli::run(args);
    assert_eq!(lib.code, 0);
    assert_eq!(lib.stdout, jacbound(&args[1..]).1);
}

#[test]
fn schema_rejects_malformed_records() {
    let v = validator();
    assert!(!v.is_valid(&serde_json::json!({ "command": "bounds" })));
    let mut good = json(&["vanishing", "--d", "8", "--n", "2"]);
    assert!(v.is_valid(&good));
    good["rows"][0]["certified_lt_one"] = "maybe".into();
    assert!(!v.is_valid(&good));
}
