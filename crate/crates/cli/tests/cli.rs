use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weilres")).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_weilres"))
        .args(args)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_ok(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn strs(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

#[test]
fn restrict_circle_over_gaussian_rationals() {
    let v = json_ok(&run(&["restrict", "--input", &fixture("circle_qi.json")]));
    assert_eq!(strs(&v["result"]["variables"]), ["u_1", "u_2", "v_1", "v_2"]);
    assert_eq!(strs(&v["result"]["generators"]), ["u_1^2 - u_2^2 + v_1^2 - v_2^2 - 1", "2*u_1*u_2 + 2*v_1*v_2"]);
    assert_eq!(v["coordinate_map"][1]["variable"], "v");
    assert_eq!(strs(&v["coordinate_map"][1]["coordinates"]), ["v_1", "v_2"]);
    assert_eq!(v["coefficient_index"][0]["generator"], "u^2 + v^2 - 1");
}

#[test]
fn restrict_square_root_and_affine_plane() {
    let v = json_ok(&run(&["restrict", "--input", &fixture("circle_qi.json"), "--presentation", "root"]));
    assert_eq!(strs(&v["result"]["generators"]), ["u_1^2 - u_2^2 - 3", "2*u_1*u_2"]);
    let v = json_ok(&run(&["restrict", "--input", &fixture("circle_qi.json"), "--presentation", "plane"]));
    assert_eq!(strs(&v["result"]["variables"]).len(), 4);
    assert!(v["result"]["generators"].as_array().unwrap().is_empty());
}

#[test]
fn restrict_cube_roots_of_unity() {
    let v = json_ok(&run(&["restrict", "--input", &fixture("f4_cube_roots.json")]));
    assert_eq!(strs(&v["result"]["generators"]), ["u_1^2 + u_2^2 + u_1 + 1", "u_2^2 + u_2"]);
    assert_eq!(v["result"]["field"]["kind"], "prime");
}

#[test]
fn structure_constant_extension_matches_minimal_polynomial() {
    let v = json_ok(&run(&["restrict", "--input", &fixture("tensor_f9.json")]));
    assert_eq!(strs(&v["result"]["generators"]), ["u_1^2 + 2*u_2^2 + 1", "2*u_1*u_2"]);
    assert_eq!(v["extension"]["rank"], 2);
}

#[test]
fn disc_generators_for_three_radii() {
    let v = json_ok(&run(&["disc", "--input", &fixture("disc_quadratic.json")]));
    let b = &v["block"];
    assert_eq!(
        strs(&b["generators"]),
        ["2*x_1 + y1_1", "-x_1^2 + 2*x_2^2 + y1_2", "y2_1", "y2_2", "4*x_2 + y3_1", "2*x_1^2 - 4*x_2^2 + y3_2"]
    );
    assert_eq!(strs(&b["adic_radii"]), ["0"; 6]);
    assert_eq!(strs(&b["berkovich_radii"]), ["0", "0", "-inf", "-inf", "-1/2", "-1"]);
}

#[test]
fn disc_over_rank_one() {
    let doc = r#"{"version": 1, "field": {"kind": "rational"}, "extension": {"minimal_polynomial": "t"}}"#;
    let v = json_ok(&run_stdin(&["disc", "--radius", "3"], doc));
    assert_eq!(strs(&v["block"]["generators"]), ["3*x_1 + y1_1"]);
}

#[test]
fn charpoly_of_a_generic_element() {
    let out = run(&["charpoly", "--input", &fixture("disc_quadratic.json"), "--element", "x1 + x2*t"]);
    let v = json_ok(&out);
    assert_eq!(strs(&v["coefficients"]), ["-2*x1", "x1^2 - 2*x2^2"]);
    assert_eq!(v["trace"], "2*x1");
}

#[test]
fn integrality_and_spectral_radius() {
    let f = fixture("disc_quadratic.json");
    let v = json_ok(&run(&["integrality", "--input", &f, "--element", "1/2 + t/2"]));
    assert_eq!(v["integral"], false);
    let v = json_ok(&run(&["integrality", "--input", &f, "--element", "3 + t"]));
    assert_eq!(v["integral"], true);
    let v = json_ok(&run(&["spectral", "--input", &f, "--element", "t"]));
    assert_eq!(v["spectral_radius"], "-1/2");
}

#[test]
fn spectral_witness_for_threshold_three() {
    let v = json_ok(&run(&["spectral", "--input", &fixture("example26.json")]));
    let w = &v["witness"];
    assert_eq!(w["k"], 4);
    assert_eq!(w["nilpotency_order"], 2);
    assert_eq!(w["lognorm_xk"], "4");
    assert_eq!(w["holds"], true);
    let v = json_ok(&run(&["spectral", "--input", &fixture("example26.json"), "--threshold", "-inf"]));
    assert_eq!(v["witness"]["k"], 1);
}

#[test]
fn fixed_points_of_frobenius() {
    let v = json_ok(&run(&["fixed-points", "--input", &fixture("descent_f9.json")]));
    assert_eq!(strs(&v["fixed"]["variables"]), ["u_1"]);
    assert_eq!(strs(&v["fixed"]["generators"]), ["u_1^2 + 1"]);
    assert_eq!(v["eliminated"][0]["variable"], "u_2");
    assert_eq!(v["eliminated"][0]["value"], "0");
    assert_eq!(strs(&v["action"]["elements"]), ["id", "frob"]);
}

#[test]
fn points_over_test_fields() {
    let v = json_ok(&run(&["points", "--input", &fixture("f4_cube_roots.json")]));
    let counts: Vec<u64> = v["fields"].as_array().unwrap().iter().map(|f| f["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, [2, 2]);
    let v = json_ok(&run(&["points", "--input", &fixture("f4_cube_roots.json"), "--restricted", "--field", "2"]));
    assert_eq!(v["fields"][0]["points"], serde_json::json!([["0", "1"], ["1", "1"]]));
}

#[test]
fn verify_suites_pass_on_fixtures() {
    for (suite, file) in [
        ("adjunction", "adjunction.json"),
        ("products", "products.json"),
        ("descent", "descent_f9.json"),
        ("example26", "example26.json"),
        ("sigma", "sigma.json"),
    ] {
        let v = json_ok(&run(&["verify", "--suite", suite, "--input", &fixture(file)]));
        assert_eq!(v["status"], "PASS", "{suite}");
        for row in v["rows"].as_array().unwrap() {
            assert!(row["identity"].is_string(), "{suite} row without identity");
        }
    }
}

#[test]
fn descent_golden_counts() {
    let v = json_ok(&run(&["verify", "--suite", "descent", "--input", &fixture("descent_f9.json")]));
    let golden: Vec<(u64, u64)> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["presentation"] == "two")
        .map(|r| (r["count_left"].as_u64().unwrap(), r["count_right"].as_u64().unwrap()))
        .collect();
    assert_eq!(golden, [(0, 0), (2, 2), (0, 0)]);
}

#[test]
fn adjunction_seed_one_has_ten_matches_per_extension() {
    let v = json_ok(&run(&["verify", "--suite", "adjunction", "--input", &fixture("adjunction.json"), "--seed", "1"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 31);
    assert_eq!(rows[0]["count_restricted"], 2);
    assert_eq!(rows[0]["count_source"], 2);
}

#[test]
fn verify_output_is_deterministic() {
    let args = ["verify", "--suite", "products", "--input", &fixture("products.json"), "--seed", "7"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("weilres-out-{}.json", std::process::id()));
    let p = path.to_string_lossy().into_owned();
    let out = run(&["verify", "--suite", "example26", "--input", &fixture("example26.json"), "--output", &p]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rows"][0]["k"], 4);
    std::fs::remove_file(path).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["restrict", "--input", &fixture("bad_key.json")]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope", "--input", &fixture("sigma.json")]).status.code(), Some(2));
    assert_eq!(run(&["restrict", "--input", "/nonexistent/doc.json"]).status.code(), Some(2));
    assert_eq!(run(&["points", "--input", &fixture("descent_f9.json"), "--field", "101"]).status.code(), Some(3));
    let doc = std::fs::read_to_string(fixture("descent_f9.json")).unwrap().replace("frobenius", "trivial");
    let out = run_stdin(&["verify", "--suite", "descent"], &doc);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "FAIL");
}

#[test]
fn wild_action_is_an_input_error() {
    let doc = r#"{"version": 1, "field": {"kind": "prime", "p": 2},
        "extension": {"minimal_polynomial": "t^2 + t + 1"},
        "presentations": [{"name": "x", "over": "field", "variables": ["u"], "generators": ["u + 1"]}]}"#;
    let out = run_stdin(&["fixed-points"], doc);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wild"));
    assert_eq!(run_stdin(&["fixed-points", "--allow-wild"], doc).status.code(), Some(0));
}

#[test]
fn schema_rejects_unknown_option_and_version() {
    let bad = r#"{"version": 1, "field": {"kind": "rational"}, "options": {"sed": 1}}"#;
    assert_eq!(run_stdin(&["verify", "--suite", "sigma"], bad).status.code(), Some(2));
    let bad = r#"{"version": 2, "field": {"kind": "rational"}}"#;
    assert_eq!(run_stdin(&["verify", "--suite", "sigma"], bad).status.code(), Some(2));
    let bad = r#"{"version": 1, "field": {"kind": "prime", "p": 3, "q": 9}}"#;
    assert_eq!(run_stdin(&["verify", "--suite", "sigma"], bad).status.code(), Some(2));
}
