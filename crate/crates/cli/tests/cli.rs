use apfire::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("apfire").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn fire_example() {
    let (code, out, _) = call(&["fire", "--preset", "ex4_3", "--sigma", "1", "--t", "0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("t,phi,psi,residual_bound\n"));
    let rows = csv_rows(&out);
    let phi: f64 = rows[0][1].parse().unwrap();
    assert!((phi - std::f64::consts::LN_2).abs() < 1e-9);
}

#[test]
fn rate_example() {
    let (code, out, _) = call(&["rate", "--signal", "const:1", "--sigma", "0", "--n", "10"]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    assert_eq!(rows[0][0], "10");
    assert!((rows[0][1].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn mean_example_reports_oscillation() {
    let (code, out, _) = call(&["mean", "--preset", "ex3_3", "--schedule", "pow2tower:4", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"]["kind"], "oscillating");
    assert_eq!(v["rows"].as_array().unwrap().len(), 8);
    let (m1, m2) = (v["verdict"]["m1"].as_f64().unwrap(), v["verdict"]["m2"].as_f64().unwrap());
    assert!((m1 - m2).abs() > 0.5);
}

#[test]
fn csv_round_trips_exact_doubles() {
    let (code, out, _) = call(&["eval", "--preset", "ex6_4", "--window", "-3.3:7.1", "--points", "257"]);
    assert_eq!(code, 0);
    let f = apfire_core::presets::ex6_4();
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 257);
    for row in rows {
        let t: f64 = row[0].parse().unwrap();
        let v: f64 = row[1].parse().unwrap();
        assert_eq!(v.to_bits(), f.eval(t).to_bits());
    }
}

#[test]
fn output_is_deterministic() {
    let runs = [
        vec!["fire", "--preset", "mu_no_mu", "--window", "-2:2", "--points", "200"],
        vec!["scan", "--preset", "ex6_4", "--eps", "0.5", "--taus", "linear:1:60:60", "--window", "0:20"],
        vec!["haar", "--preset", "ex6_13_f", "--n", "1,2,4,8,16,32", "--format", "json"],
    ];
    for args in runs {
        let (c1, a, _) = call(&args);
        let (c2, b, _) = call(&args);
        assert_eq!((c1, c2), (0, 0), "{args:?}");
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("apfire-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("traj.csv");
    let args = ["traj", "--preset", "ex6_13_f", "--n", "6"];
    let (_, stdout, _) = call(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let (code, empty, _) = call(&with_file);
    assert_eq!(code, 0);
    assert!(empty.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn json_signal_documents() {
    let doc = r#"{"kind":"sum","children":[{"kind":"const","value":2},{"kind":"shift","tau":0.5,"child":{"kind":"dyadic","name":"mu_no_mu"}}]}"#;
    let (code, out, err) = call(&["eval", "--signal", doc, "--t", "0,0.25"]);
    assert_eq!(code, 0, "{err}");
    let rows = csv_rows(&out);
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 3.0);
}

#[test]
fn exit_codes() {
    let (code, _, err) = call(&["fire", "--preset", "nope", "--t", "0"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: unknown preset"));
    assert_eq!(call(&["fire"]).0, 1);
    assert_eq!(call(&["bogus"]).0, 1);
    assert_eq!(call(&["--help"]).0, 0);

    // 1 − cos s reaches 1 at π/2 and never again, so the next spike is missing
    let half = r#"{"kind":"trig","terms":[[0.5,0,1]]}"#;
    let (code, _, err) = call(&["fire", "--signal", half, "--t", "1.5707963267948966", "--horizon", "20"]);
    assert_eq!(code, 2, "{err}");
    assert_eq!(err.lines().count(), 1);

    let (code, _, err) =
        call(&["traj", "--signal", r#"{"kind":"trig","terms":[[1,0,1]]}"#, "--n", "3", "--horizon", "20"]);
    assert_eq!(code, 2);
    assert!(err.contains("spike 2"), "{err}");

    let (code, _, err) = call(&["scan", "--preset", "ex4_3", "--mode", "mu", "--eps", "0.1", "--taus", "1,2"]);
    assert_eq!(code, 1);
    assert!(err.contains("--eta"));
}

#[test]
fn verify_listing_and_filtering() {
    let (code, out, _) = call(&["verify", "--list"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() >= 12);
    assert!(out.lines().any(|l| l.starts_with("c12\t")));
    let (code, out, _) = call(&["verify", "--only", "examples"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().all(|l| l.starts_with("PASS")));
    let (code, _, _) = call(&["verify", "--only", "nothing"]);
    assert_eq!(code, 1);
}

#[test]
fn scan_summary_and_haar_tables() {
    let (code, out, err) = call(&["scan", "--preset", "ex4_3", "--eps", "0.1", "--taus", "0,2,4,6,3"]);
    assert_eq!(code, 0);
    assert!(err.contains("# accepted: 4"));
    assert_eq!(csv_rows(&out)[4][2], "false");

    let (code, out, _) = call(&["haar", "--signal", "const:1.5", "--n", "4", "--cells", "0:1", "--coeffs"]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0][2].parse::<f64>().unwrap(), 1.5);
}
