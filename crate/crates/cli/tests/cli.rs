use std::path::{Path, PathBuf};

use serde_json::Value;

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn scenario(name: &str) -> String {
    repo().join("scenarios").join(name).to_string_lossy().into_owned()
}

/// Run the CLI into a temp file; returns (exit code, output text).
fn run(args: &[&str]) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let mut argv = vec!["gravsig".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.push("--out".into());
    argv.push(out.to_string_lossy().into_owned());
    let code = gravsig_cli::run(argv);
    let text = std::fs::read_to_string(&out).unwrap_or_default();
    (code, text)
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

// Enough of JSON Schema for the shipped files: type, properties, required,
// additionalProperties, items, enum and local $ref.
fn validate(v: &Value, s: &Value, root: &Value, path: &str) -> Result<(), String> {
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        let key = r
            .strip_prefix("#/$defs/")
            .ok_or_else(|| format!("unsupported ref {r}"))?;
        return validate(v, &root["$defs"][key], root, path);
    }
    if let Some(opts) = s.get("enum").and_then(Value::as_array) {
        if !opts.contains(v) {
            return Err(format!("{path}: {v} not in {opts:?}"));
        }
    }
    let ty = s.get("type").and_then(Value::as_str);
    let ok = match ty {
        None => true,
        Some("object") => v.is_object(),
        Some("array") => v.is_array(),
        Some("number") => v.is_number(),
        Some("integer") => v.is_u64() || v.is_i64(),
        Some("string") => v.is_string(),
        Some("boolean") => v.is_boolean(),
        Some(t) => return Err(format!("unsupported type {t}")),
    };
    if !ok {
        return Err(format!("{path}: expected {}, got {v}", ty.unwrap()));
    }
    if let Some(obj) = v.as_object() {
        let props = s.get("properties").and_then(Value::as_object);
        for req in s.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = req.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{path}: missing {key}"));
            }
        }
        for (k, val) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(sub) => validate(val, sub, root, &format!("{path}.{k}"))?,
                None if s.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{path}: unexpected key {k}"))
                }
                None => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (s.get("items"), v.as_array()) {
        for (i, x) in arr.iter().enumerate() {
            validate(x, items, root, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

fn strip_nulls(v: Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(
            m.into_iter()
                .filter(|(_, x)| !x.is_null())
                .map(|(k, x)| (k, strip_nulls(x)))
                .collect(),
        ),
        other => other,
    }
}

fn schema(name: &str) -> Value {
    let text = std::fs::read_to_string(repo().join("schemas").join(format!("{name}.schema.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn constants_csv_matches_printed_values() {
    let (code, text) = run(&["constants"]);
    assert_eq!(code, 0);
    let (h, rows) = csv_rows(&text);
    assert_eq!(&h[..4], ["name", "derived", "printed", "rel_err"]);
    let (ie, ip, ir, ifull) = (
        col(&h, "documented_exception"),
        col(&h, "printed"),
        col(&h, "rel_err"),
        col(&h, "full_chain"),
    );
    let mut exceptions = Vec::new();
    for r in &rows {
        if r[ie] == "true" {
            exceptions.push(r[0].clone());
            continue;
        }
        let printed: f64 = r[ip].parse().unwrap();
        let stepwise: f64 = r[ir].parse().unwrap();
        let full: f64 = r[ifull].parse().unwrap();
        // a two-figure printed slope sits between the stepwise and full chains
        let best = stepwise.min(((full - printed) / printed).abs());
        assert!(best < 0.005, "{}: {stepwise} / {full}", r[0]);
    }
    assert_eq!(exceptions, ["bohr_radius_equal_masses"]);
}

#[test]
fn trajectory_samples_and_endpoints() {
    let (code, text) = run(&["trajectory", "--samples", "1001"]);
    assert_eq!(code, 0);
    let (h, rows) = csv_rows(&text);
    assert_eq!(h, ["t", "x", "v"]);
    assert_eq!(rows.len(), 1001);
    let x = |i: usize| rows[i][1].parse::<f64>().unwrap();
    assert_eq!(x(0), 1.0);
    assert!(x(1000).abs() < 1e-12);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["feasibility", "--format", "json"],
        vec!["sweep", "--param", "E0", "--range", "0.01:1", "--points", "50"],
        vec!["visibility", "--samples", "7", "--format", "json"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.0, 0);
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn single_point_sweep_equals_feasibility() {
    let sc = scenario("two_level.toml");
    let (_, direct) = run(&["feasibility", "--scenario", &sc, "--format", "json"]);
    let (_, swept) = run(&[
        "sweep",
        "--scenario",
        &sc,
        "--param",
        "m",
        "--range",
        "0.1:0.1",
        "--points",
        "1",
        "--format",
        "json",
    ]);
    let direct: Value = serde_json::from_str(&direct).unwrap();
    let swept: Value = serde_json::from_str(&swept).unwrap();
    assert_eq!(swept["points"][0]["report"], direct);
}

fn flip(text: &str, column: &str) -> Vec<(f64, f64)> {
    let (h, rows) = csv_rows(text);
    let (iv, ic) = (col(&h, "value"), col(&h, column));
    rows.windows(2)
        .filter(|w| w[0][ic] != w[1][ic])
        .map(|w| (w[0][iv].parse().unwrap(), w[1][iv].parse().unwrap()))
        .collect()
}

#[test]
fn mass_sweep_crosses_time_resolution_ceiling() {
    let sc = scenario("rest_mass.toml");
    let (code, text) = run(&[
        "sweep",
        "--scenario",
        &sc,
        "--param",
        "m",
        "--range",
        "0.01:1",
        "--points",
        "100",
    ]);
    assert_eq!(code, 0);
    let f = flip(&text, "time_resolution_ok");
    assert_eq!(f.len(), 1);
    assert!(f[0].0 < 0.143 && 0.143 < f[0].1, "{f:?}");
}

#[test]
fn energy_sweep_flips_verdict() {
    let sc = scenario("two_level.toml");
    let (_, text) = run(&[
        "sweep",
        "--scenario",
        &sc,
        "--param",
        "E0",
        "--range",
        "0.01:1",
        "--points",
        "100",
    ]);
    let f = flip(&text, "verdict");
    assert_eq!(f.len(), 1);
    assert!(f[0].0 < 0.143 && 0.143 < f[0].1, "{f:?}");
}

#[test]
fn separation_sweep_crosses_5848() {
    let sc = scenario("ceiling.json");
    let (_, text) = run(&[
        "sweep",
        "--scenario",
        &sc,
        "--param",
        "d_over_D",
        "--range",
        "1:10",
        "--points",
        "10000",
    ]);
    let f = flip(&text, "phase_reachability_ok");
    assert_eq!(f.len(), 1);
    assert!(f[0].0 < 5.848 && 5.848 < f[0].1 + 1e-3, "{f:?}");
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    };
    let unknown = write("a.toml", "m = 1.0\nwidth = 2.0\n");
    let syntax = write("b.json", "{\"m\": 1.0,, }");
    let missing = write("c.toml", "m = 1.0\n");
    let wrong_type = write("d.toml", "m = \"heavy\"\n");
    for p in [&unknown, &syntax, &missing, &wrong_type] {
        assert_eq!(run(&["feasibility", "--scenario", p]).0, 2, "{p}");
    }
    assert_eq!(run(&["sweep", "--param", "m", "--range", "1:0"]).0, 2);
    assert_eq!(run(&["sweep", "--param", "colour", "--range", "0:1"]).0, 2);
    assert_eq!(run(&["teleport"]).0, 2);
    assert_eq!(run(&["trajectory", "--samples", "1"]).0, 2);
    let e = gravsig_cli::parse_scenario("m = 1.0\nwidth = 2.0\n", false)
        .unwrap_err()
        .to_string();
    assert!(e.contains("line 2") && e.contains("width"), "{e}");
}

#[test]
fn json_outputs_match_schemas() {
    let cases = [
        ("trajectory", "trajectory"),
        ("visibility", "visibility"),
        ("phases", "phases"),
        ("atom", "atom"),
        ("rates", "rates"),
        ("graviton", "graviton"),
        ("feasibility", "report"),
        ("constants", "constants"),
    ];
    for (cmd, name) in cases {
        let (code, text) = run(&[cmd, "--format", "json", "--samples", "11"]);
        assert_eq!(code, 0, "{cmd}");
        let s = schema(name);
        validate(&serde_json::from_str(&text).unwrap(), &s, &s, cmd).unwrap();
    }
    let (_, text) = run(&[
        "sweep", "--param", "tau_f", "--range", "0.5:2", "--points", "3", "--format", "json",
    ]);
    let s = schema("sweep");
    validate(&serde_json::from_str(&text).unwrap(), &s, &s, "sweep").unwrap();

    let s = schema("scenario");
    for f in ["two_level.toml", "rest_mass.toml", "hydrogen_si.toml", "ceiling.json"] {
        let text = std::fs::read_to_string(scenario(f)).unwrap();
        let cfg = gravsig_cli::parse_scenario(&text, f.ends_with(".json")).unwrap();
        validate(&strip_nulls(serde_json::to_value(&cfg).unwrap()), &s, &s, f).unwrap();
    }
}

#[test]
fn si_hydrogen() {
    let sc = scenario("hydrogen_si.toml");
    let (code, text) = run(&["atom", "--scenario", &sc, "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    let er = v["E_R_eV"].as_f64().unwrap();
    assert!(((er - 13.6057) / 13.6057).abs() < 1e-3, "{er}");
    let a0 = v["a0"].as_f64().unwrap();
    assert!(((a0 - 5.29465e-11) / 5.29465e-11).abs() < 1e-4, "{a0}");

    let (_, text) = run(&["rates", "--scenario", &sc, "--format", "json"]);
    let r: Value = serde_json::from_str(&text).unwrap();
    for key in ["gamma_spo", "gamma_emi", "gamma_abs", "lifetime", "stable"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    // n = 0: emission is the spontaneous rate, absorption vanishes
    assert_eq!(r["gamma_emi"], r["gamma_spo"]);
    assert_eq!(r["gamma_abs"].as_f64(), Some(0.0));
}

#[test]
fn graviton_table() {
    let (code, text) = run(&["graviton"]);
    assert_eq!(code, 0);
    let (h, rows) = csv_rows(&text);
    assert_eq!(&h[..3], ["l_i", "l_f", "allowed"]);
    assert_eq!(rows.len(), 25);
    for r in rows {
        let (li, lf): (i64, i64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        assert_eq!(r[2] == "true", (li - lf).abs() == 2);
    }
}

#[test]
fn unit_mode_flag_overrides_file() {
    let sc = scenario("two_level.toml");
    let (_, planck) = run(&["phases", "--scenario", &sc]);
    let (code, si) = run(&["phases", "--scenario", &sc, "--unit-mode", "si"]);
    assert_eq!(code, 0);
    // the same numbers read as SI values describe a different experiment
    assert_ne!(planck, si);
}

#[test]
fn selftest_passes() {
    let (code, text) = run(&["selftest", "--seed", "5"]);
    let (_, rows) = csv_rows(&text);
    let failed: Vec<_> = rows.iter().filter(|r| r[1] != "true").collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert_eq!(code, 0);
    assert!(rows.len() >= 20);
}
