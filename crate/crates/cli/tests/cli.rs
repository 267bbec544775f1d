use std::path::PathBuf;
use std::process::{Command, Output};

fn latvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latvar")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().to_string()).collect()
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("latvar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn singular_generator_exits_2() {
    let o = latvar(&["variance", "--lattice", "1,2,2,4", "--shape", "ball:1", "--radii", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("singular generator"));
}

#[test]
fn bad_input_exits_2() {
    for args in [
        &["variance", "--dim", "2", "--shape", "ball:1", "--radii", "2,1"][..],
        &["variance", "--dim", "2", "--shape", "ball:1", "--radii", "1", "--format", "xml"],
        &["variance", "--dim", "2", "--shape", "ball:1", "--radii", "1", "--routes", "mc"],
        &["constant", "--dim", "5"],
    ] {
        assert_eq!(latvar(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn interval_phi_column() {
    let o = latvar(&["variance", "--dim", "1", "--shape", "interval:1", "--radii", "0.1:10:0.1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let r = column(&text, "r");
    let phi = column(&text, "phi");
    assert_eq!(r.len(), 100);
    for (r, p) in r.iter().zip(&phi) {
        let r: f64 = r.parse().unwrap();
        let f = r - r.floor();
        let expect = 6.0 * f * (1.0 - f);
        assert!((p.parse::<f64>().unwrap() - expect).abs() < 1e-6, "r = {r}");
    }
    assert!(column(&text, "var_mc").iter().all(String::is_empty));
}

#[test]
fn unit_cube_has_no_fluctuation() {
    let o = latvar(&[
        "variance", "--dim", "3", "--shape", "cube", "--radii", "1", "--routes", "spectral,mc", "--seed", "3",
        "--samples", "500",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    for col in ["var_spectral", "var_mc"] {
        let v: f64 = column(&text, col)[0].parse().unwrap();
        assert!(v.abs() < 1e-12, "{col} = {v}");
    }
}

#[test]
fn same_seed_same_bytes() {
    let args = [
        "variance", "--dim", "2", "--shape", "ball:1", "--radii", "2:4:1", "--routes", "mc,spectral", "--seed", "42",
        "--samples", "2000",
    ];
    let a = latvar(&args);
    let b = latvar(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut other = args.to_vec();
    other[10] = "43";
    assert_ne!(latvar(&other).stdout, a.stdout);
}

#[test]
fn scenario_file_and_override() {
    let path = temp_path("scenario.json");
    std::fs::write(&path, r#"{"lattice": [1, 0, 0, 1], "shape": "ball:1", "radii": [1.5, 2.5], "format": "json"}"#)
        .unwrap();
    let p = path.to_str().unwrap();
    let o = latvar(&["variance", "--scenario", p]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert!(v[0]["var_mc"].is_null());

    let o = latvar(&["variance", "--scenario", p, "--format", "csv", "--radii", "3"]);
    assert!(o.status.success());
    assert_eq!(column(&stdout(&o), "r"), vec!["3.0000000000000000e0"]);

    std::fs::write(&path, r#"{"shape": "ball:1", "colour": "red"}"#).unwrap();
    assert_eq!(latvar(&["variance", "--scenario", p]).status.code(), Some(2));
}

#[test]
fn constant_for_integers() {
    let o = latvar(&["constant", "--dim", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["c_t", "epstein_value", "truncation_radius", "tail_bound"]);
    assert!((v["c_t"].as_f64().unwrap() - 1.0 / 12.0).abs() < 1e-12);
}

#[test]
fn output_file() {
    let path = temp_path("phi.csv");
    let o = latvar(&["phi", "--dim", "1", "--shape", "interval:1", "--radii", "0.5", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let phi: f64 = column(&text, "phi")[0].parse().unwrap();
    assert!((phi - 1.5).abs() < 1e-9);
}

#[test]
fn kernel_check_passes_by_default() {
    let o = latvar(&["kernel-check"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 3 * 41);
    let strict = latvar(&["kernel-check", "--tau", "-1,1", "--tol", "1e-30"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn covariogram_table() {
    let o = latvar(&["covariogram", "--shape", "box:0.5,0.5", "--t", "0,0.5", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v[0]["gamma_axis"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v[1]["gamma_axis"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}
