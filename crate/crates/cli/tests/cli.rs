use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spinstar"));
    c.env_remove("SPINSTAR_THREADS");
    c
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(c: &mut Command) -> Output {
    c.output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn evolve_csv_columns() {
    let o = run(bin().args(["evolve", "--config"]).arg(configs().join("small.json")));
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(header, "t,x1,y1,z1,x2,y2,z2,D_exact");
    assert_eq!(text.lines().count(), 502);
}

#[test]
fn envelope_over_bursts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("revivals.csv");
    let o = run(bin().args(["envelope", "--config"]).arg(configs().join("revivals.conf")).arg("--out").arg(&out));
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,D_exact,env_upper,env_lower");
    for l in lines.take(5000) {
        let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(v[3] <= v[2] && (0.0..=1.0 + 1e-12).contains(&v[1]));
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("revivals_manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "envelope");
    assert!(manifest["wall_time_s"].is_null());
}

#[test]
fn repeated_runs_are_identical() {
    let once = |threads: &str| {
        let o = run(bin()
            .args(["timescales", "--format", "json", "--config"])
            .arg(configs().join("revivals.conf"))
            .env("SPINSTAR_THREADS", threads));
        assert!(o.status.success(), "{}", stderr(&o));
        o.stdout
    };
    let a = once("1");
    assert_eq!(a, once("1"));
    assert_eq!(a, once("2"));
}

#[test]
fn config_errors_name_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "n_bath = 10\ng = 1\nt_bath = -3\n").unwrap();
    let o = run(bin().args(["evolve", "--config"]).arg(&cfg));
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("line 3") && e.contains("t_bath"), "{e}");

    std::fs::write(&cfg, "n_bath = 10\nbogus = 1\n").unwrap();
    let e = stderr(&run(bin().args(["evolve", "--config"]).arg(&cfg)));
    assert!(e.contains("line 2") && e.contains("bogus") && e.contains("unknown key"), "{e}");
}

#[test]
fn verify_refuses_large_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("v.conf");
    std::fs::write(&cfg, "n_bath = 13\n").unwrap();
    let o = run(bin().args(["verify", "--config"]).arg(&cfg));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("13"), "{}", stderr(&o));
}

#[test]
fn bad_thread_variable_is_rejected() {
    let o = run(bin().arg("rates").env("SPINSTAR_THREADS", "many"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("SPINSTAR_THREADS"));
}

#[test]
fn rates_json_document() {
    let o = run(bin().args(["rates", "--format", "json", "--precision", "6"]));
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cols: Vec<&str> = doc["series"][0]["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    for c in ["omega", "gamma_d", "gamma_minus", "gamma_plus", "any_negative", "singular"] {
        assert!(cols.contains(&c), "{cols:?}");
    }
    assert!(doc["reports"]["rates"].is_object());
}
