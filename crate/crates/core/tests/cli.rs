use std::path::Path;
use std::process::{Command, Output};

use inverse_fracture::io::{read_field, FieldFile};
use inverse_fracture::material::builtin_lj;
use inverse_fracture::regularized::{eval_e_eps, eval_v_eps};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_inverse-fracture"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).arg("--out-dir").arg(dir).output().expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn cwstar_prints_constant() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["cwstar"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.377123616"), "{text}");
}

#[test]
fn minimize_field_round_trips_energy() {
    let dir = tempfile::tempdir().unwrap();
    for (functional, mu, tag) in [("E", "0", "I"), ("V", "20", "V")] {
        let args = [
            "minimize", "--functional", functional, "--lambda", "1.5", "--mu", mu, "--epsilon", "0.05",
            "--intervals", "200", "--max-iterations", "500", "--start", "random-0",
            "--formats", "csv,json",
        ];
        let out = run(&args, dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let stem = format!("minimize_{tag}_lambda1.5_mu{mu}_eps0.05");
        let summary = json(&dir.path().join(format!("{stem}.json")));
        let reported = summary["energy"].as_f64().unwrap();
        let field = match read_field(&dir.path().join(format!("{stem}.field"))).unwrap() {
            FieldFile::Grid(f) => f,
            other => panic!("unexpected kind {}", other.kind_name()),
        };
        let model = builtin_lj();
        let recomputed = if tag == "I" {
            eval_e_eps(field.values(), 1.5, 0.05, &model)
        } else {
            eval_v_eps(field.values(), 1.5, 0.05, 20.0, &model).unscaled
        };
        assert!((recomputed - reported).abs() <= 1e-12, "{tag}: {recomputed} vs {reported}");
    }
}

#[test]
fn same_config_gives_identical_csv() {
    let config = "[sweep]\nfunctional = \"V\"\nlambda = 1.5\nmu = 50.0\nepsilons = [0.08, 0.04]\n\
                  intervals = 200\nmax_iterations = 300\nseed = 7\n\n[output]\nformats = [\"csv\"]\n";
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.toml");
        std::fs::write(&cfg, config).unwrap();
        let out = run(&["sweep", "--config", cfg.to_str().unwrap()], dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(std::fs::read(dir.path().join("sweep_V_lambda1.5_mu50.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn invalid_inputs_exit_with_error() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["sharp", "--lambda", "-1.5", "--mu", "200"],
        &["minimize", "--functional", "E", "--lambda", "1.5", "--epsilon", "-0.1"],
        &["minimize", "--functional", "E", "--lambda", "1.5", "--epsilon", "0.1", "--intervals", "-10"],
        &["minimize", "--functional", "V", "--lambda", "1.5", "--epsilon", "0.1", "--mu", "1", "--k", "1"],
        &["no-such-command"],
    ];
    for args in cases {
        let out = run(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[sharp]\nlambda = 1.5\nmu = 200.0\nlamda = 2.0\n").unwrap();
    let out = run(&["sharp", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lamda"));
}

#[test]
fn strict_flags_unconverged_solve() {
    let dir = tempfile::tempdir().unwrap();
    let base = [
        "minimize", "--functional", "V", "--lambda", "1.5", "--mu", "200", "--epsilon", "0.02",
        "--intervals", "200", "--max-iterations", "2", "--start", "random-0",
    ];
    let lenient = run(&base, dir.path());
    assert_eq!(lenient.status.code(), Some(0));
    let mut strict = base.to_vec();
    strict.push("--strict");
    assert_eq!(run(&strict, dir.path()).status.code(), Some(3));
}

#[test]
fn sharp_then_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["sharp", "--lambda", "1.5", "--mu", "200", "--formats", "csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2.02932779986"), "{text}");
    let field = dir.path().join("sharp_lambda1.5_mu200_variantA.field");
    assert!(field.exists());
    let out = run(&["reconstruct", "--input", field.to_str().unwrap(), "--formats", "csv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("reconstruct_sharp_lambda1.5_mu200_variantA.csv").exists());
}
