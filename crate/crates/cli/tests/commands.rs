use std::path::Path;
use std::process::{Command, Output};

use geqie::model::ImageArray;
use geqie_cli::image_io::{self, Encoding};

fn geqie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geqie"))
        .args(args)
        .env_remove("GEQIE_MAX_QUBITS")
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn gray_image(dir: &Path, name: &str, size: usize, seed: u64) -> std::path::PathBuf {
    let path = dir.join(name);
    let img = ImageArray::random_u8(vec![size, size], 1, seed).unwrap();
    image_io::write(&path, &img, Encoding::Binary).unwrap();
    path
}

#[test]
fn encode_frqi_two_by_two() {
    let dir = tempfile::tempdir().unwrap();
    let img = gray_image(dir.path(), "a.pgm", 2, 1);
    let state = dir.path().join("a.gqs");
    let unitary = dir.path().join("a.gqu");
    let out = geqie(&[
        "encode",
        "--method",
        "frqi",
        "--input",
        p(&img),
        "--output-state",
        p(&state),
        "--output-unitary",
        p(&unitary),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let bytes = std::fs::read(&state).unwrap();
    assert_eq!(&bytes[..8], b"GQS1\x03\x00\x00\x00");
    assert_eq!(bytes.len(), 8 + 8 * 16);
    assert!(dir.path().join("a.gqu.json").exists());
}

#[test]
fn capacity_exit_code_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let img = gray_image(dir.path(), "b.pgm", 8, 2);
    let state = dir.path().join("b.gqs");
    let out = geqie(&[
        "encode",
        "--method",
        "neqr",
        "--input",
        p(&img),
        "--output-state",
        p(&state),
    ]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("14"));
    let out = geqie(&[
        "encode",
        "--method",
        "neqr",
        "--input",
        p(&img),
        "--output-state",
        p(&state),
        "--max-qubits",
        "14",
    ]);
    assert_eq!(code(&out), 0);
    let env = Command::new(env!("CARGO_BIN_EXE_geqie"))
        .args([
            "encode",
            "--method",
            "neqr",
            "--input",
            p(&img),
            "--output-state",
            p(&state),
        ])
        .env("GEQIE_MAX_QUBITS", "14")
        .output()
        .unwrap();
    assert_eq!(code(&env), 0);
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let img = gray_image(dir.path(), "c.pgm", 4, 3);
    let args = |out: &str| {
        vec![
            "simulate".to_string(),
            "--method".into(),
            "frqi".into(),
            "--input".into(),
            p(&img).into(),
            "--shots".into(),
            "1024".into(),
            "--seed".into(),
            "7".into(),
            "--output-counts".into(),
            out.into(),
        ]
    };
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for f in [&a, &b] {
        let argv = args(p(f));
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert_eq!(code(&geqie(&argv)), 0);
    }
    let x = std::fs::read(&a).unwrap();
    assert_eq!(x, std::fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(v["n_qubits"], 5);
    assert_eq!(v["shots"], 1024);
    let total: u64 = v["counts"]
        .as_object()
        .unwrap()
        .values()
        .map(|c| c.as_u64().unwrap())
        .sum();
    assert_eq!(total, 1024);
    assert!(v["counts"]
        .as_object()
        .unwrap()
        .keys()
        .all(|k| k.len() == 5));
}

#[test]
fn full_global_noise_gives_uniform_probabilities() {
    let dir = tempfile::tempdir().unwrap();
    let img = gray_image(dir.path(), "d.pgm", 2, 4);
    let out = geqie(&[
        "simulate",
        "--method",
        "frqi",
        "--input",
        p(&img),
        "--shots",
        "0",
        "--lambda",
        "1",
        "--noise-mode",
        "global",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let probs = v["probabilities"].as_object().unwrap();
    assert_eq!(probs.len(), 8);
    assert!(probs
        .values()
        .all(|p| (p.as_f64().unwrap() - 0.125).abs() < 1e-12));
}

#[test]
fn density_modes_refuse_wide_registers() {
    let dir = tempfile::tempdir().unwrap();
    let img = gray_image(dir.path(), "e.pgm", 8, 5);
    let base = [
        "simulate",
        "--method",
        "neqr",
        "--input",
        p(&img),
        "--max-qubits",
        "14",
        "--lambda",
        "0.1",
    ];
    let out = geqie(&[&base[..], &["--noise-mode", "per-qubit"]].concat());
    assert_eq!(code(&out), 3);
    let out = geqie(
        &[
            &base[..],
            &["--noise-mode", "trajectories", "--shots", "4096"],
        ]
        .concat(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn neqr_exact_retrieval_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let img = gray_image(dir.path(), "f.pgm", 4, 6);
    let counts = dir.path().join("f.json");
    let back = dir.path().join("f_out.pgm");
    assert_eq!(
        code(&geqie(&[
            "simulate",
            "--method",
            "neqr",
            "--input",
            p(&img),
            "--shots",
            "0",
            "--output-counts",
            p(&counts)
        ])),
        0
    );
    let out = geqie(&[
        "retrieve",
        "--counts",
        p(&counts),
        "--output-image",
        p(&back),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(&img).unwrap(), std::fs::read(&back).unwrap());
}

#[test]
fn frqi_full_noise_retrieval_is_near_constant() {
    let dir = tempfile::tempdir().unwrap();
    let img = gray_image(dir.path(), "g.pgm", 4, 7);
    let counts = dir.path().join("g.json");
    let back = dir.path().join("g_out.pgm");
    assert_eq!(
        code(&geqie(&[
            "simulate",
            "--method",
            "frqi",
            "--input",
            p(&img),
            "--shots",
            "0",
            "--lambda",
            "1",
            "--output-counts",
            p(&counts)
        ])),
        0
    );
    assert_eq!(
        code(&geqie(&[
            "retrieve",
            "--method",
            "frqi",
            "--dims",
            "4x4",
            "--counts",
            p(&counts),
            "--output-image",
            p(&back)
        ])),
        0
    );
    let out = image_io::read(&back).unwrap().to_u8();
    assert!(out.iter().all(|&v| v == out[0]));
}

#[test]
fn bad_input_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let counts = dir.path().join("bad.json");
    std::fs::write(&counts, "{ not json").unwrap();
    let out = geqie(&[
        "retrieve",
        "--method",
        "frqi",
        "--dims",
        "2x2",
        "--counts",
        p(&counts),
        "--output-image",
        p(&dir.path().join("x.pgm")),
    ]);
    assert_eq!(code(&out), 2);
    assert_eq!(
        code(&geqie(&[
            "encode",
            "--method",
            "nope",
            "--input",
            "x",
            "--output-state",
            "y"
        ])),
        2
    );
    assert_eq!(
        code(&geqie(&[
            "encode",
            "--method",
            "frqi",
            "--input",
            p(&dir.path().join("missing.pgm")),
            "--output-state",
            "y"
        ])),
        2
    );

    let img = gray_image(dir.path(), "h.pgm", 2, 8);
    let good = dir.path().join("h.json");
    assert_eq!(
        code(&geqie(&[
            "simulate",
            "--method",
            "frqi",
            "--input",
            p(&img),
            "--shots",
            "64",
            "--output-counts",
            p(&good)
        ])),
        0
    );
    let out = geqie(&[
        "retrieve",
        "--method",
        "frqi",
        "--dims",
        "4x4",
        "--counts",
        p(&good),
        "--output-image",
        p(&dir.path().join("y.pgm")),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_reports_checks() {
    let out = geqie(&["verify", "--method", "frqi", "--dims", "4x4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("position-injective") && !text.contains("FAIL"));
}

#[test]
fn benchmark_writes_three_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("bench");
    let out = geqie(&[
        "benchmark",
        "--methods",
        "frqi,neqr",
        "--sizes",
        "2",
        "--images",
        "2",
        "--lambdas",
        "0,1",
        "--output-dir",
        p(&out_dir),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["records.csv", "summary.csv", "plotdata.csv", "config.json"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
    let records = std::fs::read_to_string(out_dir.join("records.csv")).unwrap();
    assert_eq!(records.lines().count(), 1 + 2 * 2 * 2);
    assert!(records
        .lines()
        .next()
        .unwrap()
        .starts_with("method,size,lambda,shots,image_id"));
}

#[test]
fn cosmic_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("cloud.txt");
    let grid = dir.path().join("grid.gqv");
    let norm = dir.path().join("norm.gqv");
    assert_eq!(
        code(&geqie(&[
            "cosmic",
            "generate",
            "--output",
            p(&pts),
            "--points",
            "5000"
        ])),
        0
    );
    assert!(dir.path().join("cloud.txt.json").exists());
    assert_eq!(
        code(&geqie(&[
            "cosmic",
            "voxelize",
            "--input",
            p(&pts),
            "--resolution",
            "8",
            "--output",
            p(&grid)
        ])),
        0
    );
    assert_eq!(
        code(&geqie(&[
            "cosmic",
            "normalize",
            "--input",
            p(&grid),
            "--scheme",
            "10-mean",
            "--output",
            p(&norm)
        ])),
        0
    );
    let hist = geqie(&["cosmic", "histogram", "--input", p(&norm), "--bins", "4"]);
    assert_eq!(code(&hist), 0);
    let text = String::from_utf8_lossy(&hist.stdout);
    let total: u64 = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 512);
    let rt = geqie(&["cosmic", "roundtrip", "--input", p(&grid), "--shots", "0"]);
    assert_eq!(code(&rt), 0, "{}", String::from_utf8_lossy(&rt.stderr));
    assert!(String::from_utf8_lossy(&rt.stdout).contains("PCC normalized 1.000000"));
    assert_eq!(
        code(&geqie(&[
            "cosmic",
            "normalize",
            "--input",
            p(&norm),
            "--output",
            p(&norm)
        ])),
        2
    );
    assert_eq!(
        code(&geqie(&[
            "cosmic",
            "voxelize",
            "--input",
            p(&pts),
            "--resolution",
            "6",
            "--output",
            p(&grid)
        ])),
        2
    );
}
