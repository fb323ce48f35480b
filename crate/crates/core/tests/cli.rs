mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::*;
use trpca::experiments::{background_fixture, low_rank_image};
use trpca::io::{load_frames, quantize, read_tns, save_frames, save_ppm, write_tns};
use trpca::solver::default_lambda;
use trpca::Tensor3;

fn trpca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trpca"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_lists_flags() {
    let o = trpca(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    for sub in ["decompose", "grid", "denoise", "background"] {
        assert!(stdout(&o).contains(sub), "{sub}");
    }
    let o = trpca(&["grid", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    for flag in [
        "--ranks",
        "--sparsities",
        "--trials",
        "--method",
        "--lambda",
        "--mu1",
        "--eps",
        "--kmax",
        "--seed",
        "--config",
        "--timing",
    ] {
        assert!(stdout(&o).contains(flag), "{flag}");
    }
}

#[test]
fn decompose_zero_tensor() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.tns");
    write_tns(&input, &Tensor3::zeros(dims(6, 5, 4))).unwrap();
    let prefix = dir.path().join("run");
    let o = trpca(&[
        "decompose",
        "--input",
        s(&input),
        "--out-prefix",
        s(&prefix),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("method = tnf\n"));
    assert!(stdout(&o).contains("lambda = 2e-4\n"));
    assert!(read_tns(dir.path().join("run.L.tns")).unwrap().is_zero());
    assert!(read_tns(dir.path().join("run.E.tns")).unwrap().is_zero());
    let trace = fs::read_to_string(dir.path().join("run.trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 2);

    let o = trpca(&[
        "decompose",
        "--input",
        s(&input),
        "--method",
        "tnf+",
        "--out-prefix",
        s(&prefix),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let want = format!("lambda = {:e}\n", default_lambda(dims(6, 5, 4)));
    assert!(stdout(&o).contains(&want), "{}", stdout(&o));
    assert!(stdout(&o).contains("mu3 = "));
}

#[test]
fn decompose_reports_non_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.tns");
    write_tns(&input, &gaussian(dims(8, 8, 4), 1)).unwrap();
    let o = trpca(&[
        "decompose",
        "--input",
        s(&input),
        "--method",
        "tnn",
        "--kmax",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(dir.path().join("x.L.tns").exists());
}

#[test]
fn decompose_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.tns");
    write_tns(&input, &gaussian(dims(10, 9, 5), 4)).unwrap();
    let mut outs = Vec::new();
    for run in ["a", "b"] {
        let prefix = dir.path().join(run);
        let o = trpca(&[
            "decompose",
            "--input",
            s(&input),
            "--method",
            "tnf+",
            "--kmax",
            "30",
            "--out-prefix",
            s(&prefix),
        ]);
        assert!(o.status.code() == Some(0) || o.status.code() == Some(2));
        outs.push(
            [".L.tns", ".E.tns", ".trace.csv"]
                .map(|ext| fs::read(dir.path().join(format!("{run}{ext}"))).unwrap()),
        );
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    for args in [
        vec!["grid", "--trials", "0", "--out", s(&out)],
        vec!["grid", "--ranks", "1:0:3", "--out", s(&out)],
        vec!["grid", "--dims", "4x4", "--out", s(&out)],
        vec!["grid", "--method", "rpca", "--out", s(&out)],
        vec!["grid", "--bogus"],
        vec!["decompose", "--input", "/nonexistent/x.tns"],
        vec!["frobnicate"],
    ] {
        let o = trpca(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
    assert!(!out.exists());
}

#[test]
fn grid_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let o = trpca(&[
        "grid",
        "--method",
        "tnn",
        "--ranks",
        "1",
        "--sparsities",
        "0.05:0.05:0.1",
        "--trials",
        "2",
        "--dims",
        "12x12x4",
        "--out",
        s(&out),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "rank,sparsity,success_rate,mean_rse,mean_iters");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,0.05,"));
}

#[test]
fn config_file_defaults_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        format!(
            "# small grid\nmethod = tnn\nranks = 1\nsparsities = 0.05\ntrials = 0\ndims = 10x10x3\nout = {}\nkmax = 77\n",
            out.display()
        ),
    )
    .unwrap();
    let o = trpca(&["grid", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(1));

    let o = trpca(&["grid", "--config", s(&cfg), "--trials", "1"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("trials = 1\n"));
    assert!(stdout(&o).contains("kmax = 77\n"));
    assert!(out.exists());

    fs::write(&cfg, "trials = 1\nwarp_speed = 9\n").unwrap();
    assert_eq!(trpca(&["grid", "--config", s(&cfg)]).status.code(), Some(1));
    assert_eq!(
        trpca(&["grid", "--config", "/nonexistent.cfg"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn denoise_writes_report_and_best_image() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("clean.ppm");
    save_ppm(&quantize(&low_rank_image(24, 24, 3, 2, 1).unwrap()), &img).unwrap();
    let out = dir.path().join("out");
    let o = trpca(&[
        "denoise",
        "--image",
        s(&img),
        "--method",
        "tnn",
        "--corrupt",
        "0.1",
        "--lambda-sweep",
        "0.05:0.05:0.1",
        "--out-dir",
        s(&out),
    ]);
    assert!(
        matches!(o.status.code(), Some(0 | 2)),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report = fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(report.lines().count(), 3);
    assert_eq!(report.lines().next().unwrap(), "lambda,psnr,ssim");
    for f in [
        "noisy.ppm",
        "best.ppm",
        "recovered_5e-2.ppm",
        "recovered_1e-1.ppm",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    assert_eq!(
        trpca(&[
            "denoise",
            "--image",
            s(&img),
            "--corrupt",
            "1.5",
            "--out-dir",
            s(&out)
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn background_recovers_static_scene() {
    let dir = tempfile::tempdir().unwrap();
    let fx = background_fixture(20, 20, 16, 4, 7).unwrap();
    let frames = dir.path().join("frames");
    save_frames(&fx.video, &frames, "in").unwrap();
    let out = dir.path().join("out");
    // TNF presets are tuned for larger clips; tnf+ is accurate at this size
    let o = trpca(&[
        "background",
        "--frames",
        s(&frames),
        "--method",
        "tnf+",
        "--out-dir",
        s(&out),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    // bg_ and fg_ frames share the output directory
    let only = dir.path().join("bg");
    fs::create_dir_all(&only).unwrap();
    for e in fs::read_dir(&out).unwrap() {
        let p = e.unwrap().path();
        if p.file_name().unwrap().to_str().unwrap().starts_with("bg_") {
            fs::copy(&p, only.join(p.file_name().unwrap())).unwrap();
        }
    }
    let bg = load_frames(&only).unwrap();
    let d = bg.dims();
    assert_eq!(d.n3, 16);
    for (p, v) in bg.data().iter().enumerate() {
        let want = fx.background.data()[p % d.slice_len()];
        assert!((v - want).abs() <= 1.0, "pixel {p}: {v} vs {want}");
    }
}
