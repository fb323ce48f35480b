//! The `trpca` command line.
//!
//! ```text
//! trpca decompose  --input X.tns --method tnf+ --out-prefix run
//! trpca grid       --ranks 1:2:19 --sparsities 0.05:0.05:0.5 --trials 10
//! trpca denoise    --image in.ppm --corrupt 0.2 --method tnf --out-dir out
//! trpca background --frames frames/ --method tnf --out-dir out
//! ```
//!
//! Every subcommand accepts `--config FILE` with `key = value` lines (`#`
//! starts a comment). Keys are flag names; flags given on the command line
//! win over the file.

use std::ffi::OsString;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::experiments::{foreground_magnitude, psnr, run_grid_with_progress, ssim, GridSpec};
use crate::io::{
    corrupt_salt, load_frames, load_ppm, quantize, read_tns, save_frames, save_ppm, write_tns,
};
use crate::solver::{default_lambda, solve, Init, SolverConfig, SolverKind, SolverResult};
use crate::tensor::Dims;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "trpca",
    version,
    about = "Tensor robust PCA with TNN, TNF and TNF+"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a TNS1 tensor into low-rank and sparse parts.
    Decompose(DecomposeArgs),
    /// Phase-transition success grid on synthetic data.
    Grid(GridArgs),
    /// Remove salt noise from a color image over a lambda sweep.
    Denoise(DenoiseArgs),
    /// Background/foreground separation of a directory of frames.
    Background(BackgroundArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Tnn,
    Zeros,
}

/// Solver flags shared by all subcommands. Unset values fall back to the
/// defaults of the task at hand.
#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// tnn, tnf or tnf+
    #[arg(long, default_value = "tnf", value_parser = parse_kind)]
    pub method: SolverKind,
    /// Sparsity weight [default: depends on task and method]
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Penalty on L = H [default: depends on task]
    #[arg(long)]
    pub mu1: Option<f64>,
    /// Penalty on L + E = X [default: depends on task]
    #[arg(long)]
    pub mu2: Option<f64>,
    /// Penalty on E = D, tnf+ only [default: depends on task]
    #[arg(long)]
    pub mu3: Option<f64>,
    /// Stopping tolerance on infinity-norm changes
    #[arg(long, default_value_t = 1e-4)]
    pub eps: f64,
    /// Iteration limit
    #[arg(long, default_value_t = 500)]
    pub kmax: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Starting point of tnf and tnf+
    #[arg(long, value_enum, default_value = "tnn")]
    pub init: InitArg,
    /// Fill the wall-time column of trace files (makes them non-reproducible)
    #[arg(long)]
    pub timing: bool,
    /// File of `key = value` defaults
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

impl SolverArgs {
    /// Applies the explicit flags on top of `base`.
    pub fn resolve(&self, base: SolverConfig) -> SolverConfig {
        SolverConfig {
            lambda: self.lambda.unwrap_or(base.lambda),
            mu1: self.mu1.unwrap_or(base.mu1),
            mu2: self.mu2.unwrap_or(base.mu2),
            mu3: self.mu3.unwrap_or(base.mu3),
            eps: self.eps,
            k_max: self.kmax,
            seed: self.seed,
            init: match self.init {
                InitArg::Tnn => Init::Tnn,
                InitArg::Zeros => Init::Zeros,
            },
            ..base
        }
    }
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct DecomposeArgs {
    /// Observed tensor in TNS1 format
    #[arg(long)]
    pub input: PathBuf,
    /// Writes PREFIX.L.tns, PREFIX.E.tns and PREFIX.trace.csv [default: input path without extension]
    #[arg(long)]
    pub out_prefix: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct GridArgs {
    /// Tubal ranks, lo:step:hi
    #[arg(long, default_value = "1:2:19")]
    pub ranks: String,
    /// Corruption rates 2*gamma, lo:step:hi
    #[arg(long, default_value = "0.05:0.05:0.5")]
    pub sparsities: String,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Tensor size n1xn2xn3
    #[arg(long, default_value = "40x40x30")]
    pub dims: String,
    #[arg(long, default_value = "grid.csv")]
    pub out: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct DenoiseArgs {
    /// Clean color image (binary PPM)
    #[arg(long)]
    pub image: PathBuf,
    /// Fraction of pixels replaced by random values
    #[arg(long, default_value_t = 0.2)]
    pub corrupt: f64,
    /// lo:step:hi [default: 4.5e-5:0.5e-5:6.5e-5 for tnf, 1.6e-2:0.4e-2:2.8e-2 for tnf+, 1/sqrt(max(h,w)*3) for tnn]
    #[arg(long)]
    pub lambda_sweep: Option<String>,
    #[arg(long, default_value = "denoise_out")]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct BackgroundArgs {
    /// Directory of equally sized frames (.ppm/.pgm), read in name order
    #[arg(long)]
    pub frames: PathBuf,
    #[arg(long, default_value = "background_out")]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
}

fn parse_kind(s: &str) -> std::result::Result<SolverKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `lo:step:hi` (inclusive) or a single number.
pub fn parse_range_f64(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParam(format!("bad range `{s}`, expected lo:step:hi"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    if parts.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    match parts[..] {
        [v] => Ok(vec![v]),
        [lo, step, hi] if step > 0.0 && hi >= lo => {
            let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            Ok((0..n).map(|i| lo + i as f64 * step).collect())
        }
        _ => Err(bad()),
    }
}

/// Integer version of [`parse_range_f64`].
pub fn parse_range_usize(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidParam(format!("bad range `{s}`, expected lo:step:hi"));
    let parts: Vec<usize> = s
        .split(':')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    match parts[..] {
        [v] => Ok(vec![v]),
        [lo, step, hi] if step > 0 && hi >= lo => Ok((lo..=hi).step_by(step).collect()),
        _ => Err(bad()),
    }
}

/// Parses `n1xn2xn3`.
pub fn parse_dims(s: &str) -> Result<Dims> {
    let bad = || Error::InvalidParam(format!("bad dims `{s}`, expected n1xn2xn3"));
    let parts: Vec<usize> = s
        .split(['x', 'X'])
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    match parts[..] {
        [a, b, c] => Dims::new(a, b, c).map_err(|_| bad()),
        _ => Err(bad()),
    }
}

/// Turns `key = value` lines into `--key value` arguments.
pub fn config_args(text: &str, path: &Path) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidParam(format!(
                "{}:{}: expected `key = value`",
                path.display(),
                n + 1
            ))
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(Error::InvalidParam(format!(
                "{}:{}: nested config files are not supported",
                path.display(),
                n + 1
            )));
        }
        if key == "timing" {
            match value {
                "true" => out.push(OsString::from("--timing")),
                "false" => {}
                _ => {
                    return Err(Error::InvalidParam(format!(
                        "{}:{}: timing must be true or false",
                        path.display(),
                        n + 1
                    )))
                }
            }
            continue;
        }
        out.push(OsString::from(format!("--{key}")));
        out.push(OsString::from(value));
    }
    Ok(out)
}

fn find_config(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    let mut found = None;
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            found = it.next().map(PathBuf::from);
        } else if let Some(p) = s.strip_prefix("--config=") {
            found = Some(PathBuf::from(p));
        }
    }
    found
}

/// Splices the config file (if any) in front of the subcommand's own flags.
fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = find_config(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)?;
    let extra = config_args(&text, &path)?;
    // argv[0], subcommand, file defaults, user flags
    let split = 2.min(args.len());
    let mut out = args[..split].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[split..]);
    Ok(out)
}

fn print_config(pairs: &[(&str, String)]) {
    println!("# resolved configuration");
    for (k, v) in pairs {
        println!("{k} = {v}");
    }
}

fn solver_pairs(kind: SolverKind, cfg: &SolverConfig, timing: bool) -> Vec<(&'static str, String)> {
    let mut v = vec![
        ("method", kind.to_string()),
        ("lambda", format!("{:e}", cfg.lambda)),
    ];
    if kind != SolverKind::Tnn {
        v.push(("mu1", format!("{:e}", cfg.mu1)));
    }
    v.push(("mu2", format!("{:e}", cfg.mu2)));
    if kind == SolverKind::TnfPlus {
        v.push(("mu3", format!("{:e}", cfg.mu3)));
    }
    v.extend([
        ("eps", format!("{:e}", cfg.eps)),
        ("kmax", cfg.k_max.to_string()),
        ("seed", cfg.seed.to_string()),
        (
            "init",
            match cfg.init {
                Init::Zeros => "zeros".into(),
                _ => "tnn".into(),
            },
        ),
        ("timing", timing.to_string()),
    ]);
    v
}

fn report_solve(res: &SolverResult) {
    eprintln!(
        "{} after {} iterations{}",
        if res.converged {
            "converged"
        } else {
            "stopped without converging"
        },
        res.iterations,
        if res.init_iterations > 0 {
            format!(" (plus {} warm-start iterations)", res.init_iterations)
        } else {
            String::new()
        }
    );
}

fn exit_for(res: &SolverResult) -> i32 {
    if res.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn cmd_decompose(a: &DecomposeArgs) -> Result<i32> {
    let x = read_tns(&a.input)?;
    let kind = a.solver.method;
    let cfg = a.solver.resolve(SolverConfig::synthetic(kind, x.dims()));
    let prefix = a
        .out_prefix
        .clone()
        .unwrap_or_else(|| a.input.with_extension(""));
    let mut pairs = vec![
        ("input", a.input.display().to_string()),
        ("out-prefix", prefix.display().to_string()),
    ];
    pairs.extend(solver_pairs(kind, &cfg, a.solver.timing));
    print_config(&pairs);

    let res = solve(kind, &x, &cfg)?;
    report_solve(&res);
    write_tns(with_suffix(&prefix, ".L.tns"), &res.l_hat)?;
    write_tns(with_suffix(&prefix, ".E.tns"), &res.e_hat)?;
    let f = fs::File::create(with_suffix(&prefix, ".trace.csv"))?;
    res.trace
        .write_csv_with(BufWriter::new(f), a.solver.timing)?;
    Ok(exit_for(&res))
}

pub fn cmd_grid(a: &GridArgs) -> Result<i32> {
    let ranks = parse_range_usize(&a.ranks)?;
    let sparsities = parse_range_f64(&a.sparsities)?;
    let dims = parse_dims(&a.dims)?;
    if a.trials == 0 {
        return Err(Error::InvalidParam("--trials must be at least 1".into()));
    }
    let kind = a.solver.method;
    let cfg = a.solver.resolve(SolverConfig::synthetic(kind, dims));
    let mut pairs = vec![
        ("ranks", a.ranks.clone()),
        ("sparsities", a.sparsities.clone()),
        ("trials", a.trials.to_string()),
        ("dims", dims.to_string()),
        ("out", a.out.display().to_string()),
    ];
    pairs.extend(solver_pairs(kind, &cfg, a.solver.timing));
    print_config(&pairs);

    let spec = GridSpec {
        dims,
        ranks,
        sparsities,
        trials: a.trials,
        master_seed: a.solver.seed,
    };
    let total = spec.ranks.len() * spec.sparsities.len();
    let done = AtomicUsize::new(0);
    let grid = run_grid_with_progress(&spec, kind, &cfg, |c| {
        let n = done.fetch_add(1, Ordering::Relaxed) + 1;
        eprintln!(
            "[{n}/{total}] rank {} sparsity {}: {}/{} successful",
            c.rank, c.sparsity, c.successes, c.trials
        );
    })?;
    for f in &grid.failures {
        eprintln!(
            "trial failed: rank {} sparsity {} trial {} seed {}: {}",
            f.rank, f.sparsity, f.trial, f.seed, f.message
        );
    }
    grid.write_csv(BufWriter::new(fs::File::create(&a.out)?))?;
    Ok(EXIT_OK)
}

/// Default lambda sweep of the image task.
pub fn default_sweep(kind: SolverKind, dims: Dims) -> Vec<f64> {
    let range = match kind {
        SolverKind::Tnf => "4.5e-5:0.5e-5:6.5e-5",
        SolverKind::TnfPlus => "1.6e-2:0.4e-2:2.8e-2",
        SolverKind::Tnn => return vec![default_lambda(dims)],
    };
    parse_range_f64(range).expect("valid literal")
}

pub fn cmd_denoise(a: &DenoiseArgs) -> Result<i32> {
    if !(0.0..=1.0).contains(&a.corrupt) {
        return Err(Error::InvalidParam(format!(
            "--corrupt must lie in [0, 1], got {}",
            a.corrupt
        )));
    }
    let clean = load_ppm(&a.image)?;
    let kind = a.solver.method;
    let lambdas = match &a.lambda_sweep {
        Some(s) => parse_range_f64(s)?,
        None => match a.solver.lambda {
            Some(l) => vec![l],
            None => default_sweep(kind, clean.dims()),
        },
    };
    let base = a
        .solver
        .resolve(SolverConfig::image_denoising(kind, lambdas[0]));
    let sweep = lambdas
        .iter()
        .map(|l| format!("{l:e}"))
        .collect::<Vec<_>>()
        .join(",");
    let mut pairs = vec![
        ("image", a.image.display().to_string()),
        ("corrupt", a.corrupt.to_string()),
        ("lambda-sweep", sweep),
        ("out-dir", a.out_dir.display().to_string()),
    ];
    pairs.extend(
        solver_pairs(kind, &base, a.solver.timing)
            .into_iter()
            .filter(|(k, _)| *k != "lambda"),
    );
    print_config(&pairs);

    fs::create_dir_all(&a.out_dir)?;
    let (noisy, mask) = corrupt_salt(&clean, a.corrupt, a.solver.seed);
    save_ppm(&noisy, a.out_dir.join("noisy.ppm"))?;
    eprintln!(
        "corrupted {} pixels; noisy PSNR {:.2} dB, SSIM {:.4}",
        mask.count(),
        psnr(&clean, &noisy, 255.0)?,
        ssim(&clean, &noisy)?
    );

    let mut report = String::from("lambda,psnr,ssim\n");
    let mut best: Option<(f64, PathBuf)> = None;
    let mut all_converged = true;
    for &lambda in &lambdas {
        let cfg = SolverConfig {
            lambda,
            ..base.clone()
        };
        let res = solve(kind, &noisy, &cfg)?;
        all_converged &= res.converged;
        let out = quantize(&res.l_hat);
        let p = psnr(&clean, &out, 255.0)?;
        let s = ssim(&clean, &out)?;
        eprintln!(
            "lambda {lambda:e}: PSNR {p:.2} dB, SSIM {s:.4}, {} iterations{}",
            res.iterations,
            if res.converged {
                ""
            } else {
                " (not converged)"
            }
        );
        report.push_str(&format!("{lambda:e},{p},{s}\n"));
        let path = a.out_dir.join(format!("recovered_{lambda:e}.ppm"));
        save_ppm(&out, &path)?;
        if best.as_ref().is_none_or(|(bp, _)| p > *bp) {
            best = Some((p, path));
        }
    }
    fs::write(a.out_dir.join("report.csv"), report)?;
    if let Some((_, path)) = best {
        fs::copy(path, a.out_dir.join("best.ppm"))?;
    }
    Ok(if all_converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

pub fn cmd_background(a: &BackgroundArgs) -> Result<i32> {
    let video = load_frames(&a.frames)?;
    let kind = a.solver.method;
    let cfg = a
        .solver
        .resolve(SolverConfig::background(kind, video.dims()));
    let mut pairs = vec![
        ("frames", a.frames.display().to_string()),
        ("out-dir", a.out_dir.display().to_string()),
    ];
    pairs.extend(solver_pairs(kind, &cfg, a.solver.timing));
    print_config(&pairs);

    let res = solve(kind, &video, &cfg)?;
    report_solve(&res);
    save_frames(&res.l_hat, &a.out_dir, "bg")?;
    save_frames(&foreground_magnitude(&res.e_hat), &a.out_dir, "fg")?;
    Ok(exit_for(&res))
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::Grid(a) => cmd_grid(a),
        Command::Denoise(a) => cmd_denoise(a),
        Command::Background(a) => cmd_background(a),
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = match expand_args(args.into_iter().map(Into::into).collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
