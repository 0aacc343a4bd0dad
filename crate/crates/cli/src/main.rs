//! `algnum`: exact counts of algebraic numbers in plane regions, their
//! limiting density, and the checks tying the two together.

mod manifest;
mod output;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use algnum::counting::{self, CountOptions, CountResult, Shard};
use algnum::density::{self, Budget, MethodChoice};
use algnum::lattice::{self, LatticeRegion, Scale, Shape};
use algnum::regions::ComplexRegion;
use algnum::simulate;
use algnum::verify::{self, Status, VerifyConfig};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Deserialize;

use manifest::RunManifest;
use output::{csv_writer, intensities, sig, write_pgm};

#[derive(Parser, Debug)]
#[command(name = "algnum", version, about = "Counting algebraic numbers in complex regions")]
struct Cli {
    /// Worker threads; integer outputs do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact count Ψ(Q;Ω) of algebraic numbers of degree ≤ n, height ≤ Q in Ω.
    ///
    /// CSV columns: n,Q,region,psi,ambiguous,reducible,gamma_1..gamma_n,runtime_s
    Count(CountArgs),
    /// Merge shard results written by `count --json`.
    ///
    /// CSV columns as for `count`.
    Merge(MergeArgs),
    /// Pointwise density ψ(z).
    Density(DensityArgs),
    /// ψ on a rectangular grid, as CSV or binary PPM.
    ///
    /// CSV columns: x,y,psi,stderr. PPM: P5, 8-bit, top row is the largest
    /// y, intensity linear in ψ with the grid maximum at 255 (recorded in
    /// the manifest). Points on the real axis get ψ = 0.
    Field(FieldArgs),
    /// Predicted count Q^(n+1)/(2ζ(n+1))·∫_Ω ψ.
    ///
    /// CSV columns: n,Q,region,integral,integral_stderr,predicted,predicted_stderr
    Predict(PredictArgs),
    /// Root statistics of random polynomials with uniform coefficients.
    ///
    /// CSV columns: n,trials,seed,mean_n,mean_stderr,k,count,frequency,volume,volume_stderr
    Simulate(SimulateArgs),
    /// Primitive lattice points λ*(tA) and their asymptotic ratio.
    ///
    /// CSV columns: shape,d,t,lambda_star,predicted,ratio,residual,scaled_residual
    Lattice(LatticeArgs),
    /// Convergence, symmetry and evaluator-agreement certificates.
    ///
    /// CSV columns: suite,n,q,region,quantity,value,status.
    /// Exit code 0 only if every check passes, 3 otherwise.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u64,
    /// Region, e.g. "disk:0,1,0.3" or "rect:0,1,0.5,1;invrect:0,1,0.5,1".
    #[arg(long)]
    region: String,
    #[arg(long, default_value_t = 1)]
    shards: u32,
    #[arg(long, default_value_t = 0)]
    shard: u32,
    /// Certification radius for roots of degree ≥ 3.
    #[arg(long)]
    root_tol: Option<f64>,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Full result as JSON, for `merge`.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MergeArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Auto,
    Mc,
    Polar,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::Mc => MethodChoice::MonteCarlo,
            MethodArg::Polar => MethodChoice::Polar,
        }
    }
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[arg(long)]
    n: usize,
    /// Point as `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    #[arg(long, default_value_t = 1 << 16)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[arg(long)]
    n: usize,
    /// `x0:x1:nx,y0:y1:ny`, endpoints included.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    /// `.csv` or `.ppm`.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1 << 14)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
}

#[derive(Args, Debug, Clone, Copy)]
struct BudgetArgs {
    #[arg(long, default_value_t = Budget::default().replicates)]
    replicates: usize,
    /// Stratified points in Ω per replicate.
    #[arg(long, default_value_t = Budget::default().points)]
    points: usize,
    /// QMC samples per ψ evaluation without a closed form.
    #[arg(long, default_value_t = Budget::default().inner)]
    inner: usize,
}

impl From<BudgetArgs> for Budget {
    fn from(b: BudgetArgs) -> Self {
        Budget { replicates: b.replicates, points: b.points, inner: b.inner }
    }
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    region: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    region: String,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// box, cube, ball or simplex.
    #[arg(long)]
    shape: String,
    #[arg(long)]
    d: usize,
    /// Dilation factor; rationals such as 7/2 are accepted.
    #[arg(long)]
    t: Option<String>,
    /// Comma-separated list of dilation factors.
    #[arg(long)]
    sweep: Option<String>,
    /// Also count primitive points directly and compare.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Convergence,
    Symmetry,
    Density,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[arg(long)]
    n: Option<usize>,
    /// One height or a comma-separated increasing list.
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    region: Option<String>,
    /// Density grid `x0:x1:nx,y0:y1:ny`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// `key = value` settings (TOML syntax).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    root_tol: Option<f64>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Settings accepted by `verify --config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyFile {
    n: Option<usize>,
    q: Option<String>,
    region: Option<String>,
    grid: Option<String>,
    seed: Option<u64>,
    budget: Option<Budget>,
    density_samples: Option<u64>,
    sigma: Option<f64>,
    pass_fraction: Option<f64>,
    min_slope: Option<f64>,
    terminal_tolerance: Option<f64>,
    root_tol: Option<f64>,
}

fn parse_region(s: &str) -> Result<ComplexRegion> {
    s.parse::<ComplexRegion>().map_err(|e| anyhow!("region {s:?}: {e}"))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|e| anyhow!("bad {what} {p:?}: {e}")))
        .collect()
}

fn parse_point(s: &str) -> Result<Complex64> {
    let v: Vec<f64> = parse_list(s, "coordinate")?;
    match v[..] {
        [x, y] => Ok(Complex64::new(x, y)),
        _ => bail!("point must be x,y, got {s:?}"),
    }
}

/// `x0:x1:nx,y0:y1:ny` into the axis values.
fn parse_grid(s: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let axes: Vec<&str> = s.split(',').collect();
    if axes.len() != 2 {
        bail!("grid must be x0:x1:nx,y0:y1:ny, got {s:?}");
    }
    let axis = |a: &str| -> Result<Vec<f64>> {
        let parts: Vec<&str> = a.split(':').collect();
        if parts.len() != 3 {
            bail!("grid axis must be lo:hi:count, got {a:?}");
        }
        let lo: f64 = parts[0].parse().context("grid lower end")?;
        let hi: f64 = parts[1].parse().context("grid upper end")?;
        let count: usize = parts[2].parse().context("grid count")?;
        if count == 0 || !(lo.is_finite() && hi.is_finite()) || (count > 1 && hi <= lo) {
            bail!("grid axis {a:?} needs lo < hi and count ≥ 1");
        }
        Ok(verify::linspace(lo, hi, count))
    };
    Ok((axis(axes[0])?, axis(axes[1])?))
}

fn count_header(n: usize) -> Vec<String> {
    let mut h: Vec<String> = ["n", "Q", "region", "psi", "ambiguous", "reducible"].iter().map(|s| s.to_string()).collect();
    h.extend((1..=n).map(|k| format!("gamma_{k}")));
    h.push("runtime_s".into());
    h
}

fn count_row(r: &CountResult, runtime_s: f64) -> Vec<String> {
    let mut row = vec![
        r.n.to_string(),
        r.q.to_string(),
        r.region.clone(),
        r.psi.to_string(),
        r.ambiguous.to_string(),
        r.reducible.to_string(),
    ];
    row.extend((1..=r.n).map(|k| r.gamma.get(&k).copied().unwrap_or(0).to_string()));
    row.push(format!("{runtime_s:.3}"));
    row
}

fn write_count_outputs(sub: &str, r: &CountResult, runtime_s: f64, csv: &Option<PathBuf>, json: &Option<PathBuf>) -> Result<()> {
    println!("psi={}", r.psi);
    println!("ambiguous={} reducible={}", r.ambiguous, r.reducible);
    let gammas: Vec<String> = r.gamma.iter().map(|(k, g)| format!("gamma_{k}={g}")).collect();
    println!("{}", gammas.join(" "));
    if !r.is_complete() {
        println!("shards={:?} of {}", r.shards, r.shard_total);
    }
    let mut outs: Vec<&Path> = Vec::new();
    if let Some(p) = csv {
        let mut w = csv_writer(p)?;
        w.write_record(count_header(r.n))?;
        w.write_record(count_row(r, runtime_s))?;
        w.flush()?;
        outs.push(p);
    }
    if let Some(p) = json {
        fs::write(p, serde_json::to_string_pretty(r)?).with_context(|| format!("writing {}", p.display()))?;
        outs.push(p);
    }
    if !outs.is_empty() {
        RunManifest::new(sub, vec![], runtime_s)
            .detail("shards", &r.shards)
            .detail("shard_total", r.shard_total)
            .write_for(&outs)?;
    }
    Ok(())
}

fn run_count(a: &CountArgs) -> Result<ExitCode> {
    let region = parse_region(&a.region)?;
    let shard = Shard::new(a.shard, a.shards)?;
    let mut opts = CountOptions::default();
    if let Some(t) = a.root_tol {
        opts.root_tol = t;
    }
    let start = Instant::now();
    let r = counting::partitioned_enumerate_with(a.n, a.q, &region, shard, opts)?;
    write_count_outputs("count", &r, start.elapsed().as_secs_f64(), &a.csv, &a.json)?;
    Ok(ExitCode::SUCCESS)
}

fn run_merge(a: &MergeArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let parts = a
        .inputs
        .iter()
        .map(|p| -> Result<CountResult> {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?)
        })
        .collect::<Result<Vec<_>>>()?;
    let merged = counting::merge(&parts)?;
    write_count_outputs("merge", &merged, start.elapsed().as_secs_f64(), &a.csv, &a.json)?;
    Ok(ExitCode::SUCCESS)
}

fn run_density(a: &DensityArgs) -> Result<ExitCode> {
    let z = parse_point(&a.z)?;
    let e = density::psi(z, a.n, a.samples, a.seed, a.method.into())?;
    if e.method.is_closed() {
        println!("psi={} ({})", sig(e.value, 8), e.method.label());
    } else {
        println!("psi={} stderr={:.3e} ({})", sig(e.value, 8), e.std_error, e.method.label());
    }
    Ok(ExitCode::SUCCESS)
}

fn run_field(a: &FieldArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let (xs, ys) = parse_grid(&a.grid)?;
    // top row first
    let points: Vec<Complex64> = ys.iter().rev().flat_map(|&y| xs.iter().map(move |&x| Complex64::new(x, y))).collect();
    let method: MethodChoice = a.method.into();
    let values = points
        .par_iter()
        .enumerate()
        .map(|(i, &z)| {
            if z.im == 0.0 {
                return Ok((0.0, 0.0));
            }
            let e = density::psi(z, a.n, a.samples, a.seed.wrapping_add(i as u64), method)?;
            Ok((e.value, e.std_error))
        })
        .collect::<algnum::Result<Vec<(f64, f64)>>>()?;
    let ext = a.out.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    let max = values.iter().map(|v| v.0).fold(0.0, f64::max);
    match ext.as_str() {
        "csv" => {
            let mut w = csv_writer(&a.out)?;
            w.write_record(["x", "y", "psi", "stderr"])?;
            for (z, (v, se)) in points.iter().zip(&values) {
                w.write_record([z.re.to_string(), z.im.to_string(), v.to_string(), se.to_string()])?;
            }
            w.flush()?;
        }
        "ppm" | "pgm" => {
            let px = intensities(&values.iter().map(|v| v.0).collect::<Vec<_>>(), max);
            write_pgm(&a.out, xs.len(), ys.len(), &px)?;
        }
        other => bail!("unsupported output extension {other:?} (csv or ppm)"),
    }
    println!("wrote {} points to {} (max psi {})", points.len(), a.out.display(), sig(max, 8));
    RunManifest::new("field", vec![a.seed], start.elapsed().as_secs_f64())
        .detail("width", xs.len())
        .detail("height", ys.len())
        .detail("intensity_scale", format!("pixel = round(255 * psi / {max})"))
        .detail("max_psi", max)
        .write_for(&[&a.out])?;
    Ok(ExitCode::SUCCESS)
}

fn run_predict(a: &PredictArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let region = parse_region(&a.region)?;
    let p = density::predicted_count(a.q, a.n, &region, a.budget.into(), a.seed)?;
    println!("predicted={} stderr={:.3e}", sig(p.value, 8), p.std_error);
    println!("integral={} stderr={:.3e} ({})", sig(p.integral.value, 8), p.integral.std_error, p.integral.method.label());
    if let Some(path) = &a.csv {
        let mut w = csv_writer(path)?;
        w.write_record(["n", "Q", "region", "integral", "integral_stderr", "predicted", "predicted_stderr"])?;
        w.write_record([
            a.n.to_string(),
            a.q.to_string(),
            region.to_string(),
            p.integral.value.to_string(),
            p.integral.std_error.to_string(),
            p.value.to_string(),
            p.std_error.to_string(),
        ])?;
        w.flush()?;
        RunManifest::new("predict", vec![a.seed], start.elapsed().as_secs_f64())
            .detail("budget", Budget::from(a.budget))
            .write_for(&[path])?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_simulate(a: &SimulateArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let region = parse_region(&a.region)?;
    let s = simulate::estimate_en(&region, a.n, a.trials, a.seed)?;
    let vols = simulate::volume_ak_from(&s);
    let scale = 2f64.powi(a.n as i32 + 1);
    println!("mean_n={} stderr={:.3e}", sig(s.mean_n, 8), s.std_error);
    println!("scaled_mean={} stderr={:.3e}", sig(scale * s.mean_n, 8), scale * s.std_error);
    for (k, v) in &vols {
        println!("k={k} count={} volume={} stderr={:.3e}", s.histogram[k], sig(v.value, 8), v.std_error);
    }
    if s.ambiguous_roots > 0 {
        println!("ambiguous_roots={} half_weight_shift={:.3e}", s.ambiguous_roots, s.ambiguous_half_weight);
    }
    if let Some(path) = &a.csv {
        let mut w = csv_writer(path)?;
        w.write_record(["n", "trials", "seed", "mean_n", "mean_stderr", "k", "count", "frequency", "volume", "volume_stderr"])?;
        for (k, v) in &vols {
            w.write_record([
                a.n.to_string(),
                a.trials.to_string(),
                a.seed.to_string(),
                s.mean_n.to_string(),
                s.std_error.to_string(),
                k.to_string(),
                s.histogram[k].to_string(),
                s.per_k_frequency[k].to_string(),
                v.value.to_string(),
                v.std_error.to_string(),
            ])?;
        }
        w.flush()?;
        RunManifest::new("simulate", vec![a.seed], start.elapsed().as_secs_f64())
            .detail("ambiguous_roots", s.ambiguous_roots)
            .write_for(&[path])?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_lattice(a: &LatticeArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let shape: Shape = a.shape.parse()?;
    let region = LatticeRegion::new(shape, a.d)?;
    let mut ts: Vec<Scale> = Vec::new();
    if let Some(t) = &a.t {
        ts.push(t.parse()?);
    }
    if let Some(s) = &a.sweep {
        ts.extend(parse_list::<Scale>(s, "scale")?);
    }
    if ts.is_empty() {
        bail!("give --t or --sweep");
    }
    let rows = lattice::asymptotic_report(&region, &ts)?;
    let mut mismatch = false;
    for (t, row) in ts.iter().zip(&rows) {
        let mut line = format!(
            "t={t} lambda_star={} predicted={} ratio={}",
            row.lambda_star,
            sig(row.predicted, 8),
            sig(row.ratio, 6)
        );
        if a.check {
            let brute = lattice::lambda_star_brute(&region, *t);
            mismatch |= brute != row.lambda_star;
            line.push_str(&format!(" brute={brute}"));
        }
        println!("{line}");
    }
    if let Some(path) = &a.csv {
        let mut w = csv_writer(path)?;
        w.write_record(["shape", "d", "t", "lambda_star", "predicted", "ratio", "residual", "scaled_residual"])?;
        for (t, row) in ts.iter().zip(&rows) {
            w.write_record([
                shape.to_string(),
                a.d.to_string(),
                t.to_string(),
                row.lambda_star.to_string(),
                row.predicted.to_string(),
                row.ratio.to_string(),
                row.residual.to_string(),
                row.scaled_residual.to_string(),
            ])?;
        }
        w.flush()?;
        RunManifest::new("lattice", vec![], start.elapsed().as_secs_f64()).write_for(&[path])?;
    }
    if mismatch {
        bail!("Möbius count disagrees with the direct count");
    }
    Ok(ExitCode::SUCCESS)
}

struct ReportRow {
    suite: &'static str,
    n: usize,
    q: String,
    region: String,
    quantity: String,
    value: String,
    status: String,
}

fn run_verify(a: &VerifyArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let file: VerifyFile = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => VerifyFile::default(),
    };
    let mut config = VerifyConfig::default();
    config.seed = a.seed.or(file.seed).unwrap_or(config.seed);
    config.budget = file.budget.unwrap_or(config.budget);
    config.density_samples = file.density_samples.unwrap_or(config.density_samples);
    config.sigma = file.sigma.unwrap_or(config.sigma);
    config.pass_fraction = file.pass_fraction.unwrap_or(config.pass_fraction);
    config.min_slope = file.min_slope.unwrap_or(config.min_slope);
    config.terminal_tolerance = file.terminal_tolerance.unwrap_or(config.terminal_tolerance);
    config.root_tol = a.root_tol.or(file.root_tol).unwrap_or(config.root_tol);
    let n = a.n.or(file.n).unwrap_or(2);
    let q_text = a.q.clone().or(file.q);
    let region_text = a.region.clone().or(file.region);
    let grid_text = a.grid.clone().or(file.grid).unwrap_or_else(|| "-2:2:8,0.1:2:8".into());
    let wants = |s: Suite| a.suite == s || a.suite == Suite::All;
    let need = |what: &str, v: &Option<String>| -> Result<String> {
        v.clone().ok_or_else(|| anyhow!("suite {:?} needs --{what}", a.suite))
    };

    let mut rows: Vec<ReportRow> = Vec::new();
    let mut statuses: Vec<Status> = Vec::new();
    let push = |rows: &mut Vec<ReportRow>, suite, q: String, region: String, quantity: &str, value: String, status: String| {
        rows.push(ReportRow { suite, n, q, region, quantity: quantity.into(), value, status })
    };

    if wants(Suite::Convergence) {
        let qs: Vec<u64> = parse_list(&need("q", &q_text)?, "height")?;
        let region = parse_region(&need("region", &region_text)?)?;
        let rep = verify::convergence_sweep(n, &qs, &region, &config)?;
        println!("convergence n={n} region={region} integral={} stderr={:.3e}", sig(rep.integral.value, 8), rep.integral.std_error);
        for r in &rep.rows {
            println!(
                "  Q={} psi={} predicted={} ratio={} scaled_residual={:.4e} ambiguous={} runtime_s={:.2}",
                r.q,
                r.psi_exact,
                sig(r.predicted, 8),
                sig(r.ratio, 6),
                r.scaled_residual,
                r.ambiguous,
                r.runtime_s
            );
            for (quantity, value) in [
                ("psi_exact", r.psi_exact.to_string()),
                ("predicted", r.predicted.to_string()),
                ("ratio", r.ratio.to_string()),
                ("scaled_residual", r.scaled_residual.to_string()),
                ("ambiguous", r.ambiguous.to_string()),
                ("reducible", r.reducible.to_string()),
                ("runtime_s", format!("{:.3}", r.runtime_s)),
            ] {
                push(&mut rows, "convergence", r.q.to_string(), r.region.clone(), quantity, value, String::new());
            }
        }
        if let Some(t) = rep.trend {
            println!("  trend slope={:.4e} intercept={:.4e} r_squared={:.4}", t.slope, t.intercept, t.r_squared);
            push(&mut rows, "convergence", String::new(), region.to_string(), "trend_slope", t.slope.to_string(), String::new());
            push(&mut rows, "convergence", String::new(), region.to_string(), "trend_r_squared", t.r_squared.to_string(), String::new());
        }
        println!("convergence: {}", rep.status);
        push(&mut rows, "convergence", String::new(), region.to_string(), "status", String::new(), rep.status.to_string());
        statuses.push(rep.status);
    }

    if wants(Suite::Symmetry) {
        let qs: Vec<u64> = parse_list(&need("q", &q_text)?, "height")?;
        let region = parse_region(&need("region", &region_text)?)?;
        let opts = CountOptions { root_tol: config.root_tol };
        for &q in qs.iter().collect::<BTreeSet<_>>() {
            let rep = verify::symmetry_certificate(n, q, &region, opts)?;
            for (label, r, psi, amb) in &rep.counts {
                println!("  Q={q} {label:<9} {r} psi={psi} ambiguous={amb}");
                push(&mut rows, "symmetry", q.to_string(), r.clone(), label, psi.to_string(), String::new());
            }
            println!("symmetry n={n} Q={q}: {}", rep.status);
            push(&mut rows, "symmetry", q.to_string(), region.to_string(), "status", String::new(), rep.status.to_string());
            statuses.push(rep.status);
        }
    }

    if wants(Suite::Density) {
        let (xs, ys) = parse_grid(&grid_text)?;
        let rep = verify::density_agreement(n, &verify::grid(&xs, &ys), &config)?;
        for p in rep.points.iter().filter(|p| !p.agrees || !p.inversion_agrees) {
            println!("  disagreement at {}: worst {:.2} sigma, inversion {:.2} sigma", p.z, p.worst_sigma, p.inversion_sigma);
        }
        println!(
            "density n={n} grid={grid_text}: agreement {:.4} inversion {:.4}: {}",
            rep.agreement_fraction, rep.inversion_fraction, rep.status
        );
        push(&mut rows, "density", String::new(), grid_text.clone(), "agreement_fraction", rep.agreement_fraction.to_string(), String::new());
        push(&mut rows, "density", String::new(), grid_text.clone(), "inversion_fraction", rep.inversion_fraction.to_string(), String::new());
        push(&mut rows, "density", String::new(), grid_text.clone(), "status", String::new(), rep.status.to_string());
        statuses.push(rep.status);
    }

    if let Some(path) = &a.csv {
        let mut w = csv_writer(path)?;
        w.write_record(["suite", "n", "q", "region", "quantity", "value", "status"])?;
        for r in &rows {
            w.write_record([r.suite, &r.n.to_string(), &r.q, &r.region, &r.quantity, &r.value, &r.status])?;
        }
        w.flush()?;
        RunManifest::new("verify", vec![config.seed], start.elapsed().as_secs_f64())
            .detail("config", &config)
            .write_for(&[path])?;
    }
    let all_pass = !statuses.is_empty() && statuses.iter().all(|s| *s == Status::Pass);
    println!("overall: {}", if all_pass { "PASS" } else { "FAIL" });
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    match &cli.command {
        Command::Count(a) => run_count(a),
        Command::Merge(a) => run_merge(a),
        Command::Density(a) => run_density(a),
        Command::Field(a) => run_field(a),
        Command::Predict(a) => run_predict(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Lattice(a) => run_lattice(a),
        Command::Verify(a) => run_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
