//! Command-line experiment runner: covering computations, hull and kernel
//! pipelines, operator discretizations, Hardy checks, rate fits, the regime
//! oracle, and a seeded verification suite.
//!
//! Parameters come from flags or from a line-oriented `key=value` file named
//! by `--config`; flags override file values, and every run stamps its output
//! with a hash of the fully resolved configuration, so byte-identical reruns
//! are checkable. Results are CSV on stdout or `--out`; `--plot` additionally
//! writes a self-contained log-log plot script for the sequence-producing
//! commands.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::hull::{
    self, diag_set, AlphaList, EnhilCase, HullSpec, SteinwartParams, WeightPreset,
};
use crate::io::{fmt_f64, read_points, read_sequence, read_square_table, render_csv};
use crate::kernel::{
    self, kernel_q_integral, kernel_q_integral_quadrature, sampled_interval_metric,
    KernelMode, KernelSpec,
};
use crate::metricspace::{
    entropy_numbers, exact_cover, farthest_point_radii, greedy_cover, packing_lower,
    CoverMethod, Norm, PointCloud,
};
use crate::operator::{
    self, net_lower_kernel_atoms, net_lower_kernel_atoms_dyadic, net_lower_means,
    net_lower_rademacher, rate_oracle, rl04_bound, semigroup_check, shift_modulus_check_with,
    singular_values, DiscretizedOperator, OpKernel, RateQuery, Rl04Variant, Rl06Decay,
};
use crate::rates::{eval_rate, fit_rate_samples, RateFormula};
use crate::seqspace::{lh1_check, lh2_check, lh2_proof_constant, MonotoneSeq, SIndex};

#[derive(Parser)]
#[command(
    name = "entlab",
    version,
    about = "numerical laboratory for metric entropy",
    max_term_width = 100
)]
struct Cli {
    /// Line-oriented key=value parameter file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write the CSV (or report) here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also write a self-contained log-log plot script to this path.
    #[arg(long, global = true, value_name = "FILE")]
    plot: Option<PathBuf>,
    /// Seed for the randomized parts of `verify`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Covering, packing, and entropy numbers of a finite point cloud.
    Cover(CoverArgs),
    /// Absolutely convex hull pipelines: entropy brackets, two-term bound,
    /// lower formulas, finite inequalities.
    Hull(HullArgs),
    /// Kernel integrals, pseudo-metric tables, sandwich checks, interval
    /// rates.
    Kernel(KernelArgs),
    /// Discretized kernel operators: apply, checks, nets, spectra, bounds.
    Operator(OperatorArgs),
    /// Hardy-type inequality checks on non-increasing sequences.
    Hardy(HardyArgs),
    /// Fit the three-scale rate formula to (n, value) samples.
    Fit(FitArgs),
    /// Resolve a regime table to its printed rate exponents.
    Oracle(OracleArgs),
    /// Run the cross-module invariant suite (seeded, deterministic).
    Verify,
}

#[derive(Args)]
struct CoverArgs {
    /// Point cloud CSV (one point per row).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Square distance-table CSV instead of coordinates.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Ambient norm: a p-exponent or `inf`.
    #[arg(long)]
    norm: Option<String>,
    /// Covering radius for a single covering run.
    #[arg(long)]
    eps: Option<f64>,
    /// Compute entropy numbers for n = 1..=N instead of one radius.
    #[arg(long, value_name = "N")]
    entropy: Option<usize>,
    /// exact | greedy | packing.
    #[arg(long)]
    method: Option<String>,
}

#[derive(Args)]
struct HullArgs {
    #[command(subcommand)]
    kind: HullKind,
}

#[derive(Args, Clone)]
struct HullSetArgs {
    /// Generator CSV, one generator per row.
    #[arg(long)]
    generators: Option<PathBuf>,
    /// Diagonal-set weights sigma as a one-column CSV (needs --p and --dim).
    #[arg(long)]
    sigma: Option<PathBuf>,
    /// l_p ambient exponent for the diagonal set.
    #[arg(long)]
    p: Option<f64>,
    /// Ambient dimension for the diagonal set.
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Subcommand)]
enum HullKind {
    /// Entropy-number brackets of aco(A) from one lattice net.
    Bounds {
        #[command(flatten)]
        set: HullSetArgs,
        #[arg(long)]
        mesh: Option<f64>,
        #[arg(long)]
        n_max: Option<usize>,
        /// Lattice-size cap (refused above it).
        #[arg(long)]
        max_points: Option<usize>,
    },
    /// Two-term dyadic entropy bound with the doubling index m.
    Steinwart {
        /// Entropy data of the generator set, one column, non-increasing.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        c_t: Option<f64>,
        #[arg(long)]
        tau_p: Option<f64>,
        /// Comma-separated strictly increasing positive integers.
        #[arg(long)]
        alphas: Option<String>,
        /// Comma-separated log2 values standing for alpha_k = 2^{a_k}.
        #[arg(long)]
        log2_alphas: Option<String>,
    },
    /// Diagonal-hull entropy lower formula.
    L02 {
        /// One-column sigma CSV, non-increasing.
        #[arg(long)]
        sigma: Option<PathBuf>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        c: Option<f64>,
    },
    /// Weighted finite inequality ratio between two entropy sequences.
    Check {
        #[arg(long)]
        lhs: Option<PathBuf>,
        #[arg(long)]
        rhs: Option<PathBuf>,
        /// tt03 | th03 | enhil-i | enhil-ii | enhil-iii.
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        c_a: Option<f64>,
    },
    /// Ratio sup ||t_i|| / eps_1(A) of a generator set.
    Ca {
        #[command(flatten)]
        set: HullSetArgs,
    },
    /// Lorentz target parameters (p', alpha) of the hull map.
    Tt02 {
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        /// Second Lorentz index: a number or `inf`.
        #[arg(long)]
        s: Option<String>,
    },
    /// Finite-dimensional combinatorial lower bound.
    Schuett {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
    },
}

#[derive(Args, Clone)]
struct KernelBlock {
    /// power | logpower | doublelog.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    c0: Option<f64>,
    /// vo (Volterra) | ws (weakly singular).
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Args)]
struct KernelArgs {
    #[command(subcommand)]
    kind: KernelKind,
}

#[derive(Subcommand)]
enum KernelKind {
    /// Tail integral (int_0^r k^q)^{1/q}.
    Integral {
        #[command(flatten)]
        block: KernelBlock,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        /// Also emit the quadrature oracle value as a second row.
        #[arg(long)]
        oracle: bool,
    },
    /// Pseudo-metric distance table of a uniform grid on [0,1].
    Table {
        #[command(flatten)]
        block: KernelBlock,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Bracket check between the pseudo-metric and its tail integral.
    Sandwich {
        #[command(flatten)]
        block: KernelBlock,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
    },
    /// Entropy rate exponents of ([0,1], d) under the kernel pseudo-metric.
    Rate {
        #[command(flatten)]
        block: KernelBlock,
        #[arg(long)]
        q: Option<f64>,
    },
}

#[derive(Args)]
struct OperatorArgs {
    #[command(subcommand)]
    kind: OperatorKind,
}

#[derive(Subcommand)]
enum OperatorKind {
    /// Fractional integration of order alpha.
    Rl {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
        #[command(subcommand)]
        action: OperatorAction,
    },
    /// Convolution with a built-in kernel family.
    Conv {
        #[command(flatten)]
        block: KernelBlock,
        #[arg(long)]
        grid: Option<usize>,
        #[command(subcommand)]
        action: OperatorAction,
    },
}

#[derive(Subcommand)]
enum OperatorAction {
    /// Singular values of the scaled discretization.
    Sv {
        /// Fit the decay exponent and append it as a comment line.
        #[arg(long)]
        fit: bool,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Apply the operator to grid samples.
    Apply {
        /// One-column CSV with exactly grid_n samples.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Constant function value instead of a sample file.
        #[arg(long)]
        constant: Option<f64>,
    },
    /// Max-over-grid error of the fractional semigroup law (RL only).
    Semigroup {
        #[arg(long)]
        beta: Option<f64>,
        /// Polynomial coefficients c0,c1,.. (degree <= 6).
        #[arg(long)]
        coeffs: Option<String>,
    },
    /// Translation-smoothness bound of the operator image (Volterra only).
    Shift {
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        constant: Option<f64>,
    },
    /// Distance-net entropy lower bound.
    Net {
        /// rademacher | atoms | atoms-dyadic | means.
        #[arg(long)]
        kind: Option<String>,
        /// Block count, atom count, or dyadic level.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Kolmogorov-width bound into L_q.
    Rieli {
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        c: Option<f64>,
    },
    /// Set-to-image transfer bound on entropy data.
    Rl04 {
        /// i | ii.
        #[arg(long)]
        variant: Option<String>,
        /// One-column non-increasing entropy data CSV.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
    },
}

#[derive(Args)]
struct HardyArgs {
    #[command(subcommand)]
    kind: HardyKind,
}

#[derive(Subcommand)]
enum HardyKind {
    /// Weighted-sum inequality check.
    Lh1 {
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Sup-form inequality check.
    Lh2 {
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Enumerated constant from the sup-form proof.
    Constant {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        n_max: Option<usize>,
    },
}

#[derive(Args)]
struct FitArgs {
    /// Two-column CSV of (n, value) samples.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Also fit the log-log exponent r0 (default: two-regressor fit).
    #[arg(long)]
    r0: bool,
    #[arg(long)]
    n_min: Option<u64>,
    #[arg(long)]
    n_max: Option<u64>,
}

#[derive(Args)]
struct OracleArgs {
    /// th02 | th04 | entkh | entkh2 | rl03 | rl05 | rl06 | thsv | rl04-i.
    #[arg(long)]
    table: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Positive log-exponent slack for the borderline case that needs one.
    #[arg(long)]
    slack: Option<f64>,
    /// Set decay for the critical-line table: poly | exp.
    #[arg(long)]
    decay: Option<String>,
}

/// Parameter resolution: flag value, else config-file value, else default.
/// Every resolved pair is recorded for the config hash.
struct Ctx {
    command: String,
    file: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
}

impl Ctx {
    fn new(command: &str, file: BTreeMap<String, String>) -> Self {
        Ctx { command: command.to_string(), file, resolved: BTreeMap::new() }
    }

    fn resolve<T>(&mut self, key: &str, cli: Option<T>, default: Option<T>) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = match cli {
            Some(v) => v,
            None => match self.file.get(key) {
                Some(raw) => raw.parse().map_err(|e| {
                    Error::validation(format!("config key {key}: cannot parse {raw:?}: {e}"))
                })?,
                None => default.ok_or_else(|| {
                    Error::validation(format!("missing required parameter --{key} (or config key {key})"))
                })?,
            },
        };
        self.resolved.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    fn resolve_opt<T>(&mut self, key: &str, cli: Option<T>) -> Result<Option<T>>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = match cli {
            Some(v) => Some(v),
            None => match self.file.get(key) {
                Some(raw) => Some(raw.parse().map_err(|e| {
                    Error::validation(format!("config key {key}: cannot parse {raw:?}: {e}"))
                })?),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.resolved.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    fn flag(&mut self, key: &str, cli: bool) -> bool {
        let value = cli
            || matches!(
                self.file.get(key).map(String::as_str),
                Some("1") | Some("true") | Some("yes")
            );
        self.resolved.insert(key.to_string(), value.to_string());
        value
    }

    fn path(&mut self, key: &str, cli: Option<&Path>) -> Result<Option<PathBuf>> {
        let value = match cli {
            Some(p) => Some(p.to_path_buf()),
            None => self.file.get(key).map(PathBuf::from),
        };
        if let Some(p) = &value {
            self.resolved.insert(key.to_string(), p.display().to_string());
        }
        Ok(value)
    }

    fn required_path(&mut self, key: &str, cli: Option<&Path>) -> Result<PathBuf> {
        self.path(key, cli)?.ok_or_else(|| {
            Error::validation(format!("missing required parameter --{key} (or config key {key})"))
        })
    }

    /// The resolved configuration in canonical order, hashed into every CSV.
    fn canonical(&self) -> String {
        let mut s = format!("command={}", self.command);
        for (k, v) in &self.resolved {
            s.push('\n');
            s.push_str(k);
            s.push('=');
            s.push_str(v);
        }
        s
    }
}

fn load_config(path: Option<&Path>) -> Result<BTreeMap<String, String>> {
    let Some(path) = path else {
        return Ok(BTreeMap::new());
    };
    let text = fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::validation(format!(
                "config file line {}: expected key=value, got {line:?}",
                i + 1
            )));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// One CSV deliverable: header, rows, optional trailing comment lines and
/// plot data.
struct Doc {
    header: String,
    rows: Vec<Vec<String>>,
    trailer: Vec<String>,
    plot: Option<PlotData>,
}

impl Doc {
    fn new(header: &str, rows: Vec<Vec<String>>) -> Self {
        Doc { header: header.to_string(), rows, trailer: Vec::new(), plot: None }
    }
}

struct PlotData {
    title: String,
    series: Vec<(String, Vec<(f64, f64)>)>,
}

enum Output {
    Csv(Doc),
    Report { text: String, failures: usize },
}

/// Entry point used by the binary: parses arguments, runs, maps the error
/// class to the exit code (0 ok, 2 validation, 3 numeric, 4 resource).
pub fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn init_threads() {
    if let Ok(v) = std::env::var("ENTLAB_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let file_cfg = load_config(cli.config.as_deref())?;
    let (ctx, output) = dispatch(&cli.command, file_cfg, cli.seed)?;
    match output {
        Output::Csv(doc) => {
            match (&cli.plot, &doc.plot) {
                (Some(path), Some(data)) => {
                    fs::write(path, plot_script(data, path))?;
                }
                (Some(_), None) => {
                    return Err(Error::validation(
                        "--plot is only available for commands that produce sequences \
                         (operator sv, hull bounds, fit)",
                    ))
                }
                _ => {}
            }
            let mut text = render_csv(&ctx.canonical(), &doc.header, &doc.rows);
            for line in &doc.trailer {
                text.push_str(line);
                text.push('\n');
            }
            write_out(cli.out.as_deref(), &text)
        }
        Output::Report { text, failures } => {
            if cli.plot.is_some() {
                return Err(Error::validation("--plot is not available for verify"));
            }
            write_out(cli.out.as_deref(), &text)?;
            if failures > 0 {
                return Err(Error::numeric(format!("{failures} invariant group(s) failed")));
            }
            Ok(())
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(
    command: &Command,
    cfg: BTreeMap<String, String>,
    seed: Option<u64>,
) -> Result<(Ctx, Output)> {
    match command {
        Command::Cover(a) => {
            let mut ctx = Ctx::new("cover", cfg);
            let out = cmd_cover(a, &mut ctx)?;
            Ok((ctx, out))
        }
        Command::Hull(a) => {
            let path = match &a.kind {
                HullKind::Bounds { .. } => "hull.bounds",
                HullKind::Steinwart { .. } => "hull.steinwart",
                HullKind::L02 { .. } => "hull.l02",
                HullKind::Check { .. } => "hull.check",
                HullKind::Ca { .. } => "hull.ca",
                HullKind::Tt02 { .. } => "hull.tt02",
                HullKind::Schuett { .. } => "hull.schuett",
            };
            let mut ctx = Ctx::new(path, cfg);
            let out = cmd_hull(&a.kind, &mut ctx)?;
            Ok((ctx, out))
        }
        Command::Kernel(a) => {
            let path = match &a.kind {
                KernelKind::Integral { .. } => "kernel.integral",
                KernelKind::Table { .. } => "kernel.table",
                KernelKind::Sandwich { .. } => "kernel.sandwich",
                KernelKind::Rate { .. } => "kernel.rate",
            };
            let mut ctx = Ctx::new(path, cfg);
            let out = cmd_kernel(a, &mut ctx)?;
            Ok((ctx, out))
        }
        Command::Operator(a) => {
            let action = match &a.kind {
                OperatorKind::Rl { action, .. } | OperatorKind::Conv { action, .. } => action,
            };
            let base = match &a.kind {
                OperatorKind::Rl { .. } => "operator.rl",
                OperatorKind::Conv { .. } => "operator.conv",
            };
            let leaf = match action {
                OperatorAction::Sv { .. } => "sv",
                OperatorAction::Apply { .. } => "apply",
                OperatorAction::Semigroup { .. } => "semigroup",
                OperatorAction::Shift { .. } => "shift",
                OperatorAction::Net { .. } => "net",
                OperatorAction::Rieli { .. } => "rieli",
                OperatorAction::Rl04 { .. } => "rl04",
            };
            let mut ctx = Ctx::new(&format!("{base}.{leaf}"), cfg);
            let out = cmd_operator(&a.kind, &mut ctx)?;
            Ok((ctx, out))
        }
        Command::Hardy(a) => {
            let path = match &a.kind {
                HardyKind::Lh1 { .. } => "hardy.lh1",
                HardyKind::Lh2 { .. } => "hardy.lh2",
                HardyKind::Constant { .. } => "hardy.constant",
            };
            let mut ctx = Ctx::new(path, cfg);
            let out = cmd_hardy(&a.kind, &mut ctx)?;
            Ok((ctx, out))
        }
        Command::Fit(a) => {
            let mut ctx = Ctx::new("fit", cfg);
            let out = cmd_fit(a, &mut ctx)?;
            Ok((ctx, out))
        }
        Command::Oracle(a) => {
            let mut ctx = Ctx::new("oracle", cfg);
            let out = cmd_oracle(a, &mut ctx)?;
            Ok((ctx, out))
        }
        Command::Verify => {
            let mut ctx = Ctx::new("verify", cfg);
            let seed = ctx.resolve("seed", seed, Some(7))?;
            let (text, failures) = run_verify(seed);
            Ok((ctx, Output::Report { text, failures }))
        }
    }
}

fn parse_norm(raw: &str) -> Result<Norm> {
    if raw.eq_ignore_ascii_case("inf") {
        return Ok(Norm::Inf);
    }
    let p: f64 = raw
        .parse()
        .map_err(|_| Error::validation(format!("norm must be a p-exponent or `inf`, got {raw:?}")))?;
    Norm::P(p).validate()
}

fn parse_mode(raw: &str) -> Result<KernelMode> {
    match raw.to_ascii_lowercase().as_str() {
        "vo" | "volterra" => Ok(KernelMode::Volterra),
        "ws" | "weakly-singular" => Ok(KernelMode::WeaklySingular),
        other => Err(Error::validation(format!("mode must be vo or ws, got {other:?}"))),
    }
}

fn parse_method(raw: &str) -> Result<CoverMethod> {
    match raw.to_ascii_lowercase().as_str() {
        "exact" => Ok(CoverMethod::Exact),
        "greedy" => Ok(CoverMethod::Greedy),
        "packing" => Ok(CoverMethod::Packing),
        other => Err(Error::validation(format!(
            "method must be exact, greedy, or packing, got {other:?}"
        ))),
    }
}

fn parse_f64_list(raw: &str, key: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| Error::validation(format!("{key}: cannot parse {f:?} as a number")))
        })
        .collect()
}

/// Builds the kernel spec from a resolved block (flags over config keys).
fn kernel_block_spec(block: &KernelBlock, ctx: &mut Ctx) -> Result<KernelSpec> {
    let family = ctx.resolve("family", block.family.clone(), Some("power".to_string()))?;
    let mode = parse_mode(&ctx.resolve("mode", block.mode.clone(), Some("vo".to_string()))?)?;
    let tau = ctx.resolve("tau", block.tau, None)?;
    match family.to_ascii_lowercase().as_str() {
        "power" => KernelSpec::power(tau, mode),
        "logpower" => {
            let beta = ctx.resolve("beta", block.beta, None)?;
            let c0 = ctx.resolve("c0", block.c0, Some(1.0))?;
            KernelSpec::log_power(tau, beta, c0, mode)
        }
        "doublelog" => {
            let beta = ctx.resolve("beta", block.beta, None)?;
            let gamma = ctx.resolve("gamma", block.gamma, None)?;
            let c0 = ctx.resolve("c0", block.c0, Some(1.0))?;
            KernelSpec::double_log(tau, beta, gamma, c0, mode)
        }
        other => Err(Error::validation(format!(
            "family must be power, logpower, or doublelog, got {other:?}"
        ))),
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::validation(format!("cannot read {}: {e}", path.display())))
}

fn load_monotone(path: &Path) -> Result<MonotoneSeq> {
    MonotoneSeq::new(read_sequence(&read_file(path)?)?)
}

fn cloud_from_args(
    ctx: &mut Ctx,
    input: Option<&Path>,
    table: Option<&Path>,
    norm: Option<String>,
) -> Result<PointCloud> {
    let norm = parse_norm(&ctx.resolve("norm", norm, Some("2".to_string()))?)?;
    let input = ctx.path("input", input)?;
    let table = ctx.path("table", table)?;
    match (input, table) {
        (Some(points), None) => PointCloud::new(read_points(&read_file(&points)?)?, norm),
        (None, Some(tbl)) => {
            let table = read_square_table(&read_file(&tbl)?)?;
            // Index placeholders carry the size; the table supplies distances.
            let points = (0..table.len()).map(|i| vec![i as f64]).collect();
            PointCloud::new(points, norm)?.with_table(table, 1e-9)
        }
        (Some(_), Some(_)) => {
            Err(Error::validation("pass either --input or --table, not both"))
        }
        (None, None) => Err(Error::validation("one of --input or --table is required")),
    }
}

fn cmd_cover(a: &CoverArgs, ctx: &mut Ctx) -> Result<Output> {
    let cloud = cloud_from_args(ctx, a.input.as_deref(), a.table.as_deref(), a.norm.clone())?;
    let method = parse_method(&ctx.resolve("method", a.method.clone(), Some("greedy".to_string()))?)?;
    let entropy = ctx.resolve_opt("entropy", a.entropy)?;
    let mut rows = Vec::new();
    if let Some(n_max) = entropy {
        let eps = entropy_numbers(&cloud, n_max, method)?;
        for (i, e) in eps.iter().enumerate() {
            rows.push(vec![fmt_f64(*e), (i + 1).to_string(), method.to_string()]);
        }
    } else {
        let eps = ctx.resolve("eps", a.eps, None)?;
        let res = match method {
            CoverMethod::Exact => exact_cover(&cloud, eps)?,
            CoverMethod::Greedy => greedy_cover(&cloud, eps)?,
            CoverMethod::Packing => packing_lower(&cloud, eps)?,
        };
        rows.push(vec![fmt_f64(res.epsilon), res.count.to_string(), res.method.to_string()]);
    }
    Ok(Output::Csv(Doc::new("epsilon,count,kind", rows)))
}

fn hull_spec_from(set: &HullSetArgs, ctx: &mut Ctx) -> Result<HullSpec> {
    let generators = ctx.path("generators", set.generators.as_deref())?;
    let sigma = ctx.path("sigma", set.sigma.as_deref())?;
    match (generators, sigma) {
        (Some(path), None) => {
            HullSpec::new(read_points(&read_file(&path)?)?, Norm::P(2.0))
        }
        (None, Some(path)) => {
            let sigma = load_monotone(&path)?;
            let p = ctx.resolve("p", set.p, Some(2.0))?;
            let dim = ctx.resolve("dim", set.dim, Some(sigma.len()))?;
            diag_set(&sigma, p, dim)
        }
        (Some(_), Some(_)) => {
            Err(Error::validation("pass either --generators or --sigma, not both"))
        }
        (None, None) => Err(Error::validation("one of --generators or --sigma is required")),
    }
}

fn cmd_hull(kind: &HullKind, ctx: &mut Ctx) -> Result<Output> {
    match kind {
        HullKind::Bounds { set, mesh, n_max, max_points } => {
            let spec = hull_spec_from(set, ctx)?;
            let mesh = ctx.resolve("mesh", *mesh, Some(0.1))?;
            let n_max = ctx.resolve("n-max", *n_max, Some(4))?;
            let max_points = ctx.resolve("max-points", *max_points, Some(hull::NET_POINT_CAP))?;
            let table = hull::hull_entropy_bounds_upto(&spec, mesh, n_max, max_points)?;
            let rows = table
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        fmt_f64(r.lower),
                        fmt_f64(r.upper),
                        fmt_f64(table.delta),
                        fmt_f64(table.mesh),
                    ]
                })
                .collect();
            let mut doc = Doc::new("n,lower,upper,delta,mesh", rows);
            doc.plot = Some(PlotData {
                title: format!("hull entropy brackets (mesh {mesh})"),
                series: vec![
                    (
                        "lower".to_string(),
                        table.rows.iter().map(|r| (r.n as f64, r.lower)).collect(),
                    ),
                    (
                        "upper".to_string(),
                        table.rows.iter().map(|r| (r.n as f64, r.upper)).collect(),
                    ),
                ],
            });
            Ok(Output::Csv(doc))
        }
        HullKind::Steinwart { data, n, p, t, c_t, tau_p, alphas, log2_alphas } => {
            let data = load_monotone(&ctx.required_path("data", data.as_deref())?)?;
            let alphas_raw = ctx.resolve_opt("alphas", alphas.clone())?;
            let log2_raw = ctx.resolve_opt("log2-alphas", log2_alphas.clone())?;
            let alphas = match (alphas_raw, log2_raw) {
                (Some(list), None) => AlphaList::Exact(
                    list.split(',')
                        .map(|f| {
                            f.trim().parse::<u64>().map_err(|_| {
                                Error::validation(format!("alphas: {f:?} is not a positive integer"))
                            })
                        })
                        .collect::<Result<_>>()?,
                ),
                (None, Some(list)) => AlphaList::Log2(parse_f64_list(&list, "log2-alphas")?),
                (Some(_), Some(_)) => {
                    return Err(Error::validation("pass either --alphas or --log2-alphas, not both"))
                }
                (None, None) => {
                    return Err(Error::validation("one of --alphas or --log2-alphas is required"))
                }
            };
            let n = ctx.resolve("n", *n, Some(alphas.len()))?;
            let params = SteinwartParams {
                p: ctx.resolve("p", *p, Some(2.0))?,
                t: ctx.resolve("t", *t, Some(1.0))?,
                c_t: ctx.resolve("c-t", *c_t, Some(1.0))?,
                tau_p: ctx.resolve("tau-p", *tau_p, Some(1.0))?,
                alphas,
            };
            let bound = hull::steinwart_upper(&data, &params, n)?;
            let rows = vec![vec![
                bound.m.to_string(),
                fmt_f64(bound.bound),
                u8::from(bound.truncated).to_string(),
            ]];
            Ok(Output::Csv(Doc::new("m,bound,truncated", rows)))
        }
        HullKind::L02 { sigma, p, n, c } => {
            let sigma = load_monotone(&ctx.required_path("sigma", sigma.as_deref())?)?;
            let p = ctx.resolve("p", *p, Some(2.0))?;
            let n = ctx.resolve("n", *n, None)?;
            let c = ctx.resolve("c", *c, Some(1.0))?;
            let out = hull::l02_lower(&sigma, p, n, c)?;
            let rows = vec![vec![
                n.to_string(),
                fmt_f64(out.value),
                u8::from(out.truncated).to_string(),
            ]];
            Ok(Output::Csv(Doc::new("n,value,truncated", rows)))
        }
        HullKind::Check { lhs, rhs, preset, r, s, alpha, beta, n_max, c_a } => {
            let lhs = load_monotone(&ctx.required_path("lhs", lhs.as_deref())?)?;
            let rhs = load_monotone(&ctx.required_path("rhs", rhs.as_deref())?)?;
            let preset_name = ctx.resolve("preset", preset.clone(), None)?;
            let n_max = ctx.resolve("n-max", *n_max, Some(lhs.len().min(rhs.len())))?;
            let c_a = ctx.resolve("c-a", *c_a, Some(1.0))?;
            let preset = match preset_name.to_ascii_lowercase().as_str() {
                "tt03" => WeightPreset::Tt03 {
                    r: ctx.resolve("r", *r, None)?,
                    s: ctx.resolve("s", *s, None)?,
                    alpha: ctx.resolve("alpha", *alpha, None)?,
                },
                "th03" => WeightPreset::Th03 { r: ctx.resolve("r", *r, None)? },
                "enhil-i" => WeightPreset::Enhil {
                    case: EnhilCase::I,
                    r: ctx.resolve("r", *r, None)?,
                    beta: ctx.resolve("beta", *beta, Some(0.0))?,
                },
                "enhil-ii" => WeightPreset::Enhil {
                    case: EnhilCase::II,
                    r: ctx.resolve("r", *r, Some(2.0))?,
                    beta: ctx.resolve("beta", *beta, None)?,
                },
                "enhil-iii" => WeightPreset::Enhil {
                    case: EnhilCase::III,
                    r: ctx.resolve("r", *r, None)?,
                    beta: ctx.resolve("beta", *beta, Some(0.0))?,
                },
                other => {
                    return Err(Error::validation(format!(
                        "preset must be tt03, th03, enhil-i, enhil-ii, or enhil-iii, got {other:?}"
                    )))
                }
            };
            let ratio = hull::finite_inequality_check(&lhs, &rhs, preset, n_max, c_a)?;
            let rows = vec![vec![preset_name, n_max.to_string(), fmt_f64(ratio)]];
            Ok(Output::Csv(Doc::new("preset,n_max,ratio", rows)))
        }
        HullKind::Ca { set } => {
            let spec = hull_spec_from(set, ctx)?;
            let value = hull::c_A_ratio(&spec)?;
            let rows = vec![vec!["c_A".to_string(), fmt_f64(value)]];
            Ok(Output::Csv(Doc::new("quantity,value", rows)))
        }
        HullKind::Tt02 { p, r, s } => {
            let p = ctx.resolve("p", *p, None)?;
            let r = ctx.resolve("r", *r, None)?;
            let s_raw = ctx.resolve("s", s.clone(), Some("inf".to_string()))?;
            let s = if s_raw.eq_ignore_ascii_case("inf") {
                SIndex::Infinity
            } else {
                SIndex::Finite(s_raw.parse().map_err(|_| {
                    Error::validation(format!("s must be a number or `inf`, got {s_raw:?}"))
                })?)
            };
            let (p_prime, alpha) = hull::tt02_params(p, r, s)?;
            let rows = vec![vec![fmt_f64(p_prime), fmt_f64(alpha)]];
            Ok(Output::Csv(Doc::new("p_prime,alpha", rows)))
        }
        HullKind::Schuett { n, m, p, c } => {
            let n = ctx.resolve("n", *n, None)?;
            let m = ctx.resolve("m", *m, None)?;
            let p = ctx.resolve("p", *p, Some(2.0))?;
            let c = ctx.resolve("c", *c, Some(1.0))?;
            let value = hull::schuett_gg_lower(n, m, p, c)?;
            let rows = vec![vec![n.to_string(), m.to_string(), fmt_f64(value)]];
            Ok(Output::Csv(Doc::new("n,m,value", rows)))
        }
    }
}

fn cmd_kernel(a: &KernelArgs, ctx: &mut Ctx) -> Result<Output> {
    let block = match &a.kind {
        KernelKind::Integral { block, .. }
        | KernelKind::Table { block, .. }
        | KernelKind::Sandwich { block, .. }
        | KernelKind::Rate { block, .. } => block,
    };
    let spec = kernel_block_spec(block, ctx)?;
    match &a.kind {
        KernelKind::Integral { q, r, oracle, .. } => {
            let q = ctx.resolve("q", *q, None)?;
            let r = ctx.resolve("r", *r, None)?;
            let oracle = ctx.flag("oracle", *oracle);
            let mut rows = vec![vec![
                fmt_f64(q),
                fmt_f64(r),
                fmt_f64(kernel_q_integral(&spec, q, r)?),
                "AUTO".to_string(),
            ]];
            if oracle {
                rows.push(vec![
                    fmt_f64(q),
                    fmt_f64(r),
                    fmt_f64(kernel_q_integral_quadrature(&spec, q, r, 1e-10)?),
                    "QUAD".to_string(),
                ]);
            }
            Ok(Output::Csv(Doc::new("q,r,value,source", rows)))
        }
        KernelKind::Table { q, grid, .. } => {
            let q = ctx.resolve("q", *q, None)?;
            let grid = ctx.resolve("grid", *grid, Some(33))?;
            let cloud = sampled_interval_metric(&spec, q, grid)?;
            let n = cloud.len();
            let header: Vec<String> = (1..=n).map(|i| format!("d{i}")).collect();
            let rows = (0..n)
                .map(|i| (0..n).map(|j| fmt_f64(cloud.dist(i, j))).collect())
                .collect();
            Ok(Output::Csv(Doc::new(&header.join(","), rows)))
        }
        KernelKind::Sandwich { q, s, t, .. } => {
            let q = ctx.resolve("q", *q, None)?;
            let s = ctx.resolve("s", *s, None)?;
            let t = ctx.resolve("t", *t, None)?;
            let out = kernel::sandwich_check(&spec, q, s, t)?;
            let rows = vec![vec![
                fmt_f64(out.base),
                fmt_f64(out.d),
                fmt_f64(out.lower),
                fmt_f64(out.upper),
                u8::from(out.passed).to_string(),
            ]];
            Ok(Output::Csv(Doc::new("base,d,lower,upper,passed", rows)))
        }
        KernelKind::Rate { q, .. } => {
            let q = ctx.resolve("q", *q, None)?;
            let formula = kernel::interval_rate_under_d(&spec, q)?;
            Ok(Output::Csv(Doc::new("C,p0,q0,r0,residual,condition", vec![formula_row(
                &formula, 0.0, 0.0,
            )])))
        }
    }
}

fn formula_row(f: &RateFormula, residual: f64, condition: f64) -> Vec<String> {
    vec![
        fmt_f64(f.c),
        fmt_f64(f.p0),
        fmt_f64(f.q0),
        fmt_f64(f.r0),
        fmt_f64(residual),
        fmt_f64(condition),
    ]
}

/// The convolution spec a fractional-integration kernel presents to the
/// net and width bounds, which are stated for decreasing singular kernels.
fn rl_as_conv_spec(alpha: f64) -> Result<KernelSpec> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::validation(format!(
            "net and width bounds need a decreasing singular kernel: order must lie in (0, 1), got {alpha}"
        )));
    }
    let gamma = libm::tgamma(alpha);
    KernelSpec::custom(
        Arc::new(move |u: f64| u.powf(alpha - 1.0) / gamma),
        1.0 - alpha,
        KernelMode::Volterra,
    )
}

fn cmd_operator(kind: &OperatorKind, ctx: &mut Ctx) -> Result<Output> {
    let (op_kernel, grid, action) = match kind {
        OperatorKind::Rl { alpha, grid, action } => {
            let alpha = ctx.resolve("alpha", *alpha, None)?;
            let grid = ctx.resolve("grid", *grid, Some(256))?;
            (OpKernel::RiemannLiouville { alpha }, grid, action)
        }
        OperatorKind::Conv { block, grid, action } => {
            let spec = kernel_block_spec(block, ctx)?;
            let grid = ctx.resolve("grid", *grid, Some(256))?;
            (OpKernel::Convolution(spec), grid, action)
        }
    };
    // The spec used by bounds that take a kernel, not a discretization.
    let bound_spec = || -> Result<KernelSpec> {
        match &op_kernel {
            OpKernel::Convolution(spec) => Ok(spec.clone()),
            OpKernel::RiemannLiouville { alpha } => rl_as_conv_spec(*alpha),
        }
    };
    let load_samples = |ctx: &mut Ctx,
                        input: Option<&Path>,
                        constant: Option<f64>,
                        grid: usize|
     -> Result<Vec<f64>> {
        let input = ctx.path("input", input)?;
        let constant = ctx.resolve_opt("constant", constant)?;
        match (input, constant) {
            (Some(path), None) => read_sequence(&read_file(&path)?),
            (None, Some(v)) => Ok(vec![v; grid]),
            (Some(_), Some(_)) => {
                Err(Error::validation("pass either --input or --constant, not both"))
            }
            (None, None) => Err(Error::validation("one of --input or --constant is required")),
        }
    };
    match action {
        OperatorAction::Sv { fit, n_max } => {
            let fit = ctx.flag("fit", *fit);
            let op = DiscretizedOperator::new(op_kernel, grid)?;
            let sv = singular_values(&op)?;
            let n_max = ctx.resolve("n-max", *n_max, Some(sv.len()))?.min(sv.len());
            let rows = (1..=n_max)
                .map(|n| vec![n.to_string(), fmt_f64(sv.value(n)), "SV".to_string()])
                .collect();
            let mut doc = Doc::new("n,value,source", rows);
            let mut series = vec![(
                "singular values".to_string(),
                (1..=n_max).map(|n| (n as f64, sv.value(n))).collect::<Vec<_>>(),
            )];
            if fit {
                let fitted = fit_sv_exponent(&sv, grid)?;
                doc.trailer.push(format!(
                    "# fit C={} p0={} q0={} r0={} residual={} condition={}",
                    fmt_f64(fitted.formula.c),
                    fmt_f64(fitted.formula.p0),
                    fmt_f64(fitted.formula.q0),
                    fmt_f64(fitted.formula.r0),
                    fmt_f64(fitted.residual),
                    fmt_f64(fitted.condition),
                ));
                series.push((
                    "fitted rate".to_string(),
                    (1..=n_max).map(|n| (n as f64, fitted.formula.eval(n as u64))).collect(),
                ));
            }
            doc.plot = Some(PlotData {
                title: format!("singular values (grid {grid})"),
                series,
            });
            Ok(Output::Csv(doc))
        }
        OperatorAction::Apply { input, constant } => {
            let op = DiscretizedOperator::new(op_kernel, grid)?;
            let f = load_samples(ctx, input.as_deref(), *constant, grid)?;
            let image = op.apply(&f)?;
            let rows = image
                .iter()
                .enumerate()
                .map(|(i, v)| vec![(i + 1).to_string(), fmt_f64(*v), "APPLY".to_string()])
                .collect();
            Ok(Output::Csv(Doc::new("n,value,source", rows)))
        }
        OperatorAction::Semigroup { beta, coeffs } => {
            let OpKernel::RiemannLiouville { alpha } = op_kernel else {
                return Err(Error::validation(
                    "the semigroup law is a fractional-integration statement; use operator rl",
                ));
            };
            let beta = ctx.resolve("beta", *beta, None)?;
            let coeffs_raw = ctx.resolve("coeffs", coeffs.clone(), Some("1".to_string()))?;
            let coeffs = parse_f64_list(&coeffs_raw, "coeffs")?;
            let err = semigroup_check(alpha, beta, &coeffs, grid)?;
            let rows = vec![vec![grid.to_string(), fmt_f64(err), "SEMIGROUP_MAX_ERR".to_string()]];
            Ok(Output::Csv(Doc::new("n,value,source", rows)))
        }
        OperatorAction::Shift { p, delta, input, constant } => {
            let p_raw = ctx.resolve("p", p.map(|v| v.to_string()), Some("2".to_string()))?;
            let p = if p_raw.eq_ignore_ascii_case("inf") {
                f64::INFINITY
            } else {
                p_raw.parse().map_err(|_| {
                    Error::validation(format!("p must be a number or `inf`, got {p_raw:?}"))
                })?
            };
            let delta = ctx.resolve("delta", *delta, None)?;
            let f = load_samples(ctx, input.as_deref(), *constant, grid)?;
            let op = DiscretizedOperator::new(op_kernel, f.len())?;
            let out = shift_modulus_check_with(&op, p, delta, &f)?;
            let rows = vec![
                vec![grid.to_string(), fmt_f64(out.lhs), "SHIFT_LHS".to_string()],
                vec![grid.to_string(), fmt_f64(out.rhs), "SHIFT_RHS".to_string()],
                vec![grid.to_string(), u8::from(out.passed).to_string(), "SHIFT_PASSED".to_string()],
            ];
            Ok(Output::Csv(Doc::new("n,value,source", rows)))
        }
        OperatorAction::Net { kind, n, p } => {
            let spec = bound_spec()?;
            let kind_raw = ctx.resolve("kind", kind.clone(), None)?;
            let n = ctx.resolve("n", *n, None)?;
            let net = match kind_raw.to_ascii_lowercase().as_str() {
                "rademacher" => net_lower_rademacher(&spec, n)?,
                "atoms" => {
                    let p = ctx.resolve("p", *p, Some(2.0))?;
                    net_lower_kernel_atoms(&spec, p, n)?
                }
                "atoms-dyadic" => {
                    let p = ctx.resolve("p", *p, Some(2.0))?;
                    net_lower_kernel_atoms_dyadic(&spec, p, n)?
                }
                "means" => {
                    let p = ctx.resolve("p", *p, Some(2.0))?;
                    net_lower_means(&spec, p, n)?
                }
                other => {
                    return Err(Error::validation(format!(
                        "kind must be rademacher, atoms, atoms-dyadic, or means, got {other:?}"
                    )))
                }
            };
            let tag = net.net_kind.to_string();
            let mut rows = vec![
                vec![net.m_or_n.to_string(), fmt_f64(net.separation), format!("{tag}_SEPARATION")],
                vec![
                    net.m_or_n.to_string(),
                    fmt_f64(net.log2_cardinality),
                    format!("{tag}_LOG2_CARDINALITY"),
                ],
                vec![net.m_or_n.to_string(), fmt_f64(net.bound()), format!("{tag}_BOUND")],
            ];
            if let Some(idx) = net.entropy_index() {
                rows.push(vec![idx.to_string(), fmt_f64(net.bound()), "EPS_LOWER_AT_INDEX".to_string()]);
            }
            Ok(Output::Csv(Doc::new("n,value,source", rows)))
        }
        OperatorAction::Rieli { q, n, c } => {
            let spec = bound_spec()?;
            let q = ctx.resolve("q", *q, None)?;
            let n = ctx.resolve("n", *n, None)?;
            let c = ctx.resolve("c", *c, Some(1.0))?;
            let value = operator::rieli_bound(&spec, q, n, c)?;
            let rows = vec![vec![n.to_string(), fmt_f64(value), "RIELI".to_string()]];
            Ok(Output::Csv(Doc::new("n,value,source", rows)))
        }
        OperatorAction::Rl04 { variant, data, n, rho, gamma, p } => {
            let data = load_monotone(&ctx.required_path("data", data.as_deref())?)?;
            let variant_raw = ctx.resolve("variant", variant.clone(), None)?;
            let n = ctx.resolve("n", *n, None)?;
            let (variant, tag) = match variant_raw.to_ascii_lowercase().as_str() {
                "i" => (
                    Rl04Variant::I {
                        rho: ctx.resolve("rho", *rho, None)?,
                        gamma: ctx.resolve("gamma", *gamma, Some(0.0))?,
                        p: ctx.resolve("p", *p, Some(2.0))?,
                    },
                    "RL04_I",
                ),
                "ii" => (Rl04Variant::II, "RL04_II"),
                other => {
                    return Err(Error::validation(format!("variant must be i or ii, got {other:?}")))
                }
            };
            let out = rl04_bound(&data, &variant, n)?;
            let rows = vec![
                vec![n.to_string(), fmt_f64(out.value), tag.to_string()],
                vec![n.to_string(), u8::from(out.truncated).to_string(), "TRUNCATED".to_string()],
            ];
            Ok(Output::Csv(Doc::new("n,value,source", rows)))
        }
    }
}

/// Exponent fit for a singular-value sequence: log-spaced sample indices
/// kept within the grid-accurate range (n at most grid/8).
fn fit_sv_exponent(sv: &MonotoneSeq, grid: usize) -> Result<crate::rates::RateFit> {
    let cap = (grid / 8).min(sv.len());
    let candidates: &[u64] = &[4, 6, 9, 13, 19, 28, 42, 63];
    let samples: Vec<(u64, f64)> = candidates
        .iter()
        .filter(|&&n| n as usize <= cap)
        .map(|&n| (n, sv.value(n as usize)))
        .collect();
    if samples.len() < crate::rates::MIN_FIT_SAMPLES {
        return Err(Error::validation(format!(
            "grid {grid} leaves too few accurate singular values to fit; use a finer grid"
        )));
    }
    fit_rate_samples(&samples, false)
}

fn cmd_hardy(kind: &HardyKind, ctx: &mut Ctx) -> Result<Output> {
    match kind {
        HardyKind::Lh1 { data, t, r, s, alpha, n_max } => {
            let seq = load_monotone(&ctx.required_path("data", data.as_deref())?)?;
            let t = ctx.resolve("t", *t, None)?;
            let r = ctx.resolve("r", *r, None)?;
            let s = ctx.resolve("s", *s, Some(r))?;
            let alpha = ctx.resolve("alpha", *alpha, Some(0.0))?;
            let n_max = ctx.resolve("n-max", *n_max, Some(seq.len()))?;
            let out = lh1_check(&seq, t, r, s, alpha, n_max)?;
            Ok(Output::Csv(Doc::new("lhs,rhs,ratio,argmax", vec![hardy_row(&out)])))
        }
        HardyKind::Lh2 { data, t, r, alpha, n_max } => {
            let seq = load_monotone(&ctx.required_path("data", data.as_deref())?)?;
            let t = ctx.resolve("t", *t, None)?;
            let r = ctx.resolve("r", *r, None)?;
            let alpha = ctx.resolve("alpha", *alpha, Some(0.0))?;
            let n_max = ctx.resolve("n-max", *n_max, Some(seq.len()))?;
            let out = lh2_check(&seq, t, r, alpha, n_max)?;
            Ok(Output::Csv(Doc::new("lhs,rhs,ratio,argmax", vec![hardy_row(&out)])))
        }
        HardyKind::Constant { t, r, alpha, n_max } => {
            let t = ctx.resolve("t", *t, None)?;
            let r = ctx.resolve("r", *r, None)?;
            let alpha = ctx.resolve("alpha", *alpha, Some(0.0))?;
            let n_max = ctx.resolve("n-max", *n_max, Some(1_000_000))?;
            let value = lh2_proof_constant(t, r, alpha, n_max)?;
            let rows = vec![vec![
                fmt_f64(t),
                fmt_f64(r),
                fmt_f64(alpha),
                n_max.to_string(),
                fmt_f64(value),
            ]];
            Ok(Output::Csv(Doc::new("t,r,alpha,n_max,value", rows)))
        }
    }
}

fn hardy_row(out: &crate::seqspace::HardyCheck) -> Vec<String> {
    vec![
        fmt_f64(out.lhs),
        fmt_f64(out.rhs),
        fmt_f64(out.ratio),
        out.argmax_lhs.to_string(),
    ]
}

fn cmd_fit(a: &FitArgs, ctx: &mut Ctx) -> Result<Output> {
    let path = ctx.required_path("input", a.input.as_deref())?;
    let fit_r0 = ctx.flag("r0", a.r0);
    let n_min = ctx.resolve_opt("n-min", a.n_min)?.unwrap_or(1);
    let n_max = ctx.resolve_opt("n-max", a.n_max)?.unwrap_or(u64::MAX);
    let mut samples = Vec::new();
    for row in read_points(&read_file(&path)?)? {
        if row.len() != 2 {
            return Err(Error::validation("fit input must be two columns: n,value"));
        }
        let n = row[0];
        if !(n.fract() == 0.0 && n >= 1.0) {
            return Err(Error::validation(format!("sample index must be a positive integer, got {n}")));
        }
        let n = n as u64;
        if (n_min..=n_max).contains(&n) {
            samples.push((n, row[1]));
        }
    }
    let fit = fit_rate_samples(&samples, fit_r0)?;
    let mut doc = Doc::new(
        "C,p0,q0,r0,residual,condition",
        vec![formula_row(&fit.formula, fit.residual, fit.condition)],
    );
    doc.plot = Some(PlotData {
        title: "rate fit".to_string(),
        series: vec![
            ("data".to_string(), samples.iter().map(|&(n, v)| (n as f64, v)).collect()),
            (
                "fitted rate".to_string(),
                samples.iter().map(|&(n, _)| (n as f64, fit.formula.eval(n))).collect(),
            ),
        ],
    });
    Ok(Output::Csv(doc))
}

fn cmd_oracle(a: &OracleArgs, ctx: &mut Ctx) -> Result<Output> {
    let table = ctx.resolve("table", a.table.clone(), None)?;
    let query = match table.to_ascii_lowercase().replace('_', "-").as_str() {
        "th02" => RateQuery::Th02 {
            p: ctx.resolve("p", a.p, None)?,
            tau: ctx.resolve("tau", a.tau, None)?,
            beta: ctx.resolve("beta", a.beta, Some(0.0))?,
        },
        "th04" => RateQuery::Th04 {
            p: ctx.resolve("p", a.p, None)?,
            tau: ctx.resolve("tau", a.tau, None)?,
            beta: ctx.resolve("beta", a.beta, Some(0.0))?,
            gamma: ctx.resolve("gamma", a.gamma, Some(0.0))?,
            slack: ctx.resolve_opt("slack", a.slack)?,
        },
        "entkh" => RateQuery::Entkh {
            tau: ctx.resolve("tau", a.tau, None)?,
            beta: ctx.resolve("beta", a.beta, Some(0.0))?,
            gamma: ctx.resolve("gamma", a.gamma, Some(0.0))?,
        },
        "entkh2" => RateQuery::Entkh2 {
            tau: ctx.resolve("tau", a.tau, None)?,
            beta: ctx.resolve("beta", a.beta, Some(0.0))?,
            gamma: ctx.resolve("gamma", a.gamma, Some(0.0))?,
        },
        "rl03" => RateQuery::Rl03 {
            p: ctx.resolve("p", a.p, None)?,
            q: ctx.resolve("q", a.q, None)?,
            alpha: ctx.resolve("alpha", a.alpha, None)?,
        },
        "rl05" => RateQuery::Rl05 {
            p: ctx.resolve("p", a.p, None)?,
            alpha: ctx.resolve("alpha", a.alpha, None)?,
            delta: ctx.resolve("delta", a.delta, None)?,
            theta: ctx.resolve("theta", a.theta, Some(0.0))?,
        },
        "rl06" => {
            let decay_raw = ctx.resolve("decay", a.decay.clone(), Some("poly".to_string()))?;
            let delta = ctx.resolve("delta", a.delta, None)?;
            let decay = match decay_raw.to_ascii_lowercase().as_str() {
                "poly" | "polynomial" => Rl06Decay::Polynomial { delta },
                "exp" | "exponential" => Rl06Decay::Exponential { delta },
                other => {
                    return Err(Error::validation(format!("decay must be poly or exp, got {other:?}")))
                }
            };
            RateQuery::Rl06 { beta: ctx.resolve("beta", a.beta, None)?, decay }
        }
        "thsv" => RateQuery::Thsv {
            p: ctx.resolve("p", a.p, None)?,
            tau: ctx.resolve("tau", a.tau, None)?,
        },
        "rl04-i" => RateQuery::Rl04I {
            p: ctx.resolve("p", a.p, None)?,
            rho: ctx.resolve("rho", a.rho, None)?,
            gamma: ctx.resolve("gamma", a.gamma, Some(0.0))?,
        },
        other => {
            return Err(Error::validation(format!(
                "table must be one of th02, th04, entkh, entkh2, rl03, rl05, rl06, thsv, rl04-i; got {other:?}"
            )))
        }
    };
    let answer = rate_oracle(&query)?;
    let rows = vec![vec![
        fmt_f64(answer.formula.c),
        fmt_f64(answer.formula.p0),
        fmt_f64(answer.formula.q0),
        fmt_f64(answer.formula.r0),
        answer.table.to_string(),
        answer.case_index.to_string(),
        answer.regime.replace(',', ";"),
        answer.aux_exponent.map(fmt_f64).unwrap_or_default(),
    ]];
    Ok(Output::Csv(Doc::new("C,p0,q0,r0,table,case,regime,aux", rows)))
}

/// Renders the self-contained plot script: data inlined, log-log axes, PNG
/// written next to the script.
fn plot_script(data: &PlotData, script_path: &Path) -> String {
    let png = script_path
        .file_stem()
        .map(|s| format!("{}.png", s.to_string_lossy()))
        .unwrap_or_else(|| "plot.png".to_string());
    let mut s = String::new();
    s.push_str("#!/usr/bin/env python3\n");
    s.push_str("# Self-contained log-log plot; requires matplotlib only.\n");
    s.push_str("import matplotlib\n");
    s.push_str("matplotlib.use(\"Agg\")\n");
    s.push_str("import matplotlib.pyplot as plt\n\n");
    s.push_str("series = [\n");
    for (label, points) in &data.series {
        let xs: Vec<String> =
            points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, _)| fmt_f64(*x)).collect();
        let ys: Vec<String> =
            points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(_, y)| fmt_f64(*y)).collect();
        s.push_str(&format!(
            "    ({:?}, [{}], [{}]),\n",
            label,
            xs.join(", "),
            ys.join(", ")
        ));
    }
    s.push_str("]\n\n");
    s.push_str("fig, ax = plt.subplots(figsize=(6.4, 4.2))\n");
    s.push_str("for label, xs, ys in series:\n");
    s.push_str("    ax.loglog(xs, ys, marker=\"o\", markersize=3, linewidth=1.2, label=label)\n");
    s.push_str("ax.set_xlabel(\"n\")\n");
    s.push_str("ax.set_ylabel(\"value\")\n");
    s.push_str(&format!("ax.set_title({:?})\n", data.title));
    s.push_str("ax.grid(True, which=\"both\", linewidth=0.3, alpha=0.5)\n");
    s.push_str("ax.legend()\n");
    s.push_str("fig.tight_layout()\n");
    s.push_str(&format!("fig.savefig({png:?}, dpi=160)\n"));
    s.push_str(&format!("print(\"wrote {png}\")\n"));
    s
}

/// One invariant group of the verification suite.
struct VerifyItem {
    name: &'static str,
    run: fn(&mut ChaCha20Rng) -> Result<()>,
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::numeric(msg()))
    }
}

fn verify_interval_entropy(_rng: &mut ChaCha20Rng) -> Result<()> {
    let points: Vec<Vec<f64>> = (0..=1000).map(|i| vec![i as f64 / 1000.0]).collect();
    let cloud = PointCloud::new(points, Norm::P(2.0))?;
    let eps = entropy_numbers(&cloud, 10, CoverMethod::Exact)?;
    for (i, e) in eps.iter().enumerate() {
        let n = (i + 1) as f64;
        check((e - 1.0 / (2.0 * n)).abs() <= 1e-3, || {
            format!("eps_{} = {e}, expected (2n)^-1 = {}", i + 1, 1.0 / (2.0 * n))
        })?;
    }
    Ok(())
}

fn verify_covering_order(rng: &mut ChaCha20Rng) -> Result<()> {
    for trial in 0..40 {
        let n_pts = rng.random_range(2..=14);
        let d = rng.random_range(1..=4);
        let norm = match rng.random_range(0..3) {
            0 => Norm::P(1.0),
            1 => Norm::P(2.0),
            _ => Norm::Inf,
        };
        let points: Vec<Vec<f64>> =
            (0..n_pts).map(|_| (0..d).map(|_| rng.random::<f64>()).collect()).collect();
        let cloud = PointCloud::new(points, norm)?;
        let eps = 0.05 + 0.6 * rng.random::<f64>();
        let packing = packing_lower(&cloud, eps)?.count;
        let exact = exact_cover(&cloud, eps)?.count;
        let greedy = greedy_cover(&cloud, eps)?.count;
        check(packing <= exact && exact <= greedy, || {
            format!("trial {trial}: packing {packing}, exact {exact}, greedy {greedy}")
        })?;
        let cap = (n_pts as f64).ln() + 1.0;
        check(greedy as f64 <= cap * exact as f64, || {
            format!("trial {trial}: greedy {greedy} exceeds (ln|A|+1) * exact {exact}")
        })?;
    }
    Ok(())
}

fn verify_kernel_integrals(_rng: &mut ChaCha20Rng) -> Result<()> {
    let specs = [
        KernelSpec::power(0.3, KernelMode::Volterra)?,
        KernelSpec::log_power(0.5, 1.5, 2.0, KernelMode::Volterra)?,
    ];
    for spec in &specs {
        for q in [1.0, 2.0] {
            for i in 0..20 {
                let r = 10f64.powf(-6.0 + 6.0 * i as f64 / 19.0);
                let closed = kernel_q_integral(spec, q, r)?;
                let quad = kernel_q_integral_quadrature(spec, q, r, 1e-10)?;
                check((closed - quad).abs() <= 1e-6 * quad.abs().max(1e-300), || {
                    format!("q = {q}, r = {r}: closed {closed} vs quadrature {quad}")
                })?;
            }
        }
    }
    Ok(())
}

fn verify_sandwich(_rng: &mut ChaCha20Rng) -> Result<()> {
    let specs = [
        KernelSpec::power(0.25, KernelMode::Volterra)?,
        KernelSpec::power(0.25, KernelMode::WeaklySingular)?,
        KernelSpec::log_power(0.5, 0.75, 1.0, KernelMode::Volterra)?,
    ];
    for spec in &specs {
        for q in [4.0 / 3.0, 2.0] {
            for i in 0..=8u32 {
                for j in (i + 1)..=8 {
                    let (s, t) = (i as f64 / 8.0, j as f64 / 8.0);
                    let out = kernel::sandwich_check(spec, q, s, t)?;
                    check(out.passed, || {
                        format!("sandwich failed at q = {q}, s = {s}, t = {t}: d = {}", out.d)
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn verify_monomial_identity(_rng: &mut ChaCha20Rng) -> Result<()> {
    for alpha in [0.5, 1.5] {
        let op = DiscretizedOperator::new(OpKernel::RiemannLiouville { alpha }, 256)?;
        let grid = op.grid();
        for k in 0..=3i32 {
            let f: Vec<f64> = grid.iter().map(|t| t.powi(k)).collect();
            let got = op.apply(&f)?;
            let scale = libm::tgamma(k as f64 + 1.0) / libm::tgamma(k as f64 + 1.0 + alpha);
            let exact: Vec<f64> = grid.iter().map(|t| scale * t.powf(k as f64 + alpha)).collect();
            let sup = exact.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let err = got.iter().zip(&exact).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            check(err <= 1e-6 * sup, || {
                format!("alpha = {alpha}, k = {k}: sup-relative error {}", err / sup)
            })?;
        }
    }
    Ok(())
}

fn verify_semigroup(_rng: &mut ChaCha20Rng) -> Result<()> {
    let err = semigroup_check(0.5, 0.5, &[1.0], 128)?;
    check(err <= 1e-6, || format!("half-plus-half error {err}"))?;
    let err = semigroup_check(1.0, 1.0, &[0.0, 1.0], 128)?;
    check(err <= 1e-10, || format!("integer-order error {err}"))
}

fn verify_shift_modulus(rng: &mut ChaCha20Rng) -> Result<()> {
    let spec = KernelSpec::power(0.25, KernelMode::Volterra)?;
    let op = DiscretizedOperator::new(OpKernel::Convolution(spec), 129)?;
    let grid: Vec<f64> = (0..129).map(|i| i as f64 / 128.0).collect();
    for trial in 0..10 {
        let (a, b, c) = (
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
        );
        let f: Vec<f64> = grid
            .iter()
            .map(|t| {
                a + b * (2.0 * std::f64::consts::PI * t).sin()
                    + c * (3.0 * std::f64::consts::PI * t).cos()
            })
            .collect();
        for p in [1.0, 2.0, f64::INFINITY] {
            for delta in [0.25, 0.125] {
                let out = shift_modulus_check_with(&op, p, delta, &f)?;
                check(out.passed, || {
                    format!("trial {trial}, p = {p}, delta = {delta}: {} > {}", out.lhs, out.rhs)
                })?;
            }
        }
    }
    Ok(())
}

fn verify_net_bounds(_rng: &mut ChaCha20Rng) -> Result<()> {
    let half = KernelSpec::power(0.5, KernelMode::Volterra)?;
    let quarter = KernelSpec::power(0.25, KernelMode::Volterra)?;
    let net = net_lower_rademacher(&half, 3)?;
    let cloud = operator::rademacher_image_cloud(&half, 3, 97)?;
    let radii = farthest_point_radii(&cloud, 7);
    check(net.bound() <= radii[6] + 1e-9, || {
        format!("sign net bound {} exceeds greedy {}", net.bound(), radii[6])
    })?;
    let net = net_lower_kernel_atoms(&quarter, 2.0, 4)?;
    let cloud = operator::atom_image_cloud(&quarter, 2.0, 4, 129)?;
    let radii = farthest_point_radii(&cloud, 3);
    check(net.bound() <= radii[2] + 1e-6, || {
        format!("atom net bound {} exceeds greedy {}", net.bound(), radii[2])
    })?;
    let net = net_lower_means(&quarter, 2.0, 4)?;
    let cloud = operator::means_image_cloud(&quarter, 2.0, 4, 129)?;
    let radii = farthest_point_radii(&cloud, 3);
    check(net.bound() <= radii[2] + 1e-6, || {
        format!("means net bound {} exceeds greedy {}", net.bound(), radii[2])
    })
}

fn verify_spectrum(_rng: &mut ChaCha20Rng) -> Result<()> {
    let op = DiscretizedOperator::new(OpKernel::RiemannLiouville { alpha: 0.5 }, 128)?;
    let sv = singular_values(&op)?;
    let young = 2.0 / std::f64::consts::PI.sqrt();
    check(sv.value(1) <= young + 1e-9, || {
        format!("s_1 = {} exceeds the L1 kernel norm {young}", sv.value(1))
    })
}

fn verify_hardy(rng: &mut ChaCha20Rng) -> Result<()> {
    for (t, r) in [(1.0, 2.0), (2.0, 3.0)] {
        for alpha in [-1.0, 0.0, 1.0] {
            let constant = lh2_proof_constant(t, r, alpha, 100_000)?.powf(1.0 / t);
            for trial in 0..100 {
                let len = rng.random_range(5..=60);
                let mut v = 0.5 + rng.random::<f64>();
                let mut values = Vec::with_capacity(len);
                for _ in 0..len {
                    values.push(v);
                    v *= 0.3 + 0.7 * rng.random::<f64>();
                }
                let seq = MonotoneSeq::new(values)?;
                let c1 = lh1_check(&seq, t, r, r, alpha, len)?;
                check(c1.ratio.is_finite() && c1.ratio >= 1.0 - 1e-9, || {
                    format!("trial {trial}: sum-form ratio {}", c1.ratio)
                })?;
                let c2 = lh2_check(&seq, t, r, alpha, len)?;
                check(c2.ratio <= constant * (1.0 + 1e-9), || {
                    format!("trial {trial}: sup-form ratio {} exceeds proof constant {constant}", c2.ratio)
                })?;
            }
        }
    }
    Ok(())
}

fn verify_doubling_index(_rng: &mut ChaCha20Rng) -> Result<()> {
    let params = SteinwartParams {
        p: 2.0,
        t: 1.0,
        c_t: 1.0,
        tau_p: 1.0,
        alphas: AlphaList::Exact(vec![1, 2]),
    };
    let m = hull::steinwart_m(&params, 2)?;
    check(m == 15, || format!("doubling index {m}, expected 15"))?;
    let params = SteinwartParams {
        p: 2.0,
        t: 1.0,
        c_t: 1.0,
        tau_p: 1.0,
        alphas: AlphaList::Log2(vec![0.0, 1e6]),
    };
    let m = hull::steinwart_m(&params, 2)?;
    check(m == 4_000_010, || format!("log-space doubling index {m}, expected 4000010"))
}

fn verify_hull_brackets(_rng: &mut ChaCha20Rng) -> Result<()> {
    let sigma = MonotoneSeq::from_fn(4, |k| 1.0 / k as f64)?;
    let spec = diag_set(&sigma, 2.0, 4)?;
    let table = hull::hull_entropy_bounds_upto(&spec, 0.25, 3, hull::NET_POINT_CAP)?;
    for row in &table.rows {
        check(row.lower <= row.upper + 1e-12, || {
            format!("bracket inverted at n = {}: {} > {}", row.n, row.lower, row.upper)
        })?;
    }
    for n in 1..=2usize {
        let l02 = hull::l02_lower(&sigma, 2.0, n, 1.0)?;
        let row = &table.rows[n - 1];
        check(l02.value <= row.upper + table.delta + 1e-9, || {
            format!("formula lower {} exceeds upper {} at n = {n}", l02.value, row.upper)
        })?;
    }
    Ok(())
}

fn verify_rate_fit(_rng: &mut ChaCha20Rng) -> Result<()> {
    for (p0, q0) in [(0.75, 0.0), (0.5, -1.0)] {
        let formula = RateFormula::new(1.0, p0, q0, 0.0)?;
        let samples: Vec<(u64, f64)> =
            (2..=14).map(|j| (1u64 << j, eval_rate(&formula, 1u64 << j))).collect();
        let fit = fit_rate_samples(&samples, false)?;
        check(fit.residual < 1e-9, || format!("residual {} on noiseless input", fit.residual))?;
        check(
            (fit.formula.p0 - p0).abs() <= 1e-6 && (fit.formula.q0 - q0).abs() <= 1e-6,
            || format!("recovered ({}, {}), expected ({p0}, {q0})", fit.formula.p0, fit.formula.q0),
        )?;
    }
    Ok(())
}

fn verify_transfer_bounds(_rng: &mut ChaCha20Rng) -> Result<()> {
    let zero = MonotoneSeq::new(vec![0.0; 4])?;
    let out = rl04_bound(&zero, &Rl04Variant::II, 4)?;
    check(out.value == 1.0, || format!("zero-data sum form gave {}", out.value))?;
    let data = MonotoneSeq::from_fn(4, |k| 1.0 / k as f64)?;
    let out = rl04_bound(&data, &Rl04Variant::II, 4)?;
    let expect = 1.0 + 1.0 + 2f64.powf(-1.5) + 3f64.powf(-1.5) + 4f64.powf(-1.5);
    check((out.value - expect).abs() <= 1e-12, || {
        format!("sum form gave {}, expected {expect}", out.value)
    })
}

fn verify_oracle_examples(_rng: &mut ChaCha20Rng) -> Result<()> {
    let a = rate_oracle(&RateQuery::Th04 { p: 2.0, tau: 0.25, beta: 0.0, gamma: 0.0, slack: None })?;
    check((a.formula.p0, a.formula.q0, a.formula.r0) == (0.75, 0.0, 0.0), || {
        format!("worked example resolved to {}", a.formula)
    })?;
    let a = rate_oracle(&RateQuery::Entkh { tau: 0.5, beta: 0.5, gamma: 1.0 })?;
    check((a.formula.p0, a.formula.q0) == (0.0, 0.5), || {
        format!("doubly critical example resolved to {}", a.formula)
    })
}

const VERIFY_ITEMS: &[VerifyItem] = &[
    VerifyItem { name: "interval entropy numbers match (2n)^-1", run: verify_interval_entropy },
    VerifyItem { name: "covering estimates ordered on random clouds", run: verify_covering_order },
    VerifyItem { name: "closed-form kernel integrals match quadrature", run: verify_kernel_integrals },
    VerifyItem { name: "pseudo-metric sandwich brackets hold", run: verify_sandwich },
    VerifyItem { name: "fractional monomial identity on the grid", run: verify_monomial_identity },
    VerifyItem { name: "fractional semigroup law", run: verify_semigroup },
    VerifyItem { name: "image shift modulus bounded by the kernel tail", run: verify_shift_modulus },
    VerifyItem { name: "net lower bounds below greedy uppers", run: verify_net_bounds },
    VerifyItem { name: "spectral norm below the L1 kernel norm", run: verify_spectrum },
    VerifyItem { name: "Hardy inequalities on random sequences", run: verify_hardy },
    VerifyItem { name: "doubling index closed form", run: verify_doubling_index },
    VerifyItem { name: "hull entropy brackets consistent", run: verify_hull_brackets },
    VerifyItem { name: "rate fit recovers synthetic exponents", run: verify_rate_fit },
    VerifyItem { name: "transfer bounds match enumeration", run: verify_transfer_bounds },
    VerifyItem { name: "rate oracle worked examples", run: verify_oracle_examples },
];

/// Runs every invariant group with one seeded generator; returns the report
/// and the failure count.
fn run_verify(seed: u64) -> (String, usize) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut text = format!("entlab verify (seed {seed})\n");
    let mut failures = 0usize;
    for item in VERIFY_ITEMS {
        match (item.run)(&mut rng) {
            Ok(()) => text.push_str(&format!("[PASS] {}\n", item.name)),
            Err(e) => {
                failures += 1;
                text.push_str(&format!("[FAIL] {}: {e}\n", item.name));
            }
        }
    }
    text.push_str(&format!(
        "verify: {}/{} invariant groups passed\n",
        VERIFY_ITEMS.len() - failures,
        VERIFY_ITEMS.len()
    ));
    (text, failures)
}
