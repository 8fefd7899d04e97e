//! Command-line front end: argument parsing and the command pipelines.

pub mod check;
pub mod render;

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rauzy_core::adic::{
    balance, factor_gap_check, limit_point_prefix, DirectiveSequence, SubstitutionSet,
};
use rauzy_core::fractal::{
    compare_constructions, continuity_experiment, coverage_estimate, gifs_attractor, origin_seed,
    project_prefixes, read_csv, write_csv, GifsOptions, PointSet, RauzyApprox,
    DEFAULT_POINT_BUDGET,
};
use rauzy_core::spectral::{is_irreducible, pisot_report, SpectralData, PISOT_BAND};
use rauzy_core::subst::{parse_substitution_set, primitivity_exponent, wielandt_bound};
use rauzy_core::Error;

use render::{render, DEFAULT_MARGIN};

pub const BUILTIN_SUBS: &str = include_str!("../../../data/tribonacci.subs");
pub const BUDGET_ENV: &str = "RAUZY_POINT_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "rauzy",
    version,
    about = "Rauzy fractals of sequences of Pisot substitutions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Ppm,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Substitution file (defaults to the built-in Tribonacci pair).
    #[arg(long, global = true)]
    pub subs: Option<PathBuf>,
    /// Directive sequence: `12(21)`, `122`, `random`, `random:SEED[:w1,w2,..]`.
    #[arg(long, global = true, default_value = "(1)")]
    pub seq: String,
    #[arg(long, global = true, default_value_t = 100_000,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub points: u64,
    /// GIFS depth (12 by default, 16 for `continuity`).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: Option<u64>,
    /// Seed for `--seq random` and for point thinning.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 800,
          value_parser = clap::value_parser!(u64).range(16..))]
    pub width: u64,
    #[arg(long, global = true, default_value_t = 800,
          value_parser = clap::value_parser!(u64).range(16..))]
    pub height: u64,
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Which limit point (0 = lexicographically least first letters).
    #[arg(long, global = true, default_value_t = 0)]
    pub chain: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_MARGIN)]
    pub margin: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Matrices and spectral data of a substitution file.
    Info,
    /// Rauzy fractal by projecting prefixes of the limit point.
    Fractal,
    /// Rauzy fractal by iterating the set equation from the origin.
    Gifs,
    /// Hausdorff distance between the two constructions.
    Compare,
    /// Distance between fractals of sequences agreeing up to index n.
    Continuity {
        /// Tail used after the first n terms of `--seq`.
        #[arg(long, default_value = "(2)")]
        tail: String,
        #[arg(long, default_value_t = 2)]
        from: usize,
        #[arg(long, default_value_t = 10)]
        to: usize,
    },
    /// Balance and return gaps of a limit-point prefix.
    Balance {
        #[arg(long, default_value_t = 10)]
        window: usize,
        #[arg(long, default_value_t = 5)]
        factor_len: usize,
    },
    /// Fraction of a window covered by lattice translates of the fractal.
    Cover {
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Run the invariant suite.
    Check {
        /// Inject a fault to exercise the harness.
        #[arg(long, value_enum)]
        fault: Option<check::Fault>,
    },
    /// Render a CSV produced by `fractal` or `gifs` to PPM.
    Render {
        #[arg(long)]
        input: PathBuf,
    },
}

/// A failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn other(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => 2,
            Error::Domain(_) | Error::Indeterminate(_) => 3,
            Error::Resource(_) => 4,
            _ => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::other(e.to_string())
    }
}

impl From<std::fmt::Error> for CliError {
    fn from(e: std::fmt::Error) -> Self {
        CliError::other(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Loaded substitutions and the parsed directive sequence.
pub struct Context {
    pub common: Common,
    pub set: SubstitutionSet,
    pub seq: DirectiveSequence,
}

impl Context {
    pub fn load(common: &Common) -> CliResult<Self> {
        let text = match &common.subs {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| CliError::other(format!("{}: {e}", p.display())))?,
            None => BUILTIN_SUBS.to_string(),
        };
        let set = SubstitutionSet::from(parse_substitution_set(&text)?);
        let spec = if common.seq.trim() == "random" {
            format!("random:{}", common.seed)
        } else {
            common.seq.clone()
        };
        let seq = DirectiveSequence::parse(&spec, set.len())?;
        seq.validate(&set)?;
        Ok(Context {
            common: common.clone(),
            set,
            seq,
        })
    }

    /// Spectral data of the shared matrix; refuses when there is none or it
    /// is not Pisot.
    pub fn spectral(&self) -> CliResult<SpectralData> {
        let m = self.set.require_shared_matrix()?;
        let report = pisot_report(m, PISOT_BAND)?;
        if !report.contracting {
            return Err(Error::Domain(format!(
                "matrix is not Pisot: non-Perron moduli {:?}",
                report.moduli
            ))
            .into());
        }
        Ok(SpectralData::new(m, self.common.tol)?)
    }

    pub fn gifs_options(&self) -> CliResult<GifsOptions> {
        Ok(GifsOptions {
            budget: point_budget()?,
            thin_seed: self.common.seed,
            ..GifsOptions::default()
        })
    }

    fn depth(&self, default: usize) -> usize {
        self.common.depth.map_or(default, |d| d as usize)
    }
}

/// Point budget, overridable through the environment.
pub fn point_budget() -> CliResult<usize> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::other(format!("{BUDGET_ENV}={v} is not a count"))),
        Err(_) => Ok(DEFAULT_POINT_BUDGET),
    }
}

fn with_extension(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

/// Writes CSV and/or PPM according to `--out` and `--format`; returns the
/// written paths.
pub fn write_outputs(common: &Common, tiles: &[PointSet]) -> CliResult<Vec<PathBuf>> {
    let Some(out) = &common.out else {
        return Ok(Vec::new());
    };
    let (csv, ppm) = match common.format {
        Format::Csv => (Some(out.clone()), None),
        Format::Ppm => (None, Some(out.clone())),
        Format::Both => (
            Some(with_extension(out, "csv")),
            Some(with_extension(out, "ppm")),
        ),
    };
    let mut written = Vec::new();
    if let Some(p) = csv {
        let mut w = BufWriter::new(File::create(&p)?);
        write_csv(&mut w, tiles)?;
        w.flush()?;
        written.push(p);
    }
    if let Some(p) = ppm {
        let img = render(
            tiles,
            common.width as usize,
            common.height as usize,
            common.margin,
        );
        let mut w = BufWriter::new(File::create(&p)?);
        img.write_ppm(&mut w)?;
        w.flush()?;
        written.push(p);
    }
    Ok(written)
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.10}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn cmd_info(ctx: &Context, out: &mut String) -> CliResult<()> {
    let set = &ctx.set;
    writeln!(out, "alphabet: {} ({} letters)", set.alphabet(), set.d())?;
    for (i, sub) in set.subs().iter().enumerate() {
        let images: Vec<String> = sub
            .images()
            .iter()
            .map(|w| w.display(set.alphabet()).to_string())
            .collect();
        writeln!(
            out,
            "substitution {} ({}): {}  matrix {}",
            i + 1,
            sub.name(),
            images.join(" "),
            set.matrix(i)
        )?;
    }
    let Some(m) = set.shared_matrix() else {
        writeln!(out, "same-matrix: no")?;
        return Ok(());
    };
    writeln!(out, "same-matrix: yes")?;
    writeln!(out, "matrix: {m}")?;
    match primitivity_exponent(m, wielandt_bound(m.dim()))? {
        Some(e) => writeln!(out, "primitivity exponent: {e}")?,
        None => {
            writeln!(out, "primitive: no")?;
            return Ok(());
        }
    }
    let sd = SpectralData::new(m, ctx.common.tol)?;
    writeln!(out, "char poly: {}", sd.char_poly())?;
    match is_irreducible(sd.char_poly()) {
        Ok(b) => writeln!(out, "irreducible: {}", if b { "yes" } else { "no" })?,
        Err(e) => writeln!(out, "irreducible: unknown ({e})")?,
    }
    writeln!(out, "beta: {:.16}", sd.beta)?;
    let moduli: Vec<f64> = sd.stable_eigenvalues().iter().map(|z| z.norm()).collect();
    writeln!(out, "stable moduli: {}", fmt_vec(&moduli))?;
    writeln!(out, "lambda: {:.16}", sd.lambda)?;
    match sd.pisot(PISOT_BAND) {
        Ok(r) => {
            writeln!(out, "pisot: {}", if r.is_pisot() { "yes" } else { "no" })?;
            if r.zero_eigenvalues > 0 {
                writeln!(out, "zero eigenvalues: {}", r.zero_eigenvalues)?;
            }
        }
        Err(e) => writeln!(out, "pisot: indeterminate ({e})")?,
    }
    Ok(())
}

fn summarize(out: &mut String, approx: &RauzyApprox, files: &[PathBuf]) -> CliResult<()> {
    let counts: Vec<String> = approx.tiles.iter().map(|t| t.len().to_string()).collect();
    writeln!(
        out,
        "construction: {}  depth: {}  points: {} (per letter {})",
        approx.provenance,
        approx.depth,
        approx.len(),
        counts.join("/")
    )?;
    if approx.thinned {
        writeln!(out, "note: point budget reached, steps were thinned")?;
    }
    for f in files {
        writeln!(out, "wrote {}", f.display())?;
    }
    Ok(())
}

pub fn cmd_fractal(ctx: &Context, out: &mut String) -> CliResult<()> {
    let sd = ctx.spectral()?;
    let approx = project_prefixes(
        &ctx.seq,
        &ctx.set,
        &sd,
        ctx.common.points as usize,
        ctx.common.chain,
    )?;
    let files = write_outputs(&ctx.common, &approx.tiles)?;
    summarize(out, &approx, &files)?;
    let ok = approx.bound_ok();
    writeln!(
        out,
        "bound-check: {} max_norm={:.6} bound={:.6}",
        if ok { "PASS" } else { "FAIL" },
        approx.max_adapted_norm,
        approx.bound
    )?;
    if !ok {
        return Err(CliError::other("projected points exceed the bound"));
    }
    Ok(())
}

pub fn cmd_gifs(ctx: &Context, out: &mut String) -> CliResult<()> {
    let sd = ctx.spectral()?;
    let approx = gifs_attractor(
        &ctx.seq,
        &ctx.set,
        &sd,
        ctx.depth(12),
        &origin_seed(&sd),
        &ctx.gifs_options()?,
    )?;
    let files = write_outputs(&ctx.common, &approx.tiles)?;
    summarize(out, &approx, &files)?;
    writeln!(out, "distance-to-attractor bound: {:.6}", approx.bound)?;
    Ok(())
}

pub fn cmd_compare(ctx: &Context, out: &mut String) -> CliResult<()> {
    let sd = ctx.spectral()?;
    let c = compare_constructions(
        &ctx.seq,
        &ctx.set,
        &sd,
        ctx.common.points as usize,
        ctx.depth(12),
        &ctx.gifs_options()?,
    )?;
    for (i, d) in c.per_tile.iter().enumerate() {
        writeln!(
            out,
            "subtile {}: {:.10}",
            ctx.set.alphabet().symbol(i as u8),
            d
        )?;
    }
    writeln!(out, "overall: {:.10}", c.overall)?;
    Ok(())
}

pub fn cmd_continuity(
    ctx: &Context,
    tail: &str,
    from: usize,
    to: usize,
    out: &mut String,
) -> CliResult<()> {
    if from > to {
        return Err(CliError::other("--from must not exceed --to"));
    }
    let sd = ctx.spectral()?;
    let tail = DirectiveSequence::parse(tail, ctx.set.len())?;
    tail.validate(&ctx.set)?;
    let ns: Vec<usize> = (from..=to).collect();
    let r = continuity_experiment(
        &ctx.set,
        &sd,
        &ctx.seq,
        &tail,
        &ns,
        ctx.depth(16),
        &ctx.gifs_options()?,
    )?;
    writeln!(out, "n,distance")?;
    for (n, d) in &r.rows {
        writeln!(out, "{n},{d:.10e}")?;
    }
    match r.ratio {
        Some(ratio) => writeln!(out, "decay ratio: {ratio:.6} (lambda {:.6})", sd.lambda)?,
        None => writeln!(out, "decay ratio: resolution-limited")?,
    }
    writeln!(out, "increases: {}", r.increases)?;
    Ok(())
}

pub fn cmd_balance(
    ctx: &Context,
    window: usize,
    factor_len: usize,
    out: &mut String,
) -> CliResult<()> {
    let n = ctx.common.points as usize;
    let u = limit_point_prefix(&ctx.seq, &ctx.set, n as u64, ctx.common.chain)?;
    let u = &u[..n];
    let b = balance(u, ctx.set.d(), window)?;
    let per: Vec<String> = b.per_letter.iter().map(|c| c.to_string()).collect();
    writeln!(out, "prefix length: {n}")?;
    writeln!(
        out,
        "balance (window {window}): C = {}  per letter {}",
        b.c,
        per.join("/")
    )?;
    for k in 1..=factor_len.min(n / 2) {
        let g = factor_gap_check(u, k)?;
        writeln!(
            out,
            "factors of length {k}: {}  max gap {} (worst {})",
            g.factors,
            g.max_gap,
            g.worst_factor.display(ctx.set.alphabet())
        )?;
    }
    Ok(())
}

pub fn cmd_cover(ctx: &Context, radius: f64, step: f64, out: &mut String) -> CliResult<()> {
    let sd = ctx.spectral()?;
    let approx = project_prefixes(
        &ctx.seq,
        &ctx.set,
        &sd,
        ctx.common.points as usize,
        ctx.common.chain,
    )?;
    let f = coverage_estimate(&approx.union(), &sd.gamma_generators(), radius, step)?;
    writeln!(
        out,
        "covered fraction: {f:.6} (radius {radius}, step {step})"
    )?;
    Ok(())
}

pub fn cmd_render(ctx: &Context, input: &Path, out: &mut String) -> CliResult<()> {
    let d = ctx.set.d();
    let file =
        File::open(input).map_err(|e| CliError::other(format!("{}: {e}", input.display())))?;
    let tiles = read_csv(BufReader::new(file), d)?;
    let mut common = ctx.common.clone();
    common.format = Format::Ppm;
    let target = common
        .out
        .clone()
        .unwrap_or_else(|| with_extension(input, "ppm"));
    common.out = Some(target);
    for f in write_outputs(&common, &tiles)? {
        writeln!(out, "wrote {}", f.display())?;
    }
    Ok(())
}

/// Runs a parsed command line, appending its report to `out`.
pub fn run(cli: &Cli, out: &mut String) -> CliResult<()> {
    let ctx = Context::load(&cli.common)?;
    match &cli.command {
        Command::Info => cmd_info(&ctx, out),
        Command::Fractal => cmd_fractal(&ctx, out),
        Command::Gifs => cmd_gifs(&ctx, out),
        Command::Compare => cmd_compare(&ctx, out),
        Command::Continuity { tail, from, to } => cmd_continuity(&ctx, tail, *from, *to, out),
        Command::Balance { window, factor_len } => cmd_balance(&ctx, *window, *factor_len, out),
        Command::Cover { radius, step } => cmd_cover(&ctx, *radius, *step, out),
        Command::Check { fault } => check::cmd_check(&ctx, *fault, out),
        Command::Render { input } => cmd_render(&ctx, input, out),
    }
}
