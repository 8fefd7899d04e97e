//! The invariant suite behind `rauzy check`: one line per invariant with
//! its measured value and threshold.

use std::fmt::Write as _;

use clap::ValueEnum;
use rauzy_core::adic::{factor_gap_check, limit_point_prefix, telescoping_decomposition};
use rauzy_core::fractal::{
    compare_constructions, gifs_step, hausdorff, hausdorff_brute, hausdorff_tiles,
    project_prefixes, set_equation_check, GifsMap, PointSet,
};
use rauzy_core::rng::SplitMix64;
use rauzy_core::spectral::SpectralData;

use crate::{CliError, CliResult, Context};

const MIN_COMPARE_POINTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Claim a contraction ratio 10% below the computed one.
    ShrinkLambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: &'static str,
    pub status: Status,
    pub measured: f64,
    pub threshold: f64,
}

impl CheckLine {
    fn at_most(name: &'static str, measured: f64, threshold: f64) -> Self {
        let status = if measured <= threshold {
            Status::Pass
        } else {
            Status::Fail
        };
        CheckLine {
            name,
            status,
            measured,
            threshold,
        }
    }

    fn below(name: &'static str, measured: f64, threshold: f64) -> Self {
        let status = if measured < threshold {
            Status::Pass
        } else {
            Status::Fail
        };
        CheckLine {
            name,
            status,
            measured,
            threshold,
        }
    }

    fn skip(name: &'static str) -> Self {
        CheckLine {
            name,
            status: Status::Skip,
            measured: 0.0,
            threshold: 0.0,
        }
    }
}

impl std::fmt::Display for CheckLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {} measured={:.6e} threshold={:.6e}",
            self.name, self.status, self.measured, self.threshold
        )
    }
}

fn random_tiles(rng: &mut SplitMix64, d: usize, dim: usize) -> Vec<PointSet> {
    (0..d)
        .map(|_| {
            let n = 1 + rng.below(40) as usize;
            PointSet::from_flat(
                dim,
                (0..n * dim).map(|_| rng.range_f64(-2.0, 2.0)).collect(),
            )
            .expect("finite")
        })
        .collect()
}

fn adapt(sd: &SpectralData, tiles: &[PointSet]) -> Vec<PointSet> {
    tiles.iter().map(|t| t.to_adapted(sd)).collect()
}

/// Runs every check; never fails early.
pub fn run_checks(ctx: &Context, fault: Option<Fault>) -> CliResult<Vec<CheckLine>> {
    let sd = ctx.spectral()?;
    let set = &ctx.set;
    let seq = &ctx.seq;
    let n = ctx.common.points as usize;
    let lambda = match fault {
        Some(Fault::ShrinkLambda) => 0.9 * sd.lambda,
        None => sd.lambda,
    };
    let dim = sd.stable_dim();
    let mut rng = SplitMix64::new(ctx.common.seed ^ 0x5EED);
    let mut lines = Vec::new();

    let (ru, rv) = sd.perron_residuals();
    lines.push(CheckLine::at_most(
        "perron_residual",
        ru.max(rv) / sd.beta,
        1e-9,
    ));
    lines.push(CheckLine::at_most(
        "projection_commutes",
        sd.commutation_residual(),
        1e-9,
    ));

    let mut worst: f64 = 0.0;
    let mut y = vec![0.0; dim];
    let mut my = vec![0.0; dim];
    for _ in 0..2000 {
        y.iter_mut().for_each(|x| *x = rng.range_f64(-1.0, 1.0));
        sd.apply_m_s(&y, &mut my);
        let base = sd.adapted_norm(&y);
        if base > 0.0 {
            worst = worst.max(sd.adapted_norm(&my) / base);
        }
    }
    lines.push(CheckLine::at_most("adapted_contraction", worst, lambda));

    let mut gifs_worst: f64 = 0.0;
    for i in 0..20 {
        let map = GifsMap::new(set.get(i % set.len()), &sd)?;
        let a = random_tiles(&mut rng, set.d(), dim);
        let b = random_tiles(&mut rng, set.d(), dim);
        let before = hausdorff_tiles(&adapt(&sd, &a), &adapt(&sd, &b))?;
        let after = hausdorff_tiles(
            &adapt(&sd, &gifs_step(&map, &sd, &a)),
            &adapt(&sd, &gifs_step(&map, &sd, &b)),
        )?;
        if before > 0.0 {
            gifs_worst = gifs_worst.max((after - 1e-9) / before);
        }
    }
    lines.push(CheckLine::at_most("gifs_contraction", gifs_worst, lambda));

    let max_len = n.min(10_000);
    let u = limit_point_prefix(seq, set, max_len as u64, ctx.common.chain)?;
    let mut failures = 0usize;
    for _ in 0..200 {
        let len = 1 + rng.below(max_len as u64) as usize;
        if telescoping_decomposition(seq, set, &u[..len]).is_err() {
            failures += 1;
        }
    }
    lines.push(CheckLine::at_most(
        "telescoping_exact",
        failures as f64,
        0.0,
    ));

    let approx = project_prefixes(seq, set, &sd, n, ctx.common.chain)?;
    lines.push(CheckLine::below(
        "projection_bound",
        approx.max_adapted_norm,
        approx.bound,
    ));

    let mut mismatch: f64 = 0.0;
    let mut depth = 0;
    loop {
        let c = set_equation_check(seq, set, &sd, depth)?;
        if depth > 0 && c.points > n {
            break;
        }
        mismatch = mismatch.max(if c.counts_match {
            c.mismatch
        } else {
            f64::INFINITY
        });
        depth += 1;
    }
    lines.push(CheckLine::at_most("set_equation", mismatch, 1e-9));

    let mut oracle_gap: f64 = 0.0;
    for _ in 0..10 {
        let a = random_tiles(&mut rng, 1, dim).remove(0);
        let b = random_tiles(&mut rng, 1, dim).remove(0);
        let fast = hausdorff(&a, &b)?.distance;
        let slow = hausdorff_brute(&a, &b)?.distance;
        oracle_gap = oracle_gap.max((fast - slow).abs());
    }
    lines.push(CheckLine::at_most("hausdorff_oracle", oracle_gap, 0.0));

    if n >= 2 {
        let u = limit_point_prefix(seq, set, n as u64, ctx.common.chain)?;
        let u = &u[..n];
        let mut gap = 0usize;
        for k in 1..=5.min(n / 2) {
            gap = gap.max(factor_gap_check(u, k)?.max_gap);
        }
        lines.push(CheckLine::at_most(
            "recurrence_gap",
            gap as f64,
            (n / 2) as f64,
        ));
    } else {
        lines.push(CheckLine::skip("recurrence_gap"));
    }

    // Too few prefixes to resolve the fractal at the 0.05 scale.
    if n >= MIN_COMPARE_POINTS {
        let depth = ctx.common.depth.map_or(12, |d| d as usize);
        let cmp = compare_constructions(seq, set, &sd, n, depth, &ctx.gifs_options()?)?;
        lines.push(CheckLine::at_most("constructions_agree", cmp.overall, 0.05));
    } else {
        lines.push(CheckLine::skip("constructions_agree"));
    }

    Ok(lines)
}

pub fn cmd_check(ctx: &Context, fault: Option<Fault>, out: &mut String) -> CliResult<()> {
    let lines = run_checks(ctx, fault)?;
    for l in &lines {
        writeln!(out, "{l}")?;
    }
    let failed = lines.iter().filter(|l| l.status == Status::Fail).count();
    if failed > 0 {
        return Err(CliError {
            code: 1,
            message: format!("{failed} check(s) failed"),
        });
    }
    Ok(())
}
