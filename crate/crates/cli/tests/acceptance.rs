//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rauzy_cli::render::letter_color;
use rauzy_core::adic::{
    derivation_for_length, factor_gap_check, limit_point_prefix, DirectiveSequence, SubstitutionSet,
};
use rauzy_core::fractal::{
    compare_constructions, continuity_experiment, coverage_estimate, gifs_step, hausdorff,
    hausdorff_brute, hausdorff_tiles, project_prefixes, set_equation_check, GifsMap, GifsOptions,
    PointSet,
};
use rauzy_core::rng::SplitMix64;
use rauzy_core::spectral::{SpectralData, DEFAULT_TOL};
use rauzy_core::subst::{abelianize, parse_substitution_set, Letter};

const BIN: &str = env!("CARGO_BIN_EXE_rauzy");

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn setup() -> (SubstitutionSet, SpectralData) {
    let set = SubstitutionSet::from(
        parse_substitution_set(include_str!("../../../data/tribonacci.subs")).unwrap(),
    );
    let sd = SpectralData::new(set.matrix(0), DEFAULT_TOL).unwrap();
    (set, sd)
}

fn seq(spec: &str) -> DirectiveSequence {
    DirectiveSequence::parse(spec, 2).unwrap()
}

fn adapt(sd: &SpectralData, t: &[PointSet]) -> Vec<PointSet> {
    t.iter().map(|p| p.to_adapted(sd)).collect()
}

fn telescoping() -> Outcome {
    let (set, _) = setup();
    let start = Instant::now();
    let max_len = 10_000u64;
    let mut checked = 0u64;
    for seed in 1..=100u64 {
        let s = DirectiveSequence::uniform_random(seed, 2);
        let der = derivation_for_length(&s, &set, max_len + 1, 0).unwrap();
        let word = der.word();
        let mut running = vec![0i64; 3];
        for m in 1..=max_len {
            running[word[m as usize - 1] as usize] += 1;
            let (pieces, _) = der.decompose(m).unwrap();
            // Horner from the top level down: acc = M_j acc + l(P_j).
            let mut acc = vec![0i64; 3];
            let mut next = pieces.iter().peekable();
            for level in (0..=pieces[0].level).rev() {
                if level < pieces[0].level {
                    let mat = set.matrix(der.chain.subs[level]);
                    acc = (0..3)
                        .map(|i| (0..3).map(|j| mat.get(i, j) * acc[j]).sum())
                        .collect();
                }
                if let Some(p) = next.next_if(|p| p.level == level) {
                    let img = set.get(der.chain.subs[level]).image(p.letter);
                    if !p.prefix.is_prefix_of(img) || p.prefix.len() >= img.len() {
                        return outcome(
                            false,
                            format!("seed {seed} m {m}: piece not a proper prefix"),
                        );
                    }
                    for &b in p.prefix.iter() {
                        acc[b as usize] += 1;
                    }
                }
            }
            if acc != running {
                return outcome(false, format!("seed {seed} m {m}: {acc:?} != {running:?}"));
            }
            checked += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        t < Duration::from_secs(30),
        format!("{checked} prefixes exact, {t:.2?} (limit 30s)"),
    )
}

fn spectral() -> Outcome {
    let (_, sd) = setup();
    let b = sd.beta;
    let residual = (b * b * b - b * b - b - 1.0).abs();
    // Independent root by bisection on x^3 - x^2 - x - 1 over [1, 2].
    let f = |x: f64| x * x * x - x * x - x - 1.0;
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let oracle = 0.5 * (lo + hi);
    let expect = b.powf(-0.5);
    let moduli: Vec<f64> = sd.stable_eigenvalues().iter().map(|z| z.norm()).collect();
    let worst = moduli
        .iter()
        .map(|m| (m - expect).abs())
        .fold(0.0, f64::max);
    outcome(
        residual <= 1e-9 && (b - oracle).abs() <= 1e-9 && (b - 1.839_286_755_214_161_2).abs() <= 1e-9 && worst <= 1e-6,
        format!("beta {b:.16}, |p(beta)| {residual:.1e}, |beta-bisect| {:.1e}, modulus error {worst:.1e}", (b - oracle).abs()),
    )
}

const TESTED: [&str; 7] = [
    "(1)",
    "(2)",
    "random:42",
    "random:7",
    "222211111111111121(1)",
    "2222111111111111212(1)",
    "1122(1122)",
];

fn boundedness() -> Outcome {
    let (set, sd) = setup();
    let start = Instant::now();
    let mut worst = String::new();
    let mut ok = true;
    for spec in TESTED {
        let p = project_prefixes(&seq(spec), &set, &sd, 100_000, 0).unwrap();
        // Independent C: prefixes of every image, recomputed here.
        let mut c: f64 = 0.0;
        for sub in set.subs() {
            for img in sub.images() {
                for k in 0..img.len() {
                    let l = abelianize(&img[..k], 3).unwrap();
                    c = c.max(sd.adapted_norm(&sd.project_int(&l.0)));
                }
            }
        }
        let bound = c / (1.0 - sd.lambda);
        ok &= p.max_adapted_norm < bound && p.len() == 100_000;
        worst = format!("{worst} {spec}:{:.3}", p.max_adapted_norm);
    }
    let t = start.elapsed();
    let ok = ok && t < Duration::from_secs(10);
    outcome(ok, format!("max norms{worst}; {t:.2?} (limit 10s)"))
}

fn set_equation() -> Outcome {
    let (set, sd) = setup();
    let mut worst: f64 = 0.0;
    let mut deepest = 0;
    for spec in ["(1)", "(2)", "random:42"] {
        let s = seq(spec);
        for depth in 0.. {
            let c = set_equation_check(&s, &set, &sd, depth).unwrap();
            if c.points > 100_000 {
                break;
            }
            if !c.counts_match {
                return outcome(false, format!("{spec} depth {depth}: point counts differ"));
            }
            worst = worst.max(c.mismatch);
            deepest = deepest.max(depth);
        }
    }
    outcome(
        worst <= 1e-9,
        format!("max mismatch {worst:.2e} up to depth {deepest} (limit 1e-9)"),
    )
}

fn random_tiles(rng: &mut SplitMix64) -> Vec<PointSet> {
    (0..3)
        .map(|_| {
            let n = 1 + rng.below(60) as usize;
            let scale = rng.range_f64(0.01, 3.0);
            PointSet::from_flat(
                2,
                (0..2 * n).map(|_| rng.range_f64(-scale, scale)).collect(),
            )
            .unwrap()
        })
        .collect()
}

fn contraction() -> Outcome {
    let (set, sd) = setup();
    let mut rng = SplitMix64::new(2024);
    let mut worst_ratio: f64 = 0.0;
    for trial in 0..200 {
        let map = GifsMap::new(set.get(trial % 2), &sd).unwrap();
        let a = random_tiles(&mut rng);
        let b = random_tiles(&mut rng);
        let before = hausdorff_tiles(&adapt(&sd, &a), &adapt(&sd, &b)).unwrap();
        let fa = adapt(&sd, &gifs_step(&map, &sd, &a));
        let fb = adapt(&sd, &gifs_step(&map, &sd, &b));
        for i in 0..3 {
            let after = hausdorff(&fa[i], &fb[i]).unwrap().distance;
            if after > sd.lambda * before + 1e-9 {
                return outcome(
                    false,
                    format!(
                        "trial {trial} subtile {i}: {after} > {} * {before}",
                        sd.lambda
                    ),
                );
            }
            worst_ratio = worst_ratio.max(after / before);
        }
    }
    outcome(
        sd.lambda <= 0.74,
        format!(
            "worst ratio {worst_ratio:.4}, lambda {:.4} (limit 0.74)",
            sd.lambda
        ),
    )
}

fn equivalence() -> Outcome {
    let (set, sd) = setup();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for spec in ["(1)", "(2)", "random:42", "random:7"] {
        let c = compare_constructions(&seq(spec), &set, &sd, 100_000, 12, &GifsOptions::default())
            .unwrap();
        worst = worst.max(c.overall);
        parts.push(format!("{spec}:{:.4}", c.overall));
    }
    let t = start.elapsed();
    outcome(
        worst <= 0.05 && t < Duration::from_secs(120),
        format!("{} ; {t:.2?} (limits 0.05, 2min)", parts.join(" ")),
    )
}

fn continuity() -> Outcome {
    let (set, sd) = setup();
    let ns: Vec<usize> = (2..=10).collect();
    let r = continuity_experiment(
        &set,
        &sd,
        &seq("(1)"),
        &seq("(2)"),
        &ns,
        16,
        &GifsOptions::default(),
    )
    .unwrap();
    let allowed = (0.05 * (ns.len() - 1) as f64).floor() as usize;
    let ratio = r.ratio.unwrap_or(f64::INFINITY);
    let table: Vec<String> = r.rows.iter().map(|(n, d)| format!("{n}:{d:.4}")).collect();
    outcome(
        r.increases <= allowed && ratio <= sd.lambda + 0.1,
        format!(
            "{}; increases {} (allowed {allowed}); ratio {ratio:.4} (limit {:.4})",
            table.join(" "),
            r.increases,
            sd.lambda + 0.1
        ),
    )
}

fn minimality() -> Outcome {
    let (set, _) = setup();
    let mut worst = 0;
    for spec in ["(1)", "(2)", "random:42", "random:7", "12(21)"] {
        let u = limit_point_prefix(&seq(spec), &set, 100_000, 0).unwrap();
        let u: &[Letter] = &u[..100_000];
        for k in 1..=5 {
            let g = factor_gap_check(u, k).unwrap();
            worst = worst.max(g.max_gap);
        }
    }
    outcome(
        worst <= 50_000,
        format!("largest return gap {worst} (limit 50000)"),
    )
}

fn hausdorff_oracle() -> Outcome {
    let mut rng = SplitMix64::new(77);
    let cloud = |rng: &mut SplitMix64, max: u64| {
        let n = 1 + rng.below(max) as usize;
        PointSet::from_flat(2, (0..2 * n).map(|_| rng.range_f64(-1.0, 1.0)).collect()).unwrap()
    };
    for trial in 0..50 {
        let a = cloud(&mut rng, 500);
        let b = cloud(&mut rng, 500);
        let fast = hausdorff(&a, &b).unwrap().distance;
        let slow = hausdorff_brute(&a, &b).unwrap().distance;
        if fast != slow {
            return outcome(false, format!("trial {trial}: {fast} != {slow}"));
        }
    }
    for trial in 0..100 {
        let a = cloud(&mut rng, 100);
        let b = cloud(&mut rng, 100);
        let c = cloud(&mut rng, 100);
        let d = |x: &PointSet, y: &PointSet| hausdorff(x, y).unwrap().distance;
        let ok = d(&a, &b) == d(&b, &a)
            && d(&a, &a) == 0.0
            && d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12
            && d(&a, &b) > 0.0;
        if !ok {
            return outcome(false, format!("metric axiom violated in trial {trial}"));
        }
    }
    outcome(true, "50 oracle pairs exact, 100 axiom triples")
}

fn coverage() -> Outcome {
    let (set, sd) = setup();
    let p = project_prefixes(&seq("(1)"), &set, &sd, 100_000, 0).unwrap();
    let f = coverage_estimate(&p.union(), &sd.gamma_generators(), 2.0, 0.01).unwrap();
    outcome(f >= 0.99, format!("covered fraction {f:.5} (limit 0.99)"))
}

fn run_fractal(dir: &Path, name: &str, args: &[&str]) -> (bool, String) {
    let out = dir.join(name);
    let o = Command::new(BIN)
        .arg("fractal")
        .args(args)
        .arg("--out")
        .arg(&out)
        .output()
        .expect("run rauzy");
    (
        o.status.success(),
        String::from_utf8_lossy(&o.stdout).into_owned(),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--seq", "random", "--seed", "42", "--points", "50000"];
    let (ok1, _) = run_fractal(dir.path(), "a", &args);
    let (ok2, _) = run_fractal(dir.path(), "b", &args);
    let read = |n: &str| std::fs::read(dir.path().join(n)).unwrap_or_default();
    let same_csv = !read("a.csv").is_empty() && read("a.csv") == read("b.csv");
    let same_ppm = !read("a.ppm").is_empty() && read("a.ppm") == read("b.ppm");
    outcome(
        ok1 && ok2 && same_csv && same_ppm,
        format!("csv identical: {same_csv}, ppm identical: {same_ppm}"),
    )
}

fn ppm_colors(bytes: &[u8]) -> Option<Vec<[u8; 3]>> {
    let text_end = bytes
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == b'\n')
        .nth(2)?
        .0;
    let mut colors: Vec<[u8; 3]> = bytes[text_end + 1..]
        .chunks_exact(3)
        .map(|c| [c[0], c[1], c[2]])
        .filter(|c| *c != [255, 255, 255])
        .collect();
    colors.sort();
    colors.dedup();
    Some(colors)
}

fn showcase_renders() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let expected: Vec<[u8; 3]> = {
        let mut v: Vec<[u8; 3]> = (0..3).map(letter_color).collect();
        v.sort();
        v
    };
    let mut notes = Vec::new();
    let mut ok = true;
    for (i, spec) in [
        "(1)",
        "(2)",
        "222211111111111121(1)",
        "2222111111111111212(1)",
        "1122(1122)",
    ]
    .iter()
    .enumerate()
    {
        let name = format!("fig{i}");
        let (success, stdout) = run_fractal(dir.path(), &name, &["--seq", spec]);
        let colors = std::fs::read(dir.path().join(format!("{name}.ppm")))
            .ok()
            .and_then(|b| ppm_colors(&b))
            .unwrap_or_default();
        let good = success && stdout.contains("bound-check: PASS") && colors == expected;
        ok &= good;
        notes.push(format!("{spec}:{}", if good { "ok" } else { "bad" }));
    }
    outcome(ok, notes.join(" "))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("exact telescoping identity", telescoping),
        ("spectral data of the Tribonacci matrix", spectral),
        ("bounded distance of projected prefixes", boundedness),
        ("set equation at finite depth", set_equation),
        ("contraction of the set-equation map", contraction),
        ("projection and GIFS constructions agree", equivalence),
        ("continuity in the directive sequence", continuity),
        ("uniform recurrence of prefixes", minimality),
        ("Hausdorff distance against brute force", hausdorff_oracle),
        ("lattice translates cover a window", coverage),
        ("deterministic fractal output", determinism),
        (
            "showcase sequences render in three colors",
            showcase_renders,
        ),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2} {name}: {} [{:.2?}]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed()
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
