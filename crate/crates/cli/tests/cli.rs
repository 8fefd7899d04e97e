use std::path::Path;
use std::process::{Command, Output};

use rauzy_core::fractal::{hausdorff, read_csv, write_csv};

const BIN: &str = env!("CARGO_BIN_EXE_rauzy");

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn rauzy(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn info_reports_tribonacci_spectrum() {
    let o = rauzy(&["info"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("matrix: [[1,1,1],[1,0,0],[0,1,0]]"));
    assert!(s.contains("char poly: x^3 - x^2 - x - 1"));
    assert!(s.contains("pisot: yes"));
    assert!(s.contains("irreducible: yes"));
}

#[test]
fn info_on_sturmian_pair() {
    let o = rauzy(&["info", "--subs", &data("sturmian.subs")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("same-matrix: no"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.subs");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(
        rauzy(&["info", "--subs", empty.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let erasing = dir.path().join("erasing.subs");
    std::fs::write(&erasing, "alphabet: ab\n[sub x]\na -> ab\nb ->\n").unwrap();
    assert_eq!(
        rauzy(&["info", "--subs", erasing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let o = rauzy(&["fractal", "--subs", &data("sturmian.subs"), "--seq", "(12)"]);
    assert_eq!(o.status.code(), Some(3));

    let non_pisot = dir.path().join("np.subs");
    std::fs::write(&non_pisot, "alphabet: ab\n[sub x]\na -> abbb\nb -> aab\n").unwrap();
    let o = rauzy(&["fractal", "--subs", non_pisot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    // A two-term explicit sequence cannot produce 10^5 letters.
    assert_eq!(rauzy(&["fractal", "--seq", "12"]).status.code(), Some(4));
    assert_eq!(
        rauzy(&["check", "--fault", "shrink-lambda", "--points", "2000"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn csv_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cloud.csv");
    let o = rauzy(&[
        "fractal",
        "--seq",
        "random",
        "--seed",
        "3",
        "--points",
        "5000",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read(&out).unwrap();
    assert!(text.starts_with(b"letter,x1,x2\n"));
    let tiles = read_csv(&text[..], 3).unwrap();
    assert_eq!(tiles.iter().map(|t| t.len()).sum::<usize>(), 5000);
    let mut again = Vec::new();
    write_csv(&mut again, &tiles).unwrap();
    assert_eq!(again, text);
    for t in tiles.iter().filter(|t| !t.is_empty()) {
        assert_eq!(hausdorff(t, t).unwrap().distance, 0.0);
    }

    let ppm = dir.path().join("cloud.ppm");
    let o = rauzy(&[
        "render",
        "--input",
        out.to_str().unwrap(),
        "--width",
        "64",
        "--height",
        "48",
    ]);
    assert!(o.status.success());
    assert!(std::fs::read(&ppm)
        .unwrap()
        .starts_with(b"P6\n64 48\n255\n"));
}

#[test]
fn budget_env_thins_gifs() {
    let o = Command::new(BIN)
        .args(["gifs", "--depth", "14"])
        .env("RAUZY_POINT_BUDGET", "3000")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("thinned"));
}

#[test]
fn other_subcommands_run() {
    let o = rauzy(&["compare", "--points", "20000", "--depth", "10"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("overall:"));
    let o = rauzy(&["continuity", "--from", "2", "--to", "5", "--depth", "10"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("decay ratio:"));
    let o = rauzy(&[
        "balance",
        "--points",
        "2000",
        "--subs",
        &data("sturmian.subs"),
        "--seq",
        "(12)",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("C = 1"));
    let o = rauzy(&[
        "cover", "--points", "20000", "--radius", "0.5", "--step", "0.05",
    ]);
    assert!(o.status.success());
    let o = rauzy(&["check", "--points", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("projection_bound PASS"));
}
