//! End-to-end tests of the `radarsim` binary: subcommand wiring, file
//! formats and the exit-code contract (0 ok, 1 runtime failure, 2 invalid
//! input).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn radarsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radarsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(path: &Path, content: &str) {
    fs::write(path, content).unwrap();
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap()
}

const MINIMAL_CONFIG: &str = r#"{
  "n": 10,
  "m": 20,
  "lb_fraction": 0.0,
  "rewires_per_round": 0,
  "rounds": 3,
  "num_destinations": 2,
  "seed": 1
}
"#;

/// The hand-enumerated toy series {A,B}, {A,C}, {A,B}.
const TOY_SERIES: &str = "\
# round 0 0 A
A B
# round 1 900 A
A C
# round 2 1800 A
A B
";

fn simulate_minimal(dir: &TempDir, out_name: &str) -> std::path::PathBuf {
    let config = dir.path().join("config.json");
    write(&config, MINIMAL_CONFIG);
    let out = dir.path().join(out_name);
    let run = radarsim(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    out
}

#[test]
fn simulate_writes_the_three_outputs() {
    let dir = TempDir::new().unwrap();
    let out = simulate_minimal(&dir, "out");

    let series = read(&out.join("series.rounds"));
    assert_eq!(series.matches("# round ").count(), 3);
    assert!(
        series.contains("# round 1 900 "),
        "default period in timestamps"
    );
    assert!(series.contains("# round 2 1800 "));
    assert!(series.ends_with('\n') && !series.ends_with("\n\n"));

    let rewires = read(&out.join("rewires.csv"));
    assert_eq!(rewires, "round,removed_u,removed_v,added_u,added_v\n");

    let echo = read(&out.join("config.echo.json"));
    assert!(
        echo.contains("\"round_period_s\": 900"),
        "defaults resolved: {echo}"
    );
    assert!(echo.contains("\"n\": 10"));
}

#[test]
fn simulate_twice_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let a = simulate_minimal(&dir, "a");
    let b = simulate_minimal(&dir, "b");
    for name in ["series.rounds", "rewires.csv", "config.echo.json"] {
        assert_eq!(read(&a.join(name)), read(&b.join(name)), "{name}");
    }
}

#[test]
fn invalid_destination_count_exits_2() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("config.json");
    write(
        &config,
        r#"{"n":10,"m":20,"rounds":3,"num_destinations":10,"seed":1}"#,
    );
    let run = radarsim(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("num_destinations"));
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("config.json");
    write(
        &config,
        r#"{"n":10,"m":20,"rounds":3,"num_destinations":2,"seed":1,"nodes":10}"#,
    );
    let run = radarsim(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("nodes"));
}

#[test]
fn missing_config_file_exits_2() {
    let dir = TempDir::new().unwrap();
    let run = radarsim(&[
        "simulate",
        "--config",
        dir.path().join("nope.json").to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_1() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("config.json");
    write(&config, MINIMAL_CONFIG);
    let blocker = dir.path().join("blocker");
    write(&blocker, "not a directory");
    let run = radarsim(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        blocker.join("out").to_str().unwrap(),
    ]);
    assert_eq!(
        run.status.code(),
        Some(1),
        "runtime failure, not invalid input"
    );
}

#[test]
fn analyze_matches_the_hand_enumeration() {
    let dir = TempDir::new().unwrap();
    let series = dir.path().join("toy.rounds");
    write(&series, TOY_SERIES);
    let out = dir.path().join("metrics.csv");
    let run = radarsim(&[
        "analyze",
        "--series",
        series.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success());
    assert_eq!(
        read(&out),
        "round,nodes_observed,new_nodes,cumulative_distinct,appeared,disappeared\n\
         0,2,2,2,0,0\n\
         1,2,1,3,1,1\n\
         2,2,0,3,1,1\n"
    );
    assert_eq!(
        read(&dir.path().join("presence_hist.csv")),
        "duration,count\n1,3\n3,1\n"
    );
    assert_eq!(
        read(&dir.path().join("absence_hist.csv")),
        "duration,count\n1,1\n"
    );
}

#[test]
fn analyze_of_a_static_simulation_is_constant() {
    let dir = TempDir::new().unwrap();
    let out = simulate_minimal(&dir, "out");
    let metrics = dir.path().join("metrics.csv");
    let run = radarsim(&[
        "analyze",
        "--series",
        out.join("series.rounds").to_str().unwrap(),
        "--out",
        metrics.to_str().unwrap(),
    ]);
    assert!(run.status.success());
    let text = read(&metrics);
    let cumdist: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap())
        .collect();
    assert_eq!(cumdist.len(), 3);
    assert!(cumdist.iter().all(|&v| v == cumdist[0]), "{cumdist:?}");
    let appeared: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(4).unwrap())
        .collect();
    assert_eq!(appeared, ["0", "0", "0"]);
}

#[test]
fn analyze_reports_dropped_rounds_on_stderr() {
    let dir = TempDir::new().unwrap();
    let series = dir.path().join("dirty.rounds");
    write(
        &series,
        "# round 0 0 m\nm a\n# round 1 5 m\nm b\na b\n# round 2 9 m\nm a\n",
    );
    let out = dir.path().join("metrics.csv");
    let run = radarsim(&[
        "analyze",
        "--series",
        series.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "dirty rounds are dropped, not fatal");
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(stderr.contains("dropped round 1"), "{stderr}");
    assert_eq!(read(&out).lines().count(), 3, "header plus two kept rounds");
}

#[test]
fn analyze_syntax_error_exits_2_with_line() {
    let dir = TempDir::new().unwrap();
    let series = dir.path().join("broken.rounds");
    write(&series, "# round 0 0 m\nm a b c\n");
    let run = radarsim(&[
        "analyze",
        "--series",
        series.to_str().unwrap(),
        "--out",
        dir.path().join("m.csv").to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("line 2"));
}

fn toy_metrics(dir: &TempDir, name: &str) -> std::path::PathBuf {
    let series = dir.path().join(format!("{name}.rounds"));
    write(&series, TOY_SERIES);
    let out = dir.path().join(format!("{name}.csv"));
    let run = radarsim(&[
        "analyze",
        "--series",
        series.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success());
    out
}

#[test]
fn compare_identical_files_is_zero() {
    let dir = TempDir::new().unwrap();
    let a = toy_metrics(&dir, "a");
    let run = radarsim(&[
        "compare",
        "--a",
        a.to_str().unwrap(),
        "--b",
        a.to_str().unwrap(),
        "--field",
        "cumulative_distinct",
    ]);
    assert!(run.status.success());
    assert_eq!(
        String::from_utf8_lossy(&run.stdout),
        "cumulative_distinct,3,0,0\n"
    );
}

#[test]
fn compare_normalized_arithmetic() {
    // cumulative_distinct columns normalize to (0, 0.5, 1) and (0, 1, 1)
    let dir = TempDir::new().unwrap();
    let header = "round,nodes_observed,new_nodes,cumulative_distinct,appeared,disappeared\n";
    let a = dir.path().join("a.csv");
    write(
        &a,
        &format!("{header}0,1,0,0,0,0\n1,1,1,1,0,0\n2,1,1,2,0,0\n"),
    );
    let b = dir.path().join("b.csv");
    write(
        &b,
        &format!("{header}0,1,0,0,0,0\n1,1,2,2,0,0\n2,1,0,2,0,0\n"),
    );
    let run = radarsim(&[
        "compare",
        "--a",
        a.to_str().unwrap(),
        "--b",
        b.to_str().unwrap(),
        "--field",
        "cumulative_distinct",
    ]);
    assert!(run.status.success());
    assert_eq!(
        String::from_utf8_lossy(&run.stdout),
        "cumulative_distinct,3,0.166667,0.5\n"
    );
}

#[test]
fn compare_truncates_to_the_shorter_series() {
    let dir = TempDir::new().unwrap();
    let header = "round,nodes_observed,new_nodes,cumulative_distinct,appeared,disappeared\n";
    let mut a = String::from(header);
    for t in 0..100 {
        a.push_str(&format!("{t},5,0,5,0,0\n"));
    }
    let mut b = String::from(header);
    for t in 0..50 {
        b.push_str(&format!("{t},9,0,9,0,0\n"));
    }
    let a_path = dir.path().join("a.csv");
    let b_path = dir.path().join("b.csv");
    write(&a_path, &a);
    write(&b_path, &b);
    let run = radarsim(&[
        "compare",
        "--a",
        a_path.to_str().unwrap(),
        "--b",
        b_path.to_str().unwrap(),
        "--field",
        "nodes_observed",
    ]);
    assert!(run.status.success());
    assert_eq!(
        String::from_utf8_lossy(&run.stdout),
        "nodes_observed,50,0,0\n"
    );
}

#[test]
fn compare_rejects_bad_header_and_unknown_field() {
    let dir = TempDir::new().unwrap();
    let good = toy_metrics(&dir, "good");
    let bad = dir.path().join("bad.csv");
    write(&bad, "round,nodes\n0,1\n");
    let run = radarsim(&[
        "compare",
        "--a",
        bad.to_str().unwrap(),
        "--b",
        good.to_str().unwrap(),
        "--field",
        "appeared",
    ]);
    assert_eq!(run.status.code(), Some(2));

    let run = radarsim(&[
        "compare",
        "--a",
        good.to_str().unwrap(),
        "--b",
        good.to_str().unwrap(),
        "--field",
        "new_nodes",
    ]);
    assert_eq!(run.status.code(), Some(2), "new_nodes is not comparable");
}
