use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn nodal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nodal")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn triangle_neumann_scenario_violates() {
    let o = nodal(&["scenario", "--name", "triangle_neumann", "--param", "a=1.05"]);
    assert!(o.status.success(), "{o:?}");
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["beta0"], 3);
    assert_eq!(v["kappa"], 2);
    assert_eq!(v["ecp_violated"], true);
    assert_eq!(v["stable"], true);
}

#[test]
fn kappa_of_eleven_on_the_cube() {
    let o = nodal(&["kappa", "--domain", "hypercube:n=3:bc=dirichlet", "--lambda", "11"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "8");
}

#[test]
fn table3_prints_twelve_rows() {
    let printed = [
        3.016, 6.016, 6.037, 6.042, 9.037, 9.042, 9.063, 11.016, 11.072, 11.085, 12.063, 14.037,
    ];
    let o = nodal(&["table3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 12);
    for (row, want) in rows.iter().zip(printed) {
        let got: f64 = row.split_whitespace().last().unwrap().parse().unwrap();
        assert!((got - want).abs() <= 1e-3, "{row}");
    }
    assert!(rows[0].contains("(1,1,1)") && rows[11].contains("(3,2,1)"));
}

#[test]
fn json_output_round_trips_through_count() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("out.json");
    let o = nodal(&[
        "scenario",
        "--name",
        "torus_cracks",
        "--param",
        "theta=0.5",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{o:?}");
    let first = fs::read_to_string(&json).unwrap();
    assert_eq!(first, stdout(&o));
    // the result is itself a valid scenario file
    let again = nodal(&["count", "--scenario-file", json.to_str().unwrap()]);
    assert!(again.status.success(), "{again:?}");
    assert_eq!(stdout(&again), first);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!((v["beta0"].as_u64(), v["kappa"].as_u64()), (Some(3), Some(2)));
    assert_eq!(v["params"]["theta"], 0.5);
}

#[test]
fn json_and_svg_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"name":"disk_cracks","params":{"m":6},"resolution":64}"#).unwrap();
    let mut outs = Vec::new();
    for run in 0..2 {
        let json = dir.path().join(format!("r{run}.json"));
        let svg = dir.path().join(format!("r{run}.svg"));
        let o = nodal(&[
            "count",
            "--scenario-file",
            cfg.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{o:?}");
        outs.push((fs::read(json).unwrap(), fs::read(svg).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
    assert!(outs[0].1.starts_with(b"<?xml"));
}

#[test]
fn svg_directory_uses_the_naming_convention() {
    let dir = tempfile::tempdir().unwrap();
    let o = nodal(&[
        "plot",
        "--name",
        "rectangle_crack",
        "--param",
        "a=2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{o:?}");
    assert!(dir.path().join("rectangle_crack_a=2.svg").exists());
}

#[test]
fn cube_plot_renders_slices() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cube.svg");
    let o = nodal(&[
        "plot",
        "--name",
        "hypercube_dirichlet",
        "--param",
        "a=1.5",
        "--levels",
        "0.5,1.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(fs::read_to_string(out).unwrap().matches("<text").count(), 2);
}

#[test]
fn spectrum_csv_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let o = nodal(&["spectrum", "--domain", "disk", "--limit", "15", "--csv", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(csv).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("14.68") && last.contains(",1,6,"), "{last}");
    let o = nodal(&["spectrum", "--domain", "rectangle:bc=neumann", "--limit", "1"]);
    // m^2/16 + n^2/4 <= 1: 0, 1/16, 1/4, 5/16, 1/2, 9/16, 13/16, 1
    assert_eq!(stdout(&o).lines().count(), 1 + 8);
}

#[test]
fn audit_reports_every_mode() {
    let o = nodal(&["audit", "--domain", "torus", "--entries", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().skip(1).all(|l| l.ends_with(" ok")), "{text}");
    // m^2/4 + n^2: the constant, (1,0) twice, then (2,0) and (0,1) twice each
    assert_eq!(text.lines().count(), 1 + 1 + 2 + 4);
}

#[test]
fn exit_codes() {
    for args in [
        &["kappa", "--domain", "klein", "--lambda", "1"][..],
        &["kappa", "--domain", "hypercube:n=3:bc=dirichlet", "--lambda", "10"],
        &["scenario", "--name", "nope"],
        &["scenario", "--name", "torus_cracks", "--param", "speed=1"],
        &["scenario", "--name", "sphere_cracks", "--param", "b=3"],
        &["audit", "--domain", "ppd:b=1,1.00707,1.00866"],
    ] {
        assert_eq!(nodal(args).status.code(), Some(2), "{args:?}");
    }
    let unstable = nodal(&[
        "scenario",
        "--name",
        "triangle_neumann",
        "--param",
        "a=1.05",
        "--resolution",
        "8",
        "--max-refinements",
        "0",
    ]);
    assert_eq!(unstable.status.code(), Some(3));
    // no subcommand is a usage error
    assert_eq!(nodal(&[]).status.code(), Some(2));
}
