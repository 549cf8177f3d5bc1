use std::io::Write;
use std::process::{Command, Output, Stdio};

const COPY: &str = r#"{"states": 1, "initial": 0, "step": [[0, "_", 0, {"echo": true}]]}"#;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_baire-games"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn identity_in_the_lipschitz_game() {
    let o = cli(
        &[
            "eval",
            r#"{"base": "L"}"#,
            COPY,
            "--input",
            r#"{"prefix": [], "period": [1, 2]}"#,
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"prefix\":[],\"period\":[1,2]}\n");
}

#[test]
fn depth_mode_prints_a_prefix() {
    let o = cli(
        &[
            "eval",
            r#"{"base": "L"}"#,
            COPY,
            "--input",
            r#"{"prefix": [4], "period": [1, 2]}"#,
            "--depth",
            "4",
        ],
        "",
    );
    assert_eq!(stdout(&o), "[4,1,2,1]\n");
}

#[test]
fn compiled_demo_matches_the_piecewise_map() {
    let tau = cli(&["compile", &fixture("piecewise_z.json")], "");
    assert_eq!(tau.status.code(), Some(0));
    let tau = stdout(&tau);
    let eval = |x: &str| {
        stdout(&cli(
            &["eval", &fixture("game_z.json"), tau.trim(), "--input", x],
            "",
        ))
    };
    assert_eq!(
        eval(r#"{"prefix": [0, 3], "period": [1, 2]}"#),
        "{\"prefix\":[3],\"period\":[1,2]}\n"
    );
    assert_eq!(
        eval(r#"{"prefix": [9], "period": [0]}"#),
        "{\"prefix\":[],\"period\":[5]}\n"
    );
}

#[test]
fn copy_board_in_the_wadge_game() {
    let o = cli(
        &["play", r#"{"base": "W"}"#, COPY, "--depth", "3"],
        "0\n0\n0\n",
    );
    assert!(stdout(&o)
        .lines()
        .last()
        .unwrap()
        .contains("output [0, 0, 0]"));
}

#[test]
fn exit_codes() {
    let member = |x: &str| {
        cli(&["member", r#""INF0""#, "--input", x], "")
            .status
            .code()
    };
    assert_eq!(member(r#"{"prefix": [], "period": [0, 1]}"#), Some(0));
    assert_eq!(member(r#"{"prefix": [0], "period": [1]}"#), Some(1));
    assert_eq!(cli(&["suite", "no-such-suite"], "").status.code(), Some(2));
    assert_eq!(
        cli(
            &[
                "eval",
                r#"{"base": "L"}"#,
                COPY,
                "--input",
                r#"{"prefix": [], "period": []}"#
            ],
            ""
        )
        .status
        .code(),
        Some(2)
    );
    let o = cli(
        &[
            "--json",
            "legal",
            r#"{"base": "W"}"#,
            r#"{"states": 1, "initial": 0, "step": [[0, "_", 0, {"sym": "P"}]]}"#,
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"legal\":false"));
}

#[test]
fn swap_then_evaluate() {
    let o = cli(
        &["swap", &fixture("swap_z_to_inf0.json"), "--samples", "20"],
        "",
    );
    assert_eq!(o.status.code(), Some(0));
    let g = r#"{"gfxi": {"inner": {"base": "W"}, "controls": {"sets": ["INF0"]}}}"#;
    let y = cli(
        &[
            "eval",
            g,
            stdout(&o).trim(),
            "--input",
            r#"{"prefix": [0, 3], "period": [1, 2]}"#,
        ],
        "",
    );
    assert_eq!(stdout(&y), "{\"prefix\":[3],\"period\":[1,2]}\n");
}

#[test]
fn adaptive_transfer_shows_a_run() {
    let rho = r#"{"initial": 0, "output": [0, 1], "step": [[0, {"nat": 1}, 1], [0, "_", 0], [1, "_", 1]]}"#;
    let o = cli(
        &[
            "transfer",
            "gfxi",
            &fixture("game_z.json"),
            rho,
            "--against",
            r#"{"states": 1, "initial": 0, "step": [[0, "_", 0, {"nat": 1}]]}"#,
            "--anchor",
            r#"{"prefix": [], "period": [0]}"#,
            "--a",
            r#""full""#,
            "--b",
            r#""empty""#,
            "--depth",
            "6",
        ],
        "",
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(
        stdout(&o),
        "{\"input\":[0,0,1,1,1,1],\"output\":[1,1,1,1,1,1],\"ok\":true}\n"
    );
}
