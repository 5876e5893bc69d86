use std::process::Command;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

fn numera(args: &[&str]) -> (i32, String) {
    numera_env(args, None)
}

fn numera_env(args: &[&str], budget: Option<&str>) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_numera"));
    cmd.args(args).current_dir(FIXTURES).env_remove("NUMERA_BUDGET_STEPS");
    if let Some(b) = budget {
        cmd.env("NUMERA_BUDGET_STEPS", b);
    }
    let out = cmd.output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn represent_prints_word_and_trace() {
    let (code, out) = numera(&["represent", "--automaton", "ex5.an", "--x", "4/7"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "word = a(acc)^w");
    assert_eq!(lines[1..6].len(), 5);
    for (line, (q, y)) in lines[1..6].iter().zip([("q0", "1/7"), ("q1", "1/7"), ("q2", "4/7"), ("q1", "4/7"), ("q1", "1/7")]) {
        assert!(line.contains(&format!("state {q} y = {y} ")), "{line}");
    }
}

#[test]
fn interval_and_val() {
    assert_eq!(numera(&["interval", "--automaton", "ex5.an", "--prefix", "ab"]), (0, "[5/8, 3/4]\n".into()));
    assert_eq!(numera(&["val", "--automaton", "ex5.an", "--word", "aac"]), (0, "5\n".into()));
}

#[test]
fn exit_codes() {
    assert_eq!(numera(&["frobnicate"]).0, 1);
    assert_eq!(numera(&[]).0, 1);
    assert_eq!(numera(&["val", "--automaton", "ex5.an", "--word", "b"]).0, 2);
    assert_eq!(numera(&["represent", "--automaton", "ex5.an", "--x", "2"]).0, 2);
    assert_eq!(numera(&["val", "--automaton", "missing.an", "--word", "a"]).0, 3);
}

#[test]
fn malformed_file_is_a_format_error() {
    let dir = std::env::temp_dir().join(format!("numera-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.an");
    std::fs::write(&path, "alphabet: a\nstates: p\ninitial: r\n").unwrap();
    assert_eq!(numera(&["info", "--automaton", path.to_str().unwrap()]).0, 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    for args in [
        ["fixed-points", "--automaton", "ex5.an"].as_slice(),
        &["uper", "--automaton", "ex5.an"],
        &["per", "--automaton", "fib.an"],
        &["pisot", "equiv", "--poly=-1,-1,1", "--random", "5"],
    ] {
        let a = numera(args);
        assert_eq!(a.0, 0, "{args:?}: {}", a.1);
        assert_eq!(a, numera(args), "{args:?}");
    }
}

#[test]
fn budget_from_environment() {
    let (code, out) = numera_env(&["represent", "--automaton", "ex5.an", "--x", "29/37"], Some("3"));
    assert_eq!(code, 0);
    assert!(out.starts_with("prefix = "), "{out}");
    let (_, out) = numera_env(&["represent", "--automaton", "ex5.an", "--x", "29/37"], None);
    assert!(out.starts_with("word = "), "{out}");
    assert_eq!(numera_env(&["represent", "--automaton", "ex5.an", "--x", "1/2"], Some("many")).0, 3);
}

#[test]
fn exact_flag_carries_decimals() {
    let (_, out) = numera(&["--exact", "interval", "--automaton", "ex5.an", "--prefix", "ab"]);
    assert_eq!(out, "[5/8 ≈ 0.625000000000, 3/4 ≈ 0.750000000000]\n");
    let (_, out) = numera(&["--exact", "--digits", "4", "represent", "--automaton", "fib.an", "--x", "[-1,1]"]);
    assert!(out.contains("y = 0 ≈ 0.0000"), "{out}");
    assert_eq!(numera(&["--digits", "0", "info", "--automaton", "ex5.an"]).0, 1);
}

#[test]
fn pisot_subcommands() {
    let (code, out) = numera(&["pisot", "expand1", "--poly=-10,1"]);
    assert_eq!(code, 0);
    assert!(out.contains("e(1) = 10\ne*(1) = (9)^w\n"), "{out}");
    let (_, out) = numera(&["pisot", "expand1", "--poly=-1,-1,1", "--x", "[-1,1]"]);
    assert!(out.contains("e(x) = 1 (0)^w"), "{out}");
    let (_, out) = numera(&["pisot", "build", "--poly=-1,-1,1", "--terms", "6"]);
    assert!(out.contains("U = 1 2 3 5 8 13\n") && out.contains("initial: q0\n"), "{out}");
    let (code, out) = numera(&["pisot", "equiv", "--poly=-10,1", "--samples", "4/7", "--max-len", "2"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("mismatches: 0\n"), "{out}");
    assert_eq!(numera(&["pisot", "expand1", "--poly=1,1"]).0, 2);
}
