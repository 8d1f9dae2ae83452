use std::process::Command;

use serde_json::Value;

fn run_with_stdin(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tamari").chain(args.iter().copied());
    let code = tamari_cli::run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_with_stdin(args, "")
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out.trim_end().to_owned()
}

#[test]
fn convert_examples() {
    assert_eq!(ok(&["convert", "--from", "word", "--to", "seq", "x4 x1 x0 x1 x0"]), "3 2 5 4 1");
    assert_eq!(ok(&["convert", "--from", "seq", "--to", "word", "32541"]), "x4 x1 x0 x1 x0");
    assert_eq!(ok(&["convert", "--from", "seq", "--to", "word", "35176**24"]), "x2 x6 x0 x5 x0 x1 x0");
    assert_eq!(ok(&["-k", "3", "convert", "--from", "seq", "--to", "word", "32234114"]), "x5 x1 x0 x0");
    let forest = ok(&["convert", "--from", "seq", "--to", "forest", "35176**24"]);
    let back = ok(&["convert", "--from", "forest", "--to", "seq", &forest]);
    assert_eq!(back, "3 5 1 7 6 * * 2 4");
}

#[test]
fn partition_conversions() {
    let p = ok(&["-k", "3", "convert", "--from", "seq", "--to", "partition", "32234114"]);
    let v: Value = serde_json::from_str(&p).unwrap();
    assert_eq!(v["diagonals"], serde_json::json!([[0, 5], [1, 4], [5, 8]]));
    // partitions forget the linearization; going back yields the top representative
    let top = ok(&["-k", "3", "normalize", "--from", "seq", "32234114"]);
    assert_eq!(ok(&["convert", "--from", "partition", "--to", "seq", &p]), top);
    let many = ok(&["convert", "--from", "seq", "--to", "partition", "35176**24"]);
    assert!(serde_json::from_str::<Value>(&many).unwrap().is_array());
}

#[test]
fn eq_examples() {
    assert_eq!(run(&["eq", "x0 x1 x0", "x2 x0 x0"]), (0, "true\n".into(), String::new()));
    assert_eq!(ok(&["eq", "x0 x0", "x1 x0"]), "false");
    assert_eq!(ok(&["eq", "--from", "seq", "132", "231"]), "true");
    assert_eq!(ok(&["eq", "--from", "seq", "123", "321"]), "false");
}

#[test]
fn count_examples() {
    assert_eq!(ok(&["count", "--what", "shapes", "-n", "3", "-k", "2"]), "5");
    assert_eq!(ok(&["count", "--what", "classes", "-n", "4"]), "14");
    assert_eq!(ok(&["count", "--what", "classes", "--pattern", "_ _ * _"]), "2");
    assert_eq!(ok(&["-k", "3", "count", "--what", "classes", "-n", "3"]), "12");
    assert_eq!(ok(&["-k", "3", "count", "--what", "shapes", "-n", "4"]), "55");
}

#[test]
fn normalize_and_class() {
    assert_eq!(ok(&["normalize", "x0 x1 x0"]), "x2 x0 x0");
    assert_eq!(ok(&["normalize", "--mode", "bottom", "x2 x0 x0"]), "x0 x1 x0");
    assert_eq!(ok(&["normalize", "--mode", "bottom", "x4 x1 x0 x1 x0"]), "x1 x0 x2 x1 x0");
    assert_eq!(ok(&["normalize", "--from", "seq", "132"]), "2 3 1");
    assert_eq!(ok(&["class", "x2 x0 x0"]), "x0 x1 x0\nx2 x0 x0");
    assert_eq!(ok(&["class", "--from", "seq", "231"]), "1 3 2\n2 3 1");
    let json: Value = serde_json::from_str(&ok(&["--output", "json", "class", "x0 x1 x0"])).unwrap();
    assert_eq!(json, serde_json::json!([[0, 1, 0], [2, 0, 0]]));
}

#[test]
fn mul_examples() {
    assert_eq!(ok(&["mul", "x6 x0 x0 x3", "x0"]), "x6 x0 x0 x3 x0");
    assert_eq!(ok(&["mul", "--reduce", "x0 x1", "x0"]), "x2 x0 x0");
    assert_eq!(ok(&["mul", "--from", "seq", "25*31**4", "3*1*2"]), "2 5 8 3 1 * 6 4 * 7");
    assert_eq!(ok(&["-k", "3", "mul", "--from", "seq", "2233**11*44", "11*"]), "2 2 3 3 5 5 1 1 * 4 4");
    let a = ok(&["convert", "--from", "seq", "--to", "partition", "132"]);
    let b = ok(&["convert", "--from", "seq", "--to", "partition", "1"]);
    let glued = ok(&["mul", "--from", "partition", &a, &b]);
    assert_eq!(glued, ok(&["convert", "--from", "seq", "--to", "partition", "1324"]));
    assert_eq!(run(&["-k", "3", "mul", "--from", "seq", "11", "1"]).0, 2);
}

#[test]
fn order_output() {
    let text = ok(&["order", "--what", "tamari", "-n", "3", "--check-lattice"]);
    assert!(text.starts_with("elements: 5\ncovers: 5\nlattice: yes"));
    let json: Value = serde_json::from_str(&ok(&["--output", "json", "order", "--what", "bruhat", "-n", "3"])).unwrap();
    assert_eq!(json["elements"].as_array().unwrap().len(), 6);
    assert_eq!(json["classes"].as_array().unwrap().len(), 6);
    let dot = ok(&["order", "--what", "bruhat", "--pattern", "_ _ * _", "--dot"]);
    assert!(dot.starts_with("digraph hasse {") && dot.ends_with('}'));
    let k3: Value =
        serde_json::from_str(&ok(&["-k", "3", "--output", "json", "order", "--what", "partitions", "-n", "3", "--check-lattice"]))
            .unwrap();
    assert_eq!(k3["elements"].as_array().unwrap().len(), 12);
    assert!(k3["lattice"].is_boolean());
}

#[test]
fn flip_example() {
    let p = r#"{"k":2,"n":2,"diagonals":[[0,2]]}"#;
    assert_eq!(ok(&["flip", "--diagonal", "0,2", p]), r#"{"diagonals":[[1,3]],"k":2,"n":2}"#);
    let (code, _, err) = run(&["flip", "--diagonal", "1,3", r#"{"k":2,"n":2,"diagonals":[[1,3]]}"#]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: "));
}

#[test]
fn output_formats() {
    assert_eq!(ok(&["--output", "json", "convert", "--from", "word", "--to", "seq", "x3"]), r#"["*","*","*",1]"#);
    assert_eq!(ok(&["convert", "--from", "seq", "--to", "word", "[\"*\",1]"]), "x1");
    assert_eq!(ok(&["convert", "--from", "word", "--to", "seq", "[4,1,0,1,0]"]), "3 2 5 4 1");
    let dot = ok(&["--output", "dot", "convert", "--from", "seq", "--to", "forest", "21"]);
    assert!(dot.starts_with("digraph"));
    assert_eq!(run(&["--output", "dot", "eq", "x0", "x0"]).0, 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["convert", "--from", "word"]).0, 1);
    assert_eq!(run(&["-k", "1", "normalize", "x0"]).0, 1);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("convert"));
    for bad in [
        vec!["convert", "--from", "seq", "--to", "word", "1 1"],
        vec!["convert", "--from", "word", "--to", "seq", "x1 y2"],
        vec!["convert", "--from", "forest", "--to", "seq", "{not json"],
        vec!["count", "--what", "classes", "-n", "12"],
    ] {
        let (code, out, err) = run(&bad);
        assert_eq!(code, 2, "{bad:?}");
        assert!(out.is_empty());
        assert!(err.starts_with("error: ") && err.lines().count() == 1, "{err}");
    }
}

#[test]
fn reads_stdin() {
    let (code, out, _) = run_with_stdin(&["convert", "--from", "word", "--to", "seq", "-"], "x4 x1 x0 x1 x0\n");
    assert_eq!((code, out.as_str()), (0, "3 2 5 4 1\n"));
    assert_eq!(run_with_stdin(&["eq", "-", "-"], "x0").0, 2);
}

#[test]
fn binary_process() {
    let out = Command::new(env!("CARGO_BIN_EXE_tamari"))
        .args(["eq", "x0 x1 x0", "x2 x0 x0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "true\n");
    let out = Command::new(env!("CARGO_BIN_EXE_tamari"))
        .args(["count", "--what", "shapes", "-n", "5"])
        .env(tamari_cli::CAP_VAR, "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_tamari")).arg("--bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
