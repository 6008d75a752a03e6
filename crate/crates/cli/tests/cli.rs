use std::process::{Command, Output};

fn lenspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lenspec")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = lenspec(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn sanov_trace_column_matches_product_oracle() {
    let csv = stdout(&["spectrum", "--preset", "sanov", "--cutoff", "8"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "class_string,word_length,trace_exact,trace_lo,trace_hi,length_lo,length_hi");
    let gens = [[1i64, 2, 0, 1], [1, 0, 2, 1]];
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let mut acc = [1i64, 0, 0, 1];
        for letter in cols[0].split(' ') {
            let i: usize = letter[1..].parse::<usize>().unwrap() - 1;
            let [a, b, c, d] = gens[i];
            let g = if letter.starts_with('A') { [d, -b, -c, a] } else { [a, b, c, d] };
            acc = [
                acc[0] * g[0] + acc[1] * g[2],
                acc[0] * g[1] + acc[1] * g[3],
                acc[2] * g[0] + acc[3] * g[2],
                acc[2] * g[1] + acc[3] * g[3],
            ];
        }
        assert_eq!(cols[2], (acc[0] + acc[3]).to_string(), "{line}");
        assert_eq!(cols[1].parse::<usize>().unwrap(), cols[0].split(' ').count());
        rows += 1;
    }
    assert!(rows > 100);
}

#[test]
fn cutoff_zero_is_header_only() {
    let csv = stdout(&["spectrum", "--preset", "sanov", "--cutoff", "0"]);
    assert_eq!(csv, "class_string,word_length,trace_exact,trace_lo,trace_hi,length_lo,length_hi\n");
}

#[test]
fn reruns_are_byte_identical() {
    let runs: &[&[&str]] = &[
        &["spectrum", "--preset", "schottky-pair", "--cutoff", "5", "--format", "json"],
        &["gaps", "--preset", "sqrt2", "--cutoff", "4", "--format", "json"],
        &["fit", "--preset", "sanov", "--cutoff", "10"],
        &["smallgap", "--preset", "schottky-triple", "--count", "2"],
        &["diophantine", "quadexp", "--cutoff", "3", "--tuples", "2", "--seed", "4"],
        &["diophantine", "identity", "--cutoff", "5", "--tuples", "3", "--seed", "9"],
        &["diophantine", "remez", "--poly", "x1*x2 - x3", "--epsilon", "0.05", "--samples", "5000", "--seed", "2"],
        &["diophantine", "summability", "--series", "custom", "--epsilon", "exp:2:0,0,-1", "--degree", "poly:0,1"],
        &["examples"],
    ];
    for args in runs {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gaps.csv");
    let args = ["gaps", "--preset", "sanov", "--cutoff", "6"];
    let direct = stdout(&args);
    let p = path.to_str().unwrap();
    let out = lenspec(&[&args[..], &["--out", p]].concat());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn json_reports_parse_and_carry_the_config() {
    let text = stdout(&["diophantine", "summability", "--series", "closing", "--eta", "0"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["report"]["converges"], false);
    assert_eq!(v["config"]["common"]["seed"], 0);
    let text = stdout(&["diophantine", "summability", "--series", "closing", "--eta", "1/10"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["report"]["converges"], true);
    let text = stdout(&["diophantine", "chebyshev", "--poly", "x^3 - 3/4*x"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["report"]["bound"], 0.25);
}

#[test]
fn numbers_round_trip() {
    let text = stdout(&["spectrum", "--preset", "sanov", "--cutoff", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for r in v["records"].as_array().unwrap() {
        let lo = r["length"]["lo"].as_f64().unwrap();
        assert_eq!(lo.to_string().parse::<f64>().unwrap(), lo);
        assert!(lo <= r["length"]["hi"].as_f64().unwrap());
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.group");
    std::fs::write(&bad, "matrix 1 2\n").unwrap();
    let out = lenspec(&["spectrum", "--group", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column"));

    let iv = dir.path().join("iv.group");
    std::fs::write(&iv, "scalar interval\nmatrix 2..2.0001 1 1 1\nmatrix 1 1 1 2..2.0001\n").unwrap();
    let out = lenspec(&["gaps", "--group", iv.to_str().unwrap(), "--cutoff", "1"]);
    assert_eq!(out.status.code(), Some(3));

    let out = lenspec(&["diophantine", "quadexp", "--cutoff", "12"]);
    assert_eq!(out.status.code(), Some(4));

    assert_eq!(lenspec(&["spectrum"]).status.code(), Some(1));
    assert_eq!(lenspec(&["no-such-verb"]).status.code(), Some(2));
}
