use std::process::{Command, Output};

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forge"))
        .args(args)
        .env("FORGE_THREADS", "2")
        .output()
        .expect("forge runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn every_subcommand_runs() {
    for args in [
        &["derive", "--problem", "mathieu-large", "--order", "3"][..],
        &["verify", "golden"],
        &["matrix", "--format", "csv"],
        &["limits", "--format", "text"],
        &["sweep", "--problem", "mathieu-large", "--format", "text"],
    ] {
        let o = forge(args);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = ["derive", "--problem", "lame-large", "--order", "4", "--format", "json"];
    let a = forge(&args);
    let b = forge(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["problem"], "lame-large");

    let m1 = forge(&["verify", "matrix", "--format", "json"]);
    let m2 = forge(&["verify", "matrix", "--format", "json"]);
    assert_eq!(m1.stdout, m2.stdout);
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["derive", "--problem", "nope"][..],
        &["derive", "--problem", "mathieu-large", "--order", "40"],
        &["verify", "oracle", "--tol", "1e-20"],
        &["verify", "limit", "--q", "1.5"],
    ] {
        let o = forge(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn failing_verification_exits_with_one() {
    // nu = 3 sits far outside the asymptotic window, so the error exceeds twice the bound
    let o = forge(&["verify", "oracle", "--problem", "mathieu-large", "--h", "4", "--nu", "3"]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("matrix.csv");
    let o = forge(&["matrix", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let direct = forge(&["matrix", "--format", "csv"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).ok();
}
