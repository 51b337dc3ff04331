use std::process::{Command, Output};

fn toprec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toprec")).args(args).output().expect("run toprec")
}

fn stdout(args: &[&str]) -> String {
    let out = toprec(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn runs_are_byte_identical() {
    for args in [
        &["correlators", "--curve", "mirzakhani", "--chi-max", "3"][..],
        &["correlators", "--curve", "airy", "--chi-max", "3", "--format", "csv"],
        &["check", "--curve", "bessel", "--chi-max", "3"],
        &["intersections", "kappa", "--chi-max", "3", "--format", "csv"],
        &["hurwitz", "--max-degree", "4", "--oracle"],
        &["wavefunction", "--order", "3", "--verify"],
    ] {
        let a = toprec(args);
        let b = toprec(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn correlator_rows() {
    let csv = stdout(&["correlators", "--curve", "airy", "--chi-max", "2", "--format", "csv"]);
    assert!(csv.lines().any(|l| l == "1,1,3,,,,1/8"), "{csv}");
    let bessel = stdout(&["correlators", "--curve", "bessel", "--chi-max", "2", "--format", "csv"]);
    assert!(bessel.lines().skip(1).all(|l| !l.starts_with("0,")), "{bessel}");
    let mirz = stdout(&["correlators", "--curve", "mirzakhani", "--chi-max", "2", "--format", "csv"]);
    assert!(mirz.contains("pi2"));
    let airy_engine = stdout(&["coefficients", "--curve", "airy", "--chi-max", "2", "--engine", "airy", "--format", "csv"]);
    assert_eq!(airy_engine, csv);
}

#[test]
fn enumerative_commands() {
    let psi = stdout(&["intersections", "psi", "--g", "1", "--n", "1", "--format", "csv"]);
    assert!(psi.contains("1/24"));
    let h = stdout(&["hurwitz", "--g", "0", "--profile", "2", "--oracle", "--format", "csv"]);
    assert_eq!(h.lines().nth(1), Some("0,1,2,1/2"));
    let w = stdout(&["wavefunction", "--curve", "airy", "--order", "3", "--verify"]);
    assert!(w.contains("\"pass\": true"));
}

#[test]
fn exit_codes() {
    assert_eq!(toprec(&["check", "--curve", "airy", "--chi-max", "3"]).status.code(), Some(0));
    let bad = toprec(&["check", "--curve", "airy", "--chi-max", "3", "--corrupt", "1,1"]);
    assert_eq!(bad.status.code(), Some(2));
    let report = String::from_utf8(bad.stdout).unwrap();
    assert!(report.contains("\"exponent\""));
    assert_eq!(toprec(&["correlators", "--curve", "nowhere"]).status.code(), Some(3));
    assert_eq!(toprec(&["correlators", "--chi-max", "0"]).status.code(), Some(3));
    assert_eq!(toprec(&["wavefunction", "--curve", "lambert", "--order", "1"]).status.code(), Some(3));
}

#[test]
fn curve_files() {
    let dir = std::env::temp_dir().join(format!("toprec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("airy.curve");
    std::fs::write(&path, "x_num = 0, 0, 1/2\nx_den = 1\ny_num = 0, 1\ny_den = 1\nram = 0\n").unwrap();
    let from_file = stdout(&["correlators", "--curve", path.to_str().unwrap(), "--chi-max", "2", "--format", "csv"]);
    let from_catalog = stdout(&["correlators", "--curve", "airy", "--chi-max", "2", "--format", "csv"]);
    assert_eq!(from_file, from_catalog);
    std::fs::remove_dir_all(&dir).unwrap();
}
