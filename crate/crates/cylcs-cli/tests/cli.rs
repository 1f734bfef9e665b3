//! End-to-end checks of the command-line interface: exit codes, file
//! outputs, and byte-stable reruns.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cylcs"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

#[test]
fn verify_gaussian_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &["verify", "--dist", "gaussian", "--sigma", "1", "--out", "."],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read(tmp.path(), "report.csv");
    assert_eq!(report.matches(",pass,").count(), 5, "{report}");
}

#[test]
fn verify_rejects_narrow_uniform() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &["verify", "--dist", "uniform", "--sigma", "0.4", "--out", "."],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_uniform_pass_or_inconclusive() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "verify", "--dist", "uniform", "--sigma", "0.75", "--out", ".", "--format", "json",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    let report = read(tmp.path(), "report.json");
    assert!(report.contains("inconclusive"));
    assert!(!report.contains("\"fail\""));
}

#[test]
fn quantize_action_gives_diagonal_labels() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("f.obs"), "term 0 poly 0 1\n").unwrap();
    let out = run(
        &[
            "quantize", "--dist", "gaussian", "--sigma", "1", "--trunc", "2", "--observable",
            "f.obs", "--out", ".",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let op = read(tmp.path(), "operator.csv");
    assert!(op.contains("-2,-2,-2.0000000000000000e0,0.0000000000000000e0"));
    assert!(op.contains("1,1,1.0000000000000000e0,0.0000000000000000e0"));
    // diagonal: no off-diagonal rows
    for line in op.lines().filter(|l| !l.starts_with('#') && !l.starts_with('n')) {
        let mut it = line.split(',');
        assert_eq!(it.next(), it.next());
    }
}

#[test]
fn quantize_harmonic_single_offdiagonal() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("f.obs"), "term 1 const 1\n").unwrap();
    let out = run(
        &[
            "quantize", "--dist", "uniform", "--sigma", "1", "--trunc", "2", "--observable",
            "f.obs", "--out", ".",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    let op = read(tmp.path(), "operator.csv");
    let rows: Vec<&str> = op
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("n,"))
        .collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert!(row.ends_with(",5.0000000000000000e-1,0.0000000000000000e0"), "{row}");
    }
}

#[test]
fn quantize_rejects_empty_observable() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("f.obs"), "# nothing here\n").unwrap();
    let out = run(
        &[
            "quantize", "--dist", "gaussian", "--sigma", "1", "--trunc", "2", "--observable",
            "f.obs", "--out", ".",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no term lines"));
}

#[test]
fn lower_symbol_from_operator_file() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("f.obs"), "term 0 poly 0 0 1\n").unwrap();
    let q = run(
        &[
            "quantize", "--dist", "uniform", "--sigma", "0.5", "--trunc", "6", "--observable",
            "f.obs", "--out", ".",
        ],
        tmp.path(),
    );
    assert!(q.status.success());
    let ls = run(
        &[
            "lower-symbol", "--dist", "uniform", "--sigma", "0.5", "--operator", "operator.csv",
            "--grid-j", "0.3:0.3:1", "--grid-phi", "0:0:1", "--out", ".",
        ],
        tmp.path(),
    );
    assert!(ls.status.success(), "{}", String::from_utf8_lossy(&ls.stderr));
    let field = read(tmp.path(), "lower_symbol.csv");
    // <A_{J^2}> = 1/12 inside the central cell at the lowest width
    let data_row = field
        .lines()
        .find(|l| l.starts_with("3.0000000000000000e-1"))
        .expect("data row");
    assert!(data_row.contains("8.3333333333333"), "{data_row}");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("f.obs"), "term 0 poly 0 1\nterm 1 const 0.5-0.25i\nterm -1 const 0.5+0.25i\n").unwrap();
    let args = [
        "quantize", "--dist", "gaussian", "--sigma", "0.8", "--trunc", "5", "--observable",
        "f.obs", "--out", ".",
    ];
    assert!(run(&args, tmp.path()).status.success());
    let first = read(tmp.path(), "operator.csv");
    assert!(run(&args, tmp.path()).status.success());
    let second = read(tmp.path(), "operator.csv");
    assert_eq!(first, second);
}

#[test]
fn evolve_writes_frames_and_index() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "evolve", "--dist", "gaussian", "--sigma", "0.5", "--trunc", "8", "--hamiltonian",
            "J2", "--j0", "0.25", "--phi0", "0.5", "--times", "0,0.5", "--grid-j", "0.25:0.25:1",
            "--grid-phi", "0.5:0.5:1", "--out", ".",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let index = read(tmp.path(), "frames_index.csv");
    assert!(index.contains("frames/frame_0000.csv"));
    assert!(index.contains("frames/frame_0001.csv"));
    let frame0 = read(tmp.path(), "frames/frame_0000.csv");
    // at t = 0 the distribution at the initial point equals N(J0)
    let needle = frame0
        .lines()
        .find(|l| l.starts_with("0.0000000000000000e0,2.5"))
        .expect("frame row");
    let rho: f64 = needle.split(',').nth(3).unwrap().parse().unwrap();
    let d = cylcs::ActionDistribution::gaussian(0.5).unwrap();
    let expect = cylcs::normalization(&d, 0.25);
    assert!((rho - expect).abs() < 1e-12, "{rho} vs {expect}");
}

#[test]
fn d_coeffs_and_rel_error_emit_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let dc = run(
        &[
            "d-coeffs", "--dist", "uniform", "--sigma", "0.9", "--j0", "0.4", "--max-m", "3",
            "--trunc", "8", "--out", ".",
        ],
        tmp.path(),
    );
    assert!(dc.status.success());
    let table = read(tmp.path(), "d_coeffs.csv");
    assert!(table.contains("0,1.0000000000000000e0"));
    assert!(table.contains("2,0.0000000000000000e0"));

    std::fs::write(tmp.path().join("f.obs"), "term 0 poly 0 1\n").unwrap();
    let re = run(
        &[
            "rel-error", "--dist", "uniform", "--sigma", "0.5", "--observable", "f.obs",
            "--c-const", "1", "--trunc", "8", "--grid-j", "1:1:1", "--grid-phi", "0:0:1",
            "--out", ".",
        ],
        tmp.path(),
    );
    assert!(re.status.success(), "{}", String::from_utf8_lossy(&re.stderr));
    let field = read(tmp.path(), "rel_error.csv");
    let row = field.lines().last().unwrap();
    let err: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!(err < 1e-12, "relative error at an integer label: {err}");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("run.toml"),
        "[dist]\nkind = \"uniform\"\nsigma = 1.0\n\n[quantizer]\ntrunc = 3\n\n[output]\ndir = \"from_config\"\n",
    )
    .unwrap();
    let out = run(
        &["overlap", "--config", "run.toml", "--entries", "2"],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read(tmp.path(), "from_config/overlap.csv");
    assert!(table.contains("1,5.0000000000000000e-1"));

    // flag overrides the config sigma: overlap(0,1) becomes 1 - 1/(2*0.75)
    let out2 = run(
        &[
            "overlap", "--config", "run.toml", "--entries", "2", "--sigma", "0.75", "--out",
            "flagged",
        ],
        tmp.path(),
    );
    assert!(out2.status.success());
    let table2 = read(tmp.path(), "flagged/overlap.csv");
    assert!(table2.contains("1,3.3333333333333"), "{table2}");
}

#[test]
fn custom_density_from_file_drives_all_commands() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("density.txt"),
        "sigma 0.75\nsupport 0.75\ninterpolation linear\nsymmetrize even\nsamples\n0.0 1.0\n0.75 1.0\n",
    )
    .unwrap();
    let out = run(
        &[
            "overlap", "--dist", "custom", "--custom-density", "density.txt", "--entries", "2",
            "--out", ".",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read(tmp.path(), "overlap.csv");
    // flat profile on [-0.75, 0.75]: overlap(0,1) = 1 - 1/(2 sigma) = 1/3
    let row = table.lines().find(|l| l.starts_with("1,")).unwrap();
    let v: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 1.0 / 3.0).abs() < 1e-8, "{v}");
}
