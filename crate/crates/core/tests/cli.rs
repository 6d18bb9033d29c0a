use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_platoon-lateral")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(cmd: &str, config: &Path, out: &Path) -> Output {
    Command::new(bin())
        .args([cmd, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .arg("--quiet")
        .output()
        .expect("spawn")
}

fn write_cfg(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn norms(dir: &Path) -> Vec<f64> {
    fs::read_to_string(dir.join("norms.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn simulate_bundled_lfp_and_ff() {
    let tmp = tempfile::tempdir().unwrap();
    let lfp = tmp.path().join("lfp");
    let o = run("simulate", &configs().join("lfp_table3.cfg"), &lfp);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let n = norms(&lfp);
    assert_eq!(n.len(), 12);
    assert!(n.windows(2).all(|w| w[1] < w[0]));
    for f in [
        "trajectory.csv",
        "learned.csv",
        "path.csv",
        "certificate.txt",
    ] {
        assert!(lfp.join(f).exists(), "{f}");
    }

    let ff = tmp.path().join("ff");
    let o = run("simulate", &configs().join("ff_table3.cfg"), &ff);
    assert_eq!(o.status.code(), Some(0));
    let n = norms(&ff);
    assert!(n.windows(2).all(|w| w[1] > w[0]));
    let cert = fs::read_to_string(ff.join("certificate.txt")).unwrap();
    assert!(cert.contains("verdict: UNSTABLE-BY-THEOREM"));
    assert!(!ff.join("learned.csv").exists());
}

#[test]
fn outputs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("lfp_kld0.cfg");
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(run("simulate", &cfg, &a).status.code(), Some(0));
    assert_eq!(run("simulate", &cfg, &b).status.code(), Some(0));
    for f in [
        "trajectory.csv",
        "learned.csv",
        "norms.csv",
        "certificate.txt",
    ] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn csv_headers_declare_units() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    assert_eq!(
        run("simulate", &configs().join("lfp_table3.cfg"), &out)
            .status
            .code(),
        Some(0)
    );
    for f in ["trajectory.csv", "learned.csv", "path.csv", "norms.csv"] {
        let text = fs::read_to_string(out.join(f)).unwrap();
        let header = text.lines().next().unwrap();
        for col in header.split(',') {
            let unitless = ["vehicle", "ratio_elat", "ratio_evec"];
            assert!(
                unitless.contains(&col)
                    || col.contains("_m")
                    || col.contains("rad")
                    || col.contains("mixed"),
                "{f}: column {col} has no unit"
            );
        }
    }
}

#[test]
fn analyze_bundled() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        ("lfp_table3.cfg", "POINTWISE-ATTENUATING"),
        ("lfp_kld0.cfg", "UNSTABLE-BY-THEOREM"),
        ("lfp_vector.cfg", "UNSTABLE-BY-THEOREM"),
        ("ff_constant_curvature.cfg", "UNSTABLE-BY-THEOREM"),
    ];
    for (cfg, expected) in cases {
        let out = tmp.path().join(cfg);
        let o = run("analyze", &configs().join(cfg), &out);
        assert_eq!(o.status.code(), Some(0), "{cfg}");
        let cert = fs::read_to_string(out.join("certificate.txt")).unwrap();
        assert!(
            cert.contains(&format!("verdict: {expected}")),
            "{cfg}\n{cert}"
        );
    }
    let kld0 = fs::read_to_string(tmp.path().join("lfp_kld0.cfg/certificate.txt")).unwrap();
    assert!(kld0.contains("no derivative learning"));
    let vector = fs::read_to_string(tmp.path().join("lfp_vector.cfg/certificate.txt")).unwrap();
    assert!(vector.contains("witness: sigma1"));
}

const BASE: &str = r#"[path]
type = "lane_change"
changes = 1
lane_offset_m = 3.5
change_length_m = 50.0
straight_length_m = 30.0

[gains]
k_p = [0.06, 0.96]
k_d = [0.0, 0.08]
k_ff_m = 1.59

[platoon]
vehicles = 3
strategy = "lfp-dt"
"#;

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();

    let bad = write_cfg(
        d,
        "bad.cfg",
        &BASE.replace("vehicles = 3", "vehicles = 3\ncolour = 1"),
    );
    let o = run("simulate", &bad, &d.join("o1"));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 15"));

    let blow = write_cfg(
        d,
        "blow.cfg",
        &BASE.replace("k_p = [0.06, 0.96]", "k_p = [-0.5, 0.96]"),
    );
    assert_eq!(run("simulate", &blow, &d.join("o2")).status.code(), Some(2));
    assert_eq!(run("analyze", &blow, &d.join("o3")).status.code(), Some(3));

    let missing = d.join("nope.cfg");
    assert_eq!(
        run("simulate", &missing, &d.join("o4")).status.code(),
        Some(1)
    );
}

#[test]
fn design_outcomes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let out = d.join("ok");
    let o = run("design", &configs().join("design_table3.cfg"), &out);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(out.join("design.txt")).unwrap();
    assert!(text.starts_with("design: ACCEPTED k_lp = -0.04, k_ld = -0.3"));

    let zero = write_cfg(
        d,
        "z.cfg",
        &format!("{BASE}\n[design]\nk_lp_range = [-0.1, 0.0]\nk_ld_range = [0.0, 0.0]\n"),
    );
    let o = run("design", &zero, &d.join("z"));
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no derivative learning"));

    let pos = write_cfg(
        d,
        "p.cfg",
        &format!("{BASE}\n[design]\nk_lp_range = [0.0, 0.1]\nk_ld_range = [-1.0, 0.0]\n"),
    );
    let o = run("design", &pos, &d.join("p"));
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("|H(0)|"));

    assert_eq!(
        run("design", &configs().join("lfp_table3.cfg"), &d.join("n"))
            .status
            .code(),
        Some(1)
    );
}
