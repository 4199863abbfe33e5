//! Frozen CLI outputs and file formats. Regenerate with `UPDATE_GOLDEN=1`.

use std::path::{Path, PathBuf};

use clap::CommandFactory;
use potlab::cli::{run, Cli};
use potlab::formats::{domain_to_json, equilibrium_to_json, parse_domain};
use potlab::report::{from_json, to_csv, to_json};
use potlab::verify::{default_corpus, Relation, ReportRow};
use potlab_core::geom::CompactSet;
use potlab_core::potential::log_equilibrium;
use potlab_core::pt;

fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden file {name} differs");
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("potlab").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("potlab-golden-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn kernel_eval_on_the_disk() {
    let dir = scratch("kernel");
    let file = dir.join("disk.json");
    std::fs::write(&file, r#"{"type":"disk","center":[0,0],"radius":1}"#).unwrap();
    let (code, out) = cli(&["kernel", "--domain", file.to_str().unwrap(), "--degree", "40", "--eval", "0,0"]);
    assert_eq!(code, 0);
    let v: f64 = out.trim().parse().unwrap();
    assert!((v - 1.0 / std::f64::consts::PI).abs() < 1e-3);
    golden("kernel_disk_eval.txt", &out);
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["kernel", "--bogus"]).0, 2);
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["kernel", "--domain", "disk", "--eval", "3,0"]).0, 2);
    assert_eq!(cli(&["kernel", "--domain", "/nonexistent/domain.json", "--min"]).0, 2);
    assert_eq!(cli(&["kernel", "--domain", "disk"]).0, 2);
    assert_eq!(cli(&["robin", "--domain", r#"{"type":"disk","center":[0,0],"radius":-1}"#, "--at", "0,0"]).0, 2);
    // the eigen solver cannot reach this residual and reports non-convergence
    assert_eq!(cli(&["eigen", "--domain", "square", "--resolution", "8", "--tol", "1e-17"]).0, 1);
    assert_eq!(cli(&["robin", "--domain", "square", "--at", "0.5,0.5", "--samples", "64"]).0, 0);
}

#[test]
fn every_flag_lists_its_default() {
    let root = Cli::command();
    let mut help = String::new();
    for sub in root.get_subcommands() {
        let mut sub = sub.clone();
        let text = sub.render_long_help().to_string();
        for arg in sub.get_arguments() {
            let Some(long) = arg.get_long() else { continue };
            if long == "help" || long == "version" {
                continue;
            }
            let start = text.find(&format!("--{long}")).unwrap_or_else(|| panic!("{} --{long} missing", sub.get_name()));
            let rest = &text[start..];
            let end = rest[2..].find("\n  -").map(|i| i + 2).unwrap_or(rest.len());
            assert!(rest[..end].contains("[default:"), "{} --{long} shows no default:\n{}", sub.get_name(), &rest[..end]);
        }
        help += &format!("## {}\n{text}\n", sub.get_name());
    }
    golden("help.txt", &help);
}

#[test]
fn descriptors_and_equilibrium_json() {
    let mut s = String::new();
    for d in default_corpus() {
        let text = domain_to_json(&d);
        assert_eq!(domain_to_json(&parse_domain(&text).unwrap()), text);
        s += &text;
        s.push('\n');
    }
    golden("corpus_descriptors.jsonl", &s);
    let r = log_equilibrium(&CompactSet::Segment { a: pt(-1.0, 0.0), b: pt(1.0, 0.0) }, 16).unwrap();
    golden("equilibrium_segment.json", &equilibrium_to_json(&r));
}

#[test]
fn report_formats() {
    let rows = vec![
        ReportRow::new("blocki", "disk", "z=(0;0)".into(), Relation::Le, 0.3183, 0.31831, 0.05, "res=96;degree=40".into()),
        ReportRow::new("lieb", "slit-disk", "r=0.5*inradius, note".into(), Relation::Ge, 9.8, 1.25, 0.02, "res=96;degree=40".into()),
        ReportRow::new("weighted-dbar", "square", "error=\"x\"".into(), Relation::Le, f64::NAN, 1.0, 0.05, String::new()),
    ];
    let csv = to_csv(&rows);
    assert_eq!(csv.lines().count(), rows.len() + 1);
    golden("report.csv", &csv);
    let json = to_json(&rows);
    golden("report.json", &json);
    let back = from_json(&json).unwrap();
    assert_eq!(to_json(&back), json);
}

#[test]
fn small_verify_run_is_frozen() {
    let dir = scratch("verify");
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, r#"{"resolution": 24, "degree": 8, "samples": 64, "blocki_points": 3, "pairs": 3}"#).unwrap();
    let corpus = dir.join("corpus.json");
    std::fs::write(&corpus, r#"[{"type":"rect","min":[0,0],"max":[1,1],"label":"square"}]"#).unwrap();
    let out = dir.join("report.csv");
    let args = ["verify", "--corpus", corpus.to_str().unwrap(), "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", "2"];
    assert_eq!(cli(&args).0, 0);
    let csv = std::fs::read_to_string(&out).unwrap();
    let json = std::fs::read_to_string(out.with_extension("json")).unwrap();
    golden("verify_square.csv", &csv);
    golden("verify_square.json", &json);
}

#[test]
fn default_corpus_report_has_enough_rows() {
    let dir = scratch("default");
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, r#"{"resolution": 32, "degree": 12, "samples": 64}"#).unwrap();
    let out = dir.join("report.csv");
    let figs = dir.join("figs");
    let args = ["verify", "--corpus", "default", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--figs", figs.to_str().unwrap(), "--jobs", "4"];
    assert_eq!(cli(&args).0, 0);
    let rows = std::fs::read_to_string(&out).unwrap().lines().count() - 1;
    assert!(rows >= 40, "{rows}");
    assert!(figs.join("disk-kernel-diag.svg").exists() && figs.join("slit-disk-eigenfunction.svg").exists());
}
