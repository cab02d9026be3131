use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use bobmpc::cli::{CheckSel, Config, ConfigError, CHECKS};
use bobmpc::party::PartySet;
use bobmpc::strategies::{by_name, CATALOGUE};
use serde_json::Value;

const SUM5: &str = "n 5 inputs 5 wires 9\nadd 5 0 1\nadd 6 5 2\nadd 7 6 3\nadd 8 7 4\noutput 8\n";

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// Writes the config and circuit into `dir` and runs the binary there.
fn run(dir: &Path, config: &str, circuit: &str, extra: &[&str]) -> (i32, PathBuf) {
    fs::write(dir.join("run.cfg"), config).unwrap();
    fs::write(dir.join("run.circ"), circuit).unwrap();
    let out = dir.join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_bobmpc"))
        .arg("--config")
        .arg(dir.join("run.cfg"))
        .arg("--circuit")
        .arg(dir.join("run.circ"))
        .arg("--out")
        .arg(&out)
        .arg("--quiet")
        .args(extra)
        .env_remove("BOBMPC_SEED")
        .status()
        .unwrap();
    (status.code().unwrap(), out)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn linear_sync_run_exits_zero_with_the_plaintext_sum() {
    let dir = scratch("linear");
    let (code, out) = run(&dir, "n = 5\nt_s = 1\nt_a = 1\nmode = sync\ninputs = 1,2,3,4,5\n", SUM5, &[]);
    assert_eq!(code, 0);
    let s = json(&out.join("summary.json"));
    assert_eq!(s["common_output"], 15);
    assert_eq!(s["expected"], 15);
    for p in s["parties"].as_array().unwrap() {
        assert_eq!(p["output"], 15);
        assert_eq!(p["cs"].as_array().unwrap().len(), 5);
        assert_eq!(p["time_delta"], 541.0);
    }
    let checks = json(&out.join("checks.json"));
    for c in CHECKS {
        assert_ne!(checks[*c]["status"], "fail", "{c}");
    }
    assert_eq!(checks["correctness"]["status"], "pass");
    assert!(s["by_layer"]["broadcast"]["messages"].as_u64().unwrap() > 0);
}

#[test]
fn violated_threshold_bound_exits_two() {
    let dir = scratch("bound");
    let (code, out) = run(&dir, "n = 4\nt_s = 1\nt_a = 1\n", "n 4 inputs 4 wires 4\noutput 0\n", &[]);
    assert_eq!(code, 2);
    assert!(!out.join("summary.json").exists());
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = scratch("invalid");
    let cases: &[(&str, &str, &[&str])] = &[
        ("n = 5\nmode = warp\n", SUM5, &[]),
        ("n = 5\nfoo = 1\n", SUM5, &[]),
        ("n = 5\nadversary = nobody\n", SUM5, &[]),
        ("n = 5\ncorrupt = 0,1\n", SUM5, &[]),
        ("n = 5\nprime = 15\n", SUM5, &[]),
        ("n = 5\n", "n 5 inputs 5 wires 6\nadd 5 0 9\noutput 5\n", &[]),
        ("n = 6\nt_s = 1\nt_a = 1\n", SUM5, &[]),
        ("n = 5\n", SUM5, &["--check", "speed"]),
    ];
    for (cfg, circ, extra) in cases {
        assert_eq!(run(&dir, cfg, circ, extra).0, 2, "{cfg:?} {extra:?}");
    }
}

#[test]
fn exhausted_event_budget_exits_three() {
    let dir = scratch("budget");
    let (code, out) = run(&dir, "n = 5\nevent_budget = 5000\n", SUM5, &[]);
    assert_eq!(code, 3);
    assert_eq!(json(&out.join("summary.json"))["status"], "budget");
}

#[test]
fn async_split_dealer_passes_the_commitment_check() {
    let dir = scratch("split");
    let cfg = "n = 5\nt_s = 1\nt_a = 1\nmode = async\nscheduler = fair\nadversary = split-dealer\ncorrupt = auto\nseed = 11\n";
    let (code, out) = run(&dir, cfg, SUM5, &[]);
    assert_eq!(code, 0);
    let s = json(&out.join("summary.json"));
    assert_eq!(s["corrupt"], serde_json::json!([4]));
    assert_eq!(s["checks"]["vss-commitment"]["status"], "pass");
    assert_eq!(s["checks"]["agreement"]["status"], "pass");
    assert_eq!(s["checks"]["deadline"]["status"], "skipped");
}

#[test]
fn summary_is_byte_identical_for_the_same_seed() {
    let cfg = "n = 5\nmode = async\nscheduler = adversarial\nadversary = bad-shares\nseed = 4\n";
    let a = run(&scratch("det-a"), cfg, SUM5, &[]);
    let b = run(&scratch("det-b"), cfg, SUM5, &[]);
    assert_eq!((a.0, b.0), (0, 0));
    let (sa, sb) = (fs::read(a.1.join("summary.json")).unwrap(), fs::read(b.1.join("summary.json")).unwrap());
    assert_eq!(sa, sb);
    assert_eq!(fs::read(a.1.join("transcript.jsonl")).unwrap(), fs::read(b.1.join("transcript.jsonl")).unwrap());
    let c = run(&scratch("det-c"), cfg, SUM5, &["--seed", "5"]);
    assert_ne!(json(&c.1.join("summary.json"))["transcript_digest"], json(&a.1.join("summary.json"))["transcript_digest"]);
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = scratch("env");
    fs::write(dir.join("run.cfg"), "n = 5\nseed = 1\n").unwrap();
    fs::write(dir.join("run.circ"), SUM5).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_bobmpc"))
        .args(["--config", "run.cfg", "--circuit", "run.circ", "--out", "o", "--quiet", "--check", "none"])
        .current_dir(&dir)
        .env("BOBMPC_SEED", "77")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let s = json(&dir.join("o/summary.json"));
    assert_eq!(s["seed"], 77);
    assert!(s["checks"].as_object().unwrap().values().all(|c| c["status"] == "skipped"));
}

#[test]
fn full_transcript_matches_the_digest_line_count() {
    let dir = scratch("full");
    let (code, out) = run(&dir, "n = 5\ntranscript = full\n", SUM5, &[]);
    assert_eq!(code, 0);
    let s = json(&out.join("summary.json"));
    let text = fs::read_to_string(out.join("transcript.jsonl")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len() as u64, s["transcript_lines"].as_u64().unwrap());
    let first: Value = serde_json::from_str(lines[0]).unwrap();
    for key in ["ev", "t", "from", "to", "tag", "digest"] {
        assert!(first.get(key).is_some(), "{key}");
    }
}

#[test]
fn catalogue_names_are_unique_and_constructible() {
    let names: BTreeSet<&str> = CATALOGUE.iter().map(|(n, _)| *n).collect();
    assert_eq!(names.len(), CATALOGUE.len());
    for (name, doc) in CATALOGUE {
        assert!(!doc.is_empty());
        let adv = by_name(name, PartySet::from_iter([4]), 0, 1).unwrap_or_else(|| panic!("{name}"));
        assert_eq!(adv.name(), *name);
    }
    assert!(by_name("nobody", PartySet::EMPTY, 0, 1).is_none());
}

#[test]
fn config_parsing() {
    let c = Config::parse("# comment\n n = 8 \nt_s=2\nt_a = 1\nmode = async\nscheduler = starve:3:40\nadversary = silent\n").unwrap();
    assert_eq!((c.params.n, c.params.t_s, c.params.t_a), (8, 2, 1));
    assert_eq!(c.corrupt_set(), PartySet::from_iter([7]));
    assert!(matches!(Config::parse("n = 5\nt_s = 2\n"), Err(ConfigError::Params(_))));
    assert!(matches!(Config::parse("n 5\n"), Err(ConfigError::Syntax { line: 1 })));
    assert!(matches!(Config::parse("inputs = 1,2\n"), Err(ConfigError::Inputs { .. })));
    assert_eq!(Config::parse("").unwrap().corrupt_set(), PartySet::EMPTY);
    assert!(CheckSel::parse("all").unwrap().enabled("triples"));
    assert!(!CheckSel::parse("agreement,cs").unwrap().enabled("triples"));
    assert!(CheckSel::parse("agreement,nope").is_err());
}
