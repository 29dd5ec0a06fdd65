use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use supercomb_cli::cache::{Cache, Status};
use supercomb_cli::io::{self, Instance, InputError};
use supercomb_cli::{run_with, Context, Outcome};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str], cache: &Path) -> Outcome {
    let mut full = vec!["supercomb".to_string()];
    full.extend(args.iter().map(|a| a.to_string()));
    run_with(&full, &Context { cache_dir: cache.to_path_buf() })
}

fn run_fixture(args: &[&str]) -> (Outcome, Value) {
    let dir = tempfile::tempdir().unwrap();
    let resolved: Vec<String> = args
        .iter()
        .map(|a| if a.ends_with(".json") { fixture(a).display().to_string() } else { a.to_string() })
        .collect();
    let refs: Vec<&str> = resolved.iter().map(String::as_str).collect();
    let out = run(&refs, dir.path());
    let report = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out, report)
}

#[test]
fn chain3_is_a_valid_subbase() {
    let (out, report) = run_fixture(&["check-subbase", "chain3.json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["command"], "check-subbase");
    assert_eq!(report["holds"], true);
}

#[test]
fn tri_fails_with_a_binary_witness() {
    let (out, report) = run_fixture(&["check-subbase", "tri.json"]);
    assert_eq!(out.code, 1);
    assert_eq!(report["holds"], false);
    assert_eq!(report["witness"]["kind"], "binary", "{report}");
}

#[test]
fn xi_on_chain5() {
    let (out, report) = run_fixture(&["xi", "chain5.json", "--x", "3", "--set", "0,1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(report["xi"], 1);
}

#[test]
fn xi_rejects_points_outside_the_ground_set() {
    let (out, _) = run_fixture(&["xi", "chain5.json", "--x", "9", "--set", "0,1"]);
    assert_eq!(out.code, 2);
    let (out, _) = run_fixture(&["xi", "chain5.json", "--x", "1", "--set", ""]);
    assert_eq!(out.code, 2);
}

#[test]
fn hull_of_two_chain_points_is_the_interval() {
    let (out, report) = run_fixture(&["hull", "chain5.json", "--set", "1,3"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(report["hull"], serde_json::json!([1, 2, 3]));
}

#[test]
fn select_examples() {
    let (out, report) = run_fixture(&["select", "select_sierpinski.json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(report["holds"], true);
    let (out, report) = run_fixture(&["select", "select_extend.json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(report["selection"], serde_json::json!({"a": 2, "b": 2, "c": 2}));
    let (out, _) = run_fixture(&["select", "select_tri.json"]);
    assert_eq!(out.code, 1);
}

#[test]
fn g_outside_phi_is_an_invariant_error() {
    let (out, _) = run_fixture(&["select", "select_bad_g.json"]);
    assert_eq!(out.code, 2);
    let err = io::parse_instance(&fixture("select_bad_g.json")).unwrap_err();
    assert_eq!(err.kind(), "invariant", "{err}");
}

#[test]
fn opens_without_the_full_set_are_rejected() {
    let err = io::parse_space(&fixture("bad_space.json")).unwrap_err();
    assert!(matches!(err, InputError::Invariant { .. }), "{err}");
}

#[test]
fn malformed_and_unknown_input_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"n\": 3, \"subbase\": [[0]").unwrap();
    let out = run(&["check-subbase", broken.to_str().unwrap()], dir.path());
    assert_eq!(out.code, 2);
    assert!(matches!(io::parse_subbase(&broken), Err(InputError::Parse { .. })));

    let extra = dir.path().join("extra.json");
    fs::write(&extra, "{\"n\": 3, \"subbase\": [[0]], \"colour\": 1}").unwrap();
    assert!(matches!(io::parse_subbase(&extra), Err(InputError::Schema { .. })));

    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["check-subbase", missing.to_str().unwrap()], dir.path()).code, 2);
    assert_eq!(run(&["no-such-verb"], dir.path()).code, 2);
    assert_eq!(run(&["--help"], dir.path()).code, 0);
}

#[test]
fn soft_and_invertible_exit_codes() {
    let (out, report) = run_fixture(&["check-soft", "soft.json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(report["selection"], serde_json::json!({"a": 1, "b": 0}));
    let (out, _) = run_fixture(&["check-soft", "soft_nonconvex.json"]);
    assert_eq!(out.code, 1);
    let sb = fixture("chain3.json").display().to_string();
    let (out, report) = run_fixture(&["check-invertible", "map_convex.json", "--subbase", &sb]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(report["brute_force_agrees"], true);
    let (out, report) = run_fixture(&["check-invertible", "map_nonconvex.json", "--subbase", &sb]);
    assert_eq!(out.code, 1);
    assert_eq!(report["witness"]["kind"], "non-convex-fiber", "{report}");
}

#[test]
fn files_round_trip() {
    for name in ["chain3.json", "chain5.json", "tri.json", "dirty.json"] {
        let (sb, _) = io::parse_subbase(&fixture(name)).unwrap();
        let text = io::to_json(&io::subbase_to_file(&sb));
        let file = io::from_json(Path::new(name), &text).unwrap();
        assert_eq!(io::subbase_from_file(Path::new(name), &file).unwrap().0, sb, "{name}");
    }
    let space = io::parse_space(&fixture("sierpinski.json")).unwrap();
    let file = io::from_json(Path::new("s"), &io::to_json(&io::space_to_file(&space))).unwrap();
    assert_eq!(io::space_from_file(Path::new("s"), &file).unwrap(), space);
    for name in ["map_convex.json", "map_named.json"] {
        let map = io::parse_map(&fixture(name)).unwrap();
        let file = io::from_json(Path::new(name), &io::to_json(&io::map_to_file(&map))).unwrap();
        assert_eq!(io::point_map_from_file(Path::new(name), &file, None).unwrap(), map, "{name}");
    }
    for name in ["select_sierpinski.json", "select_extend.json", "soft.json"] {
        let written = match io::parse_instance(&fixture(name)).unwrap() {
            Instance::Selection(inst) => io::to_json(&io::selection_to_file(&inst)),
            Instance::Softness(f, sb, inst) => io::to_json(&io::softness_to_file(&f, &sb, &inst)),
            other => panic!("{name}: {other:?}"),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(name);
        fs::write(&path, written).unwrap();
        assert_eq!(io::parse_instance(&path).unwrap(), io::parse_instance(&fixture(name)).unwrap(), "{name}");
    }
}

#[test]
fn cache_cold_warm_and_corrupt() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let cold = cache.ensure(3, None).unwrap();
    assert_eq!(cold.status, Status::Miss);
    assert_eq!(fs::read_to_string(&cold.path).unwrap().lines().count(), 4);
    let stamp = fs::metadata(&cold.path).unwrap().modified().unwrap();

    let warm = cache.ensure(3, None).unwrap();
    assert_eq!(warm.status, Status::Hit);
    assert_eq!(fs::metadata(&warm.path).unwrap().modified().unwrap(), stamp);

    let text = fs::read_to_string(&cold.path).unwrap();
    fs::write(&cold.path, &text[..text.len() / 2]).unwrap();
    let fixed = cache.ensure(3, None).unwrap();
    assert!(matches!(fixed.status, Status::CacheCorrupt { .. }), "{:?}", fixed.status);
    assert_eq!(fs::read_to_string(&fixed.path).unwrap(), text);
    assert!(dir.path().join("mls-3.ndjson.bad").exists());
}

#[test]
fn mls_enum_matches_the_reference_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mls3.ndjson");
    let outcome = run(&["mls-enum", "3", "--out", out.to_str().unwrap()], &dir.path().join("cache"));
    assert_eq!(outcome.code, 0, "{}", outcome.stderr);
    assert_eq!(fs::read(&out).unwrap(), fs::read(fixture("mls3.ndjson")).unwrap());
}

#[test]
fn lambda_apply_and_dot_export() {
    let dir = tempfile::tempdir().unwrap();
    let mls = fixture("mls3.ndjson").display().to_string();
    let map = fixture("map_convex.json").display().to_string();
    let out = run(&["lambda-apply", &map, "--mls-file", &mls], dir.path());
    assert_eq!(out.code, 0, "{}", out.stderr);
    let report: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report["count"], 4);

    let dot = dir.path().join("l3.dot");
    let out = run(&["export-dot", "3", "--out", dot.to_str().unwrap()], dir.path());
    assert_eq!(out.code, 0, "{}", out.stderr);
    let report: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!((report["vertices"].as_u64(), report["edges"].as_u64()), (Some(4), Some(3)));
    assert!(fs::read_to_string(&dot).unwrap().starts_with("graph"));
}
