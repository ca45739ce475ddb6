use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn wordnet_dir() -> PathBuf {
    std::env::var_os("SEMSIM_WORDNET_DIR").map(PathBuf::from).unwrap_or_else(|| root().join("data/wordnet"))
}

fn semsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semsim"))
        .args(args)
        .current_dir(root())
        .env_remove("SEMSIM_WORDNET_DIR")
        .output()
        .unwrap()
}

fn on_wordnet(args: &[&str]) -> Output {
    let dir = wordnet_dir();
    let mut all = vec!["--wordnet", dir.to_str().unwrap()];
    all.extend_from_slice(args);
    semsim(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn same_synset_lin_is_one() {
    let o = on_wordnet(&["sim", "--ic", "proposed", "--measure", "lin", "car", "automobile"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "1.000\n");
}

#[test]
fn eval_prints_two_decimal_pearson() {
    let o = on_wordnet(&["eval", "--dataset", "data/mc30.tsv", "--ic", "proposed", "--measure", "resnik"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("pearson: ")).expect("pearson line");
    let r: f64 = line["pearson: ".len()..].parse().unwrap();
    assert_eq!(line.len(), "pearson: 0.86".len());
    assert!((r - 0.86).abs() <= 0.03, "{line}");
    assert!(out.contains("car") && out.contains("0.704"));
}

#[test]
fn missing_words_are_a_usage_error() {
    let o = semsim(&["sim"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn unknown_word_is_a_domain_error() {
    let o = semsim(&["--edgelist", "fixtures/disjoint_subsumers.tsv", "sim", "ci", "unicorn"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unicorn"));
}

#[test]
fn two_sources_conflict() {
    let o = semsim(&["--edgelist", "fixtures/disjoint_subsumers.tsv", "--wordnet", "data/wordnet", "stats"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn no_source_is_reported() {
    let o = semsim(&["stats"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("SEMSIM_WORDNET_DIR"));
}

#[test]
fn bad_model_name_is_a_usage_error() {
    let o = semsim(&["--edgelist", "fixtures/disjoint_subsumers.tsv", "ic", "--model", "resnik", "--all"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dcs_on_fixture() {
    let o = semsim(&["--edgelist", "fixtures/disjoint_subsumers.tsv", "dcs", "ci", "cj"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "ci\tcj\td2 d1 d3\n");
}

#[test]
fn ic_table_dump() {
    let o = semsim(&["--edgelist", "fixtures/disjoint_subsumers.tsv", "ic", "--model", "seco", "--all"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 11);
    assert!(out.lines().any(|l| l == "root\troot\t0.000"));
    assert!(out.lines().all(|l| l.rsplit('\t').next().unwrap().split('.').nth(1).unwrap().len() == 3));
}

#[test]
fn json_outputs_carry_schema() {
    for args in [
        &["stats"][..],
        &["sim", "--ic", "seco", "--measure", "lin", "ci", "cj"],
        &["dcs", "ci", "cj"],
        &["ic", "--model", "zhou", "--word", "ci"],
    ] {
        let mut all = vec!["--edgelist", "fixtures/disjoint_subsumers.tsv", "--format", "json"];
        all.extend_from_slice(args);
        let o = semsim(&all);
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["schema"], 1, "{args:?}");
    }
}

#[test]
fn golden_failure_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("toy.tsv");
    fs::write(&data, "ci\tcj\t3\nci\tp\t2\nd1\tq\t1\nd3\ta\t0.5\n").unwrap();
    let golden = dir.path().join("golden.tsv");
    fs::write(&golden, "seco lin -0.99 0.01\n").unwrap();
    let o = semsim(&[
        "--edgelist",
        "fixtures/disjoint_subsumers.tsv",
        "grid",
        "--dataset",
        data.to_str().unwrap(),
        "--full",
        "--golden",
        golden.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FAIL seco + lin"));
    assert!(stdout(&o).contains("qingbo"));

    let json = dir.path().join("grid.json");
    let o = semsim(&[
        "--edgelist",
        "fixtures/disjoint_subsumers.tsv",
        "grid",
        "--dataset",
        data.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 26);
}

#[test]
fn cache_follows_source_changes() {
    let dir = tempfile::tempdir().unwrap();
    let onto = dir.path().join("onto.tsv");
    let cache = dir.path().join("onto.snap");
    let (onto_s, cache_s) = (onto.to_str().unwrap(), cache.to_str().unwrap());
    fs::write(&onto, "b\ta\nc\tb\n").unwrap();
    let args = ["--edgelist", onto_s, "--cache", cache_s, "stats"];

    let first = semsim(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    assert!(cache.is_file());
    let again = semsim(&args);
    assert_eq!(stdout(&first), stdout(&again));
    assert!(stdout(&first).contains("nodes\t3"));

    fs::write(&onto, "b\ta\nc\tb\nd\tb\n").unwrap();
    let changed = semsim(&args);
    assert!(stdout(&changed).contains("nodes\t4"));

    fs::write(&cache, b"not a snapshot").unwrap();
    let repaired = semsim(&args);
    assert!(repaired.status.success());
    assert!(stdout(&repaired).contains("nodes\t4"));
}

#[test]
fn depth_mode_flag() {
    let onto = "fixtures/disjoint_subsumers.tsv";
    let min = stdout(&semsim(&["--edgelist", onto, "stats"]));
    let max = stdout(&semsim(&["--edgelist", onto, "--depth-mode", "max", "stats"]));
    assert!(min.contains("deep_max\t4"), "{min}");
    assert!(max.contains("deep_max\t5"), "{max}");
}
