mod common;

use std::fs;
use std::net::TcpListener;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use common::{run, run_ok};

fn cfg(dir: &Path) -> String {
    dir.join("sentalign.toml").to_str().unwrap().to_string()
}

#[test]
fn align_one_variant() {
    let dir = tempfile::tempdir().unwrap();
    common::ingest_fixture(dir.path());
    let c = cfg(dir.path());
    let args = ["--config", c.as_str(), "align", "--measure", "maximum", "--matcher", "mst-lis", "--k", "1.5"];
    let summary = run_ok(dir.path(), &args);
    assert!(summary.starts_with("variant,measure,matcher,k,pairs,failed_pairs,matches,avg_similarity\n"));
    assert!(summary.contains("\nmaximum-mstlis-1.5,maximum,mstlis,1.500000,6,0,"));
    let out = dir.path().join("corpus/results/maximum-mstlis-1.5");
    assert!(out.join("matches.json").is_file());
    let first = common::tree(&out);
    // 6 pairs, two sentence files each, plus matches.json.
    assert_eq!(first.len(), 13);
    run_ok(dir.path(), &args);
    assert_eq!(common::tree(&out), first);

    run_ok(dir.path(), &["--config", c.as_str(), "align", "--measure", "bow", "--matcher", "mst", "--no-threshold"]);
    assert!(dir.path().join("corpus/results/bow-mst-nothr/matches.json").is_file());
}

#[test]
fn jobs_do_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    common::ingest_fixture(dir.path());
    let c = cfg(dir.path());
    let results = dir.path().join("corpus/results");
    run_ok(dir.path(), &["--config", c.as_str(), "--jobs", "1", "align-all"]);
    let one = common::tree(&results);
    run_ok(dir.path(), &["--config", c.as_str(), "--jobs", "4", "align-all"]);
    assert_eq!(common::tree(&results), one);
    assert!(one.contains_key("summary.csv") && one.contains_key("table.csv"));
    assert_eq!(one.keys().filter(|k| k.ends_with("/matches.json")).count(), 32);
}

#[test]
fn stats_of_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("corpus")).unwrap();
    let c = common::write_config(dir.path(), "");
    let out = run_ok(dir.path(), &["--config", c.to_str().unwrap(), "stats"]);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("source,"));
}

#[test]
fn stats_of_fixture() {
    let dir = tempfile::tempdir().unwrap();
    common::ingest_fixture(dir.path());
    let out_file = dir.path().join("stats.csv");
    let c = cfg(dir.path());
    let stdout = run_ok(dir.path(), &["--config", c.as_str(), "stats", "--output", out_file.to_str().unwrap()]);
    assert!(stdout.is_empty());
    let csv = fs::read_to_string(out_file).unwrap();
    let sources: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(sources, ["apo", "stadt", "total"]);
}

#[test]
fn ingest_reports_discards() {
    let dir = tempfile::tempdir().unwrap();
    let c = common::write_config(dir.path(), "");
    let input = common::fixtures().join("input");
    let out = run(dir.path(), &["--config", c.to_str().unwrap(), "ingest", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("13 articles written, 1 discarded"), "{stderr}");
    assert!(stderr.contains("video.html"));
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["align", "--bogus"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));

    let out = run(dir.path(), &["align", "--measure", "jaccard", "--matcher", "mst"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("jaccard"));

    let out = run(dir.path(), &["align", "--measure", "bow", "--matcher", "mst", "--k", "1", "--no-threshold"]);
    assert!(!out.status.success());

    let out = run(dir.path(), &["--config", "missing.toml", "stats"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn evaluate_needs_results() {
    let dir = tempfile::tempdir().unwrap();
    common::ingest_fixture(dir.path());
    let c = cfg(dir.path());
    let gt = common::fixtures().join("ground-truth");
    let out = run(dir.path(), &["--config", c.as_str(), "evaluate", "--ground-truth", gt.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no alignment results"));
    let out = run(dir.path(), &["--config", c.as_str(), "sample-labels", "--n", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no alignment results"));
    let out = run(dir.path(), &["--config", c.as_str(), "evaluate", "--ground-truth", "nowhere.gt"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.matches("No such file").count(), 1, "{stderr}");
}

#[test]
fn histogram_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    common::ingest_fixture(dir.path());
    let c = cfg(dir.path());
    let args = ["--config", c.as_str(), "histogram", "--measure", "cosine", "--samples", "200", "--seed", "3"];
    let a = run_ok(dir.path(), &args);
    assert_eq!(a, run_ok(dir.path(), &args));
    assert_eq!(a.lines().next().unwrap(), "bin_lo,bin_hi,count,fraction");
    assert_eq!(a.lines().count(), 21);
    let total: usize = a.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(total, 200);
}

#[test]
fn sample_and_score_labels() {
    let dir = tempfile::tempdir().unwrap();
    common::ingest_fixture(dir.path());
    let c = cfg(dir.path());
    run_ok(dir.path(), &["--config", c.as_str(), "align-all"]);
    let tasks = dir.path().join("tasks.jsonl");
    let t = tasks.to_str().unwrap();
    run_ok(dir.path(), &["--config", c.as_str(), "sample-labels", "--n", "12", "--seed", "1", "--output", t]);
    let first = fs::read(&tasks).unwrap();
    run_ok(dir.path(), &["--config", c.as_str(), "sample-labels", "--n", "12", "--seed", "1", "--output", t]);
    assert_eq!(fs::read(&tasks).unwrap(), first);
    let lines: Vec<serde_json::Value> =
        String::from_utf8(first).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 12);

    // Label every third task as no_match.
    let labels: String = lines
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let verdict = if i % 3 == 0 { "no_match" } else { "match" };
            let record = serde_json::json!({
                "record_id": format!("label-{i:06}"),
                "task_id": t["task_id"],
                "variant": t["variant"],
                "pair_id": t["pair_id"],
                "simple_index": t["simple_index"],
                "complex_index": t["complex_index"],
                "verdict": verdict,
                "annotator": "a",
                "timestamp": "2026-01-01T00:00:00Z",
            });
            format!("{record}\n")
        })
        .collect();
    let label_file = dir.path().join("labels.jsonl");
    fs::write(&label_file, labels).unwrap();
    let out = run_ok(dir.path(), &["--config", c.as_str(), "accuracy", "--labels", label_file.to_str().unwrap()]);
    assert_eq!(out.lines().last().unwrap(), "all,12,8,0.666667");
    let v = lines[1]["variant"].as_str().unwrap();
    let out = run_ok(
        dir.path(),
        &["--config", c.as_str(), "accuracy", "--labels", label_file.to_str().unwrap(), "--variant", v],
    );
    let expected_n = lines.iter().filter(|t| t["variant"] == v).count();
    assert!(out.lines().nth(1).unwrap().starts_with(&format!("{v},{expected_n},")));
}

#[test]
fn serve_binds_and_answers() {
    let dir = tempfile::tempdir().unwrap();
    common::ingest_fixture(dir.path());
    let c = cfg(dir.path());
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let addr = format!("127.0.0.1:{port}");
    let mut child = Command::new(common::bin())
        .current_dir(dir.path())
        .env("RUST_LOG", "error")
        .args(["--config", c.as_str(), "serve", "--addr", addr.as_str()])
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let agent: ureq::Agent = ureq::Agent::config_builder().http_status_as_error(false).build().into();
    let deadline = Instant::now() + Duration::from_secs(20);
    let body = loop {
        if let Ok(mut r) = agent.get(format!("http://{addr}/api/progress")).call() {
            break r.body_mut().read_to_string().unwrap();
        }
        assert!(Instant::now() < deadline, "service did not come up");
        std::thread::sleep(Duration::from_millis(50));
    };
    assert!(body.contains("\"ground_truth\""));

    // A second instance cannot bind the same address.
    let second = run(dir.path(), &["--config", c.as_str(), "serve", "--addr", addr.as_str()]);
    assert_eq!(second.status.code(), Some(1));
    child.kill().unwrap();
    child.wait().unwrap();
}

#[test]
fn pair_failures_set_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let root = common::ingest_fixture(dir.path());
    fs::write(root.join("stadt/parsed/aktuell-schule.txt"), "").unwrap();
    let c = cfg(dir.path());
    let args = ["--config", c.as_str(), "align", "--measure", "cosine", "--matcher", "mst"];
    let out = run(dir.path(), &args);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("stadt.leicht-schule__stadt.aktuell-schule"), "{stderr}");
    let summary = String::from_utf8_lossy(&out.stdout);
    assert!(summary.contains(",5,1,"), "{summary}");

    // One failed pair of six stays within a 20 % tolerance.
    common::write_config(dir.path(), "failure_tolerance = 0.2");
    assert!(run(dir.path(), &args).status.success());
}
