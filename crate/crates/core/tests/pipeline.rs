//! Contest-flow integration tests: validity gating, the benchmark
//! team, and re-scoring a run from its artifacts alone.

mod common;

use std::path::Path;

use tracebench_core::contest::{run_contest, ContestConfig};
use tracebench_core::judge::{self, ScoringParams};
use tracebench_core::trace;

use common::{desk_grid, desk_training};

fn desk_config(base: &Path, teams: usize, defenses: Vec<String>) -> ContestConfig {
    let grid = desk_grid();
    let training = desk_training(&grid);
    let training_path = base.join("training.csv");
    trace::write_traces(&training, &training_path).unwrap();
    let mut cfg = ContestConfig::default();
    cfg.users = 60; // keep the flow tests quick
    cfg.days = 8;
    cfg.slots_per_day = common::DESK_SLOTS_PER_DAY;
    cfg.clusters = 6;
    cfg.teams = teams;
    cfg.theta = 6.0;
    cfg.training_file = training_path;
    cfg.training_days = 10;
    cfg.seed = 11;
    cfg.defenses = defenses;
    cfg.fuzzy_tf_idf = "count".to_string();
    cfg.projections = 100;
    cfg.poi_count = 80;
    cfg
}

fn temp_base(tag: &str) -> std::path::PathBuf {
    let base = std::env::temp_dir().join(format!("tb-pipeline-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&base).unwrap();
    base
}

#[test]
fn all_deleted_submission_is_invalid_with_zeroed_privacy_scores() {
    let base = temp_base("invalid");
    // MRLH with deletion probability 1 deletes every event.
    let cfg = desk_config(
        &base,
        2,
        vec!["mrlh:0,0,1.0".to_string(), "none".to_string()],
    );
    let outcome = run_contest(&cfg, &base.join("run")).unwrap();

    let team1 = &outcome.summary.teams[0];
    assert!(!team1.valid);
    assert_eq!(team1.s_u, 0.0);
    assert_eq!(team1.s_r_min, 0.0);
    assert_eq!(team1.s_t_min, 0.0);
    // Invalid traces are not distributed, so no anonymized file exists.
    assert!(!base.join("run/team1_anon.csv").exists());
    // The report carries the invalid row with a dash attacker.
    let report = std::fs::read_to_string(base.join("run/report.csv")).unwrap();
    assert!(report.lines().any(|l| l.starts_with("1,-,0.0000,false")));
    // The valid team still has scores.
    assert!(outcome.summary.teams[1].valid);
    std::fs::remove_dir_all(&base).ok();
}

#[test]
fn single_team_round_still_attacks_the_benchmark() {
    let base = temp_base("tau1");
    let cfg = desk_config(&base, 1, vec!["pl:4,1".to_string()]);
    let outcome = run_contest(&cfg, &base.join("run")).unwrap();

    // Team 2 is the pseudonymized benchmark; team 1 must attack it.
    let benchmark = &outcome.team_scores[1];
    assert!(benchmark.benchmark);
    assert!(!benchmark.attacks.is_empty());
    assert!(benchmark.attacks.iter().all(|a| a.attacker_team == 1));
    // Nobody attacks team 1 itself in a one-team round.
    assert!(outcome.team_scores[0].attacks.is_empty());
    assert_eq!(outcome.summary.teams[0].s_r_min, 1.0);
    // Sample datasets for teams 3 and 4 are still published.
    for t in [1, 2, 3, 4] {
        assert!(base.join(format!("run/team{t}_ref.csv")).exists());
        assert!(base.join(format!("run/team{t}_org.csv")).exists());
    }
    assert!(!base.join("run/team3_obf.csv").exists());
    std::fs::remove_dir_all(&base).ok();
}

#[test]
fn run_directory_suffices_to_re_score() {
    let base = temp_base("rescore");
    let cfg = desk_config(
        &base,
        2,
        vec!["mrlh:1,1,0.1".to_string(), "rr:4".to_string()],
    );
    let run = base.join("run");
    let outcome = run_contest(&cfg, &run).unwrap();
    let grid = desk_grid();

    // Recompute team 1's utility from the artifacts.
    let days = cfg.days / 2;
    let original =
        trace::read_traces(&run.join("team1_org.csv"), days, cfg.slots_per_day, &grid).unwrap();
    let obfuscated =
        trace::read_traces(&run.join("team1_obf.csv"), days, cfg.slots_per_day, &grid).unwrap();
    let params = ScoringParams::default();
    let s_u = judge::utility_score(&original, &obfuscated, &params, &grid).unwrap();
    assert!((s_u - outcome.summary.teams[0].s_u).abs() < 1e-12);

    // Recompute one attack's re-identification score from the stored
    // ID tables and check it against the report row.
    let truth = trace::read_ground_truth_table(&run.join("judge/team1_idtable.csv")).unwrap();
    let guess = trace::read_id_table(&run.join("attacks/team1_by2_fuzzy_idtable.csv")).unwrap();
    let s_r = judge::reid_score(&truth, &guess).unwrap();
    let report = std::fs::read_to_string(run.join("report.csv")).unwrap();
    let row = report
        .lines()
        .find(|l| l.starts_with("1,team2/fuzzy,"))
        .expect("report row for team1 attacked by team2/fuzzy");
    let reported: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
    assert!(
        (s_r - reported).abs() <= 5e-5,
        "{s_r} vs reported {reported}"
    );

    // Inferred traces re-score identically too.
    let inferred = trace::read_traces(
        &run.join("attacks/team1_by2_fuzzy_inferred.csv"),
        days,
        cfg.slots_per_day,
        &grid,
    )
    .unwrap();
    let hospitals = std::collections::BTreeSet::new();
    let scoring = ScoringParams {
        hospitals,
        ..ScoringParams::default()
    };
    let (s_t, _) = judge::trace_score(&original, &inferred, &scoring, &grid).unwrap();
    let reported_t: f64 = row.split(',').nth(5).unwrap().parse().unwrap();
    assert!((s_t - reported_t).abs() <= 5e-5);
    std::fs::remove_dir_all(&base).ok();
}

#[test]
fn deterministic_summary_across_processes_of_same_seed() {
    // The full byte-level check lives in the acceptance suite; this
    // guards the in-memory summary for a quick signal.
    let base = temp_base("golden");
    let cfg = desk_config(&base, 2, vec!["none".to_string()]);
    let a = run_contest(&cfg, &base.join("a")).unwrap();
    let b = run_contest(&cfg, &base.join("b")).unwrap();
    for (ta, tb) in a.summary.teams.iter().zip(&b.summary.teams) {
        assert_eq!(ta.s_u, tb.s_u);
        assert_eq!(ta.s_r_min, tb.s_r_min);
        assert_eq!(ta.s_t_min, tb.s_t_min);
        assert_eq!(ta.valid, tb.valid);
    }
    assert_eq!(a.summary.best_anonymization, b.summary.best_anonymization);
    assert_eq!(a.summary.best_reid_attacker, b.summary.best_reid_attacker);
    assert_eq!(a.summary.best_trace_attacker, b.summary.best_trace_attacker);
    std::fs::remove_dir_all(&base).ok();
}
