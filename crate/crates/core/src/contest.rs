//! Full contest rounds: synthesize per-team datasets, obfuscate,
//! gate on utility, pseudonymize, attack, score, aggregate, and write
//! every artifact into a run directory. Re-running with the same
//! configuration and seed reproduces the run directory byte for byte.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use crate::analytics;
use crate::anonymize::{ClusterAnonConfig, Obfuscator};
use crate::attack::{self, FuzzyParams, IdfWeight, TfWeight};
use crate::grid::{Grid, RegionId};
use crate::judge::{self, AttackRecord, ScoringParams, TeamScores};
use crate::seed::stage_seed;
use crate::synth::{self, SampleParams};
use crate::trace::{self, TraceSet};
use crate::{Error, Result};

/// Attack families a team can field. Each contributes both a
/// re-identification and a trace-inference attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackKind {
    VisitProb,
    HomeProb,
    Fuzzy,
}

impl AttackKind {
    pub fn name(self) -> &'static str {
        match self {
            AttackKind::VisitProb => "visitprob",
            AttackKind::HomeProb => "homeprob",
            AttackKind::Fuzzy => "fuzzy",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "visitprob" => Ok(AttackKind::VisitProb),
            "homeprob" => Ok(AttackKind::HomeProb),
            "fuzzy" => Ok(AttackKind::Fuzzy),
            other => Err(Error::Config(format!("unknown attack method {other:?}"))),
        }
    }
}

/// Everything a contest round needs. Parsed from a flat key-value
/// file; any key can be overridden from the command line.
#[derive(Debug, Clone)]
pub struct ContestConfig {
    pub grid_width: u32,
    pub grid_height: u32,
    pub cell_width_m: f64,
    pub cell_height_m: f64,
    /// Virtual users per team.
    pub users: usize,
    /// Days generated per team; the first half becomes the reference
    /// set, the second half the original set.
    pub days: u32,
    pub slots_per_day: u32,
    /// Feature clusters in the generative model.
    pub clusters: usize,
    /// Contesting teams. The judge adds a pseudonymized benchmark team
    /// and two sample teams on top.
    pub teams: usize,
    pub theta: f64,
    pub home_prob: f64,
    pub lambda_u_m: f64,
    pub lambda_t_m: f64,
    pub s_req: f64,
    pub hospital_weight: f64,
    /// One region ID per line.
    pub hospitals_file: Option<PathBuf>,
    pub training_file: PathBuf,
    pub training_days: u32,
    pub seed: u64,
    /// Obfuscation spec per team, cycled when shorter than `teams`.
    pub defenses: Vec<String>,
    pub attacks: Vec<AttackKind>,
    pub fuzzy_eta0: f64,
    pub fuzzy_lambda0: f64,
    pub fuzzy_tf_idf: String,
    pub freq_threshold: f64,
    pub poi_count: usize,
    pub projections: usize,
}

impl Default for ContestConfig {
    fn default() -> Self {
        ContestConfig {
            grid_width: 16,
            grid_height: 16,
            cell_width_m: 341.0,
            cell_height_m: 347.0,
            users: 200,
            days: 20,
            slots_per_day: 20,
            clusters: 16,
            teams: 2,
            theta: 1.0,
            home_prob: 0.8,
            lambda_u_m: 2000.0,
            lambda_t_m: 2000.0,
            s_req: 0.7,
            hospital_weight: 10.0,
            hospitals_file: None,
            training_file: PathBuf::from("training.csv"),
            training_days: 10,
            seed: 1,
            defenses: vec!["none".to_string()],
            attacks: vec![
                AttackKind::VisitProb,
                AttackKind::HomeProb,
                AttackKind::Fuzzy,
            ],
            fuzzy_eta0: 0.33,
            fuzzy_lambda0: 1.0,
            fuzzy_tf_idf: "logpop".to_string(),
            freq_threshold: 0.5,
            poi_count: 200,
            projections: 1000,
        }
    }
}

impl ContestConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(
            self.grid_width,
            self.grid_height,
            self.cell_width_m,
            self.cell_height_m,
        )
    }

    pub fn fuzzy_params(&self) -> Result<FuzzyParams> {
        let (tf, idf) = parse_tf_idf(&self.fuzzy_tf_idf)?;
        Ok(FuzzyParams {
            eta0: self.fuzzy_eta0,
            lambda0: self.fuzzy_lambda0,
            tf,
            idf,
        })
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad value {value:?} for key {key:?}")))
        }
        match key {
            "grid_width" => self.grid_width = num(key, value)?,
            "grid_height" => self.grid_height = num(key, value)?,
            "cell_width_m" => self.cell_width_m = num(key, value)?,
            "cell_height_m" => self.cell_height_m = num(key, value)?,
            "users" => self.users = num(key, value)?,
            "days" => self.days = num(key, value)?,
            "slots_per_day" => self.slots_per_day = num(key, value)?,
            "clusters" => self.clusters = num(key, value)?,
            "teams" => self.teams = num(key, value)?,
            "theta" => self.theta = num(key, value)?,
            "home_prob" => self.home_prob = num(key, value)?,
            "lambda_u_m" => self.lambda_u_m = num(key, value)?,
            "lambda_t_m" => self.lambda_t_m = num(key, value)?,
            "s_req" => self.s_req = num(key, value)?,
            "hospital_weight" => self.hospital_weight = num(key, value)?,
            "hospitals" => self.hospitals_file = Some(PathBuf::from(value.trim())),
            "training" => self.training_file = PathBuf::from(value.trim()),
            "training_days" => self.training_days = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "defense" => self.defenses = value.split(';').map(|s| s.trim().to_string()).collect(),
            "attacks" => {
                self.attacks = value
                    .split(',')
                    .map(AttackKind::parse)
                    .collect::<Result<Vec<_>>>()?
            }
            "fuzzy_eta0" => self.fuzzy_eta0 = num(key, value)?,
            "fuzzy_lambda0" => self.fuzzy_lambda0 = num(key, value)?,
            "fuzzy_tf_idf" => self.fuzzy_tf_idf = value.trim().to_string(),
            "freq_threshold" => self.freq_threshold = num(key, value)?,
            "pois" => self.poi_count = num(key, value)?,
            "projections" => self.projections = num(key, value)?,
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ContestConfig::default();
        for (ix, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "config line {}: expected `key = value`, got {line:?}",
                    ix + 1
                )));
            };
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Canonical text form, written into the run directory so a run
    /// can be re-scored from its artifacts alone.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "grid_width = {}", self.grid_width);
        let _ = writeln!(s, "grid_height = {}", self.grid_height);
        let _ = writeln!(s, "cell_width_m = {}", self.cell_width_m);
        let _ = writeln!(s, "cell_height_m = {}", self.cell_height_m);
        let _ = writeln!(s, "users = {}", self.users);
        let _ = writeln!(s, "days = {}", self.days);
        let _ = writeln!(s, "slots_per_day = {}", self.slots_per_day);
        let _ = writeln!(s, "clusters = {}", self.clusters);
        let _ = writeln!(s, "teams = {}", self.teams);
        let _ = writeln!(s, "theta = {}", self.theta);
        let _ = writeln!(s, "home_prob = {}", self.home_prob);
        let _ = writeln!(s, "lambda_u_m = {}", self.lambda_u_m);
        let _ = writeln!(s, "lambda_t_m = {}", self.lambda_t_m);
        let _ = writeln!(s, "s_req = {}", self.s_req);
        let _ = writeln!(s, "hospital_weight = {}", self.hospital_weight);
        if let Some(h) = &self.hospitals_file {
            let _ = writeln!(s, "hospitals = {}", h.display());
        }
        let _ = writeln!(s, "training = {}", self.training_file.display());
        let _ = writeln!(s, "training_days = {}", self.training_days);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "defense = {}", self.defenses.join("; "));
        let attacks: Vec<&str> = self.attacks.iter().map(|a| a.name()).collect();
        let _ = writeln!(s, "attacks = {}", attacks.join(","));
        let _ = writeln!(s, "fuzzy_eta0 = {}", self.fuzzy_eta0);
        let _ = writeln!(s, "fuzzy_lambda0 = {}", self.fuzzy_lambda0);
        let _ = writeln!(s, "fuzzy_tf_idf = {}", self.fuzzy_tf_idf);
        let _ = writeln!(s, "freq_threshold = {}", self.freq_threshold);
        let _ = writeln!(s, "pois = {}", self.poi_count);
        let _ = writeln!(s, "projections = {}", self.projections);
        s
    }
}

fn parse_tf_idf(name: &str) -> Result<(TfWeight, IdfWeight)> {
    match name.trim() {
        "count-idf" => Ok((TfWeight::Count, IdfWeight::LogInverse)),
        "count" => Ok((TfWeight::Count, IdfWeight::One)),
        "logpop-idf" => Ok((TfWeight::LogPopularity, IdfWeight::LogInverse)),
        "logpop" => Ok((TfWeight::LogPopularity, IdfWeight::One)),
        other => Err(Error::Config(format!(
            "unknown tf-idf variant {other:?} (count-idf, count, logpop-idf, logpop)"
        ))),
    }
}

/// Parses an obfuscator spec like `none`, `mrlh:1,1,0.5`, `rr:1`,
/// `pl:1,1`, `cheat:1`, or `cluster:20,0.7`.
pub fn parse_obfuscator(
    spec: &str,
    hospitals: &BTreeSet<RegionId>,
    lambda_u_m: f64,
) -> Result<Obfuscator> {
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (n.trim(), a.trim()),
        None => (spec.trim(), ""),
    };
    let nums: Vec<f64> = if args.is_empty() {
        Vec::new()
    } else {
        args.split(',')
            .map(|p| {
                p.trim().parse::<f64>().map_err(|_| {
                    Error::Config(format!("bad obfuscator argument {p:?} in {spec:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?
    };
    let expect = |n: usize| -> Result<()> {
        if nums.len() == n {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "obfuscator {name:?} expects {n} arguments, got {}",
                nums.len()
            )))
        }
    };
    match name {
        "none" => {
            expect(0)?;
            Ok(Obfuscator::None)
        }
        "mrlh" => {
            expect(3)?;
            Ok(Obfuscator::Mrlh {
                mu_x: nums[0] as u32,
                mu_y: nums[1] as u32,
                lambda: nums[2],
            })
        }
        "rr" => {
            expect(1)?;
            Ok(Obfuscator::RandomizedResponse { epsilon: nums[0] })
        }
        "pl" => {
            expect(2)?;
            Ok(Obfuscator::PlanarLaplace {
                l: nums[0],
                r_km: nums[1],
            })
        }
        "cheat" => {
            expect(1)?;
            Ok(Obfuscator::Cheat { p: nums[0] })
        }
        "cluster" => {
            expect(2)?;
            Ok(Obfuscator::ClusterAnon(ClusterAnonConfig {
                k: nums[0] as usize,
                s_req: nums[1],
                lambda_u_m,
                hospitals: hospitals.clone(),
            }))
        }
        other => Err(Error::Config(format!("unknown obfuscator {other:?}"))),
    }
}

/// Reads a hospital set, one region ID per line.
pub fn read_hospitals(path: &Path, grid: &Grid) -> Result<BTreeSet<RegionId>> {
    let source = path.display().to_string();
    let f = fs::File::open(path)?;
    let mut set = BTreeSet::new();
    for (ix, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        let row = line.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let id: u32 = row
            .parse()
            .map_err(|_| Error::parse(&source, ix + 1, format!("bad region id {row:?}")))?;
        let r = RegionId::new(id)?;
        grid.check(r)?;
        set.insert(r);
    }
    Ok(set)
}

/// Everything a finished round leaves behind, besides the files.
#[derive(Debug)]
pub struct ContestOutcome {
    pub summary: judge::ContestSummary,
    pub team_scores: Vec<TeamScores>,
    pub run_dir: PathBuf,
}

fn fmt4(v: f64) -> String {
    format!("{v:.4}")
}

/// Runs a full contest round into `run_dir`.
///
/// Teams `1..=teams` defend with their configured obfuscators; team
/// `teams+1` is the judge's pseudonymization-only benchmark; teams
/// `teams+2` and `teams+3` are published sample datasets that are
/// neither defended nor attacked. Every contesting team runs every
/// configured attack against every other defended set, never its own.
pub fn run_contest(cfg: &ContestConfig, run_dir: &Path) -> Result<ContestOutcome> {
    let stage = |name: &'static str| move |e: Error| e.in_stage(name);

    let grid = cfg.grid().map_err(stage("config"))?;
    if cfg.teams == 0 {
        return Err(Error::Config("need at least one team".to_string()).in_stage("config"));
    }
    if cfg.defenses.is_empty() {
        return Err(Error::Config("need at least one defense".to_string()).in_stage("config"));
    }
    if cfg.attacks.is_empty() {
        return Err(Error::Config("need at least one attack".to_string()).in_stage("config"));
    }
    let hospitals = match &cfg.hospitals_file {
        Some(path) => read_hospitals(path, &grid).map_err(stage("config"))?,
        None => BTreeSet::new(),
    };
    let scoring = ScoringParams {
        lambda_u_m: cfg.lambda_u_m,
        lambda_t_m: cfg.lambda_t_m,
        s_req: cfg.s_req,
        hospital_weight: cfg.hospital_weight,
        hospitals: hospitals.clone(),
    };
    let fuzzy = cfg.fuzzy_params().map_err(stage("config"))?;
    let defenses: Vec<Obfuscator> = (0..cfg.teams)
        .map(|t| {
            parse_obfuscator(
                &cfg.defenses[t % cfg.defenses.len()],
                &hospitals,
                cfg.lambda_u_m,
            )
        })
        .collect::<Result<Vec<_>>>()
        .map_err(stage("config"))?;

    fs::create_dir_all(run_dir).map_err(|e| Error::from(e).in_stage("setup"))?;
    fs::create_dir_all(run_dir.join("judge")).map_err(|e| Error::from(e).in_stage("setup"))?;
    fs::create_dir_all(run_dir.join("attacks")).map_err(|e| Error::from(e).in_stage("setup"))?;
    fs::write(run_dir.join("config.txt"), cfg.to_text())
        .map_err(|e| Error::from(e).in_stage("setup"))?;

    // Train the generative model and synthesize every dataset.
    let training = trace::read_traces(
        &cfg.training_file,
        cfg.training_days,
        cfg.slots_per_day,
        &grid,
    )
    .map_err(stage("train"))?;
    let model = synth::train(
        &training,
        &grid,
        cfg.clusters,
        stage_seed(cfg.seed, "train", &[]),
    )
    .map_err(stage("train"))?;
    let params = SampleParams {
        theta: cfg.theta,
        home_prob: cfg.home_prob,
    };
    let all_teams = cfg.teams + 3;
    let datasets = model
        .sample_teams(
            cfg.users,
            all_teams,
            cfg.days,
            &params,
            stage_seed(cfg.seed, "synthesize", &[]),
        )
        .map_err(stage("synthesize"))?;
    for (ix, team) in datasets.iter().enumerate() {
        let t = ix + 1;
        trace::write_traces(&team.reference, &run_dir.join(format!("team{t}_ref.csv")))
            .map_err(stage("synthesize"))?;
        trace::write_traces(&team.original, &run_dir.join(format!("team{t}_org.csv")))
            .map_err(stage("synthesize"))?;
    }
    let pois =
        analytics::generate_poi_fixture(&grid, cfg.poi_count, stage_seed(cfg.seed, "pois", &[]));
    analytics::write_pois(&pois, &run_dir.join("pois.csv")).map_err(stage("setup"))?;

    // Obfuscate and gate on utility. The benchmark team defends with
    // pseudonymization only.
    let defended = cfg.teams + 1;
    let mut obfuscated: Vec<TraceSet> = Vec::with_capacity(defended);
    let mut s_u: Vec<f64> = Vec::with_capacity(defended);
    for t in 1..=defended {
        let original = &datasets[t - 1].original;
        let obf = if t == defended {
            Obfuscator::None
        } else {
            defenses[t - 1].clone()
        };
        let out = obf
            .apply(
                original,
                &grid,
                stage_seed(cfg.seed, "obfuscate", &[t as u64]),
            )
            .map_err(stage("anonymize"))?;
        trace::write_traces(&out, &run_dir.join(format!("team{t}_obf.csv")))
            .map_err(stage("anonymize"))?;
        let score =
            judge::utility_score(original, &out, &scoring, &grid).map_err(stage("score"))?;
        s_u.push(score);
        obfuscated.push(out);
    }

    // Pseudonymize valid submissions; the judge records the secret
    // tables under judge/.
    let mut anonymized: Vec<Option<(TraceSet, trace::IdTable)>> = Vec::with_capacity(defended);
    for t in 1..=defended {
        if s_u[t - 1] < cfg.s_req {
            anonymized.push(None);
            continue;
        }
        let (anon, table) = judge::pseudonymize(
            &obfuscated[t - 1],
            stage_seed(cfg.seed, "pseudonymize", &[t as u64]),
        )
        .map_err(stage("pseudonymize"))?;
        trace::write_traces(&anon, &run_dir.join(format!("team{t}_anon.csv")))
            .map_err(stage("pseudonymize"))?;
        trace::write_id_table(&table, &run_dir.join(format!("judge/team{t}_idtable.csv")))
            .map_err(stage("pseudonymize"))?;
        anonymized.push(Some((anon, table)));
    }

    // Every contesting team attacks every other defended set.
    let mut team_scores: Vec<TeamScores> = Vec::with_capacity(defended);
    for t in 1..=defended {
        let Some((anon, truth)) = &anonymized[t - 1] else {
            team_scores.push(TeamScores {
                team: t,
                s_u: s_u[t - 1],
                valid: false,
                benchmark: t == defended,
                attacks: Vec::new(),
            });
            continue;
        };
        let reference = &datasets[t - 1].reference;
        let original = &datasets[t - 1].original;
        let mut records = Vec::new();
        for attacker in 1..=cfg.teams {
            if attacker == t {
                continue;
            }
            for (mx, method) in cfg.attacks.iter().enumerate() {
                let seed = stage_seed(cfg.seed, "attack", &[t as u64, attacker as u64, mx as u64]);
                let (guess, inferred) = match method {
                    AttackKind::VisitProb => (
                        attack::visitprob_reid(anon, reference, &grid),
                        attack::visitprob_trace(anon, reference, &grid, seed),
                    ),
                    AttackKind::HomeProb => (
                        attack::homeprob_reid(anon, reference, &grid),
                        attack::homeprob_trace(anon, reference, &grid, seed),
                    ),
                    AttackKind::Fuzzy => (
                        attack::fuzzy_reid(anon, reference, &grid, &fuzzy),
                        attack::fuzzy_trace(
                            anon,
                            reference,
                            &grid,
                            &fuzzy,
                            cfg.freq_threshold,
                            seed,
                        ),
                    ),
                };
                let guess = guess.map_err(stage("attack"))?;
                let inferred = inferred.map_err(stage("attack"))?;
                let base = format!("team{t}_by{attacker}_{}", method.name());
                trace::write_id_table(&guess, &run_dir.join(format!("attacks/{base}_idtable.csv")))
                    .map_err(stage("attack"))?;
                trace::write_traces(
                    &inferred,
                    &run_dir.join(format!("attacks/{base}_inferred.csv")),
                )
                .map_err(stage("attack"))?;
                let s_r = judge::reid_score(truth, &guess).map_err(stage("score"))?;
                let (s_t, expected_error_m) =
                    judge::trace_score(original, &inferred, &scoring, &grid)
                        .map_err(stage("score"))?;
                records.push(AttackRecord {
                    attacker_team: attacker,
                    method: method.name().to_string(),
                    s_r,
                    s_t,
                    expected_error_m,
                });
            }
        }
        team_scores.push(TeamScores {
            team: t,
            s_u: s_u[t - 1],
            valid: true,
            benchmark: t == defended,
            attacks: records,
        });
    }

    let summary = judge::aggregate(&team_scores);

    // Per-attack report.
    let mut report = String::from("team,attacker,s_u,valid,s_r,s_t,expected_error_m\n");
    for ts in &team_scores {
        if !ts.valid {
            let _ = writeln!(
                report,
                "{},-,{},false,{},{},{}",
                ts.team,
                fmt4(ts.s_u),
                fmt4(0.0),
                fmt4(0.0),
                fmt4(0.0)
            );
            continue;
        }
        for a in &ts.attacks {
            let _ = writeln!(
                report,
                "{},team{}/{},{},true,{},{},{}",
                ts.team,
                a.attacker_team,
                a.method,
                fmt4(ts.s_u),
                fmt4(a.s_r),
                fmt4(a.s_t),
                fmt4(a.expected_error_m)
            );
        }
    }
    fs::write(run_dir.join("report.csv"), report).map_err(|e| Error::from(e).in_stage("report"))?;

    // Team summary with minimum privacy scores.
    let mut summary_csv = String::from("team,s_u,valid,s_r_min,s_t_min\n");
    for t in &summary.teams {
        let _ = writeln!(
            summary_csv,
            "{},{},{},{},{}",
            t.team,
            fmt4(t.s_u),
            t.valid,
            fmt4(t.s_r_min),
            fmt4(t.s_t_min)
        );
    }
    fs::write(run_dir.join("summary.csv"), summary_csv)
        .map_err(|e| Error::from(e).in_stage("report"))?;

    let mut awards = String::from("award,team\n");
    let name = |o: Option<usize>| o.map_or("-".to_string(), |t| format!("team{t}"));
    let _ = writeln!(
        awards,
        "best_anonymization,{}",
        name(summary.best_anonymization)
    );
    let _ = writeln!(
        awards,
        "best_reid_attack,{}",
        name(summary.best_reid_attacker)
    );
    let _ = writeln!(
        awards,
        "best_trace_attack,{}",
        name(summary.best_trace_attacker)
    );
    fs::write(run_dir.join("awards.csv"), awards).map_err(|e| Error::from(e).in_stage("report"))?;

    // Utility analytics of every valid submission against its original.
    let mut analytics_csv = String::from("team,poi_accuracy,tp_tv_top50,tm_emd_m\n");
    for t in 1..=defended {
        if s_u[t - 1] < cfg.s_req {
            continue;
        }
        let original = &datasets[t - 1].original;
        let obf = &obfuscated[t - 1];
        let acc = analytics::poi_accuracy(original, obf, &pois, 1.0, 2.0, &grid)
            .map_err(stage("analyze"))?;
        let tp = analytics::tp_tv_top_n(original, obf, 50, &grid).map_err(stage("analyze"))?;
        let emd = analytics::tm_emd(
            original,
            obf,
            cfg.projections,
            &grid,
            stage_seed(cfg.seed, "emd", &[t as u64]),
        )
        .map_err(stage("analyze"))?;
        let _ = writeln!(
            analytics_csv,
            "{t},{},{},{}",
            fmt4(acc),
            fmt4(tp),
            fmt4(emd)
        );
    }
    fs::write(run_dir.join("analytics.csv"), analytics_csv)
        .map_err(|e| Error::from(e).in_stage("report"))?;

    Ok(ContestOutcome {
        summary,
        team_scores,
        run_dir: run_dir.to_path_buf(),
    })
}
