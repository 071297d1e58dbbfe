//! Command-line front-end: one subcommand per pipeline stage plus
//! `contest` for a full multi-team round.

use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use tracebench_core::analytics;
use tracebench_core::anonymize::{ClusterAnonConfig, Obfuscator};
use tracebench_core::attack;
use tracebench_core::contest::{self, ContestConfig};
use tracebench_core::grid::Grid;
use tracebench_core::judge::{self, ScoringParams};
use tracebench_core::synth::{self, SampleParams};
use tracebench_core::trace::{self, TraceSet};

/// Environment variable holding the default contest config path.
const CONFIG_ENV: &str = "TRACEBENCH_CONFIG";

#[derive(Parser)]
#[command(
    name = "tracebench",
    version,
    about = "Location-trace anonymization contest bench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    #[arg(long, default_value_t = 16)]
    grid_width: u32,
    #[arg(long, default_value_t = 16)]
    grid_height: u32,
    #[arg(long, default_value_t = 341.0)]
    cell_width_m: f64,
    #[arg(long, default_value_t = 347.0)]
    cell_height_m: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<Grid> {
        Ok(Grid::new(
            self.grid_width,
            self.grid_height,
            self.cell_width_m,
            self.cell_height_m,
        )?)
    }
}

#[derive(Args, Clone)]
struct ShapeArgs {
    /// Slots per day in every trace file.
    #[arg(long, default_value_t = 20)]
    slots_per_day: u32,
    /// Write a header row in output CSV files.
    #[arg(long, default_value_t = false)]
    header: bool,
}

#[derive(Args, Clone)]
struct ScoringArgs {
    #[arg(long, default_value_t = 2000.0)]
    lambda_u_m: f64,
    #[arg(long, default_value_t = 2000.0)]
    lambda_t_m: f64,
    #[arg(long, default_value_t = 0.7)]
    s_req: f64,
    #[arg(long, default_value_t = 10.0)]
    hospital_weight: f64,
    /// Hospital region IDs, one per line.
    #[arg(long)]
    hospitals: Option<PathBuf>,
}

impl ScoringArgs {
    fn params(&self, grid: &Grid) -> Result<ScoringParams> {
        let hospitals = match &self.hospitals {
            Some(path) => contest::read_hospitals(path, grid)?,
            None => BTreeSet::new(),
        };
        Ok(ScoringParams {
            lambda_u_m: self.lambda_u_m,
            lambda_t_m: self.lambda_t_m,
            s_req: self.s_req,
            hospital_weight: self.hospital_weight,
            hospitals,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Train a generative model on training traces and sample per-team
    /// reference/original datasets.
    Synthesize {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        /// Training trace CSV.
        #[arg(long)]
        training: PathBuf,
        /// Days in the training file.
        #[arg(long, default_value_t = 10)]
        training_days: u32,
        /// Virtual users per team.
        #[arg(long, default_value_t = 200)]
        users: usize,
        /// Days to generate per team (half reference, half original).
        #[arg(long, default_value_t = 20)]
        days: u32,
        /// Feature clusters in the model.
        #[arg(long, default_value_t = 16)]
        clusters: usize,
        #[arg(long, default_value_t = 2)]
        teams: usize,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long, default_value_t = 0.8)]
        home_prob: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output directory for `team<t>_ref.csv` / `team<t>_org.csv`.
        #[arg(long, short)]
        out_dir: PathBuf,
        /// Also dump the trained model as text.
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Obfuscate an original trace set with one mechanism.
    Anonymize {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        /// One of: none, mrlh, rr, pl, cheat, cluster.
        #[arg(long)]
        method: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// MRLH dropped x bits.
        #[arg(long, default_value_t = 1)]
        mu_x: u32,
        /// MRLH dropped y bits.
        #[arg(long, default_value_t = 1)]
        mu_y: u32,
        /// MRLH deletion probability.
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        /// Randomized-response budget per event.
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        /// Planar Laplace budget.
        #[arg(long, default_value_t = 1.0)]
        l: f64,
        /// Planar Laplace radius in km.
        #[arg(long, default_value_t = 1.0)]
        r_km: f64,
        /// Cheat fraction of users to shuffle.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Cluster anonymizer cluster count.
        #[arg(long, default_value_t = 100)]
        k: usize,
        /// Cluster anonymizer utility floor.
        #[arg(long, default_value_t = 0.7)]
        s_req: f64,
        #[arg(long, default_value_t = 2000.0)]
        lambda_u_m: f64,
        /// Hospital region IDs, one per line (cluster method).
        #[arg(long)]
        hospitals: Option<PathBuf>,
    },
    /// Shuffle traces and assign pseudonyms; keep the ID table apart.
    Pseudonymize {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        /// Where to put the secret ground-truth ID table.
        #[arg(long)]
        table_out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Guess the pseudonym-to-user table of an anonymized set.
    AttackReid {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        anonymized: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        /// One of: visitprob, homeprob, fuzzy.
        #[arg(long)]
        method: String,
        #[command(flatten)]
        fuzzy: FuzzyArgs,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Reconstruct original traces from an anonymized set.
    AttackTrace {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        anonymized: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        /// One of: visitprob, homeprob, fuzzy.
        #[arg(long)]
        method: String,
        #[command(flatten)]
        fuzzy: FuzzyArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Judge-side scoring of any stage outputs that are at hand.
    Score {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        scoring: ScoringArgs,
        /// Original traces (needed for utility and trace inference).
        #[arg(long)]
        original: Option<PathBuf>,
        /// Obfuscated traces to score for utility.
        #[arg(long)]
        obfuscated: Option<PathBuf>,
        /// Ground-truth ID table.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Guessed ID table to score for re-identification.
        #[arg(long)]
        guess: Option<PathBuf>,
        /// Inferred traces to score for trace inference.
        #[arg(long)]
        inferred: Option<PathBuf>,
    },
    /// Utility analytics between an original and an anonymized set.
    Analyze {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        anonymized: PathBuf,
        /// POI CSV (x_m,y_m,category). Skips POI accuracy if absent.
        #[arg(long)]
        pois: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        r1_km: f64,
        #[arg(long, default_value_t = 2.0)]
        r2_km: f64,
        #[arg(long, default_value_t = 50)]
        top_n: usize,
        #[arg(long, default_value_t = 1000)]
        projections: usize,
        #[arg(long, default_value_t = 24)]
        vf_bins: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run a full contest round from a config file.
    Contest {
        /// Config path; falls back to $TRACEBENCH_CONFIG.
        #[arg(long, short)]
        config: Option<PathBuf>,
        /// Run directory for all artifacts.
        #[arg(long, short)]
        out_dir: PathBuf,
        /// key=value overrides applied on top of the config file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

#[derive(Args, Clone)]
struct FuzzyArgs {
    #[arg(long, default_value_t = 0.33)]
    eta0: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda0: f64,
    /// One of: count-idf, count, logpop-idf, logpop.
    #[arg(long, default_value = "logpop")]
    tf_idf: String,
    /// Frequent-region threshold for trace inference.
    #[arg(long, default_value_t = 0.5)]
    freq_threshold: f64,
}

impl FuzzyArgs {
    fn params(&self) -> Result<attack::FuzzyParams> {
        let mut cfg = ContestConfig::default();
        cfg.fuzzy_eta0 = self.eta0;
        cfg.fuzzy_lambda0 = self.lambda0;
        cfg.fuzzy_tf_idf = self.tf_idf.clone();
        Ok(cfg.fuzzy_params()?)
    }
}

fn read_set(path: &PathBuf, spd: u32, grid: &Grid) -> Result<TraceSet> {
    trace::read_traces_infer_days(path, spd, grid)
        .with_context(|| format!("reading {}", path.display()))
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Synthesize {
            grid,
            shape,
            training,
            training_days,
            users,
            days,
            clusters,
            teams,
            theta,
            home_prob,
            seed,
            out_dir,
            model_out,
        } => {
            let grid = grid.grid()?;
            let training =
                trace::read_traces(&training, training_days, shape.slots_per_day, &grid)?;
            let model = synth::train(&training, &grid, clusters, seed)?;
            if let Some(path) = &model_out {
                synth::write_model(&model, path)?;
            }
            let params = SampleParams { theta, home_prob };
            let sets = model.sample_teams(users, teams, days, &params, seed)?;
            std::fs::create_dir_all(&out_dir)?;
            for (ix, team) in sets.iter().enumerate() {
                let t = ix + 1;
                trace::write_traces_opts(
                    &team.reference,
                    &out_dir.join(format!("team{t}_ref.csv")),
                    shape.header,
                )?;
                trace::write_traces_opts(
                    &team.original,
                    &out_dir.join(format!("team{t}_org.csv")),
                    shape.header,
                )?;
            }
            println!(
                "synthesized {teams} team(s) of {users} users into {}",
                out_dir.display()
            );
        }
        Command::Anonymize {
            grid,
            shape,
            input,
            output,
            method,
            seed,
            mu_x,
            mu_y,
            lambda,
            epsilon,
            l,
            r_km,
            p,
            k,
            s_req,
            lambda_u_m,
            hospitals,
        } => {
            let grid = grid.grid()?;
            let set = read_set(&input, shape.slots_per_day, &grid)?;
            let hospitals = match &hospitals {
                Some(path) => contest::read_hospitals(path, &grid)?,
                None => BTreeSet::new(),
            };
            let obf = match method.as_str() {
                "none" => Obfuscator::None,
                "mrlh" => Obfuscator::Mrlh { mu_x, mu_y, lambda },
                "rr" => Obfuscator::RandomizedResponse { epsilon },
                "pl" => Obfuscator::PlanarLaplace { l, r_km },
                "cheat" => Obfuscator::Cheat { p },
                "cluster" => Obfuscator::ClusterAnon(ClusterAnonConfig {
                    k,
                    s_req,
                    lambda_u_m,
                    hospitals,
                }),
                other => bail!("unknown method {other:?}"),
            };
            let out = obf.apply(&set, &grid, seed)?;
            trace::write_traces_opts(&out, &output, shape.header)?;
            println!("wrote {}", output.display());
        }
        Command::Pseudonymize {
            grid,
            shape,
            input,
            output,
            table_out,
            seed,
        } => {
            let grid = grid.grid()?;
            let set = read_set(&input, shape.slots_per_day, &grid)?;
            let (anon, table) = judge::pseudonymize(&set, seed)?;
            trace::write_traces_opts(&anon, &output, shape.header)?;
            trace::write_id_table_opts(&table, &table_out, shape.header)?;
            println!(
                "wrote {} (table: {})",
                output.display(),
                table_out.display()
            );
        }
        Command::AttackReid {
            grid,
            shape,
            anonymized,
            reference,
            method,
            fuzzy,
            output,
        } => {
            let grid = grid.grid()?;
            let anon = read_set(&anonymized, shape.slots_per_day, &grid)?;
            let reference = read_set(&reference, shape.slots_per_day, &grid)?;
            let table = match method.as_str() {
                "visitprob" => attack::visitprob_reid(&anon, &reference, &grid)?,
                "homeprob" => attack::homeprob_reid(&anon, &reference, &grid)?,
                "fuzzy" => attack::fuzzy_reid(&anon, &reference, &grid, &fuzzy.params()?)?,
                other => bail!("unknown method {other:?}"),
            };
            trace::write_id_table_opts(&table, &output, shape.header)?;
            println!("wrote {}", output.display());
        }
        Command::AttackTrace {
            grid,
            shape,
            anonymized,
            reference,
            method,
            fuzzy,
            seed,
            output,
        } => {
            let grid = grid.grid()?;
            let anon = read_set(&anonymized, shape.slots_per_day, &grid)?;
            let reference = read_set(&reference, shape.slots_per_day, &grid)?;
            let inferred = match method.as_str() {
                "visitprob" => attack::visitprob_trace(&anon, &reference, &grid, seed)?,
                "homeprob" => attack::homeprob_trace(&anon, &reference, &grid, seed)?,
                "fuzzy" => attack::fuzzy_trace(
                    &anon,
                    &reference,
                    &grid,
                    &fuzzy.params()?,
                    fuzzy.freq_threshold,
                    seed,
                )?,
                other => bail!("unknown method {other:?}"),
            };
            trace::write_traces_opts(&inferred, &output, shape.header)?;
            println!("wrote {}", output.display());
        }
        Command::Score {
            grid,
            shape,
            scoring,
            original,
            obfuscated,
            truth,
            guess,
            inferred,
        } => {
            let grid = grid.grid()?;
            let params = scoring.params(&grid)?;
            let original = original
                .map(|p| read_set(&p, shape.slots_per_day, &grid))
                .transpose()?;
            let mut printed = false;
            if let Some(obf) = obfuscated {
                let original = original
                    .as_ref()
                    .context("--obfuscated needs --original for the utility score")?;
                let obf = read_set(&obf, shape.slots_per_day, &grid)?;
                let s_u = judge::utility_score(original, &obf, &params, &grid)?;
                let valid = s_u >= params.s_req;
                println!(
                    "s_u = {s_u:.4} ({})",
                    if valid { "valid" } else { "invalid" }
                );
                printed = true;
            }
            if let (Some(truth), Some(guess)) = (&truth, &guess) {
                let truth = trace::read_ground_truth_table(truth)?;
                let guess = trace::read_id_table(guess)?;
                let s_r = judge::reid_score(&truth, &guess)?;
                println!("s_r = {s_r:.4}");
                printed = true;
            }
            if let Some(inf) = inferred {
                let original = original
                    .as_ref()
                    .context("--inferred needs --original for the trace-inference score")?;
                let inf = read_set(&inf, shape.slots_per_day, &grid)?;
                let (s_t, ee) = judge::trace_score(original, &inf, &params, &grid)?;
                println!("s_t = {s_t:.4} expected_error_m = {ee:.4}");
                printed = true;
            }
            if !printed {
                bail!("nothing to score; pass --obfuscated, --truth/--guess, or --inferred");
            }
        }
        Command::Analyze {
            grid,
            shape,
            original,
            anonymized,
            pois,
            r1_km,
            r2_km,
            top_n,
            projections,
            vf_bins,
            seed,
        } => {
            let grid = grid.grid()?;
            let original = read_set(&original, shape.slots_per_day, &grid)?;
            let anonymized = read_set(&anonymized, shape.slots_per_day, &grid)?;
            if let Some(pois) = pois {
                let pois = analytics::read_pois(&pois)?;
                let acc =
                    analytics::poi_accuracy(&original, &anonymized, &pois, r1_km, r2_km, &grid)?;
                println!("poi_accuracy = {acc:.4}");
            }
            let tp = analytics::tp_tv_top_n(&original, &anonymized, top_n, &grid)?;
            println!("tp_tv_top{top_n} = {tp:.4}");
            let emd = analytics::tm_emd(&original, &anonymized, projections, &grid, seed)?;
            println!("tm_emd_m = {emd:.4}");
            let vf = analytics::vf_tv(&original, &anonymized, vf_bins, &grid)?;
            println!("vf_tv = {vf:.4}");
        }
        Command::Contest {
            config,
            out_dir,
            overrides,
        } => {
            let config_path = config.or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
            let mut cfg = match config_path {
                Some(path) => ContestConfig::from_file(&path)
                    .with_context(|| format!("loading config {}", path.display()))?,
                None => bail!("pass --config or set ${CONFIG_ENV}"),
            };
            for kv in &overrides {
                let Some((key, value)) = kv.split_once('=') else {
                    bail!("override {kv:?} is not KEY=VALUE");
                };
                cfg.set(key.trim(), value.trim())?;
            }
            let outcome = contest::run_contest(&cfg, &out_dir)?;
            for team in &outcome.summary.teams {
                println!(
                    "team{}: s_u = {:.4} valid = {} s_r_min = {:.4} s_t_min = {:.4}{}",
                    team.team,
                    team.s_u,
                    team.valid,
                    team.s_r_min,
                    team.s_t_min,
                    if team.benchmark { " (benchmark)" } else { "" }
                );
            }
            let name = |o: Option<usize>| o.map_or("-".to_string(), |t| format!("team{t}"));
            println!(
                "best_anonymization = {}",
                name(outcome.summary.best_anonymization)
            );
            println!(
                "best_reid_attack = {}",
                name(outcome.summary.best_reid_attacker)
            );
            println!(
                "best_trace_attack = {}",
                name(outcome.summary.best_trace_attacker)
            );
            println!("run directory: {}", outcome.run_dir.display());
        }
    }
    Ok(())
}
