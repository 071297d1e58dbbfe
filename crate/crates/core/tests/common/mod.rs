//! Shared desk-scale fixture for the integration suites: a 16x16 grid,
//! a scripted training population, a trained model, and one team's
//! sampled datasets with hospital regions covering >= 5% of events.
//!
//! Compiled once per test target; not every target uses every helper.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use tracebench_core::attack::{FuzzyParams, IdfWeight, TfWeight};
use tracebench_core::demo::{self, DemoConfig};
use tracebench_core::grid::{Grid, RegionId};
use tracebench_core::judge::ScoringParams;
use tracebench_core::synth::{self, GenerativeModel, SampleParams};
use tracebench_core::trace::{Cell, TraceSet};

pub const DESK_USERS: usize = 200;
pub const DESK_DAYS: u32 = 20;
pub const DESK_SLOTS_PER_DAY: u32 = 20;

pub struct DeskFixture {
    pub grid: Grid,
    pub model: GenerativeModel,
    pub params: SampleParams,
    pub reference: TraceSet,
    pub original: TraceSet,
    pub hospitals: BTreeSet<RegionId>,
    pub scoring: ScoringParams,
}

pub fn desk_grid() -> Grid {
    Grid::new(16, 16, 341.0, 347.0).unwrap()
}

pub fn desk_training(grid: &Grid) -> TraceSet {
    demo::training_traces(
        grid,
        &DemoConfig {
            users: 256,
            days: 10,
            slots_per_day: DESK_SLOTS_PER_DAY,
            zones: 6,
            seed: 7,
        },
    )
    .unwrap()
}

pub fn desk_sample_params() -> SampleParams {
    SampleParams {
        theta: 6.0,
        home_prob: 0.8,
    }
}

/// Fuzzy-attack parameters tuned on the desk fixture's sample traces:
/// raw fuzzy counts with flat IDF beat the popularity variants here.
pub fn desk_fuzzy() -> FuzzyParams {
    FuzzyParams {
        eta0: 0.33,
        lambda0: 1.0,
        tf: TfWeight::Count,
        idf: IdfWeight::One,
    }
}

/// The most-visited regions of `original`, greedily gathered until
/// they cover `min_share` of all events (at least two regions so a
/// hospital always has a different neighbor hospital).
pub fn hospital_set(original: &TraceSet, grid: &Grid, min_share: f64) -> BTreeSet<RegionId> {
    let regions = grid.region_count() as usize;
    let mut counts = vec![0usize; regions];
    let mut total = 0usize;
    for t in original.traces() {
        for c in &t.cells {
            if let Cell::Single(r) = c {
                counts[r.index()] += 1;
                total += 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..regions).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    let mut set = BTreeSet::new();
    let mut covered = 0usize;
    for i in order {
        if covered as f64 >= min_share * total as f64 && set.len() >= 2 {
            break;
        }
        covered += counts[i];
        set.insert(RegionId::from_index(i));
    }
    set
}

pub fn hospital_event_share(set: &TraceSet, hospitals: &BTreeSet<RegionId>) -> f64 {
    let mut hits = 0usize;
    let mut total = 0usize;
    for t in set.traces() {
        for c in &t.cells {
            if let Cell::Single(r) = c {
                total += 1;
                if hospitals.contains(r) {
                    hits += 1;
                }
            }
        }
    }
    hits as f64 / total as f64
}

static DESK: OnceLock<DeskFixture> = OnceLock::new();

pub fn desk() -> &'static DeskFixture {
    DESK.get_or_init(|| {
        let grid = desk_grid();
        let training = desk_training(&grid);
        let model = synth::train(&training, &grid, 6, 11).unwrap();
        let params = desk_sample_params();
        let mut teams = model
            .sample_teams(DESK_USERS, 1, DESK_DAYS, &params, 13)
            .unwrap();
        let team = teams.remove(0);
        let hospitals = hospital_set(&team.original, &grid, 0.05);
        let scoring = ScoringParams {
            hospitals: hospitals.clone(),
            ..ScoringParams::default()
        };
        DeskFixture {
            grid,
            model,
            params,
            reference: team.reference,
            original: team.original,
            hospitals,
            scoring,
        }
    })
}
