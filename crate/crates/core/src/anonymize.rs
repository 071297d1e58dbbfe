//! Obfuscation mechanisms applied by teams before submitting traces.
//!
//! Per-event mechanisms (MRLH, randomized response, planar Laplace)
//! draw from an independent RNG stream per user so results do not
//! depend on iteration order. Whole-set mechanisms (cheating shuffle,
//! cluster anonymizer) are single-threaded by contract.

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_distr::Exp1;

use crate::grid::{Grid, RegionId};
use crate::judge::g_u;
use crate::kmeans::kmeans;
use crate::seed::stage_seed;
use crate::trace::{Cell, Trace, TraceSet};
use crate::{Error, Result};

/// Spare utility kept above `s_req` when the cluster anonymizer spends
/// its noise budget, guarding against re-scoring drift.
pub const CLUSTER_ANON_UTILITY_MARGIN: f64 = 0.005;

/// Cluster anonymizer parameters.
#[derive(Debug, Clone)]
pub struct ClusterAnonConfig {
    pub k: usize,
    /// Utility floor the output must stay above.
    pub s_req: f64,
    /// Utility distance cap used to project the score of a replacement.
    pub lambda_u_m: f64,
    pub hospitals: BTreeSet<RegionId>,
}

impl ClusterAnonConfig {
    pub fn new(k: usize, s_req: f64, hospitals: BTreeSet<RegionId>) -> Self {
        ClusterAnonConfig {
            k,
            s_req,
            lambda_u_m: 2000.0,
            hospitals,
        }
    }
}

/// A fully parameterized obfuscation mechanism.
#[derive(Debug, Clone)]
pub enum Obfuscator {
    None,
    Mrlh { mu_x: u32, mu_y: u32, lambda: f64 },
    RandomizedResponse { epsilon: f64 },
    PlanarLaplace { l: f64, r_km: f64 },
    Cheat { p: f64 },
    ClusterAnon(ClusterAnonConfig),
}

impl Obfuscator {
    pub fn name(&self) -> &'static str {
        match self {
            Obfuscator::None => "none",
            Obfuscator::Mrlh { .. } => "mrlh",
            Obfuscator::RandomizedResponse { .. } => "rr",
            Obfuscator::PlanarLaplace { .. } => "pl",
            Obfuscator::Cheat { .. } => "cheat",
            Obfuscator::ClusterAnon(_) => "cluster",
        }
    }

    pub fn apply(&self, set: &TraceSet, grid: &Grid, seed: u64) -> Result<TraceSet> {
        match self {
            Obfuscator::None => Ok(no_obfuscation(set)),
            Obfuscator::Mrlh { mu_x, mu_y, lambda } => mrlh(set, grid, *mu_x, *mu_y, *lambda, seed),
            Obfuscator::RandomizedResponse { epsilon } => {
                randomized_response(set, grid, *epsilon, seed)
            }
            Obfuscator::PlanarLaplace { l, r_km } => planar_laplace(set, grid, *l, *r_km, seed),
            Obfuscator::Cheat { p } => cheat(set, *p, seed),
            Obfuscator::ClusterAnon(cfg) => cluster_anon(set, grid, cfg, seed),
        }
    }
}

/// Identity mechanism: pseudonymization only.
pub fn no_obfuscation(set: &TraceSet) -> TraceSet {
    set.clone()
}

fn require_single(set: &TraceSet, mechanism: &str) -> Result<()> {
    if set.all_single() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{mechanism} expects original traces with single-region cells only"
        )))
    }
}

/// Merging regions and location hiding: each event is deleted with
/// probability `lambda`, otherwise generalized to the block of
/// `2^(mu_x + mu_y)` regions sharing its truncated coordinates.
pub fn mrlh(
    set: &TraceSet,
    grid: &Grid,
    mu_x: u32,
    mu_y: u32,
    lambda: f64,
    seed: u64,
) -> Result<TraceSet> {
    require_single(set, "mrlh")?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Config(format!(
            "mrlh deletion probability must be in [0,1], got {lambda}"
        )));
    }
    if !grid.width().is_power_of_two() || !grid.height().is_power_of_two() {
        return Err(Error::Config(format!(
            "mrlh requires power-of-two grid dimensions, got {}x{}",
            grid.width(),
            grid.height()
        )));
    }
    let max_x = grid.width().trailing_zeros();
    let max_y = grid.height().trailing_zeros();
    if mu_x >= max_x || mu_y >= max_y {
        return Err(Error::Config(format!(
            "mrlh bits ({mu_x}, {mu_y}) must be below (log2 width, log2 height) = ({max_x}, {max_y})"
        )));
    }
    let traces = set
        .traces()
        .iter()
        .map(|t| {
            let mut rng = StdRng::seed_from_u64(stage_seed(seed, "mrlh", &[t.owner as u64]));
            let cells = t
                .cells
                .iter()
                .map(|cell| {
                    let r = cell.as_single().expect("checked all_single");
                    if rng.random::<f64>() < lambda {
                        return Ok(Cell::Deleted);
                    }
                    if mu_x == 0 && mu_y == 0 {
                        return Ok(Cell::Single(r));
                    }
                    let (x, y) = grid.coords(r)?;
                    let bx = (x >> mu_x) << mu_x;
                    let by = (y >> mu_y) << mu_y;
                    let mut block = Vec::with_capacity(1 << (mu_x + mu_y));
                    for dy in 0..(1u32 << mu_y) {
                        for dx in 0..(1u32 << mu_x) {
                            block.push(grid.region_at(bx + dx, by + dy)?);
                        }
                    }
                    Ok(Cell::from_regions(block))
                })
                .collect::<Result<Vec<Cell>>>()?;
            Ok(Trace {
                owner: t.owner,
                cells,
            })
        })
        .collect::<Result<Vec<Trace>>>()?;
    set.with_traces(traces)
}

/// Probability that the k-ary randomized response keeps the true
/// region, `e^eps / (k - 1 + e^eps)`.
pub fn rr_keep_probability(epsilon: f64, domain: u32) -> f64 {
    let e = epsilon.exp();
    e / (domain as f64 - 1.0 + e)
}

/// k-ary randomized response over all grid regions: keeps the true
/// region with probability `e^eps / (k-1+e^eps)`, otherwise outputs one
/// of the other regions uniformly.
pub fn randomized_response(
    set: &TraceSet,
    grid: &Grid,
    epsilon: f64,
    seed: u64,
) -> Result<TraceSet> {
    require_single(set, "randomized response")?;
    if !(epsilon > 0.0) {
        return Err(Error::Config(format!(
            "randomized response budget must be positive, got {epsilon}"
        )));
    }
    let domain = grid.region_count();
    if domain < 2 {
        return Err(Error::Config(
            "randomized response needs at least 2 regions".to_string(),
        ));
    }
    let keep = rr_keep_probability(epsilon, domain);
    let traces = set
        .traces()
        .iter()
        .map(|t| {
            let mut rng = StdRng::seed_from_u64(stage_seed(seed, "rr", &[t.owner as u64]));
            let cells = t
                .cells
                .iter()
                .map(|cell| {
                    let r = cell.as_single().expect("checked all_single");
                    if rng.random::<f64>() < keep {
                        Cell::Single(r)
                    } else {
                        // Uniform over the other domain-1 regions.
                        let mut pick = rng.random_range(1..domain);
                        if pick >= r.get() {
                            pick += 1;
                        }
                        Cell::Single(RegionId::from_index((pick - 1) as usize))
                    }
                })
                .collect();
            Trace {
                owner: t.owner,
                cells,
            }
        })
        .collect();
    set.with_traces(traces)
}

/// Draws one planar Laplace offset for privacy parameter `eps_per_km`,
/// returned in meters. The radius follows a Gamma(2, 1/eps) law (the
/// planar Laplacian in polar form), the angle is uniform.
pub fn planar_laplace_offset_m(eps_per_km: f64, rng: &mut StdRng) -> (f64, f64) {
    let e1: f64 = rng.sample(Exp1);
    let e2: f64 = rng.sample(Exp1);
    let radius_m = (e1 + e2) / eps_per_km * 1000.0;
    let angle = rng.random::<f64>() * std::f64::consts::TAU;
    (radius_m * angle.cos(), radius_m * angle.sin())
}

/// Planar Laplace mechanism providing `l`-privacy within `r_km`
/// (epsilon = l / r_km): perturbs each event's cell center with planar
/// Laplace noise, snaps to the nearest cell center, and clamps to the
/// grid bounds.
pub fn planar_laplace(
    set: &TraceSet,
    grid: &Grid,
    l: f64,
    r_km: f64,
    seed: u64,
) -> Result<TraceSet> {
    require_single(set, "planar laplace")?;
    if !(l > 0.0) || !(r_km > 0.0) {
        return Err(Error::Config(format!(
            "planar laplace parameters must be positive, got l = {l}, r = {r_km}"
        )));
    }
    let eps_per_km = l / r_km;
    let traces = set
        .traces()
        .iter()
        .map(|t| {
            let mut rng = StdRng::seed_from_u64(stage_seed(seed, "pl", &[t.owner as u64]));
            let cells = t
                .cells
                .iter()
                .map(|cell| {
                    let r = cell.as_single().expect("checked all_single");
                    let (cx, cy) = grid.center_m(r)?;
                    let (dx, dy) = planar_laplace_offset_m(eps_per_km, &mut rng);
                    Ok(Cell::Single(snap_to_grid(grid, cx + dx, cy + dy)))
                })
                .collect::<Result<Vec<Cell>>>()?;
            Ok(Trace {
                owner: t.owner,
                cells,
            })
        })
        .collect::<Result<Vec<Trace>>>()?;
    set.with_traces(traces)
}

/// Nearest cell center to a continuous point, clamping outside points
/// to the grid edge.
fn snap_to_grid(grid: &Grid, x_m: f64, y_m: f64) -> RegionId {
    let ix = (x_m / grid.cell_width_m()).floor();
    let iy = (y_m / grid.cell_height_m()).floor();
    let ix = (ix.max(0.0) as u32).min(grid.width() - 1);
    let iy = (iy.max(0.0) as u32).min(grid.height() - 1);
    grid.region_at(ix, iy).expect("clamped coords are in range")
}

/// Cheating anonymization: uniformly permutes the entire cell
/// sequences of the first `floor(p * m)` users (by ascending owner ID)
/// among themselves. Owners stay in place; this is obfuscation, not
/// pseudonymization.
pub fn cheat(set: &TraceSet, p: f64, seed: u64) -> Result<TraceSet> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!(
            "cheat fraction must be in [0,1], got {p}"
        )));
    }
    let n = (p * set.len() as f64).floor() as usize;
    let mut rng = StdRng::seed_from_u64(stage_seed(seed, "cheat", &[]));
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let traces: Vec<Trace> = set
        .traces()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let source = if i < n { order[i] } else { i };
            Trace {
                owner: t.owner,
                cells: set.traces()[source].cells.clone(),
            }
        })
        .collect();
    set.with_traces(traces)
}

/// The cluster anonymizer: clusters users by visit-count vector,
/// nudges each user's counts toward the cluster mean by replacing
/// events, then replaces hospital events with the nearest different
/// hospital region. All replacements stop before the projected
/// utility score drops below `s_req` plus a small margin.
pub fn cluster_anon(
    set: &TraceSet,
    grid: &Grid,
    cfg: &ClusterAnonConfig,
    seed: u64,
) -> Result<TraceSet> {
    require_single(set, "cluster anonymizer")?;
    if cfg.k == 0 || cfg.k > set.len() {
        return Err(Error::Config(format!(
            "cluster count k = {} must be in 1..=m = {}",
            cfg.k,
            set.len()
        )));
    }
    if !(0.0..=1.0).contains(&cfg.s_req) {
        return Err(Error::Config(format!(
            "s_req must be in [0,1], got {}",
            cfg.s_req
        )));
    }
    for &h in &cfg.hospitals {
        grid.check(h)?;
    }
    let regions = grid.region_count() as usize;
    let m = set.len();
    let l = set.trace_len();

    // (i) cluster users on raw visit-count vectors.
    let count_vectors: Vec<Vec<f64>> = set
        .traces()
        .iter()
        .map(|t| {
            let mut counts = vec![0.0; regions];
            for c in &t.cells {
                counts[c.as_single().expect("checked all_single").index()] += 1.0;
            }
            counts
        })
        .collect();
    let clustering = kmeans(
        &count_vectors,
        cfg.k,
        100,
        stage_seed(seed, "cluster-anon", &[]),
    )?;
    let mut cluster_mean = vec![vec![0.0; regions]; cfg.k];
    let mut cluster_size = vec![0usize; cfg.k];
    for (v, &c) in count_vectors.iter().zip(&clustering.assignment) {
        cluster_size[c] += 1;
        for (acc, x) in cluster_mean[c].iter_mut().zip(v) {
            *acc += x;
        }
    }
    for (mean, &size) in cluster_mean.iter_mut().zip(&cluster_size) {
        if size > 0 {
            for x in mean.iter_mut() {
                *x /= size as f64;
            }
        }
    }

    // Total utility-drop budget across all events.
    let budget = (1.0 - cfg.s_req - CLUSTER_ANON_UTILITY_MARGIN) * (m * l) as f64;
    let mut spent = 0.0;
    let mut traces: Vec<Trace> = set.traces().to_vec();

    // (ii) move each user's counts toward the cluster mean: replace
    // events of the largest-surplus region with the nearest deficit
    // region while the budget lasts.
    'users: for (u, trace) in traces.iter_mut().enumerate() {
        let mean = &cluster_mean[clustering.assignment[u]];
        let mut counts = count_vectors[u].clone();
        loop {
            let mut surplus_region: Option<usize> = None;
            let mut best_surplus = 0.5;
            for (i, (&c, &target)) in counts.iter().zip(mean).enumerate() {
                let s = c - target;
                if s > best_surplus {
                    best_surplus = s;
                    surplus_region = Some(i);
                }
            }
            let Some(src) = surplus_region else { break };
            let src_id = RegionId::from_index(src);
            let mut dst: Option<(usize, f64)> = None;
            for (i, (&c, &target)) in counts.iter().zip(mean).enumerate() {
                if target - c > 0.5 {
                    let d = grid.distance(src_id, RegionId::from_index(i))?;
                    if dst.map_or(true, |(_, best)| d < best) {
                        dst = Some((i, d));
                    }
                }
            }
            let Some((dst, dist)) = dst else { break };
            let cost = 1.0 - g_u(dist, cfg.lambda_u_m);
            if spent + cost > budget {
                break 'users;
            }
            let Some(slot) = trace
                .cells
                .iter()
                .position(|c| c.as_single() == Some(src_id))
            else {
                break;
            };
            trace.cells[slot] = Cell::Single(RegionId::from_index(dst));
            counts[src] -= 1.0;
            counts[dst] += 1.0;
            spent += cost;
        }
    }

    // (iii) replace every remaining hospital event with the nearest
    // different hospital, budget permitting.
    let hospital_subs: Vec<Option<(RegionId, f64)>> = (0..regions)
        .map(|i| {
            let r = RegionId::from_index(i);
            if !cfg.hospitals.contains(&r) {
                return Ok(None);
            }
            let mut best: Option<(RegionId, f64)> = None;
            for &h in &cfg.hospitals {
                if h == r {
                    continue;
                }
                let d = grid.distance(r, h)?;
                if best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((h, d));
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    for trace in traces.iter_mut() {
        for cell in trace.cells.iter_mut() {
            let r = cell.as_single().expect("cells stay single");
            if let Some((sub, dist)) = hospital_subs[r.index()] {
                let cost = 1.0 - g_u(dist, cfg.lambda_u_m);
                if spent + cost <= budget {
                    *cell = Cell::Single(sub);
                    spent += cost;
                }
            }
        }
    }

    set.with_traces(traces)
}
