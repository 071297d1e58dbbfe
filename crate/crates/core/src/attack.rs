//! Re-identification and trace-inference attacks run by teams against
//! the other teams' anonymized traces, using reference traces as
//! background knowledge.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::grid::{Grid, RegionId};
use crate::seed::stage_seed;
use crate::trace::{Cell, IdTable, Trace, TraceSet};
use crate::{Error, Result};

/// Likelihood floor assigned to regions a user never visited.
pub const VISIT_PROB_FLOOR: f64 = 1e-8;

/// Slot-of-day indices counted as morning (the home-bound 8:00 to 9:00
/// window).
pub const MORNING_SLOTS: std::ops::Range<u32> = 0..3;

/// Term-frequency variants for the fuzzy-counting feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfWeight {
    /// The fuzzy count itself.
    Count,
    /// `ln(1 + m / xi)` wherever the fuzzy count is positive: rare
    /// regions weigh more, frequency does not.
    LogPopularity,
}

/// Inverse-document-frequency variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdfWeight {
    /// `ln(m / xi)`.
    LogInverse,
    /// Flat 1.
    One,
}

/// Parameters of the fuzzy-counting attacks.
#[derive(Debug, Clone)]
pub struct FuzzyParams {
    /// Scale of the exponential decay spread to surrounding regions.
    pub eta0: f64,
    /// Decay rate per unit of normalized lattice distance.
    pub lambda0: f64,
    pub tf: TfWeight,
    pub idf: IdfWeight,
}

impl Default for FuzzyParams {
    fn default() -> Self {
        FuzzyParams {
            eta0: 0.33,
            lambda0: 1.0,
            tf: TfWeight::LogPopularity,
            idf: IdfWeight::One,
        }
    }
}

impl FuzzyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta0 > 0.0) || !(self.lambda0 > 0.0) {
            return Err(Error::Config(format!(
                "fuzzy decay constants must be positive, got eta0 = {}, lambda0 = {}",
                self.eta0, self.lambda0
            )));
        }
        Ok(())
    }
}

fn check_reference(reference: &TraceSet) -> Result<()> {
    if reference.is_empty() {
        return Err(Error::Attack("reference trace set is empty".to_string()));
    }
    if !reference.all_single() {
        return Err(Error::Attack(
            "reference traces must be single-region".to_string(),
        ));
    }
    Ok(())
}

/// Per-user visit-probability vectors with the likelihood floor, built
/// from the events passing `slot_filter`.
fn visit_prob_models(
    reference: &TraceSet,
    grid_regions: usize,
    slot_filter: impl Fn(u32) -> bool,
) -> Vec<Vec<f64>> {
    reference
        .traces()
        .iter()
        .map(|t| {
            let mut counts = vec![0.0f64; grid_regions];
            let mut total = 0.0;
            for (j, c) in t.cells.iter().enumerate() {
                if !slot_filter(reference.slot_of(j)) {
                    continue;
                }
                if let Cell::Single(r) = c {
                    counts[r.index()] += 1.0;
                    total += 1.0;
                }
            }
            counts
                .iter()
                .map(|&c| if c > 0.0 { c / total } else { VISIT_PROB_FLOOR })
                .collect()
        })
        .collect()
}

/// Log-likelihood of one anonymized trace under one visit-probability
/// vector. Generalized cells average the probability over the set;
/// deleted cells contribute nothing.
fn log_likelihood(
    cells: &[Cell],
    probs: &[f64],
    slots_per_day: u32,
    slot_filter: impl Fn(u32) -> bool,
) -> f64 {
    let mut ll = 0.0;
    for (j, cell) in cells.iter().enumerate() {
        if !slot_filter(j as u32 % slots_per_day) {
            continue;
        }
        match cell {
            Cell::Single(r) => ll += probs[r.index()].ln(),
            Cell::Set(rs) => {
                let mean: f64 = rs.iter().map(|r| probs[r.index()]).sum::<f64>() / rs.len() as f64;
                ll += mean.ln();
            }
            Cell::Deleted => {}
        }
    }
    ll
}

/// Independent argmax matching: every pseudonym picks its best user,
/// duplicates allowed, ties to the lowest user ID.
fn match_independent(
    pseudonyms: &[u32],
    users: &[u32],
    score: impl Fn(usize, usize) -> f64,
) -> IdTable {
    let pairs = pseudonyms
        .iter()
        .enumerate()
        .map(|(p, &pseudonym)| {
            let mut best = 0usize;
            let mut best_score = f64::NEG_INFINITY;
            for u in 0..users.len() {
                let s = score(p, u);
                if s > best_score {
                    best_score = s;
                    best = u;
                }
            }
            (pseudonym, users[best])
        })
        .collect();
    IdTable::new(pairs).expect("pseudonyms are unique")
}

/// Greedy no-duplicate matching: pseudonyms in ascending order each
/// claim their best still-unclaimed user.
fn match_greedy(
    pseudonyms: &[u32],
    users: &[u32],
    score: impl Fn(usize, usize) -> f64,
) -> Result<IdTable> {
    if users.len() < pseudonyms.len() {
        return Err(Error::Attack(format!(
            "cannot claim {} pseudonyms from {} reference users without duplicates",
            pseudonyms.len(),
            users.len()
        )));
    }
    let mut claimed = vec![false; users.len()];
    let mut pairs = Vec::with_capacity(pseudonyms.len());
    for (p, &pseudonym) in pseudonyms.iter().enumerate() {
        let mut best = None;
        let mut best_score = f64::NEG_INFINITY;
        for u in 0..users.len() {
            if claimed[u] {
                continue;
            }
            let s = score(p, u);
            if s > best_score {
                best_score = s;
                best = Some(u);
            }
        }
        let u = best.expect("at least one unclaimed user remains");
        claimed[u] = true;
        pairs.push((pseudonym, users[u]));
    }
    Ok(IdTable::new(pairs).expect("pseudonyms are unique"))
}

fn likelihood_attack(
    anonymized: &TraceSet,
    reference: &TraceSet,
    grid_regions: usize,
    slot_filter: impl Fn(u32) -> bool + Copy,
    dedup: bool,
) -> Result<IdTable> {
    check_reference(reference)?;
    let models = visit_prob_models(reference, grid_regions, slot_filter);
    let users: Vec<u32> = reference.owners().collect();
    let pseudonyms: Vec<u32> = anonymized.owners().collect();
    let spd = anonymized.slots_per_day();
    // Likelihoods for all (pseudonym, user) pairs.
    let scores: Vec<Vec<f64>> = anonymized
        .traces()
        .iter()
        .map(|t| {
            models
                .iter()
                .map(|probs| log_likelihood(&t.cells, probs, spd, slot_filter))
                .collect()
        })
        .collect();
    let score = |p: usize, u: usize| scores[p][u];
    if dedup {
        match_greedy(&pseudonyms, &users, score)
    } else {
        Ok(match_independent(&pseudonyms, &users, score))
    }
}

/// Re-identification by visit-probability likelihood over the whole
/// day.
pub fn visitprob_reid(anonymized: &TraceSet, reference: &TraceSet, grid: &Grid) -> Result<IdTable> {
    likelihood_attack(
        anonymized,
        reference,
        grid.region_count() as usize,
        |_| true,
        false,
    )
}

/// Re-identification restricted to the morning slots, where users tend
/// to be at home.
pub fn homeprob_reid(anonymized: &TraceSet, reference: &TraceSet, grid: &Grid) -> Result<IdTable> {
    likelihood_attack(
        anonymized,
        reference,
        grid.region_count() as usize,
        |slot| MORNING_SLOTS.contains(&slot),
        false,
    )
}

/// De-obfuscates one matched trace: noisy regions pass through,
/// generalized cells pick a uniform member, deleted cells pick a
/// uniform region.
fn de_obfuscate(cells: &[Cell], grid: &Grid, rng: &mut StdRng) -> Vec<Cell> {
    cells
        .iter()
        .map(|cell| {
            let r = match cell {
                Cell::Single(r) => *r,
                Cell::Set(rs) => rs[rng.random_range(0..rs.len())],
                Cell::Deleted => {
                    RegionId::from_index(rng.random_range(0..grid.region_count()) as usize)
                }
            };
            Cell::Single(r)
        })
        .collect()
}

fn inference_from_table(
    anonymized: &TraceSet,
    table: &IdTable,
    grid: &Grid,
    seed: u64,
) -> Result<TraceSet> {
    let traces = table
        .pairs()
        .iter()
        .map(|&(pseudonym, user)| {
            let mut rng =
                StdRng::seed_from_u64(stage_seed(seed, "de-obfuscate", &[pseudonym as u64]));
            let cells = de_obfuscate(
                &anonymized
                    .get(pseudonym)
                    .expect("table built from set")
                    .cells,
                grid,
                &mut rng,
            );
            Trace { owner: user, cells }
        })
        .collect();
    anonymized.with_traces(traces)
}

/// Trace inference: greedy duplicate-free re-identification by
/// visit-probability likelihood, then per-event de-obfuscation. The
/// output is keyed by claimed user ID.
pub fn visitprob_trace(
    anonymized: &TraceSet,
    reference: &TraceSet,
    grid: &Grid,
    seed: u64,
) -> Result<TraceSet> {
    let table = likelihood_attack(
        anonymized,
        reference,
        grid.region_count() as usize,
        |_| true,
        true,
    )?;
    inference_from_table(anonymized, &table, grid, seed)
}

/// Trace inference with the morning-slot matcher.
pub fn homeprob_trace(
    anonymized: &TraceSet,
    reference: &TraceSet,
    grid: &Grid,
    seed: u64,
) -> Result<TraceSet> {
    let table = likelihood_attack(
        anonymized,
        reference,
        grid.region_count() as usize,
        |slot| MORNING_SLOTS.contains(&slot),
        true,
    )?;
    inference_from_table(anonymized, &table, grid, seed)
}

/// Fuzzy count vector of one trace: each event adds its mass to the
/// target region and an exponentially decayed share to the up-to-8
/// surrounding regions. Generalized cells spread unit mass uniformly
/// over their members; deleted cells contribute nothing.
fn fuzzy_counts(cells: &[Cell], grid: &Grid, eta0: f64, lambda0: f64) -> Result<Vec<f64>> {
    let mut counts = vec![0.0f64; grid.region_count() as usize];
    let add = |r: RegionId, mass: f64, counts: &mut Vec<f64>| -> Result<()> {
        counts[r.index()] += mass;
        for (nb, d) in grid.neighbors8(r)? {
            counts[nb.index()] += mass * eta0 * (-lambda0 * d).exp();
        }
        Ok(())
    };
    for cell in cells {
        match cell {
            Cell::Single(r) => add(*r, 1.0, &mut counts)?,
            Cell::Set(rs) => {
                let mass = 1.0 / rs.len() as f64;
                for r in rs {
                    add(*r, mass, &mut counts)?;
                }
            }
            Cell::Deleted => {}
        }
    }
    Ok(counts)
}

/// Number of users whose raw reference trace includes each region.
fn region_user_counts(reference: &TraceSet, grid_regions: usize) -> Vec<u32> {
    let mut xi = vec![0u32; grid_regions];
    for t in reference.traces() {
        let mut seen = vec![false; grid_regions];
        for c in &t.cells {
            if let Cell::Single(r) = c {
                seen[r.index()] = true;
            }
        }
        for (x, s) in xi.iter_mut().zip(&seen) {
            if *s {
                *x += 1;
            }
        }
    }
    xi
}

fn tf_idf_feature(counts: &[f64], xi: &[u32], m: usize, params: &FuzzyParams) -> Vec<f64> {
    counts
        .iter()
        .zip(xi)
        .map(|(&gamma, &xi_i)| {
            // A region can carry fuzzy mass even when no reference
            // user visited it; clamp xi for the popularity ratios.
            let xi_i = xi_i.max(1) as f64;
            let tf = match params.tf {
                TfWeight::Count => gamma,
                TfWeight::LogPopularity => {
                    if gamma > 0.0 {
                        (1.0 + m as f64 / xi_i).ln()
                    } else {
                        0.0
                    }
                }
            };
            let idf = match params.idf {
                IdfWeight::LogInverse => (m as f64 / xi_i).ln(),
                IdfWeight::One => 1.0,
            };
            tf * idf
        })
        .collect()
}

fn euclidean_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn fuzzy_features(
    anonymized: &TraceSet,
    reference: &TraceSet,
    grid: &Grid,
    params: &FuzzyParams,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    check_reference(reference)?;
    params.validate()?;
    let regions = grid.region_count() as usize;
    let m = reference.len();
    let xi = region_user_counts(reference, regions);
    let reference_features = reference
        .traces()
        .iter()
        .map(|t| {
            let counts = fuzzy_counts(&t.cells, grid, params.eta0, params.lambda0)?;
            Ok(tf_idf_feature(&counts, &xi, m, params))
        })
        .collect::<Result<Vec<_>>>()?;
    let anonymized_features = anonymized
        .traces()
        .iter()
        .map(|t| {
            let counts = fuzzy_counts(&t.cells, grid, params.eta0, params.lambda0)?;
            Ok(tf_idf_feature(&counts, &xi, m, params))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((anonymized_features, reference_features))
}

/// Re-identification by 1-nearest-neighbor search over fuzzy-counting
/// TF-IDF features.
pub fn fuzzy_reid(
    anonymized: &TraceSet,
    reference: &TraceSet,
    grid: &Grid,
    params: &FuzzyParams,
) -> Result<IdTable> {
    let (anon_f, ref_f) = fuzzy_features(anonymized, reference, grid, params)?;
    let pseudonyms: Vec<u32> = anonymized.owners().collect();
    let users: Vec<u32> = reference.owners().collect();
    Ok(match_independent(&pseudonyms, &users, |p, u| {
        -euclidean_sq(&anon_f[p], &ref_f[u])
    }))
}

/// Trace inference on top of the fuzzy matcher: greedy duplicate-free
/// matching, de-obfuscation, then per-slot frequent-region
/// replacement. Slots where the user's modal reference region covers
/// at least `freq_threshold` of the reference days are overwritten
/// with that region on every inferred day.
pub fn fuzzy_trace(
    anonymized: &TraceSet,
    reference: &TraceSet,
    grid: &Grid,
    params: &FuzzyParams,
    freq_threshold: f64,
    seed: u64,
) -> Result<TraceSet> {
    if !(freq_threshold > 0.0 && freq_threshold <= 1.0) {
        return Err(Error::Config(format!(
            "frequent-region threshold must be in (0,1], got {freq_threshold}"
        )));
    }
    let (anon_f, ref_f) = fuzzy_features(anonymized, reference, grid, params)?;
    let pseudonyms: Vec<u32> = anonymized.owners().collect();
    let users: Vec<u32> = reference.owners().collect();
    let table = match_greedy(&pseudonyms, &users, |p, u| {
        -euclidean_sq(&anon_f[p], &ref_f[u])
    })?;
    let inferred = inference_from_table(anonymized, &table, grid, seed)?;

    let spd = inferred.slots_per_day();
    let ref_days = reference.days();
    let traces = inferred
        .traces()
        .iter()
        .map(|t| {
            let mut cells = t.cells.clone();
            let reference_trace = reference.get(t.owner).expect("claimed users exist");
            for slot in 0..spd {
                // Modal region for this slot across reference days.
                let mut counts: Vec<(RegionId, u32)> = Vec::new();
                for day in 0..ref_days {
                    let j = (day * spd + slot) as usize;
                    if let Cell::Single(r) = reference_trace.cells[j] {
                        match counts.iter_mut().find(|(reg, _)| *reg == r) {
                            Some((_, c)) => *c += 1,
                            None => counts.push((r, 1)),
                        }
                    }
                }
                let Some(&(modal, count)) = counts
                    .iter()
                    .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                else {
                    continue;
                };
                if count as f64 >= freq_threshold * ref_days as f64 {
                    for day in 0..inferred.days() {
                        cells[(day * spd + slot) as usize] = Cell::Single(modal);
                    }
                }
            }
            Trace {
                owner: t.owner,
                cells,
            }
        })
        .collect();
    inferred.with_traces(traces)
}

/// Neighbor increment used by the fuzzy counter, `eta0 * e^(-lambda0 d)`
/// at normalized lattice distance `d`.
pub fn fuzzy_increment(eta0: f64, lambda0: f64, d: f64) -> f64 {
    eta0 * (-lambda0 * d).exp()
}
