//! Post-hoc utility and diversity metrics: POI recommendation
//! accuracy, top-N population total variation, sliced-Wasserstein
//! transition distance, visit-fraction total variation, and the
//! same/different-pair diversity check for synthetic teams.
//!
//! All metrics compare trace sets by position, before pseudonym
//! shuffling.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::grid::Grid;
use crate::trace::{Cell, TraceSet};
use crate::{Error, Result};

pub const POI_HEADER: &str = "x_m,y_m,category";

/// A point of interest at planar meter coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Poi {
    pub x_m: f64,
    pub y_m: f64,
    pub category: String,
}

/// Metric knobs with the usual defaults.
#[derive(Debug, Clone)]
pub struct MetricConfig {
    pub r1_km: f64,
    pub r2_km: f64,
    pub top_n: usize,
    pub projections: usize,
    pub vf_bins: usize,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            r1_km: 1.0,
            r2_km: 2.0,
            top_n: 50,
            projections: 1000,
            vf_bins: 24,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DiversityReport {
    /// Mean TV between same-index users of the two teams.
    pub same_tv: f64,
    /// Mean TV between offset-index users.
    pub diff_tv: f64,
    /// Standard deviation over all the pairwise TVs.
    pub sd: f64,
}

fn tv(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0
}

/// Mass each cell contributes per region: single cells a unit,
/// generalized cells a uniform share per member, deleted cells none.
fn add_cell_mass(cell: &Cell, into: &mut [f64]) {
    match cell {
        Cell::Single(r) => into[r.index()] += 1.0,
        Cell::Set(rs) => {
            let share = 1.0 / rs.len() as f64;
            for r in rs {
                into[r.index()] += share;
            }
        }
        Cell::Deleted => {}
    }
}

fn check_paired(a: &TraceSet, b: &TraceSet, what: &str) -> Result<()> {
    if a.len() != b.len()
        || a.trace_len() != b.trace_len()
        || a.slots_per_day() != b.slots_per_day()
    {
        return Err(Error::Metric(format!("{what}: trace set shapes differ")));
    }
    for (ta, tb) in a.traces().iter().zip(b.traces()) {
        if ta.owner != tb.owner {
            return Err(Error::Metric(format!(
                "{what}: owners differ ({} vs {})",
                ta.owner, tb.owner
            )));
        }
    }
    Ok(())
}

/// Fraction of the POIs near each original event that a provider
/// serving a radius around the anonymized event would deliver.
/// Events with no POI within `r1_km` of the original are skipped.
pub fn poi_accuracy(
    original: &TraceSet,
    anonymized: &TraceSet,
    pois: &[Poi],
    r1_km: f64,
    r2_km: f64,
    grid: &Grid,
) -> Result<f64> {
    if pois.is_empty() {
        return Err(Error::Metric(
            "poi accuracy needs at least one POI".to_string(),
        ));
    }
    if !(r1_km > 0.0) || r2_km < r1_km {
        return Err(Error::Metric(format!(
            "poi radii must satisfy r2 >= r1 > 0, got r1 = {r1_km}, r2 = {r2_km}"
        )));
    }
    check_paired(original, anonymized, "poi accuracy")?;
    let regions = grid.region_count() as usize;
    // POIs within each radius of every region center, precomputed.
    let mut near_r1: Vec<Vec<u32>> = vec![Vec::new(); regions];
    let mut near_r2: Vec<Vec<u32>> = vec![Vec::new(); regions];
    for r in grid.regions() {
        let (cx, cy) = grid.center_m(r)?;
        for (i, poi) in pois.iter().enumerate() {
            let d = ((poi.x_m - cx).powi(2) + (poi.y_m - cy).powi(2)).sqrt();
            if d <= r1_km * 1000.0 {
                near_r1[r.index()].push(i as u32);
            }
            if d <= r2_km * 1000.0 {
                near_r2[r.index()].push(i as u32);
            }
        }
    }
    let mut total = 0.0;
    let mut counted = 0usize;
    for (to, ta) in original.traces().iter().zip(anonymized.traces()) {
        for (co, ca) in to.cells.iter().zip(&ta.cells) {
            let orig = co
                .as_single()
                .ok_or_else(|| Error::Metric("original traces must be single-region".into()))?;
            let nearby = &near_r1[orig.index()];
            if nearby.is_empty() {
                continue;
            }
            let received: BTreeSet<u32> = match ca {
                Cell::Single(r) => near_r2[r.index()].iter().copied().collect(),
                Cell::Set(rs) => rs
                    .iter()
                    .flat_map(|r| near_r2[r.index()].iter().copied())
                    .collect(),
                Cell::Deleted => BTreeSet::new(),
            };
            let hit = nearby.iter().filter(|p| received.contains(p)).count();
            total += hit as f64 / nearby.len() as f64;
            counted += 1;
        }
    }
    if counted == 0 {
        return Err(Error::Metric(
            "no event has a POI within r1 of its original location".to_string(),
        ));
    }
    Ok(total / counted as f64)
}

/// Mean, over slots of day, of the total variation between the two
/// population distributions restricted to the original's `top_n`
/// regions (ties to the lowest region ID) and renormalized.
pub fn tp_tv_top_n(
    original: &TraceSet,
    anonymized: &TraceSet,
    top_n: usize,
    grid: &Grid,
) -> Result<f64> {
    if top_n == 0 {
        return Err(Error::Metric("top_n must be at least 1".to_string()));
    }
    if original.slots_per_day() != anonymized.slots_per_day() {
        return Err(Error::Metric("slot counts differ".to_string()));
    }
    let regions = grid.region_count() as usize;
    let spd = original.slots_per_day() as usize;
    let mut freq_o = vec![vec![0.0; regions]; spd];
    let mut freq_a = vec![vec![0.0; regions]; spd];
    for t in original.traces() {
        for (j, c) in t.cells.iter().enumerate() {
            add_cell_mass(c, &mut freq_o[original.slot_of(j) as usize]);
        }
    }
    for t in anonymized.traces() {
        for (j, c) in t.cells.iter().enumerate() {
            add_cell_mass(c, &mut freq_a[anonymized.slot_of(j) as usize]);
        }
    }
    let mut total = 0.0;
    for slot in 0..spd {
        // Top-n regions of the original distribution.
        let mut order: Vec<usize> = (0..regions).collect();
        order.sort_by(|&a, &b| {
            freq_o[slot][b]
                .partial_cmp(&freq_o[slot][a])
                .unwrap()
                .then(a.cmp(&b))
        });
        let keep: BTreeSet<usize> = order.into_iter().take(top_n).collect();
        let mask = |v: &[f64]| -> Vec<f64> {
            let mut out: Vec<f64> = v
                .iter()
                .enumerate()
                .map(|(i, &x)| if keep.contains(&i) { x } else { 0.0 })
                .collect();
            let sum: f64 = out.iter().sum();
            if sum > 0.0 {
                for x in out.iter_mut() {
                    *x /= sum;
                }
            }
            out
        };
        let p = mask(&freq_o[slot]);
        let q = mask(&freq_a[slot]);
        let sp: f64 = p.iter().sum();
        let sq: f64 = q.iter().sum();
        total += match (sp > 0.0, sq > 0.0) {
            (true, true) => tv(&p, &q),
            (false, false) => 0.0,
            // One side has no mass on the kept regions at all.
            _ => 1.0,
        };
    }
    Ok(total / spd as f64)
}

/// Average per-user within-day transition matrix, rows normalized.
/// Only single-to-single transitions count. Returns the row mass too.
fn transition_matrix(set: &TraceSet, regions: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut counts = vec![vec![0.0; regions]; regions];
    let mut row_mass = vec![0.0; regions];
    let spd = set.slots_per_day();
    for t in set.traces() {
        for (j, pair) in t.cells.windows(2).enumerate() {
            if set.slot_of(j) == spd - 1 {
                continue;
            }
            if let (Cell::Single(a), Cell::Single(b)) = (&pair[0], &pair[1]) {
                counts[a.index()][b.index()] += 1.0;
                row_mass[a.index()] += 1.0;
            }
        }
    }
    for (row, &mass) in counts.iter_mut().zip(&row_mass) {
        if mass > 0.0 {
            for x in row.iter_mut() {
                *x /= mass;
            }
        }
    }
    (counts, row_mass)
}

/// 1D earth mover's distance between two weighted point sets given as
/// (position, weight) pairs with equal total weight 1.
fn emd_1d(mut a: Vec<(f64, f64)>, mut b: Vec<(f64, f64)>) -> f64 {
    a.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    b.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    // Integrate |CDF_a - CDF_b| over the merged support.
    let mut events: Vec<(f64, f64, f64)> = Vec::with_capacity(a.len() + b.len());
    for &(p, w) in &a {
        events.push((p, w, 0.0));
    }
    for &(p, w) in &b {
        events.push((p, 0.0, w));
    }
    events.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut cdf_a: f64 = 0.0;
    let mut cdf_b: f64 = 0.0;
    let mut last = events[0].0;
    let mut total = 0.0;
    for (p, wa, wb) in events {
        total += (p - last) * (cdf_a - cdf_b).abs();
        cdf_a += wa;
        cdf_b += wb;
        last = p;
    }
    total
}

/// Sliced 1-Wasserstein distance between the average transition
/// matrices of the two sets: rows with mass in both are embedded at
/// cell centers, projected on random unit directions, and compared by
/// 1D EMD; the result averages over projections and rows.
pub fn tm_emd(
    original: &TraceSet,
    anonymized: &TraceSet,
    projections: usize,
    grid: &Grid,
    seed: u64,
) -> Result<f64> {
    if projections == 0 {
        return Err(Error::Metric("projections must be at least 1".to_string()));
    }
    let regions = grid.region_count() as usize;
    let (mat_o, mass_o) = transition_matrix(original, regions);
    let (mat_a, mass_a) = transition_matrix(anonymized, regions);
    let centers: Vec<(f64, f64)> = grid
        .regions()
        .map(|r| grid.center_m(r))
        .collect::<Result<_>>()?;
    let mut rng = StdRng::seed_from_u64(seed);
    let directions: Vec<(f64, f64)> = (0..projections)
        .map(|_| {
            let angle = rng.random::<f64>() * std::f64::consts::TAU;
            (angle.cos(), angle.sin())
        })
        .collect();
    let mut total = 0.0;
    let mut rows = 0usize;
    for r in 0..regions {
        if mass_o[r] == 0.0 || mass_a[r] == 0.0 {
            continue;
        }
        let support = |row: &[f64]| -> Vec<(usize, f64)> {
            row.iter()
                .enumerate()
                .filter(|(_, &w)| w > 0.0)
                .map(|(i, &w)| (i, w))
                .collect()
        };
        let sup_o = support(&mat_o[r]);
        let sup_a = support(&mat_a[r]);
        let mut row_total = 0.0;
        for &(ux, uy) in &directions {
            let project = |sup: &[(usize, f64)]| -> Vec<(f64, f64)> {
                sup.iter()
                    .map(|&(i, w)| {
                        let (cx, cy) = centers[i];
                        (cx * ux + cy * uy, w)
                    })
                    .collect()
            };
            row_total += emd_1d(project(&sup_o), project(&sup_a));
        }
        total += row_total / projections as f64;
        rows += 1;
    }
    if rows == 0 {
        return Ok(0.0);
    }
    Ok(total / rows as f64)
}

/// Per-user fraction of visits per region.
fn visit_fractions(set: &TraceSet, regions: usize) -> Vec<Vec<f64>> {
    set.traces()
        .iter()
        .map(|t| {
            let mut mass = vec![0.0; regions];
            for c in &t.cells {
                add_cell_mass(c, &mut mass);
            }
            let total: f64 = mass.iter().sum();
            if total > 0.0 {
                for x in mass.iter_mut() {
                    *x /= total;
                }
            }
            mass
        })
        .collect()
}

/// Bin index for a visit fraction in `(0, 1]` over `bins` equal bins.
fn fraction_bin(frac: f64, bins: usize) -> usize {
    ((frac * bins as f64).ceil() as usize).clamp(1, bins) - 1
}

/// Mean, over regions visited in `a`, of the total variation between
/// the two visit-fraction histograms of that region.
pub fn vf_tv(a: &TraceSet, b: &TraceSet, vf_bins: usize, grid: &Grid) -> Result<f64> {
    if vf_bins == 0 {
        return Err(Error::Metric("vf_bins must be at least 1".to_string()));
    }
    let regions = grid.region_count() as usize;
    let fracs_a = visit_fractions(a, regions);
    let fracs_b = visit_fractions(b, regions);
    let histogram = |fracs: &[Vec<f64>], region: usize| -> Option<Vec<f64>> {
        let mut h = vec![0.0; vf_bins];
        let mut n = 0usize;
        for user in fracs {
            let f = user[region];
            if f > 0.0 {
                h[fraction_bin(f, vf_bins)] += 1.0;
                n += 1;
            }
        }
        (n > 0).then(|| {
            for x in h.iter_mut() {
                *x /= n as f64;
            }
            h
        })
    };
    let mut total = 0.0;
    let mut counted = 0usize;
    for region in 0..regions {
        let Some(ha) = histogram(&fracs_a, region) else {
            continue;
        };
        counted += 1;
        total += match histogram(&fracs_b, region) {
            Some(hb) => tv(&ha, &hb),
            None => 1.0,
        };
    }
    if counted == 0 {
        return Err(Error::Metric("set A visits no region".to_string()));
    }
    Ok(total / counted as f64)
}

/// Compares per-user region distributions between two teams: TV of
/// same-index pairs, TV of pairs offset by `pairs`, and the standard
/// deviation over all of these pairwise TVs. Matching same and diff
/// means signals diversity; a markedly lower same mean signals that
/// the teams share user features.
pub fn diversity_tv(team1: &TraceSet, team2: &TraceSet, pairs: usize) -> Result<DiversityReport> {
    if pairs == 0 {
        return Err(Error::Metric("pairs must be at least 1".to_string()));
    }
    if team1.len() < pairs || team2.len() < 2 * pairs {
        return Err(Error::Metric(format!(
            "need {pairs} users in team 1 and {} in team 2, got {} and {}",
            2 * pairs,
            team1.len(),
            team2.len()
        )));
    }
    let regions = team1
        .traces()
        .iter()
        .chain(team2.traces())
        .flat_map(|t| t.cells.iter())
        .filter_map(|c| c.as_single())
        .map(|r| r.get())
        .max()
        .unwrap_or(1) as usize;
    let fracs1 = visit_fractions(team1, regions);
    let fracs2 = visit_fractions(team2, regions);
    let mut same = Vec::with_capacity(pairs);
    let mut diff = Vec::with_capacity(pairs);
    for i in 0..pairs {
        same.push(tv(&fracs1[i], &fracs2[i]));
        diff.push(tv(&fracs1[i], &fracs2[pairs + i]));
    }
    let all: Vec<f64> = same.iter().chain(diff.iter()).copied().collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let mu = mean(&all);
    let var = all.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (all.len() - 1) as f64;
    Ok(DiversityReport {
        same_tv: mean(&same),
        diff_tv: mean(&diff),
        sd: var.sqrt(),
    })
}

/// Deterministic POI fixture: points uniform over the grid area, all
/// in one category.
pub fn generate_poi_fixture(grid: &Grid, count: usize, seed: u64) -> Vec<Poi> {
    let mut rng = StdRng::seed_from_u64(seed);
    let w = grid.width() as f64 * grid.cell_width_m();
    let h = grid.height() as f64 * grid.cell_height_m();
    (0..count)
        .map(|_| Poi {
            x_m: rng.random::<f64>() * w,
            y_m: rng.random::<f64>() * h,
            category: "food".to_string(),
        })
        .collect()
}

pub fn write_pois(pois: &[Poi], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{POI_HEADER}")?;
    for p in pois {
        writeln!(w, "{},{},{}", p.x_m, p.y_m, p.category)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_pois(path: &Path) -> Result<Vec<Poi>> {
    let source = path.display().to_string();
    let f = File::open(path)?;
    let mut pois = Vec::new();
    for (ix, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        let lineno = ix + 1;
        let row = line.trim_end_matches(['\r', '\n']);
        if row.is_empty() || (lineno == 1 && row == POI_HEADER) {
            continue;
        }
        let fields: Vec<&str> = row.splitn(3, ',').collect();
        if fields.len() != 3 {
            return Err(Error::parse(&source, lineno, "expected x_m,y_m,category"));
        }
        let x_m: f64 = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::parse(&source, lineno, format!("bad x {:?}", fields[0])))?;
        let y_m: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| Error::parse(&source, lineno, format!("bad y {:?}", fields[1])))?;
        pois.push(Poi {
            x_m,
            y_m,
            category: fields[2].trim().to_string(),
        });
    }
    if pois.is_empty() {
        return Err(Error::parse(&source, 0, "no POI rows found"));
    }
    Ok(pois)
}
