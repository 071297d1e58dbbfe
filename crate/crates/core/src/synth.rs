//! Trains a cluster-mixture generative model from training traces and
//! samples per-team virtual-user datasets.
//!
//! The model keeps per-slot population distributions, a region
//! transition matrix, per-cluster region distributions from a k-means
//! clustering of user visit vectors, and a Gaussian over per-user
//! cluster-affinity features. Each team's virtual users draw fresh
//! feature vectors from the Gaussian, so no virtual user corresponds
//! to a training user or to another team's users, while population and
//! transition statistics carry over.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use crate::grid::{Grid, RegionId};
use crate::kmeans::kmeans;
use crate::linalg;
use crate::seed::stage_seed;
use crate::trace::{Cell, Trace, TraceSet};
use crate::{Error, Result};

const SIGMA_MIN_EIGENVALUE: f64 = 1e-9;
const KMEANS_MAX_ITERS: usize = 100;

/// Morning slots where virtual users tend to stay home.
pub const HOME_SLOTS_MORNING: std::ops::Range<u32> = 0..3;
/// Number of trailing slots per day where virtual users tend to stay home.
pub const HOME_SLOTS_EVENING: u32 = 4;

#[derive(Debug, Clone)]
pub struct GenerativeModel {
    grid: Grid,
    slots_per_day: u32,
    z: usize,
    /// Per-cluster region distributions, z rows over all regions.
    phi: Vec<Vec<f64>>,
    /// Per-slot-of-day population distributions.
    pi: Vec<Vec<f64>>,
    /// Row-stochastic region transition matrix.
    transitions: Vec<Vec<f64>>,
    /// Feature Gaussian mean.
    mu: Vec<f64>,
    /// Feature Gaussian covariance, eigenvalue-clamped PSD.
    sigma: Vec<Vec<f64>>,
}

/// Knobs for trace generation.
#[derive(Debug, Clone, Copy)]
pub struct SampleParams {
    /// Exponent applied to the per-user region affinity when tilting
    /// population and transition rows. Zero disables the tilt.
    pub theta: f64,
    /// Probability of emitting the home region in morning/evening slots.
    pub home_prob: f64,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams {
            theta: 1.0,
            home_prob: 0.8,
        }
    }
}

/// Reference plus original trace sets for one team.
#[derive(Debug, Clone)]
pub struct TeamTraces {
    pub reference: TraceSet,
    pub original: TraceSet,
}

fn normalize(v: &mut [f64]) {
    let total: f64 = v.iter().sum();
    if total > 0.0 {
        for x in v.iter_mut() {
            *x /= total;
        }
    }
}

fn softmax(v: &[f64]) -> Vec<f64> {
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = v.iter().map(|x| (x - max).exp()).collect();
    normalize(&mut out);
    out
}

fn sample_categorical(weights: &[f64], rng: &mut StdRng) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        u -= w;
        if u <= 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

/// Per-user visit counts over all regions.
fn visit_counts(trace: &Trace, regions: usize) -> Vec<f64> {
    let mut counts = vec![0.0; regions];
    for cell in &trace.cells {
        if let Cell::Single(r) = cell {
            counts[r.index()] += 1.0;
        }
    }
    counts
}

/// Trains a generative model on `training` (all-`Single` traces laid
/// out on `grid`) with `z` user clusters.
pub fn train(training: &TraceSet, grid: &Grid, z: usize, seed: u64) -> Result<GenerativeModel> {
    if training.is_empty() {
        return Err(Error::Config("training trace set is empty".to_string()));
    }
    if !training.all_single() {
        return Err(Error::Config(
            "training traces must contain only single-region cells".to_string(),
        ));
    }
    if z == 0 || training.len() < z {
        return Err(Error::Config(format!(
            "cluster count z = {z} needs at least z training users, got {}",
            training.len()
        )));
    }
    let regions = grid.region_count() as usize;
    let spd = training.slots_per_day();

    // Per-slot population distributions with add-one smoothing.
    let mut pi = vec![vec![1.0; regions]; spd as usize];
    for t in training.traces() {
        for (j, cell) in t.cells.iter().enumerate() {
            if let Cell::Single(r) = cell {
                pi[training.slot_of(j) as usize][r.index()] += 1.0;
            }
        }
    }
    for row in pi.iter_mut() {
        normalize(row);
    }

    // Within-day transitions with add-one smoothing.
    let mut transitions = vec![vec![1.0; regions]; regions];
    for t in training.traces() {
        for (j, pair) in t.cells.windows(2).enumerate() {
            if training.slot_of(j) == spd - 1 {
                continue; // day boundary
            }
            if let (Cell::Single(a), Cell::Single(b)) = (&pair[0], &pair[1]) {
                transitions[a.index()][b.index()] += 1.0;
            }
        }
    }
    for row in transitions.iter_mut() {
        normalize(row);
    }

    // Cluster users on L1-normalized visit vectors.
    let norm_vectors: Vec<Vec<f64>> = training
        .traces()
        .iter()
        .map(|t| {
            let mut v = visit_counts(t, regions);
            normalize(&mut v);
            v
        })
        .collect();
    let clustering = kmeans(&norm_vectors, z, KMEANS_MAX_ITERS, seed)?;

    // Cluster region distributions: smoothed mean of member counts.
    // A cluster that ends up empty falls back to the global counts.
    let mut phi = vec![vec![1.0; regions]; z];
    let mut members = vec![0usize; z];
    let mut global = vec![0.0; regions];
    for (t, &c) in training.traces().iter().zip(&clustering.assignment) {
        let counts = visit_counts(t, regions);
        members[c] += 1;
        for ((acc, g), v) in phi[c].iter_mut().zip(global.iter_mut()).zip(&counts) {
            *acc += v;
            *g += v;
        }
    }
    for (row, &n) in phi.iter_mut().zip(&members) {
        if n == 0 {
            for (acc, g) in row.iter_mut().zip(&global) {
                *acc += g;
            }
        }
        normalize(row);
    }

    // Per-user features: similarity-normalized inverse distances to
    // the centroids, then a Gaussian fit over all users.
    let features: Vec<Vec<f64>> = norm_vectors
        .iter()
        .map(|v| {
            let mut f: Vec<f64> = clustering
                .centroids
                .iter()
                .map(|c| {
                    let d2: f64 = v.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum();
                    1.0 / (d2.sqrt() + 1e-9)
                })
                .collect();
            normalize(&mut f);
            f
        })
        .collect();
    let n = features.len() as f64;
    let mut mu = vec![0.0; z];
    for f in &features {
        for (m, v) in mu.iter_mut().zip(f) {
            *m += v / n;
        }
    }
    let mut sigma = vec![vec![0.0; z]; z];
    for f in &features {
        for i in 0..z {
            for j in 0..z {
                sigma[i][j] += (f[i] - mu[i]) * (f[j] - mu[j]) / n;
            }
        }
    }
    let sigma = linalg::clamp_eigenvalues(&sigma, SIGMA_MIN_EIGENVALUE);

    Ok(GenerativeModel {
        grid: *grid,
        slots_per_day: spd,
        z,
        phi,
        pi,
        transitions,
        mu,
        sigma,
    })
}

impl GenerativeModel {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn slots_per_day(&self) -> u32 {
        self.slots_per_day
    }

    pub fn z(&self) -> usize {
        self.z
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn sigma(&self) -> &[Vec<f64>] {
        &self.sigma
    }

    pub fn pi(&self) -> &[Vec<f64>] {
        &self.pi
    }

    pub fn phi(&self) -> &[Vec<f64>] {
        &self.phi
    }

    pub fn transitions(&self) -> &[Vec<f64>] {
        &self.transitions
    }

    /// Draws `m` fresh feature vectors from the model Gaussian. Each
    /// user gets an independent RNG stream so draws do not depend on
    /// evaluation order.
    pub fn sample_features(&self, m: usize, seed: u64) -> Vec<Vec<f64>> {
        let factor = linalg::sampling_factor(&self.sigma, SIGMA_MIN_EIGENVALUE);
        (0..m)
            .map(|i| {
                let mut rng = StdRng::seed_from_u64(stage_seed(seed, "feature", &[i as u64]));
                let noise: Vec<f64> = (0..self.z).map(|_| rng.sample(StandardNormal)).collect();
                let spread = linalg::mat_vec(&factor, &noise);
                self.mu.iter().zip(&spread).map(|(m, s)| m + s).collect()
            })
            .collect()
    }

    /// Region affinity of one user: the softmax of the feature vector
    /// mixes the cluster distributions.
    fn user_affinity(&self, feature: &[f64]) -> Vec<f64> {
        let weights = softmax(feature);
        let regions = self.grid.region_count() as usize;
        let mut psi = vec![0.0; regions];
        for (w, phi_c) in weights.iter().zip(&self.phi) {
            for (p, v) in psi.iter_mut().zip(phi_c) {
                *p += w * v;
            }
        }
        psi
    }

    /// Distribution of the next region given the current one: the
    /// transition row tilted by the user affinity raised to `theta`.
    fn next_region_dist(&self, current: RegionId, psi_pow: &[f64]) -> Vec<f64> {
        let mut row: Vec<f64> = self.transitions[current.index()]
            .iter()
            .zip(psi_pow)
            .map(|(t, p)| t * p)
            .collect();
        normalize(&mut row);
        row
    }

    fn first_slot_dist(&self, psi_pow: &[f64]) -> Vec<f64> {
        let mut row: Vec<f64> = self.pi[0].iter().zip(psi_pow).map(|(t, p)| t * p).collect();
        normalize(&mut row);
        row
    }

    fn is_home_slot(&self, slot: u32) -> bool {
        HOME_SLOTS_MORNING.contains(&slot)
            || slot >= self.slots_per_day.saturating_sub(HOME_SLOTS_EVENING)
    }

    /// Generates one team's reference and original trace sets from
    /// already-sampled feature vectors. The first half of `days` forms
    /// the reference set, the second half the original set.
    pub fn generate_team(
        &self,
        features: &[Vec<f64>],
        days: u32,
        params: &SampleParams,
        seed: u64,
    ) -> Result<TeamTraces> {
        if features.is_empty() {
            return Err(Error::Config("team needs at least one user".to_string()));
        }
        if days < 2 {
            return Err(Error::Config(
                "need at least 2 days to split into reference and original".to_string(),
            ));
        }
        for f in features {
            if f.len() != self.z || f.iter().any(|v| !v.is_finite()) {
                return Err(Error::Model(
                    "feature vector has wrong arity or non-finite entries".to_string(),
                ));
            }
        }
        let ref_days = days / 2;
        let org_days = days - ref_days;
        let spd = self.slots_per_day;
        let mut ref_traces = Vec::with_capacity(features.len());
        let mut org_traces = Vec::with_capacity(features.len());
        for (i, feature) in features.iter().enumerate() {
            let mut rng = StdRng::seed_from_u64(stage_seed(seed, "user", &[i as u64]));
            let psi = self.user_affinity(feature);
            let psi_pow: Vec<f64> = if params.theta == 0.0 {
                vec![1.0; psi.len()]
            } else {
                psi.iter().map(|p| p.powf(params.theta)).collect()
            };
            let home = RegionId::from_index(sample_categorical(&self.pi[0], &mut rng));
            let mut cells = Vec::with_capacity((days * spd) as usize);
            for _day in 0..days {
                let mut current = if self.is_home_slot(0) && rng.random::<f64>() < params.home_prob
                {
                    home
                } else {
                    RegionId::from_index(sample_categorical(
                        &self.first_slot_dist(&psi_pow),
                        &mut rng,
                    ))
                };
                cells.push(Cell::Single(current));
                for slot in 1..spd {
                    let at_home = self.is_home_slot(slot) && rng.random::<f64>() < params.home_prob;
                    current = if at_home {
                        home
                    } else {
                        RegionId::from_index(sample_categorical(
                            &self.next_region_dist(current, &psi_pow),
                            &mut rng,
                        ))
                    };
                    cells.push(Cell::Single(current));
                }
            }
            let split = (ref_days * spd) as usize;
            let org_cells = cells.split_off(split);
            let owner = i as u32 + 1;
            ref_traces.push(Trace { owner, cells });
            org_traces.push(Trace {
                owner,
                cells: org_cells,
            });
        }
        Ok(TeamTraces {
            reference: TraceSet::new(ref_traces, ref_days, spd)?,
            original: TraceSet::new(org_traces, org_days, spd)?,
        })
    }

    /// Samples `teams` independent virtual-user datasets of `m` users
    /// each. Teams draw disjoint feature vectors and RNG streams from
    /// the same model.
    pub fn sample_teams(
        &self,
        m: usize,
        teams: usize,
        days: u32,
        params: &SampleParams,
        seed: u64,
    ) -> Result<Vec<TeamTraces>> {
        if m == 0 {
            return Err(Error::Config("m must be at least 1".to_string()));
        }
        (0..teams)
            .map(|t| {
                let features =
                    self.sample_features(m, stage_seed(seed, "team-features", &[t as u64]));
                self.generate_team(
                    &features,
                    days,
                    params,
                    stage_seed(seed, "team-traces", &[t as u64]),
                )
            })
            .collect()
    }
}

fn write_matrix<W: Write>(w: &mut W, name: &str, m: &[Vec<f64>]) -> Result<()> {
    writeln!(w, "{name} {} {}", m.len(), m.first().map_or(0, Vec::len))?;
    for row in m {
        let parts: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        writeln!(w, "{}", parts.join(" "))?;
    }
    Ok(())
}

/// Serializes a model as versioned plain-decimal text.
pub fn write_model(model: &GenerativeModel, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "tracebench-model v1")?;
    writeln!(
        w,
        "grid {} {} {} {}",
        model.grid.width(),
        model.grid.height(),
        model.grid.cell_width_m(),
        model.grid.cell_height_m()
    )?;
    writeln!(w, "slots_per_day {}", model.slots_per_day)?;
    writeln!(w, "z {}", model.z)?;
    let mu_parts: Vec<String> = model.mu.iter().map(|v| format!("{v}")).collect();
    writeln!(w, "mu {}", mu_parts.join(" "))?;
    write_matrix(&mut w, "sigma", &model.sigma)?;
    write_matrix(&mut w, "pi", &model.pi)?;
    write_matrix(&mut w, "phi", &model.phi)?;
    write_matrix(&mut w, "transitions", &model.transitions)?;
    w.flush()?;
    Ok(())
}

struct LineReader<R: BufRead> {
    inner: std::io::Lines<R>,
    source: String,
    line: usize,
}

impl<R: BufRead> LineReader<R> {
    fn next_line(&mut self) -> Result<String> {
        self.line += 1;
        match self.inner.next() {
            Some(l) => Ok(l?),
            None => Err(Error::parse(
                &self.source,
                self.line,
                "unexpected end of model file",
            )),
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(&self.source, self.line, msg)
    }
}

fn parse_floats(reader: &LineReader<impl BufRead>, s: &str) -> Result<Vec<f64>> {
    s.split_whitespace()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| reader.err(format!("bad number {p:?}")))
        })
        .collect()
}

fn read_matrix<R: BufRead>(reader: &mut LineReader<R>, name: &str) -> Result<Vec<Vec<f64>>> {
    let head = reader.next_line()?;
    let parts: Vec<&str> = head.split_whitespace().collect();
    if parts.len() != 3 || parts[0] != name {
        return Err(reader.err(format!("expected `{name} rows cols` header")));
    }
    let rows: usize = parts[1].parse().map_err(|_| reader.err("bad row count"))?;
    let cols: usize = parts[2].parse().map_err(|_| reader.err("bad col count"))?;
    let mut m = Vec::with_capacity(rows);
    for _ in 0..rows {
        let line = reader.next_line()?;
        let row = parse_floats(reader, &line)?;
        if row.len() != cols {
            return Err(reader.err(format!("expected {cols} columns, got {}", row.len())));
        }
        m.push(row);
    }
    Ok(m)
}

pub fn read_model(path: &Path) -> Result<GenerativeModel> {
    let f = File::open(path)?;
    let mut reader = LineReader {
        inner: BufReader::new(f).lines(),
        source: path.display().to_string(),
        line: 0,
    };
    let magic = reader.next_line()?;
    if magic.trim() != "tracebench-model v1" {
        return Err(reader.err("not a tracebench-model v1 file"));
    }
    let grid_line = reader.next_line()?;
    let parts: Vec<&str> = grid_line.split_whitespace().collect();
    if parts.len() != 5 || parts[0] != "grid" {
        return Err(reader.err("expected `grid w h cw ch`"));
    }
    let grid = Grid::new(
        parts[1].parse().map_err(|_| reader.err("bad grid width"))?,
        parts[2]
            .parse()
            .map_err(|_| reader.err("bad grid height"))?,
        parts[3].parse().map_err(|_| reader.err("bad cell width"))?,
        parts[4]
            .parse()
            .map_err(|_| reader.err("bad cell height"))?,
    )?;
    let spd_line = reader.next_line()?;
    let spd: u32 = spd_line
        .strip_prefix("slots_per_day ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| reader.err("expected `slots_per_day n`"))?;
    let z_line = reader.next_line()?;
    let z: usize = z_line
        .strip_prefix("z ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| reader.err("expected `z n`"))?;
    let mu_line = reader.next_line()?;
    let mu = parse_floats(
        &reader,
        mu_line
            .strip_prefix("mu ")
            .ok_or_else(|| reader.err("expected `mu ...`"))?,
    )?;
    let sigma = read_matrix(&mut reader, "sigma")?;
    let pi = read_matrix(&mut reader, "pi")?;
    let phi = read_matrix(&mut reader, "phi")?;
    let transitions = read_matrix(&mut reader, "transitions")?;
    let regions = grid.region_count() as usize;
    if mu.len() != z
        || sigma.len() != z
        || pi.len() != spd as usize
        || phi.len() != z
        || transitions.len() != regions
        || phi.iter().any(|r| r.len() != regions)
        || pi.iter().any(|r| r.len() != regions)
        || transitions.iter().any(|r| r.len() != regions)
    {
        return Err(reader.err("model dimensions are inconsistent"));
    }
    Ok(GenerativeModel {
        grid,
        slots_per_day: spd,
        z,
        phi,
        pi,
        transitions,
        mu,
        sigma,
    })
}
