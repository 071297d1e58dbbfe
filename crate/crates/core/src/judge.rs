//! The organizer role: pseudonymization, utility scoring with the
//! validity gate, privacy scoring for re-identification and trace
//! inference, and minimum-over-attacks aggregation with award tallies.

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::grid::{Grid, RegionId};
use crate::seed::stage_seed;
use crate::trace::{Cell, IdTable, Trace, TraceSet};
use crate::{Error, Result};

/// Judge-side scoring parameters.
#[derive(Debug, Clone)]
pub struct ScoringParams {
    /// Utility distance cap in meters.
    pub lambda_u_m: f64,
    /// Trace-inference distance cap in meters.
    pub lambda_t_m: f64,
    /// Validity threshold on the utility score.
    pub s_req: f64,
    /// Weight of events whose original region is a hospital.
    pub hospital_weight: f64,
    pub hospitals: BTreeSet<RegionId>,
}

impl Default for ScoringParams {
    fn default() -> Self {
        ScoringParams {
            lambda_u_m: 2000.0,
            lambda_t_m: 2000.0,
            s_req: 0.7,
            hospital_weight: 10.0,
            hospitals: BTreeSet::new(),
        }
    }
}

/// Scores for one anonymized trace set against one attack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreReport {
    pub s_u: f64,
    pub s_r: f64,
    pub s_t: f64,
    pub expected_error_m: f64,
    pub valid: bool,
}

/// Utility transform: 1 at zero distance, linearly down to 0 at the
/// cap. Deletion is an infinite distance and scores 0 without entering
/// the arithmetic.
pub fn g_u(alpha_m: f64, lambda_m: f64) -> f64 {
    if !alpha_m.is_finite() || alpha_m >= lambda_m {
        0.0
    } else {
        1.0 - alpha_m / lambda_m
    }
}

/// Trace-inference transform: 0 at zero distance, linearly up to 1 at
/// the cap.
pub fn g_t(beta_m: f64, lambda_m: f64) -> f64 {
    if beta_m >= lambda_m {
        1.0
    } else {
        beta_m / lambda_m
    }
}

/// Shuffles the traces uniformly and assigns pseudonyms `m+1..=2m` in
/// output order. Returns the anonymized set and the secret
/// ground-truth table mapping pseudonyms back to owners.
pub fn pseudonymize(obfuscated: &TraceSet, seed: u64) -> Result<(TraceSet, IdTable)> {
    let m = obfuscated.len();
    let mut order: Vec<usize> = (0..m).collect();
    let mut rng = StdRng::seed_from_u64(stage_seed(seed, "pseudonymize", &[]));
    order.shuffle(&mut rng);
    let mut traces = Vec::with_capacity(m);
    let mut pairs = Vec::with_capacity(m);
    for (pos, &src) in order.iter().enumerate() {
        let pseudonym = (m + 1 + pos) as u32;
        let original = &obfuscated.traces()[src];
        pairs.push((pseudonym, original.owner));
        traces.push(Trace {
            owner: pseudonym,
            cells: original.cells.clone(),
        });
    }
    Ok((obfuscated.with_traces(traces)?, IdTable::new(pairs)?))
}

fn check_paired(a: &TraceSet, b: &TraceSet, what: &str) -> Result<()> {
    if a.len() != b.len() || a.trace_len() != b.trace_len() {
        return Err(Error::Mismatch(format!(
            "{what}: {}x{} events vs {}x{}",
            a.len(),
            a.trace_len(),
            b.len(),
            b.trace_len()
        )));
    }
    for (ta, tb) in a.traces().iter().zip(b.traces()) {
        if ta.owner != tb.owner {
            return Err(Error::Mismatch(format!(
                "{what}: owner {} vs {}",
                ta.owner, tb.owner
            )));
        }
    }
    Ok(())
}

/// Distance between an original region and an obfuscated cell: plain
/// distance for a single region, the average distance over members for
/// a generalized set, infinite for deletion.
fn alpha_m(grid: &Grid, original: RegionId, cell: &Cell) -> Result<f64> {
    match cell {
        Cell::Single(r) => grid.distance(original, *r),
        Cell::Set(rs) => {
            let mut total = 0.0;
            for r in rs {
                total += grid.distance(original, *r)?;
            }
            Ok(total / rs.len() as f64)
        }
        Cell::Deleted => Ok(f64::INFINITY),
    }
}

/// Utility score: mean of `g_u` over all events.
pub fn utility_score(
    original: &TraceSet,
    obfuscated: &TraceSet,
    params: &ScoringParams,
    grid: &Grid,
) -> Result<f64> {
    if !original.all_single() {
        return Err(Error::Mismatch(
            "original traces must be single-region".to_string(),
        ));
    }
    check_paired(original, obfuscated, "utility")?;
    let mut total = 0.0;
    let mut events = 0usize;
    for (to, tb) in original.traces().iter().zip(obfuscated.traces()) {
        for (co, cb) in to.cells.iter().zip(&tb.cells) {
            let orig = co.as_single().expect("checked all_single");
            total += g_u(alpha_m(grid, orig, cb)?, params.lambda_u_m);
            events += 1;
        }
    }
    Ok(total / events as f64)
}

/// Re-identification privacy score: one minus the fraction of
/// correctly identified pseudonyms.
pub fn reid_score(truth: &IdTable, guess: &IdTable) -> Result<f64> {
    if guess.len() != truth.len() {
        return Err(Error::Mismatch(format!(
            "guessed table has {} pseudonyms, expected {}",
            guess.len(),
            truth.len()
        )));
    }
    let mut hits = 0usize;
    for &(pseudonym, user) in truth.pairs() {
        match guess.user_for(pseudonym) {
            Some(g) => {
                if g == user {
                    hits += 1;
                }
            }
            None => {
                return Err(Error::Mismatch(format!(
                    "guessed table is missing pseudonym {pseudonym}"
                )))
            }
        }
    }
    Ok(1.0 - hits as f64 / truth.len() as f64)
}

/// Trace-inference privacy score and raw expected error. The score is
/// the hospital-weighted average of `g_t` over all events; the
/// expected error is the unweighted mean distance in meters.
pub fn trace_score(
    original: &TraceSet,
    inferred: &TraceSet,
    params: &ScoringParams,
    grid: &Grid,
) -> Result<(f64, f64)> {
    if !original.all_single() {
        return Err(Error::Mismatch(
            "original traces must be single-region".to_string(),
        ));
    }
    if !inferred.all_single() {
        return Err(Error::Mismatch(
            "inferred traces must be single-region".to_string(),
        ));
    }
    check_paired(original, inferred, "trace inference")?;
    let mut weighted = 0.0;
    let mut weight_total = 0.0;
    let mut error_total = 0.0;
    let mut events = 0usize;
    for (to, ti) in original.traces().iter().zip(inferred.traces()) {
        for (co, ci) in to.cells.iter().zip(&ti.cells) {
            let orig = co.as_single().expect("checked all_single");
            let inf = ci.as_single().expect("checked all_single");
            let beta = grid.distance(orig, inf)?;
            let w = if params.hospitals.contains(&orig) {
                params.hospital_weight
            } else {
                1.0
            };
            weighted += w * g_t(beta, params.lambda_t_m);
            weight_total += w;
            error_total += beta;
            events += 1;
        }
    }
    Ok((weighted / weight_total, error_total / events as f64))
}

/// One attack's scores against one defended team.
#[derive(Debug, Clone)]
pub struct AttackRecord {
    pub attacker_team: usize,
    pub method: String,
    pub s_r: f64,
    pub s_t: f64,
    pub expected_error_m: f64,
}

/// All scores for one defended team.
#[derive(Debug, Clone)]
pub struct TeamScores {
    pub team: usize,
    pub s_u: f64,
    pub valid: bool,
    /// Judge-prepared benchmark sets are attacked but win no awards.
    pub benchmark: bool,
    pub attacks: Vec<AttackRecord>,
}

#[derive(Debug, Clone)]
pub struct TeamSummary {
    pub team: usize,
    pub s_u: f64,
    pub valid: bool,
    pub benchmark: bool,
    pub s_r_min: f64,
    pub s_t_min: f64,
}

#[derive(Debug, Clone)]
pub struct ContestSummary {
    pub teams: Vec<TeamSummary>,
    pub best_anonymization: Option<usize>,
    pub best_reid_attacker: Option<usize>,
    pub best_trace_attacker: Option<usize>,
}

/// Minimum privacy scores per team (the strongest attack counts) plus
/// award winners. Invalid teams get privacy scores of zero. The best
/// anonymization award goes to the valid non-benchmark team with the
/// highest minimum trace-inference score; the attacker awards go to
/// the teams whose summed scores against all defended sets are lowest.
pub fn aggregate(teams: &[TeamScores]) -> ContestSummary {
    let summaries: Vec<TeamSummary> = teams
        .iter()
        .map(|t| {
            let (s_r_min, s_t_min) = if !t.valid {
                (0.0, 0.0)
            } else {
                let r = t
                    .attacks
                    .iter()
                    .map(|a| a.s_r)
                    .fold(f64::INFINITY, f64::min);
                let s = t
                    .attacks
                    .iter()
                    .map(|a| a.s_t)
                    .fold(f64::INFINITY, f64::min);
                (
                    if r.is_finite() { r } else { 1.0 },
                    if s.is_finite() { s } else { 1.0 },
                )
            };
            TeamSummary {
                team: t.team,
                s_u: t.s_u,
                valid: t.valid,
                benchmark: t.benchmark,
                s_r_min,
                s_t_min,
            }
        })
        .collect();

    let best_anonymization = summaries
        .iter()
        .filter(|s| s.valid && !s.benchmark)
        .max_by(|a, b| {
            a.s_t_min
                .partial_cmp(&b.s_t_min)
                .unwrap()
                .then(b.team.cmp(&a.team))
        })
        .map(|s| s.team);

    // Per attacking team, sum its best (lowest) score per defended set.
    let mut attackers: BTreeSet<usize> = BTreeSet::new();
    for t in teams {
        for a in &t.attacks {
            attackers.insert(a.attacker_team);
        }
    }
    let sum_for = |attacker: usize, pick_r: bool| -> f64 {
        teams
            .iter()
            .filter(|t| t.valid)
            .filter_map(|t| {
                let best = t
                    .attacks
                    .iter()
                    .filter(|a| a.attacker_team == attacker)
                    .map(|a| if pick_r { a.s_r } else { a.s_t })
                    .fold(f64::INFINITY, f64::min);
                best.is_finite().then_some(best)
            })
            .sum()
    };
    let pick_min = |pick_r: bool| -> Option<usize> {
        attackers
            .iter()
            .map(|&a| (a, sum_for(a, pick_r)))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap().then(x.0.cmp(&y.0)))
            .map(|(a, _)| a)
    };

    ContestSummary {
        teams: summaries,
        best_anonymization,
        best_reid_attacker: pick_min(true),
        best_trace_attacker: pick_min(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(id: u32) -> RegionId {
        RegionId::new(id).unwrap()
    }

    fn set_of(cells_per_owner: Vec<(u32, Vec<Cell>)>, spd: u32) -> TraceSet {
        let traces = cells_per_owner
            .into_iter()
            .map(|(owner, cells)| Trace { owner, cells })
            .collect();
        TraceSet::new(traces, 1, spd).unwrap()
    }

    #[test]
    fn pseudonymize_assigns_contiguous_block() {
        let grid = Grid::contest_default();
        let _ = grid;
        let set = set_of(
            vec![
                (1, vec![Cell::Single(x(1))]),
                (2, vec![Cell::Single(x(2))]),
                (3, vec![Cell::Single(x(3))]),
            ],
            1,
        );
        let (anon, table) = pseudonymize(&set, 5).unwrap();
        assert_eq!(anon.owners().collect::<Vec<_>>(), vec![4, 5, 6]);
        table.validate_bijection().unwrap();
        // Multiset of traces preserved.
        let mut before: Vec<Vec<Cell>> = set.traces().iter().map(|t| t.cells.clone()).collect();
        let mut after: Vec<Vec<Cell>> = anon.traces().iter().map(|t| t.cells.clone()).collect();
        before.sort_by_key(|c| format!("{c:?}"));
        after.sort_by_key(|c| format!("{c:?}"));
        assert_eq!(before, after);
        // Table is consistent with the shuffle.
        for &(pseudonym, user) in table.pairs() {
            assert_eq!(
                anon.get(pseudonym).unwrap().cells,
                set.get(user).unwrap().cells
            );
        }
    }

    #[test]
    fn pseudonymize_fixed_seed_golden() {
        let set = set_of(
            (1..=5)
                .map(|u| (u, vec![Cell::Single(x(u))]))
                .collect::<Vec<_>>(),
            1,
        );
        let (_, table) = pseudonymize(&set, 42).unwrap();
        // Frozen from the first run at seed 42.
        let golden: Vec<(u32, u32)> = vec![(6, 2), (7, 3), (8, 5), (9, 1), (10, 4)];
        assert_eq!(table.pairs(), golden.as_slice());
    }

    #[test]
    fn utility_identity_and_deleted() {
        let grid = Grid::contest_default();
        let params = ScoringParams::default();
        let set = set_of(
            vec![
                (1, vec![Cell::Single(x(1)), Cell::Single(x(3))]),
                (2, vec![Cell::Single(x(9)), Cell::Single(x(70))]),
            ],
            2,
        );
        assert_eq!(utility_score(&set, &set, &params, &grid).unwrap(), 1.0);
        let deleted = set_of(
            vec![
                (1, vec![Cell::Deleted, Cell::Deleted]),
                (2, vec![Cell::Deleted, Cell::Deleted]),
            ],
            2,
        );
        assert_eq!(utility_score(&set, &deleted, &params, &grid).unwrap(), 0.0);
    }

    #[test]
    fn utility_single_event_hand_value() {
        let grid = Grid::contest_default();
        let params = ScoringParams::default();
        let original = set_of(vec![(1, vec![Cell::Single(x(1))])], 1);
        let obfuscated = set_of(vec![(1, vec![Cell::Single(x(2))])], 1);
        let s = utility_score(&original, &obfuscated, &params, &grid).unwrap();
        assert!((s - 0.8295).abs() < 1e-12, "s_u = {s}");
    }

    #[test]
    fn utility_worked_alpha_decomposition() {
        // Original x1, x3, x2, x1; output x2, x3, {x2,x4,x5}, deleted.
        let grid = Grid::contest_default();
        let params = ScoringParams::default();
        let original = set_of(
            vec![(
                1,
                vec![
                    Cell::Single(x(1)),
                    Cell::Single(x(3)),
                    Cell::Single(x(2)),
                    Cell::Single(x(1)),
                ],
            )],
            4,
        );
        let obfuscated = set_of(
            vec![(
                1,
                vec![
                    Cell::Single(x(2)),
                    Cell::Single(x(3)),
                    Cell::Set(vec![x(2), x(4), x(5)]),
                    Cell::Deleted,
                ],
            )],
            4,
        );
        let s = utility_score(&original, &obfuscated, &params, &grid).unwrap();
        let d12 = grid.distance(x(1), x(2)).unwrap();
        let alpha3 = (grid.distance(x(2), x(2)).unwrap()
            + grid.distance(x(2), x(4)).unwrap()
            + grid.distance(x(2), x(5)).unwrap())
            / 3.0;
        let expect = (g_u(d12, 2000.0) + 1.0 + g_u(alpha3, 2000.0) + 0.0) / 4.0;
        assert!((s - expect).abs() < 1e-12);
    }

    #[test]
    fn utility_monotone_under_deletion() {
        let grid = Grid::contest_default();
        let params = ScoringParams::default();
        let original = set_of(
            vec![(
                1,
                vec![Cell::Single(x(1)), Cell::Single(x(2)), Cell::Single(x(3))],
            )],
            3,
        );
        let obfuscated = set_of(
            vec![(
                1,
                vec![
                    Cell::Single(x(2)),
                    Cell::Set(vec![x(1), x(9)]),
                    Cell::Single(x(3)),
                ],
            )],
            3,
        );
        let base = utility_score(&original, &obfuscated, &params, &grid).unwrap();
        for j in 0..3 {
            let mut cells = obfuscated.traces()[0].cells.clone();
            cells[j] = Cell::Deleted;
            let worse = set_of(vec![(1, cells)], 3);
            let s = utility_score(&original, &worse, &params, &grid).unwrap();
            assert!(s <= base + 1e-15);
        }
    }

    #[test]
    fn reid_score_examples() {
        let truth = IdTable::new(vec![(2001, 2), (2002, 3), (2003, 1)]).unwrap();
        let guess = IdTable::new(vec![(2001, 2), (2002, 2), (2003, 1)]).unwrap();
        let s = reid_score(&truth, &guess).unwrap();
        assert!((s - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(reid_score(&truth, &truth).unwrap(), 0.0);
        // Constant guess hits exactly once against a bijection.
        let constant = IdTable::new(vec![(2001, 1), (2002, 1), (2003, 1)]).unwrap();
        let s = reid_score(&truth, &constant).unwrap();
        assert!((s - (1.0 - 1.0 / 3.0)).abs() < 1e-15);
        // Missing pseudonym is an error.
        let missing = IdTable::new(vec![(2001, 2), (2002, 3), (2999, 1)]).unwrap();
        assert!(reid_score(&truth, &missing).is_err());
    }

    #[test]
    fn reid_score_relabel_invariance() {
        let truth = IdTable::new(vec![(11, 1), (12, 2), (13, 3)]).unwrap();
        let guess = IdTable::new(vec![(11, 2), (12, 2), (13, 3)]).unwrap();
        let base = reid_score(&truth, &guess).unwrap();
        // Relabel users 1->10, 2->20, 3->30 in both tables.
        let lift = |t: &IdTable| {
            IdTable::new(t.pairs().iter().map(|&(p, u)| (p, u * 10)).collect()).unwrap()
        };
        let s = reid_score(&lift(&truth), &lift(&guess)).unwrap();
        assert_eq!(base, s);
    }

    #[test]
    fn trace_score_examples() {
        let grid = Grid::contest_default();
        let params = ScoringParams::default();
        let original = set_of(vec![(1, vec![Cell::Single(x(1)), Cell::Single(x(1))])], 2);
        assert_eq!(
            trace_score(&original, &original, &params, &grid).unwrap().0,
            0.0
        );
        // Every distance at or above the cap scores 1.
        let far = set_of(
            vec![(1, vec![Cell::Single(x(32)), Cell::Single(x(1024))])],
            2,
        );
        let (s, _) = trace_score(&original, &far, &params, &grid).unwrap();
        assert_eq!(s, 1.0);
    }

    #[test]
    fn trace_score_two_event_hand_value() {
        // beta = 1000 m and 3000 m with lambda 2000: (0.5 + 1) / 2.
        let grid = Grid::new(64, 1, 1000.0, 1000.0).unwrap();
        let params = ScoringParams::default();
        let original = set_of(vec![(1, vec![Cell::Single(x(1)), Cell::Single(x(1))])], 2);
        let inferred = set_of(vec![(1, vec![Cell::Single(x(2)), Cell::Single(x(4))])], 2);
        let (s, ee) = trace_score(&original, &inferred, &params, &grid).unwrap();
        assert!((s - 0.75).abs() < 1e-15);
        assert!((ee - 2000.0).abs() < 1e-9);
    }

    #[test]
    fn trace_score_hospital_weighting() {
        let grid = Grid::new(64, 1, 1000.0, 1000.0).unwrap();
        let mut params = ScoringParams::default();
        params.hospitals.insert(x(1));
        // Original: hospital x1 then x10. Inferred 1000 m off each.
        let original = set_of(vec![(1, vec![Cell::Single(x(1)), Cell::Single(x(10))])], 2);
        let inferred = set_of(vec![(1, vec![Cell::Single(x(2)), Cell::Single(x(11))])], 2);
        let (s, ee) = trace_score(&original, &inferred, &params, &grid).unwrap();
        // Both g_t = 0.5; weights 10 and 1 leave the mean at 0.5.
        assert!((s - 0.5).abs() < 1e-15);
        assert!((ee - 1000.0).abs() < 1e-9);
        // Now only the hospital event is correct: weighted score is
        // 1 * 0 * 10/11 + 0.5 * 1/11.
        let inferred = set_of(vec![(1, vec![Cell::Single(x(1)), Cell::Single(x(11))])], 2);
        let (s, _) = trace_score(&original, &inferred, &params, &grid).unwrap();
        assert!((s - 0.5 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn unit_hospital_weight_equals_unweighted_mean() {
        let grid = Grid::contest_default();
        let mut params = ScoringParams::default();
        params.hospital_weight = 1.0;
        params.hospitals.extend([x(1), x(40)]);
        let original = set_of(
            vec![
                (1, vec![Cell::Single(x(1)), Cell::Single(x(40))]),
                (2, vec![Cell::Single(x(7)), Cell::Single(x(500))]),
            ],
            2,
        );
        let inferred = set_of(
            vec![
                (1, vec![Cell::Single(x(2)), Cell::Single(x(40))]),
                (2, vec![Cell::Single(x(1024)), Cell::Single(x(500))]),
            ],
            2,
        );
        let (s_t, _) = trace_score(&original, &inferred, &params, &grid).unwrap();
        let mut mean = 0.0;
        for (to, ti) in original.traces().iter().zip(inferred.traces()) {
            for (co, ci) in to.cells.iter().zip(&ti.cells) {
                let beta = grid
                    .distance(co.as_single().unwrap(), ci.as_single().unwrap())
                    .unwrap();
                mean += g_t(beta, params.lambda_t_m) / 4.0;
            }
        }
        assert!((s_t - mean).abs() < 1e-15);
    }

    #[test]
    fn aggregate_minima_and_awards() {
        let mk = |team, valid, benchmark, attacks: Vec<(usize, f64, f64)>| TeamScores {
            team,
            s_u: 0.9,
            valid,
            benchmark,
            attacks: attacks
                .into_iter()
                .map(|(a, s_r, s_t)| AttackRecord {
                    attacker_team: a,
                    method: "m".to_string(),
                    s_r,
                    s_t,
                    expected_error_m: 0.0,
                })
                .collect(),
        };
        // Single attacker: minima equal that attacker's scores.
        let solo = aggregate(&[mk(1, true, false, vec![(2, 0.4, 0.6)])]);
        assert_eq!(solo.teams[0].s_r_min, 0.4);
        assert_eq!(solo.teams[0].s_t_min, 0.6);

        // Adding an attacker never increases the minima.
        let duo = aggregate(&[mk(1, true, false, vec![(2, 0.4, 0.6), (3, 0.7, 0.2)])]);
        assert!(duo.teams[0].s_r_min <= solo.teams[0].s_r_min);
        assert_eq!(duo.teams[0].s_t_min, 0.2);

        // Invalid teams get zeros and cannot win.
        let contest = aggregate(&[
            mk(1, true, false, vec![(2, 0.9, 0.8), (3, 0.5, 0.7)]),
            mk(2, true, false, vec![(1, 0.3, 0.4), (3, 0.2, 0.5)]),
            mk(3, false, false, vec![]),
            mk(
                4,
                true,
                true,
                vec![(1, 0.1, 0.2), (2, 0.15, 0.1), (3, 0.05, 0.3)],
            ),
        ]);
        assert_eq!(contest.teams[2].s_r_min, 0.0);
        assert_eq!(contest.teams[2].s_t_min, 0.0);
        // Team 1 defends best on trace inference (0.7 vs 0.4).
        assert_eq!(contest.best_anonymization, Some(1));
        // Attacker sums (valid defended sets 1, 2, 4):
        //   re-id: t1: 0.3+0.1=0.4 over {2,4}; t3: 0.5+0.2+0.05=0.75; t2: 0.9+0.15=1.05
        assert_eq!(contest.best_reid_attacker, Some(1));
        // trace: t1: 0.4+0.2=0.6; t2: 0.8+0.1=0.9; t3: 0.7+0.5+0.3=1.5
        assert_eq!(contest.best_trace_attacker, Some(1));
    }

    #[test]
    fn scores_stay_in_unit_interval() {
        let grid = Grid::contest_default();
        let params = ScoringParams::default();
        let original = set_of(
            vec![
                (1, vec![Cell::Single(x(1)), Cell::Single(x(500))]),
                (2, vec![Cell::Single(x(1024)), Cell::Single(x(17))]),
            ],
            2,
        );
        let obfuscated = set_of(
            vec![
                (1, vec![Cell::Set(vec![x(1), x(1024)]), Cell::Deleted]),
                (2, vec![Cell::Single(x(1)), Cell::Single(x(17))]),
            ],
            2,
        );
        let s_u = utility_score(&original, &obfuscated, &params, &grid).unwrap();
        assert!((0.0..=1.0).contains(&s_u));
        let inferred = set_of(
            vec![
                (1, vec![Cell::Single(x(7)), Cell::Single(x(99))]),
                (2, vec![Cell::Single(x(1)), Cell::Single(x(17))]),
            ],
            2,
        );
        let (s_t, ee) = trace_score(&original, &inferred, &params, &grid).unwrap();
        assert!((0.0..=1.0).contains(&s_t));
        assert!(ee >= 0.0);
    }

    #[test]
    fn mismatched_inputs_rejected() {
        let grid = Grid::contest_default();
        let params = ScoringParams::default();
        let a = set_of(vec![(1, vec![Cell::Single(x(1))])], 1);
        let b = set_of(vec![(2, vec![Cell::Single(x(1))])], 1);
        assert!(utility_score(&a, &b, &params, &grid).is_err());
        let c = set_of(vec![(1, vec![Cell::Set(vec![x(1), x(2)])])], 1);
        assert!(trace_score(&a, &c, &params, &grid).is_err());
    }
}
