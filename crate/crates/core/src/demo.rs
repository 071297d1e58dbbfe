//! Scripted training population for desk-scale runs and tests.
//!
//! Real deployments train the synthesizer on mobility data in the
//! trace CSV format; this module fabricates a plausible stand-in: each
//! user has a home region, one of a handful of daytime activity zones,
//! and a personal errand cell, with mornings and evenings spent at
//! home. The population is deterministic in the seed.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::grid::Grid;
use crate::seed::stage_seed;
use crate::trace::{Cell, Trace, TraceSet};
use crate::{Error, Result};

/// Shape of the scripted population.
#[derive(Debug, Clone, Copy)]
pub struct DemoConfig {
    pub users: usize,
    pub days: u32,
    pub slots_per_day: u32,
    /// Distinct daytime activity zones.
    pub zones: usize,
    pub seed: u64,
}

impl Default for DemoConfig {
    fn default() -> Self {
        DemoConfig {
            users: 256,
            days: 10,
            slots_per_day: 20,
            zones: 6,
            seed: 7,
        }
    }
}

/// Generates the scripted training traces on `grid`.
pub fn training_traces(grid: &Grid, cfg: &DemoConfig) -> Result<TraceSet> {
    if cfg.users == 0 || cfg.zones == 0 {
        return Err(Error::Config(
            "demo population needs users and zones".to_string(),
        ));
    }
    if cfg.slots_per_day < 8 {
        return Err(Error::Config(
            "demo population needs at least 8 slots per day".to_string(),
        ));
    }
    let regions = grid.region_count() as usize;
    let w = grid.width();
    let h = grid.height();

    // Compact 2x2 activity zones spread over the grid interior.
    let zone_cells: Vec<Vec<u32>> = (0..cfg.zones)
        .map(|z| {
            let zx = (3 + (z as u32 * 7) % w.saturating_sub(4)) % (w - 1);
            let zy = (2 + (z as u32 * 5) % h.saturating_sub(4)) % (h - 1);
            let mut cells = Vec::with_capacity(4);
            for dy in 0..2 {
                for dx in 0..2 {
                    cells.push(grid.region_at(zx + dx, zy + dy).unwrap().get());
                }
            }
            cells
        })
        .collect();

    let spd = cfg.slots_per_day;
    let mut traces = Vec::with_capacity(cfg.users);
    for u in 0..cfg.users {
        let mut rng = StdRng::seed_from_u64(stage_seed(cfg.seed, "demo-user", &[u as u64]));
        // Homes stride across the whole grid so they rarely collide.
        let home = (u * 37 + 5) % regions;
        let zone = &zone_cells[u % cfg.zones];
        let mut cells = Vec::with_capacity((cfg.days * spd) as usize);
        for _day in 0..cfg.days {
            let mut current = home;
            for slot in 0..spd {
                if slot == 0 {
                    current = home;
                } else {
                    let roll = rng.random::<f64>();
                    if roll < 0.12 {
                        // Transit: cut across town through any zone, so
                        // zones stay mutually reachable.
                        let other = &zone_cells[rng.random_range(0..zone_cells.len())];
                        current = (other[rng.random_range(0..other.len())] - 1) as usize;
                    } else if !zone.contains(&(current as u32 + 1)) || roll > 0.75 {
                        current = (zone[rng.random_range(0..zone.len())] - 1) as usize;
                    }
                }
                cells.push(Cell::Single(crate::grid::RegionId::from_index(current)));
            }
        }
        traces.push(Trace {
            owner: u as u32 + 1,
            cells,
        });
    }
    TraceSet::new(traces, cfg.days, spd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn population_is_shaped_and_deterministic() {
        let grid = Grid::new(16, 16, 341.0, 347.0).unwrap();
        let cfg = DemoConfig {
            users: 40,
            days: 4,
            slots_per_day: 10,
            zones: 6,
            seed: 3,
        };
        let a = training_traces(&grid, &cfg).unwrap();
        let b = training_traces(&grid, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 40);
        assert_eq!(a.trace_len(), 40);
        assert!(a.all_single());
        // Every day starts at the same home region.
        for t in a.traces() {
            assert_eq!(t.cells[0], t.cells[10]);
            assert_eq!(t.cells[0], t.cells[20]);
            assert_eq!(t.cells[0], t.cells[30]);
        }
    }
}
