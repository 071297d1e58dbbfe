//! Writes the scripted demo training population plus a matching
//! hospital list, ready for the `contest` subcommand:
//!
//! ```text
//! cargo run --release -p tracebench-core --example gen_training -- fixtures
//! ```

use std::path::PathBuf;

use tracebench_core::demo::{self, DemoConfig};
use tracebench_core::grid::Grid;
use tracebench_core::trace::{self, Cell};

fn main() {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("fixtures"));
    std::fs::create_dir_all(&out_dir).expect("create output directory");

    let grid = Grid::new(16, 16, 341.0, 347.0).unwrap();
    let cfg = DemoConfig::default();
    let training = demo::training_traces(&grid, &cfg).unwrap();
    let training_path = out_dir.join("training.csv");
    trace::write_traces(&training, &training_path).unwrap();

    // Mark the two busiest regions as hospitals.
    let mut counts = vec![0usize; grid.region_count() as usize];
    for t in training.traces() {
        for c in &t.cells {
            if let Cell::Single(r) = c {
                counts[r.index()] += 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    let hospitals: Vec<String> = order[..2].iter().map(|i| (i + 1).to_string()).collect();
    let hospitals_path = out_dir.join("hospitals.txt");
    std::fs::write(&hospitals_path, format!("{}\n", hospitals.join("\n"))).unwrap();

    println!(
        "wrote {} ({} users x {} events) and {}",
        training_path.display(),
        training.len(),
        training.trace_len(),
        hospitals_path.display()
    );
}
