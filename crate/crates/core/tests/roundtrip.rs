//! Serialization invariants: write-then-read identity and canonical
//! byte output for the trace and ID-table CSV formats.

use proptest::collection::btree_map;
use proptest::prelude::*;

use tracebench_core::grid::{Grid, RegionId};
use tracebench_core::trace::{
    read_id_table_from, read_traces_from, write_id_table_to, write_traces_to, Cell, IdTable, Trace,
    TraceSet,
};

const DAYS: u32 = 2;
const SLOTS: u32 = 3;

fn grid() -> Grid {
    Grid::new(8, 8, 341.0, 347.0).unwrap()
}

fn arb_cell() -> impl Strategy<Value = Cell> {
    let region = (1u32..=64).prop_map(|id| RegionId::new(id).unwrap());
    prop_oneof![
        3 => region.clone().prop_map(Cell::Single),
        2 => proptest::collection::btree_set(1u32..=64, 2..=5).prop_map(|ids| {
            Cell::from_regions(ids.into_iter().map(|id| RegionId::new(id).unwrap()).collect())
        }),
        1 => Just(Cell::Deleted),
    ]
}

fn arb_trace_set() -> impl Strategy<Value = TraceSet> {
    btree_map(
        1u32..200,
        proptest::collection::vec(arb_cell(), (DAYS * SLOTS) as usize),
        1..6,
    )
    .prop_map(|per_owner| {
        let traces = per_owner
            .into_iter()
            .map(|(owner, cells)| Trace { owner, cells })
            .collect();
        TraceSet::new(traces, DAYS, SLOTS).unwrap()
    })
}

fn arb_id_table() -> impl Strategy<Value = IdTable> {
    btree_map(1u32..5000, 1u32..5000, 1..30)
        .prop_map(|pairs| IdTable::new(pairs.into_iter().collect()).unwrap())
}

proptest! {
    #[test]
    fn trace_csv_roundtrips(set in arb_trace_set()) {
        let mut buf = Vec::new();
        write_traces_to(&set, &mut buf, false).unwrap();
        // Anything written parses back to the same value.
        let back = read_traces_from(buf.as_slice(), "prop", DAYS, SLOTS, &grid()).unwrap();
        prop_assert_eq!(&back, &set);
        // Canonical: serializing the parsed value is byte-identical.
        let mut again = Vec::new();
        write_traces_to(&back, &mut again, false).unwrap();
        prop_assert_eq!(buf, again);
    }

    #[test]
    fn trace_csv_roundtrips_with_header(set in arb_trace_set()) {
        let mut buf = Vec::new();
        write_traces_to(&set, &mut buf, true).unwrap();
        let back = read_traces_from(buf.as_slice(), "prop", DAYS, SLOTS, &grid()).unwrap();
        prop_assert_eq!(back, set);
    }

    #[test]
    fn id_table_csv_roundtrips(table in arb_id_table()) {
        let mut buf = Vec::new();
        write_id_table_to(&table, &mut buf, false).unwrap();
        let back = read_id_table_from(buf.as_slice(), "prop").unwrap();
        prop_assert_eq!(&back, &table);
        let mut again = Vec::new();
        write_id_table_to(&back, &mut again, false).unwrap();
        prop_assert_eq!(buf, again);
    }

    #[test]
    fn set_cells_are_sorted_and_deduplicated(ids in proptest::collection::vec(1u32..=64, 1..8)) {
        let cell = Cell::from_regions(ids.iter().map(|&i| RegionId::new(i).unwrap()).collect());
        match cell {
            Cell::Single(r) => {
                prop_assert!(ids.iter().all(|&i| i == r.get()));
            }
            Cell::Set(rs) => {
                prop_assert!(rs.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(rs.len() >= 2);
            }
            Cell::Deleted => prop_assert!(ids.is_empty()),
        }
    }
}
