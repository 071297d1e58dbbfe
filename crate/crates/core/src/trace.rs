//! Trace and ID-table data model plus the CSV formats exchanged
//! between teams and the judge.
//!
//! Trace CSV: one event per row, `owner,day,slot,cell`, no header by
//! default. The cell column is a region ID, a `|`-joined ascending list
//! of region IDs (generalization), or `*` (deletion). ID-table CSV:
//! `pseudonym,user_id`. All files are UTF-8 with LF line endings and
//! are written in canonical order so equal values serialize to
//! identical bytes.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::grid::{Grid, RegionId};
use crate::{Error, Result};

pub type UserId = u32;
pub type Pseudonym = u32;

pub const TRACE_HEADER: &str = "owner,day,slot,cell";
pub const ID_TABLE_HEADER: &str = "pseudonym,user_id";

/// A day/slot position within a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeIndex {
    pub day: u32,
    pub slot: u32,
}

impl TimeIndex {
    pub fn flat(self, slots_per_day: u32) -> usize {
        (self.day * slots_per_day + self.slot) as usize
    }

    pub fn from_flat(j: usize, slots_per_day: u32) -> Self {
        TimeIndex {
            day: j as u32 / slots_per_day,
            slot: j as u32 % slots_per_day,
        }
    }
}

/// One obfuscated location event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Single(RegionId),
    /// At least two distinct regions, kept sorted ascending.
    Set(Vec<RegionId>),
    Deleted,
}

impl Cell {
    /// Normalizing constructor: deduplicates and sorts, collapses a
    /// one-element list to `Single` and an empty list to `Deleted`.
    pub fn from_regions(mut regions: Vec<RegionId>) -> Cell {
        regions.sort_unstable();
        regions.dedup();
        match regions.len() {
            0 => Cell::Deleted,
            1 => Cell::Single(regions[0]),
            _ => Cell::Set(regions),
        }
    }

    pub fn is_single(&self) -> bool {
        matches!(self, Cell::Single(_))
    }

    pub fn as_single(&self) -> Option<RegionId> {
        match self {
            Cell::Single(r) => Some(*r),
            _ => None,
        }
    }
}

/// One user's (or pseudonym's) time-ordered event sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub owner: u32,
    pub cells: Vec<Cell>,
}

/// A set of traces with a common shape, sorted by owner.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSet {
    traces: Vec<Trace>,
    days: u32,
    slots_per_day: u32,
}

impl TraceSet {
    pub fn new(mut traces: Vec<Trace>, days: u32, slots_per_day: u32) -> Result<Self> {
        if days == 0 || slots_per_day == 0 {
            return Err(Error::Config(format!(
                "trace shape must be positive, got {days} days x {slots_per_day} slots"
            )));
        }
        let len = (days * slots_per_day) as usize;
        traces.sort_by_key(|t| t.owner);
        for pair in traces.windows(2) {
            if pair[0].owner == pair[1].owner {
                return Err(Error::Config(format!(
                    "duplicate owner {} in trace set",
                    pair[0].owner
                )));
            }
        }
        for t in &traces {
            if t.cells.len() != len {
                return Err(Error::Config(format!(
                    "trace of owner {} has {} cells, expected {}",
                    t.owner,
                    t.cells.len(),
                    len
                )));
            }
        }
        Ok(TraceSet {
            traces,
            days,
            slots_per_day,
        })
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn days(&self) -> u32 {
        self.days
    }

    pub fn slots_per_day(&self) -> u32 {
        self.slots_per_day
    }

    /// Events per trace.
    pub fn trace_len(&self) -> usize {
        (self.days * self.slots_per_day) as usize
    }

    /// Slot-of-day of flat index `j`.
    pub fn slot_of(&self, j: usize) -> u32 {
        j as u32 % self.slots_per_day
    }

    pub fn traces(&self) -> &[Trace] {
        &self.traces
    }

    pub fn owners(&self) -> impl Iterator<Item = u32> + '_ {
        self.traces.iter().map(|t| t.owner)
    }

    pub fn get(&self, owner: u32) -> Option<&Trace> {
        self.traces
            .binary_search_by_key(&owner, |t| t.owner)
            .ok()
            .map(|i| &self.traces[i])
    }

    /// True when every cell is `Single`, as required of original,
    /// reference, and inferred trace sets.
    pub fn all_single(&self) -> bool {
        self.traces
            .iter()
            .all(|t| t.cells.iter().all(Cell::is_single))
    }

    /// Replaces the traces wholesale, keeping the shape. Used by
    /// stages that permute or rewrite cells.
    pub fn with_traces(&self, traces: Vec<Trace>) -> Result<TraceSet> {
        TraceSet::new(traces, self.days, self.slots_per_day)
    }
}

/// Pseudonym-to-user mapping. Judge-produced tables are bijections;
/// attacker guesses may repeat user IDs but cover each pseudonym once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdTable {
    pairs: Vec<(Pseudonym, UserId)>,
}

impl IdTable {
    pub fn new(mut pairs: Vec<(Pseudonym, UserId)>) -> Result<Self> {
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Config(format!(
                    "pseudonym {} appears more than once in id table",
                    w[0].0
                )));
            }
        }
        Ok(IdTable { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(Pseudonym, UserId)] {
        &self.pairs
    }

    pub fn user_for(&self, pseudonym: Pseudonym) -> Option<UserId> {
        self.pairs
            .binary_search_by_key(&pseudonym, |p| p.0)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    /// Checks the ground-truth invariant: user IDs all distinct and
    /// pseudonyms exactly the contiguous block `m+1..=2m`.
    pub fn validate_bijection(&self) -> Result<()> {
        let m = self.pairs.len() as u32;
        let mut users: Vec<UserId> = self.pairs.iter().map(|p| p.1).collect();
        users.sort_unstable();
        users.dedup();
        if users.len() != self.pairs.len() {
            return Err(Error::Config(
                "ground-truth id table repeats a user id".to_string(),
            ));
        }
        for (i, &(pseud, _)) in self.pairs.iter().enumerate() {
            let expect = m + 1 + i as u32;
            if pseud != expect {
                return Err(Error::Config(format!(
                    "ground-truth pseudonyms must be {}..={}, found {}",
                    m + 1,
                    2 * m,
                    pseud
                )));
            }
        }
        Ok(())
    }
}

fn format_cell(cell: &Cell) -> String {
    match cell {
        Cell::Single(r) => r.get().to_string(),
        Cell::Set(rs) => {
            let parts: Vec<String> = rs.iter().map(|r| r.get().to_string()).collect();
            parts.join("|")
        }
        Cell::Deleted => "*".to_string(),
    }
}

fn parse_cell(field: &str, grid: &Grid, source: &str, line: usize) -> Result<Cell> {
    if field == "*" {
        return Ok(Cell::Deleted);
    }
    let mut regions = Vec::new();
    for part in field.split('|') {
        let id: u32 = part
            .trim()
            .parse()
            .map_err(|_| Error::parse(source, line, format!("bad region id {part:?}")))?;
        let r = RegionId::new(id)
            .map_err(|_| Error::parse(source, line, "region id must be at least 1"))?;
        grid.check(r).map_err(|_| {
            Error::parse(
                source,
                line,
                format!(
                    "region id {id} out of range (grid has {})",
                    grid.region_count()
                ),
            )
        })?;
        regions.push(r);
    }
    if regions.is_empty() {
        return Err(Error::parse(source, line, "empty cell"));
    }
    Ok(Cell::from_regions(regions))
}

/// Writes a trace set in canonical order: owners ascending, then flat
/// time index ascending, sets `|`-joined ascending.
pub fn write_traces_to<W: Write>(set: &TraceSet, mut w: W, header: bool) -> Result<()> {
    if header {
        writeln!(w, "{TRACE_HEADER}")?;
    }
    let spd = set.slots_per_day();
    for t in set.traces() {
        for (j, cell) in t.cells.iter().enumerate() {
            let ti = TimeIndex::from_flat(j, spd);
            writeln!(
                w,
                "{},{},{},{}",
                t.owner,
                ti.day,
                ti.slot,
                format_cell(cell)
            )?;
        }
    }
    Ok(())
}

pub fn write_traces(set: &TraceSet, path: &Path) -> Result<()> {
    write_traces_opts(set, path, false)
}

pub fn write_traces_opts(set: &TraceSet, path: &Path, header: bool) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_traces_to(set, &mut w, header)?;
    w.flush()?;
    Ok(())
}

/// Reads a trace set of known shape, rejecting out-of-range regions,
/// duplicate events, and incomplete traces. Rows may arrive in any
/// order; a leading canonical header line is skipped.
pub fn read_traces_from<R: BufRead>(
    r: R,
    source: &str,
    days: u32,
    slots_per_day: u32,
    grid: &Grid,
) -> Result<TraceSet> {
    let len = (days * slots_per_day) as usize;
    let mut cells: BTreeMap<u32, Vec<Option<Cell>>> = BTreeMap::new();
    for (ix, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = ix + 1;
        let row = line.trim_end_matches(['\r', '\n']);
        if row.is_empty() || (lineno == 1 && row == TRACE_HEADER) {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                source,
                lineno,
                format!("expected 4 fields, got {}", fields.len()),
            ));
        }
        let owner: u32 = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::parse(source, lineno, format!("bad owner {:?}", fields[0])))?;
        let day: u32 = fields[1]
            .trim()
            .parse()
            .map_err(|_| Error::parse(source, lineno, format!("bad day {:?}", fields[1])))?;
        let slot: u32 = fields[2]
            .trim()
            .parse()
            .map_err(|_| Error::parse(source, lineno, format!("bad slot {:?}", fields[2])))?;
        if day >= days {
            return Err(Error::parse(
                source,
                lineno,
                format!("day {day} out of range (expected 0..{days})"),
            ));
        }
        if slot >= slots_per_day {
            return Err(Error::parse(
                source,
                lineno,
                format!("slot {slot} out of range (expected 0..{slots_per_day})"),
            ));
        }
        let cell = parse_cell(fields[3].trim(), grid, source, lineno)?;
        let j = TimeIndex { day, slot }.flat(slots_per_day);
        let slots = cells.entry(owner).or_insert_with(|| vec![None; len]);
        if slots[j].is_some() {
            return Err(Error::parse(
                source,
                lineno,
                format!("duplicate event for owner {owner} at day {day} slot {slot}"),
            ));
        }
        slots[j] = Some(cell);
    }
    if cells.is_empty() {
        return Err(Error::parse(source, 0, "no trace rows found"));
    }
    let mut traces = Vec::with_capacity(cells.len());
    for (owner, slots) in cells {
        let mut out = Vec::with_capacity(len);
        for (j, c) in slots.into_iter().enumerate() {
            match c {
                Some(c) => out.push(c),
                None => {
                    let ti = TimeIndex::from_flat(j, slots_per_day);
                    return Err(Error::parse(
                        source,
                        0,
                        format!(
                            "owner {owner} is missing the event at day {} slot {}",
                            ti.day, ti.slot
                        ),
                    ));
                }
            }
        }
        traces.push(Trace { owner, cells: out });
    }
    TraceSet::new(traces, days, slots_per_day)
}

pub fn read_traces(path: &Path, days: u32, slots_per_day: u32, grid: &Grid) -> Result<TraceSet> {
    let f = File::open(path)?;
    read_traces_from(
        BufReader::new(f),
        &path.display().to_string(),
        days,
        slots_per_day,
        grid,
    )
}

/// Reads a trace set whose day count is not known up front: the shape
/// is taken from the largest day index present, then validated for
/// completeness as usual.
pub fn read_traces_infer_days(path: &Path, slots_per_day: u32, grid: &Grid) -> Result<TraceSet> {
    let source = path.display().to_string();
    let f = File::open(path)?;
    let mut max_day = 0u32;
    let mut any = false;
    for line in BufReader::new(f).lines() {
        let line = line?;
        let row = line.trim_end_matches(['\r', '\n']);
        if row.is_empty() || row == TRACE_HEADER {
            continue;
        }
        if let Some(field) = row.split(',').nth(1) {
            if let Ok(day) = field.trim().parse::<u32>() {
                max_day = max_day.max(day);
                any = true;
            }
        }
    }
    if !any {
        return Err(Error::parse(&source, 0, "no trace rows found"));
    }
    read_traces(path, max_day + 1, slots_per_day, grid)
}

pub fn write_id_table_to<W: Write>(table: &IdTable, mut w: W, header: bool) -> Result<()> {
    if header {
        writeln!(w, "{ID_TABLE_HEADER}")?;
    }
    for &(pseud, user) in table.pairs() {
        writeln!(w, "{pseud},{user}")?;
    }
    Ok(())
}

pub fn write_id_table(table: &IdTable, path: &Path) -> Result<()> {
    write_id_table_opts(table, path, false)
}

pub fn write_id_table_opts(table: &IdTable, path: &Path, header: bool) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_id_table_to(table, &mut w, header)?;
    w.flush()?;
    Ok(())
}

pub fn read_id_table_from<R: BufRead>(r: R, source: &str) -> Result<IdTable> {
    let mut pairs = Vec::new();
    for (ix, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = ix + 1;
        let row = line.trim_end_matches(['\r', '\n']);
        if row.is_empty() || (lineno == 1 && row == ID_TABLE_HEADER) {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 2 {
            return Err(Error::parse(
                source,
                lineno,
                format!("expected 2 fields, got {}", fields.len()),
            ));
        }
        let pseud: u32 = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::parse(source, lineno, format!("bad pseudonym {:?}", fields[0])))?;
        let user: u32 = fields[1]
            .trim()
            .parse()
            .map_err(|_| Error::parse(source, lineno, format!("bad user id {:?}", fields[1])))?;
        pairs.push((pseud, user));
    }
    let n = pairs.len();
    IdTable::new(pairs)
        .map_err(|_| Error::parse(source, 0, format!("duplicate pseudonym among {n} rows")))
}

pub fn read_id_table(path: &Path) -> Result<IdTable> {
    let f = File::open(path)?;
    read_id_table_from(BufReader::new(f), &path.display().to_string())
}

/// Reads a judge-side table and enforces the bijection invariant.
pub fn read_ground_truth_table(path: &Path) -> Result<IdTable> {
    let table = read_id_table(path)?;
    table.validate_bijection()?;
    Ok(table)
}
