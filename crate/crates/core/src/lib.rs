//! Core library for a location-trace anonymization contest bench:
//! synthetic trace generation with per-team diversity, obfuscation
//! mechanisms, re-identification and trace-inference attacks,
//! judge-side scoring, and utility analytics.

mod error;

pub mod analytics;
pub mod anonymize;
pub mod attack;
pub mod contest;
pub mod demo;
pub mod grid;
pub mod judge;
mod kmeans;
mod linalg;
pub mod seed;
pub mod synth;
pub mod trace;

pub use error::{Error, Result};
pub use grid::{Grid, RegionId};
pub use trace::{Cell, IdTable, Trace, TraceSet};
