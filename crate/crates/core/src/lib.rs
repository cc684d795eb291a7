//! Simulation and complexity analysis of elementary cellular automata.
//!
//! The crate evolves cyclic binary cell arrays under any of the 256
//! elementary rules, measures the LZ78 phrase complexity of configurations
//! (whole rows, sections, or arbitrary windows), locates the periodic
//! background ("ether") of a rule, and interprets cyclic tag systems for
//! semantic cross-checks against rule 110 emulations.
//!
//! The crate is `no_std` (with `alloc`); all file formats, CSV/SVG output,
//! and parallel drivers live in the companion `ecalab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod config;
pub mod cts;
pub mod evolve;
pub mod lz78;
pub mod rule;

pub use analysis::{ComplexitySeries, DropEvent, EtherTile, Region};
pub use config::Configuration;
pub use evolve::{evolve, step, EvolveError, SpacetimeRecording};
pub use rule::RuleTable;
