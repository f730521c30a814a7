//! Benchmark problems and the command-line harness for `typegp`.
//!
//! Five problems ship with the crate: `string_match`, `regression`,
//! `classification`, `vectorialgp` and `game_of_life`. Each is a
//! [`BenchmarkSpec`]: a grammar whose productions build a small expression
//! type, a fitness function over that expression, and default run settings.

pub mod benchmarks;
pub mod cli;
pub mod dataset;
pub mod node;
pub mod output;
pub mod spec;

pub use benchmarks::{build, Inputs, NAMES};
pub use spec::{Benchmark, BenchmarkSpec, Outcome};
