//! The `typegp-bench` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::builder::PossibleValuesParser;
use clap::{Parser, ValueEnum};
use typegp::format::fmt_real;
use typegp::{EngineError, GpConfig, Representation};

use crate::benchmarks::{self, Inputs, NAMES};
use crate::dataset::Dataset;
use crate::output::write_stats;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Repr {
    Tree,
    Ge,
}

/// Run one grammar-guided GP benchmark and write per-generation statistics
/// as CSV.
#[derive(Debug, Parser)]
#[command(name = "typegp-bench", version)]
pub struct Args {
    #[arg(long, value_parser = PossibleValuesParser::new(NAMES))]
    pub benchmark: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Population size [default: 200]
    #[arg(long)]
    pub population: Option<usize>,
    /// Maximum tree depth [default: 10]
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Generations after the initial one [default: 50]
    #[arg(long)]
    pub generations: Option<usize>,
    /// Wall-clock budget in seconds; replaces the generation limit
    #[arg(long)]
    pub time_budget: Option<f64>,
    /// Genome representation [default: tree]
    #[arg(long, value_enum)]
    pub representation: Option<Repr>,
    /// [default: 0.9]
    #[arg(long)]
    pub crossover_prob: Option<f64>,
    /// [default: 0.1]
    #[arg(long)]
    pub mutation_prob: Option<f64>,
    /// Tournament size [default: 5]
    #[arg(long)]
    pub tournament: Option<usize>,
    /// Elites copied unchanged into each generation [default: 1]
    #[arg(long)]
    pub elitism: Option<usize>,
    /// Fresh random individuals per generation [default: 0]
    #[arg(long)]
    pub novelty: Option<usize>,
    /// Initial codon count for the GE representation [default: 100]
    #[arg(long)]
    pub codons: Option<usize>,
    /// Genotype wraps allowed when mapping GE genomes [default: 2]
    #[arg(long)]
    pub wraps: Option<usize>,
    /// Worker threads for fitness evaluation (results do not depend on it)
    #[arg(long, default_value_t = 1)]
    pub parallel_eval: usize,
    /// Target text for string_match [default: Hello]
    #[arg(long)]
    pub target: Option<String>,
    /// Dataset file for classification or vectorialgp
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// CSV output path; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write elapsed seconds as 0 so repeated runs give identical files
    #[arg(long)]
    pub no_timing: bool,
    /// Print the benchmark grammar and exit
    #[arg(long)]
    pub dump_grammar: bool,
}

impl Args {
    pub fn config(&self, defaults: GpConfig) -> GpConfig {
        let mut c = defaults;
        let set = |slot: &mut usize, v: Option<usize>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut c.population_size, self.population);
        set(&mut c.max_depth, self.max_depth);
        set(&mut c.tournament_size, self.tournament);
        set(&mut c.elitism_count, self.elitism);
        set(&mut c.novelty_count, self.novelty);
        set(&mut c.ge_codon_count_init, self.codons);
        set(&mut c.ge_max_wraps, self.wraps);
        if let Some(g) = self.generations {
            c.max_generations = Some(g);
        }
        if let Some(t) = self.time_budget {
            c.time_budget_seconds = Some(t);
            c.max_generations = None;
        }
        if let Some(r) = self.representation {
            c.representation = match r {
                Repr::Tree => Representation::Tree,
                Repr::Ge => Representation::Ge,
            };
        }
        if let Some(p) = self.crossover_prob {
            c.crossover_probability = p;
        }
        if let Some(p) = self.mutation_prob {
            c.mutation_probability = p;
        }
        c.seed = self.seed;
        c.parallel_eval = self.parallel_eval;
        c
    }

    fn metadata(&self, c: &GpConfig) -> Vec<(String, String)> {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "none".into());
        let mut m = vec![
            (
                "typegp-bench".to_string(),
                env!("CARGO_PKG_VERSION").to_string(),
            ),
            ("benchmark".into(), self.benchmark.clone()),
            ("seed".into(), c.seed.to_string()),
            ("population".into(), c.population_size.to_string()),
            ("max_depth".into(), c.max_depth.to_string()),
            (
                "generations".into(),
                opt(c.max_generations.map(|g| g.to_string())),
            ),
            (
                "time_budget_seconds".into(),
                opt(c.time_budget_seconds.map(fmt_real)),
            ),
            (
                "representation".into(),
                format!("{:?}", c.representation).to_lowercase(),
            ),
            ("crossover_prob".into(), fmt_real(c.crossover_probability)),
            ("mutation_prob".into(), fmt_real(c.mutation_probability)),
            ("tournament".into(), c.tournament_size.to_string()),
            ("elitism".into(), c.elitism_count.to_string()),
            ("novelty".into(), c.novelty_count.to_string()),
        ];
        if c.representation == Representation::Ge {
            m.push(("ge_codons".into(), c.ge_codon_count_init.to_string()));
            m.push(("ge_max_wraps".into(), c.ge_max_wraps.to_string()));
        }
        if let Some(t) = &self.target {
            m.push(("target".into(), format!("{t:?}")));
        }
        if let Some(d) = &self.dataset {
            m.push(("dataset".into(), d.display().to_string()));
        }
        m
    }
}

/// Parses `argv` (program name first) and runs; returns the exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    run(&args, out, err)
}

pub fn run(args: &Args, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let fail = |err: &mut dyn Write, code: i32, msg: String| {
        let _ = writeln!(err, "error: {msg}");
        code
    };
    let dataset = match &args.dataset {
        Some(path) => match Dataset::load(path) {
            Ok(d) => Some(d),
            Err(e) => return fail(err, EXIT_CONFIG, e.to_string()),
        },
        None => None,
    };
    let bench = match benchmarks::build(
        &args.benchmark,
        Inputs {
            target: args.target.clone(),
            dataset,
        },
    ) {
        Ok(b) => b,
        Err(e) => return fail(err, EXIT_CONFIG, e.to_string()),
    };
    if args.dump_grammar {
        return match out.write_all(bench.bnf().as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => fail(err, EXIT_RUNTIME, e.to_string()),
        };
    }

    let config = args.config(bench.defaults());
    let outcome = match bench.run(config.clone()) {
        Ok(o) => o,
        Err(EngineError::Config(msg)) => return fail(err, EXIT_CONFIG, msg),
        Err(e) => return fail(err, EXIT_RUNTIME, e.to_string()),
    };

    let metadata = args.metadata(&config);
    let written = match &args.out {
        Some(path) => File::create(path)
            .and_then(|f| {
                write_stats(
                    BufWriter::new(f),
                    &metadata,
                    &outcome.stats,
                    !args.no_timing,
                )
            })
            .and_then(|()| {
                writeln!(out, "generations: {}", outcome.stats.records.len() - 1)?;
                writeln!(out, "best fitness: {}", fmt_real(outcome.best_fitness))?;
                writeln!(out, "best tree: {}", outcome.best_tree)
            })
            .map_err(|e| format!("{}: {e}", path.display())),
        None => write_stats(&mut *out, &metadata, &outcome.stats, !args.no_timing)
            .map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(msg) => fail(err, EXIT_RUNTIME, msg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("typegp-bench").chain(args.iter().copied());
        let code = run_cli(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn defaults_match_the_engine_defaults() {
        let args = Args::try_parse_from(["x", "--benchmark", "regression"]).unwrap();
        assert_eq!(args.config(GpConfig::default()), GpConfig::default());
        let c = GpConfig::default();
        assert_eq!(
            (c.population_size, c.max_depth, c.max_generations),
            (200, 10, Some(50))
        );
        assert_eq!(
            (c.crossover_probability, c.mutation_probability),
            (0.9, 0.1)
        );
        assert_eq!(
            (c.tournament_size, c.elitism_count, c.novelty_count),
            (5, 1, 0)
        );
    }

    #[test]
    fn time_budget_replaces_generations() {
        let args = Args::try_parse_from([
            "x",
            "--benchmark",
            "regression",
            "--generations",
            "3",
            "--time-budget",
            "2",
        ])
        .unwrap();
        let c = args.config(GpConfig::default());
        assert_eq!(
            (c.max_generations, c.time_budget_seconds),
            (None, Some(2.0))
        );
    }

    #[test]
    fn exit_codes() {
        let (code, out, _) = cli(&["--benchmark", "vectorialgp", "--dump-grammar"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("Real ::= FloatLiteral(value:real) | "));
        assert_eq!(cli(&["--benchmark", "nope"]).0, 2);
        assert_eq!(cli(&["--benchmark", "regression", "--bogus"]).0, 2);
        assert_eq!(cli(&[]).0, 2);
        assert_eq!(cli(&["--help"]).0, 0);
        let (code, _, err) = cli(&["--benchmark", "regression", "--elitism", "300"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error: "));
        assert_eq!(
            cli(&["--benchmark", "regression", "--dataset", "/nonexistent.csv"]).0,
            2
        );
    }

    #[test]
    fn csv_on_stdout() {
        let (code, out, _) = cli(&[
            "--benchmark",
            "game_of_life",
            "--population",
            "20",
            "--generations",
            "2",
            "--no-timing",
        ]);
        assert_eq!(code, 0);
        assert!(out.starts_with("# typegp-bench: "));
        assert!(out.contains("\ngeneration,best_fitness,mean_fitness,elapsed_seconds,best_tree\n"));
    }
}
