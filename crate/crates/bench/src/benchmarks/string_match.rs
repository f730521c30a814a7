//! Evolve a string equal to a target text.

use typegp::handlers::{ListSizeBetween, VarRange};
use typegp::{
    Direction, EvalError, GpConfig, Grammar, Problem, Production, Registry, SymbolRef as S,
};

use crate::node::{one, Node};
use crate::spec::BenchmarkSpec;

pub type Value = Node<String>;

/// Cost of each character of length mismatch; larger than any single
/// character distance in the alphabet.
pub const LENGTH_PENALTY: f64 = 100.0;

pub struct StringMatch {
    target: Vec<char>,
}

impl StringMatch {
    pub fn new(target: &str) -> Self {
        StringMatch {
            target: target.chars().collect(),
        }
    }

    /// `-Σ |code difference|` over aligned positions minus the length penalty.
    pub fn score(&self, candidate: &str) -> f64 {
        let candidate: Vec<char> = candidate.chars().collect();
        let aligned: f64 = candidate
            .iter()
            .zip(&self.target)
            .map(|(a, b)| (*a as i64 - *b as i64).abs() as f64)
            .sum();
        let gap = candidate.len().abs_diff(self.target.len()) as f64;
        0.0 - (aligned + LENGTH_PENALTY * gap)
    }
}

impl Problem<Value> for StringMatch {
    fn fitness(&self, phenotype: &Value) -> f64 {
        match phenotype {
            Node::Expr(s) => self.score(s),
            _ => f64::NAN,
        }
    }

    fn direction(&self) -> Direction {
        Direction::Maximize
    }

    fn target_fitness(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// Space and the ASCII letters.
pub fn alphabet() -> impl Iterator<Item = String> {
    std::iter::once(b' ')
        .chain(b'A'..=b'Z')
        .chain(b'a'..=b'z')
        .map(|b| (b as char).to_string())
}

pub fn grammar(target_len: usize) -> Grammar<Value> {
    let chars = S::annotated(
        S::text(),
        VarRange::texts(alphabet()).expect("non-empty alphabet"),
    );
    let sized = ListSizeBetween::new(1, 2 * target_len.max(1)).expect("valid bounds");
    let mut reg = Registry::<Value>::new();
    reg.register_nonterminal("Candidate")
        .expect("fresh registry");
    reg.register_production(
        Production::<Value>::new("Guess", "Candidate")
            .field("chars", S::annotated(S::list(chars), sized))
            .action(|args| {
                let text = one(args)?
                    .into_list()?
                    .iter()
                    .map(|c| c.as_text().map(str::to_owned))
                    .collect::<Result<String, EvalError>>()?;
                Ok(Node::Expr(text))
            }),
    )
    .expect("fresh registry");
    reg.extract_grammar("Candidate")
        .expect("string_match grammar is valid")
}

/// # Panics
/// If `target` is empty.
pub fn spec(target: &str) -> BenchmarkSpec<Value, StringMatch> {
    assert!(!target.is_empty(), "string_match needs a non-empty target");
    BenchmarkSpec {
        name: "string_match",
        grammar: grammar(target.chars().count()),
        problem: StringMatch::new(target),
        // calibrated: uniform resampling of one site in 53 is the only way to
        // fix a character, so the last few need a higher mutation rate
        defaults: GpConfig {
            mutation_probability: 0.5,
            ..GpConfig::default()
        },
    }
}
