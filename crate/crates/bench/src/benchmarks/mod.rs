pub mod classification;
pub mod game_of_life;
pub mod regression;
pub mod string_match;
pub mod vectorialgp;

use crate::dataset::{Dataset, DatasetError};
use crate::spec::Benchmark;

pub const NAMES: [&str; 5] = [
    "string_match",
    "regression",
    "classification",
    "vectorialgp",
    "game_of_life",
];

pub const DEFAULT_TARGET: &str = "Hello";

/// Inputs some benchmarks accept in place of their built-in data.
#[derive(Debug, Clone, Default)]
pub struct Inputs {
    /// Target text for `string_match`.
    pub target: Option<String>,
    /// Dataset for `classification` and `vectorialgp`.
    pub dataset: Option<Dataset>,
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("unknown benchmark {0:?}")]
    Unknown(String),
    #[error("string_match needs a non-empty target")]
    EmptyTarget,
    #[error("{0} does not take a dataset")]
    UnexpectedDataset(&'static str),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

pub fn build(name: &str, inputs: Inputs) -> Result<Box<dyn Benchmark>, BuildError> {
    let no_dataset = |name: &'static str| match inputs.dataset {
        Some(_) => Err(BuildError::UnexpectedDataset(name)),
        None => Ok(()),
    };
    Ok(match name {
        "string_match" => {
            no_dataset("string_match")?;
            let target = inputs.target.as_deref().unwrap_or(DEFAULT_TARGET);
            if target.is_empty() {
                return Err(BuildError::EmptyTarget);
            }
            Box::new(string_match::spec(target))
        }
        "regression" => {
            no_dataset("regression")?;
            Box::new(regression::spec())
        }
        "classification" => Box::new(classification::spec(inputs.dataset.as_ref())?),
        "vectorialgp" => Box::new(vectorialgp::spec(inputs.dataset)?),
        "game_of_life" => {
            no_dataset("game_of_life")?;
            Box::new(game_of_life::spec())
        }
        other => return Err(BuildError::Unknown(other.to_string())),
    })
}

/// Every benchmark with its built-in inputs.
pub fn all() -> Vec<Box<dyn Benchmark>> {
    NAMES
        .iter()
        .map(|n| build(n, Inputs::default()).expect("built-in benchmarks construct"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_builds() {
        for (b, name) in all().iter().zip(NAMES) {
            assert_eq!(b.name(), name);
            assert!(!b.bnf().is_empty());
        }
        assert!(matches!(
            build("nope", Inputs::default()),
            Err(BuildError::Unknown(_))
        ));
        let empty = Inputs {
            target: Some(String::new()),
            dataset: None,
        };
        assert!(matches!(
            build("string_match", empty),
            Err(BuildError::EmptyTarget)
        ));
        let data = Inputs {
            target: None,
            dataset: Some(Dataset::parse("1,2\n").unwrap()),
        };
        assert!(matches!(
            build("regression", data),
            Err(BuildError::UnexpectedDataset(_))
        ));
    }
}
