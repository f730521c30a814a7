//! Grammatical-evolution genotypes and their mapping to derivation trees.

use thiserror::Error;

use crate::decision::CodonSource;
use crate::generate::{generate_tree, GenerationError};
use crate::grammar::Grammar;
use crate::tree::TreeNode;

/// A variable-length codon string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Genotype {
    pub codons: Vec<u64>,
}

impl Genotype {
    pub fn new(codons: Vec<u64>) -> Self {
        Genotype { codons }
    }

    pub fn len(&self) -> usize {
        self.codons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codons.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MappingFailure {
    #[error("empty genotype")]
    Empty,
    #[error("ran out of codons after {wraps} wraps")]
    Exhausted { wraps: usize },
    #[error(transparent)]
    Generation(#[from] GenerationError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mapped {
    pub tree: TreeNode,
    pub used_codons: usize,
}

/// Decodes `genotype` into a derivation of the grammar's start symbol with
/// the modulo rule: every choice among `n` options consumes one codon `c` and
/// takes option `c mod n`. Production weights are ignored.
pub fn map_genotype<V>(
    grammar: &Grammar<V>,
    genotype: &Genotype,
    max_depth: usize,
    max_wraps: usize,
) -> Result<Mapped, MappingFailure> {
    if genotype.is_empty() {
        return Err(MappingFailure::Empty);
    }
    let mut source = CodonSource::new(&genotype.codons, max_wraps);
    let tree = generate_tree(grammar, &grammar.start_symbol(), max_depth, &mut source)?;
    if source.exhausted() {
        return Err(MappingFailure::Exhausted {
            wraps: source.wraps(),
        });
    }
    Ok(Mapped {
        tree,
        used_codons: source.used(),
    })
}
