//! Depth-bounded tree generation.
//!
//! Starting from a symbol and a depth budget, a production is picked among
//! those whose min-depth fits the budget, and each field is filled in order
//! with the budget reduced by one. Annotated fields are handed to their
//! meta-handler. All choices come from a [`DecisionSource`], so the same code
//! serves random initialization and codon-driven genotype mapping.

use thiserror::Error;

use crate::decision::DecisionSource;
use crate::grammar::{Field, Grammar, ProductionId};
use crate::symbol::{LeafKind, LeafValue, SymbolRef};
use crate::tree::TreeNode;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerationError {
    #[error("depth budget {budget} is below the {required} needed for `{symbol}`")]
    BudgetTooSmall {
        symbol: String,
        budget: usize,
        required: usize,
    },
    #[error("unknown non-terminal `{0}`")]
    UnknownSymbol(String),
    #[error("{handler}: {message}")]
    Handler { handler: String, message: String },
}

/// Type-erased access to a grammar, as seen by meta-handlers and the
/// structural tree operations.
pub trait GrammarView {
    fn fields(&self, id: ProductionId) -> &[Field];
    /// Non-terminal implemented by `id`, or `None` if `id` is foreign.
    fn implements(&self, id: ProductionId) -> Option<&str>;
    fn lookup_production(&self, name: &str) -> Option<ProductionId>;
    fn symbol_min_depth(&self, symbol: &SymbolRef) -> Option<usize>;
    fn generate(
        &self,
        symbol: &SymbolRef,
        budget: usize,
        decisions: &mut dyn DecisionSource,
    ) -> Result<TreeNode, GenerationError>;
}

impl<V> GrammarView for Grammar<V> {
    fn fields(&self, id: ProductionId) -> &[Field] {
        &self.production(id).fields
    }

    fn implements(&self, id: ProductionId) -> Option<&str> {
        self.try_production(id).map(|p| p.implements.as_str())
    }

    fn lookup_production(&self, name: &str) -> Option<ProductionId> {
        self.production_id(name)
    }

    fn symbol_min_depth(&self, symbol: &SymbolRef) -> Option<usize> {
        self.min_depth(symbol)
    }

    fn generate(
        &self,
        symbol: &SymbolRef,
        budget: usize,
        decisions: &mut dyn DecisionSource,
    ) -> Result<TreeNode, GenerationError> {
        generate_tree(self, symbol, budget, decisions)
    }
}

/// What a meta-handler sees when asked to fill a field.
pub struct GenContext<'a> {
    grammar: &'a dyn GrammarView,
    base: &'a SymbolRef,
    budget: usize,
    decisions: &'a mut dyn DecisionSource,
}

impl<'a> GenContext<'a> {
    pub fn new(
        grammar: &'a dyn GrammarView,
        base: &'a SymbolRef,
        budget: usize,
        decisions: &'a mut dyn DecisionSource,
    ) -> Self {
        GenContext {
            grammar,
            base,
            budget,
            decisions,
        }
    }

    pub fn grammar(&self) -> &dyn GrammarView {
        self.grammar
    }

    /// The annotated field's type with the annotation stripped.
    pub fn base(&self) -> &SymbolRef {
        self.base
    }

    /// Maximum depth of the node the handler returns.
    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn decisions(&mut self) -> &mut dyn DecisionSource {
        &mut *self.decisions
    }

    /// Generates a subtree for `symbol` with the regular algorithm.
    pub fn recurse(
        &mut self,
        symbol: &SymbolRef,
        budget: usize,
    ) -> Result<TreeNode, GenerationError> {
        if budget >= self.budget {
            return Err(GenerationError::Handler {
                handler: "recurse".into(),
                message: format!(
                    "child budget {budget} must be below the site budget {}",
                    self.budget
                ),
            });
        }
        self.grammar.generate(symbol, budget, &mut *self.decisions)
    }
}

/// Generates a derivation of `symbol` whose depth does not exceed `budget`.
pub fn generate_tree<V>(
    grammar: &Grammar<V>,
    symbol: &SymbolRef,
    budget: usize,
    decisions: &mut dyn DecisionSource,
) -> Result<TreeNode, GenerationError> {
    let too_small = |required: usize| GenerationError::BudgetTooSmall {
        symbol: symbol.to_string(),
        budget,
        required,
    };
    match symbol {
        SymbolRef::NonTerminal(name) => {
            let nt = grammar
                .nonterminal(name)
                .ok_or_else(|| GenerationError::UnknownSymbol(name.clone()))?;
            let eligible: Vec<ProductionId> = nt
                .productions
                .iter()
                .copied()
                .filter(|&id| grammar.min_depth_production(id) <= budget)
                .collect();
            if eligible.is_empty() {
                return Err(too_small(
                    grammar.min_depth_nonterminal(name).unwrap_or(usize::MAX),
                ));
            }
            let weights: Vec<f64> = eligible
                .iter()
                .map(|&id| grammar.production(id).weight)
                .collect();
            let uniform = weights.iter().all(|w| *w == weights[0]);
            let pick =
                decisions.choose(eligible.len(), if uniform { None } else { Some(&weights) });
            let id = eligible[pick];
            let children = grammar
                .production(id)
                .fields
                .iter()
                .map(|field| generate_tree(grammar, &field.symbol, budget - 1, decisions))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(TreeNode::Production { id, children })
        }
        SymbolRef::Leaf(kind) => {
            if budget == 0 {
                return Err(too_small(1));
            }
            Ok(TreeNode::Leaf(default_leaf(*kind, decisions)))
        }
        SymbolRef::List(inner) => {
            if budget == 0 {
                return Err(too_small(1));
            }
            let len = if fits(grammar, inner, budget - 1) {
                decisions.choose(budget, None)
            } else {
                0
            };
            let items = (0..len)
                .map(|_| generate_tree(grammar, inner, budget - 1, decisions))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(TreeNode::List(items))
        }
        SymbolRef::Optional(inner) => {
            if budget == 0 {
                return Err(too_small(1));
            }
            if fits(grammar, inner, budget - 1) && decisions.choose(2, None) == 1 {
                let item = generate_tree(grammar, inner, budget - 1, decisions)?;
                Ok(TreeNode::Optional(Some(Box::new(item))))
            } else {
                Ok(TreeNode::Optional(None))
            }
        }
        SymbolRef::Annotated(base, handler) => {
            let required = grammar.min_depth(symbol).unwrap_or(usize::MAX);
            if budget < required {
                return Err(too_small(required));
            }
            let mut ctx = GenContext::new(grammar, base, budget, decisions);
            let node = handler.generate(&mut ctx)?;
            if node.depth() > budget {
                return Err(GenerationError::Handler {
                    handler: handler.describe(),
                    message: format!(
                        "returned a tree of depth {} for budget {budget}",
                        node.depth()
                    ),
                });
            }
            Ok(node)
        }
    }
}

fn fits<V>(grammar: &Grammar<V>, symbol: &SymbolRef, budget: usize) -> bool {
    grammar.min_depth(symbol).is_some_and(|d| d <= budget)
}

/// Native value generators used for un-annotated leaf fields.
///
/// Integers are uniform in `[-128, 128]`, reals uniform in `[-1, 1)`,
/// booleans a fair coin, and text up to 7 lowercase letters.
pub fn default_leaf(kind: LeafKind, decisions: &mut dyn DecisionSource) -> LeafValue {
    match kind {
        LeafKind::Integer => LeafValue::Int(decisions.choose(257, None) as i64 - 128),
        LeafKind::Real => LeafValue::Real(-1.0 + 2.0 * decisions.random_real()),
        LeafKind::Boolean => LeafValue::Bool(decisions.choose(2, None) == 1),
        LeafKind::Text => {
            let len = decisions.choose(8, None);
            let text = (0..len)
                .map(|_| (b'a' + decisions.choose(26, None) as u8) as char)
                .collect();
            LeafValue::Text(text)
        }
    }
}
