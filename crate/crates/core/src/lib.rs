//! Grammar-guided genetic programming where the grammar is a set of typed
//! node definitions.
//!
//! Non-terminals are abstract node kinds and productions are concrete node
//! kinds with typed fields. Register them in a [`Registry`], extract a
//! validated [`Grammar`], and evolve derivation trees (or GE codon strings
//! decoded through the same grammar) with [`evolve`]. Individual fields can
//! take over their own generation through a [`MetaHandler`].
//!
//! ```
//! use typegp::{Production, Registry, SymbolRef, Value};
//! use typegp::handlers::IntRange;
//!
//! let mut reg = Registry::<Value>::new();
//! reg.register_nonterminal("Expr")?;
//! reg.register_production(
//!     Production::<Value>::new("Lit", "Expr")
//!         .field("value", SymbolRef::annotated(SymbolRef::int(), IntRange::new(0, 9)?))
//!         .action(|args| Ok(args[0].clone())),
//! )?;
//! reg.register_production(
//!     Production::<Value>::new("Add", "Expr")
//!         .field("left", SymbolRef::nt("Expr"))
//!         .field("right", SymbolRef::nt("Expr"))
//!         .action(|args| Ok(Value::Int(args[0].as_int()? + args[1].as_int()?))),
//! )?;
//! let grammar = reg.extract_grammar("Expr")?;
//! assert_eq!(grammar.pretty_print_bnf(),
//!     "Expr ::= Lit(value:Annotated[integer, int_range(0, 9)]) | Add(left:Expr, right:Expr)\n");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod decision;
pub mod engine;
pub mod eval;
pub mod format;
pub mod ge;
pub mod generate;
pub mod grammar;
pub mod handlers;
pub mod par;
pub mod symbol;
pub mod tree;

pub use decision::{CodonSource, DecisionSource, RandomSource, ScriptedSource};
pub use engine::operators::{
    ge_crossover, ge_crossover_at, ge_mutation, tournament_select, tree_crossover, tree_mutation,
};
pub use engine::{
    evolve, Direction, EngineError, Evolution, GenerationRecord, Genome, GpConfig, Individual,
    Problem, Representation, RunStats,
};
pub use eval::{evaluate, EvalError, NodeValue, Value};
pub use ge::{map_genotype, Genotype, Mapped, MappingFailure};
pub use generate::{generate_tree, GenContext, GenerationError, GrammarView};
pub use grammar::{Field, Grammar, GrammarError, NonTerminal, Production, ProductionId, Registry};
pub use handlers::MetaHandler;
pub use symbol::{LeafKind, LeafValue, SymbolRef};
pub use tree::{check_tree, collect_sites, replace_subtree, Site, TreeNode};
