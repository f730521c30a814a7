//! Node-kind registration and grammar extraction.
//!
//! A non-terminal is an abstract node kind; each production is a concrete node
//! kind that implements exactly one non-terminal and carries an ordered list
//! of typed fields. [`Registry::extract_grammar`] turns the registered kinds
//! into a validated [`Grammar`] with min-depth and recursion tables attached.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::eval::{EvalError, SemanticAction, Value};
use crate::symbol::SymbolRef;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrammarError {
    #[error("`{0}` is already registered")]
    DuplicateName(String),
    #[error("production `{production}` declares field `{field}` more than once")]
    DuplicateField { production: String, field: String },
    #[error("production `{production}` has weight {weight}; weights must be finite and positive")]
    InvalidWeight { production: String, weight: f64 },
    #[error("start symbol `{0}` is not a registered non-terminal")]
    UnknownStart(String),
    #[error("production `{production}` refers to unknown non-terminal `{name}`")]
    UnresolvedSymbol { production: String, name: String },
    #[error("field `{production}.{field}` stacks more than one meta-handler")]
    NestedAnnotation { production: String, field: String },
    #[error("non-terminal `{0}` has no productions")]
    NoProductions(String),
    #[error("no finite derivation exists for: {}", .0.join(", "))]
    NonProductive(Vec<String>),
    #[error("field `{production}.{field}`: {message}")]
    Handler {
        production: String,
        field: String,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductionId(usize);

impl ProductionId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub name: String,
    pub symbol: SymbolRef,
}

/// A concrete node kind.
pub struct Production<V = Value> {
    pub name: String,
    pub implements: String,
    pub fields: Vec<Field>,
    pub weight: f64,
    pub action: Option<SemanticAction<V>>,
}

impl<V> Production<V> {
    pub fn new(name: impl Into<String>, implements: impl Into<String>) -> Self {
        Production {
            name: name.into(),
            implements: implements.into(),
            fields: Vec::new(),
            weight: 1.0,
            action: None,
        }
    }

    pub fn field(mut self, name: impl Into<String>, symbol: SymbolRef) -> Self {
        self.fields.push(Field {
            name: name.into(),
            symbol,
        });
        self
    }

    pub fn weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    pub fn action<F>(mut self, action: F) -> Self
    where
        F: Fn(Vec<V>) -> Result<V, EvalError> + Send + Sync + 'static,
    {
        self.action = Some(std::sync::Arc::new(action));
        self
    }
}

impl<V> Clone for Production<V> {
    fn clone(&self) -> Self {
        Production {
            name: self.name.clone(),
            implements: self.implements.clone(),
            fields: self.fields.clone(),
            weight: self.weight,
            action: self.action.clone(),
        }
    }
}

impl<V> fmt::Debug for Production<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Production")
            .field("name", &self.name)
            .field("implements", &self.implements)
            .field("fields", &self.fields)
            .field("weight", &self.weight)
            .field("action", &self.action.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonTerminal {
    pub name: String,
    pub productions: Vec<ProductionId>,
}

/// Collects node-kind definitions. Nothing is validated beyond name and field
/// uniqueness until [`Registry::extract_grammar`].
pub struct Registry<V = Value> {
    nonterminals: Vec<String>,
    productions: Vec<Production<V>>,
    names: HashSet<String>,
}

impl<V> fmt::Debug for Registry<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("nonterminals", &self.nonterminals)
            .field("productions", &self.productions)
            .finish()
    }
}

impl<V> Default for Registry<V> {
    fn default() -> Self {
        Registry {
            nonterminals: Vec::new(),
            productions: Vec::new(),
            names: HashSet::new(),
        }
    }
}

impl<V> Registry<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_nonterminal(
        &mut self,
        name: impl Into<String>,
    ) -> Result<&mut Self, GrammarError> {
        let name = name.into();
        if !self.names.insert(name.clone()) {
            return Err(GrammarError::DuplicateName(name));
        }
        self.nonterminals.push(name);
        Ok(self)
    }

    pub fn register_production(
        &mut self,
        production: Production<V>,
    ) -> Result<&mut Self, GrammarError> {
        if self.names.contains(&production.name) {
            return Err(GrammarError::DuplicateName(production.name));
        }
        if !(production.weight.is_finite() && production.weight > 0.0) {
            return Err(GrammarError::InvalidWeight {
                production: production.name,
                weight: production.weight,
            });
        }
        let mut seen = HashSet::new();
        for field in &production.fields {
            if !seen.insert(field.name.as_str()) {
                return Err(GrammarError::DuplicateField {
                    production: production.name.clone(),
                    field: field.name.clone(),
                });
            }
        }
        self.names.insert(production.name.clone());
        self.productions.push(production);
        Ok(self)
    }

    pub fn nonterminal_names(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn productions(&self) -> &[Production<V>] {
        &self.productions
    }

    /// Builds and validates the grammar rooted at `start`.
    ///
    /// Unreachable symbols are kept and reported through
    /// [`Grammar::warnings`]; every other defect is an error.
    pub fn extract_grammar(&self, start: &str) -> Result<Grammar<V>, GrammarError> {
        let nt_index: HashMap<String, usize> = self
            .nonterminals
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let start_idx = *nt_index
            .get(start)
            .ok_or_else(|| GrammarError::UnknownStart(start.to_string()))?;

        let mut nonterminals: Vec<NonTerminal> = self
            .nonterminals
            .iter()
            .map(|name| NonTerminal {
                name: name.clone(),
                productions: Vec::new(),
            })
            .collect();
        let mut production_nt = Vec::with_capacity(self.productions.len());
        let mut production_index = HashMap::new();
        for (i, production) in self.productions.iter().enumerate() {
            let nt = *nt_index.get(&production.implements).ok_or_else(|| {
                GrammarError::UnresolvedSymbol {
                    production: production.name.clone(),
                    name: production.implements.clone(),
                }
            })?;
            nonterminals[nt].productions.push(ProductionId(i));
            production_nt.push(nt);
            production_index.insert(production.name.clone(), ProductionId(i));

            for field in &production.fields {
                check_symbol_shape(&production.name, &field.name, &field.symbol, &nt_index)?;
            }
        }
        if let Some(empty) = nonterminals.iter().find(|nt| nt.productions.is_empty()) {
            return Err(GrammarError::NoProductions(empty.name.clone()));
        }

        let depths = analysis::min_depths(&nonterminals, &self.productions, &nt_index);
        let non_productive: Vec<String> = nonterminals
            .iter()
            .zip(&depths.nonterminals)
            .filter(|(_, d)| d.is_none())
            .map(|(nt, _)| nt.name.clone())
            .collect();
        if !non_productive.is_empty() {
            return Err(GrammarError::NonProductive(non_productive));
        }

        let edges = analysis::nonterminal_edges(&nonterminals, &self.productions, &nt_index);
        let reach = analysis::reachability(&edges);
        let nt_recursive: Vec<bool> = (0..nonterminals.len())
            .map(|i| edges[i].iter().any(|&j| reach[j][i]))
            .collect();
        let production_recursive: Vec<bool> = self
            .productions
            .iter()
            .zip(&production_nt)
            .map(|(p, &owner)| {
                let mut recursive = false;
                for field in &p.fields {
                    field.symbol.for_each_nonterminal(&mut |name| {
                        let j = nt_index[name];
                        recursive |= j == owner || reach[j][owner];
                    });
                }
                recursive
            })
            .collect();

        let mut warnings = Vec::new();
        for (i, nt) in nonterminals.iter().enumerate() {
            if i != start_idx && !reach[start_idx][i] {
                warnings.push(format!(
                    "non-terminal `{}` is unreachable from `{}`",
                    nt.name, start
                ));
            }
        }

        let grammar = Grammar {
            nonterminals,
            nt_index,
            productions: self.productions.clone(),
            production_index,
            production_nt,
            start: start_idx,
            nt_min_depth: depths
                .nonterminals
                .into_iter()
                .map(|d| d.expect("checked above"))
                .collect(),
            production_min_depth: depths
                .productions
                .into_iter()
                .map(|d| d.expect("productive non-terminals imply productive fields"))
                .collect(),
            nt_recursive,
            production_recursive,
            warnings,
        };

        for production in &grammar.productions {
            for field in &production.fields {
                if let SymbolRef::Annotated(base, handler) = &field.symbol {
                    handler
                        .validate(base, &grammar)
                        .map_err(|message| GrammarError::Handler {
                            production: production.name.clone(),
                            field: field.name.clone(),
                            message,
                        })?;
                }
            }
        }
        Ok(grammar)
    }
}

fn check_symbol_shape(
    production: &str,
    field: &str,
    symbol: &SymbolRef,
    nt_index: &HashMap<String, usize>,
) -> Result<(), GrammarError> {
    match symbol {
        SymbolRef::NonTerminal(name) => {
            if nt_index.contains_key(name) {
                Ok(())
            } else {
                Err(GrammarError::UnresolvedSymbol {
                    production: production.to_string(),
                    name: name.clone(),
                })
            }
        }
        SymbolRef::Leaf(_) => Ok(()),
        SymbolRef::Optional(inner) | SymbolRef::List(inner) => {
            check_symbol_shape(production, field, inner, nt_index)
        }
        SymbolRef::Annotated(base, _) => {
            if matches!(**base, SymbolRef::Annotated(..)) {
                return Err(GrammarError::NestedAnnotation {
                    production: production.to_string(),
                    field: field.to_string(),
                });
            }
            check_symbol_shape(production, field, base, nt_index)
        }
    }
}

/// An extracted, validated grammar. Immutable; share it freely across threads.
pub struct Grammar<V = Value> {
    nonterminals: Vec<NonTerminal>,
    nt_index: HashMap<String, usize>,
    productions: Vec<Production<V>>,
    production_index: HashMap<String, ProductionId>,
    production_nt: Vec<usize>,
    start: usize,
    nt_min_depth: Vec<usize>,
    production_min_depth: Vec<usize>,
    nt_recursive: Vec<bool>,
    production_recursive: Vec<bool>,
    warnings: Vec<String>,
}

impl<V> Grammar<V> {
    pub fn start(&self) -> &str {
        &self.nonterminals[self.start].name
    }

    pub fn start_symbol(&self) -> SymbolRef {
        SymbolRef::NonTerminal(self.start().to_string())
    }

    pub fn nonterminals(&self) -> &[NonTerminal] {
        &self.nonterminals
    }

    pub fn nonterminal(&self, name: &str) -> Option<&NonTerminal> {
        self.nt_index.get(name).map(|&i| &self.nonterminals[i])
    }

    pub fn productions(&self) -> impl ExactSizeIterator<Item = (ProductionId, &Production<V>)> {
        self.productions
            .iter()
            .enumerate()
            .map(|(i, p)| (ProductionId(i), p))
    }

    pub fn production(&self, id: ProductionId) -> &Production<V> {
        &self.productions[id.0]
    }

    pub fn try_production(&self, id: ProductionId) -> Option<&Production<V>> {
        self.productions.get(id.0)
    }

    pub fn production_id(&self, name: &str) -> Option<ProductionId> {
        self.production_index.get(name).copied()
    }

    /// Name of the non-terminal implemented by `id`.
    pub fn owner(&self, id: ProductionId) -> &str {
        &self.nonterminals[self.production_nt[id.0]].name
    }

    pub fn min_depth_nonterminal(&self, name: &str) -> Option<usize> {
        self.nt_index.get(name).map(|&i| self.nt_min_depth[i])
    }

    pub fn min_depth_production(&self, id: ProductionId) -> usize {
        self.production_min_depth[id.0]
    }

    /// Smallest depth at which a node for `symbol` can be completed.
    pub fn min_depth(&self, symbol: &SymbolRef) -> Option<usize> {
        analysis::symbol_min_depth(symbol, &|name| self.min_depth_nonterminal(name))
    }

    pub fn is_recursive(&self, name: &str) -> bool {
        self.nt_index
            .get(name)
            .is_some_and(|&i| self.nt_recursive[i])
    }

    pub fn production_is_recursive(&self, id: ProductionId) -> bool {
        self.production_recursive[id.0]
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Production weights of `name`, normalized to sum to one.
    pub fn normalized_weights(&self, name: &str) -> Option<Vec<f64>> {
        let nt = self.nonterminal(name)?;
        let total: f64 = nt
            .productions
            .iter()
            .map(|&id| self.production(id).weight)
            .sum();
        Some(
            nt.productions
                .iter()
                .map(|&id| self.production(id).weight / total)
                .collect(),
        )
    }

    /// Renders the grammar as one BNF-like rule per non-terminal, in
    /// registration order:
    ///
    /// ```text
    /// Real ::= FloatLiteral(value:real) | RealSum(left:Real, right:Real)
    /// ```
    pub fn pretty_print_bnf(&self) -> String {
        let mut out = String::new();
        for nt in &self.nonterminals {
            let _ = write!(out, "{} ::= ", nt.name);
            for (k, &id) in nt.productions.iter().enumerate() {
                if k > 0 {
                    out.push_str(" | ");
                }
                let production = self.production(id);
                out.push_str(&production.name);
                if !production.fields.is_empty() {
                    out.push('(');
                    for (j, field) in production.fields.iter().enumerate() {
                        if j > 0 {
                            out.push_str(", ");
                        }
                        let _ = write!(out, "{}:{}", field.name, field.symbol);
                    }
                    out.push(')');
                }
            }
            out.push('\n');
        }
        out
    }
}

impl<V> fmt::Debug for Grammar<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grammar")
            .field("start", &self.start())
            .field("nonterminals", &self.nonterminals)
            .field("productions", &self.productions)
            .finish_non_exhaustive()
    }
}

pub(crate) mod analysis {
    use super::*;

    pub struct MinDepths {
        pub nonterminals: Vec<Option<usize>>,
        pub productions: Vec<Option<usize>>,
    }

    pub fn symbol_min_depth(
        symbol: &SymbolRef,
        nt_depth: &dyn Fn(&str) -> Option<usize>,
    ) -> Option<usize> {
        match symbol {
            SymbolRef::NonTerminal(name) => nt_depth(name),
            // An empty list and an absent optional are always derivable.
            SymbolRef::Leaf(_) | SymbolRef::Optional(_) | SymbolRef::List(_) => Some(1),
            SymbolRef::Annotated(base, handler) => {
                handler.min_depth_contribution(base, &|s: &SymbolRef| symbol_min_depth(s, nt_depth))
            }
        }
    }

    pub fn production_min_depth<V>(
        production: &Production<V>,
        nt_depth: &dyn Fn(&str) -> Option<usize>,
    ) -> Option<usize> {
        let mut deepest = 0;
        for field in &production.fields {
            deepest = deepest.max(symbol_min_depth(&field.symbol, nt_depth)?);
        }
        Some(1 + deepest)
    }

    /// Fixpoint over the min-depth equations: a production needs one level
    /// more than its deepest field; a non-terminal needs as much as its
    /// cheapest production. `None` means no finite derivation was found.
    pub fn min_depths<V>(
        nonterminals: &[NonTerminal],
        productions: &[Production<V>],
        nt_index: &HashMap<String, usize>,
    ) -> MinDepths {
        let mut nt: Vec<Option<usize>> = vec![None; nonterminals.len()];
        let mut prod: Vec<Option<usize>> = vec![None; productions.len()];
        loop {
            let mut changed = false;
            for (i, p) in productions.iter().enumerate() {
                let lookup = |name: &str| nt_index.get(name).and_then(|&j| nt[j]);
                let d = production_min_depth(p, &lookup);
                if d.is_some() && (prod[i].is_none() || d < prod[i]) {
                    prod[i] = d;
                    changed = true;
                }
            }
            for (j, n) in nonterminals.iter().enumerate() {
                let d = n.productions.iter().filter_map(|id| prod[id.0]).min();
                if d.is_some() && (nt[j].is_none() || d < nt[j]) {
                    nt[j] = d;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        MinDepths {
            nonterminals: nt,
            productions: prod,
        }
    }

    pub fn nonterminal_edges<V>(
        nonterminals: &[NonTerminal],
        productions: &[Production<V>],
        nt_index: &HashMap<String, usize>,
    ) -> Vec<Vec<usize>> {
        nonterminals
            .iter()
            .map(|nt| {
                let mut out = Vec::new();
                for id in &nt.productions {
                    for field in &productions[id.0].fields {
                        field.symbol.for_each_nonterminal(&mut |name| {
                            let j = nt_index[name];
                            if !out.contains(&j) {
                                out.push(j);
                            }
                        });
                    }
                }
                out
            })
            .collect()
    }

    /// `reach[i][j]` is true iff `j` is reachable from `i` in one or more steps.
    pub fn reachability(edges: &[Vec<usize>]) -> Vec<Vec<bool>> {
        let n = edges.len();
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            let mut queue: VecDeque<usize> = edges[i].iter().copied().collect();
            while let Some(j) = queue.pop_front() {
                if !row[j] {
                    row[j] = true;
                    queue.extend(edges[j].iter().copied());
                }
            }
        }
        reach
    }
}
