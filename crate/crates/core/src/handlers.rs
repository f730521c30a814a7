//! Meta-handlers: per-field overrides of tree generation.
//!
//! A field typed `SymbolRef::Annotated(base, handler)` is not generated by the
//! regular algorithm; the handler builds the node instead and must return
//! something that type-checks against `base` and fits the depth budget in the
//! [`GenContext`]. Built-ins below cover bounded ranges, list sizes, fixed
//! option sets, a normal-distributed integer, a positional letter-frequency
//! motif, and a dependent `(i, j)` pair with `j > i`. User handlers implement
//! the same trait and get no less access than these.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::generate::{GenContext, GenerationError, GrammarView};
use crate::symbol::{LeafKind, LeafValue, SymbolRef};
use crate::tree::TreeNode;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid meta-handler configuration: {0}")]
pub struct ConfigError(pub String);

pub trait MetaHandler: Send + Sync {
    /// Short stable description, e.g. `int_range(0, 3)`. Also used to compare
    /// annotated symbols.
    fn describe(&self) -> String;

    fn generate(&self, ctx: &mut GenContext<'_>) -> Result<TreeNode, GenerationError>;

    /// Smallest depth at which this handler can produce a node for `base`.
    /// `depth_of` resolves the min-depth of other symbols.
    fn min_depth_contribution(
        &self,
        _base: &SymbolRef,
        _depth_of: &dyn Fn(&SymbolRef) -> Option<usize>,
    ) -> Option<usize> {
        Some(1)
    }

    /// Called once at grammar extraction with the annotated base type.
    fn validate(&self, _base: &SymbolRef, _grammar: &dyn GrammarView) -> Result<(), String> {
        Ok(())
    }

    /// Whether variation operators may work inside nodes this handler built.
    fn exposes_children(&self) -> bool {
        false
    }
}

fn expect_leaf(base: &SymbolRef, kind: LeafKind, who: &str) -> Result<(), String> {
    match base {
        SymbolRef::Leaf(k) if *k == kind => Ok(()),
        other => Err(format!("{who} needs a `{kind}` field, found `{other}`")),
    }
}

fn handler_error(handler: &dyn MetaHandler, message: impl Into<String>) -> GenerationError {
    GenerationError::Handler {
        handler: handler.describe(),
        message: message.into(),
    }
}

/// Uniform integer in `[lo, hi]`, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    lo: i64,
    hi: i64,
}

impl IntRange {
    pub fn new(lo: i64, hi: i64) -> Result<Self, ConfigError> {
        if lo > hi {
            return Err(ConfigError(format!(
                "int_range lower bound {lo} exceeds upper bound {hi}"
            )));
        }
        if (hi as i128 - lo as i128) >= u32::MAX as i128 {
            return Err(ConfigError(format!(
                "int_range({lo}, {hi}) spans too many values"
            )));
        }
        Ok(IntRange { lo, hi })
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }
}

impl MetaHandler for IntRange {
    fn describe(&self) -> String {
        format!("int_range({}, {})", self.lo, self.hi)
    }

    fn generate(&self, ctx: &mut GenContext<'_>) -> Result<TreeNode, GenerationError> {
        let span = (self.hi - self.lo) as usize + 1;
        let k = ctx.decisions().choose(span, None);
        Ok(TreeNode::Leaf(LeafValue::Int(self.lo + k as i64)))
    }

    fn validate(&self, base: &SymbolRef, _grammar: &dyn GrammarView) -> Result<(), String> {
        expect_leaf(base, LeafKind::Integer, "int_range")
    }
}

/// Uniform real in `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatRange {
    lo: f64,
    hi: f64,
}

impl FloatRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self, ConfigError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(ConfigError(format!(
                "float_range needs finite lo < hi, got [{lo}, {hi})"
            )));
        }
        Ok(FloatRange { lo, hi })
    }
}

impl MetaHandler for FloatRange {
    fn describe(&self) -> String {
        format!("float_range({}, {})", self.lo, self.hi)
    }

    fn generate(&self, ctx: &mut GenContext<'_>) -> Result<TreeNode, GenerationError> {
        let r = ctx.decisions().random_real();
        let v = self.lo + (self.hi - self.lo) * r;
        // rounding can land exactly on hi
        let v = if v >= self.hi { self.hi.next_down() } else { v };
        Ok(TreeNode::Leaf(LeafValue::Real(v)))
    }

    fn validate(&self, base: &SymbolRef, _grammar: &dyn GrammarView) -> Result<(), String> {
        expect_leaf(base, LeafKind::Real, "float_range")
    }
}

/// A list whose length is uniform in `[min_len, max_len]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ListSizeBetween {
    min_len: usize,
    max_len: usize,
}

impl ListSizeBetween {
    pub fn new(min_len: usize, max_len: usize) -> Result<Self, ConfigError> {
        if min_len > max_len {
            return Err(ConfigError(format!(
                "list_size_between({min_len}, {max_len}) has min above max"
            )));
        }
        Ok(ListSizeBetween { min_len, max_len })
    }
}

impl MetaHandler for ListSizeBetween {
    fn describe(&self) -> String {
        format!("list_size_between({}, {})", self.min_len, self.max_len)
    }

    fn generate(&self, ctx: &mut GenContext<'_>) -> Result<TreeNode, GenerationError> {
        let SymbolRef::List(inner) = ctx.base().clone() else {
            return Err(handler_error(self, "annotated field is not a list"));
        };
        let child_budget = ctx.budget().saturating_sub(1);
        let elements_fit = ctx
            .grammar()
            .symbol_min_depth(&inner)
            .is_some_and(|d| d <= child_budget);
        let len = if !elements_fit {
            if self.min_len > 0 {
                return Err(handler_error(
                    self,
                    format!("budget {} cannot hold any element", ctx.budget()),
                ));
            }
            0
        } else {
            self.min_len
                + ctx
                    .decisions()
                    .choose(self.max_len - self.min_len + 1, None)
        };
        let items = (0..len)
            .map(|_| ctx.recurse(&inner, child_budget))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TreeNode::List(items))
    }

    fn min_depth_contribution(
        &self,
        base: &SymbolRef,
        depth_of: &dyn Fn(&SymbolRef) -> Option<usize>,
    ) -> Option<usize> {
        match base {
            _ if self.min_len == 0 => Some(1),
            SymbolRef::List(inner) => depth_of(inner).map(|d| d + 1),
            _ => Some(1),
        }
    }

    fn validate(&self, base: &SymbolRef, _grammar: &dyn GrammarView) -> Result<(), String> {
        match base {
            SymbolRef::List(_) => Ok(()),
            other => Err(format!(
                "list_size_between needs a list field, found `{other}`"
            )),
        }
    }

    fn exposes_children(&self) -> bool {
        true
    }
}

/// One of a fixed set of values, uniformly.
#[derive(Debug, Clone, PartialEq)]
pub struct VarRange {
    options: Vec<LeafValue>,
}

impl VarRange {
    pub fn new(options: Vec<LeafValue>) -> Result<Self, ConfigError> {
        let Some(first) = options.first() else {
            return Err(ConfigError("var_range needs at least one option".into()));
        };
        if options.iter().any(|o| o.kind() != first.kind()) {
            return Err(ConfigError("var_range options must share one kind".into()));
        }
        Ok(VarRange { options })
    }

    pub fn texts<I, S>(options: I) -> Result<Self, ConfigError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(
            options
                .into_iter()
                .map(|s| LeafValue::Text(s.into()))
                .collect(),
        )
    }

    pub fn options(&self) -> &[LeafValue] {
        &self.options
    }
}

impl MetaHandler for VarRange {
    fn describe(&self) -> String {
        let items: Vec<String> = self
            .options
            .iter()
            .map(|o| match o {
                LeafValue::Int(v) => v.to_string(),
                LeafValue::Real(v) => v.to_string(),
                LeafValue::Bool(v) => v.to_string(),
                LeafValue::Text(v) => format!("{v:?}"),
            })
            .collect();
        format!("var_range([{}])", items.join(", "))
    }

    fn generate(&self, ctx: &mut GenContext<'_>) -> Result<TreeNode, GenerationError> {
        let k = ctx.decisions().choose(self.options.len(), None);
        Ok(TreeNode::Leaf(self.options[k].clone()))
    }

    fn validate(&self, base: &SymbolRef, _grammar: &dyn GrammarView) -> Result<(), String> {
        expect_leaf(base, self.options[0].kind(), "var_range")
    }
}

/// Integer drawn from a normal distribution and rounded to nearest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalInt {
    mean: f64,
    stddev: f64,
}

impl NormalInt {
    pub fn new(mean: f64, stddev: f64) -> Result<Self, ConfigError> {
        if !(mean.is_finite() && stddev.is_finite() && stddev > 0.0) {
            return Err(ConfigError(format!(
                "normal_int needs a finite mean and stddev > 0, got ({mean}, {stddev})"
            )));
        }
        Ok(NormalInt { mean, stddev })
    }
}

impl MetaHandler for NormalInt {
    fn describe(&self) -> String {
        format!("normal_int({}, {})", self.mean, self.stddev)
    }

    fn generate(&self, ctx: &mut GenContext<'_>) -> Result<TreeNode, GenerationError> {
        // Box-Muller; 1 - u keeps the log argument in (0, 1].
        let u1 = ctx.decisions().random_real();
        let u2 = ctx.decisions().random_real();
        let z = (-2.0 * (1.0 - u1).ln()).sqrt() * (TAU * u2).cos();
        let v = (self.mean + self.stddev * z).round() as i64;
        Ok(TreeNode::Leaf(LeafValue::Int(v)))
    }

    fn validate(&self, base: &SymbolRef, _grammar: &dyn GrammarView) -> Result<(), String> {
        expect_leaf(base, LeafKind::Integer, "normal_int")
    }
}

pub const MOTIF_ALPHABET: [char; 4] = ['A', 'T', 'C', 'G'];

/// A word over `{A, T, C, G}` with one independent letter distribution per
/// position. Row `k` gives the probabilities of A, T, C, G at position `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Motif {
    rows: Vec<[f64; 4]>,
}

impl Motif {
    pub fn new(rows: Vec<[f64; 4]>) -> Result<Self, ConfigError> {
        if rows.is_empty() {
            return Err(ConfigError("motif needs at least one position".into()));
        }
        for (k, row) in rows.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) || (sum - 1.0).abs() > 1e-9 {
                return Err(ConfigError(format!(
                    "motif row {k} is not a probability distribution: {row:?}"
                )));
            }
        }
        Ok(Motif { rows })
    }
}

impl MetaHandler for Motif {
    fn describe(&self) -> String {
        format!("motif({:?})", self.rows)
    }

    fn generate(&self, ctx: &mut GenContext<'_>) -> Result<TreeNode, GenerationError> {
        let mut word = String::with_capacity(self.rows.len());
        for row in &self.rows {
            // Only letters with positive probability are ever candidates, so
            // weight-blind sources cannot produce impossible words.
            let support: Vec<usize> = (0..4).filter(|&i| row[i] > 0.0).collect();
            let weights: Vec<f64> = support.iter().map(|&i| row[i]).collect();
            let pick = ctx.decisions().choose(support.len(), Some(&weights));
            word.push(MOTIF_ALPHABET[support[pick]]);
        }
        Ok(TreeNode::Leaf(LeafValue::Text(word)))
    }

    fn validate(&self, base: &SymbolRef, _grammar: &dyn GrammarView) -> Result<(), String> {
        expect_leaf(base, LeafKind::Text, "motif")
    }
}

/// Builds a two-integer production `(i, j)` with `i` uniform in `[lo, hi]`
/// and `j` uniform in `[i + 1, i + headroom]`, so `j > i` always holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependentPair {
    production: String,
    lo: i64,
    hi: i64,
    headroom: i64,
}

impl DependentPair {
    pub fn new(
        production: impl Into<String>,
        lo: i64,
        hi: i64,
        headroom: i64,
    ) -> Result<Self, ConfigError> {
        if lo > hi {
            return Err(ConfigError(format!(
                "dependent_pair lower bound {lo} exceeds upper bound {hi}"
            )));
        }
        if headroom < 1 {
            return Err(ConfigError(format!(
                "dependent_pair headroom must be at least 1, got {headroom}"
            )));
        }
        IntRange::new(lo, hi)?;
        IntRange::new(1, headroom)?;
        Ok(DependentPair {
            production: production.into(),
            lo,
            hi,
            headroom,
        })
    }
}

impl MetaHandler for DependentPair {
    fn describe(&self) -> String {
        format!(
            "dependent_pair({}, {}, {}, {})",
            self.production, self.lo, self.hi, self.headroom
        )
    }

    fn generate(&self, ctx: &mut GenContext<'_>) -> Result<TreeNode, GenerationError> {
        let id = ctx
            .grammar()
            .lookup_production(&self.production)
            .ok_or_else(|| {
                handler_error(self, format!("unknown production `{}`", self.production))
            })?;
        let i = self.lo
            + ctx
                .decisions()
                .choose((self.hi - self.lo) as usize + 1, None) as i64;
        let j = i + 1 + ctx.decisions().choose(self.headroom as usize, None) as i64;
        Ok(TreeNode::production(
            id,
            vec![
                TreeNode::Leaf(LeafValue::Int(i)),
                TreeNode::Leaf(LeafValue::Int(j)),
            ],
        ))
    }

    fn min_depth_contribution(
        &self,
        _base: &SymbolRef,
        _depth_of: &dyn Fn(&SymbolRef) -> Option<usize>,
    ) -> Option<usize> {
        Some(2)
    }

    fn validate(&self, base: &SymbolRef, grammar: &dyn GrammarView) -> Result<(), String> {
        let SymbolRef::NonTerminal(nt) = base else {
            return Err(format!(
                "dependent_pair needs a non-terminal field, found `{base}`"
            ));
        };
        let id = grammar.lookup_production(&self.production).ok_or_else(|| {
            format!(
                "dependent_pair refers to unknown production `{}`",
                self.production
            )
        })?;
        if grammar.implements(id) != Some(nt.as_str()) {
            return Err(format!(
                "production `{}` does not implement `{nt}`",
                self.production
            ));
        }
        let fields = grammar.fields(id);
        let ints = fields.len() == 2
            && fields
                .iter()
                .all(|f| *f.symbol.base() == SymbolRef::Leaf(LeafKind::Integer));
        if !ints {
            return Err(format!(
                "production `{}` must have exactly two integer fields",
                self.production
            ));
        }
        Ok(())
    }
}
