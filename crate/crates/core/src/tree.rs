//! Derivation trees and the structural operations variation operators need.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::format::fmt_real;
use crate::generate::GrammarView;
use crate::grammar::{Grammar, ProductionId};
use crate::symbol::{LeafValue, SymbolRef};

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Production {
        id: ProductionId,
        children: Vec<TreeNode>,
    },
    Leaf(LeafValue),
    List(Vec<TreeNode>),
    Optional(Option<Box<TreeNode>>),
}

/// Child indices from the root down to a subtree.
pub type Path = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("no subtree at path {0:?}")]
    InvalidPath(Path),
    #[error("cannot put a `{found}` subtree where `{expected}` is expected")]
    SymbolMismatch { expected: String, found: String },
}

/// Reasons a tree does not conform to the grammar.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("at {path:?}: {message}")]
pub struct TypeViolation {
    pub path: Path,
    pub message: String,
}

impl TreeNode {
    pub fn production(id: ProductionId, children: Vec<TreeNode>) -> Self {
        TreeNode::Production { id, children }
    }

    /// The production at this node, if it is a production node.
    pub fn production_id(&self) -> Option<ProductionId> {
        match self {
            TreeNode::Production { id, .. } => Some(*id),
            _ => None,
        }
    }

    pub fn children(&self) -> &[TreeNode] {
        match self {
            TreeNode::Production { children, .. } | TreeNode::List(children) => children,
            TreeNode::Optional(Some(inner)) => std::slice::from_ref(&**inner),
            TreeNode::Optional(None) | TreeNode::Leaf(_) => &[],
        }
    }

    fn children_mut(&mut self) -> &mut [TreeNode] {
        match self {
            TreeNode::Production { children, .. } | TreeNode::List(children) => children,
            TreeNode::Optional(Some(inner)) => std::slice::from_mut(&mut **inner),
            TreeNode::Optional(None) | TreeNode::Leaf(_) => &mut [],
        }
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(TreeNode::depth)
            .max()
            .unwrap_or(0)
    }

    pub fn count_nodes(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(TreeNode::count_nodes)
            .sum::<usize>()
    }

    pub fn subtree(&self, path: &[usize]) -> Option<&TreeNode> {
        path.iter()
            .try_fold(self, |node, &i| node.children().get(i))
    }

    /// Returns a copy of `self` with the subtree at `path` swapped for
    /// `replacement`. No type check; see [`replace_subtree`].
    pub fn with_subtree(&self, path: &[usize], replacement: TreeNode) -> Option<TreeNode> {
        let mut out = self.clone();
        let mut slot = &mut out;
        for &i in path {
            slot = slot.children_mut().get_mut(i)?;
        }
        *slot = replacement;
        Some(out)
    }

    /// Canonical s-expression rendering.
    pub fn to_sexpr<V>(&self, grammar: &Grammar<V>) -> String {
        let mut out = String::new();
        write_sexpr(self, grammar, &mut out);
        out
    }

    pub fn display<'a, V>(&'a self, grammar: &'a Grammar<V>) -> impl fmt::Display + 'a {
        struct D<'a, V>(&'a TreeNode, &'a Grammar<V>);
        impl<V> fmt::Display for D<'_, V> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.to_sexpr(self.1))
            }
        }
        D(self, grammar)
    }
}

fn write_sexpr<V>(node: &TreeNode, grammar: &Grammar<V>, out: &mut String) {
    match node {
        TreeNode::Production { id, children } => {
            out.push('(');
            out.push_str(&grammar.production(*id).name);
            for child in children {
                out.push(' ');
                write_sexpr(child, grammar, out);
            }
            out.push(')');
        }
        TreeNode::Leaf(leaf) => {
            let _ = match leaf {
                LeafValue::Int(v) => write!(out, "integer:{v}"),
                LeafValue::Real(v) => write!(out, "real:{}", fmt_real(*v)),
                LeafValue::Bool(v) => write!(out, "boolean:{v}"),
                LeafValue::Text(v) => write!(out, "text:{v:?}"),
            };
        }
        TreeNode::List(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write_sexpr(item, grammar, out);
            }
            out.push(']');
        }
        TreeNode::Optional(inner) => {
            out.push('{');
            if let Some(inner) = inner {
                write_sexpr(inner, grammar, out);
            }
            out.push('}');
        }
    }
}

/// A subtree position together with the symbol that governs what may live
/// there.
#[derive(Debug, Clone, PartialEq)]
pub struct Site {
    pub path: Path,
    pub symbol: SymbolRef,
}

impl Site {
    /// Depth budget available at this site under a tree-wide `max_depth`.
    pub fn budget(&self, max_depth: usize) -> usize {
        max_depth.saturating_sub(self.path.len())
    }
}

/// Every subtree position in pre-order, starting with the root under
/// `root_symbol`.
///
/// Subtrees produced by a meta-handler are treated as a unit unless the
/// handler opts in through `MetaHandler::exposes_children`.
pub fn collect_sites(
    grammar: &dyn GrammarView,
    root_symbol: &SymbolRef,
    node: &TreeNode,
) -> Vec<Site> {
    let mut sites = Vec::new();
    let mut path = Vec::new();
    collect_into(grammar, root_symbol, node, &mut path, &mut sites);
    sites
}

fn collect_into(
    grammar: &dyn GrammarView,
    symbol: &SymbolRef,
    node: &TreeNode,
    path: &mut Path,
    sites: &mut Vec<Site>,
) {
    sites.push(Site {
        path: path.clone(),
        symbol: symbol.clone(),
    });
    let shape = match symbol {
        SymbolRef::Annotated(base, handler) => {
            if !handler.exposes_children() {
                return;
            }
            &**base
        }
        other => other,
    };
    let mut visit =
        |i: usize, child_symbol: &SymbolRef, child: &TreeNode, sites: &mut Vec<Site>| {
            path.push(i);
            collect_into(grammar, child_symbol, child, path, sites);
            path.pop();
        };
    match (shape, node) {
        (SymbolRef::NonTerminal(_), TreeNode::Production { id, children }) => {
            let fields = grammar.fields(*id);
            for (i, (field, child)) in fields.iter().zip(children).enumerate() {
                visit(i, &field.symbol, child, sites);
            }
        }
        (SymbolRef::List(inner), TreeNode::List(items)) => {
            for (i, item) in items.iter().enumerate() {
                visit(i, inner, item, sites);
            }
        }
        (SymbolRef::Optional(inner), TreeNode::Optional(Some(item))) => {
            visit(0, inner, item, sites)
        }
        _ => {}
    }
}

/// Replaces the subtree at `path`, which must be governed by `symbol`
/// (as reported by [`collect_sites`]) and `replacement_symbol` must match it.
pub fn replace_subtree(
    root: &TreeNode,
    path: &[usize],
    site_symbol: &SymbolRef,
    replacement: TreeNode,
    replacement_symbol: &SymbolRef,
) -> Result<TreeNode, TreeError> {
    if site_symbol != replacement_symbol {
        return Err(TreeError::SymbolMismatch {
            expected: site_symbol.to_string(),
            found: replacement_symbol.to_string(),
        });
    }
    root.with_subtree(path, replacement)
        .ok_or_else(|| TreeError::InvalidPath(path.to_vec()))
}

/// Checks that `node` is a valid derivation of `symbol`. Annotated symbols are
/// checked against their base type.
pub fn check_tree(
    grammar: &dyn GrammarView,
    symbol: &SymbolRef,
    node: &TreeNode,
) -> Result<(), TypeViolation> {
    let mut path = Vec::new();
    check_into(grammar, symbol, node, &mut path)
}

fn check_into(
    grammar: &dyn GrammarView,
    symbol: &SymbolRef,
    node: &TreeNode,
    path: &mut Path,
) -> Result<(), TypeViolation> {
    let fail = |path: &Path, message: String| {
        Err(TypeViolation {
            path: path.clone(),
            message,
        })
    };
    match (symbol.base(), node) {
        (SymbolRef::NonTerminal(name), TreeNode::Production { id, children }) => {
            if grammar.implements(*id) != Some(name.as_str()) {
                return fail(
                    path,
                    format!("production #{} does not implement `{name}`", id.index()),
                );
            }
            let fields = grammar.fields(*id);
            if fields.len() != children.len() {
                return fail(
                    path,
                    format!(
                        "expected {} children, found {}",
                        fields.len(),
                        children.len()
                    ),
                );
            }
            for (i, (field, child)) in fields.iter().zip(children).enumerate() {
                path.push(i);
                check_into(grammar, &field.symbol, child, path)?;
                path.pop();
            }
            Ok(())
        }
        (SymbolRef::Leaf(kind), TreeNode::Leaf(value)) if value.kind() == *kind => Ok(()),
        (SymbolRef::List(inner), TreeNode::List(items)) => {
            for (i, item) in items.iter().enumerate() {
                path.push(i);
                check_into(grammar, inner, item, path)?;
                path.pop();
            }
            Ok(())
        }
        (SymbolRef::Optional(_), TreeNode::Optional(None)) => Ok(()),
        (SymbolRef::Optional(inner), TreeNode::Optional(Some(item))) => {
            path.push(0);
            check_into(grammar, inner, item, path)?;
            path.pop();
            Ok(())
        }
        (expected, _) => fail(path, format!("node does not fit `{expected}`")),
    }
}
