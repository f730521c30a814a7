//! Bottom-up evaluation of derivation trees through per-production actions.

use std::sync::Arc;

use thiserror::Error;

use crate::grammar::Grammar;
use crate::symbol::LeafValue;
use crate::tree::TreeNode;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("production `{0}` has no semantic action")]
    MissingAction(String),
    #[error("production id {0} is not part of this grammar")]
    UnknownProduction(usize),
    #[error("{0}")]
    Failed(String),
}

impl EvalError {
    pub fn failed(msg: impl Into<String>) -> Self {
        EvalError::Failed(msg.into())
    }
}

/// Maps the child values of a production node to the node's value.
pub type SemanticAction<V> = Arc<dyn Fn(Vec<V>) -> Result<V, EvalError> + Send + Sync>;

/// The phenotype value type. Structural nodes (leaves, lists, optionals) are
/// converted through these hooks; production nodes go through their action.
pub trait NodeValue: Sized {
    fn from_leaf(leaf: &LeafValue) -> Self;
    fn from_list(items: Vec<Self>) -> Self;
    fn from_optional(item: Option<Self>) -> Self;
}

/// General-purpose dynamic value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
    List(Vec<Value>),
    Optional(Option<Box<Value>>),
}

impl Value {
    pub fn as_real(&self) -> Result<f64, EvalError> {
        match *self {
            Value::Real(v) => Ok(v),
            Value::Int(v) => Ok(v as f64),
            ref other => Err(EvalError::failed(format!(
                "expected a number, got {other:?}"
            ))),
        }
    }

    pub fn as_int(&self) -> Result<i64, EvalError> {
        match *self {
            Value::Int(v) => Ok(v),
            ref other => Err(EvalError::failed(format!(
                "expected an integer, got {other:?}"
            ))),
        }
    }

    pub fn as_list(&self) -> Result<&[Value], EvalError> {
        match self {
            Value::List(items) => Ok(items),
            other => Err(EvalError::failed(format!("expected a list, got {other:?}"))),
        }
    }
}

impl NodeValue for Value {
    fn from_leaf(leaf: &LeafValue) -> Self {
        match leaf {
            LeafValue::Int(v) => Value::Int(*v),
            LeafValue::Real(v) => Value::Real(*v),
            LeafValue::Bool(v) => Value::Bool(*v),
            LeafValue::Text(v) => Value::Text(v.clone()),
        }
    }

    fn from_list(items: Vec<Self>) -> Self {
        Value::List(items)
    }

    fn from_optional(item: Option<Self>) -> Self {
        Value::Optional(item.map(Box::new))
    }
}

/// Post-order evaluation: children first, then the production's action.
pub fn evaluate<V: NodeValue>(node: &TreeNode, grammar: &Grammar<V>) -> Result<V, EvalError> {
    match node {
        TreeNode::Leaf(leaf) => Ok(V::from_leaf(leaf)),
        TreeNode::List(items) => {
            let values = items
                .iter()
                .map(|item| evaluate(item, grammar))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(V::from_list(values))
        }
        TreeNode::Optional(inner) => {
            let value = inner.as_deref().map(|n| evaluate(n, grammar)).transpose()?;
            Ok(V::from_optional(value))
        }
        TreeNode::Production { id, children } => {
            let production = grammar
                .try_production(*id)
                .ok_or(EvalError::UnknownProduction(id.index()))?;
            let action = production
                .action
                .as_ref()
                .ok_or_else(|| EvalError::MissingAction(production.name.clone()))?;
            let args = children
                .iter()
                .map(|child| evaluate(child, grammar))
                .collect::<Result<Vec<_>, _>>()?;
            action(args)
        }
    }
}
