//! Phenotype values for the benchmarks: a benchmark-specific expression type
//! plus the structural values the engine hands to semantic actions.

use typegp::{EvalError, LeafValue, NodeValue};

#[derive(Debug, Clone, PartialEq)]
pub enum Node<E> {
    Expr(E),
    Leaf(LeafValue),
    List(Vec<Node<E>>),
    Optional(Option<Box<Node<E>>>),
}

impl<E> NodeValue for Node<E> {
    fn from_leaf(leaf: &LeafValue) -> Self {
        Node::Leaf(leaf.clone())
    }

    fn from_list(items: Vec<Self>) -> Self {
        Node::List(items)
    }

    fn from_optional(item: Option<Self>) -> Self {
        Node::Optional(item.map(Box::new))
    }
}

impl<E> Node<E> {
    pub fn into_expr(self) -> Result<E, EvalError> {
        match self {
            Node::Expr(e) => Ok(e),
            _ => Err(EvalError::failed("expected an expression")),
        }
    }

    pub fn as_int(&self) -> Result<i64, EvalError> {
        match self {
            Node::Leaf(LeafValue::Int(v)) => Ok(*v),
            _ => Err(EvalError::failed("expected an integer")),
        }
    }

    pub fn as_real(&self) -> Result<f64, EvalError> {
        match self {
            Node::Leaf(LeafValue::Real(v)) => Ok(*v),
            _ => Err(EvalError::failed("expected a real")),
        }
    }

    pub fn as_text(&self) -> Result<&str, EvalError> {
        match self {
            Node::Leaf(LeafValue::Text(v)) => Ok(v),
            _ => Err(EvalError::failed("expected text")),
        }
    }

    pub fn into_list(self) -> Result<Vec<Node<E>>, EvalError> {
        match self {
            Node::List(items) => Ok(items),
            _ => Err(EvalError::failed("expected a list")),
        }
    }
}

/// Splits the argument vector of a binary production into two expressions.
pub(crate) fn two<E>(args: Vec<Node<E>>) -> Result<(Box<E>, Box<E>), EvalError> {
    let mut it = args.into_iter();
    match (it.next(), it.next()) {
        (Some(a), Some(b)) => Ok((Box::new(a.into_expr()?), Box::new(b.into_expr()?))),
        _ => Err(EvalError::failed("expected two arguments")),
    }
}

pub(crate) fn one<E>(args: Vec<Node<E>>) -> Result<Node<E>, EvalError> {
    args.into_iter()
        .next()
        .ok_or_else(|| EvalError::failed("expected one argument"))
}
