//! Field types: what a production's field may hold.

use std::fmt;
use std::sync::Arc;

use crate::handlers::MetaHandler;

/// Native value kinds that terminate a derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LeafKind {
    Integer,
    Real,
    Boolean,
    Text,
}

impl LeafKind {
    pub fn name(self) -> &'static str {
        match self {
            LeafKind::Integer => "integer",
            LeafKind::Real => "real",
            LeafKind::Boolean => "boolean",
            LeafKind::Text => "text",
        }
    }
}

impl fmt::Display for LeafKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A concrete native value stored in a leaf node.
#[derive(Debug, Clone, PartialEq)]
pub enum LeafValue {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl LeafValue {
    pub fn kind(&self) -> LeafKind {
        match self {
            LeafValue::Int(_) => LeafKind::Integer,
            LeafValue::Real(_) => LeafKind::Real,
            LeafValue::Bool(_) => LeafKind::Boolean,
            LeafValue::Text(_) => LeafKind::Text,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match *self {
            LeafValue::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match *self {
            LeafValue::Real(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            LeafValue::Text(s) => Some(s),
            _ => None,
        }
    }
}

/// The declared type of a field.
///
/// `Annotated` hands generation of the field over to a [`MetaHandler`]; the
/// wrapped base type is what the handler must produce.
#[derive(Clone)]
pub enum SymbolRef {
    NonTerminal(String),
    Leaf(LeafKind),
    Optional(Box<SymbolRef>),
    List(Box<SymbolRef>),
    Annotated(Box<SymbolRef>, Arc<dyn MetaHandler>),
}

impl SymbolRef {
    pub fn nt(name: impl Into<String>) -> Self {
        SymbolRef::NonTerminal(name.into())
    }

    pub fn int() -> Self {
        SymbolRef::Leaf(LeafKind::Integer)
    }

    pub fn real() -> Self {
        SymbolRef::Leaf(LeafKind::Real)
    }

    pub fn boolean() -> Self {
        SymbolRef::Leaf(LeafKind::Boolean)
    }

    pub fn text() -> Self {
        SymbolRef::Leaf(LeafKind::Text)
    }

    pub fn optional(inner: SymbolRef) -> Self {
        SymbolRef::Optional(Box::new(inner))
    }

    pub fn list(inner: SymbolRef) -> Self {
        SymbolRef::List(Box::new(inner))
    }

    pub fn annotated(base: SymbolRef, handler: impl MetaHandler + 'static) -> Self {
        SymbolRef::Annotated(Box::new(base), Arc::new(handler))
    }

    /// The type the produced node has to satisfy, i.e. the symbol with any
    /// handler annotation stripped.
    pub fn base(&self) -> &SymbolRef {
        match self {
            SymbolRef::Annotated(base, _) => base,
            other => other,
        }
    }

    /// Calls `f` for every non-terminal name mentioned anywhere inside this
    /// symbol, including under annotations.
    pub fn for_each_nonterminal<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            SymbolRef::NonTerminal(name) => f(name),
            SymbolRef::Leaf(_) => {}
            SymbolRef::Optional(inner) | SymbolRef::List(inner) => inner.for_each_nonterminal(f),
            SymbolRef::Annotated(base, _) => base.for_each_nonterminal(f),
        }
    }
}

impl PartialEq for SymbolRef {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (SymbolRef::NonTerminal(a), SymbolRef::NonTerminal(b)) => a == b,
            (SymbolRef::Leaf(a), SymbolRef::Leaf(b)) => a == b,
            (SymbolRef::Optional(a), SymbolRef::Optional(b)) => a == b,
            (SymbolRef::List(a), SymbolRef::List(b)) => a == b,
            (SymbolRef::Annotated(a, ha), SymbolRef::Annotated(b, hb)) => {
                a == b && (Arc::ptr_eq(ha, hb) || ha.describe() == hb.describe())
            }
            _ => false,
        }
    }
}

impl Eq for SymbolRef {}

impl fmt::Display for SymbolRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolRef::NonTerminal(name) => f.write_str(name),
            SymbolRef::Leaf(kind) => write!(f, "{kind}"),
            SymbolRef::Optional(inner) => write!(f, "Optional[{inner}]"),
            SymbolRef::List(inner) => write!(f, "List[{inner}]"),
            SymbolRef::Annotated(base, handler) => {
                write!(f, "Annotated[{base}, {}]", handler.describe())
            }
        }
    }
}

impl fmt::Debug for SymbolRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
