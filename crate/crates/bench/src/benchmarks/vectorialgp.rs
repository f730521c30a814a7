//! Regression over a mix of scalar and vector features.
//!
//! Columns 0–2 hold scalars and columns 3–5 hold 5-element vectors; the
//! target is `mean(column 4) + column 0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use typegp::handlers::IntRange;
use typegp::{Direction, GpConfig, Grammar, Problem, Production, Registry, SymbolRef as S};

use crate::dataset::{Cell, Dataset, DatasetError};
use crate::node::{one, Node};
use crate::spec::BenchmarkSpec;

pub const ROWS: usize = 100;
pub const VECTOR_LEN: usize = 5;
pub const DATA_SEED: u64 = 11;

#[derive(Debug, Clone, PartialEq)]
pub enum RealExpr {
    Literal(f64),
    Feature(usize),
    Sum(Box<RealExpr>, Box<RealExpr>),
    Average(VectorExpr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum VectorExpr {
    Feature(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Real(RealExpr),
    Vector(VectorExpr),
}

pub type Value = Node<Expr>;

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

impl RealExpr {
    pub fn eval(&self, row: &[Cell]) -> f64 {
        match self {
            RealExpr::Literal(v) => *v,
            RealExpr::Feature(c) => row[*c].scalar().expect("validated scalar column"),
            RealExpr::Sum(a, b) => a.eval(row) + b.eval(row),
            RealExpr::Average(v) => mean(v.eval(row)),
        }
    }
}

impl VectorExpr {
    pub fn eval<'a>(&self, row: &'a [Cell]) -> &'a [f64] {
        match self {
            VectorExpr::Feature(c) => row[*c].vector().expect("validated vector column"),
        }
    }
}

pub fn synthesize(seed: u64, rows: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut features = Vec::with_capacity(rows);
    let mut targets = Vec::with_capacity(rows);
    for _ in 0..rows {
        let mut row: Vec<Cell> = (0..3)
            .map(|_| Cell::Scalar(rng.gen_range(-1.0..=1.0)))
            .collect();
        for _ in 0..3 {
            row.push(Cell::Vector(
                (0..VECTOR_LEN).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
            ));
        }
        let target =
            mean(row[4].vector().expect("vector column")) + row[0].scalar().expect("scalar column");
        features.push(row);
        targets.push(target);
    }
    Dataset::new(features, targets).expect("rectangular by construction")
}

pub struct Vectorial {
    data: Dataset,
}

impl Vectorial {
    /// Requires three scalar columns followed by three non-empty vector
    /// columns.
    pub fn new(data: Dataset) -> Result<Self, DatasetError> {
        let first = &data.features[0];
        let shape = |column: usize, message: &str| DatasetError::Shape {
            line: 1,
            column,
            message: message.into(),
        };
        if first.len() != 6 {
            return Err(shape(first.len(), "vectorialgp needs 6 feature columns"));
        }
        for (c, cell) in first.iter().enumerate() {
            match (c < 3, cell) {
                (true, Cell::Scalar(_)) => {}
                (false, Cell::Vector(v)) if !v.is_empty() => {}
                (true, _) => return Err(shape(c, "columns 0-2 must be scalars")),
                (false, _) => return Err(shape(c, "columns 3-5 must be vectors")),
            }
        }
        Ok(Vectorial { data })
    }

    pub fn rmse(&self, e: &RealExpr) -> f64 {
        let sse: f64 = self
            .data
            .features
            .iter()
            .zip(&self.data.targets)
            .map(|(row, &y)| (e.eval(row) - y).powi(2))
            .sum();
        (sse / self.data.len() as f64).sqrt()
    }
}

impl Problem<Value> for Vectorial {
    fn fitness(&self, phenotype: &Value) -> f64 {
        match phenotype {
            Node::Expr(Expr::Real(e)) => -self.rmse(e),
            _ => f64::NAN,
        }
    }

    fn direction(&self) -> Direction {
        Direction::Maximize
    }
}

fn real(node: Node<Expr>) -> Result<RealExpr, typegp::EvalError> {
    match node.into_expr()? {
        Expr::Real(r) => Ok(r),
        Expr::Vector(_) => Err(typegp::EvalError::failed("expected a real")),
    }
}

pub fn grammar() -> Grammar<Value> {
    let mut reg = Registry::<Value>::new();
    reg.register_nonterminal("Real").expect("fresh registry");
    reg.register_nonterminal("Vector").expect("fresh registry");
    let productions = [
        Production::<Value>::new("FloatLiteral", "Real")
            .field("value", S::real())
            .action(|args| {
                Ok(Node::Expr(Expr::Real(RealExpr::Literal(
                    one(args)?.as_real()?,
                ))))
            }),
        Production::<Value>::new("RealFeature", "Real")
            .field(
                "column",
                S::annotated(S::int(), IntRange::new(0, 2).expect("valid range")),
            )
            .action(|args| {
                Ok(Node::Expr(Expr::Real(RealExpr::Feature(
                    one(args)?.as_int()? as usize,
                ))))
            }),
        Production::<Value>::new("RealSum", "Real")
            .field("left", S::nt("Real"))
            .field("right", S::nt("Real"))
            .action(|args| {
                let mut it = args.into_iter();
                let (a, b) = (it.next(), it.next());
                match (a, b) {
                    (Some(a), Some(b)) => Ok(Node::Expr(Expr::Real(RealExpr::Sum(
                        Box::new(real(a)?),
                        Box::new(real(b)?),
                    )))),
                    _ => Err(typegp::EvalError::failed("expected two arguments")),
                }
            }),
        Production::<Value>::new("Average", "Real")
            .field("values", S::nt("Vector"))
            .action(|args| match one(args)?.into_expr()? {
                Expr::Vector(v) => Ok(Node::Expr(Expr::Real(RealExpr::Average(v)))),
                Expr::Real(_) => Err(typegp::EvalError::failed("expected a vector")),
            }),
        Production::<Value>::new("VectorFeature", "Vector")
            .field(
                "column",
                S::annotated(S::int(), IntRange::new(3, 5).expect("valid range")),
            )
            .action(|args| {
                Ok(Node::Expr(Expr::Vector(VectorExpr::Feature(
                    one(args)?.as_int()? as usize,
                ))))
            }),
    ];
    for p in productions {
        reg.register_production(p).expect("unique names");
    }
    reg.extract_grammar("Real")
        .expect("vectorialgp grammar is valid")
}

pub fn spec(data: Option<Dataset>) -> Result<BenchmarkSpec<Value, Vectorial>, DatasetError> {
    let problem = Vectorial::new(data.unwrap_or_else(|| synthesize(DATA_SEED, ROWS)))?;
    Ok(BenchmarkSpec {
        name: "vectorialgp",
        grammar: grammar(),
        problem,
        defaults: GpConfig::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_target_scores_zero() {
        let p = Vectorial::new(synthesize(DATA_SEED, ROWS)).unwrap();
        let planted = RealExpr::Sum(
            Box::new(RealExpr::Feature(0)),
            Box::new(RealExpr::Average(VectorExpr::Feature(4))),
        );
        assert_eq!(p.rmse(&planted), 0.0);
        assert!(p.rmse(&RealExpr::Feature(0)) > 0.0);
    }

    #[test]
    fn average_of_a_known_vector() {
        let row = vec![
            Cell::Scalar(0.0),
            Cell::Scalar(0.0),
            Cell::Scalar(0.0),
            Cell::Vector(vec![1.0, 2.0, 3.0, 4.0, 5.0]),
        ];
        assert_eq!(RealExpr::Average(VectorExpr::Feature(3)).eval(&row), 3.0);
    }

    #[test]
    fn dataset_shape_is_checked() {
        assert_eq!(synthesize(1, 10).columns(), 6);
        assert!(Vectorial::new(Dataset::parse("1,2,3,4,5,6,7\n").unwrap()).is_err());
        assert!(Vectorial::new(Dataset::parse("1,2,3|4,4|4,5|5,6|6,7\n").unwrap()).is_err());
        assert!(Vectorial::new(Dataset::parse("1,2,3,4|4,5|5,6|6,7\n").unwrap()).is_ok());
    }
}
