//! Symbolic regression of x⁴ + x³ + x² + x on 20 points in [-1, 1].

use typegp::handlers::FloatRange;
use typegp::{Direction, GpConfig, Grammar, Problem, Production, Registry, SymbolRef as S};

use crate::node::{one, two, Node};
use crate::spec::BenchmarkSpec;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    X,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

pub type Value = Node<Expr>;

/// Division that returns 1 when the denominator is (nearly) zero.
pub fn protected_div(a: f64, b: f64) -> f64 {
    if b.abs() < 1e-9 {
        1.0
    } else {
        a / b
    }
}

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::X => x,
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => protected_div(a.eval(x), b.eval(x)),
        }
    }
}

pub fn target(x: f64) -> f64 {
    x * x * x * x + x * x * x + x * x + x
}

pub fn sample_points() -> Vec<f64> {
    (0..20).map(|i| -1.0 + 2.0 * i as f64 / 19.0).collect()
}

pub struct Regression {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Default for Regression {
    fn default() -> Self {
        let xs = sample_points();
        let ys = xs.iter().map(|&x| target(x)).collect();
        Regression { xs, ys }
    }
}

impl Regression {
    pub fn rmse(&self, e: &Expr) -> f64 {
        let sse: f64 = self
            .xs
            .iter()
            .zip(&self.ys)
            .map(|(&x, &y)| (e.eval(x) - y).powi(2))
            .sum();
        (sse / self.xs.len() as f64).sqrt()
    }
}

impl Problem<Value> for Regression {
    fn fitness(&self, phenotype: &Value) -> f64 {
        match phenotype {
            Node::Expr(e) => -self.rmse(e),
            _ => f64::NAN,
        }
    }

    fn direction(&self) -> Direction {
        Direction::Maximize
    }
}

pub fn grammar() -> Grammar<Value> {
    let mut reg = Registry::<Value>::new();
    reg.register_nonterminal("Expr").expect("fresh registry");
    let binary = |name: &str, build: fn(Box<Expr>, Box<Expr>) -> Expr| {
        Production::<Value>::new(name, "Expr")
            .field("left", S::nt("Expr"))
            .field("right", S::nt("Expr"))
            .action(move |args| {
                let (a, b) = two(args)?;
                Ok(Node::Expr(build(a, b)))
            })
    };
    let productions = [
        binary("Add", Expr::Add),
        binary("Sub", Expr::Sub),
        binary("Mul", Expr::Mul),
        binary("Div", Expr::Div),
        Production::<Value>::new("Var", "Expr").action(|_| Ok(Node::Expr(Expr::X))),
        Production::<Value>::new("Const", "Expr")
            .field(
                "value",
                S::annotated(S::real(), FloatRange::new(-1.0, 1.0).expect("valid range")),
            )
            .action(|args| Ok(Node::Expr(Expr::Const(one(args)?.as_real()?)))),
    ];
    for p in productions {
        reg.register_production(p).expect("unique names");
    }
    reg.extract_grammar("Expr")
        .expect("regression grammar is valid")
}

pub fn spec() -> BenchmarkSpec<Value, Regression> {
    BenchmarkSpec {
        name: "regression",
        grammar: grammar(),
        problem: Regression::default(),
        defaults: GpConfig::default(),
    }
}
