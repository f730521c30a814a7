//! Learn Conway's next-state rule from a 3×3 neighbourhood.
//!
//! Cells are numbered row-major, 0–8, with the centre at 4. Fitness is the
//! accuracy over all 512 neighbourhoods.

use typegp::handlers::IntRange;
use typegp::{
    Direction, EvalError, GpConfig, Grammar, Problem, Production, Registry, SymbolRef as S,
};

use crate::node::{one, two, Node};
use crate::spec::BenchmarkSpec;

pub const CENTRE: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum Rule {
    And(Box<Rule>, Box<Rule>),
    Or(Box<Rule>, Box<Rule>),
    Not(Box<Rule>),
    Cell(usize),
    NeighborsEq(u32),
    NeighborsGt(u32),
}

pub type Value = Node<Rule>;

/// Cell `i` of neighbourhood `n` is alive iff bit `i` is set.
pub fn alive(n: u16, i: usize) -> bool {
    n >> i & 1 == 1
}

pub fn live_neighbors(n: u16) -> u32 {
    (n & !(1 << CENTRE)).count_ones()
}

pub fn conway(n: u16) -> bool {
    let k = live_neighbors(n);
    k == 3 || (alive(n, CENTRE) && k == 2)
}

impl Rule {
    pub fn eval(&self, n: u16) -> bool {
        match self {
            Rule::And(a, b) => a.eval(n) && b.eval(n),
            Rule::Or(a, b) => a.eval(n) || b.eval(n),
            Rule::Not(a) => !a.eval(n),
            Rule::Cell(i) => alive(n, *i),
            Rule::NeighborsEq(k) => live_neighbors(n) == *k,
            Rule::NeighborsGt(k) => live_neighbors(n) > *k,
        }
    }

    /// `N = 3 ∨ (centre ∧ N = 2)`.
    pub fn conway() -> Rule {
        Rule::Or(
            Box::new(Rule::NeighborsEq(3)),
            Box::new(Rule::And(
                Box::new(Rule::Cell(CENTRE)),
                Box::new(Rule::NeighborsEq(2)),
            )),
        )
    }
}

#[derive(Debug, Default)]
pub struct GameOfLife;

impl GameOfLife {
    pub fn accuracy(&self, rule: &Rule) -> f64 {
        let hits = (0..512u16).filter(|&n| rule.eval(n) == conway(n)).count();
        hits as f64 / 512.0
    }
}

impl Problem<Value> for GameOfLife {
    fn fitness(&self, phenotype: &Value) -> f64 {
        match phenotype {
            Node::Expr(r) => self.accuracy(r),
            _ => f64::NAN,
        }
    }

    fn direction(&self) -> Direction {
        Direction::Maximize
    }

    fn target_fitness(&self) -> Option<f64> {
        Some(1.0)
    }
}

fn count(args: Vec<Value>) -> Result<u32, EvalError> {
    Ok(one(args)?.as_int()? as u32)
}

pub fn grammar() -> Grammar<Value> {
    let mut reg = Registry::<Value>::new();
    reg.register_nonterminal("Rule").expect("fresh registry");
    let binary = |name: &str, build: fn(Box<Rule>, Box<Rule>) -> Rule| {
        Production::<Value>::new(name, "Rule")
            .field("left", S::nt("Rule"))
            .field("right", S::nt("Rule"))
            .action(move |args| {
                let (a, b) = two(args)?;
                Ok(Node::Expr(build(a, b)))
            })
    };
    let range = || S::annotated(S::int(), IntRange::new(0, 8).expect("valid range"));
    let productions = [
        binary("And", Rule::And),
        binary("Or", Rule::Or),
        Production::<Value>::new("Not", "Rule")
            .field("operand", S::nt("Rule"))
            .action(|args| Ok(Node::Expr(Rule::Not(Box::new(one(args)?.into_expr()?))))),
        Production::<Value>::new("Cell", "Rule")
            .field("index", range())
            .action(|args| Ok(Node::Expr(Rule::Cell(count(args)? as usize)))),
        Production::<Value>::new("NeighborsEq", "Rule")
            .field("count", range())
            .action(|args| Ok(Node::Expr(Rule::NeighborsEq(count(args)?)))),
        Production::<Value>::new("NeighborsGt", "Rule")
            .field("count", range())
            .action(|args| Ok(Node::Expr(Rule::NeighborsGt(count(args)?)))),
    ];
    for p in productions {
        reg.register_production(p).expect("unique names");
    }
    reg.extract_grammar("Rule")
        .expect("game_of_life grammar is valid")
}

pub fn spec() -> BenchmarkSpec<Value, GameOfLife> {
    BenchmarkSpec {
        name: "game_of_life",
        grammar: grammar(),
        problem: GameOfLife,
        defaults: GpConfig::default(),
    }
}
