#![allow(dead_code)]

pub mod min_depth_oracle;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use typegp::handlers::{FloatRange, IntRange};
use typegp::{EvalError, Grammar, Production, Registry, SymbolRef as S, Value};

/// The VectorialGP-style grammar over a fixed 2-row dataset: columns 0..=2
/// are scalars and 3..=5 are 5-vectors. Evaluates to the sum over rows.
pub fn vectorial() -> Grammar<Value> {
    let mut reg = Registry::<Value>::new();
    reg.register_nonterminal("Real").unwrap();
    reg.register_nonterminal("Vector").unwrap();
    reg.register_production(
        Production::<Value>::new("FloatLiteral", "Real")
            .field("value", S::real())
            .action(|a| Ok(a[0].clone())),
    )
    .unwrap();
    reg.register_production(
        Production::<Value>::new("RealFeature", "Real")
            .field(
                "column",
                S::annotated(S::int(), IntRange::new(0, 2).unwrap()),
            )
            .action(|a| Ok(Value::Real(a[0].as_int()? as f64))),
    )
    .unwrap();
    reg.register_production(
        Production::<Value>::new("RealSum", "Real")
            .field("left", S::nt("Real"))
            .field("right", S::nt("Real"))
            .action(|a| Ok(Value::Real(a[0].as_real()? + a[1].as_real()?))),
    )
    .unwrap();
    reg.register_production(
        Production::<Value>::new("Average", "Real")
            .field("values", S::nt("Vector"))
            .action(|a| {
                let v = a[0].as_list()?;
                let sum: f64 = v
                    .iter()
                    .map(|x| x.as_real())
                    .sum::<Result<f64, EvalError>>()?;
                Ok(Value::Real(sum / v.len() as f64))
            }),
    )
    .unwrap();
    reg.register_production(
        Production::<Value>::new("VectorFeature", "Vector")
            .field(
                "column",
                S::annotated(S::int(), IntRange::new(3, 5).unwrap()),
            )
            .action(|a| {
                let c = a[0].as_int()?;
                Ok(Value::List(
                    (0..5).map(|i| Value::Real((c * i) as f64)).collect(),
                ))
            }),
    )
    .unwrap();
    reg.extract_grammar("Real").unwrap()
}

/// Integer arithmetic: Lit(0..=9) | Add | Mul | Neg.
pub fn arith() -> Grammar<Value> {
    let mut reg = Registry::<Value>::new();
    reg.register_nonterminal("Expr").unwrap();
    reg.register_production(
        Production::<Value>::new("Lit", "Expr")
            .field(
                "value",
                S::annotated(S::int(), IntRange::new(0, 9).unwrap()),
            )
            .action(|a| Ok(a[0].clone())),
    )
    .unwrap();
    reg.register_production(
        Production::<Value>::new("Add", "Expr")
            .field("l", S::nt("Expr"))
            .field("r", S::nt("Expr"))
            .action(|a| Ok(Value::Int(a[0].as_int()?.saturating_add(a[1].as_int()?)))),
    )
    .unwrap();
    reg.register_production(
        Production::<Value>::new("Mul", "Expr")
            .field("l", S::nt("Expr"))
            .field("r", S::nt("Expr"))
            .action(|a| Ok(Value::Int(a[0].as_int()?.saturating_mul(a[1].as_int()?)))),
    )
    .unwrap();
    reg.register_production(
        Production::<Value>::new("Neg", "Expr")
            .field("x", S::nt("Expr"))
            .action(|a| Ok(Value::Int(-a[0].as_int()?))),
    )
    .unwrap();
    reg.extract_grammar("Expr").unwrap()
}

/// A grammar exercising lists, optionals, every leaf kind and a float range.
pub fn structural() -> Grammar<Value> {
    let mut reg = Registry::<Value>::new();
    reg.register_nonterminal("Stmt").unwrap();
    reg.register_nonterminal("Atom").unwrap();
    reg.register_production(
        Production::<Value>::new("Block", "Stmt").field("body", S::list(S::nt("Stmt"))),
    )
    .unwrap();
    reg.register_production(
        Production::<Value>::new("If", "Stmt")
            .field("cond", S::boolean())
            .field("then", S::nt("Stmt"))
            .field("otherwise", S::optional(S::nt("Stmt"))),
    )
    .unwrap();
    reg.register_production(Production::<Value>::new("Emit", "Stmt").field("atom", S::nt("Atom")))
        .unwrap();
    reg.register_production(Production::<Value>::new("Name", "Atom").field("text", S::text()))
        .unwrap();
    reg.register_production(Production::<Value>::new("Num", "Atom").field(
        "x",
        S::annotated(S::real(), FloatRange::new(-1.0, 1.0).unwrap()),
    ))
    .unwrap();
    reg.register_production(
        Production::<Value>::new("Pair", "Atom")
            .field("a", S::int())
            .field("b", S::real()),
    )
    .unwrap();
    reg.extract_grammar("Stmt").unwrap()
}

/// A random registry with 1..=3 non-terminals and 1..=2 productions each
/// (at most 6 productions), fields drawn from non-terminal references,
/// native leaves, lists and optionals. May be non-productive.
pub fn random_registry(seed: u64) -> Registry<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_nt = rng.gen_range(1..=3);
    let names: Vec<String> = (0..n_nt).map(|i| format!("N{i}")).collect();
    let mut reg = Registry::<Value>::new();
    for n in &names {
        reg.register_nonterminal(n.clone()).unwrap();
    }
    let mut counter = 0;
    for n in &names {
        for _ in 0..rng.gen_range(1..=2) {
            let mut p = Production::<Value>::new(format!("P{counter}"), n.clone());
            counter += 1;
            for f in 0..rng.gen_range(0..=2) {
                let target = S::nt(names[rng.gen_range(0..n_nt)].clone());
                let symbol = match rng.gen_range(0..6) {
                    0 => S::int(),
                    1 => S::list(target),
                    2 => S::optional(target),
                    _ => target,
                };
                p = p.field(format!("f{f}"), symbol);
            }
            reg.register_production(p).unwrap();
        }
    }
    reg
}
