//! Independent min-depth oracle: breadth-first enumeration of derivation
//! trees, level by level, measuring the trees it actually builds. Works on
//! raw productions, so it also covers registries that fail extraction.
//! Shared with the acceptance suite.
#![allow(dead_code)]

use std::collections::HashMap;

use typegp::{Grammar, Production, Registry, SymbolRef};

/// Trees kept per non-terminal. Shallower trees are inserted first, so the
/// cap never hides a minimum.
const CAP: usize = 48;

#[derive(Clone, PartialEq)]
struct Tree(Vec<Tree>);

impl Tree {
    fn depth(&self) -> usize {
        1 + self.0.iter().map(Tree::depth).max().unwrap_or(0)
    }
}

pub struct Enumeration {
    /// Min depth per non-terminal, `None` when nothing of depth <= limit exists.
    pub nonterminals: HashMap<String, Option<usize>>,
    pub productions: HashMap<String, Option<usize>>,
}

/// Trees of depth <= `level` for `symbol`, drawn from the non-terminal
/// trees enumerated so far.
fn options(symbol: &SymbolRef, level: usize, known: &HashMap<&str, Vec<Tree>>) -> Vec<Tree> {
    if level == 0 {
        return Vec::new();
    }
    match symbol {
        SymbolRef::NonTerminal(name) => known
            .get(name.as_str())
            .map(|trees| {
                trees
                    .iter()
                    .filter(|t| t.depth() <= level)
                    .cloned()
                    .collect()
            })
            .unwrap_or_default(),
        SymbolRef::Leaf(_) => vec![Tree(vec![])],
        // an empty list / absent optional is a single node
        SymbolRef::List(inner) | SymbolRef::Optional(inner) => {
            let mut out = vec![Tree(vec![])];
            out.extend(
                options(inner, level - 1, known)
                    .into_iter()
                    .take(CAP - 1)
                    .map(|t| Tree(vec![t])),
            );
            out
        }
        SymbolRef::Annotated(..) => panic!("the enumeration oracle does not model meta-handlers"),
    }
}

pub fn enumerate_productions<'a, V: 'a>(
    nonterminals: &[String],
    productions: &[&'a Production<V>],
    limit: usize,
) -> Enumeration {
    let mut nt_min: HashMap<String, Option<usize>> =
        nonterminals.iter().map(|n| (n.clone(), None)).collect();
    let mut prod_min: HashMap<String, Option<usize>> =
        productions.iter().map(|p| (p.name.clone(), None)).collect();
    // trees of depth <= level - 1, per non-terminal
    let mut known: HashMap<&str, Vec<Tree>> = HashMap::new();

    for level in 1..=limit {
        let mut next = known.clone();
        for p in productions {
            let mut partial: Vec<Vec<Tree>> = vec![vec![]];
            for field in &p.fields {
                let opts = options(&field.symbol, level - 1, &known);
                let mut grown = Vec::new();
                'outer: for prefix in &partial {
                    for o in &opts {
                        let mut v = prefix.clone();
                        v.push(o.clone());
                        grown.push(v);
                        if grown.len() >= CAP {
                            break 'outer;
                        }
                    }
                }
                partial = grown;
            }
            for children in partial {
                let tree = Tree(children);
                let d = tree.depth();
                assert!(d <= level);
                for slot in [
                    prod_min.get_mut(&p.name).unwrap(),
                    nt_min.get_mut(&p.implements).unwrap(),
                ] {
                    if slot.is_none_or(|m| d < m) {
                        *slot = Some(d);
                    }
                }
                let bucket = next.entry(p.implements.as_str()).or_default();
                if bucket.len() < CAP && !bucket.contains(&tree) {
                    bucket.push(tree);
                }
            }
        }
        known = next;
    }
    Enumeration {
        nonterminals: nt_min,
        productions: prod_min,
    }
}

pub fn enumerate<V>(grammar: &Grammar<V>, limit: usize) -> Enumeration {
    let names: Vec<String> = grammar
        .nonterminals()
        .iter()
        .map(|n| n.name.clone())
        .collect();
    let prods: Vec<&Production<V>> = grammar.productions().map(|(_, p)| p).collect();
    enumerate_productions(&names, &prods, limit)
}

pub fn enumerate_registry<V>(registry: &Registry<V>, limit: usize) -> Enumeration {
    let prods: Vec<&Production<V>> = registry.productions().iter().collect();
    enumerate_productions(registry.nonterminal_names(), &prods, limit)
}
