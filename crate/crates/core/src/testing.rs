//! Support for the exhaustive equivalence suites: a minimal two-relation
//! calculus, systematic formula enumeration and ground-trace enumeration.
//!
//! This lives in the library (rather than each test's own module) because
//! the same enumeration drives unit tests, integration tests and the
//! acceptance suite. Nothing here is used by the engine itself.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::calculus::{Calculus, Rel};
use crate::temporal::{AtomOp, Direction, Formula, Trace};

/// A two-relation calculus (`p`, `q`, identity `p`) for small exhaustive
/// tests. Valid per the calculus axioms, though tests that only need name
/// resolution ignore its tables.
pub fn tiny_calculus() -> Calculus {
    let src = "calculus tiny\n\
               relations: p q\n\
               identity: p\n\
               converse:\n\
               p -> p\n\
               q -> q\n\
               composition:\n\
               p ; p -> {p}\n\
               p ; q -> {q}\n\
               q ; p -> {q}\n\
               q ; q -> {p, q}\n\
               neighbourhood:\n\
               p -- q\n";
    let (c, warnings) = Calculus::parse(src).expect("tiny calculus is valid");
    assert!(warnings.is_empty());
    c
}

pub fn two_objects() -> Vec<String> {
    alloc::vec!["A".to_string(), "B".to_string()]
}

/// Atomic building blocks over the ordered pair (A, B) and relations p/q.
pub fn leaf_formulas() -> Vec<Formula> {
    alloc::vec![
        Formula::True,
        Formula::atom("A", "B", AtomOp::Eq, "p"),
        Formula::atom("A", "B", AtomOp::Ne, "p"),
        Formula::atom("A", "B", AtomOp::Eq, "q"),
    ]
}

fn unary_ops(dir: Direction) -> Vec<fn(Box<Formula>) -> Formula> {
    match dir {
        Direction::Future => alloc::vec![
            Formula::Not,
            Formula::Next,
            Formula::WeakNext,
            Formula::Always,
            Formula::Eventually,
        ],
        Direction::Past => alloc::vec![
            Formula::Not,
            Formula::Prev,
            Formula::WeakPrev,
            Formula::AlwaysPast,
            Formula::EventuallyPast,
        ],
    }
}

fn binary_ops(dir: Direction) -> Vec<fn(Box<Formula>, Box<Formula>) -> Formula> {
    fn and(a: Box<Formula>, b: Box<Formula>) -> Formula {
        Formula::And(a, b)
    }
    fn or(a: Box<Formula>, b: Box<Formula>) -> Formula {
        Formula::Or(a, b)
    }
    fn implies(a: Box<Formula>, b: Box<Formula>) -> Formula {
        Formula::Implies(a, b)
    }
    match dir {
        Direction::Future => alloc::vec![and, or, implies, Formula::Until, Formula::Release],
        Direction::Past => alloc::vec![and, or, implies, Formula::Since, Formula::ReleasePast],
    }
}

/// All direction-pure formulas up to the given operator depth over the
/// leaf pool. Depth 0 is the leaves themselves.
pub fn enumerate_formulas(dir: Direction, depth: usize) -> Vec<Formula> {
    let mut by_depth: Vec<Vec<Formula>> = alloc::vec![leaf_formulas()];
    for d in 1..=depth {
        let shallower: Vec<Formula> = by_depth.iter().flatten().cloned().collect();
        let exact_below = by_depth[d - 1].clone();
        let mut level = Vec::new();
        for op in unary_ops(dir) {
            for f in &exact_below {
                level.push(op(Box::new(f.clone())));
            }
        }
        for op in binary_ops(dir) {
            // at least one side must reach depth d-1
            for a in &exact_below {
                for b in &shallower {
                    level.push(op(Box::new(a.clone()), Box::new(b.clone())));
                }
            }
            for a in &shallower {
                if by_depth[d - 1].contains(a) {
                    continue; // already covered above
                }
                for b in &exact_below {
                    level.push(op(Box::new(a.clone()), Box::new(b.clone())));
                }
            }
        }
        by_depth.push(level);
    }
    by_depth.into_iter().flatten().collect()
}

/// All ground traces of the given length over the pair (A, B) and the tiny
/// calculus: one of `p`/`q` per time point, every combination.
pub fn enumerate_traces(horizon: usize) -> Vec<Trace> {
    let objects = two_objects();
    let rels: Vec<String> = alloc::vec!["p".to_string(), "q".to_string()];
    let mut out = Vec::new();
    for bits in 0..(1u32 << horizon) {
        let mut tr = Trace::new(&objects, &rels, horizon);
        for t in 0..horizon {
            let rel = Rel(((bits >> t) & 1) as u8);
            tr.set(t, 0, 1, rel);
        }
        out.push(tr);
    }
    out
}
