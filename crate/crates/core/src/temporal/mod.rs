//! The temporal constraint language: formulas over staged qualitative
//! relations with both future and past operators, interpreted on bounded
//! intervals of a simulation.
//!
//! [`eval`] is the reference semantics. It is deliberately direct (a
//! recursive interpreter over ground traces) and shares no code with the
//! constraint translations, which are tested against it.

mod eval;
mod nnf;
mod parse;

pub use eval::{eval, Trace};
pub use nnf::{nnf, NnfError};
pub(crate) use nnf::is_nnf as nnf_check;
pub use parse::{parse_formula, parse_rule, ParseError};

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Comparison in an atomic formula.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AtomOp {
    Eq,
    Ne,
}

impl AtomOp {
    pub fn flipped(self) -> AtomOp {
        match self {
            AtomOp::Eq => AtomOp::Ne,
            AtomOp::Ne => AtomOp::Eq,
        }
    }
}

/// Temporal formulas. Objects and relations are referenced by name and
/// resolved against a scenario when formulas are evaluated or translated.
///
/// `Member`, `IfThenElse` and the bounded quantifiers are definable
/// abbreviations; [`desugar`] removes them. `False`, the weak steps and the
/// release operators arise from negation normal form over the bounded
/// semantics rather than from the surface language.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    True,
    False,
    Atom {
        a: String,
        b: String,
        op: AtomOp,
        rel: String,
    },
    /// `Q[a,b] ∈ rels` (or `∉` when `member` is false).
    Member {
        a: String,
        b: String,
        member: bool,
        rels: Vec<String>,
    },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    IfThenElse(Box<Formula>, Box<Formula>, Box<Formula>),
    ForAll {
        binder: String,
        set: Vec<String>,
        body: Box<Formula>,
    },
    Exists {
        binder: String,
        set: Vec<String>,
        body: Box<Formula>,
    },
    // future operators
    Next(Box<Formula>),
    WeakNext(Box<Formula>),
    Always(Box<Formula>),
    Eventually(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    // past operators
    Prev(Box<Formula>),
    WeakPrev(Box<Formula>),
    AlwaysPast(Box<Formula>),
    EventuallyPast(Box<Formula>),
    Since(Box<Formula>, Box<Formula>),
    ReleasePast(Box<Formula>, Box<Formula>),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Future,
    Past,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Future => write!(f, "future"),
            Direction::Past => write!(f, "past"),
        }
    }
}

impl Formula {
    pub fn atom(a: &str, b: &str, op: AtomOp, rel: &str) -> Formula {
        Formula::Atom {
            a: a.into(),
            b: b.into(),
            op,
            rel: rel.into(),
        }
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Does the formula contain future (resp. past) temporal operators?
    pub fn uses_direction(&self, dir: Direction) -> bool {
        let here = match self {
            Formula::Next(_)
            | Formula::WeakNext(_)
            | Formula::Always(_)
            | Formula::Eventually(_)
            | Formula::Until(..)
            | Formula::Release(..) => dir == Direction::Future,
            Formula::Prev(_)
            | Formula::WeakPrev(_)
            | Formula::AlwaysPast(_)
            | Formula::EventuallyPast(_)
            | Formula::Since(..)
            | Formula::ReleasePast(..) => dir == Direction::Past,
            _ => false,
        };
        here || self.children().iter().any(|c| c.uses_direction(dir))
    }

    /// A formula is pure in a direction when it contains no temporal
    /// operator of the opposite direction.
    pub fn is_pure(&self, dir: Direction) -> bool {
        !self.uses_direction(match dir {
            Direction::Future => Direction::Past,
            Direction::Past => Direction::Future,
        })
    }

    pub fn is_temporal(&self) -> bool {
        self.uses_direction(Direction::Future) || self.uses_direction(Direction::Past)
    }

    fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Member { .. } => {
                Vec::new()
            }
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::WeakNext(f)
            | Formula::Always(f)
            | Formula::Eventually(f)
            | Formula::Prev(f)
            | Formula::WeakPrev(f)
            | Formula::AlwaysPast(f)
            | Formula::EventuallyPast(f)
            | Formula::ForAll { body: f, .. }
            | Formula::Exists { body: f, .. } => alloc::vec![f],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b)
            | Formula::Since(a, b)
            | Formula::ReleasePast(a, b) => alloc::vec![a, b],
            Formula::IfThenElse(a, b, c) => alloc::vec![a, b, c],
        }
    }

    /// Free object names referenced by atoms (quantifier binders excluded).
    pub fn free_objects(&self) -> Vec<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match f {
                Formula::Atom { a, b, .. } | Formula::Member { a, b, .. } => {
                    for name in [a, b] {
                        if !bound.contains(name) && !out.contains(name) {
                            out.push(name.clone());
                        }
                    }
                }
                Formula::ForAll { binder, body, .. } | Formula::Exists { binder, body, .. } => {
                    bound.push(binder.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
                _ => {
                    for c in f.children() {
                        walk(c, bound, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Relation names referenced anywhere in the formula.
    pub fn relation_names(&self) -> Vec<String> {
        fn walk(f: &Formula, out: &mut Vec<String>) {
            match f {
                Formula::Atom { rel, .. } => {
                    if !out.contains(rel) {
                        out.push(rel.clone());
                    }
                }
                Formula::Member { rels, .. } => {
                    for rel in rels {
                        if !out.contains(rel) {
                            out.push(rel.clone());
                        }
                    }
                }
                _ => {
                    for c in f.children() {
                        walk(c, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

/// Substitute object name `from` with `to` in atoms, respecting shadowing
/// by inner quantifiers.
fn substitute(f: &Formula, from: &str, to: &str) -> Formula {
    let sub = |name: &String| -> String {
        if name == from {
            to.into()
        } else {
            name.clone()
        }
    };
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom { a, b, op, rel } => Formula::Atom {
            a: sub(a),
            b: sub(b),
            op: *op,
            rel: rel.clone(),
        },
        Formula::Member { a, b, member, rels } => Formula::Member {
            a: sub(a),
            b: sub(b),
            member: *member,
            rels: rels.clone(),
        },
        Formula::ForAll { binder, set, body } => Formula::ForAll {
            binder: binder.clone(),
            set: set.clone(),
            body: Box::new(if binder == from {
                body.as_ref().clone()
            } else {
                substitute(body, from, to)
            }),
        },
        Formula::Exists { binder, set, body } => Formula::Exists {
            binder: binder.clone(),
            set: set.clone(),
            body: Box::new(if binder == from {
                body.as_ref().clone()
            } else {
                substitute(body, from, to)
            }),
        },
        Formula::Not(g) => Formula::Not(Box::new(substitute(g, from, to))),
        Formula::Next(g) => Formula::Next(Box::new(substitute(g, from, to))),
        Formula::WeakNext(g) => Formula::WeakNext(Box::new(substitute(g, from, to))),
        Formula::Always(g) => Formula::Always(Box::new(substitute(g, from, to))),
        Formula::Eventually(g) => Formula::Eventually(Box::new(substitute(g, from, to))),
        Formula::Prev(g) => Formula::Prev(Box::new(substitute(g, from, to))),
        Formula::WeakPrev(g) => Formula::WeakPrev(Box::new(substitute(g, from, to))),
        Formula::AlwaysPast(g) => Formula::AlwaysPast(Box::new(substitute(g, from, to))),
        Formula::EventuallyPast(g) => Formula::EventuallyPast(Box::new(substitute(g, from, to))),
        Formula::And(a, b) => Formula::and(substitute(a, from, to), substitute(b, from, to)),
        Formula::Or(a, b) => Formula::or(substitute(a, from, to), substitute(b, from, to)),
        Formula::Implies(a, b) => {
            Formula::implies(substitute(a, from, to), substitute(b, from, to))
        }
        Formula::Until(a, b) => Formula::Until(
            Box::new(substitute(a, from, to)),
            Box::new(substitute(b, from, to)),
        ),
        Formula::Release(a, b) => Formula::Release(
            Box::new(substitute(a, from, to)),
            Box::new(substitute(b, from, to)),
        ),
        Formula::Since(a, b) => Formula::Since(
            Box::new(substitute(a, from, to)),
            Box::new(substitute(b, from, to)),
        ),
        Formula::ReleasePast(a, b) => Formula::ReleasePast(
            Box::new(substitute(a, from, to)),
            Box::new(substitute(b, from, to)),
        ),
        Formula::IfThenElse(a, b, c) => Formula::IfThenElse(
            Box::new(substitute(a, from, to)),
            Box::new(substitute(b, from, to)),
            Box::new(substitute(c, from, to)),
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DesugarError {
    UnknownObject(String),
}

impl fmt::Display for DesugarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DesugarError::UnknownObject(name) => {
                write!(f, "formula references unknown object `{name}`")
            }
        }
    }
}

/// Expand membership, bounded quantifiers and if-then-else into core
/// connectives. The result contains only `True`/`False`/atoms, Boolean
/// connectives and temporal operators, with every object reference resolved
/// against `objects`.
///
/// A universal quantifier over the empty set becomes `True`, an existential
/// one `False`.
pub fn desugar(f: &Formula, objects: &[String]) -> Result<Formula, DesugarError> {
    let check_obj = |name: &String| -> Result<(), DesugarError> {
        if objects.iter().any(|o| o == name) {
            Ok(())
        } else {
            Err(DesugarError::UnknownObject(name.clone()))
        }
    };
    match f {
        Formula::True => Ok(Formula::True),
        Formula::False => Ok(Formula::False),
        Formula::Atom { a, b, .. } => {
            check_obj(a)?;
            check_obj(b)?;
            Ok(f.clone())
        }
        Formula::Member { a, b, member, rels } => {
            check_obj(a)?;
            check_obj(b)?;
            let mut out = if *member { Formula::False } else { Formula::True };
            let op = if *member { AtomOp::Eq } else { AtomOp::Ne };
            for (i, rel) in rels.iter().enumerate() {
                let atom = Formula::atom(a, b, op, rel);
                out = if i == 0 {
                    atom
                } else if *member {
                    Formula::or(out, atom)
                } else {
                    Formula::and(out, atom)
                };
            }
            Ok(out)
        }
        Formula::IfThenElse(c, t, e) => {
            let c = desugar(c, objects)?;
            let t = desugar(t, objects)?;
            let e = desugar(e, objects)?;
            Ok(Formula::and(
                Formula::implies(c.clone(), t),
                Formula::implies(Formula::not(c), e),
            ))
        }
        Formula::ForAll { binder, set, body } | Formula::Exists { binder, set, body } => {
            let universal = matches!(f, Formula::ForAll { .. });
            for name in set {
                check_obj(name)?;
            }
            let mut out = None;
            for obj in set {
                let inst = desugar(&substitute(body, binder, obj), objects)?;
                out = Some(match out {
                    None => inst,
                    Some(acc) if universal => Formula::and(acc, inst),
                    Some(acc) => Formula::or(acc, inst),
                });
            }
            Ok(out.unwrap_or(if universal { Formula::True } else { Formula::False }))
        }
        Formula::Not(g) => Ok(Formula::not(desugar(g, objects)?)),
        Formula::And(a, b) => Ok(Formula::and(desugar(a, objects)?, desugar(b, objects)?)),
        Formula::Or(a, b) => Ok(Formula::or(desugar(a, objects)?, desugar(b, objects)?)),
        Formula::Implies(a, b) => {
            Ok(Formula::implies(desugar(a, objects)?, desugar(b, objects)?))
        }
        Formula::Next(g) => Ok(Formula::Next(Box::new(desugar(g, objects)?))),
        Formula::WeakNext(g) => Ok(Formula::WeakNext(Box::new(desugar(g, objects)?))),
        Formula::Always(g) => Ok(Formula::Always(Box::new(desugar(g, objects)?))),
        Formula::Eventually(g) => Ok(Formula::Eventually(Box::new(desugar(g, objects)?))),
        Formula::Prev(g) => Ok(Formula::Prev(Box::new(desugar(g, objects)?))),
        Formula::WeakPrev(g) => Ok(Formula::WeakPrev(Box::new(desugar(g, objects)?))),
        Formula::AlwaysPast(g) => Ok(Formula::AlwaysPast(Box::new(desugar(g, objects)?))),
        Formula::EventuallyPast(g) => {
            Ok(Formula::EventuallyPast(Box::new(desugar(g, objects)?)))
        }
        Formula::Until(a, b) => Ok(Formula::Until(
            Box::new(desugar(a, objects)?),
            Box::new(desugar(b, objects)?),
        )),
        Formula::Release(a, b) => Ok(Formula::Release(
            Box::new(desugar(a, objects)?),
            Box::new(desugar(b, objects)?),
        )),
        Formula::Since(a, b) => Ok(Formula::Since(
            Box::new(desugar(a, objects)?),
            Box::new(desugar(b, objects)?),
        )),
        Formula::ReleasePast(a, b) => Ok(Formula::ReleasePast(
            Box::new(desugar(a, objects)?),
            Box::new(desugar(b, objects)?),
        )),
    }
}

/// A closed time interval `[lo..hi]` with `lo <= hi`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Interval {
    lo: i64,
    hi: i64,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Interval {
        assert!(lo <= hi, "interval [{lo}..{hi}] is empty");
        Interval { lo, hi }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}..{}]", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarityError {
    pub side: Direction,
    pub offending: Direction,
}

impl fmt::Display for PolarityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} side of the rule contains {} temporal operators",
            self.side, self.offending
        )
    }
}

/// An inter-state rule `past => future`: whenever the past formula holds on
/// the prefix up to some stage, the future formula must hold from the next
/// stage on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterStateRule {
    pub past: Formula,
    pub future: Formula,
    pub label: String,
}

impl InterStateRule {
    pub fn new(past: Formula, future: Formula, label: &str) -> Result<Self, PolarityError> {
        if !past.is_pure(Direction::Past) {
            return Err(PolarityError {
                side: Direction::Past,
                offending: Direction::Future,
            });
        }
        if !future.is_pure(Direction::Future) {
            return Err(PolarityError {
                side: Direction::Future,
                offending: Direction::Past,
            });
        }
        Ok(InterStateRule {
            past,
            future,
            label: label.into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn objs(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn member_desugars_to_disjunction() {
        let f = Formula::Member {
            a: "A".into(),
            b: "B".into(),
            member: true,
            rels: alloc::vec!["inside".into(), "coveredby".into()],
        };
        let d = desugar(&f, &objs(&["A", "B"])).unwrap();
        assert_eq!(
            d,
            Formula::or(
                Formula::atom("A", "B", AtomOp::Eq, "inside"),
                Formula::atom("A", "B", AtomOp::Eq, "coveredby"),
            )
        );
    }

    #[test]
    fn non_member_desugars_to_conjunction_of_ne() {
        let f = Formula::Member {
            a: "A".into(),
            b: "B".into(),
            member: false,
            rels: alloc::vec!["inside".into(), "coveredby".into()],
        };
        let d = desugar(&f, &objs(&["A", "B"])).unwrap();
        assert_eq!(
            d,
            Formula::and(
                Formula::atom("A", "B", AtomOp::Ne, "inside"),
                Formula::atom("A", "B", AtomOp::Ne, "coveredby"),
            )
        );
    }

    #[test]
    fn forall_expands_to_conjunction() {
        let f = Formula::ForAll {
            binder: "s".into(),
            set: alloc::vec!["B".into(), "C".into()],
            body: Box::new(Formula::atom("s", "A", AtomOp::Eq, "meet")),
        };
        let d = desugar(&f, &objs(&["A", "B", "C"])).unwrap();
        assert_eq!(
            d,
            Formula::and(
                Formula::atom("B", "A", AtomOp::Eq, "meet"),
                Formula::atom("C", "A", AtomOp::Eq, "meet"),
            )
        );
    }

    #[test]
    fn empty_quantifiers() {
        let all = Formula::ForAll {
            binder: "s".into(),
            set: alloc::vec![],
            body: Box::new(Formula::atom("s", "A", AtomOp::Eq, "meet")),
        };
        assert_eq!(desugar(&all, &objs(&["A"])).unwrap(), Formula::True);
        let ex = Formula::Exists {
            binder: "s".into(),
            set: alloc::vec![],
            body: Box::new(Formula::atom("s", "A", AtomOp::Eq, "meet")),
        };
        assert_eq!(desugar(&ex, &objs(&["A"])).unwrap(), Formula::False);
    }

    #[test]
    fn if_then_else_expands() {
        let a = Formula::atom("A", "B", AtomOp::Eq, "equal");
        let b = Formula::atom("A", "B", AtomOp::Eq, "meet");
        let c = Formula::atom("A", "B", AtomOp::Eq, "overlap");
        let f = Formula::IfThenElse(
            Box::new(a.clone()),
            Box::new(b.clone()),
            Box::new(c.clone()),
        );
        let d = desugar(&f, &objs(&["A", "B"])).unwrap();
        assert_eq!(
            d,
            Formula::and(
                Formula::implies(a.clone(), b),
                Formula::implies(Formula::not(a), c),
            )
        );
    }

    #[test]
    fn unknown_object_is_an_error() {
        let f = Formula::atom("A", "ghost", AtomOp::Eq, "meet");
        assert_eq!(
            desugar(&f, &objs(&["A", "B"])),
            Err(DesugarError::UnknownObject("ghost".into()))
        );
    }

    #[test]
    fn shadowed_binder_is_not_substituted() {
        // forall s in {B}: (Q[s,A]=meet & exists s in {C}: Q[s,A]=meet)
        let inner = Formula::Exists {
            binder: "s".into(),
            set: alloc::vec!["C".into()],
            body: Box::new(Formula::atom("s", "A", AtomOp::Eq, "meet")),
        };
        let f = Formula::ForAll {
            binder: "s".into(),
            set: alloc::vec!["B".into()],
            body: Box::new(Formula::and(
                Formula::atom("s", "A", AtomOp::Eq, "meet"),
                inner,
            )),
        };
        let d = desugar(&f, &objs(&["A", "B", "C"])).unwrap();
        assert_eq!(
            d,
            Formula::and(
                Formula::atom("B", "A", AtomOp::Eq, "meet"),
                Formula::atom("C", "A", AtomOp::Eq, "meet"),
            )
        );
    }

    #[test]
    fn rule_polarity_is_checked() {
        let past_ok = Formula::atom("A", "B", AtomOp::Eq, "meet");
        let future_ok = Formula::Eventually(Box::new(past_ok.clone()));
        assert!(InterStateRule::new(past_ok.clone(), future_ok.clone(), "r").is_ok());
        let err = InterStateRule::new(future_ok, past_ok, "r").unwrap_err();
        assert_eq!(err.side, Direction::Past);
    }

    #[test]
    fn purity_checks() {
        let f = Formula::Eventually(Box::new(Formula::Prev(Box::new(Formula::True))));
        assert!(!f.is_pure(Direction::Future));
        assert!(!f.is_pure(Direction::Past));
        let g = Formula::atom("A", "B", AtomOp::Eq, "meet");
        assert!(g.is_pure(Direction::Future) && g.is_pure(Direction::Past));
    }
}
