//! Negation normal form under the bounded semantics.
//!
//! Negation is pushed down to atoms, where it becomes an `=`/`≠` flip. The
//! temporal duals are forced by the bounded interval semantics: the strong
//! next flips to the weak next (true at the end of the interval), `Always`
//! and `Eventually` exchange, and `Until`/`Since` flip to their release
//! forms. The resulting formula contains no `Not`, `Implies`, `Member`,
//! if-then-else or quantifier nodes.

use alloc::boxed::Box;
use core::fmt;

use super::{Direction, Formula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NnfError {
    /// The formula mixes past and future operators.
    MixedDirection,
    /// The formula still contains sugar; desugar first.
    NotDesugared,
}

impl fmt::Display for NnfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NnfError::MixedDirection => write!(f, "formula mixes past and future operators"),
            NnfError::NotDesugared => {
                write!(f, "formula contains sugar (membership, ite, quantifiers)")
            }
        }
    }
}

/// Rewrite a desugared, direction-pure formula into negation normal form.
/// The result is semantically equivalent under `eval` on every trace and
/// interval.
pub fn nnf(f: &Formula, dir: Direction) -> Result<Formula, NnfError> {
    if !f.is_pure(dir) {
        return Err(NnfError::MixedDirection);
    }
    positive(f)
}

fn positive(f: &Formula) -> Result<Formula, NnfError> {
    Ok(match f {
        Formula::True | Formula::False | Formula::Atom { .. } => f.clone(),
        Formula::Member { .. }
        | Formula::IfThenElse(..)
        | Formula::ForAll { .. }
        | Formula::Exists { .. } => return Err(NnfError::NotDesugared),
        Formula::Not(g) => negative(g)?,
        Formula::And(a, b) => Formula::and(positive(a)?, positive(b)?),
        Formula::Or(a, b) => Formula::or(positive(a)?, positive(b)?),
        Formula::Implies(a, b) => Formula::or(negative(a)?, positive(b)?),
        Formula::Next(g) => Formula::Next(Box::new(positive(g)?)),
        Formula::WeakNext(g) => Formula::WeakNext(Box::new(positive(g)?)),
        Formula::Always(g) => Formula::Always(Box::new(positive(g)?)),
        Formula::Eventually(g) => Formula::Eventually(Box::new(positive(g)?)),
        Formula::Until(chi, phi) => {
            Formula::Until(Box::new(positive(chi)?), Box::new(positive(phi)?))
        }
        Formula::Release(chi, phi) => {
            Formula::Release(Box::new(positive(chi)?), Box::new(positive(phi)?))
        }
        Formula::Prev(g) => Formula::Prev(Box::new(positive(g)?)),
        Formula::WeakPrev(g) => Formula::WeakPrev(Box::new(positive(g)?)),
        Formula::AlwaysPast(g) => Formula::AlwaysPast(Box::new(positive(g)?)),
        Formula::EventuallyPast(g) => Formula::EventuallyPast(Box::new(positive(g)?)),
        Formula::Since(chi, phi) => {
            Formula::Since(Box::new(positive(chi)?), Box::new(positive(phi)?))
        }
        Formula::ReleasePast(chi, phi) => {
            Formula::ReleasePast(Box::new(positive(chi)?), Box::new(positive(phi)?))
        }
    })
}

fn negative(f: &Formula) -> Result<Formula, NnfError> {
    Ok(match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Atom { a, b, op, rel } => Formula::Atom {
            a: a.clone(),
            b: b.clone(),
            op: op.flipped(),
            rel: rel.clone(),
        },
        Formula::Member { .. }
        | Formula::IfThenElse(..)
        | Formula::ForAll { .. }
        | Formula::Exists { .. } => return Err(NnfError::NotDesugared),
        Formula::Not(g) => positive(g)?,
        Formula::And(a, b) => Formula::or(negative(a)?, negative(b)?),
        Formula::Or(a, b) => Formula::and(negative(a)?, negative(b)?),
        Formula::Implies(a, b) => Formula::and(positive(a)?, negative(b)?),
        Formula::Next(g) => Formula::WeakNext(Box::new(negative(g)?)),
        Formula::WeakNext(g) => Formula::Next(Box::new(negative(g)?)),
        Formula::Always(g) => Formula::Eventually(Box::new(negative(g)?)),
        Formula::Eventually(g) => Formula::Always(Box::new(negative(g)?)),
        Formula::Until(chi, phi) => {
            Formula::Release(Box::new(negative(chi)?), Box::new(negative(phi)?))
        }
        Formula::Release(chi, phi) => {
            Formula::Until(Box::new(negative(chi)?), Box::new(negative(phi)?))
        }
        Formula::Prev(g) => Formula::WeakPrev(Box::new(negative(g)?)),
        Formula::WeakPrev(g) => Formula::Prev(Box::new(negative(g)?)),
        Formula::AlwaysPast(g) => Formula::EventuallyPast(Box::new(negative(g)?)),
        Formula::EventuallyPast(g) => Formula::AlwaysPast(Box::new(negative(g)?)),
        Formula::Since(chi, phi) => {
            Formula::ReleasePast(Box::new(negative(chi)?), Box::new(negative(phi)?))
        }
        Formula::ReleasePast(chi, phi) => {
            Formula::Since(Box::new(negative(chi)?), Box::new(negative(phi)?))
        }
    })
}

/// True when negations sit only on atoms (i.e. nowhere, since atom negation
/// is expressed through the comparison operator).
pub(crate) fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::Not(_)
        | Formula::Implies(..)
        | Formula::Member { .. }
        | Formula::IfThenElse(..)
        | Formula::ForAll { .. }
        | Formula::Exists { .. } => false,
        Formula::True | Formula::False | Formula::Atom { .. } => true,
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Until(a, b)
        | Formula::Release(a, b)
        | Formula::Since(a, b)
        | Formula::ReleasePast(a, b) => is_nnf(a) && is_nnf(b),
        Formula::Next(g)
        | Formula::WeakNext(g)
        | Formula::Always(g)
        | Formula::Eventually(g)
        | Formula::Prev(g)
        | Formula::WeakPrev(g)
        | Formula::AlwaysPast(g)
        | Formula::EventuallyPast(g) => is_nnf(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::AtomOp;

    fn atom(op: AtomOp) -> Formula {
        Formula::atom("A", "B", op, "meet")
    }

    #[test]
    fn negated_atom_flips_comparison() {
        let f = Formula::not(atom(AtomOp::Eq));
        assert_eq!(nnf(&f, Direction::Future).unwrap(), atom(AtomOp::Ne));
    }

    #[test]
    fn negated_eventually_becomes_always() {
        let f = Formula::not(Formula::Eventually(Box::new(atom(AtomOp::Eq))));
        assert_eq!(
            nnf(&f, Direction::Future).unwrap(),
            Formula::Always(Box::new(atom(AtomOp::Ne)))
        );
    }

    #[test]
    fn negated_until_becomes_release() {
        let f = Formula::not(Formula::Until(
            Box::new(atom(AtomOp::Eq)),
            Box::new(Formula::True),
        ));
        assert_eq!(
            nnf(&f, Direction::Future).unwrap(),
            Formula::Release(Box::new(atom(AtomOp::Ne)), Box::new(Formula::False))
        );
    }

    #[test]
    fn mixed_direction_is_rejected() {
        let f = Formula::Eventually(Box::new(Formula::Prev(Box::new(Formula::True))));
        assert_eq!(nnf(&f, Direction::Future), Err(NnfError::MixedDirection));
    }

    #[test]
    fn output_is_nnf() {
        let f = Formula::not(Formula::implies(
            Formula::Always(Box::new(atom(AtomOp::Eq))),
            Formula::not(Formula::Next(Box::new(atom(AtomOp::Ne)))),
        ));
        let g = nnf(&f, Direction::Future).unwrap();
        assert!(is_nnf(&g));
    }
}
