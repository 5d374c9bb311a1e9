//! Reference evaluator for temporal formulas on ground traces.
//!
//! Future formulas are anchored at the lower bound of the interval and move
//! forward; past formulas are anchored at the upper bound and move backward.
//! The step operators are strong: `X φ` is false when the interval has no
//! next point, and its weak companion `WX φ` is true there. `Always`,
//! `Eventually`, `Until` and their past counterparts include the anchor
//! point itself.

use alloc::string::String;
use alloc::vec::Vec;

use crate::calculus::Rel;

use super::{AtomOp, Direction, Formula, Interval};

/// A ground assignment of one relation per ordered object pair per time
/// point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    objects: Vec<String>,
    relations: Vec<String>,
    /// `values[t * n * n + a * n + b]`
    values: Vec<Rel>,
    horizon: usize,
}

impl Trace {
    /// A trace with all pairs set to relation 0 everywhere.
    pub fn new(objects: &[String], relations: &[String], horizon: usize) -> Trace {
        let n = objects.len();
        Trace {
            objects: objects.to_vec(),
            relations: relations.to_vec(),
            values: alloc::vec![Rel(0); horizon * n * n],
            horizon,
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn relation_index(&self, name: &str) -> Option<Rel> {
        self.relations
            .iter()
            .position(|r| r == name)
            .map(|i| Rel(i as u8))
    }

    pub fn set(&mut self, t: usize, a: usize, b: usize, rel: Rel) {
        let n = self.objects.len();
        self.values[t * n * n + a * n + b] = rel;
    }

    pub fn at(&self, t: usize, a: usize, b: usize) -> Rel {
        let n = self.objects.len();
        self.values[t * n * n + a * n + b]
    }
}

struct Env<'a> {
    trace: &'a Trace,
    bindings: Vec<(&'a str, &'a str)>,
}

impl<'a> Env<'a> {
    fn resolve(&self, name: &str) -> usize {
        let name = self
            .bindings
            .iter()
            .rev()
            .find(|(binder, _)| *binder == name)
            .map(|(_, obj)| *obj)
            .unwrap_or(name);
        self.trace
            .object_index(name)
            .unwrap_or_else(|| panic!("unknown object `{name}` in formula"))
    }
}

/// Evaluate a direction-pure formula on `trace` over `iv`.
///
/// The trace must cover every point of the interval; object and relation
/// names must resolve in the trace (scenario loading guarantees this).
pub fn eval(f: &Formula, trace: &Trace, iv: Interval, dir: Direction) -> bool {
    assert!(iv.lo() >= 0 && (iv.hi() as usize) < trace.horizon());
    let mut env = Env {
        trace,
        bindings: Vec::new(),
    };
    eval_in(f, &mut env, iv, dir)
}

fn eval_in<'a>(f: &'a Formula, env: &mut Env<'a>, iv: Interval, dir: Direction) -> bool {
    let (s, t) = (iv.lo(), iv.hi());
    // the time point atomic formulas read
    let anchor = match dir {
        Direction::Future => s,
        Direction::Past => t,
    } as usize;
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom { a, b, op, rel } => {
            let ai = env.resolve(a);
            let bi = env.resolve(b);
            let want = env
                .trace
                .relation_index(rel)
                .unwrap_or_else(|| panic!("unknown relation `{rel}` in formula"));
            let got = env.trace.at(anchor, ai, bi);
            match op {
                AtomOp::Eq => got == want,
                AtomOp::Ne => got != want,
            }
        }
        Formula::Member { a, b, member, rels } => {
            let ai = env.resolve(a);
            let bi = env.resolve(b);
            let got = env.trace.at(anchor, ai, bi);
            let hit = rels.iter().any(|rel| {
                env.trace
                    .relation_index(rel)
                    .unwrap_or_else(|| panic!("unknown relation `{rel}` in formula"))
                    == got
            });
            hit == *member
        }
        Formula::Not(g) => !eval_in(g, env, iv, dir),
        Formula::And(a, b) => eval_in(a, env, iv, dir) && eval_in(b, env, iv, dir),
        Formula::Or(a, b) => eval_in(a, env, iv, dir) || eval_in(b, env, iv, dir),
        Formula::Implies(a, b) => !eval_in(a, env, iv, dir) || eval_in(b, env, iv, dir),
        Formula::IfThenElse(c, th, el) => {
            if eval_in(c, env, iv, dir) {
                eval_in(th, env, iv, dir)
            } else {
                eval_in(el, env, iv, dir)
            }
        }
        Formula::ForAll { binder, set, body } | Formula::Exists { binder, set, body } => {
            let universal = matches!(f, Formula::ForAll { .. });
            let mut acc = universal;
            for obj in set {
                env.bindings.push((binder, obj));
                let v = eval_in(body, env, iv, dir);
                env.bindings.pop();
                if universal {
                    acc &= v;
                } else {
                    acc |= v;
                }
            }
            acc
        }

        // future operators, anchored at s
        Formula::Next(g) => {
            assert_eq!(dir, Direction::Future, "future operator in past formula");
            s + 1 <= t && eval_in(g, env, Interval::new(s + 1, t), dir)
        }
        Formula::WeakNext(g) => {
            assert_eq!(dir, Direction::Future, "future operator in past formula");
            s == t || eval_in(g, env, Interval::new(s + 1, t), dir)
        }
        Formula::Always(g) => {
            assert_eq!(dir, Direction::Future, "future operator in past formula");
            (s..=t).all(|r| eval_in(g, env, Interval::new(r, t), dir))
        }
        Formula::Eventually(g) => {
            assert_eq!(dir, Direction::Future, "future operator in past formula");
            (s..=t).any(|r| eval_in(g, env, Interval::new(r, t), dir))
        }
        Formula::Until(chi, phi) => {
            assert_eq!(dir, Direction::Future, "future operator in past formula");
            (s..=t).any(|r| {
                eval_in(phi, env, Interval::new(r, t), dir)
                    && (s..r).all(|u| eval_in(chi, env, Interval::new(u, t), dir))
            })
        }
        Formula::Release(chi, phi) => {
            assert_eq!(dir, Direction::Future, "future operator in past formula");
            (s..=t).all(|r| {
                eval_in(phi, env, Interval::new(r, t), dir)
                    || (s..r).any(|u| eval_in(chi, env, Interval::new(u, t), dir))
            })
        }

        // past operators, anchored at t
        Formula::Prev(g) => {
            assert_eq!(dir, Direction::Past, "past operator in future formula");
            s <= t - 1 && eval_in(g, env, Interval::new(s, t - 1), dir)
        }
        Formula::WeakPrev(g) => {
            assert_eq!(dir, Direction::Past, "past operator in future formula");
            s == t || eval_in(g, env, Interval::new(s, t - 1), dir)
        }
        Formula::AlwaysPast(g) => {
            assert_eq!(dir, Direction::Past, "past operator in future formula");
            (s..=t).all(|r| eval_in(g, env, Interval::new(s, r), dir))
        }
        Formula::EventuallyPast(g) => {
            assert_eq!(dir, Direction::Past, "past operator in future formula");
            (s..=t).any(|r| eval_in(g, env, Interval::new(s, r), dir))
        }
        Formula::Since(chi, phi) => {
            assert_eq!(dir, Direction::Past, "past operator in future formula");
            (s..=t).any(|r| {
                eval_in(phi, env, Interval::new(s, r), dir)
                    && (r + 1..=t).all(|u| eval_in(chi, env, Interval::new(s, u), dir))
            })
        }
        Formula::ReleasePast(chi, phi) => {
            assert_eq!(dir, Direction::Past, "past operator in future formula");
            (s..=t).all(|r| {
                eval_in(phi, env, Interval::new(s, r), dir)
                    || (r + 1..=t).any(|u| eval_in(chi, env, Interval::new(s, u), dir))
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    /// One object pair, relations p/q; `word[i]` gives the relation at time i.
    fn trace_of(word: &str) -> Trace {
        let mut tr = Trace::new(&names(&["A", "B"]), &names(&["p", "q"]), word.len());
        for (i, ch) in word.chars().enumerate() {
            tr.set(i, 0, 1, if ch == 'p' { Rel(0) } else { Rel(1) });
        }
        tr
    }

    fn atom(rel: &str) -> Formula {
        Formula::atom("A", "B", AtomOp::Eq, rel)
    }

    #[test]
    fn truth_is_true_anywhere() {
        let tr = trace_of("pq");
        assert!(eval(&Formula::True, &tr, Interval::new(0, 1), Direction::Future));
        assert!(eval(&Formula::True, &tr, Interval::new(0, 1), Direction::Past));
    }

    #[test]
    fn eventually_on_worked_example() {
        // four points 0..3, q only at point 3; interval [1..3]
        let tr = trace_of("pppq");
        let f = Formula::Eventually(Box::new(atom("q")));
        assert!(eval(&f, &tr, Interval::new(1, 3), Direction::Future));
        assert!(!eval(&f, &tr, Interval::new(1, 2), Direction::Future));
    }

    #[test]
    fn next_is_false_on_singleton_interval() {
        let tr = trace_of("qq");
        let f = Formula::Next(Box::new(Formula::True));
        assert!(!eval(&f, &tr, Interval::new(1, 1), Direction::Future));
        let wx = Formula::WeakNext(Box::new(Formula::False));
        assert!(eval(&wx, &tr, Interval::new(1, 1), Direction::Future));
    }

    #[test]
    fn future_atom_reads_lower_bound_past_atom_reads_upper() {
        let tr = trace_of("pq");
        let f = atom("p");
        assert!(eval(&f, &tr, Interval::new(0, 1), Direction::Future));
        assert!(!eval(&f, &tr, Interval::new(0, 1), Direction::Past));
    }

    #[test]
    fn until_includes_vacuous_witness() {
        // q at the first point satisfies (anything U q) immediately
        let tr = trace_of("qp");
        let f = Formula::Until(Box::new(Formula::False), Box::new(atom("q")));
        assert!(eval(&f, &tr, Interval::new(0, 1), Direction::Future));
    }

    #[test]
    fn since_mirrors_until_on_reversed_traces() {
        // spot case; the exhaustive mirror property lives in the
        // integration tests
        let tr = trace_of("pqp");
        let since = Formula::Since(Box::new(atom("p")), Box::new(atom("q")));
        let until = Formula::Until(Box::new(atom("p")), Box::new(atom("q")));
        let rev = trace_of("pqp"); // palindrome
        assert_eq!(
            eval(&since, &tr, Interval::new(0, 2), Direction::Past),
            eval(&until, &rev, Interval::new(0, 2), Direction::Future),
        );
    }

    #[test]
    fn quantifier_and_member_eval_directly() {
        let mut tr = Trace::new(&names(&["A", "B", "C"]), &names(&["p", "q"]), 1);
        tr.set(0, 0, 1, Rel(0)); // A,B = p
        tr.set(0, 0, 2, Rel(1)); // A,C = q
        let f = Formula::ForAll {
            binder: "x".into(),
            set: alloc::vec!["B".into(), "C".into()],
            body: alloc::boxed::Box::new(Formula::Member {
                a: "A".into(),
                b: "x".into(),
                member: true,
                rels: alloc::vec!["p".into(), "q".into()],
            }),
        };
        assert!(eval(&f, &tr, Interval::new(0, 0), Direction::Future));
    }
}
