//! Finite-domain constraint store with generalised arc consistency
//! propagation and backtracking search.
//!
//! Variables are relation-, integer- or Boolean-sorted; constraints cover
//! the forms the translation layer needs: extensional binary/ternary tables
//! (converse, composition, neighbourhood steps), reified value equalities
//! and comparisons, Boolean gates and clauses, and array element
//! constraints. Propagation runs a worklist of constraints keyed by domain
//! changes; every reviser prunes to hyper-arc consistency, so the fixpoint
//! is the unique GAC closure regardless of posting order.

mod constraint;
mod domain;
mod search;
mod store;

pub use constraint::{CmpOp, ConstraintKind, Gate, Operand, Target};
pub use domain::{Domain, Sort};
pub use search::{
    solve, solve_all, tractable_split, Clock, Heuristic, Limits, NoClock, SolveOutcome, Solutions,
    SplitError, SubclassTable,
};
pub use store::{ConstraintId, PostError, Propagation, Store, StoreStats};

/// Handle of a variable in a [`Store`]. Valid only for the store that
/// issued it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarId(pub u32);

/// A possibly negated Boolean variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Lit {
    pub var: VarId,
    pub neg: bool,
}

impl Lit {
    pub fn pos(var: VarId) -> Lit {
        Lit { var, neg: false }
    }

    pub fn neg(var: VarId) -> Lit {
        Lit { var, neg: true }
    }

    pub fn negated(self) -> Lit {
        Lit {
            var: self.var,
            neg: !self.neg,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{builtin_rcc8, Calculus, Rel, RelSet};
    use alloc::vec::Vec;

    fn rel_var(store: &mut Store, c: &Calculus) -> VarId {
        store
            .new_var(Domain::relations(c.full_set(), c.size()))
            .unwrap()
    }

    /// Post converse and composition constraints for a triangle over the
    /// ordered pairs AB, BA, BC, CB, AC, CA.
    fn triangle(store: &mut Store, c: &Calculus) -> [VarId; 6] {
        let vars = [
            rel_var(store, c), // AB
            rel_var(store, c), // BA
            rel_var(store, c), // BC
            rel_var(store, c), // CB
            rel_var(store, c), // AC
            rel_var(store, c), // CA
        ];
        let conv_pairs: Vec<(i64, i64)> = (0..c.size())
            .map(|i| (i as i64, c.converse(Rel(i as u8)).index() as i64))
            .collect();
        for (x, y) in [(0, 1), (2, 3), (4, 5)] {
            store.post_ext_binary(vars[x], vars[y], &conv_pairs).unwrap();
        }
        let comp_triples: Vec<(i64, i64, i64)> = (0..c.size())
            .flat_map(|i| {
                (0..c.size()).flat_map(move |j| {
                    (0..c.size()).map(move |k| (i as i64, j as i64, k as i64))
                })
            })
            .filter(|&(i, j, k)| {
                builtin_rcc8()
                    .composition(Rel(i as u8), Rel(j as u8))
                    .contains(Rel(k as u8))
            })
            .collect();
        // all six orderings of the distinct triple {A, B, C}
        for (x, y, z) in [(0, 2, 4), (4, 3, 0), (1, 4, 2), (2, 5, 1), (5, 0, 3), (3, 1, 5)] {
            store
                .post_ext_ternary(vars[x], vars[y], vars[z], comp_triples.iter().copied())
                .unwrap();
        }
        vars
    }

    #[test]
    fn new_var_domains() {
        let c = builtin_rcc8();
        let mut store = Store::new();
        let x = rel_var(&mut store, &c);
        assert_eq!(store.dom(x).size(), 8);
        let b = store.new_bool();
        assert_eq!(store.dom(b).size(), 2);
        let t = store.new_var(Domain::int_range(1, 13)).unwrap();
        assert_eq!(store.dom(t).size(), 13);
    }

    #[test]
    fn empty_domain_rejected() {
        let mut store = Store::new();
        assert_eq!(
            store.new_var(Domain::relations(RelSet::EMPTY, 8)),
            Err(PostError::EmptyDomain)
        );
    }

    #[test]
    fn reified_eq_without_support_forces_false() {
        let c = builtin_rcc8();
        let mut store = Store::new();
        let disjoint = c.relation("disjoint").unwrap();
        let meet = c.relation("meet").unwrap();
        let x = store
            .new_var(Domain::relations(RelSet::singleton(disjoint), c.size()))
            .unwrap();
        let b = store.new_bool();
        store
            .post_reified_value_eq(x, meet.index() as i64, Lit::pos(b))
            .unwrap();
        assert_eq!(store.propagate(), Propagation::Consistent);
        assert_eq!(store.value_of(b), Some(0));
    }

    #[test]
    fn composition_identity_row_prunes() {
        let c = builtin_rcc8();
        let mut store = Store::new();
        let equal = c.relation("equal").unwrap();
        let x = store
            .new_var(Domain::relations(RelSet::singleton(equal), c.size()))
            .unwrap();
        let y = rel_var(&mut store, &c);
        let z = rel_var(&mut store, &c);
        let sub: RelSet = [Rel(1), Rel(3), Rel(6)].into_iter().collect();
        store.restrict_rel(y, sub);
        store.touch(y);
        let triples: Vec<(i64, i64, i64)> = (0..8)
            .flat_map(|i| (0..8).flat_map(move |j| (0..8).map(move |k| (i, j, k))))
            .filter(|&(i, j, k)| {
                c.composition(Rel(i as u8), Rel(j as u8)).contains(Rel(k as u8))
            })
            .collect();
        store.post_ext_ternary(x, y, z, triples).unwrap();
        assert_eq!(store.propagate(), Propagation::Consistent);
        // with x fixed to the identity, z collapses onto y's domain
        assert!(store.dom(z).rel_set().is_subset(sub));
    }

    #[test]
    fn array_element_removes_unsupported_index() {
        let c = builtin_rcc8();
        let mut store = Store::new();
        let meet = c.relation("meet").unwrap().index() as i64;
        let q1 = rel_var(&mut store, &c);
        let q2 = store
            .new_var(Domain::relations(
                RelSet::singleton(Rel(0)).union(RelSet::singleton(Rel(2))),
                c.size(),
            ))
            .unwrap(); // no meet here
        let q3 = rel_var(&mut store, &c);
        let t = store.new_var(Domain::int_range(1, 3)).unwrap();
        store
            .post_array_element(&[q1, q2, q3], 1, t, Target::Const(meet))
            .unwrap();
        assert_eq!(store.propagate(), Propagation::Consistent);
        assert!(!store.dom(t).contains(2));
        assert_eq!(store.dom(t).size(), 2);
    }

    #[test]
    fn rcc8_triangle_propagation() {
        let c = builtin_rcc8();
        let inside = c.relation("inside").unwrap();
        let mut store = Store::new();
        let vars = triangle(&mut store, &c);
        store.restrict_rel(vars[0], RelSet::singleton(inside));
        store.restrict_rel(vars[2], RelSet::singleton(inside));
        store.touch(vars[0]);
        store.touch(vars[2]);
        assert_eq!(store.propagate(), Propagation::Consistent);
        let expected = c.composition(inside, inside);
        assert_eq!(store.dom(vars[4]).rel_set(), expected);
        assert!(expected.len() < c.size() as u32);
    }

    #[test]
    fn reified_offset_equality_prunes_both_sides() {
        let mut store = Store::new();
        let x = store.new_var(Domain::int_range(1, 5)).unwrap();
        let y = store.new_var(Domain::int_range(1, 5)).unwrap();
        let b = store.new_bool();
        store
            .post_reified_cmp(CmpOp::Eq, x, Operand::Var(y), 3, Lit::pos(b))
            .unwrap();
        store.assign(Lit::pos(b), true);
        assert_eq!(store.propagate(), Propagation::Consistent);
        assert_eq!(store.dom(x).iter().collect::<Vec<_>>(), alloc::vec![4, 5]);
        assert_eq!(store.dom(y).iter().collect::<Vec<_>>(), alloc::vec![1, 2]);
    }

    #[test]
    fn clause_unit_propagation() {
        let mut store = Store::new();
        let b1 = store.new_bool();
        let b2 = store.new_bool();
        let b3 = store.new_bool();
        store
            .post_bool_clause(&[Lit::pos(b1), Lit::pos(b2), Lit::pos(b3)], true)
            .unwrap();
        store.assign(Lit::pos(b1), false);
        store.assign(Lit::pos(b2), false);
        assert_eq!(store.propagate(), Propagation::Consistent);
        assert_eq!(store.value_of(b3), Some(1));
    }

    #[test]
    fn solve_all_triangle_matches_brute_force() {
        let c = builtin_rcc8();
        let mut store = Store::new();
        let vars = triangle(&mut store, &c);
        let project = [vars[0], vars[2], vars[4]];
        let sols = solve_all(
            &mut store,
            &Heuristic::default(),
            Limits::default(),
            &NoClock,
            None,
            Some(&project),
        );
        assert!(!sols.exhausted);
        let mut found: Vec<(i64, i64, i64)> = sols
            .assignments
            .iter()
            .map(|a| (a[0], a[1], a[2]))
            .collect();
        found.sort_unstable();

        // brute force over all 8^3 assignments of AB, BC, AC
        let mut expected = Vec::new();
        for ab in 0..8u8 {
            for bc in 0..8u8 {
                for ac in 0..8u8 {
                    let (ab, bc, ac) = (Rel(ab), Rel(bc), Rel(ac));
                    let ba = c.converse(ab);
                    let cb = c.converse(bc);
                    let ca = c.converse(ac);
                    let ok = c.composition(ab, bc).contains(ac)
                        && c.composition(ac, cb).contains(ab)
                        && c.composition(ba, ac).contains(bc)
                        && c.composition(bc, ca).contains(ba)
                        && c.composition(ca, ab).contains(cb)
                        && c.composition(cb, ba).contains(ca);
                    if ok {
                        expected.push((
                            ab.index() as i64,
                            bc.index() as i64,
                            ac.index() as i64,
                        ));
                    }
                }
            }
        }
        expected.sort_unstable();
        assert_eq!(found, expected);
        assert!(!found.is_empty());
    }

    #[test]
    fn wiped_domain_means_no_solution() {
        let mut store = Store::new();
        let x = store.new_var(Domain::int_range(0, 1)).unwrap();
        let b = store.new_bool();
        store
            .post_reified_cmp(CmpOp::Le, x, Operand::Const(-1), 0, Lit::pos(b))
            .unwrap();
        store.assign(Lit::pos(b), true);
        let outcome = solve(
            &mut store,
            &Heuristic::default(),
            Limits::default(),
            &NoClock,
        );
        assert_eq!(outcome, SolveOutcome::NoSolution);
    }

    #[test]
    fn pigeonhole_three_vars_two_relations() {
        let mut store = Store::new();
        let universe = 2;
        let full = RelSet::full(universe);
        let vars: Vec<VarId> = (0..3)
            .map(|_| store.new_var(Domain::relations(full, universe)).unwrap())
            .collect();
        let neq = [(0i64, 1i64), (1, 0)];
        store.post_ext_binary(vars[0], vars[1], &neq).unwrap();
        store.post_ext_binary(vars[1], vars[2], &neq).unwrap();
        store.post_ext_binary(vars[0], vars[2], &neq).unwrap();
        let outcome = solve(
            &mut store,
            &Heuristic::default(),
            Limits::default(),
            &NoClock,
        );
        assert_eq!(outcome, SolveOutcome::NoSolution);
    }

    #[test]
    fn solve_is_deterministic() {
        let c = builtin_rcc8();
        let mut store = Store::new();
        let _ = triangle(&mut store, &c);
        let heur = Heuristic::default();
        let first = solve(&mut store, &heur, Limits::default(), &NoClock);
        let second = solve(&mut store, &heur, Limits::default(), &NoClock);
        assert_eq!(first, second);
        assert!(matches!(first, SolveOutcome::Solution(_)));
    }

    #[test]
    fn node_budget_surfaces_as_exhausted() {
        let c = builtin_rcc8();
        let mut store = Store::new();
        let _ = triangle(&mut store, &c);
        let outcome = solve(
            &mut store,
            &Heuristic::default(),
            Limits {
                node_budget: Some(1),
                time_budget_ms: None,
            },
            &NoClock,
        );
        assert_eq!(outcome, SolveOutcome::Exhausted);
    }

    #[test]
    fn tractable_split_fallback_is_singleton_first() {
        // meet, inside, overlap by index in the rcc8 ordering
        let c = builtin_rcc8();
        let dom: RelSet = [
            c.relation("meet").unwrap(),
            c.relation("overlap").unwrap(),
            c.relation("inside").unwrap(),
        ]
        .into_iter()
        .collect();
        let (d1, d2) = tractable_split(dom, None).unwrap();
        assert_eq!(d1, RelSet::singleton(c.relation("meet").unwrap()));
        assert_eq!(d1.union(d2), dom);

        let single = RelSet::singleton(Rel(0));
        assert_eq!(tractable_split(single, None), Err(SplitError::DomainTooSmall));
    }

    #[test]
    fn tractable_split_prefers_subclass_member() {
        let table = SubclassTable {
            members: alloc::vec![
                [Rel(1), Rel(2), Rel(3)].into_iter().collect::<RelSet>(),
                [Rel(0), Rel(4)].into_iter().collect::<RelSet>(),
            ],
        };
        let dom: RelSet = [Rel(0), Rel(1), Rel(2), Rel(4)].into_iter().collect();
        let (d1, d2) = tractable_split(dom, Some(&table)).unwrap();
        // best proper intersection: {0, 4} (member 2) vs {1, 2} (member 1):
        // equal size, smaller mask wins deterministically
        assert_eq!(d1.len(), 2);
        assert!(d1.is_subset(table.members[0]) || d1.is_subset(table.members[1]));
        assert_eq!(d1.union(d2), dom);
        assert_eq!(d1.intersect(d2), RelSet::EMPTY);
    }
}
