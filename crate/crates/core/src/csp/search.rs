//! Backtracking search with propagation at every node.
//!
//! Branching is binary domain partitioning: the smallest unfixed domain is
//! chosen and split in two, relation variables via [`tractable_split`] and
//! integer/Boolean variables minimum-value-first. State is restored through
//! the store's trail, so search never copies domains.

use alloc::vec::Vec;

use crate::calculus::RelSet;

use super::domain::Sort;
use super::store::{Propagation, Store};
use super::VarId;

/// Source of elapsed wall time for time budgets. The core crate has no clock
/// of its own; callers that want wall-clock budgets inject one.
pub trait Clock {
    fn elapsed_ms(&self) -> u64;
}

/// Clock that never advances: time budgets are effectively ignored.
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed_ms(&self) -> u64 {
        0
    }
}

/// Resource limits for one search call.
#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub node_budget: Option<u64>,
    pub time_budget_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// One value per variable, indexed by `VarId`.
    Solution(Vec<i64>),
    NoSolution,
    /// A resource limit was hit before the search space was exhausted.
    Exhausted,
}

/// All solutions found by [`solve_all`], projected if a projection was given.
#[derive(Clone, Debug, Default)]
pub struct Solutions {
    pub assignments: Vec<Vec<i64>>,
    /// True if a resource limit cut enumeration short.
    pub exhausted: bool,
}

/// A tractable subclass of a calculus: a family of relation sets such that
/// problems whose domains all lie inside the family are polynomially
/// decidable. Used purely as a branching heuristic here.
#[derive(Clone, Debug, Default)]
pub struct SubclassTable {
    pub members: Vec<RelSet>,
}

/// Branching configuration.
#[derive(Clone, Debug, Default)]
pub struct Heuristic {
    /// When present, relation domains are split so that the first branch
    /// lies inside the subclass; otherwise singleton-first.
    pub subclass: Option<SubclassTable>,
}

impl Heuristic {
    pub fn with_subclass(table: SubclassTable) -> Heuristic {
        Heuristic {
            subclass: Some(table),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitError {
    /// The domain has fewer than two values, so there is nothing to split.
    DomainTooSmall,
}

/// Partition a relation domain for branching.
///
/// With a configured subclass table, the first part is the largest
/// intersection of the domain with a subclass member that still leaves a
/// non-trivial remainder. Without one (or when no member qualifies), the
/// split is singleton-first in relation index order.
pub fn tractable_split(
    dom: RelSet,
    table: Option<&SubclassTable>,
) -> Result<(RelSet, RelSet), SplitError> {
    if dom.len() < 2 {
        return Err(SplitError::DomainTooSmall);
    }
    if let Some(table) = table {
        let mut best: Option<RelSet> = None;
        for member in &table.members {
            let inter = member.intersect(dom);
            if inter.is_empty() || inter == dom {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => {
                    inter.len() > b.len() || (inter.len() == b.len() && inter.0 < b.0)
                }
            };
            if better {
                best = Some(inter);
            }
        }
        if let Some(first) = best {
            return Ok((first, dom.minus(first)));
        }
    }
    let first = RelSet::singleton(dom.first().unwrap());
    Ok((first, dom.minus(first)))
}

enum Branch {
    RelMask(u64),
    KeepValue(i64),
    DropValue(i64),
}

fn split(store: &Store, x: VarId, heur: &Heuristic) -> (Branch, Branch) {
    let dom = store.dom(x);
    match dom.sort() {
        Sort::Rel { .. } => {
            let (d1, d2) = tractable_split(dom.rel_set(), heur.subclass.as_ref())
                .expect("split of a fixed variable");
            (Branch::RelMask(d1.0), Branch::RelMask(d2.0))
        }
        _ => {
            let min = dom.min().unwrap();
            (Branch::KeepValue(min), Branch::DropValue(min))
        }
    }
}

fn apply(store: &mut Store, x: VarId, branch: &Branch) -> bool {
    let ok = match branch {
        Branch::RelMask(mask) => store.vars.retain_mask(x, *mask),
        Branch::KeepValue(v) => store.vars.retain_value(x, *v),
        Branch::DropValue(v) => store.vars.remove_value(x, *v),
    };
    if !ok {
        store.vars.fail();
    }
    ok
}

/// Smallest unfixed domain in `scope`, ties broken by variable id.
fn select(store: &Store, scope: Option<&[VarId]>) -> Option<VarId> {
    let mut best: Option<(u32, VarId)> = None;
    let mut consider = |x: VarId, size: u32| {
        if size >= 2 && best.map(|(s, _)| size < s).unwrap_or(true) {
            best = Some((size, x));
        }
    };
    match scope {
        Some(vars) => {
            for &x in vars {
                consider(x, store.dom(x).size());
            }
        }
        None => {
            for i in 0..store.num_vars() {
                let x = VarId(i as u32);
                consider(x, store.dom(x).size());
            }
        }
    }
    best.map(|(_, x)| x)
}

struct Search<'a> {
    heur: &'a Heuristic,
    limits: Limits,
    clock: &'a dyn Clock,
    start_nodes: u64,
    max_solutions: Option<usize>,
    project: Option<&'a [VarId]>,
    solutions: Vec<Vec<i64>>,
    exhausted: bool,
}

enum Flow {
    Continue,
    Stop,
}

impl<'a> Search<'a> {
    fn over_budget(&mut self, store: &Store) -> bool {
        if let Some(max) = self.limits.node_budget {
            if store.stats.nodes - self.start_nodes >= max {
                return true;
            }
        }
        if let Some(ms) = self.limits.time_budget_ms {
            if store.stats.nodes % 256 == 0 && self.clock.elapsed_ms() >= ms {
                return true;
            }
        }
        false
    }

    fn record(&mut self, store: &Store) -> Flow {
        let values = match self.project {
            Some(vars) => vars
                .iter()
                .map(|&x| store.value_of(x).expect("projection variable fixed"))
                .collect(),
            None => (0..store.num_vars())
                .map(|i| store.value_of(VarId(i as u32)).expect("variable fixed"))
                .collect(),
        };
        self.solutions.push(values);
        if let Some(max) = self.max_solutions {
            if self.solutions.len() >= max {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }

    /// Depth-first enumeration; the store is propagated and consistent on
    /// entry and restored to its entry state before returning.
    fn dfs(&mut self, store: &mut Store) -> Flow {
        let x = match select(store, self.project) {
            Some(x) => x,
            None => {
                // All scope variables fixed. Under a projection the rest of
                // the store still needs a witness.
                if self.project.is_some() && select(store, None).is_some() {
                    return match self.witness(store) {
                        Some(true) => self.record(store),
                        Some(false) => Flow::Continue,
                        None => Flow::Stop,
                    };
                }
                return self.record(store);
            }
        };
        let (b1, b2) = split(store, x, self.heur);
        for branch in [b1, b2] {
            if self.over_budget(store) {
                self.exhausted = true;
                return Flow::Stop;
            }
            store.stats.nodes += 1;
            store.mark();
            if apply(store, x, &branch) && store.propagate() == Propagation::Consistent {
                if let Flow::Stop = self.dfs(store) {
                    store.undo_to_mark();
                    return Flow::Stop;
                }
            }
            store.undo_to_mark();
            store.stats.backtracks += 1;
        }
        Flow::Continue
    }

    /// Satisfiability check over the full variable set, restoring the store.
    /// `None` means a budget ran out before an answer was found.
    fn witness(&mut self, store: &mut Store) -> Option<bool> {
        let x = match select(store, None) {
            Some(x) => x,
            None => return Some(true),
        };
        let (b1, b2) = split(store, x, self.heur);
        for branch in [b1, b2] {
            if self.over_budget(store) {
                self.exhausted = true;
                return None;
            }
            store.stats.nodes += 1;
            store.mark();
            if apply(store, x, &branch) && store.propagate() == Propagation::Consistent {
                match self.witness(store) {
                    Some(true) => {
                        store.undo_to_mark();
                        return Some(true);
                    }
                    Some(false) => {}
                    None => {
                        store.undo_to_mark();
                        return None;
                    }
                }
            }
            store.undo_to_mark();
            store.stats.backtracks += 1;
        }
        Some(false)
    }
}

/// First solution under the deterministic branching order.
pub fn solve(
    store: &mut Store,
    heur: &Heuristic,
    limits: Limits,
    clock: &dyn Clock,
) -> SolveOutcome {
    let sols = solve_all(store, heur, limits, clock, Some(1), None);
    match sols.assignments.into_iter().next() {
        Some(a) => SolveOutcome::Solution(a),
        None if sols.exhausted => SolveOutcome::Exhausted,
        None => SolveOutcome::NoSolution,
    }
}

/// Enumerate solutions, optionally projected onto `project`.
///
/// With a projection, distinct projected assignments are enumerated (each
/// one backed by a witness for the remaining variables), so the result
/// contains no duplicates. `limit` caps the number of solutions collected.
pub fn solve_all(
    store: &mut Store,
    heur: &Heuristic,
    limits: Limits,
    clock: &dyn Clock,
    limit: Option<usize>,
    project: Option<&[VarId]>,
) -> Solutions {
    let mut search = Search {
        heur,
        limits,
        clock,
        start_nodes: store.stats.nodes,
        max_solutions: limit,
        project,
        solutions: Vec::new(),
        exhausted: false,
    };
    if store.propagate() == Propagation::Consistent {
        // A solved root still counts as a leaf.
        search.dfs(store);
    }
    Solutions {
        assignments: search.solutions,
        exhausted: search.exhausted,
    }
}
