//! The constraint store: variables, posted constraints, the domain trail and
//! the propagation queue.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::calculus::RelSet;

use super::constraint::{CmpOp, ConstraintData, ConstraintKind, Gate, Operand, Target};
use super::domain::{Domain, Sort};
use super::{Lit, VarId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PostError {
    EmptyDomain,
    UnknownVariable(VarId),
    SortMismatch(String),
    ValueOutOfRange(String),
}

impl fmt::Display for PostError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PostError::EmptyDomain => write!(f, "variable domain is empty"),
            PostError::UnknownVariable(v) => write!(f, "unknown variable v{}", v.0),
            PostError::SortMismatch(msg) => write!(f, "sort mismatch: {msg}"),
            PostError::ValueOutOfRange(msg) => write!(f, "value out of range: {msg}"),
        }
    }
}

/// Handle of a posted constraint.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ConstraintId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Propagation {
    Consistent,
    Inconsistent,
}

/// Variable state plus the machinery revisers interact with: domains, the
/// removal trail, watcher lists and the constraint queue.
#[derive(Clone, Debug, Default)]
pub(crate) struct VarStore {
    doms: Vec<Domain>,
    names: Vec<Option<String>>,
    watchers: Vec<Vec<u32>>,
    trail: Vec<(u32, i64)>,
    queue: VecDeque<u32>,
    in_queue: Vec<bool>,
    failed: bool,
}

impl VarStore {
    pub(crate) fn dom(&self, x: VarId) -> &Domain {
        &self.doms[x.0 as usize]
    }

    pub(crate) fn fail(&mut self) {
        self.failed = true;
    }

    fn enqueue_watchers(&mut self, x: VarId) {
        for i in 0..self.watchers[x.0 as usize].len() {
            let c = self.watchers[x.0 as usize][i];
            if !self.in_queue[c as usize] {
                self.in_queue[c as usize] = true;
                self.queue.push_back(c);
            }
        }
    }

    /// Remove one value. Returns false if the domain wiped out.
    pub(crate) fn remove_value(&mut self, x: VarId, v: i64) -> bool {
        if self.failed {
            return false;
        }
        if self.doms[x.0 as usize].clear(v) {
            self.trail.push((x.0, v));
            if self.doms[x.0 as usize].is_empty() {
                self.failed = true;
                return false;
            }
            self.enqueue_watchers(x);
        }
        true
    }

    /// Remove every value except `v`.
    pub(crate) fn retain_value(&mut self, x: VarId, v: i64) -> bool {
        let drop: Vec<i64> = self.dom(x).iter().filter(|&w| w != v).collect();
        for w in drop {
            if !self.remove_value(x, w) {
                return false;
            }
        }
        true
    }

    /// Keep only values whose bit is set in `mask` (single-word domains).
    pub(crate) fn retain_mask(&mut self, x: VarId, mask: u64) -> bool {
        self.retain_mask_tracked(x, mask).is_some()
    }

    /// As `retain_mask`, reporting whether anything was removed;
    /// `None` on wipeout.
    pub(crate) fn retain_mask_tracked(&mut self, x: VarId, mask: u64) -> Option<bool> {
        let drop = self.dom(x).word() & !mask;
        if drop == 0 {
            return Some(false);
        }
        let mut bits = drop;
        while bits != 0 {
            let v = bits.trailing_zeros() as i64;
            bits &= bits - 1;
            if !self.remove_value(x, v) {
                return None;
            }
        }
        Some(true)
    }

    pub(crate) fn remove_above(&mut self, x: VarId, bound: i64) -> bool {
        let drop: Vec<i64> = self.dom(x).iter().filter(|&v| v > bound).collect();
        for v in drop {
            if !self.remove_value(x, v) {
                return false;
            }
        }
        true
    }

    pub(crate) fn remove_below(&mut self, x: VarId, bound: i64) -> bool {
        let drop: Vec<i64> = self.dom(x).iter().filter(|&v| v < bound).collect();
        for v in drop {
            if !self.remove_value(x, v) {
                return false;
            }
        }
        true
    }

    pub(crate) fn lit_value(&self, l: Lit) -> Option<bool> {
        self.dom(l.var).fixed_value().map(|v| (v == 1) ^ l.neg)
    }

    /// Fix a literal. Returns false if that empties the variable's domain.
    pub(crate) fn assign_lit(&mut self, l: Lit, value: bool) -> bool {
        let bit = if value ^ l.neg { 1 } else { 0 };
        self.retain_value(l.var, bit)
    }
}

/// Search/propagation statistics, cumulative over the store's lifetime.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StoreStats {
    pub nodes: u64,
    pub backtracks: u64,
    pub revisions: u64,
}

/// A finite-domain constraint store supporting generalised arc consistency
/// propagation and trail-based state restoration.
#[derive(Clone, Debug, Default)]
pub struct Store {
    pub(crate) vars: VarStore,
    pub(crate) constraints: Vec<ConstraintData>,
    marks: Vec<usize>,
    true_var: Option<VarId>,
    pub(crate) stats: StoreStats,
}

impl Store {
    pub fn new() -> Store {
        Store::default()
    }

    pub fn num_vars(&self) -> usize {
        self.vars.doms.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn stats(&self) -> StoreStats {
        self.stats
    }

    pub fn is_failed(&self) -> bool {
        self.vars.failed
    }

    pub fn new_var(&mut self, dom: Domain) -> Result<VarId, PostError> {
        self.new_named_var(dom, None)
    }

    pub fn new_named_var(
        &mut self,
        dom: Domain,
        name: Option<String>,
    ) -> Result<VarId, PostError> {
        if dom.is_empty() {
            return Err(PostError::EmptyDomain);
        }
        let id = VarId(self.vars.doms.len() as u32);
        self.vars.doms.push(dom);
        self.vars.names.push(name);
        self.vars.watchers.push(Vec::new());
        Ok(id)
    }

    pub fn new_bool(&mut self) -> VarId {
        self.new_var(Domain::bools()).unwrap()
    }

    /// A Boolean variable fixed to `value` at creation; used for truth
    /// variables whose value is known at translation time.
    pub fn new_bool_fixed(&mut self, value: bool) -> VarId {
        self.new_var(Domain::bool_fixed(value)).unwrap()
    }

    /// The store's shared always-true literal.
    pub fn true_lit(&mut self) -> Lit {
        let var = match self.true_var {
            Some(v) => v,
            None => {
                let v = self.new_bool_fixed(true);
                self.true_var = Some(v);
                v
            }
        };
        Lit::pos(var)
    }

    pub fn dom(&self, x: VarId) -> &Domain {
        self.vars.dom(x)
    }

    pub fn value_of(&self, x: VarId) -> Option<i64> {
        self.vars.dom(x).fixed_value()
    }

    pub fn name_of(&self, x: VarId) -> Option<&str> {
        self.vars.names[x.0 as usize].as_deref()
    }

    /// Restrict a variable's domain in place (trailed like any pruning).
    /// Used for initial and final scenario constraints.
    pub fn restrict(&mut self, x: VarId, keep: &[i64]) -> Propagation {
        let drop: Vec<i64> = self
            .vars
            .dom(x)
            .iter()
            .filter(|v| !keep.contains(v))
            .collect();
        for v in drop {
            if !self.vars.remove_value(x, v) {
                return Propagation::Inconsistent;
            }
        }
        Propagation::Consistent
    }

    pub fn restrict_rel(&mut self, x: VarId, keep: RelSet) -> Propagation {
        match self.vars.retain_mask_tracked(x, keep.0) {
            Some(_) => Propagation::Consistent,
            None => Propagation::Inconsistent,
        }
    }

    /// Fix a Boolean literal to a value outside of any constraint.
    pub fn assign(&mut self, l: Lit, value: bool) -> Propagation {
        self.check_bool("assign", &[l]).expect("boolean literal");
        if self.vars.assign_lit(l, value) {
            Propagation::Consistent
        } else {
            Propagation::Inconsistent
        }
    }

    fn check_var(&self, x: VarId) -> Result<(), PostError> {
        if (x.0 as usize) < self.vars.doms.len() {
            Ok(())
        } else {
            Err(PostError::UnknownVariable(x))
        }
    }

    fn check_bool(&self, what: &str, lits: &[Lit]) -> Result<(), PostError> {
        for l in lits {
            self.check_var(l.var)?;
            if self.vars.dom(l.var).sort() != Sort::Bool {
                return Err(PostError::SortMismatch(format!(
                    "{what} requires boolean variables"
                )));
            }
        }
        Ok(())
    }

    fn small_sort_universe(&self, x: VarId) -> Result<usize, PostError> {
        match self.vars.dom(x).sort() {
            Sort::Rel { universe } => Ok(universe as usize),
            _ => Err(PostError::SortMismatch(
                "extensional constraints require relation-sorted variables".into(),
            )),
        }
    }

    fn register(&mut self, data: ConstraintData) -> ConstraintId {
        let id = ConstraintId(self.constraints.len() as u32);
        for v in data.variables() {
            self.vars.watchers[v.0 as usize].push(id.0);
        }
        self.constraints.push(data);
        self.vars.in_queue.push(true);
        self.vars.queue.push_back(id.0);
        id
    }

    /// Allowed-pairs constraint on two relation variables.
    pub fn post_ext_binary(
        &mut self,
        x: VarId,
        y: VarId,
        pairs: &[(i64, i64)],
    ) -> Result<ConstraintId, PostError> {
        self.check_var(x)?;
        self.check_var(y)?;
        let nx = self.small_sort_universe(x)?;
        let ny = self.small_sort_universe(y)?;
        debug_assert_ne!(x, y, "extensional constraints take distinct variables");
        let mut fwd = vec![0u64; nx];
        let mut rev = vec![0u64; ny];
        for &(a, b) in pairs {
            if a < 0 || a as usize >= nx || b < 0 || b as usize >= ny {
                return Err(PostError::ValueOutOfRange(format!("pair ({a}, {b})")));
            }
            fwd[a as usize] |= 1 << b;
            rev[b as usize] |= 1 << a;
        }
        Ok(self.register(ConstraintData::ExtBinary { x, y, fwd, rev }))
    }

    /// Allowed-triples constraint on three relation variables.
    pub fn post_ext_ternary(
        &mut self,
        x: VarId,
        y: VarId,
        z: VarId,
        triples: impl IntoIterator<Item = (i64, i64, i64)>,
    ) -> Result<ConstraintId, PostError> {
        self.check_var(x)?;
        self.check_var(y)?;
        self.check_var(z)?;
        let nx = self.small_sort_universe(x)?;
        let ny = self.small_sort_universe(y)?;
        let nz = self.small_sort_universe(z)?;
        debug_assert!(x != y && y != z && x != z);
        let mut z_mask = vec![0u64; nx * ny];
        for (a, b, c) in triples {
            if a < 0 || a as usize >= nx || b < 0 || b as usize >= ny || c < 0 || c as usize >= nz
            {
                return Err(PostError::ValueOutOfRange(format!("triple ({a}, {b}, {c})")));
            }
            z_mask[a as usize * ny + b as usize] |= 1 << c;
        }
        Ok(self.register(ConstraintData::ExtTernary {
            x,
            y,
            z,
            ny,
            z_mask,
        }))
    }

    /// `(x = value) ≡ out`
    pub fn post_reified_value_eq(
        &mut self,
        x: VarId,
        value: i64,
        out: Lit,
    ) -> Result<ConstraintId, PostError> {
        self.check_var(x)?;
        self.check_bool("reified equality", &[out])?;
        Ok(self.register(ConstraintData::ReifiedValueEq { x, value, out }))
    }

    /// `(x op rhs + offset) ≡ out` where `op` is `=` or `<=`.
    pub fn post_reified_cmp(
        &mut self,
        op: CmpOp,
        x: VarId,
        rhs: Operand,
        offset: i64,
        out: Lit,
    ) -> Result<ConstraintId, PostError> {
        self.check_var(x)?;
        self.check_bool("reified comparison", &[out])?;
        let x_sort = self.vars.dom(x).sort();
        if let Operand::Var(y) = rhs {
            self.check_var(y)?;
            let y_sort = self.vars.dom(y).sort();
            let compatible = match (x_sort, y_sort) {
                (Sort::Int, Sort::Int) => true,
                (Sort::Rel { universe: a }, Sort::Rel { universe: b }) => {
                    a == b && offset == 0 && op == CmpOp::Eq
                }
                _ => false,
            };
            if !compatible {
                return Err(PostError::SortMismatch(
                    "comparison operands must both be integers, or same-calculus relations under =".into(),
                ));
            }
        } else if op == CmpOp::Le && x_sort != Sort::Int {
            return Err(PostError::SortMismatch(
                "ordering comparisons require integer variables".into(),
            ));
        }
        Ok(self.register(ConstraintData::ReifiedCmp {
            op,
            x,
            rhs,
            offset,
            out,
        }))
    }

    /// `(gate over inputs) ≡ out`. `Not` and `Implies` are normalised onto
    /// single-input `And` and two-input `Or`.
    pub fn post_bool_gate(
        &mut self,
        gate: Gate,
        inputs: &[Lit],
        out: Lit,
    ) -> Result<ConstraintId, PostError> {
        self.check_bool("boolean gate", inputs)?;
        self.check_bool("boolean gate", &[out])?;
        let (gate, inputs) = match gate {
            Gate::Not => {
                assert_eq!(inputs.len(), 1, "Not takes one input");
                (Gate::And, vec![inputs[0].negated()])
            }
            Gate::Implies => {
                assert_eq!(inputs.len(), 2, "Implies takes two inputs");
                (Gate::Or, vec![inputs[0].negated(), inputs[1]])
            }
            Gate::Equiv => {
                assert_eq!(inputs.len(), 2, "Equiv takes two inputs");
                (Gate::Equiv, inputs.to_vec())
            }
            g => (g, inputs.to_vec()),
        };
        Ok(self.register(ConstraintData::BoolGate { gate, inputs, out }))
    }

    /// Disjunction of literals with a constant truth value.
    pub fn post_bool_clause(
        &mut self,
        lits: &[Lit],
        truth: bool,
    ) -> Result<ConstraintId, PostError> {
        self.check_bool("clause", lits)?;
        Ok(self.register(ConstraintData::BoolClause {
            lits: lits.to_vec(),
            truth,
        }))
    }

    /// `family[index - base] = target`.
    pub fn post_array_element(
        &mut self,
        family: &[VarId],
        base: i64,
        index: VarId,
        target: Target,
    ) -> Result<ConstraintId, PostError> {
        assert!(!family.is_empty());
        self.check_var(index)?;
        if self.vars.dom(index).sort() != Sort::Int {
            return Err(PostError::SortMismatch(
                "array index must be integer-sorted".into(),
            ));
        }
        let cell_sort = self.vars.dom(family[0]).sort();
        for &cell in family {
            self.check_var(cell)?;
            if self.vars.dom(cell).sort() != cell_sort {
                return Err(PostError::SortMismatch(
                    "array cells must share a sort".into(),
                ));
            }
        }
        if let Target::Var(t) = target {
            self.check_var(t)?;
            if self.vars.dom(t).sort() != cell_sort {
                return Err(PostError::SortMismatch(
                    "array target must match the cell sort".into(),
                ));
            }
        }
        Ok(self.register(ConstraintData::ArrayElement {
            family: family.to_vec(),
            base,
            index,
            target,
        }))
    }

    pub fn constraint_kind(&self, id: ConstraintId) -> ConstraintKind {
        self.constraints[id.0 as usize].kind()
    }

    /// Run the propagation queue to its fixpoint.
    pub fn propagate(&mut self) -> Propagation {
        if self.vars.failed {
            self.vars.queue.clear();
            self.vars.in_queue.iter_mut().for_each(|b| *b = false);
            return Propagation::Inconsistent;
        }
        while let Some(ci) = self.vars.queue.pop_front() {
            self.vars.in_queue[ci as usize] = false;
            self.stats.revisions += 1;
            if !self.constraints[ci as usize].revise(&mut self.vars) {
                self.vars.failed = true;
                self.vars.queue.clear();
                self.vars.in_queue.iter_mut().for_each(|b| *b = false);
                return Propagation::Inconsistent;
            }
        }
        Propagation::Consistent
    }

    /// Push a restoration point. The store should be at a propagation
    /// fixpoint (and not failed): undoing re-runs no constraints, so marks
    /// taken mid-propagation would strand pending prunings.
    pub fn mark(&mut self) {
        debug_assert!(!self.vars.failed, "mark on a failed store");
        self.marks.push(self.vars.trail.len());
    }

    /// Undo all domain changes since the matching [`Store::mark`].
    pub fn undo_to_mark(&mut self) {
        let mark = self.marks.pop().expect("undo without mark");
        while self.vars.trail.len() > mark {
            let (x, v) = self.vars.trail.pop().unwrap();
            self.vars.doms[x as usize].restore(v);
        }
        self.vars.failed = false;
        self.vars.queue.clear();
        self.vars.in_queue.iter_mut().for_each(|b| *b = false);
    }

    pub(crate) fn depth(&self) -> usize {
        self.marks.len()
    }

    /// Enqueue the constraints watching `x`; needed after external domain
    /// restrictions so the next `propagate` revisits them.
    pub fn touch(&mut self, x: VarId) {
        self.vars.enqueue_watchers(x);
    }

    /// Structured text dump of variables, domains and constraints.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "store: {} variables, {} constraints{}\n",
            self.num_vars(),
            self.num_constraints(),
            if self.vars.failed { " (failed)" } else { "" }
        ));
        for (i, dom) in self.vars.doms.iter().enumerate() {
            let name = self.vars.names[i]
                .as_deref()
                .map(|n| format!(" {n}"))
                .unwrap_or_default();
            let values: Vec<String> = dom.iter().map(|v| format!("{v}")).collect();
            out.push_str(&format!(
                "v{i}{name}: {:?} {{{}}}\n",
                dom.sort(),
                values.join(", ")
            ));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            out.push_str(&format!("c{i}: {:?}\n", c.kind()));
        }
        out
    }
}
