//! Compilation of temporal formulas into constraints on the staged relation
//! variables.
//!
//! Two translations are provided. The unfolding translation expands temporal
//! operators over the concrete time points of a constant interval, producing
//! reified equalities and Boolean gates whose truth variables propagation
//! alone can decide. The array translation keeps interval bounds symbolic:
//! disjunctive operators introduce fresh time variables constrained by
//! orderings, and atoms under a symbolic time become array (element)
//! constraints; its truth variables are witnessed by search over the fresh
//! time variables rather than forced by propagation.
//!
//! Both translations agree with [`crate::temporal::eval`] on every ground
//! trace; the test suites check this exhaustively on small scenarios.

mod array;
mod unfold;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::calculus::Calculus;
use crate::csp::{
    CmpOp, ConstraintId, Domain, Lit, Operand, PostError, Store, VarId,
};
use crate::temporal::{nnf, Direction, Formula, InterStateRule, Interval, NnfError};

/// Interval bound in the array translation: a constant time point or an
/// integer variable ranging over time points.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Bound {
    Const(i64),
    Var(VarId),
}

impl Bound {
    fn key(self) -> (u8, i64) {
        match self {
            Bound::Const(c) => (0, c),
            Bound::Var(v) => (1, v.0 as i64),
        }
    }
}

/// The staged relation variables `Q[a, b, t]`.
#[derive(Clone, Debug, Default)]
pub struct StageSpace {
    n_objects: usize,
    /// `vars[t * n * n + a * n + b]`
    vars: Vec<VarId>,
}

impl StageSpace {
    pub fn new(n_objects: usize) -> StageSpace {
        StageSpace {
            n_objects,
            vars: Vec::new(),
        }
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    /// Number of stages currently built.
    pub fn horizon(&self) -> usize {
        if self.n_objects == 0 {
            0
        } else {
            self.vars.len() / (self.n_objects * self.n_objects)
        }
    }

    /// Append one stage worth of variables (row-major over object pairs).
    pub fn push_stage(&mut self, stage_vars: Vec<VarId>) {
        assert_eq!(stage_vars.len(), self.n_objects * self.n_objects);
        self.vars.extend(stage_vars);
    }

    pub fn var(&self, a: usize, b: usize, t: i64) -> VarId {
        let n = self.n_objects;
        self.vars[t as usize * n * n + a * n + b]
    }

    /// All stages of one pair, indexed by time (for array constraints).
    pub fn family(&self, a: usize, b: usize) -> Vec<VarId> {
        (0..self.horizon())
            .map(|t| self.var(a, b, t as i64))
            .collect()
    }

    pub fn stage_vars(&self, t: i64) -> &[VarId] {
        let n = self.n_objects * self.n_objects;
        &self.vars[t as usize * n..(t as usize + 1) * n]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TranslateError {
    /// Formula still contains membership, if-then-else or quantifiers.
    NotDesugared,
    /// Array translation requires negation normal form.
    NotNnf(NnfError),
    /// Formula mixes directions or uses the wrong direction.
    WrongDirection,
    IntervalOutsideHorizon,
    /// Rules need at least two stages.
    RuleNeedsTwoStages { horizon: usize },
    BadRuleAnchor { t0: i64, horizon: usize },
    UnknownObject(String),
    UnknownRelation(String),
    Post(PostError),
}

impl fmt::Display for TranslateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranslateError::NotDesugared => write!(f, "formula must be desugared first"),
            TranslateError::NotNnf(e) => write!(f, "array translation needs NNF input: {e}"),
            TranslateError::WrongDirection => {
                write!(f, "formula is not pure in the requested direction")
            }
            TranslateError::IntervalOutsideHorizon => {
                write!(f, "translation interval lies outside the built stages")
            }
            TranslateError::RuleNeedsTwoStages { horizon } => {
                write!(f, "inter-state rules need at least two stages, have {horizon}")
            }
            TranslateError::BadRuleAnchor { t0, horizon } => {
                write!(f, "rule anchor {t0} outside [0..{}]", horizon.saturating_sub(2))
            }
            TranslateError::UnknownObject(o) => write!(f, "unknown object `{o}`"),
            TranslateError::UnknownRelation(r) => write!(f, "unknown relation `{r}`"),
            TranslateError::Post(e) => write!(f, "constraint rejected: {e}"),
        }
    }
}

impl From<PostError> for TranslateError {
    fn from(e: PostError) -> Self {
        TranslateError::Post(e)
    }
}

/// Outcome of translating one formula: the Boolean truth variable, the
/// constraints posted for it and the auxiliary variables introduced.
///
/// For required-mode translations the truth variable is the store's shared
/// constant-true variable.
#[derive(Clone, Debug)]
pub struct TranslationResult {
    pub truth: VarId,
    pub posted: Vec<ConstraintId>,
    pub fresh: Vec<VarId>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct MemoKey {
    formula: Formula,
    dir: Direction2,
    lo: (u8, i64),
    hi: (u8, i64),
    required: bool,
}

// Direction lacks Ord; a tiny mirror keeps the memo key self-contained.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Direction2 {
    Future,
    Past,
}

impl From<Direction> for Direction2 {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Future => Direction2::Future,
            Direction::Past => Direction2::Past,
        }
    }
}

/// Translates formulas into constraints against one store and stage space.
///
/// Translations of the same subformula over the same interval are shared
/// through a memo table unless `memoize` is switched off (the constraint
/// counting tests do that to observe the raw translation size).
pub struct Translator<'a> {
    store: &'a mut Store,
    space: &'a StageSpace,
    calculus: &'a Calculus,
    objects: &'a [String],
    pub memoize: bool,
    memo: BTreeMap<MemoKey, VarId>,
    posted: Vec<ConstraintId>,
    fresh: Vec<VarId>,
}

impl<'a> Translator<'a> {
    pub fn new(
        store: &'a mut Store,
        space: &'a StageSpace,
        calculus: &'a Calculus,
        objects: &'a [String],
    ) -> Translator<'a> {
        Translator {
            store,
            space,
            calculus,
            objects,
            memoize: true,
            memo: BTreeMap::new(),
            posted: Vec::new(),
            fresh: Vec::new(),
        }
    }

    pub fn store(&mut self) -> &mut Store {
        self.store
    }

    /// Unfolding translation over a constant interval. The result's truth
    /// variable reflects the formula exactly: fixing the staged variables
    /// and propagating forces it to the formula's value.
    pub fn unfold(
        &mut self,
        f: &Formula,
        dir: Direction,
        iv: Interval,
    ) -> Result<TranslationResult, TranslateError> {
        self.check_entry(f, dir)?;
        self.check_interval(iv)?;
        let (p0, f0) = (self.posted.len(), self.fresh.len());
        let truth = self.unfold_general(f, dir, iv.lo(), iv.hi())?;
        Ok(self.result(truth, p0, f0))
    }

    /// Unfolding translation with the truth pinned to true, posting the
    /// leaner constraint forms (clauses instead of reified gates) where the
    /// requirement allows it.
    pub fn unfold_required(
        &mut self,
        f: &Formula,
        dir: Direction,
        iv: Interval,
    ) -> Result<TranslationResult, TranslateError> {
        self.check_entry(f, dir)?;
        self.check_interval(iv)?;
        let (p0, f0) = (self.posted.len(), self.fresh.len());
        self.unfold_require(f, dir, iv.lo(), iv.hi())?;
        let truth = self.store.true_lit().var;
        Ok(self.result(truth, p0, f0))
    }

    /// Array translation over possibly-variable interval bounds. Input must
    /// be in negation normal form. The truth variable is exact relative to
    /// the fresh time variables: a trace satisfies the formula iff some
    /// assignment of the time variables satisfies the store with the truth
    /// variable true.
    pub fn array(
        &mut self,
        f: &Formula,
        dir: Direction,
        lo: Bound,
        hi: Bound,
    ) -> Result<TranslationResult, TranslateError> {
        self.check_entry(f, dir)?;
        self.check_nnf(f)?;
        self.check_bounds(lo, hi)?;
        let (p0, f0) = (self.posted.len(), self.fresh.len());
        let truth = self.array_general(f, dir, lo, hi)?;
        Ok(self.result(truth, p0, f0))
    }

    /// Array translation with the truth pinned to true; disjunctive
    /// structure goes into fresh time variables exactly as the compact
    /// translation prescribes.
    pub fn array_required(
        &mut self,
        f: &Formula,
        dir: Direction,
        lo: Bound,
        hi: Bound,
    ) -> Result<TranslationResult, TranslateError> {
        self.check_entry(f, dir)?;
        self.check_nnf(f)?;
        self.check_bounds(lo, hi)?;
        let (p0, f0) = (self.posted.len(), self.fresh.len());
        self.array_require(f, dir, lo, hi)?;
        let truth = self.store.true_lit().var;
        Ok(self.result(truth, p0, f0))
    }

    fn result(&self, truth: VarId, p0: usize, f0: usize) -> TranslationResult {
        TranslationResult {
            truth,
            posted: self.posted[p0..].to_vec(),
            fresh: self.fresh[f0..].to_vec(),
        }
    }

    fn check_entry(&self, f: &Formula, dir: Direction) -> Result<(), TranslateError> {
        if !f.is_pure(dir) {
            return Err(TranslateError::WrongDirection);
        }
        Ok(())
    }

    fn check_nnf(&self, f: &Formula) -> Result<(), TranslateError> {
        if crate::temporal::nnf_check(f) {
            Ok(())
        } else {
            Err(TranslateError::NotNnf(NnfError::NotDesugared))
        }
    }

    fn check_interval(&self, iv: Interval) -> Result<(), TranslateError> {
        if iv.lo() >= 0 && (iv.hi() as usize) < self.space.horizon() {
            Ok(())
        } else {
            Err(TranslateError::IntervalOutsideHorizon)
        }
    }

    fn check_bounds(&self, lo: Bound, hi: Bound) -> Result<(), TranslateError> {
        let ok = self.bound_min(lo) >= 0
            && (self.bound_max(hi) as usize) < self.space.horizon()
            && self.bound_min(lo) <= self.bound_max(hi);
        if ok {
            Ok(())
        } else {
            Err(TranslateError::IntervalOutsideHorizon)
        }
    }

    // ---- shared helpers -------------------------------------------------

    fn bound_min(&self, b: Bound) -> i64 {
        match b {
            Bound::Const(c) => c,
            Bound::Var(v) => self.store.dom(v).min().expect("non-empty bound domain"),
        }
    }

    fn bound_max(&self, b: Bound) -> i64 {
        match b {
            Bound::Const(c) => c,
            Bound::Var(v) => self.store.dom(v).max().expect("non-empty bound domain"),
        }
    }

    fn memo_key(&self, f: &Formula, dir: Direction, lo: Bound, hi: Bound, required: bool) -> MemoKey {
        MemoKey {
            formula: f.clone(),
            dir: dir.into(),
            lo: lo.key(),
            hi: hi.key(),
            required,
        }
    }

    fn fresh_bool(&mut self) -> VarId {
        let v = self.store.new_bool();
        self.fresh.push(v);
        v
    }

    fn fresh_time(&mut self, lo: i64, hi: i64) -> VarId {
        let v = self
            .store
            .new_var(Domain::int_range(lo, hi))
            .expect("non-empty time domain");
        self.fresh.push(v);
        v
    }

    fn const_bool(&mut self, value: bool) -> VarId {
        // tiny and rare; a dedicated variable per use keeps the store simple
        let v = self.store.new_bool_fixed(value);
        self.fresh.push(v);
        v
    }

    fn record(&mut self, c: ConstraintId) -> ConstraintId {
        self.posted.push(c);
        c
    }

    fn stage_var(&self, a: &str, b: &str, t: i64) -> Result<VarId, TranslateError> {
        let ai = self
            .objects
            .iter()
            .position(|o| o == a)
            .ok_or_else(|| TranslateError::UnknownObject(a.into()))?;
        let bi = self
            .objects
            .iter()
            .position(|o| o == b)
            .ok_or_else(|| TranslateError::UnknownObject(b.into()))?;
        Ok(self.space.var(ai, bi, t))
    }

    fn pair_indices(&self, a: &str, b: &str) -> Result<(usize, usize), TranslateError> {
        let ai = self
            .objects
            .iter()
            .position(|o| o == a)
            .ok_or_else(|| TranslateError::UnknownObject(a.into()))?;
        let bi = self
            .objects
            .iter()
            .position(|o| o == b)
            .ok_or_else(|| TranslateError::UnknownObject(b.into()))?;
        Ok((ai, bi))
    }

    fn rel_index(&self, rel: &str) -> Result<i64, TranslateError> {
        self.calculus
            .relation(rel)
            .map(|r| r.index() as i64)
            .ok_or_else(|| TranslateError::UnknownRelation(rel.into()))
    }

    /// A literal equivalent to `a <= b`. Constant comparisons yield the
    /// shared constant literals; otherwise one reified ordering constraint
    /// is posted.
    fn reify_le(&mut self, a: Bound, b: Bound) -> Result<Lit, TranslateError> {
        let lit = match (a, b) {
            (Bound::Const(ca), Bound::Const(cb)) => {
                let t = self.store.true_lit();
                if ca <= cb {
                    t
                } else {
                    t.negated()
                }
            }
            (Bound::Var(v), rhs_bound) => {
                let g = self.fresh_bool();
                let rhs = match rhs_bound {
                    Bound::Const(c) => Operand::Const(c),
                    Bound::Var(w) => Operand::Var(w),
                };
                let c = self
                    .store
                    .post_reified_cmp(CmpOp::Le, v, rhs, 0, Lit::pos(g))?;
                self.record(c);
                Lit::pos(g)
            }
            (Bound::Const(ca), Bound::Var(w)) => {
                // ca <= w  ≡  ¬(w <= ca - 1)
                let g = self.fresh_bool();
                let c = self.store.post_reified_cmp(
                    CmpOp::Le,
                    w,
                    Operand::Const(ca - 1),
                    0,
                    Lit::neg(g),
                )?;
                self.record(c);
                Lit::pos(g)
            }
        };
        Ok(lit)
    }

    /// Post `a <= b` as a hard ordering constraint.
    fn post_le(&mut self, a: Bound, b: Bound) -> Result<(), TranslateError> {
        match (a, b) {
            (Bound::Const(ca), Bound::Const(cb)) => {
                if ca > cb {
                    let c = self.store.post_bool_clause(&[], true)?;
                    self.record(c);
                }
            }
            (Bound::Var(v), rhs_bound) => {
                let t = self.store.true_lit();
                let rhs = match rhs_bound {
                    Bound::Const(c) => Operand::Const(c),
                    Bound::Var(w) => Operand::Var(w),
                };
                let c = self.store.post_reified_cmp(CmpOp::Le, v, rhs, 0, t)?;
                self.record(c);
            }
            (Bound::Const(ca), Bound::Var(w)) => {
                let t = self.store.true_lit();
                let c = self.store.post_reified_cmp(
                    CmpOp::Le,
                    w,
                    Operand::Const(ca - 1),
                    0,
                    t.negated(),
                )?;
                self.record(c);
            }
        }
        Ok(())
    }

    /// A literal equivalent to `r = base + delta`.
    fn reify_eq_offset(
        &mut self,
        r: VarId,
        base: Bound,
        delta: i64,
    ) -> Result<Lit, TranslateError> {
        let g = self.fresh_bool();
        let c = match base {
            Bound::Const(c) => {
                self.store
                    .post_reified_value_eq(r, c + delta, Lit::pos(g))?
            }
            Bound::Var(v) => {
                self.store
                    .post_reified_cmp(CmpOp::Eq, r, Operand::Var(v), delta, Lit::pos(g))?
            }
        };
        self.record(c);
        Ok(Lit::pos(g))
    }

    fn post_gate(
        &mut self,
        gate: crate::csp::Gate,
        inputs: &[Lit],
        out: Lit,
    ) -> Result<(), TranslateError> {
        let c = self.store.post_bool_gate(gate, inputs, out)?;
        self.record(c);
        Ok(())
    }

    fn post_clause(&mut self, lits: &[Lit], truth: bool) -> Result<(), TranslateError> {
        let c = self.store.post_bool_clause(lits, truth)?;
        self.record(c);
        Ok(())
    }

    /// Gate helper returning a fresh output literal; collapses the trivial
    /// single-input And/Or case onto the input itself.
    fn gate_value(
        &mut self,
        gate: crate::csp::Gate,
        inputs: Vec<Lit>,
    ) -> Result<Lit, TranslateError> {
        if inputs.len() == 1 && matches!(gate, crate::csp::Gate::And | crate::csp::Gate::Or) {
            return Ok(inputs[0]);
        }
        let out = Lit::pos(self.fresh_bool());
        self.post_gate(gate, &inputs, out)?;
        Ok(out)
    }
}

/// Post one inter-state rule anchored at stage `t0` of a store with
/// `horizon` built stages: if the past side holds on `[0..t0]`, the future
/// side must hold on `[t0+1..horizon-1]`.
pub fn post_rule(
    tr: &mut Translator<'_>,
    rule: &InterStateRule,
    t0: i64,
    horizon: usize,
    mode: Mode,
) -> Result<(), TranslateError> {
    if horizon < 2 {
        return Err(TranslateError::RuleNeedsTwoStages { horizon });
    }
    if t0 < 0 || t0 > horizon as i64 - 2 {
        return Err(TranslateError::BadRuleAnchor { t0, horizon });
    }
    let past_iv = Interval::new(0, t0);
    let fut_iv = Interval::new(t0 + 1, horizon as i64 - 1);
    match mode {
        Mode::Unfold => {
            let past = tr.unfold(&rule.past, Direction::Past, past_iv)?;
            let fut = tr.unfold(&rule.future, Direction::Future, fut_iv)?;
            tr.post_clause(&[Lit::neg(past.truth), Lit::pos(fut.truth)], true)?;
        }
        Mode::Array => {
            // The antecedent occurs negatively, so its negation is
            // translated positively instead; both clause literals are then
            // existentially faithful.
            let neg_past = nnf(&Formula::not(rule.past.clone()), Direction::Past)
                .map_err(TranslateError::NotNnf)?;
            let fut = nnf(&rule.future, Direction::Future).map_err(TranslateError::NotNnf)?;
            let np = tr.array(
                &neg_past,
                Direction::Past,
                Bound::Const(0),
                Bound::Const(t0),
            )?;
            let f = tr.array(
                &fut,
                Direction::Future,
                Bound::Const(t0 + 1),
                Bound::Const(horizon as i64 - 1),
            )?;
            tr.post_clause(&[Lit::pos(np.truth), Lit::pos(f.truth)], true)?;
        }
    }
    Ok(())
}

/// Which translation compiles temporal formulas.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Mode {
    Unfold,
    #[default]
    Array,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Unfold => write!(f, "unfold"),
            Mode::Array => write!(f, "array"),
        }
    }
}
