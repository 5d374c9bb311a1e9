//! The array translation: interval bounds may be variables, disjunctive
//! temporal structure moves into the domains of fresh time variables, and
//! atoms under a symbolic time point become array (element) constraints.
//!
//! Input must be in negation normal form: with witness variables inside the
//! encoding, flipping a truth variable no longer expresses negation.
//! `Always` (and its past twin) unfolds step-wise, guarded by reachability
//! of the next stage, which keeps every generated interval inside the
//! `lo <= hi` invariant; recursion depth is bounded by the horizon.

use crate::calculus::RelSet;
use crate::csp::{Domain, Gate, Lit, Target, VarId};
use crate::temporal::{AtomOp, Direction, Formula};

use super::{Bound, TranslateError, Translator};

impl<'a> Translator<'a> {
    /// A literal equivalent to `a + shift <= b`.
    fn reify_le_shift(
        &mut self,
        a: Bound,
        shift: i64,
        b: Bound,
    ) -> Result<Lit, TranslateError> {
        match a {
            Bound::Const(c) => self.reify_le(Bound::Const(c + shift), b),
            Bound::Var(v) => match b {
                Bound::Const(c) => self.reify_le(Bound::Var(v), Bound::Const(c - shift)),
                Bound::Var(w) => {
                    let g = self.fresh_bool();
                    let c = self.store().post_reified_cmp(
                        crate::csp::CmpOp::Le,
                        v,
                        crate::csp::Operand::Var(w),
                        -shift,
                        Lit::pos(g),
                    )?;
                    self.record(c);
                    Ok(Lit::pos(g))
                }
            },
        }
    }

    /// Guarded move of an interval end by one step: returns the guard
    /// literal (`true` iff the moved interval is non-empty) and the new
    /// bound. `delta` is `+1` on the lower bound for future steps, `-1` on
    /// the upper bound for past steps.
    fn stepped_bound(
        &mut self,
        from: Bound,
        delta: i64,
        other: Bound,
    ) -> Result<(Lit, Bound), TranslateError> {
        let guard = match delta {
            1 => self.reify_le_shift(from, 1, other)?,
            _ => self.reify_le_shift(other, 1, from)?,
        };
        let stepped = match from {
            Bound::Const(c) => Bound::Const(c + delta),
            Bound::Var(v) => {
                let (min, max) = (self.bound_min(from), self.bound_max(from));
                let (omin, omax) = (self.bound_min(other), self.bound_max(other));
                let (rmin, rmax) = if delta == 1 {
                    (min + 1, omax)
                } else {
                    (omin, max - 1)
                };
                let r = self.fresh_time(rmin, rmax);
                // guard -> r = v + delta; one-directional so the fresh
                // variable stays free when the step is unreachable
                let eq = self.reify_eq_offset(r, Bound::Var(v), delta)?;
                self.post_clause(&[guard.negated(), eq], true)?;
                Bound::Var(r)
            }
        };
        Ok((guard, stepped))
    }

    fn atom_truth(
        &mut self,
        a: &str,
        b: &str,
        op: AtomOp,
        rel: &str,
        anchor: Bound,
    ) -> Result<VarId, TranslateError> {
        let rel_idx = self.rel_index(rel)?;
        let out = self.fresh_bool();
        let lit = match op {
            AtomOp::Eq => Lit::pos(out),
            AtomOp::Ne => Lit::neg(out),
        };
        match anchor {
            Bound::Const(c) => {
                let x = self.stage_var(a, b, c)?;
                let c = self.store().post_reified_value_eq(x, rel_idx, lit)?;
                self.record(c);
            }
            Bound::Var(v) => {
                let (ai, bi) = self.pair_indices(a, b)?;
                let family = self.space.family(ai, bi);
                let universe = self.calculus.size();
                let cell = self
                    .store()
                    .new_var(Domain::relations(RelSet::full(universe), universe))
                    .expect("non-empty cell domain");
                self.fresh.push(cell);
                let c1 = self
                    .store()
                    .post_array_element(&family, 0, v, Target::Var(cell))?;
                self.record(c1);
                let c2 = self.store().post_reified_value_eq(cell, rel_idx, lit)?;
                self.record(c2);
            }
        }
        Ok(out)
    }

    pub(super) fn array_general(
        &mut self,
        f: &Formula,
        dir: Direction,
        lo: Bound,
        hi: Bound,
    ) -> Result<VarId, TranslateError> {
        let key = self.memo_key(f, dir, lo, hi, false);
        if self.memoize {
            if let Some(&b) = self.memo.get(&key) {
                return Ok(b);
            }
        }
        let anchor = match dir {
            Direction::Future => lo,
            Direction::Past => hi,
        };
        let b = match f {
            Formula::True => self.const_bool(true),
            Formula::False => self.const_bool(false),
            Formula::Atom { a, b, op, rel } => self.atom_truth(a, b, *op, rel, anchor)?,
            Formula::Member { .. }
            | Formula::IfThenElse(..)
            | Formula::ForAll { .. }
            | Formula::Exists { .. } => return Err(TranslateError::NotDesugared),
            Formula::Not(..) | Formula::Implies(..) => {
                return Err(TranslateError::NotNnf(
                    crate::temporal::NnfError::NotDesugared,
                ))
            }
            Formula::And(x, y) => {
                let bx = self.array_general(x, dir, lo, hi)?;
                let by = self.array_general(y, dir, lo, hi)?;
                self.gate_value(Gate::And, alloc::vec![Lit::pos(bx), Lit::pos(by)])?
                    .var
            }
            Formula::Or(x, y) => {
                let bx = self.array_general(x, dir, lo, hi)?;
                let by = self.array_general(y, dir, lo, hi)?;
                self.gate_value(Gate::Or, alloc::vec![Lit::pos(bx), Lit::pos(by)])?
                    .var
            }

            Formula::Next(g) => self.step_truth(g, f, dir, lo, hi, false)?,
            Formula::WeakNext(g) => self.step_truth(g, f, dir, lo, hi, true)?,
            Formula::Prev(g) => self.step_truth(g, f, dir, lo, hi, false)?,
            Formula::WeakPrev(g) => self.step_truth(g, f, dir, lo, hi, true)?,

            Formula::Always(g) | Formula::AlwaysPast(g) => {
                // φ ∧ (step possible -> □φ on the stepped interval)
                let now = self.array_general(g, dir, lo, hi)?;
                let future = matches!(f, Formula::Always(_));
                let (from, delta, other) = if future { (lo, 1, hi) } else { (hi, -1, lo) };
                if self.step_impossible(from, delta, other) {
                    now
                } else {
                    let (guard, stepped) = self.stepped_bound(from, delta, other)?;
                    let rec = if future {
                        self.array_general(f, dir, stepped, hi)?
                    } else {
                        self.array_general(f, dir, lo, stepped)?
                    };
                    let cont = self
                        .gate_value(Gate::Or, alloc::vec![guard.negated(), Lit::pos(rec)])?;
                    self.gate_value(Gate::And, alloc::vec![Lit::pos(now), cont])?.var
                }
            }

            Formula::Eventually(g) => {
                let r = self.witness_time(lo, hi)?;
                self.array_general(g, dir, Bound::Var(r), hi)?
            }
            Formula::EventuallyPast(g) => {
                let r = self.witness_time(lo, hi)?;
                self.array_general(g, dir, lo, Bound::Var(r))?
            }

            Formula::Until(chi, phi) => {
                let r = self.witness_time(lo, hi)?;
                let b1 = self.array_general(phi, dir, Bound::Var(r), hi)?;
                let mut lits = alloc::vec![Lit::pos(b1)];
                // χ must hold at every concrete point before the witness
                for v in self.bound_min(lo)..=self.bound_max(hi) {
                    let after_lo = self.reify_le(lo, Bound::Const(v))?;
                    let before_r = self.reify_le_shift(Bound::Const(v), 1, Bound::Var(r))?;
                    let in_prefix = self.gate_value(Gate::And, alloc::vec![after_lo, before_r])?;
                    let chi_v = self.array_general(chi, dir, Bound::Const(v), hi)?;
                    lits.push(self.gate_value(
                        Gate::Or,
                        alloc::vec![in_prefix.negated(), Lit::pos(chi_v)],
                    )?);
                }
                self.gate_value(Gate::And, lits)?.var
            }
            Formula::Since(chi, phi) => {
                let r = self.witness_time(lo, hi)?;
                let b1 = self.array_general(phi, dir, lo, Bound::Var(r))?;
                let mut lits = alloc::vec![Lit::pos(b1)];
                for v in self.bound_min(lo)..=self.bound_max(hi) {
                    let after_r = self.reify_le_shift(Bound::Var(r), 1, Bound::Const(v))?;
                    let before_hi = self.reify_le(Bound::Const(v), hi)?;
                    let in_suffix = self.gate_value(Gate::And, alloc::vec![after_r, before_hi])?;
                    let chi_v = self.array_general(chi, dir, lo, Bound::Const(v))?;
                    lits.push(self.gate_value(
                        Gate::Or,
                        alloc::vec![in_suffix.negated(), Lit::pos(chi_v)],
                    )?);
                }
                self.gate_value(Gate::And, lits)?.var
            }

            Formula::Release(chi, phi) => {
                // χ R φ  ≡  Gφ ∨ (φ U (χ ∧ φ)) under the bounded semantics
                let expand = Formula::or(
                    Formula::Always(phi.clone()),
                    Formula::Until(phi.clone(), alloc::boxed::Box::new(Formula::and(
                        chi.as_ref().clone(),
                        phi.as_ref().clone(),
                    ))),
                );
                self.array_general(&expand, dir, lo, hi)?
            }
            Formula::ReleasePast(chi, phi) => {
                let expand = Formula::or(
                    Formula::AlwaysPast(phi.clone()),
                    Formula::Since(phi.clone(), alloc::boxed::Box::new(Formula::and(
                        chi.as_ref().clone(),
                        phi.as_ref().clone(),
                    ))),
                );
                self.array_general(&expand, dir, lo, hi)?
            }
        };
        if self.memoize {
            self.memo.insert(key, b);
        }
        Ok(b)
    }

    fn step_impossible(&self, from: Bound, delta: i64, other: Bound) -> bool {
        if delta == 1 {
            self.bound_min(from) + 1 > self.bound_max(other)
        } else {
            self.bound_max(from) - 1 < self.bound_min(other)
        }
    }


    /// Truth of a strong or weak step operator.
    fn step_truth(
        &mut self,
        g: &Formula,
        whole: &Formula,
        dir: Direction,
        lo: Bound,
        hi: Bound,
        weak: bool,
    ) -> Result<VarId, TranslateError> {
        let future = matches!(whole, Formula::Next(_) | Formula::WeakNext(_));
        debug_assert_eq!(future, dir == Direction::Future);
        let (from, delta, other) = if future { (lo, 1, hi) } else { (hi, -1, lo) };
        if self.step_impossible(from, delta, other) {
            return Ok(self.const_bool(weak));
        }
        let (guard, stepped) = self.stepped_bound(from, delta, other)?;
        let rec = if future {
            self.array_general(g, dir, stepped, hi)?
        } else {
            self.array_general(g, dir, lo, stepped)?
        };
        let lit = if weak {
            self.gate_value(Gate::Or, alloc::vec![guard.negated(), Lit::pos(rec)])?
        } else {
            self.gate_value(Gate::And, alloc::vec![guard, Lit::pos(rec)])?
        };
        Ok(lit.var)
    }

    /// Fresh time variable with hard ordering constraints `lo <= r <= hi`.
    fn witness_time(&mut self, lo: Bound, hi: Bound) -> Result<VarId, TranslateError> {
        let r = self.fresh_time(self.bound_min(lo), self.bound_max(hi));
        self.post_le(lo, Bound::Var(r))?;
        self.post_le(Bound::Var(r), hi)?;
        Ok(r)
    }

    pub(super) fn array_require(
        &mut self,
        f: &Formula,
        dir: Direction,
        lo: Bound,
        hi: Bound,
    ) -> Result<(), TranslateError> {
        let key = self.memo_key(f, dir, lo, hi, true);
        if self.memoize && self.memo.contains_key(&key) {
            return Ok(());
        }
        let anchor = match dir {
            Direction::Future => lo,
            Direction::Past => hi,
        };
        match f {
            Formula::True => {}
            Formula::False => self.post_clause(&[], true)?,
            Formula::Atom { a, b, op, rel } => {
                let rel_idx = self.rel_index(rel)?;
                match anchor {
                    Bound::Const(c) => {
                        let x = self.stage_var(a, b, c)?;
                        let t_lit = self.store().true_lit();
                        let lit = match op {
                            AtomOp::Eq => t_lit,
                            AtomOp::Ne => t_lit.negated(),
                        };
                        let c = self.store().post_reified_value_eq(x, rel_idx, lit)?;
                        self.record(c);
                    }
                    Bound::Var(v) => {
                        let (ai, bi) = self.pair_indices(a, b)?;
                        let family = self.space.family(ai, bi);
                        match op {
                            AtomOp::Eq => {
                                let c = self.store().post_array_element(
                                    &family,
                                    0,
                                    v,
                                    Target::Const(rel_idx),
                                )?;
                                self.record(c);
                            }
                            AtomOp::Ne => {
                                // the cell ranges over everything but rel
                                let universe = self.calculus.size();
                                let mut dom = RelSet::full(universe);
                                dom.remove(crate::calculus::Rel(rel_idx as u8));
                                let cell = self
                                    .store()
                                    .new_var(Domain::relations(dom, universe))
                                    .expect("non-empty cell domain");
                                self.fresh.push(cell);
                                let c = self.store().post_array_element(
                                    &family,
                                    0,
                                    v,
                                    Target::Var(cell),
                                )?;
                                self.record(c);
                            }
                        }
                    }
                }
            }
            Formula::Member { .. }
            | Formula::IfThenElse(..)
            | Formula::ForAll { .. }
            | Formula::Exists { .. } => return Err(TranslateError::NotDesugared),
            Formula::Not(..) | Formula::Implies(..) => {
                return Err(TranslateError::NotNnf(
                    crate::temporal::NnfError::NotDesugared,
                ))
            }
            Formula::And(x, y) => {
                self.array_require(x, dir, lo, hi)?;
                self.array_require(y, dir, lo, hi)?;
            }
            Formula::Or(x, y) => {
                let bx = self.array_general(x, dir, lo, hi)?;
                let by = self.array_general(y, dir, lo, hi)?;
                self.post_clause(&[Lit::pos(bx), Lit::pos(by)], true)?;
            }

            Formula::Next(g) | Formula::Prev(g) => {
                let future = matches!(f, Formula::Next(_));
                let (from, delta, other) = if future { (lo, 1, hi) } else { (hi, -1, lo) };
                if self.step_impossible(from, delta, other) {
                    self.post_clause(&[], true)?;
                } else {
                    // the step must exist
                    let stepped = match from {
                        Bound::Const(c) => {
                            if future {
                                self.post_le(Bound::Const(c + 1), other)?;
                            } else {
                                self.post_le(other, Bound::Const(c - 1))?;
                            }
                            Bound::Const(c + delta)
                        }
                        Bound::Var(v) => {
                            let (rmin, rmax) = if future {
                                (self.bound_min(from) + 1, self.bound_max(other))
                            } else {
                                (self.bound_min(other), self.bound_max(from) - 1)
                            };
                            let r = self.fresh_time(rmin, rmax);
                            let t_lit = self.store().true_lit();
                            let c = self.store().post_reified_cmp(
                                crate::csp::CmpOp::Eq,
                                r,
                                crate::csp::Operand::Var(v),
                                delta,
                                t_lit,
                            )?;
                            self.record(c);
                            if future {
                                self.post_le(Bound::Var(r), other)?;
                            } else {
                                self.post_le(other, Bound::Var(r))?;
                            }
                            Bound::Var(r)
                        }
                    };
                    if future {
                        self.array_require(g, dir, stepped, hi)?;
                    } else {
                        self.array_require(g, dir, lo, stepped)?;
                    }
                }
            }

            Formula::Always(g) if matches!((lo, hi), (Bound::Const(_), Bound::Const(_))) => {
                let (s, t) = (self.bound_min(lo), self.bound_max(hi));
                for r in s..=t {
                    self.array_require(g, dir, Bound::Const(r), Bound::Const(t))?;
                }
            }
            Formula::AlwaysPast(g)
                if matches!((lo, hi), (Bound::Const(_), Bound::Const(_))) =>
            {
                let (s, t) = (self.bound_min(lo), self.bound_max(hi));
                for r in s..=t {
                    self.array_require(g, dir, Bound::Const(s), Bound::Const(r))?;
                }
            }

            Formula::Eventually(g) => {
                let r = self.witness_time(lo, hi)?;
                self.array_require(g, dir, Bound::Var(r), hi)?;
            }
            Formula::EventuallyPast(g) => {
                let r = self.witness_time(lo, hi)?;
                self.array_require(g, dir, lo, Bound::Var(r))?;
            }

            // remaining operators: require through the general translation
            _ => {
                let b = self.array_general(f, dir, lo, hi)?;
                self.post_clause(&[Lit::pos(b)], true)?;
            }
        }
        if self.memoize {
            let marker = self.store().true_lit().var;
            self.memo.insert(key, marker);
        }
        Ok(())
    }
}
