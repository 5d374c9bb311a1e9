//! The unfolding translation: temporal operators expand over the concrete
//! time points of a constant interval.
//!
//! Every truth variable here is reified in both directions, so once the
//! staged variables are ground, propagation alone pins each truth variable
//! to its formula's value. Negation is therefore handled directly by
//! flipping the associated truth value and no normal form is required.

use alloc::vec::Vec;

use crate::csp::{Gate, Lit, VarId};
use crate::temporal::{AtomOp, Direction, Formula};

use super::{Bound, TranslateError, Translator};

impl<'a> Translator<'a> {
    /// Translate with a fresh truth variable reflecting the formula on
    /// `[s..t]`.
    pub(super) fn unfold_general(
        &mut self,
        f: &Formula,
        dir: Direction,
        s: i64,
        t: i64,
    ) -> Result<VarId, TranslateError> {
        let key = self.memo_key(f, dir, Bound::Const(s), Bound::Const(t), false);
        if self.memoize {
            if let Some(&b) = self.memo.get(&key) {
                return Ok(b);
            }
        }
        let anchor = match dir {
            Direction::Future => s,
            Direction::Past => t,
        };
        let b = match f {
            Formula::True => self.const_bool(true),
            Formula::False => self.const_bool(false),
            Formula::Atom { a, b, op, rel } => {
                let x = self.stage_var(a, b, anchor)?;
                let rel = self.rel_index(rel)?;
                let out = self.fresh_bool();
                let lit = match op {
                    AtomOp::Eq => Lit::pos(out),
                    AtomOp::Ne => Lit::neg(out),
                };
                let c = self.store().post_reified_value_eq(x, rel, lit)?;
                self.record(c);
                out
            }
            Formula::Member { .. }
            | Formula::IfThenElse(..)
            | Formula::ForAll { .. }
            | Formula::Exists { .. } => return Err(TranslateError::NotDesugared),
            Formula::Not(g) => {
                let inner = self.unfold_general(g, dir, s, t)?;
                let out = self.fresh_bool();
                self.post_gate(Gate::Not, &[Lit::pos(inner)], Lit::pos(out))?;
                out
            }
            Formula::And(a, b) => self.unfold_binary(Gate::And, a, b, dir, s, t)?,
            Formula::Or(a, b) => self.unfold_binary(Gate::Or, a, b, dir, s, t)?,
            Formula::Implies(a, b) => self.unfold_binary(Gate::Implies, a, b, dir, s, t)?,

            Formula::Next(g) => {
                if s + 1 > t {
                    self.const_bool(false)
                } else {
                    self.unfold_general(g, dir, s + 1, t)?
                }
            }
            Formula::WeakNext(g) => {
                if s == t {
                    self.const_bool(true)
                } else {
                    self.unfold_general(g, dir, s + 1, t)?
                }
            }
            Formula::Always(g) => self.unfold_quantified(Gate::And, g, dir, s, t)?,
            Formula::Eventually(g) => self.unfold_quantified(Gate::Or, g, dir, s, t)?,
            Formula::Until(chi, phi) => {
                // φ ∨ (χ ∧ X(χ U φ)), bottoming out at the interval end
                let phi_now = self.unfold_general(phi, dir, s, t)?;
                if s == t {
                    phi_now
                } else {
                    let chi_now = self.unfold_general(chi, dir, s, t)?;
                    let rest = self.unfold_general(f, dir, s + 1, t)?;
                    let step = self.gate_value(
                        Gate::And,
                        alloc::vec![Lit::pos(chi_now), Lit::pos(rest)],
                    )?;
                    let out =
                        self.gate_value(Gate::Or, alloc::vec![Lit::pos(phi_now), step])?;
                    out.var
                }
            }
            Formula::Release(chi, phi) => {
                // for every r: φ on [r..t], unless some earlier χ released it
                let mut per_point = Vec::new();
                for r in s..=t {
                    let phi_r = self.unfold_general(phi, dir, r, t)?;
                    let mut lits = alloc::vec![Lit::pos(phi_r)];
                    for u in s..r {
                        let chi_u = self.unfold_general(chi, dir, u, t)?;
                        lits.push(Lit::pos(chi_u));
                    }
                    per_point.push(self.gate_value(Gate::Or, lits)?);
                }
                self.gate_value(Gate::And, per_point)?.var
            }

            Formula::Prev(g) => {
                if t - 1 < s {
                    self.const_bool(false)
                } else {
                    self.unfold_general(g, dir, s, t - 1)?
                }
            }
            Formula::WeakPrev(g) => {
                if s == t {
                    self.const_bool(true)
                } else {
                    self.unfold_general(g, dir, s, t - 1)?
                }
            }
            Formula::AlwaysPast(g) => self.unfold_quantified(Gate::And, g, dir, s, t)?,
            Formula::EventuallyPast(g) => self.unfold_quantified(Gate::Or, g, dir, s, t)?,
            Formula::Since(chi, phi) => {
                // φ ∨ (χ ∧ Xp(χ S φ)), stepping the anchor backward
                let phi_now = self.unfold_general(phi, dir, s, t)?;
                if s == t {
                    phi_now
                } else {
                    let chi_now = self.unfold_general(chi, dir, s, t)?;
                    let rest = self.unfold_general(f, dir, s, t - 1)?;
                    let step = self.gate_value(
                        Gate::And,
                        alloc::vec![Lit::pos(chi_now), Lit::pos(rest)],
                    )?;
                    let out =
                        self.gate_value(Gate::Or, alloc::vec![Lit::pos(phi_now), step])?;
                    out.var
                }
            }
            Formula::ReleasePast(chi, phi) => {
                let mut per_point = Vec::new();
                for r in s..=t {
                    let phi_r = self.unfold_general(phi, dir, s, r)?;
                    let mut lits = alloc::vec![Lit::pos(phi_r)];
                    for u in r + 1..=t {
                        let chi_u = self.unfold_general(chi, dir, s, u)?;
                        lits.push(Lit::pos(chi_u));
                    }
                    per_point.push(self.gate_value(Gate::Or, lits)?);
                }
                self.gate_value(Gate::And, per_point)?.var
            }
        };
        if self.memoize {
            self.memo.insert(key, b);
        }
        Ok(b)
    }

    fn unfold_binary(
        &mut self,
        gate: Gate,
        a: &Formula,
        b: &Formula,
        dir: Direction,
        s: i64,
        t: i64,
    ) -> Result<VarId, TranslateError> {
        let ba = self.unfold_general(a, dir, s, t)?;
        let bb = self.unfold_general(b, dir, s, t)?;
        let out = self.fresh_bool();
        self.post_gate(gate, &[Lit::pos(ba), Lit::pos(bb)], Lit::pos(out))?;
        Ok(out)
    }

    /// `Always`/`Eventually` and their past forms: one recursion per point,
    /// combined by a single gate. Future recursions run on `[r..t]`, past
    /// ones on `[s..r]`.
    fn unfold_quantified(
        &mut self,
        gate: Gate,
        g: &Formula,
        dir: Direction,
        s: i64,
        t: i64,
    ) -> Result<VarId, TranslateError> {
        let mut lits = Vec::new();
        for r in s..=t {
            let b = match dir {
                Direction::Future => self.unfold_general(g, dir, r, t)?,
                Direction::Past => self.unfold_general(g, dir, s, r)?,
            };
            lits.push(Lit::pos(b));
        }
        let out = self.fresh_bool();
        self.post_gate(gate, &lits, Lit::pos(out))?;
        Ok(out)
    }

    /// Translate with the formula required true on `[s..t]`: conjunctive
    /// structure recurses, disjunctive structure becomes clauses over
    /// general translations of the disjuncts.
    pub(super) fn unfold_require(
        &mut self,
        f: &Formula,
        dir: Direction,
        s: i64,
        t: i64,
    ) -> Result<(), TranslateError> {
        let key = self.memo_key(f, dir, Bound::Const(s), Bound::Const(t), true);
        if self.memoize && self.memo.contains_key(&key) {
            return Ok(());
        }
        let anchor = match dir {
            Direction::Future => s,
            Direction::Past => t,
        };
        match f {
            Formula::True => {}
            Formula::False => self.post_clause(&[], true)?,
            Formula::Atom { a, b, op, rel } => {
                let x = self.stage_var(a, b, anchor)?;
                let rel = self.rel_index(rel)?;
                let t_lit = self.store().true_lit();
                let lit = match op {
                    AtomOp::Eq => t_lit,
                    AtomOp::Ne => t_lit.negated(),
                };
                let c = self.store().post_reified_value_eq(x, rel, lit)?;
                self.record(c);
            }
            Formula::Member { .. }
            | Formula::IfThenElse(..)
            | Formula::ForAll { .. }
            | Formula::Exists { .. } => return Err(TranslateError::NotDesugared),
            Formula::Not(g) => {
                let b = self.unfold_general(g, dir, s, t)?;
                self.post_clause(&[Lit::neg(b)], true)?;
            }
            Formula::And(a, b) => {
                self.unfold_require(a, dir, s, t)?;
                self.unfold_require(b, dir, s, t)?;
            }
            Formula::Or(a, b) => {
                let ba = self.unfold_general(a, dir, s, t)?;
                let bb = self.unfold_general(b, dir, s, t)?;
                self.post_clause(&[Lit::pos(ba), Lit::pos(bb)], true)?;
            }
            Formula::Implies(a, b) => {
                let ba = self.unfold_general(a, dir, s, t)?;
                let bb = self.unfold_general(b, dir, s, t)?;
                self.post_clause(&[Lit::neg(ba), Lit::pos(bb)], true)?;
            }
            Formula::Next(g) => {
                if s + 1 > t {
                    self.post_clause(&[], true)?;
                } else {
                    self.unfold_require(g, dir, s + 1, t)?;
                }
            }
            Formula::WeakNext(g) => {
                if s < t {
                    self.unfold_require(g, dir, s + 1, t)?;
                }
            }
            Formula::Always(g) => {
                for r in s..=t {
                    self.unfold_require(g, dir, r, t)?;
                }
            }
            Formula::Eventually(g) => {
                let mut lits = Vec::new();
                for r in s..=t {
                    lits.push(Lit::pos(self.unfold_general(g, dir, r, t)?));
                }
                self.post_clause(&lits, true)?;
            }
            Formula::Until(..) | Formula::Release(..) => {
                let b = self.unfold_general(f, dir, s, t)?;
                self.post_clause(&[Lit::pos(b)], true)?;
            }
            Formula::Prev(g) => {
                if t - 1 < s {
                    self.post_clause(&[], true)?;
                } else {
                    self.unfold_require(g, dir, s, t - 1)?;
                }
            }
            Formula::WeakPrev(g) => {
                if s < t {
                    self.unfold_require(g, dir, s, t - 1)?;
                }
            }
            Formula::AlwaysPast(g) => {
                for r in s..=t {
                    self.unfold_require(g, dir, s, r)?;
                }
            }
            Formula::EventuallyPast(g) => {
                let mut lits = Vec::new();
                for r in s..=t {
                    lits.push(Lit::pos(self.unfold_general(g, dir, s, r)?));
                }
                self.post_clause(&lits, true)?;
            }
            Formula::Since(..) | Formula::ReleasePast(..) => {
                let b = self.unfold_general(f, dir, s, t)?;
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
