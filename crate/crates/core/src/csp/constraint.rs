//! Constraint forms and their hyper-arc-consistency revisers.
//!
//! Each reviser prunes every value of every constrained variable that has no
//! supporting tuple under the other variables' current domains. Revisers are
//! sound under repeated application; the propagation queue re-runs them until
//! the global fixpoint is reached.

use alloc::vec::Vec;

use super::store::VarStore;
use super::{Lit, VarId};

/// Gate symbol for Boolean equivalence constraints. `Not` and `Implies` are
/// accepted at the posting surface and normalised onto `And`/`Or` with
/// negated literals.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Gate {
    And,
    Or,
    Not,
    Implies,
    Equiv,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CmpOp {
    Eq,
    Le,
}

/// Integer operand: a variable or a constant.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Operand {
    Var(VarId),
    Const(i64),
}

/// Target of an array-element constraint.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Target {
    Var(VarId),
    Const(i64),
}

/// Coarse classification of a posted constraint, used by audits and tests.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConstraintKind {
    ExtensionalBinary,
    ExtensionalTernary,
    ReifiedValueEq,
    ReifiedIntCompare(CmpOp),
    BoolGate,
    BoolClause,
    ArrayElement,
}

#[derive(Clone, Debug)]
pub(crate) enum ConstraintData {
    /// Allowed value pairs for `(x, y)`, as per-value masks in both
    /// directions. Values must lie in `0..64`.
    ExtBinary {
        x: VarId,
        y: VarId,
        fwd: Vec<u64>,
        rev: Vec<u64>,
    },
    /// Allowed value triples for `(x, y, z)`: `z_mask[a * ny + b]` holds the
    /// supported `z` values under `x = a, y = b`.
    ExtTernary {
        x: VarId,
        y: VarId,
        z: VarId,
        ny: usize,
        z_mask: Vec<u64>,
    },
    /// `(x = value) ≡ out`
    ReifiedValueEq { x: VarId, value: i64, out: Lit },
    /// `(x op rhs + offset) ≡ out`
    ReifiedCmp {
        op: CmpOp,
        x: VarId,
        rhs: Operand,
        offset: i64,
        out: Lit,
    },
    /// `(inputs combined by gate) ≡ out`; gate is `And`, `Or` or `Equiv`
    /// after normalisation.
    BoolGate {
        gate: Gate,
        inputs: Vec<Lit>,
        out: Lit,
    },
    /// Disjunction of literals with a fixed truth value.
    BoolClause { lits: Vec<Lit>, truth: bool },
    /// `family[index - base] = target`.
    ArrayElement {
        family: Vec<VarId>,
        base: i64,
        index: VarId,
        target: Target,
    },
}

impl ConstraintData {
    pub(crate) fn kind(&self) -> ConstraintKind {
        match self {
            ConstraintData::ExtBinary { .. } => ConstraintKind::ExtensionalBinary,
            ConstraintData::ExtTernary { .. } => ConstraintKind::ExtensionalTernary,
            ConstraintData::ReifiedValueEq { .. } => ConstraintKind::ReifiedValueEq,
            ConstraintData::ReifiedCmp { op, .. } => ConstraintKind::ReifiedIntCompare(*op),
            ConstraintData::BoolGate { .. } => ConstraintKind::BoolGate,
            ConstraintData::BoolClause { .. } => ConstraintKind::BoolClause,
            ConstraintData::ArrayElement { .. } => ConstraintKind::ArrayElement,
        }
    }

    pub(crate) fn variables(&self) -> Vec<VarId> {
        match self {
            ConstraintData::ExtBinary { x, y, .. } => alloc::vec![*x, *y],
            ConstraintData::ExtTernary { x, y, z, .. } => alloc::vec![*x, *y, *z],
            ConstraintData::ReifiedValueEq { x, out, .. } => alloc::vec![*x, out.var],
            ConstraintData::ReifiedCmp { x, rhs, out, .. } => {
                let mut vs = alloc::vec![*x, out.var];
                if let Operand::Var(y) = rhs {
                    vs.push(*y);
                }
                vs
            }
            ConstraintData::BoolGate { inputs, out, .. } => {
                let mut vs: Vec<VarId> = inputs.iter().map(|l| l.var).collect();
                vs.push(out.var);
                vs
            }
            ConstraintData::BoolClause { lits, .. } => lits.iter().map(|l| l.var).collect(),
            ConstraintData::ArrayElement {
                family,
                index,
                target,
                ..
            } => {
                let mut vs = family.clone();
                vs.push(*index);
                if let Target::Var(t) = target {
                    vs.push(*t);
                }
                vs
            }
        }
    }

    /// Prune to hyper-arc consistency. Returns false on a domain wipeout.
    pub(crate) fn revise(&self, vs: &mut VarStore) -> bool {
        match self {
            ConstraintData::ExtBinary { x, y, fwd, rev } => {
                let mut support = 0u64;
                for a in vs.dom(*x).iter() {
                    support |= fwd[a as usize];
                }
                if !vs.retain_mask(*y, support) {
                    return false;
                }
                let mut support = 0u64;
                for b in vs.dom(*y).iter() {
                    support |= rev[b as usize];
                }
                vs.retain_mask(*x, support)
            }
            ConstraintData::ExtTernary {
                x,
                y,
                z,
                ny,
                z_mask,
            } => loop {
                let mut changed = false;
                // z: union of cells over current (x, y)
                let mut support = 0u64;
                for a in vs.dom(*x).iter() {
                    for b in vs.dom(*y).iter() {
                        support |= z_mask[a as usize * ny + b as usize];
                    }
                }
                match vs.retain_mask_tracked(*z, support) {
                    None => return false,
                    Some(c) => changed |= c,
                }
                // x: a kept iff some (b, z-value) supports it
                let zdom = vs.dom(*z).word();
                let mut keep_x = 0u64;
                for a in vs.dom(*x).iter() {
                    let row = a as usize * ny;
                    if vs.dom(*y).iter().any(|b| z_mask[row + b as usize] & zdom != 0) {
                        keep_x |= 1 << a;
                    }
                }
                match vs.retain_mask_tracked(*x, keep_x) {
                    None => return false,
                    Some(c) => changed |= c,
                }
                // y likewise
                let zdom = vs.dom(*z).word();
                let mut keep_y = 0u64;
                for b in vs.dom(*y).iter() {
                    if vs
                        .dom(*x)
                        .iter()
                        .any(|a| z_mask[a as usize * ny + b as usize] & zdom != 0)
                    {
                        keep_y |= 1 << b;
                    }
                }
                match vs.retain_mask_tracked(*y, keep_y) {
                    None => return false,
                    Some(c) => changed |= c,
                }
                if !changed {
                    return true;
                }
            },
            ConstraintData::ReifiedValueEq { x, value, out } => {
                if !vs.dom(*x).contains(*value) {
                    if !vs.assign_lit(*out, false) {
                        return false;
                    }
                } else if vs.dom(*x).fixed_value() == Some(*value) && !vs.assign_lit(*out, true) {
                    return false;
                }
                match vs.lit_value(*out) {
                    Some(true) => vs.retain_value(*x, *value),
                    Some(false) => vs.remove_value(*x, *value),
                    None => true,
                }
            }
            ConstraintData::ReifiedCmp {
                op,
                x,
                rhs,
                offset,
                out,
            } => revise_cmp(vs, *op, *x, *rhs, *offset, *out),
            ConstraintData::BoolGate { gate, inputs, out } => {
                revise_gate(vs, *gate, inputs, *out)
            }
            ConstraintData::BoolClause { lits, truth } => {
                if !truth {
                    for l in lits {
                        if !vs.assign_lit(*l, false) {
                            return false;
                        }
                    }
                    return true;
                }
                let mut unfixed = None;
                let mut n_unfixed = 0;
                for l in lits {
                    match vs.lit_value(*l) {
                        Some(true) => return true,
                        Some(false) => {}
                        None => {
                            unfixed = Some(*l);
                            n_unfixed += 1;
                        }
                    }
                }
                match n_unfixed {
                    0 => {
                        vs.fail();
                        false
                    }
                    1 => vs.assign_lit(unfixed.unwrap(), true),
                    _ => true,
                }
            }
            ConstraintData::ArrayElement {
                family,
                base,
                index,
                target,
            } => revise_element(vs, family, *base, *index, *target),
        }
    }
}

fn rhs_bounds(vs: &VarStore, rhs: Operand) -> (i64, i64) {
    match rhs {
        Operand::Var(y) => {
            let d = vs.dom(y);
            (d.min().unwrap(), d.max().unwrap())
        }
        Operand::Const(c) => (c, c),
    }
}

fn revise_cmp(vs: &mut VarStore, op: CmpOp, x: VarId, rhs: Operand, k: i64, out: Lit) -> bool {
    match op {
        CmpOp::Eq => {
            // feasibility and entailment of x = rhs + k
            let overlap = match rhs {
                Operand::Var(y) => vs.dom(x).iter().any(|a| vs.dom(y).contains(a - k)),
                Operand::Const(c) => vs.dom(x).contains(c + k),
            };
            if !overlap {
                if !vs.assign_lit(out, false) {
                    return false;
                }
            } else {
                let entailed = match rhs {
                    Operand::Var(y) => {
                        vs.dom(x).fixed_value().is_some()
                            && vs.dom(y).fixed_value().map(|b| b + k) == vs.dom(x).fixed_value()
                    }
                    Operand::Const(c) => vs.dom(x).fixed_value() == Some(c + k),
                };
                if entailed && !vs.assign_lit(out, true) {
                    return false;
                }
            }
            match vs.lit_value(out) {
                Some(true) => match rhs {
                    Operand::Var(y) => {
                        let drop_x: Vec<i64> = vs
                            .dom(x)
                            .iter()
                            .filter(|a| !vs.dom(y).contains(*a - k))
                            .collect();
                        for v in drop_x {
                            if !vs.remove_value(x, v) {
                                return false;
                            }
                        }
                        let drop_y: Vec<i64> = vs
                            .dom(y)
                            .iter()
                            .filter(|b| !vs.dom(x).contains(*b + k))
                            .collect();
                        for v in drop_y {
                            if !vs.remove_value(y, v) {
                                return false;
                            }
                        }
                        true
                    }
                    Operand::Const(c) => vs.retain_value(x, c + k),
                },
                Some(false) => {
                    match rhs {
                        Operand::Var(y) => {
                            if let Some(b) = vs.dom(y).fixed_value() {
                                if !vs.remove_value(x, b + k) {
                                    return false;
                                }
                            }
                            if let Some(a) = vs.dom(x).fixed_value() {
                                if !vs.remove_value(y, a - k) {
                                    return false;
                                }
                            }
                        }
                        Operand::Const(c) => {
                            if !vs.remove_value(x, c + k) {
                                return false;
                            }
                        }
                    }
                    true
                }
                None => true,
            }
        }
        CmpOp::Le => {
            // x <= rhs + k
            let (rlo, rhi) = rhs_bounds(vs, rhs);
            let d = vs.dom(x);
            let (xlo, xhi) = (d.min().unwrap(), d.max().unwrap());
            if xhi <= rlo + k {
                if !vs.assign_lit(out, true) {
                    return false;
                }
            } else if xlo > rhi + k && !vs.assign_lit(out, false) {
                return false;
            }
            match vs.lit_value(out) {
                Some(true) => {
                    if !vs.remove_above(x, rhi + k) {
                        return false;
                    }
                    if let Operand::Var(y) = rhs {
                        let xlo = vs.dom(x).min().unwrap();
                        if !vs.remove_below(y, xlo - k) {
                            return false;
                        }
                    }
                    true
                }
                Some(false) => {
                    // x > rhs + k
                    if !vs.remove_below(x, rlo + k + 1) {
                        return false;
                    }
                    if let Operand::Var(y) = rhs {
                        let xhi = vs.dom(x).max().unwrap();
                        if !vs.remove_above(y, xhi - k - 1) {
                            return false;
                        }
                    }
                    true
                }
                None => true,
            }
        }
    }
}

fn revise_gate(vs: &mut VarStore, gate: Gate, inputs: &[Lit], out: Lit) -> bool {
    debug_assert!(matches!(gate, Gate::And | Gate::Or | Gate::Equiv));
    if gate == Gate::Equiv {
        let (a, b) = (inputs[0], inputs[1]);
        match (vs.lit_value(a), vs.lit_value(b)) {
            (Some(va), Some(vb)) => {
                if !vs.assign_lit(out, va == vb) {
                    return false;
                }
            }
            (Some(va), None) => {
                if let Some(vo) = vs.lit_value(out) {
                    if !vs.assign_lit(b, if vo { va } else { !va }) {
                        return false;
                    }
                }
            }
            (None, Some(vb)) => {
                if let Some(vo) = vs.lit_value(out) {
                    if !vs.assign_lit(a, if vo { vb } else { !vb }) {
                        return false;
                    }
                }
            }
            (None, None) => {}
        }
        return true;
    }

    // For Or, work with the De Morgan dual of And over negated literals.
    let or = gate == Gate::Or;
    let lit_val = |vs: &VarStore, l: Lit| vs.lit_value(l).map(|v| v ^ or);
    let assign = |vs: &mut VarStore, l: Lit, v: bool| vs.assign_lit(l, v ^ or);

    // out' = AND inputs' where primes flip polarity under Or
    let mut n_unfixed = 0;
    let mut unfixed = None;
    let mut any_false = false;
    for l in inputs {
        match lit_val(vs, *l) {
            Some(true) => {}
            Some(false) => any_false = true,
            None => {
                n_unfixed += 1;
                unfixed = Some(*l);
            }
        }
    }
    if any_false {
        if !assign(vs, out, false) {
            return false;
        }
    } else if n_unfixed == 0 && !assign(vs, out, true) {
        return false;
    }
    match lit_val(vs, out) {
        Some(true) => {
            for l in inputs {
                if !assign(vs, *l, true) {
                    return false;
                }
            }
            true
        }
        Some(false) => {
            if n_unfixed == 1 && !any_false {
                return assign(vs, unfixed.unwrap(), false);
            }
            true
        }
        None => true,
    }
}

fn revise_element(
    vs: &mut VarStore,
    family: &[VarId],
    base: i64,
    index: VarId,
    target: Target,
) -> bool {
    let target_contains = |vs: &VarStore, v: i64| match target {
        Target::Var(t) => vs.dom(t).contains(v),
        Target::Const(c) => c == v,
    };

    // index: keep j iff the cell and the target can agree
    let drop_idx: Vec<i64> = vs
        .dom(index)
        .iter()
        .filter(|j| {
            let slot = j - base;
            if slot < 0 || slot as usize >= family.len() {
                return true;
            }
            !vs.dom(family[slot as usize])
                .iter()
                .any(|v| target_contains(vs, v))
        })
        .collect();
    for j in drop_idx {
        if !vs.remove_value(index, j) {
            return false;
        }
    }

    // target: keep v iff some indexed cell can take it
    if let Target::Var(t) = target {
        let drop_t: Vec<i64> = vs
            .dom(t)
            .iter()
            .filter(|v| {
                !vs.dom(index)
                    .iter()
                    .any(|j| vs.dom(family[(j - base) as usize]).contains(*v))
            })
            .collect();
        for v in drop_t {
            if !vs.remove_value(t, v) {
                return false;
            }
        }
    }

    // the indexed cell itself is constrained only once the index is fixed
    if let Some(j) = vs.dom(index).fixed_value() {
        let cell = family[(j - base) as usize];
        let drop: Vec<i64> = vs
            .dom(cell)
            .iter()
            .filter(|v| !target_contains(vs, *v))
            .collect();
        for v in drop {
            if !vs.remove_value(cell, v) {
                return false;
            }
        }
    }
    true
}
