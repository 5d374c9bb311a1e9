//! Cross-checks of both translations against the reference evaluator on
//! small exhaustive spaces. The acceptance suite runs the same machinery at
//! larger depth; this keeps a faster version in the regular test run.

use qsim_core::calculus::Rel;
use qsim_core::csp::{
    solve, Domain, Heuristic, Limits, Lit, NoClock, Propagation, SolveOutcome, Store, VarId,
};
use qsim_core::temporal::{desugar, eval, nnf, Direction, Formula, Interval, Trace};
use qsim_core::testing::{
    enumerate_formulas, enumerate_traces, tiny_calculus, two_objects,
};
use qsim_core::translate::{Bound, StageSpace, Translator};

struct Harness {
    store: Store,
    space: StageSpace,
    horizon: usize,
}

fn build_space(horizon: usize) -> Harness {
    let c = tiny_calculus();
    let mut store = Store::new();
    let mut space = StageSpace::new(2);
    for _t in 0..horizon {
        let mut stage = Vec::new();
        for _pair in 0..4 {
            stage.push(
                store
                    .new_var(Domain::relations(c.full_set(), c.size()))
                    .unwrap(),
            );
        }
        space.push_stage(stage);
    }
    Harness {
        store,
        space,
        horizon,
    }
}

fn fix_trace(store: &mut Store, space: &StageSpace, trace: &Trace) {
    for t in 0..trace.horizon() {
        let v = space.var(0, 1, t as i64);
        let rel = trace.at(t, 0, 1);
        store.restrict(v, &[rel.index() as i64]);
        store.touch(v);
    }
}

fn all_intervals(horizon: usize) -> Vec<Interval> {
    let mut out = Vec::new();
    for s in 0..horizon {
        for t in s..horizon {
            out.push(Interval::new(s as i64, t as i64));
        }
    }
    out
}

fn satisfiable(store: &mut Store) -> bool {
    match solve(store, &Heuristic::default(), Limits::default(), &NoClock) {
        SolveOutcome::Solution(_) => true,
        SolveOutcome::NoSolution => false,
        SolveOutcome::Exhausted => panic!("unbudgeted solve exhausted"),
    }
}

/// unfold (general mode): with the trace fixed, propagation alone must pin
/// the truth variable to the evaluator's verdict.
fn check_unfold_forces(f: &Formula, dir: Direction, horizon: usize, traces: &[Trace]) {
    let calculus = tiny_calculus();
    let objects = two_objects();
    for iv in all_intervals(horizon) {
        let mut h = build_space(horizon);
        let mut tr = Translator::new(&mut h.store, &h.space, &calculus, &objects);
        let result = tr.unfold(f, dir, iv).expect("unfold translation");
        let truth = result.truth;
        if h.store.propagate() == Propagation::Inconsistent {
            panic!("translation alone must stay consistent");
        }
        for trace in traces {
            h.store.mark();
            fix_trace(&mut h.store, &h.space, trace);
            let consistent = h.store.propagate() == Propagation::Consistent;
            assert!(consistent, "ground trace wiped out: {f:?} on {iv}");
            let expected = eval(f, trace, iv, dir);
            let got = h.store.value_of(truth);
            assert_eq!(
                got,
                Some(expected as i64),
                "unfold truth not forced to eval: {f:?} on {iv}"
            );
            h.store.undo_to_mark();
        }
    }
}

/// array (general mode, on NNF): with the trace fixed and the truth pinned
/// true, the store is satisfiable iff the evaluator says true.
fn check_array_witnesses(f: &Formula, dir: Direction, horizon: usize, traces: &[Trace]) {
    let calculus = tiny_calculus();
    let objects = two_objects();
    let g = nnf(f, dir).expect("nnf");
    for iv in all_intervals(horizon) {
        let mut h = build_space(horizon);
        let mut tr = Translator::new(&mut h.store, &h.space, &calculus, &objects);
        let result = tr
            .array(&g, dir, Bound::Const(iv.lo()), Bound::Const(iv.hi()))
            .expect("array translation");
        let truth = result.truth;
        if h.store.propagate() == Propagation::Inconsistent {
            // e.g. `false` required nowhere: general translation alone
            // should not wipe out
            panic!("array translation alone must stay consistent");
        }
        for trace in traces {
            // NNF must preserve evaluation
            let expected = eval(f, trace, iv, dir);
            assert_eq!(
                expected,
                eval(&g, trace, iv, dir),
                "nnf changed semantics: {f:?}"
            );
            h.store.mark();
            fix_trace(&mut h.store, &h.space, trace);
            let mut ok = h.store.propagate() == Propagation::Consistent;
            if ok {
                ok = h.store.restrict(truth, &[1]) == Propagation::Consistent;
                h.store.touch(truth);
            }
            let sat = ok && satisfiable(&mut h.store);
            assert_eq!(
                sat, expected,
                "array truth witness disagrees with eval: {f:?} on {iv} (nnf: {g:?})"
            );
            h.store.undo_to_mark();
        }
    }
}

/// required modes: posting the formula as required makes the store
/// satisfiable exactly on the traces the evaluator accepts.
fn check_required_modes(f: &Formula, dir: Direction, horizon: usize, traces: &[Trace]) {
    let calculus = tiny_calculus();
    let objects = two_objects();
    let g = nnf(f, dir).expect("nnf");
    for iv in all_intervals(horizon) {
        for array_mode in [false, true] {
            let mut h = build_space(horizon);
            let mut tr = Translator::new(&mut h.store, &h.space, &calculus, &objects);
            if array_mode {
                tr.array_required(&g, dir, Bound::Const(iv.lo()), Bound::Const(iv.hi()))
                    .expect("array required translation");
            } else {
                tr.unfold_required(f, dir, iv).expect("unfold required");
            }
            let rooted = h.store.propagate() == Propagation::Consistent;
            for trace in traces {
                let expected = eval(f, trace, iv, dir);
                if !rooted {
                    assert!(!expected, "store failed but eval accepts: {f:?} on {iv}");
                    continue;
                }
                h.store.mark();
                fix_trace(&mut h.store, &h.space, trace);
                let sat = h.store.propagate() == Propagation::Consistent
                    && satisfiable(&mut h.store);
                assert_eq!(
                    sat, expected,
                    "required-mode (array={array_mode}) disagrees with eval: {f:?} on {iv}"
                );
                h.store.undo_to_mark();
            }
        }
    }
}

fn run_suite(dir: Direction, depth: usize, horizon_max: usize) {
    let formulas = enumerate_formulas(dir, depth);
    for horizon in 1..=horizon_max {
        let traces = enumerate_traces(horizon);
        for f in &formulas {
            check_unfold_forces(f, dir, horizon, &traces);
            check_array_witnesses(f, dir, horizon, &traces);
        }
    }
}

#[test]
fn unfold_and_array_agree_with_eval_future_depth2() {
    run_suite(Direction::Future, 2, 3);
}

#[test]
fn unfold_and_array_agree_with_eval_past_depth2() {
    run_suite(Direction::Past, 2, 3);
}

#[test]
fn required_modes_agree_with_eval_depth2() {
    for dir in [Direction::Future, Direction::Past] {
        let formulas = enumerate_formulas(dir, 2);
        for horizon in 1..=3 {
            let traces = enumerate_traces(horizon);
            for f in &formulas {
                check_required_modes(f, dir, horizon, &traces);
            }
        }
    }
}

#[test]
fn desugar_preserves_eval() {
    // sugar-specific formulas: membership, ite, quantifiers over objects
    let objects = two_objects();
    let member = Formula::Member {
        a: "A".into(),
        b: "B".into(),
        member: true,
        rels: vec!["p".into()],
    };
    let nonmember = Formula::Member {
        a: "A".into(),
        b: "B".into(),
        member: false,
        rels: vec!["p".into(), "q".into()],
    };
    let ite = Formula::IfThenElse(
        Box::new(member.clone()),
        Box::new(Formula::Next(Box::new(member.clone()))),
        Box::new(Formula::Eventually(Box::new(Formula::atom(
            "A",
            "B",
            qsim_core::temporal::AtomOp::Eq,
            "q",
        )))),
    );
    let quant = Formula::Exists {
        binder: "o".into(),
        set: vec!["A".into(), "B".into()],
        body: Box::new(Formula::Member {
            a: "o".into(),
            b: "B".into(),
            member: true,
            rels: vec!["p".into()],
        }),
    };
    for f in [member, nonmember, ite, quant] {
        let d = desugar(&f, &objects).unwrap();
        for horizon in 1..=3 {
            for trace in enumerate_traces_full(horizon) {
                for iv in all_intervals(horizon) {
                    assert_eq!(
                        eval(&f, &trace, iv, Direction::Future),
                        eval(&d, &trace, iv, Direction::Future),
                        "desugar changed semantics: {f:?}"
                    );
                }
            }
        }
    }
}

/// Traces assigning all four ordered pairs (needed once quantifiers range
/// over both objects).
fn enumerate_traces_full(horizon: usize) -> Vec<Trace> {
    let objects = two_objects();
    let rels: Vec<String> = vec!["p".to_string(), "q".to_string()];
    let mut out = Vec::new();
    let cells = 4 * horizon;
    for bits in 0..(1u32 << cells) {
        let mut tr = Trace::new(&objects, &rels, horizon);
        let mut i = 0;
        for t in 0..horizon {
            for a in 0..2 {
                for b in 0..2 {
                    tr.set(t, a, b, Rel(((bits >> i) & 1) as u8));
                    i += 1;
                }
            }
        }
        out.push(tr);
    }
    out
}

#[test]
fn past_future_duality_on_reversed_traces() {
    // eval of a past formula equals eval of its mirror on the reversed
    // trace with the interval reflected
    fn mirror(f: &Formula) -> Formula {
        match f {
            Formula::Prev(g) => Formula::Next(Box::new(mirror(g))),
            Formula::WeakPrev(g) => Formula::WeakNext(Box::new(mirror(g))),
            Formula::AlwaysPast(g) => Formula::Always(Box::new(mirror(g))),
            Formula::EventuallyPast(g) => Formula::Eventually(Box::new(mirror(g))),
            Formula::Since(a, b) => {
                Formula::Until(Box::new(mirror(a)), Box::new(mirror(b)))
            }
            Formula::ReleasePast(a, b) => {
                Formula::Release(Box::new(mirror(a)), Box::new(mirror(b)))
            }
            Formula::Not(g) => Formula::not(mirror(g)),
            Formula::And(a, b) => Formula::and(mirror(a), mirror(b)),
            Formula::Or(a, b) => Formula::or(mirror(a), mirror(b)),
            Formula::Implies(a, b) => Formula::implies(mirror(a), mirror(b)),
            other => other.clone(),
        }
    }
    fn reversed(trace: &Trace) -> Trace {
        let h = trace.horizon();
        let mut out = trace.clone();
        for t in 0..h {
            for a in 0..2 {
                for b in 0..2 {
                    out.set(t, a, b, trace.at(h - 1 - t, a, b));
                }
            }
        }
        out
    }
    for horizon in 1..=4 {
        let traces = enumerate_traces(horizon);
        for f in enumerate_formulas(Direction::Past, 2) {
            let m = mirror(&f);
            for trace in &traces {
                let rev = reversed(trace);
                for iv in all_intervals(horizon) {
                    let reflected = Interval::new(
                        horizon as i64 - 1 - iv.hi(),
                        horizon as i64 - 1 - iv.lo(),
                    );
                    assert_eq!(
                        eval(&f, trace, iv, Direction::Past),
                        eval(&m, &rev, reflected, Direction::Future),
                        "duality broken: {f:?} on {iv}"
                    );
                }
            }
        }
    }
}

#[test]
fn until_and_always_unfolding_laws() {
    let a = Formula::atom("A", "B", qsim_core::temporal::AtomOp::Eq, "p");
    let b = Formula::atom("A", "B", qsim_core::temporal::AtomOp::Eq, "q");
    let until = Formula::Until(Box::new(a.clone()), Box::new(b.clone()));
    let until_unfolded = Formula::or(
        b.clone(),
        Formula::and(a.clone(), Formula::Next(Box::new(until.clone()))),
    );
    let always = Formula::Always(Box::new(a.clone()));
    let always_unfolded = Formula::and(
        a.clone(),
        Formula::implies(
            Formula::Next(Box::new(Formula::True)),
            Formula::Next(Box::new(always.clone())),
        ),
    );
    for horizon in 1..=4 {
        for trace in enumerate_traces(horizon) {
            for iv in all_intervals(horizon) {
                assert_eq!(
                    eval(&until, &trace, iv, Direction::Future),
                    eval(&until_unfolded, &trace, iv, Direction::Future),
                );
                assert_eq!(
                    eval(&always, &trace, iv, Direction::Future),
                    eval(&always_unfolded, &trace, iv, Direction::Future),
                );
            }
        }
    }
}

#[test]
fn unfold_worked_example_eventually_over_three_points() {
    // F (Q[A,B] = q) over [1..3]: three reified equalities plus one clause
    use qsim_core::csp::ConstraintKind;
    let calculus = tiny_calculus();
    let objects = two_objects();
    let mut h = build_space(4);
    let mut tr = Translator::new(&mut h.store, &h.space, &calculus, &objects);
    let f = Formula::Eventually(Box::new(Formula::atom(
        "A",
        "B",
        qsim_core::temporal::AtomOp::Eq,
        "q",
    )));
    let result = tr
        .unfold_required(&f, Direction::Future, Interval::new(1, 3))
        .unwrap();
    let kinds: Vec<ConstraintKind> = result
        .posted
        .iter()
        .map(|&c| h.store.constraint_kind(c))
        .collect();
    let reified = kinds
        .iter()
        .filter(|k| matches!(k, ConstraintKind::ReifiedValueEq))
        .count();
    let clauses = kinds
        .iter()
        .filter(|k| matches!(k, ConstraintKind::BoolClause))
        .count();
    assert_eq!(reified, 3);
    assert_eq!(clauses, 1);
    assert_eq!(kinds.len(), 4);
}

#[test]
fn next_at_interval_end_is_forced_false() {
    let calculus = tiny_calculus();
    let objects = two_objects();
    let mut h = build_space(2);
    let mut tr = Translator::new(&mut h.store, &h.space, &calculus, &objects);
    let f = Formula::Next(Box::new(Formula::True));
    let result = tr.unfold(&f, Direction::Future, Interval::new(1, 1)).unwrap();
    assert_eq!(h.store.propagate(), Propagation::Consistent);
    assert_eq!(h.store.value_of(result.truth), Some(0));
}

// silence unused-import warning paths used conditionally above
#[allow(dead_code)]
fn _touch(_: VarId, _: Lit) {}
