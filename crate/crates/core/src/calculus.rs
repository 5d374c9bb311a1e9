//! Qualitative calculi as data: a finite relation vocabulary with converse,
//! composition and conceptual-neighbourhood tables.
//!
//! A calculus is loaded from a small text format (see [`Calculus::parse`]) or
//! taken from one of the built-ins ([`builtin_rcc8`], [`builtin_cardinal`]).
//! The algebraic axioms a calculus must satisfy are checked by
//! [`Calculus::validate`]; the loader refuses tables that violate them, so a
//! `Calculus` value in the rest of the engine can be assumed coherent.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

/// Index of a basic relation within its owning calculus.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rel(pub u8);

impl Rel {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of basic relations, as a bitmask over relation indices.
///
/// All target calculi have at most 64 relations, which makes set algebra on
/// composition cells and variable domains single-word operations.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RelSet(pub u64);

impl RelSet {
    pub const EMPTY: RelSet = RelSet(0);

    /// The full set over a calculus with `n` relations.
    #[inline]
    pub fn full(n: usize) -> RelSet {
        debug_assert!(n <= 64);
        if n == 64 {
            RelSet(u64::MAX)
        } else {
            RelSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(r: Rel) -> RelSet {
        RelSet(1u64 << r.0)
    }

    #[inline]
    pub fn contains(self, r: Rel) -> bool {
        self.0 & (1u64 << r.0) != 0
    }

    #[inline]
    pub fn insert(&mut self, r: Rel) {
        self.0 |= 1u64 << r.0;
    }

    #[inline]
    pub fn remove(&mut self, r: Rel) {
        self.0 &= !(1u64 << r.0);
    }

    #[inline]
    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: RelSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn union(self, other: RelSet) -> RelSet {
        RelSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersect(self, other: RelSet) -> RelSet {
        RelSet(self.0 & other.0)
    }

    #[inline]
    pub fn minus(self, other: RelSet) -> RelSet {
        RelSet(self.0 & !other.0)
    }

    /// Lowest-index relation in the set, if any.
    #[inline]
    pub fn first(self) -> Option<Rel> {
        if self.0 == 0 {
            None
        } else {
            Some(Rel(self.0.trailing_zeros() as u8))
        }
    }

    pub fn iter(self) -> impl Iterator<Item = Rel> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros();
                bits &= bits - 1;
                Some(Rel(i as u8))
            }
        })
    }
}

impl FromIterator<Rel> for RelSet {
    fn from_iter<I: IntoIterator<Item = Rel>>(iter: I) -> Self {
        let mut s = RelSet::EMPTY;
        for r in iter {
            s.insert(r);
        }
        s
    }
}

impl fmt::Debug for RelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RelSet({:b})", self.0)
    }
}

/// A qualitative calculus: named relations, identity element, converse and
/// composition tables, and the conceptual neighbourhood graph.
///
/// Values are immutable after construction and can be shared freely across
/// concurrent solver instances.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Calculus {
    name: String,
    relations: Vec<String>,
    identity: Rel,
    converse: Vec<Rel>,
    /// Row-major `n * n` table; cell `(r, s)` holds the possible relations of
    /// `A` to `C` given `A r B` and `B s C`.
    composition: Vec<RelSet>,
    /// Adjacency mask per relation; irreflexive and symmetric.
    neighbourhood: Vec<RelSet>,
}

impl Calculus {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of basic relations.
    pub fn size(&self) -> usize {
        self.relations.len()
    }

    pub fn identity(&self) -> Rel {
        self.identity
    }

    pub fn full_set(&self) -> RelSet {
        RelSet::full(self.size())
    }

    pub fn relation_name(&self, r: Rel) -> &str {
        &self.relations[r.index()]
    }

    pub fn relation_names(&self) -> impl Iterator<Item = &str> {
        self.relations.iter().map(|s| s.as_str())
    }

    /// Look up a relation by name.
    pub fn relation(&self, name: &str) -> Option<Rel> {
        self.relations
            .iter()
            .position(|n| n == name)
            .map(|i| Rel(i as u8))
    }

    pub fn converse(&self, r: Rel) -> Rel {
        self.converse[r.index()]
    }

    /// Element-wise converse of a relation set.
    pub fn converse_set(&self, s: RelSet) -> RelSet {
        s.iter().map(|r| self.converse(r)).collect()
    }

    pub fn composition(&self, r: Rel, s: Rel) -> RelSet {
        self.composition[r.index() * self.size() + s.index()]
    }

    /// Composition lifted to sets: union over all pairs of basic relations.
    pub fn composition_sets(&self, rs: RelSet, ss: RelSet) -> RelSet {
        let mut out = RelSet::EMPTY;
        for r in rs.iter() {
            for s in ss.iter() {
                out = out.union(self.composition(r, s));
            }
        }
        out
    }

    /// Conceptual neighbours of `r` (excluding `r` itself).
    pub fn neighbours(&self, r: Rel) -> RelSet {
        self.neighbourhood[r.index()]
    }

    pub fn format_set(&self, s: RelSet) -> String {
        let mut out = String::from("{");
        for (i, r) in s.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(self.relation_name(r));
        }
        out.push('}');
        out
    }

    /// Check the five algebraic axioms; the report is empty iff all hold.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.size();

        for i in 0..n {
            let r = Rel(i as u8);
            if self.converse(self.converse(r)) != r {
                violations.push(Violation {
                    axiom: "converse involution",
                    witness: format!(
                        "conv(conv({})) = {}",
                        self.relation_name(r),
                        self.relation_name(self.converse(self.converse(r)))
                    ),
                });
            }
        }

        if self.converse(self.identity) != self.identity {
            violations.push(Violation {
                axiom: "converse of identity",
                witness: format!(
                    "conv({}) = {}",
                    self.relation_name(self.identity),
                    self.relation_name(self.converse(self.identity))
                ),
            });
        }

        for i in 0..n {
            let r = Rel(i as u8);
            if self.composition(self.identity, r) != RelSet::singleton(r) {
                violations.push(Violation {
                    axiom: "identity law",
                    witness: format!(
                        "{} ; {} = {}",
                        self.relation_name(self.identity),
                        self.relation_name(r),
                        self.format_set(self.composition(self.identity, r))
                    ),
                });
            }
            if self.composition(r, self.identity) != RelSet::singleton(r) {
                violations.push(Violation {
                    axiom: "identity law",
                    witness: format!(
                        "{} ; {} = {}",
                        self.relation_name(r),
                        self.relation_name(self.identity),
                        self.format_set(self.composition(r, self.identity))
                    ),
                });
            }
        }

        for i in 0..n {
            for j in 0..n {
                let (r, s) = (Rel(i as u8), Rel(j as u8));
                if self.composition(r, s).is_empty() {
                    violations.push(Violation {
                        axiom: "non-empty composition",
                        witness: format!(
                            "{} ; {} = {{}}",
                            self.relation_name(r),
                            self.relation_name(s)
                        ),
                    });
                }
                for k in 0..n {
                    let t = Rel(k as u8);
                    let fwd = self.composition(r, s).contains(t);
                    let rev = self
                        .composition(self.converse(s), self.converse(r))
                        .contains(self.converse(t));
                    if fwd != rev {
                        violations.push(Violation {
                            axiom: "converse-composition coherence",
                            witness: format!(
                                "{} in {} ; {} but conv mismatch",
                                self.relation_name(t),
                                self.relation_name(r),
                                self.relation_name(s)
                            ),
                        });
                    }
                }
            }
        }

        for i in 0..n {
            let r = Rel(i as u8);
            if self.neighbours(r).contains(r) {
                violations.push(Violation {
                    axiom: "neighbourhood irreflexive",
                    witness: self.relation_name(r).to_string(),
                });
            }
            for s in self.neighbours(r).iter() {
                if !self.neighbours(s).contains(r) {
                    violations.push(Violation {
                        axiom: "neighbourhood symmetry",
                        witness: format!(
                            "{} -- {} without converse edge",
                            self.relation_name(r),
                            self.relation_name(s)
                        ),
                    });
                }
            }
        }

        ValidationReport { violations }
    }

    /// Parse a calculus document. On success the calculus has already passed
    /// [`Calculus::validate`]; any warnings (currently only "neighbourhood
    /// omitted, defaulting to the complete graph") are returned alongside.
    pub fn parse(src: &str) -> Result<(Calculus, Vec<String>), CalculusError> {
        parse_calculus(src)
    }

    /// Render the calculus in the same text format accepted by
    /// [`Calculus::parse`]; `parse(to_text(c))` reproduces `c` exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("calculus {}\n", self.name));
        out.push_str("relations:");
        for r in &self.relations {
            out.push(' ');
            out.push_str(r);
        }
        out.push('\n');
        out.push_str(&format!(
            "identity: {}\n",
            self.relation_name(self.identity)
        ));
        out.push_str("converse:\n");
        for i in 0..self.size() {
            let r = Rel(i as u8);
            out.push_str(&format!(
                "{} -> {}\n",
                self.relation_name(r),
                self.relation_name(self.converse(r))
            ));
        }
        out.push_str("composition:\n");
        for i in 0..self.size() {
            for j in 0..self.size() {
                let (r, s) = (Rel(i as u8), Rel(j as u8));
                out.push_str(&format!(
                    "{} ; {} -> {}\n",
                    self.relation_name(r),
                    self.relation_name(s),
                    self.format_set(self.composition(r, s))
                ));
            }
        }
        out.push_str("neighbourhood:\n");
        for i in 0..self.size() {
            let r = Rel(i as u8);
            for s in self.neighbours(r).iter() {
                if s.0 > r.0 {
                    out.push_str(&format!(
                        "{} -- {}\n",
                        self.relation_name(r),
                        self.relation_name(s)
                    ));
                }
            }
        }
        out
    }
}

/// One violated axiom with a concrete witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.witness)
    }
}

/// Result of [`Calculus::validate`]. Violations are data, not errors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "valid")
        } else {
            for v in &self.violations {
                writeln!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CalculusError {
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    /// The document parsed but the tables violate the calculus axioms.
    Invalid(ValidationReport),
}

impl fmt::Display for CalculusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CalculusError::Parse { line, col, msg } => {
                write!(f, "parse error at line {line}, column {col}: {msg}")
            }
            CalculusError::Invalid(report) => {
                write!(f, "calculus violates axioms:\n{report}")
            }
        }
    }
}

/// The eight-relation topological calculus (disjoint, meet, equal, covers,
/// coveredby, contains, inside, overlap), with the standard composition table
/// and the conceptual neighbourhood of continuous deformation.
pub fn builtin_rcc8() -> Calculus {
    let (c, warnings) = Calculus::parse(include_str!("../data/rcc8.cal"))
        .expect("embedded rcc8 tables are valid");
    debug_assert!(warnings.is_empty());
    c
}

/// The nine-relation cardinal direction calculus over points (N, NE, ...,
/// NW, samepoint). The composition table is generated from point semantics
/// on an integer grid; the neighbourhood is the compass ring with
/// `samepoint` adjacent to all eight directions.
pub fn builtin_cardinal() -> Calculus {
    let (c, warnings) = Calculus::parse(include_str!("../data/cardinal.cal"))
        .expect("embedded cardinal tables are valid");
    debug_assert!(warnings.is_empty());
    c
}

// ---------------------------------------------------------------------------
// Text format parser

struct Line<'a> {
    number: usize,
    text: &'a str,
}

fn parse_calculus(src: &str) -> Result<(Calculus, Vec<String>), CalculusError> {
    let mut lines = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let text = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if !text.trim().is_empty() {
            lines.push(Line {
                number: i + 1,
                text: text.trim_end(),
            });
        }
    }

    let err = |line: &Line, col: usize, msg: String| CalculusError::Parse {
        line: line.number,
        col,
        msg,
    };
    let col_of = |line: &Line, token: &str| -> usize {
        line.text.find(token).map(|p| p + 1).unwrap_or(1)
    };

    let mut iter = lines.iter().peekable();

    let header = iter
        .next()
        .ok_or_else(|| CalculusError::Parse {
            line: 1,
            col: 1,
            msg: "empty document".to_string(),
        })?;
    let name = header
        .text
        .trim()
        .strip_prefix("calculus")
        .map(str::trim)
        .filter(|n| !n.is_empty())
        .ok_or_else(|| err(header, 1, "expected header `calculus <name>`".to_string()))?
        .to_string();

    let rel_line = iter
        .next()
        .ok_or_else(|| err(header, 1, "missing `relations:` line".to_string()))?;
    let rel_names: Vec<String> = rel_line
        .text
        .trim()
        .strip_prefix("relations:")
        .ok_or_else(|| err(rel_line, 1, "expected `relations: r1 r2 ...`".to_string()))?
        .split_whitespace()
        .map(|s| s.to_string())
        .collect();
    if rel_names.is_empty() {
        return Err(err(rel_line, 1, "relation list is empty".to_string()));
    }
    if rel_names.len() > 64 {
        return Err(err(rel_line, 1, "more than 64 relations".to_string()));
    }
    for (i, n) in rel_names.iter().enumerate() {
        if rel_names[..i].contains(n) {
            return Err(err(
                rel_line,
                col_of(rel_line, n),
                format!("duplicate relation name `{n}`"),
            ));
        }
    }
    let n = rel_names.len();
    let lookup = |line: &Line, token: &str| -> Result<Rel, CalculusError> {
        rel_names
            .iter()
            .position(|r| r == token)
            .map(|i| Rel(i as u8))
            .ok_or_else(|| {
                err(
                    line,
                    col_of(line, token),
                    format!("unknown relation name `{token}`"),
                )
            })
    };

    let id_line = iter
        .next()
        .ok_or_else(|| err(rel_line, 1, "missing `identity:` line".to_string()))?;
    let id_name = id_line
        .text
        .trim()
        .strip_prefix("identity:")
        .map(str::trim)
        .ok_or_else(|| err(id_line, 1, "expected `identity: r`".to_string()))?;
    let identity = lookup(id_line, id_name)?;

    // converse section
    let conv_head = iter
        .next()
        .ok_or_else(|| err(id_line, 1, "missing `converse:` section".to_string()))?;
    if conv_head.text.trim() != "converse:" {
        return Err(err(conv_head, 1, "expected `converse:` section".to_string()));
    }
    let mut converse: Vec<Option<Rel>> = vec![None; n];
    while let Some(line) = iter.peek() {
        let text = line.text.trim();
        if text.ends_with(':') {
            break;
        }
        let line = iter.next().unwrap();
        let (lhs, rhs) = line
            .text
            .trim()
            .split_once("->")
            .ok_or_else(|| err(line, 1, "expected `r -> r'`".to_string()))?;
        let r = lookup(line, lhs.trim())?;
        let c = lookup(line, rhs.trim())?;
        if converse[r.index()].is_some() {
            return Err(err(
                line,
                1,
                format!("duplicate converse entry for `{}`", lhs.trim()),
            ));
        }
        converse[r.index()] = Some(c);
    }
    let converse: Vec<Rel> = converse
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.ok_or_else(|| CalculusError::Parse {
                line: conv_head.number,
                col: 1,
                msg: format!("missing converse entry for `{}`", rel_names[i]),
            })
        })
        .collect::<Result<_, _>>()?;

    // composition section
    let comp_head = iter
        .next()
        .ok_or_else(|| err(conv_head, 1, "missing `composition:` section".to_string()))?;
    if comp_head.text.trim() != "composition:" {
        return Err(err(comp_head, 1, "expected `composition:` section".to_string()));
    }
    let mut composition: Vec<Option<RelSet>> = vec![None; n * n];
    while let Some(line) = iter.peek() {
        let text = line.text.trim();
        if text.ends_with(':') {
            break;
        }
        let line = iter.next().unwrap();
        let (lhs, rhs) = line
            .text
            .trim()
            .split_once("->")
            .ok_or_else(|| err(line, 1, "expected `r ; s -> {t1, ...}`".to_string()))?;
        let (r_name, s_name) = lhs
            .split_once(';')
            .ok_or_else(|| err(line, 1, "expected `r ; s` on the left".to_string()))?;
        let r = lookup(line, r_name.trim())?;
        let s = lookup(line, s_name.trim())?;
        let set_text = rhs.trim();
        let inner = set_text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| {
                err(line, col_of(line, set_text), "expected `{t1, t2, ...}`".to_string())
            })?;
        let mut cell = RelSet::EMPTY;
        for token in inner.split(',') {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            cell.insert(lookup(line, token)?);
        }
        let idx = r.index() * n + s.index();
        if composition[idx].is_some() {
            return Err(err(
                line,
                1,
                format!(
                    "duplicate composition entry for `{} ; {}`",
                    r_name.trim(),
                    s_name.trim()
                ),
            ));
        }
        composition[idx] = Some(cell);
    }
    let composition: Vec<RelSet> = composition
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.ok_or_else(|| CalculusError::Parse {
                line: comp_head.number,
                col: 1,
                msg: format!(
                    "missing composition entry for `{} ; {}`",
                    rel_names[i / n],
                    rel_names[i % n]
                ),
            })
        })
        .collect::<Result<_, _>>()?;

    // optional neighbourhood section
    let mut warnings = Vec::new();
    let mut neighbourhood = vec![RelSet::EMPTY; n];
    match iter.next() {
        Some(line) if line.text.trim() == "neighbourhood:" => {
            for line in iter {
                let (lhs, rhs) = line
                    .text
                    .trim()
                    .split_once("--")
                    .ok_or_else(|| err(line, 1, "expected `r -- s`".to_string()))?;
                let r = lookup(line, lhs.trim())?;
                let s = lookup(line, rhs.trim())?;
                if r == s {
                    return Err(err(
                        line,
                        1,
                        format!("neighbourhood edge `{} -- {}` is reflexive", lhs.trim(), rhs.trim()),
                    ));
                }
                neighbourhood[r.index()].insert(s);
                neighbourhood[s.index()].insert(r);
            }
        }
        Some(line) => {
            return Err(err(
                line,
                1,
                format!("unexpected content `{}`", line.text.trim()),
            ));
        }
        None => {
            // Complete graph: every change of relation is admissible.
            warnings.push(
                "neighbourhood section omitted; defaulting to the complete graph".to_string(),
            );
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        neighbourhood[i].insert(Rel(j as u8));
                    }
                }
            }
        }
    }

    let calculus = Calculus {
        name,
        relations: rel_names,
        identity,
        converse,
        composition,
        neighbourhood,
    };
    let report = calculus.validate();
    if !report.is_valid() {
        return Err(CalculusError::Invalid(report));
    }
    Ok((calculus, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rcc8_loads_and_is_valid() {
        let c = builtin_rcc8();
        assert_eq!(c.size(), 8);
        assert_eq!(c.name(), "rcc8");
        assert!(c.validate().is_valid());
    }

    #[test]
    fn cardinal_loads_and_is_valid() {
        let c = builtin_cardinal();
        assert_eq!(c.size(), 9);
        assert!(c.validate().is_valid());
    }

    #[test]
    fn rcc8_converse_of_inside_is_contains() {
        let c = builtin_rcc8();
        let inside = c.relation("inside").unwrap();
        let contains = c.relation("contains").unwrap();
        assert_eq!(c.converse(inside), contains);
    }

    #[test]
    fn rcc8_identity_law_cell() {
        let c = builtin_rcc8();
        let equal = c.relation("equal").unwrap();
        let meet = c.relation("meet").unwrap();
        assert_eq!(c.composition(equal, meet), RelSet::singleton(meet));
    }

    #[test]
    fn rcc8_neighbourhood_edges() {
        let c = builtin_rcc8();
        let disjoint = c.relation("disjoint").unwrap();
        let meet = c.relation("meet").unwrap();
        let overlap = c.relation("overlap").unwrap();
        assert!(c.neighbours(disjoint).contains(meet));
        assert!(!c.neighbours(disjoint).contains(overlap));
        // The only admissible change away from disjoint is to meet.
        assert_eq!(c.neighbours(disjoint), RelSet::singleton(meet));
    }

    #[test]
    fn cardinal_converse_and_composition() {
        let c = builtin_cardinal();
        let n = c.relation("N").unwrap();
        let s = c.relation("S").unwrap();
        let same = c.relation("samepoint").unwrap();
        assert_eq!(c.converse(n), s);
        assert_eq!(c.composition(n, n), RelSet::singleton(n));
        let expected: RelSet = [n, s, same].into_iter().collect();
        assert_eq!(c.composition(n, s), expected);
    }

    #[test]
    fn corrupted_converse_reports_involution() {
        let mut c = builtin_rcc8();
        let inside = c.relation("inside").unwrap();
        c.converse[inside.index()] = inside;
        let report = c.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom == "converse involution"));
    }

    #[test]
    fn parse_round_trip() {
        let c = builtin_rcc8();
        let (c2, warnings) = Calculus::parse(&c.to_text()).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(c, c2);

        let c = builtin_cardinal();
        let (c2, _) = Calculus::parse(&c.to_text()).unwrap();
        assert_eq!(c, c2);
    }

    #[test]
    fn unknown_relation_in_composition_row() {
        let src = "calculus tiny\nrelations: a b\nidentity: a\nconverse:\na -> a\nb -> b\ncomposition:\na ; a -> {a}\na ; b -> {bogus}\n";
        match Calculus::parse(src) {
            Err(CalculusError::Parse { msg, line, .. }) => {
                assert!(msg.contains("bogus"), "{msg}");
                assert_eq!(line, 9);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn omitted_neighbourhood_defaults_to_complete_graph() {
        let src = "calculus tiny\nrelations: a b\nidentity: a\nconverse:\na -> a\nb -> b\ncomposition:\na ; a -> {a}\na ; b -> {b}\nb ; a -> {b}\nb ; b -> {a, b}\n";
        let (c, warnings) = Calculus::parse(src).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("complete graph"));
        let a = c.relation("a").unwrap();
        let b = c.relation("b").unwrap();
        assert_eq!(c.neighbours(a), RelSet::singleton(b));
        assert_eq!(c.neighbours(b), RelSet::singleton(a));
    }
}
