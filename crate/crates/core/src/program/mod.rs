//! Ground normal logic programs, Clark's completion and the least-fixpoint
//! transformation.

mod lfp;
mod parse;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::MAX_ATOMS;

pub use lfp::lfp_transform;
pub use parse::parse_program;

/// Dense identifier of an atom inside an [`AtomTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct AtomId(pub u32);

impl AtomId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub(crate) fn bit(self) -> u64 {
        1u64 << self.0
    }
}

/// The Herbrand base of a ground program.
///
/// Names are kept sorted byte-wise and ids are handed out in that order, so
/// two programs over the same atoms always agree on ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomTable {
    names: Vec<String>,
    index: HashMap<String, AtomId>,
}

impl AtomTable {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), AtomId(i as u32)))
            .collect();
        AtomTable { names, index }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<AtomId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: AtomId) -> &str {
        &self.names[id.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ids(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.names.len() as u32).map(AtomId)
    }
}

/// `head :- pos, not neg.` with set-valued bodies.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: AtomId,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

impl Rule {
    /// Builds a rule, sorting and deduplicating both bodies.
    pub fn new(head: AtomId, pos: impl Into<Vec<AtomId>>, neg: impl Into<Vec<AtomId>>) -> Self {
        let mut pos = pos.into();
        let mut neg = neg.into();
        pos.sort_unstable();
        pos.dedup();
        neg.sort_unstable();
        neg.dedup();
        Rule { head, pos, neg }
    }

    pub fn fact(head: AtomId) -> Self {
        Rule {
            head,
            pos: Vec::new(),
            neg: Vec::new(),
        }
    }

    pub fn is_fact(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    pub fn body(&self) -> Body {
        Body {
            pos: self.pos.clone(),
            neg: self.neg.clone(),
        }
    }

    fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        std::iter::once(self.head)
            .chain(self.pos.iter().copied())
            .chain(self.neg.iter().copied())
    }
}

/// A finite set of ground rules over an atom table.
///
/// Rules keep their input order (the completion lists bodies in that order),
/// but equality is set equality: two programs are equal when they share the
/// atom table and contain the same rules.
#[derive(Debug, Clone, Default)]
pub struct Program {
    atoms: AtomTable,
    rules: Vec<Rule>,
}

impl Program {
    /// Builds a program over an explicit atom table.
    ///
    /// Atoms that occur in no rule are kept. Duplicate rules are collapsed to
    /// their first occurrence.
    pub fn new(atoms: AtomTable, rules: impl IntoIterator<Item = Rule>) -> Result<Self> {
        let n = atoms.len();
        let mut seen = std::collections::HashSet::new();
        let mut kept = Vec::new();
        for rule in rules {
            if let Some(bad) = rule.atoms().find(|a| a.index() >= n) {
                return Err(Error::Precondition(format!(
                    "rule mentions atom id {} but the table has {n} atoms",
                    bad.0
                )));
            }
            if seen.insert(rule.clone()) {
                kept.push(rule);
            }
        }
        Ok(Program { atoms, rules: kept })
    }

    /// Builds a program from rules written with atom names.
    ///
    /// The atom table is exactly the set of names that occur.
    pub fn from_named<'a, I>(rules: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, Vec<&'a str>, Vec<&'a str>)>,
    {
        let rules: Vec<_> = rules.into_iter().collect();
        let atoms = AtomTable::new(rules.iter().flat_map(|(h, pos, neg)| {
            std::iter::once(*h)
                .chain(pos.iter().copied())
                .chain(neg.iter().copied())
        }));
        let id = |name: &str| atoms.id(name).expect("interned above");
        let built: Vec<Rule> = rules
            .iter()
            .map(|(h, pos, neg)| {
                Rule::new(
                    id(h),
                    pos.iter().map(|a| id(a)).collect::<Vec<_>>(),
                    neg.iter().map(|a| id(a)).collect::<Vec<_>>(),
                )
            })
            .collect();
        Program::new(atoms, built).expect("ids come from the table")
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_positive(&self) -> bool {
        self.rules.iter().all(|r| r.neg.is_empty())
    }

    pub fn is_negative(&self) -> bool {
        self.rules.iter().all(|r| r.pos.is_empty())
    }

    /// True iff every atom heads at most one rule.
    pub fn is_uni_rule(&self) -> bool {
        let mut heads = vec![0usize; self.atoms.len()];
        self.rules.iter().all(|r| {
            heads[r.head.index()] += 1;
            heads[r.head.index()] <= 1
        })
    }

    /// The rules in canonical order: by head, then input order.
    pub fn rules_by_head(&self) -> Vec<&Rule> {
        let mut rules: Vec<&Rule> = self.rules.iter().collect();
        rules.sort_by_key(|r| r.head);
        rules
    }

    pub(crate) fn ensure_packable(&self) -> Result<()> {
        if self.atom_count() > MAX_ATOMS {
            Err(Error::cap("atom count", MAX_ATOMS, self.atom_count()))
        } else {
            Ok(())
        }
    }

    pub fn display_rule(&self, rule: &Rule) -> String {
        let mut out = String::from(self.atoms.name(rule.head));
        if !rule.is_fact() {
            out.push_str(" :- ");
            let lits: Vec<String> = rule
                .pos
                .iter()
                .map(|&a| self.atoms.name(a).to_string())
                .chain(rule.neg.iter().map(|&a| format!("not {}", self.atoms.name(a))))
                .collect();
            out.push_str(&lits.join(", "));
        }
        out.push('.');
        out
    }
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        if self.atoms != other.atoms || self.rules.len() != other.rules.len() {
            return false;
        }
        let mut a: Vec<&Rule> = self.rules.iter().collect();
        let mut b: Vec<&Rule> = other.rules.iter().collect();
        a.sort();
        b.sort();
        a == b
    }
}

impl Eq for Program {}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in self.rules_by_head() {
            writeln!(f, "{}", self.display_rule(rule))?;
        }
        Ok(())
    }
}

/// A program in which no rule has a positive body atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeProgram(Program);

impl NegativeProgram {
    pub fn new(program: Program) -> Result<Self> {
        match program.rules.iter().find(|r| !r.pos.is_empty()) {
            Some(r) => Err(Error::Precondition(format!(
                "rule `{}` has a positive body",
                program.display_rule(r)
            ))),
            None => Ok(NegativeProgram(program)),
        }
    }

    pub fn into_program(self) -> Program {
        self.0
    }
}

impl std::ops::Deref for NegativeProgram {
    type Target = Program;

    fn deref(&self) -> &Program {
        &self.0
    }
}

impl AsRef<Program> for NegativeProgram {
    fn as_ref(&self) -> &Program {
        &self.0
    }
}

/// One disjunct of a completion right-hand side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Body {
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

/// Clark's completion: for every atom, the bodies of the rules it heads.
///
/// An empty disjunct list stands for `a <-> false`; an empty body inside the
/// list stands for `true`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    disjuncts: Vec<Vec<Body>>,
    // (pos, neg) bit masks per disjunct; only filled when the table fits a word
    masks: Vec<Vec<(u64, u64)>>,
}

impl Completion {
    pub fn new(p: &Program) -> Self {
        let n = p.atom_count();
        let mut disjuncts = vec![Vec::new(); n];
        for rule in &p.rules {
            disjuncts[rule.head.index()].push(rule.body());
        }
        let masks = if n <= MAX_ATOMS {
            disjuncts
                .iter()
                .map(|ds: &Vec<Body>| {
                    ds.iter()
                        .map(|b| (mask_of(&b.pos), mask_of(&b.neg)))
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        Completion { disjuncts, masks }
    }

    pub fn atom_count(&self) -> usize {
        self.disjuncts.len()
    }

    /// The disjuncts of `rhs(a)`.
    pub fn rhs(&self, a: AtomId) -> &[Body] {
        &self.disjuncts[a.index()]
    }

    pub(crate) fn rhs_masks(&self, a: usize) -> &[(u64, u64)] {
        &self.masks[a]
    }

    /// True when no `rhs(a)` mentions an atom both positively and negatively,
    /// counting across all of `a`'s bodies.
    ///
    /// Kleene evaluation of such a right-hand side over a three-valued
    /// interpretation equals its exact value over the represented cube. When
    /// this fails, the Kleene operator `f_P` and the trap-space check can
    /// part ways: `{a :- b. a :- not b. b :- not b.}` has the supported trap
    /// space `1*` with no supported partial model inside it.
    pub fn is_unate(&self) -> bool {
        self.disjuncts.iter().all(|ds| {
            let pos: HashSet<AtomId> = ds.iter().flat_map(|b| b.pos.iter().copied()).collect();
            ds.iter().flat_map(|b| b.neg.iter()).all(|x| !pos.contains(x))
        })
    }

    /// Renders `a <-> rhs(a)` using the program's atom names.
    pub fn display_equivalence(&self, atoms: &AtomTable, a: AtomId) -> String {
        let ds = self.rhs(a);
        let rhs = if ds.is_empty() {
            "false".to_string()
        } else {
            ds.iter()
                .map(|b| {
                    if b.pos.is_empty() && b.neg.is_empty() {
                        return "true".to_string();
                    }
                    let lits: Vec<String> = b
                        .pos
                        .iter()
                        .map(|&x| atoms.name(x).to_string())
                        .chain(b.neg.iter().map(|&x| format!("not {}", atoms.name(x))))
                        .collect();
                    if ds.len() > 1 && lits.len() > 1 {
                        format!("({})", lits.join(" & "))
                    } else {
                        lits.join(" & ")
                    }
                })
                .collect::<Vec<_>>()
                .join(" | ")
        };
        format!("{} <-> {}", atoms.name(a), rhs)
    }
}

/// Clark's completion of `p`.
pub fn completion(p: &Program) -> Completion {
    Completion::new(p)
}

/// True iff every atom heads at most one rule of `p`.
pub fn is_uni_rule(p: &Program) -> bool {
    p.is_uni_rule()
}

pub(crate) fn mask_of(atoms: &[AtomId]) -> u64 {
    atoms.iter().fold(0, |m, a| m | a.bit())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Program {
        Program::from_named([
            ("a", vec![], vec!["b"]),
            ("b", vec![], vec!["a"]),
            ("c", vec![], vec!["c"]),
        ])
    }

    #[test]
    fn atom_ids_follow_sorted_names() {
        let t = AtomTable::new(["zeta", "alpha", "mid", "alpha"]);
        assert_eq!(t.names(), ["alpha", "mid", "zeta"]);
        assert_eq!(t.id("zeta"), Some(AtomId(2)));
        assert_eq!(t.id("nope"), None);
    }

    #[test]
    fn completion_of_cycle() {
        let p = Program::from_named([("a", vec!["b"], vec![]), ("b", vec!["a"], vec![])]);
        let c = completion(&p);
        let (a, b) = (AtomId(0), AtomId(1));
        assert_eq!(c.rhs(a), [Body { pos: vec![b], neg: vec![] }]);
        assert_eq!(c.rhs(b), [Body { pos: vec![a], neg: vec![] }]);
    }

    #[test]
    fn completion_of_fact_and_self_negation() {
        let p = Program::from_named([("a", vec![], vec![])]);
        assert_eq!(completion(&p).rhs(AtomId(0)), [Body { pos: vec![], neg: vec![] }]);

        let c = completion(&p2());
        let c_id = AtomId(2);
        assert_eq!(c.rhs(c_id), [Body { pos: vec![], neg: vec![c_id] }]);
    }

    #[test]
    fn atoms_without_rules_complete_to_false() {
        let p = Program::new(AtomTable::new(["a", "b"]), [Rule::fact(AtomId(0))]).unwrap();
        let c = completion(&p);
        assert!(c.rhs(AtomId(1)).is_empty());
        assert_eq!(c.display_equivalence(p.atoms(), AtomId(1)), "b <-> false");
        assert_eq!(c.display_equivalence(p.atoms(), AtomId(0)), "a <-> true");
    }

    #[test]
    fn uni_rule() {
        assert!(is_uni_rule(&p2()));
        assert!(is_uni_rule(&Program::default()));
        let p = Program::from_named([("a", vec![], vec!["b"]), ("a", vec![], vec!["c"])]);
        assert!(!is_uni_rule(&p));
    }

    #[test]
    fn duplicate_rules_collapse() {
        let p = Program::from_named([("a", vec!["b", "b"], vec![]), ("a", vec!["b"], vec![])]);
        assert_eq!(p.rules().len(), 1);
    }

    #[test]
    fn equality_ignores_rule_order() {
        let x = Program::from_named([("a", vec![], vec!["b"]), ("b", vec![], vec!["a"])]);
        let y = Program::from_named([("b", vec![], vec!["a"]), ("a", vec![], vec!["b"])]);
        assert_eq!(x, y);
    }

    #[test]
    fn negative_program_rejects_positive_bodies() {
        assert!(NegativeProgram::new(p2()).is_ok());
        let p = Program::from_named([("a", vec!["b"], vec![])]);
        assert!(matches!(NegativeProgram::new(p), Err(Error::Precondition(_))));
    }

    #[test]
    fn pretty_print_sorts_by_head() {
        let p = Program::from_named([("b", vec![], vec!["a"]), ("a", vec!["c"], vec!["b"]), ("c", vec![], vec![])]);
        assert_eq!(p.to_string(), "a :- c, not b.\nb :- not a.\nc.\n");
    }
}
