use std::collections::{BTreeMap, BTreeSet};

use super::{AtomId, NegativeProgram, Program, Rule};
use crate::error::{Error, Result};

// head -> set of negative bodies
type NegRules = BTreeMap<AtomId, BTreeSet<Vec<AtomId>>>;

fn rule_count(q: &NegRules) -> usize {
    q.values().map(BTreeSet::len).sum()
}

fn union(a: &[AtomId], b: &[AtomId]) -> Vec<AtomId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// One application of the substitution step to the negative rule set `q`.
///
/// For each rule, every positive body atom is replaced by the body of some
/// rule for that atom in `q`, in every combination. Bodies are sets, so the
/// combinations are folded one positive atom at a time and deduplicated as
/// they grow.
fn transl(p: &Program, q: &NegRules, max_rules: usize) -> Result<NegRules> {
    let mut next = NegRules::new();
    let mut total = 0usize;
    for rule in p.rules() {
        let mut partial: BTreeSet<Vec<AtomId>> = BTreeSet::from([rule.neg.clone()]);
        for atom in &rule.pos {
            let Some(bodies) = q.get(atom) else {
                partial.clear();
                break;
            };
            let mut grown = BTreeSet::new();
            for prefix in &partial {
                for body in bodies {
                    grown.insert(union(prefix, body));
                }
            }
            if grown.len() > max_rules {
                return Err(Error::cap("lfp rule count", max_rules, grown.len()));
            }
            partial = grown;
        }
        let entry = next.entry(rule.head).or_default();
        let before = entry.len();
        entry.extend(partial);
        total += entry.len() - before;
        if total > max_rules {
            return Err(Error::cap("lfp rule count", max_rules, total));
        }
    }
    next.retain(|_, bodies| !bodies.is_empty());
    Ok(next)
}

/// The least-fixpoint transformation: a negative program with the same
/// stable behaviour as `p`.
///
/// Iterates the substitution step from the empty rule set until it stops
/// growing. The atom table of `p` is kept as is, including atoms that no
/// longer head or mention any rule. Output rules are ordered by head, then
/// by negative body.
pub fn lfp_transform(p: &Program, max_rules: usize) -> Result<NegativeProgram> {
    let mut q = NegRules::new();
    loop {
        let next = transl(p, &q, max_rules)?;
        // the iteration is monotone, so equal size means equal sets
        let done = rule_count(&next) == rule_count(&q);
        q = next;
        if done {
            break;
        }
    }
    let rules: Vec<Rule> = q
        .into_iter()
        .flat_map(|(head, bodies)| bodies.into_iter().map(move |neg| Rule { head, pos: Vec::new(), neg }))
        .collect();
    NegativeProgram::new(Program::new(p.atoms().clone(), rules)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::parse_program;

    const CAP: usize = 100_000;

    #[test]
    fn substitutes_negative_bodies() {
        let p = parse_program("a :- not b.\nb :- a.").unwrap();
        let lfp = lfp_transform(&p, CAP).unwrap();
        let expected = parse_program("a :- not b.\nb :- not b.").unwrap();
        assert_eq!(*lfp, expected);
    }

    #[test]
    fn purely_positive_cycle_vanishes() {
        let p = parse_program("a :- b.\nb :- a.").unwrap();
        let lfp = lfp_transform(&p, CAP).unwrap();
        assert!(lfp.rules().is_empty());
        assert_eq!(lfp.atoms().names(), ["a", "b"]);
    }

    #[test]
    fn negative_program_is_fixed() {
        let p = parse_program("a :- not b.\nb :- not a.\nc :- not c.").unwrap();
        assert_eq!(*lfp_transform(&p, CAP).unwrap(), p);
    }

    #[test]
    fn all_combinations_are_generated() {
        let p = parse_program("q :- not x.\nq :- not y.\nr :- not z.\np :- q, r, not w.").unwrap();
        let lfp = lfp_transform(&p, CAP).unwrap();
        let expected = parse_program(
            "q :- not x.\nq :- not y.\nr :- not z.\np :- not w, not x, not z.\np :- not w, not y, not z.",
        )
        .unwrap();
        assert_eq!(*lfp, expected);
    }

    #[test]
    fn facts_propagate() {
        let p = parse_program("a.\nb :- a.\nc :- b, not d.").unwrap();
        let lfp = lfp_transform(&p, CAP).unwrap();
        let expected = parse_program("a.\nb.\nc :- not d.").unwrap();
        assert_eq!(lfp.rules().len(), 3);
        assert_eq!(*lfp, Program::new(p.atoms().clone(), expected.rules().iter().map(|r| {
            let name = |id: AtomId| expected.atoms().name(id);
            Rule::new(
                p.atoms().id(name(r.head)).unwrap(),
                [],
                r.neg.iter().map(|&a| p.atoms().id(name(a)).unwrap()).collect::<Vec<_>>(),
            )
        })).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let p = parse_program("q :- not x.\nq :- not y.\np :- q.").unwrap();
        assert!(matches!(lfp_transform(&p, 2), Err(Error::ResourceCap { .. })));
        assert!(lfp_transform(&p, 4).is_ok());
    }
}
