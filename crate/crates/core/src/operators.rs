//! Reducts, least models of positive programs, and the operators `F_P`
//! (stable step), `T_P` (supported step) and `f_P` (three-valued supported
//! step).

use crate::error::{Error, Result};
use crate::interp::{eval_rhs2_bits, eval_rhs3_masks, width_mask, Interp2, Interp3};
use crate::program::{mask_of, AtomId, AtomTable, Completion, Program, Rule};

/// A rule of a positive program whose body may contain the constant `u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule3 {
    pub head: AtomId,
    pub pos: Vec<AtomId>,
    /// The body contains the special atom that is always undefined.
    pub u_flag: bool,
}

/// The three-valued reduct of a program: positive, with `u` markers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveProgram3 {
    pub atoms: AtomTable,
    pub rules: Vec<Rule3>,
}

/// Gelfond-Lifschitz reduct: drop rules with a true negated atom, strip the
/// remaining negative literals.
pub fn reduct2(p: &Program, i: &Interp2) -> Result<Program> {
    Error::check_width(p.atom_count(), i.len())?;
    let rules = p
        .rules()
        .iter()
        .filter(|r| r.neg.iter().all(|&b| !i.get(b)))
        .map(|r| Rule::new(r.head, r.pos.clone(), []));
    Program::new(p.atoms().clone(), rules)
}

/// Three-valued reduct: drop rules with a true negated atom, strip negated
/// atoms that are false, and replace the undefined ones by `u`.
pub fn reduct3(p: &Program, i: &Interp3) -> Result<PositiveProgram3> {
    use crate::interp::Value3;
    Error::check_width(p.atom_count(), i.len())?;
    let rules = p
        .rules()
        .iter()
        .filter(|r| r.neg.iter().all(|&b| i.get(b) != Value3::T))
        .map(|r| Rule3 {
            head: r.head,
            pos: r.pos.clone(),
            u_flag: r.neg.iter().any(|&b| i.get(b) == Value3::U),
        })
        .collect();
    Ok(PositiveProgram3 {
        atoms: p.atoms().clone(),
        rules,
    })
}

/// The least two-valued model of a positive program.
pub fn least2(pp: &Program) -> Result<Interp2> {
    pp.ensure_packable()?;
    if !pp.is_positive() {
        return Err(Error::Precondition("least2 needs a positive program".into()));
    }
    let rules: Vec<(u64, u64)> = pp.rules().iter().map(|r| (r.head.bit(), mask_of(&r.pos))).collect();
    Ok(Interp2::from_raw(pp.atom_count(), least_model(&rules)))
}

/// Least model of `(head bit, pos mask)` rules.
fn least_model(rules: &[(u64, u64)]) -> u64 {
    let mut m = 0u64;
    loop {
        let next = rules
            .iter()
            .filter(|&&(_, pos)| pos & !m == 0)
            .fold(m, |acc, &(head, _)| acc | head);
        if next == m {
            return m;
        }
        m = next;
    }
}

/// The `<=t`-least three-valued model of a positive program with `u`.
///
/// Kleene iteration from all-false; the operator only takes minima and
/// maxima, so it is monotone in the truth order.
pub fn least3(pp: &PositiveProgram3) -> Result<Interp3> {
    let n = pp.atoms.len();
    if n > crate::limits::MAX_ATOMS {
        return Err(Error::cap("atom count", crate::limits::MAX_ATOMS, n));
    }
    let rules: Vec<(u64, u64, bool)> = pp
        .rules
        .iter()
        .map(|r| (r.head.bit(), mask_of(&r.pos), r.u_flag))
        .collect();
    let (t, tu) = least_model3(rules.iter().copied());
    Ok(Interp3::from_raw(n, t | (!tu & width_mask(n)), t))
}

/// Returns (true atoms, true-or-undefined atoms) of the least model.
#[inline]
fn least_model3(rules: impl Iterator<Item = (u64, u64, bool)> + Clone) -> (u64, u64) {
    let (mut t, mut tu) = (0u64, 0u64);
    loop {
        let (mut nt, mut ntu) = (0u64, 0u64);
        for (head, pos, u_flag) in rules.clone() {
            // body >= U needs every positive atom >= U; body = T additionally needs no u
            if pos & !tu == 0 {
                ntu |= head;
                if !u_flag && pos & !t == 0 {
                    nt |= head;
                }
            }
        }
        if nt == t && ntu == tu {
            return (t, tu);
        }
        t = nt;
        tu = ntu;
    }
}

#[derive(Debug, Clone, Copy)]
struct MaskedRule {
    head: u64,
    pos: u64,
    neg: u64,
}

/// A program compiled to bit masks for repeated operator application.
#[derive(Debug, Clone)]
pub struct CompiledProgram {
    n: usize,
    rules: Vec<MaskedRule>,
    completion: Completion,
}

impl CompiledProgram {
    pub fn new(p: &Program) -> Result<Self> {
        p.ensure_packable()?;
        let rules = p
            .rules()
            .iter()
            .map(|r| MaskedRule {
                head: r.head.bit(),
                pos: mask_of(&r.pos),
                neg: mask_of(&r.neg),
            })
            .collect();
        Ok(CompiledProgram {
            n: p.atom_count(),
            rules,
            completion: Completion::new(p),
        })
    }

    pub fn atom_count(&self) -> usize {
        self.n
    }

    pub fn completion(&self) -> &Completion {
        &self.completion
    }

    /// `F_P` on a raw state: least model of the reduct.
    pub fn stable_step(&self, s: u64) -> u64 {
        let mut m = 0u64;
        loop {
            let next = self
                .rules
                .iter()
                .filter(|r| r.neg & s == 0 && r.pos & !m == 0)
                .fold(m, |acc, r| acc | r.head);
            if next == m {
                return m;
            }
            m = next;
        }
    }

    /// `T_P` on a raw state: bodies evaluated at `s`.
    pub fn supported_step(&self, s: u64) -> u64 {
        self.rules
            .iter()
            .filter(|r| r.pos & !s == 0 && r.neg & s == 0)
            .fold(0, |acc, r| acc | r.head)
    }

    /// `f_P`: per-atom Kleene evaluation of the completion.
    pub fn supported_step3(&self, i: &Interp3) -> Interp3 {
        step_f3_raw(&self.completion, i)
    }

    /// Least three-valued model of the three-valued reduct at `i`.
    pub fn stable_step3(&self, i: &Interp3) -> Interp3 {
        let (d, t) = (i.defined_mask(), i.truth_mask());
        let undefined = !d;
        let rules = self
            .rules
            .iter()
            .filter(move |r| r.neg & d & t == 0)
            .map(move |r| (r.head, r.pos, r.neg & undefined != 0));
        let (lt, ltu) = least_model3(rules);
        Interp3::from_raw(self.n, lt | (!ltu & width_mask(self.n)), lt)
    }

    pub fn is_stable_partial(&self, i: &Interp3) -> bool {
        self.stable_step3(i) == *i
    }

    pub fn is_supported_partial(&self, i: &Interp3) -> bool {
        self.supported_step3(i) == *i
    }
}

fn step_f3_raw(c: &Completion, i: &Interp3) -> Interp3 {
    let (d, t) = (i.defined_mask(), i.truth_mask());
    let (mut nd, mut nt) = (0u64, 0u64);
    for a in 0..c.atom_count() {
        match eval_rhs3_masks(c, a, d, t) {
            crate::interp::Value3::T => {
                nd |= 1 << a;
                nt |= 1 << a;
            }
            crate::interp::Value3::F => nd |= 1 << a,
            crate::interp::Value3::U => {}
        }
    }
    Interp3::from_raw(i.len(), nd, nt)
}

/// `F_P(i)`: the least model of the reduct of `p` at `i`.
pub fn step_f(p: &Program, i: &Interp2) -> Result<Interp2> {
    Error::check_width(p.atom_count(), i.len())?;
    let cp = CompiledProgram::new(p)?;
    Ok(Interp2::from_raw(cp.n, cp.stable_step(i.index())))
}

/// `T_P(i)`: each atom takes the value of its completion right-hand side.
pub fn step_t(p: &Program, i: &Interp2) -> Result<Interp2> {
    Error::check_width(p.atom_count(), i.len())?;
    let c = Completion::new(p);
    p.ensure_packable()?;
    let bits = (0..c.atom_count())
        .filter(|&a| eval_rhs2_bits(&c, a, i.index()))
        .fold(0u64, |m, a| m | 1 << a);
    Ok(Interp2::from_raw(p.atom_count(), bits))
}

/// `f_P(i)`: three-valued completion step. Total on all interpretations.
pub fn step_f3(c: &Completion, i: &Interp3) -> Result<Interp3> {
    Error::check_width(c.atom_count(), i.len())?;
    Ok(step_f3_raw(c, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::parse_program;

    fn i3(s: &str) -> Interp3 {
        Interp3::from_compact(s, s.len()).unwrap()
    }

    fn i2(s: &str) -> Interp2 {
        i3(s).to_interp2().unwrap()
    }

    fn p1() -> Program {
        parse_program("a :- b.\nb :- a.").unwrap()
    }

    fn p2() -> Program {
        parse_program("a :- not b.\nb :- not a.\nc :- not c.").unwrap()
    }

    #[test]
    fn reduct2_examples() {
        let r = reduct2(&p2(), &i2("000")).unwrap();
        assert_eq!(r, parse_program("a. b. c.").unwrap());
        for s in ["00", "01", "10", "11"] {
            assert_eq!(reduct2(&p1(), &i2(s)).unwrap(), p1());
        }
        let p3 = parse_program("c :- not c.").unwrap();
        assert!(reduct2(&p3, &i2("1")).unwrap().rules().is_empty());
    }

    #[test]
    fn reduct3_examples() {
        let p3 = parse_program("c :- not c.").unwrap();
        let r = reduct3(&p3, &i3("*")).unwrap();
        assert_eq!(r.rules, vec![Rule3 { head: AtomId(0), pos: vec![], u_flag: true }]);
        assert_eq!(least3(&r).unwrap(), i3("*"));

        let r = reduct3(&p2(), &i3("01*")).unwrap();
        assert_eq!(
            r.rules,
            vec![
                Rule3 { head: AtomId(1), pos: vec![], u_flag: false },
                Rule3 { head: AtomId(2), pos: vec![], u_flag: true },
            ]
        );
        let r = reduct3(&p2(), &i3("100")).unwrap();
        assert!(r.rules.iter().all(|r| !r.u_flag));
    }

    #[test]
    fn least2_examples() {
        assert_eq!(least2(&parse_program("a. b. c.").unwrap()).unwrap(), i2("111"));
        assert_eq!(least2(&p1()).unwrap(), i2("00"));
        assert_eq!(least2(&parse_program("a. b :- a. c :- b.").unwrap()).unwrap(), i2("111"));
        assert!(least2(&p2()).is_err());
    }

    #[test]
    fn least3_examples() {
        let atoms = AtomTable::new(["a"]);
        let fact = PositiveProgram3 {
            atoms: atoms.clone(),
            rules: vec![Rule3 { head: AtomId(0), pos: vec![], u_flag: false }],
        };
        assert_eq!(least3(&fact).unwrap(), i3("1"));
        let empty = PositiveProgram3 { atoms, rules: vec![] };
        assert_eq!(least3(&empty).unwrap(), i3("0"));
    }

    #[test]
    fn least3_propagates_through_positive_bodies() {
        // a :- u.  b :- a.  c :- b, d.  d.
        let atoms = AtomTable::new(["a", "b", "c", "d"]);
        let r = |h: u32, pos: &[u32], u_flag| Rule3 { head: AtomId(h), pos: pos.iter().map(|&x| AtomId(x)).collect(), u_flag };
        let pp = PositiveProgram3 {
            atoms,
            rules: vec![r(0, &[], true), r(1, &[0], false), r(2, &[1, 3], false), r(3, &[], false)],
        };
        assert_eq!(least3(&pp).unwrap(), i3("***1"));
    }

    #[test]
    fn stable_step_examples() {
        assert_eq!(step_f(&p2(), &i2("010")).unwrap(), i2("011"));
        assert_eq!(step_f(&p1(), &i2("11")).unwrap(), i2("00"));
        let p = parse_program("a :- not b.\nb :- a.").unwrap();
        assert_eq!(step_f(&p, &i2("00")).unwrap(), i2("11"));
    }

    #[test]
    fn supported_step_examples() {
        assert_eq!(step_t(&p1(), &i2("10")).unwrap(), i2("01"));
        assert_eq!(step_t(&p1(), &i2("11")).unwrap(), i2("11"));
        assert_eq!(step_t(&p2(), &i2("110")).unwrap(), i2("001"));
    }

    #[test]
    fn supported_step3_examples() {
        let c1 = Completion::new(&p1());
        assert_eq!(step_f3(&c1, &i3("**")).unwrap(), i3("**"));
        assert_eq!(step_f3(&c1, &i3("0*")).unwrap(), i3("*0"));
        let c2 = Completion::new(&p2());
        assert_eq!(step_f3(&c2, &i3("01*")).unwrap(), i3("01*"));
        assert!(step_f3(&c2, &i3("01")).is_err());
    }

    #[test]
    fn compiled_matches_free_functions() {
        let p = parse_program("a :- not b, c.\nb :- not a.\nc :- a.\nc :- not d.\nd :- b, not c.").unwrap();
        let cp = CompiledProgram::new(&p).unwrap();
        for s in 0..16u64 {
            let i = Interp2::new(4, s).unwrap();
            assert_eq!(cp.stable_step(s), step_f(&p, &i).unwrap().index());
            assert_eq!(cp.supported_step(s), step_t(&p, &i).unwrap().index());
            let i = Interp3::from(i);
            assert_eq!(cp.stable_step3(&i), least3(&reduct3(&p, &i).unwrap()).unwrap());
        }
    }
}
