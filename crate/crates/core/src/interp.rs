//! Two- and three-valued interpretations, their orders, and Kleene
//! evaluation of completion right-hand sides.
//!
//! Both interpretation types pack one bit per atom into a `u64`; bit `i`
//! belongs to atom id `i`. The compact string form writes atom `i` as the
//! `i`-th character, using `0`, `1`, and `*` for undefined.

use std::fmt;

use crate::error::{Error, Result};
use crate::limits::MAX_ATOMS;
use crate::program::{AtomId, AtomTable, Completion};

/// A value of the three-valued domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Value3 {
    F,
    T,
    U,
}

impl std::ops::Not for Value3 {
    type Output = Value3;

    #[inline]
    fn not(self) -> Value3 {
        match self {
            Value3::F => Value3::T,
            Value3::T => Value3::F,
            Value3::U => Value3::U,
        }
    }
}

impl Value3 {
    #[inline]
    fn rank_t(self) -> u8 {
        match self {
            Value3::F => 0,
            Value3::U => 1,
            Value3::T => 2,
        }
    }

    /// Conjunction: minimum in the truth order.
    #[inline]
    pub fn min_t(self, other: Value3) -> Value3 {
        if self.rank_t() <= other.rank_t() {
            self
        } else {
            other
        }
    }

    /// Disjunction: maximum in the truth order.
    #[inline]
    pub fn max_t(self, other: Value3) -> Value3 {
        if self.rank_t() >= other.rank_t() {
            self
        } else {
            other
        }
    }

    /// `F < U < T`.
    pub fn leq_t(self, other: Value3) -> bool {
        self.rank_t() <= other.rank_t()
    }

    /// `F < U` and `T < U`; `F` and `T` are incomparable.
    pub fn leq_s(self, other: Value3) -> bool {
        self == other || other == Value3::U
    }

    /// Reverse of [`Value3::leq_s`].
    pub fn leq_i(self, other: Value3) -> bool {
        other.leq_s(self)
    }

    /// `F` and `T` are mutually below each other; both are below `U`.
    pub fn leq_u(self, other: Value3) -> bool {
        self != Value3::U || other == Value3::U
    }

    pub fn from_bool(b: bool) -> Value3 {
        if b {
            Value3::T
        } else {
            Value3::F
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Value3::F => '0',
            Value3::T => '1',
            Value3::U => '*',
        }
    }

    pub fn from_char(c: char) -> Option<Value3> {
        match c {
            '0' => Some(Value3::F),
            '1' => Some(Value3::T),
            '*' | 'u' | 'U' => Some(Value3::U),
            _ => None,
        }
    }
}

impl fmt::Display for Value3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[inline]
pub(crate) fn width_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_n(n: usize) -> Result<()> {
    if n > MAX_ATOMS {
        Err(Error::cap("interpretation atom count", MAX_ATOMS, n))
    } else {
        Ok(())
    }
}

/// A total two-valued interpretation; a set bit means true.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interp2 {
    n: u8,
    bits: u64,
}

impl Interp2 {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_n(n)?;
        if bits & !width_mask(n) != 0 {
            return Err(Error::InvalidInterp(format!("state {bits:#x} has bits beyond {n} atoms")));
        }
        Ok(Interp2 { n: n as u8, bits })
    }

    #[inline]
    pub(crate) fn from_raw(n: usize, bits: u64) -> Self {
        debug_assert!(n <= MAX_ATOMS && bits & !width_mask(n) == 0);
        Interp2 { n: n as u8, bits }
    }

    pub fn all_false(n: usize) -> Result<Self> {
        Interp2::new(n, 0)
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The state index: the bit pattern read as an integer.
    pub fn index(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, a: AtomId) -> bool {
        self.bits & a.bit() != 0
    }

    pub fn true_atoms<'t>(&self, atoms: &'t AtomTable) -> Vec<&'t str> {
        atoms.ids().filter(|&a| self.get(a)).map(|a| atoms.name(a)).collect()
    }

    pub fn to_compact(&self) -> String {
        (0..self.len())
            .map(|i| if self.bits >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Parses a compact (`0110`) or explicit (`a=0,b=1`) two-valued
    /// interpretation.
    pub fn parse(s: &str, atoms: &AtomTable) -> Result<Self> {
        let i3 = Interp3::parse(s, atoms)?;
        i3.to_interp2()
            .ok_or_else(|| Error::InvalidInterp(format!("`{s}` is not two-valued")))
    }
}

impl fmt::Display for Interp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact())
    }
}

/// A total three-valued interpretation.
///
/// `defined` has a bit set for every atom that is not undefined; `truth` is
/// meaningful only under `defined` and is kept zero elsewhere, so equality is
/// plain field equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interp3 {
    n: u8,
    defined: u64,
    truth: u64,
}

impl Interp3 {
    pub fn new(n: usize, defined: u64, truth: u64) -> Result<Self> {
        check_n(n)?;
        let w = width_mask(n);
        if (defined | truth) & !w != 0 {
            return Err(Error::InvalidInterp(format!("masks have bits beyond {n} atoms")));
        }
        Ok(Interp3 {
            n: n as u8,
            defined,
            truth: truth & defined,
        })
    }

    #[inline]
    pub(crate) fn from_raw(n: usize, defined: u64, truth: u64) -> Self {
        debug_assert!(n <= MAX_ATOMS);
        Interp3 {
            n: n as u8,
            defined,
            truth: truth & defined,
        }
    }

    pub fn all_undefined(n: usize) -> Result<Self> {
        Interp3::new(n, 0, 0)
    }

    pub fn from_values(values: &[Value3]) -> Result<Self> {
        check_n(values.len())?;
        let (mut d, mut t) = (0u64, 0u64);
        for (i, v) in values.iter().enumerate() {
            match v {
                Value3::F => d |= 1 << i,
                Value3::T => {
                    d |= 1 << i;
                    t |= 1 << i;
                }
                Value3::U => {}
            }
        }
        Interp3::new(values.len(), d, t)
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn defined_mask(&self) -> u64 {
        self.defined
    }

    pub fn truth_mask(&self) -> u64 {
        self.truth
    }

    pub(crate) fn false_mask(&self) -> u64 {
        self.defined & !self.truth
    }

    /// Bit mask of the undefined atoms.
    pub fn undefined_mask(&self) -> u64 {
        !self.defined & width_mask(self.len())
    }

    pub fn undefined_count(&self) -> u32 {
        self.undefined_mask().count_ones()
    }

    pub fn undefined_atoms(&self) -> Vec<AtomId> {
        let u = self.undefined_mask();
        (0..self.n as u32).filter(|i| u >> i & 1 == 1).map(AtomId).collect()
    }

    pub fn is_two_valued(&self) -> bool {
        self.undefined_mask() == 0
    }

    pub fn get(&self, a: AtomId) -> Value3 {
        let bit = a.bit();
        if self.defined & bit == 0 {
            Value3::U
        } else {
            Value3::from_bool(self.truth & bit != 0)
        }
    }

    pub fn with(&self, a: AtomId, v: Value3) -> Interp3 {
        let bit = a.bit();
        match v {
            Value3::U => Interp3::from_raw(self.len(), self.defined & !bit, self.truth & !bit),
            Value3::F => Interp3::from_raw(self.len(), self.defined | bit, self.truth & !bit),
            Value3::T => Interp3::from_raw(self.len(), self.defined | bit, self.truth | bit),
        }
    }

    pub fn values(&self) -> Vec<Value3> {
        (0..self.n as u32).map(|i| self.get(AtomId(i))).collect()
    }

    pub fn to_interp2(&self) -> Option<Interp2> {
        self.is_two_valued().then(|| Interp2::from_raw(self.len(), self.truth))
    }

    pub fn to_compact(&self) -> String {
        self.values().into_iter().map(Value3::to_char).collect()
    }

    /// Parses a compact (`01*`) or explicit (`a=0,b=1,c=*`) interpretation.
    ///
    /// The explicit form must assign every atom of the table exactly once.
    pub fn parse(s: &str, atoms: &AtomTable) -> Result<Self> {
        let s = s.trim();
        let n = atoms.len();
        if s.contains('=') {
            let mut values = vec![None; n];
            for part in s.split(',') {
                let (name, value) = part
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidInterp(format!("expected `atom=value`, found `{part}`")))?;
                let name = name.trim();
                let id = atoms
                    .id(name)
                    .ok_or_else(|| Error::InvalidInterp(format!("unknown atom `{name}`")))?;
                let mut chars = value.trim().chars();
                let v = match (chars.next().and_then(Value3::from_char), chars.next()) {
                    (Some(v), None) => v,
                    _ => return Err(Error::InvalidInterp(format!("bad value `{value}` for `{name}`"))),
                };
                if values[id.index()].replace(v).is_some() {
                    return Err(Error::InvalidInterp(format!("atom `{name}` assigned twice")));
                }
            }
            let missing: Vec<&str> = atoms
                .ids()
                .filter(|a| values[a.index()].is_none())
                .map(|a| atoms.name(a))
                .collect();
            if !missing.is_empty() {
                return Err(Error::InvalidInterp(format!("no value for {}", missing.join(", "))));
            }
            Interp3::from_values(&values.into_iter().map(Option::unwrap).collect::<Vec<_>>())
        } else {
            Interp3::from_compact(s, n)
        }
    }

    pub fn from_compact(s: &str, n: usize) -> Result<Self> {
        let values: Vec<Value3> = s
            .chars()
            .map(|c| Value3::from_char(c).ok_or_else(|| Error::InvalidInterp(format!("bad character `{c}` in `{s}`"))))
            .collect::<Result<_>>()?;
        if values.len() != n {
            return Err(Error::InvalidInterp(format!(
                "`{s}` has {} values but the program has {n} atoms",
                values.len()
            )));
        }
        Interp3::from_values(&values)
    }

    /// Membership in the cube `C(self)`.
    pub fn contains(&self, i2: &Interp2) -> bool {
        self.n == i2.n && (i2.bits ^ self.truth) & self.defined == 0
    }

    /// Number of members of `C(self)`.
    pub fn cube_size(&self) -> u128 {
        1u128 << self.undefined_count()
    }
}

impl From<Interp2> for Interp3 {
    fn from(i: Interp2) -> Self {
        Interp3::from_raw(i.len(), width_mask(i.len()), i.bits)
    }
}

impl fmt::Display for Interp3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact())
    }
}

/// Whether `i2` lies in the cube of `i3`.
pub fn cset_contains(i3: &Interp3, i2: &Interp2) -> Result<bool> {
    Error::check_width(i3.len(), i2.len())?;
    Ok(i3.contains(i2))
}

/// Iterator over the members of a cube in increasing bit-pattern order.
#[derive(Debug, Clone)]
pub struct Cube {
    n: usize,
    base: u64,
    free: u64,
    next: Option<u64>,
}

impl Iterator for Cube {
    type Item = Interp2;

    fn next(&mut self) -> Option<Interp2> {
        let sub = self.next?;
        // next submask of `free` in increasing order
        self.next = if sub == self.free {
            None
        } else {
            Some((sub | !self.free).wrapping_add(1) & self.free)
        };
        Some(Interp2::from_raw(self.n, self.base | sub))
    }
}

/// Enumerates `C(i3)`, refusing cubes with more than `cap` members.
pub fn cset_iter(i3: &Interp3, cap: u64) -> Result<Cube> {
    let size = i3.cube_size();
    if size > cap as u128 {
        return Err(Error::cap("cube size", cap, u64::try_from(size).unwrap_or(u64::MAX)));
    }
    Ok(cube(i3))
}

pub(crate) fn cube(i3: &Interp3) -> Cube {
    Cube {
        n: i3.len(),
        base: i3.truth,
        free: i3.undefined_mask(),
        next: Some(0),
    }
}

/// Pointwise truth order.
pub fn leq_t(x: &Interp3, y: &Interp3) -> bool {
    // x <= y fails where x is T and y is not, or x is U and y is F
    let x_t = x.truth;
    let y_t = y.truth;
    let x_u = x.undefined_mask();
    let y_f = y.false_mask();
    x_t & !y_t == 0 && x_u & y_f == 0
}

/// Pointwise subset order: every defined value of `y` is matched in `x`.
pub fn leq_s(x: &Interp3, y: &Interp3) -> bool {
    y.defined & !x.defined == 0 && (x.truth ^ y.truth) & y.defined == 0
}

/// Pointwise information order, the reverse of [`leq_s`].
pub fn leq_i(x: &Interp3, y: &Interp3) -> bool {
    leq_s(y, x)
}

/// The undefinedness preorder: `x`'s undefined atoms are a subset of `y`'s.
pub fn leq_u(x: &Interp3, y: &Interp3) -> bool {
    x.undefined_mask() & !y.undefined_mask() == 0
}

/// True iff the cubes of `x` and `y` intersect.
pub fn consistent(x: &Interp3, y: &Interp3) -> bool {
    (x.truth ^ y.truth) & x.defined & y.defined == 0
}

/// The pointwise `<=s` meet of mutually consistent interpretations; its cube
/// is the intersection of their cubes.
pub fn intersect(es: &[Interp3]) -> Result<Interp3> {
    let (first, rest) = es
        .split_first()
        .ok_or_else(|| Error::Precondition("cannot intersect an empty list".into()))?;
    let mut acc = *first;
    for e in rest {
        Error::check_width(acc.len(), e.len())?;
        let clash = (acc.truth ^ e.truth) & acc.defined & e.defined;
        if clash != 0 {
            return Err(Error::Inconsistent {
                atom: clash.trailing_zeros() as usize,
            });
        }
        acc = Interp3::from_raw(acc.len(), acc.defined | e.defined, acc.truth | e.truth);
    }
    Ok(acc)
}

/// Two-valued value of `rhs(a)` at `i`.
pub fn eval_rhs2(c: &Completion, a: AtomId, i: &Interp2) -> bool {
    eval_rhs2_bits(c, a.index(), i.bits)
}

#[inline]
pub(crate) fn eval_rhs2_bits(c: &Completion, a: usize, s: u64) -> bool {
    c.rhs_masks(a).iter().any(|&(pos, neg)| pos & !s == 0 && neg & s == 0)
}

/// Kleene value of `rhs(a)` at `i`: max over disjuncts of min over literals.
pub fn eval_rhs3(c: &Completion, a: AtomId, i: &Interp3) -> Value3 {
    eval_rhs3_masks(c, a.index(), i.defined, i.truth)
}

#[inline]
pub(crate) fn eval_rhs3_masks(c: &Completion, a: usize, defined: u64, truth: u64) -> Value3 {
    let falses = defined & !truth;
    let mut best = Value3::F;
    for &(pos, neg) in c.rhs_masks(a) {
        // a literal is F when a positive atom is F or a negated atom is T
        if pos & falses != 0 || neg & truth != 0 {
            continue;
        }
        if pos & !truth == 0 && neg & !falses == 0 {
            return Value3::T;
        }
        best = Value3::U;
    }
    best
}

/// Value of `rhs(a)` over the whole cube `C(i)`: `T` or `F` when every
/// member agrees, `U` otherwise.
///
/// Agrees with [`eval_rhs3`] whenever that is defined. Kleene evaluation
/// can report `U` for bodies that jointly cover a case split, such as
/// `not c | (a & c)` under `a = 1`; this resolves those exactly.
pub fn eval_rhs_cube(c: &Completion, a: AtomId, i: &Interp3) -> Value3 {
    eval_rhs_cube_masks(c, a.index(), i.defined, i.truth)
}

pub(crate) fn eval_rhs_cube_masks(c: &Completion, a: usize, defined: u64, truth: u64) -> Value3 {
    let kleene = eval_rhs3_masks(c, a, defined, truth);
    if kleene != Value3::U {
        return kleene;
    }
    let falses = defined & !truth;
    let undefined = !defined;
    // bodies still satisfiable somewhere in the cube, restricted to undefined atoms
    let residual: Vec<(u64, u64)> = c
        .rhs_masks(a)
        .iter()
        .filter(|&&(pos, neg)| pos & neg == 0 && pos & falses == 0 && neg & truth == 0)
        .map(|&(pos, neg)| (pos & undefined, neg & undefined))
        .collect();
    if residual.is_empty() {
        Value3::F
    } else if is_tautology(&residual) {
        Value3::T
    } else {
        Value3::U
    }
}

/// Whether a disjunction of consistent conjunctions `(pos, neg)` holds under
/// every assignment, by splitting on one atom at a time.
fn is_tautology(terms: &[(u64, u64)]) -> bool {
    if terms.iter().any(|&(pos, neg)| pos | neg == 0) {
        return true;
    }
    let Some(&(pos, neg)) = terms.first() else {
        return false;
    };
    let bit = (pos | neg) & (pos | neg).wrapping_neg();
    let branch = |value: bool| -> Vec<(u64, u64)> {
        terms
            .iter()
            .filter(|&&(p, n)| if value { n & bit == 0 } else { p & bit == 0 })
            .map(|&(p, n)| (p & !bit, n & !bit))
            .collect()
    };
    is_tautology(&branch(true)) && is_tautology(&branch(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::{completion, parse_program};

    fn i3(s: &str) -> Interp3 {
        Interp3::from_compact(s, s.chars().count()).unwrap()
    }

    fn i2(s: &str) -> Interp2 {
        i3(s).to_interp2().unwrap()
    }

    #[test]
    fn cube_of_partial_interpretation() {
        let atoms = AtomTable::new(["p", "q", "r"]);
        let i = Interp3::parse("p=1,q=0,r=*", &atoms).unwrap();
        let members: Vec<Vec<&str>> = cset_iter(&i, 64).unwrap().map(|j| j.true_atoms(&atoms)).collect();
        assert_eq!(members, vec![vec!["p"], vec!["p", "r"]]);
        assert!(cset_contains(&i, &i2("101")).unwrap());
        assert!(!cset_contains(&i, &i2("111")).unwrap());
    }

    #[test]
    fn cube_sizes() {
        assert_eq!(cset_iter(&i3("010"), 64).unwrap().collect::<Vec<_>>(), vec![i2("010")]);
        let all: Vec<u64> = cset_iter(&i3("***"), 64).unwrap().map(|j| j.index()).collect();
        assert_eq!(all, (0..8).collect::<Vec<_>>());
        assert!(matches!(cset_iter(&i3("***"), 4), Err(Error::ResourceCap { .. })));
        assert_eq!(cset_iter(&i3(""), 1).unwrap().count(), 1);
    }

    #[test]
    fn cube_iteration_is_increasing() {
        let v: Vec<u64> = cset_iter(&i3("*1*0*"), 64).unwrap().map(|j| j.index()).collect();
        assert_eq!(v.len(), 8);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn orders() {
        assert!(leq_s(&i3("01*"), &i3("***")));
        assert!(leq_i(&i3("***"), &i3("01*")));
        assert!(!leq_s(&i3("***"), &i3("01*")));
        assert!(leq_u(&i3("01*"), &i3("10*")));
        assert!(leq_u(&i3("10*"), &i3("01*")));
        assert!(!leq_u(&i3("***"), &i3("01*")));
        assert!(leq_t(&i3("0*1"), &i3("*11")));
        assert!(!leq_t(&i3("*"), &i3("0")));
    }

    #[test]
    fn consistency() {
        assert!(consistent(&i3("01*"), &i3("0**")));
        assert!(!consistent(&i3("01*"), &i3("10*")));
        assert!(consistent(&i3("1*0"), &i3("1*0")));
    }

    #[test]
    fn intersections() {
        assert_eq!(intersect(&[i3("0**"), i3("*1*")]).unwrap(), i3("01*"));
        assert_eq!(intersect(&[i3("***"), i3("01*")]).unwrap(), i3("01*"));
        assert_eq!(intersect(&[i3("0**"), i3("**0"), i3("0*0")]).unwrap(), i3("0*0"));
        assert_eq!(intersect(&[i3("01*"), i3("1**")]), Err(Error::Inconsistent { atom: 0 }));
        assert!(matches!(intersect(&[]), Err(Error::Precondition(_))));
    }

    #[test]
    fn kleene_rhs() {
        let p2 = parse_program("a :- not b.\nb :- not a.\nc :- not c.").unwrap();
        let c = completion(&p2);
        assert_eq!(eval_rhs3(&c, AtomId(2), &i3("00*")), Value3::U);
        assert_eq!(eval_rhs3(&c, AtomId(0), &i3("01*")), Value3::F);
        assert_eq!(eval_rhs3(&c, AtomId(1), &i3("01*")), Value3::T);

        let p1 = parse_program("a :- b.\nb :- a.").unwrap();
        let c1 = completion(&p1);
        assert!(eval_rhs2(&c1, AtomId(0), &i2("01")));
        assert!(!eval_rhs2(&c1, AtomId(1), &i2("01")));
    }

    #[test]
    fn ruleless_atom_is_false() {
        let p = crate::program::Program::new(AtomTable::new(["a", "b"]), [crate::program::Rule::fact(AtomId(0))]).unwrap();
        let c = completion(&p);
        for s in ["00", "01", "10", "11"] {
            assert!(!eval_rhs2(&c, AtomId(1), &i2(s)));
        }
        for s in ["**", "0*", "*1"] {
            assert_eq!(eval_rhs3(&c, AtomId(1), &i3(s)), Value3::F);
        }
    }

    #[test]
    fn parse_forms() {
        let atoms = AtomTable::new(["a", "b", "c"]);
        assert_eq!(Interp3::parse("01*", &atoms).unwrap(), i3("01*"));
        assert_eq!(Interp3::parse("c=*, a=0 ,b=1", &atoms).unwrap(), i3("01*"));
        assert!(Interp3::parse("01", &atoms).is_err());
        assert!(Interp3::parse("a=0,b=1", &atoms).is_err());
        assert!(Interp3::parse("a=0,a=1,b=1,c=0", &atoms).is_err());
        assert!(Interp3::parse("a=2,b=1,c=0", &atoms).is_err());
        assert!(Interp2::parse("01*", &atoms).is_err());
        assert_eq!(Interp2::parse("011", &atoms).unwrap().index(), 0b110);
    }

    #[test]
    fn canonical_truth_bits() {
        let x = Interp3::new(2, 0b01, 0b11).unwrap();
        assert_eq!(x, i3("1*"));
        assert!(Interp3::new(2, 0b100, 0).is_err());
        assert!(Interp3::new(65, 0, 0).is_err());
    }

    #[test]
    fn value_orders() {
        use Value3::*;
        assert!(F.leq_t(U) && U.leq_t(T) && !T.leq_t(U));
        assert!(F.leq_s(U) && T.leq_s(U) && !F.leq_s(T));
        assert!(U.leq_i(F) && !F.leq_i(U));
        assert!(F.leq_u(T) && T.leq_u(F) && F.leq_u(U) && !U.leq_u(T));
        assert_eq!(!U, U);
        assert_eq!(F.min_t(U), F);
        assert_eq!(T.max_t(U), T);
    }
}
