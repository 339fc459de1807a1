//! Trap spaces: three-valued interpretations whose state cube is closed
//! under the stable or supported operator.
//!
//! Everything here goes through the local characterization: `I` is a
//! supported trap space iff `I(rhs(a)) <=s I(a)` for every atom, i.e. each
//! defined atom agrees with the Kleene value of its completion. Stable trap
//! spaces are the supported trap spaces of the least-fixpoint transform.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{build_compiled, strict_classes, Kind};
use crate::error::{Error, Result};
use crate::interp::{eval_rhs_cube_masks, leq_i, leq_s, width_mask, Interp2, Interp3, Value3};
use crate::limits::Limits;
use crate::operators::CompiledProgram;
use crate::program::{lfp_transform, Completion, Program};

/// How a [`TrapSpaceSet`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrapMethod {
    /// Exhaustive scan with the local check.
    Local,
    /// Covers of strict classes.
    Percolation,
    /// Brute-force closure checks.
    Oracle,
}

impl TrapMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            TrapMethod::Local => "local",
            TrapMethod::Percolation => "percolation",
            TrapMethod::Oracle => "oracle",
        }
    }
}

/// A deduplicated, lexicographically sorted collection of trap spaces of one
/// kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrapSpaceSet {
    pub kind: Kind,
    pub method: TrapMethod,
    pub items: Vec<Interp3>,
}

impl TrapSpaceSet {
    pub fn new(kind: Kind, method: TrapMethod, items: impl IntoIterator<Item = Interp3>) -> Self {
        TrapSpaceSet {
            kind,
            method,
            items: sorted_unique(items),
        }
    }

    pub fn compact(&self) -> Vec<String> {
        self.items.iter().map(Interp3::to_compact).collect()
    }

    /// `{"kind", "method", "items", "atoms"}`.
    pub fn to_json(&self, atoms: &[String]) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            kind: Kind,
            method: TrapMethod,
            items: Vec<String>,
            atoms: &'a [String],
        }
        serde_json::to_string(&Dump {
            kind: self.kind,
            method: self.method,
            items: self.compact(),
            atoms,
        })
        .expect("plain data serializes")
    }
}

pub(crate) fn sorted_unique(items: impl IntoIterator<Item = Interp3>) -> Vec<Interp3> {
    let mut keyed: Vec<(String, Interp3)> = items.into_iter().map(|i| (i.to_compact(), i)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    keyed.into_iter().map(|(_, i)| i).collect()
}

/// The completion whose local check decides trap spaces of `kind`: that of
/// `p` for supported, that of `lfp(p)` for stable.
pub fn kind_completion(p: &Program, kind: Kind, limits: &Limits) -> Result<Completion> {
    Ok(match kind {
        Kind::Supported => Completion::new(p),
        Kind::Stable => {
            let lfp = lfp_transform(p, limits.max_lfp_rules)?;
            Completion::new(&lfp)
        }
    })
}

/// Atoms that are defined but disagree with their completion value.
#[inline]
fn violations(c: &Completion, i: &Interp3) -> u64 {
    let (d, t) = (i.defined_mask(), i.truth_mask());
    let mut bad = 0u64;
    for a in 0..c.atom_count() {
        if d >> a & 1 == 0 {
            continue;
        }
        let want = Value3::from_bool(t >> a & 1 == 1);
        if eval_rhs_cube_masks(c, a, d, t) != want {
            bad |= 1 << a;
        }
    }
    bad
}

/// The local check against a precomputed completion.
pub fn satisfies_local(c: &Completion, i: &Interp3) -> bool {
    violations(c, i) == 0
}

/// `I(rhs(a)) <=s I(a)` for every atom, with `I(rhs(a))` taken over the
/// whole cube.
pub fn is_supported_trap_space(p: &Program, i: &Interp3) -> Result<bool> {
    Error::check_width(p.atom_count(), i.len())?;
    p.ensure_packable()?;
    Ok(satisfies_local(&Completion::new(p), i))
}

/// The local check on `lfp(p)`.
pub fn is_stable_trap_space(p: &Program, i: &Interp3, limits: &Limits) -> Result<bool> {
    Error::check_width(p.atom_count(), i.len())?;
    p.ensure_packable()?;
    Ok(satisfies_local(&kind_completion(p, Kind::Stable, limits)?, i))
}

pub fn is_trap_space(p: &Program, kind: Kind, i: &Interp3, limits: &Limits) -> Result<bool> {
    match kind {
        Kind::Supported => is_supported_trap_space(p, i),
        Kind::Stable => is_stable_trap_space(p, i, limits),
    }
}

/// Undefines violating atoms until the local check holds.
///
/// Keeps the invariant "the current interpretation is `<=s` every trap space
/// covering `start`'s cube". Such a trap space has a larger cube, on which a
/// violating atom's rhs still disagrees with the atom's current value, so
/// it must leave that atom undefined too.
pub fn percolate(c: &Completion, start: Interp3) -> Interp3 {
    let mut i = start;
    loop {
        let bad = violations(c, &i);
        if bad == 0 {
            return i;
        }
        i = Interp3::from_raw(i.len(), i.defined_mask() & !bad, i.truth_mask() & !bad);
    }
}

/// Componentwise join of states: common values stay, disagreements become
/// undefined.
pub fn join(states: &[Interp2]) -> Result<Interp3> {
    let (first, rest) = states.split_first().ok_or(Error::EmptySet)?;
    let n = first.len();
    let mut differ = 0u64;
    for s in rest {
        Error::check_width(n, s.len())?;
        differ |= s.index() ^ first.index();
    }
    let defined = width_mask(n) & !differ;
    Ok(Interp3::from_raw(n, defined, first.index()))
}

/// The `<=s`-least trap space of `kind` whose cube contains every state.
pub fn cover(p: &Program, kind: Kind, states: &[Interp2], limits: &Limits) -> Result<Interp3> {
    p.ensure_packable()?;
    let j = join(states)?;
    Error::check_width(p.atom_count(), j.len())?;
    Ok(percolate(&kind_completion(p, kind, limits)?, j))
}

/// The `<=s`-minimal trap spaces of `kind`, as covers of strict classes.
///
/// Every trap space contains a strict class, so each minimal one is the
/// cover of the class it contains; covering all classes and keeping the
/// minimal results finds them all.
pub fn minimal_trap_spaces(p: &Program, kind: Kind, limits: &Limits) -> Result<TrapSpaceSet> {
    limits.graph(p.atom_count())?;
    let cp = CompiledProgram::new(p)?;
    let graph = build_compiled(&cp, kind);
    let c = kind_completion(p, kind, limits)?;
    let covers: Vec<Interp3> = strict_classes(&graph)
        .par_iter()
        .map(|class| percolate(&c, join(&class.interps()).expect("classes are non-empty")))
        .collect();
    let covers = sorted_unique(covers);
    let minimal = covers
        .iter()
        .filter(|x| !covers.iter().any(|y| y != *x && leq_s(y, x)))
        .copied();
    Ok(TrapSpaceSet::new(kind, TrapMethod::Percolation, minimal))
}

/// Among the minimal stable trap spaces, those whose undefined set is
/// `⊆`-minimal.
pub fn u_minimal_stable_trap_spaces(p: &Program, limits: &Limits) -> Result<TrapSpaceSet> {
    let minimal = minimal_trap_spaces(p, Kind::Stable, limits)?;
    Ok(TrapSpaceSet::new(Kind::Stable, TrapMethod::Percolation, u_minimal(&minimal.items)))
}

/// Elements whose undefined set has no strict subset among the others.
pub(crate) fn u_minimal(items: &[Interp3]) -> Vec<Interp3> {
    items
        .iter()
        .filter(|x| {
            let ux = x.undefined_mask();
            !items.iter().any(|y| {
                let uy = y.undefined_mask();
                uy != ux && uy & !ux == 0
            })
        })
        .copied()
        .collect()
}

/// Every three-valued interpretation over `n` atoms, by base-3 index.
pub(crate) fn interp3_by_index(n: usize, mut k: u64) -> Interp3 {
    let (mut d, mut t) = (0u64, 0u64);
    for a in 0..n {
        match k % 3 {
            0 => d |= 1 << a,
            1 => {
                d |= 1 << a;
                t |= 1 << a;
            }
            _ => {}
        }
        k /= 3;
    }
    Interp3::from_raw(n, d, t)
}

pub(crate) fn scan3<F>(n: usize, keep: F) -> Vec<Interp3>
where
    F: Fn(&Interp3) -> bool + Sync,
{
    (0..3u64.pow(n as u32))
        .into_par_iter()
        .map(|k| interp3_by_index(n, k))
        .filter(|i| keep(i))
        .collect()
}

/// All trap spaces of `kind` by scanning every three-valued interpretation.
pub fn enumerate_trap_spaces(p: &Program, kind: Kind, limits: &Limits) -> Result<TrapSpaceSet> {
    limits.enum3(p.atom_count())?;
    let c = kind_completion(p, kind, limits)?;
    let items = scan3(p.atom_count(), |i| satisfies_local(&c, i));
    Ok(TrapSpaceSet::new(kind, TrapMethod::Local, items))
}

/// Result of driving `f_P` to a fixpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Convergence {
    pub model: Interp3,
    /// Applications of `f_P`, including the one that confirmed the fixpoint.
    pub iterations: usize,
}

/// Iterates `f_P` from a supported trap space to the unique supported
/// partial model below it.
///
/// Each application only refines the interpretation, so at most `n + 1`
/// applications are needed. That growth is guaranteed when the completion
/// is unate (see [`Completion::is_unate`]); otherwise a step that loses
/// information is reported as an error.
pub fn percolate_to_supported_partial(p: &Program, i: &Interp3) -> Result<Convergence> {
    Error::check_width(p.atom_count(), i.len())?;
    p.ensure_packable()?;
    let c = Completion::new(p);
    if !satisfies_local(&c, i) {
        return Err(Error::Precondition(format!("{i} is not a supported trap space")));
    }
    let mut current = *i;
    let mut iterations = 0;
    loop {
        let next = crate::operators::step_f3(&c, &current)?;
        iterations += 1;
        if !leq_i(&current, &next) {
            return Err(Error::Precondition(format!(
                "f_P loses information at {current}; the completion is not unate"
            )));
        }
        if next == current {
            return Ok(Convergence { model: current, iterations });
        }
        current = next;
    }
}
