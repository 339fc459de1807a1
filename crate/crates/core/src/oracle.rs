//! Brute-force reference implementations and a seeded program generator.
//!
//! Nothing here uses the local trap-space characterization or the
//! least-fixpoint transformation: stable closure is checked by applying the
//! stable operator of the original program to every member of a cube.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{sort_state_sets, Kind, StateSet, TransitionGraph};
use crate::error::{Error, Result};
use crate::interp::{cube, cset_iter, intersect, leq_t, Interp2, Interp3};
use crate::limits::Limits;
use crate::operators::{CompiledProgram, PositiveProgram3};
use crate::program::{AtomId, AtomTable, Program, Rule};
use crate::trapspaces::{interp3_by_index, TrapMethod, TrapSpaceSet};

fn step(cp: &CompiledProgram, kind: Kind, s: u64) -> u64 {
    match kind {
        Kind::Stable => cp.stable_step(s),
        Kind::Supported => cp.supported_step(s),
    }
}

/// `C(i)` is closed under the operator of `kind`, checked member by member.
pub fn oracle_trap_space(p: &Program, kind: Kind, i: &Interp3, limits: &Limits) -> Result<bool> {
    Error::check_width(p.atom_count(), i.len())?;
    let cp = CompiledProgram::new(p)?;
    let members = cset_iter(i, limits.max_cset)?;
    Ok(closed(&cp, kind, i, members))
}

fn closed(cp: &CompiledProgram, kind: Kind, i: &Interp3, mut members: impl Iterator<Item = Interp2>) -> bool {
    members.all(|s| i.contains(&Interp2::from_raw(i.len(), step(cp, kind, s.index()))))
}

/// Every trap space of `kind` by closure checks over all `3^n` candidates.
pub fn oracle_trap_spaces(p: &Program, kind: Kind, limits: &Limits) -> Result<TrapSpaceSet> {
    limits.enum3(p.atom_count())?;
    let cp = CompiledProgram::new(p)?;
    let n = p.atom_count();
    let items = (0..3u64.pow(n as u32))
        .map(|k| interp3_by_index(n, k))
        .filter(|i| closed(&cp, kind, i, cube(i)));
    Ok(TrapSpaceSet::new(kind, TrapMethod::Oracle, items))
}

/// Intersection of every trap space whose cube contains all `states`.
pub fn oracle_cover(p: &Program, kind: Kind, states: &[Interp2], limits: &Limits) -> Result<Interp3> {
    limits.oracle(p.atom_count())?;
    let all = oracle_trap_spaces(p, kind, limits)?;
    cover_from(&all.items, states)
}

/// Like [`oracle_cover`], reusing an already enumerated trap-space list.
pub fn cover_from(trap_spaces: &[Interp3], states: &[Interp2]) -> Result<Interp3> {
    if states.is_empty() {
        return Err(Error::EmptySet);
    }
    let covering: Vec<Interp3> = trap_spaces
        .iter()
        .filter(|t| states.iter().all(|s| t.contains(s)))
        .copied()
        .collect();
    intersect(&covering)
}

/// Terminal cycles found by tortoise-and-hare from every state.
pub fn cycles_by_pointer_chasing(g: &TransitionGraph) -> Vec<StateSet> {
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    let mut out = Vec::new();
    for start in 0..g.state_count() as u64 {
        let (mut slow, mut fast) = (g.succ(start), g.succ(g.succ(start)));
        while slow != fast {
            slow = g.succ(slow);
            fast = g.succ(g.succ(fast));
        }
        let mut cycle = vec![slow];
        let mut t = g.succ(slow);
        while t != slow {
            cycle.push(t);
            t = g.succ(t);
        }
        let key = *cycle.iter().min().expect("non-empty");
        if seen.insert(key) {
            out.push(StateSet::new(g.atom_count(), cycle));
        }
    }
    sort_state_sets(&mut out);
    out
}

/// The least two-valued model of a positive program, by scanning all
/// models and checking that exactly one is below all others.
pub fn least_model2_by_scan(pp: &Program, limits: &Limits) -> Result<Interp2> {
    limits.enum2(pp.atom_count())?;
    let n = pp.atom_count();
    let is_model = |s: u64| {
        pp.rules().iter().all(|r| {
            let body = r.pos.iter().all(|a| s >> a.0 & 1 == 1) && r.neg.iter().all(|a| s >> a.0 & 1 == 0);
            !body || s >> r.head.0 & 1 == 1
        })
    };
    let models: Vec<u64> = (0..1u64 << n).filter(|&s| is_model(s)).collect();
    models
        .iter()
        .find(|&&m| models.iter().all(|&o| m & !o == 0))
        .map(|&m| Interp2::from_raw(n, m))
        .ok_or_else(|| Error::Precondition("no least model".into()))
}

/// The `<=t`-least three-valued model of a positive program with `u`, by
/// scanning all three-valued models.
pub fn least_model3_by_scan(pp: &PositiveProgram3, limits: &Limits) -> Result<Interp3> {
    use crate::interp::Value3;
    let n = pp.atoms.len();
    limits.enum3(n)?;
    let is_model = |i: &Interp3| {
        pp.rules.iter().all(|r| {
            let start = if r.u_flag { Value3::U } else { Value3::T };
            let body = r.pos.iter().fold(start, |acc, &a| acc.min_t(i.get(a)));
            body.leq_t(i.get(r.head))
        })
    };
    let models: Vec<Interp3> = (0..3u64.pow(n as u32))
        .map(|k| interp3_by_index(n, k))
        .filter(is_model)
        .collect();
    models
        .iter()
        .find(|m| models.iter().all(|o| leq_t(m, o)))
        .copied()
        .ok_or_else(|| Error::Precondition("no least model".into()))
}

/// Parameters of one generated program.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub n_atoms: usize,
    pub n_rules: usize,
    pub max_body: usize,
    pub neg_prob: f64,
}

/// A generated program plus whether the negative-literal bias fired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub program: Program,
    pub forced_negation: bool,
}

fn atom_name(i: usize, n: usize) -> String {
    if n <= 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{i:03}")
    }
}

/// A deterministic random ground program.
///
/// The atom table always holds `n_atoms` atoms, including ones no rule
/// mentions. Heads are uniform; body size is uniform in `0..=max_body`
/// (capped by `n_atoms`); body atoms are drawn without replacement and each
/// is negated with probability `neg_prob`. When `neg_prob > 0` and no
/// literal came out negated, one literal is forced negative (or one negated
/// atom is added to the first rule when every body is empty).
pub fn gen_program(cfg: &GenConfig) -> Generated {
    let n = cfg.n_atoms;
    let atoms = AtomTable::new((0..n).map(|i| atom_name(i, n)));
    if n == 0 || cfg.n_rules == 0 {
        return Generated {
            program: Program::new(atoms, []).expect("empty"),
            forced_negation: false,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let neg_prob = cfg.neg_prob.clamp(0.0, 1.0);
    let mut raw: Vec<(u32, Vec<u32>, Vec<u32>)> = Vec::with_capacity(cfg.n_rules);
    for _ in 0..cfg.n_rules {
        let head = rng.gen_range(0..n) as u32;
        let size = rng.gen_range(0..=cfg.max_body.min(n));
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for a in sample(&mut rng, n, size).into_iter() {
            if rng.gen_bool(neg_prob) {
                neg.push(a as u32);
            } else {
                pos.push(a as u32);
            }
        }
        raw.push((head, pos, neg));
    }
    let mut forced_negation = false;
    if neg_prob > 0.0 && raw.iter().all(|(_, _, neg)| neg.is_empty()) {
        forced_negation = true;
        match raw.iter_mut().find(|(_, pos, _)| !pos.is_empty()) {
            Some((_, pos, neg)) => neg.push(pos.remove(0)),
            None => raw[0].2.push(rng.gen_range(0..n) as u32),
        }
    }
    let rules = raw.into_iter().map(|(h, pos, neg)| {
        Rule::new(
            AtomId(h),
            pos.into_iter().map(AtomId).collect::<Vec<_>>(),
            neg.into_iter().map(AtomId).collect::<Vec<_>>(),
        )
    });
    Generated {
        program: Program::new(atoms, rules).expect("ids are in range"),
        forced_negation,
    }
}
