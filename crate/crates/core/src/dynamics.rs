//! Stable and supported transition graphs over all `2^n` two-valued states.
//!
//! Both operators are total functions on states, so each graph is a
//! functional graph: one outgoing arc per state. Its terminal cycles are
//! exactly the strict classes, which are also the `⊆`-minimal trap sets.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interp::Interp2;
use crate::limits::Limits;
use crate::operators::CompiledProgram;
use crate::program::Program;

/// Which operator drives the dynamics: `F_P` (stable) or `T_P` (supported).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Stable,
    Supported,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Stable => "stable",
            Kind::Supported => "supported",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stable" => Ok(Kind::Stable),
            "supported" => Ok(Kind::Supported),
            _ => Err(Error::Unsupported(format!("unknown kind `{s}`"))),
        }
    }
}

/// The materialized successor function of one operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraph {
    kind: Kind,
    n: usize,
    succ: Vec<u32>,
}

impl TransitionGraph {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn atom_count(&self) -> usize {
        self.n
    }

    pub fn state_count(&self) -> usize {
        self.succ.len()
    }

    /// Successor array indexed by state bit pattern.
    pub fn successors(&self) -> &[u32] {
        &self.succ
    }

    #[inline]
    pub fn succ(&self, state: u64) -> u64 {
        self.succ[state as usize] as u64
    }

    pub fn state(&self, index: u64) -> Interp2 {
        Interp2::from_raw(self.n, index)
    }

    pub fn compact(&self, index: u64) -> String {
        self.state(index).to_compact()
    }

    /// `{"kind", "atoms", "succ"}` with `succ` as an integer array.
    pub fn to_json(&self, atoms: &[String]) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            kind: Kind,
            atoms: &'a [String],
            succ: &'a [u32],
        }
        serde_json::to_string(&Dump {
            kind: self.kind,
            atoms,
            succ: &self.succ,
        })
        .expect("plain data serializes")
    }
}

/// Builds the stable (`F_P`) or supported (`T_P`) transition graph.
pub fn build_graph(p: &Program, kind: Kind, limits: &Limits) -> Result<TransitionGraph> {
    limits.graph(p.atom_count())?;
    let cp = CompiledProgram::new(p)?;
    Ok(build_compiled(&cp, kind))
}

pub(crate) fn build_compiled(cp: &CompiledProgram, kind: Kind) -> TransitionGraph {
    let n = cp.atom_count();
    let mut succ = vec![0u32; 1usize << n];
    succ.par_iter_mut().enumerate().for_each(|(s, slot)| {
        let s = s as u64;
        *slot = match kind {
            Kind::Stable => cp.stable_step(s),
            Kind::Supported => cp.supported_step(s),
        } as u32;
    });
    TransitionGraph { kind, n, succ }
}

/// A set of states, stored as sorted state indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    n: usize,
    states: Vec<u64>,
}

impl StateSet {
    pub fn new(n: usize, states: impl IntoIterator<Item = u64>) -> Self {
        let states: BTreeSet<u64> = states.into_iter().collect();
        StateSet {
            n,
            states: states.into_iter().collect(),
        }
    }

    pub fn from_interps(n: usize, states: &[Interp2]) -> Result<Self> {
        for s in states {
            Error::check_width(n, s.len())?;
        }
        Ok(StateSet::new(n, states.iter().map(Interp2::index)))
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, state: u64) -> bool {
        self.states.binary_search(&state).is_ok()
    }

    pub fn indices(&self) -> &[u64] {
        &self.states
    }

    pub fn interps(&self) -> Vec<Interp2> {
        self.states.iter().map(|&s| Interp2::from_raw(self.n, s)).collect()
    }

    /// Members as compact strings, sorted lexicographically.
    pub fn compact(&self) -> Vec<String> {
        let mut out: Vec<String> = self.interps().iter().map(Interp2::to_compact).collect();
        out.sort();
        out
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        self.states.iter().all(|s| !other.contains(*s))
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.states.iter().all(|s| other.contains(*s))
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.compact().join(","))
    }
}

/// Sorts state sets by their lexicographically smallest member.
pub fn sort_state_sets(sets: &mut [StateSet]) {
    sets.sort_by_cached_key(StateSet::compact);
}

/// Terminal cycles of the functional graph, found with a coloring sweep.
///
/// Every walk is stamped with its own color; meeting the current color
/// closes a new cycle, meeting an older one means the walk drained into a
/// known cycle.
pub fn strict_classes(g: &TransitionGraph) -> Vec<StateSet> {
    const UNSEEN: u32 = u32::MAX;
    let mut color = vec![UNSEEN; g.state_count()];
    let mut out = Vec::new();
    for start in 0..g.state_count() {
        if color[start] != UNSEEN {
            continue;
        }
        let walk = start as u32;
        let mut s = start;
        while color[s] == UNSEEN {
            color[s] = walk;
            s = g.succ[s] as usize;
        }
        if color[s] == walk {
            let head = s as u64;
            let mut cycle = vec![head];
            let mut t = g.succ(head);
            while t != head {
                cycle.push(t);
                t = g.succ(t);
            }
            out.push(StateSet::new(g.n, cycle));
        }
    }
    sort_state_sets(&mut out);
    out
}

/// Forward orbit of `s0`, up to the first repeated state.
pub fn orbit_closure(g: &TransitionGraph, s0: u64) -> StateSet {
    let mut seen = BTreeSet::new();
    let mut s = s0;
    while seen.insert(s) {
        s = g.succ(s);
    }
    StateSet {
        n: g.n,
        states: seen.into_iter().collect(),
    }
}

fn image(g: &TransitionGraph, s: &StateSet) -> StateSet {
    StateSet::new(g.n, s.states.iter().map(|&x| g.succ(x)))
}

fn non_empty(s: &StateSet) -> Result<()> {
    if s.is_empty() {
        Err(Error::EmptySet)
    } else {
        Ok(())
    }
}

/// The set is closed under the operator.
pub fn is_trap_set(g: &TransitionGraph, s: &StateSet) -> Result<bool> {
    non_empty(s)?;
    Ok(s.states.iter().all(|&x| s.contains(g.succ(x))))
}

/// The set equals its own image.
pub fn is_class(g: &TransitionGraph, s: &StateSet) -> Result<bool> {
    non_empty(s)?;
    Ok(image(g, s) == *s)
}

/// The orbit closure of every member is the whole set.
pub fn is_strict_class(g: &TransitionGraph, s: &StateSet) -> Result<bool> {
    non_empty(s)?;
    Ok(s.states.iter().all(|&x| orbit_closure(g, x) == *s))
}

/// Every class: each non-empty union of terminal cycles.
///
/// A set equal to its image under a function is permuted by it, hence a
/// union of cycles. Refuses when there are more than `max_cycles` cycles.
pub fn all_classes(g: &TransitionGraph, max_cycles: usize) -> Result<Vec<StateSet>> {
    let cycles = strict_classes(g);
    if cycles.len() > max_cycles {
        return Err(Error::cap("terminal cycle count", max_cycles, cycles.len()));
    }
    let mut out: Vec<StateSet> = (1u64..1 << cycles.len())
        .map(|pick| {
            StateSet::new(
                g.n,
                cycles
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| pick >> i & 1 == 1)
                    .flat_map(|(_, c)| c.states.iter().copied()),
            )
        })
        .collect();
    sort_state_sets(&mut out);
    Ok(out)
}

/// Renders the graph in DOT; each highlighted set becomes a cluster of
/// double-bordered nodes.
pub fn to_dot(g: &TransitionGraph, highlight: &[StateSet]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", g.kind);
    let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
    let mut in_cluster = vec![false; g.state_count()];
    for (k, set) in highlight.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{k} {{");
        let _ = writeln!(out, "    style=dashed;");
        for label in set.compact() {
            let _ = writeln!(out, "    \"{label}\" [peripheries=2];");
        }
        let _ = writeln!(out, "  }}");
        for &s in &set.states {
            if let Some(slot) = in_cluster.get_mut(s as usize) {
                *slot = true;
            }
        }
    }
    let mut order: Vec<(String, u64)> = (0..g.state_count() as u64).map(|s| (g.compact(s), s)).collect();
    order.sort_unstable();
    for (label, s) in &order {
        if !in_cluster[*s as usize] {
            let _ = writeln!(out, "  \"{label}\";");
        }
    }
    for (label, s) in &order {
        let _ = writeln!(out, "  \"{label}\" -> \"{}\";", g.compact(g.succ(*s)));
    }
    out.push_str("}\n");
    out
}
