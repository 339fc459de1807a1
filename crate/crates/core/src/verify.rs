//! Cross-route property checks over a single program, and a corpus runner
//! over generated programs.

use std::collections::BTreeSet;
use std::fmt;

use crate::dynamics::{build_compiled, is_strict_class, orbit_closure, strict_classes, Kind};
use crate::error::Result;
use crate::interp::{consistent, leq_s, Interp2, Interp3};
use crate::limits::Limits;
use crate::operators::CompiledProgram;
use crate::oracle::{cover_from, cycles_by_pointer_chasing, gen_program, oracle_trap_spaces, GenConfig};
use crate::program::{lfp_transform, Completion, Program};
use crate::semantics::{enumerate_models, Method, Semantics};
use crate::trapspaces::{
    enumerate_trap_spaces, kind_completion, minimal_trap_spaces, percolate, percolate_to_supported_partial,
    TrapSpaceSet,
};

/// Largest atom count for the local-vs-closure sweep.
pub const LOCAL_ORACLE_MAX_ATOMS: usize = 7;
/// Largest atom count for the cover-vs-oracle sweep.
pub const COVER_ORACLE_MAX_ATOMS: usize = 5;
/// Largest state subset size in the cover-vs-oracle sweep.
pub const COVER_ORACLE_MAX_STATES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skip(String),
}

impl Outcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail(_))
    }

    fn from_check(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail(detail())
        }
    }
}

impl Outcome {
    /// `PASS`, `FAIL` or `SKIP`.
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail(_) => "FAIL",
            Outcome::Skip(_) => "SKIP",
        }
    }

    /// Why the property failed or was skipped; empty on a pass.
    pub fn detail(&self) -> &str {
        match self {
            Outcome::Pass => "",
            Outcome::Fail(why) | Outcome::Skip(why) => why,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.detail() {
            "" => f.write_str(self.label()),
            why => write!(f, "{} ({why})", self.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub property: &'static str,
    pub outcome: Outcome,
}

type Check = fn(&Program, &Limits) -> Result<Outcome>;

/// Every property, in report order.
pub const PROPERTIES: &[(&str, Check)] = &[
    ("local-vs-closure-oracle", local_vs_oracle),
    ("regular-trap-vs-scan", regular_routes),
    ("l-stable-trap-vs-scan", l_stable_routes),
    ("lfp-stable-graph-invariance", lfp_graph_invariance),
    ("negative-graphs-coincide", negative_graphs),
    ("stable-within-supported", model_inclusions),
    ("strict-classes-structure", strict_class_structure),
    ("minimal-trap-spaces-inconsistent", minimal_inconsistent),
    ("trap-spaces-contain-strict-class", trap_spaces_contain_class),
    ("strict-class-covers-are-partial-models", covers_are_partial_models),
    ("existence", existence),
    ("f-convergence", f_convergence),
    ("cover-vs-oracle", cover_vs_oracle),
    ("minimal-supported-vs-partial-models", minimal_supported_vs_supm),
];

/// Runs every property on `p`. Resource caps turn into skips.
pub fn check_program(p: &Program, limits: &Limits) -> Vec<PropertyResult> {
    PROPERTIES
        .iter()
        .map(|&(property, check)| PropertyResult {
            property,
            outcome: check(p, limits).unwrap_or_else(|e| Outcome::Skip(e.to_string())),
        })
        .collect()
}

/// Report for one generated program.
#[derive(Debug, Clone)]
pub struct ProgramReport {
    pub config: GenConfig,
    pub forced_negation: bool,
    pub results: Vec<PropertyResult>,
}

/// Generates and checks one program per config.
pub fn run_corpus(configs: &[GenConfig], limits: &Limits) -> Vec<ProgramReport> {
    configs
        .iter()
        .map(|cfg| {
            let g = gen_program(cfg);
            ProgramReport {
                config: *cfg,
                forced_negation: g.forced_negation,
                results: check_program(&g.program, limits),
            }
        })
        .collect()
}

/// Kinds whose completion is unate. The stable kind always qualifies, since
/// it is decided on the negative program `lfp(p)`.
fn unate_kinds(p: &Program) -> Vec<Kind> {
    if Completion::new(p).is_unate() {
        vec![Kind::Stable, Kind::Supported]
    } else {
        vec![Kind::Stable]
    }
}

fn skip(why: &str) -> Result<Outcome> {
    Ok(Outcome::Skip(why.to_string()))
}

fn local_vs_oracle(p: &Program, limits: &Limits) -> Result<Outcome> {
    let n = p.atom_count();
    if n > LOCAL_ORACLE_MAX_ATOMS {
        return skip("more than 7 atoms");
    }
    for kind in [Kind::Stable, Kind::Supported] {
        let local = enumerate_trap_spaces(p, kind, limits)?;
        let oracle = oracle_trap_spaces(p, kind, limits)?;
        if local.items != oracle.items {
            return Ok(Outcome::Fail(format!(
                "{kind}: local {:?} vs oracle {:?}",
                local.compact(),
                oracle.compact()
            )));
        }
    }
    Ok(Outcome::Pass)
}

fn regular_routes(p: &Program, limits: &Limits) -> Result<Outcome> {
    let trap = enumerate_models(p, Semantics::Regular, Method::Trap, limits)?;
    let direct = enumerate_models(p, Semantics::Regular, Method::Direct, limits)?;
    let oracle = enumerate_models(p, Semantics::Regular, Method::Oracle, limits)?;
    Ok(Outcome::from_check(trap.items == oracle.items && direct.items == oracle.items, || {
        format!("trap {:?}, direct {:?}, oracle {:?}", trap.compact(), direct.compact(), oracle.compact())
    }))
}

fn l_stable_routes(p: &Program, limits: &Limits) -> Result<Outcome> {
    let trap = enumerate_models(p, Semantics::LStable, Method::Trap, limits)?;
    let direct = enumerate_models(p, Semantics::LStable, Method::Direct, limits)?;
    let oracle = enumerate_models(p, Semantics::LStable, Method::Oracle, limits)?;
    Ok(Outcome::from_check(trap.items == oracle.items && direct.items == oracle.items, || {
        format!("trap {:?}, direct {:?}, oracle {:?}", trap.compact(), direct.compact(), oracle.compact())
    }))
}

fn lfp_graph_invariance(p: &Program, limits: &Limits) -> Result<Outcome> {
    limits.graph(p.atom_count())?;
    let lfp = lfp_transform(p, limits.max_lfp_rules)?;
    let g = build_compiled(&CompiledProgram::new(p)?, Kind::Stable);
    let h = build_compiled(&CompiledProgram::new(&lfp)?, Kind::Stable);
    Ok(Outcome::from_check(g.successors() == h.successors(), || {
        "successor arrays differ".into()
    }))
}

fn negative_graphs(p: &Program, limits: &Limits) -> Result<Outcome> {
    if !p.is_negative() {
        return skip("program is not negative");
    }
    limits.graph(p.atom_count())?;
    let cp = CompiledProgram::new(p)?;
    let st = build_compiled(&cp, Kind::Stable);
    let sp = build_compiled(&cp, Kind::Supported);
    Ok(Outcome::from_check(st.successors() == sp.successors(), || {
        "stable and supported successors differ".into()
    }))
}

fn subset(a: &[Interp3], b: &[Interp3]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn model_inclusions(p: &Program, limits: &Limits) -> Result<Outcome> {
    let m = |s| enumerate_models(p, s, Method::Direct, limits);
    let (stm, sum) = (m(Semantics::Stable)?, m(Semantics::Supported)?);
    let (stpm, supm) = (m(Semantics::StablePartial)?, m(Semantics::SupportedPartial)?);
    if !subset(&stm.items, &sum.items) {
        return Ok(Outcome::Fail(format!("stable {:?} not within supported {:?}", stm.compact(), sum.compact())));
    }
    Ok(Outcome::from_check(subset(&stpm.items, &supm.items), || {
        format!("stable partial {:?} not within supported partial {:?}", stpm.compact(), supm.compact())
    }))
}

fn strict_class_structure(p: &Program, limits: &Limits) -> Result<Outcome> {
    limits.graph(p.atom_count())?;
    let cp = CompiledProgram::new(p)?;
    for kind in [Kind::Stable, Kind::Supported] {
        let g = build_compiled(&cp, kind);
        let classes = strict_classes(&g);
        if classes.is_empty() {
            return Ok(Outcome::Fail(format!("{kind}: no strict class")));
        }
        if classes != cycles_by_pointer_chasing(&g) {
            return Ok(Outcome::Fail(format!("{kind}: cycle finders disagree")));
        }
        for (i, c) in classes.iter().enumerate() {
            if !is_strict_class(&g, c)? {
                return Ok(Outcome::Fail(format!("{kind}: {c} fails the orbit characterization")));
            }
            if classes[i + 1..].iter().any(|d| !c.is_disjoint(d)) {
                return Ok(Outcome::Fail(format!("{kind}: {c} overlaps another strict class")));
            }
        }
        // every orbit closure is a trap set
        for s in 0..g.state_count() as u64 {
            let orbit = orbit_closure(&g, s);
            if !orbit.indices().iter().all(|&x| orbit.contains(g.succ(x))) {
                return Ok(Outcome::Fail(format!("{kind}: orbit of {} is not closed", g.compact(s))));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn minimal_inconsistent(p: &Program, limits: &Limits) -> Result<Outcome> {
    for kind in [Kind::Stable, Kind::Supported] {
        let min = minimal_trap_spaces(p, kind, limits)?;
        for (i, x) in min.items.iter().enumerate() {
            if let Some(y) = min.items[i + 1..].iter().find(|y| consistent(x, y)) {
                return Ok(Outcome::Fail(format!("{kind}: {x} and {y} are consistent")));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn trap_spaces_contain_class(p: &Program, limits: &Limits) -> Result<Outcome> {
    limits.graph(p.atom_count())?;
    let cp = CompiledProgram::new(p)?;
    for kind in [Kind::Stable, Kind::Supported] {
        let classes = strict_classes(&build_compiled(&cp, kind));
        let all: TrapSpaceSet = enumerate_trap_spaces(p, kind, limits)?;
        for t in &all.items {
            let holds = classes
                .iter()
                .any(|c| c.interps().iter().all(|s| t.contains(s)));
            if !holds {
                return Ok(Outcome::Fail(format!("{kind}: {t} contains no strict class")));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn covers_are_partial_models(p: &Program, limits: &Limits) -> Result<Outcome> {
    limits.graph(p.atom_count())?;
    let cp = CompiledProgram::new(p)?;
    for kind in unate_kinds(p) {
        let c = kind_completion(p, kind, limits)?;
        for class in strict_classes(&build_compiled(&cp, kind)) {
            let cover = percolate(&c, crate::trapspaces::join(&class.interps())?);
            let ok = match kind {
                Kind::Stable => cp.is_stable_partial(&cover),
                Kind::Supported => cp.is_supported_partial(&cover),
            };
            if !ok {
                return Ok(Outcome::Fail(format!("{kind}: cover {cover} of {class} is not a partial model")));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn existence(p: &Program, limits: &Limits) -> Result<Outcome> {
    let regular = enumerate_models(p, Semantics::Regular, Method::Trap, limits)?;
    let l_stable = enumerate_models(p, Semantics::LStable, Method::Trap, limits)?;
    let supported = minimal_trap_spaces(p, Kind::Supported, limits)?;
    Ok(Outcome::from_check(
        !regular.items.is_empty() && !l_stable.items.is_empty() && !supported.items.is_empty(),
        || "a semantics came out empty".into(),
    ))
}

fn f_convergence(p: &Program, limits: &Limits) -> Result<Outcome> {
    if p.atom_count() > LOCAL_ORACLE_MAX_ATOMS {
        return skip("more than 7 atoms");
    }
    if !Completion::new(p).is_unate() {
        return skip("completion is not unate");
    }
    let n = p.atom_count();
    let cp = CompiledProgram::new(p)?;
    for t in enumerate_trap_spaces(p, Kind::Supported, limits)?.items {
        let run = percolate_to_supported_partial(p, &t)?;
        if run.iterations > n + 1 || !cp.is_supported_partial(&run.model) || !leq_s(&run.model, &t) {
            return Ok(Outcome::Fail(format!(
                "from {t}: reached {} after {} iterations",
                run.model, run.iterations
            )));
        }
    }
    Ok(Outcome::Pass)
}

/// All subsets of `0..count` with 1 to `max` elements.
pub fn small_subsets(count: u64, max: usize) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut frontier: Vec<Vec<u64>> = (0..count).map(|s| vec![s]).collect();
    for _ in 0..max {
        out.extend(frontier.iter().cloned());
        frontier = frontier
            .iter()
            .flat_map(|set| {
                let last = *set.last().expect("non-empty");
                (last + 1..count).map(move |s| {
                    let mut grown = set.clone();
                    grown.push(s);
                    grown
                })
            })
            .collect();
    }
    out
}

fn cover_vs_oracle(p: &Program, limits: &Limits) -> Result<Outcome> {
    let n = p.atom_count();
    if n > COVER_ORACLE_MAX_ATOMS {
        return skip("more than 5 atoms");
    }
    for kind in [Kind::Stable, Kind::Supported] {
        let all = oracle_trap_spaces(p, kind, limits)?;
        let c = kind_completion(p, kind, limits)?;
        for subset in small_subsets(1 << n, COVER_ORACLE_MAX_STATES) {
            let states: Vec<Interp2> = subset.iter().map(|&s| Interp2::from_raw(n, s)).collect();
            let fast = percolate(&c, crate::trapspaces::join(&states)?);
            let slow = cover_from(&all.items, &states)?;
            if fast != slow {
                return Ok(Outcome::Fail(format!("{kind} cover of {subset:?}: {fast} vs {slow}")));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn minimal_supported_vs_supm(p: &Program, limits: &Limits) -> Result<Outcome> {
    if !Completion::new(p).is_unate() {
        return skip("completion is not unate");
    }
    let min = minimal_trap_spaces(p, Kind::Supported, limits)?;
    let supm = enumerate_models(p, Semantics::SupportedPartial, Method::Direct, limits)?;
    let minimal_supm: BTreeSet<String> = supm
        .items
        .iter()
        .filter(|x| !supm.items.iter().any(|y| y != *x && leq_s(y, x)))
        .map(Interp3::to_compact)
        .collect();
    let got: BTreeSet<String> = min.compact().into_iter().collect();
    Ok(Outcome::from_check(got == minimal_supm, || {
        format!("minimal supported trap spaces {got:?} vs minimal supported partial models {minimal_supm:?}")
    }))
}
