//! Model checks and model enumeration for the stable, supported, partial,
//! regular and L-stable semantics.
//!
//! Regular and L-stable models can be computed along three independent
//! routes (see [`Method`]); they must always agree.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interp::{leq_s, Interp2, Interp3};
use crate::limits::Limits;
use crate::operators::CompiledProgram;
use crate::program::Program;
use crate::trapspaces::{minimal_trap_spaces, scan3, sorted_unique, u_minimal, u_minimal_stable_trap_spaces};
use crate::dynamics::Kind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    Stable,
    Supported,
    StablePartial,
    SupportedPartial,
    Regular,
    LStable,
}

impl Semantics {
    pub const ALL: [Semantics; 6] = [
        Semantics::Stable,
        Semantics::Supported,
        Semantics::StablePartial,
        Semantics::SupportedPartial,
        Semantics::Regular,
        Semantics::LStable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::Stable => "stable",
            Semantics::Supported => "supported",
            Semantics::StablePartial => "stable-partial",
            Semantics::SupportedPartial => "supported-partial",
            Semantics::Regular => "regular",
            Semantics::LStable => "l-stable",
        }
    }

    pub fn is_two_valued(self) -> bool {
        matches!(self, Semantics::Stable | Semantics::Supported)
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Semantics::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown semantics `{s}`")))
    }
}

/// Route used to compute a [`ModelSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Exhaustive scan with the defining check of the semantics.
    Direct,
    /// Through minimal (or `<=u`-minimal) stable trap spaces.
    Trap,
    /// Through an alternative characterization.
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Trap => "trap",
            Method::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "trap" => Ok(Method::Trap),
            "oracle" => Ok(Method::Oracle),
            _ => Err(Error::Unsupported(format!("unknown method `{s}`"))),
        }
    }
}

/// Models of one semantics, deduplicated and sorted by compact string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSet {
    pub semantics: Semantics,
    pub method: Method,
    pub items: Vec<Interp3>,
}

impl ModelSet {
    fn new(semantics: Semantics, method: Method, items: impl IntoIterator<Item = Interp3>) -> Self {
        let items = sorted_unique(items);
        debug_assert!(!semantics.is_two_valued() || items.iter().all(Interp3::is_two_valued));
        ModelSet { semantics, method, items }
    }

    pub fn compact(&self) -> Vec<String> {
        self.items.iter().map(Interp3::to_compact).collect()
    }

    /// Items as two-valued interpretations; `None` if any item is partial.
    pub fn two_valued(&self) -> Option<Vec<Interp2>> {
        self.items.iter().map(Interp3::to_interp2).collect()
    }

    /// `{"semantics", "method", "items", "count", "atoms"}`; two-valued semantics also
    /// carry the true-atom set of each item under `"true_atoms"`.
    pub fn to_json(&self, atoms: &crate::program::AtomTable) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            semantics: Semantics,
            method: Method,
            items: Vec<String>,
            count: usize,
            atoms: &'a [String],
            #[serde(skip_serializing_if = "Option::is_none")]
            true_atoms: Option<Vec<Vec<&'a str>>>,
        }
        let true_atoms = if self.semantics.is_two_valued() {
            self.two_valued()
                .map(|items| items.iter().map(|i| i.true_atoms(atoms)).collect())
        } else {
            None
        };
        serde_json::to_string(&Dump {
            semantics: self.semantics,
            method: self.method,
            items: self.compact(),
            count: self.items.len(),
            atoms: atoms.names(),
            true_atoms,
        })
        .expect("plain data serializes")
    }
}

/// `i` is the least model of its reduct.
pub fn is_stable_model(p: &Program, i: &Interp2) -> Result<bool> {
    Error::check_width(p.atom_count(), i.len())?;
    let cp = CompiledProgram::new(p)?;
    Ok(cp.stable_step(i.index()) == i.index())
}

/// `i` is a fixpoint of `T_P`.
pub fn is_supported_model(p: &Program, i: &Interp2) -> Result<bool> {
    Error::check_width(p.atom_count(), i.len())?;
    let cp = CompiledProgram::new(p)?;
    Ok(cp.supported_step(i.index()) == i.index())
}

/// `i` is a fixpoint of `f_P`, i.e. a three-valued model of the completion.
pub fn is_supported_partial(p: &Program, i: &Interp3) -> Result<bool> {
    Error::check_width(p.atom_count(), i.len())?;
    Ok(CompiledProgram::new(p)?.is_supported_partial(i))
}

/// `i` is the least three-valued model of its three-valued reduct.
pub fn is_stable_partial(p: &Program, i: &Interp3) -> Result<bool> {
    Error::check_width(p.atom_count(), i.len())?;
    Ok(CompiledProgram::new(p)?.is_stable_partial(i))
}

fn scan2<F>(n: usize, keep: F) -> Vec<Interp3>
where
    F: Fn(u64) -> bool + Sync,
{
    (0..1u64 << n)
        .into_par_iter()
        .filter(|&s| keep(s))
        .map(|s| Interp3::from(Interp2::from_raw(n, s)))
        .collect()
}

/// Proper `<=s`-refinements of `i`: every way to fix at least one of its
/// undefined atoms.
fn strict_refinements(i: &Interp3) -> impl Iterator<Item = Interp3> + '_ {
    let undefined = i.undefined_atoms();
    let total = 3u64.pow(undefined.len() as u32);
    // digit 2 keeps an atom undefined; index total-1 is `i` itself
    (0..total.saturating_sub(1)).map(move |mut k| {
        let (mut d, mut t) = (i.defined_mask(), i.truth_mask());
        for a in &undefined {
            match k % 3 {
                0 => d |= a.bit(),
                1 => {
                    d |= a.bit();
                    t |= a.bit();
                }
                _ => {}
            }
            k /= 3;
        }
        Interp3::from_raw(i.len(), d, t)
    })
}

fn stable_partial_scan(cp: &CompiledProgram, n: usize) -> Vec<Interp3> {
    scan3(n, |i| cp.is_stable_partial(i))
}

/// Models of `semantics` computed along `method`.
///
/// | semantics | direct | trap | oracle |
/// |---|---|---|---|
/// | stable, supported | `2^n` scan | - | two-valued partial models |
/// | stable-partial, supported-partial | `3^n` scan | - | - |
/// | regular | scan + refinement probe | minimal stable trap spaces | `<=s`-minimal stable partial |
/// | l-stable | scan + undefined-set test | `<=u`-minimal regular | `<=u`-minimal stable partial |
pub fn enumerate_models(p: &Program, semantics: Semantics, method: Method, limits: &Limits) -> Result<ModelSet> {
    let n = p.atom_count();
    let cp = CompiledProgram::new(p)?;
    let unsupported = || {
        Err(Error::Unsupported(format!(
            "method `{}` is not available for semantics `{}`",
            method.as_str(),
            semantics.as_str()
        )))
    };
    let items: Vec<Interp3> = match (semantics, method) {
        (Semantics::Stable, Method::Direct) => {
            limits.enum2(n)?;
            scan2(n, |s| cp.stable_step(s) == s)
        }
        (Semantics::Supported, Method::Direct) => {
            limits.enum2(n)?;
            scan2(n, |s| cp.supported_step(s) == s)
        }
        (Semantics::Stable, Method::Oracle) => {
            limits.enum2(n)?;
            scan2(n, |s| cp.is_stable_partial(&Interp3::from(Interp2::from_raw(n, s))))
        }
        (Semantics::Supported, Method::Oracle) => {
            limits.enum2(n)?;
            scan2(n, |s| cp.is_supported_partial(&Interp3::from(Interp2::from_raw(n, s))))
        }
        (Semantics::StablePartial, Method::Direct) => {
            limits.enum3(n)?;
            stable_partial_scan(&cp, n)
        }
        (Semantics::SupportedPartial, Method::Direct) => {
            limits.enum3(n)?;
            scan3(n, |i| cp.is_supported_partial(i))
        }
        (Semantics::Regular, Method::Direct) => {
            limits.enum3(n)?;
            stable_partial_scan(&cp, n)
                .into_par_iter()
                .filter(|i| !strict_refinements(i).any(|j| cp.is_stable_partial(&j)))
                .collect()
        }
        (Semantics::Regular, Method::Oracle) => {
            limits.enum3(n)?;
            let all = stable_partial_scan(&cp, n);
            all.iter()
                .filter(|x| !all.iter().any(|y| y != *x && leq_s(y, x)))
                .copied()
                .collect()
        }
        (Semantics::Regular, Method::Trap) => minimal_trap_spaces(p, Kind::Stable, limits)?.items,
        (Semantics::LStable, Method::Direct) => {
            limits.enum3(n)?;
            let all = stable_partial_scan(&cp, n);
            u_minimal(&all)
        }
        (Semantics::LStable, Method::Oracle) => {
            limits.enum3(n)?;
            // pointwise value order <=u; minimal means nothing strictly below
            let all = stable_partial_scan(&cp, n);
            all.iter()
                .filter(|x| {
                    !all.iter().any(|y| {
                        crate::interp::leq_u(y, x) && !crate::interp::leq_u(x, y)
                    })
                })
                .copied()
                .collect()
        }
        (Semantics::LStable, Method::Trap) => u_minimal_stable_trap_spaces(p, limits)?.items,
        _ => return unsupported(),
    };
    Ok(ModelSet::new(semantics, method, items))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::parse_program;

    const P1: &str = "a :- b.\nb :- a.";
    const P2: &str = "a :- not b.\nb :- not a.\nc :- not c.";

    fn p(text: &str) -> Program {
        parse_program(text).unwrap()
    }

    fn i3(s: &str) -> Interp3 {
        Interp3::from_compact(s, s.len()).unwrap()
    }

    fn i2(s: &str) -> Interp2 {
        i3(s).to_interp2().unwrap()
    }

    fn models(text: &str, sem: Semantics, method: Method) -> Vec<String> {
        enumerate_models(&p(text), sem, method, &Limits::default()).unwrap().compact()
    }

    #[test]
    fn stable_model_checks() {
        assert!(is_stable_model(&p("a :- not b.\nb :- not a."), &i2("10")).unwrap());
        let p3 = p("c :- not c.");
        assert!(!is_stable_model(&p3, &i2("0")).unwrap());
        assert!(!is_stable_model(&p3, &i2("1")).unwrap());
        assert!(is_stable_model(&p(P1), &i2("00")).unwrap());
    }

    #[test]
    fn supported_model_checks() {
        assert!(is_supported_model(&p(P1), &i2("11")).unwrap());
        assert!(!is_supported_model(&p(P1), &i2("01")).unwrap());
    }

    #[test]
    fn partial_model_checks() {
        assert!(is_supported_partial(&p(P1), &i3("**")).unwrap());
        assert!(!is_supported_partial(&p(P1), &i3("0*")).unwrap());
        assert!(is_supported_partial(&p(P2), &i3("01*")).unwrap());
        for s in ["***", "01*", "10*"] {
            assert!(is_stable_partial(&p(P2), &i3(s)).unwrap(), "{s}");
        }
        assert!(!is_stable_partial(&p(P2), &i3("00*")).unwrap());
    }

    #[test]
    fn stable_partial_models_of_even_and_odd_loop() {
        assert_eq!(models(P2, Semantics::StablePartial, Method::Direct), ["***", "01*", "10*"]);
    }

    #[test]
    fn regular_and_l_stable_routes_agree() {
        for method in [Method::Direct, Method::Trap, Method::Oracle] {
            assert_eq!(models(P2, Semantics::Regular, method), ["01*", "10*"]);
            assert_eq!(models(P2, Semantics::LStable, method), ["01*", "10*"]);
        }
    }

    #[test]
    fn two_valued_models_of_cycle() {
        for method in [Method::Direct, Method::Oracle] {
            assert_eq!(models(P1, Semantics::Supported, method), ["00", "11"]);
            assert_eq!(models(P1, Semantics::Stable, method), ["00"]);
        }
    }

    #[test]
    fn unsupported_routes() {
        for sem in [Semantics::Stable, Semantics::StablePartial, Semantics::SupportedPartial] {
            assert!(matches!(
                enumerate_models(&p(P1), sem, Method::Trap, &Limits::default()),
                Err(Error::Unsupported(_))
            ));
        }
    }

    #[test]
    fn scan_caps() {
        let limits = Limits { max_atoms_enum3: 2, ..Limits::default() };
        assert!(matches!(
            enumerate_models(&p(P2), Semantics::StablePartial, Method::Direct, &limits),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn json_schema() {
        let prog = p(P1);
        let set = enumerate_models(&prog, Semantics::Supported, Method::Direct, &Limits::default()).unwrap();
        assert_eq!(
            set.to_json(prog.atoms()),
            r#"{"semantics":"supported","method":"direct","items":["00","11"],"count":2,"atoms":["a","b"],"true_atoms":[[],["a","b"]]}"#
        );
    }

    #[test]
    fn refinements_are_strict() {
        let all: Vec<Interp3> = strict_refinements(&i3("*1*")).collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|j| leq_s(j, &i3("*1*")) && *j != i3("*1*")));
        assert_eq!(strict_refinements(&i3("01")).count(), 0);
    }
}
