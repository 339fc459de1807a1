//! Trap spaces, transition graphs and the partial-model semantics of ground
//! normal logic programs.
//!
//! A program is parsed into a [`Program`], compiled into bitmask form by
//! [`CompiledProgram`], and then examined through its stable and supported
//! transition graphs ([`dynamics`]), its trap spaces ([`trapspaces`]) and
//! its two- and three-valued models ([`semantics`]). Every fast route has a
//! brute-force counterpart in [`oracle`], and [`verify`] runs the two
//! against each other.
//!
//! ```
//! use trapsem::{parse_program, strict_classes, build_graph, Kind, Limits};
//!
//! let p = parse_program("a :- b.\nb :- a.").unwrap();
//! let g = build_graph(&p, Kind::Supported, &Limits::default()).unwrap();
//! let classes: Vec<Vec<String>> = strict_classes(&g).iter().map(|c| c.compact()).collect();
//! assert_eq!(classes, [vec!["00"], vec!["01", "10"], vec!["11"]]);
//! ```

pub mod cli;
pub mod dynamics;
mod error;
pub mod interp;
mod limits;
pub mod operators;
pub mod oracle;
pub mod program;
pub mod semantics;
pub mod trapspaces;
pub mod verify;

pub use dynamics::{build_graph, strict_classes, Kind, StateSet, TransitionGraph};
pub use error::{Error, Result};
pub use interp::{Interp2, Interp3, Value3};
pub use limits::{Limits, MAX_ATOMS};
pub use operators::CompiledProgram;
pub use program::{completion, lfp_transform, parse_program, AtomId, AtomTable, Completion, NegativeProgram, Program, Rule};
pub use semantics::{enumerate_models, Method, ModelSet, Semantics};
pub use trapspaces::{TrapMethod, TrapSpaceSet};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/programs.md")]
    mod programs {}
    #[doc = include_str!("../../../book/src/interpretations.md")]
    mod interpretations {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/trap-spaces.md")]
    mod trap_spaces {}
    #[doc = include_str!("../../../book/src/semantics.md")]
    mod semantics {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
