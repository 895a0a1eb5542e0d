//! Critical vertex polynomials for left-sector stability of interval
//! polynomials.
//!
//! An interval polynomial `a_0 + a_1 s + ... + a_n s^n`, `a_i in [lo_i, hi_i]`,
//! has all of its members' roots in the open sector
//! `{ r e^{j theta} : r > 0, p pi / q < |theta| <= pi }` (`1/2 <= p/q < 1`) iff at
//! most `2q` specific vertex polynomials do. [`vertexgen`] constructs those
//! vertices, [`sector::family_check`] root-checks them, and [`oracle`]
//! cross-validates the verdict by brute force.
//!
//! Coefficients are in ascending powers throughout: index `i` multiplies `s^i`.

pub mod cli;
pub mod oracle;
pub mod rootfind;
pub mod sector;
pub mod types;
pub mod vertexgen;

pub use oracle::{exhaustive_vertex_check, monte_carlo_check, routh_hurwitz, OracleReport, RouthOutcome};
pub use rootfind::{roots, RootSet};
pub use sector::{family_check, polynomial_verdict, FamilyReport, Status, StabilityVerdict, Tolerances};
pub use types::{validate_family, validate_sector, IntervalFamily, SectorSpec, Sign, SignPattern, VertexPolynomial};
pub use vertexgen::{build_sign_circle, critical_patterns, instantiate, walk};
