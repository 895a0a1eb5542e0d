//! Sector membership of roots and the stability verdicts built on it.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rootfind::{self, RootError};
use crate::types::{IntervalFamily, SectorSpec, SignPattern, VertexPolynomial};
use crate::vertexgen::{self, VertexError};

/// Numerical tolerances for classifying roots against the open sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Half-width, in radians, of the band around the boundary rays that is
    /// reported as `Boundary`.
    pub angle: f64,
    /// Roots with modulus at most `magnitude * root scale` count as the origin.
    pub magnitude: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            angle: 1e-9,
            magnitude: 1e-12,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error(transparent)]
    Root(#[from] RootError),

    #[error(transparent)]
    Vertex(#[from] VertexError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Inside,
    Outside,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointClass {
    pub region: Region,
    /// `|arg z| - p pi / q`; positive inside the sector.
    pub angular_margin: f64,
    /// `z` was within the magnitude tolerance of the origin.
    pub at_origin: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Status {
    Stable,
    Marginal,
    Unstable,
}

impl Status {
    /// Unstable if any is unstable, stable if all are stable, else marginal.
    pub fn aggregate<I: IntoIterator<Item = Status>>(statuses: I) -> Status {
        statuses
            .into_iter()
            .fold(Status::Stable, |acc, s| acc.max(s))
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Stable => "Stable",
            Status::Marginal => "Marginal",
            Status::Unstable => "Unstable",
        })
    }
}

pub fn classify_point(
    z: Complex64,
    sector: SectorSpec,
    angle_tolerance: f64,
    magnitude_tolerance: f64,
) -> PointClass {
    let boundary = sector.boundary_angle();
    if z.norm() <= magnitude_tolerance {
        return PointClass {
            region: Region::Outside,
            angular_margin: -boundary,
            at_origin: true,
        };
    }
    // |arg z| in [0, pi], identical for z and its conjugate.
    let margin = z.im.abs().atan2(z.re) - boundary;
    let region = if margin.abs() <= angle_tolerance {
        Region::Boundary
    } else if margin > 0.0 {
        Region::Inside
    } else {
        Region::Outside
    };
    PointClass {
        region,
        angular_margin: margin,
        at_origin: false,
    }
}

/// Root-modulus scale `max_i |a_i / a_n|^(1/(n-i))` (at least 1e-300).
pub fn root_scale(coeffs: &[f64]) -> f64 {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].abs();
    coeffs[..n]
        .iter()
        .enumerate()
        .map(|(i, c)| (c.abs() / lead).powf(1.0 / (n - i) as f64))
        .fold(1e-300, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub status: Status,
    /// Smallest angular margin over all roots.
    pub margin: f64,
    pub worst_root: Complex64,
    pub per_root: Vec<(Complex64, PointClass)>,
    pub converged: bool,
}

pub fn polynomial_verdict(
    coeffs: &[f64],
    sector: SectorSpec,
    tolerances: &Tolerances,
) -> Result<StabilityVerdict, RootError> {
    let found = rootfind::roots(coeffs)?;
    let magnitude_tolerance = tolerances.magnitude * root_scale(coeffs);
    let per_root: Vec<(Complex64, PointClass)> = found
        .roots
        .iter()
        .map(|&z| (z, classify_point(z, sector, tolerances.angle, magnitude_tolerance)))
        .collect();

    let (worst_root, worst) = per_root
        .iter()
        .min_by(|a, b| a.1.angular_margin.total_cmp(&b.1.angular_margin))
        .copied()
        .expect("degree >= 1");

    // A root at the origin sits on the closure of the sector, so it is
    // marginal rather than a certified instability.
    let status = if !found.converged {
        Status::Marginal
    } else if per_root
        .iter()
        .any(|(_, c)| c.region == Region::Outside && !c.at_origin)
    {
        Status::Unstable
    } else if per_root.iter().all(|(_, c)| c.region == Region::Inside) {
        Status::Stable
    } else {
        Status::Marginal
    };

    Ok(StabilityVerdict {
        status,
        margin: worst.angular_margin,
        worst_root,
        per_root,
        converged: found.converged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexVerdict {
    pub vertex: VertexPolynomial,
    pub verdict: StabilityVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub sector: SectorSpec,
    pub patterns: Vec<SignPattern>,
    pub per_vertex: Vec<VertexVerdict>,
    pub family_status: Status,
    /// Index into `per_vertex` of the vertex with the smallest margin.
    pub worst_vertex: usize,
    /// The family's bounds were negated during validation.
    pub negated: bool,
}

impl FamilyReport {
    pub fn worst_margin(&self) -> f64 {
        self.per_vertex[self.worst_vertex].verdict.margin
    }
}

/// Decide stability of the whole family from its critical vertices only.
pub fn family_check(
    family: &IntervalFamily,
    sector: SectorSpec,
    tolerances: &Tolerances,
) -> Result<FamilyReport, CheckError> {
    let patterns = vertexgen::critical_patterns(sector, family.degree());
    let per_vertex = patterns
        .par_iter()
        .map(|pattern| {
            let vertex = vertexgen::instantiate(family, pattern)?;
            let verdict = polynomial_verdict(&vertex.coeffs, sector, tolerances)?;
            Ok(VertexVerdict { vertex, verdict })
        })
        .collect::<Result<Vec<_>, CheckError>>()?;

    let family_status = Status::aggregate(per_vertex.iter().map(|v| v.verdict.status));
    let worst_vertex = per_vertex
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.verdict.margin.total_cmp(&b.1.verdict.margin))
        .map(|(i, _)| i)
        .unwrap_or(0);

    Ok(FamilyReport {
        sector,
        patterns,
        per_vertex,
        family_status,
        worst_vertex,
        negated: family.negated(),
    })
}
