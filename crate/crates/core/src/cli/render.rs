//! Text, JSON and CSV renderings of reports.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::oracle::{Counterexample, OracleReport};
use crate::sector::{FamilyReport, Region, Status};
use crate::types::{SectorSpec, SignPattern};
use crate::vertexgen::CriticalWalk;

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

fn coeff_list(coeffs: &[f64]) -> String {
    let items: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    format!("[{}]", items.join(", "))
}

#[derive(Serialize)]
struct VerticesDoc<'a> {
    p: u32,
    q: u32,
    degree: usize,
    starts: Vec<usize>,
    patterns: Vec<&'a SignPattern>,
}

pub fn vertices_json(sector: SectorSpec, degree: usize, walks: &[CriticalWalk]) -> String {
    json(&VerticesDoc {
        p: sector.p(),
        q: sector.q(),
        degree,
        starts: walks.iter().map(|w| w.start).collect(),
        patterns: walks.iter().map(|w| &w.pattern).collect(),
    })
}

pub fn check_text(report: &FamilyReport) -> String {
    let mut s = String::new();
    let sector = report.sector;
    let degree = report.patterns.first().map_or(0, |p| p.len() - 1);
    let _ = writeln!(
        s,
        "sector p/q = {sector}, boundary angle {:.9} rad",
        sector.boundary_angle()
    );
    let _ = writeln!(s, "degree {degree}, {} critical vertices", report.patterns.len());
    if report.negated {
        let _ = writeln!(s, "note: bounds were negated (leading interval was negative)");
    }
    for (i, v) in report.per_vertex.iter().enumerate() {
        let _ = writeln!(
            s,
            "\nvertex {i}  {}  {}  margin {:.9} rad",
            v.vertex.pattern, v.verdict.status, v.verdict.margin
        );
        let _ = writeln!(s, "  coeffs: {}", coeff_list(&v.vertex.coeffs));
        let roots: Vec<String> = v.verdict.per_root.iter().map(|(z, _)| complex(*z)).collect();
        let _ = writeln!(s, "  roots:  {}", roots.join(", "));
        if !v.verdict.converged {
            let _ = writeln!(s, "  warning: root solver did not converge");
        }
    }
    let _ = writeln!(
        s,
        "\nfamily: {} (worst vertex {}, margin {:.9} rad)",
        report.family_status,
        report.worst_vertex,
        report.worst_margin()
    );
    s
}

pub fn check_json(report: &FamilyReport) -> String {
    json(report)
}

#[derive(Serialize)]
struct CriticalSummary<'a> {
    status: Status,
    vertices: usize,
    worst_vertex: usize,
    worst_margin: f64,
    patterns: &'a [SignPattern],
    /// First unstable critical vertex, if any.
    counterexample: Option<Counterexample>,
}

fn critical_summary(report: &FamilyReport) -> CriticalSummary<'_> {
    let counterexample = report
        .per_vertex
        .iter()
        .enumerate()
        .find(|(_, v)| v.verdict.status == Status::Unstable)
        .map(|(i, v)| Counterexample {
            coeffs: v.vertex.coeffs.clone(),
            worst_root: v.verdict.worst_root,
            index: i as u64,
        });
    CriticalSummary {
        status: report.family_status,
        vertices: report.per_vertex.len(),
        worst_vertex: report.worst_vertex,
        worst_margin: report.worst_margin(),
        patterns: &report.patterns,
        counterexample,
    }
}

pub struct Comparison<'a> {
    pub report: &'a FamilyReport,
    pub exhaustive: &'a OracleReport,
    pub monte_carlo: &'a OracleReport,
    pub agree: bool,
}

#[derive(Serialize)]
struct ComparisonDoc<'a> {
    sector: SectorSpec,
    negated: bool,
    critical: CriticalSummary<'a>,
    exhaustive: &'a OracleReport,
    monte_carlo: &'a OracleReport,
    agree: bool,
}

impl Comparison<'_> {
    pub fn json(&self) -> String {
        json(&ComparisonDoc {
            sector: self.report.sector,
            negated: self.report.negated,
            critical: critical_summary(self.report),
            exhaustive: self.exhaustive,
            monte_carlo: self.monte_carlo,
            agree: self.agree,
        })
    }

    pub fn text(&self) -> String {
        let critical = critical_summary(self.report);
        let mut s = String::new();
        let _ = writeln!(s, "sector p/q = {}", self.report.sector);
        let _ = writeln!(s, "{:<12} {:<9} {:>10} {:>16}", "method", "status", "checked", "worst margin");
        let _ = writeln!(
            s,
            "{:<12} {:<9} {:>10} {:>16.9}",
            "critical",
            critical.status.to_string(),
            critical.vertices,
            critical.worst_margin
        );
        for (name, r) in [("exhaustive", self.exhaustive), ("monte-carlo", self.monte_carlo)] {
            let _ = writeln!(
                s,
                "{:<12} {:<9} {:>10} {:>16.9}",
                name,
                r.status.to_string(),
                r.checked_count,
                r.worst_margin
            );
        }
        if let Some(seed) = self.monte_carlo.seed {
            let _ = writeln!(s, "monte-carlo seed {seed}");
        }
        let counterexamples = [
            ("critical", critical.counterexample.as_ref()),
            ("exhaustive", self.exhaustive.counterexample.as_ref()),
            ("monte-carlo", self.monte_carlo.counterexample.as_ref()),
        ];
        for (name, cx) in counterexamples {
            if let Some(cx) = cx {
                let _ = writeln!(
                    s,
                    "{name} counterexample: coeffs {} root {}",
                    coeff_list(&cx.coeffs),
                    complex(cx.worst_root)
                );
            }
        }
        let _ = writeln!(
            s,
            "{}",
            if self.agree {
                "agreement: yes"
            } else {
                "agreement: NO (critical-vertex verdict contradicts an oracle)"
            }
        );
        s
    }
}

pub const CSV_HEADER: &str = "vertex_index,root_re,root_im,margin_rad,class";

fn region_label(region: Region) -> &'static str {
    match region {
        Region::Inside => "inside",
        Region::Outside => "outside",
        Region::Boundary => "boundary",
    }
}

/// One row per root of each distinct critical vertex polynomial (roots sorted
/// by real then imaginary part), then the two boundary rays at `+-p pi / q`
/// drawn out to a radius covering every root.
pub fn roots_csv(report: &FamilyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{CSV_HEADER}");
    let mut seen: Vec<&[f64]> = Vec::new();
    let mut reach = 1.0f64;
    for (i, v) in report.per_vertex.iter().enumerate() {
        if seen.contains(&v.vertex.coeffs.as_slice()) {
            continue;
        }
        seen.push(&v.vertex.coeffs);
        let mut rows = v.verdict.per_root.clone();
        rows.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
        for (z, class) in rows {
            reach = reach.max(1.25 * z.norm());
            let _ = writeln!(
                s,
                "{i},{},{},{},{}",
                z.re,
                z.im,
                class.angular_margin,
                region_label(class.region)
            );
        }
    }
    let angle = report.sector.boundary_angle();
    for a in [angle, -angle] {
        let end = Complex64::from_polar(reach, a);
        let _ = writeln!(s, "boundary,{},{},0,boundary_ray", end.re, end.im);
    }
    s
}
