//! Critical vertex construction.
//!
//! Place `q` plus signs followed by `q` minus signs on a circle, start at any
//! of the `2q` positions and walk `n` steps of length `p`, recording the sign
//! at the start and after every step. Each start yields the superscript (sign
//! pattern) of one critical vertex; duplicates are dropped, keeping the first
//! start that produced them.
//!
//! "Clockwise" is index-increasing traversal of the circle.

use thiserror::Error;

use crate::types::{IntervalFamily, SectorSpec, Sign, SignPattern, VertexPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VertexError {
    #[error("start {start} is outside the circle of {len} signs")]
    StartOutOfRange { start: usize, len: usize },

    #[error("pattern has {pattern} signs but the family has {family} coefficients")]
    LengthMismatch { pattern: usize, family: usize },
}

/// `2q` signs: positions `0..q` hold `Plus`, positions `q..2q` hold `Minus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignCircle {
    signs: Vec<Sign>,
}

impl SignCircle {
    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Sign at position `k`, taken modulo the circle length.
    pub fn at(&self, k: usize) -> Sign {
        self.signs[k % self.signs.len()]
    }
}

pub fn build_sign_circle(sector: SectorSpec) -> SignCircle {
    let q = sector.q() as usize;
    let mut signs = vec![Sign::Plus; q];
    signs.resize(2 * q, Sign::Minus);
    SignCircle { signs }
}

/// Walk `n` steps of length `step` from `start`, returning `n + 1` signs:
/// `pattern[i] = circle[(start + i * step) mod 2q]`.
pub fn walk(circle: &SignCircle, start: usize, step: u32, n: usize) -> Result<SignPattern, VertexError> {
    let len = circle.len();
    if start >= len {
        return Err(VertexError::StartOutOfRange { start, len });
    }
    let step = step as usize % len;
    let mut pos = start;
    let mut signs = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        signs.push(circle.signs[pos]);
        pos = (pos + step) % len;
    }
    Ok(SignPattern::new(signs))
}

/// A critical pattern together with the first start that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalWalk {
    pub start: usize,
    pub pattern: SignPattern,
}

/// All `2q` walks in start order with exact duplicates removed.
pub fn critical_walks(sector: SectorSpec, n: usize) -> Vec<CriticalWalk> {
    let circle = build_sign_circle(sector);
    let mut out: Vec<CriticalWalk> = Vec::with_capacity(circle.len());
    for start in 0..circle.len() {
        let pattern = walk(&circle, start, sector.p(), n).expect("start < circle length");
        // At most 2q entries, so the linear scan is cheaper than hashing.
        if !out.iter().any(|w| w.pattern == pattern) {
            out.push(CriticalWalk { start, pattern });
        }
    }
    out
}

/// Sign patterns of the critical vertices for a degree-`n` family, in start order.
pub fn critical_patterns(sector: SectorSpec, n: usize) -> Vec<SignPattern> {
    critical_walks(sector, n).into_iter().map(|w| w.pattern).collect()
}

/// Select `lower[i]` where the pattern has `Minus`, `upper[i]` where it has `Plus`.
pub fn instantiate(family: &IntervalFamily, pattern: &SignPattern) -> Result<VertexPolynomial, VertexError> {
    if pattern.len() != family.len() {
        return Err(VertexError::LengthMismatch {
            pattern: pattern.len(),
            family: family.len(),
        });
    }
    let coeffs = pattern
        .signs()
        .iter()
        .zip(family.lower().iter().zip(family.upper()))
        .map(|(s, (&lo, &hi))| match s {
            Sign::Minus => lo,
            Sign::Plus => hi,
        })
        .collect();
    Ok(VertexPolynomial {
        coeffs,
        pattern: pattern.clone(),
    })
}
