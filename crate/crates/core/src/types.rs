//! Domain types: the damping sector, the coefficient box of an interval
//! polynomial, sign patterns selecting vertices of that box, and the vertex
//! polynomials they select.
//!
//! Coefficients are always stored in ascending powers: index `i` holds the
//! coefficient of `s^i`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Index, Neg};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest accepted `q`; larger values only produce pathological circles.
pub const MAX_SECTOR_Q: i64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ValidationError {
    #[error("sector p and q must be positive (got p = {p}, q = {q})")]
    NonPositive { p: i64, q: i64 },

    #[error("sector ratio p/q = {p}/{q} must satisfy 1/2 <= p/q < 1 with q <= {max}", max = MAX_SECTOR_Q)]
    RatioOutOfRange { p: i64, q: i64 },

    #[error("sector p = {p} and q = {q} are not coprime (gcd = {gcd})")]
    NotCoprime { p: i64, q: i64, gcd: i64 },

    #[error("lower has {lower} coefficients but upper has {upper}")]
    LengthMismatch { lower: usize, upper: usize },

    #[error("family needs degree >= 1 (got {len} coefficient intervals)")]
    DegreeTooSmall { len: usize },

    #[error("empty interval at index {index}: lower {lower} > upper {upper}")]
    EmptyInterval { index: usize, lower: f64, upper: f64 },

    #[error("non-finite bound at index {index}")]
    NonFinite { index: usize },

    #[error("leading interval [{lower}, {upper}] at index {index} contains zero; the degree would drop")]
    DegreeDrop { index: usize, lower: f64, upper: f64 },
}

/// The open left sector `{ r e^{j theta} : r > 0, p pi / q < theta < 2 pi - p pi / q }`.
///
/// `p/q = 1/2` is the open left half plane (Hurwitz stability).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorSpec {
    p: u32,
    q: u32,
}

impl SectorSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Angle `p pi / q` of the upper boundary ray, in `[pi/2, pi)`.
    pub fn boundary_angle(&self) -> f64 {
        f64::from(self.p) * PI / f64::from(self.q)
    }

    /// Number of signs on the construction circle (`2q`).
    pub fn circle_len(&self) -> usize {
        2 * self.q as usize
    }

    pub fn is_hurwitz(&self) -> bool {
        self.p == 1 && self.q == 2
    }
}

impl fmt::Display for SectorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

pub fn validate_sector(p: i64, q: i64) -> Result<SectorSpec, ValidationError> {
    if p <= 0 || q <= 0 {
        return Err(ValidationError::NonPositive { p, q });
    }
    // 1/2 <= p/q < 1  <=>  2p >= q and p < q, checked in integers.
    if q > MAX_SECTOR_Q || 2 * p < q || p >= q {
        return Err(ValidationError::RatioOutOfRange { p, q });
    }
    let gcd = p.gcd(&q);
    if gcd != 1 {
        return Err(ValidationError::NotCoprime { p, q, gcd });
    }
    Ok(SectorSpec {
        p: p as u32,
        q: q as u32,
    })
}

/// Coefficient box `a_i in [lower[i], upper[i]]`, `i = 0..=n`.
///
/// The leading interval never contains zero. A family whose leading interval is
/// entirely negative is stored negated (`f` and `-f` have the same roots) and
/// [`IntervalFamily::negated`] reports it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalFamily {
    lower: Vec<f64>,
    upper: Vec<f64>,
    negated: bool,
}

impl IntervalFamily {
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn degree(&self) -> usize {
        self.lower.len() - 1
    }

    /// Number of coefficients, `n + 1`.
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Whether the bounds were globally negated during validation.
    pub fn negated(&self) -> bool {
        self.negated
    }

    /// A zero-width family containing only `coeffs`.
    pub fn point(coeffs: &[f64]) -> Result<Self, ValidationError> {
        validate_family(coeffs, coeffs)
    }

    /// Re-run validation on this family's bounds, keeping the negation record.
    pub fn revalidate(&self) -> Result<Self, ValidationError> {
        let mut again = validate_family(&self.lower, &self.upper)?;
        again.negated ^= self.negated;
        Ok(again)
    }

    /// Whether `coeffs` lies in the box (in the normalized orientation).
    pub fn contains(&self, coeffs: &[f64]) -> bool {
        coeffs.len() == self.len()
            && coeffs
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(c, (lo, hi))| lo <= c && c <= hi)
    }

    /// Number of vertices of the box, `2^(n+1)`, saturating at `u64::MAX`.
    pub fn vertex_count(&self) -> u64 {
        1u64.checked_shl(self.len() as u32).unwrap_or(u64::MAX)
    }
}

pub fn validate_family(lower: &[f64], upper: &[f64]) -> Result<IntervalFamily, ValidationError> {
    if lower.len() != upper.len() {
        return Err(ValidationError::LengthMismatch {
            lower: lower.len(),
            upper: upper.len(),
        });
    }
    if lower.len() < 2 {
        return Err(ValidationError::DegreeTooSmall { len: lower.len() });
    }
    for (index, (&lo, &hi)) in lower.iter().zip(upper).enumerate() {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(ValidationError::NonFinite { index });
        }
        if lo > hi {
            return Err(ValidationError::EmptyInterval {
                index,
                lower: lo,
                upper: hi,
            });
        }
    }
    let n = lower.len() - 1;
    let (lead_lo, lead_hi) = (lower[n], upper[n]);
    if lead_lo <= 0.0 && lead_hi >= 0.0 {
        return Err(ValidationError::DegreeDrop {
            index: n,
            lower: lead_lo,
            upper: lead_hi,
        });
    }
    if lead_hi < 0.0 {
        return Ok(IntervalFamily {
            lower: upper.iter().map(|x| -x).collect(),
            upper: lower.iter().map(|x| -x).collect(),
            negated: true,
        });
    }
    Ok(IntervalFamily {
        lower: lower.to_vec(),
        upper: upper.to_vec(),
        negated: false,
    })
}

/// Choice of interval endpoint for one coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

/// The endpoint choice for every coefficient of a vertex polynomial; entry
/// `i` refers to `a_i`. Renders as a `+`/`-` string with index 0 leftmost.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignPattern(Vec<Sign>);

impl SignPattern {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignPattern(signs)
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pattern whose bit `i` of `mask` selects `Plus` for coefficient `i`.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        SignPattern(
            (0..len)
                .map(|i| if mask >> i & 1 == 1 { Sign::Plus } else { Sign::Minus })
                .collect(),
        )
    }

    pub fn negated(&self) -> Self {
        SignPattern(self.0.iter().map(|&s| -s).collect())
    }
}

impl Index<usize> for SignPattern {
    type Output = Sign;

    fn index(&self, i: usize) -> &Sign {
        &self.0[i]
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid sign character {0:?}; expected '+' or '-'")]
pub struct ParseSignError(char);

impl FromStr for SignPattern {
    type Err = ParseSignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                // ASCII hyphen and the typographic minus sign.
                '-' | '\u{2212}' => Ok(Sign::Minus),
                other => Err(ParseSignError(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(SignPattern)
    }
}

impl Serialize for SignPattern {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignPattern {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A concrete member of the family with every coefficient at an endpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexPolynomial {
    pub coeffs: Vec<f64>,
    pub pattern: SignPattern,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_examples() {
        let hurwitz = validate_sector(1, 2).unwrap();
        assert_eq!((hurwitz.p(), hurwitz.q()), (1, 2));
        assert!(hurwitz.is_hurwitz());
        assert_eq!(hurwitz.boundary_angle(), PI / 2.0);

        let s = validate_sector(3, 4).unwrap();
        assert_eq!((s.p(), s.q()), (3, 4));
        assert_eq!(s.circle_len(), 8);

        assert!(matches!(
            validate_sector(2, 4),
            Err(ValidationError::NotCoprime { gcd: 2, .. })
        ));
        assert!(matches!(
            validate_sector(1, 3),
            Err(ValidationError::RatioOutOfRange { .. })
        ));
    }

    #[test]
    fn sector_rejections() {
        assert!(matches!(validate_sector(0, 2), Err(ValidationError::NonPositive { .. })));
        assert!(matches!(validate_sector(1, -2), Err(ValidationError::NonPositive { .. })));
        assert!(matches!(validate_sector(2, 2), Err(ValidationError::RatioOutOfRange { .. })));
        assert!(matches!(validate_sector(3, 2), Err(ValidationError::RatioOutOfRange { .. })));
        assert!(matches!(
            validate_sector(500_001, 1_000_001),
            Err(ValidationError::RatioOutOfRange { .. })
        ));
        assert!(validate_sector(500_001, 1_000_000).is_ok());
    }

    #[test]
    fn sector_angle_range_exhaustive_small_q() {
        for q in 1..=60i64 {
            for p in 1..=60i64 {
                if let Ok(s) = validate_sector(p, q) {
                    assert!(2 * p >= q && p < q);
                    let a = s.boundary_angle();
                    assert!((PI / 2.0..PI).contains(&a), "{p}/{q} -> {a}");
                }
            }
        }
    }

    #[test]
    fn family_examples() {
        let f = validate_family(&[1.0, 2.0, 3.0], &[2.0, 3.0, 4.0]).unwrap();
        assert_eq!(f.degree(), 2);
        assert!(!f.negated());

        assert!(matches!(
            validate_family(&[1.0, 2.0, -1.0], &[2.0, 3.0, 1.0]),
            Err(ValidationError::DegreeDrop { index: 2, .. })
        ));

        let neg = validate_family(&[-2.0, -3.0, -4.0], &[-1.0, -2.0, -3.0]).unwrap();
        assert_eq!(neg.lower(), &[1.0, 2.0, 3.0]);
        assert_eq!(neg.upper(), &[2.0, 3.0, 4.0]);
        assert!(neg.negated());
    }

    #[test]
    fn family_rejections() {
        assert!(matches!(
            validate_family(&[1.0, 2.0], &[1.0]),
            Err(ValidationError::LengthMismatch { lower: 2, upper: 1 })
        ));
        assert!(matches!(
            validate_family(&[1.0], &[2.0]),
            Err(ValidationError::DegreeTooSmall { len: 1 })
        ));
        assert!(matches!(
            validate_family(&[1.0, 2.0, 5.0], &[2.0, 3.0, 4.0]),
            Err(ValidationError::EmptyInterval { index: 2, .. })
        ));
        assert!(matches!(
            validate_family(&[f64::NAN, 1.0], &[1.0, 1.0]),
            Err(ValidationError::NonFinite { index: 0 })
        ));
        // A zero endpoint on the leading interval is a degree drop too.
        assert!(matches!(
            validate_family(&[1.0, 0.0], &[1.0, 2.0]),
            Err(ValidationError::DegreeDrop { .. })
        ));
    }

    #[test]
    fn revalidate_is_identity() {
        for (lo, hi) in [
            (vec![1.0, 2.0, 3.0], vec![2.0, 3.0, 4.0]),
            (vec![-2.0, -3.0, -4.0], vec![-1.0, -2.0, -3.0]),
            (vec![-1.0, 0.5], vec![3.0, 0.5]),
        ] {
            let f = validate_family(&lo, &hi).unwrap();
            assert_eq!(f.revalidate().unwrap(), f);
            let g = validate_family(f.lower(), f.upper()).unwrap();
            assert_eq!(g.lower(), f.lower());
            assert_eq!(g.upper(), f.upper());
        }
    }

    #[test]
    fn pattern_string_round_trip() {
        let p: SignPattern = "-+--++".parse().unwrap();
        assert_eq!(p.to_string(), "-+--++");
        assert_eq!(p[1], Sign::Plus);
        assert_eq!(p.negated().to_string(), "+-++--");
        let typographic: SignPattern = "\u{2212}+".parse().unwrap();
        assert_eq!(typographic.to_string(), "-+");
        assert!("+x".parse::<SignPattern>().is_err());
    }

    #[test]
    fn from_mask_bit_order() {
        assert_eq!(SignPattern::from_mask(0b0011, 4).to_string(), "++--");
        assert_eq!(SignPattern::from_mask(0, 3).to_string(), "---");
    }
}
