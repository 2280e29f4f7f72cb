//! Slopes, lens spaces and the double-branched-cover dictionary between
//! two-bridge links and lens spaces.
//!
//! Orientation conventions: two lens spaces are *oriented*-equivalent when an
//! orientation-preserving homeomorphism exists (`q' = q^{+-1} mod p`); the
//! unoriented relation also allows orientation reversal (`q' = -q^{+-1}`).
//! The first relation is what a purely cosmetic pair needs, the gap between
//! the two is what a chirally cosmetic pair needs.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::Assertion;
use crate::tangle::{
    is_unlinking_number_one, normalize_two_bridge, TangleError, TwoBridge,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("slope {p}/{q} is not a primitive pair")]
    NotPrimitive { p: i64, q: i64 },
    #[error("cannot parse slope {0:?}; expected p/q")]
    BadSlope(String),
    #[error("lens space L({p}, {q}) needs gcd(p, q) = 1 and p >= 0")]
    BadLens { p: i64, q: i64 },
    #[error("slope {0} has a zero coordinate")]
    ZeroCoordinate(Slope),
    #[error("Matignon family needs positive coprime m, n with 2n <= m (got m = {m}, n = {n})")]
    MatignonPrecondition { m: i64, n: i64 },
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, SurgeryError>;

/// A slope `p/q` on a torus; `(p, q)` and `(-p, -q)` are the same slope.
/// Stored with `q > 0`, or `(1, 0)` for the meridian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if (p == 0 && q == 0) || p.gcd(&q) != 1 {
            return Err(SurgeryError::NotPrimitive { p, q });
        }
        let (p, q) = if q < 0 || (q == 0 && p < 0) { (-p, -q) } else { (p, q) };
        Ok(Self { p, q })
    }

    pub fn integral(n: i64) -> Self {
        Self { p: n, q: 1 }
    }

    pub fn meridian() -> Self {
        Self { p: 1, q: 0 }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Splits `p/q` (or a bare integer `p`, read as `p/1`).
pub fn parse_pair(s: &str) -> Option<(i64, i64)> {
    match s.split_once('/') {
        Some((a, b)) => Some((a.trim().parse().ok()?, b.trim().parse().ok()?)),
        None => Some((s.trim().parse().ok()?, 1)),
    }
}

impl FromStr for Slope {
    type Err = SurgeryError;
    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = parse_pair(s).ok_or_else(|| SurgeryError::BadSlope(s.into()))?;
        Slope::new(p, q)
    }
}

/// The lens space `L(p, q)`, with `q` reduced into `[0, p)`.
///
/// `L(0, 1)` is `S^2 x S^1` and `L(1, 0)` is `S^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LensSpace {
    p: i64,
    q: i64,
}

impl LensSpace {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p < 0 || p.gcd(&q) != 1 {
            return Err(SurgeryError::BadLens { p, q });
        }
        let q = if p == 0 { 1 } else { q.rem_euclid(p) };
        Ok(Self { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({}, {})", self.p, self.q)
    }
}

impl FromStr for LensSpace {
    type Err = SurgeryError;
    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = parse_pair(s).ok_or_else(|| SurgeryError::BadSlope(s.into()))?;
        LensSpace::new(p, q)
    }
}

/// Minimal geometric intersection number `|p q' - p' q|`.
pub fn slope_distance(a: &Slope, b: &Slope) -> u64 {
    (a.p as i128 * b.q as i128 - b.p as i128 * a.q as i128).unsigned_abs() as u64
}

/// Distance between `p/q` and `-p/q`, which always equals `2|pq|`.
pub fn amphicheiral_pair_distance(s: &Slope) -> Result<u64> {
    if s.p == 0 || s.q == 0 {
        return Err(SurgeryError::ZeroCoordinate(*s));
    }
    let negated = Slope::new(-s.p, s.q)?;
    let d = slope_distance(s, &negated);
    let expected = 2 * (s.p as i128 * s.q as i128).unsigned_abs() as u64;
    if d != expected {
        return Err(SurgeryError::Inconsistent(format!(
            "distance {d} between {s} and {negated} differs from 2|pq| = {expected}"
        )));
    }
    Ok(d)
}

fn mulmod(a: i64, b: i64, m: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(m as i128)) as i64
}

pub fn lens_equivalent(a: &LensSpace, b: &LensSpace, oriented: bool) -> bool {
    if a.p != b.p {
        return false;
    }
    let p = a.p;
    if p <= 1 {
        return true;
    }
    let same = a.q == b.q || mulmod(a.q, b.q, p) == 1;
    if same || oriented {
        return same;
    }
    (a.q + b.q).rem_euclid(p) == 0 || mulmod(a.q, b.q, p) == p - 1
}

pub fn lens_mirror(a: &LensSpace) -> LensSpace {
    LensSpace::new(a.p, a.p - a.q).expect("mirror of a valid lens space is valid")
}

/// `L(p, q)` is the double branched cover of `S^3` along `S(p, q)`.
pub fn double_branched_cover(tb: &TwoBridge) -> LensSpace {
    LensSpace::new(tb.p(), tb.q()).expect("two-bridge parameters are coprime")
}

/// Matignon's lens spaces `L(2m^2, 2mn - 1)` together with the two-bridge
/// links they double cover; each link has unlinking number one.
pub fn matignon_family(m: i64, n: i64) -> Result<(LensSpace, TwoBridge)> {
    if m <= 0 || n <= 0 || m.gcd(&n) != 1 || 2 * n > m {
        return Err(SurgeryError::MatignonPrecondition { m, n });
    }
    let p = 2 * m * m;
    let q = 2 * m * n - 1;
    let link = normalize_two_bridge(p, q)?;
    let lens = LensSpace::new(p, q)?;
    if double_branched_cover(&link) != lens {
        return Err(SurgeryError::Inconsistent(format!(
            "double branched cover of {link} is not {lens}"
        )));
    }
    if is_unlinking_number_one(&link)?.is_none() {
        return Err(SurgeryError::Inconsistent(format!(
            "{link} has no unlinking-number-one witness"
        )));
    }
    Ok((lens, link))
}

/// Bookkeeping behind the `9_27` cosmetic surgery example.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BhwReport {
    pub knot: TwoBridge,
    pub lens: LensSpace,
    pub mirror: LensSpace,
    pub slopes: (Slope, Slope),
    pub distance: u64,
    pub assertions: Vec<Assertion>,
}

impl BhwReport {
    pub fn passed(&self) -> usize {
        self.assertions.iter().filter(|a| a.pass).count()
    }
}

pub fn bhw_example_report() -> Result<BhwReport> {
    let lens = LensSpace::new(49, -19)?;
    let other = LensSpace::new(49, -18)?;
    let mirror = lens_mirror(&lens);
    let s19 = Slope::integral(19);
    let s18 = Slope::integral(18);
    let distance = slope_distance(&s19, &s18);
    let knot = normalize_two_bridge(49, -19)?;

    let assertions = vec![
        Assertion::new(
            "lens normal form",
            lens == LensSpace::new(49, 30)?,
            format!("L(49, -19) normalizes to {lens}"),
        ),
        Assertion::new(
            "mirror matches second surgery",
            mirror == LensSpace::new(49, 19)? && lens_equivalent(&mirror, &other, true),
            format!("mirror {mirror} vs L(49, -18) = {other}, oriented"),
        ),
        Assertion::new(
            "slope distance",
            distance == 1,
            format!("distance(19, 18) = {distance}"),
        ),
        Assertion::new(
            "two-bridge normal form",
            knot == normalize_two_bridge(49, 30)?,
            format!("S(49, -19) normalizes to {knot}"),
        ),
    ];
    Ok(BhwReport {
        knot,
        lens,
        mirror,
        slopes: (s19, s18),
        distance,
        assertions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slope(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    fn lens(p: i64, q: i64) -> LensSpace {
        LensSpace::new(p, q).unwrap()
    }

    #[test]
    fn slope_normalization() {
        assert_eq!(slope(-3, -2), slope(3, 2));
        assert_eq!(slope(-1, 0), Slope::meridian());
        assert!(Slope::new(0, 0).is_err());
        assert!(Slope::new(4, 2).is_err());
        assert_eq!("1/0".parse::<Slope>().unwrap(), Slope::meridian());
        assert_eq!("-3".parse::<Slope>().unwrap(), slope(-3, 1));
        assert!("a/b".parse::<Slope>().is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(slope_distance(&slope(19, 1), &slope(18, 1)), 1);
        assert_eq!(slope_distance(&Slope::meridian(), &slope(3, 1)), 1);
        assert_eq!(slope_distance(&slope(5, 7), &slope(5, 7)), 0);
    }

    #[test]
    fn amphicheiral_examples() {
        assert_eq!(amphicheiral_pair_distance(&slope(2, 3)).unwrap(), 12);
        assert_eq!(amphicheiral_pair_distance(&slope(1, 1)).unwrap(), 2);
        assert!(matches!(
            amphicheiral_pair_distance(&Slope::meridian()),
            Err(SurgeryError::ZeroCoordinate(_))
        ));
        assert!(amphicheiral_pair_distance(&slope(0, 1)).is_err());
    }

    #[test]
    fn lens_equivalence_examples() {
        assert!(!lens_equivalent(&lens(49, 30), &lens(49, 31), true));
        assert!(lens_equivalent(&lens(49, 30), &lens(49, 31), false));
        assert!(!lens_equivalent(&lens(5, 1), &lens(5, 4), true));
        assert!(lens_equivalent(&lens(5, 1), &lens(5, 4), false));
        assert!(!lens_equivalent(&lens(7, 1), &lens(7, 2), false));
        assert!(!lens_equivalent(&lens(7, 1), &lens(5, 1), false));
    }

    #[test]
    fn lens_mirror_examples() {
        assert_eq!(lens_mirror(&lens(49, 30)), lens(49, 19));
        assert!(lens_equivalent(&lens(49, 19), &lens(49, 31), true));
        assert_eq!(lens_mirror(&lens(2, 1)), lens(2, 1));
        assert_eq!(lens_mirror(&lens(5, 1)), lens(5, 4));
    }

    #[test]
    fn degenerate_lens_spaces() {
        assert_eq!(lens(0, -1), lens(0, 1));
        assert!(LensSpace::new(0, 2).is_err());
        assert_eq!(lens(1, 5).q(), 0);
        assert!(lens_equivalent(&lens(1, 0), &lens(1, 0), true));
        assert!(LensSpace::new(-3, 1).is_err());
    }

    #[test]
    fn double_cover_examples() {
        let tb = |p, q| normalize_two_bridge(p, q).unwrap();
        assert_eq!(double_branched_cover(&tb(5, 1)), lens(5, 1));
        assert_eq!(double_branched_cover(&tb(2, 1)), lens(2, 1));
        assert_eq!(double_branched_cover(&tb(49, 30)), lens(49, 30));
    }

    #[test]
    fn matignon_examples() {
        let (l, s) = matignon_family(3, 1).unwrap();
        assert_eq!(l, lens(18, 5));
        assert_eq!(s, normalize_two_bridge(18, 5).unwrap());
        let (l, _) = matignon_family(2, 1).unwrap();
        assert_eq!(l, lens(8, 3));
        assert!(matches!(
            matignon_family(4, 2),
            Err(SurgeryError::MatignonPrecondition { .. })
        ));
        assert!(matignon_family(3, 2).is_err());
        assert!(matignon_family(0, 1).is_err());
    }

    #[test]
    fn bhw_report_passes() {
        let r = bhw_example_report().unwrap();
        assert_eq!(r.passed(), 4, "{:?}", r.assertions);
        assert_eq!(lens_mirror(&r.mirror), r.lens);
        assert_eq!(
            slope_distance(&r.slopes.0, &r.slopes.1),
            slope_distance(&r.slopes.1, &r.slopes.0)
        );
    }
}
