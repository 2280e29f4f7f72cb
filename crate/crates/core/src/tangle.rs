//! Continued fractions, two-bridge links and the banding moves between them.
//!
//! A Conway form `C(a_0, ..., a_k)` is evaluated right to left as
//! `a_0 + 1/(a_1 + 1/(... + 1/a_k))`, and the resulting fraction `p/q`
//! names the two-bridge link `S(p, q)`. Equivalence of two-bridge links is
//! the unoriented Schubert classification with mirror images kept distinct:
//! `S(p, q) = S(p, q')` iff `q' = q^{+-1} mod p`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symmetric;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangleError {
    #[error("invalid Conway form: {0}")]
    InvalidConwayForm(String),
    #[error("fraction {p}/{q} is not in lowest terms")]
    NotCoprime { p: i64, q: i64 },
    #[error("S({p}, {q}) is degenerate: need p >= 2 and q != 0 mod p")]
    Degenerate { p: i64, q: i64 },
    #[error("S({0}, q) is a knot; the operation needs a two-component link (p even)")]
    NotALink(i64),
    #[error("S({0}, q) is a two-component link; the operation needs a knot (p odd)")]
    NotAKnot(i64),
    #[error("not an antisymmetric +-2 palindrome: {0}")]
    NotPalindrome(String),
    #[error("value {0} does not fit in a 64-bit two-bridge parameter")]
    Overflow(String),
    #[error("invalid parameters: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, TangleError>;

/// A reduced element of `Q + {1/0}`, with arbitrary-precision terms.
///
/// Normalized so that `q >= 0`, and `1/0` is the only fraction with `q = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fraction {
    p: BigInt,
    q: BigInt,
}

impl Fraction {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Option<Self> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return None;
        }
        let g = p.gcd(&q);
        p /= &g;
        q /= &g;
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Some(Self { p, q })
    }

    pub fn infinity() -> Self {
        Self {
            p: BigInt::one(),
            q: BigInt::zero(),
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.p
    }

    pub fn denom(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q.is_zero()
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// A nonempty list of nonzero integers `a_0, ..., a_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct ConwayForm(Vec<i64>);

impl ConwayForm {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(TangleError::InvalidConwayForm("empty".into()));
        }
        if let Some(i) = entries.iter().position(|&a| a == 0) {
            return Err(TangleError::InvalidConwayForm(format!(
                "entry {i} is zero"
            )));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }
}

impl TryFrom<Vec<i64>> for ConwayForm {
    type Error = TangleError;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ConwayForm> for Vec<i64> {
    fn from(cf: ConwayForm) -> Self {
        cf.0
    }
}

impl fmt::Display for ConwayForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ConwayForm {
    type Err = TangleError;

    /// Parses a comma-separated list such as `3,2,-3`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| TangleError::InvalidConwayForm(format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

/// The two-bridge link `S(p, q)` with `p >= 2`, `0 < q < p`, `gcd(p, q) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoBridge {
    p: i64,
    q: i64,
}

impl TwoBridge {
    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_knot(&self) -> bool {
        self.p % 2 == 1
    }

    /// Two-bridge link named by a fraction `p/q`; the sign of the fraction is
    /// carried by `q` once `p` is made positive.
    pub fn from_fraction(f: &Fraction) -> Result<Self> {
        let (mut p, mut q) = (f.numer().clone(), f.denom().clone());
        if p.is_negative() {
            p = -p;
            q = -q;
        }
        let to_i64 = |v: &BigInt| v.to_i64().ok_or_else(|| TangleError::Overflow(v.to_string()));
        normalize_two_bridge(to_i64(&p)?, to_i64(&q)?)
    }
}

impl fmt::Display for TwoBridge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({}, {})", self.p, self.q)
    }
}

/// Knot signature, an even integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignatureValue(pub i64);

impl SignatureValue {
    pub fn get(self) -> i64 {
        self.0
    }
}

impl fmt::Display for SignatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mulmod(a: i64, b: i64, m: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(m as i128)) as i64
}

/// Evaluates a Conway form as a projective pair, so internal zero sums
/// propagate as `1/0` instead of dividing by zero.
pub fn eval_conway(cf: &ConwayForm) -> Fraction {
    let mut entries = cf.entries().iter().rev();
    let last = *entries.next().expect("ConwayForm is nonempty");
    let mut p = BigInt::from(last);
    let mut q = BigInt::one();
    for &a in entries {
        // a + 1/(p/q) = (a p + q) / p
        let np = BigInt::from(a) * &p + &q;
        q = p;
        p = np;
    }
    Fraction::new(p, q).expect("continued fraction pairs are never (0, 0)")
}

/// Regular continued fraction of `S(p, q)` with `q` in canonical range,
/// so every entry is positive.
pub fn conway_expand(p: i64, q: i64) -> Result<ConwayForm> {
    let tb = normalize_two_bridge(p, q)?;
    let (mut num, mut den) = (tb.p, tb.q);
    let mut entries = Vec::new();
    while den != 0 {
        let (a, r) = num.div_rem(&den);
        entries.push(a);
        num = den;
        den = r;
    }
    ConwayForm::new(entries)
}

pub fn normalize_two_bridge(p: i64, q: i64) -> Result<TwoBridge> {
    if p < 2 || q.rem_euclid(p.max(1)) == 0 {
        return Err(TangleError::Degenerate { p, q });
    }
    if p.gcd(&q) != 1 {
        return Err(TangleError::NotCoprime { p, q });
    }
    Ok(TwoBridge {
        p,
        q: q.rem_euclid(p),
    })
}

/// Unoriented Schubert equivalence with mirrors distinguished.
pub fn two_bridge_equivalent(a: &TwoBridge, b: &TwoBridge) -> bool {
    a.p == b.p && (a.q == b.q || mulmod(a.q, b.q, a.p) == 1)
}

pub fn mirror_two_bridge(tb: &TwoBridge) -> TwoBridge {
    normalize_two_bridge(tb.p, tb.p - tb.q).expect("mirror of a valid link is valid")
}

/// Kohn's test for unlinking number one: a witness `(n, m)` with
/// `gcd(n, m) = 1` and `tb = S(2n^2, 2nm +- 1)`.
pub fn is_unlinking_number_one(tb: &TwoBridge) -> Result<Option<(i64, i64)>> {
    if tb.is_knot() {
        return Err(TangleError::NotALink(tb.p));
    }
    let half = tb.p / 2;
    let n = half.isqrt();
    if n * n != half {
        return Ok(None);
    }
    for m in 0..=n {
        if n.gcd(&m) != 1 {
            continue;
        }
        for q in [2 * n * m + 1, 2 * n * m - 1] {
            if q <= 0 || q >= tb.p {
                continue;
            }
            let candidate = TwoBridge { p: tb.p, q };
            if two_bridge_equivalent(tb, &candidate) {
                return Ok(Some((n, m)));
            }
        }
    }
    Ok(None)
}

/// Checks the shape `(a_0, ..., a_k, +-2, -a_k, ..., -a_0)`, including the
/// degenerate single-entry form `[+-2]`.
pub fn is_cosmetic_palindrome(cf: &ConwayForm) -> bool {
    palindrome_check(cf).is_ok()
}

fn palindrome_check(cf: &ConwayForm) -> Result<usize> {
    let a = cf.entries();
    if a.len() % 2 == 0 {
        return Err(TangleError::NotPalindrome(format!(
            "{cf} has even length {}",
            a.len()
        )));
    }
    let mid = a.len() / 2;
    if a[mid].abs() != 2 {
        return Err(TangleError::NotPalindrome(format!(
            "{cf} has middle entry {} (expected +-2)",
            a[mid]
        )));
    }
    for i in 0..mid {
        let j = a.len() - 1 - i;
        if a[i] != -a[j] {
            return Err(TangleError::NotPalindrome(format!(
                "{cf}: entry {i} = {} but entry {j} = {}",
                a[i], a[j]
            )));
        }
    }
    Ok(mid)
}

/// The banding partner of a `+-2` palindrome: the middle entry changes sign.
pub fn cosmetic_band_partner(cf: &ConwayForm) -> Result<ConwayForm> {
    let mid = palindrome_check(cf)?;
    let mut entries = cf.entries().to_vec();
    entries[mid] = -entries[mid];
    ConwayForm::new(entries)
}

/// True iff the banding partner of `cf` is the mirror image of `cf`.
pub fn verify_chirally_cosmetic(cf: &ConwayForm) -> Result<bool> {
    let partner = cosmetic_band_partner(cf)?;
    let original = TwoBridge::from_fraction(&eval_conway(cf))?;
    let banded = TwoBridge::from_fraction(&eval_conway(&partner))?;
    Ok(two_bridge_equivalent(&banded, &mirror_two_bridge(&original)))
}

/// Even continued fraction `p/q = c_1 - 1/(c_2 - 1/(... - 1/c_n))` with every
/// `c_i` even. Requires `p` odd and `q` even.
pub(crate) fn even_continued_fraction(p: i64, q: i64) -> Vec<BigInt> {
    debug_assert!(p % 2 != 0 && q % 2 == 0);
    let (mut num, mut den) = (BigInt::from(p), BigInt::from(q));
    let two = BigInt::from(2);
    let mut out = Vec::new();
    while !den.is_zero() {
        // Nearest even integer to num/den, i.e. 2 * round(num / (2 den)).
        let d2 = &den * &two;
        let c = &two * round_div(&num, &d2);
        let r = &c * &den - &num;
        out.push(c);
        num = den;
        den = r;
    }
    out
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // floor((2a + b) / 2b) for b > 0, mirrored for b < 0.
    let (a, b) = if b.is_negative() { (-a, -b) } else { (a.clone(), b.clone()) };
    let two = BigInt::from(2);
    (&two * &a + &b).div_floor(&(&two * &b))
}

/// Knot signature of `S(p, q)` with the convention `sigma(S(5, 1)) = -4`.
///
/// The even continued fraction of `p/q` describes a diagram whose
/// checkerboard surface is a linear plumbing of twisted bands. That surface
/// is orientable, so its Gordon-Litherland correction vanishes and the
/// signature equals the signature of its Goeritz form: the tridiagonal
/// matrix with the even coefficients on the diagonal and ones beside it.
pub fn signature_two_bridge(tb: &TwoBridge) -> Result<SignatureValue> {
    if !tb.is_knot() {
        return Err(TangleError::NotAKnot(tb.p));
    }
    let q = if tb.q % 2 == 0 { tb.q } else { tb.q - tb.p };
    let coefficients = even_continued_fraction(tb.p, q);
    let goeritz = symmetric::tridiagonal(&coefficients, 1);
    Ok(SignatureValue(symmetric::signature(&goeritz)))
}

/// True iff no single 4-move can relate the two knots, i.e. their
/// signatures differ by more than 4.
pub fn four_move_signature_obstruction(a: &TwoBridge, b: &TwoBridge) -> Result<bool> {
    let sa = signature_two_bridge(a)?.get();
    let sb = signature_two_bridge(b)?.get();
    Ok((sa - sb).abs() > 4)
}
