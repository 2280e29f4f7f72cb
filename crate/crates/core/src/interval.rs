//! Rigorous interval arithmetic and the Krawczyk test for gluing equations.
//!
//! Every endpoint computation is rounded to nearest and then pushed outward
//! to the neighbouring float, which encloses the exact result of the
//! correctly rounded operations (`+ - * /`). Library transcendental
//! functions (`ln`, `atan2`) are not correctly rounded, so their endpoints
//! are pushed out by [`TRANSCENDENTAL_ULPS`] floats instead. No floating
//! point environment state is touched, so everything here is thread-safe.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gluing::{
    build_equations, max_residual, newton_solve, GluingError, GluingSystem, NewtonOptions,
    ShapeVector, Symmetry, LI2_BERNOULLI,
};
use crate::linalg::Lu;
use crate::tri::{validate, Diagnostic, Triangulation};

/// Outward widening applied to `ln` and `atan2` endpoints.
pub const TRANSCENDENTAL_ULPS: u32 = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("enclosure touches singularity: {0}")]
    Singularity(&'static str),
    #[error("approximate Jacobian could not be inverted")]
    JacobianInversion,
    #[error("dilogarithm series does not converge on this enclosure")]
    SeriesDivergence,
    #[error("shape vector has {found} entries, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("could only select {found} independent equations for {expected} unknowns")]
    RankDeficient { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, IntervalError>;

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

fn down_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

fn up_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

/// A closed interval `[lo, hi]` of reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 2]", try_from = "[f64; 2]")]
pub struct RealInterval {
    lo: f64,
    hi: f64,
}

impl From<RealInterval> for [f64; 2] {
    fn from(x: RealInterval) -> Self {
        [x.lo, x.hi]
    }
}

impl TryFrom<[f64; 2]> for RealInterval {
    type Error = String;
    fn try_from(v: [f64; 2]) -> std::result::Result<Self, String> {
        RealInterval::new(v[0], v[1]).ok_or_else(|| format!("invalid interval {v:?}"))
    }
}

impl RealInterval {
    pub fn new(lo: f64, hi: f64) -> Option<Self> {
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub const fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// `[x - r, x + r]`, rounded outward.
    pub fn around(x: f64, r: f64) -> Self {
        Self {
            lo: down(x - r),
            hi: up(x + r),
        }
    }

    /// The smallest interval of floats known to contain pi.
    pub fn pi() -> Self {
        // The double nearest pi lies below it.
        Self { lo: PI, hi: up(PI) }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn subset_of(&self, other: &RealInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Strict containment in the interior of `other`.
    pub fn interior_of(&self, other: &RealInterval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn hull(&self, other: &RealInterval) -> Self {
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersect(&self, other: &RealInterval) -> Option<Self> {
        Self::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn scale(&self, k: f64) -> Self {
        *self * RealInterval::point(k)
    }

    pub fn sqr(&self) -> Self {
        if self.lo >= 0.0 {
            Self {
                lo: down(self.lo * self.lo),
                hi: up(self.hi * self.hi),
            }
        } else if self.hi <= 0.0 {
            Self {
                lo: down(self.hi * self.hi),
                hi: up(self.lo * self.lo),
            }
        } else {
            let m = self.mag();
            Self {
                lo: 0.0,
                hi: up(m * m),
            }
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(IntervalError::Singularity("division by an interval containing 0"));
        }
        Ok(Self {
            lo: down(1.0 / self.hi),
            hi: up(1.0 / self.lo),
        })
    }

    pub fn checked_div(&self, other: &RealInterval) -> Result<Self> {
        if other.contains_zero() {
            return Err(IntervalError::Singularity("division by an interval containing 0"));
        }
        let c = [
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        ];
        Ok(Self {
            lo: down(c.iter().copied().fold(f64::INFINITY, f64::min)),
            hi: up(c.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
        })
    }

    pub fn ln(&self) -> Result<Self> {
        if self.lo <= 0.0 {
            return Err(IntervalError::Singularity("logarithm of a non-positive interval"));
        }
        Ok(Self {
            lo: down_n(self.lo.ln(), TRANSCENDENTAL_ULPS),
            hi: up_n(self.hi.ln(), TRANSCENDENTAL_ULPS),
        })
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Add for RealInterval {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            lo: down(self.lo + o.lo),
            hi: up(self.hi + o.hi),
        }
    }
}

impl Sub for RealInterval {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            lo: down(self.lo - o.hi),
            hi: up(self.hi - o.lo),
        }
    }
}

impl Neg for RealInterval {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for RealInterval {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in [self.lo, self.hi] {
            for b in [o.lo, o.hi] {
                // A zero factor gives an exact zero; anything else may have
                // rounded (or underflowed) and is widened.
                if a == 0.0 || b == 0.0 {
                    lo = lo.min(0.0);
                    hi = hi.max(0.0);
                } else {
                    let p = a * b;
                    lo = lo.min(down(p));
                    hi = hi.max(up(p));
                }
            }
        }
        Self { lo, hi }
    }
}

/// A rectangle `re x im` in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 4]", try_from = "[f64; 4]")]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl From<ComplexInterval> for [f64; 4] {
    fn from(z: ComplexInterval) -> Self {
        [z.re.lo, z.re.hi, z.im.lo, z.im.hi]
    }
}

impl TryFrom<[f64; 4]> for ComplexInterval {
    type Error = String;
    fn try_from(v: [f64; 4]) -> std::result::Result<Self, String> {
        Ok(ComplexInterval {
            re: RealInterval::try_from([v[0], v[1]])?,
            im: RealInterval::try_from([v[2], v[3]])?,
        })
    }
}

impl ComplexInterval {
    pub fn new(re: RealInterval, im: RealInterval) -> Self {
        Self { re, im }
    }

    pub fn point(z: Complex64) -> Self {
        Self {
            re: RealInterval::point(z.re),
            im: RealInterval::point(z.im),
        }
    }

    /// Square box of half-width `r` around `z`.
    pub fn around(z: Complex64, r: f64) -> Self {
        Self {
            re: RealInterval::around(z.re, r),
            im: RealInterval::around(z.im, r),
        }
    }

    pub fn one() -> Self {
        Self::point(Complex64::new(1.0, 0.0))
    }

    /// `k * pi * i`.
    pub fn pi_i(k: i64) -> Self {
        Self {
            re: RealInterval::point(0.0),
            im: RealInterval::pi().scale(k as f64),
        }
    }

    pub fn mid(&self) -> Complex64 {
        Complex64::new(self.re.mid(), self.im.mid())
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.re.contains(z.re) && self.im.contains(z.im)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn subset_of(&self, other: &ComplexInterval) -> bool {
        self.re.subset_of(&other.re) && self.im.subset_of(&other.im)
    }

    pub fn interior_of(&self, other: &ComplexInterval) -> bool {
        self.re.interior_of(&other.re) && self.im.interior_of(&other.im)
    }

    pub fn intersect(&self, other: &ComplexInterval) -> Option<Self> {
        Some(Self {
            re: self.re.intersect(&other.re)?,
            im: self.im.intersect(&other.im)?,
        })
    }

    pub fn width(&self) -> f64 {
        self.re.width().max(self.im.width())
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            re: self.re.scale(k),
            im: self.im.scale(k),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re,
            im: -self.im,
        }
    }

    /// Enclosure of `|z|^2`.
    pub fn norm_sqr(&self) -> RealInterval {
        self.re.sqr() + self.im.sqr()
    }

    /// Upper bound on `|z|` over the box.
    pub fn mag(&self) -> f64 {
        up(self.re.mag().hypot(self.im.mag()))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(IntervalError::Singularity("reciprocal of a box containing 0"));
        }
        let d = self.norm_sqr();
        Ok(Self {
            re: self.re.checked_div(&d)?,
            im: (-self.im).checked_div(&d)?,
        })
    }

    pub fn checked_div(&self, other: &ComplexInterval) -> Result<Self> {
        Ok(*self * other.recip()?)
    }

    /// `1 / (1 - z)`.
    pub fn recip_one_minus(&self) -> Result<Self> {
        (Self::one() - *self).recip()
    }

    /// Range of the principal argument; the box must avoid the branch cut
    /// along the non-positive real axis.
    pub fn arg(&self) -> Result<RealInterval> {
        let off_cut = self.im.lo > 0.0 || self.im.hi < 0.0 || self.re.lo > 0.0;
        if !off_cut {
            return Err(IntervalError::Singularity("argument across the branch cut"));
        }
        // The box is convex and misses the origin, so the extreme angles are
        // attained at corners.
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for x in [self.re.lo, self.re.hi] {
            for y in [self.im.lo, self.im.hi] {
                let a = y.atan2(x);
                lo = lo.min(a);
                hi = hi.max(a);
            }
        }
        Ok(RealInterval {
            lo: down_n(lo, TRANSCENDENTAL_ULPS).max(-RealInterval::pi().hi),
            hi: up_n(hi, TRANSCENDENTAL_ULPS).min(RealInterval::pi().hi),
        })
    }

    /// Principal logarithm `ln|z| + i arg z`.
    pub fn ln(&self) -> Result<Self> {
        let im = self.arg()?;
        let re = self.norm_sqr().ln()?.scale(0.5);
        Ok(Self { re, im })
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i{}", self.re, self.im)
    }
}

impl Add for ComplexInterval {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for ComplexInterval {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Neg for ComplexInterval {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for ComplexInterval {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// Interval evaluation of one gluing row at a box of shapes.
fn row_value(sys: &GluingSystem, row: usize, z: &[ComplexInterval]) -> Result<ComplexInterval> {
    let r = &sys.rows[row];
    let mut s = ComplexInterval::pi_i(r.branch - r.c);
    for (j, zj) in z.iter().enumerate() {
        if r.a[j] != 0 {
            s = s + zj.ln()?.scale(r.a[j] as f64);
        }
        if r.b[j] != 0 {
            s = s + (ComplexInterval::one() - *zj).ln()?.scale(r.b[j] as f64);
        }
    }
    Ok(s)
}

/// Interval Jacobian entry `a / z - b / (1 - z)`.
fn row_gradient(sys: &GluingSystem, row: usize, z: &[ComplexInterval]) -> Result<Vec<ComplexInterval>> {
    let r = &sys.rows[row];
    z.iter()
        .enumerate()
        .map(|(j, zj)| {
            let mut g = ComplexInterval::point(Complex64::new(0.0, 0.0));
            if r.a[j] != 0 {
                g = g + zj.recip()?.scale(r.a[j] as f64);
            }
            if r.b[j] != 0 {
                g = g - zj.recip_one_minus()?.scale(r.b[j] as f64);
            }
            Ok(g)
        })
        .collect()
}

/// Outcome of a Krawczyk containment test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub manifold_name: String,
    pub contracted: bool,
    pub all_imag_positive: bool,
    pub enclosures: Vec<ComplexInterval>,
    pub volume_enclosure: RealInterval,
    pub radius_used: f64,
}

impl Certificate {
    /// A valid certificate proves a unique solution of the gluing equations
    /// inside the enclosures, with every shape in the upper half-plane.
    pub fn is_valid(&self) -> bool {
        self.contracted && self.all_imag_positive
    }
}

/// Krawczyk operator `K(X) = y - Y f(y) + (I - Y Df(X)) (X - y)` on the box
/// of half-width `radius` around `approx`, for the square subsystem chosen
/// by [`GluingSystem::select_square`].
///
/// `K(X)` inside the interior of `X` proves that `X` holds exactly one zero
/// of the subsystem. On success the enclosures are `K(X)`, otherwise `X`.
pub fn krawczyk_test(sys: &GluingSystem, approx: &ShapeVector, radius: f64) -> Result<Certificate> {
    let n = sys.tet_count;
    if approx.len() != n {
        return Err(IntervalError::WrongLength {
            expected: n,
            found: approx.len(),
        });
    }
    let y = &approx.0;
    let rows = sys.select_square(y);
    if rows.len() != n {
        return Err(IntervalError::RankDeficient {
            expected: n,
            found: rows.len(),
        });
    }
    let precond = Lu::factor(sys.jacobian(&rows, y))
        .ok_or(IntervalError::JacobianInversion)?
        .inverse();
    let precond: Vec<Vec<ComplexInterval>> = precond
        .iter()
        .map(|row| row.iter().map(|&v| ComplexInterval::point(v)).collect())
        .collect();

    let y_box: Vec<ComplexInterval> = y.iter().map(|&v| ComplexInterval::point(v)).collect();
    let x_box: Vec<ComplexInterval> = y.iter().map(|&v| ComplexInterval::around(v, radius)).collect();

    let f_y = rows
        .iter()
        .map(|&r| row_value(sys, r, &y_box))
        .collect::<Result<Vec<_>>>()?;
    let df_x = rows
        .iter()
        .map(|&r| row_gradient(sys, r, &x_box))
        .collect::<Result<Vec<_>>>()?;
    let delta: Vec<ComplexInterval> = x_box.iter().zip(&y_box).map(|(x, y)| *x - *y).collect();

    let zero = ComplexInterval::point(Complex64::new(0.0, 0.0));
    let mut k_box = Vec::with_capacity(n);
    for i in 0..n {
        let mut newton = zero;
        for (yk, fk) in precond[i].iter().zip(&f_y) {
            newton = newton + *yk * *fk;
        }
        let mut correction = zero;
        for j in 0..n {
            // Entry (i, j) of I - Y Df(X).
            let mut m = if i == j { ComplexInterval::one() } else { zero };
            for k in 0..n {
                m = m - precond[i][k] * df_x[k][j];
            }
            correction = correction + m * delta[j];
        }
        k_box.push(y_box[i] - newton + correction);
    }

    let contracted = k_box.iter().zip(&x_box).all(|(k, x)| k.interior_of(x));
    let enclosures = if contracted { k_box } else { x_box };
    let all_imag_positive = enclosures.iter().all(|z| z.im.lo > 0.0);
    let volume_enclosure = volume_interval(&enclosures)?;
    Ok(Certificate {
        manifold_name: String::new(),
        contracted,
        all_imag_positive,
        enclosures,
        volume_enclosure,
        radius_used: radius,
    })
}

fn apply_symmetry(s: Symmetry, z: &ComplexInterval) -> Result<ComplexInterval> {
    let one = ComplexInterval::one();
    Ok(match s {
        Symmetry::Identity => *z,
        Symmetry::OneMinusInv => one - z.recip()?,
        Symmetry::InvOneMinus => z.recip_one_minus()?,
        Symmetry::Inv => z.recip()?,
        Symmetry::OneMinus => one - *z,
        Symmetry::OverZMinusOne => z.checked_div(&(*z - one))?,
    })
}

/// Enclosure of the Bloch-Wigner dilogarithm over a box.
pub fn bloch_wigner_interval(z: &ComplexInterval) -> Result<RealInterval> {
    let sym = Symmetry::reducing(z.mid());
    let w = apply_symmetry(sym, z)?;
    let one_minus_w = ComplexInterval::one() - w;
    let u = -one_minus_w.ln()?;

    // Horner evaluation of sum_n c_n u^n, then one more factor of u.
    let max_n = LI2_BERNOULLI.last().expect("table is nonempty").0 as usize;
    let mut coeffs = vec![0.0; max_n + 1];
    for &(n, c) in LI2_BERNOULLI.iter() {
        coeffs[n as usize] = c;
    }
    let coeff = |c: f64| {
        if c == 0.0 {
            RealInterval::point(0.0)
        } else {
            // Literals are the nearest doubles to the exact rationals.
            RealInterval { lo: down(c), hi: up(c) }
        }
    };
    let mut acc = ComplexInterval::new(coeff(coeffs[max_n]), RealInterval::point(0.0));
    for &c in coeffs[..max_n].iter().rev() {
        acc = acc * u + ComplexInterval::new(coeff(c), RealInterval::point(0.0));
    }
    let series = acc * u;

    // Tail: |B_n| / (n+1)! <= 2 zeta(2) / (2 pi)^n for even n >= 2.
    let u_mag = u.mag();
    let rho = up(u_mag / (2.0 * PI));
    if rho >= 0.5 {
        return Err(IntervalError::SeriesDivergence);
    }
    let first_missing = (max_n + 2) as i32;
    let tail = up(3.3 * u_mag * rho.powi(first_missing) / (1.0 - rho) * 2.0);
    let im_li2 = series.im + RealInterval { lo: -tail, hi: tail };

    if w.contains_zero() {
        return Err(IntervalError::Singularity("dilogarithm argument box contains 0"));
    }
    let log_abs = w.norm_sqr().ln()?.scale(0.5);
    let d = im_li2 + one_minus_w.arg()? * log_abs;
    Ok(d.scale(sym.sign()))
}

pub fn volume_interval(shapes: &[ComplexInterval]) -> Result<RealInterval> {
    let mut total = RealInterval::point(0.0);
    for z in shapes {
        total = total + bloch_wigner_interval(z)?;
    }
    Ok(total)
}

/// Which stage of the certification pipeline failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("validation: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Diagnostic>),
    #[error("equations: {0}")]
    Equations(GluingError),
    #[error("solve: {0}")]
    Solve(GluingError),
    #[error("solve: residual {0:e} is above the certification threshold")]
    ResidualTooLarge(f64),
    #[error("certify: {0}")]
    Interval(#[from] IntervalError),
    #[error("certify: no radius in the ladder produced a valid certificate")]
    NotCertified(Box<Certificate>),
}

impl PipelineError {
    pub fn stage(&self) -> &'static str {
        match self {
            Self::Validation(_) => "validate",
            Self::Equations(_) => "equations",
            Self::Solve(_) | Self::ResidualTooLarge(_) => "solve",
            Self::Interval(_) | Self::NotCertified(_) => "certify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub newton: NewtonOptions,
    pub radii: Vec<f64>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            newton: NewtonOptions::default(),
            radii: vec![1e-10, 1e-8, 1e-6],
        }
    }
}

/// Residual a Newton solution must reach before the interval test is tried.
pub const CERTIFY_RESIDUAL_THRESHOLD: f64 = 1e-10;

/// Validate, solve from the stored shapes, then run the Krawczyk test over
/// the radius ladder; the first valid certificate wins.
pub fn certify_hyperbolic(t: &Triangulation) -> std::result::Result<Certificate, PipelineError> {
    certify_with(t, &CertifyOptions::default())
}

pub fn certify_with(
    t: &Triangulation,
    opts: &CertifyOptions,
) -> std::result::Result<Certificate, PipelineError> {
    let diagnostics = validate(t);
    if !diagnostics.is_empty() {
        return Err(PipelineError::Validation(diagnostics));
    }
    let sys = build_equations(t).map_err(PipelineError::Equations)?;
    let solved = newton_solve(&sys, &ShapeVector(t.shapes()), opts.newton)
        .map_err(PipelineError::Solve)?;
    let res = max_residual(&sys, &solved.shapes);
    if res >= CERTIFY_RESIDUAL_THRESHOLD {
        return Err(PipelineError::ResidualTooLarge(res));
    }
    let mut last = None;
    for &radius in &opts.radii {
        let mut cert = match krawczyk_test(&sys, &solved.shapes, radius) {
            Ok(c) => c,
            Err(IntervalError::Singularity(_)) if last.is_some() => break,
            Err(e) => return Err(e.into()),
        };
        cert.manifold_name = t.name.clone();
        if cert.is_valid() {
            return Ok(cert);
        }
        last = Some(cert);
    }
    match last {
        Some(cert) => Err(PipelineError::NotCertified(Box::new(cert))),
        None => Err(PipelineError::NotCertified(Box::new(Certificate {
            manifold_name: t.name.clone(),
            contracted: false,
            all_imag_positive: false,
            enclosures: Vec::new(),
            volume_enclosure: RealInterval::point(0.0),
            radius_used: 0.0,
        }))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gluing::bloch_wigner;
    use crate::tri::parse_triangulation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ri(lo: f64, hi: f64) -> RealInterval {
        RealInterval::new(lo, hi).unwrap()
    }

    fn rand_box(rng: &mut ChaCha8Rng) -> (ComplexInterval, Complex64) {
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..3.0));
        let r = rng.gen_range(0.0..0.01);
        (ComplexInterval::around(z, r), z)
    }

    #[test]
    fn point_addition_is_tight() {
        let s = RealInterval::point(1.0) + RealInterval::point(2.0);
        assert!(s.contains(3.0));
        assert!(s.hi - s.lo <= 2.0 * f64::EPSILON * 3.0);
    }

    #[test]
    fn adding_zero_contains_original() {
        let x = ri(0.1, 0.7);
        assert!(x.subset_of(&(x + RealInterval::point(0.0))));
        let z = ComplexInterval::new(ri(-1.0, 2.0), ri(0.5, 0.6));
        assert!(z.subset_of(&(z + ComplexInterval::point(Complex64::new(0.0, 0.0)))));
    }

    #[test]
    fn division_by_zero_box_rejected() {
        let z = ComplexInterval::new(ri(-0.1, 0.1), ri(-0.1, 0.1));
        assert!(matches!(z.recip(), Err(IntervalError::Singularity(_))));
        assert!(ri(1.0, 2.0).checked_div(&ri(-1.0, 1.0)).is_err());
        assert!(ri(-1.0, 2.0).ln().is_err());
    }

    #[test]
    fn log_requires_leaving_the_cut() {
        let z = ComplexInterval::new(ri(-2.0, -1.0), ri(-0.1, 0.1));
        assert!(z.ln().is_err());
        let right = ComplexInterval::new(ri(1.0, 2.0), ri(-0.1, 0.1));
        assert!(right.ln().is_ok());
    }

    #[test]
    fn pi_interval_brackets_pi() {
        let p = RealInterval::pi();
        assert!(p.lo <= PI && PI < p.hi);
        assert_eq!(up(p.lo), p.hi);
    }

    #[test]
    fn monte_carlo_point_containment() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let a = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(0.01..5.0));
            let b = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(0.01..5.0));
            let (ia, ib) = (ComplexInterval::point(a), ComplexInterval::point(b));
            assert!((ia + ib).contains(a + b));
            assert!((ia - ib).contains(a - b));
            assert!((ia * ib).contains(a * b));
            assert!(ia.checked_div(&ib).unwrap().contains(a / b));
            assert!(ia.ln().unwrap().contains(a.ln()));
            let one = Complex64::new(1.0, 0.0);
            assert!(ia.recip_one_minus().unwrap().contains(one / (one - a)));
        }
    }

    #[test]
    fn inclusion_monotonicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2_000 {
            let (outer_a, a) = rand_box(&mut rng);
            let (outer_b, b) = rand_box(&mut rng);
            let inner_a = ComplexInterval::around(a, 0.0);
            let inner_b = ComplexInterval::around(b, 0.0);
            assert!((inner_a * inner_b).subset_of(&(outer_a * outer_b)));
            assert!((inner_a + inner_b).subset_of(&(outer_a + outer_b)));
            assert!(inner_a
                .checked_div(&inner_b)
                .unwrap()
                .subset_of(&outer_a.checked_div(&outer_b).unwrap()));
            assert!(inner_a.ln().unwrap().subset_of(&outer_a.ln().unwrap()));
        }
    }

    #[test]
    fn bloch_wigner_enclosure_contains_point_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2_000 {
            let (bx, z) = rand_box(&mut rng);
            let enc = bloch_wigner_interval(&bx).unwrap();
            assert!(enc.contains(bloch_wigner(z)), "{z} {enc}");
        }
    }

    #[test]
    fn bloch_wigner_interval_is_tight_at_points() {
        let z = Complex64::new(0.5, 3f64.sqrt() / 2.0);
        let enc = bloch_wigner_interval(&ComplexInterval::point(z)).unwrap();
        assert!(enc.width() < 1e-13, "{enc}");
    }

    #[test]
    fn conjugated_shape_is_not_positive() {
        let t = parse_triangulation(fixtures::APPENDIX_A).unwrap();
        let sys = build_equations(&t).unwrap();
        let mut s = t.shapes();
        s[5] = s[5].conj();
        for radius in [1e-8, 1e-4] {
            let cert = krawczyk_test(&sys, &ShapeVector(s.clone()), radius).unwrap();
            assert!(!cert.all_imag_positive);
            assert!(!cert.is_valid());
        }
    }

    #[test]
    fn huge_radius_hits_singularity() {
        let t = parse_triangulation(fixtures::APPENDIX_A).unwrap();
        let sys = build_equations(&t).unwrap();
        assert!(matches!(
            krawczyk_test(&sys, &ShapeVector(t.shapes()), 10.0),
            Err(IntervalError::Singularity(_))
        ));
    }

    #[test]
    fn broken_gluing_fails_validation() {
        let mut t = parse_triangulation(fixtures::APPENDIX_A).unwrap();
        t.tets[0].gluings[3] = crate::tri::Perm::parse("2013").unwrap();
        let err = certify_hyperbolic(&t).unwrap_err();
        assert_eq!(err.stage(), "validate");
    }

    #[test]
    fn serialization_shapes() {
        let z = ComplexInterval::new(ri(1.0, 2.0), ri(3.0, 4.0));
        let v = serde_json::to_value(z).unwrap();
        assert_eq!(v, serde_json::json!([1.0, 2.0, 3.0, 4.0]));
        let back: ComplexInterval = serde_json::from_value(v).unwrap();
        assert_eq!(back, z);
        assert!(serde_json::from_value::<RealInterval>(serde_json::json!([2.0, 1.0])).is_err());
    }

    #[test]
    fn fixtures_certify() {
        for (t, vol) in [
            (fixtures::appendix_a().unwrap(), fixtures::APPENDIX_A_VOLUME),
            (fixtures::appendix_b().unwrap(), fixtures::APPENDIX_B_VOLUME),
        ] {
            let cert = certify_hyperbolic(&t).unwrap();
            assert!(cert.is_valid());
            assert!(cert.radius_used <= 1e-8, "{}", cert.radius_used);
            assert!(cert.volume_enclosure.width() < 1e-6);
            assert!((cert.volume_enclosure.mid() - vol).abs() < 5e-7);
            for z in &cert.enclosures {
                assert!(z.width() < 2.0 * cert.radius_used);
            }
        }
    }

    #[test]
    fn smaller_radius_recertifies_inside() {
        let t = fixtures::appendix_a().unwrap();
        let sys = build_equations(&t).unwrap();
        let cert = certify_hyperbolic(&t).unwrap();
        let mids = ShapeVector(cert.enclosures.iter().map(|z| z.mid()).collect());
        let again = krawczyk_test(&sys, &mids, cert.radius_used / 10.0).unwrap();
        assert!(again.is_valid());
        for (inner, outer) in again.enclosures.iter().zip(&cert.enclosures) {
            assert!(inner.intersect(outer).is_some());
        }
    }
}
