//! Thurston gluing equations, their Newton solution and hyperbolic volume.
//!
//! Each tetrahedron carries a shape `z` on edges 01 and 23, `z' = 1/(1-z)` on
//! edges 02 and 13 and `z'' = 1 - 1/z` on edges 03 and 12. Every equation is
//! written in logarithmic form
//!
//! ```text
//! sum_j a_j log z_j + sum_j b_j log(1 - z_j) + branch * pi i = c * pi i
//! ```
//!
//! using principal logarithms. On the upper half-plane `log z' = -log(1-z)`
//! and `log z'' = log(1-z) - log z + pi i` hold exactly, so the branch term
//! is an integer fixed when the row is assembled and never changes along a
//! path of geometric shapes.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{independent_rows, Lu};
use crate::tri::{CuspTopology, Orientability, Triangulation, LONGITUDE, MERIDIAN};

/// Vertex pairs of the six edges of a tetrahedron.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Which shape parameter sits on a given edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParamType {
    Z,
    ZPrime,
    ZDoublePrime,
}

impl ParamType {
    pub fn of_edge(u: usize, v: usize) -> Self {
        match (u.min(v), u.max(v)) {
            (0, 1) | (2, 3) => Self::Z,
            (0, 2) | (1, 3) => Self::ZPrime,
            (0, 3) | (1, 2) => Self::ZDoublePrime,
            _ => panic!("({u}, {v}) is not an edge"),
        }
    }
}

pub fn edge_index(u: usize, v: usize) -> usize {
    let key = (u.min(v), u.max(v));
    EDGES.iter().position(|&e| e == key).expect("valid edge")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeIncidence {
    pub tet: usize,
    pub edge: usize,
    pub param: ParamType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClass {
    pub orbit: Vec<EdgeIncidence>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RowKind {
    Edge { class: usize },
    CuspComplete { cusp: usize },
    CuspFilled { cusp: usize, m: i64, l: i64 },
}

impl RowKind {
    pub fn is_cusp(&self) -> bool {
        !matches!(self, RowKind::Edge { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingRow {
    pub kind: RowKind,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    /// Right-hand side in units of `pi i`.
    pub c: i64,
    /// Branch offset in units of `pi i`.
    pub branch: i64,
}

impl GluingRow {
    fn new(kind: RowKind, n: usize, c: i64) -> Self {
        Self {
            kind,
            a: vec![0; n],
            b: vec![0; n],
            c,
            branch: 0,
        }
    }

    /// Adds `k` copies of the log of the given parameter of tetrahedron `tet`.
    fn add_param(&mut self, tet: usize, param: ParamType, k: i64) {
        match param {
            ParamType::Z => self.a[tet] += k,
            ParamType::ZPrime => self.b[tet] -= k,
            ParamType::ZDoublePrime => {
                self.b[tet] += k;
                self.a[tet] -= k;
                self.branch += k;
            }
        }
    }

    fn add_scaled(&mut self, other: &GluingRow, k: i64) {
        for (x, y) in self.a.iter_mut().zip(&other.a) {
            *x += k * y;
        }
        for (x, y) in self.b.iter_mut().zip(&other.b) {
            *x += k * y;
        }
        self.branch += k * other.branch;
    }

    pub fn value(&self, z: &[Complex64]) -> Complex64 {
        let mut s = Complex64::new(0.0, (self.branch - self.c) as f64 * PI);
        for (j, zj) in z.iter().enumerate() {
            if self.a[j] != 0 {
                s += self.a[j] as f64 * zj.ln();
            }
            if self.b[j] != 0 {
                s += self.b[j] as f64 * (Complex64::new(1.0, 0.0) - zj).ln();
            }
        }
        s
    }

    /// Derivatives with respect to each `z_j`.
    pub fn gradient(&self, z: &[Complex64]) -> Vec<Complex64> {
        z.iter()
            .enumerate()
            .map(|(j, zj)| {
                let one = Complex64::new(1.0, 0.0);
                self.a[j] as f64 / zj - self.b[j] as f64 / (one - zj)
            })
            .collect()
    }
}

/// Edge rows followed by one row per cusp, in cusp order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingSystem {
    pub tet_count: usize,
    pub rows: Vec<GluingRow>,
}

impl GluingSystem {
    pub fn edge_rows(&self) -> impl Iterator<Item = &GluingRow> {
        self.rows.iter().filter(|r| !r.kind.is_cusp())
    }

    pub fn cusp_rows(&self) -> impl Iterator<Item = &GluingRow> {
        self.rows.iter().filter(|r| r.kind.is_cusp())
    }

    pub fn jacobian(&self, rows: &[usize], z: &[Complex64]) -> Vec<Vec<Complex64>> {
        rows.iter().map(|&i| self.rows[i].gradient(z)).collect()
    }

    /// Cusp rows plus a maximal independent set of edge rows, chosen greedily
    /// in row order from the Jacobian at `z`.
    pub fn select_square(&self, z: &[Complex64]) -> Vec<usize> {
        let all: Vec<usize> = (0..self.rows.len()).collect();
        let jac = self.jacobian(&all, z);
        let order: Vec<usize> = all
            .iter()
            .copied()
            .filter(|&i| self.rows[i].kind.is_cusp())
            .chain(all.iter().copied().filter(|&i| !self.rows[i].kind.is_cusp()))
            .collect();
        let mut kept = independent_rows(&jac, &order, 1e-8);
        kept.sort_unstable();
        kept
    }
}

/// Newtype for one complex shape per tetrahedron.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ShapeVector(pub Vec<Complex64>);

impl ShapeVector {
    pub fn is_geometric(&self) -> bool {
        self.0.iter().all(|z| z.im > 0.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<Complex64>> for ShapeVector {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GluingError {
    #[error("cusp {0} is a Klein bottle; only torus cusps are supported")]
    KleinCusp(usize),
    #[error("cusp {0} has a non-integral filling")]
    NonIntegralFilling(usize),
    #[error("only oriented triangulations are supported")]
    NotOriented,
    #[error("shape vector has {found} entries, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("initial shapes are not all in the upper half-plane")]
    NotGeometric,
    #[error("could only select {found} independent equations for {expected} unknowns")]
    RankDeficient { expected: usize, found: usize },
    #[error("singular Jacobian at iteration {0}")]
    SingularJacobian(usize),
    #[error("Newton iteration left the upper half-plane at iteration {iteration} (tetrahedron {tet})")]
    HalfPlaneExit { iteration: usize, tet: usize },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Divergence { iterations: usize, residual: f64 },
}

/// Walks around every edge of the triangulation, recording the tetrahedron
/// edges identified to it.
pub fn edge_classes(t: &Triangulation) -> Vec<EdgeClass> {
    let n = t.tets.len();
    let mut seen = vec![[false; 6]; n];
    let mut classes = Vec::new();
    for t0 in 0..n {
        for e0 in 0..6 {
            if seen[t0][e0] {
                continue;
            }
            let (a0, b0) = EDGES[e0];
            let mut orbit = Vec::new();
            let (mut tet, mut a, mut b) = (t0, a0, b0);
            // Leave through the face opposite the smaller remaining vertex.
            let mut exit = (0..4).find(|&v| v != a && v != b).expect("two vertices remain");
            loop {
                let e = edge_index(a, b);
                if seen[tet][e] {
                    break;
                }
                seen[tet][e] = true;
                orbit.push(EdgeIncidence {
                    tet,
                    edge: e,
                    param: ParamType::of_edge(a, b),
                });
                let g = t.tets[tet].gluings[exit];
                let next = t.tets[tet].neighbors[exit];
                let entry = g.apply(exit);
                a = g.apply(a);
                b = g.apply(b);
                tet = next;
                exit = (0..4)
                    .find(|&v| v != a && v != b && v != entry)
                    .expect("one face remains");
            }
            classes.push(EdgeClass { orbit });
        }
    }
    classes
}

/// `REMAINING_FACE[v][f]` is the side reached after side `f` when circling
/// vertex `v` of a tetrahedron.
const REMAINING_FACE: [[usize; 4]; 4] = [
    [usize::MAX, 3, 1, 2],
    [2, usize::MAX, 3, 0],
    [3, 0, usize::MAX, 1],
    [1, 2, 0, usize::MAX],
];

/// Signed number of strands running from side `a` to side `b` of a cusp
/// triangle whose sides meet the curve `a` and `b` times.
fn flow(a: i32, b: i32) -> i64 {
    if (a < 0) == (b < 0) {
        0
    } else if a.abs() < b.abs() {
        a as i64
    } else {
        -(b as i64)
    }
}

/// Log-holonomy of a peripheral curve row, as a row of parameter counts.
fn holonomy(t: &Triangulation, cusp: usize, curve: usize, row: &mut GluingRow, scale: i64) {
    if scale == 0 {
        return;
    }
    for (ti, tet) in t.tets.iter().enumerate() {
        for v in 0..4 {
            if tet.vertex_cusp[v] != cusp {
                continue;
            }
            for initial in (0..4).filter(|&f| f != v) {
                let terminal = REMAINING_FACE[v][initial];
                let strands = flow(
                    tet.peripheral[curve][v][initial],
                    tet.peripheral[curve][v][terminal],
                );
                if strands == 0 {
                    continue;
                }
                let other = 6 - v - initial - terminal;
                row.add_param(ti, ParamType::of_edge(v, other), scale * strands);
            }
        }
    }
}

/// Assembles edge rows (one per edge class) and one row per cusp: `H(m) = 0`
/// for a complete cusp, `m H(m) + l H(l) = 2 pi i` for a filled one.
pub fn build_equations(t: &Triangulation) -> Result<GluingSystem, GluingError> {
    if t.orientability != Orientability::Oriented {
        return Err(GluingError::NotOriented);
    }
    let n = t.tets.len();
    let mut rows = Vec::new();
    for (k, class) in edge_classes(t).iter().enumerate() {
        let mut row = GluingRow::new(RowKind::Edge { class: k }, n, 2);
        for inc in &class.orbit {
            row.add_param(inc.tet, inc.param, 1);
        }
        rows.push(row);
    }
    for (k, cusp) in t.cusps.iter().enumerate() {
        if cusp.topology == CuspTopology::Klein {
            return Err(GluingError::KleinCusp(k));
        }
        let row = if cusp.is_complete() {
            let mut row = GluingRow::new(RowKind::CuspComplete { cusp: k }, n, 0);
            holonomy(t, k, MERIDIAN, &mut row, 1);
            row
        } else {
            let (m, l) = cusp
                .integral_filling()
                .ok_or(GluingError::NonIntegralFilling(k))?;
            let mut row = GluingRow::new(RowKind::CuspFilled { cusp: k, m, l }, n, 2);
            let mut meridian = GluingRow::new(row.kind, n, 0);
            holonomy(t, k, MERIDIAN, &mut meridian, 1);
            let mut longitude = GluingRow::new(row.kind, n, 0);
            holonomy(t, k, LONGITUDE, &mut longitude, 1);
            row.add_scaled(&meridian, m);
            row.add_scaled(&longitude, l);
            row
        };
        rows.push(row);
    }
    Ok(GluingSystem { tet_count: n, rows })
}

/// Per-row modulus of the logarithmic equations at `s`.
pub fn residual(sys: &GluingSystem, s: &ShapeVector) -> Vec<f64> {
    sys.rows.iter().map(|r| r.value(&s.0).norm()).collect()
}

pub fn max_residual(sys: &GluingSystem, s: &ShapeVector) -> f64 {
    residual(sys, s).into_iter().fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonOutcome {
    pub shapes: ShapeVector,
    pub iterations: usize,
    pub residual: f64,
    /// Rows of the square subsystem Newton was run on.
    pub selected_rows: Vec<usize>,
    /// Maximum residual after each iteration, starting with the initial point.
    pub history: Vec<f64>,
}

pub fn newton_solve(
    sys: &GluingSystem,
    initial: &ShapeVector,
    opts: NewtonOptions,
) -> Result<NewtonOutcome, GluingError> {
    let n = sys.tet_count;
    if initial.len() != n {
        return Err(GluingError::WrongLength {
            expected: n,
            found: initial.len(),
        });
    }
    if !initial.is_geometric() {
        return Err(GluingError::NotGeometric);
    }
    let selected = sys.select_square(&initial.0);
    if selected.len() != n {
        return Err(GluingError::RankDeficient {
            expected: n,
            found: selected.len(),
        });
    }

    let mut z = initial.0.clone();
    let mut history = Vec::new();
    for iteration in 0..=opts.max_iter {
        let res = max_residual(sys, &ShapeVector(z.clone()));
        history.push(res);
        if res < opts.tol {
            return Ok(NewtonOutcome {
                shapes: ShapeVector(z),
                iterations: iteration,
                residual: res,
                selected_rows: selected,
                history,
            });
        }
        if iteration == opts.max_iter || !res.is_finite() {
            return Err(GluingError::Divergence {
                iterations: iteration,
                residual: res,
            });
        }
        let f: Vec<Complex64> = selected.iter().map(|&i| sys.rows[i].value(&z)).collect();
        let lu = Lu::factor(sys.jacobian(&selected, &z))
            .ok_or(GluingError::SingularJacobian(iteration))?;
        let step = lu.solve(&f);
        for (j, (zj, dj)) in z.iter_mut().zip(&step).enumerate() {
            *zj -= dj;
            // Also catches NaN.
            if zj.im.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                return Err(GluingError::HalfPlaneExit {
                    iteration: iteration + 1,
                    tet: j,
                });
            }
        }
    }
    unreachable!("loop returns on the last iteration")
}

/// Coefficients `B_n / (n + 1)!` of `Li2(z) = sum B_n u^(n+1) / (n+1)!` with
/// `u = -log(1 - z)` and `B_1 = -1/2`; odd `n > 1` vanish and are skipped.
pub(crate) const LI2_BERNOULLI: [(u32, f64); 22] = [
    (0, 1.0),
    (1, -0.25),
    (2, 0.027777777777777776),
    (4, -0.0002777777777777778),
    (6, 4.72411186696901e-06),
    (8, -9.185773074661964e-08),
    (10, 1.8978869988971e-09),
    (12, -4.0647616451442256e-11),
    (14, 8.921691020456452e-13),
    (16, -1.9939295860721074e-14),
    (18, 4.518980029619918e-16),
    (20, -1.0356517612181247e-17),
    (22, 2.395218621026187e-19),
    (24, -5.581785874325009e-21),
    (26, 1.3091507554183213e-22),
    (28, -3.0874198024267403e-24),
    (30, 7.315975652702203e-26),
    (32, -1.740845657234001e-27),
    (34, 4.1576356446139e-29),
    (36, -9.962148488284622e-31),
    (38, 2.3940344248961652e-32),
    (40, -5.76834735536739e-34),
];

/// The six maps `z -> w` relating `D(z) = sign * D(w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Symmetry {
    Identity,
    OneMinusInv,
    InvOneMinus,
    Inv,
    OneMinus,
    OverZMinusOne,
}

impl Symmetry {
    pub(crate) const ALL: [Symmetry; 6] = [
        Symmetry::Identity,
        Symmetry::OneMinusInv,
        Symmetry::InvOneMinus,
        Symmetry::Inv,
        Symmetry::OneMinus,
        Symmetry::OverZMinusOne,
    ];

    pub(crate) fn sign(self) -> f64 {
        match self {
            Self::Identity | Self::OneMinusInv | Self::InvOneMinus => 1.0,
            _ => -1.0,
        }
    }

    pub(crate) fn apply(self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Self::Identity => z,
            Self::OneMinusInv => one - one / z,
            Self::InvOneMinus => one / (one - z),
            Self::Inv => one / z,
            Self::OneMinus => one - z,
            Self::OverZMinusOne => z / (z - one),
        }
    }

    /// A map sending `z` into `|w| <= 1`, `Re w <= 1/2`, where the series
    /// in `-log(1 - w)` converges quickly.
    pub(crate) fn reducing(z: Complex64) -> Symmetry {
        Self::ALL
            .into_iter()
            .map(|s| (s, s.apply(z)))
            .filter(|(_, w)| w.is_finite())
            .min_by(|x, y| score(x.1).total_cmp(&score(y.1)))
            .map(|(s, _)| s)
            .unwrap_or(Symmetry::Identity)
    }
}

fn score(w: Complex64) -> f64 {
    // Region violation first, then the size of -log(1 - w).
    let outside = (w.norm() - 1.0).max(0.0) + (w.re - 0.5).max(0.0);
    outside * 1e3 + (Complex64::new(1.0, 0.0) - w).ln().norm()
}

/// Bloch-Wigner dilogarithm `D(z) = Im Li2(z) + arg(1 - z) log|z|`.
pub fn bloch_wigner(z: Complex64) -> f64 {
    if z.im == 0.0 || !z.is_finite() {
        return 0.0;
    }
    let sym = Symmetry::reducing(z);
    let w = sym.apply(z);
    let one = Complex64::new(1.0, 0.0);
    let u = -(one - w).ln();
    let mut li2 = Complex64::new(0.0, 0.0);
    let mut power = u; // u^(n+1)
    let mut last_n = 0;
    for &(n, c) in LI2_BERNOULLI.iter() {
        power *= u.powu(n - last_n);
        last_n = n;
        let term = c * power;
        li2 += term;
        if term.norm() < 1e-18 * li2.norm().max(1e-300) {
            break;
        }
    }
    let d = li2.im + (one - w).arg() * w.norm().ln();
    sym.sign() * d
}

/// Sum of Bloch-Wigner values, the volume of a geometric shape vector.
pub fn volume(s: &ShapeVector) -> f64 {
    s.0.iter().map(|&z| bloch_wigner(z)).sum()
}
