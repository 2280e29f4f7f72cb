//! Reader and writer for SnapPea-style `.tri` triangulation files.
//!
//! Layout, one item per line (blank lines are ignored):
//!
//! ```text
//! name
//! solution_type volume
//! oriented_manifold
//! CS_unknown
//! cusp_count fake_cusp_count
//! torus|klein  m  l                  (one line per cusp)
//! tet_count
//! n0 n1 n2 n3                        (neighbors across faces 0..3)
//! g0 g1 g2 g3                        (gluings as digit strings, g[v] = image of v)
//! c0 c1 c2 c3                        (cusp index of each vertex)
//! 16 ints x 4 lines                  (peripheral curves, see below)
//! re im                              (shape)
//! ```
//!
//! Peripheral lines are meridian (right-handed sheet), meridian (left-handed
//! sheet), longitude (right), longitude (left); the 16 entries of a line are
//! indexed `4 * vertex + face`.

use std::fmt::{self, Write as _};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A permutation of `{0, 1, 2, 3}`, `images[v]` being the image of `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Perm([u8; 4]);

impl Perm {
    pub const IDENTITY: Perm = Perm([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Self(images))
    }

    pub fn parse(s: &str) -> Option<Self> {
        let b = s.as_bytes();
        if b.len() != 4 {
            return None;
        }
        let mut images = [0u8; 4];
        for (i, &c) in b.iter().enumerate() {
            if !(b'0'..=b'3').contains(&c) {
                return None;
            }
            images[i] = c - b'0';
        }
        Self::new(images)
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.0[v] as usize
    }

    pub fn inverse(&self) -> Self {
        let mut inv = [0u8; 4];
        for v in 0..4 {
            inv[self.0[v] as usize] = v as u8;
        }
        Self(inv)
    }

    /// `(self * other)(v) = self(other(v))`.
    pub fn compose(&self, other: &Perm) -> Self {
        let mut out = [0u8; 4];
        for (v, o) in out.iter_mut().enumerate() {
            *o = self.0[other.0[v] as usize];
        }
        Self(out)
    }

    pub fn is_odd(&self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }

    pub fn all() -> impl Iterator<Item = Perm> {
        (0..256u16).filter_map(|code| {
            let images = [
                (code & 3) as u8,
                ((code >> 2) & 3) as u8,
                ((code >> 4) & 3) as u8,
                ((code >> 6) & 3) as u8,
            ];
            Perm::new(images)
        })
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CuspTopology {
    Torus,
    Klein,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspInfo {
    pub topology: CuspTopology,
    pub filling_m: f64,
    pub filling_l: f64,
}

impl CuspInfo {
    pub fn is_complete(&self) -> bool {
        self.filling_m == 0.0 && self.filling_l == 0.0
    }

    /// Integral filling coefficients, if both are integers within 1e-9.
    pub fn integral_filling(&self) -> Option<(i64, i64)> {
        let round = |x: f64| {
            let r = x.round();
            ((x - r).abs() <= 1e-9 && r.abs() < 1e15).then_some(r as i64)
        };
        Some((round(self.filling_m)?, round(self.filling_l)?))
    }
}

/// Peripheral curve rows.
pub const MERIDIAN: usize = 0;
pub const MERIDIAN_LEFT: usize = 1;
pub const LONGITUDE: usize = 2;
pub const LONGITUDE_LEFT: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tetrahedron {
    pub neighbors: [usize; 4],
    pub gluings: [Perm; 4],
    pub vertex_cusp: [usize; 4],
    /// `peripheral[row][vertex][face]`.
    pub peripheral: [[[i32; 4]; 4]; 4],
    pub shape: Complex64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolutionType {
    Geometric,
    Other(String),
}

impl SolutionType {
    fn parse(s: &str) -> Self {
        match s {
            "geometric_solution" => Self::Geometric,
            other => Self::Other(other.to_string()),
        }
    }
}

impl fmt::Display for SolutionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Geometric => f.write_str("geometric_solution"),
            Self::Other(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientability {
    Oriented,
    Nonorientable,
    Unknown,
}

impl Orientability {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "oriented_manifold" => Some(Self::Oriented),
            "nonorientable_manifold" => Some(Self::Nonorientable),
            "unknown_orientability" => Some(Self::Unknown),
            _ => None,
        }
    }
}

impl fmt::Display for Orientability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Oriented => "oriented_manifold",
            Self::Nonorientable => "nonorientable_manifold",
            Self::Unknown => "unknown_orientability",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triangulation {
    pub name: String,
    pub solution_type: SolutionType,
    pub volume_hint: f64,
    pub orientability: Orientability,
    /// Chern-Simons line, kept verbatim.
    pub cs_flag: String,
    pub fake_cusp_count: usize,
    pub cusps: Vec<CuspInfo>,
    pub tets: Vec<Tetrahedron>,
}

impl Triangulation {
    pub fn tet_count(&self) -> usize {
        self.tets.len()
    }

    pub fn cusp_count(&self) -> usize {
        self.cusps.len()
    }

    pub fn shapes(&self) -> Vec<Complex64> {
        self.tets.iter().map(|t| t.shape).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("missing header")]
    MissingHeader,
    #[error("line {line}: unexpected end of input, expected {expected}")]
    UnexpectedEof { line: usize, expected: String },
    #[error("line {line}: wrong token count for {what}: expected {expected}, found {found}")]
    WrongTokenCount {
        line: usize,
        what: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: cannot read {token:?} as {expected}")]
    BadToken {
        line: usize,
        token: String,
        expected: String,
    },
    #[error("line {line}: malformed permutation {token:?}")]
    BadPermutation { line: usize, token: String },
    #[error("line {line}: unknown cusp topology {token:?}")]
    BadCuspTopology { line: usize, token: String },
    #[error("line {line}: unexpected trailing content after the last tetrahedron")]
    TrailingContent { line: usize },
    #[error("invalid triangulation: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
}

/// A violated structural invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Diagnostic {
    NeighborOutOfRange { tet: usize, face: usize, neighbor: usize },
    CuspOutOfRange { tet: usize, vertex: usize, cusp: usize },
    Involution { tet: usize, face: usize },
    CuspMismatch { tet: usize, face: usize, vertex: usize },
    OrientationReversingGluing { tet: usize, face: usize },
    PeripheralMismatch { tet: usize, face: usize, row: usize, vertex: usize },
    PeripheralOnOwnFace { tet: usize, row: usize, vertex: usize },
    LeftSheetNonzero { tet: usize, row: usize },
    NonIntegralFilling { cusp: usize },
    NoTetrahedra,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Diagnostic::*;
        match *self {
            NeighborOutOfRange { tet, face, neighbor } => write!(
                f,
                "tetrahedron {tet} face {face}: neighbor index {neighbor} out of range"
            ),
            CuspOutOfRange { tet, vertex, cusp } => write!(
                f,
                "tetrahedron {tet} vertex {vertex}: cusp index {cusp} out of range"
            ),
            Involution { tet, face } => write!(
                f,
                "tetrahedron {tet} face {face}: face pairing is not an involution"
            ),
            CuspMismatch { tet, face, vertex } => write!(
                f,
                "tetrahedron {tet} face {face}: vertex {vertex} changes cusp across the gluing"
            ),
            OrientationReversingGluing { tet, face } => write!(
                f,
                "tetrahedron {tet} face {face}: even gluing in an oriented manifold"
            ),
            PeripheralMismatch { tet, face, row, vertex } => write!(
                f,
                "tetrahedron {tet} face {face}: peripheral row {row} at vertex {vertex} does not match its glued partner"
            ),
            PeripheralOnOwnFace { tet, row, vertex } => write!(
                f,
                "tetrahedron {tet}: peripheral row {row} has a nonzero entry on face {vertex} at vertex {vertex}"
            ),
            LeftSheetNonzero { tet, row } => write!(
                f,
                "tetrahedron {tet}: left-handed peripheral row {row} is nonzero in an oriented manifold"
            ),
            NonIntegralFilling { cusp } => {
                write!(f, "cusp {cusp}: nonzero filling is not integral")
            }
            NoTetrahedra => write!(f, "triangulation has no tetrahedra"),
        }
    }
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Self {
            inner: it.peekable(),
            last_line: 0,
        }
    }

    fn next_line(&mut self, expected: &str) -> Result<(usize, &'a str), ParseError> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last_line = n;
                Ok((n, l))
            }
            None => Err(ParseError::UnexpectedEof {
                line: self.last_line + 1,
                expected: expected.to_string(),
            }),
        }
    }

    fn tokens(&mut self, what: &str, count: usize) -> Result<(usize, Vec<&'a str>), ParseError> {
        let (n, l) = self.next_line(what)?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != count {
            return Err(ParseError::WrongTokenCount {
                line: n,
                what: what.to_string(),
                expected: count,
                found: toks.len(),
            });
        }
        Ok((n, toks))
    }
}

fn number<T: std::str::FromStr>(line: usize, token: &str, expected: &str) -> Result<T, ParseError> {
    token.parse().map_err(|_| ParseError::BadToken {
        line,
        token: token.to_string(),
        expected: expected.to_string(),
    })
}

/// Parses and validates a triangulation.
pub fn parse_triangulation(text: &str) -> Result<Triangulation, ParseError> {
    let t = parse_unchecked(text)?;
    let diagnostics = validate(&t);
    if diagnostics.is_empty() {
        Ok(t)
    } else {
        Err(ParseError::Invalid(diagnostics))
    }
}

/// Parses the token layout without checking cross-references.
pub fn parse_unchecked(text: &str) -> Result<Triangulation, ParseError> {
    let mut lines = Lines::new(text);
    let (_, name) = lines.next_line("name").map_err(|_| ParseError::MissingHeader)?;
    let name = name.to_string();

    let (n, toks) = lines.tokens("solution type and volume", 2)?;
    let solution_type = SolutionType::parse(toks[0]);
    let volume_hint: f64 = number(n, toks[1], "volume")?;

    let (n, toks) = lines.tokens("orientability", 1)?;
    let orientability = Orientability::parse(toks[0]).ok_or_else(|| ParseError::BadToken {
        line: n,
        token: toks[0].to_string(),
        expected: "orientability".into(),
    })?;

    let (_, cs) = lines.next_line("Chern-Simons line")?;
    let cs_flag = cs.to_string();

    let (n, toks) = lines.tokens("cusp counts", 2)?;
    let cusp_count: usize = number(n, toks[0], "cusp count")?;
    let fake_cusp_count: usize = number(n, toks[1], "fake cusp count")?;

    let mut cusps = Vec::with_capacity(cusp_count);
    for _ in 0..cusp_count {
        let (n, toks) = lines.tokens("cusp line", 3)?;
        let topology = match toks[0] {
            "torus" => CuspTopology::Torus,
            "Klein" | "klein" => CuspTopology::Klein,
            other => {
                return Err(ParseError::BadCuspTopology {
                    line: n,
                    token: other.to_string(),
                })
            }
        };
        cusps.push(CuspInfo {
            topology,
            filling_m: number(n, toks[1], "filling coefficient")?,
            filling_l: number(n, toks[2], "filling coefficient")?,
        });
    }

    let (n, toks) = lines.tokens("tetrahedron count", 1)?;
    let tet_count: usize = number(n, toks[0], "tetrahedron count")?;

    let mut tets = Vec::with_capacity(tet_count);
    for _ in 0..tet_count {
        let (n, toks) = lines.tokens("neighbor line", 4)?;
        let mut neighbors = [0usize; 4];
        for (f, t) in toks.iter().enumerate() {
            neighbors[f] = number(n, t, "neighbor index")?;
        }

        let (n, toks) = lines.tokens("gluing line", 4)?;
        let mut gluings = [Perm::IDENTITY; 4];
        for (f, t) in toks.iter().enumerate() {
            gluings[f] = Perm::parse(t).ok_or_else(|| ParseError::BadPermutation {
                line: n,
                token: t.to_string(),
            })?;
        }

        let (n, toks) = lines.tokens("cusp index line", 4)?;
        let mut vertex_cusp = [0usize; 4];
        for (v, t) in toks.iter().enumerate() {
            // SnapPea writes -1 for finite vertices; those are not supported here.
            vertex_cusp[v] = number(n, t, "cusp index")?;
        }

        let mut peripheral = [[[0i32; 4]; 4]; 4];
        for row in peripheral.iter_mut() {
            let (n, toks) = lines.tokens("peripheral curve line", 16)?;
            for (k, t) in toks.iter().enumerate() {
                row[k / 4][k % 4] = number(n, t, "peripheral coefficient")?;
            }
        }

        let (n, toks) = lines.tokens("shape line", 2)?;
        let shape = Complex64::new(number(n, toks[0], "shape")?, number(n, toks[1], "shape")?);

        tets.push(Tetrahedron {
            neighbors,
            gluings,
            vertex_cusp,
            peripheral,
            shape,
        });
    }

    if let Some(&(line, _)) = lines.inner.peek() {
        return Err(ParseError::TrailingContent { line });
    }

    Ok(Triangulation {
        name,
        solution_type,
        volume_hint,
        orientability,
        cs_flag,
        fake_cusp_count,
        cusps,
        tets,
    })
}

/// Checks every structural invariant; an empty list means the model is valid.
pub fn validate(t: &Triangulation) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n = t.tets.len();
    if n == 0 {
        out.push(Diagnostic::NoTetrahedra);
    }
    for (i, c) in t.cusps.iter().enumerate() {
        if !c.is_complete() && c.integral_filling().is_none() {
            out.push(Diagnostic::NonIntegralFilling { cusp: i });
        }
    }
    let oriented = t.orientability == Orientability::Oriented;

    for (ti, tet) in t.tets.iter().enumerate() {
        for v in 0..4 {
            if tet.vertex_cusp[v] >= t.cusps.len() {
                out.push(Diagnostic::CuspOutOfRange {
                    tet: ti,
                    vertex: v,
                    cusp: tet.vertex_cusp[v],
                });
            }
        }
        for row in 0..4 {
            for v in 0..4 {
                if tet.peripheral[row][v][v] != 0 {
                    out.push(Diagnostic::PeripheralOnOwnFace {
                        tet: ti,
                        row,
                        vertex: v,
                    });
                }
            }
        }
        if oriented {
            for row in [MERIDIAN_LEFT, LONGITUDE_LEFT] {
                if tet.peripheral[row].iter().flatten().any(|&x| x != 0) {
                    out.push(Diagnostic::LeftSheetNonzero { tet: ti, row });
                }
            }
        }

        for f in 0..4 {
            let nb = tet.neighbors[f];
            if nb >= n {
                out.push(Diagnostic::NeighborOutOfRange {
                    tet: ti,
                    face: f,
                    neighbor: nb,
                });
                continue;
            }
            let g = tet.gluings[f];
            let other = &t.tets[nb];
            let back_face = g.apply(f);
            if other.neighbors[back_face] != ti || other.gluings[back_face] != g.inverse() {
                out.push(Diagnostic::Involution { tet: ti, face: f });
                continue;
            }
            if oriented && !g.is_odd() {
                out.push(Diagnostic::OrientationReversingGluing { tet: ti, face: f });
            }
            for v in (0..4).filter(|&v| v != f) {
                let w = g.apply(v);
                if tet.vertex_cusp[v] != other.vertex_cusp[w] {
                    out.push(Diagnostic::CuspMismatch {
                        tet: ti,
                        face: f,
                        vertex: v,
                    });
                }
                // A curve leaving through face f enters the partner through g(f).
                for row in [MERIDIAN, LONGITUDE] {
                    if tet.peripheral[row][v][f] != -other.peripheral[row][w][back_face] {
                        out.push(Diagnostic::PeripheralMismatch {
                            tet: ti,
                            face: f,
                            row,
                            vertex: v,
                        });
                    }
                }
            }
        }
    }
    out
}

fn fmt_filling(x: f64) -> String {
    format!("{x:.12}")
}

/// Writes the triangulation in the same layout it is read from.
pub fn serialize_triangulation(t: &Triangulation) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", t.name);
    let _ = writeln!(s, "{}  {}", t.solution_type, format_volume(t.volume_hint));
    let _ = writeln!(s, "{}", t.orientability);
    let _ = writeln!(s, "{}", t.cs_flag);
    let _ = writeln!(s);
    let _ = writeln!(s, "{} {}", t.cusps.len(), t.fake_cusp_count);
    for c in &t.cusps {
        let topo = match c.topology {
            CuspTopology::Torus => "torus",
            CuspTopology::Klein => "Klein",
        };
        let _ = writeln!(
            s,
            "    {topo}  {:>15}  {:>15}",
            fmt_filling(c.filling_m),
            fmt_filling(c.filling_l)
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "{}", t.tets.len());
    for tet in &t.tets {
        for nb in tet.neighbors {
            let _ = write!(s, "{nb:>4} ");
        }
        let _ = writeln!(s);
        for g in tet.gluings {
            let _ = write!(s, " {g}");
        }
        let _ = writeln!(s);
        for c in tet.vertex_cusp {
            let _ = write!(s, "{c:>4} ");
        }
        let _ = writeln!(s);
        for row in &tet.peripheral {
            for x in row.iter().flatten() {
                let _ = write!(s, " {x:>2}");
            }
            let _ = writeln!(s);
        }
        let _ = writeln!(s, "  {:.12}   {:.12}", tet.shape.re, tet.shape.im);
        let _ = writeln!(s);
    }
    s
}

fn format_volume(v: f64) -> String {
    // Shortest representation that reads back to the same value.
    format!("{v}")
}

/// Searches for a relabeling of tetrahedra and vertices carrying the face
/// gluings of `a` onto those of `b`.
pub fn combinatorial_isomorphic(a: &Triangulation, b: &Triangulation) -> bool {
    let n = a.tets.len();
    if n != b.tets.len() || n == 0 {
        return n == b.tets.len();
    }
    let perms: Vec<Perm> = Perm::all().collect();
    for start in 0..n {
        for &p in &perms {
            if try_extend(a, b, start, p) {
                return true;
            }
        }
    }
    false
}

fn try_extend(a: &Triangulation, b: &Triangulation, start: usize, p0: Perm) -> bool {
    let n = a.tets.len();
    // map[i] = (tet of b, vertex map) for tet i of a.
    let mut map: Vec<Option<(usize, Perm)>> = vec![None; n];
    let mut used = vec![false; n];
    map[0] = Some((start, p0));
    used[start] = true;
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        let (j, p) = map[i].expect("queued tetrahedra are mapped");
        let ta = &a.tets[i];
        let tb = &b.tets[j];
        for f in 0..4 {
            let na = ta.neighbors[f];
            let ga = ta.gluings[f];
            let fb = p.apply(f);
            let nb = tb.neighbors[fb];
            let gb = tb.gluings[fb];
            // The neighbor's vertex map q must satisfy q . ga = gb . p.
            let q = gb.compose(&p).compose(&ga.inverse());
            match map[na] {
                Some((mj, mq)) => {
                    if mj != nb || mq != q {
                        return false;
                    }
                }
                None => {
                    if used[nb] {
                        return false;
                    }
                    used[nb] = true;
                    map[na] = Some((nb, q));
                    stack.push(na);
                }
            }
        }
    }
    map.iter().all(Option::is_some)
}
