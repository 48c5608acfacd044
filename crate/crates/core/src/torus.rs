//! The torus grid `C_n x C_m`: edge naming, incidence, and the decomposition
//! of the edge set into alternating "diagonal" cycles.
//!
//! All public coordinates are 1-based. Vertex `(i, j)` sits in row `i`
//! (`1..=n`) and column `j` (`1..=m`). Every edge has exactly one name:
//!
//! * `H(i, j)` joins `(i, j)` to `(i, j+1)`,
//! * `V(i, j)` joins `(i, j)` to `(i+1, j)`,
//!
//! with the `+1` wrapping around the cycle.
//!
//! A diagonal starting at column `s` is the closed walk
//! `H(1, s), V(1, s+1), H(2, s+1), V(2, s+2), ...` which alternates between
//! horizontal and vertical steps. It returns to `(1, s)` after `2 lcm(n, m)`
//! edges, so the `q = 2nm` edges split into `gcd(n, m)` such cycles.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(a: usize, b: usize) -> usize {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Reduces `x` into `1..=modulus`.
#[inline]
pub fn wrap(x: i64, modulus: usize) -> usize {
    let m = modulus as i64;
    ((x - 1).rem_euclid(m) + 1) as usize
}

/// Dimensions of `C_n x C_m` together with the derived cycle data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridDims {
    pub n: usize,
    pub m: usize,
    /// `lcm(n, m)`, half the length of every diagonal.
    pub l: usize,
    /// `gcd(n, m)`, the number of diagonals.
    pub d: usize,
    /// Number of edges, `2nm`.
    pub q: usize,
    /// `(l - 1) / 2`, present only when `l` is odd.
    pub lp: Option<usize>,
}

pub fn dims(n: usize, m: usize) -> Result<GridDims> {
    GridDims::new(n, m)
}

impl GridDims {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < 3 || m < 3 {
            return Err(Error::DimensionTooSmall { n, m });
        }
        let l = lcm(n, m);
        Ok(GridDims { n, m, l, d: gcd(n, m), q: 2 * n * m, lp: (l % 2 == 1).then_some((l - 1) / 2) })
    }

    /// The same grid with the factors swapped.
    pub fn transposed(&self) -> GridDims {
        GridDims { n: self.m, m: self.n, ..*self }
    }

    pub fn vertex_count(&self) -> usize {
        self.n * self.m
    }

    #[inline]
    pub fn row(&self, x: i64) -> usize {
        wrap(x, self.n)
    }

    #[inline]
    pub fn col(&self, x: i64) -> usize {
        wrap(x, self.m)
    }

    /// Dense index of an edge: horizontals first, row-major, then verticals.
    #[inline]
    pub fn edge_index(&self, e: EdgeRef) -> usize {
        let base = match e.orient {
            Orientation::H => 0,
            Orientation::V => self.n * self.m,
        };
        base + (e.i - 1) * self.m + (e.j - 1)
    }

    pub fn edge_at(&self, idx: usize) -> EdgeRef {
        let nm = self.n * self.m;
        let (orient, rest) = if idx < nm { (Orientation::H, idx) } else { (Orientation::V, idx - nm) };
        EdgeRef { orient, i: rest / self.m + 1, j: rest % self.m + 1 }
    }

    #[inline]
    pub fn vertex_index(&self, v: VertexRef) -> usize {
        (v.i - 1) * self.m + (v.j - 1)
    }

    pub fn vertex_at(&self, idx: usize) -> VertexRef {
        VertexRef { i: idx / self.m + 1, j: idx % self.m + 1 }
    }

    pub fn contains_edge(&self, e: EdgeRef) -> bool {
        (1..=self.n).contains(&e.i) && (1..=self.m).contains(&e.j)
    }

    pub fn contains_vertex(&self, v: VertexRef) -> bool {
        (1..=self.n).contains(&v.i) && (1..=self.m).contains(&v.j)
    }

    /// All edges in [`edge_index`](Self::edge_index) order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        (0..self.q).map(|idx| self.edge_at(idx))
    }

    /// All vertices in row-major order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexRef> + '_ {
        (0..self.vertex_count()).map(|idx| self.vertex_at(idx))
    }

    pub fn endpoints(&self, e: EdgeRef) -> (VertexRef, VertexRef) {
        let a = VertexRef { i: e.i, j: e.j };
        let b = match e.orient {
            Orientation::H => VertexRef { i: e.i, j: self.col(e.j as i64 + 1) },
            Orientation::V => VertexRef { i: self.row(e.i as i64 + 1), j: e.j },
        };
        (a, b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Orientation {
    H,
    V,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::H => "H",
            Orientation::V => "V",
        })
    }
}

/// Canonical name of one torus edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeRef {
    pub orient: Orientation,
    pub i: usize,
    pub j: usize,
}

impl EdgeRef {
    pub const fn h(i: usize, j: usize) -> Self {
        EdgeRef { orient: Orientation::H, i, j }
    }

    pub const fn v(i: usize, j: usize) -> Self {
        EdgeRef { orient: Orientation::V, i, j }
    }

    /// Ordering key `(i, j, orientation)` used for deterministic tie-breaks.
    pub fn sort_key(&self) -> (usize, usize, Orientation) {
        (self.i, self.j, self.orient)
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.orient, self.i, self.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexRef {
    pub i: usize,
    pub j: usize,
}

impl VertexRef {
    pub const fn new(i: usize, j: usize) -> Self {
        VertexRef { i, j }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x({},{})", self.i, self.j)
    }
}

/// The four edges at `v`: `H(i,j)`, `H(i,j-1)`, `V(i,j)`, `V(i-1,j)`.
pub fn incident_edges(v: VertexRef, dims: &GridDims) -> [EdgeRef; 4] {
    let (i, j) = (v.i as i64, v.j as i64);
    [EdgeRef::h(v.i, v.j), EdgeRef::h(v.i, dims.col(j - 1)), EdgeRef::v(v.i, v.j), EdgeRef::v(dims.row(i - 1), v.j)]
}

/// One alternating cycle, stored as `h_1, v_1, h_2, v_2, ..., h_l, v_l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagonal {
    pub index: usize,
    pub start_col: usize,
    pub edges: Vec<EdgeRef>,
}

impl Diagonal {
    /// Length `l` of each of the two edge families.
    pub fn half_len(&self) -> usize {
        self.edges.len() / 2
    }

    /// `h_k`, 1-based.
    pub fn h(&self, k: usize) -> EdgeRef {
        self.edges[2 * (k - 1)]
    }

    /// `v_k`, 1-based.
    pub fn v(&self, k: usize) -> EdgeRef {
        self.edges[2 * (k - 1) + 1]
    }
}

/// `h_k` of the diagonal starting at `(1, s)`.
#[inline]
pub fn diagonal_h(k: usize, s: usize, dims: &GridDims) -> EdgeRef {
    EdgeRef::h(dims.row(k as i64), dims.col((s + k) as i64 - 1))
}

/// `v_k` of the diagonal starting at `(1, s)`.
#[inline]
pub fn diagonal_v(k: usize, s: usize, dims: &GridDims) -> EdgeRef {
    EdgeRef::v(dims.row(k as i64), dims.col((s + k) as i64))
}

pub fn diagonal(index: usize, start_col: usize, dims: &GridDims) -> Result<Diagonal> {
    let d = dims.d;
    if index == 0 || index > d || start_col == 0 || start_col > dims.m || wrap(start_col as i64, d) != index {
        return Err(Error::InvalidStartColumn { index, start: start_col, d });
    }
    let edges = (1..=dims.l).flat_map(|k| [diagonal_h(k, start_col, dims), diagonal_v(k, start_col, dims)]).collect();
    Ok(Diagonal { index, start_col, edges })
}

/// Splits the edge set into the `d` diagonals. Without explicit starts,
/// diagonal `j` starts at column `j`.
pub fn decompose(dims: &GridDims, starts: Option<&[usize]>) -> Result<Vec<Diagonal>> {
    match starts {
        Some(starts) => {
            if starts.len() != dims.d {
                return Err(Error::StartCount { expected: dims.d, got: starts.len() });
            }
            starts.iter().enumerate().map(|(idx, &s)| diagonal(idx + 1, s, dims)).collect()
        }
        None => (1..=dims.d).map(|j| diagonal(j, j, dims)).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CornerKind {
    /// `(h_k, v_k)`
    HV,
    /// `(v_{k-1}, h_k)`; the first one wraps to `(v_l, h_1)`.
    VH,
}

impl fmt::Display for CornerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CornerKind::HV => "HV",
            CornerKind::VH => "VH",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CornerPos {
    pub diag: usize,
    pub k: usize,
    pub kind: CornerKind,
}

impl fmt::Display for CornerPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{} {}#{}", self.diag, self.kind, self.k)
    }
}

/// The vertex shared by the two edges of a corner in the diagonal that starts at `(1, s)`.
pub fn corner_vertex(c: CornerPos, start_col: usize, dims: &GridDims) -> VertexRef {
    let col = match c.kind {
        CornerKind::HV => start_col + c.k,
        CornerKind::VH => start_col + c.k - 1,
    };
    VertexRef { i: dims.row(c.k as i64), j: dims.col(col as i64) }
}

/// The two edges forming a corner, in walk order.
pub fn corner_edges(c: CornerPos, start_col: usize, dims: &GridDims) -> (EdgeRef, EdgeRef) {
    match c.kind {
        CornerKind::HV => (diagonal_h(c.k, start_col, dims), diagonal_v(c.k, start_col, dims)),
        CornerKind::VH => {
            let prev = if c.k == 1 { dims.l } else { c.k - 1 };
            (diagonal_v(prev, start_col, dims), diagonal_h(c.k, start_col, dims))
        }
    }
}

/// Position of an edge inside its diagonal, relative to the canonical start `s = j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagonalPos {
    pub diag: usize,
    pub k: usize,
    pub orient: Orientation,
}

pub fn diagonal_of_edge(e: EdgeRef, dims: &GridDims) -> DiagonalPos {
    let (i, c) = (e.i as i64, e.j as i64);
    // h_k lands in column s+k-1, v_k in column s+k.
    let shift = match e.orient {
        Orientation::H => 1,
        Orientation::V => 0,
    };
    let diag = wrap(c - i + shift, dims.d);
    // k runs over i, i+n, i+2n, ... and exactly one of these hits column c.
    let k = (0..dims.l / dims.n)
        .map(|t| e.i + t * dims.n)
        .find(|&k| dims.col(diag as i64 + k as i64 - shift) == e.j)
        .expect("diagonal congruences are compatible modulo gcd");
    DiagonalPos { diag, k, orient: e.orient }
}
