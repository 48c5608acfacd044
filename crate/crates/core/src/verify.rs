//! Checking labelings: the supermagic property and per-corner audits.

use serde::Serialize;

use crate::construct::{expected_corner_table, ConstructionPlan};
use crate::error::Result;
use crate::labeling::Labeling;
use crate::torus::{corner_edges, corner_vertex, incident_edges, CornerPos, GridDims, VertexRef};

/// The only constant a supermagic labeling of `C_n x C_m` can have.
///
/// Summing all vertex weights counts each label twice, so
/// `nm * c = 2 * (1 + ... + q) = q (q + 1)` with `q = 2nm`.
pub fn forced_constant(dims: &GridDims) -> u64 {
    let nm = (dims.n * dims.m) as u64;
    4 * nm + 2
}

pub fn vertex_weight(lab: &Labeling, v: VertexRef) -> u64 {
    incident_edges(v, lab.dims()).iter().map(|&e| lab.get(e) as u64).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexWeight {
    pub vertex: VertexRef,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub m: usize,
    pub is_bijection: bool,
    /// Labels in `1..=q` used more than once.
    pub duplicates: Vec<u32>,
    /// Labels in `1..=q` not used at all.
    pub missing: Vec<u32>,
    /// Labels outside `1..=q`, each listed once.
    pub out_of_range: Vec<u32>,
    /// Row-major vertex weights.
    pub weights: Vec<Vec<u64>>,
    /// The common weight, when all vertices agree.
    pub constant: Option<u64>,
    pub expected_constant: u64,
    /// Vertices whose weight differs from `expected_constant`.
    pub irregular: Vec<VertexWeight>,
    pub is_supermagic: bool,
}

impl VerificationReport {
    /// Every label that breaks bijectivity, sorted.
    pub fn duplicate_or_missing(&self) -> Vec<u32> {
        let mut all: Vec<u32> =
            self.duplicates.iter().chain(&self.missing).chain(&self.out_of_range).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn weight(&self, v: VertexRef) -> u64 {
        self.weights[v.i - 1][v.j - 1]
    }
}

pub fn verify(lab: &Labeling) -> VerificationReport {
    let g = *lab.dims();
    let q = g.q;
    let mut counts = vec![0u32; q + 1];
    let mut out_of_range = Vec::new();
    for &x in lab.as_slice() {
        match counts.get_mut(x as usize) {
            Some(c) if x != 0 => *c += 1,
            _ => out_of_range.push(x),
        }
    }
    out_of_range.sort_unstable();
    out_of_range.dedup();
    let duplicates: Vec<u32> = (1..=q as u32).filter(|&x| counts[x as usize] > 1).collect();
    let missing: Vec<u32> = (1..=q as u32).filter(|&x| counts[x as usize] == 0).collect();
    let is_bijection = duplicates.is_empty() && missing.is_empty() && out_of_range.is_empty();

    let weights: Vec<Vec<u64>> =
        (1..=g.n).map(|i| (1..=g.m).map(|j| vertex_weight(lab, VertexRef::new(i, j))).collect()).collect();
    let first = weights[0][0];
    let constant = weights.iter().flatten().all(|&w| w == first).then_some(first);
    let expected_constant = forced_constant(&g);
    let irregular = g
        .vertices()
        .map(|v| VertexWeight { vertex: v, weight: weights[v.i - 1][v.j - 1] })
        .filter(|vw| vw.weight != expected_constant)
        .collect();

    VerificationReport {
        n: g.n,
        m: g.m,
        is_bijection,
        duplicates,
        missing,
        out_of_range,
        weights,
        constant,
        expected_constant,
        irregular,
        is_supermagic: is_bijection && constant.is_some(),
    }
}

/// Sum of the two labels meeting at a corner of the diagonal starting at `(1, s)`.
pub fn partial_weight(lab: &Labeling, c: CornerPos, start_col: usize) -> u64 {
    let (a, b) = corner_edges(c, start_col, lab.dims());
    lab.get(a) as u64 + lab.get(b) as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerMismatch {
    pub corner: CornerPos,
    pub vertex: VertexRef,
    pub expected: u64,
    pub actual: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerAuditReport {
    /// Corners examined (`2 d l`).
    pub corners: usize,
    pub mismatches: Vec<CornerMismatch>,
    pub clean: bool,
}

/// Compares every corner's partial weight against what `plan` promises.
///
/// For transposed plans the comparison runs on the transposed labeling, so
/// corner positions and vertices refer to the `n <= m` base grid.
pub fn audit_corners(lab: &Labeling, plan: &ConstructionPlan) -> Result<CornerAuditReport> {
    let table = expected_corner_table(plan, lab.dims())?;
    let base = if plan.transposed { lab.transpose() } else { lab.clone() };
    let g = table.dims;
    let mismatches: Vec<CornerMismatch> = table
        .iter()
        .filter_map(|(corner, expected)| {
            let s = table.start_cols[corner.diag - 1];
            let actual = partial_weight(&base, corner, s);
            (actual != expected).then(|| CornerMismatch {
                corner,
                vertex: corner_vertex(corner, s, &g),
                expected,
                actual,
            })
        })
        .collect();
    Ok(CornerAuditReport { corners: table.len(), clean: mismatches.is_empty(), mismatches })
}
