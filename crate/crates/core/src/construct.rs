//! Explicit supermagic labelings built diagonal by diagonal.
//!
//! Each diagonal `D^j` receives one block of `l` consecutive labels on its
//! horizontal edges (increasing along the walk) and one block on its
//! vertical edges (decreasing). With that layout most corners have a
//! partial weight of `2nm`, `2nm+1`, or `2nm+2`, and the labels are arranged
//! so that every vertex pairs an HV corner of `D^j` with a VH corner of
//! `D^{j+1}` summing to `4nm+2`. The few exceptional corners (`2nm+l` on
//! the HV side, `2nm-l+2` on the VH side) are lined up on the same vertices.
//!
//! Both constructions assume `n <= m`. Larger `n` is handled by building
//! the `m x n` labeling and transposing it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labeling::Labeling;
use crate::torus::{diagonal_h, diagonal_v, gcd, CornerKind, CornerPos, GridDims};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    OddOdd,
    EvenEven,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::OddOdd => "odd-odd",
            Variant::EvenEven => "even-even",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "odd-odd" | "odd" => Ok(Variant::OddOdd),
            "even-even" | "even" => Ok(Variant::EvenEven),
            other => Err(Error::Parse(format!("unknown construction variant `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnsupportedReason {
    /// One cycle length is odd, the other even.
    MixedParity,
    /// Both odd with `gcd(n, m) = 1`.
    CoprimeOdd,
    /// The odd/odd construction was requested for a grid that is not odd/odd.
    NotOddOdd,
    /// The even/even construction was requested for a grid that is not even/even.
    NotEvenEven,
}

impl fmt::Display for UnsupportedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnsupportedReason::MixedParity => "mixed parity",
            UnsupportedReason::CoprimeOdd => "coprime odd cycle lengths",
            UnsupportedReason::NotOddOdd => "odd/odd construction needs two odd lengths with a common factor",
            UnsupportedReason::NotEvenEven => "even/even construction needs two even lengths",
        })
    }
}

/// Which construction produced a labeling, and where its diagonals start.
///
/// `start_cols` are given for the base grid with `n <= m`. When the
/// requested grid had `n > m` the labeling was built on the transpose and
/// `transposed` is set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionPlan {
    pub variant: Variant,
    pub start_cols: Vec<usize>,
    pub transposed: bool,
}

impl ConstructionPlan {
    /// The plan for `variant` on a grid of the given shape, or a typed
    /// refusal when the shape does not fit the variant.
    pub fn for_dims(variant: Variant, dims: &GridDims) -> Result<Self> {
        let transposed = dims.n > dims.m;
        let base = if transposed { dims.transposed() } else { *dims };
        let reject = |reason| Error::Unsupported { n: dims.n, m: dims.m, reason };
        match variant {
            Variant::OddOdd if base.n % 2 == 0 || base.m % 2 == 0 || base.d == 1 => {
                return Err(reject(UnsupportedReason::NotOddOdd));
            }
            Variant::EvenEven if base.n % 2 == 1 || base.m % 2 == 1 => {
                return Err(reject(UnsupportedReason::NotEvenEven));
            }
            _ => {}
        }
        // D^1 starts at column d+1 so that its first VH corner meets the
        // first HV corner of D^d. Starting it at column 1 only works when
        // d = m; otherwise two vertices end up with the wrong weight.
        let start_cols = std::iter::once(base.col(base.d as i64 + 1)).chain(2..=base.d).collect();
        Ok(ConstructionPlan { variant, start_cols, transposed })
    }

    /// The plan [`construct`] would pick for this grid.
    pub fn auto(dims: &GridDims) -> Result<Self> {
        match (dims.n % 2, dims.m % 2) {
            (1, 1) if gcd(dims.n, dims.m) > 1 => Self::for_dims(Variant::OddOdd, dims),
            (1, 1) => Err(Error::Unsupported { n: dims.n, m: dims.m, reason: UnsupportedReason::CoprimeOdd }),
            (0, 0) => Self::for_dims(Variant::EvenEven, dims),
            _ => Err(Error::Unsupported { n: dims.n, m: dims.m, reason: UnsupportedReason::MixedParity }),
        }
    }

    /// The grid the diagonals live on (`n <= m`).
    pub fn base_dims(&self, dims: &GridDims) -> GridDims {
        if self.transposed {
            dims.transposed()
        } else {
            *dims
        }
    }

    /// Checks that this plan is the one its variant prescribes for `dims`.
    pub fn check(&self, dims: &GridDims) -> Result<()> {
        let mismatch = |detail: String| Error::PlanShapeMismatch { n: dims.n, m: dims.m, detail };
        let expected = Self::for_dims(self.variant, dims).map_err(|e| mismatch(e.to_string()))?;
        if &expected != self {
            return Err(mismatch(format!(
                "expected start columns {:?} (transposed: {}), plan has {:?} (transposed: {})",
                expected.start_cols, expected.transposed, self.start_cols, self.transposed
            )));
        }
        Ok(())
    }
}

/// A constructed labeling together with the plan that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub labeling: Labeling,
    pub plan: ConstructionPlan,
}

/// Labels `(f(h_k), f(v_k))` of diagonal `j` under the odd/odd construction.
fn odd_odd_pair(j: usize, k: usize, g: &GridDims) -> (i64, i64) {
    let (j, k) = (j as i64, k as i64);
    let (l, d, two_nm) = (g.l as i64, g.d as i64, g.q as i64);
    let lp = g.lp.expect("odd/odd grid has odd lcm") as i64;
    if j == d {
        let h = if k == 1 {
            d * l
        } else if k <= lp + 1 {
            (d - 1) * l + 2 * k - 2
        } else {
            (d - 2) * l + 2 * k - 2
        };
        let v = if k <= lp + 1 { two_nm - (d - 1) * l - 2 * k + 2 } else { two_nm - (d - 2) * l - 2 * k + 2 };
        (h, v)
    } else if j == d - 1 {
        // The even rule with the exceptional corner moved from k = 1 to k = l'+2.
        let h = if k <= lp + 2 { (d - 2) * l + k + lp - 1 } else { (d - 2) * l + k - lp - 2 };
        let v = if k <= lp + 1 { two_nm - (d - 2) * l - k - lp + 1 } else { two_nm - (d - 2) * l - k + lp + 2 };
        (h, v)
    } else {
        generic_pair(j, k, l, two_nm)
    }
}

/// Shared rule for odd diagonals and shifted even diagonals.
fn generic_pair(j: i64, k: i64, l: i64, two_nm: i64) -> (i64, i64) {
    let h = if j % 2 == 1 {
        (j - 1) * l + k
    } else if k == 1 {
        j * l
    } else {
        (j - 1) * l + k - 1
    };
    (h, two_nm - (j - 1) * l - k + 1)
}

fn even_even_pair(j: usize, k: usize, g: &GridDims) -> (i64, i64) {
    generic_pair(j as i64, k as i64, g.l as i64, g.q as i64)
}

/// Writes every diagonal's labels onto the base grid, checking that each
/// edge is written once with a label in `1..=q`.
fn build(plan: &ConstructionPlan, base: &GridDims, pair: fn(usize, usize, &GridDims) -> (i64, i64)) -> Labeling {
    let mut labels = vec![0u32; base.q];
    let mut put = |idx: usize, value: i64| {
        debug_assert!(labels[idx] == 0, "edge {} written twice", base.edge_at(idx));
        debug_assert!((1..=base.q as i64).contains(&value), "label {value} out of range");
        labels[idx] = value as u32;
    };
    for (pos, &s) in plan.start_cols.iter().enumerate() {
        let j = pos + 1;
        for k in 1..=base.l {
            let (h, v) = pair(j, k, base);
            put(base.edge_index(diagonal_h(k, s, base)), h);
            put(base.edge_index(diagonal_v(k, s, base)), v);
        }
    }
    Labeling::from_vec(*base, labels).expect("one label per edge")
}

fn finish(plan: ConstructionPlan, base: &GridDims, pair: fn(usize, usize, &GridDims) -> (i64, i64)) -> Construction {
    let lab = build(&plan, base, pair);
    let labeling = if plan.transposed { lab.transpose() } else { lab };
    Construction { labeling, plan }
}

/// Labeling for `n, m` odd with `gcd(n, m) > 1`.
pub fn construct_odd_odd(dims: &GridDims) -> Result<Construction> {
    let plan = ConstructionPlan::for_dims(Variant::OddOdd, dims)?;
    let base = plan.base_dims(dims);
    Ok(finish(plan, &base, odd_odd_pair))
}

/// Labeling for `n, m` even.
pub fn construct_even_even(dims: &GridDims) -> Result<Construction> {
    let plan = ConstructionPlan::for_dims(Variant::EvenEven, dims)?;
    let base = plan.base_dims(dims);
    Ok(finish(plan, &base, even_even_pair))
}

/// Picks the construction that applies to `C_n x C_m`. Shapes with no
/// construction come back as [`Error::Unsupported`]; those are the cases
/// left to [`crate::search`].
pub fn construct(n: usize, m: usize) -> Result<Construction> {
    let dims = GridDims::new(n, m)?;
    let plan = ConstructionPlan::auto(&dims)?;
    match plan.variant {
        Variant::OddOdd => construct_odd_odd(&dims),
        Variant::EvenEven => construct_even_even(&dims),
    }
}

/// Expected partial weight at every corner of a planned construction,
/// indexed on the plan's base grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedCornerTable {
    pub dims: GridDims,
    pub start_cols: Vec<usize>,
    hv: Vec<u64>,
    vh: Vec<u64>,
}

impl ExpectedCornerTable {
    pub fn get(&self, c: CornerPos) -> u64 {
        let idx = (c.diag - 1) * self.dims.l + (c.k - 1);
        match c.kind {
            CornerKind::HV => self.hv[idx],
            CornerKind::VH => self.vh[idx],
        }
    }

    /// All `2 d l` corners with their expected partial weights.
    pub fn iter(&self) -> impl Iterator<Item = (CornerPos, u64)> + '_ {
        let l = self.dims.l;
        (0..self.hv.len()).flat_map(move |idx| {
            let (diag, k) = (idx / l + 1, idx % l + 1);
            [
                (CornerPos { diag, k, kind: CornerKind::HV }, self.hv[idx]),
                (CornerPos { diag, k, kind: CornerKind::VH }, self.vh[idx]),
            ]
        })
    }

    pub fn len(&self) -> usize {
        self.hv.len() + self.vh.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hv.is_empty()
    }
}

/// `dims` is the grid the labeling lives on; transposed plans are tabulated
/// on the transposed grid.
pub fn expected_corner_table(plan: &ConstructionPlan, dims: &GridDims) -> Result<ExpectedCornerTable> {
    plan.check(dims)?;
    let g = plan.base_dims(dims);
    let (two_nm, l, d) = (g.q as u64, g.l as u64, g.d);
    let exceptional_hv = two_nm + l;
    let exceptional_vh = two_nm - l + 2;
    let mut hv = Vec::with_capacity(d * g.l);
    let mut vh = Vec::with_capacity(d * g.l);
    for j in 1..=d {
        for k in 1..=g.l {
            let odd = j % 2 == 1;
            let (w_hv, w_vh) = match plan.variant {
                Variant::OddOdd if j == d => {
                    let lp2 = g.lp.expect("odd lcm") + 2;
                    (if k == 1 { exceptional_hv } else { two_nm }, if k == lp2 { exceptional_vh } else { two_nm + 2 })
                }
                Variant::OddOdd if j == d - 1 => {
                    let lp2 = g.lp.expect("odd lcm") + 2;
                    (if k == lp2 { exceptional_hv } else { two_nm }, two_nm + 1)
                }
                _ if odd => (two_nm + 1, if k == 1 { exceptional_vh } else { two_nm + 2 }),
                _ => (if k == 1 { exceptional_hv } else { two_nm }, two_nm + 1),
            };
            hv.push(w_hv);
            vh.push(w_vh);
        }
    }
    Ok(ExpectedCornerTable { dims: g, start_cols: plan.start_cols.clone(), hv, vh })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{decompose, dims, EdgeRef, Orientation};

    fn seq(lab: &Labeling, plan: &ConstructionPlan, j: usize) -> (Vec<u32>, Vec<u32>) {
        let g = *lab.dims();
        let s = plan.start_cols[j - 1];
        let h = (1..=g.l).map(|k| lab.get(diagonal_h(k, s, &g))).collect();
        let v = (1..=g.l).map(|k| lab.get(diagonal_v(k, s, &g))).collect();
        (h, v)
    }

    #[test]
    fn golden_3x3_matrices() {
        let c = construct_odd_odd(&dims(3, 3).unwrap()).unwrap();
        assert_eq!(c.labeling.matrix(Orientation::H), vec![vec![1, 4, 9], vec![8, 2, 5], vec![6, 7, 3]]);
        assert_eq!(c.labeling.matrix(Orientation::V), vec![vec![12, 18, 14], vec![13, 10, 17], vec![16, 15, 11]]);
        assert_eq!(c.plan.start_cols, vec![1, 2, 3]);
    }

    #[test]
    fn diagonal_sequences_3x3() {
        let c = construct_odd_odd(&dims(3, 3).unwrap()).unwrap();
        assert_eq!(seq(&c.labeling, &c.plan, 1), (vec![1, 2, 3], vec![18, 17, 16]));
        assert_eq!(seq(&c.labeling, &c.plan, 3), (vec![9, 8, 7], vec![12, 10, 11]));
    }

    #[test]
    fn diagonal_sequences_4x4() {
        let c = construct_even_even(&dims(4, 4).unwrap()).unwrap();
        let p = &c.plan;
        assert_eq!(seq(&c.labeling, p, 1), (vec![1, 2, 3, 4], vec![32, 31, 30, 29]));
        assert_eq!(seq(&c.labeling, p, 2), (vec![8, 5, 6, 7], vec![28, 27, 26, 25]));
        assert_eq!(seq(&c.labeling, p, 3), (vec![9, 10, 11, 12], vec![24, 23, 22, 21]));
        assert_eq!(seq(&c.labeling, p, 4), (vec![16, 13, 14, 15], vec![20, 19, 18, 17]));
    }

    #[test]
    fn first_odd_diagonal_starts_late() {
        let g = dims(3, 9).unwrap();
        let c = construct_odd_odd(&g).unwrap();
        assert_eq!(c.plan.start_cols, vec![4, 2, 3]);
        assert_eq!(c.labeling.get(EdgeRef::h(1, 4)), 1);
    }

    #[test]
    fn unsupported_shapes() {
        let g35 = dims(3, 5).unwrap();
        assert!(matches!(
            construct_odd_odd(&g35),
            Err(Error::Unsupported { reason: UnsupportedReason::NotOddOdd, .. })
        ));
        assert!(matches!(
            construct_even_even(&dims(3, 4).unwrap()),
            Err(Error::Unsupported { reason: UnsupportedReason::NotEvenEven, .. })
        ));
        assert!(matches!(construct(3, 4), Err(Error::Unsupported { reason: UnsupportedReason::MixedParity, .. })));
        assert!(matches!(construct(3, 5), Err(Error::Unsupported { reason: UnsupportedReason::CoprimeOdd, .. })));
        assert_eq!(construct(2, 4).unwrap_err(), Error::DimensionTooSmall { n: 2, m: 4 });
        let msg = construct(3, 4).unwrap_err().to_string();
        assert!(msg.contains("search 3 4"), "{msg}");
    }

    #[test]
    fn dispatch() {
        assert_eq!(construct(9, 15).unwrap().plan.variant, Variant::OddOdd);
        assert_eq!(construct(4, 6).unwrap().plan.variant, Variant::EvenEven);
        let c = construct(15, 9).unwrap();
        assert!(c.plan.transposed);
        assert_eq!((c.labeling.dims().n, c.labeling.dims().m), (15, 9));
    }

    #[test]
    fn expected_table_examples_3x3() {
        let g = dims(3, 3).unwrap();
        let plan = ConstructionPlan::auto(&g).unwrap();
        let t = expected_corner_table(&plan, &g).unwrap();
        let at = |diag, k, kind| t.get(CornerPos { diag, k, kind });
        assert_eq!(at(2, 3, CornerKind::HV), 21);
        assert_eq!(at(3, 3, CornerKind::VH), 17);
        for k in 1..=3 {
            assert_eq!(at(1, k, CornerKind::HV), 19);
        }
        assert_eq!(t.len(), 2 * 3 * 3);
    }

    fn block_check(n: usize, m: usize) {
        let g = dims(n, m).unwrap();
        let c = construct(n, m).unwrap();
        let base = c.plan.base_dims(&g);
        let lab = if c.plan.transposed { c.labeling.transpose() } else { c.labeling.clone() };
        let diags = decompose(&base, Some(&c.plan.start_cols)).unwrap();
        let (l, two_nm) = (base.l as u32, base.q as u32);
        let mut seen = vec![false; base.q + 1];
        for diag in &diags {
            let j = diag.index as u32;
            let mut hs: Vec<u32> = (1..=base.l).map(|k| lab.get(diag.h(k))).collect();
            let mut vs: Vec<u32> = (1..=base.l).map(|k| lab.get(diag.v(k))).collect();
            hs.sort();
            vs.sort();
            if c.plan.variant == Variant::OddOdd && diag.index == base.d {
                let mut all: Vec<u32> = hs.iter().chain(&vs).copied().collect();
                all.sort();
                assert_eq!(all, ((base.d as u32 - 1) * l + 1..=(base.d as u32 + 1) * l).collect::<Vec<_>>());
            } else {
                assert_eq!(hs, ((j - 1) * l + 1..=j * l).collect::<Vec<_>>());
                assert_eq!(vs, (two_nm - j * l + 1..=two_nm - (j - 1) * l).collect::<Vec<_>>());
            }
            for x in hs.into_iter().chain(vs) {
                assert!(!seen[x as usize]);
                seen[x as usize] = true;
            }
        }
        assert!(seen[1..].iter().all(|&b| b));
    }

    #[test]
    fn label_blocks() {
        for (n, m) in [(3, 3), (3, 9), (5, 15), (9, 15), (15, 21), (4, 4), (4, 6), (6, 8), (8, 12), (15, 9)] {
            block_check(n, m);
        }
    }

    #[test]
    fn seam_pairing_of_expected_table() {
        use crate::torus::corner_vertex;
        use std::collections::HashMap;
        for (n, m) in [(3, 3), (3, 9), (5, 15), (9, 9), (9, 15), (4, 4), (4, 6), (6, 8), (8, 12)] {
            let g = dims(n, m).unwrap();
            let plan = ConstructionPlan::auto(&g).unwrap();
            let t = expected_corner_table(&plan, &g).unwrap();
            let mut hv = HashMap::new();
            let mut vh = HashMap::new();
            for (c, w) in t.iter() {
                let x = corner_vertex(c, plan.start_cols[c.diag - 1], &g);
                let slot = match c.kind {
                    CornerKind::HV => &mut hv,
                    CornerKind::VH => &mut vh,
                };
                assert!(slot.insert(x, (c.diag, w)).is_none());
            }
            assert_eq!(hv.len(), n * m);
            for (x, (j, w)) in &hv {
                let (j2, w2) = vh[x];
                assert_eq!(j2, j % g.d + 1, "{n}x{m} at {x}");
                assert_eq!(w + w2, 4 * (n * m) as u64 + 2, "{n}x{m} at {x}");
            }
            // at most one exceptional corner of each kind per diagonal
            for j in 1..=g.d {
                let ex_hv = t
                    .iter()
                    .filter(|(c, w)| c.diag == j && c.kind == CornerKind::HV && *w == g.q as u64 + g.l as u64)
                    .count();
                let ex_vh = t
                    .iter()
                    .filter(|(c, w)| c.diag == j && c.kind == CornerKind::VH && *w + g.l as u64 == g.q as u64 + 2)
                    .count();
                assert!(ex_hv <= 1 && ex_vh <= 1);
            }
        }
    }
}
