use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::torus::{EdgeRef, GridDims, Orientation};

/// A total assignment of integer labels to the edges of a torus grid.
///
/// Labels are stored densely in [`GridDims::edge_index`] order, so the
/// domain is always exactly the edge set. Whether the values form a
/// bijection onto `1..=q` is a question for the verifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Labeling {
    dims: GridDims,
    labels: Vec<u32>,
}

impl Labeling {
    /// Every edge labeled with `value`.
    pub fn constant(dims: GridDims, value: u32) -> Self {
        Labeling { dims, labels: vec![value; dims.q] }
    }

    /// Labels given in edge-index order.
    pub fn from_vec(dims: GridDims, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != dims.q {
            return Err(Error::DomainMismatch {
                missing: dims.q.saturating_sub(labels.len()),
                unknown: labels.len().saturating_sub(dims.q),
            });
        }
        Ok(Labeling { dims, labels })
    }

    pub fn from_fn(dims: GridDims, mut f: impl FnMut(EdgeRef) -> u32) -> Self {
        let labels = dims.edges().map(&mut f).collect();
        Labeling { dims, labels }
    }

    /// Builds a labeling from `(edge, label)` pairs, which must name every
    /// edge exactly once and nothing else.
    pub fn from_entries(dims: GridDims, entries: impl IntoIterator<Item = (EdgeRef, u32)>) -> Result<Self> {
        let mut slots: Vec<Option<u32>> = vec![None; dims.q];
        let mut unknown = 0;
        for (e, label) in entries {
            if !dims.contains_edge(e) {
                unknown += 1;
                continue;
            }
            let slot = &mut slots[dims.edge_index(e)];
            if slot.is_some() {
                unknown += 1;
            }
            *slot = Some(label);
        }
        let missing = slots.iter().filter(|s| s.is_none()).count();
        if missing > 0 || unknown > 0 {
            return Err(Error::DomainMismatch { missing, unknown });
        }
        Ok(Labeling { dims, labels: slots.into_iter().map(Option::unwrap).collect() })
    }

    pub fn dims(&self) -> &GridDims {
        &self.dims
    }

    #[inline]
    pub fn get(&self, e: EdgeRef) -> u32 {
        self.labels[self.dims.edge_index(e)]
    }

    pub fn set(&mut self, e: EdgeRef, label: u32) {
        let idx = self.dims.edge_index(e);
        self.labels[idx] = label;
    }

    /// Labels in edge-index order.
    pub fn as_slice(&self) -> &[u32] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeRef, u32)> + '_ {
        self.labels.iter().enumerate().map(|(idx, &l)| (self.dims.edge_at(idx), l))
    }

    /// Exchanges the labels of two edges.
    pub fn swap(&mut self, a: EdgeRef, b: EdgeRef) {
        let (ia, ib) = (self.dims.edge_index(a), self.dims.edge_index(b));
        self.labels.swap(ia, ib);
    }

    /// The same labeling viewed on `C_m x C_n`: vertex `(i, j)` becomes
    /// `(j, i)`, so `H(i, j)` becomes `V(j, i)` and vice versa.
    pub fn transpose(&self) -> Labeling {
        let dims = self.dims.transposed();
        Labeling::from_fn(dims, |e| {
            let orig = match e.orient {
                Orientation::H => EdgeRef::v(e.j, e.i),
                Orientation::V => EdgeRef::h(e.j, e.i),
            };
            self.get(orig)
        })
    }

    /// Row-major `n x m` matrix of the labels of one edge family.
    pub fn matrix(&self, orient: Orientation) -> Vec<Vec<u32>> {
        (1..=self.dims.n).map(|i| (1..=self.dims.m).map(|j| self.get(EdgeRef { orient, i, j })).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::dims;

    #[test]
    fn from_entries_rejects_gaps_and_strays() {
        let g = dims(3, 3).unwrap();
        let mut entries: Vec<_> = g.edges().map(|e| (e, 1)).collect();
        assert!(Labeling::from_entries(g, entries.clone()).is_ok());
        entries.pop();
        assert_eq!(Labeling::from_entries(g, entries.clone()), Err(Error::DomainMismatch { missing: 1, unknown: 0 }));
        entries.push((EdgeRef::h(4, 1), 1));
        assert_eq!(Labeling::from_entries(g, entries), Err(Error::DomainMismatch { missing: 1, unknown: 1 }));
    }

    #[test]
    fn transpose_twice_is_identity() {
        let g = dims(3, 5).unwrap();
        let lab = Labeling::from_fn(g, |e| g.edge_index(e) as u32 + 1);
        let t = lab.transpose();
        assert_eq!(t.dims().n, 5);
        assert_eq!(t.get(EdgeRef::v(2, 1)), lab.get(EdgeRef::h(1, 2)));
        assert_eq!(t.transpose(), lab);
    }
}
