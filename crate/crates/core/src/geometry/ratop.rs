//! Sparse operators with exact rational entries.
//!
//! The projectors, their partial transposes, and the witness all have O(d^4)
//! nonzero entries made of halves and 1/d, so the polytope data they induce
//! can be computed without a single rounding step. Subsystems are positional
//! here (no labels); the canonical order is fixed by the caller.

use crate::error::{Error, Result};
use crate::rational::{rat, rat_int, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Operator on a tensor product of positional subsystems, stored as a map
/// from (row, column) to nonzero rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatOp {
    dims: Vec<usize>,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl RatOp {
    pub fn zeros(dims: Vec<usize>) -> Self {
        assert!(
            !dims.is_empty() && dims.iter().all(|&d| d > 0),
            "invalid dims"
        );
        Self {
            dims,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let mut op = Self::zeros(dims);
        for i in 0..op.total_dim() {
            op.entries.insert((i, i), Rat::one());
        }
        op
    }

    /// Swap operator on two d-dimensional subsystems.
    pub fn flip(d: usize) -> Self {
        let mut op = Self::zeros(vec![d, d]);
        for i in 0..d {
            for j in 0..d {
                op.entries.insert((i * d + j, j * d + i), Rat::one());
            }
        }
        op
    }

    /// Projector onto the maximally entangled state of two d-dimensional
    /// subsystems: entries delta_ij delta_kl / d.
    pub fn max_entangled_projector(d: usize) -> Self {
        let mut op = Self::zeros(vec![d, d]);
        let v = rat(1, d as i128);
        for i in 0..d {
            for j in 0..d {
                op.entries.insert((i * d + i, j * d + j), v);
            }
        }
        op
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.entries.get(&(i, j)).copied().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zeros(self.dims.clone());
        }
        let entries = self.entries.iter().map(|(&k, v)| (k, v * c)).collect();
        Self {
            dims: self.dims.clone(),
            entries,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::LayoutMismatch(
                "rational operator dimensions differ".into(),
            ));
        }
        let mut out = self.clone();
        for (&k, v) in &other.entries {
            let sum = out.get(k.0, k.1) + v;
            out.set(k.0, k.1, sum);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&rat_int(-1)))
    }

    pub fn trace(&self) -> Rat {
        let mut t = Rat::zero();
        for (&(i, j), v) in &self.entries {
            if i == j {
                t += v;
            }
        }
        t
    }

    /// tr(self . other).
    pub fn product_trace(&self, other: &Self) -> Result<Rat> {
        if self.dims != other.dims {
            return Err(Error::LayoutMismatch(
                "rational operator dimensions differ".into(),
            ));
        }
        let mut t = Rat::zero();
        for (&(i, j), v) in &self.entries {
            let w = other.get(j, i);
            if !w.is_zero() {
                t += v * w;
            }
        }
        Ok(t)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let other_dim = other.total_dim();
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut entries = BTreeMap::new();
        for (&(i, j), v) in &self.entries {
            for (&(k, l), w) in &other.entries {
                entries.insert((i * other_dim + k, j * other_dim + l), v * w);
            }
        }
        Self { dims, entries }
    }

    fn decompose(&self, mut index: usize, parts: &mut [usize]) {
        for pos in (0..self.dims.len()).rev() {
            parts[pos] = index % self.dims[pos];
            index /= self.dims[pos];
        }
    }

    fn compose(dims: &[usize], parts: &[usize]) -> usize {
        let mut index = 0;
        for (pos, &p) in parts.iter().enumerate() {
            index = index * dims[pos] + p;
        }
        index
    }

    /// Reorders subsystems so that new position p holds old subsystem
    /// order[p].
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        for &o in order {
            if o >= n || seen[o] {
                return Err(Error::InvalidLayout("invalid subsystem permutation".into()));
            }
            seen[o] = true;
        }
        if order.len() != n {
            return Err(Error::InvalidLayout("invalid subsystem permutation".into()));
        }
        let new_dims: Vec<usize> = order.iter().map(|&o| self.dims[o]).collect();
        let mut entries = BTreeMap::new();
        let mut row = vec![0usize; n];
        let mut col = vec![0usize; n];
        let mut new_row = vec![0usize; n];
        let mut new_col = vec![0usize; n];
        for (&(i, j), v) in &self.entries {
            self.decompose(i, &mut row);
            self.decompose(j, &mut col);
            for p in 0..n {
                new_row[p] = row[order[p]];
                new_col[p] = col[order[p]];
            }
            entries.insert(
                (
                    Self::compose(&new_dims, &new_row),
                    Self::compose(&new_dims, &new_col),
                ),
                *v,
            );
        }
        Ok(Self {
            dims: new_dims,
            entries,
        })
    }

    /// Transposes the subsystems at the given positions.
    pub fn partial_transpose(&self, positions: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        let mut mask = vec![false; n];
        for &p in positions {
            if p >= n || mask[p] {
                return Err(Error::InvalidLayout("invalid transpose positions".into()));
            }
            mask[p] = true;
        }
        let mut entries = BTreeMap::new();
        let mut row = vec![0usize; n];
        let mut col = vec![0usize; n];
        for (&(i, j), v) in &self.entries {
            self.decompose(i, &mut row);
            self.decompose(j, &mut col);
            for p in 0..n {
                if mask[p] {
                    std::mem::swap(&mut row[p], &mut col[p]);
                }
            }
            entries.insert(
                (
                    Self::compose(&self.dims, &row),
                    Self::compose(&self.dims, &col),
                ),
                *v,
            );
        }
        Ok(Self {
            dims: self.dims.clone(),
            entries,
        })
    }
}
