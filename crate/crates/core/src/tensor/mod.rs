//! Dense complex operator algebra over labeled multipartite tensor spaces.
//!
//! Operators and pure states carry a `SubsystemLayout`: an ordered list of
//! (label, dimension) pairs. Indices are row-major with the first subsystem
//! most significant, so `kron` is plain layout concatenation. Everything the
//! rest of the crate needs (tensor products, subsystem permutation, partial
//! transpose, partial trace, hermitian spectra, seeded sampling, JSON I/O)
//! lives here; no operation mutates its inputs.

mod eig;
pub mod io;
pub mod sample;

pub use eig::{hermitian_eigh, min_eigenpair, one_sided_svd, Svd};

use crate::error::{Error, Result};
use crate::tol;
use num_complex::Complex64;

/// Ordered list of labeled subsystems making up a tensor space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLayout {
    labels: Vec<String>,
    dims: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new(entries: &[(&str, usize)]) -> Result<Self> {
        let labels = entries.iter().map(|(l, _)| l.to_string()).collect();
        let dims = entries.iter().map(|(_, d)| *d).collect();
        Self::from_parts(labels, dims)
    }

    pub fn from_parts(labels: Vec<String>, dims: Vec<usize>) -> Result<Self> {
        if labels.len() != dims.len() {
            return Err(Error::InvalidLayout(format!(
                "{} labels vs {} dimensions",
                labels.len(),
                dims.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::InvalidLayout("layout has no subsystems".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::InvalidLayout("empty label".into()));
            }
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidLayout("zero-dimensional subsystem".into()));
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .ok_or_else(|| Error::InvalidLayout("total dimension overflows".into()))?;
        }
        Ok(Self { labels, dims })
    }

    /// Uniform layout (label, d) for each label; the common case here.
    pub fn uniform(labels: &[&str], d: usize) -> Result<Self> {
        let entries: Vec<(&str, usize)> = labels.iter().map(|&l| (l, d)).collect();
        Self::new(&entries)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Positions of a set of distinct labels, in the order given.
    pub fn positions(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
            out.push(self.position(l)?);
        }
        Ok(out)
    }

    /// Row-major strides; stride of the last subsystem is 1.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    pub fn decompose(&self, mut index: usize, parts: &mut [usize]) {
        debug_assert_eq!(parts.len(), self.dims.len());
        for k in (0..self.dims.len()).rev() {
            parts[k] = index % self.dims[k];
            index /= self.dims[k];
        }
    }

    pub fn compose(&self, parts: &[usize]) -> usize {
        debug_assert_eq!(parts.len(), self.dims.len());
        let mut idx = 0;
        for (k, &p) in parts.iter().enumerate() {
            debug_assert!(p < self.dims[k]);
            idx = idx * self.dims[k] + p;
        }
        idx
    }

    fn concat(&self, other: &Self) -> Result<Self> {
        for l in other.labels() {
            if self.labels.contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut labels = self.labels.clone();
        labels.extend_from_slice(other.labels());
        let mut dims = self.dims.clone();
        dims.extend_from_slice(other.dims());
        Self::from_parts(labels, dims)
    }

    fn relabeled(&self, new_labels: &[&str]) -> Result<Self> {
        if new_labels.len() != self.labels.len() {
            return Err(Error::LayoutMismatch(format!(
                "relabel expects {} labels, got {}",
                self.labels.len(),
                new_labels.len()
            )));
        }
        Self::from_parts(
            new_labels.iter().map(|l| l.to_string()).collect(),
            self.dims.clone(),
        )
    }
}

/// Index map realizing a subsystem reordering: `map[i_new] = i_old`.
fn permutation_index_map(
    old: &SubsystemLayout,
    new: &SubsystemLayout,
    perm: &[usize],
) -> Vec<usize> {
    let n = old.total_dim();
    let k = old.len();
    let mut map = vec![0usize; n];
    let mut new_parts = vec![0usize; k];
    let mut old_parts = vec![0usize; k];
    for (i_new, slot) in map.iter_mut().enumerate() {
        new.decompose(i_new, &mut new_parts);
        for (j, &p) in perm.iter().enumerate() {
            old_parts[p] = new_parts[j];
        }
        *slot = old.compose(&old_parts);
    }
    map
}

/// Dense square matrix on a labeled tensor space, row-major.
///
/// Hermiticity, positivity and normalization are not invariants of the type;
/// operations that need them check explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledOperator {
    layout: SubsystemLayout,
    data: Vec<Complex64>,
}

impl LabeledOperator {
    pub fn zeros(layout: SubsystemLayout) -> Self {
        let n = layout.total_dim();
        Self {
            layout,
            data: vec![Complex64::ZERO; n * n],
        }
    }

    pub fn identity(layout: SubsystemLayout) -> Self {
        let n = layout.total_dim();
        let mut op = Self::zeros(layout);
        for i in 0..n {
            op.data[i * n + i] = Complex64::ONE;
        }
        op
    }

    pub fn from_entries(layout: SubsystemLayout, data: Vec<Complex64>) -> Result<Self> {
        let n = layout.total_dim();
        if data.len() != n * n {
            return Err(Error::LengthMismatch {
                got: data.len(),
                want: n * n,
            });
        }
        Ok(Self { layout, data })
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim() + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let n = self.dim();
        self.data[i * n + j] = v;
    }

    pub fn relabeled(&self, new_labels: &[&str]) -> Result<Self> {
        Ok(Self {
            layout: self.layout.relabeled(new_labels)?,
            data: self.data.clone(),
        })
    }

    pub fn trace(&self) -> Complex64 {
        let n = self.dim();
        (0..n).map(|i| self.data[i * n + i]).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            layout: self.layout.clone(),
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_layout(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            layout: self.layout.clone(),
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_layout(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            layout: self.layout.clone(),
            data,
        })
    }

    /// self += c * other, reusing the allocation.
    pub fn add_scaled(&mut self, other: &Self, c: Complex64) -> Result<()> {
        self.check_same_layout(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_layout(other)?;
        let n = self.dim();
        let mut out = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(Self {
            layout: self.layout.clone(),
            data: out,
        })
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim();
        let mut data = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self {
            layout: self.layout.clone(),
            data,
        }
    }

    /// u * self * u^dagger.
    pub fn conjugated_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.dagger())
    }

    /// tr(self * other) in O(n^2).
    pub fn product_trace(&self, other: &Self) -> Result<Complex64> {
        self.check_same_layout(other)?;
        let n = self.dim();
        let mut acc = Complex64::ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self.data[i * n + j] * other.data[j * n + i];
            }
        }
        Ok(acc)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise deviation from hermiticity, max |a_ij - conj(a_ji)|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        dev
    }

    fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation > tol::HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    /// Eigenvalues of a hermitian operator, ascending. Rejects input whose
    /// hermiticity deviation exceeds the crate tolerance.
    pub fn hermitian_spectrum(&self) -> Result<Vec<f64>> {
        self.require_hermitian()?;
        let (vals, _) = hermitian_eigh(self.dim(), &self.data, false)?;
        Ok(vals)
    }

    /// Eigenvalues (ascending) and matching eigenvectors, column k of the
    /// returned matrix (flattened row-major) belonging to eigenvalue k.
    pub fn hermitian_eigendecomposition(&self) -> Result<(Vec<f64>, Vec<Complex64>)> {
        self.require_hermitian()?;
        let (vals, vecs) = hermitian_eigh(self.dim(), &self.data, true)?;
        Ok((vals, vecs.expect("vectors requested")))
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        let na = self.dim();
        let nb = other.dim();
        let n = na * nb;
        let mut data = vec![Complex64::ZERO; n * n];
        for ia in 0..na {
            for ja in 0..na {
                let a = self.data[ia * na + ja];
                if a == Complex64::ZERO {
                    continue;
                }
                for ib in 0..nb {
                    let row = (ia * nb + ib) * n + ja * nb;
                    for jb in 0..nb {
                        data[row + jb] = a * other.data[ib * nb + jb];
                    }
                }
            }
        }
        Ok(Self { layout, data })
    }

    pub fn permute_subsystems(&self, new_order: &[&str]) -> Result<Self> {
        if new_order.len() != self.layout.len() {
            return Err(Error::LayoutMismatch(format!(
                "permutation lists {} labels, layout has {}",
                new_order.len(),
                self.layout.len()
            )));
        }
        let perm = self.layout.positions(new_order)?;
        let new_layout = SubsystemLayout::from_parts(
            new_order.iter().map(|l| l.to_string()).collect(),
            perm.iter().map(|&p| self.layout.dims[p]).collect(),
        )?;
        let map = permutation_index_map(&self.layout, &new_layout, &perm);
        let n = self.dim();
        let mut data = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            let oi = map[i] * n;
            let row = &mut data[i * n..(i + 1) * n];
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = self.data[oi + map[j]];
            }
        }
        Ok(Self {
            layout: new_layout,
            data,
        })
    }

    /// Transpose the indices of exactly the named subsystems.
    pub fn partial_transpose(&self, subset: &[&str]) -> Result<Self> {
        let positions = self.layout.positions(subset)?;
        let mut in_subset = vec![false; self.layout.len()];
        for &p in &positions {
            in_subset[p] = true;
        }
        let n = self.dim();
        let k = self.layout.len();
        let mut data = vec![Complex64::ZERO; n * n];
        let mut pi = vec![0usize; k];
        let mut pj = vec![0usize; k];
        let mut pr = vec![0usize; k];
        let mut ps = vec![0usize; k];
        for i in 0..n {
            self.layout.decompose(i, &mut pi);
            for j in 0..n {
                self.layout.decompose(j, &mut pj);
                for m in 0..k {
                    if in_subset[m] {
                        pr[m] = pj[m];
                        ps[m] = pi[m];
                    } else {
                        pr[m] = pi[m];
                        ps[m] = pj[m];
                    }
                }
                data[i * n + j] =
                    self.data[self.layout.compose(&pr) * n + self.layout.compose(&ps)];
            }
        }
        Ok(Self {
            layout: self.layout.clone(),
            data,
        })
    }

    /// Trace out the named subsystems; the remaining layout keeps its order.
    pub fn partial_trace(&self, subset: &[&str]) -> Result<Self> {
        let positions = self.layout.positions(subset)?;
        if positions.len() >= self.layout.len() {
            return Err(Error::LayoutMismatch(
                "partial_trace over every subsystem; use trace()".into(),
            ));
        }
        let mut in_subset = vec![false; self.layout.len()];
        for &p in &positions {
            in_subset[p] = true;
        }
        let kept: Vec<usize> = (0..self.layout.len()).filter(|&m| !in_subset[m]).collect();
        let kept_layout = SubsystemLayout::from_parts(
            kept.iter()
                .map(|&m| self.layout.labels[m].clone())
                .collect(),
            kept.iter().map(|&m| self.layout.dims[m]).collect(),
        )?;
        let traced_layout = SubsystemLayout::from_parts(
            positions
                .iter()
                .map(|&m| self.layout.labels[m].clone())
                .collect(),
            positions.iter().map(|&m| self.layout.dims[m]).collect(),
        )?;
        let nk = kept_layout.total_dim();
        let nt = traced_layout.total_dim();
        let n = self.dim();
        let mut data = vec![Complex64::ZERO; nk * nk];
        let k = self.layout.len();
        let mut full = vec![0usize; k];
        let mut a_parts = vec![0usize; kept.len()];
        let mut b_parts = vec![0usize; kept.len()];
        let mut t_parts = vec![0usize; positions.len()];
        for a in 0..nk {
            kept_layout.decompose(a, &mut a_parts);
            for b in 0..nk {
                kept_layout.decompose(b, &mut b_parts);
                let mut acc = Complex64::ZERO;
                for t in 0..nt {
                    traced_layout.decompose(t, &mut t_parts);
                    for (m, &pos) in kept.iter().enumerate() {
                        full[pos] = a_parts[m];
                    }
                    for (m, &pos) in positions.iter().enumerate() {
                        full[pos] = t_parts[m];
                    }
                    let row = self.layout.compose(&full);
                    for (m, &pos) in kept.iter().enumerate() {
                        full[pos] = b_parts[m];
                    }
                    let col = self.layout.compose(&full);
                    acc += self.data[row * n + col];
                }
                data[a * nk + b] = acc;
            }
        }
        Ok(Self {
            layout: kept_layout,
            data,
        })
    }

    /// Contract a vector on a label subset from both sides:
    /// out[a,b] = sum_{x,y} conj(v[x]) self[(x,a),(y,b)] v[y].
    /// The result lives on the remaining subsystems (original order). This is
    /// the conditional (unnormalized) state after projecting onto |v><v|.
    pub fn compress_with_vector(&self, v: &PureState) -> Result<Self> {
        let v_labels: Vec<&str> = v.layout.labels().iter().map(|s| s.as_str()).collect();
        let positions = self.layout.positions(&v_labels)?;
        for (m, &pos) in positions.iter().enumerate() {
            if self.layout.dims[pos] != v.layout.dims[m] {
                return Err(Error::LayoutMismatch(format!(
                    "dimension of `{}` differs between operator and vector",
                    v_labels[m]
                )));
            }
        }
        if positions.len() >= self.layout.len() {
            return Err(Error::LayoutMismatch(
                "vector covers every subsystem; use expectation()".into(),
            ));
        }
        let mut in_subset = vec![false; self.layout.len()];
        for &p in &positions {
            in_subset[p] = true;
        }
        let kept: Vec<usize> = (0..self.layout.len()).filter(|&m| !in_subset[m]).collect();
        let kept_layout = SubsystemLayout::from_parts(
            kept.iter()
                .map(|&m| self.layout.labels[m].clone())
                .collect(),
            kept.iter().map(|&m| self.layout.dims[m]).collect(),
        )?;
        let n = self.dim();
        let nk = kept_layout.total_dim();
        // Precompute, for every full index, the vector index and kept index.
        let mut v_index = vec![0usize; n];
        let mut k_index = vec![0usize; n];
        let k = self.layout.len();
        let mut parts = vec![0usize; k];
        let mut vparts = vec![0usize; positions.len()];
        let mut kparts = vec![0usize; kept.len()];
        for i in 0..n {
            self.layout.decompose(i, &mut parts);
            for (m, &pos) in positions.iter().enumerate() {
                vparts[m] = parts[pos];
            }
            for (m, &pos) in kept.iter().enumerate() {
                kparts[m] = parts[pos];
            }
            v_index[i] = v.layout.compose(&vparts);
            k_index[i] = kept_layout.compose(&kparts);
        }
        let mut data = vec![Complex64::ZERO; nk * nk];
        for i in 0..n {
            let vi = v.amplitudes[v_index[i]].conj();
            if vi == Complex64::ZERO {
                continue;
            }
            let a = k_index[i];
            for j in 0..n {
                let vj = v.amplitudes[v_index[j]];
                if vj == Complex64::ZERO {
                    continue;
                }
                data[a * nk + k_index[j]] += vi * self.data[i * n + j] * vj;
            }
        }
        Ok(Self {
            layout: kept_layout,
            data,
        })
    }

    /// <psi| self |psi>; layouts must agree exactly.
    pub fn expectation(&self, psi: &PureState) -> Result<Complex64> {
        if self.layout != psi.layout {
            return Err(Error::LayoutMismatch("expectation layout differs".into()));
        }
        let n = self.dim();
        let mut acc = Complex64::ZERO;
        for i in 0..n {
            let ci = psi.amplitudes[i].conj();
            if ci == Complex64::ZERO {
                continue;
            }
            let row = &self.data[i * n..(i + 1) * n];
            let mut inner = Complex64::ZERO;
            for (a, b) in row.iter().zip(&psi.amplitudes) {
                inner += a * b;
            }
            acc += ci * inner;
        }
        Ok(acc)
    }

    fn check_same_layout(&self, other: &Self) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch(format!(
                "operators live on different layouts ({:?} vs {:?})",
                self.layout.labels(),
                other.layout.labels()
            )));
        }
        Ok(())
    }
}

/// Pure state: normalized amplitude vector on a labeled tensor space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: SubsystemLayout,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(layout: SubsystemLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = layout.total_dim();
        if amplitudes.len() != n {
            return Err(Error::LengthMismatch {
                got: amplitudes.len(),
                want: n,
            });
        }
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > tol::NORM_TOL {
            return Err(Error::Numerical(format!(
                "state squared norm {norm2:.3e} is not 1 within {:.0e}",
                tol::NORM_TOL
            )));
        }
        Ok(Self { layout, amplitudes })
    }

    /// Normalize and wrap; rejects the zero vector.
    pub fn from_unnormalized(layout: SubsystemLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = layout.total_dim();
        if amplitudes.len() != n {
            return Err(Error::LengthMismatch {
                got: amplitudes.len(),
                want: n,
            });
        }
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::Numerical("cannot normalize a zero state".into()));
        }
        let s = norm2.sqrt().recip();
        Ok(Self {
            layout,
            amplitudes: amplitudes.into_iter().map(|a| a * s).collect(),
        })
    }

    pub fn basis_state(layout: SubsystemLayout, index: usize) -> Result<Self> {
        let n = layout.total_dim();
        if index >= n {
            return Err(Error::ParameterRange(format!("basis index {index} >= {n}")));
        }
        let mut amplitudes = vec![Complex64::ZERO; n];
        amplitudes[index] = Complex64::ONE;
        Ok(Self { layout, amplitudes })
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn relabeled(&self, new_labels: &[&str]) -> Result<Self> {
        Ok(Self {
            layout: self.layout.relabeled(new_labels)?,
            amplitudes: self.amplitudes.clone(),
        })
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(Self { layout, amplitudes })
    }

    pub fn permute_subsystems(&self, new_order: &[&str]) -> Result<Self> {
        let perm = self.layout.positions(new_order)?;
        if new_order.len() != self.layout.len() {
            return Err(Error::LayoutMismatch(
                "permutation must cover all labels".into(),
            ));
        }
        let new_layout = SubsystemLayout::from_parts(
            new_order.iter().map(|l| l.to_string()).collect(),
            perm.iter().map(|&p| self.layout.dims[p]).collect(),
        )?;
        let map = permutation_index_map(&self.layout, &new_layout, &perm);
        let amplitudes = map.iter().map(|&old| self.amplitudes[old]).collect();
        Ok(Self {
            layout: new_layout,
            amplitudes,
        })
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch("inner product layout differs".into()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |psi><psi| as an operator.
    pub fn outer(&self) -> LabeledOperator {
        let n = self.amplitudes.len();
        let mut data = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        LabeledOperator {
            layout: self.layout.clone(),
            data,
        }
    }

    /// Schmidt coefficients (descending) across the cut (a_labels | rest).
    pub fn schmidt_coefficients(&self, a_labels: &[&str]) -> Result<Vec<f64>> {
        Ok(self.schmidt_decomposition(a_labels)?.coefficients)
    }

    /// Full Schmidt decomposition across the cut (a_labels | rest):
    /// psi = sum_k c_k (a_k (x) b_k) with c_k descending and each vector
    /// family orthonormal. The a_k are indexed with a_labels as the
    /// subsystem order; the b_k use the remaining labels in layout order.
    pub fn schmidt_decomposition(&self, a_labels: &[&str]) -> Result<SchmidtDecomposition> {
        let a_positions = self.layout.positions(a_labels)?;
        if a_positions.is_empty() || a_positions.len() >= self.layout.len() {
            return Err(Error::LayoutMismatch(
                "schmidt cut must be a proper bipartition".into(),
            ));
        }
        let mut order: Vec<&str> = a_labels.to_vec();
        for l in self.layout.labels() {
            if !a_labels.contains(&l.as_str()) {
                order.push(l);
            }
        }
        let permuted = self.permute_subsystems(&order)?;
        let da: usize = a_positions.iter().map(|&p| self.layout.dims[p]).product();
        let db = permuted.amplitudes.len() / da;
        // The one-sided SVD keeps vanishing coefficients at round-off size
        // instead of the ~sqrt(eps) they pick up through a gram matrix.
        let svd = one_sided_svd(da, db, &permuted.amplitudes)?;
        let b_vectors = svd
            .v
            .into_iter()
            .map(|col| col.into_iter().map(|z| z.conj()).collect())
            .collect();
        Ok(SchmidtDecomposition {
            coefficients: svd.sigma,
            a_vectors: svd.u,
            b_vectors,
        })
    }
}

/// Result of [`PureState::schmidt_decomposition`].
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Schmidt coefficients, descending. Coefficients of a rank-r state
    /// beyond position r come out at round-off size, not exactly zero.
    pub coefficients: Vec<f64>,
    /// Vectors on the cut's first block, one per coefficient.
    pub a_vectors: Vec<Vec<Complex64>>,
    /// Vectors on the remaining block, one per coefficient.
    pub b_vectors: Vec<Vec<Complex64>>,
}

/// Flip (swap) operator F|ij> = |ji> on layout [(A,d),(B,d)].
pub fn flip_operator(d: usize) -> Result<LabeledOperator> {
    require_dim(d)?;
    let layout = SubsystemLayout::uniform(&["A", "B"], d)?;
    let mut op = LabeledOperator::zeros(layout);
    let n = d * d;
    for i in 0..d {
        for j in 0..d {
            op.data[(j * d + i) * n + (i * d + j)] = Complex64::ONE;
        }
    }
    Ok(op)
}

/// Projector P = |Omega><Omega| onto the maximally entangled state, with
/// entries <ij|P|kl> = delta_ij delta_kl / d, on layout [(A,d),(B,d)].
pub fn max_entangled_projector(d: usize) -> Result<LabeledOperator> {
    require_dim(d)?;
    let layout = SubsystemLayout::uniform(&["A", "B"], d)?;
    let mut op = LabeledOperator::zeros(layout);
    let n = d * d;
    let v = Complex64::new(1.0 / d as f64, 0.0);
    for i in 0..d {
        for k in 0..d {
            op.data[(i * d + i) * n + (k * d + k)] = v;
        }
    }
    Ok(op)
}

/// |Omega> = sum_i |ii> / sqrt(d) on layout [(A,d),(B,d)].
pub fn max_entangled_state(d: usize) -> Result<PureState> {
    require_dim(d)?;
    let layout = SubsystemLayout::uniform(&["A", "B"], d)?;
    let mut amplitudes = vec![Complex64::ZERO; d * d];
    let a = Complex64::new((d as f64).sqrt().recip(), 0.0);
    for i in 0..d {
        amplitudes[i * d + i] = a;
    }
    PureState::new(layout, amplitudes)
}

pub(crate) fn require_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::ParameterRange(format!("local dimension {d} < 2")));
    }
    Ok(())
}
