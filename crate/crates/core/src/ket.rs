//! Sparse state vectors in the n-fold tensor power of a d-dimensional space.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tolerance;

/// An n-tuple of single-particle basis labels, one per slot.
///
/// Labels are 0-based; position `k` in the tuple is slot `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisTuple(Vec<usize>);

impl BasisTuple {
    pub fn new(labels: Vec<usize>, dim: usize) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Domain("a basis tuple needs at least one slot"));
        }
        if dim < 2 {
            return Err(Error::Dimension { required: 2, found: dim });
        }
        if labels.iter().any(|&l| l >= dim) {
            return Err(Error::Domain("basis label out of range"));
        }
        Ok(BasisTuple(labels))
    }

    pub(crate) fn from_vec_unchecked(labels: Vec<usize>) -> Self {
        BasisTuple(labels)
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Label held by 1-based `slot`.
    pub fn label(&self, slot: usize) -> usize {
        self.0[slot - 1]
    }

    /// Row-major index of the tuple in a `dim^n` vector, slot 1 most significant.
    pub fn index(&self, dim: usize) -> usize {
        self.0.iter().fold(0, |acc, &l| acc * dim + l)
    }

    pub fn from_index(mut index: usize, dim: usize, slots: usize) -> Self {
        let mut labels = alloc::vec![0; slots];
        for l in labels.iter_mut().rev() {
            *l = index % dim;
            index /= dim;
        }
        BasisTuple(labels)
    }

    /// Every tuple of length `slots` over `dim` labels, in index order.
    pub fn all(dim: usize, slots: usize) -> impl Iterator<Item = BasisTuple> {
        let total = dim.pow(slots as u32);
        (0..total).map(move |i| BasisTuple::from_index(i, dim, slots))
    }

    /// The tuple with 1-based slots `i` and `j` exchanged.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut labels = self.0.clone();
        labels.swap(i - 1, j - 1);
        BasisTuple(labels)
    }
}

impl fmt::Display for BasisTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(">")
    }
}

/// Outcome of comparing two kets as rays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RayRelation {
    /// `b = phase * a`.
    Proportional(C64),
    Distinct,
}

/// A vector in `(C^d)^{⊗n}` stored as a sparse map from basis tuples to amplitudes.
///
/// Kets are immutable: every operation returns a new value.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiKet {
    dim: usize,
    slots: usize,
    amps: BTreeMap<BasisTuple, C64>,
}

impl MultiKet {
    pub fn zero(dim: usize, slots: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension { required: 2, found: dim });
        }
        if slots == 0 {
            return Err(Error::Domain("a ket needs at least one slot"));
        }
        Ok(MultiKet {
            dim,
            slots,
            amps: BTreeMap::new(),
        })
    }

    /// The product ket `φ_{l1} ⊗ ... ⊗ φ_{ln}` for 0-based labels.
    pub fn product(labels: &[usize], dim: usize) -> Result<Self> {
        let tuple = BasisTuple::new(labels.to_vec(), dim)?;
        let mut ket = MultiKet::zero(dim, labels.len())?;
        ket.amps.insert(tuple, C64::new(1.0, 0.0));
        Ok(ket)
    }

    /// Builds a ket from explicit amplitudes; repeated tuples are summed.
    pub fn from_amplitudes<I>(dim: usize, slots: usize, amplitudes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisTuple, C64)>,
    {
        let mut ket = MultiKet::zero(dim, slots)?;
        for (t, a) in amplitudes {
            if t.len() != slots || t.labels().iter().any(|&l| l >= dim) {
                return Err(Error::Domain("basis tuple does not fit the ket shape"));
            }
            *ket.amps.entry(t).or_insert(C64::new(0.0, 0.0)) += a;
        }
        ket.prune(tolerance::PRUNE);
        Ok(ket)
    }

    /// Builds a ket from a dense vector in row-major tuple order.
    pub fn from_dense(dim: usize, slots: usize, values: &[C64]) -> Result<Self> {
        if values.len() != dim.pow(slots as u32) {
            return Err(Error::Domain("dense vector length is not d^n"));
        }
        MultiKet::from_amplitudes(
            dim,
            slots,
            values
                .iter()
                .enumerate()
                .map(|(i, &a)| (BasisTuple::from_index(i, dim, slots), a)),
        )
    }

    pub(crate) fn from_map_unchecked(
        dim: usize,
        slots: usize,
        amps: BTreeMap<BasisTuple, C64>,
    ) -> Self {
        let mut ket = MultiKet { dim, slots, amps };
        ket.prune(tolerance::PRUNE);
        ket
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.dim, self.slots)
    }

    pub fn amplitude(&self, tuple: &BasisTuple) -> C64 {
        self.amps.get(tuple).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    /// Nonzero amplitudes in tuple order.
    pub fn iter(&self) -> impl Iterator<Item = (&BasisTuple, &C64)> {
        self.amps.iter()
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn to_dense(&self) -> Vec<C64> {
        let mut out = alloc::vec![C64::new(0.0, 0.0); self.dim.pow(self.slots as u32)];
        for (t, a) in &self.amps {
            out[t.index(self.dim)] = *a;
        }
        out
    }

    pub(crate) fn check_shape(&self, other: &MultiKet) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Shape {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        Ok(())
    }

    fn prune(&mut self, threshold: f64) {
        self.amps.retain(|_, a| a.norm() >= threshold);
    }

    /// `self + c·other`, pruned at the default threshold.
    pub fn add_scaled(&self, c: C64, other: &MultiKet) -> Result<MultiKet> {
        self.add_scaled_pruned(c, other, tolerance::PRUNE)
    }

    pub fn add_scaled_pruned(&self, c: C64, other: &MultiKet, prune: f64) -> Result<MultiKet> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (t, a) in &other.amps {
            *out.amps.entry(t.clone()).or_insert(C64::new(0.0, 0.0)) += c * a;
        }
        out.prune(prune);
        Ok(out)
    }

    pub fn scale(&self, c: C64) -> MultiKet {
        let mut out = self.clone();
        for a in out.amps.values_mut() {
            *a *= c;
        }
        out.prune(tolerance::PRUNE);
        out
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &MultiKet) -> Result<C64> {
        self.check_shape(other)?;
        let (small, large, conj_small) = if self.amps.len() <= other.amps.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = C64::new(0.0, 0.0);
        for (t, a) in &small.amps {
            if let Some(b) = large.amps.get(t) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        num_traits::Float::sqrt(self.norm_sqr())
    }

    pub fn is_zero(&self) -> bool {
        self.norm() <= tolerance::ZERO_NORM
    }

    pub fn normalize(&self) -> Result<MultiKet> {
        let norm = self.norm();
        if norm <= tolerance::ZERO_NORM {
            return Err(Error::DegenerateState);
        }
        Ok(self.scale(C64::new(1.0 / norm, 0.0)))
    }

    /// Decides whether `other = λ·self` for some complex `λ`, amplitude by amplitude within `tol`.
    pub fn ray_compare(&self, other: &MultiKet, tol: f64) -> Result<RayRelation> {
        self.check_shape(other)?;
        if self.is_zero() || other.is_zero() {
            return Err(Error::DegenerateState);
        }
        let (pivot, pivot_amp) = self
            .amps
            .iter()
            .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
            .map(|(t, a)| (t, *a))
            .expect("nonzero ket has a support");
        let lambda = other.amplitude(pivot) / pivot_amp;
        let close = |t: &BasisTuple| (other.amplitude(t) - lambda * self.amplitude(t)).norm() <= tol;
        if self.amps.keys().all(close) && other.amps.keys().all(close) {
            Ok(RayRelation::Proportional(lambda))
        } else {
            Ok(RayRelation::Distinct)
        }
    }

    /// Largest amplitude modulus; used to scale phase tolerances.
    pub fn max_amplitude(&self) -> f64 {
        self.amps.values().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Maps every basis tuple through `f`, summing collisions.
    pub(crate) fn map_tuples<F>(&self, mut f: F) -> MultiKet
    where
        F: FnMut(&BasisTuple) -> (BasisTuple, C64),
    {
        let mut amps = BTreeMap::new();
        for (t, a) in &self.amps {
            let (nt, factor) = f(t);
            *amps.entry(nt).or_insert(C64::new(0.0, 0.0)) += factor * a;
        }
        MultiKet::from_map_unchecked(self.dim, self.slots, amps)
    }
}

impl fmt::Display for MultiKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.amps.is_empty() {
            return f.write_str("0");
        }
        for (k, (t, a)) in self.amps.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i){}", a.re, a.im, t)?;
        }
        Ok(())
    }
}
