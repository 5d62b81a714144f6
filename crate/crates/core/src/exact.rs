//! Exact integer-coefficient kets.
//!
//! States built purely from signed permutation sums of one product ket have
//! integer coefficients before normalization. Keeping them as integers makes
//! cancellations visible and lets probabilities be computed as exact rationals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::ket::{BasisTuple, MultiKet};
use crate::perm::{slot_set_permutations, SlotPermutation};

/// A ket with integer amplitudes and no implicit normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactKet {
    dim: usize,
    slots: usize,
    coeffs: BTreeMap<BasisTuple, i64>,
}

impl ExactKet {
    pub fn zero(dim: usize, slots: usize) -> Result<Self> {
        // Reuse the float constructor's shape validation.
        MultiKet::zero(dim, slots)?;
        Ok(ExactKet {
            dim,
            slots,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn product(labels: &[usize], dim: usize) -> Result<Self> {
        let tuple = BasisTuple::new(labels.to_vec(), dim)?;
        let mut ket = ExactKet::zero(dim, labels.len())?;
        ket.coeffs.insert(tuple, 1);
        Ok(ket)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn coefficient(&self, tuple: &BasisTuple) -> i64 {
        self.coeffs.get(tuple).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisTuple, &i64)> {
        self.coeffs.iter()
    }

    /// Number of tuples with a nonzero coefficient.
    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn norm_sqr(&self) -> i128 {
        self.coeffs.values().map(|&c| (c as i128) * (c as i128)).sum()
    }

    fn check_shape(&self, other: &ExactKet) -> Result<()> {
        if (self.dim, self.slots) != (other.dim, other.slots) {
            return Err(Error::Shape {
                expected: (self.dim, self.slots),
                found: (other.dim, other.slots),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ExactKet) -> Result<ExactKet> {
        self.add_scaled(1, other)
    }

    pub fn add_scaled(&self, c: i64, other: &ExactKet) -> Result<ExactKet> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (t, v) in &other.coeffs {
            *out.coeffs.entry(t.clone()).or_insert(0) += c * v;
        }
        out.coeffs.retain(|_, v| *v != 0);
        Ok(out)
    }

    pub fn permute(&self, sigma: &SlotPermutation) -> Result<ExactKet> {
        if sigma.len() != self.slots {
            return Err(Error::Domain("permutation size does not match the slot count"));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(t, &v)| (sigma.act_on_tuple(t), v))
            .collect();
        Ok(ExactKet {
            dim: self.dim,
            slots: self.slots,
            coeffs,
        })
    }

    fn signed_sum(&self, slots: &[usize], signed: bool) -> Result<ExactKet> {
        let perms = slot_set_permutations(slots, self.slots)?;
        let mut out = ExactKet::zero(self.dim, self.slots)?;
        for sigma in &perms {
            let sign = if signed { sigma.sign() as i64 } else { 1 };
            out = out.add_scaled(sign, &self.permute(sigma)?)?;
        }
        Ok(out)
    }

    /// Unnormalized sum over all permutations of `slots` (1-based).
    pub fn symmetrize_raw(&self, slots: &[usize]) -> Result<ExactKet> {
        self.signed_sum(slots, false)
    }

    /// Unnormalized signed sum over all permutations of `slots` (1-based).
    pub fn antisymmetrize_raw(&self, slots: &[usize]) -> Result<ExactKet> {
        self.signed_sum(slots, true)
    }

    /// Exact probability that 1-based `slot` holds basis label `label`,
    /// i.e. the expectation of the rank-one projector onto that label at that slot.
    pub fn slot_label_probability(&self, slot: usize, label: usize) -> Result<Ratio<i128>> {
        if slot == 0 || slot > self.slots {
            return Err(Error::Domain("slot out of range"));
        }
        if label >= self.dim {
            return Err(Error::Domain("basis label out of range"));
        }
        let total = self.norm_sqr();
        if total == 0 {
            return Err(Error::DegenerateState);
        }
        let hit: i128 = self
            .coeffs
            .iter()
            .filter(|(t, _)| t.label(slot) == label)
            .map(|(_, &c)| (c as i128) * (c as i128))
            .sum();
        Ok(Ratio::new(hit, total))
    }

    /// The normalized floating-point ket on the same ray.
    pub fn to_multiket(&self) -> Result<MultiKet> {
        MultiKet::from_amplitudes(
            self.dim,
            self.slots,
            self.coeffs
                .iter()
                .map(|(t, &c)| (t.clone(), C64::new(c as f64, 0.0))),
        )?
        .normalize()
    }

    /// Coefficient table sorted by tuple, for golden-data comparisons.
    pub fn table(&self) -> Vec<(Vec<usize>, i64)> {
        self.coeffs
            .iter()
            .map(|(t, &c)| (t.labels().to_vec(), c))
            .collect()
    }
}
