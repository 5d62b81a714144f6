//! Slot permutations acting on kets, and the (anti)symmetrizers built from them.
//!
//! Slots are 1-based throughout the public API. A permutation σ moves the
//! content of slot `s` to slot `σ(s)`, so applying σ and then τ is the same as
//! applying `τ∘σ`.

use alloc::vec::Vec;

use itertools::Itertools;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::ket::{BasisTuple, MultiKet};

/// A bijection on the slots `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlotPermutation {
    // 0-based: image[s] = σ(s)
    image: Vec<usize>,
}

impl SlotPermutation {
    pub fn identity(n: usize) -> Self {
        SlotPermutation {
            image: (0..n).collect(),
        }
    }

    /// Builds σ from its 1-based images: `images[s-1] = σ(s)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::Domain("slot mapping is not a bijection on {1..n}"));
            }
            seen[x - 1] = true;
        }
        Ok(SlotPermutation {
            image: images.iter().map(|x| x - 1).collect(),
        })
    }

    /// The transposition `(i j)` on `n` slots.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        check_pair(n, i, j)?;
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(i - 1, j - 1);
        Ok(SlotPermutation { image })
    }

    /// The cycle `c[0] -> c[1] -> ... -> c[0]` on `n` slots.
    pub fn cycle(n: usize, c: &[usize]) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        if c.iter().any(|&s| s == 0 || s > n) || has_repeats(c) {
            return Err(Error::Domain("invalid cycle"));
        }
        for (k, &s) in c.iter().enumerate() {
            image[s - 1] = c[(k + 1) % c.len()] - 1;
        }
        Ok(SlotPermutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// σ(s) for 1-based `s`.
    pub fn apply(&self, slot: usize) -> usize {
        self.image[slot - 1] + 1
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &SlotPermutation) -> SlotPermutation {
        SlotPermutation {
            image: self.image.iter().map(|&s| other.image[s]).collect(),
        }
    }

    pub fn inverse(&self) -> SlotPermutation {
        let mut image = alloc::vec![0; self.image.len()];
        for (s, &t) in self.image.iter().enumerate() {
            image[t] = s;
        }
        SlotPermutation { image }
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i32 {
        let n = self.image.len();
        let mut visited = alloc::vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            let mut len = 0;
            let mut s = start;
            while !visited[s] {
                visited[s] = true;
                s = self.image[s];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub(crate) fn act_on_tuple(&self, t: &BasisTuple) -> BasisTuple {
        let labels = t.labels();
        let mut out = alloc::vec![0; labels.len()];
        for (s, &l) in labels.iter().enumerate() {
            out[self.image[s]] = l;
        }
        BasisTuple::from_vec_unchecked(out)
    }
}

fn has_repeats(xs: &[usize]) -> bool {
    xs.iter().enumerate().any(|(k, x)| xs[..k].contains(x))
}

pub(crate) fn check_slot(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::Domain("slot out of range"));
    }
    Ok(())
}

pub(crate) fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    check_slot(n, i)?;
    check_slot(n, j)?;
    if i == j {
        return Err(Error::Domain("slots must be distinct"));
    }
    Ok(())
}

/// All permutations of the 1-based `slots` that fix every other slot of `n`.
pub fn slot_set_permutations(slots: &[usize], n: usize) -> Result<Vec<SlotPermutation>> {
    if slots.len() < 2 {
        return Err(Error::Domain("a slot set needs at least two slots"));
    }
    for &s in slots {
        check_slot(n, s)?;
    }
    if has_repeats(slots) {
        return Err(Error::Domain("repeated slot in slot set"));
    }
    Ok(slots
        .iter()
        .copied()
        .permutations(slots.len())
        .map(|arrangement| {
            let mut image: Vec<usize> = (0..n).collect();
            for (&from, &to) in slots.iter().zip(&arrangement) {
                image[from - 1] = to - 1;
            }
            SlotPermutation { image }
        })
        .collect())
}

/// `P_ij` applied to a ket.
pub fn transpose_slots(k: &MultiKet, i: usize, j: usize) -> Result<MultiKet> {
    check_pair(k.slots(), i, j)?;
    Ok(k.map_tuples(|t| (t.swapped(i, j), C64::new(1.0, 0.0))))
}

pub fn permute_slots(k: &MultiKet, sigma: &SlotPermutation) -> Result<MultiKet> {
    if sigma.len() != k.slots() {
        return Err(Error::Domain("permutation size does not match the slot count"));
    }
    Ok(k.map_tuples(|t| (sigma.act_on_tuple(t), C64::new(1.0, 0.0))))
}

fn projected_sum(k: &MultiKet, slots: &[usize], signed: bool) -> Result<MultiKet> {
    let perms = slot_set_permutations(slots, k.slots())?;
    let mut out = MultiKet::zero(k.dim(), k.slots())?;
    for sigma in &perms {
        let sign = if signed { sigma.sign() as f64 } else { 1.0 };
        out = out.add_scaled(C64::new(sign, 0.0), &permute_slots(k, sigma)?)?;
    }
    out.normalize()
}

/// Normalized sum of the ket over every permutation of `slots`.
pub fn symmetrize(k: &MultiKet, slots: &[usize]) -> Result<MultiKet> {
    projected_sum(k, slots, false)
}

/// Normalized signed sum (even minus odd permutations) over `slots`.
pub fn antisymmetrize(k: &MultiKet, slots: &[usize]) -> Result<MultiKet> {
    projected_sum(k, slots, true)
}
