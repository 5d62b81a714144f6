//! Constructors for the named states and for seeded random test states.
//!
//! The mixed-symmetry states act on `m` distinguished particles carrying the
//! distinct labels `0..m`. Any further slots up to `n` hold the spectator
//! label `m`, which needs `d > m`.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::exact::ExactKet;
use crate::ket::MultiKet;
use crate::perm::{antisymmetrize, check_pair, symmetrize, transpose_slots};

const MAX_RESAMPLES: usize = 100;

/// Labels `0, 1, ..., m-1` followed by the spectator label `m` on slots `m+1..=n`.
pub fn base_labels(m: usize, n: usize, d: usize) -> Result<Vec<usize>> {
    if n < m {
        return Err(Error::Domain("total slot count must be at least m"));
    }
    if d < m {
        return Err(Error::Dimension { required: m, found: d });
    }
    if n > m && d <= m {
        return Err(Error::Dimension {
            required: m + 1,
            found: d,
        });
    }
    Ok((0..n).map(|s| s.min(m)).collect())
}

fn mixed_preconditions(m: usize, n: usize, d: usize) -> Result<Vec<usize>> {
    if m < 3 {
        return Err(Error::Domain("mixed-symmetry states need m >= 3"));
    }
    base_labels(m, n, d)
}

fn range(from: usize, to: usize) -> Vec<usize> {
    (from..=to).collect()
}

/// 1-based successor of `i` on the ring `1..=m`.
pub fn ring_successor(i: usize, m: usize) -> usize {
    i % m + 1
}

/// All of `1..=m` except `i`.
fn all_but(i: usize, m: usize) -> Vec<usize> {
    (1..=m).filter(|&s| s != i).collect()
}

/// `S_{2..m} A_{12} φ_1 φ_2 ... φ_m`, normalized.
pub fn psi_s(m: usize, n: usize, d: usize) -> Result<MultiKet> {
    let base = MultiKet::product(&mixed_preconditions(m, n, d)?, d)?;
    symmetrize(&antisymmetrize(&base, &[1, 2])?, &range(2, m))
}

/// `A_{2..m} S_{12} φ_1 φ_2 ... φ_m`, normalized.
pub fn psi_a(m: usize, n: usize, d: usize) -> Result<MultiKet> {
    let base = MultiKet::product(&mixed_preconditions(m, n, d)?, d)?;
    antisymmetrize(&symmetrize(&base, &[1, 2])?, &range(2, m))
}

/// `Σ_i S_{all but i} A_{i,succ(i)} φ_1 ... φ_m` with equal weights, normalized.
pub fn psi_d(m: usize, n: usize, d: usize) -> Result<MultiKet> {
    let base = MultiKet::product(&mixed_preconditions(m, n, d)?, d)?;
    let mut total = MultiKet::zero(d, n)?;
    for i in 1..=m {
        let pair = antisymmetrize(&base, &[i, ring_successor(i, m)])?;
        let summand = symmetrize(&pair, &all_but(i, m))?;
        total = total.add_scaled(C64::new(1.0, 0.0), &summand)?;
    }
    total.normalize()
}

/// Total symmetrization of the first `m` particles.
pub fn fully_symmetric(m: usize, n: usize, d: usize) -> Result<MultiKet> {
    let base = MultiKet::product(&base_labels(m, n, d)?, d)?;
    symmetrize(&base, &range(1, m))
}

/// Total antisymmetrization of the first `m` particles.
pub fn fully_antisymmetric(m: usize, n: usize, d: usize) -> Result<MultiKet> {
    let base = MultiKet::product(&base_labels(m, n, d)?, d)?;
    antisymmetrize(&base, &range(1, m))
}

/// Integer-coefficient counterpart of [`psi_s`] before normalization.
pub fn exact_psi_s(m: usize, n: usize, d: usize) -> Result<ExactKet> {
    let base = ExactKet::product(&mixed_preconditions(m, n, d)?, d)?;
    base.antisymmetrize_raw(&[1, 2])?.symmetrize_raw(&range(2, m))
}

/// Integer-coefficient counterpart of [`psi_a`] before normalization.
pub fn exact_psi_a(m: usize, n: usize, d: usize) -> Result<ExactKet> {
    let base = ExactKet::product(&mixed_preconditions(m, n, d)?, d)?;
    base.symmetrize_raw(&[1, 2])?.antisymmetrize_raw(&range(2, m))
}

/// Integer-coefficient counterpart of [`psi_d`] before normalization.
///
/// Every raw summand has the same norm, so unit integer weights reproduce the
/// equal-weight sum of normalized summands.
pub fn exact_psi_d(m: usize, n: usize, d: usize) -> Result<ExactKet> {
    let base = ExactKet::product(&mixed_preconditions(m, n, d)?, d)?;
    let mut total = ExactKet::zero(d, n)?;
    for i in 1..=m {
        let summand = base
            .antisymmetrize_raw(&[i, ring_successor(i, m)])?
            .symmetrize_raw(&all_but(i, m))?;
        total = total.add(&summand)?;
    }
    if total.is_zero() {
        return Err(Error::DegenerateState);
    }
    Ok(total)
}

/// `φ_1 φ_2 + e^{iθ} φ_2 φ_1`, normalized.
pub fn phase_state(theta: f64, d: usize) -> Result<MultiKet> {
    MultiKet::product(&[0, 1], d)?
        .add_scaled(C64::from_polar(1.0, theta), &MultiKet::product(&[1, 0], d)?)?
        .normalize()
}

/// A normalized ket with independent complex Gaussian amplitudes.
pub fn random_ket<R: rand::Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<MultiKet> {
    let size = d.pow(n as u32);
    let values: Vec<C64> = (0..size)
        .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    MultiKet::from_dense(d, n, &values)?.normalize()
}

/// A seeded random ket with `P_ij Ψ = sign·Ψ`, obtained by projecting a
/// Gaussian ket with `(I + sign·P_ij)/2`.
pub fn random_exchange_eigenstate(
    n: usize,
    d: usize,
    i: usize,
    j: usize,
    sign: i32,
    seed: u64,
) -> Result<MultiKet> {
    check_pair(n, i, j)?;
    if sign != 1 && sign != -1 {
        return Err(Error::Domain("exchange sign must be +1 or -1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RESAMPLES {
        let k = random_ket(n, d, &mut rng)?;
        let projected = k
            .add_scaled(C64::new(sign as f64, 0.0), &transpose_slots(&k, i, j)?)?
            .scale(C64::new(0.5, 0.0));
        if projected.norm() > 1e-6 {
            return projected.normalize();
        }
    }
    Err(Error::DegenerateState)
}

/// A named state together with its construction parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum StateRecipe {
    PsiS { m: usize, n: usize },
    PsiA { m: usize, n: usize },
    PsiD { m: usize, n: usize },
    Phase { theta: f64 },
    RandomSym { n: usize, i: usize, j: usize, seed: u64 },
    RandomAntisym { n: usize, i: usize, j: usize, seed: u64 },
    Explicit(MultiKet),
}

impl StateRecipe {
    pub fn build(&self, d: usize) -> Result<MultiKet> {
        match *self {
            StateRecipe::PsiS { m, n } => psi_s(m, n, d),
            StateRecipe::PsiA { m, n } => psi_a(m, n, d),
            StateRecipe::PsiD { m, n } => psi_d(m, n, d),
            StateRecipe::Phase { theta } => phase_state(theta, d),
            StateRecipe::RandomSym { n, i, j, seed } => random_exchange_eigenstate(n, d, i, j, 1, seed),
            StateRecipe::RandomAntisym { n, i, j, seed } => {
                random_exchange_eigenstate(n, d, i, j, -1, seed)
            }
            StateRecipe::Explicit(ref k) => {
                if k.dim() != d {
                    return Err(Error::Shape {
                        expected: (d, k.slots()),
                        found: k.shape(),
                    });
                }
                k.normalize()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ket::{BasisTuple, RayRelation};
    use num_rational::Ratio;

    fn tuple(l: &[usize], d: usize) -> BasisTuple {
        BasisTuple::new(l.to_vec(), d).unwrap()
    }

    #[test]
    fn precondition_errors() {
        assert!(matches!(psi_s(3, 3, 2), Err(Error::Dimension { .. })));
        assert!(matches!(psi_s(2, 2, 3), Err(Error::Domain(_))));
        assert!(matches!(psi_d(4, 5, 4), Err(Error::Dimension { .. })));
        assert!(psi_d(3, 4, 4).is_ok());
        assert!(matches!(random_exchange_eigenstate(2, 2, 1, 1, -1, 0), Err(Error::Domain(_))));
        assert!(matches!(random_exchange_eigenstate(2, 2, 1, 2, 0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn spectator_slots_carry_label_m() {
        let k = psi_s(3, 5, 4).unwrap();
        assert!(k.iter().all(|(t, _)| t.label(4) == 3 && t.label(5) == 3));
        assert_eq!(k.support_len(), 4);
    }

    #[test]
    fn exact_probabilities_for_psi_s() {
        for m in 3..=6 {
            let k = exact_psi_s(m, m, m).unwrap();
            assert_eq!(k.term_count(), 2 * (1..m).product::<usize>());
            assert_eq!(k.slot_label_probability(1, 0).unwrap(), Ratio::new(1, 2));
            for i in 2..=m {
                assert_eq!(k.slot_label_probability(i, 0).unwrap(), Ratio::new(1, 2 * (m as i128 - 1)));
            }
        }
    }

    #[test]
    fn psi_a_is_antisymmetric_in_the_tail() {
        let k = psi_a(3, 3, 3).unwrap();
        let t = transpose_slots(&k, 2, 3).unwrap();
        match k.ray_compare(&t, 1e-12).unwrap() {
            RayRelation::Proportional(l) => assert!((l + 1.0).norm() < 1e-14),
            RayRelation::Distinct => panic!("expected -1"),
        }
        assert!((k.amplitude(&tuple(&[0, 1, 2], 3)).re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn phase_state_limits() {
        let k = phase_state(0.0, 2).unwrap();
        assert_eq!(k.ray_compare(&transpose_slots(&k, 1, 2).unwrap(), 1e-12).unwrap(), RayRelation::Proportional(C64::new(1.0, 0.0)));
        let k = phase_state(core::f64::consts::PI, 2).unwrap();
        match k.ray_compare(&transpose_slots(&k, 1, 2).unwrap(), 1e-12).unwrap() {
            RayRelation::Proportional(l) => assert!((l + 1.0).norm() < 1e-12),
            RayRelation::Distinct => panic!(),
        }
        let k = phase_state(core::f64::consts::FRAC_PI_3, 2).unwrap();
        assert_eq!(k.ray_compare(&transpose_slots(&k, 1, 2).unwrap(), 1e-10).unwrap(), RayRelation::Distinct);
        assert!((k.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_exchange_eigenstates_are_deterministic_eigenvectors() {
        for sign in [1, -1] {
            let a = random_exchange_eigenstate(3, 3, 1, 3, sign, 42).unwrap();
            let b = random_exchange_eigenstate(3, 3, 1, 3, sign, 42).unwrap();
            assert_eq!(a, b);
            let t = transpose_slots(&a, 1, 3).unwrap();
            assert!(t.add_scaled(C64::new(-(sign as f64), 0.0), &a).unwrap().norm() < 1e-12);
            assert!((a.norm() - 1.0).abs() < 1e-12);
        }
        assert_ne!(
            random_exchange_eigenstate(2, 2, 1, 2, 1, 1).unwrap(),
            random_exchange_eigenstate(2, 2, 1, 2, 1, 2).unwrap()
        );
    }

    #[test]
    fn recipes_build_catalog_states() {
        assert_eq!(StateRecipe::PsiS { m: 3, n: 3 }.build(3).unwrap(), psi_s(3, 3, 3).unwrap());
        assert_eq!(StateRecipe::Phase { theta: 0.3 }.build(2).unwrap(), phase_state(0.3, 2).unwrap());
        let k = MultiKet::product(&[0, 1], 2).unwrap().scale(C64::new(3.0, 0.0));
        assert!((StateRecipe::Explicit(k).build(2).unwrap().norm() - 1.0).abs() < 1e-14);
    }
}
