//! Joint and conditional probabilities of single-particle propositions.
//!
//! A proposition `O_s = x` is represented by the eigenprojector of family
//! member `O_s` for eigenvalue `x`. A conjunction is the ordered product of
//! its projectors (left to right in the order the propositions are written),
//! and its value in state Ψ is `⟨Ψ|P_1 P_2 ... P_k|Ψ⟩ / ⟨Ψ|Ψ⟩`. Projectors on
//! the same slot need not commute, so the value can be complex; it is returned
//! as computed and never reordered.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::ket::MultiKet;
use crate::observable::{Projector, SpectralFamily};
use crate::perm::check_pair;
use crate::tolerance;

/// The atomic proposition "the `slot` member of `family` has the given eigenvalue".
#[derive(Debug, Clone)]
pub struct Atom {
    family: Arc<SpectralFamily>,
    slot: usize,
    index: usize,
}

impl Atom {
    pub fn new(family: Arc<SpectralFamily>, slot: usize, value: f64) -> Result<Self> {
        let index = family.cluster_index(slot, value, tolerance::EIGEN_CLUSTER)?;
        Ok(Atom { family, slot, index })
    }

    /// Atom for the `index`-th eigenvalue cluster (ascending) of the slot member.
    pub fn by_index(family: Arc<SpectralFamily>, slot: usize, index: usize) -> Result<Self> {
        family.projector(slot, index)?;
        Ok(Atom { family, slot, index })
    }

    pub fn family(&self) -> &Arc<SpectralFamily> {
        &self.family
    }

    pub fn slot(&self) -> usize {
        self.slot
    }

    pub fn value(&self) -> f64 {
        self.family.value(self.slot, self.index).expect("validated on construction")
    }

    pub fn eigen_index(&self) -> usize {
        self.index
    }

    pub fn projector(&self) -> &Projector {
        self.family.projector(self.slot, self.index).expect("validated on construction")
    }

    /// The same proposition about the particle in `slot`.
    pub fn moved_to(&self, slot: usize) -> Result<Atom> {
        Atom::by_index(self.family.clone(), slot, self.index)
    }

    fn transposed(&self, i: usize, j: usize) -> Result<Atom> {
        if self.slot == i {
            self.moved_to(j)
        } else if self.slot == j {
            self.moved_to(i)
        } else {
            Ok(self.clone())
        }
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.family, &other.family) || self.family == other.family)
            && self.slot == other.slot
            && self.index == other.index
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}={}", self.family.name(), self.slot, self.value())
    }
}

/// `pr(conclusion | condition)`, each side an ordered conjunction.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    conclusion: Vec<Atom>,
    condition: Vec<Atom>,
}

impl Query {
    pub fn new(conclusion: Vec<Atom>, condition: Vec<Atom>) -> Result<Self> {
        let first = conclusion
            .first()
            .ok_or(Error::Domain("a query needs at least one conclusion atom"))?;
        let shape = (first.family.dim(), first.family.slots());
        for a in conclusion.iter().chain(&condition) {
            let found = (a.family.dim(), a.family.slots());
            if found != shape {
                return Err(Error::Shape {
                    expected: shape,
                    found,
                });
            }
        }
        Ok(Query {
            conclusion,
            condition,
        })
    }

    /// Unconditional query.
    pub fn joint(conclusion: Vec<Atom>) -> Result<Self> {
        Query::new(conclusion, Vec::new())
    }

    pub fn conclusion(&self) -> &[Atom] {
        &self.conclusion
    }

    pub fn condition(&self) -> &[Atom] {
        &self.condition
    }

    pub fn slots(&self) -> usize {
        self.conclusion[0].family.slots()
    }

    pub fn dim(&self) -> usize {
        self.conclusion[0].family.dim()
    }

    /// Relabels slot `i` as `j` and vice versa on every atom, keeping order.
    pub fn transpose(&self, i: usize, j: usize) -> Result<Query> {
        check_pair(self.slots(), i, j)?;
        let swap = |atoms: &[Atom]| atoms.iter().map(|a| a.transposed(i, j)).collect::<Result<Vec<_>>>();
        Ok(Query {
            conclusion: swap(&self.conclusion)?,
            condition: swap(&self.condition)?,
        })
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, atoms: &[Atom]| -> fmt::Result {
            for (k, a) in atoms.iter().enumerate() {
                if k > 0 {
                    f.write_str(" & ")?;
                }
                write!(f, "{a}")?;
            }
            Ok(())
        };
        f.write_str("pr(")?;
        join(f, &self.conclusion)?;
        if !self.condition.is_empty() {
            f.write_str(" | ")?;
            join(f, &self.condition)?;
        }
        f.write_str(")")
    }
}

fn check_ket(k: &MultiKet, atoms: &[Atom]) -> Result<()> {
    for a in atoms {
        let shape = (a.family.dim(), a.family.slots());
        if shape != k.shape() {
            return Err(Error::Shape {
                expected: k.shape(),
                found: shape,
            });
        }
    }
    if k.is_zero() {
        return Err(Error::DegenerateState);
    }
    Ok(())
}

/// `⟨Ψ|P_1 ... P_k|Ψ⟩ / ⟨Ψ|Ψ⟩`, projectors applied rightmost first.
pub fn joint_value(k: &MultiKet, atoms: &[Atom]) -> Result<C64> {
    check_ket(k, atoms)?;
    let mut v = k.clone();
    for a in atoms.iter().rev() {
        v = a.projector().apply(&v)?;
    }
    Ok(k.inner(&v)? / k.norm_sqr())
}

/// `joint(conclusion ++ condition) / joint(condition)`.
pub fn conditional_value(k: &MultiKet, q: &Query) -> Result<C64> {
    if q.condition.is_empty() {
        return joint_value(k, &q.conclusion);
    }
    let denominator = joint_value(k, &q.condition)?;
    if denominator.norm() < tolerance::NULL_CONDITION {
        return Err(Error::ConditioningOnNull {
            probability: denominator.norm(),
        });
    }
    let mut all = q.conclusion.clone();
    all.extend(q.condition.iter().cloned());
    Ok(joint_value(k, &all)? / denominator)
}

/// Whether the value is real within the reporting tolerance.
pub fn is_real(v: C64) -> bool {
    v.im.abs() <= tolerance::NON_REAL
}

/// Values of the query and of its `i↔j` transpose.
pub fn transposed_pair(k: &MultiKet, q: &Query, i: usize, j: usize) -> Result<(C64, C64)> {
    let t = q.transpose(i, j)?;
    Ok((conditional_value(k, q)?, conditional_value(k, &t)?))
}

/// Whether the query and its `i↔j` transpose agree within `tol`.
pub fn symmetry_check(k: &MultiKet, q: &Query, i: usize, j: usize, tol: f64) -> Result<bool> {
    let (a, b) = transposed_pair(k, q, i, j)?;
    Ok((a - b).norm() < tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observable::{Matrix, SingleParticleObservable};
    use crate::perm::{antisymmetrize, symmetrize};
    use alloc::vec;

    fn standard(n: usize, d: usize) -> Arc<SpectralFamily> {
        Arc::new(SpectralFamily::embedded("Q", &SingleParticleObservable::standard(d).unwrap(), n).unwrap())
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn psi_s_single_atoms() {
        let k = MultiKet::product(&[0, 1, 2], 3).unwrap();
        let psi = symmetrize(&antisymmetrize(&k, &[1, 2]).unwrap(), &[2, 3]).unwrap();
        let q = standard(3, 3);
        let v1 = joint_value(&psi, &[Atom::new(q.clone(), 1, 1.0).unwrap()]).unwrap();
        let v2 = joint_value(&psi, &[Atom::new(q.clone(), 2, 1.0).unwrap()]).unwrap();
        assert!((v1 - c(0.5)).norm() < 1e-12);
        assert!((v2 - c(0.25)).norm() < 1e-12);
    }

    #[test]
    fn conditional_cases() {
        let q = standard(2, 2);
        let k = antisymmetrize(&MultiKet::product(&[0, 1], 2).unwrap(), &[1, 2]).unwrap();
        let a1 = Atom::new(q.clone(), 1, 1.0).unwrap();
        let a2 = Atom::new(q.clone(), 2, 1.0).unwrap();
        let b2 = Atom::new(q.clone(), 2, 2.0).unwrap();

        let plain = Query::joint(vec![a1.clone()]).unwrap();
        assert_eq!(conditional_value(&k, &plain).unwrap(), joint_value(&k, core::slice::from_ref(&a1)).unwrap());

        let excl = Query::new(vec![a1.clone()], vec![a2.clone()]).unwrap();
        assert!(conditional_value(&k, &excl).unwrap().norm() < 1e-15);

        let sure = Query::new(vec![a1.clone()], vec![b2.clone()]).unwrap();
        assert!((conditional_value(&k, &sure).unwrap() - c(1.0)).norm() < 1e-12);

        // conditioning on a null event is an error, not a zero
        let k11 = MultiKet::product(&[0, 0], 2).unwrap();
        let null = Query::new(vec![a1.clone()], vec![b2]).unwrap();
        assert!(matches!(conditional_value(&k11, &null), Err(Error::ConditioningOnNull { .. })));
    }

    #[test]
    fn transpose_query_relabels_slots_only() {
        let q = standard(3, 2);
        let query = Query::new(
            vec![Atom::new(q.clone(), 1, 1.0).unwrap(), Atom::new(q.clone(), 3, 2.0).unwrap()],
            vec![Atom::new(q.clone(), 2, 2.0).unwrap()],
        )
        .unwrap();
        let t = query.transpose(1, 2).unwrap();
        assert_eq!(t.conclusion()[0].slot(), 2);
        assert_eq!(t.conclusion()[1].slot(), 3);
        assert_eq!(t.condition()[0].slot(), 1);
        assert_eq!(t.transpose(1, 2).unwrap(), query);
        assert!(query.transpose(1, 4).is_err());
    }

    #[test]
    fn symmetric_states_do_not_discern_and_phase_state_single_atoms_agree() {
        let q = standard(2, 2);
        let a = Atom::new(q.clone(), 1, 1.0).unwrap();
        let query = Query::joint(vec![a]).unwrap();
        let theta = core::f64::consts::FRAC_PI_3;
        let psi = MultiKet::product(&[0, 1], 2)
            .unwrap()
            .add_scaled(C64::from_polar(1.0, theta), &MultiKet::product(&[1, 0], 2).unwrap())
            .unwrap();
        assert!(symmetry_check(&psi, &query, 1, 2, 1e-12).unwrap());
        assert!((joint_value(&psi, query.conclusion()).unwrap() - c(0.5)).norm() < 1e-12);
    }

    #[test]
    fn same_slot_order_matters_for_non_commuting_projectors() {
        let x = Matrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let fx = Arc::new(SpectralFamily::embedded("X", &SingleParticleObservable::new(x).unwrap(), 2).unwrap());
        let fz = standard(2, 2);
        let k = MultiKet::from_dense(2, 2, &[c(0.9), C64::new(0.1, 0.3), c(0.2), C64::new(0.0, -0.4)]).unwrap();
        let zx = [Atom::new(fz.clone(), 1, 1.0).unwrap(), Atom::new(fx.clone(), 1, 1.0).unwrap()];
        let xz = [zx[1].clone(), zx[0].clone()];
        let a = joint_value(&k, &zx).unwrap();
        let b = joint_value(&k, &xz).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
        assert!((a - b).norm() > 1e-3);
        assert!(!is_real(a));
    }

    #[test]
    fn distinct_slot_reordering_is_harmless() {
        let q = standard(3, 2);
        let k = MultiKet::from_dense(2, 3, &(0..8).map(|x| C64::new(x as f64, 1.0 - x as f64)).collect::<Vec<_>>()).unwrap();
        let a = Atom::new(q.clone(), 1, 1.0).unwrap();
        let b = Atom::new(q.clone(), 3, 2.0).unwrap();
        let v1 = joint_value(&k, &[a.clone(), b.clone()]).unwrap();
        let v2 = joint_value(&k, &[b, a]).unwrap();
        assert!((v1 - v2).norm() < 1e-12);
        assert!(v1.im.abs() < 1e-12 && v1.re >= -1e-12 && v1.re <= 1.0 + 1e-12);
    }

    #[test]
    fn atom_rejects_foreign_eigenvalue() {
        let q = standard(2, 2);
        assert!(Atom::new(q.clone(), 1, 3.0).is_err());
        assert!(Atom::new(q, 3, 1.0).is_err());
        assert!(Query::joint(vec![]).is_err());
    }
}
