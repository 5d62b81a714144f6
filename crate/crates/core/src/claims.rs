//! Probability tables for the totally (anti)symmetric, mixed and
//! all-discernible states of `m` particles, with exact rational values and
//! the closed forms obtained by term counting.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::catalog::{exact_psi_a, exact_psi_d, exact_psi_s};
use crate::discern::{default_pool, discern_all, DiscernibilityVerdict};
use crate::error::{Error, Result};
use crate::exact::ExactKet;
use crate::observable::{SingleParticleObservable, SpectralFamily};
use crate::probability::{joint_value, Atom};

pub type Rational = Ratio<i128>;

/// Largest `m` accepted by [`reproduce_claims`].
pub const MAX_M: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateName {
    Symmetric,
    Antisymmetric,
    PsiS,
    PsiA,
    PsiD,
}

impl StateName {
    pub fn as_str(self) -> &'static str {
        match self {
            StateName::Symmetric => "symmetric",
            StateName::Antisymmetric => "antisymmetric",
            StateName::PsiS => "psi_s",
            StateName::PsiA => "psi_a",
            StateName::PsiD => "psi_d",
        }
    }
}

/// `pr(Q_slot = q_{label+1})` in one state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityRow {
    pub slot: usize,
    pub label: usize,
    pub exact: Rational,
    pub float: f64,
    pub closed_form: Option<Rational>,
}

impl ProbabilityRow {
    pub fn matches(&self) -> Option<bool> {
        self.closed_form.map(|c| c == self.exact)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateClaim {
    pub state: StateName,
    pub term_count: usize,
    pub norm_sqr: i128,
    pub rows: Vec<ProbabilityRow>,
    pub verdicts: Vec<DiscernibilityVerdict>,
}

impl StateClaim {
    pub fn row(&self, slot: usize, label: usize) -> Option<&ProbabilityRow> {
        self.rows.iter().find(|r| r.slot == slot && r.label == label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimsReport {
    pub m: usize,
    pub budget: usize,
    pub seed: u64,
    pub states: Vec<StateClaim>,
}

impl ClaimsReport {
    pub fn state(&self, name: StateName) -> &StateClaim {
        self.states.iter().find(|s| s.state == name).expect("all states are built")
    }
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

/// Closed form for `pr(Q_1=q_1)` (slot 1) and `pr(Q_i=q_1)` (`2 ≤ i ≤ m`) in the mixed states.
pub fn mixed_closed_form(m: usize, slot: usize) -> Rational {
    if slot == 1 {
        Ratio::new(factorial(m - 1), 2 * factorial(m - 1))
    } else {
        Ratio::new(factorial(m - 2), 2 * factorial(m - 1))
    }
}

/// Term-counting values for the all-discernible state: `pr(Q_i=q_i)` on the
/// diagonal, `pr(Q_j=q_i)` off it.
pub fn psi_d_closed_form(m: usize, slot: usize, label: usize) -> Rational {
    let denominator = 2 * factorial(m);
    let mi = m as i128;
    if slot == label + 1 {
        Ratio::new(factorial(m - 1) + (2 * mi - 3) * factorial(m - 2), denominator)
    } else {
        Ratio::new((2 * mi - 4) * factorial(m - 2), denominator)
    }
}

fn rows<F>(k: &ExactKet, labels: &[usize], closed: F) -> Result<Vec<ProbabilityRow>>
where
    F: Fn(usize, usize) -> Option<Rational>,
{
    let m = k.slots();
    let float = k.to_multiket()?;
    let q = Arc::new(SpectralFamily::embedded(
        "Q",
        &SingleParticleObservable::standard(k.dim())?,
        m,
    )?);
    let mut out = Vec::new();
    for &label in labels {
        for slot in 1..=m {
            let atom = Atom::by_index(q.clone(), slot, label)?;
            out.push(ProbabilityRow {
                slot,
                label,
                exact: k.slot_label_probability(slot, label)?,
                float: joint_value(&float, &[atom])?.re,
                closed_form: closed(slot, label),
            });
        }
    }
    Ok(out)
}

fn claim<F>(
    state: StateName,
    k: ExactKet,
    labels: &[usize],
    closed: F,
    budget: usize,
    seed: u64,
) -> Result<StateClaim>
where
    F: Fn(usize, usize) -> Option<Rational>,
{
    let pool = default_pool(k.dim(), k.slots(), seed)?;
    let verdicts = discern_all(&k.to_multiket()?, &pool, budget, seed)?;
    Ok(StateClaim {
        state,
        term_count: k.term_count(),
        norm_sqr: k.norm_sqr(),
        rows: rows(&k, labels, closed)?,
        verdicts,
    })
}

/// Builds every table for `m` particles with `d = m`.
pub fn reproduce_claims(m: usize, budget: usize, seed: u64) -> Result<ClaimsReport> {
    if !(3..=MAX_M).contains(&m) {
        return Err(Error::Domain("m must lie between 3 and 7"));
    }
    let slots: Vec<usize> = (1..=m).collect();
    let base = ExactKet::product(&(0..m).collect::<Vec<_>>(), m)?;
    let all_labels: Vec<usize> = (0..m).collect();
    let states = alloc::vec![
        claim(StateName::Symmetric, base.symmetrize_raw(&slots)?, &[0], |_, _| None, budget, seed)?,
        claim(StateName::Antisymmetric, base.antisymmetrize_raw(&slots)?, &[0], |_, _| None, budget, seed)?,
        claim(StateName::PsiS, exact_psi_s(m, m, m)?, &[0], |s, _| Some(mixed_closed_form(m, s)), budget, seed)?,
        claim(StateName::PsiA, exact_psi_a(m, m, m)?, &[0], |s, _| Some(mixed_closed_form(m, s)), budget, seed)?,
        claim(
            StateName::PsiD,
            exact_psi_d(m, m, m)?,
            &all_labels,
            |s, l| Some(psi_d_closed_form(m, s, l)),
            budget,
            seed
        )?,
    ];
    Ok(ClaimsReport {
        m,
        budget,
        seed,
        states,
    })
}
