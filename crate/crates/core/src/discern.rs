//! Deciding and witnessing the discernibility of particle pairs.
//!
//! The decision procedure is the ray test: particles `i` and `j` are
//! indiscernible in Ψ exactly when `P_ij Ψ = ±Ψ`. The witness search only
//! corroborates a negative verdict with an explicit query whose value changes
//! under `i↔j`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use itertools::Itertools;
use num_complex::Complex64 as C64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{phase_state, random_exchange_eigenstate, random_ket};
use crate::error::{Error, Result};
use crate::ket::{MultiKet, RayRelation};
use crate::observable::{commutes_with_swap, verify_cc_family, OperatorFamily, SingleParticleObservable, SpectralFamily};
use crate::perm::{check_pair, transpose_slots};
use crate::probability::{transposed_pair, Atom, Query};
use crate::tolerance;

/// Number of seeded random observables in the default pool.
pub const DEFAULT_POOL_RANDOM: usize = 32;

/// A seed for stream `stream` derived from a master seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExchangeCharacter {
    Symmetric,
    Antisymmetric,
    Neither,
}

impl ExchangeCharacter {
    pub fn as_str(self) -> &'static str {
        match self {
            ExchangeCharacter::Symmetric => "symmetric",
            ExchangeCharacter::Antisymmetric => "antisymmetric",
            ExchangeCharacter::Neither => "neither",
        }
    }
}

/// Whether `P_ij Ψ` is `+Ψ`, `-Ψ`, or a different ray.
pub fn exchange_character(k: &MultiKet, i: usize, j: usize, tol: f64) -> Result<ExchangeCharacter> {
    check_pair(k.slots(), i, j)?;
    let k = k.normalize()?;
    let swapped = transpose_slots(&k, i, j)?;
    match k.ray_compare(&swapped, tol)? {
        RayRelation::Distinct => Ok(ExchangeCharacter::Neither),
        RayRelation::Proportional(lambda) => {
            let lambda_tol = tol / k.max_amplitude();
            if (lambda - 1.0).norm() <= lambda_tol {
                Ok(ExchangeCharacter::Symmetric)
            } else if (lambda + 1.0).norm() <= lambda_tol {
                Ok(ExchangeCharacter::Antisymmetric)
            } else {
                Err(Error::Internal("transposition produced an eigenvalue other than ±1"))
            }
        }
    }
}

pub fn indiscernible(k: &MultiKet, i: usize, j: usize, tol: f64) -> Result<bool> {
    Ok(exchange_character(k, i, j, tol)? != ExchangeCharacter::Neither)
}

/// The standard diagonal observable `Q` followed by `count` seeded random
/// observables `R[0], R[1], ...`, all slot-embedded.
pub fn observable_pool(d: usize, n: usize, count: usize, seed: u64) -> Result<Vec<Arc<SpectralFamily>>> {
    let mut pool = alloc::vec![Arc::new(SpectralFamily::embedded(
        "Q",
        &SingleParticleObservable::standard(d)?,
        n,
    )?)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for r in 0..count {
        let q = SingleParticleObservable::random(d, &mut rng)?;
        pool.push(Arc::new(SpectralFamily::embedded(&format!("R[{r}]"), &q, n)?));
    }
    Ok(pool)
}

pub fn default_pool(d: usize, n: usize, seed: u64) -> Result<Vec<Arc<SpectralFamily>>> {
    observable_pool(d, n, DEFAULT_POOL_RANDOM, seed)
}

/// A query whose value differs from that of its `i↔j` transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub query: Query,
    pub value_ij: C64,
    pub value_ji: C64,
}

impl Witness {
    pub fn gap(&self) -> f64 {
        (self.value_ij - self.value_ji).norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSearch {
    pub witness: Option<Witness>,
    pub evaluations: usize,
}

struct Search<'a> {
    k: &'a MultiKet,
    i: usize,
    j: usize,
    budget: usize,
    used: usize,
}

impl Search<'_> {
    fn exhausted(&self) -> bool {
        self.used >= self.budget
    }

    /// Evaluates one query; `Ok(Some)` is a witness.
    fn try_query(&mut self, atoms: Vec<Atom>) -> Result<Option<Witness>> {
        self.used += 1;
        let query = Query::joint(atoms)?;
        let (value_ij, value_ji) = transposed_pair(self.k, &query, self.i, self.j)?;
        if (value_ij - value_ji).norm() > tolerance::WITNESS {
            return Ok(Some(Witness {
                query,
                value_ij,
                value_ji,
            }));
        }
        Ok(None)
    }
}

fn atoms_of(f: &Arc<SpectralFamily>, slot: usize) -> Result<Vec<Atom>> {
    (0..f.eigenvalues(slot)?.len())
        .map(|x| Atom::by_index(f.clone(), slot, x))
        .collect()
}

/// Searches for a witness in a fixed order: single atoms of the pool at slot
/// `i`, two-atom conjunctions of pool observables on slots `i` and `j`, then
/// rounds of fresh seeded random observables (single atoms, two-atom
/// conjunctions, and conjunctions covering every slot). The pool stages stop
/// at half the budget so the random stage always runs.
///
/// One evaluation of a query and its transpose costs one unit of budget.
pub fn find_witness(
    k: &MultiKet,
    i: usize,
    j: usize,
    pool: &[Arc<SpectralFamily>],
    budget: usize,
    seed: u64,
) -> Result<WitnessSearch> {
    check_pair(k.slots(), i, j)?;
    if budget == 0 {
        return Err(Error::Domain("witness search budget must be at least 1"));
    }
    if k.is_zero() {
        return Err(Error::DegenerateState);
    }
    for f in pool {
        if (f.dim(), f.slots()) != k.shape() {
            return Err(Error::Shape {
                expected: k.shape(),
                found: (f.dim(), f.slots()),
            });
        }
    }
    let mut s = Search {
        k,
        i,
        j,
        budget: budget.div_ceil(2),
        used: 0,
    };
    let done = |s: &Search, w: Witness| WitnessSearch {
        witness: Some(w),
        evaluations: s.used,
    };

    for f in pool {
        for a in atoms_of(f, i)? {
            if s.exhausted() {
                break;
            }
            if let Some(w) = s.try_query(alloc::vec![a])? {
                return Ok(done(&s, w));
            }
        }
    }
    'pairs: for (f, g) in pool.iter().cartesian_product(pool) {
        for (a, b) in atoms_of(f, i)?.into_iter().cartesian_product(atoms_of(g, j)?) {
            if s.exhausted() {
                break 'pairs;
            }
            if let Some(w) = s.try_query(alloc::vec![a, b])? {
                return Ok(done(&s, w));
            }
        }
    }

    s.budget = budget;
    let (d, n) = k.shape();
    let spectators: Vec<usize> = (1..=n).filter(|&s| s != i && s != j).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut round = 0usize;
    while !s.exhausted() {
        let fresh = |rng: &mut ChaCha8Rng, tag: char| -> Result<Arc<SpectralFamily>> {
            let q = SingleParticleObservable::random(d, rng)?;
            Ok(Arc::new(SpectralFamily::embedded(&format!("G[{round}{tag}]"), &q, n)?))
        };
        let a = fresh(&mut rng, 'a')?;
        let b = fresh(&mut rng, 'b')?;
        let mut candidates: Vec<Vec<Atom>> = Vec::new();
        candidates.extend(atoms_of(&a, i)?.into_iter().map(|x| alloc::vec![x]));
        for (x, y) in atoms_of(&a, i)?.into_iter().cartesian_product(atoms_of(&b, j)?) {
            candidates.push(alloc::vec![x, y]);
        }
        if !spectators.is_empty() {
            let others = spectators
                .iter()
                .enumerate()
                .map(|(p, _)| fresh(&mut rng, (b'c' + (p % 24) as u8) as char))
                .collect::<Result<Vec<_>>>()?;
            for _ in 0..d {
                let mut atoms = alloc::vec![
                    Atom::by_index(a.clone(), i, rng.random_range(0..a.eigenvalues(i)?.len()))?,
                    Atom::by_index(b.clone(), j, rng.random_range(0..b.eigenvalues(j)?.len()))?,
                ];
                for (f, &slot) in others.iter().zip(&spectators) {
                    atoms.push(Atom::by_index(f.clone(), slot, rng.random_range(0..f.eigenvalues(slot)?.len()))?);
                }
                candidates.push(atoms);
            }
        }
        for atoms in candidates {
            if s.exhausted() {
                break;
            }
            if let Some(w) = s.try_query(atoms)? {
                return Ok(done(&s, w));
            }
        }
        round += 1;
    }
    Ok(WitnessSearch {
        witness: None,
        evaluations: s.used,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscernibilityVerdict {
    pub pair: (usize, usize),
    pub character: ExchangeCharacter,
    pub indiscernible: bool,
    pub witness: Option<Witness>,
    pub search_budget_used: usize,
    /// No witness was found although the ray test says the pair is discernible.
    pub inconclusive: bool,
}

/// Ray-test verdict for `(i, j)` together with the outcome of a witness search.
pub fn discern(
    k: &MultiKet,
    i: usize,
    j: usize,
    pool: &[Arc<SpectralFamily>],
    budget: usize,
    seed: u64,
) -> Result<DiscernibilityVerdict> {
    let character = exchange_character(k, i, j, tolerance::COMPARE)?;
    let search = find_witness(k, i, j, pool, budget, seed)?;
    let indiscernible = character != ExchangeCharacter::Neither;
    Ok(DiscernibilityVerdict {
        pair: (i, j),
        character,
        indiscernible,
        inconclusive: !indiscernible && search.witness.is_none(),
        witness: search.witness,
        search_budget_used: search.evaluations,
    })
}

/// Verdicts for every pair `i < j`.
pub fn discern_all(
    k: &MultiKet,
    pool: &[Arc<SpectralFamily>],
    budget: usize,
    seed: u64,
) -> Result<Vec<DiscernibilityVerdict>> {
    (1..=k.slots())
        .tuple_combinations()
        .enumerate()
        .map(|(p, (i, j))| discern(k, i, j, pool, budget, derive_seed(seed, p as u64)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialKind {
    Generic,
    Symmetric,
    Antisymmetric,
}

impl TrialKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TrialKind::Generic => "generic",
            TrialKind::Symmetric => "symmetric",
            TrialKind::Antisymmetric => "antisymmetric",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IffTrial {
    pub trial: usize,
    pub kind: TrialKind,
    pub pair: (usize, usize),
    pub character: ExchangeCharacter,
    pub witness_gap: Option<f64>,
    pub evaluations: usize,
}

impl IffTrial {
    /// Whether the trial contradicts the biconditional or the construction.
    pub fn is_violation(&self) -> bool {
        let expected = match self.kind {
            TrialKind::Symmetric => Some(ExchangeCharacter::Symmetric),
            TrialKind::Antisymmetric => Some(ExchangeCharacter::Antisymmetric),
            TrialKind::Generic => None,
        };
        if expected.is_some_and(|c| c != self.character) {
            return true;
        }
        match self.character {
            ExchangeCharacter::Neither => self.witness_gap.is_none(),
            _ => self.witness_gap.is_some(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IffReport {
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub budget: usize,
    pub trials: Vec<IffTrial>,
}

impl IffReport {
    pub fn violations(&self) -> Vec<&IffTrial> {
        self.trials.iter().filter(|t| t.is_violation()).collect()
    }

    pub fn count(&self, character: ExchangeCharacter) -> usize {
        self.trials.iter().filter(|t| t.character == character).count()
    }

    pub fn witnessed(&self) -> usize {
        self.trials.iter().filter(|t| t.witness_gap.is_some()).count()
    }
}

/// The state drawn for trial `t` of [`verify_iff`], with its kind and pair.
pub fn iff_trial_state(d: usize, n: usize, seed: u64, t: usize) -> Result<(TrialKind, (usize, usize), MultiKet)> {
    let pairs: Vec<(usize, usize)> = (1..=n).tuple_combinations().collect();
    if pairs.is_empty() {
        return Err(Error::Domain("need at least two slots"));
    }
    let (i, j) = pairs[t % pairs.len()];
    let state_seed = derive_seed(seed, 2 * t as u64);
    let (kind, k) = match t % 3 {
        0 => {
            let mut rng = ChaCha8Rng::seed_from_u64(state_seed);
            (TrialKind::Generic, random_ket(n, d, &mut rng)?)
        }
        1 => (TrialKind::Symmetric, random_exchange_eigenstate(n, d, i, j, 1, state_seed)?),
        _ => (TrialKind::Antisymmetric, random_exchange_eigenstate(n, d, i, j, -1, state_seed)?),
    };
    Ok((kind, (i, j), k))
}

/// Checks both directions of the biconditional on seeded random states,
/// alternating generic, symmetric-projected and antisymmetric-projected trials.
pub fn verify_iff(d: usize, n: usize, trials: usize, seed: u64, budget: usize) -> Result<IffReport> {
    let pool = default_pool(d, n, seed)?;
    let mut out = Vec::with_capacity(trials);
    for t in 0..trials {
        let (kind, (i, j), k) = iff_trial_state(d, n, seed, t)?;
        let character = exchange_character(&k, i, j, tolerance::COMPARE)?;
        let search = find_witness(&k, i, j, &pool, budget, derive_seed(seed, 2 * t as u64 + 1))?;
        out.push(IffTrial {
            trial: t,
            kind,
            pair: (i, j),
            character,
            witness_gap: search.witness.as_ref().map(Witness::gap),
            evaluations: search.evaluations,
        });
    }
    Ok(IffReport {
        d,
        n,
        seed,
        budget,
        trials: out,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub step: usize,
    pub theta: f64,
    pub character: ExchangeCharacter,
    /// `(pr(Q_1=q), pr(Q_2=q))` for each eigenvalue `q` of the standard observable.
    pub q_values: Vec<(f64, C64, C64)>,
    pub witness: Option<Witness>,
    pub evaluations: usize,
}

/// The phase state `φ_1φ_2 + e^{iθ}φ_2φ_1` on `θ = 2πs/steps`, `s = 0..=steps`.
pub fn phase_sweep(d: usize, steps: usize, budget: usize, seed: u64) -> Result<Vec<PhasePoint>> {
    if steps == 0 {
        return Err(Error::Domain("phase sweep needs at least one step"));
    }
    let q = Arc::new(SpectralFamily::embedded("Q", &SingleParticleObservable::standard(d)?, 2)?);
    let pool = default_pool(d, 2, seed)?;
    (0..=steps)
        .map(|s| {
            let theta = 2.0 * core::f64::consts::PI * s as f64 / steps as f64;
            let k = phase_state(theta, d)?;
            let q_values = atoms_of(&q, 1)?
                .into_iter()
                .map(|a| {
                    let query = Query::joint(alloc::vec![a.clone()])?;
                    let (v1, v2) = transposed_pair(&k, &query, 1, 2)?;
                    Ok((a.value(), v1, v2))
                })
                .collect::<Result<Vec<_>>>()?;
            let search = find_witness(&k, 1, 2, &pool, budget, derive_seed(seed, s as u64))?;
            Ok(PhasePoint {
                step: s,
                theta,
                character: exchange_character(&k, 1, 2, tolerance::COMPARE)?,
                q_values,
                witness: search.witness,
                evaluations: search.evaluations,
            })
        })
        .collect()
}

/// Whether all members of a CC family that also commutes with every swap act
/// identically. Under those preconditions this must hold.
pub fn ip_family_collapse(f: &OperatorFamily, tol: f64) -> Result<bool> {
    if !verify_cc_family(f, tol) {
        return Err(Error::Contract("family does not satisfy the conjugacy condition"));
    }
    for member in f.members() {
        for (i, j) in (1..=f.slots()).tuple_combinations() {
            if !commutes_with_swap(member, i, j, tol)? {
                return Err(Error::Contract("family member does not commute with every transposition"));
            }
        }
    }
    let first = f.member(1)?;
    for member in &f.members()[1..] {
        if !member.acts_like(first, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Human-readable summary of a witness, e.g. `pr(Q1=1): 0.5 vs 0.25`.
pub fn describe_witness(w: &Witness) -> String {
    format!("{}: {} vs {}", w.query, w.value_ij, w.value_ji)
}
