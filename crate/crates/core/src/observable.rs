//! Single-particle observables, structural full-space operators, and operator
//! families satisfying the conjugacy condition `O_j = P_ij O_i P_ij`.
//!
//! Full-space operators are sums of n-fold tensor products of `d×d` factors.
//! Conjugating by a slot transposition is then a factor swap, and operator
//! equality is decided by action on every basis tuple.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::ket::{BasisTuple, MultiKet};
use crate::perm::{check_pair, check_slot, transpose_slots, SlotPermutation};
use crate::tolerance;

pub type Matrix = DMatrix<C64>;

const HERMITIAN_TOL: f64 = 1e-12;
const RECONSTRUCTION_TOL: f64 = 1e-10;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn is_identity(m: &Matrix) -> bool {
    m.is_square()
        && m.iter()
            .enumerate()
            .all(|(k, x)| *x == if k % (m.nrows() + 1) == 0 { one() } else { zero() })
}

pub fn is_hermitian(m: &Matrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.adjoint()) <= tol
}

/// One eigenvalue cluster and the orthogonal projector onto its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenspace {
    pub value: f64,
    pub rank: usize,
    pub projector: Matrix,
    pub vectors: Vec<Vec<C64>>,
}

/// Orthonormalizes `cols` in place (modified Gram-Schmidt, two passes).
fn orthonormalize(cols: &mut [nalgebra::DVector<C64>]) {
    for _ in 0..2 {
        for k in 0..cols.len() {
            let (done, rest) = cols.split_at_mut(k);
            let v = &mut rest[0];
            for u in done.iter() {
                let c = u.dotc(v);
                *v -= u * c;
            }
            let norm = v.norm();
            if norm > 0.0 {
                *v /= C64::new(norm, 0.0);
            }
        }
    }
}

/// Two steps of shifted inverse iteration on one eigenvalue cluster.
///
/// The complex Hermitian solver occasionally returns eigenvectors with
/// residuals near 1e-6, which is visible in swap-transported probabilities.
fn refine_cluster(m: &Matrix, value: f64, mut cols: Vec<nalgebra::DVector<C64>>) -> Vec<nalgebra::DVector<C64>> {
    let n = m.nrows();
    let scale = m.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let shift = value + 1e-9 * scale;
    let lu = (m - Matrix::identity(n, n) * C64::new(shift, 0.0)).lu();
    for _ in 0..2 {
        for v in cols.iter_mut() {
            if let Some(x) = lu.solve(v) {
                if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                    *v = x;
                }
            }
        }
        orthonormalize(&mut cols);
    }
    cols
}

/// Hermitian eigendecomposition with eigenvalues within `cluster_tol` merged.
fn spectral_decomposition(m: &Matrix, cluster_tol: f64) -> Vec<Eigenspace> {
    let n = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let order: Vec<usize> = (0..n)
        .sorted_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
        .collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match groups.last_mut() {
            Some(g) if eig.eigenvalues[k] - eig.eigenvalues[*g.last().unwrap()] <= cluster_tol => {
                g.push(k)
            }
            _ => groups.push(alloc::vec![k]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let value = g.iter().map(|&k| eig.eigenvalues[k]).sum::<f64>() / g.len() as f64;
            let cols: Vec<_> = g.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect();
            let cols = refine_cluster(m, value, cols);
            let mut projector = Matrix::zeros(n, n);
            let mut vectors = Vec::with_capacity(g.len());
            for v in &cols {
                projector += v * v.adjoint();
                vectors.push(v.iter().copied().collect());
            }
            Eigenspace {
                value,
                rank: g.len(),
                projector,
                vectors,
            }
        })
        .collect()
}

/// A Hermitian operator on the single-particle space with its spectral decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticleObservable {
    matrix: Matrix,
    spectrum: Vec<Eigenspace>,
}

impl SingleParticleObservable {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.nrows() < 2 {
            return Err(Error::Dimension {
                required: 2,
                found: matrix.nrows(),
            });
        }
        if !is_hermitian(&matrix, HERMITIAN_TOL) {
            return Err(Error::Domain("matrix is not Hermitian"));
        }
        let spectrum = spectral_decomposition(&matrix, tolerance::EIGEN_CLUSTER);
        let mut rebuilt = Matrix::zeros(matrix.nrows(), matrix.ncols());
        for e in &spectrum {
            rebuilt += &e.projector * C64::new(e.value, 0.0);
        }
        if max_abs_diff(&rebuilt, &matrix) > RECONSTRUCTION_TOL {
            return Err(Error::Internal("spectral reconstruction failed"));
        }
        Ok(SingleParticleObservable { matrix, spectrum })
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let d = values.len();
        SingleParticleObservable::new(Matrix::from_fn(d, d, |r, c| {
            if r == c {
                C64::new(values[r], 0.0)
            } else {
                zero()
            }
        }))
    }

    /// The non-degenerate observable `diag(1, 2, ..., d)`: basis label `l`
    /// is the eigenvector with eigenvalue `l + 1`.
    pub fn standard(d: usize) -> Result<Self> {
        let values: Vec<f64> = (1..=d).map(|v| v as f64).collect();
        SingleParticleObservable::diagonal(&values)
    }

    /// A seeded random observable `(G + G†)/2` with complex Gaussian `G`.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self> {
        SingleParticleObservable::new(random_hermitian(d, rng))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &[Eigenspace] {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.iter().map(|e| e.value).collect()
    }

    /// The eigenspace whose eigenvalue lies within `tol` of `value`.
    pub fn eigenspace(&self, value: f64, tol: f64) -> Result<&Eigenspace> {
        self.spectrum
            .iter()
            .find(|e| (e.value - value).abs() <= tol)
            .ok_or(Error::Domain("value is not an eigenvalue of the observable"))
    }
}

/// `(G + G†)/2` for a `d×d` matrix of independent standard complex Gaussians.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    let g = Matrix::from_fn(d, d, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

/// One tensor-product term `coef · F_1 ⊗ ... ⊗ F_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coef: C64,
    pub factors: Vec<Matrix>,
}

/// A full-space operator kept as a linear combination of tensor products.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSum {
    dim: usize,
    slots: usize,
    terms: Vec<Term>,
}

impl OperatorSum {
    pub fn from_terms(dim: usize, slots: usize, terms: Vec<Term>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension { required: 2, found: dim });
        }
        if slots == 0 {
            return Err(Error::Domain("an operator needs at least one slot"));
        }
        for t in &terms {
            if t.factors.len() != slots
                || t.factors.iter().any(|f| f.nrows() != dim || f.ncols() != dim)
            {
                return Err(Error::Domain("term factors do not match the operator shape"));
            }
        }
        Ok(OperatorSum { dim, slots, terms })
    }

    pub fn identity(dim: usize, slots: usize) -> Result<Self> {
        OperatorSum::product(alloc::vec![Matrix::identity(dim, dim); slots])
    }

    /// A single tensor product `F_1 ⊗ ... ⊗ F_n`.
    pub fn product(factors: Vec<Matrix>) -> Result<Self> {
        let dim = factors.first().map(|f| f.nrows()).unwrap_or(0);
        let slots = factors.len();
        OperatorSum::from_terms(dim, slots, alloc::vec![Term { coef: one(), factors }])
    }

    /// `I ⊗ ... ⊗ M ⊗ ... ⊗ I` with `M` at 1-based `slot`.
    pub fn embed(matrix: &Matrix, slot: usize, slots: usize) -> Result<Self> {
        check_slot(slots, slot)?;
        let d = matrix.nrows();
        let mut factors = alloc::vec![Matrix::identity(d, d); slots];
        factors[slot - 1] = matrix.clone();
        OperatorSum::product(factors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    fn check_shape(&self, dim: usize, slots: usize) -> Result<()> {
        if (self.dim, self.slots) != (dim, slots) {
            return Err(Error::Shape {
                expected: (self.dim, self.slots),
                found: (dim, slots),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &OperatorSum) -> Result<OperatorSum> {
        other.check_shape(self.dim, self.slots)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(OperatorSum { terms, ..self.clone() })
    }

    pub fn scale(&self, c: C64) -> OperatorSum {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coef: t.coef * c,
                factors: t.factors.clone(),
            })
            .collect();
        OperatorSum { terms, ..self.clone() }
    }

    /// Operator product `self · other` (apply `other` first).
    pub fn compose(&self, other: &OperatorSum) -> Result<OperatorSum> {
        other.check_shape(self.dim, self.slots)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term {
                    coef: a.coef * b.coef,
                    factors: a.factors.iter().zip(&b.factors).map(|(x, y)| x * y).collect(),
                });
            }
        }
        Ok(OperatorSum { terms, ..self.clone() })
    }

    /// Applies the operator to a ket, slot by slot for each term.
    pub fn apply(&self, k: &MultiKet) -> Result<MultiKet> {
        self.check_shape(k.dim(), k.slots())?;
        let mut acc: BTreeMap<BasisTuple, C64> = BTreeMap::new();
        for term in &self.terms {
            let mut current: BTreeMap<BasisTuple, C64> =
                k.iter().map(|(t, a)| (t.clone(), *a)).collect();
            for (s, f) in term.factors.iter().enumerate() {
                if is_identity(f) {
                    continue;
                }
                let mut next: BTreeMap<BasisTuple, C64> = BTreeMap::new();
                for (t, a) in &current {
                    let col = t.labels()[s];
                    for row in 0..self.dim {
                        let m = f[(row, col)];
                        if m == zero() {
                            continue;
                        }
                        let mut labels = t.labels().to_vec();
                        labels[s] = row;
                        *next
                            .entry(BasisTuple::from_vec_unchecked(labels))
                            .or_insert(zero()) += m * a;
                    }
                }
                current = next;
            }
            for (t, a) in current {
                *acc.entry(t).or_insert(zero()) += term.coef * a;
            }
        }
        Ok(MultiKet::from_map_unchecked(self.dim, self.slots, acc))
    }

    /// `P_ij O P_ij`: every term has factors `i` and `j` exchanged.
    pub fn conjugate_by_swap(&self, i: usize, j: usize) -> Result<OperatorSum> {
        check_pair(self.slots, i, j)?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut factors = t.factors.clone();
                factors.swap(i - 1, j - 1);
                Term {
                    coef: t.coef,
                    factors,
                }
            })
            .collect();
        Ok(OperatorSum { terms, ..self.clone() })
    }

    /// `σ O σ⁻¹`: the factor at slot `s` moves to slot `σ(s)`.
    pub fn conjugate_by(&self, sigma: &SlotPermutation) -> Result<OperatorSum> {
        if sigma.len() != self.slots {
            return Err(Error::Domain("permutation size does not match the slot count"));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut factors = t.factors.clone();
                for (s, f) in t.factors.iter().enumerate() {
                    factors[sigma.apply(s + 1) - 1] = f.clone();
                }
                Term {
                    coef: t.coef,
                    factors,
                }
            })
            .collect();
        Ok(OperatorSum { terms, ..self.clone() })
    }

    /// Columns of the operator, one ket per basis tuple.
    fn columns(&self) -> Vec<MultiKet> {
        BasisTuple::all(self.dim, self.slots)
            .map(|t| {
                let ket = MultiKet::from_map_unchecked(
                    self.dim,
                    self.slots,
                    core::iter::once((t, one())).collect(),
                );
                self.apply(&ket).expect("shape checked")
            })
            .collect()
    }

    /// Whether both operators act identically on every basis tuple within `tol`.
    pub fn acts_like(&self, other: &OperatorSum, tol: f64) -> Result<bool> {
        other.check_shape(self.dim, self.slots)?;
        for (a, b) in self.columns().iter().zip(other.columns()) {
            let mut worst = 0.0f64;
            for (t, x) in a.iter() {
                worst = worst.max((x - b.amplitude(t)).norm());
            }
            for (t, y) in b.iter() {
                worst = worst.max((y - a.amplitude(t)).norm());
            }
            if worst > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Dense `d^n × d^n` matrix; only used transiently at desk scale.
    pub fn to_dense(&self) -> Matrix {
        let size = self.dim.pow(self.slots as u32);
        let mut out = Matrix::zeros(size, size);
        for (c, col) in self.columns().into_iter().enumerate() {
            for (t, a) in col.iter() {
                out[(t.index(self.dim), c)] = *a;
            }
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        is_hermitian(&self.to_dense(), tol)
    }

    /// Spectral projectors of a Hermitian operator, sorted by eigenvalue.
    ///
    /// Single-term products of Hermitian factors decompose factor by factor and
    /// stay structural. Anything else is diagonalized densely and its
    /// projectors are kept as eigenvector lists.
    pub fn spectral_projectors(&self, cluster_tol: f64) -> Result<Vec<(f64, Projector)>> {
        if let Some(out) = self.structural_spectrum(cluster_tol)? {
            return Ok(out);
        }
        let dense = self.to_dense();
        if !is_hermitian(&dense, HERMITIAN_TOL) {
            return Err(Error::Domain("operator is not Hermitian"));
        }
        Ok(spectral_decomposition(&dense, cluster_tol)
            .into_iter()
            .map(|e| {
                let vectors = e
                    .vectors
                    .iter()
                    .map(|v| MultiKet::from_dense(self.dim, self.slots, v).expect("d^n vector"))
                    .collect();
                (e.value, Projector::LowRank(vectors))
            })
            .collect())
    }

    fn structural_spectrum(&self, cluster_tol: f64) -> Result<Option<Vec<(f64, Projector)>>> {
        if self.terms.len() != 1 {
            return Ok(None);
        }
        let term = &self.terms[0];
        if term.coef.im.abs() > HERMITIAN_TOL
            || term.factors.iter().any(|f| !is_hermitian(f, HERMITIAN_TOL))
        {
            return Ok(None);
        }
        let spectra: Vec<Vec<Eigenspace>> = term
            .factors
            .iter()
            .map(|f| spectral_decomposition(f, cluster_tol))
            .collect();
        let mut combos: Vec<(f64, Vec<usize>)> = spectra
            .iter()
            .map(|s| 0..s.len())
            .multi_cartesian_product()
            .map(|idx| {
                let value = idx
                    .iter()
                    .zip(&spectra)
                    .fold(term.coef.re, |acc, (&k, s)| acc * s[k].value);
                (value, idx)
            })
            .collect();
        combos.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, Vec<Vec<usize>>)> = Vec::new();
        for (value, idx) in combos {
            match out.last_mut() {
                Some((v, members)) if value - *v <= cluster_tol => members.push(idx),
                _ => out.push((value, alloc::vec![idx])),
            }
        }
        let result = out
            .into_iter()
            .map(|(value, members)| {
                let terms = members
                    .into_iter()
                    .map(|idx| Term {
                        coef: one(),
                        factors: idx
                            .iter()
                            .zip(&spectra)
                            .map(|(&k, s)| s[k].projector.clone())
                            .collect(),
                    })
                    .collect();
                let op = OperatorSum {
                    dim: self.dim,
                    slots: self.slots,
                    terms,
                };
                (value, Projector::Structured(op))
            })
            .collect();
        Ok(Some(result))
    }
}

/// An orthogonal projector on the full space.
#[derive(Debug, Clone, PartialEq)]
pub enum Projector {
    /// A sum of tensor products of single-particle projectors.
    Structured(OperatorSum),
    /// `Σ |v⟩⟨v|` over orthonormal eigenvectors of a non-factorizable operator.
    LowRank(Vec<MultiKet>),
}

impl Projector {
    pub fn apply(&self, k: &MultiKet) -> Result<MultiKet> {
        match self {
            Projector::Structured(op) => op.apply(k),
            Projector::LowRank(vectors) => {
                let mut out = MultiKet::zero(k.dim(), k.slots())?;
                for v in vectors {
                    out = out.add_scaled(v.inner(k)?, v)?;
                }
                Ok(out)
            }
        }
    }

    pub fn conjugate_by_swap(&self, i: usize, j: usize) -> Result<Projector> {
        match self {
            Projector::Structured(op) => Ok(Projector::Structured(op.conjugate_by_swap(i, j)?)),
            Projector::LowRank(vectors) => Ok(Projector::LowRank(
                vectors
                    .iter()
                    .map(|v| transpose_slots(v, i, j))
                    .collect::<Result<_>>()?,
            )),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Projector::Structured(op) => {
                num_traits::Float::round(op.to_dense().diagonal().iter().map(|x| x.re).sum::<f64>()) as usize
            }
            Projector::LowRank(v) => v.len(),
        }
    }
}

/// `Q_i`: the observable at slot `i` and identity elsewhere.
pub fn embed_single(q: &SingleParticleObservable, slot: usize, slots: usize) -> Result<OperatorSum> {
    OperatorSum::embed(q.matrix(), slot, slots)
}

/// `^qQ_i`: the eigenprojector of `q`'s eigenvalue cluster, embedded at slot `i`.
pub fn eigenprojector_embed(
    q: &SingleParticleObservable,
    value: f64,
    slot: usize,
    slots: usize,
) -> Result<OperatorSum> {
    let space = q.eigenspace(value, tolerance::EIGEN_CLUSTER)?;
    OperatorSum::embed(&space.projector, slot, slots)
}

pub fn conjugate_by_swap(o: &OperatorSum, i: usize, j: usize) -> Result<OperatorSum> {
    o.conjugate_by_swap(i, j)
}

/// Whether `P_ij O P_ij = O`, i.e. `[P_ij, O] = 0`.
pub fn commutes_with_swap(o: &OperatorSum, i: usize, j: usize, tol: f64) -> Result<bool> {
    o.conjugate_by_swap(i, j)?.acts_like(o, tol)
}

/// `n` operators indexed by slot.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorFamily {
    members: Vec<OperatorSum>,
}

impl OperatorFamily {
    pub fn new(members: Vec<OperatorSum>) -> Result<Self> {
        let first = members
            .first()
            .ok_or(Error::Domain("a family needs at least one member"))?;
        if members.len() != first.slots() {
            return Err(Error::Domain("a family has one member per slot"));
        }
        for m in &members {
            m.check_shape(first.dim(), first.slots())?;
        }
        Ok(OperatorFamily { members })
    }

    /// `{Q_1, ..., Q_n}`.
    pub fn embedded(q: &SingleParticleObservable, slots: usize) -> Result<Self> {
        OperatorFamily::new(
            (1..=slots)
                .map(|s| embed_single(q, s, slots))
                .collect::<Result<_>>()?,
        )
    }

    /// Members generated from the slot-1 member: `O_s = P_1s O_1 P_1s`.
    ///
    /// The result is a CC family exactly when `O_1` is invariant under
    /// permutations of slots `2..n`.
    pub fn from_generator(first: OperatorSum) -> Result<Self> {
        let n = first.slots();
        let mut members = alloc::vec![first.clone()];
        for s in 2..=n {
            members.push(first.conjugate_by_swap(1, s)?);
        }
        OperatorFamily::new(members)
    }

    /// `{A ⊗ ... ⊗ B ⊗ ... ⊗ A}` with `B` at the member's own slot.
    pub fn background_product(background: &Matrix, special: &Matrix, slots: usize) -> Result<Self> {
        let mut factors = alloc::vec![background.clone(); slots];
        factors[0] = special.clone();
        OperatorFamily::from_generator(OperatorSum::product(factors)?)
    }

    /// Every member equal to `op`.
    pub fn uniform(op: OperatorSum) -> Result<Self> {
        let n = op.slots();
        OperatorFamily::new(alloc::vec![op; n])
    }

    pub fn members(&self) -> &[OperatorSum] {
        &self.members
    }

    /// Member for 1-based `slot`.
    pub fn member(&self, slot: usize) -> Result<&OperatorSum> {
        check_slot(self.members.len(), slot)?;
        Ok(&self.members[slot - 1])
    }

    pub fn slots(&self) -> usize {
        self.members.len()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }
}

/// Whether `O_j = P_ij O_i P_ij` for every pair `i < j`.
pub fn verify_cc_family(f: &OperatorFamily, tol: f64) -> bool {
    let n = f.slots();
    if n < 2 {
        return false;
    }
    (1..=n).tuple_combinations().all(|(i, j)| {
        f.members[i - 1]
            .conjugate_by_swap(i, j)
            .and_then(|c| c.acts_like(&f.members[j - 1], tol))
            .unwrap_or(false)
    })
}

/// Whether `P_ij O_k P_ij = O_k` for distinct `i, j, k`.
pub fn verify_ic(f: &OperatorFamily, i: usize, j: usize, k: usize, tol: f64) -> Result<bool> {
    let n = f.slots();
    check_pair(n, i, j)?;
    check_pair(n, i, k)?;
    check_pair(n, j, k)?;
    let member = f.member(k)?;
    member.conjugate_by_swap(i, j)?.acts_like(member, tol)
}

fn symmetric_tail<R: Rng + ?Sized>(
    head: Matrix,
    d: usize,
    slots: usize,
    rng: &mut R,
) -> Result<Vec<Term>> {
    let tail: Vec<Matrix> = (1..slots).map(|_| random_hermitian(d, rng)).collect();
    let coef = C64::new(rng.sample::<f64, _>(StandardNormal), 0.0);
    Ok((0..tail.len())
        .permutations(tail.len())
        .map(|arrangement| {
            let mut factors = alloc::vec![head.clone()];
            factors.extend(arrangement.iter().map(|&k| tail[k].clone()));
            Term { coef, factors }
        })
        .collect())
}

/// A random Hermitian CC family: the slot-1 member is a real combination of
/// `B ⊗ (C_2 ⊗ ... ⊗ C_n symmetrized over slots 2..n)` terms.
pub fn random_cc_family<R: Rng + ?Sized>(
    slots: usize,
    d: usize,
    terms: usize,
    rng: &mut R,
) -> Result<OperatorFamily> {
    if slots < 2 {
        return Err(Error::Domain("a family needs at least two slots"));
    }
    let mut all = Vec::new();
    for _ in 0..terms.max(1) {
        let head = random_hermitian(d, rng);
        all.extend(symmetric_tail(head, d, slots, rng)?);
    }
    OperatorFamily::from_generator(OperatorSum::from_terms(d, slots, all)?)
}

/// A random family obeying both CC and `[P_ij, O] = 0`: every member is the
/// same fully symmetrized operator.
pub fn random_ip_family<R: Rng + ?Sized>(slots: usize, d: usize, rng: &mut R) -> Result<OperatorFamily> {
    let factors: Vec<Matrix> = (0..slots).map(|_| random_hermitian(d, rng)).collect();
    let base = OperatorSum::product(factors)?;
    let mut sym = OperatorSum::from_terms(d, slots, Vec::new())?;
    for arrangement in (1..=slots).permutations(slots) {
        let sigma = SlotPermutation::from_images(&arrangement)?;
        sym = sym.add(&base.conjugate_by(&sigma)?)?;
    }
    let q = SingleParticleObservable::random(d, rng)?;
    for s in 1..=slots {
        sym = sym.add(&embed_single(&q, s, slots)?)?;
    }
    OperatorFamily::uniform(sym)
}

/// An operator family together with the spectral projectors of every member.
///
/// Atoms of a query refer to a `SpectralFamily`; transposing a query swaps
/// which member's projector an atom uses.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFamily {
    name: String,
    family: OperatorFamily,
    // spectra[s-1] = eigenvalue clusters of member s
    spectra: Vec<Vec<(f64, Projector)>>,
}

impl SpectralFamily {
    /// The slot-embedded family `{Q_i}`; projectors stay rank-structured.
    pub fn embedded(name: &str, q: &SingleParticleObservable, slots: usize) -> Result<Self> {
        let family = OperatorFamily::embedded(q, slots)?;
        let spectra = (1..=slots)
            .map(|s| {
                q.spectrum()
                    .iter()
                    .map(|e| {
                        Ok((
                            e.value,
                            Projector::Structured(OperatorSum::embed(&e.projector, s, slots)?),
                        ))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(SpectralFamily {
            name: name.into(),
            family,
            spectra,
        })
    }

    /// Decomposes the slot-1 member and transports its projectors to the
    /// other slots by conjugation. The family must satisfy CC.
    pub fn new(name: &str, family: OperatorFamily, tol: f64) -> Result<Self> {
        if !verify_cc_family(&family, tol) {
            return Err(Error::Contract("family does not satisfy the conjugacy condition"));
        }
        let first = family.member(1)?.spectral_projectors(tolerance::EIGEN_CLUSTER)?;
        let mut spectra = alloc::vec![first.clone()];
        for s in 2..=family.slots() {
            spectra.push(
                first
                    .iter()
                    .map(|(v, p)| Ok((*v, p.conjugate_by_swap(1, s)?)))
                    .collect::<Result<_>>()?,
            );
        }
        Ok(SpectralFamily {
            name: name.into(),
            family,
            spectra,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &OperatorFamily {
        &self.family
    }

    pub fn slots(&self) -> usize {
        self.family.slots()
    }

    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    /// Eigenvalue clusters of the member at `slot`, ascending.
    pub fn eigenvalues(&self, slot: usize) -> Result<Vec<f64>> {
        check_slot(self.slots(), slot)?;
        Ok(self.spectra[slot - 1].iter().map(|(v, _)| *v).collect())
    }

    /// Index of the eigenvalue cluster of `slot`'s member containing `value`.
    pub fn cluster_index(&self, slot: usize, value: f64, tol: f64) -> Result<usize> {
        check_slot(self.slots(), slot)?;
        self.spectra[slot - 1]
            .iter()
            .position(|(v, _)| (v - value).abs() <= tol)
            .ok_or(Error::Domain("value is not an eigenvalue of the family member"))
    }

    pub fn projector(&self, slot: usize, index: usize) -> Result<&Projector> {
        check_slot(self.slots(), slot)?;
        self.spectra[slot - 1]
            .get(index)
            .map(|(_, p)| p)
            .ok_or(Error::Domain("eigenvalue index out of range"))
    }

    pub fn value(&self, slot: usize, index: usize) -> Result<f64> {
        check_slot(self.slots(), slot)?;
        self.spectra[slot - 1]
            .get(index)
            .map(|(v, _)| *v)
            .ok_or(Error::Domain("eigenvalue index out of range"))
    }
}
