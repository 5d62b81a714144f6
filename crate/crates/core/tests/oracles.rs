//! Independent enumeration oracles for the catalog states.
//!
//! The oracle below rebuilds every state from scratch with plain hash maps
//! and its own inversion-count parity, then compares against both the exact
//! and the floating constructions. The frozen tables were produced by a
//! separate script and are kept here verbatim.

use std::collections::HashMap;

use itertools::Itertools;
use num_rational::Ratio;
use quarticles_core::catalog::{
    exact_psi_a, exact_psi_d, exact_psi_s, fully_antisymmetric, fully_symmetric, psi_a, psi_d, psi_s,
};
use quarticles_core::discern::{exchange_character, ExchangeCharacter};
use quarticles_core::observable::{SingleParticleObservable, SpectralFamily};
use quarticles_core::probability::{joint_value, Atom};
use quarticles_core::{BasisTuple, MultiKet};
use std::sync::Arc;

type Table = HashMap<Vec<usize>, i64>;

fn parity(p: &[usize]) -> i64 {
    let inversions = (0..p.len())
        .flat_map(|a| (a + 1..p.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| p[a] > p[b])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Unnormalized sum over all rearrangements of the 0-based `slots`.
fn rearrange(ket: &Table, slots: &[usize], signed: bool) -> Table {
    let mut out = Table::new();
    for (t, &c) in ket {
        for p in (0..slots.len()).permutations(slots.len()) {
            let s = if signed { parity(&p) } else { 1 };
            let mut moved = t.clone();
            for (k, &dst) in p.iter().enumerate() {
                moved[slots[dst]] = t[slots[k]];
            }
            *out.entry(moved).or_insert(0) += s * c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn base(m: usize) -> Table {
    Table::from([((0..m).collect(), 1)])
}

fn oracle_psi_s(m: usize) -> Table {
    rearrange(&rearrange(&base(m), &[0, 1], true), &(1..m).collect::<Vec<_>>(), false)
}

fn oracle_psi_a(m: usize) -> Table {
    rearrange(&rearrange(&base(m), &[0, 1], false), &(1..m).collect::<Vec<_>>(), true)
}

fn oracle_psi_d(m: usize) -> Table {
    let mut total = Table::new();
    for i in 0..m {
        let pair = rearrange(&base(m), &[i, (i + 1) % m], true);
        let rest: Vec<usize> = (0..m).filter(|&s| s != i).collect();
        for (t, c) in rearrange(&pair, &rest, false) {
            *total.entry(t).or_insert(0) += c;
        }
    }
    total.retain(|_, c| *c != 0);
    total
}

fn norm_sqr(t: &Table) -> i128 {
    t.values().map(|&c| (c as i128) * (c as i128)).sum()
}

fn probability(t: &Table, slot: usize, label: usize) -> Ratio<i128> {
    let hit: i128 = t
        .iter()
        .filter(|(k, _)| k[slot - 1] == label)
        .map(|(_, &c)| (c as i128) * (c as i128))
        .sum();
    Ratio::new(hit, norm_sqr(t))
}

/// Ray comparison of an integer table against a float ket, amplitudewise after normalization.
fn max_amplitude_error(t: &Table, k: &MultiKet) -> f64 {
    let scale = (norm_sqr(t) as f64).sqrt();
    let (pivot, &c) = t.iter().max_by_key(|(k, &c)| (c.abs(), (*k).clone())).unwrap();
    let tuple = BasisTuple::new(pivot.clone(), k.dim()).unwrap();
    let phase = k.amplitude(&tuple) / (c as f64 / scale);
    let mut worst: f64 = 0.0;
    for (tuple, a) in k.iter() {
        let expected = t.get(tuple.labels()).copied().unwrap_or(0) as f64 / scale;
        worst = worst.max((a - phase * expected).norm());
    }
    for (labels, &c) in t {
        let tuple = BasisTuple::new(labels.clone(), k.dim()).unwrap();
        worst = worst.max((k.amplitude(&tuple) - phase * (c as f64 / scale)).norm());
    }
    worst
}

fn r(n: i128, d: i128) -> Ratio<i128> {
    Ratio::new(n, d)
}

/// `(m, term count, norm², pr(Q_s = q_1) for s = 1..=m)` from the reference script.
fn frozen_psi_d() -> Vec<(usize, usize, i128, Vec<Ratio<i128>>)> {
    vec![
        (3, 2, 18, vec![r(1, 2), r(0, 1), r(1, 2)]),
        (4, 22, 64, vec![r(3, 8), r(1, 8), r(1, 8), r(3, 8)]),
        (5, 82, 300, vec![r(3, 10), r(2, 15), r(2, 15), r(2, 15), r(3, 10)]),
        (6, 526, 1728, vec![r(1, 4), r(1, 8), r(1, 8), r(1, 8), r(1, 8), r(1, 4)]),
    ]
}

#[test]
fn oracle_reproduces_the_frozen_all_discernible_table() {
    for (m, terms, n2, row) in frozen_psi_d() {
        let t = oracle_psi_d(m);
        assert_eq!(t.len(), terms, "m = {m}");
        assert_eq!(norm_sqr(&t), n2, "m = {m}");
        for (s, expected) in row.iter().enumerate() {
            assert_eq!(probability(&t, s + 1, 0), *expected, "m = {m}, slot {}", s + 1);
        }
    }
}

#[test]
fn exact_all_discernible_state_matches_the_frozen_table() {
    for (m, terms, n2, row) in frozen_psi_d() {
        let k = exact_psi_d(m, m, m).unwrap();
        assert_eq!(k.term_count(), terms);
        assert_eq!(k.norm_sqr(), n2);
        for (s, expected) in row.iter().enumerate() {
            assert_eq!(k.slot_label_probability(s + 1, 0).unwrap(), *expected);
        }
    }
}

#[test]
fn exact_constructions_agree_with_the_oracle_term_by_term() {
    for m in 3..=6 {
        let cases = [
            (exact_psi_s(m, m, m).unwrap(), oracle_psi_s(m)),
            (exact_psi_a(m, m, m).unwrap(), oracle_psi_a(m)),
            (exact_psi_d(m, m, m).unwrap(), oracle_psi_d(m)),
        ];
        for (exact, oracle) in cases {
            let table: Table = exact.table().into_iter().collect();
            assert_eq!(table, oracle, "m = {m}");
        }
    }
}

#[test]
fn float_constructions_agree_with_the_oracle_amplitudewise() {
    for m in 3..=6 {
        let cases = [
            (psi_s(m, m, m).unwrap(), oracle_psi_s(m)),
            (psi_a(m, m, m).unwrap(), oracle_psi_a(m)),
            (psi_d(m, m, m).unwrap(), oracle_psi_d(m)),
        ];
        for (k, oracle) in cases {
            assert!(max_amplitude_error(&oracle, &k) < 1e-12, "m = {m}");
        }
    }
}

#[test]
fn mixed_states_have_the_half_and_spread_values() {
    for m in 3..=6 {
        let q = Arc::new(SpectralFamily::embedded("Q", &SingleParticleObservable::standard(m).unwrap(), m).unwrap());
        for oracle in [oracle_psi_s(m), oracle_psi_a(m)] {
            assert_eq!(probability(&oracle, 1, 0), r(1, 2));
            for s in 2..=m {
                assert_eq!(probability(&oracle, s, 0), r(1, 2 * (m as i128 - 1)));
            }
        }
        let k = psi_s(m, m, m).unwrap();
        for s in 1..=m {
            let v = joint_value(&k, &[Atom::by_index(q.clone(), s, 0).unwrap()]).unwrap();
            let expected = if s == 1 { 0.5 } else { 0.5 / (m - 1) as f64 };
            assert!((v.re - expected).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
    }
}

#[test]
fn exchange_characters_of_catalog_states() {
    let sym = fully_symmetric(4, 4, 4).unwrap();
    let anti = fully_antisymmetric(4, 4, 4).unwrap();
    let mixed = psi_s(4, 4, 4).unwrap();
    let tol = 1e-10;
    for (i, j) in (1..=4).tuple_combinations() {
        assert_eq!(exchange_character(&sym, i, j, tol).unwrap(), ExchangeCharacter::Symmetric);
        assert_eq!(exchange_character(&anti, i, j, tol).unwrap(), ExchangeCharacter::Antisymmetric);
        let expected = if i == 1 { ExchangeCharacter::Neither } else { ExchangeCharacter::Symmetric };
        assert_eq!(exchange_character(&mixed, i, j, tol).unwrap(), expected);
    }
}
