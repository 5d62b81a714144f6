//! Atom specifications such as `Q1=1,X2=-1` or `R[3]2=#1`.
//!
//! An atom is `NAME SLOT '=' VALUE`. Names:
//! - `Q`: `diag(1, 2, ..., d)`;
//! - `X`, `Y`, `Z`: Pauli matrices (only for `d = 2`);
//! - `R[k]`: the `k`-th seeded random observable of the witness-search pool.
//!
//! `VALUE` is an eigenvalue, or `#k` for the `k`-th smallest (1-based).

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use quarticles_core::discern::default_pool;
use quarticles_core::observable::{SingleParticleObservable, SpectralFamily};
use quarticles_core::probability::Atom;
use quarticles_core::tolerance;
use quarticles_core::C64;

/// Observable families available to atom specs for one `(d, n, seed)`.
pub struct Registry {
    d: usize,
    n: usize,
    seed: u64,
    families: BTreeMap<String, Arc<SpectralFamily>>,
    pool: Option<Vec<Arc<SpectralFamily>>>,
}

fn pauli(name: &str) -> Option<DMatrix<C64>> {
    let (o, i) = (C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    let one = C64::new(1.0, 0.0);
    let entries = match name {
        "X" => [o, one, one, o],
        "Y" => [o, -i, i, o],
        "Z" => [one, o, o, -one],
        _ => return None,
    };
    Some(DMatrix::from_row_slice(2, 2, &entries))
}

impl Registry {
    pub fn new(d: usize, n: usize, seed: u64) -> Self {
        Registry {
            d,
            n,
            seed,
            families: BTreeMap::new(),
            pool: None,
        }
    }

    /// The witness-search pool: `Q` followed by `R[0]`, `R[1]`, ...
    pub fn pool(&mut self) -> Result<&[Arc<SpectralFamily>], String> {
        if self.pool.is_none() {
            self.pool = Some(default_pool(self.d, self.n, self.seed).map_err(|e| e.to_string())?);
        }
        Ok(self.pool.as_deref().expect("just built"))
    }

    pub fn family(&mut self, name: &str) -> Result<Arc<SpectralFamily>, String> {
        if let Some(f) = self.families.get(name) {
            return Ok(f.clone());
        }
        let f = if name == "Q" {
            let q = SingleParticleObservable::standard(self.d).map_err(|e| e.to_string())?;
            Arc::new(SpectralFamily::embedded("Q", &q, self.n).map_err(|e| e.to_string())?)
        } else if let Some(m) = pauli(name) {
            if self.d != 2 {
                return Err(format!("{name} is only defined for d = 2"));
            }
            let q = SingleParticleObservable::new(m).map_err(|e| e.to_string())?;
            Arc::new(SpectralFamily::embedded(name, &q, self.n).map_err(|e| e.to_string())?)
        } else if name.starts_with("R[") {
            self.pool()?
                .iter()
                .find(|f| f.name() == name)
                .cloned()
                .ok_or_else(|| format!("unknown pool observable {name}"))?
        } else {
            return Err(format!("unknown observable {name:?}"));
        };
        self.families.insert(name.to_string(), f.clone());
        Ok(f)
    }
}

fn parse_one(spec: &str, reg: &mut Registry) -> Result<Atom, String> {
    let (lhs, value) = spec
        .split_once('=')
        .ok_or_else(|| format!("atom {spec:?} needs '='"))?;
    let lhs = lhs.trim();
    let split = if lhs.starts_with("R[") {
        lhs.find(']').map(|p| p + 1).ok_or_else(|| format!("unclosed '[' in {spec:?}"))?
    } else {
        lhs.find(|c: char| c.is_ascii_digit()).unwrap_or(lhs.len())
    };
    let (name, slot) = lhs.split_at(split);
    let slot: usize = slot
        .trim()
        .parse()
        .map_err(|_| format!("atom {spec:?} needs a slot number after the observable"))?;
    let family = reg.family(name.trim())?;
    let value = value.trim();
    if let Some(k) = value.strip_prefix('#') {
        let k: usize = k.parse().map_err(|_| format!("bad eigenvalue index in {spec:?}"))?;
        if k == 0 {
            return Err(format!("eigenvalue indices start at 1 in {spec:?}"));
        }
        Atom::by_index(family, slot, k - 1).map_err(|e| format!("{spec}: {e}"))
    } else {
        let v: f64 = value.parse().map_err(|_| format!("bad eigenvalue in {spec:?}"))?;
        let family_ref = family.clone();
        Atom::new(family, slot, v).map_err(|e| {
            let spectrum = family_ref
                .eigenvalues(1)
                .map(|v| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", "))
                .unwrap_or_default();
            format!("{spec}: {e} (eigenvalues: {spectrum}; tolerance {})", tolerance::EIGEN_CLUSTER)
        })
    }
}

/// Parses a comma-separated list of atoms. Commas inside `[...]` are not separators.
pub fn parse_atoms(spec: &str, reg: &mut Registry) -> Result<Vec<Atom>, String> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (p, c) in spec.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&spec[start..p]);
                start = p + 1;
            }
            _ => {}
        }
    }
    parts.push(&spec[start..]);
    parts
        .into_iter()
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_one(p, reg))
        .collect()
}
