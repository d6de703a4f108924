use super::{lambda_of, mu_integer, multiplicity};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeEntry {
    pub l: u32,
    pub n: u32,
    pub k: u32,
    pub lambda: i64,
}

/// One distinct eigenvalue `μ_K` with every `(l, n, k)` attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub mu: i64,
    pub multiplicity: u64,
    pub modes: Vec<ModeEntry>,
}

impl SpectrumEntry {
    /// Distinct `(l, k)` pairs of the entry.
    pub fn lk_pairs(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self.modes.iter().map(|m| (m.l, m.k)).collect();
        out.dedup();
        out
    }
}

/// Eigenvalues of `L² + N L` in strictly increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub dim: usize,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumTable {
    pub fn find(&self, mu: i64) -> Option<&SpectrumEntry> {
        self.entries
            .binary_search_by_key(&mu, |e| e.mu)
            .ok()
            .map(|i| &self.entries[i])
    }

    /// The entry containing the pair `(l, k)`.
    pub fn entry_of(&self, l: u32, k: u32) -> Option<&SpectrumEntry> {
        self.entries
            .iter()
            .find(|e| e.modes.iter().any(|m| m.l == l && m.k == k))
    }

    /// Largest angular degree present.
    pub fn max_l(&self) -> u32 {
        self.entries
            .iter()
            .flat_map(|e| e.modes.iter().map(|m| m.l))
            .max()
            .unwrap_or(0)
    }
}

/// All `(l, k)` with `μ_{l,k} ≤ mu_max`, grouped by exactly equal `μ`.
pub fn spectrum_table(dim: usize, mu_max: f64) -> Result<SpectrumTable> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if !(mu_max >= 0.0) {
        return Err(Error::Domain(format!("mu_max must be nonnegative, got {mu_max}")));
    }
    let max_l = if dim == 1 { 1 } else { u32::MAX };
    // μ is increasing in both l and k
    let mut groups: BTreeMap<i64, Vec<(u32, u32)>> = BTreeMap::new();
    let mut l = 0;
    while l <= max_l && mu_integer(l, 0, dim)? as f64 <= mu_max {
        let mut k = 0;
        while mu_integer(l, k, dim)? as f64 <= mu_max {
            groups.entry(mu_integer(l, k, dim)?).or_default().push((l, k));
            k += 1;
        }
        l += 1;
    }
    let mut entries = Vec::with_capacity(groups.len());
    for (mu, pairs) in groups {
        let mut modes = Vec::new();
        let mut total = 0;
        for (l, k) in pairs {
            let count = multiplicity(l, dim)?;
            total += count;
            let lambda = lambda_of(l, k, dim)?.to_integer();
            modes.extend((1..=count as u32).map(|n| ModeEntry { l, n, k, lambda }));
        }
        entries.push(SpectrumEntry {
            mu,
            multiplicity: total,
            modes,
        });
    }
    Ok(SpectrumTable { dim, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_low_spectrum() {
        let t = spectrum_table(1, 30.0).unwrap();
        let got: Vec<(i64, Vec<(u32, u32)>)> =
            t.entries.iter().map(|e| (e.mu, e.lk_pairs())).collect();
        assert_eq!(
            got,
            vec![(0, vec![(0, 0)]), (6, vec![(1, 0)]), (30, vec![(0, 1)])]
        );
    }

    #[test]
    fn zero_cutoff() {
        let t = spectrum_table(2, 0.0).unwrap();
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.entries[0].mu, 0);
        assert_eq!(t.entries[0].multiplicity, 1);
    }

    #[test]
    fn planar_degeneracy_grouping() {
        let t = spectrum_table(2, 120.0).unwrap();
        let e = t.entry_of(1, 1).unwrap();
        assert_eq!(e.mu, 120);
        assert!(e.lk_pairs().contains(&(5, 0)));
        assert_eq!(e.multiplicity, 4);
    }

    #[test]
    fn strictly_increasing() {
        for dim in 1..=5 {
            let t = spectrum_table(dim, 2000.0).unwrap();
            assert!(t.entries.windows(2).all(|w| w[0].mu < w[1].mu));
        }
    }
}
