use super::group::FiniteGroup;
use super::molien::{molien_harmonic, MolienSeries, MolienVariant};
use crate::error::{Error, Result};
use crate::spectrum::SpectrumTable;
use serde::{Deserialize, Serialize};

/// Constraints removing modes on top of the symmetry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeConstraints {
    /// Mass fixed: removes `(l, k) = (0, 0)`.
    pub mass: bool,
    /// Center of mass at the origin: removes `(1, 0)`.
    pub centered: bool,
    /// Only angular modes: removes `(0, k)` for `k ≥ 1`.
    pub radial_free: bool,
}

impl ModeConstraints {
    fn removes(&self, l: u32, k: u32) -> bool {
        (self.mass && l == 0 && k == 0) || (self.centered && l == 1 && k == 0) || (self.radial_free && l == 0 && k > 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveMode {
    pub l: u32,
    pub k: u32,
    /// `dim(H_l^E)`, or 0 when removed by a constraint.
    pub active_dim: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveEntry {
    pub mu: i64,
    pub multiplicity: u64,
    pub active_multiplicity: u64,
    pub active: bool,
    pub modes: Vec<ActiveMode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveModes {
    pub entries: Vec<ActiveEntry>,
    /// Smallest `μ > 0` with a nonzero active multiplicity.
    pub smallest_active_mu: Option<i64>,
}

impl ActiveModes {
    /// Smallest angular degree `l ≥ 1` carrying an active mode.
    pub fn first_active_degree(&self) -> Option<u32> {
        self.entries
            .iter()
            .flat_map(|e| e.modes.iter())
            .filter(|m| m.l >= 1 && m.active_dim > 0)
            .map(|m| m.l)
            .min()
    }

    /// Whether every mode of degree `l` is inactive.
    pub fn degree_inactive(&self, l: u32) -> bool {
        self.entries
            .iter()
            .flat_map(|e| e.modes.iter())
            .filter(|m| m.l == l)
            .all(|m| m.active_dim == 0)
    }
}

/// Annotates a spectrum with the number of modes surviving the symmetry
/// (`dim(H_l^E)` per `(l, k)`) and the extra constraints.
pub fn active_modes(
    series: &MolienSeries,
    table: &SpectrumTable,
    constraints: ModeConstraints,
) -> Result<ActiveModes> {
    if series.variant != MolienVariant::Harmonic {
        return Err(Error::Invalid("active modes need the harmonic Molien series".into()));
    }
    let needed = table.max_l() as usize;
    if series.l_max() < needed {
        return Err(Error::InsufficientDegree {
            available: series.l_max(),
            needed,
        });
    }
    let mut entries = Vec::with_capacity(table.entries.len());
    for e in &table.entries {
        let modes: Vec<ActiveMode> = e
            .lk_pairs()
            .into_iter()
            .map(|(l, k)| ActiveMode {
                l,
                k,
                active_dim: if constraints.removes(l, k) { 0 } else { series.coeffs[l as usize] },
            })
            .collect();
        let active_multiplicity = modes.iter().map(|m| m.active_dim).sum();
        entries.push(ActiveEntry {
            mu: e.mu,
            multiplicity: e.multiplicity,
            active_multiplicity,
            active: active_multiplicity > 0,
            modes,
        });
    }
    let smallest_active_mu = entries.iter().find(|e| e.mu > 0 && e.active).map(|e| e.mu);
    Ok(ActiveModes {
        entries,
        smallest_active_mu,
    })
}

/// [`active_modes`] with the Molien series computed for the table's range.
pub fn active_modes_for_group(
    group: &FiniteGroup,
    table: &SpectrumTable,
    constraints: ModeConstraints,
) -> Result<ActiveModes> {
    if group.dim != table.dim {
        return Err(Error::Invalid(format!(
            "group acts on R^{} but the spectrum is for N = {}",
            group.dim, table.dim
        )));
    }
    let series = molien_harmonic(group, table.max_l() as usize)?;
    active_modes(&series, table, constraints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::spectrum_table;
    use crate::symmetry::{build_group, GroupName};

    #[test]
    fn trivial_group_leading_mode() {
        let g = build_group(&GroupName::Cyclic(1), 2).unwrap();
        let t = spectrum_table(2, 200.0).unwrap();
        let a = active_modes_for_group(&g, &t, ModeConstraints::default()).unwrap();
        assert_eq!(a.smallest_active_mu, Some(8));
    }

    #[test]
    fn triangle_symmetry() {
        let t = spectrum_table(2, 400.0).unwrap();
        let c = ModeConstraints {
            mass: true,
            centered: true,
            radial_free: true,
        };
        let d3 = build_group(&GroupName::Dihedral(3), 2).unwrap();
        let a = active_modes_for_group(&d3, &t, c).unwrap();
        assert!(a.degree_inactive(1) && a.degree_inactive(2));
        assert_eq!(a.first_active_degree(), Some(3));
    }

    #[test]
    fn insufficient_series() {
        let g = build_group(&GroupName::Cyclic(2), 2).unwrap();
        let t = spectrum_table(2, 400.0).unwrap();
        let s = molien_harmonic(&g, 2).unwrap();
        assert!(matches!(
            active_modes(&s, &t, ModeConstraints::default()),
            Err(Error::InsufficientDegree { .. })
        ));
    }
}
