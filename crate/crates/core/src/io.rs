//! Field files: a CSV with header `coordinates..., value, weight` next to a
//! JSON sidecar `{dim, time, geometry, frame: {M, gamma, sigma_M}}`.
//! Trajectories are directories of such pairs plus `steps.csv`.
//! Perturbations on a ball grid use `z..., w, dw...` with the grid id as sidecar.

use crate::error::{Error, Result};
use crate::simulator::{StepRecord, Trajectory};
use crate::spectrum::{GridId, WeightedGrid};
use crate::transform::{DropletField, Geometry, PerturbationField, SelfSimilarFrame};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameInfo {
    #[serde(rename = "M")]
    pub mass: f64,
    pub gamma: f64,
    #[serde(rename = "sigma_M")]
    pub sigma_m: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub dim: usize,
    pub time: f64,
    pub geometry: Geometry,
    pub frame: Option<FrameInfo>,
}

/// `field.csv` → `field.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

fn coord_names(dim: usize, geometry: Geometry) -> Vec<String> {
    match geometry {
        Geometry::Line => vec!["x".into()],
        Geometry::Radial => vec!["r".into()],
        Geometry::Scattered => (1..=dim).map(|i| format!("x{i}")).collect(),
    }
}

pub fn write_field(path: &Path, v: &DropletField) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = coord_names(v.dim, v.geometry);
    header.push("value".into());
    header.push("weight".into());
    w.write_record(&header)?;
    for i in 0..v.len() {
        let mut row: Vec<String> = v.coords[i].iter().map(|c| format!("{c:e}")).collect();
        row.push(format!("{:e}", v.values[i]));
        row.push(format!("{:e}", v.weights[i]));
        w.write_record(&row)?;
    }
    w.flush()?;
    let mass = v.mass();
    let frame = SelfSimilarFrame::new(v.dim, mass).ok().map(|f| FrameInfo {
        mass,
        gamma: f.gamma,
        sigma_m: f.sigma_m,
    });
    let side = Sidecar {
        dim: v.dim,
        time: v.time,
        geometry: v.geometry,
        frame,
    };
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&side)? + "\n")?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<DropletField> {
    let side: Sidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    let ncoord = coord_names(side.dim, side.geometry).len();
    let has_weight = header.len() == ncoord + 2;
    if header.len() != ncoord + 1 && !has_weight {
        return Err(Error::Invalid(format!(
            "{}: expected {} coordinate columns and a value column",
            path.display(),
            ncoord
        )));
    }
    let mut coords = Vec::new();
    let mut values = Vec::new();
    let mut weights = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let nums: Vec<f64> = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        coords.push(nums[..ncoord].to_vec());
        values.push(nums[ncoord]);
        if has_weight {
            weights.push(nums[ncoord + 1]);
        }
    }
    if !has_weight {
        weights = cell_weights(side.dim, side.geometry, &coords)?;
    }
    DropletField::new(side.dim, side.geometry, coords, values, weights, side.time)
}

/// Widths (or shell volumes) of the cells centered at uniformly spaced samples.
fn cell_weights(dim: usize, geometry: Geometry, coords: &[Vec<f64>]) -> Result<Vec<f64>> {
    if geometry == Geometry::Scattered || coords.len() < 2 {
        return Err(Error::Invalid("weights are required for scattered or single-point fields".into()));
    }
    let h = coords[1][0] - coords[0][0];
    Ok(coords
        .iter()
        .map(|c| match geometry {
            Geometry::Radial => crate::transform::shell_volume(dim, c[0] - 0.5 * h, c[0] + 0.5 * h),
            _ => h,
        })
        .collect())
}

/// Writes `snapshot_NNNN.{csv,json}` per output time and `steps.csv`.
pub fn write_trajectory(dir: &Path, traj: &Trajectory) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (i, snap) in traj.snapshots.iter().enumerate() {
        write_field(&dir.join(format!("snapshot_{i:04}.csv")), snap)?;
    }
    let mut w = csv::Writer::from_path(dir.join("steps.csv"))?;
    for s in &traj.steps {
        w.serialize(s)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory(dir: &Path) -> Result<Trajectory> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|e| e == "csv")
                && p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with("snapshot_"))
        })
        .collect();
    paths.sort();
    let snapshots = paths.iter().map(|p| read_field(p)).collect::<Result<Vec<_>>>()?;
    let steps_path = dir.join("steps.csv");
    let steps = if steps_path.exists() {
        csv::Reader::from_path(steps_path)?
            .deserialize::<StepRecord>()
            .collect::<std::result::Result<_, _>>()?
    } else {
        Vec::new()
    };
    Ok(Trajectory {
        times: snapshots.iter().map(|s| s.time).collect(),
        snapshots,
        steps,
    })
}

pub fn write_perturbation(path: &Path, w: &PerturbationField) -> Result<()> {
    let dim = w.dim();
    let mut out = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (1..=dim).map(|i| format!("z{i}")).collect();
    header.push("w".into());
    header.extend((1..=dim).map(|i| format!("dw{i}")));
    out.write_record(&header)?;
    for (i, z) in w.grid.nodes().iter().enumerate() {
        let row: Vec<String> = z
            .iter()
            .chain(std::iter::once(&w.values[i]))
            .chain(&w.gradients[i])
            .map(|a| format!("{a:e}"))
            .collect();
        out.write_record(&row)?;
    }
    out.flush()?;
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&w.grid.id())? + "\n")?;
    Ok(())
}

/// Reads a perturbation and rebuilds its ball grid; the stored nodes must
/// coincide with the rebuilt ones.
pub fn read_perturbation(path: &Path) -> Result<PerturbationField> {
    let id: GridId = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
    let grid = WeightedGrid::new(id.dim, id.sigma, id.degree)?;
    let dim = id.dim;
    let mut values = Vec::with_capacity(grid.len());
    let mut gradients = Vec::with_capacity(grid.len());
    let mut r = csv::Reader::from_path(path)?;
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let nums: Vec<f64> = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        if nums.len() != 2 * dim + 1 {
            return Err(Error::Invalid(format!("{}: expected {} columns", path.display(), 2 * dim + 1)));
        }
        let node = grid
            .nodes()
            .get(i)
            .ok_or_else(|| Error::GridMismatch(format!("{} has more rows than the grid", path.display())))?;
        if node.iter().zip(&nums).any(|(a, b)| (a - b).abs() > 1e-12) {
            return Err(Error::GridMismatch(format!("{}: row {i} is not at the grid node", path.display())));
        }
        values.push(nums[dim]);
        gradients.push(nums[dim + 1..].to_vec());
    }
    if values.len() != grid.len() {
        return Err(Error::GridMismatch(format!("{} has fewer rows than the grid", path.display())));
    }
    Ok(PerturbationField {
        grid,
        values,
        gradients,
        preimages: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::v_star;

    #[test]
    fn field_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for (dim, geom) in [(1, Geometry::Line), (3, Geometry::Radial)] {
            let v = DropletField::from_function(dim, geom, 1.5, 48, 0.25, v_star).unwrap();
            let p = dir.path().join(format!("f{dim}.csv"));
            write_field(&p, &v).unwrap();
            let back = read_field(&p).unwrap();
            assert_eq!(back, v);
            let side: Sidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(&p)).unwrap()).unwrap();
            assert!((side.frame.unwrap().mass - v.mass()).abs() < 1e-15);
        }
    }

    #[test]
    fn perturbation_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let grid = WeightedGrid::new(2, 1, 8).unwrap();
        let p = crate::linops::Polynomial::coordinate(2, 0).scale(0.01);
        let w = PerturbationField::from_polynomial(&grid, &p);
        let path = dir.path().join("w.csv");
        write_perturbation(&path, &w).unwrap();
        let back = read_perturbation(&path).unwrap();
        assert_eq!(back.values, w.values);
        assert_eq!(back.gradients, w.gradients);
    }

    #[test]
    fn weights_are_reconstructed_when_absent() {
        let dir = tempfile::tempdir().unwrap();
        let v = DropletField::from_function(2, Geometry::Radial, 1.5, 30, 0.0, v_star).unwrap();
        let p = dir.path().join("g.csv");
        write_field(&p, &v).unwrap();
        let text: String = fs::read_to_string(&p)
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string() + "\n")
            .collect();
        fs::write(&p, text).unwrap();
        let back = read_field(&p).unwrap();
        for (a, b) in back.weights.iter().zip(&v.weights) {
            assert!((a - b).abs() < 1e-12 * b.abs().max(1e-3));
        }
    }
}
