use super::frame::sphere_area;
use crate::error::{Error, Result};
use crate::linops::Polynomial;
use crate::spectrum::WeightedGrid;
use serde::{Deserialize, Serialize};

/// Layout of the sample points of a [`DropletField`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    /// N = 1, `coords[i] = [x_i]`, increasing.
    Line,
    /// Radially symmetric profile in `R^N`, `coords[i] = [r_i]`, increasing.
    Radial,
    /// Arbitrary points in `R^N` (e.g. the image of a ball grid).
    Scattered,
}

/// A sampled nonnegative film height with quadrature weights for `∫ · dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct DropletField {
    pub dim: usize,
    pub geometry: Geometry,
    pub coords: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    pub time: f64,
}

/// Cell volume of the radial shell `[a, b]` in `R^N`.
pub fn shell_volume(dim: usize, a: f64, b: f64) -> f64 {
    sphere_area(dim) * (b.powi(dim as i32) - a.max(0.0).powi(dim as i32)) / dim as f64
}

impl DropletField {
    /// Cell-centered samples of `f` on `[−half_width, half_width]` (line) or
    /// `[0, half_width]` (radial, `f` evaluated on the first axis).
    pub fn from_function(
        dim: usize,
        geometry: Geometry,
        half_width: f64,
        cells: usize,
        time: f64,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        let mut coords = Vec::with_capacity(cells);
        let mut weights = Vec::with_capacity(cells);
        let mut values = Vec::with_capacity(cells);
        match geometry {
            Geometry::Line => {
                if dim != 1 {
                    return Err(Error::Invalid("line geometry is one-dimensional".into()));
                }
                let h = 2.0 * half_width / cells as f64;
                for i in 0..cells {
                    let x = -half_width + (i as f64 + 0.5) * h;
                    coords.push(vec![x]);
                    weights.push(h);
                    values.push(f(&[x]));
                }
            }
            Geometry::Radial => {
                let h = half_width / cells as f64;
                for i in 0..cells {
                    let r = (i as f64 + 0.5) * h;
                    let mut p = vec![0.0; dim];
                    p[0] = r;
                    coords.push(vec![r]);
                    weights.push(shell_volume(dim, r - 0.5 * h, r + 0.5 * h));
                    values.push(f(&p));
                }
            }
            Geometry::Scattered => {
                return Err(Error::Invalid("scattered fields are built from explicit points".into()))
            }
        }
        Self::new(dim, geometry, coords, values, weights, time)
    }

    pub fn new(
        dim: usize,
        geometry: Geometry,
        coords: Vec<Vec<f64>>,
        values: Vec<f64>,
        weights: Vec<f64>,
        time: f64,
    ) -> Result<Self> {
        if coords.len() != values.len() || weights.len() != values.len() {
            return Err(Error::Invalid("coordinates, values and weights differ in length".into()));
        }
        let cdim = if geometry == Geometry::Scattered { dim } else { 1 };
        if coords.iter().any(|c| c.len() != cdim) {
            return Err(Error::Invalid(format!("coordinates must have {cdim} components")));
        }
        if geometry != Geometry::Scattered && coords.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(Error::Invalid("profile coordinates must be increasing".into()));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::PositivityLost(*v));
        }
        Ok(Self {
            dim,
            geometry,
            coords,
            values,
            weights,
            time,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The sample point in `R^N` (radial samples placed on the first axis).
    pub fn point(&self, i: usize) -> Vec<f64> {
        match self.geometry {
            Geometry::Radial => {
                let mut p = vec![0.0; self.dim];
                p[0] = self.coords[i][0];
                p
            }
            _ => self.coords[i].clone(),
        }
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// `∫ x v dx` (zero for radial profiles).
    pub fn center_of_mass(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        if self.geometry == Geometry::Radial {
            return out;
        }
        for ((c, v), w) in self.coords.iter().zip(&self.values).zip(&self.weights) {
            for (o, x) in out.iter_mut().zip(c) {
                *o += x * v * w;
            }
        }
        out
    }

    pub fn support_mask(&self) -> Vec<bool> {
        self.values.iter().map(|&v| v > 0.0).collect()
    }

    /// Index range of the support; errors if the support of a line or
    /// radial profile is not a single interval.
    pub fn support_range(&self) -> Result<std::ops::Range<usize>> {
        let mask = self.support_mask();
        let first = mask.iter().position(|&m| m);
        let last = mask.iter().rposition(|&m| m);
        match (first, last) {
            (Some(a), Some(b)) => {
                if self.geometry != Geometry::Scattered && mask[a..=b].iter().any(|m| !m) {
                    return Err(Error::Invalid("support is not connected".into()));
                }
                Ok(a..b + 1)
            }
            _ => Err(Error::Invalid("empty support".into())),
        }
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// One-dimensional profile `(x, v)` along a line through the origin;
    /// radial profiles are mirrored.
    pub fn line_profile(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        match self.geometry {
            Geometry::Line => Ok((self.coords.iter().map(|c| c[0]).collect(), self.values.clone())),
            Geometry::Radial => {
                let mut x: Vec<f64> = self.coords.iter().rev().map(|c| -c[0]).collect();
                let mut v: Vec<f64> = self.values.iter().rev().copied().collect();
                let start = usize::from(self.coords.first().is_some_and(|c| c[0] == 0.0));
                x.extend(self.coords[start..].iter().map(|c| c[0]));
                v.extend(&self.values[start..]);
                Ok((x, v))
            }
            Geometry::Scattered => Err(Error::Unsupported(
                "profile operations need line or radial samples".into(),
            )),
        }
    }
}

/// A perturbation `w` sampled on a ball grid together with `∇w`.
#[derive(Clone, Debug)]
pub struct PerturbationField {
    pub grid: WeightedGrid,
    pub values: Vec<f64>,
    pub gradients: Vec<Vec<f64>>,
    /// Physical points `x(z) = (1 + w(z)) z`, when produced by inversion.
    pub preimages: Option<Vec<Vec<f64>>>,
}

impl PerturbationField {
    pub fn from_polynomial(grid: &WeightedGrid, w: &Polynomial) -> Self {
        let s = grid.sample(w);
        Self {
            grid: grid.clone(),
            values: s.values,
            gradients: s.gradients.unwrap(),
            preimages: None,
        }
    }

    pub fn zero(grid: &WeightedGrid) -> Self {
        Self::from_polynomial(grid, &Polynomial::zero(grid.dim()))
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn grad_sup(&self) -> f64 {
        self.gradients
            .iter()
            .map(|g| g.iter().map(|a| a * a).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// `1 + w + z·∇w` at each node.
    pub fn radial_stretch(&self) -> Vec<f64> {
        self.grid
            .nodes()
            .iter()
            .zip(&self.values)
            .zip(&self.gradients)
            .map(|((z, w), g)| 1.0 + w + z.iter().zip(g).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }

    /// Jacobian `(1 + w + z·∇w)(1 + w)^{N−1}` of `z ↦ (1 + w(z)) z`.
    pub fn jacobian(&self) -> Vec<f64> {
        let n = self.dim() as i32;
        self.radial_stretch()
            .iter()
            .zip(&self.values)
            .map(|(s, w)| s * (1.0 + w).powi(n - 1))
            .collect()
    }

    /// Errors unless `1 + w + z·∇w > 0` everywhere.
    pub fn check_jacobian(&self) -> Result<()> {
        match self.radial_stretch().into_iter().find(|s| !(*s > 0.0)) {
            Some(s) => Err(Error::DegenerateJacobian(s)),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::frame::{stationary_mass, v_star};

    #[test]
    fn midpoint_mass_of_stationary_profile() {
        let f = DropletField::from_function(1, Geometry::Line, 1.5, 3000, 0.0, v_star).unwrap();
        assert!((f.mass() - stationary_mass(1)).abs() < 1e-6);
        let r = DropletField::from_function(3, Geometry::Radial, 1.5, 3000, 0.0, v_star).unwrap();
        assert!((r.mass() - stationary_mass(3)).abs() < 1e-6);
        assert!(f.support_range().is_ok());
    }

    #[test]
    fn rejects_negative_and_disconnected() {
        let bad = DropletField::new(1, Geometry::Line, vec![vec![0.0], vec![1.0]], vec![-1.0, 0.0], vec![1.0; 2], 0.0);
        assert!(matches!(bad, Err(Error::PositivityLost(_))));
        let gap = DropletField::new(
            1,
            Geometry::Line,
            (0..3).map(|i| vec![i as f64]).collect(),
            vec![1.0, 0.0, 1.0],
            vec![1.0; 3],
            0.0,
        )
        .unwrap();
        assert!(gap.support_range().is_err());
    }

    #[test]
    fn radial_mirror() {
        let r = DropletField::from_function(2, Geometry::Radial, 1.0, 4, 0.0, |p| p[0]).unwrap();
        let (x, v) = r.line_profile().unwrap();
        assert_eq!(x.len(), 8);
        assert_eq!(x[0], -0.875);
        assert_eq!(v[7], 0.875);
    }
}
