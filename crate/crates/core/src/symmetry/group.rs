use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

const MATCH_TOL: f64 = 1e-10;
const ORTHO_TOL: f64 = 1e-12;
const MAX_ORDER: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupName {
    Cyclic(u32),
    Dihedral(u32),
    Tetrahedral,
    Octahedral,
    Icosahedral,
    Custom(String),
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupName::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupName::Tetrahedral => write!(f, "tetra"),
            GroupName::Octahedral => write!(f, "octa"),
            GroupName::Icosahedral => write!(f, "icosa"),
            GroupName::Custom(s) => write!(f, "custom:{s}"),
        }
    }
}

impl FromStr for GroupName {
    type Err = Error;

    /// `cyclic:n`, `dihedral:n`, `tetra`, `octa`, `icosa`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_n = |v: &str| {
            v.parse::<u32>()
                .map_err(|_| Error::Invalid(format!("bad group order in '{s}'")))
        };
        match s.split_once(':') {
            Some(("cyclic", n)) => Ok(GroupName::Cyclic(parse_n(n)?)),
            Some(("dihedral", n)) => Ok(GroupName::Dihedral(parse_n(n)?)),
            None => match s {
                "tetra" | "tetrahedral" => Ok(GroupName::Tetrahedral),
                "octa" | "octahedral" => Ok(GroupName::Octahedral),
                "icosa" | "icosahedral" => Ok(GroupName::Icosahedral),
                _ => Err(Error::Invalid(format!("unknown group '{s}'"))),
            },
            _ => Err(Error::Invalid(format!("unknown group '{s}'"))),
        }
    }
}

/// A finite subgroup of O(N), N ∈ {2, 3}, as an explicit element list.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub dim: usize,
    pub name: GroupName,
    pub elements: Vec<DMatrix<f64>>,
}

fn rotation_z(dim: usize, angle: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(dim, dim);
    let (s, c) = angle.sin_cos();
    m[(0, 0)] = c;
    m[(0, 1)] = -s;
    m[(1, 0)] = s;
    m[(1, 1)] = c;
    m
}

fn from_rows3(rows: [[f64; 3]; 3]) -> DMatrix<f64> {
    DMatrix::from_fn(3, 3, |i, j| rows[i][j])
}

/// Rotation by `angle` about the unit vector along `axis`.
fn rotation_axis(axis: [f64; 3], angle: f64) -> DMatrix<f64> {
    let len = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    let [x, y, z] = axis.map(|a| a / len);
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    from_rows3([
        [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
        [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
        [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
    ])
}

fn cyclic_permutation() -> DMatrix<f64> {
    from_rows3([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn position(elements: &[DMatrix<f64>], g: &DMatrix<f64>) -> Option<usize> {
    elements.iter().position(|e| max_abs_diff(e, g) < MATCH_TOL)
}

/// Saturates a generator set under products.
fn generate(dim: usize, generators: &[DMatrix<f64>]) -> Result<Vec<DMatrix<f64>>> {
    let mut elements = vec![DMatrix::identity(dim, dim)];
    let mut frontier = elements.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for g in generators {
                let p = g * a;
                if position(&elements, &p).is_none() {
                    elements.push(p.clone());
                    next.push(p);
                    if elements.len() > MAX_ORDER {
                        return Err(Error::InvalidGroup(format!(
                            "generators do not close within {MAX_ORDER} elements"
                        )));
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(elements)
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Builds the group from generators by closing under multiplication.
    pub fn from_generators(dim: usize, name: GroupName, generators: Vec<DMatrix<f64>>) -> Result<Self> {
        for g in &generators {
            check_shape(dim, g)?;
        }
        let group = Self {
            dim,
            name,
            elements: generate(dim, &generators)?,
        };
        group.validate()?;
        Ok(group)
    }

    /// Takes an explicit element list and verifies it is a group.
    pub fn from_elements(dim: usize, name: GroupName, elements: Vec<DMatrix<f64>>) -> Result<Self> {
        for g in &elements {
            check_shape(dim, g)?;
        }
        let group = Self { dim, name, elements };
        group.validate()?;
        Ok(group)
    }

    /// Largest `‖gᵀg − I‖_max` over the elements.
    pub fn orthogonality_residual(&self) -> f64 {
        let id = DMatrix::identity(self.dim, self.dim);
        self.elements
            .iter()
            .map(|g| max_abs_diff(&(g.transpose() * g), &id))
            .fold(0.0, f64::max)
    }

    /// Largest distance of a product `gh` to its closest element.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.elements {
            for b in &self.elements {
                let p = a * b;
                let d = self
                    .elements
                    .iter()
                    .map(|e| max_abs_diff(e, &p))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dim == 2 || self.dim == 3) {
            return Err(Error::Unsupported(format!("groups in O({})", self.dim)));
        }
        let ortho = self.orthogonality_residual();
        if ortho >= ORTHO_TOL {
            return Err(Error::InvalidGroup(format!("element not orthogonal (residual {ortho:e})")));
        }
        if position(&self.elements, &DMatrix::identity(self.dim, self.dim)).is_none() {
            return Err(Error::InvalidGroup("identity missing".into()));
        }
        for (i, a) in self.elements.iter().enumerate() {
            if position(&self.elements[..i], a).is_some() {
                return Err(Error::InvalidGroup(format!("element {i} repeated")));
            }
            for b in &self.elements {
                if position(&self.elements, &(a * b)).is_none() {
                    return Err(Error::InvalidGroup("not closed under products".into()));
                }
            }
        }
        Ok(())
    }

    /// `Q g Qᵀ` for every element.
    pub fn conjugate(&self, q: &DMatrix<f64>) -> Result<Self> {
        let elements = self.elements.iter().map(|g| q * g * q.transpose()).collect();
        Self::from_elements(self.dim, GroupName::Custom(format!("conjugate of {}", self.name)), elements)
    }

    /// Whether every element of `self` is (up to tolerance) an element of `other`.
    pub fn is_subgroup_of(&self, other: &FiniteGroup) -> bool {
        self.dim == other.dim && self.elements.iter().all(|g| position(&other.elements, g).is_some())
    }

    /// Loads `{"dim": d, "elements": [...]}` or `{"dim": d, "generators": [...]}`,
    /// matrices given as arrays of rows.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text, &path.display().to_string())
    }

    pub fn from_json_str(text: &str, label: &str) -> Result<Self> {
        let spec: CustomGroupFile = serde_json::from_str(text)?;
        let to_mat = |rows: &Vec<Vec<f64>>| -> Result<DMatrix<f64>> {
            if rows.len() != spec.dim || rows.iter().any(|r| r.len() != spec.dim) {
                return Err(Error::InvalidGroup(format!("matrix is not {0}×{0}", spec.dim)));
            }
            Ok(DMatrix::from_fn(spec.dim, spec.dim, |i, j| rows[i][j]))
        };
        let name = GroupName::Custom(label.to_string());
        match (&spec.elements, &spec.generators) {
            (Some(els), None) => {
                let m = els.iter().map(to_mat).collect::<Result<Vec<_>>>()?;
                Self::from_elements(spec.dim, name, m)
            }
            (None, Some(gens)) => {
                let m = gens.iter().map(to_mat).collect::<Result<Vec<_>>>()?;
                Self::from_generators(spec.dim, name, m)
            }
            _ => Err(Error::Invalid(
                "custom group file needs exactly one of 'elements' or 'generators'".into(),
            )),
        }
    }
}

#[derive(Deserialize)]
struct CustomGroupFile {
    dim: usize,
    elements: Option<Vec<Vec<Vec<f64>>>>,
    generators: Option<Vec<Vec<Vec<f64>>>>,
}

fn check_shape(dim: usize, g: &DMatrix<f64>) -> Result<()> {
    if g.nrows() != dim || g.ncols() != dim {
        return Err(Error::InvalidGroup(format!(
            "{}×{} matrix in a group acting on R^{dim}",
            g.nrows(),
            g.ncols()
        )));
    }
    Ok(())
}

/// Built-in groups: cyclic and dihedral groups in O(2) and O(3) (axis `e_3`),
/// and the rotation groups of the platonic solids in O(3).
pub fn build_group(name: &GroupName, dim: usize) -> Result<FiniteGroup> {
    let unsupported = || Err(Error::Unsupported(format!("group {name} in O({dim})")));
    let gens = match (name, dim) {
        (GroupName::Cyclic(0) | GroupName::Dihedral(0), _) => {
            return Err(Error::Invalid("group order parameter must be at least 1".into()))
        }
        (GroupName::Cyclic(n), 2 | 3) => vec![rotation_z(dim, 2.0 * PI / *n as f64)],
        (GroupName::Dihedral(n), 2) => {
            let reflection = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
            vec![rotation_z(2, 2.0 * PI / *n as f64), reflection]
        }
        (GroupName::Dihedral(n), 3) => {
            // half turn about the x axis, perpendicular to the main axis
            let flip = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, -1.0]));
            vec![rotation_z(3, 2.0 * PI / *n as f64), flip]
        }
        (GroupName::Tetrahedral, 3) => vec![
            cyclic_permutation(),
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, -1.0])),
        ],
        (GroupName::Octahedral, 3) => vec![rotation_z(3, PI / 2.0), cyclic_permutation()],
        (GroupName::Icosahedral, 3) => {
            let phi = 0.5 * (1.0 + 5f64.sqrt());
            vec![rotation_axis([0.0, 1.0, phi], 2.0 * PI / 5.0), cyclic_permutation()]
        }
        _ => return unsupported(),
    };
    FiniteGroup::from_generators(dim, name.clone(), gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let cases = [
            (GroupName::Cyclic(4), 2, 4),
            (GroupName::Dihedral(3), 2, 6),
            (GroupName::Cyclic(5), 3, 5),
            (GroupName::Dihedral(4), 3, 8),
            (GroupName::Tetrahedral, 3, 12),
            (GroupName::Octahedral, 3, 24),
            (GroupName::Icosahedral, 3, 60),
        ];
        for (name, dim, order) in cases {
            let g = build_group(&name, dim).unwrap();
            assert_eq!(g.order(), order, "{name}");
            assert!(g.closure_residual() < 1e-12);
            assert!(g.orthogonality_residual() < 1e-12);
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("cyclic:3".parse::<GroupName>().unwrap(), GroupName::Cyclic(3));
        assert_eq!("icosa".parse::<GroupName>().unwrap(), GroupName::Icosahedral);
        assert!("cube".parse::<GroupName>().is_err());
    }

    #[test]
    fn unsupported_combinations() {
        assert!(matches!(build_group(&GroupName::Tetrahedral, 2), Err(Error::Unsupported(_))));
        assert!(build_group(&GroupName::Cyclic(0), 2).is_err());
    }

    #[test]
    fn custom_json() {
        let g = FiniteGroup::from_json_str(
            r#"{"dim": 2, "generators": [[[-1, 0], [0, 1]]]}"#,
            "mirror",
        )
        .unwrap();
        assert_eq!(g.order(), 2);
        let bad = FiniteGroup::from_json_str(r#"{"dim": 2, "elements": [[[0, -1], [1, 0]]]}"#, "x");
        assert!(matches!(bad, Err(Error::InvalidGroup(_))));
    }
}
