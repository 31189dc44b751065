//! Ambient spaces chains live in, and their metrics.
//!
//! Every chain references exactly one ambient. Spheres carry the geodesic
//! metric, disks and Euclidean space the chordal one. The product ambient
//! (lens coordinates times a disk) is what the cyclic product map emits;
//! only its disk factor carries relative semantics.

use crate::coeff::Prime;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ambient {
    /// Unit sphere S^n in R^{n+1}; points have n+1 coordinates.
    Sphere { dim: usize },
    /// Unit disk D^m in R^m.
    Disk { dim: usize },
    /// Plain R^d.
    Euclidean { dim: usize },
    /// L_n x D^{n+1}: lens orbit coordinates on S^{(p-1)(n+1)-1} paired
    /// with a disk point in R^{n+1}. Relative to L_n x boundary.
    LensDisk { p: Prime, n: usize },
}

impl Ambient {
    /// Length of coordinate vectors for points of this ambient
    /// (for `LensDisk`, the disk factor only; the lens factor is stored
    /// separately on the atom).
    pub fn coord_dim(&self) -> usize {
        match *self {
            Ambient::Sphere { dim } => dim + 1,
            Ambient::Disk { dim } => dim,
            Ambient::Euclidean { dim } => dim,
            Ambient::LensDisk { n, .. } => n + 1,
        }
    }

    pub fn has_boundary(&self) -> bool {
        matches!(self, Ambient::Disk { .. } | Ambient::LensDisk { .. })
    }

    /// Distance between two points of the ambient.
    pub fn dist(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Ambient::Sphere { .. } => {
                let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
                dot.clamp(-1.0, 1.0).acos()
            }
            _ => euclidean(x, y),
        }
    }

    /// Distance from a point to the ambient boundary, if there is one.
    pub fn boundary_dist(&self, x: &[f64]) -> Option<f64> {
        match self {
            Ambient::Disk { .. } | Ambient::LensDisk { .. } => {
                Some((1.0 - norm(x)).max(0.0))
            }
            _ => None,
        }
    }

    /// Nearest boundary point (radial projection), if there is a boundary.
    pub fn boundary_projection(&self, x: &[f64]) -> Option<Vec<f64>> {
        if !self.has_boundary() {
            return None;
        }
        let n = norm(x);
        if n == 0.0 {
            let mut e = vec![0.0; x.len()];
            e[0] = 1.0;
            return Some(e);
        }
        Some(x.iter().map(|v| v / n).collect())
    }

    /// Whether `x` lies on (or outside) the boundary within `tol`.
    pub fn on_boundary(&self, x: &[f64], tol: f64) -> bool {
        match self {
            Ambient::Disk { .. } | Ambient::LensDisk { .. } => norm(x) >= 1.0 - tol,
            _ => false,
        }
    }

    /// Validate that `x` is a legal point of this ambient.
    pub fn validate_point(&self, x: &[f64], tol: f64) -> Result<()> {
        if x.len() != self.coord_dim() {
            return Err(Error::AmbientMismatch(format!(
                "point has {} coordinates, ambient {:?} expects {}",
                x.len(),
                self,
                self.coord_dim()
            )));
        }
        match self {
            Ambient::Sphere { .. } => {
                if (norm(x) - 1.0).abs() > tol {
                    return Err(Error::AmbientMismatch(format!(
                        "sphere point has norm {}",
                        norm(x)
                    )));
                }
            }
            Ambient::Disk { .. }
                if norm(x) > 1.0 + tol => {
                    return Err(Error::AmbientMismatch(format!(
                        "disk point has norm {}",
                        norm(x)
                    )));
                }
            _ => {}
        }
        Ok(())
    }

    pub fn require_same(&self, o: &Ambient) -> Result<()> {
        if self != o {
            return Err(Error::AmbientMismatch(format!("{self:?} vs {o:?}")));
        }
        Ok(())
    }
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_geodesic() {
        let s = Ambient::Sphere { dim: 1 };
        let d = s.dist(&[1.0, 0.0], &[0.0, 1.0]);
        assert!((d - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn disk_boundary_distance() {
        let d = Ambient::Disk { dim: 2 };
        assert!((d.boundary_dist(&[0.9, 0.0]).unwrap() - 0.1).abs() < 1e-15);
        assert!(d.on_boundary(&[0.6, 0.8], 1e-9));
        assert!(!d.on_boundary(&[0.5, 0.0], 1e-9));
    }
}
