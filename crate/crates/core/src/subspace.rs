//! Linear and affine subspaces of R^d as orthonormal bases plus offset.

use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// A subspace held as an orthonormal basis (columns) and an offset that
/// is orthogonal to the span, so the representation is canonical.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: DMatrix<f64>,
    offset: DVector<f64>,
}

impl Subspace {
    /// Span of the given vectors (linear subspace through the origin).
    pub fn span(ambient_dim: usize, vectors: &[Vec<f64>]) -> Result<Subspace> {
        let cols: Vec<DVector<f64>> = vectors
            .iter()
            .map(|v| {
                if v.len() != ambient_dim {
                    Err(Error::AmbientMismatch(format!(
                        "vector of length {} in R^{ambient_dim}",
                        v.len()
                    )))
                } else {
                    Ok(DVector::from_column_slice(v))
                }
            })
            .collect::<Result<_>>()?;
        let basis = gram_schmidt(ambient_dim, &cols);
        Ok(Subspace {
            ambient_dim,
            basis,
            offset: DVector::zeros(ambient_dim),
        })
    }

    /// Affine subspace: span translated by a point. The stored offset is
    /// the component of the point orthogonal to the span.
    pub fn affine(ambient_dim: usize, vectors: &[Vec<f64>], point: &[f64]) -> Result<Subspace> {
        let mut s = Subspace::span(ambient_dim, vectors)?;
        let pt = DVector::from_column_slice(point);
        let tangential = &s.basis * (s.basis.transpose() * &pt);
        s.offset = pt - tangential;
        Ok(s)
    }

    pub fn zero(ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: DMatrix::zeros(ambient_dim, 0),
            offset: DVector::zeros(ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: DMatrix::identity(ambient_dim, ambient_dim),
            offset: DVector::zeros(ambient_dim),
        }
    }

    pub fn line(direction: &[f64]) -> Result<Subspace> {
        Subspace::span(direction.len(), &[direction.to_vec()])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn offset(&self) -> &DVector<f64> {
        &self.offset
    }

    pub fn offset_is_zero(&self) -> bool {
        self.offset.norm() < 1e-12
    }

    /// Re-orthonormalize; reports whether anything had to change.
    pub fn reorthonormalized(&self) -> (Subspace, bool) {
        let gram = self.basis.transpose() * &self.basis;
        let id = DMatrix::identity(self.dim(), self.dim());
        if (gram - id).amax() < 1e-12 {
            return (self.clone(), false);
        }
        let cols: Vec<DVector<f64>> =
            (0..self.dim()).map(|j| self.basis.column(j).into_owned()).collect();
        let basis = gram_schmidt(self.ambient_dim, &cols);
        (
            Subspace {
                ambient_dim: self.ambient_dim,
                basis,
                offset: self.offset.clone(),
            },
            true,
        )
    }

    /// Orthogonal complement of a linear subspace.
    pub fn orth_complement(&self) -> Result<Subspace> {
        if !self.offset_is_zero() {
            return Err(Error::InvalidChain(
                "orthogonal complement is defined for linear subspaces".into(),
            ));
        }
        let d = self.ambient_dim;
        let k = self.dim();
        // Columns of I projected off the span, orthonormalized.
        let mut cols = Vec::new();
        for i in 0..d {
            let mut v = DVector::zeros(d);
            v[i] = 1.0;
            let proj = &self.basis * (self.basis.transpose() * &v);
            cols.push(v - proj);
        }
        let basis = gram_schmidt(d, &cols);
        debug_assert_eq!(basis.ncols(), d - k);
        Ok(Subspace {
            ambient_dim: d,
            basis,
            offset: DVector::zeros(d),
        })
    }

    /// Sum A + B of linear subspaces.
    pub fn sum(&self, o: &Subspace) -> Result<Subspace> {
        self.require_linear_pair(o)?;
        let mut cols: Vec<DVector<f64>> =
            (0..self.dim()).map(|j| self.basis.column(j).into_owned()).collect();
        cols.extend((0..o.dim()).map(|j| o.basis.column(j).into_owned()));
        Ok(Subspace {
            ambient_dim: self.ambient_dim,
            basis: gram_schmidt(self.ambient_dim, &cols),
            offset: DVector::zeros(self.ambient_dim),
        })
    }

    /// Intersection of linear subspaces via (A^perp + B^perp)^perp.
    pub fn intersection(&self, o: &Subspace) -> Result<Subspace> {
        self.require_linear_pair(o)?;
        self.orth_complement()?
            .sum(&o.orth_complement()?)?
            .orth_complement()
    }

    /// Cartesian product of (affine) subspaces in R^{d1+d2}: the
    /// block-diagonal basis with concatenated offsets. Composite
    /// generator descriptors (cup products of subspace families) are
    /// products of this kind, clipped to a disk by the caller.
    pub fn product(&self, o: &Subspace) -> Subspace {
        let d = self.ambient_dim + o.ambient_dim;
        let k = self.dim() + o.dim();
        let mut basis = DMatrix::zeros(d, k);
        basis
            .view_mut((0, 0), (self.ambient_dim, self.dim()))
            .copy_from(&self.basis);
        basis
            .view_mut((self.ambient_dim, self.dim()), (o.ambient_dim, o.dim()))
            .copy_from(&o.basis);
        let mut offset = DVector::zeros(d);
        offset.rows_mut(0, self.ambient_dim).copy_from(&self.offset);
        offset
            .rows_mut(self.ambient_dim, o.ambient_dim)
            .copy_from(&o.offset);
        Subspace {
            ambient_dim: d,
            basis,
            offset,
        }
    }

    /// Membership within tolerance (affine).
    pub fn contains(&self, pt: &[f64], tolerance: f64) -> bool {
        let v = DVector::from_column_slice(pt) - &self.offset;
        let tangential = &self.basis * (self.basis.transpose() * &v);
        (v - tangential).norm() <= tolerance
    }

    /// Same span and offset within tolerance.
    pub fn approx_eq(&self, o: &Subspace, tolerance: f64) -> bool {
        if self.dim() != o.dim() || self.ambient_dim != o.ambient_dim {
            return false;
        }
        if (&self.offset - &o.offset).norm() > tolerance {
            return false;
        }
        // Every basis vector of one lies in the span of the other.
        for j in 0..self.dim() {
            let v = self.basis.column(j).into_owned();
            let proj = o.basis() * (o.basis().transpose() * &v);
            if (v - proj).norm() > tolerance {
                return false;
            }
        }
        true
    }

    fn require_linear_pair(&self, o: &Subspace) -> Result<()> {
        if self.ambient_dim != o.ambient_dim {
            return Err(Error::AmbientMismatch(
                "subspaces live in different ambient dimensions".into(),
            ));
        }
        if !self.offset_is_zero() || !o.offset_is_zero() {
            return Err(Error::InvalidChain(
                "sum/intersection defined for linear subspaces".into(),
            ));
        }
        Ok(())
    }
}

fn gram_schmidt(dim: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for c in cols {
        let mut v = c.clone();
        for b in &basis {
            let coeff = b.dot(&v);
            v -= b * coeff;
        }
        // Second pass for numerical cleanliness.
        for b in &basis {
            let coeff = b.dot(&v);
            v -= b * coeff;
        }
        let n = v.norm();
        if n > 1e-10 {
            basis.push(v / n);
        }
    }
    let mut m = DMatrix::zeros(dim, basis.len());
    for (j, b) in basis.iter().enumerate() {
        m.set_column(j, b);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stratum_rng;
    use rand::Rng;

    #[test]
    fn z_axis_complement_is_xy_plane() {
        let z = Subspace::line(&[0.0, 0.0, 1.0]).unwrap();
        let c = z.orth_complement().unwrap();
        assert_eq!(c.dim(), 2);
        assert!(c.contains(&[1.0, -2.0, 0.0], 1e-12));
        assert!(!c.contains(&[0.0, 0.0, 0.5], 1e-9));
    }

    #[test]
    fn double_complement_restores_span() {
        let mut rng = stratum_rng(3, 0);
        for _ in 0..50 {
            let cols: Vec<Vec<f64>> = (0..2)
                .map(|_| (0..5).map(|_| rng.gen::<f64>() - 0.5).collect())
                .collect();
            let s = Subspace::span(5, &cols).unwrap();
            let cc = s.orth_complement().unwrap().orth_complement().unwrap();
            assert!(s.approx_eq(&cc, 1e-10));
        }
    }

    #[test]
    fn complement_of_sum_is_intersection_of_complements() {
        let mut rng = stratum_rng(4, 0);
        for _ in 0..50 {
            let rand_sub = |rng: &mut rand_chacha::ChaCha8Rng, k: usize| {
                let cols: Vec<Vec<f64>> = (0..k)
                    .map(|_| (0..6).map(|_| rng.gen::<f64>() - 0.5).collect())
                    .collect();
                Subspace::span(6, &cols).unwrap()
            };
            let a = rand_sub(&mut rng, 2);
            let b = rand_sub(&mut rng, 3);
            let lhs = a.sum(&b).unwrap().orth_complement().unwrap();
            let rhs = a
                .orth_complement()
                .unwrap()
                .intersection(&b.orth_complement().unwrap())
                .unwrap();
            assert!(lhs.approx_eq(&rhs, 1e-10));
        }
    }

    #[test]
    fn product_is_blockwise() {
        let a = Subspace::affine(2, &[vec![1.0, 0.0]], &[0.0, 0.3]).unwrap();
        let b = Subspace::line(&[0.0, 0.0, 1.0]).unwrap();
        let p = a.product(&b);
        assert_eq!(p.ambient_dim(), 5);
        assert_eq!(p.dim(), 2);
        assert!(p.contains(&[2.0, 0.3, 0.0, 0.0, -1.5], 1e-12));
        assert!(!p.contains(&[0.0, 0.0, 1.0, 0.0, 0.0], 1e-9));
    }

    #[test]
    fn affine_offset_is_orthogonal_to_span() {
        let s = Subspace::affine(3, &[vec![1.0, 0.0, 0.0]], &[2.0, 0.5, 0.0]).unwrap();
        assert!(s.offset()[0].abs() < 1e-12);
        assert!((s.offset()[1] - 0.5).abs() < 1e-12);
        assert!(s.contains(&[7.0, 0.5, 0.0], 1e-12));
    }
}
