//! Rank of the orthogonal projection of a product of subspaces onto the
//! diagonal: at least (dim sum)/p, with equality when all factors agree.

use crate::subspace::Subspace;
use crate::{Error, Result};
use nalgebra::DMatrix;

#[derive(Debug, Clone)]
pub struct DiagonalRank {
    pub rank: usize,
    /// ceil((sum of factor dimensions)/p).
    pub lower_bound: usize,
    /// Set when an input basis had to be re-orthonormalized.
    pub reorthonormalized: bool,
}

/// Rank of the orthogonal projection Pi_1 x .. x Pi_p -> diagonal of
/// (R^{n+1})^p, by SVD with singular-value floor 1e-9.
pub fn rank_of_diagonal_projection(factors: &[Subspace]) -> Result<DiagonalRank> {
    if factors.is_empty() {
        return Err(Error::InvalidChain("no subspaces given".into()));
    }
    let m = factors[0].ambient_dim();
    let p = factors.len();
    let mut reorth = false;
    let mut cleaned = Vec::with_capacity(p);
    for f in factors {
        if f.ambient_dim() != m {
            return Err(Error::AmbientMismatch(
                "subspaces live in different ambient dimensions".into(),
            ));
        }
        if !f.offset_is_zero() {
            return Err(Error::InvalidChain(
                "diagonal projection rank needs linear subspaces".into(),
            ));
        }
        let (sub, fixed) = f.reorthonormalized();
        reorth |= fixed;
        cleaned.push(sub);
    }
    let total: usize = cleaned.iter().map(|f| f.dim()).sum();
    if total == 0 {
        return Ok(DiagonalRank {
            rank: 0,
            lower_bound: 0,
            reorthonormalized: reorth,
        });
    }
    // Diagonal basis columns (e_i,..,e_i)/sqrt(p); product basis is block
    // diagonal. The projection matrix in these bases is D^T B.
    let mut b = DMatrix::zeros(p * m, total);
    let mut col = 0;
    for (blk, f) in cleaned.iter().enumerate() {
        for j in 0..f.dim() {
            for i in 0..m {
                b[(blk * m + i, col)] = f.basis()[(i, j)];
            }
            col += 1;
        }
    }
    let mut d = DMatrix::zeros(p * m, m);
    let s = 1.0 / (p as f64).sqrt();
    for blk in 0..p {
        for i in 0..m {
            d[(blk * m + i, i)] = s;
        }
    }
    let proj = d.transpose() * b;
    let svd = proj.svd(false, false);
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-9).count();
    let lower_bound = total.div_ceil(p);
    Ok(DiagonalRank {
        rank,
        lower_bound,
        reorthonormalized: reorth,
    })
}
