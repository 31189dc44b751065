//! The Z_p cyclic-permutation representation toolkit: the real discrete
//! Fourier transform matrix that block-diagonalizes the cyclic shift,
//! its Kronecker extensions, the diagonal-excision embedding, orbit
//! enumeration and the rank bound for projections onto the diagonal.

mod excision;
mod lens;
mod orbits;
mod projrank;

pub use excision::{DiagonalExcisionMap, ExcisionAsMap, FdReport, JacobianSplit};
pub use lens::{lens_reindex, LensOrbit};
pub use orbits::{burnside_count, count_free_orbits, orbit_enumerate, FreeOrbitCount, Orbit};
pub use projrank::{rank_of_diagonal_projection, DiagonalRank};

use crate::coeff::Prime;
use nalgebra::DMatrix;

/// The real DFT matrix F for Z_p, the block rotation matrix D that it
/// conjugates the cyclic shift into, and the shift M itself:
/// M = F^T D F, with F orthogonal.
#[derive(Debug, Clone)]
pub struct RealDft {
    pub p: Prime,
    pub f: DMatrix<f64>,
    pub d: DMatrix<f64>,
    pub shift: DMatrix<f64>,
}

/// Build the real DFT data for one prime.
///
/// For p = 2, F = (1/sqrt 2) [[1, 1], [1, -1]]. For odd p the rows are
/// the constant row u and the cosine/sine pairs v_j, w_j at frequency j.
pub fn build_dft(p: Prime) -> RealDft {
    let pu = p.get() as usize;
    let theta = 2.0 * std::f64::consts::PI / pu as f64;
    let mut f = DMatrix::zeros(pu, pu);
    if pu == 2 {
        let s = 1.0 / 2.0f64.sqrt();
        f[(0, 0)] = s;
        f[(0, 1)] = s;
        f[(1, 0)] = s;
        f[(1, 1)] = -s;
    } else {
        let c1 = (1.0 / pu as f64).sqrt();
        let c2 = (2.0 / pu as f64).sqrt();
        for k in 0..pu {
            f[(0, k)] = c1;
        }
        for j in 1..=(pu - 1) / 2 {
            for k in 0..pu {
                f[(2 * j - 1, k)] = c2 * (j as f64 * k as f64 * theta).cos();
                f[(2 * j, k)] = c2 * (j as f64 * k as f64 * theta).sin();
            }
        }
    }

    // D: identity on the constant row, rotation by j*theta on each
    // (v_j, w_j) pair, oriented so that M = F^T D F is the shift
    // (x_1,..,x_p) -> (x_2,..,x_p,x_1).
    let mut d = DMatrix::zeros(pu, pu);
    d[(0, 0)] = 1.0;
    if pu == 2 {
        d[(1, 1)] = -1.0;
    } else {
        for j in 1..=(pu - 1) / 2 {
            let (c, s) = ((j as f64 * theta).cos(), (j as f64 * theta).sin());
            let r = 2 * j - 1;
            d[(r, r)] = c;
            d[(r, r + 1)] = s;
            d[(r + 1, r)] = -s;
            d[(r + 1, r + 1)] = c;
        }
    }

    let mut shift = DMatrix::zeros(pu, pu);
    for i in 0..pu {
        shift[(i, (i + 1) % pu)] = 1.0;
    }

    RealDft { p, f, d, shift }
}

impl RealDft {
    /// The constant row u = (1,..,1)/sqrt(p).
    pub fn row_u(&self) -> Vec<f64> {
        self.f.row(0).iter().copied().collect()
    }

    /// Cosine row at frequency j (1 <= j <= (p-1)/2, odd p only).
    pub fn row_v(&self, j: usize) -> Vec<f64> {
        self.f.row(2 * j - 1).iter().copied().collect()
    }

    /// Sine row at frequency j.
    pub fn row_w(&self, j: usize) -> Vec<f64> {
        self.f.row(2 * j).iter().copied().collect()
    }

    /// F with the first (constant) row removed.
    pub fn f_perp(&self) -> DMatrix<f64> {
        let pu = self.p.get() as usize;
        self.f.rows(1, pu - 1).into_owned()
    }

    /// Kronecker extension F (x) I_m acting blockwise on (R^m)^p.
    pub fn f_kron(&self, m: usize) -> DMatrix<f64> {
        self.f.kronecker(&DMatrix::identity(m, m))
    }

    pub fn f_perp_kron(&self, m: usize) -> DMatrix<f64> {
        self.f_perp().kronecker(&DMatrix::identity(m, m))
    }

    /// D with the first row/column removed, Kronecker-extended: the
    /// rotation induced on the lens coordinates by one cyclic shift.
    pub fn d_perp_kron(&self, m: usize) -> DMatrix<f64> {
        let pu = self.p.get() as usize;
        let dperp = self
            .d
            .view((1, 1), (pu - 1, pu - 1))
            .into_owned();
        dperp.kronecker(&DMatrix::identity(m, m))
    }

    /// Residual norms: how far F is from orthogonal, and how far F^T D F
    /// is from the cyclic shift. Both should be at machine precision.
    pub fn residuals(&self) -> (f64, f64) {
        let pu = self.p.get() as usize;
        let orth = (&self.f * self.f.transpose() - DMatrix::identity(pu, pu)).amax();
        let diag = (self.f.transpose() * &self.d * &self.f - &self.shift).amax();
        (orth, diag)
    }
}
