//! The diagonal-excision embedding f: off-diagonal tuples of p points in
//! R^{n+1} map to (unit lens vector, barycenter). The lens vector is the
//! normalized image under F with the constant block removed; its kernel
//! is exactly the diagonal.

use super::{build_dft, RealDft};
use crate::chain::SmoothMap;
use crate::coeff::Prime;
use crate::tol::EPS_MIN;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct DiagonalExcisionMap {
    pub p: Prime,
    pub n: usize,
    pub dft: RealDft,
    /// (p-1)(n+1) x p(n+1): F^perp (x) I_{n+1}.
    pub f_perp: DMatrix<f64>,
    /// Rotation of the lens coordinates under one cyclic shift.
    pub d_perp: DMatrix<f64>,
    pub eps_min: f64,
}

impl DiagonalExcisionMap {
    pub fn new(p: Prime, n: usize) -> Self {
        let dft = build_dft(p);
        let f_perp = dft.f_perp_kron(n + 1);
        let d_perp = dft.d_perp_kron(n + 1);
        DiagonalExcisionMap {
            p,
            n,
            dft,
            f_perp,
            d_perp,
            eps_min: EPS_MIN,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.p.get() as usize * (self.n + 1)
    }

    pub fn lens_dim(&self) -> usize {
        (self.p.get() as usize - 1) * (self.n + 1)
    }

    /// Distance-to-diagonal coordinate |F^perp x|.
    pub fn diag_dist(&self, x: &[f64]) -> f64 {
        (&self.f_perp * DVector::from_column_slice(x)).norm()
    }

    /// Evaluate f: (unit vector on the lens sphere, barycenter in R^{n+1}).
    pub fn f_map(&self, x: &[f64]) -> Result<(DVector<f64>, DVector<f64>)> {
        let y = &self.f_perp * DVector::from_column_slice(x);
        let norm = y.norm();
        if norm <= self.eps_min {
            return Err(Error::DiagonalProximity {
                norm,
                floor: self.eps_min,
            });
        }
        let pu = self.p.get() as usize;
        let m = self.n + 1;
        let mut bary = DVector::zeros(m);
        for b in 0..pu {
            for i in 0..m {
                bary[i] += x[b * m + i];
            }
        }
        bary /= pu as f64;
        Ok((y / norm, bary))
    }

    /// Cyclic shift of the input tuple (x_1,..,x_p) -> (x_2,..,x_p,x_1).
    pub fn shift_input(&self, x: &[f64]) -> Vec<f64> {
        let m = self.n + 1;
        let pu = self.p.get() as usize;
        let mut out = vec![0.0; x.len()];
        for b in 0..pu {
            let src = ((b + 1) % pu) * m;
            out[b * m..(b + 1) * m].copy_from_slice(&x[src..src + m]);
        }
        out
    }

    /// A point of the unit sphere S^{p(n+1)-1} at diagonal distance
    /// exactly eps, deterministic in the seed.
    pub fn point_at_diag_dist(&self, eps: f64, seed: u64) -> Vec<f64> {
        use rand::Rng;
        let mut rng = crate::rng::stratum_rng(seed, 0xD1A6);
        let m = self.n + 1;
        let ld = self.lens_dim();
        // Build in F-coordinates: diagonal block of norm sqrt(1-eps^2),
        // off-diagonal block of norm eps; map back with F^T.
        let mut xd: Vec<f64> = (0..m).map(|_| rng.gen::<f64>() - 0.5).collect();
        let nd = xd.iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale_d = (1.0 - eps * eps).sqrt() / nd;
        for v in &mut xd {
            *v *= scale_d;
        }
        let mut xo: Vec<f64> = (0..ld).map(|_| rng.gen::<f64>() - 0.5).collect();
        let no = xo.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in &mut xo {
            *v *= eps / no;
        }
        let mut fc = DVector::zeros(self.in_dim());
        for i in 0..m {
            fc[i] = xd[i];
        }
        for i in 0..ld {
            fc[m + i] = xo[i];
        }
        let x = self.dft.f_kron(m).transpose() * fc;
        x.iter().copied().collect()
    }

    /// The stretching split at a point of diagonal distance eps, with a
    /// finite-difference verification of the underlying map.
    ///
    /// Returned multiset: 1/sqrt(p) with multiplicity n+1 on directions
    /// parallel to the diagonal, 1/eps with multiplicity (p-1)(n+1)
    /// transverse to it. The finite-difference report probes the n+1
    /// diagonal directions and the (p-1)(n+1)-1 transverse directions
    /// tangent to the diagonal-distance level set; the one remaining
    /// transverse direction is normal to the level set, where the
    /// sphere-normalized lens coordinate is constant along the ray and
    /// the block form counts it with the 1/eps factor.
    pub fn jacobian_split(&self, v: &[f64]) -> Result<JacobianSplit> {
        let eps = self.diag_dist(v);
        if eps <= self.eps_min {
            return Err(Error::DiagonalProximity {
                norm: eps,
                floor: self.eps_min,
            });
        }
        let m = self.n + 1;
        let ld = self.lens_dim();
        let pu = self.p.get() as usize;

        // Orthonormal diagonal directions (e_i,..,e_i)/sqrt(p).
        let mut diag_dirs = Vec::with_capacity(m);
        for i in 0..m {
            let mut d = vec![0.0; self.in_dim()];
            for b in 0..pu {
                d[b * m + i] = 1.0 / (pu as f64).sqrt();
            }
            diag_dirs.push(d);
        }
        // Transverse directions: rows of F^perp give an orthonormal basis
        // of the diagonal complement; rotate so the last one is the
        // radial direction F^perp^T (y/|y|).
        let y = &self.f_perp * DVector::from_column_slice(v);
        let yhat = y.clone() / y.norm();
        let radial = self.f_perp.transpose() * &yhat;
        let mut trans_dirs: Vec<DVector<f64>> = Vec::with_capacity(ld);
        for r in 0..ld {
            trans_dirs.push(self.f_perp.row(r).transpose());
        }
        // Gram-Schmidt the radial direction out of the transverse block.
        let mut tangent: Vec<DVector<f64>> = Vec::new();
        for d in trans_dirs.drain(..) {
            let mut u = d.clone();
            u -= &radial * radial.dot(&d);
            for t in &tangent {
                let c = t.dot(&u);
                u -= t * c;
            }
            let n = u.norm();
            if n > 1e-9 {
                tangent.push(u / n);
            }
        }

        let h = 1e-6;
        let fd_dir = |dir: &[f64]| -> f64 {
            let plus = self.eval_full(&add_scaled(v, dir, h));
            let minus = self.eval_full(&add_scaled(v, dir, -h));
            plus.iter()
                .zip(&minus)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
                / (2.0 * h)
        };

        let diag_fd: Vec<f64> = diag_dirs.iter().map(|d| fd_dir(d)).collect();
        let tangent_fd: Vec<f64> = tangent
            .iter()
            .map(|d| fd_dir(d.as_slice()))
            .collect();
        let radial_fd = fd_dir(radial.as_slice());

        let inv_sqrt_p = 1.0 / (pu as f64).sqrt();
        let inv_eps = 1.0 / eps;
        let mut max_rel = 0.0f64;
        for v in &diag_fd {
            max_rel = max_rel.max((v - inv_sqrt_p).abs() / inv_sqrt_p);
        }
        for v in &tangent_fd {
            max_rel = max_rel.max((v - inv_eps).abs() / inv_eps);
        }

        Ok(JacobianSplit {
            eps,
            values: vec![(inv_sqrt_p, m), (inv_eps, ld)],
            fd: FdReport {
                diag_fd,
                tangent_fd,
                radial_fd,
                step: h,
                max_rel_err: max_rel,
            },
        })
    }

    /// f with both components concatenated into one vector, extended off
    /// the sphere (the lens factor only sees the direction of F^perp x).
    pub fn eval_full(&self, x: &[f64]) -> Vec<f64> {
        let y = &self.f_perp * DVector::from_column_slice(x);
        let norm = y.norm().max(1e-300);
        let pu = self.p.get() as usize;
        let m = self.n + 1;
        let mut out = Vec::with_capacity(self.lens_dim() + m);
        for v in (y / norm).iter() {
            out.push(*v);
        }
        for i in 0..m {
            let mut s = 0.0;
            for b in 0..pu {
                s += x[b * m + i];
            }
            out.push(s / pu as f64);
        }
        out
    }

    /// Closed-form Jacobian of `eval_full`.
    pub fn jacobian_full(&self, x: &[f64]) -> DMatrix<f64> {
        let y = &self.f_perp * DVector::from_column_slice(x);
        let norm = y.norm().max(1e-300);
        let yhat = y / norm;
        let ld = self.lens_dim();
        let m = self.n + 1;
        let pu = self.p.get() as usize;
        // d(y/|y|)/dx = (I - yhat yhat^T) F^perp / |y|
        let proj = DMatrix::identity(ld, ld) - &yhat * yhat.transpose();
        let top = proj * &self.f_perp / norm;
        let mut jac = DMatrix::zeros(ld + m, pu * m);
        jac.view_mut((0, 0), (ld, pu * m)).copy_from(&top);
        for i in 0..m {
            for b in 0..pu {
                jac[(ld + i, b * m + i)] = 1.0 / pu as f64;
            }
        }
        jac
    }
}

/// Adapter so the excision map can be fed to `chain::pushforward`.
pub struct ExcisionAsMap<'a>(pub &'a DiagonalExcisionMap);

impl SmoothMap for ExcisionAsMap<'_> {
    fn in_dim(&self) -> usize {
        self.0.in_dim()
    }
    fn out_dim(&self) -> usize {
        self.0.lens_dim() + self.0.n + 1
    }
    fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.0.eval_full(x)
    }
    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        self.0.jacobian_full(x)
    }
}

fn add_scaled(x: &[f64], d: &[f64], h: f64) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + h * b).collect()
}

#[derive(Debug, Clone)]
pub struct JacobianSplit {
    pub eps: f64,
    /// (singular value, multiplicity) per the block decomposition.
    pub values: Vec<(f64, usize)>,
    pub fd: FdReport,
}

#[derive(Debug, Clone)]
pub struct FdReport {
    pub diag_fd: Vec<f64>,
    pub tangent_fd: Vec<f64>,
    /// Derivative along the level-set normal; the normalized lens factor
    /// is constant along this ray so the value is near zero.
    pub radial_fd: f64,
    pub step: f64,
    pub max_rel_err: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barycenter_of_p2_pair() {
        let map = DiagonalExcisionMap::new(Prime::new(2).unwrap(), 1);
        let (_, bary) = map.f_map(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((bary[0] - 0.5).abs() < 1e-15);
        assert!((bary[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn kernel_of_f_perp_is_the_diagonal() {
        use rand::Rng;
        let map = DiagonalExcisionMap::new(Prime::new(3).unwrap(), 2);
        let mut rng = crate::rng::stratum_rng(5, 0);
        for _ in 0..50 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() - 0.5).collect();
            let mut diag = Vec::new();
            for _ in 0..3 {
                diag.extend(x.iter().copied());
            }
            assert!(map.diag_dist(&diag) < 1e-12);
        }
    }

    #[test]
    fn equivariance_of_both_components() {
        use rand::Rng;
        let map = DiagonalExcisionMap::new(Prime::new(3).unwrap(), 1);
        let mut rng = crate::rng::stratum_rng(9, 0);
        for _ in 0..1000 {
            let x: Vec<f64> = (0..6).map(|_| rng.gen::<f64>() - 0.5).collect();
            if map.diag_dist(&x) < 1e-3 {
                continue;
            }
            let (lens, bary) = map.f_map(&x).unwrap();
            let (lens_s, bary_s) = map.f_map(&map.shift_input(&x)).unwrap();
            assert!((bary_s - bary).norm() < 1e-12);
            let rotated = &map.d_perp * lens;
            assert!((lens_s - rotated).norm() < 1e-10);
        }
    }

    #[test]
    fn diagonal_proximity_is_an_error_carrying_the_norm() {
        let map = DiagonalExcisionMap::new(Prime::new(2).unwrap(), 1);
        let err = map.f_map(&[0.3, 0.4, 0.3, 0.4]).unwrap_err();
        match err {
            Error::DiagonalProximity { norm, .. } => assert!(norm < 1e-12),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn sphere_point_barycenter_norm_from_coordinates() {
        // On the unit sphere at diagonal distance eps, the barycenter has
        // norm sqrt(1-eps^2)/sqrt(p).
        for eps in [0.05, 0.3, 0.9] {
            let map = DiagonalExcisionMap::new(Prime::new(3).unwrap(), 2);
            let v = map.point_at_diag_dist(eps, 11);
            let (_, bary) = map.f_map(&v).unwrap();
            let want = (1.0 - eps * eps).sqrt() / 3.0f64.sqrt();
            assert!(
                (bary.norm() - want).abs() < 1e-12,
                "eps={eps}: {} vs {}",
                bary.norm(),
                want
            );
        }
    }

    #[test]
    fn jacobian_split_values_and_fd_across_the_grid() {
        for p in [2u64, 3] {
            for n in [1usize, 2] {
                for eps in [0.05f64, 0.1, 0.5] {
                    let map = DiagonalExcisionMap::new(Prime::new(p).unwrap(), n);
                    let v = map.point_at_diag_dist(eps, 3);
                    let split = map.jacobian_split(&v).unwrap();
                    assert!((split.eps - eps).abs() < 1e-12);
                    assert_eq!(split.values[0].1, n + 1);
                    assert_eq!(split.values[1].1, (p as usize - 1) * (n + 1));
                    assert!(
                        split.fd.max_rel_err < 1e-5,
                        "p={p} n={n} eps={eps}: rel err {}",
                        split.fd.max_rel_err
                    );
                    // The level-set normal is flat for the normalized map.
                    assert!(split.fd.radial_fd < 1e-6 / eps);
                }
            }
        }
    }

    #[test]
    fn pushforward_mass_matches_finite_difference_oracle() {
        // Push a product 2-simplex away from the diagonal through f and
        // compare the quadrature mass estimate against a brute-force
        // Monte Carlo area integral that differentiates f numerically.
        use crate::chain::{pushforward, PushforwardOptions, SimplicialChain};
        use rand::Rng;
        let map = DiagonalExcisionMap::new(Prime::new(2).unwrap(), 1);
        let verts = vec![
            vec![1.0, 0.0, 0.0, 1.0],
            vec![0.9, 0.1, -0.1, 0.95],
            vec![1.05, -0.05, 0.05, 1.1],
        ];
        let chain = SimplicialChain::new(
            crate::ambient::Ambient::Euclidean { dim: 4 },
            Prime::new(2).unwrap(),
            false,
            2,
            vec![(verts.clone(), 1)],
        )
        .unwrap();
        let opts = PushforwardOptions {
            samples: 40_000,
            seed: 5,
            ..Default::default()
        };
        let got = pushforward(&chain, &ExcisionAsMap(&map), &opts).unwrap();
        assert!(!got.singular_warning);

        // Independent oracle: uniform barycentric samples, forward
        // differences of eval_full, Gram determinant of the two image
        // tangents.
        let mut rng = crate::rng::stratum_rng(99, 0);
        let e1: Vec<f64> = (0..4).map(|i| verts[1][i] - verts[0][i]).collect();
        let e2: Vec<f64> = (0..4).map(|i| verts[2][i] - verts[0][i]).collect();
        let source_area = chain.simplices()[0].volume();
        let h = 1e-6;
        let n_mc = 40_000;
        let mut acc = 0.0;
        for _ in 0..n_mc {
            let (mut a, mut b) = (rng.gen::<f64>(), rng.gen::<f64>());
            if a + b > 1.0 {
                a = 1.0 - a;
                b = 1.0 - b;
            }
            let x: Vec<f64> = (0..4)
                .map(|i| verts[0][i] + a * e1[i] + b * e2[i])
                .collect();
            let f0 = map.eval_full(&x);
            let step = |d: &[f64]| -> Vec<f64> {
                let xp: Vec<f64> = x.iter().zip(d).map(|(v, dv)| v + h * dv).collect();
                map.eval_full(&xp)
                    .iter()
                    .zip(&f0)
                    .map(|(p, q)| (p - q) / h)
                    .collect()
            };
            let t1 = step(&e1);
            let t2 = step(&e2);
            let g11: f64 = t1.iter().map(|v| v * v).sum();
            let g22: f64 = t2.iter().map(|v| v * v).sum();
            let g12: f64 = t1.iter().zip(&t2).map(|(u, v)| u * v).sum();
            // Tangents already carry the edge lengths; the
            // parallelogram-to-simplex factor 1/2 comes at the end.
            acc += (g11 * g22 - g12 * g12).max(0.0).sqrt();
        }
        let _ = source_area;
        let oracle = acc / n_mc as f64 / 2.0;
        assert!(
            (got.mass_estimate - oracle).abs() <= 0.02 * oracle,
            "pushforward {} vs oracle {}",
            got.mass_estimate,
            oracle
        );
    }

    #[test]
    fn diagonal_block_is_eps_independent() {
        let map = DiagonalExcisionMap::new(Prime::new(2).unwrap(), 1);
        let v = map.point_at_diag_dist(0.999, 4);
        let split = map.jacobian_split(&v).unwrap();
        for fd in &split.fd.diag_fd {
            assert!((fd - 1.0 / 2.0f64.sqrt()).abs() < 1e-6);
        }
    }
}
