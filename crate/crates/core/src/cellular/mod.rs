//! Exact cellular chain complexes over Z, Z_p and Z_{p^2}: lens-space
//! and mapping-cone complexes, Smith-normal-form homology, the snake
//! Bockstein on cochains, and the winding bridge that evaluates the
//! geometric Bockstein family against the algebra.

mod snf;
mod sweep;

pub use snf::{smith_normal_form, SmithForm};
pub use sweep::{bg_sweep_family, evaluate_family_class, SweepFamily, SweepReport};

use crate::coeff::Prime;
use crate::{Error, Result};
use num::BigInt;

/// A finite cellular chain complex with explicit integer boundary
/// matrices. `boundary[k]` maps k-chains to (k-1)-chains and has shape
/// `cells[k-1]` x `cells[k]`.
#[derive(Debug, Clone)]
pub struct CellComplexZp {
    pub cells: Vec<usize>,
    pub boundary: Vec<Vec<Vec<BigInt>>>,
}

/// Integral homology in one degree: free rank plus torsion divisors.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralHomology {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl CellComplexZp {
    pub fn new(cells: Vec<usize>, boundary: Vec<Vec<Vec<BigInt>>>) -> Result<Self> {
        if boundary.len() != cells.len() {
            return Err(Error::InvalidChain(
                "need one boundary matrix per dimension (the 0th is empty)".into(),
            ));
        }
        for k in 1..cells.len() {
            let rows = if k == 0 { 0 } else { cells[k - 1] };
            if boundary[k].len() != rows
                || boundary[k].iter().any(|r| r.len() != cells[k])
            {
                return Err(Error::InvalidChain(format!(
                    "boundary matrix in degree {k} has the wrong shape"
                )));
            }
        }
        let cx = CellComplexZp { cells, boundary };
        cx.check_dd_zero()?;
        Ok(cx)
    }

    pub fn top_dim(&self) -> usize {
        self.cells.len() - 1
    }

    fn check_dd_zero(&self) -> Result<()> {
        for k in 2..self.cells.len() {
            let a = &self.boundary[k - 1];
            let b = &self.boundary[k];
            for i in 0..self.cells[k - 2] {
                for j in 0..self.cells[k] {
                    let mut acc = BigInt::from(0);
                    for m in 0..self.cells[k - 1] {
                        acc += &a[i][m] * &b[m][j];
                    }
                    if acc != BigInt::from(0) {
                        return Err(Error::InvalidChain(format!(
                            "dd != 0 between degrees {k} and {}",
                            k - 2
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Integral homology by Smith normal form.
    pub fn homology_z(&self, k: usize) -> IntegralHomology {
        let rank_dk = if k == 0 || k >= self.cells.len() {
            0
        } else {
            smith_normal_form(&self.boundary[k]).rank()
        };
        let (rank_dk1, torsion) = if k + 1 < self.cells.len() {
            let snf = smith_normal_form(&self.boundary[k + 1]);
            let tors = snf
                .diagonal
                .iter()
                .filter(|d| **d > BigInt::from(1))
                .cloned()
                .collect();
            (snf.rank(), tors)
        } else {
            (0, Vec::new())
        };
        let cells = if k < self.cells.len() { self.cells[k] } else { 0 };
        IntegralHomology {
            rank: cells - rank_dk - rank_dk1,
            torsion,
        }
    }

    /// Dimension of H_k with Z_p coefficients (Gaussian elimination over
    /// the field; an independent route from the Smith form).
    pub fn homology_dim_zp(&self, k: usize, p: Prime) -> usize {
        let cells = if k < self.cells.len() { self.cells[k] } else { return 0 };
        let rank_dk = if k == 0 {
            0
        } else {
            rank_mod_p(&self.boundary[k], p)
        };
        let rank_dk1 = if k + 1 < self.cells.len() {
            rank_mod_p(&self.boundary[k + 1], p)
        } else {
            0
        };
        cells - rank_dk - rank_dk1
    }

    /// Dimension of H^k with Z_p coefficients (equal to homology over a
    /// field, computed on the transposed matrices as a cross-check).
    pub fn cohomology_dim_zp(&self, k: usize, p: Prime) -> usize {
        let cells = if k < self.cells.len() { self.cells[k] } else { return 0 };
        let rank_delta_k = if k + 1 < self.cells.len() {
            rank_mod_p(&transpose(&self.boundary[k + 1]), p)
        } else {
            0
        };
        let rank_delta_km1 = if k == 0 {
            0
        } else {
            rank_mod_p(&transpose(&self.boundary[k]), p)
        };
        cells - rank_delta_k - rank_delta_km1
    }

    /// Coboundary of a degree-k cochain over Z (entries as i64 lifts).
    pub fn coboundary(&self, k: usize, psi: &[i64]) -> Result<Vec<i64>> {
        if k + 1 >= self.cells.len() {
            return Ok(vec![0; 0]);
        }
        if psi.len() != self.cells[k] {
            return Err(Error::InvalidChain(format!(
                "cochain has {} entries, degree {k} has {} cells",
                psi.len(),
                self.cells[k]
            )));
        }
        let d = &self.boundary[k + 1];
        let mut out = vec![0i64; self.cells[k + 1]];
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = BigInt::from(0);
            for i in 0..self.cells[k] {
                acc += &d[i][j] * BigInt::from(psi[i]);
            }
            *o = i64::try_from(acc).map_err(|_| {
                Error::BudgetExceeded("coboundary entry exceeds i64".into())
            })?;
        }
        Ok(out)
    }

    /// The snake-lemma Bockstein on a mod-p cocycle in degree k: lift to
    /// Z_{p^2}, take the coboundary, divide by p, reduce mod p. The
    /// result is independent of the lift up to coboundary, which
    /// `bockstein_snake` verifies with a second randomized lift.
    pub fn bockstein_snake(
        &self,
        k: usize,
        psi: &[u64],
        p: Prime,
        lift_seed: Option<u64>,
    ) -> Result<Vec<u64>> {
        let pv = p.get() as i64;
        let lift: Vec<i64> = match lift_seed {
            None => psi.iter().map(|&v| v as i64).collect(),
            Some(seed) => {
                use rand::Rng;
                let mut rng = crate::rng::stratum_rng(seed, 0xB0C);
                psi.iter()
                    .map(|&v| v as i64 + pv * rng.gen_range(0..pv))
                    .collect()
            }
        };
        let delta = self.coboundary(k, &lift)?;
        // delta psi = 0 mod p is required for the division to be exact.
        if delta.iter().any(|&e| e % pv != 0) {
            return Err(Error::InvalidChain(
                "input cochain is not a cocycle mod p".into(),
            ));
        }
        let p2 = pv * pv;
        Ok(delta
            .iter()
            .map(|&e| ((e.rem_euclid(p2)) / pv) as u64 % p.get())
            .collect())
    }

    /// Whether two degree-k mod-p cocycles are cohomologous: solve
    /// delta phi = a - b over GF(p).
    pub fn cohomologous(&self, k: usize, a: &[u64], b: &[u64], p: Prime) -> bool {
        if k == 0 {
            return a.iter().zip(b).all(|(x, y)| x % p.get() == y % p.get());
        }
        let delta_t = transpose(&self.boundary[k]);
        // delta: C^{k-1} -> C^k has matrix boundary[k]^T.
        let rows = self.cells[k];
        let cols = self.cells[k - 1];
        let mut aug: Vec<Vec<u64>> = Vec::with_capacity(rows);
        let pv = p.get();
        for i in 0..rows {
            let mut row: Vec<u64> = (0..cols)
                .map(|j| (&delta_t[i][j] % BigInt::from(pv)).try_into().map(|v: i64| v.rem_euclid(pv as i64) as u64).unwrap_or(0))
                .collect();
            let rhs = (a[i] + pv - b[i] % pv) % pv;
            row.push(rhs);
            aug.push(row);
        }
        solve_mod_p(&mut aug, cols, pv)
    }
}

fn transpose(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if m.is_empty() {
        return Vec::new();
    }
    let rows = m.len();
    let cols = m[0].len();
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].clone()).collect())
        .collect()
}

fn rank_mod_p(m: &[Vec<BigInt>], p: Prime) -> usize {
    let pv = p.get();
    if m.is_empty() || m[0].is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let r: BigInt = &m[i][j] % BigInt::from(pv);
                    let v: i64 = r.try_into().unwrap_or(0);
                    v.rem_euclid(pv as i64) as u64
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let piv = (rank..rows).find(|&i| !a[i][col].is_multiple_of(pv));
        let Some(piv) = piv else { continue };
        a.swap(rank, piv);
        let inv = mod_inv(a[rank][col] % pv, pv);
        for j in col..cols {
            a[rank][j] = a[rank][j] % pv * inv % pv;
        }
        for i in 0..rows {
            if i != rank && !a[i][col].is_multiple_of(pv) {
                let f = a[i][col] % pv;
                for j in col..cols {
                    a[i][j] = (a[i][j] + (pv - f) * a[rank][j]) % pv;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Gaussian solve of [A | b] over GF(p); returns solvability.
fn solve_mod_p(aug: &mut [Vec<u64>], cols: usize, p: u64) -> bool {
    let rows = aug.len();
    let mut rank = 0;
    for col in 0..cols {
        let piv = (rank..rows).find(|&i| !aug[i][col].is_multiple_of(p));
        let Some(piv) = piv else { continue };
        aug.swap(rank, piv);
        let inv = mod_inv(aug[rank][col] % p, p);
        for j in col..=cols {
            aug[rank][j] = aug[rank][j] % p * inv % p;
        }
        for i in 0..rows {
            if i != rank && !aug[i][col].is_multiple_of(p) {
                let f = aug[i][col] % p;
                for j in col..=cols {
                    aug[i][j] = (aug[i][j] + (p - f) * aug[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    // Consistent iff no row reads 0 = nonzero.
    for row in aug.iter() {
        if row[..cols].iter().all(|&v| v % p == 0) && row[cols] % p != 0 {
            return false;
        }
    }
    true
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// The standard lens-space complex: one cell per dimension, boundaries
/// alternating 0, multiplication by p, starting with d_1 = 0.
pub fn lens_complex(p: Prime, top_dim: usize) -> Result<CellComplexZp> {
    if top_dim < 1 {
        return Err(Error::InvalidChain("top dimension must be >= 1".into()));
    }
    let cells = vec![1usize; top_dim + 1];
    let mut boundary: Vec<Vec<Vec<BigInt>>> = vec![Vec::new()];
    for k in 1..=top_dim {
        let entry = if k % 2 == 0 {
            BigInt::from(p.get())
        } else {
            BigInt::from(0)
        };
        boundary.push(vec![vec![entry]]);
    }
    CellComplexZp::new(cells, boundary)
}

/// Mapping cone of the degree-p self-map of the circle: cells e0, e1,
/// e2 with d(e2) = p e1 and d(e1) = 0. For p = 2 this is the projective
/// plane.
pub fn mapping_cone_degree_p(p: Prime) -> CellComplexZp {
    CellComplexZp::new(
        vec![1, 1, 1],
        vec![
            Vec::new(),
            vec![vec![BigInt::from(0)]],
            vec![vec![BigInt::from(p.get())]],
        ],
    )
    .expect("static complex")
}
