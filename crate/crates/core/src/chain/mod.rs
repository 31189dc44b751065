//! Mod-p chains: 0-chains of weighted points and embedded simplicial
//! k-chains, with mass, boundary, products and canonical forms.
//!
//! Chains are kept canonical at all times: atoms merged (coefficients added
//! mod p), zero coefficients dropped, boundary-supported pieces removed in
//! relative flavor, entries sorted. All operations are pure.

mod product;
mod pushforward;
mod profile;

pub use product::{cartesian_product, zero_product};
pub use profile::{mass_concentration_profile, restricted_mass_segment, MassProfile, ProfileConfig};
pub use pushforward::{pushforward, AffineMap, PushforwardOptions, PushforwardResult, SmoothMap};

use crate::ambient::Ambient;
use crate::coeff::{Coeff, Prime};
use crate::scalar::{lex_cmp, norm_sq, Scalar};
use crate::tol;
use crate::{Error, Result};
use std::cmp::Ordering;

/// One weighted point of a 0-chain. The coefficient is a residue in
/// {1,..,p-1} once the chain is canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom<S> {
    pub x: Vec<S>,
    pub c: u64,
}

/// Finite formal sum of ambient points with Z_p coefficients.
#[derive(Debug, Clone)]
pub struct ZeroChain<S = f64> {
    pub ambient: Ambient,
    pub p: Prime,
    pub relative: bool,
    atoms: Vec<Atom<S>>,
}

impl<S: Scalar> ZeroChain<S> {
    pub fn new(
        ambient: Ambient,
        p: Prime,
        relative: bool,
        atoms: Vec<(Vec<S>, i64)>,
    ) -> Result<Self> {
        if relative && !ambient.has_boundary() {
            return Err(Error::AmbientMismatch(format!(
                "relative chain in boundaryless ambient {ambient:?}"
            )));
        }
        let mut raw = Vec::with_capacity(atoms.len());
        for (x, c) in atoms {
            if x.len() != ambient.coord_dim() {
                return Err(Error::AmbientMismatch(format!(
                    "atom has {} coordinates, expected {}",
                    x.len(),
                    ambient.coord_dim()
                )));
            }
            raw.push(Atom {
                x,
                c: p.residue(c),
            });
        }
        let mut chain = ZeroChain {
            ambient,
            p,
            relative,
            atoms: raw,
        };
        chain.canonicalize();
        Ok(chain)
    }

    pub fn empty(ambient: Ambient, p: Prime, relative: bool) -> Self {
        ZeroChain {
            ambient,
            p,
            relative,
            atoms: Vec::new(),
        }
    }

    pub fn atoms(&self) -> &[Atom<S>] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Sum of coefficient mass weights; every atom has unit 0-volume.
    pub fn mass(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| Coeff::new(a.c as i64, self.p).weight() as f64)
            .sum()
    }

    /// Sum of coefficients mod p. Zero for the cycles of a sphere that
    /// bound, and the connectivity condition on 0-cycles of spheres.
    pub fn coeff_sum(&self) -> u64 {
        self.atoms.iter().map(|a| a.c).sum::<u64>() % self.p.get()
    }

    /// Number of unit copies after coefficient expansion.
    pub fn unit_count(&self) -> usize {
        self.atoms.iter().map(|a| a.c as usize).sum()
    }

    pub fn add(&self, o: &ZeroChain<S>) -> Result<ZeroChain<S>> {
        self.ambient.require_same(&o.ambient)?;
        if self.p != o.p {
            return Err(Error::ModulusMismatch(self.p.get(), o.p.get()));
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(o.atoms.iter().cloned());
        let mut out = ZeroChain {
            ambient: self.ambient,
            p: self.p,
            relative: self.relative || o.relative,
            atoms,
        };
        out.canonicalize();
        Ok(out)
    }

    pub fn scale(&self, a: i64) -> ZeroChain<S> {
        let a = self.p.residue(a);
        let mut out = self.clone();
        for atom in &mut out.atoms {
            atom.c = (atom.c * a) % self.p.get();
        }
        out.canonicalize();
        out
    }

    pub fn neg(&self) -> ZeroChain<S> {
        self.scale(self.p.get() as i64 - 1)
    }

    pub fn sub(&self, o: &ZeroChain<S>) -> Result<ZeroChain<S>> {
        self.add(&o.neg())
    }

    /// Chain equality after canonicalization (exact for exact scalars,
    /// tolerance `TAU_MERGE` for floats).
    pub fn chain_eq(&self, o: &ZeroChain<S>) -> bool {
        self.atoms.len() == o.atoms.len()
            && self
                .atoms
                .iter()
                .zip(&o.atoms)
                .all(|(a, b)| a.c == b.c && S::points_coincide(&a.x, &b.x, tol::TAU_MERGE))
    }

    pub fn to_f64(&self) -> ZeroChain<f64> {
        ZeroChain {
            ambient: self.ambient,
            p: self.p,
            relative: self.relative,
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    x: a.x.iter().map(|v| v.to_f64()).collect(),
                    c: a.c,
                })
                .collect(),
        }
    }

    fn canonicalize(&mut self) {
        let p = self.p.get();
        self.atoms.retain(|a| a.c % p != 0);
        // Sort first so coincident points sit next to each other, then
        // sweep a tolerance window over the leading coordinate.
        self.atoms.sort_by(|a, b| lex_cmp(&a.x, &b.x));
        let mut merged: Vec<Atom<S>> = Vec::with_capacity(self.atoms.len());
        for atom in self.atoms.drain(..) {
            let mut absorbed = false;
            for prev in merged.iter_mut().rev() {
                let lead_gap = prev.x[0].to_f64() - atom.x[0].to_f64();
                if lead_gap.abs() > tol::TAU_MERGE {
                    break;
                }
                if S::points_coincide(&prev.x, &atom.x, tol::TAU_MERGE) {
                    prev.c = (prev.c + atom.c) % p;
                    absorbed = true;
                    break;
                }
            }
            if !absorbed {
                merged.push(atom);
            }
        }
        merged.retain(|a| a.c != 0);
        if self.relative {
            let amb = self.ambient;
            merged.retain(|a| {
                let n2 = norm_sq(&a.x).to_f64();
                !(amb.has_boundary() && n2 >= (1.0 - tol::TAU_AMB) * (1.0 - tol::TAU_AMB))
            });
        }
        self.atoms = merged;
    }
}

/// One oriented embedded k-simplex with its coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    pub verts: Vec<Vec<f64>>,
    pub c: u64,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.verts.len() - 1
    }

    /// Flat k-volume from the Gram determinant of edge vectors.
    pub fn volume(&self) -> f64 {
        let k = self.dim();
        if k == 0 {
            return 1.0;
        }
        let d = self.verts[0].len();
        let mut gram = vec![vec![0.0; k]; k];
        let edges: Vec<Vec<f64>> = (1..=k)
            .map(|i| {
                (0..d)
                    .map(|j| self.verts[i][j] - self.verts[0][j])
                    .collect()
            })
            .collect();
        for i in 0..k {
            for j in 0..k {
                gram[i][j] = edges[i].iter().zip(&edges[j]).map(|(a, b)| a * b).sum();
            }
        }
        let det = det_small(&gram);
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        det.max(0.0).sqrt() / fact
    }

    pub fn barycenter(&self) -> Vec<f64> {
        let d = self.verts[0].len();
        let mut out = vec![0.0; d];
        for v in &self.verts {
            for (o, x) in out.iter_mut().zip(v) {
                *o += x;
            }
        }
        for o in &mut out {
            *o /= self.verts.len() as f64;
        }
        out
    }
}

fn det_small(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[piv][col].abs() < 1e-300 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    det
}

/// Finite formal sum of oriented embedded k-simplices with Z_p
/// coefficients in R^d.
#[derive(Debug, Clone)]
pub struct SimplicialChain {
    pub ambient: Ambient,
    pub p: Prime,
    pub relative: bool,
    pub dim: usize,
    simplices: Vec<Simplex>,
}

impl SimplicialChain {
    pub fn new(
        ambient: Ambient,
        p: Prime,
        relative: bool,
        dim: usize,
        simplices: Vec<(Vec<Vec<f64>>, i64)>,
    ) -> Result<Self> {
        if relative && !ambient.has_boundary() {
            return Err(Error::AmbientMismatch(format!(
                "relative chain in boundaryless ambient {ambient:?}"
            )));
        }
        let mut raw = Vec::with_capacity(simplices.len());
        for (verts, c) in simplices {
            if verts.len() != dim + 1 {
                return Err(Error::InvalidChain(format!(
                    "{}-simplex given for a chain of dimension {dim}",
                    verts.len() as i64 - 1
                )));
            }
            for v in &verts {
                ambient.validate_point(v, tol::TAU_AMB)?;
            }
            let s = Simplex {
                verts,
                c: p.residue(c),
            };
            if s.c != 0 && dim > 0 && s.volume() <= tol::TAU_VOL {
                return Err(Error::DegenerateSimplex(format!(
                    "{dim}-volume {:.3e} below floor",
                    s.volume()
                )));
            }
            raw.push(s);
        }
        let mut chain = SimplicialChain {
            ambient,
            p,
            relative,
            dim,
            simplices: raw,
        };
        chain.canonicalize();
        Ok(chain)
    }

    pub fn empty(ambient: Ambient, p: Prime, relative: bool, dim: usize) -> Self {
        SimplicialChain {
            ambient,
            p,
            relative,
            dim,
            simplices: Vec::new(),
        }
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn is_zero(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Mass: coefficient weights times k-volumes. 1-chains on a sphere
    /// ambient use geodesic length; everything else is flat.
    pub fn mass(&self) -> f64 {
        self.simplices
            .iter()
            .map(|s| {
                let w = Coeff::new(s.c as i64, self.p).weight() as f64;
                let vol = match (self.ambient, self.dim) {
                    (Ambient::Sphere { .. }, 1) => {
                        self.ambient.dist(&s.verts[0], &s.verts[1])
                    }
                    _ => s.volume(),
                };
                w * vol
            })
            .sum()
    }

    /// Alternating-face boundary; shared faces cancel mod p. In relative
    /// flavor, faces supported in the boundary region are dropped.
    pub fn boundary(&self) -> Result<SimplicialChain> {
        if self.dim == 0 {
            return Err(Error::InvalidChain(
                "boundary of a 0-chain is undefined".into(),
            ));
        }
        let p = self.p.get();
        let mut faces = Vec::new();
        for s in &self.simplices {
            for j in 0..=self.dim {
                let mut verts = s.verts.clone();
                verts.remove(j);
                // (-1)^j as a residue: even j keeps c, odd j negates.
                let c = if j % 2 == 0 { s.c } else { (p - s.c) % p };
                faces.push(Simplex { verts, c });
            }
        }
        let mut out = SimplicialChain {
            ambient: self.ambient,
            p: self.p,
            relative: self.relative,
            dim: self.dim - 1,
            simplices: faces,
        };
        out.canonicalize();
        Ok(out)
    }

    /// View a 0-dimensional chain as a 0-chain of weighted points.
    pub fn as_zero_chain(&self) -> Result<ZeroChain<f64>> {
        if self.dim != 0 {
            return Err(Error::InvalidChain(format!(
                "chain has dimension {}, not 0",
                self.dim
            )));
        }
        ZeroChain::new(
            self.ambient,
            self.p,
            self.relative,
            self.simplices
                .iter()
                .map(|s| (s.verts[0].clone(), s.c as i64))
                .collect(),
        )
    }

    pub fn add(&self, o: &SimplicialChain) -> Result<SimplicialChain> {
        self.ambient.require_same(&o.ambient)?;
        if self.p != o.p {
            return Err(Error::ModulusMismatch(self.p.get(), o.p.get()));
        }
        if self.dim != o.dim && !self.is_zero() && !o.is_zero() {
            return Err(Error::InvalidChain(format!(
                "dimension mismatch {} vs {}",
                self.dim, o.dim
            )));
        }
        let mut simplices = self.simplices.clone();
        simplices.extend(o.simplices.iter().cloned());
        let mut out = SimplicialChain {
            ambient: self.ambient,
            p: self.p,
            relative: self.relative || o.relative,
            dim: if self.is_zero() { o.dim } else { self.dim },
            simplices,
        };
        out.canonicalize();
        Ok(out)
    }

    pub fn scale(&self, a: i64) -> SimplicialChain {
        let a = self.p.residue(a);
        let mut out = self.clone();
        for s in &mut out.simplices {
            s.c = (s.c * a) % self.p.get();
        }
        out.canonicalize();
        out
    }

    pub fn neg(&self) -> SimplicialChain {
        self.scale(self.p.get() as i64 - 1)
    }

    pub fn sub(&self, o: &SimplicialChain) -> Result<SimplicialChain> {
        self.add(&o.neg())
    }

    pub fn chain_eq(&self, o: &SimplicialChain) -> bool {
        self.simplices.len() == o.simplices.len()
            && self.simplices.iter().zip(&o.simplices).all(|(a, b)| {
                a.c == b.c
                    && a.verts.len() == b.verts.len()
                    && a
                        .verts
                        .iter()
                        .zip(&b.verts)
                        .all(|(u, v)| f64::points_coincide(u, v, tol::TAU_MERGE))
            })
    }

    /// Monte Carlo check that pairwise interiors overlap in k-volume
    /// below `TAU_OVERLAP`. Returns the largest estimated pair overlap.
    pub fn check_nonoverlapping(&self, samples: usize, seed: u64) -> Result<f64> {
        if self.dim == 0 {
            return Ok(0.0);
        }
        let mut worst: f64 = 0.0;
        for (i, a) in self.simplices.iter().enumerate() {
            for b in self.simplices.iter().skip(i + 1) {
                let mut rng = crate::rng::stratum_rng(seed, i as u64);
                let mut hits = 0usize;
                for _ in 0..samples {
                    let pt = sample_simplex(a, &mut rng);
                    if point_in_simplex(&pt, b, 1e-9) {
                        hits += 1;
                    }
                }
                let overlap = a.volume() * hits as f64 / samples as f64;
                worst = worst.max(overlap);
            }
        }
        if worst >= tol::TAU_OVERLAP {
            return Err(Error::InvalidChain(format!(
                "simplices overlap with estimated volume {worst:.3e}"
            )));
        }
        Ok(worst)
    }

    fn canonicalize(&mut self) {
        let p = self.p.get();
        let mut canon: Vec<Simplex> = Vec::with_capacity(self.simplices.len());
        for s in self.simplices.drain(..) {
            if s.c % p == 0 {
                continue;
            }
            let (verts, parity) = sort_tracking_parity(s.verts);
            let c = if parity { (p - s.c) % p } else { s.c };
            canon.push(Simplex { verts, c });
        }
        canon.sort_by(|a, b| {
            for (u, v) in a.verts.iter().zip(&b.verts) {
                match lex_cmp(u, v) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        });
        // Tolerance-window merge: identical simplices can be separated
        // in the sort by one-ulp jitter of the leading coordinate, so
        // scan back while the leading sort key stays within tolerance.
        let mut merged: Vec<Simplex> = Vec::with_capacity(canon.len());
        for s in canon {
            let mut absorbed = false;
            for prev in merged.iter_mut().rev() {
                let lead_gap = prev.verts[0][0] - s.verts[0][0];
                if lead_gap.abs() > tol::TAU_MERGE {
                    break;
                }
                let same = prev.verts.len() == s.verts.len()
                    && prev
                        .verts
                        .iter()
                        .zip(&s.verts)
                        .all(|(u, v)| f64::points_coincide(u, v, tol::TAU_MERGE));
                if same {
                    prev.c = (prev.c + s.c) % p;
                    absorbed = true;
                    break;
                }
            }
            if !absorbed {
                merged.push(s);
            }
        }
        merged.retain(|s| s.c != 0 && (s.dim() == 0 || s.volume() > tol::TAU_VOL));
        if self.relative {
            let amb = self.ambient;
            merged.retain(|s| !s.verts.iter().all(|v| amb.on_boundary(v, tol::TAU_AMB)));
        }
        self.simplices = merged;
    }
}

/// Sort a vertex tuple lexicographically; report whether the permutation
/// was odd (coefficient must then be negated).
fn sort_tracking_parity(mut verts: Vec<Vec<f64>>) -> (Vec<Vec<f64>>, bool) {
    let mut parity = false;
    // Insertion sort: tuples are tiny and we need the exact swap parity.
    for i in 1..verts.len() {
        let mut j = i;
        while j > 0 && lex_cmp(&verts[j], &verts[j - 1]) == Ordering::Less {
            verts.swap(j, j - 1);
            parity = !parity;
            j -= 1;
        }
    }
    (verts, parity)
}

/// Uniform sample from a simplex (Dirichlet weights).
pub(crate) fn sample_simplex<R: rand::Rng>(s: &Simplex, rng: &mut R) -> Vec<f64> {
    let k1 = s.verts.len();
    let mut w: Vec<f64> = (0..k1).map(|_| -(rng.gen::<f64>().max(1e-300)).ln()).collect();
    let tot: f64 = w.iter().sum();
    for x in &mut w {
        *x /= tot;
    }
    let d = s.verts[0].len();
    let mut out = vec![0.0; d];
    for (wi, v) in w.iter().zip(&s.verts) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += wi * x;
        }
    }
    out
}

/// Least-squares barycentric membership test for lower-dimensional
/// simplices embedded in R^d.
pub(crate) fn point_in_simplex(pt: &[f64], s: &Simplex, tolerance: f64) -> bool {
    use nalgebra::{DMatrix, DVector};
    let k = s.dim();
    let d = pt.len();
    if k == 0 {
        return f64::points_coincide(pt, &s.verts[0], tolerance);
    }
    let a = DMatrix::from_fn(d, k, |i, j| s.verts[j + 1][i] - s.verts[0][i]);
    let b = DVector::from_fn(d, |i, _| pt[i] - s.verts[0][i]);
    let svd = a.clone().svd(true, true);
    if let Ok(lambda) = svd.solve(&b, 1e-12) {
        let residual = (&a * &lambda - &b).norm();
        let sum: f64 = lambda.iter().sum();
        residual <= tolerance
            && lambda.iter().all(|&l| l >= -1e-9)
            && sum <= 1.0 + 1e-9
    } else {
        false
    }
}
