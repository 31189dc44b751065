//! The barycentric Bockstein representative and the cyclic product map
//! on 0-cycles: expand the input into unit points, enumerate cyclic
//! orbits of index tuples, and emit one barycenter per orbit. The cyclic
//! product additionally carries the lens coordinate of each orbit;
//! projecting it away recovers the Bockstein output.

mod series;

pub use series::{cyc_poly_mass_series, equatorial_polygon, CauchyFit, DiagonalExcisionSeries, SeriesOptions};

use crate::ambient::Ambient;
use crate::chain::ZeroChain;
use crate::fourier::{orbit_enumerate, DiagonalExcisionMap, LensOrbit};
use crate::scalar::{barycenter, lex_cmp, norm_sq, Scalar};
use crate::tol;
use crate::{Error, Result};
use nalgebra::DVector;

/// Memory guard: coefficient expansion stops here.
pub const UNIT_CAP: usize = 40;

#[derive(Debug, Clone)]
pub struct BocksteinOutput<S> {
    /// Relative 0-chain in the disk one dimension up.
    pub chain: ZeroChain<S>,
    /// Set when the input coefficients do not sum to zero mod p (the
    /// connectivity condition on 0-cycles of spheres).
    pub cycle_warning: bool,
}

fn expand_units<S: Scalar>(t: &ZeroChain<S>) -> Result<Vec<Vec<S>>> {
    let mut units = Vec::new();
    for atom in t.atoms() {
        for _ in 0..atom.c {
            units.push(atom.x.clone());
        }
    }
    if units.len() > UNIT_CAP {
        return Err(Error::CapExceeded {
            units: units.len(),
            cap: UNIT_CAP,
            hint: " (coefficient expansion before orbit enumeration)".into(),
        });
    }
    Ok(units)
}

fn require_sphere<S: Scalar>(t: &ZeroChain<S>) -> Result<usize> {
    match t.ambient {
        Ambient::Sphere { dim } => Ok(dim),
        other => Err(Error::AmbientMismatch(format!(
            "input must live on a sphere, got {other:?}"
        ))),
    }
}

/// The Bockstein representative: one barycenter per cyclic orbit of
/// p-tuples of unit points, with constant orbits vanishing on the
/// boundary of the disk.
pub fn bockstein_b<S: Scalar>(t: &ZeroChain<S>) -> Result<BocksteinOutput<S>> {
    let n = require_sphere(t)?;
    let p = t.p;
    let cycle_warning = t.coeff_sum() != 0;
    let disk = Ambient::Disk { dim: n + 1 };
    let units = expand_units(t)?;
    if units.is_empty() {
        return Ok(BocksteinOutput {
            chain: ZeroChain::empty(disk, p, true),
            cycle_warning,
        });
    }
    let orbits = orbit_enumerate(units.len(), p)?;
    let mut atoms = Vec::new();
    for orbit in &orbits {
        let pts: Vec<&[S]> = orbit
            .rep
            .iter()
            .map(|&i| units[(i - 1) as usize].as_slice())
            .collect();
        atoms.push((barycenter(&pts), 1i64));
    }
    // Constant orbits land on the sphere itself and vanish under the
    // relative canonicalization of the disk chain.
    let chain = ZeroChain::new(disk, p, true, atoms)?;
    Ok(BocksteinOutput {
        chain,
        cycle_warning,
    })
}

/// Lens coordinate of one cyclic-product atom.
#[derive(Debug, Clone)]
pub enum LensComponent<S> {
    /// p = 2: the unoriented line spanned by x - y, canonically signed;
    /// exactly representable for rational inputs.
    Direction(Vec<S>),
    /// General p: canonicalized sphere-orbit representative.
    Orbit(LensOrbit),
}

impl<S: Scalar> LensComponent<S> {
    pub fn matches(&self, o: &LensComponent<S>, tol: f64) -> bool {
        match (self, o) {
            (LensComponent::Direction(a), LensComponent::Direction(b)) => {
                S::points_coincide(a, b, tol)
            }
            (LensComponent::Orbit(a), LensComponent::Orbit(b)) => a.same_orbit(b, tol),
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CycAtom<S> {
    pub lens: LensComponent<S>,
    pub disk: Vec<S>,
    pub c: u64,
}

/// Image of a 0-cycle under the cyclic product map: finitely many
/// (lens point, disk point) atoms, relative to the disk boundary.
#[derive(Debug, Clone)]
pub struct CycOutput0<S> {
    pub p: crate::coeff::Prime,
    pub n: usize,
    pub atoms: Vec<CycAtom<S>>,
    pub cycle_warning: bool,
}

impl<S: Scalar> CycOutput0<S> {
    /// Projection onto the disk factor, as a relative 0-chain.
    pub fn disk_projection(&self) -> Result<ZeroChain<S>> {
        ZeroChain::new(
            Ambient::Disk { dim: self.n + 1 },
            self.p,
            true,
            self.atoms
                .iter()
                .map(|a| (a.disk.clone(), a.c as i64))
                .collect(),
        )
    }
}

/// The cyclic product of a 0-cycle: one atom per non-constant orbit,
/// carrying the lens coordinate of the orbit and its barycenter.
pub fn cyc_0<S: Scalar>(t: &ZeroChain<S>) -> Result<CycOutput0<S>> {
    let n = require_sphere(t)?;
    let p = t.p;
    let cycle_warning = t.coeff_sum() != 0;
    let units = expand_units(t)?;
    if units.is_empty() {
        return Ok(CycOutput0 {
            p,
            n,
            atoms: Vec::new(),
            cycle_warning,
        });
    }
    let orbits = orbit_enumerate(units.len(), p)?;
    let excision = if p.get() > 2 {
        Some(DiagonalExcisionMap::new(p, n))
    } else {
        None
    };
    let mut atoms: Vec<CycAtom<S>> = Vec::new();
    for orbit in &orbits {
        if orbit.constant {
            continue;
        }
        let pts: Vec<&[S]> = orbit
            .rep
            .iter()
            .map(|&i| units[(i - 1) as usize].as_slice())
            .collect();
        let disk = barycenter(&pts);
        // Points of the sphere may coincide even when indices differ;
        // such tuples sit on the geometric diagonal and vanish like the
        // constant orbits.
        let geometric_diagonal = pts
            .windows(2)
            .all(|w| S::points_coincide(w[0], w[1], tol::TAU_MERGE));
        if geometric_diagonal {
            continue;
        }
        let lens = match &excision {
            None => {
                let d: Vec<S> = pts[0]
                    .iter()
                    .zip(pts[1].iter())
                    .map(|(a, b)| a.sub(b))
                    .collect();
                LensComponent::Direction(S::canonical_direction(&d))
            }
            Some(map) => {
                let mut coords = Vec::with_capacity(map.in_dim());
                for pt in &pts {
                    coords.extend(pt.iter().map(|v| v.to_f64()));
                }
                let (lens_vec, _) = map.f_map(&coords)?;
                LensComponent::Orbit(LensOrbit::new(map, &DVector::from_column_slice(
                    lens_vec.as_slice(),
                )))
            }
        };
        merge_atom(&mut atoms, CycAtom { lens, disk, c: 1 }, p.get());
    }
    atoms.retain(|a| a.c != 0 && norm_sq(&a.disk).to_f64() < (1.0 - tol::TAU_AMB).powi(2));
    atoms.sort_by(|a, b| lex_cmp(&a.disk, &b.disk));
    Ok(CycOutput0 {
        p,
        n,
        atoms,
        cycle_warning,
    })
}

fn merge_atom<S: Scalar>(atoms: &mut Vec<CycAtom<S>>, atom: CycAtom<S>, p: u64) {
    for existing in atoms.iter_mut() {
        if S::points_coincide(&existing.disk, &atom.disk, tol::TAU_MERGE)
            && existing.lens.matches(&atom.lens, 1e-9)
        {
            existing.c = (existing.c + atom.c) % p;
            return;
        }
    }
    atoms.push(atom);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Prime;
    use num::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    /// Four generic rational points on the unit circle.
    fn generic_four() -> ZeroChain<BigRational> {
        ZeroChain::new(
            Ambient::Sphere { dim: 1 },
            p(2),
            false,
            vec![
                (vec![rat(1, 1), rat(0, 1)], 1),
                (vec![rat(3, 5), rat(4, 5)], 1),
                (vec![rat(-1, 1), rat(0, 1)], 1),
                (vec![rat(-4, 5), rat(-3, 5)], 1),
            ],
        )
        .unwrap()
    }

    /// The axis-aligned square inscribed in the circle.
    fn square() -> ZeroChain<BigRational> {
        ZeroChain::new(
            Ambient::Sphere { dim: 1 },
            p(2),
            false,
            vec![
                (vec![rat(1, 1), rat(0, 1)], 1),
                (vec![rat(0, 1), rat(1, 1)], 1),
                (vec![rat(-1, 1), rat(0, 1)], 1),
                (vec![rat(0, 1), rat(-1, 1)], 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn generic_four_points_give_six_midpoints() {
        let out = bockstein_b(&generic_four()).unwrap();
        assert!(!out.cycle_warning);
        assert_eq!(out.chain.atoms().len(), 6);
        assert!(out.chain.atoms().iter().all(|a| a.c == 1));
    }

    #[test]
    fn square_diagonal_midpoints_cancel_mod_two() {
        // Both diagonals of the inscribed square have barycenter at the
        // origin; 1 + 1 = 0 mod 2, so only four midpoints survive.
        let out = bockstein_b(&square()).unwrap();
        assert_eq!(out.chain.atoms().len(), 4);
    }

    #[test]
    fn triangle_mod_three_trisections_and_double_barycenter() {
        let t = ZeroChain::new(
            Ambient::Sphere { dim: 1 },
            p(3),
            false,
            vec![
                (vec![rat(1, 1), rat(0, 1)], 1),
                (vec![rat(-3, 5), rat(4, 5)], 1),
                (vec![rat(-3, 5), rat(-4, 5)], 1),
            ],
        )
        .unwrap();
        let out = bockstein_b(&t).unwrap();
        let atoms = out.chain.atoms();
        assert_eq!(atoms.len(), 7);
        let center = vec![rat(-1, 15), rat(0, 1)];
        let mut doubles = 0;
        for a in atoms {
            if a.x == center {
                assert_eq!(a.c, 2);
                doubles += 1;
            } else {
                assert_eq!(a.c, 1);
            }
        }
        assert_eq!(doubles, 1);
    }

    #[test]
    fn empty_input_maps_to_zero() {
        let z = ZeroChain::<f64>::empty(Ambient::Sphere { dim: 1 }, p(3), false);
        assert!(bockstein_b(&z).unwrap().chain.is_zero());
    }

    #[test]
    fn single_point_cyc_vanishes() {
        let t = ZeroChain::new(
            Ambient::Sphere { dim: 1 },
            p(2),
            false,
            vec![(vec![1.0, 0.0], 1)],
        )
        .unwrap();
        let out = cyc_0(&t).unwrap();
        assert!(out.atoms.is_empty());
    }

    #[test]
    fn square_cyc_retains_diagonal_atoms_and_projects_to_bockstein() {
        let sq = square();
        let out = cyc_0(&sq).unwrap();
        // Six unordered pairs; the two diagonals share the origin as
        // barycenter but differ in line direction, so both survive.
        assert_eq!(out.atoms.len(), 6);
        let origin = vec![rat(0, 1), rat(0, 1)];
        let at_origin: Vec<_> = out
            .atoms
            .iter()
            .filter(|a| a.disk == origin)
            .collect();
        assert_eq!(at_origin.len(), 2);
        // Projection onto the disk factor merges them away: equals b.
        let proj = out.disk_projection().unwrap();
        let b = bockstein_b(&sq).unwrap();
        assert!(proj.chain_eq(&b.chain));
    }

    #[test]
    fn cyc_directions_are_pair_differences() {
        let sq = square();
        let out = cyc_0(&sq).unwrap();
        let expect = BigRational::canonical_direction(&[rat(1, 1), rat(-1, 1)]);
        assert!(out.atoms.iter().any(|a| match &a.lens {
            LensComponent::Direction(d) => *d == expect,
            _ => false,
        }));
    }

    #[test]
    fn permutation_invariance() {
        let a = generic_four();
        let mut atoms: Vec<(Vec<BigRational>, i64)> = a
            .atoms()
            .iter()
            .map(|at| (at.x.clone(), at.c as i64))
            .collect();
        atoms.reverse();
        let b = ZeroChain::new(Ambient::Sphere { dim: 1 }, p(2), false, atoms).unwrap();
        let ba = bockstein_b(&a).unwrap().chain;
        let bb = bockstein_b(&b).unwrap().chain;
        assert!(ba.chain_eq(&bb));
    }

    #[test]
    fn p3_cyc_projection_recovers_bockstein() {
        let t = ZeroChain::new(
            Ambient::Sphere { dim: 1 },
            p(3),
            false,
            vec![
                (vec![1.0, 0.0], 1),
                (vec![-0.6, 0.8], 1),
                (vec![-0.6, -0.8], 1),
            ],
        )
        .unwrap();
        let out = cyc_0(&t).unwrap();
        let proj = out.disk_projection().unwrap();
        let b = bockstein_b(&t).unwrap().chain;
        assert!(proj.chain_eq(&b));
    }

    #[test]
    fn coefficient_expansion_respects_projection_identity() {
        // An atom with coefficient 2 expands to two unit copies before
        // orbit enumeration; the cyc projection must still equal the
        // Bockstein output.
        let t = ZeroChain::new(
            Ambient::Sphere { dim: 1 },
            p(3),
            false,
            vec![(vec![1.0, 0.0], 2), (vec![-0.6, 0.8], 1)],
        )
        .unwrap();
        let out = cyc_0(&t).unwrap();
        let proj = out.disk_projection().unwrap();
        let b = bockstein_b(&t).unwrap().chain;
        assert!(proj.chain_eq(&b));
        // Three units: orbits of {1,2,3}^3 with two coincident points.
        // Tuples mixing only the two copies of the first point sit on
        // the geometric diagonal and vanish from cyc.
        assert!(out.atoms.iter().all(|a| a.c > 0));
    }

    #[test]
    fn rotation_equivariance_of_barycenters() {
        let t = ZeroChain::new(
            Ambient::Sphere { dim: 1 },
            p(2),
            false,
            vec![
                (vec![1.0, 0.0], 1),
                (vec![0.6, 0.8], 1),
                (vec![-0.8, 0.6], 1),
            ],
        )
        .unwrap();
        let theta = 0.37f64;
        let rot = |v: &[f64]| {
            vec![
                theta.cos() * v[0] - theta.sin() * v[1],
                theta.sin() * v[0] + theta.cos() * v[1],
            ]
        };
        let rotated = ZeroChain::new(
            Ambient::Sphere { dim: 1 },
            p(2),
            false,
            t.atoms().iter().map(|a| (rot(&a.x), a.c as i64)).collect(),
        )
        .unwrap();
        let b1 = bockstein_b(&t).unwrap().chain;
        let b2 = bockstein_b(&rotated).unwrap().chain;
        let b1_rot = ZeroChain::new(
            Ambient::Disk { dim: 2 },
            p(2),
            true,
            b1.atoms().iter().map(|a| (rot(&a.x), a.c as i64)).collect(),
        )
        .unwrap();
        assert!(b1_rot.chain_eq(&b2));
    }

    #[test]
    fn cap_guards_expansion() {
        let atoms: Vec<(Vec<f64>, i64)> = (0..41)
            .map(|i| {
                let t = i as f64 / 41.0 * std::f64::consts::TAU;
                (vec![t.cos(), t.sin()], 1)
            })
            .collect();
        let t = ZeroChain::new(Ambient::Sphere { dim: 1 }, p(2), false, atoms).unwrap();
        assert!(matches!(
            bockstein_b(&t),
            Err(Error::CapExceeded { .. })
        ));
    }
}
