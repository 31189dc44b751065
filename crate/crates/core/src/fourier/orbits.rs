//! Necklace orbits of {1..k}^p under cyclic shift, and the free-orbit
//! count that drives the Bockstein evaluation.

use crate::coeff::Prime;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Lexicographically minimal representative, entries in 1..=k.
    pub rep: Vec<u32>,
    /// p for free orbits, 1 for constant tuples.
    pub size: u64,
    pub constant: bool,
}

/// Enumerate {1..k}^p / Z_p as lexicographically minimal representatives.
///
/// For prime p every orbit is free or constant, so the count is
/// (k^p + (p-1) k)/p by Burnside.
pub fn orbit_enumerate(k: usize, p: Prime) -> Result<Vec<Orbit>> {
    if k == 0 {
        return Err(Error::InvalidChain("orbit enumeration needs k >= 1".into()));
    }
    let pu = p.get() as usize;
    let total = (k as f64).powi(pu as i32);
    if total > 1e7 {
        return Err(Error::BudgetExceeded(format!(
            "{k}^{pu} tuples exceed the enumeration budget"
        )));
    }
    let mut orbits = Vec::new();
    let mut tuple = vec![1u32; pu];
    loop {
        if is_lex_min(&tuple) {
            let constant = tuple.iter().all(|&v| v == tuple[0]);
            orbits.push(Orbit {
                rep: tuple.clone(),
                size: if constant { 1 } else { p.get() },
                constant,
            });
        }
        // Next tuple in odometer order.
        let mut i = pu;
        loop {
            if i == 0 {
                return Ok(orbits);
            }
            i -= 1;
            if tuple[i] < k as u32 {
                tuple[i] += 1;
                for v in tuple.iter_mut().skip(i + 1) {
                    *v = 1;
                }
                break;
            }
        }
    }
}

fn is_lex_min(t: &[u32]) -> bool {
    let n = t.len();
    for s in 1..n {
        for i in 0..n {
            match t[(i + s) % n].cmp(&t[i]) {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => continue,
            }
        }
    }
    true
}

/// Burnside count for prime p.
pub fn burnside_count(k: usize, p: Prime) -> u64 {
    let pu = p.get();
    let kp = (k as u64).pow(pu as u32);
    (kp + (pu - 1) * k as u64) / pu
}

#[derive(Debug, Clone, Copy)]
pub struct FreeOrbitCount {
    pub m: u64,
    /// m mod p; always p-1, i.e. m = -1 mod p.
    pub residue: u64,
}

/// Number of free orbits of Z_p acting on Z_p^p: (p^p - p)/p = p^{p-1} - 1.
pub fn count_free_orbits(p: Prime) -> FreeOrbitCount {
    let pu = p.get();
    let m = pu.pow(pu as u32 - 1) - 1;
    FreeOrbitCount {
        m,
        residue: m % pu,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn eleven_orbits_for_three_cubed() {
        let orbits = orbit_enumerate(3, p(3)).unwrap();
        assert_eq!(orbits.len(), 11);
        let reps: BTreeSet<Vec<u32>> = orbits.iter().map(|o| o.rep.clone()).collect();
        // (1,2,3) and (3,2,1) sit in distinct orbits; the latter has
        // lex-min representative (1,3,2).
        assert!(reps.contains(&vec![1, 2, 3]));
        assert!(reps.contains(&vec![1, 3, 2]));
        assert_eq!(orbits.iter().filter(|o| o.constant).count(), 3);
    }

    #[test]
    fn single_symbol_single_orbit() {
        let orbits = orbit_enumerate(1, p(3)).unwrap();
        assert_eq!(orbits.len(), 1);
        assert!(orbits[0].constant);
    }

    #[test]
    fn four_symbols_p2_gives_ten() {
        let orbits = orbit_enumerate(4, p(2)).unwrap();
        assert_eq!(orbits.len(), 10);
        // Independent oracle: dedup all tuples by their rotation set.
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut count = 0;
        for a in 1..=4u32 {
            for b in 1..=4u32 {
                let t = vec![a, b];
                let min = std::cmp::min(t.clone(), vec![b, a]);
                if seen.insert(min) {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 10);
    }

    #[test]
    fn burnside_matches_enumeration() {
        for k in 1..=6 {
            for pv in [2u64, 3, 5] {
                let orbits = orbit_enumerate(k, p(pv)).unwrap();
                assert_eq!(
                    orbits.len() as u64,
                    burnside_count(k, p(pv)),
                    "k={k} p={pv}"
                );
            }
        }
    }

    #[test]
    fn free_orbit_count_examples() {
        assert_eq!(count_free_orbits(p(3)).m, 8);
        assert_eq!(count_free_orbits(p(3)).residue, 2);
        assert_eq!(count_free_orbits(p(2)).m, 1);
        let c5 = count_free_orbits(p(5));
        assert_eq!(c5.m, 624);
        assert_eq!(c5.residue, 4);
        // Exhaustive oracle for p = 5: count size-5 orbits of Z_5^5.
        let mut free = 0u64;
        for idx in 0..5u64.pow(5) {
            let mut t = Vec::with_capacity(5);
            let mut v = idx;
            for _ in 0..5 {
                t.push((v % 5) as u32);
                v /= 5;
            }
            if !t.iter().all(|&x| x == t[0]) {
                free += 1;
            }
        }
        assert_eq!(free / 5, 624);
    }

    #[test]
    fn residue_is_minus_one_up_to_eleven() {
        for pv in [2u64, 3, 5, 7, 11] {
            let c = count_free_orbits(p(pv));
            assert_eq!(c.residue, pv - 1, "p={pv}");
        }
    }
}
