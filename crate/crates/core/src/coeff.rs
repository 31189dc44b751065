//! Mod-p coefficients and their mass weight.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if p < 2 {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Reduce an arbitrary integer to its residue in {0,..,p-1}.
    pub fn residue(self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }
}

/// A residue in {0,..,p-1} together with its modulus.
///
/// The mass weight of a coefficient a is min(a, p-a): orientation reversal
/// is coefficient negation and costs nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coeff {
    value: u64,
    p: Prime,
}

impl Coeff {
    pub fn new(value: i64, p: Prime) -> Coeff {
        Coeff {
            value: p.residue(value),
            p,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Mass weight min(a, p-a).
    pub fn weight(self) -> u64 {
        self.value.min(self.p.get() - self.value)
    }

    pub fn add(self, o: Coeff) -> Result<Coeff> {
        self.check(o)?;
        Ok(Coeff {
            value: (self.value + o.value) % self.p.get(),
            p: self.p,
        })
    }

    pub fn neg(self) -> Coeff {
        Coeff {
            value: (self.p.get() - self.value) % self.p.get(),
            p: self.p,
        }
    }

    pub fn mul(self, o: Coeff) -> Result<Coeff> {
        self.check(o)?;
        Ok(Coeff {
            value: (self.value * o.value) % self.p.get(),
            p: self.p,
        })
    }

    fn check(self, o: Coeff) -> Result<()> {
        if self.p != o.p {
            return Err(Error::ModulusMismatch(self.p.get(), o.p.get()));
        }
        Ok(())
    }
}
