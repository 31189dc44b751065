//! JSON schemas for chains, cyclic-product outputs and family
//! descriptions. All command-line tools consume and produce these.
//!
//! Zero chain:
//! `{"p":3,"ambient":{"kind":"disk","dim":2},"relative":true,
//!   "atoms":[{"x":[0.5,0.0],"c":2}]}`
//!
//! Simplicial chain: the same envelope with
//! `"simplices":[{"verts":[[..],[..]],"c":1}]`.

use crate::ambient::Ambient;
use crate::bockstein::{CycAtom, CycOutput0, LensComponent};
use crate::chain::{SimplicialChain, ZeroChain};
use crate::coeff::Prime;
use crate::gluing::{Chart, CubicalFamily, FamilyCell};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Provenance header embedded in every emitted file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config_hash: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomJson {
    pub x: Vec<f64>,
    pub c: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplexJson {
    pub verts: Vec<Vec<f64>>,
    pub c: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainFile {
    pub p: u64,
    pub ambient: Ambient,
    #[serde(default)]
    pub relative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<AtomJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplices: Option<Vec<SimplexJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

impl ChainFile {
    pub fn prime(&self) -> Result<Prime> {
        Prime::new(self.p)
    }

    pub fn to_zero_chain(&self) -> Result<ZeroChain<f64>> {
        let atoms = self
            .atoms
            .as_ref()
            .ok_or_else(|| Error::InvalidChain("file holds no atoms".into()))?;
        ZeroChain::new(
            self.ambient,
            self.prime()?,
            self.relative,
            atoms.iter().map(|a| (a.x.clone(), a.c)).collect(),
        )
    }

    pub fn to_simplicial_chain(&self) -> Result<SimplicialChain> {
        let simplices = self
            .simplices
            .as_ref()
            .ok_or_else(|| Error::InvalidChain("file holds no simplices".into()))?;
        let dim = simplices
            .first()
            .map(|s| s.verts.len().saturating_sub(1))
            .unwrap_or(0);
        SimplicialChain::new(
            self.ambient,
            self.prime()?,
            self.relative,
            dim,
            simplices
                .iter()
                .map(|s| (s.verts.clone(), s.c))
                .collect(),
        )
    }

    pub fn from_zero_chain(chain: &ZeroChain<f64>, meta: Option<Meta>) -> ChainFile {
        ChainFile {
            p: chain.p.get(),
            ambient: chain.ambient,
            relative: chain.relative,
            atoms: Some(
                chain
                    .atoms()
                    .iter()
                    .map(|a| AtomJson {
                        x: a.x.clone(),
                        c: a.c as i64,
                    })
                    .collect(),
            ),
            simplices: None,
            meta,
        }
    }

    pub fn from_simplicial_chain(chain: &SimplicialChain, meta: Option<Meta>) -> ChainFile {
        ChainFile {
            p: chain.p.get(),
            ambient: chain.ambient,
            relative: chain.relative,
            atoms: None,
            simplices: Some(
                chain
                    .simplices()
                    .iter()
                    .map(|s| SimplexJson {
                        verts: s.verts.clone(),
                        c: s.c as i64,
                    })
                    .collect(),
            ),
            meta,
        }
    }
}

/// Cyclic-product output: atoms carry the lens coordinate alongside the
/// disk point. For p = 2 the lens coordinate is the canonical line
/// direction; for odd p it is the canonicalized sphere representative.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycAtomJson {
    pub lens: Vec<f64>,
    pub x: Vec<f64>,
    pub c: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycFile {
    pub p: u64,
    pub n: usize,
    pub ambient: Ambient,
    pub relative: bool,
    pub atoms: Vec<CycAtomJson>,
    #[serde(default)]
    pub cycle_warning: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

impl CycFile {
    pub fn from_output(out: &CycOutput0<f64>, meta: Option<Meta>) -> CycFile {
        CycFile {
            p: out.p.get(),
            n: out.n,
            ambient: Ambient::LensDisk { p: out.p, n: out.n },
            relative: true,
            atoms: out
                .atoms
                .iter()
                .map(|a: &CycAtom<f64>| CycAtomJson {
                    lens: match &a.lens {
                        LensComponent::Direction(d) => d.clone(),
                        LensComponent::Orbit(o) => o.rep.clone(),
                    },
                    x: a.disk.clone(),
                    c: a.c as i64,
                })
                .collect(),
            cycle_warning: out.cycle_warning,
            meta,
        }
    }
}

/// Family descriptions for the glue tool: shipped builders by name, or a
/// custom circle family with explicit cells, charts and model chains.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyFile {
    Torus {
        p: u64,
        base_arcs: usize,
        fiber_gon: usize,
    },
    Rp1 {
        arcs: usize,
    },
    Custom {
        p: u64,
        ambient: Ambient,
        period: f64,
        cells: Vec<FamilyCellJson>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyCellJson {
    pub lo: f64,
    pub hi: f64,
    pub chart: ChartJson,
    pub model: ChainFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChartJson {
    Rotation { plane: (usize, usize) },
    Translation { direction: Vec<f64> },
    Dilation { center: Vec<f64>, rate: f64 },
}

impl FamilyFile {
    pub fn build(&self) -> Result<CubicalFamily> {
        match self {
            FamilyFile::Torus {
                p,
                base_arcs,
                fiber_gon,
            } => crate::gluing::torus_bundle_family(Prime::new(*p)?, *base_arcs, *fiber_gon),
            FamilyFile::Rp1 { arcs } => {
                crate::gluing::rpn_family(Prime::new(2).unwrap(), *arcs)
            }
            FamilyFile::Custom {
                p,
                ambient,
                period,
                cells,
            } => {
                let prime = Prime::new(*p)?;
                let mut arcs = Vec::with_capacity(cells.len());
                let mut vertices = Vec::with_capacity(cells.len());
                for (i, c) in cells.iter().enumerate() {
                    let anchor = 0.5 * (c.lo + c.hi);
                    let chart = |anchor: f64| match &c.chart {
                        ChartJson::Rotation { plane } => Chart::Rotation {
                            plane: *plane,
                            anchor,
                        },
                        ChartJson::Translation { direction } => Chart::Translation {
                            direction: direction.clone(),
                            anchor,
                        },
                        ChartJson::Dilation { center, rate } => Chart::Dilation {
                            center: center.clone(),
                            rate: *rate,
                            anchor,
                        },
                    };
                    let model = c.model.to_simplicial_chain()?;
                    arcs.push(FamilyCell {
                        lo: c.lo,
                        hi: c.hi,
                        anchor,
                        chart: chart(anchor),
                        model: model.clone(),
                        faces: vec![i, (i + 1) % cells.len()],
                    });
                    vertices.push(FamilyCell {
                        lo: c.lo,
                        hi: c.lo,
                        anchor: c.lo,
                        chart: chart(c.lo),
                        model,
                        faces: vec![],
                    });
                }
                Ok(CubicalFamily {
                    p: prime,
                    ambient: *ambient,
                    period: *period,
                    arcs,
                    vertices,
                })
            }
        }
    }
}
