//! Exact mod-p flat distance for 0-chains.
//!
//! A filling of S - T is a 1-chain P plus a dropped 0-chain Q with
//! dP + Q = S - T; its cost is M(P) + M(Q). After expanding coefficients
//! into signed unit points, an optimal filling in our declared model is a
//! partition of the units into groups: each group travels to a common
//! meeting point (atom positions, barycenters of subsets of size at most
//! p, their boundary projections in relative flavor) and drops whatever
//! residue is left mod p there. Opposite-sign pairs reduce to a straight
//! segment, p same-sign units cancel at a Steiner point, and single units
//! are dropped at unit cost or walked to the boundary.
//!
//! `flat_distance_0` solves this model exactly (bitmask DP for small unit
//! counts, branch and bound above, a pair/singleton specialization for
//! p = 2). `flat_oracle_0` enumerates every partition without the
//! group-size cap and is the independent check.

mod cone;
mod oracle;

pub use cone::cone_filling_upper_bound;
pub use oracle::flat_oracle_0;

use crate::ambient::Ambient;
use crate::chain::{SimplicialChain, ZeroChain};
use crate::coeff::Prime;
use crate::tol;
use crate::{Error, Result};

/// Hard ceiling for the exact solver per modulus.
pub const DEFAULT_UNIT_CAP: usize = 60;
const DP_CAP: usize = 20;
const P_ODD_CAP: usize = 24;

#[derive(Debug, Clone)]
pub struct FlatOptions {
    pub unit_cap: usize,
}

impl Default for FlatOptions {
    fn default() -> Self {
        FlatOptions {
            unit_cap: DEFAULT_UNIT_CAP,
        }
    }
}

/// The transport chain P, the dropped chain Q, and their total mass.
#[derive(Debug, Clone)]
pub struct FillingCertificate {
    pub p_chain: SimplicialChain,
    pub q_chain: ZeroChain<f64>,
    pub cost: f64,
}

#[derive(Debug, Clone)]
pub struct FlatResult {
    pub value: f64,
    pub certificate: FillingCertificate,
}

/// One signed unit point of the difference chain.
#[derive(Debug, Clone)]
pub(crate) struct Unit {
    pub pos: Vec<f64>,
    pub sign: i8,
}

/// How one group terminates.
#[derive(Debug, Clone)]
pub(crate) enum GroupPlan {
    /// Drop in place (unit coefficient into Q).
    Drop,
    /// Walk to the nearest boundary point (relative flavor only).
    ToBoundary,
    /// An opposite-sign pair cancels along the direct segment.
    DirectPair,
    /// Travel to a meeting point; drop the net residue there unless the
    /// point lies on the boundary.
    Meet { z: Vec<f64>, net: i64 },
}

pub(crate) struct Instance {
    pub ambient: Ambient,
    pub p: Prime,
    pub relative: bool,
    pub units: Vec<Unit>,
    candidates: Vec<Vec<f64>>,
}

impl Instance {
    pub fn build(s: &ZeroChain<f64>, t: &ZeroChain<f64>) -> Result<Instance> {
        s.ambient.require_same(&t.ambient)?;
        if s.p != t.p {
            return Err(Error::ModulusMismatch(s.p.get(), t.p.get()));
        }
        if s.relative != t.relative {
            return Err(Error::AmbientMismatch(
                "relative flavor differs between the chains".into(),
            ));
        }
        let diff = s.sub(t)?;
        let p = s.p.get();
        let mut units = Vec::new();
        let mut positions: Vec<Vec<f64>> = Vec::new();
        for atom in diff.atoms() {
            let (count, sign) = if atom.c <= p / 2 {
                (atom.c, 1i8)
            } else {
                (p - atom.c, -1i8)
            };
            positions.push(atom.x.clone());
            for _ in 0..count {
                units.push(Unit {
                    pos: atom.x.clone(),
                    sign,
                });
            }
        }
        let candidates = build_candidates(&diff.ambient, s.relative, &positions, p as usize);
        Ok(Instance {
            ambient: diff.ambient,
            p: s.p,
            relative: s.relative,
            units,
            candidates,
        })
    }

    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        self.ambient.dist(a, b)
    }

    /// Minimal cost of one group of units, and the plan that attains it.
    ///
    /// Shared verbatim by the solver and the oracle so both optimize the
    /// same model with identical arithmetic.
    pub fn group_cost(&self, members: &[usize]) -> (f64, GroupPlan) {
        let p = self.p.get() as i64;
        if members.len() == 1 {
            let u = &self.units[members[0]];
            let mut best = (1.0, GroupPlan::Drop);
            if self.relative {
                // Evaluate the walk as the distance to the explicit
                // projection point: the same float path a boundary
                // meeting point takes, so real-equal plans (points
                // collinear with the origin) cost bit-identical amounts.
                if let Some(z) = self.ambient.boundary_projection(&u.pos) {
                    let d = self.dist(&u.pos, &z);
                    if d < best.0 {
                        best = (d, GroupPlan::ToBoundary);
                    }
                }
            }
            return best;
        }
        let net: i64 = members.iter().map(|&i| self.units[i].sign as i64).sum();
        let net_res = net.rem_euclid(p) as u64;
        // A cancelling pair travels the direct segment: one distance
        // evaluation, never beaten by a meeting point, and symmetric
        // configurations price bit-identically.
        if members.len() == 2 && net_res == 0 {
            let a = &self.units[members[0]];
            let b = &self.units[members[1]];
            return (self.dist(&a.pos, &b.pos), GroupPlan::DirectPair);
        }
        let penalty = net_res.min(self.p.get() - net_res) as f64;
        let mut best_cost = f64::INFINITY;
        let mut best_z: Option<Vec<f64>> = None;
        let mut consider = |z: &[f64], inst: &Instance| {
            let travel: f64 = members.iter().map(|&i| inst.dist(&inst.units[i].pos, z)).sum();
            let pen = if inst.relative && inst.ambient.on_boundary(z, tol::TAU_AMB) {
                0.0
            } else {
                penalty
            };
            let c = travel + pen;
            if c < best_cost {
                best_cost = c;
                best_z = Some(z.to_vec());
            }
        };
        for z in &self.candidates {
            consider(z, self);
        }
        (
            best_cost,
            GroupPlan::Meet {
                z: best_z.expect("candidate set is never empty"),
                net,
            },
        )
    }
}

fn build_candidates(
    ambient: &Ambient,
    relative: bool,
    positions: &[Vec<f64>],
    p: usize,
) -> Vec<Vec<f64>> {
    let mut cands: Vec<Vec<f64>> = positions.to_vec();
    let n = positions.len();
    // Barycenters of subsets of size 2..=p, projected back to the sphere
    // when the ambient is one.
    let mut stack: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        depth: usize,
        max_depth: usize,
        n: usize,
        stack: &mut Vec<usize>,
        positions: &[Vec<f64>],
        ambient: &Ambient,
        out: &mut Vec<Vec<f64>>,
    ) {
        if depth >= 2 {
            let pts: Vec<&[f64]> = stack.iter().map(|&i| positions[i].as_slice()).collect();
            let mut b = vec![0.0; pts[0].len()];
            for p in &pts {
                for (o, x) in b.iter_mut().zip(p.iter()) {
                    *o += x;
                }
            }
            for o in &mut b {
                *o /= pts.len() as f64;
            }
            if matches!(ambient, Ambient::Sphere { .. }) {
                let nn = crate::ambient::norm(&b);
                if nn > 1e-12 {
                    for o in &mut b {
                        *o /= nn;
                    }
                    out.push(b);
                }
            } else {
                out.push(b);
            }
        }
        if depth == max_depth {
            return;
        }
        for i in start..n {
            stack.push(i);
            rec(i + 1, depth + 1, max_depth, n, stack, positions, ambient, out);
            stack.pop();
        }
    }
    rec(0, 0, p, n, &mut stack, positions, ambient, &mut cands);
    if relative {
        let interior: Vec<Vec<f64>> = cands.clone();
        for c in interior {
            if let Some(b) = ambient.boundary_projection(&c) {
                cands.push(b);
            }
        }
    }
    cands
}

/// Exact flat distance between two 0-chains with a verified certificate.
pub fn flat_distance_0(
    s: &ZeroChain<f64>,
    t: &ZeroChain<f64>,
    opts: &FlatOptions,
) -> Result<FlatResult> {
    let inst = Instance::build(s, t)?;
    let n = inst.units.len();
    if n > opts.unit_cap {
        return Err(Error::CapExceeded {
            units: n,
            cap: opts.unit_cap,
            hint: " (run without the oracle and raise the cap, or split the instance)".into(),
        });
    }
    let p_odd_limit = if inst.p.get() == 2 { opts.unit_cap } else { P_ODD_CAP };
    if n > p_odd_limit {
        return Err(Error::CapExceeded {
            units: n,
            cap: p_odd_limit,
            hint: format!(" (exact search for p = {} is capped)", inst.p.get()),
        });
    }

    let groups = if n == 0 {
        Vec::new()
    } else if n <= DP_CAP {
        solve_dp(&inst)
    } else {
        solve_branch_bound(&inst)
    };
    build_result(&inst, s, t, &groups)
}

/// Canonical value: group costs sorted then summed, so the solver and the
/// oracle report bit-identical totals for cost-equal partitions.
pub(crate) fn canonical_value(costs: &mut [f64]) -> f64 {
    costs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    costs.iter().sum()
}

/// Degenerate instances (crossed vs nested matchings on a circle, walks
/// collinear with a projection point) admit several real-equal optimal
/// plans whose float totals differ by a few ulps. Both routes therefore
/// collect every plan within this slack of their search optimum and
/// report the minimal canonical value, which makes the reported number a
/// well-defined function of the instance.
pub(crate) fn tie_slack(v: f64) -> f64 {
    1e-12 * (1.0 + v.abs())
}

fn group_size_cap(p: u64) -> usize {
    p as usize
}

fn solve_dp(inst: &Instance) -> Vec<Vec<usize>> {
    let n = inst.units.len();
    let cap = group_size_cap(inst.p.get());
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = vec![f64::INFINITY; (full + 1) as usize];
    let mut choice: Vec<u64> = vec![0; (full + 1) as usize];
    best[0] = 0.0;
    let mut members = Vec::with_capacity(cap);
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & !(1u64 << low);
        // Enumerate subsets of `rest` of size < cap to join `low`.
        let mut subsets: Vec<u64> = vec![0];
        let mut frontier: Vec<u64> = vec![0];
        for _ in 1..cap {
            let mut next = Vec::new();
            for &g in &frontier {
                let mut bits = rest & !g;
                // Only extend with bits above the highest set bit to
                // avoid duplicates.
                let min_bit = if g == 0 { 0 } else { 64 - g.leading_zeros() };
                bits &= !((1u64 << min_bit) - 1);
                while bits != 0 {
                    let b = bits & bits.wrapping_neg();
                    next.push(g | b);
                    bits &= bits - 1;
                }
            }
            subsets.extend(next.iter().copied());
            frontier = next;
        }
        for g in subsets {
            let grp = g | (1u64 << low);
            members.clear();
            let mut bits = grp;
            while bits != 0 {
                members.push(bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
            let (c, _) = inst.group_cost(&members);
            let prev = best[(mask & !grp) as usize];
            if prev + c < best[mask as usize] {
                best[mask as usize] = prev + c;
                choice[mask as usize] = grp;
            }
        }
    }
    let _ = &choice;
    // Collect every partition within the tie slack of the optimum,
    // using best[] as an admissible completion bound, and keep the one
    // with the smallest canonical value.
    let v_star = best[full as usize];
    let slack = tie_slack(v_star);
    struct Collect<'a> {
        inst: &'a Instance,
        best: &'a [f64],
        cap: usize,
        limit: f64,
        found: Vec<(f64, Vec<Vec<usize>>)>,
    }
    fn collect(ctx: &mut Collect, mask: u64, partial: f64, groups: &mut Vec<Vec<usize>>) {
        if ctx.found.len() >= 65536 {
            return;
        }
        if mask == 0 {
            let mut costs: Vec<f64> = groups
                .iter()
                .map(|g| ctx.inst.group_cost(g).0)
                .collect();
            let canon = canonical_value(&mut costs);
            ctx.found.push((canon, groups.clone()));
            return;
        }
        if partial + ctx.best[mask as usize] > ctx.limit {
            return;
        }
        let low = mask.trailing_zeros() as usize;
        let rest = mask & !(1u64 << low);
        let mut subsets: Vec<u64> = vec![0];
        let mut frontier: Vec<u64> = vec![0];
        for _ in 1..ctx.cap {
            let mut next = Vec::new();
            for &g in &frontier {
                let mut bits = rest & !g;
                let min_bit = if g == 0 { 0 } else { 64 - g.leading_zeros() };
                bits &= !((1u64 << min_bit) - 1);
                while bits != 0 {
                    let b = bits & bits.wrapping_neg();
                    next.push(g | b);
                    bits &= bits - 1;
                }
            }
            subsets.extend(next.iter().copied());
            frontier = next;
        }
        for g in subsets {
            let grp = g | (1u64 << low);
            let mut m = Vec::new();
            let mut bits = grp;
            while bits != 0 {
                m.push(bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
            let (c, _) = ctx.inst.group_cost(&m);
            groups.push(m);
            collect(ctx, mask & !grp, partial + c, groups);
            groups.pop();
        }
    }
    let mut ctx = Collect {
        inst,
        best: &best,
        cap,
        limit: v_star + slack,
        found: Vec::new(),
    };
    let mut scratch = Vec::new();
    collect(&mut ctx, full, 0.0, &mut scratch);
    ctx.found
        .into_iter()
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        .map(|(_, g)| g)
        .expect("the optimal partition is always collected")
}

fn solve_branch_bound(inst: &Instance) -> Vec<Vec<usize>> {
    use std::collections::HashMap;
    let n = inst.units.len();
    let cap = group_size_cap(inst.p.get());
    let mut memo: HashMap<u64, f64> = HashMap::new();
    let mut cost_of = |members: &[usize], memo: &mut HashMap<u64, f64>| -> f64 {
        let mask = members.iter().fold(0u64, |m, &i| m | (1u64 << i));
        *memo
            .entry(mask)
            .or_insert_with(|| inst.group_cost(members).0)
    };
    // Per-unit admissible share: half the cheapest pair involvement or
    // the singleton termination, whichever is smaller.
    let mut share = vec![0.0f64; n];
    for i in 0..n {
        let mut c_min = 2.0 * cost_of(&[i], &mut memo);
        for j in 0..n {
            if i != j {
                c_min = c_min.min(cost_of(&mut_sorted(i, j), &mut memo));
            }
        }
        share[i] = 0.5 * c_min;
    }

    // Greedy incumbent: repeatedly take the cheapest available group of
    // size <= cap among singletons and pairs.
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut incumbent_groups: Vec<Vec<usize>> = Vec::new();
    let mut incumbent = 0.0;
    while let Some(&u) = remaining.first() {
        let mut best = (cost_of(&[u], &mut memo), vec![u]);
        for &v in remaining.iter().skip(1) {
            let g = mut_sorted(u, v);
            let c = cost_of(&g, &mut memo);
            if c < best.0 {
                best = (c, g);
            }
        }
        incumbent += best.0;
        remaining.retain(|x| !best.1.contains(x));
        incumbent_groups.push(best.1);
    }

    struct Ctx<'a> {
        inst: &'a Instance,
        memo: HashMap<u64, f64>,
        share: Vec<f64>,
        best_val: f64,
        best_groups: Vec<Vec<usize>>,
        cap: usize,
    }
    let mut ctx = Ctx {
        inst,
        memo,
        share,
        best_val: incumbent,
        best_groups: incumbent_groups,
        cap,
    };

    impl Ctx<'_> {
        fn cost(&mut self, members: &[usize]) -> f64 {
            let mask = members.iter().fold(0u64, |m, &i| m | (1u64 << i));
            match self.memo.get(&mask) {
                Some(&c) => c,
                None => {
                    let c = self.inst.group_cost(members).0;
                    self.memo.insert(mask, c);
                    c
                }
            }
        }
    }

    fn rec(ctx: &mut Ctx, assigned: u64, partial: f64, groups: &mut Vec<Vec<usize>>) {
        let n = ctx.inst.units.len();
        let mut low = None;
        for i in 0..n {
            if assigned & (1u64 << i) == 0 {
                low = Some(i);
                break;
            }
        }
        let Some(low) = low else {
            if partial < ctx.best_val {
                ctx.best_val = partial;
                ctx.best_groups = groups.clone();
            }
            return;
        };
        let rest_bound: f64 = (0..n)
            .filter(|&i| assigned & (1u64 << i) == 0)
            .map(|i| ctx.share[i])
            .sum();
        if partial + rest_bound >= ctx.best_val {
            return;
        }
        // Candidate groups containing `low`, sizes 1..=cap.
        let avail: Vec<usize> = (low + 1..n).filter(|&i| assigned & (1u64 << i) == 0).collect();
        let mut options: Vec<Vec<usize>> = vec![vec![low]];
        let mut frontier: Vec<Vec<usize>> = vec![vec![low]];
        for _ in 1..ctx.cap {
            let mut next = Vec::new();
            for g in &frontier {
                let start = g.last().copied().unwrap_or(low);
                for &v in avail.iter().filter(|&&v| v > start) {
                    let mut g2 = g.clone();
                    g2.push(v);
                    next.push(g2);
                }
            }
            options.extend(next.iter().cloned());
            frontier = next;
        }
        let mut scored: Vec<(f64, Vec<usize>)> = options
            .into_iter()
            .map(|g| {
                let c = ctx.cost(&g);
                (c, g)
            })
            .collect();
        scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for (c, g) in scored {
            let mut a2 = assigned;
            for &i in &g {
                a2 |= 1u64 << i;
            }
            groups.push(g);
            rec(ctx, a2, partial + c, groups);
            groups.pop();
        }
    }
    let mut groups = Vec::new();
    rec(&mut ctx, 0, 0.0, &mut groups);

    // Collection pass: gather every partition within the tie slack of
    // the optimum and keep the canonical minimum.
    let v_star = ctx.best_val;
    let limit = v_star + tie_slack(v_star);
    struct Collect<'a> {
        inst: &'a Instance,
        share: Vec<f64>,
        cap: usize,
        limit: f64,
        best_canonical: f64,
        best_groups: Vec<Vec<usize>>,
        found: usize,
    }
    fn collect(ctx: &mut Collect, assigned: u64, partial: f64, groups: &mut Vec<Vec<usize>>) {
        if ctx.found >= 65536 {
            return;
        }
        let n = ctx.inst.units.len();
        let mut low = None;
        for i in 0..n {
            if assigned & (1u64 << i) == 0 {
                low = Some(i);
                break;
            }
        }
        let Some(low) = low else {
            ctx.found += 1;
            let mut costs: Vec<f64> = groups
                .iter()
                .map(|g| ctx.inst.group_cost(g).0)
                .collect();
            let canon = canonical_value(&mut costs);
            if canon < ctx.best_canonical {
                ctx.best_canonical = canon;
                ctx.best_groups = groups.clone();
            }
            return;
        };
        let rest_bound: f64 = (0..n)
            .filter(|&i| assigned & (1u64 << i) == 0)
            .map(|i| ctx.share[i])
            .sum();
        if partial + rest_bound > ctx.limit {
            return;
        }
        let avail: Vec<usize> = (low + 1..n).filter(|&i| assigned & (1u64 << i) == 0).collect();
        let mut options: Vec<Vec<usize>> = vec![vec![low]];
        let mut frontier: Vec<Vec<usize>> = vec![vec![low]];
        for _ in 1..ctx.cap {
            let mut next = Vec::new();
            for g in &frontier {
                let start = g.last().copied().unwrap_or(low);
                for &v in avail.iter().filter(|&&v| v > start) {
                    let mut g2 = g.clone();
                    g2.push(v);
                    next.push(g2);
                }
            }
            options.extend(next.iter().cloned());
            frontier = next;
        }
        for g in options {
            let (c, _) = ctx.inst.group_cost(&g);
            let mut a2 = assigned;
            for &i in &g {
                a2 |= 1u64 << i;
            }
            groups.push(g);
            collect(ctx, a2, partial + c, groups);
            groups.pop();
        }
    }
    let mut cctx = Collect {
        inst,
        share: ctx.share,
        cap: ctx.cap,
        limit,
        best_canonical: f64::INFINITY,
        best_groups: ctx.best_groups,
        found: 0,
    };
    let mut scratch = Vec::new();
    collect(&mut cctx, 0, 0.0, &mut scratch);
    cctx.best_groups
}

fn mut_sorted(a: usize, b: usize) -> Vec<usize> {
    if a < b {
        vec![a, b]
    } else {
        vec![b, a]
    }
}

pub(crate) fn build_result(
    inst: &Instance,
    s: &ZeroChain<f64>,
    t: &ZeroChain<f64>,
    groups: &[Vec<usize>],
) -> Result<FlatResult> {
    let p = inst.p;
    let mut costs: Vec<f64> = Vec::with_capacity(groups.len());
    let mut segments: Vec<(Vec<Vec<f64>>, i64)> = Vec::new();
    let mut q_atoms: Vec<(Vec<f64>, i64)> = Vec::new();
    for g in groups {
        let (c, plan) = inst.group_cost(g);
        costs.push(c);
        match plan {
            GroupPlan::Drop => {
                let u = &inst.units[g[0]];
                q_atoms.push((u.pos.clone(), u.sign as i64));
            }
            GroupPlan::ToBoundary => {
                let u = &inst.units[g[0]];
                let b = inst
                    .ambient
                    .boundary_projection(&u.pos)
                    .expect("boundary plan in boundaryless ambient");
                push_segment(&mut segments, &u.pos, &b, u.sign);
            }
            GroupPlan::DirectPair => {
                let a = &inst.units[g[0]];
                let b = &inst.units[g[1]];
                // Oriented from the minus unit into the plus unit; for
                // p = 2 the orientation is immaterial.
                if a.sign >= 0 {
                    push_segment(&mut segments, &a.pos, &b.pos, 1);
                } else {
                    push_segment(&mut segments, &b.pos, &a.pos, 1);
                }
            }
            GroupPlan::Meet { z, net } => {
                for &i in g {
                    let u = &inst.units[i];
                    push_segment(&mut segments, &u.pos, &z, u.sign);
                }
                if net.rem_euclid(p.get() as i64) != 0 {
                    q_atoms.push((z.clone(), net));
                }
            }
        }
    }
    let value = canonical_value(&mut costs);
    let p_chain = SimplicialChain::new(inst.ambient, p, inst.relative, 1, segments)?;
    let q_chain = ZeroChain::new(inst.ambient, p, inst.relative, q_atoms)?;
    let certificate = FillingCertificate {
        cost: p_chain.mass() + q_chain.mass(),
        p_chain,
        q_chain,
    };
    verify_certificate(s, t, &certificate)?;
    Ok(FlatResult { value, certificate })
}

fn push_segment(
    segments: &mut Vec<(Vec<Vec<f64>>, i64)>,
    pos: &[f64],
    z: &[f64],
    sign: i8,
) {
    if crate::ambient::euclidean(pos, z) <= tol::TAU_MERGE {
        return;
    }
    // Oriented so that dP carries +1 into the position of a plus unit.
    if sign > 0 {
        segments.push((vec![z.to_vec(), pos.to_vec()], 1));
    } else {
        segments.push((vec![pos.to_vec(), z.to_vec()], 1));
    }
}

/// Re-derive dP + Q and compare with S - T exactly mod p.
pub fn verify_certificate(
    s: &ZeroChain<f64>,
    t: &ZeroChain<f64>,
    cert: &FillingCertificate,
) -> Result<()> {
    let diff = s.sub(t)?;
    let reconstructed = if cert.p_chain.is_zero() {
        cert.q_chain.clone()
    } else {
        cert.p_chain
            .boundary()?
            .as_zero_chain()?
            .add(&cert.q_chain)?
    };
    // Relative flavor: both sides already canonicalize boundary atoms away.
    if !reconstructed.chain_eq(&diff) {
        return Err(Error::InvalidChain(format!(
            "certificate fails: dP + Q has {} atoms, S - T has {}",
            reconstructed.atoms().len(),
            diff.atoms().len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn chain(
        amb: Ambient,
        pv: u64,
        relative: bool,
        atoms: Vec<(Vec<f64>, i64)>,
    ) -> ZeroChain<f64> {
        ZeroChain::new(amb, p(pv), relative, atoms).unwrap()
    }

    #[test]
    fn identical_chains_have_distance_zero() {
        let amb = Ambient::Euclidean { dim: 2 };
        let s = chain(amb, 3, false, vec![(vec![0.3, 0.4], 2)]);
        let r = flat_distance_0(&s, &s, &FlatOptions::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.certificate.p_chain.is_zero());
        assert!(r.certificate.q_chain.is_zero());
    }

    #[test]
    fn sphere_pair_costs_the_geodesic_gap() {
        let amb = Ambient::Sphere { dim: 1 };
        let s = chain(amb, 2, false, vec![(vec![1.0, 0.0], 1)]);
        let t = chain(amb, 2, false, vec![(vec![0.0, 1.0], 1)]);
        let r = flat_distance_0(&s, &t, &FlatOptions::default()).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert_eq!(r.certificate.p_chain.simplices().len(), 1);
    }

    #[test]
    fn relative_point_near_boundary_walks_out() {
        let amb = Ambient::Disk { dim: 2 };
        let s = chain(amb, 2, true, vec![(vec![0.9, 0.0], 1)]);
        let t = ZeroChain::empty(amb, p(2), true);
        let r = flat_distance_0(&s, &t, &FlatOptions::default()).unwrap();
        assert!((r.value - 0.1).abs() < 1e-12);
        assert!(r.certificate.q_chain.is_zero());
    }

    #[test]
    fn double_point_mod_three_drops_at_weight_one() {
        let amb = Ambient::Euclidean { dim: 2 };
        let s = chain(amb, 3, false, vec![(vec![0.2, 0.2], 2)]);
        let t = ZeroChain::empty(amb, p(3), false);
        let r = flat_distance_0(&s, &t, &FlatOptions::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn four_collinear_points_pair_up() {
        let amb = Ambient::Euclidean { dim: 1 };
        let s = chain(
            amb,
            2,
            false,
            (0..4).map(|i| (vec![i as f64], 1)).collect(),
        );
        let t = ZeroChain::empty(amb, p(2), false);
        let r = flat_distance_0(&s, &t, &FlatOptions::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn p3_cluster_annihilates_at_a_steiner_point() {
        let amb = Ambient::Euclidean { dim: 2 };
        let eps = 0.01;
        let s = chain(
            amb,
            3,
            false,
            vec![
                (vec![0.0, 0.0], 1),
                (vec![eps, 0.0], 1),
                (vec![0.0, eps], 1),
            ],
        );
        let t = ZeroChain::empty(amb, p(3), false);
        let r = flat_distance_0(&s, &t, &FlatOptions::default()).unwrap();
        // One 3-group at a Steiner point beats three drops (cost 3).
        assert!(r.value < 3.0 * eps);
    }

    #[test]
    fn upper_bound_by_total_mass() {
        let amb = Ambient::Euclidean { dim: 2 };
        let s = chain(
            amb,
            3,
            false,
            vec![(vec![5.0, 0.0], 1), (vec![0.0, 7.0], 2)],
        );
        let t = chain(amb, 3, false, vec![(vec![-3.0, 0.0], 1)]);
        let r = flat_distance_0(&s, &t, &FlatOptions::default()).unwrap();
        let bound = s.sub(&t).unwrap().mass();
        assert!(r.value <= bound + 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        let amb = Ambient::Euclidean { dim: 1 };
        let s = chain(
            amb,
            2,
            false,
            (0..10).map(|i| (vec![i as f64], 1)).collect(),
        );
        let t = ZeroChain::empty(amb, p(2), false);
        let r = flat_distance_0(&s, &t, &FlatOptions { unit_cap: 5 });
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn equilateral_steiner_value_is_closed_form() {
        // Three unit points at the vertices of an equilateral triangle,
        // p = 3: the optimal meeting point is the centroid (which is
        // also the Fermat point here), value 3 * circumradius = side *
        // sqrt(3).
        let amb = Ambient::Euclidean { dim: 2 };
        let side = 0.4f64;
        let circum = side / 3.0f64.sqrt();
        let atoms: Vec<(Vec<f64>, i64)> = (0..3)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / 3.0;
                (vec![0.1 + circum * a.cos(), 0.2 + circum * a.sin()], 1)
            })
            .collect();
        let s = chain(amb, 3, false, atoms);
        let t = ZeroChain::empty(amb, p(3), false);
        let r = flat_distance_0(&s, &t, &FlatOptions::default()).unwrap();
        assert!(
            (r.value - 3.0 * circum).abs() < 1e-12,
            "value {} vs closed form {}",
            r.value,
            3.0 * circum
        );
        // The certificate uses one Steiner point and no drops.
        assert!(r.certificate.q_chain.is_zero());
        assert_eq!(r.certificate.p_chain.simplices().len(), 3);
    }

    #[test]
    fn branch_bound_handles_medium_p2_instances() {
        use rand::Rng;
        // 28 units forces the branch-and-bound path for p = 2; it must
        // terminate promptly and stay within the drop-everything bound.
        let amb = Ambient::Euclidean { dim: 2 };
        let mut rng = crate::rng::stratum_rng(31, 0);
        let atoms: Vec<(Vec<f64>, i64)> = (0..28)
            .map(|_| (vec![rng.gen::<f64>() * 6.0, rng.gen::<f64>() * 6.0], 1))
            .collect();
        let s = chain(amb, 2, false, atoms);
        let t = ZeroChain::empty(amb, p(2), false);
        let r = flat_distance_0(&s, &t, &FlatOptions::default()).unwrap();
        assert!(r.value <= s.mass() + 1e-12);
        assert!(r.value > 0.0);
    }

    #[test]
    fn branch_bound_matches_dp_at_the_seam() {
        use rand::Rng;
        // 22 units forces branch and bound for p=2; compare against the
        // DP on the same instance split into two 11-unit halves is not
        // valid, so instead compare B&B vs DP at n=18 by lowering DP_CAP
        // via direct calls.
        let amb = Ambient::Euclidean { dim: 2 };
        let mut rng = crate::rng::stratum_rng(23, 0);
        for _ in 0..5 {
            let atoms: Vec<(Vec<f64>, i64)> = (0..18)
                .map(|_| (vec![rng.gen::<f64>() * 4.0, rng.gen::<f64>() * 4.0], 1))
                .collect();
            let s = chain(amb, 2, false, atoms);
            let t = ZeroChain::empty(amb, p(2), false);
            let inst = Instance::build(&s, &t).unwrap();
            let dp = solve_dp(&inst);
            let bb = solve_branch_bound(&inst);
            let mut dp_costs: Vec<f64> = dp.iter().map(|g| inst.group_cost(g).0).collect();
            let mut bb_costs: Vec<f64> = bb.iter().map(|g| inst.group_cost(g).0).collect();
            let v1 = canonical_value(&mut dp_costs);
            let v2 = canonical_value(&mut bb_costs);
            assert!((v1 - v2).abs() < 1e-9, "dp {v1} vs b&b {v2}");
        }
    }
}
