//! Brute-force flat-distance oracle: enumerate every partition of the
//! unit multiset, with no group-size cap, pruning only by the incumbent
//! (which never cuts an optimum since group costs are nonnegative).

use super::{canonical_value, tie_slack, FlatOptions, Instance};
use crate::chain::ZeroChain;
use crate::{Error, Result};

pub const ORACLE_UNIT_CAP: usize = 12;

/// Exhaustive optimum over all pairings, Steiner groupings and drops.
pub fn flat_oracle_0(s: &ZeroChain<f64>, t: &ZeroChain<f64>) -> Result<f64> {
    let _ = FlatOptions::default();
    let inst = Instance::build(s, t)?;
    let n = inst.units.len();
    if n > ORACLE_UNIT_CAP {
        return Err(Error::CapExceeded {
            units: n,
            cap: ORACLE_UNIT_CAP,
            hint: " (the oracle enumerates all partitions)".into(),
        });
    }
    if n == 0 {
        return Ok(0.0);
    }
    // Memoize group costs per subset mask.
    let full: u32 = (1u32 << n) - 1;
    let mut cost = vec![f64::NAN; (full + 1) as usize];
    for mask in 1..=full {
        let members: Vec<usize> =
            (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        cost[mask as usize] = inst.group_cost(&members).0;
    }

    struct Ctx {
        cost: Vec<f64>,
        best: f64,
        n: usize,
        // Second pass: collect canonical values of every partition
        // within the tie slack of the first-pass optimum.
        limit: f64,
        best_canonical: f64,
    }
    let mut ctx = Ctx {
        cost,
        best: f64::INFINITY,
        n,
        limit: f64::INFINITY,
        best_canonical: f64::INFINITY,
    };
    fn rec(ctx: &mut Ctx, remaining: u32, partial: f64) {
        if remaining == 0 {
            if partial < ctx.best {
                ctx.best = partial;
            }
            return;
        }
        if partial >= ctx.best {
            return;
        }
        let low = remaining.trailing_zeros();
        let rest = remaining & !(1 << low);
        let mut sub = rest;
        loop {
            let grp = sub | (1 << low);
            let c = ctx.cost[grp as usize];
            rec(ctx, remaining & !grp, partial + c);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        let _ = ctx.n;
    }
    fn rec_canonical(ctx: &mut Ctx, remaining: u32, partial: f64, picked: &mut Vec<f64>) {
        if remaining == 0 {
            let mut costs = picked.clone();
            let canon = canonical_value(&mut costs);
            if canon < ctx.best_canonical {
                ctx.best_canonical = canon;
            }
            return;
        }
        if partial > ctx.limit {
            return;
        }
        let low = remaining.trailing_zeros();
        let rest = remaining & !(1 << low);
        let mut sub = rest;
        loop {
            let grp = sub | (1 << low);
            let c = ctx.cost[grp as usize];
            picked.push(c);
            rec_canonical(ctx, remaining & !grp, partial + c, picked);
            picked.pop();
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    rec(&mut ctx, full, 0.0);
    ctx.limit = ctx.best + tie_slack(ctx.best);
    let mut picked = Vec::new();
    rec_canonical(&mut ctx, full, 0.0, &mut picked);
    Ok(ctx.best_canonical)
}
