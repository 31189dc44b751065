//! Smith normal form over the integers by standard elimination with
//! smallest-pivot selection, in exact big-integer arithmetic.

use num::{BigInt, Signed, Zero};

#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Nonzero diagonal entries d_1 | d_2 | .., all positive.
    pub diagonal: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SmithForm {
    if m.is_empty() || m[0].is_empty() {
        return SmithForm { diagonal: vec![] };
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a = m.to_vec();
    let mut t = 0usize;
    let mut diagonal = Vec::new();
    while t < rows.min(cols) {
        // Smallest nonzero entry in the remaining block as pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        // Reduce column and row until clean.
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = div_round(&a[i][t], &a[t][t]);
                    for j in t..cols {
                        let s = &a[t][j] * &q;
                        a[i][j] -= s;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                    }
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = div_round(&a[t][j], &a[t][t]);
                    for i in t..rows {
                        let s = &a[i][t] * &q;
                        a[i][j] -= s;
                    }
                    if !a[t][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        // Enforce divisibility into later entries.
        let mut fixed = true;
        for i in t + 1..rows {
            for j in t + 1..cols {
                if !a[i][j].is_zero() && !(&a[i][j] % &a[t][t]).is_zero() {
                    for jj in t..cols {
                        let s = a[i][jj].clone();
                        a[t][jj] += s;
                    }
                    fixed = false;
                    break;
                }
            }
            if !fixed {
                break;
            }
        }
        if !fixed {
            continue;
        }
        diagonal.push(a[t][t].abs());
        t += 1;
    }
    SmithForm { diagonal }
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // Round-toward-nearest quotient keeps remainders small.
    let two = BigInt::from(2);
    let (q, r) = num::Integer::div_rem(a, b);
    if &r.abs() * &two > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}
