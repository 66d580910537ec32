//! Exact optimal tours for small instances.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::instance::{Instance, Vertex};
use crate::tour::{tour_cost, Tour};

pub const DEFAULT_HELD_KARP_LIMIT: usize = 16;
pub const BRUTE_FORCE_LIMIT: usize = 10;
/// Largest `n` the dynamic program accepts whatever limit is requested.
pub const HELD_KARP_MAX: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactMethod {
    HeldKarp,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub tour: Tour,
    pub cost: u64,
    pub method: ExactMethod,
}

/// Held-Karp dynamic program over (subset, last vertex) with vertex 0 as
/// the fixed start.
///
/// Ties are broken towards the smallest predecessor and the smallest final
/// vertex, so the returned optimum is a deterministic function of the
/// instance.
pub fn held_karp(instance: &Instance, limit: usize) -> Result<ExactResult> {
    let n = instance.n();
    let limit = limit.min(HELD_KARP_MAX);
    if n > limit {
        return Err(Error::SizeExceeded { n, limit });
    }
    // vertices 1..n are bits 0..n-1 of the subset mask
    let m = n - 1;
    let full = (1usize << m) - 1;
    const INF: u32 = u32::MAX;
    let mut dp = vec![INF; (1 << m) * m];
    let mut parent = vec![u8::MAX; (1 << m) * m];
    let at = |mask: usize, last: usize| mask * m + last;
    for j in 0..m {
        dp[at(1 << j, j)] = instance.cost(0, j + 1);
    }
    for mask in 1..=full {
        for last in 0..m {
            if mask >> last & 1 == 0 || mask == 1 << last {
                continue;
            }
            let prev_mask = mask & !(1 << last);
            let mut best = INF;
            let mut best_prev = u8::MAX;
            for prev in 0..m {
                if prev_mask >> prev & 1 == 0 {
                    continue;
                }
                let base = dp[at(prev_mask, prev)];
                let cand = base + instance.cost(prev + 1, last + 1);
                if cand < best {
                    best = cand;
                    best_prev = prev as u8;
                }
            }
            dp[at(mask, last)] = best;
            parent[at(mask, last)] = best_prev;
        }
    }
    let (best_last, best) = (0..m)
        .map(|j| (j, dp[at(full, j)] + instance.cost(j + 1, 0)))
        .min_by_key(|&(j, c)| (c, j))
        .expect("n >= 3");
    let mut rev = Vec::with_capacity(n);
    let (mut mask, mut last) = (full, best_last);
    loop {
        rev.push(last + 1);
        let p = parent[at(mask, last)];
        mask &= !(1 << last);
        if p == u8::MAX {
            break;
        }
        last = p as usize;
    }
    let mut order = vec![0];
    order.extend(rev.into_iter().rev());
    let tour = Tour::new(n, order)?;
    let cost = tour_cost(instance, &tour)?;
    if cost != u64::from(best) {
        return Err(Error::Internal(format!(
            "Held-Karp table says {best}, tour costs {cost}"
        )));
    }
    Ok(ExactResult {
        tour,
        cost,
        method: ExactMethod::HeldKarp,
    })
}

/// Minimum over all `(n-1)!/2` distinct tours: vertex 0 first and the
/// second vertex smaller than the last, so each cycle is seen once.
pub fn brute_force(instance: &Instance) -> Result<ExactResult> {
    let n = instance.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeExceeded {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut best: Option<(u64, Vec<Vertex>)> = None;
    for perm in (1..n).permutations(n - 1) {
        if perm[0] > perm[n - 2] {
            continue;
        }
        let mut cost =
            u64::from(instance.cost(0, perm[0])) + u64::from(instance.cost(perm[n - 2], 0));
        cost += perm
            .windows(2)
            .map(|w| u64::from(instance.cost(w[0], w[1])))
            .sum::<u64>();
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            let mut order = vec![0];
            order.extend(perm);
            best = Some((cost, order));
        }
    }
    let (cost, order) = best.expect("n >= 3");
    Ok(ExactResult {
        tour: Tour::new(n, order)?,
        cost,
        method: ExactMethod::BruteForce,
    })
}
