//! Heuristic partition search for instances too large to enumerate.
//!
//! A partition is scored by the least total L1 mismatch between each later
//! block's convex combination and the first block's, computed by a small
//! floating-point simplex. The score is zero exactly when the hulls meet,
//! up to rounding. Local search with restarts drives it down, and any
//! near-zero candidate is handed to the exact solver. Floating point only
//! steers the search; nothing is reported without an exact certificate.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use num_traits::ToPrimitive;

use super::certificate::{certified, IntersectionCertificate};
use super::config::ColoredConfig;
use super::partition::RainbowPartition;
use crate::error::Result;

const EPS: f64 = 1e-9;

/// Dense tableau simplex minimizing `c x` subject to `A x = b`, `x >= 0`,
/// started from a caller-supplied feasible basis.
struct DenseLp {
    rows: usize,
    cols: usize,
    /// `rows` constraint rows plus the reduced-cost row; `cols + 1` columns
    /// with the right-hand side last.
    t: Vec<f64>,
    basis: Vec<usize>,
}

impl DenseLp {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * (self.cols + 1) + j]
    }

    fn pivot(&mut self, r: usize, s: usize) {
        let w = self.cols + 1;
        let p = self.t[r * w + s];
        for j in 0..w {
            self.t[r * w + j] /= p;
        }
        for i in 0..=self.rows {
            if i == r {
                continue;
            }
            let f = self.t[i * w + s];
            if f != 0.0 {
                for j in 0..w {
                    self.t[i * w + j] -= f * self.t[r * w + j];
                }
            }
        }
        self.basis[r] = s;
    }

    /// Minimizes and returns the optimal objective value.
    fn minimize(&mut self, max_pivots: usize) -> f64 {
        let w = self.cols + 1;
        for _ in 0..max_pivots {
            let obj = self.rows * w;
            let mut s = None;
            let mut best = -EPS;
            for j in 0..self.cols {
                if self.t[obj + j] < best {
                    best = self.t[obj + j];
                    s = Some(j);
                }
            }
            let Some(s) = s else { break };
            let mut r = None;
            let mut ratio = f64::INFINITY;
            for i in 0..self.rows {
                let a = self.at(i, s);
                if a > EPS {
                    let q = self.at(i, self.cols) / a;
                    if q < ratio - 1e-12 {
                        ratio = q;
                        r = Some(i);
                    }
                }
            }
            let Some(r) = r else { break };
            self.pivot(r, s);
        }
        -self.t[self.rows * w + self.cols]
    }
}

/// Points of the configuration converted to `f64`, rescaled into `[-1, 1]`.
pub(crate) struct FloatPoints {
    dim: usize,
    coords: Vec<Vec<f64>>,
}

impl FloatPoints {
    pub(crate) fn new(config: &ColoredConfig) -> Self {
        let raw: Vec<Vec<f64>> = config
            .points()
            .iter()
            .map(|p| p.coords.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect())
            .collect();
        let scale = raw
            .iter()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1.0);
        FloatPoints {
            dim: config.dim(),
            coords: raw.into_iter().map(|p| p.into_iter().map(|v| v / scale).collect()).collect(),
        }
    }

    /// Least total L1 mismatch between block combinations.
    pub(crate) fn mismatch(&self, blocks: &[Vec<usize>]) -> f64 {
        let d = self.dim;
        let r = blocks.len();
        let n: usize = blocks.iter().map(Vec::len).sum();
        let rows = r + d * (r - 1);
        let slack0 = n;
        let cols = n + 2 * d * (r - 1);
        let w = cols + 1;
        let mut t = vec![0.0; (rows + 1) * w];
        let mut col = 0;
        let mut firsts = Vec::with_capacity(r);
        for (j, block) in blocks.iter().enumerate() {
            firsts.push(col);
            for &i in block {
                t[j * w + col] = 1.0;
                let p = &self.coords[i];
                for k in 0..d {
                    if j > 0 {
                        t[(r + (j - 1) * d + k) * w + col] = p[k];
                    } else {
                        for jj in 1..r {
                            t[(r + (jj - 1) * d + k) * w + col] = -p[k];
                        }
                    }
                }
                col += 1;
            }
            t[j * w + cols] = 1.0;
        }
        for row in 0..d * (r - 1) {
            t[(r + row) * w + slack0 + 2 * row] = -1.0;
            t[(r + row) * w + slack0 + 2 * row + 1] = 1.0;
        }
        let mut lp = DenseLp { rows, cols, t, basis: vec![0; rows] };
        // Cost one on every slack, expressed as a reduced-cost row after the
        // starting basis is installed.
        for s in slack0..cols {
            lp.t[rows * w + s] = 1.0;
        }
        for (j, &c) in firsts.iter().enumerate() {
            lp.pivot(j, c);
        }
        for row in 0..d * (r - 1) {
            let i = r + row;
            let rhs = lp.at(i, cols);
            let s = if rhs >= 0.0 { slack0 + 2 * row + 1 } else { slack0 + 2 * row };
            lp.pivot(i, s);
        }
        lp.minimize(50 * (rows + cols)).max(0.0)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct SearchOutcome {
    pub found: Option<(RainbowPartition, IntersectionCertificate)>,
    pub lp_calls: u64,
}

/// Assignment of points to blocks (`None` = unused) respecting colors.
#[derive(Clone)]
struct State {
    assign: Vec<Option<usize>>,
    blocks: Vec<Vec<usize>>,
}

impl State {
    fn from_assign(assign: Vec<Option<usize>>, r: usize) -> Self {
        let mut blocks = vec![Vec::new(); r];
        for (i, a) in assign.iter().enumerate() {
            if let Some(b) = a {
                blocks[*b].push(i);
            }
        }
        State { assign, blocks }
    }
}

fn random_state(config: &ColoredConfig, r: usize, rng: &mut ChaCha8Rng) -> State {
    loop {
        let mut assign = vec![None; config.len()];
        for c in 0..config.color_count() {
            let mut members: Vec<usize> = (0..config.len()).filter(|&i| config.color(i) == c).collect();
            members.shuffle(rng);
            let mut slots: Vec<usize> = (0..r).collect();
            slots.shuffle(rng);
            for (&i, &b) in members.iter().zip(&slots) {
                assign[i] = Some(b);
            }
        }
        let state = State::from_assign(assign, r);
        if state.blocks.iter().all(|b| !b.is_empty()) {
            return state;
        }
    }
}

/// Every neighbor: move one point to another block (or in or out of use)
/// or exchange two points between blocks, keeping blocks rainbow and
/// nonempty.
fn neighbors(config: &ColoredConfig, state: &State, r: usize) -> Vec<Vec<Option<usize>>> {
    let n = config.len();
    let has = |b: usize, c: usize, except: usize| {
        state.blocks[b].iter().any(|&i| i != except && config.color(i) == c)
    };
    let mut out = Vec::new();
    for i in 0..n {
        let c = config.color(i);
        let from = state.assign[i];
        let leaves_empty = from.is_some_and(|b| state.blocks[b].len() == 1);
        for b in 0..r {
            if Some(b) != from && !leaves_empty && !has(b, c, usize::MAX) {
                let mut a = state.assign.clone();
                a[i] = Some(b);
                out.push(a);
            }
        }
        for j in i + 1..n {
            let (ai, aj) = (state.assign[i], state.assign[j]);
            if ai == aj {
                continue;
            }
            let cj = config.color(j);
            let ok_i = aj.map_or(true, |b| c == cj || !has(b, c, j));
            let ok_j = ai.map_or(true, |b| c == cj || !has(b, cj, i));
            if ok_i && ok_j {
                let mut a = state.assign.clone();
                a.swap(i, j);
                out.push(a);
            }
        }
    }
    out
}

/// First-improvement descent from random rainbow assignments, restarting at
/// local minima, until `budget` LP evaluations (floating or exact) are spent.
pub(crate) fn stochastic_search(
    config: &ColoredConfig,
    r: usize,
    budget: u64,
    seed: u64,
) -> Result<SearchOutcome> {
    if config.len() < r {
        return Ok(SearchOutcome { found: None, lp_calls: 0 });
    }
    let pts = FloatPoints::new(config);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut calls = 0u64;
    let exact = |blocks: &[Vec<usize>], calls: &mut u64| -> Result<Option<(RainbowPartition, IntersectionCertificate)>> {
        *calls += 1;
        let p = RainbowPartition::new(config, blocks.to_vec())?;
        Ok(certified(config, &p)?.map(|c| (p, c)))
    };
    while calls < budget {
        let mut state = random_state(config, r, &mut rng);
        calls += 1;
        let mut score = pts.mismatch(&state.blocks);
        loop {
            if score < 1e-7 {
                if let Some(hit) = exact(&state.blocks, &mut calls)? {
                    return Ok(SearchOutcome { found: Some(hit), lp_calls: calls });
                }
            }
            let mut moves = neighbors(config, &state, r);
            moves.shuffle(&mut rng);
            let mut improved = false;
            for a in moves {
                if calls >= budget {
                    return Ok(SearchOutcome { found: None, lp_calls: calls });
                }
                let cand = State::from_assign(a, r);
                calls += 1;
                let s = pts.mismatch(&cand.blocks);
                if s < score - 1e-12 {
                    state = cand;
                    score = s;
                    improved = true;
                    break;
                }
            }
            if !improved {
                break;
            }
        }
    }
    Ok(SearchOutcome { found: None, lp_calls: calls })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::config::random_config;

    #[test]
    fn mismatch_detects_meeting_hulls() {
        let c = random_config(1, &[1, 1, 1, 1], 3, 10).unwrap();
        let pts = FloatPoints::new(&c);
        let mut xs: Vec<(f64, usize)> = (0..4).map(|i| (pts.coords[i][0], i)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let outer = vec![xs[0].1, xs[3].1];
        let inner = vec![xs[1].1];
        assert!(pts.mismatch(&[outer, inner]) < 1e-12);
        let low = vec![xs[0].1, xs[1].1];
        let high = vec![xs[2].1, xs[3].1];
        if xs[1].0 < xs[2].0 {
            assert!(pts.mismatch(&[low, high]) > 1e-6);
        }
    }

    #[test]
    fn finds_radon_partitions() {
        for seed in 0..20 {
            let c = random_config(2, &[3, 1, 1], seed, 1000).unwrap();
            let out = stochastic_search(&c, 2, 10_000, seed).unwrap();
            assert!(out.found.is_some(), "seed {seed}");
        }
    }
}

