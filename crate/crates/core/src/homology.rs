//! Integral homology through the Smith normal form.
//!
//! [`smith_normal_form`] is the exact dense algorithm (optionally with the
//! unimodular transforms). Homology of larger complexes goes through a sparse
//! reducer that first eliminates every `±1` pivot it can find and hands the
//! (usually tiny) remainder to the dense routine.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::simplicial::{sparse_boundary, IntegerMatrix, SimplicialComplex, SparseBoundary};

/// Diagonal form `D = U * M * V` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalFormResult {
    /// Nonzero invariant factors, positive and each dividing the next.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub transforms: Option<SmithTransforms>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithTransforms {
    /// Row transform, `rows x rows`.
    pub left: IntegerMatrix,
    /// Column transform, `cols x cols`.
    pub right: IntegerMatrix,
    /// `left * m * right`.
    pub diagonal_matrix: IntegerMatrix,
}

/// Exact Smith normal form. Pivots are the smallest-magnitude nonzero entry
/// of the remaining block; a pivot that fails to divide the block absorbs an
/// offending row and the step repeats.
pub fn smith_normal_form(m: &IntegerMatrix, with_transforms: bool) -> SmithNormalFormResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut left = with_transforms.then(|| IntegerMatrix::identity(rows));
    let mut right = with_transforms.then(|| IntegerMatrix::identity(cols));
    let mut diagonal = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&d, t) else {
                break;
            };
            d.swap_rows(t, pi);
            d.swap_cols(t, pj);
            if let Some(l) = left.as_mut() {
                l.swap_rows(t, pi);
            }
            if let Some(r) = right.as_mut() {
                r.swap_cols(t, pj);
            }

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(&pivot);
                d.add_row_multiple(i, t, &q);
                if let Some(l) = left.as_mut() {
                    l.add_row_multiple(i, t, &q);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                if let Some(r) = right.as_mut() {
                    r.add_col_multiple(j, t, &q);
                }
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match bad_row {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    if let Some(l) = left.as_mut() {
                        l.add_row_multiple(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if d.get(t, t).is_zero() {
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            if let Some(l) = left.as_mut() {
                l.negate_row(t);
            }
        }
        diagonal.push(d.get(t, t).clone());
    }

    let rank = diagonal.len();
    let transforms = match (left, right) {
        (Some(left), Some(right)) => Some(SmithTransforms {
            left,
            right,
            diagonal_matrix: d,
        }),
        _ => None,
    };
    SmithNormalFormResult {
        diagonal,
        rank,
        transforms,
    }
}

fn smallest_entry(d: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let e = d.get(i, j);
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            if best.as_ref().map_or(true, |(_, _, b)| a < *b) {
                let unit = a.is_one();
                best = Some((i, j, a));
                if unit {
                    let (i, j, _) = best.unwrap();
                    return Some((i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Rank and the invariant factors greater than one.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct RankAndTorsion {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Sparse elimination of unit pivots followed by a dense SNF of the rest.
pub(crate) fn rank_and_torsion(b: &SparseBoundary) -> RankAndTorsion {
    match sparse_unit_elimination(b) {
        Some(r) => r,
        None => {
            // i64 overflow during elimination; redo everything in BigInt.
            let mut m = IntegerMatrix::zeros(b.rows, b.columns.len());
            for (j, col) in b.columns.iter().enumerate() {
                for &(i, v) in col {
                    m.set(i, j, BigInt::from(v));
                }
            }
            from_dense(&m)
        }
    }
}

fn from_dense(m: &IntegerMatrix) -> RankAndTorsion {
    let snf = smith_normal_form(m, false);
    RankAndTorsion {
        rank: snf.rank,
        torsion: snf.diagonal.into_iter().filter(|x| !x.is_one()).collect(),
    }
}

fn sparse_unit_elimination(b: &SparseBoundary) -> Option<RankAndTorsion> {
    let mut cols: Vec<HashMap<usize, i64>> = b
        .columns
        .iter()
        .map(|c| c.iter().copied().filter(|&(_, v)| v != 0).collect())
        .collect();
    let mut row_index: Vec<HashSet<usize>> = vec![HashSet::new(); b.rows];
    for (j, c) in cols.iter().enumerate() {
        for &i in c.keys() {
            row_index[i].insert(j);
        }
    }
    let mut alive = vec![true; cols.len()];
    let mut rank = 0usize;

    let mut order: Vec<usize> = (0..cols.len()).collect();
    loop {
        order.retain(|&j| alive[j] && !cols[j].is_empty());
        order.sort_by_key(|&j| cols[j].len());
        let pivot = order.iter().find_map(|&j| {
            cols[j]
                .iter()
                .filter(|(_, v)| v.abs() == 1)
                .min_by_key(|(&i, _)| (row_index[i].len(), i))
                .map(|(&i, &v)| (i, j, v))
        });
        let Some((pi, pj, pv)) = pivot else {
            break;
        };
        let pivot_col: Vec<(usize, i64)> = cols[pj].iter().map(|(&i, &v)| (i, v)).collect();
        let others: Vec<usize> = row_index[pi].iter().copied().filter(|&k| k != pj).collect();
        for k in others {
            let factor = cols[k][&pi].checked_mul(pv)?;
            for &(i, v) in &pivot_col {
                let delta = factor.checked_mul(v)?;
                let entry = cols[k].entry(i).or_insert(0);
                *entry = entry.checked_sub(delta)?;
                if *entry == 0 {
                    cols[k].remove(&i);
                    row_index[i].remove(&k);
                } else {
                    row_index[i].insert(k);
                }
            }
        }
        for &(i, _) in &pivot_col {
            row_index[i].remove(&pj);
        }
        cols[pj].clear();
        alive[pj] = false;
        rank += 1;
    }

    let remaining: Vec<usize> = (0..cols.len()).filter(|&j| alive[j] && !cols[j].is_empty()).collect();
    if remaining.is_empty() {
        return Some(RankAndTorsion {
            rank,
            torsion: Vec::new(),
        });
    }
    let mut live_rows: Vec<usize> = remaining.iter().flat_map(|&j| cols[j].keys().copied()).collect();
    live_rows.sort_unstable();
    live_rows.dedup();
    let row_pos: HashMap<usize, usize> = live_rows.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut m = IntegerMatrix::zeros(live_rows.len(), remaining.len());
    for (c, &j) in remaining.iter().enumerate() {
        for (&i, &v) in &cols[j] {
            m.set(row_pos[&i], c, BigInt::from(v));
        }
    }
    let rest = from_dense(&m);
    Some(RankAndTorsion {
        rank: rank + rest.rank,
        torsion: rest.torsion,
    })
}

/// Betti numbers and torsion coefficients per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyProfile {
    pub reduced: bool,
    pub betti: Vec<usize>,
    /// Invariant factors greater than one, divisibility-chain form.
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologyProfile {
    /// Whether `H_q` vanishes for every `q <= upto` (as far as computed).
    pub fn vanishes_through(&self, upto: isize) -> bool {
        (0..=upto.max(-1))
            .filter_map(|q| usize::try_from(q).ok())
            .all(|q| self.betti.get(q).copied().unwrap_or(0) == 0 && self.torsion.get(q).map_or(true, Vec::is_empty))
    }

    pub fn to_json(&self) -> Value {
        let torsion: Vec<Vec<Value>> = self
            .torsion
            .iter()
            .map(|t| t.iter().map(integer_json).collect())
            .collect();
        json!({ "reduced": self.reduced, "betti": self.betti, "torsion": torsion })
    }

    /// Torsion split into prime powers, for display.
    pub fn primary_torsion(&self) -> Vec<Vec<BigInt>> {
        self.torsion.iter().map(|t| primary_decomposition(t)).collect()
    }
}

pub(crate) fn integer_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

/// Splits invariant factors into prime powers, sorted.
pub fn primary_decomposition(factors: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::new();
    for f in factors {
        let mut n = f.abs();
        let mut p = BigInt::from(2);
        while &p * &p <= n {
            let mut q = BigInt::one();
            while n.is_multiple_of(&p) {
                n /= &p;
                q *= &p;
            }
            if !q.is_one() {
                out.push(q);
            }
            p += 1;
        }
        if n > BigInt::one() {
            out.push(n);
        }
    }
    out.sort();
    out
}

/// Integral homology in dimensions `0..=dim K`.
pub fn homology(k: &SimplicialComplex, reduced: bool) -> HomologyProfile {
    homology_up_to(k, reduced, k.dimension())
}

/// Reduced integral homology in all dimensions.
pub fn reduced_homology(k: &SimplicialComplex) -> HomologyProfile {
    homology(k, true)
}

/// Homology in dimensions `0..=max_dim` (clamped to the dimension of `k`).
pub fn homology_up_to(k: &SimplicialComplex, reduced: bool, max_dim: isize) -> HomologyProfile {
    let top = max_dim.min(k.dimension());
    if top < 0 {
        return HomologyProfile {
            reduced,
            betti: Vec::new(),
            torsion: Vec::new(),
        };
    }
    let top = top as usize;
    let dim = k.dimension() as usize;
    // ranks[q] = rank of the boundary out of degree q, for q in 0..=top+1
    let mut ranks = Vec::with_capacity(top + 2);
    let mut torsion_of = Vec::with_capacity(top + 2);
    let mut counts = Vec::with_capacity(top + 1);
    for q in 0..=top + 1 {
        if q > dim {
            ranks.push(0);
            torsion_of.push(Vec::new());
            continue;
        }
        let b = sparse_boundary(k, q, reduced);
        if q <= top {
            counts.push(b.columns.len());
        }
        let rt = rank_and_torsion(&b);
        ranks.push(rt.rank);
        torsion_of.push(rt.torsion);
    }
    let betti = (0..=top).map(|q| counts[q] - ranks[q] - ranks[q + 1]).collect();
    let torsion = (0..=top).map(|q| torsion_of[q + 1].clone()).collect();
    HomologyProfile {
        reduced,
        betti,
        torsion,
    }
}

/// Largest `c <= q_max` with reduced `H_q(K) = 0` for every `q <= c`;
/// `-1` when already `H_0` is nonzero.
pub fn connectivity_probe(k: &SimplicialComplex, q_max: isize) -> isize {
    let profile = homology_up_to(k, true, q_max);
    let mut c = -1;
    for q in 0..=q_max {
        if q as usize >= profile.betti.len() {
            // above the dimension nothing survives
            c = q;
            continue;
        }
        if profile.betti[q as usize] != 0 || !profile.torsion[q as usize].is_empty() {
            break;
        }
        c = q;
    }
    c
}
