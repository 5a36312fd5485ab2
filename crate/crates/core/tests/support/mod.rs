//! Independent oracles shared by the integration tests. Nothing here calls
//! the solver or enumerator under test.
#![allow(dead_code)]

use std::collections::BTreeSet;

use chessdeg::geometry::{ColoredConfig, Rational};
use chessdeg::simplicial::{IntegerChain, Simplex};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Every rainbow partition into exactly `r` nonempty blocks, found by
/// running through all `(r+1)^n` labelings and canonicalizing.
pub fn brute_force_partitions(config: &ColoredConfig, r: usize) -> BTreeSet<Vec<Vec<usize>>> {
    let n = config.len();
    let mut out = BTreeSet::new();
    let total = (r as u64 + 1).pow(n as u32);
    for code in 0..total {
        let mut rest = code;
        let mut blocks = vec![Vec::new(); r];
        for i in 0..n {
            let label = (rest % (r as u64 + 1)) as usize;
            rest /= r as u64 + 1;
            if label < r {
                blocks[label].push(i);
            }
        }
        if blocks.iter().any(Vec::is_empty) {
            continue;
        }
        let rainbow = blocks.iter().all(|b| {
            let colors: BTreeSet<usize> = b.iter().map(|&i| config.color(i)).collect();
            colors.len() == b.len()
        });
        if rainbow {
            blocks.sort();
            out.insert(blocks);
        }
    }
    out
}

/// Rank of `rows` and, if the last column is not a pivot column and every
/// other column is, the unique solution.
fn solve_exact(mut rows: Vec<Vec<Rational>>, unknowns: usize) -> Option<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..=unknowns {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..=unknowns {
                    let sub = &f * &rows[r][j];
                    rows[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.last() == Some(&unknowns) || pivots.len() != unknowns {
        return None;
    }
    Some((0..unknowns).map(|i| rows[i][unknowns].clone()).collect())
}

/// Whether the hulls of `blocks` share a point, decided by trying every
/// set of weight variables as the support of a vertex of the feasible
/// region `{w >= 0, sum per block = 1, all block combinations equal}`.
pub fn vertex_oracle_feasible(config: &ColoredConfig, blocks: &[Vec<usize>]) -> bool {
    let vars: Vec<(usize, usize)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(b, block)| block.iter().map(move |&i| (b, i)))
        .collect();
    let n = vars.len();
    let d = config.dim();
    // equations as (coefficient per variable, right-hand side)
    let mut eqs: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for b in 0..blocks.len() {
        let row = vars.iter().map(|&(bb, _)| if bb == b { Rational::one() } else { Rational::zero() }).collect();
        eqs.push((row, Rational::one()));
    }
    for b in 1..blocks.len() {
        for t in 0..d {
            let row = vars
                .iter()
                .map(|&(bb, i)| {
                    let x = config.point(i).coords[t].clone();
                    if bb == b {
                        x
                    } else if bb == 0 {
                        -x
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            eqs.push((row, Rational::zero()));
        }
    }
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|&j| mask & (1 << j) != 0).collect();
        // Each block needs a positive weight, so a vertex uses every block.
        if (0..blocks.len()).any(|b| !support.iter().any(|&j| vars[j].0 == b)) {
            continue;
        }
        let rows: Vec<Vec<Rational>> = eqs
            .iter()
            .map(|(row, rhs)| support.iter().map(|&j| row[j].clone()).chain([rhs.clone()]).collect())
            .collect();
        if let Some(x) = solve_exact(rows, support.len()) {
            if x.iter().all(|v| !v.is_negative()) {
                return true;
            }
        }
    }
    false
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn parity(p: &[usize]) -> usize {
    let mut inv = 0;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            if p[a] > p[b] {
                inv += 1;
            }
        }
    }
    inv % 2
}

/// `sum over pi in S_r of (-1)^sgn(pi) (pi_1,1),...,(pi_{r-1},r-1)` on
/// `Delta_{r,r-1}`, ordered simplices rewritten in sorted vertex order.
pub fn permutation_sign_class(r: usize) -> IntegerChain {
    let n = r - 1;
    let mut chain = IntegerChain::zero(r as isize - 2);
    for pi in permutations(r) {
        let ordered: Vec<usize> = (0..n).map(|j| pi[j] * n + j).collect();
        let (s, sign) = Simplex::from_ordered(&ordered).unwrap();
        let coeff = if parity(&pi) == 0 { sign } else { -sign };
        chain.add_term(s, BigInt::from(coeff)).unwrap();
    }
    chain
}

/// `sum_i (-1)^(i-1) (1,...,i^,...,r)` on the boundary of the simplex.
pub fn simplex_boundary_class(r: usize) -> IntegerChain {
    let mut chain = IntegerChain::zero(r as isize - 2);
    for i in 0..r {
        let face: Vec<usize> = (0..r).filter(|&v| v != i).collect();
        let coeff = if i % 2 == 0 { 1 } else { -1 };
        chain.add_term(Simplex::new(face).unwrap(), BigInt::from(coeff)).unwrap();
    }
    chain
}

/// Whether two chains agree up to one global sign.
pub fn equal_up_to_sign(a: &IntegerChain, b: &IntegerChain) -> bool {
    a == b || *a == b.scaled(&BigInt::from(-1))
}

pub fn abs_eq(a: &BigInt, b: u64) -> bool {
    a.abs() == BigInt::from(b)
}
