//! Exact feasibility of `{x >= 0 : A x = b}` by a phase-1 simplex.
//!
//! The tableau is kept integral with fraction-free pivoting: every entry is
//! the true value times the current basis determinant `D > 0`, and a pivot
//! on `p = T[r][s]` maps `T[i][j]` to `(T[i][j] p - T[i][s] T[r][j]) / D`,
//! which divides exactly. Bland's rule prevents cycling. The solve runs in
//! `i128` first and restarts in `BigInt` if any intermediate overflows.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;

trait Entry: Clone {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn zero() -> Self;
    fn signum(&self) -> i8;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Option<Self>;
}

impl Entry for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn zero() -> Self {
        0
    }
    fn signum(&self) -> i8 {
        i128::signum(*self) as i8
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        debug_assert_eq!(self % o, 0);
        Some(self / o)
    }
}

impl Entry for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn signum(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        debug_assert!((self % o).is_zero());
        Some(self / o)
    }
}

/// Scales each equation to integers and makes the right-hand side
/// nonnegative.
fn integral_system(a: &[Vec<Rational>], b: &[Rational]) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(a.len());
    let mut rhs = Vec::with_capacity(b.len());
    for (row, bi) in a.iter().zip(b) {
        let mut l = bi.denom().clone();
        for v in row {
            l = l.lcm(v.denom());
        }
        let scale = |v: &Rational| (v * Rational::from_integer(l.clone())).to_integer();
        let mut ints: Vec<BigInt> = row.iter().map(scale).collect();
        let mut r = scale(bi);
        if r.is_negative() {
            ints.iter_mut().for_each(|v| *v = -v.clone());
            r = -r;
        }
        rows.push(ints);
        rhs.push(r);
    }
    (rows, rhs)
}

struct Tableau<T> {
    /// `m` constraint rows then the objective row; columns are the `n`
    /// variables, `m` artificials and the right-hand side.
    t: Vec<Vec<T>>,
    basis: Vec<usize>,
    det: T,
}

fn solve<T: Entry>(rows: &[Vec<BigInt>], rhs: &[BigInt], n: usize) -> Option<Option<Vec<Rational>>> {
    let m = rows.len();
    let width = n + m + 1;
    let mut t = Vec::with_capacity(m + 1);
    let mut objective = vec![T::zero(); width];
    for (i, (row, bi)) in rows.iter().zip(rhs).enumerate() {
        let mut line = vec![T::zero(); width];
        for (j, v) in row.iter().enumerate() {
            line[j] = T::from_big(v)?;
            objective[j] = objective[j].sub(&line[j])?;
        }
        line[n + i] = T::from_big(&BigInt::one())?;
        line[width - 1] = T::from_big(bi)?;
        objective[width - 1] = objective[width - 1].sub(&line[width - 1])?;
        t.push(line);
    }
    t.push(objective);
    let mut tab = Tableau { t, basis: (n..n + m).collect(), det: T::from_big(&BigInt::one())? };

    loop {
        let Some(s) = (0..n + m).find(|&j| tab.t[m][j].signum() < 0) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if tab.t[i][s].signum() <= 0 {
                continue;
            }
            leave = Some(match leave {
                None => i,
                Some(k) => {
                    let lhs = tab.t[i][width - 1].mul(&tab.t[k][s])?;
                    let rhs = tab.t[k][width - 1].mul(&tab.t[i][s])?;
                    match lhs.sub(&rhs)?.signum().cmp(&0) {
                        Ordering::Less => i,
                        Ordering::Greater => k,
                        Ordering::Equal if tab.basis[i] < tab.basis[k] => i,
                        Ordering::Equal => k,
                    }
                }
            });
        }
        // The phase-1 objective is bounded below by zero.
        let r = leave.expect("phase-1 objective is bounded");
        pivot(&mut tab, r, s)?;
    }

    if tab.t[m][width - 1].signum() != 0 {
        return Some(None);
    }
    let det = tab.det.to_big();
    let mut x = vec![Rational::zero(); n];
    for (i, &var) in tab.basis.iter().enumerate() {
        if var < n {
            x[var] = Rational::new(tab.t[i][width - 1].to_big(), det.clone());
        }
    }
    Some(Some(x))
}

fn pivot<T: Entry>(tab: &mut Tableau<T>, r: usize, s: usize) -> Option<()> {
    let p = tab.t[r][s].clone();
    let pivot_row = tab.t[r].clone();
    for (i, row) in tab.t.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let factor = row[s].clone();
        for (v, pr) in row.iter_mut().zip(&pivot_row) {
            let updated = v.mul(&p)?.sub(&factor.mul(pr)?)?;
            *v = updated.div_exact(&tab.det)?;
        }
    }
    tab.det = p;
    tab.basis[r] = s;
    Some(())
}

/// A point of `{x >= 0 : A x = b}`, or `None` when the set is empty.
/// The returned point is a vertex of the set.
pub fn nonnegative_solution(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len(), "one right-hand side per equation");
    let n = a.first().map_or(0, Vec::len);
    assert!(a.iter().all(|row| row.len() == n), "ragged constraint matrix");
    let (rows, rhs) = integral_system(a, b);
    match solve::<i128>(&rows, &rhs, n) {
        Some(result) => result,
        None => solve::<BigInt>(&rows, &rhs, n).expect("BigInt arithmetic cannot overflow"),
    }
}
