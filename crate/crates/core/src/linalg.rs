//! Dense exact linear algebra over Z and Q: fraction-free row echelon form,
//! right/left kernels with content-normalized integer basis rows, rank, and
//! span membership. Matrices here are small (a few hundred columns at most),
//! so clarity wins over asymptotics.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::content_normalize;
use crate::error::Result;

/// Row echelon form by fraction-free elimination. Returns the nonzero rows
/// (each with coprime entries) and their pivot columns, in pivot order.
pub fn row_echelon(rows: &[Vec<BigInt>], ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut echelon: Vec<Vec<BigInt>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for row in rows {
        debug_assert_eq!(row.len(), ncols);
        let mut r = row.clone();
        // eliminate against existing pivots
        for (erow, &pc) in echelon.iter().zip(&pivots) {
            if r[pc].is_zero() {
                continue;
            }
            let a = erow[pc].clone();
            let b = r[pc].clone();
            let g = a.gcd(&b);
            let (ma, mb) = (&a / &g, &b / &g);
            for j in 0..ncols {
                r[j] = &r[j] * &ma - &erow[j] * &mb;
            }
        }
        if let Some(lead) = r.iter().position(|x| !x.is_zero()) {
            reduce_row(&mut r);
            // keep echelon sorted by pivot column
            let pos = pivots.partition_point(|&pc| pc < lead);
            echelon.insert(pos, r);
            pivots.insert(pos, lead);
        }
    }
    // back-eliminate above pivots so each pivot column is clean
    for i in (0..echelon.len()).rev() {
        let pc = pivots[i];
        let pivot_row = echelon[i].clone();
        for k in 0..i {
            if echelon[k][pc].is_zero() {
                continue;
            }
            let a = pivot_row[pc].clone();
            let b = echelon[k][pc].clone();
            let g = a.gcd(&b);
            let (ma, mb) = (&a / &g, &b / &g);
            for j in 0..ncols {
                echelon[k][j] = &echelon[k][j] * &ma - &pivot_row[j] * &mb;
            }
            reduce_row(&mut echelon[k]);
        }
    }
    (echelon, pivots)
}

fn reduce_row(r: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in r.iter() {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return;
    }
    if let Some(first) = r.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            g = -g;
        }
    }
    for x in r.iter_mut() {
        *x = &*x / &g;
    }
}

pub fn rank(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    row_echelon(rows, ncols).1.len()
}

/// Basis of the right kernel {v : M v = 0}, content-normalized integer rows.
pub fn kernel(rows: &[Vec<BigInt>], ncols: usize) -> Result<Vec<Vec<BigInt>>> {
    let (echelon, pivots) = row_echelon(rows, ncols);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; ncols];
        for &p in &pivots {
            s[p] = true;
        }
        s
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        // pivots are already back-eliminated, so each pivot row only couples
        // its pivot with free columns
        for (erow, &pc) in echelon.iter().zip(&pivots) {
            if !erow[free].is_zero() {
                v[pc] = -BigRational::new(erow[free].clone(), erow[pc].clone());
            }
        }
        let (w, _) = content_normalize(&v)?;
        basis.push(w);
    }
    Ok(basis)
}

/// Does w lie in the row span of `rows`?
pub fn in_row_span(rows: &[Vec<BigInt>], ncols: usize, w: &[BigInt]) -> bool {
    let r0 = rank(rows, ncols);
    let mut aug: Vec<Vec<BigInt>> = rows.to_vec();
    aug.push(w.to_vec());
    rank(&aug, ncols) == r0
}

/// M v for a dense integer matrix (rows x cols) and vector of length cols.
pub fn mat_vec(rows: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    rows.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_vec_rat(rows: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    rows.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let inner = b.len();
    let m = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                let t = &a[i][k] * &bk[j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn mat_mul_rat(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let m = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = vec![vec![BigRational::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                let t = &a[i][k] * &bk[j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn transpose<T: Clone + Zero>(rows: &[Vec<T>]) -> Vec<Vec<T>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let m = rows[0].len();
    let mut out = vec![vec![T::zero(); rows.len()]; m];
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            out[j][i] = x.clone();
        }
    }
    out
}

/// If w = c * v for a scalar c (v nonzero), return c.
pub fn proportionality_ratio(v: &[BigInt], w: &[BigInt]) -> Option<BigRational> {
    let i = v.iter().position(|x| !x.is_zero())?;
    let c = BigRational::new(w[i].clone(), v[i].clone());
    for j in 0..v.len() {
        let lhs = BigRational::from(w[j].clone());
        let rhs = &c * BigRational::from(v[j].clone());
        if lhs != rhs {
            return None;
        }
    }
    Some(c)
}

/// Solve the linear system M x = b over Q if consistent (M given by rows).
pub fn solve(rows: &[Vec<BigInt>], ncols: usize, b: &[BigInt]) -> Option<Vec<BigRational>> {
    let mut aug: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
    for (row, bi) in rows.iter().zip(b) {
        let mut r = row.clone();
        r.push(bi.clone());
        aug.push(r);
    }
    let (echelon, pivots) = row_echelon(&aug, ncols + 1);
    // inconsistent iff some pivot sits in the augmented column
    if pivots.iter().any(|&p| p == ncols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (erow, &pc) in echelon.iter().zip(&pivots).rev() {
        let mut acc = BigRational::from(erow[ncols].clone());
        for j in (pc + 1)..ncols {
            if !erow[j].is_zero() {
                acc -= BigRational::from(erow[j].clone()) * &x[j];
            }
        }
        x[pc] = acc / BigRational::from(erow[pc].clone());
    }
    Some(x)
}
