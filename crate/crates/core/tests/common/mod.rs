//! Reference computations shared by the integration tests. Nothing here
//! calls into the engine's linear algebra or chain code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rank of a dense rational matrix by plain Gaussian elimination.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(pivot_row).skip(c) {
                    *x -= p * &f;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn int_rows(rows: &[&[i64]]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

/// All faces of the given simplices, by dimension.
pub fn faces(simplices: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in simplices {
        let mut s = s.clone();
        s.sort_unstable();
        for mask in 1u32..(1 << s.len()) {
            all.insert(s.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v).collect());
        }
    }
    let top = all.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![Vec::new(); top];
    for f in all {
        out[f.len() - 1].push(f);
    }
    out
}

/// Rational Betti numbers from simplicial boundary matrices.
pub fn betti(simplices: &[Vec<usize>]) -> Vec<usize> {
    let by_dim = faces(simplices);
    let index: Vec<BTreeMap<&Vec<usize>, usize>> =
        by_dim.iter().map(|fs| fs.iter().enumerate().map(|(i, f)| (f, i)).collect()).collect();
    // rank of the boundary from dimension k to k - 1
    let boundary_rank = |k: usize| -> usize {
        if k == 0 || k >= by_dim.len() {
            return 0;
        }
        let mut m = vec![vec![Q::zero(); by_dim[k].len()]; by_dim[k - 1].len()];
        for (j, s) in by_dim[k].iter().enumerate() {
            for i in 0..s.len() {
                let mut f = s.clone();
                f.remove(i);
                let sign = if i % 2 == 0 { Q::one() } else { -Q::one() };
                m[index[k - 1][&f]][j] = sign;
            }
        }
        rank(&m)
    };
    (0..by_dim.len()).map(|k| by_dim[k].len() - boundary_rank(k) - boundary_rank(k + 1)).collect()
}

pub fn series_mul(a: &[usize], b: &[usize], max: usize) -> Vec<usize> {
    (0..=max).map(|n| (0..=n).map(|i| a.get(i).copied().unwrap_or(0) * b.get(n - i).copied().unwrap_or(0)).sum()).collect()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Hilbert series of a polynomial ring on `r` generators of degree 2.
pub fn torus_fiber(r: usize, max: usize) -> Vec<usize> {
    (0..=max).map(|n| if n % 2 == 1 { 0 } else if r == 0 { usize::from(n == 0) } else { binomial(n / 2 + r - 1, r - 1) }).collect()
}
