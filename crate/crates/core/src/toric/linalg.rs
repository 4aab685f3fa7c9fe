//! Small dense exact linear algebra (dimension <= 3 in practice).

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Point = Vec<Rational>;

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn centroid(points: &[&Point]) -> Point {
    let k = Rational::from_integer(points.len().into());
    let dim = points[0].len();
    (0..dim)
        .map(|i| points.iter().fold(Rational::zero(), |acc, p| acc + &p[i]) / &k)
        .collect()
}

/// Row echelon form in place; returns the rank.
fn eliminate(m: &mut [Vec<Rational>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let pivot = m[rank].clone();
        for row in &mut m[rank + 1..] {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x -= &f * p;
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    eliminate(&mut m)
}

pub fn det(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut sign = Rational::one();
    let mut acc = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            sign = -sign;
        }
        let pivot = m[col].clone();
        for row in &mut m[col + 1..] {
            let f = &row[col] / &pivot[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x -= &f * p;
            }
        }
        acc *= &m[col][col];
    }
    sign * acc
}

/// Solves the square system `a x = b`; `None` when singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Point> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    if eliminate(&mut m) < n || (0..n).any(|i| m[i][i].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let tail = (i + 1..n).fold(m[i][n].clone(), |acc, j| acc - &m[i][j] * &x[j]);
        x[i] = tail / &m[i][i];
    }
    Some(x)
}

/// Generalized cross product of `n - 1` vectors in `R^n`: a vector orthogonal
/// to all of them, nonzero iff they are independent.
pub fn cross(vectors: &[Vec<Rational>], n: usize) -> Point {
    assert_eq!(vectors.len() + 1, n);
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<Rational>> = vectors
                .iter()
                .map(|v| (0..n).filter(|&c| c != j).map(|c| v[c].clone()).collect())
                .collect();
            let d = if minor.is_empty() {
                Rational::one()
            } else {
                det(&minor)
            };
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// All `k`-element index subsets of `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}
