//! Lattice points of `ℤ^n` and multi-indices.

use serde::{Deserialize, Serialize};

/// A point of `ℤ^n`.
pub type Point = Vec<i64>;

pub fn zero(n: usize) -> Point {
    vec![0; n]
}

/// Canonical basis vector `e_j` (0-based axis).
pub fn unit(n: usize, j: usize) -> Point {
    let mut e = vec![0; n];
    e[j] = 1;
    e
}

pub fn add(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[i64]) -> Point {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[i64]) -> bool {
    a.iter().all(|&x| x == 0)
}

pub fn sup_norm(a: &[i64]) -> i64 {
    a.iter().map(|x| x.abs()).max().unwrap_or(0)
}

pub fn one_norm(a: &[i64]) -> i64 {
    a.iter().map(|x| x.abs()).sum()
}

pub fn norm_sq(a: &[i64]) -> i64 {
    a.iter().map(|x| x * x).sum()
}

/// All points with `|k|_∞ ≤ radius`, lexicographic order.
pub fn cube(n: usize, radius: i64) -> Vec<Point> {
    if radius < 0 {
        return Vec::new();
    }
    let side = (2 * radius + 1) as usize;
    let total = side.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![-radius; n];
    for _ in 0..total {
        out.push(cur.clone());
        for d in (0..n).rev() {
            cur[d] += 1;
            if cur[d] <= radius {
                break;
            }
            cur[d] = -radius;
        }
    }
    out
}

/// Points with `|k|_∞ = radius` exactly, grouped by the first axis where
/// the maximum is attained.
pub fn cube_shell(n: usize, radius: i64) -> Vec<Point> {
    if radius == 0 {
        return vec![zero(n)];
    }
    let mut out = Vec::new();
    for axis in 0..n {
        let inner = cube(axis, radius - 1);
        let outer = cube(n - axis - 1, radius);
        for head in &inner {
            for side in [-radius, radius] {
                for tail in &outer {
                    let mut k = Vec::with_capacity(n);
                    k.extend_from_slice(head);
                    k.push(side);
                    k.extend_from_slice(tail);
                    out.push(k);
                }
            }
        }
    }
    out
}

/// Points with `|k|_1 = radius` exactly.
pub fn cross_shell(n: usize, radius: i64) -> Vec<Point> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn rec(d: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Point>) {
        let n = cur.len();
        if d == n - 1 {
            if left == 0 {
                cur[d] = 0;
                out.push(cur.clone());
            } else {
                cur[d] = -left;
                out.push(cur.clone());
                cur[d] = left;
                out.push(cur.clone());
            }
            return;
        }
        for v in -left..=left {
            cur[d] = v;
            rec(d + 1, left - v.abs(), cur, out);
        }
    }
    rec(0, radius, &mut cur, &mut out);
    out
}

/// Multi-index `α ∈ ℕ^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α| = Σ α_i`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, assuming `other ≤ self`.
    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `α! = Π α_i!`.
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&a| (1..=a).map(f64::from).product::<f64>())
            .product()
    }

    /// `binom(α, β) = Π binom(α_i, β_i)`.
    pub fn binomial(&self, beta: &MultiIndex) -> f64 {
        self.0
            .iter()
            .zip(&beta.0)
            .map(|(&a, &b)| {
                if b > a {
                    0.0
                } else {
                    (0..b).fold(1.0, |acc, i| acc * f64::from(a - i) / f64::from(i + 1))
                }
            })
            .product()
    }

    /// `k^α` for a lattice point, as an exact integer.
    pub fn monomial(&self, k: &[i64]) -> i64 {
        self.0
            .iter()
            .zip(k)
            .map(|(&a, &x)| x.pow(a))
            .product()
    }

    /// All `β ≤ α` in lexicographic order.
    pub fn below(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(self.dim()))];
        for &a in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for prefix in &out {
                for b in 0..=a {
                    let mut p = prefix.0.clone();
                    p.push(b);
                    next.push(MultiIndex(p));
                }
            }
            out = next;
        }
        out
    }

    /// All multi-indices of dimension `n` with `|α| = total`.
    pub fn with_order(n: usize, total: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(d: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if d == cur.len() - 1 {
                cur[d] = left;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for v in (0..=left).rev() {
                cur[d] = v;
                rec(d + 1, left - v, cur, out);
            }
        }
        if n == 0 {
            return out;
        }
        rec(0, total, &mut cur, &mut out);
        out
    }

    /// All multi-indices of dimension `n` with `|α| ≤ max`.
    pub fn up_to(n: usize, max: u32) -> Vec<MultiIndex> {
        (0..=max).flat_map(|t| MultiIndex::with_order(n, t)).collect()
    }

    pub fn as_point(&self) -> Point {
        self.0.iter().map(|&a| i64::from(a)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shells_partition_the_cube() {
        for n in 1..=3 {
            let total: usize = (0..=4).map(|r| cube_shell(n, r).len()).sum();
            assert_eq!(total, cube(n, 4).len());
            for r in 0..=4 {
                let shell = cube_shell(n, r);
                assert!(shell.iter().all(|k| sup_norm(k) == r));
                let mut sorted = shell.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), shell.len());
            }
        }
    }

    #[test]
    fn cross_shell_counts() {
        // |k|_1 = r in 2D has 4r points for r ≥ 1.
        assert_eq!(cross_shell(2, 0).len(), 1);
        assert_eq!(cross_shell(2, 3).len(), 12);
        assert!(cross_shell(3, 2).iter().all(|k| one_norm(k) == 2));
        assert_eq!(cross_shell(1, 5), vec![vec![-5], vec![5]]);
    }

    #[test]
    fn multi_index_binomial_and_factorial() {
        let a = MultiIndex(vec![3, 2]);
        let b = MultiIndex(vec![1, 1]);
        assert_eq!(a.binomial(&b), 6.0);
        assert_eq!(a.factorial(), 12.0);
        assert_eq!(a.below().len(), 12);
        assert!(b.le(&a));
        assert_eq!(a.monomial(&[2, -1]), 8);
    }

    #[test]
    fn with_order_counts() {
        assert_eq!(MultiIndex::with_order(2, 3).len(), 4);
        assert_eq!(MultiIndex::up_to(2, 2).len(), 6);
        assert_eq!(MultiIndex::with_order(3, 2).len(), 6);
    }
}
