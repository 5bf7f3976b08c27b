//! Dense bit-packed matrices over F2.
//!
//! Rows are stored as runs of `u64` words. Elimination always takes the
//! first nonzero entry as pivot, scanning columns left to right, so kernels
//! and solutions are reproducible.

use std::fmt;

const W: usize = 64;

fn words(n: usize) -> usize {
    n.div_ceil(W)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words(cols);
        F2Matrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from nested rows of 0/1. Panics on ragged input.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged row {i}");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x & 1 == 1);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i * self.stride + j / W] >> (j % W)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        let w = &mut self.data[i * self.stride + j / W];
        if v {
            *w |= 1 << (j % W);
        } else {
            *w &= !(1 << (j % W));
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.data[i * self.stride + j / W] ^= 1 << (j % W);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    /// `row[dst] ^= row[src]`
    fn add_row(&mut self, src: usize, dst: usize) {
        let s = self.stride;
        if src == dst {
            self.data[dst * s..(dst + 1) * s].fill(0);
            return;
        }
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        for (x, y) in b.iter_mut().zip(a) {
            *x ^= *y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.data.swap(a * s + k, b * s + k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.ones_in_row(i) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Column indices of the set bits in row `i`, ascending.
    pub fn ones_in_row(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let cols = self.cols;
        self.row(i).iter().enumerate().flat_map(move |(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * W + b)
            })
        })
        .take_while(move |&j| j < cols)
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        let s = out.stride;
        for i in 0..self.rows {
            for k in self.ones_in_row(i) {
                let src = other.row(k);
                for (x, y) in out.data[i * s..(i + 1) * s].iter_mut().zip(src) {
                    *x ^= *y;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in sum");
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x ^= *y;
        }
        out
    }

    /// `[self | other]`
    pub fn hcat(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hcat");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in self.ones_in_row(i) {
                out.set(i, j, true);
            }
            for j in other.ones_in_row(i) {
                out.set(i, self.cols + j, true);
            }
        }
        out
    }

    /// Stack `other` below `self`.
    pub fn vcat(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vcat");
        let mut out = self.clone();
        out.rows += other.rows;
        out.data.extend_from_slice(&other.data);
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> F2Matrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (oi, i) in rows.clone().enumerate() {
            for j in self.ones_in_row(i) {
                if cols.contains(&j) {
                    out.set(oi, j - cols.start, true);
                }
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(p, r);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.add_row(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

pub fn rank(m: &F2Matrix) -> usize {
    m.clone().rref().len()
}

/// Rows of the result span `{v : M v = 0}`.
pub fn kernel_basis(m: &F2Matrix) -> F2Matrix {
    let mut e = m.clone();
    let pivots = e.rref();
    let free: Vec<usize> = {
        let mut is_piv = vec![false; m.cols];
        for &p in &pivots {
            is_piv[p] = true;
        }
        (0..m.cols).filter(|&j| !is_piv[j]).collect()
    };
    let mut k = F2Matrix::zeros(free.len(), m.cols);
    for (row, &f) in free.iter().enumerate() {
        k.set(row, f, true);
        for (pr, &pc) in pivots.iter().enumerate() {
            if e.get(pr, f) {
                k.set(row, pc, true);
            }
        }
    }
    k
}

/// Some `X` with `A X = B`, or `None` if the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(a: &F2Matrix, b: &F2Matrix) -> Option<F2Matrix> {
    assert_eq!(a.rows, b.rows, "solve: A and B must have the same row count");
    let n = a.cols;
    let mut aug = a.hcat(b);
    let pivots = aug.rref();
    if pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = F2Matrix::zeros(n, b.cols);
    for (pr, &pc) in pivots.iter().enumerate() {
        for j in aug.ones_in_row(pr) {
            if j >= n {
                x.set(pc, j - n, true);
            }
        }
    }
    Some(x)
}

/// Like [`solve`], but each column of `X` is the lexicographically smallest
/// solution, reading `x_0` as the most significant coordinate.
pub fn solve_lex_min(a: &F2Matrix, b: &F2Matrix) -> Option<F2Matrix> {
    let n = a.cols;
    let mut rev = F2Matrix::zeros(a.rows, n);
    for i in 0..a.rows {
        for j in a.ones_in_row(i) {
            rev.set(i, n - 1 - j, true);
        }
    }
    // pivots taken from the right end leave the leading coordinates free, hence zero
    let y = solve(&rev, b)?;
    let mut x = F2Matrix::zeros(n, b.cols);
    for i in 0..n {
        for j in y.ones_in_row(i) {
            x.set(n - 1 - i, j, true);
        }
    }
    Some(x)
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let s: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}
