//! Banded matrices and a direct banded LU factorization.
//!
//! Everything assembled in this crate (stiffness operators, slab Jacobians)
//! has small bandwidth, so a band factorization with partial pivoting covers
//! all linear solves. The factorization follows the classic band-storage
//! scheme: pivoting introduces fill of at most `kl` extra superdiagonals,
//! which the working storage accounts for up front.

use crate::error::{Error, Result};

/// Row-major banded matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row `i` stores columns `i - kl ..= i + ku` at
    /// `data[i * (kl + ku + 1) + (j - i + kl)]`.
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        assert!(n > 0);
        let kl = kl.min(n - 1);
        let ku = ku.min(n - 1);
        BandedMatrix {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kl(&self) -> usize {
        self.kl
    }

    pub fn ku(&self) -> usize {
        self.ku
    }

    #[inline]
    fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[i * (self.kl + self.ku + 1) + (j + self.kl - i)]
        } else {
            0.0
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        self.data[i * (self.kl + self.ku + 1) + (j + self.kl - i)] = value;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        self.data[i * (self.kl + self.ku + 1) + (j + self.kl - i)] += value;
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        let width = self.kl + self.ku + 1;
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            let row = &self.data[i * width..(i + 1) * width];
            let mut acc = 0.0;
            for j in lo..=hi {
                acc += row[j + self.kl - i] * x[j];
            }
            y[i] = acc;
        }
    }

    /// LU factorization with partial pivoting.
    pub fn factor(&self) -> Result<BandedLu> {
        BandedLu::new(self)
    }
}

/// Factored form of a [`BandedMatrix`], ready for repeated solves.
#[derive(Debug)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    /// Superdiagonals of the factored matrix, `ku + kl` to hold pivot fill.
    kw: usize,
    /// Column-major band: column `j` stores rows `j - kw ..= j + kl` at
    /// `data[j * ld + (i + kw - j)]`.
    data: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    fn new(a: &BandedMatrix) -> Result<Self> {
        let n = a.n;
        let kl = a.kl;
        let kw = (a.ku + a.kl).min(n - 1);
        let ld = kl + kw + 1;
        let mut data = vec![0.0; n * ld];
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + a.ku).min(n - 1) {
                data[j * ld + (i + kw - j)] = a.get(i, j);
            }
        }

        let idx = |i: usize, j: usize| j * ld + (i + kw - j);
        let mut pivots = vec![0usize; n];
        for j in 0..n {
            let row_end = (j + kl).min(n - 1);
            // Pivot search in column j.
            let mut p = j;
            let mut best = data[idx(j, j)].abs();
            for i in (j + 1)..=row_end {
                let v = data[idx(i, j)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::SingularMatrix);
            }
            pivots[j] = p;
            let col_end = (j + kw).min(n - 1);
            if p != j {
                for c in j..=col_end {
                    data.swap(idx(j, c), idx(p, c));
                }
            }
            let pivot = data[idx(j, j)];
            for i in (j + 1)..=row_end {
                let l = data[idx(i, j)] / pivot;
                data[idx(i, j)] = l;
                for c in (j + 1)..=col_end {
                    let u = data[idx(j, c)];
                    if u != 0.0 {
                        data[idx(i, c)] -= l * u;
                    }
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            kw,
            data,
            pivots,
        })
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let ld = self.kl + self.kw + 1;
        let idx = |i: usize, j: usize| j * ld + (i + self.kw - j);
        // Forward substitution with the pivot permutation applied on the fly.
        for j in 0..self.n {
            b.swap(j, self.pivots[j]);
            let bj = b[j];
            if bj != 0.0 {
                for i in (j + 1)..=(j + self.kl).min(self.n - 1) {
                    b[i] -= self.data[idx(i, j)] * bj;
                }
            }
        }
        // Back substitution.
        for j in (0..self.n).rev() {
            let mut acc = b[j];
            for c in (j + 1)..=(j + self.kw).min(self.n - 1) {
                acc -= self.data[idx(j, c)] * b[c];
            }
            b[j] = acc / self.data[idx(j, j)];
        }
    }
}
