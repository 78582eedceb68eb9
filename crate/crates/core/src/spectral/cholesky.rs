//! Sparse up-looking Cholesky factorization `P(A − σI)Pᵀ = LLᴴ`.

use super::sparse::{CsrMatrix, C64};
use crate::error::{Error, Result};

/// Lower factor in compressed column form, diagonal entry first in each column.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    perm: Vec<usize>,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<C64>,
}

impl Cholesky {
    /// Factors `A − shift·I` in the elimination order `perm` (new → old).
    pub fn factor(a: &CsrMatrix, shift: f64, perm: &[usize]) -> Result<Self> {
        let n = a.dim();
        let mut pinv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            pinv[old] = new;
        }
        let pinv = &pinv;
        let lower_row = |k: usize| lower_row(a, perm, pinv, k);

        let mut parent = vec![usize::MAX; n];
        let mut ancestor = vec![usize::MAX; n];
        for k in 0..n {
            for (mut i, _) in lower_row(k) {
                while i != usize::MAX && i < k {
                    let next = ancestor[i];
                    ancestor[i] = k;
                    if next == usize::MAX {
                        parent[i] = k;
                    }
                    i = next;
                }
            }
        }

        let mut mark = vec![usize::MAX; n];
        let mut stack = vec![0usize; n];
        let mut path = Vec::with_capacity(64);
        let mut reach = |k: usize, mark: &mut [usize], stack: &mut [usize]| -> usize {
            let mut top = n;
            mark[k] = k;
            for (i, _) in lower_row(k) {
                let mut j = i;
                path.clear();
                while mark[j] != k {
                    path.push(j);
                    mark[j] = k;
                    j = parent[j];
                }
                while let Some(p) = path.pop() {
                    top -= 1;
                    stack[top] = p;
                }
            }
            top
        };

        let mut counts = vec![1usize; n];
        for k in 0..n {
            let top = reach(k, &mut mark, &mut stack);
            for &j in &stack[top..] {
                counts[j] += 1;
            }
        }
        let mut col_ptr = vec![0usize; n + 1];
        for j in 0..n {
            col_ptr[j + 1] = col_ptr[j] + counts[j];
        }
        let nnz = col_ptr[n];
        let mut row_idx = vec![0usize; nnz];
        let mut values = vec![C64::new(0.0, 0.0); nnz];
        let mut next: Vec<usize> = col_ptr[..n].to_vec();
        let mut x = vec![C64::new(0.0, 0.0); n];
        mark.iter_mut().for_each(|m| *m = usize::MAX);

        for k in 0..n {
            let top = reach(k, &mut mark, &mut stack);
            for (i, v) in lower_row(k) {
                x[i] = v.conj();
            }
            let mut d = a.get(perm[k], perm[k]).re - shift;
            for &j in &stack[top..] {
                let lkj = x[j] / values[col_ptr[j]].re;
                x[j] = C64::new(0.0, 0.0);
                for p in col_ptr[j] + 1..next[j] {
                    x[row_idx[p]] -= values[p] * lkj;
                }
                d -= lkj.norm_sqr();
                let p = next[j];
                next[j] += 1;
                row_idx[p] = k;
                values[p] = lkj.conj();
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite { column: k, pivot: d });
            }
            let p = next[k];
            next[k] += 1;
            row_idx[p] = k;
            values[p] = C64::new(d.sqrt(), 0.0);
        }
        Ok(Self { n, perm: perm.to_vec(), col_ptr, row_idx, values })
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Solves `(A − σI) x = b`.
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let mut y: Vec<C64> = self.perm.iter().map(|&o| b[o]).collect();
        for j in 0..self.n {
            let r = self.col_ptr[j]..self.col_ptr[j + 1];
            let yj = y[j] / self.values[r.start].re;
            y[j] = yj;
            for p in r.start + 1..r.end {
                y[self.row_idx[p]] -= self.values[p] * yj;
            }
        }
        for j in (0..self.n).rev() {
            let r = self.col_ptr[j]..self.col_ptr[j + 1];
            let mut s = y[j];
            for p in r.start + 1..r.end {
                s -= self.values[p].conj() * y[self.row_idx[p]];
            }
            y[j] = s / self.values[r.start].re;
        }
        let mut out = vec![C64::new(0.0, 0.0); self.n];
        for (new, &old) in self.perm.iter().enumerate() {
            out[old] = y[new];
        }
        out
    }
}

/// Strictly lower part of row `k` of `PAPᵀ` as `(column, value)` pairs.
fn lower_row<'a>(a: &'a CsrMatrix, perm: &'a [usize], pinv: &'a [usize], k: usize) -> impl Iterator<Item = (usize, C64)> + 'a {
    let (cols, vals) = a.row(perm[k]);
    cols.iter().zip(vals).filter_map(move |(&c, &v)| {
        let i = pinv[c];
        (i < k).then_some((i, v))
    })
}
