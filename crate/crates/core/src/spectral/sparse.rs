//! Compressed sparse row storage for complex Hermitian matrices.

use crate::error::{Error, Result};
use crate::par;
use num_complex::Complex64;
use std::io::{Read, Write};
use std::path::Path;

pub type C64 = Complex64;

/// A square complex matrix in compressed row form with sorted column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    /// Builds from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(n: usize, mut t: Vec<(usize, usize, C64)>) -> Self {
        t.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(t.len());
        let mut values: Vec<C64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *values.last_mut().expect("previous entry") += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { n, row_ptr, col_idx, values }
    }

    pub fn from_parts(n: usize, row_ptr: Vec<usize>, col_idx: Vec<usize>, values: Vec<C64>) -> Result<Self> {
        let ok = row_ptr.len() == n + 1
            && row_ptr[0] == 0
            && row_ptr.windows(2).all(|w| w[0] <= w[1])
            && row_ptr[n] == col_idx.len()
            && col_idx.len() == values.len()
            && col_idx.iter().all(|&c| c < n);
        if !ok {
            return Err(Error::Mismatch("inconsistent compressed row arrays".into()));
        }
        Ok(Self { n, row_ptr, col_idx, values })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> (&[usize], &[C64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map(|k| vals[k]).unwrap_or_default()
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        par::fill(y, |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).fold(C64::new(0.0, 0.0), |acc, (&c, &v)| acc + v * x[c])
        });
    }

    pub fn mul(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.n];
        self.matvec(x, &mut y);
        y
    }

    /// Exact test of `A = Aᴴ`, including real diagonal entries.
    pub fn is_hermitian(&self) -> bool {
        (0..self.n).all(|i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).all(|(&j, &v)| self.get(j, i) == v.conj())
        })
    }

    /// Little-endian dump: `u64` dimension, `n + 1` `u64` row pointers,
    /// `nnz` `u64` column indices, then `2·nnz` `f64` values as interleaved
    /// real and imaginary parts.
    pub fn write_binary(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        w.write_all(&(self.n as u64).to_le_bytes())?;
        for &p in &self.row_ptr {
            w.write_all(&(p as u64).to_le_bytes())?;
        }
        for &c in &self.col_idx {
            w.write_all(&(c as u64).to_le_bytes())?;
        }
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_binary(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        let mut words = bytes.chunks_exact(8).map(|c| <[u8; 8]>::try_from(c).expect("8-byte chunk"));
        let short = || Error::Mismatch("truncated matrix dump".into());
        let n = u64::from_le_bytes(words.next().ok_or_else(short)?) as usize;
        let row_ptr = (0..=n)
            .map(|_| words.next().map(|w| u64::from_le_bytes(w) as usize).ok_or_else(short))
            .collect::<Result<Vec<_>>>()?;
        let nnz = *row_ptr.last().ok_or_else(short)?;
        let col_idx = (0..nnz)
            .map(|_| words.next().map(|w| u64::from_le_bytes(w) as usize).ok_or_else(short))
            .collect::<Result<Vec<_>>>()?;
        let values = (0..nnz)
            .map(|_| {
                let re = f64::from_le_bytes(words.next().ok_or_else(short)?);
                let im = f64::from_le_bytes(words.next().ok_or_else(short)?);
                Ok(C64::new(re, im))
            })
            .collect::<Result<Vec<_>>>()?;
        if bytes.len() != 8 * (2 + n + nnz + 2 * nnz) {
            return Err(Error::Mismatch("trailing bytes in matrix dump".into()));
        }
        Self::from_parts(n, row_ptr, col_idx, values)
    }
}

pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    par::sum_range(a.len(), C64::new(0.0, 0.0), |i| a[i].conj() * b[i])
}

pub fn norm(a: &[C64]) -> f64 {
    par::sum_range(a.len(), 0.0, |i| a[i].norm_sqr()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CsrMatrix {
        let i = C64::new(0.0, 1.0);
        CsrMatrix::from_triplets(
            3,
            vec![
                (0, 0, C64::new(2.0, 0.0)),
                (0, 1, -i),
                (1, 0, i),
                (1, 1, C64::new(1.0, 0.0)),
                (1, 1, C64::new(1.0, 0.0)),
                (2, 2, C64::new(3.0, 0.0)),
            ],
        )
    }

    #[test]
    fn duplicates_sum_and_hermitian_check() {
        let a = sample();
        assert_eq!(a.nnz(), 5);
        assert_eq!(a.get(1, 1), C64::new(2.0, 0.0));
        assert!(a.is_hermitian());
        let y = a.mul(&[C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(1.0, 1.0)]);
        assert_eq!(y[0], C64::new(3.0, 0.0));
        assert_eq!(y[1], C64::new(0.0, 3.0));
    }

    #[test]
    fn binary_dump_round_trip_and_layout() {
        let a = sample();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.bin");
        a.write_binary(&p).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        assert_eq!(bytes.len(), 8 * (1 + 4 + 5 + 10));
        assert_eq!(u64::from_le_bytes(bytes[0..8].try_into().unwrap()), 3);
        assert_eq!(CsrMatrix::read_binary(&p).unwrap(), a);
        std::fs::write(&p, &bytes[..40]).unwrap();
        assert!(CsrMatrix::read_binary(&p).is_err());
    }
}
