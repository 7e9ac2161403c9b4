//! Order-`m`, dimension-`n` real tensors in coordinate storage, multilinear
//! contractions, and the vector helpers the bounds are written in.

use std::collections::BTreeMap;

use crate::error::{check_len, Result, TcpError};

/// A real tensor of order `m >= 2` and dimension `n >= 1`.
///
/// Only nonzero entries are stored, keyed by 0-based index tuples. Absent
/// tuples read as zero, so a diagonal tensor costs `O(n)` storage.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    order: usize,
    dim: usize,
    entries: BTreeMap<Vec<usize>, f64>,
}

impl DenseTensor {
    /// The zero tensor of the given shape.
    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        if order < 2 || dim == 0 {
            return Err(TcpError::InvalidShape { order, dim });
        }
        Ok(DenseTensor {
            order,
            dim,
            entries: BTreeMap::new(),
        })
    }

    /// Diagonal tensor with `a_{i...i} = diag[i]`.
    pub fn diagonal(order: usize, diag: &[f64]) -> Result<Self> {
        let mut t = Self::zeros(order, diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            t.set(&vec![i; order], d)?;
        }
        Ok(t)
    }

    /// Build from `(index, value)` pairs with 0-based indices. Later
    /// duplicates overwrite earlier ones.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        let mut t = Self::zeros(order, dim)?;
        for (idx, val) in entries {
            t.set(&idx, val)?;
        }
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets the entry at a 0-based index tuple. Zero removes the entry.
    pub fn set(&mut self, index: &[usize], value: f64) -> Result<()> {
        if index.len() != self.order || index.iter().any(|&i| i >= self.dim) {
            return Err(TcpError::InvalidIndex {
                index: index.to_vec(),
                order: self.order,
                dim: self.dim,
            });
        }
        if value == 0.0 {
            self.entries.remove(index);
        } else {
            self.entries.insert(index.to_vec(), value);
        }
        Ok(())
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.entries.get(index).copied().unwrap_or(0.0)
    }

    /// Stored (nonzero) entries in lexicographic index order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        self.entries.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `a_{i...i}` for each `i`, zero where absent.
    pub fn diagonal_entries(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.get(&vec![i; self.order]))
            .collect()
    }

    fn is_diagonal_index(index: &[usize]) -> bool {
        index.iter().all(|&i| i == index[0])
    }

    /// All off-diagonal entries zero and every diagonal entry strictly positive.
    pub fn is_positive_diagonal(&self) -> bool {
        self.entries.keys().all(|k| Self::is_diagonal_index(k))
            && self.diagonal_entries().iter().all(|&d| d > 0.0)
    }

    /// Diagonal entries of a positive diagonal tensor, or a classification error.
    pub fn positive_diagonal(&self) -> Result<Vec<f64>> {
        if let Some(k) = self.entries.keys().find(|k| !Self::is_diagonal_index(k)) {
            let one_based: Vec<usize> = k.iter().map(|i| i + 1).collect();
            return Err(TcpError::NotPositiveDiagonal(format!(
                "off-diagonal entry at {one_based:?}"
            )));
        }
        let diag = self.diagonal_entries();
        if let Some(i) = diag.iter().position(|&d| d <= 0.0) {
            return Err(TcpError::NotPositiveDiagonal(format!(
                "diagonal entry {} is {}",
                i + 1,
                diag[i]
            )));
        }
        Ok(diag)
    }

    pub(crate) fn require_even_order(&self) -> Result<()> {
        if self.order.is_multiple_of(2) {
            Ok(())
        } else {
            Err(TcpError::OddOrder(self.order))
        }
    }

    /// `(A x^{m-1})_i = sum a_{i i2 ... im} x_{i2} ... x_{im}`.
    pub fn contract_m1(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim, x.len())?;
        let mut out = vec![0.0; self.dim];
        for (idx, &a) in &self.entries {
            let prod: f64 = idx[1..].iter().map(|&j| x[j]).product();
            out[idx[0]] += a * prod;
        }
        Ok(out)
    }

    /// The scalar `A x^m`.
    pub fn contract_full(&self, x: &[f64]) -> Result<f64> {
        check_len(self.dim, x.len())?;
        Ok(self
            .entries
            .iter()
            .map(|(idx, &a)| a * idx.iter().map(|&j| x[j]).product::<f64>())
            .sum())
    }

    /// `||A||_inf = max_i sum_{i2..im} |a_{i i2 ... im}|`.
    pub fn inf_norm(&self) -> f64 {
        let mut rows = vec![0.0; self.dim];
        for (idx, &a) in &self.entries {
            rows[idx[0]] += a.abs();
        }
        rows.into_iter().fold(0.0, f64::max)
    }
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn two_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `(||x||_inf, ||x||_2)`.
pub fn vec_norms(x: &[f64]) -> (f64, f64) {
    (inf_norm(x), two_norm(x))
}

/// `||x - y||_inf`.
pub fn inf_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

/// Componentwise real `r`-th root for odd `r`; sign preserving.
pub fn signed_root(x: &[f64], r: u32) -> Result<Vec<f64>> {
    if r.is_multiple_of(2) {
        return Err(TcpError::EvenRoot(r));
    }
    Ok(x.iter().map(|&v| signed_root_scalar(v, r)).collect())
}

pub(crate) fn signed_root_scalar(v: f64, r: u32) -> f64 {
    match r {
        1 => v,
        3 => v.cbrt(),
        _ => v.signum() * v.abs().powf(1.0 / r as f64),
    }
}

/// Componentwise `max(0, x_i)`.
pub fn positive_part(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&v| v.max(0.0)).collect()
}
