#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tcp_bounds::bounds::DiagonalCase;
use tcp_bounds::{DenseTensor, TcpInstance};

pub const SUITE_SEED: u64 = 20_240_917;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positive diagonal `T_{4,n}` instances: `n` in {1, 2, 3}, diagonal in
/// [0.5, 10], `q` and `u` components in [-5, 5].
pub fn diagonal_cases(count: usize, seed: u64) -> Vec<DiagonalCase> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..=10.0)).collect();
            let q: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect();
            let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect();
            DiagonalCase {
                instance: TcpInstance::new(DenseTensor::diagonal(4, &diag).unwrap(), q).unwrap(),
                u,
            }
        })
        .collect()
}

/// Dense random tensor with every entry drawn from [-1, 1].
pub fn dense_tensor(rng: &mut ChaCha8Rng, order: usize, dim: usize) -> DenseTensor {
    let mut t = DenseTensor::zeros(order, dim).unwrap();
    for flat in 0..dim.pow(order as u32) {
        t.set(&unflatten(flat, order, dim), rng.gen_range(-1.0..=1.0))
            .unwrap();
    }
    t
}

pub fn unflatten(mut flat: usize, order: usize, dim: usize) -> Vec<usize> {
    let mut idx = vec![0; order];
    for slot in idx.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
    idx
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..=scale)).collect()
}

/// `(A x^{m-1})_i` by enumerating every index tuple of the dense array.
pub fn brute_contract_m1(a: &DenseTensor, x: &[f64]) -> Vec<f64> {
    let (m, n) = (a.order(), a.dim());
    let mut out = vec![0.0; n];
    for flat in 0..n.pow(m as u32) {
        let idx = unflatten(flat, m, n);
        let mut term = a.get(&idx);
        for &j in &idx[1..] {
            term *= x[j];
        }
        out[idx[0]] += term;
    }
    out
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
