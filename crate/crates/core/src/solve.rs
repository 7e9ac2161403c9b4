//! Desk-scale solver and verifier for `TCP(q, A)`.
//!
//! [`solve_enumerate`] walks all `2^n` support sets and runs a damped Newton
//! method on the square system `(A z^{m-1} + q)_S = 0`, `z_i = 0` off `S`.
//! [`solve_diagonal`] is the componentwise closed form for positive diagonal
//! tensors and serves as its oracle.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Result, TcpError};
use crate::exec::Execution;
use crate::tensor::{inf_distance, inf_norm, signed_root_scalar, DenseTensor};

/// Verification tolerance used when none is given.
pub const DEFAULT_TOL: f64 = 1e-8;

/// The pair `(q, A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TcpInstance {
    tensor: DenseTensor,
    q: Vec<f64>,
}

impl TcpInstance {
    pub fn new(tensor: DenseTensor, q: Vec<f64>) -> Result<Self> {
        check_len(tensor.dim(), q.len())?;
        Ok(TcpInstance { tensor, q })
    }

    pub fn tensor(&self) -> &DenseTensor {
        &self.tensor
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    /// `w = A z^{m-1} + q`.
    pub fn slack(&self, z: &[f64]) -> Result<Vec<f64>> {
        let mut w = self.tensor.contract_m1(z)?;
        w.iter_mut().zip(&self.q).for_each(|(wi, qi)| *wi += qi);
        Ok(w)
    }
}

/// A candidate solution with its recomputed slack and violation measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionCertificate {
    pub z: Vec<f64>,
    /// `A z^{m-1} + q`, recomputed from `z`.
    pub w: Vec<f64>,
    /// 0-based indices with `z_i > tol`.
    pub support: Vec<usize>,
    /// Max of `(-z_i)_+`, `(-w_i)_+` and `|z_i w_i|` over all `i`.
    pub max_violation: f64,
    pub tol: f64,
}

impl SolutionCertificate {
    pub fn passed(&self) -> bool {
        self.max_violation <= self.tol
    }
}

/// Recomputes `w` and the complementarity violation of `z`.
pub fn verify_solution(inst: &TcpInstance, z: &[f64], tol: f64) -> Result<SolutionCertificate> {
    let w = inst.slack(z)?;
    let max_violation = z
        .iter()
        .zip(&w)
        .map(|(&zi, &wi)| (-zi).max(-wi).max((zi * wi).abs()).max(0.0))
        .fold(0.0, f64::max);
    let support = z
        .iter()
        .enumerate()
        .filter(|(_, &zi)| zi > tol)
        .map(|(i, _)| i)
        .collect();
    Ok(SolutionCertificate {
        z: z.to_vec(),
        w,
        support,
        max_violation,
        tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub max_dim: usize,
    /// Newton starts per support set.
    pub starts: usize,
    pub seed: u64,
    /// Acceptance tolerance; duplicates are merged within `10 * tol`.
    pub tol: f64,
    /// Backtracking factor applied to the Newton step.
    pub damping: f64,
    pub max_iterations: usize,
    /// Convergence threshold on the `inf`-norm of the accepted step.
    pub step_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_dim: 6,
            starts: 8,
            seed: 0,
            tol: DEFAULT_TOL,
            damping: 0.5,
            max_iterations: 100,
            step_tol: 1e-12,
        }
    }
}

/// All solutions found by support enumeration, sorted by support size and
/// then lexicographically by `z`.
pub fn solve_enumerate(
    inst: &TcpInstance,
    opts: &SolveOptions,
) -> Result<Vec<SolutionCertificate>> {
    solve_enumerate_with(inst, opts, Execution::default())
}

pub fn solve_enumerate_with(
    inst: &TcpInstance,
    opts: &SolveOptions,
    exec: Execution,
) -> Result<Vec<SolutionCertificate>> {
    let n = inst.dim();
    if n > opts.max_dim {
        return Err(TcpError::DimensionTooLarge {
            dim: n,
            max_dim: opts.max_dim,
        });
    }
    let per_support = exec.map_range(1usize << n, |mask| solve_support(inst, opts, mask));
    let mut found: Vec<SolutionCertificate> = per_support.into_iter().flatten().collect();
    found.sort_by(|a, b| {
        a.support.len().cmp(&b.support.len()).then_with(|| {
            a.z.iter()
                .zip(&b.z)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    let mut unique: Vec<SolutionCertificate> = Vec::with_capacity(found.len());
    for cert in found {
        if unique
            .iter()
            .all(|u| inf_distance(&u.z, &cert.z) > 10.0 * opts.tol)
        {
            unique.push(cert);
        }
    }
    Ok(unique)
}

/// Candidates whose nonzero pattern is the bitmask `mask`.
fn solve_support(inst: &TcpInstance, opts: &SolveOptions, mask: usize) -> Vec<SolutionCertificate> {
    let n = inst.dim();
    let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    let accept = |z: Vec<f64>| -> Option<SolutionCertificate> {
        if support.iter().any(|&i| z[i] < -opts.tol) {
            return None;
        }
        let z: Vec<f64> = z.into_iter().map(|v| v.max(0.0)).collect();
        verify_solution(inst, &z, opts.tol)
            .ok()
            .filter(|c| c.passed())
    };
    if support.is_empty() {
        return accept(vec![0.0; n]).into_iter().collect();
    }

    let a = inst.tensor();
    let scale = {
        let a_norm = a.inf_norm();
        let ratio = if a_norm > 0.0 {
            inf_norm(inst.q()) / a_norm
        } else {
            1.0
        };
        signed_root_scalar(ratio, (a.order() - 1) as u32).max(1.0)
    };
    let mut rng =
        ChaCha8Rng::seed_from_u64(opts.seed ^ (mask as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut out = Vec::new();
    for _ in 0..opts.starts.max(1) {
        let start: Vec<f64> = support
            .iter()
            .map(|_| scale * rng.gen_range(0.05..2.0))
            .collect();
        if let Some(z) = newton(inst, opts, &support, start).and_then(&accept) {
            out.push(z);
        }
    }
    out
}

fn embed(n: usize, support: &[usize], y: &[f64]) -> Vec<f64> {
    let mut z = vec![0.0; n];
    for (&i, &v) in support.iter().zip(y) {
        z[i] = v;
    }
    z
}

fn restricted_residual(inst: &TcpInstance, support: &[usize], y: &[f64]) -> Vec<f64> {
    let w = inst
        .slack(&embed(inst.dim(), support, y))
        .expect("embedded point has the instance dimension");
    support.iter().map(|&i| w[i]).collect()
}

/// Damped Newton on the restricted system with a forward-difference Jacobian.
fn newton(
    inst: &TcpInstance,
    opts: &SolveOptions,
    support: &[usize],
    mut y: Vec<f64>,
) -> Option<Vec<f64>> {
    let k = support.len();
    let mut r = restricted_residual(inst, support, &y);
    let mut r_norm = inf_norm(&r);
    for _ in 0..opts.max_iterations {
        if r_norm == 0.0 {
            break;
        }
        let h = 1e-7 * inf_norm(&y).max(1.0);
        let mut jac = DMatrix::<f64>::zeros(k, k);
        for j in 0..k {
            let mut yp = y.clone();
            yp[j] += h;
            let rp = restricted_residual(inst, support, &yp);
            for i in 0..k {
                jac[(i, j)] = (rp[i] - r[i]) / h;
            }
        }
        let rhs = DVector::from_iterator(k, r.iter().map(|v| -v));
        let step = jac.lu().solve(&rhs)?;
        if !step.iter().all(|v| v.is_finite()) {
            return None;
        }

        let mut lambda = 1.0;
        let mut accepted = None;
        while lambda > 1e-10 {
            let cand: Vec<f64> = y
                .iter()
                .zip(step.iter())
                .map(|(a, d)| a + lambda * d)
                .collect();
            let rc = restricted_residual(inst, support, &cand);
            let rc_norm = inf_norm(&rc);
            if rc_norm < r_norm {
                accepted = Some((cand, rc, rc_norm));
                break;
            }
            lambda *= opts.damping;
        }
        let Some((cand, rc, rc_norm)) = accepted else {
            break;
        };
        let moved = inf_distance(&cand, &y);
        y = cand;
        r = rc;
        r_norm = rc_norm;
        if moved <= opts.step_tol {
            break;
        }
    }
    Some(embed(inst.dim(), support, &y))
}

/// `z_i = ((-q_i)_+ / a_{i...i})^{1/(m-1)}` for a positive diagonal tensor of even order.
pub fn solve_diagonal(inst: &TcpInstance) -> Result<SolutionCertificate> {
    let a = inst.tensor();
    a.require_even_order()?;
    let diag = a.positive_diagonal()?;
    let r = (a.order() - 1) as u32;
    let z: Vec<f64> = inst
        .q()
        .iter()
        .zip(&diag)
        .map(|(&qi, &d)| signed_root_scalar((-qi).max(0.0) / d, r))
        .collect();
    verify_solution(inst, &z, DEFAULT_TOL)
}

/// Smallest-support solution from [`solve_enumerate`] and the number of
/// solutions found.
pub fn solve_smallest_support(
    inst: &TcpInstance,
    opts: &SolveOptions,
) -> Result<Option<(SolutionCertificate, usize)>> {
    let mut all = solve_enumerate(inst, opts)?;
    let count = all.len();
    if all.is_empty() {
        return Ok(None);
    }
    Ok(Some((all.swap_remove(0), count)))
}
