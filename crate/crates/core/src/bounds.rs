//! Error bounds for an approximate solution `u` of `TCP(q, A)` with `A` a
//! P-tensor of even order `m`, and the solution-norm bounds they rest on.
//!
//! With `z` a solution, `r = 1/(m-1)`, `c = 1 + ||A||_inf^r` and
//!
//! ```text
//! s = (A (u - z)^{m-1})^{[r]} + (A z^{m-1} + q)^{[r]}
//! v = u - max(0, u - s)            (= min(u, s) componentwise)
//! t = first argmax_i (u - z)_i (A (u - z)^{m-1})_i
//! D = ||v||^2 c^2 - 4 alpha(F_A) v_t^2
//! ```
//!
//! the two absolute enclosures of `||z - u||_inf` are
//!
//! ```text
//! new:      (||v|| c - sqrt D) / (2 alpha)  <=  .  <=  (||v|| c + sqrt D) / (2 alpha)
//! baseline:  ||v|| / c                      <=  .  <=  c ||v|| / alpha
//! ```
//!
//! and `||(-q)_+||^r / ||A||^r <= ||z|| <= ||(-q)_+||^r / alpha` bounds the
//! solution itself. The relative enclosure of `||z - u|| / ||z||` combines the
//! two. All bounds are valid only when the supplied alpha does not exceed the
//! true `alpha(F_A)`; grid estimates are flagged [`Diagnostic::UncertifiedAlpha`].

use std::fmt;

use crate::error::{check_len, Result, TcpError};
use crate::exec::Execution;
use crate::operators::{alpha_f_diagonal, require_positive_alpha_f, AlphaEstimate};
use crate::solve::{solve_diagonal, verify_solution, TcpInstance, DEFAULT_TOL};
use crate::tensor::{inf_distance, inf_norm, positive_part, signed_root, signed_root_scalar};

/// Relative tolerance for `ub_new <= ub_base` and the comparison ratio.
pub const SHARPNESS_TOL: f64 = 1e-12;
/// Relative clamping window for a slightly negative discriminant.
pub const DISCRIMINANT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Diagnostic {
    /// `u == z`; all error bounds are zero.
    ExactSolution,
    /// `v_t == 0` although `u != z`; the new bounds fall back to the baseline pair.
    ExactSolutionInconsistent,
    /// Alpha came from a grid estimate, which may exceed the true value.
    UncertifiedAlpha,
    /// `D` was slightly negative and clamped to zero.
    DiscriminantClamped,
    /// Entries of `A z^{m-1} + q` at roundoff level were set to zero.
    SlackSnapped,
    /// The solver returned more than one solution; the smallest support was used.
    MultipleSolutions,
    /// `(-q)_+ = 0`; relative bounds are undefined.
    DegenerateQ,
    /// `z = 0`; relative bounds are undefined.
    DegenerateZ,
}

impl Diagnostic {
    pub fn as_str(self) -> &'static str {
        match self {
            Diagnostic::ExactSolution => "EXACT_SOLUTION",
            Diagnostic::ExactSolutionInconsistent => "EXACT_SOLUTION_INCONSISTENT",
            Diagnostic::UncertifiedAlpha => "UNCERTIFIED_ALPHA",
            Diagnostic::DiscriminantClamped => "DISCRIMINANT_CLAMPED",
            Diagnostic::SlackSnapped => "SLACK_SNAPPED",
            Diagnostic::MultipleSolutions => "MULTIPLE_SOLUTIONS",
            Diagnostic::DegenerateQ => "DEGENERATE_Q",
            Diagnostic::DegenerateZ => "DEGENERATE_Z",
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundOptions {
    /// Tolerance `z` must verify to before any bound is computed.
    pub tol: f64,
    /// Entries of `A z^{m-1} + q` with magnitude at most
    /// `slack_snap * max(1, ||q||, ||A z^{m-1}||)` are treated as zero.
    pub slack_snap: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            tol: DEFAULT_TOL,
            slack_snap: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualData {
    pub v: Vec<f64>,
    pub v_inf: f64,
    /// 0-based index maximizing `(u-z)_i (A(u-z)^{m-1})_i`, smallest on ties.
    pub t: usize,
    pub v_t: f64,
    pub argmax_value: f64,
    /// `(A(u-z)^{m-1})^{[r]} + (A z^{m-1} + q)^{[r]}`
    pub s: Vec<f64>,
    pub exact: bool,
    /// Number of slack entries snapped to zero.
    pub snapped: usize,
}

/// Everything computed for one `(q, A, z, u, alpha)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub lb_new: f64,
    pub ub_new: f64,
    pub lb_base: f64,
    pub ub_base: f64,
    /// `D` after clamping.
    pub discriminant: f64,
    pub discriminant_raw: f64,
    pub residual: ResidualData,
    pub alpha: AlphaEstimate,
    /// `||A||_inf^{1/(m-1)}`
    pub a_norm_root: f64,
    pub sol_lb: Option<f64>,
    pub sol_ub: Option<f64>,
    pub rel_lb: Option<f64>,
    pub rel_ub: Option<f64>,
    pub z: Vec<f64>,
    pub u: Vec<f64>,
    /// `||z - u||_inf`
    pub error_inf: f64,
    pub flags: Vec<Diagnostic>,
}

impl BoundReport {
    pub fn has_flag(&self, flag: Diagnostic) -> bool {
        self.flags.contains(&flag)
    }
}

fn root(a: &crate::tensor::DenseTensor) -> u32 {
    (a.order() - 1) as u32
}

/// Residual `v` and the index `t` for a verified solution `z` and any `u`.
pub fn residual(inst: &TcpInstance, z: &[f64], u: &[f64]) -> Result<ResidualData> {
    residual_with(inst, z, u, &BoundOptions::default())
}

pub fn residual_with(
    inst: &TcpInstance,
    z: &[f64],
    u: &[f64],
    opts: &BoundOptions,
) -> Result<ResidualData> {
    let a = inst.tensor();
    a.require_even_order()?;
    check_len(inst.dim(), z.len())?;
    check_len(inst.dim(), u.len())?;
    let cert = verify_solution(inst, z, opts.tol)?;
    if !cert.passed() {
        return Err(TcpError::SolutionRejected {
            max_violation: cert.max_violation,
            tol: opts.tol,
        });
    }
    let r = root(a);

    let az_norm = inf_norm(&a.contract_m1(z)?);
    let snap = opts.slack_snap * 1f64.max(inf_norm(inst.q())).max(az_norm);
    let mut w = cert.w;
    let mut snapped = 0;
    for wi in w.iter_mut().filter(|wi| **wi != 0.0 && wi.abs() <= snap) {
        *wi = 0.0;
        snapped += 1;
    }
    let w_root = signed_root(&w, r)?;

    let d: Vec<f64> = u.iter().zip(z).map(|(ui, zi)| ui - zi).collect();
    let ad = a.contract_m1(&d)?;
    let s: Vec<f64> = signed_root(&ad, r)?
        .into_iter()
        .zip(&w_root)
        .map(|(f, g)| f + g)
        .collect();

    let exact = u == z;
    let v: Vec<f64> = if exact {
        vec![0.0; u.len()]
    } else {
        u.iter()
            .zip(&s)
            .map(|(&ui, &si)| ui - 0f64.max(ui - si))
            .collect()
    };

    let (t, argmax_value) = d.iter().zip(&ad).map(|(x, y)| x * y).enumerate().fold(
        (0, f64::NEG_INFINITY),
        |best, (i, p)| if p > best.1 { (i, p) } else { best },
    );
    if !exact && argmax_value < 0.0 {
        return Err(TcpError::NotPCertificate(format!(
            "max_i x_i (A x^(m-1))_i = {argmax_value:e} < 0 at x = u - z"
        )));
    }

    Ok(ResidualData {
        v_inf: inf_norm(&v),
        v_t: v[t],
        v,
        t,
        argmax_value,
        s,
        exact,
        snapped,
    })
}

/// `(lb, ub)` enclosing `||z||_inf` for every solution `z`.
pub fn solution_norm_bounds(inst: &TcpInstance, alpha: &AlphaEstimate) -> Result<(f64, f64)> {
    let a = inst.tensor();
    a.require_even_order()?;
    require_positive_alpha_f(alpha)?;
    let a_norm_root = signed_root_scalar(a.inf_norm(), root(a));
    solution_bounds_from(inst, alpha.value, a_norm_root)
}

fn neg_q_root(inst: &TcpInstance) -> f64 {
    let neg_q: Vec<f64> = inst.q().iter().map(|v| -v).collect();
    signed_root_scalar(inf_norm(&positive_part(&neg_q)), root(inst.tensor()))
}

fn solution_bounds_from(inst: &TcpInstance, alpha: f64, a_norm_root: f64) -> Result<(f64, f64)> {
    if a_norm_root.is_nan() || a_norm_root <= 0.0 {
        return Err(TcpError::NotPCertificate("||A||_inf is zero".into()));
    }
    let qn = neg_q_root(inst);
    Ok((qn / a_norm_root, qn / alpha))
}

/// Shared inputs of every bound: the residual, alpha and `||A||_inf^{1/(m-1)}`.
struct Parts {
    residual: ResidualData,
    alpha: AlphaEstimate,
    a_norm_root: f64,
}

struct Absolute {
    lb: f64,
    ub: f64,
    d: f64,
    d_raw: f64,
    flags: Vec<Diagnostic>,
}

impl Parts {
    fn generic(
        inst: &TcpInstance,
        z: &[f64],
        u: &[f64],
        alpha: &AlphaEstimate,
        opts: &BoundOptions,
    ) -> Result<Self> {
        require_positive_alpha_f(alpha)?;
        let residual = residual_with(inst, z, u, opts)?;
        let a = inst.tensor();
        Ok(Parts {
            residual,
            alpha: alpha.clone(),
            a_norm_root: signed_root_scalar(a.inf_norm(), root(a)),
        })
    }

    fn c(&self) -> f64 {
        1.0 + self.a_norm_root
    }

    fn baseline(&self) -> (f64, f64) {
        if self.residual.exact {
            return (0.0, 0.0);
        }
        let (v, c) = (self.residual.v_inf, self.c());
        (v / c, c * v / self.alpha.value)
    }

    fn new_bounds(&self) -> Result<Absolute> {
        let res = &self.residual;
        if res.exact {
            return Ok(Absolute {
                lb: 0.0,
                ub: 0.0,
                d: 0.0,
                d_raw: 0.0,
                flags: vec![],
            });
        }
        let alpha = self.alpha.value;
        let cv = self.c() * res.v_inf;
        let d_raw = cv * cv - 4.0 * alpha * res.v_t * res.v_t;
        if res.v_t == 0.0 {
            let (lb, ub) = self.baseline();
            return Ok(Absolute {
                lb,
                ub,
                d: d_raw.max(0.0),
                d_raw,
                flags: vec![Diagnostic::ExactSolutionInconsistent],
            });
        }
        let eps = DISCRIMINANT_TOL * 1f64.max(cv * cv);
        if d_raw <= -eps {
            return Err(TcpError::InvariantViolation(format!(
                "discriminant {d_raw:e} is negative beyond {eps:e}"
            )));
        }
        let mut flags = Vec::new();
        let d = if d_raw < 0.0 {
            flags.push(Diagnostic::DiscriminantClamped);
            0.0
        } else {
            d_raw
        };
        let outer = cv + d.sqrt();
        Ok(Absolute {
            // (cv - sqrt D) / (2 alpha) rewritten as 4 alpha v_t^2 / (2 alpha (cv + sqrt D))
            lb: 2.0 * res.v_t * res.v_t / outer,
            ub: outer / (2.0 * alpha),
            d,
            d_raw,
            flags,
        })
    }

    fn relative(&self, inst: &TcpInstance, z: &[f64], abs: &Absolute) -> Result<(f64, f64)> {
        let qn = neg_q_root(inst);
        if qn == 0.0 {
            return Err(TcpError::DegenerateQ);
        }
        if z.iter().all(|&zi| zi == 0.0) {
            return Err(TcpError::DegenerateZ);
        }
        Ok((
            abs.lb * self.alpha.value / qn,
            abs.ub * self.a_norm_root / qn,
        ))
    }

    fn report(self, inst: &TcpInstance, z: &[f64], u: &[f64]) -> Result<BoundReport> {
        let abs = self.new_bounds()?;
        let (lb_base, ub_base) = self.baseline();
        if abs.ub > ub_base + SHARPNESS_TOL * 1f64.max(ub_base) {
            return Err(TcpError::InvariantViolation(format!(
                "new upper bound {} exceeds baseline {}",
                abs.ub, ub_base
            )));
        }
        let mut flags = Vec::new();
        if self.residual.exact {
            flags.push(Diagnostic::ExactSolution);
        }
        if !self.alpha.certified {
            flags.push(Diagnostic::UncertifiedAlpha);
        }
        if self.residual.snapped > 0 {
            flags.push(Diagnostic::SlackSnapped);
        }
        flags.extend(&abs.flags);
        let (sol_lb, sol_ub) = solution_bounds_from(inst, self.alpha.value, self.a_norm_root)?;
        let (rel_lb, rel_ub) = match self.relative(inst, z, &abs) {
            Ok((l, h)) => (Some(l), Some(h)),
            Err(TcpError::DegenerateQ) => {
                flags.push(Diagnostic::DegenerateQ);
                (None, None)
            }
            Err(TcpError::DegenerateZ) => {
                flags.push(Diagnostic::DegenerateZ);
                (None, None)
            }
            Err(e) => return Err(e),
        };
        Ok(BoundReport {
            lb_new: abs.lb,
            ub_new: abs.ub,
            lb_base,
            ub_base,
            discriminant: abs.d,
            discriminant_raw: abs.d_raw,
            residual: self.residual,
            alpha: self.alpha,
            a_norm_root: self.a_norm_root,
            sol_lb: Some(sol_lb),
            sol_ub: Some(sol_ub),
            rel_lb,
            rel_ub,
            z: z.to_vec(),
            u: u.to_vec(),
            error_inf: inf_distance(z, u),
            flags,
        })
    }
}

/// The new enclosure `(lb_new, ub_new, D)` of `||z - u||_inf`.
pub fn error_bounds_new(
    inst: &TcpInstance,
    z: &[f64],
    u: &[f64],
    alpha: &AlphaEstimate,
) -> Result<(f64, f64, f64)> {
    let parts = Parts::generic(inst, z, u, alpha, &BoundOptions::default())?;
    let abs = parts.new_bounds()?;
    Ok((abs.lb, abs.ub, abs.d))
}

/// The baseline enclosure `(lb_base, ub_base)` of `||z - u||_inf`.
pub fn error_bounds_zheng(
    inst: &TcpInstance,
    z: &[f64],
    u: &[f64],
    alpha: &AlphaEstimate,
) -> Result<(f64, f64)> {
    Ok(Parts::generic(inst, z, u, alpha, &BoundOptions::default())?.baseline())
}

/// `(rel_lb, rel_ub)` enclosing `||z - u||_inf / ||z||_inf`.
pub fn relative_error_bounds(
    inst: &TcpInstance,
    z: &[f64],
    u: &[f64],
    alpha: &AlphaEstimate,
) -> Result<(f64, f64)> {
    let parts = Parts::generic(inst, z, u, alpha, &BoundOptions::default())?;
    let abs = parts.new_bounds()?;
    parts.relative(inst, z, &abs)
}

/// All bounds through the generic path with the supplied alpha.
pub fn bound_report(
    inst: &TcpInstance,
    z: &[f64],
    u: &[f64],
    alpha: &AlphaEstimate,
    opts: &BoundOptions,
) -> Result<BoundReport> {
    Parts::generic(inst, z, u, alpha, opts)?.report(inst, z, u)
}

/// All bounds for a positive diagonal tensor of even order, with
/// `alpha = min_i a_{i...i}^{1/(m-1)}` and `||A||_inf = max_i a_{i...i}`.
pub fn diagonal_bounds(inst: &TcpInstance, z: &[f64], u: &[f64]) -> Result<BoundReport> {
    diagonal_bounds_with(inst, z, u, &BoundOptions::default())
}

pub fn diagonal_bounds_with(
    inst: &TcpInstance,
    z: &[f64],
    u: &[f64],
    opts: &BoundOptions,
) -> Result<BoundReport> {
    let a = inst.tensor();
    let alpha = alpha_f_diagonal(a)?;
    let max_diag = a.positive_diagonal()?.into_iter().fold(0.0, f64::max);
    let parts = Parts {
        residual: residual_with(inst, z, u, opts)?,
        alpha,
        a_norm_root: signed_root_scalar(max_diag, root(a)),
    };
    parts.report(inst, z, u)
}

/// `ub_new / ub_base`, at most one; zero when both bounds vanish.
pub fn compare_upper_bounds(report: &BoundReport) -> Result<f64> {
    if report.ub_base == 0.0 {
        if report.ub_new > 0.0 {
            return Err(TcpError::InvariantViolation(format!(
                "baseline upper bound is zero but the new one is {}",
                report.ub_new
            )));
        }
        return Ok(0.0);
    }
    let ratio = report.ub_new / report.ub_base;
    if ratio > 1.0 + SHARPNESS_TOL {
        return Err(TcpError::InvariantViolation(format!(
            "upper bound ratio {ratio} exceeds one"
        )));
    }
    Ok(ratio)
}

/// A positive diagonal instance and a test point.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalCase {
    pub instance: TcpInstance,
    pub u: Vec<f64>,
}

/// Solves each case in closed form and reports its diagonal bounds.
pub fn diagonal_batch(cases: &[DiagonalCase], exec: Execution) -> Vec<Result<BoundReport>> {
    exec.map(cases, |case| {
        let z = solve_diagonal(&case.instance)?.z;
        diagonal_bounds(&case.instance, &z, &case.u)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::DenseTensor;
    use approx::assert_relative_eq;

    fn example() -> TcpInstance {
        TcpInstance::new(
            DenseTensor::diagonal(4, &[1.0, 8.0]).unwrap(),
            vec![1.0, -1.0],
        )
        .unwrap()
    }

    fn single(a: f64, q: f64) -> TcpInstance {
        TcpInstance::new(DenseTensor::diagonal(4, &[a]).unwrap(), vec![q]).unwrap()
    }

    const Z: [f64; 2] = [0.0, 0.5];

    fn alpha_one() -> AlphaEstimate {
        alpha_f_diagonal(example().tensor()).unwrap()
    }

    #[test]
    fn residual_example() {
        let r = residual(&example(), &Z, &[0.5, 0.4]).unwrap();
        assert_relative_eq!(r.v[0], 0.5);
        assert_relative_eq!(r.v[1], -0.2, max_relative = 1e-14);
        assert_eq!(r.v_inf, 0.5);
        assert_eq!(r.t, 0);
        assert_eq!(r.v_t, 0.5);
        assert_relative_eq!(r.argmax_value, 0.0625);
        assert!(!r.exact);

        let r = residual(&example(), &Z, &[1.0, 0.5]).unwrap();
        assert_eq!(r.v, vec![1.0, 0.0]);
        assert_eq!(r.t, 0);
    }

    #[test]
    fn residual_at_solution_is_zero() {
        let r = residual(&example(), &Z, &Z).unwrap();
        assert!(r.exact);
        assert_eq!(r.v, vec![0.0, 0.0]);
        assert_eq!(r.v_inf, 0.0);
    }

    #[test]
    fn residual_rejects_non_solution() {
        assert!(matches!(
            residual(&example(), &[0.0, 0.0], &[0.5, 0.4]),
            Err(TcpError::SolutionRejected { .. })
        ));
        assert!(residual(&example(), &Z, &[0.5]).is_err());
    }

    #[test]
    fn residual_ties_pick_smallest_index() {
        let inst = TcpInstance::new(
            DenseTensor::diagonal(4, &[1.0, 1.0]).unwrap(),
            vec![0.0, 0.0],
        )
        .unwrap();
        let r = residual(&inst, &[0.0, 0.0], &[1.0, -1.0]).unwrap();
        assert_eq!(r.t, 0);
        let r = residual(&inst, &[0.0, 0.0], &[-1.0, 1.0]).unwrap();
        assert_eq!(r.t, 0);
    }

    #[test]
    fn residual_detects_non_p_direction() {
        let a = DenseTensor::diagonal(4, &[-1.0]).unwrap();
        let inst = TcpInstance::new(a, vec![0.0]).unwrap();
        assert!(matches!(
            residual(&inst, &[0.0], &[1.0]),
            Err(TcpError::NotPCertificate(_))
        ));
    }

    #[test]
    fn snapping_removes_roundoff_slack() {
        // 5.4 z^3 - 3.84 is a few ulp away from zero at the computed root
        let inst = single(5.402_651_56, -3.841_343_88);
        let z = solve_diagonal(&inst).unwrap().z;
        let r = residual(&inst, &z, &[1.234_897_56]).unwrap();
        let raw = inst.slack(&z).unwrap()[0];
        if raw != 0.0 {
            assert_eq!(r.snapped, 1);
        }
        let expected = 5.402_651_56f64.cbrt() * (1.234_897_56 - z[0]);
        assert_relative_eq!(r.v[0], expected, max_relative = 1e-14);
    }

    #[test]
    fn solution_bounds_examples() {
        let (lb, ub) = solution_norm_bounds(&example(), &alpha_one()).unwrap();
        assert_eq!((lb, ub), (0.5, 1.0));

        let pos_q = TcpInstance::new(
            DenseTensor::diagonal(4, &[1.0, 8.0]).unwrap(),
            vec![1.0, 2.0],
        )
        .unwrap();
        assert_eq!(
            solution_norm_bounds(&pos_q, &alpha_one()).unwrap(),
            (0.0, 0.0)
        );

        let inst = single(8.0, -8.0);
        let alpha = alpha_f_diagonal(inst.tensor()).unwrap();
        let (lb, ub) = solution_norm_bounds(&inst, &alpha).unwrap();
        assert_eq!(lb, 1.0);
        assert_eq!(ub, 1.0);

        let bad = AlphaEstimate::uncertified(0.0, crate::AlphaKind::F);
        assert!(matches!(
            solution_norm_bounds(&example(), &bad),
            Err(TcpError::NotPCertificate(_))
        ));
    }

    #[test]
    fn new_bounds_example() {
        let (lb, ub, d) = error_bounds_new(&example(), &Z, &[0.5, 0.4], &alpha_one()).unwrap();
        assert_relative_eq!(d, 1.25, max_relative = 1e-14);
        assert_relative_eq!(ub, (1.5 + 1.25f64.sqrt()) / 2.0, max_relative = 1e-14);
        assert_relative_eq!(lb, (1.5 - 1.25f64.sqrt()) / 2.0, max_relative = 1e-14);
        assert!(lb <= 0.5 && 0.5 <= ub);

        assert_eq!(
            error_bounds_new(&example(), &Z, &Z, &alpha_one()).unwrap(),
            (0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn tight_single_component() {
        let inst = single(1.0, -1.0);
        let alpha = alpha_f_diagonal(inst.tensor()).unwrap();
        let (lb, ub, d) = error_bounds_new(&inst, &[1.0], &[2.0], &alpha).unwrap();
        assert_eq!((lb, ub, d), (1.0, 1.0, 0.0));
        let (lb, ub) = error_bounds_zheng(&inst, &[1.0], &[2.0], &alpha).unwrap();
        assert_eq!((lb, ub), (0.5, 2.0));
    }

    #[test]
    fn baseline_example() {
        let (lb, ub) = error_bounds_zheng(&example(), &Z, &[0.5, 0.4], &alpha_one()).unwrap();
        assert_relative_eq!(ub, 1.5);
        assert_relative_eq!(lb, 0.5 / 3.0);
        assert_eq!(
            error_bounds_zheng(&example(), &Z, &Z, &alpha_one()).unwrap(),
            (0.0, 0.0)
        );
    }

    #[test]
    fn relative_examples() {
        let (lb, ub) = relative_error_bounds(&example(), &Z, &[0.5, 0.4], &alpha_one()).unwrap();
        assert_relative_eq!(lb, (1.5 - 1.25f64.sqrt()) / 2.0, max_relative = 1e-14);
        assert_relative_eq!(ub, 1.5 + 1.25f64.sqrt(), max_relative = 1e-14);
        assert!(lb <= 1.0 && 1.0 <= ub);

        assert_eq!(
            relative_error_bounds(&example(), &Z, &Z, &alpha_one()).unwrap(),
            (0.0, 0.0)
        );

        let pos_q = TcpInstance::new(
            DenseTensor::diagonal(4, &[1.0, 8.0]).unwrap(),
            vec![1.0, 1.0],
        )
        .unwrap();
        assert_eq!(
            relative_error_bounds(&pos_q, &[0.0, 0.0], &[0.5, 0.4], &alpha_one()),
            Err(TcpError::DegenerateQ)
        );
    }

    #[test]
    fn relative_rejects_zero_solution() {
        // z = 0 with (-q)_+ != 0 cannot come from a P-tensor, so call the guard directly
        let inst = TcpInstance::new(
            DenseTensor::diagonal(4, &[1.0, 8.0]).unwrap(),
            vec![-1.0, 2.0],
        )
        .unwrap();
        let parts = Parts::generic(
            &inst,
            &[1.0, 0.0],
            &[0.5, 0.5],
            &alpha_one(),
            &BoundOptions::default(),
        )
        .unwrap();
        let abs = parts.new_bounds().unwrap();
        assert_eq!(
            parts.relative(&inst, &[0.0, 0.0], &abs),
            Err(TcpError::DegenerateZ)
        );
    }

    #[test]
    fn diagonal_matches_generic() {
        let inst = example();
        let u = [0.5, 0.4];
        let diag = diagonal_bounds(&inst, &Z, &u).unwrap();
        let generic = bound_report(&inst, &Z, &u, &alpha_one(), &BoundOptions::default()).unwrap();
        assert_eq!(diag, generic);

        let exact = diagonal_bounds(&inst, &Z, &Z).unwrap();
        assert_eq!(
            (exact.lb_new, exact.ub_new, exact.lb_base, exact.ub_base),
            (0.0, 0.0, 0.0, 0.0)
        );
        assert!(exact.has_flag(Diagnostic::ExactSolution));
    }

    #[test]
    fn diagonal_solution_bounds() {
        let inst = TcpInstance::new(
            DenseTensor::diagonal(4, &[16.0, 81.0]).unwrap(),
            vec![-16.0, 0.0],
        )
        .unwrap();
        let z = solve_diagonal(&inst).unwrap().z;
        assert_eq!(z, vec![1.0, 0.0]);
        let rep = diagonal_bounds(&inst, &z, &[0.5, 0.5]).unwrap();
        let (lb, ub) = (rep.sol_lb.unwrap(), rep.sol_ub.unwrap());
        assert_relative_eq!(lb, 16f64.cbrt() / 81f64.cbrt(), max_relative = 1e-15);
        assert_relative_eq!(lb, 0.582_386_976_490_866, max_relative = 1e-14);
        assert_relative_eq!(ub, 1.0, max_relative = 1e-15);
        assert!(lb <= 1.0 && 1.0 <= ub + 1e-15);
        assert_relative_eq!(rep.a_norm_root, 81f64.cbrt(), max_relative = 1e-15);

        let mut off = DenseTensor::diagonal(4, &[16.0, 81.0]).unwrap();
        off.set(&[1, 0, 0, 0], 1.0).unwrap();
        let inst = TcpInstance::new(off, vec![-16.0, 0.0]).unwrap();
        assert!(matches!(
            diagonal_bounds(&inst, &[1.0, 0.0], &[0.5, 0.5]),
            Err(TcpError::NotPositiveDiagonal(_))
        ));
    }

    #[test]
    fn compare_examples() {
        let rep = diagonal_bounds(&example(), &Z, &[0.5, 0.4]).unwrap();
        assert_relative_eq!(
            compare_upper_bounds(&rep).unwrap(),
            (1.5 + 1.25f64.sqrt()) / 3.0,
            max_relative = 1e-14
        );

        let inst = single(1.0, -1.0);
        let rep = diagonal_bounds(&inst, &[1.0], &[2.0]).unwrap();
        assert_eq!(compare_upper_bounds(&rep).unwrap(), 0.5);

        let rep = diagonal_bounds(&example(), &Z, &Z).unwrap();
        assert_eq!(compare_upper_bounds(&rep).unwrap(), 0.0);

        let mut broken = rep.clone();
        broken.ub_new = 1.0;
        assert!(matches!(
            compare_upper_bounds(&broken),
            Err(TcpError::InvariantViolation(_))
        ));
    }

    #[test]
    fn uncertified_alpha_is_flagged() {
        let alpha = AlphaEstimate::uncertified(1.0, crate::AlphaKind::F);
        let rep = bound_report(
            &example(),
            &Z,
            &[0.5, 0.4],
            &alpha,
            &BoundOptions::default(),
        )
        .unwrap();
        assert!(rep.has_flag(Diagnostic::UncertifiedAlpha));
        let rep = diagonal_bounds(&example(), &Z, &[0.5, 0.4]).unwrap();
        assert!(!rep.has_flag(Diagnostic::UncertifiedAlpha));
    }

    #[test]
    fn vanishing_v_t_falls_back_to_baseline() {
        // diag(1, 0) is not a P-tensor: u - z = (0, 5) gives a zero argmax at t = 1
        let inst = TcpInstance::new(
            DenseTensor::diagonal(4, &[1.0, 0.0]).unwrap(),
            vec![-1.0, 0.0],
        )
        .unwrap();
        let alpha = AlphaEstimate::uncertified(1.0, crate::AlphaKind::F);
        let rep = bound_report(
            &inst,
            &[1.0, 0.0],
            &[1.0, 5.0],
            &alpha,
            &BoundOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.residual.t, 0);
        assert_eq!(rep.residual.v_t, 0.0);
        assert!(rep.has_flag(Diagnostic::ExactSolutionInconsistent));
        assert_eq!((rep.lb_new, rep.ub_new), (rep.lb_base, rep.ub_base));
    }
}
