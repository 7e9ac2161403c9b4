//! The positively homogeneous operators `T_A x = ||x||_2^{2-m} A x^{m-1}` and
//! `F_A x = (A x^{m-1})^{[1/(m-1)]}`, and the constants
//!
//! ```text
//! alpha(T_A) = min_{||x||_inf = 1} max_i x_i (T_A x)_i
//! alpha(F_A) = min_{||x||_inf = 1} max_i x_i (F_A x)_i     (m even)
//! ```
//!
//! `A` is a P-tensor iff `alpha(T_A) > 0` (and, for even `m`, iff
//! `alpha(F_A) > 0`). For a positive diagonal tensor of even order
//! `alpha(F_A) = min_i a_{i...i}^{1/(m-1)}`; that closed form is the only
//! certified value produced here. Every other estimate is the minimum of the
//! objective over finitely many points of the sphere, so it can only sit at
//! or above the true minimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, TcpError};
use crate::exec::Execution;
use crate::tensor::{signed_root, signed_root_scalar, two_norm, DenseTensor};

/// Upper limit on the number of face-grid points evaluated by [`estimate_alpha`].
pub const MAX_GRID_POINTS: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphaKind {
    /// `alpha(T_A)`
    T,
    /// `alpha(F_A)`, even order only
    F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphaMethod {
    ClosedFormDiagonal,
    GridRefined,
}

impl AlphaKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AlphaKind::T => "alpha_T",
            AlphaKind::F => "alpha_F",
        }
    }
}

impl AlphaMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            AlphaMethod::ClosedFormDiagonal => "closed_form_diagonal",
            AlphaMethod::GridRefined => "grid_refined",
        }
    }
}

/// Face grid and local refinement settings for [`estimate_alpha`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Uniform points per free coordinate on each face, including both ends.
    pub points_per_axis: usize,
    /// Coordinate-descent sweeps after the grid pass.
    pub refinement_steps: usize,
    /// Initial coordinate step; halved after every sweep without improvement.
    pub initial_step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            points_per_axis: 41,
            refinement_steps: 50,
            initial_step: 0.1,
        }
    }
}

impl GridSpec {
    pub fn with_points(points_per_axis: usize) -> Self {
        GridSpec {
            points_per_axis,
            ..Self::default()
        }
    }
}

/// A value for `alpha(T_A)` or `alpha(F_A)` together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaEstimate {
    pub value: f64,
    pub kind: AlphaKind,
    pub method: AlphaMethod,
    pub grid_points_per_axis: usize,
    pub refinement_steps: usize,
    /// True only for the diagonal closed form.
    pub certified: bool,
    /// A point of the unit sphere attaining `value`.
    pub argmin: Vec<f64>,
}

impl AlphaEstimate {
    /// An externally supplied value, treated as uncertified.
    pub fn uncertified(value: f64, kind: AlphaKind) -> Self {
        AlphaEstimate {
            value,
            kind,
            method: AlphaMethod::GridRefined,
            grid_points_per_axis: 0,
            refinement_steps: 0,
            certified: false,
            argmin: Vec::new(),
        }
    }
}

/// `T_A x`; zero at `x = 0`.
pub fn apply_t(a: &DenseTensor, x: &[f64]) -> Result<Vec<f64>> {
    let y = a.contract_m1(x)?;
    let norm = two_norm(x);
    if norm == 0.0 {
        return Ok(vec![0.0; x.len()]);
    }
    let scale = norm.powi(2 - a.order() as i32);
    Ok(y.into_iter().map(|v| v * scale).collect())
}

/// `F_A x`; requires even order.
pub fn apply_f(a: &DenseTensor, x: &[f64]) -> Result<Vec<f64>> {
    a.require_even_order()?;
    let y = a.contract_m1(x)?;
    signed_root(&y, (a.order() - 1) as u32)
}

/// `max_i x_i (op x)_i`, the inner maximum in the definition of alpha.
pub fn alpha_objective(a: &DenseTensor, kind: AlphaKind, x: &[f64]) -> Result<f64> {
    let y = match kind {
        AlphaKind::T => apply_t(a, x)?,
        AlphaKind::F => apply_f(a, x)?,
    };
    Ok(max_product(x, &y))
}

fn max_product(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| a * b)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Objective evaluator that skips re-validating shapes in hot loops.
struct Objective<'a> {
    tensor: &'a DenseTensor,
    kind: AlphaKind,
}

impl Objective<'_> {
    fn eval(&self, x: &[f64]) -> f64 {
        let mut y = self
            .tensor
            .contract_m1(x)
            .expect("grid points have the tensor dimension");
        match self.kind {
            AlphaKind::T => {
                let norm = two_norm(x);
                let scale = norm.powi(2 - self.tensor.order() as i32);
                y.iter_mut().for_each(|v| *v *= scale);
            }
            AlphaKind::F => {
                let r = (self.tensor.order() - 1) as u32;
                y.iter_mut().for_each(|v| *v = signed_root_scalar(*v, r));
            }
        }
        max_product(x, &y)
    }
}

/// Point number `index` of the face grid: face `index / per_face` fixes
/// coordinate `face / 2` to `-1` (even face) or `+1` (odd face).
fn face_point(n: usize, g: usize, per_face: usize, index: usize) -> Vec<f64> {
    let face = index / per_face;
    let mut rest = index % per_face;
    let fixed = face / 2;
    let mut x = vec![0.0; n];
    for (k, xk) in x.iter_mut().enumerate() {
        if k == fixed {
            *xk = if face.is_multiple_of(2) { -1.0 } else { 1.0 };
        } else {
            let step = rest % g;
            rest /= g;
            *xk = -1.0 + 2.0 * step as f64 / (g - 1) as f64;
        }
    }
    x
}

/// Grid-plus-refinement estimate of `alpha(T_A)` or `alpha(F_A)`.
pub fn estimate_alpha(a: &DenseTensor, kind: AlphaKind, grid: GridSpec) -> Result<AlphaEstimate> {
    estimate_alpha_with(a, kind, grid, Execution::default())
}

pub fn estimate_alpha_with(
    a: &DenseTensor,
    kind: AlphaKind,
    grid: GridSpec,
    exec: Execution,
) -> Result<AlphaEstimate> {
    if kind == AlphaKind::F {
        a.require_even_order()?;
    }
    let g = grid.points_per_axis;
    if g < 2 {
        return Err(TcpError::InvalidGrid(format!(
            "points_per_axis must be at least 2, got {g}"
        )));
    }
    if grid.initial_step.is_nan() || grid.initial_step <= 0.0 {
        return Err(TcpError::InvalidGrid(
            "initial_step must be positive".into(),
        ));
    }
    let n = a.dim();
    let per_face = u32::try_from(n - 1)
        .ok()
        .and_then(|e| g.checked_pow(e))
        .filter(|&p| p.saturating_mul(2 * n) <= MAX_GRID_POINTS)
        .ok_or_else(|| {
            TcpError::InvalidGrid(format!(
                "{g} points per axis in dimension {n} exceeds {MAX_GRID_POINTS} grid points"
            ))
        })?;
    let objective = Objective { tensor: a, kind };

    // Ties go to the lowest grid index, so the result is schedule independent.
    let (best_value, best_index) = exec
        .min_range(
            2 * n * per_face,
            |i| (objective.eval(&face_point(n, g, per_face, i)), i),
            |l, r| l.0.total_cmp(&r.0).then(l.1.cmp(&r.1)),
        )
        .expect("grid is nonempty");
    let mut best = face_point(n, g, per_face, best_index);

    let fixed = best.iter().position(|v| v.abs() == 1.0).unwrap_or(0);
    let mut value = best_value;
    let mut step = grid.initial_step;
    for _ in 0..grid.refinement_steps {
        let mut improved = false;
        'sweep: for k in (0..n).filter(|&k| k != fixed) {
            for delta in [step, -step] {
                let mut cand = best.clone();
                cand[k] = (cand[k] + delta).clamp(-1.0, 1.0);
                let v = objective.eval(&cand);
                if v < value {
                    value = v;
                    best = cand;
                    improved = true;
                    continue 'sweep;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    Ok(AlphaEstimate {
        value,
        kind,
        method: AlphaMethod::GridRefined,
        grid_points_per_axis: g,
        refinement_steps: grid.refinement_steps,
        certified: false,
        argmin: best,
    })
}

/// `alpha(F_A) = min_i a_{i...i}^{1/(m-1)}` for a positive diagonal tensor of
/// even order.
pub fn alpha_f_diagonal(a: &DenseTensor) -> Result<AlphaEstimate> {
    a.require_even_order()?;
    let diag = a.positive_diagonal()?;
    let r = (a.order() - 1) as u32;
    let (imin, value) = diag
        .iter()
        .map(|&d| signed_root_scalar(d, r))
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
        );
    let mut argmin = vec![0.0; a.dim()];
    argmin[imin] = 1.0;
    Ok(AlphaEstimate {
        value,
        kind: AlphaKind::F,
        method: AlphaMethod::ClosedFormDiagonal,
        grid_points_per_axis: 0,
        refinement_steps: 0,
        certified: true,
        argmin,
    })
}

/// Closed form when `A` is positive diagonal of even order, grid estimate otherwise.
pub fn alpha_f_best(a: &DenseTensor, grid: GridSpec) -> Result<AlphaEstimate> {
    if a.order().is_multiple_of(2) && a.is_positive_diagonal() {
        alpha_f_diagonal(a)
    } else {
        estimate_alpha(a, AlphaKind::F, grid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PVerdict {
    /// No sampled point violated the P-property. Sampling cannot certify it.
    LikelyP {
        samples_evaluated: usize,
        min_objective: f64,
    },
    /// `max_i x_i (A x^{m-1})_i <= 0` at `witness`, so `A` is not a P-tensor.
    NotP { witness: Vec<f64>, objective: f64 },
}

impl PVerdict {
    pub fn is_not_p(&self) -> bool {
        matches!(self, PVerdict::NotP { .. })
    }
}

fn p_objective(a: &DenseTensor, x: &[f64]) -> f64 {
    let y = a.contract_m1(x).expect("sample has the tensor dimension");
    max_product(x, &y)
}

/// Sampled P-tensor check on the unit `inf`-sphere.
///
/// Evaluates `max_i x_i (A x^{m-1})_i` at `+-e_i` and then at `sample_count`
/// seeded pseudo-random points; the first nonpositive value in that order is
/// returned as a witness.
pub fn check_p_tensor_sampled(a: &DenseTensor, sample_count: usize, seed: u64) -> PVerdict {
    check_p_tensor_sampled_with(a, sample_count, seed, Execution::default())
}

pub fn check_p_tensor_sampled_with(
    a: &DenseTensor,
    sample_count: usize,
    seed: u64,
    exec: Execution,
) -> PVerdict {
    let n = a.dim();
    let mut points = Vec::with_capacity(2 * n + sample_count);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            points.push(e);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sample_count {
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let k = rng.gen_range(0..n);
        x[k] = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        points.push(x);
    }
    let values = exec.map(&points, |x| p_objective(a, x));
    match values.iter().position(|&v| v <= 0.0) {
        Some(i) => PVerdict::NotP {
            objective: values[i],
            witness: points.swap_remove(i),
        },
        None => PVerdict::LikelyP {
            samples_evaluated: points.len(),
            min_objective: values.into_iter().fold(f64::INFINITY, f64::min),
        },
    }
}

/// Checks that an estimate is usable by the bounds: kind `F` and positive.
pub(crate) fn require_positive_alpha_f(alpha: &AlphaEstimate) -> Result<()> {
    if alpha.kind != AlphaKind::F {
        return Err(TcpError::NotPCertificate(
            "bounds require an estimate of alpha(F_A)".into(),
        ));
    }
    if alpha.value.is_nan() || alpha.value <= 0.0 {
        return Err(TcpError::NotPCertificate(format!(
            "alpha(F_A) = {} is not positive",
            alpha.value
        )));
    }
    Ok(())
}
