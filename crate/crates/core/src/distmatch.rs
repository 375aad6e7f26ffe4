//! Per-dimension distribution matching.
//!
//! The training-facing piece is [`pdm_penalty`]: sort every column of each
//! domain's data matrix, fold the sorted matrices into per-domain moving
//! averages, and penalize the squared Frobenius distance of each average to
//! the cross-domain mean. The rest of the module certifies why rank-pairing
//! is the right matching: closed-form Gaussian divergences, the mixture
//! matching bound, a numeric-integration oracle for the mixture divergences,
//! and a factorial brute-force matcher.
//!
//! The kernel bandwidth never appears inside the penalty itself: the squared
//! distance form absorbs the 1/(2 sigma^2) factor into the penalty weight, so
//! sigma only parameterizes the oracle and bound operations.

use ndarray::Array2;
use rayon::prelude::*;

use crate::linalg::{logsumexp, sort_with_permutation, transpose};
use crate::{Error, Result};

/// Column-sort a matrix, returning the sorted matrix and, per column, the
/// permutation mapping sorted row index to original row index. Ties keep
/// their original order.
pub fn sort_columns(x: &Array2<f64>) -> Result<(Array2<f64>, Vec<Vec<u32>>)> {
    if x.iter().any(|v| v.is_nan()) {
        return Err(Error::invalid("sort_columns: NaN entry"));
    }
    let (b, d) = x.dim();
    let xt = transpose(x);
    let xt_slice = xt.as_slice().unwrap();
    let mut sorted_t = vec![0.0; b * d];
    let mut perms: Vec<Vec<u32>> = vec![vec![0u32; b]; d];
    sorted_t
        .par_chunks_mut(b)
        .zip(perms.par_iter_mut())
        .enumerate()
        .for_each(|(j, (out_col, perm))| {
            sort_with_permutation(&xt_slice[j * b..(j + 1) * b], out_col, perm);
        });
    let sorted = transpose(&Array2::from_shape_vec((d, b), sorted_t).unwrap());
    Ok((sorted, perms))
}

/// Per-domain moving averages of column-sorted matrices.
///
/// Buffers start at zero and are allocated lazily on the first update so the
/// shape follows the data. The decay `gamma` is fixed at construction.
#[derive(Debug, Clone)]
pub struct SortedMaBuffer {
    gamma: f64,
    per_domain: Vec<Array2<f64>>,
    initialized: bool,
}

impl SortedMaBuffer {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&gamma) {
            return Err(Error::invalid(format!("gamma {gamma} outside [0, 1)")));
        }
        Ok(SortedMaBuffer {
            gamma,
            per_domain: Vec::new(),
            initialized: false,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn is_initialized(&self) -> bool {
        self.initialized
    }

    pub fn domains(&self) -> &[Array2<f64>] {
        &self.per_domain
    }
}

/// One PDM step over `m` same-shape domain matrices.
///
/// Sorts each matrix columnwise, updates the moving averages
/// `X_ma^i <- gamma * X_ma^i + (1 - gamma) * X_sorted^i`, and returns
///
/// - the penalty `(1 / (m d b)) * sum_i || X_ma - X_ma^i ||_F^2` with
///   `X_ma` the mean of the updated averages,
/// - the gradient of the penalty with respect to each input matrix
///   (history treated as constant, the sort as a fixed permutation),
/// - the updated buffer.
pub fn pdm_penalty(
    batches: &[Array2<f64>],
    mut buffer: SortedMaBuffer,
) -> Result<(f64, Vec<Array2<f64>>, SortedMaBuffer)> {
    let m = batches.len();
    if m < 2 {
        return Err(Error::invalid("pdm_penalty needs at least two domains"));
    }
    let (b, d) = batches[0].dim();
    if b == 0 || d == 0 {
        return Err(Error::invalid("pdm_penalty: empty batch"));
    }
    for (i, batch) in batches.iter().enumerate() {
        if batch.dim() != (b, d) {
            return Err(Error::invalid(format!(
                "domain {i} has shape {:?}, expected {:?}",
                batch.dim(),
                (b, d)
            )));
        }
    }
    if !buffer.initialized {
        buffer.per_domain = vec![Array2::zeros((b, d)); m];
        buffer.initialized = true;
    } else if buffer.per_domain.len() != m || buffer.per_domain[0].dim() != (b, d) {
        return Err(Error::invalid("buffer shape does not match the batches"));
    }

    let gamma = buffer.gamma;
    let sorted: Vec<(Array2<f64>, Vec<Vec<u32>>)> = batches
        .iter()
        .map(sort_columns)
        .collect::<Result<_>>()?;

    for (ma, (s, _)) in buffer.per_domain.iter_mut().zip(&sorted) {
        ma.zip_mut_with(s, |m, &s| *m = gamma * *m + (1.0 - gamma) * s);
    }
    let mut mean = Array2::<f64>::zeros((b, d));
    for ma in &buffer.per_domain {
        mean += ma;
    }
    mean /= m as f64;

    let norm = 1.0 / (m * d * b) as f64;
    let mut loss = 0.0;
    for ma in &buffer.per_domain {
        let mut acc = 0.0;
        ndarray::Zip::from(ma).and(&mean).for_each(|&a, &b| {
            let diff = a - b;
            acc += diff * diff;
        });
        loss += acc;
    }
    loss *= norm;

    // d loss / d X_ma^i = 2 norm (X_ma^i - X_ma) because the deviations from
    // the mean sum to zero; the current batch enters with weight (1 - gamma)
    // and the sort scatters the gradient back to original row positions.
    let grads: Vec<Array2<f64>> = buffer
        .per_domain
        .iter()
        .zip(&sorted)
        .map(|(ma, (_, perms))| {
            let scale = 2.0 * norm * (1.0 - gamma);
            let mut grad = Array2::<f64>::zeros((b, d));
            for j in 0..d {
                let perm = &perms[j];
                for (k, &src) in perm.iter().enumerate() {
                    grad[[src as usize, j]] = scale * (ma[[k, j]] - mean[[k, j]]);
                }
            }
            grad
        })
        .collect();

    Ok((loss, grads, buffer))
}

/// Stateless PDM value: fresh zero buffer with gamma = 0, so the penalty is
/// the pure sorted-matching distance of the current batches. Used for
/// learning-dynamics traces where no training state may be touched.
pub fn pdm_value_stateless(batches: &[Array2<f64>]) -> Result<f64> {
    let buffer = SortedMaBuffer::new(0.0)?;
    let (loss, _, _) = pdm_penalty(batches, buffer)?;
    Ok(loss)
}

/// KL divergence between two Gaussians with equal variance sigma^2:
/// `(x1 - x2)^2 / (2 sigma^2)`.
pub fn gaussian_kl(x1: f64, x2: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::invalid(format!("sigma {sigma} must be positive")));
    }
    let diff = x1 - x2;
    Ok(diff * diff / (2.0 * sigma * sigma))
}

/// 1-Wasserstein distance between two equal-variance Gaussians: `|x1 - x2|`.
pub fn gaussian_w1(x1: f64, x2: f64) -> f64 {
    (x1 - x2).abs()
}

/// Divergence used when pairing kernel components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMetric {
    Kl,
    W1,
}

/// Kernel-mixture comparison parameters: bandwidth, integration halfwidth in
/// units of sigma, and the integrator tolerance.
#[derive(Debug, Clone, Copy)]
pub struct KdeSpec {
    pub sigma: f64,
    pub integration_halfwidth: f64,
    pub tolerance: f64,
}

impl KdeSpec {
    pub fn new(sigma: f64) -> Result<Self> {
        let spec = KdeSpec {
            sigma,
            integration_halfwidth: 10.0,
            tolerance: 1e-8,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) {
            return Err(Error::invalid("sigma must be positive"));
        }
        if !(self.integration_halfwidth > 0.0) || !(self.tolerance > 0.0) {
            return Err(Error::invalid(
                "integration halfwidth and tolerance must be positive",
            ));
        }
        Ok(())
    }
}

fn check_permutation(perm: &[usize], b: usize) -> Result<()> {
    if perm.len() != b {
        return Err(Error::invalid("permutation length mismatch"));
    }
    let mut seen = vec![false; b];
    for &p in perm {
        if p >= b || seen[p] {
            return Err(Error::invalid("not a bijection"));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Average pairwise divergence of matched kernel components:
/// `(1/b) sum_i div(P_i, Q_perm(i))`. Upper-bounds the divergence between
/// the two mixtures for any bijection.
pub fn matching_bound(
    points1: &[f64],
    points2: &[f64],
    perm: &[usize],
    spec: &KdeSpec,
    metric: PairMetric,
) -> Result<f64> {
    spec.validate()?;
    if points1.len() != points2.len() || points1.is_empty() {
        return Err(Error::invalid("point sets must have equal nonzero length"));
    }
    check_permutation(perm, points1.len())?;
    let total: f64 = points1
        .iter()
        .enumerate()
        .map(|(i, &x1)| {
            let x2 = points2[perm[i]];
            match metric {
                PairMetric::Kl => {
                    let diff = x1 - x2;
                    diff * diff / (2.0 * spec.sigma * spec.sigma)
                }
                PairMetric::W1 => (x1 - x2).abs(),
            }
        })
        .sum();
    Ok(total / points1.len() as f64)
}

/// log density of the equal-weight Gaussian mixture centered at `points`.
fn mixture_log_pdf(x: f64, points: &[f64], sigma: f64) -> f64 {
    let log_norm = -((points.len() as f64).ln())
        - 0.5 * (2.0 * std::f64::consts::PI).ln()
        - sigma.ln();
    let exps: Vec<f64> = points
        .iter()
        .map(|&c| {
            let z = (x - c) / sigma;
            -0.5 * z * z
        })
        .collect();
    log_norm + logsumexp(&exps)
}

/// CDF of the equal-weight Gaussian mixture.
fn mixture_cdf(x: f64, points: &[f64], sigma: f64) -> f64 {
    let inv = 1.0 / (sigma * std::f64::consts::SQRT_2);
    points
        .iter()
        .map(|&c| 0.5 * (1.0 + libm::erf((x - c) * inv)))
        .sum::<f64>()
        / points.len() as f64
}

const MAX_REFINEMENT_DEPTH: u32 = 24;

/// Adaptive Simpson quadrature with the classical |S2 - S1|/15 error
/// estimate. Depth exhaustion surfaces as a numeric failure carrying the
/// last estimate.
fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> std::result::Result<f64, f64> {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> std::result::Result<f64, f64> {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let err = left + right - whole;
        if err.abs() <= 15.0 * tol {
            return Ok(left + right + err / 15.0);
        }
        if depth >= MAX_REFINEMENT_DEPTH {
            return Err(left + right);
        }
        let l = recurse(f, a, fa, m, fm, left, lm, flm, tol * 0.5, depth + 1);
        let r = recurse(f, m, fm, b, fb, right, rm, frm, tol * 0.5, depth + 1);
        match (l, r) {
            (Ok(x), Ok(y)) => Ok(x + y),
            (Ok(x) | Err(x), Ok(y) | Err(y)) => Err(x + y),
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 0)
}

/// Numeric divergence between the two kernel mixtures; the oracle for the
/// matching bound. KL integrates `p log(p/q)` by adaptive Simpson;
/// W1 integrates `|F - G|` by composite trapezoid with at least 4096 panels.
pub fn kde_divergence_numeric(
    points1: &[f64],
    points2: &[f64],
    spec: &KdeSpec,
    metric: PairMetric,
) -> Result<f64> {
    spec.validate()?;
    if points1.is_empty() || points2.is_empty() {
        return Err(Error::invalid("point sets must be nonempty"));
    }
    if points1.len() > 64 || points2.len() > 64 {
        return Err(Error::ResourceLimit(
            "numeric oracle is limited to 64 kernel components".into(),
        ));
    }
    let lo = points1
        .iter()
        .chain(points2)
        .cloned()
        .fold(f64::INFINITY, f64::min)
        - spec.integration_halfwidth * spec.sigma;
    let hi = points1
        .iter()
        .chain(points2)
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
        + spec.integration_halfwidth * spec.sigma;
    match metric {
        PairMetric::Kl => {
            let f = |x: f64| {
                let lp = mixture_log_pdf(x, points1, spec.sigma);
                let lq = mixture_log_pdf(x, points2, spec.sigma);
                let p = lp.exp();
                if p == 0.0 {
                    0.0
                } else {
                    p * (lp - lq)
                }
            };
            adaptive_simpson(&f, lo, hi, spec.tolerance).map_err(|last| Error::NumericFailure {
                what: "adaptive Simpson refinement exhausted".into(),
                last_estimate: last,
            })
        }
        PairMetric::W1 => {
            let panels = 4096usize;
            let h = (hi - lo) / panels as f64;
            let g = |x: f64| {
                (mixture_cdf(x, points1, spec.sigma) - mixture_cdf(x, points2, spec.sigma)).abs()
            };
            let mut sum = 0.5 * (g(lo) + g(hi));
            for i in 1..panels {
                sum += g(lo + h * i as f64);
            }
            Ok(sum * h)
        }
    }
}

/// Exhaustive minimization of the summed pairwise divergence over all b!
/// bijections. Returns the best permutation and its summed value. When both
/// inputs are sorted ascending the identity attains the minimum.
pub fn brute_force_optimal_matching(
    points1: &[f64],
    points2: &[f64],
    metric: PairMetric,
    sigma: f64,
) -> Result<(Vec<usize>, f64)> {
    let b = points1.len();
    if b == 0 || points2.len() != b {
        return Err(Error::invalid("point sets must have equal nonzero length"));
    }
    if b > 8 {
        return Err(Error::ResourceLimit(format!(
            "brute force enumerates b! permutations; b = {b} > 8"
        )));
    }
    if !(sigma > 0.0) {
        return Err(Error::invalid("sigma must be positive"));
    }
    let cost = |i: usize, j: usize| match metric {
        PairMetric::Kl => {
            let diff = points1[i] - points2[j];
            diff * diff / (2.0 * sigma * sigma)
        }
        PairMetric::W1 => (points1[i] - points2[j]).abs(),
    };
    let mut perm: Vec<usize> = (0..b).collect();
    let eval = |perm: &[usize]| -> f64 { (0..b).map(|i| cost(i, perm[i])).sum() };
    let mut best_perm = perm.clone();
    let mut best_value = eval(&perm);
    // Heap's algorithm, starting from the identity so ties keep it
    let mut c = vec![0usize; b];
    let mut i = 0;
    while i < b {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let v = eval(&perm);
            if v < best_value {
                best_value = v;
                best_perm = perm.clone();
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok((best_perm, best_value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::arr2;

    use crate::rng::Rng;

    #[test]
    fn sort_columns_basic() {
        let (sorted, perms) = sort_columns(&arr2(&[[3.0], [1.0]])).unwrap();
        assert_eq!(sorted, arr2(&[[1.0], [3.0]]));
        assert_eq!(perms[0], vec![1, 0]);
    }

    #[test]
    fn sort_columns_idempotent_on_sorted_input() {
        let x = arr2(&[[1.0, 5.0], [2.0, 6.0], [3.0, 7.0]]);
        let (sorted, perms) = sort_columns(&x).unwrap();
        assert_eq!(sorted, x);
        for p in perms {
            assert_eq!(p, vec![0, 1, 2]);
        }
    }

    #[test]
    fn sort_columns_stable_on_ties() {
        let (sorted, perms) = sort_columns(&arr2(&[[2.0], [2.0], [1.0]])).unwrap();
        assert_eq!(sorted, arr2(&[[1.0], [2.0], [2.0]]));
        assert_eq!(perms[0], vec![2, 0, 1]);
    }

    #[test]
    fn sort_columns_rejects_nan() {
        assert!(sort_columns(&arr2(&[[f64::NAN], [0.0]])).is_err());
    }

    #[test]
    fn pdm_zero_on_identical_batches() {
        let batch = arr2(&[[0.3, -1.0], [2.0, 0.5], [-0.7, 4.0]]);
        for gamma in [0.0, 0.5, 0.9] {
            let buffer = SortedMaBuffer::new(gamma).unwrap();
            let (loss, grads, _) =
                pdm_penalty(&[batch.clone(), batch.clone(), batch.clone()], buffer).unwrap();
            assert_abs_diff_eq!(loss, 0.0, epsilon = 1e-15);
            for g in grads {
                assert!(g.iter().all(|&v| v.abs() < 1e-15));
            }
        }
    }

    #[test]
    fn pdm_hand_example() {
        // m=2, b=2, d=1, gamma=0: sorted [1,3] and [2,4], mean [1.5,3.5]
        let buffer = SortedMaBuffer::new(0.0).unwrap();
        let b1 = arr2(&[[3.0], [1.0]]);
        let b2 = arr2(&[[2.0], [4.0]]);
        let (loss, _, buffer) = pdm_penalty(&[b1, b2], buffer).unwrap();
        assert_abs_diff_eq!(loss, 0.25, epsilon = 1e-15);
        assert!(buffer.is_initialized());
        assert_eq!(buffer.domains()[0], arr2(&[[1.0], [3.0]]));
    }

    #[test]
    fn pdm_quadratic_in_translation() {
        // m=2, b=1, d=1, gamma=0, fresh buffer: loss(t) = t^2 / 4
        for t in [0.1, 0.5, 2.0, -3.0] {
            let buffer = SortedMaBuffer::new(0.0).unwrap();
            let (loss, _, _) =
                pdm_penalty(&[arr2(&[[0.0]]), arr2(&[[t]])], buffer).unwrap();
            assert_abs_diff_eq!(loss, t * t / 4.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pdm_invariant_under_row_permutation() {
        let mut rng = Rng::new(4);
        let b1 = Array2::from_shape_fn((6, 3), |_| rng.normal());
        let b2 = Array2::from_shape_fn((6, 3), |_| rng.normal());
        let buffer = SortedMaBuffer::new(0.3).unwrap();
        let (loss, _, _) = pdm_penalty(&[b1.clone(), b2.clone()], buffer).unwrap();
        // shuffle rows of each batch independently
        let mut rows: Vec<usize> = (0..6).collect();
        rng.shuffle(&mut rows);
        let b1p = Array2::from_shape_fn((6, 3), |(i, j)| b1[[rows[i], j]]);
        let buffer = SortedMaBuffer::new(0.3).unwrap();
        let (loss_p, _, _) = pdm_penalty(&[b1p, b2], buffer).unwrap();
        assert_abs_diff_eq!(loss, loss_p, epsilon = 1e-13);
    }

    #[test]
    fn pdm_rejects_shape_mismatch() {
        let buffer = SortedMaBuffer::new(0.0).unwrap();
        let r = pdm_penalty(
            &[Array2::zeros((2, 2)), Array2::zeros((3, 2))],
            buffer,
        );
        assert!(r.is_err());
    }

    /// Finite-difference oracle for the PDM gradient. The loss is evaluated
    /// with a clone of the incoming buffer so every probe sees the same
    /// history.
    fn pdm_loss_with_fixed_history(batches: &[Array2<f64>], buffer: &SortedMaBuffer) -> f64 {
        let (loss, _, _) = pdm_penalty(batches, buffer.clone()).unwrap();
        loss
    }

    #[test]
    fn pdm_gradient_matches_finite_differences() {
        let mut rng = Rng::new(12);
        for trial in 0..5 {
            let (b, d, m) = (4 + trial, 3, 3);
            let batches: Vec<Array2<f64>> = (0..m)
                .map(|_| Array2::from_shape_fn((b, d), |_| rng.normal() * 2.0))
                .collect();
            // warm the buffer so history is nontrivial
            let buffer = SortedMaBuffer::new(0.4).unwrap();
            let warm: Vec<Array2<f64>> = (0..m)
                .map(|_| Array2::from_shape_fn((b, d), |_| rng.normal()))
                .collect();
            let (_, _, buffer) = pdm_penalty(&warm, buffer).unwrap();

            let (_, grads, _) = pdm_penalty(&batches, buffer.clone()).unwrap();
            let h = 1e-5;
            for dom in 0..m {
                for i in 0..b {
                    for j in 0..d {
                        let mut plus = batches.clone();
                        plus[dom][[i, j]] += h;
                        let mut minus = batches.clone();
                        minus[dom][[i, j]] -= h;
                        let fd = (pdm_loss_with_fixed_history(&plus, &buffer)
                            - pdm_loss_with_fixed_history(&minus, &buffer))
                            / (2.0 * h);
                        let an = grads[dom][[i, j]];
                        let rel = (an - fd).abs() / fd.abs().max(an.abs()).max(1e-8);
                        assert!(rel < 1e-6, "dom {dom} ({i},{j}): analytic {an}, fd {fd}");
                    }
                }
            }
        }
    }

    #[test]
    fn gaussian_kl_formula() {
        assert_abs_diff_eq!(gaussian_kl(0.0, 0.0, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(gaussian_kl(1.0, 4.0, 1.0).unwrap(), 4.5);
        assert_abs_diff_eq!(gaussian_kl(0.0, 2.0, 2.0).unwrap(), 0.5);
        assert!(gaussian_kl(0.0, 1.0, 0.0).is_err());
        assert_abs_diff_eq!(gaussian_w1(-1.0, 2.5), 3.5);
    }

    #[test]
    fn matching_bound_single_component() {
        let spec = KdeSpec::new(0.7).unwrap();
        let bound = matching_bound(&[1.0], &[3.0], &[0], &spec, PairMetric::Kl).unwrap();
        assert_abs_diff_eq!(bound, gaussian_kl(1.0, 3.0, 0.7).unwrap(), epsilon = 1e-15);
        let same = matching_bound(
            &[1.0, 2.0],
            &[1.0, 2.0],
            &[0, 1],
            &spec,
            PairMetric::W1,
        )
        .unwrap();
        assert_abs_diff_eq!(same, 0.0, epsilon = 1e-15);
        assert!(matching_bound(&[1.0, 2.0], &[1.0, 2.0], &[0, 0], &spec, PairMetric::Kl).is_err());
    }

    #[test]
    fn kde_numeric_identical_sets_vanish() {
        let spec = KdeSpec::new(1.0).unwrap();
        let pts = [0.0, 1.5, -2.0];
        let kl = kde_divergence_numeric(&pts, &pts, &spec, PairMetric::Kl).unwrap();
        assert!(kl.abs() < 1e-7, "kl {kl}");
        let w1 = kde_divergence_numeric(&pts, &pts, &spec, PairMetric::W1).unwrap();
        assert!(w1.abs() < 1e-7, "w1 {w1}");
    }

    #[test]
    fn kde_numeric_single_gaussian_kl() {
        let spec = KdeSpec::new(1.0).unwrap();
        let kl = kde_divergence_numeric(&[0.0], &[2.0], &spec, PairMetric::Kl).unwrap();
        assert_abs_diff_eq!(kl, 2.0, epsilon = 1e-6);
        let w1 = kde_divergence_numeric(&[0.0], &[2.0], &spec, PairMetric::W1).unwrap();
        assert_abs_diff_eq!(w1, 2.0, epsilon = 1e-4);
    }

    #[test]
    fn mixture_bound_dominates_numeric_divergence() {
        let mut rng = Rng::new(42);
        let spec = KdeSpec::new(0.8).unwrap();
        for _ in 0..20 {
            let b = 2 + rng.below(3);
            let mut p1: Vec<f64> = (0..b).map(|_| rng.normal() * 2.0).collect();
            let mut p2: Vec<f64> = (0..b).map(|_| rng.normal() * 2.0 + 0.5).collect();
            p1.sort_by(|a, b| a.partial_cmp(b).unwrap());
            p2.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let identity: Vec<usize> = (0..b).collect();
            for metric in [PairMetric::Kl, PairMetric::W1] {
                let numeric = kde_divergence_numeric(&p1, &p2, &spec, metric).unwrap();
                let bound = matching_bound(&p1, &p2, &identity, &spec, metric).unwrap();
                assert!(
                    numeric <= bound + 1e-6,
                    "{metric:?}: numeric {numeric} > bound {bound}"
                );
            }
        }
    }

    #[test]
    fn brute_force_identity_on_sorted_inputs() {
        let (perm, value) =
            brute_force_optimal_matching(&[1.0, 2.0], &[3.0, 4.0], PairMetric::Kl, 1.0).unwrap();
        assert_eq!(perm, vec![0, 1]);
        assert_abs_diff_eq!(value, 2.0 + 2.0, epsilon = 1e-15);
    }

    #[test]
    fn brute_force_singleton() {
        let (perm, value) =
            brute_force_optimal_matching(&[0.0], &[5.0], PairMetric::Kl, 1.0).unwrap();
        assert_eq!(perm, vec![0]);
        assert_abs_diff_eq!(value, 12.5, epsilon = 1e-15);
    }

    #[test]
    fn brute_force_respects_size_limit() {
        let pts: Vec<f64> = (0..9).map(|i| i as f64).collect();
        assert!(matches!(
            brute_force_optimal_matching(&pts, &pts, PairMetric::W1, 1.0),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn sorted_matching_attains_brute_force_minimum() {
        let mut rng = Rng::new(2024);
        for trial in 0..200 {
            let b = 2 + rng.below(6); // 2..=7
            let mut p1: Vec<f64> = (0..b).map(|_| rng.normal() * 3.0).collect();
            let mut p2: Vec<f64> = (0..b).map(|_| rng.normal() * 3.0 - 1.0).collect();
            p1.sort_by(|a, b| a.partial_cmp(b).unwrap());
            p2.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for metric in [PairMetric::Kl, PairMetric::W1] {
                let (_, best) =
                    brute_force_optimal_matching(&p1, &p2, metric, 1.3).unwrap();
                let sorted_value: f64 = (0..b)
                    .map(|i| match metric {
                        PairMetric::Kl => {
                            let d = p1[i] - p2[i];
                            d * d / (2.0 * 1.3 * 1.3)
                        }
                        PairMetric::W1 => (p1[i] - p2[i]).abs(),
                    })
                    .sum();
                assert!(
                    (sorted_value - best).abs() < 1e-12,
                    "trial {trial} {metric:?}: sorted {sorted_value} vs brute {best}"
                );
            }
        }
    }
}
