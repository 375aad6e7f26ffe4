//! Exact discrete information measures and executable verifiers.
//!
//! Everything here works on dense tabular joints, so identities hold to
//! floating-point accuracy rather than sampling accuracy. All measures are in
//! nats; [`nats_to_bits`] converts when needed.
//!
//! Conventions: `0 * log 0 = 0`, and `p * log(p / 0) = +inf` surfaces as an
//! explicit `f64::INFINITY`, never a panic.

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::linalg::{frob, jacobi_eigh, matmul};
use crate::rng::Rng;
use crate::{Error, Result};

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

/// xlog(x/y) with the 0-conventions above.
#[inline]
fn xlogxy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if y == 0.0 {
        f64::INFINITY
    } else {
        x * (x / y).ln()
    }
}

/// Exact joint distribution over a small set of named finite variables.
///
/// The table is dense and row-major with the last variable's index moving
/// fastest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteJoint {
    #[serde(rename = "vars")]
    names: Vec<String>,
    #[serde(rename = "card")]
    cards: Vec<usize>,
    #[serde(rename = "p")]
    probs: Vec<f64>,
}

impl DiscreteJoint {
    pub fn new(
        names: Vec<String>,
        cards: Vec<usize>,
        probs: Vec<f64>,
    ) -> Result<Self> {
        if names.is_empty() || names.len() != cards.len() {
            return Err(Error::invalid("joint needs matching names and cardinalities"));
        }
        if cards.iter().any(|&c| c == 0) {
            return Err(Error::invalid("cardinalities must be positive"));
        }
        let size: usize = cards.iter().product();
        if probs.len() != size {
            return Err(Error::invalid(format!(
                "table length {} != product of cardinalities {}",
                probs.len(),
                size
            )));
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::invalid("probabilities must be nonnegative"));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("probabilities sum to {sum}, not 1")));
        }
        Ok(DiscreteJoint { names, cards, probs })
    }

    /// Uniform random joint over the given shape (entries iid uniform, then
    /// normalized). Used heavily by the verification suite.
    pub fn random(names: &[&str], cards: &[usize], rng: &mut Rng) -> Self {
        let size: usize = cards.iter().product();
        let mut probs: Vec<f64> = (0..size).map(|_| rng.uniform() + 1e-12).collect();
        let sum: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= sum);
        // compensate rounding so the sum check holds exactly enough
        let resid: f64 = 1.0 - probs.iter().sum::<f64>();
        probs[0] += resid;
        DiscreteJoint::new(
            names.iter().map(|s| s.to_string()).collect(),
            cards.to_vec(),
            probs,
        )
        .expect("random joint is valid")
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::invalid(format!("unknown variable {name:?}")))
    }

    fn resolve(&self, set: &[&str]) -> Result<Vec<usize>> {
        if set.is_empty() {
            return Err(Error::invalid("variable set must be nonempty"));
        }
        let mut idx = Vec::with_capacity(set.len());
        for name in set {
            let i = self.index_of(name)?;
            if idx.contains(&i) {
                return Err(Error::invalid(format!("duplicate variable {name:?}")));
            }
            idx.push(i);
        }
        Ok(idx)
    }

    /// Decompose a flat table index into per-variable assignments.
    fn unravel(&self, mut flat: usize, out: &mut [usize]) {
        for i in (0..self.cards.len()).rev() {
            out[i] = flat % self.cards[i];
            flat /= self.cards[i];
        }
    }

    /// Flat index of an assignment restricted to the variables in `vars`,
    /// laid out in the order given.
    fn project(assign: &[usize], vars: &[usize], cards: &[usize]) -> usize {
        let mut flat = 0;
        for &v in vars {
            flat = flat * cards[v] + assign[v];
        }
        flat
    }

    /// Marginal table over `vars` (in the given order).
    pub fn marginal(&self, vars: &[usize]) -> Vec<f64> {
        let size: usize = vars.iter().map(|&v| self.cards[v]).product();
        let mut table = vec![0.0; size];
        let mut assign = vec![0usize; self.cards.len()];
        for (flat, &p) in self.probs.iter().enumerate() {
            self.unravel(flat, &mut assign);
            table[Self::project(&assign, vars, &self.cards)] += p;
        }
        table
    }
}

/// I(A;B) in nats by exact summation over the joint table.
pub fn mutual_information(joint: &DiscreteJoint, a: &[&str], b: &[&str]) -> Result<f64> {
    let ia = joint.resolve(a)?;
    let ib = joint.resolve(b)?;
    if ia.iter().any(|i| ib.contains(i)) {
        return Err(Error::invalid("variable sets must be disjoint"));
    }
    let mut ab = ia.clone();
    ab.extend_from_slice(&ib);
    let p_ab = joint.marginal(&ab);
    let p_a = joint.marginal(&ia);
    let p_b = joint.marginal(&ib);
    let nb: usize = ib.iter().map(|&v| joint.cards[v]).product();
    let mut mi = 0.0;
    for (flat, &pab) in p_ab.iter().enumerate() {
        let (fa, fb) = (flat / nb, flat % nb);
        mi += xlogxy(pab, p_a[fa] * p_b[fb]);
    }
    Ok(mi)
}

/// I(A;B|C) in nats.
pub fn mutual_information_given(
    joint: &DiscreteJoint,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<f64> {
    let ia = joint.resolve(a)?;
    let ib = joint.resolve(b)?;
    let ic = joint.resolve(c)?;
    for (x, y) in [(&ia, &ib), (&ia, &ic), (&ib, &ic)] {
        if x.iter().any(|i| y.contains(i)) {
            return Err(Error::invalid("variable sets must be disjoint"));
        }
    }
    // I(A;B|C) = sum p(a,b,c) log [ p(c) p(a,b,c) / (p(a,c) p(b,c)) ]
    let mut abc = ia.clone();
    abc.extend_from_slice(&ib);
    abc.extend_from_slice(&ic);
    let p_abc = joint.marginal(&abc);
    let mut ac = ia.clone();
    ac.extend_from_slice(&ic);
    let p_ac = joint.marginal(&ac);
    let mut bc = ib.clone();
    bc.extend_from_slice(&ic);
    let p_bc = joint.marginal(&bc);
    let p_c = joint.marginal(&ic);
    let na: usize = ia.iter().map(|&v| joint.cards[v]).product();
    let nb: usize = ib.iter().map(|&v| joint.cards[v]).product();
    let nc: usize = ic.iter().map(|&v| joint.cards[v]).product();
    let mut mi = 0.0;
    for fa in 0..na {
        for fb in 0..nb {
            for fc in 0..nc {
                let pabc = p_abc[(fa * nb + fb) * nc + fc];
                if pabc == 0.0 {
                    continue;
                }
                // pabc > 0 forces every marginal below to be positive
                let num = p_c[fc] * pabc;
                let den = p_ac[fa * nc + fc] * p_bc[fb * nc + fc];
                mi += pabc * (num / den).ln();
            }
        }
    }
    Ok(mi)
}

/// Residual of the shift decomposition I(Z;D) - I(X;D) - I(Y;D|X) where
/// Z = (X,Y). The chain rule makes this identically zero; the returned value
/// is the floating-point residual.
pub fn verify_shift_decomposition(joint: &DiscreteJoint) -> Result<f64> {
    let expected = ["X", "Y", "D"];
    if joint.names.len() != 3 || expected.iter().any(|n| joint.index_of(n).is_err()) {
        return Err(Error::invalid("joint must have exactly variables X, Y, D"));
    }
    let dist_shift = mutual_information(joint, &["X", "Y"], &["D"])?;
    let covariate = mutual_information(joint, &["X"], &["D"])?;
    let concept = mutual_information_given(joint, &["Y"], &["D"], &["X"])?;
    Ok(dist_shift - covariate - concept)
}

/// Expected KL of the environment-conditional label law from a fixed
/// predictor, against the concept-shift lower bound.
///
/// Returns `(lhs, rhs)` with `lhs = E_{D,X} KL(P_{Y|X,D} || Q_{Y|X})` and
/// `rhs = I(Y;D|X)`; `lhs >= rhs` always, with equality iff `q` equals the
/// marginal predictor `P_{Y|X}`. A zero `q` entry under positive conditional
/// mass yields `lhs = +inf`.
pub fn predictor_gap(joint: &DiscreteJoint, q: ArrayView2<f64>) -> Result<(f64, f64)> {
    let ix = joint.index_of("X")?;
    let iy = joint.index_of("Y")?;
    let id = joint.index_of("D")?;
    let (cx, cy, cd) = (joint.cards[ix], joint.cards[iy], joint.cards[id]);
    if q.dim() != (cx, cy) {
        return Err(Error::invalid(format!(
            "predictor table {:?} does not match (|X|, |Y|) = ({cx}, {cy})",
            q.dim()
        )));
    }
    for x in 0..cx {
        let row_sum: f64 = (0..cy).map(|y| q[[x, y]]).sum();
        if (row_sum - 1.0).abs() > 1e-9 || (0..cy).any(|y| q[[x, y]] < 0.0) {
            return Err(Error::invalid(format!(
                "predictor row {x} is not a distribution (sum {row_sum})"
            )));
        }
    }
    let p_xyd = joint.marginal(&[ix, iy, id]);
    let p_xd = joint.marginal(&[ix, id]);
    let at = |x: usize, y: usize, d: usize| p_xyd[(x * cy + y) * cd + d];
    let mut lhs = 0.0;
    for x in 0..cx {
        for d in 0..cd {
            let pxd = p_xd[x * cd + d];
            if pxd == 0.0 {
                continue;
            }
            for y in 0..cy {
                let cond = at(x, y, d) / pxd;
                lhs += pxd * xlogxy(cond, q[[x, y]]);
            }
        }
    }
    let rhs = mutual_information_given(joint, &["Y"], &["D"], &["X"])?;
    Ok((lhs, rhs))
}

/// Total variation against the Pinsker bound sqrt(KL(q||p)/2).
pub fn pinsker_chain(p: &[f64], q: &[f64]) -> Result<(f64, f64)> {
    if p.len() != q.len() || p.is_empty() {
        return Err(Error::invalid("distributions must share support size"));
    }
    for (name, dist) in [("p", p), ("q", q)] {
        let sum: f64 = dist.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || dist.iter().any(|&x| x < 0.0) {
            return Err(Error::invalid(format!("{name} is not a distribution")));
        }
    }
    let tv = 0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let kl: f64 = q.iter().zip(p).map(|(&qi, &pi)| xlogxy(qi, pi)).sum();
    Ok((tv, (kl / 2.0).sqrt()))
}

/// The XOR aggregation counterexample: W = D_1 xor ... xor D_m over iid fair
/// bits. Every pairwise I(W;D_s) vanishes while I(W;D_1..D_m) = ln 2.
pub fn xor_counterexample(m: usize) -> Result<(Vec<f64>, f64)> {
    if m < 2 {
        return Err(Error::invalid("need at least two domains"));
    }
    if m > 20 {
        return Err(Error::ResourceLimit(format!(
            "xor table would hold 2^{} entries",
            m + 1
        )));
    }
    let total = 1usize << m;
    let p_each = 1.0 / total as f64;
    // pairwise joints p(w, d_s) and the joint of W with the full tuple
    let mut pairwise = vec![[0.0f64; 4]; m];
    let mut tuple_table = vec![0.0f64; 2 * total];
    for bits in 0..total {
        let w = (bits.count_ones() & 1) as usize;
        for (s, table) in pairwise.iter_mut().enumerate() {
            let ds = (bits >> s) & 1;
            table[w * 2 + ds] += p_each;
        }
        tuple_table[w * total + bits] += p_each;
    }
    let mut per_domain = Vec::with_capacity(m);
    for table in &pairwise {
        let joint = DiscreteJoint::new(
            vec!["W".into(), "Ds".into()],
            vec![2, 2],
            table.to_vec(),
        )?;
        per_domain.push(mutual_information(&joint, &["W"], &["Ds"])?);
    }
    let joint = DiscreteJoint::new(
        vec!["W".into(), "Dtuple".into()],
        vec![2, total],
        tuple_table,
    )?;
    let joint_mi = mutual_information(&joint, &["W"], &["Dtuple"])?;
    Ok((per_domain, joint_mi))
}

/// A pair of distinct environment matrices that assign the same likelihood
/// to the observed batch(es). `sigma1`/`sigma2` parameterize the zero-mean
/// Gaussian density through its quadratic form, i.e. they play the role of
/// inverse covariances.
#[derive(Debug, Clone)]
pub struct CovariancePair {
    pub sigma1: Array2<f64>,
    pub sigma2: Array2<f64>,
    /// |log p(. | sigma1) - log p(. | sigma2)| in nats.
    pub loglik_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndistMode {
    /// One batch, two environments with identical batch likelihood.
    SingleSampleSet,
    /// Two batches, environments that cannot tell them apart.
    TwoSampleSets,
}

/// Zero-mean Gaussian batch log-likelihood with `sigma` entering the density
/// as the quadratic-form (precision) parameter:
/// `log p(S|sigma) = (b/2) log|sigma| - (bn/2) log(2 pi) - 1/2 tr(X^T sigma X)`.
pub fn gaussian_loglik(data: ArrayView2<f64>, sigma: &Array2<f64>) -> Result<f64> {
    let (n, b) = data.dim();
    if sigma.dim() != (n, n) {
        return Err(Error::invalid("sigma must be n x n"));
    }
    let (eigvals, _) = jacobi_eigh(sigma)?;
    let mut logdet = 0.0;
    for &l in &eigvals {
        if l <= 0.0 {
            return Err(Error::invalid(format!(
                "sigma is not positive definite (eigenvalue {l:.3e})"
            )));
        }
        logdet += l.ln();
    }
    let sx = matmul(sigma.view(), data);
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..b {
            quad += data[[i, j]] * sx[[i, j]];
        }
    }
    let bn = (b * n) as f64;
    Ok(0.5 * b as f64 * logdet - 0.5 * bn * (2.0 * std::f64::consts::PI).ln() - 0.5 * quad)
}

/// Build indistinguishable Gaussian environments for the given batch(es).
///
/// Single mode splits R^n into the batch column space and its orthogonal
/// complement, shares the in-span spectrum, and rescales the complement
/// eigenvalues by seeded factors from [0.5, 2.0] normalized to preserve the
/// determinant, so the two environments assign the same likelihood to the
/// batch. Two-set mode solves the per-sample homogeneous system
/// `sum_j [(u_j . x_i^1)^2 - (u_j . x_i^2)^2] lambda_j = 0` for a strictly
/// positive spectrum, making both batches equally likely under each
/// environment; the two returned environments differ in the padding
/// directions invisible to either batch.
pub fn indistinguishable_covariances(
    data: ArrayView2<f64>,
    mode: IndistMode,
    data2: Option<ArrayView2<f64>>,
    seed: u64,
) -> Result<CovariancePair> {
    let (n, b) = data.dim();
    if b == 0 || n == 0 {
        return Err(Error::invalid("empty data"));
    }
    match mode {
        IndistMode::SingleSampleSet => {
            if n <= b + 1 {
                return Err(Error::invalid(format!(
                    "single-set mode needs n > b + 1 (n = {n}, b = {b})"
                )));
            }
            single_set_pair(data, seed)
        }
        IndistMode::TwoSampleSets => {
            let d2 = data2.ok_or_else(|| Error::invalid("two-set mode needs data2"))?;
            if d2.dim() != (n, b) {
                return Err(Error::invalid("data2 must have the same shape as data"));
            }
            if n <= 2 * b + 1 {
                return Err(Error::invalid(format!(
                    "two-set mode needs n > 2b + 1 (n = {n}, b = {b})"
                )));
            }
            two_set_pair(data, d2, seed)
        }
    }
}

/// Eigenvalue threshold for rank detection, relative to the largest one.
const RANK_REL_TOL: f64 = 1e-10;

fn single_set_pair(data: ArrayView2<f64>, seed: u64) -> Result<CovariancePair> {
    let (n, b) = data.dim();
    // Column space of the batch via the Gram matrix X X^T.
    let gram = matmul(data, transpose_view(data).view());
    let (eigvals, eigvecs) = jacobi_eigh(&gram)?;
    let lmax = eigvals[0].max(0.0);
    let rank = eigvals
        .iter()
        .filter(|&&l| l > RANK_REL_TOL * lmax && l > 0.0)
        .count()
        .min(b);
    // in-span spectrum shared by both environments: anything positive works,
    // tie it to the data so the matrices look like plausible precisions
    let span_vals: Vec<f64> = (0..rank)
        .map(|i| 1.0 + eigvals[i] / if lmax > 0.0 { lmax } else { 1.0 })
        .collect();
    let mut rng = Rng::new(seed);
    let comp = n - rank;
    let (mu1, mu2) = loop {
        let mu1: Vec<f64> = vec![1.0; comp];
        let factors: Vec<f64> = (0..comp).map(|_| rng.uniform_in(0.5, 2.0)).collect();
        // normalize so the determinant (product of eigenvalues) is unchanged
        let log_gm = factors.iter().map(|f| f.ln()).sum::<f64>() / comp as f64;
        let gm = log_gm.exp();
        let mu2: Vec<f64> = factors.iter().map(|f| f / gm).collect();
        let dist: f64 = mu1
            .iter()
            .zip(&mu2)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if dist > 1e-5 {
            break (mu1, mu2);
        }
    };
    let assemble = |mu: &[f64]| -> Array2<f64> {
        let mut sigma = Array2::<f64>::zeros((n, n));
        for (k, &val) in span_vals.iter().chain(mu.iter()).enumerate() {
            // eigvecs columns are ordered by descending gram eigenvalue, so
            // the first `rank` span the batch and the rest span the complement
            for i in 0..n {
                for j in 0..n {
                    sigma[[i, j]] += val * eigvecs[[i, k]] * eigvecs[[j, k]];
                }
            }
        }
        symmetrize(&mut sigma);
        sigma
    };
    let sigma1 = assemble(&mu1);
    let sigma2 = assemble(&mu2);
    let ll1 = gaussian_loglik(data, &sigma1)?;
    let ll2 = gaussian_loglik(data, &sigma2)?;
    Ok(CovariancePair {
        loglik_gap: (ll1 - ll2).abs(),
        sigma1,
        sigma2,
    })
}

fn two_set_pair(
    x1: ArrayView2<f64>,
    x2: ArrayView2<f64>,
    seed: u64,
) -> Result<CovariancePair> {
    let (n, b) = x1.dim();
    let k = 2 * b + 1;
    // basis whose first 2b+1 directions cover both column spaces
    let mut stacked = Array2::<f64>::zeros((n, 2 * b));
    for i in 0..n {
        for j in 0..b {
            stacked[[i, j]] = x1[[i, j]];
            stacked[[i, b + j]] = x2[[i, j]];
        }
    }
    let gram = matmul(stacked.view(), transpose_view(stacked.view()).view());
    let (_, eigvecs) = jacobi_eigh(&gram)?;
    // coefficients a_ij = (u_j . x1_i)^2 - (u_j . x2_i)^2 over the first k directions
    let mut a = Array2::<f64>::zeros((b, k));
    for i in 0..b {
        for j in 0..k {
            let (mut p1, mut p2) = (0.0, 0.0);
            for r in 0..n {
                p1 += eigvecs[[r, j]] * x1[[r, i]];
                p2 += eigvecs[[r, j]] * x2[[r, i]];
            }
            a[[i, j]] = p1 * p1 - p2 * p2;
        }
    }
    let lambda = positive_null_vector(&a, seed)?;
    let assemble = |pad: f64| -> Array2<f64> {
        let mut sigma = Array2::<f64>::zeros((n, n));
        for (col, &val) in lambda
            .iter()
            .chain(std::iter::repeat(&pad).take(n - k))
            .enumerate()
        {
            for i in 0..n {
                for j in 0..n {
                    sigma[[i, j]] += val * eigvecs[[i, col]] * eigvecs[[j, col]];
                }
            }
        }
        symmetrize(&mut sigma);
        sigma
    };
    // both environments satisfy the indistinguishability system; they differ
    // only in directions orthogonal to both batches
    let sigma1 = assemble(1.0);
    let sigma2 = assemble(2.0);
    let gap1 = (gaussian_loglik(x1, &sigma1)? - gaussian_loglik(x2, &sigma1)?).abs();
    let gap2 = (gaussian_loglik(x1, &sigma2)? - gaussian_loglik(x2, &sigma2)?).abs();
    Ok(CovariancePair {
        loglik_gap: gap1.max(gap2),
        sigma1,
        sigma2,
    })
}

/// Find a strictly positive vector in the null space of `a` (b rows, k > b
/// columns) by alternating projection between the null space and the shifted
/// positive cone.
fn positive_null_vector(a: &Array2<f64>, seed: u64) -> Result<Vec<f64>> {
    let (b, k) = a.dim();
    // normalize rows so the projector is well-conditioned
    let mut an = a.clone();
    for mut row in an.rows_mut() {
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            row.iter_mut().for_each(|x| *x /= norm);
        }
    }
    // null-space projector I - A^T (A A^T)^+ A
    let aat = an.dot(&an.t());
    let (vals, vecs) = jacobi_eigh(&aat)?;
    let vmax = vals[0].max(0.0);
    let mut pinv = Array2::<f64>::zeros((b, b));
    for (idx, &l) in vals.iter().enumerate() {
        if l > RANK_REL_TOL * vmax && l > 0.0 {
            for i in 0..b {
                for j in 0..b {
                    pinv[[i, j]] += vecs[[i, idx]] * vecs[[j, idx]] / l;
                }
            }
        }
    }
    let proj_null = |v: &[f64]| -> Vec<f64> {
        // v - A^T (AA^T)^+ A v
        let av: Vec<f64> = (0..b)
            .map(|i| (0..k).map(|j| an[[i, j]] * v[j]).sum())
            .collect();
        let pav: Vec<f64> = (0..b)
            .map(|i| (0..b).map(|j| pinv[[i, j]] * av[j]).sum())
            .collect();
        (0..k)
            .map(|j| v[j] - (0..b).map(|i| an[[i, j]] * pav[i]).sum::<f64>())
            .collect()
    };
    let mut rng = Rng::new(seed ^ 0xA5A5_5A5A);
    let floor = 0.05;
    for attempt in 0..16 {
        let mut v: Vec<f64> = if attempt == 0 {
            vec![1.0; k]
        } else {
            (0..k).map(|_| rng.uniform_in(0.5, 1.5)).collect()
        };
        for _ in 0..2000 {
            v = proj_null(&v);
            let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
            if min >= floor {
                break;
            }
            v.iter_mut().for_each(|x| *x = x.max(floor));
        }
        let v = proj_null(&v);
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        if min > 0.0 {
            let mean = v.iter().sum::<f64>() / k as f64;
            return Ok(v.into_iter().map(|x| x / mean).collect());
        }
    }
    Err(Error::NumericFailure {
        what: "no strictly positive spectrum solves the indistinguishability system".into(),
        last_estimate: 0.0,
    })
}

fn symmetrize(m: &mut Array2<f64>) {
    let n = m.dim().0;
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[[i, j]] + m[[j, i]]);
            m[[i, j]] = avg;
            m[[j, i]] = avg;
        }
    }
}

fn transpose_view(a: ArrayView2<f64>) -> Array2<f64> {
    a.t().to_owned()
}

/// Frobenius distance between the two environments of a pair.
pub fn pair_frobenius_distance(pair: &CovariancePair) -> f64 {
    frob(&(&pair.sigma1 - &pair.sigma2))
}
