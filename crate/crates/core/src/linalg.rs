//! Small dense numerics shared across modules.
//!
//! Parallel helpers split work into fixed-size chunks so results are
//! bit-identical regardless of thread count or scheduling.

use ndarray::{s, Array2, ArrayView2, Axis};
use rayon::prelude::*;

use crate::{Error, Result};

/// Row-chunk size for parallel GEMM. Fixed so outputs never depend on the
/// number of worker threads.
const GEMM_CHUNK: usize = 4096;

/// `a @ b` with deterministic row-chunk parallelism.
pub fn matmul(a: ArrayView2<f64>, b: ArrayView2<f64>) -> Array2<f64> {
    let (m, k) = a.dim();
    let (k2, n) = b.dim();
    assert_eq!(k, k2, "matmul inner dims {k} vs {k2}");
    if m <= GEMM_CHUNK {
        return a.dot(&b);
    }
    let mut c = Array2::<f64>::zeros((m, n));
    let mut views = Vec::new();
    let mut rest = c.view_mut();
    let mut lo = 0;
    while lo < m {
        let hi = (lo + GEMM_CHUNK).min(m);
        let (head, tail) = rest.split_at(Axis(0), hi - lo);
        views.push((lo, head));
        rest = tail;
        lo = hi;
    }
    views.par_iter_mut().for_each(|(lo, out)| {
        let hi = *lo + out.dim().0;
        out.assign(&a.slice(s![*lo..hi, ..]).dot(&b));
    });
    c
}

/// `a^T @ b` where both operands have the tall dimension first.
pub fn matmul_tn(a: ArrayView2<f64>, b: ArrayView2<f64>) -> Array2<f64> {
    let (m, ka) = a.dim();
    let (m2, n) = b.dim();
    assert_eq!(m, m2, "matmul_tn outer dims {m} vs {m2}");
    // Split along the contraction axis in fixed chunks, then reduce in a
    // fixed order. Each partial product is a plain dgemm.
    if m <= GEMM_CHUNK {
        return a.t().dot(&b);
    }
    let bounds: Vec<(usize, usize)> = (0..m)
        .step_by(GEMM_CHUNK)
        .map(|lo| (lo, (lo + GEMM_CHUNK).min(m)))
        .collect();
    let partials: Vec<Array2<f64>> = bounds
        .par_iter()
        .map(|&(lo, hi)| a.slice(s![lo..hi, ..]).t().dot(&b.slice(s![lo..hi, ..])))
        .collect();
    let mut acc = Array2::<f64>::zeros((ka, n));
    for p in partials {
        acc += &p;
    }
    acc
}

/// Cache-blocked out-of-place transpose.
pub fn transpose(a: &Array2<f64>) -> Array2<f64> {
    const BLK: usize = 64;
    let (m, n) = a.dim();
    let mut out = Array2::<f64>::zeros((n, m));
    let av = a.as_slice().expect("transpose expects standard layout");
    {
        let ov = out.as_slice_mut().unwrap();
        for i0 in (0..m).step_by(BLK) {
            let i1 = (i0 + BLK).min(m);
            for j0 in (0..n).step_by(BLK) {
                let j1 = (j0 + BLK).min(n);
                for i in i0..i1 {
                    for j in j0..j1 {
                        ov[j * m + i] = av[i * n + j];
                    }
                }
            }
        }
    }
    out
}

/// Map f64 bits to u64 preserving the total order of finite values.
#[inline]
fn order_key(x: f64) -> u64 {
    let b = x.to_bits();
    if b & 0x8000_0000_0000_0000 != 0 {
        !b
    } else {
        b | 0x8000_0000_0000_0000
    }
}

/// Stable ascending sort of `values`, returning the permutation such that
/// `perm[k]` is the original index of the k-th smallest value. LSD radix on
/// the order-preserving bit pattern; ties keep original order because the
/// passes are stable and indices enter in increasing order.
pub fn sort_with_permutation(values: &[f64], out_sorted: &mut [f64], out_perm: &mut [u32]) {
    let n = values.len();
    debug_assert_eq!(out_sorted.len(), n);
    debug_assert_eq!(out_perm.len(), n);
    if n < 64 {
        let mut pairs: Vec<(u64, u32)> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (order_key(v), i as u32))
            .collect();
        pairs.sort_unstable();
        for (k, &(_, i)) in pairs.iter().enumerate() {
            out_perm[k] = i;
            out_sorted[k] = values[i as usize];
        }
        return;
    }
    let mut cur: Vec<(u64, u32)> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| (order_key(v), i as u32))
        .collect();
    let mut next = vec![(0u64, 0u32); n];
    let mut counts = vec![0u32; 1 << 16];
    for pass in 0..4 {
        let shift = pass * 16;
        counts.iter_mut().for_each(|c| *c = 0);
        for &(k, _) in cur.iter() {
            counts[((k >> shift) & 0xFFFF) as usize] += 1;
        }
        let mut total = 0u32;
        for c in counts.iter_mut() {
            let t = *c;
            *c = total;
            total += t;
        }
        for &(k, i) in cur.iter() {
            let d = ((k >> shift) & 0xFFFF) as usize;
            next[counts[d] as usize] = (k, i);
            counts[d] += 1;
        }
        std::mem::swap(&mut cur, &mut next);
    }
    for (k, &(_, i)) in cur.iter().enumerate() {
        out_perm[k] = i;
        out_sorted[k] = values[i as usize];
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in descending order and the matching eigenvectors as
/// columns. Converges when the off-diagonal Frobenius norm drops below 1e-12
/// (absolute), which is adequate for the n <= 64 matrices used here.
pub fn jacobi_eigh(a: &Array2<f64>) -> Result<(Vec<f64>, Array2<f64>)> {
    let n = a.dim().0;
    if a.dim().1 != n {
        return Err(Error::invalid(format!("jacobi_eigh: {:?} not square", a.dim())));
    }
    let mut m = a.clone();
    let sym_err = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (m[[i, j]] - m[[j, i]]).abs())
        .fold(0.0f64, f64::max);
    if sym_err > 1e-10 * (1.0 + frob(&m)) {
        return Err(Error::invalid(format!(
            "jacobi_eigh: matrix not symmetric (max asymmetry {sym_err:.3e})"
        )));
    }
    let mut v = Array2::<f64>::eye(n);
    let tol = 1e-12;
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * m[[p, q]] * m[[p, q]];
            }
        }
        if off.sqrt() < tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[[p, q]];
                if apq.abs() < tol / (n as f64) {
                    continue;
                }
                let app = m[[p, p]];
                let aqq = m[[q, q]];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[[k, p]];
                    let mkq = m[[k, q]];
                    m[[k, p]] = c * mkp - s * mkq;
                    m[[k, q]] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[[p, k]];
                    let mqk = m[[q, k]];
                    m[[p, k]] = c * mpk - s * mqk;
                    m[[q, k]] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[[j, j]].partial_cmp(&m[[i, i]]).unwrap());
    let eigvals: Vec<f64> = order.iter().map(|&i| m[[i, i]]).collect();
    let mut eigvecs = Array2::<f64>::zeros((n, n));
    for (col, &i) in order.iter().enumerate() {
        for k in 0..n {
            eigvecs[[k, col]] = v[[k, i]];
        }
    }
    Ok((eigvals, eigvecs))
}

pub fn frob(a: &Array2<f64>) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// log(sum(exp(xs))) without overflow.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::arr2;

    #[test]
    fn matmul_matches_ndarray() {
        let a = Array2::from_shape_fn((130, 17), |(i, j)| (i * 31 + j * 7) as f64 * 0.01 - 1.0);
        let b = Array2::from_shape_fn((17, 23), |(i, j)| (i * 13 + j * 3) as f64 * 0.02 - 0.5);
        let c = matmul(a.view(), b.view());
        let expect = a.dot(&b);
        assert_abs_diff_eq!(frob(&(&c - &expect)), 0.0, epsilon = 1e-12);
        let ct = matmul_tn(a.view(), a.view());
        let et = a.t().dot(&a);
        assert_abs_diff_eq!(frob(&(&ct - &et)), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn transpose_round_trip() {
        let a = Array2::from_shape_fn((37, 91), |(i, j)| (i * 91 + j) as f64);
        let t = transpose(&a);
        assert_eq!(t.dim(), (91, 37));
        assert_eq!(transpose(&t), a);
    }

    #[test]
    fn radix_sort_matches_std_and_is_stable() {
        let values = vec![3.0, -1.0, 2.0, 2.0, -1.0, 0.0, -7.5, 3.0];
        let mut sorted = vec![0.0; values.len()];
        let mut perm = vec![0u32; values.len()];
        sort_with_permutation(&values, &mut sorted, &mut perm);
        assert_eq!(sorted, vec![-7.5, -1.0, -1.0, 0.0, 2.0, 2.0, 3.0, 3.0]);
        // ties keep original order
        assert_eq!(perm, vec![6, 1, 4, 5, 2, 3, 0, 7]);

        let mut rng = crate::rng::Rng::new(5);
        let big: Vec<f64> = (0..5000).map(|_| rng.normal() * 100.0).collect();
        let mut s = vec![0.0; big.len()];
        let mut p = vec![0u32; big.len()];
        sort_with_permutation(&big, &mut s, &mut p);
        let mut expect = big.clone();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(s, expect);
        for (k, &i) in p.iter().enumerate() {
            assert_eq!(s[k], big[i as usize]);
        }
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        let a = arr2(&[[2.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 2.0]]);
        let (vals, vecs) = jacobi_eigh(&a).unwrap();
        // analytic eigenvalues 2 + sqrt(2), 2, 2 - sqrt(2)
        assert_abs_diff_eq!(vals[0], 2.0 + 2.0f64.sqrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(vals[1], 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(vals[2], 2.0 - 2.0f64.sqrt(), epsilon = 1e-10);
        // reconstruction
        let lam = Array2::from_diag(&ndarray::arr1(&vals));
        let rec = vecs.dot(&lam).dot(&vecs.t());
        assert_abs_diff_eq!(frob(&(&rec - &a)), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn logsumexp_stable() {
        assert_abs_diff_eq!(logsumexp(&[1000.0, 1000.0]), 1000.0 + 2.0f64.ln(), epsilon = 1e-12);
        assert_eq!(logsumexp(&[f64::NEG_INFINITY]), f64::NEG_INFINITY);
    }
}
