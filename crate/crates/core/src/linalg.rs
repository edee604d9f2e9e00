//! Small dense kernels: cyclic Jacobi for tiny Hermitian matrices and
//! vector helpers shared by the eigensolvers.

use num_complex::Complex64;

/// Ascending eigenvalues of an `n×n` Hermitian matrix (row-major).
///
/// `H = X + iY` is embedded as the real symmetric `[[X, −Y], [Y, X]]`,
/// whose spectrum is that of `H` with every eigenvalue doubled; cyclic
/// Jacobi sweeps run on the embedding and every other eigenvalue is kept.
pub fn hermitian_eigenvalues(n: usize, h: &[Complex64]) -> Vec<f64> {
    assert_eq!(h.len(), n * n);
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for j in 0..n {
        for k in 0..n {
            let v = h[j * n + k];
            a[j * m + k] = v.re;
            a[(j + n) * m + k + n] = v.re;
            a[j * m + k + n] = -v.im;
            a[(j + n) * m + k] = v.im;
        }
    }
    let mut ev = jacobi_symmetric(m, &mut a);
    ev.sort_by(f64::total_cmp);
    ev.into_iter().step_by(2).collect()
}

/// Cyclic Jacobi on a real symmetric matrix (destroyed); returns the
/// unsorted diagonal after convergence.
fn jacobi_symmetric(m: usize, a: &mut [f64]) -> Vec<f64> {
    let frob: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|p| (0..m).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p * m + q] * a[p * m + q])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * frob || off == 0.0 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..m).map(|i| a[i * m + i]).collect()
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn jacobi_matches_known_spectrum() {
        // [[2, i, 0], [−i, 2, 0], [0, 0, 5]] has eigenvalues 1, 3, 5
        let z = c(0.0, 0.0);
        let h = [
            c(2.0, 0.0),
            c(0.0, 1.0),
            z,
            c(0.0, -1.0),
            c(2.0, 0.0),
            z,
            z,
            z,
            c(5.0, 0.0),
        ];
        let ev = hermitian_eigenvalues(3, &h);
        for (got, want) in ev.iter().zip([1.0, 3.0, 5.0]) {
            assert!((got - want).abs() < 1e-13, "{ev:?}");
        }
    }

    #[test]
    fn jacobi_diagonal_is_exact() {
        let h = [
            c(3.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(-1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(2.0, 0.0),
        ];
        assert_eq!(hermitian_eigenvalues(3, &h), vec![-1.0, 2.0, 3.0]);
    }
}
