//! Banded `LDL†` factorization of `A − σI` for Hermitian `A`, without
//! pivoting. Used for shift-invert solves and, through Sylvester's law of
//! inertia, for counting eigenvalues below a threshold.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Default cap on stored band entries (`dim × (bandwidth + 1)`).
pub const DEFAULT_BAND_LIMIT: usize = 16_000_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug)]
pub struct BandedLdl {
    dim: usize,
    bw: usize,
    /// Row `i` holds `L[i][i−bw .. i]` (unit diagonal not stored).
    lower: Vec<Complex64>,
    d: Vec<f64>,
    shift: f64,
}

impl BandedLdl {
    /// Factors `a − shift·I`. Fails with [`Error::BandTooWide`] when the band
    /// storage exceeds `band_limit`, and with [`Error::Breakdown`] on a zero
    /// (or non-finite) pivot.
    pub fn factor(a: &CsrMatrix, shift: f64, band_limit: usize) -> Result<Self> {
        let dim = a.nrows();
        let bw = a.bandwidth();
        let entries = dim.saturating_mul(bw + 1);
        if entries > band_limit {
            return Err(Error::BandTooWide {
                entries,
                limit: band_limit,
            });
        }
        let w = bw + 1;
        let mut lower = vec![ZERO; dim * w];
        let mut diag = vec![0.0; dim];
        for i in 0..dim {
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if j <= i {
                    lower[i * w + (j + bw - i)] = v;
                }
            }
        }
        // t[k] = L[i][k]·d[k] for the row being finished
        let mut t = vec![ZERO; w];
        for i in 0..dim {
            let lo = i.saturating_sub(bw);
            let mut d_i = lower[i * w + bw].re - shift;
            for j in lo..i {
                let lo_j = j.saturating_sub(bw).max(lo);
                let mut s = lower[i * w + (j + bw - i)];
                let row_j = &lower[j * w..(j + 1) * w];
                for k in lo_j..j {
                    s -= t[k - lo] * row_j[k + bw - j].conj();
                }
                let l = s / diag[j];
                lower[i * w + (j + bw - i)] = l;
                t[j - lo] = l * diag[j];
                d_i -= (l * t[j - lo].conj()).re;
            }
            if d_i == 0.0 || !d_i.is_finite() {
                return Err(Error::Breakdown {
                    index: i,
                    pivot: d_i.abs(),
                });
            }
            diag[i] = d_i;
        }
        Ok(Self {
            dim,
            bw,
            lower,
            d: diag,
            shift,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn pivots(&self) -> &[f64] {
        &self.d
    }

    /// Number of negative pivots, i.e. eigenvalues of `A` below the shift.
    pub fn negative_count(&self) -> usize {
        self.d.iter().filter(|&&x| x < 0.0).count()
    }

    /// Solves `(A − σI) x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.dim);
        let w = self.bw + 1;
        let mut x = b.to_vec();
        for i in 0..self.dim {
            let lo = i.saturating_sub(self.bw);
            let row = &self.lower[i * w..(i + 1) * w];
            let mut s = x[i];
            for k in lo..i {
                s -= row[k + self.bw - i] * x[k];
            }
            x[i] = s;
        }
        for (xi, di) in x.iter_mut().zip(&self.d) {
            *xi /= di;
        }
        for i in (0..self.dim).rev() {
            let lo = i.saturating_sub(self.bw);
            let row = &self.lower[i * w..(i + 1) * w];
            let xi = x[i];
            for k in lo..i {
                x[k] -= row[k + self.bw - i].conj() * xi;
            }
        }
        x
    }
}

/// Number of eigenvalues of `a` strictly below `lambda`, from the inertia of
/// `a − λI`. A zero pivot means `λ` hits an eigenvalue to machine precision;
/// the threshold is then nudged downward by a relative `1e-12` and retried.
pub fn count_below(a: &CsrMatrix, lambda: f64, band_limit: usize) -> Result<usize> {
    let mut shift = lambda;
    let mut last = None;
    for _ in 0..3 {
        match BandedLdl::factor(a, shift, band_limit) {
            Ok(f) => return Ok(f.negative_count()),
            Err(e @ Error::Breakdown { .. }) => {
                last = Some(e);
                shift -= 1e-12 * shift.abs().max(1.0);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("loop ran"))
}
