//! Thick-restart block Krylov iteration with Rayleigh–Ritz extraction.
//!
//! The subspace is grown by applying a spectral transform `T` (either the
//! operator itself or `(Op − σ)⁻¹`) to the current lowest Ritz vectors, fully
//! reorthogonalized. Ritz pairs are always extracted with respect to the
//! operator, so the reported residuals are true residuals of `Op`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{dot, norm};
use crate::sparse::CsrMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const SEED: u64 = 0x5eed_1a2c_0f0e;

pub(crate) struct Outcome {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
    pub converged: bool,
    pub applications: usize,
}

pub(crate) struct Params {
    pub k: usize,
    pub tol: f64,
    pub max_applications: usize,
    pub block: usize,
    /// Basis size that triggers a thick restart.
    pub max_basis: usize,
}

/// Block size used for `k` wanted pairs.
pub(crate) fn default_block(k: usize) -> usize {
    (k + 2).clamp(4, 16)
}

/// Start block: the normalized all-ones vector followed by seeded
/// pseudo-random vectors (the all-ones vector alone misses every eigenvector
/// orthogonal to the symmetric sector of a symmetric grid operator).
fn start_block(dim: usize, s: usize) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = vec![vec![Complex64::new(1.0, 0.0); dim]];
    for _ in 1..s {
        out.push(random_vector(&mut rng, dim));
    }
    out
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

/// Two passes of classical Gram–Schmidt against `basis`; returns the norm
/// left after projection.
fn orthogonalize(basis: &[Vec<Complex64>], y: &mut [Complex64]) -> f64 {
    for _ in 0..2 {
        let coeffs: Vec<Complex64> = basis.iter().map(|v| dot(v, y)).collect();
        for (v, c) in basis.iter().zip(coeffs) {
            for (yi, vi) in y.iter_mut().zip(v) {
                *yi -= c * vi;
            }
        }
    }
    norm(y)
}

fn combine(vs: &[Vec<Complex64>], coeffs: impl Iterator<Item = Complex64>, dim: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; dim];
    for (v, c) in vs.iter().zip(coeffs) {
        if c == ZERO {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

struct Subspace<'a> {
    op: &'a CsrMatrix,
    v: Vec<Vec<Complex64>>,
    w: Vec<Vec<Complex64>>,
    /// `h[i][j] = ⟨v_i, Op v_j⟩`
    h: Vec<Vec<Complex64>>,
    rng: ChaCha8Rng,
}

impl<'a> Subspace<'a> {
    fn new(op: &'a CsrMatrix) -> Self {
        Self {
            op,
            v: Vec::new(),
            w: Vec::new(),
            h: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(SEED ^ 0xffff),
        }
    }

    fn dim(&self) -> usize {
        self.op.nrows()
    }

    /// Orthonormalizes `y` against the basis and appends it; a vector that
    /// is (numerically) already in the span is replaced by a fresh random one.
    fn push(&mut self, mut y: Vec<Complex64>) {
        let before = norm(&y);
        let after = orthogonalize(&self.v, &mut y);
        if !(after > 1e-10 * before) {
            let dim = self.dim();
            for _ in 0..5 {
                y = random_vector(&mut self.rng, dim);
                let b = norm(&y);
                if orthogonalize(&self.v, &mut y) > 1e-10 * b {
                    break;
                }
            }
        }
        let nrm = norm(&y);
        if nrm == 0.0 {
            return;
        }
        y.iter_mut().for_each(|x| *x /= nrm);
        let wy = self.op.apply(&y);
        let col: Vec<Complex64> = self.v.iter().map(|vi| dot(vi, &wy)).collect();
        for (row, c) in self.h.iter_mut().zip(&col) {
            row.push(*c);
        }
        let mut last: Vec<Complex64> = col.iter().map(|c| c.conj()).collect();
        last.push(Complex64::new(dot(&y, &wy).re, 0.0));
        self.h.push(last);
        self.v.push(y);
        self.w.push(wy);
    }

    fn ritz(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        let m = self.v.len();
        let h = DMatrix::from_fn(m, m, |i, j| 0.5 * (self.h[i][j] + self.h[j][i].conj()));
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vecs = DMatrix::from_fn(m, m, |i, j| eig.eigenvectors[(i, order[j])]);
        (values, vecs)
    }
}

pub(crate) fn solve<F>(op: &CsrMatrix, p: &Params, transform: F) -> Outcome
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let dim = op.nrows();
    let s = p.block.min(dim).max(1);
    let keep = (p.k + s).min(dim);
    let m_max = p.max_basis.max(keep + s).min(dim);
    let mut sub = Subspace::new(op);
    for y in start_block(dim, s) {
        sub.push(y);
    }
    let mut applications = 0;
    loop {
        let (theta, y) = sub.ritz();
        let m = sub.v.len();
        let nr = keep.min(m);
        let mut xs = Vec::with_capacity(nr);
        let mut residuals = Vec::with_capacity(nr);
        for i in 0..nr {
            let x = combine(&sub.v, y.column(i).iter().copied(), dim);
            let ox = combine(&sub.w, y.column(i).iter().copied(), dim);
            let r: f64 = ox
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - theta[i] * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            xs.push(x);
            residuals.push(r);
        }
        let wanted = p.k.min(nr);
        let converged = residuals[..wanted].iter().all(|&r| r <= p.tol);
        if converged || applications >= p.max_applications || m == dim {
            let converged = converged || m == dim;
            xs.truncate(wanted);
            return Outcome {
                values: theta[..wanted].to_vec(),
                vectors: xs,
                converged,
                applications,
            };
        }
        let mut expand: Vec<usize> = (0..nr).filter(|&i| residuals[i] > p.tol).take(s).collect();
        if expand.is_empty() {
            expand = (0..s.min(nr)).collect();
        }
        let fresh: Vec<Vec<Complex64>> = expand.iter().map(|&i| transform(&xs[i])).collect();
        applications += fresh.len();
        if m + fresh.len() > m_max {
            let restart_w: Vec<Vec<Complex64>> = (0..nr)
                .map(|i| combine(&sub.w, y.column(i).iter().copied(), dim))
                .collect();
            sub.v = xs;
            sub.w = restart_w;
            sub.h = (0..nr)
                .map(|i| {
                    (0..nr)
                        .map(|j| if i == j { Complex64::new(theta[i], 0.0) } else { ZERO })
                        .collect()
                })
                .collect();
        }
        for f in fresh {
            if sub.v.len() < dim {
                sub.push(f);
            }
        }
    }
}
