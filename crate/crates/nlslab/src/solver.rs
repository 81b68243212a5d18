//! Internal linear-algebra kernels: preconditioned conjugate gradients with
//! deflation for shifted Schrödinger solves, and tridiagonal tools backing
//! the finite-difference seed eigensolver.

use num_complex::Complex64 as C64;
use num_traits::Zero;

pub(crate) struct PcgOutcome {
    pub x: Vec<C64>,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, thiserror::Error)]
#[error("PCG stalled: residual {residual:.3e} after {iterations} iterations (target {target:.3e})")]
pub(crate) struct PcgFailure {
    pub residual: f64,
    pub target: f64,
    pub iterations: usize,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    dot(a, a).re.sqrt()
}

/// Project `v` orthogonally off each real row of `deflate` (plain l2 inner product).
pub(crate) fn deflate_out(v: &mut [C64], deflate: &[Vec<f64>]) {
    for d in deflate {
        let mut c = C64::zero();
        let mut nn = 0.0;
        for (x, &y) in v.iter().zip(d.iter()) {
            c += x * y;
            nn += y * y;
        }
        if nn == 0.0 {
            continue;
        }
        let c = c / nn;
        for (x, &y) in v.iter_mut().zip(d.iter()) {
            *x -= c * y;
        }
    }
}

/// Conjugate gradients for an SPD operator, with a preconditioner and optional
/// deflation subspace (solution and residual kept orthogonal to it).
///
/// `apply_a` and `apply_m` write into their second argument.
pub(crate) fn pcg(
    apply_a: &dyn Fn(&[C64], &mut [C64]),
    apply_m: &dyn Fn(&[C64], &mut [C64]),
    b: &[C64],
    deflate: &[Vec<f64>],
    rel_tol: f64,
    max_iter: usize,
) -> Result<PcgOutcome, PcgFailure> {
    let n = b.len();
    let mut x = vec![C64::zero(); n];
    let mut r = b.to_vec();
    deflate_out(&mut r, deflate);
    let b_norm = norm(&r).max(f64::MIN_POSITIVE);
    let mut z = vec![C64::zero(); n];
    apply_m(&r, &mut z);
    deflate_out(&mut z, deflate);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![C64::zero(); n];

    for it in 0..max_iter {
        let rnorm = norm(&r);
        if rnorm <= rel_tol * b_norm {
            return Ok(PcgOutcome { x, residual: rnorm / b_norm, iterations: it });
        }
        apply_a(&p, &mut ap);
        deflate_out(&mut ap, deflate);
        let pap = dot(&p, &ap);
        if pap.re <= 0.0 || !pap.re.is_finite() {
            break; // operator not SPD on this subspace; bail out
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        deflate_out(&mut r, deflate);
        apply_m(&r, &mut z);
        deflate_out(&mut z, deflate);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let rnorm = norm(&r);
    if rnorm <= rel_tol * b_norm {
        return Ok(PcgOutcome { x, residual: rnorm / b_norm, iterations: max_iter });
    }
    Err(PcgFailure { residual: rnorm / b_norm, target: rel_tol, iterations: max_iter })
}

/// Symmetric tridiagonal matrix `(diag, off)` with Dirichlet ends.
pub(crate) struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>, // length n - 1
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `lambda` (Sturm sequence count).
    pub fn count_below(&self, lambda: f64) -> usize {
        let n = self.diag.len();
        let mut count = 0;
        let mut d = self.diag[0] - lambda;
        if d < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let off2 = self.off[i - 1] * self.off[i - 1];
            let denom = if d == 0.0 { 1e-300 } else { d };
            d = (self.diag[i] - lambda) - off2 / denom;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `j`-th smallest eigenvalue (0-based) by bisection on the Sturm count.
    pub fn eigenvalue_by_bisection(&self, j: usize, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
        debug_assert!(self.count_below(lo) <= j && self.count_below(hi) > j);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Inverse-iteration eigenvector at shift `sigma`.
    pub fn inverse_iteration(&self, sigma: f64, sweeps: usize) -> Vec<f64> {
        let n = self.diag.len();
        let mut v: Vec<f64> = (0..n)
            .map(|i| ((i.wrapping_mul(2654435761)) % 1000) as f64 / 1000.0 - 0.5)
            .collect();
        normalize(&mut v);
        for _ in 0..sweeps {
            let mut w = self.solve_shifted(sigma, &v);
            normalize(&mut w);
            v = w;
        }
        v
    }

    /// Solve `(T - sigma) x = b` by tridiagonal LU with partial pivoting
    /// (the shifted matrix may be indefinite).
    pub fn solve_shifted(&self, sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut dl: Vec<f64> = self.off.clone(); // subdiagonal, reused as du2 after pivoting
        let mut d: Vec<f64> = self.diag.iter().map(|&x| x - sigma).collect();
        let mut du: Vec<f64> = self.off.clone();
        let mut b = rhs.to_vec();

        for i in 0..n - 1 {
            let last = i == n - 2;
            if d[i].abs() >= dl[i].abs() {
                // no interchange
                let fact = if d[i] != 0.0 { dl[i] / d[i] } else { 0.0 };
                d[i + 1] -= fact * du[i];
                b[i + 1] -= fact * b[i];
                dl[i] = 0.0; // no fill-in
            } else {
                // interchange rows i and i+1
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                let temp = d[i + 1];
                d[i + 1] = du[i] - fact * temp;
                if !last {
                    dl[i] = du[i + 1]; // fill-in: second superdiagonal
                    du[i + 1] = -fact * dl[i];
                } else {
                    dl[i] = 0.0;
                }
                du[i] = temp;
                let tb = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tb - fact * b[i + 1];
            }
        }

        let safe = |x: f64| if x == 0.0 { 1e-300 } else { x };
        let mut x = vec![0.0; n];
        x[n - 1] = b[n - 1] / safe(d[n - 1]);
        if n > 1 {
            x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / safe(d[n - 2]);
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (b[i] - du[i] * x[i + 1] - dl[i] * x[i + 2]) / safe(d[i]);
        }
        x
    }
}

pub(crate) fn normalize(v: &mut [f64]) {
    let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        for x in v {
            *x /= n;
        }
    }
}
