//! Jost solutions `f_pm(x, k) = e^{pm ikx} m_pm(x, k)`, the transmission
//! coefficient from their Wronskian, the outgoing resolvent built from the
//! kernel `T/(2ik) f_-(x_<) f_+(x_>)`, and the distorted Fourier transform
//! normalized so that `V = 0` reduces to the plain transform.
//!
//! The reduced amplitudes `m_pm` solve `m'' pm 2ik m' = V m` and tend to 1 at
//! the respective ends, so the integration is free of the `e^{ikx}`
//! oscillation. They are marched with RK4 at half-grid steps using a
//! Fourier-interpolated potential.

use num_complex::Complex64 as C64;
use num_traits::Zero;

use crate::grid::{self, Field};
use crate::{Field64, Grid64};

use super::{SchrodingerOp, SpectralError};

/// Default low-energy cutoff: never evaluate scattering data below this `k`.
pub const K_MIN: f64 = 1e-3;
/// Potential magnitude allowed at the box ends before flagging truncation.
pub const TRUNCATION_TOL: f64 = 1e-8;

/// Scattering data at one wavenumber.
#[derive(Debug, Clone)]
pub struct JostData {
    pub k: f64,
    /// `f_+(x, k)`, asymptotic to `e^{ikx}` on the right.
    pub f_plus: Field64,
    /// `f_-(x, k)`, asymptotic to `e^{-ikx}` on the left.
    pub f_minus: Field64,
    /// `d/dx f_+`.
    pub f_plus_prime: Field64,
    /// `d/dx f_-`.
    pub f_minus_prime: Field64,
    /// Transmission coefficient.
    pub transmission: C64,
    /// Right reflection coefficient (from the `f_-` asymptotics at `+L`).
    pub reflection: C64,
    /// Wronskian `[f_+, f_-]`, constant in `x` up to integration error.
    pub wronskian: C64,
    /// Max deviation of the Wronskian across the box, relative.
    pub wronskian_drift: f64,
    /// Max finite-difference residual of the reduced ODE for `m_pm`.
    pub ode_residual: f64,
}

impl JostData {
    /// `|T|^2 + |R|^2`, equal to 1 for a unitary channel.
    pub fn unitarity(&self) -> f64 {
        self.transmission.norm_sqr() + self.reflection.norm_sqr()
    }
}

/// Fourier-interpolate a real sampled potential onto a grid refined by `r`.
pub(crate) fn refine_potential(grid: Grid64, v: &[f64], r: usize) -> Vec<f64> {
    let n = grid.n();
    let f = Field::from_values(grid, v.iter().map(|&x| C64::new(x, 0.0)).collect());
    let spec = f.fft();
    let m = n * r;
    let mut pad = vec![C64::zero(); m];
    for i in 0..n / 2 {
        pad[i] = spec[i];
    }
    for i in 1..n / 2 {
        pad[m - i] = spec[n - i];
    }
    // split the Nyquist bin symmetrically
    pad[n / 2] = spec[n / 2] * 0.5;
    pad[m - n / 2] = spec[n / 2] * 0.5;
    let fine_grid = crate::grid::Grid::new(grid.half_width(), m).unwrap();
    let fine = Field::from_spectrum(fine_grid, pad);
    fine.values().iter().map(|z| z.re * r as f64).collect()
}

struct March {
    /// `m` at the grid nodes.
    m: Vec<C64>,
    /// `m'` at the grid nodes.
    mp: Vec<C64>,
    /// `(m, m')` at `x = +L` for the leftward start / rightward end.
    end: (C64, C64),
}

/// March the reduced Jost equation `m'' = V m - 2 i s k m'` (`s = +1` for
/// `m_+`, `-1` for `m_-`) across the box with RK4 at half-grid steps.
fn march(grid: Grid64, v_fine: &[f64], k: f64, sign: f64) -> March {
    let n = grid.n();
    let h = grid.dx() / 2.0;
    let nf = v_fine.len(); // 4n
    let vv = |p: usize| v_fine[p % nf];
    let rhs = |vp: f64, y: (C64, C64)| -> (C64, C64) {
        (y.1, vp * y.0 - C64::new(0.0, 2.0 * sign * k) * y.1)
    };
    let mut m = vec![C64::zero(); n];
    let mut mp = vec![C64::zero(); n];
    let mut y = (C64::new(1.0, 0.0), C64::zero());

    // For m_+ (sign = +1) start at x = +L and march down; for m_- start at
    // x = -L and march up. Fine index of the current point:
    let (mut p, step): (isize, isize) = if sign > 0.0 {
        (nf as isize, -2)
    } else {
        (0, 2)
    };
    let s = if sign > 0.0 { -h } else { h };
    let pm = |p: isize| ((p % nf as isize + nf as isize) % nf as isize) as usize;

    for j in 0..=(2 * n) {
        // record node values: nodes sit at fine indices divisible by 4; the
        // starting point (x = +L for m_+, x = -L for m_-) aliases node 0 but
        // belongs to the far end, so skip it in the stored direction
        let pp = pm(p);
        let store = if sign > 0.0 { j > 0 } else { j < 2 * n };
        if pp % 4 == 0 && store {
            let node = pp / 4;
            m[node] = y.0;
            mp[node] = y.1;
        }
        if j == 2 * n {
            break;
        }
        let v0 = vv(pp);
        let vh = vv(pm(p + step / 2));
        let v1 = vv(pm(p + step));
        let k1 = rhs(v0, y);
        let k2 = rhs(vh, (y.0 + k1.0 * (s / 2.0), y.1 + k1.1 * (s / 2.0)));
        let k3 = rhs(vh, (y.0 + k2.0 * (s / 2.0), y.1 + k2.1 * (s / 2.0)));
        let k4 = rhs(v1, (y.0 + k3.0 * s, y.1 + k3.1 * s));
        y.0 += (k1.0 + (k2.0 + k3.0) * 2.0 + k4.0) * (s / 6.0);
        y.1 += (k1.1 + (k2.1 + k3.1) * 2.0 + k4.1) * (s / 6.0);
        p += step;
    }
    March { m, mp, end: y }
}

/// Jost solutions and transmission coefficient at wavenumber `k > 0`.
pub fn jost(op: &SchrodingerOp, k: f64) -> Result<JostData, SpectralError> {
    if k <= K_MIN {
        return Err(SpectralError::LowEnergyCutoff { k, k_min: K_MIN });
    }
    let grid = op.grid();
    let n = grid.n();
    let v = op.potential();
    let edge = v[0].abs().max(v[n - 1].abs());
    if edge > TRUNCATION_TOL {
        return Err(SpectralError::Truncation(edge));
    }
    let v_fine = refine_potential(grid, v, 4);

    let plus = march(grid, &v_fine, k, 1.0);
    let minus = march(grid, &v_fine, k, -1.0);

    let phase = |x: f64, s: f64| C64::new(0.0, s * k * x).exp();
    let mut fp = grid.zeros();
    let mut fm = grid.zeros();
    let mut fpp = grid.zeros();
    let mut fmp = grid.zeros();
    for i in 0..n {
        let x = grid.node(i);
        let ep = phase(x, 1.0);
        let em = phase(x, -1.0);
        fp.values_mut()[i] = ep * plus.m[i];
        fpp.values_mut()[i] = ep * (C64::new(0.0, k) * plus.m[i] + plus.mp[i]);
        fm.values_mut()[i] = em * minus.m[i];
        fmp.values_mut()[i] = em * (-C64::new(0.0, k) * minus.m[i] + minus.mp[i]);
    }

    // Wronskian [f_+, f_-] = f_+ f_-' - f_+' f_-, averaged over the middle half.
    let mut w_acc = C64::zero();
    let mut w_min = f64::INFINITY;
    let mut w_max: f64 = 0.0;
    let mut count = 0.0;
    for i in (n / 4)..(3 * n / 4) {
        let w = fp.values()[i] * fmp.values()[i] - fpp.values()[i] * fm.values()[i];
        w_acc += w;
        w_min = w_min.min(w.norm());
        w_max = w_max.max(w.norm());
        count += 1.0;
    }
    let wronskian = w_acc / count;
    let wronskian_drift = (w_max - w_min) / wronskian.norm().max(f64::MIN_POSITIVE);
    // Free case: W = -2ik and T = 1, so T = -2ik / W.
    let transmission = C64::new(0.0, -2.0 * k) / wronskian;

    // Reflection from the f_- asymptotics at x = +L:
    // f_- = alpha e^{-ikx} + beta e^{ikx}, T = 1/alpha, R = beta/alpha.
    let l = grid.half_width();
    let (m_end, mp_end) = minus.end;
    let f_end = phase(l, -1.0) * m_end;
    let fp_end = phase(l, -1.0) * (-C64::new(0.0, k) * m_end + mp_end);
    let two_ik = C64::new(0.0, 2.0 * k);
    let alpha = (C64::new(0.0, k) * f_end - fp_end) * phase(l, 1.0) / two_ik;
    let beta = (C64::new(0.0, k) * f_end + fp_end) * phase(l, -1.0) / two_ik;
    let reflection = beta / alpha;

    // Finite-difference residual of the reduced ODE at the stored nodes.
    let dx = grid.dx();
    let mut ode_residual: f64 = 0.0;
    let scale = plus.m.iter().chain(&minus.m).fold(0.0_f64, |a, z| a.max(z.norm()));
    for i in 1..n - 1 {
        let mpp = (plus.mp[i + 1] - plus.mp[i - 1]) / (2.0 * dx);
        let r = mpp - (v[i] * plus.m[i] - C64::new(0.0, 2.0 * k) * plus.mp[i]);
        ode_residual = ode_residual.max(r.norm());
        let mpp = (minus.mp[i + 1] - minus.mp[i - 1]) / (2.0 * dx);
        let r = mpp - (v[i] * minus.m[i] + C64::new(0.0, 2.0 * k) * minus.mp[i]);
        ode_residual = ode_residual.max(r.norm());
    }
    ode_residual /= scale.max(f64::MIN_POSITIVE);

    Ok(JostData {
        k,
        f_plus: fp,
        f_minus: fm,
        f_plus_prime: fpp,
        f_minus_prime: fmp,
        transmission,
        reflection,
        wronskian,
        wronskian_drift,
        ode_residual,
    })
}

/// Trapezoid prefix integrals with an Euler-Maclaurin `dx^2/12` endpoint
/// correction: `out[i] ~ Integral_{x_0}^{x_i} g`.
fn cumulative_integral(g: &[C64], dx: f64) -> Vec<C64> {
    let n = g.len();
    let mut out = vec![C64::zero(); n];
    let mut acc = C64::zero();
    let deriv = |i: usize| -> C64 {
        if i == 0 {
            (g[1] - g[0]) / dx
        } else if i == n - 1 {
            (g[n - 1] - g[n - 2]) / dx
        } else {
            (g[i + 1] - g[i - 1]) / (2.0 * dx)
        }
    };
    let g0p = deriv(0);
    for i in 1..n {
        acc += (g[i - 1] + g[i]) * (dx / 2.0);
        out[i] = acc - (deriv(i) - g0p) * (dx * dx / 12.0);
    }
    out
}

/// Outgoing resolvent `R^+(lambda) f` for `lambda > K_MIN^2`, via the kernel
/// `T/(2ik) f_-(x_<) f_+(x_>)` with `k = sqrt(lambda)`.
pub fn limiting_absorption(
    op: &SchrodingerOp,
    lambda: f64,
    f: &Field64,
) -> Result<Field64, SpectralError> {
    if lambda <= K_MIN * K_MIN {
        return Err(SpectralError::UseResolvent(lambda));
    }
    let jd = jost(op, lambda.sqrt())?;
    Ok(limiting_absorption_with(&jd, f))
}

/// Same as [`limiting_absorption`] with precomputed Jost data.
pub fn limiting_absorption_with(jd: &JostData, f: &Field64) -> Field64 {
    let grid = f.grid();
    let n = grid.n();
    let dx = grid.dx();
    let k = jd.k;
    let gm: Vec<C64> = (0..n).map(|i| jd.f_minus.values()[i] * f.values()[i]).collect();
    let gp: Vec<C64> = (0..n).map(|i| jd.f_plus.values()[i] * f.values()[i]).collect();
    let cm = cumulative_integral(&gm, dx); // int_{-L}^{x} f_- f
    let cp_all = cumulative_integral(&gp, dx);
    let cp_total = cp_all[n - 1];
    // Outgoing kernel (i T(k)/2k) f_-(x_<) f_+(x_>): the free case reduces to
    // (i/2k) e^{ik|x-y|}, so (H - lambda) R^+ = identity and the output
    // carries e^{+ik|x|} tails.
    let c = C64::new(0.0, 1.0) * jd.transmission / (2.0 * k);
    let mut u = grid.zeros();
    for i in 0..n {
        let tail = cp_total - cp_all[i]; // int_{x}^{L} f_+ f
        u.values_mut()[i] = c * (jd.f_plus.values()[i] * cm[i] + jd.f_minus.values()[i] * tail);
    }
    u
}

/// Generalized plane wave `psi(x, k)`: `T(|k|) f_+(x, |k|)` for `k > 0`,
/// `T(|k|) f_-(x, |k|)` for `k < 0`. Reduces to `e^{ikx}` when `V = 0`.
pub fn plane_wave(op: &SchrodingerOp, k: f64) -> Result<Field64, SpectralError> {
    let jd = jost(op, k.abs())?;
    Ok(plane_wave_with(&jd, k))
}

fn plane_wave_with(jd: &JostData, k: f64) -> Field64 {
    let f = if k > 0.0 { &jd.f_plus } else { &jd.f_minus };
    f.scale(jd.transmission)
}

/// Distorted Fourier transform `fhat(k) = (2 pi)^{-1/2} (f, psi(., k))`.
pub fn distorted_ft(op: &SchrodingerOp, f: &Field64, k: f64) -> Result<C64, SpectralError> {
    let jd = jost(op, k.abs())?;
    Ok(distorted_ft_with(&jd, f, k))
}

/// Distorted transform with precomputed Jost data (`|k|` must match `jd.k`).
pub fn distorted_ft_with(jd: &JostData, f: &Field64, k: f64) -> C64 {
    debug_assert!((k.abs() - jd.k).abs() < 1e-12);
    let psi = plane_wave_with(jd, k);
    let two_pi = 2.0 * std::f64::consts::PI;
    grid::inner(f, &psi).expect("same grid") / two_pi.sqrt()
}

/// `(fhat(+k), fhat(-k))` sharing one Jost computation.
pub fn distorted_ft_pair(
    op: &SchrodingerOp,
    f: &Field64,
    k: f64,
) -> Result<(C64, C64), SpectralError> {
    let jd = jost(op, k.abs())?;
    Ok((
        distorted_ft_with(&jd, f, k.abs()),
        distorted_ft_with(&jd, f, -k.abs()),
    ))
}
