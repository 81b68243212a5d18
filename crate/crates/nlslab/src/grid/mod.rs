//! Uniform periodic grid, sampled complex fields, spectral differentiation,
//! quadrature and the weighted norms used by the analysis.
//!
//! The box is `[-L, L)` with `n` nodes (`n` a power of two), spacing
//! `dx = 2L/n` and frequency set `k = (pi/L) * {-n/2, ..., n/2 - 1}`.
//! Quadrature is the rectangle rule, exact for periodic band-limited
//! integrands.

pub mod io;
pub mod scalar;

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

use scalar::Real;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("n_points must be a power of two >= 8, got {0}")]
    BadPointCount(usize),
    #[error("half width must be positive, got {0}")]
    BadHalfWidth(f64),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("weight e^{{a<x>}} overflows on |f|; field does not decay fast enough")]
    WeightOverflow,
    #[error("field contains non-finite values")]
    NonFinite,
    #[error("weight parameter a must be positive, got {0}")]
    BadWeightRate(f64),
    #[error("derivative order must be 1 or 2, got {0}")]
    BadDerivativeOrder(usize),
}

/// Uniform periodic grid on `[-L, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T: Real> {
    half_width: T,
    n: usize,
}

impl<T: Real> Grid<T> {
    /// Build a grid; `n` must be an even power of two, at least 8.
    pub fn new(half_width: T, n: usize) -> Result<Self, GridError> {
        if n < 8 || !n.is_power_of_two() {
            return Err(GridError::BadPointCount(n));
        }
        if half_width <= T::zero() {
            return Err(GridError::BadHalfWidth(half_width.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Grid { half_width, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn dx(&self) -> T {
        (T::one() + T::one()) * self.half_width / T::from_usize(self.n).unwrap()
    }

    /// Node `x_i = -L + i dx`.
    pub fn node(&self, i: usize) -> T {
        -self.half_width + self.dx() * T::from_usize(i).unwrap()
    }

    pub fn nodes(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n).map(move |i| self.node(i))
    }

    /// Wavenumber for FFT bin `i`, in the order rustfft produces:
    /// `0, 1, ..., n/2-1, -n/2, ..., -1` times `pi/L`.
    pub fn wavenumber(&self, i: usize) -> T {
        let half = self.n / 2;
        let m = if i < half {
            T::from_usize(i).unwrap()
        } else {
            T::from_usize(i).unwrap() - T::from_usize(self.n).unwrap()
        };
        m * T::PI() / self.half_width
    }

    pub fn zeros(&self) -> Field<T> {
        Field {
            grid: *self,
            values: vec![Complex::zero(); self.n],
        }
    }

    /// Sample a complex-valued function on the nodes.
    pub fn sample(&self, f: impl Fn(T) -> Complex<T>) -> Field<T> {
        Field {
            grid: *self,
            values: self.nodes().map(f).collect(),
        }
    }

    /// Sample a real-valued function on the nodes.
    pub fn sample_real(&self, f: impl Fn(T) -> T) -> Field<T> {
        self.sample(|x| Complex::new(f(x), T::zero()))
    }
}

/// Complex-valued function sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T: Real> {
    grid: Grid<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> Field<T> {
    pub fn from_values(grid: Grid<T>, values: Vec<Complex<T>>) -> Self {
        assert_eq!(grid.n(), values.len(), "value length must match grid");
        Field { grid, values }
    }

    pub fn grid(&self) -> Grid<T> {
        self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Pointwise map with the node coordinate available.
    pub fn map_with_x(&self, f: impl Fn(T, Complex<T>) -> Complex<T>) -> Self {
        Field {
            grid: self.grid,
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, &z)| f(self.grid.node(i), z))
                .collect(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn re_part(&self) -> Self {
        self.map(|z| Complex::new(z.re, T::zero()))
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map(|z| z * c)
    }

    pub fn scale_re(&self, c: T) -> Self {
        self.map(|z| z * c)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    pub fn zip(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        Field {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: Complex<T>, other: &Self) {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        for (a, &b) in self.values.iter_mut().zip(&other.values) {
            *a = *a + c * b;
        }
    }

    pub fn l2_norm(&self) -> T {
        let dx = self.grid.dx();
        let s = self
            .values
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr());
        (s * dx).sqrt()
    }

    pub fn sup_norm(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Maximum absolute imaginary part, for real-valuedness checks.
    pub fn max_im(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, z| acc.max(z.im.abs()))
    }

    /// Forward FFT, unnormalized (rustfft convention).
    pub fn fft(&self) -> Vec<Complex<T>> {
        let mut buf = self.values.clone();
        T::plan_forward(self.grid.n()).process(&mut buf);
        buf
    }

    /// Build a field from an unnormalized spectrum (inverse FFT with 1/n).
    pub fn from_spectrum(grid: Grid<T>, mut spectrum: Vec<Complex<T>>) -> Self {
        assert_eq!(grid.n(), spectrum.len());
        T::plan_inverse(grid.n()).process(&mut spectrum);
        let inv_n = T::one() / T::from_usize(grid.n()).unwrap();
        for z in &mut spectrum {
            *z = *z * inv_n;
        }
        Field {
            grid,
            values: spectrum,
        }
    }
}

/// `<x> = sqrt(1 + x^2)`.
pub fn japanese_bracket<T: Real>(x: T) -> T {
    (T::one() + x * x).sqrt()
}

/// Spectral derivative of order 1 or 2 via the Fourier multiplier `(ik)^order`.
///
/// For odd orders the Nyquist mode is zeroed so real fields stay real.
pub fn derivative<T: Real>(f: &Field<T>, order: usize) -> Result<Field<T>, GridError> {
    if order != 1 && order != 2 {
        return Err(GridError::BadDerivativeOrder(order));
    }
    let grid = f.grid();
    let mut spec = f.fft();
    let half = grid.n() / 2;
    for (i, z) in spec.iter_mut().enumerate() {
        let k = grid.wavenumber(i);
        *z = match order {
            1 => {
                if i == half {
                    Complex::zero()
                } else {
                    Complex::new(T::zero(), k) * *z
                }
            }
            _ => *z * (-k * k),
        };
    }
    Ok(Field::from_spectrum(grid, spec))
}

/// Apply a Fourier multiplier `symbol(k)` to a field.
pub fn fourier_multiplier<T: Real>(
    symbol: impl Fn(T) -> Complex<T>,
    f: &Field<T>,
) -> Field<T> {
    let grid = f.grid();
    let mut spec = f.fft();
    for (i, z) in spec.iter_mut().enumerate() {
        *z = *z * symbol(grid.wavenumber(i));
    }
    Field::from_spectrum(grid, spec)
}

/// `(u, v) = Integral u conj(v) dx` by the rectangle rule.
pub fn inner<T: Real>(u: &Field<T>, v: &Field<T>) -> Result<Complex<T>, GridError> {
    if u.grid() != v.grid() {
        return Err(GridError::GridMismatch);
    }
    let dx = u.grid().dx();
    let mut acc = Complex::zero();
    for (&a, &b) in u.values().iter().zip(v.values()) {
        acc = acc + a * b.conj();
    }
    Ok(acc * dx)
}

/// `<u, v> = Re (u, v)`.
pub fn real_pairing<T: Real>(u: &Field<T>, v: &Field<T>) -> Result<T, GridError> {
    Ok(inner(u, v)?.re)
}

/// Which weighted norm to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightKind {
    /// `||e^{a<x>} u||_{H^s}`
    SigmaS,
    /// `||<x>^s u||_{L^2}`
    L2s,
    /// `||<k>^s u^||_{L^2}` (Plancherel-normalized Sobolev norm)
    SobolevHs,
    /// `sqrt(<(-d_xx + sech^2(a x / 10)) f, f>)`
    TildeSigma,
}

/// Weighted-norm specification; `a` is the exponential rate where used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec<T: Real> {
    pub kind: WeightKind,
    pub s: T,
    pub a: T,
}

impl<T: Real> WeightSpec<T> {
    pub fn sigma(s: T, a: T) -> Result<Self, GridError> {
        if a <= T::zero() {
            return Err(GridError::BadWeightRate(a.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(WeightSpec { kind: WeightKind::SigmaS, s, a })
    }

    /// Default decay rate `a = sqrt(|omega_N|) / 2` from the shallowest eigenvalue.
    pub fn sigma_default(s: T, omega_shallowest: T) -> Result<Self, GridError> {
        let a = omega_shallowest.abs().sqrt() / (T::one() + T::one());
        Self::sigma(s, a)
    }

    pub fn l2s(s: T) -> Self {
        WeightSpec { kind: WeightKind::L2s, s, a: T::zero() }
    }

    pub fn sobolev(s: T) -> Self {
        WeightSpec { kind: WeightKind::SobolevHs, s, a: T::zero() }
    }

    pub fn tilde_sigma(a: T) -> Result<Self, GridError> {
        if a <= T::zero() {
            return Err(GridError::BadWeightRate(a.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(WeightSpec { kind: WeightKind::TildeSigma, s: T::zero(), a })
    }
}

/// Evaluate the weighted norm described by `w`.
pub fn weighted_norm<T: Real>(f: &Field<T>, w: &WeightSpec<T>) -> Result<T, GridError> {
    if !f.is_finite() {
        return Err(GridError::NonFinite);
    }
    let ten = T::from_f64_c(10.0);
    match w.kind {
        WeightKind::L2s => {
            let g = f.map_with_x(|x, z| z * japanese_bracket(x).powf(w.s));
            Ok(g.l2_norm())
        }
        WeightKind::SobolevHs => Ok(sobolev_norm(f, w.s)),
        WeightKind::SigmaS => {
            let g = f.map_with_x(|x, z| z * (w.a * japanese_bracket(x)).exp());
            if !g.is_finite() || g.sup_norm() > T::from_f64_c(1e120) {
                return Err(GridError::WeightOverflow);
            }
            if w.s == T::zero() {
                Ok(g.l2_norm())
            } else {
                Ok(sobolev_norm(&g, w.s))
            }
        }
        WeightKind::TildeSigma => {
            let fp = derivative(f, 1)?;
            let sech = f.map_with_x(|x, z| {
                let t = w.a * x / ten;
                z * (T::one() / t.cosh())
            });
            let sq = fp.l2_norm().powi(2) + sech.l2_norm().powi(2);
            Ok(sq.sqrt())
        }
    }
}

fn sobolev_norm<T: Real>(f: &Field<T>, s: T) -> T {
    let grid = f.grid();
    let spec = f.fft();
    // Plancherel with continuum normalization: ||f||^2 = sum |fhat|^2 dk,
    // fhat(k) = dx/sqrt(2 pi) * FFT, dk = pi / L.
    let dx = grid.dx();
    let dk = T::PI() / grid.half_width();
    let two_pi = T::PI() * (T::one() + T::one());
    let c = dx * dx / two_pi * dk;
    let mut acc = T::zero();
    for (i, z) in spec.iter().enumerate() {
        let k = grid.wavenumber(i);
        acc = acc + z.norm_sqr() * japanese_bracket(k).powf(s + s) * c;
    }
    acc.sqrt()
}

/// Continuum-normalized Fourier transform values `fhat(k) = (2 pi)^{-1/2} Integral f e^{-ikx} dx`
/// on the grid's frequency set, paired with the wavenumbers.
pub fn continuum_fourier<T: Real>(f: &Field<T>) -> Vec<(T, Complex<T>)> {
    let grid = f.grid();
    let spec = f.fft();
    let two_pi = T::PI() * (T::one() + T::one());
    let c = grid.dx() / two_pi.sqrt();
    // FFT assumes x_0 = 0; our nodes start at -L, so shift phases by e^{+ik L}.
    spec.into_iter()
        .enumerate()
        .map(|(i, z)| {
            let k = grid.wavenumber(i);
            let phase = Complex::new(T::zero(), k * grid.half_width()).exp();
            (k, z * phase * c)
        })
        .collect()
}

impl<T: Real> std::ops::Add for &Field<T> {
    type Output = Field<T>;
    fn add(self, rhs: Self) -> Field<T> {
        Field::add(self, rhs)
    }
}

impl<T: Real> std::ops::Sub for &Field<T> {
    type Output = Field<T>;
    fn sub(self, rhs: Self) -> Field<T> {
        Field::sub(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn grid() -> Grid<f64> {
        Grid::new(40.0, 4096).unwrap()
    }

    #[test]
    fn make_grid_small() {
        let g = Grid::new(40.0, 8).unwrap();
        assert_eq!(g.dx(), 10.0);
        let nodes: Vec<f64> = g.nodes().collect();
        assert_eq!(nodes, vec![-40.0, -30.0, -20.0, -10.0, 0.0, 10.0, 20.0, 30.0]);
    }

    #[test]
    fn make_grid_standard() {
        let g = grid();
        assert_relative_eq!(g.dx(), 80.0 / 4096.0);
        // dx * n = 2L exactly
        assert_eq!(g.dx() * 4096.0, 80.0);
        // nodes strictly increasing, symmetric about 0 up to one node
        assert_eq!(g.node(2048), 0.0);
        assert_eq!(g.node(1), -g.node(4095));
    }

    #[test]
    fn make_grid_rejects() {
        assert_eq!(Grid::<f64>::new(40.0, 4095).unwrap_err(), GridError::BadPointCount(4095));
        assert_eq!(Grid::<f64>::new(40.0, 4).unwrap_err(), GridError::BadPointCount(4));
        assert!(matches!(Grid::<f64>::new(0.0, 64), Err(GridError::BadHalfWidth(_))));
        assert!(matches!(Grid::<f64>::new(-1.0, 64), Err(GridError::BadHalfWidth(_))));
    }

    #[test]
    fn derivative_sine_exact() {
        let g = grid();
        let l = g.half_width();
        let f = g.sample_real(|x| (std::f64::consts::PI * x / l).sin());
        let df = derivative(&f, 1).unwrap();
        let exact = g.sample_real(|x| (std::f64::consts::PI / l) * (std::f64::consts::PI * x / l).cos());
        assert!((&df - &exact).sup_norm() < 1e-10);
    }

    #[test]
    fn derivative_constant_zero() {
        let g = grid();
        let f = g.sample_real(|_| 3.5);
        assert!(derivative(&f, 1).unwrap().sup_norm() < 1e-12);
        assert!(derivative(&f, 2).unwrap().sup_norm() < 1e-10);
    }

    #[test]
    fn derivative_gaussian_vs_finite_differences() {
        let g = grid();
        let f = g.sample_real(|x| (-x * x).exp());
        let df = derivative(&f, 1).unwrap();
        // centered finite differences as the independent oracle
        let dx = g.dx();
        let n = g.n();
        let mut max_err: f64 = 0.0;
        for i in 1..n - 1 {
            let fd = (f.values()[i + 1].re - f.values()[i - 1].re) / (2.0 * dx);
            max_err = max_err.max((df.values()[i].re - fd).abs());
        }
        // FD error is O(dx^2 * |f'''|), dx^2 ~ 3.8e-4
        assert!(max_err < 1e-3, "max_err = {max_err}");
        assert!(max_err > 1e-8, "spectral and FD should differ at O(dx^2)");
    }

    #[test]
    fn derivative_order_error() {
        let g = grid();
        let f = g.zeros();
        assert_eq!(derivative(&f, 3).unwrap_err(), GridError::BadDerivativeOrder(3));
    }

    #[test]
    fn second_derivative_consistency() {
        let g = grid();
        let f = g.sample_real(|x| (-0.5 * x * x).exp() * (2.0 * x).cos());
        let d1d1 = derivative(&derivative(&f, 1).unwrap(), 1).unwrap();
        let d2 = derivative(&f, 2).unwrap();
        assert!((&d1d1 - &d2).sup_norm() < 1e-10);
    }

    #[test]
    fn inner_normalized_gaussian() {
        let g = grid();
        let c = (2.0 / std::f64::consts::PI).powf(0.25);
        let f = g.sample_real(|x| c * (-x * x).exp());
        let n = inner(&f, &f).unwrap();
        assert_relative_eq!(n.re, 1.0, max_relative = 1e-10);
        assert!(n.im.abs() < 1e-14);
    }

    #[test]
    fn real_pairing_orthogonality() {
        let g = grid();
        let u = g.sample_real(|x| (-x * x).exp());
        let iu = u.scale(Complex64::new(0.0, 1.0));
        assert!(real_pairing(&u, &iu).unwrap().abs() < 1e-14);
    }

    #[test]
    fn inner_analytic_gaussians() {
        let g = grid();
        let u = g.sample_real(|x| (-x * x).exp());
        let v = g.sample_real(|x| (-2.0 * x * x).exp());
        let exact = (std::f64::consts::PI / 3.0).sqrt();
        assert_relative_eq!(inner(&u, &v).unwrap().re, exact, max_relative = 1e-8);
    }

    #[test]
    fn inner_grid_mismatch() {
        let g1 = grid();
        let g2 = Grid::new(40.0, 2048).unwrap();
        assert_eq!(inner(&g1.zeros(), &g2.zeros()).unwrap_err(), GridError::GridMismatch);
    }

    #[test]
    fn weighted_norm_zero_field() {
        let g = grid();
        let z = g.zeros();
        for w in [
            WeightSpec::sigma(0.0, 0.5).unwrap(),
            WeightSpec::l2s(2.0),
            WeightSpec::sobolev(1.0),
            WeightSpec::tilde_sigma(0.5).unwrap(),
        ] {
            assert_eq!(weighted_norm(&z, &w).unwrap(), 0.0);
        }
    }

    #[test]
    fn tilde_sigma_direct_quadrature() {
        let g = grid();
        let a: f64 = 0.5;
        let f = g.sample_real(|x| 1.0 / (a * x / 10.0).cosh() * (-0.1 * x * x).exp());
        let w = WeightSpec::tilde_sigma(a).unwrap();
        let got = weighted_norm(&f, &w).unwrap();
        // direct quadrature oracle
        let fp = derivative(&f, 1).unwrap();
        let sechw = f.map_with_x(|x, z| z * (1.0 / (a * x / 10.0).cosh()));
        let expect = (fp.l2_norm().powi(2) + sechw.l2_norm().powi(2)).sqrt();
        assert_relative_eq!(got, expect, max_relative = 1e-12);
    }

    #[test]
    fn sigma_norm_analytic() {
        // SigmaS(s=0, a) of f = e^{-2 a <x>} equals ||e^{-a <x>}||_L2
        let g = grid();
        let a: f64 = 0.4;
        let f = g.sample_real(|x| (-2.0 * a * japanese_bracket(x)).exp());
        let w = WeightSpec::sigma(0.0, a).unwrap();
        let got = weighted_norm(&f, &w).unwrap();
        let oracle = g
            .sample_real(|x| (-a * japanese_bracket(x)).exp())
            .l2_norm();
        assert_relative_eq!(got, oracle, max_relative = 1e-12);
    }

    #[test]
    fn sigma_norm_overflow_flagged() {
        let g = grid();
        let f = g.sample_real(|_| 1.0); // constant: e^{a<x>} * 1 overflows the decay requirement
        let w = WeightSpec::sigma(0.0, 8.0).unwrap();
        assert_eq!(weighted_norm(&f, &w).unwrap_err(), GridError::WeightOverflow);
    }

    #[test]
    fn multiplier_identity_and_derivative() {
        let g = grid();
        let f = g.sample_real(|x| (-x * x).exp() * (3.0 * x).sin());
        let id = fourier_multiplier(|_| Complex64::new(1.0, 0.0), &f);
        assert!((&id - &f).sup_norm() < 1e-12);
        let ik = fourier_multiplier(|k| Complex64::new(0.0, k), &f);
        let df = derivative(&f, 1).unwrap();
        assert!((&ik - &df).sup_norm() < 1e-9);
    }

    #[test]
    fn multiplier_smoothing_limit() {
        let g = grid();
        let f = g.sample_real(|x| (-x * x / 4.0).exp());
        let eps = 1e-6;
        let sm = fourier_multiplier(
            |k| Complex64::new((1.0 + (eps * k).powi(2)).powf(-1.0), 0.0),
            &f,
        );
        assert!((&sm - &f).sup_norm() < 1e-8);
    }

    #[test]
    fn plancherel() {
        let g = grid();
        let f = g.sample(|x| Complex64::new((-x * x).exp(), 0.3 * (-0.5 * x * x).exp()));
        let l2 = f.l2_norm().powi(2);
        let dk = std::f64::consts::PI / g.half_width();
        let spec_sum: f64 = continuum_fourier(&f)
            .iter()
            .map(|(_, z)| z.norm_sqr() * dk)
            .sum();
        assert_relative_eq!(l2, spec_sum, max_relative = 1e-10);
    }

    #[test]
    fn continuum_fourier_gaussian() {
        // fhat of e^{-x^2/2} is e^{-k^2/2} (unitary convention)
        let g = grid();
        let f = g.sample_real(|x| (-x * x / 2.0).exp());
        for (k, z) in continuum_fourier(&f) {
            if k.abs() < 5.0 {
                let exact = (-k * k / 2.0).exp();
                assert!((z.re - exact).abs() < 1e-10, "k={k} z={z}");
                assert!(z.im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn f32_instantiation_works() {
        let g = Grid::<f32>::new(20.0, 256).unwrap();
        let f = g.sample_real(|x| (-x * x).exp());
        let df = derivative(&f, 1).unwrap();
        let exact = g.sample_real(|x| -2.0 * x * (-x * x).exp());
        assert!((&df - &exact).sup_norm() < 1e-4);
        assert!((inner(&f, &f).unwrap().re - (std::f32::consts::PI / 2.0).sqrt()).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn inner_conjugate_symmetry(seed in 0u64..1000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = Grid::<f64>::new(20.0, 256).unwrap();
            let cu = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let cv = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let ku = rng.gen_range(0.1..2.0);
            let kv = rng.gen_range(0.1..2.0);
            let u = g.sample(|x| cu * Complex64::new(0.0, ku * x).exp() * (-x * x / 8.0).exp());
            let v = g.sample(|x| cv * Complex64::new(0.0, kv * x).exp() * (-x * x / 6.0).exp());
            let a = inner(&u, &v).unwrap();
            let b = inner(&v, &u).unwrap();
            prop_assert!((a - b.conj()).norm() < 1e-12 * (1.0 + a.norm()));
        }

        #[test]
        fn tilde_sigma_is_a_norm(seed in 0u64..200, lam in 0.1f64..4.0) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = Grid::new(20.0, 256).unwrap();
            let w = WeightSpec::tilde_sigma(0.5).unwrap();
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let c0 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let c1 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let k1 = rng.gen_range(0.2..2.0);
                g.sample(|x| (c0 + c1 * Complex64::new(0.0, k1 * x).exp()) * (-x * x / 10.0).exp())
            };
            let u = mk(&mut rng);
            let v = mk(&mut rng);
            // homogeneity
            let nu = weighted_norm(&u, &w).unwrap();
            let nlu = weighted_norm(&u.scale_re(lam), &w).unwrap();
            prop_assert!((nlu - lam * nu).abs() < 1e-10 * (1.0 + nlu));
            // triangle inequality
            let nv = weighted_norm(&v, &w).unwrap();
            let nuv = weighted_norm(&u.add(&v), &w).unwrap();
            prop_assert!(nuv <= nu + nv + 1e-10);
        }
    }
}
