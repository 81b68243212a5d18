//! Darboux ladder: strip bound states off `H = -d_xx + V` one at a time
//! through the factorization `H - omega = A A^*` with `A = psi^{-1} d_x (psi .)`
//! built from the ground state, apply the composite intertwiners `calA` and
//! `calA^*`, and run the construction backwards to insert prescribed bound
//! states into a repulsive seed.
//!
//! The new potential at each rung is computed algebraically from the Riccati
//! identity: with `rho = (log psi)'` one has `rho' + rho^2 = V - omega`, so
//! `V_next = V - 2 rho' = 2 omega + 2 rho^2 - V`, which needs no numerical
//! differentiation of `rho`.
//!
//! `rho` itself is assembled piecewise: from the eigenvector where it is
//! numerically healthy (`|psi| >= 1e-3 max`), and from stable inward ODE
//! marches of the decaying branches in the tails, where the eigenvector is
//! below the solver noise floor but the Riccati slope still carries the
//! potential's transition region.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::grid::{self, Field};
use crate::spectral::jost::refine_potential;
use crate::spectral::{discrete_spectrum, SchrodingerOp, SpectralError};
use crate::{Field64, Grid64};

#[derive(Debug, Error)]
pub enum DarbouxError {
    #[error("operator has no bound states; darboux step needs a ground state")]
    EmptySpectrum,
    #[error("ground state has an interior sign change (min/max = {0:.3e})")]
    GroundStateNotPositive(f64),
    #[error("ladder expected {expected} eigenvalues, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("seed potential is not repulsive (violation {0:.3e})")]
    SeedNotRepulsive(f64),
    #[error("insertion energy {omega} must lie below the current spectrum bottom {bottom}")]
    InsertionNotBelow { omega: f64, bottom: f64 },
    #[error("inserted-state solution lost positivity at x = {0}")]
    InsertionNotPositive(f64),
    #[error("spectrum after insertion ({got:?}) does not match the target ({want:?})")]
    InsertionSpectrumMismatch { got: Vec<f64>, want: Vec<f64> },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Grid(#[from] grid::GridError),
}

/// One rung of the ladder: the removed eigenvalue, its ground state, and the
/// log-derivative `rho = (log psi)'` through which the operators act.
#[derive(Debug, Clone)]
pub struct Rung {
    pub omega: f64,
    pub psi: Field64,
    pub log_deriv: Vec<f64>,
}

/// The chain `V_1, ..., V_{N+1}` with the removed eigenvalues and ground
/// states of each intermediate operator.
#[derive(Debug, Clone)]
pub struct DarbouxLadder {
    potentials: Vec<Field64>, // length N + 1
    rungs: Vec<Rung>,         // length N
}

impl DarbouxLadder {
    pub fn n_rungs(&self) -> usize {
        self.rungs.len()
    }

    /// `V_k` for `k = 0..=N` (0-based; `k = 0` is the input potential).
    pub fn potential(&self, k: usize) -> &Field64 {
        &self.potentials[k]
    }

    pub fn potentials(&self) -> &[Field64] {
        &self.potentials
    }

    /// Final, bound-state-free potential `V_{N+1}`.
    pub fn final_potential(&self) -> &Field64 {
        self.potentials.last().unwrap()
    }

    pub fn rung(&self, k: usize) -> &Rung {
        &self.rungs[k]
    }

    pub fn removed_omegas(&self) -> Vec<f64> {
        self.rungs.iter().map(|r| r.omega).collect()
    }

    pub fn final_op(&self) -> Result<SchrodingerOp, SpectralError> {
        SchrodingerOp::new(self.final_potential())
    }
}

/// Riccati march data: `rho = u'/u` and `ell = log u` for the branch of
/// `u'' = (V - omega) u` that decays at the starting end.
struct RiccatiBranch {
    rho: Vec<f64>,
    log_u: Vec<f64>,
}

/// Integrate `rho' = (V - omega) - rho^2`, `ell' = rho` inward from one box
/// end, starting on the decaying branch there (`rho = -sign kappa`, an exact
/// fixed point of the flow while the potential is dead, and a contractive
/// direction of the marching, so tail values are clean to machine precision).
fn riccati_march(
    grid: Grid64,
    v_fine: &[f64],
    omega: f64,
    from_left: bool,
    stop_node: Option<usize>,
) -> Result<RiccatiBranch, DarbouxError> {
    let n = grid.n();
    let kappa = (-omega).sqrt();
    let h = grid.dx() / 2.0;
    let nf = v_fine.len();
    let s = if from_left { h } else { -h };
    let mut rho = vec![0.0; n];
    let mut log_u = vec![0.0; n];
    // (rho, ell); ell is the log-amplitude relative to the starting end
    let mut y = (if from_left { kappa } else { -kappa }, 0.0_f64);
    let (mut p, step): (isize, isize) = if from_left { (0, 2) } else { (nf as isize, -2) };
    let pm = |p: isize| ((p % nf as isize + nf as isize) % nf as isize) as usize;
    let rhs = |vp: f64, y: (f64, f64)| ((vp - omega) - y.0 * y.0, y.0);

    for j in 0..=(2 * n) {
        let pp = pm(p);
        let store = if from_left { j < 2 * n } else { j > 0 };
        if pp % 4 == 0 && store {
            let node = pp / 4;
            rho[node] = y.0;
            log_u[node] = y.1;
            // past an eigenvalue's turning region the marched branch is no
            // longer the one we need; stop once the requested range is covered
            if let Some(stop) = stop_node {
                if (from_left && node >= stop) || (!from_left && node <= stop) {
                    break;
                }
            }
        }
        if j == 2 * n {
            break;
        }
        let v0 = v_fine[pp];
        let vh = v_fine[pm(p + step / 2)];
        let v1 = v_fine[pm(p + step)];
        let k1 = rhs(v0, y);
        let k2 = rhs(vh, (y.0 + 0.5 * s * k1.0, y.1 + 0.5 * s * k1.1));
        let k3 = rhs(vh, (y.0 + 0.5 * s * k2.0, y.1 + 0.5 * s * k2.1));
        let k4 = rhs(v1, (y.0 + s * k3.0, y.1 + s * k3.1));
        y.0 += (k1.0 + 2.0 * (k2.0 + k3.0) + k4.0) * (s / 6.0);
        y.1 += (k1.1 + 2.0 * (k2.1 + k3.1) + k4.1) * (s / 6.0);
        if !y.0.is_finite() || y.0.abs() > 1e8 {
            // Riccati blow-up = a zero of u: the tracked solution lost
            // positivity (possible only for invalid insertions)
            return Err(DarbouxError::InsertionNotPositive(grid.node(pm(p) / 4)));
        }
        p += step;
    }
    Ok(RiccatiBranch { rho, log_u })
}

/// Fraction of the eigenfunction maximum below which the eigenvector is
/// considered noise-dominated and the ODE tails take over.
const RHO_SPLICE: f64 = 1e-3;

/// `rho = (log psi)'` for an eigenpair `(omega, psi)` of `-d_xx + V`.
fn log_derivative(op: &SchrodingerOp, omega: f64, psi: &Field64) -> Result<Vec<f64>, DarbouxError> {
    let grid = psi.grid();
    let n = grid.n();
    let sup = psi.sup_norm();
    let floor = RHO_SPLICE * sup;
    let mut lo = 0;
    while lo < n && psi.values()[lo].re.abs() < floor {
        lo += 1;
    }
    let mut hi = n - 1;
    while hi > 0 && psi.values()[hi].re.abs() < floor {
        hi -= 1;
    }
    let psi_p = grid::derivative(psi, 1).expect("order 1");
    let mut rho = vec![0.0; n];
    for i in lo..=hi {
        rho[i] = psi_p.values()[i].re / psi.values()[i].re;
    }
    if lo > 0 || hi < n - 1 {
        let v_fine = refine_potential(grid, op.potential(), 4);
        if lo > 0 {
            let left = riccati_march(grid, &v_fine, omega, true, Some(lo + 1))?;
            rho[..lo].copy_from_slice(&left.rho[..lo]);
        }
        if hi < n - 1 {
            let right = riccati_march(grid, &v_fine, omega, false, Some(hi.saturating_sub(1)))?;
            rho[hi + 1..].copy_from_slice(&right.rho[hi + 1..]);
        }
    }
    Ok(rho)
}

/// Remove the lowest eigenvalue of `op`: returns `(V_next, psi, omega)`.
pub fn darboux_step(op: &SchrodingerOp) -> Result<(Field64, Field64, f64), DarbouxError> {
    let spec = discrete_spectrum(op, 0)?;
    let (omega, psi) = spec.ground().ok_or(DarbouxError::EmptySpectrum)?;
    let (v_next, rung) = darboux_step_with(op, omega, psi)?;
    Ok((v_next, rung.psi, omega))
}

fn darboux_step_with(
    op: &SchrodingerOp,
    omega: f64,
    psi: &Field64,
) -> Result<(Field64, Rung), DarbouxError> {
    let sup = psi.sup_norm();
    let min = psi.values().iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    if min < -1e-6 * sup {
        return Err(DarbouxError::GroundStateNotPositive(min / sup));
    }
    let rho = log_derivative(op, omega, psi)?;
    let grid = op.grid();
    let v = op.potential();
    let v_next = Field::from_values(
        grid,
        (0..grid.n())
            .map(|i| C64::new(2.0 * omega + 2.0 * rho[i] * rho[i] - v[i], 0.0))
            .collect(),
    );
    let rung = Rung { omega, psi: psi.clone(), log_deriv: rho };
    Ok((v_next, rung))
}

/// Build the full ladder, re-solving the spectrum at each rung and verifying
/// the spectral shrinkage `sigma_d(H_{k+1}) = sigma_d(H_k)` minus its minimum.
pub fn build_ladder(potential: &Field64, expected_n: usize) -> Result<DarbouxLadder, DarbouxError> {
    let op0 = SchrodingerOp::new(potential)?;
    let spec0 = discrete_spectrum(&op0, 0)?;
    if spec0.is_empty() {
        return Err(DarbouxError::EmptySpectrum);
    }
    if expected_n != 0 && spec0.len() != expected_n {
        return Err(DarbouxError::CountMismatch { expected: expected_n, found: spec0.len() });
    }
    let n = spec0.len();
    let mut potentials = vec![potential.clone()];
    let mut rungs = Vec::with_capacity(n);
    let mut op = op0;
    let mut spec = spec0;
    for k in 0..n {
        let (omega, psi) = spec.ground().expect("nonempty by construction");
        let (v_next, rung) = darboux_step_with(&op, omega, psi)?;
        rungs.push(rung);
        op = SchrodingerOp::new(&v_next)?;
        spec = discrete_spectrum(&op, 0)?;
        if spec.len() != n - k - 1 {
            return Err(DarbouxError::CountMismatch { expected: n - k - 1, found: spec.len() });
        }
        potentials.push(v_next);
    }
    Ok(DarbouxLadder { potentials, rungs })
}

/// Apply `calA = A_1 ... A_N` (`adjoint = false`) or `calA^* = A_N^* ... A_1^*`
/// (`adjoint = true`), with `A_k u = u' + rho_k u` and `A_k^* u = -u' + rho_k u`.
pub fn apply_a_chain(ladder: &DarbouxLadder, f: &Field64, adjoint: bool) -> Field64 {
    let mut g = f.clone();
    if adjoint {
        for rung in &ladder.rungs {
            g = apply_single(&g, &rung.log_deriv, true);
        }
    } else {
        for rung in ladder.rungs.iter().rev() {
            g = apply_single(&g, &rung.log_deriv, false);
        }
    }
    g
}

fn apply_single(f: &Field64, rho: &[f64], adjoint: bool) -> Field64 {
    let fp = grid::derivative(f, 1).expect("order 1");
    let sign = if adjoint { -1.0 } else { 1.0 };
    let mut out = f.grid().zeros();
    for i in 0..f.len() {
        out.values_mut()[i] = sign * fp.values()[i] + rho[i] * f.values()[i];
    }
    out
}

/// `|| calA calA^* f - prod_j (H - omega_j) f || / ||f||`: the factorization
/// identity through which the ladder inverts the transformed variable.
pub fn verify_factorization(
    ladder: &DarbouxLadder,
    op: &SchrodingerOp,
    f: &Field64,
) -> Result<f64, DarbouxError> {
    let lhs = apply_a_chain(ladder, &apply_a_chain(ladder, f, true), false);
    let mut rhs = f.clone();
    for rung in &ladder.rungs {
        rhs = op.apply_shifted(&rhs, C64::new(rung.omega, 0.0));
    }
    let denom = f.l2_norm().max(f64::MIN_POSITIVE);
    Ok((&lhs - &rhs).l2_norm() / denom)
}

/// Repulsivity verdict: `x V'(x) <= 0` everywhere and `V` not identically zero.
#[derive(Debug, Clone, Copy)]
pub struct RepulsivityReport {
    /// `max_i x_i V'(x_i)`.
    pub sup_violation: f64,
    /// Tolerance actually used for the sign test.
    pub tol: f64,
    pub is_nonzero: bool,
    pub verdict: bool,
}

/// Repulsivity check with tolerance `tol_factor * ||V'||_inf`.
pub fn check_repulsive_with_tol(v: &Field64, tol_factor: f64) -> RepulsivityReport {
    let vp = grid::derivative(v, 1).expect("order 1");
    let grid = v.grid();
    let mut sup_violation = f64::NEG_INFINITY;
    let mut vp_sup: f64 = 0.0;
    for i in 0..grid.n() {
        let x = grid.node(i);
        let d = vp.values()[i].re;
        vp_sup = vp_sup.max(d.abs());
        sup_violation = sup_violation.max(x * d);
    }
    let tol = tol_factor * vp_sup;
    let is_nonzero = v.sup_norm() > 1e-12;
    RepulsivityReport {
        sup_violation,
        tol,
        is_nonzero,
        verdict: sup_violation <= tol && is_nonzero,
    }
}

/// Default repulsivity check (`tol = 1e-10 ||V'||_inf`).
pub fn check_repulsive(v: &Field64) -> RepulsivityReport {
    check_repulsive_with_tol(v, 1e-10)
}

/// Insert bound states at `target_omegas` into a repulsive seed by reverting
/// the Darboux step: for each `omega` (shallowest first, so every new level
/// sits below the current spectrum bottom) take the positive two-sided-growing
/// solution `psi` of `(H - omega) psi = 0` and set `V_new = V - 2 (log psi)''`;
/// the new ground state is `1/psi`.
///
/// `mixing` in `(0, 1)` weights the left-growing branch; `0.5` is the
/// symmetric choice (equal exponential weights at both ends).
pub fn inverse_darboux(
    v_rep: &Field64,
    target_omegas: &[f64],
    mixing: f64,
) -> Result<Field64, DarbouxError> {
    assert!(mixing > 0.0 && mixing < 1.0, "mixing must lie in (0,1)");
    let rep = check_repulsive(v_rep);
    if !rep.verdict {
        return Err(DarbouxError::SeedNotRepulsive(rep.sup_violation));
    }
    let mut targets = target_omegas.to_vec();
    targets.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if targets.is_empty() {
        return Ok(v_rep.clone());
    }
    if *targets.last().unwrap() >= 0.0 {
        return Err(DarbouxError::InsertionNotBelow {
            omega: *targets.last().unwrap(),
            bottom: 0.0,
        });
    }

    let grid = v_rep.grid();
    let mut v = v_rep.clone();
    let mut inserted: Vec<f64> = Vec::new();
    for &omega in targets.iter().rev() {
        if let Some(&bottom) = inserted.last() {
            if omega >= bottom {
                return Err(DarbouxError::InsertionNotBelow { omega, bottom });
            }
        }
        let vr: Vec<f64> = v.values().iter().map(|z| z.re).collect();
        let v_fine = refine_potential(grid, &vr, 4);
        let left = riccati_march(grid, &v_fine, omega, true, None)?;
        let right = riccati_march(grid, &v_fine, omega, false, None)?;
        // psi = mixing u_L + (1 - mixing) u_R combined through log amplitudes
        let (wl, wr) = (mixing.ln(), (1.0 - mixing).ln());
        let mut rho = vec![0.0; grid.n()];
        for i in 0..grid.n() {
            let sl = left.log_u[i] + wl;
            let sr = right.log_u[i] + wr;
            let m = sl.max(sr);
            let ul = (sl - m).exp();
            let ur = (sr - m).exp();
            rho[i] = (ul * left.rho[i] + ur * right.rho[i]) / (ul + ur);
        }
        let vals: Vec<C64> = (0..grid.n())
            .map(|i| C64::new(2.0 * omega + 2.0 * rho[i] * rho[i] - vr[i], 0.0))
            .collect();
        v = Field::from_values(grid, vals);
        inserted.push(omega);
    }

    let op = SchrodingerOp::new(&v)?;
    let spec = discrete_spectrum(&op, 0)?;
    let got = spec.omegas().to_vec();
    let ok = got.len() == targets.len()
        && got
            .iter()
            .zip(&targets)
            .all(|(a, b)| (a - b).abs() < 1e-6 * (1.0 + b.abs()));
    if !ok {
        return Err(DarbouxError::InsertionSpectrumMismatch { got, want: targets });
    }
    Ok(v)
}

/// Enumerate `m` in `Z^N \ {0}` with `||m||_1 <= norm_cutoff` and
/// `|m . omega| < tol`: the non-resonance violations at this cutoff.
pub fn check_nonresonance(omegas: &[f64], norm_cutoff: usize, tol: f64) -> Vec<Vec<i32>> {
    let mut hits = Vec::new();
    let n = omegas.len();
    let mut m = vec![0i32; n];
    enumerate_ball(&mut m, 0, norm_cutoff as i32, &mut |m| {
        if m.iter().all(|&x| x == 0) {
            return;
        }
        let dot: f64 = m.iter().zip(omegas).map(|(&mi, &w)| mi as f64 * w).sum();
        if dot.abs() < tol {
            hits.push(m.to_vec());
        }
    });
    hits
}

/// Visit every integer vector with `||m||_1 <= budget` (shared with the
/// profile module's index enumeration).
pub(crate) fn enumerate_ball(
    m: &mut Vec<i32>,
    idx: usize,
    budget: i32,
    visit: &mut impl FnMut(&[i32]),
) {
    if idx == m.len() {
        visit(m);
        return;
    }
    for val in -budget..=budget {
        m[idx] = val;
        enumerate_ball(m, idx + 1, budget - val.abs(), visit);
    }
    m[idx] = 0;
}

/// Default non-resonance tolerance: `1e-8 max_j |omega_j|`.
pub fn nonresonance_tol(omegas: &[f64]) -> f64 {
    1e-8 * omegas.iter().fold(0.0_f64, |a, &w| a.max(w.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn grid() -> Grid64 {
        Grid::new(40.0, 4096).unwrap()
    }

    fn pt(depth: f64) -> Field64 {
        grid().sample_real(move |x| -depth / x.cosh().powi(2))
    }

    #[test]
    fn step_removes_single_level() {
        let op = SchrodingerOp::new(&pt(2.0)).unwrap();
        let (v_next, _psi, omega) = darboux_step(&op).unwrap();
        assert!((omega + 1.0).abs() < 1e-8);
        assert!(v_next.sup_norm() < 1e-6, "residual potential {}", v_next.sup_norm());
    }

    #[test]
    fn step_peels_deepest_level() {
        let op = SchrodingerOp::new(&pt(6.0)).unwrap();
        let (v_next, _psi, omega) = darboux_step(&op).unwrap();
        assert!((omega + 4.0).abs() < 1e-8);
        let expect = pt(2.0);
        assert!(
            (&v_next - &expect).sup_norm() < 1e-6,
            "dev {}",
            (&v_next - &expect).sup_norm()
        );
    }

    #[test]
    fn step_requires_bound_state() {
        let op = SchrodingerOp::free(grid());
        assert!(matches!(darboux_step(&op), Err(DarbouxError::EmptySpectrum)));
    }

    #[test]
    fn ladder_of_two_levels() {
        let ladder = build_ladder(&pt(6.0), 2).unwrap();
        assert_eq!(ladder.n_rungs(), 2);
        assert!((&ladder.potentials()[1] - &pt(2.0)).sup_norm() < 1e-5);
        assert!(ladder.final_potential().sup_norm() < 1e-5);
        let w = ladder.removed_omegas();
        assert!((w[0] + 4.0).abs() < 1e-6 && (w[1] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn ladder_count_mismatch() {
        assert!(matches!(
            build_ladder(&pt(6.0), 3),
            Err(DarbouxError::CountMismatch { .. })
        ));
        assert!(matches!(
            build_ladder(&grid().zeros(), 0),
            Err(DarbouxError::EmptySpectrum)
        ));
    }

    #[test]
    fn adjoint_annihilates_ground_state() {
        let ladder = build_ladder(&pt(6.0), 2).unwrap();
        let a1_star_phi1 = apply_single(&ladder.rung(0).psi, &ladder.rung(0).log_deriv, true);
        assert!(a1_star_phi1.l2_norm() < 1e-7, "residual {}", a1_star_phi1.l2_norm());
    }

    #[test]
    fn chain_adjointness() {
        let ladder = build_ladder(&pt(6.0), 2).unwrap();
        let g = grid();
        let f1 = g.sample(|x| {
            C64::new((-0.4 * (x - 1.0).powi(2)).exp(), 0.2 * (-0.3 * x * x).exp())
        });
        let f2 = g.sample(|x| {
            C64::new((2.0 * x).sin() * (-0.2 * x * x).exp(), 0.1 * (-0.5 * x * x).exp())
        });
        let lhs = grid::real_pairing(&apply_a_chain(&ladder, &f1, false), &f2).unwrap();
        let rhs = grid::real_pairing(&f1, &apply_a_chain(&ladder, &f2, true)).unwrap();
        assert!((lhs - rhs).abs() < 1e-8 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn conjugation_full_chain() {
        let v1 = pt(6.0);
        let ladder = build_ladder(&v1, 2).unwrap();
        let op1 = SchrodingerOp::new(&v1).unwrap();
        let op_last = ladder.final_op().unwrap();
        let f = grid().sample_real(|x| (-0.5 * x * x).exp());
        let lhs = apply_a_chain(&ladder, &op1.apply(&f), true);
        let rhs = op_last.apply(&apply_a_chain(&ladder, &f, true));
        let h2 = crate::grid::weighted_norm(&f, &crate::grid::WeightSpec::sobolev(2.0)).unwrap();
        let rel = (&lhs - &rhs).l2_norm() / h2;
        assert!(rel < 1e-6, "conjugation residual {rel}");
    }

    #[test]
    fn factorization_identity() {
        let v1 = pt(6.0);
        let ladder = build_ladder(&v1, 2).unwrap();
        let op1 = SchrodingerOp::new(&v1).unwrap();
        let f = grid().sample_real(|x| (-0.5 * (x + 0.5).powi(2)).exp());
        let r = verify_factorization(&ladder, &op1, &f).unwrap();
        assert!(r < 1e-5, "factorization residual {r}");
        // ground state: both sides annihilate
        let spec = discrete_spectrum(&op1, 0).unwrap();
        let aa = apply_a_chain(&ladder, &apply_a_chain(&ladder, spec.phi(0), true), false);
        assert!(aa.l2_norm() < 1e-5);
    }

    #[test]
    fn factorization_single_rung() {
        let v1 = pt(2.0);
        let ladder = build_ladder(&v1, 1).unwrap();
        let op1 = SchrodingerOp::new(&v1).unwrap();
        // calA calA^* = H + 1 on test bumps
        let f = grid().sample_real(|x| (-0.3 * x * x).exp() * (1.0 + 0.2 * x));
        let lhs = apply_a_chain(&ladder, &apply_a_chain(&ladder, &f, true), false);
        let rhs = op1.apply_shifted(&f, C64::new(-1.0, 0.0));
        assert!((&lhs - &rhs).l2_norm() / f.l2_norm() < 1e-5);
    }

    #[test]
    fn repulsive_verdicts() {
        let sech2 = grid().sample_real(|x| 1.0 / x.cosh().powi(2));
        assert!(check_repulsive(&sech2).verdict);
        let well = pt(2.0);
        assert!(!check_repulsive(&well).verdict);
        let zero = grid().zeros();
        let rep = check_repulsive(&zero);
        assert!(!rep.verdict && !rep.is_nonzero);
    }

    #[test]
    fn inverse_single_insertion() {
        // seed rejected when identically zero
        assert!(matches!(
            inverse_darboux(&grid().zeros(), &[-1.0], 0.5),
            Err(DarbouxError::SeedNotRepulsive(_))
        ));
        // a microscopic repulsive seed is dynamically void: inserting -1
        // reproduces the textbook -2 sech^2 well (symmetric choice)
        let seed = grid().sample_real(|x| 1e-9 / x.cosh().powi(2));
        let v = inverse_darboux(&seed, &[-1.0], 0.5).unwrap();
        let expect = pt(2.0);
        assert!((&v - &expect).sup_norm() < 1e-5, "dev {}", (&v - &expect).sup_norm());
    }

    #[test]
    fn inverse_two_insertions_recover_pt6() {
        let seed = grid().sample_real(|x| 1e-9 / x.cosh().powi(2));
        let v = inverse_darboux(&seed, &[-4.0, -1.0], 0.5).unwrap();
        let expect = pt(6.0);
        assert!((&v - &expect).sup_norm() < 1e-4, "dev {}", (&v - &expect).sup_norm());
    }

    #[test]
    fn inverse_round_trip_with_seed() {
        let seed = grid().sample_real(|x| 1.0 / x.cosh().powi(2));
        let v = inverse_darboux(&seed, &[-4.0, -1.0], 0.5).unwrap();
        let op = SchrodingerOp::new(&v).unwrap();
        let spec = discrete_spectrum(&op, 0).unwrap();
        assert_eq!(spec.len(), 2);
        assert!((spec.omegas()[0] + 4.0).abs() < 1e-6);
        assert!((spec.omegas()[1] + 1.0).abs() < 1e-6);
        let ladder = build_ladder(&v, 2).unwrap();
        let dev = (ladder.final_potential() - &seed).sup_norm();
        assert!(dev < 1e-4, "round trip dev {dev}");
    }

    #[test]
    fn insertion_order_guard() {
        let seed = grid().sample_real(|x| 1.0 / x.cosh().powi(2));
        assert!(matches!(
            inverse_darboux(&seed, &[-1.0, -1.0], 0.5),
            Err(DarbouxError::InsertionNotBelow { .. })
        ));
        assert!(inverse_darboux(&seed, &[1.0], 0.5).is_err());
    }

    #[test]
    fn nonresonance_enumeration() {
        // omega = (-4, -1): on the slice sum m_j = 1 the dot is -3 m_1 - 1,
        // never zero; the first full-lattice hit is (1, -4) at ||m|| = 5.
        assert!(check_nonresonance(&[-4.0, -1.0], 4, 1e-8).is_empty());
        let hits = check_nonresonance(&[-4.0, -1.0], 5, 1e-8);
        assert!(hits.contains(&vec![1, -4]) && hits.contains(&vec![-1, 4]));
        // omega = (-2, -1): (1, -2) is resonant at cutoff 3
        let hits = check_nonresonance(&[-2.0, -1.0], 3, 1e-8);
        assert!(hits.contains(&vec![1, -2]));
        // N = 1: no violations at any cutoff
        assert!(check_nonresonance(&[-1.7], 10, 1e-8).is_empty());
    }
}
