//! Reference implementations of the classical momentum methods, written
//! directly from their own update rules. These are the ground truth the
//! four-parameter family is tested against, plus the closed-form maps into
//! [`Gm2Params`].

use crate::error::{Error, Result};
use crate::gm2::{Gm2Params, Gm2State, StepSize};
use crate::linalg;
use crate::objectives::Objective;

fn finite_or_fail(v: &[f64], k: usize) -> Result<()> {
    if linalg::all_finite(v) {
        Ok(())
    } else {
        Err(Error::NumericalFailure { iteration: k, message: "non-finite iterate".into() })
    }
}

// ---------------------------------------------------------------------------
// Nesterov, strongly convex regime
// ---------------------------------------------------------------------------

/// State of the classical two-sequence form. `y` is the lookahead point where
/// the gradient is evaluated; the four-parameter x-sequence coincides with
/// this y-sequence.
#[derive(Clone, Debug)]
pub struct NagScState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub k: usize,
}

pub fn nag_sc_init(x0: &[f64]) -> NagScState {
    NagScState { x: x0.to_vec(), y: x0.to_vec(), k: 0 }
}

/// x_{k+1} = y_k - s grad f(y_k); y_{k+1} = x_{k+1} + beta (x_{k+1} - x_k)
/// with beta = (1 - sqrt(mu s)) / (1 + sqrt(mu s)).
pub fn nag_sc_step(f: &Objective, s: f64, state: &NagScState) -> Result<NagScState> {
    let u = (f.mu() * s).sqrt();
    let beta = (1.0 - u) / (1.0 + u);
    let g = f.gradient(&state.y);
    finite_or_fail(&g, state.k)?;
    let x1 = linalg::add_scaled(&state.y, -s, &g);
    let y1: Vec<f64> = x1
        .iter()
        .zip(&state.x)
        .map(|(x1i, x0i)| x1i + beta * (x1i - x0i))
        .collect();
    finite_or_fail(&y1, state.k + 1)?;
    Ok(NagScState { x: x1, y: y1, k: state.k + 1 })
}

// ---------------------------------------------------------------------------
// Nesterov, convex regime (gradient-norm result)
// ---------------------------------------------------------------------------

/// State of the convex-regime iteration
///
/// ```text
/// x_{k+1} = (x_k + (2/k) v_k - s grad f(x_k)) / (1 + 2/k)
/// v_{k+1} = v_k - (s k / 2) grad f(x_{k+1}) - s grad f(x_{k+1})
/// ```
///
/// started at k = 1 from a given x_1 with v_0 = x_1. The k = 0 v-update is
/// applied at construction (v_1 = v_0 - s grad f(x_1)); the k = 0 x-update is
/// singular and never taken. Under this alignment the iteration coincides
/// with classical convex NAG (momentum (k-1)/(k+2)) and the Lyapunov descent
/// holds from the very first step.
#[derive(Clone, Debug)]
pub struct NagCvxState {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub k: usize,
}

pub fn nag_cvx_init(f: &Objective, s: f64, x1: &[f64]) -> Result<NagCvxState> {
    let g = f.gradient(x1);
    finite_or_fail(&g, 0)?;
    Ok(NagCvxState { x: x1.to_vec(), v: linalg::add_scaled(x1, -s, &g), k: 1 })
}

pub fn nag_cvx_step(f: &Objective, s: f64, state: &NagCvxState) -> Result<NagCvxState> {
    if state.k == 0 {
        return Err(Error::IndexError("the 2/k damping is singular at k = 0".into()));
    }
    let k = state.k as f64;
    let g = f.gradient(&state.x);
    finite_or_fail(&g, state.k)?;
    // (1 + 2/k) x_{k+1} = x_k + (2/k) v_k - s grad f(x_k)
    let x1: Vec<f64> = state
        .x
        .iter()
        .zip(&state.v)
        .zip(&g)
        .map(|((xi, vi), gi)| (k * xi + 2.0 * vi - s * k * gi) / (k + 2.0))
        .collect();
    let g1 = f.gradient(&x1);
    finite_or_fail(&g1, state.k + 1)?;
    let coeff = s * (k / 2.0 + 1.0);
    let v1 = linalg::add_scaled(&state.v, -coeff, &g1);
    Ok(NagCvxState { x: x1, v: v1, k: state.k + 1 })
}

// ---------------------------------------------------------------------------
// Triple momentum
// ---------------------------------------------------------------------------

/// rho = 1 - sqrt(1/kappa), alpha = (1+rho)/L, beta = rho^2/(2-rho),
/// gamma = rho^2/((1+rho)(2-rho)), delta = rho^2/(1-rho^2).
#[derive(Clone, Copy, Debug)]
pub struct TmCoefficients {
    pub rho: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub kappa: f64,
}

impl TmCoefficients {
    pub fn new(mu: f64, l: f64) -> Result<Self> {
        if !(mu > 0.0 && mu <= l) {
            return Err(Error::InadmissibleParameters(format!(
                "triple momentum needs 0 < mu <= L, got mu = {mu}, L = {l}"
            )));
        }
        let kappa = l / mu;
        let rho = 1.0 - (1.0 / kappa).sqrt();
        Ok(Self {
            rho,
            alpha: (1.0 + rho) / l,
            beta: rho * rho / (2.0 - rho),
            gamma: rho * rho / ((1.0 + rho) * (2.0 - rho)),
            delta: rho * rho / (1.0 - rho * rho),
            kappa,
        })
    }

    pub fn for_objective(f: &Objective) -> Result<Self> {
        Self::new(f.mu(), f.lipschitz())
    }
}

/// Two consecutive base-sequence points; outputs y and x are read off them.
#[derive(Clone, Debug)]
pub struct TmState {
    pub eps: Vec<f64>,
    pub eps_prev: Vec<f64>,
    pub k: usize,
}

pub fn tm_init(x0: &[f64]) -> TmState {
    TmState { eps: x0.to_vec(), eps_prev: x0.to_vec(), k: 0 }
}

impl TmState {
    /// Gradient-evaluation point y_k = (1+gamma) eps_k - gamma eps_{k-1}.
    pub fn y(&self, c: &TmCoefficients) -> Vec<f64> {
        self.eps
            .iter()
            .zip(&self.eps_prev)
            .map(|(e, ep)| (1.0 + c.gamma) * e - c.gamma * ep)
            .collect()
    }

    /// Output point x_k = (1+delta) eps_k - delta eps_{k-1}.
    pub fn x_out(&self, c: &TmCoefficients) -> Vec<f64> {
        self.eps
            .iter()
            .zip(&self.eps_prev)
            .map(|(e, ep)| (1.0 + c.delta) * e - c.delta * ep)
            .collect()
    }
}

/// eps_{k+1} = (1+beta) eps_k - beta eps_{k-1} - alpha grad f(y_k).
pub fn tm_step(f: &Objective, c: &TmCoefficients, state: &TmState) -> Result<TmState> {
    let y = state.y(c);
    let g = f.gradient(&y);
    finite_or_fail(&g, state.k)?;
    let eps_next: Vec<f64> = state
        .eps
        .iter()
        .zip(&state.eps_prev)
        .zip(&g)
        .map(|((e, ep), gi)| (1.0 + c.beta) * e - c.beta * ep - c.alpha * gi)
        .collect();
    finite_or_fail(&eps_next, state.k + 1)?;
    Ok(TmState { eps_prev: state.eps.clone(), eps: eps_next, k: state.k + 1 })
}

/// Parameter row under which the four-parameter iteration carries the triple
/// momentum trajectory: m = 1/sqrt(L), n = 2 sqrt(mu L)/(sqrt(L)-sqrt(mu)),
/// q = sqrt(mu), p = 1/sqrt(mu), with s = 1/L.
pub fn tm_gm2_params(f: &Objective) -> Result<(Gm2Params, StepSize)> {
    let mu = f.mu();
    let l = f.lipschitz();
    if !(mu > 0.0 && mu < l) {
        return Err(Error::InadmissibleParameters(format!(
            "triple momentum map needs 0 < mu < L, got mu = {mu}, L = {l}"
        )));
    }
    let n = 2.0 * (mu * l).sqrt() / (l.sqrt() - mu.sqrt());
    Ok((
        Gm2Params::new(1.0 / l.sqrt(), n, 1.0 / mu.sqrt(), mu.sqrt())?,
        StepSize::new(1.0 / l)?,
    ))
}

/// Initial (x, v) for the four-parameter run that tracks a triple-momentum
/// trajectory started at `state`. The elimination identity pins v_0 from two
/// consecutive gradient-evaluation points, so one lookahead step of the
/// reference recursion is taken here; the mapped run then reproduces the
/// y-sequence exactly for any objective.
pub fn tm_matched_gm2_state(
    f: &Objective,
    c: &TmCoefficients,
    state: &TmState,
    params: Gm2Params,
    s: StepSize,
) -> Result<Gm2State> {
    let y0 = state.y(c);
    let y1 = tm_step(f, c, state)?.y(c);
    let g0 = f.gradient(&y0);
    let nrs = params.n * s.sqrt_s();
    let v0: Vec<f64> = y1
        .iter()
        .zip(&y0)
        .zip(&g0)
        .map(|((y1i, y0i), gi)| (y1i * (1.0 + nrs) - y0i + params.m * s.sqrt_s() * gi) / nrs)
        .collect();
    Gm2State::new(y0, v0)
}

// ---------------------------------------------------------------------------
// Quasi-hyperbolic momentum
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct QhmParams {
    pub a: f64,
    pub b: f64,
    pub s: f64,
}

impl QhmParams {
    pub fn new(a: f64, b: f64, s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
            return Err(Error::InadmissibleParameters(format!(
                "QHM weights must lie in [0, 1], got a = {a}, b = {b}"
            )));
        }
        if !(s > 0.0) {
            return Err(Error::InadmissibleParameters(format!("s must be positive, got {s}")));
        }
        Ok(Self { a, b, s })
    }
}

#[derive(Clone, Debug)]
pub struct QhmState {
    pub x: Vec<f64>,
    pub g_acc: Vec<f64>,
    pub k: usize,
}

pub fn qhm_init(x0: &[f64]) -> QhmState {
    QhmState { x: x0.to_vec(), g_acc: vec![0.0; x0.len()], k: 0 }
}

/// g_{k+1} = b g_k + grad f(x_k);
/// x_{k+1} = x_k - s (1-a) grad f(x_k) - s a g_{k+1}.
pub fn qhm_step(f: &Objective, params: &QhmParams, state: &QhmState) -> Result<QhmState> {
    let g = f.gradient(&state.x);
    finite_or_fail(&g, state.k)?;
    let g_acc: Vec<f64> = state
        .g_acc
        .iter()
        .zip(&g)
        .map(|(gacc, gi)| params.b * gacc + gi)
        .collect();
    let x1: Vec<f64> = state
        .x
        .iter()
        .zip(&g)
        .zip(&g_acc)
        .map(|((xi, gi), gai)| xi - params.s * (1.0 - params.a) * gi - params.s * params.a * gai)
        .collect();
    finite_or_fail(&x1, state.k + 1)?;
    Ok(QhmState { x: x1, g_acc, k: state.k + 1 })
}

/// Map the QHM weight a into the four-parameter family:
/// m = (1-a) sqrt(s), n = q = sqrt(a mu), p = a/q + sqrt(s),
/// b = (1 - q sqrt(s)) / (1 + q sqrt(s)).
/// Valid for 0 < a <= 1/4, s <= 4/(3L) and q sqrt(s) <= 1/2.
pub fn qhm_params_map(a: f64, f: &Objective, s: f64) -> Result<(Gm2Params, f64)> {
    if !(a > 0.0 && a <= 0.25) {
        return Err(Error::InadmissibleParameters(format!(
            "QHM map needs 0 < a <= 1/4, got a = {a}"
        )));
    }
    if s > 4.0 / (3.0 * f.lipschitz()) {
        return Err(Error::InadmissibleParameters(format!(
            "QHM map needs s <= 4/(3L), got s = {s} with L = {}",
            f.lipschitz()
        )));
    }
    let q = (a * f.mu()).sqrt();
    let rs = s.sqrt();
    if q * rs > 0.5 {
        return Err(Error::InadmissibleParameters(format!(
            "QHM map needs q sqrt(s) <= 1/2, got {}",
            q * rs
        )));
    }
    let params = Gm2Params::new((1.0 - a) * rs, q, a / q + rs, q)?;
    let b = (1.0 - q * rs) / (1.0 + q * rs);
    Ok((params, b))
}

/// v0 under which the mapped four-parameter run equals a QHM run started
/// with zero momentum accumulator: v0 = x0 - p sqrt(s) grad f(x0) (this makes
/// both first steps the plain gradient step x0 - s grad f(x0)).
pub fn qhm_matched_v0(x0: &[f64], params: Gm2Params, s: StepSize, f: &Objective) -> Vec<f64> {
    let g = f.gradient(x0);
    linalg::add_scaled(x0, -params.p * s.sqrt_s(), &g)
}

// ---------------------------------------------------------------------------
// Rate matching
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateMatchVariant {
    /// z_k = z_{k-1} - (s k / 2) grad f(y_k)
    Original,
    /// z_k = z_{k-1} - (s (k+2) / 2) grad f(y_k)
    Perturbed,
}

#[derive(Clone, Debug)]
pub struct RateMatchState {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub k: usize,
}

/// Index starts at k = 0 with z_{-1} = x_0.
pub fn rate_match_init(x0: &[f64]) -> RateMatchState {
    RateMatchState { x: x0.to_vec(), z: x0.to_vec(), k: 0 }
}

/// y_k = x_k - s grad f(x_k); z_k = z_{k-1} - c_k grad f(y_k);
/// x_{k+1} = (2 z_k + k y_k) / (k + 2).
pub fn rate_match_step(
    f: &Objective,
    s: f64,
    state: &RateMatchState,
    variant: RateMatchVariant,
) -> Result<RateMatchState> {
    let k = state.k as f64;
    let g = f.gradient(&state.x);
    finite_or_fail(&g, state.k)?;
    let y = linalg::add_scaled(&state.x, -s, &g);
    let gy = f.gradient(&y);
    finite_or_fail(&gy, state.k)?;
    let c = match variant {
        RateMatchVariant::Original => s * k / 2.0,
        RateMatchVariant::Perturbed => s * (k + 2.0) / 2.0,
    };
    let z1 = linalg::add_scaled(&state.z, -c, &gy);
    let x1: Vec<f64> = z1
        .iter()
        .zip(&y)
        .map(|(zi, yi)| (2.0 * zi + k * yi) / (k + 2.0))
        .collect();
    finite_or_fail(&x1, state.k + 1)?;
    Ok(RateMatchState { x: x1, z: z1, k: state.k + 1 })
}

// ---------------------------------------------------------------------------
// H-NAG row
// ---------------------------------------------------------------------------

/// Coefficient-consistent H-NAG row: requires gamma = mu (1 - alpha) with
/// alpha >= sqrt(mu/L); returns n = 1, q = mu/(gamma + mu alpha),
/// p = 1/(gamma + mu alpha), m = beta.
pub fn hnag_check(gamma: f64, alpha: f64, beta: f64, f: &Objective, _s: f64) -> Result<Gm2Params> {
    let mu = f.mu();
    let alpha_min = (mu / f.lipschitz()).sqrt();
    if alpha < alpha_min {
        return Err(Error::InadmissibleParameters(format!(
            "H-NAG needs alpha >= sqrt(1/kappa) = {alpha_min}, got {alpha}"
        )));
    }
    let expected = mu * (1.0 - alpha);
    if (gamma - expected).abs() > 1e-12 * mu.max(1.0) {
        return Err(Error::InadmissibleParameters(format!(
            "H-NAG needs gamma = mu (1 - alpha) = {expected}, got {gamma}"
        )));
    }
    if !(beta >= 0.0) {
        return Err(Error::InadmissibleParameters(format!("beta must be >= 0, got {beta}")));
    }
    let denom = gamma + mu * alpha;
    Gm2Params::new(beta, 1.0, 1.0 / denom, mu / denom)
}

// ---------------------------------------------------------------------------
// Gradient-norm bounds of the convex-regime iteration
// ---------------------------------------------------------------------------

/// Running check of the two convex-regime bounds
/// (k^3 s^2 / 12) min_i ||grad f(x_i)||^2 <= ||x_1 - x*||^2 and
/// (s k (k+2) / 2) (f(x_k) - f*) <= ||x_1 - x*||^2, asserted exactly as
/// printed. The proof-level constants (24, 4) are tracked alongside for
/// diagnostics.
#[derive(Clone, Debug)]
pub struct GradNormBoundCheck {
    pub r0_sq: f64,
    min_grad_sq: f64,
    /// Largest observed lhs/rhs ratio of each bound, for reporting.
    pub worst_grad_ratio: f64,
    pub worst_fgap_ratio: f64,
    pub grad_bound_ok: bool,
    pub fgap_bound_ok: bool,
}

impl GradNormBoundCheck {
    pub fn new(f: &Objective, x1: &[f64]) -> Result<Self> {
        let xs = f
            .x_star()
            .ok_or_else(|| Error::MissingOptimum("x_star".into()))?;
        Ok(Self {
            r0_sq: linalg::dist_sq(x1, xs),
            min_grad_sq: f64::INFINITY,
            worst_grad_ratio: 0.0,
            worst_fgap_ratio: 0.0,
            grad_bound_ok: true,
            fgap_bound_ok: true,
        })
    }

    /// Feed the state at index k (iterates live at k >= 1). The min in the
    /// gradient bound runs over the iterates seen before k.
    pub fn observe(&mut self, f: &Objective, s: f64, state: &NagCvxState) -> Result<()> {
        let k = state.k as f64;
        let fgap = f.f_gap(&state.x)?;
        let lhs_fgap = s * k * (k + 2.0) / 2.0 * fgap;
        if self.r0_sq > 0.0 {
            self.worst_fgap_ratio = self.worst_fgap_ratio.max(lhs_fgap / self.r0_sq);
        }
        if lhs_fgap > self.r0_sq {
            self.fgap_bound_ok = false;
        }
        if self.min_grad_sq.is_finite() && state.k >= 2 {
            let lhs_grad = k.powi(3) * s * s / 12.0 * self.min_grad_sq;
            if self.r0_sq > 0.0 {
                self.worst_grad_ratio = self.worst_grad_ratio.max(lhs_grad / self.r0_sq);
            }
            if lhs_grad > self.r0_sq {
                self.grad_bound_ok = false;
            }
        }
        let gsq = linalg::norm_sq(&f.gradient(&state.x));
        self.min_grad_sq = self.min_grad_sq.min(gsq);
        Ok(())
    }

    pub fn both_ok(&self) -> bool {
        self.grad_bound_ok && self.fgap_bound_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gm2::{gm2_one_line_coeffs, gm2_step, initial_v, preset, MethodPreset};

    fn fig1_logistic() -> Objective {
        Objective::logistic_1d(1.0, 0.01).unwrap()
    }

    #[test]
    fn nag_sc_stays_at_the_minimizer() {
        let f = fig1_logistic();
        let st = nag_sc_init(f.x_star().unwrap());
        let next = nag_sc_step(&f, 1.0, &st).unwrap();
        assert!(linalg::dist(&next.y, f.x_star().unwrap()) < 1e-9);
    }

    #[test]
    fn nag_sc_degenerates_to_gradient_descent_at_kappa_one() {
        // a = 1 quadratic, s = 1, mu = 1: beta = 0 and one step lands at 0
        let f = Objective::quadratic(&[1.0]).unwrap();
        let st = nag_sc_init(&[3.7]);
        let next = nag_sc_step(&f, 1.0, &st).unwrap();
        assert_eq!(next.x, vec![0.0]);
        assert_eq!(next.y, vec![0.0]);
    }

    #[test]
    fn nag_sc_equals_gm2_preset_on_fig1_logistic() {
        let f = fig1_logistic();
        let s = StepSize::new(1.0).unwrap();
        let params = preset(MethodPreset::Nag, &f, s).unwrap();
        let x0 = vec![10.0];
        let mut gm2 = Gm2State::new(x0.clone(), initial_v(&x0, params, &f).unwrap()).unwrap();
        let mut nag = nag_sc_init(&x0);
        for _ in 0..100 {
            gm2 = gm2_step(params, s, &f, &gm2).unwrap();
            nag = nag_sc_step(&f, 1.0, &nag).unwrap();
            assert!(linalg::max_rel_dev(&gm2.x, &nag.y) <= 1e-12);
        }
    }

    #[test]
    fn nag_cvx_first_steps_match_classical_two_sequence_form() {
        // Classical convex NAG with momentum (k-1)/(k+2).
        let f = Objective::quadratic(&[1.0, 0.3]).unwrap();
        let s = 0.7;
        let x1 = vec![1.0, -2.0];
        let mut ours = nag_cvx_init(&f, s, &x1).unwrap();
        let mut x_prev = x1.clone();
        let mut x_curr = x1.clone();
        for k in 1..60 {
            ours = nag_cvx_step(&f, s, &ours).unwrap();
            let beta = (k as f64 - 1.0) / (k as f64 + 2.0);
            let y: Vec<f64> = x_curr
                .iter()
                .zip(&x_prev)
                .map(|(c, p)| c + beta * (c - p))
                .collect();
            let x_next = linalg::add_scaled(&y, -s, &f.gradient(&y));
            x_prev = x_curr;
            x_curr = x_next;
            assert!(
                linalg::max_rel_dev(&ours.x, &x_curr) < 1e-12,
                "diverged at k = {k}"
            );
        }
    }

    #[test]
    fn nag_cvx_stationary_at_optimum_and_singular_at_zero() {
        let f = Objective::quadratic(&[2.0]).unwrap();
        let st = nag_cvx_init(&f, 0.4, &[0.0]).unwrap();
        let next = nag_cvx_step(&f, 0.4, &st).unwrap();
        assert_eq!(next.x, vec![0.0]);
        let bad = NagCvxState { x: vec![1.0], v: vec![1.0], k: 0 };
        assert!(matches!(nag_cvx_step(&f, 0.4, &bad), Err(Error::IndexError(_))));
    }

    #[test]
    fn nag_cvx_damping_vanishes_for_large_k() {
        let f = Objective::quadratic(&[1.0]).unwrap();
        let s = 0.5;
        let st = NagCvxState { x: vec![1.0], v: vec![1.0], k: 4_000_000 };
        let next = nag_cvx_step(&f, s, &st).unwrap();
        let plain = 1.0 - s * 1.0;
        assert!((next.x[0] - plain).abs() < 1e-5);
    }

    #[test]
    fn tm_coefficients_match_hand_values_at_kappa_100() {
        let c = TmCoefficients::new(0.01, 1.0).unwrap();
        assert!((c.rho - 0.9).abs() < 1e-15);
        assert!((c.alpha - 1.9).abs() < 1e-15);
        assert!((c.beta - 0.736_363_6).abs() < 1e-7);
        assert!((c.gamma - 0.387_559_8).abs() < 1e-7);
        assert!((c.delta - 4.263_157_9).abs() < 1e-7);
    }

    #[test]
    fn tm_coefficient_identities_hold_by_recomputation() {
        for kappa in [1.0, 2.0, 10.0, 1e3] {
            let c = TmCoefficients::new(1.0 / kappa, 1.0).unwrap();
            assert!((c.rho - (1.0 - (1.0 / c.kappa).sqrt())).abs() < 1e-15);
            assert!((c.beta - c.rho * c.rho / (2.0 - c.rho)).abs() < 1e-15);
            assert!(
                (c.gamma - c.rho * c.rho / ((1.0 + c.rho) * (2.0 - c.rho))).abs() < 1e-15
            );
            if c.rho < 1.0 {
                assert!((c.delta - c.rho * c.rho / (1.0 - c.rho * c.rho)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tm_constant_sequences_at_optimum() {
        let f = fig1_logistic();
        let c = TmCoefficients::for_objective(&f).unwrap();
        let st = tm_init(f.x_star().unwrap());
        let next = tm_step(&f, &c, &st).unwrap();
        assert!(linalg::dist(&next.eps, f.x_star().unwrap()) < 1e-9);
    }

    #[test]
    fn gm2_tracks_tm_gradient_sequence_on_nonquadratic() {
        let f = fig1_logistic();
        let c = TmCoefficients::for_objective(&f).unwrap();
        let (params, s) = tm_gm2_params(&f).unwrap();
        let mut tm = tm_init(&[3.0]);
        let mut gm2 = tm_matched_gm2_state(&f, &c, &tm, params, s).unwrap();
        for k in 0..200 {
            assert!(
                linalg::max_rel_dev(&gm2.x, &tm.y(&c)) <= 1e-10,
                "diverged at k = {k}"
            );
            tm = tm_step(&f, &c, &tm).unwrap();
            gm2 = gm2_step(params, s, &f, &gm2).unwrap();
        }
    }

    #[test]
    fn qhm_limits_reduce_to_gradient_descent() {
        let f = Objective::quadratic(&[1.0, 4.0]).unwrap();
        let x0 = vec![1.0, -1.0];
        let s = 0.1;
        for params in [
            QhmParams::new(0.0, 0.9, s).unwrap(),
            QhmParams::new(1.0, 0.0, s).unwrap(),
        ] {
            let st = qhm_init(&x0);
            let next = qhm_step(&f, &params, &st).unwrap();
            let gd = linalg::add_scaled(&x0, -s, &f.gradient(&x0));
            assert!(linalg::dist(&next.x, &gd) < 1e-15);
        }
    }

    #[test]
    fn qhm_map_hand_values_and_guards() {
        // q sqrt(s) = 0.1 gives b = 0.9/1.1
        let f = Objective::quadratic(&[0.04, 1.0]).unwrap(); // mu = 0.04
        let s = 1.0;
        let (params, b) = qhm_params_map(0.25, &f, s).unwrap(); // q = sqrt(0.01) = 0.1
        assert!((params.q - 0.1).abs() < 1e-15);
        assert!((b - 0.9 / 1.1).abs() < 1e-15);
        assert!((params.m - 0.75).abs() < 1e-15);
        assert!((params.p - (0.25 / 0.1 + 1.0)).abs() < 1e-15);
        assert!(params.contraction_admissible(&f, StepSize::new(s).unwrap()));

        assert!(qhm_params_map(0.3, &f, s).is_err());
        assert!(qhm_params_map(0.0, &f, s).is_err());
        assert!(qhm_params_map(0.25, &f, 100.0).is_err());
    }

    #[test]
    fn qhm_map_fig3_regime_values() {
        let f = Objective::quadratic(&[1e-3, 0.5]).unwrap(); // mu = 1e-3
        let (params, b) = qhm_params_map(0.25, &f, 0.1).unwrap();
        assert!((params.q - 0.015_811_4).abs() < 1e-7);
        assert!((b - 0.990_049_8).abs() < 1e-7);
    }

    #[test]
    fn qhm_momentum_vanishes_as_a_goes_to_zero() {
        let f = Objective::quadratic(&[0.5, 1.0]).unwrap();
        let s = 0.5;
        let (params, b) = qhm_params_map(1e-12, &f, s).unwrap();
        assert!((params.m - s.sqrt()).abs() < 1e-10);
        assert!(params.q < 1e-6);
        assert!(b > 1.0 - 1e-6);
    }

    #[test]
    fn mapped_gm2_equals_qhm_iterates() {
        let (rows, labels) = crate::objectives::synthetic_classification(60, 3, 11);
        let f = Objective::reg_logistic(&rows, &labels, 1e-2).unwrap();
        let s = 1.0 / f.lipschitz();
        let a = 0.25;
        let (params, b) = qhm_params_map(a, &f, s).unwrap();
        let qhm = QhmParams::new(a, b, s).unwrap();
        let x0 = vec![1.0, -0.5, 0.25];
        let step = StepSize::new(s).unwrap();
        let mut gm2 =
            Gm2State::new(x0.clone(), qhm_matched_v0(&x0, params, step, &f)).unwrap();
        let mut q_state = qhm_init(&x0);
        for k in 0..100 {
            assert!(
                linalg::max_rel_dev(&gm2.x, &q_state.x) <= 1e-12,
                "diverged at k = {k}"
            );
            gm2 = gm2_step(params, step, &f, &gm2).unwrap();
            q_state = qhm_step(&f, &qhm, &q_state).unwrap();
        }
    }

    #[test]
    fn qhm_one_line_momentum_matches_mapped_b() {
        let f = Objective::quadratic(&[0.04, 1.0]).unwrap();
        let s = StepSize::new(1.0).unwrap();
        let (params, b) = qhm_params_map(0.25, &f, s.s()).unwrap();
        let c = gm2_one_line_coeffs(params, s);
        assert!((c.c_mom - b).abs() < 1e-15);
    }

    #[test]
    fn rate_match_boundary_and_stationarity() {
        let f = Objective::quadratic(&[1.0]).unwrap();
        // stationary at the optimum
        let st = rate_match_init(&[0.0]);
        let next = rate_match_step(&f, 0.5, &st, RateMatchVariant::Original).unwrap();
        assert_eq!(next.x, vec![0.0]);
        // k = 0 puts full weight on z: x_1 = z_0
        let st = rate_match_init(&[2.0]);
        let next = rate_match_step(&f, 0.5, &st, RateMatchVariant::Perturbed).unwrap();
        assert_eq!(next.x[0], next.z[0]);
    }

    #[test]
    fn perturbed_rate_match_tracks_nag_cvx_closely() {
        // Documented near-equivalence: the perturbed variant run next to the
        // convex-regime iteration from the same first iterate. The deviation
        // is reported, not asserted to vanish (the z-line samples the
        // gradient at y_k, one lookahead off).
        let f = Objective::quadratic(&[1.0, 0.2]).unwrap();
        let s = 0.9;
        let x0 = vec![1.0, 1.0];
        let mut rm = rate_match_init(&x0);
        rm = rate_match_step(&f, s, &rm, RateMatchVariant::Perturbed).unwrap();
        let mut nag = nag_cvx_init(&f, s, &rm.x).unwrap();
        let mut dev: f64 = 0.0;
        let mut gap_dev: f64 = 0.0;
        for _ in 1..100usize {
            rm = rate_match_step(&f, s, &rm, RateMatchVariant::Perturbed).unwrap();
            nag = nag_cvx_step(&f, s, &nag).unwrap();
            dev = dev.max(linalg::max_rel_dev(&rm.x, &nag.x));
            gap_dev = gap_dev
                .max((f.f_gap(&rm.x).unwrap() - f.f_gap(&nag.x).unwrap()).abs());
        }
        println!("perturbed rate-matching vs convex iteration: max x deviation {dev:.3e}, max f-gap deviation {gap_dev:.3e}");
        assert!(dev.is_finite());
        // both converge; the near-equivalence keeps them within the same
        // decade long before the optimum
        assert!(f.f_gap(&rm.x).unwrap() < 1e-6);
        assert!(f.f_gap(&nag.x).unwrap() < 1e-6);
    }

    #[test]
    fn hnag_row_collapses_to_unit_q_and_n() {
        let f = fig1_logistic(); // kappa = 100
        let alpha = 0.1; // = sqrt(1/kappa)
        let gamma = f.mu() * (1.0 - alpha);
        let params = hnag_check(gamma, alpha, 0.05, &f, 1.0).unwrap();
        assert_eq!(params.n, 1.0);
        assert!((params.q - 1.0).abs() < 1e-12);
        assert!((params.p - 1.0 / f.mu()).abs() < 1e-9 / f.mu());
        assert_eq!(params.m, 0.05);
    }

    #[test]
    fn hnag_rejects_alpha_zero_boundary() {
        let f = fig1_logistic();
        // gamma = mu corresponds to alpha = 0, below sqrt(1/kappa)
        assert!(matches!(
            hnag_check(f.mu(), 0.0, 0.1, &f, 1.0),
            Err(Error::InadmissibleParameters(_))
        ));
        // inconsistent gamma for a legal alpha
        assert!(matches!(
            hnag_check(0.5 * f.mu(), 0.1, 0.1, &f, 1.0),
            Err(Error::InadmissibleParameters(_))
        ));
    }
}
