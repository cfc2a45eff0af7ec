//! Right-hand sides of the continuous-time flows and a fixed-step RK4
//! integrator. The flows mirror the discrete methods coefficient for
//! coefficient: a parameter set accepted by [`crate::gm2`] is legal here
//! unchanged.

use crate::classic::TmCoefficients;
use crate::error::{Error, Result};
use crate::gm2::Gm2Params;
use crate::linalg;
use crate::objectives::Objective;

/// Paired continuous state (X, V) or (Q, J) at time t.
#[derive(Clone, Debug)]
pub struct FlowState {
    pub primary: Vec<f64>,
    pub secondary: Vec<f64>,
    pub t: f64,
}

impl FlowState {
    pub fn new(primary: Vec<f64>, secondary: Vec<f64>, t: f64) -> Result<Self> {
        if primary.len() != secondary.len() {
            return Err(Error::DimensionMismatch {
                expected: primary.len(),
                got: secondary.len(),
            });
        }
        Ok(Self { primary, secondary, t })
    }
}

/// Time-derivative of a [`FlowState`].
#[derive(Clone, Debug)]
pub struct FlowDeriv {
    pub primary: Vec<f64>,
    pub secondary: Vec<f64>,
}

/// dX = -m grad f(X) - n (X - V); dV = -p grad f(X) - q (V - X).
pub fn gm2_rhs(params: Gm2Params, f: &Objective, state: &FlowState) -> Result<FlowDeriv> {
    let Gm2Params { m, n, p, q } = params;
    let g = f.gradient(&state.primary);
    if !linalg::all_finite(&g) {
        return Err(Error::IntegrationDiverged { t: state.t });
    }
    let dx: Vec<f64> = state
        .primary
        .iter()
        .zip(&state.secondary)
        .zip(&g)
        .map(|((x, v), gi)| -m * gi - n * (x - v))
        .collect();
    let dv: Vec<f64> = state
        .primary
        .iter()
        .zip(&state.secondary)
        .zip(&g)
        .map(|((x, v), gi)| -p * gi - q * (v - x))
        .collect();
    Ok(FlowDeriv { primary: dx, secondary: dv })
}

/// Phase-space form of the strongly convex accelerated flow:
/// dQ = J; dJ = -(2 sqrt(mu) + sqrt(s) H(Q)) J - (1 + sqrt(mu s)) grad f(Q).
pub fn phase_rhs_nag(f: &Objective, s: f64, mu: f64, state: &FlowState) -> Result<FlowDeriv> {
    let g = f.gradient(&state.primary);
    if !linalg::all_finite(&g) {
        return Err(Error::IntegrationDiverged { t: state.t });
    }
    let hj = f.hessian_vec(&state.primary, &state.secondary);
    let rs = s.sqrt();
    let grad_coeff = 1.0 + (mu * s).sqrt();
    let dj: Vec<f64> = state
        .secondary
        .iter()
        .zip(&hj)
        .zip(&g)
        .map(|((j, hji), gi)| -2.0 * mu.sqrt() * j - rs * hji - grad_coeff * gi)
        .collect();
    Ok(FlowDeriv { primary: state.secondary.clone(), secondary: dj })
}

/// Coefficients of the Hessian-damped triple-momentum flow. `m_big` is the
/// kappa-dependent constant M with mu <= M <= 1.3661 mu; `alpha` and `gamma`
/// come from the discrete coefficients; `s` records alpha as the effective
/// squared step.
#[derive(Clone, Copy, Debug)]
pub struct TmHrParams {
    pub m_big: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub xi: f64,
    pub s: f64,
}

impl TmHrParams {
    /// xi defaults to 2/3 (the value that optimizes the certified rate).
    pub fn new(f: &Objective, xi: f64) -> Result<Self> {
        let c = TmCoefficients::for_objective(f)?;
        let m_big = m_constant(f.mu(), f.lipschitz())?;
        Ok(Self { m_big, alpha: c.alpha, gamma: c.gamma, xi, s: c.alpha })
    }
}

/// dY = W; dW = -2 sqrt(M) W - gamma (1 + sqrt(M alpha)) sqrt(alpha) H(Y) W
///            - (1 + sqrt(M alpha)) grad f(Y).
pub fn hr_tm_rhs(f: &Objective, params: &TmHrParams, state: &FlowState) -> Result<FlowDeriv> {
    let g = f.gradient(&state.primary);
    if !linalg::all_finite(&g) {
        return Err(Error::IntegrationDiverged { t: state.t });
    }
    let hw = f.hessian_vec(&state.primary, &state.secondary);
    let root_ma = (params.m_big * params.alpha).sqrt();
    let hess_coeff = params.gamma * (1.0 + root_ma) * params.alpha.sqrt();
    let grad_coeff = 1.0 + root_ma;
    let dw: Vec<f64> = state
        .secondary
        .iter()
        .zip(&hw)
        .zip(&g)
        .map(|((w, hwi), gi)| {
            -2.0 * params.m_big.sqrt() * w - hess_coeff * hwi - grad_coeff * gi
        })
        .collect();
    Ok(FlowDeriv { primary: state.secondary.clone(), secondary: dw })
}

/// M = ((1 - beta) / (sqrt(alpha) (1 + beta)))^2 from the triple-momentum
/// coefficients. The value provably sits in [mu, 1.3661 mu]; leaving the band
/// is reported as an internal-consistency error rather than accepted.
pub fn m_constant(mu: f64, l: f64) -> Result<f64> {
    let c = TmCoefficients::new(mu, l)?;
    let m = ((1.0 - c.beta) / (c.alpha.sqrt() * (1.0 + c.beta))).powi(2);
    let slack = 1e-12 * mu;
    if m < mu - slack || m > 1.3661 * mu + slack {
        return Err(Error::InternalConsistency(format!(
            "M = {m} escapes the band [mu, 1.3661 mu] = [{mu}, {}]",
            1.3661 * mu
        )));
    }
    Ok(m)
}

/// Power-law damping family n(t) = p/t, q(t) = C p t^{p-1} for the convex
/// flows; singular at t = 0, integrated from t0 > 0.
#[derive(Clone, Copy, Debug)]
pub struct ConvexFlowParams {
    pub p_exp: f64,
    pub c: f64,
    pub s: f64,
    pub t0: f64,
}

impl ConvexFlowParams {
    pub fn new(p_exp: f64, c: f64, s: f64, t0: f64) -> Result<Self> {
        if !(p_exp >= 2.0) {
            return Err(Error::InadmissibleParameters(format!(
                "power exponent must be >= 2, got {p_exp}"
            )));
        }
        if !(c > 0.0) {
            return Err(Error::InadmissibleParameters(format!("C must be positive, got {c}")));
        }
        if !(s >= 0.0) {
            return Err(Error::InadmissibleParameters(format!("s must be >= 0, got {s}")));
        }
        if !(t0 > 0.0) {
            return Err(Error::SingularTime { t: t0, t0: 0.0 });
        }
        Ok(Self { p_exp, c, s, t0 })
    }

    pub fn n_of_t(&self, t: f64) -> f64 {
        self.p_exp / t
    }

    pub fn q_of_t(&self, t: f64) -> f64 {
        self.c * self.p_exp * t.powf(self.p_exp - 1.0)
    }

    /// (dq/dt n - dn/dt q) / (n^2 q); identically 1 for this family, kept in
    /// derivative form so the formula survives a family change.
    pub fn gradient_correction(&self, t: f64) -> f64 {
        let n = self.n_of_t(t);
        let q = self.q_of_t(t);
        let ndot = -self.p_exp / (t * t);
        let qdot = self.c * self.p_exp * (self.p_exp - 1.0) * t.powf(self.p_exp - 2.0);
        (qdot * n - ndot * q) / (n * n * q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvexFlowVariant {
    /// dV = -q(t) grad f(X)
    Laborde,
    /// dV = -q(t) grad f(X) - sqrt(s) ((q' n - n' q)/(n^2 q)) grad f(X);
    /// carries the faster certified rate.
    Shi,
}

/// dX = n(t)(V - X) - sqrt(s) grad f(X) plus the variant's dV.
pub fn convex_flow_rhs(
    f: &Objective,
    params: &ConvexFlowParams,
    state: &FlowState,
    variant: ConvexFlowVariant,
) -> Result<FlowDeriv> {
    if state.t < params.t0 {
        return Err(Error::SingularTime { t: state.t, t0: params.t0 });
    }
    let g = f.gradient(&state.primary);
    if !linalg::all_finite(&g) {
        return Err(Error::IntegrationDiverged { t: state.t });
    }
    let n = params.n_of_t(state.t);
    let q = params.q_of_t(state.t);
    let rs = params.s.sqrt();
    let dx: Vec<f64> = state
        .primary
        .iter()
        .zip(&state.secondary)
        .zip(&g)
        .map(|((x, v), gi)| n * (v - x) - rs * gi)
        .collect();
    let q_eff = match variant {
        ConvexFlowVariant::Laborde => q,
        ConvexFlowVariant::Shi => q + rs * params.gradient_correction(state.t),
    };
    let dv = linalg::scale(-q_eff, &g);
    Ok(FlowDeriv { primary: dx, secondary: dv })
}

/// Table rows of the strongly convex flow and their certified decay
/// exponents for the f-gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowPreset {
    GradientFlow,
    Polyak,
    HbOde,
    NagOde,
    /// Triple-momentum flow with the damping approximated as n = 2 sqrt(mu).
    HrTm2,
    /// Hessian-damped triple-momentum flow with xi = 2/3.
    HrTm,
}

pub fn flow_params(preset: FlowPreset, f: &Objective, s: f64) -> Result<Gm2Params> {
    let mu = f.mu();
    let need_mu = || -> Result<()> {
        if mu > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidPreset("flow preset needs mu > 0".into()))
        }
    };
    match preset {
        FlowPreset::GradientFlow => Gm2Params::new(1.0, 0.0, 1.0, 0.0),
        FlowPreset::Polyak => {
            need_mu()?;
            Gm2Params::new(0.0, mu.sqrt(), 1.0 / mu.sqrt(), mu.sqrt())
        }
        FlowPreset::HbOde => {
            need_mu()?;
            Gm2Params::new(0.0, mu.sqrt(), 1.0 / mu.sqrt() + s.sqrt(), mu.sqrt())
        }
        FlowPreset::NagOde => {
            need_mu()?;
            Gm2Params::new(s.sqrt(), mu.sqrt(), 1.0 / mu.sqrt(), mu.sqrt())
        }
        FlowPreset::HrTm2 => {
            need_mu()?;
            Gm2Params::new(s.sqrt(), 2.0 * mu.sqrt(), 1.0 / mu.sqrt(), mu.sqrt())
        }
        FlowPreset::HrTm => {
            need_mu()?;
            let tm = TmHrParams::new(f, 2.0 / 3.0)?;
            let root_ma = (tm.m_big * tm.alpha).sqrt();
            let n = (2.0 - tm.xi) * tm.m_big.sqrt();
            Gm2Params::new(
                tm.gamma * tm.alpha.sqrt() * (1.0 + root_ma),
                n,
                (1.0 - tm.xi * tm.gamma * root_ma) * (1.0 + root_ma) / n,
                tm.xi * tm.m_big.sqrt(),
            )
        }
    }
}

/// Certified exponential decay rate of f(X_t) - f* for each row.
pub fn flow_rate(preset: FlowPreset, f: &Objective) -> Result<f64> {
    let mu = f.mu();
    Ok(match preset {
        FlowPreset::GradientFlow => 2.0 * mu,
        FlowPreset::Polyak | FlowPreset::HbOde | FlowPreset::NagOde => mu.sqrt(),
        FlowPreset::HrTm2 => 2.0 * mu.sqrt(),
        FlowPreset::HrTm => {
            let m = m_constant(mu, f.lipschitz())?;
            (4.0 / 3.0) * m.sqrt()
        }
    })
}

/// One recorded point: the state plus the rhs evaluated there, so pointwise
/// Lyapunov evaluators see the exact velocity the flow defines.
#[derive(Clone, Debug)]
pub struct FlowSample {
    pub step: usize,
    pub state: FlowState,
    pub deriv: FlowDeriv,
}

/// Classical fixed-step fourth-order integration from state0 to t_end,
/// recording every `stride` steps (and the final step).
pub fn rk4_integrate<R>(
    mut rhs: R,
    state0: FlowState,
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<Vec<FlowSample>>
where
    R: FnMut(&FlowState) -> Result<FlowDeriv>,
{
    if !(dt > 0.0) {
        return Err(Error::InadmissibleParameters(format!("dt must be positive, got {dt}")));
    }
    if t_end <= state0.t {
        return Err(Error::InadmissibleParameters(format!(
            "t_end = {t_end} must exceed the initial time {}",
            state0.t
        )));
    }
    let stride = stride.max(1);
    let steps = ((t_end - state0.t) / dt).round().max(1.0) as usize;
    let mut samples = Vec::with_capacity(steps / stride + 2);
    let mut state = state0;
    let dim = state.primary.len();

    let record =
        |step: usize, state: &FlowState, rhs: &mut R, out: &mut Vec<FlowSample>| -> Result<()> {
            let deriv = rhs(state)?;
            out.push(FlowSample { step, state: state.clone(), deriv });
            Ok(())
        };
    record(0, &state, &mut rhs, &mut samples)?;

    for step in 0..steps {
        let t = state.t;
        let k1 = rhs(&state)?;
        let mid1 = advance(&state, dt / 2.0, &k1, t + dt / 2.0);
        let k2 = rhs(&mid1)?;
        let mid2 = advance(&state, dt / 2.0, &k2, t + dt / 2.0);
        let k3 = rhs(&mid2)?;
        let end = advance(&state, dt, &k3, t + dt);
        let k4 = rhs(&end)?;
        let mut primary = Vec::with_capacity(dim);
        let mut secondary = Vec::with_capacity(dim);
        for i in 0..dim {
            primary.push(
                state.primary[i]
                    + dt / 6.0
                        * (k1.primary[i]
                            + 2.0 * k2.primary[i]
                            + 2.0 * k3.primary[i]
                            + k4.primary[i]),
            );
            secondary.push(
                state.secondary[i]
                    + dt / 6.0
                        * (k1.secondary[i]
                            + 2.0 * k2.secondary[i]
                            + 2.0 * k3.secondary[i]
                            + k4.secondary[i]),
            );
        }
        let t_next = state.t + dt;
        if !(linalg::all_finite(&primary) && linalg::all_finite(&secondary)) {
            return Err(Error::IntegrationDiverged { t: state.t });
        }
        state = FlowState { primary, secondary, t: t_next };
        if (step + 1) % stride == 0 || step + 1 == steps {
            record(step + 1, &state, &mut rhs, &mut samples)?;
        }
    }
    Ok(samples)
}

fn advance(state: &FlowState, h: f64, d: &FlowDeriv, t: f64) -> FlowState {
    FlowState {
        primary: linalg::add_scaled(&state.primary, h, &d.primary),
        secondary: linalg::add_scaled(&state.secondary, h, &d.secondary),
        t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1_logistic() -> Objective {
        Objective::logistic_1d(1.0, 0.01).unwrap()
    }

    #[test]
    fn equilibrium_gives_zero_derivative() {
        let f = fig1_logistic();
        let xs = f.x_star().unwrap().to_vec();
        let params = flow_params(FlowPreset::NagOde, &f, 1.0).unwrap();
        let st = FlowState::new(xs.clone(), xs.clone(), 0.0).unwrap();
        let d = gm2_rhs(params, &f, &st).unwrap();
        assert!(linalg::norm(&d.primary) < 1e-9);
        assert!(linalg::norm(&d.secondary) < 1e-8);

        let st = FlowState::new(xs.clone(), vec![0.0], 0.0).unwrap();
        let d = phase_rhs_nag(&f, 1.0, f.mu(), &st).unwrap();
        assert!(linalg::norm(&d.secondary) < 1e-9);

        let tm = TmHrParams::new(&f, 2.0 / 3.0).unwrap();
        let d = hr_tm_rhs(&f, &tm, &st).unwrap();
        assert!(linalg::norm(&d.secondary) < 1e-9);
    }

    #[test]
    fn gradient_flow_row_is_plain_gradient_flow() {
        let f = Objective::quadratic(&[2.0]).unwrap();
        let params = flow_params(FlowPreset::GradientFlow, &f, 1.0).unwrap();
        let st = FlowState::new(vec![3.0], vec![0.0], 0.0).unwrap();
        let d = gm2_rhs(params, &f, &st).unwrap();
        assert_eq!(d.primary, vec![-6.0]);
    }

    #[test]
    fn nag_row_rhs_hand_value() {
        // 1-D quadratic a = mu: dX at (X, V) = (1, 0) is -sqrt(s)*mu - sqrt(mu)
        let mu = 0.04;
        let f = Objective::quadratic(&[mu]).unwrap();
        let s = 0.25;
        let params = flow_params(FlowPreset::NagOde, &f, s).unwrap();
        let st = FlowState::new(vec![1.0], vec![0.0], 0.0).unwrap();
        let d = gm2_rhs(params, &f, &st).unwrap();
        assert!((d.primary[0] - (-s.sqrt() * mu - mu.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn phase_rhs_reduces_to_polyak_at_zero_s() {
        let f = Objective::quadratic(&[1.0]).unwrap();
        let st = FlowState::new(vec![2.0], vec![-1.0], 0.0).unwrap();
        let d = phase_rhs_nag(&f, 0.0, 1.0, &st).unwrap();
        // dJ = -2J - Q
        assert!((d.secondary[0] - (2.0 - 2.0)).abs() < 1e-15);
        assert_eq!(d.primary, vec![-1.0]);
    }

    #[test]
    fn m_constant_band_and_kappa_one_identity() {
        assert!((m_constant(2.0, 2.0).unwrap() - 2.0).abs() < 1e-14);
        for kappa in [1.0, 10.0, 100.0, 1000.0] {
            let mu = 1.0 / kappa;
            let m = m_constant(mu, 1.0).unwrap();
            assert!(m >= mu - 1e-15 && m <= 1.3661 * mu + 1e-15, "kappa {kappa}: M {m}");
        }
    }

    #[test]
    fn rk4_matches_exact_exponential() {
        // gradient flow on a = 1 quadratic: x(t) = e^{-t}
        let f = Objective::quadratic(&[1.0]).unwrap();
        let params = flow_params(FlowPreset::GradientFlow, &f, 1.0).unwrap();
        let st = FlowState::new(vec![1.0], vec![0.0], 0.0).unwrap();
        let samples =
            rk4_integrate(|s| gm2_rhs(params, &f, s), st, 1.0, 0.01, 1).unwrap();
        let end = samples.last().unwrap();
        assert!((end.state.primary[0] - (-1.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let f = Objective::quadratic(&[1.0]).unwrap();
        let params = flow_params(FlowPreset::GradientFlow, &f, 1.0).unwrap();
        let run = |dt: f64| {
            let st = FlowState::new(vec![1.0], vec![0.0], 0.0).unwrap();
            let samples =
                rk4_integrate(|s| gm2_rhs(params, &f, s), st, 1.0, dt, usize::MAX).unwrap();
            (samples.last().unwrap().state.primary[0] - (-1.0f64).exp()).abs()
        };
        let e1 = run(0.02);
        let e2 = run(0.01);
        let ratio = e1 / e2;
        assert!((10.0..25.0).contains(&ratio), "error ratio {ratio}");
    }

    #[test]
    fn rk4_reports_divergence_time() {
        // explosive flow dx = +x^2-ish via unstable parameters
        let f = Objective::quadratic(&[1.0]).unwrap();
        let st = FlowState::new(vec![1e154], vec![1e154], 0.0).unwrap();
        let params = Gm2Params::new(0.0, 1e3, 1e3, 0.0).unwrap();
        let r = rk4_integrate(|s| gm2_rhs(params, &f, s), st, 10.0, 0.5, 1);
        assert!(matches!(r, Err(Error::IntegrationDiverged { .. })));
    }

    #[test]
    fn convex_flow_correction_is_unity_for_power_family() {
        for p_exp in [2.0, 3.0, 4.5] {
            let params = ConvexFlowParams::new(p_exp, 0.25, 0.01, 0.5).unwrap();
            for t in [0.7, 2.0, 31.0] {
                assert!((params.gradient_correction(t) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn convex_flow_variants_differ_by_sqrt_s_gradient() {
        let f = Objective::quadratic(&[1.0, 0.2]).unwrap();
        let params = ConvexFlowParams::new(2.0, 0.25, 0.01, 0.5).unwrap();
        let st = FlowState::new(vec![1.0, 2.0], vec![0.0, 0.0], 2.0).unwrap();
        let lab = convex_flow_rhs(&f, &params, &st, ConvexFlowVariant::Laborde).unwrap();
        let shi = convex_flow_rhs(&f, &params, &st, ConvexFlowVariant::Shi).unwrap();
        let g = f.gradient(&st.primary);
        for i in 0..2 {
            assert!((lab.primary[i] - shi.primary[i]).abs() < 1e-15);
            assert!((shi.secondary[i] - (lab.secondary[i] - 0.1 * g[i])).abs() < 1e-15);
        }
        // n(2) = 1, q(2) = 1: dV_laborde = -grad
        assert!((lab.secondary[0] + g[0]).abs() < 1e-15);
        // stationarity
        let xs = FlowState::new(vec![0.0, 0.0], vec![0.0, 0.0], 2.0).unwrap();
        let d = convex_flow_rhs(&f, &params, &xs, ConvexFlowVariant::Shi).unwrap();
        assert_eq!(linalg::norm(&d.primary), 0.0);
        assert_eq!(linalg::norm(&d.secondary), 0.0);
    }

    #[test]
    fn convex_flow_rejects_singular_time() {
        let f = Objective::quadratic(&[1.0]).unwrap();
        let params = ConvexFlowParams::new(2.0, 0.25, 0.01, 1.0).unwrap();
        let st = FlowState::new(vec![1.0], vec![1.0], 0.5).unwrap();
        assert!(matches!(
            convex_flow_rhs(&f, &params, &st, ConvexFlowVariant::Laborde),
            Err(Error::SingularTime { .. })
        ));
    }

    /// Dual-route check of the one-line forms: integrating the first-order
    /// pair must match integrating the second-order scalar form whose
    /// gradient coefficient is (C p^2 t^{p-2} + sqrt(s)/t) for the plain
    /// variant and (C p^2 t^{p-2} + 3 sqrt(s)/t) for the corrected one at
    /// p = 2.
    #[test]
    fn convex_flow_one_line_coefficients() {
        let f = Objective::quadratic(&[1.0]).unwrap();
        let s = 0.04;
        let params = ConvexFlowParams::new(2.0, 0.25, s, 1.0).unwrap();
        for (variant, extra) in
            [(ConvexFlowVariant::Laborde, 1.0), (ConvexFlowVariant::Shi, 3.0)]
        {
            let x0 = FlowState::new(vec![1.0], vec![1.0], 1.0).unwrap();
            let d0 = convex_flow_rhs(&f, &params, &x0, variant).unwrap();
            let pair = rk4_integrate(
                |st| convex_flow_rhs(&f, &params, st, variant),
                x0.clone(),
                6.0,
                1e-3,
                1000,
            )
            .unwrap();
            // second-order form integrated in phase space
            let second = rk4_integrate(
                |st: &FlowState| {
                    let t = st.t;
                    let g = f.gradient(&st.primary);
                    let h = f.hessian_vec(&st.primary, &st.secondary);
                    let dj: Vec<f64> = st
                        .secondary
                        .iter()
                        .zip(&h)
                        .zip(&g)
                        .map(|((j, hi), gi)| {
                            -(3.0 / t) * j
                                - s.sqrt() * hi
                                - (1.0 + extra * s.sqrt() / t) * gi
                        })
                        .collect();
                    Ok(FlowDeriv { primary: st.secondary.clone(), secondary: dj })
                },
                FlowState::new(x0.primary.clone(), d0.primary.clone(), 1.0).unwrap(),
                6.0,
                1e-3,
                1000,
            )
            .unwrap();
            for (a, b) in pair.iter().zip(&second) {
                assert!(
                    (a.state.primary[0] - b.state.primary[0]).abs() < 1e-7,
                    "variant {variant:?} t = {}: {} vs {}",
                    a.state.t,
                    a.state.primary[0],
                    b.state.primary[0]
                );
            }
        }
    }
}
