//! Lyapunov (energy) evaluators for every convergence certificate in the
//! library, and a decay certifier that turns a recorded energy series into a
//! pass/fail verdict.
//!
//! Continuous evaluators are pointwise: they take the state and the velocity
//! the flow assigns to it (the integrator's rhs at the recorded state, never
//! a finite difference of the trajectory).

use crate::error::{Error, Result};
use crate::flows::{ConvexFlowParams, ConvexFlowVariant, FlowState};
use crate::gm2::{Gm2Params, Gm2State};
use crate::linalg;
use crate::objectives::Objective;

/// A nonnegative energy with a labeled breakdown; `value` is always the sum
/// of the component entries.
#[derive(Clone, Debug)]
pub struct LyapunovValue {
    pub value: f64,
    pub components: Vec<(&'static str, f64)>,
}

impl LyapunovValue {
    fn from_components(components: Vec<(&'static str, f64)>) -> Self {
        let value = components.iter().map(|(_, v)| v).sum();
        Self { value, components }
    }
}

fn optimum(f: &Objective) -> Result<(&[f64], f64)> {
    let xs = f.x_star().ok_or_else(|| Error::MissingOptimum("x_star".into()))?;
    let fs = f.f_star().ok_or_else(|| Error::MissingOptimum("f_star".into()))?;
    Ok((xs, fs))
}

/// Energy of the strongly convex flow under n = q <= p mu:
/// f(X) - f* + (q/2p) ||V - x*||^2, contracting like e^{-qt}.
pub fn lyap_cont_a(params: Gm2Params, f: &Objective, state: &FlowState) -> Result<LyapunovValue> {
    if !(params.p > 0.0) {
        return Err(Error::InadmissibleParameters("p must be positive".into()));
    }
    let (xs, fs) = optimum(f)?;
    let f_gap = f.value(&state.primary) - fs;
    let quad = params.q / (2.0 * params.p) * linalg::dist_sq(&state.secondary, xs);
    Ok(LyapunovValue::from_components(vec![("f_gap", f_gap), ("v_dist", quad)]))
}

/// Hypotheses of part (b): n <= 2q <= 2 p mu and m <= 2p. Comparisons carry
/// one part in 1e12 of slack so parameter rows that satisfy a hypothesis
/// with equality in exact arithmetic (the triple-momentum row has n = 2q)
/// are not rejected over the last bit.
pub fn variant_b_hypotheses(params: Gm2Params, f: &Objective) -> bool {
    let le = |a: f64, b: f64| a <= b * (1.0 + 1e-12);
    le(params.n, 2.0 * params.q)
        && le(params.q, params.p * f.mu())
        && le(params.m, 2.0 * params.p)
}

/// Energy of the strongly convex flow under n <= 2q <= 2 p mu, m <= 2p:
/// f(X) - f* - ((n-q)/2p) ||X - x*||^2 + (n/2p) ||V - x*||^2, contracting
/// like e^{-nt}. Strong convexity keeps it nonnegative under the hypotheses.
pub fn lyap_cont_b(params: Gm2Params, f: &Objective, state: &FlowState) -> Result<LyapunovValue> {
    if !(params.p > 0.0) {
        return Err(Error::InadmissibleParameters("p must be positive".into()));
    }
    let (xs, fs) = optimum(f)?;
    let f_gap = f.value(&state.primary) - fs;
    let x_term =
        -(params.n - params.q) / (2.0 * params.p) * linalg::dist_sq(&state.primary, xs);
    let v_term = params.n / (2.0 * params.p) * linalg::dist_sq(&state.secondary, xs);
    Ok(LyapunovValue::from_components(vec![
        ("f_gap", f_gap),
        ("x_dist", x_term),
        ("v_dist", v_term),
    ]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HrodeVariant {
    A,
    B,
}

/// Scaling conditions under which the corresponding energy decays.
pub fn hrode_scaling_ok(
    variant: HrodeVariant,
    alpha: f64,
    beta_dot: f64,
    c: f64,
    s: f64,
    mu: f64,
) -> bool {
    let ea = alpha.exp();
    match variant {
        HrodeVariant::A => 0.0 <= beta_dot && beta_dot <= ea && ea <= mu / c,
        HrodeVariant::B => {
            ea <= 2.0 * beta_dot && beta_dot <= mu / c && c * s.sqrt() <= 2.0
        }
    }
}

/// Pointwise energy of the general damped flow. The caller supplies the time
/// weight (e^{beta_t} for variant A, e^{gamma_t} for variant B); the
/// evaluator never integrates.
///
/// Variant A: w ((C e^a / 2) ||X - x* + e^{-a} dX + sqrt(s) e^{-a} grad||^2
///               + f - f*).
/// Variant B adds -C (e^a - beta')/2 ||X - x*||^2 inside the weight.
#[allow(clippy::too_many_arguments)]
pub fn lyap_hrode(
    alpha: f64,
    beta_dot: f64,
    c: f64,
    s: f64,
    f: &Objective,
    x: &[f64],
    dx: &[f64],
    variant: HrodeVariant,
    gamma_weight: f64,
) -> Result<LyapunovValue> {
    let (xs, fs) = optimum(f)?;
    let ea = alpha.exp();
    let g = f.gradient(x);
    let mut shifted = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        shifted.push(x[i] - xs[i] + dx[i] / ea + s.sqrt() * g[i] / ea);
    }
    let quad = gamma_weight * c * ea / 2.0 * linalg::norm_sq(&shifted);
    let f_gap = gamma_weight * (f.value(x) - fs);
    let mut components = vec![("quadratic", quad), ("f_gap", f_gap)];
    if variant == HrodeVariant::B {
        let x_term = -gamma_weight * c * (ea - beta_dot) / 2.0 * linalg::dist_sq(x, xs);
        components.push(("x_dist", x_term));
    }
    Ok(LyapunovValue::from_components(components))
}

/// Energy of the convex flows along the power family. The plain variant
/// weighs the gap by e^{beta_t} = q(t)/n(t); the corrected variant by
/// e^{beta_t} + sqrt(s) e^{-2 alpha_t} beta'_t, which is strictly larger
/// whenever beta' > 0 and s > 0 and therefore certifies a faster rate.
pub fn lyap_flow_convex(
    f: &Objective,
    params: &ConvexFlowParams,
    x: &[f64],
    dx: &[f64],
    t: f64,
    variant: ConvexFlowVariant,
) -> Result<LyapunovValue> {
    if t < params.t0 {
        return Err(Error::SingularTime { t, t0: params.t0 });
    }
    let (xs, fs) = optimum(f)?;
    let n = params.n_of_t(t);
    let g = f.gradient(x);
    let mut shifted = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        shifted.push(x[i] + dx[i] / n - xs[i] + params.s.sqrt() * g[i] / n);
    }
    let weight = match variant {
        ConvexFlowVariant::Laborde => params.q_of_t(t) / n,
        ConvexFlowVariant::Shi => {
            let beta_dot = params.p_exp / t; // d/dt log(C t^p)
            params.q_of_t(t) / n + params.s.sqrt() * beta_dot / (n * n)
        }
    };
    Ok(LyapunovValue::from_components(vec![
        ("quadratic", 0.5 * linalg::norm_sq(&shifted)),
        ("f_gap", weight * (f.value(x) - fs)),
    ]))
}

/// Discrete energy of the semi-implicit iteration:
/// f(x_k) - f* + (n/2p) ||v_k - x*||^2 - (n p s / 2) ||grad f(x_k)||^2.
/// Positive whenever n p s L <= 1.
pub fn lyap_disc_sc(
    params: Gm2Params,
    s: f64,
    f: &Objective,
    state: &Gm2State,
) -> Result<LyapunovValue> {
    if !(params.p > 0.0) {
        return Err(Error::InadmissibleParameters("p must be positive".into()));
    }
    let (xs, fs) = optimum(f)?;
    let f_gap = f.value(&state.x) - fs;
    let v_term = params.n / (2.0 * params.p) * linalg::dist_sq(&state.v, xs);
    let g_term =
        -params.n * params.p * s / 2.0 * linalg::norm_sq(&f.gradient(&state.x));
    Ok(LyapunovValue::from_components(vec![
        ("f_gap", f_gap),
        ("v_dist", v_term),
        ("grad_norm", g_term),
    ]))
}

/// Discrete energy of the convex-regime iteration at index k, evaluated from
/// two consecutive iterates:
/// (s (k+2) k / 4)(f(x_k) - f*)
///   + 1/2 ||x_{k+1} - x* + (k/2)(x_{k+1} - x_k) + (k s / 2) grad f(x_k)||^2.
pub fn lyap_disc_cvx(
    s: f64,
    f: &Objective,
    x_k: &[f64],
    x_k1: &[f64],
    k: usize,
) -> Result<LyapunovValue> {
    let (xs, fs) = optimum(f)?;
    let kf = k as f64;
    let f_gap = s * (kf + 2.0) * kf / 4.0 * (f.value(x_k) - fs);
    let g = f.gradient(x_k);
    let mut shifted = Vec::with_capacity(x_k.len());
    for i in 0..x_k.len() {
        shifted.push(
            x_k1[i] - xs[i] + kf / 2.0 * (x_k1[i] - x_k[i]) + kf * s / 2.0 * g[i],
        );
    }
    Ok(LyapunovValue::from_components(vec![
        ("f_gap", f_gap),
        ("quadratic", 0.5 * linalg::norm_sq(&shifted)),
    ]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayMode {
    /// Per-step check eps(k+1) <= ratio * eps(k) + tol * |eps(k)|.
    Geometric,
    /// OLS fit of log eps against t; passes when the slope is at most
    /// -rate (1 - tol).
    Exponential,
}

/// Outcome of a decay certification.
///
/// Geometric mode: `worst_ratio` is the largest observed per-step ratio and
/// `fitted_rate` the geometric mean ratio. Exponential mode: `fitted_rate`
/// is the negated OLS slope and `worst_ratio` the slowest per-interval
/// empirical rate.
#[derive(Clone, Debug)]
pub struct DecayReport {
    pub passed: bool,
    pub worst_ratio: f64,
    pub worst_index: usize,
    pub fitted_rate: f64,
    pub theoretical_rate: f64,
}

/// Certify decay of an energy series sampled as (t, value) pairs. Geometric
/// mode ignores the abscissae and checks consecutive ratios; exponential
/// mode fits the log series against t.
pub fn certify_decay(
    series: &[(f64, f64)],
    ratio_or_rate: f64,
    mode: DecayMode,
    tol: f64,
) -> Result<DecayReport> {
    if series.len() < 2 {
        return Err(Error::EmptySeries);
    }
    for (i, (t, v)) in series.iter().enumerate() {
        if !(t.is_finite() && v.is_finite()) {
            return Err(Error::NumericalFailure {
                iteration: i,
                message: "non-finite series entry".into(),
            });
        }
    }
    match mode {
        DecayMode::Geometric => {
            let mut passed = true;
            let mut worst_ratio = f64::NEG_INFINITY;
            let mut worst_index = 0;
            let mut log_sum = 0.0;
            let mut log_count = 0usize;
            for (i, w) in series.windows(2).enumerate() {
                let (v0, v1) = (w[0].1, w[1].1);
                if v1 > ratio_or_rate * v0 + tol * v0.abs() {
                    passed = false;
                }
                let ratio = if v0 != 0.0 {
                    v1 / v0
                } else if v1 == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                };
                if ratio > worst_ratio {
                    worst_ratio = ratio;
                    worst_index = i;
                }
                if v0 > 0.0 && v1 > 0.0 {
                    log_sum += (v1 / v0).ln();
                    log_count += 1;
                }
            }
            let fitted_rate = if log_count > 0 {
                (log_sum / log_count as f64).exp()
            } else {
                0.0
            };
            Ok(DecayReport {
                passed,
                worst_ratio,
                worst_index,
                fitted_rate,
                theoretical_rate: ratio_or_rate,
            })
        }
        DecayMode::Exponential => {
            let positive: Vec<(f64, f64)> =
                series.iter().filter(|(_, v)| *v > 0.0).cloned().collect();
            if positive.len() < 2 {
                // the series already collapsed to zero: any rate is certified
                return Ok(DecayReport {
                    passed: true,
                    worst_ratio: 0.0,
                    worst_index: 0,
                    fitted_rate: f64::INFINITY,
                    theoretical_rate: ratio_or_rate,
                });
            }
            let ts: Vec<f64> = positive.iter().map(|(t, _)| *t).collect();
            let logs: Vec<f64> = positive.iter().map(|(_, v)| v.ln()).collect();
            let slope = linalg::ols_slope(&ts, &logs);
            let fitted_rate = -slope;
            let mut worst_ratio = f64::INFINITY;
            let mut worst_index = 0;
            for (i, w) in positive.windows(2).enumerate() {
                let dt = w[1].0 - w[0].0;
                if dt > 0.0 {
                    let r = -(w[1].1.ln() - w[0].1.ln()) / dt;
                    if r < worst_ratio {
                        worst_ratio = r;
                        worst_index = i;
                    }
                }
            }
            Ok(DecayReport {
                passed: fitted_rate >= ratio_or_rate * (1.0 - tol),
                worst_ratio,
                worst_index,
                fitted_rate,
                theoretical_rate: ratio_or_rate,
            })
        }
    }
}
