//! The four-parameter momentum family in discrete time.
//!
//! One parameter set (m, n, p, q) drives both the semi-implicit iteration
//! here and the continuous flow in [`crate::flows`]; presets recover the
//! classical methods exactly (see [`preset`]).
//!
//! Semi-implicit update with step sqrt(s):
//!
//! ```text
//! x_{k+1} = (x_k - m sqrt(s) grad f(x_k) + n sqrt(s) v_k) / (1 + n sqrt(s))
//! v_{k+1} = v_k - p sqrt(s) grad f(x_{k+1}) - q sqrt(s) (v_k - x_{k+1})
//! ```
//!
//! The x-update is implicit as written in two-line form; because it is linear
//! in x_{k+1} the (1 + n sqrt(s)) divide resolves it in closed form, so no
//! inner solve is ever needed.

use crate::error::{Error, Result};
use crate::linalg;
use crate::objectives::Objective;

/// Squared step s; the iteration uses sqrt(s).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepSize(f64);

impl StepSize {
    pub fn new(s: f64) -> Result<Self> {
        if s > 0.0 && s.is_finite() {
            Ok(Self(s))
        } else {
            Err(Error::InadmissibleParameters(format!("step size s must be positive, got {s}")))
        }
    }

    pub fn s(self) -> f64 {
        self.0
    }

    pub fn sqrt_s(self) -> f64 {
        self.0.sqrt()
    }
}

/// Non-negative coefficients (m, n, p, q) shared by the flow and the
/// iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gm2Params {
    pub m: f64,
    pub n: f64,
    pub p: f64,
    pub q: f64,
}

impl Gm2Params {
    pub fn new(m: f64, n: f64, p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("n", n), ("p", p), ("q", q)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InadmissibleParameters(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(Self { m, n, p, q })
    }

    /// Hypotheses of the geometric-contraction certificate for the semi-implicit
    /// iteration: q/p <= mu, 0 <= n p s <= m sqrt(s) <= 1/L, 0 <= q sqrt(s) < 1,
    /// p > 0 and n = q. Returns every violated constraint by name.
    pub fn contraction_violations(&self, f: &Objective, s: StepSize) -> Vec<String> {
        let Self { m, n, p, q } = *self;
        let rs = s.sqrt_s();
        let mut out = Vec::new();
        if !(p > 0.0) {
            out.push(format!("p > 0 (p = {p})"));
            return out;
        }
        if q / p > f.mu() {
            out.push(format!("q/p <= mu ({} > {})", q / p, f.mu()));
        }
        if n * p * s.s() > m * rs {
            out.push(format!("n p s <= m sqrt(s) ({} > {})", n * p * s.s(), m * rs));
        }
        if m * rs > 1.0 / f.lipschitz() {
            out.push(format!("m sqrt(s) <= 1/L ({} > {})", m * rs, 1.0 / f.lipschitz()));
        }
        if q * rs >= 1.0 {
            out.push(format!("q sqrt(s) < 1 ({})", q * rs));
        }
        if n != q {
            out.push(format!("n = q ({n} != {q})"));
        }
        out
    }

    pub fn contraction_admissible(&self, f: &Objective, s: StepSize) -> bool {
        self.contraction_violations(f, s).is_empty()
    }
}

/// Paired iterate of the discrete methods.
#[derive(Clone, Debug, PartialEq)]
pub struct Gm2State {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub k: usize,
}

impl Gm2State {
    pub fn new(x: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if x.len() != v.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), got: v.len() });
        }
        Ok(Self { x, v, k: 0 })
    }
}

fn check_gradient(g: &[f64], k: usize) -> Result<()> {
    if linalg::all_finite(g) {
        Ok(())
    } else {
        Err(Error::NumericalFailure { iteration: k, message: "non-finite gradient".into() })
    }
}

/// One semi-implicit step. Exactly one gradient evaluation at x_k and one at
/// x_{k+1}.
pub fn gm2_step(
    params: Gm2Params,
    s: StepSize,
    f: &Objective,
    state: &Gm2State,
) -> Result<Gm2State> {
    let Gm2Params { m, n, p, q } = params;
    let rs = s.sqrt_s();
    let g0 = f.gradient(&state.x);
    check_gradient(&g0, state.k)?;
    let denom = 1.0 + n * rs;
    let x1: Vec<f64> = state
        .x
        .iter()
        .zip(&state.v)
        .zip(&g0)
        .map(|((xi, vi), gi)| (xi - m * rs * gi + n * rs * vi) / denom)
        .collect();
    let g1 = f.gradient(&x1);
    check_gradient(&g1, state.k + 1)?;
    let v1: Vec<f64> = state
        .v
        .iter()
        .zip(&x1)
        .zip(&g1)
        .map(|((vi, xi), gi)| vi - p * rs * gi - q * rs * (vi - xi))
        .collect();
    Ok(Gm2State { x: x1, v: v1, k: state.k + 1 })
}

/// Fully explicit variant: both update lines use the gradient at x_k. One
/// gradient evaluation per step.
pub fn ee_step(
    params: Gm2Params,
    s: StepSize,
    f: &Objective,
    state: &Gm2State,
) -> Result<Gm2State> {
    let Gm2Params { m, n, p, q } = params;
    let rs = s.sqrt_s();
    let g0 = f.gradient(&state.x);
    check_gradient(&g0, state.k)?;
    let x1: Vec<f64> = state
        .x
        .iter()
        .zip(&state.v)
        .zip(&g0)
        .map(|((xi, vi), gi)| xi - m * rs * gi - n * rs * (xi - vi))
        .collect();
    let v1: Vec<f64> = state
        .v
        .iter()
        .zip(&state.x)
        .zip(&g0)
        .map(|((vi, xi), gi)| vi - p * rs * gi - q * rs * (vi - xi))
        .collect();
    Ok(Gm2State { x: x1, v: v1, k: state.k + 1 })
}

/// Coefficients of the equivalent two-term recursion
/// x_{k+1} = x_k + c_mom (x_k - x_{k-1}) - c_grad grad f(x_k)
///               + c_gradprev grad f(x_{k-1}).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OneLineCoeffs {
    pub c_mom: f64,
    pub c_grad: f64,
    pub c_gradprev: f64,
}

pub fn gm2_one_line_coeffs(params: Gm2Params, s: StepSize) -> OneLineCoeffs {
    let Gm2Params { m, n, p, q } = params;
    let rs = s.sqrt_s();
    let denom = 1.0 + n * rs;
    OneLineCoeffs {
        c_mom: (1.0 - q * rs) / denom,
        c_grad: (m * rs + n * p * s.s()) / denom,
        c_gradprev: m * rs * (1.0 - q * rs) / denom,
    }
}

/// One-line coefficients of the explicit variant (used by the EE<->SIE
/// equivalence tests).
pub fn ee_one_line_coeffs(params: Gm2Params, s: StepSize) -> OneLineCoeffs {
    let Gm2Params { m, n, p, q } = params;
    let rs = s.sqrt_s();
    OneLineCoeffs {
        c_mom: 1.0 - q * rs - n * rs,
        c_grad: m * rs,
        c_gradprev: m * rs * (1.0 - q * rs) - n * p * s.s(),
    }
}

/// Map semi-implicit coefficients to the explicit coefficients that generate
/// the identical x-sequence: n' = n(1 - q sqrt(s))/(1 + n sqrt(s)),
/// m' = (m + n p sqrt(s))/(1 + n sqrt(s)); p and q carry over.
pub fn ee_params_from_sie(sie: Gm2Params, s: StepSize) -> Gm2Params {
    let rs = s.sqrt_s();
    let denom = 1.0 + sie.n * rs;
    Gm2Params {
        m: (sie.m + sie.n * sie.p * rs) / denom,
        n: (sie.n - sie.q * sie.n * rs) / denom,
        p: sie.p,
        q: sie.q,
    }
}

/// v0 = x0 - (m/n) grad f(x0), the initialization under which the discrete
/// contraction guarantee is stated. Undefined for n = 0 (gradient descent /
/// decoupled x), where the caller must pick v0 itself.
pub fn initial_v(x0: &[f64], params: Gm2Params, f: &Objective) -> Result<Vec<f64>> {
    if params.n == 0.0 {
        return Err(Error::InitializationUndefined(
            "n = 0: supply v0 explicitly".into(),
        ));
    }
    let g = f.gradient(x0);
    check_gradient(&g, 0)?;
    Ok(linalg::add_scaled(x0, -params.m / params.n, &g))
}

/// v0 for an explicit-variant run mapped from semi-implicit parameters:
/// v0 = x0 - (m/n - 2 q p s / (n sqrt(s) (1 + q sqrt(s)))) grad f(x0),
/// where m and n are the explicit coefficients. With this start the mapped
/// explicit run reproduces the semi-implicit x-sequence exactly.
pub fn ee_initial_v(x0: &[f64], ee: Gm2Params, s: StepSize, f: &Objective) -> Result<Vec<f64>> {
    if ee.n == 0.0 {
        return Err(Error::InitializationUndefined(
            "n = 0: supply v0 explicitly".into(),
        ));
    }
    let rs = s.sqrt_s();
    let coeff = ee.m / ee.n - 2.0 * ee.q * ee.p * s.s() / (ee.n * rs * (1.0 + ee.q * rs));
    let g = f.gradient(x0);
    check_gradient(&g, 0)?;
    Ok(linalg::add_scaled(x0, -coeff, &g))
}

/// Named parameter rows recovering the classical methods.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MethodPreset {
    /// n = 0, m = 1: the x-line is plain gradient descent with step sqrt(s).
    Gd,
    Polyak,
    HeavyBall,
    Nag,
    TripleMomentum,
    /// Quasi-hyperbolic momentum with instant-discount weight a.
    Qhm { a: f64 },
    /// Hessian-free accelerated variant; admissible when
    /// gamma = mu (1 - alpha) with alpha >= sqrt(mu/L).
    HNag { gamma: f64, alpha: f64, beta: f64 },
}

/// Parameter rows for the classical methods. Strongly convex presets insist
/// on mu > 0.
pub fn preset(method: MethodPreset, f: &Objective, s: StepSize) -> Result<Gm2Params> {
    let mu = f.mu();
    let l = f.lipschitz();
    let rs = s.sqrt_s();
    let need_mu = |name: &str| -> Result<()> {
        if mu > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidPreset(format!("{name} needs mu > 0")))
        }
    };
    match method {
        MethodPreset::Gd => Gm2Params::new(1.0, 0.0, 1.0, 0.0),
        MethodPreset::Polyak => {
            need_mu("Polyak")?;
            Gm2Params::new(0.0, mu.sqrt(), 1.0 / mu.sqrt(), mu.sqrt())
        }
        MethodPreset::HeavyBall => {
            need_mu("heavy-ball")?;
            let alpha = (1.0 - (mu * s.s()).sqrt()) / (1.0 + (mu * s.s()).sqrt());
            let n = (1.0 - alpha) / (rs * (1.0 + alpha));
            Gm2Params::new(0.0, n, 1.0 / n + rs, n)
        }
        MethodPreset::Nag => {
            need_mu("NAG")?;
            Gm2Params::new(rs, mu.sqrt(), 1.0 / mu.sqrt(), mu.sqrt())
        }
        MethodPreset::TripleMomentum => {
            need_mu("triple momentum")?;
            if mu >= l {
                return Err(Error::InvalidPreset(
                    "triple momentum needs mu < L".into(),
                ));
            }
            let n = 2.0 * (mu * l).sqrt() / (l.sqrt() - mu.sqrt());
            Gm2Params::new(1.0 / l.sqrt(), n, 1.0 / mu.sqrt(), mu.sqrt())
        }
        MethodPreset::Qhm { a } => {
            need_mu("QHM")?;
            Ok(crate::classic::qhm_params_map(a, f, s.s())?.0)
        }
        MethodPreset::HNag { gamma, alpha, beta } => {
            need_mu("H-NAG")?;
            crate::classic::hnag_check(gamma, alpha, beta, f, s.s())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1_logistic() -> Objective {
        Objective::logistic_1d(1.0, 0.01).unwrap()
    }

    #[test]
    fn fixed_point_stays_fixed() {
        let f = Objective::quadratic(&[0.5, 2.0]).unwrap();
        let s = StepSize::new(0.25).unwrap();
        let params = preset(MethodPreset::Nag, &f, s).unwrap();
        let xs = f.x_star().unwrap().to_vec();
        let state = Gm2State::new(xs.clone(), xs.clone()).unwrap();
        let next = gm2_step(params, s, &f, &state).unwrap();
        assert_eq!(next.x, xs);
        assert_eq!(next.v, xs);
        let next = ee_step(params, s, &f, &state).unwrap();
        assert_eq!(next.x, xs);
        assert_eq!(next.v, xs);
    }

    #[test]
    fn hand_evaluated_step_on_critical_quadratic() {
        // a = 1, s = 0.25, critical row n = q = 1, np = 1, m = sqrt(s)
        let f = Objective::quadratic(&[1.0]).unwrap();
        let s = StepSize::new(0.25).unwrap();
        let params = Gm2Params::new(0.5, 1.0, 1.0, 1.0).unwrap();
        let v0 = initial_v(&[1.0], params, &f).unwrap();
        assert_eq!(v0, vec![0.5]);
        let state = Gm2State::new(vec![1.0], v0).unwrap();
        let next = gm2_step(params, s, &f, &state).unwrap();
        // x1 = (1 - 0.5*0.5*1 + 0.5*0.5) / 1.5 = 1/1.5
        let x1 = (1.0 - 0.25 + 0.25) / 1.5;
        assert_eq!(next.x[0], x1);
        // v1 = v0 - 0.5*x1 - 0.5*(v0 - x1)
        assert_eq!(next.v[0], 0.5 - 0.5 * x1 - 0.5 * (0.5 - x1));
    }

    #[test]
    fn one_line_coeffs_limits_and_values() {
        let f = fig1_logistic();
        let tiny = StepSize::new(1e-30).unwrap();
        let params = preset(MethodPreset::Nag, &f, tiny).unwrap();
        let c = gm2_one_line_coeffs(params, tiny);
        assert!((c.c_mom - 1.0).abs() < 1e-12);
        assert!(c.c_grad.abs() < 1e-12);
        assert!(c.c_gradprev.abs() < 1e-12);

        // NAG row at mu = 0.01, s = 0.1: (1 - 0.1 sqrt(0.1)) / (1 + 0.1 sqrt(0.1))
        let s = StepSize::new(0.1).unwrap();
        let params = preset(MethodPreset::Nag, &f, s).unwrap();
        let c = gm2_one_line_coeffs(params, s);
        assert!((c.c_mom - 0.938_693_139_936_568_9).abs() < 1e-15);
    }

    #[test]
    fn one_line_recursion_reproduces_two_line_iterates() {
        let f = fig1_logistic();
        let s = StepSize::new(0.5).unwrap();
        let params = preset(MethodPreset::Nag, &f, s).unwrap();
        let x0 = vec![3.0];
        let v0 = initial_v(&x0, params, &f).unwrap();
        let mut state = Gm2State::new(x0.clone(), v0).unwrap();
        let s1 = gm2_step(params, s, &f, &state).unwrap();
        let s2 = gm2_step(params, s, &f, &s1).unwrap();
        state = s1.clone();
        let _ = state;

        let c = gm2_one_line_coeffs(params, s);
        let g1 = f.gradient(&s1.x);
        let g0 = f.gradient(&x0);
        let x2_oneline =
            s1.x[0] + c.c_mom * (s1.x[0] - x0[0]) - c.c_grad * g1[0] + c.c_gradprev * g0[0];
        let rel = (x2_oneline - s2.x[0]).abs() / s2.x[0].abs().max(1.0);
        assert!(rel < 1e-13, "rel {rel}");
    }

    #[test]
    fn ee_reduces_to_gradient_descent_without_coupling() {
        let f = Objective::quadratic(&[2.0]).unwrap();
        let s = StepSize::new(0.04).unwrap();
        let params = Gm2Params::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let state = Gm2State::new(vec![1.0], vec![5.0]).unwrap();
        let next = ee_step(params, s, &f, &state).unwrap();
        // x1 = x0 - m sqrt(s) * grad = 1 - 0.2*2
        assert!((next.x[0] - 0.6).abs() < 1e-15);
        assert_eq!(next.v[0], 5.0);
    }

    #[test]
    fn ee_map_is_identity_at_zero_step_limit() {
        let sie = Gm2Params::new(0.3, 0.2, 5.0, 0.2).unwrap();
        let s = StepSize::new(1e-30).unwrap();
        let ee = ee_params_from_sie(sie, s);
        assert!((ee.m - sie.m).abs() < 1e-14);
        assert!((ee.n - sie.n).abs() < 1e-14);
    }

    #[test]
    fn ee_map_matches_hand_values_for_nag_row() {
        // mu = 0.01, s = 0.1
        let sie = Gm2Params::new(0.1f64.sqrt(), 0.1, 10.0, 0.1).unwrap();
        let s = StepSize::new(0.1).unwrap();
        let ee = ee_params_from_sie(sie, s);
        assert!((ee.n - 0.093_869_313_993_656_89).abs() < 1e-15, "n_EE {}", ee.n);
        assert!((ee.m - 0.613_068_600_634_310_1).abs() < 1e-15, "m_EE {}", ee.m);
        assert_eq!(ee.p, sie.p);
        assert_eq!(ee.q, sie.q);
    }

    #[test]
    fn mapped_ee_coeffs_equal_sie_coeffs() {
        let s = StepSize::new(0.37).unwrap();
        let sie = Gm2Params::new(0.21, 0.4, 2.5, 0.4).unwrap();
        let ee = ee_params_from_sie(sie, s);
        let a = gm2_one_line_coeffs(sie, s);
        let b = ee_one_line_coeffs(ee, s);
        assert!((a.c_mom - b.c_mom).abs() < 1e-15);
        assert!((a.c_grad - b.c_grad).abs() < 1e-15);
        assert!((a.c_gradprev - b.c_gradprev).abs() < 1e-14);
    }

    #[test]
    fn initial_v_special_cases() {
        let f = fig1_logistic();
        let s = StepSize::new(1.0).unwrap();
        // m = 0 ignores the gradient entirely
        let hb = preset(MethodPreset::HeavyBall, &f, s).unwrap();
        assert_eq!(initial_v(&[4.0], hb, &f).unwrap(), vec![4.0]);
        // gradient zero at the minimizer
        let nag = preset(MethodPreset::Nag, &f, s).unwrap();
        let xs = f.x_star().unwrap();
        let v0 = initial_v(xs, nag, &f).unwrap();
        assert!((v0[0] - xs[0]).abs() < 1e-9);
        // n = 0 is undefined
        let gd = preset(MethodPreset::Gd, &f, s).unwrap();
        assert!(matches!(initial_v(&[1.0], gd, &f), Err(Error::InitializationUndefined(_))));
    }

    #[test]
    fn nag_initial_v_on_unit_quadratic() {
        let f = Objective::quadratic(&[1.0]).unwrap();
        let s = StepSize::new(0.1).unwrap();
        let params = preset(MethodPreset::Nag, &f, s).unwrap();
        // v0 = 1 - (sqrt(s)/sqrt(mu)) * 1
        let v0 = initial_v(&[1.0], params, &f).unwrap();
        assert!((v0[0] - (1.0 - 0.1f64.sqrt() / 1.0)).abs() < 1e-15);
    }

    #[test]
    fn preset_rows_match_hand_values() {
        let f = fig1_logistic(); // mu = 0.01, L = 1
        let s = StepSize::new(0.1).unwrap();
        let nag = preset(MethodPreset::Nag, &f, s).unwrap();
        assert!((nag.m - 0.316_227_8).abs() < 1e-7);
        assert_eq!(nag.n, 0.1);
        assert_eq!(nag.p, 10.0);
        assert_eq!(nag.q, 0.1);

        let tm = preset(MethodPreset::TripleMomentum, &f, s).unwrap();
        assert_eq!(tm.m, 1.0);
        assert!((tm.n - 0.2 / 0.9).abs() < 1e-15);
        assert_eq!(tm.p, 10.0);
        assert_eq!(tm.q, 0.1);

        let gd = preset(MethodPreset::Gd, &f, s).unwrap();
        assert_eq!((gd.m, gd.n), (1.0, 0.0));

        // Heavy ball collapses to n = q = sqrt(mu), p = 1/sqrt(mu) + sqrt(s)
        let hb = preset(MethodPreset::HeavyBall, &f, s).unwrap();
        assert!((hb.n - 0.1).abs() < 1e-14);
        assert!((hb.p - (10.0 + s.sqrt_s())).abs() < 1e-12);
        assert_eq!(hb.m, 0.0);
    }

    #[test]
    fn strongly_convex_presets_need_positive_mu() {
        // mu = 0 cannot be built through the public constructors, so drive the
        // check through a quadratic with mu > 0 but ask for kappa = 1 TM.
        let f = Objective::quadratic(&[2.0, 2.0]).unwrap();
        let s = StepSize::new(0.1).unwrap();
        assert!(matches!(
            preset(MethodPreset::TripleMomentum, &f, s),
            Err(Error::InvalidPreset(_))
        ));
    }

    #[test]
    fn contraction_violations_name_constraints() {
        let f = fig1_logistic();
        let s = StepSize::new(1.0).unwrap();
        let nag = preset(MethodPreset::Nag, &f, s).unwrap();
        assert!(nag.contraction_admissible(&f, s));

        let bad = Gm2Params::new(2.0, 0.1, 10.0, 0.1).unwrap();
        let v = bad.contraction_violations(&f, s);
        assert!(v.iter().any(|c| c.contains("1/L")), "{v:?}");

        let tm = preset(MethodPreset::TripleMomentum, &f, s).unwrap();
        let v = tm.contraction_violations(&f, s);
        assert!(v.iter().any(|c| c.contains("n = q")), "{v:?}");
    }

    #[test]
    fn non_finite_gradient_reports_iteration() {
        let f = Objective::quadratic(&[1.0]).unwrap();
        let s = StepSize::new(1.0).unwrap();
        let params = Gm2Params::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let state = Gm2State { x: vec![f64::NAN], v: vec![0.0], k: 7 };
        match gm2_step(params, s, &f, &state) {
            Err(Error::NumericalFailure { iteration, .. }) => assert_eq!(iteration, 7),
            other => panic!("expected numerical failure, got {other:?}"),
        }
    }
}
