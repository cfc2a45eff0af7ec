//! Builds objectives, methods and flows from a [`Config`] and runs them,
//! producing telemetry and optional convergence verification.

use crate::config::Config;
use crate::error::{Result, RunnerError};
use crate::telemetry::TrajectoryRecord;
use momentum_lab::classic::{
    self, NagCvxState, NagScState, QhmParams, QhmState, RateMatchState, RateMatchVariant,
    TmCoefficients, TmState,
};
use momentum_lab::flows::{self, ConvexFlowParams, ConvexFlowVariant, FlowPreset, FlowState, TmHrParams};
use momentum_lab::gm2::{self, Gm2Params, Gm2State, MethodPreset, StepSize};
use momentum_lab::linalg;
use momentum_lab::lyapunov::{self, DecayMode, DecayReport};
use momentum_lab::objectives::{load_classification_csv, synthetic_classification, Objective};

pub fn build_objective(cfg: &Config, seed: u64) -> Result<Objective> {
    let kind = cfg.require("objective")?;
    match kind {
        "quadratic" => {
            let diag = cfg
                .vec_opt("diag")?
                .ok_or_else(|| RunnerError::ConfigFile {
                    file: cfg.file.clone(),
                    message: "quadratic objective needs `diag`".into(),
                })?;
            Ok(Objective::quadratic(&diag)?)
        }
        "logistic1d" => {
            let l = cfg.f64_req("l")?;
            let mu = cfg.f64_req("mu")?;
            Ok(Objective::logistic_1d(l, mu)?)
        }
        "reg-logistic" => {
            let mu = cfg.f64_req("mu")?;
            let (rows, labels) = match cfg.get("data") {
                Some(path) => {
                    let header = cfg.bool_or("csv_header", false)?;
                    load_classification_csv(std::path::Path::new(path), header)?
                }
                None => {
                    let samples = cfg.usize_or("samples", 1000)?;
                    let dim = cfg.usize_or("dim", 10)?;
                    synthetic_classification(samples, dim, seed)
                }
            };
            Ok(Objective::reg_logistic(&rows, &labels, mu)?)
        }
        other => Err(cfg.bad_value("objective", other, "quadratic | logistic1d | reg-logistic")),
    }
}

fn parse_gm2_params(cfg: &Config, f: &Objective, s: StepSize) -> Result<Gm2Params> {
    if let Some(preset) = cfg.get("preset") {
        let method = match preset {
            "gd" => MethodPreset::Gd,
            "polyak" => MethodPreset::Polyak,
            "hb" => MethodPreset::HeavyBall,
            "nag" => MethodPreset::Nag,
            "tm" => MethodPreset::TripleMomentum,
            "qhm" => MethodPreset::Qhm { a: cfg.f64_or("qhm_a", 0.25)? },
            "hnag" => MethodPreset::HNag {
                gamma: cfg.f64_req("hnag_gamma")?,
                alpha: cfg.f64_req("hnag_alpha")?,
                beta: cfg.f64_req("hnag_beta")?,
            },
            other => {
                return Err(cfg.bad_value(
                    "preset",
                    other,
                    "gd | polyak | hb | nag | tm | qhm | hnag",
                ))
            }
        };
        Ok(gm2::preset(method, f, s)?)
    } else {
        Ok(Gm2Params::new(
            cfg.f64_req("m")?,
            cfg.f64_req("n")?,
            cfg.f64_req("p")?,
            cfg.f64_req("q")?,
        )?)
    }
}

fn parse_x0(cfg: &Config, f: &Objective) -> Result<Vec<f64>> {
    let x0 = match cfg.vec_opt("x0")? {
        Some(v) => v,
        None => vec![cfg.f64_or("x0_fill", 1.0)?; f.dim()],
    };
    if x0.len() != f.dim() {
        return Err(RunnerError::ConfigFile {
            file: cfg.file.clone(),
            message: format!("x0 has dimension {}, objective has {}", x0.len(), f.dim()),
        });
    }
    Ok(x0)
}

fn resolve_v0(
    cfg: &Config,
    f: &Objective,
    params: Gm2Params,
    s: StepSize,
    x0: &[f64],
) -> Result<Vec<f64>> {
    match cfg.get("v0").unwrap_or("auto") {
        "auto" => match gm2::initial_v(x0, params, f) {
            Ok(v) => Ok(v),
            // n = 0 decouples v from x; any v0 works, use x0
            Err(momentum_lab::Error::InitializationUndefined(_)) => Ok(x0.to_vec()),
            Err(e) => Err(e.into()),
        },
        "x0" => Ok(x0.to_vec()),
        "zero" => Ok(vec![0.0; x0.len()]),
        "qhm-match" => Ok(classic::qhm_matched_v0(x0, params, s, f)),
        "tm-match" => {
            let c = TmCoefficients::for_objective(f)?;
            let tm = classic::tm_init(x0);
            let st = classic::tm_matched_gm2_state(f, &c, &tm, params, s)?;
            Ok(st.v)
        }
        // explicit-variant start that replays a semi-implicit trajectory
        "ee-match" => Ok(gm2::ee_initial_v(x0, params, s, f)?),
        other => {
            let v: std::result::Result<Vec<f64>, _> =
                other.split(',').map(|c| c.trim().parse::<f64>()).collect();
            match v {
                Ok(v) if v.len() == x0.len() => Ok(v),
                _ => Err(cfg.bad_value(
                    "v0",
                    other,
                    "auto | x0 | zero | qhm-match | tm-match | ee-match | <comma vector>",
                )),
            }
        }
    }
}

enum MethodKind {
    Gm2 { params: Gm2Params, s: StepSize },
    Ee { params: Gm2Params, s: StepSize },
    NagSc { s: f64 },
    NagCvx { s: f64 },
    Tm { coeffs: TmCoefficients },
    Qhm { params: QhmParams },
    RateMatch { s: f64, variant: RateMatchVariant },
}

enum MethodState {
    Gm2(Gm2State),
    NagSc(NagScState),
    NagCvx(NagCvxState),
    Tm(TmState),
    Qhm(QhmState),
    RateMatch(RateMatchState),
}

impl MethodKind {
    /// Pace of the discretization clock: the time assigned to step k is
    /// k * sqrt(s).
    fn clock(&self) -> f64 {
        match self {
            MethodKind::Gm2 { s, .. } | MethodKind::Ee { s, .. } => s.sqrt_s(),
            MethodKind::NagSc { s }
            | MethodKind::NagCvx { s }
            | MethodKind::RateMatch { s, .. } => s.sqrt(),
            MethodKind::Qhm { params } => params.s.sqrt(),
            MethodKind::Tm { coeffs } => coeffs.alpha.sqrt(),
        }
    }

    fn init(&self, cfg: &Config, f: &Objective, x0: &[f64]) -> Result<MethodState> {
        Ok(match self {
            MethodKind::Gm2 { params, s } | MethodKind::Ee { params, s } => {
                let v0 = resolve_v0(cfg, f, *params, *s, x0)?;
                MethodState::Gm2(Gm2State::new(x0.to_vec(), v0)?)
            }
            MethodKind::NagSc { .. } => MethodState::NagSc(classic::nag_sc_init(x0)),
            MethodKind::NagCvx { s } => MethodState::NagCvx(classic::nag_cvx_init(f, *s, x0)?),
            MethodKind::Tm { .. } => MethodState::Tm(classic::tm_init(x0)),
            MethodKind::Qhm { .. } => MethodState::Qhm(classic::qhm_init(x0)),
            MethodKind::RateMatch { .. } => MethodState::RateMatch(classic::rate_match_init(x0)),
        })
    }

    fn step(&self, f: &Objective, state: &MethodState) -> Result<MethodState> {
        Ok(match (self, state) {
            (MethodKind::Gm2 { params, s }, MethodState::Gm2(st)) => {
                MethodState::Gm2(gm2::gm2_step(*params, *s, f, st)?)
            }
            (MethodKind::Ee { params, s }, MethodState::Gm2(st)) => {
                MethodState::Gm2(gm2::ee_step(*params, *s, f, st)?)
            }
            (MethodKind::NagSc { s }, MethodState::NagSc(st)) => {
                MethodState::NagSc(classic::nag_sc_step(f, *s, st)?)
            }
            (MethodKind::NagCvx { s }, MethodState::NagCvx(st)) => {
                MethodState::NagCvx(classic::nag_cvx_step(f, *s, st)?)
            }
            (MethodKind::Tm { coeffs }, MethodState::Tm(st)) => {
                MethodState::Tm(classic::tm_step(f, coeffs, st)?)
            }
            (MethodKind::Qhm { params }, MethodState::Qhm(st)) => {
                MethodState::Qhm(classic::qhm_step(f, params, st)?)
            }
            (MethodKind::RateMatch { s, variant }, MethodState::RateMatch(st)) => {
                MethodState::RateMatch(classic::rate_match_step(f, *s, st, *variant)?)
            }
            _ => unreachable!("state kind always matches method kind"),
        })
    }
}

impl MethodState {
    /// The reported iterate sequence. For the two-sequence methods this is
    /// the gradient-evaluation trajectory (lookahead y), which is also the
    /// sequence the four-parameter mappings reproduce.
    fn primary(&self, kind: &MethodKind) -> Vec<f64> {
        match (self, kind) {
            (MethodState::Gm2(st), _) => st.x.clone(),
            (MethodState::NagSc(st), _) => st.y.clone(),
            (MethodState::NagCvx(st), _) => st.x.clone(),
            (MethodState::Tm(st), MethodKind::Tm { coeffs }) => st.y(coeffs),
            (MethodState::Tm(st), _) => st.eps.clone(),
            (MethodState::Qhm(st), _) => st.x.clone(),
            (MethodState::RateMatch(st), _) => st.x.clone(),
        }
    }

    /// Companion sequence for the dist_v column, and the reference it tends
    /// to (x* for position-like sequences, 0 for momentum accumulators).
    fn secondary(&self, kind: &MethodKind) -> (Vec<f64>, SecondaryTarget) {
        match (self, kind) {
            (MethodState::Gm2(st), _) => (st.v.clone(), SecondaryTarget::XStar),
            (MethodState::NagSc(st), _) => (st.x.clone(), SecondaryTarget::XStar),
            (MethodState::NagCvx(st), _) => (st.v.clone(), SecondaryTarget::XStar),
            (MethodState::Tm(st), MethodKind::Tm { coeffs }) => {
                (st.x_out(coeffs), SecondaryTarget::XStar)
            }
            (MethodState::Tm(st), _) => (st.eps.clone(), SecondaryTarget::XStar),
            (MethodState::Qhm(st), _) => (st.g_acc.clone(), SecondaryTarget::Zero),
            (MethodState::RateMatch(st), _) => (st.z.clone(), SecondaryTarget::XStar),
        }
    }
}

#[derive(Clone, Copy)]
enum SecondaryTarget {
    XStar,
    Zero,
}

enum FlowKind {
    Gm2 { params: Gm2Params },
    PhaseNag { s: f64 },
    HrTm { params: TmHrParams },
    Convex { params: ConvexFlowParams, variant: ConvexFlowVariant },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LyapChoice {
    None,
    DiscSc,
    DiscCvx,
    ContA,
    ContB,
}

#[derive(Clone, Debug)]
pub enum VerifySpec {
    None,
    Geometric { ratio: f64, tol: f64 },
    Exponential { rate: f64, tol: f64, second_half: bool },
}

pub struct RunOutput {
    pub records: Vec<TrajectoryRecord>,
    /// Primary iterate at each recorded step (drives the compare command).
    pub iterates: Vec<Vec<f64>>,
    pub verification: Option<DecayReport>,
    /// Set when a contraction verification was requested but the parameters sit
    /// outside the contraction hypotheses (heavy ball, triple momentum): the
    /// run proceeds, no rate is certified, and the violated constraints are
    /// reported here.
    pub no_guarantee: Option<String>,
    pub seed: u64,
}

fn parse_lyap(cfg: &Config) -> Result<LyapChoice> {
    Ok(match cfg.get("lyap").unwrap_or("none") {
        "none" => LyapChoice::None,
        "disc-sc" => LyapChoice::DiscSc,
        "disc-cvx" => LyapChoice::DiscCvx,
        "cont-a" => LyapChoice::ContA,
        "cont-b" => LyapChoice::ContB,
        other => {
            return Err(cfg.bad_value("lyap", other, "none | disc-sc | disc-cvx | cont-a | cont-b"))
        }
    })
}

fn parse_verify(cfg: &Config, contraction_ratio: Option<f64>) -> Result<VerifySpec> {
    Ok(match cfg.get("verify").unwrap_or("none") {
        "none" => VerifySpec::None,
        "geometric" => VerifySpec::Geometric {
            ratio: cfg.f64_req("ratio")?,
            tol: cfg.f64_or("tol", 1e-12)?,
        },
        "contraction" => {
            let ratio = contraction_ratio.ok_or_else(|| RunnerError::ConfigFile {
                file: cfg.file.clone(),
                message: "verify = contraction needs a paired-method run (m,n,p,q and s)".into(),
            })?;
            VerifySpec::Geometric { ratio, tol: cfg.f64_or("tol", 1e-12)? }
        }
        "exponential" => VerifySpec::Exponential {
            rate: cfg.f64_req("rate")?,
            tol: cfg.f64_or("tol", 0.05)?,
            second_half: match cfg.get("fit_window").unwrap_or("second-half") {
                "second-half" => true,
                "all" => false,
                other => return Err(cfg.bad_value("fit_window", other, "second-half | all")),
            },
        },
        other => {
            return Err(cfg.bad_value("verify", other, "none | geometric | contraction | exponential"))
        }
    })
}

fn verify_series(
    cfg: &Config,
    spec: &VerifySpec,
    series: &[(f64, f64)],
) -> Result<Option<DecayReport>> {
    match spec {
        VerifySpec::None => Ok(None),
        VerifySpec::Geometric { ratio, tol } => {
            // stop at the double-precision floor of the energy evaluation;
            // everything above it is checked strictly
            let scale = series.first().map(|(_, v)| v.abs()).unwrap_or(1.0).max(1.0);
            let floor = cfg.f64_or("verify_floor", 1e-13)? * scale;
            let cut = series
                .iter()
                .position(|(_, v)| *v <= floor)
                .unwrap_or(series.len())
                .max(2)
                .min(series.len());
            Ok(Some(lyapunov::certify_decay(
                &series[..cut],
                *ratio,
                DecayMode::Geometric,
                *tol,
            )?))
        }
        VerifySpec::Exponential { rate, tol, second_half } => {
            let window: Vec<(f64, f64)> = if *second_half {
                let t_mid = (series.first().unwrap().0 + series.last().unwrap().0) / 2.0;
                series.iter().filter(|(t, _)| *t >= t_mid).cloned().collect()
            } else {
                series.to_vec()
            };
            Ok(Some(lyapunov::certify_decay(
                &window,
                *rate,
                DecayMode::Exponential,
                *tol,
            )?))
        }
    }
}

/// Run the experiment described by a config: deterministic given the seed,
/// telemetry every `stride` steps, optional verification of the recorded
/// energy (or f-gap when no energy is selected).
pub fn run(cfg: &Config, stride: usize, seed: u64) -> Result<RunOutput> {
    let f = build_objective(cfg, seed)?;
    if cfg.get("flow").is_some() {
        run_flow(cfg, &f, stride, seed)
    } else {
        run_method(cfg, &f, stride, seed)
    }
}

fn run_method(cfg: &Config, f: &Objective, stride: usize, seed: u64) -> Result<RunOutput> {
    let stride = stride.max(1);
    let method_name = cfg.require("method")?;
    let kind = match method_name {
        "gm2" | "ee" => {
            let s = StepSize::new(cfg.f64_req("s")?)?;
            let params = parse_gm2_params(cfg, f, s)?;
            if method_name == "gm2" {
                MethodKind::Gm2 { params, s }
            } else {
                MethodKind::Ee { params, s }
            }
        }
        "nag-sc" => MethodKind::NagSc { s: cfg.f64_req("s")? },
        "nag-cvx" => MethodKind::NagCvx { s: cfg.f64_req("s")? },
        "tm" => MethodKind::Tm { coeffs: TmCoefficients::for_objective(f)? },
        "qhm" => {
            let s = cfg.f64_req("s")?;
            let (b_default, a) = match cfg.f64_opt("qhm_b")? {
                Some(b) => (b, cfg.f64_or("qhm_a", 0.25)?),
                None => {
                    let a = cfg.f64_or("qhm_a", 0.25)?;
                    let (_, b) = classic::qhm_params_map(a, f, s)?;
                    (b, a)
                }
            };
            MethodKind::Qhm { params: QhmParams::new(a, b_default, s)? }
        }
        "rate-match" => MethodKind::RateMatch {
            s: cfg.f64_req("s")?,
            variant: RateMatchVariant::Original,
        },
        "rate-match-perturbed" => MethodKind::RateMatch {
            s: cfg.f64_req("s")?,
            variant: RateMatchVariant::Perturbed,
        },
        other => {
            return Err(cfg.bad_value(
                "method",
                other,
                "gm2 | ee | nag-sc | nag-cvx | tm | qhm | rate-match | rate-match-perturbed",
            ))
        }
    };

    let mut lyap_choice = parse_lyap(cfg)?;
    let contraction_ratio = match &kind {
        MethodKind::Gm2 { params, s } | MethodKind::Ee { params, s } => {
            Some(1.0 - params.q * s.sqrt_s())
        }
        _ => None,
    };
    let mut verify = parse_verify(cfg, contraction_ratio)?;
    let mut no_guarantee = None;
    if matches!(cfg.get("verify"), Some("contraction")) {
        // contraction verification defaults the energy to the discrete strongly convex one
        if lyap_choice == LyapChoice::None {
            lyap_choice = LyapChoice::DiscSc;
        }
        // outside the hypotheses (heavy ball m = 0, triple momentum n != q)
        // the certificate says nothing: run, but certify nothing
        if let MethodKind::Gm2 { params, s } | MethodKind::Ee { params, s } = &kind {
            let violations = params.contraction_violations(f, *s);
            if !violations.is_empty() {
                no_guarantee = Some(violations.join("; "));
                verify = VerifySpec::None;
            }
        }
    }
    let mut out = run_method_with(cfg, f, kind, lyap_choice, verify, stride, seed)?;
    out.no_guarantee = no_guarantee;
    Ok(out)
}

fn run_method_with(
    cfg: &Config,
    f: &Objective,
    kind: MethodKind,
    lyap_choice: LyapChoice,
    verify: VerifySpec,
    stride: usize,
    seed: u64,
) -> Result<RunOutput> {
    let steps = cfg.usize_or("steps", 100)?;
    if steps == 0 {
        return Err(RunnerError::ConfigFile {
            file: cfg.file.clone(),
            message: "steps must be positive".into(),
        });
    }
    let x0 = parse_x0(cfg, f)?;
    let mut state = kind.init(cfg, f, &x0)?;
    let clock = kind.clock();

    // lyap = disc-sc needs the paired state; disc-cvx needs the next iterate
    if lyap_choice == LyapChoice::DiscSc
        && !matches!(kind, MethodKind::Gm2 { .. } | MethodKind::Ee { .. })
    {
        return Err(RunnerError::ConfigFile {
            file: cfg.file.clone(),
            message: "lyap = disc-sc needs method = gm2 or ee".into(),
        });
    }
    if lyap_choice == LyapChoice::DiscCvx && !matches!(kind, MethodKind::NagCvx { .. }) {
        return Err(RunnerError::ConfigFile {
            file: cfg.file.clone(),
            message: "lyap = disc-cvx needs method = nag-cvx".into(),
        });
    }
    if matches!(lyap_choice, LyapChoice::ContA | LyapChoice::ContB) {
        return Err(RunnerError::ConfigFile {
            file: cfg.file.clone(),
            message: "lyap = cont-a/cont-b are for flows; use disc-sc or disc-cvx".into(),
        });
    }

    let xs = f
        .x_star()
        .ok_or_else(|| momentum_lab::Error::MissingOptimum("x_star".into()))?
        .to_vec();
    let f_star = f.f_star().ok_or_else(|| momentum_lab::Error::MissingOptimum("f_star".into()))?;

    let mut records = Vec::new();
    let mut iterates = Vec::new();
    let mut series = Vec::new();
    for k in 0..=steps {
        // disc-cvx energy is evaluated from consecutive iterates, so step
        // first and record against the lookahead
        let next = if k < steps { Some(kind.step(f, &state)?) } else { None };
        if k % stride == 0 || k == steps {
            let x = state.primary(&kind);
            let (v, target) = state.secondary(&kind);
            let lyap = match (lyap_choice, &state, &next) {
                (LyapChoice::None, _, _) => None,
                (LyapChoice::DiscSc, MethodState::Gm2(st), _) => match &kind {
                    MethodKind::Gm2 { params, s } | MethodKind::Ee { params, s } => {
                        Some(lyapunov::lyap_disc_sc(*params, s.s(), f, st)?.value)
                    }
                    _ => None,
                },
                (LyapChoice::DiscCvx, MethodState::NagCvx(st), Some(MethodState::NagCvx(nx))) => {
                    match &kind {
                        MethodKind::NagCvx { s } => {
                            Some(lyapunov::lyap_disc_cvx(*s, f, &st.x, &nx.x, st.k)?.value)
                        }
                        _ => None,
                    }
                }
                _ => None,
            };
            let record = TrajectoryRecord {
                k,
                t: k as f64 * clock,
                f_gap: f.f_gap(&x)?,
                grad_norm_sq: linalg::norm_sq(&f.gradient(&x)),
                lyap,
                dist_x: linalg::dist(&x, &xs),
                dist_v: match target {
                    SecondaryTarget::XStar => linalg::dist(&v, &xs),
                    SecondaryTarget::Zero => linalg::norm(&v),
                },
            };
            record.validate(f_star)?;
            if let Some(l) = record.lyap {
                series.push((record.t, l));
            } else {
                series.push((record.t, record.f_gap));
            }
            records.push(record);
            iterates.push(x);
        }
        if let Some(next) = next {
            state = next;
        }
    }
    let verification = verify_series(cfg, &verify, &series)?;
    Ok(RunOutput { records, iterates, verification, no_guarantee: None, seed })
}

fn run_flow(cfg: &Config, f: &Objective, stride: usize, seed: u64) -> Result<RunOutput> {
    let stride = stride.max(1);
    let flow_name = cfg.require("flow")?;
    let s = cfg.f64_or("s", 1.0)?;
    let kind = match flow_name {
        "gm2" => {
            let params = if let Some(name) = cfg.get("flow_preset") {
                let preset = match name {
                    "gradient-flow" => FlowPreset::GradientFlow,
                    "polyak" => FlowPreset::Polyak,
                    "hb-ode" => FlowPreset::HbOde,
                    "nag-ode" => FlowPreset::NagOde,
                    "hr-tm2" => FlowPreset::HrTm2,
                    "hr-tm" => FlowPreset::HrTm,
                    other => {
                        return Err(cfg.bad_value(
                            "flow_preset",
                            other,
                            "gradient-flow | polyak | hb-ode | nag-ode | hr-tm2 | hr-tm",
                        ))
                    }
                };
                flows::flow_params(preset, f, s)?
            } else {
                Gm2Params::new(
                    cfg.f64_req("m")?,
                    cfg.f64_req("n")?,
                    cfg.f64_req("p")?,
                    cfg.f64_req("q")?,
                )?
            };
            FlowKind::Gm2 { params }
        }
        "phase-nag" => FlowKind::PhaseNag { s },
        "hr-tm" => FlowKind::HrTm {
            params: TmHrParams::new(f, cfg.f64_or("xi", 2.0 / 3.0)?)?,
        },
        "convex-laborde" | "convex-shi" => {
            let t0 = cfg.f64_or("t0", s.sqrt())?;
            let params = ConvexFlowParams::new(
                cfg.f64_or("p_exp", 2.0)?,
                cfg.f64_or("c", 0.25)?,
                s,
                t0,
            )?;
            let variant = if flow_name == "convex-laborde" {
                ConvexFlowVariant::Laborde
            } else {
                ConvexFlowVariant::Shi
            };
            FlowKind::Convex { params, variant }
        }
        other => {
            return Err(cfg.bad_value(
                "flow",
                other,
                "gm2 | phase-nag | hr-tm | convex-laborde | convex-shi",
            ))
        }
    };

    let lyap_choice = parse_lyap(cfg)?;
    if matches!(lyap_choice, LyapChoice::DiscSc | LyapChoice::DiscCvx) {
        return Err(RunnerError::ConfigFile {
            file: cfg.file.clone(),
            message: "lyap = disc-* are for discrete methods; use cont-a or cont-b".into(),
        });
    }
    let gm2_params = match &kind {
        FlowKind::Gm2 { params } => Some(*params),
        _ => None,
    };
    if matches!(lyap_choice, LyapChoice::ContA | LyapChoice::ContB) && gm2_params.is_none() {
        return Err(RunnerError::ConfigFile {
            file: cfg.file.clone(),
            message: "lyap = cont-a/cont-b need flow = gm2".into(),
        });
    }
    let verify = parse_verify(cfg, None)?;

    let x0 = parse_x0(cfg, f)?;
    let t0 = match &kind {
        FlowKind::Convex { params, .. } => params.t0,
        _ => 0.0,
    };
    let v0 = match (cfg.get("v0").unwrap_or("auto"), &kind) {
        ("auto", FlowKind::Gm2 { params }) => match gm2::initial_v(&x0, *params, f) {
            Ok(v) => v,
            Err(momentum_lab::Error::InitializationUndefined(_)) => x0.clone(),
            Err(e) => return Err(e.into()),
        },
        ("auto", FlowKind::PhaseNag { .. }) | ("auto", FlowKind::HrTm { .. }) => {
            vec![0.0; x0.len()]
        }
        ("auto", FlowKind::Convex { .. }) => x0.clone(),
        ("x0", _) => x0.clone(),
        ("zero", _) => vec![0.0; x0.len()],
        (other, _) => {
            let v: std::result::Result<Vec<f64>, _> =
                other.split(',').map(|c| c.trim().parse::<f64>()).collect();
            match v {
                Ok(v) if v.len() == x0.len() => v,
                _ => {
                    return Err(cfg.bad_value("v0", other, "auto | x0 | zero | <comma vector>"))
                }
            }
        }
    };

    let t_end = cfg.f64_req("t_end")?;
    let dt = cfg.f64_or("dt", (s.sqrt() / 10.0).min(1e-2))?;
    let state0 = FlowState::new(x0, v0, t0)?;
    let samples = match &kind {
        FlowKind::Gm2 { params } => flows::rk4_integrate(
            |st| flows::gm2_rhs(*params, f, st),
            state0,
            t_end,
            dt,
            stride,
        )?,
        FlowKind::PhaseNag { s } => flows::rk4_integrate(
            |st| flows::phase_rhs_nag(f, *s, f.mu(), st),
            state0,
            t_end,
            dt,
            stride,
        )?,
        FlowKind::HrTm { params } => flows::rk4_integrate(
            |st| flows::hr_tm_rhs(f, params, st),
            state0,
            t_end,
            dt,
            stride,
        )?,
        FlowKind::Convex { params, variant } => flows::rk4_integrate(
            |st| flows::convex_flow_rhs(f, params, st, *variant),
            state0,
            t_end,
            dt,
            stride,
        )?,
    };

    let xs = f
        .x_star()
        .ok_or_else(|| momentum_lab::Error::MissingOptimum("x_star".into()))?
        .to_vec();
    let f_star = f.f_star().ok_or_else(|| momentum_lab::Error::MissingOptimum("f_star".into()))?;
    let secondary_target = match &kind {
        FlowKind::PhaseNag { .. } | FlowKind::HrTm { .. } => SecondaryTarget::Zero,
        _ => SecondaryTarget::XStar,
    };

    let mut records = Vec::with_capacity(samples.len());
    let mut iterates = Vec::with_capacity(samples.len());
    let mut series = Vec::with_capacity(samples.len());
    for sample in &samples {
        let st = &sample.state;
        let lyap = match (lyap_choice, gm2_params) {
            (LyapChoice::ContA, Some(p)) => Some(lyapunov::lyap_cont_a(p, f, st)?.value),
            (LyapChoice::ContB, Some(p)) => Some(lyapunov::lyap_cont_b(p, f, st)?.value),
            _ => None,
        };
        let record = TrajectoryRecord {
            k: sample.step,
            t: st.t,
            f_gap: f.f_gap(&st.primary)?,
            grad_norm_sq: linalg::norm_sq(&f.gradient(&st.primary)),
            lyap,
            dist_x: linalg::dist(&st.primary, &xs),
            dist_v: match secondary_target {
                SecondaryTarget::XStar => linalg::dist(&st.secondary, &xs),
                SecondaryTarget::Zero => linalg::norm(&st.secondary),
            },
        };
        record.validate(f_star)?;
        if let Some(l) = record.lyap {
            series.push((record.t, l));
        } else {
            series.push((record.t, record.f_gap));
        }
        records.push(record);
        iterates.push(st.primary.clone());
    }
    let verification = verify_series(cfg, &verify, &series)?;
    Ok(RunOutput { records, iterates, verification, no_guarantee: None, seed })
}

/// Gradient-norm and f-gap bound verdicts for a convex-regime run.
pub struct GradientNormReport {
    pub steps: usize,
    pub grad_bound_ok: bool,
    pub fgap_bound_ok: bool,
    pub worst_grad_ratio: f64,
    pub worst_fgap_ratio: f64,
}

pub fn gradient_norm_bound(cfg: &Config, seed: u64) -> Result<GradientNormReport> {
    let f = build_objective(cfg, seed)?;
    let s = cfg.f64_req("s")?;
    let steps = cfg.usize_or("steps", 1000)?;
    let x1 = parse_x0(cfg, &f)?;
    let mut check = classic::GradNormBoundCheck::new(&f, &x1)?;
    let mut state = classic::nag_cvx_init(&f, s, &x1)?;
    for _ in 1..=steps {
        check.observe(&f, s, &state)?;
        state = classic::nag_cvx_step(&f, s, &state)?;
    }
    Ok(GradientNormReport {
        steps,
        grad_bound_ok: check.grad_bound_ok,
        fgap_bound_ok: check.fgap_bound_ok,
        worst_grad_ratio: check.worst_grad_ratio,
        worst_fgap_ratio: check.worst_fgap_ratio,
    })
}
