//! A laboratory for momentum methods in smooth convex optimization.
//!
//! One four-parameter coefficient set (m, n, p, q) describes both a
//! continuous flow and its semi-implicit discretization; named presets
//! recover gradient descent, Polyak/heavy-ball, Nesterov (both regimes),
//! triple momentum and quasi-hyperbolic momentum exactly. Alongside the
//! dynamics the crate carries the matching convergence certificates:
//! Lyapunov energies with decay certification, per-mode spectra on
//! quadratics, and a closed-form matrix-inequality certificate.
//!
//! Everything is deterministic double-precision arithmetic: equal inputs
//! give bit-equal outputs, which the equivalence and regression tests rely
//! on.
//!
//! ```
//! use momentum_lab::{gm2, lyapunov, MethodPreset, Objective, StepSize};
//!
//! // Nesterov row on the 1-D logistic test function (L = 1, mu = 0.01)
//! let f = Objective::logistic_1d(1.0, 0.01)?;
//! let s = StepSize::new(1.0)?;
//! let params = gm2::preset(MethodPreset::Nag, &f, s)?;
//! assert!(params.contraction_admissible(&f, s));
//!
//! let x0 = vec![10.0];
//! let mut state = gm2::Gm2State::new(x0.clone(), gm2::initial_v(&x0, params, &f)?)?;
//! let mut energy = Vec::new();
//! for k in 0..200u32 {
//!     energy.push((f64::from(k), lyapunov::lyap_disc_sc(params, s.s(), &f, &state)?.value));
//!     state = gm2::gm2_step(params, s, &f, &state)?;
//! }
//!
//! // per-step contraction at ratio 1 - q sqrt(s) = 0.9
//! let report = lyapunov::certify_decay(
//!     &energy[..100],
//!     1.0 - params.q * s.sqrt_s(),
//!     lyapunov::DecayMode::Geometric,
//!     1e-12,
//! )?;
//! assert!(report.passed);
//! # Ok::<(), momentum_lab::Error>(())
//! ```

pub mod classic;
pub mod error;
pub mod flows;
pub mod gm2;
pub mod linalg;
pub mod lyapunov;
pub mod objectives;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use gm2::{Gm2Params, Gm2State, MethodPreset, StepSize};
pub use objectives::Objective;
