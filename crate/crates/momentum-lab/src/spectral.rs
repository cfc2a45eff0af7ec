//! Closed-form spectral analyses on diagonal quadratics and the 2x2 / 3x3
//! matrix certificate implying exponential decay.
//!
//! Only diagonal quadratics are handled: each coordinate decouples into a
//! 2x2 block whose eigenvalues come from one quadratic formula, so no general
//! eigensolver is needed. Callers with a dense symmetric Hessian diagonalize
//! first.

use crate::error::{Error, Result};
use crate::gm2::Gm2Params;

/// Absolute tolerance on the normalized discriminant under which a mode
/// counts as critically damped.
const CRITICAL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

#[derive(Clone, Debug)]
pub struct ModeSpectrum {
    pub a_ii: f64,
    /// Conjugate pair when the discriminant is negative.
    pub eigenvalues: [Complex; 2],
    pub discriminant: f64,
    pub critically_damped: bool,
}

#[derive(Clone, Debug)]
pub struct SpectralReport {
    pub per_mode: Vec<ModeSpectrum>,
    /// Continuous analysis: the smallest real part over all eigenvalues (the
    /// certified decay exponent of e^{-M t}). Discrete analysis: the largest
    /// root modulus (the slowest per-step contraction factor).
    pub worst_rate: f64,
}

fn solve_mode(a_ii: f64, sum: f64, product: f64) -> ModeSpectrum {
    // roots of r^2 - sum r + product
    let disc = sum * sum - 4.0 * product;
    let normalized = disc / (sum * sum).max(1.0);
    let critically_damped = normalized.abs() <= CRITICAL_TOL;
    let eigenvalues = if critically_damped {
        // report the exact double root: taking sqrt of the cancellation
        // residue would split the pair by ~sqrt(eps)
        [
            Complex { re: sum / 2.0, im: 0.0 },
            Complex { re: sum / 2.0, im: 0.0 },
        ]
    } else if disc >= 0.0 {
        let root = disc.sqrt();
        [
            Complex { re: (sum + root) / 2.0, im: 0.0 },
            Complex { re: (sum - root) / 2.0, im: 0.0 },
        ]
    } else {
        let imag = (-disc).sqrt() / 2.0;
        [
            Complex { re: sum / 2.0, im: imag },
            Complex { re: sum / 2.0, im: -imag },
        ]
    };
    ModeSpectrum { a_ii, eigenvalues, discriminant: disc, critically_damped }
}

fn check_diag(diag: &[f64]) -> Result<()> {
    if diag.is_empty() {
        return Err(Error::InvalidObjective("empty diagonal".into()));
    }
    if let Some(bad) = diag.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
        return Err(Error::InvalidObjective(format!("non-positive diagonal entry {bad}")));
    }
    Ok(())
}

/// Per-mode eigenvalues of the continuous flow on f(x) = 1/2 sum a_ii x_i^2:
/// lambda_{1,2} = (m a_ii + n + q +- sqrt((m a_ii + n + q)^2
///                 - 4 a_ii (n p + m q))) / 2.
/// The trajectory contracts like e^{-worst_rate t}.
pub fn quad_cont_eigs(params: Gm2Params, diag: &[f64]) -> Result<SpectralReport> {
    check_diag(diag)?;
    let Gm2Params { m, n, p, q } = params;
    let per_mode: Vec<ModeSpectrum> = diag
        .iter()
        .map(|&a| solve_mode(a, m * a + n + q, a * (n * p + m * q)))
        .collect();
    let worst_rate = per_mode
        .iter()
        .flat_map(|mode| mode.eigenvalues.iter().map(|e| e.re))
        .fold(f64::INFINITY, f64::min);
    Ok(SpectralReport { per_mode, worst_rate })
}

/// The p that zeroes a mode's continuous discriminant (with n = q):
/// p = q/a_ii + (m a_ii)^2 / (4 q a_ii).
pub fn critical_p(a_ii: f64, m: f64, q: f64) -> Result<f64> {
    if !(a_ii > 0.0) {
        return Err(Error::InadmissibleParameters(format!("a_ii must be positive, got {a_ii}")));
    }
    if q == 0.0 {
        return Err(Error::InadmissibleParameters("critical p needs q > 0".into()));
    }
    Ok(q / a_ii + (m * a_ii).powi(2) / (4.0 * q * a_ii))
}

/// Per-mode companion roots of the discrete iteration on a diagonal
/// quadratic (the gradient is a_ii x, so both gradient coefficients pick up
/// the mode):
/// r^2 - (1 + (1 - q rs - n p s a_ii - m rs a_ii)/(1 + n rs)) r
///     - (1 - q rs)(a_ii m rs - 1)/(1 + n rs) = 0,  rs = sqrt(s).
/// ||x_k - x*|| contracts asymptotically like worst_rate^k.
pub fn quad_disc_eigs(params: Gm2Params, s: f64, diag: &[f64]) -> Result<SpectralReport> {
    check_diag(diag)?;
    if !(s > 0.0) {
        return Err(Error::InadmissibleParameters(format!("s must be positive, got {s}")));
    }
    let Gm2Params { m, n, p, q } = params;
    let rs = s.sqrt();
    let denom = 1.0 + n * rs;
    let per_mode: Vec<ModeSpectrum> = diag
        .iter()
        .map(|&a| {
            // r^2 - sum r - c0 = 0, so the product of the roots is -c0
            let sum = 1.0 + (1.0 - q * rs - (n * p * s + m * rs) * a) / denom;
            let c0 = (1.0 - q * rs) * (a * m * rs - 1.0) / denom;
            solve_mode(a, sum, -c0)
        })
        .collect();
    let worst_rate = per_mode
        .iter()
        .flat_map(|mode| mode.eigenvalues.iter().map(|e| e.abs()))
        .fold(0.0f64, f64::max);
    Ok(SpectralReport { per_mode, worst_rate })
}

/// Entries of the 2x2 P and 3x3 T certificate matrices along the closed-form
/// substitution path (lambda = q, n = q, off-diagonal t13 = t23 = 0).
#[derive(Clone, Copy, Debug)]
pub struct IqcCertificate {
    pub lambda: f64,
    pub p11: f64,
    pub p12: f64,
    pub p22: f64,
    pub t11: f64,
    pub t12: f64,
    pub t13: f64,
    pub t22: f64,
    pub t23: f64,
    pub t33: f64,
    /// P has no negative eigenvalue.
    pub p_psd: bool,
    /// T has no positive eigenvalue; equivalent to q <= mu p here.
    pub t_nsd: bool,
}

/// Closed-form certificate whose feasibility certifies the e^{-qt} decay of
/// the continuous flow:
/// p11 = p12 = 0, p22 = n/(2p); t11 = -q mu / 2, t12 = q^2/(2p),
/// t22 = -q^2/(2p), t33 = -m, t13 = t23 = 0. T is negative semidefinite
/// exactly when q <= mu p.
pub fn iqc_certificate(params: Gm2Params, mu: f64, lambda: f64) -> Result<IqcCertificate> {
    if !(lambda > 0.0) {
        return Err(Error::InadmissibleParameters(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    if lambda != params.q {
        return Err(Error::UnsupportedPath(format!(
            "closed-form entries need lambda = q, got lambda = {lambda}, q = {}",
            params.q
        )));
    }
    if params.n != params.q {
        return Err(Error::UnsupportedPath(format!(
            "closed-form entries need n = q, got n = {}, q = {}",
            params.n, params.q
        )));
    }
    if !(params.p > 0.0) {
        return Err(Error::InadmissibleParameters("p must be positive".into()));
    }
    let Gm2Params { m, n, p, q } = params;
    let p22 = n / (2.0 * p);
    let t11 = -q * mu / 2.0;
    let t12 = q * q / (2.0 * p);
    let t22 = -q * q / (2.0 * p);
    let t33 = -m;
    // block-diagonal after t13 = t23 = 0: [t11 t12; t12 t22] and [t33]
    let det_t1 = t11 * t22 - t12 * t12;
    let t_nsd = t11 <= 0.0 && t22 <= 0.0 && det_t1 >= 0.0 && t33 <= 0.0;
    Ok(IqcCertificate {
        lambda,
        p11: 0.0,
        p12: 0.0,
        p22,
        t11,
        t12,
        t13: 0.0,
        t22,
        t23: 0.0,
        t33,
        p_psd: p22 >= 0.0,
        t_nsd,
    })
}
