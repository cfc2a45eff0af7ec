//! Closed-form analysis commands: per-mode spectra on diagonal quadratics
//! and the matrix certificate.

use crate::config::Config;
use crate::error::{Result, RunnerError};
use momentum_lab::gm2::{Gm2Params, StepSize};
use momentum_lab::spectral::{self, IqcCertificate, SpectralReport};

fn params_from(cfg: &Config) -> Result<Gm2Params> {
    Ok(Gm2Params::new(
        cfg.f64_req("m")?,
        cfg.f64_req("n")?,
        cfg.f64_req("p")?,
        cfg.f64_req("q")?,
    )?)
}

pub struct SpectralOutput {
    pub continuous: Option<SpectralReport>,
    pub discrete: Option<SpectralReport>,
}

/// Keys: diag (required), m,n,p,q or a preset via an objective is
/// intentionally not supported here — the analysis is parameter-level.
/// `spectrum = continuous | discrete | both` (default both; discrete needs s).
pub fn spectral(cfg: &Config) -> Result<SpectralOutput> {
    let diag = cfg.vec_opt("diag")?.ok_or_else(|| RunnerError::ConfigFile {
        file: cfg.file.clone(),
        message: "spectral analysis needs `diag`".into(),
    })?;
    let params = params_from(cfg)?;
    let which = cfg.get("spectrum").unwrap_or("both");
    let continuous = match which {
        "continuous" | "both" => Some(spectral::quad_cont_eigs(params, &diag)?),
        _ => None,
    };
    let discrete = match which {
        "discrete" | "both" => {
            let s = StepSize::new(cfg.f64_req("s")?)?;
            Some(spectral::quad_disc_eigs(params, s.s(), &diag)?)
        }
        "continuous" => None,
        other if other != "both" => {
            return Err(cfg.bad_value("spectrum", other, "continuous | discrete | both"))
        }
        _ => None,
    };
    Ok(SpectralOutput { continuous, discrete })
}

pub fn spectral_csv(out: &SpectralOutput) -> String {
    let mut text = String::new();
    text.push_str("analysis,mode,a_ii,eig1_re,eig1_im,eig2_re,eig2_im,discriminant,critically_damped,worst_rate\n");
    let mut dump = |name: &str, rep: &SpectralReport| {
        for (i, mode) in rep.per_mode.iter().enumerate() {
            text.push_str(&format!(
                "{name},{i},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}\n",
                mode.a_ii,
                mode.eigenvalues[0].re,
                mode.eigenvalues[0].im,
                mode.eigenvalues[1].re,
                mode.eigenvalues[1].im,
                mode.discriminant,
                mode.critically_damped,
                rep.worst_rate,
            ));
        }
    };
    if let Some(rep) = &out.continuous {
        dump("continuous", rep);
    }
    if let Some(rep) = &out.discrete {
        dump("discrete", rep);
    }
    text
}

/// Keys: mu, m,n,p,q; lambda defaults to q (the closed-form path).
pub fn iqc(cfg: &Config) -> Result<IqcCertificate> {
    let params = params_from(cfg)?;
    let mu = cfg.f64_req("mu")?;
    let lambda = cfg.f64_or("lambda", params.q)?;
    Ok(spectral::iqc_certificate(params, mu, lambda)?)
}

pub fn iqc_text(cert: &IqcCertificate) -> String {
    format!(
        "lambda = {}\nP = [{} {}; {} {}]  psd = {}\nT diag blocks: [{} {}; {} {}] and [{}]  nsd = {}\n",
        cert.lambda,
        cert.p11,
        cert.p12,
        cert.p12,
        cert.p22,
        cert.p_psd,
        cert.t11,
        cert.t12,
        cert.t12,
        cert.t22,
        cert.t33,
        cert.t_nsd,
    )
}
