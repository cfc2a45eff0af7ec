//! Smooth test objectives with certified strong-convexity and smoothness
//! constants, plus value / gradient / Hessian-vector access.
//!
//! Every constructor caches the minimizer: quadratics know it in closed form,
//! the logistic objectives solve for it once at construction with a
//! high-precision gradient-descent reference run (step 1/L, stop at
//! ||grad|| <= 1e-12). Convergence certificates all need x* and f*.

use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::SplitMix64;
use std::path::Path;

const GRAD_TOL_REFERENCE: f64 = 1e-12;
const MAX_REFERENCE_ITERS: usize = 50_000_000;

/// Which oracle calls an objective supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Capabilities {
    pub value: bool,
    pub gradient: bool,
    pub hessian_vector: bool,
}

#[derive(Clone, Debug)]
enum Kind {
    /// f(x) = 1/2 sum a_ii x_i^2
    Quadratic { diag: Vec<f64> },
    /// f(x) = 4(L-mu) log(1 + e^{-x}) + (mu/2) x^2
    Logistic1d { l: f64, mu: f64 },
    /// f(x) = (1/N) sum log(1 + exp(-y_i <a_i, x>)) + (mu/2) ||x||^2
    RegLogistic {
        rows: usize,
        features: Vec<f64>, // row-major rows x dim
        labels: Vec<f64>,
        mu: f64,
    },
}

#[derive(Clone, Debug)]
pub struct Objective {
    dim: usize,
    mu: f64,
    l: f64,
    x_star: Option<Vec<f64>>,
    f_star: Option<f64>,
    capabilities: Capabilities,
    kind: Kind,
}

impl Objective {
    /// Diagonal quadratic f(x) = 1/2 sum a_ii x_i^2 with mu = min a_ii,
    /// L = max a_ii, x* = 0.
    pub fn quadratic(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidObjective("empty diagonal".into()));
        }
        if let Some(bad) = diag.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::InvalidObjective(format!(
                "non-positive diagonal entry {bad}"
            )));
        }
        let mu = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let l = diag.iter().cloned().fold(0.0f64, f64::max);
        Ok(Self {
            dim: diag.len(),
            mu,
            l,
            x_star: Some(vec![0.0; diag.len()]),
            f_star: Some(0.0),
            capabilities: Capabilities { value: true, gradient: true, hessian_vector: true },
            kind: Kind::Quadratic { diag: diag.to_vec() },
        })
    }

    /// One-dimensional logistic-plus-quadratic test function
    /// f(x) = 4(L-mu) log(1 + e^{-x}) + (mu/2) x^2, with f'' in [mu, L].
    pub fn logistic_1d(l: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < l && l.is_finite()) {
            return Err(Error::InvalidObjective(format!(
                "logistic_1d needs 0 < mu < L, got mu = {mu}, L = {l}"
            )));
        }
        let mut obj = Self {
            dim: 1,
            mu,
            l,
            x_star: None,
            f_star: None,
            capabilities: Capabilities { value: true, gradient: true, hessian_vector: true },
            kind: Kind::Logistic1d { l, mu },
        };
        let x_star = obj.reference_solve(&[0.0])?;
        obj.f_star = Some(obj.value(&x_star));
        obj.x_star = Some(x_star);
        Ok(obj)
    }

    /// Regularized binary-classification logistic loss. Labels must be +/-1.
    /// L = mu + lambda_max(A^T A)/(4N), bounded by Gershgorin discs of the
    /// Gram matrix so the constant is a certified upper bound.
    pub fn reg_logistic(features: &[Vec<f64>], labels: &[f64], mu: f64) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::InvalidObjective("no samples".into()));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidObjective(format!("mu must be positive, got {mu}")));
        }
        if features.len() != labels.len() {
            return Err(Error::DimensionMismatch { expected: features.len(), got: labels.len() });
        }
        let dim = features[0].len();
        if dim == 0 {
            return Err(Error::InvalidObjective("zero-dimensional features".into()));
        }
        for (i, row) in features.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            if !linalg::all_finite(row) {
                return Err(Error::InvalidObjective(format!("non-finite feature in row {i}")));
            }
        }
        if let Some(bad) = labels.iter().find(|y| **y != 1.0 && **y != -1.0) {
            return Err(Error::InvalidObjective(format!(
                "label {bad} outside {{-1, +1}}"
            )));
        }
        let rows = features.len();
        let mut flat = Vec::with_capacity(rows * dim);
        for row in features {
            flat.extend_from_slice(row);
        }

        // Gram matrix G = A^T A; Gershgorin row sums bound lambda_max(G).
        let mut gram = vec![0.0; dim * dim];
        for r in 0..rows {
            let a = &flat[r * dim..(r + 1) * dim];
            for i in 0..dim {
                for j in 0..dim {
                    gram[i * dim + j] += a[i] * a[j];
                }
            }
        }
        let lambda_bound = (0..dim)
            .map(|i| (0..dim).map(|j| gram[i * dim + j].abs()).sum::<f64>())
            .fold(0.0f64, f64::max);
        let l = mu + lambda_bound / (4.0 * rows as f64);

        let mut obj = Self {
            dim,
            mu,
            l,
            x_star: None,
            f_star: None,
            capabilities: Capabilities { value: true, gradient: true, hessian_vector: true },
            kind: Kind::RegLogistic { rows, features: flat, labels: labels.to_vec(), mu },
        };
        let x_star = obj.reference_solve(&vec![0.0; dim])?;
        obj.f_star = Some(obj.value(&x_star));
        obj.x_star = Some(x_star);
        Ok(obj)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Strong-convexity modulus mu.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Gradient-Lipschitz constant L.
    pub fn lipschitz(&self) -> f64 {
        self.l
    }

    pub fn kappa(&self) -> f64 {
        self.l / self.mu
    }

    pub fn x_star(&self) -> Option<&[f64]> {
        self.x_star.as_deref()
    }

    pub fn f_star(&self) -> Option<f64> {
        self.f_star
    }

    pub fn capabilities(&self) -> Capabilities {
        self.capabilities
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            Kind::Quadratic { diag } => {
                0.5 * diag.iter().zip(x).map(|(a, xi)| a * xi * xi).sum::<f64>()
            }
            Kind::Logistic1d { l, mu } => {
                4.0 * (l - mu) * log1p_exp_neg(x[0]) + 0.5 * mu * x[0] * x[0]
            }
            Kind::RegLogistic { rows, features, labels, mu } => {
                let mut acc = 0.0;
                for r in 0..*rows {
                    let a = &features[r * self.dim..(r + 1) * self.dim];
                    acc += log1p_exp_neg(labels[r] * linalg::dot(a, x));
                }
                acc / *rows as f64 + 0.5 * mu * linalg::norm_sq(x)
            }
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            Kind::Quadratic { diag } => diag.iter().zip(x).map(|(a, xi)| a * xi).collect(),
            Kind::Logistic1d { l, mu } => {
                vec![-4.0 * (l - mu) * sigmoid(-x[0]) + mu * x[0]]
            }
            Kind::RegLogistic { rows, features, labels, mu } => {
                let mut g = linalg::scale(*mu, x);
                let inv_n = 1.0 / *rows as f64;
                for r in 0..*rows {
                    let a = &features[r * self.dim..(r + 1) * self.dim];
                    let c = -labels[r] * sigmoid(-labels[r] * linalg::dot(a, x)) * inv_n;
                    for (gi, ai) in g.iter_mut().zip(a) {
                        *gi += c * ai;
                    }
                }
                g
            }
        }
    }

    /// Analytic Hessian-vector product.
    pub fn hessian_vec(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(v.len(), self.dim);
        match &self.kind {
            Kind::Quadratic { diag } => diag.iter().zip(v).map(|(a, vi)| a * vi).collect(),
            Kind::Logistic1d { l, mu } => {
                let s = sigmoid(x[0]);
                vec![(4.0 * (l - mu) * s * (1.0 - s) + mu) * v[0]]
            }
            Kind::RegLogistic { rows, features, mu, .. } => {
                // labels drop out: y_i^2 = 1
                let mut hv = linalg::scale(*mu, v);
                let inv_n = 1.0 / *rows as f64;
                for r in 0..*rows {
                    let a = &features[r * self.dim..(r + 1) * self.dim];
                    let s = sigmoid(linalg::dot(a, x));
                    let c = s * (1.0 - s) * linalg::dot(a, v) * inv_n;
                    for (hi, ai) in hv.iter_mut().zip(a) {
                        *hi += c * ai;
                    }
                }
                hv
            }
        }
    }

    /// Central-difference Hessian-vector product with
    /// h = sqrt(machine epsilon) * (1 + ||x||), used when no analytic form
    /// exists and kept public as the oracle the analytic path is tested
    /// against.
    pub fn hessian_vec_fd(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        let vnorm = linalg::norm(v);
        if vnorm == 0.0 {
            return vec![0.0; self.dim];
        }
        let h = f64::EPSILON.sqrt() * (1.0 + linalg::norm(x));
        let step = h / vnorm;
        let xp = linalg::add_scaled(x, step, v);
        let xm = linalg::add_scaled(x, -step, v);
        let gp = self.gradient(&xp);
        let gm = self.gradient(&xm);
        gp.iter().zip(&gm).map(|(p, m)| (p - m) / (2.0 * step)).collect()
    }

    /// f(x) - f*; errors when the optimum is unknown.
    pub fn f_gap(&self, x: &[f64]) -> Result<f64> {
        let fs = self.f_star.ok_or_else(|| Error::MissingOptimum("f_star".into()))?;
        Ok(self.value(x) - fs)
    }

    /// Plain gradient descent with step 1/L down to ||grad|| <= 1e-12.
    fn reference_solve(&self, x0: &[f64]) -> Result<Vec<f64>> {
        let step = 1.0 / self.l;
        let mut x = x0.to_vec();
        for _ in 0..MAX_REFERENCE_ITERS {
            let g = self.gradient(&x);
            if !linalg::all_finite(&g) {
                return Err(Error::InvalidObjective("reference solve hit non-finite gradient".into()));
            }
            if linalg::norm(&g) <= GRAD_TOL_REFERENCE {
                return Ok(x);
            }
            for (xi, gi) in x.iter_mut().zip(&g) {
                *xi -= step * gi;
            }
        }
        Err(Error::InternalConsistency(
            "reference solve did not reach the gradient tolerance".into(),
        ))
    }
}

/// Numerically stable logistic sigmoid.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// log(1 + e^{-z}) without overflow for large |z|.
fn log1p_exp_neg(z: f64) -> f64 {
    if z >= 0.0 {
        (-z).exp().ln_1p()
    } else {
        -z + z.exp().ln_1p()
    }
}

/// Standard-normal features and uniform +/-1 labels under a fixed seed.
pub fn synthetic_classification(
    samples: usize,
    dim: usize,
    seed: u64,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = SplitMix64::new(seed);
    let features = (0..samples)
        .map(|_| (0..dim).map(|_| rng.normal()).collect())
        .collect();
    let labels = (0..samples).map(|_| rng.sign()).collect();
    (features, labels)
}

/// CSV rows of `d` feature columns followed by one +/-1 label column.
pub fn load_classification_csv(
    path: &Path,
    has_header: bool,
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidObjective(format!("cannot read {}: {e}", path.display())))?;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let skip = usize::from(has_header);
    for (lineno, line) in text.lines().enumerate().skip(skip) {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() < 2 {
            return Err(Error::InvalidObjective(format!(
                "line {}: need at least one feature and a label",
                lineno + 1
            )));
        }
        let mut row = Vec::with_capacity(cells.len() - 1);
        for c in &cells[..cells.len() - 1] {
            row.push(c.parse::<f64>().map_err(|e| {
                Error::InvalidObjective(format!("line {}: bad feature {c:?}: {e}", lineno + 1))
            })?);
        }
        let label: f64 = cells[cells.len() - 1].parse().map_err(|e| {
            Error::InvalidObjective(format!("line {}: bad label: {e}", lineno + 1))
        })?;
        features.push(row);
        labels.push(label);
    }
    Ok((features, labels))
}
