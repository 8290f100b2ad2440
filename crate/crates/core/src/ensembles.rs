//! Isotropic sub-Gaussian ensembles and the norm machinery attached to them.
//!
//! All Orlicz constants use the convention `psi_alpha(x) = 2^(x^alpha) - 1`,
//! i.e. `||Z||_{psi_alpha} = inf { c > 0 : E 2^{(|Z|/c)^alpha} <= 2 }`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Result};
use crate::rng::{stream_rng, POOL_STREAM};
use crate::stats::mean_and_se;

/// `||g||_{psi_2}` for a standard Gaussian: solves `(1 - 2 ln2 / c^2)^(-1/2) = 2`,
/// i.e. `c = sqrt(8 ln 2 / 3)`.
pub const GAUSSIAN_PSI2: f64 = 1.359_555_986_891_745_3;

/// Distribution family of the coordinates of `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gaussian,
    Rademacher,
    /// i.i.d. coordinates uniform on `[-sqrt(3), sqrt(3)]` (unit variance).
    BoundedUniform,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::Rademacher => "rademacher",
            Family::BoundedUniform => "bounded_uniform",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "gaussian" | "normal" => Some(Family::Gaussian),
            "rademacher" | "sign" => Some(Family::Rademacher),
            "bounded_uniform" | "uniform" => Some(Family::BoundedUniform),
            _ => None,
        }
    }
}

/// Law of the random vector `X` in `R^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub family: Family,
    pub dim: usize,
}

impl EnsembleSpec {
    pub fn new(family: Family, dim: usize) -> Self {
        Self { family, dim }
    }

    pub fn gaussian(dim: usize) -> Self {
        Self::new(Family::Gaussian, dim)
    }

    /// Constant `kappa` with `||<X, v>||_{psi_2} <= kappa ||v||_2` for every `v`.
    ///
    /// All three families have coordinates whose moment generating function is
    /// dominated by the standard Gaussian one, so `E exp(t <X,v>^2)` is dominated
    /// by the Gaussian value and the Gaussian constant is the uniform (and, by
    /// the CLT, sharp) proxy. For Rademacher and uniform laws the single
    /// coordinate norm is smaller, see [`coordinate_psi2`].
    pub fn psi2_constant(&self) -> f64 {
        GAUSSIAN_PSI2
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self.family {
            Family::Gaussian => rng.sample(StandardNormal),
            Family::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Family::BoundedUniform => {
                let s = 3f64.sqrt();
                rng.random_range(-s..s)
            }
        }
    }
}

/// `||X_1||_{psi_2}` for a single coordinate of the family.
///
/// Rademacher: `2^{1/c^2} = 2` gives `c = 1`. Uniform on `[-a, a]` with
/// `a = sqrt 3`: root of `(1/a) int_0^a 2^{x^2/c^2} dx = 2`, precomputed.
pub fn coordinate_psi2(family: Family) -> f64 {
    match family {
        Family::Gaussian => GAUSSIAN_PSI2,
        Family::Rademacher => 1.0,
        Family::BoundedUniform => BOUNDED_UNIFORM_COORD_PSI2,
    }
}

pub const BOUNDED_UNIFORM_COORD_PSI2: f64 = 1.114_265_411_785_238_5;

/// `N x d` design matrix `[X_1 | ... | X_N]^T`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    rows: Vec<f64>,
    n: usize,
    d: usize,
    pub seed: u64,
    /// `None` for externally supplied matrices.
    pub spec: Option<EnsembleSpec>,
}

impl SampleBatch {
    /// Wrap an external row-major matrix (rows are observations).
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return invalid("matrix has no rows");
        }
        let d = rows[0].len();
        if d == 0 {
            return invalid("matrix has no columns");
        }
        if rows.iter().any(|r| r.len() != d) {
            return invalid("ragged matrix rows");
        }
        Ok(Self {
            rows: rows.into_iter().flatten().collect(),
            n,
            d,
            seed: 0,
            spec: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.rows.chunks_exact(self.d)
    }

    /// `X v`, exploiting sparsity of `v` when most coordinates vanish.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.d, "dimension mismatch");
        let nz: Vec<usize> = (0..self.d).filter(|&j| v[j] != 0.0).collect();
        if nz.len() * 4 < self.d {
            self.rows()
                .map(|r| nz.iter().map(|&j| r[j] * v[j]).sum())
                .collect()
        } else {
            self.rows().map(|r| dot(r, v)).collect()
        }
    }

    /// `X^T w`.
    pub fn transpose_apply(&self, w: &[f64]) -> Vec<f64> {
        assert_eq!(w.len(), self.n, "dimension mismatch");
        let mut out = vec![0.0; self.d];
        for (r, &wi) in self.rows().zip(w) {
            if wi == 0.0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(r) {
                *o += wi * x;
            }
        }
        out
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Draw `n` i.i.d. rows from `spec` using the stream derived from `seed`.
///
/// Rows are drawn sequentially from one stream, so a batch of `n` rows is a
/// prefix of the batch of `n + k` rows with the same seed.
pub fn sample_batch(spec: &EnsembleSpec, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return invalid("sample count must be positive");
    }
    if spec.dim == 0 {
        return invalid("dimension must be positive");
    }
    let mut rng = stream_rng(seed, 0);
    let rows = (0..n * spec.dim).map(|_| spec.draw(&mut rng)).collect();
    Ok(SampleBatch {
        rows,
        n,
        d: spec.dim,
        seed,
        spec: Some(*spec),
    })
}

/// `E|g|^q = 2^{q/2} Gamma((q+1)/2) / sqrt(pi)` for standard Gaussian `g`.
pub fn gaussian_abs_moment(q: f64) -> Result<f64> {
    if !(q >= 1.0) || !q.is_finite() {
        return invalid(format!("moment order must be >= 1, got {q}"));
    }
    if q == 2.0 {
        return Ok(1.0);
    }
    let ln = 0.5 * q * std::f64::consts::LN_2 + ln_gamma(0.5 * (q + 1.0))
        - 0.5 * std::f64::consts::PI.ln();
    Ok(ln.exp())
}

/// A Monte Carlo (or exact) estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            std_error: 0.0,
        }
    }
}

/// `(E|<X, v>|^q)^{1/q}`.
///
/// Exact for Gaussian ensembles. Otherwise a Monte Carlo estimate from
/// `mc_budget` fresh draws, with the delta-method standard error of the root.
pub fn population_lq_norm(
    spec: &EnsembleSpec,
    v: &[f64],
    q: f64,
    mc_budget: usize,
    seed: u64,
) -> Result<Estimate> {
    if v.len() != spec.dim {
        return invalid("vector dimension does not match ensemble");
    }
    let mq = if spec.family == Family::Gaussian {
        gaussian_abs_moment(q)?
    } else {
        if !(q >= 1.0) {
            return invalid(format!("moment order must be >= 1, got {q}"));
        }
        0.0
    };
    if spec.family == Family::Gaussian {
        return Ok(Estimate::exact(norm2(v) * mq.powf(1.0 / q)));
    }
    if mc_budget == 0 {
        return invalid("Monte Carlo budget must be positive for non-Gaussian ensembles");
    }
    let pool = sample_batch(spec, mc_budget, crate::rng::mix(seed, POOL_STREAM))?;
    let powers: Vec<f64> = pool.project(v).into_iter().map(|z| abs_pow(z, q)).collect();
    let (mean, se) = mean_and_se(&powers);
    let value = mean.powf(1.0 / q);
    let std_error = if mean > 0.0 {
        se * value / (q * mean)
    } else {
        0.0
    };
    Ok(Estimate { value, std_error })
}

/// `|z|^q` with fast paths for the common integer orders.
#[inline]
pub(crate) fn abs_pow(z: f64, q: f64) -> f64 {
    let a = z.abs();
    if q == 1.0 {
        a
    } else if q == 2.0 {
        a * a
    } else if q == 3.0 {
        a * a * a
    } else if a == 0.0 {
        0.0
    } else {
        a.powf(q)
    }
}

/// `psi_2` distance proxy: `kappa ||v||_2`.
pub fn psi2_norm_proxy(spec: &EnsembleSpec, v: &[f64]) -> f64 {
    spec.psi2_constant() * norm2(v)
}

/// Moment-method proxy of the `psi_alpha` norm of a sample:
/// `max_{1 <= p <= ln n} ||Z||_{L^p(empirical)} / p^{1/alpha}`.
///
/// Only a constant-factor proxy of the Orlicz norm; use it in ratio tests.
pub fn empirical_psi_norm(samples: &[f64], alpha: f64) -> Result<f64> {
    if samples.len() < 2 {
        return invalid("need at least two samples");
    }
    if !(alpha > 0.0) {
        return invalid("alpha must be positive");
    }
    let n = samples.len() as f64;
    let p_max = n.ln();
    let mut orders = vec![1.0];
    let mut p = 2.0;
    while p <= p_max {
        orders.push(p);
        p += 1.0;
    }
    if p_max > 1.0 && !orders.contains(&p_max) {
        orders.push(p_max);
    }
    let best = orders
        .into_iter()
        .map(|p| {
            let m = samples.iter().map(|&z| abs_pow(z, p)).sum::<f64>() / n;
            m.powf(1.0 / p) / p.powf(1.0 / alpha)
        })
        .fold(0.0, f64::max);
    Ok(best)
}
