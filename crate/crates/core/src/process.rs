//! The `L^q` empirical process `v -> (1/N) sum |<X_i, v>|^q - E|<X, v>|^q`,
//! its supremum over an index set, and seeded trial campaigns.
//!
//! The supremum is searched on an epsilon-net followed by projected ascent
//! from the best net points. The result is always a lower estimate of the
//! true supremum; callers compare it against upper bounds only.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{
    abs_pow, gaussian_abs_moment, norm2, sample_batch, EnsembleSpec, Family, SampleBatch,
};
use crate::error::{invalid, Result};
use crate::index_sets::{epsilon_net_with, IndexSet, Net, NetMetric, NetOptions};
use crate::rng::{mix, NET_STREAM, POOL_STREAM};
use crate::stats::{mean_and_se, quantile_sorted, sorted_copy};

/// Monte Carlo population pool size per sample, for non-Gaussian ensembles.
pub const POOL_FACTOR: usize = 64;

/// `(1/N) sum_i |<X_i, v>|^q - pop_q_norm^q`.
pub fn empirical_lq_deviation(
    batch: &SampleBatch,
    v: &[f64],
    q: f64,
    pop_q_norm: f64,
) -> Result<f64> {
    if v.len() != batch.dim() {
        return invalid(format!(
            "vector has dimension {}, batch has {}",
            v.len(),
            batch.dim()
        ));
    }
    let emp = batch.project(v).iter().map(|&z| abs_pow(z, q)).sum::<f64>() / batch.n() as f64;
    Ok(emp - abs_pow(pop_q_norm, q))
}

/// How the population term `E|<X, v>|^q` is evaluated inside a search.
#[derive(Debug, Clone)]
pub enum Population {
    /// No population term: the search maximizes `P_N |<X, v>|^q` itself.
    Zero,
    /// `m_q ||v||^q`, exact for Gaussian ensembles.
    Gaussian { moment: f64 },
    /// Common-random-numbers Monte Carlo pool.
    Pool(SampleBatch),
}

impl Population {
    /// Exact for Gaussian ensembles, otherwise a pool of `POOL_FACTOR * n`
    /// fresh draws from the stream derived from `seed`.
    pub fn for_ensemble(spec: &EnsembleSpec, q: f64, n: usize, seed: u64) -> Result<Self> {
        if spec.family == Family::Gaussian {
            Ok(Population::Gaussian {
                moment: gaussian_abs_moment(q)?,
            })
        } else {
            let pool = sample_batch(spec, POOL_FACTOR * n, mix(seed, POOL_STREAM))?;
            Ok(Population::Pool(pool))
        }
    }
}

struct Objective<'a> {
    batch: &'a SampleBatch,
    q: f64,
    population: &'a Population,
}

impl Objective<'_> {
    fn mean_power(&self, z: &[f64]) -> f64 {
        z.iter().map(|&x| abs_pow(x, self.q)).sum::<f64>() / z.len() as f64
    }

    fn population(&self, v: &[f64]) -> (f64, Option<Vec<f64>>) {
        match self.population {
            Population::Zero => (0.0, None),
            Population::Gaussian { moment } => (moment * abs_pow(norm2(v), self.q), None),
            Population::Pool(pool) => {
                let z = pool.project(v);
                (self.mean_power(&z), Some(z))
            }
        }
    }

    /// Deviation at `v`, plus the projections needed for its gradient.
    fn eval(&self, v: &[f64]) -> (f64, Vec<f64>, Option<Vec<f64>>) {
        let z = self.batch.project(v);
        let (pop, pz) = self.population(v);
        (self.mean_power(&z) - pop, z, pz)
    }

    fn value(&self, v: &[f64]) -> f64 {
        self.eval(v).0
    }

    fn power_weights(&self, z: &[f64]) -> Vec<f64> {
        let n = z.len() as f64;
        let q = self.q;
        z.iter()
            .map(|&x| {
                if x == 0.0 {
                    0.0
                } else {
                    q * x.signum() * abs_pow(x, q - 1.0) / n
                }
            })
            .collect()
    }

    /// (Sub)gradient of the deviation at `v` given its cached projections.
    fn gradient(&self, v: &[f64], z: &[f64], pz: Option<&[f64]>) -> Vec<f64> {
        let mut g = self.batch.transpose_apply(&self.power_weights(z));
        match self.population {
            Population::Zero => {}
            Population::Gaussian { moment } => {
                let nv = norm2(v);
                if nv > 0.0 {
                    let c = self.q * moment * abs_pow(nv, self.q - 2.0);
                    g.iter_mut().zip(v).for_each(|(gi, vi)| *gi -= c * vi);
                }
            }
            Population::Pool(pool) => {
                let pg = pool.transpose_apply(&self.power_weights(pz.unwrap_or(&[])));
                g.iter_mut().zip(pg).for_each(|(gi, p)| *gi -= p);
            }
        }
        g
    }
}

/// Bookkeeping that exposes how much work the search did.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchAudit {
    pub net_size: usize,
    pub net_truncated: bool,
    pub restarts: usize,
    /// Best `|deviation|` over the net alone.
    pub net_best: f64,
    /// `value - net_best`.
    pub improvement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    /// `|deviation(argmax)|`.
    pub value: f64,
    pub signed_deviation: f64,
    pub argmax: Vec<f64>,
    /// Standard error of the Monte Carlo population term at `argmax`
    /// (zero when the population term is exact).
    pub population_std_error: f64,
    pub audit: SearchAudit,
}

/// Search parameters shared by the process and section estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub restarts: usize,
    pub steps: usize,
}

/// Net + projected ascent search for `sup_{v in T} |deviation(v)|`.
///
/// Finite sets are searched exhaustively. Otherwise every net point is
/// evaluated and the `restarts` best start an ascent on `s * deviation`
/// (with `s` the sign at the start). Steps move along the normalized
/// (sub)gradient and are accepted only when they improve, so the result is
/// never below the best net value. Step lengths adapt (x1.5 on success,
/// x0.5 on failure) for `q > 1` and follow `eta_0 / sqrt(k + 1)` at `q = 1`.
pub fn search_sup(
    batch: &SampleBatch,
    set: &IndexSet,
    net: Option<&Net>,
    q: f64,
    population: &Population,
    opts: SearchOptions,
) -> Result<SupEstimate> {
    if set.dim != batch.dim() {
        return invalid("index set and batch dimensions differ");
    }
    let objective = Objective {
        batch,
        q,
        population,
    };

    let (candidates, truncated) = match set.finite_points() {
        Some(points) => (points, false),
        None => match net {
            Some(net) => (net.points.clone(), net.truncated),
            None => return invalid("a net is required for non-finite index sets"),
        },
    };
    let mut scored: Vec<(f64, usize)> = candidates
        .iter()
        .enumerate()
        .map(|(i, v)| (objective.value(v), i))
        .collect();
    // Descending |deviation|, lowest index first on ties.
    scored.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()).then(a.1.cmp(&b.1)));
    let (net_dev, net_idx) = scored.first().copied().unwrap_or((0.0, 0));
    let net_best = net_dev.abs();
    let mut best_v = candidates.get(net_idx).cloned().unwrap_or_else(|| vec![0.0; set.dim]);
    let mut best = net_best;

    let restarts = if set.is_finite_set() {
        0
    } else {
        opts.restarts.min(scored.len())
    };
    let scale = if set.max_norm().is_finite() {
        set.max_norm().max(f64::MIN_POSITIVE)
    } else {
        1.0
    };
    for &(dev, idx) in scored.iter().take(restarts) {
        let sign = if dev < 0.0 { -1.0 } else { 1.0 };
        let (v, f) = ascend(&objective, set, &candidates[idx], sign, scale, opts.steps);
        if f > best {
            best = f;
            best_v = v;
        }
    }

    let (signed, _, _) = objective.eval(&best_v);
    let population_std_error = match population {
        Population::Pool(pool) => {
            let powers: Vec<f64> = pool.project(&best_v).iter().map(|&z| abs_pow(z, q)).collect();
            mean_and_se(&powers).1
        }
        _ => 0.0,
    };
    let value = signed.abs();
    Ok(SupEstimate {
        value,
        signed_deviation: signed,
        argmax: best_v,
        population_std_error,
        audit: SearchAudit {
            net_size: candidates.len(),
            net_truncated: truncated,
            restarts,
            net_best,
            improvement: value - net_best,
        },
    })
}

fn ascend(
    objective: &Objective<'_>,
    set: &IndexSet,
    start: &[f64],
    sign: f64,
    scale: f64,
    steps: usize,
) -> (Vec<f64>, f64) {
    let subgradient = objective.q == 1.0;
    let eta0 = 0.5 * scale;
    let mut eta = eta0;
    let mut v = start.to_vec();
    let (dev, z, pz) = objective.eval(&v);
    let mut f = sign * dev;
    let mut grad = objective.gradient(&v, &z, pz.as_deref());
    for k in 0..steps {
        let gn = norm2(&grad);
        if gn == 0.0 || !gn.is_finite() {
            break;
        }
        let step = if subgradient {
            eta0 / ((k + 1) as f64).sqrt()
        } else {
            eta
        };
        let moved: Vec<f64> = v
            .iter()
            .zip(&grad)
            .map(|(vi, gi)| vi + sign * step * gi / gn)
            .collect();
        let cand = set.retract(&moved);
        let mut accepted = false;
        if set.contains(&cand, 1e-9) {
            let (dev_c, zc, pzc) = objective.eval(&cand);
            if sign * dev_c > f {
                grad = objective.gradient(&cand, &zc, pzc.as_deref());
                v = cand;
                f = sign * dev_c;
                accepted = true;
            }
        }
        if !subgradient {
            eta *= if accepted { 1.5 } else { 0.5 };
            if eta < 1e-9 * scale {
                break;
            }
        }
    }
    (v, f)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessConfig {
    pub set: IndexSet,
    pub ensemble: EnsembleSpec,
    pub q: f64,
    pub n_samples: usize,
    pub trials: usize,
    /// Net resolution; `None` means `0.05 * diam`.
    pub net_eps: Option<f64>,
    pub net_max_points: usize,
    pub ascent_restarts: usize,
    pub ascent_steps: usize,
    pub seed: u64,
    /// Thresholds at which the summary records the empirical tail.
    pub tail_thresholds: Vec<f64>,
}

impl ProcessConfig {
    pub fn new(set: IndexSet, ensemble: EnsembleSpec, q: f64, n_samples: usize) -> Self {
        Self {
            set,
            ensemble,
            q,
            n_samples,
            trials: 1,
            net_eps: None,
            net_max_points: 256,
            ascent_restarts: 8,
            ascent_steps: 200,
            seed: 0,
            tail_thresholds: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.set.validate()?;
        if !(self.q >= 1.0) || !self.q.is_finite() {
            return invalid(format!("q must be a finite real >= 1, got {}", self.q));
        }
        if self.trials == 0 {
            return invalid("trials must be positive");
        }
        if self.n_samples == 0 {
            return invalid("sample count must be positive");
        }
        if let Some(eps) = self.net_eps {
            if !(eps > 0.0) {
                return invalid("net_eps must be positive");
            }
        }
        if self.ensemble.dim != self.set.dim {
            return invalid("ensemble and index set dimensions differ");
        }
        Ok(())
    }

    pub fn effective_net_eps(&self) -> f64 {
        self.net_eps
            .unwrap_or_else(|| (0.05 * self.set.l2_diameter()).max(1e-6))
    }

    pub fn search_options(&self) -> SearchOptions {
        SearchOptions {
            restarts: self.ascent_restarts,
            steps: self.ascent_steps,
        }
    }

    /// The search net, which depends only on the set, resolution and root seed.
    pub fn build_net(&self) -> Result<Option<Net>> {
        if self.set.is_finite_set() {
            return Ok(None);
        }
        let opts = NetOptions {
            max_points: self.net_max_points.max(1),
            ..NetOptions::default()
        };
        epsilon_net_with(
            &self.set,
            self.effective_net_eps(),
            NetMetric::L2,
            mix(self.seed, NET_STREAM),
            opts,
        )
        .map(Some)
    }

    /// Seed of trial `t`.
    pub fn trial_seed(&self, t: usize) -> u64 {
        mix(self.seed, t as u64)
    }
}

/// Estimate `sup |(P_N - P)|<., v>|^q|` over `config.set` for one batch.
pub fn sup_deviation_estimate(batch: &SampleBatch, config: &ProcessConfig) -> Result<SupEstimate> {
    config.validate()?;
    let net = config.build_net()?;
    let population = Population::for_ensemble(&config.ensemble, config.q, batch.n(), batch.seed)?;
    search_sup(
        batch,
        &config.set,
        net.as_ref(),
        config.q,
        &population,
        config.search_options(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub threshold: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    /// Sup estimates in trial order.
    pub values: Vec<f64>,
    pub seeds: Vec<u64>,
    pub median: f64,
    pub q90: f64,
    pub q99: f64,
    pub tail: Vec<TailPoint>,
    pub net_size: usize,
    pub config: ProcessConfig,
}

impl TrialSummary {
    pub fn quantile(&self, level: f64) -> f64 {
        quantile_sorted(&sorted_copy(&self.values), level)
    }
}

/// Run `config.trials` independent sup estimates.
///
/// Trial `t` draws its batch from `mix(seed, t)`; trials run in parallel and
/// are merged by index, so the summary does not depend on the thread count.
pub fn run_trials(config: &ProcessConfig) -> Result<TrialSummary> {
    config.validate()?;
    let net = config.build_net()?;
    let opts = config.search_options();
    let seeds: Vec<u64> = (0..config.trials).map(|t| config.trial_seed(t)).collect();
    let values = seeds
        .par_iter()
        .map(|&seed| {
            let batch = sample_batch(&config.ensemble, config.n_samples, seed)?;
            let population =
                Population::for_ensemble(&config.ensemble, config.q, config.n_samples, seed)?;
            search_sup(&batch, &config.set, net.as_ref(), config.q, &population, opts)
                .map(|s| s.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    summarize(values, seeds, config.clone(), net.map(|n| n.len()).unwrap_or(0))
}

fn summarize(
    values: Vec<f64>,
    seeds: Vec<u64>,
    config: ProcessConfig,
    net_size: usize,
) -> Result<TrialSummary> {
    let sorted = sorted_copy(&values);
    let mut summary = TrialSummary {
        median: quantile_sorted(&sorted, 0.5),
        q90: quantile_sorted(&sorted, 0.9),
        q99: quantile_sorted(&sorted, 0.99),
        values,
        seeds,
        tail: Vec::new(),
        net_size,
        config,
    };
    summary.tail = tail_curve(&summary, &summary.config.tail_thresholds)?;
    Ok(summary)
}

/// Fraction of trials with sup estimate `>= threshold`, per threshold.
pub fn tail_curve(summary: &TrialSummary, thresholds: &[f64]) -> Result<Vec<TailPoint>> {
    if thresholds.windows(2).any(|w| w[1] < w[0]) {
        return invalid("thresholds must be sorted ascending");
    }
    Ok(empirical_tail(&summary.values, thresholds))
}

pub(crate) fn empirical_tail(values: &[f64], thresholds: &[f64]) -> Vec<TailPoint> {
    let n = values.len() as f64;
    thresholds
        .iter()
        .map(|&t| TailPoint {
            threshold: t,
            probability: values.iter().filter(|&&v| v >= t).count() as f64 / n,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_sets::MEMBERSHIP_TOL;

    fn gauss_config(set: IndexSet, q: f64, n: usize) -> ProcessConfig {
        let d = set.dim;
        ProcessConfig::new(set, EnsembleSpec::gaussian(d), q, n)
    }

    #[test]
    fn deviation_examples() {
        let spec = EnsembleSpec::gaussian(3);
        let b = sample_batch(&spec, 20, 1).unwrap();
        assert_eq!(empirical_lq_deviation(&b, &[0.0; 3], 2.0, 0.0).unwrap(), 0.0);
        let rows = SampleBatch::from_rows(vec![vec![1.0, 0.0]; 5]).unwrap();
        assert_eq!(empirical_lq_deviation(&rows, &[1.0, 0.0], 2.0, 1.0).unwrap(), 0.0);
        assert!(empirical_lq_deviation(&b, &[1.0], 2.0, 1.0).is_err());
    }

    #[test]
    fn deviation_matches_dense_recomputation() {
        let spec = EnsembleSpec::gaussian(1);
        let b = sample_batch(&spec, 257, 4).unwrap();
        let v = [0.73];
        let got = empirical_lq_deviation(&b, &v, 1.0, 0.5).unwrap();
        let mut acc = 0.0;
        for i in 0..b.n() {
            acc += (b.row(i)[0] * 0.73).abs();
        }
        let want = acc / 257.0 - 0.5;
        assert!((got - want).abs() < 1e-13);
    }

    #[test]
    fn symmetric_vectors_have_equal_deviation() {
        let spec = EnsembleSpec::gaussian(4);
        let b = sample_batch(&spec, 50, 2).unwrap();
        let v = [0.1, -0.5, 0.3, 0.2];
        let w: Vec<f64> = v.iter().map(|x| -x).collect();
        for q in [1.0, 1.5, 2.0, 3.0] {
            let a = empirical_lq_deviation(&b, &v, q, 0.7).unwrap();
            let c = empirical_lq_deviation(&b, &w, q, 0.7).unwrap();
            assert_eq!(a, c);
        }
    }

    #[test]
    fn origin_set_has_zero_sup() {
        let cfg = gauss_config(IndexSet::origin(3), 2.0, 20);
        let b = sample_batch(&cfg.ensemble, 20, 1).unwrap();
        let s = sup_deviation_estimate(&b, &cfg).unwrap();
        assert_eq!(s.value, 0.0);
        let mut cfg = cfg;
        cfg.trials = 5;
        let summary = run_trials(&cfg).unwrap();
        assert!(summary.values.iter().all(|&v| v == 0.0));
        assert_eq!(summary.median, 0.0);
    }

    #[test]
    fn finite_set_is_exhausted() {
        let v = vec![0.6, 0.8];
        let set = IndexSet::finite(vec![v.clone(), vec![-0.6, -0.8], vec![0.0, 0.0]]).unwrap();
        let cfg = gauss_config(set, 1.5, 30);
        let b = sample_batch(&cfg.ensemble, 30, 9).unwrap();
        let s = sup_deviation_estimate(&b, &cfg).unwrap();
        let pop = crate::ensembles::population_lq_norm(&cfg.ensemble, &v, 1.5, 0, 0)
            .unwrap()
            .value;
        let dev = empirical_lq_deviation(&b, &v, 1.5, pop).unwrap().abs();
        assert!((s.value - dev).abs() < 1e-12);
        assert_eq!(s.audit.restarts, 0);
    }

    #[test]
    fn estimate_invariants_hold() {
        let cfg = ProcessConfig {
            ascent_restarts: 3,
            ascent_steps: 40,
            ..gauss_config(IndexSet::sphere(5, 1.0), 1.5, 64)
        };
        let b = sample_batch(&cfg.ensemble, 64, 3).unwrap();
        let s = sup_deviation_estimate(&b, &cfg).unwrap();
        let pop = crate::ensembles::population_lq_norm(&cfg.ensemble, &s.argmax, 1.5, 0, 0)
            .unwrap()
            .value;
        let recomputed = empirical_lq_deviation(&b, &s.argmax, 1.5, pop).unwrap().abs();
        assert!((recomputed - s.value).abs() <= 1e-12 * s.value.max(1.0));
        assert!(s.value >= s.audit.net_best);
        assert!(cfg.set.contains(&s.argmax, 1e-9));
    }

    #[test]
    fn scaling_the_set_scales_the_sup_by_c_to_the_q() {
        let base: Vec<Vec<f64>> = (0..12)
            .map(|i| {
                let t = i as f64 * 0.5;
                vec![t.cos(), t.sin(), 0.3]
            })
            .collect();
        let c = 2.5;
        let scaled: Vec<Vec<f64>> = base.iter().map(|p| p.iter().map(|x| c * x).collect()).collect();
        for q in [1.0, 2.0, 3.0] {
            let a = gauss_config(IndexSet::finite(base.clone()).unwrap(), q, 40);
            let b = gauss_config(IndexSet::finite(scaled.clone()).unwrap(), q, 40);
            let batch = sample_batch(&a.ensemble, 40, 5).unwrap();
            let sa = sup_deviation_estimate(&batch, &a).unwrap().value;
            let sb = sup_deviation_estimate(&batch, &b).unwrap().value;
            assert!((sb - c.powf(q) * sa).abs() <= 1e-12 * sb, "q={q}");
        }
    }

    #[test]
    fn nested_finite_sets_are_monotone() {
        let all: Vec<Vec<f64>> = (0..10).map(|i| vec![(i as f64).cos(), (i as f64).sin()]).collect();
        let sub = IndexSet::finite(all[..4].to_vec()).unwrap();
        let sup = IndexSet::finite(all).unwrap();
        let batch = sample_batch(&EnsembleSpec::gaussian(2), 30, 2).unwrap();
        for q in [1.0, 2.0] {
            let a = sup_deviation_estimate(&batch, &gauss_config(sub.clone(), q, 30)).unwrap();
            let b = sup_deviation_estimate(&batch, &gauss_config(sup.clone(), q, 30)).unwrap();
            assert!(a.value <= b.value);
        }
    }

    #[test]
    fn non_gaussian_population_pool_is_used() {
        let set = IndexSet::sphere(3, 1.0);
        let mut cfg = ProcessConfig::new(set, EnsembleSpec::new(Family::Rademacher, 3), 2.0, 50);
        cfg.ascent_restarts = 2;
        cfg.ascent_steps = 20;
        let b = sample_batch(&cfg.ensemble, 50, 1).unwrap();
        let s = sup_deviation_estimate(&b, &cfg).unwrap();
        assert!(s.value > 0.0);
        assert!(s.population_std_error >= 0.0);
        assert!(cfg.set.contains(&s.argmax, MEMBERSHIP_TOL.max(1e-9)));
    }

    #[test]
    fn trials_are_deterministic_and_summaries_consistent() {
        let mut cfg = gauss_config(IndexSet::sphere(3, 1.0), 2.0, 40);
        cfg.trials = 12;
        cfg.ascent_restarts = 2;
        cfg.ascent_steps = 20;
        cfg.tail_thresholds = vec![0.0, 0.1, 0.2, 0.5, 10.0];
        let a = run_trials(&cfg).unwrap();
        let b = run_trials(&cfg).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let c = pool.install(|| run_trials(&cfg).unwrap());
        assert_eq!(a, c);
        assert!(a.median <= a.q90 && a.q90 <= a.q99);
        assert!(a.tail.windows(2).all(|w| w[1].probability <= w[0].probability));
        assert_eq!(a.tail[0].probability, 1.0);
        assert_eq!(a.tail.last().unwrap().probability, 0.0);
    }

    #[test]
    fn single_trial_quantiles_coincide() {
        let mut cfg = gauss_config(IndexSet::sphere(2, 1.0), 1.0, 30);
        cfg.ascent_steps = 10;
        let s = run_trials(&cfg).unwrap();
        assert_eq!(s.values.len(), 1);
        assert_eq!(s.median, s.values[0]);
        assert_eq!(s.q90, s.values[0]);
        assert_eq!(s.q99, s.values[0]);
    }

    #[test]
    fn tail_curve_examples() {
        let mut cfg = gauss_config(IndexSet::origin(1), 2.0, 1);
        cfg.trials = 1;
        let mut s = run_trials(&cfg).unwrap();
        s.values = (1..=200).map(|i| i as f64).collect();
        let t = tail_curve(&s, &[0.0, 100.5, 1000.0]).unwrap();
        assert_eq!(t[0].probability, 1.0);
        // Binomial oracle: exactly 100 of 200 values exceed the median.
        assert_eq!(t[1].probability, 0.5);
        assert_eq!(t[2].probability, 0.0);
        assert!(tail_curve(&s, &[]).unwrap().is_empty());
        assert!(tail_curve(&s, &[2.0, 1.0]).is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = gauss_config(IndexSet::sphere(2, 1.0), 0.5, 10);
        assert!(cfg.validate().is_err());
        cfg.q = 2.0;
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        cfg.trials = 1;
        cfg.net_eps = Some(0.0);
        assert!(cfg.validate().is_err());
    }
}
