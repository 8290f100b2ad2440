//! Restricted isomorphy certification and diameters of random sections.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::ensembles::{
    abs_pow, gaussian_abs_moment, norm2, population_lq_norm, sample_batch, EnsembleSpec, Family,
    SampleBatch,
};
use crate::error::{invalid, unsupported, LabError, Result};
use crate::index_sets::{
    epsilon_net_with, intersect_lq_sphere, mean_width, scale, IndexSet, NetMetric, NetOptions,
};
use crate::process::{search_sup, Population, SearchAudit, SearchOptions};
use crate::rng::{mix, stream_rng, LAMBDA_STREAM, NET_STREAM, POOL_STREAM};

/// Scales applied to every audited direction.
pub const CONE_SCALES: [f64; 3] = [1.0, 2.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RadiusChoice {
    Fixed { radius: f64 },
    /// Use [`fixed_point_radius`] with the query's `theta`.
    Solve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RipQuery {
    pub ensemble: EnsembleSpec,
    pub set: IndexSet,
    pub q: f64,
    pub n: usize,
    pub radius: RadiusChoice,
    pub theta: f64,
    /// Number of base directions audited (each at every cone scale).
    pub audit_vectors: usize,
    /// Monte Carlo budget for widths and non-Gaussian population norms.
    pub mc_budget: usize,
    pub seed: u64,
}

impl RipQuery {
    pub fn new(ensemble: EnsembleSpec, set: IndexSet, q: f64, n: usize) -> Self {
        Self {
            ensemble,
            set,
            q,
            n,
            radius: RadiusChoice::Fixed { radius: 1.0 },
            theta: 1.0,
            audit_vectors: 1000,
            mc_budget: 4096,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.set.validate()?;
        if self.set.dim != self.ensemble.dim {
            return invalid("ensemble and index set dimensions differ");
        }
        if !(self.q >= 1.0) || !self.q.is_finite() {
            return invalid("q must be a finite real >= 1");
        }
        if self.n == 0 || self.audit_vectors == 0 {
            return invalid("N and the audit count must be positive");
        }
        if !(self.theta > 0.0) {
            return invalid("theta must be positive");
        }
        if let RadiusChoice::Fixed { radius } = self.radius {
            if !(radius > 0.0) {
                return invalid("the radius must be positive");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RipCertificate {
    pub verdict: Verdict,
    pub window: f64,
    pub worst_lower: f64,
    pub worst_upper: f64,
    pub violating_vector: Option<Vec<f64>>,
    pub audited: usize,
    /// True when the audited set was `{0}` and nothing was checked.
    pub vacuous: bool,
    pub radius: f64,
    pub batch_seed: u64,
    pub query: RipQuery,
}

enum NormOracle {
    Gaussian { root_moment: f64 },
    Pool(SampleBatch),
}

impl NormOracle {
    fn new(query: &RipQuery) -> Result<Self> {
        if query.ensemble.family == Family::Gaussian {
            Ok(NormOracle::Gaussian {
                root_moment: gaussian_abs_moment(query.q)?.powf(1.0 / query.q),
            })
        } else {
            let pool = sample_batch(&query.ensemble, query.mc_budget.max(2), mix(query.seed, POOL_STREAM))?;
            Ok(NormOracle::Pool(pool))
        }
    }

    fn lq_norm(&self, v: &[f64], q: f64) -> f64 {
        match self {
            NormOracle::Gaussian { root_moment } => root_moment * norm2(v),
            NormOracle::Pool(pool) => empirical_lq_norm(pool, v, q),
        }
    }
}

/// `(P_N |<X, v>|^q)^{1/q} = N^{-1/q} ||X v||_q`.
pub fn empirical_lq_norm(batch: &SampleBatch, v: &[f64], q: f64) -> f64 {
    let z = batch.project(v);
    (z.iter().map(|&x| abs_pow(x, q)).sum::<f64>() / z.len() as f64).powf(1.0 / q)
}

/// `N^{-1/q} ||X v||_q / ||<X, v>||_{L^q}` with an exact Gaussian
/// denominator. `NaN` at `v = 0`.
pub fn rip_ratio(batch: &SampleBatch, v: &[f64], q: f64) -> Result<f64> {
    let root = gaussian_abs_moment(q)?.powf(1.0 / q);
    Ok(empirical_lq_norm(batch, v, q) / (root * norm2(v)))
}

fn is_origin_set(set: &IndexSet) -> bool {
    set.finite_points()
        .is_some_and(|ps| ps.iter().all(|p| p.iter().all(|&x| x == 0.0)))
}

/// Radius of the audited section and the set it cuts out of `K`.
fn audit_set(query: &RipQuery) -> Result<(f64, IndexSet)> {
    let radius = match query.radius {
        RadiusChoice::Fixed { radius } => radius,
        RadiusChoice::Solve => {
            let fp = fixed_point_radius(
                &query.set,
                query.q,
                query.n,
                query.theta,
                query.mc_budget,
                query.seed,
            )?;
            if fp.radius > 0.0 {
                fp.radius
            } else {
                // Any radius works; audit at the largest one.
                fp.upper
            }
        }
    };
    let section = if query.ensemble.family == Family::Gaussian {
        intersect_lq_sphere(&query.set, radius, query.q, &query.ensemble)?
    } else {
        // Isotropic ensembles: the L^2 sphere is the Euclidean sphere.
        query.set.clone().section(radius)
    };
    if section.is_empty() {
        return Err(LabError::InvalidQuery(format!(
            "the index set does not meet the L^q sphere of radius {radius}"
        )));
    }
    Ok((radius, section))
}

/// Sample one design matrix and audit the two-sided ratio window.
pub fn rip_certify(query: &RipQuery, window: f64) -> Result<RipCertificate> {
    query.validate()?;
    let batch = sample_batch(&query.ensemble, query.n, query.seed)?;
    rip_certify_batch(&batch, query, window)
}

/// Audit a given design matrix (for instance one read from a file).
pub fn rip_certify_batch(
    batch: &SampleBatch,
    query: &RipQuery,
    window: f64,
) -> Result<RipCertificate> {
    query.validate()?;
    if !(window > 0.0 && window < 1.0) {
        return invalid("the ratio window must lie in (0, 1)");
    }
    if batch.dim() != query.set.dim {
        return invalid("batch and index set dimensions differ");
    }
    let mut cert = RipCertificate {
        verdict: Verdict::Certified,
        window,
        worst_lower: f64::INFINITY,
        worst_upper: 0.0,
        violating_vector: None,
        audited: 0,
        vacuous: false,
        radius: 0.0,
        batch_seed: batch.seed,
        query: query.clone(),
    };
    if is_origin_set(&query.set) {
        cert.vacuous = true;
        cert.worst_lower = 1.0;
        cert.worst_upper = 1.0;
        return Ok(cert);
    }
    let (radius, section) = audit_set(query)?;
    cert.radius = radius;
    let net = epsilon_net_with(
        &section,
        (0.05 * section.l2_diameter()).max(1e-9),
        NetMetric::L2,
        mix(query.seed, NET_STREAM),
        NetOptions {
            max_points: query.audit_vectors,
            ..NetOptions::default()
        },
    )?;
    let oracle = NormOracle::new(query)?;
    let mut lower_arg: Option<Vec<f64>> = None;
    let mut upper_arg: Option<Vec<f64>> = None;
    for base in &net.points {
        if norm2(base) == 0.0 {
            continue;
        }
        for &alpha in &CONE_SCALES {
            let v = scale(base, alpha);
            let ratio = empirical_lq_norm(batch, &v, query.q) / oracle.lq_norm(&v, query.q);
            cert.audited += 1;
            if ratio < cert.worst_lower {
                cert.worst_lower = ratio;
                lower_arg = Some(v.clone());
            }
            if ratio > cert.worst_upper {
                cert.worst_upper = ratio;
                upper_arg = Some(v);
            }
        }
    }
    if cert.audited == 0 {
        cert.vacuous = true;
        cert.worst_lower = 1.0;
        cert.worst_upper = 1.0;
        return Ok(cert);
    }
    let lower_gap = window - cert.worst_lower;
    let upper_gap = cert.worst_upper - 1.0 / window;
    if lower_gap > 0.0 || upper_gap > 0.0 {
        cert.verdict = Verdict::Violated;
        // Record the more severe side, measured on a log scale.
        let low_sev = (window / cert.worst_lower).ln();
        let up_sev = (cert.worst_upper * window).ln();
        cert.violating_vector = if low_sev >= up_sev { lower_arg } else { upper_arg };
    }
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRadius {
    /// Smallest feasible radius; `upper` when `infeasible`.
    pub radius: f64,
    pub infeasible: bool,
    /// Upper end of the search bracket, `m_q^{1/q} max_{v in K} ||v||_2`.
    pub upper: f64,
    /// Number of width evaluations.
    pub evaluations: usize,
}

/// Smallest `R` with `l*(K ∩ R S_{L^q}) <= theta R N^{min(1/2, 1/q)}`
/// for the Gaussian ensemble.
///
/// Widths are Monte Carlo estimates with common random numbers across radii
/// and enter the test as `estimate + 2 se`. For sets whose sections are
/// nonempty on an interval of radii the answer is bisected; sets of a single
/// norm are checked at that norm, and finite sets at each of their norms.
pub fn fixed_point_radius(
    set: &IndexSet,
    q: f64,
    n: usize,
    theta: f64,
    mc_budget: usize,
    seed: u64,
) -> Result<FixedPointRadius> {
    if !(theta > 0.0) || n == 0 || !(q >= 1.0) {
        return invalid("need theta > 0, N >= 1 and q >= 1");
    }
    set.validate()?;
    let spec = EnsembleSpec::gaussian(set.dim);
    let root = gaussian_abs_moment(q)?.powf(1.0 / q);
    let upper = root * set.max_norm();
    if !upper.is_finite() {
        return unsupported("the radius bracket needs a bounded set");
    }
    let rate = (n as f64).powf(0.5f64.min(1.0 / q));
    let mut evaluations = 0;
    let mut feasible = |r: f64| -> Result<bool> {
        if r <= 0.0 {
            return Ok(true);
        }
        let section = intersect_lq_sphere(set, r, q, &spec)?;
        if section.is_empty() {
            return Ok(true);
        }
        evaluations += 1;
        let w = mean_width(&section, mc_budget, seed)?;
        Ok(w.value + 2.0 * w.std_error <= theta * r * rate)
    };
    let done = |radius: f64, infeasible: bool, evaluations: usize| FixedPointRadius {
        radius,
        infeasible,
        upper,
        evaluations,
    };
    if upper == 0.0 {
        return Ok(done(0.0, false, 0));
    }

    let discrete_radii: Option<Vec<f64>> = if let Some(points) = set.finite_points() {
        let mut norms: Vec<f64> = points.iter().map(|p| root * norm2(p)).filter(|&r| r > 0.0).collect();
        norms.sort_by(f64::total_cmp);
        norms.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.max(1.0));
        Some(norms)
    } else if set.min_norm() > 0.0 && set.min_norm() == set.max_norm() {
        Some(vec![upper])
    } else {
        None
    };

    if let Some(radii) = discrete_radii {
        // Smallest radius from which every nonempty section is feasible.
        let mut answer = 0.0;
        for &r in radii.iter().rev() {
            if !feasible(r)? {
                answer = r;
                break;
            }
        }
        let top = radii.last().copied().unwrap_or(0.0);
        return Ok(if answer == top && top > 0.0 {
            done(upper, true, evaluations)
        } else if answer == 0.0 {
            done(0.0, false, evaluations)
        } else {
            // The next radius above the last failure.
            let next = radii.iter().copied().find(|&r| r > answer).unwrap_or(upper);
            done(next, false, evaluations)
        });
    }

    if !feasible(upper)? {
        return Ok(done(upper, true, evaluations));
    }
    let (mut lo, mut hi) = (0.0, upper);
    while hi - lo > 1e-6 * upper {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let radius = if lo == 0.0 { 0.0 } else { hi };
    Ok(done(radius, false, evaluations))
}

/// `sup{||X^T lambda||_{K°} : ||lambda||_p = 1} = sup{||X v||_q : v in K}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionEstimate {
    pub p: f64,
    pub q: f64,
    /// `v`-side estimate `sup_{v in K} ||X v||_q`.
    pub value: f64,
    pub argmax: Vec<f64>,
    pub search: SearchAudit,
    /// `lambda`-side estimate over a random net of `S_p^N`, when requested.
    pub lambda_side: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionOptions {
    pub net_eps_fraction: f64,
    pub net_max_points: usize,
    pub search: SearchOptions,
    /// Size of the `lambda`-side net; zero skips the audit.
    pub lambda_points: usize,
    pub seed: u64,
}

impl Default for SectionOptions {
    fn default() -> Self {
        Self {
            net_eps_fraction: 0.05,
            net_max_points: 64,
            search: SearchOptions {
                restarts: 4,
                steps: 200,
            },
            lambda_points: 0,
            seed: 0,
        }
    }
}

/// Conjugate exponent `p / (p - 1)`, with `p = inf` giving 1.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return invalid(format!("p must exceed 1, got {p}"));
    }
    Ok(if p.is_infinite() { 1.0 } else { p / (p - 1.0) })
}

/// Estimate the `l_p` diameter of the random section through the duality
/// identity, searching `v in K` for the largest `||X v||_q`.
pub fn section_diameter(
    batch: &SampleBatch,
    set: &IndexSet,
    p: f64,
    opts: &SectionOptions,
) -> Result<SectionEstimate> {
    let q = conjugate_exponent(p)?;
    set.validate()?;
    if set.dim != batch.dim() {
        return invalid("batch and index set dimensions differ");
    }
    let net = if set.is_finite_set() {
        None
    } else {
        Some(epsilon_net_with(
            set,
            (opts.net_eps_fraction * set.l2_diameter()).max(1e-9),
            NetMetric::L2,
            mix(opts.seed, NET_STREAM),
            NetOptions {
                max_points: opts.net_max_points.max(1),
                ..NetOptions::default()
            },
        )?)
    };
    let sup = search_sup(batch, set, net.as_ref(), q, &Population::Zero, opts.search)?;
    let value = (batch.n() as f64 * sup.value).powf(1.0 / q);
    let lambda_side = if opts.lambda_points > 0 {
        let lambdas = lp_sphere_points(batch.n(), p, opts.lambda_points, opts.seed);
        let mut best = f64::NEG_INFINITY;
        for l in &lambdas {
            best = best.max(set.support(&batch.transpose_apply(l))?);
        }
        Some(best)
    } else {
        None
    };
    Ok(SectionEstimate {
        p,
        q,
        value,
        argmax: sup.argmax,
        search: sup.audit,
        lambda_side,
    })
}

/// Random points of the unit `l_p` sphere in `R^n`: normalized Gaussian
/// directions, with the signed standard basis vectors placed first.
pub fn lp_sphere_points(n: usize, p: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = stream_rng(seed, LAMBDA_STREAM);
    let mut points = Vec::with_capacity(count);
    for i in 0..(2 * n).min(count) {
        let mut e = vec![0.0; n];
        e[i / 2] = if i % 2 == 0 { 1.0 } else { -1.0 };
        points.push(e);
    }
    while points.len() < count {
        let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = lp_norm(&g, p);
        if norm > 0.0 {
            points.push(g.iter().map(|x| x / norm).collect());
        }
    }
    points
}

pub fn lp_norm(v: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    } else {
        v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// `min ||X^T lambda||_2` over random points of `S_p^N`, an upper estimate
/// of the smallest value of the `B_2^d` polar norm on the section.
pub fn section_lower_audit(batch: &SampleBatch, p: f64, points: usize, seed: u64) -> Result<f64> {
    conjugate_exponent(p)?;
    if points == 0 {
        return invalid("the audit needs at least one point");
    }
    Ok(lp_sphere_points(batch.n(), p, points, seed)
        .iter()
        .map(|l| norm2(&batch.transpose_apply(l)))
        .fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DmBound {
    pub bound: f64,
    /// `c (l* / diam)^{min(2, p/(p-1))}`.
    pub dimension_threshold: f64,
    /// Whether `N` lies below the threshold.
    pub below_threshold: bool,
}

/// Diameter bound for random sections: `C l*` for `p <= 2`, else
/// `C l*^{2(p-1)/p} diam^{(2-p)/p}`.
pub fn dm_upper_bound(ellstar: f64, diam: f64, n: usize, p: f64, big_c: f64, small_c: f64) -> Result<DmBound> {
    let q = conjugate_exponent(p)?;
    if !(ellstar >= 0.0) || !(diam > 0.0) {
        return invalid("need l* >= 0 and diam > 0");
    }
    let bound = if p <= 2.0 {
        big_c * ellstar
    } else if p.is_infinite() {
        big_c * ellstar * ellstar / diam
    } else {
        big_c * ellstar.powf(2.0 * (p - 1.0) / p) * diam.powf((2.0 - p) / p)
    };
    let dimension_threshold = small_c * (ellstar / diam).powf(2f64.min(q));
    Ok(DmBound {
        bound,
        dimension_threshold,
        below_threshold: (n as f64) <= dimension_threshold,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// `max_v ||<X,v>||_{L^2} / ||<X,v>||_{L^q}`.
    pub max_l2_over_lq: f64,
    /// `max_v ||<X,v>||_{L^q} / ||<X,v>||_{L^2}`, reported for `q >= 2`.
    pub max_lq_over_l2: Option<f64>,
    pub ratios: Vec<f64>,
}

/// Empirical constants of the `L^q`/`L^2` norm equivalence on given vectors.
pub fn lq_l2_equivalence_check(
    spec: &EnsembleSpec,
    q: f64,
    vectors: &[Vec<f64>],
    mc_budget: usize,
    seed: u64,
) -> Result<EquivalenceReport> {
    if !(q >= 1.0) {
        return invalid("q must be >= 1");
    }
    let mut ratios = Vec::with_capacity(vectors.len());
    for v in vectors {
        if norm2(v) == 0.0 {
            continue;
        }
        let l2 = population_lq_norm(spec, v, 2.0, mc_budget, seed)?.value;
        let lq = population_lq_norm(spec, v, q, mc_budget, seed)?.value;
        ratios.push(l2 / lq);
    }
    let max_l2_over_lq = ratios.iter().cloned().fold(0.0, f64::max);
    let max_lq_over_l2 = (q >= 2.0).then(|| ratios.iter().map(|r| 1.0 / r).fold(0.0, f64::max));
    Ok(EquivalenceReport {
        max_l2_over_lq,
        max_lq_over_l2,
        ratios,
    })
}
