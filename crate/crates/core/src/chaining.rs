//! Admissible sequences, upper estimates of `gamma_2`, and chain diagnostics.
//!
//! An admissible sequence is a nested family `T_0 ⊆ T_1 ⊆ ...` with
//! `|T_0| = 1` and `|T_n| <= 2^(2^n)`. Any such sequence witnesses the upper
//! bound `gamma_2(T, d) <= sup_v sum_n 2^(n/2) d(v, T_n)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::index_sets::{covering_number_log_bound, dist, nearest_to_centroid, IndexSet, SetKind};

/// Largest supported level; `2^(2^6)` points is beyond any desk-scale set.
pub const MAX_LEVEL: usize = 5;

/// Default number of dyadic scales in the entropy sum.
pub const DEFAULT_EPS_LEVELS: usize = 20;

/// Distance in which chaining sums are measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric", rename_all = "snake_case")]
pub enum ChainMetric {
    L2,
    /// `kappa ||u - w||_2`, the sub-Gaussian increment metric of a linear class.
    Psi2Proxy { kappa: f64 },
}

impl ChainMetric {
    fn factor(&self) -> f64 {
        match self {
            ChainMetric::L2 => 1.0,
            ChainMetric::Psi2Proxy { kappa } => *kappa,
        }
    }

    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        self.factor() * dist(a, b)
    }
}

/// `N_n = 2^(2^n)`, saturating.
pub fn level_capacity(n: usize) -> usize {
    let e = 1u32 << n;
    if e >= usize::BITS {
        usize::MAX
    } else {
        1usize << e
    }
}

/// The integer `m*` with `2^m* <= N < 2^(m*+1)`.
pub fn critical_time(n: usize) -> u32 {
    assert!(n >= 1, "critical time needs N >= 1");
    usize::BITS - 1 - n.leading_zeros()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleSequence {
    /// `levels[n]` lists point indices of `T_n`; each level extends the previous.
    pub levels: Vec<Vec<usize>>,
    /// `projections[n][i]` is the index of `pi_n(points[i])`.
    pub projections: Vec<Vec<usize>>,
    pub metric: ChainMetric,
    pub point_count: usize,
}

impl AdmissibleSequence {
    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    /// Whether the last level contains every point, so the tail of every
    /// chain vanishes.
    pub fn is_complete(&self) -> bool {
        self.levels.last().map(Vec::len) == Some(self.point_count)
    }
}

/// Greedy farthest-point admissible sequence over a finite point cloud.
///
/// `T_0` is the point nearest the centroid; each `T_{n+1}` keeps `T_n` and
/// adds farthest points until it holds `min(2^(2^(n+1)), |points|)` points.
/// Ties go to the lowest index, both for farthest points and projections.
pub fn build_admissible_sequence(
    points: &[Vec<f64>],
    max_level: usize,
    metric: ChainMetric,
) -> Result<AdmissibleSequence> {
    if points.is_empty() {
        return invalid("cannot build an admissible sequence over no points");
    }
    if max_level > MAX_LEVEL {
        return invalid(format!("max_level {max_level} exceeds {MAX_LEVEL}"));
    }
    let n_points = points.len();
    let (first, _) = nearest_to_centroid(points);

    let mut selected = vec![first];
    let mut in_set = vec![false; n_points];
    in_set[first] = true;
    // Nearest selected point and distance, maintained incrementally.
    let mut nearest = vec![first; n_points];
    let mut gap: Vec<f64> = points.iter().map(|p| metric.distance(p, &points[first])).collect();

    let mut levels = vec![selected.clone()];
    let mut projections = vec![nearest.clone()];
    for n in 1..=max_level {
        let target = level_capacity(n).min(n_points);
        while selected.len() < target {
            let mut far = usize::MAX;
            let mut far_d = f64::NEG_INFINITY;
            for i in 0..n_points {
                if !in_set[i] && gap[i] > far_d {
                    far = i;
                    far_d = gap[i];
                }
            }
            selected.push(far);
            in_set[far] = true;
            for i in 0..n_points {
                let d = metric.distance(&points[i], &points[far]);
                // Strictly closer, or equally close with a lower index.
                if d < gap[i] || (d == gap[i] && far < nearest[i]) {
                    gap[i] = d;
                    nearest[i] = far;
                }
            }
        }
        levels.push(selected.clone());
        projections.push(nearest.clone());
    }
    Ok(AdmissibleSequence {
        levels,
        projections,
        metric,
        point_count: n_points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainingMethod {
    Dudley,
    Sequence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainingEstimate {
    pub value: f64,
    pub method: ChainingMethod,
    pub metric: ChainMetric,
    /// Dudley scales `2^-k diam`, empty for sequence estimates.
    pub eps_grid: Vec<f64>,
    /// Index of the point attaining the sup (sequence estimates only).
    pub argmax: Option<usize>,
}

/// `sum_n 2^(n/2) d(v, T_n)` for point `i`.
pub fn chain_functional(seq: &AdmissibleSequence, points: &[Vec<f64>], i: usize) -> f64 {
    seq.projections
        .iter()
        .enumerate()
        .map(|(n, proj)| {
            let p = proj[i];
            2f64.powf(n as f64 / 2.0) * seq.metric.distance(&points[i], &points[p])
        })
        .sum()
}

/// `sup_v sum_n 2^(n/2) d(v, T_n)`: an upper bound on `gamma_2` of the
/// point cloud whenever the sequence is complete.
pub fn gamma2_upper_from_sequence(
    seq: &AdmissibleSequence,
    points: &[Vec<f64>],
) -> Result<ChainingEstimate> {
    if points.len() != seq.point_count {
        return invalid("sequence was built over a different point set");
    }
    let (argmax, value) = (0..points.len())
        .map(|i| (i, chain_functional(seq, points, i)))
        .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    Ok(ChainingEstimate {
        value,
        method: ChainingMethod::Sequence,
        metric: seq.metric,
        eps_grid: Vec::new(),
        argmax: Some(argmax),
    })
}

/// Entropy-sum upper estimate
/// `sum_{k=0}^{K} 2^-k diam sqrt(ln N(T, 2^-k diam))` (up to an absolute
/// constant an upper bound on `gamma_2`).
pub fn gamma2_upper_dudley(
    set: &IndexSet,
    metric: ChainMetric,
    eps_levels: usize,
) -> Result<ChainingEstimate> {
    if eps_levels < 2 {
        return invalid("need at least two dyadic levels");
    }
    set.validate()?;
    if let SetKind::EuclideanBall { radius } = set.kind {
        if !radius.is_finite() {
            return crate::error::unsupported("unbounded set has no finite gamma_2");
        }
    }
    let diam = set.l2_diameter();
    let mut eps_grid = Vec::with_capacity(eps_levels + 1);
    let mut value = 0.0;
    for k in 0..=eps_levels {
        let eps = diam * 0.5f64.powi(k as i32);
        eps_grid.push(eps * metric.factor());
        if eps > 0.0 {
            value += eps * covering_number_log_bound(set, eps).sqrt();
        }
    }
    Ok(ChainingEstimate {
        value: value * metric.factor(),
        method: ChainingMethod::Dudley,
        metric,
        eps_grid,
        argmax: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDiagnostics {
    pub critical_time: u32,
    /// `2^(n/2) d(pi_n v, pi_{n-1} v)` for `n = 0..=max_level`, with
    /// `pi_{-1} v = 0` (the class contains the zero function).
    pub links: Vec<f64>,
    pub initial_sum: f64,
    pub terminal_sum: f64,
    pub total: f64,
}

/// Split the chain of point `i` at the critical time of `n_samples`.
///
/// Links with `n <= m*` form the initial (Gaussian-tail) segment, the rest
/// the terminal (Weibull-tail) segment.
pub fn chain_diagnostics(
    seq: &AdmissibleSequence,
    points: &[Vec<f64>],
    i: usize,
    n_samples: usize,
) -> Result<ChainDiagnostics> {
    if i >= seq.point_count || points.len() != seq.point_count {
        return invalid("point is not among the sequence's working points");
    }
    if n_samples == 0 {
        return invalid("sample count must be positive");
    }
    let m_star = critical_time(n_samples);
    let origin = vec![0.0; points[i].len()];
    let mut prev: &[f64] = &origin;
    let mut links = Vec::with_capacity(seq.projections.len());
    for (n, proj) in seq.projections.iter().enumerate() {
        let cur = &points[proj[i]];
        links.push(2f64.powf(n as f64 / 2.0) * seq.metric.distance(cur, prev));
        prev = cur;
    }
    let split = (m_star as usize + 1).min(links.len());
    let initial_sum: f64 = links[..split].iter().sum();
    let terminal_sum: f64 = links[split..].iter().sum();
    Ok(ChainDiagnostics {
        critical_time: m_star,
        links,
        initial_sum,
        terminal_sum,
        total: initial_sum + terminal_sum,
    })
}
