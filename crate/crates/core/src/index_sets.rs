//! Index sets `T ⊂ R^d` defining the linear classes `{<., v> : v in T}`.

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::ensembles::{dot, gaussian_abs_moment, norm2, EnsembleSpec, Estimate, Family};
use crate::error::{invalid, unsupported, LabError, Result};
use crate::rng::{stream_rng, NET_STREAM, WIDTH_STREAM};
use crate::stats::mean_and_se;

/// Membership tolerance for generated points.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetKind {
    EuclideanSphere { radius: f64 },
    /// `radius` may be `f64::INFINITY` (all of `R^d`); only sections of it are
    /// bounded.
    EuclideanBall { radius: f64 },
    L1Ball { radius: f64 },
    SparseSphere { sparsity: usize, radius: f64 },
    /// Solid ellipsoid `sum_i v_i^2 / a_i^2 <= 1`.
    Ellipsoid { semiaxes: Vec<f64> },
    Finite { points: Vec<Vec<f64>> },
    Scaled { inner: Box<IndexSet>, factor: f64 },
    /// `inner ∩ radius * S^{d-1}`.
    Section { inner: Box<IndexSet>, radius: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSet {
    pub dim: usize,
    pub kind: SetKind,
}

impl IndexSet {
    pub fn sphere(dim: usize, radius: f64) -> Self {
        Self {
            dim,
            kind: SetKind::EuclideanSphere { radius },
        }
    }

    pub fn ball(dim: usize, radius: f64) -> Self {
        Self {
            dim,
            kind: SetKind::EuclideanBall { radius },
        }
    }

    pub fn l1_ball(dim: usize, radius: f64) -> Self {
        Self {
            dim,
            kind: SetKind::L1Ball { radius },
        }
    }

    pub fn sparse_sphere(dim: usize, sparsity: usize, radius: f64) -> Self {
        Self {
            dim,
            kind: SetKind::SparseSphere { sparsity, radius },
        }
    }

    pub fn ellipsoid(semiaxes: Vec<f64>) -> Self {
        Self {
            dim: semiaxes.len(),
            kind: SetKind::Ellipsoid { semiaxes },
        }
    }

    pub fn finite(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).unwrap_or(0);
        let set = Self {
            dim,
            kind: SetKind::Finite { points },
        };
        set.validate()?;
        Ok(set)
    }

    /// The singleton `{0}`.
    pub fn origin(dim: usize) -> Self {
        Self {
            dim,
            kind: SetKind::Finite {
                points: vec![vec![0.0; dim]],
            },
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            kind: SetKind::Scaled {
                inner: Box::new(self),
                factor,
            },
        }
    }

    pub fn section(self, radius: f64) -> Self {
        Self {
            dim: self.dim,
            kind: SetKind::Section {
                inner: Box::new(self),
                radius,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return invalid("index set dimension must be positive");
        }
        let positive = |r: f64, what: &str| -> Result<()> {
            if r > 0.0 {
                Ok(())
            } else {
                invalid(format!("{what} must be positive, got {r}"))
            }
        };
        match &self.kind {
            SetKind::EuclideanSphere { radius }
            | SetKind::L1Ball { radius } => {
                positive(*radius, "radius")?;
                if !radius.is_finite() {
                    return invalid("radius must be finite");
                }
            }
            SetKind::EuclideanBall { radius } => positive(*radius, "radius")?,
            SetKind::SparseSphere { sparsity, radius } => {
                positive(*radius, "radius")?;
                if *sparsity == 0 || *sparsity > self.dim {
                    return invalid(format!("sparsity {sparsity} outside 1..={}", self.dim));
                }
            }
            SetKind::Ellipsoid { semiaxes } => {
                if semiaxes.len() != self.dim {
                    return invalid("semiaxes length must equal dimension");
                }
                for &a in semiaxes {
                    positive(a, "semiaxis")?;
                }
            }
            SetKind::Finite { points } => {
                if points.is_empty() {
                    return invalid("finite set must be nonempty");
                }
                if points.iter().any(|p| p.len() != self.dim) {
                    return invalid("finite set points have inconsistent dimension");
                }
            }
            SetKind::Scaled { inner, factor } => {
                positive(*factor, "scale factor")?;
                if inner.dim != self.dim {
                    return invalid("scaled set dimension mismatch");
                }
                inner.validate()?;
            }
            SetKind::Section { inner, radius } => {
                positive(*radius, "section radius")?;
                if inner.dim != self.dim {
                    return invalid("section dimension mismatch");
                }
                inner.validate()?;
            }
        }
        Ok(())
    }

    pub fn is_finite_set(&self) -> bool {
        match &self.kind {
            SetKind::Finite { .. } => true,
            SetKind::Scaled { inner, .. } => inner.is_finite_set(),
            SetKind::Section { inner, .. } => inner.is_finite_set(),
            _ => false,
        }
    }

    /// Explicit point list for finite sets (after scaling / sectioning).
    pub fn finite_points(&self) -> Option<Vec<Vec<f64>>> {
        match &self.kind {
            SetKind::Finite { points } => Some(points.clone()),
            SetKind::Scaled { inner, factor } => inner
                .finite_points()
                .map(|ps| ps.into_iter().map(|p| scale(&p, *factor)).collect()),
            SetKind::Section { inner, radius } => inner.finite_points().map(|ps| {
                ps.into_iter()
                    .filter(|p| on_radius(norm2(p), *radius))
                    .collect()
            }),
            _ => None,
        }
    }

    /// Whether `v` satisfies the defining constraint up to relative tolerance `tol`.
    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let slack = |r: f64| tol * r.max(1.0);
        match &self.kind {
            SetKind::EuclideanSphere { radius } => (norm2(v) - radius).abs() <= slack(*radius),
            SetKind::EuclideanBall { radius } => norm2(v) <= radius + slack(*radius),
            SetKind::L1Ball { radius } => {
                v.iter().map(|x| x.abs()).sum::<f64>() <= radius + slack(*radius)
            }
            SetKind::SparseSphere { sparsity, radius } => {
                v.iter().filter(|&&x| x != 0.0).count() <= *sparsity
                    && (norm2(v) - radius).abs() <= slack(*radius)
            }
            SetKind::Ellipsoid { semiaxes } => {
                v.iter().zip(semiaxes).map(|(x, a)| (x / a).powi(2)).sum::<f64>() <= 1.0 + tol
            }
            SetKind::Finite { points } => points.iter().any(|p| {
                let scale = norm2(p).max(1.0);
                dist(p, v) <= tol * scale
            }),
            SetKind::Scaled { inner, factor } => inner.contains(&scale(v, 1.0 / factor), tol),
            SetKind::Section { inner, radius } => {
                (norm2(v) - radius).abs() <= slack(*radius) && inner.contains(v, tol)
            }
        }
    }

    pub fn contains_origin(&self) -> bool {
        match &self.kind {
            SetKind::EuclideanBall { .. } | SetKind::L1Ball { .. } | SetKind::Ellipsoid { .. } => {
                true
            }
            SetKind::EuclideanSphere { .. }
            | SetKind::SparseSphere { .. }
            | SetKind::Section { .. } => false,
            SetKind::Finite { points } => points.iter().any(|p| p.iter().all(|&x| x == 0.0)),
            SetKind::Scaled { inner, .. } => inner.contains_origin(),
        }
    }

    /// `max ||v||_2` over the set (the "radius"; infinite for `R^d`).
    pub fn max_norm(&self) -> f64 {
        match &self.kind {
            SetKind::EuclideanSphere { radius }
            | SetKind::EuclideanBall { radius }
            | SetKind::L1Ball { radius }
            | SetKind::SparseSphere { radius, .. } => *radius,
            SetKind::Ellipsoid { semiaxes } => semiaxes.iter().cloned().fold(0.0, f64::max),
            SetKind::Finite { points } => points.iter().map(|p| norm2(p)).fold(0.0, f64::max),
            SetKind::Scaled { inner, factor } => factor * inner.max_norm(),
            SetKind::Section { radius, .. } => *radius,
        }
    }

    /// `min ||v||_2` over the set.
    pub fn min_norm(&self) -> f64 {
        match &self.kind {
            SetKind::EuclideanSphere { radius } | SetKind::SparseSphere { radius, .. } => *radius,
            SetKind::EuclideanBall { .. } | SetKind::L1Ball { .. } | SetKind::Ellipsoid { .. } => {
                0.0
            }
            SetKind::Finite { points } => points
                .iter()
                .map(|p| norm2(p))
                .fold(f64::INFINITY, f64::min),
            SetKind::Scaled { inner, factor } => factor * inner.min_norm(),
            SetKind::Section { radius, .. } => *radius,
        }
    }

    /// True when the set is provably empty (only sections can be).
    pub fn is_empty(&self) -> bool {
        match &self.kind {
            SetKind::Section { inner, radius } => {
                if inner.is_empty() {
                    return true;
                }
                if let Some(points) = self.finite_points() {
                    return points.is_empty();
                }
                let r = *radius;
                r > inner.max_norm() * (1.0 + 1e-12) || r < inner.min_norm() * (1.0 - 1e-12)
            }
            SetKind::Scaled { inner, .. } => inner.is_empty(),
            _ => false,
        }
    }

    /// Largest pairwise Euclidean distance.
    pub fn l2_diameter(&self) -> f64 {
        match &self.kind {
            SetKind::EuclideanSphere { radius }
            | SetKind::EuclideanBall { radius }
            | SetKind::L1Ball { radius } => 2.0 * radius,
            SetKind::SparseSphere { radius, .. } => 2.0 * radius,
            SetKind::Ellipsoid { .. } => 2.0 * self.max_norm(),
            SetKind::Finite { points } => finite_diameter(points),
            SetKind::Scaled { inner, factor } => factor * inner.l2_diameter(),
            SetKind::Section { inner, radius } => {
                if let Some(points) = self.finite_points() {
                    return finite_diameter(&points);
                }
                if self.is_empty() {
                    return 0.0;
                }
                // Every remaining inner kind is symmetric, so antipodes survive.
                let _ = inner;
                2.0 * radius
            }
        }
    }

    /// A canonical member: the origin when contained, else a fixed point.
    pub fn center_point(&self) -> Result<Vec<f64>> {
        if self.contains_origin() {
            return Ok(vec![0.0; self.dim]);
        }
        let mut e1 = vec![0.0; self.dim];
        match &self.kind {
            SetKind::EuclideanSphere { radius } | SetKind::SparseSphere { radius, .. } => {
                e1[0] = *radius;
                Ok(e1)
            }
            SetKind::Finite { points } => Ok(nearest_to_centroid(points).1.clone()),
            SetKind::Scaled { inner, factor } => Ok(scale(&inner.center_point()?, *factor)),
            SetKind::Section { .. } => {
                let mut rng = stream_rng(0, NET_STREAM);
                self.sample_point(&mut rng)
            }
            _ => unreachable!("origin-containing kinds handled above"),
        }
    }

    /// Random member of the set (not necessarily uniform for sections).
    pub fn sample_point(&self, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let d = self.dim;
        match &self.kind {
            SetKind::EuclideanSphere { radius } => Ok(scale(&random_direction(d, rng), *radius)),
            SetKind::EuclideanBall { radius } => {
                if !radius.is_finite() {
                    return unsupported("cannot sample from an unbounded ball");
                }
                let u: f64 = rng.random();
                Ok(scale(&random_direction(d, rng), radius * u.powf(1.0 / d as f64)))
            }
            SetKind::L1Ball { radius } => {
                // Uniform on the l1 ball: signed spacings of d+1 exponentials.
                let e: Vec<f64> = (0..=d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
                let total: f64 = e.iter().sum();
                Ok((0..d)
                    .map(|i| {
                        let s = if rng.random::<bool>() { 1.0 } else { -1.0 };
                        s * radius * e[i] / total
                    })
                    .collect())
            }
            SetKind::SparseSphere { sparsity, radius } => {
                let mut v = vec![0.0; d];
                for j in index::sample(rng, d, *sparsity) {
                    v[j] = rng.sample(StandardNormal);
                }
                let n = norm2(&v);
                if n == 0.0 {
                    v[0] = 1.0;
                    return Ok(scale(&v, *radius));
                }
                Ok(scale(&v, radius / n))
            }
            SetKind::Ellipsoid { semiaxes } => {
                let u: f64 = rng.random();
                let dir = random_direction(d, rng);
                let r = u.powf(1.0 / d as f64);
                Ok(dir.iter().zip(semiaxes).map(|(x, a)| r * x * a).collect())
            }
            SetKind::Finite { points } => Ok(points[rng.random_range(0..points.len())].clone()),
            SetKind::Scaled { inner, factor } => Ok(scale(&inner.sample_point(rng)?, *factor)),
            SetKind::Section { inner, radius } => sample_on_radius(inner, *radius, rng),
        }
    }

    /// Map `v` back into the set (exact Euclidean projection for spheres,
    /// balls, l1 balls and sparse spheres; radial retraction for ellipsoids;
    /// nearest point for finite sets).
    pub fn retract(&self, v: &[f64]) -> Vec<f64> {
        match &self.kind {
            SetKind::EuclideanSphere { radius } => to_radius(v, *radius),
            SetKind::EuclideanBall { radius } => {
                let n = norm2(v);
                if n > *radius {
                    scale(v, radius / n)
                } else {
                    v.to_vec()
                }
            }
            SetKind::L1Ball { radius } => project_l1(v, *radius),
            SetKind::SparseSphere { sparsity, radius } => {
                to_radius(&keep_top(v, *sparsity), *radius)
            }
            SetKind::Ellipsoid { semiaxes } => {
                let g: f64 = v.iter().zip(semiaxes).map(|(x, a)| (x / a).powi(2)).sum();
                if g > 1.0 {
                    scale(v, 1.0 / g.sqrt())
                } else {
                    v.to_vec()
                }
            }
            SetKind::Finite { points } => points
                .iter()
                .min_by(|a, b| dist(a, v).total_cmp(&dist(b, v)))
                .cloned()
                .unwrap_or_default(),
            SetKind::Scaled { inner, factor } => {
                scale(&inner.retract(&scale(v, 1.0 / factor)), *factor)
            }
            SetKind::Section { inner, radius } => to_radius(&inner.retract(v), *radius),
        }
    }

    /// Support function `sup_{v in T} <v, w>` (the `K°` norm of `w` for
    /// symmetric bodies).
    pub fn support(&self, w: &[f64]) -> Result<f64> {
        match &self.kind {
            SetKind::EuclideanSphere { radius } | SetKind::EuclideanBall { radius } => {
                Ok(radius * norm2(w))
            }
            SetKind::L1Ball { radius } => Ok(radius * w.iter().fold(0.0_f64, |m, x| m.max(x.abs()))),
            SetKind::SparseSphere { sparsity, radius } => Ok(radius * top_s_norm(w, *sparsity)),
            SetKind::Ellipsoid { semiaxes } => Ok(w
                .iter()
                .zip(semiaxes)
                .map(|(x, a)| (x * a).powi(2))
                .sum::<f64>()
                .sqrt()),
            SetKind::Finite { points } => Ok(points
                .iter()
                .map(|p| dot(p, w))
                .fold(f64::NEG_INFINITY, f64::max)),
            SetKind::Scaled { inner, factor } => Ok(factor * inner.support(w)?),
            SetKind::Section { inner, radius } => section_support(inner, *radius, w),
        }
    }
}

fn on_radius(norm: f64, radius: f64) -> bool {
    (norm - radius).abs() <= 1e-9 * radius.max(1.0)
}

fn section_support(inner: &IndexSet, r: f64, w: &[f64]) -> Result<f64> {
    if inner.section_empty_at(r) {
        return invalid("empty section");
    }
    match &inner.kind {
        SetKind::EuclideanSphere { .. } | SetKind::EuclideanBall { .. } => Ok(r * norm2(w)),
        SetKind::SparseSphere { sparsity, .. } => Ok(r * top_s_norm(w, *sparsity)),
        SetKind::Finite { points } => Ok(points
            .iter()
            .filter(|p| on_radius(norm2(p), r))
            .map(|p| dot(p, w))
            .fold(f64::NEG_INFINITY, f64::max)),
        SetKind::Scaled { inner, factor } => Ok(factor * section_support(inner, r / factor, w)?),
        SetKind::Section { inner, radius } if on_radius(r, *radius) => {
            section_support(inner, r, w)
        }
        _ => unsupported(format!(
            "no closed-form support function for a sphere section of {:?}",
            kind_name(&inner.kind)
        )),
    }
}

impl IndexSet {
    fn section_empty_at(&self, r: f64) -> bool {
        self.clone().section(r).is_empty()
    }
}

fn sample_on_radius(inner: &IndexSet, r: f64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    if inner.section_empty_at(r) {
        return Err(LabError::InvalidQuery(format!(
            "section at radius {r} is empty"
        )));
    }
    let d = inner.dim;
    match &inner.kind {
        SetKind::EuclideanSphere { .. } | SetKind::EuclideanBall { .. } => {
            Ok(scale(&random_direction(d, rng), r))
        }
        SetKind::SparseSphere { .. } => inner.sample_point(rng).map(|p| to_radius(&p, r)),
        SetKind::Finite { points } => {
            let on: Vec<&Vec<f64>> = points.iter().filter(|p| on_radius(norm2(p), r)).collect();
            Ok(on[rng.random_range(0..on.len())].clone())
        }
        SetKind::Scaled { inner, factor } => {
            Ok(scale(&sample_on_radius(inner, r / factor, rng)?, *factor))
        }
        SetKind::Section { inner, .. } => sample_on_radius(inner, r, rng),
        SetKind::L1Ball { .. } | SetKind::Ellipsoid { .. } => {
            // Rejection: radial rescaling of a random member.
            for _ in 0..10_000 {
                let p = inner.sample_point(rng)?;
                let cand = to_radius(&p, r);
                if inner.contains(&cand, MEMBERSHIP_TOL) {
                    return Ok(cand);
                }
            }
            unsupported("rejection sampling of the sphere section did not succeed")
        }
    }
}

fn kind_name(kind: &SetKind) -> &'static str {
    match kind {
        SetKind::EuclideanSphere { .. } => "euclidean_sphere",
        SetKind::EuclideanBall { .. } => "euclidean_ball",
        SetKind::L1Ball { .. } => "l1_ball",
        SetKind::SparseSphere { .. } => "sparse_sphere",
        SetKind::Ellipsoid { .. } => "ellipsoid",
        SetKind::Finite { .. } => "finite",
        SetKind::Scaled { .. } => "scaled",
        SetKind::Section { .. } => "section",
    }
}

pub(crate) fn scale(v: &[f64], c: f64) -> Vec<f64> {
    v.iter().map(|x| x * c).collect()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn to_radius(v: &[f64], r: f64) -> Vec<f64> {
    let n = norm2(v);
    if n == 0.0 {
        let mut e = vec![0.0; v.len()];
        e[0] = r;
        return e;
    }
    scale(v, r / n)
}

fn random_direction(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm2(&g);
        if n > 0.0 {
            return scale(&g, 1.0 / n);
        }
    }
}

fn keep_top(v: &[f64], s: usize) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[b].abs().total_cmp(&v[a].abs()).then(a.cmp(&b)));
    let mut out = vec![0.0; v.len()];
    for &j in idx.iter().take(s) {
        out[j] = v[j];
    }
    out
}

fn top_s_norm(w: &[f64], s: usize) -> f64 {
    let mut sq: Vec<f64> = w.iter().map(|x| x * x).collect();
    sq.sort_by(|a, b| b.total_cmp(a));
    sq.iter().take(s).sum::<f64>().sqrt()
}

/// Euclidean projection onto the l1 ball (sort-and-threshold).
fn project_l1(v: &[f64], r: f64) -> Vec<f64> {
    let l1: f64 = v.iter().map(|x| x.abs()).sum();
    if l1 <= r {
        return v.to_vec();
    }
    let mut u: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cum += uk;
        let t = (cum - r) / (k as f64 + 1.0);
        if uk - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    v.iter()
        .map(|&x| x.signum() * (x.abs() - theta).max(0.0))
        .collect()
}

fn finite_diameter(points: &[Vec<f64>]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(dist(a, b));
        }
    }
    best
}

/// Index and point of the member closest to the centroid (lowest index on ties).
pub(crate) fn nearest_to_centroid(points: &[Vec<f64>]) -> (usize, &Vec<f64>) {
    let d = points[0].len();
    let mut c = vec![0.0; d];
    for p in points {
        for (ci, x) in c.iter_mut().zip(p) {
            *ci += x;
        }
    }
    let n = points.len() as f64;
    c.iter_mut().for_each(|x| *x /= n);
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        let dd = dist(p, &c);
        if dd < best_d {
            best = i;
            best_d = dd;
        }
    }
    (best, &points[best])
}

/// Metric in which a net's resolution is measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric", rename_all = "snake_case")]
pub enum NetMetric {
    L2,
    /// `d(u, w) = kappa ||u - w||_2`.
    Psi2Proxy { kappa: f64 },
}

impl NetMetric {
    pub fn factor(&self) -> f64 {
        match self {
            NetMetric::L2 => 1.0,
            NetMetric::Psi2Proxy { kappa } => *kappa,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Net {
    pub points: Vec<Vec<f64>>,
    pub eps: f64,
    pub metric: NetMetric,
    /// True when the construction stopped at the point cap rather than by
    /// the failure streak; the covering guarantee is then void.
    pub truncated: bool,
}

impl Net {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest distance (in the net metric) from `count` random members of
    /// `set` to their nearest net point.
    pub fn audit(&self, set: &IndexSet, count: usize, seed: u64) -> Result<f64> {
        let mut rng = stream_rng(seed, crate::rng::AUDIT_STREAM);
        let mut worst: f64 = 0.0;
        for _ in 0..count {
            let p = set.sample_point(&mut rng)?;
            let nearest = self
                .points
                .iter()
                .map(|q| dist(q, &p))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(nearest);
        }
        Ok(worst * self.metric.factor())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetOptions {
    /// Stop after this many consecutive rejected candidates.
    pub failure_streak: usize,
    pub max_points: usize,
}

impl Default for NetOptions {
    fn default() -> Self {
        Self {
            failure_streak: 200,
            max_points: 10_000,
        }
    }
}

/// Euclidean-metric net with default options.
pub fn epsilon_net(set: &IndexSet, eps: f64, seed: u64) -> Result<Net> {
    epsilon_net_with(set, eps, NetMetric::L2, seed, NetOptions::default())
}

/// Random greedy packing.
///
/// Finite sets are covered exactly by a greedy pass in index order. Other
/// sets draw random members and keep those at distance at least `eps / 2`
/// from every kept point until `failure_streak` consecutive candidates are
/// rejected, so any member left uncovered sits in an `eps / 2` ball that the
/// sampler kept missing. The origin is placed first when the set contains it.
pub fn epsilon_net_with(
    set: &IndexSet,
    eps: f64,
    metric: NetMetric,
    seed: u64,
    opts: NetOptions,
) -> Result<Net> {
    if !(eps > 0.0) {
        return invalid(format!("net resolution must be positive, got {eps}"));
    }
    set.validate()?;
    if set.is_empty() {
        return Err(LabError::InvalidQuery("cannot build a net of an empty set".into()));
    }
    let eps_l2 = eps / metric.factor();
    let done = |points: Vec<Vec<f64>>, truncated: bool| Net {
        points,
        eps,
        metric,
        truncated,
    };

    if let Some(points) = set.finite_points() {
        let mut kept: Vec<Vec<f64>> = Vec::new();
        for p in points {
            if kept.iter().all(|k| dist(k, &p) > eps_l2) && !kept.contains(&p) {
                kept.push(p);
            }
        }
        return Ok(done(kept, false));
    }

    if eps_l2 >= set.l2_diameter() {
        return Ok(done(vec![set.center_point()?], false));
    }

    let mut rng = stream_rng(seed, NET_STREAM);
    let mut kept: Vec<Vec<f64>> = Vec::new();
    let mut sq_norms: Vec<f64> = Vec::new();
    if set.contains_origin() {
        kept.push(vec![0.0; set.dim]);
        sq_norms.push(0.0);
    }
    let sep2 = (0.5 * eps_l2).powi(2);
    let mut streak = 0;
    while streak < opts.failure_streak && kept.len() < opts.max_points {
        let cand = set.sample_point(&mut rng)?;
        let nz: Vec<usize> = (0..cand.len()).filter(|&j| cand[j] != 0.0).collect();
        let c2 = dot(&cand, &cand);
        let far = kept.iter().zip(&sq_norms).all(|(k, &k2)| {
            let ip: f64 = nz.iter().map(|&j| k[j] * cand[j]).sum();
            c2 + k2 - 2.0 * ip >= sep2
        });
        if far {
            kept.push(cand);
            sq_norms.push(c2);
            streak = 0;
        } else {
            streak += 1;
        }
    }
    let truncated = kept.len() >= opts.max_points;
    Ok(done(kept, truncated))
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum()
}

/// Analytic upper bound on `ln N(T, eps, l2)`.
pub fn covering_number_log_bound(set: &IndexSet, eps: f64) -> f64 {
    let d = set.dim as f64;
    let vol = |r: f64| d * (1.0 + 2.0 * r / eps).ln();
    match &set.kind {
        SetKind::EuclideanSphere { radius } => {
            if eps >= 2.0 * radius {
                0.0
            } else {
                vol(*radius)
            }
        }
        SetKind::EuclideanBall { radius } => {
            if eps >= *radius {
                0.0
            } else {
                vol(*radius)
            }
        }
        SetKind::L1Ball { radius } => {
            if eps >= *radius {
                return 0.0;
            }
            // Maurey: N <= (2d + 1)^{ceil(r^2 / eps^2)}.
            let maurey = (radius / eps).powi(2).ceil() * (2.0 * d + 1.0).ln();
            vol(*radius).min(maurey)
        }
        SetKind::SparseSphere { sparsity, radius } => {
            if eps >= 2.0 * radius {
                0.0
            } else {
                ln_binomial(set.dim, *sparsity)
                    + *sparsity as f64 * (1.0 + 2.0 * radius / eps).ln()
            }
        }
        SetKind::Ellipsoid { .. } => {
            let r = set.max_norm();
            if eps >= r {
                0.0
            } else {
                vol(r)
            }
        }
        SetKind::Finite { points } => {
            if eps >= finite_diameter(points) {
                0.0
            } else {
                (points.len() as f64).ln()
            }
        }
        SetKind::Scaled { inner, factor } => covering_number_log_bound(inner, eps / factor),
        SetKind::Section { inner, radius } => {
            if let Some(points) = set.finite_points() {
                return if points.len() <= 1 || eps >= finite_diameter(&points) {
                    0.0
                } else {
                    (points.len() as f64).ln()
                };
            }
            match inner.kind {
                SetKind::EuclideanBall { .. } | SetKind::EuclideanSphere { .. } => {
                    covering_number_log_bound(&IndexSet::sphere(set.dim, *radius), eps)
                }
                // A subset of the inner body; its covering bound still applies.
                _ => covering_number_log_bound(inner, eps),
            }
        }
    }
}

/// Monte Carlo Gaussian mean width `E sup_{v in T} <v, G>`.
///
/// The supremum is evaluated exactly per kind through the support function.
pub fn mean_width(set: &IndexSet, mc_budget: usize, seed: u64) -> Result<Estimate> {
    if mc_budget < 2 {
        return invalid("mean width needs at least two Gaussian draws");
    }
    set.validate()?;
    if set.is_empty() {
        return Err(LabError::InvalidQuery("mean width of an empty set".into()));
    }
    let mut rng = stream_rng(seed, WIDTH_STREAM);
    let mut sups = Vec::with_capacity(mc_budget);
    for _ in 0..mc_budget {
        let g: Vec<f64> = (0..set.dim).map(|_| rng.sample(StandardNormal)).collect();
        sups.push(set.support(&g)?);
    }
    let (value, std_error) = mean_and_se(&sups);
    Ok(Estimate { value, std_error })
}

/// `l2` diameter (largest pairwise distance).
pub fn l2_diameter(set: &IndexSet) -> f64 {
    set.l2_diameter()
}

/// `T ∩ R S_{L^q}` for a Gaussian ensemble, where
/// `||<X, v>||_{L^q} = m_q^{1/q} ||v||_2` makes it a Euclidean sphere section.
pub fn intersect_lq_sphere(
    set: &IndexSet,
    r: f64,
    q: f64,
    spec: &EnsembleSpec,
) -> Result<IndexSet> {
    if spec.family != Family::Gaussian {
        return unsupported(
            "L^q sphere sections are only described exactly for Gaussian ensembles",
        );
    }
    if !(r > 0.0) {
        return invalid("section radius must be positive");
    }
    let mq = gaussian_abs_moment(q)?;
    Ok(set.clone().section(r / mq.powf(1.0 / q)))
}
