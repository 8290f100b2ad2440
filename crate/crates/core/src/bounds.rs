//! Closed-form right-hand sides, constant calibration and log-log fits.
//!
//! Absolute constants are explicit inputs. None of them has a known
//! numerical value, so they are calibrated against simulations instead.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, unsupported, Result};

/// Inputs shared by the tail and moment forms of the main bound.
///
/// `u` is the deviation parameter of the tail form and the moment order `p`
/// of the moment form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub gamma2: f64,
    pub diam: f64,
    pub n: usize,
    pub q: f64,
    pub u: f64,
    pub constant: f64,
}

impl BoundInputs {
    pub fn new(gamma2: f64, diam: f64, n: usize, q: f64, u: f64) -> Self {
        Self {
            gamma2,
            diam,
            n,
            q,
            u,
            constant: 1.0,
        }
    }

    pub fn with_constant(self, constant: f64) -> Self {
        Self { constant, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |x: f64| x.is_finite() && x >= 0.0;
        if !finite_nonneg(self.gamma2) || !finite_nonneg(self.diam) {
            return invalid("gamma2 and diam must be finite and nonnegative");
        }
        if self.n == 0 {
            return invalid("N must be at least 1");
        }
        if !(self.q >= 1.0) || !self.q.is_finite() {
            return invalid(format!("q must be a finite real >= 1, got {}", self.q));
        }
        if !(self.u >= 1.0) || !self.u.is_finite() {
            return invalid(format!("u (or p) must be a finite real >= 1, got {}", self.u));
        }
        if !finite_nonneg(self.constant) {
            return invalid("the constant must be finite and nonnegative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhsForm {
    /// High-probability form, valid for every `q >= 1`.
    Tail,
    /// `L^p` moment form, valid for `q` in `[1, 2]`.
    Moment,
}

/// Constant-weighted addends of the bound; they sum to the bound value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermBreakdown {
    /// `C gamma2^q / N^{min(1, q/2)}`.
    pub complexity_terminal: f64,
    /// `C diam^{q-1} gamma2 / sqrt(N)`.
    pub complexity_initial: f64,
    /// `C diam^q (sqrt(u/N) + u^{q/2} / N^{min(1, q/2)})`.
    pub deviation: f64,
}

impl TermBreakdown {
    pub fn total(&self) -> f64 {
        self.complexity_terminal + self.complexity_initial + self.deviation
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub value: f64,
    pub form: RhsForm,
    pub inputs: BoundInputs,
    pub terms: TermBreakdown,
    pub calibrated_constant: Option<f64>,
}

fn terms(inputs: &BoundInputs) -> TermBreakdown {
    let BoundInputs {
        gamma2,
        diam,
        n,
        q,
        u,
        constant: c,
    } = *inputs;
    let n = n as f64;
    let rate = n.powf(1.0f64.min(q / 2.0));
    TermBreakdown {
        complexity_terminal: c * gamma2.powf(q) / rate,
        complexity_initial: c * diam.powf(q - 1.0) * gamma2 / n.sqrt(),
        deviation: c * diam.powf(q) * ((u / n).sqrt() + u.powf(q / 2.0) / rate),
    }
}

fn report(inputs: BoundInputs, form: RhsForm) -> BoundReport {
    let terms = terms(&inputs);
    BoundReport {
        value: terms.total(),
        form,
        inputs,
        terms,
        calibrated_constant: None,
    }
}

/// `C (gamma2^q / N^{min(1,q/2)} + diam^{q-1} gamma2 / sqrt(N)
///   + diam^q (sqrt(u/N) + u^{q/2} / N^{min(1,q/2)}))`.
pub fn theorem_main_rhs(inputs: &BoundInputs) -> Result<BoundReport> {
    inputs.validate()?;
    Ok(report(*inputs, RhsForm::Tail))
}

/// Moment form with `p = inputs.u`; only `q` in `[1, 2]` is covered, use
/// [`theorem_main_rhs`] otherwise.
pub fn moment_bound_rhs(inputs: &BoundInputs) -> Result<BoundReport> {
    inputs.validate()?;
    if inputs.q > 2.0 {
        return unsupported(format!(
            "the moment form covers q in [1, 2], got q = {}; use the tail form",
            inputs.q
        ));
    }
    Ok(report(*inputs, RhsForm::Moment))
}

/// Evaluate either form.
pub fn evaluate(inputs: &BoundInputs, form: RhsForm) -> Result<BoundReport> {
    match form {
        RhsForm::Tail => theorem_main_rhs(inputs),
        RhsForm::Moment => moment_bound_rhs(inputs),
    }
}

/// Sub-Weibull Bernstein level `C1 ||b||_2 sqrt(t) + C2 t^{1/alpha} ||b||_beta`
/// with `beta = inf` for `alpha <= 1` and `alpha / (alpha - 1)` otherwise.
pub fn bernstein_subweibull_threshold(
    psi_norms: &[f64],
    alpha: f64,
    t: f64,
    c1: f64,
    c2: f64,
) -> Result<f64> {
    if !(alpha > 0.0) {
        return invalid("alpha must be positive");
    }
    if !(t >= 0.0) {
        return invalid("t must be nonnegative");
    }
    if psi_norms.iter().any(|&b| !(b >= 0.0)) {
        return invalid("psi norms must be nonnegative");
    }
    let l2 = psi_norms.iter().map(|b| b * b).sum::<f64>().sqrt();
    let lbeta = if alpha <= 1.0 {
        psi_norms.iter().fold(0.0f64, |m, &b| m.max(b))
    } else {
        let beta = alpha / (alpha - 1.0);
        psi_norms.iter().map(|b| b.powf(beta)).sum::<f64>().powf(1.0 / beta)
    };
    Ok(c1 * l2 * t.sqrt() + c2 * t.powf(1.0 / alpha) * lbeta)
}

/// `min(x^2, x^{2/q})`, the exponent shape of the single-function tail.
pub fn tail_shape(x: f64, q: f64) -> f64 {
    (x * x).min(x.powf(2.0 / q))
}

/// `min(1, 2 exp(-N min(x^2, x^{2/q}) / C4))`, a bound on
/// `P(|(P_N - P)|f|^q| >= x ||f||_{psi2}^q)`.
pub fn single_function_tail_prob(x: f64, n: usize, q: f64, c4: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return invalid("x must be nonnegative");
    }
    if !(c4 > 0.0) {
        return invalid("C4 must be positive");
    }
    Ok((2.0 * (-(n as f64) * tail_shape(x, q) / c4).exp()).min(1.0))
}

/// `C5 psi2_q (sqrt(r/N) + (r/N)^{q/2})`, the `L^r` moment of a single
/// function's deviation with `psi2_q = ||f||_{psi2}^q`.
pub fn single_function_moment(psi2_q: f64, n: usize, q: f64, r: f64, c5: f64) -> Result<f64> {
    if !(psi2_q >= 0.0) || !(r >= 1.0) || n == 0 {
        return invalid("need psi2_q >= 0, r >= 1 and N >= 1");
    }
    let ratio = r / n as f64;
    Ok(c5 * psi2_q * (ratio.sqrt() + ratio.powf(q / 2.0)))
}

/// Level `e max(sqrt 2, 2^{1/q}) (a0 + a1 sqrt(x) + a2 x^{1/q})` exceeded with
/// probability at most `exp(-x)` when the `L^p` norms grow like
/// `a0 + a1 sqrt(p) + a2 p^{1/q}`.
pub fn moments_to_tail(a0: f64, a1: f64, a2: f64, q: f64, x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return invalid(format!("x must be >= 1, got {x}"));
    }
    if !(q >= 1.0) {
        return invalid("q must be >= 1");
    }
    let c = std::f64::consts::SQRT_2.max(2f64.powf(1.0 / q));
    Ok(std::f64::consts::E * c * (a0 + a1 * x.sqrt() + a2 * x.powf(1.0 / q)))
}

/// Upper bound on `Y` implied by `Y^q <= a Y^{q-1} + b + S`, in the form
/// `b^{1/q} + a + S^{1/q}`.
pub fn power_inequality_root_bound(a: f64, b: f64, s: f64, q: f64) -> f64 {
    b.powf(1.0 / q) + a + s.powf(1.0 / q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `ys` on `xs`. `R^2 = 1` when `ys` is constant.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return invalid("need at least two paired observations");
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return invalid("regressor has zero variance");
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub pairs: Vec<(f64, f64)>,
}

/// Least squares of `log(statistic)` on `log(N)`.
pub fn fit_scaling_exponent(pairs: &[(f64, f64)]) -> Result<ScalingFit> {
    if pairs.len() < 3 {
        return invalid("need at least three (N, statistic) pairs");
    }
    if pairs.iter().any(|&(n, s)| !(n > 0.0) || !(s > 0.0)) {
        return invalid("N and statistic values must be positive");
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    Ok(ScalingFit {
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        pairs: pairs.to_vec(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// Smallest feasible constant found, or infinity when infeasible.
    pub constant: f64,
    pub infeasible: bool,
}

/// Relative bisection tolerance of the calibrators.
pub const CALIBRATION_RTOL: f64 = 1e-6;

/// Smallest `C >= 0` with `feasible(C)`, for a predicate that is monotone
/// in `C`. Returns a feasible value within relative `CALIBRATION_RTOL`.
pub fn smallest_feasible(feasible: impl Fn(f64) -> bool) -> Calibration {
    if feasible(0.0) {
        return Calibration {
            constant: 0.0,
            infeasible: false,
        };
    }
    let mut hi = 1.0;
    while !feasible(hi) {
        hi *= 2.0;
        if hi > 1e300 {
            return Calibration {
                constant: f64::INFINITY,
                infeasible: true,
            };
        }
    }
    let mut lo = 0.0;
    while hi - lo > CALIBRATION_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Calibration {
        constant: hi,
        infeasible: false,
    }
}

/// An observed statistic paired with the inputs of the bound meant to
/// dominate it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub inputs: BoundInputs,
    pub value: f64,
}

/// Smallest `C` for which `form` dominates every observation.
pub fn calibrate_constant(observations: &[Observation], form: RhsForm) -> Result<Calibration> {
    if observations.is_empty() {
        return invalid("no observations to calibrate against");
    }
    let mut unit = Vec::with_capacity(observations.len());
    for obs in observations {
        if !(obs.value >= 0.0) {
            return invalid("observations must be nonnegative");
        }
        let r = evaluate(&obs.inputs.with_constant(1.0), form)?;
        unit.push((r.value, obs.value));
    }
    Ok(smallest_feasible(|c| unit.iter().all(|&(rhs, v)| c * rhs >= v)))
}

/// An empirical tail probability at a normalized threshold `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailObservation {
    pub x: f64,
    pub probability: f64,
}

/// Smallest `C4` for which [`single_function_tail_prob`] dominates every
/// observed tail probability.
pub fn calibrate_tail_constant(
    observations: &[TailObservation],
    n: usize,
    q: f64,
) -> Result<Calibration> {
    if observations.is_empty() {
        return invalid("no observations to calibrate against");
    }
    if observations.iter().any(|o| !(o.x >= 0.0) || !(0.0..=1.0).contains(&o.probability)) {
        return invalid("thresholds must be nonnegative and probabilities in [0, 1]");
    }
    let bound = |c: f64, x: f64| {
        if c == 0.0 {
            if tail_shape(x, q) == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            (2.0 * (-(n as f64) * tail_shape(x, q) / c).exp()).min(1.0)
        }
    };
    Ok(smallest_feasible(|c| {
        observations.iter().all(|o| bound(c, o.x) >= o.probability)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit() -> BoundInputs {
        BoundInputs::new(1.0, 1.0, 1, 2.0, 1.0)
    }

    #[test]
    fn main_rhs_examples() {
        let r = theorem_main_rhs(&unit()).unwrap();
        assert_eq!(r.value, 4.0);
        assert_eq!(r.terms.total(), r.value);
        let base = BoundInputs::new(0.7, 1.3, 50, 2.5, 3.0);
        let c = 1.7;
        let scaled = BoundInputs {
            gamma2: c * base.gamma2,
            diam: c * base.diam,
            ..base
        };
        let a = theorem_main_rhs(&base).unwrap().value;
        let b = theorem_main_rhs(&scaled).unwrap().value;
        assert!((b - c.powf(2.5) * a).abs() <= 1e-12 * b);
    }

    #[test]
    fn min_branch_of_rate() {
        let t = |q: f64| {
            theorem_main_rhs(&BoundInputs::new(1.0, 0.0, 16, q, 1.0))
                .unwrap()
                .terms
                .complexity_terminal
        };
        assert_eq!(t(1.0), 0.25);
        assert_eq!(t(3.0), 1.0 / 16.0);
    }

    #[test]
    fn moment_rhs_examples() {
        let r = moment_bound_rhs(&BoundInputs::new(0.0, 2.0, 9, 1.5, 9.0)).unwrap();
        assert_eq!(r.terms.deviation, 2f64.powf(1.5) * 2.0);
        assert_eq!(r.value, r.terms.deviation);
        let a = moment_bound_rhs(&BoundInputs::new(0.3, 1.0, 40, 1.2, 2.0)).unwrap();
        let b = moment_bound_rhs(&BoundInputs::new(0.3, 1.0, 40, 1.2, 2.0).with_constant(2.0))
            .unwrap();
        assert_eq!(b.value, 2.0 * a.value);
        assert!(matches!(
            moment_bound_rhs(&BoundInputs::new(1.0, 1.0, 4, 3.0, 1.0)),
            Err(crate::LabError::Unsupported(_))
        ));
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(theorem_main_rhs(&BoundInputs { n: 0, ..unit() }).is_err());
        assert!(theorem_main_rhs(&BoundInputs { u: 0.5, ..unit() }).is_err());
        assert!(theorem_main_rhs(&BoundInputs { gamma2: -1.0, ..unit() }).is_err());
    }

    #[test]
    fn main_rhs_monotone_on_grids() {
        let grid = [0.1, 0.5, 1.0, 2.0, 5.0];
        for q in [1.0, 1.5, 2.0, 3.0] {
            let f = |g: f64, d: f64, n: usize, u: f64| {
                theorem_main_rhs(&BoundInputs::new(g, d, n, q, u)).unwrap().value
            };
            for w in grid.windows(2) {
                assert!(f(w[0], 1.0, 10, 2.0) <= f(w[1], 1.0, 10, 2.0));
                assert!(f(1.0, w[0], 10, 2.0) <= f(1.0, w[1], 10, 2.0));
                assert!(f(1.0, 1.0, 10, 1.0 + w[0]) <= f(1.0, 1.0, 10, 1.0 + w[1]));
            }
            for n in [1, 2, 10, 100, 1000] {
                assert!(f(1.0, 1.0, n + 1, 2.0) <= f(1.0, 1.0, n, 2.0));
            }
        }
    }

    #[test]
    fn deviation_term_exponent_in_u() {
        for q in [1.5, 2.0, 3.0, 4.0] {
            let dev = |u: f64| {
                theorem_main_rhs(&BoundInputs::new(1.0, 1.0, 1, q, u))
                    .unwrap()
                    .terms
                    .deviation
            };
            let (u0, u1) = (2f64.powi(10), 2f64.powi(20));
            let slope = (dev(u1).ln() - dev(u0).ln()) / (u1.ln() - u0.ln());
            let want = 0.5f64.max(q / 2.0);
            assert!((slope - want).abs() <= 0.05 * want, "q={q}: {slope}");
        }
    }

    #[test]
    fn bernstein_examples() {
        assert_eq!(bernstein_subweibull_threshold(&[0.0, 0.0], 1.0, 3.0, 1.0, 1.0).unwrap(), 0.0);
        let v = bernstein_subweibull_threshold(&[1.0, 1.0], 1.0, 4.0, 1.0, 1.0).unwrap();
        assert!((v - (2.0 * 2f64.sqrt() + 4.0)).abs() < 1e-12);
        let v = bernstein_subweibull_threshold(&[3.0, 4.0], 2.0, 1.0, 1.0, 1.0).unwrap();
        assert!((v - 10.0).abs() < 1e-12);
        assert!(bernstein_subweibull_threshold(&[1.0], 0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn single_function_tail_examples() {
        assert_eq!(single_function_tail_prob(0.0, 10, 1.5, 1.0).unwrap(), 1.0);
        let p = single_function_tail_prob(0.3, 100, 2.0, 2.0).unwrap();
        assert_eq!(p, 2.0 * (-100.0 * tail_shape(0.3, 2.0) / 2.0f64).exp());
        for q in [1.0, 1.5, 3.0] {
            let a = single_function_tail_prob(1.0 - 1e-12, 5, q, 1.0).unwrap();
            let b = single_function_tail_prob(1.0 + 1e-12, 5, q, 1.0).unwrap();
            assert!((a - b).abs() < 1e-9);
            let mut prev = 1.0;
            for i in 0..100 {
                let p = single_function_tail_prob(i as f64 * 0.05, 5, q, 1.0).unwrap();
                assert!(p <= prev);
                prev = p;
            }
        }
    }

    #[test]
    fn single_function_moment_examples() {
        assert_eq!(single_function_moment(1.5, 7, 1.3, 7.0, 2.0).unwrap(), 2.0 * 2.0 * 1.5);
        assert_eq!(single_function_moment(0.0, 7, 1.3, 3.0, 2.0).unwrap(), 0.0);
        let r = 7.0;
        let m = single_function_moment(1.0, 7, 2.0, r, 1.0).unwrap();
        assert_eq!(m, 2.0);
    }

    #[test]
    fn moments_to_tail_examples() {
        let e = std::f64::consts::E;
        let s2 = std::f64::consts::SQRT_2;
        assert_eq!(moments_to_tail(1.0, 0.0, 0.0, 2.0, 1.0).unwrap(), e * s2);
        assert_eq!(moments_to_tail(0.0, 1.0, 0.0, 2.0, 4.0).unwrap(), e * s2 * 2.0);
        assert_eq!(
            moments_to_tail(1.0, 1.0, 1.0, 1.0, 4.0).unwrap(),
            e * 2.0 * (1.0 + 2.0 + 4.0)
        );
        assert!(moments_to_tail(1.0, 0.0, 0.0, 2.0, 0.5).is_err());
    }

    #[test]
    fn scaling_fit_examples() {
        let exact: Vec<(f64, f64)> = [16.0, 64.0, 256.0, 1024.0]
            .iter()
            .map(|&n: &f64| (n, n.powf(-0.5)))
            .collect();
        let fit = fit_scaling_exponent(&exact).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        let flat = fit_scaling_exponent(&[(1.0, 7.0), (2.0, 7.0), (4.0, 7.0)]).unwrap();
        assert_eq!(flat.slope, 0.0);
        assert!(fit_scaling_exponent(&[(1.0, 0.0), (2.0, 1.0), (3.0, 1.0)]).is_err());
        assert!(fit_scaling_exponent(&[(1.0, 1.0), (2.0, 1.0)]).is_err());
        let again = fit_scaling_exponent(&fit.pairs).unwrap();
        assert!((again.slope - fit.slope).abs() <= 1e-12);
    }

    #[test]
    fn noisy_power_law_slope() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let pairs: Vec<(f64, f64)> = (4..14)
            .map(|k| {
                let n = 2f64.powi(k);
                let noise: f64 = rng.random_range(-0.01..0.01);
                (n, 3.0 * n.powf(-0.5) * noise.exp())
            })
            .collect();
        let fit = fit_scaling_exponent(&pairs).unwrap();
        assert!((-0.55..=-0.45).contains(&fit.slope));
    }

    #[test]
    fn calibration_examples() {
        let zero = [Observation {
            inputs: unit(),
            value: 0.0,
        }];
        assert_eq!(calibrate_constant(&zero, RhsForm::Tail).unwrap().constant, 0.0);
        let one = [Observation {
            inputs: unit(),
            value: 4.0,
        }];
        let c = calibrate_constant(&one, RhsForm::Tail).unwrap();
        assert!((c.constant - 1.0).abs() <= 1e-6 && c.constant >= 1.0);
        let two = [Observation {
            inputs: unit(),
            value: 8.0,
        }];
        let c2 = calibrate_constant(&two, RhsForm::Tail).unwrap();
        assert!((c2.constant - 2.0 * c.constant).abs() <= 4e-6);
        let degenerate = [Observation {
            inputs: BoundInputs::new(0.0, 0.0, 4, 2.0, 1.0),
            value: 1.0,
        }];
        assert!(calibrate_constant(&degenerate, RhsForm::Tail).unwrap().infeasible);
        assert!(calibrate_constant(&[], RhsForm::Tail).is_err());
    }

    #[test]
    fn tail_calibration_matches_closed_form() {
        let n = 100;
        let q = 1.5;
        let obs = [
            TailObservation { x: 0.05, probability: 0.6 },
            TailObservation { x: 0.1, probability: 0.3 },
            TailObservation { x: 0.2, probability: 0.01 },
            TailObservation { x: 0.4, probability: 0.0 },
        ];
        let c = calibrate_tail_constant(&obs, n, q).unwrap();
        let want = obs
            .iter()
            .filter(|o| o.probability > 0.0)
            .map(|o| n as f64 * tail_shape(o.x, q) / (2.0 / o.probability).ln())
            .fold(0.0f64, f64::max);
        assert!((c.constant - want).abs() <= 1e-6 * want);
        for o in &obs {
            assert!(single_function_tail_prob(o.x, n, q, c.constant).unwrap() >= o.probability);
        }
    }

    proptest! {
        #[test]
        fn power_inequality_root_bound_holds(
            a in 0.0f64..5.0,
            b in 0.0f64..5.0,
            s in 0.0f64..5.0,
            q in 1.0f64..6.0,
            frac in 0.0f64..1.0,
        ) {
            let ceiling = a + (b + s).powf(1.0 / q) + 1.0;
            let y = frac * ceiling;
            prop_assume!(y.powf(q) <= a * y.powf(q - 1.0) + b + s);
            prop_assert!(y - b.powf(1.0 / q) <= power_inequality_root_bound(a, 0.0, s, q) + 1e-9);
        }
    }
}
