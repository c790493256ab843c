//! Quantitative checks for the operator `R`: moduli of continuity, the two
//! probabilistic error lemmas, the pointwise and flat-constant bound forms,
//! the pointwise asymptotic limit, and minimal-degree search.

use crate::operators::{r_operator, RealFn, Smoothness, TargetFunction};
use crate::{Error, Result};
use serde::Serialize;

/// Flat constant of the modulus bound for `R`: the envelope
/// `1 + x(1-x)(1-min(x,1-x))` maximised over the interval.
pub const POPOVICIU_R_CONSTANT: f64 = 31.0 / 27.0;

/// Classical flat constants of the same bound shape for the Bernstein
/// operator, kept for side-by-side reporting: Popoviciu's 3/2 and the
/// sharper 5/4 from Lorentz's book.
pub const POPOVICIU_BERNSTEIN_CONSTANT: f64 = 1.5;
pub const LORENTZ_BERNSTEIN_CONSTANT: f64 = 1.25;

/// Flat constant of the derivative-modulus bound for `R`:
/// `max_x (E(x) + sqrt(E(x))) = (4 + 6*sqrt(3))/27`, about 0.533. The
/// Bernstein counterpart of the same shape is 3/4.
pub fn derivative_r_constant() -> f64 {
    (4.0 + 6.0 * 3f64.sqrt()) / 27.0
}

pub const DERIVATIVE_BERNSTEIN_CONSTANT: f64 = 0.75;

/// Sikkema's sharp constant for the Bernstein operator with `omega(n^-1/2)`,
/// `(4306 + 837*sqrt(6))/5832`, about 1.0898873. Reporting reference only.
pub fn sikkema_constant() -> f64 {
    (4306.0 + 837.0 * 6f64.sqrt()) / 5832.0
}

/// `count` equally spaced points on `[0,1]`, endpoints included.
pub fn uniform_grid(count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::InvalidParams(format!(
            "grid needs at least 2 points, got {count}"
        )));
    }
    let last = (count - 1) as f64;
    Ok((0..count).map(|i| i as f64 / last).collect())
}

/// The variance ceiling `E(x) = x(1-x)(1-min(x,1-x))` that the scaled
/// variance of the `R` urn never exceeds and approaches as `n` grows.
pub fn envelope(x: f64) -> f64 {
    let m = x.min(1.0 - x);
    x * (1.0 - x) * (1.0 - m)
}

/// Exact scaled variance of the `R` urn at degree `n`:
/// `x(1-x)/n * (1 - m/(1 - m/(n-1)))` with `m = min(x, 1-x)`. This is the
/// variance of the node variable `X/n`, and `n` times it stays below
/// [`envelope`].
pub fn variance_envelope(x: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDegree { n: n as u64 });
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParams(format!("x = {x} violates 0 <= x <= 1")));
    }
    let m = x.min(1.0 - x);
    let nf = n as f64;
    Ok(x * (1.0 - x) / nf * (1.0 - m / (1.0 - m / (nf - 1.0))))
}

/// How a modulus value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusMethod {
    Exact,
    Grid,
}

/// Two-sided estimate of a modulus of continuity at one offset `delta`.
/// `lower` is certified by evaluated pairs; `upper` adds the relative slack
/// observed in one refinement pass (zero when the refinement found nothing
/// new). Exact moduli carry `lower == upper`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModulusEstimate {
    pub delta: f64,
    pub lower: f64,
    pub upper: f64,
    pub method: ModulusMethod,
}

/// Modulus of continuity of a target function at offset `delta`: closed
/// form when the function carries one, otherwise a grid search.
///
/// Grid estimates are nondecreasing in `delta` up to grid quantization:
/// the pair scan is nested across offsets, but the exact `x +- delta`
/// candidates are not, so two estimates may disagree by roughly the
/// function's variation across one grid cell.
pub fn modulus_of_continuity(
    f: &TargetFunction,
    delta: f64,
    resolution: usize,
) -> Result<ModulusEstimate> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidParams(format!(
            "delta = {delta} violates delta >= 0"
        )));
    }
    if let Some(v) = f.exact_modulus(delta) {
        return Ok(ModulusEstimate {
            delta,
            lower: v,
            upper: v,
            method: ModulusMethod::Exact,
        });
    }
    let eval = |x: f64| f.checked_eval(x);
    grid_modulus(&eval, delta, resolution)
}

/// Same for the derivative's modulus: exact form when present, otherwise a
/// grid search over a supplied derivative.
pub fn modulus_of_derivative(
    f: &TargetFunction,
    derivative: Option<&RealFn>,
    delta: f64,
    resolution: usize,
) -> Result<ModulusEstimate> {
    if let Some(v) = f.exact_modulus_deriv(delta) {
        return Ok(ModulusEstimate {
            delta,
            lower: v,
            upper: v,
            method: ModulusMethod::Exact,
        });
    }
    match derivative {
        Some(d) => {
            let eval = |x: f64| {
                let v = d(x);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::EvalError { x })
                }
            };
            grid_modulus(&eval, delta, resolution)
        }
        None => Err(Error::MissingDerivative(format!(
            "{} has neither an exact derivative modulus nor a derivative",
            f.label()
        ))),
    }
}

/// Grid search for `sup |g(x) - g(y)|` over `|x - y| <= delta` in `[0,1]`:
/// all grid pairs inside the window plus the exact offsets `x +- delta`,
/// `x +- delta/2`, then one local refinement around the best pair.
fn grid_modulus(
    g: &dyn Fn(f64) -> Result<f64>,
    delta: f64,
    resolution: usize,
) -> Result<ModulusEstimate> {
    if resolution < 2 {
        return Err(Error::InvalidParams(format!(
            "resolution {resolution} below 2"
        )));
    }
    let last = (resolution - 1) as f64;
    let xs: Vec<f64> = (0..resolution).map(|i| i as f64 / last).collect();
    let mut vs = Vec::with_capacity(resolution);
    for &x in &xs {
        vs.push(g(x)?);
    }

    let mut lower = 0.0f64;
    let mut best = (0.0f64, 0.0f64);

    // every grid pair inside the window
    let window = (delta * last * (1.0 + 1e-12)).floor() as usize;
    for i in 0..resolution {
        let jmax = (i + window).min(resolution - 1);
        for j in (i + 1)..=jmax {
            let d = (vs[j] - vs[i]).abs();
            if d > lower {
                lower = d;
                best = (xs[i], xs[j]);
            }
        }
    }

    // the exact offsets, which pin down piecewise-linear moduli
    for (i, &x) in xs.iter().enumerate() {
        for off in [delta, delta * 0.5, -delta * 0.5, -delta] {
            let y = (x + off).clamp(0.0, 1.0);
            let d = (g(y)? - vs[i]).abs();
            if d > lower {
                lower = d;
                best = (x, y);
            }
        }
    }

    // one refinement pass around the best pair
    let h = 1.0 / last;
    let (bx, by) = best;
    let mut refined = lower;
    let lo = (bx - h).max(0.0);
    let hi = (bx + h).min(1.0);
    for i in 0..resolution {
        let u = lo + (hi - lo) * i as f64 / last;
        let gu = g(u)?;
        let mut cands = [by, u + delta, u - delta, u + delta * 0.5, u - delta * 0.5];
        for c in &mut cands {
            *c = c.clamp(0.0, 1.0);
        }
        for &y in &cands {
            if (y - u).abs() <= delta * (1.0 + 1e-12) {
                let d = (g(y)? - gu).abs();
                if d > refined {
                    refined = d;
                }
            }
        }
    }

    let slack = if refined > lower && lower > 0.0 {
        (refined - lower) / lower
    } else {
        0.0
    };
    Ok(ModulusEstimate {
        delta,
        lower: refined,
        upper: refined * (1.0 + slack),
        method: ModulusMethod::Grid,
    })
}

/// First error lemma: for an evaluation variable on `[0,1]` with mean `x`
/// and variance `sigma2`, the operator error is at most
/// `omega(delta) (1 + sigma2/delta^2)`.
pub fn lemma_bound_a(sigma2: f64, omega: &ModulusEstimate) -> f64 {
    omega.upper * (1.0 + sigma2 / (omega.delta * omega.delta))
}

/// Second error lemma, for differentiable targets:
/// `omega_1(delta) (sigma2/delta + sigma)`.
pub fn lemma_bound_b(sigma2: f64, omega1: &ModulusEstimate) -> f64 {
    omega1.upper * (sigma2 / omega1.delta + sigma2.sqrt())
}

/// Outcome of checking one bound for one `(f, n)` pair across a grid: the
/// pointwise sides, where the left side peaks, and whether both the
/// pointwise and the flat-constant forms hold everywhere.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub operator: String,
    pub f: String,
    pub n: usize,
    pub theorem: String,
    pub modulus: ModulusEstimate,
    pub grid: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub sup_lhs: f64,
    pub argmax_x: f64,
    pub satisfied: bool,
    pub margin: f64,
    pub flat_constant: f64,
    pub flat_rhs: f64,
    pub flat_satisfied: bool,
}

#[allow(clippy::too_many_arguments)]
fn finish_report(
    operator: &str,
    f_label: &str,
    n: usize,
    theorem: &str,
    modulus: ModulusEstimate,
    grid: &[f64],
    lhs: Vec<f64>,
    rhs: Vec<f64>,
    flat_constant: f64,
    flat_rhs: f64,
) -> BoundReport {
    let mut sup_lhs = 0.0;
    let mut argmax_x = grid.first().copied().unwrap_or(0.0);
    let mut margin = f64::INFINITY;
    let mut satisfied = true;
    let mut flat_satisfied = true;
    for (i, (&l, &r)) in lhs.iter().zip(rhs.iter()).enumerate() {
        if l > sup_lhs {
            sup_lhs = l;
            argmax_x = grid[i];
        }
        if r - l < margin {
            margin = r - l;
        }
        if l > r {
            satisfied = false;
        }
        if l > flat_rhs {
            flat_satisfied = false;
        }
    }
    BoundReport {
        operator: operator.into(),
        f: f_label.into(),
        n,
        theorem: theorem.into(),
        modulus,
        grid: grid.to_vec(),
        lhs,
        rhs,
        sup_lhs,
        argmax_x,
        satisfied,
        margin,
        flat_constant,
        flat_rhs,
        flat_satisfied,
    }
}

/// Check the modulus bound for `R` at degree `n` on a grid: pointwise
/// `|R_n f - f|(x) <= omega(n^-1/2) (1 + x(1-x)(1-m))` and the flat form
/// with the 31/27 constant. Needs a continuous target.
pub fn popoviciu_check(f: &TargetFunction, n: usize, grid: &[f64]) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::InvalidDegree { n: n as u64 });
    }
    if f.smoothness() < Smoothness::Continuous {
        return Err(Error::InvalidParams(format!(
            "{} is only {}, the modulus bound needs continuity",
            f.label(),
            f.smoothness()
        )));
    }
    let delta = 1.0 / (n as f64).sqrt();
    let omega = modulus_of_continuity(f, delta, 2001)?;
    let mut lhs = Vec::with_capacity(grid.len());
    let mut rhs = Vec::with_capacity(grid.len());
    for &x in grid {
        let err = (r_operator(f, n, x)? - f.checked_eval(x)?).abs();
        lhs.push(err);
        rhs.push(omega.upper * (1.0 + envelope(x)));
    }
    let flat_rhs = POPOVICIU_R_CONSTANT * omega.upper;
    Ok(finish_report(
        "r",
        f.label(),
        n,
        "modulus",
        omega,
        grid,
        lhs,
        rhs,
        POPOVICIU_R_CONSTANT,
        flat_rhs,
    ))
}

/// Check the derivative-modulus bound for `R`: pointwise
/// `|R_n f - f|(x) <= n^-1/2 omega_1(n^-1/2) (E(x) + sqrt(E(x)))` and the
/// flat form with `(4 + 6 sqrt(3))/27`. Needs a C1 target with either an
/// exact derivative modulus or a derivative to estimate one from.
pub fn derivative_bound_check(
    f: &TargetFunction,
    derivative: Option<&RealFn>,
    n: usize,
    grid: &[f64],
) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::InvalidDegree { n: n as u64 });
    }
    if f.smoothness() < Smoothness::C1 {
        return Err(Error::MissingDerivative(format!(
            "{} is only {}, the derivative bound needs C1",
            f.label(),
            f.smoothness()
        )));
    }
    let delta = 1.0 / (n as f64).sqrt();
    let omega1 = modulus_of_derivative(f, derivative, delta, 2001)?;
    let mut lhs = Vec::with_capacity(grid.len());
    let mut rhs = Vec::with_capacity(grid.len());
    for &x in grid {
        let err = (r_operator(f, n, x)? - f.checked_eval(x)?).abs();
        let e = envelope(x);
        lhs.push(err);
        rhs.push(delta * omega1.upper * (e + e.sqrt()));
    }
    let flat_rhs = derivative_r_constant() * delta * omega1.upper;
    Ok(finish_report(
        "r",
        f.label(),
        n,
        "derivative-modulus",
        omega1,
        grid,
        lhs,
        rhs,
        derivative_r_constant(),
        flat_rhs,
    ))
}

/// Scaled pointwise errors `n (R_n f - f)(x)` along a degree ladder,
/// against the predicted limit `f''(x) x(1-x)(1-m) / 2`.
#[derive(Debug, Clone, Serialize)]
pub struct VoronovskayaSample {
    pub x: f64,
    pub limit_predicted: f64,
    pub n_values: Vec<usize>,
    pub scaled_errors: Vec<f64>,
    pub gaps: Vec<f64>,
    pub last_gap: f64,
}

/// Sample the asymptotic pointwise limit of `R` at `x` for the degrees in
/// `n_values` (each at least 2). `second_derivative` supplies `f''`.
pub fn voronovskaya_estimate(
    f: &TargetFunction,
    second_derivative: &RealFn,
    x: f64,
    n_values: &[usize],
) -> Result<VoronovskayaSample> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParams(format!("x = {x} violates 0 <= x <= 1")));
    }
    if f.smoothness() < Smoothness::C2 {
        return Err(Error::MissingDerivative(format!(
            "{} is only {}, the asymptotic limit needs C2",
            f.label(),
            f.smoothness()
        )));
    }
    if n_values.is_empty() {
        return Err(Error::InvalidParams("empty degree list".into()));
    }
    let d2 = second_derivative(x);
    if !d2.is_finite() {
        return Err(Error::EvalError { x });
    }
    let limit_predicted = 0.5 * d2 * envelope(x);
    let fx = f.checked_eval(x)?;
    let mut scaled_errors = Vec::with_capacity(n_values.len());
    let mut gaps = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let scaled = n as f64 * (r_operator(f, n, x)? - fx);
        scaled_errors.push(scaled);
        gaps.push((scaled - limit_predicted).abs());
    }
    let last_gap = *gaps.last().unwrap();
    Ok(VoronovskayaSample {
        x,
        limit_predicted,
        n_values: n_values.to_vec(),
        scaled_errors,
        gaps,
        last_gap,
    })
}

/// One probe of the minimal-degree search.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProbePoint {
    pub n: usize,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MinDegreeOutcome {
    /// `error(n) <= tol` and `error(n-1) > tol` (or `n` is the smallest
    /// admissible degree). For a non-monotone error profile this certifies
    /// the boundary, not global minimality.
    Found { n: usize },
    NotReached { n_max: usize },
}

/// Search trace and outcome of [`min_degree_for_tolerance`].
#[derive(Debug, Clone, Serialize)]
pub struct MinDegreeReport {
    pub tol: f64,
    pub outcome: MinDegreeOutcome,
    pub profile: Vec<ProbePoint>,
}

/// Relative headroom on the tolerance comparison. A degree whose true
/// error ties the tolerance exactly (Bernstein on `x^2` at tol = 1e-4 has
/// sup error exactly 1e-4 at n = 2500) must not be rejected because the
/// evaluator rounds a dozen ulps high; every tolerance stated to fewer
/// than eleven significant digits is unaffected.
const TOLERANCE_TIE_GUARD: f64 = 1.0 + 1.5e-11;

/// Smallest degree (by doubling then bisection) at which `error(n)` drops
/// to `tol`, starting from `n_start` and giving up beyond `n_max`.
///
/// The error profile need not be monotone. A satisfied first probe is
/// confirmed at twice the degree before being accepted, because some
/// profiles dip at the smallest degree (`R` hits x = 1/2 exactly at degree
/// 2) and rise again; a failed confirmation restarts the bracket there, so
/// the returned degree always carries the certificate `error(n-1) > tol`.
/// Satisfaction is `error(n) <= tol` with the tie headroom of
/// [`TOLERANCE_TIE_GUARD`].
pub fn min_degree_for_tolerance(
    mut error: impl FnMut(usize) -> Result<f64>,
    tol: f64,
    n_start: usize,
    n_max: usize,
) -> Result<MinDegreeReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParams(format!("tol = {tol} violates tol > 0")));
    }
    if n_start < 1 || n_max < n_start {
        return Err(Error::InvalidParams(format!(
            "degree range [{n_start}, {n_max}] is empty or starts at 0"
        )));
    }
    let cutoff = tol * TOLERANCE_TIE_GUARD;
    let mut profile = Vec::new();
    let mut probe = |n: usize, profile: &mut Vec<ProbePoint>| -> Result<f64> {
        let e = error(n)?;
        profile.push(ProbePoint { n, error: e });
        Ok(e)
    };

    let mut lo = n_start;
    let first = probe(lo, &mut profile)?;
    if first <= cutoff {
        if lo == n_max {
            return Ok(MinDegreeReport {
                tol,
                outcome: MinDegreeOutcome::Found { n: n_start },
                profile,
            });
        }
        let confirm_n = (lo * 2).min(n_max);
        let confirm = probe(confirm_n, &mut profile)?;
        if confirm <= cutoff {
            return Ok(MinDegreeReport {
                tol,
                outcome: MinDegreeOutcome::Found { n: n_start },
                profile,
            });
        }
        lo = confirm_n; // the start was a dip; bracket from the failure
    }
    // doubling phase: lo always fails
    let mut hi;
    loop {
        if lo >= n_max {
            return Ok(MinDegreeReport {
                tol,
                outcome: MinDegreeOutcome::NotReached { n_max },
                profile,
            });
        }
        hi = (lo * 2).min(n_max);
        let e = probe(hi, &mut profile)?;
        if e <= cutoff {
            break;
        }
        lo = hi;
    }
    // bisection: error(lo) > tol, error(hi) <= tol
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let e = probe(mid, &mut profile)?;
        if e <= cutoff {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(MinDegreeReport {
        tol,
        outcome: MinDegreeOutcome::Found { n: hi },
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::{polya_variance, r_params};
    use crate::fixtures;

    #[test]
    fn flat_constants_evaluate_to_their_decimals() {
        assert!((POPOVICIU_R_CONSTANT - 31.0 / 27.0).abs() < 1e-16);
        assert!((derivative_r_constant() - 0.533).abs() < 5e-4);
        assert!((sikkema_constant() - 1.0898873).abs() < 5e-8);
    }

    #[test]
    fn envelope_peaks_at_one_third() {
        let peak = envelope(1.0 / 3.0);
        assert!((peak - 4.0 / 27.0).abs() < 1e-15);
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!(envelope(x) <= peak + 1e-15);
            assert!(envelope(x) <= x * (1.0 - x) + 1e-15);
        }
    }

    #[test]
    fn variance_envelope_matches_the_urn_variance() {
        for &x in &[0.07, 0.3, 0.5, 0.81] {
            for n in [2usize, 5, 33, 200] {
                let v = variance_envelope(x, n).unwrap();
                let urn = polya_variance(&r_params(x, n).unwrap()).unwrap();
                let scaled = urn / (n * n) as f64;
                assert!((v - scaled).abs() <= 1e-15 + 1e-13 * scaled.abs());
                assert!(n as f64 * v <= envelope(x) + 1e-15);
            }
        }
    }

    #[test]
    fn variance_envelope_degree_guard() {
        assert!(matches!(
            variance_envelope(0.5, 1),
            Err(Error::InvalidDegree { n: 1 })
        ));
    }

    #[test]
    fn exact_modulus_short_circuits() {
        let f = fixtures::find("e2").unwrap().function;
        let est = modulus_of_continuity(&f, 0.5, 11).unwrap();
        assert_eq!(est.method, ModulusMethod::Exact);
        assert_eq!(est.lower, 0.75);
        assert_eq!(est.upper, 0.75);
    }

    #[test]
    fn grid_modulus_approaches_the_exact_value() {
        // strip the metadata so the grid path runs
        let bare = TargetFunction::new("exp-bare", Smoothness::C2, f64::exp);
        for &delta in &[0.5, 0.1, 0.01] {
            let est = modulus_of_continuity(&bare, delta, 2001).unwrap();
            let exact = std::f64::consts::E * (1.0 - (-delta).exp());
            assert!(est.lower <= exact + 1e-12, "lower {} vs {exact}", est.lower);
            assert!(est.lower >= exact * 0.98, "lower {} vs {exact}", est.lower);
            assert!(est.upper >= est.lower);
        }
    }

    #[test]
    fn grid_modulus_is_monotone_in_delta() {
        let bare = TargetFunction::new("tent-bare", Smoothness::PiecewiseC1, |x: f64| {
            (2.0 * (x - 0.5).abs() - 0.5).abs()
        });
        let mut prev = 0.0;
        for &delta in &[0.01, 0.05, 0.1, 0.25, 0.5, 1.0] {
            let est = modulus_of_continuity(&bare, delta, 401).unwrap();
            assert!(est.lower + 1e-12 >= prev, "delta {delta}");
            prev = est.lower;
        }
    }

    #[test]
    fn lemma_bounds_formulas() {
        let omega = ModulusEstimate {
            delta: 0.5,
            lower: 0.2,
            upper: 0.2,
            method: ModulusMethod::Exact,
        };
        assert!((lemma_bound_a(0.05, &omega) - 0.2 * 1.2).abs() < 1e-15);
        let b = lemma_bound_b(0.04, &omega);
        assert!((b - 0.2 * (0.08 + 0.2)).abs() < 1e-15);
    }

    #[test]
    fn popoviciu_bound_holds_on_the_korovkin_set() {
        let grid = uniform_grid(101).unwrap();
        for label in ["e2", "x3", "exp"] {
            let f = fixtures::find(label).unwrap().function;
            for n in [2usize, 10, 100] {
                let report = popoviciu_check(&f, n, &grid).unwrap();
                assert!(report.satisfied, "{label} n={n}");
                assert!(report.flat_satisfied, "{label} n={n}");
                assert!(report.margin >= 0.0);
            }
        }
    }

    #[test]
    fn popoviciu_rejects_discontinuous_targets() {
        let jump = fixtures::find("jump").unwrap().function;
        let grid = uniform_grid(11).unwrap();
        assert!(matches!(
            popoviciu_check(&jump, 10, &grid),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn derivative_bound_needs_c1() {
        let tent = fixtures::find("tent").unwrap().function;
        let grid = uniform_grid(11).unwrap();
        assert!(matches!(
            derivative_bound_check(&tent, None, 10, &grid),
            Err(Error::MissingDerivative(_))
        ));
    }

    #[test]
    fn derivative_bound_holds_for_smooth_targets() {
        let grid = uniform_grid(101).unwrap();
        for label in ["e2", "x4", "sin9pi2"] {
            let entry = fixtures::find(label).unwrap();
            for n in [4usize, 25, 100] {
                let report =
                    derivative_bound_check(&entry.function, entry.derivative.as_ref(), n, &grid)
                        .unwrap();
                assert!(report.satisfied, "{label} n={n}");
                assert!(report.flat_satisfied, "{label} n={n}");
            }
        }
    }

    #[test]
    fn voronovskaya_linear_target_is_identically_zero() {
        let entry = fixtures::find("e1").unwrap();
        let sample = voronovskaya_estimate(
            &entry.function,
            entry.second_derivative.as_ref().unwrap(),
            0.3,
            &[4, 16, 64],
        )
        .unwrap();
        assert_eq!(sample.limit_predicted, 0.0);
        for v in sample.scaled_errors {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn min_degree_on_the_bernstein_closed_form() {
        let report = min_degree_for_tolerance(
            |n| Ok(fixtures::bernstein_e2_sup_error(n)),
            1e-4,
            1,
            1 << 20,
        )
        .unwrap();
        assert_eq!(report.outcome, MinDegreeOutcome::Found { n: 2500 });
        assert!(report.profile.len() > 10);
    }

    #[test]
    fn min_degree_gives_up_at_the_cap() {
        let report =
            min_degree_for_tolerance(|n| Ok(1.0 / n as f64), 1e-9, 1, 1000).unwrap();
        assert_eq!(report.outcome, MinDegreeOutcome::NotReached { n_max: 1000 });
    }

    #[test]
    fn min_degree_accepts_immediately_satisfied_tolerances() {
        let report = min_degree_for_tolerance(|n| Ok(1.0 / n as f64), 2.0, 1, 10).unwrap();
        assert_eq!(report.outcome, MinDegreeOutcome::Found { n: 1 });
    }
}
