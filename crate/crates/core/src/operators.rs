//! Positive linear operators on `C[0,1]` of Bernstein type.
//!
//! Four of them are expectations of a target function under an urn
//! distribution evaluated at the equally spaced nodes `k/n`: classical
//! Bernstein (`c = 0`), Stancu (`c = alpha >= 0`), Lupaş (`c = 1/n`) and the
//! negative-replacement operator `R` (`c = -min(x,1-x)/(n-1)`). The q- and
//! (p,q)-variants use geometric-type nodes and their own basis polynomials;
//! they are carried for side-by-side comparison.

use crate::distribution::{polya_pmf, r_params, Pmf, PolyaParams};
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Smoothness class of a target function, ordered from weakest to
/// strongest guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Smoothness {
    Bounded,
    Continuous,
    PiecewiseC1,
    C1,
    C2,
}

impl fmt::Display for Smoothness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Smoothness::Bounded => "bounded",
            Smoothness::Continuous => "continuous",
            Smoothness::PiecewiseC1 => "piecewise-C1",
            Smoothness::C1 => "C1",
            Smoothness::C2 => "C2",
        };
        f.write_str(s)
    }
}

/// Shared real function handle used for targets, derivatives and moduli.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function on `[0,1]` together with the metadata the analysis layer can
/// exploit: a smoothness tag and, when known in closed form, its modulus of
/// continuity and the modulus of its derivative.
#[derive(Clone)]
pub struct TargetFunction {
    label: String,
    smoothness: Smoothness,
    eval: RealFn,
    exact_modulus: Option<RealFn>,
    exact_modulus_deriv: Option<RealFn>,
}

impl TargetFunction {
    pub fn new(
        label: impl Into<String>,
        smoothness: Smoothness,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TargetFunction {
            label: label.into(),
            smoothness,
            eval: Arc::new(eval),
            exact_modulus: None,
            exact_modulus_deriv: None,
        }
    }

    pub fn with_exact_modulus(
        mut self,
        omega: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.exact_modulus = Some(Arc::new(omega));
        self
    }

    pub fn with_exact_modulus_deriv(
        mut self,
        omega1: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.exact_modulus_deriv = Some(Arc::new(omega1));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Evaluation that turns non-finite results into an error.
    pub fn checked_eval(&self, x: f64) -> Result<f64> {
        let v = (self.eval)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::EvalError { x })
        }
    }

    pub fn exact_modulus(&self, delta: f64) -> Option<f64> {
        self.exact_modulus.as_ref().map(|f| f(delta))
    }

    pub fn exact_modulus_deriv(&self, delta: f64) -> Option<f64> {
        self.exact_modulus_deriv.as_ref().map(|f| f(delta))
    }
}

impl fmt::Debug for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TargetFunction")
            .field("label", &self.label)
            .field("smoothness", &self.smoothness)
            .field("exact_modulus", &self.exact_modulus.is_some())
            .field("exact_modulus_deriv", &self.exact_modulus_deriv.is_some())
            .finish()
    }
}

/// The operator family, with any shape parameters it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    Bernstein,
    Stancu { alpha: f64 },
    Lupas,
    R,
    QBernstein { q: f64 },
    PQBernstein { p: f64, q: f64 },
}

impl OperatorKind {
    pub fn label(&self) -> &'static str {
        match self {
            OperatorKind::Bernstein => "bernstein",
            OperatorKind::Stancu { .. } => "stancu",
            OperatorKind::Lupas => "lupas",
            OperatorKind::R => "r",
            OperatorKind::QBernstein { .. } => "qbernstein",
            OperatorKind::PQBernstein { .. } => "pqbernstein",
        }
    }

    /// Smallest degree the family is defined for.
    pub fn min_degree(&self) -> usize {
        match self {
            OperatorKind::R => 2,
            _ => 1,
        }
    }

    pub fn apply(&self, f: &TargetFunction, n: usize, x: f64) -> Result<f64> {
        match *self {
            OperatorKind::Bernstein => bernstein(f, n, x),
            OperatorKind::Stancu { alpha } => stancu(f, n, x, alpha),
            OperatorKind::Lupas => lupas(f, n, x),
            OperatorKind::R => r_operator(f, n, x),
            OperatorKind::QBernstein { q } => q_bernstein(f, n, x, q),
            OperatorKind::PQBernstein { p, q } => pq_bernstein(f, n, x, p, q),
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorKind::Stancu { alpha } => write!(out, "stancu(alpha={alpha})"),
            OperatorKind::QBernstein { q } => write!(out, "qbernstein(q={q})"),
            OperatorKind::PQBernstein { p, q } => write!(out, "pqbernstein(p={p},q={q})"),
            other => out.write_str(other.label()),
        }
    }
}

fn check_unit_interval(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParams(format!("x = {x} violates 0 <= x <= 1")));
    }
    Ok(())
}

fn check_degree(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidDegree { n: n as u64 });
    }
    Ok(())
}

/// `sum_k pmf[k] f(k/n)`: the common evaluation step of the urn-based
/// operators. Zero-probability nodes are skipped, so functions only enter
/// at points the distribution can actually reach.
pub fn evaluate_expectation(pmf: &Pmf, f: &TargetFunction, n: usize) -> Result<f64> {
    assert_eq!(pmf.probs().len(), n + 1, "pmf length must be n + 1");
    let nf = n as f64;
    // compensated sum; thousands of terms otherwise cost ~n eps of accuracy
    let mut acc = 0.0;
    let mut carry = 0.0;
    for (k, &p) in pmf.probs().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let y = p * f.checked_eval(k as f64 / nf)? - carry;
        let t = acc + y;
        carry = (t - acc) - y;
        acc = t;
    }
    Ok(acc)
}

/// Classical Bernstein polynomial `B_n(f; x)`.
pub fn bernstein(f: &TargetFunction, n: usize, x: f64) -> Result<f64> {
    check_degree(n, 1)?;
    check_unit_interval(x)?;
    let params = PolyaParams::new(x, 1.0 - x, 0.0, n)?;
    evaluate_expectation(&polya_pmf(&params)?, f, n)
}

/// Stancu operator: Bernstein with urn reinforcement `alpha >= 0`.
pub fn stancu(f: &TargetFunction, n: usize, x: f64, alpha: f64) -> Result<f64> {
    check_degree(n, 1)?;
    check_unit_interval(x)?;
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} violates alpha >= 0"
        )));
    }
    let params = PolyaParams::new(x, 1.0 - x, alpha, n)?;
    evaluate_expectation(&polya_pmf(&params)?, f, n)
}

/// Lupaş operator: the Stancu operator at `alpha = 1/n`.
pub fn lupas(f: &TargetFunction, n: usize, x: f64) -> Result<f64> {
    check_degree(n, 1)?;
    stancu(f, n, x, 1.0 / n as f64)
}

/// The negative-replacement operator `R_n(f; x)`: each draw removes
/// `min(x, 1-x)/(n-1)` of the drawn colour's weight. Needs `n >= 2`.
pub fn r_operator(f: &TargetFunction, n: usize, x: f64) -> Result<f64> {
    check_degree(n, 2)?;
    check_unit_interval(x)?;
    let params = r_params(x, n)?;
    evaluate_expectation(&polya_pmf(&params)?, f, n)
}

/// Product of two factor streams interleaved in proportion, so partial
/// products track the final magnitude instead of one stream's extremes.
fn merged_product(
    count_a: usize,
    count_b: usize,
    fa: impl Fn(usize) -> f64,
    fb: impl Fn(usize) -> f64,
) -> f64 {
    let mut ia = 0usize;
    let mut jb = 0usize;
    let mut acc = 1.0;
    for _ in 0..count_a + count_b {
        let take_a = if ia >= count_a {
            false
        } else if jb >= count_b {
            true
        } else {
            ia * count_b <= jb * count_a
        };
        if take_a {
            acc *= fa(ia);
            ia += 1;
        } else {
            acc *= fb(jb);
            jb += 1;
        }
    }
    acc
}

/// q-integer `[m]_q = 1 + q + ... + q^(m-1)`, tabulated for `m = 0..=n`
/// along with the powers `q^s`.
fn q_tables(n: usize, q: f64) -> (Vec<f64>, Vec<f64>) {
    let mut pow = Vec::with_capacity(n + 1);
    let mut int = Vec::with_capacity(n + 1);
    pow.push(1.0);
    int.push(0.0);
    for m in 0..n {
        int.push(int[m] + pow[m]);
        pow.push(pow[m] * q);
    }
    (pow, int)
}

/// Phillips q-Bernstein operator
/// `B_{n,q}(f; x) = sum_k f([k]_q/[n]_q) qbinom(n,k) x^k prod_{s<n-k} (1 - q^s x)`.
/// Reduces to the classical operator at `q = 1`.
pub fn q_bernstein(f: &TargetFunction, n: usize, x: f64, q: f64) -> Result<f64> {
    check_degree(n, 1)?;
    check_unit_interval(x)?;
    if !q.is_finite() || q <= 0.0 || q > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "q = {q} violates 0 < q <= 1"
        )));
    }
    let (qpow, qint) = q_tables(n, q);
    let mut acc = 0.0;
    for k in 0..=n {
        // qbinom(n,k) = prod_{i=1..k} [n-i+1]_q/[i]_q, folded with x^k and
        // the tail product so no intermediate outgrows the final basis value
        let basis = merged_product(
            k,
            n - k,
            |i| qint[n - i] / qint[i + 1] * x,
            |s| 1.0 - qpow[s] * x,
        );
        if basis == 0.0 {
            continue;
        }
        acc += basis * f.checked_eval(qint[k] / qint[n])?;
    }
    Ok(acc)
}

/// (p,q)-integer `[m]_{p,q} = sum_{i<m} p^i q^(m-1-i)` and the powers of
/// both bases.
fn pq_tables(n: usize, p: f64, q: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut ppow = Vec::with_capacity(n + 1);
    let mut qpow = Vec::with_capacity(n + 1);
    let mut int = Vec::with_capacity(n + 1);
    ppow.push(1.0);
    qpow.push(1.0);
    int.push(0.0);
    for m in 0..n {
        int.push(p * int[m] + qpow[m]);
        ppow.push(ppow[m] * p);
        qpow.push(qpow[m] * q);
    }
    (ppow, qpow, int)
}

/// (p,q)-Bernstein operator
/// `S_{n,p,q}(f; x) = p^{-n(n-1)/2} sum_k f(p^{n-k} [k]_{p,q}/[n]_{p,q})
///   pqbinom(n,k) p^{k(k-1)/2} x^k prod_{s<n-k} (p^s - q^s x)`.
/// The `p^{n-k}` in the node is what makes the operator reproduce `e_1`.
/// The power of `p` is folded into the tail factors, one `p^{-(s+k)}` each,
/// which is an exact redistribution of the exponent. Reduces to the
/// q-operator at `p = 1`.
pub fn pq_bernstein(f: &TargetFunction, n: usize, x: f64, p: f64, q: f64) -> Result<f64> {
    check_degree(n, 1)?;
    check_unit_interval(x)?;
    if !p.is_finite() || !q.is_finite() || q <= 0.0 || q >= p || p > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "(p, q) = ({p}, {q}) violates 0 < q < p <= 1"
        )));
    }
    let (ppow, qpow, pqint) = pq_tables(n, p, q);
    let mut acc = 0.0;
    for k in 0..=n {
        let pk = ppow[k];
        let basis = merged_product(
            k,
            n - k,
            |i| pqint[n - i] / pqint[i + 1] * x,
            |s| (ppow[s] - qpow[s] * x) / (ppow[s] * pk),
        );
        if basis == 0.0 {
            continue;
        }
        acc += basis * f.checked_eval(ppow[n - k] * pqint[k] / pqint[n])?;
    }
    Ok(acc)
}

/// One grid point of an operator evaluation: the operator value, the target
/// value and their signed difference.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GridRecord {
    pub x: f64,
    pub value: f64,
    pub f_value: f64,
    pub error: f64,
}

/// Apply one operator across a grid. The first failing point aborts the
/// sweep with its `x` recorded in the error.
pub fn evaluate_on_grid(
    kind: &OperatorKind,
    f: &TargetFunction,
    n: usize,
    grid: &[f64],
) -> Result<Vec<GridRecord>> {
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        let value = kind.apply(f, n, x)?;
        let f_value = f.checked_eval(x)?;
        out.push(GridRecord {
            x,
            value,
            f_value,
            error: value - f_value,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1() -> TargetFunction {
        TargetFunction::new("e1", Smoothness::C2, |x| x)
    }

    fn e2() -> TargetFunction {
        TargetFunction::new("e2", Smoothness::C2, |x| x * x)
    }

    fn expf() -> TargetFunction {
        TargetFunction::new("exp", Smoothness::C2, f64::exp)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn bernstein_reproduces_linears() {
        let f = e1();
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            assert!(close(bernstein(&f, 7, x).unwrap(), x, 1e-14));
        }
    }

    #[test]
    fn bernstein_e2_closed_form() {
        let f = e2();
        for &x in &[0.1, 0.35, 0.8] {
            for n in [1usize, 5, 40] {
                let want = x * x + x * (1.0 - x) / n as f64;
                assert!(close(bernstein(&f, n, x).unwrap(), want, 1e-13));
            }
        }
    }

    #[test]
    fn stancu_at_zero_alpha_is_bernstein() {
        let f = expf();
        for &x in &[0.0, 0.3, 0.72, 1.0] {
            let b = bernstein(&f, 9, x).unwrap();
            let s = stancu(&f, 9, x, 0.0).unwrap();
            assert!(close(b, s, 1e-14));
        }
    }

    #[test]
    fn lupas_is_stancu_with_reciprocal_degree() {
        let f = expf();
        for &x in &[0.2, 0.5, 0.9] {
            let l = lupas(&f, 8, x).unwrap();
            let s = stancu(&f, 8, x, 0.125).unwrap();
            assert!(close(l, s, 1e-15));
        }
    }

    #[test]
    fn r_operator_e2_closed_form() {
        let f = e2();
        for &x in &[0.05f64, 0.25, 0.5, 0.77, 1.0] {
            for n in [2usize, 3, 10, 64] {
                let m = x.min(1.0 - x);
                let nf = n as f64;
                let want = x * x + x * (1.0 - x) * (nf - 1.0 - nf * m) / (nf * (nf - 1.0 - m));
                let got = r_operator(&f, n, x).unwrap();
                assert!(close(got, want, 1e-13), "n={n} x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn r_operator_interpolates_centre_at_degree_two() {
        let f = e2();
        assert_eq!(r_operator(&f, 2, 0.5).unwrap(), 0.25);
    }

    #[test]
    fn r_operator_centre_degree_three() {
        let f = e2();
        let got = r_operator(&f, 3, 0.5).unwrap();
        assert!(close(got, 5.0 / 18.0, 1e-15));
    }

    #[test]
    fn r_operator_rejects_degree_one() {
        assert!(matches!(
            r_operator(&e2(), 1, 0.5),
            Err(Error::InvalidDegree { n: 1 })
        ));
    }

    #[test]
    fn operators_interpolate_endpoints() {
        let f = expf();
        let ops = [
            OperatorKind::Bernstein,
            OperatorKind::Stancu { alpha: 0.7 },
            OperatorKind::Lupas,
            OperatorKind::R,
            OperatorKind::QBernstein { q: 0.9 },
            OperatorKind::PQBernstein { p: 0.95, q: 0.85 },
        ];
        for kind in ops {
            for (x, want) in [(0.0, 1.0), (1.0, f64::exp(1.0))] {
                let got = kind.apply(&f, 6, x).unwrap();
                assert!(close(got, want, 1e-12), "{kind} at {x}");
            }
        }
    }

    #[test]
    fn q_bernstein_partition_of_unity() {
        let one = TargetFunction::new("e0", Smoothness::C2, |_| 1.0);
        for &q in &[0.3, 0.8, 0.95, 1.0] {
            for &x in &[0.0, 0.21, 0.6, 1.0] {
                let got = q_bernstein(&one, 25, x, q).unwrap();
                assert!(close(got, 1.0, 1e-12), "q={q} x={x}: {got}");
            }
        }
    }

    #[test]
    fn q_bernstein_reproduces_linears() {
        let f = e1();
        for &q in &[0.5, 0.95] {
            for &x in &[0.1, 0.45, 0.9] {
                let got = q_bernstein(&f, 12, x, q).unwrap();
                assert!(close(got, x, 1e-13), "q={q} x={x}");
            }
        }
    }

    #[test]
    fn q_bernstein_at_one_is_bernstein() {
        let f = expf();
        for &x in &[0.15, 0.5, 0.85] {
            let b = bernstein(&f, 15, x).unwrap();
            let qb = q_bernstein(&f, 15, x, 1.0).unwrap();
            assert!(close(b, qb, 1e-12));
        }
    }

    #[test]
    fn q_bernstein_rejects_bad_q() {
        assert!(matches!(
            q_bernstein(&e1(), 5, 0.5, 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            q_bernstein(&e1(), 5, 0.5, 1.2),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn pq_partition_of_unity_and_linears() {
        let one = TargetFunction::new("e0", Smoothness::C2, |_| 1.0);
        let f = e1();
        for &(p, q) in &[(1.0, 0.95), (0.99, 0.95), (0.9, 0.5)] {
            for &x in &[0.0, 0.33, 0.78, 1.0] {
                let u = pq_bernstein(&one, 20, x, p, q).unwrap();
                assert!(close(u, 1.0, 1e-12), "p={p} q={q} x={x}: {u}");
                let l = pq_bernstein(&f, 20, x, p, q).unwrap();
                assert!(close(l, x, 1e-12), "p={p} q={q} x={x}: {l}");
            }
        }
    }

    #[test]
    fn pq_at_p_one_is_q_bernstein() {
        let f = expf();
        for &x in &[0.2, 0.5, 0.95] {
            let qb = q_bernstein(&f, 14, x, 0.9).unwrap();
            let pq = pq_bernstein(&f, 14, x, 1.0, 0.9).unwrap();
            assert!(close(qb, pq, 1e-12));
        }
    }

    #[test]
    fn pq_rejects_q_not_below_p() {
        assert!(matches!(
            pq_bernstein(&e1(), 5, 0.5, 0.9, 0.9),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            pq_bernstein(&e1(), 5, 0.5, 1.1, 0.9),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn expectation_checks_length() {
        let pmf = polya_pmf(&PolyaParams::new(0.5, 0.5, 0.0, 3).unwrap()).unwrap();
        let out = std::panic::catch_unwind(|| evaluate_expectation(&pmf, &e1(), 5));
        assert!(out.is_err());
    }

    #[test]
    fn eval_error_carries_the_point() {
        let f = TargetFunction::new("bad", Smoothness::Bounded, |x| {
            if x > 0.4 {
                f64::NAN
            } else {
                x
            }
        });
        let err = bernstein(&f, 2, 0.9).unwrap_err();
        match err {
            Error::EvalError { x } => assert!(close(x, 0.5, 1e-15)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn grid_evaluation_reports_signed_errors() {
        let f = e2();
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let recs = evaluate_on_grid(&OperatorKind::R, &f, 4, &grid).unwrap();
        assert_eq!(recs.len(), 11);
        for r in &recs {
            assert!(r.error >= -1e-15, "R dominates convex targets");
            assert!(close(r.value - r.f_value, r.error, 1e-16));
        }
    }
}
