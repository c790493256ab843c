//! The Pólya urn distribution with a general real replacement weight.
//!
//! An urn holds white weight `a` and black weight `b`. After each draw the
//! drawn colour's weight changes by `c`, which may be negative (removal).
//! `X` counts white draws among `n`. The pmf is
//!
//! ```text
//! P(X = k) = C(n,k) a^(k,c) b^(n-k,c) / (a+b)^(n,c)
//! ```
//!
//! with `x^(k,h)` the rising factorial of increment `h`. `c = 0` recovers
//! the binomial distribution, `c = -min(x, 1-x)/(n-1)` with `a = x`,
//! `b = 1 - x` is the parameterisation behind the operator `R`.

use crate::scalar::{rising_factorial, Scalar};
use crate::{Error, Rational, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Entries computed in `f64` may dip this far below zero before the pmf is
/// rejected instead of clamped.
pub const NEGATIVE_FLOOR: f64 = -1e-15;

/// Urn parameters: initial weights `a`, `b`, replacement `c`, draw count `n`.
///
/// Construction enforces `a >= 0`, `b >= 0`, `a + b > 0`, `n >= 1` and the
/// admissibility inequalities `a + (n-1)c >= 0`, `b + (n-1)c >= 0` that keep
/// every factor of the pmf nonnegative (floating point types get a small
/// cushion below zero, exact types none).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyaParams<T> {
    a: T,
    b: T,
    c: T,
    n: usize,
}

impl<T: Scalar> PolyaParams<T> {
    pub fn new(a: T, b: T, c: T, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n = 0 violates n >= 1".into()));
        }
        let slack = T::admissibility_slack();
        let zero = T::zero();
        if a < zero.clone() - slack.clone() {
            return Err(Error::InvalidParams(format!(
                "a = {} violates a >= 0",
                a.approx_f64()
            )));
        }
        if b < zero.clone() - slack.clone() {
            return Err(Error::InvalidParams(format!(
                "b = {} violates b >= 0",
                b.approx_f64()
            )));
        }
        if a.clone() + b.clone() <= zero {
            return Err(Error::InvalidParams(
                "a + b = 0 violates a + b > 0".into(),
            ));
        }
        let steps = T::from_usize(n - 1);
        let wa = a.clone() + steps.clone() * c.clone();
        let wb = b.clone() + steps * c.clone();
        if wa < T::zero() - slack.clone() {
            return Err(Error::InvalidParams(format!(
                "a + (n-1)c = {} violates a + (n-1)c >= 0",
                wa.approx_f64()
            )));
        }
        if wb < T::zero() - slack {
            return Err(Error::InvalidParams(format!(
                "b + (n-1)c = {} violates b + (n-1)c >= 0",
                wb.approx_f64()
            )));
        }
        Ok(PolyaParams { a, b, c, n })
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    pub fn b(&self) -> &T {
        &self.b
    }

    pub fn c(&self) -> &T {
        &self.c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn total(&self) -> T {
        self.a.clone() + self.b.clone()
    }

    /// Mirror the urn: swap colours. The pmf of the mirrored urn is the
    /// reversal of the original pmf.
    pub fn swapped(&self) -> Self {
        PolyaParams {
            a: self.b.clone(),
            b: self.a.clone(),
            c: self.c.clone(),
            n: self.n,
        }
    }
}

/// Parameters of the negative-replacement urn behind the operator `R`:
/// `a = x`, `b = 1 - x`, `c = -min(x, 1-x)/(n-1)`.
pub fn r_params<T: Scalar>(x: T, n: usize) -> Result<PolyaParams<T>> {
    if n < 2 {
        return Err(Error::InvalidDegree { n: n as u64 });
    }
    if x < T::zero() || x > T::one() {
        return Err(Error::InvalidParams(format!(
            "x = {} violates 0 <= x <= 1",
            x.approx_f64()
        )));
    }
    let b = T::one() - x.clone();
    let m = if x < b { x.clone() } else { b.clone() };
    let c = (T::zero() - m) / T::from_usize(n - 1);
    PolyaParams::new(x, b, c, n)
}

/// First index `i` in `0..n` where `start + i*step` vanishes. Vanishing is
/// judged within the admissibility slack at the term's own scale: float
/// parameters that are rounded images of an exact zero configuration land a
/// few ulps off zero, and the support must clip there all the same. Exact
/// scalars have zero slack, so for them only a true zero counts.
fn first_zero<T: Scalar>(start: &T, step: &T, n: usize) -> Option<usize> {
    let mut v = start.clone();
    for i in 0..n {
        let scale = start.abs() + T::from_usize(i) * step.abs();
        if v.abs() <= T::admissibility_slack() * scale {
            return Some(i);
        }
        v = v + step.clone();
    }
    None
}

/// One pmf entry as a product of `n` bounded ratios. Binomial, numerator and
/// denominator factors are merged in proportion so partial products stay
/// near the final probability's scale instead of visiting the huge
/// intermediate values the three raw factorials would produce.
fn anchored_entry<T: Scalar>(p: &PolyaParams<T>, k: usize) -> T {
    let n = p.n;
    let total = p.total();

    if T::prefers_log_products() {
        // No multiplication order keeps the partial products of a pmf entry
        // inside a float's exponent range (the binomial part alone swings
        // by exp(n ln 2)), so accumulate logarithms instead. The anchor sits
        // at the mode where the value is at least about 1/(n+1), far from
        // underflow, and an absolute log error of n*eps is harmless there.
        let mut log_sum = 0.0f64;
        let mut negative = false;
        for i in 0..k {
            let v = (p.a.clone() + T::from_usize(i) * p.c.clone()).approx_f64();
            if v < 0.0 {
                negative = !negative;
            }
            log_sum += v.abs().ln();
            log_sum += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
        }
        for j in 0..(n - k) {
            let v = (p.b.clone() + T::from_usize(j) * p.c.clone()).approx_f64();
            if v < 0.0 {
                negative = !negative;
            }
            log_sum += v.abs().ln();
        }
        for t in 0..n {
            let d = (total.clone() + T::from_usize(t) * p.c.clone()).approx_f64();
            if d < 0.0 {
                negative = !negative;
            }
            log_sum -= d.abs().ln();
        }
        let value = log_sum.exp();
        return T::from_f64_approx(if negative { -value } else { value });
    }

    // exact scalars: direct product, interleaved only to keep the numbers
    // from growing faster than needed
    let mut ia = 0usize; // a-side factors consumed (carry the binomial ratio)
    let mut jb = 0usize; // b-side factors consumed
    let mut acc = T::one();
    for t in 0..n {
        let take_a = if ia >= k {
            false
        } else if jb >= n - k {
            true
        } else {
            ia * (n - k) <= jb * k
        };
        let numer = if take_a {
            let f = T::from_usize(n - ia) * (p.a.clone() + T::from_usize(ia) * p.c.clone())
                / T::from_usize(ia + 1);
            ia += 1;
            f
        } else {
            let f = p.b.clone() + T::from_usize(jb) * p.c.clone();
            jb += 1;
            f
        };
        let denom = total.clone() + T::from_usize(t) * p.c.clone();
        acc = acc * numer / denom;
    }
    acc
}

/// Raw pmf over any scalar: length `n + 1`, index `k` holds `P(X = k)`.
///
/// Zero factors in the rising factorials are detected exactly and the
/// corresponding entries are set to zero outright; the rest of the support
/// is filled from an anchor entry near the mean through the ratio
/// recurrence, so no intermediate ever leaves the probability scale.
pub fn pmf_values<T: Scalar>(p: &PolyaParams<T>) -> Result<Vec<T>> {
    let n = p.n;
    let total = p.total();

    if let Some(t) = first_zero(&total, &p.c, n) {
        return Err(Error::DegenerateTotal { index: t });
    }

    let hi = first_zero(&p.a, &p.c, n).unwrap_or(n).min(n);
    let lo = match first_zero(&p.b, &p.c, n) {
        Some(j) => n - j,
        None => 0,
    };
    if lo > hi {
        return Err(Error::InvalidParams(
            "numerator factors vanish on the whole range".into(),
        ));
    }

    let mut probs = vec![T::zero(); n + 1];
    if lo == hi {
        // single-point support, normalization forces probability one
        probs[lo] = T::one();
        return Ok(probs);
    }

    let mean = (T::from_usize(n) * p.a.clone() / total).approx_f64();
    let k0 = (mean.round() as usize).clamp(lo, hi);
    probs[k0] = anchored_entry(p, k0);

    // p(k+1)/p(k) = (n-k)(a+kc) / ((k+1)(b+(n-k-1)c))
    for k in k0..hi {
        let numer = T::from_usize(n - k) * (p.a.clone() + T::from_usize(k) * p.c.clone());
        let denom =
            T::from_usize(k + 1) * (p.b.clone() + T::from_usize(n - k - 1) * p.c.clone());
        probs[k + 1] = probs[k].clone() * numer / denom;
    }
    for k in ((lo + 1)..=k0).rev() {
        let numer = T::from_usize(k) * (p.b.clone() + T::from_usize(n - k) * p.c.clone());
        let denom =
            T::from_usize(n - k + 1) * (p.a.clone() + T::from_usize(k - 1) * p.c.clone());
        probs[k - 1] = probs[k].clone() * numer / denom;
    }

    if T::prefers_log_products() {
        // The anchor's log accumulation carries an O(n eps) relative bias
        // that the ratio chain copies into every entry. The true mass is
        // exactly one, so dividing by the compensated sum strips it.
        let mut sum = T::zero();
        let mut carry = T::zero();
        for v in &probs {
            let y = v.clone() - carry.clone();
            let t = sum.clone() + y.clone();
            carry = (t.clone() - sum) - y;
            sum = t;
        }
        for v in &mut probs {
            *v = v.clone() / sum.clone();
        }
    }
    Ok(probs)
}

/// A validated `f64` pmf. Entries in `[-1e-15, 0)` are round-off and get
/// clamped to zero; anything lower is rejected as a formula error.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        for (k, v) in values.iter_mut().enumerate() {
            if *v < NEGATIVE_FLOOR {
                return Err(Error::NegativeMass { index: k, value: *v });
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(Pmf { probs: values })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Draw count; the pmf has `n + 1` entries.
    pub fn n(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// Floating point pmf of the urn distribution.
pub fn polya_pmf(p: &PolyaParams<f64>) -> Result<Pmf> {
    Pmf::new(pmf_values(p)?)
}

/// E X = n a / (a + b).
pub fn polya_mean<T: Scalar>(p: &PolyaParams<T>) -> T {
    T::from_usize(p.n) * p.a.clone() / p.total()
}

/// Var X = n a b / (a+b)^2 * (1 + (n-1)c/(a+b+c)).
pub fn polya_variance<T: Scalar>(p: &PolyaParams<T>) -> Result<T> {
    let total = p.total();
    let base = T::from_usize(p.n) * p.a.clone() * p.b.clone() / (total.clone() * total.clone());
    if p.n == 1 {
        return Ok(base);
    }
    let shifted = total.clone() + p.c.clone();
    if shifted.is_zero() {
        return Err(Error::InvalidParams(
            "a + b + c = 0 makes the variance correction undefined".into(),
        ));
    }
    let corr = T::one() + T::from_usize(p.n - 1) * p.c.clone() / shifted;
    Ok(base * corr)
}

/// Mean, variance and central moments `mu_0 .. mu_k` of the distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet<T> {
    pub mean: T,
    pub variance: T,
    central: Vec<T>,
}

impl<T: Clone> MomentSet<T> {
    /// `mu_k`; panics if `k` exceeds the order the set was built with.
    pub fn central(&self, k: usize) -> T {
        self.central[k].clone()
    }

    pub fn max_order(&self) -> usize {
        self.central.len() - 1
    }
}

fn binomial_row<T: Scalar>(j: usize) -> Vec<T> {
    let mut row = vec![T::one(); j + 1];
    for i in 1..=j {
        row[i] =
            row[i - 1].clone() * T::from_usize(j - i + 1) / T::from_usize(i);
    }
    row
}

/// Central moments through order `max_order` by upward recursion.
///
/// Summing the pmf's cross-multiplied term ratio against `(X - m + 1)^j`
/// gives the identity `E[X(b+(n-X)c) Y^j] = E[(n-X)(a+Xc)(Y+1)^j]` with
/// `Y = X - m`. Expanding both sides in central moments, the `mu_{j+1}`
/// and `mu_j` head terms cancel down to
///
/// ```text
/// (a+b+jc) mu_{j+1} = sum_{i=0}^{j-1} C(j,i) (q0 mu_i + q1 mu_{i+1})
///                     - c sum_{i=0}^{j-2} C(j,i) mu_{i+2}
/// ```
///
/// where `m = na/(a+b)`, `q0 = (n-m)(a+mc)`, `q1 = (n-m)c - (a+mc)`,
/// seeded with `mu_0 = 1`, `mu_1 = 0`. A zero-variance urn is a point mass,
/// so every higher moment is zero without running the recursion.
///
/// When `a+b+jc` vanishes the step to `mu_{j+1}` degenerates to `0 = 0` and
/// determines nothing; that one order is filled in by direct enumeration of
/// the pmf and the recursion resumes above it. At most one order can be
/// singular, since the divisors move by `c` per step.
pub fn central_moments<T: Scalar>(p: &PolyaParams<T>, max_order: usize) -> Result<MomentSet<T>> {
    let mean = polya_mean(p);
    let variance = polya_variance(p)?;

    let mut central = vec![T::zero(); max_order + 1];
    central[0] = T::one();
    if variance.is_zero() {
        return Ok(MomentSet {
            mean,
            variance,
            central,
        });
    }

    let total = p.total();
    let n_t = T::from_usize(p.n);
    let am = p.a.clone() + mean.clone() * p.c.clone();
    let nm = n_t - mean.clone();
    let q0 = nm.clone() * am.clone();
    let q1 = nm * p.c.clone() - am;

    for j in 1..max_order {
        let denom = total.clone() + T::from_usize(j) * p.c.clone();
        // cancellation scale of the divisor; a+b+jc rounding slightly off
        // zero still means the step determines nothing
        let scale = total.abs() + T::from_usize(j) * p.c.abs();
        let row: Vec<T> = binomial_row(j);
        let mut rhs = T::zero();
        for i in 0..=(j - 1) {
            rhs = rhs
                + row[i].clone()
                    * (q0.clone() * central[i].clone() + q1.clone() * central[i + 1].clone());
        }
        if j >= 2 {
            for i in 0..=(j - 2) {
                rhs = rhs - p.c.clone() * row[i].clone() * central[i + 2].clone();
            }
        }
        central[j + 1] = if denom.abs() <= T::admissibility_slack() * scale {
            enumerated_central_moment(p, &mean, j + 1)?
        } else {
            rhs / denom
        };
    }

    Ok(MomentSet {
        mean,
        variance,
        central,
    })
}

fn enumerated_central_moment<T: Scalar>(p: &PolyaParams<T>, mean: &T, order: usize) -> Result<T> {
    let probs = pmf_values(p)?;
    let mut acc = T::zero();
    for (k, prob) in probs.iter().enumerate() {
        if prob.is_zero() {
            continue;
        }
        let dev = T::from_usize(k) - mean.clone();
        let mut pw = T::one();
        for _ in 0..order {
            pw = pw * dev.clone();
        }
        acc = acc + pw * prob.clone();
    }
    Ok(acc)
}

/// Single central moment `mu_k`.
pub fn central_moment_recursion<T: Scalar>(p: &PolyaParams<T>, k: usize) -> Result<T> {
    Ok(central_moments(p, k)?.central(k))
}

/// Budget for the exact oracle: a hard cap on `n` and on the decimal size
/// of any intermediate rational.
#[derive(Debug, Clone)]
pub struct ExactOracleConfig {
    pub max_n: usize,
    pub max_digits: usize,
}

impl Default for ExactOracleConfig {
    fn default() -> Self {
        ExactOracleConfig {
            max_n: 40,
            max_digits: 4096,
        }
    }
}

fn digits(r: &Rational) -> usize {
    // bits/3 underestimates the decimal length by at most ~9%, good enough
    // for a budget check without rendering the number.
    (r.numer().bits().max(r.denom().bits()) / 3) as usize + 1
}

/// Exact pmf straight from the defining formula, in rational arithmetic:
/// `C(n,k) a^(k,c) b^(n-k,c) / (a+b)^(n,c)`. This is the oracle the floating
/// point path is checked against; it shares no code with it beyond the
/// parameter validation.
pub fn polya_pmf_exact(
    p: &PolyaParams<Rational>,
    cfg: &ExactOracleConfig,
) -> Result<Vec<Rational>> {
    let n = p.n;
    if n > cfg.max_n {
        return Err(Error::OverflowBudget {
            detail: format!("n = {} exceeds exact-oracle cap {}", n, cfg.max_n),
        });
    }
    let total = p.total();
    if let Some(t) = first_zero(&total, &p.c, n) {
        return Err(Error::DegenerateTotal { index: t });
    }

    let denom = rising_factorial(&total, &p.c, n);
    if digits(&denom) > cfg.max_digits {
        return Err(Error::OverflowBudget {
            detail: format!("denominator needs ~{} digits", digits(&denom)),
        });
    }

    // prefix rising factorials of both colours
    let mut ra = Vec::with_capacity(n + 1);
    let mut rb = Vec::with_capacity(n + 1);
    ra.push(Rational::one());
    rb.push(Rational::one());
    let mut fa = p.a.clone();
    let mut fb = p.b.clone();
    for i in 0..n {
        ra.push(ra[i].clone() * fa.clone());
        rb.push(rb[i].clone() * fb.clone());
        fa += p.c.clone();
        fb += p.c.clone();
    }

    let mut probs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let binom: BigInt = num_integer::binomial(BigInt::from(n), BigInt::from(k));
        let entry = BigRational::from_integer(binom) * ra[k].clone() * rb[n - k].clone()
            / denom.clone();
        if entry.is_negative() {
            return Err(Error::NegativeMass {
                index: k,
                value: entry.approx_f64(),
            });
        }
        if digits(&entry) > cfg.max_digits {
            return Err(Error::OverflowBudget {
                detail: format!("entry {k} needs ~{} digits", digits(&entry)),
            });
        }
        probs.push(entry);
    }

    debug_assert!(probs.iter().fold(Rational::zero(), |s, p| s + p.clone()).is_one());
    Ok(probs)
}

/// Textual dump of an exact pmf, one `k numerator/denominator` line per
/// entry. The golden files in the test suite store pmfs in this shape.
pub fn exact_pmf_dump(probs: &[Rational]) -> String {
    let mut out = String::new();
    for (k, p) in probs.iter().enumerate() {
        out.push_str(&format!("{} {}/{}\n", k, p.numer(), p.denom()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn uniform_urn() {
        // one unit of each colour, replacement one: every count equally likely
        let p = PolyaParams::new(1.0, 1.0, 1.0, 2).unwrap();
        let pmf = polya_pmf(&p).unwrap();
        for &v in pmf.probs() {
            assert!(close(v, 1.0 / 3.0, 1e-15));
        }
    }

    #[test]
    fn binomial_special_case() {
        let p = PolyaParams::new(0.3, 0.7, 0.0, 4).unwrap();
        let pmf = polya_pmf(&p).unwrap();
        let expect = [
            0.7f64.powi(4),
            4.0 * 0.3 * 0.7f64.powi(3),
            6.0 * 0.3f64.powi(2) * 0.7f64.powi(2),
            4.0 * 0.3f64.powi(3) * 0.7,
            0.3f64.powi(4),
        ];
        for (got, want) in pmf.probs().iter().zip(expect) {
            assert!(close(*got, want, 1e-14), "{got} vs {want}");
        }
    }

    #[test]
    fn negative_replacement_support_collapses() {
        let p = PolyaParams::new(0.5, 0.5, -0.5, 2).unwrap();
        let pmf = polya_pmf(&p).unwrap();
        assert_eq!(pmf.probs(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn admissibility_violation_names_the_inequality() {
        let err = PolyaParams::new(1.0, 1.0, -2.0, 2).unwrap_err();
        match err {
            Error::InvalidParams(msg) => assert!(msg.contains("a + (n-1)c")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn zero_total_rejected() {
        assert!(matches!(
            PolyaParams::new(0.0, 0.0, 1.0, 3),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn r_params_match_hand_computation() {
        let p = r_params(1.0 / 3.0, 4).unwrap();
        assert!(close(*p.a(), 1.0 / 3.0, 1e-15));
        assert!(close(*p.b(), 2.0 / 3.0, 1e-15));
        assert!(close(*p.c(), -1.0 / 9.0, 1e-15));

        let exact = r_params(rat(1, 3), 4).unwrap();
        assert_eq!(*exact.c(), rat(-1, 9));
    }

    #[test]
    fn r_params_degree_guard() {
        assert!(matches!(r_params(0.5, 1), Err(Error::InvalidDegree { n: 1 })));
        assert!(matches!(r_params(1.5, 4), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn endpoint_urns_are_point_masses() {
        let p0 = polya_pmf(&r_params(0.0, 6).unwrap()).unwrap();
        assert_eq!(p0.probs()[0], 1.0);
        assert_eq!(p0.probs()[1..].iter().sum::<f64>(), 0.0);

        let p1 = polya_pmf(&r_params(1.0, 6).unwrap()).unwrap();
        assert_eq!(p1.probs()[6], 1.0);
        assert_eq!(p1.probs()[..6].iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn pmf_sums_to_one_across_replacement_signs() {
        for &(a, b, c, n) in &[
            (2.0, 3.0, 0.5, 25),
            (1.0, 1.0, 1.0, 40),
            (0.4, 0.6, -0.01, 30),
            (5.0, 4.0, -0.2, 20),
        ] {
            let pmf = polya_pmf(&PolyaParams::new(a, b, c, n).unwrap()).unwrap();
            assert!((pmf.sum() - 1.0).abs() < 1e-13, "sum {} for c={c}", pmf.sum());
        }
    }

    #[test]
    fn mirrored_urn_reverses_the_pmf() {
        let p = PolyaParams::new(2.0, 5.0, -0.125, 12).unwrap();
        let pmf = polya_pmf(&p).unwrap();
        let rev = polya_pmf(&p.swapped()).unwrap();
        let n = pmf.n();
        for k in 0..=n {
            assert!(close(pmf.probs()[k], rev.probs()[n - k], 1e-12));
        }
    }

    #[test]
    fn mean_and_variance_closed_forms() {
        let p = PolyaParams::new(1.0, 1.0, 1.0, 2).unwrap();
        assert_eq!(polya_mean(&p), 1.0);
        assert!(close(polya_variance(&p).unwrap(), 2.0 / 3.0, 1e-15));

        let z = PolyaParams::new(0.0, 1.0, 0.0, 10).unwrap();
        assert_eq!(polya_mean(&z), 0.0);
        assert_eq!(polya_variance(&z).unwrap(), 0.0);
    }

    #[test]
    fn variance_against_enumeration() {
        let p = PolyaParams::new(2.0, 3.0, 0.7, 15).unwrap();
        let pmf = polya_pmf(&p).unwrap();
        let mean = polya_mean(&p);
        let var: f64 = pmf
            .probs()
            .iter()
            .enumerate()
            .map(|(k, pr)| pr * (k as f64 - mean).powi(2))
            .sum();
        assert!(close(var, polya_variance(&p).unwrap(), 1e-12));
    }

    #[test]
    fn central_moments_binomial_closed_forms() {
        let (p, q, n) = (0.3, 0.7, 17);
        let params = PolyaParams::new(p, q, 0.0, n).unwrap();
        let ms = central_moments(&params, 4).unwrap();
        let nf = n as f64;
        assert!(close(ms.central(2), nf * p * q, 1e-13));
        assert!(close(ms.central(3), nf * p * q * (q - p), 1e-13));
        assert!(close(
            ms.central(4),
            nf * p * q * (1.0 + 3.0 * (nf - 2.0) * p * q),
            1e-13
        ));
    }

    #[test]
    fn central_moments_match_enumeration_with_replacement() {
        for &(a, b, c, n) in &[
            (1.0, 1.0, 1.0, 12),
            (2.0, 3.0, 0.5, 9),
            (0.4, 0.6, -0.02, 14),
            (0.5, 0.5, -0.05, 11),
        ] {
            let params = PolyaParams::new(a, b, c, n).unwrap();
            let pmf = polya_pmf(&params).unwrap();
            let mean = polya_mean(&params);
            let ms = central_moments(&params, 6).unwrap();
            for order in 2..=6 {
                let direct: f64 = pmf
                    .probs()
                    .iter()
                    .enumerate()
                    .map(|(k, pr)| pr * (k as f64 - mean).powi(order as i32))
                    .sum();
                assert!(
                    close(ms.central(order), direct, 1e-11),
                    "order {order} for ({a},{b},{c},{n}): {} vs {direct}",
                    ms.central(order)
                );
            }
        }
    }

    #[test]
    fn symmetric_urns_have_zero_odd_moments() {
        let params = r_params(0.5, 9).unwrap();
        let ms = central_moments(&params, 5).unwrap();
        assert!(ms.central(3).abs() < 1e-14);
        assert!(ms.central(5).abs() < 1e-13);
    }

    #[test]
    fn point_mass_urn_short_circuits_moments() {
        let params = PolyaParams::new(0.5, 0.5, -0.5, 2).unwrap();
        let ms = central_moments(&params, 3).unwrap();
        assert_eq!(ms.central(2), 0.0);
        assert_eq!(ms.central(3), 0.0);
    }

    #[test]
    fn exact_recursion_agrees_with_exact_variance() {
        let params = PolyaParams::new(rat(2, 1), rat(3, 1), rat(1, 2), 9).unwrap();
        let ms = central_moments(&params, 4).unwrap();
        assert_eq!(ms.central(2), polya_variance(&params).unwrap());
    }

    #[test]
    fn exact_oracle_uniform() {
        let p = PolyaParams::new(rat(1, 1), rat(1, 1), rat(1, 1), 2).unwrap();
        let probs = polya_pmf_exact(&p, &ExactOracleConfig::default()).unwrap();
        assert_eq!(probs, vec![rat(1, 3), rat(1, 3), rat(1, 3)]);
    }

    #[test]
    fn exact_oracle_negative_replacement_sums_to_one() {
        let p = r_params(rat(1, 3), 4).unwrap();
        let probs = polya_pmf_exact(&p, &ExactOracleConfig::default()).unwrap();
        let sum = probs.iter().fold(Rational::zero(), |s, v| s + v.clone());
        assert!(sum.is_one());
        assert_eq!(probs[4], rat(0, 1)); // the white weight is exhausted
    }

    #[test]
    fn exact_oracle_respects_the_degree_cap() {
        let p = PolyaParams::new(rat(1, 1), rat(1, 1), rat(0, 1), 50).unwrap();
        let cfg = ExactOracleConfig::default();
        assert!(matches!(
            polya_pmf_exact(&p, &cfg),
            Err(Error::OverflowBudget { .. })
        ));
    }

    #[test]
    fn dump_round_trips_known_values() {
        let p = PolyaParams::new(rat(1, 1), rat(1, 1), rat(1, 1), 2).unwrap();
        let probs = polya_pmf_exact(&p, &ExactOracleConfig::default()).unwrap();
        assert_eq!(exact_pmf_dump(&probs), "0 1/3\n1 1/3\n2 1/3\n");
    }

    #[test]
    fn float_and_exact_routes_agree() {
        let fp = PolyaParams::new(0.25, 0.75, -0.015625, 16).unwrap();
        let ep = PolyaParams::new(rat(1, 4), rat(3, 4), rat(-1, 64), 16).unwrap();
        let f = polya_pmf(&fp).unwrap();
        let e = polya_pmf_exact(&ep, &ExactOracleConfig::default()).unwrap();
        for (k, exact) in e.iter().enumerate() {
            let ex = exact.approx_f64();
            if ex == 0.0 {
                assert!(f.probs()[k].abs() < 1e-15);
            } else {
                assert!(close(f.probs()[k], ex, 1e-13), "entry {k}");
            }
        }
    }

    #[test]
    fn generic_recurrence_equals_direct_formula_exactly() {
        // same formula, two different evaluation orders, exact arithmetic:
        // any mismatch is an algebra bug, not round-off
        for &(a, b, c, n) in &[(3i64, 5, 2, 18), (1, 2, -1, 3), (7, 3, 0, 12)] {
            let p = PolyaParams::new(rat(a, 7), rat(b, 7), rat(c, 21), n).unwrap();
            let rec = pmf_values(&p).unwrap();
            let direct = polya_pmf_exact(&p, &ExactOracleConfig::default()).unwrap();
            assert_eq!(rec, direct, "({a},{b},{c},{n})");
        }
    }

    #[test]
    fn single_draw_exhausting_urn_is_still_welldefined() {
        // n = 1 with c = -(a+b): the variance needs no correction factor and
        // the zero-variance short circuit covers the moments, so the
        // vanishing a+b+c never gets divided by.
        let params = PolyaParams::new(1.0, 0.0, -1.0, 1).unwrap();
        assert_eq!(polya_variance(&params).unwrap(), 0.0);
        let ms = central_moments(&params, 3).unwrap();
        assert_eq!(ms.central(3), 0.0);
        let pmf = polya_pmf(&params).unwrap();
        assert_eq!(pmf.probs(), &[0.0, 1.0]);
    }

    #[test]
    fn swapped_exact_pmf_reverses_exactly() {
        let p = PolyaParams::new(rat(2, 1), rat(5, 1), rat(-1, 8), 12).unwrap();
        let cfg = ExactOracleConfig::default();
        let fwd = polya_pmf_exact(&p, &cfg).unwrap();
        let rev = polya_pmf_exact(&p.swapped(), &cfg).unwrap();
        let n = fwd.len() - 1;
        for k in 0..=n {
            assert_eq!(fwd[k], rev[n - k]);
        }
    }
}
