//! Built-in target functions.
//!
//! Each entry bundles the function with whatever closed-form side data it
//! has: derivative, second derivative, exact moduli of continuity, and for
//! the Korovkin monomials the exact sup error under the urn operators.
//! Everything the bound and asymptotics checks consume is taken from here,
//! so the numerical machinery never has to guess at smoothness.

use crate::operators::{OperatorKind, RealFn, Smoothness, TargetFunction};
use std::f64::consts::{E, PI};
use std::sync::Arc;

/// A catalogued target function.
#[derive(Clone)]
pub struct FixtureEntry {
    pub function: TargetFunction,
    pub derivative: Option<RealFn>,
    pub second_derivative: Option<RealFn>,
    /// Exact sup-norm error of an operator at degree `n`, where known.
    pub exact_sup_error: Option<fn(&OperatorKind, usize) -> Option<f64>>,
    /// Where the fixture comes from / what it exercises.
    pub provenance: &'static str,
}

impl std::fmt::Debug for FixtureEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FixtureEntry")
            .field("label", &self.function.label())
            .field("smoothness", &self.function.smoothness())
            .field("provenance", &self.provenance)
            .finish()
    }
}

/// Exact sup error of the classical Bernstein operator on `x^2`.
pub fn bernstein_e2_sup_error(n: usize) -> f64 {
    1.0 / (4.0 * n as f64)
}

/// Exact sup error of the operator `R` on `x^2`: the pointwise error is
/// `x(1-x)(n-1-n*min(x,1-x)) / (n(n-1-min(x,1-x)))`, symmetric about 1/2,
/// maximised here by a coarse scan refined with golden sections.
pub fn r_e2_sup_error(n: usize) -> f64 {
    debug_assert!(n >= 2);
    let nf = n as f64;
    let g = |x: f64| x * (1.0 - x) * (nf - 1.0 - nf * x) / (nf * (nf - 1.0 - x));

    let cells = 4096usize;
    let mut best_i = 0usize;
    let mut best = 0.0;
    for i in 0..=cells {
        let v = g(0.5 * i as f64 / cells as f64);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let mut lo = 0.5 * best_i.saturating_sub(1) as f64 / cells as f64;
    let mut hi = 0.5 * (best_i + 1).min(cells) as f64 / cells as f64;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    for _ in 0..120 {
        if hi - lo < 1e-16 {
            break;
        }
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = g(x1);
        }
    }
    best.max(g1).max(g2)
}

fn zero_sup_error(_kind: &OperatorKind, _n: usize) -> Option<f64> {
    Some(0.0)
}

fn e2_sup_error(kind: &OperatorKind, n: usize) -> Option<f64> {
    match kind {
        OperatorKind::Bernstein => Some(bernstein_e2_sup_error(n)),
        OperatorKind::R if n >= 2 => Some(r_e2_sup_error(n)),
        _ => None,
    }
}

fn unit(delta: f64) -> f64 {
    delta.clamp(0.0, 1.0)
}

/// The nine built-in fixtures, in their canonical order.
pub fn corpus() -> Vec<FixtureEntry> {
    vec![
        FixtureEntry {
            function: TargetFunction::new("e0", Smoothness::C2, |_| 1.0)
                .with_exact_modulus(|_| 0.0)
                .with_exact_modulus_deriv(|_| 0.0),
            derivative: Some(Arc::new(|_| 0.0)),
            second_derivative: Some(Arc::new(|_| 0.0)),
            exact_sup_error: Some(zero_sup_error),
            provenance: "Korovkin test set",
        },
        FixtureEntry {
            function: TargetFunction::new("e1", Smoothness::C2, |x| x)
                .with_exact_modulus(unit)
                .with_exact_modulus_deriv(|_| 0.0),
            derivative: Some(Arc::new(|_| 1.0)),
            second_derivative: Some(Arc::new(|_| 0.0)),
            exact_sup_error: Some(zero_sup_error),
            provenance: "Korovkin test set",
        },
        FixtureEntry {
            function: TargetFunction::new("e2", Smoothness::C2, |x| x * x)
                .with_exact_modulus(|d| {
                    let d = unit(d);
                    2.0 * d - d * d
                })
                .with_exact_modulus_deriv(|d| 2.0 * unit(d)),
            derivative: Some(Arc::new(|x| 2.0 * x)),
            second_derivative: Some(Arc::new(|_| 2.0)),
            exact_sup_error: Some(e2_sup_error),
            provenance: "Korovkin test set",
        },
        FixtureEntry {
            function: TargetFunction::new("x3", Smoothness::C2, |x| x.powi(3))
                .with_exact_modulus(|d| {
                    let d = unit(d);
                    1.0 - (1.0 - d).powi(3)
                })
                .with_exact_modulus_deriv(|d| {
                    let d = unit(d);
                    3.0 * (2.0 * d - d * d)
                }),
            derivative: Some(Arc::new(|x| 3.0 * x * x)),
            second_derivative: Some(Arc::new(|x| 6.0 * x)),
            exact_sup_error: None,
            provenance: "monomial calibration",
        },
        FixtureEntry {
            function: TargetFunction::new("x4", Smoothness::C2, |x| x.powi(4))
                .with_exact_modulus(|d| {
                    let d = unit(d);
                    1.0 - (1.0 - d).powi(4)
                })
                .with_exact_modulus_deriv(|d| {
                    let d = unit(d);
                    4.0 * (1.0 - (1.0 - d).powi(3))
                }),
            derivative: Some(Arc::new(|x| 4.0 * x.powi(3))),
            second_derivative: Some(Arc::new(|x| 12.0 * x * x)),
            exact_sup_error: None,
            provenance: "monomial calibration",
        },
        FixtureEntry {
            function: TargetFunction::new("exp", Smoothness::C2, f64::exp)
                .with_exact_modulus(|d| E * (1.0 - (-unit(d)).exp()))
                .with_exact_modulus_deriv(|d| E * (1.0 - (-unit(d)).exp())),
            derivative: Some(Arc::new(f64::exp)),
            second_derivative: Some(Arc::new(f64::exp)),
            exact_sup_error: None,
            provenance: "smooth convex benchmark",
        },
        FixtureEntry {
            function: TargetFunction::new("sin9pi2", Smoothness::C2, |x| {
                (4.5 * PI * x).sin()
            })
            .with_exact_modulus(oscillation)
            .with_exact_modulus_deriv(|d| 4.5 * PI * oscillation(d)),
            derivative: Some(Arc::new(|x| 4.5 * PI * (4.5 * PI * x).cos())),
            second_derivative: Some(Arc::new(|x| {
                -(4.5 * PI) * (4.5 * PI) * (4.5 * PI * x).sin()
            })),
            exact_sup_error: None,
            provenance: "oscillatory figure benchmark",
        },
        FixtureEntry {
            function: TargetFunction::new("tent", Smoothness::PiecewiseC1, |x| {
                (2.0 * (x - 0.5).abs() - 0.5).abs()
            })
            .with_exact_modulus(|d| (2.0 * d.max(0.0)).min(0.5)),
            derivative: None,
            second_derivative: None,
            exact_sup_error: None,
            provenance: "piecewise-linear figure benchmark",
        },
        FixtureEntry {
            function: TargetFunction::new("jump", Smoothness::Bounded, |x| {
                if x >= 1.0 / 3.0 {
                    x + 1.0
                } else {
                    0.0
                }
            }),
            derivative: None,
            second_derivative: None,
            exact_sup_error: None,
            provenance: "discontinuous figure benchmark",
        },
    ]
}

/// Largest oscillation of a unit-amplitude sine over windows of width
/// `delta` in the argument scaled by 9*pi/2: `2 sin(9 pi delta / 4)` until
/// the window spans a half period, then the full swing of 2.
fn oscillation(delta: f64) -> f64 {
    let d = delta.max(0.0);
    if d >= 2.0 / 9.0 {
        2.0
    } else {
        2.0 * (2.25 * PI * d).sin()
    }
}

/// Look a fixture up by its label.
pub fn find(label: &str) -> Option<FixtureEntry> {
    corpus().into_iter().find(|e| e.function.label() == label)
}

/// The labels in canonical order.
pub fn labels() -> Vec<&'static str> {
    vec![
        "e0", "e1", "e2", "x3", "x4", "exp", "sin9pi2", "tent", "jump",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_labels_match_catalogue() {
        let got: Vec<String> = corpus()
            .iter()
            .map(|e| e.function.label().to_string())
            .collect();
        assert_eq!(got, labels());
    }

    #[test]
    fn lookup_by_label() {
        assert!(find("tent").is_some());
        assert!(find("unknown").is_none());
    }

    #[test]
    fn tent_shape() {
        let f = find("tent").unwrap().function;
        assert_eq!(f.eval(0.0), 0.5);
        assert_eq!(f.eval(0.25), 0.0);
        assert_eq!(f.eval(0.5), 0.5);
        assert_eq!(f.eval(0.75), 0.0);
        assert_eq!(f.eval(1.0), 0.5);
    }

    #[test]
    fn jump_is_right_closed_at_the_step() {
        let f = find("jump").unwrap().function;
        assert_eq!(f.eval(1.0 / 3.0), 1.0 / 3.0 + 1.0);
        assert_eq!(f.eval(0.33), 0.0);
        assert_eq!(f.eval(1.0), 2.0);
    }

    #[test]
    fn smoothness_tags() {
        assert_eq!(find("exp").unwrap().function.smoothness(), Smoothness::C2);
        assert_eq!(
            find("tent").unwrap().function.smoothness(),
            Smoothness::PiecewiseC1
        );
        assert_eq!(
            find("jump").unwrap().function.smoothness(),
            Smoothness::Bounded
        );
    }

    #[test]
    fn moduli_at_reference_offsets() {
        let e2 = find("e2").unwrap().function;
        assert_eq!(e2.exact_modulus(0.5), Some(0.75));
        let tent = find("tent").unwrap().function;
        assert_eq!(tent.exact_modulus(0.1), Some(0.2));
        assert_eq!(tent.exact_modulus(0.5), Some(0.5));
        let sin = find("sin9pi2").unwrap().function;
        assert_eq!(sin.exact_modulus(0.5), Some(2.0));
    }

    #[test]
    fn bernstein_e2_sup_error_is_quarter_n() {
        assert_eq!(bernstein_e2_sup_error(2500), 1e-4);
    }

    #[test]
    fn r_e2_sup_error_small_degrees() {
        // n = 2: the error x(1-2x)/2 on [0, 1/2] peaks at x = 1/4
        assert!((r_e2_sup_error(2) - 1.0 / 16.0).abs() < 1e-12);
        // large n approaches the asymptotic altitude 4/(27 n)
        let n = 100_000;
        let v = r_e2_sup_error(n);
        let asym = 4.0 / (27.0 * n as f64);
        assert!((v - asym).abs() < asym * 1e-2, "{v} vs {asym}");
    }

    #[test]
    fn sup_error_table_scope() {
        let e2 = find("e2").unwrap();
        let table = e2.exact_sup_error.unwrap();
        assert!(table(&OperatorKind::Bernstein, 10).is_some());
        assert!(table(&OperatorKind::R, 10).is_some());
        assert!(table(&OperatorKind::Lupas, 10).is_none());
        let e1 = find("e1").unwrap();
        assert_eq!(e1.exact_sup_error.unwrap()(&OperatorKind::Lupas, 7), Some(0.0));
    }
}
