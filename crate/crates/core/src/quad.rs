//! Adaptive Simpson quadrature over finite intervals.
//!
//! Interval error is estimated from the coarse/fine Simpson pair and the
//! Richardson-extrapolated value is accumulated, so the reported
//! `error_estimate` bounds the difference between the two refinement levels
//! plus a roundoff floor.

use crate::error::{Error, Result};

/// Integral value with its accumulated error estimate and leaf count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: u64,
}

const MAX_DEPTH: u32 = 52;
const MAX_EVALS: u64 = 1 << 22;

struct Segment {
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    coarse: f64,
    tol: f64,
    depth: u32,
}

fn simpson(width: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    width / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The returned value satisfies `|value - true integral| <= max(tol,
/// error_estimate)` for integrands smooth enough for Simpson refinement to
/// converge. Fails with `ConvergenceFailure` when the subdivision budget is
/// exhausted while the accumulated error estimate still exceeds `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(Error::InvalidParameter(format!(
            "integration bounds must be finite with a < b, got [{a}, {b}]"
        )));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be positive"
        )));
    }

    let mut evals: u64 = 0;
    let eval = |x: f64, evals: &mut u64| -> Result<f64> {
        *evals += 1;
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::InvalidParameter(format!(
                "integrand is not finite at x = {x}"
            )))
        }
    };

    let m = 0.5 * (a + b);
    let fa = eval(a, &mut evals)?;
    let fm = eval(m, &mut evals)?;
    let fb = eval(b, &mut evals)?;

    let mut stack = vec![Segment {
        a,
        fa,
        m,
        fm,
        b,
        fb,
        coarse: simpson(b - a, fa, fm, fb),
        tol,
        depth: 0,
    }];

    let mut value = 0.0;
    let mut error_estimate = 0.0;
    let mut leaves: u64 = 0;
    let mut bottomed = false;

    while let Some(seg) = stack.pop() {
        if evals > MAX_EVALS {
            return Err(Error::ConvergenceFailure {
                error_estimate: f64::INFINITY,
                tolerance: tol,
                subdivisions: leaves,
            });
        }
        let lm = 0.5 * (seg.a + seg.m);
        let rm = 0.5 * (seg.m + seg.b);
        let flm = eval(lm, &mut evals)?;
        let frm = eval(rm, &mut evals)?;
        let left = simpson(seg.m - seg.a, seg.fa, flm, seg.fm);
        let right = simpson(seg.b - seg.m, seg.fm, frm, seg.fb);
        let fine = left + right;
        let diff = fine - seg.coarse;

        if diff.abs() <= 15.0 * seg.tol || seg.depth >= MAX_DEPTH {
            value += fine + diff / 15.0;
            error_estimate += diff.abs() / 15.0 + f64::EPSILON * fine.abs();
            leaves += 1;
            if seg.depth >= MAX_DEPTH && diff.abs() / 15.0 > seg.tol {
                bottomed = true;
            }
        } else {
            let half_tol = 0.5 * seg.tol;
            stack.push(Segment {
                a: seg.m,
                fa: seg.fm,
                m: rm,
                fm: frm,
                b: seg.b,
                fb: seg.fb,
                coarse: right,
                tol: half_tol,
                depth: seg.depth + 1,
            });
            stack.push(Segment {
                a: seg.a,
                fa: seg.fa,
                m: lm,
                fm: flm,
                b: seg.m,
                fb: seg.fm,
                coarse: left,
                tol: half_tol,
                depth: seg.depth + 1,
            });
        }
    }

    if bottomed && error_estimate > tol {
        return Err(Error::ConvergenceFailure {
            error_estimate,
            tolerance: tol,
            subdivisions: leaves,
        });
    }

    Ok(QuadratureResult {
        value,
        error_estimate,
        subdivisions: leaves,
    })
}
