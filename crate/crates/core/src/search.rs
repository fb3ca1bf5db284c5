//! Derivative-free minimization of a unimodal function on `(0, upper)`.
//!
//! The search runs in `t = ln x` so one relative tolerance works across
//! parameter scales spanning many decades.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MAX_BRACKET_STEPS: usize = 400;
const MAX_GOLDEN_STEPS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

struct Objective<F> {
    f: F,
    evals: usize,
}

impl<F: FnMut(f64) -> Result<f64>> Objective<F> {
    fn at(&mut self, t: f64) -> Result<f64> {
        self.evals += 1;
        let v = (self.f)(t.exp())?;
        if v.is_nan() {
            return Err(Error::Bracket(format!("objective is NaN at x = {}", t.exp())));
        }
        Ok(v)
    }
}

/// Minimizes `f` over `(0, upper)` (`upper` may be infinite) starting from
/// `x0`, to relative tolerance `tol` on the minimizer.
pub fn minimize_positive<F>(f: F, x0: f64, upper: f64, tol: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }
    if !(x0 > 0.0 && x0 < upper) {
        return Err(Error::Bracket(format!("start {x0} outside (0, {upper})")));
    }
    let mut obj = Objective { f, evals: 0 };
    let (a, b, c, fb) = bracket(&mut obj, x0.ln(), upper)?;
    let (t, v) = golden(&mut obj, a, b, c, fb, tol)?;
    Ok(Minimum {
        x: t.exp(),
        value: v,
        evaluations: obj.evals,
    })
}

/// Returns `a < b < c` with `f(b) <= f(a)` and `f(b) <= f(c)`.
fn bracket<F>(obj: &mut Objective<F>, t0: f64, upper: f64) -> Result<(f64, f64, f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut step = std::f64::consts::LN_2;
    let mut b = t0;
    let mut fb = obj.at(b)?;
    let mut c =
        advance(b, step, upper).ok_or_else(|| Error::Bracket(format!("start {} is at the upper bound", b.exp())))?;
    let mut fc = obj.at(c)?;

    if fc < fb {
        // downhill towards larger x
        loop {
            if obj.evals > MAX_BRACKET_STEPS || c.exp() >= upper {
                return Err(Error::Bracket(format!(
                    "objective keeps decreasing up to x = {}",
                    c.exp()
                )));
            }
            step *= 2.0;
            let next = advance(c, step, upper)
                .ok_or_else(|| Error::Bracket(format!("objective keeps decreasing up to x = {}", c.exp())))?;
            let fnext = obj.at(next)?;
            if fnext >= fc {
                return Ok((b, c, next, fc));
            }
            b = c;
            c = next;
            fc = fnext;
        }
    }

    // downhill (or flat) towards smaller x
    let mut a = b - step;
    let mut fa = obj.at(a)?;
    loop {
        if fa >= fb {
            return Ok((a, b, c, fb));
        }
        if obj.evals > MAX_BRACKET_STEPS || !a.is_finite() {
            return Err(Error::Bracket(format!(
                "objective keeps decreasing down to x = {}",
                a.exp()
            )));
        }
        step *= 2.0;
        c = b;
        b = a;
        fb = fa;
        a = b - step;
        fa = obj.at(a)?;
    }
}

/// Step upward in `t` keeping `exp(t)` finite and strictly below `upper`;
/// `None` once no such step exists.
fn advance(t: f64, step: f64, upper: f64) -> Option<f64> {
    let next = t + step;
    if next.exp() < upper {
        return Some(next);
    }
    // halve the remaining distance in x towards the boundary
    let x = t.exp();
    let half = (x + 0.5 * (upper - x)).ln();
    (half > t && half.exp() < upper).then_some(half)
}

fn golden<F>(obj: &mut Objective<F>, mut a: f64, b: f64, mut c: f64, fb: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    // place the interior pair around b on the larger side
    let (mut x1, mut x2, mut f1, mut f2);
    if c - b > b - a {
        x1 = b;
        f1 = fb;
        x2 = b + (1.0 - INV_PHI) * (c - b);
        f2 = obj.at(x2)?;
    } else {
        x2 = b;
        f2 = fb;
        x1 = b - (1.0 - INV_PHI) * (b - a);
        f1 = obj.at(x1)?;
    }
    let mut steps = 0;
    while (c - a) > tol && steps < MAX_GOLDEN_STEPS {
        steps += 1;
        if f2 < f1 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = INV_PHI * x1 + (1.0 - INV_PHI) * c;
            f2 = obj.at(x2)?;
        } else {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = INV_PHI * x2 + (1.0 - INV_PHI) * a;
            f1 = obj.at(x1)?;
        }
    }
    Ok(if f1 < f2 { (x1, f1) } else { (x2, f2) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_minimum() {
        let m = minimize_positive(|x| Ok((x - 3.0) * (x - 3.0) + 1.0), 1.0, f64::INFINITY, 1e-12).unwrap();
        assert!((m.x - 3.0).abs() < 1e-6);
        assert!((m.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn finds_minimum_below_start() {
        let m = minimize_positive(|x| Ok(x + 1e-6 / x), 1.0, f64::INFINITY, 1e-12).unwrap();
        assert!((m.x - 1e-3).abs() / 1e-3 < 1e-6);
    }

    #[test]
    fn respects_upper_bound() {
        // pole at x = 1
        let m = minimize_positive(|x| Ok(1.0 / (x * (1.0 - x * x))), 0.5, 1.0, 1e-12).unwrap();
        assert!((m.x - 1.0 / 3f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn never_evaluates_at_the_upper_bound() {
        let upper = 0.757_710_957_616_995_4;
        let m = minimize_positive(
            |x| {
                assert!(x < upper, "evaluated at {x}");
                Ok(1.0 / (x * (1.0 - (x / upper).powi(2))))
            },
            0.5 * upper,
            upper,
            1e-12,
        )
        .unwrap();
        assert!((m.x - upper / 3f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn monotone_fails_to_bracket() {
        let err = minimize_positive(|x| Ok(1.0 / x), 1.0, f64::INFINITY, 1e-10).unwrap_err();
        assert!(matches!(err, Error::Bracket(_)));
    }

    #[test]
    fn rejects_bad_tol() {
        assert!(minimize_positive(Ok, 1.0, 2.0, 0.0).is_err());
    }
}
