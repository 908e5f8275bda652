//! Bracketed scalar root finding for the synthesis solvers.
//!
//! The residual functions here are smooth but only defined on part of the
//! scan interval, so the driver takes `f: Fn(f64) -> Option<f64>` and skips
//! infeasible points when scanning for sign changes.

/// A sign-change bracket [a, b] with f(a) and f(b).
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub a: f64,
    pub b: f64,
    pub fa: f64,
    pub fb: f64,
}

/// Scans [lo, hi] on a uniform grid of `steps` intervals and returns every
/// bracket where the residual changes sign between consecutive feasible
/// points.
pub fn scan_brackets<F>(f: &F, lo: f64, hi: f64, steps: usize) -> Vec<Bracket>
where
    F: Fn(f64) -> Option<f64>,
{
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=steps {
        let x = lo + (hi - lo) * (i as f64) / (steps as f64);
        let Some(fx) = f(x).filter(|v| v.is_finite()) else {
            prev = None;
            continue;
        };
        if let Some((px, pfx)) = prev {
            // signum() maps +-0.0 to +-1.0, so an exact zero at a grid point
            // brackets once rather than twice.
            if pfx.signum() != fx.signum() {
                out.push(Bracket {
                    a: px,
                    b: x,
                    fa: pfx,
                    fb: fx,
                });
            }
        }
        prev = Some((x, fx));
    }
    out
}

/// Bisects a sign-change bracket down to machine-level interval width.
/// Points where `f` turns infeasible inside the bracket are treated by
/// shrinking toward the feasible endpoint.
pub fn bisect<F>(f: &F, bracket: Bracket, max_iter: usize) -> f64
where
    F: Fn(f64) -> Option<f64>,
{
    let (mut a, mut b, mut fa) = (bracket.a, bracket.b, bracket.fa);
    for _ in 0..max_iter {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break; // interval no longer representable
        }
        match f(mid).filter(|v| v.is_finite()) {
            Some(fm) => {
                if fm == 0.0 {
                    return mid;
                }
                if fa.signum() != fm.signum() {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            None => {
                // Infeasible interior point: keep the half adjacent to `a`,
                // whose endpoint is known feasible.
                b = mid;
            }
        }
    }
    0.5 * (a + b)
}

/// Golden-section style refinement of a local minimum of |f| around a grid
/// point, for tangency roots that never change sign.
pub fn refine_abs_minimum<F>(f: &F, lo: f64, hi: f64, iters: usize) -> f64
where
    F: Fn(f64) -> Option<f64>,
{
    let eval = |x: f64| f(x).map(|v| v.abs()).unwrap_or(f64::INFINITY);
    let phi = 0.5 * (3.0 - 5.0f64.sqrt());
    let (mut a, mut b) = (lo, hi);
    let mut x1 = a + phi * (b - a);
    let mut x2 = b - phi * (b - a);
    let (mut f1, mut f2) = (eval(x1), eval(x2));
    for _ in 0..iters {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + phi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - phi * (b - a);
            f2 = eval(x2);
        }
    }
    if f1 < f2 {
        x1
    } else {
        x2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_root() {
        let f = |x: f64| Some(x * x - 2.0);
        let brackets = scan_brackets(&f, 0.0, 3.0, 100);
        assert_eq!(brackets.len(), 1);
        let root = bisect(&f, brackets[0], 200);
        assert!((root - 2.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn skips_infeasible_regions() {
        // Only defined for x >= 1; root at x = 2.
        let f = |x: f64| {
            if x >= 1.0 {
                Some((x - 1.0).sqrt() - 1.0)
            } else {
                None
            }
        };
        let brackets = scan_brackets(&f, -1.0, 4.0, 200);
        assert_eq!(brackets.len(), 1);
        let root = bisect(&f, brackets[0], 200);
        assert!((root - 2.0).abs() < 1e-13);
    }

    #[test]
    fn multiple_roots_found_in_order() {
        let f = |x: f64| Some(x.sin());
        let brackets = scan_brackets(&f, 0.5, 7.0, 400);
        assert_eq!(brackets.len(), 2);
        let r1 = bisect(&f, brackets[0], 200);
        let r2 = bisect(&f, brackets[1], 200);
        assert!((r1 - std::f64::consts::PI).abs() < 1e-13);
        assert!((r2 - std::f64::consts::TAU).abs() < 1e-13);
    }

    #[test]
    fn abs_minimum_refinement_on_tangency() {
        // f(x) = (x - 1)^2 never changes sign; the minimum is the root.
        let f = |x: f64| Some((x - 1.0) * (x - 1.0));
        let x = refine_abs_minimum(&f, 0.0, 2.0, 200);
        assert!((x - 1.0).abs() < 1e-7);
    }
}
