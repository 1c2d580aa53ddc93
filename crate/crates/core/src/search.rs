//! One-dimensional maximization and adaptive quadrature used by the
//! pricing, ex-ante and welfare modules.
//!
//! Objectives are always parametrized over the quantile interval (0, 1],
//! which is compact even when the underlying price support is not.

const SCAN_POINTS: usize = 2048;
const GOLDEN_WIDTH: f64 = 1e-12;
const POLISH_STEP: f64 = 1e-6;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes `f` over `(0, hi]` and returns `(argmax, max)`.
///
/// A coarse scan brackets the global maximum, golden-section search
/// narrows the bracket to width 1e-12, and a single parabolic fit
/// through a wide stencil polishes the location.  The polish step is
/// needed because value comparisons near a smooth flat maximum drown in
/// rounding noise, which limits golden section to roughly sqrt(eps)
/// accuracy in the argument; the fit recovers the location to about
/// 1e-9.  The stencil width balances rounding noise (pushing it wider)
/// against the cubic term of the objective (pushing it narrower).  The
/// guards skip the fit at boundary optima and reject it at kinks, where
/// the fitted vertex would move off the true maximizer by a
/// value-visible amount.  A final check against the right endpoint
/// keeps an optimum that sits exactly on the boundary from being
/// reported a bracket-width inside it, which matters when the objective
/// is also stationary there.
pub(crate) fn maximize<F: Fn(f64) -> f64>(f: F, hi: f64) -> (f64, f64) {
    debug_assert!(hi > 0.0 && hi.is_finite());
    let grid = |i: usize| hi * i as f64 / SCAN_POINTS as f64;
    let mut best_i = SCAN_POINTS;
    let mut best_v = f64::NEG_INFINITY;
    for i in 1..=SCAN_POINTS {
        let v = f(grid(i));
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = if best_i > 1 { grid(best_i - 1) } else { hi * 1e-15 };
    let up = grid((best_i + 1).min(SCAN_POINTS));
    let (mut x, mut fx) = golden(&f, lo, up);
    if best_v > fx {
        x = grid(best_i);
        fx = best_v;
    }
    let h = (hi * POLISH_STEP).min(0.5 * (hi - x)).min(0.5 * x);
    if h > 0.0 {
        let fm = f(x - h);
        let f0 = f(x);
        let fp = f(x + h);
        let denom = fm - 2.0 * f0 + fp;
        let scale = f0.abs().max(1.0);
        if denom < -1e-13 * scale {
            let cand = x + 0.5 * h * (fm - fp) / denom;
            if cand > 0.0 && cand <= hi && (cand - x).abs() <= h {
                let fc = f(cand);
                if fc >= f0 - 1e-13 * scale {
                    x = cand;
                    fx = fc;
                }
            }
        }
    }
    let fhi = f(hi);
    if fhi >= fx {
        x = hi;
        fx = fhi;
    }
    (x, fx)
}

fn golden<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > GOLDEN_WIDTH {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Integrates `f` over `[a, b]` by adaptive Simpson quadrature with
/// absolute tolerance `tol`.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}
