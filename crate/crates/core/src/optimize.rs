//! Bounded one-dimensional minimization by golden-section search with
//! successive parabolic interpolation (Brent's `localmin`).

/// Termination settings; the bracket stops shrinking once it is within
/// `rel_tol * |x| + abs_tol` of the current best point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrentOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for BrentOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: f64::EPSILON,
            max_iter: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
    pub evaluations: usize,
}

const GOLDEN: f64 = 0.381_966_011_250_105_1; // (3 - sqrt 5) / 2

/// Minimize `f` on `[lo, hi]`. Interior search only: the endpoints themselves
/// are never evaluated (see [`maximize_with_endpoints`]).
pub fn minimize<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, opts: &BrentOptions) -> Minimum {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    if a == b {
        let fx = f(a);
        return Minimum {
            x: a,
            fx,
            evaluations: 1,
        };
    }
    let tol3 = opts.abs_tol / 3.0;
    let mut x = a + GOLDEN * (b - a);
    let (mut v, mut w) = (x, x);
    let mut fx = f(x);
    let (mut fv, mut fw) = (fx, fx);
    let (mut d, mut e) = (0.0f64, 0.0f64);
    let mut evaluations = 1;

    for _ in 0..opts.max_iter {
        let xm = 0.5 * (a + b);
        let tol1 = opts.rel_tol * x.abs() + tol3;
        let t2 = 2.0 * tol1;
        if (x - xm).abs() <= t2 - 0.5 * (b - a) {
            break;
        }

        let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);
        if e.abs() > tol1 {
            r = (x - w) * (fx - fv);
            q = (x - v) * (fx - fw);
            p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            r = e;
            e = d;
        }

        if p.abs() >= (0.5 * q * r).abs() || p <= q * (a - x) || p >= q * (b - x) {
            e = if x < xm { b - x } else { a - x };
            d = GOLDEN * e;
        } else {
            d = p / q;
            let u = x + d;
            if u - a < t2 || b - u < t2 {
                d = if x < xm { tol1 } else { -tol1 };
            }
        }

        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);
        evaluations += 1;

        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }

    Minimum { x, fx, evaluations }
}

/// Maximize `f` on `[lo, hi]`: Brent on the interior, then compare against
/// both endpoints and any extra `candidates` inside the interval, so a
/// boundary maximum (e.g. a variance of exactly zero) is returned exactly.
pub fn maximize_with_endpoints<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    candidates: &[f64],
    opts: &BrentOptions,
) -> Minimum {
    let inner = minimize(|x| -f(x), lo, hi, opts);
    let mut best = Minimum {
        x: inner.x,
        fx: -inner.fx,
        evaluations: inner.evaluations,
    };
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    for &x in [lo, hi].iter().chain(candidates) {
        if !(x >= lo && x <= hi) {
            continue;
        }
        let fx = f(x);
        best.evaluations += 1;
        if fx > best.fx {
            best.x = x;
            best.fx = fx;
        }
    }
    best
}
