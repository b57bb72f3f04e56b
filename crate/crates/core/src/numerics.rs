//! One-dimensional numerical building blocks: grid scans for extremum
//! brackets, Brent minimisation, adaptive Simpson quadrature and `erfc`.
//!
//! Everything here is a pure function of its arguments.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Default grid size used to scan reaction-coordinate windows.
pub const DEFAULT_SCAN_POINTS: usize = 2001;
/// Default abscissa tolerance for extremum refinement.
pub const DEFAULT_TOL_X: f64 = 1e-10;
/// Iteration cap for [`minimize_1d`] / [`maximize_1d`].
pub const DEFAULT_MAX_ITER: usize = 200;
/// Default relative tolerance for [`integrate`].
pub const DEFAULT_REL_TOL: f64 = 1e-9;
/// Default absolute tolerance for [`integrate`].
pub const DEFAULT_ABS_TOL: f64 = 1e-300;
/// Maximum bisection depth of a quadrature panel.
pub const DEFAULT_MAX_DEPTH: u32 = 60;

/// Three abscissae enclosing an extremum of a sampled function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub mid: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, mid: f64, hi: f64) -> Result<Self> {
        if !(lo < mid && mid < hi) {
            return Err(Error::InvalidInput(format!(
                "bracket requires lo < mid < hi, got ({lo}, {mid}, {hi})"
            )));
        }
        Ok(Self { lo, mid, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremumResult {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn grid_point(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if i == n - 1 {
        hi
    } else {
        lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
    }
}

/// Samples `f` on `n_grid` uniform points of `[lo, hi]` and returns a bracket
/// for every interior local extremum of the samples, in ascending order.
///
/// A run of exactly equal samples bounded on both sides by larger (smaller)
/// values counts as one minimum (maximum); its middle sample becomes `mid`.
pub fn scan_brackets<F>(f: F, lo: f64, hi: f64, n_grid: usize) -> Result<Vec<(Bracket, ExtremumKind)>>
where
    F: Fn(f64) -> f64,
{
    if n_grid < 3 {
        return Err(Error::InvalidInput(format!("n_grid must be >= 3, got {n_grid}")));
    }
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!(
            "scan window requires lo < hi, got [{lo}, {hi}]"
        )));
    }
    let xs: Vec<f64> = (0..n_grid).map(|i| grid_point(lo, hi, i, n_grid)).collect();
    let mut ys = Vec::with_capacity(n_grid);
    for &x in &xs {
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::NonFinite { x, value: y });
        }
        ys.push(y);
    }

    let mut out = Vec::new();
    let mut i = 1;
    while i < n_grid - 1 {
        let mut j = i;
        while j + 1 < n_grid && ys[j + 1] == ys[i] {
            j += 1;
        }
        if j >= n_grid - 1 {
            break;
        }
        let (left, v, right) = (ys[i - 1], ys[i], ys[j + 1]);
        let kind = if v < left && v < right {
            Some(ExtremumKind::Min)
        } else if v > left && v > right {
            Some(ExtremumKind::Max)
        } else {
            None
        };
        if let Some(kind) = kind {
            let bracket = Bracket {
                lo: xs[i - 1],
                mid: xs[(i + j) / 2],
                hi: xs[j + 1],
            };
            out.push((bracket, kind));
        }
        i = j + 1;
    }
    Ok(out)
}

/// Brent's method (golden section with parabolic interpolation) on a
/// minimum bracket. Stops once the enclosing interval is no wider than
/// `tol_x`; hitting [`DEFAULT_MAX_ITER`] returns `converged = false`.
pub fn minimize_1d<F>(f: F, bracket: Bracket, tol_x: f64) -> ExtremumResult
where
    F: Fn(f64) -> f64,
{
    minimize_1d_capped(f, bracket, tol_x, DEFAULT_MAX_ITER)
}

pub fn minimize_1d_capped<F>(f: F, bracket: Bracket, tol_x: f64, max_iter: usize) -> ExtremumResult
where
    F: Fn(f64) -> f64,
{
    const CGOLD: f64 = 0.381_966_011_250_105_1;

    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut x = bracket.mid;
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    // Interval width at exit is at most 4 * tol1.
    let tol1 = 0.25 * tol_x;
    let tol2 = 2.0 * tol1;

    for iter in 0..max_iter {
        if !fx.is_finite() {
            return ExtremumResult {
                x,
                fx,
                iterations: iter,
                converged: false,
            };
        }
        let xm = 0.5 * (a + b);
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            return ExtremumResult {
                x,
                fx,
                iterations: iter,
                converged: true,
            };
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
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
    ExtremumResult {
        x,
        fx,
        iterations: max_iter,
        converged: false,
    }
}

/// Maximum of `f` on a maximum bracket; literally [`minimize_1d`] applied to `-f`.
pub fn maximize_1d<F>(f: F, bracket: Bracket, tol_x: f64) -> ExtremumResult
where
    F: Fn(f64) -> f64,
{
    let r = minimize_1d(|x| -f(x), bracket, tol_x);
    ExtremumResult { fx: -r.fx, ..r }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fl: f64,
    fm: f64,
    fr: f64,
    fb: f64,
    depth: u32,
}

impl Panel {
    fn halves(&self) -> (f64, f64, f64) {
        let h = self.b - self.a;
        let whole = h / 6.0 * (self.fa + 4.0 * self.fm + self.fb);
        let left = h / 12.0 * (self.fa + 4.0 * self.fl + self.fm);
        let right = h / 12.0 * (self.fm + 4.0 * self.fr + self.fb);
        (whole, left, right)
    }

    fn error(&self) -> f64 {
        let (whole, left, right) = self.halves();
        (left + right - whole).abs() / 15.0
    }

    /// Richardson-extrapolated value (exact for quintics).
    fn value(&self) -> f64 {
        let (whole, left, right) = self.halves();
        let fine = left + right;
        fine + (fine - whole) / 15.0
    }
}

struct Queued {
    err: f64,
    panel: Panel,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.panel.a.total_cmp(&self.panel.a))
    }
}

fn eval_checked<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFinite { x, value: y })
    }
}

fn make_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, depth: u32) -> Result<Panel> {
    let m = 0.5 * (a + b);
    let fl = eval_checked(f, 0.5 * (a + m))?;
    let fr = eval_checked(f, 0.5 * (m + b))?;
    Ok(Panel {
        a,
        b,
        fa,
        fl,
        fm,
        fr,
        fb,
        depth,
    })
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// Panels are refined globally, worst error estimate first, until the summed
/// estimate is at most `max(rel_tol * |result|, abs_tol)`. A panel that would
/// need more than [`DEFAULT_MAX_DEPTH`] bisections aborts with
/// [`Error::Accuracy`] carrying the best estimate.
pub fn integrate<F>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_with_depth(f, a, b, rel_tol, abs_tol, DEFAULT_MAX_DEPTH)
}

pub fn integrate_with_depth<F>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64, max_depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a < b) {
        return Err(Error::InvalidInput(format!(
            "integration requires a < b, got [{a}, {b}]"
        )));
    }
    if !(rel_tol > 0.0 && abs_tol > 0.0) {
        return Err(Error::InvalidInput("quadrature tolerances must be positive".into()));
    }
    const INITIAL_PANELS: usize = 64;
    const MAX_PANELS: usize = 4_000_000;

    let nodes: Vec<f64> = (0..=2 * INITIAL_PANELS)
        .map(|i| grid_point(a, b, i, 2 * INITIAL_PANELS + 1))
        .collect();
    let mut values = Vec::with_capacity(nodes.len());
    for &x in &nodes {
        values.push(eval_checked(&f, x)?);
    }
    let mut heap = BinaryHeap::with_capacity(4 * INITIAL_PANELS);
    let (mut total, mut total_err) = (0.0, 0.0);
    for k in 0..INITIAL_PANELS {
        let (i0, i1, i2) = (2 * k, 2 * k + 1, 2 * k + 2);
        let panel = make_panel(&f, nodes[i0], nodes[i2], values[i0], values[i1], values[i2], 0)?;
        let err = panel.error();
        total += panel.value();
        total_err += err;
        heap.push(Queued { err, panel });
    }

    loop {
        if total_err <= (rel_tol * total.abs()).max(abs_tol) {
            // Recompute from scratch so running-sum drift cannot end the loop early.
            let (t, e) = heap
                .iter()
                .fold((0.0, 0.0), |(t, e), q| (t + q.panel.value(), e + q.err));
            total = t;
            total_err = e;
            if total_err <= (rel_tol * total.abs()).max(abs_tol) {
                break;
            }
        }
        let Queued { err, panel } = heap.pop().expect("heap is never empty");
        if panel.depth >= max_depth || heap.len() >= MAX_PANELS {
            return Err(Error::Accuracy {
                estimate: total,
                error: total_err,
            });
        }
        let m = 0.5 * (panel.a + panel.b);
        let left = make_panel(&f, panel.a, m, panel.fa, panel.fl, panel.fm, panel.depth + 1)?;
        let right = make_panel(&f, m, panel.b, panel.fm, panel.fr, panel.fb, panel.depth + 1)?;
        let (el, er) = (left.error(), right.error());
        total += left.value() + right.value() - panel.value();
        total_err += el + er - err;
        heap.push(Queued { err: el, panel: left });
        heap.push(Queued { err: er, panel: right });
    }

    let mut panels: Vec<Panel> = heap.into_iter().map(|q| q.panel).collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(panels.iter().map(Panel::value).sum())
}

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Complementary error function.
///
/// Maclaurin series of `erf` for `|x| < 1`, a Lentz-evaluated continued
/// fraction above that, and the reflection `erfc(-x) = 2 - erfc(x)`.
/// Relative error is below 1e-14 on `[-10, 10]` (checked against 40-digit
/// reference values); results underflow to 0 past x ≈ 27.3.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 1.0 {
        return 1.0 - erf_series(x);
    }
    if x > 27.3 {
        return 0.0;
    }
    (-x * x).exp() / (std::f64::consts::PI.sqrt() * erfc_continued_fraction(x))
}

/// Error function, `1 - erfc(x)`.
pub fn erf(x: f64) -> f64 {
    if x.abs() < 1.0 {
        erf_series(x)
    } else {
        1.0 - erfc(x)
    }
}

fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..200 {
        term *= -x2 / n as f64;
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if contrib.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

/// Denominator `x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))` of the Laplace
/// continued fraction for `erfc`.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..5000 {
        let ak = 0.5 * k as f64;
        d = x + ak * d;
        if d == 0.0 {
            d = TINY;
        }
        d = 1.0 / d;
        c = x + ak / c;
        if c == 0.0 {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f
}
