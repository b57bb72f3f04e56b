//! Reference implementations that share no code with the library: a
//! derivative-root exact barrier, a plain trapezoid rate integral, and the
//! committed SciPy fixtures.

#![allow(dead_code)]

use std::path::PathBuf;

pub const KB: f64 = 8.617333262e-5;
pub const H: f64 = 4.135667696e-15;
pub const HBAR: f64 = 6.582119569e-16;

/// Lower adiabat with linear coupling `v0 + q (v1 - v0)` and its derivative.
fn lower_and_slope(q: f64, lam: f64, dg: f64, v0: f64, v1: f64) -> (f64, f64) {
    let ea = lam * q * q;
    let eb = lam * (1.0 - q) * (1.0 - q) + dg;
    let v = v0 + q * (v1 - v0);
    let d = ea - eb;
    let root = (d * d + 4.0 * v * v).sqrt();
    let dea = 2.0 * lam * q;
    let deb = -2.0 * lam * (1.0 - q);
    let dv = v1 - v0;
    let value = 0.5 * (ea + eb) - 0.5 * root;
    let slope = if root == 0.0 {
        0.5 * (dea + deb)
    } else {
        0.5 * (dea + deb) - (d * (dea - deb) + 4.0 * v * dv) / (2.0 * root)
    };
    (value, slope)
}

pub fn lower(q: f64, lam: f64, dg: f64, v0: f64, v1: f64) -> f64 {
    lower_and_slope(q, lam, dg, v0, v1).0
}

fn slope(q: f64, lam: f64, dg: f64, v0: f64, v1: f64) -> f64 {
    lower_and_slope(q, lam, dg, v0, v1).1
}

/// Stationary points of the lower adiabat on [-0.5, 1.5]: roots of the
/// analytic derivative, located by sign changes on a fine grid and bisection.
/// Returns `(q, is_minimum)` in ascending order.
pub fn stationary_points(lam: f64, dg: f64, v0: f64, v1: f64) -> Vec<(f64, bool)> {
    const N: usize = 20_000;
    let (lo, hi) = (-0.5, 1.5);
    let grid = |i: usize| lo + (hi - lo) * i as f64 / N as f64;
    let mut out = Vec::new();
    let mut prev = slope(grid(0), lam, dg, v0, v1);
    for i in 1..=N {
        let cur = slope(grid(i), lam, dg, v0, v1);
        if prev < 0.0 && cur >= 0.0 || prev > 0.0 && cur <= 0.0 {
            let (mut a, mut b) = (grid(i - 1), grid(i));
            let fa_neg = prev < 0.0;
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m == a || m == b {
                    break;
                }
                if (slope(m, lam, dg, v0, v1) < 0.0) == fa_neg {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push((0.5 * (a + b), fa_neg));
        }
        prev = cur;
    }
    out
}

/// Exact adiabatic barrier with the same well conventions as the library:
/// two wells use the first minimum and the maximum after it; a single
/// reactant-side well is measured to the diabatic crossing; a single
/// product-side well is activationless.
pub fn exact_barrier(lam: f64, dg: f64, v0: f64, v1: f64) -> f64 {
    let pts = stationary_points(lam, dg, v0, v1);
    let mins: Vec<f64> = pts.iter().filter(|p| p.1).map(|p| p.0).collect();
    let e = |q: f64| lower(q, lam, dg, v0, v1);
    if mins.len() >= 2 {
        let top = pts
            .iter()
            .find(|p| !p.1 && p.0 > mins[0] && p.0 < mins[1])
            .expect("maximum between wells")
            .0;
        return e(top) - e(mins[0]);
    }
    let qs = 0.5 * (1.0 + dg / lam);
    match mins.first() {
        Some(&qr) if qr < qs => (e(qs) - e(qr)).max(0.0),
        _ => 0.0,
    }
}

pub fn marcus(lam: f64, dg: f64) -> f64 {
    (lam + dg) * (lam + dg) / (4.0 * lam)
}

pub fn fermi(e: f64, t: f64) -> f64 {
    0.5 * (1.0 - (e / (2.0 * KB * t)).tanh())
}

/// `ρ A ∫ n(ε) exp(−βE*(η−ε)) dε` by the composite trapezoid rule with
/// `n` intervals over `[−w, w]`.
pub fn trapezoid_rate<F: Fn(f64) -> f64>(
    barrier: F,
    prefactor: f64,
    rho: f64,
    eta: f64,
    t: f64,
    w: f64,
    n: usize,
) -> f64 {
    let b = 1.0 / (KB * t);
    let h = 2.0 * w / n as f64;
    let f = |e: f64| fermi(e, t) * (-b * barrier(eta - e)).exp();
    let mut s = 0.5 * (f(-w) + f(w));
    for i in 1..n {
        s += f(-w + h * i as f64);
    }
    rho * prefactor * s * h
}

pub fn adiabatic_prefactor(t: f64) -> f64 {
    KB * t / H
}

pub fn fixture(name: &str) -> Vec<Vec<f64>> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().expect("numeric fixture")).collect())
        .collect()
}
