"""Regenerates the reference tables in this directory with SciPy.

Independent of the Rust code: the exact barrier uses a dense grid plus
scipy bounded minimisation, rates use scipy.integrate.quad.
"""
import csv
import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

KB = 8.617333262e-5
H = 4.135667696e-15


def lower(q, lam, dg, v0, v1):
    ea = lam * q * q
    eb = lam * (1 - q) ** 2 + dg
    v = v0 + q * (v1 - v0)
    return 0.5 * (ea + eb) - 0.5 * np.sqrt((ea - eb) ** 2 + 4 * v * v)


def exact_barrier(lam, dg, v0, v1):
    q = np.linspace(-0.5, 1.5, 4001)
    e = lower(q, lam, dg, v0, v1)
    mins = [i for i in range(1, len(q) - 1) if e[i] <= e[i - 1] and e[i] < e[i + 1]]
    maxs = [i for i in range(1, len(q) - 1) if e[i] >= e[i - 1] and e[i] > e[i + 1]]
    f = lambda x: lower(x, lam, dg, v0, v1)
    refine = lambda i, s: minimize_scalar(lambda x: s * f(x), bounds=(q[i - 1], q[i + 1]),
                                          method="bounded", options={"xatol": 1e-13})
    if len(mins) >= 2:
        r = refine(mins[0], 1.0)
        m = [j for j in maxs if mins[0] < j < mins[1]][0]
        t = refine(m, -1.0)
        return -t.fun - r.fun
    r = refine(mins[0], 1.0)
    qs = 0.5 * (1 + dg / lam)
    if r.x < qs:
        return max(0.0, f(qs) - r.fun)
    return 0.0


def fermi(e, t):
    return 0.5 * (1 - np.tanh(e / (2 * KB * t)))


def log10_rate_exact(lam, v0, v1, eta, t=300.0):
    b = 1 / (KB * t)
    g = lambda e: fermi(e, t) * np.exp(-b * exact_barrier(lam, eta - e, v0, v1))
    w = 2 * lam + abs(eta) + 40 * KB * t
    pts = sorted({eta + d for d in np.linspace(-lam, lam, 41)} | {0.0})
    pts = [p for p in pts if -w < p < w]
    val, _ = quad(g, -w, w, points=pts, limit=2000, epsabs=0, epsrel=1e-11)
    return np.log10(val / (b * H))


def main():
    with open("barrier_dg0_const_1.0.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dG0_eV", "Estar_exact_eV"])
        for i in range(33):
            dg = -1.0 + 0.05 * i
            w.writerow([f"{dg:.2f}", f"{exact_barrier(4.0, dg, 1.0, 1.0):.15g}"])
    with open("tafel_const_0.5_exact.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["eta_f_V", "log10k_exact"])
        for i in range(0, 61, 5):
            eta = -1.0 + 0.025 * i
            w.writerow([f"{eta:.3f}", f"{log10_rate_exact(4.0, 0.5, 0.5, eta):.12g}"])


if __name__ == "__main__":
    main()
