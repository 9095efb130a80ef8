"""Independent reference values for the unit tests.

Run with `python3 oracles.py > ../unit/oracle_values.hpp`. Everything here is
computed from the defining formulas in 50-digit arithmetic and does not
import the library.
"""
import mpmath as mp

mp.mp.dps = 50
values = {}


def heat_amplitude(n, tau, steps):
    # sin(pi x) is an eigenvector of the lumped P1 Laplacian with eigenvalue
    # (4/h^2) sin^2(pi h / 2); implicit Euler damps it by 1/(1 + tau lambda_h).
    h = mp.mpf(1) / n
    lam = 4 / h**2 * mp.sin(mp.pi * h / 2) ** 2
    return (1 + tau * lam) ** (-steps)


values["kHeatAmplitude64"] = heat_amplitude(64, mp.mpf("0.001"), 100)
values["kHeatAmplitude16"] = heat_amplitude(16, mp.mpf("0.0125"), 8)


def pl(points, left, right):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]

    def f(s):
        s = mp.mpf(s)
        if s <= xs[0]:
            return ys[0] + left * (s - xs[0])
        if s >= xs[-1]:
            return ys[-1] + right * (s - xs[-1])
        for i in range(len(xs) - 1):
            if xs[i] <= s <= xs[i + 1]:
                t = (s - xs[i]) / (xs[i + 1] - xs[i])
                return ys[i] + t * (ys[i + 1] - ys[i])

    return f, xs


def integrate(fn, a, b, kinks):
    pts = sorted({mp.mpf(a), mp.mpf(b), *[mp.mpf(k) for k in kinks if min(a, b) < k < max(a, b)]})
    total = mp.quad(fn, pts)
    return total if b >= a else -total


def deriv(f, s):
    return mp.diff(f, s)


stefan_zeta, stefan_knots = pl([(0, 0), (1, 0)], 1, 1)
ident = lambda s: mp.mpf(s)
plateau_beta, pb_knots = pl([(0, 0), (1, 0)], 1, 1)
plateau_zeta, pz_knots = pl([(0, 0), (2, 0)], 1, 1)


def b_of_beta(beta, zeta, kinks, s):
    # B(beta(s)) = int_0^s zeta(q) beta'(q) dq
    return integrate(lambda q: zeta(q) * mp.diff(beta, q), 0, s, kinks)


def nu(beta, zeta, kinks, s):
    return integrate(lambda q: mp.diff(zeta, q) * mp.diff(beta, q), 0, s, kinks)


for tag, s in [("M2", -2), ("P05", 0.5), ("P3", 3)]:
    values[f"kStefanB_{tag}"] = b_of_beta(ident, stefan_zeta, stefan_knots, mp.mpf(s))
kinks = pb_knots + pz_knots
for tag, s in [("M1", -1), ("P15", 1.5), ("P3", 3)]:
    values[f"kPlateauNu_{tag}"] = nu(plateau_beta, plateau_zeta, kinks, mp.mpf(s))
    values[f"kPlateauB_{tag}"] = b_of_beta(plateau_beta, plateau_zeta, kinks, mp.mpf(s))


def mollified(f, kinks, r, s):
    avg = lambda c: integrate(f, c - r, c + r, kinks) / (2 * r)
    return avg(s) - avg(0)


r = mp.mpf("0.25")
for tag, s in [("M01", "-0.1"), ("P02", "0.2"), ("P1", "1"), ("P11", "1.1"), ("P2", "2")]:
    values[f"kMollifiedStefanZeta_{tag}"] = mollified(stefan_zeta, stefan_knots, r, mp.mpf(s))


def c0(lo, hi, t):
    lo, hi, t = mp.mpf(lo), mp.mpf(hi), mp.mpf(t)
    return 2 / lo * mp.sqrt(hi**2 + 1) * mp.sqrt(t**2 * hi**2 + 1 + t**2)


values["kEnergyConstantUnit"] = c0(1, 1, "0.1")
values["kEnergyConstantHetero"] = c0("0.5", 2, 1)


def dual_modal(n, horizon, steps, g):
    # psi = a_k sin(pi x), w = t sin(pi x); the backward scheme decouples on
    # the eigenvector: [(1-g)/tau + g lam] a_k = (1-g)/tau a_{k+1} - t_k.
    h = mp.mpf(1) / n
    lam = 4 / h**2 * mp.sin(mp.pi * h / 2) ** 2
    tau = mp.mpf(horizon) / steps
    a = [mp.mpf(0)] * (steps + 1)
    for k in range(steps - 1, -1, -1):
        a[k] = ((1 - g) / tau * a[k + 1] - k * tau) / ((1 - g) / tau + g * lam)
    # lumped sum of sin^2 over interior nodes is 1/2
    lhs = sum(tau * mp.mpf(1) / 2 * ((1 - g) * ((a[k + 1] - a[k]) / tau) ** 2 + g * (lam * a[k]) ** 2)
              for k in range(steps))
    return a[0], lhs


a0, lhs = dual_modal(32, "0.1", 20, mp.mpf(1) / 2)
values["kDualAmplitude0"] = a0
values["kDualEnergyLhs"] = lhs

values["kWeakMetricSine"] = mp.mpf(1) / 2 * mp.sqrt(2) / 2


def w1p_gap_sine(n, steps, horizon, p):
    h = mp.mpf(1) / n
    tau = mp.mpf(horizon) / steps
    cell = sum(abs((mp.sin(mp.pi * (c + 1) * h) - mp.sin(mp.pi * c * h)) / h) ** p * h
               for c in range(n))
    return (steps * tau * cell) ** (1 / mp.mpf(p))


values["kW1pGapSine16"] = w1p_gap_sine(16, 4, 1, 2)
values["kW1pGapSine16P3"] = w1p_gap_sine(16, 4, 1, 3)

print("#pragma once")
print()
print("// Generated by tests/oracles/oracles.py; do not edit by hand.")
print()
print("namespace dnstab::oracle {")
print()
for name, value in values.items():
    print(f"inline constexpr double {name} = {mp.nstr(value, 20, min_fixed=-5, max_fixed=5)};")
print()
print("}  // namespace dnstab::oracle")
