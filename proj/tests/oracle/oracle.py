#!/usr/bin/env python3
"""Reference values for the unit tests, computed with mpmath/scipy.

Writes tests/fixtures/oracle.json. Run from the repository root:
    python3 tests/oracle/oracle.py
"""
import json
import os

import mpmath as mp
import numpy as np
from scipy import integrate

mp.mp.dps = 30


def bump(s):
    s = mp.mpf(s)
    if abs(s) >= 1:
        return mp.mpf(0)
    return mp.e ** (1 - 1 / (1 - s * s))


def bump_f(s):
    return float(np.exp(1 - 1 / (1 - s * s))) if abs(s) < 1 else 0.0


def ft_bump(center, r, w):
    """int e^{-i w x} bump((x - center)/r) dx"""
    f = lambda x: mp.expj(-w * x) * bump((x - center) / r)
    pts = mp.linspace(center - r, center + r, 33)
    return complex(mp.quad(f, pts))


def cx(z):
    return [float(mp.re(z)), float(mp.im(z))]


out = {}

# 1-D bump transforms
out["bump_ft"] = [
    {"center": c, "radius": r, "omega": w, "value": cx(ft_bump(c, r, w))}
    for (c, r, w) in [(0.0, 2.0, 0.0), (0.0, 2.0, 0.7), (0.0, 2.0, 4.0), (3.0, 2.0, 4.0), (0.0, 1.0, 16.0)]
]

# classical local transforms chi^u(xi), chi a bump of radius 2 at x
classical = []


def bv_minus(xi, x0=0.0, r=2.0):
    # <1/(x - x0 - i0), e^{-i xi x} chi>; chi centered at x0
    # = -2i e^{-i xi x0} int_0^r sin(xi t) chi(t)/t dt + i pi chi(0) e^{-i xi x0}
    pv = mp.quad(lambda t: mp.sin(xi * t) * bump(t / r) / t, mp.linspace(0, r, 33))
    return mp.expj(-xi * x0) * (-2j * pv + 1j * mp.pi)


for lam in [0.25, 0.0625, 0.015625]:
    for k in [1.0, -1.0]:
        xi = k / lam
        classical.append({"key": "bv:-i0@0", "x": 0.0, "lambda": lam, "k": k, "value": cx(bv_minus(xi))})
        hv = mp.quad(lambda t: mp.expj(-xi * t) * bump((t - 3.0) / 2.0), mp.linspace(3.0, 5.0, 33))
        classical.append({"key": "heaviside@3", "x": 3.0, "lambda": lam, "k": k, "value": cx(hv)})
        g = mp.quad(lambda t: mp.expj(-xi * t) * bump(t / 2.0) * mp.e ** (-t * t), mp.linspace(-2, 2, 65))
        classical.append({"key": "smooth:gauss", "x": 0.0, "lambda": lam, "k": k, "value": cx(g)})
        # delta'(z): <delta', e^{-i xi z} chi> = -(d/dz)(e^{-i xi z} chi)(0) = i xi chi(0)
        classical.append({"key": "delta'@0", "x": 0.0, "lambda": lam, "k": k, "value": cx(1j * xi)})
out["classical"] = classical

# windowed scaled transform for delta@0:
# I(lambda, k) = int e^{-i k y/lambda} h(y) f_lambda(-y) dy, h = bump radius 2, f_lambda(z) = g(z/lambda)
# g = bump radius 1 (even, so the sign of the shift is immaterial)
scaled = []
for lam in [0.25, 0.125, 0.03125]:
    for k in [1.0, 2.0]:
        v = mp.quad(lambda y: mp.expj(-k * y / lam) * bump(y / 2.0) * bump(y / lam), mp.linspace(-lam, lam, 33))
        scaled.append({"lambda": lam, "k": k, "value": cx(v)})
out["delta_scaled"] = scaled

# two-point kernel exp(-(z1 - z2)^2), adapted cutoff chi(z) = B(z1 - z2 - (x1 - x2)) b(z2 - x2),
# radii 2 and 2; brute-force double integral over (z1, z2)
kernel = []
x1, x2 = 0.5, -0.3
for lam, k in [(0.5, (1.0, -1.0)), (0.25, (1.0, 0.0)), (0.25, (-0.7071067811865476, 0.7071067811865476))]:
    w1, w2 = k[0] / lam, k[1] / lam

    def chi(z1, z2):
        return bump_f((z1 - z2 - (x1 - x2)) / 2.0) * bump_f((z2 - x2) / 2.0) * np.exp(-((z1 - z2) ** 2))

    def part(fn):
        return integrate.dblquad(
            lambda z1, z2: fn(w1 * z1 + w2 * z2) * chi(z1, z2),
            x2 - 2.0, x2 + 2.0,
            lambda z2: z2 + (x1 - x2) - 2.0, lambda z2: z2 + (x1 - x2) + 2.0,
            epsabs=1e-13, epsrel=1e-12)[0]

    re = part(np.cos)
    im = -part(np.sin)
    kernel.append({"key": "kernel:smooth", "x": [x1, x2], "lambda": lam, "k": list(k), "value": [re, im]})
out["kernel_classical"] = kernel

# log-log least squares on synthetic decay data
lams = [0.25 * 2 ** (-j / 2) for j in range(12)]
rng = np.random.default_rng(3)
mags = [2.0 * l ** 3.3 * (1 + 0.01 * rng.standard_normal()) for l in lams]
half = lams[6:], mags[6:]
slope, icpt = np.polyfit(np.log(half[0]), np.log(half[1]), 1)
out["decay_fit"] = {"lambdas": lams, "magnitudes": mags, "slope": float(slope), "intercept": float(icpt)}

# Heaviside{0} seen from x = 3 with a radius-1 cutoff: smooth on supp chi
far = []
for lam in [2.0 ** -6, 2.0 ** -7, 2.0 ** -8]:
    v = mp.quad(lambda t: mp.expj(-t / lam) * bump(t - 3.0), mp.linspace(2.0, 4.0, 65))
    far.append({"lambda": lam, "k": 1.0, "value": cx(v)})
out["heaviside_far"] = far


def gl(a, b, panels, n):
    x, w = np.polynomial.legendre.leggauss(n)
    edges = np.linspace(a, b, panels + 1)
    c = 0.5 * (edges[1:] + edges[:-1])[:, None]
    h = 0.5 * (edges[1:] - edges[:-1])[:, None]
    return (c + h * x).ravel(), (h * w).ravel()


# smooth profile exp(-z^2), window bump radius 2, family bump radius 1:
# I = int e^{-i k y/lambda} h(y) int exp(-z^2) g((z - y)/lambda) dz dy
smooth = []
ts, tw = gl(-1.0, 1.0, 8, 32)
gt = np.array([bump_f(t) for t in ts])
for lam in [2.0 ** -3, 2.0 ** -5, 2.0 ** -7]:
    k = 1.0
    ys, yw = gl(-2.0, 2.0, 4096, 16)
    hy = np.array([bump_f(y / 2.0) for y in ys])
    inner = lam * (np.exp(-((ys[:, None] + lam * ts[None, :]) ** 2)) * gt[None, :]) @ tw
    v = np.sum(yw * hy * inner * np.exp(-1j * k * ys / lam))
    smooth.append({"lambda": lam, "k": k, "value": [float(v.real), float(v.imag)]})
out["smooth_scaled"] = smooth

path = os.path.join(os.path.dirname(__file__), "..", "fixtures", "oracle.json")
with open(path, "w") as f:
    json.dump(out, f, indent=1)
    f.write("\n")
print("wrote", os.path.normpath(path))
