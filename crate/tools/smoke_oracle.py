"""Closed-form smoke integrals on [a, inf), cross-checked with mpmath.quadosc.

Prints `id value` pairs (30 significant digits) that the acceptance suite freezes.
"""
from mpmath import mp, mpf, pi, sqrt, e, exp, sin, cos, si, quadosc, inf, nstr

mp.dps = 40

# id, lower limit, integrand, closed form, angular frequency (for quadosc)
CASES = [
    ("fresnel_sin", 0, lambda x: sin(x**2), sqrt(pi / 8), None),
    ("fresnel_cos", 0, lambda x: cos(x**2), sqrt(pi / 8), None),
    ("dirichlet", 0, lambda x: sin(x) / x if x else mpf(1), pi / 2, 1),
    ("dirichlet_2x", 0, lambda x: sin(2 * x) / x if x else mpf(2), pi / 2, 2),
    ("sinc_squared", 0, lambda x: (sin(x) / x) ** 2 if x else mpf(1), pi / 2, 2),
    ("one_minus_cos", 0, lambda x: (1 - cos(x)) / x**2 if x else mpf(0.5), pi / 2, 1),
    ("dirichlet_tail", 1, lambda x: sin(x) / x, pi / 2 - si(1), 1),
    ("damped_cos_0.1_1", 0, lambda x: exp(-x / 10) * cos(x), mpf("0.1") / (mpf("0.01") + 1), 1),
    ("damped_cos_0.5_2", 0, lambda x: exp(-x / 2) * cos(2 * x), mpf("0.5") / (mpf("0.25") + 4), 2),
    ("damped_cos_1_3", 0, lambda x: exp(-x) * cos(3 * x), mpf(1) / 10, 3),
    ("damped_cos_0.05_1", 0, lambda x: exp(-x / 20) * cos(x), mpf("0.05") / (mpf("0.0025") + 1), 1),
    ("damped_cos_0.2_5", 0, lambda x: exp(-x / 5) * cos(5 * x), mpf("0.2") / (mpf("0.04") + 25), 5),
    ("damped_sin_0.1_1", 0, lambda x: exp(-x / 10) * sin(x), 1 / (mpf("0.01") + 1), 1),
    ("damped_sin_0.3_2", 0, lambda x: exp(-3 * x / 10) * sin(2 * x), 2 / (mpf("0.09") + 4), 2),
    ("damped_sin_1_1", 0, lambda x: exp(-x) * sin(x), mpf(1) / 2, 1),
    ("cos_lorentzian", 0, lambda x: cos(x) / (1 + x**2), pi / (2 * e), 1),
    ("x_sin_lorentzian", 0, lambda x: x * sin(x) / (1 + x**2), pi / (2 * e), 1),
    ("sin_over_x_lorentzian", 0, lambda x: sin(x) / (x * (1 + x**2)) if x else mpf(1), pi / 2 * (1 - 1 / e), 1),
    ("gaussian_cos", 0, lambda x: exp(-x**2) * cos(2 * x), sqrt(pi) / 2 * exp(-1), None),
]

for cid, a, f, closed, omega in CASES:
    if omega is None:
        # chirps and fast decays: split at the zeros of x^2 = k*pi, or plain quad
        if cid.startswith("fresnel"):
            num = quadosc(f, [a, inf], zeros=lambda n: sqrt(n * pi))
        else:
            num = mp.quad(f, [a, inf])
    elif cid in ("sinc_squared", "one_minus_cos"):
        # positive, non-alternating pieces: sum whole periods with nsum extrapolation
        period = 2 * pi
        num = mp.nsum(lambda n: mp.quad(f, [a + n * period, a + (n + 1) * period]), [0, inf])
    else:
        num = quadosc(f, [a, inf], omega=omega)
    rel = abs(num - closed) / abs(closed)
    assert rel < mpf(10) ** -15, (cid, num, closed, rel)
    print(cid, nstr(closed, 30))
