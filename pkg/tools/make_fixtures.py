"""Regenerate the high-precision reference values frozen in tests/data.

Run once with mpmath installed; the package itself never imports mpmath.

    python tools/make_fixtures.py > tests/data/reference.json
"""

import json

import mpmath as mp

mp.mp.dps = 50

U_CASES = [
    (-0.3, 1, 0.5),
    (0.5, 1, 1.0),
    (1.7, 2, 3.0),
    (-2.5, 3, 0.1),
    (-0.999999, 1, 2.0),
    (-3.0 + 1e-9, 4, 1.2),
    (-4.0 - 1e-7, 2, 0.8),
    (-1.3, 5, 0.01),
    (-5.75, 1, 7.5),
    (-7.3, 5, 20.0),
    (-2.2, 9, 13.0),
    (-15.2, 9, 60.0),
    (-12.6, 1, 30.0),
    (-0.07, 1, 5e-7),
    (-9.5, 7, 11.0),
    (3.2, 4, 45.0),
]

M_CASES = [
    (0.3, 1, 2.0),
    (-2.7, 3, 4.5),
    (1.5, 2, 10.0),
    (-0.5, 1, 0.25),
]

# (l, r0, count) for roots of U(-m, l+1, r0^2/2)
ROOT_CASES = [
    (0, 0.5, 3),
    (0, 2.0, 3),
    (1, 1.0, 3),
    (3, 2.5, 2),
    (6, 4.0, 2),
    (0, 1e-3, 1),
]


def connection_limit(a, z, ks=(8, 9, 10, 11)):
    """U(a, 1, z) as the b -> 1 limit of the non-integer-b connection formula."""
    a, z = mp.mpf(a), mp.mpf(z)

    def u_nonint(b):
        return mp.gamma(1 - b) / mp.gamma(a - b + 1) * mp.hyp1f1(a, b, z) + mp.gamma(
            b - 1
        ) / mp.gamma(a) * z ** (1 - b) * mp.hyp1f1(a - b + 1, 2 - b, z)

    vals = [u_nonint(1 + mp.mpf(10) ** (-k)) for k in ks]
    # Error is linear in eps = 10^-k: one Richardson step per adjacent pair.
    rich = [(10 * vals[i + 1] - vals[i]) / 9 for i in range(len(vals) - 1)]
    return rich[-1], abs(rich[-1] - rich[-2])


def roots(l, r0, count):
    z = mp.mpf(r0) ** 2 / 2
    out = []
    m = mp.mpf(0)
    step = mp.mpf("0.005")
    f_prev = mp.hyperu(-m, l + 1, z)
    while len(out) < count:
        m2 = m + step
        f = mp.hyperu(-m2, l + 1, z)
        if f_prev * f < 0:
            out.append(mp.findroot(lambda x: mp.hyperu(-x, l + 1, z), (m, m2), solver="anderson"))
        m, f_prev = m2, f
    return out


def laguerre_exact(N, alpha, z):
    z = mp.mpf(z)
    return mp.fsum(
        (-1) ** k * mp.binomial(N + alpha, N - k) * z**k / mp.factorial(k) for k in range(N + 1)
    )


def continuity_cases():
    """U at the float nearest -N +- 1e-7 next to the exact U(-N) = (-1)^N N! L_N."""
    out = []
    for N in range(9):
        for l in range(9):
            for z in (0.25, 1.0, 4.0):
                u0 = (-1) ** N * mp.factorial(N) * laguerre_exact(N, l, z)
                for s in (1, -1):
                    a = -N + s * 1e-7
                    u = mp.hyperu(mp.mpf(a), l + 1, z, maxterms=10**5)
                    out.append({
                        "N": N, "l": l, "z": z, "a": a,
                        "u_shift": mp.nstr(u, 20), "u_int": mp.nstr(u0, 20),
                    })
    return out


def main():
    lim, lim_err = connection_limit(-0.3, 0.5)
    doc = {
        "kummer_u": [
            {"a": a, "b": b, "z": z, "value": mp.nstr(mp.hyperu(a, b, z), 20)} for a, b, z in U_CASES
        ],
        "kummer_m": [
            {"a": a, "b": b, "z": z, "value": mp.nstr(mp.hyp1f1(a, b, z), 20)} for a, b, z in M_CASES
        ],
        "connection_limit": {
            "a": -0.3, "b": 1, "z": 0.5, "value": mp.nstr(lim, 20), "richardson_gap": mp.nstr(lim_err, 3),
        },
        "continuity": continuity_cases(),
        "roots": [
            {"l": l, "r0": r0, "m": [mp.nstr(x, 20) for x in roots(l, r0, c)]} for l, r0, c in ROOT_CASES
        ],
    }
    print(json.dumps(doc, indent=1))


if __name__ == "__main__":
    main()
