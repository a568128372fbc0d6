"""Gamma, digamma and Kummer confluent hypergeometric functions.

Kummer's second function is only needed here for a positive integer second
parameter ``b = n + 1``, where it takes the logarithmic form

    U(a, n+1, z) = (-1)**(n+1) / (n! Gamma(a-n))
                   * sum_k (a)_k z**k / ((n+1)_k k!)
                     * [ln z + psi(a+k) - psi(1+k) - psi(1+n+k)]
                 + (n-1)!/Gamma(a) * z**-n * sum_{r<n} (a-n)_r z**r / ((1-n)_r r!)

The second sum is the Kummer M series of ``(a-n, 1-n)`` truncated after
``n`` terms and is absent for ``n = 0``.

Every pole of ``psi(a+k)`` is matched by a zero of ``1/Gamma(a-n)``. Both are
expanded with the reflection formulas so the product is evaluated in closed
form, which keeps the series accurate arbitrarily close to non-positive
integer ``a``. Exact non-positive integers use the Laguerre closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "EvalResult",
    "HypergeometricArgs",
    "gamma",
    "digamma",
    "rgamma",
    "kummer_m",
    "kummer_m_array",
    "kummer_u_intb",
    "kummer_u_array",
    "laguerre_u",
    "MAX_TERMS",
    "ASYMPTOTIC_Z",
]

EPS = np.finfo(float).eps
MAX_TERMS = 10_000
# Above this argument the large-z expansion plus recurrence is tried first.
ASYMPTOTIC_Z = 12.0


@dataclass(frozen=True)
class HypergeometricArgs:
    """Arguments ``(a, b, z)`` of a Kummer function with integer ``b >= 1``."""

    a: float
    b: int
    z: float

    def __post_init__(self):
        if int(self.b) != self.b or self.b < 1:
            raise DomainError(f"b must be a positive integer, got {self.b!r}")
        if not self.z >= 0:
            raise DomainError(f"z must be non-negative, got {self.z!r}")
        object.__setattr__(self, "b", int(self.b))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "z", float(self.z))


@dataclass(frozen=True)
class EvalResult:
    """A function value with an estimate of its absolute error."""

    value: float
    est_abs_error: float

    def __float__(self):
        return self.value


# -- gamma family -----------------------------------------------------------


def _is_pole(x):
    x = np.asarray(x, dtype=float)
    return (x <= 0) & (x == np.round(x))


def _check_poles(x, name):
    if np.any(_is_pole(x)):
        raise PoleError(f"{name} has a pole at non-positive integer argument {x!r}")


def _scalar_or_array(out, x):
    return float(out) if np.ndim(x) == 0 else out


def gamma(x):
    """Gamma function for real arguments away from its poles."""
    _check_poles(x, "gamma")
    return _scalar_or_array(special.gamma(np.asarray(x, dtype=float)), x)


def digamma(x):
    """Logarithmic derivative of the gamma function, ``Gamma'(x)/Gamma(x)``."""
    _check_poles(x, "digamma")
    return _scalar_or_array(special.digamma(np.asarray(x, dtype=float)), x)


def sinpi(x):
    """``sin(pi x)`` with exact argument reduction."""
    x = np.asarray(x, dtype=float)
    n = np.round(x)
    sign = np.where(np.fmod(n, 2) == 0, 1.0, -1.0)
    return sign * np.sin(np.pi * (x - n))


def cospi(x):
    """``cos(pi x)`` with exact argument reduction."""
    x = np.asarray(x, dtype=float)
    n = np.round(x)
    sign = np.where(np.fmod(n, 2) == 0, 1.0, -1.0)
    return sign * np.cos(np.pi * (x - n))


def rgamma(x):
    """Reciprocal gamma function, entire; exactly zero at the poles of gamma."""
    xa = np.asarray(x, dtype=float)
    left = xa < 0.5
    with np.errstate(over="ignore", invalid="ignore"):
        refl = special.gamma(np.where(left, 1.0 - xa, 1.0)) * sinpi(xa) / np.pi
        direct = 1.0 / special.gamma(np.where(left, 1.0, xa))
    return _scalar_or_array(np.where(left, refl, direct), x)


# -- Kummer M ---------------------------------------------------------------


def kummer_m_array(a, b, z, max_terms=MAX_TERMS):
    """Vectorized power series for ``M(a, b, z)``.

    Returns ``(values, est_abs_errors)``. For non-positive integer ``a`` the
    series terminates and the result is the exact polynomial sum.
    """
    a, b, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, z)))
    if np.any(_is_pole(b)):
        raise DomainError("b must not be a non-positive integer")
    term = np.ones(a.shape)
    total = np.ones(a.shape)
    abs_sum = np.ones(a.shape)
    trunc = np.zeros(a.shape)
    active = np.ones(a.shape, dtype=bool)
    for k in range(max_terms):
        if not active.any():
            break
        ratio = (a + k) * z / ((b + k) * (k + 1))
        term = np.where(active, term * (a + k) * z / ((b + k) * (k + 1)), 0.0)
        total = total + term
        abs_sum = abs_sum + np.abs(term)
        mag = np.abs(term)
        small = (mag <= EPS * np.abs(total)) | (mag <= EPS * EPS * abs_sum)
        done = active & ((term == 0.0) | (small & (np.abs(ratio) < 0.5)))
        trunc = np.where(done, 2.0 * mag, trunc)
        active &= ~done
    if active.any():
        raise ConvergenceError(f"Kummer M series did not converge in {max_terms} terms")
    return total, trunc + 2.0 * EPS * abs_sum


def kummer_m(args, max_terms=MAX_TERMS):
    """Kummer's function ``M(a, b, z)`` for :class:`HypergeometricArgs`."""
    v, e = kummer_m_array(args.a, args.b, args.z, max_terms)
    return EvalResult(float(v), float(e))


# -- Kummer U, integer b ----------------------------------------------------


def laguerre_u(N, n, z):
    """``U(-N, n+1, z) = (-1)**N N! L_N^(n)(z)`` by its own three-term recurrence.

    ``N`` may be an integer array; ``P_k = (-1)**k k! L_k`` obeys
    ``P_{k+1} = (z - 2k - 1 - n) P_k - k (k + n) P_{k-1}``.
    """
    N, z = np.broadcast_arrays(np.asarray(N, dtype=np.int64), np.asarray(z, dtype=float))
    prev = np.zeros(z.shape)
    cur = np.ones(z.shape)
    abs_cur = np.ones(z.shape)
    for k in range(int(N.max(initial=0))):
        nxt = (z - 2 * k - 1 - n) * cur - k * (k + n) * prev
        keep = k < N
        abs_nxt = np.abs(z - 2 * k - 1 - n) * abs_cur + k * (k + n) * np.abs(prev)
        prev = np.where(keep, cur, prev)
        cur = np.where(keep, nxt, cur)
        abs_cur = np.where(keep, abs_nxt, abs_cur)
    return cur, 4.0 * EPS * (N + 1) * abs_cur


def _u_log_series(a, n, z, max_terms):
    """Logarithmic series for ``U(a, n+1, z)`` with reflection at poles of psi."""
    lnz = np.log(z)
    rg_an = rgamma(a - n)
    left = a < 0.5
    with np.errstate(over="ignore", invalid="ignore"):
        refl_const = np.where(
            left,
            (-1.0) ** n * special.gamma(np.where(left, 1.0 - a + n, 1.0)) * cospi(a),
            0.0,
        )
        # psi(1 - a - k) on the reflected branch, psi(a + k) on the regular one.
        psi_refl = special.digamma(np.where(left, 1.0 - a, 1.0))
        psi_reg = special.digamma(np.where(left, 1.0, a))
    psi_1k = -np.euler_gamma
    psi_1nk = float(special.digamma(n + 1.0))

    coef = np.ones(a.shape)
    total = np.zeros(a.shape)
    abs_sum = np.zeros(a.shape)
    trunc = np.zeros(a.shape)
    active = np.ones(a.shape, dtype=bool)
    was_left = left
    for k in range(max_terms):
        x = a + k
        is_left = x < 0.5
        if k > 0:
            with np.errstate(divide="ignore", invalid="ignore"):
                psi_refl = np.where(is_left, psi_refl - 1.0 / (1.0 - x), psi_refl)
                psi_reg = np.where(~is_left & ~was_left, psi_reg + 1.0 / (x - 1.0), psi_reg)
            entering = ~is_left & was_left
            if entering.any():
                psi_reg = psi_reg.copy()
                psi_reg[entering] = special.digamma(x[entering])
        common = lnz - psi_1k - psi_1nk
        g = np.where(
            is_left,
            rg_an * (common + psi_refl) - refl_const,
            rg_an * (common + psi_reg),
        )
        term = np.where(active, coef * g, 0.0)
        total = total + term
        mag = np.abs(term)
        abs_sum = abs_sum + mag

        ratio = np.abs((a + k) * z / ((n + 1 + k) * (k + 1)))
        small = (mag <= 0.5 * EPS * np.abs(total)) | (mag <= EPS * EPS * abs_sum)
        done = active & ((coef == 0.0) | (small & (ratio < 0.5) & ~is_left))
        trunc = np.where(done, 2.0 * mag, trunc)
        active &= ~done
        if not active.any():
            break

        coef = coef * (a + k) * z / ((n + 1 + k) * (k + 1))
        psi_1k += 1.0 / (k + 1)
        psi_1nk += 1.0 / (n + 1 + k)
        was_left = is_left
    if active.any():
        raise ConvergenceError(f"Kummer U series did not converge in {max_terms} terms")

    scale = (-1.0) ** (n + 1) / math.factorial(n)
    value = scale * total
    err = abs(scale) * (trunc + 4.0 * EPS * abs_sum)

    if n >= 1:
        rg_a = rgamma(a)
        t = math.factorial(n - 1) * z ** (-n)
        part = t.copy()
        abs_part = np.abs(t)
        for r in range(n - 1):
            t = t * (a - n + r) * (-z) / ((n - 1 - r) * (r + 1))
            part = part + t
            abs_part = abs_part + np.abs(t)
        value = value + rg_a * part
        err = err + 4.0 * EPS * np.abs(rg_a) * abs_part
    return value, err


def _u_asymptotic(a, n, z, max_terms):
    """Large-z expansion ``z**-a * sum_k (a)_k (a-n)_k / k! * (-1/z)**k``.

    Truncated at its smallest term; the expansion terminates exactly when
    ``a`` or ``a - n`` is a non-positive integer.
    """
    term = np.ones(a.shape)
    total = np.ones(a.shape)
    abs_sum = np.ones(a.shape)
    trunc = np.zeros(a.shape)
    active = np.ones(a.shape, dtype=bool)
    for k in range(max_terms):
        nxt = term * (a + k) * (a - n + k) / ((k + 1) * -z)
        grows = np.abs(nxt) >= np.abs(term)
        stop_small = active & grows & (nxt != 0.0)
        trunc = np.where(stop_small, np.abs(term), trunc)
        active &= ~stop_small
        term = np.where(active, nxt, 0.0)
        total = total + term
        abs_sum = abs_sum + np.abs(term)
        converged = active & ((term == 0.0) | (np.abs(term) <= 0.5 * EPS * np.abs(total)))
        trunc = np.where(converged, np.abs(term), trunc)
        active &= ~converged
        if not active.any():
            break
    trunc = np.where(active, np.inf, trunc)
    zpow = np.exp(-a * np.log(z))
    return zpow * total, np.abs(zpow) * (trunc + 2.0 * EPS * abs_sum)


def _u_recurrence(a, n, z, max_terms, seed):
    """Seed ``U`` at ``a0, a0 + 1`` with ``a0`` in (-1, 0], then apply
    ``U(a-1) = (z + 2a - b) U(a) - a (a - b + 1) U(a+1)`` down to ``a``.

    Recursing towards negative ``a`` is stable beyond the turning point and
    mildly growing inside the oscillatory region. An absolute-value companion
    recursion propagates the error bound so unstable cases lose the selection.
    """
    b = n + 1
    steps = np.where(a < 0, np.floor(-a), 0.0)
    a0 = a + steps
    u0, e0 = seed(a0, n, z, max_terms)
    u1, e1 = seed(a0 + 1.0, n, z, max_terms)
    # u0 holds U(a0 - j), u1 holds U(a0 - j + 1)
    for j in range(int(steps.max(initial=0))):
        keep = j < steps
        s = a0 - j
        c1 = z + 2 * s - b
        c2 = s * (s - b + 1)
        nxt = c1 * u0 - c2 * u1
        enxt = np.abs(c1) * e0 + np.abs(c2) * e1 + EPS * (np.abs(c1 * u0) + np.abs(c2 * u1))
        u0, u1 = np.where(keep, nxt, u0), np.where(keep, u0, u1)
        e0, e1 = np.where(keep, enxt, e0), np.where(keep, e0, e1)
    return u0, e0


def _integer_a(a):
    """Mask of ``a`` that are non-positive integers to working precision."""
    ra = np.round(a)
    return (ra <= 0) & (np.abs(a - ra) <= 4.0 * EPS * np.maximum(1.0, np.abs(a)))


def kummer_u_array(a, b, z, max_terms=MAX_TERMS):
    """Vectorized ``U(a, b, z)`` for a positive integer ``b`` and ``z > 0``.

    ``a`` and ``z`` broadcast against each other. Returns ``(values,
    est_abs_errors)``. The function is entire in ``a``.
    """
    if int(b) != b or b < 1:
        raise DomainError(f"b must be a positive integer, got {b!r}")
    n = int(b) - 1
    a, z = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(z, dtype=float))
    if np.any(~(z > 0)):
        raise DomainError("Kummer U with integer b requires z > 0")
    value = np.empty(a.shape)
    err = np.empty(a.shape)

    poly = _integer_a(a)
    if poly.any():
        v, e = laguerre_u(-np.round(a[poly]).astype(np.int64), n, z[poly])
        value[poly], err[poly] = v, e

    rest = ~poly
    if rest.any():
        ar, zr = a[rest], z[rest]
        big = zr > ASYMPTOTIC_Z
        v = np.empty(ar.shape)
        e = np.empty(ar.shape)
        if big.any():
            v[big], e[big] = _u_recurrence(ar[big], n, zr[big], max_terms, _u_asymptotic)
        if (~big).any():
            v[~big], e[~big] = _u_log_series(ar[~big], n, zr[~big], max_terms)
        # Try the other route wherever the first choice is not sharp.
        weak = ~(e <= 1e-13 * np.abs(v))
        if weak.any():
            wb = big[weak]
            ov = np.empty(wb.shape)
            oe = np.empty(wb.shape)
            if wb.any():
                ov[wb], oe[wb] = _u_log_series(ar[weak][wb], n, zr[weak][wb], max_terms)
            if (~wb).any():
                ov[~wb], oe[~wb] = _u_recurrence(
                    ar[weak][~wb], n, zr[weak][~wb], max_terms, _u_log_series
                )
            better = oe < e[weak]
            idx = np.flatnonzero(weak)[better]
            v[idx], e[idx] = ov[better], oe[better]
        value[rest], err[rest] = v, e
    return value, err


def kummer_u_intb(args, max_terms=MAX_TERMS):
    """Kummer's function ``U(a, b, z)`` for positive integer ``b`` and ``z > 0``."""
    if not args.z > 0:
        raise DomainError(f"Kummer U with integer b requires z > 0, got z={args.z}")
    v, e = kummer_u_array(args.a, args.b, args.z, max_terms)
    return EvalResult(float(v), float(e))
