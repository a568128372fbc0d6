"""Energy decomposition and the two Fisher-information functionals.

Energies use the physical names: ``potential`` is the expectation of the trap
term ``r**2 / 4`` and ``kinetic`` the expectation of ``-laplacian``, the
centrifugal ``l**2 / r**2`` included. All integrals use the measure
``r dr`` of the normalized radial function.
"""

from __future__ import annotations

from dataclasses import dataclass

from .eigensolver import solve_state
from .errors import DomainError, StepTooLargeError
from .wavefunction import build_profile, wall_breakpoints
from .quadrature import integrate

__all__ = [
    "EnergySplit",
    "QfiValue",
    "energy_split",
    "fisher_density",
    "fisher_density_direct",
    "fisher_parameter",
    "default_step",
]


@dataclass(frozen=True)
class EnergySplit:
    kinetic: float
    potential: float
    total: float


@dataclass(frozen=True)
class QfiValue:
    """A Fisher-information value.

    ``kind`` is ``"density"`` or ``"parameter"``. For the parameter kind
    ``step_used`` is the finite-difference step in ``r0`` and ``overlap_probe``
    is ``<psi|d psi/d r0>``, which vanishes for real normalized states.
    """

    kind: str
    value: float
    step_used: float | None = None
    overlap_probe: float | None = None
    unextrapolated: float | None = None


def _quad(profile, integrand, tol=1e-12):
    val, _ = integrate(
        integrand, profile.r0, profile.r_max, tol=tol,
        breakpoints=wall_breakpoints(profile.r0, profile.r_max),
    )
    return val


def energy_split(profile):
    """Kinetic and potential expectation values of a normalized profile.

    The kinetic part is integrated by parts, ``int (R'**2 + l**2 R**2 / r**2) r dr``,
    valid since ``R(r0) = 0`` and ``R`` decays at infinity.
    """
    l = profile.state.label.l

    def kin(r):
        R = profile.radial(r)
        dR = profile.radial_derivative(r)
        return (dR * dR + (l * l) * R * R / (r * r)) * r

    def pot(r):
        R = profile.radial(r)
        return 0.25 * R * R * r ** 3

    kinetic = _quad(profile, kin)
    potential = _quad(profile, pot)
    return EnergySplit(kinetic=kinetic, potential=potential, total=kinetic + potential)


def fisher_density(profile):
    """Density Fisher information ``int rho'**2 / rho r dr = 4 int R'**2 r dr``."""
    value = 4.0 * _quad(profile, lambda r: profile.radial_derivative(r) ** 2 * r)
    return QfiValue(kind="density", value=value)


def fisher_density_direct(profile):
    """Same functional evaluated literally from ``rho = R**2`` and ``rho' = 2 R R'``.

    Quadrature nodes never coincide with nodes of ``R``; this form exists as a
    cross-check of :func:`fisher_density`.
    """

    def integrand(r):
        R = profile.radial(r)
        rho = R * R
        drho = 2.0 * R * profile.radial_derivative(r)
        return drho * drho / rho * r

    return QfiValue(kind="density", value=_quad(profile, integrand))


def default_step(r0):
    """``1e-3 max(1, r0)``, capped at ``1e-2 r0``."""
    return min(1e-3 * max(1.0, r0), 1e-2 * r0)


def _fisher_fd(label, r0, step, center, grid_config):
    plus = build_profile(solve_state(label, r0 + step), grid_config)
    minus = build_profile(solve_state(label, r0 - step), grid_config)
    hi = max(plus.r_max, minus.r_max, center.r_max)

    # Gauge check: both neighbours must overlap positively with the centre.
    for side in (plus, minus):
        ov, _ = integrate(
            lambda r: side.radial(r, continued=True) * center.radial(r) * r,
            r0, hi, tol=1e-10, breakpoints=wall_breakpoints(r0, hi),
        )
        if not ov > 0:
            raise StepTooLargeError(
                f"step {step:g} at r0={r0:g} for {label}: neighbouring state overlap {ov:.3g} <= 0"
            )

    # Derivative of the analytically continued states, on r >= r0 only.
    def deriv(r):
        return (plus.radial(r, continued=True) - minus.radial(r, continued=True)) / (2.0 * step)

    bp = wall_breakpoints(r0, hi)
    # Difference quotients carry ~1e-12 noise; ask for no more than that.
    dd, _ = integrate(lambda r: deriv(r) ** 2 * r, r0, hi, tol=1e-11, breakpoints=bp, atol=1e-11)
    pd, _ = integrate(
        lambda r: center.radial(r) * deriv(r) * r, r0, hi, tol=1e-11, breakpoints=bp, atol=1e-11
    )
    return 4.0 * (dd - pd * pd), pd


def fisher_parameter(label, r0, step=None, richardson=True, grid_config=None):
    """Pure-state Fisher information with respect to the hard-core range.

    ``F = 4 (<d psi|d psi> - |<psi|d psi>|**2)`` with ``d psi / d r0`` from a
    symmetric difference of normalized, sign-aligned states at ``r0 +- step``.
    Each neighbour is evaluated through its analytic continuation across the
    shifted wall so the difference quotient is second order in ``step``.
    With ``richardson`` the steps ``step`` and ``step/2`` are combined.
    """
    if not r0 > 0:
        raise DomainError("hard-core range must satisfy r0 > 0")
    step = default_step(r0) if step is None else float(step)
    if not 0 < step <= 1e-2 * r0 * (1 + 1e-12):
        raise StepTooLargeError(f"step must lie in (0, 1e-2 r0]; got {step:g} at r0={r0:g}")
    center = build_profile(solve_state(label, r0), grid_config)
    f_h, probe = _fisher_fd(label, r0, step, center, grid_config)
    value = f_h
    if richardson:
        f_h2, probe = _fisher_fd(label, r0, 0.5 * step, center, grid_config)
        value = (4.0 * f_h2 - f_h) / 3.0
    return QfiValue(
        kind="parameter",
        value=max(value, 0.0),
        step_used=step,
        overlap_probe=probe,
        unextrapolated=f_h,
    )
