"""Linear input-output map of the two-mode system under a classical pump.

With the 2w pump replaced by a c-number, the w mode (``a1``) and the 3w mode
(``a3``) obey

    da1/dz = -i gamma e^{-i phi} a3 - 2i e^{i phi} a1^+
    da3/dz = -i gamma e^{+i phi} a1

in the normalized length z. The solution is a Bogoliubov map

    a1(z) = k1 a1 + k2 a1^+ + k3 a3 + k4 a3^+
    a3(z) = m1 a1 + m2 a1^+ + m3 a3 + m4 a3^+

Three routes to the coefficients live here: the closed form (valid away from
gamma = 1), the confluent form at gamma = 1, and a fixed-step RK4 integration
of the 4x4 generator used as an oracle for both.

The ordering of the operator vector is ``(a1, a1^+, a3, a3^+)`` throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import NamedTuple

import numpy as np

from .errors import DegenerateExponents, InvalidStep, ValidationError

DEGENERACY_THRESHOLD = 1e-6
ODE_DEFAULT_STEP = 1e-3


@dataclass(frozen=True)
class CouplingConfig:
    zeta: float
    gamma: float
    phi2: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.zeta) and self.zeta >= 0):
            raise ValidationError(f"zeta must be finite and >= 0, got {self.zeta!r}")
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise ValidationError(f"gamma must be finite and >= 0, got {self.gamma!r}")
        if not math.isfinite(self.phi2):
            raise ValidationError(f"phi2 must be finite, got {self.phi2!r}")


class Exponents(NamedTuple):
    x1: complex
    x2: complex


@dataclass(frozen=True)
class PropagatorCoeffs:
    k1: complex
    k2: complex
    k3: complex
    k4: complex
    m1: complex
    m2: complex
    m3: complex
    m4: complex

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)], dtype=complex)

    def as_matrix(self) -> np.ndarray:
        """4x4 map acting on ``(a1, a1^+, a3, a3^+)``."""
        k = self.as_array()[:4]
        m = self.as_array()[4:]
        perm = [1, 0, 3, 2]
        return np.array([k, k[perm].conj(), m, m[perm].conj()])

    @classmethod
    def from_matrix(cls, T) -> "PropagatorCoeffs":
        T = np.asarray(T)
        return cls(*(complex(v) for v in T[0]), *(complex(v) for v in T[2]))

    def compose(self, earlier: "PropagatorCoeffs") -> "PropagatorCoeffs":
        """Map for propagating through ``earlier`` first, then ``self``."""
        return PropagatorCoeffs.from_matrix(self.as_matrix() @ earlier.as_matrix())


IDENTITY = PropagatorCoeffs(1, 0, 0, 0, 0, 0, 1, 0)


def generator_matrix(gamma: float, phi2: float = 0.0) -> np.ndarray:
    """Constant generator M with d/dz (a1, a1^+, a3, a3^+) = M (a1, a1^+, a3, a3^+)."""
    e = np.exp(1j * phi2)
    return np.array(
        [
            [0, -2j * e, -1j * gamma / e, 0],
            [2j / e, 0, 0, 1j * gamma * e],
            [-1j * gamma * e, 0, 0, 0],
            [0, 1j * gamma / e, 0, 0],
        ],
        dtype=complex,
    )


def exponents(gamma: float) -> Exponents:
    """Growth rates ``1 +- sqrt(1 - gamma^2)``; complex conjugate pair for gamma > 1."""
    if gamma < 0:
        raise ValidationError("gamma must be >= 0")
    root = np.sqrt(complex(1.0 - gamma * gamma))
    x1 = 1.0 + root
    # x1 x2 = gamma^2 avoids the cancellation in 1 - root for small gamma
    x2 = gamma * gamma / x1
    return Exponents(complex(x1), complex(x2))


def _sinhc(x: complex, zeta: float) -> complex:
    """``sinh(x zeta) / x``, by series when ``x zeta`` is tiny (complex division underflows)."""
    u = x * zeta
    if abs(u) < 1e-4:
        return complex(zeta * (1 + u * u / 6 + u**4 / 120))
    return np.sinh(u) / x


def _assemble(c: CouplingConfig, P, Q, R, U, V, csum) -> PropagatorCoeffs:
    # P = [(l+g^2) cosh], Q = [cosh], R = [(l+g^2) sinhc], U = [sinhc],
    # V = [l sinhc], all divided differences over l in {x1^2, x2^2};
    # csum = cosh(x1 z) + cosh(x2 z).
    g, e = c.gamma, np.exp(1j * c.phi2)
    return PropagatorCoeffs(
        k1=P,
        k2=-2j * e * V,
        k3=-1j * g / e * R,
        k4=2 * g * e**2 * Q,
        m1=-1j * g * e * R,
        m2=-2 * g * e**2 * Q,
        m3=csum - P,
        m4=-2j * g * g * e**3 * U,
    )


def coeffs_closed_form(c: CouplingConfig) -> PropagatorCoeffs:
    """Closed-form Bogoliubov coefficients.

    Obtained by reducing the system to ``u'' = A u`` for ``u = (a1, a3^+)``,
    where A has eigenvalues ``x1^2`` and ``x2^2``, and applying Sylvester's
    formula to ``cosh(sqrt(A) z)`` and ``sinh(sqrt(A) z)/sqrt(A)``.
    Raises ``DegenerateExponents`` when ``|x1^2 - x2^2|`` is below
    ``DEGENERACY_THRESHOLD``; use ``coeffs_degenerate`` there.
    """
    x1, x2 = exponents(c.gamma)
    D = x1 * x1 - x2 * x2
    if abs(D) < DEGENERACY_THRESHOLD:
        raise DegenerateExponents(f"|x1^2 - x2^2| = {abs(D):.3g} below threshold at gamma={c.gamma}")
    z, g2 = c.zeta, c.gamma * c.gamma
    c1, c2 = np.cosh(x1 * z), np.cosh(x2 * z)
    s1, s2 = _sinhc(x1, z), _sinhc(x2, z)
    la1, la2 = x1 * x1, x2 * x2
    # divided differences of real-analytic symmetric functions: real for real gamma
    P = ((la1 + g2) * c1 - (la2 + g2) * c2) / D
    Q = (c1 - c2) / D
    R = ((la1 + g2) * s1 - (la2 + g2) * s2) / D
    U = (s1 - s2) / D
    V = (la1 * s1 - la2 * s2) / D
    return _assemble(c, P.real, Q.real, R.real, U.real, V.real, (c1 + c2).real)


def coeffs_degenerate(c: CouplingConfig) -> PropagatorCoeffs:
    """Confluent (gamma -> 1) limit: divided differences become derivatives.

    Evaluated at the mean eigenvalue ``2 - gamma^2``; the neglected term is
    second order in ``x1^2 - x2^2``, so this is only meant for use inside
    the degeneracy window (terms of the form ``(a + b z) e^{+-z}`` at gamma = 1).
    """
    x1, x2 = exponents(c.gamma)
    z, g2 = c.zeta, c.gamma * c.gamma
    mu = 2.0 - g2
    x = math.sqrt(mu)
    ch, sh = math.cosh(x * z), math.sinh(x * z)
    dc = z * sh / (2 * x)
    ds = (z * x * ch - sh) / (2 * x**3)
    dlc = ch + x * z * sh / 2
    dls = (sh + z * x * ch) / (2 * x)
    P = dlc + g2 * dc
    R = dls + g2 * ds
    csum = (np.cosh(x1 * z) + np.cosh(x2 * z)).real
    return _assemble(c, P, dc, R, ds, dls, csum)


def propagator_coeffs(c: CouplingConfig) -> PropagatorCoeffs:
    """Closed form, switching to the confluent form inside the degeneracy window."""
    x1, x2 = exponents(c.gamma)
    if abs(x1 * x1 - x2 * x2) < DEGENERACY_THRESHOLD:
        return coeffs_degenerate(c)
    return coeffs_closed_form(c)


def default_step(zeta: float) -> float:
    if zeta == 0:
        return ODE_DEFAULT_STEP
    return zeta / math.ceil(zeta / ODE_DEFAULT_STEP)


def coeffs_ode(c: CouplingConfig, step: float | None = None) -> PropagatorCoeffs:
    """Integrate the 4x4 linear system from 0 to zeta with classical RK4.

    The step is rounded so an integer number of equal steps lands on zeta
    exactly. Used as the independent check on the closed form.
    """
    if step is None:
        step = default_step(c.zeta)
    if not step > 0:
        raise InvalidStep(f"step must be positive, got {step!r}")
    if c.zeta != 0 and step > c.zeta:
        raise InvalidStep(f"step {step} exceeds zeta = {c.zeta}")
    T = np.eye(4, dtype=complex)
    if c.zeta == 0:
        return PropagatorCoeffs.from_matrix(T)
    n = math.ceil(c.zeta / step - 1e-9)
    h = c.zeta / n
    M = generator_matrix(c.gamma, c.phi2)
    for _ in range(n):
        q1 = M @ T
        q2 = M @ (T + 0.5 * h * q1)
        q3 = M @ (T + 0.5 * h * q2)
        q4 = M @ (T + h * q3)
        T = T + (h / 6.0) * (q1 + 2 * q2 + 2 * q3 + q4)
    return PropagatorCoeffs.from_matrix(T)


def commutator_defects(p: PropagatorCoeffs) -> tuple[float, float, float, float]:
    """Deviation of the propagated operators from canonical commutators.

    Returns ``(d11, d33, d13, e13)``: the defects of ``[a1, a1^+] = 1`` and
    ``[a3, a3^+] = 1`` and the moduli of ``[a1, a3^+]`` and ``[a1, a3]``,
    which must both vanish.
    """
    k1, k2, k3, k4, m1, m2, m3, m4 = p.as_array()
    d11 = abs(k1) ** 2 - abs(k2) ** 2 + abs(k3) ** 2 - abs(k4) ** 2 - 1
    d33 = abs(m1) ** 2 - abs(m2) ** 2 + abs(m3) ** 2 - abs(m4) ** 2 - 1
    d13 = k1 * m1.conjugate() - k2 * m2.conjugate() + k3 * m3.conjugate() - k4 * m4.conjugate()
    e13 = k1 * m2 - k2 * m1 + k3 * m4 - k4 * m3
    return float(d11), float(d33), float(abs(d13)), float(abs(e13))


def max_defect(p: PropagatorCoeffs) -> float:
    return max(abs(d) for d in commutator_defects(p))
