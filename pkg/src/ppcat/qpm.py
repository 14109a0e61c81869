"""Quasi-phase-matching bookkeeping for the two cascaded processes.

Process 1 is degenerate down-conversion (2w -> w + w), process 2 is sum
frequency generation (2w + w -> 3w). Couplings stay in normalized units; the
pump amplitude and material constants are the caller's business.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError, ZeroDivisor


@dataclass(frozen=True)
class NonlinearProcess:
    """One quasi-phase-matched interaction.

    ``delta_k_bulk`` and ``grating_modulus`` are in rad/m, ``period`` in m.
    ``order`` is the (odd, signed) quasi-phase-matching order and
    ``bare_coupling`` the unaveraged nonlinear coupling constant.
    """

    delta_k_bulk: float
    period: float
    order: int = 1
    bare_coupling: float = 1.0
    grating_modulus: float | None = None

    def __post_init__(self):
        if not (self.period > 0 and math.isfinite(self.period)):
            raise ValidationError(f"period must be positive, got {self.period!r}")
        if int(self.order) != self.order or self.order % 2 == 0:
            raise ValidationError(f"QPM order must be odd and nonzero, got {self.order!r}")
        G = 2 * math.pi / self.period
        if self.grating_modulus is None:
            object.__setattr__(self, "grating_modulus", G)
        elif not math.isclose(self.grating_modulus * self.period, 2 * math.pi, rel_tol=1e-12):
            raise ValidationError("grating_modulus * period must equal 2*pi")

    @classmethod
    def from_grating(cls, delta_k_bulk, grating_modulus, order=1, bare_coupling=1.0):
        return cls(delta_k_bulk, 2 * math.pi / grating_modulus, order, bare_coupling)


def residual_mismatch(p: NonlinearProcess) -> float:
    """Mismatch left over after the grating: ``dk + m G``."""
    return p.delta_k_bulk + p.order * p.grating_modulus


def effective_coupling(p: NonlinearProcess) -> float:
    """Period-averaged coupling of a 50% duty-cycle grating, ``2 xi / (pi m)``."""
    return 2.0 * p.bare_coupling / (math.pi * p.order)


def coupling_ratio(p1: NonlinearProcess, p2: NonlinearProcess) -> float:
    """gamma = g2 / g1, the only material parameter the dynamics depend on."""
    g1 = effective_coupling(p1)
    if g1 == 0:
        raise ZeroDivisor("process 1 has zero effective coupling")
    return effective_coupling(p2) / g1


def matched_period(delta_k_bulk: float, order: int = 1) -> float:
    """Grating period that cancels ``delta_k_bulk`` at the given order."""
    if delta_k_bulk == 0:
        raise ZeroDivisor("no finite period matches a zero mismatch")
    period = -order * 2 * math.pi / delta_k_bulk
    if period <= 0:
        raise ValidationError("order sign inconsistent with mismatch sign")
    return period
