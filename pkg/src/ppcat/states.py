"""Initial single-mode states and the two-mode input catalog (cases I-IX).

Every state is carried as a density operator written as a finite sum of
coherent dyadics ``w |a_i><a_j|``, which fixes ket phase conventions and
makes characteristic functions a few lines of displacement algebra.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ValidationError


class Kind(enum.Enum):
    VACUUM = "vacuum"
    COHERENT = "coherent"
    CAT_PLUS = "cat"


@dataclass(frozen=True)
class ModeState:
    kind: Kind
    amplitude: complex = 0j

    def __post_init__(self):
        if not isinstance(self.kind, Kind):
            object.__setattr__(self, "kind", Kind(self.kind))
        a = complex(self.amplitude)
        if not np.isfinite(a):
            raise ValidationError(f"amplitude must be finite, got {self.amplitude!r}")
        object.__setattr__(self, "amplitude", 0j if self.kind is Kind.VACUUM else a)

    @classmethod
    def vacuum(cls):
        return cls(Kind.VACUUM)

    @classmethod
    def coherent(cls, alpha):
        return cls(Kind.COHERENT, alpha)

    @classmethod
    def cat(cls, alpha):
        return cls(Kind.CAT_PLUS, alpha)

    @property
    def mean_photons(self) -> float:
        n = abs(self.amplitude) ** 2
        if self.kind is Kind.CAT_PLUS:
            return n * np.tanh(n) if n > 0 else 0.0
        return n

    def label(self) -> str:
        return {Kind.VACUUM: "V", Kind.COHERENT: "C", Kind.CAT_PLUS: "SC"}[self.kind]


class DyadicTerm(NamedTuple):
    weight: complex
    left: complex
    right: complex


# case label -> (mode-1 kind, mode-3 kind)
CASES = {
    "I": (Kind.COHERENT, Kind.COHERENT),
    "II": (Kind.COHERENT, Kind.VACUUM),
    "III": (Kind.VACUUM, Kind.COHERENT),
    "IV": (Kind.VACUUM, Kind.VACUUM),
    "V": (Kind.CAT_PLUS, Kind.VACUUM),
    "VI": (Kind.VACUUM, Kind.CAT_PLUS),
    "VII": (Kind.CAT_PLUS, Kind.COHERENT),
    "VIII": (Kind.COHERENT, Kind.CAT_PLUS),
    "IX": (Kind.CAT_PLUS, Kind.CAT_PLUS),
}


@dataclass(frozen=True)
class TwoModeInput:
    mode1: ModeState
    mode3: ModeState
    case_label: str | None = field(default=None)

    def __post_init__(self):
        if self.case_label is not None:
            if self.case_label not in CASES:
                raise ValidationError(f"unknown case {self.case_label!r}")
            if CASES[self.case_label] != (self.mode1.kind, self.mode3.kind):
                raise ValidationError(
                    f"case {self.case_label} expects {CASES[self.case_label]}, "
                    f"got {(self.mode1.kind, self.mode3.kind)}"
                )

    @classmethod
    def from_case(cls, label: str, alpha1: complex = 0j, alpha3: complex = 0j) -> "TwoModeInput":
        label = label.upper()
        if label not in CASES:
            raise ValidationError(f"unknown case {label!r}; expected one of {', '.join(CASES)}")
        k1, k3 = CASES[label]
        return cls(ModeState(k1, alpha1), ModeState(k3, alpha3), label)


def cat_norm(alpha0: complex) -> float:
    """Squared normalization of ``|a> + |-a>``: ``2 + 2 exp(-2|a|^2)``."""
    return 2.0 + 2.0 * np.exp(-2.0 * abs(alpha0) ** 2)


def dyadics(s: ModeState) -> list[DyadicTerm]:
    a = s.amplitude
    if s.kind is Kind.VACUUM:
        return [DyadicTerm(1.0 + 0j, 0j, 0j)]
    if s.kind is Kind.COHERENT:
        return [DyadicTerm(1.0 + 0j, a, a)]
    w = 1.0 / cat_norm(a) + 0j
    return [
        DyadicTerm(w, a, a),
        DyadicTerm(w, -a, -a),
        DyadicTerm(w, a, -a),
        DyadicTerm(w, -a, a),
    ]


def coherent_overlap(bra, ket):
    """<bra|ket> for coherent states (broadcasts)."""
    bra, ket = np.asarray(bra), np.asarray(ket)
    return np.exp(-0.5 * np.abs(bra) ** 2 - 0.5 * np.abs(ket) ** 2 + np.conj(bra) * ket)


def trace(terms) -> complex:
    return complex(sum(t.weight * coherent_overlap(t.right, t.left) for t in terms))


def dyadic_log_characteristic(term: DyadicTerm, lam):
    """log of ``w <a_j| D(lam) |a_i>`` where ``D(lam) = exp(lam a^+ - lam^* a)``.

    ``D(lam)|a_i> = exp((lam a_i^* - lam^* a_i)/2) |a_i + lam>``, then the
    coherent overlap. Collecting terms leaves a Gaussian in ``lam``.
    """
    w, ai, aj = term
    c0 = np.log(w) - 0.5 * abs(ai) ** 2 - 0.5 * abs(aj) ** 2 + np.conj(aj) * ai
    lam = np.asarray(lam)
    return c0 - 0.5 * np.abs(lam) ** 2 + lam * np.conj(aj) - np.conj(lam) * ai


def characteristic(s: ModeState, lam):
    """Symmetric-order characteristic function ``Tr[rho exp(lam a^+ - lam^* a)]``."""
    lam = np.asarray(lam, dtype=complex)
    out = np.zeros(lam.shape, dtype=complex)
    for t in dyadics(s):
        out += np.exp(dyadic_log_characteristic(t, lam))
    return out if out.ndim else complex(out)


def normal_moments(s: ModeState) -> dict[str, complex]:
    """``<a>``, ``<a^2>`` and ``<a^+ a>`` from the dyadic expansion."""
    mean = sq = num = 0j
    for w, ai, aj in dyadics(s):
        ov = w * coherent_overlap(aj, ai)
        mean += ov * ai
        sq += ov * ai * ai
        num += ov * np.conj(aj) * ai
    return {"a": complex(mean), "aa": complex(sq), "ada": complex(num)}
