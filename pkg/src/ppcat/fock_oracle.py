"""Brute-force reference: two truncated Fock spaces and Schroedinger evolution.

The quadratic generator

    H = e^{i phi} a1^+2 + e^{-i phi} a1^2 + gamma (e^{-i phi} a1^+ a3 + e^{i phi} a1 a3^+)

reproduces the classical-pump Heisenberg equations through
``da/dz = -i [a, H]``. Input kets are evolved branch by branch (a cat is two
coherent branches), reduced density matrices come from partial traces, and
Wigner values from displaced-parity expectations. Nothing here shares code
with the Bogoliubov or characteristic-function machinery.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import expm_multiply
from scipy.special import gammaln

from . import states as st
from .errors import CutoffLeakage, ValidationError
from .wigner import PhaseSpaceGrid, WignerField

LEAKAGE_TOL = 1e-8
EDGE_LEVELS = 3


def required_cutoff(alpha) -> int:
    n = abs(alpha) ** 2
    return math.ceil(n + 6 * math.sqrt(n) + 10)


@dataclass(frozen=True)
class FockConfig:
    cutoff1: int
    cutoff3: int
    zeta: float
    gamma: float
    phi2: float = 0.0
    steps: int = 8

    def __post_init__(self):
        if self.cutoff1 < 2 or self.cutoff3 < 2:
            raise ValidationError("cutoffs must be >= 2")
        if self.steps < 1:
            raise ValidationError("steps must be >= 1")

    def check_input(self, inp: st.TwoModeInput):
        for name, s, n in (("cutoff1", inp.mode1, self.cutoff1), ("cutoff3", inp.mode3, self.cutoff3)):
            need = required_cutoff(s.amplitude)
            if n < need:
                raise ValidationError(f"{name}={n} below {need} required for |alpha|={abs(s.amplitude):.3g}")


def lowering(n: int) -> sparse.csr_matrix:
    return sparse.diags(np.sqrt(np.arange(1, n)), 1, shape=(n, n), format="csr", dtype=complex)


def effective_generator(gamma: float, phi2: float, cutoff1: int, cutoff3: int) -> sparse.csr_matrix:
    """Hermitian generator on the truncated product space (mode 1 index major)."""
    if cutoff1 < 2 or cutoff3 < 2:
        raise ValidationError("cutoffs must be >= 2")
    a1 = sparse.kron(lowering(cutoff1), sparse.identity(cutoff3), format="csr")
    a3 = sparse.kron(sparse.identity(cutoff1), lowering(cutoff3), format="csr")
    e = np.exp(1j * phi2)
    sq = e * (a1.T @ a1.T)
    mix = gamma * np.conj(e) * (a1.T @ a3)
    # adding the explicit adjoint keeps H exactly Hermitian
    H = sq + mix
    return (H + H.conj().T).tocsr()


def coherent_ket(alpha: complex, n: int) -> np.ndarray:
    k = np.arange(n)
    if alpha == 0:
        v = np.zeros(n, dtype=complex)
        v[0] = 1.0
        return v
    log_mag = -0.5 * abs(alpha) ** 2 + k * math.log(abs(alpha)) - 0.5 * gammaln(k + 1)
    return np.exp(log_mag + 1j * k * np.angle(alpha))


def branches(s: st.ModeState) -> list[tuple[complex, complex]]:
    """The state as ``sum_b c_b |alpha_b>``."""
    if s.kind is st.Kind.VACUUM:
        return [(1.0, 0j)]
    if s.kind is st.Kind.COHERENT:
        return [(1.0, s.amplitude)]
    c = 1.0 / math.sqrt(st.cat_norm(s.amplitude))
    return [(c, s.amplitude), (c, -s.amplitude)]


@dataclass
class FockState:
    psi: np.ndarray  # shape (cutoff1, cutoff3)
    branch_coeffs: list
    branch_states: list  # evolved product branches, each (cutoff1, cutoff3)
    leakage: float
    norm_drift: float

    @property
    def cutoffs(self):
        return self.psi.shape


def edge_population(psi2: np.ndarray, levels: int = EDGE_LEVELS) -> tuple[float, float]:
    """Population in the top ``levels`` Fock levels of mode 1 and of mode 3."""
    p = np.abs(psi2) ** 2
    return float(p[-levels:, :].sum()), float(p[:, -levels:].sum())


def evolve_state(inp: st.TwoModeInput, cfg: FockConfig, leakage_tol: float = LEAKAGE_TOL) -> FockState:
    """Evolve every coherent product branch by ``exp(-i H zeta)``.

    Evolution is sampled at ``cfg.steps`` equal substeps and the population in
    the top ``EDGE_LEVELS`` levels of either mode is checked at each one;
    ``CutoffLeakage`` carries the per-mode edge populations when it trips.
    """
    cfg.check_input(inp)
    N1, N3 = cfg.cutoff1, cfg.cutoff3
    coeffs, kets = [], []
    for c1, a1 in branches(inp.mode1):
        for c3, a3 in branches(inp.mode3):
            coeffs.append(c1 * c3)
            kets.append(np.kron(coherent_ket(a1, N1), coherent_ket(a3, N3)))
    B = np.array(kets).T
    norms0 = np.linalg.norm(B, axis=0)
    H = effective_generator(cfg.gamma, cfg.phi2, N1, N3) if cfg.zeta != 0 else None
    h = cfg.zeta / cfg.steps
    edges = np.zeros(2)
    for k in range(cfg.steps + 1):
        if k and H is not None:
            B = expm_multiply(-1j * h * H, B)
        for b in range(B.shape[1]):
            edges = np.maximum(edges, edge_population(B[:, b].reshape(N1, N3)))
        # abort at the first leaking substep so cutoff searches stay cheap
        if edges.max() > leakage_tol:
            raise CutoffLeakage(
                f"population {edges.max():.3g} within {EDGE_LEVELS} levels of cutoffs ({N1}, {N3})",
                float(edges.max()),
                tuple(edges),
            )
        if H is None:
            break
    drift = float(np.max(np.abs(np.linalg.norm(B, axis=0) - norms0)))
    bstates = [B[:, b].reshape(N1, N3) for b in range(B.shape[1])]
    psi = sum(c * b for c, b in zip(coeffs, bstates))
    return FockState(psi, coeffs, bstates, float(edges.max()), drift)


def evolve_converged(
    inp: st.TwoModeInput,
    zeta: float,
    gamma: float,
    phi2: float = 0.0,
    start: tuple[int, int] | None = None,
    growth: float = 1.4,
    max_cutoff: int = 4000,
    leakage_tol: float = LEAKAGE_TOL,
) -> FockState:
    """Evolve, enlarging whichever cutoff leaks until the leakage check passes."""
    n1, n3 = start or (required_cutoff(inp.mode1.amplitude), required_cutoff(inp.mode3.amplitude))
    n1 = max(n1, required_cutoff(inp.mode1.amplitude))
    n3 = max(n3, required_cutoff(inp.mode3.amplitude))
    while True:
        try:
            return evolve_state(inp, FockConfig(n1, n3, zeta, gamma, phi2), leakage_tol)
        except CutoffLeakage as err:
            e1, e3 = err.edges
            if e1 > leakage_tol:
                n1 = math.ceil(n1 * growth)
            if e3 > leakage_tol:
                n3 = math.ceil(n3 * growth)
            if max(n1, n3) > max_cutoff:
                raise


def reduced_density(state: FockState, mode: str) -> np.ndarray:
    psi = state.psi
    if mode == "mode1":
        return psi @ psi.conj().T
    if mode == "mode3":
        return psi.T @ psi.conj()
    raise ValidationError(f"unknown mode {mode!r}")


def displaced_parity_wigner(rho: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """``W(alpha) = (2/pi) Tr[rho D(alpha) Pi D(alpha)^+]`` for a truncated rho.

    Uses ``D(alpha) Pi D(alpha)^+ = D(2 alpha) Pi`` and the Fock matrix
    elements of ``D(2 alpha)``. Along each diagonal offset L the elements are
    normalized Laguerre functions

        l_n^L(x) = sqrt(n!/(n+L)!) x^{L/2} e^{-x/2} L_n^L(x),   x = 4|alpha|^2,

    which are bounded by one and generated by a forward three-term recurrence
    in n, so nothing overflows at large cutoffs. Exact for any finite rho.
    """
    alpha = np.asarray(alpha, dtype=complex)
    N = rho.shape[0]
    x = 4.0 * np.abs(alpha) ** 2
    phase = np.exp(1j * np.angle(alpha))
    with np.errstate(divide="ignore"):
        logx = np.log(x)
    sign = (-1.0) ** np.arange(N)
    W = np.zeros(alpha.shape)
    for L in range(N):
        diag = rho[np.arange(N - L), np.arange(L, N)] * sign[: N - L]
        if not np.any(diag):
            continue
        if L == 0:
            cur = np.exp(-0.5 * x)
        else:
            cur = np.where(x > 0, np.exp(0.5 * L * logx - 0.5 * x - 0.5 * gammaln(L + 1)), 0.0)
        prev = np.zeros_like(cur)
        acc = diag[0] * cur
        for n in range(N - L - 1):
            nxt = ((2 * n + 1 + L - x) * cur - math.sqrt(n * (n + L)) * prev) / math.sqrt((n + 1) * (n + L + 1))
            prev, cur = cur, nxt
            acc = acc + diag[n + 1] * cur
        if L == 0:
            W += acc.real
        else:
            W += 2.0 * np.real(phase**L * acc)
    return (2.0 / np.pi) * W


def oracle_wigner(state: FockState, mode: str, grid: PhaseSpaceGrid) -> WignerField:
    rho = reduced_density(state, mode)
    return WignerField(grid, displaced_parity_wigner(rho, grid.alphas()), mode, method="fock")


def oracle_moments(state: FockState) -> dict[str, dict[str, complex]]:
    psi = state.psi
    N1, N3 = psi.shape
    out = {}
    for mode, apply in (
        ("mode1", lambda v: lowering(N1) @ v),
        ("mode3", lambda v: (lowering(N3) @ v.T).T),
    ):
        av = apply(psi)
        aav = apply(av)
        out[mode] = {
            "a": complex(np.vdot(psi, av)),
            "aa": complex(np.vdot(psi, aav)),
            "ada": complex(np.vdot(av, av)),
        }
    return out
