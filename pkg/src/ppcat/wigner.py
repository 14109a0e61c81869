"""Reduced Wigner functions of the propagated w and 3w modes.

Convention: alpha = x + i p, d^2 alpha = dx dp, the integral of W is 1 and
the vacuum is ``(2/pi) exp(-2|alpha|^2)``.

The reduced characteristic function of one output mode follows from the
Bogoliubov map: for mode 1,

    beta a1^+(z) - beta^* a1(z) = (l1 a1^+ - l1^* a1) + (l3 a3^+ - l3^* a3),
    l1 = beta k1^* - beta^* k2,   l3 = beta k3^* - beta^* k4,

so it factorizes into the two input characteristic functions evaluated at
``l1`` and ``l3`` (mode 3 uses the m coefficients). Writing
``beta = u + i v`` every ``l`` is real-linear in ``(u, v)``.

Two independent evaluations of ``W(alpha) = pi^-2 \\int chi(beta)
exp(beta^* alpha - beta alpha^*) d^2 beta`` are provided: a sampled 2D
Fourier sum (``wigner_transform_path``) and a closed-form sum of Gaussian
integrals, one per pair of input dyadics (``wigner_gaussian_sum_path``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from . import states as st
from .errors import (
    IllConditionedPropagator,
    ImaginaryResidue,
    InsufficientBetaExtent,
    NoLobesFound,
    NonPositiveDefiniteForm,
    NumericalError,
    ValidationError,
)
from .propagator import PropagatorCoeffs, max_defect

MODES = ("mode1", "mode3")
IMAG_TOL = 1e-9
DEFECT_TOL = 1e-8
BOUNDARY_TOL = 1e-12
MAX_BETA_POINTS = 2501


@dataclass(frozen=True)
class PhaseSpaceGrid:
    x_min: float = -6.0
    x_max: float = 6.0
    p_min: float = -6.0
    p_max: float = 6.0
    nx: int = 256
    ny: int = 256

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ValidationError("grid ranges must satisfy max > min")
        if self.nx < 16 or self.ny < 16:
            raise ValidationError("grid needs at least 16 points per axis")

    @classmethod
    def square(cls, half_width: float, n: int = 256) -> "PhaseSpaceGrid":
        return cls(-half_width, half_width, -half_width, half_width, n, n)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def ps(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.ny)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / (self.ny - 1)

    def alphas(self) -> np.ndarray:
        """``alpha[i, j] = x_i + i p_j``."""
        return self.xs[:, None] + 1j * self.ps[None, :]

    @property
    def max_abs(self) -> float:
        return max(abs(self.x_min), abs(self.x_max), abs(self.p_min), abs(self.p_max))


def integrate(values: np.ndarray, grid: PhaseSpaceGrid) -> float:
    return float(np.trapezoid(np.trapezoid(values, dx=grid.dp, axis=1), dx=grid.dx))


@dataclass
class WignerField:
    grid: PhaseSpaceGrid
    values: np.ndarray
    mode_label: str
    normalization_defect: float = field(init=False)
    method: str = ""

    def __post_init__(self):
        if self.mode_label not in MODES:
            raise ValidationError(f"mode_label must be one of {MODES}")
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.nx, self.grid.ny):
            raise ValidationError("values shape does not match grid")
        self.normalization_defect = abs(1.0 - integrate(self.values, self.grid))

    def at(self, alpha: complex) -> float:
        """Bicubic interpolation at one phase-space point."""
        g = self.grid
        ix = (alpha.real - g.x_min) / g.dx
        ip = (alpha.imag - g.p_min) / g.dp
        return float(ndimage.map_coordinates(self.values, [[ix], [ip]], order=3, mode="nearest")[0])


def _real_part(values: np.ndarray) -> np.ndarray:
    resid = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if resid > IMAG_TOL:
        raise ImaginaryResidue(f"imaginary residue {resid:.3g} exceeds {IMAG_TOL}")
    return values.real.copy()


def _check_mode(mode: str):
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")


def _check_propagator(p: PropagatorCoeffs):
    d = max_defect(p)
    if not d < DEFECT_TOL:
        raise IllConditionedPropagator(f"commutator defect {d:.3g} exceeds {DEFECT_TOL}")


def _mode_rows(mode: str, p: PropagatorCoeffs):
    _check_mode(mode)
    if mode == "mode1":
        return p.k1, p.k2, p.k3, p.k4
    return p.m1, p.m2, p.m3, p.m4


def lambda_map(mode: str, p: PropagatorCoeffs):
    """Coefficients ``(a1, b1, a3, b3)`` with ``l_j = a_j u + b_j v``."""
    c1, c2, c3, c4 = _mode_rows(mode, p)
    return (
        np.conj(c1) - c2,
        1j * (np.conj(c1) + c2),
        np.conj(c3) - c4,
        1j * (np.conj(c3) + c4),
    )


def quadratic_form(mode: str, p: PropagatorCoeffs) -> np.ndarray:
    """Real 2x2 matrix A with ``|l1|^2 + |l3|^2 = (u, v) A (u, v)^T``."""
    a1, b1, a3, b3 = lambda_map(mode, p)
    A = np.zeros((2, 2))
    for a, b in ((a1, b1), (a3, b3)):
        A[0, 0] += abs(a) ** 2
        A[1, 1] += abs(b) ** 2
        A[0, 1] += (a * np.conj(b)).real
    A[1, 0] = A[0, 1]
    return A


def reduced_characteristic(mode: str, beta, p: PropagatorCoeffs, inp: st.TwoModeInput):
    """``Tr[rho exp(beta a^+(z) - beta^* a(z))]`` for the chosen output mode."""
    _check_mode(mode)
    _check_propagator(p)
    c1, c2, c3, c4 = _mode_rows(mode, p)
    beta = np.asarray(beta, dtype=complex)
    bc = np.conj(beta)
    lam1 = beta * np.conj(c1) - bc * c2
    lam3 = beta * np.conj(c3) - bc * c4
    return st.characteristic(inp.mode1, lam1) * st.characteristic(inp.mode3, lam3)


def output_centers(mode: str, p: PropagatorCoeffs, inp: st.TwoModeInput) -> np.ndarray:
    """Propagated midpoints ``(a_i + a_j)/2`` of every dyadic pair."""
    c1, c2, c3, c4 = _mode_rows(mode, p)
    out = []
    for t1 in st.dyadics(inp.mode1):
        for t3 in st.dyadics(inp.mode3):
            u = 0.5 * (t1.left + t1.right)
            w = 0.5 * (t3.left + t3.right)
            out.append(c1 * u + c2 * np.conj(u) + c3 * w + c4 * np.conj(w))
    return np.array(out)


def beta_sampling(mode, grid: PhaseSpaceGrid, p, inp, beta_extent=None):
    """Extent and spacing of the beta grid for the Fourier sum.

    Extent: each dyadic pair's |chi| is bounded by a Gaussian of unit width in
    (l1, l3) centred at ``(a_j - a_i)`` per mode, which with the smallest
    eigenvalue of A gives the radius beyond which |chi| < 1e-13.
    Spacing: periodic images of the field sit at ``pi / d_beta``; they must
    clear the window plus the field's support (centres plus 7.5 sigma).
    """
    A = quadratic_form(mode, p)
    ev = np.linalg.eigvalsh(A)
    if ev[0] <= 0:
        raise NonPositiveDefiniteForm("beta -> (l1, l3) map is singular")
    t1s, t3s = st.dyadics(inp.mode1), st.dyadics(inp.mode3)
    dmax = max(math.hypot(abs(a.right - a.left), abs(b.right - b.left)) for a in t1s for b in t3s)
    wsum = sum(abs(a.weight) for a in t1s) * sum(abs(b.weight) for b in t3s)
    if beta_extent is None:
        beta_extent = (dmax + math.sqrt(2 * math.log(wsum * 1e13))) / math.sqrt(ev[0])
    support = float(np.max(np.abs(output_centers(mode, p, inp)))) + math.sqrt(14.5 * ev[1])
    step = math.pi / (grid.max_abs + support)
    n = 2 * math.ceil(beta_extent / step) + 1
    if n > MAX_BETA_POINTS:
        raise NumericalError(f"beta grid would need {n} points per axis (limit {MAX_BETA_POINTS})")
    return float(beta_extent), n


def wigner_transform_path(mode, grid: PhaseSpaceGrid, p, inp, beta_extent=None, n_beta=None) -> WignerField:
    """Sampled characteristic function followed by an explicit 2D DFT.

    The kernel ``beta^* alpha - beta alpha^* = 2i (u p - v x)`` separates, so
    the transform onto an arbitrary rectangular alpha grid is two matrix
    products. ``beta_extent`` defaults to an automatic bound; an explicit value
    is checked against the |chi| < 1e-12 boundary condition.
    """
    _check_mode(mode)
    extent, n = beta_sampling(mode, grid, p, inp, beta_extent)
    if n_beta is not None:
        n = int(n_beta)
    u = np.linspace(-extent, extent, n)
    h = u[1] - u[0]
    beta = u[:, None] + 1j * u[None, :]
    chi = reduced_characteristic(mode, beta, p, inp)
    edge = max(np.abs(chi[0]).max(), np.abs(chi[-1]).max(), np.abs(chi[:, 0]).max(), np.abs(chi[:, -1]).max())
    if edge >= BOUNDARY_TOL:
        raise InsufficientBetaExtent(f"|chi| = {edge:.3g} at beta extent {extent:.3g}")
    Ep = np.exp(2j * np.outer(u, grid.ps))  # (u, p)
    Ex = np.exp(-2j * np.outer(u, grid.xs))  # (v, x)
    W = Ex.T @ (chi.T @ Ep) * (h * h / math.pi**2)
    return WignerField(grid, _real_part(W), mode, method="transform")


def _gaussian_sum(mode, xs, ps, p, inp) -> np.ndarray:
    """Evaluate the Gaussian-sum Wigner function on broadcastable ``xs``, ``ps``."""
    _check_mode(mode)
    _check_propagator(p)
    A = quadratic_form(mode, p)
    ev = np.linalg.eigvalsh(A)
    if not ev[0] > 1e-12 * max(ev[1], 1.0):
        raise NonPositiveDefiniteForm(f"quadratic form eigenvalues {ev}")
    Ainv = np.linalg.inv(A)
    pref = 2.0 / (math.pi * math.sqrt(np.linalg.det(A)))
    a1, b1, a3, b3 = lambda_map(mode, p)
    # -k^T A^-1 k / 2 with k = (2p, -2x)
    env = -2.0 * (Ainv[0, 0] * ps**2 - 2 * Ainv[0, 1] * ps * xs + Ainv[1, 1] * xs**2)
    W = np.zeros(np.broadcast(xs, ps).shape, dtype=complex)
    for t1 in st.dyadics(inp.mode1):
        for t3 in st.dyadics(inp.mode3):
            # linear coefficients of l a_j^* - l^* a_i, summed over both modes
            hu = a1 * np.conj(t1.right) - np.conj(a1) * t1.left + a3 * np.conj(t3.right) - np.conj(a3) * t3.left
            hv = b1 * np.conj(t1.right) - np.conj(b1) * t1.left + b3 * np.conj(t3.right) - np.conj(b3) * t3.left
            c = st.dyadic_log_characteristic(t1, 0j) + st.dyadic_log_characteristic(t3, 0j)
            hvec = np.array([hu, hv])
            g = Ainv @ hvec
            const = c + 0.5 * hvec @ g
            # i k^T A^-1 h = 2i (p g0 - x g1)
            W += np.exp(const + 2j * (ps * g[0] - xs * g[1]) + env)
    return _real_part(W * pref)


def wigner_gaussian_sum_path(mode, grid: PhaseSpaceGrid, p, inp) -> WignerField:
    """Closed-form Gaussian integral for every pair of input dyadics.

    For a pair the integrand is ``exp(-(u,v) A (u,v)^T / 2 + h.(u,v) + c)``
    times the Fourier kernel ``exp(i k.(u,v))`` with ``k = (2p, -2x)``, so

        W = (2 / (pi sqrt(det A))) exp(c + (h + ik)^T A^-1 (h + ik) / 2).

    A is shared by all pairs; only h and c change.
    """
    values = _gaussian_sum(mode, grid.xs[:, None], grid.ps[None, :], p, inp)
    return WignerField(grid, values, mode, method="gaussian")


def wigner_points(mode, alpha, p, inp) -> np.ndarray:
    """Gaussian-sum Wigner values at arbitrary phase-space points."""
    alpha = np.asarray(alpha, dtype=complex)
    return _gaussian_sum(mode, alpha.real, alpha.imag, p, inp)


def support_radius(mode, p, tail: float = 16.0) -> float:
    """Distance from a lobe centre beyond which every term is below e^-tail."""
    lam_max = np.linalg.eigvalsh(quadratic_form(mode, p))[1]
    return math.sqrt(tail * lam_max / 2.0)


def grid_covers(grid: PhaseSpaceGrid, mode, p, inp, tail: float = 16.0) -> bool:
    """True if every propagated lobe plus its Gaussian tail lies inside the grid."""
    r = support_radius(mode, p, tail)
    c = output_centers(mode, p, inp)
    return bool(
        np.all(c.real - r >= grid.x_min)
        and np.all(c.real + r <= grid.x_max)
        and np.all(c.imag - r >= grid.p_min)
        and np.all(c.imag + r <= grid.p_max)
    )


def wigner_field(mode, grid, p, inp, method="gaussian", beta_extent=None) -> WignerField:
    if method == "gaussian":
        try:
            return wigner_gaussian_sum_path(mode, grid, p, inp)
        except NonPositiveDefiniteForm:
            return wigner_transform_path(mode, grid, p, inp, beta_extent)
    if method == "transform":
        return wigner_transform_path(mode, grid, p, inp, beta_extent)
    raise ValidationError(f"unknown analytic method {method!r}")


# ---------------------------------------------------------------------------
# metrics


def _require_normalized(w: WignerField):
    if not w.normalization_defect < 1e-2:
        raise ValidationError(
            f"normalization defect {w.normalization_defect:.3g}: grid does not cover the state's support"
        )


def negativity_volume(w: WignerField) -> float:
    """``\\int |W| - 1``; zero for nonnegative fields.

    Evaluated as ``\\int |W| - \\int W`` (twice the negative mass), which is the
    same quantity for a normalized field but does not pick up the grid
    truncation error of the total integral.
    """
    _require_normalized(w)
    return integrate(np.abs(w.values), w.grid) - integrate(w.values, w.grid)


def marginal(w: WignerField, axis: str = "x"):
    """Quadrature density along ``axis`` (the other axis is integrated out).

    Returns ``(coords, density)``.
    """
    _require_normalized(w)
    if axis == "x":
        return w.grid.xs, np.trapezoid(w.values, dx=w.grid.dp, axis=1)
    if axis == "p":
        return w.grid.ps, np.trapezoid(w.values, dx=w.grid.dx, axis=0)
    raise ValidationError("axis must be 'x' or 'p'")


def local_maxima(values: np.ndarray, threshold: float) -> list[tuple[int, int]]:
    """Interior strict-neighbourhood maxima above ``threshold``, strongest first."""
    peak = ndimage.maximum_filter(values, size=3, mode="constant", cval=-np.inf)
    mask = (values == peak) & (values > threshold)
    mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = False
    idx = np.argwhere(mask)
    order = np.argsort(-values[mask])
    return [tuple(int(v) for v in idx[i]) for i in order]


def negativity_regions(w: WignerField, rel_tol: float = 1e-3) -> int:
    """Number of connected regions where W < -rel_tol * max W."""
    _, n = ndimage.label(w.values < -rel_tol * w.values.max())
    return int(n)


LOBE_SMOOTHING = 0.5
LOBE_MIN_SEPARATION = 1.0


def find_lobes(w: WignerField, rel_threshold: float = 0.1) -> list[complex]:
    """Positions of the coherent lobes, strongest first.

    Interference fringes are removed by Gaussian smoothing (width 0.5 in
    alpha units, the coherent-state width scale) before peak picking, so the
    central fringe of a cat is not mistaken for a lobe. Peaks closer than
    ``LOBE_MIN_SEPARATION`` to a stronger one are dropped.
    """
    g = w.grid
    sm = ndimage.gaussian_filter(w.values, (LOBE_SMOOTHING / g.dx, LOBE_SMOOTHING / g.dp), mode="constant")
    lobes = []
    for i, j in local_maxima(sm, rel_threshold * sm.max()):
        z = complex(g.xs[i], g.ps[j])
        # plateaus and shoulders of one lobe collapse onto the strongest point
        if all(abs(z - q) >= LOBE_MIN_SEPARATION for q in lobes):
            lobes.append(z)
    return lobes


def fringe_section(w: WignerField, n_samples: int = 801):
    lobes = find_lobes(w)
    if len(lobes) < 2:
        raise NoLobesFound(f"found {len(lobes)} lobe(s); visibility needs two")
    a, b = lobes[0], lobes[1]
    mid, axis = 0.5 * (a + b), b - a
    normal = 1j * axis / abs(axis)
    s = np.linspace(-0.25 * abs(axis), 0.25 * abs(axis), n_samples)
    pts = mid + s * normal
    g = w.grid
    coords = [(pts.real - g.x_min) / g.dx, (pts.imag - g.p_min) / g.dp]
    vals = ndimage.map_coordinates(w.values, coords, order=3, mode="constant", cval=0.0)
    return s, vals, (a, b)


def fringe_visibility(w: WignerField) -> float:
    """Contrast ``(max - min) / (max + |min|)`` across the interference region.

    The section runs through the midpoint of the two strongest lobes,
    perpendicular to the line joining them, over a quarter of their separation
    to each side.
    """
    _require_normalized(w)
    _, vals, _ = fringe_section(w)
    hi, lo = float(vals.max()), float(vals.min())
    return (hi - lo) / (hi + abs(lo))


def field_stats(w: WignerField) -> dict:
    g = w.grid
    imin = np.unravel_index(np.argmin(w.values), w.values.shape)
    imax = np.unravel_index(np.argmax(w.values), w.values.shape)
    return {
        "min": float(w.values[imin]),
        "max": float(w.values[imax]),
        "argmin": [float(g.xs[imin[0]]), float(g.ps[imin[1]])],
        "argmax": [float(g.xs[imax[0]]), float(g.ps[imax[1]])],
        "normalization_defect": float(w.normalization_defect),
    }


# ---------------------------------------------------------------------------
# moment transport


def input_moment_matrix(inp: st.TwoModeInput):
    """Mean vector and second-moment matrix ``<v_k v_l>`` of ``v = (a1, a1^+, a3, a3^+)``."""
    blocks, means = [], []
    for s in (inp.mode1, inp.mode3):
        m = st.normal_moments(s)
        means.append(np.array([m["a"], np.conj(m["a"])]))
        blocks.append(np.array([[m["aa"], m["ada"] + 1], [m["ada"], np.conj(m["aa"])]]))
    mu = np.concatenate(means)
    S = np.outer(mu, mu).astype(complex)
    S[:2, :2] = blocks[0]
    S[2:, 2:] = blocks[1]
    return mu, S


def transport_moments(p: PropagatorCoeffs, inp: st.TwoModeInput) -> dict[str, dict[str, complex]]:
    """Output ``<a>``, ``<a^2>``, ``<a^+ a>`` of both modes through the linear map."""
    T = p.as_matrix()
    mu, S = input_moment_matrix(inp)
    out = {}
    for name, r in (("mode1", 0), ("mode3", 2)):
        out[name] = {
            "a": complex(T[r] @ mu),
            "aa": complex(T[r] @ S @ T[r]),
            "ada": complex(T[r + 1] @ S @ T[r]),
        }
    return out
