"""Self-check suites behind ``ppcat verify``.

Each suite returns ``(passed, detail)``; failures are report content, not
exceptions. ``coeffs_fn`` is injectable so a deliberately broken propagator
can be shown to trip the commutator suite.
"""
from __future__ import annotations

import json
import time
from typing import Callable

import numpy as np

from . import fock_oracle as fo
from . import states as st
from . import wigner as wg
from .errors import NumericalError
from .propagator import CouplingConfig, coeffs_ode, commutator_defects, propagator_coeffs

CoeffsFn = Callable[[CouplingConfig], "object"]

COMMUTATOR_TOL = 1e-10
ODE_REL_TOL = 1e-8
DUAL_PATH_TOL = 1e-6
NORM_TOL = 1e-3
ORACLE_TOL = 1e-4
MOMENT_TOL = 1e-6


def _random_configs(n, seed, zmax=2.0, gmax=0.99):
    rng = np.random.default_rng(seed)
    return [
        CouplingConfig(float(z), float(g), float(ph))
        for z, g, ph in zip(rng.uniform(0, zmax, n), rng.uniform(0, gmax, n), rng.uniform(0, 2 * np.pi, n))
    ]


def suite_identity(coeffs_fn, level):
    worst = 0.0
    for c in _random_configs(100, 1, zmax=0.0, gmax=1.5):
        a = coeffs_fn(c).as_array()
        worst = max(worst, float(np.max(np.abs(a - [1, 0, 0, 0, 0, 0, 1, 0]))))
    return worst < 1e-12, {"max_error": worst}


def suite_commutators(coeffs_fn, level):
    worst = 0.0
    for c in _random_configs(100 if level == "fast" else 1000, 2):
        worst = max(worst, max(abs(d) for d in commutator_defects(coeffs_fn(c))))
    return worst < COMMUTATOR_TOL, {"max_defect": worst}


def suite_ode(coeffs_fn, level):
    zetas = (0.5, 1.2, 2.0) if level == "fast" else np.round(np.arange(1, 21) * 0.1, 10)
    worst = 0.0
    for z in zetas:
        for g in (0.0, 0.5, 0.9, 0.99):
            for ph in (0.0, np.pi / 4):
                c = CouplingConfig(float(z), g, ph)
                a, b = coeffs_fn(c).as_array(), coeffs_ode(c).as_array()
                den = np.abs(b)
                err = np.where(den > 0, np.abs(a - b) / np.where(den > 0, den, 1.0), np.abs(a - b))
                worst = max(worst, float(err.max()))
    return worst < ODE_REL_TOL, {"max_relative_error": worst}


def suite_dual_path(coeffs_fn, level):
    if level == "fast":
        cases, grid, cfgs = ("V", "VI", "IX"), wg.PhaseSpaceGrid(nx=64, ny=64), [(0.9, 0.9)]
    else:
        cases, grid = tuple(st.CASES), wg.PhaseSpaceGrid()
        cfgs = [(z, g) for z in (0.0, 0.9) for g in (0.5, 0.9)]
    a = 2.0 * np.exp(1j * np.pi / 3)
    worst = 0.0
    for case in cases:
        inp = st.TwoModeInput.from_case(case, a, a)
        for z, g in cfgs:
            p = coeffs_fn(CouplingConfig(z, g))
            for mode in wg.MODES:
                w1 = wg.wigner_gaussian_sum_path(mode, grid, p, inp)
                w2 = wg.wigner_transform_path(mode, grid, p, inp)
                worst = max(worst, float(np.max(np.abs(w1.values - w2.values))))
    return worst < DUAL_PATH_TOL, {"max_sup_norm": worst}


def suite_normalization(coeffs_fn, level):
    grid = wg.PhaseSpaceGrid()
    worst, covered = 0.0, 0
    for case in st.CASES:
        inp = st.TwoModeInput.from_case(case, 1.2, 1.2j)
        for z, g in ((0.0, 0.9), (0.3, 0.5), (0.6, 0.9)):
            p = coeffs_fn(CouplingConfig(z, g))
            for mode in wg.MODES:
                if not wg.grid_covers(grid, mode, p, inp):
                    continue
                covered += 1
                worst = max(worst, wg.wigner_field(mode, grid, p, inp).normalization_defect)
    cat0 = wg.wigner_points("mode1", 0j, coeffs_fn(CouplingConfig(0.0, 0.9)), st.TwoModeInput.from_case("V", 2.0))
    cat_err = abs(float(cat0) - 2 / np.pi)
    return worst < NORM_TOL and cat_err < 1e-9, {"fields": covered, "max_defect": worst, "cat_origin_error": cat_err}


def suite_moments(coeffs_fn, level):
    worst = 0.0
    zetas = (0.6,) if level == "fast" else (0.3, 0.9)
    for case in ("II", "III", "V", "VI"):
        inp = st.TwoModeInput.from_case(case, np.sqrt(2) * np.exp(0.4j), np.sqrt(2) * np.exp(-1.1j))
        for z in zetas:
            p = coeffs_fn(CouplingConfig(z, 0.9))
            state = fo.evolve_converged(inp, z, 0.9)
            ref, got = fo.oracle_moments(state), wg.transport_moments(p, inp)
            for mode in wg.MODES:
                for key in ("a", "aa", "ada"):
                    worst = max(worst, abs(ref[mode][key] - got[mode][key]))
    return worst < MOMENT_TOL, {"max_error": worst}


def suite_oracle(coeffs_fn, level):
    if level == "fast":
        runs = [("V", 0.5, 0.4)]
    else:
        runs = [("V", 2.0, 0.9), ("IX", 2.0, 0.9)]
    grid = wg.PhaseSpaceGrid.square(4.0, 128 if level == "full" else 64)
    worst, cutoffs = 0.0, []
    for case, n0, z in runs:
        a = np.sqrt(n0) * np.exp(1j * np.pi / 3)
        inp = st.TwoModeInput.from_case(case, a, a)
        state = fo.evolve_converged(inp, z, 0.9)
        cutoffs.append(list(state.cutoffs))
        p = coeffs_fn(CouplingConfig(z, 0.9))
        for mode in wg.MODES:
            ref = fo.oracle_wigner(state, mode, grid).values
            got = wg.wigner_gaussian_sum_path(mode, grid, p, inp).values
            worst = max(worst, float(np.max(np.abs(ref - got))))
    return worst < ORACLE_TOL, {"max_sup_norm": worst, "cutoffs": cutoffs}


SUITES = {
    "identity": suite_identity,
    "commutators": suite_commutators,
    "closed_form_vs_ode": suite_ode,
    "dual_path": suite_dual_path,
    "normalization": suite_normalization,
    "moment_transport": suite_moments,
    "fock_oracle": suite_oracle,
}


def verify(level: str = "fast", coeffs_fn: CoeffsFn = propagator_coeffs, suites=None) -> dict:
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    report = {"level": level, "suites": []}
    t_all = time.perf_counter()
    for name in suites or SUITES:
        t0 = time.perf_counter()
        try:
            ok, detail = SUITES[name](coeffs_fn, level)
        except (NumericalError, ValueError, ArithmeticError) as err:
            ok, detail = False, {"error": f"{type(err).__name__}: {err}"}
        report["suites"].append(
            {"name": name, "passed": bool(ok), "seconds": round(time.perf_counter() - t0, 3), **detail}
        )
    report["passed"] = all(s["passed"] for s in report["suites"])
    report["seconds"] = round(time.perf_counter() - t_all, 3)
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, default=str)
