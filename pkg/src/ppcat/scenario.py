"""Scenario description, file outputs, single runs and parameter sweeps."""
from __future__ import annotations

import dataclasses
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fock_oracle as fo
from . import states as st
from . import wigner as wg
from .errors import NoLobesFound, NumericalError, ValidationError
from .propagator import CouplingConfig, propagator_coeffs

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

METHODS = ("gaussian", "transform", "fock")
OUTPUT_KINDS = ("grid_csv", "image_pgm", "metrics_json")
FOCK_MAX_PHOTONS = 2.0

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"


def _parse_magnitude(text: str) -> float:
    m = re.fullmatch(rf"sqrt\(?\s*({_NUM})\s*\)?", text)
    if m:
        return math.sqrt(float(m.group(1)))
    if re.fullmatch(_NUM, text):
        return float(text)
    raise ValidationError(f"cannot parse magnitude {text!r}")


def _parse_phase(text: str) -> float:
    m = re.fullmatch(rf"([+-]?)({_NUM})?\*?pi(?:/({_NUM}))?", text)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        num = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        return sign * num * math.pi / den
    if re.fullmatch(_NUM, text):
        return float(text)
    raise ValidationError(f"cannot parse phase {text!r}")


def parse_amplitude(text) -> complex:
    """``sqrt12@pi/3`` -> sqrt(12) e^{i pi/3}; also ``a+bi`` literals and plain numbers."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = str(text).strip().replace(" ", "")
    if "@" in s:
        mag, phase = s.split("@", 1)
        return _parse_magnitude(mag) * complex(math.cos(_parse_phase(phase)), math.sin(_parse_phase(phase)))
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        return complex(_parse_magnitude(s))


def format_amplitude(a: complex) -> str:
    return f"{a.real:.17g}{a.imag:+.17g}i"


@dataclass
class Scenario:
    case: str | None = "IV"
    zeta: float = 0.0
    gamma: float = 0.9
    phi2: float = 0.0
    alpha1: complex = 0j
    alpha3: complex = 0j
    state1: str | None = None  # custom inputs when case is None
    state3: str | None = None
    mode: str = "both"
    grid: wg.PhaseSpaceGrid = field(default_factory=wg.PhaseSpaceGrid)
    method: str = "gaussian"
    outputs: tuple = OUTPUT_KINDS
    beta_extent: float | None = None
    cutoffs: tuple | None = None
    force: bool = False
    name: str | None = None

    def __post_init__(self):
        self.alpha1 = parse_amplitude(self.alpha1)
        self.alpha3 = parse_amplitude(self.alpha3)
        if self.case is not None:
            self.case = str(self.case).upper()
        if self.mode not in ("mode1", "mode3", "both"):
            raise ValidationError(f"mode must be mode1, mode3 or both, got {self.mode!r}")
        if self.method not in METHODS:
            raise ValidationError(f"method must be one of {METHODS}, got {self.method!r}")
        bad = set(self.outputs) - set(OUTPUT_KINDS)
        if bad:
            raise ValidationError(f"unknown outputs {sorted(bad)}")
        self.outputs = tuple(self.outputs)
        if self.method == "fock" and not self.force:
            for a in (self.alpha1, self.alpha3):
                if abs(a) ** 2 > FOCK_MAX_PHOTONS:
                    raise ValidationError(
                        f"fock method limited to |alpha|^2 <= {FOCK_MAX_PHOTONS} (got {abs(a) ** 2:.3g}); use --force"
                    )
        self.two_mode_input()  # validates case/state consistency
        self.coupling()

    @property
    def modes(self) -> tuple[str, ...]:
        return wg.MODES if self.mode == "both" else (self.mode,)

    def coupling(self) -> CouplingConfig:
        return CouplingConfig(self.zeta, self.gamma, self.phi2)

    def two_mode_input(self) -> st.TwoModeInput:
        if self.case is not None:
            return st.TwoModeInput.from_case(self.case, self.alpha1, self.alpha3)
        if self.state1 is None or self.state3 is None:
            raise ValidationError("custom scenarios need state1 and state3")
        try:
            return st.TwoModeInput(st.ModeState(self.state1, self.alpha1), st.ModeState(self.state3, self.alpha3))
        except ValueError as err:
            raise ValidationError(str(err)) from err

    def stem(self) -> str:
        if self.name:
            return self.name
        label = f"case{self.case}" if self.case else f"{self.state1}-{self.state3}"
        return f"{label}_z{self.zeta:g}_g{self.gamma:g}"

    def describe(self) -> dict:
        return {
            "case": self.case,
            "state1": self.two_mode_input().mode1.kind.value,
            "state3": self.two_mode_input().mode3.kind.value,
            "alpha1": format_amplitude(self.alpha1),
            "alpha3": format_amplitude(self.alpha3),
            "zeta": self.zeta,
            "gamma": self.gamma,
            "phi2": self.phi2,
            "method": self.method,
            "range": [self.grid.x_min, self.grid.x_max, self.grid.p_min, self.grid.p_max],
            "grid": [self.grid.nx, self.grid.ny],
        }

    @classmethod
    def from_mapping(cls, data: dict) -> "Scenario":
        data = dict(data)
        grid_kw = {}
        if "range" in data:
            grid_kw.update(zip(("x_min", "x_max", "p_min", "p_max"), map(float, data.pop("range"))))
        if "grid" in data:
            grid_kw.update(zip(("nx", "ny"), map(int, data.pop("grid"))))
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValidationError(f"unknown scenario keys {sorted(unknown)}")
        if grid_kw:
            data["grid"] = wg.PhaseSpaceGrid(**grid_kw)
        if "outputs" in data:
            data["outputs"] = tuple(data["outputs"])
        if data.get("cutoffs") is not None:
            data["cutoffs"] = tuple(int(c) for c in data["cutoffs"])
        return cls(**data)


def load_config(path) -> dict:
    with open(path, "rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as err:
            raise ValidationError(f"{path}: {err}") from err


# ---------------------------------------------------------------------------
# file formats


def write_grid_csv(path, w: wg.WignerField):
    g = w.grid
    lines = [
        "# convention: alpha=x+ip, integral dx dp",
        f"# x: {g.x_min:.17g} {g.x_max:.17g} {g.nx}",
        f"# p: {g.p_min:.17g} {g.p_max:.17g} {g.ny}",
        f"# mode: {w.mode_label}",
    ]
    lines += [",".join(f"{v:.17g}" for v in row) for row in w.values]
    Path(path).write_text("\n".join(lines) + "\n")


def read_grid_csv(path) -> wg.WignerField:
    header, rows, mode = {}, [], "mode1"
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, rest = line[1:].partition(":")
            key = key.strip()
            if key in ("x", "p"):
                lo, hi, n = rest.split()
                header[key] = (float(lo), float(hi), int(n))
            elif key == "mode":
                mode = rest.strip()
        elif line.strip():
            rows.append([float(v) for v in line.split(",")])
    (x0, x1, nx), (p0, p1, ny) = header["x"], header["p"]
    return wg.WignerField(wg.PhaseSpaceGrid(x0, x1, p0, p1, nx, ny), np.array(rows), mode)


def write_pgm(path, w: wg.WignerField) -> tuple[float, float]:
    """8-bit binary greyscale, x to the right, p upward; linear in [min, max]."""
    v = w.values
    lo, hi = float(v.min()), float(v.max())
    scale = 255.0 / (hi - lo) if hi > lo else 0.0
    img = np.round((v - lo) * scale).astype(np.uint8).T[::-1]
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w.grid.nx} {w.grid.ny}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
    return lo, hi


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValidationError("not a binary PGM")
    width, height = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(height, width)


# ---------------------------------------------------------------------------
# running


def compute_fields(s: Scenario) -> dict[str, wg.WignerField]:
    inp = s.two_mode_input()
    if s.method == "fock":
        start = s.cutoffs or (30, 30)
        state = fo.evolve_converged(inp, s.zeta, s.gamma, s.phi2, start=start)
        return {m: fo.oracle_wigner(state, m, s.grid) for m in s.modes}
    p = propagator_coeffs(s.coupling())
    return {m: wg.wigner_field(m, s.grid, p, inp, s.method, s.beta_extent) for m in s.modes}


def field_metrics(w: wg.WignerField) -> dict:
    out = wg.field_stats(w)
    out["negativity_volume"] = None
    out["fringe_visibility"] = None
    notes = []
    if w.normalization_defect < 1e-2:
        out["negativity_volume"] = wg.negativity_volume(w)
        out["negativity_regions"] = wg.negativity_regions(w)
        try:
            out["fringe_visibility"] = wg.fringe_visibility(w)
        except NoLobesFound as err:
            notes.append(str(err))
    else:
        notes.append("grid does not cover the field's support; widen --range")
    if notes:
        out["notes"] = notes
    return out


def run_scenario(s: Scenario, out_dir=None) -> dict:
    """Compute the requested fields, write the chosen outputs, return the metrics record."""
    try:
        fields_ = compute_fields(s)
    except (NumericalError, ValidationError) as err:
        raise type(err)(f"[{s.stem()}] {err}") from err
    record = {"scenario": s.describe(), "fields": {}}
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    files = []
    for mode, w in fields_.items():
        m = field_metrics(w)
        record["fields"][mode] = m
        if out is None:
            continue
        base = f"{s.stem()}_{mode}"
        if "grid_csv" in s.outputs:
            write_grid_csv(out / f"{base}.csv", w)
            files.append(str(out / f"{base}.csv"))
        if "image_pgm" in s.outputs:
            lo, hi = write_pgm(out / f"{base}.pgm", w)
            m["image_range"] = [lo, hi]
            files.append(str(out / f"{base}.pgm"))
    if out is not None and "metrics_json" in s.outputs:
        path = out / f"{s.stem()}_metrics.json"
        path.write_text(json.dumps(record, indent=2) + "\n")
        files.append(str(path))
    record["files"] = files
    return record


SWEEP_PARAMS = ("zeta", "gamma")


def run_sweep(s: Scenario, param: str, values, out_dir=None) -> list[dict]:
    """One metrics row per parameter value, in input order."""
    if param not in SWEEP_PARAMS:
        raise ValidationError(f"sweep parameter must be one of {SWEEP_PARAMS}")
    values = list(values)
    if not values:
        raise ValidationError("sweep needs at least one value")
    rows = []
    for v in values:
        sv = dataclasses.replace(s, **{param: float(v)}, outputs=())
        rec = run_scenario(sv)
        for mode, m in rec["fields"].items():
            rows.append(
                {
                    param: float(v),
                    "mode": mode,
                    "negativity_volume": m["negativity_volume"],
                    "fringe_visibility": m["fringe_visibility"],
                    "normalization_defect": m["normalization_defect"],
                    "min": m["min"],
                    "max": m["max"],
                }
            )
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        cols = list(rows[0])
        lines = [",".join(cols)]
        for r in rows:
            lines.append(",".join("" if r[c] is None else (r[c] if isinstance(r[c], str) else f"{r[c]:.17g}") for c in cols))
        (out / f"{s.stem()}_sweep_{param}.csv").write_text("\n".join(lines) + "\n")
    return rows
