"""Scenario-driven command line front end.

One JSON config describes one experiment; the output is a machine-readable
record (JSON) or a sweep table (CSV).  Numbers are printed with 17
significant digits so records round-trip losslessly, and nothing here is
stochastic or clocked: identical configs produce byte-identical output.

Exit codes: 0 success, 2 config/schema violation, 3 numerical-guard failure.
"""

from __future__ import annotations

import argparse
import copy
import dataclasses
import hashlib
import json
import math
import sys
from dataclasses import dataclass

import jsonschema
import numpy as np

from . import __version__
from .adiabatic import Schedule, degenerate_record, propagate
from .connections import connection_analytic, connection_numeric, oracle_comparison_block
from .flux import (
    GaussianFlux,
    circulation,
    flux_field,
    to_displacement,
    to_shift,
    validity,
    vector_potential,
)
from .fock import (
    FockBasis,
    NumericalGuardError,
    ParameterPoint,
    build_basis,
    commutator_defect,
    ladder_a,
    ladder_b,
)
from .holonomy import (
    ParameterPath,
    abelian_phase,
    circle_x1x2,
    commuting_closed_form,
    flux_loop_phase,
    nonabelian_holonomy,
    rectangle_x2_lnb,
    signed_area,
)
from .operators import HamiltonianKind, b_embedding, displacement, eigenstate, hamiltonian, squeeze

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GUARD = 3

SCENARIOS = (
    "connections",
    "abelian-loop",
    "nonabelian-loop",
    "flux-ab",
    "adiabatic",
    "squeezed-connections",
    "validate-all",
)

#: fixed sweep columns per scenario (order is the CSV column order)
SWEEP_COLUMNS = {
    "connections": ["oracle_max_error", "anti_hermiticity_defect"],
    "squeezed-connections": ["oracle_max_error", "anti_hermiticity_defect"],
    "abelian-loop": ["gamma", "signed_area", "richardson_estimate"],
    "nonabelian-loop": ["sigma", "closed_form_max_diff", "richardson_estimate"],
    "flux-ab": ["gamma", "magnitude", "closed_form_magnitude", "relative_error"],
    "adiabatic": [
        "geometric_phase",
        "total_phase",
        "dynamical_phase",
        "population_drift",
        "norm_drift",
    ],
    "validate-all": ["passed", "failed"],
}


class ConfigError(ValueError):
    """Configuration violates the published schema or scenario contract."""


_NUM = {"type": "number"}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["scenario", "basis"],
    "properties": {
        "scenario": {"enum": list(SCENARIOS)},
        "basis": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n_max", "m_max"],
            "properties": {
                "n_max": {"type": "integer", "minimum": 1},
                "m_max": {"type": "integer", "minimum": 1},
            },
        },
        "point": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"X1": _NUM, "X2": _NUM, "B": _NUM, "r": _NUM, "theta": _NUM},
        },
        "parameters": {
            "type": "array",
            "minItems": 1,
            "items": {"enum": ["X1", "X2", "B", "r", "theta"]},
        },
        "path": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["circle", "rectangle", "points"]},
                "radius": _NUM,
                "center": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
                "segments": {"type": "integer", "minimum": 3},
                "ccw": {"type": "boolean"},
                "B": _NUM,
                "x2_range": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
                "lnb_range": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
                "segments_per_side": {"type": "integer", "minimum": 1},
                "X1": _NUM,
                "points": {
                    "type": "array",
                    "minItems": 3,
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "properties": {
                            "X1": _NUM,
                            "X2": _NUM,
                            "B": _NUM,
                            "r": _NUM,
                            "theta": _NUM,
                        },
                    },
                },
            },
            "required": ["kind"],
        },
        "flux": {
            "type": "object",
            "additionalProperties": False,
            "required": ["Phi0", "Delta"],
            "properties": {"Phi0": _NUM, "Delta": _NUM, "x0": _NUM, "y0": _NUM},
        },
        "B": _NUM,
        "R": _NUM,
        "level_n": {"type": "integer", "minimum": 0},
        "k_segments": {"type": "integer", "minimum": 100},
        "schedule": {
            "type": "object",
            "additionalProperties": False,
            "required": ["path", "total_time"],
            "properties": {
                "path": {"$ref": "#/properties/path"},
                "total_time": _NUM,
                "time_profile": {"enum": ["linear", "smoothstep"]},
                "dt": _NUM,
            },
        },
        "degenerate_f": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
        },
        "numerics": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "segments": {"type": "integer", "minimum": 3},
                "fd_step": _NUM,
                "kappa": _NUM,
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"format": {"enum": ["json", "csv"]}, "path": {"type": "string"}},
        },
    },
}


# --------------------------------------------------------------------------
# canonical serialization: 17 significant digits, sorted keys, no whitespace
# --------------------------------------------------------------------------


def _float_repr(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x} cannot be serialized")
    if x == 0.0:
        # "-0" would reparse as integer zero and break byte-stable round-trips
        return "-0.0" if math.copysign(1.0, x) < 0 else "0"
    return format(x, ".17g")


def canonical_json(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float_repr(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ",".join(json.dumps(str(k)) + ":" + canonical_json(v) for k, v in items) + "}"
    raise TypeError(f"cannot serialize {type(obj)}")


def matrix_record(mat: np.ndarray) -> dict:
    mat = np.asarray(mat, dtype=complex)
    return {
        "rows": mat.shape[0],
        "cols": mat.shape[1],
        "re": [float(v) for v in mat.real.ravel()],
        "im": [float(v) for v in mat.imag.ravel()],
    }


def matrix_from_record(rec: dict) -> np.ndarray:
    mat = np.array(rec["re"], dtype=float) + 1j * np.array(rec["im"], dtype=float)
    return mat.reshape(rec["rows"], rec["cols"])


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode()).hexdigest()


@dataclass
class ResultRecord:
    scenario: str
    inputs: dict
    results: dict
    diagnostics: dict
    versions: dict

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "inputs": self.inputs,
            "results": self.results,
            "diagnostics": self.diagnostics,
            "versions": self.versions,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    @staticmethod
    def from_json(text: str) -> "ResultRecord":
        d = json.loads(text)
        return ResultRecord(
            scenario=d["scenario"],
            inputs=d["inputs"],
            results=d["results"],
            diagnostics=d["diagnostics"],
            versions=d["versions"],
        )


# --------------------------------------------------------------------------
# config -> domain objects
# --------------------------------------------------------------------------


def _require(cfg: dict, *fields: str) -> None:
    missing = [f for f in fields if f not in cfg]
    if missing:
        raise ConfigError(f"scenario {cfg.get('scenario')!r} requires fields {missing}")


def _basis(cfg: dict) -> FockBasis:
    return build_basis(cfg["basis"]["n_max"], cfg["basis"]["m_max"])


def _point(cfg: dict) -> ParameterPoint:
    p = cfg.get("point", {})
    return ParameterPoint(
        X1=p.get("X1", 0.0),
        X2=p.get("X2", 0.0),
        B=p.get("B", 1.0),
        r=p.get("r", 0.0),
        theta=p.get("theta", 0.0),
    )


def _path(spec: dict) -> ParameterPath:
    kind = spec["kind"]
    if kind == "circle":
        for f in ("radius", "segments"):
            if f not in spec:
                raise ConfigError(f"circle path requires {f!r}")
        center = tuple(spec.get("center", (0.0, 0.0)))
        return circle_x1x2(
            radius=spec["radius"],
            segments=spec["segments"],
            center=center,
            B=spec.get("B", 1.0),
            ccw=spec.get("ccw", True),
        )
    if kind == "rectangle":
        for f in ("x2_range", "lnb_range"):
            if f not in spec:
                raise ConfigError(f"rectangle path requires {f!r}")
        return rectangle_x2_lnb(
            x2_range=tuple(spec["x2_range"]),
            lnb_range=tuple(spec["lnb_range"]),
            segments_per_side=spec.get("segments_per_side", 1),
            X1=spec.get("X1", 0.0),
        )
    if kind == "points":
        if "points" not in spec:
            raise ConfigError("points path requires 'points'")
        pts = tuple(
            ParameterPoint(
                X1=p.get("X1", 0.0),
                X2=p.get("X2", 0.0),
                B=p.get("B", 1.0),
                r=p.get("r", 0.0),
                theta=p.get("theta", 0.0),
            )
            for p in spec["points"]
        )
        return ParameterPath(points=pts, closed=True)
    raise ConfigError(f"unknown path kind {kind!r}")


# --------------------------------------------------------------------------
# scenario handlers
# --------------------------------------------------------------------------


def _run_connections(cfg: dict, squeezed: bool) -> tuple[dict, dict]:
    basis = _basis(cfg)
    point = _point(cfg)
    params = cfg.get("parameters", ["r", "theta", "B"] if squeezed else ["X1", "X2", "B"])
    h = cfg.get("numerics", {}).get("fd_step", 1e-4)
    keep = oracle_comparison_block(basis, point, tail=1e-14)
    results: dict = {"connections": {}}
    errs: dict = {}
    defects: dict = {}
    for param in params:
        ana = connection_analytic(basis, param, point)
        num = connection_numeric(basis, param, point, h=h)
        diff = np.abs((ana.full.matrix - num.full.matrix)[np.ix_(keep, keep)]).max()
        results["connections"][param] = matrix_record(ana.full.matrix)
        errs[param] = float(diff)
        defects[param] = ana.full.anti_hermiticity_defect()
    diagnostics = {
        "oracle_max_error": max(errs.values()),
        "oracle_errors": errs,
        "anti_hermiticity_defect": max(defects.values()),
        "fd_step": h,
    }
    return results, diagnostics


def _run_abelian(cfg: dict) -> tuple[dict, dict]:
    _require(cfg, "path")
    path = _path(cfg["path"])
    res = abelian_phase(path, n=cfg.get("level_n", 0))
    area = signed_area(path, "X1X2")
    results = {
        "gamma": res.abelian_phase,
        "signed_area": area,
        "richardson_estimate": res.richardson_estimate,
    }
    diagnostics = {"segments_used": res.segments_used, "area_identity_gap": abs(res.abelian_phase + 2 * area)}
    return results, diagnostics


def _run_nonabelian(cfg: dict) -> tuple[dict, dict]:
    _require(cfg, "path", "k_segments")
    basis = _basis(cfg)
    path = _path(cfg["path"])
    n = cfg.get("level_n", 0)
    res = nonabelian_holonomy(basis, path, n, cfg["k_segments"])
    results = {
        "unitary": matrix_record(res.unitary.matrix),
        "eigenphases": [float(p) for p in res.eigenphases],
        "richardson_estimate": res.richardson_estimate,
        "sigma": None,
        "closed_form_max_diff": None,
    }
    diagnostics = {
        "segments_used": res.segments_used,
        "unitarity_defect": res.unitary.unitarity_defect(),
    }
    x1s = [p.X1 for p in path.points]
    if max(abs(v) for v in x1s) <= 1e-12:
        cf = commuting_closed_form(basis, path, n)
        results["sigma"] = cf.sigma
        results["closed_form_max_diff"] = float(
            np.abs(cf.unitary.matrix - res.unitary.matrix).max()
        )
        diagnostics["closed_form_eigenphases"] = [float(p) for p in cf.eigenphases]
    return results, diagnostics


def _flux_closed_form_magnitude(flux: GaussianFlux, B: float, R: float) -> float:
    return flux.Phi0**2 * (1.0 - math.exp(-(R**2) / flux.Delta**2)) ** 2 / (4.0 * math.pi * B * R**2)


def _run_flux_ab(cfg: dict) -> tuple[dict, dict]:
    _require(cfg, "flux", "B", "R")
    spec = cfg["flux"]
    flux = GaussianFlux(x0=spec.get("x0", cfg["R"]), y0=spec.get("y0", 0.0), Phi0=spec["Phi0"], Delta=spec["Delta"])
    segments = cfg.get("numerics", {}).get("segments", 100_000)
    gamma = flux_loop_phase(flux, cfg["B"], cfg["R"], segments)
    closed = _flux_closed_form_magnitude(flux, cfg["B"], cfg["R"])
    rel = abs(abs(gamma) - closed) / closed if closed > 0 else abs(gamma)
    rep = validity(flux, cfg["B"], kappa=cfg.get("numerics", {}).get("kappa", 10.0))
    results = {
        "gamma": gamma,
        "magnitude": abs(gamma),
        "closed_form_magnitude": closed,
        "relative_error": rel,
    }
    diagnostics = {
        "segments": segments,
        "orientation_note": (
            "ccw tube drive maps to a cw displacement loop; computed sign is opposite "
            "to -2S applied to a ccw loop of the same magnitude"
        ),
        "sign_opposite_to_ccw_rule": bool(gamma > 0) if flux.Phi0 != 0 else False,
        "validity": dataclasses.asdict(rep),
    }
    return results, diagnostics


def _run_adiabatic(cfg: dict) -> tuple[dict, dict]:
    _require(cfg, "schedule")
    basis = _basis(cfg)
    sched_cfg = cfg["schedule"]
    schedule = Schedule(
        path=_path(sched_cfg["path"]),
        total_time=sched_cfg["total_time"],
        time_profile=sched_cfg.get("time_profile", "smoothstep"),
        dt=sched_cfg.get("dt"),
    )
    n = cfg.get("level_n", 0)
    if "degenerate_f" in cfg:
        f = np.array([complex(re, im) for re, im in cfg["degenerate_f"]])
        record = degenerate_record(basis, schedule, f, level_n=n)
    else:
        start = schedule.path.points[0]
        initial = eigenstate(basis, start, n, 0)
        record = propagate(basis, schedule, initial, level_n=n)
    prediction = None
    try:
        prediction = -2.0 * signed_area(schedule.path, "X1X2")
    except ValueError:
        pass
    results = {
        "geometric_phase": record.geometric_phase,
        "total_phase": record.total_phase,
        "dynamical_phase": record.dynamical_phase,
        "population_drift": record.population_drift,
        "norm_drift": record.norm_drift,
    }
    diagnostics = {
        "berry_prediction": prediction,
        "frame_samples": len(record.frame_times),
    }
    return results, diagnostics


def _validate_checks(basis: FockBasis) -> list[dict]:
    checks: list[dict] = []

    def add(name: str, value: float, tol: float) -> None:
        checks.append({"name": name, "value": float(value), "tolerance": tol, "ok": bool(value <= tol)})

    b = ladder_b(basis)
    a = ladder_a(basis)
    add("commutator_b", commutator_defect(b, b.dagger(), basis), 1e-12)
    add("commutator_a", commutator_defect(a, a.dagger(), basis), 1e-12)
    add("ab_commute", commutator_defect(a, b, basis, target=np.zeros((basis.dim, basis.dim))), 1e-12)

    alpha = 0.7 + 0.3j
    d = displacement(basis, alpha)
    add("displacement_unitary", d.unitarity_defect(), 1e-10)
    s = squeeze(basis, 0.15 * np.exp(0.9j))
    add("squeeze_unitary", s.unitarity_defect(), 1e-10)
    k = b_embedding(basis, 2.0, 1.0)
    add("embedding_unitary", k.unitarity_defect(), 1e-10)

    keep = basis.block_indices(5, basis.m_max - 1)
    pt = ParameterPoint(X1=0.4, X2=-0.3, B=1.3)
    h_fock = hamiltonian(basis, HamiltonianKind.COHERENT_FOCK, pt).matrix.matrix
    h_pi = hamiltonian(basis, HamiltonianKind.COHERENT_PI, pt).matrix.matrix
    add("coherent_form_identity", np.abs((h_fock - h_pi)[np.ix_(keep, keep)]).max(), 1e-10)

    pt_s = ParameterPoint(X1=0.4, X2=-0.3, B=1.3, r=0.15, theta=0.9)
    hs_fock = hamiltonian(basis, HamiltonianKind.SQUEEZED_FOCK, pt_s).matrix.matrix
    hs_pi = hamiltonian(basis, HamiltonianKind.SQUEEZED_PI, pt_s).matrix.matrix
    add("squeezed_form_identity", np.abs((hs_fock - hs_pi)[np.ix_(keep, keep)]).max(), 1e-10)

    eigs = np.sort(np.linalg.eigvalsh(hs_fock))
    n_keep = basis.n_max // 2
    expected = np.repeat(pt_s.B * (np.arange(n_keep + 1) + 0.5), basis.m_max + 1)
    add("spectrum_degeneracy", np.abs(eigs[: len(expected)] - expected).max(), 1e-8)

    okeep = oracle_comparison_block(basis, pt_s, tail=1e-14)
    worst = 0.0
    for param in ("X1", "X2", "B", "r", "theta"):
        ana = connection_analytic(basis, param, pt_s).full.matrix
        num = connection_numeric(basis, param, pt_s, h=1e-4).full.matrix
        worst = max(worst, float(np.abs((ana - num)[np.ix_(okeep, okeep)]).max()))
    add("connection_oracle", worst, 1e-6)

    a_b0 = connection_analytic(basis, "B", ParameterPoint(X1=0.4, X2=-0.3, B=1.3, r=0.0)).full.matrix
    coh = connection_analytic(basis, "B", ParameterPoint(X1=0.4, X2=-0.3, B=1.3)).full.matrix
    add("squeezed_B_connection_r0_limit", np.abs(a_b0 - coh).max(), 0.0)

    circle = circle_x1x2(radius=0.5, segments=4096)
    res = abelian_phase(circle)
    add("abelian_area_identity", abs(res.abelian_phase + 2 * signed_area(circle, "X1X2")), 1e-12)
    add("abelian_circle_value", abs(res.abelian_phase + 2 * math.pi * 0.25) / (2 * math.pi * 0.25), 1e-5)

    rect = rectangle_x2_lnb(segments_per_side=8)
    wil = nonabelian_holonomy(basis, rect, 0, 2000)
    cf = commuting_closed_form(basis, rect, 0)
    add("wilson_vs_closed_form", np.abs(wil.unitary.matrix - cf.unitary.matrix).max(), 1e-5)

    flux = GaussianFlux(x0=3.0, y0=0.0, Phi0=1.0, Delta=2.0)
    enc = flux.Phi0 * (1 - math.exp(-1.0))
    add("stokes_identity", abs(circulation(flux, flux.Delta, 20000) - enc) / abs(enc), 1e-8)

    h = 1e-5 * flux.Delta
    px, py = flux.x0 + flux.Delta, flux.y0
    curl = (vector_potential(flux, px + h, py)[1] - vector_potential(flux, px - h, py)[1]) / (2 * h) - (
        vector_potential(flux, px, py + h)[0] - vector_potential(flux, px, py - h)[0]
    ) / (2 * h)
    bval = float(flux_field(flux, px, py))
    add("curl_identity", abs(curl - bval) / abs(bval), 1e-8)

    x1, x2 = to_displacement(flux, 1.0)
    dx_, dy_ = to_shift(flux, 1.0)
    add("shift_displacement_identity", abs(dx_ - 2 * math.sqrt(2.0) * x2) + abs(dy_ - 2 * math.sqrt(2.0) * x1), 1e-15)

    gamma = flux_loop_phase(flux, 1.0, 3.0, 20000)
    closed = _flux_closed_form_magnitude(flux, 1.0, 3.0)
    add("flux_pipeline_magnitude", abs(abs(gamma) - closed) / closed, 1e-6)
    return checks


def _run_validate_all(cfg: dict) -> tuple[dict, dict]:
    if cfg["basis"]["n_max"] < 40:
        raise ConfigError("validate-all needs basis.n_max >= 40 for its interior-block checks")
    checks = _validate_checks(_basis(cfg))
    passed = sum(1 for c in checks if c["ok"])
    results = {"passed": passed, "failed": len(checks) - passed, "checks": checks}
    return results, {"total": len(checks)}


def run(config: dict) -> ResultRecord:
    """Validate the config, dispatch the scenario, return the result record."""
    try:
        jsonschema.validate(config, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config rejected: {exc.message}") from exc

    scenario = config["scenario"]
    handlers = {
        "connections": lambda c: _run_connections(c, squeezed=False),
        "squeezed-connections": lambda c: _run_connections(c, squeezed=True),
        "abelian-loop": _run_abelian,
        "nonabelian-loop": _run_nonabelian,
        "flux-ab": _run_flux_ab,
        "adiabatic": _run_adiabatic,
        "validate-all": _run_validate_all,
    }
    results, diagnostics = handlers[scenario](config)
    return ResultRecord(
        scenario=scenario,
        inputs=config,
        results=results,
        diagnostics=diagnostics,
        versions={"artifact": __version__, "config_hash": config_hash(config)},
    )


# --------------------------------------------------------------------------
# sweeps
# --------------------------------------------------------------------------


def _set_leaf(config: dict, dotted: str, value: float) -> dict:
    cfg = copy.deepcopy(config)
    node = cfg
    parts = dotted.split(".")
    for p in parts[:-1]:
        if not isinstance(node, dict) or p not in node:
            raise ConfigError(f"axis {dotted!r} not found in config")
        node = node[p]
    leaf = parts[-1]
    if not isinstance(node, dict) or leaf not in node:
        raise ConfigError(f"axis {dotted!r} not found in config")
    if isinstance(node[leaf], bool) or not isinstance(node[leaf], (int, float)):
        raise ConfigError(f"axis {dotted!r} is not a numeric leaf")
    if isinstance(node[leaf], int) and float(value).is_integer():
        node[leaf] = int(value)
    else:
        node[leaf] = float(value)
    return cfg


def sweep(config: dict, axis: str, values: list[float]) -> str:
    """One run per value of a numeric config leaf; returns a CSV table.

    Columns are fixed per scenario (see SWEEP_COLUMNS); rows keep the input
    ordering of the values.
    """
    try:
        jsonschema.validate(config, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config rejected: {exc.message}") from exc
    scenario = config["scenario"]
    columns = SWEEP_COLUMNS[scenario]
    lines = [",".join(["axis", "value"] + columns)]
    for v in values:
        record = run(_set_leaf(config, axis, v))
        row = [axis, _float_repr(float(v))]
        for col in columns:
            cell = record.results.get(col)
            row.append("" if cell is None else _float_repr(float(cell)))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _error_record(kind: str, exc: Exception) -> str:
    return canonical_json({"error": {"kind": kind, "message": str(exc)}})


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="landau-holonomy",
        description="geometric-phase experiments on Landau-level coherent states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one scenario config")
    p_run.add_argument("--config", required=True, help="path to the JSON scenario config")
    p_run.add_argument("--out", default=None, help="output path (default stdout)")
    p_run.add_argument("--format", choices=["json", "csv"], default=None)

    p_sweep = sub.add_parser("sweep", help="run a scenario across values of one numeric leaf")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--axis", required=True, help="dotted config path, e.g. path.radius")
    p_sweep.add_argument("--values", required=True, help="comma-separated numbers")
    p_sweep.add_argument("--out", default=None)

    args = parser.parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(_error_record("config", exc) + "\n")
        return EXIT_CONFIG

    try:
        if args.command == "run":
            record = run(config)
            fmt = args.format or config.get("output", {}).get("format", "json")
            out = args.out or config.get("output", {}).get("path")
            if fmt == "csv":
                cols = SWEEP_COLUMNS[record.scenario]
                header = ",".join(cols)
                row = ",".join(
                    "" if record.results.get(c) is None else _float_repr(float(record.results[c]))
                    for c in cols
                )
                _emit(header + "\n" + row + "\n", out)
            else:
                _emit(record.to_json(), out)
        else:
            values = [float(v) for v in args.values.split(",") if v.strip() != ""]
            table = sweep(config, args.axis, values)
            _emit(table, args.out)
    except ConfigError as exc:
        sys.stderr.write(_error_record("config", exc) + "\n")
        return EXIT_CONFIG
    except NumericalGuardError as exc:
        sys.stderr.write(_error_record("numerical-guard", exc) + "\n")
        return EXIT_GUARD
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
