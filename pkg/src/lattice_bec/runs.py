"""Verification, sweep and spectrum runs producing machine-readable reports.

Report layout (JSON)::

    {
      "schema": "lattice_bec.run_report/1",
      "mode": "verify" | "sweep" | "spectrum",
      "model": {"d", "L", "N", "g", "family", "dimension", ...},
      "settings": {"tol", "dense_threshold", "seed", "threads"},
      "records": [{..., "checks": [{"name", "value", "relation", "tolerance", "passed"}]}],
      "checks": [...],          # run-level checks (e.g. sweep trends)
      "passed": true | false
    }

Every check carries the tolerance it was tested against.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bec import bec_state, verify_bond_annihilation
from .config import ConfigError, RunConfig
from .fock import dimension
from .models import ModelSpec, build_interaction, build_kinetic, peaked_kernel
from .observables import condensate_fraction, energy, obdm
from .solver import SEED, lowest_k

__all__ = ["RunReport", "VERIFY_TOLERANCES", "certify", "run_verify", "run_sweep", "run_spectrum", "run", "THREADS_ENV"]

SCHEMA = "lattice_bec.run_report/1"
THREADS_ENV = "LATTICE_BEC_THREADS"

VERIFY_TOLERANCES = {
    "ground_energy": 1e-9,  # |E0| <= tol
    "overlap": 1e-8,  # |<GS|BEC>| >= 1 - tol
    "condensate_fraction": 1e-8,  # f0 >= 1 - tol
    "gap": 1e-6,  # E1 - E0 > tol
    "interaction_psd": 1e-10,  # min eig H_int >= -tol
    "bond_annihilation": 1e-12,  # max ||(a_x - a_y) BEC|| <= tol
    "interaction_annihilation": 1e-10,  # ||H_int BEC|| <= tol
}
TREND_TOL = 1e-12


def _check(name: str, value: float, relation: str, tolerance: float) -> dict:
    value = float(value)
    ok = {
        "abs<=": abs(value) <= tolerance,
        "<=": value <= tolerance,
        ">=": value >= tolerance,
        ">": value > tolerance,
        "1-x<=": 1.0 - value <= tolerance,
    }[relation]
    return {"name": name, "value": value, "relation": relation, "tolerance": tolerance, "passed": bool(ok)}


@dataclass
class RunReport:
    mode: str
    model: dict
    settings: dict
    records: list[dict] = field(default_factory=list)
    checks: list[dict] = field(default_factory=list)

    @property
    def all_checks(self) -> list[dict]:
        return self.checks + [c for r in self.records for c in r.get("checks", [])]

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.all_checks)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "mode": self.mode,
            "model": self.model,
            "settings": self.settings,
            "records": self.records,
            "checks": self.checks,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        """One row per record with its scalar fields and a ``passed`` column."""
        rows = []
        for r in self.records:
            row = {k: v for k, v in r.items() if not isinstance(v, (list, dict))}
            row["passed"] = all(c["passed"] for c in r.get("checks", []))
            rows.append(row)
        buf = io.StringIO()
        if rows:
            fields = list(dict.fromkeys(k for row in rows for k in row))
            writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        return buf.getvalue()


def _model_dict(spec: ModelSpec) -> dict:
    out = {
        "d": spec.lattice.d,
        "L": list(spec.lattice.lengths),
        "N": spec.N,
        "g": spec.g,
        "family": spec.family,
        "dimension": dimension(spec.N, spec.lattice.num_sites),
    }
    if spec.stencils:
        out["stencils"] = [
            {"offsets": [list(o) for o in s.offsets], "coefficients": [[c.real, c.imag] for c in s.coefficients], "a_op": s.a_op}
            for s in spec.stencils
        ]
    if spec.kernel is not None:
        out["kernel"] = [[v.real, v.imag] for v in spec.kernel.values]
    return out


def _settings(cfg: RunConfig) -> dict:
    return {
        "tol": cfg.tol,
        "dense_threshold": cfg.dense_threshold,
        "seed": SEED if cfg.seed is None else cfg.seed,
        "threads": _threads(),
    }


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _solve(H, k, cfg: RunConfig):
    seed = SEED if cfg.seed is None else cfg.seed
    return lowest_k(H, k, tol=cfg.tol, seed=seed, dense_threshold=cfg.dense_threshold)


def certify(spec: ModelSpec, cfg: RunConfig | None = None) -> dict:
    """Full ground-state certification of one model; returns a report record."""
    cfg = RunConfig() if cfg is None else cfg
    t0 = time.perf_counter()
    lat = spec.lattice
    basis = spec.basis()
    H_int = build_interaction(spec, basis)
    H = build_kinetic(lat, basis) + H_int if spec.kinetic else H_int
    eig = _solve(H, min(2, basis.dimension), cfg)
    gs = eig.ground_vector
    phi = bec_state(basis, lat)
    rho = obdm(gs, basis, lat)
    f0, f_po = condensate_fraction(gs, basis, lat, rho=rho)
    overlap = abs(np.vdot(phi, gs))
    hint_phi = float(np.linalg.norm(H_int @ phi))
    bond_max = max(verify_bond_annihilation(phi, b, basis) for b in lat.bonds) if spec.N else 0.0
    hint_min = float(_solve(H_int, 1, cfg).eigenvalues[0])
    E0 = float(eig.eigenvalues[0])
    E1 = float(eig.eigenvalues[1]) if len(eig) > 1 else float("nan")
    tols = VERIFY_TOLERANCES
    record = {
        **{k: v for k, v in _model_dict(spec).items() if k in ("d", "N", "g", "family", "dimension")},
        "L": list(lat.lengths),
        "E0": E0,
        "E1": E1,
        "gap": E1 - E0,
        "f0": f0,
        "fPO": f_po,
        "bec_energy": energy(H, phi),
        "hint_bec_norm": hint_phi,
        "bond_annihilation_max": bond_max,
        "hint_min_eigenvalue": hint_min,
        "overlap": overlap,
        "residuals": [float(r) for r in eig.residuals],
        "solver": eig.method,
        "wall_time": time.perf_counter() - t0,
    }
    record["checks"] = [
        _check("ground_energy", E0, "abs<=", tols["ground_energy"]),
        _check("overlap", overlap, "1-x<=", tols["overlap"]),
        _check("condensate_fraction", f0, "1-x<=", tols["condensate_fraction"]),
        _check("gap", E1 - E0, ">", tols["gap"]),
        _check("interaction_psd", hint_min, ">=", -tols["interaction_psd"]),
        _check("bond_annihilation", bond_max, "<=", tols["bond_annihilation"]),
        _check("interaction_annihilation", hint_phi, "<=", tols["interaction_annihilation"]),
    ]
    return record


def run_verify(cfg: RunConfig) -> RunReport:
    """Certify that the uniform condensate is the unique ground state of the configured model."""
    cfg.validate()
    spec = cfg.model()
    if not spec.annihilates_condensate:
        raise ConfigError(
            f"verify needs a model whose interaction annihilates the condensate; {spec.family} "
            "with these parameters does not (use a zero-sum stencil or a kernel with K(0) = 0)"
        )
    if spec.N < 1:
        raise ConfigError("verify needs at least one boson")
    return RunReport("verify", _model_dict(spec), _settings(cfg), [certify(spec, cfg)])


def _sweep_point(cfg: RunConfig, value: float) -> dict:
    t0 = time.perf_counter()
    if cfg.sweep_axis == "g":
        spec = cfg.model(g=value)
    else:
        spec = cfg.model(family="kernel", kernel=peaked_kernel(cfg.lattice(), value))
    lat = spec.lattice
    basis = spec.basis()
    H_int = build_interaction(spec, basis)
    H = build_kinetic(lat, basis) + H_int
    eig = _solve(H, min(2, basis.dimension), cfg)
    gs = eig.ground_vector
    phi = bec_state(basis, lat)
    f0, f_po = condensate_fraction(gs, basis, lat)
    E0 = float(eig.eigenvalues[0])
    E1 = float(eig.eigenvalues[1]) if len(eig) > 1 else float("nan")
    record = {
        cfg.sweep_axis: float(value),
        "g": spec.g,
        "family": spec.family,
        "E0": E0,
        "E1": E1,
        "gap": E1 - E0,
        "f0": f0,
        "fPO": f_po,
        "overlap": abs(np.vdot(phi, gs)),
        "hint_bec_norm": float(np.linalg.norm(H_int @ phi)),
        "residuals": [float(r) for r in eig.residuals],
        "wall_time": time.perf_counter() - t0,
        "checks": [],
    }
    if spec.annihilates_condensate:
        record["checks"].append(
            _check("condensate_fraction", f0, "1-x<=", VERIFY_TOLERANCES["condensate_fraction"])
        )
    return record


def run_sweep(cfg: RunConfig) -> RunReport:
    """One record per sweep value, ordered by value; sweep points may run in parallel.

    Run-level trend checks: the peaked-kernel sweep and the on-site g-sweep
    must show a non-increasing (on-site: strictly decreasing) condensate
    fraction.
    """
    cfg.validate()
    values = sorted(cfg.sweep_values)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        records = list(pool.map(lambda v: _sweep_point(cfg, v), values))
    if cfg.sweep_axis == "kappa":
        model = _model_dict(cfg.model(family="kernel", kernel=peaked_kernel(cfg.lattice(), values[0])))
        model.pop("kernel")
        model["kappa"] = values
    else:
        model = _model_dict(cfg.model())
        model["g"] = values
    report = RunReport("sweep", model, _settings(cfg), records)
    f0 = np.array([r["f0"] for r in records])
    steps = np.diff(f0)
    if cfg.sweep_axis == "kappa" and len(f0) > 1:
        report.checks.append(_check("f0_nonincreasing_in_kappa", steps.max(), "<=", TREND_TOL))
    elif cfg.family == "onsite_hubbard" and len(f0) > 1:
        # smallest decrease between neighboring points must be positive
        report.checks.append(_check("f0_decreasing_in_g", -steps.max(), ">", 0.0))
    return report


def run_spectrum(cfg: RunConfig) -> RunReport:
    """Lowest ``cfg.k`` eigenvalues of the configured Hamiltonian."""
    cfg.validate()
    spec = cfg.model()
    basis = spec.basis()
    if not 1 <= cfg.k <= basis.dimension:
        raise ConfigError(f"k = {cfg.k} must lie in [1, {basis.dimension}]")
    H = build_kinetic(spec.lattice, basis) + build_interaction(spec, basis)
    eig = _solve(H, cfg.k, cfg)
    records = []
    for i, (val, res) in enumerate(zip(eig.eigenvalues, eig.residuals)):
        tol = cfg.tol * max(1.0, abs(val))
        records.append(
            {"index": i, "eigenvalue": float(val), "residual": float(res), "checks": [_check("residual", res, "<=", tol)]}
        )
    return RunReport("spectrum", _model_dict(spec), _settings(cfg), records)


def run(cfg: RunConfig) -> RunReport:
    return {"verify": run_verify, "sweep": run_sweep, "spectrum": run_spectrum}[cfg.mode](cfg)
