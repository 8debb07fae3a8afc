"""Plain-text run configuration and model (de)serialization.

A config file is a flat list of ``key = value`` lines; ``#`` starts a
comment. Recognized keys::

    d, L, N, g, family, stencil, a_op, kernel, tol, out, format,
    dense_threshold, max_dim, sweep_axis, sweep_values, k, seed

``L`` is a comma list (a single value is repeated ``d`` times). ``stencil``
holds one or more stencils separated by ``|``; each stencil is a ``;``
separated list of ``offset:coefficient`` with comma-separated offset
components, e.g. ``0:1; 1:-1`` in one dimension or ``0,0:1; 1,0:-1`` in two.
The word ``nn`` selects the nearest-neighbor stencils that reproduce the
pair interaction. ``kernel`` is a comma list of (complex) values in
momentum-grid order, or ``peak:<kappa>[:<background>]``. Both ``stencil``
and ``kernel`` may name a file holding the same text.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from pathlib import Path

from .fock import dimension
from .lattice import Lattice
from .models import FAMILIES, KernelSpec, ModelSpec, StencilSpec, nearest_neighbor_stencils, peaked_kernel

__all__ = [
    "ConfigError",
    "RunConfig",
    "parse_config_text",
    "load_config",
    "parse_stencils",
    "parse_kernel",
    "format_stencils",
    "format_kernel",
    "model_to_text",
    "DEFAULT_MAX_DIM",
]

DEFAULT_MAX_DIM = 2_000_000
MODES = ("verify", "sweep", "spectrum")
SWEEP_AXES = ("g", "kappa")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


def _complex(s: str) -> complex:
    s = s.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise ConfigError(f"cannot parse {s!r} as a number") from None


def _maybe_file(text: str) -> str:
    text = text.strip()
    if text and os.path.isfile(text):
        return Path(text).read_text()
    return text


def parse_stencils(text: str, d: int, a_op: str = "number_operator") -> tuple[StencilSpec, ...]:
    text = _maybe_file(text)
    if text.strip().lower() == "nn":
        return nearest_neighbor_stencils(Lattice((3,) * d), a_op)
    out = []
    for chunk in text.replace("\n", ";").split("|"):
        offsets, coefs = [], []
        for entry in chunk.split(";"):
            entry = entry.split("#")[0].strip()
            if not entry:
                continue
            if ":" not in entry:
                raise ConfigError(f"stencil entry {entry!r} is not of the form offset:coefficient")
            off, coef = entry.rsplit(":", 1)
            try:
                offset = tuple(int(c) for c in off.split(","))
            except ValueError:
                raise ConfigError(f"bad stencil offset {off!r}") from None
            if len(offset) != d:
                raise ConfigError(f"stencil offset {offset} does not have {d} components")
            offsets.append(offset)
            coefs.append(_complex(coef))
        if offsets:
            out.append(StencilSpec(tuple(offsets), tuple(coefs), a_op))
    if not out:
        raise ConfigError("empty stencil")
    return tuple(out)


def parse_kernel(text: str, lattice: Lattice) -> KernelSpec:
    text = _maybe_file(text).strip()
    if text.lower().startswith("peak:"):
        parts = text.split(":")[1:]
        kappa = float(parts[0])
        background = _complex(parts[1]) if len(parts) > 1 else 1.0
        return peaked_kernel(lattice, kappa, background)
    values = [_complex(v) for v in text.replace("\n", ",").split(",") if v.strip()]
    if len(values) != lattice.num_sites:
        raise ConfigError(f"kernel needs {lattice.num_sites} values (one per momentum), got {len(values)}")
    return KernelSpec(values)


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    return repr(z).strip("()")


def format_stencils(stencils) -> str:
    return " | ".join(
        "; ".join(f"{','.join(map(str, o))}:{_fmt_complex(c)}" for o, c in zip(s.offsets, s.coefficients))
        for s in stencils
    )


def format_kernel(kernel: KernelSpec) -> str:
    return ", ".join(_fmt_complex(v) for v in kernel.values)


def model_to_text(spec: ModelSpec) -> str:
    """Config text that reproduces ``spec`` through :func:`parse_config_text`."""
    lines = [
        f"d = {spec.lattice.d}",
        f"L = {','.join(map(str, spec.lattice.lengths))}",
        f"N = {spec.N}",
        f"g = {spec.g!r}",
        f"family = {spec.family}",
    ]
    if spec.stencils:
        lines.append(f"a_op = {spec.stencils[0].a_op}")
        lines.append(f"stencil = {format_stencils(spec.stencils)}")
    if spec.kernel is not None:
        lines.append(f"kernel = {format_kernel(spec.kernel)}")
    return "\n".join(lines) + "\n"


@dataclass
class RunConfig:
    """Everything a CLI run needs; :meth:`model` turns it into a :class:`ModelSpec`."""

    mode: str = "verify"
    d: int | None = None
    L: tuple[int, ...] = (4,)
    N: int = 2
    g: float = 1.0
    family: str = "paper_factored"
    stencil: str | None = None
    a_op: str = "number_operator"
    kernel: str | None = None
    tol: float = 1e-10
    out: str | None = None
    format: str = "json"
    dense_threshold: int = 2000
    max_dim: int = DEFAULT_MAX_DIM
    sweep_axis: str = "g"
    sweep_values: tuple[float, ...] = ()
    k: int = 5
    seed: int | None = None

    def lattice(self) -> Lattice:
        L = tuple(self.L)
        d = self.d if self.d is not None else len(L)
        if len(L) == 1 and d > 1:
            L = L * d
        if len(L) != d:
            raise ConfigError(f"L has {len(L)} entries but d = {d}")
        try:
            return Lattice(L)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def validate(self) -> RunConfig:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        if self.mode == "sweep":
            if self.sweep_axis not in SWEEP_AXES:
                raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}")
            if not self.sweep_values:
                raise ConfigError("sweep needs at least one value")
        if self.N < 0 or self.g < 0:
            raise ConfigError("N and g must be non-negative")
        lat = self.lattice()
        D = dimension(self.N, lat.num_sites)
        if D > self.max_dim:
            raise ConfigError(
                f"basis dimension {D} for N={self.N} on {lat.num_sites} sites exceeds the cap {self.max_dim}"
            )
        if self.mode == "sweep" and self.sweep_axis == "kappa":
            self.model(family="kernel", kernel=peaked_kernel(lat, self.sweep_values[0]))
        else:
            self.model()
        return self

    def model(self, **overrides) -> ModelSpec:
        lat = self.lattice()
        family = overrides.pop("family", self.family)
        g = overrides.pop("g", self.g)
        stencils: tuple[StencilSpec, ...] = ()
        kernel = overrides.pop("kernel", None)
        if family == "general_cac":
            if not self.stencil:
                raise ConfigError("family general_cac needs a stencil")
            stencils = parse_stencils(self.stencil, lat.d, self.a_op)
        if family == "kernel" and kernel is None:
            if not self.kernel:
                raise ConfigError("family kernel needs kernel values")
            kernel = parse_kernel(self.kernel, lat)
        try:
            return ModelSpec(lat, self.N, g, family, stencils=stencils, kernel=kernel)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


_INT_KEYS = {"d", "N", "dense_threshold", "max_dim", "k", "seed"}
_FLOAT_KEYS = {"g", "tol"}
_STR_KEYS = {"mode", "family", "stencil", "a_op", "kernel", "out", "format", "sweep_axis"}


def _coerce(key: str, value: str):
    value = value.strip()
    try:
        if key in _INT_KEYS:
            return int(float(value))
        if key in _FLOAT_KEYS:
            return float(value)
        if key == "L":
            return tuple(int(v) for v in value.split(",") if v.strip())
        if key == "sweep_values":
            return tuple(float(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"bad value {value!r} for {key}") from None
    return value


def parse_config_text(text: str, base: RunConfig | None = None) -> RunConfig:
    cfg = replace(base) if base is not None else RunConfig()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#")[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key in ("kernel_values",):
            key = "kernel"
        if key in _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | {"L", "sweep_values"}:
            setattr(cfg, key, _coerce(key, value))
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return cfg


def load_config(path: str | os.PathLike, base: RunConfig | None = None) -> RunConfig:
    return parse_config_text(Path(path).read_text(), base)
