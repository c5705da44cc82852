"""Command-line harness.

Reads an INI-style config describing one experiment, runs it, and writes
a CSV or JSON table with a metadata header (expanded config echo,
package version, wall time).

Config layout::

    [experiment]
    mode = spectrum          ; spectrum | gap-scaling | magnetization |
                             ; fidelity | validate | majorana
    lattice = virtual-only   ; or "NxM"
    cut = linear:6           ; or rect:WxH, or JSON [[x, y], ...]
    sector = all_plus        ; or all_sectors (spectrum mode)
    delta_r = 0.001          ; fidelity mode
    k_eigenvalues = 0        ; 0 = all states (spectrum mode)
    r_probe = 0.1            ; gap-scaling mode
    min_cut_size = 4         ; gap-scaling mode
    max_cut_size = 12        ; gap-scaling mode

    [r_grid]
    min = 0.01
    max = 10.0
    points = 20
    spacing = log            ; log | linear

    [output]
    path = out.csv
    format = csv             ; csv | json

Unknown sections or keys are rejected.  Run as::

    twistlab <config-path> [--mode M] [--output PATH] [--threads N]

Thread count may also be set with the TWISTLAB_THREADS environment
variable (--threads wins).
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .lattice import (
    build_full_hamiltonian,
    build_lattice,
    linear_cut_sites,
    make_cut,
    rect_cut_sites,
)
from .majorana import build_chain, ground_energy, many_body_gap
from .observables import (
    SectorSet,
    fidelity_scan,
    gap_vs_cut_size,
    magnetization_curve,
    spectrum_table,
)
from .solvers import SolverError
from .tables import ScanTable
from .virtual import build_virtual_hamiltonian

MODES = ("spectrum", "gap-scaling", "magnetization", "fidelity", "validate", "majorana")

_KNOWN_KEYS = {
    "experiment": {
        "mode",
        "lattice",
        "cut",
        "sector",
        "delta_r",
        "k_eigenvalues",
        "r_probe",
        "min_cut_size",
        "max_cut_size",
    },
    "r_grid": {"min", "max", "points", "spacing"},
    "output": {"path", "format"},
}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    mode: str
    lattice: tuple[int, int] | None  # None = virtual-only
    cut_spec: str
    cut_sites: list[tuple[int, int]]
    sector: str = "all_plus"
    delta_r: float = 0.001
    k_eigenvalues: int = 0
    r_probe: float = 0.1
    min_cut_size: int = 4
    max_cut_size: int = 12
    r_min: float = 0.01
    r_max: float = 10.0
    r_points: int = 20
    r_spacing: str = "log"
    output_path: str = "out.csv"
    output_format: str = "csv"
    w: float = field(default=1.0, init=False)  # mu = r * w throughout

    def r_values(self) -> np.ndarray:
        if self.r_spacing == "log":
            return np.geomspace(self.r_min, self.r_max, self.r_points)
        return np.linspace(self.r_min, self.r_max, self.r_points)

    def echo(self) -> dict:
        return {
            "mode": self.mode,
            "lattice": "virtual-only" if self.lattice is None else
                       f"{self.lattice[0]}x{self.lattice[1]}",
            "cut": self.cut_spec,
            "cut_sites": [list(s) for s in self.cut_sites],
            "sector": self.sector,
            "delta_r": self.delta_r,
            "k_eigenvalues": self.k_eigenvalues,
            "r_grid": {
                "min": self.r_min,
                "max": self.r_max,
                "points": self.r_points,
                "spacing": self.r_spacing,
            },
            "w": self.w,
        }


def _parse_cut_spec(spec: str) -> tuple[str, object]:
    """Classify a cut spec as ("linear", N), ("rect", (W, H)) or ("sites", [...])."""
    spec = spec.strip()
    if spec.startswith("linear:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"[experiment] cut: bad linear preset {spec!r}")
        if n < 1:
            raise ConfigError(f"[experiment] cut: preset size must be positive, got {n}")
        return "linear", n
    if spec.startswith("rect:"):
        body = spec.split(":", 1)[1]
        try:
            w_txt, h_txt = body.lower().split("x")
            w, h = int(w_txt), int(h_txt)
        except ValueError:
            raise ConfigError(f"[experiment] cut: bad rect preset {spec!r}")
        if w < 1 or h < 1:
            raise ConfigError(f"[experiment] cut: preset size must be positive, got {spec!r}")
        return "rect", (w, h)
    try:
        sites = json.loads(spec)
        sites = [(int(x), int(y)) for x, y in sites]
    except (ValueError, TypeError):
        raise ConfigError(
            f"[experiment] cut: expected linear:N, rect:WxH, or JSON site list, got {spec!r}"
        )
    if not sites:
        raise ConfigError("[experiment] cut: site list is empty")
    return "sites", sites


def _expand_cut(lattice_spec: str, cut_spec: str):
    """Resolve lattice + cut to (lattice_dims_or_None, site list).

    virtual-only presets are embedded in the smallest lattice hosting an
    interior cut of the requested shape; explicit site lists need an
    explicit lattice.
    """
    kind, payload = _parse_cut_spec(cut_spec)
    if lattice_spec == "virtual-only":
        if kind == "linear":
            lat, _ = build_lattice(payload + 2, 3)
            return None, linear_cut_sites(lat, payload), (lat.n_x, lat.n_y)
        if kind == "rect":
            w, h = payload
            lat, _ = build_lattice(w + 2, h + 2)
            return None, rect_cut_sites(lat, w, h), (lat.n_x, lat.n_y)
        raise ConfigError(
            "[experiment] cut: explicit site lists require an explicit lattice"
        )
    try:
        nx_txt, ny_txt = lattice_spec.lower().split("x")
        nx, ny = int(nx_txt), int(ny_txt)
    except ValueError:
        raise ConfigError(
            f"[experiment] lattice: expected NxM or virtual-only, got {lattice_spec!r}"
        )
    lat, _ = build_lattice(nx, ny)
    if kind == "linear":
        sites = linear_cut_sites(lat, payload)
    elif kind == "rect":
        sites = rect_cut_sites(lat, *payload)
    else:
        sites = payload
        for s in sites:
            lat.site_index(s)  # range check
    return (nx, ny), sites, (nx, ny)


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}")

    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _KNOWN_KEYS[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")

    if "experiment" not in parser:
        raise ConfigError("missing [experiment] section")
    exp = parser["experiment"]
    if "mode" not in exp:
        raise ConfigError(f"missing [experiment] mode; valid modes: {', '.join(MODES)}")
    mode = exp["mode"].strip()
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; valid modes: {', '.join(MODES)}")
    if "cut" not in exp:
        raise ConfigError("missing [experiment] cut")
    lattice_spec = exp.get("lattice", "virtual-only").strip()
    cut_spec = exp["cut"].strip()
    lattice, sites, _embedded = _expand_cut(lattice_spec, cut_spec)
    if mode == "validate" and lattice is None:
        raise ConfigError("[experiment] validate mode needs an explicit lattice (NxM)")

    sector = exp.get("sector", "all_plus").strip()
    if sector not in ("all_plus", "all_sectors"):
        raise ConfigError(
            f"[experiment] sector must be all_plus or all_sectors, got {sector!r}"
        )

    def _num(section, key, default, cast, positive=False):
        raw = parser[section].get(key) if section in parser else None
        if raw is None:
            return default
        try:
            val = cast(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key}: not a valid {cast.__name__}: {raw!r}")
        if positive and val <= 0:
            raise ConfigError(f"[{section}] {key}: must be positive, got {val}")
        return val

    cfg = ExperimentConfig(
        mode=mode,
        lattice=lattice,
        cut_spec=cut_spec,
        cut_sites=sites,
        sector=sector,
        delta_r=_num("experiment", "delta_r", 0.001, float),
        k_eigenvalues=_num("experiment", "k_eigenvalues", 0, int),
        r_probe=_num("experiment", "r_probe", 0.1, float, positive=True),
        min_cut_size=_num("experiment", "min_cut_size", 4, int, positive=True),
        max_cut_size=_num("experiment", "max_cut_size", 12, int, positive=True),
        r_min=_num("r_grid", "min", 0.01, float, positive=True),
        r_max=_num("r_grid", "max", 10.0, float, positive=True),
        r_points=_num("r_grid", "points", 20, int, positive=True),
        r_spacing=(parser["r_grid"].get("spacing", "log").strip()
                   if "r_grid" in parser else "log"),
    )
    if cfg.r_spacing not in ("log", "linear"):
        raise ConfigError(f"[r_grid] spacing must be log or linear, got {cfg.r_spacing!r}")
    if cfg.r_min > cfg.r_max:
        raise ConfigError("[r_grid] min exceeds max")
    if cfg.max_cut_size < cfg.min_cut_size:
        raise ConfigError("[experiment] max_cut_size below min_cut_size")
    if "output" in parser:
        out = parser["output"]
        cfg.output_path = out.get("path", cfg.output_path).strip()
        cfg.output_format = out.get("format", "csv").strip()
        if cfg.output_format not in ("csv", "json"):
            raise ConfigError(
                f"[output] format must be csv or json, got {cfg.output_format!r}"
            )
    return cfg


def _build_cut(cfg: ExperimentConfig):
    if cfg.lattice is None:
        _, sites, dims = _expand_cut("virtual-only", cfg.cut_spec)
        lat, stabs = build_lattice(*dims)
    else:
        lat, stabs = build_lattice(*cfg.lattice)
        sites = cfg.cut_sites
    return lat, stabs, make_cut(lat, stabs, sites)


# ---- mode runners (each returns a ScanTable) ----


def _run_spectrum(cfg: ExperimentConfig) -> ScanTable:
    _, _, cut = _build_cut(cfg)
    sectors = SectorSet.build(cut, only_all_plus=(cfg.sector == "all_plus"))
    k = cfg.k_eigenvalues if cfg.k_eigenvalues > 0 else None
    return spectrum_table(cut, cfg.r_values(), k=k, sectors=sectors)


def _run_gap_scaling(cfg: ExperimentConfig) -> ScanTable:
    method = "majorana" if cfg.lattice is None else "ed"
    fit = gap_vs_cut_size(
        range(cfg.min_cut_size, cfg.max_cut_size + 1), r=cfg.r_probe, method=method
    )
    table = fit.table
    table.metadata.update(
        slope=fit.slope, intercept=fit.intercept, r_squared=fit.r_squared
    )
    return table


def _run_magnetization(cfg: ExperimentConfig) -> ScanTable:
    _, _, cut = _build_cut(cfg)
    return magnetization_curve(cut, cfg.r_values())


def _run_fidelity(cfg: ExperimentConfig) -> ScanTable:
    _, _, cut = _build_cut(cfg)
    scan = fidelity_scan(cut, cfg.r_values(), delta_r=cfg.delta_r)
    table = ScanTable(
        ["r", "fidelity"],
        metadata={
            "delta_r": scan.delta_r,
            "minimum_location": scan.minimum_location,
            "minimum_value": scan.minimum_value,
        },
    )
    for r, f in zip(scan.r_values, scan.fidelities):
        table.append(float(r), float(f))
    return table


def _run_validate(cfg: ExperimentConfig) -> ScanTable:
    from math import comb

    lat, stabs, cut = _build_cut(cfg)
    if lat.n_sites > 14:
        raise ConfigError(
            f"validate mode needs a dense-tractable lattice (<= 14 spins); "
            f"{lat.n_x}x{lat.n_y} has {lat.n_sites}"
        )
    table = ScanTable(["r", "max_deviation"], metadata={"tolerance": 1e-10})
    for r in (0.3, 1.0, 3.0):
        mu, w = r * cfg.w, cfg.w
        full = build_full_hamiltonian(lat, stabs, cut, mu, w).eigenvalues()
        vh = build_virtual_hamiltonian(cut, mu, w)
        block = np.linalg.eigvalsh(vh.dense_matrix())
        n_phi = len(cut.phi)
        pieces = [
            np.tile(block + (mu / 2.0) * (2 * k - n_phi), 2 * comb(n_phi, k))
            for k in range(n_phi + 1)
        ]
        recon = np.sort(np.concatenate(pieces))
        dev = float(np.max(np.abs(np.sort(full) - recon)))
        table.append(float(r), dev)
        print(f"r = {r:g}: max |full - reconstructed| = {dev:.3e}")
    worst = max(table.column("max_deviation"))
    status = "PASS" if worst < 1e-10 else "FAIL"
    print(f"validate: {status} (worst deviation {worst:.3e}, tolerance 1e-10)")
    if status == "FAIL":
        raise SolverError(f"block reconstruction deviation {worst:.3e} exceeds 1e-10")
    return table


def _run_majorana(cfg: ExperimentConfig) -> ScanTable:
    kind, payload = _parse_cut_spec(cfg.cut_spec)
    if kind == "linear":
        n = payload
    elif kind == "sites":
        ys = {y for _, y in cfg.cut_sites}
        xs = sorted(x for x, _ in cfg.cut_sites)
        if len(ys) != 1 or xs != list(range(xs[0], xs[0] + len(xs))):
            raise ConfigError("majorana mode needs a linear (single-row) cut")
        n = len(xs)
    else:
        raise ConfigError("majorana mode needs a linear cut")
    table = ScanTable(
        ["r", "ground_energy", "cross_parity_gap", "within_parity_gap"],
        metadata={"cut_size": n},
    )
    for r in cfg.r_values():
        chain = build_chain(n, mu=float(r) * cfg.w, w=cfg.w)
        gaps = many_body_gap(chain)
        table.append(
            float(r), ground_energy(chain), gaps.cross_parity, gaps.within_parity
        )
    return table


_RUNNERS = {
    "spectrum": _run_spectrum,
    "gap-scaling": _run_gap_scaling,
    "magnetization": _run_magnetization,
    "fidelity": _run_fidelity,
    "validate": _run_validate,
    "majorana": _run_majorana,
}


def run(cfg: ExperimentConfig) -> ScanTable:
    start = time.perf_counter()
    table = _RUNNERS[cfg.mode](cfg)
    elapsed = time.perf_counter() - start
    table.metadata = {
        "config": cfg.echo(),
        "version": __version__,
        "wall_time_s": round(elapsed, 6),
        **table.metadata,
    }
    table.write(cfg.output_path, cfg.output_format)
    return table


def _apply_threads(n: int | None) -> None:
    if n is None:
        env = os.environ.get("TWISTLAB_THREADS")
        n = int(env) if env else None
    if n is None:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(n)
    try:
        import threadpoolctl

        threadpoolctl.threadpool_limits(limits=n)
    except ImportError:
        pass


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="twistlab", description="Run one configured experiment."
    )
    ap.add_argument("config", help="path to an INI experiment config")
    ap.add_argument("--mode", choices=MODES, help="override [experiment] mode")
    ap.add_argument("--output", help="override [output] path")
    ap.add_argument("--threads", type=int, help="BLAS/LAPACK thread count")
    args = ap.parse_args(argv)

    _apply_threads(args.threads)
    try:
        text = open(args.config, encoding="utf-8").read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text)
        if args.mode:
            cfg.mode = args.mode
            if cfg.mode == "validate" and cfg.lattice is None:
                raise ConfigError("validate mode needs an explicit lattice (NxM)")
        if args.output:
            cfg.output_path = args.output
            if args.output.endswith(".json"):
                cfg.output_format = "json"
            elif args.output.endswith(".csv"):
                cfg.output_format = "csv"
        table = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(table.rows)} rows to {cfg.output_path} ({cfg.output_format})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
