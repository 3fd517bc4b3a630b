"""Command-line entry point: ``qesvar {exact,scan,reference,report}``.

Every subcommand reads an optional JSON config (``--config``) and applies
flag overrides on top.  Exit status is 0 on success, 2 for configuration
problems (including couplings that violate the QES condition) and 3 for
numerical failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction
from typing import Any

from .euler import Resonance
from .qes import ConditionViolated, QesModel, solve_exact_spectrum
from .reference import ConvergenceFailure, reference_spectrum
from .variational import EmptyWindow, scan_delta, truncated_state

log = logging.getLogger("qesvar")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3

# (level, degree) pairs compared against the reference in `report`
DEFAULT_TABLE = ((1, 5), (1, 9), (3, 5), (3, 9), (5, 13))


class ConfigError(ValueError):
    pass


def num(x: float) -> float:
    """Round to 9 significant digits for output."""
    return float(f"{x:.9g}")


@dataclass
class RunConfig:
    alpha: float = -11.0
    beta: float = 0.0
    gamma: float = 1.0
    sigma: float = 0.0
    n: int = 4
    parity: str = "odd"
    degree: int = 9
    window: tuple[float, float] = (-12.0, -4.0)
    step: float = 0.01
    normalize_delta: bool = False
    grid_L: float = 5.0
    grid_N: int = 4000
    tol: float = 1e-10
    k_max: int = 20
    richardson: bool = True
    reference: bool = True
    report_window: tuple[float, float] = (-12.0, 24.0)
    table: tuple[tuple[int, int], ...] = DEFAULT_TABLE
    output: str | None = None

    def __post_init__(self):
        self.window = tuple(float(v) for v in self.window)
        self.report_window = tuple(float(v) for v in self.report_window)
        self.table = tuple((int(a), int(b)) for a, b in self.table)
        self.validate()

    def validate(self):
        if self.parity not in ("even", "odd"):
            raise ConfigError(f"parity must be 'even' or 'odd', not {self.parity!r}")
        if (self.degree % 2 == 1) != (self.parity == "odd"):
            raise ConfigError(f"degree {self.degree} does not match {self.parity} parity")
        for name in ("window", "report_window"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ConfigError(f"{name} [{lo}, {hi}] is empty")
        if not self.step > 0:
            raise ConfigError("step must be positive")
        if not self.gamma > 0:
            raise ConfigError("gamma must be positive")
        if self.grid_N < 3 or self.grid_L <= 0:
            raise ConfigError("grid needs N >= 3 and L > 0")

    @property
    def model(self) -> QesModel:
        try:
            return QesModel(self.alpha, self.beta, self.gamma, self.sigma, self.n)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        flat: dict[str, Any] = {}
        for key, val in doc.items():
            if isinstance(val, dict) and key in ("model", "scan", "grid", "report"):
                flat.update(val)
            else:
                flat[key] = val
        flat = {k.replace("-", "_"): v for k, v in flat.items()}
        if "L" in flat:
            flat["grid_L"] = flat.pop("L")
        if "N" in flat:
            flat["grid_N"] = flat.pop("N")
        known = {f.name for f in fields(cls)}
        unknown = set(flat) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**flat)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc


@dataclass
class Report:
    """Report document with fixed sections; see README for field names."""

    model: dict = field(default_factory=dict)
    exact: dict = field(default_factory=dict)
    variational: dict = field(default_factory=dict)
    reference: dict = field(default_factory=dict)
    validation: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> "Report":
        return cls(**{f.name: doc.get(f.name, f.default_factory()) for f in fields(cls)})


def _frac(q: Fraction | None) -> str | None:
    return None if q is None else str(q)


def exact_section(cfg: RunConfig) -> tuple[dict, list]:
    spec = solve_exact_spectrum(cfg.model)
    section = {
        "energies": [num(e.energy) for e in spec],
        "energies_exact": [_frac(e.energy_exact) for e in spec],
        "polynomials": [[str(c) for c in e.polynomial.coeffs] for e in spec],
        "node_counts": [e.node_count for e in spec],
        "termination_polynomial": [str(c) for c in spec.termination.coeffs],
        "exact_arithmetic": spec.exact,
    }
    validation = [asdict(v) for v in spec.validation]
    return section, validation


def reference_section(cfg: RunConfig) -> dict:
    ref = reference_spectrum(cfg.model, cfg.k_max, cfg.grid_L, cfg.grid_N, cfg.tol, cfg.richardson)
    return {
        "L": cfg.grid_L,
        "N": cfg.grid_N,
        "tol": cfg.tol,
        "richardson": cfg.richardson,
        "levels": list(range(len(ref))),
        "eigenvalues": [num(e) for e in ref.eigenvalues],
    }


def variational_section(cfg: RunConfig, ref: list[float] | None) -> dict:
    model = cfg.model
    curves = {}
    entries = []
    for level, degree in cfg.table:
        parity = "odd" if level % 2 else "even"
        if (degree % 2 == 1) != (parity == "odd"):
            raise ConfigError(f"degree {degree} cannot describe level {level}")
        key = (parity, degree)
        if key not in curves:
            curves[key] = scan_delta(
                truncated_state(model, parity, degree), cfg.report_window, cfg.step, cfg.normalize_delta
            )
        hits = [m for m in curves[key].physical_minima() if m.node_count == level]
        E = hits[0].E_star if hits else None
        E_ref = ref[level] if ref is not None and level < len(ref) else None
        entries.append({
            "level": level,
            "degree": degree,
            "parity": parity,
            "E_star": None if E is None else num(E),
            "delta_star": None if E is None else num(hits[0].delta_star),
            "E_ref": None if E_ref is None else num(E_ref),
            "deviation_percent": (
                None if E is None or E_ref is None else num(100 * abs(E - E_ref) / abs(E_ref))
            ),
        })
    return {
        "normalized": cfg.normalize_delta,
        "window": list(cfg.report_window),
        "step": cfg.step,
        "entries": entries,
    }


def build_report(cfg: RunConfig) -> Report:
    exact, validation = exact_section(cfg)
    reference = reference_section(cfg) if cfg.reference else {}
    ref = reference.get("eigenvalues")
    variational = variational_section(cfg, ref)
    model = {k: getattr(cfg, k) for k in ("alpha", "beta", "gamma", "sigma", "n")}
    return Report(model, exact, variational, reference, validation)


def format_curve(curve) -> str:
    lines = ["# E delta"]
    lines += [f"{num(E)!r} {num(d)!r}" for E, d in zip(curve.energies, curve.delta)]
    lines.append("# minima: E_star delta_star nodes physical kind")
    for m in curve.minima:
        lines.append(f"# {num(m.E_star)!r} {num(m.delta_star)!r} {m.node_count} {int(m.physical)} {m.kind}")
    return "\n".join(lines) + "\n"


def parse_curve(text: str) -> list[tuple[float, float]]:
    rows = []
    for line in text.splitlines():
        if line.startswith("#") or not line.strip():
            continue
        E, d = line.split()
        rows.append((float(E), float(d)))
    return rows


# ---------------------------------------------------------------------------


def cmd_exact(cfg: RunConfig) -> str:
    section, validation = exact_section(cfg)
    return json.dumps({"exact": section, "validation": validation}, indent=2, sort_keys=True)


def cmd_scan(cfg: RunConfig) -> str:
    state = truncated_state(cfg.model, cfg.parity, cfg.degree)
    return format_curve(scan_delta(state, cfg.window, cfg.step, cfg.normalize_delta))


def cmd_reference(cfg: RunConfig) -> str:
    return json.dumps({"reference": reference_section(cfg)}, indent=2, sort_keys=True)


def cmd_report(cfg: RunConfig) -> str:
    return build_report(cfg).to_json()


COMMANDS = {"exact": cmd_exact, "scan": cmd_scan, "reference": cmd_reference, "report": cmd_report}

_OVERRIDES = {
    "alpha": float, "beta": float, "gamma": float, "sigma": float, "n": int,
    "parity": str, "degree": int, "step": float,
    "grid_L": float, "grid_N": int,
}


def _window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("window must be 'lo,hi'") from exc
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qesvar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON configuration document")
        for opt, typ in _OVERRIDES.items():
            p.add_argument("--" + opt.replace("_", "-"), dest=opt, type=typ)
        p.add_argument("--window", type=_window)
        p.add_argument("--normalize-delta", dest="normalize_delta", action="store_true", default=None)
        p.add_argument("--no-reference", dest="reference", action="store_false", default=None)
        p.add_argument("-o", "--output")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    doc: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    cfg = RunConfig.from_dict(doc)
    over = {k: getattr(args, k) for k in (*_OVERRIDES, "window", "normalize_delta", "reference", "output")
            if getattr(args, k, None) is not None}
    try:
        return replace(cfg, **over)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        text = COMMANDS[args.command](cfg)
    except (ConfigError, ConditionViolated, EmptyWindow) as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except (ConvergenceFailure, Resonance, ArithmeticError) as exc:
        log.error("computation failed: %s", exc)
        return EXIT_COMPUTE
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
