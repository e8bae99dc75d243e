"""Command-line front end.

Subcommands: spin-sweep, gas-scan, ree, energy-witness, selfcheck.
JSON specs in, CSV or JSON out; floats are printed with 12 significant
digits and all randomness flows from --seed through named child streams, so
identical configurations produce byte-identical output.

Exit codes: 0 ok, 1 selfcheck failure, 2 config error, 3 resource cap,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from . import gas, thermo, witness
from .ent import FrankWolfeConfig, energy_witness, ree_lower_bound, ree_upper_bound
from .models import ModeSpectrum, SpinModelSpec, build_spin_hamiltonian, ground_state, make_spectrum
from .qops import DimensionCapError, HermitianOperator
from .seeding import child_seed, named_rng

EXIT_OK = 0
EXIT_SELFCHECK = 1
EXIT_CONFIG = 2
EXIT_RESOURCE = 3
EXIT_NUMERICAL = 4


class ConfigError(ValueError):
    """Invalid CLI configuration or input file."""


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


@dataclass(frozen=True)
class RunConfig:
    command: str
    model_path: str | None = None
    spectrum_spec: str | None = None
    temps: str | None = None
    seed: int = 42
    out: str | None = None
    format: str = "csv"
    restarts: int = 32
    tol: float = 1e-4
    max_iter: int = 500
    upper: bool = False
    tstar_tol: float = 1e-6
    fit_window: str | None = None
    energy_per_particle: float = 1.0
    corrupt: str | None = None


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------

def parse_temps(spec: str) -> list[float]:
    """Parse ``lo:hi:count`` or ``lo:hi:count:log`` into an ascending grid."""
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(f"bad --temps {spec!r}; expected lo:hi:count[:log]")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad --temps {spec!r}: {exc}") from exc
    if len(parts) == 4 and parts[3] != "log":
        raise ConfigError(f"bad --temps scale {parts[3]!r}; only 'log' is supported")
    if count < 1 or lo <= 0 or (count > 1 and hi <= lo):
        raise ConfigError(f"bad --temps {spec!r}: need lo > 0, hi > lo, count >= 1")
    if count == 1:
        return [lo]
    if len(parts) == 4:
        return [float(t) for t in np.geomspace(lo, hi, count)]
    return [float(t) for t in np.linspace(lo, hi, count)]


def load_model(path: str) -> SpinModelSpec:
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"model file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"malformed JSON in {path}: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"model file {path} must hold a JSON object")
    known = {"kind", "n_sites", "coupling", "J", "field", "h", "boundary", "custom_terms"}
    extra = set(raw) - known
    if extra:
        raise ConfigError(f"unknown model keys {sorted(extra)} in {path}")
    if "kind" not in raw or "n_sites" not in raw:
        raise ConfigError(f"model file {path} needs 'kind' and 'n_sites'")
    terms = raw.get("custom_terms")
    if terms is not None:
        terms = tuple((tuple(t[0]), str(t[1]), float(t[2])) for t in terms)
    try:
        return SpinModelSpec(
            kind=raw["kind"],
            n_sites=int(raw["n_sites"]),
            coupling=float(raw.get("coupling", raw.get("J", 1.0))),
            field=float(raw.get("field", raw.get("h", 0.0))),
            boundary=raw.get("boundary", "open"),
            custom_terms=terms,
        )
    except DimensionCapError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid model in {path}: {exc}") from exc


_GEN_FLOATS = {"omega", "velocity", "particle_target", "chemical_potential"}
_GEN_INTS = {"n_modes"}


def load_spectrum(spec: str) -> ModeSpectrum:
    """Load a ModeSpectrum from a JSON file or a ``gen:kind:k=v,...`` string."""
    if spec.startswith("gen:"):
        parts = spec.split(":", 2)
        if len(parts) != 3:
            raise ConfigError(f"bad generator spec {spec!r}; expected gen:kind:k=v,...")
        kind = parts[1]
        kwargs: dict = {}
        for item in parts[2].split(","):
            if "=" not in item:
                raise ConfigError(f"bad generator parameter {item!r} in {spec!r}")
            key, value = item.split("=", 1)
            key = key.strip()
            if key in _GEN_FLOATS:
                kwargs[key] = float(value)
            elif key in _GEN_INTS:
                kwargs[key] = int(value)
            elif key == "statistics":
                kwargs[key] = value.strip()
            else:
                raise ConfigError(f"unknown generator parameter {key!r} in {spec!r}")
        try:
            return make_spectrum(kind, **kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid spectrum spec {spec!r}: {exc}") from exc
    try:
        raw = json.loads(Path(spec).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"spectrum file not found: {spec}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"malformed JSON in {spec}: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc
    if not isinstance(raw, dict) or "frequencies" not in raw or "statistics" not in raw:
        raise ConfigError(f"spectrum file {spec} needs 'frequencies' and 'statistics'")
    try:
        return ModeSpectrum(
            frequencies=np.asarray(raw["frequencies"], dtype=float),
            statistics=raw["statistics"],
            particle_target=raw.get("particle_target"),
            chemical_potential=raw.get("chemical_potential"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid spectrum in {spec}: {exc}") from exc


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _emit(text: str, out_path: str | None, stream: TextIO) -> None:
    if out_path:
        Path(out_path).write_text(text)
    else:
        stream.write(text)


def _csv_lines(header: Sequence[str], rows: Sequence[Sequence], footer: Sequence[Sequence]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    for row in footer:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def run_spin_sweep(cfg: RunConfig, stream: TextIO = sys.stdout) -> int:
    if not cfg.model_path or not cfg.temps:
        raise ConfigError("spin-sweep needs --model and --temps")
    spec = load_model(cfg.model_path)
    h = build_spin_hamiltonian(spec)
    grid = parse_temps(cfg.temps)
    fw = FrankWolfeConfig(
        max_iter=cfg.max_iter, tol=cfg.tol, seed=child_seed(cfg.seed, "spin-sweep-fw")
    )
    result = witness.sweep(
        h, grid, compute_upper=cfg.upper, fw_config=fw, t_star_tol=cfg.tstar_tol
    )
    if cfg.format == "json":
        payload = {
            "command": "spin-sweep",
            "seed": cfg.seed,
            "reports": [
                {
                    "T": r.T,
                    "S": r.S,
                    "p": r.p,
                    "neg_ln_p": r.neg_ln_p,
                    "E_lower": r.E_lower,
                    "E_upper": r.E_upper,
                    "eq2_fires": r.eq2_fires,
                    "eq4_fires": r.eq4_fires,
                    "ground_degeneracy": r.ground_degeneracy,
                }
                for r in result.reports
            ],
            "T_star_eq2": result.T_star_eq2,
            "T_star_eq4": result.T_star_eq4,
        }
        _emit(_json_text(payload), cfg.out, stream)
    else:
        header = ["T", "S", "p", "neg_ln_p", "E_lower", "E_upper", "eq2_fires", "eq4_fires"]
        rows = [
            [r.T, r.S, r.p, r.neg_ln_p, r.E_lower, r.E_upper, r.eq2_fires, r.eq4_fires]
            for r in result.reports
        ]
        footer = [
            ["T_star_eq2", result.T_star_eq2],
            ["T_star_eq4", result.T_star_eq4],
        ]
        _emit(_csv_lines(header, rows, footer), cfg.out, stream)
    return EXIT_OK


def run_gas_scan(cfg: RunConfig, stream: TextIO = sys.stdout) -> int:
    if not cfg.spectrum_spec or not cfg.temps:
        raise ConfigError("gas-scan needs --spectrum and --temps")
    spectrum = load_spectrum(cfg.spectrum_spec)
    grid = parse_temps(cfg.temps)
    try:
        states = [gas.gas_state(spectrum, t) for t in grid]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if cfg.fit_window:
        try:
            lo, hi = (float(v) for v in cfg.fit_window.split(":"))
        except ValueError as exc:
            raise ConfigError(f"bad --fit-window {cfg.fit_window!r}; expected lo:hi") from exc
    else:
        lo, hi = gas.default_fit_window(spectrum)
    in_window = [t for t in grid if lo <= t <= hi]
    if len(in_window) < 8:
        raise ConfigError(
            f"fit window [{_fmt(lo)}, {_fmt(hi)}] holds {len(in_window)} grid samples; "
            "need at least 8 (adjust --temps or --fit-window)"
        )
    fit = gas.fit_entropy_scaling(spectrum, in_window)
    t_star = gas.critical_temperature_estimate(fit, cfg.energy_per_particle)

    # classical-regime block, only when the grid reaches the geometric scale
    if spectrum.particle_target is not None:
        n_mb = float(spectrum.particle_target)
    else:
        n_mb = float(np.mean([s.N_actual for s in states]))
    omega_g = gas.geometric_frequency_scale(spectrum, n_mb)
    classical_ts = [t for t in grid if t >= omega_g]
    mb_fires_any = None
    if classical_ts:
        mb_fires_any = any(
            gas.mb_witness_check(spectrum, n_mb, t).fires for t in classical_ts
        )

    if cfg.format == "json":
        payload = {
            "command": "gas-scan",
            "seed": cfg.seed,
            "rows": [
                {"T": s.T, "mu": s.mu, "S": s.S, "F": s.F, "N_actual": s.N_actual}
                for s in states
            ],
            "fit": {
                "p_fit": fit.exponent,
                "omega_tilde": fit.omega_tilde,
                "r_squared": fit.r_squared,
                "T_window": list(fit.T_window),
                "n_reference": fit.n_reference,
                "T_star": t_star,
            },
            "mb": None
            if mb_fires_any is None
            else {
                "omega_tilde_g": omega_g,
                "n_particles": n_mb,
                "fires_any": mb_fires_any,
                "points": len(classical_ts),
            },
        }
        _emit(_json_text(payload), cfg.out, stream)
    else:
        header = ["T", "mu", "S", "F", "N_actual"]
        rows = [[s.T, s.mu, s.S, s.F, s.N_actual] for s in states]
        footer = [
            ["p_fit", fit.exponent],
            ["omega_tilde", fit.omega_tilde],
            ["r_squared", fit.r_squared],
            ["T_star", t_star],
        ]
        if mb_fires_any is not None:
            footer.append(["mb_omega_tilde_g", omega_g])
            footer.append(["mb_fires_any", mb_fires_any])
        _emit(_csv_lines(header, rows, footer), cfg.out, stream)
    return EXIT_OK


def run_ree(cfg: RunConfig, stream: TextIO = sys.stdout) -> int:
    if not cfg.model_path:
        raise ConfigError("ree needs --model")
    spec = load_model(cfg.model_path)
    h = build_spin_hamiltonian(spec)
    gs = ground_state(h)
    lower = ree_lower_bound(gs.state)
    fw = FrankWolfeConfig(
        max_iter=cfg.max_iter,
        tol=cfg.tol,
        restarts=max(1, cfg.restarts),
        seed=child_seed(cfg.seed, "ree-fw"),
    )
    upper = ree_upper_bound(gs.state.to_density(), fw)
    payload = {
        "command": "ree",
        "seed": cfg.seed,
        "E0": gs.energy,
        "ground_degeneracy": gs.degeneracy,
        "E_lower": lower.lower,
        "lower_method": lower.method,
        "E_upper": upper.upper,
        "upper_iterations": upper.iterations,
        "upper_converged": upper.converged,
    }
    if cfg.format == "json":
        _emit(_json_text(payload), cfg.out, stream)
    else:
        _emit(_csv_lines(list(payload), [list(payload.values())], []), cfg.out, stream)
    return EXIT_OK


def run_energy_witness(cfg: RunConfig, stream: TextIO = sys.stdout) -> int:
    if not cfg.model_path:
        raise ConfigError("energy-witness needs --model")
    spec = load_model(cfg.model_path)
    h = build_spin_hamiltonian(spec)
    gs = ground_state(h)
    res = energy_witness(
        h, gs.energy, restarts=cfg.restarts, seed=child_seed(cfg.seed, "energy-witness")
    )
    payload = {
        "command": "energy-witness",
        "seed": cfg.seed,
        "E0": gs.energy,
        "sep_min": res.sep_min,
        "entangled": res.entangled,
    }
    if cfg.format == "json":
        _emit(_json_text(payload), cfg.out, stream)
    else:
        _emit(_csv_lines(list(payload), [list(payload.values())], []), cfg.out, stream)
    return EXIT_OK


# ---------------------------------------------------------------------------
# selfcheck
# ---------------------------------------------------------------------------

def _selfcheck_properties(seed: int):
    """Yield (name, ok, detail) for the built-in identity/inequality suite."""
    rng = named_rng(seed, "selfcheck-spectra")

    # Boltzmann-weight vs entropy chain and the thermodynamic identity,
    # over seeded random spectra and a log grid of temperatures.
    worst_slack = math.inf
    worst_gap = -math.inf
    worst_ident = 0.0
    for _ in range(30):
        levels = int(rng.integers(4, 33))
        energies = np.sort(rng.uniform(-2.0, 2.0, levels))
        for t in np.geomspace(1e-3, 1e3, 12):
            sc = thermo.canonical_scalars(energies, float(t))
            slack = (sc.U - energies[0]) / t
            worst_slack = min(worst_slack, slack)
            worst_gap = max(worst_gap, math.exp(-sc.S) - sc.p)
            ident = abs(sc.S - (sc.U - sc.F) / t) / max(1.0, abs(sc.S))
            worst_ident = max(worst_ident, ident)
    yield (
        "boltzmann-weight-entropy-bound",
        worst_slack >= -1e-10 and worst_gap <= 1e-10,
        f"min slack {worst_slack:.3e}, max p-gap {worst_gap:.3e}",
    )
    yield (
        "entropy-identity",
        worst_ident <= 1e-8,
        f"max relative deviation {worst_ident:.3e}",
    )

    # Mode-sum entropy vs the temperature derivative of the free energy.
    worst_fd = 0.0
    for _ in range(6):
        m = int(rng.integers(4, 17))
        freqs = np.sort(rng.uniform(0.05, 2.0, m))
        for stats in ("bose", "fermi"):
            if stats == "bose":
                mu = float(freqs[0] - rng.uniform(0.1, 0.5))
            else:
                # level near mu keeps the finite difference well-conditioned
                # against the Fermi sea's T-independent free-energy offset
                mu = float(rng.choice(freqs) + rng.uniform(-0.05, 0.05))
            spectrum = ModeSpectrum(freqs, stats, chemical_potential=mu)
            for t in np.geomspace(0.05, 50.0, 8):
                t = float(t)
                s_formula = gas.gas_state(spectrum, t).S
                delta = 1e-4 * t
                f_plus = gas.gas_state(spectrum, t + delta).F
                f_minus = gas.gas_state(spectrum, t - delta).F
                s_fd = -(f_plus - f_minus) / (2 * delta)
                rel = abs(s_formula - s_fd) / max(abs(s_formula), 1e-300)
                worst_fd = max(worst_fd, rel)
    yield (
        "gas-entropy-free-energy",
        worst_fd <= 1e-5,
        f"max relative deviation {worst_fd:.3e}",
    )

    # Witness implication chain on real model sweeps: a firing 2-site chain
    # and a degenerate-ground 3-site chain that must stay silent.
    ok = True
    fired = 0
    points = 0
    for n_sites in (2, 3):
        h = build_spin_hamiltonian(SpinModelSpec(kind="heisenberg", n_sites=n_sites))
        result = witness.sweep(h, [float(t) for t in np.geomspace(0.1, 20.0, 15)])
        ok = ok and all((not r.eq4_fires) or r.eq2_fires for r in result.reports)
        fired += sum(r.eq2_fires for r in result.reports)
        points += len(result.reports)
    yield (
        "witness-implication",
        ok and fired > 0,
        f"{fired}/{points} grid points fired, no implication violations",
    )


def run_selfcheck(
    seed: int = 42, corrupt: str | None = None, stream: TextIO = sys.stdout
) -> int:
    """Run the built-in property suite; exit 0 iff every property passes.

    ``corrupt`` is a test hook: naming a property forces its verdict to fail
    so the failure path is exercisable.
    """
    failed = []
    for name, ok, detail in _selfcheck_properties(seed):
        if corrupt == name:
            ok = False
            detail += " [tolerance corrupted by test hook]"
        stream.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
        if not ok:
            failed.append(name)
    if failed:
        stream.write(f"selfcheck: FAILED ({', '.join(failed)})\n")
        return EXIT_SELFCHECK
    stream.write("selfcheck: OK\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermwit",
        description="Entropy-based entanglement certification for thermal states "
        "(k_B = 1, energies = temperature units, entropies in nats).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=42, help="master RNG seed (default 42)")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("spin-sweep", help="temperature sweep of both witnesses for a spin model")
    p.add_argument("--model", required=True, help="spin model JSON file")
    p.add_argument("--temps", required=True, help="temperature grid lo:hi:count[:log]")
    p.add_argument("--upper", action="store_true", help="also compute the REE upper bound")
    p.add_argument("--tol", type=float, default=1e-4, help="upper-bound duality-gap tolerance")
    p.add_argument("--max-iter", type=int, default=500, dest="max_iter")
    p.add_argument("--tstar-tol", type=float, default=1e-6, dest="tstar_tol",
                   help="bisection tolerance for the threshold temperatures")
    common(p)

    p = sub.add_parser("gas-scan", help="ideal-gas scan: occupations, entropy, scaling fit")
    p.add_argument("--spectrum", required=True,
                   help="spectrum JSON file or gen:kind:k=v,... generator spec")
    p.add_argument("--temps", required=True, help="temperature grid lo:hi:count[:log]")
    p.add_argument("--fit-window", default=None, dest="fit_window",
                   help="low-T fit window lo:hi (default from the spectral scale)")
    p.add_argument("--energy-per-particle", type=float, default=1.0,
                   dest="energy_per_particle",
                   help="proportionality constant in the E = c*N threshold algebra")
    common(p)

    p = sub.add_parser("ree", help="REE bounds for a spin model's ground state")
    p.add_argument("--model", required=True)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--max-iter", type=int, default=500, dest="max_iter")
    common(p)

    p = sub.add_parser("energy-witness", help="separable-energy witness for a spin model")
    p.add_argument("--model", required=True)
    p.add_argument("--restarts", type=int, default=32)
    common(p)

    p = sub.add_parser("selfcheck", help="run the built-in identity/inequality suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--corrupt", default=None, help=argparse.SUPPRESS)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        model_path=getattr(args, "model", None),
        spectrum_spec=getattr(args, "spectrum", None),
        temps=getattr(args, "temps", None),
        seed=args.seed,
        out=getattr(args, "out", None),
        format=getattr(args, "format", "csv"),
        restarts=getattr(args, "restarts", 32),
        tol=getattr(args, "tol", 1e-4),
        max_iter=getattr(args, "max_iter", 500),
        upper=getattr(args, "upper", False),
        tstar_tol=getattr(args, "tstar_tol", 1e-6),
        fit_window=getattr(args, "fit_window", None),
        energy_per_particle=getattr(args, "energy_per_particle", 1.0),
        corrupt=getattr(args, "corrupt", None),
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config_from_args(args)
    try:
        if cfg.command == "spin-sweep":
            return run_spin_sweep(cfg)
        if cfg.command == "gas-scan":
            return run_gas_scan(cfg)
        if cfg.command == "ree":
            return run_ree(cfg)
        if cfg.command == "energy-witness":
            return run_energy_witness(cfg)
        if cfg.command == "selfcheck":
            return run_selfcheck(seed=cfg.seed, corrupt=cfg.corrupt)
        raise ConfigError(f"unknown command {cfg.command!r}")
    except DimensionCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RuntimeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
