"""Command-line interface: ``spectral-design <command> [options]``.

Every command accepts ``--preset``, ``--config FILE`` and explicit flags;
later sources override earlier ones in that order.  Tables are written as
CSV (header row, ``#`` metadata lines, 17 significant digits) to stdout or
``--output``.  Exit status is 0 on success, 2 for invalid input and 1 for
numerical failures.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DivergenceError, NumericalError, ParamError, ValidationError
from .hamiltonian import DEFAULT_N, QuantumSystem, SystemTag, assemble_system
from .reconstruct import Method, interior_hull, morse_exact, parse_grid, quadrature_sample, reconstruct
from .system import PhysicalParams, bound_spectrum, phase_shifts
from .wavefunction import DIVERGENT_RATIO, bound_component, continuum_component, divergence_diagnostic

PRESETS = {
    "fig1": {"system": "morse", "mu": -3.7, "a": 2.5, "nu": 2.5},
    "fig2": {"system": "radial", "mu": -7.7, "a": 7.7, "ell": 1, "alpha": 0.5},
    # the exponential and sinh maps overflow at larger truncations, so the
    # preset sizes leave room for the N + 10 convergence reference
    "fig3": {"system": "expgauss", "mu": -4.3, "a": 4.3, "alpha": 0.2, "N": 20},
    "fig4": {"system": "sinh", "mu": -3.2, "a": 3.2, "alpha": 0.3, "nu": 3.2, "N": 16},
}

# config key -> converter; flag names match (``--lambda`` for ``lambda``)
_KEYS = {
    "system": str, "mu": float, "a": float, "lambda": float, "alpha": float,
    "nu": float, "ell": int, "N": int, "grid": str, "method": str,
    "energies": str, "k": int, "energy": float, "output": str,
}

VALIDATE_SIZES = (20, 40, 60, 80)
_DEFAULT_GRID_POINTS = 401


@dataclass(frozen=True)
class RunConfig:
    system: SystemTag
    params: PhysicalParams
    N: int
    grid: str | None
    method: Method
    output_path: str | None
    extra: dict


def fmt(value) -> str:
    return "%.17g" % value


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in _KEYS:
            raise ParamError(f"{path}:{lineno}: cannot parse {raw.strip()!r}")
        out[key] = _convert(key, value)
    return out


def _convert(key, value):
    try:
        return _KEYS[key](value)
    except ValueError:
        raise ParamError(f"invalid value for {key}: {value!r}") from None


def build_config(ns: argparse.Namespace) -> RunConfig:
    """Merge preset, config file and flags, then validate."""
    merged: dict = {}
    if ns.preset:
        merged.update(PRESETS[ns.preset])
    if ns.config:
        try:
            merged.update(read_config(ns.config))
        except OSError as exc:
            raise ParamError(f"cannot read config file: {exc}") from None
    for key in _KEYS:
        value = getattr(ns, key, None)
        if value is not None:
            merged[key] = value

    if "system" not in merged:
        raise ParamError("no system given (use --system or --preset)")
    try:
        tag = SystemTag(merged["system"])
    except ValueError:
        raise ParamError(f"unknown system {merged['system']!r}") from None
    if "mu" not in merged:
        raise ParamError("mu is required")
    mu = merged["mu"]
    params = PhysicalParams(mu=mu, a=merged.get("a", -mu), lam=merged.get("lambda", 1.0),
                            alpha=merged.get("alpha", 0.0), nu=merged.get("nu"), ell=merged.get("ell", 0))
    N = merged.get("N", DEFAULT_N)
    if N < 1:
        raise ParamError("N must be a positive integer")
    try:
        method = Method(merged.get("method", "series"))
    except ValueError:
        raise ParamError(f"unknown method {merged['method']!r}") from None
    extra = {k: merged[k] for k in ("energies", "k", "energy") if k in merged}
    return RunConfig(tag, params, N, merged.get("grid"), method, merged.get("output"), extra)


def _metadata(cfg: RunConfig, **more) -> list[str]:
    p = cfg.params
    lines = [f"# system={cfg.system.value}",
             f"# mu={fmt(p.mu)} a={fmt(p.a)} lambda={fmt(p.lam)} alpha={fmt(p.alpha)} "
             f"nu={fmt(p.nu)} ell={p.ell}",
             f"# N={cfg.N} method={cfg.method.value}"]
    lines += [f"# {k}={v}" for k, v in more.items()]
    return lines


def _table(header, rows) -> list[str]:
    return [",".join(header)] + [",".join(fmt(v) if not isinstance(v, (int, np.integer)) else str(v)
                                          for v in row) for row in rows]


def _default_grid(cfg: RunConfig, system: QuantumSystem) -> np.ndarray:
    nodes, _ = quadrature_sample(assemble_system(system, cfg.N), system.basis)
    return np.linspace(nodes[0], nodes[-1], _DEFAULT_GRID_POINTS)


def _grid(cfg: RunConfig, system: QuantumSystem) -> np.ndarray:
    return parse_grid(cfg.grid) if cfg.grid else _default_grid(cfg, system)


# ---------------------------------------------------------------------------
# commands; each returns the output lines

def _spectrum_rows(cfg: RunConfig, system: QuantumSystem):
    spec = bound_spectrum(system.spectral_map, cfg.params)
    return [(k, spec.energies[k], spec.omega[k]) for k in range(spec.k_max + 1)]


def cmd_spectrum(cfg: RunConfig, err) -> list[str]:
    system = QuantumSystem.build(cfg.system, cfg.params)
    return _metadata(cfg) + _table(("k", "E", "omega"), _spectrum_rows(cfg, system))


def cmd_phaseshift(cfg: RunConfig, err) -> list[str]:
    if "energies" not in cfg.extra:
        raise ParamError("phaseshift needs --energies start:stop:step")
    energies = parse_grid(cfg.extra["energies"])
    system = QuantumSystem.build(cfg.system, cfg.params)
    delta = phase_shifts(system.spectral_map, cfg.params, energies) if energies.size else []
    return _metadata(cfg) + _table(("E", "delta"), zip(energies, delta))


def cmd_potential(cfg: RunConfig, err) -> list[str]:
    system = QuantumSystem.build(cfg.system, cfg.params)
    grid = _grid(cfg, system)
    table = reconstruct(system, cfg.N, grid, cfg.method)
    print(f"convergence metric (max |V_N+10 - V_N| inside node hull): {fmt(table.convergence_metric)}",
          file=err)
    lo, hi = table.nodes[0], table.nodes[-1]
    lines = _metadata(cfg, node_hull=f"{fmt(lo)}:{fmt(hi)}",
                      convergence_metric=fmt(table.convergence_metric))
    rows = [(x, v, int(e)) for x, v, e in zip(table.x, table.V, table.extrapolated)]
    return lines + _table(("x", "V", "extrapolated"), rows)


def cmd_wavefunction(cfg: RunConfig, err) -> list[str]:
    system = QuantumSystem.build(cfg.system, cfg.params)
    k, energy = cfg.extra.get("k"), cfg.extra.get("energy")
    if (k is None) == (energy is None):
        raise ParamError("give exactly one of --k or --energy")
    spec = bound_spectrum(system.spectral_map, cfg.params)
    if energy is not None:
        hit = np.flatnonzero(np.isclose(spec.energies, energy, rtol=1e-9, atol=1e-12))
        if hit.size:
            k = int(hit[0])
    grid = system.basis.check_domain(_grid(cfg, system))
    if k is not None:
        sample = bound_component(system, k, grid, cfg.N)
        label = f"k={k} E={fmt(spec.energies[k])}"
    elif system.spectral_map.in_continuum(energy):
        sample = continuum_component(system, energy, grid, cfg.N)
        label = f"E={fmt(energy)} (continuum)"
    else:
        ratio = divergence_diagnostic(system, energy, grid, cfg.N)
        print(f"divergence diagnostic: partial-sum growth ratio {fmt(ratio)} "
              f"(divergent above {DIVERGENT_RATIO:g})", file=err)
        raise DivergenceError(f"E = {fmt(energy)} is neither a bound level nor in the continuum", ratio)
    return _metadata(cfg, state=label) + _table(("x", "psi"), zip(sample.x, sample.value))


def cmd_validate(cfg: RunConfig, err) -> list[str]:
    if cfg.system is not SystemTag.MORSE:
        raise ParamError("validate requires an exact reference (morse only)")
    system = QuantumSystem.build(cfg.system, cfg.params)
    nodes, _ = quadrature_sample(assemble_system(system, min(VALIDATE_SIZES)), system.basis)
    lo, hi = interior_hull(nodes)
    grid = np.linspace(lo, hi, _DEFAULT_GRID_POINTS)
    exact = morse_exact(cfg.params, grid)
    scale = float(np.abs(exact).max())
    rows = []
    for N in VALIDATE_SIZES:
        table = reconstruct(system, N, grid, cfg.method, convergence_step=0)
        error = float(np.abs(table.V - exact).max())
        rows.append((N, error, error / scale))
    lines = _metadata(cfg, hull=f"{fmt(lo)}:{fmt(hi)}")
    lines += _table(("N", "max_abs_error", "relative_error"), rows)
    lines += [""] + _table(("k", "E", "omega"), _spectrum_rows(cfg, system))
    return lines


COMMANDS = {
    "spectrum": (cmd_spectrum, "bound-state energies and discrete weights"),
    "phaseshift": (cmd_phaseshift, "scattering phase shift over an energy range"),
    "potential": (cmd_potential, "reconstruct V(x) on a grid"),
    "wavefunction": (cmd_wavefunction, "bound or continuum wavefunction on a grid"),
    "validate": (cmd_validate, "Morse reconstruction error against the exact potential"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", choices=sorted(PRESETS))
    common.add_argument("--config", metavar="FILE")
    common.add_argument("--system", choices=[t.value for t in SystemTag])
    common.add_argument("--mu", type=float)
    common.add_argument("--a", type=float, help="defaults to -mu")
    common.add_argument("--lambda", type=float, dest="lambda", help="basis scale (default 1)")
    common.add_argument("--alpha", type=float)
    common.add_argument("--nu", type=float, help="basis parameter (default a)")
    common.add_argument("--ell", type=int)
    common.add_argument("--N", type=int, help=f"truncation size (default {DEFAULT_N})")
    common.add_argument("--output", "-o", metavar="PATH")

    parser = argparse.ArgumentParser(prog="spectral-design", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("potential", "wavefunction", "validate"):
            p.add_argument("--method", choices=[m.value for m in Method])
        if name in ("potential", "wavefunction"):
            p.add_argument("--grid", metavar="START:STOP:STEP")
        if name == "phaseshift":
            p.add_argument("--energies", metavar="START:STOP:STEP")
        if name == "wavefunction":
            p.add_argument("--k", type=int)
            p.add_argument("--energy", type=float)
    return parser


_RANGE_FLAGS = ("--grid", "--energies")


def _attach_range_values(argv):
    """Join ``--grid -1:4:0.1`` into ``--grid=-1:4:0.1`` so argparse does not
    mistake a negative range for an option."""
    out, it = [], iter(argv)
    for arg in it:
        if arg in _RANGE_FLAGS:
            value = next(it, None)
            out.append(arg if value is None else f"{arg}={value}")
        else:
            out.append(arg)
    return out


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = _attach_range_values(sys.argv[1:] if argv is None else list(argv))
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = COMMANDS[ns.command][0]
    try:
        cfg = build_config(ns)
        with np.errstate(all="ignore"), warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                lines = handler(cfg, stderr)
            finally:
                for w in caught:
                    print(f"warning: {w.message}", file=stderr)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=stderr)
        return 1
    text = "\n".join(lines) + "\n"
    if cfg.output_path:
        Path(cfg.output_path).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
