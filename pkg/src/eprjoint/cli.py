"""Command-line front end.

One structured JSON schema covers states, settings, probabilities,
parameters, and reports.  A state file holds {"state": ..., "settings":
{"n_A": [x,y,z], ...}} where state is "singlet", "mixed", "werner:p",
"ket:bb", or 16 [re, im] pairs row-major.  A probability file holds
{"singles": {"A": ..}, "doubles": {"AB": ..}}; "A'B'" may be omitted for
three-experiment modes.  Parameters: {"t": {"dotdot": .., "a_plus": ..,
"aprime_plus": .., "bb": [..4..], "aprime_bprime": ..}}.

Reports are JSON with sorted keys; identical configuration (including the
seed) produces byte-identical output.  Monte Carlo sampling uses numpy's
PCG64 generator with inverse-CDF lookup, seeded explicitly.

Exit codes: 0 success, 2 validation/usage error, 3 CHSH violation,
4 inconsistent input, 5 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np

from .chsh import ChshReport, chsh_probability_form
from .construction import (
    ConstructionTrace,
    FamilyParams,
    QuadDistribution,
    construct_3exp_trace,
    construct_4exp_trace,
    marginal_residuals,
    sweep_grid,
)
from .errors import EprJointError, EXIT_OK, ValidationError
from .experiments import correlations_of, ExperimentalProbs, PAIR_LABELS, SINGLE_LABELS
from .indexing import SIGNS, marginal_indices, outcome_label
from .oracle import build_system, ROW_LABELS, solve_system
from .quantum import (
    AnalyzerSettings,
    DensityMatrix,
    experimental_probs,
    ket_state,
    maximally_mixed,
    singlet,
    werner,
)

MODES = ("probs", "construct3", "construct4", "chsh", "oracle", "sweep", "mc-verify")
DEFAULT_SAMPLES = 100_000
SIGMA_LIMIT = 5.0


@dataclass(frozen=True)
class RunConfig:
    mode: str
    input_path: str
    params: FamilyParams | None = None
    seed: int = 0
    samples: int = DEFAULT_SAMPLES
    grid: str = "5"
    tolerance: float | None = None
    output: str | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValidationError(f"unknown mode {self.mode!r}")
        if self.samples < 1:
            raise ValidationError(f"samples must be >= 1, got {self.samples}")
        if not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must fit in 64 bits, got {self.seed}")

    @property
    def atol(self) -> float:
        return self.tolerance if self.tolerance is not None else 1e-9


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path!r}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"{where}: missing required field {key!r}")
    return obj[key]


def _parse_state(spec) -> DensityMatrix:
    if isinstance(spec, str):
        if spec == "singlet":
            return singlet()
        if spec == "mixed":
            return maximally_mixed()
        if spec.startswith("werner:"):
            try:
                p = float(spec.split(":", 1)[1])
            except ValueError as exc:
                raise ValidationError(f"bad werner parameter in {spec!r}") from exc
            return werner(p)
        if spec.startswith("ket:"):
            return ket_state(spec.split(":", 1)[1])
        raise ValidationError(f"unknown named state {spec!r}")
    if isinstance(spec, list):
        if len(spec) != 16:
            raise ValidationError(f"state matrix needs 16 entries, got {len(spec)}")
        try:
            flat = [complex(float(re), float(im)) for re, im in spec]
        except (TypeError, ValueError) as exc:
            raise ValidationError("state entries must be [re, im] pairs") from exc
        return DensityMatrix(np.array(flat, dtype=complex).reshape(4, 4))
    raise ValidationError("field 'state' must be a name or 16 [re, im] pairs")


def _parse_vector(obj, name: str) -> tuple[float, float, float]:
    if not isinstance(obj, list) or len(obj) != 3:
        raise ValidationError(f"settings field {name!r} must be 3 real numbers")
    return tuple(float(c) for c in obj)


def _parse_settings(obj) -> AnalyzerSettings:
    return AnalyzerSettings(
        n_a=_parse_vector(_require(obj, "n_A", "settings"), "n_A"),
        n_ap=_parse_vector(_require(obj, "n_A'", "settings"), "n_A'"),
        n_b=_parse_vector(_require(obj, "n_B", "settings"), "n_B"),
        n_bp=_parse_vector(_require(obj, "n_B'", "settings"), "n_B'"),
    )


def _parse_probs(obj, atol: float) -> ExperimentalProbs:
    singles = _require(obj, "singles", "probability file")
    doubles = _require(obj, "doubles", "probability file")
    def fetch(src, key, optional=False):
        if key not in src:
            if optional:
                return None
            raise ValidationError(f"probability file: missing {key!r}")
        return float(src[key])
    return ExperimentalProbs(
        p_a=fetch(singles, "A"),
        p_ap=fetch(singles, "A'"),
        p_b=fetch(singles, "B"),
        p_bp=fetch(singles, "B'"),
        p_ab=fetch(doubles, "AB"),
        p_abp=fetch(doubles, "AB'"),
        p_apb=fetch(doubles, "A'B"),
        p_apbp=fetch(doubles, "A'B'", optional=True),
        atol=atol,
    )


def _load_probs(config: RunConfig) -> ExperimentalProbs:
    """Probability input, computed from a state file when one is given."""
    obj = _load_json(config.input_path)
    if isinstance(obj, dict) and "state" in obj:
        rho = _parse_state(obj["state"])
        settings = _parse_settings(_require(obj, "settings", config.input_path))
        return experimental_probs(rho, settings)
    return _parse_probs(obj, config.atol)


def parse_params(obj) -> FamilyParams:
    t = _require(obj, "t", "parameter file")
    bb = t.get("bb", (0.5, 0.5, 0.5, 0.5))
    if not isinstance(bb, (list, tuple)) or len(bb) != 4:
        raise ValidationError("parameter field 't.bb' must hold 4 numbers")
    apbp = t.get("aprime_bprime")
    return FamilyParams(
        t_dotdot=float(t.get("dotdot", 0.5)),
        t_aplus=float(t.get("a_plus", 0.5)),
        t_aprimeplus=float(t.get("aprime_plus", 0.5)),
        t_bb=tuple(float(v) for v in bb),
        t_aprime_bprime=None if apbp is None else float(apbp),
    )


def _parse_grid(spec: str) -> list[float]:
    spec = spec.strip()
    try:
        if "," in spec:
            axis = [float(v) for v in spec.split(",")]
        else:
            n = int(spec)
            if n < 1:
                raise ValueError
            axis = [0.5] if n == 1 else [i / (n - 1) for i in range(n)]
    except ValueError as exc:
        raise ValidationError(
            f"bad grid spec {spec!r}: expected a point count or comma-separated fractions"
        ) from exc
    for v in axis:
        if not 0.0 <= v <= 1.0:
            raise ValidationError(f"grid fraction {v!r} is outside [0, 1]")
    return axis


def _probs_payload(probs: ExperimentalProbs) -> dict:
    return {
        "singles": dict(zip(SINGLE_LABELS, probs.singles())),
        "doubles": {
            label: value
            for label, value in zip(PAIR_LABELS, probs.doubles())
            if value is not None
        },
    }


def _chsh_payload(report: ChshReport) -> dict:
    return {
        "s_values": dict(zip(("A", "A'", "B", "B'"), report.s_values)),
        "max_s_value": report.max_s_value,
        "c_values": dict(zip(("AA'BB'", "A'ABB'", "AA'B'B", "A'AB'B"), report.c_values)),
        "slacks": report.slacks(),
        "satisfied": report.satisfied,
        "violated": not report.satisfied,
        "boundary": report.boundary,
        "margin": report.margin,
    }


def _trace_payload(trace: ConstructionTrace) -> dict:
    residuals, worst = marginal_residuals(trace.quad, trace.probs)
    payload = {
        "params_t": {
            "dotdot": trace.params.t_dotdot,
            "a_plus": trace.params.t_aplus,
            "aprime_plus": trace.params.t_aprimeplus,
            "bb": list(trace.params.t_bb),
            "aprime_bprime": trace.params.t_aprime_bprime,
        },
        "intervals": {k: [iv.lo, iv.hi] for k, iv in trace.intervals.items()},
        "chosen": dict(trace.chosen),
        "distribution": trace.quad.labeled(),
        "marginal_check": {"residuals": residuals, "max_residual": worst},
    }
    if trace.chosen_aprime_bprime is not None:
        payload["chosen_aprime_bprime"] = trace.chosen_aprime_bprime
    return payload


def cmd_probs(config: RunConfig) -> dict:
    obj = _load_json(config.input_path)
    rho = _parse_state(_require(obj, "state", config.input_path))
    settings = _parse_settings(_require(obj, "settings", config.input_path))
    probs = experimental_probs(rho, settings)
    report = chsh_probability_form(probs, config.atol)
    return {
        "mode": "probs",
        "probs": _probs_payload(probs),
        "correlations": dict(zip(PAIR_LABELS, correlations_of(probs).as_tuple())),
        "chsh": _chsh_payload(report),
    }


def cmd_chsh(config: RunConfig) -> dict:
    probs = _load_probs(config)
    report = chsh_probability_form(probs, config.atol)
    return {
        "mode": "chsh",
        "probs": _probs_payload(probs),
        "correlations": dict(zip(PAIR_LABELS, correlations_of(probs).as_tuple())),
        "chsh": _chsh_payload(report),
    }


def cmd_construct(config: RunConfig) -> dict:
    probs = _load_probs(config)
    note = None
    if config.mode == "construct3":
        if probs.has_all_four:
            note = {"measured_aprime_bprime_ignored": probs.p_apbp}
            probs = probs.without_aprime_bprime()
        trace = construct_3exp_trace(probs, config.params)
    else:
        trace = construct_4exp_trace(probs, config.params)
    payload = {"mode": config.mode, **_trace_payload(trace)}
    if note:
        payload["note"] = note
    return payload


def cmd_oracle(config: RunConfig) -> dict:
    probs = _load_probs(config)
    system = build_system(probs)
    result = solve_system(system, eps=config.atol)
    payload = {
        "mode": "oracle",
        "system_rhs": dict(zip(ROW_LABELS, (float(v) for v in system.rhs))),
        "feasible": result.feasible,
        "max_min_entry": float(result.value),
        "dual_certificate": [float(c) for c in result.certificate],
        "iterations": result.iterations,
    }
    if result.feasible and result.witness is not None:
        quad = QuadDistribution.from_raw([max(float(w), 0.0) for w in result.witness])
        payload["witness"] = quad.labeled()
    else:
        payload["witness"] = None
    return payload


def cmd_sweep(config: RunConfig) -> dict:
    probs = _load_probs(config)
    axis = _parse_grid(config.grid)
    result = sweep_grid(probs, axis)
    if probs.has_all_four:
        quad_at = lambda params: construct_4exp_trace(probs, params).quad
        axes = 7
    else:
        quad_at = lambda params: construct_3exp_trace(probs, params).quad
        axes = 8
    return {
        "mode": "sweep",
        "grid": {"axis": axis, "axes": axes, "total_points": result.total_points},
        "valid_points": result.valid_points,
        "failures": result.total_points - result.valid_points,
        "all_valid": result.all_valid,
        "min_entry": result.min_entry,
        "min_entry_params_t": list(result.min_params.as_tuple7()),
        "min_entry_distribution": quad_at(result.min_params).labeled(),
        "most_interior_min_entry": result.best_min_entry,
        "most_interior_params_t": list(result.best_params.as_tuple7()),
        "most_interior_distribution": quad_at(result.best_params).labeled(),
    }


def _sample_counts(quad: QuadDistribution, samples: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    cdf = np.cumsum(np.asarray(quad.entries))
    cdf[-1] = 1.0
    draws = np.searchsorted(cdf, rng.random(samples), side="right")
    return np.bincount(draws, minlength=16)


def cmd_mc_verify(config: RunConfig) -> dict:
    probs = _load_probs(config)
    if probs.has_all_four:
        trace = construct_4exp_trace(probs, config.params)
        arity = 4
    else:
        trace = construct_3exp_trace(probs, config.params)
        arity = 3
    quad = trace.quad
    counts = _sample_counts(quad, config.samples, config.seed)
    n = float(config.samples)

    kwargs_for = {
        "AB": lambda x, y: dict(a=x, b=y),
        "AB'": lambda x, y: dict(a=x, bp=y),
        "A'B": lambda x, y: dict(ap=x, b=y),
        "A'B'": lambda x, y: dict(ap=x, bp=y),
    }
    experiments: dict = {}
    flagged: list[str] = []
    max_abs_z = 0.0
    for label, kw in kwargs_for.items():
        cells = {}
        for x, y in product(SIGNS, repeat=2):
            idx = marginal_indices(**kw(x, y))
            expected = float(sum(quad.entries[i] for i in idx))
            empirical = float(sum(counts[i] for i in idx)) / n
            std_err = math.sqrt(max(expected * (1.0 - expected), 0.0) / n)
            if std_err > 0.0:
                z = (empirical - expected) / std_err
            else:
                z = 0.0 if empirical == expected else float("inf")
            cell_label = outcome_label((x, y))
            ok = abs(z) <= SIGMA_LIMIT
            if not ok:
                flagged.append(f"{label}:{cell_label}")
            max_abs_z = max(max_abs_z, abs(z))
            cells[cell_label] = {
                "expected": expected,
                "empirical": empirical,
                "std_error": std_err,
                "z": z,
                "ok": ok,
            }
        experiments[label] = {
            "constructed": (label == "A'B'" and arity == 3),
            "cells": cells,
        }
    return {
        "mode": "mc-verify",
        "arity": arity,
        "generator": "PCG64",
        "seed": config.seed,
        "samples": config.samples,
        "chosen_aprime_bprime": trace.chosen_aprime_bprime,
        "experiments": experiments,
        "max_abs_z": max_abs_z,
        "flagged": flagged,
        "within_5_sigma": not flagged,
    }


_COMMANDS = {
    "probs": cmd_probs,
    "chsh": cmd_chsh,
    "construct3": cmd_construct,
    "construct4": cmd_construct,
    "oracle": cmd_oracle,
    "sweep": cmd_sweep,
    "mc-verify": cmd_mc_verify,
}


def run(config: RunConfig) -> dict:
    return _COMMANDS[config.mode](config)


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eprjoint",
        description=(
            "EPR probabilities, Bell-CHSH checks, and joint quadruple "
            "distributions fitting three or four EPR experiments"
        ),
    )
    parser.add_argument("--mode", required=True, choices=MODES)
    parser.add_argument("--input", required=True, help="input JSON file")
    parser.add_argument("--params", help="JSON file with construction parameters t")
    parser.add_argument("--seed", type=int, default=0, help="64-bit RNG seed (PCG64)")
    parser.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                        help="Monte Carlo sample count")
    parser.add_argument("--grid", default="5",
                        help="sweep grid: points per axis or comma-separated fractions")
    parser.add_argument("--tolerance", type=float, default=None,
                        help="validation tolerance override")
    parser.add_argument("--output", default=None, help="report file (default stdout)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = parse_params(_load_json(args.params)) if args.params else None
        config = RunConfig(
            mode=args.mode,
            input_path=args.input,
            params=params,
            seed=args.seed,
            samples=args.samples,
            grid=args.grid,
            tolerance=args.tolerance,
            output=args.output,
        )
        report = run(config)
    except EprJointError as exc:
        error = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "report", None) is not None:
            error["chsh"] = _chsh_payload(exc.report)
        sys.stderr.write(json.dumps(error, indent=2, sort_keys=True) + "\n")
        return exc.exit_code
    _emit(report, args.output)
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
