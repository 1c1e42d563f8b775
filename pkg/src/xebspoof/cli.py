"""Experiment runner: spoofing campaigns, validation studies, bound reports.

Determinism contract: every result is a pure function of the config and the
master seed.  Trial k draws from SeedSequence(master_seed, spawn_key=(k,)), so
the worker count never changes the numbers, only the wall time.  Result files
embed the config, tool version, and seed; experiment documents also carry a
timestamp, the single field excluded from byte-for-byte reproducibility.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from . import __version__
from .bounds import BoundInputs, bounds_report, theorem_bound
from .errors import ArchitectureError, ResourceLimitError
from .pauli_chain import (
    expected_fidelity_exact,
    expected_scaled_collision,
    expected_trace_squared,
    lower_bound_assignment_weight,
    single_qubit_expected_sos,
)
from .skeleton import (
    Skeleton,
    build_1d_brickwork,
    build_2d_grid,
    greedy_disjoint,
    skeleton_from_json,
    skeleton_to_json,
)
from .spoofer import closed_form_fidelity, light_cone_marginal, plan, sample
from .statevector import (
    DEFAULT_MAX_QUBITS,
    Circuit,
    circuit_to_json,
    collision_probability,
    probabilities,
    simulate,
)

_MAX_SEED = 2**64


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines an experiment's numbers.

    Worker count is deliberately not a field: results must not depend on it.
    """

    architecture: str = "1d"
    n: int | None = None
    d: int | None = None
    rows: int | None = None
    cols: int | None = None
    m: int | None = None
    trials: int = 100
    samples: int = 0
    seed: int = 0
    gates: str = "haar"
    circuit_file: str | None = None
    depths: tuple[int, ...] | None = None
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.architecture not in ("1d", "2d", "custom-file"):
            raise ValueError(f"unknown architecture {self.architecture!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.gates not in ("haar", "identity"):
            raise ValueError(f"unknown gate kind {self.gates!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if self.samples < 0:
            raise ValueError(f"samples must be non-negative, got {self.samples}")
        if not (0 <= self.seed < _MAX_SEED):
            raise ValueError(f"seed must be a 64-bit non-negative integer")
        if self.depths is not None and any(d < 0 for d in self.depths):
            raise ValueError(f"depths must be non-negative, got {self.depths}")

    def skeleton(self) -> Skeleton:
        return self._skeleton_at(self.d)

    def _skeleton_at(self, depth: int | None) -> Skeleton:
        if self.architecture == "custom-file":
            if self.circuit_file is None:
                raise ValueError("custom-file architecture needs --circuit-file")
            with open(self.circuit_file, encoding="utf-8") as fh:
                sk = skeleton_from_json(fh.read())
            if self.n is not None and self.n != sk.n:
                raise ValueError(f"--n {self.n} disagrees with file ({sk.n} wires)")
            if depth is not None and depth != sk.d:
                raise ValueError(f"--d {depth} disagrees with file (depth {sk.d})")
            return sk
        if depth is None:
            raise ValueError("--d is required")
        if self.architecture == "2d":
            if self.rows is None or self.cols is None:
                raise ValueError("2d architecture needs --rows and --cols")
            if self.n is not None and self.n != self.rows * self.cols:
                raise ValueError(
                    f"--n {self.n} disagrees with --rows*--cols = {self.rows * self.cols}"
                )
            return build_2d_grid(self.rows, self.cols, depth)
        if self.n is None:
            raise ValueError("1d architecture needs --n")
        return build_1d_brickwork(self.n, depth)


def _trial_rng(master_seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=key))


def _map_trials(fn, count: int, workers: int) -> list:
    if workers <= 1:
        return [fn(k) for k in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def _mean_stderr(values) -> tuple[float | None, float | None]:
    vals = [v for v in values if v is not None]
    if not vals:
        return None, None
    arr = np.asarray(vals, dtype=float)
    mean = float(arr.mean())
    if arr.size < 2:
        return mean, None
    return mean, float(arr.std(ddof=1) / math.sqrt(arr.size))


def _document(config: ExperimentConfig, kind: str, rows, aggregate) -> dict:
    return {
        "kind": kind,
        "version": __version__,
        "seed": config.seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config": asdict(config),
        "rows": rows,
        "aggregate": aggregate,
    }


# --- runners ----------------------------------------------------------------------


def run_spoof(config: ExperimentConfig, workers: int = 1) -> dict:
    """Per trial: draw gates, plan the spoof, score it (closed form and, when
    samples > 0, empirically against the exact output distribution)."""
    sk = config.skeleton()
    if config.samples > 0 and sk.n > DEFAULT_MAX_QUBITS:
        raise ResourceLimitError(
            f"empirical XEB scores need the exact distribution, and n={sk.n} "
            f"exceeds the 2**{DEFAULT_MAX_QUBITS} amplitude cap; rerun with --samples 0"
        )
    selected = greedy_disjoint(sk, sk.n if config.m is None else config.m)
    weights = 1 << np.arange(sk.n, dtype=np.int64)

    def one(k: int) -> dict:
        rng = _trial_rng(config.seed, k)
        if config.gates == "identity":
            circuit = Circuit.identity(sk)
        else:
            circuit = Circuit.haar_random(sk, rng)
        p = plan(circuit, config.m)
        row = {
            "trial": k,
            "m": p.m,
            "shortfall": p.shortfall,
            "fidelity": closed_form_fidelity(p),
            "xeb_empirical": None,
        }
        if config.samples > 0:
            q = probabilities(simulate(circuit))
            bits = sample(p, rng, size=config.samples)
            idx = bits.astype(np.int64) @ weights
            row["xeb_empirical"] = float((2.0**sk.n * q[idx] - 1.0).mean())
        return row

    rows = _map_trials(one, config.trials, workers)
    fid_mean, fid_se = _mean_stderr(r["fidelity"] for r in rows)
    emp_mean, emp_se = _mean_stderr(r["xeb_empirical"] for r in rows)
    try:
        exact = expected_fidelity_exact(sk, selected)
    except ResourceLimitError:
        exact = None
    aggregate = {
        "selected_outputs": [i + 1 for i in selected],
        "fidelity_mean": fid_mean,
        "fidelity_stderr": fid_se,
        "xeb_empirical_mean": emp_mean,
        "xeb_empirical_stderr": emp_se,
        "theorem_bound": theorem_bound(len(selected), sk.d),
        "expected_fidelity_exact": exact,
    }
    return _document(config, "spoof", rows, aggregate)


def run_single_qubit_validation(config: ExperimentConfig, workers: int = 1) -> dict:
    """Monte Carlo E[q0**2 + q1**2] per output vs the exact chain value and
    the (1 + 15**-d)/2 guarantee."""
    sk = config.skeleton()

    def one(k: int) -> list[float]:
        rng = _trial_rng(config.seed, k)
        circuit = Circuit.haar_random(sk, rng)
        per_output = []
        for i in range(sk.n):
            q0, q1 = light_cone_marginal(circuit, i)
            per_output.append(q0 * q0 + q1 * q1)
        return per_output

    samples = np.asarray(_map_trials(one, config.trials, workers))
    bound = (1.0 + 15.0**-sk.d) / 2.0
    rows = []
    worst = 0.0
    for i in range(sk.n):
        est, se = _mean_stderr(samples[:, i])
        exact = single_qubit_expected_sos(sk, i)
        rows.append(
            {
                "output": i + 1,
                "estimate": est,
                "stderr": se,
                "exact": exact,
                "bound": bound,
            }
        )
        if se:
            worst = max(worst, abs(est - exact) / se)
    aggregate = {"max_deviation_sigma": worst, "bound": bound}
    return _document(config, "validate-single", rows, aggregate)


def run_collision_study(config: ExperimentConfig, workers: int = 1) -> dict:
    """E[2**n * collision probability] per depth: the user's sweep plus the
    critical depth ceil(log n / log(5/4)) where the value should be O(1)."""
    if config.architecture == "custom-file":
        raise ValueError(
            "collision sweeps rebuild the skeleton at every depth; "
            "custom-file wiring has a fixed depth and is not supported here"
        )
    if config.architecture == "2d":
        if config.rows is None or config.cols is None:
            raise ValueError("2d architecture needs --rows and --cols")
        n = config.rows * config.cols
    elif config.n is None:
        raise ValueError("1d architecture needs --n")
    else:
        n = config.n
    if n > DEFAULT_MAX_QUBITS:
        raise ResourceLimitError(
            f"collision study simulates full states; n={n} exceeds the cap"
        )
    critical = math.ceil(math.log(n) / math.log(5 / 4))
    depths = sorted(set(config.depths or ([] if config.d is None else [config.d])) | {critical})

    def one_depth(depth: int) -> dict:
        sk = config._skeleton_at(depth)

        def one(k: int) -> float:
            rng = _trial_rng(config.seed, depth, k)
            state = simulate(Circuit.haar_random(sk, rng))
            return 2.0**n * collision_probability(state)

        vals = _map_trials(one, config.trials, workers)
        mean, se = _mean_stderr(vals)
        try:
            exact = expected_scaled_collision(sk)
        except ResourceLimitError:
            exact = None
        return {
            "depth": depth,
            "trials": config.trials,
            "scaled_cp_mean": mean,
            "scaled_cp_stderr": se,
            "scaled_cp_exact": exact,
            "critical": depth == critical,
        }

    rows = [one_depth(depth) for depth in depths]
    aggregate = {
        "critical_depth": critical,
        "deep_limit": 2.0 * 2**n / (2**n + 1),
    }
    return _document(config, "collision", rows, aggregate)


def run_pauli_exact(config: ExperimentConfig) -> dict:
    """Exact chain values per output plus the certified lower-bound weight."""
    sk = config.skeleton()
    rows = []
    for i in range(sk.n):
        ets = expected_trace_squared(sk, i)
        weight = lower_bound_assignment_weight(sk, i)
        rows.append(
            {
                "output": i + 1,
                "ets": ets,
                "sos": (1.0 + ets) / 2.0,
                "lower_bound": float(weight),
                "lower_bound_exact": f"{weight.numerator}/{weight.denominator}",
            }
        )
    selected = greedy_disjoint(sk, sk.n if config.m is None else config.m)
    try:
        exact = expected_fidelity_exact(sk, selected)
    except ResourceLimitError:
        exact = None
    aggregate = {
        "selected_outputs": [i + 1 for i in selected],
        "expected_fidelity_exact": exact,
        "theorem_bound": theorem_bound(len(selected), sk.d),
    }
    return _document(config, "pauli-exact", rows, aggregate)


# --- emission ---------------------------------------------------------------------

_EXCLUDED_FROM_CSV = ("timestamp",)


def _flatten(prefix: str, obj: dict) -> list[tuple[str, object]]:
    items = []
    for key in sorted(obj):
        value = obj[key]
        if isinstance(value, dict):
            items.extend(_flatten(f"{prefix}{key}.", value))
        else:
            items.append((f"{prefix}{key}", value))
    return items


def _csv_scalar(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (list, tuple)):
        return ";".join(str(v) for v in value)
    return str(value)


def render_document(doc: dict, fmt: str) -> str:
    """CSV keeps metadata and aggregates in '# key=value' comment lines; JSON
    is the document itself, sorted for byte stability."""
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    for key in ("kind", "version", "seed", "timestamp"):
        buf.write(f"# {key}={_csv_scalar(doc[key])}\n")
    for key, value in _flatten("config.", doc["config"]):
        buf.write(f"# {key}={_csv_scalar(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    rows = doc["rows"]
    if rows:
        header = list(rows[0].keys())
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_scalar(row[k]) for k in header])
    for key, value in _flatten("aggregate.", doc["aggregate"]):
        buf.write(f"# {key}={_csv_scalar(value)}\n")
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


# --- argument parsing -------------------------------------------------------------


def _add_skeleton_args(sp) -> None:
    sp.add_argument("--arch", choices=["1d", "2d", "custom-file"], default="1d",
                    help="wiring family (default 1d brickwork ring)")
    sp.add_argument("--n", type=int, help="number of wires (1d)")
    sp.add_argument("--d", type=int, help="gate layers")
    sp.add_argument("--rows", type=int, help="grid rows (2d)")
    sp.add_argument("--cols", type=int, help="grid columns (2d)")
    sp.add_argument("--circuit-file", help="skeleton JSON path (custom-file)")
    sp.add_argument("--seed", type=int, default=0, help="64-bit master seed")
    sp.add_argument("--out", help="output path (default stdout)")
    sp.add_argument("--format", choices=["csv", "json"], default="json")


def _add_workers(sp) -> None:
    sp.add_argument("--workers", type=int, default=1,
                    help="thread pool size; never changes results")


def _config_from_args(args, **overrides) -> ExperimentConfig:
    fields = {
        "architecture": args.arch,
        "n": args.n,
        "d": args.d,
        "rows": args.rows,
        "cols": args.cols,
        "seed": args.seed,
        "circuit_file": args.circuit_file,
        "out": args.out,
        "format": args.format,
    }
    for name in ("m", "trials", "samples", "gates", "depths"):
        if hasattr(args, name) and getattr(args, name) is not None:
            fields[name] = getattr(args, name)
    fields.update(overrides)
    return ExperimentConfig(**fields)


def _parse_depths(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError as exc:
        raise ValueError(f"bad --depths list {text!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xebspoof",
        description="Spoof the linear cross-entropy benchmark on shallow circuits.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="emit skeleton or circuit JSON")
    _add_skeleton_args(gen)
    gen.add_argument("--gates", choices=["haar", "identity"], default="haar")
    gen.add_argument("--skeleton-only", action="store_true",
                     help="emit the wiring only, no gates")

    spoof = sub.add_parser("spoof", help="run spoofing trials and score them")
    _add_skeleton_args(spoof)
    _add_workers(spoof)
    spoof.add_argument("--m", type=int, help="outputs to target (default: maximum)")
    spoof.add_argument("--trials", type=int, default=100, help="circuits to draw")
    spoof.add_argument("--samples", type=int, default=0,
                       help="per-circuit samples for empirical XEB (0 = closed form only)")
    spoof.add_argument("--gates", choices=["haar", "identity"], default="haar")

    validate = sub.add_parser("validate-single",
                              help="Monte Carlo vs exact single-output second moments")
    _add_skeleton_args(validate)
    _add_workers(validate)
    validate.add_argument("--trials", type=int, default=100)

    collision = sub.add_parser("collision",
                               help="scaled collision probability by depth")
    _add_skeleton_args(collision)
    _add_workers(collision)
    collision.add_argument("--trials", type=int, default=100)
    collision.add_argument("--depths", type=_parse_depths,
                           help="comma-separated depth sweep (critical depth always added)")

    bounds = sub.add_parser("bounds", help="closed-form bound report (always JSON)")
    bounds.add_argument("--n", type=int, required=True)
    bounds.add_argument("--d", type=int, required=True)
    bounds.add_argument("--m", type=int, required=True)
    bounds.add_argument("--epsilon", type=float, default=0.5)
    bounds.add_argument("--delta", type=float, default=0.05)
    bounds.add_argument("--cp", type=float, required=True,
                        help="collision probability of the target distribution")
    bounds.add_argument("--L", type=int, dest="cone_size",
                        help="light-cone size, enables the m <= n/L check")
    bounds.add_argument("--var", type=float,
                        help="measured variance; overrides the cp-derived bound")
    bounds.add_argument("--out")

    pauli = sub.add_parser("pauli-exact", help="exact chain values per output")
    _add_skeleton_args(pauli)
    pauli.add_argument("--m", type=int, help="outputs to target (default: maximum)")

    return parser


# --- command entry points ---------------------------------------------------------


def _cmd_gen(args) -> int:
    config = _config_from_args(args, trials=1)
    sk = config.skeleton()
    if args.skeleton_only:
        text = skeleton_to_json(sk) + "\n"
    else:
        rng = _trial_rng(config.seed, 0)
        circuit = (
            Circuit.identity(sk) if args.gates == "identity" else Circuit.haar_random(sk, rng)
        )
        text = circuit_to_json(circuit) + "\n"
    _emit(text, config.out)
    return 0


def _cmd_spoof(args) -> int:
    config = _config_from_args(args)
    doc = run_spoof(config, workers=args.workers)
    _emit(render_document(doc, config.format), config.out)
    return 0


def _cmd_validate(args) -> int:
    config = _config_from_args(args)
    doc = run_single_qubit_validation(config, workers=args.workers)
    _emit(render_document(doc, config.format), config.out)
    return 0


def _cmd_collision(args) -> int:
    config = _config_from_args(args)
    doc = run_collision_study(config, workers=args.workers)
    _emit(render_document(doc, config.format), config.out)
    return 0


def _cmd_bounds(args) -> int:
    inputs = BoundInputs(
        n=args.n,
        d=args.d,
        m=args.m,
        epsilon=args.epsilon,
        delta=args.delta,
        cp=args.cp,
        L=args.cone_size,
        var=args.var,
    )
    doc = {"version": __version__, "inputs": asdict(inputs), "bounds": bounds_report(inputs)}
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _cmd_pauli_exact(args) -> int:
    config = _config_from_args(args)
    doc = run_pauli_exact(config)
    _emit(render_document(doc, config.format), config.out)
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "spoof": _cmd_spoof,
    "validate-single": _cmd_validate,
    "collision": _cmd_collision,
    "bounds": _cmd_bounds,
    "pauli-exact": _cmd_pauli_exact,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ArchitectureError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
