"""Command-line front end: ``gptcheck <subcommand> ...``.

Exit status is 0 on success, 2 when an input is unreadable or invalid and 3
when a valid input fails a precondition (for example asking for a steering
certificate from a factorizing table).
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import gpt, hvt, quantum, serialize, steering
from ._tolerance import TOL_RANGE, tolerance
from .errors import GptError, PreconditionError, ValidationError
from .tables import factorize, paraboloid_sample, spooky_determinant, spooky_verdict

__all__ = ["RunConfig", "build_parser", "run", "main"]

MAX_SAMPLES = 1_000_000
EXIT_OK, EXIT_ERROR, EXIT_INVALID, EXIT_PRECONDITION = 0, 1, 2, 3


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    tolerance: float | None = None
    seed: int = 0
    samples: int = 500
    grid: int = 50
    out: str | None = None
    behavior: str | None = None
    family: str = "haar"
    workers: int = 1

    def validate(self) -> None:
        lo, hi = TOL_RANGE
        if self.tolerance is not None and not lo <= self.tolerance <= hi:
            raise ValidationError(f"tolerance {self.tolerance!r} outside [{lo:g}, {hi:g}]")
        if not 1 <= self.samples <= MAX_SAMPLES:
            raise ValidationError(f"sample count must lie in [1, {MAX_SAMPLES}]")
        if self.grid < 1:
            raise ValidationError("grid must be positive")


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _rows(M) -> str:
    M = np.asarray(M)
    if np.iscomplexobj(M):
        if np.max(np.abs(M.imag), initial=0.0) < 1e-15:
            M = M.real
        else:
            return json.dumps(serialize.matrix_to_json(M))
    return "[" + ", ".join("[" + ", ".join(_fmt(v) for v in row) + "]" for row in np.atleast_2d(M)) + "]"


def _table_lines(t) -> list[str]:
    det = spooky_determinant(t)
    f = factorize(t)
    lines = [
        f"table: {_rows(t.probs)}",
        f"purity: {t.purity.value}",
        f"det={_fmt(det)}",
    ]
    if f is None:
        lines.append("factorization: none (determinant criterion: p00*p11 - p01*p10 != 0)")
    else:
        lines.append("factorization: p_ij = q_i r_j with q = (%s, %s), r = (%s, %s)" % tuple(map(_fmt, f)))
    lines.append(f"verdict: {spooky_verdict(t).value}")
    return lines


# -- subcommands ------------------------------------------------------------------

def _need(cfg: RunConfig, n: int, what: str) -> None:
    if len(cfg.inputs) < n:
        raise ValidationError(f"{cfg.subcommand} expects {what}")


def cmd_spooky_check(cfg: RunConfig) -> str:
    _need(cfg, 1, "a table file")
    t = serialize.table_from_json(_load(cfg.inputs[0]))
    return "\n".join(_table_lines(t)) + "\n"


def cmd_steer(cfg: RunConfig) -> tuple[str, str]:
    _need(cfg, 1, "a scenario or table file")
    doc = _load(cfg.inputs[0])
    if isinstance(doc, dict) and "dA" in doc:
        s = serialize.scenario_from_json(doc)
        cert = steering.determinant_to_steering(quantum.born_table(s), s)
    else:
        cert = steering.determinant_to_steering(serialize.table_from_json(doc))
    trace = "".join(f"# step {k}: {line}\n" for k, line in enumerate(cert.trace, 1))
    return trace, serialize.dumps(serialize.certificate_to_json(cert))


def cmd_hvt_check(cfg: RunConfig) -> str:
    _need(cfg, 1, "a model file")
    m = serialize.model_from_json(_load(cfg.inputs[0]))
    rec = hvt.reconstruct(m)
    if cfg.behavior:
        target = serialize.behavior_from_json(_load(cfg.behavior))
        equiv = "yes" if rec.same_structure(target) and rec.max_difference(target) <= 1e-9 else "no"
    else:
        equiv = "n/a (no --behavior given)"
    yn = {True: "yes", False: "no"}
    lines = [
        f"equivalence: {equiv}",
        f"lambda-independence: {yn[hvt.check_lambda_independence(m)]}",
        f"parameter-independence: {yn[hvt.check_parameter_independence(m)]}",
        f"outcome-independence: {yn[hvt.check_outcome_independence(m)]}",
    ]
    try:
        w = hvt.is_descriptively_significant(m)
    except PreconditionError as exc:
        lines.append(f"significance: not applicable ({exc})")
    else:
        lines.append("significance: none" if w is None else f"significance witness: {w}")
    return "\n".join(lines) + "\n"


def cmd_local_model(cfg: RunConfig) -> str:
    _need(cfg, 1, "a table file")
    t = serialize.table_from_json(_load(cfg.inputs[0]))
    return serialize.dumps(serialize.model_to_json(hvt.deterministic_local_model(t)))


def cmd_complementarity(cfg: RunConfig) -> str:
    _need(cfg, 3, "a theory file and two proposition files")
    space = serialize.space_from_json(_load(cfg.inputs[0]))
    a, b = (serialize.test_from_json(_load(p)) for p in cfg.inputs[1:3])
    if gpt.are_complementary(space, a, b):
        return "verdict: complementary (no common sharp state)\n"
    witness = gpt.find_common_sharp_state(space, [a, b])
    return f"verdict: not complementary\ncommon sharp state: {_rows([witness])[1:-1]}\n"


def cmd_reduce(cfg: RunConfig) -> str:
    _need(cfg, 2, "a theory file and a family file")
    space = serialize.space_from_json(_load(cfg.inputs[0]))
    family = serialize.family_from_json(_load(cfg.inputs[1]))
    r = gpt.reduce_to_two(space, family)
    return serialize.dumps({
        "largest_sharp_subfamily": list(r.subset),
        "other": r.other,
        "propositions": [serialize.test_to_json(r.first), serialize.test_to_json(r.second)],
    })


def _ensemble_lines(e) -> list[str]:
    return [f"  {_fmt(w)} x {_rows(s)}" for w, s in zip(e.weights, e.states)]


def cmd_cat(cfg: RunConfig) -> str:
    cats = quantum.cat_scenarios()
    v1 = cats.v1
    comp = quantum.quantum_are_complementary(v1.life_test, v1.superposition_test)
    out = ["== v1: lone cat in superposition ==",
           f"life test vs superposition test complementary: {'yes' if comp else 'no'}"]
    for s in (cats.v2, cats.v3):
        t = quantum.born_table(s)
        out.append(f"== {s.name}: cat entangled with an electron ==")
        out.extend(_table_lines(t))
        ens = steering.normalize_assemblage(quantum.steer(s))
        out.append("steered ensemble on the cat:")
        out.extend(_ensemble_lines(ens))
        cert = steering.determinant_to_steering(t, s)
        out.append(f"steering gap <a0|alpha0> - <a0|alpha1> = {_fmt(cert.difference)}")
        if s.name == "v3":
            disc = quantum.quantum_conclusive_discrimination(ens.states[0], ens.states[1])
            out.append(f"conclusive discrimination of the steered states: value {_fmt(disc.value)}"
                       f" via effect {_rows(disc.effect)}")
    return "\n".join(out) + "\n"


def cmd_figure(cfg: RunConfig) -> str:
    return serialize.figure_csv(paraboloid_sample(cfg.grid))


def cmd_sweep(cfg: RunConfig) -> str:
    r = steering.equivalence_sweep(cfg.samples, seed=cfg.seed, family=cfg.family, workers=cfg.workers)
    lines = [
        f"samples: {r.n}  seed: {r.seed}  family: {r.family}",
        "states with a Spooky verdict: {spooky}".format(**r.counts),
        "states steering a non-trivial ensemble: {steering}".format(**r.counts),
        "states with a non-zero determinant: {determinant}".format(**r.counts),
        f"near-degenerate states: {r.near_degenerate}",
    ]
    lines += [f"divergence at sample {k}: {flags}" for k, flags in r.divergences]
    lines.append(r.summary_line())
    return "\n".join(lines) + "\n"


COMMANDS = {
    "spooky-check": (cmd_spooky_check, "2x2 table -> determinant, factorization, verdict"),
    "steer": (cmd_steer, "scenario or table -> steering certificate JSON"),
    "hvt-check": (cmd_hvt_check, "hidden-variable model -> independence predicates"),
    "local-model": (cmd_local_model, "table -> deterministic local model JSON"),
    "complementarity": (cmd_complementarity, "theory + two propositions -> verdict"),
    "reduce": (cmd_reduce, "theory + N propositions -> complementary pair"),
    "cat": (cmd_cat, "report on the built-in cat scenarios"),
    "figure": (cmd_figure, "CSV of paraboloid residuals over the tetrahedron"),
    "sweep": (cmd_sweep, "random check that spookiness, steering and det != 0 agree"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=argparse.SUPPRESS,
                        help="comparison tolerance (default 1e-9, env GPTCHECK_TOLERANCE)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the artifact here")

    parser = argparse.ArgumentParser(prog="gptcheck", parents=[common],
                                     description="Spookiness, steering and complementarity checks.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("spooky-check", "steer", "local-model", "hvt-check"):
            p.add_argument("inputs", nargs=1, metavar="FILE")
        elif name == "complementarity":
            p.add_argument("inputs", nargs=3, metavar=("THEORY", "PROP_A", "PROP_B"))
        elif name == "reduce":
            p.add_argument("inputs", nargs=2, metavar=("THEORY", "FAMILY"))
        if name == "hvt-check":
            p.add_argument("--behavior", help="target behavior JSON for the equivalence check")
        if name == "figure":
            p.add_argument("--grid", type=int, default=50)
        if name == "sweep":
            p.add_argument("--samples", type=int, default=500)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--family", choices=("haar", "product", "maximally-entangled"), default="haar")
            p.add_argument("--workers", type=int, default=1)
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields)


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute ``cfg``; human output goes to ``stdout``, the artifact to ``cfg.out`` if set."""
    stdout = stdout or sys.stdout
    cfg.validate()
    ctx = tolerance(cfg.tolerance) if cfg.tolerance is not None else contextlib.nullcontext()
    with ctx:
        result = COMMANDS[cfg.subcommand][0](cfg)
    trace, artifact = result if isinstance(result, tuple) else ("", result)
    stdout.write(trace)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(artifact)
        stdout.write(f"wrote {cfg.out}\n")
    else:
        stdout.write(artifact)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return run(_config(ns))
    except ValidationError as exc:
        print(f"gptcheck: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PreconditionError as exc:
        print(f"gptcheck: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except GptError as exc:
        print(f"gptcheck: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
