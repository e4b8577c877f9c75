"""JSON and CSV formats.

Complex matrices are stored as ``{"re": [[...]], "im": [[...]]}``.  Floats are
written with Python's shortest round-trip representation, so parsing and
re-emitting any document is a fixed point.  Tuple labels (hidden-variable
labels, test tuples used as keys) are joined with commas.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any

import numpy as np

from .errors import ValidationError
from .gpt import ConvexStateSpace, Proposition
from .hvt import ANY, HvtModel
from .quantum import QuantumScenario
from .tables import Behavior, JointTable, ParaboloidPoint

__all__ = [
    "dumps", "loads_path",
    "table_to_json", "table_from_json",
    "behavior_to_json", "behavior_from_json",
    "model_to_json", "model_from_json",
    "space_to_json", "space_from_json",
    "test_to_json", "test_from_json", "family_from_json",
    "matrix_to_json", "matrix_from_json",
    "scenario_to_json", "scenario_from_json",
    "certificate_to_json", "figure_csv",
]


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def loads_path(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _require(d: dict, key: str, what: str):
    if not isinstance(d, dict) or key not in d:
        raise ValidationError(f"{what}: missing key {key!r}")
    return d[key]


def _label(x) -> str:
    if isinstance(x, tuple):
        return ",".join(str(v) for v in x)
    return str(x)


def _floats(a) -> list:
    return np.asarray(a, dtype=float).tolist()


# -- tables and behaviors -------------------------------------------------------

def table_to_json(t: JointTable) -> dict:
    return {"table": _floats(t.probs), "purity": t.purity.value}


def table_from_json(d: dict) -> JointTable:
    return JointTable(np.array(_require(d, "table", "table document"), dtype=float),
                      d.get("purity", "unknown"))


def behavior_to_json(b: Behavior) -> dict:
    return {
        "parties": list(b.parties),
        "tests": {p: list(b.tests[p]) for p in b.parties},
        "outcomes": {p: {x: b.outcomes[(p, x)] for x in b.tests[p]} for p in b.parties},
        "prob": [{"tests": list(tt), "p": _floats(arr)} for tt, arr in b.prob.items()],
    }


def behavior_from_json(d: dict) -> Behavior:
    parties = tuple(_require(d, "parties", "behavior"))
    tests = {p: tuple(v) for p, v in _require(d, "tests", "behavior").items()}
    outcomes = {(p, x): int(n) for p, per in _require(d, "outcomes", "behavior").items()
                for x, n in per.items()}
    prob = {tuple(e["tests"]): np.array(e["p"], dtype=float)
            for e in _require(d, "prob", "behavior")}
    for p in parties:
        for x in tests.get(p, ()):
            if "," in x:
                raise ValidationError(f"test label {x!r} may not contain a comma")
    return Behavior(parties, tests, outcomes, prob)


def model_to_json(m: HvtModel) -> dict:
    labels = [_label(lam) for lam in m.lambdas]
    prior = {}
    for key, w in m.prior.items():
        prior[ANY if key == ANY else _label(key)] = dict(zip(labels, _floats(w)))
    return {
        "lambdas": labels,
        "prior": prior,
        "conditionals": {lab: behavior_to_json(m.conditionals[lam])
                         for lab, lam in zip(labels, m.lambdas)},
    }


def model_from_json(d: dict) -> HvtModel:
    labels = [str(x) for x in _require(d, "lambdas", "model")]
    prior = {}
    for key, weights in _require(d, "prior", "model").items():
        missing = set(labels) - set(weights)
        if missing:
            raise ValidationError(f"prior {key!r} lacks labels {sorted(missing)}")
        prior[ANY if key == ANY else tuple(key.split(","))] = [weights[lab] for lab in labels]
    conds = {lab: behavior_from_json(b) for lab, b in _require(d, "conditionals", "model").items()}
    return HvtModel(tuple(labels), prior, conds)


# -- polytopal theories -----------------------------------------------------------

def space_to_json(s: ConvexStateSpace) -> dict:
    return {"dim": s.dim, "vertices": _floats(s.vertices), "unit_effect": _floats(s.unit_effect)}


def space_from_json(d: dict) -> ConvexStateSpace:
    space = ConvexStateSpace(np.array(_require(d, "vertices", "theory"), dtype=float),
                             np.array(_require(d, "unit_effect", "theory"), dtype=float),
                             name=d.get("name", ""))
    if "dim" in d and int(d["dim"]) != space.dim:
        raise ValidationError(f"theory declares dim {d['dim']} but vectors have {space.dim}")
    return space


def test_to_json(test) -> dict:
    effects = test.effects if isinstance(test, Proposition) else test
    return {"effects": [_floats(a) for a in effects]}


def test_from_json(d) -> tuple:
    effects = d["effects"] if isinstance(d, dict) and "effects" in d else d
    if not isinstance(effects, list):
        raise ValidationError("test: expected a list of effects")
    return tuple(np.array(a, dtype=float) for a in effects)


def family_from_json(d) -> list[tuple]:
    items = d["propositions"] if isinstance(d, dict) and "propositions" in d else d
    if not isinstance(items, list):
        raise ValidationError("family: expected a list of propositions")
    return [test_from_json(x) for x in items]


# -- quantum ------------------------------------------------------------------------

def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {"re": M.real.tolist(), "im": M.imag.tolist()}


def matrix_from_json(d) -> np.ndarray:
    if isinstance(d, dict):
        re = np.array(_require(d, "re", "matrix"), dtype=float)
        im = np.array(d.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise ValidationError("matrix: re and im parts differ in shape")
        return re + 1j * im
    return np.array(d, dtype=complex)


def scenario_to_json(s: QuantumScenario) -> dict:
    return {
        "dA": s.dims[0],
        "dB": s.dims[1],
        "joint": matrix_to_json(s.joint),
        "povmA": [matrix_to_json(E) for E in s.povm_a],
        "povmB": [matrix_to_json(E) for E in s.povm_b],
        "labels": {"A": list(s.labels_a), "B": list(s.labels_b)},
        "name": s.name,
    }


def scenario_from_json(d: dict) -> QuantumScenario:
    labels = d.get("labels") or {}
    return QuantumScenario(
        (int(_require(d, "dA", "scenario")), int(_require(d, "dB", "scenario"))),
        matrix_from_json(_require(d, "joint", "scenario")),
        tuple(matrix_from_json(E) for E in _require(d, "povmA", "scenario")),
        tuple(matrix_from_json(E) for E in _require(d, "povmB", "scenario")),
        tuple(labels.get("A", ())), tuple(labels.get("B", ())), d.get("name", ""),
    )


# -- certificates and figure data -----------------------------------------------------

def _state_json(x):
    x = np.asarray(x)
    return matrix_to_json(x) if np.iscomplexobj(x) else _floats(x)


def certificate_to_json(c) -> dict:
    return {
        "a0": _state_json(c.effect),
        "w": float(c.w),
        "p0": float(c.weights[0]),
        "p1": float(c.weights[1]),
        "det": float(c.det),
        "difference": float(c.difference),
        "near_degenerate": bool(c.near_degenerate),
        "states": [_state_json(s) for s in c.states],
        "source_table": table_to_json(c.source_table),
    }


def figure_csv(points: list[ParaboloidPoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p00", "p01", "p10", "residual"])
    for p in points:
        writer.writerow([f"{v:.12g}" for v in (p.p00, p.p01, p.p10, p.residual)])
    return buf.getvalue()
