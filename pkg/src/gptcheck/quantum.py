"""Finite-dimensional quantum theory as a concrete instance.

Bipartite scenarios are ordered ``A (x) B``: A is the system whose states are
steered, B the system that is measured.  For the cat scenarios A is the cat
(``|alive> = |0>``, ``|dead> = |1>``) and B the electron spin
(``|up> = |0>``, ``|down> = |1>``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from ._tolerance import eps
from .errors import PreconditionError, ValidationError
from .tables import Behavior, JointTable, Purity

__all__ = [
    "ALIVE", "DEAD", "UP", "DOWN", "PSI_PLUS", "PSI_MINUS",
    "ket", "projector", "tensor", "partial_trace",
    "validate_density", "validate_povm", "is_pure", "trace_distance",
    "QuantumScenario", "born_table", "born_behavior", "steer",
    "SharpSupports", "quantum_sharp_states", "quantum_common_sharp_state",
    "quantum_are_complementary", "quantum_conclusive_discrimination",
    "CatComplementarity", "CatScenarios", "cat_scenarios",
    "random_pure_state", "random_projective_test", "random_scenario",
]

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
PURITY_TOL = 1e-9
MAX_DIM = 4

ALIVE = np.array([1, 0], dtype=complex)
DEAD = np.array([0, 1], dtype=complex)
UP = np.array([1, 0], dtype=complex)
DOWN = np.array([0, 1], dtype=complex)
PSI_PLUS = (DEAD + ALIVE) / np.sqrt(2)
PSI_MINUS = (DEAD - ALIVE) / np.sqrt(2)


def ket(*amplitudes) -> np.ndarray:
    v = np.asarray(amplitudes, dtype=complex).ravel()
    return v / np.linalg.norm(v)


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def tensor(*ops) -> np.ndarray:
    return reduce(np.kron, [np.asarray(o, dtype=complex) for o in ops])


def partial_trace(rho, dims: tuple[int, int], trace_out: int = 1) -> np.ndarray:
    """Trace out subsystem ``trace_out`` (0 = A, 1 = B) of an operator on ``A (x) B``."""
    dA, dB = dims
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dA * dB, dA * dB):
        raise ValidationError(f"operator of shape {rho.shape} does not act on {dA}x{dB}")
    r = rho.reshape(dA, dB, dA, dB)
    if trace_out == 1:
        return np.einsum("ajbj->ab", r)
    if trace_out == 0:
        return np.einsum("iaib->ab", r)
    raise ValidationError("trace_out must be 0 or 1")


def validate_density(rho) -> np.ndarray:
    rho = np.array(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise ValidationError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > TRACE_TOL:
        raise ValidationError(f"density matrix has trace {np.trace(rho).real!r}")
    if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
        raise ValidationError("density matrix is not positive semidefinite")
    rho.setflags(write=False)
    return rho


def validate_povm(effects) -> tuple[np.ndarray, ...]:
    effects = tuple(np.array(E, dtype=complex) for E in effects)
    if not effects:
        raise ValidationError("POVM needs at least one effect")
    d = effects[0].shape[0]
    for E in effects:
        if E.shape != (d, d):
            raise ValidationError("POVM effects have inconsistent shapes")
        if np.max(np.abs(E - E.conj().T)) > HERMITIAN_TOL:
            raise ValidationError("POVM effect is not Hermitian")
        if np.linalg.eigvalsh(E).min() < -PSD_TOL:
            raise ValidationError("POVM effect is not positive semidefinite")
    if np.max(np.abs(sum(effects) - np.eye(d))) > TRACE_TOL:
        raise ValidationError("POVM effects do not sum to the identity")
    for E in effects:
        E.setflags(write=False)
    return effects


def is_pure(rho) -> bool:
    rho = np.asarray(rho, dtype=complex)
    return abs(np.trace(rho @ rho).real - 1) <= PURITY_TOL


def trace_distance(rho, sigma) -> float:
    return 0.5 * float(np.abs(np.linalg.eigvalsh(np.asarray(rho) - np.asarray(sigma))).sum())


def _expect(E, rho) -> float:
    return float(np.real(np.trace(E @ rho)))


@dataclass(frozen=True, eq=False)
class QuantumScenario:
    dims: tuple[int, int]
    joint: np.ndarray = field(repr=False)
    povm_a: tuple[np.ndarray, ...] = field(repr=False)
    povm_b: tuple[np.ndarray, ...] = field(repr=False)
    labels_a: tuple[str, ...] = ()
    labels_b: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        dA, dB = (int(d) for d in self.dims)
        if not (1 <= dA <= MAX_DIM and 1 <= dB <= MAX_DIM):
            raise ValidationError(f"local dimensions must be in 1..{MAX_DIM}")
        joint = validate_density(self.joint)
        if joint.shape != (dA * dB, dA * dB):
            raise ValidationError("joint state does not match the local dimensions")
        pa = validate_povm(self.povm_a)
        pb = validate_povm(self.povm_b)
        if pa[0].shape != (dA, dA) or pb[0].shape != (dB, dB):
            raise ValidationError("POVM dimension does not match its system")
        la = tuple(self.labels_a) or tuple(str(i) for i in range(len(pa)))
        lb = tuple(self.labels_b) or tuple(str(i) for i in range(len(pb)))
        if len(la) != len(pa) or len(lb) != len(pb):
            raise ValidationError("one label per POVM outcome required")
        for k, v in (("dims", (dA, dB)), ("joint", joint), ("povm_a", pa), ("povm_b", pb),
                     ("labels_a", la), ("labels_b", lb)):
            object.__setattr__(self, k, v)

    @property
    def purity(self) -> Purity:
        return Purity.PURE if is_pure(self.joint) else Purity.MIXED

    @property
    def a_test(self) -> tuple[np.ndarray, ...]:
        return self.povm_a

    def reduced_a(self) -> np.ndarray:
        return partial_trace(self.joint, self.dims, trace_out=1)


def born_table(s: QuantumScenario) -> JointTable:
    """``p[i, j] = tr[(A_i (x) B_j) rho]``, stamped with the purity of ``rho``."""
    if len(s.povm_a) != 2 or len(s.povm_b) != 2:
        raise ValidationError("a probability table needs binary tests on both sides")
    p = np.array([[_expect(np.kron(A, B), s.joint) for B in s.povm_b] for A in s.povm_a])
    return JointTable(p, s.purity)


def born_behavior(joint, dims, tests_a: Mapping[str, Sequence], tests_b: Mapping[str, Sequence],
                  parties=("A", "B")) -> Behavior:
    """Behavior of a joint state under several local tests per party."""
    rho = validate_density(joint)
    pa, pb = parties
    prob = {}
    outcomes = {}
    for x, povm_x in tests_a.items():
        povm_x = validate_povm(povm_x)
        outcomes[(pa, x)] = len(povm_x)
        for y, povm_y in tests_b.items():
            povm_y = validate_povm(povm_y)
            outcomes[(pb, y)] = len(povm_y)
            prob[(x, y)] = [[_expect(np.kron(A, B), rho) for B in povm_y] for A in povm_x]
    return Behavior(parties=(pa, pb), tests={pa: tuple(tests_a), pb: tuple(tests_b)},
                    outcomes=outcomes, prob=prob)


def steer(s: QuantumScenario):
    """Subnormalized states of A conditioned on each outcome of B's POVM."""
    from .steering import Assemblage

    dA, dB = s.dims
    elements = tuple(partial_trace(np.kron(np.eye(dA), B) @ s.joint, s.dims, trace_out=1)
                     for B in s.povm_b)
    return Assemblage(elements, space=None, purity=s.purity)


# -- sharpness and discrimination ----------------------------------------------

@dataclass(frozen=True, eq=False)
class SharpSupports:
    """Ranges of the two projectors of a binary projective test.

    A state is sharp for the test iff its support lies inside one of them.
    """

    projectors: tuple[np.ndarray, np.ndarray]

    def is_sharp(self, rho) -> bool:
        v = _expect(self.projectors[0], np.asarray(rho, dtype=complex))
        return min(abs(v), abs(v - 1)) <= PSD_TOL

    def ranks(self) -> tuple[int, int]:
        return tuple(int(round(np.trace(P).real)) for P in self.projectors)


def quantum_sharp_states(povm) -> SharpSupports:
    effects = validate_povm(povm)
    if len(effects) != 2:
        raise ValidationError("sharp-state analysis needs a binary test")
    P, Q = effects
    for E in (P, Q):
        if np.max(np.abs(E @ E - E)) > PSD_TOL:
            raise PreconditionError("test is not projective; sharp states are not analysed")
    return SharpSupports((P, Q))


def _range_intersection(P, Q) -> np.ndarray | None:
    vals, vecs = np.linalg.eigh(P @ Q @ P)
    k = int(np.argmax(vals))
    if vals[k] < 1 - PSD_TOL:
        return None
    return vecs[:, k]


def quantum_common_sharp_state(prop_a, prop_b) -> np.ndarray | None:
    """A state sharp for both projective tests, or ``None``."""
    sa = quantum_sharp_states(prop_a)
    sb = quantum_sharp_states(prop_b)
    for P in sa.projectors:
        for Q in sb.projectors:
            v = _range_intersection(P, Q)
            if v is not None:
                return projector(v)
    return None


def quantum_are_complementary(prop_a, prop_b) -> bool:
    for prop in (prop_a, prop_b):
        if min(quantum_sharp_states(prop).ranks()) == 0:
            raise ValidationError("a trivial test {0, I} is not a proposition")
    return quantum_common_sharp_state(prop_a, prop_b) is None


def quantum_conclusive_discrimination(rho0, rho1):
    """Best effect vanishing on ``rho0``: the projector onto its kernel.

    ``tr(E rho0) = 0`` with ``0 <= E <= I`` forces ``E`` onto the kernel of
    ``rho0``, so the kernel projector maximizes ``tr(E rho1)``.
    """
    from .gpt import Discrimination

    rho0 = validate_density(rho0)
    rho1 = validate_density(rho1)
    vals, vecs = np.linalg.eigh(rho0)
    ker = vecs[:, vals <= PSD_TOL]
    E = ker @ ker.conj().T
    value = _expect(E, rho1)
    if value <= eps():
        return None
    return Discrimination(E, value)


# -- cat scenarios ---------------------------------------------------------------

class CatComplementarity(NamedTuple):
    """Single-system record: the life test and the superposition test of the cat."""

    life_test: tuple[np.ndarray, np.ndarray]
    superposition_test: tuple[np.ndarray, np.ndarray]
    name: str = "v1"


class CatScenarios(NamedTuple):
    v1: CatComplementarity
    v2: QuantumScenario
    v3: QuantumScenario


LIFE_TEST = (projector(ALIVE), projector(DEAD))
SUPERPOSITION_TEST = (projector(PSI_PLUS), projector(PSI_MINUS))
SPIN_Z = (projector(UP), projector(DOWN))


def cat_scenarios() -> CatScenarios:
    """The three cat constructions with exact amplitudes.

    v1 is the bare superposition (no joint state); v2 entangles life with the
    electron spin; v3 steers between ``|alive>`` and ``|Psi+>``.
    """
    v1 = CatComplementarity(LIFE_TEST, SUPERPOSITION_TEST)
    psi2 = (np.kron(ALIVE, UP) + np.kron(DEAD, DOWN)) / np.sqrt(2)
    psi3 = (np.kron(ALIVE, UP) + np.kron(PSI_PLUS, DOWN)) / np.sqrt(2)
    labels = dict(labels_a=("alive", "dead"), labels_b=("up", "down"))
    v2 = QuantumScenario((2, 2), projector(psi2), LIFE_TEST, SPIN_Z, name="v2", **labels)
    v3 = QuantumScenario((2, 2), projector(psi3), LIFE_TEST, SPIN_Z, name="v3", **labels)
    return CatScenarios(v1, v2, v3)


# -- random scenarios ------------------------------------------------------------

def random_pure_state(dims: tuple[int, int], rng: np.random.Generator) -> np.ndarray:
    """Density matrix of a normalized complex Gaussian vector."""
    n = dims[0] * dims[1]
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return projector(v)


def random_projective_test(d: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    P = projector(v)
    return P, np.eye(d) - P


def random_scenario(rng: np.random.Generator, dims=(2, 2)) -> QuantumScenario:
    return QuantumScenario(dims, random_pure_state(dims, rng),
                           random_projective_test(dims[0], rng),
                           random_projective_test(dims[1], rng))
