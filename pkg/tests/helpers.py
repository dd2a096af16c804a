"""Shared generators for the test suites; everything is seeded and cheap."""

from __future__ import annotations

import random

from xorcert.circuits import Circuit, JuntaGate
from xorcert.core import Dyadic, XorInstance, make_instance
from xorcert.fourier import ParityClass, classify_parity, expand_junta


def random_instance(
    rng: random.Random,
    n: int,
    k: int,
    m: int,
    weighted: bool = False,
    rhs: list[int] | None = None,
) -> XorInstance:
    edges = [tuple(sorted(rng.sample(range(n), k))) for _ in range(m)]
    if rhs is None:
        rhs = [rng.choice((1, -1)) for _ in range(m)]
    weights = None
    if weighted:
        weights = [Dyadic(rng.randint(-8, 8), 3) for _ in range(m)]
    return make_instance(n, edges, rhs, weights=weights)


def random_other_circuit(rng: random.Random, n: int, t: int, m: int) -> Circuit:
    """Junta circuit whose outputs are all non-parities."""
    gates = []
    while len(gates) < m:
        inputs = tuple(sorted(rng.sample(range(n), t)))
        table = tuple(rng.randrange(2) for _ in range(1 << t))
        gate = JuntaGate(inputs, table)
        if classify_parity(expand_junta(gate, n)) is ParityClass.OTHER:
            gates.append(gate)
    return Circuit(n, 1, t, tuple(gates))


def signs(rng: random.Random, m: int) -> tuple[int, ...]:
    return tuple(rng.choice((1, -1)) for _ in range(m))
