"""Multi-output circuits: bounded-fan-in junta gates and word decision trees,
plus the layered view that spreads a t-query tree across t layers of groups.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Sequence, Union

from .core import ValidationError, bit_of_sign, sign_of_bit


@dataclass(frozen=True)
class Leaf:
    value: int  # +1 or -1


@dataclass(frozen=True)
class Node:
    query: int
    children: tuple  # 2**w subtrees, indexed by the queried symbol


TreeNode = Union[Leaf, Node]


@dataclass(frozen=True)
class WordDecisionTree:
    """Adaptive decision tree querying symbols of width w bits."""

    root: TreeNode

    def depth(self) -> int:
        def go(node: TreeNode) -> int:
            if isinstance(node, Leaf):
                return 0
            return 1 + max(go(c) for c in node.children)

        return go(self.root)

    def violations(self, n: int, w: int, t: int) -> list[str]:
        out: list[str] = []

        def go(node: TreeNode, depth: int) -> None:
            if isinstance(node, Leaf):
                if node.value not in (1, -1):
                    out.append(f"leaf value {node.value} not a sign")
                return
            if depth >= t:
                out.append(f"query depth exceeds {t}")
                return
            if not 0 <= node.query < n:
                out.append(f"query index {node.query} out of range [0, {n})")
            if len(node.children) != 1 << w:
                out.append(
                    f"node has {len(node.children)} children, expected {1 << w}"
                )
            for c in node.children:
                go(c, depth + 1)

        go(self.root, 0)
        return out

    def eval(self, x: Sequence[int]) -> int:
        node = self.root
        while isinstance(node, Node):
            node = node.children[x[node.query]]
        return node.value


@dataclass(frozen=True)
class JuntaGate:
    """Single-output gate reading <= t distinct bits through a truth table.

    ``table[idx]`` is the output bit for the input whose j-th read bit is
    ``(idx >> j) & 1``; bits map to signs through the global convention.
    """

    inputs: tuple[int, ...]
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "table", tuple(self.table))

    def violations(self, n: int, t: int) -> list[str]:
        out = []
        if len(self.inputs) > t:
            out.append(f"{len(self.inputs)} inputs exceed fan-in bound {t}")
        if len(set(self.inputs)) != len(self.inputs):
            out.append(f"duplicate input index in {self.inputs}")
        if any(not 0 <= v < n for v in self.inputs):
            out.append(f"input index out of range in {self.inputs}")
        if len(self.table) != 1 << len(self.inputs):
            out.append(
                f"table length {len(self.table)} != 2^{len(self.inputs)}"
            )
        if any(b not in (0, 1) for b in self.table):
            out.append("table entries must be bits")
        return out

    def eval(self, x: Sequence[int]) -> int:
        idx = 0
        for j, v in enumerate(self.inputs):
            idx |= (x[v] & 1) << j
        return sign_of_bit(self.table[idx])


Gate = Union[JuntaGate, WordDecisionTree]


@dataclass(frozen=True)
class Circuit:
    """m-output circuit over n input symbols of w bits each.

    Junta gates are only meaningful for bit inputs (w == 1); decision trees
    work for any word width.
    """

    n: int
    w: int
    t: int
    gates: tuple[Gate, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))

    @property
    def m(self) -> int:
        return len(self.gates)

    def violations(self) -> list[str]:
        out = []
        if self.n < 1 or self.w < 1 or self.t < 0:
            out.append(f"bad shape (n={self.n}, w={self.w}, t={self.t})")
        for i, g in enumerate(self.gates):
            if isinstance(g, JuntaGate):
                if self.w != 1:
                    out.append(f"gate {i}: junta gate requires w == 1")
                out.extend(f"gate {i}: {v}" for v in g.violations(self.n, self.t))
            else:
                out.extend(
                    f"gate {i}: {v}" for v in g.violations(self.n, self.w, self.t)
                )
        return out

    def ensure_valid(self) -> "Circuit":
        out = self.violations()
        if out:
            raise ValidationError(out)
        return self

    def is_junta_circuit(self) -> bool:
        return all(isinstance(g, JuntaGate) for g in self.gates)

    def with_tree_gates(self) -> "Circuit":
        gates = tuple(
            junta_to_tree(g) if isinstance(g, JuntaGate) else g
            for g in self.gates
        )
        return Circuit(self.n, self.w, self.t, gates)


def eval_circuit(c: Circuit, x: Sequence[int]) -> tuple[int, ...]:
    """Evaluate every output on a symbol string x in [2**w]^n."""
    if len(x) != c.n:
        raise ValidationError([f"input length {len(x)} != n = {c.n}"])
    top = 1 << c.w
    for j, sym in enumerate(x):
        if not 0 <= sym < top:
            raise ValidationError([f"symbol {sym} at position {j} out of range"])
    return tuple(g.eval(x) for g in c.gates)


def junta_to_tree(gate: JuntaGate) -> WordDecisionTree:
    """Equivalent nonadaptive tree querying the gate inputs in order."""

    def go(j: int, idx: int) -> TreeNode:
        if j == len(gate.inputs):
            return Leaf(sign_of_bit(gate.table[idx]))
        return Node(
            gate.inputs[j],
            (go(j + 1, idx), go(j + 1, idx | (1 << j))),
        )

    return WordDecisionTree(go(0, 0))


@dataclass(frozen=True)
class LayeredCircuit:
    """View of a tree circuit over t layers of n groups of w bits.

    The q-th query of every output is redirected to the queried group inside
    layer q, so each output touches at most one group per layer. Inputs are
    never materialized: :meth:`duplicate` produces the layered bit string that
    corresponds to an original symbol string.
    """

    circuit: Circuit

    def __post_init__(self) -> None:
        bad = [
            f"gate {i}: junta gate in layered circuit"
            for i, g in enumerate(self.circuit.gates)
            if not isinstance(g, WordDecisionTree)
        ]
        if bad:
            raise ValidationError(bad)

    @property
    def n_bits(self) -> int:
        c = self.circuit
        return c.w * c.n * c.t

    def bit_index(self, layer: int, group: int, bit: int) -> int:
        c = self.circuit
        return layer * (c.n * c.w) + group * c.w + bit

    def group_symbol(self, bits: Sequence[int], layer: int, group: int) -> int:
        base = self.bit_index(layer, group, 0)
        sym = 0
        for b in range(self.circuit.w):
            sym |= (bits[base + b] & 1) << b
        return sym

    def duplicate(self, x: Sequence[int]) -> tuple[int, ...]:
        """Layered bit string carrying t identical copies of x."""
        c = self.circuit
        layer = []
        for sym in x:
            for b in range(c.w):
                layer.append((sym >> b) & 1)
        return tuple(layer * c.t)

    def eval_bits(self, bits: Sequence[int]) -> tuple[int, ...]:
        """Evaluate all outputs on a layered bit string of length w*n*t."""
        if len(bits) != self.n_bits:
            raise ValidationError(
                [f"layered input length {len(bits)} != {self.n_bits}"]
            )
        out = []
        for g in self.circuit.gates:
            node = g.root
            layer = 0
            while isinstance(node, Node):
                sym = self.group_symbol(bits, layer, node.query)
                node = node.children[sym]
                layer += 1
            out.append(node.value)
        return tuple(out)


def to_layered(c: Circuit) -> LayeredCircuit:
    """Layered view; requires every gate to be a word decision tree."""
    return LayeredCircuit(c.ensure_valid())


# Seeded generators for test suites.


def random_junta_circuit(
    rng: random.Random, n: int, t: int, m: int
) -> Circuit:
    gates = []
    for _ in range(m):
        inputs = tuple(sorted(rng.sample(range(n), t)))
        table = tuple(rng.randrange(2) for _ in range(1 << t))
        gates.append(JuntaGate(inputs, table))
    return Circuit(n, 1, t, tuple(gates)).ensure_valid()


def random_tree_circuit(
    rng: random.Random,
    n: int,
    w: int,
    t: int,
    m: int,
    leaf_prob: float = 0.2,
) -> Circuit:
    def build(depth: int, used: frozenset[int]) -> TreeNode:
        stop = depth >= t or len(used) == n
        if stop or (depth >= 1 and rng.random() < leaf_prob):
            return Leaf(rng.choice((1, -1)))
        j = rng.choice([v for v in range(n) if v not in used])
        kids = tuple(build(depth + 1, used | {j}) for _ in range(1 << w))
        return Node(j, kids)

    gates = tuple(WordDecisionTree(build(0, frozenset())) for _ in range(m))
    return Circuit(n, w, t, gates).ensure_valid()


def random_parity_circuit(
    rng: random.Random, n: int, t: int, m: int
) -> Circuit:
    """Circuit whose outputs are all parities or negated parities."""
    gates = []
    for _ in range(m):
        size = rng.randint(1, t)
        inputs = tuple(sorted(rng.sample(range(n), size)))
        negate = rng.randrange(2)
        table = tuple(
            (bin(idx).count("1") + negate) % 2 for idx in range(1 << size)
        )
        gates.append(JuntaGate(inputs, table))
    return Circuit(n, 1, t, tuple(gates)).ensure_valid()


# JSON circuit files.


def _tree_node_to_obj(node: TreeNode):
    if isinstance(node, Leaf):
        return {"leaf": bit_of_sign(node.value)}
    return {
        "query": node.query,
        "children": [_tree_node_to_obj(c) for c in node.children],
    }


def _tree_node_from_obj(obj) -> TreeNode:
    if "leaf" in obj:
        return Leaf(sign_of_bit(obj["leaf"]))
    return Node(
        obj["query"],
        tuple(_tree_node_from_obj(c) for c in obj["children"]),
    )


def circuit_to_json(c: Circuit) -> str:
    gates = []
    for g in c.gates:
        if isinstance(g, JuntaGate):
            gates.append(
                {
                    "kind": "junta",
                    "inputs": list(g.inputs),
                    "table": "".join(str(b) for b in g.table),
                }
            )
        else:
            gates.append({"kind": "tree", "root": _tree_node_to_obj(g.root)})
    payload = {"n": c.n, "w": c.w, "t": c.t, "m": c.m, "gates": gates}
    return json.dumps(payload)


def circuit_from_json(text: str) -> Circuit:
    data = json.loads(text)
    gates: list[Gate] = []
    for g in data["gates"]:
        if g["kind"] == "junta":
            gates.append(
                JuntaGate(tuple(g["inputs"]), tuple(int(b) for b in g["table"]))
            )
        elif g["kind"] == "tree":
            gates.append(WordDecisionTree(_tree_node_from_obj(g["root"])))
        else:
            raise ValidationError([f"unknown gate kind {g['kind']!r}"])
    c = Circuit(data["n"], data["w"], data["t"], tuple(gates))
    if c.m != data["m"]:
        raise ValidationError([f"declared m = {data['m']} but {c.m} gates"])
    return c.ensure_valid()
