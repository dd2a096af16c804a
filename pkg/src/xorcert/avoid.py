"""Range avoidance and remote-point certification for low-depth circuits.

Fast path: enough parity outputs force a GF(2) dependency whose violation is
a range gap. Otherwise parity outputs are pruned and candidate targets drawn
from an explicit generator are certified one seed at a time:

* junta circuits split into per-pattern XOR instances; the certificate sums
  their refutation bounds with the non-parity ceiling on the top level;
* decision-tree circuits go through the layered character grouping and refute
  every ensemble key.

Both certificates are sound upper bounds on the best output/target agreement,
so a certified target is guaranteed to sit outside the range.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .circuits import Circuit, JuntaGate, to_layered
from .core import ValidationError
from .fourier import ParityClass, classify_parity, expand_junta
from .gf2 import find_xor_dependency
from .prg import GeneratorSpec, sample_int, seed_count, seed_to_str
from .reduction import (
    JuntaSplit,
    SchemeEnsemble,
    attach_rhs,
    group_characters,
    nonadaptive_split,
)
from .refuter import Certificate, RefuteParams, _combine_mode, _float_up, refute


@dataclass(frozen=True)
class CertifyParams:
    eps: Fraction | None = None  # defaults to 2^(-2t)
    refute: RefuteParams = field(default_factory=RefuteParams)

    def eps_for(self, t: int) -> Fraction:
        return self.eps if self.eps is not None else Fraction(1, 1 << (2 * t))


@dataclass(frozen=True)
class RemoteCertificate:
    """Certified upper bound on max over inputs of <C(x), b>.

    ``min_distance`` is the implied lower bound on the fractional Hamming
    distance from b to the range, already scaled back to all m outputs when
    parity outputs were pruned.
    """

    status: str  # certified | uncertain
    path: str  # junta | tree
    correlation_bound: float
    min_distance: Fraction
    kept_outputs: int
    certificate: Certificate

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def _uncertain_remote(path: str, kept: int) -> RemoteCertificate:
    return RemoteCertificate(
        status="uncertain",
        path=path,
        correlation_bound=1.0,
        min_distance=Fraction(0),
        kept_outputs=kept,
        certificate=Certificate(mode="direct", bound=1.0, status="uncertain"),
    )


def classify_outputs(c: Circuit) -> list[ParityClass]:
    """Parity class of every junta output; requires a junta circuit."""
    out = []
    for i, gate in enumerate(c.gates):
        if not isinstance(gate, JuntaGate):
            raise ValidationError([f"gate {i} is not a junta gate"])
        out.append(classify_parity(expand_junta(gate, c.n)))
    return out


def find_parity_dependency(
    c: Circuit,
) -> tuple[list[int], int] | None:
    """Outputs multiplying to a forced constant, found by GF(2) elimination.

    Collects XOR/NXOR outputs as support vectors; any subset XOR-ing to zero
    multiplies to a fixed sign. With at least n + 1 parity outputs a
    dependency always exists.
    """
    vectors = []
    signs = []
    positions = []
    for i, gate in enumerate(c.gates):
        if not isinstance(gate, JuntaGate):
            return None
        exp = expand_junta(gate, c.n)
        cls = classify_parity(exp)
        if cls is ParityClass.OTHER:
            continue
        mask = 0
        for v in exp.support():
            mask |= 1 << v
        vectors.append(mask)
        signs.append(1 if cls is ParityClass.XOR else -1)
        positions.append(i)
    dep = find_xor_dependency(vectors)
    if dep is None:
        return None
    outputs = [positions[j] for j in dep]
    forced = 1
    for j in dep:
        forced *= signs[j]
    return outputs, forced


def _certify_junta_split(
    split: JuntaSplit, b: Sequence[int], params: CertifyParams
) -> tuple[Fraction, Certificate, bool]:
    """Sum of per-pattern refutation bounds plus the non-parity ceiling.

    Returns (pruned-circuit correlation bound, composite certificate, ok).
    """
    t = split.t
    parts = []
    total = Fraction(0)
    ok = True
    for alpha in sorted(split.buckets):
        inst = split.instance(alpha, b)
        cert = refute(inst, params.refute)
        parts.append(cert)
        ok = ok and cert.certified
        total += Fraction(cert.bound)
    ceiling = Fraction((1 << (t - 1)) - 1, 1 << (t - 1)) if t >= 1 else Fraction(0)
    total += ceiling
    composite = Certificate(
        mode=_combine_mode(parts) if parts else "direct",
        bound=_float_up(total),
        status="certified" if ok else "uncertain",
        breakdown=tuple(parts),
    )
    return total, composite, ok


def _certify_tree_ensemble(
    ens: SchemeEnsemble, b: Sequence[int], params: CertifyParams
) -> tuple[Fraction, Certificate, bool]:
    """Sum of refutation bounds over every ensemble key."""
    parts = []
    total = Fraction(0)
    ok = True
    for key, inst in sorted(attach_rhs(ens, b).items()):
        cert = refute(inst, params.refute)
        parts.append(cert)
        ok = ok and cert.certified
        total += Fraction(cert.bound)
    composite = Certificate(
        mode=_combine_mode(parts) if parts else "direct",
        bound=_float_up(total),
        status="certified" if ok else "uncertain",
        breakdown=tuple(parts),
    )
    return total, composite, ok


def certify_not_in_range(
    c: Circuit,
    b: Sequence[int],
    params: CertifyParams | None = None,
    *,
    prepared: JuntaSplit | SchemeEnsemble | None = None,
) -> RemoteCertificate:
    """Certify that b is far from (in particular outside) the range of c.

    Junta circuits: parity outputs are pruned (sound, since non-membership on
    a coordinate subset implies non-membership overall) and the certificate
    checks that the summed refutation bounds stay below 1. Decision-tree
    circuits: every ensemble key is refuted and the certificate claims
    fractional distance at least 1/2 - eps. Never certifies falsely.
    """
    params = params or CertifyParams()
    c.ensure_valid()
    if len(b) != c.m:
        raise ValidationError([f"target length {len(b)} != m = {c.m}"])

    if c.is_junta_circuit():
        if isinstance(prepared, JuntaSplit):
            split = prepared
            kept = list(range(c.m))
            b_kept = list(b)
        else:
            classes = classify_outputs(c)
            kept = [i for i, cl in enumerate(classes) if cl is ParityClass.OTHER]
            if not kept:
                return _uncertain_remote("junta", 0)
            pruned = Circuit(c.n, c.w, c.t, tuple(c.gates[i] for i in kept))
            split = nonadaptive_split(pruned)
            b_kept = [b[i] for i in kept]
        total, composite, ok = _certify_junta_split(split, b_kept, params)
        m_kept = len(kept)
        if not ok or total >= 1:
            return _uncertain_remote("junta", m_kept)
        return _junta_remote(total, composite, m_kept, c.m)

    # decision-tree path
    eps = params.eps_for(c.t)
    if isinstance(prepared, SchemeEnsemble):
        ens = prepared
    else:
        ens = group_characters(to_layered(c.with_tree_gates()))
    total, composite, ok = _certify_tree_ensemble(ens, b, params)
    if not ok or total > 2 * eps:
        return _uncertain_remote("tree", c.m)
    distance = (1 - total) / 2
    return RemoteCertificate(
        status="certified",
        path="tree",
        correlation_bound=_float_up(total),
        min_distance=distance,
        kept_outputs=c.m,
        certificate=composite,
    )


@dataclass(frozen=True)
class AvoidParams:
    budget: int = 256  # maximum number of seeds to try
    certify: CertifyParams = field(default_factory=CertifyParams)
    workers: int = 1
    wall_clock_s: float | None = None


@dataclass(frozen=True)
class AvoidResult:
    y: tuple[int, ...] | None
    justification: dict
    certificates: tuple[Certificate, ...]
    seeds_tried: int
    stats: dict

    @property
    def succeeded(self) -> bool:
        return self.y is not None

    def to_obj(self, wall_time: float | None = None) -> dict:
        return {
            "y": list(self.y) if self.y is not None else None,
            "justification": self.justification,
            "certificates": [c.to_obj() for c in self.certificates],
            "seeds_tried": self.seeds_tried,
            "wall_time": wall_time,
            "stats": self.stats,
        }

    def to_json(self, wall_time: float | None = None) -> str:
        return json.dumps(self.to_obj(wall_time))


def avoid_result_from_obj(obj: dict) -> AvoidResult:
    from .refuter import certificate_from_obj

    return AvoidResult(
        y=tuple(obj["y"]) if obj["y"] is not None else None,
        justification=obj["justification"],
        certificates=tuple(certificate_from_obj(c) for c in obj["certificates"]),
        seeds_tried=obj["seeds_tried"],
        stats=obj.get("stats", {}),
    )


def _parity_avoid_result(c: Circuit, outputs: list[int], forced: int) -> AvoidResult:
    y = [1] * c.m
    if forced == 1:
        y[outputs[0]] = -1  # break the forced product
    return AvoidResult(
        y=tuple(y),
        justification={
            "kind": "parity_dependency",
            "outputs": outputs,
            "forced_sign": forced,
        },
        certificates=(
            Certificate(mode="parity", bound=_float_up(Fraction(c.m - 1, c.m)), status="certified"),
        ),
        seeds_tried=0,
        stats={"parity_outputs": len(outputs)},
    )


def _junta_remote(
    total: Fraction, composite: Certificate, m_kept: int, m_full: int
) -> RemoteCertificate:
    distance = Fraction(m_kept, m_full) * (1 - total) / 2
    corr_full = Fraction(m_kept, m_full) * total + Fraction(m_full - m_kept, m_full)
    return RemoteCertificate(
        status="certified",
        path="junta",
        correlation_bound=_float_up(corr_full),
        min_distance=distance,
        kept_outputs=m_kept,
        certificate=composite,
    )


def _try_seed_range(
    work: tuple,
    seeds: Sequence[int],
) -> tuple[int, RemoteCertificate] | None:
    """First certified seed in the given ascending seed list, if any."""
    kind, prepared, b_positions, gen, params = work
    for seed in seeds:
        b_full = sample_int(gen, seed)
        b_kept = [b_full[i] for i in b_positions]
        if kind == "junta":
            total, composite, ok = _certify_junta_split(prepared, b_kept, params)
            if ok and total < 1:
                return seed, _junta_remote(total, composite, len(b_positions), gen.m)
        else:
            eps = params.eps_for(prepared.t)
            total, composite, ok = _certify_tree_ensemble(prepared, b_kept, params)
            if ok and total <= 2 * eps:
                rc = RemoteCertificate(
                    status="certified",
                    path="tree",
                    correlation_bound=_float_up(total),
                    min_distance=(1 - total) / 2,
                    kept_outputs=len(b_positions),
                    certificate=composite,
                )
                return seed, rc
    return None


def avoid(
    c: Circuit, gen: GeneratorSpec, params: AvoidParams | None = None
) -> AvoidResult:
    """Deterministically exhibit a string outside the range of c.

    Junta circuits first look for a parity dependency; otherwise parity
    outputs are pruned and seeds of the generator are enumerated in ascending
    order until one sample certifies. Pruned coordinates of the answer are
    filled with +1, which is sound because the certificate already excludes
    every extension of the kept coordinates from the range.
    """
    params = params or AvoidParams()
    c.ensure_valid()
    if gen.m != c.m:
        raise ValidationError([f"generator length {gen.m} != circuit outputs {c.m}"])

    stats: dict = {"budget": params.budget}
    if c.is_junta_circuit():
        dep = find_parity_dependency(c)
        if dep is not None:
            return _parity_avoid_result(c, dep[0], dep[1])
        classes = classify_outputs(c)
        kept = [i for i, cl in enumerate(classes) if cl is ParityClass.OTHER]
        stats["kept_outputs"] = len(kept)
        stats["parity_outputs"] = c.m - len(kept)
        if not kept:
            return AvoidResult(
                y=None,
                justification={"kind": "failed", "budget": stats},
                certificates=(),
                seeds_tried=0,
                stats=stats,
            )
        pruned = Circuit(c.n, c.w, c.t, tuple(c.gates[i] for i in kept))
        work = ("junta", nonadaptive_split(pruned), kept, gen, params.certify)
    else:
        kept = list(range(c.m))
        stats["kept_outputs"] = c.m
        stats["parity_outputs"] = 0
        ens = group_characters(to_layered(c.with_tree_gates()))
        work = ("tree", ens, kept, gen, params.certify)

    n_seeds = min(seed_count(gen), params.budget)
    start = time.monotonic()
    hit: tuple[int, RemoteCertificate] | None = None
    seeds_tried = 0
    if params.workers > 1 and n_seeds > 1:
        chunk = max(1, n_seeds // (params.workers * 4))
        ranges = [
            list(range(lo, min(lo + chunk, n_seeds)))
            for lo in range(0, n_seeds, chunk)
        ]
        with ProcessPoolExecutor(max_workers=params.workers) as pool:
            futures = [pool.submit(_try_seed_range, work, r) for r in ranges]
            for rng_seeds, fut in zip(ranges, futures):
                res = fut.result()
                if res is not None:
                    hit = res
                    seeds_tried += res[0] - rng_seeds[0] + 1
                    for later in futures:
                        later.cancel()
                    break
                seeds_tried += len(rng_seeds)
    else:
        for seed in range(n_seeds):
            if (
                params.wall_clock_s is not None
                and time.monotonic() - start > params.wall_clock_s
            ):
                stats["aborted"] = "wall clock"
                break
            seeds_tried += 1
            res = _try_seed_range(work, [seed])
            if res is not None:
                hit = res
                break

    if hit is None:
        stats["seeds_tried"] = seeds_tried
        return AvoidResult(
            y=None,
            justification={"kind": "failed", "budget": stats},
            certificates=(),
            seeds_tried=seeds_tried,
            stats=stats,
        )

    seed, rc = hit
    b_full = sample_int(gen, seed)
    y = [1] * c.m
    for pos in kept:
        y[pos] = b_full[pos]
    return AvoidResult(
        y=tuple(y),
        justification={
            "kind": "refutation",
            "seed": seed_to_str(gen, seed),
            "path": rc.path,
            "min_distance": [rc.min_distance.numerator, rc.min_distance.denominator],
        },
        certificates=(rc.certificate,),
        seeds_tried=seeds_tried,
        stats=stats,
    )
