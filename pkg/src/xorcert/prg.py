"""Explicit pseudorandom sign-string generators with enumerable seed spaces.

Three constructions over GF(2^s):

* ``eps_biased``  -- powering construction: seed (a, x); output bit i is the
  binary inner product of the representations of a^i and x. Every nonempty
  parity has bias at most (m - 1) / 2^s.
* ``kwise``       -- Vandermonde parity check: seed is k field elements; bit i
  is the inner product of the seed with (1, p_i, p_i^2, ..., p_i^{k-1}) for
  distinct field points p_i, so any k output coordinates are exactly uniform.
* ``kwise_eps_biased`` -- the kwise generator seeded by an eps-biased string,
  giving bias at most the outer generator's bound on every parity of size <= k.

``uniform`` (seed = output) is included as the trivial baseline for audits.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .core import ValidationError, sign_of_bit
from .gf2 import IRREDUCIBLE, gf_mul

ENUMERATION_CAP = 1 << 20


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str  # uniform | eps_biased | kwise | kwise_eps_biased
    m: int
    k: int | None = None
    eps: Fraction | None = None
    field_degree: int = 0
    outer_degree: int = 0  # eps_biased stage degree for the composed kind

    def __post_init__(self) -> None:
        if self.kind not in ("uniform", "eps_biased", "kwise", "kwise_eps_biased"):
            raise ValidationError([f"unknown generator kind {self.kind!r}"])
        if self.m < 1:
            raise ValidationError([f"output length {self.m} < 1"])
        if self.kind != "uniform" and self.field_degree not in IRREDUCIBLE:
            raise ValidationError(
                [f"field degree {self.field_degree} outside the shipped table"]
            )
        if self.kind in ("kwise", "kwise_eps_biased"):
            if self.k is None or self.k < 1:
                raise ValidationError(["kwise generator needs k >= 1"])
            if self.m > 1 << self.field_degree:
                raise ValidationError(
                    [f"kwise needs 2^s >= m, got s={self.field_degree}, m={self.m}"]
                )
        if self.kind == "kwise_eps_biased" and self.outer_degree not in IRREDUCIBLE:
            raise ValidationError(
                [f"outer degree {self.outer_degree} outside the shipped table"]
            )

    @property
    def seed_bits(self) -> int:
        if self.kind == "uniform":
            return self.m
        if self.kind == "eps_biased":
            return 2 * self.field_degree
        if self.kind == "kwise":
            return self.k * self.field_degree
        return 2 * self.outer_degree

    @staticmethod
    def uniform(m: int) -> "GeneratorSpec":
        return GeneratorSpec("uniform", m, eps=Fraction(0))

    @staticmethod
    def eps_biased(m: int, field_degree: int) -> "GeneratorSpec":
        eps = Fraction(m - 1, 1 << field_degree)
        return GeneratorSpec("eps_biased", m, eps=eps, field_degree=field_degree)

    @staticmethod
    def eps_biased_for(m: int, eps_target: Fraction) -> "GeneratorSpec":
        if m == 1:
            return GeneratorSpec.eps_biased(1, 1)
        s = 1
        while Fraction(m - 1, 1 << s) > eps_target:
            s += 1
            if s > max(IRREDUCIBLE):
                raise ValidationError(
                    [f"bias target {eps_target} needs field degree > {max(IRREDUCIBLE)}"]
                )
        return GeneratorSpec.eps_biased(m, s)

    @staticmethod
    def kwise(k: int, m: int, field_degree: int | None = None) -> "GeneratorSpec":
        if field_degree is None:
            field_degree = max(1, (m - 1).bit_length())
        return GeneratorSpec("kwise", m, k=k, field_degree=field_degree)

    @staticmethod
    def kwise_eps_biased(
        k: int,
        m: int,
        eps_target: Fraction,
        field_degree: int | None = None,
    ) -> "GeneratorSpec":
        inner = GeneratorSpec.kwise(k, m, field_degree)
        inner_bits = inner.seed_bits
        outer = GeneratorSpec.eps_biased_for(inner_bits, eps_target)
        return GeneratorSpec(
            "kwise_eps_biased",
            m,
            k=k,
            eps=outer.eps,
            field_degree=inner.field_degree,
            outer_degree=outer.field_degree,
        )


@functools.lru_cache(maxsize=4096)
def _power_reps(a: int, m: int, s: int) -> tuple[int, ...]:
    """Representations of a^0, a^1, ..., a^(m-1) in GF(2^s); 0^0 = 1."""
    reps = [1]
    acc = 1
    for _ in range(m - 1):
        acc = gf_mul(acc, a, s)
        reps.append(acc)
    return tuple(reps)


@functools.lru_cache(maxsize=64)
def _vandermonde_columns(k: int, m: int, s: int) -> tuple[int, ...]:
    """Column masks: bits of (1, p_i, ..., p_i^{k-1}) packed k*s wide."""
    cols = []
    for i in range(m):
        mask = 0
        acc = 1
        for j in range(k):
            mask |= acc << (j * s)
            if j + 1 < k:
                acc = gf_mul(acc, i, s)
        cols.append(mask)
    return tuple(cols)


def sample_output_bits(spec: GeneratorSpec, seed: int) -> int:
    """Output as an int whose bit i is output bit i."""
    if not 0 <= seed < 1 << spec.seed_bits:
        raise ValidationError([f"seed {seed} outside [0, 2^{spec.seed_bits})"])
    if spec.kind == "uniform":
        return seed
    if spec.kind == "eps_biased":
        s = spec.field_degree
        a = seed & ((1 << s) - 1)
        x = seed >> s
        out = 0
        for i, rep in enumerate(_power_reps(a, spec.m, s)):
            out |= ((rep & x).bit_count() & 1) << i
        return out
    if spec.kind == "kwise":
        out = 0
        for i, col in enumerate(
            _vandermonde_columns(spec.k, spec.m, spec.field_degree)
        ):
            out |= ((col & seed).bit_count() & 1) << i
        return out
    # kwise_eps_biased: eps-biased string drives the kwise seed.
    inner = GeneratorSpec.kwise(spec.k, spec.m, spec.field_degree)
    outer = GeneratorSpec.eps_biased(inner.seed_bits, spec.outer_degree)
    return sample_output_bits(inner, sample_output_bits(outer, seed))


def sample_int(spec: GeneratorSpec, seed: int) -> tuple[int, ...]:
    """Sign string for an integer seed in [0, 2^seed_bits)."""
    bits = sample_output_bits(spec, seed)
    return tuple(sign_of_bit((bits >> i) & 1) for i in range(spec.m))


def sample(spec: GeneratorSpec, seed: str) -> tuple[int, ...]:
    """Sign string for a seed given as a 0/1 string; seed[i] is seed bit i."""
    if len(seed) != spec.seed_bits or any(ch not in "01" for ch in seed):
        raise ValidationError(
            [f"seed must be a 0/1 string of length {spec.seed_bits}"]
        )
    value = 0
    for i, ch in enumerate(seed):
        value |= (ch == "1") << i
    return sample_int(spec, value)


def seed_to_str(spec: GeneratorSpec, seed: int) -> str:
    return "".join("1" if (seed >> i) & 1 else "0" for i in range(spec.seed_bits))


def seed_count(spec: GeneratorSpec, cap: int | None = None) -> int:
    count = 1 << spec.seed_bits
    if cap is not None and count > cap:
        raise ValidationError(
            [f"seed space 2^{spec.seed_bits} exceeds enumeration cap {cap}"]
        )
    return count


def enumerate_seeds(spec: GeneratorSpec, cap: int | None = ENUMERATION_CAP) -> range:
    """Seeds in ascending numeric order."""
    return range(seed_count(spec, cap))


def format_spec(spec: GeneratorSpec) -> str:
    if spec.kind == "uniform":
        return f"uniform:m={spec.m}"
    if spec.kind == "eps_biased":
        return f"biased:m={spec.m},s={spec.field_degree}"
    if spec.kind == "kwise":
        return f"kwise:k={spec.k},m={spec.m},s={spec.field_degree}"
    return (
        f"kwise_biased:k={spec.k},m={spec.m},s={spec.field_degree},"
        f"so={spec.outer_degree}"
    )


def _parse_eps(text: str) -> Fraction:
    if "^" in text:
        base, exp = text.split("^")
        return Fraction(int(base)) ** int(exp)
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(text)


def parse_spec(text: str) -> GeneratorSpec:
    """Parse CLI spec strings such as kwise:k=8,m=1024,s=10 or biased:eps=2^-20,m=4096."""
    try:
        kind, _, rest = text.partition(":")
        kv: dict[str, str] = {}
        if rest:
            for part in rest.split(","):
                key, _, val = part.partition("=")
                kv[key.strip()] = val.strip()
        if kind == "uniform":
            return GeneratorSpec.uniform(int(kv["m"]))
        if kind == "biased":
            m = int(kv["m"])
            if "s" in kv:
                return GeneratorSpec.eps_biased(m, int(kv["s"]))
            return GeneratorSpec.eps_biased_for(m, _parse_eps(kv["eps"]))
        if kind == "kwise":
            s = int(kv["s"]) if "s" in kv else None
            return GeneratorSpec.kwise(int(kv["k"]), int(kv["m"]), s)
        if kind == "kwise_biased":
            k, m = int(kv["k"]), int(kv["m"])
            s = int(kv["s"]) if "s" in kv else None
            if "so" in kv:
                inner = GeneratorSpec.kwise(k, m, s)
                outer = GeneratorSpec.eps_biased(inner.seed_bits, int(kv["so"]))
                return GeneratorSpec(
                    "kwise_eps_biased",
                    m,
                    k=k,
                    eps=outer.eps,
                    field_degree=inner.field_degree,
                    outer_degree=outer.field_degree,
                )
            return GeneratorSpec.kwise_eps_biased(k, m, _parse_eps(kv["eps"]), s)
        raise KeyError(kind)
    except (KeyError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError([f"bad generator spec {text!r}: {exc}"]) from exc
