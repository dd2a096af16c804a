from fractions import Fraction
from itertools import combinations

import pytest

from xorcert.core import ValidationError
from xorcert.oracle import brute_bias, brute_independence
from xorcert.prg import (
    GeneratorSpec,
    enumerate_seeds,
    format_spec,
    parse_spec,
    sample,
    sample_int,
    seed_count,
    seed_to_str,
)


class TestSpecs:
    def test_seed_bits(self):
        assert GeneratorSpec.uniform(5).seed_bits == 5
        assert GeneratorSpec.eps_biased(4, 4).seed_bits == 8
        assert GeneratorSpec.kwise(2, 4, 2).seed_bits == 4
        comp = GeneratorSpec.kwise_eps_biased(2, 4, Fraction(1, 4))
        assert comp.seed_bits == 2 * comp.outer_degree

    def test_eps_value(self):
        assert GeneratorSpec.eps_biased(4, 4).eps == Fraction(3, 16)
        spec = GeneratorSpec.eps_biased_for(9, Fraction(1, 16))
        assert spec.eps <= Fraction(1, 16)

    def test_kwise_needs_enough_points(self):
        with pytest.raises(ValidationError):
            GeneratorSpec.kwise(2, 5, 2)

    def test_seed_count(self):
        assert seed_count(GeneratorSpec.eps_biased(4, 4)) == 256
        assert seed_count(GeneratorSpec.uniform(1)) == 2
        assert seed_count(GeneratorSpec.kwise(2, 4, 2)) == 16
        with pytest.raises(ValidationError):
            seed_count(GeneratorSpec.kwise(8, 1024, 10), cap=1 << 16)

    def test_parse_format_roundtrip(self):
        for text in (
            "uniform:m=8",
            "biased:m=12,s=8",
            "kwise:k=3,m=8,s=3",
            "kwise_biased:k=2,m=4,s=2,so=6",
        ):
            spec = parse_spec(text)
            assert parse_spec(format_spec(spec)) == spec

    def test_parse_eps_forms(self):
        spec = parse_spec("biased:eps=2^-6,m=9")
        assert spec.eps <= Fraction(1, 64)
        spec2 = parse_spec("kwise_biased:k=2,m=4,eps=1/8")
        assert spec2.eps <= Fraction(1, 8)

    def test_parse_errors(self):
        with pytest.raises(ValidationError):
            parse_spec("nope:m=4")
        with pytest.raises(ValidationError):
            parse_spec("kwise:m=4")


class TestSampling:
    def test_zero_seed_all_plus_one(self):
        spec = GeneratorSpec.eps_biased(4, 4)
        assert sample_int(spec, 0) == (1, 1, 1, 1)

    def test_seed_string_interface(self):
        spec = GeneratorSpec.kwise(2, 4, 2)
        for seed in range(seed_count(spec)):
            text = seed_to_str(spec, seed)
            assert len(text) == spec.seed_bits
            assert sample(spec, text) == sample_int(spec, seed)
        with pytest.raises(ValidationError):
            sample(spec, "01")
        with pytest.raises(ValidationError):
            sample(spec, "01x1")

    def test_deterministic(self):
        spec = GeneratorSpec.eps_biased(8, 6)
        assert sample_int(spec, 37) == sample_int(spec, 37)

    def test_enumerate_ascending(self):
        spec = GeneratorSpec.kwise(2, 4, 2)
        assert list(enumerate_seeds(spec)) == list(range(16))


class TestGuarantees:
    def test_eps_biased_exhaustive(self):
        spec = GeneratorSpec.eps_biased(4, 4)
        assert brute_bias(spec) <= spec.eps

    def test_kwise_pairs_exactly_uniform(self):
        spec = GeneratorSpec.kwise(2, 4, 2)
        assert brute_independence(spec, 2) == 0

    def test_kwise_triples(self):
        spec = GeneratorSpec.kwise(3, 8, 3)
        assert brute_independence(spec, 3) == 0

    def test_kwise_eps_biased_small_parities(self):
        spec = GeneratorSpec.kwise_eps_biased(2, 4, Fraction(1, 4), 2)
        counts = {}
        total = seed_count(spec)
        for seed in range(total):
            out = sample_int(spec, seed)
            for size in (1, 2):
                for subset in combinations(range(spec.m), size):
                    sign = 1
                    for i in subset:
                        sign *= out[i]
                    counts[subset] = counts.get(subset, 0) + sign
        worst = max(Fraction(abs(v), total) for v in counts.values())
        assert worst <= spec.eps
