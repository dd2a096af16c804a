import random
from fractions import Fraction

import pytest

from xorcert.circuits import (
    Circuit,
    JuntaGate,
    Leaf,
    Node,
    WordDecisionTree,
    random_tree_circuit,
    to_layered,
)
from xorcert.core import Dyadic, ValidationError
from xorcert.oracle import brute_min_distance, brute_val, check_decomposition
from xorcert.reduction import (
    attach_rhs,
    group_characters,
    key_filename,
    nonadaptive_split,
)

from helpers import random_other_circuit, signs


def tree_identity(j):
    return WordDecisionTree(Node(j, (Leaf(1), Leaf(-1))))


class TestGroupCharacters:
    def test_single_output_identity(self):
        c = Circuit(1, 1, 1, (tree_identity(0),))
        ens = group_characters(to_layered(c))
        assert len(ens.schemes) == 4
        nonzero = {
            key: scheme
            for key, scheme in ens.schemes.items()
            if any(not w.is_zero() for w in scheme.weights)
        }
        assert set(nonzero) == {((1,), 1)}
        scheme = nonzero[((1,), 1)]
        assert scheme.hypergraph.edges == ((0,),)
        assert scheme.weights == (Dyadic(1),)

    def test_constant_output_goes_to_empty_key(self):
        c = Circuit(1, 1, 1, (WordDecisionTree(Leaf(-1)),))
        ens = group_characters(to_layered(c))
        scheme = ens.schemes[((0,), 1)]
        assert scheme.weights == (Dyadic(-1),)
        assert scheme.arity == 0

    def test_key_count_is_exactly_4_pow_tw(self):
        rng = random.Random(1)
        for n, w, t in [(2, 1, 2), (2, 2, 1), (3, 1, 1)]:
            c = random_tree_circuit(rng, n, w, t, 3)
            ens = group_characters(to_layered(c))
            assert len(ens.schemes) == 4 ** (t * w)
            for scheme in ens.schemes.values():
                assert scheme.m == c.m

    def test_l1_mass_per_output(self):
        rng = random.Random(5)
        c = random_tree_circuit(rng, 3, 2, 2, 4)
        ens = group_characters(to_layered(c))
        bound = Fraction(1 << (c.t * c.w))
        for i in range(c.m):
            mass = Fraction(0)
            for scheme in ens.schemes.values():
                mass += abs(scheme.weights[i].as_fraction())
            assert mass <= bound

    def test_decomposition_identity_exhaustive(self):
        rng = random.Random(7)
        for _ in range(5):
            c = random_tree_circuit(rng, 2, 1, 2, 3)
            ens = group_characters(to_layered(c))
            for x_code in range(4):
                x = [(x_code >> j) & 1 for j in range(2)]
                for b_code in range(8):
                    b = [1 - 2 * ((b_code >> i) & 1) for i in range(3)]
                    assert check_decomposition(c, x, b, ens) == 0

    def test_averaging_principle(self):
        """If some input is close to b, one instance value is large."""
        rng = random.Random(11)
        found_nontrivial = 0
        for _ in range(20):
            c = random_tree_circuit(rng, 2, 1, 2, 4)
            ens = group_characters(to_layered(c))
            key_count = len(ens.schemes)
            b = signs(rng, c.m)
            dist = brute_min_distance(c, b)
            if dist > Fraction(1, 2):
                continue
            eps = Fraction(1, 2) - dist
            if eps == 0:
                continue
            found_nontrivial += 1
            best = max(
                brute_val(inst) for inst in attach_rhs(ens, b).values()
            )
            assert best >= 2 * eps / key_count
        assert found_nontrivial > 0

    def test_attach_rhs_normalizes_signs(self):
        c = Circuit(2, 1, 2, (WordDecisionTree(
            Node(0, (Node(1, (Leaf(1), Leaf(-1))), Leaf(1)))
        ),))
        ens = group_characters(to_layered(c))
        insts = attach_rhs(ens, (1,))
        for inst in insts.values():
            for w in inst.scheme.weights:
                assert w.num >= 0

    def test_attach_rhs_preserves_value(self):
        rng = random.Random(13)
        for _ in range(20):
            c = random_tree_circuit(rng, 2, 1, 2, 3)
            ens = group_characters(to_layered(c))
            b = signs(rng, c.m)
            for key, scheme in ens.schemes.items():
                raw = brute_val(
                    attach_rhs(ens, b)[key]
                )
                from xorcert.core import XorInstance

                direct = brute_val(XorInstance(scheme, b))
                assert raw == direct

    def test_length_mismatch(self):
        c = Circuit(1, 1, 1, (tree_identity(0),))
        ens = group_characters(to_layered(c))
        with pytest.raises(ValidationError):
            attach_rhs(ens, (1, 1))

    def test_key_filename(self):
        assert key_filename(((0, 3), 2)) == "scheme_b0-3_l2.json"


class TestNonadaptiveSplit:
    def test_or_pair_example(self):
        org1 = JuntaGate((0, 1), (0, 1, 1, 1))
        org2 = JuntaGate((1, 2), (0, 1, 1, 1))
        c = Circuit(3, 1, 2, (org1, org2))
        split = nonadaptive_split(c)
        hyper, weights = split.buckets[(0,)]
        assert hyper.edges == ((0,), (1,))
        assert weights == (Dyadic(1, 1), Dyadic(1, 1))
        hyper0, weights0 = split.buckets[()]
        assert weights0 == (Dyadic(-1, 1), Dyadic(-1, 1))

    def test_rejects_parity_gate(self):
        xor = JuntaGate((0, 1), (0, 1, 1, 0))
        c = Circuit(2, 1, 2, (xor,))
        with pytest.raises(ValidationError, match="parity"):
            nonadaptive_split(c)

    def test_bucket_count_and_shapes(self):
        rng = random.Random(3)
        c = random_other_circuit(rng, 6, 3, 10)
        split = nonadaptive_split(c)
        assert len(split.buckets) == 7  # proper subsets of a 3-element set
        for alpha, (hyper, weights) in split.buckets.items():
            assert hyper.m == c.m
            assert len(weights) == c.m
            assert all(len(e) == len(alpha) for e in hyper.edges)

    def test_split_reconstructs_correlation(self):
        """Sum of bucket values plus leading terms equals the correlation."""
        rng = random.Random(19)
        c = random_other_circuit(rng, 5, 2, 6)
        split = nonadaptive_split(c)
        from xorcert.circuits import eval_circuit
        from xorcert.fourier import expand_junta

        for trial in range(10):
            x_bits = [rng.randint(0, 1) for _ in range(5)]
            x = [1 - 2 * b for b in x_bits]
            b = signs(rng, c.m)
            corr = Fraction(
                sum(o * bi for o, bi in zip(eval_circuit(c, x_bits), b)), c.m
            )
            total = Fraction(0)
            for alpha, _ in split.buckets.items():
                inst = split.instance(alpha, b)
                total += inst.value(x)
            lead = Fraction(0)
            for gate, bi in zip(c.gates, b):
                exp = expand_junta(gate, 5)
                char = tuple(sorted(gate.inputs))
                coeff = exp.coeffs.get(char)
                if coeff is not None and len(gate.inputs) == c.t:
                    sign = bi
                    for v in char:
                        sign *= x[v]
                    lead += Fraction(sign * coeff.num, (1 << coeff.log_den) * c.m)
            assert corr == total + lead
