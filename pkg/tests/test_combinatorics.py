import itertools

import pytest

from mapalg.combinatorics import (
    ALabel,
    Multiset,
    binom_int,
    label_product,
    multinomial,
    partitions,
    sub_multisets,
    subpartitions,
)

U = ALabel([0])
T = ALabel([1])
T2 = ALabel([2])


def ms(*pairs):
    return Multiset(pairs)


class TestALabel:
    def test_mul_adds_exponents(self):
        assert T * T2 == ALabel([3])
        assert ALabel([1, 0]) * ALabel([0, 2]) == ALabel([1, 2])

    def test_unit_law(self):
        assert T * U == T
        assert ALabel.unit(3).is_unit()

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            T * ALabel([1, 2])

    def test_order_is_graded_lex(self):
        labels = [ALabel([0, 2]), ALabel([1, 0]), ALabel([2, 0]), ALabel([1, 1])]
        ordered = sorted(labels)
        assert ordered == [ALabel([1, 0]), ALabel([0, 2]), ALabel([1, 1]), ALabel([2, 0])]

    def test_order_strict_total(self):
        pool = [ALabel([a, b]) for a in range(3) for b in range(3)]
        for a, b in itertools.product(pool, repeat=2):
            assert (a < b) + (b < a) + (a == b) == 1

    def test_laurent_exponents_allowed(self):
        lab = ALabel([-1, 2])
        assert lab.degree == 1
        assert (lab * ALabel([1, -2])).is_unit()

    def test_render(self):
        assert U.render() == "1"
        assert T.render() == "t"
        assert T2.render() == "t^2"
        assert ALabel([1, 0, 2]).render() == "t1*t3^2"

    def test_json_round_trip(self):
        for lab in (U, T, ALabel([3, 0, -1])):
            assert ALabel.from_json(lab.to_json()) == lab
        with pytest.raises(ValueError):
            ALabel.from_json("nope")


class TestMultiset:
    def test_zero_mults_dropped(self):
        assert ms((T, 0)) == ms()
        assert not ms((T, 0))

    def test_negative_mult_rejected(self):
        with pytest.raises(ValueError):
            ms((T, -1))

    def test_size_and_count(self):
        chi = ms((U, 3), (T, 1))
        assert chi.size == 4
        assert chi.count(U) == 3
        assert chi.count(T2) == 0

    def test_pointwise_order(self):
        chi = ms((U, 3), (T, 1))
        assert ms((U, 1)) <= chi
        assert not (ms((T2, 1)) <= chi)
        assert chi <= chi

    def test_sub(self):
        chi = ms((U, 3), (T, 1))
        assert chi - ms((U, 1)) == ms((U, 2), (T, 1))
        assert chi - chi == ms()

    def test_sub_requires_containment(self):
        with pytest.raises(ValueError):
            ms((U, 1)) - ms((T, 1))

    def test_sub_round_trip(self):
        chi = ms((U, 2), (T, 2), (T2, 1))
        for psi in sub_multisets(chi):
            assert (chi - psi) + psi == chi

    def test_merge_on_construction(self):
        assert ms((T, 1), (T, 2)) == ms((T, 3))

    def test_scale(self):
        assert ms((T, 2)).scale(3) == ms((T, 6))
        assert ms((T, 2)).scale(0) == ms()

    def test_weighted_total(self):
        part = Multiset(((ms((T, 1)), 2), (ms((U, 1), (T, 1)), 1)))
        assert part.weighted_total() == ms((T, 3), (U, 1))

    def test_json_round_trip(self):
        chi = ms((U, 2), (T, 1))
        assert Multiset.from_json(chi.to_json()) == chi
        with pytest.raises(ValueError):
            Multiset.from_json([[T.to_json(), 0]])

    def test_empty_multiset_is_a_key(self):
        mom = Multiset(((ms(), 2),))
        assert mom.size == 2
        assert mom.count(ms()) == 2


class TestMultinomial:
    def test_examples(self):
        assert multinomial(ms((U, 2), (T, 1))) == 3
        assert multinomial(ms((U, 2), (T, 2))) == 6
        assert multinomial(ms()) == 1

    def test_single_block_is_one(self):
        for k in range(6):
            assert multinomial(ms((T, k))) == 1

    def test_at_least_one(self):
        pool = [U, T, T2]
        for combo in itertools.combinations_with_replacement(pool, 4):
            assert multinomial(Multiset((k, 1) for k in combo)) >= 1


class TestBinomInt:
    def test_nonnegative_agrees_with_math(self):
        import math

        for n in range(8):
            for k in range(n + 1):
                assert binom_int(n, k) == math.comb(n, k)

    def test_negative_upper_index(self):
        assert binom_int(-1, 1) == -1
        assert binom_int(-1, 2) == 1
        assert binom_int(-2, 3) == -4

    def test_zero(self):
        assert binom_int(5, 0) == 1
        with pytest.raises(ValueError):
            binom_int(3, -1)


class TestLabelProduct:
    def test_examples(self):
        assert label_product(ms((T, 2), (T2, 1))) == ALabel([4])
        assert label_product(ms(), nvars=1) == U
        assert label_product(ms((U, 5))) == U

    def test_empty_requires_nvars(self):
        with pytest.raises(ValueError):
            label_product(ms())

    def test_homomorphism(self):
        shapes = [ms(), ms((T, 1)), ms((U, 2), (T, 1)), ms((T2, 2))]
        for a, b in itertools.product(shapes, repeat=2):
            assert label_product(a + b, nvars=1) == label_product(
                a, nvars=1
            ) * label_product(b, nvars=1)


class TestSubMultisets:
    def test_divisor_example(self):
        chi = ms((U, 1), (T, 1))
        subs = list(sub_multisets(chi))
        assert len(subs) == 4
        assert set(subs) == {ms(), ms((U, 1)), ms((T, 1)), chi}

    def test_sized(self):
        assert list(sub_multisets(ms((T, 2)), 1)) == [ms((T, 1))]
        subs = list(sub_multisets(ms((U, 2), (T, 1)), 2))
        assert subs == [ms((U, 1), (T, 1)), ms((U, 2))] or set(subs) == {
            ms((U, 2)),
            ms((U, 1), (T, 1)),
        }
        assert len(subs) == 2

    def test_cardinality_product_rule(self):
        chi = ms((U, 2), (T, 3), (T2, 1))
        subs = list(sub_multisets(chi))
        assert len(subs) == (2 + 1) * (3 + 1) * (1 + 1)
        assert len(set(subs)) == len(subs)
        total = sum(len(list(sub_multisets(chi, k))) for k in range(chi.size + 1))
        assert total == len(subs)

    def test_deterministic(self):
        chi = ms((U, 2), (T, 2))
        assert list(sub_multisets(chi)) == list(sub_multisets(chi))


class TestPartitions:
    def test_empty_target_forced(self):
        parts = list(partitions(ms(), 3))
        assert parts == [Multiset(((ms(), 3),))]

    def test_two_part_example(self):
        got = set(partitions(ms((T, 2)), 2))
        want = {
            Multiset(((ms((T, 1)), 2),)),
            Multiset(((ms((T, 2)), 1), (ms(), 1))),
        }
        assert got == want

    def test_single_part(self):
        assert list(partitions(ms((T, 1)), 1)) == [Multiset(((ms((T, 1)), 1),))]

    def test_postconditions_per_element(self):
        for chi in [ms(), ms((T, 2)), ms((U, 1), (T, 2)), ms((U, 2), (T2, 1))]:
            for k in range(1, 4):
                seen = set()
                for psi in partitions(chi, k):
                    assert psi.size == k
                    assert psi.weighted_total() == chi
                    assert psi not in seen
                    seen.add(psi)

    def test_parts_bound_required(self):
        with pytest.raises(ValueError):
            list(partitions(ms((T, 1)), 0))


class TestSubpartitions:
    def test_empty_budget(self):
        assert list(subpartitions(ms(), 2)) == [Multiset(((ms(), 2),))]

    def test_single_key_example(self):
        got = set(subpartitions(ms((T, 1)), 1))
        assert got == {Multiset(((ms(), 1),)), Multiset(((ms((T, 1)), 1),))}

    def test_zero_parts(self):
        assert list(subpartitions(ms((T, 2)), 0)) == [Multiset()]

    def test_cross_enumeration_identity(self):
        for chi in [ms((T, 2)), ms((U, 1), (T, 2)), ms((U, 2), (T, 1))]:
            for k in range(1, 4):
                direct = list(subpartitions(chi, k))
                assert len(set(direct)) == len(direct)
                via_partitions = sum(
                    len(list(partitions(sub, k))) for sub in sub_multisets(chi)
                )
                assert len(direct) == via_partitions

    def test_postconditions(self):
        chi = ms((U, 2), (T, 1))
        for k in range(3):
            for psi in subpartitions(chi, k):
                assert psi.size == k
                assert psi.weighted_total() <= chi
