"""Named element families of the integral form and reduction to its basis.

Everything here lives over the rank-one engine first: the Cartan-valued
pair elements, the root blocks built from divided powers and the dressed
blocks combining both.  The rank-one objects are pushed into a larger
algebra along a chosen root when needed.  The integral basis consists of
products (negative part) x (Cartan part) x (positive part) indexed by
tuples of label multisets, and arbitrary elements are reduced against it
by greedy leading-term elimination.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import (
    ALabel,
    Multiset,
    multinomial,
    partitions,
    sub_multisets,
)
from .pbw import Element, Gen, divided_power, make_preset, monomial_key, omega


def _sl2():
    return make_preset("sl2")


def _sign(sign):
    if sign in (1, "+", "+1"):
        return 1
    if sign in (-1, "-", "-1"):
        return -1
    raise ValueError("sign must be + or -")


def _fold_label(start, *multisets):
    out = start
    for ms in multisets:
        for key, m in ms.items():
            out = out * key**m
    return out


def root_monomial(sign, alpha, psi, preset=None):
    """Ordered product of divided powers of one root vector, one factor
    per label in ``psi`` with exponent its multiplicity.  The factors
    commute, so this is a single monomial with coefficient the inverse
    product of multiplicity factorials."""
    preset = preset or _sl2()
    index = preset.root_index(_sign(sign), alpha)
    if not psi:
        return Element.one(preset)
    mono = tuple((Gen(index, a), m) for a, m in psi.items())
    den = 1
    for _, m in psi.items():
        den *= math.factorial(m)
    return Element.monomial(preset, mono, Fraction(1, den))


_cartan_pair_cache = {}


def cartan_pair(phi, chi):
    """The Cartan-valued element attached to a pair of label multisets.

    Defined by a recursion over proper sub-multiset splits; it vanishes
    whenever the two sizes differ and equals 1 on the empty pair.  Values
    are memoized, shared and must not be mutated.
    """
    key = (phi, chi)
    hit = _cartan_pair_cache.get(key)
    if hit is not None:
        return hit
    sl2 = _sl2()
    if phi.size != chi.size:
        out = Element.zero(sl2)
    elif not phi:
        out = Element.one(sl2)
    else:
        acc = Element.zero(sl2)
        for psi1 in sub_multisets(phi):
            if not psi1:
                continue
            for psi2 in sub_multisets(chi):
                if not psi2 or psi1.size != psi2.size:
                    continue
                rest = cartan_pair(phi - psi1, chi - psi2)
                if rest.is_zero():
                    continue
                lab = _fold_label(ALabel.unit(psi1.items()[0][0].nvars), psi1, psi2)
                weight = multinomial(psi1) * multinomial(psi2)
                acc = acc + weight * (
                    Element.generator(sl2, sl2.cartan_index(0), lab) * rest
                )
        out = -(acc / phi.size)
    _cartan_pair_cache[key] = out
    return out


def cartan_single(chi):
    """One-argument form: pair ``chi`` with size-many copies of the unit."""
    if not chi:
        return Element.one(_sl2())
    nvars = chi.items()[0][0].nvars
    return cartan_pair(chi, Multiset.single(ALabel.unit(nvars), chi.size))


def cartan_at_root(alpha, chi, target):
    return omega(alpha, cartan_single(chi), target)


def cartan_pair_at_root(alpha, phi, chi, target):
    return omega(alpha, cartan_pair(phi, chi), target)


_root_block_cache = {}


def root_block(sign, psi1, psi2, psi3):
    """The straightening block of root vectors for three label multisets.

    Recursion on the third argument: empty gives 1 or 0, a singleton
    gives one weighted generator, larger sizes average over all splits.
    The singleton closed form agrees with the general clause there (the
    overlap is exercised by the tests).  Zero whenever the first two
    sizes differ.
    """
    sign = _sign(sign)
    key = (sign, psi1, psi2, psi3)
    hit = _root_block_cache.get(key)
    if hit is not None:
        return hit
    sl2 = _sl2()
    if psi1.size != psi2.size:
        out = Element.zero(sl2)
    elif not psi3:
        out = Element.one(sl2) if not psi1 else Element.zero(sl2)
    elif psi3.size == 1:
        b = psi3.items()[0][0]
        lab = _fold_label(b, psi1, psi2)
        weight = multinomial(psi1) * multinomial(psi2)
        out = weight * Element.generator(sl2, sl2.root_index(sign, 0), lab)
    else:
        acc = Element.zero(sl2)
        for b in psi3.support():
            rest3 = psi3 - Multiset.single(b)
            for phi1 in sub_multisets(psi1):
                for phi2 in sub_multisets(psi2):
                    if phi1.size != phi2.size:
                        continue
                    left = root_block(sign, phi1, phi2, Multiset.single(b))
                    right = root_block(sign, psi1 - phi1, psi2 - phi2, rest3)
                    if left.is_zero() or right.is_zero():
                        continue
                    acc = acc + left * right
        out = acc / psi3.size
    _root_block_cache[key] = out
    return out


def root_block_expanded(sign, psi, b, k, c):
    """Closed partition formula for the block with second argument
    ``size-of-psi`` copies of ``b`` and third argument ``k`` copies of
    ``c``.  Must agree with :func:`root_block` on that whole domain; the
    empty part in partitions is what makes the pure divided power appear
    when ``psi`` is empty."""
    sign = _sign(sign)
    if k < 1:
        raise ValueError("k must be >= 1")
    sl2 = _sl2()
    index = sl2.root_index(sign, 0)
    acc = Element.zero(sl2)
    for split in partitions(psi, k):
        term = Element.one(sl2)
        for part, cnt in split.items():
            lab = _fold_label(c * b**part.size, part)
            scalar = Fraction(multinomial(part)) ** cnt
            term = term * (scalar * divided_power(sl2, Gen(index, lab), cnt))
        acc = acc + term
    return acc


_dressed_cache = {}


def dressed_block(psi1, psi2, psi3):
    """Root block dressed with Cartan pairs over all sub-multiset splits
    of its first two arguments."""
    key = (psi1, psi2, psi3)
    hit = _dressed_cache.get(key)
    if hit is not None:
        return hit
    acc = Element.zero(_sl2())
    for phi1 in sub_multisets(psi1):
        for phi2 in sub_multisets(psi2):
            if phi1.size != phi2.size:
                continue
            pair = cartan_pair(phi1, phi2)
            if pair.is_zero():
                continue
            block = root_block(1, psi1 - phi1, psi2 - phi2, psi3)
            if block.is_zero():
                continue
            acc = acc + pair * block
    _dressed_cache[key] = acc
    return acc


@dataclass(frozen=True)
class BasisIndex:
    """Index of one basis element: a label multiset per positive root for
    the negative and positive parts, one per simple root for the Cartan
    part."""

    minus: tuple
    zero: tuple
    plus: tuple

    def total_size(self):
        return sum(ms.size for ms in self.minus + self.zero + self.plus)

    def render(self):
        def block(mss):
            return "[" + ", ".join(ms.render() for ms in mss) + "]"

        return "minus=%s zero=%s plus=%s" % (
            block(self.minus),
            block(self.zero),
            block(self.plus),
        )

    def to_json(self):
        return {
            "minus": [ms.to_json() for ms in self.minus],
            "zero": [ms.to_json() for ms in self.zero],
            "plus": [ms.to_json() for ms in self.plus],
        }

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or set(data) != {"minus", "zero", "plus"}:
            raise ValueError("basis index needs 'minus', 'zero' and 'plus'")
        return cls(
            tuple(Multiset.from_json(ms) for ms in data["minus"]),
            tuple(Multiset.from_json(ms) for ms in data["zero"]),
            tuple(Multiset.from_json(ms) for ms in data["plus"]),
        )


_basis_element_cache = {}


def basis_element(preset, idx):
    """The basis element for ``idx``: negative root monomials, then the
    Cartan factors, then positive root monomials, normalized."""
    if len(idx.minus) != preset.m or len(idx.plus) != preset.m:
        raise ValueError("index arity does not match the %d positive roots" % preset.m)
    if len(idx.zero) != preset.rank:
        raise ValueError("index arity does not match rank %d" % preset.rank)
    key = (preset.name, idx)
    hit = _basis_element_cache.get(key)
    if hit is not None:
        return hit
    out = Element.one(preset)
    for j, ms in enumerate(idx.minus):
        out = out * root_monomial(-1, j, ms, preset)
    for i, ms in enumerate(idx.zero):
        out = out * cartan_at_root(preset.simple_root_index(i), ms, preset)
    for j, ms in enumerate(idx.plus):
        out = out * root_monomial(1, j, ms, preset)
    _basis_element_cache[key] = out
    return out


@dataclass
class ReductionResult:
    """Exact decomposition over the basis: input = sum of coeff * basis
    element + residual, with residual zero on success and ``integral``
    true exactly when every coefficient is an integer."""

    terms: list
    integral: bool
    residual: Element

    def to_json(self):
        return {
            "terms": [[idx.to_json(), str(c)] for idx, c in self.terms],
            "integral": self.integral,
        }


def _index_of_monomial(preset, mono):
    minus = [dict() for _ in range(preset.m)]
    zero = [dict() for _ in range(preset.rank)]
    plus = [dict() for _ in range(preset.m)]
    for g, e in mono:
        cls, pos = preset.kind(g.index)
        if cls == "neg":
            minus[pos][g.label] = e
        elif cls == "cartan":
            zero[pos][g.label] = e
        else:
            plus[pos][g.label] = e
    return BasisIndex(
        tuple(Multiset(d) for d in minus),
        tuple(Multiset(d) for d in zero),
        tuple(Multiset(d) for d in plus),
    )


def _leading_coeff(idx):
    num = 1
    den = 1
    for ms in idx.minus + idx.plus:
        for _, m in ms.items():
            den *= math.factorial(m)
    for ms in idx.zero:
        num *= (-1) ** ms.size
        for _, m in ms.items():
            den *= math.factorial(m)
    return Fraction(num, den)


def reduce_to_basis(elem):
    """Greedy leading-term elimination against the basis.

    Every monomial's exponent pattern names a unique index whose basis
    element has exactly that monomial as its top-degree term (the Cartan
    factors contribute an alternating sign and lower-degree corrections).
    Each round removes the maximal monomial of the residual and introduces
    only strictly smaller degrees, so the loop terminates with residual
    zero and reconstructs the input exactly.
    """
    preset = elem.preset
    residual = elem
    terms = []
    while residual.terms:
        mono = max(residual.terms, key=monomial_key)
        idx = _index_of_monomial(preset, mono)
        coeff = residual.terms[mono] / _leading_coeff(idx)
        terms.append((idx, coeff))
        residual = residual - coeff * basis_element(preset, idx)
    integral = all(c.denominator == 1 for _, c in terms)
    return ReductionResult(terms=terms, integral=integral, residual=residual)


def _labels_up_to(nvars, max_degree):
    out = []
    for total in range(max_degree + 1):
        for exps in _compositions(total, nvars):
            out.append(ALabel(exps))
    out.sort(key=ALabel.sort_key)
    return out


def _compositions(total, slots):
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


def _multisets_of_size(pool, size):
    for combo in itertools.combinations_with_replacement(pool, size):
        yield Multiset((k, 1) for k in combo)


def enumerate_basis(preset, max_degree, max_label_degree, nvars=1):
    """All basis indices with total multiset size at most ``max_degree``
    over polynomial labels of degree at most ``max_label_degree``, in a
    fixed deterministic order.  Laurent labels are not enumerable by
    degree and are out of scope here."""
    if max_degree < 0 or max_label_degree < 0:
        raise ValueError("bounds must be >= 0")
    pool = _labels_up_to(nvars, max_label_degree)
    slots = 2 * preset.m + preset.rank
    for total in range(max_degree + 1):
        for sizes in _compositions(total, slots):
            pools = [list(_multisets_of_size(pool, s)) for s in sizes]
            for combo in itertools.product(*pools):
                yield BasisIndex(
                    tuple(combo[: preset.m]),
                    tuple(combo[preset.m : preset.m + preset.rank]),
                    tuple(combo[preset.m + preset.rank :]),
                )
