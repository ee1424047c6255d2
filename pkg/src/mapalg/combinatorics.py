"""Monomial labels and multiset machinery for the coefficient algebra.

The coefficient algebra is realized concretely as the span of a monomial
monoid: a label is an integer exponent vector over a fixed number of
variables, and the all-zero vector is the unit.  Multisets of labels (and
multisets of multisets, used for partitions) drive every enumeration in
the engine, so all orderings here are total and deterministic.
"""

from __future__ import annotations

import itertools
import math
from functools import total_ordering


@total_ordering
class ALabel:
    """A basis monomial of the coefficient algebra, as an exponent vector.

    Labels of one session share a fixed vector length.  In polynomial mode
    the exponents are non-negative; Laurent mode admits any integers (mode
    is enforced at the input boundary, not here).  The total order is
    graded-lex: total degree first, then the exponent vector.
    """

    __slots__ = ("exponents",)

    def __init__(self, exponents):
        exps = tuple(int(e) for e in exponents)
        if not exps:
            raise ValueError("a label needs at least one variable")
        self.exponents = exps

    @classmethod
    def unit(cls, nvars):
        return cls((0,) * nvars)

    @property
    def nvars(self):
        return len(self.exponents)

    @property
    def degree(self):
        return sum(self.exponents)

    def is_unit(self):
        return not any(self.exponents)

    def sort_key(self):
        return (self.degree, self.exponents)

    def __mul__(self, other):
        if not isinstance(other, ALabel):
            return NotImplemented
        if other.nvars != self.nvars:
            raise ValueError(
                "label length mismatch: %d vs %d" % (self.nvars, other.nvars)
            )
        return ALabel(a + b for a, b in zip(self.exponents, other.exponents))

    def __pow__(self, k):
        return ALabel(e * int(k) for e in self.exponents)

    def __eq__(self, other):
        return isinstance(other, ALabel) and self.exponents == other.exponents

    def __lt__(self, other):
        if not isinstance(other, ALabel):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return hash(self.exponents)

    def render(self):
        if self.is_unit():
            return "1"
        if self.nvars == 1:
            e = self.exponents[0]
            return "t" if e == 1 else "t^%d" % e
        parts = []
        for i, e in enumerate(self.exponents):
            if e == 0:
                continue
            parts.append("t%d" % (i + 1) if e == 1 else "t%d^%d" % (i + 1, e))
        return "*".join(parts)

    def __repr__(self):
        return self.render()

    def to_json(self):
        return list(self.exponents)

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, list) or not all(isinstance(e, int) for e in data):
            raise ValueError("label must be a JSON array of integers")
        return cls(data)


class Multiset:
    """A finite-support multiplicity function with totally ordered keys.

    Keys are labels, or multisets themselves when used one level up (a
    partition stores its parts as keys, and the empty multiset is a legal
    part).  Zero multiplicities are never stored, so the empty multiset is
    the additive unit.

    ``psi <= chi`` is the pointwise partial order from the math; use
    ``sort_key()`` when a total order is needed for sorting.
    """

    __slots__ = ("_items", "_map", "_size")

    def __init__(self, entries=()):
        acc = {}
        items = entries.items() if isinstance(entries, dict) else entries
        for key, mult in items:
            mult = int(mult)
            if mult < 0:
                raise ValueError("negative multiplicity %d for %r" % (mult, key))
            if mult:
                acc[key] = acc.get(key, 0) + mult
        self._map = acc
        self._items = tuple(sorted(acc.items(), key=lambda kv: kv[0].sort_key()))
        self._size = sum(acc.values())

    @classmethod
    def single(cls, key, mult=1):
        """The characteristic multiset of one key (scaled by ``mult``)."""
        return cls(((key, mult),))

    @property
    def size(self):
        return self._size

    def items(self):
        return self._items

    def support(self):
        return tuple(k for k, _ in self._items)

    def count(self, key):
        return self._map.get(key, 0)

    def __contains__(self, key):
        return key in self._map

    def __bool__(self):
        return bool(self._items)

    def __len__(self):
        return len(self._items)

    def __eq__(self, other):
        return isinstance(other, Multiset) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def sort_key(self):
        return (self._size, tuple((k.sort_key(), m) for k, m in self._items))

    def __le__(self, other):
        """Pointwise comparison: every multiplicity fits inside ``other``."""
        if not isinstance(other, Multiset):
            return NotImplemented
        return all(m <= other.count(k) for k, m in self._items)

    def __add__(self, other):
        if not isinstance(other, Multiset):
            return NotImplemented
        return Multiset(self._items + other._items)

    def __sub__(self, other):
        if not isinstance(other, Multiset):
            return NotImplemented
        if not other <= self:
            raise ValueError("cannot subtract %r from %r: not contained" % (other, self))
        out = dict(self._map)
        for k, m in other._items:
            out[k] -= m
        return Multiset(out)

    def scale(self, k):
        k = int(k)
        if k < 0:
            raise ValueError("negative scale")
        return Multiset((key, m * k) for key, m in self._items) if k else Multiset()

    def weighted_total(self):
        """Sum of key * multiplicity; keys must themselves be multisets."""
        out = Multiset()
        for key, m in self._items:
            out = out + key.scale(m)
        return out

    def render(self):
        if not self._items:
            return "{}"
        return "{" + ", ".join("%s:%d" % (k.render(), m) for k, m in self._items) + "}"

    def __repr__(self):
        return self.render()

    def to_json(self):
        return [[k.to_json(), m] for k, m in self._items]

    @classmethod
    def from_json(cls, data, key_from=ALabel.from_json):
        if not isinstance(data, list):
            raise ValueError("multiset must be a JSON array of [key, mult] pairs")
        pairs = []
        for entry in data:
            if not (isinstance(entry, list) and len(entry) == 2):
                raise ValueError("multiset entry must be a [key, mult] pair")
            key, mult = entry
            if not isinstance(mult, int) or mult <= 0:
                raise ValueError("multiset multiplicity must be a positive integer")
            pairs.append((key_from(key), mult))
        return cls(pairs)


def multinomial(ms):
    """Number of distinct arrangements: size! over the product of
    multiplicity factorials.  Always a positive integer."""
    num = math.factorial(ms.size)
    den = 1
    for _, m in ms.items():
        den *= math.factorial(m)
    assert num % den == 0
    return num // den


def binom_int(n, k):
    """Generalized binomial coefficient for any integer ``n`` and k >= 0."""
    if k < 0:
        raise ValueError("negative lower index")
    num = 1
    for j in range(k):
        num *= n - j
    den = math.factorial(k)
    assert num % den == 0
    return num // den


def label_product(ms, nvars=None):
    """Product of every key raised to its multiplicity, as a single label.

    The empty multiset maps to the unit, which needs an explicit variable
    count since there is no key to infer it from.
    """
    if not ms:
        if nvars is None:
            raise ValueError("empty multiset: pass nvars to produce the unit label")
        return ALabel.unit(nvars)
    first = ms.items()[0][0]
    out = ALabel.unit(first.nvars)
    for key, m in ms.items():
        out = out * key**m
    return out


def sub_multisets(chi, size=None):
    """All multisets contained pointwise in ``chi``, each exactly once.

    Without ``size`` the count is the product of (multiplicity + 1) over
    the support.  With ``size`` only those of that total size are yielded.
    The order is deterministic (per-key multiplicities counted up in key
    order, last key fastest).
    """
    if size is not None and size < 0:
        raise ValueError("size must be >= 0")
    keys = [k for k, _ in chi.items()]
    ranges = [range(m + 1) for _, m in chi.items()]
    for combo in itertools.product(*ranges):
        psi = Multiset(zip(keys, combo))
        if size is None or psi.size == size:
            yield psi


def _parts_descending(budget):
    parts = list(sub_multisets(budget))
    parts.sort(key=Multiset.sort_key, reverse=True)
    return parts


def partitions(chi, parts):
    """All ways to write ``chi`` as a sum of exactly ``parts`` multisets,
    counted with multiplicity and emitted as a multiset of parts.

    The empty multiset is an allowed part.  This is forced by the engine's
    closed product formulas: splitting into k parts must cover the case
    where some factors carry no label content at all, otherwise the k-th
    divided power of a single generator would not arise from any split.
    Consequently the partition count without a part bound is infinite;
    only the fixed-size families enumerated here are materialized.
    """
    if parts < 1:
        raise ValueError("parts must be >= 1")

    def rec(remaining, left, bound):
        if left == 0:
            if not remaining:
                yield ()
            return
        for part in _parts_descending(remaining):
            key = part.sort_key()
            if bound is not None and key > bound:
                continue
            for rest in rec(remaining - part, left - 1, key):
                yield (part,) + rest

    for seq in rec(chi, parts, None):
        yield Multiset((p, 1) for p in seq)


def subpartitions(chi, parts):
    """Like :func:`partitions` but the parts need only sum to something
    contained in ``chi``.  Enumerated directly (not by unioning partition
    sets over sub-multisets), so the two counts can cross-check each other.
    """
    if parts < 0:
        raise ValueError("parts must be >= 0")

    def rec(budget, left, bound):
        if left == 0:
            yield ()
            return
        for part in _parts_descending(budget):
            key = part.sort_key()
            if bound is not None and key > bound:
                continue
            for rest in rec(budget - part, left - 1, key):
                yield (part,) + rest

    for seq in rec(chi, parts, None):
        yield Multiset((p, 1) for p in seq)
