"""Exact PBW-ordered arithmetic in enveloping algebras of map algebras.

A Lie algebra is given by an ordered integer basis with the negative root
vectors first, the Cartan generators in the middle and the positive root
vectors last, so that a monomial whose generators weakly increase is
already in triangular normal form.  Elements are finite rational linear
combinations of such monomials over generators ``z tensor a`` where ``a``
is a monomial label; products are straightened exactly with the rewrite
``x y = y x + [x, y]`` and never touch floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .combinatorics import ALabel


class Gen(NamedTuple):
    """One generator ``basis[index] tensor label``.

    Tuple comparison gives the PBW order directly because the preset basis
    is stored negative roots first, then Cartan, then positive roots.
    """

    index: int
    label: ALabel


def _matmul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _matsub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _flat(mat):
    return tuple(x for row in mat for x in row)


def exact_solve(columns, target):
    """Solve ``sum_k c_k * columns[k] = target`` exactly over the rationals.

    Returns the unique coefficient list, or None when the system is
    inconsistent.  Raises if the columns are linearly dependent, since all
    callers expand against a basis.
    """
    ncols = len(columns)
    nrows = len(target)
    aug = [
        [Fraction(columns[k][r]) for k in range(ncols)] + [Fraction(target[r])]
        for r in range(nrows)
    ]
    pivots = []
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, nrows) if aug[r][col]), None)
        if pivot is None:
            raise ValueError("dependent columns in exact_solve")
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(nrows):
            if r != row and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    for r in range(row, nrows):
        if aug[r][ncols]:
            return None
    return [aug[r][ncols] for r in range(len(pivots))]


class LiePreset:
    """A Lie algebra with integer structure constants and root bookkeeping.

    Built from explicit matrices so the bracket table, the root pairings
    and the coroot expansions are computed rather than transcribed.  The
    constructor checks antisymmetry and the Jacobi identity exhaustively
    on the finished table; a failure there is a build-stopping defect.
    """

    def __init__(self, name, rank, positive_roots, neg_mats, cartan_mats, pos_mats):
        self.name = name
        self.rank = rank
        self.positive_roots = tuple(tuple(r) for r in positive_roots)
        self.m = len(self.positive_roots)
        self.dim = 2 * self.m + rank
        if len(neg_mats) != self.m or len(pos_mats) != self.m or len(cartan_mats) != rank:
            raise ValueError("basis size does not match root data")

        mats = list(neg_mats) + list(cartan_mats) + list(pos_mats)
        flats = [_flat(m) for m in mats]
        brackets = {}
        for i in range(self.dim):
            for j in range(self.dim):
                if i == j:
                    continue
                comm = _matsub(_matmul(mats[i], mats[j]), _matmul(mats[j], mats[i]))
                coeffs = exact_solve(flats, _flat(comm))
                if coeffs is None:
                    raise ValueError("bracket leaves the spanned algebra")
                entry = []
                for k, c in enumerate(coeffs):
                    if c:
                        if c.denominator != 1:
                            raise ValueError("non-integer structure constant")
                        entry.append((k, int(c)))
                if entry:
                    brackets[(i, j)] = tuple(entry)
        self._brackets = brackets
        self._validate_table()

        # beta_j(h_i) read off from [h_i, x^+_j] = beta_j(h_i) x^+_j
        pairing = []
        for j in range(self.m):
            row = []
            for i in range(rank):
                entry = dict(self._brackets.get((self.cartan_index(i), self.pos_index(j)), ()))
                extra = [k for k in entry if k != self.pos_index(j)]
                if extra:
                    raise ValueError("Cartan action is not diagonal on root vectors")
                row.append(entry.get(self.pos_index(j), 0))
            pairing.append(tuple(row))
        self._pairing = tuple(pairing)

        # h for each positive root: expansion of [x^+_j, x^-_j] in h_1..h_n
        coroots = []
        for j in range(self.m):
            entry = dict(self._brackets.get((self.pos_index(j), self.neg_index(j)), ()))
            vec = []
            for k, c in entry.items():
                if not (self.m <= k < self.m + rank):
                    raise ValueError("[x+, x-] is not Cartan")
            for i in range(rank):
                vec.append(entry.get(self.cartan_index(i), 0))
            coroots.append(tuple(vec))
        self._coroots = tuple(coroots)

        roots_by_vec = {r: j for j, r in enumerate(self.positive_roots)}
        self._root_sum = {}
        for j1, r1 in enumerate(self.positive_roots):
            for j2, r2 in enumerate(self.positive_roots):
                s = tuple(a + b for a, b in zip(r1, r2))
                if s in roots_by_vec:
                    self._root_sum[(j1, j2)] = roots_by_vec[s]

        self._nf_cache = {}

    def _validate_table(self):
        br = self._brackets

        def table(i, j):
            return br.get((i, j), ())

        for i in range(self.dim):
            for j in range(self.dim):
                forward = dict(table(i, j))
                backward = dict(table(j, i))
                if forward != {k: -c for k, c in backward.items()}:
                    raise ValueError("bracket table is not antisymmetric")
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    acc = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        for l, c1 in table(a, b):
                            for m, c2 in table(l, c):
                                acc[m] = acc.get(m, 0) + c1 * c2
                    if any(acc.values()):
                        raise ValueError("Jacobi identity fails on the bracket table")

    # basis layout -------------------------------------------------------
    def neg_index(self, j):
        return j

    def cartan_index(self, i):
        return self.m + i

    def pos_index(self, j):
        return self.m + self.rank + j

    def root_index(self, sign, alpha):
        if not 0 <= alpha < self.m:
            raise ValueError("unknown positive root %r" % (alpha,))
        return self.pos_index(alpha) if sign > 0 else self.neg_index(alpha)

    def kind(self, index):
        """Classify a basis index as ('neg', j), ('cartan', i) or ('pos', j)."""
        if 0 <= index < self.m:
            return ("neg", index)
        if self.m <= index < self.m + self.rank:
            return ("cartan", index - self.m)
        if self.m + self.rank <= index < self.dim:
            return ("pos", index - self.m - self.rank)
        raise ValueError("basis index out of range: %d" % index)

    def simple_root_index(self, i):
        """Positive-root index of the i-th simple root."""
        unit = tuple(1 if k == i else 0 for k in range(self.rank))
        return self.positive_roots.index(unit)

    def bracket_pairs(self, i, j):
        return self._brackets.get((i, j), ())

    def pairing(self, alpha, i):
        """Value of positive root ``alpha`` on the i-th Cartan generator."""
        return self._pairing[alpha][i]

    def coroot_expansion(self, alpha):
        return self._coroots[alpha]

    def root_sum_index(self, a, b):
        """Index of root a + b, or None when the sum is not a root."""
        return self._root_sum.get((a, b))

    def root_name(self, j):
        coeffs = self.positive_roots[j]
        return "a" + "".join(str(i + 1) * c for i, c in enumerate(coeffs))

    def gen_name(self, index):
        cls, pos = self.kind(index)
        if cls == "cartan":
            return "h_%d" % (pos + 1)
        return ("x+_" if cls == "pos" else "x-_") + self.root_name(pos)

    def __repr__(self):
        return "LiePreset(%s)" % self.name


_SL2_MATS = {
    "neg_mats": (((0, 0), (1, 0)),),
    "cartan_mats": (((1, 0), (0, -1)),),
    "pos_mats": (((0, 1), (0, 0)),),
}


def _e(i, j):
    return tuple(
        tuple(1 if (r, c) == (i, j) else 0 for c in range(3)) for r in range(3)
    )


def _d(i, j):
    return tuple(
        tuple(
            (1 if (r, c) == (i, i) else 0) - (1 if (r, c) == (j, j) else 0)
            for c in range(3)
        )
        for r in range(3)
    )


_SL3_MATS = {
    "neg_mats": (_e(1, 0), _e(2, 1), _e(2, 0)),
    "cartan_mats": (_d(0, 1), _d(1, 2)),
    "pos_mats": (_e(0, 1), _e(1, 2), _e(0, 2)),
}

_PRESET_CACHE = {}


def make_preset(name):
    """Return the validated preset for ``name`` in {sl2, sl3}.

    Presets are cached singletons, so identity comparison is safe and the
    normal-form cache is shared across all elements of one algebra.
    """
    preset = _PRESET_CACHE.get(name)
    if preset is not None:
        return preset
    if name == "sl2":
        preset = LiePreset("sl2", 1, ((1,),), **_SL2_MATS)
    elif name == "sl3":
        preset = LiePreset("sl3", 2, ((1, 0), (0, 1), (1, 1)), **_SL3_MATS)
    else:
        raise ValueError("unknown preset %r (expected sl2 or sl3)" % (name,))
    _PRESET_CACHE[name] = preset
    return preset


def _collect(letters):
    mono = []
    for g in letters:
        if mono and mono[-1][0] == g:
            mono[-1][1] += 1
        else:
            mono.append([g, 1])
    return tuple((g, e) for g, e in mono)


def _normalize_word(preset, word):
    """Normal form of a product of single generators, as monomial -> coeff.

    Adjacent out-of-order pairs are transposed with the bracket correction
    recorded as a strictly shorter word, which is normalized recursively.
    Each transposition removes one inversion, so the sort terminates, and
    the recursion depth is bounded by the word length.  Results are cached
    per preset and must be treated as frozen by callers.
    """
    cached = preset._nf_cache.get(word)
    if cached is not None:
        return cached
    letters = list(word)
    corrections = []
    i = 0
    while i + 1 < len(letters):
        a = letters[i]
        b = letters[i + 1]
        if a <= b:
            i += 1
            continue
        table = preset.bracket_pairs(a.index, b.index)
        if table:
            lab = a.label * b.label
            head = tuple(letters[:i])
            tail = tuple(letters[i + 2 :])
            for k, c in table:
                corrections.append((c, head + (Gen(k, lab),) + tail))
        letters[i] = b
        letters[i + 1] = a
        if i:
            i -= 1
    out = {}
    for c, shorter in corrections:
        for mono, f in _normalize_word(preset, shorter).items():
            out[mono] = out.get(mono, 0) + c * f
    mono = _collect(letters)
    out[mono] = out.get(mono, 0) + 1
    out = {m: Fraction(f) for m, f in out.items() if f}
    preset._nf_cache[word] = out
    return out


def _flatten(mono):
    return tuple(g for g, e in mono for _ in range(e))


def monomial_key(mono):
    """Sort key: total exponent first, then the monomial itself."""
    return (sum(e for _, e in mono), mono)


class Element:
    """A finite rational combination of PBW-ordered monomials.

    Canonical form: no zero coefficients, every monomial is a strictly
    increasing tuple of (generator, positive exponent) pairs, coefficients
    are exact fractions.  Elements are immutable by convention; all
    operations return fresh instances, so sharing across threads is safe.
    """

    __slots__ = ("preset", "terms")

    def __init__(self, preset, terms=None):
        self.preset = preset
        out = {}
        if terms:
            for m, c in terms.items():
                if not isinstance(c, Fraction):
                    c = Fraction(c)
                if c:
                    out[m] = c
        self.terms = out

    @classmethod
    def zero(cls, preset):
        return cls(preset)

    @classmethod
    def one(cls, preset):
        return cls(preset, {(): Fraction(1)})

    @classmethod
    def generator(cls, preset, index, label):
        preset.kind(index)
        return cls(preset, {((Gen(index, label), 1),): Fraction(1)})

    @classmethod
    def monomial(cls, preset, mono, coeff=1):
        return cls(preset, {tuple(mono): Fraction(coeff)})

    def _check_same(self, other):
        if self.preset is not other.preset:
            raise ValueError(
                "preset mismatch: %s vs %s" % (self.preset.name, other.preset.name)
            )

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.preset is other.preset and self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check_same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Element(self.preset, out)

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check_same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) - c
        return Element(self.preset, out)

    def __neg__(self):
        return Element(self.preset, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check_same(other)
            out = {}
            for m1, c1 in self.terms.items():
                w1 = _flatten(m1)
                for m2, c2 in other.terms.items():
                    c = c1 * c2
                    for m, f in _normalize_word(self.preset, w1 + _flatten(m2)).items():
                        out[m] = out.get(m, 0) + c * f
            return Element(self.preset, out)
        if isinstance(other, (int, Fraction)):
            return Element(
                self.preset, {m: c * other for m, c in self.terms.items()}
            )
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(Fraction(1, 1) / other)
        return NotImplemented

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            raise ValueError("negative power")
        out = Element.one(self.preset)
        for _ in range(k):
            out = out * self
        return out

    def degree(self):
        """Largest total exponent over the normal form; None for zero.

        The None sentinel is deliberate: the zero element has no degree
        and must never take part in numeric comparisons.
        """
        if not self.terms:
            return None
        return max(sum(e for _, e in m) for m in self.terms)

    def is_integral(self):
        return all(c.denominator == 1 for c in self.terms.values())

    def sorted_terms(self):
        """Highest degree first, then ascending monomial order within a degree."""
        return sorted(
            self.terms.items(),
            key=lambda kv: (-sum(e for _, e in kv[0]), kv[0]),
        )

    def render(self):
        if not self.terms:
            return "0"
        chunks = []
        for mono, coeff in self.sorted_terms():
            head = "" if not chunks else (" - " if coeff < 0 else " + ")
            mag = coeff if not chunks else abs(coeff)
            body = " ".join(
                "(%s⊗%s)" % (self.preset.gen_name(g.index), g.label.render())
                + ("^%d" % e if e > 1 else "")
                for g, e in mono
            )
            if mag.denominator == 1:
                cs = str(mag.numerator)
            else:
                cs = "(%s)" % mag
            chunks.append(head + (cs if not body else cs + " " + body))
        return "".join(chunks)

    def __repr__(self):
        return "<%s: %s>" % (self.preset.name, self.render())

    def to_json(self):
        out = []
        for mono, coeff in self.sorted_terms():
            out.append(
                {
                    "monomial": [[g.index, g.label.to_json(), e] for g, e in mono],
                    "coeff": [str(coeff.numerator), str(coeff.denominator)],
                }
            )
        return out

    @classmethod
    def from_json(cls, preset, data):
        """Parse an element; monomials are products in the written order
        and are normalized on load, so inputs need not be PBW-sorted."""
        if not isinstance(data, list):
            raise ValueError("element must be a JSON array of terms")
        total = cls.zero(preset)
        for term in data:
            if not isinstance(term, dict) or set(term) != {"monomial", "coeff"}:
                raise ValueError("element term must have 'monomial' and 'coeff'")
            num, den = term["coeff"]
            coeff = Fraction(int(num), int(den))
            factor = cls.one(preset)
            for entry in term["monomial"]:
                index, label, exp = entry
                if not isinstance(exp, int) or exp < 1:
                    raise ValueError("monomial exponent must be a positive integer")
                gen = cls.generator(preset, index, ALabel.from_json(label))
                factor = factor * gen**exp
            total = total + coeff * factor
        return total


def divided_power(preset, gen, r):
    """``gen^r / r!`` as a single monomial; r = 0 gives the identity."""
    r = int(r)
    if r < 0:
        raise ValueError("negative divided power")
    if r == 0:
        return Element.one(preset)
    return Element(preset, {((gen, r),): Fraction(1, math.factorial(r))})


def binom_element(u, r):
    """``u (u-1) ... (u-r+1) / r!`` expanded and normalized exactly."""
    r = int(r)
    if r < 0:
        raise ValueError("negative binomial power")
    out = Element.one(u.preset)
    for j in range(r):
        out = out * (u - j * Element.one(u.preset))
    return out / math.factorial(r)


def omega(alpha, u, target):
    """Algebra map from the rank-one engine into ``target`` along root
    ``alpha``: root vectors go to the corresponding root vectors, the
    Cartan generator goes to the coroot expansion of ``alpha``."""
    if u.preset.name != "sl2":
        raise ValueError("omega expects an element over the sl2 preset")
    if not 0 <= alpha < target.m:
        raise ValueError("invalid root index %r for %s" % (alpha, target.name))
    images = {}

    def image(gen):
        img = images.get(gen)
        if img is None:
            cls, _ = u.preset.kind(gen.index)
            if cls == "neg":
                img = Element.generator(target, target.neg_index(alpha), gen.label)
            elif cls == "pos":
                img = Element.generator(target, target.pos_index(alpha), gen.label)
            else:
                img = Element.zero(target)
                for i, c in enumerate(target.coroot_expansion(alpha)):
                    if c:
                        img = img + c * Element.generator(
                            target, target.cartan_index(i), gen.label
                        )
            images[gen] = img
        return img

    out = Element.zero(target)
    for mono, coeff in u.terms.items():
        prod = Element.one(target)
        for g, e in mono:
            prod = prod * image(g) ** e
        out = out + coeff * prod
    return out


def ad_divided(preset, x, r, v):
    """Apply ``(ad x)^r / r!`` to an element of the underlying Lie algebra
    (constants and single generators only; anything of higher degree is
    outside the adjoint action we need and is rejected)."""
    r = int(r)
    if r < 0:
        raise ValueError("negative divided power")
    deg = v.degree()
    if deg is not None and deg > 1:
        raise ValueError("ad_divided expects an element of degree <= 1")
    cur = v
    for _ in range(r):
        out = {}
        for mono, c in cur.terms.items():
            if not mono:
                continue
            ((g, _e),) = mono
            for k, cc in preset.bracket_pairs(x.index, g.index):
                key = ((Gen(k, x.label * g.label), 1),)
                out[key] = out.get(key, 0) + c * cc
        cur = Element(preset, out)
    return cur / math.factorial(r)
