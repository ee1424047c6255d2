"""Instance verification of the engine's algebraic identities.

Each check enumerates a bounded family of argument tuples, evaluates both
sides of one identity (or one degree / integrality claim) through the
exact engine and compares canonical forms.  "Pass" always means exact
structural equality; there are no numeric tolerances anywhere.  Bounds
come from named profiles so the same checks scale from smoke tests to
overnight runs, and failures carry the first counterexample with the
recomputed nonzero difference.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .combinatorics import (
    ALabel,
    Multiset,
    binom_int,
    multinomial,
    sub_multisets,
    subpartitions,
)
from .forms import (
    cartan_at_root,
    cartan_pair,
    cartan_pair_at_root,
    cartan_single,
    dressed_block,
    reduce_to_basis,
    root_block,
    root_block_expanded,
    root_monomial,
)
from .pbw import Element, Gen, ad_divided, divided_power, exact_solve, make_preset, omega


@dataclass
class CheckSpec:
    """Everything one check run depends on: the identity name, an optional
    forced algebra, the bound parameters and the seed for sampled parts."""

    name: str
    preset: str | None = None
    profile: str = "desk"
    params: dict = field(default_factory=dict)
    seed: int = 0


@dataclass
class CheckFailure:
    args: str
    lhs: str
    rhs: str
    diff: str

    def to_json(self):
        return {"args": self.args, "lhs": self.lhs, "rhs": self.rhs, "diff": self.diff}


@dataclass
class CheckReport:
    name: str
    instances: int
    failures: list
    elapsed_ms: float
    seed: int
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def to_json(self):
        return {
            "name": self.name,
            "instances": self.instances,
            "pass": self.passed,
            "failures": [f.to_json() for f in self.failures],
            "elapsedMs": round(self.elapsed_ms, 3),
            "seed": self.seed,
        }


# ---------------------------------------------------------------------------
# profiles: every bound the desk profile pins comes from the acceptance table


def _default_profiles():
    return {
        "smoke": {
            "straightening": dict(exh_size=1, exh_labels=(0, 1), rand_size=2, rand_labels=(0, 1), rand_count=5),
            "D-consistency": dict(max_psi=1, max_k=1, labels=(0, 1), deg_size=1),
            "p-properties": dict(lead_size=2, lead_labels=(0, 1), prod_size=1, prod_labels=(0, 1), mult_l=2, mult_labels=(0, 1)),
            "commutation": dict(size=1, labels=(0, 1), max_r=1, presets=("sl2",)),
            "D-identities": dict(size=1, labels=(0, 1)),
            "integrality": dict(qinuz_size=1, bbd_size=1, labels=(0, 1), ad_r=2, prod_len=2, prod_r=2, bracket_r=2, bracket_chi=1, sl3_size=1, presets=("sl2",)),
            "A2": dict(max_r=1, labels=(0, 1)),
            "divided-powers": dict(max_total=4, labels=(0, 1)),
            "self-consistency": dict(assoc_count=20, word_len=2, labels=(0, 1)),
        },
        "desk": {
            "straightening": dict(exh_size=2, exh_labels=(0, 1, 2), rand_size=3, rand_labels=(0, 1), rand_count=200),
            "D-consistency": dict(max_psi=3, max_k=3, labels=(0, 1), deg_size=3),
            "p-properties": dict(lead_size=4, lead_labels=(0, 1), prod_size=2, prod_labels=(0, 1), mult_l=4, mult_labels=(0, 1, 2)),
            "commutation": dict(size=2, labels=(0, 1), max_r=2, presets=("sl2", "sl3")),
            "D-identities": dict(size=2, labels=(0, 1)),
            "integrality": dict(qinuz_size=3, bbd_size=2, labels=(0, 1), ad_r=4, prod_len=3, prod_r=3, bracket_r=3, bracket_chi=2, sl3_size=2, presets=("sl2", "sl3")),
            "A2": dict(max_r=3, labels=(0, 1)),
            "divided-powers": dict(max_total=8, labels=(0, 1)),
            "self-consistency": dict(assoc_count=500, word_len=4, labels=(0, 1)),
        },
        "deep": {
            "straightening": dict(exh_size=3, exh_labels=(0, 1, 2), rand_size=4, rand_labels=(0, 1), rand_count=500),
            "D-consistency": dict(max_psi=4, max_k=4, labels=(0, 1), deg_size=4),
            "p-properties": dict(lead_size=5, lead_labels=(0, 1), prod_size=3, prod_labels=(0, 1), mult_l=5, mult_labels=(0, 1, 2)),
            "commutation": dict(size=3, labels=(0, 1), max_r=3, presets=("sl2", "sl3")),
            "D-identities": dict(size=3, labels=(0, 1)),
            "integrality": dict(qinuz_size=4, bbd_size=3, labels=(0, 1), ad_r=6, prod_len=3, prod_r=4, bracket_r=4, bracket_chi=3, sl3_size=3, presets=("sl2", "sl3")),
            "A2": dict(max_r=4, labels=(0, 1)),
            "divided-powers": dict(max_total=10, labels=(0, 1)),
            "self-consistency": dict(assoc_count=1000, word_len=4, labels=(0, 1)),
        },
    }


PROFILES = _default_profiles()


# ---------------------------------------------------------------------------
# shared helpers


def _pool(exps):
    return tuple(ALabel([e]) for e in exps)


def _multisets_of_size(pool, size):
    for combo in itertools.combinations_with_replacement(pool, size):
        yield Multiset((k, 1) for k in combo)


def _multisets_up_to(pool, max_size):
    out = []
    for s in range(max_size + 1):
        out.extend(_multisets_of_size(pool, s))
    return out


def _degree_below(elem, bound):
    deg = elem.degree()
    return deg is None or deg < bound


def _failure(args, lhs, rhs):
    diff = lhs - rhs
    if diff.is_zero():
        return None
    return CheckFailure(args=str(args), lhs=lhs.render(), rhs=rhs.render(), diff=diff.render())


def _property_failure(args, elem, expectation, finding):
    return CheckFailure(args=str(args), lhs=elem.render(), rhs=expectation, diff=finding)


def _unit(pool):
    return ALabel.unit(pool[0].nvars)


# ---------------------------------------------------------------------------
# straightening of x+(phi) x-(chi)


def _instances_straightening(spec):
    p = spec.params
    pool = _pool(p["exh_labels"])
    for phi in _multisets_up_to(pool, p["exh_size"]):
        for chi in _multisets_up_to(pool, p["exh_size"]):
            yield ("exh", phi, chi)
    rng = random.Random(spec.seed)
    rpool = _pool(p["rand_labels"])
    shapes = list(_multisets_of_size(rpool, p["rand_size"]))
    for _ in range(p["rand_count"]):
        yield ("rand", rng.choice(shapes), rng.choice(shapes))


@lru_cache(maxsize=None)
def _straightening_sides(phi, chi):
    lhs = root_monomial(1, 0, phi) * root_monomial(-1, 0, chi)
    rhs = Element.zero(make_preset("sl2"))
    for psi1 in sub_multisets(chi):
        for psi2 in sub_multisets(chi - psi1):
            sign = (-1) ** (psi1.size + psi2.size)
            rest_chi = chi - psi1 - psi2
            for phi1 in sub_multisets(phi):
                left = root_block(-1, phi1, psi1, rest_chi)
                if left.is_zero():
                    continue
                for phi2 in sub_multisets(phi - phi1):
                    right = dressed_block(phi2, psi2, phi - phi1 - phi2)
                    if right.is_zero():
                        continue
                    rhs = rhs + sign * (left * right)
    return lhs, rhs


def _eval_straightening(spec, args):
    _, phi, chi = args
    lhs, rhs = _straightening_sides(phi, chi)
    return _failure(("phi=%s chi=%s" % (phi, chi)), lhs, rhs)


# ---------------------------------------------------------------------------
# closed partition formula, homogeneity, dressed-block degree bound


def _instances_D_consistency(spec):
    p = spec.params
    pool = _pool(p["labels"])
    shapes = _multisets_up_to(pool, p["max_psi"])
    for sign in (1, -1):
        for psi in shapes:
            for k in range(1, p["max_k"] + 1):
                for b in pool:
                    for c in pool:
                        yield ("expanded", sign, psi, b, k, c)
    deg_shapes = _multisets_up_to(pool, p["deg_size"])
    for sign in (1, -1):
        for psi1 in deg_shapes:
            for psi2 in deg_shapes:
                for psi3 in deg_shapes:
                    yield ("homogeneous", sign, psi1, psi2, psi3)
    for psi1 in deg_shapes:
        for psi2 in deg_shapes:
            for psi3 in deg_shapes:
                yield ("dressed-degree", psi1, psi2, psi3)


def _eval_D_consistency(spec, args):
    kind = args[0]
    if kind == "expanded":
        _, sign, psi, b, k, c = args
        lhs = root_block_expanded(sign, psi, b, k, c)
        rhs = root_block(sign, psi, Multiset.single(b, psi.size), Multiset.single(c, k))
        return _failure("sign=%+d psi=%s b=%s k=%d c=%s" % (sign, psi, b, k, c), lhs, rhs)
    if kind == "homogeneous":
        _, sign, psi1, psi2, psi3 = args
        elem = root_block(sign, psi1, psi2, psi3)
        bad = [m for m in elem.terms if sum(e for _, e in m) != psi3.size]
        if bad:
            return _property_failure(
                "sign=%+d psi1=%s psi2=%s psi3=%s" % (sign, psi1, psi2, psi3),
                elem,
                "every monomial of total degree %d" % psi3.size,
                "monomial of degree %d found" % sum(e for _, e in bad[0]),
            )
        return None
    _, psi1, psi2, psi3 = args
    elem = dressed_block(psi1, psi2, psi3)
    bound = psi3.size + psi1.size
    deg = elem.degree()
    if deg is not None and deg > bound:
        return _property_failure(
            "psi1=%s psi2=%s psi3=%s" % (psi1, psi2, psi3),
            elem,
            "degree <= %d" % bound,
            "degree %d" % deg,
        )
    return None


# ---------------------------------------------------------------------------
# Cartan element properties: leading term, binomial products, multiplicativity


def _instances_p_properties(spec):
    p = spec.params
    for chi in _multisets_up_to(_pool(p["lead_labels"]), p["lead_size"]):
        yield ("leading", chi)
    prod_shapes = _multisets_up_to(_pool(p["prod_labels"]), p["prod_size"])
    for chi in prod_shapes:
        for chi2 in prod_shapes:
            yield ("product", chi, chi2)
    mpool = _pool(p["mult_labels"])
    for l in range(p["mult_l"] + 1):
        for a in mpool:
            for b in mpool:
                yield ("multiplicative", l, a, b)


def _leading_term(chi):
    sl2 = make_preset("sl2")
    if not chi:
        return Element.one(sl2)
    mono = tuple((Gen(sl2.cartan_index(0), a), m) for a, m in chi.items())
    coeff = Fraction((-1) ** chi.size)
    for _, m in chi.items():
        coeff /= math.factorial(m)
    return Element.monomial(sl2, mono, coeff)


def _eval_p_properties(spec, args):
    kind = args[0]
    if kind == "leading":
        chi = args[1]
        elem = cartan_single(chi)
        rest = elem - _leading_term(chi)
        if not _degree_below(rest, chi.size) and chi.size > 0:
            return _property_failure(
                "chi=%s" % chi, elem, "leading term of degree %d, rest lower" % chi.size,
                "rest has degree %s" % rest.degree(),
            )
        if not chi and not (elem - _leading_term(chi)).is_zero():
            return _property_failure("chi={}", elem, "1", "mismatch")
        return None
    if kind == "product":
        _, chi, chi2 = args
        both = chi + chi2
        factor = 1
        for a in both.support():
            factor *= binom_int(both.count(a), chi.count(a))
        elem = cartan_single(chi) * cartan_single(chi2) - factor * cartan_single(both)
        result = reduce_to_basis(elem)
        pure_cartan = all(
            all(not ms for ms in idx.minus) and all(not ms for ms in idx.plus)
            for idx, _ in result.terms
        )
        if not (result.integral and pure_cartan and result.residual.is_zero()):
            return _property_failure(
                "chi=%s chi'=%s" % (chi, chi2),
                elem,
                "integral reduction over the Cartan block",
                "integral=%s pure_cartan=%s" % (result.integral, pure_cartan),
            )
        return None
    _, l, a, b = args
    lhs = cartan_pair(Multiset.single(a, l), Multiset.single(b, l))
    rhs = cartan_single(Multiset.single(a * b, l))
    return _failure("l=%d a=%s b=%s" % (l, a, b), lhs, rhs)


# ---------------------------------------------------------------------------
# commutation of root vectors past Cartan elements


def _root_cartan_pairs(preset):
    for alpha in range(preset.m):
        for i in range(preset.rank):
            if preset.pairing(alpha, i) != 0:
                yield alpha, i


def _instances_commutation(spec):
    p = spec.params
    pool = _pool(p["labels"])
    shapes = _multisets_up_to(pool, p["size"])
    for preset_name in p["presets"]:
        preset = make_preset(preset_name)
        for alpha, i in _root_cartan_pairs(preset):
            for b in pool:
                for phi in shapes:
                    for chi in shapes:
                        yield ("xq-i", preset_name, alpha, i, b, phi, chi)
                        yield ("xq-ii", preset_name, alpha, i, b, phi, chi)
                for chi in shapes:
                    for r in range(p["max_r"] + 1):
                        yield ("xrq-i", preset_name, alpha, i, b, chi, r)
                        yield ("xrq-ii", preset_name, alpha, i, b, chi, r)
    for b in pool:
        for phi in shapes:
            for chi in shapes:
                yield ("qpx", b, phi, chi)


def _xq_sides(preset, alpha, i, b, phi, chi, side):
    pair = cartan_pair_at_root(preset.simple_root_index(i), phi, chi, preset)
    weight_base = preset.pairing(alpha, i)
    xgen = Element.generator(preset, preset.root_index(1 if side == "i" else -1, alpha), b)
    lhs = xgen * pair if side == "i" else pair * xgen
    rhs = Element.zero(preset)
    for psi1 in sub_multisets(phi):
        for psi2 in sub_multisets(chi):
            if psi1.size != psi2.size:
                continue
            coeff = (
                binom_int(weight_base + psi1.size - 1, psi1.size)
                * multinomial(psi1)
                * multinomial(psi2)
            )
            lab = b
            for k, m in psi1.items():
                lab = lab * k**m
            for k, m in psi2.items():
                lab = lab * k**m
            rest = cartan_pair_at_root(
                preset.simple_root_index(i), phi - psi1, chi - psi2, preset
            )
            gen = Element.generator(
                preset, preset.root_index(1 if side == "i" else -1, alpha), lab
            )
            rhs = rhs + coeff * (rest * gen if side == "i" else gen * rest)
    return lhs, rhs


def _xrq_sides(preset, alpha, i, b, chi, r, side):
    sri = preset.simple_root_index(i)
    weight_base = preset.pairing(alpha, i)
    sign = 1 if side == "i" else -1
    dp = divided_power(preset, Gen(preset.root_index(sign, alpha), b), r)
    single = cartan_at_root(sri, chi, preset)
    lhs = dp * single if side == "i" else single * dp
    rhs = Element.zero(preset)
    for psi in subpartitions(chi, r):
        rest = cartan_at_root(sri, chi - psi.weighted_total(), preset)
        prod = Element.one(preset)
        for part, cnt in psi.items():
            scalar = Fraction(
                binom_int(weight_base + part.size - 1, part.size) * multinomial(part)
            )
            lab = b
            for k, m in part.items():
                lab = lab * k**m
            prod = prod * (
                scalar**cnt
                * divided_power(preset, Gen(preset.root_index(sign, alpha), lab), cnt)
            )
        rhs = rhs + (rest * prod if side == "i" else prod * rest)
    return lhs, rhs


def _qpx_sides(b, phi, chi, literal=False):
    """Cartan pair moved past a raising generator.

    The three-term identity's last sum binds one pair of size-2
    sub-multisets but its summand names a second pair; the corrected
    reading identifies the two.  ``literal=True`` keeps them independent
    (a double sum), which demonstrably fails once the bound pair ranges
    over more than one value.
    """
    sl2 = make_preset("sl2")
    pair = cartan_pair(phi, chi)
    xb = Element.generator(sl2, sl2.pos_index(0), b)
    lhs = pair * xb
    rhs = xb * pair
    for c in phi.support():
        for d in chi.support():
            rhs = rhs - 2 * (
                Element.generator(sl2, sl2.pos_index(0), b * c * d)
                * cartan_pair(phi - Multiset.single(c), chi - Multiset.single(d))
            )
    f1s = list(sub_multisets(phi, 2))
    f2s = list(sub_multisets(chi, 2))
    for f1 in f1s:
        for f2 in f2s:
            inner = [(f1, f2)] if not literal else [(a, b2) for a in f1s for b2 in f2s]
            for ps1, ps2 in inner:
                lab = b
                for k, m in ps1.items():
                    lab = lab * k**m
                for k, m in ps2.items():
                    lab = lab * k**m
                rhs = rhs + (
                    multinomial(f1)
                    * multinomial(f2)
                    * (
                        Element.generator(sl2, sl2.pos_index(0), lab)
                        * cartan_pair(phi - ps1, chi - ps2)
                    )
                )
    return lhs, rhs


def _eval_commutation(spec, args):
    kind = args[0]
    if kind in ("xq-i", "xq-ii"):
        _, preset_name, alpha, i, b, phi, chi = args
        preset = make_preset(preset_name)
        lhs, rhs = _xq_sides(preset, alpha, i, b, phi, chi, "i" if kind == "xq-i" else "ii")
        return _failure(
            "%s %s alpha=%d i=%d b=%s phi=%s chi=%s" % (kind, preset_name, alpha, i, b, phi, chi),
            lhs,
            rhs,
        )
    if kind in ("xrq-i", "xrq-ii"):
        _, preset_name, alpha, i, b, chi, r = args
        preset = make_preset(preset_name)
        lhs, rhs = _xrq_sides(preset, alpha, i, b, chi, r, "i" if kind == "xrq-i" else "ii")
        return _failure(
            "%s %s alpha=%d i=%d b=%s chi=%s r=%d" % (kind, preset_name, alpha, i, b, chi, r),
            lhs,
            rhs,
        )
    _, b, phi, chi = args
    lhs, rhs = _qpx_sides(b, phi, chi)
    return _failure("qpx b=%s phi=%s chi=%s" % (b, phi, chi), lhs, rhs)


# ---------------------------------------------------------------------------
# block recursion identities


def _instances_D_identities(spec):
    p = spec.params
    pool = _pool(p["labels"])
    shapes = _multisets_up_to(pool, p["size"])
    for sign in (1, -1):
        for b in pool:
            for psi1 in shapes:
                for psi2 in shapes:
                    if psi1.size != psi2.size:
                        continue
                    for psi3 in shapes:
                        if not psi3:
                            continue
                        yield ("idD-i", sign, b, psi1, psi2, psi3)
                        yield ("idD-ii", sign, b, psi1, psi2, psi3)
    for b in pool:
        for varphi in shapes:
            for chi in shapes:
                yield ("idbbd", b, varphi, chi)
                yield ("eqnq", b, varphi, chi)
    for varphi in shapes:
        for phi in sub_multisets(varphi):
            for chi in shapes:
                yield ("eqnbbd", varphi, phi, chi)


def _idD_sides(sign, b, psi1, psi2, psi3, variant):
    if variant == "i":
        lhs = psi2.count(b) * root_block(sign, psi1, psi2, psi3)
    else:
        lhs = (psi2.size + psi3.size) * root_block(sign, psi1, psi2, psi3)
    sl2 = make_preset("sl2")
    rhs = Element.zero(sl2)
    for phi1 in sub_multisets(psi1):
        for phi2 in sub_multisets(psi2):
            if phi1.size != phi2.size:
                continue
            weight = phi2.count(b) if variant == "i" else phi1.size + 1
            if weight == 0:
                continue
            for c in psi3.support():
                left = root_block(sign, phi1, phi2, Multiset.single(c))
                right = root_block(
                    sign, psi1 - phi1, psi2 - phi2, psi3 - Multiset.single(c)
                )
                if left.is_zero() or right.is_zero():
                    continue
                rhs = rhs + weight * (left * right)
    return lhs, rhs


def _idbbd_sides(b, varphi, chi):
    sl2 = make_preset("sl2")
    xminus = Element.generator(sl2, sl2.neg_index(0), b)
    lhs = Element.zero(sl2)
    for phi in sub_multisets(varphi):
        lhs = lhs + dressed_block(phi, chi, varphi - phi) * xminus
    rhs = Element.zero(sl2)
    grown = chi + Multiset.single(b)
    for phi in sub_multisets(varphi):
        rhs = rhs - (chi.count(b) + 1) * dressed_block(phi, grown, varphi - phi)
    for phi in sub_multisets(varphi):
        for phi1 in sub_multisets(phi):
            for phi2 in sub_multisets(chi):
                if phi1.size != phi2.size:
                    continue
                left = root_block(-1, phi1, phi2, Multiset.single(b))
                if left.is_zero():
                    continue
                rhs = rhs + (phi1.size + 1) * (
                    left * dressed_block(phi - phi1, chi - phi2, varphi - phi)
                )
    return lhs, rhs


def _eqnq_sides(b, varphi, chi):
    sl2 = make_preset("sl2")
    lhs = -(chi.count(b) + 1) * cartan_pair(varphi, chi + Multiset.single(b))
    rhs = Element.zero(sl2)
    for c in varphi.support():
        trimmed = varphi - Multiset.single(c)
        for phi1 in sub_multisets(trimmed):
            for phi2 in sub_multisets(chi):
                if phi1.size != phi2.size:
                    continue
                rest = cartan_pair(trimmed - phi1, chi - phi2)
                if rest.is_zero():
                    continue
                lab = b * c
                for k, m in phi1.items():
                    lab = lab * k**m
                for k, m in phi2.items():
                    lab = lab * k**m
                rhs = rhs + (
                    multinomial(phi1)
                    * multinomial(phi2)
                    * (Element.generator(sl2, sl2.cartan_index(0), lab) * rest)
                )
    return lhs, rhs


def _eqnbbd_sides(varphi, phi, chi):
    sl2 = make_preset("sl2")
    lhs = (varphi.size - phi.size) * dressed_block(phi, chi, varphi - phi)
    rhs = Element.zero(sl2)
    for c in (varphi - phi).support():
        shrunk = varphi - phi - Multiset.single(c)
        rhs = rhs + Element.generator(sl2, sl2.pos_index(0), c) * dressed_block(
            phi, chi, shrunk
        )
        for d in phi.support():
            for d2 in chi.support():
                rhs = rhs - Element.generator(
                    sl2, sl2.pos_index(0), c * d * d2
                ) * dressed_block(
                    phi - Multiset.single(d), chi - Multiset.single(d2), shrunk
                )
    return lhs, rhs


def _eval_D_identities(spec, args):
    kind = args[0]
    if kind in ("idD-i", "idD-ii"):
        _, sign, b, psi1, psi2, psi3 = args
        lhs, rhs = _idD_sides(sign, b, psi1, psi2, psi3, "i" if kind == "idD-i" else "ii")
        return _failure(
            "%s sign=%+d b=%s psi1=%s psi2=%s psi3=%s" % (kind, sign, b, psi1, psi2, psi3),
            lhs,
            rhs,
        )
    if kind == "idbbd":
        _, b, varphi, chi = args
        lhs, rhs = _idbbd_sides(b, varphi, chi)
        return _failure("idbbd b=%s varphi=%s chi=%s" % (b, varphi, chi), lhs, rhs)
    if kind == "eqnq":
        _, b, varphi, chi = args
        lhs, rhs = _eqnq_sides(b, varphi, chi)
        return _failure("eqnq b=%s varphi=%s chi=%s" % (b, varphi, chi), lhs, rhs)
    _, varphi, phi, chi = args
    lhs, rhs = _eqnbbd_sides(varphi, phi, chi)
    return _failure("eqnbbd varphi=%s phi=%s chi=%s" % (varphi, phi, chi), lhs, rhs)


# ---------------------------------------------------------------------------
# integrality and degree bounds


def _instances_integrality(spec):
    p = spec.params
    pool = _pool(p["labels"])
    shapes = _multisets_up_to(pool, p["qinuz_size"])
    for sign in (1, -1):
        for phi in shapes:
            for chi in shapes:
                for psi in shapes:
                    yield ("reduce-D", sign, phi, chi, psi)
    for phi in shapes:
        for chi in shapes:
            yield ("reduce-p", phi, chi)
    bshapes = _multisets_up_to(pool, p["bbd_size"])
    for phi in bshapes:
        for chi in bshapes:
            for psi in bshapes:
                yield ("reduce-bbD", phi, chi, psi)
    if "sl3" in p["presets"]:
        s3shapes = _multisets_up_to(pool, p["sl3_size"])
        sl3 = make_preset("sl3")
        for alpha in range(sl3.m):
            for sign in (1, -1):
                for phi in s3shapes:
                    for chi in s3shapes:
                        if phi.size != chi.size:
                            continue
                        for psi in s3shapes:
                            yield ("reduce-omega", alpha, sign, phi, chi, psi)
    for preset_name in p["presets"]:
        preset = make_preset(preset_name)
        for alpha in range(preset.m):
            for sign in (1, -1):
                for b in pool:
                    for r in range(p["ad_r"] + 1):
                        for z in range(preset.dim):
                            for c in pool:
                                yield ("ad", preset_name, sign, alpha, b, r, z, c)
    gens = [
        (sign, b, r)
        for sign in (1, -1)
        for b in pool
        for r in range(1, p["prod_r"] + 1)
    ]
    for length in range(1, p["prod_len"] + 1):
        for combo in itertools.product(gens, repeat=length):
            yield ("product", combo)
    for a in pool:
        for b in pool:
            for r in range(1, p["bracket_r"] + 1):
                for s in range(1, p["bracket_r"] + 1):
                    yield ("bracket-xx", a, b, r, s)
    chis = _multisets_up_to(pool, p["bracket_chi"])
    for a in pool:
        for chi in chis:
            for r in range(1, p["bracket_r"] + 1):
                yield ("bracket-xp", a, chi, r)
                yield ("bracket-px", a, chi, r)


def _eval_integrality(spec, args):
    kind = args[0]
    sl2 = make_preset("sl2")
    if kind == "reduce-D":
        _, sign, phi, chi, psi = args
        elem = root_block(sign, phi, chi, psi)
        result = reduce_to_basis(elem)
        if not (result.integral and result.residual.is_zero()):
            return _property_failure(
                "D sign=%+d %s %s %s" % (sign, phi, chi, psi),
                elem,
                "integral reduction with zero residual",
                "integral=%s residual=%s" % (result.integral, result.residual.render()),
            )
        return None
    if kind == "reduce-p":
        _, phi, chi = args
        elem = cartan_pair(phi, chi)
        result = reduce_to_basis(elem)
        if not (result.integral and result.residual.is_zero()):
            return _property_failure(
                "p %s %s" % (phi, chi), elem, "integral reduction", "integral=%s" % result.integral
            )
        return None
    if kind == "reduce-bbD":
        _, phi, chi, psi = args
        elem = dressed_block(phi, chi, psi)
        result = reduce_to_basis(elem)
        if not (result.integral and result.residual.is_zero()):
            return _property_failure(
                "bbD %s %s %s" % (phi, chi, psi), elem, "integral reduction", "integral=%s" % result.integral
            )
        return None
    if kind == "reduce-omega":
        _, alpha, sign, phi, chi, psi = args
        elem = omega(alpha, root_block(sign, phi, chi, psi), make_preset("sl3"))
        result = reduce_to_basis(elem)
        if not (result.integral and result.residual.is_zero()):
            return _property_failure(
                "omega-D alpha=%d sign=%+d %s %s %s" % (alpha, sign, phi, chi, psi),
                elem,
                "integral reduction",
                "integral=%s" % result.integral,
            )
        return None
    if kind == "ad":
        _, preset_name, sign, alpha, b, r, z, c = args
        preset = make_preset(preset_name)
        x = Gen(preset.root_index(sign, alpha), b)
        v = Element.generator(preset, z, c)
        w = ad_divided(preset, x, r, v)
        if not w.is_integral():
            return _property_failure(
                "ad %s sign=%+d alpha=%d b=%s r=%d z=%d c=%s" % (preset_name, sign, alpha, b, r, z, c),
                w,
                "integer coordinates",
                "fractional coefficient",
            )
        return None
    if kind == "product":
        combo = args[1]
        elem = Element.one(sl2)
        for sign, b, r in combo:
            elem = elem * divided_power(sl2, Gen(sl2.root_index(sign, 0), b), r)
        result = reduce_to_basis(elem)
        if not (result.integral and result.residual.is_zero()):
            return _property_failure(
                "product %s" % (combo,), elem, "integral reduction", "integral=%s" % result.integral
            )
        return None
    if kind == "bracket-xx":
        _, a, b, r, s = args
        plus = divided_power(sl2, Gen(sl2.pos_index(0), a), r)
        minus = divided_power(sl2, Gen(sl2.neg_index(0), b), s)
        comm = plus * minus - minus * plus
        result = reduce_to_basis(comm)
        ok = result.integral and result.residual.is_zero() and _degree_below(comm, r + s)
        if not ok:
            return _property_failure(
                "bracket-xx a=%s b=%s r=%d s=%d" % (a, b, r, s),
                comm,
                "integral, degree < %d" % (r + s),
                "integral=%s degree=%s" % (result.integral, comm.degree()),
            )
        return None
    _, a, chi, r = args
    single = cartan_single(chi)
    if kind == "bracket-xp":
        dp = divided_power(sl2, Gen(sl2.pos_index(0), a), r)
        comm = dp * single - single * dp
    else:
        dp = divided_power(sl2, Gen(sl2.neg_index(0), a), r)
        comm = single * dp - dp * single
    result = reduce_to_basis(comm)
    bound = r + chi.size
    ok = result.integral and result.residual.is_zero() and _degree_below(comm, bound)
    if not ok:
        return _property_failure(
            "%s a=%s chi=%s r=%d" % (kind, a, chi, r),
            comm,
            "integral, degree < %d" % bound,
            "integral=%s degree=%s" % (result.integral, comm.degree()),
        )
    return None


# ---------------------------------------------------------------------------
# rank-two straightening with sign extraction


def _instances_A2(spec):
    p = spec.params
    pool = _pool(p["labels"])
    for sign in (1, -1):
        for aidx, bidx in ((0, 1), (1, 0)):
            for r in range(p["max_r"] + 1):
                for s in range(p["max_r"] + 1):
                    for a in pool:
                        for b in pool:
                            yield ("a2", sign, aidx, bidx, r, s, a, b)


def _eval_A2(spec, args):
    _, sign, aidx, bidx, r, s, a, b = args
    sl3 = make_preset("sl3")
    theta = sl3.root_sum_index(aidx, bidx)
    ga = Gen(sl3.root_index(sign, aidx), a)
    gb = Gen(sl3.root_index(sign, bidx), b)
    gth = Gen(sl3.root_index(sign, theta), a * b)
    lhs = divided_power(sl3, ga, r) * divided_power(sl3, gb, s)
    cands = [
        divided_power(sl3, gb, s - k)
        * divided_power(sl3, gth, k)
        * divided_power(sl3, ga, r - k)
        for k in range(min(r, s) + 1)
    ]
    monos = sorted({m for e in cands for m in e.terms} | set(lhs.terms))
    columns = [tuple(e.terms.get(m, 0) for m in monos) for e in cands]
    target = tuple(lhs.terms.get(m, 0) for m in monos)
    args_str = "sign=%+d roots=(%d,%d) r=%d s=%d a=%s b=%s" % (sign, aidx, bidx, r, s, a, b)
    try:
        eps = exact_solve(columns, target)
    except ValueError:
        eps = None
    if eps is None:
        return _property_failure(
            args_str, lhs, "combination of divided-power products", "no exact solution"
        )
    if any(e not in (1, -1) for e in eps):
        return _property_failure(
            args_str, lhs, "signs in {+1, -1}", "coefficients %s" % (eps,)
        )
    rebuilt = Element.zero(sl3)
    for e, cand in zip(eps, cands):
        rebuilt = rebuilt + int(e) * cand
    fail = _failure(args_str, lhs, rebuilt)
    if fail is not None:
        return fail
    if min(r, s) >= 1:
        return "signs %s: eps=%s" % (
            "sign=%+d roots=(%d,%d) r=%d s=%d" % (sign, aidx, bidx, r, s),
            [int(e) for e in eps],
        )
    return None


# ---------------------------------------------------------------------------
# engine self checks: divided-power law, associativity, fold order


def _instances_divided_powers(spec):
    p = spec.params
    pool = _pool(p["labels"])
    sl2 = make_preset("sl2")
    for index in range(sl2.dim):
        for b in pool:
            for r in range(p["max_total"] + 1):
                for s in range(p["max_total"] + 1 - r):
                    yield ("dp", index, b, r, s)


def _eval_divided_powers(spec, args):
    _, index, b, r, s = args
    sl2 = make_preset("sl2")
    g = Gen(index, b)
    lhs = divided_power(sl2, g, r) * divided_power(sl2, g, s)
    rhs = binom_int(r + s, r) * divided_power(sl2, g, r + s)
    return _failure("gen=%d b=%s r=%d s=%d" % (index, b, r, s), lhs, rhs)


def _word_pool(pool):
    sl2 = make_preset("sl2")
    return [Gen(i, b) for i in range(sl2.dim) for b in pool]


def _instances_self_consistency(spec):
    p = spec.params
    pool = _pool(p["labels"])
    gens = _word_pool(pool)
    rng = random.Random(spec.seed)

    def rand_elem_spec():
        words = []
        for _ in range(rng.randint(1, 2)):
            length = rng.randint(1, 2)
            word = tuple(rng.randrange(len(gens)) for _ in range(length))
            coeff = rng.choice([-3, -2, -1, 1, 2, 3])
            words.append((coeff, word))
        return tuple(words)

    for n in range(p["assoc_count"]):
        yield ("assoc", n, rand_elem_spec(), rand_elem_spec(), rand_elem_spec())
    for length in range(1, p["word_len"] + 1):
        for word in itertools.product(range(len(gens)), repeat=length):
            yield ("word", word)


def _build_from_spec(gens, espec):
    sl2 = make_preset("sl2")
    out = Element.zero(sl2)
    for coeff, word in espec:
        term = Element.one(sl2)
        for gi in word:
            term = term * Element.generator(sl2, gens[gi].index, gens[gi].label)
        out = out + coeff * term
    return out


def _eval_self_consistency(spec, args):
    pool = _pool(spec.params["labels"])
    gens = _word_pool(pool)
    sl2 = make_preset("sl2")
    if args[0] == "assoc":
        _, n, su, sv, sw = args
        u = _build_from_spec(gens, su)
        v = _build_from_spec(gens, sv)
        w = _build_from_spec(gens, sw)
        return _failure("assoc #%d" % n, (u * v) * w, u * (v * w))
    _, word = args
    factors = [Element.generator(sl2, gens[gi].index, gens[gi].label) for gi in word]
    left = Element.one(sl2)
    for f in factors:
        left = left * f
    right = Element.one(sl2)
    for f in reversed(factors):
        right = f * right
    return _failure("word %s" % (word,), left, right)


# ---------------------------------------------------------------------------
# registry and runner


_ALLOWED_PRESETS = {
    "straightening": ("sl2",),
    "D-consistency": ("sl2",),
    "p-properties": ("sl2",),
    "commutation": ("sl2", "sl3"),
    "D-identities": ("sl2",),
    "integrality": ("sl2", "sl3"),
    "A2": ("sl3",),
    "divided-powers": ("sl2",),
    "self-consistency": ("sl2",),
}

CHECKS = {
    "straightening": (_instances_straightening, _eval_straightening),
    "D-consistency": (_instances_D_consistency, _eval_D_consistency),
    "p-properties": (_instances_p_properties, _eval_p_properties),
    "commutation": (_instances_commutation, _eval_commutation),
    "D-identities": (_instances_D_identities, _eval_D_identities),
    "integrality": (_instances_integrality, _eval_integrality),
    "A2": (_instances_A2, _eval_A2),
    "divided-powers": (_instances_divided_powers, _eval_divided_powers),
    "self-consistency": (_instances_self_consistency, _eval_self_consistency),
}


def check_names():
    return list(CHECKS)


def make_spec(name, profile="desk", preset=None, seed=0, overrides=None):
    if name not in CHECKS:
        raise ValueError("unknown check %r (known: %s)" % (name, ", ".join(CHECKS)))
    if profile not in PROFILES:
        raise ValueError("unknown profile %r" % (profile,))
    allowed = _ALLOWED_PRESETS[name]
    if preset is not None and preset not in allowed:
        raise ValueError(
            "check %r needs one of %s, got %r" % (name, "/".join(allowed), preset)
        )
    params = dict(PROFILES[profile][name])
    if preset is not None and "presets" in params:
        params["presets"] = (preset,)
    for key, value in (overrides or {}).items():
        if key in params:
            params[key] = value
    return CheckSpec(name=name, preset=preset, profile=profile, params=params, seed=seed)


def _evaluate_packed(packed):
    name, spec, args = packed
    return CHECKS[name][1](spec, args)


def run_check(spec, jobs=1):
    """Run one check and collect its report.  Instance order is fixed, so
    reports are deterministic for a given spec and seed; with several
    workers only wall time changes."""
    instances_fn, evaluate_fn = CHECKS[spec.name]
    instances = list(instances_fn(spec))
    start = time.perf_counter()
    failures = []
    notes = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(
                _evaluate_packed,
                [(spec.name, spec, args) for args in instances],
                chunksize=max(1, len(instances) // (jobs * 8) or 1),
            )
            results = list(results)
    else:
        results = [evaluate_fn(spec, args) for args in instances]
    for res in results:
        if res is None:
            continue
        if isinstance(res, str):
            if res not in notes:
                notes.append(res)
        else:
            failures.append(res)
    elapsed = (time.perf_counter() - start) * 1000.0
    return CheckReport(
        name=spec.name,
        instances=len(instances),
        failures=failures,
        elapsed_ms=elapsed,
        seed=spec.seed,
        notes=notes,
    )


def run_suite(names, profile="desk", preset=None, seed=0, overrides=None, jobs=1):
    """Run several checks and return their reports in order."""
    if names == ["all"] or names == ("all",):
        names = check_names()
    reports = []
    for name in names:
        spec = make_spec(name, profile=profile, preset=preset, seed=seed, overrides=overrides)
        reports.append(run_check(spec, jobs=jobs))
    return reports
