"""Prime spectra of Bezout domains read off their groups of divisibility.

A nonzero prime of the domain corresponds to a prime filter of the positive
cone: ``x`` lies in the prime iff its value lies in the filter.  For
``Lex(k)`` the filters form the chain ``F_1 < ... < F_k`` where ``F_j`` holds
the elements whose first ``j`` coordinates are lex-positive; a product glues
the component chains at the zero ideal.

Point names follow the construction: ``P1..Pk`` for a lex chain, prefixed by
``C<i>.`` for the ``i``-th factor of a product, plus ``root`` for ``(0)``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Mapping, Union

from cictools.errors import InputError
from cictools.lgroup import (
    GroupElement,
    LGroupDescriptor,
    Lex,
    Product,
    bounded_multiples,
    decompose,
)
from cictools.poset import SpectralPoset

ROOT = "root"


@dataclass(frozen=True)
class LexFilter:
    desc: Lex
    level: int

    def __str__(self) -> str:
        return f"L{self.level}"


@dataclass(frozen=True)
class ProductFilter:
    desc: Product
    index: int
    inner: "PrimeFilter"

    def __str__(self) -> str:
        return f"{self.index + 1}.{self.inner}"


PrimeFilter = Union[LexFilter, ProductFilter]


@dataclass(frozen=True, eq=False)
class BezoutSpectrum:
    desc: LGroupDescriptor
    poset: SpectralPoset
    root: str
    filters: Mapping[str, PrimeFilter]

    @property
    def points(self) -> tuple:
        return self.poset.points

    def nonroot(self) -> list[str]:
        return [p for p in self.poset.points if p != self.root]

    def filter(self, p: str) -> PrimeFilter:
        if p == self.root:
            raise InputError("the zero ideal has no prime filter")
        try:
            return self.filters[p]
        except KeyError:
            raise InputError(f"unknown point {p!r}") from None


@dataclass(frozen=True)
class VSetPattern:
    """A realizable closed set ``V(g)`` with the element that realizes it.

    ``witness`` is None only for the whole space, which is ``V`` of the zero
    ideal and has no group element.
    """

    members: frozenset
    witness: GroupElement | None
    zero_ideal: bool = False

    def describe(self, poset: SpectralPoset | None = None) -> dict:
        members = poset.sort(self.members) if poset else sorted(self.members)
        return {
            "members": members,
            "witness": None if self.witness is None else list(self.witness.coords),
        }


def _lex_names(rank: int) -> list[str]:
    return [f"P{j}" for j in range(1, rank + 1)]


@functools.lru_cache(maxsize=None)
def _layout(desc: LGroupDescriptor) -> tuple:
    """``(name, filter, parent)`` triples; parent None means attached to the root."""
    if isinstance(desc, Lex):
        names = _lex_names(desc.rank)
        return tuple(
            (name, LexFilter(desc, j + 1), names[j - 1] if j else None)
            for j, name in enumerate(names)
        )
    out = []
    for i, comp in enumerate(desc.components):
        prefix = f"C{i + 1}."
        for name, f, parent in _layout(comp):
            out.append((prefix + name, ProductFilter(desc, i, f), None if parent is None else prefix + parent))
    return tuple(out)


@functools.lru_cache(maxsize=256)
def build_spectrum(desc: LGroupDescriptor) -> BezoutSpectrum:
    layout = _layout(desc)
    points = [ROOT] + [name for name, _, _ in layout]
    covers = [(ROOT if parent is None else parent, name) for name, _, parent in layout]
    poset = SpectralPoset(points, covers)
    return BezoutSpectrum(desc, poset, ROOT, {name: f for name, f, _ in layout})


def _contains(f: PrimeFilter, coords: tuple) -> bool:
    if isinstance(f, LexFilter):
        return coords[:f.level] > (0,) * f.level
    return _contains(f.inner, f.desc.split(coords)[f.index])


def filter_contains(f: PrimeFilter, g: GroupElement) -> bool:
    """Whether ``g`` lies in the filter, i.e. an element of value ``g`` lies in the prime."""
    if f.desc != g.desc:
        raise InputError(f"filter over {f.desc} cannot test an element of {g.desc}")
    return g.is_nonnegative() and _contains(f, g.coords)


def filter_leq(f: PrimeFilter, h: PrimeFilter) -> bool:
    """Inclusion of prime filters, decided structurally."""
    if isinstance(f, LexFilter) and isinstance(h, LexFilter):
        return f.desc == h.desc and f.level <= h.level
    if isinstance(f, ProductFilter) and isinstance(h, ProductFilter):
        return f.desc == h.desc and f.index == h.index and filter_leq(f.inner, h.inner)
    return False


def _check_element(spec: BezoutSpectrum, g: GroupElement) -> None:
    if g.desc != spec.desc:
        raise InputError(f"element of {g.desc} used with a spectrum of {spec.desc}")
    if not g.is_nonnegative():
        raise InputError(f"{g} is not in the positive cone")


def v_set(spec: BezoutSpectrum, g: GroupElement) -> VSetPattern:
    _check_element(spec, g)
    members = frozenset(p for p in spec.nonroot() if _contains(spec.filters[p], g.coords))
    return VSetPattern(members, g)


def min_primes(spec: BezoutSpectrum, g: GroupElement) -> frozenset:
    _check_element(spec, g)
    if g.is_zero():
        raise InputError("minimal primes are defined for proper ideals; got a unit")
    return spec.poset.minimal_elements(v_set(spec, g).members)


# Closed-form pattern families.  Members are bitmasks over the nonroot points
# in _layout order; witnesses are raw coordinate tuples.  Objects are built
# only at the public surface, since products multiply the family sizes.

@functools.lru_cache(maxsize=None)
def _v_shapes(desc: LGroupDescriptor) -> tuple:
    """``(mask, witness)`` for every realizable ``V(g)``, ``g >= 0``; the first is ``V(0)``."""
    if isinstance(desc, Lex):
        k = desc.rank
        shapes = [(0, (0,) * k)]
        for i in range(k):
            tail = ((1 << k) - 1) & ~((1 << i) - 1)
            shapes.append((tail, tuple(1 if t == i else 0 for t in range(k))))
        return tuple(shapes)
    acc = [(0, ())]
    shift = 0
    for c in desc.components:
        comp = [(m << shift, w) for m, w in _v_shapes(c)]
        acc = [(m | cm, w + cw) for m, w in acc for cm, cw in comp]
        shift += len(_layout(c))
    return tuple(acc)


@functools.lru_cache(maxsize=64)
def _pair_shapes(desc: LGroupDescriptor) -> tuple:
    """``(mask_a, mask_b, a, b)`` for every realizable ``(V(a), V(b))`` with ``0 <= b <= a``."""
    if isinstance(desc, Lex):
        shapes = _v_shapes(desc)
        (m0, w0), tails = shapes[0], shapes[1:]
        pairs = [(m0, m0, w0, w0)]
        pairs.extend((m, m0, w, w0) for m, w in tails)
        # tails[i] is realized by e_{i+1}; e_j <= e_i exactly when i <= j.
        pairs.extend(
            (tails[i][0], tails[j][0], tails[i][1], tails[j][1])
            for i in range(len(tails))
            for j in range(i, len(tails))
        )
        return tuple(pairs)
    acc = [(0, 0, (), ())]
    shift = 0
    for c in desc.components:
        comp = [(ma << shift, mb << shift, a, b) for ma, mb, a, b in _pair_shapes(c)]
        acc = [
            (ma | ca, mb | cb, a + pa, b + pb)
            for ma, mb, a, b in acc
            for ca, cb, pa, pb in comp
        ]
        shift += len(_layout(c))
    return tuple(acc)


@functools.lru_cache(maxsize=256)
def _names(desc: LGroupDescriptor) -> tuple:
    return tuple(name for name, _, _ in _layout(desc))


def mask_members(desc: LGroupDescriptor, mask: int) -> frozenset:
    names = _names(desc)
    return frozenset(names[i] for i in range(len(names)) if mask >> i & 1)


def members_mask(desc: LGroupDescriptor, members) -> int:
    index = {n: i for i, n in enumerate(_names(desc))}
    return sum(1 << index[p] for p in members)


def v_set_shapes(desc: LGroupDescriptor) -> tuple:
    """Raw form of the realizable ``V(g)`` family: ``(mask, witness coords)``."""
    return _v_shapes(desc)


def nested_pair_shapes(desc: LGroupDescriptor) -> tuple:
    """Raw form of every realizable pair: ``(mask V(a), mask V(b), a, b)`` with ``0 <= b <= a``."""
    return _pair_shapes(desc)


def enumerate_v_sets(spec: BezoutSpectrum) -> list[VSetPattern]:
    """The image of ``g -> V(g)`` over ``g >= 0``, then the whole space."""
    desc = spec.desc
    pats = [VSetPattern(mask_members(desc, m), GroupElement(desc, w)) for m, w in _v_shapes(desc)]
    if len({p.members for p in pats}) != len(pats):
        raise AssertionError(f"duplicate V-set patterns for {desc}")
    pats.append(VSetPattern(frozenset(spec.points), None, zero_ideal=True))
    return pats


def pair_pattern(desc: LGroupDescriptor, shape: tuple) -> tuple[VSetPattern, VSetPattern]:
    ma, mb, a, b = shape
    return (
        VSetPattern(mask_members(desc, ma), GroupElement(desc, a)),
        VSetPattern(mask_members(desc, mb), GroupElement(desc, b)),
    )


def enumerate_nested_pairs(spec: BezoutSpectrum, p: str) -> list[tuple[VSetPattern, VSetPattern]]:
    """Pattern pairs ``(V(I), V(J))`` for principal ``(0) != I <= J <= p``."""
    if p == spec.root:
        raise InputError("nested pairs are taken below a nonzero prime")
    spec.filter(p)
    bit = members_mask(spec.desc, [p])
    return [pair_pattern(spec.desc, shape) for shape in _pair_shapes(spec.desc) if shape[1] & bit]


def is_almost_integral(g: GroupElement) -> bool:
    """Whether an element of value ``g`` is almost integral.

    Write the element as ``x/y`` with coprime integral ``x, y``; only the
    denominator matters, so the test reduces to bounded multiples of the
    negative part.
    """
    _, neg = decompose(g)
    return bounded_multiples(neg)


def bounded_filter_element(f: PrimeFilter) -> GroupElement | None:
    """An element of ``f`` with bounded multiples, or None when ``f`` has none.

    A lex level ``j >= 2`` holds ``e_j``, whose leading coordinate is 0; level
    1 forces a positive leading coordinate.  Products read one component.
    """
    coords = _bounded_in_filter(f)
    return None if coords is None else GroupElement(f.desc, coords)


def _bounded_in_filter(f: PrimeFilter) -> tuple | None:
    if isinstance(f, LexFilter):
        if f.level < 2:
            return None
        return tuple(1 if t == f.level - 1 else 0 for t in range(f.desc.rank))
    inner = _bounded_in_filter(f.inner)
    if inner is None:
        return None
    parts = [c.zero() for c in f.desc.components]
    parts[f.index] = inner
    return tuple(itertools.chain.from_iterable(parts))


def spec_ast_oracle(spec: BezoutSpectrum) -> frozenset:
    """Primes that stay proper in the complete integral closure.

    A nonzero prime expands to the unit ideal iff it contains an element
    whose inverse is almost integral, i.e. a filter element with bounded
    multiples.
    """
    keep = {spec.root}
    for p in spec.nonroot():
        g = bounded_filter_element(spec.filters[p])
        if g is None or not bounded_multiples(g):
            keep.add(p)
    return frozenset(keep)
