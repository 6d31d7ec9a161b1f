"""Lattice-ordered abelian groups built from lexicographic integer powers.

Two shapes compose: ``Lex(k)`` is ``Z^k`` under the lexicographic (total)
order, and ``Product(...)`` is a finite pointwise product of shapes.  Elements
are flat integer tuples; a product splits its tuple by component size.

Read as a group of divisibility, ``a <= b`` says that ``bD`` is contained in
``aD``, the positive cone is the set of nonzero elements of ``D`` up to units,
and ``0`` is a unit.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Union

from cictools.errors import InputError

Coords = tuple


@dataclass(frozen=True)
class Lex:
    rank: int

    def __post_init__(self):
        if isinstance(self.rank, bool) or not isinstance(self.rank, int) or self.rank < 1:
            raise InputError(f"Lex rank must be a positive integer, got {self.rank!r}")

    def __str__(self) -> str:
        return f"Lex({self.rank})"

    @property
    def size(self) -> int:
        return self.rank

    def zero(self) -> Coords:
        return (0,) * self.rank

    def leq(self, x: Coords, y: Coords) -> bool:
        return x <= y

    def meet(self, x: Coords, y: Coords) -> Coords:
        return min(x, y)

    def join(self, x: Coords, y: Coords) -> Coords:
        return max(x, y)

    def bounded_witness(self, x: Coords) -> Coords | None:
        # Multiples n*x stay below some fixed c >= 0 iff the leading
        # coordinate never grows.
        if x[0] > 0:
            return None
        if x <= self.zero():
            return self.zero()
        return (1,) + (0,) * (self.rank - 1)


@dataclass(frozen=True)
class Product:
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise InputError("Product needs at least one component")
        for c in comps:
            if not isinstance(c, (Lex, Product)):
                raise InputError(f"Product component must be Lex or Product, got {c!r}")
        object.__setattr__(self, "components", comps)

    def __str__(self) -> str:
        return "Product(" + ",".join(str(c) for c in self.components) + ")"

    @functools.cached_property
    def size(self) -> int:
        return sum(c.size for c in self.components)

    def zero(self) -> Coords:
        return (0,) * self.size

    def split(self, x: Coords) -> list[Coords]:
        parts = []
        start = 0
        for c in self.components:
            parts.append(tuple(x[start:start + c.size]))
            start += c.size
        return parts

    def leq(self, x: Coords, y: Coords) -> bool:
        return all(c.leq(a, b) for c, a, b in zip(self.components, self.split(x), self.split(y)))

    def meet(self, x: Coords, y: Coords) -> Coords:
        return _concat(c.meet(a, b) for c, a, b in zip(self.components, self.split(x), self.split(y)))

    def join(self, x: Coords, y: Coords) -> Coords:
        return _concat(c.join(a, b) for c, a, b in zip(self.components, self.split(x), self.split(y)))

    def bounded_witness(self, x: Coords) -> Coords | None:
        parts = []
        for c, a in zip(self.components, self.split(x)):
            w = c.bounded_witness(a)
            if w is None:
                return None
            parts.append(w)
        return _concat(parts)


LGroupDescriptor = Union[Lex, Product]


def _concat(parts) -> Coords:
    return tuple(itertools.chain.from_iterable(parts))


@dataclass(frozen=True)
class GroupElement:
    desc: LGroupDescriptor
    coords: Coords

    def __post_init__(self):
        coords = tuple(self.coords)
        if len(coords) != self.desc.size:
            raise InputError(f"{self.desc} takes {self.desc.size} coordinates, got {len(coords)}")
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in coords):
            raise InputError(f"coordinates must be integers, got {coords!r}")
        object.__setattr__(self, "coords", coords)

    def __repr__(self) -> str:
        return f"{self.desc}{self.coords}"

    def _same(self, other: GroupElement) -> None:
        if not isinstance(other, GroupElement):
            raise InputError(f"expected a GroupElement, got {other!r}")
        if other.desc != self.desc:
            raise InputError(f"descriptor mismatch: {self.desc} vs {other.desc}")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._same(other)
        return GroupElement(self.desc, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> GroupElement:
        return GroupElement(self.desc, tuple(-a for a in self.coords))

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def __mul__(self, n: int) -> GroupElement:
        return scalar_mul(n, self)

    __rmul__ = __mul__

    def __le__(self, other: GroupElement) -> bool:
        return leq(self, other)

    def __ge__(self, other: GroupElement) -> bool:
        return leq(other, self)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_nonnegative(self) -> bool:
        return self.desc.leq(self.desc.zero(), self.coords)

    def parts(self) -> list[GroupElement]:
        """Component elements of a product; a lex element is its own only part."""
        if isinstance(self.desc, Lex):
            return [self]
        return [GroupElement(c, x) for c, x in zip(self.desc.components, self.desc.split(self.coords))]


def element(desc: LGroupDescriptor, *coords: int) -> GroupElement:
    return GroupElement(desc, coords)


def zero(desc: LGroupDescriptor) -> GroupElement:
    return GroupElement(desc, desc.zero())


def unit_vector(desc: LGroupDescriptor, i: int) -> GroupElement:
    coords = [0] * desc.size
    coords[i] = 1
    return GroupElement(desc, tuple(coords))


def add(*args: GroupElement) -> GroupElement:
    if not args:
        raise InputError("add needs at least one argument")
    total = args[0]
    for g in args[1:]:
        total = total + g
    return total


def negate(g: GroupElement) -> GroupElement:
    return -g


def scalar_mul(n: int, g: GroupElement) -> GroupElement:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"scalar must be a positive integer, got {n!r}")
    return GroupElement(g.desc, tuple(n * a for a in g.coords))


def leq(a: GroupElement, b: GroupElement) -> bool:
    a._same(b)
    return a.desc.leq(a.coords, b.coords)


def meet(a: GroupElement, b: GroupElement) -> GroupElement:
    a._same(b)
    return GroupElement(a.desc, a.desc.meet(a.coords, b.coords))


def join(a: GroupElement, b: GroupElement) -> GroupElement:
    a._same(b)
    return GroupElement(a.desc, a.desc.join(a.coords, b.coords))


def decompose(g: GroupElement) -> tuple[GroupElement, GroupElement]:
    """Split ``g`` as ``pos - neg`` with ``pos, neg >= 0`` and ``pos ^ neg = 0``."""
    z = zero(g.desc)
    return join(g, z), join(-g, z)


def bounded_witness(g: GroupElement) -> GroupElement | None:
    """Some ``c >= 0`` with ``c >= n*g`` for every ``n >= 1``, or None if none exists."""
    w = g.desc.bounded_witness(g.coords)
    return None if w is None else GroupElement(g.desc, w)


def bounded_multiples(g: GroupElement) -> bool:
    return g.desc.bounded_witness(g.coords) is not None


def check_witness(c: GroupElement, g: GroupElement, depth: int = 100) -> bool:
    """Check ``c >= 0`` and ``c >= n*g`` for ``n = 1..depth``."""
    if not c.is_nonnegative():
        return False
    return all(leq(scalar_mul(n, g), c) for n in range(1, depth + 1))


def _box_candidates(desc: Lex, box: int) -> list[Coords]:
    cands = [
        c for c in itertools.product(range(-box, box + 1), repeat=desc.rank)
        if desc.leq(desc.zero(), c)
    ]
    cands.sort(key=lambda c: (sum(map(abs, c)), c))
    return cands


def search_witness(g: GroupElement, depth: int = 100, box: int = 1) -> GroupElement | None:
    """Brute-force search for a bound on the multiples of ``g``.

    Tries every ``c >= 0`` with coordinates in ``[-box, box]`` and accepts the
    first one that dominates ``n*g`` for all ``n <= depth``.  Products are
    searched component by component, which is exact for the pointwise order.
    The answer is relative to ``box`` and ``depth``; it exists to check the
    closed form, never to replace it.
    """
    parts = []
    for part in g.parts():
        if isinstance(part.desc, Product):
            found = search_witness(part, depth, box)
            if found is None:
                return None
            parts.append(found.coords)
            continue
        lex = part.desc
        for c in _box_candidates(lex, box):
            if all(lex.leq(tuple(n * a for a in part.coords), c) for n in range(1, depth + 1)):
                parts.append(c)
                break
        else:
            return None
    return GroupElement(g.desc, _concat(parts))


def random_element(desc: LGroupDescriptor, rng: random.Random, bound: int = 3) -> GroupElement:
    return GroupElement(desc, tuple(rng.randint(-bound, bound) for _ in range(desc.size)))


def random_nonnegative(desc: LGroupDescriptor, rng: random.Random, bound: int = 3) -> GroupElement:
    """Random element of the positive cone, zero included."""
    return GroupElement(desc, _nonneg_coords(desc, rng, bound))


def _nonneg_coords(desc: LGroupDescriptor, rng: random.Random, bound: int) -> Coords:
    if isinstance(desc, Product):
        return _concat(_nonneg_coords(c, rng, bound) for c in desc.components)
    x = tuple(rng.randint(-bound, bound) for _ in range(desc.rank))
    # Negation maps the negative half of a total order onto the positive half.
    return x if x >= desc.zero() else tuple(-a for a in x)


def iter_coordinate_box(desc: LGroupDescriptor, bound: int) -> Iterator[GroupElement]:
    for c in itertools.product(range(-bound, bound + 1), repeat=desc.size):
        yield GroupElement(desc, c)


def flatten_lex(desc: LGroupDescriptor) -> list[Lex]:
    """Lex factors of ``desc`` in coordinate order."""
    if isinstance(desc, Lex):
        return [desc]
    out: list[Lex] = []
    for c in desc.components:
        out.extend(flatten_lex(c))
    return out


def parse_descriptor(text: str) -> LGroupDescriptor:
    """Parse the ``str`` form, e.g. ``Product(Lex(2),Lex(1))``."""
    s = text.replace(" ", "")
    desc, rest = _parse(s, 0)
    if rest != len(s):
        raise InputError(f"trailing input in descriptor {text!r}")
    return desc


def _parse(s: str, i: int) -> tuple[LGroupDescriptor, int]:
    if s.startswith("Lex(", i):
        j = s.find(")", i)
        if j < 0:
            raise InputError(f"unterminated Lex in {s!r}")
        try:
            rank = int(s[i + 4:j])
        except ValueError:
            raise InputError(f"bad Lex rank in {s!r}") from None
        return Lex(rank), j + 1
    if s.startswith("Product(", i):
        i += len("Product(")
        comps: list[LGroupDescriptor] = []
        while True:
            c, i = _parse(s, i)
            comps.append(c)
            if i < len(s) and s[i] == ",":
                i += 1
                continue
            if i < len(s) and s[i] == ")":
                return Product(tuple(comps)), i + 1
            raise InputError(f"malformed Product in {s!r}")
    raise InputError(f"cannot parse descriptor at offset {i} of {s!r}")


def descriptors_up_to(max_components: int, max_rank: int) -> list[LGroupDescriptor]:
    """Every bare ``Lex(k)`` and every flat ordered product within the bounds."""
    out: list[LGroupDescriptor] = [Lex(k) for k in range(1, max_rank + 1)]
    for m in range(1, max_components + 1):
        for ranks in itertools.product(range(1, max_rank + 1), repeat=m):
            out.append(Product(tuple(Lex(k) for k in ranks)))
    return out


def random_descriptor(
    rng: random.Random, max_rank: int = 3, max_components: int = 3, nest: float = 0.0
) -> LGroupDescriptor:
    """Random bare lex power or flat product; ``nest`` is the chance a factor is itself a product."""
    if rng.random() < 0.2:
        return Lex(rng.randint(1, max_rank))
    m = rng.randint(1, max_components)
    comps: list[LGroupDescriptor] = []
    for _ in range(m):
        if nest and rng.random() < nest:
            comps.append(Product(tuple(Lex(rng.randint(1, max_rank)) for _ in range(rng.randint(1, 2)))))
        else:
            comps.append(Lex(rng.randint(1, max_rank)))
    return Product(tuple(comps))
