"""Three routes to the primes that survive in the complete integral closure.

``oracle``         algebraic: no element of the prime has an almost integral inverse.
``topological``    every realizable closed set through the prime has a dense rim closure.
``min_criterion``  nested principal ideals below the prime share a minimal prime.

On every model the three must coincide; a disagreement is reported with the
offending witnesses rather than raised.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from cictools.bezout import (
    BezoutSpectrum,
    VSetPattern,
    bounded_filter_element,
    enumerate_v_sets,
    mask_members,
    members_mask,
    nested_pair_shapes,
    pair_pattern,
    spec_ast_oracle,
)
from cictools.errors import InputError
from cictools.poset import is_order_isomorphism

CRITERIA = ("oracle", "topological", "min_criterion")


def topological_exclusions(spec: BezoutSpectrum) -> dict[str, VSetPattern]:
    """Map each excluded prime to a closed set through it whose rim closure is not dense."""
    poset = spec.poset
    out: dict[str, VSetPattern] = {}
    for pattern in enumerate_v_sets(spec):
        if not pattern.members or poset.is_dense(poset.rim_closure(pattern.members)):
            continue
        for p in pattern.members:
            out.setdefault(p, pattern)
    return out


def spec_ast_topological(spec: BezoutSpectrum) -> frozenset:
    excluded = topological_exclusions(spec)
    return frozenset(p for p in spec.points if p not in excluded)


def min_criterion_exclusions(spec: BezoutSpectrum) -> dict[str, tuple[VSetPattern, VSetPattern]]:
    """Map each excluded prime ``P`` to ``(V(I), V(J))`` with ``I <= J <= P`` and disjoint Min sets."""
    desc, poset = spec.desc, spec.poset
    mins: dict[int, int] = {}

    def minimal(mask: int) -> int:
        if mask not in mins:
            mins[mask] = members_mask(desc, poset.minimal_elements(mask_members(desc, mask)))
        return mins[mask]

    out: dict[str, tuple[VSetPattern, VSetPattern]] = {}
    excluded = 0
    for shape in nested_pair_shapes(desc):
        mask_i, mask_j = shape[0], shape[1]
        # V(J) must contain P, so pairs whose V(J) adds nothing new are skipped.
        if not mask_j & ~excluded:
            continue
        if minimal(mask_i) & minimal(mask_j):
            continue
        pair = pair_pattern(desc, shape)
        for p in pair[1].members:
            out.setdefault(p, pair)
        excluded |= mask_j
    return out


def spec_ast_min_criterion(spec: BezoutSpectrum) -> frozenset:
    excluded = min_criterion_exclusions(spec)
    return frozenset(p for p in spec.points if p not in excluded)


@dataclass
class CriteriaReport:
    points: list[str]
    heights: dict[str, int]
    verdicts: dict[str, frozenset]
    witnesses: dict[str, dict[str, object]] = field(default_factory=dict)

    def verdict(self, criterion: str, p: str) -> str:
        return "in" if p in self.verdicts[criterion] else "out"

    @property
    def agreement(self) -> bool:
        return self.verdicts["oracle"] == self.verdicts["topological"] == self.verdicts["min_criterion"]

    @property
    def agreed(self) -> frozenset:
        """Points every criterion keeps."""
        return self.verdicts["oracle"] & self.verdicts["topological"] & self.verdicts["min_criterion"]

    @property
    def cic(self) -> bool:
        return self.agreed == frozenset(self.points)

    @property
    def max_height(self) -> int:
        return max((self.heights[p] for p in self.agreed), default=0)

    def disagreements(self) -> list[str]:
        return [p for p in self.points if len({self.verdict(c, p) for c in CRITERIA}) > 1]

    def counterexamples(self) -> list[dict]:
        out = []
        for p in self.disagreements():
            entry: dict = {"point": p}
            for c in CRITERIA:
                entry[c] = self.verdict(c, p)
                if p in self.witnesses.get(c, {}):
                    entry[c + "_witness"] = self.witnesses[c][p]
            out.append(entry)
        return out


def _describe_pair(pair: tuple[VSetPattern, VSetPattern], spec: BezoutSpectrum) -> dict:
    big, small = pair
    poset = spec.poset
    return {
        "I": big.describe(poset),
        "J": small.describe(poset),
        "min_I": poset.sort(poset.minimal_elements(big.members)),
        "min_J": poset.sort(poset.minimal_elements(small.members)),
    }


def cross_validate(spec: BezoutSpectrum, inject_fault: str | None = None) -> CriteriaReport:
    """Run all three criteria and collect per-point verdicts.

    ``inject_fault`` names a point whose oracle verdict is flipped; it exists
    so the failure path can be exercised end to end.
    """
    poset = spec.poset
    oracle = set(spec_ast_oracle(spec))
    topo_ex = topological_exclusions(spec)
    min_ex = min_criterion_exclusions(spec)

    if inject_fault is not None:
        if inject_fault not in poset:
            raise InputError(f"unknown point {inject_fault!r}")
        oracle ^= {inject_fault}

    witnesses: dict[str, dict[str, object]] = {c: {} for c in CRITERIA}
    for p in spec.nonroot():
        if p not in oracle:
            g = bounded_filter_element(spec.filters[p])
            witnesses["oracle"][p] = {"bounded_element": None if g is None else list(g.coords)}
    for p, pattern in topo_ex.items():
        witnesses["topological"][p] = {
            "v_set": pattern.describe(poset),
            "rim_closure": poset.sort(poset.rim_closure(pattern.members)),
        }
    for p, pair in min_ex.items():
        witnesses["min_criterion"][p] = _describe_pair(pair, spec)

    return CriteriaReport(
        points=list(poset.points),
        heights={p: poset.height(p) for p in poset.points},
        verdicts={
            "oracle": frozenset(oracle),
            "topological": frozenset(p for p in poset.points if p not in topo_ex),
            "min_criterion": frozenset(p for p in poset.points if p not in min_ex),
        },
        witnesses=witnesses,
    )


def check_height_bound(report: CriteriaReport, spec: BezoutSpectrum) -> bool:
    """Every surviving prime has height at most 1."""
    return all(spec.poset.height(p) <= 1 for p in report.agreed)


def audit(report: CriteriaReport, spec: BezoutSpectrum) -> list[str]:
    """Human-readable list of every property the report violates."""
    problems = []
    for entry in report.counterexamples():
        verdicts = ", ".join(f"{c}={entry[c]}" for c in CRITERIA)
        problems.append(f"criteria disagree at {entry['point']}: {verdicts}")
    if not check_height_bound(report, spec):
        tall = [p for p in spec.poset.sort(report.agreed) if spec.poset.height(p) > 1]
        problems.append(f"surviving primes above height 1: {', '.join(tall)}")
    if spec.root not in report.agreed:
        problems.append("zero ideal missing from the surviving primes")
    if not spec.poset.is_down_closed(report.agreed):
        problems.append("surviving primes are not closed under generalization")
    return problems


def check_phi_invariance(
    spec_a: BezoutSpectrum, spec_b: BezoutSpectrum, iso: Mapping[str, str]
) -> bool:
    """Whether ``iso`` carries the surviving primes of ``spec_a`` onto those of ``spec_b``."""
    if not is_order_isomorphism(spec_a.poset, spec_b.poset, iso):
        raise InputError("mapping is not an order isomorphism of the spectra")
    agreed_a = cross_validate(spec_a).agreed
    agreed_b = cross_validate(spec_b).agreed
    return frozenset(iso[p] for p in agreed_a) == agreed_b
