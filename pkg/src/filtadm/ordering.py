"""Canonical ordering of summands and the "does not precede" certificate.

Two summands have the same type when a nonzero Frobenius-equivariant map
exists between their chains in one direction or the other, which for block
chains of one family happens exactly when their twist ranges overlap.  The
canonical order sorts each same-type group by (offset, length) and the
groups among themselves by average Newton slope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import ModuleSpec, Summand, t_n_summand

__all__ = [
    "TypePartition",
    "type_components",
    "group_and_order",
    "canonical_order",
    "is_canonical",
    "require_canonical",
    "check_not_precede",
]


@dataclass(frozen=True)
class TypePartition:
    """Same-type groups (indices into the ordered summand list)."""

    groups: tuple[tuple[int, ...], ...]
    dims: tuple[int, ...]
    slopes_num: tuple[Fraction, ...]   # total t_N per group
    avg_slopes: tuple[Fraction, ...]


def type_components(spec: ModuleSpec) -> list[list[int]]:
    """Connected components of the range-overlap relation within a family."""
    n = len(spec.summands)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for i in range(n):
        si = spec.summands[i]
        for j in range(i + 1, n):
            sj = spec.summands[j]
            if si.family != sj.family:
                continue
            if si.l <= sj.l + sj.b - 1 and sj.l <= si.l + si.b - 1:
                union(i, j)
    comps: dict[int, list[int]] = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return [sorted(v) for v in comps.values()]


def _group_key(spec: ModuleSpec, comp: list[int]) -> tuple:
    dim = sum(spec.summand_dim(i) for i in comp)
    total = sum((t_n_summand(spec, i) for i in comp), Fraction(0))
    members = tuple(sorted((spec.summands[i].l, spec.summands[i].b) for i in comp))
    return (total / dim, spec.family_of(comp[0]).id, members)


def group_and_order(spec: ModuleSpec) -> tuple[TypePartition, tuple[int, ...]]:
    """Canonical groups and the permutation putting summands in order.

    The returned permutation maps new position -> original index.  Within a
    group summands sort ascending by (l, b); groups sort ascending by
    average slope t_N/dim, ties broken by family id and member multiset for
    determinism (the verdicts downstream are insensitive to the tie rule).
    """
    comps = type_components(spec)
    ordered_groups = []
    for comp in comps:
        members = sorted(
            comp, key=lambda i: (spec.summands[i].l, spec.summands[i].b, i)
        )
        ordered_groups.append(members)
    ordered_groups.sort(key=lambda comp: _group_key(spec, comp))
    perm = tuple(i for comp in ordered_groups for i in comp)
    groups = []
    pos = 0
    dims, totals, avgs = [], [], []
    for comp in ordered_groups:
        groups.append(tuple(range(pos, pos + len(comp))))
        pos += len(comp)
        dim = sum(spec.summand_dim(i) for i in comp)
        total = sum((t_n_summand(spec, i) for i in comp), Fraction(0))
        dims.append(dim)
        totals.append(total)
        avgs.append(total / dim)
    partition = TypePartition(tuple(groups), tuple(dims), tuple(totals), tuple(avgs))
    return partition, perm


def canonical_order(spec: ModuleSpec) -> tuple[ModuleSpec, TypePartition, tuple[int, ...]]:
    partition, perm = group_and_order(spec)
    ordered = spec.with_summands([spec.summands[i] for i in perm])
    return ordered, partition, perm


def is_canonical(spec: ModuleSpec) -> bool:
    _, perm = group_and_order(spec)
    return perm == tuple(range(len(spec.summands)))


def require_canonical(spec: ModuleSpec) -> None:
    if not is_canonical(spec):
        raise ValueError(
            "spec is not in canonical order; apply canonical_order() first"
        )


def _precedes(si: Summand, sj: Summand) -> bool:
    """Whether the chain si precedes sj (forbidden for an earlier summand).

    Scans twist shifts l >= 0 with l + b_j > b_i for the isomorphism
    l_i = l_j + (l + b_j - b_i); equivalently the segment of sj starts no
    later and ends strictly later than the segment of si.
    """
    if si.family != sj.family:
        return False
    for l in range(0, si.l + si.b + sj.b + 1):
        if l + sj.b > si.b and si.l == sj.l + (l + sj.b - si.b):
            return True
    return False


def check_not_precede(spec: ModuleSpec) -> tuple[bool, tuple[int, int] | None]:
    """Certify the given summand order: no earlier chain precedes a later one.

    Returns (True, None) or (False, (i, j)) with the first offending pair
    (0-based indices into the summand list as given).
    """
    n = len(spec.summands)
    for i in range(n):
        for j in range(i + 1, n):
            if _precedes(spec.summands[i], spec.summands[j]):
                return False, (i, j)
    return True, None
