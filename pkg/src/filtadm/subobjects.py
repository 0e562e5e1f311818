"""Good subobjects, greedy flags, index-set bounds, and the concrete lattice.

Good subobjects are bottom-aligned block selections (one count per
summand).  Under a Frobenius modification only the selections compatible
with every edge remain honest submodules: an edge (src -> dst, alignment l)
forces c_src <= l + c_dst.  The greedy flag attached to a submodule D'
repeatedly extends by the stable good subobject maximizing the
intersection-gain ratio

    alpha(E'/E, D') = (dim E' cap D' - dim E cap D') / (dim E' - dim E),

breaking ties toward the smallest step and then the lexicographically
smallest count vector.  Its jump data feed the special-pair machinery; its
trailing intervals give the index set bounding the Hodge slope of D'.

The concrete enumerator lists Phi,N-stable subspaces of a realization by
closing signed {0,+-1}-pattern vectors inside each generalized eigenspace
and saturating under sums, keeping one representative per relative
position against the good lattice; random-coefficient rounds re-derive
the classes and fail loudly if the pattern heuristic ever misses one.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .linalg import Mat, Vec
from .frobenius import ConcreteRealization, ModificationEdge
from .model import GoodSubobject, ModuleSpec
from .ordering import type_components
from .pairs import GlobalEntry, InternalConsistencyError, SpecialPair, is_special

__all__ = [
    "CapExceededError",
    "SpecialPairViolation",
    "Subobject",
    "GoodFlag",
    "enumerate_good_subobjects",
    "is_stable_good",
    "stable_good_subobjects",
    "good_coords",
    "good_span",
    "alpha_ratio",
    "greedy_flag",
    "flag_chain",
    "flag_conditions",
    "omega_from_flag",
    "special_pair_from_flag",
    "split_by_component",
    "component_analysis",
    "global_omega",
    "enumerate_concrete_subobjects",
    "random_round_subobjects",
    "subobject_class_key",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 8
_LATTICE_GUARD = 1500


class CapExceededError(ValueError):
    pass


class SpecialPairViolation(InternalConsistencyError):
    """Flag jump data violating the special-pair conditions.

    Carries the offending clause and the raw (a, c) data; the only
    configuration known to reach this is the hull-at-the-top boundary
    (smallest enclosing good = whole module, so a_{k+1} = 0, while a final
    mixed step leaves max(a_i - c_i) positive).
    """

    def __init__(self, clause: str, a: tuple[Fraction, ...], c: tuple[Fraction, ...]):
        super().__init__(
            f"flag jump data violate the special-pair conditions "
            f"(clause {clause}; a={tuple(map(str, a))}, c={tuple(map(str, c))})"
        )
        self.clause = clause
        self.a = a
        self.c = c


@dataclass(frozen=True)
class Subobject:
    """A Phi,N-stable subspace, canonically represented by RREF rows."""

    rows: Mat

    def __post_init__(self):
        object.__setattr__(self, "rows", linalg.rref(self.rows))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, other: "Subobject") -> bool:
        return all(linalg.in_span(self.rows, v) for v in other.rows)


@dataclass(frozen=True)
class GoodFlag:
    """Strictly increasing chain of good subobjects below the full module.

    `alphas` has one entry per step of the extended chain
    0 -> E_1 -> ... -> E_m -> D (so len(alphas) == len(members) + 1).
    """

    members: tuple[GoodSubobject, ...]
    alphas: tuple[Fraction, ...]


def enumerate_good_subobjects(spec: ModuleSpec) -> tuple[GoodSubobject, ...]:
    """Every count vector in prod_i {0..b_i}, zero and the whole included."""
    ranges = [range(s.b + 1) for s in spec.summands]
    return tuple(GoodSubobject(c) for c in itertools.product(*ranges))


def is_stable_good(
    good: GoodSubobject, edges: Sequence[ModificationEdge]
) -> bool:
    return all(good.counts[e.src] <= e.alignment + good.counts[e.dst] for e in edges)


def stable_good_subobjects(
    spec: ModuleSpec, edges: Sequence[ModificationEdge] = ()
) -> tuple[GoodSubobject, ...]:
    return tuple(
        g for g in enumerate_good_subobjects(spec) if is_stable_good(g, edges)
    )


def good_coords(spec: ModuleSpec, good: GoodSubobject) -> tuple[int, ...]:
    """Basis indices of the included blocks (h = 1 block layout)."""
    coords = []
    pos = 0
    for i, s in enumerate(spec.summands):
        h = spec.family_of(i).h
        if h != 1:
            raise ValueError("coordinate layout requires h=1")
        coords.extend(range(pos, pos + good.counts[i]))
        pos += s.b
    return tuple(coords)


def good_span(spec: ModuleSpec, good: GoodSubobject) -> Mat:
    n = spec.dimension
    rows = []
    for c in good_coords(spec, good):
        row = [Fraction(0)] * n
        row[c] = Fraction(1)
        rows.append(tuple(row))
    return tuple(rows)


def _inter_dim(spec: ModuleSpec, good: GoodSubobject, dprime) -> int:
    """dim(span(good) cap D') for concrete or combinatorial D'."""
    if isinstance(dprime, GoodSubobject):
        return sum(
            min(a, b) * spec.family_of(i).h
            for i, (a, b) in enumerate(zip(good.counts, dprime.counts))
        )
    coords = good_coords(spec, good)
    return linalg.dim_intersection_coords(coords, dprime.rows, spec.dimension)


def alpha_ratio(
    e: GoodSubobject,
    eprime: GoodSubobject,
    dprime,
    spec: ModuleSpec,
) -> Fraction:
    """Intersection-gain ratio of the step e -> eprime against D'."""
    de, dp = e.dimension(spec), eprime.dimension(spec)
    if dp <= de:
        raise ValueError("alpha needs dim E' > dim E")
    gain = _inter_dim(spec, eprime, dprime) - _inter_dim(spec, e, dprime)
    return Fraction(gain, dp - de)


def greedy_flag(
    spec: ModuleSpec,
    dprime,
    edges: Sequence[ModificationEdge] = (),
    rng: random.Random | None = None,
) -> GoodFlag:
    """Greedy flag for D' inside a single same-type component.

    D' is a Subobject (h = 1) or a GoodSubobject.  With `rng`, residual
    ties between steps of equal (alpha, dim) are broken at random; the
    resulting (dims, alpha sequence) is an invariant of D'.
    """
    if len(type_components(spec)) != 1:
        raise ValueError("greedy flag is defined per same-type component")
    goods = stable_good_subobjects(spec, edges)
    full = GoodSubobject(tuple(s.b for s in spec.summands))
    current = GoodSubobject(tuple(0 for _ in spec.summands))
    members: list[GoodSubobject] = []
    alphas: list[Fraction] = []
    inter_cur = 0
    dim_cur = 0
    while current != full:
        best_key = None
        best: list[GoodSubobject] = []
        for g in goods:
            if g == current or not g.contains(current):
                continue
            dg = g.dimension(spec)
            gain = _inter_dim(spec, g, dprime) - inter_cur
            alpha = Fraction(gain, dg - dim_cur)
            key = (-alpha, dg - dim_cur)
            if best_key is None or key < best_key:
                best_key, best = key, [g]
            elif key == best_key:
                best.append(g)
        if rng is not None and len(best) > 1:
            choice = rng.choice(best)
        else:
            choice = min(best, key=lambda g: g.counts)
        alphas.append(-best_key[0])
        current = choice
        dim_cur = current.dimension(spec)
        inter_cur = _inter_dim(spec, current, dprime)
        if current != full:
            members.append(current)
    return GoodFlag(tuple(members), tuple(alphas))


def flag_chain(spec: ModuleSpec, flag: GoodFlag) -> tuple[GoodSubobject, ...]:
    """The extended chain 0 = E_0 < E_1 < ... < E_m < E_{m+1} = D."""
    zero = GoodSubobject(tuple(0 for _ in spec.summands))
    full = GoodSubobject(tuple(s.b for s in spec.summands))
    return (zero, *flag.members, full)


def flag_conditions(
    spec: ModuleSpec,
    flag: GoodFlag,
    realization: ConcreteRealization,
) -> dict[str, bool]:
    """Exact check of the structural flag conditions on a realization.

    (a) alpha nonincreasing, with nondecreasing step dims on ties;
    (b) N maps each member into the previous one;
    (c) each step is killed into the previous member by Phi - p^j a for
        some twist level j.
    """
    chain = flag_chain(spec, flag)
    dims = [g.dimension(spec) for g in chain]
    cond_a = True
    for i in range(1, len(flag.alphas)):
        if flag.alphas[i] > flag.alphas[i - 1]:
            cond_a = False
        if flag.alphas[i] == flag.alphas[i - 1]:
            if dims[i + 1] - dims[i] < dims[i] - dims[i - 1]:
                cond_a = False
    spans = [good_span(spec, g) for g in chain]
    n = spec.dimension
    cond_b = True
    cond_c = True
    fam = spec.family_of(0)
    seed = realization.seeds[fam.id]
    twists = sorted({blk.twist for blk in realization.basis})
    p = realization.p
    for i in range(1, len(chain)):
        prev, cur = spans[i - 1], spans[i]
        prev_rank = len(prev)
        for v in cur:
            w = linalg.mat_vec(realization.nmat, v)
            if any(w) and linalg.rank(linalg.stack(prev, (w,))) != prev_rank:
                cond_b = False
        found = False
        for j in twists:
            lam = seed * Fraction(p) ** j
            op = linalg.mat_sub(
                realization.phi, linalg.mat_scale(lam, linalg.identity(n))
            )
            ok = True
            for v in cur:
                w = linalg.mat_vec(op, v)
                if any(w) and linalg.rank(linalg.stack(prev, (w,))) != prev_rank:
                    ok = False
                    break
            if ok:
                found = True
                break
        if not found:
            cond_c = False
    return {"a": cond_a, "b": cond_b, "c": cond_c}


def _chain_jumps(
    spec: ModuleSpec, chain: Sequence[GoodSubobject], dprime
) -> tuple[list[int], list[int]]:
    dims = [g.dimension(spec) for g in chain]
    caps = [_inter_dim(spec, g, dprime) for g in chain]
    a = [dims[i] - dims[i - 1] for i in range(1, len(chain))]
    c = [caps[i] - caps[i - 1] for i in range(1, len(chain))]
    return a, c


def omega_from_flag(
    spec: ModuleSpec,
    flag_or_chain,
    dprime,
) -> frozenset[int]:
    """Trailing-interval index set of a good chain adapted to D'.

    For each chain member E_l the interval (dim E_l - c_l, dim E_l] enters,
    where c_l is the jump of dim(E cap D') at that step; the set has
    exactly rank(D') elements.
    """
    if isinstance(flag_or_chain, GoodFlag):
        chain = flag_chain(spec, flag_or_chain)
    else:
        chain = tuple(flag_or_chain)
    a, c = _chain_jumps(spec, chain, dprime)
    out: set[int] = set()
    acc = 0
    for step, cap in zip(a, c):
        acc += step
        out.update(range(acc - cap + 1, acc + 1))
    return frozenset(out)


def _dprime_rank(spec: ModuleSpec, dprime) -> int:
    if isinstance(dprime, GoodSubobject):
        return dprime.dimension(spec)
    return dprime.rank


def _extreme_stable_goods(
    spec: ModuleSpec, edges: Sequence[ModificationEdge], dprime
) -> tuple[GoodSubobject, GoodSubobject]:
    """Largest stable good inside D' and smallest stable good containing D'."""
    rank_dp = _dprime_rank(spec, dprime)
    low = [0] * len(spec.summands)
    high = [s.b for s in spec.summands]
    for g in stable_good_subobjects(spec, edges):
        d = g.dimension(spec)
        if _inter_dim(spec, g, dprime) == d:
            low = [max(x, y) for x, y in zip(low, g.counts)]
        if _inter_dim(spec, g, dprime) == rank_dp:
            high = [min(x, y) for x, y in zip(high, g.counts)]
    return GoodSubobject(tuple(low)), GoodSubobject(tuple(high))


def special_pair_from_flag(
    spec: ModuleSpec,
    flag: GoodFlag,
    dprime,
    edges: Sequence[ModificationEdge] = (),
) -> SpecialPair:
    """Jump data between the alpha = 1 saturation and the hull of D'.

    F_1 is the largest stable good subobject contained in D', F_2 the
    smallest stable good subobject containing it; both must occur in the
    flag.  The pair collects a_0 = dim F_1, the interior jumps between F_1
    and F_2, and a_{k+1} = dim D - dim F_2, and is returned solved.
    A zero D' yields the vacuous pair.
    """
    if _dprime_rank(spec, dprime) == 0:
        return SpecialPair.empty()
    chain = flag_chain(spec, flag)
    f1, f2 = _extreme_stable_goods(spec, edges, dprime)
    try:
        i1 = chain.index(f1)
        i2 = chain.index(f2)
    except ValueError as exc:
        raise InternalConsistencyError(
            "extreme good subobjects missing from the greedy flag"
        ) from exc
    dims = [g.dimension(spec) for g in chain]
    caps = [_inter_dim(spec, g, dprime) for g in chain]
    a = [Fraction(dims[i1])]
    c = []
    for i in range(i1 + 1, i2 + 1):
        a.append(Fraction(dims[i] - dims[i - 1]))
        c.append(Fraction(caps[i] - caps[i - 1]))
    a.append(Fraction(dims[-1] - dims[i2]))
    ok, clause = is_special(a, c)
    if not ok:
        raise SpecialPairViolation(clause, tuple(a), tuple(c))
    return SpecialPair(tuple(a), tuple(c)).solved()


# ---------------------------------------------------------------------------
# component splitting and global assembly
# ---------------------------------------------------------------------------


def _component_coords(spec: ModuleSpec, comp: Sequence[int]) -> list[int]:
    coords = []
    pos = 0
    for i, s in enumerate(spec.summands):
        h = spec.family_of(i).h
        if i in comp:
            coords.extend(range(pos, pos + s.b * h))
        pos += s.b * h
    return coords


def split_by_component(
    realization: ConcreteRealization, dprime: Subobject
) -> list[tuple[list[int], Subobject]]:
    """Split a stable subspace across same-type components.

    Distinct components have disjoint Phi-eigenvalue supports, so every
    stable subspace is the direct sum of its component intersections (the
    dimensions are asserted to add up).
    """
    spec = realization.spec
    comps = type_components(spec)
    n = spec.dimension
    out = []
    total = 0
    for comp in comps:
        coords = _component_coords(spec, comp)
        rows = []
        for ci in coords:
            row = [Fraction(0)] * n
            row[ci] = Fraction(1)
            rows.append(tuple(row))
        piece = linalg.intersect_basis(dprime.rows, tuple(rows))
        out.append((comp, Subobject(piece)))
        total += len(piece)
    if total != dprime.rank:
        raise InternalConsistencyError("subspace does not split across components")
    return out


def _component_subspec(spec: ModuleSpec, comp: Sequence[int]) -> ModuleSpec:
    return spec.with_summands([spec.summands[i] for i in comp])


def _restrict_rows(rows: Mat, coords: Sequence[int]) -> Mat:
    return tuple(tuple(row[c] for c in coords) for row in rows)


def component_analysis(
    realization: ConcreteRealization, dprime: Subobject
) -> list[dict]:
    """Per-component greedy flag, special pair, and index set.

    When the jump data of a component hit the hull-at-the-top boundary
    (see SpecialPairViolation) the pair is recorded as None with r = 0;
    the index set, which only needs the chain, is unaffected.
    """
    spec = realization.spec
    out = []
    for comp, piece in split_by_component(realization, dprime):
        subspec = _component_subspec(spec, comp)
        coords = _component_coords(spec, comp)
        local = Subobject(_restrict_rows(piece.rows, coords))
        sub_edges = tuple(
            ModificationEdge(comp.index(e.src), comp.index(e.dst), e.alignment)
            for e in realization.edges
            if e.src in comp and e.dst in comp
        )
        flag = greedy_flag(subspec, local, sub_edges)
        try:
            pair = special_pair_from_flag(subspec, flag, local, sub_edges)
            r = pair.r if pair.r is not None else Fraction(0)
        except SpecialPairViolation:
            pair = None
            r = Fraction(0)
        omega = omega_from_flag(subspec, flag, local)
        out.append(
            {
                "component": tuple(comp),
                "dim": subspec.dimension,
                "flag": flag,
                "pair": pair,
                "omega": omega,
                "r": r,
            }
        )
    return out


def global_omega(realization: ConcreteRealization, dprime: Subobject) -> frozenset[int]:
    """Assembled index set over all components, sorted by descending r."""
    from .pairs import assemble_global

    parts = component_analysis(realization, dprime)
    entries = [
        GlobalEntry(part["omega"], part["r"], part["dim"]) for part in parts
    ]
    return assemble_global(entries)


# ---------------------------------------------------------------------------
# concrete enumeration
# ---------------------------------------------------------------------------


def _pattern_vectors(n: int, level: Sequence[int]) -> list[Vec]:
    """Signed {0, +-1} coefficient vectors inside one eigenspace level.

    Signs matter: two modification edges can converge on one block (an
    aligned source plus a top-matched one), and the difference stratum of
    their coefficients carries its own subobject class.  The first nonzero
    coefficient is normalized to +1 since a global sign never changes the
    span.
    """
    out = []
    for size in range(1, len(level) + 1):
        for subset in itertools.combinations(level, size):
            for signs in itertools.product((1, -1), repeat=size - 1):
                row = [Fraction(0)] * n
                row[subset[0]] = Fraction(1)
                for i, s in zip(subset[1:], signs):
                    row[i] = Fraction(s)
                out.append(tuple(row))
    return out


def _saturate(subs: dict[Mat, Subobject]) -> dict[Mat, Subobject]:
    queue = list(subs.values())
    while queue:
        x = queue.pop()
        for y in list(subs.values()):
            if len(subs) > _LATTICE_GUARD:
                raise CapExceededError("subobject lattice exceeds the guard size")
            rows = linalg.rref(linalg.stack(x.rows, y.rows))
            if rows not in subs:
                sub = Subobject(rows)
                subs[rows] = sub
                queue.append(sub)
    return subs


def _generate(
    realization: ConcreteRealization, atom_vectors: Iterable[Vec]
) -> dict[Mat, Subobject]:
    ops = (realization.phi, realization.nmat)
    subs: dict[Mat, Subobject] = {(): Subobject(())}
    for g in stable_good_subobjects(realization.spec, realization.edges):
        rows = linalg.rref(good_span(realization.spec, g))
        subs.setdefault(rows, Subobject(rows))
    for v in atom_vectors:
        rows = linalg.closure_under((v,), ops)
        subs.setdefault(rows, Subobject(rows))
    return _saturate(subs)


def subobject_class_key(
    realization: ConcreteRealization, sub: Subobject
) -> tuple:
    """Relative position against the stable good lattice (class invariant)."""
    spec = realization.spec
    dims = tuple(
        _inter_dim(spec, g, sub)
        for g in stable_good_subobjects(spec, realization.edges)
    )
    return (sub.rank, dims)


def enumerate_concrete_subobjects(
    realization: ConcreteRealization,
    cap: int = DEFAULT_CAP,
    seed: int = 0,
    rounds: int = 5,
) -> tuple[Subobject, ...]:
    """All Phi,N-stable subspaces up to relative position, canonically sorted.

    Pattern atoms are the signed {0,+-1} vectors inside each generalized
    eigenspace, closed under Phi and N; the result is the sum-closure of
    the atoms and of the stable good spans, one representative per class.
    `rounds` extra passes with random nonzero coefficients must not produce
    any new relative-position class, or the pattern heuristic is declared
    broken.
    """
    n = realization.dimension
    if n > cap:
        raise CapExceededError(f"dimension {n} exceeds the enumeration cap {cap}")
    levels = list(realization.eigen_levels().values())
    atoms: list[Vec] = []
    for level in levels:
        atoms.extend(_pattern_vectors(n, level))
    base = _generate(realization, atoms)
    # one representative per relative-position class, preferring bases
    # without negative entries, then the smallest canonical basis
    def rep_key(s: Subobject):
        negatives = sum(1 for row in s.rows for x in row if x < 0)
        return (s.rank, negatives, s.rows)

    by_class: dict[tuple, Subobject] = {}
    for sub in sorted(base.values(), key=rep_key):
        by_class.setdefault(subobject_class_key(realization, sub), sub)
    result = sorted(by_class.values(), key=lambda s: (s.rank, s.rows))
    base_keys = set(by_class)
    rng = random.Random(seed)
    for _ in range(rounds):
        for sub in random_round_subobjects(realization, rng):
            key = subobject_class_key(realization, sub)
            if key not in base_keys:
                raise InternalConsistencyError(
                    "random-coefficient round found a new subobject class"
                )
    return tuple(result)


def random_round_subobjects(
    realization: ConcreteRealization, rng: random.Random
) -> list[Subobject]:
    """Closures of one random nonzero-coefficient vector per eigenspace level."""
    n = realization.dimension
    ops = (realization.phi, realization.nmat)
    out = []
    for level in realization.eigen_levels().values():
        row = [Fraction(0)] * n
        for i in level:
            num = rng.choice([x for x in range(-9, 10) if x != 0])
            row[i] = Fraction(num, rng.randint(1, 4))
        out.append(Subobject(linalg.closure_under((tuple(row),), ops)))
    return out
