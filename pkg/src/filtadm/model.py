"""Combinatorial data model for block-chain Frobenius modules.

A module is a direct sum of indecomposable chains.  Each chain is a stack
of copies of an irreducible bottom object (a Family of dimension h) twisted
upward: the chain (family F, offset l, length b) consists of the blocks
F(l), F(l+1), ..., F(l+b-1), the monodromy operator N maps each block onto
the one below it and kills the bottom block.  The Newton slope of a single
block F(n) is F.t_base + n * [K:Qp]; slopes are additive over blocks.

Weight profiles attach, per embedding sigma, a strictly increasing list of
d+1 integers (the negated Hodge-Tate weights of the filtration sought).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

__all__ = [
    "Config",
    "Family",
    "Summand",
    "ModuleSpec",
    "WeightProfile",
    "GoodSubobject",
    "Block",
    "SpecError",
    "spec_violations",
    "validate_spec",
    "t_n",
    "level_decomposition",
    "LevelDecomposition",
    "fraction_to_str",
    "fraction_from_json",
    "spec_to_dict",
    "spec_from_dict",
    "profile_to_dict",
    "profile_from_dict",
]


class SpecError(ValueError):
    """Raised when a module spec or weight profile violates an invariant."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Config:
    """Global degree constants.

    deg_K_Qp = [K:Qp], deg_L_Qp = [L:Qp] (= number of embeddings sigma),
    deg_K_L = [K:L], with deg_K_Qp = deg_K_L * deg_L_Qp.  The prime p is a
    surrogate value for valuation arithmetic; f_prime is carried for the
    record but enters no formula (its normalization is absorbed into each
    family's t_base).
    """

    p: int
    deg_K_Qp: int = 1
    deg_L_Qp: int = 1
    deg_K_L: int = 1
    f_prime: int = 1

    @property
    def embeddings(self) -> int:
        return self.deg_L_Qp


@dataclass(frozen=True)
class Family:
    """An irreducible bottom object: opaque label, dimension h, base slope."""

    id: str
    h: int
    t_base: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t_base", Fraction(self.t_base))


@dataclass(frozen=True)
class Summand:
    """A chain of b blocks of one family, bottom block twisted by l."""

    family: str
    l: int
    b: int


@dataclass(frozen=True)
class Block:
    """A single block inside a summand: family twisted by `twist`."""

    summand: int
    k: int
    family: Family
    twist: int

    @property
    def size(self) -> int:
        return self.family.h

    def t_n(self, config: Config) -> Fraction:
        return self.family.t_base + self.twist * config.deg_K_Qp


@dataclass(frozen=True)
class ModuleSpec:
    config: Config
    families: tuple[Family, ...]
    summands: tuple[Summand, ...]

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "summands", tuple(self.summands))

    def family(self, fid: str) -> Family:
        for f in self.families:
            if f.id == fid:
                return f
        raise KeyError(fid)

    def family_of(self, i: int) -> Family:
        return self.family(self.summands[i].family)

    @property
    def dimension(self) -> int:
        return sum(s.b * self.family(s.family).h for s in self.summands)

    def summand_dim(self, i: int) -> int:
        s = self.summands[i]
        return s.b * self.family(s.family).h

    def blocks(self) -> list[Block]:
        """All blocks in summand order, bottom to top inside each summand."""
        out = []
        for i, s in enumerate(self.summands):
            fam = self.family(s.family)
            for k in range(s.b):
                out.append(Block(i, k, fam, s.l + k))
        return out

    def with_summands(self, summands: Sequence[Summand]) -> "ModuleSpec":
        return ModuleSpec(self.config, self.families, tuple(summands))


@dataclass(frozen=True)
class WeightProfile:
    """Per embedding sigma, a strictly increasing list of d+1 integers."""

    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(tuple(row) for row in self.weights))

    @property
    def length(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    def column_sum(self, j: int) -> int:
        """Sum over sigma of the j-th weight (j is 1-based)."""
        return sum(row[j - 1] for row in self.weights)

    def prefix_sum(self, m: int) -> int:
        """Sum over sigma of the m lowest weights."""
        return sum(sum(row[:m]) for row in self.weights)

    @property
    def total(self) -> int:
        return self.prefix_sum(self.length)


@dataclass(frozen=True)
class GoodSubobject:
    """Bottom-aligned block counts per summand: 0 <= c_i <= b_i."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(self.counts))

    def dimension(self, spec: ModuleSpec) -> int:
        return sum(
            c * spec.family_of(i).h for i, c in enumerate(self.counts)
        )

    def contains(self, other: "GoodSubobject") -> bool:
        return all(a >= b for a, b in zip(self.counts, other.counts))

    def blocks(self, spec: ModuleSpec) -> Iterator[Block]:
        for i, c in enumerate(self.counts):
            s = spec.summands[i]
            fam = spec.family_of(i)
            for k in range(c):
                yield Block(i, k, fam, s.l + k)


def spec_violations(spec: ModuleSpec, profile: WeightProfile | None = None) -> list[str]:
    """Collect every invariant violation, with field paths."""
    errs: list[str] = []
    cfg = spec.config
    if not _is_prime(cfg.p):
        errs.append(f"config.p: {cfg.p} is not prime")
    for name in ("deg_K_Qp", "deg_L_Qp", "deg_K_L", "f_prime"):
        if getattr(cfg, name) < 1:
            errs.append(f"config.{name}: must be >= 1")
    if cfg.deg_K_Qp != cfg.deg_K_L * cfg.deg_L_Qp:
        errs.append(
            "config: degree identity violated "
            f"({cfg.deg_K_Qp} != {cfg.deg_K_L} x {cfg.deg_L_Qp})"
        )
    seen = set()
    for f in spec.families:
        if f.id in seen:
            errs.append(f"families[{f.id}]: duplicate id")
        seen.add(f.id)
        if f.h < 1:
            errs.append(f"families[{f.id}].h: must be >= 1")
    for i, s in enumerate(spec.summands):
        if s.family not in seen:
            errs.append(f"summands[{i}].family: unknown family {s.family!r}")
        if s.b < 1:
            errs.append(f"summands[{i}].b: must be >= 1")
        if s.l < 0:
            errs.append(f"summands[{i}].l: must be >= 0")
    if not errs and spec.dimension < 2:
        errs.append("summands: total dimension must be >= 2")
    if profile is not None and not errs:
        d1 = spec.dimension
        if len(profile.weights) != cfg.deg_L_Qp:
            errs.append(
                f"weights: expected {cfg.deg_L_Qp} embedding rows, "
                f"got {len(profile.weights)}"
            )
        for sigma, row in enumerate(profile.weights, start=1):
            if len(row) != d1:
                errs.append(f"weights: row length {len(row)} != d+1 = {d1} at sigma={sigma}")
            if any(a >= b for a, b in zip(row, row[1:])):
                errs.append(f"weights not strictly increasing at sigma={sigma}")
    return errs


def validate_spec(
    spec: ModuleSpec, profile: WeightProfile | None = None
) -> tuple[ModuleSpec, WeightProfile | None]:
    errs = spec_violations(spec, profile)
    if errs:
        raise SpecError(errs)
    return spec, profile


def t_n(spec: ModuleSpec, part: GoodSubobject | None = None) -> Fraction:
    """Newton slope of the whole module or of a good subobject.

    Sum over included blocks (family F, twist n) of F.t_base + n*[K:Qp].
    """
    cfg = spec.config
    total = Fraction(0)
    if part is None:
        blocks = spec.blocks()
    else:
        for i, c in enumerate(part.counts):
            if c < 0 or c > spec.summands[i].b:
                raise ValueError(f"good subobject count out of range at summand {i}")
        blocks = list(part.blocks(spec))
    for blk in blocks:
        total += blk.t_n(cfg)
    return total


def t_n_summand(spec: ModuleSpec, i: int) -> Fraction:
    s = spec.summands[i]
    fam = spec.family_of(i)
    return sum(
        (fam.t_base + (s.l + k) * spec.config.deg_K_Qp for k in range(s.b)),
        Fraction(0),
    )


@dataclass(frozen=True)
class LevelDecomposition:
    """Level data of one same-type component.

    `levels` maps a twist level j to the dimension of the generalized
    eigenspace at that level; `depth_dims` maps j to the increasing chain of
    dimensions ker((phi' - q'^j a)^i), i = 1, 2, ..., computed from the
    modification-edge chains (without edges every block dies at depth 1).
    """

    summands: tuple[int, ...]
    family: str
    levels: tuple[tuple[int, int], ...]
    depth_dims: tuple[tuple[int, tuple[int, ...]], ...]

    def level_dims(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.levels)


def level_decomposition(
    spec: ModuleSpec, edges: Sequence[tuple[int, int]] = ()
) -> list[LevelDecomposition]:
    """Per same-type component, the level dimensions and depth flags.

    `edges` is an optional list of (src, dst) modification edges (alignment
    is implied by the summand offsets); with edges, blocks chained at one
    level sit at increasing kernel depth along the chain.
    """
    from .ordering import type_components  # local import to avoid a cycle

    comps = type_components(spec)
    out = []
    edge_map = {src: dst for src, dst in edges}
    for comp in comps:
        fam = spec.family_of(comp[0])
        h = fam.h
        levels: dict[int, list[int]] = {}
        for i in comp:
            s = spec.summands[i]
            for k in range(s.b):
                levels.setdefault(s.l + k, []).append(i)
        level_dims = tuple(sorted((j, h * len(v)) for j, v in levels.items()))
        depths = []
        for j, members in sorted(levels.items()):
            # forward walk along edges staying at level j
            def walk_len(i: int) -> int:
                seen = set()
                cur, n = i, 1
                while cur in edge_map and cur not in seen:
                    seen.add(cur)
                    nxt = edge_map[cur]
                    if nxt not in members:
                        break
                    cur, n = nxt, n + 1
                return n
            max_depth = max(walk_len(i) for i in members)
            dims = []
            for depth in range(1, max_depth + 1):
                # rank of the depth-step map = number of distinct endpoints
                # of `depth`-step walks
                ends = set()
                for i in members:
                    cur, ok = i, True
                    for _ in range(depth):
                        nxt = edge_map.get(cur)
                        if nxt is None or nxt not in members:
                            ok = False
                            break
                        cur = nxt
                    if ok:
                        ends.add(cur)
                dims.append(h * len(members) - h * len(ends))
            depths.append((j, tuple(dims)))
        out.append(
            LevelDecomposition(
                summands=tuple(comp),
                family=fam.id,
                levels=level_dims,
                depth_dims=tuple(depths),
            )
        )
    return out


# ---------------------------------------------------------------------------
# JSON encoding.  Field names are part of the wire format: p, degKQp,
# degLQp, degKL, fPrime, families[{id,h,tBase}], summands[{family,l,b}],
# weights[[ints]].  Rationals travel as "num/den" strings.
# ---------------------------------------------------------------------------


def fraction_to_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def fraction_from_json(value) -> Fraction:
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, int):
        return Fraction(value)
    raise SpecError([f"expected rational as 'num/den' string, got {value!r}"])


def spec_to_dict(spec: ModuleSpec) -> dict:
    return {
        "p": spec.config.p,
        "degKQp": spec.config.deg_K_Qp,
        "degLQp": spec.config.deg_L_Qp,
        "degKL": spec.config.deg_K_L,
        "fPrime": spec.config.f_prime,
        "families": [
            {"id": f.id, "h": f.h, "tBase": fraction_to_str(f.t_base)}
            for f in spec.families
        ],
        "summands": [
            {"family": s.family, "l": s.l, "b": s.b} for s in spec.summands
        ],
    }


def spec_from_dict(data: dict) -> ModuleSpec:
    try:
        cfg = Config(
            p=int(data["p"]),
            deg_K_Qp=int(data["degKQp"]),
            deg_L_Qp=int(data["degLQp"]),
            deg_K_L=int(data["degKL"]),
            f_prime=int(data.get("fPrime", 1)),
        )
        families = tuple(
            Family(str(f["id"]), int(f["h"]), fraction_from_json(f["tBase"]))
            for f in data["families"]
        )
        summands = tuple(
            Summand(str(s["family"]), int(s["l"]), int(s["b"]))
            for s in data["summands"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError([f"malformed module spec: {exc}"]) from exc
    return ModuleSpec(cfg, families, summands)


def profile_to_dict(profile: WeightProfile) -> dict:
    return {"weights": [list(row) for row in profile.weights]}


def profile_from_dict(data) -> WeightProfile:
    if isinstance(data, list):
        rows = data
    elif isinstance(data, dict) and "weights" in data:
        rows = data["weights"]
    else:
        raise SpecError(["malformed weight profile: expected {'weights': [[...]]}"])
    try:
        return WeightProfile(tuple(tuple(int(x) for x in row) for row in rows))
    except (TypeError, ValueError) as exc:
        raise SpecError([f"malformed weight profile: {exc}"]) from exc
