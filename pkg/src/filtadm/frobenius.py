"""Frobenius modification edges and exact matrix realizations.

For two chains of one family written as D_1 = F(l1) + ... + F(l1+r1) and
D_2 = F(l2) + ... + F(l2+r2) with l = l2 - l1 >= 0, a nonzero chain map
D_1 -> D_2 exists iff l <= r1 <= l + r2, and the hom space is then a line.
The modification rule adds, for each source chain, at most one edge to the
smallest later chain admitting such a map with l = 0 or r1 = l + r2; the
modified Frobenius sends the source's top generator to itself plus the
aligned image in the target.

The concrete layer (h = 1 only) realizes Phi and N as exact rational
matrices: each block (summand i, position k) is a basis vector with
Phi-eigenvalue a_F * p^(l_i + k), where the family seeds a_F are distinct
primes different from p by default, and edges add the equal-eigenvalue
coupling term.  N * Phi = p * Phi * N holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .linalg import Mat
from .model import Block, ModuleSpec, Summand
from .ordering import require_canonical

__all__ = [
    "ModificationEdge",
    "hom_dim",
    "build_modified_frobenius",
    "ConcreteRealization",
    "realize_matrices",
]


@dataclass(frozen=True)
class ModificationEdge:
    src: int
    dst: int
    alignment: int   # l = l_dst - l_src >= 0


def hom_dim(s1: Summand, s2: Summand) -> int:
    """Dimension (0 or 1) of the chain-map space from s1 to s2."""
    if s1.family != s2.family:
        return 0
    l = s2.l - s1.l
    r1, r2 = s1.b - 1, s2.b - 1
    return 1 if 0 <= l <= r1 <= l + r2 else 0


def build_modified_frobenius(spec: ModuleSpec) -> tuple[ModificationEdge, ...]:
    """Modification edges for a canonically ordered spec.

    For each k1, the edge goes to the smallest k2 > k1 with a nonzero chain
    map whose alignment satisfies l = 0 or r1 = l + r2; chains admitting no
    such partner stay unmodified.
    """
    require_canonical(spec)
    edges = []
    for k1, s1 in enumerate(spec.summands):
        for k2 in range(k1 + 1, len(spec.summands)):
            s2 = spec.summands[k2]
            if hom_dim(s1, s2) != 1:
                continue
            l = s2.l - s1.l
            r1, r2 = s1.b - 1, s2.b - 1
            if l == 0 or r1 == l + r2:
                edges.append(ModificationEdge(k1, k2, l))
                break
    return tuple(edges)


_SEED_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _default_seeds(spec: ModuleSpec) -> dict[str, Fraction]:
    # one family needs no separation; several get distinct primes != p so
    # that stable subspaces split across families
    if len(spec.families) == 1:
        return {spec.families[0].id: Fraction(1)}
    seeds = {}
    it = (q for q in _SEED_PRIMES if q != spec.config.p)
    for fam in spec.families:
        seeds[fam.id] = Fraction(next(it))
    return seeds


@dataclass(frozen=True)
class ConcreteRealization:
    spec: ModuleSpec
    edges: tuple[ModificationEdge, ...]
    seeds: dict[str, Fraction]
    basis: tuple[Block, ...]
    phi: Mat
    nmat: Mat

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def p(self) -> int:
        return self.spec.config.p

    def block_index(self, summand: int, k: int) -> int:
        for idx, blk in enumerate(self.basis):
            if blk.summand == summand and blk.k == k:
                return idx
        raise KeyError((summand, k))

    def eigenvalue(self, blk: Block) -> Fraction:
        return self.seeds[blk.family.id] * Fraction(self.p) ** blk.twist

    def eigen_levels(self) -> dict[Fraction, list[int]]:
        """Generalized-eigenvalue classes as basis index groups."""
        out: dict[Fraction, list[int]] = {}
        for idx, blk in enumerate(self.basis):
            out.setdefault(self.eigenvalue(blk), []).append(idx)
        return out

    def restriction(self, rows: Mat) -> Mat:
        """Matrix of Phi on a Phi-stable row space given by an RREF basis."""
        pivots = []
        for row in rows:
            for j, x in enumerate(row):
                if x != 0:
                    pivots.append(j)
                    break
        images = tuple(linalg.mat_vec(self.phi, v) for v in rows)
        return tuple(tuple(img[j] for j in pivots) for img in images)

    def eigen_multiplicities(self, rows: Mat) -> list[tuple[str, int, int]]:
        """(family id, twist, multiplicity) of Phi restricted to a stable
        subspace, via generalized eigenspace ranks."""
        rows = linalg.rref(rows)
        r = len(rows)
        if r == 0:
            return []
        restr = self.restriction(rows)
        out = []
        mult_sum = 0
        seen = set()
        for blk in self.basis:
            lam = self.eigenvalue(blk)
            if lam in seen:
                continue
            seen.add(lam)
            shifted = linalg.mat_sub(restr, linalg.mat_scale(lam, linalg.identity(r)))
            mult = r - linalg.rank(linalg.mat_pow(shifted, r))
            if mult:
                out.append((blk.family.id, blk.twist, mult))
                mult_sum += mult
        if mult_sum != r:
            raise RuntimeError("eigenvalue multiplicities do not fill the subspace")
        return out

    def t_n_concrete(self, rows: Mat) -> Fraction:
        """Newton slope of a Phi,N-stable subspace.

        Each generalized eigenvalue a_F * p^t contributes, with its
        multiplicity, t_base(F) + t * [K:Qp].
        """
        total = Fraction(0)
        cfg = self.spec.config
        for fam_id, twist, mult in self.eigen_multiplicities(rows):
            total += mult * (self.spec.family(fam_id).t_base + twist * cfg.deg_K_Qp)
        return total


def realize_matrices(
    spec: ModuleSpec,
    edges: tuple[ModificationEdge, ...] = (),
    seeds: dict[str, Fraction] | None = None,
) -> ConcreteRealization:
    """Exact rational (Phi, N) realizing the spec; restricted to h = 1."""
    for fam in spec.families:
        if fam.h != 1:
            raise ValueError("concrete layer requires h=1")
    if seeds is None:
        seeds = _default_seeds(spec)
    basis = tuple(spec.blocks())
    n = len(basis)
    p = spec.config.p
    index = {(blk.summand, blk.k): i for i, blk in enumerate(basis)}
    phi = [[Fraction(0)] * n for _ in range(n)]
    nmat = [[Fraction(0)] * n for _ in range(n)]
    edge_by_src = {e.src: e for e in edges}
    for j, blk in enumerate(basis):
        lam = seeds[blk.family.id] * Fraction(p) ** blk.twist
        phi[j][j] = lam
        e = edge_by_src.get(blk.summand)
        if e is not None and blk.k >= e.alignment:
            tgt = index[(e.dst, blk.k - e.alignment)]
            phi[tgt][j] = lam
        if blk.k > 0:
            below = index[(blk.summand, blk.k - 1)]
            nmat[below][j] = Fraction(1)
    phi_m = tuple(tuple(row) for row in phi)
    nmat_m = tuple(tuple(row) for row in nmat)
    lhs = linalg.mat_mul(nmat_m, phi_m)
    rhs = linalg.mat_scale(Fraction(p), linalg.mat_mul(phi_m, nmat_m))
    if lhs != rhs:
        raise RuntimeError("realization violates N*Phi = p*Phi*N")
    return ConcreteRealization(spec, tuple(edges), dict(seeds), basis, phi_m, nmat_m)
