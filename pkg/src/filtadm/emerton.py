"""Central-character unitarity and the shuffle valuation condition.

Each summand carries a descending sequence of gamma blocks: the block at
position j (0-based) has valuation v = t_N(top block twisted down j times)
divided by [K:L], strictly decreasing along the summand.  A candidate is a
shuffle of the per-summand sequences together with a contiguous cut into
groups; the pass condition demands, for every candidate and every group
prefix, that the prefix valuation mass dominates the matching weight mass,
with exact equality on the full module (the unitarity of the central
character).

Because shuffles preserve the within-summand order, the set of candidate
prefixes is exactly the set of top selections (take the first j_i blocks
of each summand), so the verdict is decided by the finite scan over those
selections; the explicit candidate enumeration is kept for reporting and
cross-validation, capped at 10 total blocks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .model import ModuleSpec, WeightProfile, fraction_to_str, t_n, validate_spec
from .ordering import require_canonical
from .subobjects import CapExceededError

__all__ = [
    "GammaBlock",
    "Candidate",
    "gamma_blocks",
    "enumerate_candidates",
    "EmertonVerdict",
    "check_emerton_condition",
    "candidate_table",
    "CANDIDATE_CAP",
]

CANDIDATE_CAP = 10


@dataclass(frozen=True)
class GammaBlock:
    origin: int          # summand index
    j: int               # position inside the summand, 0-based
    size: int            # dimension h of the underlying family
    v: Fraction          # valuation of the block's central character at p


@dataclass(frozen=True)
class Candidate:
    order: tuple[GammaBlock, ...]
    group_sizes: tuple[int, ...]    # blocks per group, sums to len(order)

    @property
    def beta(self) -> tuple[int, ...]:
        dims = []
        pos = 0
        for g in self.group_sizes:
            dims.append(sum(b.size for b in self.order[pos : pos + g]))
            pos += g
        return tuple(dims)

    def groups(self) -> list[tuple[GammaBlock, ...]]:
        out = []
        pos = 0
        for g in self.group_sizes:
            out.append(self.order[pos : pos + g])
            pos += g
        return out


def gamma_blocks(spec: ModuleSpec) -> list[tuple[GammaBlock, ...]]:
    """Per summand, the descending gamma-block sequence."""
    cfg = spec.config
    out = []
    for i, s in enumerate(spec.summands):
        fam = spec.family_of(i)
        seq = []
        for j in range(s.b):
            twist = s.l + s.b - 1 - j
            tn_block = fam.t_base + twist * cfg.deg_K_Qp
            seq.append(GammaBlock(i, j, fam.h, tn_block / cfg.deg_K_L))
        out.append(tuple(seq))
    return out


def _shuffles(sequences: list[tuple[GammaBlock, ...]]):
    nonempty = [s for s in sequences if s]
    if not nonempty:
        yield ()
        return
    for idx, seq in enumerate(nonempty):
        rest = nonempty[:idx] + [seq[1:]] + nonempty[idx + 1 :]
        head = seq[0]
        for tail in _shuffles(rest):
            yield (head, *tail)


def enumerate_candidates(
    spec: ModuleSpec, dedup: bool = True
) -> list[Candidate]:
    """All shuffles of the summand sequences with all contiguous cuts.

    Duplicates agreeing in group-size sequence and per-group block multiset
    are removed unless dedup is False.  Capped at 10 total blocks.
    """
    require_canonical(spec)
    seqs = gamma_blocks(spec)
    b = sum(len(s) for s in seqs)
    if b > CANDIDATE_CAP:
        raise CapExceededError(f"{b} blocks exceed the candidate cap {CANDIDATE_CAP}")
    out = []
    seen = set()
    for order in _shuffles(seqs):
        for cut_mask in itertools.product((False, True), repeat=b - 1):
            sizes = []
            run = 1
            for cut in cut_mask:
                if cut:
                    sizes.append(run)
                    run = 1
                else:
                    run += 1
            sizes.append(run)
            cand = Candidate(order, tuple(sizes))
            if dedup:
                key = tuple(
                    tuple(sorted((blk.v, blk.size) for blk in grp))
                    for grp in cand.groups()
                )
                if key in seen:
                    continue
                seen.add(key)
            out.append(cand)
    return out


@dataclass(frozen=True)
class EmertonVerdict:
    ok: bool
    failure: str | None = None          # "unitarity" | "prefix" | None
    selection: tuple[int, ...] | None = None   # top blocks taken per summand
    slack: Fraction | None = None
    unitarity_gap: Fraction = Fraction(0)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "failure": self.failure,
            "selection": list(self.selection) if self.selection else None,
            "slack": fraction_to_str(self.slack) if self.slack is not None else None,
            "unitarityGap": fraction_to_str(self.unitarity_gap),
        }


def check_emerton_condition(
    spec: ModuleSpec, profile: WeightProfile
) -> EmertonVerdict:
    """Unitarity plus prefix domination over every candidate.

    A candidate prefix takes the top j_i gamma blocks of each summand, so
    the scan runs over the selections (j_1, ..., j_s) in lexicographic
    order and reports the first violating one.
    """
    validate_spec(spec, profile)
    require_canonical(spec)
    cfg = spec.config
    gap = t_n(spec) - Fraction(cfg.deg_K_L * profile.total)
    if gap != 0:
        return EmertonVerdict(False, "unitarity", None, None, gap)
    seqs = gamma_blocks(spec)
    prefix_v = []
    for seq in seqs:
        acc = [Fraction(0)]
        for blk in seq:
            acc.append(acc[-1] + blk.v)
        prefix_v.append(acc)
    sizes = [spec.family_of(i).h for i in range(len(spec.summands))]
    ranges = [range(len(seq) + 1) for seq in seqs]
    for selection in itertools.product(*ranges):
        total_blocks = sum(selection)
        if total_blocks == 0 or total_blocks == sum(len(s) for s in seqs):
            continue
        weight_count = sum(j * sz for j, sz in zip(selection, sizes))
        lhs = sum(
            (prefix_v[i][j] for i, j in enumerate(selection)), Fraction(0)
        )
        slack = lhs - profile.prefix_sum(weight_count)
        if slack < 0:
            return EmertonVerdict(False, "prefix", tuple(selection), slack, gap)
    return EmertonVerdict(True, None, None, None, gap)


def candidate_table(
    spec: ModuleSpec, profile: WeightProfile, limit: int = 50
) -> list[dict]:
    """Per-candidate minimal prefix slack, for reporting."""
    cands = enumerate_candidates(spec)
    rows = []
    for cand in cands[:limit]:
        acc_v = Fraction(0)
        acc_w = 0
        min_slack = None
        pos = 0
        for g in cand.group_sizes[:-1]:
            grp = cand.order[pos : pos + g]
            pos += g
            acc_v += sum((b.v for b in grp), Fraction(0))
            acc_w += sum(b.size for b in grp)
            slack = acc_v - profile.prefix_sum(acc_w)
            if min_slack is None or slack < min_slack:
                min_slack = slack
        rows.append(
            {
                "beta": list(cand.beta),
                "order": [[b.origin, b.j] for b in cand.order],
                "minSlack": fraction_to_str(min_slack)
                if min_slack is not None
                else None,
            }
        )
    return rows
