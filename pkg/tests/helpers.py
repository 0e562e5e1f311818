"""Shared random generators for the check suites.

All generators are driven by an explicit random.Random so that every test
run is reproducible from its seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from filtadm.model import Config, Family, ModuleSpec, Summand, WeightProfile, t_n
from filtadm.ordering import canonical_order, type_components


def random_spec(rng: random.Random, max_dim: int = 6, max_summands: int = 3,
                h_choices=(1,)) -> ModuleSpec | None:
    """Random canonically ordered spec, or None when the draw is oversized."""
    deg_k_l = rng.choice((1, 1, 2))
    deg_l_qp = rng.choice((1, 1, 2))
    cfg = Config(
        p=rng.choice((2, 3)),
        deg_K_Qp=deg_k_l * deg_l_qp,
        deg_L_Qp=deg_l_qp,
        deg_K_L=deg_k_l,
    )
    nfam = rng.randint(1, 2)
    fams = tuple(
        Family(
            f"F{i}",
            rng.choice(h_choices),
            Fraction(rng.randint(-4, 4), rng.choice((1, 2, 3, 4))),
        )
        for i in range(nfam)
    )
    summands = tuple(
        Summand(f"F{rng.randrange(nfam)}", rng.randint(0, 2), rng.randint(1, 3))
        for _ in range(rng.randint(1, max_summands))
    )
    spec = ModuleSpec(cfg, fams, summands)
    if not (2 <= spec.dimension <= max_dim):
        return None
    return canonical_order(spec)[0]


def random_single_component_spec(
    rng: random.Random, max_dim: int = 6
) -> ModuleSpec | None:
    """Random spec whose summands form one same-type component."""
    cfg = Config(p=rng.choice((2, 3)))
    fam = Family("F", 1, Fraction(rng.randint(-2, 2)))
    summands = [Summand("F", 0, rng.randint(1, 3))]
    for _ in range(rng.randint(0, 2)):
        prev_top = max(s.l + s.b - 1 for s in summands)
        summands.append(Summand("F", rng.randint(0, prev_top), rng.randint(1, 3)))
    spec = ModuleSpec(cfg, (fam,), tuple(summands))
    if not (2 <= spec.dimension <= max_dim):
        return None
    spec = canonical_order(spec)[0]
    if len(type_components(spec)) != 1:
        return None
    return spec


def random_profile(rng: random.Random, spec: ModuleSpec) -> WeightProfile:
    d1 = spec.dimension
    rows = tuple(
        tuple(sorted(rng.sample(range(-6, 8), d1)))
        for _ in range(spec.config.deg_L_Qp)
    )
    return WeightProfile(rows)


def engineered_profile(rng: random.Random, spec: ModuleSpec) -> WeightProfile | None:
    """Profile whose total weight sum hits t_N exactly (when integral)."""
    cfg = spec.config
    target = t_n(spec) / cfg.deg_K_L
    if target.denominator != 1:
        return None
    d1 = spec.dimension
    rows = []
    for _ in range(cfg.deg_L_Qp - 1):
        start = rng.randint(-5, 2)
        rows.append(tuple(sorted(rng.sample(range(start, start + 12), d1))))
    rem = int(target) - sum(sum(r) for r in rows)
    x = (rem - d1 * (d1 - 1) // 2) // d1
    row = [x + i for i in range(d1)]
    row[-1] += rem - sum(row)
    if any(a >= b for a, b in zip(row, row[1:])):
        return None
    rows.append(tuple(row))
    return WeightProfile(tuple(rows))


def instance_stream(seed: int, count: int, engineered_share: float = 0.5):
    """(spec, profile) pairs for the equivalence and pipeline suites."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        spec = random_spec(rng)
        if spec is None:
            continue
        if rng.random() < engineered_share:
            prof = engineered_profile(rng, spec)
            if prof is None:
                continue
        else:
            prof = random_profile(rng, spec)
        out.append((spec, prof))
    return out
