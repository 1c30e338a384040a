"""Union information and synergy from conditional independence.

The union information of a source collection is computed by comparing
the true joint dependence of the pooled sources on the target against
the strongest dependence achievable by surrogate distributions in which
the pooled variables are conditionally independent across partition
blocks given the target:

    union = min( I_p(A; T),  max over partitions  I_q(A; T) )

where A is the union of the normalized sources and each surrogate q
keeps the target marginal and the per-block conditionals of p.  Synergy
is what the full set of predictor variables tells about the target
beyond that union.
"""

from __future__ import annotations

import itertools
import math
from types import MappingProxyType
from typing import Mapping

from .distribution import (
    JointDistribution,
    VariableSet,
    _check_vars,
    _marginal_pmf,
    _mi_lenient,
)
from .errors import ArgumentError, ConsistencyError
from .sources import (
    CiPartition,
    SourceCollection,
    enumerate_ci_partitions,
    normalize_sources,
)


class PidResult:
    """Immutable mapping from atom or measure labels to values in bits."""

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping[str, float]):
        cleaned: dict[str, float] = {}
        for label, value in entries.items():
            v = float(value)
            if not math.isfinite(v):
                raise ArgumentError(f"entry {label!r} is not finite: {value!r}")
            cleaned[str(label)] = v
        if not cleaned:
            raise ArgumentError("a result needs at least one entry")
        object.__setattr__(self, "entries", MappingProxyType(cleaned))

    def __setattr__(self, name, value):
        raise AttributeError("PidResult is immutable")

    def __getitem__(self, label: str) -> float:
        return self.entries[label]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def __repr__(self) -> str:
        body = ", ".join(f"{k}={v:.6f}" for k, v in self.entries.items())
        return f"PidResult({body})"

    def __eq__(self, other):
        if not isinstance(other, PidResult):
            return NotImplemented
        return dict(self.entries) == dict(other.entries)


def build_q(
    dist: JointDistribution, target: VariableSet, partition: CiPartition
) -> JointDistribution:
    """Surrogate joint over target and pooled variables for one partition.

    The surrogate keeps p's target marginal and, given each target
    state, draws every partition block independently from its true
    conditional:

        q(t, a) = p(t) * prod over blocks b of p(a_b | t)

    Blocks that overlap the target are consistent by construction,
    because conditioning on the full target pins their shared symbols.
    The result's variables are the union of target and pooled source
    variables in distribution order, with the original alphabets.
    """
    if len(target) == 0:
        raise ArgumentError("target must be non-empty")
    _check_vars(dist, target, "target")
    for b in partition.blocks:
        _check_vars(dist, b, "partition block")

    t_idx = target.indices
    pooled = sorted(set().union(*(set(b.indices) for b in partition.blocks)))
    vars_q = sorted(set(pooled) | set(t_idx))
    pos = {v: k for k, v in enumerate(vars_q)}

    p_t = _marginal_pmf(dist, t_idx)

    conds = []
    for b in partition.blocks:
        joint = _marginal_pmf(dist, tuple(b.indices) + t_idx)
        nb = len(b)
        table: dict[tuple, list[tuple[tuple, float]]] = {}
        for key, p in joint.items():
            bval, tval = key[:nb], key[nb:]
            table.setdefault(tval, []).append((bval, p / p_t[tval]))
        conds.append(table)

    q: dict[tuple, float] = {}
    for tval, pt in p_t.items():
        per_block = [table.get(tval, []) for table in conds]
        for combo in itertools.product(*per_block):
            outcome = [None] * len(vars_q)
            for v, s in zip(t_idx, tval):
                outcome[pos[v]] = s
            p = pt
            for (bval, pb), b in zip(combo, partition.blocks):
                p *= pb
                for v, s in zip(b.indices, bval):
                    outcome[pos[v]] = s
            key = tuple(outcome)
            q[key] = q.get(key, 0.0) + p

    return JointDistribution(
        tuple(dist.var_names[v] for v in vars_q),
        q,
        alphabets=tuple(dist.alphabets[v] for v in vars_q),
    )


def ci_union_information(
    dist: JointDistribution, target: VariableSet, collection: SourceCollection
) -> float:
    """Union information of a source collection about the target, in bits.

    The collection is normalized first, so duplicated or functionally
    redundant sources do not change the answer.
    """
    if len(target) == 0:
        raise ArgumentError("target must be non-empty")
    _check_vars(dist, target, "target")

    norm = normalize_sources(dist, collection)
    pooled = norm.union().indices
    i_p = _mi_lenient(dist, pooled, target.indices)

    vars_q = sorted(set(pooled) | set(target.indices))
    qa = [vars_q.index(v) for v in pooled]
    qt = [vars_q.index(v) for v in target.indices]

    best = -math.inf
    for part in enumerate_ci_partitions(norm):
        q = build_q(dist, target, part)
        best = max(best, _mi_lenient(q, qa, qt))

    return min(i_p, best)


def _source_variables(dist: JointDistribution, target: VariableSet) -> list[int]:
    return [i for i in range(dist.n_vars) if i not in target]


def ci_synergy(
    dist: JointDistribution,
    target: VariableSet,
    collection: SourceCollection | None = None,
) -> float:
    """Synergy of a collection: predictor information beyond the union.

    The minuend pools every non-target variable of the distribution
    together with the collection's own members.  For a lone source the
    result is therefore the conditional information the remaining
    predictors add on top of it, and it vanishes exactly when the
    collection already covers the target variables.  With ``collection``
    omitted, all non-target variables are used as singleton sources.
    """
    if len(target) == 0:
        raise ArgumentError("target must be non-empty")
    _check_vars(dist, target, "target")
    src = _source_variables(dist, target)
    if collection is None:
        if not src:
            raise ArgumentError("no predictor variables outside the target")
        collection = SourceCollection.singletons(src)
    minuend = sorted(set(src) | set(collection.union().indices))
    if not minuend:
        raise ArgumentError("no predictor variables outside the target")
    i_total = _mi_lenient(dist, minuend, target.indices)
    s = i_total - ci_union_information(dist, target, collection)
    if s < 0.0:
        if s < -1e-9:
            raise ConsistencyError(f"synergy came out {s}, beyond -1e-9")
        return 0.0
    return s


def ci_bivariate_decomposition(dist: JointDistribution, target: VariableSet) -> PidResult:
    """Full four-atom decomposition for exactly two predictor variables.

    Returns entries R, U1, U2, S along with I_cup and I_total.  U1 is
    the unique contribution of the lower-indexed predictor.  The atoms
    satisfy R + U1 + U2 + S = I(Y1,Y2; T) to within rounding.
    """
    if len(target) == 0:
        raise ArgumentError("target must be non-empty")
    _check_vars(dist, target, "target")
    src = _source_variables(dist, target)
    if len(src) != 2:
        raise ArgumentError(
            f"bivariate decomposition needs exactly two predictor variables, found {len(src)}"
        )
    y1, y2 = src
    i1 = _mi_lenient(dist, [y1], target.indices)
    i2 = _mi_lenient(dist, [y2], target.indices)
    i_total = _mi_lenient(dist, src, target.indices)
    icup = ci_union_information(dist, target, SourceCollection.of([y1], [y2]))

    s = i_total - icup
    u1 = icup - i2
    u2 = icup - i1
    r = i1 - u1

    total = r + u1 + u2 + s
    if abs(total - i_total) > 1e-9:
        raise ConsistencyError(
            f"atoms sum to {total!r} but the joint information is {i_total!r}"
        )
    return PidResult(
        {"R": r, "U1": u1, "U2": u2, "S": s, "I_cup": icup, "I_total": i_total}
    )
