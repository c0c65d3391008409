"""Implications: validity, support and confidence, bases and core bounds.

All measures are exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _bits
from .context import ContextError, FormalContext, is_induced_subcontext
from .lattice import Concept, lectic_key, next_closure

__all__ = [
    "Implication",
    "ImplicationMeasures",
    "BoundsReport",
    "TheoryReport",
    "holds",
    "measures",
    "implication_closure",
    "forward_chain",
    "canonical_base",
    "proper_premises",
    "canonical_direct_base",
    "core_implication_bounds",
    "iceberg_concepts",
    "theory_relation_check",
    "format_implication",
    "format_implications",
    "bounds_to_csv",
]


class Implication(NamedTuple):
    """``premise -> conclusion`` as attribute bitmasks of some context."""

    premise: int
    conclusion: int


class ImplicationMeasures(NamedTuple):
    support: Fraction
    confidence: Fraction


def holds(K: FormalContext, imp: Implication) -> bool:
    """Every object having all premise attributes has all conclusion attributes."""
    return not imp.conclusion & ~K.attribute_closure(imp.premise)


def measures(K: FormalContext, imp: Implication) -> ImplicationMeasures:
    """Support ``|(A+B)'| / |G|`` and confidence ``|(A+B)'| / |A'|``.

    Confidence is 1 when ``A'`` is empty, support is 1 when ``G`` is empty.
    """
    both = K.down(imp.premise | imp.conclusion).bit_count()
    prem = K.down(imp.premise).bit_count()
    n = K.n_objects
    support = Fraction(both, n) if n else Fraction(1)
    confidence = Fraction(both, prem) if prem else Fraction(1)
    return ImplicationMeasures(support, confidence)


def implication_closure(implications: Iterable[Implication], X: int) -> int:
    """Smallest superset of ``X`` respecting every implication."""
    imps = list(implications)
    changed = True
    while changed:
        changed = False
        for P, C in imps:
            if not P & ~X and C & ~X:
                X |= C
                changed = True
    return X


def forward_chain(implications: Iterable[Implication], X: int) -> int:
    """One simultaneous pass: add conclusions of all premises contained in ``X``."""
    out = X
    for P, C in implications:
        if not P & ~X:
            out |= C
    return out


def canonical_base(K: FormalContext) -> list[Implication]:
    """Duquenne-Guigues base ``{P -> P''}`` over all pseudo-intents ``P``.

    Pseudo-intents come out in lectic order from next_closure run on the
    closure operator of the implications found so far.
    """
    base: list[Implication] = []
    n = K.n_attributes
    top = K.all_attributes
    A = 0
    while True:
        closed = K.attribute_closure(A)
        if closed != A:
            base.append(Implication(A, closed))
        if A == top:
            break
        A = next(
            next_closure(lambda X: implication_closure(base, X), n, start=A),
            None,
        )
        if A is None:
            break
    return base


def _minimal_sets(masks: Iterable[int]) -> list[int]:
    out: list[int] = []
    for m in sorted(set(masks), key=int.bit_count):
        if not any(k & ~m == 0 for k in out):
            out.append(m)
    return out


def _minimal_transversals(edges: list[int]) -> list[int]:
    edges = _minimal_sets(edges)
    if 0 in edges:
        return []
    transversals = [0]
    for E in edges:
        nxt = []
        for t in transversals:
            if t & E:
                nxt.append(t)
            else:
                nxt.extend(t | 1 << e for e in _bits.iter_bits(E))
        transversals = _minimal_sets(nxt)
    return transversals


def proper_premises(K: FormalContext, attribute: int) -> list[int]:
    """Proper premises for ``attribute``: minimal ``A`` (not containing it) with it in ``A''``.

    These are the minimal transversals of the complements of the object
    intents that lack the attribute.
    """
    bit = 1 << attribute
    top = K.all_attributes & ~bit
    edges = [top & ~row for row in K.rows if not row & bit]
    return _minimal_transversals(edges)


def canonical_direct_base(K: FormalContext) -> list[Implication]:
    """Proper premises ``A`` with conclusions ``A'' \\ (A + union of B'' for B < A)``."""
    conclusions: dict[int, int] = {}
    for m in range(K.n_attributes):
        for A in proper_premises(K, m):
            conclusions[A] = conclusions.get(A, 0) | 1 << m
    n = K.n_attributes
    premises = sorted(conclusions, key=lambda A: (A.bit_count(), lectic_key(A, n)))
    return [Implication(A, conclusions[A]) for A in premises]


@dataclass(frozen=True)
class BoundsReport:
    """Support/confidence estimates in ``K`` for an implication valid in a core ``S``.

    ``confidence_one`` is set when the premise has at least ``p`` attributes;
    ``confidence_one_restricted`` additionally requires premise and
    conclusion together to have ``p``.  ``exact_support`` is set when premise
    plus conclusion reach ``p``.  ``checks`` compares every bound and claim
    with the measures computed directly in ``K``.
    """

    implication: Implication
    lower_support: Fraction
    upper_support: Fraction
    lower_confidence: Fraction
    confidence_one: bool
    confidence_one_restricted: bool
    exact_support: bool
    exact_support_value: Fraction | None
    support: Fraction
    confidence: Fraction
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return all(self.checks.values())


def core_implication_bounds(
    K: FormalContext, S: FormalContext, p: int, imp: Implication, q: int | None = None
) -> BoundsReport:
    """Bound the measures in ``K`` of an implication valid in the induced sub-context ``S``.

    ``imp`` is over the attributes of ``S``.  The support and confidence
    bounds hold for any induced sub-context; the exactness flags rely on
    ``S`` being the core for parameter ``p`` on the object side.  If ``q`` is
    given, ``S`` is checked to be the ``(p, q)``-core.
    """
    if not is_induced_subcontext(S, K):
        raise ContextError("S is not an induced sub-context of K")
    if q is not None:
        from .pqcore import compute_core

        if compute_core(K, p, q) != S:
            raise ContextError(f"S is not the ({p}, {q})-core of K")
    if not holds(S, imp):
        raise ContextError("implication is not valid in S")

    G, H = K.n_objects, S.n_objects
    removed = G - H
    both_J = S.down(imp.premise | imp.conclusion).bit_count()
    prem_J = S.down(imp.premise).bit_count()

    to_K = {i: K.attribute_index(name) for i, name in enumerate(S.attributes)}
    imp_K = Implication(_bits.remap(imp.premise, to_K), _bits.remap(imp.conclusion, to_K))
    direct = measures(K, imp_K)

    if G:
        lower = Fraction(both_J, G)
        upper = lower + Fraction(removed, G)
    else:
        lower = upper = Fraction(1)
    denom = prem_J + removed
    lower_conf = Fraction(both_J, denom) if denom else Fraction(1)
    conf_one = imp.premise.bit_count() >= p
    exact = (imp.premise | imp.conclusion).bit_count() >= p
    conf_one_r = conf_one and exact
    checks = {
        "lower_support": lower <= direct.support,
        "upper_support": direct.support <= upper,
        "lower_confidence": lower_conf <= direct.confidence,
    }
    if conf_one:
        checks["confidence_one"] = direct.confidence == 1
    if conf_one_r:
        checks["confidence_one_restricted"] = direct.confidence == 1
    if exact:
        checks["exact_support"] = direct.support == lower
    return BoundsReport(
        implication=imp,
        lower_support=lower,
        upper_support=upper,
        lower_confidence=lower_conf,
        confidence_one=conf_one,
        confidence_one_restricted=conf_one_r,
        exact_support=exact,
        exact_support_value=lower if exact else None,
        support=direct.support,
        confidence=direct.confidence,
        checks=checks,
    )


def iceberg_concepts(K: FormalContext, minsupp) -> list[Concept]:
    """Concepts whose extent covers at least a ``minsupp`` fraction of the objects.

    Runs next_closure on ``X -> X''`` for frequent ``X`` and ``X -> M``
    otherwise, which is again a closure operator, so infrequent branches are
    never expanded.
    """
    minsupp = Fraction(minsupp)
    if not 0 <= minsupp <= 1:
        raise ValueError("minsupp must lie in [0, 1]")
    need = math.ceil(minsupp * K.n_objects)
    top = K.all_attributes

    def closure(X: int) -> int:
        ext = K.down(X)
        return K.up(ext) if ext.bit_count() >= need else top

    out = []
    for B in next_closure(closure, K.n_attributes):
        A = K.down(B)
        if A.bit_count() >= need:
            out.append(Concept(A, B))
    return out


@dataclass
class TheoryReport:
    """Outcome of comparing the valid implications of ``K`` and a sub-context ``S``.

    Each ``*_counterexamples`` list holds premises (bitmasks over ``S``)
    witnessing a failed containment; ``None`` means the check did not apply.
    """

    exhaustive: bool
    premises_checked: int
    k_in_s: list[int] | None
    s_in_k: list[int] | None
    new_premise_bound: list[int] | None

    @property
    def ok(self) -> bool:
        return not any(x for x in (self.k_in_s, self.s_in_k, self.new_premise_bound))


def theory_relation_check(
    K: FormalContext,
    S: FormalContext,
    p: int | None = None,
    *,
    max_exhaustive: int = 10,
    samples: int = 2000,
    rng: np.random.Generator | int | None = 0,
) -> TheoryReport:
    """Compare ``Th(K)`` and ``Th(S)`` for an induced sub-context ``S``.

    Implications over the attributes of ``S`` are compared through the two
    closure operators, premise by premise:

    * ``k_in_s``: every implication valid in ``K`` stays valid in ``S``
      (applies when ``S`` keeps all attributes, e.g. objects were removed);
    * ``s_in_k``: every implication valid in ``S`` is valid in ``K``
      (applies when ``S`` keeps all objects, e.g. an attribute-core);
    * ``new_premise_bound``: with ``p`` given, implications valid in ``S``
      but not in ``K`` have fewer than ``p`` premise attributes.

    With more than ``max_exhaustive`` attributes, ``samples`` random premises
    are checked instead of all of them.
    """
    if not is_induced_subcontext(S, K):
        raise ContextError("S is not an induced sub-context of K")
    to_K = {i: K.attribute_index(name) for i, name in enumerate(S.attributes)}
    to_S = {k: i for i, k in to_K.items()}
    n_mask_K = _bits.remap(S.all_attributes, to_K)
    n = S.n_attributes
    exhaustive = n <= max_exhaustive
    if exhaustive:
        premises: Iterable[int] = range(1 << n)
    else:
        gen = np.random.default_rng(rng)
        premises = [
            _bits.from_indices(np.flatnonzero(gen.random(n) < 0.5).tolist()) for _ in range(samples)
        ]

    same_attrs = S.n_attributes == K.n_attributes
    same_objs = S.n_objects == K.n_objects
    k_in_s: list[int] | None = [] if same_attrs else None
    s_in_k: list[int] | None = [] if same_objs else None
    bound: list[int] | None = [] if p is not None else None
    count = 0
    for A in premises:
        count += 1
        in_S = S.attribute_closure(A)
        in_K = K.attribute_closure(_bits.remap(A, to_K)) & n_mask_K
        in_K_S = _bits.remap(in_K, to_S)
        if k_in_s is not None and in_K_S & ~in_S:
            k_in_s.append(A)
        if s_in_k is not None and in_S & ~in_K_S:
            s_in_k.append(A)
        if bound is not None and in_S & ~in_K_S and A.bit_count() >= p:
            bound.append(A)
    return TheoryReport(exhaustive, count, k_in_s, s_in_k, bound)


# text formats


def format_implication(K: FormalContext, imp: Implication) -> str:
    """``{a, b} -> {c}`` with names in context order."""

    def names(mask):
        return "{" + ", ".join(K.attributes[i] for i in _bits.iter_bits(mask)) + "}"

    return f"{names(imp.premise)} -> {names(imp.conclusion)}"


def format_implications(K: FormalContext, imps: Sequence[Implication]) -> str:
    return "".join(format_implication(K, imp) + "\n" for imp in imps)


def _frac(x: Fraction | None) -> str:
    if x is None:
        return ""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def bounds_to_csv(S: FormalContext, reports: Sequence[BoundsReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["premise", "conclusion", "supp", "conf", "lower_supp", "upper_supp", "lower_conf", "flags"]
    )
    for r in reports:
        flags = [k for k, on in (
            ("conf_one", r.confidence_one),
            ("conf_one_restricted", r.confidence_one_restricted),
            ("exact_supp", r.exact_support),
        ) if on]
        flags += [f"FAILED:{k}" for k, ok in r.checks.items() if not ok]
        imp = r.implication
        writer.writerow([
            " ".join(S.attributes[i] for i in _bits.iter_bits(imp.premise)),
            " ".join(S.attributes[i] for i in _bits.iter_bits(imp.conclusion)),
            _frac(r.support),
            _frac(r.confidence),
            _frac(r.lower_support),
            _frac(r.upper_support),
            _frac(r.lower_confidence),
            ";".join(flags),
        ])
    return buf.getvalue()
