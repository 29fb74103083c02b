"""Subgroups of the projective linear group generated by orbit maps.

The closure of a generator set is computed by breadth-first multiplication;
since the relevant subgroups are tiny (orders 3, 12, 24, 60, plus subfield
copies) compared to the full group, classification mostly needs an early
exit: once the closure outgrows every proper possibility it must be the
whole group, and the exact order follows from the group-order formula
rather than from enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .factorisation import Factorisation
from .field import FiniteField, is_prime
from .projline import Mobius, identity_map, orbit_map


class CapExceededError(RuntimeError):
    """Exact closure grew beyond the caller's cap."""


class OutOfRangeError(ValueError):
    """Argument outside the supported range."""


class WrongCharacteristicError(ValueError):
    """Operation requires characteristic 2."""


def psl_order(ctx: FiniteField) -> int:
    q = ctx.q
    return q * (q * q - 1) // gcd(2, q - 1)


def full_exit_threshold(ctx: FiniteField) -> int:
    """Largest proper-subgroup order to rule out before declaring fullness.

    Valid for subgroups generated by conjugates of the base map, which
    carry at least four order-3 elements: that excludes the dihedral and
    point-stabiliser families (their order-3 supply is too small when
    q = 2 mod 3), leaving A4, S4, A5 and projective groups over subfields.
    """
    p, l, q = ctx.p, ctx.l, ctx.q
    bound = 60
    for r in range(1, l):
        if l % r == 0:
            qq = p**r
            bound = max(bound, qq * (qq * qq - 1))
    return bound


@dataclass
class GeneratedSubgroup:
    generators: list[Mobius]
    elements: frozenset[Mobius] | None
    order: int
    order3_count: int | None
    orbits: list[list[int]]
    full_group: bool = False


def _point_orbits(ctx: FiniteField, gens: list[Mobius]) -> list[list[int]]:
    n = ctx.q + 1
    maps = gens + [g.inverse() for g in gens]
    seen = [False] * n
    orbits = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        orbit = [start]
        frontier = [start]
        while frontier:
            nxt = []
            for x in frontier:
                for g in maps:
                    y = g(x)
                    if not seen[y]:
                        seen[y] = True
                        orbit.append(y)
                        nxt.append(y)
            frontier = nxt
        orbits.append(sorted(orbit))
    return orbits


def is_transitive(ctx: FiniteField, gens: list[Mobius]) -> bool:
    """Single orbit on the projective line; needs no subgroup closure."""
    n = ctx.q + 1
    maps = gens + [g.inverse() for g in gens]
    seen = [False] * n
    seen[n - 1] = True  # start from infinity
    frontier = [n - 1]
    count = 1
    while frontier:
        nxt = []
        for x in frontier:
            for g in maps:
                y = g(x)
                if not seen[y]:
                    seen[y] = True
                    count += 1
                    nxt.append(y)
        frontier = nxt
    return count == n


def generate_subgroup(
    ctx: FiniteField,
    gens: list[Mobius],
    cap: int = 250_000,
    stop_when_full: bool = False,
) -> GeneratedSubgroup:
    """Breadth-first closure of gens under composition.

    With stop_when_full, the search stops as soon as the closure exceeds
    full_exit_threshold and reports the whole group with its order given by
    the order formula; this is only sound for generators that are
    conjugates of the base map.  Exact closures beyond cap raise.
    """
    ident = identity_map(ctx)
    step = list(dict.fromkeys(list(gens) + [g.inverse() for g in gens]))
    seen = {ident}
    frontier = [ident]
    threshold = full_exit_threshold(ctx) if stop_when_full else None
    while frontier:
        nxt = []
        for h in frontier:
            for g in step:
                x = g.compose(h)
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
                    if threshold is not None and len(seen) > threshold:
                        return GeneratedSubgroup(
                            list(gens),
                            None,
                            psl_order(ctx),
                            None,
                            _point_orbits(ctx, list(gens)),
                            full_group=True,
                        )
                    if len(seen) > cap:
                        raise CapExceededError(f"closure exceeded cap {cap}")
        frontier = nxt
    order3 = sum(
        1 for g in seen if g != ident and g.compose(g).compose(g) == ident
    )
    return GeneratedSubgroup(
        list(gens),
        frozenset(seen),
        len(seen),
        order3,
        _point_orbits(ctx, list(gens)),
        full_group=len(seen) == psl_order(ctx),
    )


@dataclass
class SubgroupClass:
    tag: str  # C3, A4, S4, A5, FullPSL or Other
    order: int


def classify_subgroup(group: GeneratedSubgroup, ctx: FiniteField) -> SubgroupClass:
    """Order-based classification, valid for closures of base-map conjugates.

    For odd prime q the possible proper closures are exactly A4, S4 and A5,
    so the order pins the type; everything larger is the whole group.  For
    proper prime powers, subfield groups can appear and come back as Other
    with their order.
    """
    if group.full_group:
        return SubgroupClass("FullPSL", psl_order(ctx))
    order = group.order
    tags = {3: "C3", 12: "A4", 24: "S4", 60: "A5"}
    if order == psl_order(ctx):
        return SubgroupClass("FullPSL", order)
    if order in tags:
        return SubgroupClass(tags[order], order)
    return SubgroupClass("Other", order)


def a4_pair_census(fact: Factorisation, max_q: int = 29) -> dict:
    """Count unordered factor pairs whose two orbit maps lie in a common A4.

    The generated subgroup of such a pair has order 12.  Also reports the
    group-theoretic count of A4 copies, q(q^2-1)/24, for display.  Odd
    prime q up to max_q only; the sweep is quadratic in the factor count.
    """
    ctx = fact.ctx
    q = ctx.q
    if not (is_prime(q) and q % 2 == 1 and q <= max_q):
        raise OutOfRangeError(f"census supports odd primes <= {max_q}, got {q}")
    maps = [orbit_map(ctx, *f.label) for f in fact.factors]
    count = 0
    nf = len(maps)
    for i in range(nf):
        for j in range(i + 1, nf):
            g = generate_subgroup(ctx, [maps[i], maps[j]], stop_when_full=True)
            if g.order == 12:
                count += 1
    return {
        "a4_pair_count": count,
        "expected_copies": q * (q * q - 1) // 24,
    }


def char2_a4_a5_presence(ctx: FiniteField) -> dict:
    """Whether the full group contains A4/A5, via quadratic solvability.

    In characteristic 2 an A4 subgroup exists iff x^2 + x = 1 has a
    solution; A5 additionally needs y^2 + z^2 = -1 solvable, which is
    checked by scanning rather than assumed.
    """
    if ctx.p != 2:
        raise WrongCharacteristicError("requires characteristic 2")
    has_a4 = bool(ctx.solve_quadratic(1, 1, 1))  # x^2 + x + 1 = 0
    neg_one = ctx.neg(1)
    has_sum = False
    for y in ctx.elements():
        z2 = ctx.sub(neg_one, ctx.mul(y, y))
        if ctx.sqrt(z2) is not None:
            has_sum = True
            break
    return {"has_a4": has_a4, "has_a5": has_a4 and has_sum}
