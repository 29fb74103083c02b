"""One-factors and the full 1-factorisation of K^3_{q+1}.

A one-factor with label (a, b) is the orbit partition of orbit_map(a, b):
triples {x, m(x), m^-1(x)} covering every point exactly once.  Ranging over
all labels (a in F*, b in F) and deduplicating by edge set yields a
1-factorisation with q(q-1)/2 distinct factors; each factor is produced by
exactly two labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Iterable, TextIO

from .field import FiniteField, field
from .projline import AlphaZeroError, orbit_map

Edge = tuple[int, int, int]


class BadResidueError(ValueError):
    """q is not congruent to 2 mod 3, so orbits need not be triples."""


def require_residue(q: int) -> None:
    if q % 3 != 2:
        raise BadResidueError(f"q={q} is not 2 mod 3")


class OneFactor:
    """A perfect matching of the q+1 points by triples, with its label."""

    __slots__ = ("label", "edges", "_pairs")

    def __init__(self, label: tuple[int, int], edges: tuple[Edge, ...]):
        self.label = label
        self.edges = edges
        self._pairs = None

    def pair_set(self) -> frozenset[tuple[int, int]]:
        """All vertex pairs covered by some edge (q+1 of them)."""
        if self._pairs is None:
            pairs = []
            for x, y, z in self.edges:
                pairs.append((x, y))
                pairs.append((x, z))
                pairs.append((y, z))
            self._pairs = frozenset(pairs)
        return self._pairs

    def __eq__(self, other):
        return isinstance(other, OneFactor) and self.edges == other.edges

    def __hash__(self):
        return hash(self.edges)

    def __repr__(self):
        return f"OneFactor(label={self.label}, edges={len(self.edges)})"


def _orbit_edges(perm: list[int], n: int) -> tuple[Edge, ...]:
    edges = []
    seen = bytearray(n)
    for x in range(n):
        if seen[x]:
            continue
        y = perm[x]
        z = perm[y]
        assert perm[z] == x and x != y and y != z and x != z
        seen[x] = seen[y] = seen[z] = 1
        a, b, c = sorted((x, y, z))
        edges.append((a, b, c))
    return tuple(edges)


def build_one_factor(ctx: FiniteField, a: int, b: int) -> OneFactor:
    """Orbit partition of orbit_map(a, b); every orbit is a triple."""
    if a == 0:
        raise AlphaZeroError("label scale must be nonzero")
    require_residue(ctx.q)
    perm = orbit_map(ctx, a, b).permutation()
    return OneFactor((a, b), _orbit_edges(perm, ctx.q + 1))


class Factorisation:
    """All distinct one-factors, plus the label -> factor index map."""

    def __init__(self, ctx: FiniteField, factors: list[OneFactor],
                 label_map: dict[tuple[int, int], int]):
        self.ctx = ctx
        self.factors = factors
        self.label_map = label_map

    def __len__(self):
        return len(self.factors)

    def __eq__(self, other):
        return (
            isinstance(other, Factorisation)
            and self.ctx.p == other.ctx.p
            and self.ctx.l == other.ctx.l
            and [f.edges for f in self.factors] == [f.edges for f in other.factors]
            and [f.label for f in self.factors] == [f.label for f in other.factors]
        )

    @property
    def base_index(self) -> int:
        """Index of the factor labelled (1, 0); always 0 by construction."""
        return self.label_map[(1, 0)]

    def factor(self, a: int, b: int) -> OneFactor:
        return self.factors[self.label_map[(a, b)]]


def build_factorisation(ctx: FiniteField) -> Factorisation:
    """Build every labelled factor and deduplicate by edge-set equality.

    The duplicate-label identity (each factor arises from exactly two
    labels) is discovered here, not assumed; the canonical label of a
    factor is the first one met in enumeration order.
    """
    require_residue(ctx.q)
    q = ctx.q
    n = q + 1
    factors: list[OneFactor] = []
    label_map: dict[tuple[int, int], int] = {}
    by_edges: dict[tuple[Edge, ...], int] = {}
    for a in range(1, q):
        for b in range(q):
            perm = orbit_map(ctx, a, b).permutation()
            edges = _orbit_edges(perm, n)
            idx = by_edges.get(edges)
            if idx is None:
                idx = len(factors)
                by_edges[edges] = idx
                factors.append(OneFactor((a, b), edges))
            label_map[(a, b)] = idx
    return Factorisation(ctx, factors, label_map)


@dataclass
class PartitionReport:
    total_edges: int
    expected_edges: int
    duplicates: list[Edge] = dc_field(default_factory=list)
    missing: list[Edge] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.total_edges == self.expected_edges
            and not self.duplicates
            and not self.missing
        )


def verify_partition(fact: Factorisation) -> PartitionReport:
    """Check the factors partition all C(q+1, 3) triples exactly once."""
    n = fact.ctx.q + 1
    expected = math.comb(n, 3)
    seen: set[Edge] = set()
    duplicates = []
    total = 0
    for f in fact.factors:
        for e in f.edges:
            total += 1
            if e in seen:
                duplicates.append(e)
            else:
                seen.add(e)
    missing = []
    if len(seen) != expected:
        for e in combinations(range(n), 3):
            if e not in seen:
                missing.append(e)
                if len(missing) >= 10:
                    break
    return PartitionReport(total, expected, duplicates, missing)


# -- text dump / load ------------------------------------------------------


def dump_factorisation(fact: Factorisation, fh: TextIO, human: bool = False) -> None:
    """Write the factorisation in the line-oriented text format.

    Header, then one block per factor with its canonical label and edges as
    point indices.  The human variant prints infinity as "inf" instead of
    its index q.
    """
    ctx = fact.ctx
    fh.write(
        f"q={ctx.q} p={ctx.p} l={ctx.l} "
        f"modulus={','.join(str(c) for c in ctx.modulus)}\n"
    )
    inf_text = "inf" if human else str(ctx.q)
    for idx, f in enumerate(fact.factors):
        a, b = f.label
        fh.write(
            f"factor {idx} alpha={ctx.element_str(a)} beta={ctx.element_str(b)}\n"
        )
        for edge in f.edges:
            fh.write(" ".join(inf_text if v == ctx.q else str(v) for v in edge) + "\n")


def dumps_factorisation(fact: Factorisation, human: bool = False) -> str:
    import io

    buf = io.StringIO()
    dump_factorisation(fact, buf, human=human)
    return buf.getvalue()


def load_factorisation(source: TextIO | str | Iterable[str]) -> Factorisation:
    """Round-trip loader for the dump format."""
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = [ln.rstrip("\n") for ln in source]
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise ValueError("empty dump")
    header = dict(part.split("=", 1) for part in lines[0].split())
    q = int(header["q"])
    ctx = field(int(header["p"]), int(header["l"]))
    if ctx.q != q:
        raise ValueError(f"header q={q} does not match p^l={ctx.q}")
    if header["modulus"] != ",".join(str(c) for c in ctx.modulus):
        raise ValueError("modulus in dump does not match the canonical modulus")

    factors: list[OneFactor] = []
    label_map: dict[tuple[int, int], int] = {}
    label: tuple[int, int] | None = None
    edges: list[Edge] = []

    def flush():
        if label is not None:
            factors.append(OneFactor(label, tuple(sorted(edges))))

    for ln in lines[1:]:
        if ln.startswith("factor "):
            flush()
            parts = ln.split()
            a = ctx.parse_element(parts[2].split("=", 1)[1])
            b = ctx.parse_element(parts[3].split("=", 1)[1])
            label = (a, b)
            label_map[label] = int(parts[1])
            edges = []
        else:
            vals = tuple(
                sorted(q if tok == "inf" else int(tok) for tok in ln.split())
            )
            if len(vals) != 3:
                raise ValueError(f"bad edge line: {ln!r}")
            edges.append(vals)  # type: ignore[arg-type]
    flush()
    return Factorisation(ctx, factors, label_map)
