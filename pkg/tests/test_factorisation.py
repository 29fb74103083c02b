import io
import math

import pytest

from trifactor.factorisation import (
    BadResidueError,
    build_factorisation,
    build_one_factor,
    dumps_factorisation,
    load_factorisation,
    verify_partition,
)
from trifactor.field import field
from trifactor.projline import AlphaZeroError


def test_base_factor_q2():
    ctx = field(2)
    f = build_one_factor(ctx, 1, 0)
    assert f.edges == ((0, 1, 2),)


def test_base_factor_q5():
    ctx = field(5)
    f = build_one_factor(ctx, 1, 0)
    assert f.edges == ((0, 1, 5), (2, 3, 4))


def test_duplicate_label_identity_q5():
    ctx = field(5)
    # (-1, 1) = (4, 1) produces the same factor as (1, 0)
    assert build_one_factor(ctx, 4, 1).edges == build_one_factor(ctx, 1, 0).edges


def test_bad_residue_rejected():
    with pytest.raises(BadResidueError):
        build_one_factor(field(7), 1, 0)
    with pytest.raises(BadResidueError):
        build_factorisation(field(13))
    with pytest.raises(AlphaZeroError):
        build_one_factor(field(5), 0, 1)


def test_factor_counts():
    assert len(build_factorisation(field(2))) == 1
    assert len(build_factorisation(field(5))) == 10
    assert len(build_factorisation(field(2, 3))) == 28
    assert len(build_factorisation(field(11))) == 55


def test_each_factor_is_a_perfect_matching():
    for p, l in [(2, 1), (5, 1), (2, 3), (11, 1)]:
        ctx = field(p, l)
        fact = build_factorisation(ctx)
        n = ctx.q + 1
        for f in fact.factors:
            assert len(f.edges) == n // 3
            covered = [v for e in f.edges for v in e]
            assert sorted(covered) == list(range(n))


def test_every_factor_hit_by_exactly_two_labels():
    for p, l in [(5, 1), (2, 3), (11, 1)]:
        fact = build_factorisation(field(p, l))
        counts = {}
        for idx in fact.label_map.values():
            counts[idx] = counts.get(idx, 0) + 1
        assert set(counts.values()) == {2}
        # and the two labels are related by (a, b) -> (-a, a+b)
        ctx = fact.ctx
        for (a, b), idx in fact.label_map.items():
            dual = (ctx.neg(a), ctx.add(a, b))
            assert fact.label_map[dual] == idx


def test_canonical_labels_are_first_in_enumeration_order():
    fact = build_factorisation(field(5))
    assert fact.base_index == 0
    assert fact.factors[0].label == (1, 0)
    seen = []
    for a in range(1, 5):
        for b in range(5):
            idx = fact.label_map[(a, b)]
            if idx == len(seen):
                seen.append((a, b))
                assert fact.factors[idx].label == (a, b)


def test_verify_partition_counts():
    for p, l, n_edges in [(5, 1, 20), (11, 1, 220), (2, 1, 1)]:
        fact = build_factorisation(field(p, l))
        rep = verify_partition(fact)
        assert rep.ok
        assert rep.total_edges == n_edges == math.comb(p**l + 1, 3)


def test_verify_partition_detects_damage():
    fact = build_factorisation(field(5))
    # clone with one factor's edge list corrupted to duplicate another's edge
    from trifactor.factorisation import Factorisation, OneFactor

    broken = [
        OneFactor(f.label, f.edges if i != 3 else fact.factors[0].edges)
        for i, f in enumerate(fact.factors)
    ]
    rep = verify_partition(Factorisation(fact.ctx, broken, dict(fact.label_map)))
    assert not rep.ok
    assert rep.duplicates and rep.missing


def test_dump_round_trip():
    for p, l in [(5, 1), (2, 3)]:
        fact = build_factorisation(field(p, l))
        text = dumps_factorisation(fact)
        again = load_factorisation(text)
        assert again == fact


def test_dump_human_variant_uses_inf():
    fact = build_factorisation(field(2))
    text = dumps_factorisation(fact, human=True)
    assert "inf" in text
    assert load_factorisation(text) == fact


def test_dump_header():
    fact = build_factorisation(field(2, 3))
    first = dumps_factorisation(fact).splitlines()[0]
    assert first == "q=8 p=2 l=3 modulus=1,1,0,1"


def test_load_rejects_wrong_modulus():
    fact = build_factorisation(field(5))
    text = dumps_factorisation(fact).replace("modulus=0,1", "modulus=1,1")
    with pytest.raises(ValueError):
        load_factorisation(text)


def test_load_accepts_file_handle():
    fact = build_factorisation(field(5))
    fh = io.StringIO(dumps_factorisation(fact))
    assert load_factorisation(fh) == fact
