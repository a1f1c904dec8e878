import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from a2boundary.group import (
    CompletionError,
    DatumError,
    Group,
    LengthError,
    knuth_bendix_complete,
    load_preset,
    parse_group_datum,
    shortlex_key,
)

SYMS = ["s0", "s0'", "s1", "s1'", "s2", "s2'"]


def test_preset_completes(group):
    assert group.rs.status == "complete"
    assert group.rs.safe_length is None
    assert group.q == 2


def test_relators_reduce_to_identity(group):
    for r in group.datum.relators:
        assert group.normal_form(group.rs.encode(r)) == ""


def test_panel_subgroups_have_q_plus_1_elements(group):
    for P in group.panel_subgroups:
        assert len(P) == 3


@pytest.mark.parametrize("t", [0, 1, 2])
def test_vertex_subgroup_order_21(group, t):
    # (q+1)(q^2+q+1) chambers at a vertex
    assert len(group.vertex_subgroup(t)) == 21


def test_vertex_subgroup_is_shortlex_sorted(group):
    H = group.vertex_subgroup(0)
    assert H == sorted(H, key=shortlex_key)
    assert H[0] == ""


def test_format_parse_roundtrip(group):
    w = group.normal_form(group.parse("s1 s0 s2"))
    assert group.format("") == "1"
    assert group.normal_form(group.parse(group.format(w))) == w


def _rand_word(rng, n):
    return " ".join(rng.choice(SYMS) for _ in range(n))


def test_group_axioms_on_random_elements(group):
    rng = random.Random(1)
    elems = [group.normal_form(group.parse(_rand_word(rng, rng.randint(0, 10)))) for _ in range(100)]
    for a in elems:
        assert group.multiply(a, group.invert(a)) == ""
        assert group.multiply(group.invert(a), a) == ""
        assert group.multiply(a, "") == a == group.multiply("", a)
    for a, b, c in zip(elems, elems[1:], elems[2:]):
        assert group.multiply(group.multiply(a, b), c) == group.multiply(a, group.multiply(b, c))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(SYMS), max_size=16))
def test_normal_form_idempotent(word):
    G = _group()
    w = G.normal_form(G.rs.encode(word))
    assert G.normal_form(w) == w
    assert G.rs.is_reduced(w)


_G = {}


def _group():
    if "g" not in _G:
        _G["g"] = Group.from_preset("paper-q2")
    return _G["g"]


def test_free_group_on_one_generator():
    d = parse_group_datum({
        "generators": ["a"],
        "relators": [],
        "panels": [
            {"type_pair": [0, 1], "generators": []},
            {"type_pair": [1, 2], "generators": []},
            {"type_pair": [2, 0], "generators": []},
        ],
        "q": 2,
    })
    rs = knuth_bendix_complete(d)
    assert rs.status == "complete"
    assert rs.reduce(rs.encode(["a", "a'", "a", "a"])) == rs.encode(["a", "a"])
    assert rs.reduce(rs.encode(["a'", "a"])) == ""


def _doc(**over):
    doc = load_preset().to_dict()
    doc.update(over)
    return doc


def test_missing_panel_is_rejected():
    doc = _doc()
    doc["panels"] = doc["panels"][:2]
    with pytest.raises(DatumError, match=r"missing panel type pair \[2, 0\]"):
        parse_group_datum(doc)


def test_bad_datum_inputs():
    with pytest.raises(DatumError, match="duplicate generator"):
        parse_group_datum(_doc(generators=["s0", "s0", "s2"]))
    with pytest.raises(DatumError, match="empty relator"):
        parse_group_datum(_doc(relators=[""]))
    with pytest.raises(DatumError, match="unknown symbol"):
        parse_group_datum(_doc(relators=["s0 t"]))
    with pytest.raises(DatumError):
        parse_group_datum(json.dumps(_doc(q=1)))


def test_panel_closure_of_wrong_order():
    # cyclic group of order 4 as a panel subgroup for q = 2
    d = parse_group_datum({
        "generators": ["a"],
        "relators": ["a a a a"],
        "panels": [
            {"type_pair": [0, 1], "generators": ["a"]},
            {"type_pair": [1, 2], "generators": ["a"]},
            {"type_pair": [2, 0], "generators": ["a"]},
        ],
        "q": 2,
    })
    with pytest.raises(DatumError, match="closure has 4 elements"):
        Group(d)


def test_bounded_confluent_system_refuses_long_words():
    d = load_preset()
    rs = knuth_bendix_complete(d, max_rules=100, max_overlap=6)
    assert rs.status == "bounded-confluent"
    assert rs.safe_length == 3
    rs.check_length(3)
    with pytest.raises(LengthError):
        rs.check_length(4)
    G = Group(d, rs=rs)
    with pytest.raises(LengthError):
        G.multiply(G.parse("s0 s1"), G.parse("s2 s1"))


def test_bounded_confluent_raises_on_unresolved_pair():
    with pytest.raises(CompletionError, match="unresolved critical pair"):
        knuth_bendix_complete(load_preset(), max_rules=20, max_overlap=8)


def test_unknown_preset():
    with pytest.raises(DatumError):
        load_preset("no-such-preset")


def test_spec_examples(group):
    n = lambda s: group.normal_form(group.parse(s))
    assert n("s1 s0 s1 s0") == n("s0 s1")
    assert group.invert(n("s0")) == n("s0 s0")
    assert group.subgroup_closure([""]) == [""]
    assert group.subgroup_closure([n("s0")]) == ["", n("s0"), n("s0'")]
    for g in ("s0", "s1", "s2"):
        assert group.rs.reduce(group.parse(f"{g} {g} {g}")) == ""


def test_critical_pairs_resolved_up_to_20():
    rs = knuth_bendix_complete(load_preset(), max_overlap=20)
    assert rs.status == "complete"
    assert next(iter(rs.critical_pairs(20)), None) is None
    assert all(shortlex_key(l) > shortlex_key(r) for l, r in rs.rules.items())
