"""Fusion systems: generation, saturation, collections, induced maps."""

import pytest
from hypothesis import given, settings, strategies as st

from loclab.groups import parse_group, subgroup_lattice, subgroup_view, sylow_p
from loclab.fusion import (
    FusionBuildError,
    FusionSystem,
    fusion_from_group,
    fusion_from_locality,
    validate_fusion_system,
)
from loclab.locality import locality_from_group

import oracles

S4_DOC = {"degree": 4, "generators": [[[1, 2]], [[1, 2, 3, 4]]]}
S5_DOC = {"degree": 5, "generators": [[[1, 2]], [[1, 2, 3, 4, 5]]]}
A5_DOC = {"degree": 5, "generators": [[[1, 2, 3]], [[3, 4, 5]]]}


@pytest.fixture(scope="module")
def s4():
    return parse_group(S4_DOC)


@pytest.fixture(scope="module")
def f_s4(s4):
    return fusion_from_group(s4, 2)


@pytest.fixture(scope="module")
def f_d8(s4):
    """Inner fusion of the Sylow 2-subgroup of S4 on itself."""
    s = sylow_p(s4, 2)
    return fusion_from_group(subgroup_view(s4, s.members), 2)


def labels_of(F, P):
    return {F._label(x) for x in P}


def find_subgroup(F, label_set):
    for P in F.subgroups:
        if labels_of(F, P) == label_set:
            return P
    raise AssertionError(f"no subgroup with labels {label_set}")


V4N_LABELS = {"()", "(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"}


def translated_hom_sets(F, to_ambient):
    """Rewrite hom sets through an index translation map."""
    out = {}
    for (P, Q), maps in F.hom_sets().items():
        Pa = tuple(sorted(to_ambient[i] for i in P))
        Qa = tuple(sorted(to_ambient[i] for i in Q))
        order = sorted(range(len(P)), key=lambda k: to_ambient[P[k]])
        out[(Pa, Qa)] = frozenset(
            tuple(to_ambient[m[k]] for k in order) for m in maps)
    return out


# ---------------------------------------------------------------------------
# generation against the brute-force oracle


def test_group_fusion_matches_oracle(s4, f_s4):
    s = sylow_p(s4, 2)
    assert f_s4.hom_sets() == oracles.group_fusion_hom_sets(s4, s.members)


def test_s4_p3_fusion_matches_oracle(s4):
    s = sylow_p(s4, 3)
    F = fusion_from_group(s4, 3)
    assert F.hom_sets() == oracles.group_fusion_hom_sets(s4, s.members)
    assert len(F.classes()) == 2
    assert F.is_saturated()


def test_locality_fusion_equals_group_fusion(s4, f_s4):
    """A locality on the centric radical family generates the same fusion
    system as the ambient group."""
    s = sylow_p(s4, 2)
    view = subgroup_view(s4, s.members)
    subs = [frozenset(view.tokens[i] for i in h.members)
            for h in subgroup_lattice(view)]
    v4n = next(P for P in subs
               if {s4.label(i) for i in P} == V4N_LABELS)
    d8 = next(P for P in subs if len(P) == 8)
    loc = locality_from_group(s4, 2, [v4n, d8])
    F_loc = fusion_from_locality(loc)
    assert translated_hom_sets(F_loc, loc.carrier) == f_s4.hom_sets()


def test_stored_tables_pass_validation(f_s4, f_d8):
    assert validate_fusion_system(f_s4) == []
    assert validate_fusion_system(f_d8) == []


# ---------------------------------------------------------------------------
# frozen structure of the fusion system of S4 at p = 2


def test_s4_class_count_and_saturation(f_s4):
    assert len(f_s4.subgroups) == 10
    assert len(f_s4.classes()) == 7
    assert f_s4.is_saturated()


def test_s4_aut_of_normal_v4_has_order_six(f_s4):
    v4n = find_subgroup(f_s4, V4N_LABELS)
    assert len(f_s4.isos(v4n, v4n)) == 6
    aut = f_s4.aut_group(v4n)
    assert aut.order == 6
    # nonabelian of order 6: it moves the three involutions transitively
    assert any(aut.mul(a, b) != aut.mul(b, a)
               for a in aut.indices() for b in aut.indices())


def test_s4_centric_and_radical_collections(f_s4):
    v4n = find_subgroup(f_s4, V4N_LABELS)
    top = f_s4.canon(f_s4.s)
    assert len(f_s4.centric_subgroups()) == 4
    assert f_s4.centric_radical_subgroups() == [v4n, top]


def test_s4_core_center_and_normal_subgroups(f_s4):
    v4n = find_subgroup(f_s4, V4N_LABELS)
    assert f_s4.op_core() == v4n
    assert f_s4.is_constrained()
    assert f_s4.center() == (f_s4.identity,)
    assert f_s4.normal_subgroups() == [(f_s4.identity,), v4n]


def test_s4_every_subgroup_is_subcentric(f_s4):
    # a constrained system has only constrained normalizer subsystems
    assert f_s4.subcentric_subgroups() == f_s4.subgroups


def test_s4_receptive_pattern(f_s4):
    """Only the central involution of the fused rank-one class is receptive."""
    central = find_subgroup(f_s4, {"()", "(1 2)(3 4)"})
    other = find_subgroup(f_s4, {"()", "(1 3)(2 4)"})
    assert all(f_s4.is_fully_automized(P) for P in f_s4.subgroups)
    assert f_s4.is_receptive(central)
    assert not f_s4.is_receptive(other)
    assert f_s4.is_fully_normalized(central)
    assert not f_s4.is_fully_normalized(other)


def test_s4_strong_closure(f_s4):
    v4n = find_subgroup(f_s4, V4N_LABELS)
    v4r = find_subgroup(f_s4, {"()", "(1 2)", "(3 4)", "(1 2)(3 4)"})
    single = find_subgroup(f_s4, {"()", "(1 2)(3 4)"})
    assert f_s4.is_strongly_closed(v4n)
    assert not f_s4.is_strongly_closed(v4r)
    assert not f_s4.is_strongly_closed(single)


def test_s4_fusion_automorphisms(f_s4):
    autos = f_s4.fusion_automorphisms()
    assert len(autos) == 4
    identity = {x: x for x in f_s4.s}
    assert identity in autos


# ---------------------------------------------------------------------------
# inner fusion of a p-group on itself


def test_d8_inner_fusion(f_d8):
    assert len(f_d8.classes()) == 8
    assert f_d8.is_saturated()
    top = f_d8.canon(f_d8.s)
    assert f_d8.centric_radical_subgroups() == [top]
    assert f_d8.op_core() == top
    assert len(f_d8.center()) == 2
    assert f_d8.subcentric_subgroups() == f_d8.subgroups
    assert len(f_d8.fusion_automorphisms()) == 8


# ---------------------------------------------------------------------------
# fusion of A5 at p = 2: all involutions fused by a 3-element


def test_a5_fusion(s4):
    a5 = parse_group(A5_DOC)
    F = fusion_from_group(a5, 2)
    assert [len(c) for c in F.classes()] == [1, 3, 1]
    assert F.is_saturated()
    top = F.canon(F.s)
    assert len(F.isos(top, top)) == 3
    assert F.center() == (F.identity,)
    # the Sylow subgroup is abelian, so fusion is controlled by its
    # normalizer and the whole subgroup is normal in the system
    assert F.op_core() == top
    assert F.is_constrained()


# ---------------------------------------------------------------------------
# the transposition-type locality of S5 generates a smaller fusion system


@pytest.fixture(scope="module")
def s5_fusions():
    s5 = parse_group(S5_DOC)
    s = sylow_p(s5, 2)
    view = subgroup_view(s5, s.members)
    fam = []
    for h in subgroup_lattice(view):
        mem = frozenset(view.tokens[i] for i in h.members)
        if len(mem) > 1 and any(s5.element_order(i) == 2
                                and s5.label(i).count("(") == 1 for i in mem):
            fam.append(mem)
    loc = locality_from_group(s5, 2, fam)
    return loc, fusion_from_locality(loc), fusion_from_group(s5, 2)


def test_s5_locality_fusion_is_saturated_proper_subsystem(s5_fusions):
    loc, F_loc, F_grp = s5_fusions
    assert validate_fusion_system(F_loc) == []
    assert F_loc.is_saturated()
    assert F_grp.is_saturated()
    assert len(F_loc.classes()) == 8
    assert len(F_grp.classes()) == 7
    mine = translated_hom_sets(F_loc, loc.carrier)
    full = F_grp.hom_sets()
    assert mine != full
    for key, maps in mine.items():
        assert maps <= full[key]


# ---------------------------------------------------------------------------
# normalizer subsystems


def test_normalizer_of_normal_subgroup_is_whole_system(f_s4):
    v4n = find_subgroup(f_s4, V4N_LABELS)
    sub = f_s4.normalizer_subsystem(v4n)
    assert sub.hom_sets() == f_s4.hom_sets()


def test_normalizer_of_reflection_v4_is_inner(s4, f_s4, f_d8):
    """N_S(V4) = S and no outer maps survive: the subsystem is the inner
    fusion of the Sylow subgroup."""
    v4r = find_subgroup(f_s4, {"()", "(1 2)", "(3 4)", "(1 2)(3 4)"})
    sub = f_s4.normalizer_subsystem(v4r)
    view = f_d8.s_view()  # tokens of f_d8 live in a subgroup view of s4
    s = sylow_p(s4, 2)
    to_ambient = dict(enumerate(s.members))
    assert sub.hom_sets() == translated_hom_sets(f_d8, to_ambient)


def test_normalizer_subsystem_of_cyclic_four(f_s4):
    c4 = next(P for P in f_s4.subgroups
              if len(P) == 4 and any(len(f_s4.span((x,))) == 4 for x in P))
    sub = f_s4.normalizer_subsystem(c4)
    assert set(sub.s) == set(f_s4.s)
    assert sub.is_saturated()
    # C4 is self-centralizing in D8 and its normalizer fusion is inner
    assert sub.op_core() == sub.canon(sub.s)


# ---------------------------------------------------------------------------
# induced maps of fusion systems


def test_identity_induces_epimorphism(f_s4):
    beta = {x: x for x in f_s4.s}
    assert f_s4.map_defect(f_s4, beta) is None
    assert f_s4.epimorphism_defect(f_s4, beta) is None


def test_inclusion_of_inner_fusion_is_morphism_not_epi(s4, f_s4, f_d8):
    s = sylow_p(s4, 2)
    beta = {i: s.members[i] for i in range(len(s.members))}
    assert f_d8.map_defect(f_s4, beta) is None
    defect = f_d8.epimorphism_defect(f_s4, beta)
    assert defect is not None and "not covered" in defect


def test_backwards_inclusion_is_not_morphism(s4, f_s4, f_d8):
    s = sylow_p(s4, 2)
    beta = {m: i for i, m in enumerate(s.members)}
    defect = f_s4.map_defect(f_d8, beta)
    assert defect is not None


def test_collapse_to_trivial_group_is_epimorphism(f_s4):
    triv = fusion_from_group(parse_group({"degree": 1, "generators": []}), 2)
    beta = {x: triv.identity for x in f_s4.s}
    assert f_s4.epimorphism_defect(triv, beta) is None


# ---------------------------------------------------------------------------
# seeded defects in stored tables


def _rebuild_with(F, new_emb):
    return FusionSystem(F.p, F.s, F._mul, F._inv, new_emb, label_fn=F._label)


def test_missing_single_map_fails_inverse_closure(f_s4):
    v4n = find_subgroup(f_s4, V4N_LABELS)
    dropped = next(t for t in f_s4.isos(v4n, v4n)
                   if f_s4._invert(v4n, t) != t)
    emb = {P: (frozenset(f_s4._emb[P] - {dropped}) if P == v4n
               else f_s4._emb[P])
           for P in f_s4.subgroups}
    with pytest.raises(FusionBuildError):
        _rebuild_with(f_s4, emb)


def test_missing_inverse_pair_fails_composition_closure(f_s4):
    """Dropping a map and its inverse slips past construction but breaks
    closure under composition or restriction."""
    v4n = find_subgroup(f_s4, V4N_LABELS)
    dropped = next(t for t in f_s4.isos(v4n, v4n)
                   if f_s4._invert(v4n, t) != t)
    pair = {dropped, f_s4._invert(v4n, dropped)}
    emb = {P: (frozenset(f_s4._emb[P] - pair) if P == v4n else f_s4._emb[P])
           for P in f_s4.subgroups}
    F_bad = _rebuild_with(f_s4, emb)
    defects = validate_fusion_system(F_bad)
    assert defects, "seeded defect was not detected"


def test_non_homomorphism_map_is_detected(f_s4):
    v4n = find_subgroup(f_s4, V4N_LABELS)
    pos_e = v4n.index(f_s4.identity)
    bogus = list(v4n)
    bogus[pos_e], bogus[1] = bogus[1], bogus[pos_e]
    bogus = tuple(bogus)  # swaps identity with an involution; self-inverse
    emb = {P: (frozenset(f_s4._emb[P] | {bogus}) if P == v4n
               else f_s4._emb[P])
           for P in f_s4.subgroups}
    F_bad = _rebuild_with(f_s4, emb)
    defects = validate_fusion_system(F_bad)
    assert any("not a group homomorphism" in d for d in defects)


# ---------------------------------------------------------------------------
# properties


@settings(max_examples=120, deadline=None)
@given(data=st.data())
def test_restriction_of_morphism_is_morphism(data):
    F = _module_fusion()
    P = data.draw(st.sampled_from(F.subgroups))
    img = data.draw(st.sampled_from(sorted(F._emb[P])))
    sub = data.draw(st.sampled_from(
        [Q for Q in F.subgroups if set(Q) <= set(P)]))
    pos = {x: i for i, x in enumerate(P)}
    restricted = tuple(img[pos[x]] for x in sub)
    assert restricted in F._emb[sub]


@settings(max_examples=120, deadline=None)
@given(data=st.data())
def test_transport_by_fusion_automorphism_stays_inside(data):
    F = _module_fusion()
    alpha = data.draw(st.sampled_from(F.fusion_automorphisms()))
    P = data.draw(st.sampled_from(F.subgroups))
    img = data.draw(st.sampled_from(sorted(F._emb[P])))
    Pa, t = F.transport(P, img, alpha)
    assert t in F._emb[Pa]


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_hom_sets_compose(data):
    F = _module_fusion()
    P = data.draw(st.sampled_from(F.subgroups))
    img = data.draw(st.sampled_from(sorted(F._emb[P])))
    target = tuple(sorted(img))
    img2 = data.draw(st.sampled_from(sorted(F._emb[target])))
    phi2 = dict(zip(target, img2))
    assert tuple(phi2[y] for y in img) in F._emb[P]


_FUSION_CACHE = {}


def _module_fusion():
    if "f" not in _FUSION_CACHE:
        _FUSION_CACHE["f"] = fusion_from_group(parse_group(S4_DOC), 2)
    return _FUSION_CACHE["f"]
