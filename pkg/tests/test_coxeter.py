import pytest

from soergel.coxeter import (BalancednessViolation, CoxeterGroup, InfiniteEdgeTooSmall, NotAReflection,
                             ZeroRootOrCoroot, _cartan_group, load_realization, preset, quantum,
                             universal)
from soergel.polyring import Poly


@pytest.mark.parametrize("name,count", [("A2", 6), ("B2", 8), ("universal3", 190), ("affineA2", 64)])
def test_element_counts(name, count):
    assert len(preset(name).elements_up_to(6)) == count


def test_braid_relation_and_normal_words(A2):
    assert A2.from_word("sts") is A2.from_word("tst")
    assert A2.from_word("stst") is A2.from_word("ts")
    assert A2.from_word("ss") is A2.e
    assert A2.is_reduced("sts") and not A2.is_reduced("stss")


def test_descents(A2):
    st = A2.from_word("st")
    assert A2.right_descent(st, 1) and not A2.right_descent(st, 0)
    assert A2.left_descent(st, 0) and not A2.left_descent(st, 1)


def test_inverse_and_product(U3):
    w = U3.from_word("stu")
    assert U3.multiply(w, U3.inverse(w)) is U3.e
    assert U3.inverse(w) is U3.from_word("uts")


def test_action_is_reflection_on_roots(A2):
    s = A2.gens[0]
    assert A2.act(s, A2.alpha(0)) == -A2.alpha(0)
    assert A2.act(s, A2.alpha(1)) == A2.alpha(0) + A2.alpha(1)


def test_reflection_root_of_sts(A2):
    t = A2.from_word("sts")
    assert A2.root_of_reflection(t, verify=True) == Poly.var(2, 0) + Poly.var(2, 1)
    with pytest.raises(NotAReflection):
        A2.root_of_reflection(A2.from_word("st"))


def test_bruhat_order(A2):
    sts = A2.from_word("sts")
    assert all(A2.bruhat_leq(x, sts) for x in A2.elements_up_to(3))
    assert not A2.bruhat_leq(A2.from_word("st"), A2.from_word("ts"))
    assert len(A2.interval(sts)) == 6
    assert len(A2.bruhat_edges(A2.interval(sts))) == 8


def test_upper_covers(U3):
    covers = U3.upper_covers(U3.gens[0])
    assert {c.length for c in covers} == {2}
    assert len(covers) == 4  # st, su, ts, us


def test_interval_sizes_and_gkm(U3, AFF):
    w = U3.from_word("stustu")
    om = U3.interval(w)
    assert len(om) == 40
    assert U3.gkm_check(om)
    v = AFF.from_word("stutst")
    assert v.name() == "stusts"
    assert len(AFF.interval(v)) == 30 and AFF.gkm_check(AFF.interval(v))


def test_subexpressions_and_defect(A2):
    s = A2.gens[0]
    subs = sorted((e.bits, e.defect) for e in A2.subexpressions("sts", s))
    # (0,0,1): U0 U0 U1 has defect 2 (two U-zeros, no D-zero)
    assert subs == [((0, 0, 1), 2), ((1, 0, 0), 0)]
    assert A2.canonical_subexpression("sts", s).bits == (0, 0, 1)


def test_subexpression_decorations(A1):
    e = A1.subexpression("ss", (1, 1))
    assert e.decoration == ("U", "D") and e.target is A1.e and e.defect == 0
    e = A1.subexpression("ss", (1, 0))
    assert e.decoration == ("U", "D") and e.defect == -1


def test_quantum_numbers():
    # arguments are minus the Cartan entries
    assert quantum(2, 1, 1) == (1, 1)
    assert quantum(3, 1, 2) == (1, 1)
    assert quantum(5, 1, 3) == (1, 1)
    assert quantum(3, 2, 2) == (3, 3)


def test_validation_rejects_bad_data():
    with pytest.raises(BalancednessViolation):
        _cartan_group("bad", ["s", "t"], [[1, 3], [3, 1]], [[2, -2], [-0.5, 2]])
    with pytest.raises(ZeroRootOrCoroot):
        CoxeterGroup("x", ["s"], [[1]], 1, [[0]], [[2]])
    with pytest.raises(InfiniteEdgeTooSmall):
        _cartan_group("inf", ["s", "t"], [[1, 0], [0, 1]], [[2, -1], [-1, 2]])


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "universal3", "affineA2", "rightangled3"])
def test_presets_validate_and_roundtrip(name):
    G = preset(name)
    G.validate()
    H = load_realization(G.to_config())
    assert H.to_config() == G.to_config()


def test_universal_rank_two():
    G = universal(2)
    assert len(G.elements_up_to(4)) == 9
