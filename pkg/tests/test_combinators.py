"""The term catalog, balance machinery, and coded-evaluator checks."""

import importlib.resources as resources

import pytest

import lamclock.combinators as C
from lamclock.parser import parse, pretty
from lamclock.reduction import gross_knuth
from lamclock.terms import App, Free, alpha_eq
from lamclock.trees import compact_cyclic


# -- generator schemes -------------------------------------------------------


def test_bohm_seq_base_cases():
    assert alpha_eq(C.bohm_seq(1), C.Y1)
    assert alpha_eq(C.bohm_seq(2), App(C.Y1, C.DELTA))
    with pytest.raises(ValueError):
        C.bohm_seq(0)


def test_scott_seq_base_case(defs):
    assert alpha_eq(C.scott_seq(0), parse("B Y0 I", defs))
    with pytest.raises(ValueError):
        C.scott_seq(-1)


def test_flipflop_variants():
    z, z_prime = C.wfpc_flipflop(0), C.wfpc_flipflop(1)
    assert not alpha_eq(z, z_prime)
    with pytest.raises(ValueError):
        C.wfpc_flipflop(2)


def test_composite_rejects_bad_exponents():
    with pytest.raises(ValueError):
        C.scott_composite([-1])
    with pytest.raises(ValueError):
        C.scott_composite_simplified([])


FPC_CANDIDATES = [
    ("curry", lambda: C.Y0),
    ("turing", lambda: C.Y1),
    ("owl-postfix-2", lambda: C.bohm_seq(2)),
    ("owl-postfix-3", lambda: C.bohm_seq(3)),
    ("owl-postfix-6", lambda: C.bohm_seq(6)),
    ("comp-0", lambda: C.scott_seq(0)),
    ("comp-3", lambda: C.scott_seq(3)),
    ("vector-0", lambda: C.gvector(C.Y1, 0)),
    ("vector-4", lambda: C.gvector(C.Y1, 4)),
    ("triple-comp-3", lambda: C.bbb_scheme(None, 3)),
    ("dummy-params-4", lambda: C.dummy_scheme(C.Y0, (C.I,) * 4)),
    ("composite-2-0-1", lambda: C.scott_composite([2, 0, 1])),
    ("composite-simplified", lambda: C.scott_composite_simplified([2, 0, 1])),
    ("flipflop-0", lambda: C.wfpc_flipflop(0)),
    ("flipflop-1", lambda: C.wfpc_flipflop(1)),
]


@pytest.mark.parametrize("name,mk", FPC_CANDIDATES, ids=[n for n, _ in FPC_CANDIDATES])
def test_fixed_point_spine(name, mk):
    # applied to a free variable, each candidate's tree is x(x(x(...)))
    # for as many levels as we compute
    assert C.spine_evidence(mk()) == 12


# -- balance -----------------------------------------------------------------


def test_labeled_duplicator_shape():
    lt = C.label_plotkin_A(C.Y1)
    assert lt.label == "f_star"
    assert alpha_eq(lt.term, parse(r"Y1 (\z. f_star z z)", C.standard_definitions()))


def test_label_collision_rejected():
    with pytest.raises(ValueError):
        C.label_plotkin_A(Free("f_star"))


def test_is_balanced():
    lt = C.label_plotkin_A(C.Y0)
    assert C.is_balanced(lt)
    lopsided = App(App(Free("f_star"), C.I), C.K)
    assert not C.is_balanced(lopsided)
    # unmarked terms are vacuously balanced
    assert C.is_balanced(C.Y1)


@pytest.mark.parametrize("y", [lambda: C.Y0, lambda: C.Y1], ids=["curry", "turing"])
def test_full_development_preserves_balance(y):
    lt = C.label_plotkin_A(y())
    t = lt.term
    for _ in range(5):
        assert C.is_balanced(t, lt.label)
        t = gross_knuth(t)


@pytest.mark.parametrize("y", [lambda: C.Y0, lambda: C.Y1], ids=["curry", "turing"])
def test_balanced_reduct_sampler(y):
    lt = C.label_plotkin_A(y())
    rs = C.balanced_reducts(lt, 50)
    assert len(rs) == 50
    assert len(set(rs)) == 50
    assert all(C.is_balanced(r, lt.label) for r in rs)


def test_duplicator_tree_has_nonzero_annotation():
    assert C.plotkin_nonzero_witness(C.label_plotkin_A(C.Y1)) == (2,)
    assert C.plotkin_nonzero_witness(C.label_plotkin_A(C.Y0)) == (2,)


@pytest.mark.parametrize("y", [lambda: C.Y0, lambda: C.Y1], ids=["curry", "turing"])
def test_guarded_variant_annotations_all_zero(y):
    assert C.plotkin_nonzero_witness(C.plotkin_Bprime(y()), depth=8) is None


# -- coded combinatory logic -------------------------------------------------


def test_cl_parse_print_round_trip():
    for text in ("K", "S", "KS", "S(KS)K", "SKK(KS)"):
        assert str(C.parse_cl(text)) == text


def test_cl_to_lambda():
    assert alpha_eq(C.cl_to_lambda(C.CL_K), C.K)
    assert alpha_eq(C.cl_to_lambda(C.CL_S), C.S)


def test_enumerator_spellings_frozen():
    gold = (resources.files("lamclock") / "goldens" / "enumerators.txt").read_text()
    assert gold == pretty(C.E1) + "\n" + pretty(C.E2) + "\n" + pretty(C.E3) + "\n"


def test_evaluator_check():
    assert C.evaluator_check(C.E1, C.CL_K)
    assert C.evaluator_check(C.E2, C.CL_K)
    assert C.evaluator_check(C.E3, C.CL_S)
    skks = C.parse_cl("SK(KS)")
    assert C.evaluator_check(C.E3, skks)


def test_identity_is_not_an_evaluator(defs):
    assert not C.evaluator_check(parse("I", defs), C.CL_K)


# -- atomic spine patterns ---------------------------------------------------


def test_ones_exponents():
    assert C.ones_exponents([(1, 1), (1,), ()]) == [2, 1, 0]
    with pytest.raises(ValueError):
        C.ones_exponents([(1, 2)])


def test_pulse_pattern():
    assert C.pulse_pattern_count([3, 4, 3, 2, 1]) == 1
    assert C.pulse_pattern_count([3, 4, 3, 2]) == 0
    assert C.pulse_pattern_count([]) == 0


def test_composite_atomic_signature():
    # the three exponents [2, 0, 1] are recoverable from the atomic clock:
    # 21 spine positions whose lengths carry exactly k-1 = 2 pulse windows
    t = App(C.scott_composite_simplified([2, 0, 1]), Free("x"))
    tree = compact_cyclic(t, atomic=True)
    exps = C.ones_exponents(tree.root.steps)
    assert exps == [9, 8, 7, 8, 7, 6, 7, 6, 5, 6, 5, 4, 3, 4, 3, 2, 1, 2, 1, 0, 1]
    assert C.pulse_pattern_count(exps) == 2


# -- the catalog -------------------------------------------------------------


def test_catalog_lists_every_name():
    names = C.catalog_names()
    assert "y0" in names and "bohm-seq" in names and "wfpc-flipflop" in names
    assert len(names) == len(set(names))


def test_catalog_lookup(defs):
    assert alpha_eq(C.catalog("i"), C.I)
    assert alpha_eq(C.catalog("bohm-seq", 2), C.bohm_seq(2))
    assert alpha_eq(C.catalog("gvector", parse("Y1", defs), 3), C.gvector(C.Y1, 3))


def test_catalog_rejects_bad_requests():
    with pytest.raises(ValueError):
        C.catalog("nope")
    with pytest.raises(ValueError):
        C.catalog("i", 1)
