import itertools

import pytest

from conftest import random_biseq, random_seq
from isokernel import semilinear as sl
from isokernel.errors import DegenerateInputError, UsageError
from isokernel.groups import GroupDescriptor
from isokernel.kernelmodel import BiCoefficientSeq, BiTail, CoefficientSeq, SpaceDescriptor, Tail
from isokernel.spdlaw import check_witness, decide_product, decide_single, explain

S2 = SpaceDescriptor("sphere", 2)
CIRCLE = SpaceDescriptor("circle")
F1 = CoefficientSeq(S2, {0: 1.0, 1: 1.0})
G1 = CoefficientSeq(S2, (), [Tail(1, 2, 1 / 3, 1 / 9)])

SPACES = [CIRCLE, S2, SpaceDescriptor("sphere", 4), SpaceDescriptor("projR", 2),
          SpaceDescriptor("projC", 4), SpaceDescriptor("projH", 8), SpaceDescriptor("cayley16"),
          SpaceDescriptor("sphereInf"), SpaceDescriptor("projInf")]


def test_linear_and_odd_tail_factors_are_positive_only():
    v = decide_single(F1)
    assert v.decision == "positive-only"
    assert v.witness["parity"] == "even" and "finitely many even" in v.witness["note"]
    v = decide_single(G1)
    assert v.decision == "positive-only"
    assert v.witness["note"] == "no even indices"


def test_linear_times_odd_tail_is_strict():
    v = decide_product(F1, G1)
    assert v.decision == "strict"
    assert v.evidence == sl.make((), [(1, 1, 1)])
    assert v.witness is None


def test_projective_tail_is_strict():
    where = SpaceDescriptor("projR", 3)
    assert decide_single(CoefficientSeq(where, {0: 1.0}, [Tail(2, 5, 1.0, 0.5)])).strict


def test_projective_polynomials_positive_only():
    where = SpaceDescriptor("projR", 2)
    v = decide_product(CoefficientSeq(where, {0: 1.0, 2: 1.0}), CoefficientSeq(where, {1: 1.0}))
    assert v.decision == "positive-only"
    assert v.witness["note"] == "sumset finite"


def test_circle_product_witness():
    v = decide_product(CoefficientSeq(CIRCLE, {0: 1.0}), CoefficientSeq(CIRCLE, {}, [Tail(0, 4, 1.0, 0.5)]))
    assert v.decision == "positive-only"
    assert (v.witness["n"], v.witness["j"]) == (2, 1)
    assert check_witness(v)


def test_circle_single_uses_symmetric_support():
    full = CoefficientSeq(CIRCLE, {}, [Tail(0, 1, 1.0, 0.5)])
    assert decide_single(full).strict
    # k = 1 mod 3 and its negatives cover residues 1 and 2 but not 0
    v = decide_single(CoefficientSeq(CIRCLE, {}, [Tail(1, 3, 1.0, 0.5)]))
    assert v.decision == "positive-only" and v.witness["j"] % 3 == 0
    v = decide_single(CoefficientSeq(CIRCLE, {0: 1.0}, [Tail(1, 3, 1.0, 0.5)]))
    assert v.decision == "positive-only"
    assert check_witness(v)
    assert decide_single(CoefficientSeq(CIRCLE, {0: 1.0}, [Tail(1, 3, 1.0, 0.5), Tail(3, 3, 1.0, 0.5)])).strict


def test_complex_sphere_criteria():
    where = SpaceDescriptor("complexSphere", q=2)
    both = BiCoefficientSeq(where, {}, [BiTail(0, 0, 1, 0, 1.0, 0.5), BiTail(0, 1, 0, 1, 1.0, 0.5)])
    assert decide_single(both).strict
    one_side = BiCoefficientSeq(where, {}, [BiTail(0, 0, 1, 0, 1.0, 0.5)])
    v = decide_single(one_side)
    assert v.strict  # a one-sided ray still meets every progression
    radial = BiCoefficientSeq(where, {}, [BiTail(0, 0, 1, 1, 1.0, 0.5)])
    v = decide_single(radial)
    assert v.decision == "positive-only" and check_witness(v)
    v = decide_product(BiCoefficientSeq(where, {(1, 1): 1.0}), BiCoefficientSeq(where, {(3, 0): 1.0}))
    assert v.evidence == sl.make([3]) and v.decision == "positive-only"


def test_errors():
    with pytest.raises(DegenerateInputError):
        decide_single(CoefficientSeq(S2))
    with pytest.raises(DegenerateInputError):
        decide_product(F1, CoefficientSeq(S2))
    with pytest.raises(DegenerateInputError):
        decide_product(CoefficientSeq(SpaceDescriptor("projInf")), CoefficientSeq(SpaceDescriptor("projInf"), {0: 1.0}))
    st = SpaceDescriptor("spacetime", 2, group=GroupDescriptor("real-line"))
    with pytest.raises(UsageError):
        decide_product(F1, G1, st)
    with pytest.raises(UsageError):
        decide_product(F1, CoefficientSeq(CIRCLE, {0: 1.0}))


def test_explain_golden():
    assert explain(decide_product(F1, G1)) == (
        "decision: strict\n"
        "criterion: sphere-product-parity (infinitely many even and infinitely many odd indices)\n"
        "evidence: (1+1t, t≥0)")
    v = decide_product(CoefficientSeq(CIRCLE, {0: 1.0}), CoefficientSeq(CIRCLE, {}, [Tail(0, 4, 1.0, 0.5)]))
    assert explain(v).splitlines()[-1] == "witness: misses 2Z+1"
    where = SpaceDescriptor("projC", 4)
    v = decide_single(CoefficientSeq(where, {0: 1.0, 3: 2.0}))
    assert explain(v).splitlines()[-1] == "witness: support finite"


def test_verdict_json_schema():
    doc = decide_single(F1).to_json()
    assert set(doc) == {"decision", "criterion", "evidence", "witness"}
    assert doc["evidence"]["text"] == "{0,1}"


@pytest.mark.parametrize("where", SPACES, ids=str)
def test_symmetry_and_oppenheim(where, rng):
    for _ in range(100):
        f = random_seq(rng, where, max_index=8, tail_prob=0.3)
        g = random_seq(rng, where, max_index=8, tail_prob=0.3)
        fg, gf = decide_product(f, g), decide_product(g, f)
        assert fg.decision == gf.decision and fg.evidence == gf.evidence
        if decide_single(f).strict:
            assert fg.strict
        assert check_witness(fg)


@pytest.mark.parametrize("where", SPACES, ids=str)
def test_monotone_in_support(where, rng):
    for _ in range(60):
        f = random_seq(rng, where, max_index=8, tail_prob=0.3)
        g = random_seq(rng, where, max_index=8, tail_prob=0.3)
        extra = int(rng.integers(0, 9))
        head = dict(g.head)
        head.setdefault(extra, 1.0)
        try:
            bigger = CoefficientSeq(where, head, g.tails)
        except Exception:
            continue
        if decide_product(f, g).strict:
            assert decide_product(f, bigger).strict


def _shapes(where):
    yield CoefficientSeq(where, {0: 1.0})
    yield CoefficientSeq(where, {1: 1.0, 4: 0.5})
    yield CoefficientSeq(where, {2: 1.0})
    yield CoefficientSeq(where, {}, [Tail(0, 2, 1.0, 0.5)])
    yield CoefficientSeq(where, {}, [Tail(1, 2, 1.0, 0.5)])
    yield CoefficientSeq(where, {0: 1.0}, [Tail(3, 3, 1.0, 0.5)])


@pytest.mark.parametrize("where", [SpaceDescriptor("projR", 2), SpaceDescriptor("projC", 6),
                                   SpaceDescriptor("projH", 8), SpaceDescriptor("cayley16"),
                                   SpaceDescriptor("projInf")], ids=str)
def test_non_sphere_product_iff_a_factor_is_strict(where):
    for f, g in itertools.product(list(_shapes(where)), repeat=2):
        either = decide_single(f).strict or decide_single(g).strict
        assert decide_product(f, g).strict == either


@pytest.mark.parametrize("q", [1, 2, 3])
def test_complex_sphere_random_witnesses(q, rng):
    for _ in range(60):
        f, g = random_biseq(rng, q), random_biseq(rng, q)
        v = decide_product(f, g)
        assert check_witness(v)
        assert decide_product(g, f).decision == v.decision


def test_witnesses_hold_up_to_large_bound(rng):
    for where in SPACES:
        for _ in range(20):
            f = random_seq(rng, where, max_index=10, tail_prob=0.4)
            g = random_seq(rng, where, max_index=10, tail_prob=0.4)
            v = decide_product(f, g)
            if not v.strict:
                assert check_witness(v, 10 ** 5)
            assert check_witness(decide_single(f), 10 ** 5)
