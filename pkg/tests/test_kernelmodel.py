import json
from importlib import resources

import numpy as np
import pytest

from conftest import random_biseq, random_seq
from isokernel import semilinear as sl
from isokernel.errors import DomainError, UnsupportedSpaceError, UsageError, ValidationError
from isokernel.kernelmodel import (BiCoefficientSeq, BiTail, CoefficientSeq, SpaceDescriptor, Tail,
                                   circle_product_coeffs, diff_support, eval_kernel, eval_series,
                                   pairwise_t, parse_kernel, product_expand, product_support,
                                   serialize_kernel, support, t_of_points, validate)
from isokernel.numverify import oracle_product_coeffs, project_coeffs
from isokernel.orthopoly import PolyParams, disk_eval

S2 = SpaceDescriptor("sphere", 2)
CIRCLE = SpaceDescriptor("circle")
F1 = CoefficientSeq(S2, {0: 1.0, 1: 1.0})
G1 = CoefficientSeq(S2, (), [Tail(1, 2, 1 / 3, 1 / 9)])


def shipped_specs():
    folder = resources.files("isokernel") / "specs"
    return sorted(p for p in folder.iterdir() if p.name.endswith(".json") and "spacetime" not in p.name)


@pytest.mark.parametrize("kind, d, q, params", [
    ("circle", None, None, (-0.5, -0.5)),
    ("sphere", 2, None, (0.0, 0.0)),
    ("sphere", 5, None, (1.5, 1.5)),
    ("projR", 3, None, (0.5, -0.5)),
    ("projC", 6, None, (2.0, 0.0)),
    ("projH", 8, None, (3.0, 1.0)),
    ("cayley16", None, None, (7.0, 3.0)),
])
def test_space_params(kind, d, q, params):
    where = SpaceDescriptor(kind, d, q)
    assert (where.params.alpha, where.params.beta) == params


@pytest.mark.parametrize("kind, d, q", [
    ("sphere", 1, None), ("projC", 5, None), ("projH", 6, None), ("cayley16", 8, None),
    ("complexSphere", None, 0), ("circle", 2, None), ("torus", 2, None),
])
def test_space_rejects_inadmissible(kind, d, q):
    with pytest.raises(ValidationError):
        SpaceDescriptor(kind, d, q)


def test_validate_examples():
    assert validate({"space": {"kind": "sphere", "d": 2}, "head": {"0": 1, "1": 1}}) == F1
    g = validate({"space": {"kind": "sphere", "d": 2},
                  "tails": [{"base": 1, "step": 2, "c": 1 / 3, "r": 1 / 9}]})
    assert g == G1
    for k in range(6):
        assert g.coefficient(2 * k + 1) == pytest.approx(3.0 ** (-2 * k - 1), rel=1e-14)
        assert g.coefficient(2 * k) == 0.0


@pytest.mark.parametrize("doc, path", [
    ({"tails": [{"base": 1, "step": 2, "c": 1, "r": 1.0}]}, "tails[0].r"),
    ({"head": {"0": 0.0}}, "head.0"),
    ({"head": {"0": -1.0}}, "head.0"),
    ({"head": {"3": 1.0}, "tails": [{"base": 1, "step": 2, "c": 1, "r": 0.5}]}, "tails[0]"),
    ({"tails": [{"base": 1, "step": 2, "c": 1, "r": 0.5}, {"base": 4, "step": 3, "c": 1, "r": 0.5}]},
     "tails[1]"),
    ({"head": {"x": 1.0}}, "head.x"),
    ({"tails": [{"base": 1, "c": 1}]}, "tails[0].r"),
])
def test_validate_errors_carry_paths(doc, path):
    doc = dict(doc, space={"kind": "sphere", "d": 2})
    with pytest.raises(ValidationError) as err:
        parse_kernel(doc)
    assert err.value.path == path


def test_unknown_keys_rejected():
    with pytest.raises(ValidationError):
        parse_kernel({"space": {"kind": "sphere", "d": 2}, "head": {}, "extra": 1})
    with pytest.raises(ValidationError):
        parse_kernel({"space": {"kind": "sphere", "d": 2, "beta": 1}})


def test_disjoint_tails_accepted():
    f = CoefficientSeq(S2, {}, [Tail(0, 2, 1.0, 0.5), Tail(1, 4, 1.0, 0.5), Tail(3, 4, 1.0, 0.5)])
    assert support(f) == sl.make((), [(0, 1, 1)])


def test_eval_series_examples():
    assert eval_series(CoefficientSeq(S2, {0: 2.5}), 0.3) == 2.5
    assert eval_series(G1, 1.0) == pytest.approx(0.375, abs=1e-12)
    assert eval_series(CoefficientSeq(SpaceDescriptor("sphere", 3), {1: 1.0}), 0.2) == pytest.approx(0.2)


def test_eval_series_matches_direct_sum(rng):
    where = SpaceDescriptor("projC", 6)
    f = CoefficientSeq(where, {0: 0.5, 3: 1.0}, [Tail(5, 2, 0.8, 0.5)])
    t = rng.uniform(-1, 1, 30)
    from isokernel.orthopoly import jacobi_eval
    direct = 0.5 + jacobi_eval(3, where.params, t)
    direct = direct + sum(0.8 * 0.5 ** j * jacobi_eval(5 + 2 * j, where.params, t) for j in range(60))
    np.testing.assert_allclose(eval_series(f, t, 1e-14), direct, atol=1e-13)


def test_eval_series_power_bases():
    f = CoefficientSeq(SpaceDescriptor("sphereInf"), {0: 1.0, 2: 2.0})
    assert eval_series(f, 0.5) == pytest.approx(1.5)
    g = CoefficientSeq(SpaceDescriptor("projInf"), {1: 1.0, 3: 1.0})
    assert eval_series(g, 0.0) == pytest.approx(0.5 + 0.125)


def test_eval_series_disk(rng):
    where = SpaceDescriptor("complexSphere", q=3)
    f = BiCoefficientSeq(where, {(2, 1): 1.0, (0, 0): 0.5}, [BiTail(0, 1, 1, 1, 1.0, 0.5)])
    z = 0.4 * np.exp(0.7j)
    expected = disk_eval(2, 1, 3, z) + 0.5 + sum(0.5 ** j * disk_eval(j, 1 + j, 3, z) for j in range(60))
    assert eval_series(f, z, 1e-14) == pytest.approx(expected, abs=1e-13)
    with pytest.raises(DomainError):
        eval_series(f, 1.5)


def test_support_examples():
    assert support(F1) == sl.make([0, 1])
    assert support(G1) == sl.make((), [(1, 2, 1)])
    assert support(CoefficientSeq(S2)) == sl.EMPTY


def test_diff_support_examples():
    where = SpaceDescriptor("complexSphere", q=2)
    assert diff_support(BiCoefficientSeq(where, {(1, 0): 1.0})) == sl.make([1])
    mixed = parse_kernel({"space": {"kind": "complexSphere", "q": 2}, "head": {"2,2": 1.0},
                          "tails": [{"diff": 3, "base": 0, "step": 1, "c": 1.0, "r": 0.5}]})
    assert diff_support(mixed) == sl.make([0, 3])
    assert diff_support(BiCoefficientSeq(where)) == sl.EMPTY
    slanted = BiCoefficientSeq(where, {}, [BiTail(1, 0, 2, 1, 1.0, 0.5)])
    assert diff_support(slanted) == sl.make((), [(1, 1, 1)])


def test_product_expand_examples():
    g = CoefficientSeq(S2, {1: 0.5, 4: 2.0}, [Tail(6, 1, 1.0, 0.5)])
    one = CoefficientSeq(S2, {0: 1.0})
    out = product_expand(one, g, 10)
    for m in range(11):
        assert out[m] == pytest.approx(g.coefficient(m), abs=1e-12)
    t1 = CoefficientSeq(CIRCLE, {1: 1.0})
    out = product_expand(t1, t1, 4)
    assert out == pytest.approx({0: 0.5, 1: 0.0, 2: 0.5, 3: 0.0, 4: 0.0}, abs=1e-13)
    x = CoefficientSeq(S2, {1: 1.0})
    out = product_expand(x, x, 3)
    assert out == pytest.approx({0: 1 / 3, 1: 0.0, 2: 2 / 3, 3: 0.0}, abs=1e-13)


def test_product_expand_mismatch():
    with pytest.raises(UsageError):
        product_expand(F1, CoefficientSeq(CIRCLE, {0: 1.0}), 4)
    with pytest.raises(UsageError):
        product_support(F1, CoefficientSeq(CIRCLE, {0: 1.0}))


def test_product_expand_power_series_is_cauchy():
    where = SpaceDescriptor("sphereInf")
    f = CoefficientSeq(where, {0: 1.0, 1: 2.0})
    g = CoefficientSeq(where, {1: 1.0, 2: 3.0})
    assert product_expand(f, g, 4) == {0: 0.0, 1: 1.0, 2: 5.0, 3: 6.0, 4: 0.0}


def test_circle_product_examples():
    t1 = CoefficientSeq(CIRCLE, {1: 1.0})
    assert circle_product_coeffs(t1, t1, 0) == pytest.approx(0.5)
    assert circle_product_coeffs(t1, t1, 2) == pytest.approx(0.5)
    g = CoefficientSeq(CIRCLE, {2: 0.5}, [Tail(3, 2, 1.0, 0.4)])
    one = CoefficientSeq(CIRCLE, {0: 1.0})
    for m in range(10):
        assert circle_product_coeffs(one, g, m) == pytest.approx(g.coefficient(m), abs=1e-13)


def test_product_support_examples():
    assert product_support(F1, G1) == sl.make((), [(1, 1, 1)])
    one = CoefficientSeq(CIRCLE, {0: 1.0})
    fours = CoefficientSeq(CIRCLE, {}, [Tail(0, 4, 1.0, 0.5)])
    assert product_support(one, fours) == sl.make((), [(0, 4, 1), (0, 4, -1)])
    where = SpaceDescriptor("complexSphere", q=2)
    a = BiCoefficientSeq(where, {(1, 1): 1.0})
    b = BiCoefficientSeq(where, {(3, 0): 1.0})
    assert product_support(a, b) == sl.make([3])


ORACLE_SPACES = [CIRCLE, S2, SpaceDescriptor("sphere", 5), SpaceDescriptor("projR", 3),
                 SpaceDescriptor("projC", 6), SpaceDescriptor("projH", 8), SpaceDescriptor("cayley16")]


@pytest.mark.parametrize("where", ORACLE_SPACES, ids=str)
def test_product_expand_matches_projection_oracle(where, rng):
    for _ in range(3):
        f, g = random_seq(rng, where), random_seq(rng, where)
        out = product_expand(f, g, 24)
        for m in range(25):
            assert out[m] == pytest.approx(oracle_product_coeffs(f, g, m, rule_size=256), abs=1e-9)
            assert out[m] >= -1e-12


@pytest.mark.parametrize("where", ORACLE_SPACES, ids=str)
def test_finite_product_support_means_finite_expansion(where, rng):
    f = random_seq(rng, where, max_index=6, tail_prob=0.0)
    g = random_seq(rng, where, max_index=6, tail_prob=0.0)
    supp = product_support(f, g)
    assert not sl.is_infinite(supp)
    top = max(supp.finite)
    out = product_expand(f, g, top + 10)
    assert all(abs(out[m]) <= 1e-12 for m in range(top + 1, top + 11))
    assert out[top] > 0
    h = random_seq(rng, where, max_index=6, tail_prob=1.0)
    assert sl.is_infinite(product_support(f, h))


@pytest.mark.parametrize("d", [2, 3, 6])
def test_parity_identity_on_spheres(d, rng):
    where = SpaceDescriptor("sphere", d)
    f, g = random_seq(rng, where), random_seq(rng, where)
    out = product_expand(f, g, 20)

    def even(t):
        return (eval_series(f, t) * eval_series(g, t) + eval_series(f, -t) * eval_series(g, -t)) / 2

    def odd(t):
        return (eval_series(f, t) * eval_series(g, t) - eval_series(f, -t) * eval_series(g, -t)) / 2

    for m in range(21):
        assert project_coeffs(where, even, m) == pytest.approx(out[m] if m % 2 == 0 else 0.0, abs=1e-9)
        assert project_coeffs(where, odd, m) == pytest.approx(out[m] if m % 2 else 0.0, abs=1e-9)


@pytest.mark.parametrize("q", [2, 3])
def test_disk_product_expand_pointwise(q, rng):
    f = random_biseq(rng, q, tail_prob=0.0)
    g = random_biseq(rng, q, tail_prob=0.0)
    out = product_expand(f, g, 20)
    z = rng.uniform(0, 1, 10) * np.exp(1j * rng.uniform(0, 2 * np.pi, 10))
    expected = eval_series(f, z) * eval_series(g, z)
    got = sum(c * disk_eval(m, n, q, z) for (m, n), c in out.items())
    np.testing.assert_allclose(got, expected, atol=1e-10)
    assert all(c >= -1e-12 for c in out.values())


def test_laurent_product_expand():
    where = SpaceDescriptor("complexSphere", q=1)
    f = BiCoefficientSeq(where, {(1, 0): 1.0, (0, 2): 0.5})
    g = BiCoefficientSeq(where, {(0, 1): 2.0})
    assert product_expand(f, g, 5) == {-3: 1.0, 0: 2.0}


def test_t_of_points_examples():
    e1, e2 = np.eye(3)[0], np.eye(3)[1]
    assert t_of_points(S2, e1, e1) == 1.0
    assert t_of_points(SpaceDescriptor("projR", 2), e1, e2) == -1.0
    x = np.array([1, 1j, 0]) / np.sqrt(2)
    assert t_of_points(SpaceDescriptor("projC", 4), x, np.exp(0.9j) * x) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        t_of_points(S2, 2 * e1, e1)
    with pytest.raises(UnsupportedSpaceError):
        t_of_points(SpaceDescriptor("cayley16"), e1, e1)


def _qmul(a, b):
    w1, x1, y1, z1 = a
    w2, x2, y2, z2 = b
    return np.array([w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2, w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
                     w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2, w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2])


def test_quaternionic_t(rng):
    where = SpaceDescriptor("projH", 8)
    x = rng.standard_normal((3, 4))
    x /= np.linalg.norm(x)
    unit = rng.standard_normal(4)
    unit /= np.linalg.norm(unit)
    y = np.array([_qmul(row, unit) for row in x])
    assert t_of_points(where, x, y) == pytest.approx(1.0)
    z = rng.standard_normal((3, 4))
    z /= np.linalg.norm(z)
    # hand-rolled <x, z> = sum conj(x_i) z_i
    inner = sum(_qmul(x[i] * np.array([1, -1, -1, -1]), z[i]) for i in range(3))
    assert t_of_points(where, x, z) == pytest.approx(2 * np.sum(inner ** 2) - 1)


def test_pairwise_t_complex_sphere_hermitian(rng):
    where = SpaceDescriptor("complexSphere", q=3)
    x = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    t = pairwise_t(where, x)
    np.testing.assert_array_equal(t, t.conj().T)
    assert np.all(np.abs(t) <= 1)


def test_eval_kernel_examples():
    e1 = np.array([1.0, 0, 0])
    y = np.array([0.6, 0.8, 0])
    assert eval_kernel(S2, CoefficientSeq(S2, {0: 1.0}), e1, y) == 1.0
    assert eval_kernel(S2, CoefficientSeq(S2, {1: 1.0}), e1, y) == pytest.approx(0.6)
    proj = SpaceDescriptor("projR", 3)
    f = CoefficientSeq(SpaceDescriptor("projInf"), {1: 1.0})
    x4 = np.array([1.0, 0, 0, 0])
    y4 = np.array([0.5, np.sqrt(0.75), 0, 0])
    assert eval_kernel(proj, f, x4, y4) == pytest.approx(0.25)
    with pytest.raises(UsageError):
        eval_kernel(S2, CoefficientSeq(SpaceDescriptor("projInf"), {1: 1.0}), e1, y)


@pytest.mark.parametrize("path", shipped_specs(), ids=lambda p: p.name)
def test_shipped_specs_round_trip(path):
    raw = json.loads(path.read_text())
    kernel = parse_kernel(raw)
    assert serialize_kernel(kernel) == raw
    assert json.dumps(serialize_kernel(kernel)) == json.dumps(raw)
    assert parse_kernel(serialize_kernel(kernel)) == kernel


def test_random_round_trip(rng):
    for where in ORACLE_SPACES:
        f = random_seq(rng, where)
        assert parse_kernel(json.loads(json.dumps(serialize_kernel(f)))) == f
    for q in (1, 2, 4):
        f = random_biseq(rng, q)
        assert parse_kernel(json.loads(json.dumps(serialize_kernel(f)))) == f


def test_tail_truncation_bound():
    tail = Tail(0, 1, 1.0, 0.9)
    n = tail.terms_for(1e-10)
    assert tail.remainder(n) <= 1e-10 < tail.remainder(n - 1)
    assert PolyParams(0.0, 0.0) == S2.params
