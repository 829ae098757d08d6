import numpy as np
import pytest

from isokernel.kernelmodel import BiCoefficientSeq, BiTail, CoefficientSeq, SpaceDescriptor, Tail


def compact_spaces(max_d=16):
    spaces = [SpaceDescriptor("circle")]
    spaces += [SpaceDescriptor("sphere", d) for d in range(2, max_d + 1)]
    spaces += [SpaceDescriptor("projR", d) for d in range(2, max_d + 1)]
    spaces += [SpaceDescriptor("projC", d) for d in range(4, max_d + 1, 2)]
    spaces += [SpaceDescriptor("projH", d) for d in range(8, max_d + 1, 4)]
    if max_d >= 16:
        spaces.append(SpaceDescriptor("cayley16"))
    return spaces


def random_seq(rng, where, max_index=12, tail_prob=0.5, min_terms=1):
    """Random valid sequence with head indices <= max_index and maybe one tail past it."""
    size = rng.integers(min_terms, 5)
    idx = rng.choice(max_index + 1, size=size, replace=False)
    head = {int(k): float(rng.uniform(0.1, 2.0)) for k in idx}
    tails = []
    if rng.random() < tail_prob:
        step = int(rng.integers(1, 4))
        tails.append(Tail(max_index + 1 + int(rng.integers(0, 3)), step,
                          float(rng.uniform(0.1, 1.0)), float(rng.uniform(0.1, 0.6))))
    return CoefficientSeq(where, head, tails)


def random_biseq(rng, q, max_index=4, tail_prob=0.5):
    where = SpaceDescriptor("complexSphere", q=q)
    keys = {(int(rng.integers(0, max_index + 1)), int(rng.integers(0, max_index + 1)))
            for _ in range(rng.integers(1, 4))}
    head = {k: float(rng.uniform(0.1, 2.0)) for k in keys}
    tails = []
    if rng.random() < tail_prob:
        m0 = max_index + 1
        dm, dn = [(1, 0), (0, 1), (1, 1), (2, 1)][rng.integers(0, 4)]
        tails.append(BiTail(m0 + int(rng.integers(0, 2)), m0, dm, dn,
                            float(rng.uniform(0.1, 1.0)), float(rng.uniform(0.1, 0.6))))
    return BiCoefficientSeq(where, head, tails)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
