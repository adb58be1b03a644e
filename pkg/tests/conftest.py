import math

import numpy as np
import pytest

import soficgibbs as sg

PHI = (1 + math.sqrt(5)) / 2


def loop_shift(k):
    """Full k-shift as a single vertex with k loop edges."""
    return sg.EdgeShift(("*",), tuple(sg.Edge("*", "*", str(i)) for i in range(k)))


def random_markov_measure(shift, rng):
    """A random fully supported stationary Markov measure on the shift.

    Transitions are Dirichlet-ish per vertex; the stationary vector comes
    from numpy's eigensolver and is polished by the lazy chain, so it meets
    the construction tolerances independently of the library's Perron code.
    """
    transitions = {}
    for v in shift.vertices:
        out = shift.out_edges(v)
        weights = rng.uniform(0.1, 1.0, size=len(out))
        weights /= weights.sum()
        for e, w in zip(out, weights):
            transitions[e.id] = float(w)
    n = len(shift.vertices)
    idx = shift.vertex_index
    t = np.zeros((n, n))
    for e in shift.edges:
        t[idx[e.source], idx[e.target]] += transitions[e.id]
    vals, vecs = np.linalg.eig(t.T)
    i = int(np.argmin(np.abs(vals - 1.0)))
    x = np.real(vecs[:, i])
    x = np.abs(x)
    x /= x.sum()
    half = 0.5 * (t + np.eye(n))
    for _ in range(400):
        x = x @ half
        x /= x.sum()
    stationary = {v: float(x[idx[v]]) for v in shift.vertices}
    return sg.MarkovMeasure(shift, stationary, transitions)


def brute_sft_language(alphabet, forbidden, window, n, cycle_length=None):
    """Independent language oracle for an irreducible SFT: factors of clean
    cyclic sequences, enumerated from the raw forbidden-word definition."""
    symbols = tuple(alphabet)
    forbidden = {tuple(w) for w in forbidden}
    if cycle_length is None:
        cycle_length = n + 2 * window + 2

    def cyclic_clean(seq):
        doubled = seq + seq
        for m in range(1, window + 1):
            for i in range(len(seq)):
                if doubled[i:i + m] in forbidden:
                    return False
        return True

    words = set()
    stack = [()]
    while stack:
        seq = stack.pop()
        if len(seq) == cycle_length:
            if cyclic_clean(seq):
                doubled = seq + seq
                for i in range(len(seq)):
                    words.add(doubled[i:i + n])
            continue
        for s in symbols:
            stack.append(seq + (s,))
    return sorted(words)


@pytest.fixture
def alpha01():
    return sg.Alphabet(("0", "1"))


@pytest.fixture
def golden_mean(alpha01):
    return sg.sft_from_forbidden_words(alpha01, {("1", "1")}, 2)


@pytest.fixture
def full2_2block(alpha01):
    """Full 2-shift presented on vertex set {0, 1} with edges the 2-windows."""
    return sg.sft_from_forbidden_words(alpha01, set(), 2)


@pytest.fixture
def even_cover():
    """Right-resolving presentation of the even shift (runs of 0 between 1s
    have even length)."""
    return sg.SoficPresentation(("A", "B"), (
        sg.LabeledEdge("A", "A", "1", "a"),
        sg.LabeledEdge("A", "B", "0", "b"),
        sg.LabeledEdge("B", "A", "0", "c"),
    ))


@pytest.fixture
def xor_code(full2_2block):
    """Degree-2 parity code: edge (a, b) of the full 2-shift maps to a xor b."""
    labels = {e.id: str(int(e.id[0] != e.id[1])) for e in full2_2block.edges}
    return sg.SlidingBlockCode.one_block(full2_2block, labels)


@pytest.fixture
def amalgamation():
    """Symbol merge 0,1,2 -> 0,1,1 between full shifts (not finite-to-one)."""
    full3 = loop_shift(3)
    return sg.SlidingBlockCode.one_block(
        full3, {"0": "0", "1": "1", "2": "1"}, sg.Alphabet(("0", "1")))


@pytest.fixture
def period2_parallel():
    """Irreducible period-2 graph: two parallel edges one way, one back."""
    return sg.EdgeShift(("u", "v"), (
        sg.Edge("u", "v", "p1"), sg.Edge("u", "v", "p2"), sg.Edge("v", "u", "q")))


@pytest.fixture
def two_cycle():
    return sg.EdgeShift(("a", "b"), (sg.Edge("a", "b", "x"), sg.Edge("b", "a", "y")))
