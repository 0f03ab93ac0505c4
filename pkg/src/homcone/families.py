"""Named frames and frame constructions.

Everything here returns :class:`~homcone.frame.IshiFrame` objects built from
explicit generators. Constructions that preserve the closure axioms
(direct sums, complexification of sparse frames, tensoring with an identity,
block rotations) are used to produce test frames with block sizes above one.
"""

from __future__ import annotations

import itertools

import numpy as np

from .frame import IshiFrame, make_frame

__all__ = [
    "vinberg_frame",
    "vinberg_dual_frame",
    "primal_witness_frame",
    "full_frame",
    "diagonal_frame",
    "lorentz_frame",
    "sparse_frame",
    "complexify",
    "tensor_identity",
    "direct_sum",
    "rotate_blocks",
    "random_rooted_forest_edges",
    "random_homogeneous_frame",
    "named_frames",
]

_J = np.array([[0.0, -1.0], [1.0, 0.0]])


def sparse_frame(n: int, edges) -> IshiFrame:
    """Frame with all block sizes one and ``V_ij = R`` exactly for ``(i, j)`` in ``edges``."""
    gens = {}
    for u, v in edges:
        i, j = min(u, v), max(u, v)
        gens[(i, j)] = [np.ones((1, 1))]
    return make_frame([1] * n, gens)


def vinberg_frame() -> IshiFrame:
    """Smallest non-selfdual homogeneous cone: 3x3 matrices with a zero at (1, 2)."""
    return sparse_frame(3, [(1, 3), (2, 3)])


def vinberg_dual_frame() -> IshiFrame:
    """A frame whose cone is isomorphic to the dual of :func:`vinberg_frame`.

    Block sizes ``(2, 1, 1)`` with ``V_12 = span{e_1}``, ``V_13 = span{e_2}`` and
    ``V_23 = 0``. It satisfies the dual dimension condition and fails the
    primal one at ``(1, 2, 3)``.
    """
    e1, e2 = np.array([[1.0], [0.0]]), np.array([[0.0], [1.0]])
    return make_frame([2, 1, 1], {(1, 2): [e1], (1, 3): [e2]})


def primal_witness_frame() -> IshiFrame:
    """Rank-3 frame with ``dim V_12 = 1``, ``dim V_13 = 2``, ``dim V_23 = 1``.

    Block sizes ``(2, 1, 1)``, ``V_12 = span{e_1}``, ``V_13 = R^{2x1}`` and
    ``V_23 = R``. The pair ``A = e_1``, ``B = e_2`` gives a strict primal
    witness inequality at ``(1, 2, 3)``.
    """
    e1, e2 = np.array([[1.0], [0.0]]), np.array([[0.0], [1.0]])
    return make_frame([2, 1, 1], {(1, 2): [e1], (1, 3): [e1, e2], (2, 3): [np.ones((1, 1))]})


def full_frame(n: int) -> IshiFrame:
    """The frame of all positive definite ``n x n`` matrices (sizes all one)."""
    return sparse_frame(n, itertools.combinations(range(1, n + 1), 2))


def diagonal_frame(n: int) -> IshiFrame:
    """Diagonal matrices: the nonnegative orthant."""
    return make_frame([1] * n, {})


def lorentz_frame(m: int) -> IshiFrame:
    """Second-order cone of dimension ``m + 2``: sizes ``(m, 1)`` and ``V_12 = R^{m x 1}``."""
    basis = [np.eye(m)[:, [p]] for p in range(m)]
    return make_frame([m, 1], {(1, 2): basis})


def complexify(frame: IshiFrame) -> IshiFrame:
    """Replace each real one-dimensional block by a copy of the complex numbers.

    Only defined for frames with all sizes one. Block sizes double and every
    nontrivial ``V_ij`` becomes ``span{I_2, J}`` with ``J`` the rotation by a
    right angle, so the result is the Hermitian analogue of the sparse cone.
    """
    if any(s != 1 for s in frame.sizes):
        raise ValueError("complexify expects a frame with all block sizes equal to one")
    gens = {key: [np.eye(2), _J] for key, sub in frame.off_diag.items() if sub.dim}
    return make_frame([2] * frame.r, gens)


def tensor_identity(frame: IshiFrame, m: int) -> IshiFrame:
    """Kronecker product of every block with ``I_m``; preserves the axioms."""
    I = np.eye(m)
    gens = {key: [np.kron(E, I) for E in sub.basis] for key, sub in frame.off_diag.items() if sub.dim}
    return make_frame([s * m for s in frame.sizes], gens)


def direct_sum(*frames: IshiFrame, interleave=None) -> IshiFrame:
    """Direct sum of frames, optionally interleaving their blocks.

    Parameters
    ----------
    interleave : sequence of int, optional
        Which summand each block of the result comes from, e.g. ``[0, 1, 0]``.
        Blocks of one summand keep their relative order, which keeps the
        result axiom-passing. Defaults to concatenation.
    """
    if interleave is None:
        interleave = [p for p, f in enumerate(frames) for _ in range(f.r)]
    interleave = list(interleave)
    for p, f in enumerate(frames):
        if interleave.count(p) != f.r:
            raise ValueError(f"interleave must use summand {p} exactly {f.r} times")
    if len(interleave) != sum(f.r for f in frames):
        raise ValueError("interleave has the wrong length")
    counters = [0] * len(frames)
    position = {}
    for new, p in enumerate(interleave, start=1):
        counters[p] += 1
        position[(p, counters[p])] = new
    sizes = [0] * len(interleave)
    gens = {}
    for p, f in enumerate(frames):
        for i in range(1, f.r + 1):
            sizes[position[(p, i)] - 1] = f.sizes[i - 1]
        for (i, j), sub in f.off_diag.items():
            if sub.dim:
                gens[(position[(p, i)], position[(p, j)])] = list(sub.basis)
    return make_frame(sizes, gens)


def rotate_blocks(frame: IshiFrame, rng: np.random.Generator) -> IshiFrame:
    """Conjugate by a random block-diagonal orthogonal matrix.

    ``V_ij`` becomes ``Q_i^T V_ij Q_j``; the diagonal subspaces are unchanged,
    so the axioms and all subspace dimensions are preserved.
    """
    Qs = []
    for s in frame.sizes:
        Q, R = np.linalg.qr(rng.standard_normal((s, s)))
        Qs.append(Q * np.sign(np.diag(R)))
    gens = {
        (i, j): [Qs[i - 1].T @ E @ Qs[j - 1] for E in sub.basis]
        for (i, j), sub in frame.off_diag.items()
        if sub.dim
    }
    return make_frame(frame.sizes, gens)


def random_rooted_forest_edges(n: int, rng: np.random.Generator) -> list:
    """Edges of a random graph in which every vertex is joined to all its ancestors.

    Vertices are labelled so that each ancestor carries a larger label than
    its descendants, which yields a labelling of a homogeneous chordal graph.
    """
    parent = {}
    for v in range(n, 0, -1):
        # a vertex may attach to any vertex with a larger label, or start a new tree
        choices = list(range(v + 1, n + 1))
        if choices and rng.random() < 0.8:
            parent[v] = int(rng.choice(choices))
    edges = set()
    for v in range(1, n + 1):
        a = parent.get(v)
        while a is not None:
            edges.add((v, a))
            a = parent.get(a)
    return sorted(edges)


def random_homogeneous_frame(rng: np.random.Generator, max_rank: int = 5) -> IshiFrame:
    """A random axiom-passing frame drawn from several constructions.

    The kinds are: a sparse frame from a random rooted forest, its
    complexification, a Kronecker lift, a Lorentz frame, an interleaved
    direct sum of two such frames, and one of the rank-3 named frames. The
    result is finally conjugated by a random block rotation.
    """
    kind = int(rng.integers(6))
    r = int(rng.integers(2, max_rank + 1))
    if kind == 0:
        f = sparse_frame(r, random_rooted_forest_edges(r, rng))
    elif kind == 1:
        f = complexify(sparse_frame(min(r, 4), random_rooted_forest_edges(min(r, 4), rng)))
    elif kind == 2:
        base = sparse_frame(min(r, 4), random_rooted_forest_edges(min(r, 4), rng))
        f = tensor_identity(base, int(rng.integers(2, 4)))
    elif kind == 3:
        f = lorentz_frame(int(rng.integers(1, 4)))
    elif kind == 4:
        a = random_homogeneous_frame(rng, max_rank=3)
        b = random_homogeneous_frame(rng, max_rank=3)
        order = [0] * a.r + [1] * b.r
        rng.shuffle(order)
        f = direct_sum(a, b, interleave=order)
    else:
        f = [vinberg_frame, vinberg_dual_frame, primal_witness_frame][int(rng.integers(3))]()
    return rotate_blocks(f, rng)


def named_frames() -> dict:
    """Built-in axiom-passing frames keyed by a short name.

    Covers the sparse rank-four classes, small full frames, the rank-three
    frames failing one dimension condition each (or both), a Lorentz frame
    and frames with larger blocks from complexification and Kronecker lifts.
    """
    out = {
        "vinberg": vinberg_frame(),
        "vinberg_dual": vinberg_dual_frame(),
        "primal_witness": primal_witness_frame(),
        "K4(7)": sparse_frame(4, [(1, 4), (2, 4), (3, 4)]),
        "K4(8)": sparse_frame(4, [(2, 3), (1, 4), (2, 4), (3, 4)]),
        "K4(9)": sparse_frame(4, [(1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]),
        "lorentz3": lorentz_frame(3),
        "complex_K4(8)": complexify(sparse_frame(4, [(2, 3), (1, 4), (2, 4), (3, 4)])),
        "vinberg_x2": tensor_identity(vinberg_frame(), 2),
        "sum_vinberg_S2": direct_sum(vinberg_frame(), full_frame(2), interleave=[0, 1, 0, 1, 0]),
    }
    for n in range(1, 5):
        out[f"S{n}"] = full_frame(n)
    return out
