"""Membership, the triangular group, orbit factors, faces and extreme rays.

The triangular group of a frame consists of block upper triangular matrices
``T`` with positive scalar diagonal blocks and off-diagonal blocks in
``V_ij``. It acts simply transitively on the cone by ``X -> T^T X T`` and on
the dual cone by ``Y -> proj_V(T Y T^T)``. Triangular elements are plain
``numpy`` arrays; the functions here check membership when it matters.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .dense import DEFAULT_TOL, Tolerance, as_square, cholesky_type, is_positive_definite, matrix_rank
from .exceptions import (
    DimensionMismatch,
    HomconeError,
    NotInClosure,
    NotInGroup,
    NotInSpan,
    NotInSubspace,
    NotInterior,
    NotPSD,
)
from .frame import IshiFrame, project_onto_V, require_homogeneous, span_residual

__all__ = [
    "Membership",
    "in_cone",
    "triangular_residual",
    "in_triangular_space",
    "diagonal_scalars",
    "is_in_group",
    "random_group_element",
    "random_interior_point",
    "group_act",
    "orbit_factor",
    "dual_orbit_factor",
    "is_dual_interior",
    "FaceDescriptor",
    "minimal_face",
    "extreme_ray",
    "face_span_projector",
    "project_onto_face_span",
    "maximal_chain_rank",
]


class Membership(str, enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"
    NOT_IN_SPAN = "not_in_span"


def _order(frame: IshiFrame, X, name: str = "X") -> np.ndarray:
    A = as_square(X, name)
    if A.shape[0] != frame.n:
        raise DimensionMismatch(f"{name} has order {A.shape[0]}, frame has order {frame.n}")
    return A


def in_cone(frame: IshiFrame, X, tol: Tolerance = DEFAULT_TOL) -> Membership:
    """Classify ``X`` relative to the cone ``S^n_{++} ∩ V`` and its closure."""
    X = _order(frame, X)
    if span_residual(frame, X) > tol.threshold(np.linalg.norm(X)):
        return Membership.NOT_IN_SPAN
    P = project_onto_V(frame, X)
    if is_positive_definite(P, tol):
        return Membership.INTERIOR
    try:
        cholesky_type(P, tol)
    except NotPSD:
        return Membership.OUTSIDE
    return Membership.BOUNDARY


def triangular_residual(frame: IshiFrame, T) -> float:
    """Frobenius distance from ``T`` to the space of block triangular matrices of the frame."""
    T = _order(frame, T, "T")
    bs = frame.blocks
    total = 0.0
    for i in range(1, frame.r + 1):
        for j in range(1, frame.r + 1):
            blk = bs.block(T, i, j)
            if i > j:
                total += float(np.sum(blk**2))
            elif i == j:
                c = np.trace(blk) / bs.sizes[i - 1]
                total += float(np.sum((blk - c * np.eye(bs.sizes[i - 1])) ** 2))
            else:
                total += frame.subspace(i, j).residual(blk) ** 2
    return float(np.sqrt(total))


def in_triangular_space(frame: IshiFrame, T, tol: Tolerance = DEFAULT_TOL) -> bool:
    T = _order(frame, T, "T")
    return triangular_residual(frame, T) <= tol.threshold(np.linalg.norm(T))


def diagonal_scalars(frame: IshiFrame, T) -> np.ndarray:
    """The scalars ``t_i`` with ``T_ii = t_i I``."""
    T = _order(frame, T, "T")
    bs = frame.blocks
    return np.array([np.trace(bs.block(T, i, i)) / bs.sizes[i - 1] for i in range(1, frame.r + 1)])


def is_in_group(frame: IshiFrame, T, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Membership in the triangular group (positive diagonal scalars)."""
    T = np.asarray(T, dtype=float)
    if T.shape != (frame.n, frame.n) or not in_triangular_space(frame, T, tol):
        return False
    d = diagonal_scalars(frame, T)
    return bool(np.all(d > tol.threshold(np.max(np.abs(d)))))


def _require_group(frame: IshiFrame, T, tol: Tolerance) -> np.ndarray:
    T = _order(frame, T, "T")
    if not is_in_group(frame, T, tol):
        raise NotInGroup("T is not block upper triangular with positive scalar diagonal and blocks in V_ij")
    return T


def random_group_element(frame: IshiFrame, rng: np.random.Generator, spread: float = 0.5) -> np.ndarray:
    """Random element of the triangular group.

    Diagonal scalars are ``exp(spread * N(0, 1))``; off-diagonal blocks have
    standard normal coordinates in the basis of ``V_ij``.
    """
    T = np.zeros((frame.n, frame.n))
    bs = frame.blocks
    for i in range(1, frame.r + 1):
        s = bs.span(i)
        T[s, s] = np.exp(spread * rng.standard_normal()) * np.eye(bs.sizes[i - 1])
    for (i, j), sub in frame.off_diag.items():
        if sub.dim:
            T[bs.span(i), bs.span(j)] = sub.from_coords(rng.standard_normal(sub.dim))
    return T


def random_interior_point(frame: IshiFrame, rng: np.random.Generator, spread: float = 0.5) -> np.ndarray:
    """``T^T T`` for a random group element ``T``."""
    T = random_group_element(frame, rng, spread)
    return T.T @ T


def group_act(frame: IshiFrame, T, X, side: str = "primal", tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Apply ``T`` to ``X``: ``T^T X T`` (primal) or ``proj_V(T X T^T)`` (dual).

    Raises
    ------
    NotInGroup
        If ``T`` is not in the triangular group.
    NotInSubspace
        If ``X`` is not in ``V``.
    """
    require_homogeneous(frame)
    T = _require_group(frame, T, tol)
    X = _order(frame, X)
    if span_residual(frame, X) > tol.threshold(np.linalg.norm(X)):
        raise NotInSubspace("X is not in V")
    if side == "primal":
        Y = T.T @ X @ T
        Y = (Y + Y.T) / 2.0
        if span_residual(frame, Y) > tol.threshold(np.linalg.norm(Y)):
            raise HomconeError("primal action left V; the frame axioms do not hold numerically")
        return Y
    if side == "dual":
        return project_onto_V(frame, T @ X @ T.T)
    raise ValueError(f"side must be 'primal' or 'dual', got {side!r}")


def _certify_triangular(frame: IshiFrame, T, tol: Tolerance) -> None:
    res = triangular_residual(frame, T)
    if res > tol.threshold(np.linalg.norm(T)):
        raise HomconeError(f"factor blocks leave the frame subspaces (residual {res:.3e})")


def orbit_factor(frame: IshiFrame, X, tol: Tolerance = DEFAULT_TOL, method: str = "cholesky") -> np.ndarray:
    """The unique group element ``T`` with ``T^T T = X`` for an interior ``X``.

    Parameters
    ----------
    method : {"cholesky", "recursion"}
        ``"cholesky"`` runs dense Cholesky and certifies that the blocks of the
        factor lie in the frame subspaces. ``"recursion"`` clears one block row
        at a time by ``X -> T_k^T X T_k`` and multiplies the inverses back.
        Both give the same factor.
    """
    require_homogeneous(frame)
    X = _order(frame, X)
    status = in_cone(frame, X, tol)
    if status is not Membership.INTERIOR:
        raise NotInterior(f"X is not an interior point of the cone ({status.value})")
    P = project_onto_V(frame, X)
    if method == "cholesky":
        T = cholesky_type(P, tol)
    elif method == "recursion":
        T = _factor_by_recursion(frame, P)
    else:
        raise ValueError(f"unknown method {method!r}")
    _certify_triangular(frame, T, tol)
    return T


def _factor_by_recursion(frame: IshiFrame, X: np.ndarray) -> np.ndarray:
    bs = frame.blocks
    n = frame.n
    Xk = X.copy()
    inverses = []
    for k in range(1, frame.r):
        sk = bs.span(k)
        xk = Xk[sk, sk][0, 0]
        Tk = np.eye(n)
        Tk[sk, sk.stop:] = -Xk[sk, sk.stop:] / xk
        Xk = Tk.T @ Xk @ Tk
        Xk = (Xk + Xk.T) / 2.0
        # T_k is unipotent with a single nonzero block row, so its inverse is 2I - T_k
        inverses.append(2.0 * np.eye(n) - Tk)
    root = np.zeros((n, n))
    for i in range(1, frame.r + 1):
        s = bs.span(i)
        root[s, s] = np.sqrt(np.trace(Xk[s, s]) / bs.sizes[i - 1]) * np.eye(bs.sizes[i - 1])
    T = root
    for inv in reversed(inverses):
        T = T @ inv
    return T


def dual_orbit_factor(frame: IshiFrame, Y, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """The unique group element ``T`` with ``proj_V(T T^T) = Y``.

    Solves for the blocks of ``T`` column by column from the last block to the
    first. Success is equivalent to ``Y`` lying in the interior of the dual
    cone, so this also serves as an exact interior test there.

    Raises
    ------
    NotInSpan
        If ``Y`` is not in ``V``.
    NotInterior
        If some diagonal scalar would be non-positive.
    """
    require_homogeneous(frame)
    Y = _order(frame, Y, "Y")
    if span_residual(frame, Y) > tol.threshold(np.linalg.norm(Y)):
        raise NotInSpan("Y is not in V")
    Y = project_onto_V(frame, Y)
    bs = frame.blocks
    r = frame.r
    T = np.zeros_like(Y)
    scale = max(float(np.max(np.diag(Y))), 0.0)
    thr = tol.threshold(scale)
    for b in range(r, 0, -1):
        sb, nb = bs.span(b), bs.sizes[b - 1]
        yb = Y[sb, sb][0, 0]
        tail = sum(float(np.sum(T[sb, bs.span(c)] ** 2)) for c in range(b + 1, r + 1))
        tb2 = yb - tail / nb
        if tb2 <= thr:
            raise NotInterior(f"Y is not in the interior of the dual cone (block {b})")
        tb = np.sqrt(tb2)
        T[sb, sb] = tb * np.eye(nb)
        for a in range(1, b):
            sa = bs.span(a)
            acc = Y[sa, sb].copy()
            for c in range(b + 1, r + 1):
                sc = bs.span(c)
                acc -= frame.subspace(a, b).project(T[sa, sc] @ T[sb, sc].T)
            T[sa, sb] = acc / tb
    return T


def is_dual_interior(frame: IshiFrame, Y, tol: Tolerance = DEFAULT_TOL) -> bool:
    try:
        dual_orbit_factor(frame, Y, tol)
    except (NotInterior, NotInSpan):
        return False
    return True


@dataclass(frozen=True, eq=False)
class FaceDescriptor:
    """A face named by a group element and an index set.

    Primal faces are ``{T^T X T : X in S^n_+ ∩ V^B}``; dual faces are the
    images of ``proj_{V^N} S^n_+`` under the dual action of ``T``.
    """

    frame: IshiFrame
    T: np.ndarray
    indices: tuple
    side: str = "primal"

    @property
    def rank(self) -> int:
        return len(self.indices)

    def point(self) -> np.ndarray:
        """The canonical relative interior point ``T^T I^B T`` (or its dual analogue)."""
        D = self.frame.blocks.indicator(self.indices)
        if self.side == "primal":
            return self.T.T @ D @ self.T
        return project_onto_V(self.frame, self.T @ D @ self.T.T)


def minimal_face(frame: IshiFrame, X, tol: Tolerance = DEFAULT_TOL) -> FaceDescriptor:
    """The face of the closed cone containing ``X`` in its relative interior.

    Computes the Cholesky-type factor ``T0`` of ``X``; ``B`` is the set of
    blocks with a positive diagonal scalar and ``T`` is ``T0`` with its zero
    diagonal blocks replaced by identities, so that ``X = T^T I^B T``.

    Raises
    ------
    NotInSpan
        If ``X`` is not in ``V``.
    NotInClosure
        If ``X`` is not positive semidefinite.
    """
    require_homogeneous(frame)
    X = _order(frame, X)
    status = in_cone(frame, X, tol)
    if status is Membership.NOT_IN_SPAN:
        raise NotInSpan("X is not in V")
    if status is Membership.OUTSIDE:
        raise NotInClosure("X is not positive semidefinite")
    T0 = cholesky_type(project_onto_V(frame, X), tol)
    _certify_triangular(frame, T0, tol)
    bs = frame.blocks
    d = diagonal_scalars(frame, T0)
    B = tuple(i for i in range(1, frame.r + 1) if d[i - 1] > 0.0)
    T = T0.copy()
    for i in range(1, frame.r + 1):
        if i not in B:
            s = bs.span(i)
            T[s, :] = 0.0
            T[s, s] = np.eye(bs.sizes[i - 1])
    return FaceDescriptor(frame, T, B, "primal")


def extreme_ray(frame: IshiFrame, T, i: int, side: str = "primal", tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Generator ``T^T I^{i} T`` (primal) or ``proj_V(T I^{i} T^T)`` (dual) of an extreme ray."""
    T = _require_group(frame, T, tol)
    D = frame.blocks.indicator([i])
    if side == "primal":
        G = T.T @ D @ T
        return (G + G.T) / 2.0
    if side == "dual":
        return project_onto_V(frame, T @ D @ T.T)
    raise ValueError(f"side must be 'primal' or 'dual', got {side!r}")


def project_onto_face_span(frame: IshiFrame, S, indices) -> np.ndarray:
    """Project onto ``V^B``: project onto ``V`` and zero every block touching an index outside ``B``."""
    P = project_onto_V(frame, S)
    keep = np.zeros(frame.n, dtype=bool)
    for i in indices:
        keep[frame.blocks.span(i)] = True
    P[~keep, :] = 0.0
    P[:, ~keep] = 0.0
    return P


def face_span_projector(frame: IshiFrame, indices):
    """Return the orthogonal projector onto ``V^B`` as a callable."""
    B = tuple(sorted(set(indices)))
    for i in B:
        if not 1 <= i <= frame.r:
            raise IndexError(f"block index {i} outside 1..{frame.r}")
    return lambda S: project_onto_face_span(frame, S, B)


def _span_dimension(frame: IshiFrame, indices, tol: Tolerance) -> int:
    images = [project_onto_face_span(frame, E, indices).ravel() for E in frame.basis_of_V()]
    M = np.array(images)
    return matrix_rank(M @ M.T, tol)


def maximal_chain_rank(frame: IshiFrame, tol: Tolerance = DEFAULT_TOL) -> int:
    """Length of the chain of faces ``F_{I,{1..r}} ⊋ ... ⊋ F_{I,{1}} ⊋ {0}``.

    Each strict inclusion is confirmed by a drop in the dimension of the
    linear span of the face, computed independently as a numerical rank.
    """
    require_homogeneous(frame)
    dims = [_span_dimension(frame, range(1, p + 1), tol) for p in range(frame.r, -1, -1)]
    length = 0
    for big, small in itertools.pairwise(dims):
        if small >= big:
            raise HomconeError(f"face chain is not strictly decreasing: spans {dims}")
        length += 1
    return length
