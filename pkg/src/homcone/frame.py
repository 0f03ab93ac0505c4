"""Block frames: the data that defines a block matrix spectrahedral cone.

A frame fixes block sizes ``n_1, ..., n_r`` and, for every ``i < j``, a
subspace ``V_ij`` of ``n_i x n_j`` real matrices. The associated space
``V`` consists of symmetric matrices whose diagonal blocks are multiples of
the identity and whose ``(i, j)`` blocks lie in ``V_ij``. The cone is
``V`` intersected with the positive definite matrices.

Block indices are 1-based throughout the public API, matching the usual
mathematical notation (``V_12``, triples ``(i, j, k)``, index sets ``B``).
Elements of ``V`` are ordinary ``numpy`` arrays of order ``n``.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .dense import DEFAULT_TOL, Tolerance, frobenius_inner
from .exceptions import (
    AxiomNotVerified,
    DimensionMismatch,
    NotInSubspace,
    ShapeMismatch,
)

__all__ = [
    "BlockStructure",
    "Subspace",
    "IshiFrame",
    "AxiomViolation",
    "AxiomReport",
    "BlockOperator",
    "IdentityCheck",
    "make_frame",
    "verify_axioms",
    "require_homogeneous",
    "project_onto_V",
    "span_residual",
    "left_mult",
    "right_mult",
    "operator_identity_residuals",
]

# generators this close to orthonormal are stored verbatim (bit-exact round trips)
_ORTHONORMAL_ATOL = 1e-13


@dataclass(frozen=True)
class BlockStructure:
    sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError(f"block sizes must be positive integers, got {self.sizes!r}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def r(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @cached_property
    def offsets(self) -> tuple:
        return tuple(int(x) for x in np.concatenate([[0], np.cumsum(self.sizes)[:-1]]))

    def span(self, i: int) -> slice:
        """Row/column slice of block ``i`` (1-based)."""
        if not 1 <= i <= self.r:
            raise IndexError(f"block index {i} outside 1..{self.r}")
        start = self.offsets[i - 1]
        return slice(start, start + self.sizes[i - 1])

    def block(self, X: np.ndarray, i: int, j: int) -> np.ndarray:
        return X[self.span(i), self.span(j)]

    def indicator(self, indices: Iterable[int]) -> np.ndarray:
        """Diagonal 0/1 matrix selecting the blocks in ``indices``."""
        D = np.zeros((self.n, self.n))
        for i in indices:
            s = self.span(i)
            D[s, s] = np.eye(self.sizes[i - 1])
        return D


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of ``rows x cols`` matrices given by a trace-orthonormal basis."""

    rows: int
    cols: int
    basis: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _stack(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, self.rows * self.cols))
        return np.stack([E.ravel() for E in self.basis])

    @classmethod
    def scalar(cls, n: int) -> "Subspace":
        """The diagonal subspace ``R * I_n``."""
        return cls(n, n, (np.eye(n) / np.sqrt(n),))

    def coords(self, M) -> np.ndarray:
        M = np.asarray(M, dtype=float)
        if M.shape != (self.rows, self.cols):
            raise DimensionMismatch(f"expected a {self.rows}x{self.cols} matrix, got {M.shape}")
        return self._stack @ M.ravel()

    def from_coords(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        return (c @ self._stack).reshape(self.rows, self.cols) if self.dim else np.zeros((self.rows, self.cols))

    def project(self, M) -> np.ndarray:
        return self.from_coords(self.coords(M))

    def residual(self, M) -> float:
        """Frobenius distance from ``M`` to the subspace."""
        M = np.asarray(M, dtype=float)
        return float(np.linalg.norm(M - self.project(M)))

    def contains(self, M, tol: Tolerance = DEFAULT_TOL) -> bool:
        M = np.asarray(M, dtype=float)
        return self.residual(M) <= tol.threshold(np.linalg.norm(M))

    def gram(self) -> np.ndarray:
        return self._stack @ self._stack.T


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    indices: tuple
    basis_pair: tuple
    residual: float

    def __str__(self):
        idx = ",".join(map(str, self.indices))
        return f"[{self.axiom}] at ({idx}) basis pair {self.basis_pair}: residual {self.residual:.3e}"


@dataclass(frozen=True)
class AxiomReport:
    violations: tuple = ()
    warnings: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True, eq=False)
class IshiFrame:
    """Block sizes plus one orthonormal-basis subspace per pair ``i < j``.

    ``off_diag`` holds an entry for every ``i < j`` (possibly zero-dimensional).
    The diagonal subspaces ``R * I_{n_i}`` are implicit. Build frames with
    :func:`make_frame` rather than calling this constructor directly.
    """

    blocks: BlockStructure
    off_diag: Mapping = field(default_factory=dict)
    dropped: tuple = ()

    @property
    def r(self) -> int:
        return self.blocks.r

    @property
    def n(self) -> int:
        return self.blocks.n

    @property
    def sizes(self) -> tuple:
        return self.blocks.sizes

    def subspace(self, i: int, j: int) -> Subspace:
        if i == j:
            return Subspace.scalar(self.sizes[i - 1])
        if i > j:
            raise KeyError(f"only V_ij with i <= j exist, asked for ({i},{j})")
        return self.off_diag[(i, j)]

    def dim_of(self, i: int, j: int) -> int:
        return self.subspace(i, j).dim

    def dims(self) -> dict:
        return {key: sub.dim for key, sub in sorted(self.off_diag.items())}

    @property
    def dimension(self) -> int:
        """Dimension of the space ``V`` spanned by the cone."""
        return self.r + sum(sub.dim for sub in self.off_diag.values())

    def embed(self, i: int, j: int, M, symmetric: bool = True) -> np.ndarray:
        """Place ``M`` in block ``(i, j)`` of a zero ``n x n`` matrix (and its transpose at ``(j, i)``)."""
        X = np.zeros((self.n, self.n))
        X[self.blocks.span(i), self.blocks.span(j)] = M
        if symmetric and i != j:
            X[self.blocks.span(j), self.blocks.span(i)] = np.asarray(M).T
        return X

    def basis_of_V(self) -> list:
        """Trace-orthonormal basis of ``V`` made of block-supported symmetric matrices."""
        out = []
        for i in range(1, self.r + 1):
            out.append(self.embed(i, i, Subspace.scalar(self.sizes[i - 1]).basis[0]))
        for (i, j), sub in sorted(self.off_diag.items()):
            for E in sub.basis:
                out.append(self.embed(i, j, E) / np.sqrt(2.0))
        return out

    @cached_property
    def axiom_report(self) -> AxiomReport:
        return verify_axioms(self)

    @property
    def is_homogeneous(self) -> bool:
        return self.axiom_report.ok

    def __eq__(self, other):
        if not isinstance(other, IshiFrame):
            return NotImplemented
        if self.sizes != other.sizes or set(self.off_diag) != set(other.off_diag):
            return False
        for key, sub in self.off_diag.items():
            o = other.off_diag[key]
            if sub.dim != o.dim or not all(np.array_equal(a, b) for a, b in zip(sub.basis, o.basis)):
                return False
        return True

    __hash__ = None

    def __repr__(self):
        dims = {f"{i},{j}": d for (i, j), d in self.dims().items() if d}
        return f"IshiFrame(sizes={list(self.sizes)}, dims={dims})"


def _parse_key(key) -> tuple:
    if isinstance(key, str):
        parts = key.replace("(", "").replace(")", "").split(",")
        if len(parts) != 2:
            raise ShapeMismatch(f"subspace key {key!r} is not of the form 'i,j'")
        return int(parts[0]), int(parts[1])
    i, j = key
    return int(i), int(j)


def _as_matrix_list(value) -> list:
    if value is None:
        return []
    if isinstance(value, np.ndarray) and value.ndim == 2:
        return [value]
    if isinstance(value, (list, tuple)) and len(value) == 0:
        return []
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 2:
        return [arr]
    if arr.ndim == 3:
        return list(arr)
    raise ShapeMismatch(f"generators must be a matrix or a list of matrices, got ndim {arr.ndim}")


def _orthonormalize(mats: list, tol: Tolerance) -> tuple:
    """Gram-Schmidt (two passes) under the trace inner product.

    Returns the basis and the indices of generators that were dropped as
    linearly dependent.
    """
    if not mats:
        return (), []
    G = np.array([[frobenius_inner(a, b) for b in mats] for a in mats])
    if np.allclose(G, np.eye(len(mats)), rtol=0.0, atol=_ORTHONORMAL_ATOL):
        return tuple(np.array(m, dtype=float) for m in mats), []
    basis, dropped = [], []
    for idx, M in enumerate(mats):
        v = np.array(M, dtype=float)
        norm0 = np.linalg.norm(v)
        for _ in range(2):
            for E in basis:
                v = v - frobenius_inner(E, v) * E
        norm = np.linalg.norm(v)
        if norm <= tol.threshold(norm0) or norm0 == 0.0:
            dropped.append(idx)
            continue
        basis.append(v / norm)
    return tuple(basis), dropped


def make_frame(sizes, generators: Mapping | None = None, tol: Tolerance = DEFAULT_TOL) -> IshiFrame:
    """Build a frame from block sizes and spanning sets for the ``V_ij``.

    Parameters
    ----------
    sizes : sequence of int
        Block sizes ``n_1, ..., n_r``.
    generators : mapping, optional
        Keys are ``(i, j)`` tuples or ``"i,j"`` strings with ``1 <= i < j <= r``;
        values are a single ``n_i x n_j`` matrix or a list of them. Missing
        pairs give trivial subspaces.

    Linearly dependent generators are dropped (recorded in ``frame.dropped``
    and emitted as a ``UserWarning``); wrong shapes raise ``ShapeMismatch``.
    """
    blocks = BlockStructure(tuple(sizes))
    r = blocks.r
    raw = {}
    for key, value in (generators or {}).items():
        i, j = _parse_key(key)
        if not (1 <= i < j <= r):
            raise ShapeMismatch(f"subspace key ({i},{j}) must satisfy 1 <= i < j <= {r}")
        if (i, j) in raw:
            raise ShapeMismatch(f"subspace ({i},{j}) given twice")
        mats = _as_matrix_list(value)
        shape = (blocks.sizes[i - 1], blocks.sizes[j - 1])
        for M in mats:
            if np.shape(M) != shape:
                raise ShapeMismatch(f"generator for V_{i}{j} has shape {np.shape(M)}, expected {shape}")
        raw[(i, j)] = mats

    off_diag, notes = {}, []
    for i, j in itertools.combinations(range(1, r + 1), 2):
        basis, dropped = _orthonormalize(raw.get((i, j), []), tol)
        for idx in dropped:
            notes.append(f"generator {idx} of V_{i},{j} is linearly dependent and was dropped")
        off_diag[(i, j)] = Subspace(blocks.sizes[i - 1], blocks.sizes[j - 1], basis)
    for note in notes:
        warnings.warn(note, stacklevel=2)
    return IshiFrame(blocks, off_diag, tuple(notes))


def verify_axioms(frame: IshiFrame, tol: Tolerance = DEFAULT_TOL, stop_at_first: bool = False) -> AxiomReport:
    """Check the three closure axioms on every pair of basis elements.

    ``V1``: ``A_ij B_jk`` in ``V_ik``; ``V2``: ``A_ij^T B_ik`` in ``V_jk``;
    ``V3``: ``A^T B + B^T A`` in ``R I`` for ``A, B`` in ``V_ij``.
    The first two are bilinear and the third is the polarization of a
    quadratic condition, so checking basis pairs is exhaustive. Cases with
    a repeated index hold automatically and are skipped.
    """
    violations = []

    def record(axiom, idx, pair, M, target):
        res = target.residual(M)
        if res > tol.threshold(np.linalg.norm(M)):
            violations.append(AxiomViolation(axiom, idx, pair, res))
            return True
        return False

    r = frame.r
    for i, j, k in itertools.combinations(range(1, r + 1), 3):
        Vij, Vjk, Vik = frame.subspace(i, j), frame.subspace(j, k), frame.subspace(i, k)
        for (p, A), (q, B) in itertools.product(enumerate(Vij.basis), enumerate(Vjk.basis)):
            if record("V1", (i, j, k), (p, q), A @ B, Vik) and stop_at_first:
                return AxiomReport(tuple(violations), frame.dropped)
        for (p, A), (q, B) in itertools.product(enumerate(Vij.basis), enumerate(Vik.basis)):
            if record("V2", (i, j, k), (p, q), A.T @ B, Vjk) and stop_at_first:
                return AxiomReport(tuple(violations), frame.dropped)
    for i, j in itertools.combinations(range(1, r + 1), 2):
        basis = frame.subspace(i, j).basis
        diag = Subspace.scalar(frame.sizes[j - 1])
        for p, q in itertools.combinations_with_replacement(range(len(basis)), 2):
            A, B = basis[p], basis[q]
            if record("V3", (i, j), (p, q), A.T @ B + B.T @ A, diag) and stop_at_first:
                return AxiomReport(tuple(violations), frame.dropped)
    return AxiomReport(tuple(violations), frame.dropped)


def require_homogeneous(frame: IshiFrame) -> None:
    if not frame.is_homogeneous:
        first = frame.axiom_report.violations[0]
        raise AxiomNotVerified(f"frame fails the closure axioms, e.g. {first}")


def _check_order(frame: IshiFrame, S) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.shape != (frame.n, frame.n):
        raise DimensionMismatch(f"expected a matrix of order {frame.n}, got shape {S.shape}")
    return S


def project_onto_V(frame: IshiFrame, S) -> np.ndarray:
    """Orthogonal projection (trace inner product) of an ``n x n`` matrix onto ``V``."""
    S = _check_order(frame, S)
    S = (S + S.T) / 2.0
    bs = frame.blocks
    out = np.zeros_like(S)
    for i in range(1, frame.r + 1):
        s = bs.span(i)
        out[s, s] = np.trace(S[s, s]) / bs.sizes[i - 1] * np.eye(bs.sizes[i - 1])
    for (i, j), sub in frame.off_diag.items():
        P = sub.project(S[bs.span(i), bs.span(j)])
        out[bs.span(i), bs.span(j)] = P
        out[bs.span(j), bs.span(i)] = P.T
    return out


def span_residual(frame: IshiFrame, X) -> float:
    """Frobenius distance from ``X`` to ``V`` (asymmetry counts as distance)."""
    X = _check_order(frame, X)
    return float(np.linalg.norm(X - project_onto_V(frame, X)))


@dataclass(frozen=True)
class BlockOperator:
    """Linear map between two block subspaces, in their orthonormal bases.

    ``source`` and ``target`` are ``(i, j)`` labels (``(i, i)`` is the
    diagonal ``R * I``); ``matrix`` has shape ``(dim target, dim source)``.
    Since the bases are orthonormal the adjoint is the transpose.
    """

    source: tuple
    target: tuple
    matrix: np.ndarray

    def adjoint(self) -> "BlockOperator":
        return BlockOperator(self.target, self.source, self.matrix.T)

    def __matmul__(self, other: "BlockOperator") -> "BlockOperator":
        if other.target != self.source:
            raise DimensionMismatch(f"cannot compose: {other.target} feeds into {self.source}")
        return BlockOperator(other.source, self.target, self.matrix @ other.matrix)

    def __call__(self, coords) -> np.ndarray:
        return self.matrix @ np.asarray(coords, dtype=float)


def _require_member(frame: IshiFrame, A, ij: tuple, tol: Tolerance) -> np.ndarray:
    i, j = ij
    if not (1 <= i <= j <= frame.r):
        raise IndexError(f"({i},{j}) is not a valid block pair for r = {frame.r}")
    sub = frame.subspace(i, j)
    A = np.asarray(A, dtype=float)
    if A.shape != (sub.rows, sub.cols):
        raise DimensionMismatch(f"matrix for V_{i}{j} must be {sub.rows}x{sub.cols}, got {A.shape}")
    if not sub.contains(A, tol):
        raise NotInSubspace(f"matrix is not in V_{i},{j}")
    return A


def _operator(frame: IshiFrame, src: tuple, tgt: tuple, action) -> BlockOperator:
    S, T = frame.subspace(*src), frame.subspace(*tgt)
    M = np.zeros((T.dim, S.dim))
    for q, E in enumerate(S.basis):
        M[:, q] = T.coords(action(E))
    return BlockOperator(src, tgt, M)


def _left(frame, A, ij, l):
    i, j = ij
    return _operator(frame, (j, l), (i, l), lambda X: A @ X)


def _right(frame, A, ij, l):
    i, j = ij
    return _operator(frame, (l, i), (l, j), lambda X: X @ A)


def left_mult(frame: IshiFrame, A, ij: tuple, l: int, tol: Tolerance = DEFAULT_TOL) -> BlockOperator:
    """Left multiplication ``X -> A X`` from ``V_jl`` to ``V_il`` for ``A`` in ``V_ij``, ``j <= l``."""
    require_homogeneous(frame)
    A = _require_member(frame, A, ij, tol)
    if not ij[1] <= l <= frame.r:
        raise IndexError(f"left multiplication by V_{ij} needs {ij[1]} <= l <= {frame.r}")
    return _left(frame, A, ij, l)


def right_mult(frame: IshiFrame, A, ij: tuple, l: int, tol: Tolerance = DEFAULT_TOL) -> BlockOperator:
    """Right multiplication ``X -> X A`` from ``V_li`` to ``V_lj`` for ``A`` in ``V_ij``, ``l <= i``."""
    require_homogeneous(frame)
    A = _require_member(frame, A, ij, tol)
    if not 1 <= l <= ij[0]:
        raise IndexError(f"right multiplication by V_{ij} needs 1 <= l <= {ij[0]}")
    return _right(frame, A, ij, l)


@dataclass(frozen=True)
class IdentityCheck:
    tag: str
    indices: tuple
    residual: float


def _opnorm(M) -> float:
    return float(np.linalg.norm(M, 2)) if M.size else 0.0


def operator_identity_residuals(frame: IshiFrame) -> list:
    """Evaluate the product identities between left/right multiplications.

    For every admissible index tuple and every choice of basis elements this
    compares both sides of each identity and returns the operator-norm
    residual, tagged ``A`` through ``H``:

    * ``A``: ``L_A L_B = L_{AB}``
    * ``B``: ``L_A R_C = R_C L_A``
    * ``C``: ``R_C R_B = R_{BC}``
    * ``D``: ``L*_A L_D = L_{L*_A D}`` (``j < k``)
    * ``E``: ``L*_A R_C = R_C L*_A`` (``j < k``)
    * ``F``: ``R*_B R_D = R_{R*_B D}`` (``i < j``)
    * ``G``: ``L*_A L_A' + L*_A' L_A = 2/n_j <A, A'> I``
    * ``H``: ``R*_B R_B' + R*_B' R_B = 2/n_j <B, B'> I``
    """
    require_homogeneous(frame)
    r = frame.r
    out = []
    basis = lambda i, j: frame.subspace(i, j).basis  # noqa: E731
    quads = [q for q in itertools.product(range(1, r + 1), repeat=4) if q[0] <= q[1] <= q[2] <= q[3]]

    for i, j, k, m in quads:
        # A: A in V_ij, B in V_jk, acting on V_km
        for A, B in itertools.product(basis(i, j), basis(j, k)):
            lhs = _left(frame, A, (i, j), m) @ _left(frame, B, (j, k), m)
            rhs = _left(frame, A @ B, (i, k), m)
            out.append(IdentityCheck("A", (i, j, k, m), _opnorm(lhs.matrix - rhs.matrix)))
        # C: B in V_jk, C in V_km, acting on V_ij
        for B, C in itertools.product(basis(j, k), basis(k, m)):
            lhs = _right(frame, C, (k, m), i) @ _right(frame, B, (j, k), i)
            rhs = _right(frame, B @ C, (j, m), i)
            out.append(IdentityCheck("C", (i, j, k, m), _opnorm(lhs.matrix - rhs.matrix)))

    for i, j, k, l in quads:
        # B: A in V_ij, C in V_kl, both sides map V_jk -> V_il
        for A, C in itertools.product(basis(i, j), basis(k, l)):
            lhs = _left(frame, A, (i, j), l) @ _right(frame, C, (k, l), j)
            rhs = _right(frame, C, (k, l), i) @ _left(frame, A, (i, j), k)
            out.append(IdentityCheck("B", (i, j, k, l), _opnorm(lhs.matrix - rhs.matrix)))
        if j < k:
            # D: A in V_ij, D in V_ik, acting on V_kl
            for A, D in itertools.product(basis(i, j), basis(i, k)):
                adj = _left(frame, A, (i, j), l).adjoint()
                lhs = adj @ _left(frame, D, (i, k), l)
                LsD = frame.subspace(j, k).from_coords(_left(frame, A, (i, j), k).adjoint()(frame.subspace(i, k).coords(D)))
                rhs = _left(frame, LsD, (j, k), l)
                out.append(IdentityCheck("D", (i, j, k, l), _opnorm(lhs.matrix - rhs.matrix)))
            # E: A in V_ij, C in V_kl, both sides map V_ik -> V_jl
            for A, C in itertools.product(basis(i, j), basis(k, l)):
                lhs = _left(frame, A, (i, j), l).adjoint() @ _right(frame, C, (k, l), i)
                rhs = _right(frame, C, (k, l), j) @ _left(frame, A, (i, j), k).adjoint()
                out.append(IdentityCheck("E", (i, j, k, l), _opnorm(lhs.matrix - rhs.matrix)))
        if j < k:
            # F (relabelled m<=i<j<=k as i<=j<k<=l): B in V_kl, D in V_jl, acting on V_ij
            for B, D in itertools.product(basis(k, l), basis(j, l)):
                lhs = _right(frame, B, (k, l), i).adjoint() @ _right(frame, D, (j, l), i)
                RsD = frame.subspace(j, k).from_coords(_right(frame, B, (k, l), j).adjoint()(frame.subspace(j, l).coords(D)))
                rhs = _right(frame, RsD, (j, k), i)
                out.append(IdentityCheck("F", (i, j, k, l), _opnorm(lhs.matrix - rhs.matrix)))

    for i, j in itertools.combinations_with_replacement(range(1, r + 1), 2):
        nj = frame.sizes[j - 1]
        bij = basis(i, j)
        for k in range(j, r + 1):
            # G: A, A' in V_ij acting on V_jk
            for p, q in itertools.combinations_with_replacement(range(len(bij)), 2):
                La, Lb = _left(frame, bij[p], (i, j), k), _left(frame, bij[q], (i, j), k)
                lhs = La.adjoint() @ Lb
                lhs = lhs.matrix + (Lb.adjoint() @ La).matrix
                rhs = 2.0 / nj * frobenius_inner(bij[p], bij[q]) * np.eye(lhs.shape[0])
                out.append(IdentityCheck("G", (i, j, k), _opnorm(lhs - rhs)))
        for h in range(1, i + 1):
            # H: B, B' in V_ij acting on V_hi (the middle index is i here)
            ni = frame.sizes[i - 1]
            for p, q in itertools.combinations_with_replacement(range(len(bij)), 2):
                Ra, Rb = _right(frame, bij[p], (i, j), h), _right(frame, bij[q], (i, j), h)
                lhs = (Ra.adjoint() @ Rb).matrix + (Rb.adjoint() @ Ra).matrix
                rhs = 2.0 / ni * frobenius_inner(bij[p], bij[q]) * np.eye(lhs.shape[0])
                out.append(IdentityCheck("H", (h, i, j), _opnorm(lhs - rhs)))
    return out
