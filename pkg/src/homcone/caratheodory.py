"""Carathéodory decompositions, dimension conditions and witness reductions.

Every point of the closed cone is a sum of as many extreme rays as the rank
of its minimal face, read off from its Cholesky-type factor. Whether fewer
rays can suffice is governed by dimension conditions on the subspaces:

* primal: for ``i < j < k`` with ``V_ij != 0``, ``dim V_ik == dim V_jk``;
* dual: for ``k < j < i`` with ``V_ji != 0``, ``dim V_ki == dim V_kj``.

When a condition fails, an explicit pair of rays built from a witness pair
``(A, B)`` replaces three rays by two. Moving that construction around by
the group action gives a decomposition with one term fewer at every point of
the same orbit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .dense import DEFAULT_TOL, Tolerance, frobenius_inner, matrix_rank
from .exceptions import (
    HomconeError,
    NotInGroup,
    NotInSubspace,
    NotInterior,
    WitnessConditionFails,
)
from .frame import IshiFrame, left_mult, project_onto_V, require_homogeneous, right_mult
from .geometry import (
    Membership,
    diagonal_scalars,
    dual_orbit_factor,
    in_cone,
    in_triangular_space,
    minimal_face,
)

__all__ = [
    "ConditionViolation",
    "ConditionReport",
    "primal_condition",
    "dual_condition",
    "operator_condition",
    "RayTerm",
    "Decomposition",
    "decompose",
    "decompose_dual_orbit",
    "WitnessCandidate",
    "witness_gap",
    "find_witness",
    "primal_witness",
    "dual_witness",
    "CaratheodoryBounds",
    "caratheodory_bounds",
    "indecomposable_components",
    "SelfDualityReport",
    "is_selfdual",
]

_SIDES = ("primal", "dual")


def _check_side(side: str) -> str:
    if side not in _SIDES:
        raise ValueError(f"side must be 'primal' or 'dual', got {side!r}")
    return side


@dataclass(frozen=True)
class ConditionViolation:
    """A failing triple, listed in increasing order, with the dimensions compared."""

    triple: tuple
    dims: dict

    def __str__(self):
        d = ", ".join(f"dim V_{k} = {v}" for k, v in self.dims.items())
        return f"({','.join(map(str, self.triple))}): {d}"


@dataclass(frozen=True)
class ConditionReport:
    side: str
    violations: tuple = ()

    @property
    def holds(self) -> bool:
        return not self.violations

    @property
    def triples(self) -> list:
        return [v.triple for v in self.violations]


def _pattern(side: str, a: int, b: int, c: int) -> tuple:
    """For ``a < b < c``: the gate pair and the two pairs whose dimensions are compared."""
    if side == "primal":
        return (a, b), (a, c), (b, c)
    return (b, c), (a, c), (a, b)


def _dimension_condition(frame: IshiFrame, side: str) -> ConditionReport:
    require_homogeneous(frame)
    out = []
    for a, b, c in itertools.combinations(range(1, frame.r + 1), 3):
        gate, p, q = _pattern(side, a, b, c)
        if frame.dim_of(*gate) and frame.dim_of(*p) != frame.dim_of(*q):
            dims = {f"{x}{y}": frame.dim_of(x, y) for x, y in (gate, p, q)}
            out.append(ConditionViolation((a, b, c), dims))
    return ConditionReport(side, tuple(out))


def primal_condition(frame: IshiFrame) -> ConditionReport:
    """Check ``dim V_ik == dim V_jk`` whenever ``i < j < k`` and ``V_ij`` is nontrivial."""
    return _dimension_condition(frame, "primal")


def dual_condition(frame: IshiFrame) -> ConditionReport:
    """Check ``dim V_ki == dim V_kj`` whenever ``k < j < i`` and ``V_ji`` is nontrivial.

    Violating triples are reported in increasing order ``(k, j, i)``.
    """
    return _dimension_condition(frame, "dual")


def operator_condition(frame: IshiFrame, side: str = "primal", tol: Tolerance = DEFAULT_TOL) -> ConditionReport:
    """Check the multiplication-operator form of the dimension condition.

    Primal: for ``A`` in ``V_ij``, ``L_A L_A^*`` on ``V_ik`` equals
    ``|A|^2 / n_j`` times the identity. Dual: for ``A`` in ``V_ji``,
    ``R_A R_A^*`` on ``V_ki`` equals ``|A|^2 / n_j`` times the identity.
    Both are quadratic in ``A``, so the polarized identity is tested on all
    pairs of basis elements.
    """
    require_homogeneous(frame)
    _check_side(side)
    out = []
    for a, b, c in itertools.combinations(range(1, frame.r + 1), 3):
        if side == "primal":
            src = frame.subspace(a, b)
            nj = frame.sizes[b - 1]
            ops = [left_mult(frame, E, (a, b), c, tol) for E in src.basis]
        else:
            src = frame.subspace(b, c)
            nj = frame.sizes[b - 1]
            ops = [right_mult(frame, E, (b, c), a, tol) for E in src.basis]
        worst = 0.0
        for p, q in itertools.combinations_with_replacement(range(len(ops)), 2):
            M = ops[p].matrix @ ops[q].matrix.T + ops[q].matrix @ ops[p].matrix.T
            target = 2.0 / nj * frobenius_inner(src.basis[p], src.basis[q]) * np.eye(M.shape[0])
            if M.size:
                worst = max(worst, float(np.linalg.norm(M - target, 2)))
        if worst > tol.threshold(1.0):
            gate, p_, q_ = _pattern(side, a, b, c)
            dims = {f"{x}{y}": frame.dim_of(x, y) for x, y in (gate, p_, q_)}
            out.append(ConditionViolation((a, b, c), dims))
    return ConditionReport(side, tuple(out))


@dataclass(frozen=True, eq=False)
class RayTerm:
    """One summand ``weight * generator`` of a decomposition.

    ``generator`` spans an extreme ray; it equals ``factor^T I^{block} factor``
    (primal) or ``proj_V(factor I^{block} factor^T)`` (dual).
    """

    weight: float
    generator: np.ndarray
    factor: np.ndarray
    block: int


@dataclass(frozen=True, eq=False)
class Decomposition:
    point: np.ndarray
    terms: tuple
    side: str
    face: tuple = ()

    @property
    def size(self) -> int:
        return len(self.terms)

    def reconstruct(self) -> np.ndarray:
        out = np.zeros_like(self.point)
        for t in self.terms:
            out = out + t.weight * t.generator
        return out

    @property
    def residual(self) -> float:
        return float(np.linalg.norm(self.reconstruct() - self.point))


def _primal_generator(frame: IshiFrame, T: np.ndarray, i: int) -> np.ndarray:
    D = frame.blocks.indicator([i])
    G = T.T @ D @ T
    return (G + G.T) / 2.0


def _dual_generator(frame: IshiFrame, T: np.ndarray, i: int) -> np.ndarray:
    D = frame.blocks.indicator([i])
    return project_onto_V(frame, T @ D @ T.T)


def decompose(frame: IshiFrame, X, side: str = "primal", tol: Tolerance = DEFAULT_TOL) -> Decomposition:
    """Split a point into extreme rays, one per block of its minimal face.

    Primal points may lie anywhere in the closed cone. Dual points must be
    interior points of the dual cone; boundary dual points are handled by
    :func:`decompose_dual_orbit` given their triangular factor.
    """
    _check_side(side)
    X = np.asarray(X, dtype=float)
    if side == "dual":
        return decompose_dual_orbit(frame, dual_orbit_factor(frame, X, tol), tol)
    face = minimal_face(frame, X, tol)
    terms = tuple(RayTerm(1.0, _primal_generator(frame, face.T, i), face.T, i) for i in face.indices)
    return Decomposition(project_onto_V(frame, X), terms, "primal", face.indices)


def _closure_factor_indices(frame: IshiFrame, T: np.ndarray, tol: Tolerance) -> tuple:
    """Validate a triangular factor whose zero diagonal blocks have zero rows and columns."""
    if not in_triangular_space(frame, T, tol):
        raise NotInGroup("T is not block upper triangular with blocks in V_ij")
    d = diagonal_scalars(frame, T)
    thr = tol.threshold(np.max(np.abs(d)) if d.size else 0.0)
    if np.any(d < -thr):
        raise NotInGroup("T has a negative diagonal scalar")
    bs = frame.blocks
    support = []
    for i in range(1, frame.r + 1):
        if d[i - 1] > thr:
            support.append(i)
            continue
        s = bs.span(i)
        if max(np.max(np.abs(T[s, :])), np.max(np.abs(T[:, s]))) > tol.threshold(np.max(np.abs(T))):
            raise NotInGroup(f"block {i} has a zero diagonal scalar but a nonzero row or column")
    return tuple(support)


def decompose_dual_orbit(frame: IshiFrame, T, tol: Tolerance = DEFAULT_TOL) -> Decomposition:
    """Decompose ``proj_V(T T^T)`` into the dual rays ``proj_V(T I^{i} T^T)``.

    ``T`` is a group element, or a limit of group elements in which some
    diagonal blocks vanish together with their block rows and columns; those
    blocks contribute no term.
    """
    require_homogeneous(frame)
    T = np.asarray(T, dtype=float)
    if T.shape != (frame.n, frame.n):
        raise NotInGroup(f"T must have order {frame.n}")
    support = _closure_factor_indices(frame, T, tol)
    # zero diagonal blocks replaced by identities give a group element with the same terms
    Tg = T.copy()
    for i in range(1, frame.r + 1):
        if i not in support:
            s = frame.blocks.span(i)
            Tg[s, s] = np.eye(frame.sizes[i - 1])
    terms = tuple(RayTerm(1.0, _dual_generator(frame, Tg, i), Tg, i) for i in support)
    return Decomposition(project_onto_V(frame, T @ T.T), terms, "dual", support)


@dataclass(frozen=True, eq=False)
class WitnessCandidate:
    side: str
    triple: tuple
    A: np.ndarray
    B: np.ndarray
    gap: float


def _witness_pairs(side: str, triple: tuple) -> tuple:
    """Subspace labels holding ``A`` and ``B`` and the middle index ``j``."""
    a, b, c = triple
    if side == "primal":
        return (a, b), (a, c), b
    return (b, c), (a, c), b


def witness_gap(frame: IshiFrame, side: str, triple: tuple, A, B) -> float:
    """``|A|^2 |B|^2 - n_j |L_A^* B|^2`` (primal) or the ``R_A^*`` analogue (dual).

    Nonnegative by the closure axioms; positive exactly when the two-ray
    construction built from ``A`` and ``B`` yields an interior point.
    """
    _check_side(side)
    a, b, c = triple
    A, B = np.asarray(A, dtype=float), np.asarray(B, dtype=float)
    nj = frame.sizes[b - 1]
    if side == "primal":
        adj = frame.subspace(b, c).project(A.T @ B)
    else:
        adj = frame.subspace(a, b).project(B @ A.T)
    return float(np.sum(A**2) * np.sum(B**2) - nj * np.sum(adj**2))


def _scale_free_threshold(frame, A, B, tol: Tolerance) -> float:
    return tol.threshold(float(np.sum(A**2) * np.sum(B**2)))


def find_witness(frame: IshiFrame, side: str = "primal", within=None, tol: Tolerance = DEFAULT_TOL):
    """Best basis pair over all triples, or ``None`` if every gap vanishes.

    Scans triples in increasing order and basis pairs in index order, keeping
    the first pair with the largest gap. ``within`` restricts the triples to
    an index set (used for faces).
    """
    require_homogeneous(frame)
    _check_side(side)
    indices = sorted(within) if within is not None else range(1, frame.r + 1)
    best = None
    for triple in itertools.combinations(indices, 3):
        pa, pb, _ = _witness_pairs(side, triple)
        for A, B in itertools.product(frame.subspace(*pa).basis, frame.subspace(*pb).basis):
            g = witness_gap(frame, side, triple, A, B)
            if g > _scale_free_threshold(frame, A, B, tol) and (best is None or g > best.gap):
                best = WitnessCandidate(side, triple, A, B, g)
    return best


def _validate_witness(frame: IshiFrame, side: str, triple: tuple, A, B, tol: Tolerance):
    require_homogeneous(frame)
    a, b, c = triple
    if not (1 <= a < b < c <= frame.r):
        raise ValueError(f"triple {triple} must be increasing within 1..{frame.r}")
    pa, pb, _ = _witness_pairs(side, triple)
    Va, Vb = frame.subspace(*pa), frame.subspace(*pb)
    if Va.dim == 0 or Vb.dim == 0:
        trivial = pa if Va.dim == 0 else pb
        raise WitnessConditionFails(f"V_{trivial[0]}{trivial[1]} is trivial; no nonzero witness exists", vacuous=True)
    if A is None or B is None:
        cand = None
        for A_, B_ in itertools.product(Va.basis, Vb.basis):
            g = witness_gap(frame, side, triple, A_, B_)
            if cand is None or g > cand[2]:
                cand = (A_, B_, g)
        A, B = cand[0], cand[1]
    A, B = np.asarray(A, dtype=float), np.asarray(B, dtype=float)
    for M, V, lab in ((A, Va, pa), (B, Vb, pb)):
        if M.shape != (V.rows, V.cols) or not V.contains(M, tol):
            raise NotInSubspace(f"witness matrix is not in V_{lab[0]}{lab[1]}")
        if np.linalg.norm(M) <= tol.abs_eps:
            raise WitnessConditionFails("witness matrices must be nonzero")
    gap = witness_gap(frame, side, triple, A, B)
    if gap <= _scale_free_threshold(frame, A, B, tol):
        raise WitnessConditionFails(f"witness inequality is not strict at {triple} (gap {gap:.3e})")
    return A, B


def primal_witness(
    frame: IshiFrame, triple: tuple, A=None, B=None, support=None, tol: Tolerance = DEFAULT_TOL
) -> Decomposition:
    """Write a point of rank ``|support|`` as a sum of ``|support| - 1`` primal rays.

    With ``T = I + A + B`` and ``U = I - A - B`` (``A`` at block ``(i, j)``,
    ``B`` at ``(i, k)``), the point is ``T^T I^{i} T / 2 + U^T I^{i} U / 2``
    plus ``I^{l}`` for the remaining indices ``l`` of ``support`` (all blocks
    by default). If ``A`` or ``B`` is omitted the best basis element is used.

    Raises
    ------
    WitnessConditionFails
        If the gap ``|A|^2 |B|^2 - n_j |A^T B|^2`` is not positive; ``vacuous``
        is set when ``V_ij`` or ``V_ik`` is trivial.
    """
    support = tuple(sorted(support)) if support is not None else tuple(range(1, frame.r + 1))
    if not set(triple) <= set(support):
        raise ValueError(f"triple {triple} is not inside the index set {support}")
    A, B = _validate_witness(frame, "primal", triple, A, B, tol)
    i, j, k = triple
    terms = []
    for sign in (1.0, -1.0):
        T = np.eye(frame.n)
        bs = frame.blocks
        T[bs.span(i), bs.span(j)] = sign * A
        T[bs.span(i), bs.span(k)] = sign * B
        terms.append(RayTerm(0.5, _primal_generator(frame, T, i), T, i))
    for l in support:
        if l not in triple:
            terms.append(RayTerm(1.0, frame.blocks.indicator([l]), np.eye(frame.n), l))
    point = sum(t.weight * t.generator for t in terms)
    dec = Decomposition(point, tuple(terms), "primal", support)
    face = minimal_face(frame, point, tol)
    if face.indices != support:
        raise HomconeError("witness point is not in the relative interior of its face")
    return dec


def dual_witness(frame: IshiFrame, triple: tuple, A=None, B=None, tol: Tolerance = DEFAULT_TOL) -> Decomposition:
    """Write an interior dual point as a sum of ``r - 1`` dual rays.

    ``triple`` is ``(k, j, i)`` with ``k < j < i``; ``A`` lies in ``V_ji`` and
    ``B`` in ``V_ki``. With ``T = I + A + B`` and ``U = I - A - B`` the point is
    ``proj_V(T I^{i} T^T) / 2 + proj_V(U I^{i} U^T) / 2`` plus ``I^{l}`` for
    every other ``l``.

    Raises
    ------
    WitnessConditionFails
        If ``|A|^2 |B|^2 - n_j |proj_{V_kj}(B A^T)|^2`` is not positive.
    """
    A, B = _validate_witness(frame, "dual", triple, A, B, tol)
    k, j, i = triple
    bs = frame.blocks
    terms = []
    for sign in (1.0, -1.0):
        T = np.eye(frame.n)
        T[bs.span(j), bs.span(i)] = sign * A
        T[bs.span(k), bs.span(i)] = sign * B
        terms.append(RayTerm(0.5, _dual_generator(frame, T, i), T, i))
    for l in range(1, frame.r + 1):
        if l not in triple:
            terms.append(RayTerm(1.0, frame.blocks.indicator([l]), np.eye(frame.n), l))
    point = sum(t.weight * t.generator for t in terms)
    dual_orbit_factor(frame, point, tol)  # raises unless interior
    return Decomposition(point, tuple(terms), "dual", tuple(range(1, frame.r + 1)))


def _transport_primal(frame: IshiFrame, dec: Decomposition, target_factor: np.ndarray, tol: Tolerance) -> Decomposition:
    """Move a decomposition of ``W^T I^B W`` to ``T^T I^B T`` with ``S = W^{-1} T``."""
    W = minimal_face(frame, dec.point, tol).T
    S = np.linalg.solve(W, target_factor)
    terms = []
    for t in dec.terms:
        F = t.factor @ S
        terms.append(RayTerm(t.weight, _primal_generator(frame, F, t.block), F, t.block))
    point = target_factor.T @ frame.blocks.indicator(dec.face) @ target_factor
    return Decomposition((point + point.T) / 2.0, tuple(terms), "primal", dec.face)


def _transport_dual(frame: IshiFrame, dec: Decomposition, target_factor: np.ndarray, tol: Tolerance) -> Decomposition:
    """Move a dual decomposition of ``proj_V(W W^T)`` to ``proj_V(T T^T)`` with ``S = T W^{-1}``."""
    W = dual_orbit_factor(frame, dec.point, tol)
    S = target_factor @ np.linalg.inv(W)
    terms = []
    for t in dec.terms:
        F = S @ t.factor
        terms.append(RayTerm(t.weight, _dual_generator(frame, F, t.block), F, t.block))
    point = project_onto_V(frame, target_factor @ target_factor.T)
    return Decomposition(point, tuple(terms), "dual", dec.face)


@dataclass(frozen=True, eq=False)
class CaratheodoryBounds:
    """Certified bounds on the number of extreme rays needed for a point.

    ``upper`` is the size of ``decomposition``; ``witness`` records the
    witness pair used to save one ray, if any.
    """

    lower: int
    upper: int
    decomposition: Decomposition
    witness: WitnessCandidate | None = None

    def as_tuple(self) -> tuple:
        return (self.lower, self.upper)


def caratheodory_bounds(
    frame: IshiFrame, X, side: str = "primal", tol: Tolerance = DEFAULT_TOL, factor=None
) -> CaratheodoryBounds:
    """Lower and upper bounds on the Carathéodory number of a point.

    Primal: the upper bound is the rank of the minimal face, lowered by one
    when the primal dimension condition fails on a triple inside that face;
    the lower bound is ``ceil(rank(X) / max n_i)`` over the face, since each
    primal ray has matrix rank ``n_i``.

    Dual: ``X`` must be an interior dual point, or ``factor`` must be a
    triangular factor with ``proj_V(factor factor^T) = X``. The upper bound
    is the number of blocks in the factor, lowered by one for interior
    points when the dual condition fails. The lower bound is 1 for nonzero
    points.
    """
    _check_side(side)
    require_homogeneous(frame)
    X = np.asarray(X, dtype=float)
    if side == "primal":
        dec = decompose(frame, X, "primal", tol)
        B = dec.face
        if not B:
            return CaratheodoryBounds(0, 0, dec)
        lower = math.ceil(matrix_rank(dec.point, tol) / max(frame.sizes[i - 1] for i in B))
        cand = find_witness(frame, "primal", within=B, tol=tol)
        if cand is not None:
            wit = primal_witness(frame, cand.triple, cand.A, cand.B, support=B, tol=tol)
            dec = _transport_primal(frame, wit, dec.terms[0].factor, tol)
        return CaratheodoryBounds(lower, dec.size, dec, cand)

    if factor is not None:
        dec = decompose_dual_orbit(frame, factor, tol)
        if np.linalg.norm(dec.point - X) > tol.threshold(np.linalg.norm(X)) * 10:
            raise ValueError("factor does not reproduce the given dual point")
    else:
        dec = decompose(frame, X, "dual", tol)
    if not dec.face:
        return CaratheodoryBounds(0, 0, dec)
    cand = None
    if len(dec.face) == frame.r:
        cand = find_witness(frame, "dual", tol=tol)
        if cand is not None:
            wit = dual_witness(frame, cand.triple, cand.A, cand.B, tol)
            dec = _transport_dual(frame, wit, dec.terms[0].factor, tol)
    return CaratheodoryBounds(1, dec.size, dec, cand)


def indecomposable_components(frame: IshiFrame) -> list:
    """Connected components of the graph on blocks with an edge wherever ``V_ij != 0``."""
    parent = list(range(frame.r + 1))

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j), sub in frame.off_diag.items():
        if sub.dim:
            parent[root(i)] = root(j)
    groups = {}
    for i in range(1, frame.r + 1):
        groups.setdefault(root(i), []).append(i)
    return sorted(groups.values())


@dataclass(frozen=True)
class SelfDualityReport:
    selfdual: bool
    primal: ConditionReport
    dual: ConditionReport
    components: tuple = field(default_factory=tuple)

    def __bool__(self):
        return self.selfdual


def is_selfdual(frame: IshiFrame) -> SelfDualityReport:
    """Decide selfduality from the two dimension conditions.

    The verdict is cross-checked against the component criterion: a frame is
    selfdual exactly when, inside each indecomposable component, every
    ``V_ij`` is nontrivial and all of them share one dimension. ``components``
    lists ``(indices, ok, dims)`` per component.
    """
    p, d = primal_condition(frame), dual_condition(frame)
    verdict = p.holds and d.holds
    detail = []
    for comp in indecomposable_components(frame):
        dims = [frame.dim_of(i, j) for i, j in itertools.combinations(comp, 2)]
        ok = all(dims) and len(set(dims)) <= 1
        detail.append((tuple(comp), ok, tuple(sorted(set(dims)))))
    if verdict != all(ok for _, ok, _ in detail):
        raise HomconeError("dimension conditions and component criterion disagree")
    return SelfDualityReport(verdict, p, d, tuple(detail))
