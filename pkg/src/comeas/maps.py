"""Support and cosupport of linear maps rho: A -> B (x) Q and psi: P (x) A -> B.

Coordinates follow rho(a_alpha) = sum_{beta,k} q[beta][alpha][k] b_beta (x) q_k and
psi(p_k (x) a_alpha) = sum_beta f[beta][k][alpha] b_beta.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .exact import (DimensionMismatch, FieldSpec, Matrix, NoSolution, rank, row_basis,
                    solve_linear)


@dataclass(frozen=True)
class CoactionShapeMap:
    """rho: A -> B (x) Q.  Row ``beta * a_dim + alpha`` of ``rows`` holds q_{beta alpha}."""

    field: FieldSpec
    a_dim: int
    b_dim: int
    qdim: int
    rows: Matrix

    def __post_init__(self):
        if self.rows.shape != (self.b_dim * self.a_dim, self.qdim):
            raise DimensionMismatch(f"coordinate matrix has shape {self.rows.shape}")

    @classmethod
    def from_coords(cls, field: FieldSpec, coords, qdim: int | None = None) -> "CoactionShapeMap":
        b_dim = len(coords)
        a_dim = len(coords[0]) if b_dim else 0
        if qdim is None:
            qdim = len(coords[0][0]) if a_dim else 0
        flat = [list(coords[b][a]) for b in range(b_dim) for a in range(a_dim)]
        if any(len(c) != qdim for c in flat) or any(len(r) != a_dim for r in coords):
            raise DimensionMismatch("ragged coordinate tensor")
        return cls(field, a_dim, b_dim, qdim, Matrix(field, len(flat), qdim, flat))

    @classmethod
    def from_elements(cls, field: FieldSpec, q: Sequence[Sequence[Sequence]]) -> "CoactionShapeMap":
        return cls.from_coords(field, q)

    def q(self, beta: int, alpha: int) -> list:
        return self.rows.row(beta * self.a_dim + alpha)

    @property
    def coords(self) -> list:
        return [[self.q(b, a) for a in range(self.a_dim)] for b in range(self.b_dim)]

    def slice(self, k: int) -> Matrix:
        """The operator a |-> q_k^*(a_(1)) a_(0) as a b_dim x a_dim matrix."""
        return Matrix(self.field, self.b_dim, self.a_dim,
                      [[self.rows.data[b * self.a_dim + a][k] for a in range(self.a_dim)]
                       for b in range(self.b_dim)])

    def to_json(self) -> dict:
        f = self.field
        return {"qdim": self.qdim,
                "coords": [[[f.to_str(x) for x in self.q(b, a)] for a in range(self.a_dim)]
                           for b in range(self.b_dim)]}

    @classmethod
    def from_json(cls, d: dict, field: FieldSpec) -> "CoactionShapeMap":
        extra = set(d) - {"qdim", "coords", "field"}
        if extra:
            raise ValueError(f"unknown keys {sorted(extra)}")
        if "field" in d:
            field = FieldSpec.from_json(d["field"])
        coords = [[[field.from_str(x) for x in v] for v in r] for r in d["coords"]]
        return cls.from_coords(field, coords, int(d["qdim"]))


@dataclass(frozen=True)
class ActionShapeMap:
    """psi: P (x) A -> B, stored as the operators psibar(p_k), each b_dim x a_dim."""

    field: FieldSpec
    pdim: int
    a_dim: int
    b_dim: int
    ops: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.ops) != self.pdim or any(m.shape != (self.b_dim, self.a_dim) for m in self.ops):
            raise DimensionMismatch("operator list does not match (pdim, b_dim, a_dim)")

    @classmethod
    def from_coords(cls, field: FieldSpec, coords) -> "ActionShapeMap":
        """``coords[beta][k][alpha]``."""
        b_dim = len(coords)
        pdim = len(coords[0])
        a_dim = len(coords[0][0])
        ops = tuple(Matrix(field, b_dim, a_dim, [[coords[b][k][a] for a in range(a_dim)] for b in range(b_dim)])
                    for k in range(pdim))
        return cls(field, pdim, a_dim, b_dim, ops)

    @classmethod
    def from_operators(cls, ops: Sequence[Matrix]) -> "ActionShapeMap":
        ops = tuple(ops)
        return cls(ops[0].field, len(ops), ops[0].cols, ops[0].rows, ops)

    @property
    def coords(self) -> list:
        return [[[self.ops[k][b, a] for a in range(self.a_dim)] for k in range(self.pdim)]
                for b in range(self.b_dim)]

    def to_json(self) -> dict:
        f = self.field
        return {"pdim": self.pdim,
                "coords": [[[f.to_str(x) for x in v] for v in r] for r in self.coords]}

    @classmethod
    def from_json(cls, d: dict, field: FieldSpec) -> "ActionShapeMap":
        extra = set(d) - {"pdim", "coords", "field"}
        if extra:
            raise ValueError(f"unknown keys {sorted(extra)}")
        if "field" in d:
            field = FieldSpec.from_json(d["field"])
        coords = [[[field.from_str(x) for x in v] for v in r] for r in d["coords"]]
        m = cls.from_coords(field, coords)
        if m.pdim != int(d["pdim"]):
            raise DimensionMismatch("pdim does not match coords")
        return m


@dataclass(frozen=True)
class OperatorSubspace:
    """A subspace of Hom(A, B) spanned by independent b_dim x a_dim matrices."""

    field: FieldSpec
    a_dim: int
    b_dim: int
    basis: tuple[Matrix, ...]

    def __post_init__(self):
        for m in self.basis:
            if m.shape != (self.b_dim, self.a_dim):
                raise DimensionMismatch(f"basis matrix of shape {m.shape}")
        if self.basis and rank(Matrix.from_rows(self.field, self.vectors())) != len(self.basis):
            raise ValueError("operator basis is linearly dependent")

    @classmethod
    def span(cls, field: FieldSpec, a_dim: int, b_dim: int, mats: Sequence[Matrix]) -> "OperatorSubspace":
        """RREF-canonical subspace spanned by arbitrary (possibly dependent) matrices."""
        rows = row_basis([m.flatten() for m in mats], field, a_dim * b_dim)
        return cls(field, a_dim, b_dim, tuple(_unflatten(field, r, b_dim, a_dim) for r in rows))

    @classmethod
    def full(cls, field: FieldSpec, a_dim: int, b_dim: int) -> "OperatorSubspace":
        mats = []
        for b in range(b_dim):
            for a in range(a_dim):
                m = Matrix(field, b_dim, a_dim)
                m.data[b][a] = field.one
                mats.append(m)
        return cls(field, a_dim, b_dim, tuple(mats))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list[list]:
        return [m.flatten() for m in self.basis]

    def canonical(self) -> "OperatorSubspace":
        return OperatorSubspace.span(self.field, self.a_dim, self.b_dim, self.basis)

    def contains(self, other: "OperatorSubspace | Matrix") -> bool:
        mats = [other] if isinstance(other, Matrix) else list(other.basis)
        if not mats:
            return True
        r = self.dim
        rows = self.vectors() + [m.flatten() for m in mats]
        return rank(Matrix.from_rows(self.field, rows, self.a_dim * self.b_dim)) == r

    def same_as(self, other: "OperatorSubspace") -> bool:
        return self.canonical().basis == other.canonical().basis

    def to_json(self) -> dict:
        f = self.field
        return {"a_dim": self.a_dim, "b_dim": self.b_dim,
                "basis": [[[f.to_str(x) for x in r] for r in m.data] for m in self.basis]}

    @classmethod
    def from_json(cls, d: dict, field: FieldSpec) -> "OperatorSubspace":
        extra = set(d) - {"a_dim", "b_dim", "basis", "field"}
        if extra:
            raise ValueError(f"unknown keys {sorted(extra)}")
        if "field" in d:
            field = FieldSpec.from_json(d["field"])
        a_dim, b_dim = int(d["a_dim"]), int(d["b_dim"])
        mats = tuple(Matrix(field, b_dim, a_dim, [[field.from_str(x) for x in r] for r in m]) for m in d["basis"])
        return cls(field, a_dim, b_dim, mats)


def _unflatten(field, vec, rows, cols) -> Matrix:
    return Matrix(field, rows, cols, [list(vec[i * cols:(i + 1) * cols]) for i in range(rows)])


def supp(rho: CoactionShapeMap) -> list[list]:
    """RREF basis of span{q_{beta alpha}} inside F^qdim."""
    return row_basis(rho.rows.data, rho.field, rho.qdim)


def cosupp(m: CoactionShapeMap | ActionShapeMap) -> OperatorSubspace:
    if isinstance(m, ActionShapeMap):
        return OperatorSubspace.span(m.field, m.a_dim, m.b_dim, m.ops)
    return OperatorSubspace.span(m.field, m.a_dim, m.b_dim, [m.slice(k) for k in range(m.qdim)])


class Relation(enum.Enum):
    FINER = "Finer"
    COARSER = "Coarser"
    EQUIVALENT = "Equivalent"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class Comparison:
    relation: Relation
    # tau: supp rho2 -> supp rho1 with (id (x) tau) rho2 = rho1, in the supp() bases
    tau: Matrix | None = None
    # the reverse map supp rho1 -> supp rho2, when rho2 is coarser than rho1
    tau_reverse: Matrix | None = None


def supp_coordinates(rho: CoactionShapeMap) -> tuple[list[list], Matrix]:
    """The supp basis and the matrix whose column (beta, alpha) expresses q_{beta alpha} in it."""
    basis = supp(rho)
    pivots = [next(j for j, x in enumerate(r) if x) for r in basis]
    # against an RREF basis the coordinates are just the pivot entries
    coords = Matrix(rho.field, len(basis), rho.rows.rows,
                    [[rho.rows.data[i][p] for i in range(rho.rows.rows)] for p in pivots])
    return basis, coords


def factor_through(rho1: CoactionShapeMap, rho2: CoactionShapeMap) -> Matrix | None:
    """The unique tau: supp rho2 -> supp rho1 with (id (x) tau) rho2 = rho1, or None."""
    _, c1 = supp_coordinates(rho1)
    _, c2 = supp_coordinates(rho2)
    if c2.rows == 0:
        return Matrix(rho1.field, c1.rows, 0) if c1.is_zero() else None
    try:
        t = solve_linear(c2.transpose(), c1.transpose())
    except NoSolution:
        return None
    return t.transpose()


def compare(rho1: CoactionShapeMap, rho2: CoactionShapeMap) -> Comparison:
    """Place rho1 relative to rho2 in the coarser/finer preorder."""
    if (rho1.a_dim, rho1.b_dim) != (rho2.a_dim, rho2.b_dim):
        raise DimensionMismatch("maps between different spaces")
    tau = factor_through(rho1, rho2)
    back = factor_through(rho2, rho1)
    if tau is not None and back is not None:
        return Comparison(Relation.EQUIVALENT, tau, back)
    if tau is not None:
        return Comparison(Relation.COARSER, tau, None)
    if back is not None:
        return Comparison(Relation.FINER, None, back)
    return Comparison(Relation.INCOMPARABLE)


def cosupp_included(rho1: CoactionShapeMap, rho2: CoactionShapeMap) -> bool:
    """cosupp rho1 <= cosupp rho2 by a rank test on vectorised operators."""
    return cosupp(rho2).contains(cosupp(rho1))


def generic_map_of_subspace(v: OperatorSubspace) -> CoactionShapeMap:
    """rho_0: A -> B (x) F^m with q[beta][alpha][k] = basis[k][beta, alpha]."""
    m = v.dim
    rows = [[v.basis[k][b, a] for k in range(m)] for b in range(v.b_dim) for a in range(v.a_dim)]
    return CoactionShapeMap(v.field, v.a_dim, v.b_dim, m, Matrix(v.field, len(rows), m, rows))


def apply_tau(tau: Matrix, rho2: CoactionShapeMap, rho1: CoactionShapeMap) -> CoactionShapeMap:
    """(id (x) tau) rho2 written back in the ambient coordinates of rho1's Q."""
    f = rho2.field
    _, c2 = supp_coordinates(rho2)
    img = tau @ c2  # coordinates in rho1's supp basis, one column per (beta, alpha)
    rho1_basis = supp(rho1)
    qdim = rho1.qdim
    rows = []
    for col in range(img.cols):
        v = [f.zero] * qdim
        for i, r in enumerate(rho1_basis):
            c = img[i, col]
            if c:
                v = [x + c * y for x, y in zip(v, r)]
        rows.append(v)
    return CoactionShapeMap(f, rho2.a_dim, rho2.b_dim, qdim, Matrix(f, len(rows), qdim, rows))
