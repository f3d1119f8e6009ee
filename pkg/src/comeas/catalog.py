"""Named example algebras with their (co)actions and expected invariants."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .exact import FieldSpec, Matrix, QQ
from .maps import ActionShapeMap, CoactionShapeMap
from .omega import OmegaAlgebra, standard_algebra
from .universal import ComeasuringInstance
from .duality import MeasuringInstance, witness_coaction


class UnknownEntry(KeyError):
    pass


@dataclass
class CatalogEntry:
    name: str
    algebra: OmegaAlgebra
    coactions: list = field(default_factory=list)  # (label, q, rho)
    measurings: list = field(default_factory=list)  # (label, p, psi)
    expected: dict = field(default_factory=dict)  # key -> {"value": ..., "tag": ...}
    description: str = ""

    def comeasuring(self, i: int) -> ComeasuringInstance:
        _, q, rho = self.coactions[i]
        return ComeasuringInstance(self.algebra, self.algebra, q, rho)

    def measuring(self, i: int) -> MeasuringInstance:
        _, p, psi = self.measurings[i]
        return MeasuringInstance(p, self.algebra, self.algebra, psi)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "algebra": self.algebra.to_json(),
            "coactions": [{"label": lb, "q": q.to_json(), "rho": rho.to_json()} for lb, q, rho in self.coactions],
            "measurings": [{"label": lb, "p": p.to_json(), "psi": psi.to_json()} for lb, p, psi in self.measurings],
            "expected": self.expected,
        }

    @classmethod
    def from_json(cls, d: dict) -> "CatalogEntry":
        a = OmegaAlgebra.from_json(d["algebra"])
        co = []
        for c in d.get("coactions", []):
            q = OmegaAlgebra.from_json(c["q"])
            co.append((c["label"], q, CoactionShapeMap.from_json(c["rho"], q.field)))
        me = []
        for m in d.get("measurings", []):
            p = OmegaAlgebra.from_json(m["p"])
            me.append((m["label"], p, ActionShapeMap.from_json(m["psi"], p.field)))
        return cls(d["name"], a, co, me, d.get("expected", {}), d.get("description", ""))


def _trivial_coaction(a: OmegaAlgebra) -> tuple:
    f = a.field
    q = standard_algebra("group_algebra", f, n=1, structure="bialgebra")
    coords = [[[f.one if b == c else f.zero] for c in range(a.dim)] for b in range(a.dim)]
    return ("trivial", q, CoactionShapeMap.from_coords(f, coords, 1))


def _grading(a: OmegaAlgebra, n: int, blocks: list[list[tuple[int, int, int]]]) -> tuple:
    """Coaction into FC_n from entries (beta, group index, coefficient) per basis vector."""
    f = a.field
    q = standard_algebra("group_algebra", f, n=n, structure="bialgebra")
    coords = [[[f.zero] * n for _ in range(a.dim)] for _ in range(a.dim)]
    for alpha, entries in enumerate(blocks):
        for beta, g, c in entries:
            coords[beta][alpha][g] += f(c)
    return q, CoactionShapeMap.from_coords(f, coords, n)


def _group_action(a: OmegaAlgebra, n: int, gen: Matrix) -> tuple:
    """FC_n acting through powers of an automorphism ``gen``."""
    f = a.field
    p = standard_algebra("group_algebra", f, n=n, structure="bialgebra")
    ops = [Matrix.identity(f, a.dim)]
    for _ in range(1, n):
        ops.append(gen @ ops[-1])
    return p, ActionShapeMap.from_operators(ops)


def _functional_measuring(a: OmegaAlgebra, n: int, values: list) -> tuple:
    """FC_n on a 1-dimensional algebra, c^k acting by the scalar values[k]."""
    f = a.field
    p = standard_algebra("group_algebra", f, n=n, structure="bialgebra")
    return p, ActionShapeMap.from_operators([Matrix(f, 1, 1, [[v]]) for v in values])


def _f(field: FieldSpec) -> CatalogEntry:
    a = standard_algebra("base_field", field)
    e = CatalogEntry("f", a, description="the base field as a unital algebra")
    e.coactions.append(_trivial_coaction(a))
    for n in (2, 3):
        p, psi = _functional_measuring(a, n, [1] * n)
        e.measurings.append((f"FC{n} trivial", p, psi))
    e.expected["hilbert"] = {"value": [1, 0, 0, 0, 0], "tag": "DERIVED: unit relation forces x11 = 1"}
    e.expected["finite_dim"] = {"value": 1, "tag": "DERIVED"}
    return e


def _f_mu(field: FieldSpec) -> CatalogEntry:
    a = standard_algebra("base_field", field, unital=False)
    e = CatalogEntry("f-mu", a, description="the base field as a non-unital algebra")
    e.coactions.append(_trivial_coaction(a))
    for vals in ([1, 1], [0, 0], [1, 0], [0, 1]):
        p, psi = _functional_measuring(a, 2, vals)
        e.measurings.append((f"FC2 by {vals}", p, psi))
    p, psi = _functional_measuring(a, 3, [1, 0, 1])
    e.measurings.append(("FC3 by [1, 0, 1]", p, psi))
    e.expected["hilbert"] = {"value": [1, 1, 0, 0, 0], "tag": "DERIVED: single relation x^2 - x"}
    e.expected["finite_dim"] = {"value": 2, "tag": "DERIVED"}
    return e


def _f2(field: FieldSpec) -> CatalogEntry:
    f = field
    a = standard_algebra("unital_algebra_from_table", f, table=[[[1, 0], [0, 0]], [[0, 0], [0, 1]]],
                         unit=[1, 1], basis=["e1", "e2"])
    e = CatalogEntry("f2", a, description="F x F with orthogonal idempotents")
    e.coactions.append(_trivial_coaction(a))
    if f.characteristic != 2:
        half = f(Fraction(1, 2)) if f.kind == "Q" else f(1) / f(2)
        # 1 = e1 + e2 has trivial degree, e1 - e2 has degree c
        q, rho = _grading(a, 2, [[(0, 0, half), (0, 1, half), (1, 0, half), (1, 1, -half)],
                                 [(0, 0, half), (0, 1, -half), (1, 0, half), (1, 1, half)]])
        e.coactions.append(("C2 swap grading", q, rho))
    swap = Matrix(f, 2, 2, [[0, 1], [1, 0]])
    p, psi = _group_action(a, 2, swap)
    e.measurings.append(("FC2 swap", p, psi))
    e.expected["hilbert"] = {"value": [1, 2, 2, 2, 2], "tag": "DERIVED: brute-force word-span oracle"}
    return e


def _f3(field: FieldSpec) -> CatalogEntry:
    f = field
    table = [[[1 if i == j == k else 0 for k in range(3)] for j in range(3)] for i in range(3)]
    a = standard_algebra("unital_algebra_from_table", f, table=table, unit=[1, 1, 1], basis=["e1", "e2", "e3"])
    e = CatalogEntry("f3", a, description="F x F x F with a cyclic symmetry")
    cyc = Matrix(f, 3, 3, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    p, psi = _group_action(a, 3, cyc)
    e.measurings.append(("FC3 cyclic", p, psi))
    return e


def _dualnumbers(field: FieldSpec) -> CatalogEntry:
    f = field
    a = standard_algebra("truncated_poly", f, k=2)
    e = CatalogEntry("dualnumbers", a, description="F[x]/(x^2)")
    e.coactions.append(_trivial_coaction(a))
    q, rho = _grading(a, 2, [[(0, 0, 1)], [(1, 1, 1)]])
    e.coactions.append(("C2 grading", q, rho))
    p, psi = _group_action(a, 2, Matrix(f, 2, 2, [[1, 0], [0, -1]]))
    e.measurings.append(("FC2 sign", p, psi))
    e.expected["hilbert"] = {"value": [1, 2, 2, 2, 2], "tag": "DERIVED: brute-force word-span oracle"}
    return e


def _fc2(field: FieldSpec) -> CatalogEntry:
    a = standard_algebra("group_algebra", field, n=2)
    e = CatalogEntry("fc2", a, description="group algebra of C2 as a unital algebra")
    e.coactions.append(_trivial_coaction(a))
    q, rho = _grading(a, 2, [[(0, 0, 1)], [(1, 1, 1)]])
    e.coactions.append(("C2 grading", q, rho))
    return e


def _m2(field: FieldSpec) -> CatalogEntry:
    a = standard_algebra("matrix_algebra", field, n=2)
    e = CatalogEntry("m2", a, description="2 x 2 matrices")
    e.coactions.append(_trivial_coaction(a))
    # Z/2-grading by parity of i + j
    q, rho = _grading(a, 2, [[(0, 0, 1)], [(1, 1, 1)], [(2, 1, 1)], [(3, 0, 1)]])
    e.coactions.append(("C2 checkerboard grading", q, rho))
    return e


def _witness(field: FieldSpec, coalgebra: bool) -> CatalogEntry:
    f = field if field.kind == "Fp" else FieldSpec("Fp", 13)
    kind = "primitive_span_coalgebra" if coalgebra else "nilpotent_span_algebra"
    a = standard_algebra(kind, f, N=6)
    name = "sec9-coalgebra" if coalgebra else "sec9-witness"
    e = CatalogEntry(name, a, description=f"{kind}(6) over F_{f.p} with cyclic gradings of growing order")
    for n in (2, 3):
        inst = witness_coaction(a, n)
        e.coactions.append((f"rho_{n}", inst.q, inst.rho))
    e.expected["dim_supp"] = {"value": [2, 3], "tag": "DERIVED: Vandermonde rank"}
    return e


_BUILDERS: dict[str, Callable[[FieldSpec], CatalogEntry]] = {
    "dualnumbers": _dualnumbers,
    "f": _f,
    "f-mu": _f_mu,
    "f2": _f2,
    "f3": _f3,
    "fc2": _fc2,
    "m2": _m2,
    "sec9-coalgebra": lambda fl: _witness(fl, True),
    "sec9-witness": lambda fl: _witness(fl, False),
}


def names() -> list[str]:
    return sorted(_BUILDERS)


def entry(name: str, field: FieldSpec = QQ) -> CatalogEntry:
    try:
        return _BUILDERS[name](field)
    except KeyError:
        raise UnknownEntry(name) from None
