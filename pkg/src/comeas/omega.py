"""Finite-dimensional Omega-algebras given by structure constants.

An operation ``w`` with source arity ``s`` and target arity ``t`` is stored as a
``dim**t x dim**s`` matrix.  Multi-indices are flattened big-endian (first
tensor factor most significant); an arity-0 leg is a dimension-1 leg.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

from .exact import DimensionMismatch, FieldMismatch, FieldSpec, Matrix, kron_power
from .report import Report

MAX_ARITY = 4

# ops named like this are recognised by the (co)measuring machinery
MU, UNIT, DELTA, EPS = "mu", "u", "delta", "eps"
DUAL_NAMES = {MU: DELTA, UNIT: EPS, DELTA: MU, EPS: UNIT}


class SignatureMismatch(ValueError):
    pass


class BadParams(ValueError):
    pass


@dataclass(frozen=True)
class OpSymbol:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class OmegaSignature:
    ops: tuple[OpSymbol, ...] = ()

    def __post_init__(self):
        names = [o.name for o in self.ops]
        if len(set(names)) != len(names):
            raise SignatureMismatch(f"duplicate operation names in {names}")
        for o in self.ops:
            if o.source < 0 or o.target < 0:
                raise SignatureMismatch(f"negative arity in {o}")

    def __iter__(self):
        return iter(self.ops)

    def __len__(self):
        return len(self.ops)

    def names(self) -> list[str]:
        return [o.name for o in self.ops]

    def get(self, name: str) -> OpSymbol | None:
        return next((o for o in self.ops if o.name == name), None)


def signature(*ops: tuple[str, int, int]) -> OmegaSignature:
    return OmegaSignature(tuple(OpSymbol(*o) for o in ops))


ALGEBRA = signature((MU, 2, 1))
UNITAL_ALGEBRA = signature((MU, 2, 1), (UNIT, 0, 1))
COALGEBRA = signature((DELTA, 1, 2), (EPS, 1, 0))
BIALGEBRA = signature((MU, 2, 1), (UNIT, 0, 1), (DELTA, 1, 2), (EPS, 1, 0))


def digits(index: int, base: int, n: int) -> tuple[int, ...]:
    """Big-endian base-``base`` expansion of ``index`` with ``n`` digits."""
    out = []
    for _ in range(n):
        index, r = divmod(index, base)
        out.append(r)
    return tuple(reversed(out))


def undigits(ds: Sequence[int], base: int) -> int:
    i = 0
    for d in ds:
        i = i * base + d
    return i


@dataclass(frozen=True)
class OmegaAlgebra:
    field: FieldSpec
    signature: OmegaSignature
    dim: int
    basis: tuple[str, ...]
    structure: Mapping[str, Matrix] = field(hash=False, compare=True)

    def __post_init__(self):
        if self.dim <= 0:
            raise BadParams("dimension must be positive")
        if len(self.basis) != self.dim or len(set(self.basis)) != self.dim:
            raise BadParams("basis labels must be distinct and match dim")
        for op in self.signature:
            m = self.structure.get(op.name)
            if m is None:
                raise BadParams(f"missing structure tensor for {op.name}")
            want = (self.dim ** op.target, self.dim ** op.source)
            if m.shape != want:
                raise DimensionMismatch(f"{op.name}: shape {m.shape}, expected {want}")
            if m.field != self.field:
                raise FieldMismatch(f"{op.name} over {m.field}, algebra over {self.field}")
        extra = set(self.structure) - set(self.signature.names())
        if extra:
            raise BadParams(f"structure for unknown ops {sorted(extra)}")

    def op(self, name: str) -> Matrix:
        return self.structure[name]

    def has(self, *names: str) -> bool:
        return all(n in self.structure for n in names)

    def restrict(self, *names: str) -> "OmegaAlgebra":
        """The same space viewed as an algebra over a subsignature."""
        ops = tuple(o for o in self.signature if o.name in names)
        return OmegaAlgebra(self.field, OmegaSignature(ops), self.dim, self.basis,
                            {o.name: self.structure[o.name] for o in ops})

    # helpers for the common unital-algebra case
    def unit_vector(self) -> list:
        return self.op(UNIT).col(0)

    def multiply(self, x: Sequence, y: Sequence) -> list:
        """Product of two coordinate vectors under ``mu``."""
        mu = self.op(MU)
        n = self.dim
        f = self.field
        out = [f.zero] * n
        pairs = [(i * n + j, a * b) for i, a in enumerate(x) if a for j, b in enumerate(y) if b]
        for k in range(n):
            row = mu.data[k]
            s = f.zero
            for c, ab in pairs:
                if row[c]:
                    s = s + row[c] * ab
            out[k] = s
        return out

    def to_json(self) -> dict:
        f = self.field
        return {
            "field": f.to_json(),
            "signature": [{"name": o.name, "source": o.source, "target": o.target} for o in self.signature],
            "dim": self.dim,
            "basis": list(self.basis),
            "ops": {o.name: [[f.to_str(x) for x in r] for r in self.structure[o.name].data]
                    for o in self.signature},
        }

    @classmethod
    def from_json(cls, d: dict) -> "OmegaAlgebra":
        extra = set(d) - {"field", "signature", "dim", "basis", "ops"}
        if extra:
            raise BadParams(f"unknown keys {sorted(extra)}")
        f = FieldSpec.from_json(d["field"])
        ops = []
        for o in d["signature"]:
            if set(o) - {"name", "source", "target"}:
                raise BadParams(f"unknown keys in signature entry {o}")
            if o["source"] > MAX_ARITY or o["target"] > MAX_ARITY:
                raise BadParams(f"arity above {MAX_ARITY} in {o['name']}")
            ops.append(OpSymbol(o["name"], int(o["source"]), int(o["target"])))
        dim = int(d["dim"])
        sig = OmegaSignature(tuple(ops))
        if set(d["ops"]) != set(sig.names()):
            raise BadParams("ops keys must match the signature")
        structure = {}
        for o in sig:
            rows = [[f.from_str(x) for x in r] for r in d["ops"][o.name]]
            structure[o.name] = Matrix(f, dim ** o.target, dim ** o.source, rows)
        return cls(f, sig, dim, tuple(d["basis"]), structure)


def _algebra(f: FieldSpec, sig: OmegaSignature, basis: Sequence[str], tensors: dict) -> OmegaAlgebra:
    return OmegaAlgebra(f, sig, len(basis), tuple(basis), tensors)


def mu_from_table(f: FieldSpec, table) -> Matrix:
    """``table[i][j]`` is the coordinate vector of e_i e_j."""
    n = len(table)
    m = Matrix(f, n, n * n)
    for i in range(n):
        for j in range(n):
            for k, c in enumerate(table[i][j]):
                m.data[k][i * n + j] = f(c)
    return m


def delta_from_table(f: FieldSpec, table) -> Matrix:
    """``table[k]`` maps pairs (i, j) to the coefficient of e_i (x) e_j in Delta(e_k)."""
    n = len(table)
    m = Matrix(f, n * n, n)
    for k, terms in enumerate(table):
        for (i, j), c in terms.items():
            m.data[i * n + j][k] = f(c)
    return m


def _basis_vec(f, n, i):
    v = [f.zero] * n
    v[i] = f.one
    return v


def _cyclic(f: FieldSpec, n: int, structure: str, labels: list[str], group_like: bool) -> OmegaAlgebra:
    """Group algebra (group_like) or its dual function algebra on C_n."""
    tensors = {}
    if group_like:
        table = [[_basis_vec(f, n, (i + j) % n) for j in range(n)] for i in range(n)]
        unit = _basis_vec(f, n, 0)
        delta = [{(k, k): 1} for k in range(n)]
        eps = [1] * n
    else:
        table = [[_basis_vec(f, n, i) if i == j else [f.zero] * n for j in range(n)] for i in range(n)]
        unit = [f.one] * n
        delta = [{(i, (k - i) % n): 1 for i in range(n)} for k in range(n)]
        eps = [1 if k == 0 else 0 for k in range(n)]
    if structure in ("algebra", "bialgebra"):
        tensors[MU] = mu_from_table(f, table)
        tensors[UNIT] = Matrix.column(f, unit)
    if structure in ("coalgebra", "bialgebra"):
        tensors[DELTA] = delta_from_table(f, delta)
        tensors[EPS] = Matrix(f, 1, n, [eps])
    sig = {"algebra": UNITAL_ALGEBRA, "coalgebra": COALGEBRA, "bialgebra": BIALGEBRA}.get(structure)
    if sig is None:
        raise BadParams(f"structure must be algebra, coalgebra or bialgebra, got {structure!r}")
    return _algebra(f, sig, labels, tensors)


def standard_algebra(kind: str, field: FieldSpec | None = None, **params) -> OmegaAlgebra:
    """Build one of the catalogued algebras.

    Kinds: ``base_field``, ``unital_algebra_from_table``,
    ``nonunital_algebra_from_table``, ``coalgebra_from_table``, ``group_algebra``,
    ``dual_group_algebra``, ``matrix_algebra``, ``truncated_poly``,
    ``nilpotent_span_algebra``, ``primitive_span_coalgebra``.
    """
    f = field or FieldSpec("Q")
    try:
        if kind == "base_field":
            unital = params.get("unital", True)
            tensors = {MU: mu_from_table(f, [[[1]]])}
            if unital:
                tensors[UNIT] = Matrix.column(f, [1])
            return _algebra(f, UNITAL_ALGEBRA if unital else ALGEBRA, ["1"], tensors)

        if kind in ("unital_algebra_from_table", "nonunital_algebra_from_table"):
            table = params["table"]
            n = len(table)
            basis = params.get("basis") or [f"e{i + 1}" for i in range(n)]
            tensors = {MU: mu_from_table(f, table)}
            if kind == "unital_algebra_from_table":
                tensors[UNIT] = Matrix.column(f, params["unit"])
                return _algebra(f, UNITAL_ALGEBRA, basis, tensors)
            return _algebra(f, ALGEBRA, basis, tensors)

        if kind == "coalgebra_from_table":
            delta = params["delta"]
            n = len(delta)
            basis = params.get("basis") or [f"c{i + 1}" for i in range(n)]
            tensors = {DELTA: delta_from_table(f, delta), EPS: Matrix(f, 1, n, [params["eps"]])}
            return _algebra(f, COALGEBRA, basis, tensors)

        if kind == "group_algebra":
            n = int(params["n"])
            labels = ["e", "c"] + [f"c^{i}" for i in range(2, n)]
            return _cyclic(f, n, params.get("structure", "algebra"), labels[:n], True)

        if kind == "dual_group_algebra":
            n = int(params["n"])
            labels = ["d_e", "d_c"] + [f"d_c^{i}" for i in range(2, n)]
            return _cyclic(f, n, params.get("structure", "algebra"), labels[:n], False)

        if kind == "matrix_algebra":
            n = int(params["n"])
            d = n * n
            table = [[[f.zero] * d for _ in range(d)] for _ in range(d)]
            for i, j, k, l in product(range(n), repeat=4):
                if j == k:
                    table[i * n + j][k * n + l][i * n + l] = f.one
            unit = [f.one if i == j else f.zero for i in range(n) for j in range(n)]
            basis = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
            return _algebra(f, UNITAL_ALGEBRA, basis, {MU: mu_from_table(f, table), UNIT: Matrix.column(f, unit)})

        if kind == "truncated_poly":
            k = int(params["k"])
            if k < 1:
                raise BadParams("k must be positive")
            relation = params.get("relation", "nil")
            table = [[[f.zero] * k for _ in range(k)] for _ in range(k)]
            for i in range(k):
                for j in range(k):
                    if i + j < k:
                        table[i][j][i + j] = f.one
                    elif relation == "unipotent":
                        table[i][j][i + j - k] = f.one
                    elif relation != "nil":
                        raise BadParams(f"relation must be nil or unipotent, got {relation!r}")
            basis = ["1", "x"] + [f"x^{i}" for i in range(2, k)]
            tensors = {MU: mu_from_table(f, table)}
            if params.get("unital", True):
                tensors[UNIT] = Matrix.column(f, _basis_vec(f, k, 0))
                return _algebra(f, UNITAL_ALGEBRA, basis[:k], tensors)
            return _algebra(f, ALGEBRA, basis[:k], tensors)

        if kind == "nilpotent_span_algebra":
            N = int(params["N"])
            d = N + 1
            table = [[[f.zero] * d for _ in range(d)] for _ in range(d)]
            for i in range(d):
                table[0][i][i] = f.one
                table[i][0][i] = f.one
            basis = ["1"] + [f"v{i}" for i in range(1, d)]
            return _algebra(f, UNITAL_ALGEBRA, basis,
                            {MU: mu_from_table(f, table), UNIT: Matrix.column(f, _basis_vec(f, d, 0))})

        if kind == "primitive_span_coalgebra":
            # v0 grouplike, v1..vN primitive relative to v0
            N = int(params["N"])
            d = N + 1
            delta = [{(0, 0): 1}] + [{(0, i): 1, (i, 0): 1} for i in range(1, d)]
            eps = [1] + [0] * N
            basis = [f"v{i}" for i in range(d)]
            return _algebra(f, COALGEBRA, basis, {DELTA: delta_from_table(f, delta), EPS: Matrix(f, 1, d, [eps])})
    except KeyError as e:
        raise BadParams(f"{kind}: missing parameter {e}") from None
    raise BadParams(f"unknown algebra kind {kind!r}")


@dataclass(frozen=True)
class OmegaMorphismCandidate:
    domain: OmegaAlgebra
    codomain: OmegaAlgebra
    matrix: Matrix


def is_morphism(c: OmegaMorphismCandidate) -> Report:
    """Check f^{(x)t} . w_A == w_B . f^{(x)s} for every operation."""
    a, b, f = c.domain, c.codomain, c.matrix
    if f.shape != (b.dim, a.dim):
        raise DimensionMismatch(f"map has shape {f.shape}, expected {(b.dim, a.dim)}")
    if a.field != b.field or f.field != a.field:
        raise FieldMismatch("domain, codomain and map must share a field")
    if a.signature != b.signature:
        raise SignatureMismatch("domain and codomain signatures differ")
    rep = Report()
    for op in a.signature:
        lhs = kron_power(f, op.target) @ a.op(op.name)
        rhs = b.op(op.name) @ kron_power(f, op.source)
        if lhs != rhs:
            rep.fail(op.name, "square does not commute")
    return rep


def tensor_product(a: OmegaAlgebra, b: OmegaAlgebra) -> OmegaAlgebra:
    """Factor-wise structure on A (x) B with the middle interchange."""
    if a.field != b.field:
        raise FieldMismatch("tensor factors over different fields")
    if a.signature != b.signature:
        raise SignatureMismatch("tensor factors with different signatures")
    da, db = a.dim, b.dim
    d = da * db
    tensors = {}
    for op in a.signature:
        s, t = op.source, op.target
        m = Matrix(a.field, d ** t, d ** s)
        bnz = list(b.op(op.name).nonzero())
        for ra, ca, x in a.op(op.name).nonzero():
            rda, cda = digits(ra, da, t), digits(ca, da, s)
            for rb, cb, y in bnz:
                rdb, cdb = digits(rb, db, t), digits(cb, db, s)
                row = undigits([i * db + j for i, j in zip(rda, rdb)], d)
                col = undigits([i * db + j for i, j in zip(cda, cdb)], d)
                m.data[row][col] = x * y
        tensors[op.name] = m
    basis = [f"({x},{y})" for x in a.basis for y in b.basis]
    return OmegaAlgebra(a.field, a.signature, d, tuple(basis), tensors)


def dual_name(name: str) -> str:
    if name in DUAL_NAMES:
        return DUAL_NAMES[name]
    return name[:-1] if name.endswith("*") else name + "*"


def dual_omega_algebra(a: OmegaAlgebra) -> OmegaAlgebra:
    """A* as an Omega*-algebra: arities swapped, structure tensors transposed."""
    ops = tuple(OpSymbol(dual_name(o.name), o.target, o.source) for o in a.signature)
    tensors = {dual_name(o.name): a.op(o.name).transpose() for o in a.signature}
    basis = tuple(x[:-1] if x.endswith("*") else x + "*" for x in a.basis)
    return OmegaAlgebra(a.field, OmegaSignature(ops), a.dim, basis, tensors)
