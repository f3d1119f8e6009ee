"""Exact scalars (rationals, prime fields) and dense linear algebra over them.

Rationals are plain :class:`fractions.Fraction` values; prime-field residues are
:class:`ModP`.  A :class:`FieldSpec` converts between ints/strings and field
elements, so generic code only uses ``+ - * /``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence


class ExactError(Exception):
    """Base class for errors raised by the exact layer."""


class FieldMismatch(ExactError):
    pass


class DimensionMismatch(ExactError):
    pass


class NoSolution(ExactError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@total_ordering
class ModP:
    """Residue class modulo a prime, stored canonically in [0, p)."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, o):
        if isinstance(o, ModP):
            if o.p != self.p:
                raise FieldMismatch(f"F_{self.p} vs F_{o.p}")
            return o.v
        if isinstance(o, int):
            return o
        if isinstance(o, Fraction):
            return o.numerator * pow(o.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return ModP(self.v - o, self.p)

    def __rsub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return ModP(o - self.v, self.p)

    def __mul__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return ModP(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return ModP(o, self.p) / self

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            return ModP(pow(pow(self.v, -1, self.p), -e, self.p), self.p)
        return ModP(pow(self.v, e, self.p), self.p)

    def __eq__(self, o):
        if isinstance(o, ModP):
            return self.p == o.p and self.v == o.v
        if isinstance(o, (int, Fraction)):
            return self.v == ModP(0, self.p)._other(o) % self.p
        return NotImplemented

    def __lt__(self, o):
        # only used for deterministic sorting
        return self.v < (o.v if isinstance(o, ModP) else o)

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} mod {self.p}"

    def __str__(self):
        return str(self.v)


@dataclass(frozen=True)
class FieldSpec:
    """The base field: ``FieldSpec("Q")`` or ``FieldSpec("Fp", 13)``."""

    kind: str = "Q"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise ValueError("Q carries no modulus")
        elif self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"Fp needs a prime modulus, got {self.p!r}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``Q`` or ``Fp:13``."""
        text = text.strip()
        if text in ("Q", "QQ"):
            return cls("Q")
        if text.startswith("Fp:"):
            return cls("Fp", int(text[3:]))
        raise ValueError(f"bad field {text!r}; expected Q or Fp:p")

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == "Q" else self.p

    def __call__(self, x):
        if self.kind == "Q":
            if isinstance(x, ModP):
                raise FieldMismatch("F_p element used over Q")
            return Fraction(x)
        if isinstance(x, ModP):
            if x.p != self.p:
                raise FieldMismatch(f"F_{x.p} element used over F_{self.p}")
            return x
        if isinstance(x, Fraction):
            return ModP(x.numerator, self.p) / x.denominator
        return ModP(int(x), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def from_str(self, s) -> object:
        if isinstance(s, int):
            return self(s)
        s = str(s).strip()
        if self.kind == "Q":
            return Fraction(s)
        if "/" in s:
            return self(Fraction(s))
        return self(int(s))

    def to_str(self, x) -> str:
        x = self(x)
        return str(x)

    def to_json(self) -> dict:
        return {"kind": "Q"} if self.kind == "Q" else {"kind": "Fp", "p": self.p}

    @classmethod
    def from_json(cls, d: dict) -> "FieldSpec":
        extra = set(d) - {"kind", "p"}
        if extra:
            raise ValueError(f"unknown field keys {sorted(extra)}")
        return cls(d["kind"], d.get("p"))

    def __str__(self):
        return "Q" if self.kind == "Q" else f"Fp:{self.p}"

    def elements(self):
        """Enumerate the field (prime fields only)."""
        if self.kind != "Fp":
            raise ValueError("Q is infinite")
        return [ModP(i, self.p) for i in range(self.p)]

    def primitive_root_of_unity(self, n: int):
        """A primitive n-th root of unity; requires n | p-1."""
        if self.kind != "Fp" or (self.p - 1) % n:
            raise ValueError(f"no primitive {n}-th root of unity in {self}")
        p = self.p
        factors = [q for q in range(2, p) if (p - 1) % q == 0 and _is_prime(q)]
        for g in range(2, p):
            if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
                return ModP(pow(g, (p - 1) // n, p), p)
        return ModP(1, p)  # p == 2


QQ = FieldSpec("Q")


class Matrix:
    """Dense matrix of exact scalars.  Treated as immutable."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: FieldSpec, rows: int, cols: int, data: Sequence[Sequence] | None = None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if data is None:
            z = field.zero
            self.data = [[z] * cols for _ in range(rows)]
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise DimensionMismatch(f"data does not have shape {rows}x{cols}")
            self.data = [[field(x) for x in r] for r in data]

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(field, len(rows), cols, rows)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        m = cls(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def column(cls, field: FieldSpec, values: Sequence) -> "Matrix":
        return cls(field, len(values), 1, [[v] for v in values])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> list:
        return list(self.data[i])

    def col(self, j: int) -> list:
        return [r[j] for r in self.data]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, tuple(map(tuple, self.data))))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"Matrix({self.rows}x{self.cols} over {self.field}: [{body}])"

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Matrix(self.field, self.rows, self.cols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix(self.field, self.rows, self.cols, [[c * a for a in r] for r in self.data])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        z = self.field.zero
        out = []
        ocols = list(zip(*other.data)) if other.rows else [()] * other.cols
        for r in self.data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for c in ocols:
                s = z
                for k, a in nz:
                    b = c[k]
                    if b:
                        s = s + a * b
                row.append(s)
            out.append(row)
        return Matrix(self.field, self.rows, other.cols, out)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows, [list(c) for c in zip(*self.data)] if self.rows else
                      [[] for _ in range(self.cols)])

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product, first factor most significant."""
        self._check(other)
        out = []
        for r in self.data:
            for s in other.data:
                out.append([a * b for a in r for b in s])
        return Matrix(self.field, self.rows * other.rows, self.cols * other.cols, out)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.data)

    def flatten(self) -> list:
        return [x for r in self.data for x in r]

    def nonzero(self):
        """Yield (i, j, value) for the nonzero entries."""
        for i, r in enumerate(self.data):
            for j, x in enumerate(r):
                if x:
                    yield i, j, x

    def rank(self) -> int:
        return len(rref(self)[1])


def kron_power(m: Matrix, n: int) -> Matrix:
    out = Matrix.identity(m.field, 1)
    for _ in range(n):
        out = out.kron(m)
    return out


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are the first nonzero entry scanning left to right.
    """
    a = [list(r) for r in m.data]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        piv = next((i for i in range(r, m.rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        prow = a[r]
        nzc = [j for j in range(c, m.cols) if prow[j]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                ri = a[i]
                for j in nzc:
                    ri[j] = ri[j] - f * prow[j]
        pivots.append(c)
        r += 1
    out = Matrix.__new__(Matrix)
    out.field, out.rows, out.cols, out.data = m.field, m.rows, m.cols, a
    return out, pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def row_basis(vectors: Iterable[Sequence], field: FieldSpec, width: int) -> list[list]:
    """RREF basis (nonzero rows) of the span of ``vectors``."""
    rows = [list(v) for v in vectors]
    if not rows:
        return []
    red, piv = rref(Matrix.from_rows(field, rows, width))
    return [red.row(i) for i in range(len(piv))]


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of {x : m x = 0}."""
    red, piv = rref(m)
    free = [j for j in range(m.cols) if j not in set(piv)]
    f = m.field
    out = Matrix(f, m.cols, len(free))
    for k, j in enumerate(free):
        out.data[j][k] = f.one
        for i, pc in enumerate(piv):
            out.data[pc][k] = -red.data[i][j]
    return out


def solve_linear(a: Matrix, b: Matrix) -> Matrix:
    """One exact solution x of a x = b; raises NoSolution if inconsistent.

    Free variables are set to zero.
    """
    a._check(b)
    if a.rows != b.rows:
        raise DimensionMismatch(f"a has {a.rows} rows, b has {b.rows}")
    aug = Matrix(a.field, a.rows, a.cols + b.cols,
                 [ra + rb for ra, rb in zip(a.data, b.data)])
    red, piv = rref(aug)
    if any(p >= a.cols for p in piv):
        raise NoSolution("inconsistent linear system")
    x = Matrix(a.field, a.cols, b.cols)
    for i, pc in enumerate(piv):
        x.data[pc] = red.data[i][a.cols:]
    return x


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    try:
        x = solve_linear(m, Matrix.identity(m.field, m.rows))
    except NoSolution:
        raise NoSolution("matrix is singular") from None
    if rank(m) != m.rows:
        raise NoSolution("matrix is singular")
    return x


def in_span(basis_rows: Sequence[Sequence], vectors: Iterable[Sequence], field: FieldSpec, width: int) -> bool:
    """True iff every vector lies in the row span of ``basis_rows``."""
    base = row_basis(basis_rows, field, width)
    r = len(base)
    for v in vectors:
        if len(row_basis(base + [list(v)], field, width)) != r:
            return False
    return True


def charpoly(m: Matrix) -> list:
    """Characteristic polynomial det(xI - m), coefficients from x^n down.

    Berkowitz's algorithm; division free so it works in any characteristic.
    """
    n = m.rows
    f = m.field
    if n == 0:
        return [f.one]
    a = m.data
    # vect holds the coefficients of the char poly of the leading r x r block
    vect = [f.one, -a[0][0]]
    for r in range(1, n):
        # block decomposition [[A_r, C], [R, a_rr]]
        R = a[r][:r]
        C = [a[i][r] for i in range(r)]
        A = [row[:r] for row in a[:r]]
        # Toeplitz column: 1, -a_rr, -R C, -R A C, -R A^2 C, ...
        col = [f.one, -a[r][r]]
        v = C
        for _ in range(r):
            s = f.zero
            for x, y in zip(R, v):
                s = s + x * y
            col.append(-s)
            v = [sum((A[i][k] * v[k] for k in range(r)), f.zero) for i in range(r)]
        # multiply the lower-triangular Toeplitz matrix by vect
        new = []
        for i in range(r + 2):
            s = f.zero
            for k in range(min(i, r) + 1):
                s = s + col[i - k] * vect[k]
            new.append(s)
        vect = new
    return vect


def roots_in_field(coeffs: Sequence, field: FieldSpec) -> list:
    """Distinct roots in the base field of the polynomial (highest degree first)."""
    coeffs = [field(c) for c in coeffs]
    while coeffs and not coeffs[0]:
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return []
    if field.kind == "Fp":
        if field.p > 1 << 20:
            raise ValueError("prime too large for root enumeration")
        out = []
        for x in field.elements():
            s = field.zero
            for c in coeffs:
                s = s * x + c
            if not s:
                out.append(x)
        return out
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], x, domain="QQ")
    out = []
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            out.append(Fraction(int(r.p), int(r.q)))
    return sorted(set(out))
