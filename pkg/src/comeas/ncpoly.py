"""Free associative algebras, two-sided ideals and degree-truncated rewriting.

Words are tuples of generator indices.  The monomial order is deg-lex: longer
words are larger, equal-length words compare letter by letter from the left,
and a later-declared generator is larger than an earlier one.

Truncation: ``complete(pres, D)`` resolves every overlap whose overlap word has
degree <= D.  With I_D = span{w r w' : deg <= D} the elements of degree <= D
that reduce to zero satisfy  I_D <= {nf = 0} <= I.  So a zero normal form always
proves membership in the full ideal and a nonzero one rules out I_D.  For
homogeneous relations the two bounds agree in every degree <= D.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .exact import FieldSpec, Matrix, QQ

Word = tuple


class DegreeBoundExceeded(Exception):
    pass


def word_key(w: Word):
    return (len(w), w)


class NcPoly:
    """Element of a free algebra: a finite map word -> nonzero scalar."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms: Mapping[Word, object] | None = None):
        self.field = field
        self.terms = {}
        if terms:
            for w, c in terms.items():
                c = field(c)
                if c:
                    self.terms[tuple(w)] = c

    @classmethod
    def _raw(cls, field, terms: dict) -> "NcPoly":
        p = cls.__new__(cls)
        p.field = field
        p.terms = terms
        return p

    @classmethod
    def constant(cls, field: FieldSpec, c=1) -> "NcPoly":
        return cls(field, {(): c})

    @classmethod
    def gen(cls, field: FieldSpec, i: int) -> "NcPoly":
        return cls(field, {(i,): 1})

    @classmethod
    def word(cls, field: FieldSpec, w: Sequence[int], c=1) -> "NcPoly":
        return cls(field, {tuple(w): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def leading(self):
        w = max(self.terms, key=word_key)
        return w, self.terms[w]

    def sorted_terms(self):
        """Terms in decreasing monomial order."""
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]), reverse=True)

    def constant_term(self):
        return self.terms.get((), self.field.zero)

    def __eq__(self, other):
        if isinstance(other, NcPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "NcPoly") -> "NcPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NcPoly._raw(self.field, out)

    def __neg__(self) -> "NcPoly":
        return NcPoly._raw(self.field, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        return self + (-other)

    def scale(self, c) -> "NcPoly":
        c = self.field(c)
        if not c:
            return NcPoly._raw(self.field, {})
        return NcPoly._raw(self.field, {w: c * x for w, x in self.terms.items()})

    def __mul__(self, other) -> "NcPoly":
        if not isinstance(other, NcPoly):
            return self.scale(other)
        out: dict = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                s = out.get(w)
                s = a * b if s is None else s + a * b
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return NcPoly._raw(self.field, out)

    def __rmul__(self, c) -> "NcPoly":
        return self.scale(c)

    def monic(self) -> "NcPoly":
        _, c = self.leading()
        return self.scale(1 / c)

    def reversed(self) -> "NcPoly":
        """Image under the anti-automorphism reversing every word."""
        return NcPoly._raw(self.field, {w[::-1]: c for w, c in self.terms.items()})

    def substitute(self, images: Sequence["NcPoly"]) -> "NcPoly":
        """Algebra map sending generator i to images[i]."""
        f = self.field
        out = NcPoly._raw(f, {})
        for w, c in self.terms.items():
            t = NcPoly.constant(f, c)
            for i in w:
                t = t * images[i]
                if not t:
                    break
            out = out + t
        return out

    def shift(self, offset: int) -> "NcPoly":
        return NcPoly._raw(self.field, {tuple(i + offset for i in w): c for w, c in self.terms.items()})

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            mono = "*".join(names[i] for i in w)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self):
        return f"NcPoly({self.format([f'g{i}' for i in range(1 + max((max(w) for w in self.terms if w), default=0))])})"

    def to_json(self, names: Sequence[str]) -> list:
        return [{"word": [names[i] for i in w], "coeff": self.field.to_str(c)} for w, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, field: FieldSpec, terms: list, index: Mapping[str, int]) -> "NcPoly":
        out = NcPoly._raw(field, {})
        for t in terms:
            if set(t) - {"word", "coeff"}:
                raise ValueError(f"unknown keys in term {t}")
            out = out + NcPoly(field, {tuple(index[n] for n in t["word"]): field.from_str(t["coeff"])})
        return out


@dataclass(frozen=True)
class GenSymbol:
    name: str
    beta: int | None = None
    alpha: int | None = None
    layer: int = 0

    def to_json(self) -> dict:
        d = {"name": self.name}
        if self.beta is not None:
            d["beta"] = self.beta
            d["alpha"] = self.alpha
        d["layer"] = self.layer
        return d

    @classmethod
    def from_json(cls, d: dict) -> "GenSymbol":
        if set(d) - {"name", "beta", "alpha", "layer"}:
            raise ValueError(f"unknown keys in generator {d}")
        return cls(d["name"], d.get("beta"), d.get("alpha"), d.get("layer", 0))


@dataclass
class FiniteDimCertificate:
    finite: bool
    degree: int
    basis: list[Word] | None = None

    def __bool__(self):
        return self.finite


@dataclass
class Presentation:
    """Generators and relations of T(W)/I, plus a degree-truncated rewriting cache."""

    field: FieldSpec
    generators: list[GenSymbol]
    relations: list[NcPoly]
    max_reducers: int = 50_000
    gb: dict = field(default_factory=dict, repr=False)  # leading word -> monic reducer
    complete_below: int = -1
    _nf_cache: dict = field(default_factory=dict, repr=False)
    _lengths: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        self.relations = [r for r in self.relations if r]

    # -- basic data ----------------------------------------------------------
    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def index(self) -> dict[str, int]:
        return {g.name: i for i, g in enumerate(self.generators)}

    def gen(self, i: int | str) -> NcPoly:
        if isinstance(i, str):
            i = self.index()[i]
        return NcPoly.gen(self.field, i)

    def one(self) -> NcPoly:
        return NcPoly.constant(self.field, 1)

    def parse_word(self, names: Sequence[str]) -> NcPoly:
        idx = self.index()
        return NcPoly.word(self.field, [idx[n] for n in names])

    def format(self, p: NcPoly) -> str:
        return p.format(self.names)

    @property
    def bound(self) -> int:
        return self.complete_below

    # -- rewriting -----------------------------------------------------------
    def _set_reducers(self, reducers: Iterable[NcPoly]) -> None:
        self.gb = {}
        for r in reducers:
            self.gb[r.leading()[0]] = r
        self._lengths = sorted({len(w) for w in self.gb})
        self._nf_cache = {}

    def _find_divisor(self, w: Word):
        gb = self.gb
        n = len(w)
        for L in self._lengths:
            for i in range(n - L + 1):
                g = gb.get(w[i:i + L])
                if g is not None:
                    return i, i + L, g
        return None

    def _nf_word(self, w: Word) -> dict:
        cache = self._nf_cache
        hit = cache.get(w)
        if hit is not None:
            return hit
        found = self._find_divisor(w)
        if found is None:
            out = {w: self.field.one}
        else:
            i, j, g = found
            pre, post = w[:i], w[j:]
            lw = w[i:j]
            out = {}
            for v, c in g.terms.items():
                if v == lw:
                    continue
                for u, d in self._nf_word(pre + v + post).items():
                    s = out.get(u)
                    s = -c * d if s is None else s - c * d
                    if s:
                        out[u] = s
                    else:
                        out.pop(u, None)
        cache[w] = out
        return out

    def reduce(self, f: NcPoly) -> NcPoly:
        """Full reduction by the current reducers, with no degree check."""
        out: dict = {}
        for w, c in f.terms.items():
            for u, d in self._nf_word(w).items():
                s = out.get(u)
                s = c * d if s is None else s + c * d
                if s:
                    out[u] = s
                else:
                    out.pop(u, None)
        return NcPoly._raw(self.field, out)

    def normal_form(self, f: NcPoly) -> NcPoly:
        if f.degree > self.complete_below:
            raise DegreeBoundExceeded(
                f"degree {f.degree} exceeds the certified degree {self.complete_below}")
        return self.reduce(f)

    # -- completion ----------------------------------------------------------
    def complete(self, degree: int) -> "Presentation":
        """Resolve all overlaps of degree <= ``degree``; idempotent for smaller degrees."""
        if degree <= self.complete_below:
            return self
        maxrel = max((r.degree for r in self.relations), default=0)
        if degree < maxrel:
            raise DegreeBoundExceeded(f"degree {degree} below relation degree {maxrel}")
        seeds = list(self.gb.values()) if self.gb else list(self.relations)
        reducers = _complete(seeds, degree, self)
        self._set_reducers(reducers)
        self.complete_below = degree
        return self

    def reducers(self) -> list[NcPoly]:
        return sorted(self.gb.values(), key=lambda g: word_key(g.leading()[0]))

    # -- counting ------------------------------------------------------------
    def normal_words(self, degree: int) -> list[list[Word]]:
        """Normal words grouped by degree 0..degree."""
        if () in self.gb:
            return [[] for _ in range(degree + 1)]
        layers = [[()]]
        lens = self._lengths
        for d in range(1, degree + 1):
            nxt = []
            for w in layers[-1]:
                for x in range(self.ngens):
                    v = w + (x,)
                    if not any(v[len(v) - L:] in self.gb for L in lens if L <= len(v)):
                        nxt.append(v)
            layers.append(nxt)
        return layers

    def hilbert_function(self, degree: int) -> list[int]:
        self._check_certified(degree)
        return [len(ws) for ws in self.normal_words(degree)]

    def _check_certified(self, degree: int):
        if degree > self.complete_below:
            raise DegreeBoundExceeded(f"completion certified only to degree {self.complete_below}")

    def finite_dim_certificate(self, degree: int) -> FiniteDimCertificate:
        """FiniteDim with the normal-word basis, or Unknown.

        Besides a degree d < D with no normal words, the normal-word algebra must be
        associative and unital: this proves the normal words are independent in
        the true quotient, not just modulo the truncated ideal.
        """
        self._check_certified(degree)
        layers = self.normal_words(degree)
        d = next((k for k in range(degree) if not layers[k]), None)
        if d is None:
            return FiniteDimCertificate(False, degree)
        basis = [w for layer in layers[:d] for w in layer]
        if not _normal_words_associative(self, basis):
            return FiniteDimCertificate(False, degree)
        return FiniteDimCertificate(True, degree, basis)

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "generators": [g.to_json() for g in self.generators],
            "relations": [r.to_json(self.names) for r in self.relations],
        }

    @classmethod
    def from_json(cls, d: dict, field: FieldSpec | None = None) -> "Presentation":
        if set(d) - {"field", "generators", "relations"}:
            raise ValueError(f"unknown keys {sorted(set(d) - {'field', 'generators', 'relations'})}")
        f = FieldSpec.from_json(d["field"]) if "field" in d else (field or QQ)
        gens = [GenSymbol.from_json(g) for g in d["generators"]]
        idx = {g.name: i for i, g in enumerate(gens)}
        rels = [NcPoly.from_json(f, r, idx) for r in d["relations"]]
        return cls(f, gens, rels)

    def listing(self) -> str:
        lines = [f"generators: {', '.join(self.names) or '(none)'}"]
        for r in self.relations:
            lines.append(f"  {self.format(r)} = 0")
        return "\n".join(lines)


def _complete(seeds: list[NcPoly], D: int, pres: Presentation) -> list[NcPoly]:
    """Truncated Buchberger completion; returns an interreduced reducer list."""
    G: dict[Word, NcPoly] = {}
    state = {"dirty": True}

    def reduce_by(f: NcPoly) -> NcPoly:
        if state["dirty"]:
            pres._set_reducers(G.values())
            state["dirty"] = False
        return pres.reduce(f)

    def absorb(polys: list[NcPoly]) -> None:
        pending = list(polys)
        while pending:
            pending.sort(key=lambda q: word_key(q.leading()[0]))
            p = reduce_by(pending.pop(0))
            if not p:
                continue
            if len(G) >= pres.max_reducers:
                raise DegreeBoundExceeded(f"more than {pres.max_reducers} reducers")
            p = p.monic()
            lw = p.leading()[0]
            for w in [w for w in G if _contains(w, lw)]:
                pending.append(G.pop(w))
            G[lw] = p
            state["dirty"] = True

    def interreduce() -> None:
        # a tail is smaller than its leading word, so it never contains it:
        # reducing by all of G equals reducing by the others
        reduce_by(NcPoly._raw(pres.field, {}))
        for lw, g in list(G.items()):
            lead = NcPoly.word(g.field, lw)
            G[lw] = lead + pres.reduce(g - lead)
        state["dirty"] = True

    absorb(seeds)
    done: set = set()
    while True:
        interreduce()
        found = False
        for deg, u, v, k in sorted(_overlaps(G, D), key=lambda t: t[0]):
            g1, g2 = G.get(u), G.get(v)
            if g1 is None or g2 is None:
                continue
            key = (g1, g2, k)
            if key in done:
                continue
            s = g1 * NcPoly.word(g1.field, v[k:]) - NcPoly.word(g1.field, u[:len(u) - k]) * g2
            r = reduce_by(s)
            if r:
                absorb([r])
                found = True
            else:
                done.add(key)
        if not found:
            break
    interreduce()
    return list(G.values())


def _contains(w: Word, sub: Word) -> bool:
    L = len(sub)
    return any(w[i:i + L] == sub for i in range(len(w) - L + 1))


def _overlaps(G: dict, D: int):
    """(degree, u, v, k): suffix of length k of u equals prefix of v, 0 < k < min."""
    by_first: dict = {}
    for v in G:
        if v:
            by_first.setdefault(v[0], []).append(v)
    for u in G:
        for k in range(1, len(u)):
            suffix = u[len(u) - k:]
            for v in by_first.get(suffix[0], ()):
                if k < len(v) and v[:k] == suffix:
                    deg = len(u) + len(v) - k
                    if deg <= D:
                        yield deg, u, v, k


def _normal_words_associative(pres: Presentation, basis: list[Word]) -> bool:
    f = pres.field
    index = {w: i for i, w in enumerate(basis)}
    if not basis:
        return True
    if () not in index:
        return False

    def mult(x: dict, y: dict) -> dict:
        out = NcPoly._raw(f, {})
        for u, a in x.items():
            for v, b in y.items():
                out = out + NcPoly._raw(f, dict(pres._nf_word(u + v))).scale(a * b)
        return out.terms

    for u in basis:
        for v in basis:
            uv = mult({u: f.one}, {v: f.one})
            if any(w not in index for w in uv):
                return False
            for w in basis:
                if mult(uv, {w: f.one}) != mult({u: f.one}, mult({v: f.one}, {w: f.one})):
                    return False
    # the algebra generated by the letters must reproduce normal words
    for w in basis:
        acc = {(): f.one}
        for x in w:
            acc = mult(acc, {(x,): f.one} if (x,) in index else pres._nf_word((x,)))
        if acc != {w: f.one}:
            return False
    return True


def normal_basis_structure(pres: Presentation, basis: list[Word]) -> tuple[Matrix, list]:
    """Multiplication tensor (dim x dim^2) and unit vector of the quotient on ``basis``."""
    f = pres.field
    n = len(basis)
    index = {w: i for i, w in enumerate(basis)}
    mu = Matrix(f, n, n * n)
    for i, u in enumerate(basis):
        for j, v in enumerate(basis):
            for w, c in pres._nf_word(u + v).items():
                mu.data[index[w]][i * n + j] = c
    unit = [f.zero] * n
    for w, c in pres._nf_word(()).items():
        unit[index[w]] = c
    return mu, unit


def coordinates(pres: Presentation, p: NcPoly, basis: list[Word]) -> list:
    """Coordinates of the normal form of p against a finite normal-word basis."""
    f = pres.field
    index = {w: i for i, w in enumerate(basis)}
    out = [f.zero] * len(basis)
    for w, c in pres.reduce(p).terms.items():
        out[index[w]] += c
    return out


def tensor_power(pres: Presentation, n: int, relations: Sequence[NcPoly] | None = None) -> Presentation:
    """Presentation of the n-fold tensor power: disjoint copies that commute.

    Copy ``i`` uses generator indices ``i*m .. i*m+m-1``; a letter from a later
    copy is larger, so normal words list copy 0 first, then copy 1, and so on.
    """
    m = pres.ngens
    f = pres.field
    base = list(relations) if relations is not None else (pres.reducers() if pres.gb else pres.relations)
    gens = [GenSymbol(f"{g.name}@{i}", g.beta, g.alpha, g.layer) for i in range(n) for g in pres.generators]
    rels = [r.shift(i * m) for i in range(n) for r in base]
    for i in range(n):
        for j in range(i + 1, n):
            for a in range(m):
                for b in range(m):
                    x, y = i * m + a, j * m + b
                    rels.append(NcPoly(f, {(y, x): 1, (x, y): -1}))
    return Presentation(f, gens, rels, max_reducers=pres.max_reducers)


def tensor_element(parts: Sequence[NcPoly], m: int) -> NcPoly:
    """p_0 (x) p_1 (x) ... as an element of the tensor-power presentation."""
    out = NcPoly.constant(parts[0].field, 1)
    for i, p in enumerate(parts):
        out = out * p.shift(i * m)
    return out


# module-level wrappers
def complete(pres: Presentation, degree: int) -> Presentation:
    return pres.complete(degree)


def normal_form(pres: Presentation, f: NcPoly) -> NcPoly:
    return pres.normal_form(f)


def hilbert_function(pres: Presentation, degree: int) -> list[int]:
    return pres.hilbert_function(degree)


def finite_dim_certificate(pres: Presentation, degree: int) -> FiniteDimCertificate:
    return pres.finite_dim_certificate(degree)


def free_presentation(field: FieldSpec, names: Sequence[str], relations: Callable | Sequence = ()) -> Presentation:
    """Convenience: ``free_presentation(QQ, "gh", lambda g, h: [h*h, g*h + h*g])``."""
    gens = [GenSymbol(n) for n in names]
    xs = [NcPoly.gen(field, i) for i in range(len(gens))]
    rels = relations(*xs) if callable(relations) else list(relations)
    return Presentation(field, gens, list(rels))
