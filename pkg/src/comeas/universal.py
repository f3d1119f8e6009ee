"""Universal comeasuring algebras, universal coacting bialgebras and Hopf envelopes.

The universal comeasuring algebra from A to B relative to V is presented as the
free algebra on the coordinate functionals p_{beta alpha} of the generic map of V,
modulo

    sum_g a^{g..}_{w; alpha..} p_{beta1 g1} ... p_{betat gt}
        - sum_m b^{beta..}_{w; m..} p_{m1 alpha1} ... p_{ms alphas}

for every operation w and all index tuples; an empty product is 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exact import (DimensionMismatch, FieldMismatch, FieldSpec, Matrix, NoSolution, kernel_basis,
                    rref, solve_linear)
from .maps import CoactionShapeMap, OperatorSubspace, cosupp, generic_map_of_subspace
from .ncpoly import DegreeBoundExceeded, GenSymbol, NcPoly, Presentation, tensor_element, tensor_power
from .omega import DELTA, EPS, MU, UNIT, OmegaAlgebra, SignatureMismatch, digits
from .report import Report


class MissingAlgebraOnQ(ValueError):
    pass


class NotAComeasuring(ValueError):
    def __init__(self, report: Report):
        super().__init__(f"not a comeasuring: {report.failures}")
        self.report = report


class NotInV(ValueError):
    pass


class NotASubalgebra(ValueError):
    pass


# -- coefficient rings ---------------------------------------------------------

class VectorAlgebra:
    """A finite-dimensional unital algebra Q acting on coordinate vectors."""

    def __init__(self, q: OmegaAlgebra):
        if not q.has(MU, UNIT):
            raise MissingAlgebraOnQ("Q needs mu and u structure constants")
        self.q = q
        self.f = q.field
        self._pairs = {}
        mu = q.op(MU)
        n = q.dim
        for k, c, x in mu.nonzero():
            self._pairs.setdefault(divmod(c, n), []).append((k, x))

    def one(self):
        return self.q.unit_vector()

    def zero(self):
        return [self.f.zero] * self.q.dim

    def add(self, x, y):
        return [a + b for a, b in zip(x, y)]

    def scale(self, x, c):
        return [c * a for a in x]

    def mul(self, x, y):
        out = [self.f.zero] * self.q.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                for k, c in self._pairs.get((i, j), ()):
                    out[k] += c * a * b
        return out

    def is_zero(self, x):
        return not any(x)

    def const(self, c):
        return self.scale(self.one(), c)


class FreeAlgebra:
    """NcPoly arithmetic, optionally reduced modulo a completed presentation."""

    def __init__(self, field: FieldSpec, pres: Presentation | None = None):
        self.f = field
        self.pres = pres

    def one(self):
        return NcPoly.constant(self.f, 1)

    def zero(self):
        return NcPoly(self.f)

    def add(self, x, y):
        return x + y

    def scale(self, x, c):
        return x.scale(c)

    def mul(self, x, y):
        p = x * y
        return self.pres.reduce(p) if self.pres is not None else p

    def is_zero(self, x):
        if self.pres is not None:
            return not self.pres.reduce(x)
        return not x

    def const(self, c):
        return NcPoly.constant(self.f, c)


def comeasuring_defects(a: OmegaAlgebra, b: OmegaAlgebra, q, ring):
    """Yield (op, beta-tuple, alpha-tuple, LHS - RHS) over all index tuples.

    ``q[beta][alpha]`` are elements of ``ring``; zero defects are skipped.
    """
    if a.signature != b.signature:
        raise SignatureMismatch("A and B have different signatures")
    if a.field != b.field:
        raise FieldMismatch("A and B over different fields")
    da, db = a.dim, b.dim
    cache: dict = {}

    def prod_q(pairs):
        v = cache.get(pairs)
        if v is None:
            v = ring.one()
            for beta, alpha in pairs:
                v = ring.mul(v, q[beta][alpha])
            cache[pairs] = v
        return v

    for op in a.signature:
        s, t = op.source, op.target
        A, B = a.op(op.name), b.op(op.name)
        a_cols: dict = {}
        for r, c, x in A.nonzero():
            a_cols.setdefault(c, []).append((digits(r, da, t), x))
        b_rows: dict = {}
        for r, c, x in B.nonzero():
            b_rows.setdefault(r, []).append((digits(c, db, s), x))
        for ai in range(da ** s):
            alpha = digits(ai, da, s)
            for bi in range(db ** t):
                beta = digits(bi, db, t)
                acc = ring.zero()
                for gamma, x in a_cols.get(ai, ()):
                    acc = ring.add(acc, ring.scale(prod_q(tuple(zip(beta, gamma))), x))
                for mu, x in b_rows.get(bi, ()):
                    acc = ring.add(acc, ring.scale(prod_q(tuple(zip(mu, alpha))), -x))
                if not ring.is_zero(acc):
                    yield op.name, beta, alpha, acc


# -- comeasurings with finite-dimensional Q -------------------------------------

@dataclass(frozen=True)
class ComeasuringInstance:
    a: OmegaAlgebra
    b: OmegaAlgebra
    q: OmegaAlgebra
    rho: CoactionShapeMap

    def __post_init__(self):
        if (self.rho.a_dim, self.rho.b_dim, self.rho.qdim) != (self.a.dim, self.b.dim, self.q.dim):
            raise DimensionMismatch("rho does not match the dimensions of A, B, Q")
        if not (self.a.field == self.b.field == self.q.field == self.rho.field):
            raise FieldMismatch("A, B, Q and rho must share a field")

    def elements(self):
        return self.rho.coords


def power_map(rho: CoactionShapeMap, n: int, q: OmegaAlgebra) -> CoactionShapeMap:
    """rho_n on A^{(x)n}: coordinates are products of Q-coordinates, rho_0(1) = 1_Q."""
    ring = VectorAlgebra(q)
    if rho.qdim != q.dim:
        raise DimensionMismatch("rho.qdim differs from dim Q")
    da, db = rho.a_dim, rho.b_dim
    rows = []
    for bi in range(db ** n):
        beta = digits(bi, db, n)
        for ai in range(da ** n):
            alpha = digits(ai, da, n)
            v = ring.one()
            for b_, a_ in zip(beta, alpha):
                v = ring.mul(v, rho.q(b_, a_))
            rows.append(v)
    return CoactionShapeMap(rho.field, da ** n, db ** n, q.dim, Matrix(rho.field, len(rows), q.dim, rows))


def verify_comeasuring(inst: ComeasuringInstance) -> Report:
    rep = Report()
    ring = VectorAlgebra(inst.q)
    for name, beta, alpha, _ in comeasuring_defects(inst.a, inst.b, inst.elements(), ring):
        rep.fail(name, f"fails at target {beta}, source {alpha}")
    return rep


def verify_coaction(inst: ComeasuringInstance) -> Report:
    """Counital right comodule axioms plus the comeasuring condition."""
    q = inst.q
    if not q.has(MU, UNIT, DELTA, EPS):
        raise MissingAlgebraOnQ("a coaction needs a bialgebra Q (mu, u, delta, eps)")
    if inst.a.dim != inst.b.dim:
        raise DimensionMismatch("a coaction maps A to A (x) Q")
    f = q.field
    n = inst.a.dim
    rep = Report()
    delta, eps = q.op(DELTA), q.op(EPS)
    qd = q.dim
    for beta in range(n):
        for alpha in range(n):
            lhs = [f.zero] * (qd * qd)
            for g in range(n):
                x, y = inst.rho.q(beta, g), inst.rho.q(g, alpha)
                for i, u in enumerate(x):
                    if u:
                        for j, w in enumerate(y):
                            if w:
                                lhs[i * qd + j] += u * w
            qv = inst.rho.q(beta, alpha)
            rhs = (delta @ Matrix.column(f, qv)).col(0)
            if lhs != rhs:
                rep.fail("coassociativity", f"fails at ({beta}, {alpha})")
            e = (eps @ Matrix.column(f, qv))[0, 0]
            if e != (1 if beta == alpha else 0):
                rep.fail("counit", f"fails at ({beta}, {alpha})")
    return rep.merge(verify_comeasuring(inst))


# -- universal comeasuring algebra ---------------------------------------------

@dataclass
class UniversalPresentation:
    """T(W_0)/I together with how every p_{beta alpha} reads in the generators."""

    pres: Presentation
    gen_index: dict  # (beta, alpha) -> NcPoly of degree <= 1
    vbasis: OperatorSubspace
    a: OmegaAlgebra
    b: OmegaAlgebra
    eliminated: list = field(default_factory=list)  # (name, NcPoly) substitutions applied

    @property
    def field(self) -> FieldSpec:
        return self.pres.field

    def p(self, beta: int, alpha: int) -> NcPoly:
        return self.gen_index[(beta, alpha)]

    def grid(self) -> list[list[NcPoly]]:
        return [[self.p(b_, a_) for a_ in range(self.a.dim)] for b_ in range(self.b.dim)]

    def to_json(self) -> dict:
        d = self.pres.to_json()
        names = self.pres.names
        d["gen_index"] = [{"beta": b_, "alpha": a_, "value": p.to_json(names)}
                          for (b_, a_), p in sorted(self.gen_index.items())]
        return d

    def listing(self) -> str:
        lines = [self.pres.listing()]
        if self.eliminated:
            lines.append("eliminated: " + ", ".join(f"{n} = {self.pres.format(p)}" for n, p in self.eliminated))
        return "\n".join(lines)


def _gen_name(beta: int, alpha: int, big: bool) -> str:
    return f"x{beta + 1}_{alpha + 1}" if big else f"x{beta + 1}{alpha + 1}"


def _eliminate_linear(f: FieldSpec, gens: list[GenSymbol], rels: list[NcPoly], gen_index: dict,
                      eliminated: list) -> tuple[list[GenSymbol], list[NcPoly], dict]:
    """Use relations of degree <= 1 as substitutions, largest generator first."""
    while True:
        n = len(gens)
        linear = [r for r in rels if r.degree <= 1]
        if not linear:
            return gens, rels, gen_index
        # columns: generators from largest to smallest, then the constant
        cols = [(i,) for i in reversed(range(n))] + [()]
        m = Matrix(f, len(linear), n + 1, [[r.terms.get(w, f.zero) for w in cols] for r in linear])
        red, piv = rref(m)
        if piv and piv[-1] == n:
            # 1 lies in the ideal: the algebra is zero
            return gens, [NcPoly.constant(f, 1)], gen_index
        images = [NcPoly.gen(f, i) for i in range(n)]
        removed = set()
        for row, pc in enumerate(piv):
            g = cols[pc][0]
            rhs = NcPoly(f, {cols[j]: -red[row, j] for j in range(n + 1) if j != pc})
            images[g] = rhs
            removed.add(g)
        keep = [i for i in range(n) if i not in removed]
        renum = {old: new for new, old in enumerate(keep)}
        # substitutions are in kept generators only (RREF), so reindex them
        relabel = [NcPoly.gen(f, renum[i]) if i in renum else None for i in range(n)]
        final = []
        for i in range(n):
            final.append(relabel[i] if i in renum else images[i].substitute(
                [relabel[j] if j in renum else NcPoly(f) for j in range(n)]))
        eliminated[:] = [(nm, p.substitute(final)) for nm, p in eliminated]
        for g in sorted(removed):
            eliminated.append((gens[g].name, final[g]))
        new_rels = []
        seen = set()
        for r in rels:
            if r.degree <= 1:
                continue
            s = r.substitute(final)
            if s:
                s = s.monic()
                if s not in seen:
                    seen.add(s)
                    new_rels.append(s)
        gen_index = {k: p.substitute(final) for k, p in gen_index.items()}
        gens = [gens[i] for i in keep]
        rels = new_rels
        if not removed:
            return gens, rels, gen_index


def build_universal_comeasuring(a: OmegaAlgebra, b: OmegaAlgebra, v: OperatorSubspace | None = None,
                                eliminate: bool = True) -> UniversalPresentation:
    """Presentation of the V-universal comeasuring algebra from A to B."""
    if a.field != b.field:
        raise FieldMismatch("A and B over different fields")
    if a.signature != b.signature:
        raise SignatureMismatch("A and B have different signatures")
    f = a.field
    if v is None:
        v = OperatorSubspace.full(f, a.dim, b.dim)
    if (v.a_dim, v.b_dim) != (a.dim, b.dim) or v.field != f:
        raise DimensionMismatch("V is not a subspace of Hom(A, B)")
    rho0 = generic_map_of_subspace(v)
    # columns of P^T are the functionals p_{beta alpha}; pivots pick a basis of W_0
    pt = rho0.rows.transpose()
    red, piv = rref(pt)
    big = max(a.dim, b.dim) >= 10
    gens = []
    for c in piv:
        beta, alpha = divmod(c, a.dim)
        gens.append(GenSymbol(_gen_name(beta, alpha, big), beta, alpha))
    gen_index = {}
    for c in range(pt.cols):
        beta, alpha = divmod(c, a.dim)
        gen_index[(beta, alpha)] = NcPoly(f, {(i,): red[i, c] for i in range(len(piv))})
    grid = [[gen_index[(b_, a_)] for a_ in range(a.dim)] for b_ in range(b.dim)]
    rels = []
    seen = set()
    for _, _, _, d in comeasuring_defects(a, b, grid, FreeAlgebra(f)):
        d = d.monic()
        if d not in seen:
            seen.add(d)
            rels.append(d)
    eliminated: list = []
    if eliminate:
        gens, rels, gen_index = _eliminate_linear(f, gens, rels, gen_index, eliminated)
    pres = Presentation(f, gens, rels)
    return UniversalPresentation(pres, gen_index, v, a, b, eliminated)


@dataclass
class UniversalMap:
    """rho_{A,B,V}(a_alpha) = sum_beta b_beta (x) p_{beta alpha} with p in the presentation."""

    up: UniversalPresentation

    @property
    def q(self) -> list[list[NcPoly]]:
        return self.up.grid()

    def as_shape_map(self) -> CoactionShapeMap:
        """Coordinates against (1, g_1, ..., g_n) in the degree <= 1 part."""
        up = self.up
        f = up.field
        n = up.pres.ngens
        words = [()] + [(i,) for i in range(n)]
        coords = [[[up.p(b_, a_).terms.get(w, f.zero) for w in words] for a_ in range(up.a.dim)]
                  for b_ in range(up.b.dim)]
        return CoactionShapeMap.from_coords(f, coords, n + 1)


def universal_map(up: UniversalPresentation) -> UniversalMap:
    return UniversalMap(up)


def verify_universal_map(up: UniversalPresentation, degree: int | None = None) -> Report:
    """The comeasuring identities for rho_{A,B,V}, checked modulo the ideal."""
    pres = up.pres
    deg = degree if degree is not None else max(2, max((r.degree for r in pres.relations), default=0))
    pres.complete(deg)
    rep = Report()
    for name, beta, alpha, d in comeasuring_defects(up.a, up.b, up.grid(), FreeAlgebra(up.field)):
        if d.degree > pres.complete_below:
            rep.fail(name, f"defect at {beta}, {alpha} above certified degree")
        elif pres.normal_form(d):
            rep.fail(name, f"defect at {beta}, {alpha} does not reduce to zero")
    for r in pres.relations:
        if pres.normal_form(r):
            rep.fail("relations", f"relation {pres.format(r)} does not reduce to zero")
    rep.details["certified_degree"] = pres.complete_below
    return rep


@dataclass
class UniversalHom:
    images: dict  # generator name -> coordinate vector in Q
    unique: bool
    report: Report


def universal_hom(up: UniversalPresentation, inst: ComeasuringInstance) -> UniversalHom:
    """The algebra map phi with (id (x) phi) rho_{A,B,V} = rho; raises NotInV."""
    rep = verify_comeasuring(inst)
    if not rep:
        raise NotAComeasuring(rep)
    if not up.vbasis.contains(cosupp(inst.rho)):
        raise NotInV("cosupport of rho is not contained in V")
    f = up.field
    ring = VectorAlgebra(inst.q)
    n = up.pres.ngens
    keys = sorted(up.gen_index)
    m = Matrix(f, len(keys), n, [[up.gen_index[k].terms.get((i,), f.zero) for i in range(n)] for k in keys])
    rhs = Matrix(f, len(keys), inst.q.dim,
                 [ring.add(inst.rho.q(*k), ring.const(-up.gen_index[k].constant_term())) for k in keys])
    try:
        phi = solve_linear(m, rhs) if n else None
    except NoSolution:
        raise NotInV("no linear map on the generators reproduces rho") from None
    if n == 0 and any(any(r) for r in rhs.data):
        raise NotInV("rho is not the constant map forced by the presentation")
    unique = kernel_basis(m).cols == 0
    images = [phi.row(i) for i in range(n)] if n else []
    out = Report()
    for r in up.pres.relations:
        val = ring.zero()
        for w, c in r.terms.items():
            t = ring.const(c)
            for i in w:
                t = ring.mul(t, images[i])
            val = ring.add(val, t)
        if not ring.is_zero(val):
            out.fail("relations", f"{up.pres.format(r)} does not map to zero")
    for k in keys:
        p = up.gen_index[k]
        val = ring.const(p.constant_term())
        for (i,), c in ((w, c) for w, c in p.terms.items() if w):
            val = ring.add(val, ring.scale(images[i], c))
        if val != inst.rho.q(*k):
            out.fail("factorization", f"coefficient {k} differs")
    return UniversalHom({g.name: images[i] for i, g in enumerate(up.pres.generators)}, unique, out)


# -- universal coacting bialgebra ----------------------------------------------

def is_unital_subalgebra(v: OperatorSubspace) -> bool:
    f = v.field
    if v.a_dim != v.b_dim:
        return False
    if not v.contains(Matrix.identity(f, v.a_dim)):
        return False
    return all(v.contains(x @ y) for x in v.basis for y in v.basis)


@dataclass
class BialgebraPresentation:
    upres: UniversalPresentation
    delta: dict  # generator index -> NcPoly in the tensor square (copy 0 (x) copy 1)
    counit: dict  # generator index -> scalar
    layers: int = 0
    layer_index: list | None = None  # per layer: (beta, alpha) -> NcPoly
    certificate: Report = field(default_factory=Report)

    @property
    def pres(self) -> Presentation:
        return self.upres.pres

    @property
    def field(self) -> FieldSpec:
        return self.upres.field

    def g(self, k: int, beta: int, alpha: int) -> NcPoly:
        if self.layer_index is None:
            if k:
                raise IndexError("no antipode layers")
            return self.upres.p(beta, alpha)
        return self.layer_index[k][(beta, alpha)]

    def delta_of(self, p: NcPoly) -> NcPoly:
        """Delta of an arbitrary element, as an element of the tensor square."""
        return p.substitute([self.delta[i] for i in range(self.pres.ngens)])

    def counit_of(self, p: NcPoly):
        f = self.field
        return p.substitute([NcPoly.constant(f, self.counit[i]) for i in range(self.pres.ngens)]).constant_term()

    def to_json(self) -> dict:
        d = self.upres.to_json()
        names = self.pres.names
        n = self.pres.ngens
        sq = [f"{x}@0" for x in names] + [f"{x}@1" for x in names]
        d["delta"] = {names[i]: self.delta[i].to_json(sq) for i in range(n)}
        d["counit"] = {names[i]: self.field.to_str(self.counit[i]) for i in range(n)}
        d["layers"] = self.layers
        d["certificate"] = self.certificate.to_json()
        d["certificate"]["certified_degree"] = self.certificate.details.get("certified_degree")
        return d

    def listing(self) -> str:
        p = self.pres
        n = p.ngens
        sq = [f"{x}(1)" for x in p.names] + [f"{x}(2)" for x in p.names]
        lines = [self.upres.listing()]
        for i in range(n):
            lines.append(f"  Delta({p.names[i]}) = {self.delta[i].format(sq)}")
            lines.append(f"  eps({p.names[i]}) = {self.counit[i]}")
        return "\n".join(lines)


def _matrix_delta(gi, n_idx: int, beta: int, alpha: int, m: int, cop: bool) -> NcPoly:
    """sum_g p_{beta g} (x) p_{g alpha} (or its flip) in the tensor square."""
    out = None
    for g in range(n_idx):
        if cop:
            t = tensor_element([gi(g, alpha), gi(beta, g)], m)
        else:
            t = tensor_element([gi(beta, g), gi(g, alpha)], m)
        out = t if out is None else out + t
    return out


def build_universal_bialgebra(a: OmegaAlgebra, v: OperatorSubspace | None = None, degree: int = 4) -> BialgebraPresentation:
    """B(A, V) with matrix-style Delta and eps, certified up to ``degree``."""
    f = a.field
    if v is None:
        v = OperatorSubspace.full(f, a.dim, a.dim)
    if not is_unital_subalgebra(v):
        raise NotASubalgebra("V must contain the identity and be closed under composition")
    up = build_universal_comeasuring(a, a, v)
    n = up.pres.ngens
    delta = {}
    counit = {}
    for i, g in enumerate(up.pres.generators):
        delta[i] = _matrix_delta(up.p, a.dim, g.beta, g.alpha, n, cop=False)
        counit[i] = f.one if g.beta == g.alpha else f.zero
    bp = BialgebraPresentation(up, delta, counit)
    bp.certificate = certify_bialgebra(bp, degree)
    return bp


def certify_bialgebra(bp: BialgebraPresentation, degree: int) -> Report:
    """Delta/eps well defined, coassociative and counital, up to ``degree``."""
    pres = bp.pres
    f = bp.field
    n = pres.ngens
    dim = bp.upres.a.dim
    rep = Report()
    pres.complete(max(degree, max((r.degree for r in pres.relations), default=0)))
    sq = tensor_power(pres, 2)
    sq.complete(degree)
    uncertified = 0
    for r in pres.relations:
        d = bp.delta_of(r)
        if d.degree > degree:
            uncertified += 1
            continue
        if sq.normal_form(d):
            rep.fail("delta-well-defined", f"Delta({pres.format(r)}) is not zero")
        if bp.counit_of(r):
            rep.fail("counit-well-defined", f"eps({pres.format(r)}) is not zero")
    # Delta and eps on every p_{beta alpha}, not only on the pivot generators
    for layer in range(bp.layers + 1):
        cop = layer % 2 == 1
        gi = (lambda b_, a_, k=layer: bp.g(k, b_, a_))
        for beta in range(dim):
            for alpha in range(dim):
                want = _matrix_delta(gi, dim, beta, alpha, n, cop)
                got = bp.delta_of(gi(beta, alpha))
                if max(want.degree, got.degree) <= degree and sq.normal_form(got - want):
                    rep.fail("delta-forced", f"layer {layer} ({beta}, {alpha})")
                if bp.counit_of(gi(beta, alpha)) != (1 if beta == alpha else 0):
                    rep.fail("counit-forced", f"layer {layer} ({beta}, {alpha})")
    # coassociativity and counit axioms on generators
    if degree >= 3:
        cube = tensor_power(pres, 3)
        cube.complete(max(3, max((r.degree for r in cube.relations), default=0)))
        left_imgs = [bp.delta[i] for i in range(n)] + [NcPoly.gen(f, 2 * n + i) for i in range(n)]
        right_imgs = [NcPoly.gen(f, i) for i in range(n)] + [bp.delta[i].shift(n) for i in range(n)]
        for i in range(n):
            lhs = bp.delta[i].substitute(left_imgs)
            rhs = bp.delta[i].substitute(right_imgs)
            if cube.normal_form(lhs - rhs):
                rep.fail("coassociativity", pres.names[i])
    else:
        uncertified += n
    eps_imgs = [NcPoly.constant(f, bp.counit[i]) for i in range(n)]
    ids = [NcPoly.gen(f, i) for i in range(n)]
    for i in range(n):
        x = NcPoly.gen(f, i)
        if pres.reduce(bp.delta[i].substitute(eps_imgs + ids) - x):
            rep.fail("left-counit", pres.names[i])
        if pres.reduce(bp.delta[i].substitute(ids + eps_imgs) - x):
            rep.fail("right-counit", pres.names[i])
    rep.details["certified_degree"] = degree
    rep.details["uncertified_relations"] = uncertified
    return rep


# -- Hopf envelope -------------------------------------------------------------

def hopf_envelope_presentation(bp: BialgebraPresentation, layers: int = 1, degree: int = 4) -> BialgebraPresentation:
    """Antipode layers g^(0..K): layer k is the image of S^k.

    Odd layers carry the opposite multiplication and the co-opposite
    comultiplication; consecutive layers are tied by m(S (x) id)Delta = u eps and
    m(id (x) S)Delta = u eps, expanded against the layer's comultiplication.
    """
    if layers < 1:
        raise ValueError("need at least one antipode layer")
    if bp.layers:
        raise ValueError("already a Hopf envelope")
    up = bp.upres
    base = up.pres
    f = base.field
    n = base.ngens
    dim = up.a.dim
    gens = list(base.generators)
    for k in range(1, layers + 1):
        gens += [GenSymbol(f"{g.name}_s{k}", g.beta, g.alpha, k) for g in base.generators]
    layer_index = [{key: p.shift(k * n) for key, p in up.gen_index.items()} for k in range(layers + 1)]

    def g(k, beta, alpha):
        return layer_index[k][(beta, alpha)]

    rels = []
    for k in range(layers + 1):
        for r in base.relations:
            rels.append((r.reversed() if k % 2 else r).shift(k * n))
    one = NcPoly.constant(f, 1)
    for k in range(layers):
        for beta in range(dim):
            for alpha in range(dim):
                d = one if beta == alpha else NcPoly(f)
                if k % 2 == 0:
                    left = sum((g(k + 1, beta, c) * g(k, c, alpha) for c in range(dim)), NcPoly(f))
                    right = sum((g(k, beta, c) * g(k + 1, c, alpha) for c in range(dim)), NcPoly(f))
                else:
                    left = sum((g(k + 1, c, alpha) * g(k, beta, c) for c in range(dim)), NcPoly(f))
                    right = sum((g(k, c, alpha) * g(k + 1, beta, c) for c in range(dim)), NcPoly(f))
                for r in (left - d, right - d):
                    if r:
                        rels.append(r.monic())
    uniq = []
    seen = set()
    for r in rels:
        if r and r not in seen:
            seen.add(r)
            uniq.append(r)
    pres = Presentation(f, gens, uniq)
    m = len(gens)
    env_up = UniversalPresentation(pres, layer_index[0], up.vbasis, up.a, up.b, list(up.eliminated))
    delta, counit = {}, {}
    for k in range(layers + 1):
        for i, gs in enumerate(base.generators):
            delta[k * n + i] = _matrix_delta(lambda b_, a_: g(k, b_, a_), dim, gs.beta, gs.alpha, m, cop=k % 2 == 1)
            counit[k * n + i] = f.one if gs.beta == gs.alpha else f.zero
    env = BialgebraPresentation(env_up, delta, counit, layers, layer_index)
    env.certificate = certify_bialgebra(env, degree)
    return env


def antipode_defects(env: BialgebraPresentation, degree: int | None = None) -> Report:
    """m(S (x) id)Delta(x) - eps(x)1 and m(id (x) S)Delta(x) - eps(x)1 on layer-0 generators."""
    pres = env.pres
    if degree is not None:
        pres.complete(degree)
    f = env.field
    dim = env.upres.a.dim
    rep = Report()
    for k in range(env.layers):
        for gs in pres.generators[: env.pres.ngens // (env.layers + 1)]:
            beta, alpha = gs.beta, gs.alpha
            e = NcPoly.constant(f, 1 if beta == alpha else 0)
            if k % 2 == 0:
                left = sum((env.g(k + 1, beta, c) * env.g(k, c, alpha) for c in range(dim)), NcPoly(f))
                right = sum((env.g(k, beta, c) * env.g(k + 1, c, alpha) for c in range(dim)), NcPoly(f))
            else:
                left = sum((env.g(k + 1, c, alpha) * env.g(k, beta, c) for c in range(dim)), NcPoly(f))
                right = sum((env.g(k, c, alpha) * env.g(k + 1, beta, c) for c in range(dim)), NcPoly(f))
            for tag, x in (("S-left", left - e), ("S-right", right - e)):
                if pres.normal_form(x):
                    rep.fail(tag, f"layer {k}, generator {gs.name}")
    return rep


def degree_one_report(up: UniversalPresentation, degree: int = 2) -> dict:
    """Independent degree-1 normal forms among the p_{beta alpha}, against dim V."""
    pres = up.pres
    pres.complete(max(degree, max((r.degree for r in pres.relations), default=0)))
    f = up.field
    n = pres.ngens
    vecs = []
    for p in up.gen_index.values():
        nf = pres.normal_form(p)
        vecs.append([nf.terms.get(()) or f.zero] + [nf.terms.get((i,)) or f.zero for i in range(n)])
    from .exact import rank as _rank
    r = _rank(Matrix.from_rows(f, vecs, n + 1))
    return {"independent": r, "dim_v": up.vbasis.dim}
