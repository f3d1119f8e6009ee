"""Measurings, the measuring/comeasuring bijection, finite duals and grouplikes.

Also the desk-scale checks of the duality statements: B(A*, V) against the
co-opposite of B(A, V#), and the cyclic-grading family on a nilpotent span
algebra whose cosupports grow without bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .exact import (DimensionMismatch, FieldMismatch, FieldSpec, Matrix, NoSolution, charpoly, inverse,
                    kernel_basis, kron_power, rank, roots_in_field, solve_linear)
from .maps import ActionShapeMap, CoactionShapeMap, OperatorSubspace, cosupp
from .ncpoly import NcPoly, tensor_power
from .omega import (BIALGEBRA, COALGEBRA, DELTA, EPS, MU, UNIT, OmegaAlgebra, OmegaMorphismCandidate,
                    dual_omega_algebra, is_morphism, standard_algebra)
from .report import Report
from .universal import (BialgebraPresentation, ComeasuringInstance, NotAComeasuring, build_universal_bialgebra,
                        verify_coaction, verify_comeasuring)


class NotAMeasuring(ValueError):
    def __init__(self, report: Report):
        super().__init__(f"not a measuring: {report.failures}")
        self.report = report


class NotFiniteDimensionalCertificate(ValueError):
    pass


class TooLarge(ValueError):
    pass


class BadField(ValueError):
    pass


# -- measurings ------------------------------------------------------------------

@dataclass(frozen=True)
class MeasuringInstance:
    p: OmegaAlgebra
    a: OmegaAlgebra
    b: OmegaAlgebra
    psi: ActionShapeMap

    def __post_init__(self):
        if not self.p.has(DELTA, EPS):
            raise ValueError("P must carry a coalgebra structure")
        if (self.psi.pdim, self.psi.a_dim, self.psi.b_dim) != (self.p.dim, self.a.dim, self.b.dim):
            raise DimensionMismatch("psi does not match the dimensions of P, A, B")
        if not (self.p.field == self.a.field == self.b.field == self.psi.field):
            raise FieldMismatch("P, A, B and psi must share a field")


def iterated_delta(p: OmegaAlgebra, n: int) -> Matrix:
    """Delta^(n): P -> P^{(x)n}; n = 0 gives eps, n = 1 the identity."""
    f = p.field
    if n == 0:
        return p.op(EPS)
    d = Matrix.identity(f, p.dim)
    delta = p.op(DELTA)
    for k in range(1, n):
        d = delta.kron(Matrix.identity(f, p.dim ** (k - 1))) @ d
    return d


def psi_power(inst: MeasuringInstance, n: int) -> list[Matrix]:
    """psi_n(p_k (x) -) as a b^n x a^n matrix, for every k."""
    f = inst.p.field
    d = iterated_delta(inst.p, n)
    out = []
    pd = inst.p.dim
    for k in range(pd):
        acc = Matrix(f, inst.b.dim ** n, inst.a.dim ** n)
        for r in range(d.rows):
            c = d[r, k]
            if not c:
                continue
            idx = [(r // pd ** (n - 1 - i)) % pd for i in range(n)]
            m = Matrix.identity(f, 1)
            for i in idx:
                m = m.kron(inst.psi.ops[i])
            acc = acc + m.scale(c)
        out.append(acc)
    return out


def verify_measuring(inst: MeasuringInstance) -> Report:
    if inst.a.signature != inst.b.signature:
        raise DimensionMismatch("A and B have different signatures")
    rep = Report()
    cache: dict = {}
    for op in inst.a.signature:
        s, t = op.source, op.target
        for n in (s, t):
            if n not in cache:
                cache[n] = psi_power(inst, n)
        A, B = inst.a.op(op.name), inst.b.op(op.name)
        for k in range(inst.p.dim):
            if cache[t][k] @ A != B @ cache[s][k]:
                rep.fail(op.name, f"fails for coalgebra basis element {inst.p.basis[k]}")
    return rep


def verify_action(inst: MeasuringInstance) -> Report:
    """Unital module axioms for a bialgebra P, plus the measuring condition."""
    p = inst.p
    if not p.has(MU, UNIT, DELTA, EPS):
        raise ValueError("an action needs a bialgebra P")
    if inst.a.dim != inst.b.dim:
        raise DimensionMismatch("an action maps P (x) A to A")
    f = p.field
    ops = inst.psi.ops
    rep = Report()
    mu, u = p.op(MU), p.op(UNIT)
    n = p.dim

    def combo(vec):
        acc = Matrix(f, inst.a.dim, inst.a.dim)
        for m, c in enumerate(vec):
            if c:
                acc = acc + ops[m].scale(c)
        return acc

    for g in range(n):
        for h in range(n):
            if combo(mu.col(g * n + h)) != ops[g] @ ops[h]:
                rep.fail("associativity", f"fails for ({p.basis[g]}, {p.basis[h]})")
    if combo(u.col(0)) != Matrix.identity(f, inst.a.dim):
        rep.fail("unit", "1_P does not act as the identity")
    return rep.merge(verify_measuring(inst))


def meas_to_comeas(inst: MeasuringInstance) -> ComeasuringInstance:
    """rho(a_alpha) = sum_{beta, k} psi_k[beta, alpha] b_beta (x) p_k*, into Q = P*."""
    rep = verify_measuring(inst)
    if not rep:
        raise NotAMeasuring(rep)
    q = dual_omega_algebra(inst.p.restrict(DELTA, EPS))
    coords = [[[inst.psi.ops[k][b, a] for k in range(inst.p.dim)] for a in range(inst.a.dim)]
              for b in range(inst.b.dim)]
    rho = CoactionShapeMap.from_coords(inst.p.field, coords, inst.p.dim)
    return ComeasuringInstance(inst.a, inst.b, q, rho)


def comeas_to_meas(inst: ComeasuringInstance) -> MeasuringInstance:
    """The inverse bijection: P = Q* with the dual coalgebra structure."""
    rep = verify_comeasuring(inst)
    if not rep:
        raise NotAComeasuring(rep)
    p = dual_omega_algebra(inst.q.restrict(MU, UNIT))
    coords = inst.rho.coords
    psi = ActionShapeMap.from_coords(inst.q.field, [[[coords[b][a][k] for a in range(inst.a.dim)]
                                                       for k in range(inst.q.dim)] for b in range(inst.b.dim)])
    return MeasuringInstance(p, inst.a, inst.b, psi)


# -- bialgebra axioms on structure constants -------------------------------------

def bialgebra_axioms(q: OmegaAlgebra) -> Report:
    f = q.field
    n = q.dim
    mu, u, delta, eps = (q.op(x) for x in (MU, UNIT, DELTA, EPS))
    i1 = Matrix.identity(f, n)
    rep = Report()
    if mu @ mu.kron(i1) != mu @ i1.kron(mu):
        rep.fail("associativity", "mu(mu (x) id) != mu(id (x) mu)")
    if mu @ u.kron(i1) != i1 or mu @ i1.kron(u) != i1:
        rep.fail("unit", "u is not a two-sided unit")
    if delta.kron(i1) @ delta != i1.kron(delta) @ delta:
        rep.fail("coassociativity", "(delta (x) id)delta != (id (x) delta)delta")
    if eps.kron(i1) @ delta != i1 or i1.kron(eps) @ delta != i1:
        rep.fail("counit", "eps is not a two-sided counit")
    # Delta and eps are algebra maps
    swap = Matrix(f, n * n, n * n)
    for i in range(n):
        for j in range(n):
            swap.data[j * n + i][i * n + j] = f.one
    mu2 = mu.kron(mu) @ i1.kron(swap).kron(i1)
    if delta @ mu != mu2 @ delta.kron(delta):
        rep.fail("delta-multiplicative", "Delta(xy) != Delta(x)Delta(y)")
    if delta @ u != u.kron(u):
        rep.fail("delta-unit", "Delta(1) != 1 (x) 1")
    if eps @ mu != eps.kron(eps):
        rep.fail("eps-multiplicative", "eps(xy) != eps(x)eps(y)")
    if eps @ u != Matrix.identity(f, 1):
        rep.fail("eps-unit", "eps(1) != 1")
    return rep


# -- finite duals -----------------------------------------------------------------

@dataclass
class FiniteDualBialgebra:
    """Structure constants of B(A,V)* on the dual of the normal-word basis."""

    bp: BialgebraPresentation
    basis: list  # normal words of B(A, V)
    primal: OmegaAlgebra  # B(A, V) itself on the normal-word basis
    dual: OmegaAlgebra
    report: Report = field(default_factory=Report)

    def coordinates(self, p: NcPoly) -> list:
        pres = self.bp.pres
        nf = pres.normal_form(p)
        index = {w: i for i, w in enumerate(self.basis)}
        out = [self.bp.field.zero] * len(self.basis)
        for w, c in nf.terms.items():
            out[index[w]] += c
        return out

    def measuring(self) -> MeasuringInstance:
        """psi(f (x) a_alpha) = sum_beta b_beta f(p_{beta alpha}) on A."""
        up = self.bp.upres
        f = self.bp.field
        da = up.a.dim
        cols = {k: self.coordinates(p) for k, p in up.gen_index.items()}
        ops = []
        for i in range(len(self.basis)):
            ops.append(Matrix(f, da, da, [[cols[(b, a)][i] for a in range(da)] for b in range(da)]))
        return MeasuringInstance(self.dual, up.a, up.a, ActionShapeMap(f, len(ops), da, da, tuple(ops)))

    def to_json(self) -> dict:
        d = self.dual.to_json()
        names = self.bp.pres.names
        d["primal_basis"] = ["*".join(names[i] for i in w) or "1" for w in self.basis]
        d["report"] = self.report.to_json()
        return d


def finite_dual_bialgebra(bp: BialgebraPresentation, degree: int = 4) -> FiniteDualBialgebra:
    pres = bp.pres
    f = bp.field
    cert = pres.complete(max(degree, max((r.degree for r in pres.relations), default=0))).finite_dim_certificate(
        max(degree, pres.complete_below))
    if not cert.finite:
        raise NotFiniteDimensionalCertificate(f"no finite-dimensionality certificate at degree {degree}")
    basis = cert.basis
    n = len(basis)
    index = {w: i for i, w in enumerate(basis)}
    g = pres.ngens
    top = max((len(w) for w in basis), default=0)

    def coords(p):
        nf = pres.reduce(p)
        out = [f.zero] * n
        for w, c in nf.terms.items():
            out[index[w]] += c
        return out

    mu = Matrix(f, n, n * n)
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            v = coords(NcPoly.word(f, x + y))
            for k in range(n):
                mu.data[k][i * n + j] = v[k]
    u = Matrix.column(f, coords(NcPoly.constant(f, 1)))
    sq = tensor_power(pres, 2)
    sq.complete(max(degree, 2 * top + 1, max((r.degree for r in sq.relations), default=0)))
    delta = Matrix(f, n * n, n)
    eps = Matrix(f, 1, n)
    for k, w in enumerate(basis):
        d = sq.reduce(bp.delta_of(NcPoly.word(f, w)))
        for word, c in d.terms.items():
            left = tuple(x for x in word if x < g)
            right = tuple(x - g for x in word if x >= g)
            if word != left + tuple(x + g for x in right) or left not in index or right not in index:
                raise NotFiniteDimensionalCertificate(f"tensor-square normal word {word} is not split")
            delta.data[index[left] * n + index[right]][k] += c
        eps.data[0][k] = bp.counit_of(NcPoly.word(f, w))
    labels = tuple("*".join(pres.names[i] for i in w) or "1" for w in basis)
    primal = OmegaAlgebra(f, BIALGEBRA, n, labels, {MU: mu, UNIT: u, DELTA: delta, EPS: eps})
    rep = bialgebra_axioms(primal)
    dual = dual_omega_algebra(primal)
    dual = OmegaAlgebra(f, BIALGEBRA, n, dual.basis, {x: dual.op(x) for x in (MU, UNIT, DELTA, EPS)})
    rep.merge(bialgebra_axioms(dual), "dual-")
    return FiniteDualBialgebra(bp, basis, primal, dual, rep)


def terminal_factorization(fd: FiniteDualBialgebra, inst: MeasuringInstance) -> tuple[Matrix, bool, Report]:
    """The coalgebra map theta: P -> B(A,V)* with psi = psi_univ(theta (x) id).

    theta is solved column by column as the transpose of an algebra map
    B(A,V) -> P*, which is linear once the images of the generators are read
    off psi.  Returns (theta as dim B x dim P, unique, report).
    """
    bp = fd.bp
    pres = bp.pres
    f = bp.field
    up = bp.upres
    rep = verify_measuring(inst)
    if not rep:
        raise NotAMeasuring(rep)
    if not up.vbasis.contains(cosupp(inst.psi)):
        rep.fail("cosupport", "cosupport of psi is not inside V")
        return Matrix(f, len(fd.basis), inst.p.dim), False, rep
    basis = fd.basis
    n, m = len(basis), inst.p.dim
    pdelta = inst.p.op(DELTA)
    peps = inst.p.op(EPS)

    def var(i, k):
        return i * m + k

    rows, rhs = [], []

    def add(coeffs: dict, value):
        row = [f.zero] * (n * m)
        for j, c in coeffs.items():
            row[j] += c
        rows.append(row)
        rhs.append([value])

    one = fd.coordinates(NcPoly.constant(f, 1))
    for k in range(m):
        add({var(i, k): c for i, c in enumerate(one) if c}, peps[0, k])
    for (beta, alpha), p in up.gen_index.items():
        cv = fd.coordinates(p)
        for k in range(m):
            add({var(i, k): c for i, c in enumerate(cv) if c}, inst.psi.ops[k][beta, alpha])
    for j, gs in enumerate(pres.generators):
        y = [inst.psi.ops[k][gs.beta, gs.alpha] for k in range(m)]
        for i, w in enumerate(basis):
            cv = fd.coordinates(NcPoly.word(f, w + (j,)))
            for k in range(m):
                coeffs: dict = {}
                for ii, c in enumerate(cv):
                    if c:
                        coeffs[var(ii, k)] = coeffs.get(var(ii, k), f.zero) + c
                for r in range(m * m):
                    c = pdelta[r, k]
                    if c:
                        k1, k2 = divmod(r, m)
                        if y[k2]:
                            coeffs[var(i, k1)] = coeffs.get(var(i, k1), f.zero) - c * y[k2]
                add(coeffs, f.zero)
    a = Matrix(f, len(rows), n * m, rows)
    try:
        sol = solve_linear(a, Matrix(f, len(rhs), 1, rhs))
    except NoSolution:
        rep.fail("existence", "no coalgebra map factors psi")
        return Matrix(f, n, m), False, rep
    unique = kernel_basis(a).cols == 0
    theta = Matrix(f, n, m, [[sol[var(i, k), 0] for k in range(m)] for i in range(n)])
    # theta^T must be an algebra map B(A,V) -> P*
    mu = fd.primal.op(MU)
    for i in range(n):
        for j in range(n):
            prod_ij = mu.col(i * n + j)
            for k in range(m):
                lhs = sum((prod_ij[l] * theta[l, k] for l in range(n)), f.zero)
                rhs_v = f.zero
                for r in range(m * m):
                    c = pdelta[r, k]
                    if c:
                        k1, k2 = divmod(r, m)
                        rhs_v += c * theta[i, k1] * theta[j, k2]
                if lhs != rhs_v:
                    rep.fail("coalgebra-map", f"fails on ({fd.primal.basis[i]}, {fd.primal.basis[j]})")
    # compatibility with psi through the universal measuring
    um = fd.measuring()
    for k in range(m):
        acc = Matrix(f, inst.a.dim, inst.a.dim)
        for i in range(n):
            if theta[i, k]:
                acc = acc + um.psi.ops[i].scale(theta[i, k])
        if acc != inst.psi.ops[k]:
            rep.fail("compatibility", f"psi differs at {inst.p.basis[k]}")
    if not unique:
        rep.fail("uniqueness", "factorization is not unique")
    return theta, unique, rep


# -- grouplikes ---------------------------------------------------------------------

def grouplikes(c: OmegaAlgebra, cap: int = 8) -> list[list]:
    """All g != 0 with Delta g = g (x) g and eps g = 1, by exact case splitting.

    With M_i[j][k] = Delta^{ij}_k we need M_i g = g_i g, so each coordinate g_i
    is an eigenvalue of M_i in the field; coordinates are fixed one at a time
    and branches with an empty eigenspace intersection are pruned.
    """
    if not c.has(DELTA, EPS):
        raise ValueError("grouplikes need a coalgebra")
    n = c.dim
    if n > cap:
        raise TooLarge(f"dimension {n} exceeds the cap {cap}")
    f = c.field
    delta, eps = c.op(DELTA), c.op(EPS)
    ms = [Matrix(f, n, n, [[delta[i * n + j, k] for k in range(n)] for j in range(n)]) for i in range(n)]
    eig = [sorted(set(roots_in_field(charpoly(m), f)), key=str) for m in ms]
    found = []

    def feasible(rows, rhs):
        try:
            solve_linear(Matrix(f, len(rows), n, rows), Matrix(f, len(rhs), 1, [[x] for x in rhs]))
            return True
        except NoSolution:
            return False

    def search(i, rows, rhs, vals):
        if i == n:
            g = vals
            ok = all((ms[j] @ Matrix.column(f, g)).col(0) == [g[j] * x for x in g] for j in range(n))
            ok = ok and sum((eps[0, k] * g[k] for k in range(n)), f.zero) == 1
            if ok and any(g):
                found.append(list(g))
            return
        for lam in eig[i]:
            new_rows = rows + [[ms[i][r, k] - (lam if r == k else 0) for k in range(n)] for r in range(n)]
            new_rows.append([f.one if k == i else f.zero for k in range(n)])
            new_rhs = rhs + [f.zero] * n + [lam]
            if feasible(new_rows, new_rhs):
                search(i + 1, new_rows, new_rhs, vals + [lam])

    search(0, [], [], [])
    return sorted(found, key=lambda g: [str(x) for x in g])


def grouplike_morphisms(inst: MeasuringInstance) -> list[tuple[list, Report]]:
    """psi(g (x) -) for every grouplike g, each checked with is_morphism."""
    f = inst.p.field
    out = []
    for g in grouplikes(inst.p):
        m = Matrix(f, inst.b.dim, inst.a.dim)
        for k, c in enumerate(g):
            if c:
                m = m + inst.psi.ops[k].scale(c)
        out.append((g, is_morphism(OmegaMorphismCandidate(inst.a, inst.b, m))))
    return out


# -- Omega / Omega* dualization ----------------------------------------------------

def sharp_subspace(v: OperatorSubspace) -> OperatorSubspace:
    return OperatorSubspace.span(v.field, v.b_dim, v.a_dim, [m.transpose() for m in v.basis])


def dual_theorem_check(a: OmegaAlgebra, v: OperatorSubspace | None = None, degree: int = 4) -> Report:
    """B(A*, V) against B(A, V#)^cop: p_{beta alpha} on the left goes to p_{alpha beta}."""
    f = a.field
    astar = dual_omega_algebra(a)
    if v is None:
        v = OperatorSubspace.full(f, a.dim, a.dim)
    left = build_universal_bialgebra(astar, v, degree)
    right = build_universal_bialgebra(a, sharp_subspace(v), degree)
    rep = Report()
    rep.merge(left.certificate, "left-")
    rep.merge(right.certificate, "right-")
    for bp in (left, right):
        bp.pres.complete(max(degree, max((r.degree for r in bp.pres.relations), default=0)))

    def images(src: BialgebraPresentation, dst: BialgebraPresentation):
        return [dst.upres.p(g.alpha, g.beta) for g in src.pres.generators]

    for tag, src, dst in (("left-to-right", left, right), ("right-to-left", right, left)):
        imgs = images(src, dst)
        for r in src.pres.relations:
            x = r.substitute(imgs)
            if x.degree > dst.pres.complete_below:
                rep.fail(tag, f"image of {src.pres.format(r)} above certified degree")
            elif dst.pres.normal_form(x):
                rep.fail(tag, f"image of {src.pres.format(r)} does not vanish")
        for (beta, alpha), p in src.upres.gen_index.items():
            if dst.pres.normal_form(p.substitute(imgs) - dst.upres.p(alpha, beta)):
                rep.fail(tag + "-coordinates", f"p_{beta}{alpha} is not sent to p_{alpha}{beta}")
    # Delta twist: Delta_left(x) maps to the flip of Delta_right(image of x)
    n = right.pres.ngens
    sq = tensor_power(right.pres, 2)
    sq.complete(max(degree, max((r.degree for r in sq.relations), default=0)))
    imgs = images(left, right)
    sq_imgs = [p for p in imgs] + [p.shift(n) for p in imgs]
    flip = [NcPoly.gen(f, n + i) for i in range(n)] + [NcPoly.gen(f, i) for i in range(n)]
    for i in range(left.pres.ngens):
        lhs = left.delta[i].substitute(sq_imgs)
        rhs = right.delta_of(imgs[i]).substitute(flip)
        if sq.normal_form(lhs - rhs):
            rep.fail("delta-cop", f"Delta disagrees on {left.pres.names[i]}")
        if left.counit[i] != right.counit_of(imgs[i]):
            rep.fail("counit", f"eps disagrees on {left.pres.names[i]}")
    hl = left.pres.hilbert_function(degree)
    hr = right.pres.hilbert_function(degree)
    rep.details["hilbert_left"] = hl
    rep.details["hilbert_right"] = hr
    if hl != hr:
        rep.fail("hilbert", f"{hl} != {hr}")
    return rep


# -- cyclic gradings with unbounded cosupport ------------------------------------

@dataclass
class WitnessRow:
    n: int
    dim_supp: int
    dim_v1: int
    verified: bool
    report: Report = field(default_factory=Report, repr=False)


def witness_coaction(a: OmegaAlgebra, n: int, offset: int = 1) -> ComeasuringInstance:
    """C_n-grading on a span algebra: w_j = sum_l zeta^{(l-1)(j-1)} v_l has degree chi^{1-j}.

    Basis vectors v_1..v_n sit at positions ``offset``..``offset+n-1``; all other
    basis vectors have trivial degree.
    """
    f = a.field
    if f.kind != "Fp" or (f.p - 1) % n:
        raise BadField(f"need F_p with {n} | p-1")
    zeta = f.primitive_root_of_unity(n)
    w = Matrix(f, n, n, [[zeta ** (l * j) for j in range(n)] for l in range(n)])
    winv = inverse(w)
    q = standard_algebra("group_algebra", f, n=n, structure="bialgebra")
    d = a.dim
    coords = [[[f.zero] * n for _ in range(d)] for _ in range(d)]
    for i in range(d):
        if offset <= i < offset + n:
            ii = i - offset
            for j in range(n):
                c = winv[j, ii]
                if not c:
                    continue
                for l in range(n):
                    coords[offset + l][i][(-j) % n] += c * w[l, j]
        else:
            coords[i][i][0] = f.one
    return ComeasuringInstance(a, a, q, CoactionShapeMap.from_coords(f, coords, n))


def nonexistence_witness(n_list, cap: int = 8, field: FieldSpec | None = None,
                         coalgebra: bool = False) -> list[WitnessRow]:
    f = field or FieldSpec("Fp", 13)
    if f.kind != "Fp":
        raise BadField("roots of unity are taken in F_p")
    if any(n > cap for n in n_list):
        raise ValueError("every n must be at most the cap")
    for n in n_list:
        if (f.p - 1) % n:
            raise BadField(f"{n} does not divide p-1 = {f.p - 1}")
    kind = "primitive_span_coalgebra" if coalgebra else "nilpotent_span_algebra"
    a = standard_algebra(kind, f, N=cap)
    rows = []
    for n in n_list:
        inst = witness_coaction(a, n)
        rep = verify_coaction(inst)
        rho = inst.rho
        dim_supp = rank(rho.rows)
        v1 = Matrix(f, a.dim, n, [rho.q(b, 1) for b in range(a.dim)])
        rows.append(WitnessRow(n, dim_supp, rank(v1), bool(rep), rep))
    return rows


def witness_csv(rows: list[WitnessRow]) -> str:
    lines = ["n,dim_supp,verified"]
    lines += [f"{r.n},{r.dim_supp},{str(r.verified).lower()}" for r in rows]
    return "\n".join(lines) + "\n"
