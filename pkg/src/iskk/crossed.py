"""Algebraic crossed products and exact Wedderburn-style decompositions.

The universal crossed product has basis {a d_g} with a running over the range
ideal of g; the tighter variant further identifies a d_e with a d_f for
idempotents e <= f on the corner where e acts (quotient by the generated
*-ideal). Groupoid coefficients give the usual convolution algebra with
non-composable products equal to zero.

Semisimple quotients are computed over the rationals: the radical is the
null space of the regular trace form, block data comes from the factored
minimal polynomial of a generic central element, and a floating eigenvalue
clustering oracle can cross-check the block count.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from .errors import CenterDoesNotSplit, InvalidAction, NonIntegralMultiplicity
from .galgebra import GAlgebra, HAlgebra, StarAlgebra, zero_matrix
from .linalg import ONE, ZERO, QuotientSpace, Span, identity, mat_vec, nullspace, solve, zeros
from .semigroup import FiniteInvSgp, iter_mask, leq
from .spectrum import germ_range, germ_source, tilde_mul, tilde_star


@dataclass
class CrossedProductAlgebra:
    kind: str
    alg: StarAlgebra
    basis_labels: list
    universal_dim: int

    @property
    def dim(self):
        return self.alg.dim


def _range_spans(a: GAlgebra):
    spans = {}
    for g in a.sgp.elements():
        e = a.sgp.range_of(g)
        if e not in spans:
            m = a.action[e]
            sp = Span()
            for j in range(a.dim):
                sp.add([m[i][j] for i in range(a.dim)])
            spans[e] = sp
    return spans


def _universal(a: GAlgebra) -> CrossedProductAlgebra:
    s = a.sgp
    spans = _range_spans(a)
    layout = []  # (g, local index) per crossed basis vector
    offs = {}
    labels = []
    pos = 0
    for g in s.elements():
        sp = spans[s.range_of(g)]
        offs[g] = pos
        for k in range(sp.dim):
            layout.append((g, k))
            labels.append(f"[{k}]d_{s.names[g]}")
            pos += 1
    dim = pos

    mul = {}
    for i, (g, ki) in enumerate(layout):
        sp_g = spans[s.range_of(g)]
        avec = list(sp_g.rows[ki])
        for j, (h, kj) in enumerate(layout):
            sp_h = spans[s.range_of(h)]
            bvec = mat_vec(a.action[g], list(sp_h.rows[kj]))
            prod = a.alg.mul_vec(avec, bvec)
            if not any(prod):
                continue
            gh = s.table[g][h]
            coords = spans[s.range_of(gh)].coords(prod)
            if coords is None:
                raise InvalidAction("crossed product coefficient escapes its range ideal")
            cell = {offs[gh] + k: v for k, v in enumerate(coords) if v}
            if cell:
                mul[(i, j)] = cell
    star = zero_matrix(dim)
    for i, (g, ki) in enumerate(layout):
        sp_g = spans[s.range_of(g)]
        gstar = s.star[g]
        w = mat_vec(a.action[gstar], a.alg.star_vec(list(sp_g.rows[ki])))
        coords = spans[s.range_of(gstar)].coords(w)
        if coords is None:
            raise InvalidAction("crossed product star escapes its range ideal")
        for k, v in enumerate(coords):
            if v:
                star[offs[gstar] + k][i] = v
    out = CrossedProductAlgebra("universal", StarAlgebra(dim, mul, star, "AxG"), labels, dim)
    out.layout = layout
    out.offs = offs
    out.spans = spans
    out.coeff = a
    return out


def _sieben(a: GAlgebra) -> CrossedProductAlgebra:
    s = a.sgp
    uni = _universal(a)
    spans, offs = uni.spans, uni.offs
    relations = []
    idem = [e for e in s.elements() if s.is_idempotent(e)]
    for e in idem:
        for f in idem:
            if e == f or not leq(s, e, f):
                continue
            # corner where e acts: span of e(x) y over basis pairs
            corner = Span()
            for i in range(a.dim):
                ex = mat_vec(a.action[e], a.alg.basis_vec(i))
                if not any(ex):
                    continue
                for j in range(a.dim):
                    corner.add(a.alg.mul_vec(ex, a.alg.basis_vec(j)))
            for row in corner.rows:
                v = zeros(uni.dim)
                ce = spans[s.range_of(e)].coords(list(row))
                cf = spans[s.range_of(f)].coords(list(row))
                if ce is None or cf is None:
                    raise InvalidAction("tight relation coefficient escapes range ideals")
                for k, c in enumerate(ce):
                    v[offs[e] + k] += c
                for k, c in enumerate(cf):
                    v[offs[f] + k] -= c
                if any(v):
                    relations.append(v)

    ideal = Span()
    frontier = []
    for v in relations:
        if ideal.add(v):
            frontier.append(v)
    while frontier:
        nxt = []
        for v in frontier:
            candidates = [uni.alg.star_vec(v)]
            for i in range(uni.dim):
                candidates.append(uni.alg.mul_vec(uni.alg.basis_vec(i), v))
                candidates.append(uni.alg.mul_vec(v, uni.alg.basis_vec(i)))
            for c in candidates:
                if any(c) and ideal.add(c):
                    nxt.append(c)
        frontier = nxt

    q = QuotientSpace(uni.dim, ideal.rows)
    k = q.dim
    lifts = [q.lift([ONE if t == i else ZERO for t in range(k)]) for i in range(k)]
    mul = {}
    for i in range(k):
        for j in range(k):
            cell = {t: v for t, v in enumerate(q.to_coords(uni.alg.mul_vec(lifts[i], lifts[j]))) if v}
            if cell:
                mul[(i, j)] = cell
    star = zero_matrix(k)
    for j in range(k):
        for i, v in enumerate(q.to_coords(uni.alg.star_vec(lifts[j]))):
            star[i][j] = v
    labels = [f"q{i}" for i in range(k)]
    return CrossedProductAlgebra("sieben", StarAlgebra(k, mul, star, "Ax^G"), labels, uni.dim)


def _groupoid(d: HAlgebra) -> CrossedProductAlgebra:
    gpd = d.gpd
    s = gpd.sgp
    layout = []
    offs = {}
    labels = []
    pos = 0
    for h in gpd.elements:
        rng_pos = gpd.unit_pos_of_mask(germ_range(s, h))
        fib = d.fiber_indices(rng_pos)
        offs[h] = pos
        for k in fib:
            layout.append((h, k))
            labels.append(f"[{k}]d_({h.g},{h.chars:#x})")
            pos += 1
    dim = pos
    fibs = {h: d.fiber_indices(gpd.unit_pos_of_mask(germ_range(s, h))) for h in gpd.elements}

    mul = {}
    for i, (h, ki) in enumerate(layout):
        for j, (g2, kj) in enumerate(layout):
            prod_g = tilde_mul(s, h, g2)
            if prod_g.is_zero():
                continue
            bvec = mat_vec(d.action[h], d.alg.basis_vec(kj))
            prod = d.alg.mul_vec(d.alg.basis_vec(ki), bvec)
            if not any(prod):
                continue
            fib = fibs[prod_g]
            cell = {}
            for t, v in enumerate(prod):
                if v:
                    if t not in fib:
                        raise InvalidAction("groupoid convolution escapes its fiber")
                    cell[offs[prod_g] + fib.index(t)] = v
            if cell:
                mul[(i, j)] = cell
    star = zero_matrix(dim)
    for i, (h, ki) in enumerate(layout):
        hs = tilde_star(s, h)
        w = mat_vec(d.action[hs], d.alg.star_vec(d.alg.basis_vec(ki)))
        fib = fibs[hs]
        for t, v in enumerate(w):
            if v:
                star[offs[hs] + fib.index(t)][i] = v
    return CrossedProductAlgebra("groupoid", StarAlgebra(dim, mul, star, "DxH"), labels, dim)


def crossed(coeff, carrier=None, kind="universal") -> CrossedProductAlgebra:
    """Crossed product of a coefficient algebra.

    kind 'universal'/'sieben' expect a GAlgebra (carrier ignored); 'groupoid'
    expects an HAlgebra.
    """
    if kind == "universal":
        return _universal(coeff)
    if kind == "sieben":
        return _sieben(coeff)
    if kind == "groupoid":
        return _groupoid(coeff)
    raise InvalidAction(f"unknown crossed product kind {kind!r}")


# ---------------------------------------------------------------------------
# semisimple structure


@dataclass
class SemisimpleDecomposition:
    radical_dim: int
    quotient: StarAlgebra
    quotient_dim: int
    center_dim: int
    blocks: int
    block_dims: list
    splits: bool
    witness_poly: str | None
    central_idempotents: list
    method: str

    def to_json(self):
        return {
            "radical_dim": self.radical_dim,
            "quotient_dim": self.quotient_dim,
            "center_dim": self.center_dim,
            "blocks": self.blocks,
            "block_dims": list(self.block_dims),
            "splits": self.splits,
            "witness_poly": self.witness_poly,
            "method": self.method,
        }


def _as_star_algebra(x) -> StarAlgebra:
    if isinstance(x, StarAlgebra):
        return x
    if isinstance(x, CrossedProductAlgebra):
        return x.alg
    if isinstance(x, (GAlgebra, HAlgebra)):
        return x.alg
    if hasattr(x, "galg"):
        return x.galg.alg
    raise TypeError(f"not an algebra: {x!r}")


def _trace_form(alg: StarAlgebra):
    # t_vec[l] = tr(L_{b_l}) = sum_k mul[(l,k)][k]
    t_vec = []
    for l in range(alg.dim):
        acc = ZERO
        for k in range(alg.dim):
            cell = alg.mul.get((l, k))
            if cell:
                acc += cell.get(k, ZERO)
        t_vec.append(acc)
    t = zero_matrix(alg.dim)
    for i in range(alg.dim):
        for j in range(alg.dim):
            cell = alg.mul.get((i, j))
            if cell:
                t[i][j] = sum((v * t_vec[l] for l, v in cell.items()), ZERO)
    return t


def _quotient_by_ideal(alg: StarAlgebra, ideal_vectors):
    q = QuotientSpace(alg.dim, ideal_vectors)
    k = q.dim
    lifts = [q.lift([ONE if t == i else ZERO for t in range(k)]) for i in range(k)]
    mul = {}
    for i in range(k):
        for j in range(k):
            cell = {t: v for t, v in enumerate(q.to_coords(alg.mul_vec(lifts[i], lifts[j]))) if v}
            if cell:
                mul[(i, j)] = cell
    star = zero_matrix(k)
    for j in range(k):
        for i, v in enumerate(q.to_coords(alg.star_vec(lifts[j]))):
            star[i][j] = v
    return StarAlgebra(k, mul, star, f"{alg.label}/rad"), q


def _center_basis(alg: StarAlgebra):
    if alg.dim == 0:
        return []
    basis_cols = identity(alg.dim)
    current = [list(col) for col in zip(*basis_cols)]  # columns as vectors
    for i in range(alg.dim):
        li = alg.left_mult_matrix(alg.basis_vec(i))
        ri = alg.right_mult_matrix(alg.basis_vec(i))
        diff = [[li[r][c] - ri[r][c] for c in range(alg.dim)] for r in range(alg.dim)]
        rows = [[sum(diff[r][t] * v[t] for t in range(alg.dim)) for v in current]
                for r in range(alg.dim)]
        ker = nullspace(rows)
        current = [
            [sum(k[c] * current[c][t] for c in range(len(current))) for t in range(alg.dim)]
            for k in ker
        ]
        if not current:
            return []
    return current


def _minimal_polynomial(alg: StarAlgebra, unit, zeta):
    """Monic minimal polynomial of zeta as exact rational coefficients."""
    span = Span()
    powers = [list(unit)]
    span.add(unit)
    x = sympy.symbols("x")
    current = list(unit)
    for deg in range(1, alg.dim + 2):
        current = alg.mul_vec(current, zeta)
        if not span.add(current):
            # dependency: solve for coefficients over previous powers
            rows = [[powers[d][t] for d in range(deg)] for t in range(alg.dim)]
            rhs = list(current)
            coeffs = solve(rows, rhs)
            assert coeffs is not None
            poly = sympy.Poly(
                x ** deg - sum(sympy.Rational(c) * x ** d for d, c in enumerate(coeffs)),
                x,
            )
            return poly
        powers.append(list(current))
    raise RuntimeError("minimal polynomial search exceeded the dimension bound")


def semisimple_quotient(x) -> SemisimpleDecomposition:
    """Radical via the regular trace form, block data via the factored
    minimal polynomial of a generic central element."""
    alg = _as_star_algebra(x)
    if alg.dim == 0:
        return SemisimpleDecomposition(0, alg, 0, 0, 0, [], True, None, [], "exact")
    t = _trace_form(alg)
    radical = nullspace(t)
    quotient, _ = _quotient_by_ideal(alg, radical)
    center = _center_basis(quotient)
    cdim = len(center)
    if quotient.dim == 0:
        return SemisimpleDecomposition(len(radical), quotient, 0, 0, 0, [], True, None, [], "exact")
    unit = quotient.unit_vector()
    if unit is None:
        raise InvalidAction("semisimple quotient has no unit; structure data unreliable")

    x_sym = sympy.symbols("x")
    poly = None
    for attempt in range(1, 9):
        zeta = zeros(quotient.dim)
        for i, c in enumerate(center):
            w = Fraction((i + 1) ** attempt)
            zeta = [a + w * b for a, b in zip(zeta, c)]
        poly = _minimal_polynomial(quotient, unit, zeta)
        if poly.degree() == cdim:
            break
    if poly is None or poly.degree() != cdim:
        raise InvalidAction("no generic central element found; center data unreliable")

    factors = sympy.factor_list(poly.as_expr())[1]
    factor_list = []
    for f, mult in factors:
        assert mult == 1, "semisimple center has squarefree minimal polynomial"
        factor_list.append(sympy.Poly(f, x_sym))
    splits = all(f.degree() == 1 for f in factor_list)
    witness = None
    if not splits:
        witness = str(min((f for f in factor_list if f.degree() > 1), key=lambda f: f.degree()).as_expr())

    # primary central idempotents via CRT: q_i = 1 mod f_i, 0 mod others
    idems = []
    block_dims = []
    blocks = 0
    for f in factor_list:
        rest = sympy.Poly(1, x_sym)
        for g in factor_list:
            if g is not f:
                rest = rest * g
        inv = sympy.invert(rest, f)
        qpoly = sympy.Poly(inv * rest, x_sym) % poly
        vec = _eval_poly(quotient, unit, zeta, qpoly)
        idems.append(vec)
        lz = quotient.left_mult_matrix(vec)
        d_i = _matrix_rank(lz)
        deg = f.degree()
        m2, rem = divmod(d_i, deg)
        if rem != 0:
            raise NonIntegralMultiplicity(f"primary component dim {d_i} not divisible by {deg}")
        m = _isqrt_exact(m2)
        if m is None:
            raise NonIntegralMultiplicity(f"block dimension {m2} is not a perfect square")
        blocks += deg
        block_dims.extend([m] * deg)

    assert blocks == cdim
    method = "exact" if splits else "numeric"
    return SemisimpleDecomposition(
        len(radical), quotient, quotient.dim, cdim, blocks, sorted(block_dims, reverse=True),
        splits, witness, idems, method,
    )


def _eval_poly(alg: StarAlgebra, unit, zeta, poly):
    coeffs = poly.all_coeffs()  # highest degree first
    acc = zeros(alg.dim)
    for c in coeffs:
        acc = alg.mul_vec(acc, zeta)
        if c != 0:
            f = Fraction(sympy.Rational(c).p, sympy.Rational(c).q)
            acc = [a + f * u for a, u in zip(acc, unit)]
    return acc


def _matrix_rank(m):
    from .linalg import rank

    return rank(m)


def _isqrt_exact(n):
    r = int(round(n ** 0.5))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand * cand == n:
            return cand
    return None


def center_info(x) -> dict:
    d = semisimple_quotient(x)
    return {
        "center_dim": d.center_dim,
        "splits": d.splits,
        "witness_poly": d.witness_poly,
        "blocks": d.blocks,
        "method": d.method,
    }


def center_dim(x) -> int:
    return semisimple_quotient(x).center_dim


def numeric_block_oracle(x, seed: int = 0, tol: float = 1e-9) -> dict:
    """Float eigenvalue clustering of a random central element of the
    semisimple quotient; returns cluster count and certification data."""
    d = semisimple_quotient(x)
    if d.quotient_dim == 0:
        return {"blocks": 0, "certified": True, "max_residual": 0.0}
    center = _center_basis(d.quotient)
    rng = np.random.default_rng(seed)
    coeffs = rng.integers(1, 1000, size=len(center))
    zeta = zeros(d.quotient.dim)
    for c, vec in zip(coeffs, center):
        zeta = [a + Fraction(int(c)) * b for a, b in zip(zeta, vec)]
    lz = np.array([[float(v) for v in row] for row in d.quotient.left_mult_matrix(zeta)])
    eig = np.linalg.eigvals(lz)
    clusters = []
    for lam in eig:
        for cl in clusters:
            if abs(lam - cl[0]) < 1e-6:
                cl.append(lam)
                break
        else:
            clusters.append([lam])
    max_residual = 0.0
    mults_ok = True
    for cl in clusters:
        mean = sum(cl) / len(cl)
        max_residual = max(max_residual, max(abs(c - mean) for c in cl))
        if _isqrt_exact(len(cl)) is None:
            mults_ok = False
    return {
        "blocks": len(clusters),
        "certified": max_residual < tol and mults_ok,
        "max_residual": float(max_residual),
        "multiplicities": sorted(len(c) for c in clusters),
    }
