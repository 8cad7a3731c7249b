"""K0 of finite-dimensional algebras and the verifiable rank identities.

k0 counts simple blocks over an algebraically closed field via exact center
data. Induced maps between split algebras are trace-normalized multiplicity
matrices. The headline checks: the counterexample values of the failed
adjunction (rank of the scalar line crossed by a semilattice and by the
trivial sub-semigroup), rank-level imprimitivity of induced coefficients, and
the compressed form of the Green-Julg diagram.
"""

from dataclasses import dataclass
from fractions import Fraction

from .crossed import (
    CrossedProductAlgebra,
    SemisimpleDecomposition,
    _as_star_algebra,
    crossed,
    numeric_block_oracle,
    semisimple_quotient,
)
from .errors import CenterDoesNotSplit, HypothesesNotMet, NonIntegralMultiplicity
from .galgebra import (
    GAlgebra,
    StarAlgebra,
    StarHomomorphism,
    c0_units,
    diagonal_star_algebra,
    h_direct_sum,
    mat_eq,
    restrict,
    trivial_line,
    verify_star_hom,
    zero_matrix,
)
from .induction import (
    FiniteGroupoid,
    assoc_groupoid,
    build_induced,
    check,
    make_report,
)
from .linalg import ONE, ZERO, identity, mat_mul, mat_vec
from .semigroup import FiniteInvSgp, bit, generate, iter_mask, mask_of, popcount
from .spectrum import germ_range, germ_source, spectrum


@dataclass
class K0Group:
    rank: int
    block_dims: list
    method: str

    def to_json(self):
        return {"rank": self.rank, "block_dims": list(self.block_dims), "method": self.method}


@dataclass
class K0Map:
    matrix: list  # integer entries, target blocks x source blocks


def k0(x) -> K0Group:
    d = semisimple_quotient(x)
    if not d.splits and d.quotient_dim:
        oracle = numeric_block_oracle(x)
        if not (oracle["certified"] and oracle["blocks"] == d.blocks):
            raise CenterDoesNotSplit(
                "numeric block certification failed", witness_poly=d.witness_poly
            )
    return K0Group(d.blocks, d.block_dims, d.method)


def _split_block_data(x):
    d = semisimple_quotient(x)
    if not d.splits:
        raise CenterDoesNotSplit(
            "induced K0 maps need a rationally split center", witness_poly=d.witness_poly
        )
    return d


def _quotient_map(f: StarHomomorphism, dsrc, ddst):
    """Descend a *-homomorphism to the semisimple quotients."""
    from .linalg import zeros

    src_alg = _as_star_algebra(f.source)
    qsrc = _QuotHelper(src_alg, dsrc)
    qdst = _QuotHelper(_as_star_algebra(f.target), ddst)
    cols = []
    for i in range(dsrc.quotient_dim):
        v = qsrc.lift_basis(i)
        cols.append(qdst.to_coords(mat_vec(f.matrix, v)))
    return [[cols[j][i] for j in range(dsrc.quotient_dim)] for i in range(ddst.quotient_dim)]


class _QuotHelper:
    def __init__(self, alg, decomp):
        from .crossed import _quotient_by_ideal, _trace_form
        from .linalg import nullspace

        radical = nullspace(_trace_form(alg))
        _, self.q = _quotient_by_ideal(alg, radical)

    def lift_basis(self, i):
        return self.q.lift([ONE if t == i else ZERO for t in range(self.q.dim)])

    def to_coords(self, v):
        return self.q.to_coords(v)


def k0_map(f: StarHomomorphism) -> K0Map:
    """Trace-normalized multiplicity matrix of a *-homomorphism.

    Entry (i, j) is tr(L_{z_i f(z_j)}) / tr(L_{z_i}) over the semisimple
    quotients; integrality is enforced.
    """
    dsrc = _split_block_data(f.source)
    ddst = _split_block_data(f.target)
    fq = _quotient_map(f, dsrc, ddst)
    out = []
    for i, zi in enumerate(ddst.central_idempotents):
        ti = ddst.quotient.trace_left_mult(zi)
        row = []
        for j, zj in enumerate(dsrc.central_idempotents):
            img = mat_vec(fq, zj)
            val = ddst.quotient.trace_left_mult(ddst.quotient.mul_vec(zi, img))
            m = val / ti
            if m.denominator != 1:
                raise NonIntegralMultiplicity(f"entry ({i},{j}) = {m}")
            if m < 0:
                raise NonIntegralMultiplicity(f"entry ({i},{j}) = {m} negative")
            row.append(int(m))
        out.append(row)
    return K0Map(out)


# ---------------------------------------------------------------------------
# the Green-Julg style diagram at K0 level


def verify_green_julg_diagram(s: FiniteInvSgp, hprime: int, parts, instance="") -> dict:
    """The scalar line sits inside functions on the sub-semigroup's character
    space as the minimal-idempotent atom, split by evaluation; both maps are
    groupoid-equivariant and compose to the identity on K0. Crossed-product
    K0 is additive over direct sums of coefficients.
    """
    h = assoc_groupoid(s, hprime)
    sp = spectrum(s)
    checks = []

    hidem = [e for e in iter_mask(hprime) if s.is_idempotent(e)]
    bottom = hidem[0]
    for e in hidem[1:]:
        bottom = s.table[bottom][e]
    if bottom == s.zero:
        raise HypothesesNotMet("the minimal idempotent of the sub-semigroup is the declared zero")
    # the atom of the bottom idempotent: all its characters share one signature
    atom_mask = sp.proj(bottom)
    upos = None
    for i, u in enumerate(h.units):
        if u.chars == atom_mask:
            upos = i
    checks.append(check("minimal_atom_is_unit", None if upos is not None else "no such unit"))
    if upos is None:
        return make_report("green-julg-diagram", instance, checks, {})

    cx = c0_units(h)  # functions on the unit space = characters of E(H')
    line = trivial_line(h, upos)
    n = len(h.units)
    f_mat = [[ONE] if i == upos else [ZERO] for i in range(n)]
    p_mat = [[ONE if j == upos else ZERO for j in range(n)]]
    f_hom = StarHomomorphism(line, cx, f_mat, label="unit-atom inclusion")
    p_hom = StarHomomorphism(cx, line, p_mat, label="unit-atom evaluation")
    rep_f = verify_star_hom(f_hom, equivariant_keys=list(h.elements))
    rep_p = verify_star_hom(p_hom, equivariant_keys=list(h.elements))
    checks.append(check("inclusion_hom", None if rep_f["pass"] else rep_f))
    checks.append(check("evaluation_hom", None if rep_p["pass"] else rep_p))

    mf, mp = k0_map(f_hom).matrix, k0_map(p_hom).matrix
    pf = mat_mul(mp, mf)
    checks.append(check("k0_p_after_f_identity", None if pf == [[1]] else pf))
    fp = mat_mul(mf, mp)
    checks.append(check("k0_f_p_idempotent", None if mat_mul(fp, fp) == fp else fp))
    checks.append(check("k0_identity_on_image", None if mat_mul(fp, mf) == mf else fp))

    # additivity of crossed-product K0 over direct sums of coefficients
    ranks = []
    res_parts = []
    for b in parts:
        d = b if hasattr(b, "gpd") else restrict(b, h)
        res_parts.append(d)
        ranks.append(k0(crossed(d, kind="groupoid")).rank)
    summed = res_parts[0]
    for d in res_parts[1:]:
        summed = h_direct_sum(summed, d)
    total = k0(crossed(summed, kind="groupoid")).rank
    checks.append(check("k0_additive_over_sums",
                        None if total == sum(ranks) else f"{total} != {ranks}"))
    return make_report("green-julg-diagram", instance, checks,
                       {"unit_count": n, "part_ranks": ranks, "sum_rank": total})


# ---------------------------------------------------------------------------
# imprimitivity at rank level


def verify_imprimitivity(s: FiniteInvSgp, hprime: int, f, instance="") -> dict:
    """rank K0(Ind(F) x^ G) == rank K0(F x H): the K0 shadow of the
    imprimitivity isomorphism between the tight crossed product of an induced
    algebra and the groupoid crossed product of its coefficient."""
    h = assoc_groupoid(s, hprime)
    d = f if hasattr(f, "gpd") else restrict(f, h)
    ind = build_induced(s, h, d)
    lhs = k0(crossed(ind.galg, kind="sieben"))
    rhs = k0(crossed(d, kind="groupoid"))
    checks = [check("rank_equality",
                    None if lhs.rank == rhs.rank else f"{lhs.rank} != {rhs.rank}")]
    return make_report("imprimitivity-k0", instance, checks,
                       {"lhs_rank": lhs.rank, "rhs_rank": rhs.rank,
                        "lhs_blocks": lhs.block_dims, "rhs_blocks": rhs.block_dims,
                        "ind_dim": ind.dim})


# ---------------------------------------------------------------------------
# the counterexample values


def verify_remark_counterexamples(s: FiniteInvSgp, instance="") -> dict:
    """Three verifiable shadows of the failed induction-restriction adjunction:

    1. when no projection other than the unit is connected to the unit, every
       proper projection annihilates the algebra induced from the trivial
       sub-semigroup (the algebraic germ of the vanishing pairing);
    2. for a semilattice, the scalar line crossed by it has rank = its size;
    3. the tight crossed product over the trivial sub-semigroup has rank 1.
    """
    checks = []
    sp = spectrum(s)

    # hypothesis: g*g = 1 forces gg* = 1
    offenders = [g for g in s.elements() if s.source(g) == s.unit and s.range_of(g) != s.unit]
    hyp_ok = not offenders
    proper = [e for e in iter_mask(s._idem_mask) if e != s.unit]
    if not hyp_ok:
        checks.append(check("vanishing_hypothesis",
                            f"projection {s.names[s.range_of(offenders[0])]} is connected to the unit"))
    elif not proper:
        checks.append(check("vanishing_hypothesis", None,
                            note="inapplicable: no proper projections (group case)"))
    else:
        h = assoc_groupoid(s, bit(s.unit))
        line = trivial_line(h, 0)
        ind = build_induced(s, h, line)
        witness = None
        for p in proper:
            m = ind.galg.action[p]
            if any(v for row in m for v in row):
                witness = s.names[p]
                break
        checks.append(check("proper_projections_annihilate", witness))

    if s._idem_mask == mask_of(s.elements()) and s.zero is None:
        from .galgebra import trivial_algebra

        rank = k0(crossed(trivial_algebra(s), kind="universal")).rank
        m = sp.size
        checks.append(check("semilattice_rank_is_size",
                            None if rank == s.n == m else f"rank {rank}, size {s.n}"))
    else:
        checks.append(check("semilattice_rank_is_size", None,
                            note="inapplicable: not a zero-free semilattice"))

    from .semigroup import build

    triv = build("chain", 1)
    from .galgebra import trivial_algebra

    rank1 = k0(crossed(trivial_algebra(triv), kind="sieben")).rank
    checks.append(check("trivial_subsemigroup_rank_one", None if rank1 == 1 else rank1))
    return make_report("remark-counterexamples", instance, checks, {})
