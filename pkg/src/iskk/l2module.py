"""The compatible square-summable module over the character algebra.

Basis vectors phi_g(t) = [t <= g] for semigroup elements g (the declared zero
is excluded: its basis vector is null under the character convention). Inner
products are 0/1-valued functions on the character space, assembled into a
Gram matrix certified positive semidefinite character-by-character with exact
pivoted LDL^T, and the stacked system is checked for full column rank.
"""

from dataclasses import dataclass

from .linalg import psd_certificate, rank
from .semigroup import FiniteInvSgp, bit, iter_mask, leq, nonzero_idempotents
from .spectrum import (
    act_alg_star,
    alg_star_from_mask,
    alg_star_to_json,
    spectrum,
)


def phi_inner(s: FiniteInvSgp, g: int, h: int) -> tuple:
    """<phi_g, phi_h>: the join of {1_e : eg = eh, e <= gg* hh*}."""
    sp = spectrum(s)
    bound = s.table[s.range_of(g)][s.range_of(h)]
    mask = 0
    for e in iter_mask(nonzero_idempotents(s)):
        if s.table[e][g] == s.table[e][h] and leq(s, e, bound):
            mask |= sp.proj(e)
    return alg_star_from_mask(s, mask)


def l2_basis(s: FiniteInvSgp) -> list:
    """Basis element indices; the declared zero is dropped (null vector)."""
    return [g for g in s.elements() if g != s.zero]


@dataclass
class GramMatrix:
    sgp: FiniteInvSgp
    basis: list
    entries: list  # entries[i][j] is a function on the character space

    def at_char(self, pos: int) -> list:
        return [[row[j][pos] for j in range(len(self.basis))] for row in self.entries]

    def to_json(self) -> dict:
        s = self.sgp
        return {
            "basis": [s.names[g] for g in self.basis],
            "entries": [
                [alg_star_to_json(s, cell) for cell in row] for row in self.entries
            ],
        }


def gram(s: FiniteInvSgp) -> GramMatrix:
    basis = l2_basis(s)
    entries = [[phi_inner(s, g, h) for h in basis] for g in basis]
    return GramMatrix(s, basis, entries)


def l2_act(s: FiniteInvSgp, g: int, v: dict) -> dict:
    """Translate a formal combination sum(c_h phi_h) to sum(c_h phi_{gh})."""
    out = {}
    for h, c in v.items():
        gh = s.table[g][h]
        if gh == s.zero or not c:
            continue
        out[gh] = out.get(gh, 0) + c
        if out[gh] == 0:
            del out[gh]
    return out


def check_psd(gm: GramMatrix) -> dict:
    """Exact LDL^T positive-semidefiniteness at every character."""
    sp = spectrum(gm.sgp)
    failures = []
    for pos in range(sp.size):
        ok, witness = psd_certificate(gm.at_char(pos))
        if not ok:
            failures.append(
                {"character": gm.sgp.names[sp.gens[pos]], "pivot": witness}
            )
    return {
        "check": "gram_psd",
        "characters": sp.size,
        "pass": not failures,
        "failures": failures,
    }


def check_independence(s: FiniteInvSgp) -> dict:
    """Full column rank of the Gram matrices stacked over all characters."""
    gm = gram(s)
    sp = spectrum(s)
    stacked = []
    for pos in range(sp.size):
        stacked.extend(gm.at_char(pos))
    n = len(gm.basis)
    r = rank(stacked) if stacked else 0
    return {
        "check": "phi_independence",
        "basis_size": n,
        "rank": r,
        "pass": r == n,
    }


def check_module_axioms(s: FiniteInvSgp) -> dict:
    """Symmetry, E-semilinearity and full equivariance of the inner product."""
    sp = spectrum(s)
    basis = l2_basis(s)
    checks = []

    sym_witness = None
    for g in basis:
        for h in basis:
            if phi_inner(s, g, h) != phi_inner(s, h, g):
                sym_witness = (s.names[g], s.names[h])
                break
        if sym_witness:
            break
    checks.append({"name": "symmetry", "pass": sym_witness is None, "witness": sym_witness})

    # <phi_g, phi_h . f> = <phi_g, phi_h> . f  with phi . f := f(phi) = phi_{fh}
    semi_witness = None
    for g in basis:
        for h in basis:
            inner = phi_inner(s, g, h)
            for f in iter_mask(nonzero_idempotents(s)):
                fh = s.table[f][h]
                lhs = (
                    phi_inner(s, g, fh)
                    if fh != s.zero
                    else alg_star_from_mask(s, 0)
                )
                pf = sp.proj(f)
                rhs = tuple(
                    v if pf >> i & 1 else 0 * v for i, v in enumerate(inner)
                )
                if lhs != tuple(rhs):
                    semi_witness = (s.names[g], s.names[h], s.names[f])
                    break
            if semi_witness:
                break
        if semi_witness:
            break
    checks.append(
        {"name": "module_semilinearity", "pass": semi_witness is None, "witness": semi_witness}
    )

    eq_witness = None
    for j in s.elements():
        for g in basis:
            jg = s.table[j][g]
            for h in basis:
                jh = s.table[j][h]
                lhs = act_alg_star(s, j, phi_inner(s, g, h))
                if jg == s.zero or jh == s.zero:
                    rhs = alg_star_from_mask(s, 0)
                else:
                    rhs = phi_inner(s, jg, jh)
                if lhs != rhs:
                    eq_witness = (s.names[j], s.names[g], s.names[h])
                    break
            if eq_witness:
                break
        if eq_witness:
            break
    checks.append({"name": "equivariance", "pass": eq_witness is None, "witness": eq_witness})

    return {
        "check": "module_axioms",
        "pass": all(c["pass"] for c in checks),
        "checks": checks,
    }
