"""Concrete algebras: group algebras, function algebras, Kac-Paljutkin H8.

Groups are given by explicit multiplication tables (desk scale, no
presentation solving).  H8 structure constants are expanded once from the
generator relations and axiom-checked at build time.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidGroupError, NotHopfSubalgebraError
from .hopf import FinHopfAlgebra, verify_hopf_axioms

log = logging.getLogger(__name__)


@dataclass
class GroupTable:
    """A finite group as an explicit multiplication table of indices."""

    order: int
    table: np.ndarray
    labels: tuple = ()
    identity: int = field(init=False)
    inverse: np.ndarray = field(init=False)

    def __post_init__(self):
        n = self.order
        t = np.asarray(self.table, dtype=int)
        if t.shape != (n, n):
            raise InvalidGroupError("table must be order x order")
        self.table = t
        if not self.labels:
            self.labels = tuple(f"g{i}" for i in range(n))
        ident = [e for e in range(n)
                 if all(t[e, g] == g and t[g, e] == g for g in range(n))]
        if len(ident) != 1:
            raise InvalidGroupError("no unique identity element")
        self.identity = ident[0]
        inv = np.full(n, -1, dtype=int)
        for g in range(n):
            js = np.nonzero(t[g] == self.identity)[0]
            if len(js) != 1 or t[js[0], g] != self.identity:
                raise InvalidGroupError(f"element {g} has no two-sided inverse")
            inv[g] = js[0]
        self.inverse = inv
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if t[t[a, b], c] != t[a, t[b, c]]:
                        raise InvalidGroupError("table is not associative")


def cyclic_group(n: int) -> GroupTable:
    t = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return GroupTable(n, t, tuple("e" if k == 0 else f"x{k}" if n > 2 else "x"
                                  for k in range(n)))


def direct_product(G: GroupTable, H: GroupTable) -> GroupTable:
    n, m = G.order, H.order
    t = np.zeros((n * m, n * m), dtype=int)
    for a in range(n):
        for b in range(m):
            for c in range(n):
                for d in range(m):
                    t[a * m + b, c * m + d] = G.table[a, c] * m + H.table[b, d]
    labels = tuple(f"({x},{y})" for x in G.labels for y in H.labels)
    return GroupTable(n * m, t, labels)


def symmetric_group_3() -> GroupTable:
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
    labels = ("e", "(123)", "(132)", "(12)", "(23)", "(13)")
    idx = {p: i for i, p in enumerate(perms)}
    t = np.zeros((6, 6), dtype=int)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            # (p q)(k) = p(q(k))
            t[i, j] = idx[tuple(p[q[k]] for k in range(3))]
    return GroupTable(6, t, labels)


def group_algebra(G: GroupTable) -> FinHopfAlgebra:
    """C[G]: Delta(g) = g (x) g, S(g) = g^{-1}, eps(g) = 1, g* = g^{-1}."""
    n = G.order
    mult = np.zeros((n, n, n), dtype=np.complex128)
    comult = np.zeros((n, n, n), dtype=np.complex128)
    for a in range(n):
        comult[a, a, a] = 1.0
        for b in range(n):
            mult[a, b, G.table[a, b]] = 1.0
    unit = np.zeros(n, dtype=np.complex128)
    unit[G.identity] = 1.0
    S = np.zeros((n, n), dtype=np.complex128)
    S[G.inverse, np.arange(n)] = 1.0
    return FinHopfAlgebra(n, G.labels, mult, unit, comult,
                          np.ones(n), S, S.copy(), name=f"C[G{n}]")


def function_algebra(G: GroupTable) -> FinHopfAlgebra:
    """C^G on the delta basis: pointwise product, Delta(d_g) = sum_{hk=g} d_h (x) d_k."""
    n = G.order
    mult = np.zeros((n, n, n), dtype=np.complex128)
    comult = np.zeros((n, n, n), dtype=np.complex128)
    for g in range(n):
        mult[g, g, g] = 1.0
        for h in range(n):
            for k in range(n):
                if G.table[h, k] == g:
                    comult[g, h, k] = 1.0
    counit = np.zeros(n, dtype=np.complex128)
    counit[G.identity] = 1.0
    S = np.zeros((n, n), dtype=np.complex128)
    S[G.inverse, np.arange(n)] = 1.0
    return FinHopfAlgebra(n, tuple(f"d_{s}" for s in G.labels),
                          mult, np.ones(n), comult, counit,
                          S, np.eye(n, dtype=np.complex128),
                          name=f"C^G{n}")


def kac_paljutkin() -> FinHopfAlgebra:
    """The 8-dimensional Kac-Paljutkin algebra on {1,x,y,xy,z,zx,zy,zxy}.

    Relations: x^2 = y^2 = 1, xy = yx, zx = yz, zy = xz,
    z^2 = (1 + x + y - xy)/2;  Delta(z) = (1(x)1 + y(x)1 + 1(x)x - y(x)x)(z(x)z)/2;
    S fixes x, y, z and swaps zx <-> zy; star equals S on the basis.
    """
    labels = ("1", "x", "y", "xy", "z", "zx", "zy", "zxy")
    # group part G = Z2 x Z2 on indices 0..3 as (x^a y^b) -> 2a + b? use table:
    gt = direct_product(cyclic_group(2), cyclic_group(2))
    # index g in 0..3 encodes x^{a} y^{b} with a = g>>1, b = g&1
    sigma = [0, 2, 1, 3]  # the automorphism x <-> y (gt indices)
    # basis: 0..3 = group part in label order (1, x, y, xy); 4..7 = z * that.
    # label order corresponds to gt indices (0, 2, 1, 3).
    order = [0, 2, 1, 3]
    pos = {g: i for i, g in enumerate(order)}
    zsq = np.array([0.5, 0.5, 0.5, -0.5])  # z^2 over label positions (1,x,y,xy)

    def gmul(a, b):
        return gt.table[a, b]

    mult = np.zeros((8, 8, 8), dtype=np.complex128)
    for ia, ga in enumerate(order):
        for ib, gb in enumerate(order):
            # g . h
            mult[ia, ib, pos[gmul(ga, gb)]] = 1.0
            # g . (z h) = z . (sigma(g) h)
            mult[ia, 4 + ib, 4 + pos[gmul(sigma[ga], gb)]] = 1.0
            # (z g) . h = z . (g h)
            mult[4 + ia, ib, 4 + pos[gmul(ga, gb)]] = 1.0
            # (z g)(z h) = z^2 sigma(g) h
            for iz, gz in enumerate(order):
                mult[4 + ia, 4 + ib, pos[gmul(gz, gmul(sigma[ga], gb))]] += zsq[iz]
    unit = np.zeros(8, dtype=np.complex128)
    unit[0] = 1.0

    comult = np.zeros((8, 8, 8), dtype=np.complex128)
    for ig in range(4):
        comult[ig, ig, ig] = 1.0
    # Delta(z) = 1/2 (z(x)z + zx(x)z + z(x)zy - zx(x)zy)
    dz = np.zeros((8, 8), dtype=np.complex128)
    dz[4, 4] += 0.5
    dz[5, 4] += 0.5
    dz[4, 6] += 0.5
    dz[5, 6] -= 0.5
    # Delta(z g) = Delta(z) (g (x) g): right-multiply both legs by g
    for ig in range(4):
        dg = np.zeros((8, 8), dtype=np.complex128)
        for a in range(8):
            for b in range(8):
                if dz[a, b] != 0:
                    ra = np.nonzero(mult[a, ig])[0]
                    rb = np.nonzero(mult[b, ig])[0]
                    for p in ra:
                        for q in rb:
                            dg[p, q] += dz[a, b] * mult[a, ig, p] * mult[b, ig, q]
        comult[4 + ig] = dg

    counit = np.ones(8, dtype=np.complex128)
    S = np.zeros((8, 8), dtype=np.complex128)
    for ig in range(4):
        S[ig, ig] = 1.0  # group part: all elements are involutions
    S[4, 4] = 1.0  # S(z) = z
    S[6, 5] = 1.0  # S(zx) = x z = zy
    S[5, 6] = 1.0  # S(zy) = y z = zx
    S[7, 7] = 1.0  # S(zxy) = xy z = zxy
    # star: g* = g; z is unitary with z* = z^{-1} = z^3 = z(1+x+y-xy)/2,
    # and (z g)* = g z*.  This is the unique (up to the x<->y relabel)
    # antilinear structure making Delta a *-homomorphism.
    star = np.zeros((8, 8), dtype=np.complex128)
    for ig in range(4):
        star[ig, ig] = 1.0
    zstar = np.zeros(8, dtype=np.complex128)
    zstar[4:] = [0.5, 0.5, 0.5, -0.5]
    eye8 = np.eye(8)
    for ig in range(4):
        star[:, 4 + ig] = np.einsum("i,j,ijk->k", eye8[ig], zstar, mult)
    H8 = FinHopfAlgebra(8, labels, mult, unit, comult, counit, S, star,
                        name="h8")
    rep = verify_hopf_axioms(H8, tol=1e-12)
    if not rep.passed:
        raise AssertionError(f"H8 build failed axioms: {rep.residuals}")
    return H8


# ---------------------------------------------------------------------------
# Hopf subalgebras


def _reduce_against(basis: list, v: np.ndarray, tol: float = 1e-10):
    """Gaussian-eliminate v against pivoted rows in basis; return remainder."""
    w = v.astype(np.complex128).copy()
    for piv, row in basis:
        w = w - w[piv] * row
    return w


def hopf_subalgebra(A: FinHopfAlgebra, generator_indices) -> tuple:
    """Hopf subalgebra generated by basis elements of A.

    Returns (K, inclusion) with inclusion a (dim A, dim K) matrix whose
    columns are the K basis vectors in A coordinates.  Raises
    NotHopfSubalgebraError when the span is not closed under mult, Delta, S.
    """
    d = A.dim
    tol = 1e-10
    basis = []  # list of (pivot index, normalized row)

    def insert(v):
        w = _reduce_against(basis, v, tol)
        nrm = np.max(np.abs(w))
        if nrm <= tol:
            return False
        piv = int(np.argmax(np.abs(w)))
        w = w / w[piv]
        for k in range(len(basis)):
            p, row = basis[k]
            basis[k] = (p, row - row[piv] * w)
        basis.append((piv, w))
        return True

    insert(A.unit)
    for i in generator_indices:
        insert(np.eye(d)[i])
    changed = True
    while changed:
        changed = False
        vecs = [row for _, row in basis]
        for v in vecs:
            for w in vecs:
                if insert(np.einsum("i,j,ijk->k", v, w, A.mult)):
                    changed = True
            if insert(A.antipode @ v):
                changed = True
            if insert(A.star @ np.conj(v)):
                changed = True
    basis.sort(key=lambda pr: pr[0])
    B = np.array([row for _, row in basis]).T  # (d, kappa)
    kappa = B.shape[1]

    # closure of Delta: Delta(b) must lie in span(B (x) B)
    BB = np.einsum("ip,jq->ijpq", B, B).reshape(d * d, kappa * kappa)
    dmat = np.einsum("ip,ijk->pjk", B, A.comult).reshape(kappa, d * d).T
    sol, res, *_ = np.linalg.lstsq(BB, dmat, rcond=None)
    if np.max(np.abs(BB @ sol - dmat)) > 1e-8:
        raise NotHopfSubalgebraError("span not closed under comultiplication")
    comult_K = sol.T.reshape(kappa, kappa, kappa)

    # structure constants in the K basis via least squares on B
    pinvB = np.linalg.pinv(B)
    prods = np.einsum("ip,jq,ijk->pqk", B, B, A.mult)
    mult_K = np.einsum("rk,pqk->pqr", pinvB, prods)
    if np.max(np.abs(np.einsum("pqr,kr->pqk", mult_K, B) - prods)) > 1e-8:
        raise NotHopfSubalgebraError("span not closed under multiplication")
    unit_K = pinvB @ A.unit
    counit_K = B.T @ A.counit
    S_K = pinvB @ A.antipode @ B
    star_K = pinvB @ A.star @ np.conj(B)
    labels = tuple(f"k{i}" for i in range(kappa))
    # prefer original labels when basis vectors are standard basis vectors
    std = []
    for c in range(kappa):
        col = B[:, c]
        hits = np.nonzero(np.abs(col) > tol)[0]
        std.append(A.basis_labels[hits[0]] if len(hits) == 1
                   and abs(col[hits[0]] - 1) < tol else f"k{c}")
    labels = tuple(std)
    K = FinHopfAlgebra(kappa, labels, mult_K, unit_K, comult_K, counit_K,
                       S_K, star_K, name=f"sub{kappa}:{A.name}")
    rep = verify_hopf_axioms(K, tol=1e-9)
    if not rep.passed:
        raise NotHopfSubalgebraError(
            f"generated span fails Hopf axioms (worst {rep.worst:.2e})")
    if A.dim % kappa != 0:
        log.warning("dim K = %d does not divide dim A = %d", kappa, A.dim)
    return K, B


# ---------------------------------------------------------------------------
# built-in registry


def builtin(name: str) -> FinHopfAlgebra:
    """Resolve a built-in algebra reference: z2, z4, z2z2, s3, h8,
    dual:<name>, double:<name>, op:<name>, cop:<name>."""
    from . import hopf as _h

    name = name.strip().lower()
    if name.startswith("dual:"):
        return _h.dual(builtin(name[5:]))
    if name.startswith("double:"):
        return _h.drinfeld_double(builtin(name[7:]))
    if name.startswith("op:"):
        return _h.opposite(builtin(name[3:]))
    if name.startswith("cop:"):
        return _h.coopposite(builtin(name[4:]))
    if name not in _BUILTIN_CACHE:
        if name == "z2":
            A = group_algebra(cyclic_group(2))
        elif name == "z3":
            A = group_algebra(cyclic_group(3))
        elif name == "z4":
            A = group_algebra(cyclic_group(4))
        elif name == "z2z2":
            A = group_algebra(direct_product(cyclic_group(2), cyclic_group(2)))
        elif name == "s3":
            A = group_algebra(symmetric_group_3())
        elif name == "h8":
            A = kac_paljutkin()
        else:
            raise KeyError(f"unknown built-in algebra {name!r}")
        A.name = name
        _BUILTIN_CACHE[name] = A
    return _BUILTIN_CACHE[name]


_BUILTIN_CACHE: dict = {}
