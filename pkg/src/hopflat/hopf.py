"""Finite-dimensional C* Hopf algebras as structure-constant tensors.

Conventions over a fixed basis e_0, ..., e_{d-1}:

* ``mult[i, j, k]``:   e_i e_j = sum_k mult[i, j, k] e_k
* ``unit``:            coefficient vector of 1
* ``comult[i, j, k]``: Delta(e_i) = sum_{j,k} comult[i, j, k] e_j (x) e_k
* ``counit[i]``:       eps(e_i)
* ``antipode``:        coeffs(S x) = antipode @ coeffs(x)
* ``star``:            coeffs(x^*) = star @ conj(coeffs(x))  (antilinear)

All scalars are double-precision complex.  Default tolerances: 1e-10 for
structural identities, 1e-8 for spectral checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidInputError,
    InvalidStarError,
    NotSemisimpleError,
    ParentMismatchError,
)

TOL_STRUCT = 1e-10
TOL_SPECTRAL = 1e-8


def _c(a) -> np.ndarray:
    return np.asarray(a, dtype=np.complex128)


class FinHopfAlgebra:
    """A finite-dimensional C* Hopf algebra given by its structure tensors.

    Instances are immutable by convention; derived data (Haar integral,
    dual, operator families) is cached lazily.
    """

    def __init__(self, dim, basis_labels, mult, unit, comult, counit,
                 antipode, star, name=""):
        self.dim = int(dim)
        self.basis_labels = tuple(str(s) for s in basis_labels)
        self.mult = _c(mult)
        self.unit = _c(unit)
        self.comult = _c(comult)
        self.counit = _c(counit)
        self.antipode = _c(antipode)
        self.star = _c(star)
        self.name = name or "hopf"
        d = self.dim
        if self.mult.shape != (d, d, d) or self.comult.shape != (d, d, d):
            raise InvalidInputError("mult/comult tensors must be (d, d, d)")
        if self.unit.shape != (d,) or self.counit.shape != (d,):
            raise InvalidInputError("unit/counit must be d-vectors")
        if self.antipode.shape != (d, d) or self.star.shape != (d, d):
            raise InvalidInputError("antipode/star must be (d, d) matrices")
        self._cache: dict = {}

    # -- elements -----------------------------------------------------

    def element(self, coeffs) -> "AlgebraElement":
        coeffs = _c(coeffs)
        if coeffs.shape != (self.dim,):
            raise ParentMismatchError(
                f"coefficient vector of length {coeffs.shape} for dim {self.dim}")
        return AlgebraElement(self, coeffs)

    def basis_element(self, i: int) -> "AlgebraElement":
        v = np.zeros(self.dim, dtype=np.complex128)
        v[i] = 1.0
        return AlgebraElement(self, v)

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, self.unit.copy())

    def __repr__(self):
        return f"FinHopfAlgebra({self.name!r}, dim={self.dim})"

    # -- cached operator families (matrices acting on coefficient vectors)

    def _cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def lmul(self) -> np.ndarray:
        """lmul[a] = matrix of x -> e_a x."""
        return self._cached("lmul", lambda: np.einsum("aqp->apq", self.mult))

    @property
    def rmul(self) -> np.ndarray:
        """rmul[a] = matrix of x -> x e_a."""
        return self._cached("rmul", lambda: np.einsum("qap->apq", self.mult))

    @property
    def comult2(self) -> np.ndarray:
        """comult2[i, a, b, c]: Delta_2(e_i) = sum e_a (x) e_b (x) e_c."""
        return self._cached(
            "comult2",
            lambda: np.einsum("itc,tab->iabc", self.comult, self.comult))


@dataclass
class AlgebraElement:
    """An element of a FinHopfAlgebra (or plain algebra) by coefficients."""

    parent: object
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = _c(self.coeffs)

    def _check(self, other):
        if other.parent is not self.parent:
            raise ParentMismatchError("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.parent, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.parent, self.coeffs - other.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return AlgebraElement(self.parent, self.coeffs * other)
        self._check(other)
        return multiply(self.parent, self, other)

    def __rmul__(self, scalar):
        return AlgebraElement(self.parent, self.coeffs * scalar)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


# ---------------------------------------------------------------------------
# basic operations


def multiply(A: FinHopfAlgebra, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Product x*y via the mult tensor."""
    if x.parent is not A or y.parent is not A:
        raise ParentMismatchError("multiply: elements not in the given algebra")
    return AlgebraElement(A, np.einsum("i,j,ijk->k", x.coeffs, y.coeffs, A.mult))


def comultiply(A: FinHopfAlgebra, x: AlgebraElement) -> np.ndarray:
    """Delta(x) as a d*d coefficient vector (row-major (j, k))."""
    if x.parent is not A:
        raise ParentMismatchError("comultiply: element not in the given algebra")
    return np.einsum("i,ijk->jk", x.coeffs, A.comult).reshape(-1)


def counit(A: FinHopfAlgebra, x: AlgebraElement) -> complex:
    if x.parent is not A:
        raise ParentMismatchError("counit: element not in the given algebra")
    return complex(x.coeffs @ A.counit)


def antipode(A: FinHopfAlgebra, x: AlgebraElement) -> AlgebraElement:
    if x.parent is not A:
        raise ParentMismatchError("antipode: element not in the given algebra")
    return AlgebraElement(A, A.antipode @ x.coeffs)


def star(A: FinHopfAlgebra, x: AlgebraElement) -> AlgebraElement:
    if x.parent is not A:
        raise ParentMismatchError("star: element not in the given algebra")
    return AlgebraElement(A, A.star @ np.conj(x.coeffs))


def iterated_comult(A: FinHopfAlgebra, coeffs: np.ndarray, n: int) -> np.ndarray:
    """Delta_{n-1} applied to coeffs, as an ndarray with n axes of size d.

    Built left-nested; coassociativity makes the nesting immaterial (and a
    test asserts so).
    """
    coeffs = _c(coeffs)
    if n < 1:
        raise InvalidInputError("iterated_comult needs n >= 1")
    out = coeffs
    for _ in range(n - 1):
        out = np.tensordot(out, A.comult, axes=([-1], [0]))
    return out


def is_commutative(A: FinHopfAlgebra, tol: float = TOL_STRUCT) -> bool:
    return bool(np.max(np.abs(A.mult - np.einsum("jik->ijk", A.mult))) <= tol)


def is_cocommutative(A: FinHopfAlgebra, tol: float = TOL_STRUCT) -> bool:
    return bool(np.max(np.abs(A.comult - np.einsum("ikj->ijk", A.comult))) <= tol)


# ---------------------------------------------------------------------------
# axiom verification


@dataclass
class AxiomReport:
    """Per-axiom max residuals of the defining tensor identities."""

    residuals: dict
    tol: float
    passed: bool = field(init=False)
    worst: float = field(init=False)

    def __post_init__(self):
        self.worst = max(self.residuals.values())
        self.passed = self.worst <= self.tol


def _maxabs(a) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def verify_hopf_axioms(A: FinHopfAlgebra, tol: float = TOL_STRUCT) -> AxiomReport:
    """Check all Hopf/C* axioms componentwise; pass iff every residual <= tol."""
    for t in (A.mult, A.unit, A.comult, A.counit, A.antipode, A.star):
        if not np.all(np.isfinite(t)):
            raise InvalidInputError("structure tensors contain NaN/Inf")
    d, m, c, u, eps, S, st = A.dim, A.mult, A.comult, A.unit, A.counit, A.antipode, A.star
    eye = np.eye(d)
    r = {}

    # associativity / unit laws, chunked over the first index for big d
    assoc = 0.0
    for i in range(d):
        lhs = np.einsum("jk,kln->jln", m[i], m)
        rhs = np.einsum("jlk,kn->jln", m, m[i])
        assoc = max(assoc, _maxabs(lhs - rhs))
    r["associativity"] = assoc
    r["unit"] = max(_maxabs(np.einsum("i,ijk->jk", u, m) - eye),
                    _maxabs(np.einsum("j,ijk->ik", u, m) - eye))

    coassoc = 0.0
    for i in range(d):
        # sum_a c[i,a,z] c[a,x,y]  ==  sum_b c[i,x,b] c[b,y,z]
        lhs = np.einsum("az,axy->xyz", c[i], c)
        rhs = np.einsum("xb,byz->xyz", c[i], c)
        coassoc = max(coassoc, _maxabs(lhs - rhs))
    r["coassociativity"] = coassoc
    r["counit"] = max(_maxabs(np.einsum("iab,a->ib", c, eps) - eye),
                      _maxabs(np.einsum("iab,b->ia", c, eps) - eye))

    # bialgebra: Delta(xy) = Delta(x)Delta(y) as d^2 x d^2 matrices
    c2 = c.reshape(d, d * d).T                      # [(ab), k]
    m2 = m.reshape(d * d, d)                        # [(ij), k]
    lhs = c2 @ m2.T                                 # [(ab), (ij)]
    U = np.einsum("ipq,pra->iaqr", c, m).reshape(d * d, d * d)   # [(ia),(qr)]
    X = np.einsum("jrs,qsb->qrjb", c, m).reshape(d * d, d * d)   # [(qr),(jb)]
    rhs = (U @ X).reshape(d, d, d, d)               # [i,a,j,b]
    lhs = lhs.reshape(d, d, d, d).transpose(2, 0, 3, 1)          # [i,a,j,b]
    r["comult_homomorphism"] = _maxabs(lhs - rhs)
    del lhs, rhs, U, X
    r["counit_homomorphism"] = _maxabs(np.einsum("ijk,k->ij", m, eps)
                                       - np.outer(eps, eps))
    r["comult_unit"] = _maxabs(np.einsum("i,iab->ab", u, c) - np.outer(u, u))
    r["counit_unit"] = abs(complex(u @ eps) - 1.0)

    # antipode: sum S(x^(1)) x^(2) = eps(x) 1 = sum x^(1) S(x^(2))
    T = np.einsum("iab,pa->ipb", c, S)
    left = np.einsum("ipb,pbk->ik", T, m)
    T = np.einsum("iab,pb->iap", c, S)
    right = np.einsum("iap,apk->ik", T, m)
    target = np.outer(eps, u)
    r["antipode_left"] = _maxabs(left - target)
    r["antipode_right"] = _maxabs(right - target)
    r["antipode_involution"] = _maxabs(S @ S - eye)

    # star: antilinear involution, antihomomorphism, coalgebra *-map
    r["star_involution"] = _maxabs(st @ np.conj(st) - eye)
    lhs = np.einsum("ijk,lk->ijl", np.conj(m), st)
    rhs = np.einsum("pj,qi,pql->ijl", st, st, m)
    r["star_antihomomorphism"] = _maxabs(lhs - rhs)
    lhs = np.einsum("pi,pab->iab", st, c)
    rhs = np.einsum("ipq,ap,bq->iab", np.conj(c), st, st)
    r["star_comult"] = _maxabs(lhs - rhs)

    return AxiomReport(residuals=r, tol=tol)


# ---------------------------------------------------------------------------
# Haar integral and inner product


def haar_integral(A: FinHopfAlgebra) -> AlgebraElement:
    """The unique normalized two-sided integral, by linear solve.

    Solves { e_i h = eps(e_i) h, h e_i = eps(e_i) h  for all i, eps(h)=1 }
    in least squares and checks the residual; verifies h^2 = h, S(h) = h,
    h* = h and cocommutativity of Delta(h) post hoc.
    """
    if "haar" in A._cache:
        return A._cache["haar"]
    d = A.dim
    rows = [A.lmul[i] - A.counit[i] * np.eye(d) for i in range(d)]
    rows += [A.rmul[i] - A.counit[i] * np.eye(d) for i in range(d)]
    M = np.vstack(rows + [A.counit[None, :]])
    b = np.zeros(2 * d * d + 1, dtype=np.complex128)
    b[-1] = 1.0
    h, *_ = np.linalg.lstsq(M, b, rcond=None)
    if np.linalg.norm(M @ h - b) > 1e-8 * max(1.0, np.linalg.norm(b)):
        raise NotSemisimpleError(
            f"{A.name}: no normalized two-sided integral (residual too large)")
    hh = A.element(h)
    checks = [
        _maxabs((multiply(A, hh, hh) - hh).coeffs),
        _maxabs((antipode(A, hh) - hh).coeffs),
        _maxabs((star(A, hh) - hh).coeffs),
        _maxabs(np.einsum("i,ijk->jk", h, A.comult)
                - np.einsum("i,ikj->jk", h, A.comult)),
    ]
    if max(checks) > 1e-8:
        raise NotSemisimpleError(f"{A.name}: Haar integral fails its properties")
    A._cache["haar"] = hh
    return hh


def dual(A: FinHopfAlgebra) -> FinHopfAlgebra:
    """The dual C* Hopf algebra on the dual basis."""
    if "dual" in A._cache:
        return A._cache["dual"]
    D = FinHopfAlgebra(
        dim=A.dim,
        basis_labels=tuple(f"{s}^" for s in A.basis_labels),
        mult=np.einsum("kij->ijk", A.comult),
        unit=A.counit.copy(),
        comult=np.einsum("jki->ijk", A.mult),
        counit=A.unit.copy(),
        antipode=A.antipode.T.copy(),
        star=A.antipode.T @ A.star.conj().T,
        name=f"dual:{A.name}",
    )
    A._cache["dual"] = D
    return D


def haar_measure(A: FinHopfAlgebra) -> AlgebraElement:
    """Haar integral of the dual, i.e. the Haar measure phi_{H^} on A."""
    return haar_integral(dual(A))


def inner_product(A: FinHopfAlgebra, x: AlgebraElement, y: AlgebraElement) -> complex:
    """<x, y> = phi_{H^}(x* y), the Haar-induced Hilbert structure."""
    phi = haar_measure(A).coeffs
    return complex(np.einsum("k,k->", multiply(A, star(A, x), y).coeffs, phi))


def gram_matrix(A: FinHopfAlgebra, tol: float = TOL_SPECTRAL) -> np.ndarray:
    """Gram matrix G[i,j] = <e_i, e_j>; checked Hermitian positive definite."""
    if "gram" in A._cache:
        return A._cache["gram"]
    phi = haar_measure(A).coeffs
    G = np.einsum("pi,pjk,k->ij", A.star, A.mult, phi)
    if _maxabs(G - G.conj().T) > tol:
        raise InvalidStarError(f"{A.name}: Gram matrix not Hermitian")
    w = np.linalg.eigvalsh(0.5 * (G + G.conj().T))
    if w.min() < -tol or w.min() <= 0 and abs(w.min()) > tol:
        raise InvalidStarError(f"{A.name}: Gram matrix not positive definite")
    A._cache["gram"] = G
    return G


# ---------------------------------------------------------------------------
# opposites, tensor products, quantum double


def opposite(A: FinHopfAlgebra) -> FinHopfAlgebra:
    """H^op; the antipode is S^{-1} which equals S in the semisimple case."""
    return FinHopfAlgebra(
        A.dim, A.basis_labels,
        mult=np.einsum("jik->ijk", A.mult),
        unit=A.unit, comult=A.comult, counit=A.counit,
        antipode=A.antipode, star=A.star, name=f"op:{A.name}")


def coopposite(A: FinHopfAlgebra) -> FinHopfAlgebra:
    return FinHopfAlgebra(
        A.dim, A.basis_labels,
        mult=A.mult, unit=A.unit,
        comult=np.einsum("ikj->ijk", A.comult),
        counit=A.counit, antipode=A.antipode, star=A.star,
        name=f"cop:{A.name}")


def tensor_product(A: FinHopfAlgebra, B: FinHopfAlgebra) -> FinHopfAlgebra:
    """H1 (x) H2 with row-major basis (i1, i2)."""
    dA, dB = A.dim, B.dim
    d = dA * dB
    labels = tuple(f"{a}|{b}" for a in A.basis_labels for b in B.basis_labels)
    mult = np.einsum("ijk,IJK->iIjJkK", A.mult, B.mult).reshape(d, d, d)
    comult = np.einsum("ijk,IJK->iIjJkK", A.comult, B.comult).reshape(d, d, d)
    unit = np.kron(A.unit, B.unit)
    cou = np.kron(A.counit, B.counit)
    return FinHopfAlgebra(
        d, labels, mult, unit, comult, cou,
        antipode=np.kron(A.antipode, B.antipode),
        star=np.kron(A.star, B.star),
        name=f"({A.name})x({B.name})")


def drinfeld_double(A: FinHopfAlgebra) -> FinHopfAlgebra:
    """D(H) = H^hat^cop |><| H on the row-major basis (phi_i, e_j).

    Multiplication per the double product formula
        (phi (x) x)(psi (x) y) = sum phi * psi(S(x^(3)) . x^(1)) (x) x^(2) y,
    star forced by *-closure of both canonical embeddings, antipode from the
    displayed double antipode (S^{-1} = S here).
    """
    if "double" in A._cache:
        return A._cache["double"]
    d = A.dim
    D = d * d
    Ah = dual(A)
    m, c, S = A.mult, A.comult, A.antipode
    c2 = A.comult2
    mh, ch = Ah.mult, Ah.comult
    ch2 = Ah.comult2

    # SE[w, t, u, r] = r-coefficient of S(e_w) e_t e_u
    SE = np.einsum("yw,ytz,zur->wtur", S, m, m)
    # product (phi_i (x) e_j)(psi_k (x) e_l) with Delta_2(e_j) legs (a, b, cc):
    # chi_w = psi_k(S(e_cc) e_w e_a) = SE[cc, w, a, k];
    # (phi_i * chi)_p = sum_w mh[i, w, p] chi_w;  H-part: e_b e_l.
    mult_D = np.einsum(
        "jabc,cwak,iwp,blq->ijklpq", c2, SE, mh, m, optimize=True
    ).reshape(D, D, D)

    # Delta_D(phi_i (x) e_j) = sum (phi^(2) (x) x^(1)) (x) (phi^(1) (x) x^(2))
    comult_D = np.einsum("ipq,jab->ijqapb", ch, c).reshape(D, D, D)
    unit_D = np.kron(A.counit, A.unit)
    counit_D = np.kron(A.unit, A.counit)

    # antipode: S_D(phi_i (x) e_j)
    #   = sum phi^(1)(x^(3)) phi^(3)(S x^(1)) S^(phi^(2)) (x) S(x^(2))
    antipode_D = np.einsum(
        "juvw,iwbc,cu,bp,qv->pqij", c2, ch2, S, Ah.antipode, S, optimize=True
    ).reshape(D, D)

    # star: (phi (x) x)* = (1^ (x) x*)(phi* (x) 1), via the double product
    emb_h = np.einsum("a,bp->abp", A.counit, np.eye(d)).reshape(D, d)   # 1^ (x) e_p
    emb_f = np.einsum("aq,b->abq", np.eye(d), A.unit).reshape(D, d)     # phi_q (x) 1
    prod_hp_fq = np.einsum("xp,yq,xyz->pqz", emb_h, emb_f, mult_D)
    star_D = np.einsum("pj,qi,pqz->zij", A.star, Ah.star, prod_hp_fq).reshape(D, D)

    labels = tuple(f"{f}(x){h}" for f in Ah.basis_labels for h in A.basis_labels)
    Dbl = FinHopfAlgebra(D, labels, mult_D, unit_D, comult_D, counit_D,
                         antipode_D, star_D, name=f"double:{A.name}")
    rep = verify_hopf_axioms(Dbl, tol=1e-9)
    if not rep.passed:
        raise NotSemisimpleError(
            f"double:{A.name} fails Hopf axioms (worst {rep.worst:.3e})")
    A._cache["double"] = Dbl
    return Dbl


def double_embeddings(A: FinHopfAlgebra):
    """Embedding matrices (H^hat^cop -> D(H), H -> D(H)) as (d^2, d) arrays.

    Column i of the first is phi_i (x) 1; column j of the second 1^ (x) e_j.
    """
    d = A.dim
    f = np.zeros((d * d, d), dtype=np.complex128)
    hmat = np.zeros((d * d, d), dtype=np.complex128)
    for i in range(d):
        f[:, i] = np.kron(np.eye(d)[i], A.unit)
        hmat[:, i] = np.kron(A.counit, np.eye(d)[i])
    return f, hmat


# ---------------------------------------------------------------------------
# pairings


@dataclass
class Pairing:
    """A bilinear Hopf pairing <.,.>: J (x) K -> C given by its matrix."""

    left: FinHopfAlgebra
    right: FinHopfAlgebra
    matrix: np.ndarray

    def value(self, x: AlgebraElement, y: AlgebraElement) -> complex:
        return complex(x.coeffs @ self.matrix @ y.coeffs)


def canonical_pairing(A: FinHopfAlgebra) -> Pairing:
    """<phi_i, e_j> = delta_ij between dual(A) and A."""
    return Pairing(dual(A), A, np.eye(A.dim, dtype=np.complex128))


def verify_pairing(P: Pairing, tol: float = TOL_STRUCT) -> AxiomReport:
    J, K, lam = P.left, P.right, P.matrix
    r = {}
    lhs = np.einsum("ijk,ka->ija", J.mult, lam)
    rhs = np.einsum("abc,ib,jc->ija", K.comult, lam, lam)
    r["mult_left"] = _maxabs(lhs - rhs)
    lhs = np.einsum("abk,ik->iab", K.mult, lam)
    rhs = np.einsum("ipq,pa,qb->iab", J.comult, lam, lam)
    r["mult_right"] = _maxabs(lhs - rhs)
    r["unit_left"] = _maxabs(np.einsum("i,ia->a", J.unit, lam) - K.counit)
    r["unit_right"] = _maxabs(np.einsum("a,ia->i", K.unit, lam) - J.counit)
    return AxiomReport(residuals=r, tol=tol)
