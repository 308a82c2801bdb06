"""Comodule algebras, separability idempotents, quotients H//K, smash products.

The boundary/wall input data: an algebra with a coaction into H (x) A
(left), A (x) H (right), or H1 (x) B (x) H2 (bicomodule).  Coaction tensors:

* right:  coaction[i, j, p]   beta(e_i) = sum e_j (x) f_p   in A (x) H
* left:   coaction[i, p, j]   beta(e_i) = sum f_p (x) e_j   in H (x) A
* bi:     coaction[i, p, j, q]  in H1 (x) B (x) H2
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateError,
    InvalidInputError,
    NotAugmentedError,
    NotSeparableError,
)
from .hopf import (
    AxiomReport,
    FinHopfAlgebra,
    coopposite,
    haar_integral,
    tensor_product,
)


def _maxabs(a) -> float:
    return float(np.max(np.abs(a))) if np.asarray(a).size else 0.0


@dataclass
class AssocAlgebra:
    """A plain associative unital algebra by structure constants."""

    dim: int
    mult: np.ndarray
    unit: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        self.mult = np.asarray(self.mult, dtype=np.complex128)
        self.unit = np.asarray(self.unit, dtype=np.complex128)
        if not self.labels:
            self.labels = tuple(f"a{i}" for i in range(self.dim))

    @property
    def lmul(self):
        return np.einsum("aqp->apq", self.mult)

    @property
    def rmul(self):
        return np.einsum("qap->apq", self.mult)


def as_assoc(A: FinHopfAlgebra) -> AssocAlgebra:
    return AssocAlgebra(A.dim, A.mult, A.unit, A.basis_labels)


@dataclass
class ComoduleAlgebra:
    """An H-comodule algebra with optional augmentation and K-structure."""

    algebra: AssocAlgebra
    host: FinHopfAlgebra
    side: str                       # "left" | "right"
    coaction: np.ndarray
    augmentation: np.ndarray | None = None
    hopf: FinHopfAlgebra | None = None       # set when A = K <= H
    inclusion: np.ndarray | None = None      # (dim H, dim A), K basis in H
    name: str = "comodule"

    def __post_init__(self):
        self.coaction = np.asarray(self.coaction, dtype=np.complex128)
        a, d = self.algebra.dim, self.host.dim
        want = (a, a, d) if self.side == "right" else (a, d, a)
        if self.side not in ("left", "right") or self.coaction.shape != want:
            raise InvalidInputError("coaction tensor shape/side mismatch")
        if self.augmentation is not None:
            self.augmentation = np.asarray(self.augmentation, np.complex128)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def coaction_right_form(self) -> np.ndarray:
        """Coaction as [i, j(self), p(host)] regardless of side."""
        if self.side == "right":
            return self.coaction
        return np.einsum("ipj->ijp", self.coaction)


def verify_comodule_algebra(CA: ComoduleAlgebra, tol: float = 1e-10) -> AxiomReport:
    A, H = CA.algebra, CA.host
    beta = CA.coaction_right_form()
    r = {}
    lhs = np.einsum("ijk,kcr->ijcr", A.mult, beta)
    rhs = np.einsum("iap,jbq,abc,pqr->ijcr", beta, beta, A.mult, H.mult,
                    optimize=True)
    r["algebra_map"] = _maxabs(lhs - rhs)
    r["unit_map"] = _maxabs(np.einsum("i,ijp->jp", A.unit, beta)
                            - np.outer(A.unit, H.unit))
    lhs = np.einsum("ijp,jkq->ikqp", beta, beta)
    if CA.side == "right":
        # (beta (x) id) beta = (id (x) Delta) beta: inner leg = first Delta leg
        rhs = np.einsum("ikr,rqp->ikqp", beta, H.comult)
    else:
        # (Delta (x) id) beta = (id (x) beta) beta: outer leg = first Delta leg
        rhs = np.einsum("ikr,rpq->ikqp", beta, H.comult)
    r["coassociativity"] = _maxabs(lhs - rhs)
    r["counit"] = _maxabs(np.einsum("ijp,p->ij", beta, H.counit)
                          - np.eye(A.dim))
    if CA.augmentation is not None:
        aug = CA.augmentation
        r["augmentation_hom"] = max(
            _maxabs(np.einsum("ijk,k->ij", A.mult, aug) - np.outer(aug, aug)),
            abs(complex(A.unit @ aug) - 1.0))
    return AxiomReport(residuals=r, tol=tol)


def comodule_from_hopf_subalgebra(H: FinHopfAlgebra, K: FinHopfAlgebra,
                                  inclusion: np.ndarray,
                                  side: str = "right") -> ComoduleAlgebra:
    """K <= H as an H-comodule algebra; the coaction is the coproduct of K."""
    iota = np.asarray(inclusion, dtype=np.complex128)
    if side == "right":
        beta = np.einsum("ijt,pt->ijp", K.comult, iota)
    else:
        beta = np.einsum("itj,pt->ipj", K.comult, iota)
    return ComoduleAlgebra(as_assoc(K), H, side, beta,
                           augmentation=K.counit.copy(), hopf=K,
                           inclusion=iota, name=f"{K.name}<= {H.name}")


# ---------------------------------------------------------------------------
# separability idempotent


@dataclass
class SeparabilityIdempotent:
    """lambda = sum lam[p, q] e_p (x) e_q of an algebra."""

    parent: AssocAlgebra
    lam: np.ndarray


def separability_idempotent(A: AssocAlgebra,
                            tol: float = 1e-10) -> SeparabilityIdempotent:
    """Solve the defining linear system; unique for semisimple algebras.

    Conditions: (1) x lam^<1> (x) lam^<2> = lam^<1> (x) lam^<2> x for all
    basis x, (2) sum lam^<1> lam^<2> = 1; symmetry (3) and idempotency in
    A (x) A^op are asserted post hoc.
    """
    a = A.dim
    eye = np.eye(a)
    rows = []
    for i in range(a):
        rows.append(np.einsum("pP,qQ->pqPQ", A.lmul[i], eye).reshape(a * a, a * a)
                    - np.einsum("pP,qQ->pqPQ", eye, A.rmul[i]).reshape(a * a, a * a))
    rows.append(A.mult.reshape(a * a, a).T)
    M = np.vstack(rows)
    b = np.zeros(M.shape[0], dtype=np.complex128)
    b[-a:] = A.unit
    lam, *_ = np.linalg.lstsq(M, b, rcond=None)
    if np.linalg.norm(M @ lam - b) > 1e-8:
        raise NotSeparableError("no symmetric separability idempotent (no solution)")
    sv = np.linalg.svd(M, compute_uv=False)
    nullity = int(np.sum(sv < 1e-10 * sv[0]))
    if nullity:
        raise NotSeparableError(
            f"separability idempotent not unique (nullity {nullity})")
    lam = lam.reshape(a, a)
    checks = {
        "symmetry": _maxabs(lam - lam.T),
        "idempotent": _maxabs(
            np.einsum("pq,rs,pru,sqv->uv", lam, lam, A.mult, A.mult,
                      optimize=True) - lam),
    }
    if max(checks.values()) > tol:
        raise NotSeparableError(f"separability checks failed: {checks}")
    return SeparabilityIdempotent(A, lam)


def lambda_coaction_check(CA: ComoduleAlgebra, lam: np.ndarray,
                          tol: float = 1e-10) -> float:
    """Residual of sum beta(l^<1>)_13 beta(l^<2>)_23 = lambda_12 in A(x)A(x)H."""
    beta = CA.coaction_right_form()
    H = CA.host
    lhs = np.einsum("pq,pau,qbv,uvr->abr", lam, beta, beta, H.mult,
                    optimize=True)
    rhs = np.einsum("ab,r->abr", lam, H.unit)
    return _maxabs(lhs - rhs)


def boundary_element(CA: ComoduleAlgebra,
                     idem: SeparabilityIdempotent | None = None) -> np.ndarray:
    """h_A = sum lam^<1> eps(lam^<2>); the Haar integral when A = K."""
    if CA.augmentation is None:
        raise NotAugmentedError("comodule algebra carries no augmentation")
    if idem is None:
        idem = separability_idempotent(CA.algebra)
    return np.einsum("pq,q->p", idem.lam, CA.augmentation)


# ---------------------------------------------------------------------------
# quotient H // K = H / HK+


@dataclass
class HopfQuotient:
    """Numeric H // K with projection, section, and the left H-action."""

    host: FinHopfAlgebra
    sub: FinHopfAlgebra
    inclusion: np.ndarray
    dim: int
    project: np.ndarray = field(repr=False)    # (q, d): pi(h) = project @ h
    section: np.ndarray = field(repr=False)    # (d, q): columns e_j h_K
    action: np.ndarray = field(repr=False)     # (d, q, q): h_i . q

    def lift_functional(self, psi: np.ndarray) -> np.ndarray:
        """psi in Q^ as the element psi o pi of H^ (vanishes on HK+)."""
        return self.project.T @ np.asarray(psi, dtype=np.complex128)

    def class_of(self, h: np.ndarray) -> np.ndarray:
        return self.project @ np.asarray(h, dtype=np.complex128)

    def representative(self, q: np.ndarray) -> np.ndarray:
        """sigma(q) in H; already of the form h h_K."""
        return self.section @ np.asarray(q, dtype=np.complex128)


def quotient_h_mod_k(H: FinHopfAlgebra, K: FinHopfAlgebra,
                     inclusion: np.ndarray) -> HopfQuotient:
    """H // K := H / HK+ realized as H h_K, with deterministic pivot basis."""
    iota = np.asarray(inclusion, dtype=np.complex128)
    hK = iota @ haar_integral(K).coeffs
    d = H.dim
    RhK = np.einsum("i,jik->kj", hK, H.mult)     # column j = e_j h_K
    _, R, piv = scipy.linalg.qr(RhK, pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0:
        raise DegenerateError("right multiplication by h_K vanished")
    rank = int(np.sum(diag > 1e-10 * diag[0]))
    cols = np.sort(piv[:rank])
    B = RhK[:, cols]                              # (d, q)
    P = np.linalg.pinv(B) @ RhK                   # pi in the pivot basis
    if _maxabs(P @ B - np.eye(rank)) > 1e-9:
        raise DegenerateError("projection/section mismatch in H//K")
    action = np.einsum("qk,akj,jt->aqt", P, np.einsum("aqp->apq", H.mult), B)
    return HopfQuotient(H, K, iota, rank, P, B, action)


# ---------------------------------------------------------------------------
# module algebras and smash products


@dataclass
class ModuleAlgebra:
    """A left H-module algebra: action[p, i, j] means e_p |> m_i = sum m_j."""

    algebra: AssocAlgebra
    host: FinHopfAlgebra
    action: np.ndarray

    def __post_init__(self):
        self.action = np.asarray(self.action, dtype=np.complex128)


def verify_module_algebra(M: ModuleAlgebra, tol: float = 1e-10) -> AxiomReport:
    A, H, act = M.algebra, M.host, M.action
    r = {}
    lhs = np.einsum("pqr,rij->pqij", H.mult, act)
    rhs = np.einsum("qit,ptj->pqij", act, act)
    r["module_assoc"] = _maxabs(lhs - rhs)
    r["module_unit"] = _maxabs(np.einsum("p,pij->ij", H.unit, act) - np.eye(A.dim))
    lhs = np.einsum("ijk,pkl->pijl", A.mult, act)
    rhs = np.einsum("pab,ais,bjt,stl->pijl", H.comult, act, act, A.mult,
                    optimize=True)
    r["module_algebra"] = _maxabs(lhs - rhs)
    r["acts_on_unit"] = _maxabs(np.einsum("i,pij->pj", A.unit, act)
                                - np.outer(H.counit, A.unit))
    return AxiomReport(residuals=r, tol=tol)


def trivial_module_algebra(H: FinHopfAlgebra) -> ModuleAlgebra:
    act = H.counit.reshape(H.dim, 1, 1).copy()
    return ModuleAlgebra(AssocAlgebra(1, np.ones((1, 1, 1)), np.ones(1)), H, act)


def dual_module_algebra(H: FinHopfAlgebra) -> ModuleAlgebra:
    """M = H^ with (h |> phi)(x) = phi(x h) (rough-boundary data)."""
    from .hopf import dual

    Hh = dual(H)
    act = np.einsum("jpi->pij", H.mult)
    return ModuleAlgebra(as_assoc(Hh), H, act)


def smash_product(M: ModuleAlgebra, H: FinHopfAlgebra) -> ComoduleAlgebra:
    """A = M^op # H^cop as a left H-comodule algebra.

    Product: (a # h)(b # g) = sum (h^(2) |> b) a # h^(1) g;
    coaction: beta(a # h) = sum h^(1) (x) (a # h^(2)).
    """
    if M.host is not H:
        raise InvalidInputError("module algebra host mismatch")
    a, d = M.algebra.dim, H.dim
    n = a * d
    mult = np.einsum("pab,bjt,tik,aqr->ipjqkr", H.comult, M.action,
                     M.algebra.mult, H.mult, optimize=True).reshape(n, n, n)
    unit = np.kron(M.algebra.unit, H.unit)
    beta = np.einsum("puv,iI->ipuIv", H.comult, np.eye(a)).reshape(n, d, n)
    alg = AssocAlgebra(n, mult, unit,
                       tuple(f"{x}#{h}" for x in M.algebra.labels
                             for h in H.basis_labels))
    return ComoduleAlgebra(alg, H, "left", beta, name=f"smash({a}x{d})")


# ---------------------------------------------------------------------------
# bicomodule algebras and folding


@dataclass
class BicomoduleAlgebra:
    """An H1|H2-bicomodule algebra; coaction[i, p, j, q] in H1 (x) B (x) H2."""

    algebra: AssocAlgebra
    host1: FinHopfAlgebra
    host2: FinHopfAlgebra
    coaction: np.ndarray
    augmentation: np.ndarray | None = None
    hopf: FinHopfAlgebra | None = None
    inclusion: np.ndarray | None = None
    name: str = "bicomodule"

    def __post_init__(self):
        self.coaction = np.asarray(self.coaction, dtype=np.complex128)

    @property
    def dim(self):
        return self.algebra.dim

    def left_coaction(self) -> np.ndarray:
        return np.einsum("ipjq,q->ipj", self.coaction, self.host2.counit)

    def right_coaction(self) -> np.ndarray:
        return np.einsum("ipjq,p->ijq", self.coaction, self.host1.counit)


def verify_bicomodule_algebra(B: BicomoduleAlgebra, tol: float = 1e-10) -> AxiomReport:
    A, H1, H2, beta = B.algebra, B.host1, B.host2, B.coaction
    r = {}
    lhs = np.einsum("ijk,kplq->ijplq", A.mult, beta)
    rhs = np.einsum("ipaq,jrbs,abl,pru,qsv->ijulv", beta, beta, A.mult,
                    H1.mult, H2.mult, optimize=True)
    r["algebra_map"] = _maxabs(lhs - rhs)
    r["unit_map"] = _maxabs(np.einsum("i,ipjq->pjq", A.unit, beta)
                            - np.einsum("p,j,q->pjq", H1.unit, A.unit, H2.unit))
    bl, br = B.left_coaction(), B.right_coaction()
    lhs = np.einsum("ipj,juk->ipuk", bl, bl)
    rhs = np.einsum("irk,rpu->ipuk", bl, H1.comult)
    r["left_coassoc"] = _maxabs(lhs - rhs)
    lhs = np.einsum("ijq,jku->ikqu", br, br)
    rhs = np.einsum("ikr,rqu->ikqu", br, H2.comult)
    r["right_coassoc"] = _maxabs(lhs - rhs)
    r["counit"] = _maxabs(np.einsum("ipjq,p,q->ij", beta, H1.counit, H2.counit)
                          - np.eye(A.dim))
    mixed = np.einsum("ipj,jkq->ipkq", bl, br)
    r["mixed_compat"] = max(_maxabs(mixed - beta),
                            _maxabs(np.einsum("ijq,jpk->ipkq", br, bl) - beta))
    return AxiomReport(residuals=r, tol=tol)


def bicomodule_from_hopf_subalgebra(H: FinHopfAlgebra, K: FinHopfAlgebra,
                                    inclusion: np.ndarray) -> BicomoduleAlgebra:
    """K <= H as an H|H-bicomodule algebra via (Delta (x) id) Delta."""
    iota = np.asarray(inclusion, dtype=np.complex128)
    beta = np.einsum("iajb,pa,qb->ipjq", K.comult2, iota, iota)
    return BicomoduleAlgebra(as_assoc(K), H, H, beta,
                             augmentation=K.counit.copy(), hopf=K,
                             inclusion=iota, name=f"wall:{K.name}")


def bicomodule_from_pair(left: ComoduleAlgebra,
                         right: ComoduleAlgebra) -> BicomoduleAlgebra:
    """Combine a left H1-coaction and a right H2-coaction on one algebra."""
    if left.side != "left" or right.side != "right":
        raise InvalidInputError("expected (left, right) comodule pair")
    if left.algebra.mult.shape != right.algebra.mult.shape or \
            _maxabs(left.algebra.mult - right.algebra.mult) > 1e-12:
        raise InvalidInputError("the two coactions live on different algebras")
    bl, br = left.coaction, right.coaction          # [i,p,j], [i,j,q]
    beta = np.einsum("ipj,jkq->ipkq", bl, br)
    if _maxabs(np.einsum("ijq,jpk->ipkq", br, bl) - beta) > 1e-10:
        raise InvalidInputError("left/right coactions do not commute")
    return BicomoduleAlgebra(left.algebra, left.host, right.host, beta,
                             augmentation=left.augmentation)


def fold(B: BicomoduleAlgebra) -> ComoduleAlgebra:
    """Folding trick: an H1|H2-bicomodule algebra as a left H1 (x) H2^cop one."""
    Hf = tensor_product(B.host1, coopposite(B.host2))
    a, d1, d2 = B.dim, B.host1.dim, B.host2.dim
    beta = np.einsum("ipjq->ipqj", B.coaction).reshape(a, d1 * d2, a)
    return ComoduleAlgebra(B.algebra, Hf, "left", beta,
                           augmentation=B.augmentation,
                           name=f"fold:{B.name}")
