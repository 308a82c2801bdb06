"""Triangle operators, recursive ribbon operators, boundary ribbons,
condensation generators, and excitation diagnostics.

Bulk ribbon operators are labeled by H (x) H^ (the dual of the quantum
double); the recursion splits the label with the coproduct of D_B(H)^dual,

  F^{h,phi}(rho1 u rho2)
    = sum_k F^{h^(1), k^}(rho1) F^{S(k^(3)) h^(2) k^(1), phi(k^(2) .)}(rho2),

shared by types A and B (the two types differ only in multiplication).
Bulk-to-boundary ribbons over a Hopf subalgebra K <= H carry labels in
(H // K) (x) K^ and use the same recursion with K-sums and class labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .comodule import HopfQuotient, quotient_h_mod_k
from .errors import (
    InvalidInputError,
    TooLargeError,
    UnsupportedConfigurationError,
)
from .hopf import FinHopfAlgebra, dual, haar_integral
from .lattice import Ribbon, Triangle
from .operators import (
    FactorizedOp,
    ModelSpec,
    StateVector,
    _hopf_families,
    hamiltonian,
    random_state,
)

_CORE_CAP = 80_000_000  # entries allowed in a ribbon label core


@dataclass
class RibbonLabel:
    """A ribbon label (h, phi); h in H (or a class in H//K), phi in H^ (K^)."""

    h: np.ndarray
    phi: np.ndarray

    def vector(self) -> np.ndarray:
        return np.kron(np.asarray(self.h, dtype=np.complex128),
                       np.asarray(self.phi, dtype=np.complex128))


def dual_double_coproduct(H: FinHopfAlgebra) -> np.ndarray:
    """Coproduct tensor of D_B(H)^dual: (a, b) -> (p, q) (x) (r, s)."""
    if "ribbon_coproduct" in H._cache:
        return H._cache["ribbon_coproduct"]
    d = H.dim
    m, c, S = H.mult, H.comult, H.antipode
    c2 = H.comult2
    SE = np.einsum("yw,ytz,zur->wtur", S, m, m)   # [S(e_w) e_t e_u]_r
    C = np.einsum("apt,quvw,wtur,vsb->abpqrs", c, c2, SE, m,
                  optimize=True).reshape(d * d, d * d, d * d)
    H._cache["ribbon_coproduct"] = C
    return C


def _split_sizes(n: int, split: str) -> int:
    if split == "mid":
        return n // 2
    if split == "left":
        return 1
    if split == "right":
        return n - 1
    raise InvalidInputError(f"unknown split rule {split!r}")


def _label_cores(C: np.ndarray, ell: np.ndarray, n: int, split: str) -> np.ndarray:
    """Iterated label coproduct along the split tree, batched recursion."""
    D = C.shape[0]
    if D ** n > _CORE_CAP:
        raise TooLargeError(f"ribbon core D^{n} = {D ** n} too large")

    def rec(V: np.ndarray, k: int) -> np.ndarray:
        B = V.shape[1]
        if k == 1:
            return V
        k1 = _split_sizes(k, split)
        T = np.tensordot(C, V, axes=([0], [0]))      # (beta, gamma, B)
        T = rec(T.reshape(D, D * B), k1)             # (D^k1, gamma*B)
        T = T.reshape(-1, D, B)
        T = np.swapaxes(T, 0, 1).reshape(D, -1)      # (gamma, D^k1*B)
        T = rec(T, k - k1)                           # (D^(k-k1), D^k1*B)
        T = T.reshape(-1, D ** k1, B)
        T = np.swapaxes(T, 0, 1)                     # (D^k1, D^(k-k1), B)
        return T.reshape(D ** k, B)

    out = rec(np.asarray(ell, dtype=np.complex128).reshape(-1, 1), n)
    return out.reshape((D,) * n)


# ---------------------------------------------------------------------------
# triangle operators


def _triangle_case(tri: Triangle) -> str:
    """Edge-operator kind for each of the eight displayed triangle cases."""
    if tri.kind == "direct":
        if tri.chirality == "R":
            return "T-" if tri.along else "T+"
        return "Tt+" if tri.along else "Tt-"
    if tri.chirality == "R":
        return "L-" if tri.along else "L+"
    return "Lt+" if tri.along else "Lt-"


def _ribbon_host(model: ModelSpec, tri: Triangle) -> FinHopfAlgebra:
    sp = model.edge_spaces[tri.edge]
    if sp.kind != "hopf":
        raise UnsupportedConfigurationError("ribbon crosses a non-bulk edge")
    return sp.data


def _triangle_leg(model: ModelSpec, H: FinHopfAlgebra, tri: Triangle):
    """(edge, family, contraction (r, D)) for a bulk triangle.

    Direct triangles keep the H^ label part (eps on H), dual triangles the
    H part (eps^ on H^).
    """
    space = model.edge_spaces[tri.edge]
    if space.kind != "hopf" or space.data is not H:
        raise UnsupportedConfigurationError(
            "bulk ribbon triangle on a non-bulk edge")
    d = H.dim
    fam = _hopf_families(H)[_triangle_case(tri)]
    if tri.kind == "direct":
        contract = np.einsum("a,bB->Bab", H.counit,
                             np.eye(d)).reshape(d, d * d)
    else:
        contract = np.einsum("aA,b->Aab", np.eye(d), H.unit).reshape(d, d * d)
    return tri.edge, fam, contract


def triangle_operator(model: ModelSpec, tri: Triangle, label) -> FactorizedOp:
    """F^{h,phi}(tau) for a single triangle."""
    H = _ribbon_host(model, tri)
    ell = label.vector() if isinstance(label, RibbonLabel) else \
        np.asarray(label, dtype=np.complex128)
    edge, fam, contract = _triangle_leg(model, H, tri)
    return FactorizedOp(model, [(edge, fam)], contract @ ell,
                        name=f"F({tri.kind}{tri.chirality})")


def _assemble_ribbon(model, legsdata, C, ell, n, split):
    core = _label_cores(C, ell, n, split)
    legs = []
    for i, (edge, fam, contract) in enumerate(legsdata):
        core = np.moveaxis(np.tensordot(contract, core, axes=([1], [i])), 0, i)
        legs.append((edge, fam))
    return legs, core


def ribbon_operator(model: ModelSpec, rho: Ribbon, label,
                    split: str = "mid") -> FactorizedOp:
    """F^{h,phi}(rho) by recursive label splitting (midpoint by default;
    "left"/"right" realize other decompositions, equal by coassociativity)."""
    tris = rho.triangles
    H = _ribbon_host(model, tris[0])
    ell = label.vector() if isinstance(label, RibbonLabel) else \
        np.asarray(label, dtype=np.complex128)
    if ell.shape != (H.dim * H.dim,):
        raise InvalidInputError("ribbon label must live in H (x) H^")
    C = dual_double_coproduct(H)
    legsdata = [_triangle_leg(model, H, t) for t in tris]
    legs, core = _assemble_ribbon(model, legsdata, C, ell, len(tris), split)
    return FactorizedOp(model, legs, core, name=f"F(rho{len(tris)})")


def _ribbon_core_map(model, rho, split="mid"):
    """(legs, M) with M (prod leg label dims, D) mapping label -> core."""
    tris = rho.triangles
    H = _ribbon_host(model, tris[0])
    D = H.dim * H.dim
    C = dual_double_coproduct(H)
    legsdata = [_triangle_leg(model, H, t) for t in tris]
    cols, legs = [], None
    for a in range(D):
        ell = np.zeros(D, dtype=np.complex128)
        ell[a] = 1.0
        legs, core = _assemble_ribbon(model, legsdata, C, ell, len(tris), split)
        cols.append(core.reshape(-1))
    return legs, np.array(cols).T


# ---------------------------------------------------------------------------
# end-site commutation checks (App. C relations)


class ProductWrap(FactorizedOp):
    """Product of factorized ops as one factorized op (rightmost first)."""

    def __init__(self, model, factors):
        legs = []
        core = np.ones((), dtype=np.complex128)
        for f in reversed(factors):
            legs.extend(f.legs)
            core = np.tensordot(core, f.core, axes=0)
        super().__init__(model, legs, core)


def _fan_core_map(alg: FinHopfAlgebra, n: int) -> np.ndarray:
    """(d, d^n) matrix: basis element -> its iterated-coproduct fan core."""
    d = alg.dim
    out = np.zeros((d, d ** n), dtype=np.complex128)
    for i in range(d):
        cur = np.zeros(d, dtype=np.complex128)
        cur[i] = 1.0
        for _ in range(n - 1):
            cur = np.tensordot(cur, alg.comult, axes=([-1], [0]))
        out[i] = cur.reshape(-1)
    return out


def _vertex_factor(model, site, alg):
    from .operators import _vertex_L_family

    fan = model.cellulation.vertex_fan(site)
    legs = [(e, _vertex_L_family(model, e, sg, alg, None)) for e, sg in fan]
    return legs, _fan_core_map(alg, len(fan))


def _face_factor(model, site):
    from .operators import _coaction_face_family

    region = model.face_region(site.face)
    H = model.bulk[region]
    fan = model.cellulation.face_fan(site)
    legs = []
    for e, sg in fan:
        sp = model.edge_spaces[e]
        if sp.kind == "hopf":
            legs.append((e, _hopf_families(H)["T+" if sg == "+" else "T-"]))
        else:
            legs.append((e, _coaction_face_family(sp, region, sg)))
    return legs, _fan_core_map(dual(H), len(fan))


def _joint_op(model, site_legs, site_map, site_labels,
              rib_legs, rib_map, rib_labels) -> FactorizedOp:
    """sum_pieces (ribbon factor) o (site factor), site factor acts first.

    site_labels: (pieces, d); rib_labels: (pieces, D).
    """
    A = site_labels @ site_map           # (pieces, d^nfan)
    B = rib_labels @ rib_map.T           # (pieces, L)
    core = np.einsum("pa,pb->ab", A, B).reshape(
        tuple(F.shape[0] for _, F in site_legs)
        + tuple(F.shape[0] for _, F in rib_legs))
    return FactorizedOp(model, list(site_legs) + list(rib_legs), core)


def end_commutation_check(model: ModelSpec, rho: Ribbon, label,
                          seed: int = 11, nstates: int = 2) -> dict:
    """Residuals of the four end-site relations matching rho's type, plus
    interior commutation with the Haar stabilizers.

    Residuals are max over fixed-seed random states of ||(LHS - RHS) psi||.
    """
    H = _ribbon_host(model, rho.triangles[0])
    d = H.dim
    D = d * d
    m, c, S = H.mult, H.comult, H.antipode
    eye = np.eye(d)
    ell = label.vector() if isinstance(label, RibbonLabel) else \
        np.asarray(label, dtype=np.complex128)
    ellM = ell.reshape(d, d)
    rng = np.random.default_rng(seed)
    g = rng.normal(size=d) + 1j * rng.normal(size=d)
    psiv = rng.normal(size=d) + 1j * rng.normal(size=d)
    t0, t1 = rho.triangles[0], rho.triangles[-1]
    c0 = model.cellulation.site(t0.s0.vertex, t0.s0.face)
    c1 = model.cellulation.site(t1.s1.vertex, t1.s1.face)
    states = [random_state(model, seed + 100 + k) for k in range(nstates)]

    F = ribbon_operator(model, rho, ell)
    rib_legs, rmap = _ribbon_core_map(model, rho)
    is_B = rho.type == "B"

    def res(lhs, rhs):
        out = 0.0
        for st in states:
            diff = lhs.apply(st).amps - rhs.apply(st).amps
            out = max(out, float(np.linalg.norm(diff)))
        return out

    out = {}

    # --- A^g at s0: comm1 (A) / comm2 (B) --------------------------------
    vleg0, vmap0 = _vertex_factor(model, c0, H)
    Av0 = FactorizedOp(model, vleg0, (g @ vmap0).reshape(
        tuple(Fm.shape[0] for _, Fm in vleg0)))
    d3 = np.tensordot(g, c, axes=(0, 0))
    d3 = np.tensordot(d3, c, axes=([-1], [0]))
    d3 = np.tensordot(d3, c, axes=([-1], [0]))     # Delta_3(g): 4 legs
    T = np.einsum("piz,yq,zya->piqa", m, S, m)     # (e_p e_i S(e_q))_a
    lab_h = np.einsum("ib,piqa->pqab", ellM, T)
    lab_phi = np.einsum("yr,ywb->rwb", S, m)       # phi_b(S(e_r) e_w)
    lab = np.einsum("pqab,rwb->prqaw", lab_h, lab_phi)
    if is_B:
        piece = np.einsum("vprq,prqaw->vaw", d3, lab)   # site = g^(1)
        key = "comm2_A_s0"
    else:
        piece = np.einsum("prqv,prqaw->vaw", d3, lab)   # site = g^(4)
        key = "comm1_A_s0"
    rhs = _joint_op(model, vleg0, vmap0, eye, rib_legs, rmap,
                    piece.reshape(d, D))
    out[key] = res(ProductWrap(model, [Av0, F]), rhs)

    # --- B^psi at s0: comm3 (A) / comm4 (B) -------------------------------
    fleg0, fmap0 = _face_factor(model, c0)
    Bs0 = FactorizedOp(model, fleg0, (psiv @ fmap0).reshape(
        tuple(Fm.shape[0] for _, Fm in fleg0)))
    hsplit = np.einsum("ib,ixy->xyb", ellM, c)     # (h1=x, h2=y, b)
    lab_rib = hsplit.reshape(d, D)
    if is_B:
        lab_site = np.einsum("yx,yvt,t->xv", S, m, psiv)  # psi(S(e_x) e_v)
        key = "comm4_B_s0"
    else:
        lab_site = np.einsum("yx,vyt,t->xv", S, m, psiv)  # psi(e_v S(e_x))
        key = "comm3_B_s0"
    rhs = _joint_op(model, fleg0, fmap0, lab_site, rib_legs, rmap, lab_rib)
    out[key] = res(ProductWrap(model, [Bs0, F]), rhs)

    # --- A^g at s1: comm5 (A) / comm6 (B) --------------------------------
    vleg1, vmap1 = _vertex_factor(model, c1, H)
    Av1 = FactorizedOp(model, vleg1, (g @ vmap1).reshape(
        tuple(Fm.shape[0] for _, Fm in vleg1)))
    d2 = np.tensordot(g, c, axes=(0, 0))
    labphi = np.einsum("ib,wpb->piw", ellM, m)     # phi(e_w e_p) components
    if is_B:
        piece = np.einsum("pv,piw->viw", d2, labphi)    # site = g^(2)
        key = "comm6_A_s1"
    else:
        piece = np.einsum("vp,piw->viw", d2, labphi)    # site = g^(1)
        key = "comm5_A_s1"
    rhs = _joint_op(model, vleg1, vmap1, eye, rib_legs, rmap,
                    piece.reshape(d, D))
    out[key] = res(ProductWrap(model, [Av1, F]), rhs)

    # --- B^psi at s1: comm7 (A) / comm8 (B) -------------------------------
    fleg1, fmap1 = _face_factor(model, c1)
    Bs1 = FactorizedOp(model, fleg1, (psiv @ fmap1).reshape(
        tuple(Fm.shape[0] for _, Fm in fleg1)))
    SE = np.einsum("yw,ytz,zur->wtur", S, m, m)
    c2 = H.comult2
    W = np.einsum("xyv,kuvw->xkyuw", hsplit, c2)   # phi(k^(2)) = delta_{b,v}
    if is_B:
        lab_site = np.einsum("xkyuw,wyur,zrt,t->xkz", W, SE, m, psiv,
                             optimize=True)
        key = "comm8_B_s1"
    else:
        lab_site = np.einsum("xkyuw,wyur,rzt,t->xkz", W, SE, m, psiv,
                             optimize=True)
        key = "comm7_B_s1"
    rib_labels = np.zeros((d, d, D), dtype=np.complex128)
    for x in range(d):
        for k in range(d):
            rib_labels[x, k] = np.kron(eye[x], eye[k])
    rhs = _joint_op(model, fleg1, fmap1, lab_site.reshape(d * d, d),
                    rib_legs, rmap, rib_labels.reshape(d * d, D))
    out[key] = res(ProductWrap(model, [Bs1, F]), rhs)

    # --- interior commutation (Prop. on ribbon locality) ------------------
    out["interior"] = interior_commutation_residual(model, rho, F, states)
    return out


def interior_commutation_residual(model, rho: Ribbon, F, states) -> float:
    """||[F, P] psi|| over Haar stabilizers away from the ribbon's ends.

    The locality statement is per stabilizer: A_v for vertices v and B_f for
    faces f different from the end-site vertex/face.
    """
    from .operators import face_operator, vertex_operator

    c = model.cellulation
    end_sites = [rho.triangles[0].s0, rho.triangles[-1].s1]
    end_v = {s.vertex for s in end_sites}
    end_f = {s.face for s in end_sites}
    verts, faces = set(), set()
    for t in rho.triangles:
        for s in (t.s0, t.s1):
            verts.add(s.vertex)
            faces.add(s.face)
    worst = 0.0
    for v in verts - end_v:
        tags = model.vertex_tags(v)
        region = next(iter(tags & {"bulk", "bulk1", "bulk2"}), "bulk")
        Hs = model.bulk[region]
        fi = min(f for f in range(len(c.faces))
                 if v in c.face_corners_raw(c.faces[f]))
        A = vertex_operator(model, c.site(v, fi), haar_integral(Hs))
        for st in states:
            dvec = A.apply(F.apply(st)).amps - F.apply(A.apply(st)).amps
            worst = max(worst, float(np.linalg.norm(dvec)))
    for fi in faces - end_f:
        region = model.face_region(fi)
        Hs = model.bulk[region]
        corners = c.face_corners_raw(c.faces[fi])
        B = face_operator(model, c.site(corners[0], fi),
                          haar_integral(dual(Hs)))
        for st in states:
            dvec = B.apply(F.apply(st)).amps - F.apply(B.apply(st)).amps
            worst = max(worst, float(np.linalg.norm(dvec)))
    return worst


# ---------------------------------------------------------------------------
# bulk-to-boundary ribbons (Hopf subalgebra boundaries)


@dataclass
class BoundaryRibbonData:
    """Cached structures for (H, K <= H) boundary ribbons."""

    H: FinHopfAlgebra
    K: FinHopfAlgebra
    inclusion: np.ndarray
    quotient: HopfQuotient
    ext: np.ndarray            # (d, kappa): phi in K^ -> phi o Pi in H^
    C: np.ndarray              # label coproduct on (Q (x) K^)
    eps_Q: np.ndarray          # eps_H on class representatives
    fam_LQ: dict               # Q-indexed L families (via sigma(q) h_K reps)


def _completion_projection(H, inclusion):
    """Pi: H -> K along non-pivot standard basis vectors (paper's basis
    completion); deterministic."""
    d, kappa = inclusion.shape
    idx = []
    for j in range(d):
        if len(idx) + kappa == d:
            break
        cand = np.concatenate(
            [inclusion, np.eye(d)[:, idx + [j]]], axis=1)
        if np.linalg.matrix_rank(cand, tol=1e-9) == cand.shape[1]:
            idx.append(j)
    M = np.concatenate([inclusion, np.eye(d)[:, idx]], axis=1)
    if M.shape[1] != d:
        raise InvalidInputError("could not complete K to a basis of H")
    return np.linalg.inv(M)[:kappa, :]


def boundary_ribbon_data(model: ModelSpec) -> BoundaryRibbonData:
    CA = model.boundary
    if CA is None or CA.hopf is None:
        raise UnsupportedConfigurationError(
            "boundary ribbons need a Hopf-subalgebra boundary")
    if getattr(model, "_boundary_ribbon_data", None) is not None:
        return model._boundary_ribbon_data
    H = next(iter(model.bulk.values()))
    K, iota = CA.hopf, CA.inclusion
    Q = quotient_h_mod_k(H, K, iota)
    Pi = _completion_projection(H, iota)
    kap = K.dim
    W = np.einsum("ia,iqt->aqt", Q.section, H.comult)      # Delta(sigma(a))
    W2 = np.einsum("Qq,aqt->aQt", Q.project, W)            # class of leg 1
    SiK = H.antipode @ iota                                # S(iota k_w)
    conj = np.einsum("yw,ytx,iU,xiz->wtUz", SiK, H.mult, iota, H.mult,
                     optimize=True)                        # S(k_w) e_t k_U
    Pconj = np.einsum("rz,wtUz->wtUr", Q.project, conj)
    C = np.einsum("aQt,bUvw,wtUr,vsu->auQbrs", W2, K.comult2, Pconj, K.mult,
                  optimize=True)
    Dq = Q.dim * kap
    C = C.reshape(Dq, Dq, Dq)
    eps_Q = Q.section.T @ H.counit
    fams = _hopf_families(H)
    fam_LQ = {kind: np.einsum("ip,ixy->pxy", Q.section, fams[kind])
              for kind in ("L+", "L-", "Lt+", "Lt-")}
    data = BoundaryRibbonData(H, K, iota, Q, Pi.T, C, eps_Q, fam_LQ)
    model._boundary_ribbon_data = data
    return data


def _boundary_triangle_leg(model, data: BoundaryRibbonData, tri: Triangle):
    K = data.K
    q, kap = data.quotient.dim, K.dim
    kind = _triangle_case(tri)
    if tri.kind == "direct":
        famH = _hopf_families(data.H)[kind]
        famK = np.einsum("tb,txy->bxy", data.ext, famH)
        contract = np.einsum("a,bB->Bab", data.eps_Q,
                             np.eye(kap)).reshape(kap, q * kap)
        return tri.edge, famK, contract
    contract = np.einsum("aA,b->Aab", np.eye(q), K.unit).reshape(q, q * kap)
    return tri.edge, data.fam_LQ[kind], contract


def boundary_ribbon_operator(model: ModelSpec, rho: Ribbon, hclass, phi,
                             split: str = "mid") -> FactorizedOp:
    """F^{[h],phi}(rho) for a bulk-to-boundary ribbon over K <= H.

    ``hclass``: vector in H//K (an H vector is projected); ``phi``: a
    functional on K (components on the K basis).
    """
    data = boundary_ribbon_data(model)
    Q = data.quotient
    h = np.asarray(hclass, dtype=np.complex128)
    if h.shape == (data.H.dim,):
        h = Q.class_of(h)
    if h.shape != (Q.dim,):
        raise InvalidInputError("class label has the wrong dimension")
    phi = np.asarray(phi, dtype=np.complex128)
    if phi.shape != (data.K.dim,):
        raise InvalidInputError("phi must be a functional on K")
    ell = np.kron(h, phi)
    legsdata = [_boundary_triangle_leg(model, data, t) for t in rho.triangles]
    legs, core = _assemble_ribbon(model, legsdata, data.C, ell,
                                  len(rho.triangles), split)
    return FactorizedOp(model, legs, core, name="Fbd")


def boundary_ribbon_core_map(model, rho, split="mid"):
    data = boundary_ribbon_data(model)
    Dq = data.quotient.dim * data.K.dim
    legsdata = [_boundary_triangle_leg(model, data, t) for t in rho.triangles]
    cols, legs = [], None
    for a in range(Dq):
        ell = np.zeros(Dq, dtype=np.complex128)
        ell[a] = 1.0
        legs, core = _assemble_ribbon(model, legsdata, data.C, ell,
                                      len(rho.triangles), split)
        cols.append(core.reshape(-1))
    return legs, np.array(cols).T


def condensation_generators(model: ModelSpec, rho: Ribbon):
    """Generators F^{[k], phi(. h_K)}(rho), k in K, phi in K^.

    Returns (labels, operators, label_rank); label_rank is the rank of the
    label span in (H//K) (x) K^ (the independent-generator oracle).
    """
    data = boundary_ribbon_data(model)
    K, Q = data.K, data.quotient
    hK = haar_integral(K).coeffs
    right_hK = np.einsum("sut,u->st", K.mult, hK)   # [k_s h_K]_t
    labels, ops, vecs = [], [], []
    for ki in range(K.dim):
        kcls = Q.class_of(data.inclusion[:, ki])
        for b in range(K.dim):
            vec = right_hK[:, b]                     # phi_b(. h_K)
            labels.append((kcls, vec))
            vecs.append(np.kron(kcls, vec))
            ops.append(boundary_ribbon_operator(model, rho, kcls, vec))
    rank = int(np.linalg.matrix_rank(np.array(vecs), tol=1e-9))
    return labels, ops, rank


# ---------------------------------------------------------------------------
# excitations


@dataclass
class ExcitationReport:
    residuals: dict
    tol: float = 1e-9
    excited: list = field(init=False)

    def __post_init__(self):
        self.excited = sorted(k for k, v in self.residuals.items()
                              if v > self.tol)


def excitations(model: ModelSpec, state: StateVector,
                tol: float = 1e-9) -> ExcitationReport:
    """Per-term eigen-defect ||P psi - psi|| for a normalized state."""
    st = state.normalized()
    res = {}
    for t in hamiltonian(model):
        res[t.name] = float(np.linalg.norm(t.op.apply(st).amps - st.amps))
    return ExcitationReport(res, tol)


def create_pair(model: ModelSpec, ground: StateVector, rho: Ribbon, label):
    """Apply a ribbon operator to the ground state; report the excitations.

    Returns (state, report, annihilated); a zero-norm output is flagged,
    not an error.
    """
    F = ribbon_operator(model, rho, label)
    out = F.apply(ground)
    annihilated = out.norm() < 1e-12
    report = None if annihilated else excitations(model, out)
    return out, report, annihilated
