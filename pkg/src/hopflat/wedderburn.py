"""Numeric Artin-Wedderburn decomposition and the fusion basis.

Strategy: unitarize the left regular representation with the Haar Gram
matrix, project a random Hermitian matrix onto the commutant by a Haar
twirl, and read off irreducible submodules from its eigenspaces.  Matrix
irreps extracted this way feed the fusion-basis (Fourier) transform
    |nu; a, b> = sqrt(dim nu / dim H) * sum D^nu(h^(1))_{ab} h^(2),
whose columns block-diagonalize the regular representation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotSemisimpleError
from .hopf import FinHopfAlgebra, gram_matrix, haar_integral

_SEED = 0xD0F


@dataclass
class IrrepDecomposition:
    """Wedderburn data: one block dim per irrep class, plus the fusion basis."""

    block_dims: tuple
    change_of_basis: np.ndarray          # columns |nu; a, b>, (nu, b, a) order
    irreps: list                         # irreps[nu][i] = D^nu(e_i), unitary
    residual: float


def _matsqrt(G: np.ndarray):
    w, V = np.linalg.eigh(0.5 * (G + G.conj().T))
    if w.min() <= 0:
        raise NotSemisimpleError("Gram matrix not positive definite")
    return (V * np.sqrt(w)) @ V.conj().T, (V / np.sqrt(w)) @ V.conj().T


def _twirl(Dh: np.ndarray, rep, repS, X: np.ndarray) -> np.ndarray:
    """sum_(h) rep(h^(1)) X rep(S(h^(2))) with Dh the Delta(h) matrix."""
    Y = np.einsum("pq,pax->qax", Dh, rep)
    Y = np.einsum("qax,xy->qay", Y, X)
    return np.einsum("qay,qyb->ab", Y, repS)


def _cluster(vals: np.ndarray, gap: float = 1e-6):
    order = np.argsort(vals)
    groups, cur = [], [order[0]]
    for i in order[1:]:
        if vals[i] - vals[cur[-1]] < gap:
            cur.append(i)
        else:
            groups.append(cur)
            cur = [i]
    groups.append(cur)
    return groups


def artin_wedderburn(A: FinHopfAlgebra, tol: float = 1e-8,
                     seed: int = _SEED) -> IrrepDecomposition:
    """Decompose a semisimple algebra given as a C* Hopf algebra."""
    if "wedderburn" in A._cache:
        return A._cache["wedderburn"]
    d = A.dim
    G = gram_matrix(A)
    W, Winv = _matsqrt(G)
    L = A.lmul                                   # L[i] = left mult by e_i
    Lt = np.einsum("ab,ibc,cd->iad", W, L, Winv)  # unitarized regular rep
    h = haar_integral(A).coeffs
    Dh = np.einsum("i,ipq->pq", h, A.comult)
    LtS = np.einsum("yq,yab->qab", A.antipode, Lt)

    rng = np.random.default_rng(seed)
    last_err = None
    for _attempt in range(6):
        try:
            X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            X = X + X.conj().T
            T = _twirl(Dh, Lt, LtS, X)
            T = 0.5 * (T + T.conj().T)
            if max(np.max(np.abs(Lt[i] @ T - T @ Lt[i])) for i in range(d)) > 1e-8:
                raise NotSemisimpleError("twirl did not land in the commutant")
            vals, vecs = np.linalg.eigh(T)
            scale = max(1.0, np.max(np.abs(vals)))
            modules = []
            for idx in _cluster(vals, gap=1e-6 * scale):
                Q = vecs[:, idx]
                rho = np.einsum("ax,iab,by->ixy", Q.conj(), Lt, Q)
                # irreducibility: twirled random endomorphisms must be scalar
                rhoS = np.einsum("yq,yab->qab", A.antipode, rho)
                for _ in range(2):
                    R = rng.normal(size=(len(idx),) * 2) \
                        + 1j * rng.normal(size=(len(idx),) * 2)
                    E = _twirl(Dh, rho, rhoS, R)
                    off = E - (np.trace(E) / len(idx)) * np.eye(len(idx))
                    if np.max(np.abs(off)) > 1e-7 * max(1.0, np.abs(np.trace(E))):
                        raise NotSemisimpleError("reducible eigenspace; retry")
                modules.append((Q, rho, rhoS))
            decomp = _assemble(A, modules, Dh, rng, Winv, Lt, tol)
            A._cache["wedderburn"] = decomp
            return decomp
        except NotSemisimpleError as err:  # retry with a fresh random draw
            last_err = err
    raise NotSemisimpleError(f"{A.name}: Wedderburn decomposition failed: {last_err}")


def _assemble(A, modules, Dh, rng, Winv, Lt, tol):
    d = A.dim
    # group isomorphic modules via twirled intertwiners
    classes = []
    for Q, rho, rhoS in modules:
        placed = False
        for cls in classes:
            Qr, rr, rrS = cls[0]
            if rho.shape[1] != rr.shape[1]:
                continue
            R = rng.normal(size=(rho.shape[1], rr.shape[1])) \
                + 1j * rng.normal(size=(rho.shape[1], rr.shape[1]))
            t = _twirl(Dh, rho, rrS, R)
            if np.max(np.abs(t)) > 1e-6:
                cls.append((Q, rho, rhoS))
                placed = True
                break
        if not placed:
            classes.append([(Q, rho, rhoS)])

    # deterministic class order: by dim, then by rounded character vector
    def charvec(cls):
        _, rho, _ = cls[0]
        return tuple(np.round(np.einsum("ixx->i", rho).real, 6)) \
            + tuple(np.round(np.einsum("ixx->i", rho).imag, 6))

    classes.sort(key=lambda cls: (cls[0][1].shape[1], charvec(cls)))
    block_dims = tuple(cls[0][1].shape[1] for cls in classes)
    if sum(n * n for n in block_dims) != d or \
            any(len(cls) != cls[0][1].shape[1] for cls in classes):
        raise NotSemisimpleError("block dimension bookkeeping failed; retry")

    # unitary matrix irreps from the reference copies
    irreps = [cls[0][1] for cls in classes]

    # fusion basis |nu; a, b>, columns ordered (nu, b, a)
    h = haar_integral(A).coeffs
    Dh2 = np.einsum("i,ipq->pq", h, A.comult)
    cols = []
    for nu, rho in enumerate(irreps):
        n = rho.shape[1]
        # D^nu(h^(1))_{ab} h^(2): contract rep over the first Haar leg
        M = np.einsum("pq,pab->abq", Dh2, rho) * np.sqrt(n / d)
        for b in range(n):
            for a in range(n):
                cols.append(M[a, b])
    C = np.array(cols).T
    if np.linalg.matrix_rank(C, tol=1e-8) != d:
        raise NotSemisimpleError("fusion basis is singular; retry")

    # verify block-diagonalization: L(e_i) C = C * blkdiag(D^nu(S e_i)^T ...)
    Cinv = np.linalg.inv(C)
    resid = 0.0
    for i in range(d):
        B = Cinv @ A.lmul[i] @ C
        off = B.copy()
        pos = 0
        for nu, rho in enumerate(irreps):
            n = rho.shape[1]
            DS = np.einsum("yi,yab->iab", A.antipode, rho)[i].T
            for _copy in range(n):
                off[pos:pos + n, pos:pos + n] -= DS
                pos += n
        resid = max(resid, float(np.max(np.abs(off))))
    if resid > tol:
        raise NotSemisimpleError(
            f"fusion basis does not block-diagonalize (residual {resid:.2e})")
    return IrrepDecomposition(block_dims=block_dims, change_of_basis=C,
                              irreps=irreps, residual=resid)


def regular_blocks(A: FinHopfAlgebra, decomp: IrrepDecomposition,
                   i: int) -> np.ndarray:
    """Reassembled block-diagonal form of L(e_i) in the fusion basis."""
    d = A.dim
    B = np.zeros((d, d), dtype=np.complex128)
    pos = 0
    for rho in decomp.irreps:
        n = rho.shape[1]
        DS = np.einsum("yi,yab->iab", A.antipode, rho)[i].T
        for _ in range(n):
            B[pos:pos + n, pos:pos + n] = DS
            pos += n
    return B
