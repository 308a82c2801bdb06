"""State vectors and lattice operators: edge actions, site stabilizers,
boundary/wall stabilizers, Hamiltonian assembly.

Operators are kept matrix-free as (core tensor, per-edge operator family)
pairs; a dense matrix on the operator's support is materialized lazily and
is subject to the model's dense cap.  State amplitudes are indexed by
mixed-radix edge tuples in lattice edge order (row-major).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .comodule import BicomoduleAlgebra, ComoduleAlgebra
from .errors import (
    InvalidInputError,
    ParentMismatchError,
    TooLargeError,
    UnsupportedConfigurationError,
)
from .hopf import (
    AlgebraElement,
    FinHopfAlgebra,
    dual,
    gram_matrix,
    haar_integral,
    iterated_comult,
)
from .lattice import Cellulation, Site

DENSE_CAP_DEFAULT = 8192


def _dense_cap():
    return int(os.environ.get("HOPFLAT_DENSE_CAP", DENSE_CAP_DEFAULT))


# ---------------------------------------------------------------------------
# model


@dataclass
class LocalSpace:
    dim: int
    kind: str                      # "hopf" | "comodule" | "bicomodule"
    data: object                   # FinHopfAlgebra / ComoduleAlgebra / ...

    def gram(self):
        if self.kind == "hopf":
            return gram_matrix(self.data)
        if self.kind in ("comodule", "bicomodule") and self.data.hopf is not None:
            return gram_matrix(self.data.hopf)
        return None


class ModelSpec:
    """Lattice + algebras per region tag + per-edge local spaces."""

    def __init__(self, cellulation: Cellulation, bulk,
                 boundary: ComoduleAlgebra | None = None,
                 wall: BicomoduleAlgebra | None = None,
                 dense_cap: int | None = None, name: str = ""):
        self.cellulation = cellulation
        if isinstance(bulk, FinHopfAlgebra):
            self.bulk = {"bulk": bulk}
        else:
            self.bulk = dict(bulk)
        self.boundary = boundary
        self.wall = wall
        self.dense_cap = dense_cap if dense_cap is not None else _dense_cap()
        self.name = name or f"{cellulation.name}"
        self.edge_spaces = [self._space_for(e.tag) for e in cellulation.edges]
        self.dims = tuple(sp.dim for sp in self.edge_spaces)
        self.total_dim = 1
        for d in self.dims:
            self.total_dim *= d

    def _space_for(self, tag: str) -> LocalSpace:
        if tag in self.bulk:
            return LocalSpace(self.bulk[tag].dim, "hopf", self.bulk[tag])
        if tag == "boundary":
            if self.boundary is None:
                raise InvalidInputError("model has boundary edges but no data")
            return LocalSpace(self.boundary.dim, "comodule", self.boundary)
        if tag == "wall":
            if self.wall is None:
                raise InvalidInputError("model has wall edges but no data")
            return LocalSpace(self.wall.dim, "bicomodule", self.wall)
        raise InvalidInputError(f"no algebra for region tag {tag!r}")

    # region helpers ------------------------------------------------------

    def vertex_tags(self, v: int):
        return {self.cellulation.edges[e].tag
                for e, _ in self.cellulation._out_darts[v]}

    def face_region(self, fi: int) -> str:
        tags = {self.cellulation.edges[e].tag
                for e, _ in self.cellulation.faces[fi].sides}
        for t in ("bulk", "bulk1", "bulk2"):
            if t in tags:
                return t
        return "bulk" if "bulk" in self.bulk else "bulk1"

    def region_algebra(self, tag: str) -> FinHopfAlgebra:
        return self.bulk[tag]

    def is_boundary_vertex(self, v: int) -> bool:
        return "boundary" in self.vertex_tags(v)

    def is_wall_vertex(self, v: int) -> bool:
        return "wall" in self.vertex_tags(v)


@dataclass
class StateVector:
    model: ModelSpec
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if self.amps.size != self.model.total_dim:
            raise InvalidInputError("state length does not match the model")

    def norm(self):
        return float(np.linalg.norm(self.amps))

    def normalized(self):
        n = self.norm()
        return StateVector(self.model, self.amps / n) if n else self

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amps, other.amps))


def basis_state(model: ModelSpec, index) -> StateVector:
    amps = np.zeros(model.total_dim, dtype=np.complex128)
    if isinstance(index, tuple):
        index = int(np.ravel_multi_index(index, model.dims))
    amps[index] = 1.0
    return StateVector(model, amps)


def random_state(model: ModelSpec, seed: int = 7) -> StateVector:
    rng = np.random.default_rng(seed)
    a = rng.normal(size=model.total_dim) + 1j * rng.normal(size=model.total_dim)
    return StateVector(model, a / np.linalg.norm(a))


def product_state(model: ModelSpec, vectors) -> StateVector:
    amps = np.ones(1, dtype=np.complex128)
    for v in vectors:
        amps = np.kron(amps, np.asarray(v, dtype=np.complex128))
    return StateVector(model, amps)


# ---------------------------------------------------------------------------
# operators


class LatticeOperator:
    """Base: a linear map on StateVector with a known edge support."""

    def __init__(self, model: ModelSpec, support):
        self.model = model
        self.support = tuple(support)

    def local_matrix(self) -> np.ndarray:
        raise NotImplementedError

    def local_dims(self):
        return tuple(self.model.dims[e] for e in self.support)

    def apply(self, state: StateVector) -> StateVector:
        M = self.local_matrix()
        dims = self.model.dims
        arr = state.amps.reshape(dims) if dims else state.amps
        axes = list(self.support)
        arr = np.moveaxis(arr, axes, range(len(axes)))
        rest = arr.shape[len(axes):]
        dsup = int(np.prod([dims[e] for e in self.support], dtype=object)) \
            if self.support else 1
        out = (M @ arr.reshape(dsup, -1)).reshape(arr.shape)
        out = np.moveaxis(out, range(len(axes)), axes)
        return StateVector(self.model, out.reshape(-1))

    def __call__(self, state):
        return self.apply(state)

    # algebra on operators
    def __matmul__(self, other):
        return ProductOp(self.model, [self, other])

    def __add__(self, other):
        return SumOp(self.model, [self, other], [1.0, 1.0])

    def __sub__(self, other):
        return SumOp(self.model, [self, other], [1.0, -1.0])

    def __mul__(self, scalar):
        return SumOp(self.model, [self], [scalar])

    __rmul__ = __mul__

    def dense(self, cap: int | None = None) -> np.ndarray:
        """Full-lattice dense matrix (row-major mixed radix), cap-gated."""
        cap = cap if cap is not None else self.model.dense_cap
        N = self.model.total_dim
        if N > cap:
            raise TooLargeError(f"dense {N} x {N} exceeds cap {cap}")
        M = self.local_matrix()
        dims = self.model.dims
        sup = list(self.support)
        k = len(sup)
        sdims = [dims[e] for e in sup]
        rest = [e for e in range(len(dims)) if e not in sup]
        rdims = [dims[e] for e in rest]
        T = M.reshape(sdims + sdims)
        for d in rdims:
            T = np.tensordot(T, np.eye(d), axes=0)
        # axes: sup_out, sup_in, (rest pairs) -> rearrange to edge order
        out_axes = [None] * len(dims)
        in_axes = [None] * len(dims)
        for p, e in enumerate(sup):
            out_axes[e] = p
            in_axes[e] = k + p
        for p, e in enumerate(rest):
            out_axes[e] = 2 * k + 2 * p
            in_axes[e] = 2 * k + 2 * p + 1
        T = np.transpose(T, out_axes + in_axes)
        return T.reshape(N, N)

    def dagger(self) -> "LatticeOperator":
        """Adjoint w.r.t. the Haar inner product (Gram conjugation)."""
        M = self.local_matrix()
        G = np.eye(1)
        for e in self.support:
            g = self.model.edge_spaces[e].gram()
            if g is None:
                raise UnsupportedConfigurationError(
                    f"edge {e} has no Haar Gram; adjoint undefined")
            G = np.kron(G, g)
        Md = np.linalg.solve(G, M.conj().T @ G)
        return DenseLocalOp(self.model, self.support, Md)


class DenseLocalOp(LatticeOperator):
    def __init__(self, model, support, matrix):
        super().__init__(model, support)
        self._m = np.asarray(matrix, dtype=np.complex128)

    def local_matrix(self):
        return self._m


class IdentityOp(LatticeOperator):
    def __init__(self, model):
        super().__init__(model, ())

    def local_matrix(self):
        return np.eye(1, dtype=np.complex128)

    def apply(self, state):
        return StateVector(self.model, state.amps.copy())


class FactorizedOp(LatticeOperator):
    """sum_r core[r1..rk] F1[r1] (x) ... (x) Fk[rk] on edges legs[i].edge.

    Repeated edges compose in leg order (later legs act on the left).
    """

    def __init__(self, model, legs, core, name=""):
        # legs: list of (edge, family (r, d, d))
        edges = []
        for e, _ in legs:
            if e not in edges:
                edges.append(e)
        super().__init__(model, edges)
        self.legs = [(int(e), np.asarray(F, dtype=np.complex128))
                     for e, F in legs]
        self.core = np.asarray(core, dtype=np.complex128)
        self.name = name
        self._local = None
        for (e, F) in self.legs:
            d = model.dims[e]
            if F.shape[1:] != (d, d):
                raise InvalidInputError("family/edge dimension mismatch")
        if self.core.shape != tuple(F.shape[0] for _, F in self.legs):
            raise InvalidInputError("core rank does not match legs")

    def local_matrix(self):
        if self._local is not None:
            return self._local
        dims = self.local_dims()
        dloc = int(np.prod(dims)) if dims else 1
        if dloc > self.model.dense_cap:
            raise TooLargeError(
                f"local dim {dloc} exceeds dense cap {self.model.dense_cap}")
        # group legs per support edge; repeated legs compose (later on left)
        per_edge = {e: [] for e in self.support}
        for li, (e, F) in enumerate(self.legs):
            per_edge[e].append((li, F))
        acc = self.core
        cur_axes = list(range(len(self.legs)))   # leg index per core axis
        for e in self.support:
            lis = per_edge[e]
            E = lis[0][1]                        # (r, x', x)
            for _, F in lis[1:]:
                # later legs act on the left: E <- F @ E with a new label axis
                E = np.einsum("...ty,bxt->...bxy", E, F)
            positions = [cur_axes.index(li) for li, _ in lis]
            acc = np.tensordot(acc, E, axes=(positions, list(range(len(lis)))))
            cur_axes = [a for a in cur_axes if a not in [li for li, _ in lis]]
        # acc axes: (x'_1, x_1, x'_2, x_2, ...) in support order
        k = len(self.support)
        perm = [2 * i for i in range(k)] + [2 * i + 1 for i in range(k)]
        self._local = np.transpose(acc, perm).reshape(dloc, dloc)
        return self._local


class SumOp(LatticeOperator):
    def __init__(self, model, terms, coeffs=None):
        support = []
        for t in terms:
            for e in t.support:
                if e not in support:
                    support.append(e)
        super().__init__(model, sorted(support))
        self.terms = list(terms)
        self.coeffs = [1.0] * len(self.terms) if coeffs is None else list(coeffs)

    def apply(self, state):
        out = np.zeros_like(state.amps)
        for c, t in zip(self.coeffs, self.terms):
            out += c * t.apply(state).amps
        return StateVector(self.model, out)

    def local_matrix(self):
        dims = self.local_dims()
        dloc = int(np.prod(dims)) if dims else 1
        if dloc > self.model.dense_cap:
            raise TooLargeError(f"local dim {dloc} exceeds dense cap")
        M = np.zeros((dloc, dloc), dtype=np.complex128)
        for c, t in zip(self.coeffs, self.terms):
            M += c * _embed(t, self.support, self.model)
        return M


class ProductOp(LatticeOperator):
    """factors[0] @ factors[1] @ ...; rightmost factor acts first."""

    def __init__(self, model, factors):
        support = []
        for t in factors:
            for e in t.support:
                if e not in support:
                    support.append(e)
        super().__init__(model, sorted(support))
        self.factors = list(factors)

    def apply(self, state):
        for t in reversed(self.factors):
            state = t.apply(state)
        return state

    def local_matrix(self):
        dims = self.local_dims()
        dloc = int(np.prod(dims)) if dims else 1
        if dloc > self.model.dense_cap:
            raise TooLargeError(f"local dim {dloc} exceeds dense cap")
        M = np.eye(dloc, dtype=np.complex128)
        for t in reversed(self.factors):
            M = _embed(t, self.support, self.model) @ M
        return M


def _embed(op: LatticeOperator, support, model) -> np.ndarray:
    """Embed op.local_matrix() into the ordered union support."""
    dims = [model.dims[e] for e in support]
    dloc = int(np.prod(dims)) if dims else 1
    M = op.local_matrix()
    sup = list(op.support)
    missing = [e for e in support if e not in sup]
    T = M.reshape([model.dims[e] for e in sup] * 2)
    k = len(sup)
    for e in missing:
        T = np.tensordot(T, np.eye(model.dims[e]), axes=0)
    full = sup + missing
    out_axes, in_axes = [], []
    for e in support:
        p = full.index(e)
        if p < k:
            out_axes.append(p)
            in_axes.append(k + p)
        else:
            out_axes.append(2 * k + 2 * (p - k))
            in_axes.append(2 * k + 2 * (p - k) + 1)
    T = np.transpose(T, out_axes + in_axes)
    return T.reshape(dloc, dloc)


# ---------------------------------------------------------------------------
# edge operator families


def _hopf_families(H: FinHopfAlgebra):
    """Single-edge operator families for the eight edge actions on H."""
    if "edge_families" in H._cache:
        return H._cache["edge_families"]
    m, c, S = H.mult, H.comult, H.antipode
    fam = {
        "L+": np.einsum("aqp->apq", m),
        "Lt-": np.einsum("qap->apq", m),
        "T+": np.einsum("qpb->bpq", c),
        "Tt-": np.einsum("qbp->bpq", c),
    }
    fam["L-"] = np.einsum("ya,ypq->apq", S, fam["Lt-"])
    fam["Lt+"] = np.einsum("ya,ypq->apq", S, fam["L+"])
    fam["T-"] = np.einsum("bl,qlp->bpq", S, c)
    fam["Tt+"] = np.einsum("bl,qpl->bpq", S, c)
    H._cache["edge_families"] = fam
    return fam


def _assoc_families(A):
    """Left/right multiplication families of an associative algebra."""
    return {"lmul": np.einsum("aqp->apq", A.mult),
            "rmul": np.einsum("qap->apq", A.mult)}


def _coaction_face_family(space: LocalSpace, region_tag: str, sign: str):
    """T-family on a boundary/wall edge for a face of the given region.

    Boundary (right comodule): the face must sit in the T+ position and the
    action is x -> sum x^[0] phi(x^[1]).  Wall edges: the H2-side face is the
    T+ position (plain right leg), the H1-side the T- position (antipode on
    the left leg).
    """
    if space.kind == "comodule":
        CA = space.data
        if sign != "+":
            raise UnsupportedConfigurationError(
                "boundary edge traversed along by an interior face")
        beta = CA.coaction_right_form()
        return np.einsum("ijb->bji", beta)
    BA = space.data
    if region_tag == "bulk2":
        if sign != "+":
            raise UnsupportedConfigurationError(
                "wall edge in T- position on the H2 side")
        return np.einsum("ipjb,p->bji", BA.coaction, BA.host1.counit)
    if sign != "-":
        raise UnsupportedConfigurationError(
            "wall edge in T+ position on the H1 side")
    t = np.einsum("ipjq,q->ipj", BA.coaction, BA.host2.counit)
    return np.einsum("bp,ipj->bji", BA.host1.antipode, t)


# ---------------------------------------------------------------------------
# spec operations


_EDGE_KINDS = ("L+", "L-", "T+", "T-", "Lt+", "Lt-", "Tt+", "Tt-")


def edge_action(model: ModelSpec, kind: str, label: AlgebraElement,
                edge: int) -> FactorizedOp:
    """Single-edge operator for one of the eight edge actions."""
    if kind not in _EDGE_KINDS:
        raise InvalidInputError(f"unknown edge action {kind!r}")
    space = model.edge_spaces[edge]
    if space.kind != "hopf":
        raise ParentMismatchError("edge actions are defined on Hopf edges")
    H = space.data
    fam = _hopf_families(H)[kind]
    want = H if kind.startswith("L") else dual(H)
    if label.parent is not want:
        raise ParentMismatchError(
            f"label must live in {'H' if kind.startswith('L') else 'dual(H)'}")
    return FactorizedOp(model, [(edge, fam)], label.coeffs,
                        name=f"{kind}({edge})")


def _vertex_L_family(model, edge, sign, label_alg, inclusion):
    """L family on `edge` for labels in label_alg (included into H if needed)."""
    space = model.edge_spaces[edge]
    kind = "L-" if sign == "-" else "L+"
    if space.kind == "hopf":
        fam = _hopf_families(space.data)[kind]
        if space.data is label_alg:
            return fam
        if inclusion is None:
            raise ParentMismatchError("vertex label algebra mismatch")
        return np.einsum("ia,ipq->apq", inclusion, fam)
    # boundary/wall edge: label algebra must be the edge's K itself
    K = space.data.hopf
    if K is None or K is not label_alg:
        raise UnsupportedConfigurationError(
            "fan-form vertex operator needs a Hopf-subalgebra edge space")
    return _hopf_families(K)[kind]


def vertex_operator(model: ModelSpec, s: Site, h: AlgebraElement) -> FactorizedOp:
    """A^h(s): CCW Delta-fan of L's around s.vertex.

    At a boundary (wall) vertex of a Hopf-subalgebra model the label lives
    in K and acts on boundary (wall) edges through K, on bulk edges through
    the inclusion.
    """
    c = model.cellulation
    fan = c.vertex_fan(s)
    alg = h.parent
    inclusion = None
    tags = model.vertex_tags(s.vertex)
    if tags & {"boundary", "wall"}:
        data = model.boundary if "boundary" in tags else model.wall
        if data is not None and data.hopf is not None and alg is data.hopf:
            inclusion = data.inclusion
        elif alg in model.bulk.values():
            inclusion = None
        else:
            raise ParentMismatchError("vertex label not in the local algebra")
    else:
        region = next(iter(tags & {"bulk", "bulk1", "bulk2"}))
        if alg is not model.bulk[region]:
            raise ParentMismatchError("bulk site passed a foreign label")
    core = iterated_comult(alg, h.coeffs, len(fan))
    legs = [(e, _vertex_L_family(model, e, sg, alg, inclusion))
            for e, sg in fan]
    return FactorizedOp(model, legs, core, name=f"A(v{s.vertex})")


def face_operator(model: ModelSpec, s: Site, phi: AlgebraElement) -> FactorizedOp:
    """B^phi(s): CCW Delta-fan of T's around s.face from the site corner.

    Boundary and wall edges in the fan are acted on through the coaction.
    """
    c = model.cellulation
    region = model.face_region(s.face)
    H = model.bulk[region]
    Hh = dual(H)
    if phi.parent is not Hh:
        raise ParentMismatchError("face label must live in the region's dual")
    fan = c.face_fan(s)
    core = iterated_comult(Hh, phi.coeffs, len(fan))
    legs = []
    for e, sg in fan:
        space = model.edge_spaces[e]
        if space.kind == "hopf":
            if space.data is not H:
                raise UnsupportedConfigurationError(
                    "face fan crosses into a different bulk region")
            legs.append((e, _hopf_families(H)["T+" if sg == "+" else "T-"]))
        else:
            legs.append((e, _coaction_face_family(space, region, sg)))
    return FactorizedOp(model, legs, core, name=f"B(f{s.face})")


def boundary_face_operator(model: ModelSpec, s: Site,
                           phi: AlgebraElement) -> FactorizedOp:
    """B^phi(s_b): face operator whose fan includes boundary-edge coactions."""
    tags = {model.cellulation.edges[e].tag
            for e, _ in model.cellulation.faces[s.face].sides}
    if not (tags & {"boundary", "wall"}):
        raise UnsupportedConfigurationError("site is not on a boundary face")
    return face_operator(model, s, phi)


def _boundary_edge_pair(model, v):
    """(x, y): incoming and outgoing marked edges (boundary or wall) at v."""
    c = model.cellulation
    tag = "boundary" if model.is_boundary_vertex(v) else "wall"
    inc = [e for e, ed in enumerate(c.edges)
           if ed.tag == tag and ed.head == v]
    out = [e for e, ed in enumerate(c.edges)
           if ed.tag == tag and ed.tail == v]
    if len(inc) != 1 or len(out) != 1:
        raise UnsupportedConfigurationError(
            f"vertex {v}: expected one incoming and one outgoing {tag} edge")
    return inc[0], out[0]


def _single_bulk_edge(model, v, tags):
    """Bulk edges at v by region tag -> (edge, 'in'|'out') or None."""
    c = model.cellulation
    out = {}
    for t in tags:
        es = [(e, "in" if ed.head == v else "out")
              for e, ed in enumerate(c.edges)
              if ed.tag == t and v in (ed.tail, ed.head)]
        if len(es) > 1:
            raise UnsupportedConfigurationError(
                f"vertex {v}: more than one {t} edge (picture not displayed)")
        out[t] = es[0] if es else None
    return out


def _h_leg_family(H: FinHopfAlgebra, direction: str, with_S: bool):
    """Multiplication family on an H edge for the coaction leg.

    in  + with_S: h -> S(e_p) h ;  in  + plain: h -> e_p h
    out + with_S: h -> h S(e_p) ;  out + plain: h -> h e_p
    """
    fam = _hopf_families(H)
    lmul = fam["L+"]                      # h -> e_p h
    rmul = fam["Lt-"]                     # h -> h e_p
    base = lmul if direction == "in" else rmul
    if with_S:
        return np.einsum("ya,ypq->apq", H.antipode, base)
    return base


def boundary_vertex_operator(model: ModelSpec, s: Site, ab) -> FactorizedOp:
    """A^{a(x)b}(s_b): one of the four displayed boundary pictures.

    ``ab`` is an (a, a) coefficient matrix on A (x) A^op (e.g. the
    separability idempotent).  The configuration (bulk edge in/out, site
    below/above) is inferred from the lattice.
    """
    CA = model.boundary
    if CA is None:
        raise UnsupportedConfigurationError("model has no boundary data")
    v = s.vertex
    x_e, y_e = _boundary_edge_pair(model, v)
    bulk = _single_bulk_edge(model, v, set(model.bulk.keys()))
    bulk = next(iter(bulk.values()))
    c = model.cellulation
    face_edges = [e for e, _ in c.faces[s.face].sides]
    below = x_e in face_edges
    above = y_e in face_edges
    if not below and not above:
        raise UnsupportedConfigurationError(
            "boundary site's face touches neither boundary edge")
    t = np.asarray(ab, dtype=np.complex128).reshape(CA.dim, CA.dim)
    beta = CA.coaction_right_form()
    A = CA.algebra
    af = _assoc_families(A)
    H = next(iter(model.bulk.values()))
    legs = [(x_e, af["lmul"]), (y_e, af["rmul"])]
    if below:
        core = np.einsum("ij,jJp->iJp", t, beta)      # (x: i, y: J, H: p)
        s_on_h = (bulk is not None and bulk[1] == "in")
    else:
        core = np.einsum("ij,iIp->Ijp", t, beta)      # (x: I, y: j, H: p)
        s_on_h = (bulk is not None and bulk[1] == "out")
    if bulk is None:
        core = np.einsum("xyp,p->xy", core, H.counit)
    else:
        legs.append((bulk[0], _h_leg_family(H, bulk[1], s_on_h)))
    return FactorizedOp(model, legs, core, name=f"Ab(v{v})")


def wall_vertex_operator(model: ModelSpec, s: Site, ab) -> FactorizedOp:
    """A^{a(x)b}(s_d): one of the eight displayed domain-wall pictures."""
    BA = model.wall
    if BA is None:
        raise UnsupportedConfigurationError("model has no wall data")
    v = s.vertex
    x_e, y_e = _boundary_edge_pair(model, v)
    sides = _single_bulk_edge(model, v, {"bulk1", "bulk2"})
    k_edge, h_edge = sides.get("bulk1"), sides.get("bulk2")
    c = model.cellulation
    face_edges = [e for e, _ in c.faces[s.face].sides]
    below = x_e in face_edges
    if not below and y_e not in face_edges:
        raise UnsupportedConfigurationError(
            "wall site's face touches neither wall edge")
    t = np.asarray(ab, dtype=np.complex128).reshape(BA.dim, BA.dim)
    A, H1, H2 = BA.algebra, BA.host1, BA.host2
    af = _assoc_families(A)
    legs = [(x_e, af["lmul"]), (y_e, af["rmul"])]
    if below:
        core = np.einsum("ij,jpJq->iJpq", t, BA.coaction)  # x:i, y:J, H1:p, H2:q
        k_S = (k_edge is not None and k_edge[1] == "in")
        h_S = (h_edge is not None and h_edge[1] == "in")
    else:
        core = np.einsum("ij,ipIq->Ijpq", t, BA.coaction)
        k_S = (k_edge is not None and k_edge[1] == "out")
        h_S = (h_edge is not None and h_edge[1] == "out")
    if k_edge is None:
        core = np.einsum("xypq,p->xyq", core, H1.counit)
    else:
        legs.append((k_edge[0], _h_leg_family(H1, k_edge[1], k_S)))
    if h_edge is None:
        core = np.einsum("xy...q,q->xy...", core, H2.counit)
    else:
        legs.append((h_edge[0], _h_leg_family(H2, h_edge[1], h_S)))
    return FactorizedOp(model, legs, core, name=f"Aw(v{v})")


# ---------------------------------------------------------------------------
# Hamiltonian


@dataclass
class HamTerm:
    name: str
    kind: str            # "vertex" | "face" | "boundary" | "wall"
    site: Site
    op: LatticeOperator


def _separability(data):
    from .comodule import separability_idempotent

    if getattr(data, "_lam", None) is None:
        data._lam = separability_idempotent(data.algebra).lam
    return data._lam


def hamiltonian(model: ModelSpec) -> list:
    """All stabilizer projectors: bulk A_v / B_f, boundary A^lam(s_b) and
    B^phi(s_b), wall A^lam(s_d) and B^phi_i(s_d_i)."""
    c = model.cellulation
    terms = []
    # vertex terms
    for v in range(c.n_vertices):
        tags = model.vertex_tags(v)
        if "boundary" in tags or "wall" in tags:
            data = model.boundary if "boundary" in tags else model.wall
            lam = _separability(data)
            opmaker = boundary_vertex_operator if "boundary" in tags \
                else wall_vertex_operator
            x_e, y_e = _boundary_edge_pair(model, v)
            done = set()
            for fi in _faces_at_vertex(c, v):
                face_edges = [e for e, _ in c.faces[fi].sides]
                case = "below" if x_e in face_edges else "above"
                if case in done:
                    continue
                done.add(case)
                s = c.site(v, fi)
                terms.append(HamTerm(f"A[{case}](v{v})", "boundary" if
                                     "boundary" in tags else "wall", s,
                                     opmaker(model, s, lam)))
        else:
            region = next(iter(tags))
            H = model.bulk[region]
            fi = min(_faces_at_vertex(c, v))
            s = c.site(v, fi)
            terms.append(HamTerm(f"A(v{v})", "vertex", s,
                                 vertex_operator(model, s, haar_integral(H))))
    # face terms
    for fi in range(len(c.faces)):
        region = model.face_region(fi)
        H = model.bulk[region]
        phi = haar_integral(dual(H))
        corners = c.face_corners_raw(c.faces[fi])
        s = Site(corners[0], fi, 0)
        terms.append(HamTerm(f"B(f{fi})", "face", s,
                             face_operator(model, s, phi)))
    return terms


def _faces_at_vertex(c: Cellulation, v: int):
    out = []
    for fi in range(len(c.faces)):
        if v in c.face_corners_raw(c.faces[fi]):
            out.append(fi)
    return sorted(set(out))


def ground_projector(model: ModelSpec) -> ProductOp:
    """Ordered product of all Hamiltonian projectors."""
    return ProductOp(model, [t.op for t in hamiltonian(model)])


# ---------------------------------------------------------------------------
# diagnostics


def commutator_norm(op1: LatticeOperator, op2: LatticeOperator,
                    cap: int | None = None) -> float:
    """Max-abs entry of [op1, op2] on the union support (dense, cap-gated)."""
    model = op1.model
    support = sorted(set(op1.support) | set(op2.support))
    dims = [model.dims[e] for e in support]
    dloc = int(np.prod(dims)) if dims else 1
    cap = cap if cap is not None else model.dense_cap
    if dloc > cap:
        raise TooLargeError(f"commutator support dim {dloc} exceeds cap {cap}")
    M1 = _embed(op1, support, model)
    M2 = _embed(op2, support, model)
    return float(np.max(np.abs(M1 @ M2 - M2 @ M1)))


def commutator_residual(op1, op2, states) -> float:
    """max_psi ||(op1 op2 - op2 op1) psi|| over the given states."""
    r = 0.0
    for psi in states:
        a = op1.apply(op2.apply(psi)).amps - op2.apply(op1.apply(psi)).amps
        r = max(r, float(np.linalg.norm(a)))
    return r


def is_projector(op: LatticeOperator, tol: float = 1e-9,
                 hermitian: bool = True) -> bool:
    M = op.local_matrix()
    if np.max(np.abs(M @ M - M)) > tol:
        return False
    if hermitian:
        Md = op.dagger().local_matrix()
        if np.max(np.abs(Md - M)) > tol:
            return False
    return True
