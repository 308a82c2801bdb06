"""Combinatorial surfaces: cellulations, sites, triangles, ribbons, presets.

Conventions (fixed by the bulk model's worked 4-valent example and kept
consistent across the whole library):

* faces are stored as cyclic (edge, orient) lists traversed CCW with the
  interior on the left; ``orient=+1`` means the traversal follows the edge
  direction.  A face traverses an edge along iff it is the edge's left face.
* the dual edge points from the right face to the left face (rotate the
  edge direction counterclockwise by pi/2).
* vertex fans are CCW starting from the site; an edge gets "-" when the
  vertex is its origin.  Face fans start at the site corner; an edge gets
  "+" exactly when the face traverses it against its direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import LatticeValidationError

EULER = {"sphere": 2, "torus": 0, "disk": 1}


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    tag: str = "bulk"


@dataclass(frozen=True)
class Face:
    sides: tuple          # ((edge_index, +1/-1), ...) CCW, interior left

    def __len__(self):
        return len(self.sides)


@dataclass(frozen=True)
class Site:
    """A site s = (v, f); corner disambiguates faces touching v twice."""

    vertex: int
    face: int
    corner: int | None = None


@dataclass(frozen=True)
class Triangle:
    kind: str             # "direct" | "dual"
    chirality: str        # "L" | "R"
    s0: Site
    s1: Site
    edge: int
    along: bool           # (dual) edge direction matches triangle direction


@dataclass
class Ribbon:
    triangles: tuple
    type: str             # "A" | "B"
    closed: bool


class Cellulation:
    """A validated cellulation of a surface with directed edges."""

    def __init__(self, n_vertices, edges, faces, surface,
                 boundary_loops=(), name="lattice"):
        self.n_vertices = int(n_vertices)
        self.edges = [Edge(*e) if not isinstance(e, Edge) else e for e in edges]
        self.faces = [Face(tuple((int(e), int(o)) for e, o in f.sides))
                      if isinstance(f, Face) else Face(tuple(map(tuple, f)))
                      for f in faces]
        self.surface = surface
        self.boundary_loops = tuple(tuple(l) for l in boundary_loops)
        self.name = name
        self._validate()
        self._build_maps()

    # -- validation -----------------------------------------------------

    def _validate(self):
        V, E, F = self.n_vertices, len(self.edges), len(self.faces)
        for i, e in enumerate(self.edges):
            if e.tail == e.head:
                raise LatticeValidationError(f"edge {i} is a self-loop")
            if not (0 <= e.tail < V and 0 <= e.head < V):
                raise LatticeValidationError(f"edge {i} has a dangling end")
        counts = {}
        for fi, f in enumerate(self.faces):
            verts = self.face_corners_raw(f)
            for (e, o) in f.sides:
                if not (0 <= e < E) or o not in (1, -1):
                    raise LatticeValidationError(f"face {fi} has a bad side")
                counts[(e, o)] = counts.get((e, o), 0) + 1
        for (e, o), c in counts.items():
            if c > 1:
                raise LatticeValidationError(
                    f"dart ({e},{o:+d}) used by {c} faces")
        for e in range(E):
            c = counts.get((e, 1), 0) + counts.get((e, -1), 0)
            if c == 0:
                raise LatticeValidationError(f"edge {e} lies in no face")
        if self.surface in EULER and V - E + F != EULER[self.surface]:
            raise LatticeValidationError(
                f"Euler characteristic {V - E + F} != {EULER[self.surface]} "
                f"for a {self.surface}")
        for f in self.faces:
            # traversal must be a closed vertex walk
            walk = self.face_corners_raw(f)
            for k, (e, o) in enumerate(f.sides):
                a = walk[k]
                b = walk[(k + 1) % len(walk)]
                ed = self.edges[e]
                ta, he = (ed.tail, ed.head) if o == 1 else (ed.head, ed.tail)
                if (ta, he) != (a, b):
                    raise LatticeValidationError("face sides do not chain")

    def face_corners_raw(self, f: Face):
        """Corner vertices visited by the traversal, one per side."""
        out = []
        for (e, o) in f.sides:
            ed = self.edges[e]
            out.append(ed.tail if o == 1 else ed.head)
        return out

    # -- derived incidence ----------------------------------------------

    def _build_maps(self):
        E = len(self.edges)
        self.left_face = [None] * E
        self.right_face = [None] * E
        self._face_next = {}
        self._dart_face = {}
        for fi, f in enumerate(self.faces):
            n = len(f.sides)
            for k, (e, o) in enumerate(f.sides):
                if o == 1:
                    if self.left_face[e] is not None:
                        raise LatticeValidationError(f"edge {e} left side reused")
                    self.left_face[e] = fi
                else:
                    if self.right_face[e] is not None:
                        raise LatticeValidationError(f"edge {e} right side reused")
                    self.right_face[e] = fi
                self._face_next[(e, o)] = f.sides[(k + 1) % n]
                self._dart_face[(e, o)] = fi
        # CCW rotations: ccw successor of out-dart d is d' with
        # face_next(alpha(d')) == d
        self._ccw_next = {}
        self._out_darts = [[] for _ in range(self.n_vertices)]
        for e, ed in enumerate(self.edges):
            self._out_darts[ed.tail].append((e, 1))
            self._out_darts[ed.head].append((e, -1))
        for v in range(self.n_vertices):
            for d in self._out_darts[v]:
                alpha = (d[0], -d[1])
                nxt = self._face_next.get(alpha)
                if nxt is not None:
                    self._ccw_next[nxt] = d
        self._rotations = [self._rotation(v) for v in range(self.n_vertices)]

    def _rotation(self, v):
        darts = list(self._out_darts[v])
        if not darts:
            return []
        preds = {self._ccw_next[d] for d in darts if d in self._ccw_next}
        starts = [d for d in darts if d not in
                  {self._ccw_next[x] for x in darts if x in self._ccw_next}]
        start = starts[0] if starts else darts[0]
        order, seen = [], set()
        d = start
        while d is not None and d not in seen:
            order.append(d)
            seen.add(d)
            d = self._ccw_next.get(d)
        if len(order) != len(darts):
            raise LatticeValidationError(
                f"vertex {v}: rotation system is not a single chain")
        del preds
        return order

    def dart_tail(self, d):
        e, o = d
        return self.edges[e].tail if o == 1 else self.edges[e].head

    def dart_face(self, d):
        return self._dart_face.get(tuple(d))

    def edge_dims_tag(self, e):
        return self.edges[e].tag

    # -- sites and fans ---------------------------------------------------

    def face_corners(self, fi: int):
        """List of (corner position, vertex) for face fi."""
        return list(enumerate(self.face_corners_raw(self.faces[fi])))

    def site(self, vertex: int, face: int, corner: int | None = None) -> Site:
        hits = [k for k, v in self.face_corners(face) if v == vertex]
        if not hits:
            raise LatticeValidationError(
                f"vertex {vertex} is not a corner of face {face}")
        if corner is None:
            corner = hits[0]
        elif corner not in hits:
            raise LatticeValidationError("corner does not match vertex")
        return Site(vertex, face, corner)

    def all_sites(self):
        out = []
        for fi in range(len(self.faces)):
            for k, v in self.face_corners(fi):
                out.append(Site(v, fi, k))
        return out

    def vertex_fan(self, s: Site):
        """CCW (edge, sign) list around s.vertex starting at the site.

        sign "-" when the vertex is the edge's origin (L_- position).
        """
        f = self.faces[s.face]
        n = len(f.sides)
        corner = s.corner if s.corner is not None else self.site(
            s.vertex, s.face).corner
        arrive = f.sides[(corner - 1) % n]
        first = (arrive[0], -arrive[1])          # alpha(arrival dart)
        rot = self._rotations[s.vertex]
        if first not in rot:
            raise LatticeValidationError("site fan: dart not at vertex")
        i = rot.index(first)
        order = rot[i:] + rot[:i]
        return [(e, "-" if o == 1 else "+") for (e, o) in order]

    def face_fan(self, s: Site):
        """CCW (edge, sign) list around s.face starting at the site corner.

        sign "+" when the face is the origin of the dual edge, i.e. the
        traversal runs against the edge (T_+ position).
        """
        f = self.faces[s.face]
        n = len(f.sides)
        corner = s.corner if s.corner is not None else self.site(
            s.vertex, s.face).corner
        sides = [f.sides[(corner + k) % n] for k in range(n)]
        return [(e, "+" if o == -1 else "-") for (e, o) in sides]

    # -- dual lattice -----------------------------------------------------

    def dual_edges(self):
        """Dual edge of e as (tail face, head face) = (right, left)."""
        return [(self.right_face[e], self.left_face[e])
                for e in range(len(self.edges))]

    def boundary_edges(self):
        return [i for i, e in enumerate(self.edges) if e.tag == "boundary"]

    def wall_edges(self):
        return [i for i, e in enumerate(self.edges) if e.tag == "wall"]


# ---------------------------------------------------------------------------
# triangles and ribbons


def classify_triangle(c: Cellulation, s0: Site, s1: Site, edge: int) -> Triangle:
    e = c.edges[edge]
    if s0.face == s1.face and {s0.vertex, s1.vertex} == {e.tail, e.head}:
        f = s0.face
        if f not in (c.left_face[edge], c.right_face[edge]):
            raise LatticeValidationError("direct triangle: face not on edge")
        along = e.tail == s0.vertex
        chir = "R" if along == (c.left_face[edge] == f) else "L"
        return Triangle("direct", chir, s0, s1, edge, along)
    if s0.vertex == s1.vertex and \
            {s0.face, s1.face} == {c.left_face[edge], c.right_face[edge]}:
        v = s0.vertex
        if v not in (e.tail, e.head):
            raise LatticeValidationError("dual triangle: vertex not on edge")
        along = c.right_face[edge] == s0.face
        ccw = (v == e.tail and s0.face == c.right_face[edge]) or \
              (v == e.head and s0.face == c.left_face[edge])
        return Triangle("dual", "R" if ccw else "L", s0, s1, edge, along)
    raise LatticeValidationError("sites/edge do not form a triangle")


def make_ribbon(c: Cellulation, triangles) -> Ribbon:
    """Validate a triangle chain and infer its type (A or B)."""
    tris = []
    for t in triangles:
        tris.append(t if isinstance(t, Triangle)
                    else classify_triangle(c, *t))
    if not tris:
        raise LatticeValidationError("empty ribbon")
    for a, b in zip(tris, tris[1:]):
        if (a.s1.vertex, a.s1.face) != (b.s0.vertex, b.s0.face):
            raise LatticeValidationError("ribbon triangles do not chain")
    edges = [t.edge for t in tris]
    if len(set(edges)) != len(edges):
        raise LatticeValidationError("ribbon overlaps itself")
    dir_ch = {t.chirality for t in tris if t.kind == "direct"}
    dua_ch = {t.chirality for t in tris if t.kind == "dual"}
    if dir_ch <= {"L"} and dua_ch <= {"R"} and (dir_ch or dua_ch):
        rtype = "A"
    elif dir_ch <= {"R"} and dua_ch <= {"L"} and (dir_ch or dua_ch):
        rtype = "B"
    else:
        raise LatticeValidationError(
            f"mixed chirality pattern: direct={dir_ch}, dual={dua_ch}")
    closed = (tris[0].s0.vertex, tris[0].s0.face) == \
             (tris[-1].s1.vertex, tris[-1].s1.face)
    return Ribbon(tuple(tris), rtype, closed)


def vertex_ribbon(c: Cellulation, s: Site) -> Ribbon:
    """Elementary dual closed ribbon around s.vertex (type A), CCW from s."""
    f = c.faces[s.face]
    n = len(f.sides)
    corner = s.corner if s.corner is not None else c.site(s.vertex, s.face).corner
    arrive = f.sides[(corner - 1) % n]
    rot = c._rotations[s.vertex]
    first = (arrive[0], -arrive[1])
    i = rot.index(first)
    order = rot[i:] + rot[:i]
    tris = []
    cur = s
    for d in order:
        nxt_face = c.dart_face(d)
        if nxt_face is None:
            raise LatticeValidationError("vertex ribbon crosses the boundary")
        nxt = c.site(s.vertex, nxt_face,
                     _corner_after_crossing(c, s.vertex, d))
        tris.append(classify_triangle(c, cur, nxt, d[0]))
        cur = nxt
    return make_ribbon(c, tris)


def _corner_after_crossing(c: Cellulation, v: int, d):
    """Corner of dart-face(d) at v whose leaving dart is d."""
    fi = c.dart_face(d)
    f = c.faces[fi]
    for k, side in enumerate(f.sides):
        if side == d and c.face_corners_raw(f)[k] == v:
            return k
    raise LatticeValidationError("crossing corner not found")


def face_ribbon(c: Cellulation, s: Site) -> Ribbon:
    """Elementary direct closed ribbon around s.face (type B), CCW from s."""
    f = c.faces[s.face]
    n = len(f.sides)
    corner = s.corner if s.corner is not None else c.site(s.vertex, s.face).corner
    corners = c.face_corners_raw(f)
    tris = []
    for k in range(n):
        a = (corner + k) % n
        b = (corner + k + 1) % n
        s0 = Site(corners[a], s.face, a)
        s1 = Site(corners[b], s.face, b)
        tris.append(classify_triangle(c, s0, s1, f.sides[a][0]))
    return make_ribbon(c, tris)


# ---------------------------------------------------------------------------
# presets


def build_cellulation(n_vertices, edges, faces, surface,
                      boundary_loops=(), name="lattice") -> Cellulation:
    return Cellulation(n_vertices, edges, faces, surface, boundary_loops, name)


def _face_from_corners(edge_ix, corners):
    """(edge, orient) cycle from corner list + lookup (tail, head) -> edge."""
    sides = []
    n = len(corners)
    for k in range(n):
        a, b = corners[k], corners[(k + 1) % n]
        if (a, b) in edge_ix:
            sides.append((edge_ix[(a, b)], 1))
        elif (b, a) in edge_ix:
            sides.append((edge_ix[(b, a)], -1))
        else:
            raise LatticeValidationError(f"no edge between {a} and {b}")
    return Face(tuple(sides))


def torus_square(n: int, m: int) -> Cellulation:
    """Square-lattice torus; n*m vertices, 2nm edges, nm faces.

    For min(n, m) == 1 the sheared (brick) construction is used so that the
    graph stays simple (no self-loops); E = 2nm still holds.
    """
    if n < 1 or m < 1:
        raise LatticeValidationError("torus_square needs n, m >= 1")
    if n == 1 and m == 1:
        raise LatticeValidationError("torus_square(1,1) would need self-loops")
    if n == 1 or m == 1:
        k = max(n, m)
        # vertices w_0..w_{k-1}; h_j, v_j: w_j -> w_{j+1}
        edges = [(j, (j + 1) % k, "bulk") for j in range(k)]       # h_j
        edges += [(j, (j + 1) % k, "bulk") for j in range(k)]      # v_j = k + j
        faces = []
        for j in range(k):
            faces.append(Face(((j, 1), (k + (j + 1) % k, 1),
                               ((j + 1) % k, -1), (k + j, -1))))
        return Cellulation(k, edges, faces, "torus", name=f"torus_brick{k}")

    def vid(i, j):
        return (j % m) * n + (i % n)

    edges = []
    hix = {}
    vix = {}
    for j in range(m):
        for i in range(n):
            hix[(i, j)] = len(edges)
            edges.append((vid(i, j), vid(i + 1, j), "bulk"))
    for j in range(m):
        for i in range(n):
            vix[(i, j)] = len(edges)
            edges.append((vid(i, j), vid(i, j + 1), "bulk"))
    faces = []
    for j in range(m):
        for i in range(n):
            faces.append(Face(((hix[(i, j)], 1),
                               (vix[((i + 1) % n, j)], 1),
                               (hix[(i, (j + 1) % m)], -1),
                               (vix[(i, j)], -1))))
    return Cellulation(n * m, edges, faces, "torus", name=f"torus{n}x{m}")


def sphere_tetrahedron() -> Cellulation:
    edges = [(0, 1, "bulk"), (0, 2, "bulk"), (0, 3, "bulk"),
             (1, 2, "bulk"), (1, 3, "bulk"), (2, 3, "bulk")]
    ix = {(e[0], e[1]): k for k, e in enumerate(edges)}
    faces = [_face_from_corners(ix, c)
             for c in ((0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2))]
    return Cellulation(4, edges, faces, "sphere", name="tetra")


def disk_square(n: int, m: int) -> Cellulation:
    """n x m grid of faces on a disk; outer ring tagged boundary (CW loop,
    bulk to the right of each boundary edge)."""
    if n < 1 or m < 1:
        raise LatticeValidationError("disk_square needs n, m >= 1")

    def vid(i, j):
        return j * (n + 1) + i

    edges = []
    ix = {}

    def add(a, b, tag):
        ix[(a, b)] = len(edges)
        edges.append((a, b, tag))

    for j in range(m + 1):
        for i in range(n):
            a, b = vid(i, j), vid(i + 1, j)
            if j == 0:
                add(b, a, "boundary")          # bottom row points west
            elif j == m:
                add(a, b, "boundary")          # top row points east
            else:
                add(a, b, "bulk")
    for i in range(n + 1):
        for j in range(m):
            a, b = vid(i, j), vid(i, j + 1)
            if i == n:
                add(b, a, "boundary")          # right column points south
            else:
                add(a, b, "boundary" if i == 0 else "bulk")  # north
    faces = []
    for j in range(m):
        for i in range(n):
            faces.append(_face_from_corners(
                ix, (vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1))))
    loop = [vid(0, j) for j in range(m + 1)] \
        + [vid(i, m) for i in range(1, n + 1)] \
        + [vid(n, m - j) for j in range(1, m + 1)] \
        + [vid(n - i, 0) for i in range(1, n)]
    return Cellulation((n + 1) * (m + 1), edges, faces, "disk",
                       boundary_loops=(loop,), name=f"disk{n}x{m}")


def wall_strip(n: int, m: int = 1) -> Cellulation:
    """Sphere split by an equatorial wall circle with n vertices.

    Each hemisphere is a polar cap with m rings of n vertices (ring m is the
    shared wall circle).  Wall edges run CCW seen from the bulk1 side, so
    bulk1 is on the left when walking along the wall.
    """
    if n < 2 or m < 1:
        raise LatticeValidationError("wall_strip needs n >= 2, m >= 1")
    # vertex ids: 0 = north pole, 1 = south pole,
    # north rings r=1..m-1: 2 + (r-1)*n + i ; wall ring: 2 + (m-1)*n + i ;
    # south rings r=1..m-1: after wall ring.
    NP, SP = 0, 1

    def nring(r, i):  # r = 1..m ; r == m is the wall
        return 2 + (r - 1) * n + (i % n)

    def sring(r, i):  # r = 1..m-1
        return 2 + (m - 1) * n + n + (r - 1) * n + (i % n)

    def sring_or_wall(r, i):
        return nring(m, i) if r == m else sring(r, i)

    edges = []

    def add(a, b, tag):
        edges.append((a, b, tag))
        return len(edges) - 1

    # circles are indexed by their starting sector i; arcs run i -> i+1 on
    # the north side and are shared with the south cap at the wall.
    wall = [add(nring(m, i), nring(m, (i + 1) % n), "wall") for i in range(n)]
    nrad = {0: [add(NP, nring(1, i), "bulk1") for i in range(n)]}
    ncirc = {}
    for r in range(1, m):
        ncirc[r] = [add(nring(r, i), nring(r, (i + 1) % n), "bulk1")
                    for i in range(n)]
        nrad[r] = [add(nring(r, i), nring(r + 1, i), "bulk1")
                   for i in range(n)]
    ncirc[m] = wall
    srad = {0: [add(SP, sring_or_wall(1, i), "bulk2") for i in range(n)]}
    scirc = {}
    for r in range(1, m):
        scirc[r] = [add(sring(r, i), sring(r, (i + 1) % n), "bulk2")
                    for i in range(n)]
        srad[r] = [add(sring(r, i), sring_or_wall(r + 1, i), "bulk2")
                   for i in range(n)]
    scirc[m] = wall

    faces = []
    # north cap, CCW seen from outside (north): wall/ring arcs run along
    for i in range(n):
        faces.append(Face(((nrad[0][i], 1), (ncirc[1][i] if m > 1 else wall[i], 1),
                           (nrad[0][(i + 1) % n], -1))))
    for r in range(1, m):
        for i in range(n):
            faces.append(Face(((nrad[r][i], 1), (ncirc[r + 1][i], 1),
                               (nrad[r][(i + 1) % n], -1), (ncirc[r][i], -1))))
    # south cap, CCW seen from outside (south): shared arcs run against
    for i in range(n):
        faces.append(Face(((srad[0][(i + 1) % n], 1),
                           (scirc[1][i] if m > 1 else wall[i], -1),
                           (srad[0][i], -1))))
    for r in range(1, m):
        for i in range(n):
            faces.append(Face(((srad[r][(i + 1) % n], 1), (scirc[r + 1][i], -1),
                               (srad[r][i], -1), (scirc[r][i], 1))))
    V = 2 + (2 * m - 1) * n
    return Cellulation(V, edges, faces, "sphere", name=f"wall{n}x{m}")


def boundary_strip(n: int) -> Cellulation:
    """A 1 x n strip of faces with a single marked boundary edge at the left.

    Top edges point east, interior verticals south, the left vertical is the
    boundary edge (pointing north, bulk on its right).  Used for
    bulk-to-boundary ribbon constructions.
    """
    if n < 1:
        raise LatticeValidationError("boundary_strip needs n >= 1")

    def bot(x):
        return x

    def top(x):
        return (n + 1) + x

    edges = []
    ix = {}

    def add(a, b, tag):
        ix[(a, b)] = len(edges)
        edges.append((a, b, tag))

    add(bot(0), top(0), "boundary")
    for x in range(1, n + 1):
        add(top(x), bot(x), "bulk")            # verticals point south
    for x in range(n):
        add(top(x), top(x + 1), "bulk")        # top east
        add(bot(x), bot(x + 1), "bulk")        # bottom east
    faces = [_face_from_corners(ix, (bot(x), bot(x + 1), top(x + 1), top(x)))
             for x in range(n)]
    return Cellulation(2 * (n + 1), edges, faces, "disk",
                       boundary_loops=((bot(0), top(0)),),
                       name=f"strip{n}")
