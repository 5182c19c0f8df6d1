"""Web storage: slice drawings, combinatorial maps, and canonical codes.

A web on n strands is a planar graph drawn in a horizontal band with n
univalent source vertices on the left boundary, n univalent sink
vertices on the right, and trivalent internal vertices, every edge
oriented so that each vertex is all-in (a sink) or all-out (a source).

Three representations cooperate:

- SliceDiagram: a concrete drawing, one tile per vertical slice.  The
  drawing is what the weight statistic of module labelings reads.
- PlanarMap: the embedding-free rotation system (darts, twins, cyclic
  orders) plus a count of closed loops.  The algebra lives here.
- canonical code: an integer tuple identifying a PlanarMap up to
  boundary-preserving isomorphism.  Webs hash and compare by code.

Closed loops carry no chirality or nesting data: every quantity the
package computes is invariant under both, so a bare count suffices.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

RIGHT = "R"
LEFT = "L"

# tile -> (wires consumed, wires produced)
TILE_ARITY = {"merge": (2, 1), "split": (1, 2), "cup": (0, 2), "cap": (2, 0)}

ROLE_SRC = "src"
ROLE_SNK = "snk"
ROLE_SINK = "sink"      # internal, all edges point in
ROLE_SOURCE = "source"  # internal, all edges point out


class WebError(ValueError):
    """Structurally invalid web data."""


# ---------------------------------------------------------------------------
# Slice diagrams


@dataclass(frozen=True)
class Column:
    """One tile at wire position pos (1-based, counted from the top).

    dirs holds the direction flags of the tile's legs: merge
    (left-top, left-bottom, right), split (left, right-top,
    right-bottom), cup and cap (top, bottom).  A flag is "R" when the
    edge's source-to-sink orientation runs with the x-axis on that leg.
    """

    pos: int
    tile: str
    dirs: tuple[str, ...]

    def __post_init__(self):
        if self.tile not in TILE_ARITY:
            raise WebError(f"unknown tile {self.tile!r}")
        want = {"merge": 3, "split": 3, "cup": 2, "cap": 2}[self.tile]
        if len(self.dirs) != want or any(d not in (RIGHT, LEFT) for d in self.dirs):
            raise WebError(f"bad dirs {self.dirs!r} for {self.tile}")
        if self.pos < 1:
            raise WebError(f"position {self.pos} out of range")


@dataclass(frozen=True)
class SliceDiagram:
    n: int
    columns: tuple[Column, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise WebError(f"strand count must be positive, got {self.n}")

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "columns": [
                {"pos": c.pos, "tile": c.tile, "dirs": list(c.dirs)}
                for c in self.columns
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "SliceDiagram":
        try:
            n = int(obj["n"])
            cols = tuple(
                Column(int(c["pos"]), str(c["tile"]), tuple(c["dirs"]))
                for c in obj.get("columns", [])
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise WebError(f"malformed web JSON: {exc}") from exc
        return cls(n, cols)


def identity_web(n: int) -> SliceDiagram:
    """n parallel strands, no internal vertices."""
    return SliceDiagram(n)


def generator_web(n: int, i: int) -> SliceDiagram:
    """Two-vertex web on strands i, i+1: the strands run into an internal
    sink, and a mirrored internal source feeds strands i, i+1 on the
    right; one leftward middle edge runs from the source to the sink."""
    if not 1 <= i <= n - 1:
        raise WebError(f"generator position {i} out of range for n={n}")
    return SliceDiagram(
        n,
        (
            Column(i, "merge", (RIGHT, RIGHT, LEFT)),
            Column(i, "split", (LEFT, RIGHT, RIGHT)),
        ),
    )


def concatenate(a: SliceDiagram, b: SliceDiagram) -> SliceDiagram:
    if a.n != b.n:
        raise WebError(f"strand counts differ: {a.n} vs {b.n}")
    return SliceDiagram(a.n, a.columns + b.columns)


# ---------------------------------------------------------------------------
# Planar maps

_ROLE_RANK = {ROLE_SRC: 0, ROLE_SNK: 1}


class PlanarMap:
    """Rotation system of a web.

    Vertices are 0..2n-1 for the boundary (sources then sinks, by
    position) followed by internal vertices.  Edge k owns darts 2k (at
    its tail, the source side) and 2k+1 (at its head); twin(d) = d^1.
    rot[v] lists v's darts in counterclockwise order (x right, y up).
    """

    __slots__ = ("n", "roles", "rot", "edges", "loops", "dart_vertex", "_faces")

    def __init__(
        self,
        n: int,
        roles: Sequence[tuple],
        rot_refs: Sequence[Sequence[tuple[int, int]]],
        edges: Sequence[tuple[int, int]],
        loops: int = 0,
    ):
        # rot_refs[v]: CCW list of (edge id, end) with end 0 = tail, 1 = head
        self.n = n
        self.roles = tuple(tuple(r) for r in roles)
        self.edges = tuple((t, h) for t, h in edges)
        self.loops = loops
        self._faces = None
        if loops < 0:
            raise WebError("negative loop count")
        if len(self.roles) < 2 * n:
            raise WebError("boundary vertices missing")
        for i in range(n):
            if self.roles[i] != (ROLE_SRC, i + 1) or self.roles[n + i] != (ROLE_SNK, i + 1):
                raise WebError("boundary vertices must come first, in order")
        dv = [-1] * (2 * len(self.edges))
        for eid, (t, h) in enumerate(self.edges):
            if t == h:
                raise WebError("edge with both ends at one vertex")
            dv[2 * eid] = t
            dv[2 * eid + 1] = h
        self.dart_vertex = tuple(dv)
        rot = []
        seen = set()
        for v, refs in enumerate(rot_refs):
            darts = []
            for eid, end in refs:
                d = 2 * eid + end
                if not 0 <= eid < len(self.edges) or end not in (0, 1):
                    raise WebError("rotation references a missing edge end")
                if self.dart_vertex[d] != v:
                    raise WebError(f"dart of edge {eid} listed at wrong vertex")
                if d in seen:
                    raise WebError(f"dart {d} listed twice")
                seen.add(d)
                darts.append(d)
            rot.append(tuple(darts))
        if len(rot) != len(self.roles):
            raise WebError("rotation/role length mismatch")
        if len(seen) != len(dv):
            raise WebError("some edge ends missing from rotations")
        self.rot = tuple(rot)
        for v, role in enumerate(self.roles):
            want = 1 if role[0] in (ROLE_SRC, ROLE_SNK) else 3
            if len(self.rot[v]) != want:
                raise WebError(f"vertex {v} has degree {len(self.rot[v])}, wants {want}")
        for t, h in self.edges:
            if self.roles[t][0] not in (ROLE_SRC, ROLE_SOURCE):
                raise WebError("edge tail must sit at a source-side vertex")
            if self.roles[h][0] not in (ROLE_SNK, ROLE_SINK):
                raise WebError("edge head must sit at a sink-side vertex")

    # -- basic structure ------------------------------------------------

    def internal_vertices(self) -> list[int]:
        return [v for v in range(len(self.roles)) if self.roles[v][0] in (ROLE_SINK, ROLE_SOURCE)]

    @property
    def internal_vertex_count(self) -> int:
        return len(self.roles) - 2 * self.n

    def twin(self, d: int) -> int:
        return d ^ 1

    def face_next(self, d: int) -> int:
        t = d ^ 1
        r = self.rot[self.dart_vertex[t]]
        return r[(r.index(t) + 1) % len(r)]

    def faces(self) -> tuple[tuple[int, ...], ...]:
        """All face walks, as dart orbits of the face-next permutation."""
        if self._faces is None:
            seen = set()
            out = []
            for d0 in range(len(self.dart_vertex)):
                if d0 in seen:
                    continue
                orbit = []
                d = d0
                while True:
                    orbit.append(d)
                    seen.add(d)
                    d = self.face_next(d)
                    if d == d0:
                        break
                out.append(tuple(orbit))
            self._faces = tuple(out)
        return self._faces

    def components(self) -> list[set[int]]:
        """Vertex sets of connected components (loops not included)."""
        parent = list(range(len(self.roles)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t, h in self.edges:
            rt, rh = find(t), find(h)
            if rt != rh:
                parent[rt] = rh
        groups: dict[int, set[int]] = {}
        for v in range(len(self.roles)):
            groups.setdefault(find(v), set()).add(v)
        return sorted(groups.values(), key=min)

    def boundary_rank(self, v: int) -> int:
        """Position in the boundary cycle src1..srcn, snkn..snk1."""
        role = self.roles[v]
        if role[0] == ROLE_SRC:
            return role[1] - 1
        if role[0] == ROLE_SNK:
            return self.n + (self.n - role[1])
        raise WebError(f"vertex {v} is not on the boundary")

    def outer_face_indices(self) -> set[int]:
        """Index (into faces()) of the unbounded face of each component.

        For a component touching the boundary this is the face through
        its first boundary dart.  A closed component has no intrinsic
        outside; its face through the smallest dart stands in, which is
        sound for reduction because rewriting is confluent on closed
        webs wherever the outside is declared.
        """
        faces = self.faces()
        where = {}
        for fi, orbit in enumerate(faces):
            for d in orbit:
                where[d] = fi
        out = set()
        for comp in self.components():
            bnd = [v for v in comp if self.roles[v][0] in (ROLE_SRC, ROLE_SNK)]
            if bnd:
                root = min(bnd, key=self.boundary_rank)
                out.add(where[self.rot[root][0]])
            else:
                d = min(d for v in comp for d in self.rot[v])
                out.add(where[d])
        return out

    # -- validation -----------------------------------------------------

    def validate(self) -> None:
        """Planarity and boundary-order checks via Euler counts and the
        outer face walk; raises WebError on the first violation."""
        faces = self.faces()
        where = {}
        for fi, orbit in enumerate(faces):
            for d in orbit:
                where[d] = fi
        comps = self.components()
        intervals = []
        for comp in comps:
            ecount = sum(1 for t, h in self.edges if t in comp)
            darts = {d for v in comp for d in self.rot[v]}
            fcount = len({where[d] for d in darts})
            if len(comp) - ecount + fcount != 2:
                raise WebError("component fails the Euler planarity count")
            bnd = [v for v in comp if self.roles[v][0] in (ROLE_SRC, ROLE_SNK)]
            if not bnd:
                continue
            root = min(bnd, key=self.boundary_rank)
            orbit = faces[where[self.rot[root][0]]]
            walk_ranks = [
                self.boundary_rank(self.dart_vertex[d])
                for d in orbit
                if self.roles[self.dart_vertex[d]][0] in (ROLE_SRC, ROLE_SNK)
            ]
            if sorted(walk_ranks) != sorted(self.boundary_rank(v) for v in bnd):
                raise WebError("a boundary vertex is not on its component's outer face")
            lo = walk_ranks.index(min(walk_ranks))
            rotated = walk_ranks[lo:] + walk_ranks[:lo]
            if rotated != sorted(rotated):
                raise WebError("boundary order violated along the outer face")
            intervals.append(sorted(walk_ranks))
        for i in range(len(intervals)):
            for j in range(i + 1, len(intervals)):
                if _cyclically_crossing(intervals[i], intervals[j]):
                    raise WebError("two components interleave along the boundary")


def _cyclically_crossing(a: list[int], b: list[int]) -> bool:
    # a, b: sorted rank lists of two components; crossing iff b is not
    # contained in a single cyclic gap of a (and vice versa is implied)
    if len(a) < 2 or len(b) < 2:
        return False
    for k in range(len(a)):
        lo = a[k]
        hi = a[(k + 1) % len(a)]
        if all(_cyc_between(lo, x, hi) for x in b):
            return False
    return True


def _cyc_between(lo: int, x: int, hi: int) -> bool:
    if lo < hi:
        return lo < x < hi
    return x > lo or x < hi


# ---------------------------------------------------------------------------
# Drawing geometry for the weight statistic


@dataclass(frozen=True)
class DrawingGeometry:
    """What the labeling-weight statistic needs from one drawing.

    vertex_sides: per internal vertex, (left edge ids, right edge ids),
    each listed top to bottom.  edge_turns: per edge, the signs of its
    vertical tangencies (+1 for a turn that reads upward through a
    right-opening tangency or downward through a left-opening one).
    loop_turns: the same, per drawn closed loop.
    """

    vertex_sides: Mapping[int, tuple[tuple[int, ...], tuple[int, ...]]]
    edge_turns: Mapping[int, tuple[int, ...]]
    loop_turns: tuple[tuple[int, ...], ...]


def to_map(diagram: SliceDiagram) -> tuple[PlanarMap, DrawingGeometry]:
    """Assemble the rotation system of a drawing.

    Cup and cap tangencies are erased (an edge is a maximal chain of
    wire segments); their turn signs are kept in the geometry.
    """
    n = diagram.n
    seg_dir: list[str] = []

    def new_seg(d: str) -> int:
        seg_dir.append(d)
        return len(seg_dir) - 1

    joins: dict[tuple[int, int], tuple[tuple[int, int], int]] = {}
    terms: dict[tuple[int, int], tuple] = {}
    vroles: list[str] = []

    wires: list[int] = []
    for i in range(n):
        s = new_seg(RIGHT)
        terms[(s, 0)] = (ROLE_SRC, i + 1)
        wires.append(s)

    for ci, col in enumerate(diagram.columns):
        p = col.pos
        used, made = TILE_ARITY[col.tile]
        top = len(wires) + 1 if col.tile == "cup" else len(wires) - used + 1
        if not 1 <= p <= top:
            raise WebError(f"column {ci}: position {p} out of range")
        if col.tile == "merge":
            a, b, c = col.dirs
            w1, w2 = wires[p - 1], wires[p]
            if (seg_dir[w1], seg_dir[w2]) != (a, b):
                raise WebError(f"column {ci}: leg directions disagree with incoming wires")
            if (a, b, c) == (RIGHT, RIGHT, LEFT):
                role = ROLE_SINK
            elif (a, b, c) == (LEFT, LEFT, RIGHT):
                role = ROLE_SOURCE
            else:
                raise WebError(f"column {ci}: vertex is neither all-in nor all-out")
            vid = len(vroles)
            vroles.append(role)
            terms[(w1, 1)] = ("v", vid, 0, 0)
            terms[(w2, 1)] = ("v", vid, 0, 1)
            s3 = new_seg(c)
            terms[(s3, 0)] = ("v", vid, 1, 0)
            wires[p - 1 : p + 1] = [s3]
        elif col.tile == "split":
            a, b, c = col.dirs
            w = wires[p - 1]
            if seg_dir[w] != a:
                raise WebError(f"column {ci}: leg directions disagree with incoming wires")
            if (a, b, c) == (RIGHT, LEFT, LEFT):
                role = ROLE_SINK
            elif (a, b, c) == (LEFT, RIGHT, RIGHT):
                role = ROLE_SOURCE
            else:
                raise WebError(f"column {ci}: vertex is neither all-in nor all-out")
            vid = len(vroles)
            vroles.append(role)
            terms[(w, 1)] = ("v", vid, 0, 0)
            s1, s2 = new_seg(b), new_seg(c)
            terms[(s1, 0)] = ("v", vid, 1, 0)
            terms[(s2, 0)] = ("v", vid, 1, 1)
            wires[p - 1 : p] = [s1, s2]
        elif col.tile == "cup":
            a, b = col.dirs
            if {a, b} != {RIGHT, LEFT}:
                raise WebError(f"column {ci}: cup legs must run in opposite senses")
            sg = 1 if a == RIGHT else -1
            s1, s2 = new_seg(a), new_seg(b)
            joins[(s1, 0)] = ((s2, 0), sg)
            joins[(s2, 0)] = ((s1, 0), sg)
            wires[p - 1 : p - 1] = [s1, s2]
        else:  # cap
            a, b = col.dirs
            w1, w2 = wires[p - 1], wires[p]
            if (seg_dir[w1], seg_dir[w2]) != (a, b):
                raise WebError(f"column {ci}: leg directions disagree with incoming wires")
            if {a, b} != {RIGHT, LEFT}:
                raise WebError(f"column {ci}: cap legs must run in opposite senses")
            sg = 1 if a == RIGHT else -1
            joins[(w1, 1)] = ((w2, 1), sg)
            joins[(w2, 1)] = ((w1, 1), sg)
            del wires[p - 1 : p + 1]

    if len(wires) != n:
        raise WebError(f"diagram ends with {len(wires)} wires, expected {n}")
    for j, s in enumerate(wires):
        if seg_dir[s] != RIGHT:
            raise WebError(f"sink strand {j + 1} arrives oriented leftward")
        terms[(s, 1)] = (ROLE_SNK, j + 1)

    # stitch segments into edges and loops
    def term_key(end):
        t = terms[end]
        if t[0] == ROLE_SRC:
            return (0, t[1])
        if t[0] == ROLE_SNK:
            return (1, t[1])
        return (2, t[1], t[2], t[3])

    edges_raw = []
    seen_ends = set()
    for end in sorted(terms, key=term_key):
        if end in seen_ends:
            continue
        seen_ends.add(end)
        t1 = terms[end]
        turns = []
        cur = (end[0], 1 - end[1])
        while cur in joins:
            nxt, sg = joins[cur]
            turns.append(sg)
            seen_ends.add(nxt)
            cur = (nxt[0], 1 - nxt[1])
        seen_ends.add(cur)
        edges_raw.append((t1, terms[cur], tuple(turns)))

    loop_turns = []
    visited_segs = {e[0] for e in seen_ends}
    for s in range(len(seg_dir)):
        if s in visited_segs:
            continue
        turns = []
        cur = (s, 0)
        while True:
            nxt, sg = joins[cur]
            turns.append(sg)
            visited_segs.add(nxt[0])
            cur = (nxt[0], 1 - nxt[1])
            if cur == (s, 0):
                break
        loop_turns.append(tuple(turns))

    # terminals to global vertex ids
    def vertex_of(t) -> int:
        if t[0] == ROLE_SRC:
            return t[1] - 1
        if t[0] == ROLE_SNK:
            return n + t[1] - 1
        return 2 * n + t[1]

    def is_tail(t) -> bool:
        if t[0] == ROLE_SRC:
            return True
        if t[0] == ROLE_SNK:
            return False
        return vroles[t[1]] == ROLE_SOURCE

    edges = []
    slot_edge: dict[tuple[int, int, int], tuple[int, int]] = {}
    edge_turns: dict[int, tuple[int, ...]] = {}
    bnd_edge = {}
    for t1, t2, turns in edges_raw:
        if is_tail(t1) == is_tail(t2):
            raise WebError("an edge must run from a source-side end to a sink-side end")
        tail, head = (t1, t2) if is_tail(t1) else (t2, t1)
        eid = len(edges)
        edges.append((vertex_of(tail), vertex_of(head)))
        edge_turns[eid] = turns
        for t, endflag in ((tail, 0), (head, 1)):
            if t[0] == "v":
                slot_edge[(t[1], t[2], t[3])] = (eid, endflag)
            else:
                bnd_edge[vertex_of(t)] = (eid, endflag)

    roles: list[tuple] = [(ROLE_SRC, i + 1) for i in range(n)]
    roles += [(ROLE_SNK, j + 1) for j in range(n)]
    roles += [(r,) for r in vroles]

    rot_refs: list[list[tuple[int, int]]] = []
    for v in range(2 * n):
        if v not in bnd_edge:
            raise WebError("a boundary vertex ended up with no edge")
        rot_refs.append([bnd_edge[v]])
    vertex_sides = {}
    for vid in range(len(vroles)):
        left = [slot_edge[k] for k in ((vid, 0, 0), (vid, 0, 1)) if k in slot_edge]
        right = [slot_edge[k] for k in ((vid, 1, 0), (vid, 1, 1)) if k in slot_edge]
        if len(left) + len(right) != 3:
            raise WebError("internal vertex is not trivalent")
        if len(left) == 2:  # merge: CCW order right, left-top, left-bottom
            rot_refs.append([right[0], left[0], left[1]])
        else:  # split: CCW order right-top, left, right-bottom
            rot_refs.append([right[0], left[0], right[1]])
        gv = 2 * n + vid
        vertex_sides[gv] = (
            tuple(e for e, _ in left),
            tuple(e for e, _ in right),
        )

    m = PlanarMap(n, roles, rot_refs, edges, loops=len(loop_turns))
    geom = DrawingGeometry(vertex_sides, edge_turns, tuple(loop_turns))
    return m, geom


# ---------------------------------------------------------------------------
# Canonical codes

_ROLE_CODE = {ROLE_SRC: 1, ROLE_SNK: 2, ROLE_SINK: 3, ROLE_SOURCE: 4}
_CODE_ROLE = {v: k for k, v in _ROLE_CODE.items()}


def _encode_from(m: PlanarMap, root_dart: int) -> tuple[list[int], list[int]]:
    vnum: dict[int, int] = {}
    enum: dict[int, int] = {}
    eorder: list[int] = []
    out: list[int] = []
    v0 = m.dart_vertex[root_dart]
    vnum[v0] = 0
    queue = deque([(v0, root_dart)])
    while queue:
        v, entry = queue.popleft()
        role = m.roles[v]
        out.append(_ROLE_CODE[role[0]])
        out.append(role[1] if len(role) > 1 else 0)
        r = m.rot[v]
        i = r.index(entry)
        for k in range(len(r)):
            d = r[(i + k) % len(r)]
            e = d >> 1
            if e not in enum:
                enum[e] = len(enum)
                eorder.append(e)
                w = m.dart_vertex[d ^ 1]
                if w not in vnum:
                    vnum[w] = len(vnum)
                    queue.append((w, d ^ 1))
            out.append(enum[e])
    return out, eorder


def _keyed_blocks(m: PlanarMap) -> list[tuple[tuple, list[int], list[int]]]:
    keyed = []
    for comp in m.components():
        bnd = [v for v in comp if m.roles[v][0] in (ROLE_SRC, ROLE_SNK)]
        if bnd:
            root = min(bnd, key=m.boundary_rank)
            block, eorder = _encode_from(m, m.rot[root][0])
            keyed.append(((0, m.boundary_rank(root)), block, eorder))
        else:
            block, eorder = min(
                (_encode_from(m, d) for v in comp for d in m.rot[v]),
                key=lambda be: be[0],
            )
            keyed.append(((1, tuple(block)), block, eorder))
    keyed.sort(key=lambda kbe: kbe[0])
    return keyed


def canonical_form(m: PlanarMap) -> tuple[int, ...]:
    """Deterministic, isomorphism-complete code of a map.

    Components touching the boundary are rooted at their first boundary
    vertex; closed components are rooted to minimize their own code.
    Loop components contribute only their count.
    """
    keyed = _keyed_blocks(m)
    code = [m.n, m.loops, len(keyed)]
    for _, block, _ in keyed:
        code.append(len(block))
        code.extend(block)
    return tuple(code)


def canonical_edge_order(m: PlanarMap) -> tuple[int, ...]:
    """Edge ids of m listed in the order canonical encoding meets them.
    Two maps with equal codes are matched edge-for-edge by zipping
    their orders."""
    out: list[int] = []
    for _, _, eorder in _keyed_blocks(m):
        out.extend(eorder)
    return tuple(out)


def decode_code(code: Sequence[int]) -> PlanarMap:
    """Rebuild a PlanarMap from a canonical code; rejects junk input by
    re-encoding and comparing."""
    code = tuple(int(x) for x in code)
    if len(code) < 3:
        raise WebError("code too short")
    n, loops, ncomp = code[0], code[1], code[2]
    if n < 1 or loops < 0 or ncomp < 0:
        raise WebError("bad code header")
    pos = 3
    roles: list[tuple] = [(ROLE_SRC, i + 1) for i in range(n)]
    roles += [(ROLE_SNK, j + 1) for j in range(n)]
    rot_refs: list[list] = [None] * (2 * n)
    edges: list[list] = []
    for _ in range(ncomp):
        if pos >= len(code):
            raise WebError("truncated code")
        blen = code[pos]
        pos += 1
        block = code[pos : pos + blen]
        if len(block) != blen:
            raise WebError("truncated code")
        pos += blen
        # parse vertex records: role, param, then 1 or 3 edge numbers
        recs = []
        i = 0
        while i < len(block):
            if i + 2 > len(block):
                raise WebError("truncated vertex record")
            rc, param = block[i], block[i + 1]
            if rc not in _CODE_ROLE:
                raise WebError(f"unknown role code {rc}")
            deg = 1 if rc in (1, 2) else 3
            if i + 2 + deg > len(block):
                raise WebError("truncated vertex record")
            recs.append((rc, param, tuple(block[i + 2 : i + 2 + deg])))
            i += 2 + deg
        # local vertex -> global id
        gids = []
        eends: dict[int, list[tuple[int, int]]] = {}
        for rc, param, elist in recs:
            if rc == 1:
                if not 1 <= param <= n:
                    raise WebError("source index out of range")
                gid = param - 1
            elif rc == 2:
                if not 1 <= param <= n:
                    raise WebError("sink index out of range")
                gid = n + param - 1
            else:
                gid = len(roles)
                roles.append((_CODE_ROLE[rc],))
                rot_refs.append(None)
            if rot_refs[gid] is not None:
                raise WebError("vertex appears in two components")
            rot_refs[gid] = []
            gids.append(gid)
        base = len(edges)
        local_count = 1 + max((e for _, _, el in recs for e in el), default=-1)
        for _ in range(local_count):
            edges.append([None, None])
        for (rc, param, elist), gid in zip(recs, gids):
            for le in elist:
                eends.setdefault(le, []).append(gid)
        for le, vs in sorted(eends.items()):
            if len(vs) != 2:
                raise WebError(f"edge {le} does not have exactly two ends")
            src_side = [v for v in vs if roles[v][0] in (ROLE_SRC, ROLE_SOURCE)]
            snk_side = [v for v in vs if roles[v][0] in (ROLE_SNK, ROLE_SINK)]
            if len(src_side) != 1 or len(snk_side) != 1:
                raise WebError("edge does not join a source side to a sink side")
            edges[base + le] = [src_side[0], snk_side[0]]
        for (rc, param, elist), gid in zip(recs, gids):
            refs = []
            for le in elist:
                eid = base + le
                end = 0 if edges[eid][0] == gid else 1
                refs.append((eid, end))
            rot_refs[gid] = refs
    if pos != len(code):
        raise WebError("trailing data in code")
    for v in range(2 * n):
        if rot_refs[v] is None:
            raise WebError(f"boundary vertex {v} missing from code")
    m = PlanarMap(n, roles, rot_refs, [tuple(e) for e in edges], loops=loops)
    if canonical_form(m) != code:
        raise WebError("code is not in canonical form")
    return m


# ---------------------------------------------------------------------------
# Rendering a map back to a slice diagram


def render(m: PlanarMap, salt: int = 0) -> SliceDiagram:
    """Produce some drawing of m.  Any embedding is acceptable; the
    weight statistic is drawing-independent.  Different salts may give
    different embeddings.  Loop components must be removed first."""
    if m.loops:
        raise WebError("cannot draw a map with abstract loop components")
    comp_sets = m.components()
    comp_of = {}
    for ci, comp in enumerate(comp_sets):
        for v in comp:
            comp_of[v] = ci
    has_src = {
        ci
        for ci, comp in enumerate(comp_sets)
        if any(m.roles[v][0] == ROLE_SRC for v in comp)
    }
    # initial frontier: the far ends of all source edges, top to bottom
    frontier = []
    for i in range(m.n):
        d = m.rot[i][0]
        frontier.append(d ^ 1)
    target = tuple(m.rot[m.n + j][0] for j in range(m.n))
    internal = m.internal_vertices()
    rng = random.Random(salt) if salt else None

    def flag(d: int) -> str:
        # wire runs rightward when its pending end is the edge's head
        return RIGHT if d & 1 else LEFT

    def vertex_moves(F: tuple[int, ...], placed: frozenset[int]):
        pos_of: dict[int, list[int]] = {}
        for p, d in enumerate(F):
            v = m.dart_vertex[d]
            if m.roles[v][0] in (ROLE_SINK, ROLE_SOURCE) and v not in placed:
                pos_of.setdefault(v, []).append(p)
        moves = []
        for v, ps in pos_of.items():
            if ps != list(range(ps[0], ps[0] + len(ps))):
                continue
            p = ps[0]
            ds = [F[q] for q in ps]
            rot = m.rot[v]
            if len(ds) == 1:
                moves.append(("split", v, p, ds))
            elif len(ds) == 2:
                eps = [d for d in rot if d not in ds]
                if _cyclic_eq(rot, (eps[0], ds[0], ds[1])):
                    moves.append(("merge", v, p, ds))
            else:
                if _cyclic_eq(rot, (ds[2], ds[0], ds[1])):
                    moves.append(("close", v, p, ds))
        moves.sort(key=lambda mv: (mv[2], mv[0]))
        return moves

    def seed_moves(F: tuple[int, ...], placed: frozenset[int]):
        started_comps = {comp_of[m.dart_vertex[d]] for d in F}
        started_comps |= {comp_of[v] for v in placed}
        pending = sorted(
            ci
            for ci in range(len(comp_sets))
            if ci not in started_comps and ci not in has_src
        )
        if not pending:
            return []
        ci = pending[0]
        eids = sorted(
            e for e, (t, h) in enumerate(m.edges) if comp_of[t] == ci
        )
        moves = []
        for e in eids:
            for p in range(len(F) + 1):
                for order in ((2 * e + 1, 2 * e), (2 * e, 2 * e + 1)):
                    moves.append(("seed", e, p, order))
        return moves

    visited = set()

    def dfs(F: tuple[int, ...], placed: frozenset[int], cols: list[Column]) -> bool:
        if len(placed) == len(internal) and F == target:
            return True
        key = (F, placed)
        if key in visited:
            return False
        visited.add(key)
        moves = vertex_moves(F, placed) + seed_moves(F, placed)
        if rng is not None:
            rng.shuffle(moves)
        for mv in moves:
            kind = mv[0]
            if kind == "split":
                _, v, p, ds = mv
                d = ds[0]
                rot = m.rot[v]
                i = rot.index(d)
                bot, top = rot[(i + 1) % 3], rot[(i + 2) % 3]
                role = m.roles[v][0]
                dirs = (RIGHT, LEFT, LEFT) if role == ROLE_SINK else (LEFT, RIGHT, RIGHT)
                F2 = F[:p] + (top ^ 1, bot ^ 1) + F[p + 1 :]
                cols.append(Column(p + 1, "split", dirs))
                if dfs(F2, placed | {v}, cols):
                    return True
                cols.pop()
            elif kind == "merge":
                _, v, p, ds = mv
                rot = m.rot[v]
                eps = [d for d in rot if d not in ds][0]
                role = m.roles[v][0]
                dirs = (RIGHT, RIGHT, LEFT) if role == ROLE_SINK else (LEFT, LEFT, RIGHT)
                F2 = F[:p] + (eps ^ 1,) + F[p + 2 :]
                cols.append(Column(p + 1, "merge", dirs))
                if dfs(F2, placed | {v}, cols):
                    return True
                cols.pop()
            elif kind == "close":
                _, v, p, ds = mv
                role = m.roles[v][0]
                dirs = (RIGHT, RIGHT, LEFT) if role == ROLE_SINK else (LEFT, LEFT, RIGHT)
                out_dir = LEFT if role == ROLE_SINK else RIGHT
                cap_dirs = (out_dir, flag(ds[2]))
                F2 = F[:p] + F[p + 3 :]
                cols.append(Column(p + 1, "merge", dirs))
                cols.append(Column(p + 1, "cap", cap_dirs))
                if dfs(F2, placed | {v}, cols):
                    return True
                cols.pop()
                cols.pop()
            else:
                _, e, p, order = mv
                dirs = (flag(order[0]), flag(order[1]))
                F2 = F[:p] + order + F[p:]
                cols.append(Column(p + 1, "cup", dirs))
                if dfs(F2, placed, cols):
                    return True
                cols.pop()
        return False

    cols: list[Column] = []
    if not dfs(tuple(frontier), frozenset(), cols):
        raise WebError("map admits no slice drawing with the prescribed boundary")
    diagram = SliceDiagram(m.n, tuple(cols))
    m2, _ = to_map(diagram)
    if canonical_form(m2) != canonical_form(m):
        raise RuntimeError("drawing round-trip produced a different map")
    return diagram


def _cyclic_eq(rot: Sequence[int], want: Sequence[int]) -> bool:
    k = len(rot)
    if len(want) != k:
        return False
    for s in range(k):
        if all(rot[(s + i) % k] == want[i] for i in range(k)):
            return True
    return False


# ---------------------------------------------------------------------------
# The bundled web object


class Web:
    """A web as (drawing, map, geometry, code); identity is the code."""

    __slots__ = ("diagram", "pmap", "geom", "code")

    def __init__(self, diagram: SliceDiagram, pmap: PlanarMap, geom: DrawingGeometry, code: tuple[int, ...]):
        self.diagram = diagram
        self.pmap = pmap
        self.geom = geom
        self.code = code

    @classmethod
    def from_slice(cls, diagram: SliceDiagram) -> "Web":
        pmap, geom = to_map(diagram)
        return cls(diagram, pmap, geom, canonical_form(pmap))

    @classmethod
    def from_map(cls, pmap: PlanarMap, salt: int = 0) -> "Web":
        return cls.from_slice(render(pmap, salt=salt))

    @classmethod
    def from_code(cls, code: Sequence[int]) -> "Web":
        m = decode_code(code)
        if m.loops:
            raise WebError("codes with loop components have no canonical drawing")
        return cls.from_map(m)

    @property
    def n(self) -> int:
        return self.pmap.n

    def __eq__(self, other) -> bool:
        return isinstance(other, Web) and self.code == other.code

    def __hash__(self) -> int:
        return hash(self.code)

    def __repr__(self) -> str:
        return f"<Web n={self.n} v={self.pmap.internal_vertex_count} e={len(self.pmap.edges)}>"
