"""Consistent labelings, their weighted counts, and label transport.

A labeling of a web assigns 1, 2, or 3 to every edge (and to every
closed loop) so that the three edges meeting at an internal vertex
carry three different values.  Each labeling gets a monomial weight
t^k read off the drawing; summing the weights of the labelings with a
fixed boundary word gives a vector over boundary words that is
drawing-independent, multiplies under concatenation, and separates
irreducible webs.  That is what makes reduction coefficients
recoverable by counting: the coefficient of an irreducible child
equals the weighted count of parent labelings that transport onto it,
divided by the child's own weighted count.

Weight bookkeeping, in t-exponents:

- an internal vertex contributes +1 or -1 according to how the labels
  of its same-side pair of legs are ordered top to bottom; the
  comparison is mirrored on right-side pairs, and mirrored again at
  vertices whose edges all point inward (edge heads read their label
  in the reversed, primed order);
- every vertical tangency of an edge or loop labeled i contributes
  (4 - 2i) times the recorded turn sign.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .exactmath import InexactDivisionError, LaurentPoly, eval_q1, exact_div
from .spider import Outcome, apply_rule, find_reducible_face
from .webcore import (
    ROLE_SINK,
    Web,
    WebError,
    canonical_edge_order,
)

LABELS = (1, 2, 3)


@dataclass(frozen=True, order=True)
class BoundaryLabeling:
    """Words read along the boundary: source labels, then sink labels.

    Sink labels are stored unprimed; the primed reading only changes
    comparison order inside the weight statistic, not the data.
    """

    sources: tuple[int, ...]
    sinks: tuple[int, ...]

    def __post_init__(self):
        if len(self.sources) != len(self.sinks):
            raise WebError("source and sink words must have equal length")
        for x in self.sources + self.sinks:
            if x not in LABELS:
                raise WebError(f"boundary label {x!r} out of range")

    @property
    def n(self) -> int:
        return len(self.sources)

    def is_balanced(self) -> bool:
        """Whether each label occurs equally often on both sides.
        Restrictions of consistent labelings always are."""
        return all(
            self.sources.count(i) == self.sinks.count(i) for i in LABELS
        )

    def to_text(self) -> str:
        return "%s:%s" % (
            ",".join(map(str, self.sources)),
            ",".join(map(str, self.sinks)),
        )

    @classmethod
    def from_text(cls, text: str) -> "BoundaryLabeling":
        parts = text.split(":")
        if len(parts) != 2:
            raise WebError(f"boundary {text!r} must look like 1,2:1,2")
        try:
            src = tuple(int(x) for x in parts[0].split(","))
            snk = tuple(int(x) for x in parts[1].split(","))
        except ValueError as exc:
            raise WebError(f"boundary {text!r} has a non-integer entry") from exc
        return cls(src, snk)


@dataclass(frozen=True)
class Labeling:
    """edge_labels[eid] is the label of edge eid; loop_labels holds one
    free label per closed loop, in drawing order."""

    edge_labels: tuple[int, ...]
    loop_labels: tuple[int, ...] = ()


def _boundary_edges(w: Web) -> list[int]:
    m = w.pmap
    return [m.rot[v][0] >> 1 for v in range(2 * m.n)]


def boundary_restriction(w: Web, f: Labeling) -> BoundaryLabeling:
    be = _boundary_edges(w)
    n = w.n
    return BoundaryLabeling(
        tuple(f.edge_labels[e] for e in be[:n]),
        tuple(f.edge_labels[e] for e in be[n:]),
    )


def enumerate_labelings(
    w: Web, g: Optional[BoundaryLabeling] = None
) -> list[Labeling]:
    """All consistent labelings of w, restricted to boundary g if given.

    Backtracks over edges in a breadth-first order seeded by the pinned
    boundary edges, so the distinctness constraint prunes early.
    """
    m = w.pmap
    ne = len(m.edges)
    pinned: dict[int, int] = {}
    if g is not None:
        if g.n != m.n:
            raise WebError(f"boundary has {g.n} strands, web has {m.n}")
        be = _boundary_edges(w)
        for e, lbl in zip(be, g.sources + g.sinks):
            if pinned.setdefault(e, lbl) != lbl:
                return []

    internal = set(m.internal_vertices())
    at_vertex: dict[int, list[int]] = {v: [] for v in internal}
    for e, (t, h) in enumerate(m.edges):
        for v in (t, h):
            if v in internal:
                at_vertex[v].append(e)

    order: list[int] = []
    seen: set[int] = set()
    queue: deque[int] = deque(sorted(pinned))
    seen.update(queue)
    while len(order) < ne:
        if not queue:
            e0 = min(e for e in range(ne) if e not in seen)
            seen.add(e0)
            queue.append(e0)
        e = queue.popleft()
        order.append(e)
        for v in m.edges[e]:
            for e2 in at_vertex.get(v, ()):
                if e2 not in seen:
                    seen.add(e2)
                    queue.append(e2)

    labels = [0] * ne
    out: list[tuple[int, ...]] = []

    def ok(e: int) -> bool:
        for v in m.edges[e]:
            if v not in internal:
                continue
            got = [labels[e2] for e2 in at_vertex[v] if labels[e2]]
            if len(got) != len(set(got)):
                return False
        return True

    def go(k: int) -> None:
        if k == ne:
            out.append(tuple(labels))
            return
        e = order[k]
        choices = (pinned[e],) if e in pinned else LABELS
        for lbl in choices:
            labels[e] = lbl
            if ok(e):
                go(k + 1)
            labels[e] = 0

    go(0)
    result = [
        Labeling(edge_labels, loop_labels)
        for edge_labels in out
        for loop_labels in itertools.product(LABELS, repeat=m.loops)
    ]
    result.sort(key=lambda f: (f.edge_labels, f.loop_labels))
    return result


# ---------------------------------------------------------------------------
# The weight statistic


def _vertex_sign(role: str, left, right, lab) -> int:
    if len(left) == 2:
        upper_bigger = lab[left[0]] > lab[left[1]]
    else:
        upper_bigger = lab[right[1]] > lab[right[0]]  # mirrored side
    if role == ROLE_SINK:
        upper_bigger = not upper_bigger  # heads read the primed order
    return 1 if upper_bigger else -1


def labeling_weight(w: Web, f: Labeling) -> LaurentPoly:
    """The monomial t^k of one labeling, read off w's drawing.  The
    value does not depend on which drawing of the map is used."""
    m, geom = w.pmap, w.geom
    lab = f.edge_labels
    if len(lab) != len(m.edges) or len(f.loop_labels) != m.loops:
        raise WebError("labeling does not match the web's edge and loop counts")
    total = 0
    for v, (left, right) in geom.vertex_sides.items():
        total += _vertex_sign(m.roles[v][0], left, right, lab)
    for e, turns in geom.edge_turns.items():
        if turns:
            total += (4 - 2 * lab[e]) * sum(turns)
    for turns, lbl in zip(geom.loop_turns, f.loop_labels):
        total += (4 - 2 * lbl) * sum(turns)
    return LaurentPoly.t_power(total)


def weighted_count(w: Web, g: BoundaryLabeling) -> LaurentPoly:
    """Sum of labeling weights over the labelings with boundary g.
    At t = 1 this is the plain count."""
    acc = LaurentPoly.zero()
    for f in enumerate_labelings(w, g):
        acc = acc + labeling_weight(w, f)
    return acc


class KappaVector:
    """Sparse vector of weighted counts per boundary word."""

    __slots__ = ("n", "_entries")

    def __init__(self, n: int, entries: Optional[dict] = None):
        self.n = n
        self._entries = {} if entries is None else entries

    def entry(self, g: BoundaryLabeling) -> LaurentPoly:
        return self._entries.get(g, LaurentPoly.zero())

    def entries(self) -> list[tuple[BoundaryLabeling, LaurentPoly]]:
        return [(g, self._entries[g]) for g in sorted(self._entries)]

    def support_size(self) -> int:
        return len(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def scale(self, c: LaurentPoly) -> "KappaVector":
        if c.is_zero():
            return KappaVector(self.n)
        return KappaVector(self.n, {g: v * c for g, v in self._entries.items()})

    def __add__(self, other: "KappaVector") -> "KappaVector":
        if not isinstance(other, KappaVector):
            return NotImplemented
        if self.n != other.n:
            raise WebError("cannot add vectors on different strand counts")
        acc = dict(self._entries)
        for g, v in other._entries.items():
            s = acc.get(g, LaurentPoly.zero()) + v
            if s.is_zero():
                acc.pop(g, None)
            else:
                acc[g] = s
        return KappaVector(self.n, acc)

    def __sub__(self, other: "KappaVector") -> "KappaVector":
        return self + other.scale(LaurentPoly.const(-1))

    def __mul__(self, other: "KappaVector") -> "KappaVector":
        """Concatenation product: join entries whose middle words match
        (the left factor's sink word against the right's source word)."""
        if not isinstance(other, KappaVector):
            return NotImplemented
        if self.n != other.n:
            raise WebError("cannot multiply vectors on different strand counts")
        by_src: dict[tuple[int, ...], list] = {}
        for g2, c2 in other._entries.items():
            by_src.setdefault(g2.sources, []).append((g2, c2))
        acc: dict[BoundaryLabeling, LaurentPoly] = {}
        for g1, c1 in self._entries.items():
            for g2, c2 in by_src.get(g1.sinks, ()):
                g = BoundaryLabeling(g1.sources, g2.sinks)
                s = acc.get(g, LaurentPoly.zero()) + c1 * c2
                if s.is_zero():
                    acc.pop(g, None)
                else:
                    acc[g] = s
        return KappaVector(self.n, acc)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KappaVector)
            and self.n == other.n
            and self._entries == other._entries
        )

    def __hash__(self):
        return hash((self.n, tuple(sorted(self._entries.items(), key=lambda kv: kv[0]))))

    def __repr__(self) -> str:
        bits = ", ".join(f"{g.to_text()}: {v}" for g, v in self.entries()[:4])
        more = ", ..." if self.support_size() > 4 else ""
        return f"<KappaVector n={self.n} [{bits}{more}]>"


def boundary_profile(w: Web) -> KappaVector:
    """The full vector of weighted counts of w, one entry per boundary
    word that admits a labeling."""
    acc: dict[BoundaryLabeling, LaurentPoly] = {}
    for f in enumerate_labelings(w):
        g = boundary_restriction(w, f)
        acc[g] = acc.get(g, LaurentPoly.zero()) + labeling_weight(w, f)
    return KappaVector(w.n, acc)


# ---------------------------------------------------------------------------
# Transport through the rewrite steps
#
# Transport replays the same rewrite steps the reduction engine takes,
# re-derived on the exact web object at hand: the engine's shared trace
# is keyed by canonical code and may hold a different drawing (hence a
# different edge numbering) of an equal-code web.  When two walks meet
# at equal-code children the labeling is re-indexed through the
# canonical edge matching instead.


def _reindex(f: Labeling, src: Web, dst: Web) -> Labeling:
    if src.code != dst.code:
        raise RuntimeError("reindexing requires equal canonical codes")
    arr = [0] * len(dst.pmap.edges)
    for a, b in zip(canonical_edge_order(src.pmap), canonical_edge_order(dst.pmap)):
        arr[b] = f.edge_labels[a]
    return Labeling(tuple(arr), f.loop_labels)


def _ghost_sign(geom, c: int, arrive: int, depart: int) -> int:
    # tangency created where corner c is smoothed away; zero when the
    # two strand legs leave c on opposite sides
    left, right = geom.vertex_sides[c]
    if arrive in left and depart in left:
        return 1 if arrive == left[0] else -1
    if arrive in right and depart in right:
        return 1 if arrive == right[1] else -1
    return 0


def _square_balance(w: Web, f: Labeling, oc: Outcome) -> int:
    """Exponent surplus of the labeling's local weight over the branch's
    rerouted strands; the matching branch balances to zero.

    Left side: corner vertex signs plus face-edge tangencies.  Right
    side, per rerouted strand: tangencies at the smoothed corners,
    minus the tangencies of the face edges it runs through, which are
    traversed against their drawn flow.  External tangencies appear
    identically on both sides and are omitted.
    """
    m, geom = w.pmap, w.geom
    lab = f.edge_labels
    lhs = 0
    for c in oc.corners:
        left, right = geom.vertex_sides[c]
        lhs += _vertex_sign(m.roles[c][0], left, right, lab)
    for e in oc.face_edges:
        lhs += (4 - 2 * lab[e]) * sum(geom.edge_turns[e])
    rhs = 0
    for ch in oc.chains + oc.closed_chains:
        wgt = 4 - 2 * lab[ch.edges[0]]
        for j in range(1, len(ch.edges), 2):
            rhs -= wgt * sum(geom.edge_turns[ch.edges[j]])
        k = len(ch.edges)
        closed = ch.child_eid < 0
        for i, c in enumerate(ch.corners):
            arrive = ch.edges[i]
            depart = ch.edges[(i + 1) % k] if closed else ch.edges[i + 1]
            rhs += wgt * _ghost_sign(geom, c, arrive, depart)
    return lhs - rhs


def _chain_label(f: Labeling, ch) -> Optional[int]:
    # externals sit at even positions; a transportable strand carries
    # one label across all of them
    labs = {f.edge_labels[ch.edges[j]] for j in range(0, len(ch.edges), 2)}
    return labs.pop() if len(labs) == 1 else None


def _carry(f: Labeling, oc: Outcome, chain_labels: dict) -> Labeling:
    arr = [0] * len(oc.child.pmap.edges)
    for old, new in oc.edge_map.items():
        arr[new] = f.edge_labels[old]
    for ch, lbl in chain_labels.items():
        arr[ch.child_eid] = lbl
    if 0 in arr:
        raise RuntimeError("transport left a child edge unlabeled")
    return Labeling(tuple(arr))


def _transport_step(w: Web, outcomes, f: Labeling) -> tuple[Outcome, Labeling]:
    kind = outcomes[0].kind
    if kind == "loops":
        oc = outcomes[0]
        return oc, _carry(f, oc, {})
    if kind == "bigon":
        oc = outcomes[0]
        chain_labels = {}
        for ch in oc.chains:
            a, b = f.edge_labels[ch.edges[0]], f.edge_labels[ch.edges[1]]
            if a != b:
                raise RuntimeError("two-sided face has mismatched outside labels")
            chain_labels[ch] = a
        return oc, _carry(f, oc, chain_labels)

    admissible = []
    for oc in outcomes:
        chain_labels = {}
        for ch in oc.chains + oc.closed_chains:
            lbl = _chain_label(f, ch)
            if lbl is None:
                break
            if ch.child_eid >= 0:
                chain_labels[ch] = lbl
        else:
            if _square_balance(w, f, oc) == 0:
                admissible.append((oc, chain_labels))
    if len(admissible) == 1:
        oc, chain_labels = admissible[0]
    elif len(admissible) == 2:
        # both resolutions carry the labeling with the same weight; pair
        # the two parent labelings (they differ by swapping the two
        # face-edge labels) with the two branches deterministically
        tup = tuple(f.edge_labels[e] for e in outcomes[0].face_edges)
        a, b = sorted(set(tup))
        swapped = tuple(a if x == b else b for x in tup)
        oc, chain_labels = admissible[0] if tup < swapped else admissible[1]
    else:
        raise RuntimeError(
            "no resolution of a four-sided face carries the labeling; "
            "the counting identity would fail here"
        )
    return oc, _carry(f, oc, chain_labels)


def transport_and_type(
    w: Web, f: Labeling, steps: Optional[dict] = None
) -> tuple[Web, Labeling]:
    """Carry a labeling of w down the rewrite steps to an irreducible
    web, its type.  Loop labels are forgotten, a collapsing two-sided
    face hands its forced outside label to the fused edge, and a
    four-sided face picks the resolution that carries the labeling.

    steps, if given, caches one rewrite step per web code across calls;
    reuse it when transporting many labelings of the same web.
    """
    if steps is None:
        steps = {}
    cur_w, cur_f = w, f
    while True:
        entry = steps.get(cur_w.code)
        if entry is None:
            feature = find_reducible_face(cur_w)
            outcomes = apply_rule(cur_w, feature) if feature else ()
            entry = (cur_w, outcomes)
            steps[cur_w.code] = entry
        host, outcomes = entry
        if host is not cur_w:
            cur_f = _reindex(cur_f, cur_w, host)
            cur_w = host
        if not outcomes:
            return cur_w, cur_f
        oc, cur_f = _transport_step(cur_w, outcomes, cur_f)
        cur_w = oc.child


def coefficient_via_labelings(
    w: Web, target: Web, g: BoundaryLabeling
) -> LaurentPoly:
    """The coefficient of the irreducible web target in the reduction
    of w, extracted by counting: the weighted count of labelings of w
    whose type is target, divided by target's own weighted count.
    Zero when target has no labelings with boundary g."""
    den = weighted_count(target, g)
    if eval_q1(den) == 0:
        return LaurentPoly.zero()
    steps: dict = {}
    num = LaurentPoly.zero()
    for f in enumerate_labelings(w, g):
        ty, _ = transport_and_type(w, f, steps)
        if ty.code == target.code:
            num = num + labeling_weight(w, f)
    try:
        return exact_div(num, den)
    except InexactDivisionError as exc:
        raise RuntimeError(
            "weighted labeling counts fail the exact-ratio identity "
            f"for boundary {g.to_text()}: {exc}"
        ) from exc
