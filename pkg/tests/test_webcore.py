import json

import pytest

from a2webs.webcore import (
    LEFT,
    RIGHT,
    Column,
    PlanarMap,
    SliceDiagram,
    Web,
    WebError,
    canonical_form,
    concatenate,
    decode_code,
    generator_web,
    identity_web,
    render,
    to_map,
)

R, L = RIGHT, LEFT


def web(diagram):
    return Web.from_slice(diagram)


class TestIdentity:
    def test_three_strands(self):
        m, geom = to_map(identity_web(3))
        assert m.n == 3
        assert m.internal_vertex_count == 0
        assert len(m.edges) == 3
        assert m.loops == 0
        m.validate()
        # three strand components, each bounded by a single face
        assert len(m.components()) == 3
        assert all(len(f) == 2 for f in m.faces())

    def test_code_roundtrip(self):
        m, _ = to_map(identity_web(3))
        code = canonical_form(m)
        m2 = decode_code(code)
        assert canonical_form(m2) == code

    def test_unit_law(self):
        e = generator_web(3, 2)
        left = web(concatenate(identity_web(3), e))
        right_ = web(concatenate(e, identity_web(3)))
        assert left == right_ == web(e)


class TestGeneratorWeb:
    def test_shape(self):
        m, geom = to_map(generator_web(2, 1))
        assert m.internal_vertex_count == 2
        assert len(m.edges) == 5
        m.validate()
        u, v = m.internal_vertices()
        roles = {m.roles[u][0], m.roles[v][0]}
        assert roles == {"sink", "source"}
        # middle edge runs from the internal source to the internal sink
        middle = [e for e, (t, h) in enumerate(m.edges) if t >= 4 and h >= 4]
        assert len(middle) == 1

    def test_single_face(self):
        m, _ = to_map(generator_web(2, 1))
        faces = m.faces()
        assert len(faces) == 1
        assert len(faces[0]) == 10

    def test_boundary_walk_order(self):
        m, _ = to_map(generator_web(2, 1))
        (orbit,) = m.faces()
        bnd = [m.roles[m.dart_vertex[d]] for d in orbit
               if m.roles[m.dart_vertex[d]][0] in ("src", "snk")]
        k = bnd.index(("src", 1))
        bnd = bnd[k:] + bnd[:k]
        assert bnd == [("src", 1), ("src", 2), ("snk", 2), ("snk", 1)]

    def test_geometry_sides(self):
        m, geom = to_map(generator_web(2, 1))
        u = next(v for v in m.internal_vertices() if m.roles[v][0] == "sink")
        left_edges, right_edges = geom.vertex_sides[u]
        assert len(left_edges) == 2 and len(right_edges) == 1

    def test_position_matters(self):
        assert web(generator_web(3, 1)) != web(generator_web(3, 2))
        assert web(generator_web(2, 1)) != web(identity_web(2))

    def test_bad_position(self):
        with pytest.raises(WebError):
            generator_web(2, 2)
        with pytest.raises(WebError):
            generator_web(3, 0)


class TestWiggle:
    # same map as generator_web(2, 1), drawn with a detour whose two
    # vertical tangencies cancel
    WIGGLE = SliceDiagram(2, (
        Column(1, "merge", (R, R, L)),
        Column(2, "cup", (R, L)),
        Column(1, "cap", (L, R)),
        Column(1, "split", (L, R, R)),
    ))

    def test_same_code(self):
        assert web(self.WIGGLE) == web(generator_web(2, 1))

    def test_turns_recorded_and_cancel(self):
        m, geom = to_map(self.WIGGLE)
        turned = [t for t in geom.edge_turns.values() if t]
        assert turned == [(-1, 1)] or turned == [(1, -1)]


def double_tripod_map():
    # two internal vertices: a sink absorbing all three sources and a
    # source feeding all three sinks; the two halves are not connected
    roles = [("src", 1), ("src", 2), ("src", 3),
             ("snk", 1), ("snk", 2), ("snk", 3),
             ("sink",), ("source",)]
    edges = [(0, 6), (1, 6), (2, 6), (7, 3), (7, 4), (7, 5)]
    rot_refs = [
        [(0, 0)], [(1, 0)], [(2, 0)],
        [(3, 1)], [(4, 1)], [(5, 1)],
        [(0, 1), (1, 1), (2, 1)],
        [(4, 0), (3, 0), (5, 0)],
    ]
    return PlanarMap(3, roles, rot_refs, edges)


class TestRender:
    def test_double_tripod_roundtrip(self):
        m = double_tripod_map()
        m.validate()
        w = Web.from_map(m)
        assert w.pmap.internal_vertex_count == 2
        assert len(w.pmap.edges) == 6
        assert w.code == canonical_form(m)

    def test_salt_independence(self):
        m = double_tripod_map()
        codes = {Web.from_map(m, salt=s).code for s in (0, 1, 2, 7)}
        assert len(codes) == 1

    def test_two_column_web(self):
        d = concatenate(generator_web(3, 1), generator_web(3, 2))
        w = web(d)
        w2 = Web.from_map(w.pmap)
        assert w == w2

    def test_loops_refused(self):
        m, _ = to_map(circle_diagram())
        with pytest.raises(WebError):
            render(m)


def circle_diagram():
    # one strand plus a free circle below it
    return SliceDiagram(1, (
        Column(2, "cup", (R, L)),
        Column(2, "cap", (R, L)),
    ))


class TestLoops:
    def test_circle_counts_as_loop(self):
        m, geom = to_map(circle_diagram())
        assert m.loops == 1
        assert m.internal_vertex_count == 0
        assert len(m.edges) == 1
        assert geom.loop_turns == ((1, 1),)

    def test_loop_changes_code(self):
        m, _ = to_map(circle_diagram())
        mid, _ = to_map(identity_web(1))
        assert canonical_form(m) != canonical_form(mid)


class TestValidation:
    def test_crossing_strands_rejected(self):
        roles = [("src", 1), ("src", 2), ("snk", 1), ("snk", 2)]
        edges = [(0, 3), (1, 2)]
        rot_refs = [[(0, 0)], [(1, 0)], [(1, 1)], [(0, 1)]]
        m = PlanarMap(2, roles, rot_refs, edges)
        with pytest.raises(WebError):
            m.validate()

    def test_edge_into_source_rejected(self):
        roles = [("src", 1), ("src", 2), ("snk", 1), ("snk", 2)]
        with pytest.raises(WebError):
            PlanarMap(2, roles, [[(0, 0)], [(0, 1)], [], []], [(0, 1)])

    def test_merge_direction_mismatch(self):
        with pytest.raises(WebError):
            to_map(SliceDiagram(2, (Column(1, "merge", (R, L, L)),)))

    def test_vertex_orientation_mismatch(self):
        bad = SliceDiagram(1, (
            Column(2, "cup", (R, L)),
            Column(2, "merge", (R, L, R)),
        ))
        with pytest.raises(WebError):
            to_map(bad)

    def test_wrong_final_wire_count(self):
        with pytest.raises(WebError):
            to_map(SliceDiagram(2, (Column(1, "cup", (R, L)),)))

    def test_cup_same_direction(self):
        with pytest.raises(WebError):
            Column(1, "cup", (R, R)) and to_map(
                SliceDiagram(1, (Column(1, "cup", (R, R)),)))

    def test_decode_rejects_junk(self):
        code = list(web(generator_web(2, 1)).code)
        code[3] += 1
        with pytest.raises(WebError):
            decode_code(code)


class TestSliceJson:
    def test_roundtrip(self):
        d = concatenate(generator_web(3, 1), generator_web(3, 2))
        blob = json.dumps(d.to_json_obj())
        d2 = SliceDiagram.from_json_obj(json.loads(blob))
        assert d2 == d

    def test_malformed(self):
        with pytest.raises(WebError):
            SliceDiagram.from_json_obj({"columns": []})


class TestCodes:
    def test_decode_many(self):
        diagrams = [
            identity_web(1),
            identity_web(3),
            generator_web(2, 1),
            generator_web(4, 2),
            concatenate(generator_web(3, 1), generator_web(3, 2)),
            TestWiggle.WIGGLE,
        ]
        for d in diagrams:
            w = web(d)
            m2 = decode_code(w.code)
            assert canonical_form(m2) == w.code

    def test_from_code(self):
        w = web(concatenate(generator_web(3, 2), generator_web(3, 1)))
        assert Web.from_code(w.code) == w
