"""Diagram construction, evaluation, composition, and serialization."""

from __future__ import annotations

import numpy as np
import pytest

import quditzx.diagram as dg
from quditzx.diagram import (
    Diagram,
    DiagramBuilder,
    DiagramError,
    adjoint,
    compose_parallel,
    compose_serial,
    dump_json,
    evaluate,
    load_json,
)
from quditzx.generators import (
    Char,
    Generator,
    One,
    Phase,
    Stab,
    UnitPow,
    eval_generator,
)
from quditzx.measure import MeasureContext, residue
from quditzx.tensor import Tensor, compose, max_abs_diff, tensor_product


def node_diagram(dim: int, gen: Generator) -> Diagram:
    """Wrap one generator: leg k is output k for k < n, else input k - n."""
    b = DiagramBuilder(dim)
    name = b.node(gen)
    for k in range(gen.n):
        b.wire(("out", k), (name, k))
    for i in range(gen.m):
        b.wire(("in", i), (name, gen.n + i))
    return b.build()


SINGLE_NODE_CASES = [
    Generator.white(1, 1),
    Generator.white(2, 1),
    Generator.white(0, 3),
    Generator.green(Phase(0.37), 1, 2),
    Generator.green(Stab(1, 2), 0, 1),
    Generator.red(One(), 2, 1),
    Generator.red(Stab(1, 1), 1, 1),
    Generator.red(Char(2), 0, 1),
    Generator.gray(2, 2),
    Generator.gray(1, 0),
    Generator.hplus(),
    Generator.hminus(),
    Generator.hbox(UnitPow(0.3 + 0.4j), 2, 1),
    Generator.hbox(Phase(1.1), 0, 1),
    Generator.not_dot(2),
]


@pytest.mark.parametrize("dim", [2, 3, 5])
@pytest.mark.parametrize("nu", [None, 0.7])
def test_single_node_matches_generator_tensor(dim: int, nu: float | None) -> None:
    ctx = MeasureContext(dim, nu)
    for gen in SINGLE_NODE_CASES:
        got = evaluate(node_diagram(dim, gen), ctx)
        want = eval_generator(ctx, gen)
        assert max_abs_diff(got, want) < 1e-12, gen


def test_empty_diagram_is_scalar_one() -> None:
    d = DiagramBuilder(3).build()
    t = evaluate(d, MeasureContext(3))
    assert t.in_legs == 0 and t.out_legs == 0
    assert abs(complex(t.data) - 1) < 1e-15


def test_bare_wire_is_identity() -> None:
    for dim in (2, 5):
        b = DiagramBuilder(dim)
        b.wire("in", "out")
        t = evaluate(b.build(), MeasureContext(dim))
        assert np.allclose(t.data, np.eye(dim))


def test_cup_and_cap_from_boundary_edges() -> None:
    dim = 4
    ctx = MeasureContext(dim)
    b = DiagramBuilder(dim)
    b.wire(("out", 0), ("out", 1))
    cup = evaluate(b.build(), ctx)
    assert cup.in_legs == 0 and cup.out_legs == 2
    assert np.allclose(cup.data, np.eye(dim))
    b = DiagramBuilder(dim)
    b.wire(("in", 0), ("in", 1))
    cap = evaluate(b.build(), ctx)
    assert cap.in_legs == 2 and cap.out_legs == 0
    assert np.allclose(cap.data, np.eye(dim))


def test_crossed_wires_swap() -> None:
    dim = 3
    b = DiagramBuilder(dim)
    b.wire(("in", 0), ("out", 1))
    b.wire(("in", 1), ("out", 0))
    t = evaluate(b.build(), MeasureContext(dim))
    # out0 = in1, out1 = in0
    got_perm = t.data
    expect = np.zeros((dim,) * 4)
    for a in range(dim):
        for c in range(dim):
            expect[c, a, a, c] = 1.0
    assert np.allclose(got_perm, expect)


def test_two_node_chain_matches_einsum() -> None:
    dim = 4
    ctx = MeasureContext(dim)
    red = Generator.red(Stab(1, 1), 1, 2)
    green = Generator.green(Phase(0.9), 2, 1)
    R = eval_generator(ctx, red).data  # [o1, o2, i]
    G = eval_generator(ctx, green).data  # [o, i1, i2]
    b = DiagramBuilder(dim)
    r = b.node(red)
    g = b.node(green)
    b.wire((r, 0), (g, 1))
    b.wire((r, 1), (g, 2))
    b.wire(("in", 0), (r, 2))
    b.wire((g, 0), ("out", 0))
    got = evaluate(b.build(), ctx)
    want = np.einsum("oab,abi->oi", G, R)
    assert np.max(np.abs(got.data - want)) < 1e-12


def test_self_loop_on_green_dot() -> None:
    dim = 5
    ctx = MeasureContext(dim)
    b = DiagramBuilder(dim)
    g = b.node(Generator.green(Phase(0.51), 1, 2))
    b.wire((g, 0), (g, 1))
    b.wire((g, 2), ("out", 0))
    t = evaluate(b.build(), ctx)
    # the loop forces all three legs equal with no extra sum
    want = ctx.nu ** (2 - 3) * np.array([Phase(0.51).eval(ctx, int(x)) for x in ctx.residues()])
    assert np.allclose(t.data, want)


def test_self_loop_on_red_dot_traces() -> None:
    dim = 4
    ctx = MeasureContext(dim)
    gen = Generator.red(Phase(0.23), 1, 2)
    T = eval_generator(ctx, gen).data
    b = DiagramBuilder(dim)
    r = b.node(gen)
    b.wire((r, 0), (r, 1))
    b.wire(("in", 0), (r, 2))
    got = evaluate(b.build(), ctx)
    want = np.einsum("aai->i", T)
    assert np.allclose(got.data, want)


def test_closed_white_loop_scalar() -> None:
    dim = 7
    b = DiagramBuilder(dim)
    w = b.node(Generator.white(0, 2))
    b.wire((w, 0), (w, 1))
    t = evaluate(b.build(), MeasureContext(dim))
    assert abs(complex(t.data) - dim) < 1e-12


def test_huge_copy_dot_stays_cheap() -> None:
    # degree 10000 would be astronomically large as a dense tensor
    dim = 3
    b = DiagramBuilder(dim)
    w = b.node(Generator.white(0, 10_000))
    for k in range(5_000):
        b.wire((w, 2 * k), (w, 2 * k + 1))
    t = evaluate(b.build(), MeasureContext(dim, nu=1.0))
    assert abs(complex(t.data) - dim) < 1e-9


def test_two_white_dots_fuse_over_parallel_wires() -> None:
    dim = 3
    ctx = MeasureContext(dim, nu=0.9)
    b = DiagramBuilder(dim)
    w1 = b.node(Generator.green(Phase(0.4), 1, 2))
    w2 = b.node(Generator.white(2, 1))
    b.wire((w1, 0), (w2, 1))
    b.wire((w1, 1), (w2, 2))
    b.wire(("in", 0), (w1, 2))
    b.wire((w2, 0), ("out", 0))
    got = evaluate(b.build(), ctx)
    A = eval_generator(ctx, Generator.green(Phase(0.4), 1, 2)).data
    B = eval_generator(ctx, Generator.white(2, 1)).data
    want = np.einsum("oab,abi->oi", B, A)
    assert np.allclose(got.data, want)


def test_cx_diagram_is_permutation() -> None:
    # control copied by a green dot, target shifted by a gray dot
    dim = 3
    ctx = MeasureContext(dim)
    b = DiagramBuilder(dim)
    g = b.node(Generator.green(One(), 1, 2))
    a = b.node(Generator.gray(2, 1))
    b.wire(("in", 0), (g, 2))
    b.wire((g, 0), ("out", 0))
    b.wire((g, 1), (a, 1))
    b.wire(("in", 1), (a, 2))
    b.wire((a, 0), ("out", 1))
    t = evaluate(b.build(), ctx)
    res = list(ctx.residues())
    idx = {x: i for i, x in enumerate(res)}
    want = np.zeros((dim,) * 4, dtype=complex)
    for c in res:
        for x in res:
            # gray requires its legs to sum to 0 mod D: out = -(c + x) up to sign
            s = residue(ctx, -(c + x))
            want[idx[c], idx[s], idx[c], idx[x]] = 1.0
    assert np.allclose(t.data, want)


def test_scalar_boxes() -> None:
    ctx = MeasureContext(3)
    alpha = 0.3 - 1.2j
    d = node_diagram(3, Generator.hbox(UnitPow(alpha), 0, 0))
    assert abs(complex(evaluate(d, ctx).data) - alpha) < 1e-12
    d = node_diagram(3, Generator.green(One(), 0, 0))
    assert abs(complex(evaluate(d, ctx).data) - 3 * ctx.nu**2) < 1e-12
    d = node_diagram(3, Generator.gray(0, 0))
    assert abs(complex(evaluate(d, ctx).data) - ctx.nu ** (-2)) < 1e-12


def random_diagram(rng: np.random.Generator, dim: int, n_nodes: int, n_in: int, n_out: int):
    b = DiagramBuilder(dim)
    ports: list = [("in", i) for i in range(n_in)] + [("out", j) for j in range(n_out)]
    for _ in range(n_nodes):
        roll = rng.integers(0, 7)
        if roll == 0:
            deg = int(rng.integers(1, 4))
            gen = Generator.green(Phase(float(rng.uniform(0, 6.28))), 0, deg)
        elif roll == 1:
            deg = int(rng.integers(1, 4))
            gen = Generator.red(Stab(int(rng.integers(0, dim)), int(rng.integers(0, dim))), 0, deg)
        elif roll == 2:
            deg = int(rng.integers(1, 4))
            gen = Generator.white(0, deg)
        elif roll == 3:
            deg = int(rng.integers(1, 4))
            gen = Generator.gray(0, deg)
        elif roll == 4:
            gen = Generator.hplus() if rng.integers(0, 2) else Generator.hminus()
        elif roll == 5:
            gen = Generator.not_dot(int(rng.integers(0, dim)))
        else:
            deg = int(rng.integers(1, 3))
            gen = Generator.hbox(Phase(float(rng.uniform(0, 6.28))), 0, deg)
        name = b.node(gen)
        ports.extend((name, k) for k in range(gen.degree))
    if len(ports) % 2:
        ports.append(("out", n_out))
        n_out += 1
    order = rng.permutation(len(ports))
    for k in range(0, len(ports), 2):
        b.wire(ports[order[k]], ports[order[k + 1]])
    return b.build()


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_serial_composition_is_functorial(dim: int) -> None:
    ctx = MeasureContext(dim)
    rng = np.random.default_rng(100 + dim)
    for trial in range(8):
        mid = int(rng.integers(0, 3))
        a = random_diagram(rng, dim, int(rng.integers(1, 4)), int(rng.integers(0, 3)), mid)
        bdiag = random_diagram(rng, dim, int(rng.integers(1, 4)), a.n_outputs, int(rng.integers(0, 3)))
        fused = compose_serial(a, bdiag)
        got = evaluate(fused, ctx)
        want = compose(evaluate(a, ctx), evaluate(bdiag, ctx))
        assert max_abs_diff(got, want) < 1e-9


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_parallel_composition_is_monoidal(dim: int) -> None:
    ctx = MeasureContext(dim)
    rng = np.random.default_rng(200 + dim)
    for trial in range(6):
        a = random_diagram(rng, dim, 2, int(rng.integers(0, 3)), int(rng.integers(0, 3)))
        c = random_diagram(rng, dim, 2, int(rng.integers(0, 3)), int(rng.integers(0, 3)))
        got = evaluate(compose_parallel(a, c), ctx)
        want = tensor_product(evaluate(a, ctx), evaluate(c, ctx))
        assert max_abs_diff(got, want) < 1e-9


def test_snake_composition_gives_identity() -> None:
    dim = 3
    ctx = MeasureContext(dim)
    cup = DiagramBuilder(dim)
    cup.wire(("out", 0), ("out", 1))
    idw = DiagramBuilder(dim)
    idw.wire("in", "out")
    top = compose_parallel(cup.build(), idw.build())  # 1 -> 3
    cap = DiagramBuilder(dim)
    cap.wire(("in", 0), ("in", 1))
    idw2 = DiagramBuilder(dim)
    idw2.wire("in", "out")
    bottom = compose_parallel(idw2.build(), cap.build())  # 3 -> 1
    snake = compose_serial(top, bottom)
    t = evaluate(snake, ctx)
    assert np.allclose(t.data, np.eye(dim))


def test_cup_then_cap_makes_closed_loop() -> None:
    dim = 5
    cup = DiagramBuilder(dim)
    cup.wire(("out", 0), ("out", 1))
    cap = DiagramBuilder(dim)
    cap.wire(("in", 0), ("in", 1))
    loop = compose_serial(cup.build(), cap.build())
    t = evaluate(loop, MeasureContext(dim))
    assert abs(complex(t.data) - dim) < 1e-12


def test_evaluation_independent_of_node_order() -> None:
    dim = 3
    ctx = MeasureContext(dim)
    rng = np.random.default_rng(7)
    d = random_diagram(rng, dim, 4, 1, 1)
    ref = evaluate(d, ctx)
    items = list(d.nodes.items())
    for seed in range(3):
        np.random.default_rng(seed).shuffle(items)
        shuffled = Diagram(d.dim, dict(items), d.edges, d.n_inputs, d.n_outputs)
        assert max_abs_diff(evaluate(shuffled, ctx), ref) < 1e-12


def test_white_subdivision_preserves_value() -> None:
    dim = 4
    ctx = MeasureContext(dim)
    rng = np.random.default_rng(11)
    for trial in range(5):
        d = random_diagram(rng, dim, 3, 1, 1)
        ref = evaluate(d, ctx)
        # split the first edge with a degree-2 white dot
        (p, q), rest = d.edges[0], d.edges[1:]
        nodes = dict(d.nodes)
        name = "mid"
        while name in nodes:
            name += "_"
        nodes[name] = Generator.white(1, 1)
        edges = rest + ((p, (name, 0)), ((name, 1), q))
        sub = Diagram(dim, nodes, edges, d.n_inputs, d.n_outputs)
        assert max_abs_diff(evaluate(sub, ctx), ref) < 1e-10


def test_character_decomposition_agrees_with_dense(monkeypatch) -> None:
    dim = 5
    ctx = MeasureContext(dim, nu=0.8)
    cases = [
        Generator.red(Stab(2, 3), 1, 2),
        Generator.red(Phase(0.77), 2, 2),
        Generator.gray(1, 3),
        Generator.gray(2, 0),
    ]
    for gen in cases:
        d = node_diagram(dim, gen)
        dense = evaluate(d, ctx)
        monkeypatch.setattr(dg, "_MAX_DENSE", 1)
        decomposed = evaluate(d, ctx)
        monkeypatch.undo()
        assert max_abs_diff(decomposed, dense) < 1e-10, gen


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_adjoint_evaluates_to_conjugate_transpose(dim: int) -> None:
    ctx = MeasureContext(dim)
    rng = np.random.default_rng(300 + dim)
    for trial in range(6):
        d = random_diagram(rng, dim, 3, int(rng.integers(0, 3)), int(rng.integers(0, 3)))
        got = evaluate(adjoint(d), ctx)
        want = evaluate(d, ctx).adjoint()
        assert max_abs_diff(got, want) < 1e-9


def test_json_round_trip_preserves_value() -> None:
    dim = 3
    ctx = MeasureContext(dim)
    rng = np.random.default_rng(42)
    for trial in range(5):
        d = random_diagram(rng, dim, 3, 1, 2)
        text = dump_json(d)
        back = load_json(text)
        assert back.dim == d.dim
        assert back.n_inputs == d.n_inputs and back.n_outputs == d.n_outputs
        assert max_abs_diff(evaluate(back, ctx), evaluate(d, ctx)) < 1e-12


def test_json_inputs_may_point_at_node_ports() -> None:
    obj = {
        "dimension": 2,
        "nodes": {"w": {"kind": "white", "legs": 2}},
        "edges": [],
        "inputs": ["w:0"],
        "outputs": ["w:1"],
    }
    import json

    d = load_json(json.dumps(obj))
    t = evaluate(d, MeasureContext(2))
    assert np.allclose(t.data, np.eye(2))


def test_validation_rejects_dangling_leg() -> None:
    b = DiagramBuilder(3)
    b.node(Generator.white(1, 1), name="w")
    with pytest.raises(DiagramError):
        b.build()


def test_validation_rejects_double_use() -> None:
    d = Diagram(
        3,
        {"w": Generator.white(1, 1)},
        ((("in", 0), ("w", 0)), (("out", 0), ("w", 0)), (("w", 1), ("out", 1))),
        1,
        2,
    )
    with pytest.raises(DiagramError):
        d.validate()


def test_validation_rejects_unknown_node() -> None:
    d = Diagram(3, {}, ((("in", 0), ("ghost", 0)),), 1, 0)
    with pytest.raises(DiagramError):
        d.validate()


def test_evaluate_rejects_dimension_mismatch() -> None:
    b = DiagramBuilder(3)
    b.wire("in", "out")
    with pytest.raises(DiagramError):
        evaluate(b.build(), MeasureContext(4))


def test_builder_rejects_reserved_names() -> None:
    b = DiagramBuilder(3)
    with pytest.raises(DiagramError):
        b.node(Generator.white(1, 1), name="in")
    with pytest.raises(DiagramError):
        b.node(Generator.white(1, 1), name="a:b")
