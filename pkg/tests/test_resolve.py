"""
Unit tests for app/toric/resolve.py

Covers:
- resolve_An: depth, per-step ray counts, intermediate A_k charts, transports
- dual_graph against the Hirzebruch-Jung oracle
- resolve_generic with the maximal-monomial and explicit selectors,
  normalization, truncation and selector failures
- The warning for non-normal charts resolved without normalization
- Determinism across runs and thread counts
"""

import logging

import pytest

from app.errors import InputError, NotResolvedError, SelectorNotApplicableError
from app.schemas import TraceOut
from app.toric.blowup import MonomialIdeal
from app.toric.lattice import LatticeVec
from app.toric.resolve import (
    DualGraph,
    IdealSelector,
    SelectorKind,
    divisor_count,
    dual_graph,
    hj_oracle,
    resolve_An,
    resolve_generic,
)
from app.toric.semigroup import AffineSemigroup, gamma, same_as
from tests.conftest import GAMMA_1, NON_NORMAL_A1, an_ideal_exps

V = LatticeVec
S = AffineSemigroup.of


def _trace_json(trace) -> str:
    return TraceOut.from_trace(trace).model_dump_json()


# ---------------------------------------------------------------------------
# A_n resolution
# ---------------------------------------------------------------------------

class TestResolveAn:

    def test_depth_is_half_of_n_rounded_up(self):
        for n in range(1, 21):
            trace = resolve_An(n)
            assert trace.terminated
            assert trace.depth == (n + 1) // 2, n

    def test_one_divisor_per_unit_of_n(self):
        for n in range(1, 21):
            assert divisor_count(resolve_An(n)) == n

    def test_rays_per_step(self):
        assert resolve_An(1).new_rays_per_step == (1,)
        assert resolve_An(2).new_rays_per_step == (2,)
        assert resolve_An(5).new_rays_per_step == (2, 2, 1)
        assert resolve_An(6).new_rays_per_step == (2, 2, 2)
        for n in range(2, 21):
            assert resolve_An(n).new_rays_per_step[0] == 2

    def test_first_step_charts_of_a5(self):
        root = resolve_An(5).root
        assert [child.chart_class.tag for child in root.children] == ["smooth", "cyclic:4,3", "smooth"]

    def test_a7_passes_through_a5_a3_a1(self):
        root = resolve_An(7).root
        singular = [node.chart_class.an_index() for node in root.walk() if not node.chart_class.is_smooth]
        assert singular == [7, 5, 3, 1]

    def test_transport_maps_standard_model_onto_chart(self):
        for node in resolve_An(9).root.walk():
            if node.chart_class.is_smooth:
                assert node.transport is None
                continue
            k = node.chart_class.an_index()
            assert same_as(gamma(k).apply(node.transport), node.semigroup)

    def test_centers_are_transported_derivation_ideals(self):
        for node in resolve_An(6).root.walk():
            if node.ideal is None:
                continue
            k = node.chart_class.an_index()
            expected = {node.transport.apply(V(*m)) for m in an_ideal_exps(k)}
            assert set(node.ideal.exps) == expected

    def test_all_leaves_smooth_and_nothing_normalized(self):
        for n in (3, 8, 13):
            root = resolve_An(n).root
            assert all(leaf.chart_class.is_smooth for leaf in root.leaves())
            assert not any(node.normalized for node in root.walk())

    def test_n_must_be_positive(self):
        with pytest.raises(InputError):
            resolve_An(0)


class TestDualGraph:

    def test_matches_hirzebruch_jung_chain(self):
        for n in range(1, 21):
            graph = dual_graph(resolve_An(n))
            assert graph == hj_oracle(n + 1, n)
            assert graph.self_intersections == (-2,) * n

    def test_global_fan_is_smooth(self):
        for n in range(1, 13):
            assert resolve_An(n).global_fan.is_smooth()

    def test_hj_oracle(self):
        assert hj_oracle(3, 1) == DualGraph((-3,))
        assert hj_oracle(5, 2) == DualGraph((-3, -2))
        assert hj_oracle(7, 3) == DualGraph((-3, -2, -2))

    def test_text(self):
        assert dual_graph(resolve_An(4)).to_text() == "-2 -2 -2 -2"

    def test_dot(self):
        assert DualGraph((-2, -3)).to_dot() == (
            "graph dual_graph {\n"
            "  rankdir=LR;\n"
            "  node [shape=circle];\n"
            '  E1 [label="-2"];\n'
            '  E2 [label="-3"];\n'
            "  E1 -- E2;\n"
            "}\n"
        )

    def test_edges_form_a_chain(self):
        assert DualGraph((-2, -2, -2)).edges == ((1, 2), (2, 3))
        assert DualGraph((-2,)).edges == ()


# ---------------------------------------------------------------------------
# Generic resolution
# ---------------------------------------------------------------------------

class TestResolveGeneric:

    def test_an_selector_reproduces_resolve_an(self, gamma3):
        generic = resolve_generic(gamma3, IdealSelector.an_derivation(), max_steps=10)
        assert _trace_json(generic) == _trace_json(resolve_An(3))

    def test_maximal_ideal_of_a2(self):
        trace = resolve_generic(gamma(2), IdealSelector.maximal_monomial(), max_steps=5)
        assert trace.depth == 1
        assert trace.global_fan.rays == (V(3, -2), V(2, -1), V(1, 0), V(0, 1))
        assert dual_graph(trace).self_intersections == (-2, -2)

    def test_maximal_ideal_of_one_third_one_one(self):
        trace = resolve_generic(S((1, 0), (1, 1), (1, 2), (1, 3)), IdealSelector.maximal_monomial(), max_steps=5)
        assert trace.depth == 1
        assert dual_graph(trace) == hj_oracle(3, 1)

    def test_explicit_selector_at_root(self):
        base = S(*GAMMA_1)
        ideal = MonomialIdeal(base, (V(2, 0), V(2, 1), V(2, 2)))
        trace = resolve_generic(base, IdealSelector.explicit(ideal), max_steps=5)
        assert trace.root.ideal == ideal
        assert trace.root.blowup.vertex_indices == (1, 3)
        assert dual_graph(trace).self_intersections == (-2,)

    def test_explicit_ideal_over_another_base_raises(self):
        ideal = MonomialIdeal(gamma(2), (V(1, 0),))
        with pytest.raises(InputError):
            resolve_generic(gamma(1), IdealSelector.explicit(ideal), max_steps=5)

    def test_explicit_selector_needs_an_ideal(self):
        with pytest.raises(InputError):
            IdealSelector(SelectorKind.EXPLICIT)

    def test_smooth_root_needs_no_steps(self):
        trace = resolve_generic(S((1, 0), (0, 1)), IdealSelector.maximal_monomial(), max_steps=3)
        assert trace.depth == 0
        assert trace.terminated
        assert divisor_count(trace) == 0
        assert dual_graph(trace) == DualGraph(())

    def test_truncated_run_is_not_resolved(self):
        trace = resolve_generic(gamma(5), IdealSelector.an_derivation(), max_steps=1)
        assert not trace.terminated
        assert trace.depth == 1
        assert trace.new_rays_per_step == (2,)
        with pytest.raises(NotResolvedError):
            dual_graph(trace)

    def test_an_selector_rejects_other_cyclic_quotients(self):
        with pytest.raises(SelectorNotApplicableError):
            resolve_generic(S((1, 0), (1, 1), (1, 2), (1, 3)), IdealSelector.an_derivation(), max_steps=3)

    def test_non_normal_root_is_normalized(self):
        trace = resolve_generic(S(*NON_NORMAL_A1), IdealSelector.maximal_monomial(), max_steps=5, normalize=True)
        assert trace.root.normalized
        assert trace.root.semigroup == S(*GAMMA_1)
        assert dual_graph(trace).self_intersections == (-2,)

    def test_non_normal_chart_without_normalization_warns(self, caplog):
        base = S((1, 0), (0, 2), (0, 3))
        with caplog.at_level(logging.WARNING, logger="app.toric.resolve"):
            trace = resolve_generic(base, IdealSelector.maximal_monomial(), max_steps=1, normalize=False)
        assert not trace.root.normalized
        assert not trace.terminated
        warnings = [r for r in caplog.records if r.levelno == logging.WARNING]
        assert warnings
        assert "saturation is smooth" in warnings[0].getMessage()

    def test_normalization_silences_the_warning(self, caplog):
        base = S((1, 0), (0, 2), (0, 3))
        with caplog.at_level(logging.WARNING, logger="app.toric.resolve"):
            trace = resolve_generic(base, IdealSelector.maximal_monomial(), max_steps=1, normalize=True)
        assert trace.root.normalized
        assert trace.depth == 0
        assert not [r for r in caplog.records if r.levelno >= logging.WARNING]

    @pytest.mark.parametrize("kwargs", [{"max_steps": 0}, {"max_steps": 3, "threads": 0}])
    def test_bad_limits_raise(self, kwargs):
        with pytest.raises(InputError):
            resolve_generic(gamma(2), IdealSelector.maximal_monomial(), **kwargs)


# ---------------------------------------------------------------------------
# Determinism
# ---------------------------------------------------------------------------

class TestDeterminism:

    def test_repeated_runs_are_identical(self):
        first = _trace_json(resolve_An(9))
        for _ in range(4):
            assert _trace_json(resolve_An(9)) == first

    def test_thread_count_does_not_change_the_trace(self):
        assert _trace_json(resolve_An(9, threads=1)) == _trace_json(resolve_An(9, threads=8))
