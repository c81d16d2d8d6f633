import math

import pytest

from mongelink import monge_core as mc
from mongelink import probe as probe_mod
from mongelink.baseline import brute_force
from mongelink.probe import Contracted, Hit, ProbeError, SolverState, probe
from mongelink.workspace import DpWorkspace
from helpers import PROBE_C, small_family


def _state(o, M, backend=None, **kw):
    return SolverState.initial(o, M, DpWorkspace.for_oracle(o, backend), **kw)


def _pivot(b, s, m, M, N):
    for n in range(s + m + 1, N - M + m + 1):
        if b.d_min(b.delta(m, n).value, N) <= M:
            return n
    return None


def _probe_cases(N):
    for M in range(4, N - 1):
        for m in range(2, M - 1):
            yield M, m


def _check_probe(state, m, b_now, M_total, b_root):
    """Run one probe and verify it against brute force of the current view."""
    s, N, M = state.s, state.N, state.M
    out = probe(state, m)
    if isinstance(out, Hit):
        assert out.lam in b_root.window(M_total, N)
        assert out.lam in b_now.window(M, N)
        assert s + m < out.n <= N - M + m
        return out, None
    r = out.r
    assert r == _pivot(b_now, s, m, M, N)
    assert b_now.delta(m, r) < b_now.delta(M - 1, N) <= b_now.delta(M, N) < b_now.delta(m, r - 1)
    assert state.s == r - 1 and state.M == M - m
    b_next = brute_force(state.view)
    assert b_next.window(M - m, N) == b_root.window(M_total, N)
    ok, quad = mc.verify_submodular(state.view.frozen())
    assert ok, quad
    for j in range(r, N + 1):
        want = min(b_now.f[(m, i)] + state.view.base.peek(i, j) for i in range(s + m, r))
        assert state.view.h[j] == want
    return out, b_next


def test_preconditions():
    o = mc.gen_random_monge(12, 0)
    for M, m in ((3, 1), (4, 1), (4, 3), (11, 2), (6, 5)):
        with pytest.raises(ValueError):
            probe(_state(o, M), m)
    with pytest.raises(ValueError):
        SolverState.initial(o, 5, DpWorkspace.for_oracle(o), check="sometimes")


def test_square_window_preserved(backend):
    o = mc.convex_sq(12)
    b = brute_force(o)
    st = _state(o, 5, backend, debug=True, check="both")
    _check_probe(st, 2, b, 5, b)


def test_contract_against_brute_force(backend):
    kinds = {Hit: 0, Contracted: 0}
    for N in (8, 10, 12):
        for o in list(small_family(N))[:25]:
            b = brute_force(o)
            for M, m in _probe_cases(N):
                st = _state(o, M, backend, debug=True)
                out, _ = _check_probe(st, m, b, M, b)
                kinds[type(out)] += 1
    assert kinds[Hit] and kinds[Contracted]


def test_repeated_probes_keep_window():
    stages = 0
    for o in list(small_family(12))[:30]:
        b = brute_force(o)
        for M in range(6, 11):
            st = _state(o, M, debug=True, check="both")
            b_now = b
            while 4 <= st.M <= st.N - st.s - 1:
                out, b_now = _check_probe(st, 2, b_now, M, b)
                if isinstance(out, Hit):
                    break
                stages += 1
    assert stages > 30


def test_first_sample_hit_exists():
    found = False
    for o in small_family(12):
        for M, m in _probe_cases(12):
            st = _state(o, M)
            out = probe(st, m)
            if isinstance(out, Hit) and out.n == 1 + m + 1 and out.phase == "exp":
                assert st.trace == [("exp", out.n, out.lam, 0)]
                found = True
    assert found


def test_check_modes_agree():
    for seed in range(8):
        o = mc.gen_random_monge(300, seed)
        for M, m in ((150, 30), (60, 20), (250, 2)):
            outs = []
            for mode in ("current", "original", "both"):
                st = _state(o, M, check=mode)
                first = probe(st, m)
                if isinstance(first, Contracted) and 4 <= st.M <= st.N - st.s - 1:
                    second = probe(st, min(m, st.M - 2))
                else:
                    second = None
                outs.append((first, second, st.trace))
            assert outs[0] == outs[1] == outs[2]


def test_exhausted_search_is_trapped(monkeypatch):
    o = mc.gen_random_monge(20, 1)
    monkeypatch.setattr(probe_mod, "_side", lambda state, lam, mode: 1)
    with pytest.raises(ProbeError):
        probe(_state(o, 8), 3)


def test_debug_detects_non_monge_contraction(monkeypatch):
    o = mc.from_dense([[0] * 13 for _ in range(13)])
    st = _state(o, 6, debug=True)
    monkeypatch.setattr(probe_mod, "_side", lambda state, lam, mode: -1)
    # rewrite h after the fold with a row that breaks the quadrangle rule
    real = probe_mod.kernels.row_minima

    def fold(ws, view, base, *args):
        spent = real(ws, view, base, *args)
        ws.h[-1] = -100
        return spent
    monkeypatch.setattr(probe_mod.kernels, "row_minima", fold)
    with pytest.raises(ProbeError, match="not Monge"):
        probe(st, 2)


def test_cost_bound():
    worst = 0.0
    for N in (60, 300, 1000):
        for seed in range(4):
            o = mc.gen_random_monge(N, seed)
            for M in sorted({4, N // 4, N // 2, 3 * N // 4, N - 2}):
                for m in sorted({2, max(2, M // 3), M - 2}):
                    st = _state(o, M)
                    o.reset_counter()
                    out = probe(st, m)
                    r = out.n if isinstance(out, Hit) else out.r
                    bound = m * (r - m) + N * math.log2(r - m + 1)
                    worst = max(worst, o.evals / bound)
    assert worst <= PROBE_C
