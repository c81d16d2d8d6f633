import pytest

from mongelink import monge_core as mc
from mongelink.baseline import dp_full
from mongelink.pbf import delta_at, layer_values, pbf
from mongelink.workspace import CellAccountant, DpWorkspace
from helpers import PBF_C, contracted_view, small_family


def _ws(o, backend):
    return DpWorkspace.for_oracle(o, backend)


def test_square_two_links(backend):
    o = mc.convex_sq(6)
    ws = _ws(o, backend)
    pbf(mc.ContractedView(o), 2, 6, ws)
    assert (ws.f[6], ws.fbar[6]) == (13, 9)


def test_single_layer(backend):
    o = mc.convex_sq(6)
    f, fbar = layer_values(mc.ContractedView(o), 1, 6, _ws(o, backend))
    assert f == [(j - 1) ** 2 for j in range(2, 7)]
    assert fbar[-1] == 13


def test_linear_delta_zero(backend):
    o = mc.linear(6)
    ws = _ws(o, backend)
    pbf(mc.ContractedView(o), 3, 6, ws)
    assert (ws.f[6], ws.fbar[6], delta_at(ws, 6)) == (5, 5, 0)


@pytest.mark.parametrize("m,n", [(0, 5), (2, 3), (3, 4), (1, 7)])
def test_rejects_bad_ranges(m, n):
    o = mc.convex_sq(6)
    ws = DpWorkspace.for_oracle(o)
    before = list(ws.f)
    with pytest.raises(ValueError):
        pbf(mc.ContractedView(o), m, n, ws)
    assert list(ws.f) == before


def test_range_markers():
    o = mc.convex_sq(9)
    ws = DpWorkspace.for_oracle(o)
    pbf(contracted_view(o, 2), 3, 8, ws)
    assert ws.f_range == (5, 8) and ws.fbar_range == (6, 8)
    with pytest.raises(IndexError):
        delta_at(ws, 9)


@pytest.mark.parametrize("N", [30, 200])
def test_matches_full_dp_rows(N, backend):
    for seed in range(3):
        o = mc.gen_random_monge(N, seed)
        M = N - 2
        rows = dp_full(o, M, full=True, backend=backend).rows
        ws = _ws(o, backend)
        view = mc.ContractedView(o)
        for m in sorted({1, 2, 3, N // 3, N // 2, N - 3}):
            for n in sorted({m + 2, (m + N) // 2 + 1, N}):
                if not 1 + m < n <= N:
                    continue
                f, fbar = layer_values(view, m, n, ws)
                assert f == [rows[m][j] for j in range(1 + m, n + 1)]
                assert fbar == [rows[m + 1][j] for j in range(2 + m, n + 1)]


def test_work_bound_on_small_grid(backend):
    worst = 0.0
    for N in (7, 12):
        for o in list(small_family(N))[:12]:
            ws = _ws(o, backend)
            for s in range(1, N - 1):
                view = contracted_view(o, s)
                for m in range(1, N - s):
                    for n in range(s + m + 1, N + 1):
                        o.reset_counter()
                        spent = pbf(view, m, n, ws)
                        assert spent == o.evals
                        worst = max(worst, spent / (m * (n - s + 2 - m)))
    assert worst <= PBF_C


def test_no_allocation_beyond_workspace():
    o = mc.gen_random_monge(300, 1)
    acc = CellAccountant()
    ws = DpWorkspace.for_oracle(o, accountant=acc)
    peak = acc.peak
    bufs = [id(b) for b in (ws.f, ws.fbar, ws.h, ws.F, ws.parent, ws.scratch)]
    pbf(mc.ContractedView(o), 40, 300, ws)
    assert acc.peak == peak == 8 * 301
    assert sorted(bufs) == sorted(id(b) for b in (ws.f, ws.fbar, ws.h, ws.F, ws.parent,
                                                   ws.scratch))
