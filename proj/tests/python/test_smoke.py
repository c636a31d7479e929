import math
import os
import pathlib

import pytest

import mvdfv

FIXTURES = pathlib.Path(
    os.environ.get("MVD_FIXTURE_DIR", pathlib.Path(__file__).resolve().parents[1] / "fixtures")
)


def fixture(row):
    return str(FIXTURES / f"mesh{row:02d}.msh")


def test_parse_and_counts():
    mesh = mvdfv.parse_msh_file(fixture(1))
    assert mesh.num_nodes == 16
    q = mvdfv.validate_acute(mesh)
    assert q.is_acute
    assert round(q.min_angle, 1) == 42.7
    mvd = mvdfv.build_mvd(mesh)
    assert (mvd.num_D, mvd.num_V, mvd.num_cells) == (16, 30, 35)
    assert abs(sum(mvd.S_D) - 0.75) < 1e-12
    assert abs(sum(c.S_star for c in mvd.cells) - 0.75) < 1e-12
    assert len(mvd.dump_cells().splitlines()) == 36


def test_parse_error_has_line():
    with pytest.raises(mvdfv.ParseError, match="line 2"):
        mvdfv.parse_msh_string("$MeshFormat\n4.1 0 8\n$EndMeshFormat\n")
    assert issubclass(mvdfv.ParseError, mvdfv.MvdError)


def test_geometry_helpers():
    assert mvdfv.circumcenter((0, 0), (1, 0), (0, 1)) == pytest.approx((0.5, 0.5))
    assert sum(mvdfv.triangle_angles((0, 0), (1, 0), (0.3, 0.8))) == pytest.approx(180.0)
    r = mvdfv.rotate_tensor("K2", math.pi / 4)
    assert r == pytest.approx([50.5, 49.5, 49.5, 50.5], abs=1e-12)
    assert mvdfv.tensor_preset(3) == [1.0, 9.0, 9.0, 100.0]


def test_generated_mesh():
    mesh = mvdfv.generate_rectangle_mesh(0.1)
    assert mvdfv.validate_acute(mesh).is_acute
    assert mesh.domain_area() == pytest.approx(0.75)
    with pytest.raises(mvdfv.MvdError):
        mvdfv.generate_rectangle_mesh(2.0)


def test_operators_linear_exactness():
    mvd = mvdfv.build_mvd(mvdfv.parse_msh_file(fixture(4)))
    f = lambda p: 2.0 * p[0] - 3.0 * p[1]
    comp_D, comp_V = mvdfv.grad_h(mvd, [f(p) for p in mvd.d_nodes], [f(p) for p in mvd.v_nodes])
    for c, gd, gv in zip(mvd.cells, comp_D, comp_V):
        assert gd == pytest.approx(2.0 * c.e_D[0] - 3.0 * c.e_D[1], abs=1e-10)
        assert gv == pytest.approx(2.0 * c.e_V[0] - 3.0 * c.e_V[1], abs=1e-10)
    div_D, div_V = mvdfv.div_h(mvd, [1.0] * mvd.num_cells, [0.0] * mvd.num_cells)
    assert len(div_D) == mvd.num_D and len(div_V) == mvd.num_V


def test_solve_matches_manufactured():
    mvd = mvdfv.build_mvd(mvdfv.parse_msh_file(fixture(7)))
    out = mvdfv.solve(mvd, "K3", 1.0, lambda x1, x2: mvdfv.manufactured_rhs("K3", 1.0, x1, x2))
    assert out["energy_residual"] < 1e-9
    err = max(abs(y - mvdfv.exact_u(*p)) for y, p in zip(out["values_D"], mvd.d_nodes))
    res = mvdfv.solve_manufactured(mvd, "K3", 1.0)
    assert err == pytest.approx(res.epsInf_D, rel=1e-6)


def test_study_and_csv():
    rows, slopes = mvdfv.convergence_study([fixture(r) for r in (1, 4, 7, 10)], "K1", 1.0)
    assert len(rows) == 4
    assert -1.3 <= slopes[0] <= -0.7
    text = mvdfv.emit_csv(rows, include_timing=False)
    lines = text.splitlines()
    assert lines[0] == "level,M_D,M_V,M,eps2_D,eps2_V,epsInf_D,epsInf_V,eps_grad,iters,seconds"
    assert float(lines[1].split(",")[4]) == rows[0].eps2_D
    with pytest.raises(mvdfv.MvdError):
        mvdfv.convergence_study([fixture(1), fixture(4)])


def test_run_case_and_errors():
    res = mvdfv.run_case(mesh=fixture(4), tensor=[1, 0, 0, 100], reaction=0.0)
    assert res.M_D == 36
    with pytest.raises(mvdfv.MvdError):
        mvdfv.run_case(mesh=fixture(4), tensor="K7")
    with pytest.raises(mvdfv.SolverError):
        mvdfv.run_case(mesh=fixture(1), tol=1e-300)
