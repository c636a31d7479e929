"""Finite-volume diffusion-reaction solver on merged Voronoi-Delaunay meshes."""

from ._core import (
    CaseResult,
    MvdCell,
    MvdError,
    MvdMesh,
    ParseError,
    QualityReport,
    SolverError,
    TriMesh,
    build_mvd,
    circumcenter,
    convergence_study,
    div_h,
    emit_csv,
    equilateral_mesh,
    exact_u,
    generate_rectangle_mesh,
    grad_h,
    manufactured_rhs,
    parse_msh_file,
    parse_msh_string,
    rotate_tensor,
    run_case,
    solve,
    solve_manufactured,
    tensor_preset,
    triangle_angles,
    validate_acute,
)

__all__ = [name for name in dir() if not name.startswith("_")]
