"""Regenerate the committed gmsh fixtures tests/fixtures/meshNN.msh.

Each level meshes the rectangle [0,1] x [0,0.75] with the Frontal-Delaunay
algorithm and a uniform characteristic length. The lengths below were found
by search so that node counts and extreme angles match the reference table
rows the fixtures are named after.

    python tools/make_fixtures.py [output-dir]
"""

import pathlib
import sys

import gmsh

LEVELS = {1: 0.4, 4: 0.20094, 7: 0.09413, 10: 0.0478, 13: 0.02717, 16: 0.0143}


def write_level(lc, path):
    gmsh.clear()
    gmsh.model.add("rect")
    corners = [(0, 0), (1, 0), (1, 0.75), (0, 0.75)]
    p = [gmsh.model.geo.addPoint(x, y, 0, lc) for x, y in corners]
    lines = [gmsh.model.geo.addLine(p[i], p[(i + 1) % 4]) for i in range(4)]
    loop = gmsh.model.geo.addCurveLoop(lines)
    gmsh.model.geo.addPlaneSurface([loop])
    gmsh.model.geo.synchronize()
    gmsh.option.setNumber("Mesh.Algorithm", 6)
    gmsh.model.mesh.generate(2)
    gmsh.option.setNumber("Mesh.MshFileVersion", 2.2)
    gmsh.write(str(path))


def main():
    root = pathlib.Path(__file__).resolve().parents[1]
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else root / "tests" / "fixtures"
    out.mkdir(parents=True, exist_ok=True)
    gmsh.initialize()
    gmsh.option.setNumber("General.Terminal", 0)
    for row, lc in LEVELS.items():
        write_level(lc, out / f"mesh{row:02d}.msh")
    gmsh.finalize()


if __name__ == "__main__":
    main()
