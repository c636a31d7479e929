#include "mvdfv/fields.hpp"

namespace mvd {

ScalarField ScalarField::zeros(const MvdMesh& mvd, bool dirichlet_zero)
{
    return {std::vector<double>(mvd.num_D(), 0.0), std::vector<double>(mvd.num_V(), 0.0), dirichlet_zero, &mvd};
}

VectorField VectorField::zeros(const MvdMesh& mvd)
{
    return {std::vector<double>(mvd.num_cells(), 0.0), std::vector<double>(mvd.num_cells(), 0.0), &mvd};
}

void require_on(const ScalarField& y, const MvdMesh& mvd)
{
    if (y.mesh != &mvd || y.values_D.size() != mvd.num_D() || y.values_V.size() != mvd.num_V())
        throw MeshMismatch("scalar field does not live on this mesh");
}

void require_on(const VectorField& v, const MvdMesh& mvd)
{
    if (v.mesh != &mvd || v.comp_D.size() != mvd.num_cells() || v.comp_V.size() != mvd.num_cells())
        throw MeshMismatch("vector field does not live on this mesh");
}

namespace {

const MvdMesh& common_mesh(const ScalarField& a, const ScalarField& b)
{
    if (a.mesh == nullptr || a.mesh != b.mesh)
        throw MeshMismatch("scalar fields live on different meshes");
    require_on(a, *a.mesh);
    require_on(b, *a.mesh);
    return *a.mesh;
}

const MvdMesh& common_mesh(const VectorField& a, const VectorField& b)
{
    if (a.mesh == nullptr || a.mesh != b.mesh)
        throw MeshMismatch("vector fields live on different meshes");
    require_on(a, *a.mesh);
    require_on(b, *a.mesh);
    return *a.mesh;
}

} // namespace

double inner_D(const ScalarField& y, const ScalarField& v)
{
    const MvdMesh& mvd = common_mesh(y, v);
    const bool interior_only = y.dirichlet_zero || v.dirichlet_zero;
    double s = 0.0;
    for (std::size_t i = 0; i < mvd.num_D(); ++i)
        if (!(interior_only && mvd.boundary_D[i]))
            s += y.values_D[i] * v.values_D[i] * mvd.S_D[i];
    return s;
}

double inner_V(const ScalarField& y, const ScalarField& v)
{
    const MvdMesh& mvd = common_mesh(y, v);
    double s = 0.0;
    for (std::size_t j = 0; j < mvd.num_V(); ++j)
        if (!mvd.boundary_V[j])
            s += y.values_V[j] * v.values_V[j] * mvd.S_V[j];
    return s;
}

double inner_star_D(const VectorField& v, const VectorField& w)
{
    const MvdMesh& mvd = common_mesh(v, w);
    double s = 0.0;
    for (std::size_t m = 0; m < mvd.num_cells(); ++m)
        s += v.comp_D[m] * w.comp_D[m] * mvd.cells[m].S_star;
    return s;
}

double inner_star_V(const VectorField& v, const VectorField& w)
{
    const MvdMesh& mvd = common_mesh(v, w);
    double s = 0.0;
    for (std::size_t m = 0; m < mvd.num_cells(); ++m)
        s += v.comp_V[m] * w.comp_V[m] * mvd.cells[m].S_star;
    return s;
}

double inner_star(const VectorField& v, const VectorField& w)
{
    const MvdMesh& mvd = common_mesh(v, w);
    double s = 0.0;
    for (std::size_t m = 0; m < mvd.num_cells(); ++m)
        s += (v.comp_D[m] * w.comp_D[m] + v.comp_V[m] * w.comp_V[m]) * mvd.cells[m].S_star;
    return s;
}

ScalarField sample_scalar(const std::function<double(Point2)>& f, const MvdMesh& mvd)
{
    ScalarField y = ScalarField::zeros(mvd);
    for (std::size_t i = 0; i < mvd.num_D(); ++i)
        y.values_D[i] = f(mvd.tri.nodes[i]);
    for (std::size_t j = 0; j < mvd.num_V(); ++j)
        y.values_V[j] = f(mvd.dual.vertices[j]);
    return y;
}

VectorField sample_vector(const std::function<Point2(Point2)>& w, const MvdMesh& mvd)
{
    VectorField v = VectorField::zeros(mvd);
    for (std::size_t m = 0; m < mvd.num_cells(); ++m) {
        const MvdCell& c = mvd.cells[m];
        const Point2 x = w(c.center);
        v.comp_D[m] = dot(x, c.frame.e_D);
        v.comp_V[m] = dot(x, c.frame.e_V);
    }
    return v;
}

void impose_dirichlet_zero(ScalarField& y)
{
    if (y.mesh == nullptr)
        throw MeshMismatch("scalar field has no mesh");
    require_on(y, *y.mesh);
    for (std::size_t i = 0; i < y.values_D.size(); ++i)
        if (y.mesh->boundary_D[i])
            y.values_D[i] = 0.0;
    for (std::size_t j = 0; j < y.values_V.size(); ++j)
        if (y.mesh->boundary_V[j])
            y.values_V[j] = 0.0;
    y.dirichlet_zero = true;
}

} // namespace mvd
