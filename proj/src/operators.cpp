#include "mvdfv/operators.hpp"

namespace mvd {

TensorField TensorField::sample(const std::function<Tensor2(Point2)>& k, const MvdMesh& mvd)
{
    std::vector<Tensor2> values;
    values.reserve(mvd.num_cells());
    for (const MvdCell& c : mvd.cells)
        values.push_back(k(c.center));
    return TensorField(std::move(values));
}

Tensor2 local_tensor(const TensorField& K, const MvdMesh& mvd, std::size_t m)
{
    if (!K.is_constant() && K.size() != mvd.num_cells())
        throw MeshMismatch("tensor field size does not match the cell count");
    const Tensor2& k = K.at(m);
    if (!k.is_spd())
        throw NonSpdTensor("diffusion tensor is not symmetric positive definite in cell " + std::to_string(m), m);
    return rotate_tensor(k, mvd.cells[m].frame.theta);
}

VectorField grad_h(const ScalarField& y, const MvdMesh& mvd)
{
    require_on(y, mvd);
    VectorField g = VectorField::zeros(mvd);
    for (std::size_t m = 0; m < mvd.num_cells(); ++m) {
        const MvdCell& c = mvd.cells[m];
        g.comp_D[m] = (y.values_D[c.d_nodes[1]] - y.values_D[c.d_nodes[0]]) / c.len_D;
        g.comp_V[m] = (y.values_V[c.v_nodes[1]] - y.values_V[c.v_nodes[0]]) / c.len_V;
    }
    return g;
}

VectorField apply_flux(const TensorField& K, const VectorField& grad, const MvdMesh& mvd)
{
    require_on(grad, mvd);
    VectorField g = VectorField::zeros(mvd);
    for (std::size_t m = 0; m < mvd.num_cells(); ++m) {
        const Tensor2 k = local_tensor(K, mvd, m);
        const Point2 q = k.apply({grad.comp_D[m], grad.comp_V[m]});
        g.comp_D[m] = -q.x1;
        g.comp_V[m] = -q.x2;
    }
    return g;
}

std::vector<double> div_D(const VectorField& v, const MvdMesh& mvd)
{
    require_on(v, mvd);
    std::vector<double> out(mvd.num_D(), 0.0);
    for (std::size_t i = 0; i < mvd.num_D(); ++i) {
        if (mvd.boundary_D[i])
            continue;
        double s = 0.0;
        for (const Incidence& in : mvd.signs.d[i])
            s += v.comp_D[in.cell] * in.sign * mvd.cells[in.cell].len_V;
        out[i] = s / mvd.S_D[i];
    }
    return out;
}

std::vector<double> div_V(const VectorField& v, const MvdMesh& mvd)
{
    require_on(v, mvd);
    std::vector<double> out(mvd.num_V(), 0.0);
    for (std::size_t j = 0; j < mvd.num_V(); ++j) {
        if (mvd.boundary_V[j])
            continue;
        double s = 0.0;
        for (const Incidence& in : mvd.signs.v[j])
            s += v.comp_V[in.cell] * in.sign * mvd.cells[in.cell].len_D;
        out[j] = s / mvd.S_V[j];
    }
    return out;
}

ScalarField div_h(const VectorField& v, const MvdMesh& mvd)
{
    return {div_D(v, mvd), div_V(v, mvd), true, &mvd};
}

} // namespace mvd
