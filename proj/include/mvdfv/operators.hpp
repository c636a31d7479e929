/** \file operators.hpp
 * \brief Discrete gradient, flux and divergence on the MVD mesh.
 */

#ifndef MVDFV_OPERATORS_HPP
#define MVDFV_OPERATORS_HPP

#include "mvdfv/fields.hpp"

namespace mvd {

/// Diffusion tensor per MVD cell, either one constant or one per cell.
class TensorField
{
public:
    explicit TensorField(Tensor2 constant = {}) : values_{constant} {}
    explicit TensorField(std::vector<Tensor2> per_cell) : values_(std::move(per_cell)) {}

    /// Evaluate k at every cell center.
    static TensorField sample(const std::function<Tensor2(Point2)>& k, const MvdMesh& mvd);

    bool is_constant() const { return values_.size() == 1; }
    std::size_t size() const { return values_.size(); }
    const Tensor2& at(std::size_t cell) const { return values_.size() == 1 ? values_[0] : values_[cell]; }

private:
    std::vector<Tensor2> values_;
};

/// Local tensor of cell m. Throws NonSpdTensor with the cell index.
Tensor2 local_tensor(const TensorField& K, const MvdMesh& mvd, std::size_t m);

VectorField grad_h(const ScalarField& y, const MvdMesh& mvd);

/// g = -K~ grad in each cell frame.
VectorField apply_flux(const TensorField& K, const VectorField& grad, const MvdMesh& mvd);

/// Per D-node; boundary entries are 0.
std::vector<double> div_D(const VectorField& v, const MvdMesh& mvd);
/// Per V-node; boundary entries are 0.
std::vector<double> div_V(const VectorField& v, const MvdMesh& mvd);
/// Both parts as a dirichlet_zero field.
ScalarField div_h(const VectorField& v, const MvdMesh& mvd);

} // namespace mvd

#endif
