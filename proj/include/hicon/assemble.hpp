#ifndef HICON_ASSEMBLE_HPP
#define HICON_ASSEMBLE_HPP

#include <functional>
#include <optional>

#include "hicon/mesh.hpp"
#include "hicon/quadform.hpp"
#include "hicon/sparse.hpp"

namespace hicon {

// Assembled second derivative of sum_T |T| w_T Q(grad phi); the energy of a
// nodal field is 1/2 phi^T K phi. DOF layout: (2*node + component).
CsrMatrix assemble_stiffness(const std::vector<Element>& elements, int node_count,
                             const QuadForm& q, std::optional<ComponentTag> region = {},
                             double weight = 1.0);

// Soft and stiff forms in one operator, the stiff side carrying the contrast.
CsrMatrix assemble_contrast_stiffness(const std::vector<Element>& elements, int node_count,
                                      const QuadForm& q_soft, const QuadForm& q_stiff,
                                      double stiff_weight);

// Operator with phi^T A phi = sum_{T in region} |T| Q(grad phi), exact for P1.
struct AssembledQuadratic {
    CsrMatrix hessian;
    double value(const VectorField& f) const { return 0.5 * hessian.quadratic(f.v); }
};

AssembledQuadratic assemble_quadratic(const std::vector<Element>& elements, int node_count,
                                      const QuadForm& q, std::optional<ComponentTag> region = {});

// Componentwise Laplacian (one DOF per node).
CsrMatrix assemble_scalar_laplacian(const std::vector<Element>& elements, int node_count,
                                    std::optional<ComponentTag> region = {});

// Load functional by one-point (barycenter) quadrature.
std::vector<double> assemble_load(const std::vector<Element>& elements, int node_count,
                                  const std::vector<Vec2>& l_per_element);
double load_work(const std::vector<Element>& elements, const std::vector<Vec2>& l_per_element,
                 const VectorField& f);

// Evaluate a closed-form field at element barycenters.
std::vector<Vec2> sample_at_barycenters(const std::vector<Element>& elements,
                                        const std::function<Vec2(Vec2)>& fn);

} // namespace hicon

#endif
