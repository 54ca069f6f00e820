#include "hicon/assemble.hpp"

#include <tuple>

#include "hicon/parallel.hpp"

namespace hicon {

namespace {

// 6x6 element stiffness for the vector form; local DOF = 2*a + i.
void element_stiffness(const Element& e, const QuadForm& q, double weight, double k[6][6]) {
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 2; ++i)
            for (int b = 0; b < 3; ++b)
                for (int ii = 0; ii < 2; ++ii) {
                    double s = 0.0;
                    for (int j = 0; j < 2; ++j)
                        for (int l = 0; l < 2; ++l)
                            s += q.c[i][j][ii][l] * e.grad[a][j] * e.grad[b][l];
                    k[2 * a + i][2 * b + ii] = weight * e.area * s;
                }
}

} // namespace

CsrMatrix assemble_stiffness(const std::vector<Element>& elements, int node_count,
                             const QuadForm& q, std::optional<ComponentTag> region,
                             double weight) {
    const std::size_t ne = elements.size();
    std::vector<double> local(ne * 36, 0.0);
    std::vector<std::uint8_t> active(ne, 0);
    par::for_each(ne, [&](std::size_t t) {
        const Element& e = elements[t];
        if (region && e.tag != *region) return;
        active[t] = 1;
        double k[6][6];
        element_stiffness(e, q, weight, k);
        for (int p = 0; p < 6; ++p)
            for (int r = 0; r < 6; ++r) local[t * 36 + 6 * p + r] = k[p][r];
    });
    std::vector<std::tuple<int, int, double>> coo;
    coo.reserve(ne * 36);
    for (std::size_t t = 0; t < ne; ++t) {
        if (!active[t]) continue;
        const Element& e = elements[t];
        for (int p = 0; p < 6; ++p)
            for (int r = 0; r < 6; ++r)
                coo.emplace_back(2 * e.n[p / 2] + p % 2, 2 * e.n[r / 2] + r % 2,
                                 local[t * 36 + 6 * p + r]);
    }
    return CsrMatrix::from_coo(2 * node_count, coo);
}

CsrMatrix assemble_contrast_stiffness(const std::vector<Element>& elements, int node_count,
                                      const QuadForm& q_soft, const QuadForm& q_stiff,
                                      double stiff_weight) {
    const std::size_t ne = elements.size();
    std::vector<double> local(ne * 36, 0.0);
    par::for_each(ne, [&](std::size_t t) {
        const Element& e = elements[t];
        const bool soft = e.tag == ComponentTag::Soft;
        double k[6][6];
        element_stiffness(e, soft ? q_soft : q_stiff, soft ? 1.0 : stiff_weight, k);
        for (int p = 0; p < 6; ++p)
            for (int r = 0; r < 6; ++r) local[t * 36 + 6 * p + r] = k[p][r];
    });
    std::vector<std::tuple<int, int, double>> coo;
    coo.reserve(ne * 36);
    for (std::size_t t = 0; t < ne; ++t) {
        const Element& e = elements[t];
        for (int p = 0; p < 6; ++p)
            for (int r = 0; r < 6; ++r)
                coo.emplace_back(2 * e.n[p / 2] + p % 2, 2 * e.n[r / 2] + r % 2,
                                 local[t * 36 + 6 * p + r]);
    }
    return CsrMatrix::from_coo(2 * node_count, coo);
}

AssembledQuadratic assemble_quadratic(const std::vector<Element>& elements, int node_count,
                                      const QuadForm& q, std::optional<ComponentTag> region) {
    return AssembledQuadratic{assemble_stiffness(elements, node_count, q, region, 1.0)};
}

CsrMatrix assemble_scalar_laplacian(const std::vector<Element>& elements, int node_count,
                                    std::optional<ComponentTag> region) {
    std::vector<std::tuple<int, int, double>> coo;
    for (const Element& e : elements) {
        if (region && e.tag != *region) continue;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                coo.emplace_back(e.n[a], e.n[b], e.area * dot(e.grad[a], e.grad[b]));
    }
    return CsrMatrix::from_coo(node_count, coo);
}

std::vector<double> assemble_load(const std::vector<Element>& elements, int node_count,
                                  const std::vector<Vec2>& l_per_element) {
    std::vector<double> b(2 * node_count, 0.0);
    for (std::size_t t = 0; t < elements.size(); ++t) {
        const Element& e = elements[t];
        const Vec2 w = (e.area / 3.0) * l_per_element[t];
        for (int a = 0; a < 3; ++a) {
            b[2 * e.n[a]] += w.x;
            b[2 * e.n[a] + 1] += w.y;
        }
    }
    return b;
}

double load_work(const std::vector<Element>& elements, const std::vector<Vec2>& l_per_element,
                 const VectorField& f) {
    return par::reduce_sum(elements.size(), [&](std::size_t t) {
        const Element& e = elements[t];
        const Vec2 fb = (1.0 / 3.0) * (f.get(e.n[0]) + f.get(e.n[1]) + f.get(e.n[2]));
        return e.area * dot(l_per_element[t], fb);
    });
}

std::vector<Vec2> sample_at_barycenters(const std::vector<Element>& elements,
                                        const std::function<Vec2(Vec2)>& fn) {
    std::vector<Vec2> out(elements.size());
    for (std::size_t t = 0; t < elements.size(); ++t) out[t] = fn(elements[t].bary);
    return out;
}

} // namespace hicon
