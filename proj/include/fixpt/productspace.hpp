#pragma once

#include <vector>

#include "fixpt/operators.hpp"

namespace fixpt {

// x = (x_1, ..., x_m) in E^m
struct ProductPoint {
    std::vector<Point> blocks;

    std::size_t m() const noexcept { return blocks.size(); }
    std::size_t n() const noexcept { return blocks.empty() ? 0 : blocks.front().dim(); }
};

void validate(const ProductPoint& x);

// concatenation of blocks, the E^m <-> R^{mn} identification used for norms and sampling
Point flatten(const ProductPoint& x);
ProductPoint unflatten(const Point& flat, std::size_t m);

ProductPoint operator-(const ProductPoint& a, const ProductPoint& b);
double norm(const ProductPoint& x);
double distance(const ProductPoint& a, const ProductPoint& b);

struct DifferenceVector {
    std::vector<Point> blocks;   // zeta_j
    ProductPoint source_cycle;   // z in W_0 with zeta = z - Pi z

    ProductPoint as_product() const { return {blocks}; }
};

// (x_1, ..., x_m) -> (x_2, ..., x_m, x_1)
ProductPoint permute(const ProductPoint& x);

// P_Omega(Pi x) - Pi x, one entry per branch
std::vector<ProductPoint> psi(const std::vector<SetSpec>& sets, const ProductPoint& x,
                              const SelectionPolicy& policy = {});

// cycles z with z_1 = u, z_m in P_m u, z_j in P_j z_{j+1} for j = m-1..2
std::vector<ProductPoint> lift_to_cycle(const std::vector<SetSpec>& sets, const Point& u,
                                        const SelectionPolicy& policy = {});

std::vector<DifferenceVector> difference_vectors(const std::vector<SetSpec>& sets, const Point& u,
                                                 std::size_t budget = 16);

// (x_1^+, x_1^+ - zeta_1, ..., x_1^+ - sum_{j<m} zeta_j) for x_1^+ in P_0 x_1
std::vector<ProductPoint> t_zeta(const std::vector<SetSpec>& sets, const DifferenceVector& zeta,
                                 const ProductPoint& x, const SelectionPolicy& policy = {});

// dist(0, Phi_zeta(x)) with Phi_zeta = T_zeta - Id, computed over all branches
double phi_zeta_residual(const std::vector<SetSpec>& sets, const DifferenceVector& zeta, const ProductPoint& x,
                         std::size_t budget = 16);

// dist(zeta, Psi(x)) over all branches
double psi_gap(const std::vector<SetSpec>& sets, const DifferenceVector& zeta, const ProductPoint& x,
               std::size_t budget = 16);

// W(zeta) = {x : x - Pi x = zeta} as an affine subspace of R^{mn}
AffineSubspace w_subspace(const DifferenceVector& zeta);

// the unique point of W(zeta) with first block x1
ProductPoint lift_into_w(const DifferenceVector& zeta, const Point& x1);

// cyclic projections operator P_0 for these sets
OperatorSpec p0(const std::vector<SetSpec>& sets);

} // namespace fixpt
