#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fixpt/linalg.hpp"
#include "fixpt/point.hpp"

namespace fixpt {

inline constexpr double kMembershipTol = 1e-10;
inline constexpr double kTieTol = 1e-10;
inline constexpr double kOrthonormalTol = 1e-12;
inline constexpr std::size_t kMaxFourierLength = 16;

struct SetSpec;

// point + span of an orthonormal list (empty basis = the single point)
struct AffineSubspace {
    Point point;
    std::vector<Point> basis;
};

// {x : <normal, x> = offset}
struct Hyperplane {
    Point normal;
    double offset = 0.0;
};

// {x : <normal, x> <= offset}
struct HalfSpace {
    Point normal;
    double offset = 0.0;
};

struct Sphere {
    Point center;
    double radius = 1.0;
};

struct Ball {
    Point center;
    double radius = 1.0;
};

// union of the coordinate axes of R^dim
struct Cross {
    std::size_t dim = 2;
};

// R^dim minus the open positive orthant
struct OrthantComplement {
    std::size_t dim = 2;
};

struct FinitePointSet {
    std::vector<Point> points;
};

struct Box {
    Point lower, upper;
};

// {x in R^{2n} : |(F x)_k| = b_k}; x stores (re, im) pairs, F the unitary DFT
struct FourierMagnitude {
    std::vector<double> modulus;
    std::string transform = "dft";
};

// finite intersection of half-spaces
struct Polyhedron {
    std::vector<HalfSpace> faces;
};

struct Product {
    std::vector<SetSpec> factors;
};

using SetKind = std::variant<AffineSubspace, Hyperplane, HalfSpace, Sphere, Ball, Cross,
                             OrthantComplement, FinitePointSet, Box, FourierMagnitude,
                             Polyhedron, Product>;

struct SetSpec {
    SetKind kind;
    std::string label;
};

std::string_view kind_name(const SetSpec& s);

enum class Multiplicity { unique, finite_tie, continuum };

std::string_view to_string(Multiplicity m);

struct ProjectionResult {
    std::vector<Point> points; // lexicographically sorted
    Multiplicity multiplicity = Multiplicity::unique;

    const Point& first() const { return points.front(); }
    bool degenerate() const { return multiplicity == Multiplicity::continuum; }
};

std::size_t ambient_dim(const SetSpec& s);
bool is_convex(const SetSpec& s);

// throws InvalidParameter when an invariant of the set description fails
void validate(const SetSpec& s);

ProjectionResult project(const SetSpec& s, const Point& x);
std::vector<Point> reflect(const SetSpec& s, const Point& x);
double distance(const SetSpec& s, const Point& x);
bool contains(const SetSpec& s, const Point& x, double tol = kMembershipTol);

// real 2n x 2n representation of the unitary DFT on C^n; cached
const Matrix& dft_matrix(std::size_t n);

// complex moduli |(F x)_k| for x in R^{2n}
std::vector<double> fourier_moduli(const Point& x);

/* functions */

// f(x) = x'Ax + b'x
struct Quadratic {
    Matrix A;
    Point b;
};

// g(x) = weight * ||D x||_1 with D = diag(scaling); empty scaling means D = I
struct L1 {
    double weight = 1.0;
    std::vector<double> scaling;
};

struct Indicator {
    SetSpec set;
};

struct FunctionSpec;

struct MoreauEnvelopeOf {
    std::shared_ptr<const FunctionSpec> inner;
    double lambda = 1.0;
};

using FunctionKind = std::variant<Quadratic, L1, Indicator, MoreauEnvelopeOf>;

struct FunctionSpec {
    FunctionKind kind;
    std::string label;
};

std::string_view kind_name(const FunctionSpec& f);

void validate(const FunctionSpec& f);

double evaluate(const FunctionSpec& f, const Point& x);
Point gradient(const Quadratic& q, const Point& x);
ProjectionResult prox(const FunctionSpec& f, double lambda, const Point& x);
double moreau_envelope(const FunctionSpec& f, double lambda, const Point& x);

} // namespace fixpt
