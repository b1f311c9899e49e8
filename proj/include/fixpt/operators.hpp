#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "fixpt/geometry.hpp"

namespace fixpt {

struct OperatorSpec;

struct ProjectorOp {
    SetSpec set;
};

struct ProxOp {
    FunctionSpec fn;
    double lambda = 1.0;
};

// 2P - Id for a set, 2 prox_{1,f} - Id for a function
struct ReflectorOp {
    std::variant<SetSpec, FunctionSpec> target;
};

// x - t grad f(x), f quadratic, grad f = 2Ax + b
struct GradientStepOp {
    FunctionSpec f;
    double step = 0.1;
};

// ops[0] o ops[1] o ... : the last entry is applied first
struct ComposeOp {
    std::vector<OperatorSpec> ops;
};

struct AverageOp {
    std::vector<OperatorSpec> ops;
    std::vector<double> weights;
};

struct KMRelaxOp {
    std::shared_ptr<const OperatorSpec> inner;
    double lambda = 0.5;
};

// P_1 P_2 ... P_m P_1
struct CyclicProjectionsOp {
    std::vector<SetSpec> sets;
};

// (1/2)(R_f R_g + Id)
struct DouglasRachfordOp {
    FunctionSpec f, g;
};

// (beta/2)(R_A R_B + Id) + (1 - beta) P_B
struct RAAROp {
    SetSpec a, b;
    double beta = 0.5;
};

using OperatorKind = std::variant<ProjectorOp, ProxOp, ReflectorOp, GradientStepOp, ComposeOp, AverageOp,
                                  KMRelaxOp, CyclicProjectionsOp, DouglasRachfordOp, RAAROp>;

struct OperatorSpec {
    OperatorKind kind;
    std::string label;
};

std::string_view kind_name(const OperatorSpec& T);

void validate(const OperatorSpec& T);
std::size_t ambient_dim(const OperatorSpec& T); // 0 when no constituent fixes it

enum class SelectionMode { lexicographic_min, random_seeded, all_branches };

struct SelectionPolicy {
    SelectionMode mode = SelectionMode::lexicographic_min;
    std::uint64_t seed = 0;
    std::size_t budget = 16;

    static SelectionPolicy lexicographic() { return {}; }
    static SelectionPolicy random(std::uint64_t seed) { return {SelectionMode::random_seeded, seed, 16}; }
    static SelectionPolicy all(std::size_t budget) { return {SelectionMode::all_branches, 0, budget}; }
};

std::string_view to_string(SelectionMode m);

struct Images {
    std::vector<Point> points; // sorted, deduplicated at 1e-12
    bool continuum = false;    // some constituent hit a singular query
};

/* One application of T. Set-valued constituents are resolved where they occur:
 * lexicographic-min keeps the smallest candidate, random-seeded draws one from a
 * stream keyed on (seed, step), all-branches keeps everything and throws
 * BranchBudgetExceeded when more than `budget` branches are alive. */
Images apply(const OperatorSpec& T, const Point& x, const SelectionPolicy& policy = {},
             std::uint64_t step = 0);

// shorthand for the single image under a selecting policy
Point apply_one(const OperatorSpec& T, const Point& x, const SelectionPolicy& policy = {},
                std::uint64_t step = 0);

OperatorSpec projector_op(SetSpec s);
OperatorSpec prox_op(FunctionSpec f, double lambda);
OperatorSpec reflector_op(SetSpec s);
OperatorSpec reflector_op(FunctionSpec f);
OperatorSpec gradient_step(FunctionSpec quadratic, double t);
OperatorSpec compose(std::vector<OperatorSpec> ops);
OperatorSpec average(std::vector<OperatorSpec> ops, std::vector<double> weights);
OperatorSpec km_relax(OperatorSpec T, double lambda);
OperatorSpec cyclic_projections(const std::vector<SetSpec>& sets);
OperatorSpec forward_backward(FunctionSpec f, FunctionSpec g, double t);
OperatorSpec douglas_rachford(FunctionSpec f, FunctionSpec g);
OperatorSpec raar(SetSpec a, SetSpec b, double beta);

} // namespace fixpt
