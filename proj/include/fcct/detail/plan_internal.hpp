#pragma once

#include "fcct/transform.hpp"

namespace fcct {

class PlanStore;

// Plumbing between plan construction and the on-disk cache. Not part of the
// library surface.

// Builds one plan node; children come through child_source when given,
// otherwise by direct recursion.
std::shared_ptr<const TransformPlan>
build_plan_node(int n, const SkewParams& p, PlanStore* child_source);

// Reassemble plans from already-materialized factors, recomputing every
// derived quantity (factor decompositions, condition gates).
std::shared_ptr<const TransformPlan>
assemble_direct_plan(int n, const SkewParams& p, DenseTransform dt);

std::shared_ptr<const TransformPlan> assemble_radix_plan(
    int n, const SkewParams& p, const Eigen::Matrix<Complex, 8, 8>& kernel,
    std::vector<std::uint64_t> perm, Eigen::SparseMatrix<Complex> basis,
    std::array<std::shared_ptr<const TransformPlan>, 8> children);

} // namespace fcct
