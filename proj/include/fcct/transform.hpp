#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "fcct/spectral.hpp"

namespace fcct {

class PlanStore;

// Complex samples on an n^3 grid, lexicographic layout: index of (i, j, k)
// is (i*n + j)*n + k, last coordinate fastest.
struct SignalTensor {
    int n = 0;
    Eigen::VectorXcd data;

    static SignalTensor zeros(int n);
    std::int64_t size() const { return static_cast<std::int64_t>(n) * n * n; }
};

// Transform output: one value per node of the skew grid that produced it,
// same lexicographic layout as SignalTensor.
struct Spectrum {
    int n = 0;
    SkewParams params;
    Eigen::VectorXcd values;
};

// Dense evaluation matrix of the transform. Rows follow the NODES (i, l, q)
// and columns the polynomial indices (j, k, p), both lexicographic, so a
// plain matrix-vector product evaluates a coefficient vector at every node.
// condition_estimate is a probe-based 1-norm estimate, NaN when not computed.
struct DenseTransform {
    int n = 0;
    SkewParams params;
    Eigen::MatrixXcd matrix;
    double condition_estimate = std::numeric_limits<double>::quiet_NaN();
};

DenseTransform dense_transform(int n, const SkewParams& p);

Spectrum naive_apply(const DenseTransform& t, const SignalTensor& s);
SignalTensor inverse_apply(const DenseTransform& t, const Spectrum& q);

// Interleaving permutation of the radix-2x2x2 split: position
// blk*m^3 + child_lex of the stacked child grids maps to parent position
// ((ir+2kr)*n + (is+2ks))*n + (it+2kt), with m = n/2 and
// blk = (ir*2 + is)*2 + it. Throws OddSize for odd n.
std::vector<std::uint64_t> radix_permutation(int n);

// Sparse basis-change factor B of the factorization
//   D_n = P (blockdiag of 8 child transforms) (K (x) I_{m^3}) B,
// where K is the size-2 dense transform at the parent offsets. Derived
// numerically column by column and pruned at 1e-12. For n = 2 this is the
// identity.
Eigen::SparseMatrix<Complex> basis_change(int n, const SkewParams& p);

// Executable transform plan. Either a dense endpoint (odd or unit sizes) or
// one radix-2x2x2 level with eight half-size children. Immutable once built;
// safe to share across threads.
class TransformPlan {
public:
    enum class Kind { direct, radix2 };

    Kind kind() const { return kind_; }
    int n() const { return n_; }
    const SkewParams& params() const { return params_; }

    // direct only
    const DenseTransform& dense() const { return *dense_; }

    // radix2 only
    const std::vector<std::uint64_t>& permutation() const { return permutation_; }
    const Eigen::Matrix<Complex, 8, 8>& kernel() const { return kernel_; }
    const Eigen::SparseMatrix<Complex>& basis() const { return basis_; }
    const std::array<std::shared_ptr<const TransformPlan>, 8>& children() const {
        return children_;
    }

    // Raw vector forms of the transform and its inverse, recursing through
    // the children. threads > 1 fans the eight branches out to worker
    // threads; the arithmetic (hence the bits) does not depend on it.
    Eigen::VectorXcd apply_values(const Eigen::VectorXcd& x, int threads) const;
    Eigen::VectorXcd solve_values(const Eigen::VectorXcd& q, int threads) const;

    TransformPlan(const TransformPlan&) = delete;
    TransformPlan& operator=(const TransformPlan&) = delete;
    ~TransformPlan();

private:
    TransformPlan() = default;
    friend struct PlanBuilder;

    Kind kind_ = Kind::direct;
    int n_ = 0;
    SkewParams params_;

    std::unique_ptr<DenseTransform> dense_;
    std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXcd>> dense_lu_;

    std::vector<std::uint64_t> permutation_;
    Eigen::Matrix<Complex, 8, 8> kernel_;
    Eigen::Matrix<Complex, 8, 8> kernel_inverse_;
    std::array<std::shared_ptr<const TransformPlan>, 8> children_;
    Eigen::SparseMatrix<Complex> basis_;
    struct BasisSolver;
    std::unique_ptr<BasisSolver> basis_solver_;
};

// Builds (or loads through the optional store) the plan for size n: direct
// for n odd or n == 1, one radix level plus recursive children otherwise.
std::shared_ptr<const TransformPlan>
build_plan(int n, const SkewParams& p, PlanStore* store = nullptr);

// O(n^3 log n) application of the factorization. threads > 1 runs the eight
// child branches concurrently; the result is bitwise identical regardless.
Spectrum fast_apply(const TransformPlan& plan, const SignalTensor& s,
                    int threads = 1);

// Inverse transform through the same factors in reverse.
SignalTensor inverse_apply(const TransformPlan& plan, const Spectrum& q,
                           int threads = 1);

// max |factorized(e_k) - dense column k| over all k; the exactness measure
// of the factorization.
double factorization_residual(const TransformPlan& plan,
                              const DenseTransform& dense);

// Testing hook: a copy of a radix2 plan with delta added to one stored basis
// entry, children shared. Lets negative controls confirm the residual check
// actually detects a broken factor.
std::shared_ptr<const TransformPlan>
with_perturbed_basis(const TransformPlan& plan, double delta);

// Probe-based 1-norm condition estimate (exact 1-norm of A, LU solves against
// coordinate and random sign probes for the inverse norm).
double condition_estimate_1norm(const Eigen::MatrixXcd& a);

} // namespace fcct
