#include "fcct/transform.hpp"

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fcct/detail/plan_internal.hpp"
#include "fcct/errors.hpp"
#include "fcct/plan_cache.hpp"

namespace fcct {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double kConditionLimit = 1e12;
constexpr double kPruneThreshold = 1e-12;
constexpr double kDeriveResidualLimit = 1e-9;

using Matrix8 = Eigen::Matrix<Complex, 8, 8>;

std::int64_t cube(int n) { return static_cast<std::int64_t>(n) * n * n; }

Complex unit_phase(double turns) {
    return Complex{std::cos(two_pi * turns), std::sin(two_pi * turns)};
}

// Builds single columns of the dense matrix: the values of one basis
// polynomial at every node of the skew grid. Each group element contributes a
// rank-one tensor of n-th roots of unity, so a column costs 24 n^3 updates.
class ColumnEvaluator {
public:
    ColumnEvaluator(int n, const SkewParams& p) : n_(n), p_(p) {
        omega_.resize(n_);
        for (int j = 0; j < n_; ++j)
            omega_[j] = unit_phase(static_cast<double>(j) / n_);
        a_.resize(n_);
        b_.resize(n_);
        c_.resize(n_);
    }

    void column(const Index3& kappa, Complex* out) const {
        const std::int64_t n3 = cube(n_);
        std::fill(out, out + n3, Complex{0.0, 0.0});
        const auto& g = WeylGroup::s4();
        for (const auto& w : g.elements) {
            const Index3 a = w.apply(kappa);
            const Complex prefac = unit_phase(
                (p_.r * a[0] + p_.s * a[1] + p_.t * a[2]) / n_);
            fill_axis(a[0], a_);
            fill_axis(a[1], b_);
            fill_axis(a[2], c_);
            Complex* dst = out;
            for (int i = 0; i < n_; ++i) {
                const Complex pa = prefac * a_[i];
                for (int l = 0; l < n_; ++l) {
                    const Complex pab = pa * b_[l];
                    for (int q = 0; q < n_; ++q) *dst++ += pab * c_[q];
                }
            }
        }
        const double scale = 1.0 / g.order();
        for (std::int64_t i = 0; i < n3; ++i) out[i] *= scale;
    }

private:
    void fill_axis(int freq, std::vector<Complex>& table) const {
        const int f = ((freq % n_) + n_) % n_;
        for (int i = 0; i < n_; ++i)
            table[i] = omega_[static_cast<int>(
                (static_cast<std::int64_t>(f) * i) % n_)];
    }

    int n_;
    SkewParams p_;
    std::vector<Complex> omega_;
    mutable std::vector<Complex> a_, b_, c_;
};

Index3 unflatten(std::int64_t flat, int n) {
    const int p = static_cast<int>(flat % n);
    const int k = static_cast<int>((flat / n) % n);
    const int j = static_cast<int>(flat / (static_cast<std::int64_t>(n) * n));
    return Index3{j, k, p};
}

double condition_with_lu(const Eigen::MatrixXcd& a,
                         const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu) {
    const double norm_a = a.cwiseAbs().colwise().sum().maxCoeff();
    const Eigen::Index dim = a.rows();
    double inv_norm = 0.0;
    for (Eigen::Index j : {Eigen::Index{0}, dim / 2, dim - 1}) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
        e[j] = 1.0;
        inv_norm = std::max(inv_norm, lu.solve(e).lpNorm<1>());
    }
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int probe = 0; probe < 5; ++probe) {
        Eigen::VectorXcd v(dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            v[i] = Complex(coin(rng) ? 1.0 : -1.0, coin(rng) ? 1.0 : -1.0);
        inv_norm =
            std::max(inv_norm, lu.solve(v).lpNorm<1>() / v.lpNorm<1>());
    }
    return norm_a * inv_norm;
}

void require_condition(double cond, const std::string& what) {
    if (!(cond <= kConditionLimit))
        throw IllConditioned(what + ": condition estimate " +
                             std::to_string(cond) + " exceeds 1e12");
}

} // namespace

double condition_estimate_1norm(const Eigen::MatrixXcd& a) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    return condition_with_lu(a, lu);
}

SignalTensor SignalTensor::zeros(int n) {
    return SignalTensor{n, Eigen::VectorXcd::Zero(cube(n))};
}

DenseTransform dense_transform(int n, const SkewParams& p) {
    if (n < 1) throw std::invalid_argument("dense_transform: n must be >= 1");
    skew_nodes(n, p); // runs the degeneracy check for this grid
    const std::int64_t n3 = cube(n);
    DenseTransform out;
    out.n = n;
    out.params = p;
    out.matrix.resize(n3, n3);
    const ColumnEvaluator ev(n, p);
    for (std::int64_t col = 0; col < n3; ++col)
        ev.column(unflatten(col, n), out.matrix.col(col).data());
    if (n3 <= 512)
        out.condition_estimate = condition_estimate_1norm(out.matrix);
    return out;
}

Spectrum naive_apply(const DenseTransform& t, const SignalTensor& s) {
    if (t.n != s.n)
        throw SizeMismatch("naive_apply: transform size " +
                           std::to_string(t.n) + " vs signal size " +
                           std::to_string(s.n));
    if (s.data.size() != t.matrix.cols())
        throw SizeMismatch("naive_apply: signal has " +
                           std::to_string(s.data.size()) + " samples, need " +
                           std::to_string(t.matrix.cols()));
    return Spectrum{t.n, t.params, t.matrix * s.data};
}

SignalTensor inverse_apply(const DenseTransform& t, const Spectrum& q) {
    if (t.n != q.n)
        throw SizeMismatch("inverse_apply: transform size " +
                           std::to_string(t.n) + " vs spectrum size " +
                           std::to_string(q.n));
    if (!(t.params == q.params))
        throw std::invalid_argument(
            "inverse_apply: spectrum was produced on a different skew grid");
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(t.matrix);
    require_condition(condition_with_lu(t.matrix, lu), "dense transform");
    return SignalTensor{t.n, lu.solve(q.values)};
}

std::vector<std::uint64_t> radix_permutation(int n) {
    if (n < 2) throw std::invalid_argument("radix_permutation: n must be >= 2");
    if (n % 2 != 0)
        throw OddSize("radix_permutation: size " + std::to_string(n) +
                      " is odd");
    const int m = n / 2;
    const std::int64_t m3 = cube(m);
    std::vector<std::uint64_t> perm(static_cast<std::size_t>(cube(n)));
    for (int ir = 0; ir < 2; ++ir)
        for (int is = 0; is < 2; ++is)
            for (int it = 0; it < 2; ++it) {
                const int blk = (ir * 2 + is) * 2 + it;
                std::size_t idx = static_cast<std::size_t>(blk) * m3;
                for (int kr = 0; kr < m; ++kr)
                    for (int ks = 0; ks < m; ++ks)
                        for (int kt = 0; kt < m; ++kt)
                            perm[idx++] = static_cast<std::uint64_t>(
                                (static_cast<std::int64_t>(ir + 2 * kr) * n +
                                 (is + 2 * ks)) *
                                    n +
                                (it + 2 * kt));
            }
    return perm;
}

namespace {

// Numeric derivation of the sparse basis-change factor: solve
//   (K (x) I) (blockdiag child) z = P^T D
// column by column against the streamed dense columns, prune, and (for small
// sizes) verify the reassembled product against the dense matrix.
Eigen::SparseMatrix<Complex> derive_basis(int n, const SkewParams& p,
                                          const Matrix8& kernel) {
    const int m = n / 2;
    const std::int64_t n3 = cube(n), m3 = cube(m);
    const auto perm = radix_permutation(n);

    std::array<Eigen::MatrixXcd, 8> child_dense;
    std::array<std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXcd>>, 8> child_lu;
    const bool validate = n <= 8;
    for (int ir = 0; ir < 2; ++ir)
        for (int is = 0; is < 2; ++is)
            for (int it = 0; it < 2; ++it) {
                const int blk = (ir * 2 + is) * 2 + it;
                Eigen::MatrixXcd mat =
                    dense_transform(m, p.child(ir, is, it)).matrix;
                child_lu[blk] =
                    std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXcd>>(mat);
                require_condition(condition_with_lu(mat, *child_lu[blk]),
                                  "child block " + std::to_string(blk));
                if (validate) child_dense[blk] = std::move(mat);
            }

    Eigen::PartialPivLU<Matrix8> kernel_lu(kernel);
    {
        Eigen::MatrixXcd k = kernel;
        require_condition(condition_estimate_1norm(k), "radix kernel");
    }

    const ColumnEvaluator ev(n, p);
    const std::int64_t batch = std::min<std::int64_t>(n3, 256);
    Eigen::MatrixXcd d(n3, batch), y(n3, batch);
    Eigen::MatrixXcd gathered(8, m3 * batch);
    std::vector<Eigen::Triplet<Complex>> triplets;
    double worst_residual = 0.0;

    for (std::int64_t base = 0; base < n3; base += batch) {
        const std::int64_t cols = std::min(batch, n3 - base);
        for (std::int64_t c = 0; c < cols; ++c)
            ev.column(unflatten(base + c, n), d.col(c).data());

        for (std::int64_t idx = 0; idx < n3; ++idx)
            y.row(idx).head(cols) =
                d.row(static_cast<std::int64_t>(perm[idx])).head(cols);

        for (int blk = 0; blk < 8; ++blk) {
            Eigen::MatrixXcd solved =
                child_lu[blk]->solve(y.middleRows(blk * m3, m3).leftCols(cols));
            y.middleRows(blk * m3, m3).leftCols(cols) = solved;
        }

        for (std::int64_t c = 0; c < cols; ++c)
            for (std::int64_t h = 0; h < m3; ++h)
                for (int g = 0; g < 8; ++g)
                    gathered(g, c * m3 + h) = y(g * m3 + h, c);
        const Eigen::MatrixXcd unmixed =
            kernel_lu.solve(gathered.leftCols(cols * m3));
        gathered.leftCols(cols * m3) = unmixed;
        for (std::int64_t c = 0; c < cols; ++c)
            for (std::int64_t h = 0; h < m3; ++h)
                for (int g = 0; g < 8; ++g)
                    y(g * m3 + h, c) = gathered(g, c * m3 + h);

        for (std::int64_t c = 0; c < cols; ++c)
            for (std::int64_t row = 0; row < n3; ++row) {
                const Complex v = y(row, c);
                if (std::abs(v) >= kPruneThreshold)
                    triplets.emplace_back(static_cast<int>(row),
                                          static_cast<int>(base + c), v);
            }

        if (validate) {
            // Reapply the factors to the pruned columns and compare with the
            // dense columns they came from.
            for (std::int64_t c = 0; c < cols; ++c) {
                Eigen::VectorXcd b = y.col(c).head(n3);
                for (std::int64_t i = 0; i < n3; ++i)
                    if (std::abs(b[i]) < kPruneThreshold) b[i] = 0.0;
                Eigen::VectorXcd mixed(n3);
                for (std::int64_t h = 0; h < m3; ++h) {
                    Eigen::Matrix<Complex, 8, 1> slice;
                    for (int g = 0; g < 8; ++g) slice[g] = b[g * m3 + h];
                    const Eigen::Matrix<Complex, 8, 1> out = kernel * slice;
                    for (int g = 0; g < 8; ++g) mixed[g * m3 + h] = out[g];
                }
                Eigen::VectorXcd transformed(n3);
                for (int blk = 0; blk < 8; ++blk)
                    transformed.segment(blk * m3, m3) =
                        child_dense[blk] * mixed.segment(blk * m3, m3);
                double local = 0.0;
                for (std::int64_t idx = 0; idx < n3; ++idx)
                    local = std::max(
                        local, std::abs(transformed[idx] -
                                        d(static_cast<std::int64_t>(perm[idx]),
                                          c)));
                worst_residual = std::max(worst_residual, local);
            }
        }
    }

    if (validate && worst_residual > kDeriveResidualLimit)
        throw Error("basis-change derivation residual " +
                        std::to_string(worst_residual) + " exceeds 1e-9",
                    ErrorCategory::math);

    Eigen::SparseMatrix<Complex> basis(n3, n3);
    basis.setFromTriplets(triplets.begin(), triplets.end());
    basis.makeCompressed();
    return basis;
}

} // namespace

Eigen::SparseMatrix<Complex> basis_change(int n, const SkewParams& p) {
    if (n < 2 || n % 2 != 0)
        throw OddSize("basis_change: needs an even size, got " +
                      std::to_string(n));
    const Matrix8 kernel = dense_transform(2, p).matrix;
    return derive_basis(n, p, kernel);
}

struct TransformPlan::BasisSolver {
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu;
};

TransformPlan::~TransformPlan() = default;

struct PlanBuilder {
    static std::shared_ptr<TransformPlan> assemble_direct(int n,
                                                          const SkewParams& p,
                                                          DenseTransform dt) {
        auto plan = std::shared_ptr<TransformPlan>(new TransformPlan());
        plan->kind_ = TransformPlan::Kind::direct;
        plan->n_ = n;
        plan->params_ = p;
        plan->dense_ = std::make_unique<DenseTransform>(std::move(dt));
        plan->dense_lu_ =
            std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXcd>>(
                plan->dense_->matrix);
        const double cond =
            condition_with_lu(plan->dense_->matrix, *plan->dense_lu_);
        plan->dense_->condition_estimate = cond;
        require_condition(cond, "dense transform (n=" + std::to_string(n) + ")");
        return plan;
    }

    static std::shared_ptr<TransformPlan> assemble_radix(
        int n, const SkewParams& p, const Matrix8& kernel,
        std::vector<std::uint64_t> perm, Eigen::SparseMatrix<Complex> basis,
        std::array<std::shared_ptr<const TransformPlan>, 8> children) {
        const std::int64_t n3 = cube(n);
        if (static_cast<std::int64_t>(perm.size()) != n3)
            throw SizeMismatch("plan permutation has wrong length");
        if (basis.rows() != n3 || basis.cols() != n3)
            throw SizeMismatch("plan basis factor has wrong shape");
        for (int blk = 0; blk < 8; ++blk)
            if (!children[blk] || children[blk]->n() != n / 2)
                throw SizeMismatch("plan child " + std::to_string(blk) +
                                   " has wrong size");

        auto plan = std::shared_ptr<TransformPlan>(new TransformPlan());
        plan->kind_ = TransformPlan::Kind::radix2;
        plan->n_ = n;
        plan->params_ = p;
        plan->kernel_ = kernel;
        Eigen::PartialPivLU<Matrix8> klu(kernel);
        {
            Eigen::MatrixXcd k = kernel;
            require_condition(condition_estimate_1norm(k), "radix kernel");
        }
        plan->kernel_inverse_ = klu.inverse();
        plan->permutation_ = std::move(perm);
        plan->children_ = std::move(children);
        plan->basis_ = std::move(basis);
        plan->basis_solver_ = std::make_unique<TransformPlan::BasisSolver>();
        plan->basis_solver_->lu.compute(plan->basis_);
        if (plan->basis_solver_->lu.info() != Eigen::Success)
            throw IllConditioned("basis-change factor is not invertible");
        return plan;
    }

    static std::shared_ptr<const TransformPlan> make(int n, const SkewParams& p,
                                                     PlanStore* store) {
        if (n < 1) throw std::invalid_argument("build_plan: n must be >= 1");
        if (n == 1 || n % 2 != 0)
            return assemble_direct(n, p, dense_transform(n, p));

        const int m = n / 2;
        std::array<std::shared_ptr<const TransformPlan>, 8> children;
        for (int ir = 0; ir < 2; ++ir)
            for (int is = 0; is < 2; ++is)
                for (int it = 0; it < 2; ++it) {
                    const SkewParams cp = p.child(ir, is, it);
                    children[(ir * 2 + is) * 2 + it] =
                        store ? store->load_or_build(m, cp) : make(m, cp, nullptr);
                }
        const Matrix8 kernel = dense_transform(2, p).matrix;
        auto basis = derive_basis(n, p, kernel);
        return assemble_radix(n, p, kernel, radix_permutation(n),
                              std::move(basis), std::move(children));
    }
};

std::shared_ptr<const TransformPlan> build_plan(int n, const SkewParams& p,
                                                PlanStore* store) {
    if (store) return store->load_or_build(n, p);
    return PlanBuilder::make(n, p, nullptr);
}

std::shared_ptr<const TransformPlan> build_plan_node(int n, const SkewParams& p,
                                                     PlanStore* child_source) {
    return PlanBuilder::make(n, p, child_source);
}

std::shared_ptr<const TransformPlan> assemble_direct_plan(int n,
                                                          const SkewParams& p,
                                                          DenseTransform dt) {
    return PlanBuilder::assemble_direct(n, p, std::move(dt));
}

std::shared_ptr<const TransformPlan> assemble_radix_plan(
    int n, const SkewParams& p, const Eigen::Matrix<Complex, 8, 8>& kernel,
    std::vector<std::uint64_t> perm, Eigen::SparseMatrix<Complex> basis,
    std::array<std::shared_ptr<const TransformPlan>, 8> children) {
    return PlanBuilder::assemble_radix(n, p, kernel, std::move(perm),
                                       std::move(basis), std::move(children));
}

Eigen::VectorXcd TransformPlan::apply_values(const Eigen::VectorXcd& x,
                                             int threads) const {
    if (kind_ == Kind::direct) return dense_->matrix * x;

    const std::int64_t n3 = cube(n_), m3 = cube(n_ / 2);

    Eigen::VectorXcd t = basis_ * x;
    Eigen::Map<Eigen::MatrixXcd> slices(t.data(), m3, 8);
    Eigen::MatrixXcd mixed = slices * kernel_.transpose();

    Eigen::VectorXcd y(n3);
    if (threads > 1) {
        std::array<std::future<Eigen::VectorXcd>, 8> futures;
        for (int blk = 0; blk < 8; ++blk)
            futures[blk] = std::async(std::launch::async, [&, blk] {
                const Eigen::VectorXcd in = mixed.col(blk);
                return children_[blk]->apply_values(in, 1);
            });
        for (int blk = 0; blk < 8; ++blk)
            y.segment(blk * m3, m3) = futures[blk].get();
    } else {
        for (int blk = 0; blk < 8; ++blk) {
            const Eigen::VectorXcd in = mixed.col(blk);
            y.segment(blk * m3, m3) = children_[blk]->apply_values(in, 1);
        }
    }

    Eigen::VectorXcd out(n3);
    for (std::int64_t idx = 0; idx < n3; ++idx)
        out[static_cast<std::int64_t>(permutation_[idx])] = y[idx];
    return out;
}

Eigen::VectorXcd TransformPlan::solve_values(const Eigen::VectorXcd& q,
                                             int threads) const {
    if (kind_ == Kind::direct) return dense_lu_->solve(q);

    const std::int64_t n3 = cube(n_), m3 = cube(n_ / 2);

    Eigen::VectorXcd y(n3);
    for (std::int64_t idx = 0; idx < n3; ++idx)
        y[idx] = q[static_cast<std::int64_t>(permutation_[idx])];

    Eigen::VectorXcd x(n3);
    if (threads > 1) {
        std::array<std::future<Eigen::VectorXcd>, 8> futures;
        for (int blk = 0; blk < 8; ++blk)
            futures[blk] = std::async(std::launch::async, [&, blk] {
                const Eigen::VectorXcd in = y.segment(blk * m3, m3);
                return children_[blk]->solve_values(in, 1);
            });
        for (int blk = 0; blk < 8; ++blk)
            x.segment(blk * m3, m3) = futures[blk].get();
    } else {
        for (int blk = 0; blk < 8; ++blk) {
            const Eigen::VectorXcd in = y.segment(blk * m3, m3);
            x.segment(blk * m3, m3) = children_[blk]->solve_values(in, 1);
        }
    }

    Eigen::Map<Eigen::MatrixXcd> slices(x.data(), m3, 8);
    Eigen::MatrixXcd unmixed = slices * kernel_inverse_.transpose();
    Eigen::VectorXcd t(n3);
    Eigen::Map<Eigen::MatrixXcd>(t.data(), m3, 8) = unmixed;
    return basis_solver_->lu.solve(t);
}

Spectrum fast_apply(const TransformPlan& plan, const SignalTensor& s,
                    int threads) {
    if (plan.n() != s.n)
        throw SizeMismatch("fast_apply: plan size " + std::to_string(plan.n()) +
                           " vs signal size " + std::to_string(s.n));
    if (s.data.size() != cube(s.n))
        throw SizeMismatch("fast_apply: signal has " +
                           std::to_string(s.data.size()) + " samples, need " +
                           std::to_string(cube(s.n)));
    return Spectrum{plan.n(), plan.params(),
                    plan.apply_values(s.data, std::max(1, threads))};
}

SignalTensor inverse_apply(const TransformPlan& plan, const Spectrum& q,
                           int threads) {
    if (plan.n() != q.n)
        throw SizeMismatch("inverse_apply: plan size " +
                           std::to_string(plan.n()) + " vs spectrum size " +
                           std::to_string(q.n));
    if (!(plan.params() == q.params))
        throw std::invalid_argument(
            "inverse_apply: spectrum was produced on a different skew grid");
    if (q.values.size() != cube(q.n))
        throw SizeMismatch("inverse_apply: spectrum has " +
                           std::to_string(q.values.size()) +
                           " values, need " + std::to_string(cube(q.n)));
    return SignalTensor{plan.n(),
                        plan.solve_values(q.values, std::max(1, threads))};
}

double factorization_residual(const TransformPlan& plan,
                              const DenseTransform& dense) {
    if (plan.n() != dense.n)
        throw SizeMismatch("factorization_residual: sizes differ");
    const std::int64_t n3 = cube(plan.n());
    double worst = 0.0;
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n3);
    for (std::int64_t col = 0; col < n3; ++col) {
        e[col] = 1.0;
        const Eigen::VectorXcd lhs = plan.apply_values(e, 1);
        worst = std::max(worst, (lhs - dense.matrix.col(col)).cwiseAbs().maxCoeff());
        e[col] = 0.0;
    }
    return worst;
}

std::shared_ptr<const TransformPlan>
with_perturbed_basis(const TransformPlan& plan, double delta) {
    if (plan.kind() != TransformPlan::Kind::radix2)
        throw std::invalid_argument(
            "with_perturbed_basis: plan has no basis factor");
    Eigen::SparseMatrix<Complex> basis = plan.basis();
    if (basis.nonZeros() == 0)
        throw std::invalid_argument("with_perturbed_basis: basis is empty");
    basis.valuePtr()[0] += delta;
    return assemble_radix_plan(plan.n(), plan.params(), plan.kernel(),
                               plan.permutation(), std::move(basis),
                               plan.children());
}

} // namespace fcct
