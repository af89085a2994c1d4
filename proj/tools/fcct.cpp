// fcct: discrete Chebyshev transforms on the FCC lattice.
//
// Subcommands: zeros, transform, verify, bench, plan, sword, geometry.
// Exit codes: 0 success, 1 usage, 2 math error, 3 io error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "fcct/detail/format.hpp"
#include "fcct/errors.hpp"
#include "fcct/plan_cache.hpp"
#include "fcct/voxel_io.hpp"

namespace {

using namespace fcct;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::int64_t cube(int n) { return static_cast<std::int64_t>(n) * n * n; }

std::optional<std::string> default_cache_dir() {
    if (const char* env = std::getenv("FCCT_CACHE_DIR"); env && *env)
        return std::string(env);
    return std::nullopt;
}

std::unique_ptr<PlanStore> open_store(const std::string& cache_dir) {
    if (cache_dir.empty()) return nullptr;
    return std::make_unique<PlanStore>(cache_dir);
}

void write_text_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot write " + path);
    out << content;
    if (!out) throw IoFailure("failed while writing " + path);
}

// ---------------------------------------------------------------------------
// zeros

int cmd_zeros(int n, const std::string& params_text, const std::string& out) {
    const SkewParams params = parse_params(params_text);
    const NodeGrid grid = skew_nodes(n, params);
    std::ostringstream csv;
    export_nodes_csv(grid, csv);
    write_text_output(out, csv.str());
    std::cerr << grid.nodes.size() << " nodes (n=" << n
              << ", params=" << params.encode() << ")\n";
    return 0;
}

// ---------------------------------------------------------------------------
// transform

struct TransformArgs {
    std::string input, output, method = "fast", direction = "forward";
    std::string params_text = SkewParams::canonical().encode();
    std::string cache_dir;
    int n_override = 0;
    int threads = 1;
};

int cmd_transform(const TransformArgs& args) {
    const SkewParams params = parse_params(args.params_text);
    auto store = open_store(args.cache_dir);

    if (args.direction == "forward") {
        const VoxelGrid grid =
            load_grid(args.input, format_for_path(args.input));
        if (args.n_override != 0 && args.n_override != grid.n) {
            std::cerr << "error: --n " << args.n_override
                      << " does not match the input grid (n=" << grid.n
                      << ")\n";
            return 1;
        }
        const SignalTensor signal = z_transform(grid);
        Spectrum spectrum;
        if (args.method == "naive") {
            spectrum = naive_apply(dense_transform(grid.n, params), signal);
        } else {
            const auto plan = build_plan(grid.n, params, store.get());
            spectrum = fast_apply(*plan, signal, args.threads);
        }
        const NodeGrid nodes = skew_nodes(grid.n, params);
        std::ostringstream csv;
        export_spectrum(spectrum, nodes, csv);
        write_text_output(args.output, csv.str());
        std::cerr << "forward " << args.method << " n=" << grid.n << " done\n";
        return 0;
    }

    const Spectrum spectrum = load_spectrum_csv(args.input);
    if (args.n_override != 0 && args.n_override != spectrum.n) {
        std::cerr << "error: --n " << args.n_override
                  << " does not match the spectrum file (n=" << spectrum.n
                  << ")\n";
        return 1;
    }
    if (!(spectrum.params == params) &&
        args.params_text != SkewParams::canonical().encode()) {
        std::cerr << "error: --params disagrees with the spectrum header ("
                  << spectrum.params.encode() << ")\n";
        return 1;
    }
    SignalTensor signal;
    if (args.method == "naive") {
        signal = inverse_apply(dense_transform(spectrum.n, spectrum.params),
                               spectrum);
    } else {
        const auto plan = build_plan(spectrum.n, spectrum.params, store.get());
        signal = inverse_apply(*plan, spectrum, args.threads);
    }
    const VoxelGrid grid = grid_from_signal(signal);
    save_grid(grid, args.output, format_for_path(args.output));
    std::cerr << "inverse " << args.method << " n=" << spectrum.n << " done\n";
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct CheckResult {
    std::string name;
    bool passed = false;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

class Verifier {
public:
    Verifier(int n_max, double tolerance_override, bool perturb_basis)
        : n_max_(n_max), tol_override_(tolerance_override),
          perturb_(perturb_basis) {}

    std::vector<CheckResult> run();

private:
    double tol(double fallback) const {
        return tol_override_ > 0.0 ? tol_override_ : fallback;
    }

    void add(std::vector<CheckResult>& out, const std::string& name,
             double residual, double tolerance, std::string detail = {}) {
        out.push_back(CheckResult{name, residual <= tolerance, residual,
                                  tolerance, std::move(detail)});
    }

    std::vector<TorusPoint> random_points(int count, unsigned seed) const {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::vector<TorusPoint> pts;
        pts.reserve(count);
        for (int i = 0; i < count; ++i) {
            const double a = uni(rng), b = uni(rng), c = uni(rng);
            pts.push_back(TorusPoint::wrapped(a, b, c));
        }
        return pts;
    }

    int n_max_;
    double tol_override_;
    bool perturb_;
};

std::vector<CheckResult> Verifier::run() {
    std::vector<CheckResult> checks;
    const auto& g = WeylGroup::s4();

    { // group structure: order, relations, closure, determinants
        double bad = 0.0;
        if (g.order() != 24) bad = 1.0;
        const auto gens = group_generators();
        auto pow_id = [&](const GroupElement& e, int p) {
            GroupElement acc = GroupElement::identity();
            for (int i = 0; i < p; ++i) acc = acc * e;
            return acc == GroupElement::identity();
        };
        for (const auto& s : gens)
            if (!pow_id(s, 2)) bad = 1.0;
        if (!pow_id(gens[0] * gens[1], 3)) bad = 1.0;
        if (!pow_id(gens[0] * gens[2], 2)) bad = 1.0;
        if (!pow_id(gens[1] * gens[2], 3)) bad = 1.0;
        for (const auto& a : g.elements) {
            if (std::abs(a.det()) != 1) bad = 1.0;
            for (const auto& b : g.elements)
                if (!g.contains(a * b)) bad = 1.0;
        }
        add(checks, "group_structure", bad, 0.5,
            "order, involutions, braid relations, closure, determinants");
    }

    { // the two evaluation routes agree
        double worst = 0.0;
        const auto pts = random_points(40, 11);
        for (const auto& k : {Index3{1, 0, 0}, Index3{0, 1, 0}, Index3{2, 1, 0},
                              Index3{1, 1, 1}, Index3{3, -1, 2}})
            for (const auto& t : pts) {
                const Complex a = symmetrized_exponential(k, t, g);
                const Complex b = cheb_eval_uvw(k, UVWPoint::from_torus(t), g);
                worst = std::max(worst, std::abs(a - b));
            }
        add(checks, "evaluation_routes_agree", worst, tol(1e-12));
    }

    { // degree-one polynomials are the coordinates
        double worst = 0.0;
        for (const auto& t : random_points(40, 12)) {
            const UVWPoint p = UVWPoint::from_torus(t);
            const SpectralPoint s = coords_from_uvw(p);
            worst = std::max(worst,
                             std::abs(cheb_eval_uvw({0, 0, 0}, p, g) - 1.0));
            worst = std::max(worst,
                             std::abs(cheb_eval_uvw({1, 0, 0}, p, g) - s.x));
            worst = std::max(worst,
                             std::abs(cheb_eval_uvw({0, 1, 0}, p, g) - s.y));
            worst = std::max(worst,
                             std::abs(cheb_eval_uvw({0, 0, 1}, p, g) - s.z));
        }
        add(checks, "coordinate_identities", worst, tol(1e-12));
    }

    { // invariance under the group action
        double worst = 0.0;
        const auto pts = random_points(10, 13);
        for (const auto& k :
             {Index3{1, 0, 0}, Index3{2, 1, 0}, Index3{1, -1, 2}})
            for (const auto& w : g.elements)
                for (const auto& t : pts) {
                    const Complex base = symmetrized_exponential(k, t, g);
                    worst = std::max(
                        worst, std::abs(symmetrized_exponential(w.apply(k), t,
                                                                g) -
                                        base));
                    const auto wt = w.apply_transposed(t.theta);
                    const TorusPoint tp =
                        TorusPoint::wrapped(wt[0], wt[1], wt[2]);
                    worst = std::max(
                        worst,
                        std::abs(symmetrized_exponential(k, tp, g) - base));
                }
        add(checks, "group_invariance", worst, tol(1e-12));
    }

    { // product linearization
        double worst = 0.0;
        std::mt19937 rng(14);
        std::uniform_int_distribution<int> idx(-2, 2);
        const auto pts = random_points(15, 15);
        for (int rep = 0; rep < 12; ++rep) {
            const Index3 k{idx(rng), idx(rng), idx(rng)};
            const Index3 l{idx(rng), idx(rng), idx(rng)};
            const auto combo = recurrence_product(k, l, g);
            if (combo.multiplicity_sum() != OrbitCombination::denominator) {
                worst = 1.0;
                break;
            }
            for (const auto& t : pts) {
                const UVWPoint p = UVWPoint::from_torus(t);
                const Complex prod =
                    cheb_eval_uvw(k, p, g) * cheb_eval_uvw(l, p, g);
                Complex sum{0.0, 0.0};
                for (std::size_t i = 0; i < combo.terms.size(); ++i)
                    sum += combo.weight(i) *
                           cheb_eval_uvw(combo.terms[i].index, p, g);
                worst = std::max(worst, std::abs(prod - sum));
            }
        }
        add(checks, "product_linearization", worst, tol(1e-11));
    }

    { // semigroup composition along the axes
        double worst = 0.0;
        const auto pts = random_points(10, 16);
        for (int axis = 1; axis <= 3; ++axis)
            for (int k = 1; k <= 3; ++k)
                for (int l = 1; l <= 3; ++l)
                    worst = std::max(
                        worst,
                        compose_scaled(k, l, axis, pts, g).max_deviation);
        add(checks, "semigroup_composition", worst, tol(1e-11));
    }

    { // node grids: counts and generator residuals
        double worst = 0.0;
        std::string detail;
        for (int n = 1; n <= n_max_; ++n) {
            const NodeGrid grid = skew_nodes(n, SkewParams::canonical());
            if (static_cast<std::int64_t>(grid.nodes.size()) != cube(n)) {
                worst = 1.0;
                detail = "node count is wrong for n=" + std::to_string(n);
                break;
            }
            const SkewParams& p = grid.params;
            const Complex sx = sigma(p.r, p.s, p.t);
            const Complex sy = tau(p.r, p.s, p.t);
            const Complex sz = rho(p.r, p.s, p.t);
            for (const auto& node : grid.nodes) {
                worst = std::max(
                    worst,
                    std::abs(cheb_eval_uvw({n, 0, 0}, node.uvw, g) - sx));
                worst = std::max(
                    worst,
                    std::abs(cheb_eval_uvw({0, n, 0}, node.uvw, g) - sy));
                worst = std::max(
                    worst,
                    std::abs(cheb_eval_uvw({0, 0, n}, node.uvw, g) - sz));
            }
        }
        add(checks, "node_generator_residuals", worst, tol(1e-10), detail);
    }

    { // the two node constructions coincide at the canonical offsets
        double worst = 0.0;
        for (int n = 1; n <= n_max_; ++n) {
            const NodeGrid a = common_zeros(n);
            const NodeGrid b = skew_nodes(n, SkewParams::canonical());
            for (std::size_t i = 0; i < a.nodes.size(); ++i) {
                worst = std::max(worst, std::abs(a.nodes[i].uvw.u -
                                                 b.nodes[i].uvw.u));
                worst = std::max(worst, std::abs(a.nodes[i].uvw.v -
                                                 b.nodes[i].uvw.v));
                worst = std::max(worst, std::abs(a.nodes[i].uvw.w -
                                                 b.nodes[i].uvw.w));
            }
        }
        add(checks, "node_construction_consistency", worst, tol(1e-12));
    }

    { // half-size grids interleave into the full grid
        double worst = 0.0;
        for (int n = 2; n <= n_max_; n += 2) {
            const int m = n / 2;
            const NodeGrid parent = skew_nodes(n, SkewParams::canonical());
            for (int ir = 0; ir < 2; ++ir)
                for (int is = 0; is < 2; ++is)
                    for (int it = 0; it < 2; ++it) {
                        const NodeGrid child = skew_nodes(
                            m, SkewParams::canonical().child(ir, is, it));
                        for (const auto& node : child.nodes) {
                            const auto& pn =
                                parent.at(ir + 2 * node.ijk[0],
                                          is + 2 * node.ijk[1],
                                          it + 2 * node.ijk[2]);
                            worst = std::max(worst,
                                             std::abs(node.uvw.u - pn.uvw.u));
                            worst = std::max(worst,
                                             std::abs(node.uvw.v - pn.uvw.v));
                            worst = std::max(worst,
                                             std::abs(node.uvw.w - pn.uvw.w));
                        }
                    }
        }
        add(checks, "grid_nesting", worst, tol(1e-12));
    }

    { // shift vectors
        const auto shifts = shift_vectors(g);
        const bool ok = shifts.size() == 14;
        add(checks, "shift_vector_count",
            ok ? 0.0 : static_cast<double>(shifts.size()), 0.5,
            std::to_string(shifts.size()) + " vectors");
    }

    { // factorization exactness (and the perturbation control)
        double worst = 0.0;
        std::string note;
        for (int n = 2; n <= n_max_; n += 2) {
            auto plan = build_plan(n, SkewParams::canonical(), nullptr);
            if (perturb_) plan = with_perturbed_basis(*plan, 1e-3);
            const DenseTransform dense =
                dense_transform(n, SkewParams::canonical());
            const double resid = factorization_residual(*plan, dense);
            worst = std::max(worst, resid);
            note += (note.empty() ? "" : ", ") + std::string("n=") +
                    std::to_string(n) + ": " + fcct::detail::g17(resid);
        }
        add(checks, "factorization_residual", worst, tol(1e-9), note);
    }

    { // fast path against the dense oracle, and the round trip
        double worst_fwd = 0.0, worst_rt = 0.0;
        std::mt19937 rng(17);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int n = 2; n <= n_max_; ++n) {
            const auto plan = build_plan(n, SkewParams::canonical(), nullptr);
            const DenseTransform dense =
                dense_transform(n, SkewParams::canonical());
            SignalTensor s = SignalTensor::zeros(n);
            for (std::int64_t i = 0; i < s.data.size(); ++i)
                s.data[i] = Complex{gauss(rng), gauss(rng)};
            const Spectrum fast = fast_apply(*plan, s);
            const Spectrum slow = naive_apply(dense, s);
            const double scale = slow.values.cwiseAbs().maxCoeff();
            worst_fwd = std::max(
                worst_fwd,
                (fast.values - slow.values).cwiseAbs().maxCoeff() / scale);
            const SignalTensor back = inverse_apply(*plan, fast);
            const double sscale = s.data.cwiseAbs().maxCoeff();
            worst_rt = std::max(
                worst_rt, (back.data - s.data).cwiseAbs().maxCoeff() / sscale);
        }
        add(checks, "fast_matches_dense", worst_fwd, tol(1e-10));
        add(checks, "round_trip", worst_rt, tol(1e-8));
    }

    { // basis factor sparsity (informational scaling report)
        std::string note;
        for (int n = 2; n <= n_max_; n += 2) {
            const auto basis = basis_change(n, SkewParams::canonical());
            note += (note.empty() ? "" : ", ") + std::string("n=") +
                    std::to_string(n) + ": nnz/n^3=" +
                    fcct::detail::g17(static_cast<double>(basis.nonZeros()) /
                                      static_cast<double>(cube(n)));
        }
        add(checks, "basis_sparsity", 0.0, 1.0, note);
    }

    return checks;
}

int cmd_verify(int n_max, double tolerance, bool perturb,
               const std::string& out) {
    Verifier verifier(n_max, tolerance, perturb);
    const auto checks = verifier.run();

    bool all_passed = true;
    for (const auto& c : checks) {
        all_passed = all_passed && c.passed;
        std::cerr << (c.passed ? "ok   " : "FAIL ") << c.name
                  << "  residual=" << detail::g17(c.residual)
                  << " tolerance=" << detail::g17(c.tolerance);
        if (!c.detail.empty()) std::cerr << "  (" << c.detail << ")";
        std::cerr << '\n';
    }

    nlohmann::json report;
    report["n_max"] = n_max;
    report["perturb_basis"] = perturb;
    report["all_passed"] = all_passed;
    report["checks"] = nlohmann::json::array();
    for (const auto& c : checks)
        report["checks"].push_back({{"name", c.name},
                                    {"passed", c.passed},
                                    {"residual", c.residual},
                                    {"tolerance", c.tolerance},
                                    {"detail", c.detail}});
    write_text_output(out, report.dump(2) + "\n");
    return all_passed ? 0 : 2;
}

// ---------------------------------------------------------------------------
// bench

int cmd_bench(const std::string& sizes_text, int repeats, int threads,
              int max_naive, const std::string& cache_dir,
              const std::string& out) {
    std::vector<int> sizes;
    {
        std::stringstream ss(sizes_text);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                sizes.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                std::cerr << "error: bad --sizes entry '" << tok << "'\n";
                return 1;
            }
            if (sizes.back() < 1) {
                std::cerr << "error: sizes must be >= 1\n";
                return 1;
            }
        }
        if (sizes.empty()) {
            std::cerr << "error: --sizes is empty\n";
            return 1;
        }
    }

    auto store = open_store(cache_dir);
    const SkewParams params = SkewParams::canonical();
    std::ostringstream csv;
    csv << "n,method,plan_seconds,apply_seconds\n";

    std::mt19937 rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const int n : sizes) {
        SignalTensor s = SignalTensor::zeros(n);
        for (std::int64_t i = 0; i < s.data.size(); ++i)
            s.data[i] = Complex{gauss(rng), gauss(rng)};
        const int inner =
            static_cast<int>(std::max<std::int64_t>(1, 32768 / cube(n)));

        auto median_apply = [&](auto&& apply_once) {
            std::vector<double> times;
            apply_once(); // warmup
            for (int rep = 0; rep < repeats; ++rep) {
                const auto start = Clock::now();
                for (int i = 0; i < inner; ++i) apply_once();
                times.push_back(seconds_since(start) / inner);
            }
            std::sort(times.begin(), times.end());
            return times[times.size() / 2];
        };

        { // fast path
            const auto plan_start = Clock::now();
            const auto plan = build_plan(n, params, store.get());
            const double plan_seconds = seconds_since(plan_start);
            Eigen::VectorXcd sink;
            const double apply_seconds = median_apply(
                [&] { sink = plan->apply_values(s.data, threads); });
            csv << n << ",fast," << detail::g17(plan_seconds) << ','
                << detail::g17(apply_seconds) << '\n';
            std::cerr << "bench n=" << n << " fast done\n";
        }

        if (n <= max_naive) { // dense path
            const auto build_start = Clock::now();
            const DenseTransform dense = dense_transform(n, params);
            const double build_seconds = seconds_since(build_start);
            Eigen::VectorXcd sink;
            const double apply_seconds =
                median_apply([&] { sink = dense.matrix * s.data; });
            csv << n << ",naive," << detail::g17(build_seconds) << ','
                << detail::g17(apply_seconds) << '\n';
            std::cerr << "bench n=" << n << " naive done\n";
        }
    }
    write_text_output(out, csv.str());
    return 0;
}

// ---------------------------------------------------------------------------
// plan

int cmd_plan(int n, const std::string& params_text,
             const std::string& cache_dir) {
    if (cache_dir.empty()) {
        std::cerr << "error: plan needs --cache-dir or FCCT_CACHE_DIR\n";
        return 1;
    }
    const SkewParams params = parse_params(params_text);
    PlanStore store(cache_dir);
    store.load_or_build(n, params);
    const auto& st = store.stats();
    std::size_t files = 0;
    for (const auto& entry :
         std::filesystem::directory_iterator(store.directory()))
        if (entry.path().extension() == ".fccplan") ++files;
    std::cout << "plan n=" << n << " params=" << params.encode()
              << ": loaded=" << st.hits << " built=" << st.misses
              << " rebuilt=" << st.rebuilt << " cache_files=" << files << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// sword / geometry

int cmd_sword(int n, const std::string& out) {
    const VoxelGrid grid = synthetic_sword(n);
    save_grid(grid, out, format_for_path(out));
    std::cerr << "sword n=" << n
              << " checksum=" << occupancy_checksum(grid) << "\n";
    return 0;
}

int cmd_geometry(const std::string& out) {
    std::ostringstream csv;
    export_geometry(WeylGroup::s4(), csv);
    write_text_output(out, csv.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete Chebyshev transforms on the FCC lattice"};
    app.require_subcommand(1);

    const std::string default_params = SkewParams::canonical().encode();
    const std::string env_cache = default_cache_dir().value_or("");

    // zeros
    auto* zeros = app.add_subcommand("zeros", "Generate transform nodes as CSV");
    int zeros_n = 8;
    std::string zeros_params = default_params, zeros_out;
    zeros->add_option("--n", zeros_n, "Grid size")
        ->required()
        ->check(CLI::Range(1, 4096));
    zeros->add_option("--params", zeros_params, "Grid offsets r,s,t");
    zeros->add_option("--out", zeros_out, "Output CSV path (default stdout)");

    // transform
    auto* transform =
        app.add_subcommand("transform", "Apply the transform to voxel data");
    TransformArgs targs;
    transform->add_option("--input", targs.input, "Input file")->required();
    transform->add_option("--out", targs.output, "Output file")->required();
    transform->add_option("--method", targs.method, "fast or naive")
        ->check(CLI::IsMember({"fast", "naive"}));
    transform->add_option("--direction", targs.direction, "forward or inverse")
        ->check(CLI::IsMember({"forward", "inverse"}));
    transform->add_option("--params", targs.params_text, "Grid offsets r,s,t");
    transform->add_option("--n", targs.n_override,
                          "Expected grid size (checked against the input)");
    transform->add_option("--cache-dir", targs.cache_dir, "Plan cache directory")
        ->default_val(env_cache);
    transform->add_option("--threads", targs.threads, "Worker threads")
        ->check(CLI::Range(1, 64));

    // verify
    auto* verify =
        app.add_subcommand("verify", "Run the invariant and residual checks");
    int verify_n_max = 4;
    double verify_tolerance = 0.0;
    bool verify_perturb = false;
    std::string verify_out;
    verify->add_option("--n-max", verify_n_max, "Largest grid size to check")
        ->check(CLI::Range(1, 16));
    verify->add_option("--tolerance", verify_tolerance,
                       "Override the per-check tolerances");
    verify->add_flag("--perturb-b", verify_perturb,
                     "Negative control: break the basis factor first");
    verify->add_option("--out", verify_out, "Write the JSON report here");

    // bench
    auto* bench = app.add_subcommand("bench", "Time plan building and applies");
    std::string bench_sizes = "2,4,8", bench_cache = env_cache, bench_out;
    int bench_repeats = 5, bench_threads = 1, bench_max_naive = 16;
    bench->add_option("--sizes", bench_sizes, "Comma-separated grid sizes");
    bench->add_option("--repeats", bench_repeats, "Timing repetitions")
        ->check(CLI::Range(1, 1000));
    bench->add_option("--threads", bench_threads, "Worker threads")
        ->check(CLI::Range(1, 64));
    bench->add_option("--max-naive", bench_max_naive,
                      "Skip the dense method above this size");
    bench->add_option("--cache-dir", bench_cache, "Plan cache directory");
    bench->add_option("--out", bench_out, "Output CSV path (default stdout)");

    // plan
    auto* plan = app.add_subcommand("plan", "Build and cache a transform plan");
    int plan_n = 8;
    std::string plan_params = default_params, plan_cache = env_cache;
    plan->add_option("--n", plan_n, "Grid size")
        ->required()
        ->check(CLI::Range(1, 4096));
    plan->add_option("--params", plan_params, "Grid offsets r,s,t");
    plan->add_option("--cache-dir", plan_cache, "Plan cache directory");

    // sword
    auto* sword = app.add_subcommand("sword", "Write the synthetic test solid");
    int sword_n = 16;
    std::string sword_out;
    sword->add_option("--n", sword_n, "Grid size")
        ->required()
        ->check(CLI::Range(8, 4096));
    sword->add_option("--out", sword_out, "Output grid path")->required();

    // geometry
    auto* geometry =
        app.add_subcommand("geometry", "Write the lattice shift vectors as CSV");
    std::string geometry_out;
    geometry->add_option("--out", geometry_out, "Output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (zeros->parsed()) return cmd_zeros(zeros_n, zeros_params, zeros_out);
        if (transform->parsed()) return cmd_transform(targs);
        if (verify->parsed())
            return cmd_verify(verify_n_max, verify_tolerance, verify_perturb,
                              verify_out);
        if (bench->parsed())
            return cmd_bench(bench_sizes, bench_repeats, bench_threads,
                             bench_max_naive, bench_cache, bench_out);
        if (plan->parsed()) return cmd_plan(plan_n, plan_params, plan_cache);
        if (sword->parsed()) return cmd_sword(sword_n, sword_out);
        if (geometry->parsed()) return cmd_geometry(geometry_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.category() == ErrorCategory::io ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
