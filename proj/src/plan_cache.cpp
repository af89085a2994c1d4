#include "fcct/plan_cache.hpp"

#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>

#include "fcct/detail/plan_internal.hpp"
#include "fcct/errors.hpp"

namespace fcct {
namespace {

constexpr char kMagic[8] = {'F', 'C', 'C', 'P', 'L', 'A', 'N', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kKindDirect = 0;
constexpr std::uint8_t kKindRadix2 = 1;

std::int64_t cube(int n) { return static_cast<std::int64_t>(n) * n * n; }

void write_bytes(std::ostream& out, const void* data, std::size_t len) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
}

template <typename T>
void write_pod(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    write_bytes(out, &value, sizeof(value));
}

void write_string(std::ostream& out, const std::string& s) {
    write_pod(out, static_cast<std::uint32_t>(s.size()));
    write_bytes(out, s.data(), s.size());
}

void write_complex(std::ostream& out, const Complex& v) {
    write_pod(out, v.real());
    write_pod(out, v.imag());
}

void read_bytes(std::istream& in, void* data, std::size_t len) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(len));
    if (!in || in.gcount() != static_cast<std::streamsize>(len))
        throw MalformedFile("plan file truncated");
}

template <typename T>
T read_pod(std::istream& in) {
    static_assert(std::is_trivially_copyable_v<T>);
    T value;
    read_bytes(in, &value, sizeof(value));
    return value;
}

std::string read_string(std::istream& in, std::uint32_t max_len = 64) {
    const auto len = read_pod<std::uint32_t>(in);
    if (len > max_len) throw MalformedFile("plan file string too long");
    std::string s(len, '\0');
    read_bytes(in, s.data(), len);
    return s;
}

Complex read_complex(std::istream& in) {
    const double re = read_pod<double>(in);
    const double im = read_pod<double>(in);
    return Complex{re, im};
}

void expect_eof(std::istream& in) {
    if (in.peek() != std::char_traits<char>::eof())
        throw MalformedFile("plan file has trailing bytes");
}

std::string sanitize(const std::string& key) {
    std::string out;
    out.reserve(key.size());
    for (char c : key) {
        switch (c) {
            case '/': out.push_back('d'); break;
            case '.': out.push_back('p'); break;
            case '-': out.push_back('m'); break;
            case '+': break;
            case ',': out.push_back('_'); break;
            default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

void save_plan(std::ostream& out, const TransformPlan& plan) {
    write_bytes(out, kMagic, sizeof(kMagic));
    write_pod(out, kVersion);
    const bool direct = plan.kind() == TransformPlan::Kind::direct;
    write_pod(out, direct ? kKindDirect : kKindRadix2);
    write_pod(out, static_cast<std::uint64_t>(plan.n()));
    write_string(out, encode_param(plan.params().r));
    write_string(out, encode_param(plan.params().s));
    write_string(out, encode_param(plan.params().t));

    if (direct) {
        const auto& m = plan.dense().matrix;
        write_pod(out, static_cast<std::uint64_t>(m.rows()));
        for (Eigen::Index row = 0; row < m.rows(); ++row)
            for (Eigen::Index col = 0; col < m.cols(); ++col)
                write_complex(out, m(row, col));
        return;
    }

    for (int row = 0; row < 8; ++row)
        for (int col = 0; col < 8; ++col)
            write_complex(out, plan.kernel()(row, col));
    for (const std::uint64_t v : plan.permutation()) write_pod(out, v);

    const auto& basis = plan.basis();
    write_pod(out, static_cast<std::uint64_t>(basis.nonZeros()));
    for (int outer = 0; outer < basis.outerSize(); ++outer)
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(basis, outer); it;
             ++it) {
            write_pod(out, static_cast<std::uint64_t>(it.row()));
            write_pod(out, static_cast<std::uint64_t>(it.col()));
            write_complex(out, it.value());
        }
}

LoadedPlanHeader read_plan_header(std::istream& in) {
    char magic[8];
    read_bytes(in, magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(magic)) != 0)
        throw MalformedFile("plan file has wrong magic");
    if (read_pod<std::uint32_t>(in) != kVersion)
        throw MalformedFile("plan file has unsupported version");
    LoadedPlanHeader h;
    const auto kind = read_pod<std::uint8_t>(in);
    if (kind != kKindDirect && kind != kKindRadix2)
        throw MalformedFile("plan file has unknown kind");
    h.kind = kind;
    const auto n = read_pod<std::uint64_t>(in);
    if (n < 1 || n > 4096) throw MalformedFile("plan file has implausible size");
    h.n = static_cast<int>(n);
    h.r = read_string(in);
    h.s = read_string(in);
    h.t = read_string(in);
    return h;
}

std::shared_ptr<const TransformPlan>
load_plan_body(std::istream& in, const LoadedPlanHeader& header,
               const SkewParams& params,
               const std::array<std::shared_ptr<const TransformPlan>, 8>& children) {
    const std::int64_t n3 = cube(header.n);

    if (header.kind == kKindDirect) {
        const auto dim = static_cast<std::int64_t>(read_pod<std::uint64_t>(in));
        if (dim != n3)
            throw MalformedFile("plan file dense dimension does not match n");
        DenseTransform dt;
        dt.n = header.n;
        dt.params = params;
        dt.matrix.resize(dim, dim);
        for (std::int64_t row = 0; row < dim; ++row)
            for (std::int64_t col = 0; col < dim; ++col)
                dt.matrix(row, col) = read_complex(in);
        expect_eof(in);
        return assemble_direct_plan(header.n, params, std::move(dt));
    }

    Eigen::Matrix<Complex, 8, 8> kernel;
    for (int row = 0; row < 8; ++row)
        for (int col = 0; col < 8; ++col) kernel(row, col) = read_complex(in);

    std::vector<std::uint64_t> perm(static_cast<std::size_t>(n3));
    std::vector<bool> seen(static_cast<std::size_t>(n3), false);
    for (auto& v : perm) {
        v = read_pod<std::uint64_t>(in);
        if (v >= static_cast<std::uint64_t>(n3) || seen[v])
            throw MalformedFile("plan file permutation is not a permutation");
        seen[v] = true;
    }

    const auto nnz = read_pod<std::uint64_t>(in);
    if (nnz > static_cast<std::uint64_t>(n3) * n3)
        throw MalformedFile("plan file basis factor has implausible size");
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(nnz);
    for (std::uint64_t i = 0; i < nnz; ++i) {
        const auto row = read_pod<std::uint64_t>(in);
        const auto col = read_pod<std::uint64_t>(in);
        if (row >= static_cast<std::uint64_t>(n3) ||
            col >= static_cast<std::uint64_t>(n3))
            throw MalformedFile("plan file basis entry out of range");
        const Complex v = read_complex(in);
        triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), v);
    }
    expect_eof(in);

    Eigen::SparseMatrix<Complex> basis(n3, n3);
    basis.setFromTriplets(triplets.begin(), triplets.end());
    basis.makeCompressed();
    return assemble_radix_plan(header.n, params, kernel, std::move(perm),
                               std::move(basis), children);
}

PlanStore::PlanStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec)
        throw IoFailure("cannot create plan cache directory '" +
                        dir_.string() + "': " + ec.message());
}

std::string PlanStore::cache_key(int n, const SkewParams& p) {
    return "n" + std::to_string(n) + "_r" + encode_param(p.r) + "_s" +
           encode_param(p.s) + "_t" + encode_param(p.t);
}

std::filesystem::path PlanStore::path_for(int n, const SkewParams& p) const {
    return dir_ / (sanitize(cache_key(n, p)) + ".fccplan");
}

std::shared_ptr<const TransformPlan>
PlanStore::load_or_build(int n, const SkewParams& p) {
    const auto path = path_for(n, p);
    const bool existed = std::filesystem::exists(path);

    if (existed) {
        std::ifstream in(path, std::ios::binary);
        std::optional<LoadedPlanHeader> header;
        try {
            if (!in) throw MalformedFile("cannot open plan file");
            LoadedPlanHeader h = read_plan_header(in);
            const bool expect_direct = (n == 1 || n % 2 != 0);
            if (h.n != n || (h.kind == kKindDirect) != expect_direct ||
                h.r != encode_param(p.r) || h.s != encode_param(p.s) ||
                h.t != encode_param(p.t))
                throw MalformedFile("plan file header does not match request");
            header = h;
        } catch (const Error& e) {
            std::cerr << "warning: rebuilding plan cache entry " << path
                      << " (" << e.what() << ")\n";
        }

        if (header) {
            // Children are separate entries; resolve them before the body so
            // any of their build errors surface as build errors, not as
            // corruption of this file.
            std::array<std::shared_ptr<const TransformPlan>, 8> children{};
            if (header->kind == kKindRadix2)
                for (int ir = 0; ir < 2; ++ir)
                    for (int is = 0; is < 2; ++is)
                        for (int it = 0; it < 2; ++it)
                            children[(ir * 2 + is) * 2 + it] =
                                load_or_build(n / 2, p.child(ir, is, it));
            try {
                auto plan = load_plan_body(in, *header, p, children);
                ++stats_.hits;
                return plan;
            } catch (const Error& e) {
                std::cerr << "warning: rebuilding plan cache entry " << path
                          << " (" << e.what() << ")\n";
            }
        }
        ++stats_.rebuilt;
    } else {
        ++stats_.misses;
    }

    auto plan = build_plan_node(n, p, this);

    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFailure("cannot write plan cache file " + tmp);
        save_plan(out, *plan);
        if (!out) throw IoFailure("failed while writing plan cache file " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoFailure("cannot move plan cache file into place: " + ec.message());
    return plan;
}

} // namespace fcct
