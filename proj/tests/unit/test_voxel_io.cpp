#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fcct/errors.hpp"
#include "fcct/voxel_io.hpp"

using namespace fcct;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fcct-voxel-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

VoxelGrid sample_grid(int n) {
    VoxelGrid g;
    g.n = n;
    g.values.resize(static_cast<std::size_t>(n) * n * n);
    for (std::size_t i = 0; i < g.values.size(); ++i)
        g.values[i] = 0.5 * static_cast<double>(i) - 3.25;
    g.metadata["source"] = "unit-test";
    g.metadata["unit"] = "none";
    return g;
}

} // namespace

TEST_CASE("format follows the file extension") {
    CHECK(format_for_path("grid.json") == GridFormat::json);
    CHECK(format_for_path("grid.raw") == GridFormat::raw);
    CHECK(format_for_path("grid.f64") == GridFormat::raw);
    CHECK(format_for_path("grid") == GridFormat::raw);
}

TEST_CASE("json grids round trip") {
    TempDir tmp;
    const fs::path file = tmp.path / "grid.json";
    const VoxelGrid g = sample_grid(3);
    save_grid(g, file, GridFormat::json);
    const VoxelGrid back = load_grid(file, GridFormat::json);
    CHECK(back.n == g.n);
    CHECK(back.values == g.values);
    CHECK(back.metadata == g.metadata);
}

TEST_CASE("raw grids round trip bit for bit") {
    TempDir tmp;
    const fs::path file = tmp.path / "grid.f64";
    const VoxelGrid g = sample_grid(4);
    save_grid(g, file, GridFormat::raw);
    CHECK(fs::exists(tmp.path / "grid.f64.json"));
    const VoxelGrid back = load_grid(file, GridFormat::raw);
    CHECK(back.n == g.n);
    CHECK(back.values == g.values);
    CHECK(back.metadata == g.metadata);
}

TEST_CASE("structural problems raise typed errors") {
    TempDir tmp;

    const fs::path bad_json = tmp.path / "bad.json";
    std::ofstream(bad_json) << "{ not json";
    CHECK_THROWS_AS((void)load_grid(bad_json, GridFormat::json),
                    MalformedFile);

    const fs::path short_values = tmp.path / "short.json";
    std::ofstream(short_values) << R"({"n": 2, "values": [1.0, 2.0]})";
    try {
        (void)load_grid(short_values, GridFormat::json);
        FAIL("expected SizeMismatch");
    } catch (const SizeMismatch& e) {
        CHECK(e.category() == ErrorCategory::io);
    }

    const fs::path no_n = tmp.path / "no_n.json";
    std::ofstream(no_n) << R"({"values": []})";
    CHECK_THROWS_AS((void)load_grid(no_n, GridFormat::json), MalformedFile);

    const fs::path orphan = tmp.path / "orphan.f64";
    std::ofstream(orphan, std::ios::binary) << "xxxxxxxx";
    CHECK_THROWS_AS((void)load_grid(orphan, GridFormat::raw), MalformedFile);

    // Payload byte count disagreeing with the sidecar n.
    const VoxelGrid g = sample_grid(2);
    const fs::path truncated = tmp.path / "trunc.f64";
    save_grid(g, truncated, GridFormat::raw);
    fs::resize_file(truncated, 3 * sizeof(double));
    CHECK_THROWS_AS((void)load_grid(truncated, GridFormat::raw),
                    SizeMismatch);

    CHECK_THROWS_AS((void)load_grid(tmp.path / "missing.json",
                                    GridFormat::json),
                    IoFailure);
}

TEST_CASE("complexification round trips exactly") {
    const VoxelGrid g = sample_grid(3);
    const SignalTensor s = z_transform(g);
    REQUIRE(s.n == 3);
    REQUIRE(s.data.size() == 27);
    for (Eigen::Index i = 0; i < s.data.size(); ++i) {
        CHECK(s.data[i].real() == g.values[static_cast<std::size_t>(i)]);
        CHECK(s.data[i].imag() == 0.0);
    }
    const VoxelGrid back = grid_from_signal(s);
    CHECK(back.n == g.n);
    CHECK(back.values == g.values);
}

TEST_CASE("sword solid is binary with frozen occupancy") {
    CHECK_THROWS_AS((void)synthetic_sword(4), std::invalid_argument);

    const VoxelGrid s8 = synthetic_sword(8);
    CHECK(s8.n == 8);
    CHECK(s8.metadata.at("solid") == "sword");
    double filled = 0.0;
    for (const double v : s8.values) {
        CHECK((v == 0.0 || v == 1.0));
        filled += v;
    }
    CHECK(filled == 10.0);
    CHECK(occupancy_checksum(s8) == 15946957412154716965ULL);

    const VoxelGrid s16 = synthetic_sword(16);
    double filled16 = 0.0;
    for (const double v : s16.values) filled16 += v;
    CHECK(filled16 == 64.0);
    CHECK(occupancy_checksum(s16) == 4168761945289145573ULL);

    const double occ = filled16 / static_cast<double>(s16.size());
    CHECK(occ > 0.0);
    CHECK(occ < 0.5);
}

TEST_CASE("occupancy checksum sees pattern changes only") {
    VoxelGrid g;
    g.n = 2;
    g.values = {0, 1, 0, 0, 1, 0, 0, 0};
    const std::uint64_t base = occupancy_checksum(g);

    VoxelGrid scaled = g;
    for (double& v : scaled.values) v *= 7.5;
    CHECK(occupancy_checksum(scaled) == base);

    VoxelGrid moved = g;
    std::swap(moved.values[0], moved.values[1]);
    CHECK(occupancy_checksum(moved) != base);
}

TEST_CASE("spectrum export and reload") {
    const int n = 2;
    const SkewParams p = SkewParams::canonical();
    const NodeGrid nodes = skew_nodes(n, p);
    Spectrum spec;
    spec.n = n;
    spec.params = p;
    spec.values = Eigen::VectorXcd(8);
    for (int i = 0; i < 8; ++i)
        spec.values[i] = Complex{1.0 + 0.25 * i, -0.125 * i};

    std::ostringstream out;
    export_spectrum(spec, nodes, out);
    const std::string text = out.str();

    std::istringstream lines(text);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "# n=2 params=1/8,0,3/8");
    REQUIRE(std::getline(lines, line));
    CHECK(line == "i,j,k,x,y,z,re,im,magnitude");
    int rows = 0;
    while (std::getline(lines, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 8);

    TempDir tmp;
    const fs::path file = tmp.path / "spec.csv";
    std::ofstream(file) << text;
    const Spectrum back = load_spectrum_csv(file);
    CHECK(back.n == n);
    CHECK(back.params == p);
    for (int i = 0; i < 8; ++i) {
        CHECK(back.values[i].real() ==
              doctest::Approx(spec.values[i].real()).epsilon(1e-16));
        CHECK(back.values[i].imag() ==
              doctest::Approx(spec.values[i].imag()).epsilon(1e-16));
    }
}

TEST_CASE("spectrum reload rejects broken files") {
    TempDir tmp;

    const fs::path no_header = tmp.path / "a.csv";
    std::ofstream(no_header) << "i,j,k,x,y,z,re,im,magnitude\n";
    CHECK_THROWS_AS((void)load_spectrum_csv(no_header), MalformedFile);

    const fs::path missing_rows = tmp.path / "b.csv";
    std::ofstream(missing_rows) << "# n=2 params=1/8,0,3/8\n"
                                << "i,j,k,x,y,z,re,im,magnitude\n"
                                << "0,0,0,0,0,0,1,0,1\n";
    CHECK_THROWS_AS((void)load_spectrum_csv(missing_rows), SizeMismatch);

    const fs::path dup = tmp.path / "c.csv";
    {
        std::ofstream f(dup);
        f << "# n=1 params=1/8,0,3/8\n"
          << "i,j,k,x,y,z,re,im,magnitude\n"
          << "0,0,0,0,0,0,1,0,1\n"
          << "0,0,0,0,0,0,1,0,1\n";
    }
    CHECK_THROWS_AS((void)load_spectrum_csv(dup), MalformedFile);

    CHECK_THROWS_AS((void)load_spectrum_csv(tmp.path / "nope.csv"),
                    IoFailure);
}

TEST_CASE("geometry export lists the fourteen shifts") {
    std::ostringstream out;
    export_geometry(WeylGroup::s4(), out);
    std::istringstream lines(out.str());
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "dx,dy,dz");
    int rows = 0;
    while (std::getline(lines, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 14);
}
