#include "fcct/voxel_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fcct/detail/format.hpp"
#include "fcct/errors.hpp"

namespace fcct {
namespace {

using nlohmann::json;

constexpr char kSpectrumColumns[] = "i,j,k,x,y,z,re,im,magnitude";

std::int64_t cube(int n) { return static_cast<std::int64_t>(n) * n * n; }

json metadata_to_json(const std::map<std::string, std::string>& metadata) {
    json obj = json::object();
    for (const auto& [key, value] : metadata) obj[key] = value;
    return obj;
}

std::map<std::string, std::string> metadata_from_json(const json& obj) {
    std::map<std::string, std::string> out;
    if (obj.is_null()) return out;
    if (!obj.is_object())
        throw MalformedFile("grid metadata must be an object of strings");
    for (const auto& [key, value] : obj.items()) {
        if (!value.is_string())
            throw MalformedFile("grid metadata must be an object of strings");
        out[key] = value.get<std::string>();
    }
    return out;
}

int read_grid_n(const json& doc) {
    if (!doc.contains("n") || !doc["n"].is_number_integer())
        throw MalformedFile("grid header lacks an integer n");
    const std::int64_t n = doc["n"].get<std::int64_t>();
    if (n < 1 || n > 4096)
        throw MalformedFile("grid size " + std::to_string(n) +
                            " is out of range");
    return static_cast<int>(n);
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    return std::filesystem::path(path.string() + ".json");
}

VoxelGrid load_grid_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open grid file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw MalformedFile("grid file " + path.string() +
                            " is not valid JSON: " + e.what());
    }
    VoxelGrid grid;
    grid.n = read_grid_n(doc);
    if (!doc.contains("values") || !doc["values"].is_array())
        throw MalformedFile("grid file lacks a values array");
    const auto& values = doc["values"];
    if (static_cast<std::int64_t>(values.size()) != cube(grid.n))
        throw SizeMismatch("grid file promises n=" + std::to_string(grid.n) +
                               " but carries " + std::to_string(values.size()) +
                               " values",
                           ErrorCategory::io);
    grid.values.reserve(values.size());
    for (const auto& v : values) {
        if (!v.is_number())
            throw MalformedFile("grid values must all be numbers");
        grid.values.push_back(v.get<double>());
    }
    grid.metadata = metadata_from_json(doc.value("metadata", json()));
    return grid;
}

void save_grid_json(const VoxelGrid& grid, const std::filesystem::path& path) {
    json doc;
    doc["n"] = grid.n;
    doc["values"] = grid.values;
    doc["metadata"] = metadata_to_json(grid.metadata);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot write grid file " + path.string());
    out << doc.dump();
    out << '\n';
    if (!out) throw IoFailure("failed while writing " + path.string());
}

VoxelGrid load_grid_raw(const std::filesystem::path& path) {
    std::ifstream side(sidecar_path(path));
    if (!side)
        throw MalformedFile("raw grid " + path.string() +
                            " lacks its sidecar " +
                            sidecar_path(path).string());
    json doc;
    try {
        side >> doc;
    } catch (const json::exception& e) {
        throw MalformedFile("grid sidecar is not valid JSON: " +
                            std::string(e.what()));
    }
    VoxelGrid grid;
    grid.n = read_grid_n(doc);
    grid.metadata = metadata_from_json(doc.value("metadata", json()));

    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw IoFailure("cannot open grid payload " + path.string());
    const std::int64_t bytes = in.tellg();
    const std::int64_t expected = cube(grid.n) * static_cast<std::int64_t>(sizeof(double));
    if (bytes != expected)
        throw SizeMismatch("raw grid payload is " + std::to_string(bytes) +
                               " bytes, header n=" + std::to_string(grid.n) +
                               " requires " + std::to_string(expected),
                           ErrorCategory::io);
    in.seekg(0);
    grid.values.resize(static_cast<std::size_t>(cube(grid.n)));
    in.read(reinterpret_cast<char*>(grid.values.data()), expected);
    if (!in) throw IoFailure("failed while reading " + path.string());
    return grid;
}

void save_grid_raw(const VoxelGrid& grid, const std::filesystem::path& path) {
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFailure("cannot write grid payload " + path.string());
        out.write(reinterpret_cast<const char*>(grid.values.data()),
                  static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
        if (!out) throw IoFailure("failed while writing " + path.string());
    }
    json doc;
    doc["n"] = grid.n;
    doc["metadata"] = metadata_to_json(grid.metadata);
    std::ofstream side(sidecar_path(path), std::ios::trunc);
    if (!side)
        throw IoFailure("cannot write grid sidecar " +
                        sidecar_path(path).string());
    side << doc.dump() << '\n';
    if (!side) throw IoFailure("failed while writing grid sidecar");
}

void check_grid_sizes(const VoxelGrid& grid) {
    if (grid.n < 1) throw SizeMismatch("grid size must be >= 1");
    if (static_cast<std::int64_t>(grid.values.size()) != grid.size())
        throw SizeMismatch("grid carries " + std::to_string(grid.values.size()) +
                           " values for n=" + std::to_string(grid.n));
}

} // namespace

GridFormat format_for_path(const std::filesystem::path& path) {
    return path.extension() == ".json" ? GridFormat::json : GridFormat::raw;
}

VoxelGrid load_grid(const std::filesystem::path& path, GridFormat fmt) {
    VoxelGrid grid = fmt == GridFormat::json ? load_grid_json(path)
                                             : load_grid_raw(path);
    check_grid_sizes(grid);
    return grid;
}

void save_grid(const VoxelGrid& grid, const std::filesystem::path& path,
               GridFormat fmt) {
    check_grid_sizes(grid);
    if (fmt == GridFormat::json)
        save_grid_json(grid, path);
    else
        save_grid_raw(grid, path);
}

SignalTensor z_transform(const VoxelGrid& grid) {
    check_grid_sizes(grid);
    SignalTensor s;
    s.n = grid.n;
    s.data.resize(grid.size());
    for (std::int64_t i = 0; i < grid.size(); ++i)
        s.data[i] = Complex{grid.values[static_cast<std::size_t>(i)], 0.0};
    return s;
}

VoxelGrid grid_from_signal(const SignalTensor& s) {
    if (s.data.size() != s.size())
        throw SizeMismatch("signal carries " + std::to_string(s.data.size()) +
                           " samples for n=" + std::to_string(s.n));
    VoxelGrid grid;
    grid.n = s.n;
    grid.values.resize(static_cast<std::size_t>(s.size()));
    for (std::int64_t i = 0; i < s.size(); ++i)
        grid.values[static_cast<std::size_t>(i)] = s.data[i].real();
    return grid;
}

VoxelGrid synthetic_sword(int n) {
    if (n < 8)
        throw std::invalid_argument("synthetic_sword: n must be >= 8");
    const int c = std::max(1, n / 8);
    const int hilt_len = std::max(1, static_cast<int>(std::lround(0.15 * n)));
    const int guard_x = hilt_len;
    const int blade_start = hilt_len + 1;
    const int blade_end =
        std::min(n, blade_start + static_cast<int>(std::lround(0.7 * n)));
    const int cy0 = (n - c) / 2, cz0 = (n - c) / 2;
    const int gy0 = std::max(0, (n - 3 * c) / 2);
    const int gy1 = std::min(n, gy0 + 3 * c);

    VoxelGrid grid;
    grid.n = n;
    grid.values.assign(static_cast<std::size_t>(cube(n)), 0.0);
    grid.metadata["solid"] = "sword";

    auto cell = [&](int x, int y, int z) -> double& {
        return grid.values[(static_cast<std::size_t>(x) * n + y) * n + z];
    };
    for (int x = 0; x < hilt_len; ++x)
        for (int y = cy0; y < cy0 + c; ++y)
            for (int z = cz0; z < cz0 + c; ++z) cell(x, y, z) = 1.0;
    for (int y = gy0; y < gy1; ++y)
        for (int z = cz0; z < cz0 + c; ++z) cell(guard_x, y, z) = 1.0;
    for (int x = blade_start; x < blade_end; ++x)
        for (int y = cy0; y < cy0 + c; ++y)
            for (int z = cz0; z < cz0 + c; ++z) cell(x, y, z) = 1.0;

    double filled = 0;
    for (const double v : grid.values) filled += v;
    const double occupancy = filled / static_cast<double>(cube(n));
    if (!(occupancy > 0.0 && occupancy < 0.5))
        throw std::logic_error("synthetic_sword occupancy out of range");
    return grid;
}

void export_spectrum(const Spectrum& spec, const NodeGrid& nodes,
                     std::ostream& out) {
    if (spec.n != nodes.n)
        throw SizeMismatch("spectrum n=" + std::to_string(spec.n) +
                           " vs node grid n=" + std::to_string(nodes.n));
    if (!(spec.params == nodes.params))
        throw std::invalid_argument(
            "export_spectrum: spectrum and node grid use different offsets");
    if (spec.values.size() != static_cast<std::int64_t>(nodes.nodes.size()))
        throw SizeMismatch("spectrum value count does not match node count");

    out << "# n=" << spec.n << " params=" << spec.params.encode() << '\n';
    out << kSpectrumColumns << '\n';
    for (std::size_t idx = 0; idx < nodes.nodes.size(); ++idx) {
        const auto& node = nodes.nodes[idx];
        const auto c = real_coords(node.xyz);
        const Complex v = spec.values[static_cast<std::int64_t>(idx)];
        out << node.ijk[0] << ',' << node.ijk[1] << ',' << node.ijk[2] << ','
            << detail::g17(c[0]) << ',' << detail::g17(c[1]) << ','
            << detail::g17(c[2]) << ',' << detail::g17(v.real()) << ','
            << detail::g17(v.imag()) << ',' << detail::g17(std::abs(v))
            << '\n';
    }
}

Spectrum load_spectrum_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open spectrum file " + path.string());

    std::string line;
    if (!std::getline(in, line) || line.rfind("# n=", 0) != 0)
        throw MalformedFile("spectrum file lacks the '# n=... params=...' header");
    const auto params_pos = line.find(" params=");
    if (params_pos == std::string::npos)
        throw MalformedFile("spectrum header lacks params");
    Spectrum spec;
    try {
        spec.n = std::stoi(line.substr(4, params_pos - 4));
        spec.params = parse_params(line.substr(params_pos + 8));
    } catch (const std::exception&) {
        throw MalformedFile("cannot parse spectrum header '" + line + "'");
    }
    if (spec.n < 1 || spec.n > 4096)
        throw MalformedFile("spectrum header size out of range");

    if (!std::getline(in, line) || line != kSpectrumColumns)
        throw MalformedFile("spectrum file lacks the column header");

    const std::int64_t n3 = cube(spec.n);
    spec.values = Eigen::VectorXcd::Zero(n3);
    std::vector<bool> seen(static_cast<std::size_t>(n3), false);
    std::int64_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<std::string, 9> fields;
        std::size_t start = 0;
        for (int f = 0; f < 9; ++f) {
            const auto end = f == 8 ? line.size() : line.find(',', start);
            if (end == std::string::npos)
                throw MalformedFile("spectrum row has too few columns: " + line);
            fields[static_cast<std::size_t>(f)] = line.substr(start, end - start);
            start = end + 1;
        }
        try {
            const int i = std::stoi(fields[0]);
            const int j = std::stoi(fields[1]);
            const int k = std::stoi(fields[2]);
            if (i < 0 || i >= spec.n || j < 0 || j >= spec.n || k < 0 ||
                k >= spec.n)
                throw MalformedFile("spectrum row index out of range: " + line);
            const std::int64_t flat =
                (static_cast<std::int64_t>(i) * spec.n + j) * spec.n + k;
            if (seen[static_cast<std::size_t>(flat)])
                throw MalformedFile("spectrum row repeats a node: " + line);
            seen[static_cast<std::size_t>(flat)] = true;
            spec.values[flat] =
                Complex{std::stod(fields[6]), std::stod(fields[7])};
        } catch (const MalformedFile&) {
            throw;
        } catch (const std::exception&) {
            throw MalformedFile("cannot parse spectrum row: " + line);
        }
        ++rows;
    }
    if (rows != n3)
        throw SizeMismatch("spectrum file has " + std::to_string(rows) +
                               " rows, header n=" + std::to_string(spec.n) +
                               " requires " + std::to_string(n3),
                           ErrorCategory::io);
    return spec;
}

void export_geometry(const WeylGroup& g, std::ostream& out) {
    out << "dx,dy,dz\n";
    for (const auto& v : shift_vectors(g))
        out << v[0] << ',' << v[1] << ',' << v[2] << '\n';
}

std::uint64_t occupancy_checksum(const VoxelGrid& grid) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (const double v : grid.values) {
        const unsigned char byte = v != 0.0 ? '1' : '0';
        hash ^= byte;
        hash *= 1099511628211ULL;
    }
    return hash;
}

} // namespace fcct
