#include "chiralpinem/io.hpp"

#include <png.h>
#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "chiralpinem/version.hpp"

namespace chiralpinem::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

OutputRegistry::OutputRegistry(std::string out_dir) : out_dir_(std::move(out_dir)) {
    fs::create_directories(out_dir_);
}

std::string OutputRegistry::path(const std::string& filename) const {
    return (fs::path(out_dir_) / filename).string();
}

void OutputRegistry::record(const std::string& p) {
    Entry e;
    e.name = fs::path(p).filename().string();
    e.crc = crc32_of_file(p);
    e.bytes = static_cast<std::size_t>(fs::file_size(p));
    entries_.push_back(std::move(e));
}

void OutputRegistry::write_manifest(const std::string& filename, const std::string& subcommand,
                                    const std::string& resolved_config_toml,
                                    const Metadata& derived, double wall_seconds) const {
    json j;
    j["tool"] = "chiral-pinem";
    j["version"] = version_string();
    j["subcommand"] = subcommand;
    j["wall_seconds"] = wall_seconds;
    j["resolved_config_toml"] = resolved_config_toml;
    json der = json::object();
    for (const auto& [k, v] : derived) der[k] = v;
    j["derived"] = der;
    json outs = json::array();
    for (const Entry& e : entries_) {
        char crc_hex[16];
        std::snprintf(crc_hex, sizeof(crc_hex), "%08lx", e.crc);
        outs.push_back({{"file", e.name}, {"crc32", crc_hex}, {"bytes", e.bytes}});
    }
    j["outputs"] = outs;

    std::ofstream os(path(filename));
    if (!os) throw std::runtime_error("cannot write manifest: " + path(filename));
    os << j.dump(2) << "\n";
}

namespace {

void write_meta_comments(std::ofstream& os, const Metadata& meta) {
    for (const auto& [k, v] : meta) os << "# " << k << " = " << v << "\n";
}

Metadata grid_meta(const Grid2D& g) {
    return {{"nx", std::to_string(g.nx)},
            {"ny", std::to_string(g.ny)},
            {"extent_x", format_double(g.extent_x)},
            {"extent_y", format_double(g.extent_y)},
            {"layout", "row-major, rows are y from -extent to +extent"}};
}

}  // namespace

void write_csv_field(OutputRegistry& reg, const std::string& filename, const RealField& field,
                     const Metadata& meta) {
    const std::string p = reg.path(filename);
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p);
    Metadata all = grid_meta(field.grid);
    all.insert(all.end(), meta.begin(), meta.end());
    write_meta_comments(os, all);
    const Grid2D& g = field.grid;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            if (ix) os << ',';
            os << format_double(field.at(ix, iy));
        }
        os << '\n';
    }
    os.close();
    reg.record(p);
}

void write_csv_columns(OutputRegistry& reg, const std::string& filename, const Metadata& meta,
                       const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns) {
    if (names.size() != columns.size())
        throw std::invalid_argument("write_csv_columns: names/columns mismatch");
    const std::string p = reg.path(filename);
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p);
    write_meta_comments(os, meta);
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) os << ',';
        os << names[i];
    }
    os << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns[0].size();
    for (const auto& c : columns)
        if (c.size() != rows) throw std::invalid_argument("write_csv_columns: ragged columns");
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) os << ',';
            os << format_double(columns[i][r]);
        }
        os << '\n';
    }
    os.close();
    reg.record(p);
}

namespace {

// Pixel rows pre-quantized outside the setjmp frame below.
std::vector<std::vector<png_byte>> quantize_rows(const RealField& field, double lo,
                                                 double span) {
    const Grid2D& g = field.grid;
    std::vector<std::vector<png_byte>> rows(g.ny);
    for (int iy = 0; iy < g.ny; ++iy) {
        // top PNG row = largest y
        const int src_iy = g.ny - 1 - iy;
        rows[iy].resize(static_cast<std::size_t>(g.nx) * 2);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double t = (field.at(ix, src_iy) - lo) / span;
            const unsigned v =
                static_cast<unsigned>(std::lround(65535.0 * std::clamp(t, 0.0, 1.0)));
            rows[iy][2 * ix] = static_cast<png_byte>(v >> 8);
            rows[iy][2 * ix + 1] = static_cast<png_byte>(v & 0xff);
        }
    }
    return rows;
}

void write_png_payload(const std::string& p, int nx, int ny,
                       const std::vector<std::vector<png_byte>>& rows) {
    FILE* fp = std::fopen(p.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot write " + p);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw std::runtime_error("libpng write failed for " + p);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, nx, ny, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (const auto& row : rows) png_write_row(png, const_cast<png_byte*>(row.data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

}  // namespace

void write_png16(OutputRegistry& reg, const std::string& filename, const RealField& field,
                 const Metadata& meta) {
    const Grid2D& g = field.grid;
    double lo = field.values[0], hi = field.values[0];
    for (double v : field.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = (hi > lo) ? hi - lo : 1.0;

    const std::string p = reg.path(filename);
    write_png_payload(p, g.nx, g.ny, quantize_rows(field, lo, span));
    reg.record(p);

    json side;
    side["colormap"] = "gray16-linear";
    side["min"] = lo;
    side["max"] = hi;
    side["nx"] = g.nx;
    side["ny"] = g.ny;
    side["extent_x"] = g.extent_x;
    side["extent_y"] = g.extent_y;
    for (const auto& [k, v] : meta) side[k] = v;
    write_text(reg, filename + ".json", side.dump(2) + "\n");
}

void write_text(OutputRegistry& reg, const std::string& filename, const std::string& text) {
    const std::string p = reg.path(filename);
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p);
    os << text;
    os.close();
    reg.record(p);
}

unsigned long crc32_of_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("crc32: cannot open " + path);
    unsigned long crc = crc32(0L, Z_NULL, 0);
    char buf[1 << 16];
    while (is) {
        is.read(buf, sizeof(buf));
        const std::streamsize got = is.gcount();
        if (got > 0)
            crc = crc32(crc, reinterpret_cast<const Bytef*>(buf), static_cast<uInt>(got));
    }
    return crc;
}

}  // namespace chiralpinem::io
