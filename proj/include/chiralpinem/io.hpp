#pragma once

#include <map>
#include <string>
#include <vector>

#include "chiralpinem/grid.hpp"

namespace chiralpinem::io {

/// Key/value metadata emitted into CSV header comments and JSON sidecars.
using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string format_double(double v);  // shortest round-trip-exact form used everywhere

/// Collects every file a run produces; flushed into the run manifest.
class OutputRegistry {
public:
    explicit OutputRegistry(std::string out_dir);

    const std::string& dir() const { return out_dir_; }
    std::string path(const std::string& filename) const;

    /// Record an already-written file (crc32 + size are computed here).
    void record(const std::string& path);

    /// Write the manifest JSON listing tool version, resolved config, derived
    /// quantities, wall clock and per-output checksums.
    void write_manifest(const std::string& filename, const std::string& subcommand,
                        const std::string& resolved_config_toml, const Metadata& derived,
                        double wall_seconds) const;

private:
    std::string out_dir_;
    struct Entry {
        std::string name;
        unsigned long crc = 0;
        std::size_t bytes = 0;
    };
    std::vector<Entry> entries_;
};

/// Row-major CSV of a 2D field with "# key = value" grid metadata comments.
void write_csv_field(OutputRegistry& reg, const std::string& filename, const RealField& field,
                     const Metadata& meta);

/// Column CSV: one comment header, one name row, then rows of values.
void write_csv_columns(OutputRegistry& reg, const std::string& filename,
                       const Metadata& meta, const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns);

/// 16-bit grayscale PNG, linear map [min, max] -> [0, 65535], plus a JSON
/// sidecar (<filename>.json) recording the scaling and grid metadata.
void write_png16(OutputRegistry& reg, const std::string& filename, const RealField& field,
                 const Metadata& meta);

/// Arbitrary JSON text (already serialized) written verbatim.
void write_text(OutputRegistry& reg, const std::string& filename, const std::string& text);

unsigned long crc32_of_file(const std::string& path);

}  // namespace chiralpinem::io
