#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "yfl/grid.hpp"

namespace yfl {

/// Binary field container, all integers and floats little-endian:
///
///   offset  size        content
///   0       4           magic "YFLD"
///   4       4  u32      format version (1)
///   8       4  u32      dimension n
///   12      4  u32      metadata length m (bytes)
///   16      8n u64      nodes per axis
///   16+8n   8n f64      periods
///   16+16n  m           metadata, UTF-8 "key=value" lines
///   ...     8N f64      values, row-major in axis order
struct FieldFile {
    ScalarField field;
    std::string metadata;
};

void write_field(std::ostream& os, const ScalarField& f, const std::string& metadata = {});
void write_field(const std::filesystem::path& path, const ScalarField& f,
                 const std::string& metadata = {});

FieldFile read_field(std::istream& is);
FieldFile read_field(const std::filesystem::path& path);

/// CSV with one row per node: x1..xn,value. Intended for small grids.
void write_field_csv(std::ostream& os, const ScalarField& f);

/// Whole-file helpers; parent directories are created on write.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace yfl
