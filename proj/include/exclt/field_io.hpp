#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "exclt/grid.hpp"

namespace exclt {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary field dump, all integers/reals little-endian:
//   offset  0  char[4]  "XFLD"
//   offset  4  uint32   format version (1)
//   offset  8  uint32   dimension d
//   offset 12  uint32   count per axis, 3 slots (unused axes = 1)
//   offset 24  float64  mesh
//   offset 32  float64  values, row-major (axis 0 slowest)
inline constexpr std::uint32_t kFieldFormatVersion = 1;
inline constexpr std::size_t kFieldHeaderBytes = 32;

void write_field_binary(const GridField& field, const std::filesystem::path& path);

/// Reads a dump. Origin and model tag come from `sidecar` when given.
GridField read_field_binary(const std::filesystem::path& path,
                            const nlohmann::json& sidecar = nlohmann::json::object());

nlohmann::json field_sidecar(const GridField& field, const nlohmann::json& model_metadata);

/// "x,value" (d = 1) or "x,y,value" (d = 2) rows; throws for d = 3.
void write_field_csv(const GridField& field, const std::filesystem::path& path);

}  // namespace exclt
