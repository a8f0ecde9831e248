#include "exclt/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>

namespace exclt {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put_le(std::string& buf, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  buf.append(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(const char* p) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_field_binary(const GridField& field, const std::filesystem::path& path) {
  const GridSpec& spec = field.spec();
  std::string buf;
  buf.reserve(kFieldHeaderBytes + 8 * spec.point_count());
  buf.append("XFLD", 4);
  put_le<std::uint32_t>(buf, kFieldFormatVersion);
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(spec.dimension()));
  for (int k = 0; k < 3; ++k) {
    const std::size_t n = k < spec.dimension() ? spec.counts()[static_cast<std::size_t>(k)] : 1;
    if (n > std::numeric_limits<std::uint32_t>::max()) throw FormatError("axis count exceeds uint32");
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(n));
  }
  put_le<double>(buf, spec.mesh());
  for (double v : field.values()) put_le<double>(buf, v);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw FormatError("write failed: " + path.string());
}

GridField read_field_binary(const std::filesystem::path& path, const nlohmann::json& sidecar) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open field dump " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < kFieldHeaderBytes || buf.compare(0, 4, "XFLD") != 0) {
    throw FormatError(path.string() + ": not an XFLD field dump");
  }
  const auto version = get_le<std::uint32_t>(buf.data() + 4);
  if (version != kFieldFormatVersion) {
    throw FormatError(path.string() + ": unsupported format version " + std::to_string(version));
  }
  const auto d = get_le<std::uint32_t>(buf.data() + 8);
  if (d < 1 || d > 3) throw FormatError(path.string() + ": invalid dimension " + std::to_string(d));
  std::vector<std::size_t> counts;
  std::size_t total = 1;
  for (std::uint32_t k = 0; k < 3; ++k) {
    const auto n = get_le<std::uint32_t>(buf.data() + 12 + 4 * k);
    if (k < d) {
      counts.push_back(n);
      total *= n;
    } else if (n != 1) {
      throw FormatError(path.string() + ": unused axis count must be 1");
    }
  }
  const double mesh = get_le<double>(buf.data() + 24);
  if (buf.size() != kFieldHeaderBytes + 8 * total) {
    throw FormatError(path.string() + ": payload size does not match header");
  }
  std::vector<double> sides;
  for (std::size_t n : counts) sides.push_back(static_cast<double>(n) * mesh);
  if (sidecar.contains("sides")) sides = sidecar.at("sides").get<std::vector<double>>();
  std::vector<double> origin(d, 0.0);
  if (sidecar.contains("origin")) origin = sidecar.at("origin").get<std::vector<double>>();
  std::vector<double> values(total);
  for (std::size_t i = 0; i < total; ++i) {
    values[i] = get_le<double>(buf.data() + kFieldHeaderBytes + 8 * i);
  }
  const std::string tag = sidecar.value("model_tag", std::string("unknown"));
  const std::uint64_t seed = sidecar.value("seed", std::uint64_t{0});
  return GridField(GridSpec(sides, mesh, origin), std::move(values), tag, seed);
}

nlohmann::json field_sidecar(const GridField& field, const nlohmann::json& model_metadata) {
  const GridSpec& spec = field.spec();
  return {
      {"format", "XFLD"},
      {"version", kFieldFormatVersion},
      {"dimension", spec.dimension()},
      {"counts", spec.counts()},
      {"mesh", spec.mesh()},
      {"origin", spec.origin()},
      {"sides", spec.sides()},
      {"seed", field.seed()},
      {"model_tag", field.model_tag()},
      {"model", model_metadata},
  };
}

void write_field_csv(const GridField& field, const std::filesystem::path& path) {
  const GridSpec& spec = field.spec();
  if (spec.dimension() > 2) throw FormatError("CSV export supports d <= 2 only");
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  std::vector<std::size_t> idx(static_cast<std::size_t>(spec.dimension()));
  std::vector<double> x(idx.size());
  out << (spec.dimension() == 1 ? "x,value\n" : "x,y,value\n");
  for (std::size_t lin = 0; lin < spec.point_count(); ++lin) {
    spec.multi_index(lin, idx);
    spec.point(idx, x);
    for (double c : x) out << c << ',';
    out << field.values()[lin] << '\n';
  }
}

}  // namespace exclt
