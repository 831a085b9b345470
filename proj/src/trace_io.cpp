#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "fnls/error.hpp"
#include "fnls/solver.hpp"

namespace fnls {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(bytes), std::end(bytes));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw ConfigError("truncated trace file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(bytes), std::end(bytes));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_trace(const std::string& path, const SpaceTimeTrace& trace) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open trace file for writing: " + path);
  put<std::uint64_t>(os, trace.grid().n());
  put<double>(os, trace.grid().period());
  put<double>(os, trace.t0());
  put<double>(os, trace.dt());
  put<std::uint64_t>(os, trace.size());
  for (const auto& f : trace.fields())
    for (const auto& v : f.values) {
      put<double>(os, v.real());
      put<double>(os, v.imag());
    }
  if (!os) throw ConfigError("failed writing trace file: " + path);
}

SpaceTimeTrace read_trace(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open trace file: " + path);
  const auto n = get<std::uint64_t>(is);
  const auto period = get<double>(is);
  const auto t0 = get<double>(is);
  const auto dt = get<double>(is);
  const auto count = get<std::uint64_t>(is);
  const SpectralGrid grid(static_cast<std::size_t>(n), period);
  std::vector<ComplexField> fields;
  fields.reserve(count);
  for (std::uint64_t c = 0; c < count; ++c) {
    ComplexField f(grid);
    for (auto& v : f.values) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      v = {re, im};
    }
    fields.push_back(std::move(f));
  }
  return SpaceTimeTrace(t0, dt, std::move(fields));
}

void to_json(nlohmann::json& j, const SolveConfig& cfg) {
  nlohmann::json spec;
  to_json(spec, cfg.spec);
  j = {{"nu", cfg.sym.nu()},  {"beta", cfg.sym.beta()},         {"T", cfg.T},
       {"dt", cfg.dt},        {"record_every", cfg.record_every}, {"nonlinearity", spec}};
}

SolveConfig solve_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("solve config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "nu" && key != "beta" && key != "T" && key != "dt" && key != "record_every" && key != "nonlinearity")
      throw ConfigError("unknown solve config key: " + key);
  try {
    SolveConfig cfg{LinearSymbol(j.value("nu", 1.0), j.value("beta", 0.0)), spec_from_json(j.at("nonlinearity")),
                    j.at("T").get<double>(), j.at("dt").get<double>(), j.value("record_every", 1)};
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed solve config: ") + e.what());
  }
}

}  // namespace fnls
