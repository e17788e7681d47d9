#include "kinklab/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kinklab/error.hpp"

namespace kinklab {

namespace fs = std::filesystem;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw KinkError(ErrorCode::IoError, "cannot open " + tmp.string());
    out << content;
    if (!out.flush()) throw KinkError(ErrorCode::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw KinkError(ErrorCode::IoError, "rename to " + path.string() + ": " + ec.message());
}

std::string CsvTable::render() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  return out.str();
}

void write_csv(const fs::path& path, const CsvTable& table) {
  write_file_atomic(path, table.render());
}

CsvTable snapshot_table(const FieldSnapshot& s) {
  CsvTable t{{"x", "phi", "phidot"}, {}};
  for (std::size_t i = 0; i < s.grid.size; ++i) t.rows.push_back({s.grid.x(i), s.phi[i], s.phidot[i]});
  return t;
}

std::string snapshot_header_json(const FieldSnapshot& s, double t) {
  nlohmann::ordered_json j;
  j["t"] = t;
  j["grid"] = {{"x0", s.grid.x0}, {"dx", s.grid.dx}, {"size", s.grid.size}};
  j["sector"] = {{"left", s.sector.left}, {"right", s.sector.right}};
  return j.dump(2) + "\n";
}

void write_snapshot(const fs::path& stem, const FieldSnapshot& s, double t) {
  fs::path csv = stem, json = stem;
  csv += ".csv";
  json += ".json";
  write_csv(csv, snapshot_table(s));
  write_file_atomic(json, snapshot_header_json(s, t));
}

CsvTable energy_table(const Trajectory& traj) {
  CsvTable t{{"t", "E", "E_p", "E_k"}, {}};
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& e = traj.energies[i];
    t.rows.push_back({traj.times[i], e.total, e.potential, e.kinetic});
  }
  return t;
}

CsvTable modulation_table(const ModulationSeries& series) {
  CsvTable t;
  const std::size_t n = series.records.empty() ? 0 : series.records.front().a.size();
  t.header.push_back("t");
  for (std::size_t k = 1; k <= n; ++k) t.header.push_back("a_" + std::to_string(k));
  for (std::size_t k = 1; k <= n; ++k) t.header.push_back("p_" + std::to_string(k));
  t.header.insert(t.header.end(), {"rho", "ortho_residual", "g_energy"});
  for (const auto& r : series.records) {
    std::vector<double> row{r.t};
    row.insert(row.end(), r.a.begin(), r.a.end());
    row.insert(row.end(), r.p.begin(), r.p.end());
    row.insert(row.end(), {r.rho, r.ortho_residual, r.g_energy});
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable toda_table(const std::vector<TodaState>& states, const TodaConstants& c) {
  CsvTable t;
  const std::size_t n = c.n;
  t.header.push_back("t");
  for (std::size_t k = 1; k <= n; ++k) t.header.push_back("a_" + std::to_string(k));
  for (std::size_t k = 1; k <= n; ++k) t.header.push_back("p_" + std::to_string(k));
  if (n >= 2) {
    t.header.push_back("r");
    for (std::size_t k = 1; k < n; ++k) t.header.push_back("z_" + std::to_string(k));
  }
  t.header.push_back("hamiltonian_monitor");
  for (const auto& s : states) {
    std::vector<double> row{s.t};
    row.insert(row.end(), s.a.begin(), s.a.end());
    row.insert(row.end(), s.p.begin(), s.p.end());
    if (n >= 2) {
      const auto rz = decompose_rz(s, c);
      row.push_back(rz.r);
      row.insert(row.end(), rz.z.begin(), rz.z.end());
    }
    row.push_back(hamiltonian(s, c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

constexpr char kMagic[4] = {'K', 'L', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& buf, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    v = std::bit_cast<T>(bytes);
  }
  char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  buf.append(raw, sizeof(T));
}

template <typename T>
T take(const std::string& buf, std::size_t& pos) {
  if (pos + sizeof(T) > buf.size()) throw KinkError(ErrorCode::IoError, "checkpoint truncated");
  T v;
  std::memcpy(&v, buf.data() + pos, sizeof(T));
  pos += sizeof(T);
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    v = std::bit_cast<T>(bytes);
  }
  return v;
}

}  // namespace

void write_checkpoint(const fs::path& path, const FieldSnapshot& s, double t) {
  std::string buf(kMagic, 4);
  put<std::uint32_t>(buf, kVersion);
  put<double>(buf, s.grid.x0);
  put<double>(buf, s.grid.dx);
  put<std::uint64_t>(buf, s.grid.size);
  put<std::int32_t>(buf, s.sector.left);
  put<std::int32_t>(buf, s.sector.right);
  put<double>(buf, t);
  for (double v : s.phi) put<double>(buf, v);
  for (double v : s.phidot) put<double>(buf, v);
  write_file_atomic(path, buf);
}

Checkpoint read_checkpoint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw KinkError(ErrorCode::IoError, "cannot open " + path.string());
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw KinkError(ErrorCode::IoError, path.string() + " is not a checkpoint");
  }
  std::size_t pos = 4;
  if (take<std::uint32_t>(buf, pos) != kVersion) {
    throw KinkError(ErrorCode::IoError, "unsupported checkpoint version");
  }
  Checkpoint c;
  c.snapshot.grid.x0 = take<double>(buf, pos);
  c.snapshot.grid.dx = take<double>(buf, pos);
  c.snapshot.grid.size = take<std::uint64_t>(buf, pos);
  c.snapshot.sector.left = take<std::int32_t>(buf, pos);
  c.snapshot.sector.right = take<std::int32_t>(buf, pos);
  c.t = take<double>(buf, pos);
  const std::size_t n = c.snapshot.grid.size;
  if (buf.size() - pos != 2 * n * sizeof(double)) {
    throw KinkError(ErrorCode::IoError, "checkpoint payload does not match its header");
  }
  c.snapshot.phi.resize(n);
  c.snapshot.phidot.resize(n);
  for (auto& v : c.snapshot.phi) v = take<double>(buf, pos);
  for (auto& v : c.snapshot.phidot) v = take<double>(buf, pos);
  return c;
}

}  // namespace kinklab
