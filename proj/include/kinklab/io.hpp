#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kinklab/evolution.hpp"
#include "kinklab/modulation.hpp"
#include "kinklab/multikink.hpp"
#include "kinklab/toda.hpp"

namespace kinklab {

// 17 significant digits, enough to round-trip a double.
std::string format_number(double v);

// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::string render() const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);

// x, phi, phidot
CsvTable snapshot_table(const FieldSnapshot& s);
// Grid, sector and time as JSON.
std::string snapshot_header_json(const FieldSnapshot& s, double t);
// <stem>.csv and <stem>.json
void write_snapshot(const std::filesystem::path& stem, const FieldSnapshot& s, double t);

// t, E, E_p, E_k
CsvTable energy_table(const Trajectory& traj);
// t, a_1..a_n, p_1..p_n, rho, ortho_residual, g_energy
CsvTable modulation_table(const ModulationSeries& series);
// t, a_1..a_n, p_1..p_n, r, z_1..z_{n-1}, hamiltonian_monitor (r, z only for n >= 2)
CsvTable toda_table(const std::vector<TodaState>& states, const TodaConstants& c);

struct Checkpoint {
  FieldSnapshot snapshot;
  double t = 0.0;
};

// "KLCK", version, x0, dx, size, sector, t, then little-endian doubles of
// phi followed by phidot. IoError on malformed input.
void write_checkpoint(const std::filesystem::path& path, const FieldSnapshot& s, double t);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace kinklab
