// CSV and directory helpers. Every floating-point value is written with 17
// significant digits so outputs round-trip exactly.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "filament/curves.hpp"
#include "filament/evolution.hpp"
#include "filament/multipliers.hpp"

namespace filament {

std::string format_double(double v);

/// Creates path. If it exists and is not empty, throws std::runtime_error
/// unless force is set, in which case its contents are removed first.
void prepare_output_dir(const std::filesystem::path& dir, bool force);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Columns s, x, y, z.
void write_curve_csv(const std::filesystem::path& path, const PeriodicCurve& curve);
/// {n, epsilon, time, model}
void write_curve_sidecar(const std::filesystem::path& path, int n, double epsilon, double time, const std::string& model);
/// Reads an s, x, y, z CSV; the row count must be a power of two.
PeriodicCurve read_curve_csv(const std::filesystem::path& path);

void write_tension_csv(const std::filesystem::path& path, const Grid& grid, const ScalarField& tau);

/// Columns k, mt, mn, inv_mt, inv_mn, lowk_diff_t, lowk_diff_n. The low-k
/// differences are empty outside |k| < 1/(2 pi eps).
void write_multiplier_csv(std::ostream& out, double epsilon, int kmax);

/// Streams diagnostics rows: step, time, energy, dissipation,
/// inext_residual, tension_h12, energy_flag.
class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const std::filesystem::path& path);
  ~DiagnosticsWriter();
  void write(const DiagnosticsRecord& r);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records);

}  // namespace filament
