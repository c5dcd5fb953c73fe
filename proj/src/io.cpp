#include "filament/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fs = std::filesystem;

namespace filament {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void prepare_output_dir(const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw std::runtime_error("output path exists and is not a directory: " + dir.string());
    if (!fs::is_empty(dir)) {
      if (!force) throw std::runtime_error("output directory is not empty (use --force): " + dir.string());
      for (const auto& entry : fs::directory_iterator(dir)) fs::remove_all(entry.path());
    }
  }
  fs::create_directories(dir);
}

namespace {
std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  return f;
}
}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_curve_csv(const fs::path& path, const PeriodicCurve& curve) {
  auto f = open_out(path);
  f << "s,x,y,z\n";
  const auto pts = curve.samples();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    f << format_double(static_cast<double>(i) / static_cast<double>(pts.size())) << ',' << format_double(pts[i][0])
      << ',' << format_double(pts[i][1]) << ',' << format_double(pts[i][2]) << '\n';
  }
}

void write_curve_sidecar(const fs::path& path, int n, double epsilon, double time, const std::string& model) {
  nlohmann::json j = {{"n", n}, {"epsilon", epsilon}, {"time", time}, {"model", model}};
  write_text(path, j.dump(2) + "\n");
}

PeriodicCurve read_curve_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("s,x,y,z", 0) != 0)
    throw std::runtime_error(path.string() + ": expected header s,x,y,z");
  std::vector<Vec3> pts;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double s, x, y, z;
    char c1, c2, c3;
    std::istringstream row(line);
    if (!(row >> s >> c1 >> x >> c2 >> y >> c3 >> z) || c1 != ',' || c2 != ',' || c3 != ',')
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": malformed row");
    pts.push_back({x, y, z});
  }
  if (!is_power_of_two(static_cast<long>(pts.size())) || pts.size() < 16)
    throw std::runtime_error(path.string() + ": row count " + std::to_string(pts.size()) +
                             " is not a power of two >= 16");
  return PeriodicCurve::from_samples(make_grid(static_cast<int>(pts.size())), pts);
}

void write_tension_csv(const fs::path& path, const Grid& grid, const ScalarField& tau) {
  auto f = open_out(path);
  f << "s,tau\n";
  const auto t = samples(grid, tau);
  for (std::size_t i = 0; i < t.size(); ++i)
    f << format_double(static_cast<double>(i) / static_cast<double>(t.size())) << ',' << format_double(t[i]) << '\n';
}

void write_multiplier_csv(std::ostream& out, double epsilon, int kmax) {
  const MultiplierTable table = build_table(epsilon, kmax);
  const long low = low_wavenumber_limit(epsilon);
  out << "k,mt,mn,inv_mt,inv_mn,lowk_diff_t,lowk_diff_n\n";
  for (int k = 0; k <= kmax; ++k) {
    out << k << ',' << format_double(table.mt(k)) << ',' << format_double(table.mn(k)) << ','
        << format_double(1.0 / table.mt(k)) << ',' << format_double(1.0 / table.mn(k)) << ',';
    if (k <= low)
      out << format_double(lowk_rft_difference(epsilon, k, Direction::tangential)) << ','
          << format_double(lowk_rft_difference(epsilon, k, Direction::normal));
    else
      out << ',';
    out << '\n';
  }
}

struct DiagnosticsWriter::Impl {
  std::ofstream f;
};

DiagnosticsWriter::DiagnosticsWriter(const fs::path& path) : impl_(std::make_unique<Impl>()) {
  impl_->f = open_out(path);
  impl_->f << "step,time,energy,dissipation,inext_residual,tension_h12,energy_flag\n";
}

DiagnosticsWriter::~DiagnosticsWriter() = default;

void DiagnosticsWriter::write(const DiagnosticsRecord& r) {
  impl_->f << r.step << ',' << format_double(r.time) << ',' << format_double(r.energy) << ','
           << format_double(r.dissipation) << ',' << format_double(r.inext_residual) << ','
           << format_double(r.tension_h12) << ',' << (r.energy_flag ? 1 : 0) << '\n';
}

void write_diagnostics_csv(const fs::path& path, const std::vector<DiagnosticsRecord>& records) {
  DiagnosticsWriter w(path);
  for (const auto& r : records) w.write(r);
}

}  // namespace filament
