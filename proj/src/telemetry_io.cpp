#include "ctol/telemetry_io.hpp"

#include <fstream>
#include <sstream>

#include "ctol/config.hpp"
#include "ctol/errors.hpp"
#include "ctol/units.hpp"

namespace ctol {

namespace {

std::size_t flush_checked(const std::string& text, std::ostream& out) {
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw OutputError("telemetry write failed");
  return text.size();
}

void row(std::string& s, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) s += ',';
    first = false;
    s += format_number(v);
  }
}

}  // namespace

std::size_t write_telemetry(std::span<const TelemetryRecord> records, std::ostream& out) {
  if (records.empty()) throw OutputError("no telemetry records to write");
  std::string s(kTelemetryHeader);
  s += '\n';
  s.reserve(records.size() * 160);
  for (const auto& r : records) {
    s += format_number(r.t);
    s += ',';
    s += phase_label(r.phase);
    s += ',';
    row(s, {r.azimuth_deg, r.elevation_deg, r.height, r.airspeed, r.flight_path_deg,
            r.pitch_deg, r.alpha_deg, r.thrust, r.pitch_rate_degs, r.lift, r.drag,
            r.tension});
    s += r.grounded ? ",1\n" : ",0\n";
  }
  return flush_checked(s, out);
}

std::size_t write_telemetry(std::span<const TelemetryRecord> records,
                            const std::filesystem::path& path) {
  if (records.empty()) throw OutputError("no telemetry records to write");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot open " + path.string());
  return write_telemetry(records, out);
}

std::size_t write_phase_log(std::span<const PhaseLogEntry> log, std::ostream& out) {
  std::string s = "phase,entry_t,exit_t\n";
  for (const auto& e : log) {
    s += phase_label(e.phase);
    s += ',';
    row(s, {e.entry_time, e.exit_time});
    s += '\n';
  }
  return flush_checked(s, out);
}

std::size_t write_envelope_curve(const EnvelopeCurve& curve, std::ostream& out) {
  std::string s = "r,beta_deg,va,feasible\n";
  for (const auto& p : curve.samples) {
    row(s, {p.tether_length, rad_to_deg(p.elevation)});
    s += ',';
    s += p.feasible ? format_number(p.airspeed) : "nan";
    s += p.feasible ? ",1\n" : ",0\n";
  }
  return flush_checked(s, out);
}

std::size_t write_beta_limit(const EnvelopeCurve& curve, std::span<const double> lengths,
                             std::ostream& out) {
  std::string s = "r,beta_max_deg\n";
  for (std::size_t i = 0; i < lengths.size() && i < curve.beta_limit.size(); ++i) {
    row(s, {lengths[i], rad_to_deg(curve.beta_limit[i])});
    s += '\n';
  }
  return flush_checked(s, out);
}

namespace {

template <class M>
void matrix(std::ostream& out, const char* name, const M& m) {
  out << name << " = [\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (j ? " " : "") << format_number(m(i, j));
    }
    out << "\n";
  }
  out << "]\n";
}

}  // namespace

void write_design(Phase phase, const LqrDesign& d, std::ostream& out) {
  out << "phase = " << phase_label(phase) << "\n";
  out << "x_ref = " << format_number(rad_to_deg(d.point.x_ref[0])) << " "
      << format_number(d.point.x_ref[1]) << " " << format_number(rad_to_deg(d.point.x_ref[2]))
      << " " << format_number(rad_to_deg(d.point.x_ref[3]))
      << "  # beta_deg va gamma_deg theta_deg\n";
  out << "u_ref = " << format_number(d.point.u_ref[0]) << " "
      << format_number(rad_to_deg(d.point.u_ref[1])) << "  # fp omega_q_degs\n";
  out << "trim_residual = " << format_number(d.point.residual) << "\n";
  out << "thrust_bound_active = " << (d.point.thrust_bound_active ? "true" : "false") << "\n";
  matrix(out, "A", d.model.a);
  matrix(out, "B", d.model.b);
  matrix(out, "Q", Eigen::Matrix4d(d.weights.q_diag.asDiagonal()));
  matrix(out, "R", Eigen::Matrix2d(d.weights.r_diag.asDiagonal()));
  matrix(out, "K", d.k);
  matrix(out, "P", d.p);
  out << "eigenvalues =";
  for (Eigen::Index i = 0; i < d.closed_loop_eigenvalues.size(); ++i) {
    const auto z = d.closed_loop_eigenvalues[i];
    out << " " << format_number(z.real()) << (z.imag() < 0 ? "-" : "+")
        << format_number(std::abs(z.imag())) << "j";
  }
  out << "\n";
  out << "care_residual = " << format_number(d.care_residual) << "\n";
  out << "spectral_abscissa = " << format_number(d.spectral_abscissa()) << "\n";
  if (!out) throw OutputError("design dump write failed");
}

}  // namespace ctol
