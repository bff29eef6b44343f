#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string_view>

#include "ctol/envelope.hpp"
#include "ctol/simkernel.hpp"
#include "ctol/supervisor.hpp"

namespace ctol {

inline constexpr std::string_view kTelemetryHeader =
    "t,phase,phi_deg,beta_deg,h,va,gamma_deg,theta_deg,alpha_deg,fp,omega_q_degs,fl,fd,"
    "ft,grounded";

/// Header plus one row per record; returns the bytes written. Throws
/// OutputError for an empty record list or a failed write.
std::size_t write_telemetry(std::span<const TelemetryRecord> records, std::ostream& out);
std::size_t write_telemetry(std::span<const TelemetryRecord> records,
                            const std::filesystem::path& path);

/// phase,entry_t,exit_t
std::size_t write_phase_log(std::span<const PhaseLogEntry> log, std::ostream& out);

/// r,beta_deg,va,feasible. Infeasible rows carry va = nan.
std::size_t write_envelope_curve(const EnvelopeCurve& curve, std::ostream& out);

/// r,beta_max_deg
std::size_t write_beta_limit(const EnvelopeCurve& curve, std::span<const double> lengths,
                             std::ostream& out);

/// Key-value dump of one LQR design: operating point, A, B, Q, R, K, P and
/// closed-loop eigenvalues.
void write_design(Phase phase, const LqrDesign& design, std::ostream& out);

}  // namespace ctol
