#pragma once

#include "tfcv/cluster.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace tfcv {

enum class OpKind {
  TmsCreate,
  BsReadIn,
  BsReadOut,
  BsPassthroughHold,
  PiPhaseMeasureTag,
};

std::string to_string(OpKind kind);
std::optional<OpKind> op_kind_from_string(const std::string& name);

/// Minimum-uncertainty time-frequency tile hosting one qumode.
struct Plaquette {
  int freq_index = 0;
  int time_bin = 0;
  double dt = 1.0;
  double dw = 0.5;  // dt * dw >= 1/2
};

/// One memory operation. time_bin is the global clock tick of the
/// interaction; target names the logical plaquette being addressed.
struct ScheduleEntry {
  int memory_id = 0;
  int time_bin = 0;
  OpKind op = OpKind::BsPassthroughHold;
  Plaquette target;
  double param = 0.0;  // phi for beam splitters, r for squeezers
  double phase = 0.0;  // control-field phase

  bool operator==(const ScheduleEntry& other) const;
};

struct ArchitectureConstraints {
  double t_mem = 1.0;       // memory coherence time, seconds
  double delta_full = 1.0;  // accessible frequency range, rad/s
};

struct Schedule {
  std::size_t d = 0;
  std::size_t n = 0;
  double dt = 1.0;
  ArchitectureConstraints constraints;
  std::vector<ScheduleEntry> entries;
  std::vector<std::string> warnings;

  bool operator==(const Schedule& other) const;
};

/// Number of memories in the chain: d + 3d + 3(d-1) = 7d - 3.
std::size_t memory_count(std::size_t d);

/// Lowers a d x n lattice build to a memory-chain schedule. Enforces
/// d <= floor(delta_full * dt) and dt <= t_mem / margin.
Schedule compile(std::size_t d, std::size_t n,
                 const ArchitectureConstraints& constraints, double dt,
                 double margin = 10.0);

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> diagnostics;
};

/// Checks single occupancy per memory, hold-time bounds, per-tick plaquette
/// collisions, and memory-count consistency.
ValidationReport validate(const Schedule& schedule);

/// Replays the schedule through the Gaussian pipeline. Matches
/// build_2d_cluster(d, n, r, delta_eta) covariances.
ProtocolResult execute(const Schedule& schedule, double r, double delta_eta);

/// Line-delimited serialization: one named-field record per entry, with
/// header comments carrying the schedule parameters. Round-trips exactly.
std::string to_text(const Schedule& schedule);
Schedule schedule_from_text(const std::string& text);

/// Structured-object (JSON) serialization. Round-trips exactly.
std::string to_json(const Schedule& schedule);
Schedule schedule_from_json(const std::string& text);

}  // namespace tfcv
