#include "tfcv/scheduler.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tfcv {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kFullTransferTol = 1e-9;

void require(bool cond, const std::string& msg) {
  if (!cond) {
    throw std::invalid_argument(msg);
  }
}

bool is_full_transfer(double phi) {
  return std::abs(phi - kHalfPi) < kFullTransferTol;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Plaquette make_plaquette(std::size_t f, std::size_t t, double dt) {
  return Plaquette{static_cast<int>(f), static_cast<int>(t), dt, 0.5 / dt};
}

bool is_single_node_prep(const Schedule& s, const Plaquette& target) {
  return s.n % 2 == 1 &&
         target.time_bin == static_cast<int>(s.n) - 1;
}

int node_turns(int time_bin) { return time_bin % 2 == 1 ? 1 : 0; }

std::vector<ScheduleEntry> sorted_entries(const Schedule& s) {
  std::vector<ScheduleEntry> entries = s.entries;
  std::stable_sort(entries.begin(), entries.end(),
                   [](const ScheduleEntry& a, const ScheduleEntry& b) {
                     return a.time_bin < b.time_bin;
                   });
  return entries;
}

}  // namespace

std::string to_string(OpKind kind) {
  switch (kind) {
    case OpKind::TmsCreate:
      return "TMS_CREATE";
    case OpKind::BsReadIn:
      return "BS_READIN";
    case OpKind::BsReadOut:
      return "BS_READOUT";
    case OpKind::BsPassthroughHold:
      return "BS_PASSTHROUGH_HOLD";
    case OpKind::PiPhaseMeasureTag:
      return "PI_PHASE_MEASURE_TAG";
  }
  return "UNKNOWN";
}

std::optional<OpKind> op_kind_from_string(const std::string& name) {
  if (name == "TMS_CREATE") return OpKind::TmsCreate;
  if (name == "BS_READIN") return OpKind::BsReadIn;
  if (name == "BS_READOUT") return OpKind::BsReadOut;
  if (name == "BS_PASSTHROUGH_HOLD") return OpKind::BsPassthroughHold;
  if (name == "PI_PHASE_MEASURE_TAG") return OpKind::PiPhaseMeasureTag;
  return std::nullopt;
}

bool ScheduleEntry::operator==(const ScheduleEntry& other) const {
  return memory_id == other.memory_id && time_bin == other.time_bin &&
         op == other.op && target.freq_index == other.target.freq_index &&
         target.time_bin == other.target.time_bin &&
         target.dt == other.target.dt && target.dw == other.target.dw &&
         param == other.param && phase == other.phase;
}

bool Schedule::operator==(const Schedule& other) const {
  return d == other.d && n == other.n && dt == other.dt &&
         constraints.t_mem == other.constraints.t_mem &&
         constraints.delta_full == other.constraints.delta_full &&
         entries == other.entries && warnings == other.warnings;
}

std::size_t memory_count(std::size_t d) {
  require(d >= 1, "memory_count requires d >= 1");
  return 7 * d - 3;
}

Schedule compile(std::size_t d, std::size_t n,
                 const ArchitectureConstraints& constraints, double dt,
                 double margin) {
  require(d >= 1 && n >= 1, "compile requires d >= 1 and n >= 1");
  require(dt > 0.0 && constraints.t_mem > 0.0 && constraints.delta_full > 0.0,
          "dt, t_mem and delta_full must be positive");
  const double tb_product = constraints.delta_full * dt;
  if (static_cast<double>(d) > std::floor(tb_product)) {
    throw std::invalid_argument(
        "time-bandwidth bound violated: d <= floor(delta_full * dt) requires "
        "d <= " +
        std::to_string(static_cast<long long>(std::floor(tb_product))) +
        ", got d = " + std::to_string(d));
  }
  if (dt > constraints.t_mem / margin) {
    throw std::invalid_argument(
        "coherence margin violated: dt <= t_mem / " + std::to_string(margin) +
        " requires dt <= " + std::to_string(constraints.t_mem / margin) +
        ", got dt = " + std::to_string(dt));
  }

  Schedule s;
  s.d = d;
  s.n = n;
  s.dt = dt;
  s.constraints = constraints;
  if (static_cast<double>(d) > 0.5 * tb_product) {
    s.warnings.push_back(
        "d exceeds half the time-bandwidth product delta_full * dt; "
        "frequency channels are tightly packed");
  }

  const double phi_gate = cz_bs_angle();
  const double r_gate = cz_tms_squeezing();
  int last_tick = -2;

  // Stage a: one memory per frequency row emits the two-qumode clusters.
  for (std::size_t f = 0; f < d; ++f) {
    const int m = static_cast<int>(f);
    std::size_t k = 0;
    for (std::size_t t = 0; t + 1 < n; t += 2, ++k) {
      const int w = static_cast<int>(4 * k);
      s.entries.push_back({m, w, OpKind::TmsCreate,
                           make_plaquette(f, t, dt), 0.0, 0.0});
      s.entries.push_back({m, w + 1, OpKind::BsReadOut,
                           make_plaquette(f, t + 1, dt), kHalfPi, 0.0});
      last_tick = std::max(last_tick, w + 1);
    }
    if (n % 2 == 1) {
      const int w = static_cast<int>(4 * k);
      s.entries.push_back({m, w, OpKind::TmsCreate,
                           make_plaquette(f, n - 1, dt), 0.0, 0.0});
      s.entries.push_back({m, w + 1, OpKind::BsReadOut,
                           make_plaquette(f, n - 1, dt), kHalfPi, 0.0});
      last_tick = std::max(last_tick, w + 1);
    }
  }

  // A gate link: qumode Q hops through the three memories of the triple
  // (lossy read-in, lossless restore) while qumode P passes by and exits
  // each interaction through the cell loss.
  auto emit_link = [&](int base_id, int w, const Plaquette& p,
                       const Plaquette& q) {
    const int m0 = base_id;
    const int m1 = base_id + 1;
    const int m2 = base_id + 2;
    s.entries.push_back({m0, w, OpKind::BsReadIn, q, kHalfPi, std::numbers::pi});
    s.entries.push_back({m0, w + 1, OpKind::BsReadIn, p, phi_gate, -kHalfPi});
    s.entries.push_back({m0, w + 2, OpKind::BsReadOut, q, kHalfPi, 0.0});
    s.entries.push_back({m1, w + 3, OpKind::BsReadIn, q, kHalfPi, std::numbers::pi});
    s.entries.push_back({m1, w + 4, OpKind::TmsCreate, p, r_gate, kHalfPi});
    s.entries.push_back({m1, w + 5, OpKind::BsReadOut, q, kHalfPi, 0.0});
    s.entries.push_back({m2, w + 6, OpKind::BsReadIn, q, kHalfPi, std::numbers::pi});
    s.entries.push_back({m2, w + 7, OpKind::BsReadIn, p, phi_gate, -kHalfPi});
    s.entries.push_back({m2, w + 8, OpKind::BsReadOut, q, kHalfPi, 0.0});
    last_tick = std::max(last_tick, w + 8);
  };

  // Stage b: temporal links, one triple per row, streaming over link index.
  const int stage_b_base = last_tick + 2;
  for (std::size_t f = 0; f < d; ++f) {
    const int triple = static_cast<int>(d + 3 * f);
    std::size_t link = 0;
    for (std::size_t t = 1; t + 1 < n; t += 2, ++link) {
      emit_link(triple, stage_b_base + static_cast<int>(10 * link),
                make_plaquette(f, t, dt), make_plaquette(f, t + 1, dt));
    }
  }

  // Stage c: frequency links, one triple per adjacent row pair; the beamline
  // offset staggers triples so links sharing a row never interleave. A fixed
  // pipeline delay after the stage-b front suffices: the links for time bin
  // t only need the temporal links touching bin t (window index <= t/2) to
  // have run, which the 10-tick stride guarantees for every t.
  const int stage_c_base = stage_b_base + 10;
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t f = 0; f + 1 < d; ++f) {
      const int triple = static_cast<int>(4 * d + 3 * f);
      emit_link(triple, stage_c_base + static_cast<int>(10 * (f + t)),
                make_plaquette(f, t, dt), make_plaquette(f + 1, t, dt));
    }
  }

  // Chain memories with no operational role still sit in the beam path;
  // mark them with an explicit hold pair.
  std::vector<bool> used(memory_count(d), false);
  for (const auto& e : s.entries) {
    used[static_cast<std::size_t>(e.memory_id)] = true;
  }
  int idle_tick = last_tick + 2;
  for (std::size_t id = 0; id < used.size(); ++id) {
    if (used[id]) {
      continue;
    }
    const std::size_t row = id < 4 * d ? (id - d) / 3 : (id - 4 * d) / 3;
    s.entries.push_back({static_cast<int>(id), idle_tick,
                         OpKind::BsPassthroughHold,
                         make_plaquette(row, 0, dt), kHalfPi, 0.0});
    s.entries.push_back({static_cast<int>(id), idle_tick + 1,
                         OpKind::BsPassthroughHold,
                         make_plaquette(row, 0, dt), kHalfPi, 0.0});
    idle_tick += 2;
  }

  std::stable_sort(s.entries.begin(), s.entries.end(),
                   [](const ScheduleEntry& a, const ScheduleEntry& b) {
                     return a.time_bin < b.time_bin;
                   });
  return s;
}

ValidationReport validate(const Schedule& schedule) {
  ValidationReport report;
  auto fail = [&](const std::string& msg) {
    report.valid = false;
    report.diagnostics.push_back(msg);
  };

  struct MemoryState {
    bool occupied = false;
    bool holding = false;  // occupied via a passthrough hold
    int acquire_tick = 0;
  };
  std::map<int, MemoryState> memories;
  std::map<std::tuple<int, int, int>, int> addressed;  // (freq, bin, tick) -> id

  for (const auto& e : sorted_entries(schedule)) {
    auto& m = memories[e.memory_id];
    const auto key =
        std::make_tuple(e.target.freq_index, e.target.time_bin, e.time_bin);
    auto [it, inserted] = addressed.emplace(key, e.memory_id);
    if (!inserted && it->second != e.memory_id) {
      fail("plaquette (" + std::to_string(e.target.freq_index) + "," +
           std::to_string(e.target.time_bin) + ") addressed by memories " +
           std::to_string(it->second) + " and " + std::to_string(e.memory_id) +
           " in bin " + std::to_string(e.time_bin));
    }
    if (e.target.dt * e.target.dw < 0.5 - 1e-12) {
      fail("plaquette below the Fourier uncertainty area dt*dw >= 1/2");
    }
    auto check_hold = [&]() {
      const double held = (e.time_bin - m.acquire_tick) * schedule.dt;
      if (held > schedule.constraints.t_mem) {
        fail("memory " + std::to_string(e.memory_id) + " hold of " +
             fmt_double(held) + " s exceeds t_mem = " +
             fmt_double(schedule.constraints.t_mem) + " s");
      }
    };
    switch (e.op) {
      case OpKind::TmsCreate:
        if (!m.occupied) {
          m.occupied = true;
          m.acquire_tick = e.time_bin;
        }
        // On an occupied memory this is the squeezing interaction of a
        // gate link; occupancy is unchanged.
        break;
      case OpKind::BsReadIn:
        if (is_full_transfer(e.param)) {
          if (m.occupied) {
            fail("memory " + std::to_string(e.memory_id) +
                 " already holds a qumode at bin " +
                 std::to_string(e.time_bin));
          } else {
            m.occupied = true;
            m.acquire_tick = e.time_bin;
          }
        } else if (!m.occupied) {
          fail("gate interaction on empty memory " +
               std::to_string(e.memory_id) + " at bin " +
               std::to_string(e.time_bin));
        }
        break;
      case OpKind::BsReadOut:
        if (!m.occupied || m.holding) {
          fail("read-out from empty memory " + std::to_string(e.memory_id) +
               " at bin " + std::to_string(e.time_bin));
        } else {
          check_hold();
          m.occupied = false;
        }
        break;
      case OpKind::BsPassthroughHold:
        if (m.occupied && !m.holding) {
          fail("passthrough hold on occupied memory " +
               std::to_string(e.memory_id) + " at bin " +
               std::to_string(e.time_bin));
        } else if (!m.occupied) {
          m.occupied = true;
          m.holding = true;
          m.acquire_tick = e.time_bin;
        } else {
          check_hold();
          m.occupied = false;
          m.holding = false;
        }
        break;
      case OpKind::PiPhaseMeasureTag:
        break;
    }
  }

  std::size_t distinct = memories.size();
  if (schedule.d >= 1 && distinct != memory_count(schedule.d)) {
    fail("schedule uses " + std::to_string(distinct) +
         " memories, expected 7d-3 = " +
         std::to_string(memory_count(schedule.d)));
  }
  return report;
}

ProtocolResult execute(const Schedule& schedule, double r, double delta_eta) {
  const std::size_t d = schedule.d;
  const std::size_t n = schedule.n;
  require(d >= 1 && n >= 1, "schedule must carry d >= 1, n >= 1");
  require(2 * d * n <= kMaxLatticeModes,
          "schedule too large for dense simulation (2*d*n <= 256)");
  require(delta_eta >= 0.0 && delta_eta <= 1.0,
          "delta_eta must lie in [0, 1]");
  require(r >= 0.0 && std::isfinite(r), "squeezing must be finite and >= 0");

  GaussianState st = vacuum(d * n);
  struct MemorySlot {
    std::size_t mode = 0;
    bool degenerate_prep = false;
    OpKind acquired_by = OpKind::TmsCreate;
    int stored_turns = 0;
  };
  std::map<int, MemorySlot> active;
  std::size_t total_modes = d * n;

  auto field_mode = [&](const Plaquette& p) -> std::size_t {
    require(p.freq_index >= 0 && p.freq_index < static_cast<int>(d) &&
                p.time_bin >= 0 && p.time_bin < static_cast<int>(n),
            "entry target outside the lattice");
    return static_cast<std::size_t>(p.freq_index) * n +
           static_cast<std::size_t>(p.time_bin);
  };
  auto acquire = [&](int id) -> MemorySlot& {
    st = tensor_product(st, vacuum(1));
    active[id] = MemorySlot{total_modes, false, OpKind::TmsCreate, 0};
    ++total_modes;
    return active[id];
  };
  auto release = [&](int id) {
    const std::size_t gone = active[id].mode;
    st = trace_out(st, {ModeIndex{gone}});
    --total_modes;
    active.erase(id);
    for (auto& [other_id, slot] : active) {
      if (slot.mode > gone) {
        --slot.mode;
      }
    }
  };

  for (const auto& e : sorted_entries(schedule)) {
    switch (e.op) {
      case OpKind::TmsCreate: {
        auto it = active.find(e.memory_id);
        if (it == active.end()) {
          const std::size_t fm = field_mode(e.target);
          if (is_single_node_prep(schedule, e.target)) {
            st = apply(st, SymplecticOp::squeezer(r), {ModeIndex{fm}});
            acquire(e.memory_id).degenerate_prep = true;
          } else {
            auto& slot = acquire(e.memory_id);
            st = apply(st, to_symplectic(tms_bogoliubov(RamanTMS{r, 0.0})),
                       {ModeIndex{fm}, ModeIndex{slot.mode}});
          }
        } else {
          // Squeezing interaction of a gate link with the stored qumode.
          const std::size_t fm = field_mode(e.target);
          const SymplecticOp gate = detail::conjugate_gate(
              to_symplectic(tms_bogoliubov(RamanTMS{e.param, e.phase})),
              node_turns(e.target.time_bin), it->second.stored_turns);
          st = apply(st, gate, {ModeIndex{fm}, ModeIndex{it->second.mode}});
          st = lossy_coupling(st, ModeIndex{fm}, delta_eta);
        }
        break;
      }
      case OpKind::BsReadIn: {
        const std::size_t fm = field_mode(e.target);
        if (is_full_transfer(e.param)) {
          require(!active.count(e.memory_id),
                  "read-in to an occupied memory");
          auto& slot = acquire(e.memory_id);
          slot.acquired_by = OpKind::BsReadIn;
          slot.stored_turns = node_turns(e.target.time_bin);
          st = apply(st, detail::swap_into_memory(),
                     {ModeIndex{fm}, ModeIndex{slot.mode}});
          st = lossy_coupling(st, ModeIndex{slot.mode}, delta_eta);
        } else {
          auto it = active.find(e.memory_id);
          require(it != active.end(), "gate interaction on empty memory");
          const SymplecticOp gate = detail::conjugate_gate(
              to_symplectic(bs_bogoliubov(RamanBS{e.param, e.phase})),
              node_turns(e.target.time_bin), it->second.stored_turns);
          st = apply(st, gate, {ModeIndex{fm}, ModeIndex{it->second.mode}});
          st = lossy_coupling(st, ModeIndex{fm}, delta_eta);
        }
        break;
      }
      case OpKind::BsReadOut: {
        auto it = active.find(e.memory_id);
        require(it != active.end(), "read-out from an empty memory");
        const std::size_t fm = field_mode(e.target);
        if (it->second.degenerate_prep) {
          st = lossy_coupling(st, ModeIndex{fm}, delta_eta);
        } else {
          st = apply(st, detail::swap_out_of_memory(),
                     {ModeIndex{fm}, ModeIndex{it->second.mode}});
          if (it->second.acquired_by == OpKind::TmsCreate) {
            st = lossy_coupling(st, ModeIndex{fm}, delta_eta);
          }
        }
        release(e.memory_id);
        break;
      }
      case OpKind::BsPassthroughHold:
        break;
      case OpKind::PiPhaseMeasureTag:
        st = pi_phase_route(st, ModeIndex{field_mode(e.target)});
        break;
    }
  }
  require(active.empty(), "schedule left memories occupied");

  std::vector<std::array<int, 2>> labels(d * n);
  std::vector<int> turns(d * n, 0);
  std::vector<std::size_t> mode_map(d * n);
  for (std::size_t f = 0; f < d; ++f) {
    for (std::size_t t = 0; t < n; ++t) {
      labels[f * n + t] = {static_cast<int>(f), static_cast<int>(t)};
      mode_map[f * n + t] = f * n + t;
      turns[f * n + t] = t % 2 == 1 ? 1 : 0;
    }
  }
  ClusterGraph g = ClusterGraph::empty(labels);
  for (std::size_t f = 0; f < d; ++f) {
    for (std::size_t t = 0; t + 1 < n; ++t) {
      g.add_edge(f * n + t, f * n + t + 1);
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t f = 0; f + 1 < d; ++f) {
      g.add_edge(f * n + t, (f + 1) * n + t);
    }
  }
  return ProtocolResult{std::move(st), std::move(g), std::move(mode_map),
                        std::move(turns)};
}

std::string to_text(const Schedule& schedule) {
  std::ostringstream out;
  out << "# tfcv schedule\n";
  out << "# d=" << schedule.d << " n=" << schedule.n
      << " dt=" << fmt_double(schedule.dt)
      << " t_mem=" << fmt_double(schedule.constraints.t_mem)
      << " delta_full=" << fmt_double(schedule.constraints.delta_full) << "\n";
  for (const auto& w : schedule.warnings) {
    out << "# warning=" << w << "\n";
  }
  for (const auto& e : schedule.entries) {
    out << "memory_id=" << e.memory_id << " time_bin=" << e.time_bin
        << " op=" << to_string(e.op) << " freq_index=" << e.target.freq_index
        << " target_bin=" << e.target.time_bin
        << " param=" << fmt_double(e.param)
        << " phase=" << fmt_double(e.phase) << "\n";
  }
  return out.str();
}

namespace {

std::map<std::string, std::string> parse_fields(const std::string& line) {
  std::map<std::string, std::string> fields;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    require(eq != std::string::npos, "malformed schedule field: " + token);
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return fields;
}

}  // namespace

Schedule schedule_from_text(const std::string& text) {
  Schedule s;
  bool header_seen = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    if (line.rfind("# warning=", 0) == 0) {
      s.warnings.push_back(line.substr(std::string("# warning=").size()));
      continue;
    }
    if (line.rfind("# d=", 0) == 0) {
      auto fields = parse_fields(line.substr(2));
      s.d = std::stoul(fields.at("d"));
      s.n = std::stoul(fields.at("n"));
      s.dt = std::stod(fields.at("dt"));
      s.constraints.t_mem = std::stod(fields.at("t_mem"));
      s.constraints.delta_full = std::stod(fields.at("delta_full"));
      header_seen = true;
      continue;
    }
    if (line[0] == '#') {
      continue;
    }
    require(header_seen, "schedule text is missing its parameter header");
    auto fields = parse_fields(line);
    ScheduleEntry e;
    e.memory_id = std::stoi(fields.at("memory_id"));
    e.time_bin = std::stoi(fields.at("time_bin"));
    const auto kind = op_kind_from_string(fields.at("op"));
    require(kind.has_value(), "unknown op kind: " + fields.at("op"));
    e.op = *kind;
    e.target.freq_index = std::stoi(fields.at("freq_index"));
    e.target.time_bin = std::stoi(fields.at("target_bin"));
    e.target.dt = s.dt;
    e.target.dw = 0.5 / s.dt;
    e.param = std::stod(fields.at("param"));
    e.phase = std::stod(fields.at("phase"));
    s.entries.push_back(e);
  }
  require(header_seen, "schedule text is missing its parameter header");
  return s;
}

std::string to_json(const Schedule& schedule) {
  nlohmann::json j;
  j["d"] = schedule.d;
  j["n"] = schedule.n;
  j["dt"] = schedule.dt;
  j["t_mem"] = schedule.constraints.t_mem;
  j["delta_full"] = schedule.constraints.delta_full;
  j["warnings"] = schedule.warnings;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : schedule.entries) {
    j["entries"].push_back({{"memory_id", e.memory_id},
                            {"time_bin", e.time_bin},
                            {"op", to_string(e.op)},
                            {"freq_index", e.target.freq_index},
                            {"target_bin", e.target.time_bin},
                            {"param", e.param},
                            {"phase", e.phase}});
  }
  return j.dump(2);
}

Schedule schedule_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Schedule s;
  s.d = j.at("d").get<std::size_t>();
  s.n = j.at("n").get<std::size_t>();
  s.dt = j.at("dt").get<double>();
  s.constraints.t_mem = j.at("t_mem").get<double>();
  s.constraints.delta_full = j.at("delta_full").get<double>();
  s.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (const auto& je : j.at("entries")) {
    ScheduleEntry e;
    e.memory_id = je.at("memory_id").get<int>();
    e.time_bin = je.at("time_bin").get<int>();
    const auto kind = op_kind_from_string(je.at("op").get<std::string>());
    require(kind.has_value(), "unknown op kind in JSON schedule");
    e.op = *kind;
    e.target.freq_index = je.at("freq_index").get<int>();
    e.target.time_bin = je.at("target_bin").get<int>();
    e.target.dt = s.dt;
    e.target.dw = 0.5 / s.dt;
    e.param = je.at("param").get<double>();
    e.phase = je.at("phase").get<double>();
    s.entries.push_back(e);
  }
  return s;
}

}  // namespace tfcv
