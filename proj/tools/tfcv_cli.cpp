#include "tfcv/scheduler.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <set>
#include <thread>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitInvalidInput = 2;

struct GridRow {
  double db = 0.0;
  double eta = 0.0;
  double f_closed = 0.0;
  double f_numeric = 0.0;
};

std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) {
    out[i] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
  }
  return out;
}

std::vector<double> logspace(double lo, double hi, int steps) {
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) {
    out[i] = steps == 1 ? lo
                        : lo * std::pow(hi / lo,
                                        static_cast<double>(i) / (steps - 1));
  }
  return out;
}

int cmd_fidelity_grid(const std::string& protocol, double db_min,
                      double db_max, int db_steps, double eta_min,
                      double eta_max, int eta_steps,
                      const std::string& eta_scale, const std::string& out,
                      int jobs, unsigned seed) {
  if (db_steps < 1 || eta_steps < 1 || db_min > db_max || eta_min > eta_max) {
    std::cerr << "invalid grid ranges\n";
    return kExitInvalidInput;
  }
  if (eta_scale == "log" && eta_min <= 0.0) {
    std::cerr << "log eta scale requires a positive minimum\n";
    return kExitInvalidInput;
  }
  const bool two_qumode = protocol == "two_qumode";
  const auto dbs = linspace(db_min, db_max, db_steps);
  const auto etas = eta_scale == "log" ? logspace(eta_min, eta_max, eta_steps)
                                       : linspace(eta_min, eta_max, eta_steps);

  std::vector<GridRow> rows(dbs.size() * etas.size());
  const int workers = std::max(1, jobs);
  auto worker = [&](int w) {
    for (std::size_t idx = w; idx < rows.size(); idx += workers) {
      const double db = dbs[idx / etas.size()];
      const double eta = etas[idx % etas.size()];
      GridRow row{db, eta, 0.0, 0.0};
      if (two_qumode) {
        row.f_closed = tfcv::two_qumode_fidelity_closed_form(db, eta);
        row.f_numeric = tfcv::two_qumode_fidelity_numeric(db, eta);
      } else {
        row.f_closed = tfcv::cz_fidelity_closed_form(db, eta);
        row.f_numeric = tfcv::cz_fidelity_numeric(db, eta);
      }
      rows[idx] = row;
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) {
    pool.emplace_back(worker, w);
  }
  worker(0);
  for (auto& t : pool) {
    t.join();
  }

  std::ofstream file(out);
  if (!file) {
    std::cerr << "cannot write " << out << "\n";
    return kExitInvalidInput;
  }
  char buf[256];
  file << "# tfcv fidelity grid\n";
  std::snprintf(buf, sizeof(buf),
                "# protocol=%s db_min=%g db_max=%g db_steps=%d eta_min=%g "
                "eta_max=%g eta_steps=%d eta_scale=%s jobs=%d seed=%u\n",
                protocol.c_str(), db_min, db_max, db_steps, eta_min, eta_max,
                eta_steps, eta_scale.c_str(), jobs, seed);
  file << buf;
  file << "# conventions: vacuum_variance=0.5 quadrature_order=q1,p1,q2,p2 "
          "fidelity=uhlmann_squared squeezing_r=db*ln(10)/20\n";
  file << "db,delta_eta,f_closed_form,f_numeric,abs_diff\n";
  double worst = 0.0;
  for (const auto& row : rows) {
    const double diff = std::abs(row.f_closed - row.f_numeric);
    worst = std::max(worst, diff);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.3e\n", row.db,
                  row.eta, row.f_closed, row.f_numeric, diff);
    file << buf;
  }
  std::cout << "wrote " << rows.size() << " rows to " << out
            << "; worst |f_closed - f_numeric| = " << worst << "\n";
  if (worst > 1e-6) {
    std::cerr << "closed form and numeric pipeline disagree beyond 1e-6\n";
    return kExitVerificationFailure;
  }
  return kExitOk;
}

int cmd_cz_verify() {
  const auto seq = tfcv::cz_sequence();
  const auto composed = tfcv::compose_sequence(seq);
  const auto ideal = tfcv::cz_bogoliubov();
  const double residual =
      std::max((composed.A - ideal.A).cwiseAbs().maxCoeff(),
               (composed.B - ideal.B).cwiseAbs().maxCoeff());
  const double coupling = std::pow(std::sin(seq.bs_in.phi), 2.0);
  const double tms_db = 20.0 * seq.tms.r / std::log(10.0);
  std::printf("composed-vs-ideal residual: %.3e\n", residual);
  std::printf("beam-splitter coupling sin^2(phi') = %.6f\n", coupling);
  std::printf("two-mode squeezing: %.4f dB (r = %.6f)\n", tms_db, seq.tms.r);
  if (residual >= 1e-10) {
    std::fprintf(stderr, "gate synthesis residual exceeds 1e-10\n");
    return kExitVerificationFailure;
  }
  return kExitOk;
}

int cmd_build_cluster(std::size_t d, std::size_t n, double db, double eta,
                      const std::string& out) {
  const double r = tfcv::db_to_r(db);
  const auto result = tfcv::build_2d_cluster(d, n, r, eta);
  const auto reference = tfcv::build_2d_cluster(d, n, r, 0.0);
  const tfcv::Vec vars = tfcv::nullifier_variances(result);
  const double f = tfcv::fidelity(result.state, reference.state);

  std::string report;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "lattice d=%zu n=%zu squeezing=%g dB delta_eta=%g\n", d, n, db,
                eta);
  report += buf;
  std::snprintf(buf, sizeof(buf), "memory count: %zu (7d-3)\n",
                tfcv::memory_count(d));
  report += buf;
  std::snprintf(buf, sizeof(buf), "fidelity to lossless reference: %.12f\n",
                f);
  report += buf;
  report += "nullifier variances:\n";
  for (Eigen::Index i = 0; i < vars.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "  node (%d,%d): %.6e\n",
                  result.graph.labels[i][0], result.graph.labels[i][1],
                  vars(i));
    report += buf;
  }
  std::cout << report;
  if (!out.empty()) {
    std::ofstream file(out);
    if (!file) {
      std::cerr << "cannot write " << out << "\n";
      return kExitInvalidInput;
    }
    file << report;
  }
  return kExitOk;
}

int cmd_schedule(std::size_t d, std::size_t n, double dt, double t_mem,
                 double delta_full, const std::string& out,
                 const std::string& format) {
  const tfcv::ArchitectureConstraints constraints{t_mem, delta_full};
  const tfcv::Schedule schedule = tfcv::compile(d, n, constraints, dt);
  for (const auto& w : schedule.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  const auto report = tfcv::validate(schedule);
  if (!report.valid) {
    for (const auto& diag : report.diagnostics) {
      std::cerr << diag << "\n";
    }
    return kExitVerificationFailure;
  }
  if (format == "text" || format == "both") {
    std::ofstream file(out + ".txt");
    if (!file) {
      std::cerr << "cannot write " << out << ".txt\n";
      return kExitInvalidInput;
    }
    file << tfcv::to_text(schedule);
  }
  if (format == "json" || format == "both") {
    std::ofstream file(out + ".json");
    if (!file) {
      std::cerr << "cannot write " << out << ".json\n";
      return kExitInvalidInput;
    }
    file << tfcv::to_json(schedule) << "\n";
  }
  std::set<int> ids;
  for (const auto& e : schedule.entries) {
    ids.insert(e.memory_id);
  }
  std::cout << "schedule: " << schedule.entries.size() << " entries, "
            << ids.size() << " memories (7d-3 = " << tfcv::memory_count(d)
            << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-frequency cluster-state simulator"};
  app.require_subcommand(1);

  auto* grid = app.add_subcommand(
      "fidelity-grid", "sweep closed-form vs numeric fidelity over (dB, eta)");
  std::string protocol = "two_qumode";
  double db_min = 0.0, db_max = 20.0, eta_min = 1e-6, eta_max = 1e-1;
  int db_steps = 21, eta_steps = 21, jobs = 1;
  unsigned seed = 0;
  std::string eta_scale = "log";
  std::string grid_out = "fidelity_grid.csv";
  grid->add_option("--protocol", protocol, "two_qumode or cz")
      ->check(CLI::IsMember({"two_qumode", "cz"}));
  grid->add_option("--db-min", db_min);
  grid->add_option("--db-max", db_max);
  grid->add_option("--db-steps", db_steps);
  grid->add_option("--eta-min", eta_min);
  grid->add_option("--eta-max", eta_max);
  grid->add_option("--eta-steps", eta_steps);
  grid->add_option("--eta-scale", eta_scale, "linear or log")
      ->check(CLI::IsMember({"linear", "log"}));
  grid->add_option("--out", grid_out);
  grid->add_option("--jobs", jobs);
  grid->add_option("--seed", seed, "recorded in the output header");

  auto* verify = app.add_subcommand(
      "cz-verify", "check the memory synthesis of the two-qumode gate");

  auto* build = app.add_subcommand("build-cluster",
                                   "build a d x n lattice and report "
                                   "nullifiers and fidelity");
  std::size_t d = 2, n = 2;
  double db = 10.0, eta = 0.0;
  std::string build_out;
  build->add_option("--d", d, "frequency rows");
  build->add_option("--n", n, "time bins");
  build->add_option("--db", db, "squeezing in dB");
  build->add_option("--eta", eta, "transfer deviation delta_eta");
  build->add_option("--out", build_out);

  auto* sched = app.add_subcommand("schedule",
                                   "compile a lattice to a memory schedule");
  double dt = 1e-9, t_mem = 1e-7, delta_full = 5e10;
  std::string sched_out = "schedule";
  std::string sched_format = "both";
  sched->add_option("--d", d, "frequency rows");
  sched->add_option("--n", n, "time bins");
  sched->add_option("--dt", dt, "time-bin duration, seconds");
  sched->add_option("--tmem", t_mem, "memory coherence time, seconds");
  sched->add_option("--delta-full", delta_full,
                    "accessible frequency range, rad/s");
  sched->add_option("--out", sched_out, "output base name");
  sched->add_option("--format", sched_format, "text, json or both")
      ->check(CLI::IsMember({"text", "json", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (grid->parsed()) {
      return cmd_fidelity_grid(protocol, db_min, db_max, db_steps, eta_min,
                               eta_max, eta_steps, eta_scale, grid_out, jobs,
                               seed);
    }
    if (verify->parsed()) {
      return cmd_cz_verify();
    }
    if (build->parsed()) {
      return cmd_build_cluster(d, n, db, eta, build_out);
    }
    if (sched->parsed()) {
      return cmd_schedule(d, n, dt, t_mem, delta_full, sched_out,
                          sched_format);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailure;
  }
  return kExitInvalidInput;
}
