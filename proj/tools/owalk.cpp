// owalk: command-line front end for the dephased-walk library.
//
// Subcommands: spectrum | sweep | relax | locate. Parameters come from an
// optional JSON config file plus flag overrides (flags win). Every run writes
// its data files and a manifest.json with the resolved config and FNV-1a
// checksums of the outputs. Exit codes: 0 success, 2 config error,
// 3 numerical failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "openwalk/dynamics.hpp"
#include "openwalk/transitions.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace owalk;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------- config ----

struct Config {
  std::string model = "ring";
  double j1 = 1.0, j2 = 1.0, j3 = 0.5, phi = 0.0;
  int L = 3;
  double beta = 0.5;
  double q = 1.0;
  double beta_min = 0.1, beta_max = 1.0;
  int grid = 201;
  int steps = 60;
  int init_site = 0;
  std::string scan = "beta";
  std::vector<int> sizes{3, 4, 5};
};

void to_json(json& j, const Config& c) {
  j = json{{"model", c.model},     {"j1", c.j1},
           {"j2", c.j2},           {"j3", c.j3},
           {"phi", c.phi},         {"L", c.L},
           {"beta", c.beta},       {"q", c.q},
           {"beta_min", c.beta_min}, {"beta_max", c.beta_max},
           {"grid", c.grid},       {"steps", c.steps},
           {"init_site", c.init_site}, {"scan", c.scan},
           {"sizes", c.sizes}};
}

void from_json(const json& j, Config& c) {
  c.model = j.value("model", c.model);
  c.j1 = j.value("j1", c.j1);
  c.j2 = j.value("j2", c.j2);
  c.j3 = j.value("j3", c.j3);
  c.phi = j.value("phi", c.phi);
  c.L = j.value("L", c.L);
  c.beta = j.value("beta", c.beta);
  c.q = j.value("q", c.q);
  c.beta_min = j.value("beta_min", c.beta_min);
  c.beta_max = j.value("beta_max", c.beta_max);
  c.grid = j.value("grid", c.grid);
  c.steps = j.value("steps", c.steps);
  c.init_site = j.value("init_site", c.init_site);
  c.scan = j.value("scan", c.scan);
  c.sizes = j.value("sizes", c.sizes);
}

void validate(const Config& c) {
  if (c.model != "ring" && c.model != "coined")
    throw InvariantError("config: model must be 'ring' or 'coined'");
  if (c.q < 0.0 || c.q > 1.0) throw InvariantError("config: q outside [0,1]");
  if (c.grid < 2) throw InvariantError("config: grid size must be >= 2");
  if (!(c.beta_min < c.beta_max))
    throw InvariantError("config: beta window is empty");
  if (c.steps < 0 || c.steps > dynamics::kMaxSteps)
    throw InvariantError("config: steps outside [0, 500]");
  if (c.scan != "beta" && c.scan != "qc" && c.scan != "size")
    throw InvariantError("config: scan must be beta, qc or size");
  for (int L : c.sizes)
    if (L < 3) throw InvariantError("config: sizes entries must be >= 3");
  const int dim = c.model == "ring" ? 3 : 2 * c.L;
  if (c.init_site < 0 || c.init_site >= dim)
    throw InvariantError("config: init_site outside the state space");
}

transitions::Model make_model(const Config& c) {
  if (c.model == "ring")
    return models::RingModel(c.j1, c.j2, c.j3, c.phi);
  return models::CoinedWalkModel(c.L, c.beta);
}

// --------------------------------------------------------------- output -----

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json vector_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw InvariantError("cannot open output file: " + name);
    f << content;
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(content)));
    checksums_[name] = buf;
  }

  void write_manifest(const std::string& command, const Config& cfg) {
    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    json m{{"version", kVersion},
           {"command", command},
           {"config", cfg},
           {"timestamp", stamp},
           {"outputs", checksums_}};
    std::ofstream f(dir_ / "manifest.json", std::ios::binary);
    f << m.dump(2) << "\n";
  }

 private:
  fs::path dir_;
  json checksums_ = json::object();
};

// ------------------------------------------------------------- commands -----

void cmd_spectrum(const Config& cfg, OutputSet& out) {
  const transitions::Model model = make_model(cfg);
  const spectral::SpectralDecomposition d =
      transitions::decompose_at(model, cfg.beta, cfg.q);
  const double db = spectral::detailed_balance_residual(
      transitions::build_markov(model, cfg.beta));

  json j{{"beta", cfg.beta},
         {"q", cfg.q},
         {"dim", d.dim()},
         {"eigenvalues", json::array()},
         {"floquet", json::array()},
         {"right_eigenvectors", json::array()},
         {"biorthonormal", d.biorthonormal},
         {"near_ep", d.near_ep},
         {"db_residual", db}};
  for (Eigen::Index n = 0; n < d.dim(); ++n) {
    j["eigenvalues"].push_back(complex_json(d.eigenvalues(n)));
    j["floquet"].push_back(complex_json(d.floquet(n)));
    j["right_eigenvectors"].push_back(vector_json(d.right.col(n)));
  }
  out.write("spectrum.json", j.dump(2) + "\n");
}

void cmd_sweep(const Config& cfg, OutputSet& out, int threads) {
  const transitions::Model model = make_model(cfg);
  std::vector<double> grid(static_cast<size_t>(cfg.grid));
  for (int k = 0; k < cfg.grid; ++k)
    grid[size_t(k)] =
        cfg.beta_min + (cfg.beta_max - cfg.beta_min) * double(k) / double(cfg.grid - 1);
  const transitions::SweepTable table = transitions::sweep(model, grid, cfg.q, threads);

  std::ostringstream csv;
  csv << "beta,re_lambda2,im_lambda2,re_lambda3,im_lambda3,g,db_residual\n";
  for (const auto& rec : table.records)
    csv << fmt(rec.beta) << ',' << fmt(rec.lambda2.real()) << ','
        << fmt(rec.lambda2.imag()) << ',' << fmt(rec.lambda3.real()) << ','
        << fmt(rec.lambda3.imag()) << ',' << fmt(rec.g) << ','
        << fmt(rec.db_residual) << '\n';
  out.write("sweep.csv", csv.str());
}

void cmd_relax(const Config& cfg, OutputSet& out) {
  const transitions::Model model = make_model(cfg);
  const bool coined = cfg.model == "coined";
  const int L = cfg.L;
  std::vector<ProbabilityVector> pops;
  std::vector<double> coh;

  if (cfg.q == 1.0) {
    const StochasticMatrix q = transitions::build_markov(model, cfg.beta);
    const auto traj = dynamics::relax_classical(
        q, ProbabilityVector::site(q.dim(), cfg.init_site), cfg.steps);
    pops = traj.steps;
  } else {
    const SuperoperatorMatrix m =
        transitions::build_liouvillian(model, cfg.beta, cfg.q);
    const auto traj = dynamics::relax_quantum(
        m, DensityMatrix::site_excitation(m.state_dim(), cfg.init_site), cfg.steps);
    for (const auto& rho : traj.steps) {
      pops.push_back(dynamics::populations(rho));
      double c = 0.0;
      for (Eigen::Index i = 0; i < rho.dim(); ++i)
        for (Eigen::Index jj = 0; jj < rho.dim(); ++jj)
          if (i != jj) c = std::max(c, std::abs(rho.matrix()(i, jj)));
      coh.push_back(c);
    }
  }

  std::ostringstream csv;
  csv << "step";
  for (Eigen::Index n = 0; n < pops.front().dim(); ++n) csv << ",p_" << (n + 1);
  if (!coh.empty()) csv << ",coh_norm";
  csv << '\n';
  for (size_t k = 0; k < pops.size(); ++k) {
    csv << k;
    for (Eigen::Index n = 0; n < pops[k].dim(); ++n) csv << ',' << fmt(pops[k][n]);
    if (!coh.empty()) csv << ',' << fmt(coh[k]);
    csv << '\n';
  }
  out.write("relax.csv", csv.str());

  if (coined) {
    std::ostringstream mcsv;
    mcsv << "step";
    for (int l = 1; l <= L; ++l) mcsv << ",p_site_" << l;
    mcsv << '\n';
    for (size_t k = 0; k < pops.size(); ++k) {
      const ProbabilityVector m = dynamics::marginals(pops[k], L);
      mcsv << k;
      for (Eigen::Index l = 0; l < m.dim(); ++l) mcsv << ',' << fmt(m[l]);
      mcsv << '\n';
    }
    out.write("relax_marginal.csv", mcsv.str());
  }
}

void cmd_locate(const Config& cfg, OutputSet& out) {
  const transitions::Model model = make_model(cfg);
  json j{{"scan", cfg.scan}};
  if (cfg.scan == "beta") {
    const transitions::TransitionReport rep =
        transitions::locate_crossing(model, cfg.beta_min, cfg.beta_max, cfg.q);
    j["order"] = transitions::to_string(rep.order);
    j["note"] = rep.note;
    if (rep.order != transitions::TransitionOrder::None) {
      j["beta_c"] = rep.beta_c;
      j["g_at_critical"] = rep.g_at_critical;
      j["bracket_width"] = rep.bracket_width;
      j["r2"] = vector_json(rep.r2);
      j["r3"] = vector_json(rep.r3);
    }
  } else if (cfg.scan == "qc") {
    const transitions::QcResult qc =
        transitions::locate_qc(model, cfg.beta_min, cfg.beta_max);
    j["found"] = qc.found;
    j["note"] = qc.note;
    if (qc.found) {
      j["q_c"] = qc.q_c;
      json drift = json::array();
      for (const auto& [q, bc] : qc.beta_c_of_q) drift.push_back(json::array({q, bc}));
      j["beta_c_of_q"] = drift;
    }
  } else {  // size
    json results = json::array();
    for (const auto& [L, bc] : transitions::size_scan(cfg.sizes))
      results.push_back(json::array({L, bc}));
    j["results"] = results;
  }
  out.write("locate.json", j.dump(2) + "\n");
}

// ------------------------------------------------------------------ main ----

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  int threads = int(std::max(1u, std::thread::hardware_concurrency()));
  Config flags;
  CLI::Option *o_model = nullptr, *o_j1 = nullptr, *o_j2 = nullptr, *o_j3 = nullptr,
              *o_phi = nullptr, *o_L = nullptr, *o_beta = nullptr, *o_q = nullptr,
              *o_bmin = nullptr, *o_bmax = nullptr, *o_grid = nullptr,
              *o_steps = nullptr, *o_init = nullptr, *o_scan = nullptr,
              *o_sizes = nullptr;
};

void add_common(CLI::App* sub, CommonOpts& c) {
  sub->add_option("--config", c.config_path, "JSON config file");
  sub->add_option("--out", c.out_dir, "output directory");
  sub->add_option("--threads", c.threads, "worker threads for sweeps");
  c.o_model = sub->add_option("--model", c.flags.model, "ring | coined");
  c.o_j1 = sub->add_option("--j1", c.flags.j1, "ring hopping J1");
  c.o_j2 = sub->add_option("--j2", c.flags.j2, "ring hopping J2");
  c.o_j3 = sub->add_option("--j3", c.flags.j3, "ring hopping J3");
  c.o_phi = sub->add_option("--phi", c.flags.phi, "ring gauge phase (rad)");
  c.o_L = sub->add_option("--L", c.flags.L, "coined-walk length");
  c.o_beta = sub->add_option("--beta", c.flags.beta, "control parameter beta");
  c.o_q = sub->add_option("--q", c.flags.q, "dephasing probability");
  c.o_bmin = sub->add_option("--beta-min", c.flags.beta_min, "window start");
  c.o_bmax = sub->add_option("--beta-max", c.flags.beta_max, "window end");
  c.o_grid = sub->add_option("--grid", c.flags.grid, "sweep grid points");
  c.o_steps = sub->add_option("--steps", c.flags.steps, "relaxation steps");
  c.o_init = sub->add_option("--init-site", c.flags.init_site,
                             "initial basis state (0-based)");
  c.o_scan = sub->add_option("--scan", c.flags.scan, "locate scan: beta | qc | size");
  c.o_sizes = sub->add_option("--sizes", c.flags.sizes, "size-scan lengths");
}

Config resolve(const CommonOpts& c) {
  Config cfg;
  if (!c.config_path.empty()) {
    std::ifstream f(c.config_path);
    if (!f) throw InvariantError("config: cannot open " + c.config_path);
    json j;
    f >> j;
    cfg = j.get<Config>();
  }
  if (c.o_model->count()) cfg.model = c.flags.model;
  if (c.o_j1->count()) cfg.j1 = c.flags.j1;
  if (c.o_j2->count()) cfg.j2 = c.flags.j2;
  if (c.o_j3->count()) cfg.j3 = c.flags.j3;
  if (c.o_phi->count()) cfg.phi = c.flags.phi;
  if (c.o_L->count()) cfg.L = c.flags.L;
  if (c.o_beta->count()) cfg.beta = c.flags.beta;
  if (c.o_q->count()) cfg.q = c.flags.q;
  if (c.o_bmin->count()) cfg.beta_min = c.flags.beta_min;
  if (c.o_bmax->count()) cfg.beta_max = c.flags.beta_max;
  if (c.o_grid->count()) cfg.grid = c.flags.grid;
  if (c.o_steps->count()) cfg.steps = c.flags.steps;
  if (c.o_init->count()) cfg.init_site = c.flags.init_site;
  if (c.o_scan->count()) cfg.scan = c.flags.scan;
  if (c.o_sizes->count()) cfg.sizes = c.flags.sizes;
  validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dephased-walk spectral analysis tool"};
  app.require_subcommand(1);

  CommonOpts spectrum_opts, sweep_opts, relax_opts, locate_opts;
  CLI::App* s_spectrum = app.add_subcommand("spectrum", "spectrum at one point");
  CLI::App* s_sweep = app.add_subcommand("sweep", "spectral sweep over beta");
  CLI::App* s_relax = app.add_subcommand("relax", "relaxation trajectory");
  CLI::App* s_locate = app.add_subcommand("locate", "critical point scans");
  add_common(s_spectrum, spectrum_opts);
  add_common(s_sweep, sweep_opts);
  add_common(s_relax, relax_opts);
  add_common(s_locate, locate_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (s_spectrum->parsed()) {
      const Config cfg = resolve(spectrum_opts);
      OutputSet out{spectrum_opts.out_dir};
      cmd_spectrum(cfg, out);
      out.write_manifest("spectrum", cfg);
    } else if (s_sweep->parsed()) {
      const Config cfg = resolve(sweep_opts);
      OutputSet out{sweep_opts.out_dir};
      cmd_sweep(cfg, out, sweep_opts.threads);
      out.write_manifest("sweep", cfg);
    } else if (s_relax->parsed()) {
      const Config cfg = resolve(relax_opts);
      OutputSet out{relax_opts.out_dir};
      cmd_relax(cfg, out);
      out.write_manifest("relax", cfg);
    } else if (s_locate->parsed()) {
      const Config cfg = resolve(locate_opts);
      OutputSet out{locate_opts.out_dir};
      cmd_locate(cfg, out);
      out.write_manifest("locate", cfg);
    }
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const InvariantError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  return 0;
}
