// Command-line driver for the entanglement-Virasoro pipeline. Talks to the
// library exclusively through the C API in entvir/entvir.h; all file layout,
// formatting and concurrency live here.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "entvir/entvir.h"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void bail(int status, const std::string& context) {
  const int code =
      status == ENTVIR_ERR_INVALID ? kExitValidation : kExitNumeric;
  throw CliError{code, context + ": " + entvir_last_error()};
}

void check(int status, const std::string& context) {
  if (status != ENTVIR_OK) bail(status, context);
}

// Fixed 12-significant-digit formatting: values are rounded through the
// decimal representation so repeated runs serialize byte-identically.
double r12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

json round_array(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(r12(x));
  return arr;
}

struct RunConfig {
  std::string model = "ising";
  double lambda = 0.0, gamma = 0.0;
  bool custom = false;
  std::vector<long> sizes;
  int num_states = 7;
  std::vector<int> modes = {0, 1, 2};
  double epsilon = -1.0;  // <= 0: fit
  std::string out_dir = ".";
  std::string format = "json";
};

struct ModelHandle {
  entvir_model* m = nullptr;
  ~ModelHandle() { entvir_model_free(m); }
};

struct RunHandle {
  entvir_run* r = nullptr;
  ~RunHandle() { entvir_run_free(r); }
};

struct TablesHandle {
  entvir_tables* t = nullptr;
  ~TablesHandle() { entvir_tables_free(t); }
};

void open_model(const RunConfig& cfg, ModelHandle& h) {
  if (cfg.custom)
    check(entvir_model_custom(cfg.lambda, cfg.gamma, &h.m), "model");
  else
    check(entvir_model_preset(cfg.model.c_str(), &h.m), "model");
}

std::string model_tag(const RunConfig& cfg, const ModelHandle& h) {
  if (!cfg.custom) return cfg.model;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "lam%g_gam%g", entvir_model_lambda(h.m),
                entvir_model_gamma(h.m));
  return buf;
}

json meta_block(const RunConfig& cfg, const ModelHandle& h, long size,
                double epsilon) {
  json meta;
  meta["model"] = model_tag(cfg, h);
  meta["lambda"] = r12(entvir_model_lambda(h.m));
  meta["gamma"] = r12(entvir_model_gamma(h.m));
  meta["size"] = size;
  if (epsilon > 0) {
    meta["epsilon"] = r12(epsilon);
    if (size > 0) meta["l"] = r12(std::log(size / epsilon));
  }
  return meta;
}

void write_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw CliError{kExitValidation, "cannot write " + tmp.string()};
    os << contents;
  }
  fs::rename(tmp, path);
}

void write_json(const fs::path& path, const json& j) {
  write_atomic(path, j.dump(2) + "\n");
}

std::string csv_row(const std::vector<double>& vals) {
  std::string row;
  char buf[40];
  for (size_t i = 0; i < vals.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g", vals[i]);
    if (i) row += ",";
    row += buf;
  }
  return row;
}

int thread_budget() {
  if (const char* env = std::getenv("ENTVIR_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(size) over the ladder on a small worker pool; BLAS-level threads
// are scaled down so pool * blas stays within the budget.
void for_each_size(const std::vector<long>& sizes,
                   const std::function<void(long)>& fn) {
  const int budget = thread_budget();
  const int pool =
      std::max(1, std::min<int>(budget, static_cast<int>(sizes.size())));
  if (pool > 1) {
    const int per = std::max(1, budget / pool);
    setenv("ENTVIR_THREADS", std::to_string(per).c_str(), 1);
  }
  std::atomic<size_t> next{0};
  std::vector<std::future<void>> workers;
  for (int t = 0; t < pool; ++t)
    workers.push_back(std::async(std::launch::async, [&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= sizes.size()) return;
        fn(sizes[i]);
      }
    }));
  for (auto& w : workers) w.get();
  if (pool > 1) setenv("ENTVIR_THREADS", std::to_string(budget).c_str(), 1);
}

std::vector<long> default_ladder(const ModelHandle& h) {
  return entvir_model_universality(h.m) == 2
             ? std::vector<long>{512, 1024, 2048, 4096}
             : std::vector<long>{64, 128, 256, 512, 1024};
}

// Gap of every size, computed spectrum-only.
std::map<long, double> compute_gaps(const ModelHandle& h,
                                    const std::vector<long>& sizes) {
  std::map<long, double> gaps;
  std::mutex mu;
  for_each_size(sizes, [&](long size) {
    RunHandle run;
    check(entvir_run_compute(h.m, size, 1, 0, &run.r), "run");
    const double gap = entvir_run_gap(run.r);
    std::lock_guard<std::mutex> lock(mu);
    gaps[size] = gap;
  });
  return gaps;
}

double fit_from_gaps(const std::map<long, double>& gaps, double* slope = nullptr,
                     double* intercept = nullptr) {
  std::vector<int64_t> sizes;
  std::vector<double> g;
  for (const auto& [size, gap] : gaps) {
    sizes.push_back(size);
    g.push_back(gap);
  }
  double eps = 0;
  check(entvir_fit_epsilon(sizes.data(), g.data(),
                           static_cast<int32_t>(sizes.size()), &eps, slope,
                           intercept),
        "fit-epsilon");
  return eps;
}

// Resolve the UV parameter: explicit flag, else fit over the requested
// ladder, else fit over the model's standard ladder.
double resolve_epsilon(const RunConfig& cfg, const ModelHandle& h) {
  if (cfg.epsilon > 0) return cfg.epsilon;
  const std::vector<long> ladder =
      cfg.sizes.size() >= 3 ? cfg.sizes : default_ladder(h);
  return fit_from_gaps(compute_gaps(h, ladder));
}

// ---- spectrum ----

int cmd_spectrum(const RunConfig& cfg) {
  ModelHandle h;
  open_model(cfg, h);
  const double epsilon = resolve_epsilon(cfg, h);
  fs::create_directories(cfg.out_dir);

  for_each_size(cfg.sizes, [&](long size) {
    RunHandle run;
    check(entvir_run_compute(h.m, size, cfg.num_states, 0, &run.r), "run");

    const int32_t k = entvir_run_num_states(run.r);
    std::vector<double> energies(k), weights(k), dims(k);
    entvir_run_energies(run.r, energies.data(), k);
    entvir_run_weights(run.r, weights.data(), k);
    entvir_run_rescaled(run.r, epsilon, dims.data(), k);
    const int64_t n_modes = std::min<int64_t>(size, std::max(16, 2 * k));
    std::vector<double> modes(n_modes);
    entvir_run_single_particle(run.r, modes.data(), n_modes);

    const std::string stem =
        "spectrum_" + model_tag(cfg, h) + "_" + std::to_string(size);
    if (cfg.format == "json") {
      json out;
      out["meta"] = meta_block(cfg, h, size, epsilon);
      out["data"]["single_particle"] = round_array(modes);
      out["data"]["energies"] = round_array(energies);
      out["data"]["weights"] = round_array(weights);
      out["data"]["h"] = round_array(dims);
      out["data"]["entropy"] = r12(entvir_run_entropy(run.r));
      out["data"]["gap"] = r12(entvir_run_gap(run.r));
      write_json(fs::path(cfg.out_dir) / (stem + ".json"), out);
    } else {
      std::string csv = "alpha,energy,weight,h\n";
      for (int a = 0; a < k; ++a)
        csv += std::to_string(a + 1) + "," +
               csv_row({energies[a], weights[a], dims[a]}) + "\n";
      write_atomic(fs::path(cfg.out_dir) / (stem + "_states.csv"), csv);
      std::string mcsv = "mode,energy\n";
      for (int64_t i = 0; i < n_modes; ++i)
        mcsv += std::to_string(i + 1) + "," + csv_row({modes[i]}) + "\n";
      write_atomic(fs::path(cfg.out_dir) / (stem + "_modes.csv"), mcsv);
    }
  });
  return kExitOk;
}

// ---- fit-epsilon ----

int cmd_fit_epsilon(const RunConfig& cfg) {
  ModelHandle h;
  open_model(cfg, h);
  const std::vector<long> sizes =
      cfg.sizes.empty() ? default_ladder(h) : cfg.sizes;
  const auto gaps = compute_gaps(h, sizes);
  double slope = 0, intercept = 0;
  const double eps = fit_from_gaps(gaps, &slope, &intercept);

  fs::create_directories(cfg.out_dir);
  const std::string stem = "fit_epsilon_" + model_tag(cfg, h);
  if (cfg.format == "json") {
    json out;
    out["meta"] = meta_block(cfg, h, 0, eps);
    out["meta"].erase("size");
    out["data"]["sizes"] = sizes;
    json pts = json::array();
    for (const auto& [size, gap] : gaps) {
      json p;
      p["log_size"] = r12(std::log(static_cast<double>(size)));
      p["inv_gap"] = r12(1.0 / gap);
      p["gap"] = r12(gap);
      pts.push_back(p);
    }
    out["data"]["points"] = pts;
    out["data"]["slope"] = r12(slope);
    out["data"]["intercept"] = r12(intercept);
    out["data"]["epsilon"] = r12(eps);
    write_json(fs::path(cfg.out_dir) / (stem + ".json"), out);
  } else {
    std::string csv = "size,log_size,gap,inv_gap\n";
    for (const auto& [size, gap] : gaps)
      csv += std::to_string(size) + "," +
             csv_row({std::log(static_cast<double>(size)), gap, 1.0 / gap}) +
             "\n";
    csv += "# epsilon," + csv_row({eps}) + "\n";
    write_atomic(fs::path(cfg.out_dir) / (stem + ".csv"), csv);
  }
  std::printf("epsilon = %.6g\n", eps);
  return kExitOk;
}

// ---- virasoro ----

json complex_table_json(const std::vector<double>& buf, int k) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < k; ++i) {
    json rrow = json::array(), irow = json::array();
    for (int j = 0; j < k; ++j) {
      rrow.push_back(r12(buf[2 * (k * i + j)]));
      irow.push_back(r12(buf[2 * (k * i + j) + 1]));
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  json out;
  out["re"] = re;
  out["im"] = im;
  return out;
}

std::string complex_table_csv(const std::vector<double>& buf, int k) {
  std::string csv = "alpha\\alpha'";
  for (int j = 0; j < k; ++j)
    csv += ",re_" + std::to_string(j + 1) + ",im_" + std::to_string(j + 1);
  csv += "\n";
  for (int i = 0; i < k; ++i) {
    std::vector<double> row;
    for (int j = 0; j < k; ++j) {
      row.push_back(buf[2 * (k * i + j)]);
      row.push_back(buf[2 * (k * i + j) + 1]);
    }
    csv += std::to_string(i + 1) + "," + csv_row(row) + "\n";
  }
  return csv;
}

int cmd_virasoro(const RunConfig& cfg) {
  ModelHandle h;
  open_model(cfg, h);
  const double epsilon = resolve_epsilon(cfg, h);
  fs::create_directories(cfg.out_dir);

  const int universality = entvir_model_universality(h.m);
  if (universality == 0)
    throw CliError{kExitValidation,
                   "virasoro tables need a critical model preset or point"};

  const int k = cfg.num_states;
  // |F| per (n, alpha, alpha') collected across sizes for the decay curves.
  std::map<long, std::map<int, std::vector<double>>> fabs;
  std::mutex mu;

  for_each_size(cfg.sizes, [&](long size) {
    RunHandle run;
    check(entvir_run_compute(h.m, size, k, 1, &run.r), "run");
    TablesHandle tables;
    std::vector<int32_t> modes(cfg.modes.begin(), cfg.modes.end());
    check(entvir_tables_compute(run.r, epsilon, modes.data(),
                                static_cast<int32_t>(modes.size()), &tables.t),
          "tables");

    json out;
    out["meta"] = meta_block(cfg, h, size, epsilon);
    std::vector<int32_t> matching(k);
    check(entvir_tables_matching(tables.t, matching.data(), k), "matching");
    out["data"]["matching"] = matching;

    std::vector<double> buf(2 * k * k);
    json jtables = json::array();
    std::map<int, std::vector<double>> fa;
    for (int n : cfg.modes) {
      json jt;
      jt["n"] = n;
      static const char* kinds[4] = {"lattice", "aligned", "cft", "corrections"};
      for (int kind = 0; kind < 4; ++kind) {
        check(entvir_tables_get(tables.t, n, kind, buf.data(),
                                static_cast<int64_t>(buf.size())),
              "table");
        jt[kinds[kind]] = complex_table_json(buf, k);
        if (kind == 3) {
          std::vector<double> mags(k * k);
          for (int i = 0; i < k * k; ++i)
            mags[i] = std::hypot(buf[2 * i], buf[2 * i + 1]);
          fa[n] = mags;
        }
        if (cfg.format == "csv") {
          const std::string name = "virasoro_" + model_tag(cfg, h) + "_" +
                                   std::to_string(size) + "_H" +
                                   std::to_string(n) + "_" + kinds[kind] +
                                   ".csv";
          write_atomic(fs::path(cfg.out_dir) / name,
                       complex_table_csv(buf, k));
        }
      }
      std::vector<double> gauge(2 * k);
      check(entvir_tables_gauge(tables.t, n, gauge.data(), 2 * k), "gauge");
      json gre = json::array(), gim = json::array();
      for (int i = 0; i < k; ++i) {
        gre.push_back(r12(gauge[2 * i]));
        gim.push_back(r12(gauge[2 * i + 1]));
      }
      jt["gauge"]["re"] = gre;
      jt["gauge"]["im"] = gim;
      char* exact = nullptr;
      check(entvir_cft_table_json(universality, n, k, 1, &exact), "cft");
      jt["cft_exact"] = json::parse(exact);
      entvir_string_free(exact);
      jtables.push_back(jt);
    }
    out["data"]["tables"] = jtables;
    if (cfg.format == "json")
      write_json(fs::path(cfg.out_dir) / ("virasoro_" + model_tag(cfg, h) +
                                          "_" + std::to_string(size) + ".json"),
                 out);
    std::lock_guard<std::mutex> lock(mu);
    fabs[size] = std::move(fa);
  });

  // Plot-ready |F| against size per (n, alpha, alpha').
  json curves;
  curves["meta"] = meta_block(cfg, h, 0, epsilon);
  curves["meta"].erase("size");
  json sizes_j = json::array();
  for (const auto& [size, _] : fabs) sizes_j.push_back(size);
  curves["data"]["sizes"] = sizes_j;
  for (int n : cfg.modes) {
    json series = json::array();
    for (const auto& [size, fa] : fabs) {
      json grid = json::array();
      const auto& mags = fa.at(n);
      for (int i = 0; i < k; ++i) {
        json row = json::array();
        for (int j = 0; j < k; ++j) row.push_back(r12(mags[k * i + j]));
        grid.push_back(row);
      }
      series.push_back(grid);
    }
    curves["data"]["F_abs"][std::to_string(n)] = series;
  }
  write_json(fs::path(cfg.out_dir) / ("fcurves_" + model_tag(cfg, h) + ".json"),
             curves);
  return kExitOk;
}

// ---- oracle ----

int cmd_oracle(const RunConfig& cfg) {
  ModelHandle h;
  open_model(cfg, h);
  const std::vector<long> sizes =
      cfg.sizes.empty() ? std::vector<long>{2, 4, 6, 8} : cfg.sizes;
  const double epsilon = cfg.epsilon > 0 ? cfg.epsilon : 0.04;
  fs::create_directories(cfg.out_dir);

  json out;
  out["meta"] = meta_block(cfg, h, 0, epsilon);
  out["meta"].erase("size");
  json reports = json::array();
  double worst = 0.0;
  for (long size : sizes) {
    std::vector<int32_t> modes(cfg.modes.begin(), cfg.modes.end());
    entvir_oracle_report rep{};
    check(entvir_oracle_crosscheck(h.m, size, modes.data(),
                                   static_cast<int32_t>(modes.size()),
                                   cfg.num_states, epsilon, &rep),
          "oracle");
    json jr;
    jr["sites"] = size;
    jr["max_weight_deviation"] = r12(rep.max_weight_deviation);
    jr["max_vector_residual"] = r12(rep.max_vector_residual);
    jr["max_orthonormality_defect"] = r12(rep.max_orthonormality_defect);
    jr["max_element_deviation"] = r12(rep.max_element_deviation);
    jr["worst"] = r12(rep.worst);
    reports.push_back(jr);
    worst = std::max(worst, rep.worst);
  }
  out["data"]["reports"] = reports;
  out["data"]["worst"] = r12(worst);
  out["data"]["pass"] = worst <= 1e-9;
  write_json(fs::path(cfg.out_dir) / ("oracle_" + model_tag(cfg, h) + ".json"),
             out);
  std::printf("oracle worst deviation = %.3g\n", worst);
  return worst <= 1e-9 ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entanglement Virasoro pipeline for critical XY chains"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string sizes_csv;

  auto add_common = [&](CLI::App* sub, bool needs_sizes) {
    sub->add_option("--model", cfg.model, "preset: ising | xy09 | xx");
    auto* lam = sub->add_option("--lambda", cfg.lambda, "field strength");
    auto* gam = sub->add_option("--gamma", cfg.gamma, "anisotropy");
    lam->needs(gam);
    sub->add_option("--sizes", sizes_csv, "comma list of interval sizes 2N");
    sub->add_option("--K", cfg.num_states, "number of Schmidt states");
    sub->add_option("--n", cfg.modes, "mode indices n")->delimiter(',');
    sub->add_option("--epsilon", cfg.epsilon, "UV parameter override");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--format", cfg.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    (void)needs_sizes;
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "entanglement spectra");
  CLI::App* fit = app.add_subcommand("fit-epsilon", "UV parameter fit");
  CLI::App* virasoro =
      app.add_subcommand("virasoro", "lattice vs CFT operator tables");
  CLI::App* oracle = app.add_subcommand("oracle", "dense Fock-space crosscheck");
  for (CLI::App* sub : {spectrum, fit, virasoro, oracle}) add_common(sub, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  try {
    cfg.custom = spectrum->count("--lambda") || fit->count("--lambda") ||
                 virasoro->count("--lambda") || oracle->count("--lambda");
    if (!sizes_csv.empty()) {
      std::stringstream ss(sizes_csv);
      std::string tok;
      while (std::getline(ss, tok, ','))
        if (!tok.empty()) cfg.sizes.push_back(std::stol(tok));
    }
    if (cfg.num_states < 1)
      throw CliError{kExitValidation, "--K must be >= 1"};
    if (!oracle->parsed()) {
      for (long s : cfg.sizes)
        if (s < 4 || s % 2 != 0)
          throw CliError{kExitValidation, "sizes must be even and >= 4"};
    } else {
      for (long s : cfg.sizes)
        if (s < 2 || s % 2 != 0 || s > 12)
          throw CliError{kExitValidation, "oracle sizes must be even, 2..12"};
    }

    if (spectrum->parsed()) {
      if (cfg.sizes.empty())
        throw CliError{kExitValidation, "spectrum needs --sizes"};
      return cmd_spectrum(cfg);
    }
    if (fit->parsed()) return cmd_fit_epsilon(cfg);
    if (virasoro->parsed()) {
      if (cfg.sizes.empty())
        throw CliError{kExitValidation, "virasoro needs --sizes"};
      return cmd_virasoro(cfg);
    }
    if (oracle->parsed()) return cmd_oracle(cfg);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitValidation;
}
