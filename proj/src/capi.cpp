#include "entvir/entvir.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "entvir/errors.hpp"
#include "entvir/pipeline.hpp"

using namespace entvir;

struct entvir_model {
  ModelParams params;
};

struct entvir_run {
  ModelParams params;
  IntervalRun run;
};

struct entvir_tables {
  SizeTables tables;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return ENTVIR_OK;
  } catch (const std::invalid_argument& e) {
    return fail(ENTVIR_ERR_INVALID, e.what());
  } catch (const numeric_error& e) {
    return fail(ENTVIR_ERR_NUMERIC, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ENTVIR_ERR_NOMEM, "out of memory");
  } catch (const std::exception& e) {
    return fail(ENTVIR_ERR_NUMERIC, e.what());
  }
}

int32_t copy_doubles(const std::vector<double>& src, double* buf, int64_t cap) {
  const int64_t n = std::min<int64_t>(cap, static_cast<int64_t>(src.size()));
  for (int64_t i = 0; i < n; ++i) buf[i] = src[static_cast<size_t>(i)];
  return static_cast<int32_t>(src.size());
}

int copy_complex_matrix(const Eigen::MatrixXcd& m, double* buf, int64_t cap) {
  const int64_t need = 2 * m.rows() * m.cols();
  if (cap < need) return ENTVIR_ERR_INVALID;
  int64_t at = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      buf[at++] = m(i, j).real();
      buf[at++] = m(i, j).imag();
    }
  return ENTVIR_OK;
}

}  // namespace

extern "C" {

const char* entvir_version(void) { return "0.1.0"; }

const char* entvir_last_error(void) { return g_last_error.c_str(); }

void entvir_string_free(char* s) { delete[] s; }

int entvir_model_preset(const char* name, entvir_model** out) {
  if (!name || !out) return fail(ENTVIR_ERR_INVALID, "null argument");
  return guarded([&] { *out = new entvir_model{ModelParams::preset(name)}; });
}

int entvir_model_custom(double lambda, double gamma, entvir_model** out) {
  if (!out) return fail(ENTVIR_ERR_INVALID, "null argument");
  return guarded(
      [&] { *out = new entvir_model{ModelParams::make(lambda, gamma)}; });
}

void entvir_model_free(entvir_model* m) { delete m; }

double entvir_model_lambda(const entvir_model* m) { return m->params.lambda; }
double entvir_model_gamma(const entvir_model* m) { return m->params.gamma; }

int entvir_model_universality(const entvir_model* m) {
  switch (m->params.universality) {
    case UniversalityClass::Ising:
      return 1;
    case UniversalityClass::Boson:
      return 2;
    default:
      return 0;
  }
}

double entvir_model_central_charge(const entvir_model* m) {
  return m->params.central_charge;
}

double entvir_model_dispersion(const entvir_model* m, double k) {
  return dispersion(m->params, k);
}

int entvir_run_compute(const entvir_model* m, int64_t sites, int32_t num_states,
                       int with_vectors, entvir_run** out) {
  if (!m || !out) return fail(ENTVIR_ERR_INVALID, "null argument");
  return guarded([&] {
    auto run = std::make_unique<entvir_run>();
    run->params = m->params;
    run->run = run_interval(m->params, static_cast<long>(sites), num_states,
                            with_vectors != 0);
    *out = run.release();
  });
}

void entvir_run_free(entvir_run* r) { delete r; }

int64_t entvir_run_sites(const entvir_run* r) { return r->run.sites; }

int32_t entvir_run_num_states(const entvir_run* r) {
  return static_cast<int32_t>(r->run.states.size());
}

double entvir_run_entropy(const entvir_run* r) { return r->run.entropy; }
double entvir_run_gap(const entvir_run* r) { return r->run.gap; }

int64_t entvir_run_single_particle(const entvir_run* r, double* buf,
                                   int64_t cap) {
  const auto& e = r->run.spectrum.energies;
  const int64_t n = std::min<int64_t>(cap, e.size());
  for (int64_t i = 0; i < n; ++i) buf[i] = e[i];
  return e.size();
}

int32_t entvir_run_energies(const entvir_run* r, double* buf, int32_t cap) {
  std::vector<double> e;
  e.reserve(r->run.states.size());
  for (const auto& st : r->run.states) e.push_back(st.energy);
  return copy_doubles(e, buf, cap);
}

int32_t entvir_run_weights(const entvir_run* r, double* buf, int32_t cap) {
  std::vector<double> w;
  w.reserve(r->run.states.size());
  for (const auto& st : r->run.states) w.push_back(st.weight);
  return copy_doubles(w, buf, cap);
}

int32_t entvir_run_rescaled(const entvir_run* r, double epsilon, double* buf,
                            int32_t cap) {
  const double l = std::log(static_cast<double>(r->run.sites) / epsilon);
  return copy_doubles(rescale_spectrum(r->run.states, l), buf, cap);
}

int32_t entvir_run_occupation(const entvir_run* r, int32_t alpha, int64_t* buf,
                              int32_t cap) {
  if (alpha < 0 || alpha >= static_cast<int32_t>(r->run.states.size()))
    return -1;
  const auto& occ = r->run.states[static_cast<size_t>(alpha)].occupation;
  const int32_t n = std::min<int32_t>(cap, static_cast<int32_t>(occ.size()));
  for (int32_t i = 0; i < n; ++i) buf[i] = occ[static_cast<size_t>(i)];
  return static_cast<int32_t>(occ.size());
}

int entvir_fit_epsilon(const int64_t* sizes, const double* gaps, int32_t count,
                       double* epsilon, double* slope, double* intercept) {
  if (!sizes || !gaps) return fail(ENTVIR_ERR_INVALID, "null argument");
  return guarded([&] {
    std::vector<long> s(sizes, sizes + count);
    std::vector<double> g(gaps, gaps + count);
    const EpsilonFit fit = fit_epsilon(s, g);
    if (epsilon) *epsilon = fit.epsilon;
    if (slope) *slope = fit.slope;
    if (intercept) *intercept = fit.intercept;
  });
}

int entvir_fit_epsilon_sizes(const entvir_model* m, const int64_t* sizes,
                             int32_t count, double* epsilon, double* slope,
                             double* intercept) {
  if (!m || !sizes) return fail(ENTVIR_ERR_INVALID, "null argument");
  return guarded([&] {
    std::vector<long> s(sizes, sizes + count);
    const EpsilonFit fit = fit_epsilon_ladder(m->params, s);
    if (epsilon) *epsilon = fit.epsilon;
    if (slope) *slope = fit.slope;
    if (intercept) *intercept = fit.intercept;
  });
}

int entvir_tables_compute(const entvir_run* r, double epsilon,
                          const int32_t* modes, int32_t num_modes,
                          entvir_tables** out) {
  if (!r || !modes || !out) return fail(ENTVIR_ERR_INVALID, "null argument");
  if (!r->run.transform)
    return fail(ENTVIR_ERR_INVALID,
                "tables need a run computed with vectors");
  return guarded([&] {
    std::vector<int> n_list(modes, modes + num_modes);
    auto t = std::make_unique<entvir_tables>();
    t->tables = virasoro_tables_for_run(r->run, epsilon, n_list);
    *out = t.release();
  });
}

void entvir_tables_free(entvir_tables* t) { delete t; }

int32_t entvir_tables_count(const entvir_tables* t) {
  return static_cast<int32_t>(t->tables.tables.size());
}

double entvir_tables_l(const entvir_tables* t) { return t->tables.l; }

int entvir_tables_get(const entvir_tables* t, int32_t mode, int32_t kind,
                      double* buf, int64_t cap) {
  if (!t || !buf) return fail(ENTVIR_ERR_INVALID, "null argument");
  for (size_t i = 0; i < t->tables.n_list.size(); ++i) {
    if (t->tables.n_list[i] != mode) continue;
    const ComparisonTable& ct = t->tables.tables[i];
    switch (kind) {
      case 0:
        return copy_complex_matrix(ct.lattice, buf, cap);
      case 1:
        return copy_complex_matrix(ct.aligned, buf, cap);
      case 2:
        return copy_complex_matrix(ct.cft.cast<Complex>(), buf, cap);
      case 3:
        return copy_complex_matrix(ct.corrections, buf, cap);
      default:
        return fail(ENTVIR_ERR_INVALID, "unknown table kind");
    }
  }
  return fail(ENTVIR_ERR_INVALID, "mode not present in the table set");
}

int entvir_tables_gauge(const entvir_tables* t, int32_t mode, double* buf,
                        int64_t cap) {
  if (!t || !buf) return fail(ENTVIR_ERR_INVALID, "null argument");
  for (size_t i = 0; i < t->tables.n_list.size(); ++i) {
    if (t->tables.n_list[i] != mode) continue;
    const Eigen::VectorXcd& g = t->tables.tables[i].gauge;
    if (cap < 2 * g.size()) return fail(ENTVIR_ERR_INVALID, "buffer too small");
    for (Eigen::Index a = 0; a < g.size(); ++a) {
      buf[2 * a] = g[a].real();
      buf[2 * a + 1] = g[a].imag();
    }
    return ENTVIR_OK;
  }
  return fail(ENTVIR_ERR_INVALID, "mode not present in the table set");
}

int entvir_tables_matching(const entvir_tables* t, int32_t* buf, int64_t cap) {
  if (!t || !buf) return fail(ENTVIR_ERR_INVALID, "null argument");
  const auto& idx = t->tables.matching.tower_index;
  if (cap < static_cast<int64_t>(idx.size()))
    return fail(ENTVIR_ERR_INVALID, "buffer too small");
  for (size_t i = 0; i < idx.size(); ++i)
    buf[i] = static_cast<int32_t>(idx[i]);
  return ENTVIR_OK;
}

int entvir_cft_table_json(int universality, int n, int32_t k, int hermitian,
                          char** out) {
  if (!out) return fail(ENTVIR_ERR_INVALID, "null argument");
  return guarded([&] {
    UniversalityClass cls;
    if (universality == 1)
      cls = UniversalityClass::Ising;
    else if (universality == 2)
      cls = UniversalityClass::Boson;
    else
      throw std::invalid_argument("universality must be 1 or 2");
    const auto tower = cft::tower_for(
        cls, cls == UniversalityClass::Boson ? cft::Rational(3)
                                             : cft::Rational(4));
    const cft::ExactTable table = hermitian ? cft::hn_table(tower, n, k)
                                            : cft::ln_table(tower, n, k);
    const std::string json = table.to_json();
    char* s = new char[json.size() + 1];
    std::memcpy(s, json.c_str(), json.size() + 1);
    *out = s;
  });
}

int entvir_oracle_crosscheck(const entvir_model* m, int64_t sites,
                             const int32_t* modes, int32_t num_modes,
                             int32_t num_states, double epsilon,
                             entvir_oracle_report* out) {
  if (!m || !modes || !out) return fail(ENTVIR_ERR_INVALID, "null argument");
  return guarded([&] {
    std::vector<int> n_list(modes, modes + num_modes);
    const auto report = oracle::crosscheck(m->params, static_cast<long>(sites),
                                           n_list, num_states, epsilon);
    out->max_weight_deviation = report.max_weight_deviation;
    out->max_vector_residual = report.max_vector_residual;
    out->max_orthonormality_defect = report.max_orthonormality_defect;
    out->max_element_deviation = report.max_element_deviation;
    out->worst = report.worst();
  });
}

int entvir_fit_central_charge(const entvir_model* m, const int64_t* sizes,
                              int32_t count, double* c_out) {
  if (!m || !sizes || !c_out) return fail(ENTVIR_ERR_INVALID, "null argument");
  return guarded([&] {
    std::vector<long> s(sizes, sizes + count);
    *c_out = fit_central_charge(m->params, s);
  });
}

}  // extern "C"
