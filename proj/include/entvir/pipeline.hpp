#pragma once

#include <optional>

#include "entvir/analysis.hpp"
#include "entvir/oracle.hpp"

namespace entvir {

// One diagonalized interval. The transform (and with it anything that needs
// Schmidt vectors rather than just the spectrum) is only computed on request;
// spectra of large intervals then never store eigenvectors.
struct IntervalRun {
  ModelParams params;
  long sites = 0;
  SingleParticleSpectrum spectrum;
  std::optional<BogoliubovTransform> transform;
  std::vector<SchmidtState> states;
  double entropy = 0.0;
  double gap = 0.0;  // E_2 - E_1
};

IntervalRun run_interval(const ModelParams& params, long sites, int count,
                         bool with_vectors);

// The size ladders studied per model class.
std::vector<long> standard_ladder(const ModelParams& params);

EpsilonFit fit_epsilon_ladder(const ModelParams& params,
                              const std::vector<long>& sizes);

// Slope of S_A against log(2N) times 3.
double fit_central_charge(const ModelParams& params,
                          const std::vector<long>& sizes);

// Lattice H_n tables at one size against the exact tower tables.
struct SizeTables {
  long sites = 0;
  double epsilon = 0.0;
  double l = 0.0;
  std::vector<int> n_list;
  std::vector<double> dims;  // rescaled spectrum of the kept states
  std::vector<SymmetryCharges> charges;
  cft::TowerSpectrum tower;
  StateMatching matching;
  std::vector<ComparisonTable> tables;  // one per n, order of n_list
};

SizeTables virasoro_tables(const ModelParams& params, long sites,
                           double epsilon, const std::vector<int>& n_list,
                           int count);

// Same, reusing an interval already diagonalized with vectors.
SizeTables virasoro_tables_for_run(const IntervalRun& run, double epsilon,
                                   const std::vector<int>& n_list);

}  // namespace entvir
