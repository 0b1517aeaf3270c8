#include "eigs.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

extern "C" {
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a,
             const int* lda, double* w, double* work, const int* lwork,
             int* iwork, const int* liwork, int* info);
void openblas_set_num_threads(int);
}

namespace entvir::detail {

int thread_count() {
  if (const char* env = std::getenv("ENTVIR_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_blas_threads(int n) { openblas_set_num_threads(std::max(1, n)); }

EighReal eigh_real(Eigen::MatrixXd a, bool with_vectors) {
  const int n = static_cast<int>(a.rows());
  EighReal out;
  out.values.resize(n);
  if (n == 0) return out;
  set_blas_threads(thread_count());

  const char jobz = with_vectors ? 'V' : 'N';
  int lwork = -1, liwork = -1, info = 0;
  double wq = 0;
  int iwq = 0;
  dsyevd_(&jobz, "L", &n, a.data(), &n, out.values.data(), &wq, &lwork, &iwq,
          &liwork, &info);
  lwork = static_cast<int>(wq);
  liwork = iwq;
  std::vector<double> work(static_cast<size_t>(lwork));
  std::vector<int> iwork(static_cast<size_t>(liwork));
  dsyevd_(&jobz, "L", &n, a.data(), &n, out.values.data(), work.data(), &lwork,
          iwork.data(), &liwork, &info);
  if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
  if (with_vectors) out.vectors = std::move(a);
  return out;
}

EighComplex eigh_complex(const Eigen::MatrixXcd& a, bool with_vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      a, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("complex Hermitian eigensolver failed");
  EighComplex out;
  out.values = solver.eigenvalues();
  if (with_vectors) out.vectors = solver.eigenvectors();
  return out;
}

void parallel_for(long n, const std::function<void(long, long)>& fn) {
  const int nt = std::min<long>(thread_count(), std::max<long>(1, n));
  if (nt <= 1 || n < 2) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nt);
  const long chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const long lo = t * chunk;
    const long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& w : workers) w.join();
}

}  // namespace entvir::detail
