#include "gmhd/field.hpp"

#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>

namespace gmhd {
namespace {

// FFTW planning is not thread safe; execution with the new-array interface is.
// Plans are built once per grid size with FFTW_ESTIMATE so that the chosen
// algorithm, and hence every bit of the output, is reproducible across runs.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~PlanPair() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

const PlanPair& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;

  auto pair = std::make_unique<PlanPair>();
  RealArray real(n, n);
  ComplexArray spec(n / 2 + 1, n);
  auto* out = reinterpret_cast<fftw_complex*>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  // Column-major (i, j) storage is row-major [j][i]: i is the halved axis.
  pair->forward = fftw_plan_dft_r2c_2d(n, n, real.data(), out, flags);
  pair->backward = fftw_plan_dft_c2r_2d(n, n, out, real.data(), flags | FFTW_DESTROY_INPUT);
  if (!pair->forward || !pair->backward) {
    throw std::runtime_error("FFTW planning failed for n = " + std::to_string(n));
  }
  return *cache.emplace(n, std::move(pair)).first->second;
}

void symmetrize_row(ComplexArray& c, int row, int n) {
  c(row, 0) = Complex(c(row, 0).real(), 0.0);
  c(row, n / 2) = Complex(c(row, n / 2).real(), 0.0);
  for (int col = 1; col < n / 2; ++col) {
    const Complex avg = 0.5 * (c(row, col) + std::conj(c(row, n - col)));
    c(row, col) = avg;
    c(row, n - col) = std::conj(avg);
  }
}

}  // namespace

SpectralField to_spectral(const PhysicalField& f) {
  const int n = f.grid.n();
  const PlanPair& plans = plans_for(n);
  SpectralField out(f.grid);
  // r2c does not modify its input; the const_cast only satisfies the C API.
  fftw_execute_dft_r2c(plans.forward, const_cast<double*>(f.values.data()),
                       reinterpret_cast<fftw_complex*>(out.coeffs.data()));
  out.coeffs *= 1.0 / (static_cast<double>(n) * n);
  symmetrize(out);
  return out;
}

PhysicalField to_physical(const SpectralField& f) {
  const int n = f.grid.n();
  const PlanPair& plans = plans_for(n);
  ComplexArray scratch = f.coeffs;
  PhysicalField out(f.grid);
  fftw_execute_dft_c2r(plans.backward, reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.values.data());
  return out;
}

void symmetrize(SpectralField& f) {
  const int n = f.grid.n();
  symmetrize_row(f.coeffs, 0, n);
  symmetrize_row(f.coeffs, n / 2, n);
}

void dealias(SpectralField& f) {
  const Grid& g = f.grid;
  const int cut = g.dealias_cutoff();
  for (int col = 0; col < g.n(); ++col) {
    if (std::abs(g.ky(col)) > cut) {
      f.coeffs.col(col).setZero();
      continue;
    }
    for (int row = cut + 1; row < g.nkx(); ++row) f.coeffs(row, col) = 0.0;
  }
}

SpectralField dealiased(SpectralField f) {
  dealias(f);
  return f;
}

bool all_finite(const SpectralField& f) {
  const double* p = reinterpret_cast<const double*>(f.coeffs.data());
  const Eigen::Index count = 2 * f.coeffs.size();
  for (Eigen::Index i = 0; i < count; ++i) {
    if (!std::isfinite(p[i])) return false;
  }
  return true;
}

}  // namespace gmhd
