// fft.hpp
// -------
// Thin FFTW wrapper.  Plans are cached per (rank, shape, direction) and run
// through the new-array execute interface, so any buffer of the right size
// can be transformed with a cached plan.  Plan creation is serialized since
// the FFTW planner is not thread safe; execution is.
#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

namespace iafc::fft {

enum class Direction { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {

using Key = std::tuple<int, std::size_t, std::size_t, int>;

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }
  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

  fftw_plan get(std::size_t n0, std::size_t n1, Direction dir) {
    const int rank = n1 == 0 ? 1 : 2;
    Key key{rank, n0, n1, static_cast<int>(dir)};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t total = rank == 1 ? n0 : n0 * n1;
    std::vector<std::complex<double>> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan =
        rank == 1 ? fftw_plan_dft_1d(static_cast<int>(n0), buf, buf,
                                     static_cast<int>(dir), flags)
                  : fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1),
                                     buf, buf, static_cast<int>(dir), flags);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

} // namespace detail

/// Unnormalized in-place 1-D DFT: X_j = Σ_k x_k e^{∓2πi jk/N}.
inline void transform(std::span<std::complex<double>> data, Direction dir) {
  if (data.empty()) return;
  fftw_plan plan = detail::PlanCache::instance().get(data.size(), 0, dir);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

/// Unnormalized in-place 2-D DFT on a row-major ny×nx array.
inline void transform_2d(std::span<std::complex<double>> data, std::size_t ny,
                         std::size_t nx, Direction dir) {
  if (data.empty()) return;
  fftw_plan plan = detail::PlanCache::instance().get(ny, nx, dir);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

} // namespace iafc::fft
