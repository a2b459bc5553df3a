#pragma once

// Thin wrapper over FFTW's complex multi-dimensional DFT. Plans are created
// once per (shape, direction) under a lock; execution through the new-array
// interface is thread-safe, so a cached plan may be shared across threads.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace lognls {

enum class FftDirection { Forward = FFTW_FORWARD, Backward = FFTW_BACKWARD };

class FftPlan {
 public:
  FftPlan(std::vector<int> shape, FftDirection dir) : shape_(std::move(shape)) {
    std::size_t n = 1;
    for (int s : shape_) n *= static_cast<std::size_t>(s);
    // Scratch buffer is only used for planning; FFTW_ESTIMATE leaves it untouched.
    auto* scratch = fftw_alloc_complex(n);
    plan_ = fftw_plan_dft(static_cast<int>(shape_.size()), shape_.data(), scratch, scratch,
                          static_cast<int>(dir), FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
  }
  ~FftPlan() {
    if (plan_ != nullptr) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  /// In-place unnormalized transform.
  void execute(std::span<std::complex<double>> data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan_, p, p);
  }

  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

 private:
  std::vector<int> shape_;
  fftw_plan plan_ = nullptr;
};

/// Cached plan for the given shape and direction.
inline std::shared_ptr<const FftPlan> fft_plan(std::span<const std::size_t> points, FftDirection dir) {
  using Key = std::pair<std::vector<int>, int>;
  // The mutex must outlive the cache: plans lock it on destruction.
  auto& mutex = FftPlan::planner_mutex();
  static std::map<Key, std::shared_ptr<const FftPlan>> cache;
  std::vector<int> shape(points.begin(), points.end());
  std::lock_guard lock(mutex);
  Key key{shape, static_cast<int>(dir)};
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto plan = std::make_shared<const FftPlan>(std::move(shape), dir);
  cache.emplace(std::move(key), plan);
  return plan;
}

}  // namespace lognls
