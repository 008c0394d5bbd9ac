#include "mhdrelax/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mhdrelax::fft {
namespace {

// fftw planning is not thread-safe; execution with new-array API is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int m, Direction dir) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(m, dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(m) * m);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(m, m, buf, buf, key.second, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform_2d(std::span<std::complex<double>> data, int m, Direction dir) {
  if (data.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(m)) {
    throw std::invalid_argument("transform_2d: buffer size does not match m*m");
  }
  fftw_plan plan = cache().get(m, dir);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace mhdrelax::fft
