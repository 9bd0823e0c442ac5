#include "dispersive/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dispersive::fft {

namespace {

using PlanKey = std::pair<std::vector<int>, int>;

// FFTW's planner is not thread-safe; plans are created once per shape under
// the lock and executed with the new-array interface afterwards.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const std::vector<int>& dims, int sign) {
    std::lock_guard lock(mutex_);
    auto [it, inserted] = plans_.try_emplace(PlanKey{dims, sign}, nullptr);
    if (inserted) {
      std::size_t total = 1;
      for (int d : dims) total *= static_cast<std::size_t>(d);
      fftw_complex* scratch = fftw_alloc_complex(total);
      it->second = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), scratch, scratch, sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
      fftw_free(scratch);
      if (it->second == nullptr) {
        plans_.erase(it);
        throw std::runtime_error("FFTW planning failed");
      }
    }
    return it->second;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

std::size_t check_shape(std::span<std::complex<double>> data, std::span<const std::size_t> dims) {
  if (dims.empty()) throw std::invalid_argument("fft needs at least one dimension");
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw std::invalid_argument("fft dimension must be positive");
    total *= d;
  }
  if (total != data.size()) throw std::invalid_argument("fft shape does not match data size");
  return total;
}

void execute(std::span<std::complex<double>> data, std::span<const std::size_t> dims, int sign) {
  check_shape(data, dims);
  std::vector<int> shape(dims.begin(), dims.end());
  fftw_plan plan = cache().get(shape, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void forward(std::span<std::complex<double>> data, std::span<const std::size_t> dims) {
  execute(data, dims, FFTW_FORWARD);
}

void inverse(std::span<std::complex<double>> data, std::span<const std::size_t> dims) {
  execute(data, dims, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
}

}  // namespace dispersive::fft
