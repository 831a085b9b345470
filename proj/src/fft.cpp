#include "fnls/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fnls::fft {
namespace {

// Plans are created once per (size, direction) under a lock; executing a plan
// on caller-owned buffers through the new-array interface is thread safe.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("FFTW plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(std::span<std::complex<double>> data, int sign) {
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(cache().get(data.size(), sign), buf, buf);
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("FFT input and output sizes differ");
}

}  // namespace

void forward_inplace(std::span<std::complex<double>> data) { run(data, FFTW_FORWARD); }

void inverse_inplace(std::span<std::complex<double>> data) {
  run(data, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
}

void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  check_sizes(in.size(), out.size());
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  forward_inplace(out);
}

void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  check_sizes(in.size(), out.size());
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  inverse_inplace(out);
}

}  // namespace fnls::fft
