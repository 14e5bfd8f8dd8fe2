#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace opuc::detail {
namespace {

struct Buffer {
  explicit Buffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw Error(ErrorKind::numerical, "fftw_malloc failed");
  }
  ~Buffer() { fftw_free(data); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  fftw_complex* data;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    Buffer in(static_cast<std::size_t>(n));
    Buffer out(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, in.data, out.data, sign, FFTW_ESTIMATE);
    if (!plan) throw Error(ErrorKind::numerical, "fftw planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

std::vector<cplx> run(std::span<const cplx> x, int sign) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  fftw_plan plan = cache().get(static_cast<int>(n), sign);
  Buffer in(n);
  Buffer out(n);
  std::memcpy(in.data, x.data(), sizeof(fftw_complex) * n);
  fftw_execute_dft(plan, in.data, out.data);
  std::vector<cplx> y(n);
  std::memcpy(static_cast<void*>(y.data()), out.data, sizeof(fftw_complex) * n);
  return y;
}

}  // namespace

std::vector<cplx> fft(std::span<const cplx> x) { return run(x, FFTW_FORWARD); }

std::vector<cplx> ifft(std::span<const cplx> x) { return run(x, FFTW_BACKWARD); }

std::vector<cplx> fft_real(std::span<const double> x) {
  std::vector<cplx> c(x.begin(), x.end());
  return fft(c);
}

}  // namespace opuc::detail
