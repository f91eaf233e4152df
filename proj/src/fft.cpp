#include "circs/fft.hpp"

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace circs::fft {

namespace {

// FFTW planning is not thread-safe; execution of a finished plan is.
// Plans are created with FFTW_UNALIGNED so they can run on any buffer.
class PlanCache {
 public:
  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    const long key = static_cast<long>(n) * 2 + (sign == FFTW_FORWARD ? 0 : 1);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> in(n), out(n);
    fftw_plan p = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  std::mutex mu_;
  std::unordered_map<long, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

Eigen::VectorXcd run(const Eigen::VectorXcd& x, int sign) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXcd out(n);
  if (n == 0) return out;
  fftw_plan p = cache().get(n, sign);
  fftw_execute_dft(
      p,
      reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(x.data())),
      reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

Eigen::VectorXcd forward(const Eigen::VectorXcd& x) { return run(x, FFTW_FORWARD); }

Eigen::VectorXcd inverse(const Eigen::VectorXcd& x) {
  Eigen::VectorXcd out = run(x, FFTW_BACKWARD);
  if (x.size() > 0) out /= static_cast<double>(x.size());
  return out;
}

}  // namespace circs::fft
