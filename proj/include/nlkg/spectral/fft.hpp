#pragma once

// Minimal RAII wrapper over FFTW multi-dimensional complex transforms.
//
// Plans are created with FFTW_ESTIMATE so that the chosen algorithm, and hence
// every rounding decision, is identical from run to run. FFTW_UNALIGNED lets
// the plan run on any std::vector buffer through the new-array interface.

#include <fftw3.h>

#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

namespace nlkg {

namespace detail {
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

class FftPlan {
 public:
  explicit FftPlan(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("FftPlan: empty shape");
    size_ = 1;
    for (int n : dims_) {
      if (n <= 0) throw std::invalid_argument("FftPlan: non-positive extent");
      size_ *= static_cast<std::size_t>(n);
    }
    std::lock_guard lock(detail::fftw_planner_mutex());
    auto* scratch = fftw_alloc_complex(size_);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int rank = static_cast<int>(dims_.size());
    forward_ = fftw_plan_dft(rank, dims_.data(), scratch, scratch, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft(rank, dims_.data(), scratch, scratch, FFTW_BACKWARD, flags);
    fftw_free(scratch);
    if (!forward_ || !backward_) throw std::runtime_error("FftPlan: FFTW planning failed");
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  ~FftPlan() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (forward_) fftw_destroy_plan(forward_);
    if (backward_) fftw_destroy_plan(backward_);
  }

  std::size_t size() const { return size_; }
  const std::vector<int>& dims() const { return dims_; }

  /// Unnormalized sum_x f(x) exp(-i xi.x), in place.
  void forward(std::span<std::complex<double>> data) const { execute(forward_, data); }
  /// Unnormalized sum_xi c exp(+i xi.x), in place.
  void backward(std::span<std::complex<double>> data) const { execute(backward_, data); }

 private:
  void execute(fftw_plan plan, std::span<std::complex<double>> data) const {
    if (data.size() != size_) throw std::invalid_argument("FftPlan: buffer size does not match plan");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
  }

  std::vector<int> dims_;
  std::size_t size_ = 0;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace nlkg
