#include "mfbm/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>
#include <stdexcept>

namespace mfbm {

namespace {

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

template <typename T>
T* allocate(std::size_t count) {
  void* ptr = fftw_malloc(sizeof(T) * count);
  if (ptr == nullptr) throw std::bad_alloc();
  return static_cast<T*>(ptr);
}

}  // namespace

ComplexDft::ComplexDft(std::size_t n, Direction direction) : n_(n) {
  if (n == 0) throw std::invalid_argument("ComplexDft: length must be positive");
  data_ = allocate<std::complex<double>>(n);
  auto* buf = reinterpret_cast<fftw_complex*>(data_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, direction == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                           FFTW_ESTIMATE);
  if (plan_ == nullptr) {
    fftw_free(data_);
    throw std::runtime_error("ComplexDft: FFTW planning failed");
  }
}

ComplexDft::~ComplexDft() {
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(data_);
}

void ComplexDft::execute() { fftw_execute(static_cast<fftw_plan>(plan_)); }

RealDft::RealDft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("RealDft: length must be positive");
  real_ = allocate<double>(n);
  spectrum_ = allocate<std::complex<double>>(n / 2 + 1);
  auto* spec = reinterpret_cast<fftw_complex*>(spectrum_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real_, FFTW_ESTIMATE);
  if (forward_plan_ == nullptr || backward_plan_ == nullptr) {
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    fftw_free(real_);
    fftw_free(spectrum_);
    throw std::runtime_error("RealDft: FFTW planning failed");
  }
}

RealDft::~RealDft() {
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  }
  fftw_free(real_);
  fftw_free(spectrum_);
}

void RealDft::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }
void RealDft::backward() { fftw_execute(static_cast<fftw_plan>(backward_plan_)); }

}  // namespace mfbm
