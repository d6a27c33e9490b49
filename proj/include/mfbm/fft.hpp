#pragma once

#include <complex>
#include <cstddef>

namespace mfbm {

/// In-place complex DFT of fixed length owning an FFTW plan and buffer.
/// Forward computes y_k = sum_j x_j e^{-2 pi i jk/n}, backward uses e^{+2 pi i jk/n};
/// neither is normalized. Each instance may be executed from one thread at a time.
class ComplexDft {
 public:
  enum class Direction { Forward, Backward };

  ComplexDft(std::size_t n, Direction direction);
  ~ComplexDft();
  ComplexDft(const ComplexDft&) = delete;
  ComplexDft& operator=(const ComplexDft&) = delete;

  std::size_t size() const { return n_; }
  std::complex<double>* data() { return data_; }
  void execute();

 private:
  std::size_t n_;
  std::complex<double>* data_;
  void* plan_;
};

/// Real-to-complex DFT (n real inputs, n/2+1 outputs) and its unnormalized inverse.
class RealDft {
 public:
  explicit RealDft(std::size_t n);
  ~RealDft();
  RealDft(const RealDft&) = delete;
  RealDft& operator=(const RealDft&) = delete;

  std::size_t size() const { return n_; }
  double* real() { return real_; }
  std::complex<double>* spectrum() { return spectrum_; }
  void forward();   ///< real() -> spectrum()
  void backward();  ///< spectrum() -> real(), scaled by n

 private:
  std::size_t n_;
  double* real_;
  std::complex<double>* spectrum_;
  void* forward_plan_;
  void* backward_plan_;
};

}  // namespace mfbm
