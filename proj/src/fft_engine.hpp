#pragma once

// Thin RAII layer over FFTW for fixed-size 2-D transforms. Plans are built
// once and executed through the new-array interface, so one engine can be
// shared by concurrent callers as long as each brings its own buffers.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>

namespace ils::detail {

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <typename T>
FftwBuffer<T> fftw_alloc(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * (n == 0 ? 1 : n)));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

using Complex = std::complex<double>;

class FftEngine {
 public:
  FftEngine(int height, int width);
  ~FftEngine();
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t pixels() const { return static_cast<std::size_t>(height_) * width_; }
  // Row length of the half spectrum produced by the real transform.
  int half_width() const { return width_ / 2 + 1; }
  std::size_t half_size() const { return static_cast<std::size_t>(height_) * half_width(); }

  // Unnormalized forward real-to-complex transform, out has half_size() entries.
  void forward_real(double* in, Complex* out) const;
  // Unnormalized inverse; destroys `in`. Caller divides by pixels().
  void inverse_real(Complex* in, double* out) const;

  void forward_complex(Complex* in, Complex* out) const;
  void inverse_complex(Complex* in, Complex* out) const;

 private:
  int height_;
  int width_;
  fftw_plan r2c_ = nullptr;
  fftw_plan c2r_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
};

// Thread count handed to FFTW for plans created after the call.
void set_fftw_threads(int threads);

}  // namespace ils::detail
