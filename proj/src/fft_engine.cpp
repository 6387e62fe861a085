#include "fft_engine.hpp"

#include <fftw3.h>

#include <mutex>

#include "ils/errors.hpp"

namespace ils::detail {

namespace {

// FFTW's planner is not re-entrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int g_fftw_threads = 1;
bool g_threads_initialised = false;

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void set_fftw_threads(int threads) {
  std::lock_guard lock(planner_mutex());
  if (!g_threads_initialised) {
    fftw_init_threads();
    g_threads_initialised = true;
  }
  g_fftw_threads = threads < 1 ? 1 : threads;
}

FftEngine::FftEngine(int height, int width) : height_(height), width_(width) {
  auto real = fftw_alloc<double>(pixels());
  auto half = fftw_alloc<Complex>(half_size());
  auto full_a = fftw_alloc<Complex>(pixels());
  auto full_b = fftw_alloc<Complex>(pixels());

  std::lock_guard lock(planner_mutex());
  if (g_threads_initialised) fftw_plan_with_nthreads(g_fftw_threads);
  const unsigned flags = FFTW_ESTIMATE;
  r2c_ = fftw_plan_dft_r2c_2d(height, width, real.get(), as_fftw(half.get()), flags);
  c2r_ = fftw_plan_dft_c2r_2d(height, width, as_fftw(half.get()), real.get(), flags);
  fwd_ = fftw_plan_dft_2d(height, width, as_fftw(full_a.get()), as_fftw(full_b.get()),
                          FFTW_FORWARD, flags);
  inv_ = fftw_plan_dft_2d(height, width, as_fftw(full_a.get()), as_fftw(full_b.get()),
                          FFTW_BACKWARD, flags);
  if (!r2c_ || !c2r_ || !fwd_ || !inv_) throw NumericalError("FFTW failed to create a plan");
}

FftEngine::~FftEngine() {
  std::lock_guard lock(planner_mutex());
  for (fftw_plan p : {r2c_, c2r_, fwd_, inv_}) {
    if (p) fftw_destroy_plan(p);
  }
}

void FftEngine::forward_real(double* in, Complex* out) const {
  fftw_execute_dft_r2c(r2c_, in, as_fftw(out));
}

void FftEngine::inverse_real(Complex* in, double* out) const {
  fftw_execute_dft_c2r(c2r_, as_fftw(in), out);
}

void FftEngine::forward_complex(Complex* in, Complex* out) const {
  fftw_execute_dft(fwd_, as_fftw(in), as_fftw(out));
}

void FftEngine::inverse_complex(Complex* in, Complex* out) const {
  fftw_execute_dft(inv_, as_fftw(in), as_fftw(out));
}

}  // namespace ils::detail
