#include <fftw3.h>

#include <cstdint>
#include <mutex>
#include <vector>

#include "toa/oscillatory.hpp"

namespace toa {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftBuffer {
 public:
  explicit FftBuffer(std::size_t n) : n_(n), data_(fftw_alloc_complex(n)) {
    if (!data_) throw std::bad_alloc();
  }
  ~FftBuffer() { fftw_free(data_); }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;

  Complex* data() { return reinterpret_cast<Complex*>(data_); }
  fftw_complex* raw() { return data_; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  fftw_complex* data_;
};

void transform(FftBuffer& buf, int direction) {
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(buf.size()), buf.raw(), buf.raw(), direction,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

// exp(-i alpha m^2 / 2) with m^2 formed exactly
Complex chirp(double alpha, std::size_t m) {
  const auto mm = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(m);
  return std::polar(1.0, -0.5 * alpha * static_cast<double>(mm));
}

}  // namespace

std::vector<Complex> chirp_z(const std::vector<Complex>& a, double alpha, std::size_t k_count) {
  const std::size_t n = a.size();
  std::vector<Complex> out(k_count);
  if (n == 0 || k_count == 0) return out;
  std::size_t len = 1;
  while (len < n + k_count - 1) len <<= 1;

  FftBuffer y(len), b(len);
  for (std::size_t i = 0; i < len; ++i) y.data()[i] = b.data()[i] = Complex{};
  for (std::size_t i = 0; i < n; ++i) y.data()[i] = a[i] * chirp(alpha, i);
  for (std::size_t m = 0; m < k_count; ++m) b.data()[m] = std::conj(chirp(alpha, m));
  for (std::size_t m = 1; m < n; ++m) b.data()[len - m] = std::conj(chirp(alpha, m));

  transform(y, FFTW_FORWARD);
  transform(b, FFTW_FORWARD);
  for (std::size_t i = 0; i < len; ++i) y.data()[i] *= b.data()[i];
  transform(y, FFTW_BACKWARD);

  const double scale = 1.0 / static_cast<double>(len);
  for (std::size_t k = 0; k < k_count; ++k) out[k] = y.data()[k] * scale * chirp(alpha, k);
  return out;
}

}  // namespace toa
