#ifndef MDFLOW_CORE_HPP
#define MDFLOW_CORE_HPP

#include <array>
#include <cmath>
#include <chrono>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdflow {

// ---------------------------------------------------------------------------
// Error types
// ---------------------------------------------------------------------------

/// Base class for all errors thrown by the library.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

class unsupported_geometry_error : public error { using error::error; };
class degenerate_input_error : public error { using error::error; };
class conformity_error : public error { using error::error; };
class resolution_error : public error { using error::error; };
class matching_error : public error { using error::error; };
class assembly_error : public error { using error::error; };
class parse_error : public error { using error::error; };
class io_error : public error { using error::error; };
class config_error : public error { using error::error; };
/// Violation of an operator contract (e.g. a non-symmetric operator passed to MINRES).
class contract_error : public error { using error::error; };

// ---------------------------------------------------------------------------
// Small geometric vector
// ---------------------------------------------------------------------------

/// Point/vector in ambient space. Unused trailing components are zero.
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// ---------------------------------------------------------------------------
// Utilities
// ---------------------------------------------------------------------------

/// True if x = p / 2^k for integers p and 0 <= k <= max_log2_denominator.
inline bool is_dyadic(double x, int max_log2_denominator = 24) {
  const double scaled = std::ldexp(x, max_log2_denominator);
  return std::nearbyint(scaled) == scaled && std::abs(scaled) < 9.0e15;
}

/// Deterministic RNG used by probes and tests.
using Rng = std::mt19937_64;

inline std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& vi : v) vi = dist(rng);
  return v;
}

class WallTimer {
 public:
  WallTimer() : start_(clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_;
};

// Basic vector kernels shared by the solvers.
inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(std::vector<double>& x, double alpha) {
  for (auto& xi : x) xi *= alpha;
}

}  // namespace mdflow

#endif  // MDFLOW_CORE_HPP
