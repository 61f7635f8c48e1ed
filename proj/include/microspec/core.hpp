#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace microspec {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 4;
inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
  RadiusTooSmall,
  BadRange,
  SupportViolation,
  UnresolvedOscillation,
  ExtrapolationDiverged,
  UnknownGroundTruth,
  NyquistUnsatisfiable,
  NotSalient,
  MissingMirrorSample,
  ConfigError,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Small fixed-capacity real vector.
struct Point {
  std::array<double, kMaxDim> c{};
  int dim = 0;

  Point() = default;
  explicit Point(int d) : dim(d) {}
  Point(std::initializer_list<double> xs);
  static Point from(const std::vector<double>& xs);
  static Point zeros(int d) { return Point(d); }
  static Point filled(int d, double v);

  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }

  double dot(const Point& o) const;
  double norm() const { return std::sqrt(dot(*this)); }
  std::vector<double> to_vector() const;

  Point operator+(const Point& o) const;
  Point operator-(const Point& o) const;
  Point operator-() const;
  Point operator*(double s) const;
  bool operator==(const Point& o) const;
  bool operator!=(const Point& o) const { return !(*this == o); }
};

inline Point operator*(double s, const Point& p) { return p * s; }

/// Concatenate points into one vector of dimension sum of dims.
Point concat(const std::vector<Point>& parts);
/// Split into `parts` blocks of equal dimension.
std::vector<Point> split(const Point& p, int parts);

std::string to_string(const Point& p);

/// Closed axis-aligned box.
struct Box {
  Point lo, hi;

  Box() = default;
  Box(Point l, Point h);
  static Box cube(const Point& center, double half_width);

  int dim() const { return lo.dim; }
  bool contains(const Point& p) const;
  bool contains(const Box& b) const;
  bool intersects(const Box& b) const;
  double volume() const;
  Box translated(const Point& s) const;
  /// Scale about the origin by s > 0.
  Box scaled(double s) const;
  /// Grow by `m` on every side.
  Box inflated(double m) const;
};

/// Runs fn(0..n-1) on up to `threads` workers; results must go to per-index slots. Rethrows the
/// exception of the lowest failing index.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Thread budget: explicit value if > 0, else MICROSPEC_THREADS, else 1.
int resolve_threads(int requested);

}  // namespace microspec
