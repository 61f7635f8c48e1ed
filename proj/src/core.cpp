#include "microspec/core.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace microspec {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::UnresolvedOscillation: return "UnresolvedOscillation";
    case ErrorCode::ExtrapolationDiverged: return "ExtrapolationDiverged";
    case ErrorCode::UnknownGroundTruth: return "UnknownGroundTruth";
    case ErrorCode::NyquistUnsatisfiable: return "NyquistUnsatisfiable";
    case ErrorCode::NotSalient: return "NotSalient";
    case ErrorCode::MissingMirrorSample: return "MissingMirrorSample";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

Point::Point(std::initializer_list<double> xs) {
  if (xs.size() > static_cast<std::size_t>(kMaxDim))
    throw Error(ErrorCode::InvalidArgument, "point dimension exceeds 4");
  dim = static_cast<int>(xs.size());
  std::copy(xs.begin(), xs.end(), c.begin());
}

Point Point::from(const std::vector<double>& xs) {
  if (xs.size() > static_cast<std::size_t>(kMaxDim))
    throw Error(ErrorCode::InvalidArgument, "point dimension exceeds 4");
  Point p(static_cast<int>(xs.size()));
  std::copy(xs.begin(), xs.end(), p.c.begin());
  return p;
}

Point Point::filled(int d, double v) {
  Point p(d);
  for (int i = 0; i < d; ++i) p[i] = v;
  return p;
}

double Point::dot(const Point& o) const {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += c[i] * o.c[i];
  return s;
}

std::vector<double> Point::to_vector() const { return {c.begin(), c.begin() + dim}; }

Point Point::operator+(const Point& o) const {
  Point r(dim);
  for (int i = 0; i < dim; ++i) r[i] = c[i] + o.c[i];
  return r;
}

Point Point::operator-(const Point& o) const {
  Point r(dim);
  for (int i = 0; i < dim; ++i) r[i] = c[i] - o.c[i];
  return r;
}

Point Point::operator-() const {
  Point r(dim);
  for (int i = 0; i < dim; ++i) r[i] = -c[i];
  return r;
}

Point Point::operator*(double s) const {
  Point r(dim);
  for (int i = 0; i < dim; ++i) r[i] = c[i] * s;
  return r;
}

bool Point::operator==(const Point& o) const {
  if (dim != o.dim) return false;
  for (int i = 0; i < dim; ++i)
    if (c[i] != o.c[i]) return false;
  return true;
}

Point concat(const std::vector<Point>& parts) {
  Point r;
  for (const auto& p : parts) {
    if (r.dim + p.dim > kMaxDim) throw Error(ErrorCode::InvalidArgument, "concat exceeds 4 dims");
    for (int i = 0; i < p.dim; ++i) r.c[r.dim + i] = p[i];
    r.dim += p.dim;
  }
  return r;
}

std::vector<Point> split(const Point& p, int parts) {
  if (parts <= 0 || p.dim % parts != 0) throw Error(ErrorCode::InvalidArgument, "split: bad arity");
  const int d = p.dim / parts;
  std::vector<Point> out(parts, Point(d));
  for (int j = 0; j < parts; ++j)
    for (int i = 0; i < d; ++i) out[j][i] = p[j * d + i];
  return out;
}

std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int i = 0; i < p.dim; ++i) os << (i ? "," : "") << p[i];
  os << ')';
  return os.str();
}

Box::Box(Point l, Point h) : lo(l), hi(h) {
  if (l.dim != h.dim) throw Error(ErrorCode::InvalidArgument, "box corners differ in dimension");
  for (int i = 0; i < l.dim; ++i)
    if (!(l[i] <= h[i])) throw Error(ErrorCode::InvalidArgument, "box corners out of order");
}

Box Box::cube(const Point& center, double half_width) {
  return Box(center - Point::filled(center.dim, half_width), center + Point::filled(center.dim, half_width));
}

bool Box::contains(const Point& p) const {
  for (int i = 0; i < dim(); ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

bool Box::contains(const Box& b) const { return contains(b.lo) && contains(b.hi); }

bool Box::intersects(const Box& b) const {
  for (int i = 0; i < dim(); ++i)
    if (b.hi[i] < lo[i] || b.lo[i] > hi[i]) return false;
  return true;
}

double Box::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
  return v;
}

Box Box::translated(const Point& s) const { return Box(lo + s, hi + s); }

Box Box::scaled(double s) const { return Box(lo * s, hi * s); }

Box Box::inflated(double m) const {
  return Box(lo - Point::filled(dim(), m), hi + Point::filled(dim(), m));
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr err;
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_at) {
          failed_at = i;
          err = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MICROSPEC_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

}  // namespace microspec
