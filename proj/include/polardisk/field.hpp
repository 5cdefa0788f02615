#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace polardisk {

struct PolarGrid;

/// Unknown numbering: the origin is 0, node (i, j) is 1 + j*m + (i-1)
/// for i = 1..m and j = 0..n-1 (radius-major blocks, one block per angle).
struct GlobalOrdering {
  int m = 0;
  int n = 0;

  std::size_t size() const { return static_cast<std::size_t>(m) * n + 1; }
  static constexpr std::size_t origin() { return 0; }
  std::size_t index(int i, int j) const {
    j %= n;
    if (j < 0) j += n;
    return 1 + static_cast<std::size_t>(j) * m + static_cast<std::size_t>(i - 1);
  }
};

/// One scalar per node: the origin (stored once), the m x n interior and the
/// n Dirichlet values on r = 1.  Interior storage follows GlobalOrdering, so
/// the unknown vector is [origin, interior...].
class GridField {
 public:
  GridField() = default;
  GridField(int m, int n, double fill = 0.0)
      : m_(m), n_(n), origin_(fill), interior_(static_cast<std::size_t>(m) * n, fill),
        ring_(static_cast<std::size_t>(n), fill) {}
  explicit GridField(const PolarGrid& grid, double fill = 0.0);

  int m() const { return m_; }
  int n() const { return n_; }
  GlobalOrdering ordering() const { return {m_, n_}; }

  double& origin() { return origin_; }
  double origin() const { return origin_; }

  /// Interior node for i in 1..m; the angular index wraps modulo n.
  double& at(int i, int j) { return interior_[offset(i, j)]; }
  double at(int i, int j) const { return interior_[offset(i, j)]; }

  /// Node value for i in 0..m+1 with the origin and ring folded in.
  double value(int i, int j) const {
    if (i == 0) return origin_;
    if (i == m_ + 1) return ring(j);
    return at(i, j);
  }

  double& ring(int j) { return ring_[wrap(j)]; }
  double ring(int j) const { return ring_[wrap(j)]; }
  std::span<double> ring_values() { return ring_; }
  std::span<const double> ring_values() const { return ring_; }
  std::span<const double> interior_values() const { return interior_; }

  /// [origin, interior...] in GlobalOrdering.
  std::vector<double> unknowns() const;
  void set_unknowns(std::span<const double> x);

  bool same_shape(const GridField& other) const { return m_ == other.m_ && n_ == other.n_; }
  bool operator==(const GridField&) const = default;

 private:
  std::size_t wrap(int j) const {
    j %= n_;
    if (j < 0) j += n_;
    return static_cast<std::size_t>(j);
  }
  std::size_t offset(int i, int j) const {
    return wrap(j) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i - 1);
  }

  int m_ = 0;
  int n_ = 0;
  double origin_ = 0.0;
  std::vector<double> interior_;
  std::vector<double> ring_;
};

}  // namespace polardisk
