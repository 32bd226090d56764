#pragma once

// Independent reference implementations used only by tests. These stay
// deliberately naive (plain arrays, O(n^2) scans, generic integrators) so they
// share no code path with the library.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kRadius = 6'371'008.8;

// Haversine, written from the textbook formula.
inline double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  const double p1 = lat1 * std::numbers::pi / 180.0;
  const double p2 = lat2 * std::numbers::pi / 180.0;
  const double dp = p2 - p1;
  double dl = (lon2 - lon1) * std::numbers::pi / 180.0;
  while (dl > std::numbers::pi) dl -= 2.0 * std::numbers::pi;
  while (dl < -std::numbers::pi) dl += 2.0 * std::numbers::pi;
  const double a = std::sin(dp / 2) * std::sin(dp / 2) +
                   std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
  return 2.0 * kRadius * std::asin(std::min(1.0, std::sqrt(a)));
}

// RK4 over the planar unicycle x' = v cos(psi), y' = v sin(psi), psi' = omega.
struct UnicycleState {
  double x, y, v, psi, omega;
};

inline UnicycleState rk4_unicycle(UnicycleState s, double dt, int steps = 4096) {
  const double h = dt / steps;
  auto deriv = [](const UnicycleState& u, double& dx, double& dy, double& dpsi) {
    dx = u.v * std::cos(u.psi);
    dy = u.v * std::sin(u.psi);
    dpsi = u.omega;
  };
  for (int i = 0; i < steps; ++i) {
    double k1x, k1y, k1p, k2x, k2y, k2p, k3x, k3y, k3p, k4x, k4y, k4p;
    deriv(s, k1x, k1y, k1p);
    UnicycleState m = s;
    m.x = s.x + 0.5 * h * k1x;
    m.y = s.y + 0.5 * h * k1y;
    m.psi = s.psi + 0.5 * h * k1p;
    deriv(m, k2x, k2y, k2p);
    m.x = s.x + 0.5 * h * k2x;
    m.y = s.y + 0.5 * h * k2y;
    m.psi = s.psi + 0.5 * h * k2p;
    deriv(m, k3x, k3y, k3p);
    m.x = s.x + h * k3x;
    m.y = s.y + h * k3y;
    m.psi = s.psi + h * k3p;
    deriv(m, k4x, k4y, k4p);
    s.x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    s.y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    s.psi += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
  }
  return s;
}

// Brute-force DBSCAN over a precomputed boolean neighbor matrix, with the
// same seed-order / FIFO-expansion discipline the library documents.
inline std::vector<int> brute_dbscan(const std::vector<std::vector<bool>>& adjacent, int min_pts) {
  const std::size_t n = adjacent.size();
  std::vector<int> labels(n, -2);
  auto neighbors_of = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && adjacent[i][j]) out.push_back(j);
    }
    return out;
  };
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != -2) continue;
    const auto nbrs = neighbors_of(i);
    if (nbrs.size() + 1 < static_cast<std::size_t>(min_pts)) {
      labels[i] = -1;
      continue;
    }
    const int id = next++;
    labels[i] = id;
    std::vector<std::size_t> queue(nbrs.begin(), nbrs.end());
    std::size_t head = 0;
    while (head < queue.size()) {
      const std::size_t q = queue[head++];
      if (labels[q] == -1) labels[q] = id;
      if (labels[q] != -2) continue;
      labels[q] = id;
      const auto qn = neighbors_of(q);
      if (qn.size() + 1 >= static_cast<std::size_t>(min_pts)) {
        for (const std::size_t nb : qn) {
          if (labels[nb] == -2 || labels[nb] == -1) queue.push_back(nb);
        }
      }
    }
  }
  return labels;
}

// Partition comparison up to label renaming (noise must match exactly).
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::vector<int> map_ab, map_ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] < 0) != (b[i] < 0)) return false;
    if (a[i] < 0) continue;
    const std::size_t ai = static_cast<std::size_t>(a[i]);
    const std::size_t bi = static_cast<std::size_t>(b[i]);
    if (map_ab.size() <= ai) map_ab.resize(ai + 1, -1);
    if (map_ba.size() <= bi) map_ba.resize(bi + 1, -1);
    if (map_ab[ai] == -1 && map_ba[bi] == -1) {
      map_ab[ai] = b[i];
      map_ba[bi] = a[i];
    } else if (map_ab[ai] != b[i] || map_ba[bi] != a[i]) {
      return false;
    }
  }
  return true;
}

// Plain-array linear Kalman filter (no Eigen) for the single-model CV check.
struct LinearKf {
  static constexpr int N = 5;
  static constexpr int M = 4;
  std::array<double, N> x{};
  std::array<std::array<double, N>, N> p{};

  static std::array<std::array<double, N>, N> matmul(const std::array<std::array<double, N>, N>& a,
                                                     const std::array<std::array<double, N>, N>& b) {
    std::array<std::array<double, N>, N> c{};
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
  }

  static std::array<std::array<double, N>, N> transpose(const std::array<std::array<double, N>, N>& a) {
    std::array<std::array<double, N>, N> t{};
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) t[i][j] = a[j][i];
    return t;
  }

  void predict(const std::array<std::array<double, N>, N>& f,
               const std::array<std::array<double, N>, N>& q) {
    std::array<double, N> nx{};
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) nx[i] += f[i][j] * x[j];
    x = nx;
    p = matmul(matmul(f, p), transpose(f));
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) p[i][j] += q[i][j];
  }

  // Measurement of states 0..3 with diagonal noise; Joseph-form update.
  void update(const std::array<double, M>& z, const std::array<double, M>& r_diag) {
    double s[M][M];
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) s[i][j] = p[i][j] + (i == j ? r_diag[i] : 0.0);

    // Gauss-Jordan inverse of the 4x4 innovation covariance.
    double inv[M][M] = {};
    for (int i = 0; i < M; ++i) inv[i][i] = 1.0;
    for (int col = 0; col < M; ++col) {
      int piv = col;
      for (int r2 = col + 1; r2 < M; ++r2) {
        if (std::fabs(s[r2][col]) > std::fabs(s[piv][col])) piv = r2;
      }
      std::swap(s[piv], s[col]);
      std::swap(inv[piv], inv[col]);
      const double d = s[col][col];
      for (int j = 0; j < M; ++j) {
        s[col][j] /= d;
        inv[col][j] /= d;
      }
      for (int r2 = 0; r2 < M; ++r2) {
        if (r2 == col) continue;
        const double f = s[r2][col];
        for (int j = 0; j < M; ++j) {
          s[r2][j] -= f * s[col][j];
          inv[r2][j] -= f * inv[col][j];
        }
      }
    }

    double k[N][M] = {};
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < M; ++j)
        for (int m = 0; m < M; ++m) k[i][j] += p[i][m] * inv[m][j];

    std::array<double, M> innov{};
    for (int i = 0; i < M; ++i) innov[i] = z[i] - x[i];
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < M; ++j) x[i] += k[i][j] * innov[j];

    std::array<std::array<double, N>, N> ikh{};
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) ikh[i][j] = (i == j ? 1.0 : 0.0) - (j < M ? k[i][j] : 0.0);
    }
    auto pj = matmul(matmul(ikh, p), transpose(ikh));
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        double krkt = 0.0;
        for (int m = 0; m < M; ++m) krkt += k[i][m] * r_diag[m] * k[j][m];
        p[i][j] = pj[i][j] + krkt;
      }
  }
};

// Deterministic helpers for property tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::uint64_t integer(std::uint64_t bound) { return eng_() % bound; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace oracle
