#include "sheafbar/cone_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "sheafbar/errors.hpp"
#include "sheafbar/text_io.hpp"

namespace sheafbar {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
// Points nearest to x that feed the pair secants at one scale; pairs grow
// quadratically, one-point secants are taken from every neighbour.
constexpr std::size_t kMaxPairNeighbours = 64;

double angle_deg(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const double c = u.dot(v) / (u.norm() * v.norm());
  return std::acos(std::clamp(c, -1.0, 1.0)) / kDeg;
}

// Greedy clustering: a direction is kept unless a kept one is within tol.
void add_direction(std::vector<Eigen::VectorXd>& set, const Eigen::VectorXd& d, double tol_deg) {
  for (const auto& e : set) {
    if (angle_deg(e, d) <= tol_deg) return;
  }
  set.push_back(d);
}

// Points y != x with |y - x| <= r, nearest first, at most `cap`.
std::vector<Eigen::VectorXd> neighbours(const PointCloud& cloud, const Eigen::VectorXd& x, double r,
                                        bool include_x, std::size_t cap) {
  std::vector<std::pair<double, std::size_t>> near;
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const double d = (cloud.points()[k] - x).norm();
    if (d <= r && (include_x || d > 0)) near.emplace_back(d, k);
  }
  std::sort(near.begin(), near.end());
  if (near.size() > cap) near.resize(cap);
  std::vector<Eigen::VectorXd> out;
  for (const auto& [d, k] : near) out.push_back(cloud.points()[k]);
  return out;
}

std::vector<Eigen::VectorXd> contingent_secants(const PointCloud& cloud, const Eigen::VectorXd& x, double r,
                                                double tol_deg) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& y : neighbours(cloud, x, r, false, cloud.size())) add_direction(out, (y - x).normalized(), tol_deg);
  return out;
}

std::vector<Eigen::VectorXd> paratingent_secants(const PointCloud& cloud, const Eigen::VectorXd& x, double r,
                                                 double tol_deg) {
  const auto pts = neighbours(cloud, x, r, true, kMaxPairNeighbours);
  std::vector<Eigen::VectorXd> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Eigen::VectorXd d = pts[j] - pts[i];
      if (d.norm() == 0) continue;
      add_direction(out, d.normalized(), tol_deg);
      add_direction(out, (-d).normalized(), tol_deg);
    }
  }
  return out;
}

template <class Secants>
DirectionSet persistent_directions(const PointCloud& cloud, const Eigen::VectorXd& x, const ConeParams& params,
                                   Secants&& secants, const char* name) {
  if (x.size() != cloud.dimension()) throw DomainError(std::string(name) + ": base point has the wrong dimension");
  const std::vector<double> scales = params.effective_scales();
  const double tol = params.resolution_deg;
  const std::size_t half = (scales.size() + 1) / 2;
  const double coarse = scales[scales.size() - half];
  const double fine = scales.back();
  const auto finest = secants(cloud, x, fine, tol / 2);
  if (finest.empty()) throw DomainError(std::string(name) + ": no secant within the finest scale");
  DirectionSet out;
  out.resolution_deg = tol;
  for (const auto& d : secants(cloud, x, coarse, tol / 2)) {
    const bool persists = std::any_of(finest.begin(), finest.end(),
                                      [&](const Eigen::VectorXd& s) { return angle_deg(s, d) <= tol; });
    if (persists) add_direction(out.directions, d, tol / 2);
  }
  return out;
}

// Unit vectors of R^m on a hyperspherical-angle grid; the first is e_1.
std::vector<Eigen::VectorXd> sphere_grid(int m, double step_deg) {
  std::vector<Eigen::VectorXd> out;
  if (m == 1) {
    out.push_back(Eigen::VectorXd::Constant(1, 1.0));
    out.push_back(Eigen::VectorXd::Constant(1, -1.0));
    return out;
  }
  const int polar_steps = static_cast<int>(std::lround(180.0 / step_deg));
  const int azimuth_steps = static_cast<int>(std::lround(360.0 / step_deg));
  std::vector<int> idx(static_cast<std::size_t>(m - 1), 0);
  for (;;) {
    Eigen::VectorXd v(m);
    double sin_prod = 1.0;
    for (int k = 0; k < m - 1; ++k) {
      const bool last = k == m - 2;
      const double phi = idx[static_cast<std::size_t>(k)] * (last ? 360.0 / azimuth_steps : 180.0 / polar_steps) * kDeg;
      v(k) = sin_prod * std::cos(phi);
      sin_prod *= std::sin(phi);
    }
    v(m - 1) = sin_prod;
    out.push_back(v.normalized());
    int k = m - 2;
    for (; k >= 0; --k) {
      auto& i = idx[static_cast<std::size_t>(k)];
      const int limit = k == m - 2 ? azimuth_steps : polar_steps + 1;
      if (++i < limit) break;
      i = 0;
    }
    if (k < 0) break;
  }
  return out;
}

Rational rational_power(const Rational& base, int exponent) {
  Rational r = 1;
  for (int k = 0; k < exponent; ++k) r *= base;
  return r;
}

void check_cantor_parameters(const Rational& a, int level, int half_dimension, const Rational& max_ratio,
                             bool ratio_inclusive) {
  if (!(a > 0) || (ratio_inclusive ? a > max_ratio : a >= max_ratio)) {
    throw DomainError("Cantor ratio must lie in (0, " + to_string(max_ratio) + (ratio_inclusive ? "]" : ")") +
                      ", got " + to_string(a));
  }
  if (level < 1) throw DomainError("Cantor level must be at least 1");
  if (half_dimension < 1) throw DomainError("half dimension must be at least 1");
}

}  // namespace

PointCloud::PointCloud(int dimension, std::vector<Eigen::VectorXd> points) : dimension_(dimension) {
  if (dimension < 2 || dimension % 2 != 0) {
    throw DomainError("point cloud dimension must be even and at least 2, got " + std::to_string(dimension));
  }
  std::set<std::vector<double>> seen;
  for (auto& p : points) {
    if (p.size() != dimension) throw DomainError("point of dimension " + std::to_string(p.size()) + " in a " +
                                                 std::to_string(dimension) + "-dimensional cloud");
    if (!p.allFinite()) throw DomainError("point cloud coordinate is not finite");
    if (seen.insert(std::vector<double>(p.data(), p.data() + p.size())).second) points_.push_back(std::move(p));
  }
}

bool DirectionSet::contains(const Eigen::VectorXd& v, double tol_deg) const { return angle_to(v) <= tol_deg; }

double DirectionSet::angle_to(const Eigen::VectorXd& v) const {
  double best = 180.0;
  for (const auto& d : directions) best = std::min(best, angle_deg(d, v));
  return best;
}

std::vector<double> ConeParams::effective_scales() const {
  std::vector<double> s = scales;
  if (s.empty()) {
    for (int j = 0; j <= 8; ++j) s.push_back(std::ldexp(1.0, -j));
  }
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!(s[k] > 0) || (k > 0 && !(s[k] < s[k - 1]))) throw DomainError("scales must be positive and strictly decreasing");
  }
  return s;
}

DirectionSet contingent(const PointCloud& cloud, const Eigen::VectorXd& x, const ConeParams& params) {
  return persistent_directions(cloud, x, params, contingent_secants, "contingent");
}

DirectionSet paratingent(const PointCloud& cloud, const Eigen::VectorXd& x, const ConeParams& params) {
  return persistent_directions(cloud, x, params, paratingent_secants, "paratingent");
}

Eigen::MatrixXd symplectic_matrix(int dimension) {
  const int n = dimension / 2;
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dimension, dimension);
  omega.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  omega.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return omega;
}

Eigen::VectorXd symplectic_dual(const Eigen::VectorXd& normal) {
  // u^T Omega v = 0 for all u orthogonal to the normal iff Omega v is parallel to it.
  return (symplectic_matrix(static_cast<int>(normal.size())).transpose() * normal).normalized();
}

std::string_view to_string(CoisotropyKind k) {
  switch (k) {
    case CoisotropyKind::CoisotropicVacuous: return "coisotropic-vacuous";
    case CoisotropyKind::Coisotropic: return "coisotropic";
    case CoisotropyKind::NotCoisotropic: return "not-coisotropic";
  }
  return "coisotropic";
}

CoisotropyVerdict cone_coisotropy_test(const PointCloud& cloud, const Eigen::VectorXd& x, const ConeParams& params) {
  const DirectionSet plus = paratingent(cloud, x, params);
  const DirectionSet minus = contingent(cloud, x, params);
  const int dim = cloud.dimension();
  CoisotropyVerdict verdict;

  Eigen::MatrixXd rows(static_cast<Eigen::Index>(plus.directions.size()), dim);
  for (std::size_t k = 0; k < plus.directions.size(); ++k) rows.row(static_cast<Eigen::Index>(k)) = plus.directions[k].transpose();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = params.singular_value_threshold * (sv.size() > 0 ? sv(0) : 0.0);
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) rank += sv(k) > cut ? 1 : 0;
  verdict.span_rank = rank;
  if (rank == dim) {
    verdict.kind = CoisotropyKind::CoisotropicVacuous;
    return verdict;
  }

  // Orthonormal basis of the complement of the span, built from the coordinate
  // axes in order so that coordinate-aligned spans give coordinate normals.
  const Eigen::MatrixXd span = svd.matrixV().leftCols(rank);
  std::vector<Eigen::VectorXd> basis;
  for (int k = 0; k < dim && static_cast<int>(basis.size()) < dim - rank; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(dim, k);
    e -= span * (span.transpose() * e);
    for (const auto& b : basis) e -= b * b.dot(e);
    if (e.norm() > 1e-6) basis.push_back(e.normalized());
  }
  const int m = static_cast<int>(basis.size());
  Eigen::MatrixXd w(dim, m);
  for (int k = 0; k < m; ++k) w.col(k) = basis[static_cast<std::size_t>(k)];

  // Angle by which the line spanned by the symplectic dual leaves C^-.
  auto margin = [&](const Eigen::VectorXd& coords) {
    const Eigen::VectorXd dual = symplectic_dual(w * coords);
    return std::max(minus.angle_to(dual), minus.angle_to(-dual));
  };

  const auto grid = sphere_grid(m, params.sphere_step_deg);
  verdict.normals_checked = grid.size();
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) scored.emplace_back(margin(grid[k]), k);
  // Refine from the worst normals and from near-failures, at half, quarter and
  // eighth of the grid step.
  std::vector<std::size_t> seeds;
  const double best_coarse = std::max_element(scored.begin(), scored.end())->first;
  for (const auto& [score, k] : scored) {
    if (score >= best_coarse - 1e-9 || score > params.resolution_deg - params.sphere_step_deg) seeds.push_back(k);
    if (seeds.size() >= 16) break;
  }
  Eigen::VectorXd best = grid[seeds.empty() ? 0 : seeds.front()];
  double best_score = margin(best);
  for (std::size_t seed : seeds) {
    Eigen::VectorXd cur = grid[seed];
    double cur_score = margin(cur);
    for (double step = params.sphere_step_deg / 2; step >= params.sphere_step_deg / 8; step /= 2) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (int k = 0; k < m; ++k) {
          for (double sign : {1.0, -1.0}) {
            Eigen::VectorXd trial = cur;
            trial(k) += sign * std::tan(step * kDeg);
            trial.normalize();
            ++verdict.normals_checked;
            const double s = margin(trial);
            if (s > cur_score + 1e-9) {
              cur = trial;
              cur_score = s;
              improved = true;
            }
          }
        }
      }
    }
    if (cur_score > best_score + 1e-9) {
      best = cur;
      best_score = cur_score;
    }
  }
  if (best_score > params.resolution_deg) {
    verdict.kind = CoisotropyKind::NotCoisotropic;
    verdict.witness_normal = (w * best).normalized();
    verdict.witness_angle_deg = best_score;
  } else {
    verdict.kind = CoisotropyKind::Coisotropic;
  }
  return verdict;
}

std::vector<Rational> cantor_left_endpoints(const Rational& a, int level) {
  std::vector<Rational> lefts{Rational(0)};
  Rational length = 1;
  for (int k = 1; k <= level; ++k) {
    const Rational next = length * a;
    std::vector<Rational> refined;
    refined.reserve(lefts.size() * 2);
    for (const Rational& l : lefts) {
      refined.push_back(l);
      refined.push_back(l + length - next);
    }
    lefts = std::move(refined);
    length = next;
  }
  return lefts;
}

CubeFamily cantor_cubes(const Rational& a, int level, int half_dimension) {
  check_cantor_parameters(a, level, half_dimension, Rational(1, 2), false);
  const int dim = 2 * half_dimension;
  // 2^{dim * level} cubes.
  if (static_cast<long long>(dim) * level >= 63 || (1ULL << (dim * level)) > kCubeBudget) {
    throw DomainError("Cantor cube count 2^" + std::to_string(dim * level) + " exceeds the budget of " +
                      std::to_string(kCubeBudget));
  }
  CubeFamily family{a, level, half_dimension, {}};
  const std::vector<Rational> lefts = cantor_left_endpoints(a, level);
  const Rational edge = rational_power(a, level);
  const std::size_t per_axis = lefts.size();
  std::size_t total = 1;
  for (int k = 0; k < dim; ++k) total *= per_axis;
  family.cubes.reserve(total);
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
  for (std::size_t c = 0; c < total; ++c) {
    Cube cube{{}, edge};
    for (int k = 0; k < dim; ++k) cube.corner.push_back(lefts[idx[static_cast<std::size_t>(k)]]);
    family.cubes.push_back(std::move(cube));
    for (int k = dim - 1; k >= 0; --k) {
      if (++idx[static_cast<std::size_t>(k)] < per_axis) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
  }
  return family;
}

PointCloud cube_corner_cloud(const CubeFamily& family) {
  const int dim = 2 * family.half_dimension;
  std::vector<Eigen::VectorXd> pts;
  for (const Cube& cube : family.cubes) {
    for (unsigned mask = 0; mask < (1U << dim); ++mask) {
      Eigen::VectorXd p(dim);
      for (int k = 0; k < dim; ++k) {
        Rational c = cube.corner[static_cast<std::size_t>(k)];
        if (mask & (1U << k)) c += cube.edge;
        p(k) = c.convert_to<double>();
      }
      pts.push_back(std::move(p));
    }
  }
  return PointCloud(dim, std::move(pts));
}

Rational displacement_bound(const Rational& a, int level, int half_dimension) {
  check_cantor_parameters(a, level, half_dimension, Rational(1, 2), true);
  const Rational four_n = rational_power(Rational(2), 2 * half_dimension);
  return rational_power(four_n * a, level);
}

PointCloud parse_cloud_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  int dim = -1;
  std::vector<Eigen::VectorXd> pts;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(raw);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("not a number: '" + cell + "'", line_no);
      }
    }
    if (dim < 0) dim = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != dim) {
      throw ParseError("expected " + std::to_string(dim) + " columns, found " + std::to_string(row.size()), line_no);
    }
    pts.push_back(Eigen::Map<Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(row.size())));
  }
  if (dim < 0) throw ParseError("point cloud has no rows");
  try {
    return PointCloud(dim, std::move(pts));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

PointCloud read_cloud_csv(const std::filesystem::path& path) { return parse_cloud_csv(read_text_file(path)); }

std::string emit_cloud_csv(const PointCloud& cloud) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& p : cloud.points()) {
    for (Eigen::Index k = 0; k < p.size(); ++k) out << (k ? "," : "") << p(k);
    out << '\n';
  }
  return out.str();
}

}  // namespace sheafbar
