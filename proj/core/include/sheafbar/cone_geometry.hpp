#pragma once

// Bouligand cones of sampled subsets of R^{2n} with the standard symplectic
// form sum dq_i ^ dp_i, coordinates laid out as (q_1..q_n, p_1..p_n).
// Double precision throughout; angles are in degrees at the interface.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sheafbar/interval.hpp"

namespace sheafbar {

class PointCloud {
 public:
  // Throws DomainError on an odd or zero dimension, a row of the wrong size or
  // a non-finite coordinate. Exact duplicates are dropped.
  PointCloud(int dimension, std::vector<Eigen::VectorXd> points);

  int dimension() const noexcept { return dimension_; }
  const std::vector<Eigen::VectorXd>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

 private:
  int dimension_;
  std::vector<Eigen::VectorXd> points_;
};

struct DirectionSet {
  std::vector<Eigen::VectorXd> directions;  // unit vectors
  double resolution_deg = 5.0;

  // Some member lies within `tol_deg` of v (v need not be normalized).
  bool contains(const Eigen::VectorXd& v, double tol_deg) const;
  // Smallest angle between v and a member; 180 when empty.
  double angle_to(const Eigen::VectorXd& v) const;
};

struct ConeParams {
  // Strictly decreasing radii; empty means 2^{-j}, j = 0..8.
  std::vector<double> scales;
  double resolution_deg = 5.0;
  double singular_value_threshold = 1e-3;  // relative to the largest
  double sphere_step_deg = 10.0;

  std::vector<double> effective_scales() const;
};

// Secant directions (y - x)/|y - x| from the coarsest of the finest half of
// the scales that are matched within the resolution at the finest scale.
// Throws DomainError when the finest neighbourhood has no point besides x.
DirectionSet contingent(const PointCloud& cloud, const Eigen::VectorXd& x, const ConeParams& params = {});

// Same with secants (y - z)/|y - z| over pairs near x; closed under v -> -v.
DirectionSet paratingent(const PointCloud& cloud, const Eigen::VectorXd& x, const ConeParams& params = {});

// Omega such that omega(u, v) = u^T Omega v for the standard form.
Eigen::MatrixXd symplectic_matrix(int dimension);

// Direction spanning the symplectic orthogonal of ker <normal, .>.
Eigen::VectorXd symplectic_dual(const Eigen::VectorXd& normal);

enum class CoisotropyKind { CoisotropicVacuous, Coisotropic, NotCoisotropic };
std::string_view to_string(CoisotropyKind k);

struct CoisotropyVerdict {
  CoisotropyKind kind = CoisotropyKind::Coisotropic;
  int span_rank = 0;
  std::size_t normals_checked = 0;
  // NotCoisotropic: the hyperplane normal whose symplectic orthogonal leaves
  // the contingent cone by the widest angle, and that angle.
  std::optional<Eigen::VectorXd> witness_normal;
  double witness_angle_deg = 0.0;
};

// Coisotropic means no witness was found on the sphere grid (one-sided).
CoisotropyVerdict cone_coisotropy_test(const PointCloud& cloud, const Eigen::VectorXd& x,
                                       const ConeParams& params = {});

struct Cube {
  std::vector<Rational> corner;  // lowest corner
  Rational edge;
};

struct CubeFamily {
  Rational ratio;
  int level = 0;
  int half_dimension = 0;
  std::vector<Cube> cubes;
};

inline constexpr std::size_t kCubeBudget = 1000000;

// Level-k cubes covering the 2n-fold product of the central Cantor set of
// ratio a. Needs 0 < a < 1/2, k >= 1, n >= 1 and at most kCubeBudget cubes.
CubeFamily cantor_cubes(const Rational& a, int level, int half_dimension);

// Intervals [left, left + a^k] of the level-k Cantor set, by left endpoint.
std::vector<Rational> cantor_left_endpoints(const Rational& a, int level);

// Every corner of every cube, as a point cloud.
PointCloud cube_corner_cloud(const CubeFamily& family);

// 2^{2nk} a^k: cubes moved times the size of each move, unit constants.
// Needs 0 < a <= 1/2, k >= 1, n >= 1.
Rational displacement_bound(const Rational& a, int level, int half_dimension);

// One point per row, comma separated; '#' starts a comment.
PointCloud parse_cloud_csv(std::string_view text);
PointCloud read_cloud_csv(const std::filesystem::path& path);
std::string emit_cloud_csv(const PointCloud& cloud);

}  // namespace sheafbar
