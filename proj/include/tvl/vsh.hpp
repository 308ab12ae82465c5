#pragma once

// Scalar and vector spherical harmonics for l <= 2, the angular Laplacian
// on the (Upsilon, Psi, Phi) triple, its diagonalizing basis change, and
// transverse fields assembled from radial profiles.

#include <array>
#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "tvl/radial_function.hpp"

namespace tvl::vsh {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<cplx, 3>;

enum class Family { Upsilon, Psi, Phi };
enum class Convention { Complex, Real };

struct AngularPoint {
  double theta = 0.0;
  double phi = 0.0;

  static AngularPoint from_vector(const Vec3& x);
  Vec3 unit() const;
};

/// Normalized harmonic Y_lm (Condon-Shortley phase) or its real counterpart.
cplx eval_Y(int l, int m, const AngularPoint& p, Convention c = Convention::Complex);

/// Upsilon = x/r Y, Psi = r grad Y / sqrt(l(l+1)), Phi = x cross grad Y / sqrt(l(l+1)).
CVec3 eval_vsh(Family f, int l, int m, const AngularPoint& p, Convention c = Convention::Complex);
/// The same field evaluated at an arbitrary nonzero point; depends on x/|x| only.
CVec3 eval_vsh(Family f, int l, int m, const Vec3& x, Convention c = Convention::Complex);

struct VshIndex {
  Family family;
  int l;
  int m;
};

/// All (family, l, m) with l <= 2: 9 Upsilon, 8 Psi, 8 Phi.
std::vector<VshIndex> all_indices();

/// Product rule: Gauss-Legendre in cos(theta) times trapezoid in phi.
struct SphereRule {
  std::vector<AngularPoint> points;
  std::vector<double> weights;
};
SphereRule sphere_rule(int n_theta = 12, int n_phi = 12);

/// Gram matrix of all_indices() under sphere_rule.
Eigen::MatrixXcd gram_matrix(Convention c = Convention::Complex);

/// Closed-form action of the angular Laplacian (sign with Delta Y = l(l+1) Y)
/// on (Upsilon, Psi, Phi) at fixed (l, m).
Eigen::Matrix3d angular_laplacian_matrix(int l);

/// The same matrix from Cartesian-componentwise finite differences of the
/// Laplace-Beltrami operator (step 1e-4, one Richardson level) projected
/// back by sphere quadrature.
Eigen::Matrix3cd angular_laplacian_numeric(int l, int m, double step = 1e-4);

/// Orthogonal M with rows (sqrt(l), sqrt(l+1)) and (-sqrt(l+1), sqrt(l)) over sqrt(2l+1).
Eigen::Matrix2d basis_change(int l);

struct FieldComponent {
  int l;
  int m;
  RadialFunction u;
};

/// f = sum sqrt(l(l+1)) u/r^2 Upsilon + u'/r Psi.
struct TransverseField {
  std::vector<FieldComponent> components;
};

CVec3 eval_field(const TransverseField& F, const Vec3& x);

struct DivergenceSample {
  Vec3 x;
  double divergence;    // |div f|
  double gradient_norm; // Frobenius norm of the Jacobian
  double relative;
};

/// Central-difference divergence (step h |x|, one Richardson level).
DivergenceSample divergence_check(const TransverseField& F, const Vec3& x, double h = 1e-3);

/// max |curl(-(u/r) Phi_lm) - f| / |f| over the points, summed over components.
/// With Phi = x cross grad Y the potential carries a minus sign.
double curl_form_check(const TransverseField& F, const std::vector<Vec3>& points, double h = 1e-3);

/// Deterministic pseudo-random points with radius in [r_min, r_max].
std::vector<Vec3> sample_points(int n, double r_min, double r_max, unsigned seed);

/// CSV rows x,y,z,re_fx,im_fx,re_fy,im_fy,re_fz,im_fz.
void write_field_csv(std::ostream& os, const TransverseField& F, const std::vector<Vec3>& points);

}  // namespace tvl::vsh
