#pragma once

#include <stdexcept>
#include <string>

#include "snalab/arcset.hpp"
#include "snalab/circle.hpp"

namespace snalab {

enum class FamilyKind { ArctanFamily, DrivenArnold, ProjectiveCocycle, RigidTest };
enum class ForcingKind { Cosine, ArctanSine, None };

// Cosine: amplitude * cos(2 pi theta).
// ArctanSine: arctan(amplitude * sin(2 pi theta)) / pi, amplitude playing beta.
struct Forcing {
  ForcingKind kind = ForcingKind::None;
  double amplitude = 0.0;
  bool operator==(const Forcing&) const = default;
};

class NotDiffeomorphicError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Fibre maps x -> f_theta(x) of the skew product (theta, x) -> (theta + omega, f_theta(x)).
class CircleMapFamily {
 public:
  static CircleMapFamily arctan(int q, double alpha, double tau, Forcing forcing, Phase omega);
  static CircleMapFamily driven_arnold(double alpha, double beta, double tau, Phase omega);
  static CircleMapFamily projective_cocycle(double alpha, double tau, Forcing forcing, Phase omega);
  static CircleMapFamily rigid(double shift, Phase omega, Forcing forcing = {});

  FamilyKind kind() const { return kind_; }
  int q() const { return q_; }
  double alpha() const { return alpha_; }
  double tau() const { return tau_; }
  double beta() const { return forcing_.kind == ForcingKind::ArctanSine ? forcing_.amplitude : 0.0; }
  const Forcing& forcing() const { return forcing_; }
  Phase omega() const { return omega_; }
  // 2 a_q(alpha/2) for the arctan family, 1 otherwise.
  double normalizer() const { return norm_; }

  CircleMapFamily with_tau(double tau) const;
  CircleMapFamily with_forcing(Forcing forcing) const;
  CircleMapFamily with_omega(Phase omega) const;

 private:
  CircleMapFamily() = default;
  void validate() const;

  FamilyKind kind_ = FamilyKind::RigidTest;
  int q_ = 2;
  double alpha_ = 1.0;
  double tau_ = 0.0;
  Forcing forcing_{};
  Phase omega_ = 0.0L;
  double norm_ = 1.0;
};

std::string to_string(FamilyKind kind);
std::string to_string(ForcingKind kind);

// a_q(x) = int_0^x d zeta / (1 + |zeta|^q).
double aq(int q, double x);
CircleAngle hq(int q, double alpha, CircleAngle x);

double forcing_value(const Forcing& forcing, Phase theta);
double forcing_derivative(const Forcing& forcing, Phase theta);

// Continuous lift F_theta with F(x + 1) = F(x) + 1.
double fiber_lift(const CircleMapFamily& fam, Phase theta, double xhat);
inline double fiber_lift_displacement(const CircleMapFamily& fam, Phase theta, double xhat) {
  return fiber_lift(fam, theta, xhat);
}
CircleAngle fiber_map(const CircleMapFamily& fam, Phase theta, CircleAngle x);
double fiber_derivative(const CircleMapFamily& fam, Phase theta, CircleAngle x);
double fiber_derivative_lift(const CircleMapFamily& fam, Phase theta, double xhat);
double fiber_theta_derivative(const CircleMapFamily& fam, Phase theta, CircleAngle x);

// Solves F_theta(xhat) = yhat for real xhat. Throws NotDiffeomorphicError.
double fiber_lift_inverse(const CircleMapFamily& fam, Phase theta, double yhat);
CircleAngle fiber_inverse(const CircleMapFamily& fam, Phase theta, CircleAngle y);

struct ContractionExpansionData {
  Arc C;
  Arc E;
  double alpha_bound = 0.0;
  double S = 0.0;
  ArcSet I0;
  std::size_t n_components = 0;
  double level = 0.0;           // threshold a used to extract C and E
  double sup_derivative = 0.0;  // global sup of f' on the grid
  double inf_derivative = 0.0;  // global inf of f' on the grid
};

struct ConstantsEstimate {
  bool split_found = false;
  std::string reason;
  ContractionExpansionData data;
};

ConstantsEstimate estimate_constants(const CircleMapFamily& fam, int theta_grid_size, int x_grid_size);

// Axiom (2) at a single theta: the image of the complement of int(E) lies in int(C).
bool axiom2_holds(const CircleMapFamily& fam, const Arc& C, const Arc& E, Phase theta);

}  // namespace snalab
