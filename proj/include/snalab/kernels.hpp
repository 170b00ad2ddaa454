#pragma once

// Hot loops. Each kernel has a serial reference and an OpenMP version that
// writes the same disjoint output slots, so the two agree bit for bit.

#include <cstdint>
#include <functional>
#include <span>

#include "snalab/families.hpp"

namespace snalab {

enum class Exec { Serial, Parallel };
enum class GraphDirection { Attractor, Repeller };

struct GraphPoint {
  double theta;
  double x;
};

struct OrbitSummary {
  double rotation_number = 0.0;
  double lyapunov = 0.0;
  double lyapunov_se = 0.0;
};

namespace kernels {

// phi_m(theta) = f^m_{theta - m omega}(seed); Repeller iterates inverse fibres from theta + m omega.
double pullback_value(const CircleMapFamily& fam, GraphDirection dir, Phase theta, int depth, double seed);

// One extra exact step compared with a fresh pullback at the neighbouring angle.
double invariance_defect(const CircleMapFamily& fam, GraphDirection dir, Phase theta, double phi, int depth,
                         double seed);

void pullback_serial(const CircleMapFamily& fam, GraphDirection dir, std::span<const Phase> theta, int depth,
                     double seed, std::span<double> phi, std::span<double> residual);
void pullback_parallel(const CircleMapFamily& fam, GraphDirection dir, std::span<const Phase> theta, int depth,
                       double seed, std::span<double> phi, std::span<double> residual);

// theta in I_n enters I_{n+1} iff f^{M-1}_{theta-(M-1)omega}(C) meets (f^{M+1}_theta)^{-1}(E).
// long_arc reports whether a tracked image arc exceeded length 1/2.
bool critical_membership(const CircleMapFamily& fam, const Arc& C, const Arc& E, Phase theta, std::int64_t M,
                         bool* long_arc = nullptr);
void critical_scan_serial(const CircleMapFamily& fam, const Arc& C, const Arc& E, std::span<const Phase> theta,
                          std::int64_t M, std::span<char> member, std::span<char> long_arc);
void critical_scan_parallel(const CircleMapFamily& fam, const Arc& C, const Arc& E, std::span<const Phase> theta,
                            std::int64_t M, std::span<char> member, std::span<char> long_arc);

// Rotation number and Birkhoff exponent along one orbit.
OrbitSummary orbit_summary(const CircleMapFamily& fam, Phase theta0, double x0, std::int64_t n);

// Sweep over family members; `row` is called in index order as results complete.
using SweepRow = std::function<void(std::size_t index, const OrbitSummary* result, const char* error)>;
void sweep_serial(std::span<const CircleMapFamily> members, Phase theta0, double x0, std::int64_t n,
                  const SweepRow& row);
void sweep_parallel(std::span<const CircleMapFamily> members, Phase theta0, double x0, std::int64_t n,
                    const SweepRow& row);

// out[c * eps.size() + e] = fraction of graph points within max-metric distance eps[e] of centers[c].
// theta must be sorted ascending (uniform grid samples).
void ball_measures_serial(std::span<const double> theta, std::span<const double> phi,
                          std::span<const GraphPoint> centers, std::span<const double> eps, std::span<double> out);
void ball_measures_parallel(std::span<const double> theta, std::span<const double> phi,
                            std::span<const GraphPoint> centers, std::span<const double> eps,
                            std::span<double> out);

}  // namespace kernels
}  // namespace snalab
