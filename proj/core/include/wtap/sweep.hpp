#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wtap/channel.hpp"
#include "wtap/regions_discrete.hpp"

namespace wtap {

enum class SweepRegion { DegradedInner, DegradedOuter, GeneralInner };

struct SweepConfig {
  std::size_t budget = 64;
  std::uint64_t seed = 1;
  SweepRegion region = SweepRegion::DegradedInner;
  // Zero picks the defaults |U| = |X|+3, |V1| = |V2| = |X|+1.
  std::size_t card_u = 0;
  std::size_t card_q = 2;
  std::size_t card_v = 0;
  double tol = 1e-9;
};

struct SweepSample {
  std::uint64_t aux_hash = 0;
  RegionPoint constants;
  VPolytope polytope;
};

// Raw cloud of every per-sample vertex plus the extreme points of its hull.
struct SweepResult {
  std::vector<std::string> vars;
  std::vector<SweepSample> samples;
  std::vector<Eigen::VectorXd> cloud;
  std::vector<Eigen::VectorXd> hull;
};

// Sample i depends only on (seed, i), so a larger budget extends a smaller
// one. The first samples are fixed corners: uniform table, U = X, and
// (degraded case) deterministic U.
AuxJoint sweep_aux(const ChannelSpec& ch, const SweepConfig& cfg, std::size_t index);
SweepResult sweep_inner_region(const ChannelSpec& ch, const SweepConfig& cfg);

std::uint64_t fnv1a(const std::string& bytes);
std::uint64_t aux_hash(const ProbTable& t);

bool hull_contains(const std::vector<Eigen::VectorXd>& pts, const Eigen::VectorXd& x, double tol);
std::vector<Eigen::VectorXd> hull_extreme_points(const std::vector<Eigen::VectorXd>& pts, double tol);

}  // namespace wtap
