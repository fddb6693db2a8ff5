#pragma once

// Exact rational linear feasibility by Fourier-Motzkin elimination.
//
// Constraints have the form  sum_i coeff_i * x_i  (>= | =)  rhs.  Every
// derived inequality remembers which input constraints produced it, so an
// infeasible system yields an unsatisfiable subset of its inputs.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cone_forge/geom_core.hpp"

namespace cone_forge {

enum class Relation { GreaterEqual, Equal };

struct LinearConstraint {
  std::map<int, Rational> coeffs;  // variable index -> nonzero coefficient
  Relation relation = Relation::GreaterEqual;
  Rational rhs;
  std::string label;

  /// Exact evaluation under an assignment.
  bool satisfied_by(const std::vector<Rational>& values) const;
};

struct LinearSystem {
  std::vector<std::string> variable_names;
  std::vector<LinearConstraint> constraints;

  int add_variable(std::string name);
  void add(LinearConstraint c);

  std::size_t count(Relation r) const;
};

struct FeasibilityResult {
  bool feasible = false;
  std::vector<Rational> witness;          // when feasible
  std::vector<int> certificate;           // input constraint indices, when infeasible
  std::size_t eliminated_inequalities = 0;  // size of the largest intermediate system
};

/// Decides feasibility of the system. A feasible result carries a witness
/// that satisfies every constraint by exact substitution; among the feasible
/// values of each back-substituted variable the one of least magnitude is
/// chosen. An infeasible result carries the smallest contradiction found.
FeasibilityResult solve_fourier_motzkin(const LinearSystem& system);

}  // namespace cone_forge
