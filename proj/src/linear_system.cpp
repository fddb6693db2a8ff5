#include "cone_forge/linear_system.hpp"

#include <algorithm>
#include <stdexcept>

namespace cone_forge {

namespace {

struct Row {
  std::vector<Rational> a;
  Rational rhs;
  std::set<int> provenance;

  bool is_constant() const {
    return std::all_of(a.begin(), a.end(), [](const Rational& c) { return c == 0; });
  }
};

// a_r += factor * a_s
void add_scaled(Row& r, const Row& s, const Rational& factor) {
  for (std::size_t j = 0; j < r.a.size(); ++j) {
    if (s.a[j] != 0) r.a[j] += factor * s.a[j];
  }
  r.rhs += factor * s.rhs;
  r.provenance.insert(s.provenance.begin(), s.provenance.end());
}

// Scale so that the first nonzero coefficient has magnitude one.
void normalize(Row& r) {
  for (const Rational& c : r.a) {
    if (c != 0) {
      Rational scale = c < 0 ? Rational(-1) / c : Rational(1) / c;
      for (Rational& x : r.a) x *= scale;
      r.rhs *= scale;
      return;
    }
  }
}

bool better(const Row& candidate, const Row& incumbent) {
  if (candidate.rhs != incumbent.rhs) return candidate.rhs > incumbent.rhs;
  return candidate.provenance.size() < incumbent.provenance.size();
}

struct Contradiction {
  std::set<int> provenance;
};

// Drops satisfied constant rows and merges parallel rows, keeping the
// tightest. Returns the smallest contradiction if one is present.
std::optional<Contradiction> simplify(std::vector<Row>& rows) {
  std::map<std::vector<Rational>, Row> unique;
  std::optional<Contradiction> worst;
  for (Row& r : rows) {
    if (r.is_constant()) {
      if (r.rhs > 0 && (!worst || r.provenance.size() < worst->provenance.size())) {
        worst = Contradiction{r.provenance};
      }
      continue;
    }
    normalize(r);
    auto it = unique.find(r.a);
    if (it == unique.end()) {
      unique.emplace(r.a, std::move(r));
    } else if (better(r, it->second)) {
      it->second = std::move(r);
    }
  }
  rows.clear();
  for (auto& [key, row] : unique) rows.push_back(std::move(row));
  return worst;
}

struct EliminationStep {
  int variable;
  std::vector<Row> rows;  // rows mentioning `variable` before it was eliminated
};

constexpr std::size_t kRowLimit = 200000;

}  // namespace

bool LinearConstraint::satisfied_by(const std::vector<Rational>& values) const {
  Rational lhs = 0;
  for (const auto& [var, c] : coeffs) lhs += c * values.at(static_cast<std::size_t>(var));
  return relation == Relation::Equal ? lhs == rhs : lhs >= rhs;
}

int LinearSystem::add_variable(std::string name) {
  variable_names.push_back(std::move(name));
  return static_cast<int>(variable_names.size()) - 1;
}

void LinearSystem::add(LinearConstraint c) {
  for (auto it = c.coeffs.begin(); it != c.coeffs.end();) {
    if (it->first < 0 || it->first >= static_cast<int>(variable_names.size())) {
      throw std::invalid_argument("LinearSystem::add: unknown variable in '" + c.label + "'");
    }
    it = it->second == 0 ? c.coeffs.erase(it) : std::next(it);
  }
  constraints.push_back(std::move(c));
}

std::size_t LinearSystem::count(Relation r) const {
  return static_cast<std::size_t>(
      std::count_if(constraints.begin(), constraints.end(), [r](const LinearConstraint& c) { return c.relation == r; }));
}

FeasibilityResult solve_fourier_motzkin(const LinearSystem& system) {
  const std::size_t n = system.variable_names.size();
  FeasibilityResult result;

  std::vector<Row> equalities, inequalities;
  for (std::size_t idx = 0; idx < system.constraints.size(); ++idx) {
    const auto& c = system.constraints[idx];
    Row r{std::vector<Rational>(n), c.rhs, {static_cast<int>(idx)}};
    for (const auto& [var, coef] : c.coeffs) r.a[static_cast<std::size_t>(var)] = coef;
    (c.relation == Relation::Equal ? equalities : inequalities).push_back(std::move(r));
  }

  auto fail = [&](const std::set<int>& provenance) {
    result.feasible = false;
    result.certificate.assign(provenance.begin(), provenance.end());
    return result;
  };

  // Gauss-Jordan on the equalities: each pivot row ends up expressing its
  // pivot in terms of never-pivoted variables.
  std::vector<std::pair<int, Row>> pivots;
  for (std::size_t e = 0; e < equalities.size(); ++e) {
    Row& eq = equalities[e];
    int pivot = -1;
    for (int j = static_cast<int>(n) - 1; j >= 0; --j) {
      if (eq.a[static_cast<std::size_t>(j)] != 0) { pivot = j; break; }
    }
    if (pivot < 0) {
      if (eq.rhs != 0) return fail(eq.provenance);
      continue;
    }
    const Rational p = eq.a[static_cast<std::size_t>(pivot)];
    auto eliminate_from = [&](Row& r) {
      const Rational c = r.a[static_cast<std::size_t>(pivot)];
      if (c != 0) add_scaled(r, eq, -c / p);
    };
    for (std::size_t f = e + 1; f < equalities.size(); ++f) eliminate_from(equalities[f]);
    for (auto& [var, row] : pivots) eliminate_from(row);
    for (Row& r : inequalities) eliminate_from(r);
    pivots.emplace_back(pivot, eq);
  }

  // Inequalities keep their direction under substitution (equalities were
  // scaled, inequalities only had multiples of equalities added).
  std::vector<Row> rows = std::move(inequalities);
  if (auto bad = simplify(rows)) return fail(bad->provenance);

  std::vector<bool> pivoted(n, false);
  for (const auto& [var, row] : pivots) pivoted[static_cast<std::size_t>(var)] = true;

  std::vector<EliminationStep> steps;
  std::vector<bool> eliminated(n, false);
  result.eliminated_inequalities = rows.size();
  while (true) {
    // Pick the variable with the fewest generated combinations.
    int best = -1;
    std::size_t best_cost = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (eliminated[j] || pivoted[j]) continue;
      std::size_t pos = 0, neg = 0;
      for (const Row& r : rows) {
        if (r.a[j] > 0) ++pos;
        else if (r.a[j] < 0) ++neg;
      }
      if (pos + neg == 0) continue;
      std::size_t cost = pos * neg;
      if (best < 0 || cost < best_cost) { best = static_cast<int>(j); best_cost = cost; }
    }
    if (best < 0) break;
    const auto x = static_cast<std::size_t>(best);
    eliminated[x] = true;

    std::vector<Row> positive, negative, rest;
    for (Row& r : rows) {
      if (r.a[x] > 0) positive.push_back(r);
      else if (r.a[x] < 0) negative.push_back(r);
      else rest.push_back(std::move(r));
    }
    for (const Row& p : positive) {
      for (const Row& q : negative) {
        // (-q_x) * p + p_x * q has zero coefficient on x
        Row combined{std::vector<Rational>(n), 0, {}};
        const Rational sp = -q.a[x], sq = p.a[x];
        for (std::size_t j = 0; j < n; ++j) combined.a[j] = sp * p.a[j] + sq * q.a[j];
        combined.a[x] = 0;
        combined.rhs = sp * p.rhs + sq * q.rhs;
        combined.provenance = p.provenance;
        combined.provenance.insert(q.provenance.begin(), q.provenance.end());
        rest.push_back(std::move(combined));
      }
    }
    if (rest.size() > kRowLimit) throw std::runtime_error("Fourier-Motzkin elimination exceeded the row limit");
    EliminationStep step{best, std::move(positive)};
    step.rows.insert(step.rows.end(), negative.begin(), negative.end());
    steps.push_back(std::move(step));

    rows = std::move(rest);
    result.eliminated_inequalities = std::max(result.eliminated_inequalities, rows.size());
    if (auto bad = simplify(rows)) return fail(bad->provenance);
  }

  // Back-substitution in reverse elimination order.
  std::vector<Rational> values(n, Rational(0));
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    const auto x = static_cast<std::size_t>(it->variable);
    std::optional<Rational> lo, hi;
    for (const Row& r : it->rows) {
      Rational residual = r.rhs;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != x && r.a[j] != 0) residual -= r.a[j] * values[j];
      }
      Rational bound = residual / r.a[x];
      if (r.a[x] > 0) {
        if (!lo || bound > *lo) lo = bound;
      } else {
        if (!hi || bound < *hi) hi = bound;
      }
    }
    Rational v = 0;
    if (lo && *lo > 0) v = *lo;
    else if (hi && *hi < 0) v = *hi;
    values[x] = v;
  }
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const auto& [pivot, row] = *it;
    const auto p = static_cast<std::size_t>(pivot);
    Rational residual = row.rhs;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != p && row.a[j] != 0) residual -= row.a[j] * values[j];
    }
    values[p] = residual / row.a[p];
  }

  for (const auto& c : system.constraints) {
    if (!c.satisfied_by(values)) {
      throw std::logic_error("Fourier-Motzkin witness violates '" + c.label + "'");
    }
  }
  result.feasible = true;
  result.witness = std::move(values);
  return result;
}

}  // namespace cone_forge
