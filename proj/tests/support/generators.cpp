#include "generators.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

namespace generators {

using ctxkit::Rational;

ctxkit::lp::LinearFeasibilityProblem random_lp(std::mt19937_64& rng, int max_vars, int max_rows) {
  std::uniform_int_distribution<int> var_count(1, max_vars);
  std::uniform_int_distribution<int> row_count(1, max_rows);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> rhs(-4, 4);

  ctxkit::lp::LinearFeasibilityProblem problem;
  problem.variable_count = static_cast<std::uint32_t>(var_count(rng));
  const int rows = row_count(rng);
  for (int r = 0; r < rows; ++r) {
    ctxkit::lp::SparseRow row;
    for (std::uint32_t j = 0; j < problem.variable_count; ++j) {
      const int c = coeff(rng);
      if (c != 0) row.terms.emplace_back(j, Rational(c));
    }
    row.rhs = Rational(rhs(rng));
    problem.rows.push_back(std::move(row));
  }
  return problem;
}

namespace {

// Random distribution over `cells` categories with the given denominator:
// a uniform composition via sorted cut points, so zero cells are common.
std::vector<Rational> random_distribution(std::mt19937_64& rng, int cells, int denominator) {
  std::uniform_int_distribution<int> cut(0, denominator);
  std::vector<int> cuts{0, denominator};
  for (int i = 0; i < cells - 1; ++i) cuts.push_back(cut(rng));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rational> out;
  for (int i = 0; i < cells; ++i) out.emplace_back(Rational(cuts[i + 1] - cuts[i]) / denominator);
  return out;
}

}  // namespace

ctxkit::EmpiricalModel random_cyclic2_model(std::mt19937_64& rng, int max_denominator) {
  std::uniform_int_distribution<int> den(1, max_denominator);

  ctxkit::EmpiricalModel model;
  model.label = "random_cyclic2";
  model.measurements = {{"A", {"0", "1"}}, {"B", {"0", "1"}}};
  for (int c = 0; c < 2; ++c) {
    ctxkit::Context ctx;
    ctx.measurements = {"A", "B"};
    ctx.orientation = c == 0 ? "first" : "second";
    const auto probs = random_distribution(rng, 4, den(rng));
    int cell = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (probs[cell] != 0) ctx.table[{i, j}] = probs[cell];
        ++cell;
      }
    model.contexts.push_back(std::move(ctx));
  }
  return model;
}

ctxkit::PossibilisticModel random_poss_model(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> meas_count(2, 4);
  std::uniform_int_distribution<int> outcome_count(2, 3);
  std::uniform_int_distribution<int> ctx_count(2, 4);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution sparse(0.35);

  ctxkit::PossibilisticModel poss;
  poss.label = "random_poss";
  const int m = meas_count(rng);
  for (int i = 0; i < m; ++i)
    poss.measurements.push_back(
        {std::string(1, static_cast<char>('a' + i)),
         outcome_count(rng) == 2 ? std::vector<std::string>{"0", "1"}
                                 : std::vector<std::string>{"0", "1", "2"}});

  // Distinct unordered measurement pairs as contexts.
  std::set<std::pair<int, int>> pairs;
  std::uniform_int_distribution<int> pick(0, m - 1);
  const int want = std::min(ctx_count(rng), m * (m - 1) / 2);
  while (static_cast<int>(pairs.size()) < want) {
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    pairs.insert({std::min(a, b), std::max(a, b)});
  }
  for (const auto& [a, b] : pairs) {
    ctxkit::SupportContext ctx;
    ctx.measurements = {poss.measurements[a].name, poss.measurements[b].name};
    poss.contexts.push_back(std::move(ctx));
  }

  const auto outcomes_of = [&](int mi) {
    return static_cast<int>(poss.measurements[mi].outcomes.size());
  };

  if (coin(rng)) {
    // Supports as restrictions of a random global-assignment set: consistent
    // and extendable by construction.
    std::vector<ctxkit::OutcomeTuple> globals;
    ctxkit::OutcomeTuple g(m, 0);
    bool exhausted = false;
    while (!exhausted) {
      if (sparse(rng)) globals.push_back(g);
      exhausted = true;
      for (int pos = m; pos-- > 0;) {
        if (++g[pos] < outcomes_of(pos)) {
          exhausted = false;
          break;
        }
        g[pos] = 0;
      }
    }
    if (globals.empty()) globals.push_back(ctxkit::OutcomeTuple(m, 0));
    for (auto& ctx : poss.contexts) {
      const int a = poss.measurement_index(ctx.measurements[0]);
      const int b = poss.measurement_index(ctx.measurements[1]);
      for (const auto& global : globals) ctx.support.insert({global[a], global[b]});
    }
  } else {
    // Fully random nonempty supports.
    for (auto& ctx : poss.contexts) {
      const int ka = outcomes_of(poss.measurement_index(ctx.measurements[0]));
      const int kb = outcomes_of(poss.measurement_index(ctx.measurements[1]));
      for (int i = 0; i < ka; ++i)
        for (int j = 0; j < kb; ++j)
          if (coin(rng)) ctx.support.insert({i, j});
      if (ctx.support.empty())
        ctx.support.insert({std::uniform_int_distribution<int>(0, ka - 1)(rng),
                            std::uniform_int_distribution<int>(0, kb - 1)(rng)});
    }
  }
  return poss;
}

Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = std::complex<double>(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  // Fix the phase ambiguity so Q is well-conditioned unitary regardless of R's signs.
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const std::complex<double> diag = r(c, c);
    if (std::abs(diag) > 0) q.col(c) *= diag / std::abs(diag);
  }
  return q;
}

Eigen::VectorXcd random_state(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = std::complex<double>(gauss(rng), gauss(rng));
  return v / v.norm();
}

std::vector<Eigen::MatrixXcd> random_projectors(std::mt19937_64& rng, int dim, int parts) {
  const Eigen::MatrixXcd u = random_unitary(rng, dim);
  // Random subspace dimensions >= 1 summing to dim.
  std::vector<int> sizes(parts, 1);
  std::uniform_int_distribution<int> pick(0, parts - 1);
  for (int extra = dim - parts; extra > 0; --extra) ++sizes[pick(rng)];
  std::vector<Eigen::MatrixXcd> projectors;
  int col = 0;
  for (int p = 0; p < parts; ++p) {
    const Eigen::MatrixXcd block = u.middleCols(col, sizes[p]);
    projectors.push_back(block * block.adjoint());
    col += sizes[p];
  }
  return projectors;
}

}  // namespace generators
