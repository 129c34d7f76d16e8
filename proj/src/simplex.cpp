// Dense two-phase tableau simplex with Bland's rule. Deliberately generic
// (standard form, any m x n) so it shares no structure with the vertex
// enumeration in lp.cpp.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "conbandit/errors.hpp"
#include "conbandit/lp.hpp"

namespace conbandit {
namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kPhaseOneEps = 1e-11;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : cols_(cols), cells_(rows * cols, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }

 private:
  std::size_t cols_;
  std::vector<double> cells_;
};

// maximize c.x  s.t.  A x = b, x >= 0.  Returns nullopt when infeasible.
class StandardFormSimplex {
 public:
  StandardFormSimplex(const std::vector<std::vector<double>>& a, std::vector<double> b,
                      std::vector<double> c)
      : m_(a.size()),
        n_(c.size()),
        rhs_(n_ + m_),
        obj_(m_),
        t_(m_ + 1, n_ + m_ + 1),
        basis_(m_),
        c_(std::move(c)) {
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) t_(i, j) = sign * a[i][j];
      t_(i, n_ + i) = 1.0;
      t_(i, rhs_) = sign * b[i];
      basis_[i] = n_ + i;
    }
  }

  std::optional<std::vector<double>> solve() {
    // Phase 1: maximize -sum(artificials).
    for (std::size_t j = 0; j <= rhs_; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < m_; ++i) col += t_(i, j);
      t_(obj_, j) = j >= n_ && j < rhs_ ? 0.0 : col;
    }
    iterate(rhs_);
    if (t_(obj_, rhs_) > kPhaseOneEps) return std::nullopt;

    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > kPivotEps) {
          pivot(i, j);
          break;
        }
      }
    }

    // Phase 2 reduced costs; artificials have zero cost and may not re-enter.
    for (std::size_t j = 0; j <= rhs_; ++j) {
      double reduced = j < n_ ? c_[j] : 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] < n_) reduced -= c_[basis_[i]] * t_(i, j);
      }
      t_(obj_, j) = reduced;
    }
    iterate(n_);

    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = t_(i, rhs_);
    }
    return x;
  }

 private:
  void pivot(std::size_t row, std::size_t col) {
    const double p = t_(row, col);
    for (std::size_t j = 0; j <= rhs_; ++j) t_(row, j) /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= rhs_; ++j) t_(i, j) -= f * t_(row, j);
    }
    basis_[row] = col;
  }

  // Bland: lowest-index improving column, ties in the ratio test go to the
  // lowest basic variable index.
  void iterate(std::size_t entering_limit) {
    for (;;) {
      std::size_t entering = entering_limit;
      for (std::size_t j = 0; j < entering_limit; ++j) {
        if (t_(obj_, j) > kPivotEps) {
          entering = j;
          break;
        }
      }
      if (entering == entering_limit) return;

      std::size_t leaving = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = t_(i, entering);
        if (a <= kPivotEps) continue;
        const double ratio = t_(i, rhs_) / a;
        if (ratio < best_ratio - kPivotEps ||
            (ratio <= best_ratio + kPivotEps && leaving < m_ && basis_[i] < basis_[leaving])) {
          best_ratio = ratio;
          leaving = i;
        }
      }
      if (leaving == m_) throw ContractViolation("simplex: unbounded problem");
      pivot(leaving, entering);
    }
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t rhs_;
  std::size_t obj_;
  Tableau t_;
  std::vector<std::size_t> basis_;
  std::vector<double> c_;
};

}  // namespace

std::optional<LpSolution> simplex_solve(const LpInstance& instance) {
  validate(instance);
  const std::size_t num_arms = instance.rates.size();

  // Columns: y_0..y_{K-1}, surplus s.
  //   sum_k mu_k y_k - s = tau
  //   sum_k y_k          = 1
  std::vector<std::vector<double>> a(2, std::vector<double>(num_arms + 1, 0.0));
  std::vector<double> c(num_arms + 1, 0.0);
  for (std::size_t k = 0; k < num_arms; ++k) {
    a[0][k] = instance.success_probs[k];
    a[1][k] = 1.0;
    c[k] = instance.rates[k] * instance.success_probs[k];
  }
  a[0][num_arms] = -1.0;

  StandardFormSimplex simplex(a, {instance.threshold, 1.0}, std::move(c));
  auto x = simplex.solve();
  if (!x) return std::nullopt;

  std::vector<double> probs(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(num_arms));
  double total = 0.0;
  for (double& p : probs) {
    if (p < lp_tolerance::kClampToZero) p = 0.0;
    total += p;
  }
  for (double& p : probs) p /= total;

  LpSolution solution{SelectionVector(std::move(probs)), 0.0};
  solution.objective = lp_value(solution.selection, instance);
  return solution;
}

}  // namespace conbandit
