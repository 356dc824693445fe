#pragma once

// Dense two-phase tableau simplex with Bland's rule.
//
//   minimize c^T x  subject to  A x = b,  x >= 0.
//
// T is double or an exact field such as boost::multiprecision::cpp_rational;
// with an exact T pass eps = 0.

#include <cstddef>
#include <string>
#include <vector>

#include "dcrep/error.hpp"

namespace dcrep {

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class T>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  T objective{};
  T phase1_objective{};       // minimal sum of artificials
  std::vector<T> x;           // primal point (phase I end point when infeasible)
  std::vector<T> farkas;      // y with y^T A <= 0 and y^T b > 0 when infeasible
  std::size_t iterations = 0;
};

template <class T>
class Simplex {
 public:
  /// A is row-major m x n.
  Simplex(std::size_t m, std::size_t n, std::vector<T> A, std::vector<T> b, std::vector<T> c)
      : m_(m), n_(n), A_(std::move(A)), b_(std::move(b)), c_(std::move(c)) {
    if (A_.size() != m_ * n_ || b_.size() != m_ || (c_.size() != n_ && !c_.empty()))
      throw SizeError("Simplex: dimension mismatch");
    if (c_.empty()) c_.assign(n_, T(0));
  }

  LpResult<T> solve(const T& eps = T(0), std::size_t max_iter = 200000) {
    LpResult<T> res;
    // Tiny pivots wreck a floating tableau; exact types keep eps = 0.
    pivot_tol_ = eps > T(0) && eps < T(1e-9) ? T(1e-9) : eps;
    const std::size_t cols = n_ + m_;  // structural then artificial
    W_ = cols + 1;                       // last column holds the rhs
    tab_.assign((m_ + 1) * W_, T(0));
    flip_.assign(m_, false);
    basis_.assign(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      flip_[i] = b_[i] < T(0);
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = flip_[i] ? T(-A_[i * n_ + j]) : A_[i * n_ + j];
      at(i, n_ + i) = T(1);
      at(i, cols) = flip_[i] ? T(-b_[i]) : b_[i];
      basis_[i] = n_ + i;
    }
    // Phase I cost row [reduced costs | -objective] for the sum of artificials.
    for (std::size_t j = 0; j <= cols; ++j) {
      if (j >= n_ && j < cols) continue;
      T s(0);
      for (std::size_t i = 0; i < m_; ++i) s += at(i, j);
      at(m_, j) = -s;
    }
    allowed_ = cols;
    run(eps, max_iter, res.iterations);
    res.phase1_objective = -at(m_, cols);

    // Phase I duals: y_i = 1 - reduced cost of artificial i, mapped back
    // through the row flips.
    res.farkas.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const T y = T(1) - at(m_, n_ + i);
      res.farkas[i] = flip_[i] ? T(-y) : y;
    }
    res.x = primal();
    if (res.phase1_objective > eps) {
      res.status = LpStatus::Infeasible;
      return res;
    }

    // Drive remaining artificials out of the basis where possible.
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (abs_gt(at(i, j), pivot_tol_)) {
          pivot(i, j);
          break;
        }
      }
    }

    // Phase II.
    for (std::size_t j = 0; j <= cols; ++j) at(m_, j) = T(0);
    for (std::size_t j = 0; j < n_; ++j) at(m_, j) = c_[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t bj = basis_[i];
      const T cb = bj < n_ ? c_[bj] : T(0);
      if (cb == T(0)) continue;
      for (std::size_t j = 0; j <= cols; ++j) at(m_, j) -= cb * at(i, j);
    }
    allowed_ = n_;
    if (!run(eps, max_iter, res.iterations)) {
      res.status = LpStatus::Unbounded;
      res.x = primal();
      return res;
    }
    res.x = primal();
    res.objective = -at(m_, cols);
    res.status = LpStatus::Optimal;
    return res;
  }

 private:
  T& at(std::size_t i, std::size_t j) { return tab_[i * W_ + j]; }

  static bool abs_gt(const T& v, const T& eps) { return v > eps || v < -eps; }

  std::vector<T> primal() {
    std::vector<T> x(n_, T(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = at(i, W_ - 1);
    return x;
  }

  void pivot(std::size_t r, std::size_t col) {
    const T inv = T(1) / at(r, col);
    for (std::size_t j = 0; j < W_; ++j) at(r, j) *= inv;
    at(r, col) = T(1);
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const T f = at(i, col);
      if (f == T(0)) continue;
      for (std::size_t j = 0; j < W_; ++j) at(i, j) -= f * at(r, j);
      at(i, col) = T(0);
    }
    basis_[r] = col;
  }

  /// Minimizes the current cost row over columns < allowed_. Returns false if unbounded.
  bool run(const T& eps, std::size_t max_iter, std::size_t& iters) {
    const std::size_t rhs = W_ - 1;
    while (true) {
      std::size_t enter = allowed_;
      for (std::size_t j = 0; j < allowed_; ++j) {
        if (at(m_, j) < -eps) {
          enter = j;
          break;
        }
      }
      if (enter == allowed_) return true;
      std::size_t leave = m_;
      T best{};
      for (std::size_t i = 0; i < m_; ++i) {
        if (!(at(i, enter) > pivot_tol_)) continue;
        const T ratio = at(i, rhs) / at(i, enter);
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
      if (++iters > max_iter)
        throw NumericalError("Simplex: iteration guard hit after " + std::to_string(max_iter) + " pivots");
    }
  }

  std::size_t m_, n_;
  std::vector<T> A_, b_, c_;
  std::vector<T> tab_;
  std::vector<bool> flip_;
  std::vector<std::size_t> basis_;
  std::size_t W_ = 0;
  std::size_t allowed_ = 0;
  T pivot_tol_{};
};

}  // namespace dcrep
