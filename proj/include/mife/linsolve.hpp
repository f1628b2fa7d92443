#pragma once

// Direct sparse solves and spectral condition numbers.

#include "mife/assembly.hpp"

#include <Eigen/SVD>

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include <memory>

namespace mife {

namespace detail {

/// SparseLU with access to the diagonal of U.
class PivotedSparseLU : public Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> {
 public:
  /// min |U_ii| / max |U_ii|.
  double pivot_ratio() const {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Index j = 0; j < this->cols(); ++j)
      for (SCMatrix::InnerIterator it(this->m_Lstore, j); it; ++it)
        if (it.index() == j) {
          lo = std::min(lo, std::abs(it.value()));
          hi = std::max(hi, std::abs(it.value()));
          break;
        }
    return hi > 0.0 ? lo / hi : 0.0;
  }
};

}  // namespace detail

/// LU factorization of a square sparse matrix (supernodal, COLAMD column ordering).
class Factorization {
 public:
  static constexpr double kPivotTolerance = 1e-14;

  explicit Factorization(const SparseMatrix& A) : n_(A.rows()), lu_(new detail::PivotedSparseLU) {
    if (A.rows() != A.cols()) throw InvalidArgument("factorization needs a square matrix");
    for (Index k = 0; k < A.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(A, k); it; ++it)
        if (!std::isfinite(it.value())) throw NonFiniteEntry("system matrix");
    SparseMatrix C = A;
    C.makeCompressed();
    lu_->compute(C);
    if (lu_->info() != Eigen::Success)
      throw SingularSystem(0.0, "factorization failed: " + lu_->lastErrorMessage());
    pivot_ratio_ = lu_->pivot_ratio();
    if (!(pivot_ratio_ >= kPivotTolerance))
      throw SingularSystem(pivot_ratio_, "singular system: smallest/largest pivot ratio " +
                                             std::to_string(pivot_ratio_));
  }

  Index size() const { return n_; }
  /// min |U_ii| / max |U_ii| of the factorization.
  double pivot_ratio() const { return pivot_ratio_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& b, bool transpose = false) const {
    if (b.size() != n_) throw InvalidArgument("right-hand side size mismatch");
    Eigen::VectorXd x = transpose ? Eigen::VectorXd(lu_->transpose().solve(b))
                                  : Eigen::VectorXd(lu_->solve(b));
    return x;
  }

 private:
  Index n_ = 0;
  std::unique_ptr<detail::PivotedSparseLU> lu_;
  double pivot_ratio_ = 0.0;
};

struct LinearSolution {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||Ax - b|| / ||b||
  double pivot_ratio = 0.0;
};

/// Solves A x = b with up to three steps of iterative refinement.
inline LinearSolution solve(const SparseMatrix& A, const Eigen::VectorXd& b) {
  if (A.rows() != b.size()) throw InvalidArgument("right-hand side size mismatch");
  const Factorization lu(A);
  LinearSolution s;
  s.pivot_ratio = lu.pivot_ratio();
  s.x = lu.solve(b);
  const double bn = std::max(b.norm(), std::numeric_limits<double>::min());
  Eigen::VectorXd r = b - A * s.x;
  for (int it = 0; it < 3 && r.norm() > 1e-13 * bn; ++it) {
    s.x += lu.solve(r);
    r = b - A * s.x;
  }
  s.residual = r.norm() / bn;
  return s;
}

namespace detail {

/// Square matrix with a trailing border row/column whose interior block has the constant
/// pressure as its only kernel. One pressure unknown is pinned, the pinned block is factored, and
/// the multiplier and the constant-pressure component are recovered from two solves.
class PinnedBorderSolver {
 public:
  PinnedBorderSolver(const SparseMatrix& A, const std::vector<bool>& pressure,
                     const std::vector<bool>& fixed) {
    n_ = A.rows() - 1;
    if (A.rows() != A.cols() || Index(pressure.size()) != n_ || Index(fixed.size()) != n_)
      throw InvalidArgument("bordered matrix and masks disagree in size");
    pressure_ = pressure;
    for (Index i = 0; i < n_ && pinned_ < 0; ++i)
      if (pressure[i] && !fixed[i]) pinned_ = i;
    if (pinned_ < 0) throw InvalidArgument("system has no free pressure unknown");

    std::vector<Index> pos(n_ + 1, -1);
    for (Index i = 0; i < n_; ++i)
      if (i != pinned_) {
        pos[i] = Index(kept_.size());
        kept_.push_back(i);
      }
    const Index m = Index(kept_.size());
    border_col_ = Eigen::VectorXd::Zero(m);
    pinned_row_ = Eigen::VectorXd::Zero(m);
    border_row_ = Eigen::VectorXd::Zero(n_);
    std::vector<Triplet> T;
    T.reserve(A.nonZeros());
    for (Index col = 0; col <= n_; ++col)
      for (SparseMatrix::InnerIterator it(A, col); it; ++it) {
        const Index r = it.row();
        if (r == n_) {
          if (col < n_) border_row_[col] = it.value();
        } else if (col == n_) {
          if (r == pinned_) pinned_border_ = it.value();
          else border_col_[pos[r]] = it.value();
        } else if (col != pinned_) {
          if (r == pinned_) pinned_row_[pos[col]] = it.value();
          else T.emplace_back(pos[r], pos[col], it.value());
        }
      }
    SparseMatrix Ap(m, m);
    Ap.setFromTriplets(T.begin(), T.end());
    lu_ = std::make_unique<Factorization>(Ap);
    border_solve_ = lu_->solve(border_col_);
    denominator_ = pinned_border_ - pinned_row_.dot(border_solve_);
    const double scale =
        std::abs(pinned_border_) + pinned_row_.cwiseAbs().dot(border_solve_.cwiseAbs());
    if (!(std::abs(denominator_) > 1e-12 * scale))
      throw SingularSystem(lu_->pivot_ratio(), "pressure-mean border is degenerate");
    for (Index i = 0; i < n_; ++i)
      if (pressure[i]) mean_of_kernel_ += border_row_[i];
    if (!(std::abs(mean_of_kernel_) > 0.0))
      throw SingularSystem(lu_->pivot_ratio(), "constant pressure has zero mean");
  }

  double pivot_ratio() const { return lu_->pivot_ratio(); }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    const Index m = Index(kept_.size());
    Eigen::VectorXd rhs(m);
    for (Index k = 0; k < m; ++k) rhs[k] = b[kept_[k]];
    const Eigen::VectorXd z1 = lu_->solve(rhs);
    const double lambda = (b[pinned_] - pinned_row_.dot(z1)) / denominator_;
    const Eigen::VectorXd z = z1 - lambda * border_solve_;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_ + 1);
    for (Index k = 0; k < m; ++k) x[kept_[k]] = z[k];
    const double alpha = (b[n_] - border_row_.dot(x.head(n_))) / mean_of_kernel_;
    for (Index i = 0; i < n_; ++i)
      if (pressure_[i]) x[i] += alpha;
    x[n_] = lambda;
    return x;
  }

 private:
  Index n_ = 0;
  Index pinned_ = -1;
  std::vector<bool> pressure_;
  std::vector<Index> kept_;
  Eigen::VectorXd border_col_, pinned_row_, border_row_, border_solve_;
  double pinned_border_ = 0.0, denominator_ = 0.0, mean_of_kernel_ = 0.0;
  std::unique_ptr<Factorization> lu_;
};

}  // namespace detail

/// Solver for the bordered system of an assembled problem. Element-local bubble blocks are
/// condensed first; the reduced bordered matrix goes to detail::PinnedBorderSolver.
class BorderedSolver {
 public:
  explicit BorderedSolver(const SparseSystem& sys) {
    const Index N = sys.n_dofs;
    if (sys.A.rows() != N + 1 || Index(sys.pressure.size()) != N)
      throw InvalidArgument("bordered solver needs an assembled system");
    const int bs = sys.local_block_size;
    std::vector<Index> pos(N + 1, -1);  // position in the reduced system, -1 when condensed
    std::vector<Index> block_of(N + 1, -1);
    for (std::size_t k = 0; k < sys.local_blocks.size(); ++k)
      for (int i = 0; i < bs; ++i) block_of[sys.local_blocks[k] + i] = Index(k);
    std::vector<bool> pressure, fixed;
    for (Index i = 0; i <= N; ++i)
      if (block_of[i] < 0) {
        pos[i] = Index(reduced_.size());
        reduced_.push_back(i);
        if (i < N) {
          pressure.push_back(sys.pressure[i]);
          fixed.push_back(sys.dirichlet[i]);
        }
      }
    const Index nr = Index(reduced_.size());
    const Index nb = Index(sys.local_blocks.size());
    starts_ = sys.local_blocks;
    bs_ = bs;

    std::vector<Triplet> Tkk, Tks, Tsk;
    std::vector<Eigen::MatrixXd> Ass(nb, Eigen::MatrixXd::Zero(bs, bs));
    for (Index col = 0; col <= N; ++col)
      for (SparseMatrix::InnerIterator it(sys.A, col); it; ++it) {
        const Index r = it.row();
        const bool rs = block_of[r] >= 0, cs = block_of[col] >= 0;
        if (!rs && !cs) {
          Tkk.emplace_back(pos[r], pos[col], it.value());
        } else if (rs && cs) {
          if (block_of[r] != block_of[col])
            throw InvalidArgument("condensed blocks are coupled to each other");
          Ass[block_of[r]](r - starts_[block_of[r]], col - starts_[block_of[col]]) = it.value();
        } else if (!rs) {
          Tks.emplace_back(pos[r], col, it.value());
        } else {
          Tsk.emplace_back(r, pos[col], it.value());
        }
      }
    // block inverse as a sparse matrix over all DoFs
    std::vector<Triplet> Tinv;
    for (Index k = 0; k < nb; ++k) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(Ass[k]);
      if (!lu.isInvertible()) throw SingularSystem(0.0, "singular bubble block");
      const Eigen::MatrixXd inv = lu.inverse();
      for (int i = 0; i < bs; ++i)
        for (int j = 0; j < bs; ++j) Tinv.emplace_back(starts_[k] + i, starts_[k] + j, inv(i, j));
    }
    SparseMatrix Akk(nr, nr), Aks(nr, N + 1), Ask(N + 1, nr), inv(N + 1, N + 1);
    Akk.setFromTriplets(Tkk.begin(), Tkk.end());
    Aks.setFromTriplets(Tks.begin(), Tks.end());
    Ask.setFromTriplets(Tsk.begin(), Tsk.end());
    inv.setFromTriplets(Tinv.begin(), Tinv.end());
    Aks_ = Aks;
    Ask_ = Ask;
    inv_ = inv;
    SparseMatrix W = (inv * Ask).pruned();
    SparseMatrix Ar = (Akk - Aks * W).pruned();
    inner_ = std::make_unique<detail::PinnedBorderSolver>(Ar, pressure, fixed);
  }

  double pivot_ratio() const { return inner_->pivot_ratio(); }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    const Index nr = Index(reduced_.size());
    Eigen::VectorXd bs = Eigen::VectorXd::Zero(b.size());
    for (Index k = 0; k < Index(starts_.size()); ++k) bs.segment(starts_[k], bs_) = b.segment(starts_[k], bs_);
    Eigen::VectorXd br(nr);
    for (Index k = 0; k < nr; ++k) br[k] = b[reduced_[k]];
    br -= Aks_ * (inv_ * bs);
    const Eigen::VectorXd xr = inner_->solve(br);
    Eigen::VectorXd x = inv_ * (bs - Ask_ * xr);
    for (Index k = 0; k < nr; ++k) x[reduced_[k]] = xr[k];
    return x;
  }

 private:
  std::vector<Index> reduced_;
  std::vector<Index> starts_;
  int bs_ = 0;
  SparseMatrix Aks_, Ask_, inv_;
  std::unique_ptr<detail::PinnedBorderSolver> inner_;
};

/// Solves the bordered system with up to three steps of iterative refinement.
inline LinearSolution solve(const SparseSystem& sys) {
  if (sys.A.rows() != sys.b.size()) throw InvalidArgument("right-hand side size mismatch");
  const BorderedSolver solver(sys);
  LinearSolution s;
  s.pivot_ratio = solver.pivot_ratio();
  s.x = solver.solve(sys.b);
  const double bn = std::max(sys.b.norm(), std::numeric_limits<double>::min());
  Eigen::VectorXd r = sys.b - sys.A * s.x;
  for (int it = 0; it < 3 && r.norm() > 1e-13 * bn; ++it) {
    s.x += solver.solve(r);
    r = sys.b - sys.A * s.x;
  }
  s.residual = r.norm() / bn;
  return s;
}

/// DoFs that are not eliminated by Dirichlet conditions (the multiplier excluded).
inline std::vector<Index> free_dofs(const SparseSystem& sys) {
  std::vector<Index> free;
  for (Index i = 0; i < sys.n_dofs; ++i)
    if (!sys.dirichlet[i]) free.push_back(i);
  return free;
}

/// Principal submatrix A(idx, idx).
inline SparseMatrix restrict_matrix(const SparseMatrix& A, const std::vector<Index>& idx) {
  std::vector<Index> pos(A.rows(), -1);
  for (std::size_t k = 0; k < idx.size(); ++k) pos[idx[k]] = Index(k);
  std::vector<Triplet> T;
  for (Index col = 0; col < A.outerSize(); ++col) {
    if (pos[col] < 0) continue;
    for (SparseMatrix::InnerIterator it(A, col); it; ++it)
      if (pos[it.row()] >= 0) T.emplace_back(pos[it.row()], pos[col], it.value());
  }
  SparseMatrix R(Index(idx.size()), Index(idx.size()));
  R.setFromTriplets(T.begin(), T.end());
  R.makeCompressed();
  return R;
}

struct ConditionEstimate {
  double kappa = 0.0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  bool dense = true;
};

inline constexpr Index kDenseConditionLimit = 5000;

/// sigma_max / sigma_min: dense SVD for small matrices, otherwise power iteration on A^T A and
/// on its inverse through the LU factors, each to 1e-3 relative change.
inline ConditionEstimate condition_number(const SparseMatrix& A, int max_iterations = 3000,
                                           Index dense_limit = kDenseConditionLimit) {
  if (A.rows() != A.cols() || A.rows() == 0) throw InvalidArgument("condition number of a non-square matrix");
  ConditionEstimate c;
  if (A.rows() <= dense_limit) {
    const Eigen::MatrixXd dense(A);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(dense);
    const auto& s = svd.singularValues();
    c.sigma_max = s[0];
    c.sigma_min = s[s.size() - 1];
    c.kappa = c.sigma_min > 0.0 ? c.sigma_max / c.sigma_min : std::numeric_limits<double>::infinity();
    return c;
  }
  c.dense = false;
  const Index n = A.rows();
  const double tol = 1e-3;
  auto power = [&](auto&& apply) {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    for (Index i = 0; i < n; ++i) v[i] += 0.1 * std::sin(double(i));  // avoid special directions
    v.normalize();
    double lambda = 0.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iterations; ++it) {
      Eigen::VectorXd w = apply(v);
      const double next = w.norm();
      v = w / next;
      if (it > 5 && std::abs(next - lambda) <= tol * next) return next;
      lo = std::min(lambda, next);
      hi = std::max(lambda, next);
      lambda = next;
    }
    throw Error("no_convergence", "condition estimate did not converge; bracket [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  };
  const SparseMatrix At = A.transpose();
  c.sigma_max = std::sqrt(power([&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return At * (A * v);
  }));
  const Factorization lu(A);
  const double inv = power([&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return lu.solve(lu.solve(v, true));
  });
  c.sigma_min = 1.0 / std::sqrt(inv);
  c.kappa = c.sigma_max / c.sigma_min;
  return c;
}

/// Condition number of the bordered operator on the non-Dirichlet DoFs. The mean-value border
/// removes the constant-pressure kernel without singling out a pressure node.
inline ConditionEstimate system_condition_number(const SparseSystem& sys) {
  std::vector<Index> idx = free_dofs(sys);
  idx.push_back(sys.multiplier());
  return condition_number(restrict_matrix(sys.A, idx));
}

}  // namespace mife
