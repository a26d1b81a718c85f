#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "e2neg/error.hpp"
#include "e2neg/random.hpp"
#include "e2neg/spectral.hpp"

namespace e2neg {

namespace {

using DenseMatrix = Eigen::MatrixXd;

// Flip each column so its largest-magnitude entry is positive.
void canonicalize_signs(DenseMatrix& u) {
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    Eigen::Index arg = 0;
    u.col(c).cwiseAbs().maxCoeff(&arg);
    if (u(arg, c) < 0.0) u.col(c) *= -1.0;
  }
}

SpectralBundle finish(const SparseOperator& op, Vector values, DenseMatrix vectors) {
  canonicalize_signs(vectors);
  const DenseMatrix lu = op.multiply(vectors);
  SpectralBundle b;
  b.residuals.resize(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    b.residuals[i] = (lu.col(i) - values[i] * vectors.col(i)).norm();
  }
  b.eigenvalues = std::move(values);
  b.eigenvectors = vectors;
  return b;
}

SpectralBundle dense_eigenpairs(const SparseOperator& op, int k) {
  const DenseMatrix a = op.to_dense();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(a);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", INFINITY);
  return finish(op, es.eigenvalues().head(k), es.eigenvectors().leftCols(k));
}

struct RawPairs {
  Vector values;
  DenseMatrix vectors;
};

// Restarted block Lanczos in Krylov-Schur form, restricted to the orthogonal
// complement of `locked`. The basis V is kept fully orthonormal (two classical
// Gram-Schmidt passes per new vector) and the Rayleigh-Ritz problem is solved
// on the explicitly formed V^T A V, so the method stays correct even when a
// column had to be replaced by a random vector after breakdown.
class BlockKrylovSchur {
 public:
  BlockKrylovSchur(const SparseOperator& op, int k, const EigenOptions& opts, const DenseMatrix& locked,
                   std::uint64_t stream)
      : op_(op),
        locked_(locked),
        n_(op.size() - static_cast<int>(locked.cols())),
        k_(k),
        opts_(opts),
        rng_(make_rng(opts.seed, Stage::kPreprocess, 0x5eed + stream)) {
    block_ = opts.block_size > 0 ? opts.block_size : std::min(k, 8);
    block_ = std::max(1, std::min<int>(block_, n_));
    // Whole blocks only: a truncated block would drop residual directions of
    // the retained Ritz vectors and stall the restart.
    const auto round_up = [this](int x) { return (x + block_ - 1) / block_ * block_; };
    keep_ = round_up(k + std::max(k / 2, block_));
    max_basis_ = keep_ + block_ * std::max(3, round_up(k) / block_);
    if (max_basis_ >= n_) {
      max_basis_ = n_;
      keep_ = std::min(keep_, n_);
    }
    v_.resize(op.size(), max_basis_);
    av_.resize(op.size(), max_basis_);
  }

  RawPairs run() {
    DenseMatrix pending(op_.size(), block_);
    fill_random(pending);
    orthonormalize(pending, 0);
    int cols = 0;
    double worst = INFINITY;

    for (int cycle = 0; cycle < opts_.max_iter; ++cycle) {
      int last_begin = cols;
      int last_width = 0;
      while (true) {
        const int width = static_cast<int>(pending.cols());
        v_.middleCols(cols, width) = pending;
        av_.middleCols(cols, width) = op_.multiply(pending);
        last_begin = cols;
        last_width = width;
        cols += width;
        if (cols >= max_basis_) break;
        pending = av_.middleCols(last_begin, last_width);
        const int room = max_basis_ - cols;
        if (pending.cols() > room) pending.conservativeResize(Eigen::NoChange, room);
        orthonormalize(pending, cols);
      }

      DenseMatrix h = v_.leftCols(cols).transpose() * av_.leftCols(cols);
      h = 0.5 * (h + h.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
      if (es.info() != Eigen::Success) throw ConvergenceError("projected eigenproblem failed", INFINITY);
      const DenseMatrix& y = es.eigenvectors();
      const Vector& theta = es.eigenvalues();

      const DenseMatrix yk = y.leftCols(k_);
      const DenseMatrix ritz = v_.leftCols(cols) * yk;
      const DenseMatrix aritz = av_.leftCols(cols) * yk;
      worst = 0.0;
      for (int i = 0; i < k_; ++i) {
        worst = std::max(worst, (aritz.col(i) - theta[i] * ritz.col(i)).norm());
      }
      if (worst <= 0.5 * opts_.tol || cols == n_) {
        return {theta.head(k_), ritz};
      }

      // Continuation block: image of the newest block, orthogonal to the whole
      // current basis (hence to the retained Ritz vectors as well).
      pending = av_.middleCols(last_begin, last_width);
      orthonormalize(pending, cols);

      const DenseMatrix yp = y.leftCols(keep_);
      const DenseMatrix v_keep = v_.leftCols(cols) * yp;
      const DenseMatrix av_keep = av_.leftCols(cols) * yp;
      v_.leftCols(keep_) = v_keep;
      av_.leftCols(keep_) = av_keep;
      cols = keep_;
      const int room = max_basis_ - cols;
      if (pending.cols() > room) pending.conservativeResize(Eigen::NoChange, room);
    }
    throw ConvergenceError("Krylov eigensolver did not converge in " + std::to_string(opts_.max_iter) +
                               " restarts; worst residual " + std::to_string(worst),
                           worst);
  }

 private:
  void fill_random(DenseMatrix& m) {
    std::normal_distribution<double> normal;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = normal(rng_);
  }

  // Orthonormalize the columns of w against v_[:, :basis_cols] and against
  // each other. Columns that collapse are replaced by random directions.
  void orthonormalize(DenseMatrix& w, int basis_cols) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (int attempt = 0;; ++attempt) {
        const double before = w.col(j).norm();
        for (int pass = 0; pass < 2; ++pass) {
          if (locked_.cols() > 0) {
            const Vector c = locked_.transpose() * w.col(j);
            w.col(j) -= locked_ * c;
          }
          if (basis_cols > 0) {
            const Vector c = v_.leftCols(basis_cols).transpose() * w.col(j);
            w.col(j) -= v_.leftCols(basis_cols) * c;
          }
          if (j > 0) {
            const Vector c = w.leftCols(j).transpose() * w.col(j);
            w.col(j) -= w.leftCols(j) * c;
          }
        }
        const double after = w.col(j).norm();
        if (after > 1e-10 * before && after > 1e-300) {
          w.col(j) /= after;
          break;
        }
        if (attempt > 8) throw ConvergenceError("cannot extend Krylov basis", INFINITY);
        std::normal_distribution<double> normal;
        for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = normal(rng_);
      }
    }
  }

  const SparseOperator& op_;
  const DenseMatrix& locked_;
  int n_;
  int k_;
  EigenOptions opts_;
  Rng rng_;
  int block_ = 1;
  int max_basis_ = 0;
  int keep_ = 0;
  DenseMatrix v_;
  DenseMatrix av_;
};

// Block Krylov cannot see more copies of a repeated eigenvalue than its block
// width. After convergence, search the complement of the accepted vectors from
// a fresh random block and merge anything that undercuts the k-th value.
SpectralBundle krylov_eigenpairs(const SparseOperator& op, int k, const EigenOptions& opts) {
  const DenseMatrix none;
  RawPairs acc = BlockKrylovSchur(op, k, opts, none, 0).run();
  for (std::uint64_t round = 1; k < op.size(); ++round) {
    const int probe_k = std::min<int>(opts.block_size > 0 ? opts.block_size : std::min(k, 8), op.size() - k);
    const RawPairs extra = BlockKrylovSchur(op, probe_k, opts, acc.vectors, round).run();
    const double cutoff = acc.values[k - 1] - opts.tol;
    if (!(extra.values[0] < cutoff)) break;

    std::vector<std::pair<double, Eigen::Index>> order;
    for (Eigen::Index i = 0; i < k; ++i) order.emplace_back(acc.values[i], i);
    for (Eigen::Index i = 0; i < probe_k; ++i) {
      if (extra.values[i] < cutoff) order.emplace_back(extra.values[i], k + i);
    }
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    RawPairs merged{Vector(k), DenseMatrix(op.size(), k)};
    for (int i = 0; i < k; ++i) {
      const Eigen::Index src = order[static_cast<std::size_t>(i)].second;
      merged.values[i] = order[static_cast<std::size_t>(i)].first;
      if (src < k) {
        merged.vectors.col(i) = acc.vectors.col(src);
      } else {
        merged.vectors.col(i) = extra.vectors.col(src - k);
      }
    }
    acc = std::move(merged);
  }
  return finish(op, std::move(acc.values), std::move(acc.vectors));
}

}  // namespace

SpectralBundle smallest_eigenpairs(const SparseOperator& op, int k, const EigenOptions& opts) {
  const int n = op.size();
  if (k < 1) throw Error("smallest_eigenpairs: k must be >= 1");
  if (k > n) {
    throw Error("smallest_eigenpairs: k = " + std::to_string(k) + " exceeds N = " + std::to_string(n));
  }
  if (!(opts.tol > 0.0)) throw Error("smallest_eigenpairs: tol must be positive");

  const bool dense = opts.method == EigenMethod::kDense ||
                     (opts.method == EigenMethod::kAuto && n <= opts.dense_threshold);
  SpectralBundle b = dense ? dense_eigenpairs(op, k) : krylov_eigenpairs(op, k, opts);

  const double worst = b.residuals.maxCoeff();
  if (!(worst <= opts.tol)) {
    throw ConvergenceError("eigenpair residual " + std::to_string(worst) + " exceeds tolerance " +
                               std::to_string(opts.tol),
                           worst);
  }
  return b;
}

}  // namespace e2neg
