#include "e2neg/loss.hpp"

#include <cmath>
#include <string>

#include "e2neg/error.hpp"

namespace e2neg {

namespace {

// Row-normalizes, returning the norms. Zero rows make cosine undefined.
Matrix normalize_rows(const Matrix& z, Vector& norms, const char* view) {
  norms = z.rowwise().norm();
  for (Eigen::Index i = 0; i < norms.size(); ++i) {
    if (!(norms[i] > 0.0) || !std::isfinite(norms[i])) {
      throw TrainingError(std::string("InfoNCE: embedding row ") + std::to_string(i) + " of view " + view +
                          " has norm " + std::to_string(norms[i]) + "; cosine similarity undefined");
    }
  }
  return norms.cwiseInverse().asDiagonal() * z;
}

// d/dz of f(z/|z|) given d/du at u = z/|z|.
Matrix through_normalization(const Matrix& du, const Matrix& u, const Vector& norms) {
  const Vector radial = (du.cwiseProduct(u)).rowwise().sum();
  Matrix dz = du - radial.asDiagonal() * u;
  return norms.cwiseInverse().asDiagonal() * dz;
}

}  // namespace

LossResult infonce_loss(const Matrix& a, const Matrix& b, double tau, NegativeMode mode, bool with_gradient) {
  if (!(tau > 0.0)) throw Error("InfoNCE: temperature must be positive");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("InfoNCE: views have different shapes");
  const Eigen::Index m = a.rows();
  if (m < 2) throw Error("InfoNCE: need at least two anchors");

  Vector na;
  Vector nb;
  const Matrix u = normalize_rows(a, na, "a");
  const Matrix v = normalize_rows(b, nb, "b");

  const double inv_tau = 1.0 / tau;
  // Cosines are bounded by 1, so exp(s - 1/tau) never overflows.
  const Matrix s_ab = (u * v.transpose()) * inv_tau;
  Eigen::MatrixXd e_ab = (s_ab.array() - inv_tau).exp().matrix();
  Eigen::MatrixXd e_aa;
  Eigen::MatrixXd e_bb;
  const double cross_w = mode == NegativeMode::kCrossOnly ? 2.0 : 1.0;
  const bool intra = mode == NegativeMode::kCrossAndIntra;
  if (intra) {
    e_aa = ((u * u.transpose()) * inv_tau).array() - inv_tau;
    e_aa = e_aa.array().exp().matrix();
    e_bb = ((v * v.transpose()) * inv_tau).array() - inv_tau;
    e_bb = e_bb.array().exp().matrix();
    e_aa.diagonal().setZero();
    e_bb.diagonal().setZero();
  }

  // Denominators: view-a anchor i reads row i of e_ab, view-b anchor i reads
  // column i. Off-diagonal cross terms carry weight cross_w.
  const Vector diag = e_ab.diagonal();
  Vector den_a = cross_w * e_ab.rowwise().sum() - (cross_w - 1.0) * diag;
  Vector den_b = cross_w * e_ab.colwise().sum().transpose() - (cross_w - 1.0) * diag;
  if (intra) {
    den_a += e_aa.rowwise().sum();
    den_b += e_bb.rowwise().sum();
  }

  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double pos = s_ab(i, i) - inv_tau;
    total += (std::log(den_a[i]) - pos) + (std::log(den_b[i]) - pos);
  }
  const double scale = 1.0 / (2.0 * static_cast<double>(m));

  LossResult r;
  r.loss = total * scale;
  r.similarity_terms = similarity_term_count(static_cast<std::uint64_t>(m));
  if (!with_gradient) return r;

  // g_ab(i, j) = d loss / d s_ab(i, j), collecting both the view-a anchor i
  // and the view-b anchor j contributions.
  Eigen::MatrixXd w_ab = Eigen::MatrixXd::Constant(m, m, cross_w);
  w_ab.diagonal().setOnes();
  Eigen::MatrixXd g_ab = w_ab.cwiseProduct(e_ab);
  Eigen::MatrixXd from_a = den_a.cwiseInverse().asDiagonal() * g_ab;
  Eigen::MatrixXd from_b = g_ab * den_b.cwiseInverse().asDiagonal();
  g_ab = from_a + from_b;
  g_ab.diagonal().array() -= 2.0;
  g_ab *= scale;

  Matrix du = g_ab * v;
  Matrix dv = g_ab.transpose() * u;
  if (intra) {
    const Eigen::MatrixXd g_aa = den_a.cwiseInverse().asDiagonal() * e_aa * scale;
    const Eigen::MatrixXd g_bb = den_b.cwiseInverse().asDiagonal() * e_bb * scale;
    du += (g_aa + g_aa.transpose()) * u;
    dv += (g_bb + g_bb.transpose()) * v;
  }
  du *= inv_tau;
  dv *= inv_tau;

  r.grad_a = through_normalization(du, u, na);
  r.grad_b = through_normalization(dv, v, nb);
  return r;
}

LossResult infonce_center_loss(const Matrix& z_a, const Matrix& z_b, std::span<const NodeId> rows_a,
                               std::span<const NodeId> rows_b, double tau, NegativeMode mode,
                               bool with_gradient) {
  if (rows_a.size() != rows_b.size()) throw Error("InfoNCE: row selections differ in length");
  Matrix a(static_cast<Eigen::Index>(rows_a.size()), z_a.cols());
  Matrix b(static_cast<Eigen::Index>(rows_b.size()), z_b.cols());
  for (std::size_t i = 0; i < rows_a.size(); ++i) {
    if (rows_a[i] < 0 || rows_a[i] >= z_a.rows() || rows_b[i] < 0 || rows_b[i] >= z_b.rows()) {
      throw Error("InfoNCE: selected row out of range");
    }
    a.row(static_cast<Eigen::Index>(i)) = z_a.row(rows_a[i]);
    b.row(static_cast<Eigen::Index>(i)) = z_b.row(rows_b[i]);
  }
  return infonce_loss(a, b, tau, mode, with_gradient);
}

}  // namespace e2neg
