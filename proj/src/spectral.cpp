#include "wlgt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wlgt/error.hpp"
#include "wlgt/random.hpp"

namespace wlgt {

Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  const int n = g.num_nodes();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [u, v] : g.edges()) a(u, v) = a(v, u) = 1.0;
  return a;
}

Eigen::MatrixXd laplacian(const Graph& g, bool normalized) {
  const int n = g.num_nodes();
  Eigen::MatrixXd l = -adjacency_matrix(g);
  for (int v = 0; v < n; ++v) l(v, v) = g.degree(v);
  if (!normalized) return l;
  Eigen::VectorXd inv_sqrt(n);
  for (int v = 0; v < n; ++v) inv_sqrt(v) = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) l(i, j) *= inv_sqrt(i) * inv_sqrt(j);
  return l;
}

namespace {

void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> col) {
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    if (std::abs(col(i)) > 1e-9) {
      if (col(i) < 0) col = -col;
      return;
    }
  }
}

void fill_diagnostics(const Eigen::MatrixXd& m, SpectralDecomposition& dec) {
  const auto n = m.rows();
  if (n == 0) return;
  Eigen::MatrixXd r = m * dec.eigenvectors - dec.eigenvectors * dec.eigenvalues.asDiagonal();
  dec.residual = r.cwiseAbs().maxCoeff();
  Eigen::MatrixXd o = dec.eigenvectors.transpose() * dec.eigenvectors - Eigen::MatrixXd::Identity(n, n);
  dec.orthogonality_error = o.cwiseAbs().maxCoeff();
}

}  // namespace

SpectralDecomposition eigh(const Eigen::MatrixXd& m, SpectralSource source, const EighOptions& opts) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kShapeMismatch, "eigh needs a square matrix");
  const auto n = m.rows();
  if (n > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw Error(ErrorCode::kNonSymmetric, "matrix is not symmetric within 1e-12");

  Eigen::MatrixXd a = m;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double threshold = opts.tolerance * std::max(1.0, m.norm());
  int sweep = 0;
  for (;; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = 0; q < n; ++q)
        if (p != q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) < threshold) break;
    if (sweep >= opts.max_sweeps)
      throw Error(ErrorCode::kNoConvergence, "Jacobi iteration did not converge");
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  for (Eigen::Index j = 0; j < n; ++j) canonicalize_sign(v.col(j));

  // Ascending eigenvalues; ties within 1e-9 ordered lexicographically by
  // eigenvector entries rounded at 1e-9.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) < a(y, y); });
  auto rounded_less = [&](Eigen::Index x, Eigen::Index y) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double rx = std::round(v(i, x) * 1e9), ry = std::round(v(i, y) * 1e9);
      if (rx != ry) return rx < ry;
    }
    return false;
  };
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo + 1;
    while (hi < order.size() && a(order[hi], order[hi]) - a(order[hi - 1], order[hi - 1]) <= 1e-9) ++hi;
    std::stable_sort(order.begin() + lo, order.begin() + hi, rounded_less);
    lo = hi;
  }

  SpectralDecomposition dec;
  dec.source = source;
  dec.sweeps = sweep;
  dec.eigenvalues.resize(n);
  dec.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    dec.eigenvalues(j) = a(order[j], order[j]);
    dec.eigenvectors.col(j) = v.col(order[j]);
  }
  fill_diagnostics(m, dec);
  return dec;
}

SpectralDecomposition graph_spectrum(const Graph& g, bool normalized) {
  return eigh(laplacian(g, normalized),
              normalized ? SpectralSource::kNormalizedLaplacian : SpectralSource::kLaplacian);
}

SpectralDecomposition sign_flip(const SpectralDecomposition& dec, const std::vector<int>& signs) {
  if (static_cast<Eigen::Index>(signs.size()) != dec.eigenvectors.cols())
    throw Error(ErrorCode::kShapeMismatch, "one sign per eigenvector is required");
  SpectralDecomposition out = dec;
  for (std::size_t j = 0; j < signs.size(); ++j) {
    if (signs[j] != 1 && signs[j] != -1) throw Error(ErrorCode::kInvalidArgument, "signs must be +1 or -1");
    out.eigenvectors.col(static_cast<Eigen::Index>(j)) *= signs[j];
  }
  return out;
}

SpectralDecomposition sign_flip(const SpectralDecomposition& dec, std::uint64_t seed) {
  std::vector<int> signs(dec.eigenvectors.cols());
  for (std::size_t j = 0; j < signs.size(); ++j)
    signs[j] = (hash_combine(hash_combine(seed, 0x5167), j) & 1) ? -1 : 1;
  return sign_flip(dec, signs);
}

double min_nonzero_gap(const Eigen::VectorXd& eigenvalues, double tol) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 1; j < eigenvalues.size(); ++j) {
    const double d = eigenvalues(j) - eigenvalues(j - 1);
    if (d > tol) gap = std::min(gap, d);
  }
  return gap;
}

Eigen::VectorXd epsilon_ladder(int l, double delta) {
  Eigen::VectorXd eps(l);
  for (int j = 0; j < l; ++j) eps(j) = (j + 1) * delta;
  return eps;
}

Eigen::MatrixXd seeded_gaussian(std::uint64_t seed, std::uint64_t tag, int rows, int cols, double scale) {
  Eigen::MatrixXd m(rows, cols);
  const std::uint64_t base = hash_combine(seed, tag);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * keyed_gaussian(hash_combine(hash_combine(base, i), j));
  return m;
}

EncoderParams EncoderParams::make(std::uint64_t seed, int eig_count, int out_dim, int hidden, int channels) {
  if (eig_count < 1 || out_dim < 1 || hidden < 1 || channels < 1)
    throw Error(ErrorCode::kInvalidArgument, "encoder dimensions must be positive");
  EncoderParams p;
  p.seed = seed;
  p.eig_count = eig_count;
  p.out_dim = out_dim;
  p.hidden = hidden;
  p.channels = channels;
  p.epsilon = Eigen::VectorXd::Zero(eig_count);
  const double hs = 1.0 / std::sqrt(static_cast<double>(hidden));
  p.phi_w1 = seeded_gaussian(seed, 101, hidden, 2);
  p.phi_b1 = seeded_gaussian(seed, 102, hidden, 1, 0.1);
  p.phi_w2 = seeded_gaussian(seed, 103, hidden, hidden, hs);
  p.phi_b2 = seeded_gaussian(seed, 104, hidden, 1, 0.1);
  p.spe_w1 = seeded_gaussian(seed, 201, channels, hidden);
  p.spe_b1 = seeded_gaussian(seed, 202, channels, hidden, 0.1);
  p.spe_w2 = seeded_gaussian(seed, 203, channels, hidden, hs);
  p.spe_b2 = seeded_gaussian(seed, 204, channels, 1, 0.1);
  p.psi_w = seeded_gaussian(seed, 301, hidden, channels);
  p.psi_b = seeded_gaussian(seed, 302, hidden, 1, 0.1);
  p.rho_w1 = seeded_gaussian(seed, 401, hidden, hidden, hs);
  p.rho_b1 = seeded_gaussian(seed, 402, hidden, 1, 0.1);
  p.rho_w2 = seeded_gaussian(seed, 403, out_dim, hidden, hs);
  p.rho_b2 = seeded_gaussian(seed, 404, out_dim, 1, 0.1);
  return p;
}

namespace {

Eigen::VectorXd relu(const Eigen::VectorXd& x) { return x.cwiseMax(0.0); }

Eigen::RowVectorXd apply_rho(const EncoderParams& p, const Eigen::VectorXd& z) {
  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(p.out_dim);
  if (p.rho == RhoKind::kSum) {
    out(0) = z.sum();
    return out;
  }
  return (p.rho_w2 * relu(p.rho_w1 * z + p.rho_b1) + p.rho_b2).transpose();
}

}  // namespace

Eigen::MatrixXd lpe(const SpectralDecomposition& dec, const EncoderParams& p) {
  const auto n = dec.eigenvectors.rows();
  const int l = p.eig_count;
  if (l > dec.eigenvalues.size() || p.epsilon.size() != l)
    throw Error(ErrorCode::kShapeMismatch, "eig_count exceeds the available eigenpairs");
  Eigen::MatrixXd out(n, p.out_dim);
  for (Eigen::Index v = 0; v < n; ++v) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(p.hidden);
    for (int j = 0; j < l; ++j) {
      const double x = dec.eigenvectors(v, j);
      const double lam = dec.eigenvalues(j) + p.epsilon(j);
      if (p.phi == PhiKind::kFirstCoordinate) {
        z(0) += x;
      } else if (p.phi == PhiKind::kOnes) {
        z(0) += 1.0;
      } else {
        Eigen::Vector2d in(x, lam);
        z += p.phi_w2 * relu(p.phi_w1 * in + p.phi_b1) + p.phi_b2;
      }
    }
    out.row(v) = apply_rho(p, z);
  }
  return out;
}

Eigen::MatrixXd spe(const SpectralDecomposition& dec, const EncoderParams& p, int rank_m) {
  const auto n = dec.eigenvectors.rows();
  if (rank_m < 1 || rank_m > dec.eigenvalues.size())
    throw Error(ErrorCode::kInvalidArgument, "rank_m out of range");
  const Eigen::MatrixXd vm = dec.eigenvectors.leftCols(rank_m);
  std::vector<Eigen::MatrixXd> q(p.channels);
  for (int c = 0; c < p.channels; ++c) {
    Eigen::VectorXd phi(rank_m);
    for (int i = 0; i < rank_m; ++i) {
      if (p.phi == PhiKind::kMlp) {
        const double lam = dec.eigenvalues(i);
        double acc = p.spe_b2(c);
        for (int h = 0; h < p.hidden; ++h)
          acc += p.spe_w2(c, h) * std::max(0.0, p.spe_w1(c, h) * lam + p.spe_b1(c, h));
        phi(i) = acc;
      } else {
        phi(i) = 1.0;
      }
    }
    q[c] = vm * phi.asDiagonal() * vm.transpose();
  }
  Eigen::MatrixXd out(n, p.out_dim);
  for (Eigen::Index v = 0; v < n; ++v) {
    const int zdim = p.rho == RhoKind::kSum ? p.channels : p.hidden;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(zdim);
    for (Eigen::Index u = 0; u < n; ++u) {
      Eigen::VectorXd entry(p.channels);
      for (int c = 0; c < p.channels; ++c) entry(c) = q[c](v, u);
      if (p.rho == RhoKind::kSum) z += entry;
      else z += relu(p.psi_w * entry + p.psi_b);
    }
    out.row(v) = apply_rho(p, z);
  }
  return out;
}

IdentifyingTargets identifying_targets(const Graph& g, bool normalized) {
  const int n = g.num_nodes();
  IdentifyingTargets t;
  t.decomposition = graph_spectrum(g, normalized);
  const auto& dec = t.decomposition;
  t.p_node = dec.eigenvectors;
  Eigen::VectorXd root = dec.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  t.p_adj = dec.eigenvectors * root.asDiagonal();
  if (normalized) {
    for (int v = 0; v < n; ++v) t.p_adj.row(v) *= std::sqrt(static_cast<double>(g.degree(v)));
  }
  const double scale = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  t.wq_node = scale * id;
  t.wk_node = id;
  t.wq_adj = -scale * id;
  t.wk_adj = id;
  return t;
}

Eigen::MatrixXd attention_scores(const Eigen::MatrixXd& p, const Eigen::MatrixXd& wq, const Eigen::MatrixXd& wk) {
  if (p.cols() != wq.rows() || p.cols() != wk.rows() || wq.cols() != wk.cols())
    throw Error(ErrorCode::kShapeMismatch, "projection shapes are inconsistent");
  const double dk = static_cast<double>(wk.cols());
  return (p * wq) * (p * wk).transpose() / std::sqrt(dk);
}

IdentifyingCheck check_identifying(const Eigen::MatrixXd& p, const Eigen::MatrixXd& wq, const Eigen::MatrixXd& wk,
                                   const Graph& g, IdentifyTarget target, double tie_tol) {
  const int n = g.num_nodes();
  if (p.rows() != n) throw Error(ErrorCode::kShapeMismatch, "P must have one row per node");
  const Eigen::MatrixXd s = attention_scores(p, wq, wk);
  IdentifyingCheck out;
  out.margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    auto qualifies = [&](int j) { return target == IdentifyTarget::kNode ? i == j : g.adjacent(i, j); };
    const double mx = s.row(i).maxCoeff();
    double best_other = -std::numeric_limits<double>::infinity();
    bool ok = true;
    for (int j = 0; j < n; ++j) {
      const bool is_max = s(i, j) >= mx - tie_tol;
      if (is_max != qualifies(j)) ok = false;
      if (!qualifies(j)) best_other = std::max(best_other, s(i, j));
    }
    out.margin = std::min(out.margin, mx - best_other);
    if (!ok) out.rows_failed.push_back(i);
  }
  out.pass = out.rows_failed.empty();
  return out;
}

}  // namespace wlgt
