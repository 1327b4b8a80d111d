#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "wlgt/graph.hpp"

namespace wlgt {

enum class SpectralSource { kLaplacian, kNormalizedLaplacian, kAdjacency, kGeneric };

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns
  SpectralSource source = SpectralSource::kGeneric;
  double residual = 0.0;              // max |M V - V diag(lambda)|
  double orthogonality_error = 0.0;   // max |V^T V - I|
  int sweeps = 0;
};

Eigen::MatrixXd adjacency_matrix(const Graph& g);

/// L = D - A, or D^{-1/2} L D^{-1/2}.
Eigen::MatrixXd laplacian(const Graph& g, bool normalized);

struct EighOptions {
  int max_sweeps = 100;
  double tolerance = 1e-12;
};

/// Cyclic Jacobi eigensolver with deterministic ordering and sign convention.
/// Throws NON_SYMMETRIC or NO_CONVERGENCE.
SpectralDecomposition eigh(const Eigen::MatrixXd& m, SpectralSource source = SpectralSource::kGeneric,
                           const EighOptions& opts = {});

SpectralDecomposition graph_spectrum(const Graph& g, bool normalized);

/// Multiply each eigenvector column by an independent random sign.
SpectralDecomposition sign_flip(const SpectralDecomposition& dec, std::uint64_t seed);

/// Multiply column j by signs[j] (each +1 or -1).
SpectralDecomposition sign_flip(const SpectralDecomposition& dec, const std::vector<int>& signs);

/// Smallest gap between distinct consecutive eigenvalues (gaps <= tol ignored).
double min_nonzero_gap(const Eigen::VectorXd& eigenvalues, double tol = 1e-9);

/// epsilon_j = j * delta for j = 1..l.
Eigen::VectorXd epsilon_ladder(int l, double delta);

enum class PhiKind { kMlp, kFirstCoordinate, kOnes };
enum class RhoKind { kMlp, kSum };

/// Seeded, untrained encoder weights shared by the LPE and SPE encoders.
struct EncoderParams {
  std::uint64_t seed = 0;
  int eig_count = 0;   // eigenpairs consumed (LPE)
  int out_dim = 0;
  int hidden = 16;
  int channels = 4;    // SPE: number of phi_l maps
  PhiKind phi = PhiKind::kMlp;
  RhoKind rho = RhoKind::kMlp;
  Eigen::VectorXd epsilon;  // length eig_count, zero by default

  // LPE phi: R^2 -> hidden -> hidden
  Eigen::MatrixXd phi_w1, phi_w2;
  Eigen::VectorXd phi_b1, phi_b2;
  // SPE phi_l: R -> hidden -> 1, one per channel
  Eigen::MatrixXd spe_w1, spe_w2;  // channels x hidden each
  Eigen::MatrixXd spe_b1;          // channels x hidden
  Eigen::VectorXd spe_b2;          // channels
  // SPE psi over the channel vector: channels -> hidden
  Eigen::MatrixXd psi_w;
  Eigen::VectorXd psi_b;
  // rho: hidden -> hidden -> out_dim
  Eigen::MatrixXd rho_w1, rho_w2;
  Eigen::VectorXd rho_b1, rho_b2;

  static EncoderParams make(std::uint64_t seed, int eig_count, int out_dim, int hidden = 16,
                            int channels = 4);
};

/// Row v = rho(sum_j phi(V[v, j], lambda_j + epsilon_j)) over the first
/// eig_count eigenpairs.
Eigen::MatrixXd lpe(const SpectralDecomposition& dec, const EncoderParams& params);

/// Basis-invariant encoder over V_m diag(phi_l(lambda_m)) V_m^T, using the
/// rank_m smallest eigenpairs.
Eigen::MatrixXd spe(const SpectralDecomposition& dec, const EncoderParams& params, int rank_m);

struct IdentifyingTargets {
  SpectralDecomposition decomposition;
  Eigen::MatrixXd p_node, p_adj;
  Eigen::MatrixXd wq_node, wk_node, wq_adj, wk_adj;
};

/// Node target V with (1/sqrt(d_k)) P Wq (P Wk)^T = I, and adjacency target
/// with the same product equal to -L.
IdentifyingTargets identifying_targets(const Graph& g, bool normalized);

enum class IdentifyTarget { kNode, kAdjacency };

struct IdentifyingCheck {
  bool pass = false;
  double margin = 0.0;
  std::vector<int> rows_failed;
};

IdentifyingCheck check_identifying(const Eigen::MatrixXd& p, const Eigen::MatrixXd& wq,
                                   const Eigen::MatrixXd& wk, const Graph& g, IdentifyTarget target,
                                   double tie_tol = 1e-9);

/// (1/sqrt(d_k)) P Wq (P Wk)^T with d_k = Wk.cols().
Eigen::MatrixXd attention_scores(const Eigen::MatrixXd& p, const Eigen::MatrixXd& wq,
                                 const Eigen::MatrixXd& wk);

/// Seeded standard-normal matrix, entry (i, j) keyed by (seed, tag, i, j).
Eigen::MatrixXd seeded_gaussian(std::uint64_t seed, std::uint64_t tag, int rows, int cols,
                                double scale = 1.0);

}  // namespace wlgt
