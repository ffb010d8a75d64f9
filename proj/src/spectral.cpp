#include "pinchlab/spectral.hpp"

#include "pinchlab/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>
#include <random>

namespace pinchlab {

namespace {

using Mat = Eigen::MatrixXd;

// M-orthonormalizes the columns of B, dropping near-dependent directions.
Mat svqb(const SparseMat& M, const Mat& B) {
  if (B.cols() == 0) return B;
  Mat G = B.transpose() * (M * B);
  G = 0.5 * (G + G.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  const Eigen::VectorXd& d = es.eigenvalues();
  const double dmax = d.maxCoeff();
  if (!(dmax > 0)) return Mat(B.rows(), 0);
  int kept = 0;
  for (int i = 0; i < d.size(); ++i) {
    if (d[i] > 1e-12 * dmax) ++kept;
  }
  Mat T(d.size(), kept);
  int c = 0;
  for (int i = 0; i < d.size(); ++i) {
    if (d[i] > 1e-12 * dmax) T.col(c++) = es.eigenvectors().col(i) / std::sqrt(d[i]);
  }
  return B * T;
}

struct RitzStep {
  Mat X;
  Eigen::VectorXd theta;
  Mat coeffs;  // full Ritz coefficients in the supplied basis
};

RitzStep rayleigh_ritz(const SparseMat& S, const Mat& B, int want) {
  Mat A = B.transpose() * (S * B);
  A = 0.5 * (A + A.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  RitzStep out;
  want = std::min<int>(want, static_cast<int>(B.cols()));
  out.coeffs = es.eigenvectors().leftCols(want);
  out.theta = es.eigenvalues().head(want);
  out.X = B * out.coeffs;
  return out;
}

}  // namespace

EigenResult first_nonzero_eigenvalue(const OperatorPair& ops, const EigenOptions& opts) {
  const SparseMat& S = ops.stiffness;
  const SparseMat& M = ops.mass;
  const int n = static_cast<int>(S.rows());
  if (n < 3) throw ConfigError("first_nonzero_eigenvalue: operator too small");

  if (ops.mass_type == MassType::Consistent) {
    Eigen::SimplicialLLT<SparseMat> chol(M);
    if (chol.info() != Eigen::Success) {
      throw NumericError("first_nonzero_eigenvalue: mass matrix is not positive definite");
    }
  } else {
    for (int i = 0; i < n; ++i) {
      if (!(ops.vertex_weights[i] > 0)) {
        throw NumericError("first_nonzero_eigenvalue: mass matrix is not positive definite");
      }
    }
  }

  const int m = std::max(1, std::min(opts.block, n - 2));

  // Constant-mode deflation operator.
  const ScalarField ones = ScalarField::Ones(n);
  const ScalarField Mones = M * ones;
  const ScalarField c = ones / std::sqrt(ones.dot(Mones));
  const ScalarField Mc = Mones / std::sqrt(ones.dot(Mones));
  auto deflate = [&](Mat& Z) { Z.noalias() -= c * (Mc.transpose() * Z); };

  // Shifted factorization used purely as a preconditioner.
  double sigma = 1e-4 * (S.diagonal().sum() / M.diagonal().sum());
  if (!(sigma > 0) || !std::isfinite(sigma)) sigma = 1e-8;
  Eigen::SimplicialLDLT<SparseMat> prec(S + sigma * M);
  if (prec.info() != Eigen::Success) {
    throw NumericError("first_nonzero_eigenvalue: preconditioner factorization failed");
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat X(n, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) X(i, j) = gauss(rng);
  }
  deflate(X);
  X = svqb(M, X);
  if (X.cols() == 0) throw NumericError("first_nonzero_eigenvalue: start block collapsed");

  RitzStep rr = rayleigh_ritz(S, X, m);
  X = rr.X;
  Eigen::VectorXd theta = rr.theta;

  Mat P(n, 0);
  double best_resid = std::numeric_limits<double>::max();
  double best_theta = theta[0];
  int iterations = 0;
  bool converged = false;

  auto residual_of_first = [&](const Mat& Xc, const Eigen::VectorXd& th) {
    const ScalarField mx = M * Xc.col(0);
    const ScalarField r = S * Xc.col(0) - th[0] * mx;
    return r.norm() / mx.norm();
  };

  const int lobpcg_budget = std::max(1, opts.max_iter / 2);
  for (int it = 0; it < lobpcg_budget; ++it) {
    ++iterations;
    const Mat MX = M * X;
    Mat R = S * X - MX * theta.asDiagonal();
    const double res0 = R.col(0).norm() / MX.col(0).norm();
    if (res0 < best_resid) {
      best_resid = res0;
      best_theta = theta[0];
    }
    if (res0 <= opts.tol && theta[0] > 0) {
      converged = true;
      break;
    }

    Mat W = prec.solve(R);
    deflate(W);
    // Orthogonalize the new blocks against X, then within themselves.
    W.noalias() -= X * (X.transpose() * (M * W));
    W = svqb(M, W);
    if (P.cols() > 0) {
      P.noalias() -= X * (X.transpose() * (M * P));
      if (W.cols() > 0) P.noalias() -= W * (W.transpose() * (M * P));
      P = svqb(M, P);
    }

    Mat B(n, X.cols() + W.cols() + P.cols());
    B << X, W, P;
    rr = rayleigh_ritz(S, B, m);

    // Conjugate direction: the part of the update outside the current X block.
    Mat zp = rr.coeffs;
    zp.topRows(X.cols()).setZero();
    P = B * zp;
    X = rr.X;
    theta = rr.theta;
  }

  if (!converged) {
    // Restarted fallback: blocked inverse iteration with the same factorization.
    for (int it = iterations; it < opts.max_iter; ++it) {
      ++iterations;
      Mat Y = prec.solve(M * X);
      deflate(Y);
      Y = svqb(M, Y);
      if (Y.cols() == 0) break;
      rr = rayleigh_ritz(S, Y, std::min<int>(m, static_cast<int>(Y.cols())));
      X = rr.X;
      theta = rr.theta;
      const double res0 = residual_of_first(X, theta);
      if (res0 < best_resid) {
        best_resid = res0;
        best_theta = theta[0];
      }
      if (res0 <= opts.tol && theta[0] > 0) {
        converged = true;
        break;
      }
    }
  }

  if (!converged) {
    throw NumericError("first_nonzero_eigenvalue: no convergence within max_iter (best Ritz value " +
                       std::to_string(best_theta) + ", residual " + std::to_string(best_resid) + ")");
  }

  EigenResult out;
  ScalarField phi = X.col(0);
  // Final polish of the deflation and normalization.
  phi -= c * Mc.dot(phi);
  const double mnorm = std::sqrt(phi.dot(M * phi));
  phi /= mnorm;
  int peak = 0;
  phi.cwiseAbs().maxCoeff(&peak);
  if (phi[peak] < 0) phi = -phi;

  const ScalarField mphi = M * phi;
  out.lambda1 = phi.dot(S * phi) / phi.dot(mphi);
  out.eigenvector = phi;
  out.residual = (S * phi - out.lambda1 * mphi).norm() / mphi.norm();
  out.iterations = iterations;
  if (!(out.lambda1 > 0)) {
    throw NumericError("first_nonzero_eigenvalue: nonpositive Ritz value after deflation");
  }
  return out;
}

double rayleigh_quotient(const OperatorPair& ops, const ScalarField& f) {
  if (f.size() != ops.vertex_weights.size()) {
    throw ConfigError("rayleigh_quotient: field size does not match operator size");
  }
  const double mean = f.dot(ops.vertex_weights) / ops.total_area;
  const ScalarField g = f.array() - mean;
  const double den = g.dot(ops.mass * g);
  const double scale = f.dot(ops.mass * f) + ops.total_area;
  if (den <= 1e-20 * scale) {
    throw ConfigError("rayleigh_quotient: field is constant");
  }
  return g.dot(ops.stiffness * g) / den;
}

}  // namespace pinchlab
