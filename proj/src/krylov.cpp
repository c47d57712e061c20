#include "lsweep/krylov.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace lsweep {

namespace {

void check_finite(const Field& v, const char* what, int iteration) {
  if (!v.allFinite()) {
    std::ostringstream msg;
    msg << "gmres: non-finite values in " << what << " at iteration " << iteration;
    throw NumericalError(msg.str());
  }
}

}  // namespace

std::pair<Field, SolveReport> gmres(const LinearMap& apply, const Field& b,
                                    const LinearMap& precond, GmresOptions options) {
  if (!(options.tol > 0.0 && options.tol < 1.0)) {
    throw std::invalid_argument("gmres: tolerance must lie in (0, 1)");
  }
  if (options.max_iter < 0 || options.restart < 1) {
    throw std::invalid_argument("gmres: bad iteration limits");
  }
  const auto start = std::chrono::steady_clock::now();
  SolveReport rep;
  const Eigen::Index n = b.size();
  Field x = Field::Zero(n);
  check_finite(b, "the right-hand side", 0);

  auto finish = [&]() {
    rep.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::pair{std::move(x), std::move(rep)};
  };

  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    rep.converged = true;
    return finish();
  }
  const bool left = !options.flexible && static_cast<bool>(precond);
  const bool right = options.flexible && static_cast<bool>(precond);
  auto M = [&](const Field& v) {
    ++rep.preconditioner_applications;
    return precond(v);
  };
  auto A = [&](const Field& v) {
    ++rep.operator_applications;
    return apply(v);
  };

  Field r = left ? M(b) : b;
  check_finite(r, "the preconditioned right-hand side", 0);
  const double norm0 = r.norm();
  if (norm0 == 0.0) {
    rep.converged = true;
    return finish();
  }

  const int m = options.restart;
  int total = 0;
  bool first_cycle = true;
  while (total < options.max_iter) {
    if (!first_cycle) {
      r = b - A(x);
      if (left) r = M(r);
    }
    first_cycle = false;
    const double beta = r.norm();
    if (beta / norm0 <= options.tol) {
      rep.converged = true;
      break;
    }
    std::vector<Field> V;
    std::vector<Field> Z;
    V.push_back(r / beta);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(m + 1);
    std::vector<double> cs(static_cast<std::size_t>(m));
    std::vector<cplx> sn(static_cast<std::size_t>(m));
    g(0) = beta;
    int k = 0;
    bool stop = false;
    for (int j = 0; j < m && total < options.max_iter; ++j) {
      Field z = right ? M(V[j]) : V[j];
      Field w = A(z);
      if (left) w = M(w);
      check_finite(w, "the Krylov vector", total + 1);
      if (right) Z.push_back(std::move(z));
      const double w_norm = w.norm();
      // Modified Gram-Schmidt, two passes.
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const cplx hij = V[i].dot(w);
          H(i, j) += hij;
          w -= hij * V[i];
        }
      }
      const double h_next = w.norm();
      H(j + 1, j) = h_next;
      for (int i = 0; i < j; ++i) {
        const cplx a = H(i, j), c2 = H(i + 1, j);
        H(i, j) = cs[i] * a + sn[i] * c2;
        H(i + 1, j) = -std::conj(sn[i]) * a + cs[i] * c2;
      }
      const cplx a = H(j, j);
      const double denom = std::hypot(std::abs(a), h_next);
      if (denom == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else if (std::abs(a) == 0.0) {
        cs[j] = 0.0;
        sn[j] = 1.0;
      } else {
        cs[j] = std::abs(a) / denom;
        sn[j] = (a / std::abs(a)) * h_next / denom;
      }
      H(j, j) = cs[j] * a + sn[j] * h_next;
      H(j + 1, j) = 0.0;
      g(j + 1) = -std::conj(sn[j]) * g(j);
      g(j) = cs[j] * g(j);

      ++total;
      k = j + 1;
      const double res = std::abs(g(j + 1)) / norm0;
      if (!std::isfinite(res)) throw NumericalError("gmres: residual estimate is not finite");
      rep.residual_history.push_back(res);
      if (res <= options.tol) {
        rep.converged = true;
        stop = true;
        break;
      }
      if (h_next <= 1e-14 * w_norm) {
        rep.breakdown = true;
        stop = true;
        break;
      }
      V.push_back(w / h_next);
    }
    if (k > 0) {
      const Eigen::VectorXcd y = H.topLeftCorner(k, k)
                                     .triangularView<Eigen::Upper>()
                                     .solve(g.head(k));
      const std::vector<Field>& basis = right ? Z : V;
      for (int i = 0; i < k; ++i) x += y(i) * basis[i];
    }
    if (stop) break;
  }
  rep.iterations = total;
  const Field res = b - A(x);
  rep.true_residual = res.norm() / b_norm;
  check_finite(x, "the solution", total);
  return finish();
}

}  // namespace lsweep
