#include "bpfem/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bpfem {

namespace {
using ColMajor = Eigen::SparseMatrix<double>;
}

struct LinearSolver::Impl {
  ColMajor a;
  Eigen::SparseLU<ColMajor, Eigen::COLAMDOrdering<int>> lu;
  Eigen::BiCGSTAB<ColMajor, Eigen::IncompleteLUT<double>> bicg;
};

LinearSolver::LinearSolver(const SparseMat& a, LinearSolverKind kind)
    : kind_(kind), impl_(std::make_unique<Impl>()) {
  impl_->a = a;  // storage-order conversion
  if (kind_ == LinearSolverKind::Direct) {
    impl_->lu.analyzePattern(impl_->a);
    impl_->lu.factorize(impl_->a);
    if (impl_->lu.info() != Eigen::Success)
      throw std::runtime_error("LinearSolver: sparse LU factorization failed");
  } else {
    impl_->bicg.setTolerance(1e-12);
    impl_->bicg.setMaxIterations(20000);
    impl_->bicg.compute(impl_->a);
    if (impl_->bicg.info() != Eigen::Success)
      throw std::runtime_error("LinearSolver: ILU factorization failed");
  }
}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

Vector LinearSolver::solve(const Vector& rhs) const {
  if (rhs.size() != impl_->a.rows()) throw std::invalid_argument("LinearSolver: size mismatch");
  Vector x;
  if (kind_ == LinearSolverKind::Direct) {
    x = impl_->lu.solve(rhs);
    if (impl_->lu.info() != Eigen::Success)
      throw std::runtime_error("LinearSolver: back substitution failed");
  } else {
    x = impl_->bicg.solve(rhs);
    if (impl_->bicg.info() != Eigen::Success)
      throw std::runtime_error("LinearSolver: BiCGStab did not converge");
  }
  return x;
}

Vector solve_sparse(const SparseMat& a, const Vector& rhs, LinearSolverKind kind) {
  LinearSolver solver(a, kind);
  Vector x = solver.solve(rhs);
  if (kind == LinearSolverKind::Direct) {
    double scale = 1.0;
    for (int k = 0; k < a.outerSize(); ++k)
      for (SparseMat::InnerIterator it(a, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
    double res = (a * x - rhs).norm();
    double bound = 1e-12 * (scale * x.norm() + rhs.norm() + 1.0);
    if (!(res <= bound)) throw std::runtime_error("solve_sparse: residual check failed");
  }
  return x;
}

Vector cip_initial(const LinearSolver& solver, const Vector& rhs) { return solver.solve(rhs); }

SolveReport richardson(const SparseMat& a, const Vector& sigma, const Vector& rhs,
                       AdmissibleBox box, const FixedPointConfig& cfg, const SparseMat& m) {
  const Eigen::Index n = rhs.size();
  if (a.rows() != n || sigma.size() != n || m.rows() != n)
    throw std::invalid_argument("richardson: size mismatch");
  if (!(cfg.omega > 0.0)) throw std::invalid_argument("richardson: omega must be positive");

  LinearSolver solver(a, cfg.linear);
  SolveReport rep;
  rep.u = solver.solve(rhs);
  rep.iterations = 1;

  while (rep.iterations < cfg.max_iter) {
    Vector u_plus = clip_plus(rep.u, box);
    Vector u_minus = rep.u - u_plus;
    Vector residual = rhs - a * u_plus - sigma.cwiseProduct(u_minus);
    Vector next = solver.solve(a * rep.u + cfg.omega * residual);
    ++rep.iterations;

    // a diverging iteration can overflow long before max_iter; report it as
    // non-convergence and keep the last finite iterate
    if (!next.allFinite()) {
      rep.increment_history.push_back(std::numeric_limits<double>::infinity());
      break;
    }

    Vector inc = next - rep.u;
    double inc_norm = std::sqrt(std::abs(inc.dot(m * inc)));
    rep.increment_history.push_back(inc_norm);
    rep.u = std::move(next);
    if (inc_norm <= cfg.tol) {
      rep.converged = true;
      break;
    }
  }

  rep.u_plus = clip_plus(rep.u, box);
  rep.u_minus = rep.u - rep.u_plus;
  return rep;
}

Vector recover_complement(const SparseMat& a, const Vector& sigma, const Vector& rhs,
                          const Vector& u_plus) {
  if (sigma.minCoeff() <= 0.0)
    throw std::invalid_argument("recover_complement: sigma must be positive");
  Vector r = rhs - a * u_plus;
  return r.cwiseQuotient(sigma);
}

Vector vi_oracle(const Eigen::MatrixXd& a, const Vector& rhs, AdmissibleBox box) {
  const int m = static_cast<int>(rhs.size());
  if (m > 12) throw std::invalid_argument("vi_oracle: enumeration limited to 12 unknowns");
  if (!(box.upper > box.lower)) throw std::invalid_argument("vi_oracle: empty admissible box");

  const double kkt_tol = 1e-10;
  enum : int { kFree = 0, kLower = 1, kUpper = 2 };
  std::vector<int> state(m);
  bool found = false;
  Vector solution;

  long total = 1;
  for (int i = 0; i < m; ++i) total *= 3;

  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int i = 0; i < m; ++i) {
      state[i] = static_cast<int>(c % 3);
      c /= 3;
    }

    std::vector<int> free;
    Vector x(m);
    for (int i = 0; i < m; ++i) {
      if (state[i] == kFree)
        free.push_back(i);
      else
        x[i] = state[i] == kLower ? box.lower : box.upper;
    }

    if (!free.empty()) {
      const int nf = static_cast<int>(free.size());
      Eigen::MatrixXd aff(nf, nf);
      Vector bf(nf);
      for (int r = 0; r < nf; ++r) {
        bf[r] = rhs[free[r]];
        for (int i = 0; i < m; ++i)
          if (state[i] != kFree) bf[r] -= a(free[r], i) * x[i];
        for (int s = 0; s < nf; ++s) aff(r, s) = a(free[r], free[s]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(aff);
      if (!lu.isInvertible()) continue;
      Vector xf = lu.solve(bf);
      bool inside = true;
      for (int r = 0; r < nf; ++r) {
        if (!std::isfinite(xf[r]) || xf[r] <= box.lower || xf[r] >= box.upper) {
          inside = false;
          break;
        }
        x[free[r]] = xf[r];
      }
      if (!inside) continue;
    }

    Vector res = a * x - rhs;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      if (state[i] == kLower && res[i] < -kkt_tol) ok = false;
      if (state[i] == kUpper && res[i] > kkt_tol) ok = false;
    }
    if (!ok) continue;

    if (found) {
      if ((x - solution).lpNorm<Eigen::Infinity>() > 1e-9)
        throw std::runtime_error("vi_oracle: multiple distinct KKT points");
    } else {
      found = true;
      solution = x;
    }
  }

  if (!found) throw std::runtime_error("vi_oracle: no KKT point found");
  return solution;
}

}  // namespace bpfem
