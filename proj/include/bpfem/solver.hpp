#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "bpfem/assembly.hpp"
#include "bpfem/projection.hpp"

namespace bpfem {

enum class LinearSolverKind { Direct, Iterative };

// Factors once, solves many right-hand sides.  Direct is sparse LU with
// column reordering; Iterative is ILU-preconditioned BiCGStab with a tight
// tolerance so both backends may be used interchangeably.
class LinearSolver {
 public:
  explicit LinearSolver(const SparseMat& a, LinearSolverKind kind = LinearSolverKind::Direct);
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  Vector solve(const Vector& rhs) const;
  LinearSolverKind kind() const { return kind_; }

 private:
  struct Impl;
  LinearSolverKind kind_;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper; verifies the residual for the direct path.
Vector solve_sparse(const SparseMat& a, const Vector& rhs,
                    LinearSolverKind kind = LinearSolverKind::Direct);

struct FixedPointConfig {
  double omega = 1.0;
  double tol = 1e-8;     // L2 norm of the increment
  int max_iter = 3000;   // cap on linear solves, the initial one included
  LinearSolverKind linear = LinearSolverKind::Direct;
};

struct SolveReport {
  Vector u;        // fixed-point iterate (reduced space)
  Vector u_plus;   // clip of u
  Vector u_minus;  // u - u_plus
  int iterations = 0;
  bool converged = false;
  std::vector<double> increment_history;
};

// Solution of the plain stabilized linear problem; also the initial guess.
Vector cip_initial(const LinearSolver& solver, const Vector& rhs);

// Damped fixed-point iteration for A u^+ + diag(sigma) u^- = F.  The system
// matrix is factored once; the increment is measured in the L2 norm induced
// by the mass matrix `m`.  Runs that exhaust max_iter or overflow to
// non-finite values return converged == false with the last finite iterate.
SolveReport richardson(const SparseMat& a, const Vector& sigma, const Vector& rhs,
                       AdmissibleBox box, const FixedPointConfig& cfg, const SparseMat& m);

// u^- = diag(sigma)^{-1} (F - A u^+), valid once the iteration has converged.
Vector recover_complement(const SparseMat& a, const Vector& sigma, const Vector& rhs,
                          const Vector& u_plus);

// Reference solver for small systems: enumerates all active-set assignments
// of the variational inequality  u in K,  (A u - F, v - u) >= 0  for all
// v in K = [lower, upper]^m  and returns its unique solution.
Vector vi_oracle(const Eigen::MatrixXd& a, const Vector& rhs, AdmissibleBox box);

}  // namespace bpfem
