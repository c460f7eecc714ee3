#pragma once

#include <vector>

#include "pdm/algebra.hpp"
#include "pdm/symbols.hpp"

namespace pdm {

/// A_Phi(m, n) = Phi(m) delta_{mn}. Periodic blocks evaluate Phi at the
/// representative in G_K.
OpMatrix fourier_multiplier(const Symbol& phi, const IndexBlock& block);

/// B_V(m, n) = V_hat(m - n) from the closed-form coefficients.
OpMatrix toeplitz_potential(const Potential& v, const IndexBlock& block);

struct OrderedFactor {
  OpMatrix matrix;
  double order = 0.0;
};

struct Composition {
  OpMatrix matrix;
  double predicted_order = 0.0;
};

/// Ordered product of the factors, predicted order = sum of factor orders.
Composition compose(const std::vector<OrderedFactor>& factors);

/// Structure scans. Tolerances are relative to max |A(m,n)|.
bool hermitian_check(const OpMatrix& a, double tol = 1e-12);
bool diagonal_check(const OpMatrix& a, double tol = 1e-12);
bool toeplitz_check(const OpMatrix& a, double tol = 1e-12);
/// A(-m, -n) == A(m, n) on the whole block; periodic blocks negate mod K.
bool dirichlet_check(const OpMatrix& a, double tol = 1e-12);
/// (x_k - x_{-k}) / 2.
SobolevVec odd_projection(const SobolevVec& x);
bool is_odd(const SobolevVec& x, double tol = 1e-12);

/// S = [[A, B], [C, -A^*]] with B and C Hermitian.
///
/// Real symmetric blocks give the usual real symplectic system; the complex
/// Hermitian generalization is what Fourier-side wave systems produce.
struct SymplecticBlock {
  OpMatrix A, B, C;

  SymplecticBlock(OpMatrix a, OpMatrix b, OpMatrix c);
  const IndexBlock& block() const { return A.block(); }
  Eigen::MatrixXcd assemble() const;
};

/// Canonical J = [[0, I], [-I, 0]] of size 2n.
Eigen::MatrixXcd canonical_J(Eigen::Index n);

/// max |Phi^* J Phi - J|.
double symplectic_defect(const Eigen::MatrixXcd& phi);

struct SymplecticFlowResult {
  Eigen::MatrixXcd propagator;
  double defect = 0.0;
};

/// e^{tS} by dense exponential, with its symplecticity defect.
SymplecticFlowResult symplectic_flow(const SymplecticBlock& s, double t);

}  // namespace pdm
