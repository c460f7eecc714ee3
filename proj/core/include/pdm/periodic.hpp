#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "pdm/fit.hpp"
#include "pdm/order.hpp"

namespace pdm {

/// Exhaustive check of the bracket-norm inequalities on Z_K^d:
///   [a + b] <= [a] + [b]
///   1 + [a] + [c] <= 2 (1 + [a] + [b]) (1 + [c - b])
struct BracketScan {
  int K = 0;
  int dim = 1;
  std::size_t triangle_checked = 0;
  std::size_t triangle_violations = 0;
  std::size_t peetre_checked = 0;
  std::size_t peetre_violations = 0;
  bool ok() const { return triangle_violations == 0 && peetre_violations == 0; }
};

BracketScan scan_bracket_inequalities(int K, int dim);

/// K -> A^K for even K, evaluated on K_list.
struct PeriodicFamily {
  std::string label;
  std::function<OpMatrix(int)> generator;
  std::vector<int> K_list;

  /// Generates A^K and checks that it lives on Z_K^d.
  OpMatrix at(int K) const;
  std::vector<OpMatrix> members() const;
};

/// sup over K in K_list of the bracket-norm seminorm of A^K.
double dnorm(const PeriodicFamily& family, const SeminormSpec& spec);

PeriodicFamily family_product(const PeriodicFamily& a, const PeriodicFamily& b);
PeriodicFamily family_commutator(const PeriodicFamily& a, const PeriodicFamily& b);

OrderEstimate family_order(const PeriodicFamily& family, const OrderOptions& options);

/// Copies A^K onto G_K x G_K inside a truncated block of the given radius
/// (default K/2, the smallest box containing G_K); zero elsewhere.
OpMatrix embed(const OpMatrix& ak, int radius = -1);

/// sup_x ||E x||_{s_out} / ||x||_{s_in} with weights base_i^s, from the largest
/// singular value. Indices with base_i <= 0 are dropped.
double weighted_operator_norm(const Eigen::MatrixXcd& e, const Eigen::VectorXd& base, double s_out, double s_in);

struct ApproxRow {
  std::string probe;
  int K = 0;
  double s = 0.0;
  double s_prime = 0.0;
  /// sup over all x of ||(A - embed(A^K)) x||_{s'} / ||x||_s.
  double error = 0.0;
  /// The same ratio maximized over the seeded rough-data samples only.
  double data_error = 0.0;
};

struct ApproxTable {
  std::vector<ApproxRow> rows;
  /// Decay rate in K: minus the log-log slope of error against K.
  LineFit fit;
  double rate() const { return -fit.slope; }
};

/// `limit` must be truncated with radius >= K/2 for every K of the family.
ApproxTable approx_error(const std::string& probe, const OpMatrix& limit, const PeriodicFamily& family, double s,
                         double s_prime, std::uint64_t seed, int samples = 8);

/// CSV columns: probe,K,s,s_prime,error,fitted_rate
void write_approx_csv(const ApproxTable& table, std::ostream& os, bool header = true);

}  // namespace pdm
