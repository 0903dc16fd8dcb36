#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ardlkit/varmodel.hpp"

namespace ardlkit {

enum class IrfMethod { Cholesky, Generalized };
enum class BandMethod { Analytic, MonteCarlo, None };

struct IrfOptions {
  IrfMethod method = IrfMethod::Cholesky;
  std::vector<std::string> ordering;  // Cholesky; empty -> fit column order
  BandMethod bands = BandMethod::Analytic;
  int replications = 1000;  // MonteCarlo
  std::uint64_t seed = 42;  // MonteCarlo
};

/// responses[j](i, h): response of variable i to shock j at horizon h,
/// h = 0..H-1. Shocks are indexed like the fit's variables.
struct IrfPaths {
  IrfMethod method = IrfMethod::Cholesky;
  std::vector<std::string> names;
  std::vector<std::string> ordering;
  int horizon = 0;
  std::vector<Eigen::MatrixXd> responses;
  std::vector<Eigen::MatrixXd> std_errors;
  std::vector<Eigen::MatrixXd> lower;  // response - 2 se
  std::vector<Eigen::MatrixXd> upper;
  std::vector<std::string> warnings;
};

/// MA coefficients Phi_0..Phi_{H-1} from the companion recursion.
std::vector<Eigen::MatrixXd> ma_coefficients(const std::vector<Eigen::MatrixXd>& A, int H);

/// Impact matrix B with Theta_h = Phi_h B. Columns are shocks in fit order.
Eigen::MatrixXd impact_matrix(const Eigen::MatrixXd& sigma, IrfMethod method, const std::vector<int>& order);

IrfPaths impulse_response(const VarFit& fit, int H, const IrfOptions& options = {});

/// shares[i](h, j): fraction of variable i's h+1-step forecast error
/// variance due to Cholesky shock j.
struct FevdTable {
  std::vector<std::string> names;
  std::vector<std::string> ordering;
  int horizon = 0;
  std::vector<Eigen::MatrixXd> shares;
};

FevdTable fevd(const VarFit& fit, int H, const std::vector<std::string>& ordering = {});

/// observed = baseline + sum_j contributions[i].col(j), rows aligned with the
/// VAR estimation sample.
struct HDTable {
  std::vector<std::string> names;
  MonthStamp start;
  Eigen::MatrixXd observed;
  Eigen::MatrixXd baseline;
  std::vector<Eigen::MatrixXd> contributions;  // [variable](t, shock)
  /// Largest absolute gap in the identity before the last shock absorbed it.
  double unattributed = 0.0;
};

/// Shock attribution averages the Cholesky decompositions over every
/// ordering; a shock ordered first carries exactly its generalized impulse.
HDTable historical_decomposition(const VarFit& fit);

}  // namespace ardlkit
