#pragma once

#include "iscsc/array_channel.hpp"
#include "iscsc/state.hpp"
#include "iscsc/types.hpp"

namespace iscsc {

/// Observation FIM blocks over xi = (theta, Re beta, Im beta).
struct FisherBlocks {
  double j_tt = 0.0;
  Eigen::RowVector2d j_tb = Eigen::RowVector2d::Zero();
  Mat2 j_bb = Mat2::Zero();
};

/// Hermitian matrices A with J = Tr(A R_x) for every FIM entry, so the blocks
/// are affine in the transmit covariance.
struct FisherCoefficients {
  CMat tt;
  CMat tb_re;
  CMat tb_im;
  CMat bb;  // J_bb = Tr(bb R_x) * I_2
};

struct PcrbReport {
  double pcrb_theta = 0.0;
  double prior_info = 0.0;  // (M_{t|t-1}^{-1})[1,1]
};

struct FisherSettings {
  int n_samples = 64;     // T
  double sigma_r2 = 1e-6; // radar noise power
};

/// With B = a a^H and Bdot = da a^H + a da^H:
///   J_tt = (2T|beta|^2/sigma_r^2) Tr(Bdot R_x Bdot^H)
///   J_tb = (2T/sigma_r^2) Re{beta^* Tr(B R_x Bdot^H) [1 j]}
///   J_bb = (2T/sigma_r^2) Tr(B R_x B^H) I_2
/// Throws DomainError for a non-PSD R_x (min eigenvalue < -1e-8).
FisherBlocks fim_observation(const VehicleState& est, const CMat& r_x, const ArrayGeometry& geom,
                             const FisherSettings& settings);

FisherCoefficients fisher_coefficients(const VehicleState& est, const ArrayGeometry& geom,
                                       const FisherSettings& settings);

FisherBlocks evaluate(const FisherCoefficients& coeffs, const CMat& r_x);

/// (M_pred^{-1})[1,1]. Throws NumericalError when cond(M_pred) > 1e12.
double prior_information(const Mat4& m_pred);

/// 3x3 posterior FIM: observation blocks plus prior information on theta.
Mat3 fim_posterior(const FisherBlocks& obs, const Mat4& m_pred);

/// Schur-complement closed form of (J_post^{-1})[1,1]. Throws NumericalError
/// when the complement is not positive (angle not identifiable).
double pcrb_theta(const Mat3& j_post);

PcrbReport pcrb_report(const FisherBlocks& obs, const Mat4& m_pred);

}  // namespace iscsc
