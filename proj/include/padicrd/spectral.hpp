#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "padicrd/network.hpp"

namespace padicrd {

enum class SpectrumSource { graph, L_infinity_predicted, L_M_predicted, L_M_computed, matrix };

std::string to_string(SpectrumSource s);

struct EigenvalueGroup {
  double value;
  int multiplicity;
};

struct SpectrumReport {
  SpectrumSource source = SpectrumSource::matrix;
  std::vector<double> eigenvalues;  // ascending, repeated by multiplicity
  Eigen::MatrixXd eigenvectors;     // orthonormal columns; empty for predicted spectra
  double residual_max = 0.0;        // max_k ||A v_k - lambda_k v_k||_inf
  std::vector<std::string> notes;

  // Distinct values (merged within tol) with their multiplicities.
  std::vector<EigenvalueGroup> grouped(double tol = 1e-9) const;
};

// Symmetric eigensolve: ascending eigenvalues, each eigenvector normalised so
// its first non-negligible component is positive. Throws on asymmetric input.
SpectrumReport eig_symmetric(const Eigen::MatrixXd& m);

// sigma(L) \ {0}: nonzero graph-Laplacian eigenvalues and -gamma_I per vertex.
// The -gamma_I entries carry infinite multiplicity in L^2 (noted in the report).
SpectrumReport spectrum_L_infinity(const NetworkEmbedding& embedding);

// sigma(L_N) together with -gamma_I repeated p^{M-N} - 1 times per vertex.
SpectrumReport spectrum_L_M_predicted(const NetworkEmbedding& embedding, unsigned level_m);

// eig_symmetric(build_full_L_M) tagged as a computed L_M spectrum.
SpectrumReport spectrum_L_M_computed(const NetworkEmbedding& embedding, unsigned level_m);

// Largest |a_i - b_i| between two sorted spectra; +inf when the sizes differ.
double spectrum_distance(const std::vector<double>& a, const std::vector<double>& b);

/**
 * Kozyrev wavelet p^{R/2} chi_p(p^{-R-1} j x) Omega(p^R |x - a|_p) sampled at
 * the centres of a level-M grid. R = N gives the wavelets supported on a
 * whole vertex ball; R > N gives the finer ones living in sub-balls.
 */
struct WaveletVector {
  int vertex;
  std::uint32_t j;
  unsigned ball_level;  // R
  PAdicCode center;     // level-R ball address
  Eigen::VectorXcd coefficients;
};

WaveletVector kozyrev_wavelet(const LevelGrid& grid, int vertex, std::uint32_t j);
WaveletVector kozyrev_wavelet(const LevelGrid& grid, const PAdicCode& center, std::uint32_t j);

// All wavelets with ball level N <= R < M; n (p^{M-N} - 1) vectors in total.
std::vector<WaveletVector> wavelet_family(const LevelGrid& grid);

}  // namespace padicrd
