#pragma once

// Monte Carlo verification engine: draws H = AA^H + BB^H, extracts spectra,
// accumulates mergeable histograms, and scores them against analytic curves.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wishartsum/analytic.hpp"
#include "wishartsum/ensemble.hpp"
#include "wishartsum/rng.hpp"

namespace wishartsum {

struct SampleConfig {
  std::uint64_t num_samples = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  std::vector<double> bin_edges;  // empty selects auto-binning
  /// Substream offset: sample i draws from stream (seed, first_sample + i),
  /// so split runs merge into exactly the single-run histogram.
  std::uint64_t first_sample = 0;
};

struct SpectrumHistogram {
  std::vector<double> edges;           // strictly increasing, size bins+1
  std::vector<std::uint64_t> counts;   // per bin
  std::uint64_t total_eigenvalues = 0; // includes out-of-range values
  double sum_lambda = 0.0;
  double sum_lambda_sq = 0.0;
};

struct ComparisonBin {
  double left = 0.0;
  double right = 0.0;
  double observed_density = 0.0;
  double expected_density = 0.0;
  double residual = 0.0;  // Poisson-standardized
};

struct ComparisonReport {
  std::vector<ComparisonBin> bins;
  double max_abs_residual = 0.0;  // over bins with expected count >= 5
  double chi_square = 0.0;
  int dof = 0;  // bins with expected count >= 5
  double p_value = 1.0;
};

namespace sampler {

/// One draw of the spectrum of H, ascending. A is n x n_A with entry
/// variance sigma_A (real and imaginary parts sigma_A/2 each); row j of the
/// n x n_B matrix B has entry variance sigma_Bj.
std::vector<double> sample_spectrum(const EnsembleParams& params, rng::GaussianStream& stream);

/// Freedman-Diaconis width from a pilot of up to 1e4 samples, clipped to
/// [50, 400] bins over [0, lambda_max(params)].
std::vector<double> auto_bin_edges(const EnsembleParams& params, const SampleConfig& config);

/// Samples with per-sample substreams; worker w handles indices congruent
/// to w mod workers, so the histogram is identical for any worker count.
SpectrumHistogram run(const EnsembleParams& params, const SampleConfig& config);

/// Bin-wise and moment-wise sum; edges must match exactly.
SpectrumHistogram merge(const SpectrumHistogram& a, const SpectrumHistogram& b);

/// Scores a histogram against an analytic curve: per-bin expected density
/// (curve integrated over the bin), Poisson residuals, chi-square over bins
/// with expected count >= 5.
ComparisonReport compare(const SpectrumHistogram& hist, const DensityCurve& curve);

/// CSV bin_left,bin_right,count,density with 17 significant digits.
void write_csv(const SpectrumHistogram& hist, std::ostream& os);

std::string report_to_json(const ComparisonReport& report);

}  // namespace sampler
}  // namespace wishartsum
