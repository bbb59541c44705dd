#pragma once

// Parameter model for the two-Wishart sum H = AA^H + BB^H with
// Sigma_A = sigma_a * I and Sigma_B = diag(sigma_b).

#include <string>
#include <vector>

namespace wishartsum {

struct EnsembleParams {
  int n = 0;    // matrix dimension
  int n_a = 0;  // degrees of freedom of A
  int n_b = 0;  // degrees of freedom of B
  double sigma_a = 0.0;
  std::vector<double> sigma_b;  // length n

  int m() const { return n_a + n_b - n; }
  int alpha() const { return n_b - n + 1; }
  int gamma() const { return n_a + n_b - n + 1; }
};

/// Equal-value clusters of sigma_b, ascending; selects between the
/// non-degenerate formulas and the derivative-column limits.
struct DegeneracyProfile {
  struct Cluster {
    double value = 0.0;
    int multiplicity = 0;
  };
  std::vector<Cluster> clusters;

  int total_multiplicity() const {
    int t = 0;
    for (const auto& c : clusters) t += c.multiplicity;
    return t;
  }

  bool is_degenerate() const {
    for (const auto& c : clusters) {
      if (c.multiplicity > 1) return true;
    }
    return false;
  }
};

namespace ensemble {

constexpr double kClusterRelTol = 1e-9;

/// Checks n_A, n_B >= n, positive variances, and sigma_b length; returns
/// the params unchanged (derived m, alpha, gamma live on the struct).
EnsembleParams validate(EnsembleParams params);

/// Groups sigma_b into maximal clusters whose pairwise relative difference
/// is within rel_tol; representative value is the cluster mean.
DegeneracyProfile detect_clusters(const EnsembleParams& params,
                                  double rel_tol = kClusterRelTol);

/// Parses {"n", "n_A", "n_B", "sigma_A", "sigma_B"} from a JSON document.
/// Sigma entries may be numbers or exact rational strings like "5/7".
EnsembleParams params_from_json(const std::string& text);
EnsembleParams params_from_json_file(const std::string& path);

}  // namespace ensemble
}  // namespace wishartsum
