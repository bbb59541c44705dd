#include "wishartsum/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wishartsum::ensemble {

namespace {

double relative_difference(double a, double b) {
  return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

double sigma_from_json(const nlohmann::json& v, const char* field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) {
        size_t used = 0;
        double x = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return x;
      }
      size_t used_n = 0, used_d = 0;
      const std::string num = s.substr(0, slash);
      const std::string den = s.substr(slash + 1);
      long long p = std::stoll(num, &used_n);
      long long q = std::stoll(den, &used_d);
      if (used_n != num.size() || used_d != den.size() || q == 0) {
        throw std::invalid_argument(s);
      }
      return static_cast<double>(p) / static_cast<double>(q);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("params: cannot parse ") + field +
                                  " value \"" + s + "\" (expected number or p/q)");
    }
  }
  throw std::invalid_argument(std::string("params: field ") + field +
                              " must be a number or rational string");
}

}  // namespace

EnsembleParams validate(EnsembleParams params) {
  if (params.n < 1) {
    throw std::invalid_argument("params: matrix dimension n must be >= 1");
  }
  if (params.n_a < params.n || params.n_b < params.n) {
    std::ostringstream os;
    os << "params: degrees of freedom must satisfy n_A, n_B >= n (n=" << params.n
       << ", n_A=" << params.n_a << ", n_B=" << params.n_b << ")";
    throw std::invalid_argument(os.str());
  }
  if (!(params.sigma_a > 0.0)) {
    throw std::domain_error("params: sigma_A must be positive");
  }
  if (params.sigma_b.size() != static_cast<size_t>(params.n)) {
    std::ostringstream os;
    os << "params: sigma_B must have exactly n=" << params.n << " entries, got "
       << params.sigma_b.size();
    throw std::invalid_argument(os.str());
  }
  for (double s : params.sigma_b) {
    if (!(s > 0.0)) throw std::domain_error("params: all sigma_B entries must be positive");
  }
  return params;
}

DegeneracyProfile detect_clusters(const EnsembleParams& params, double rel_tol) {
  std::vector<double> sorted = params.sigma_b;
  std::sort(sorted.begin(), sorted.end());

  DegeneracyProfile profile;
  size_t start = 0;
  while (start < sorted.size()) {
    size_t end = start + 1;
    // pairwise diffs within a sorted group are bounded by first-vs-last
    while (end < sorted.size() && relative_difference(sorted[start], sorted[end]) <= rel_tol) {
      ++end;
    }
    double mean = std::accumulate(sorted.begin() + start, sorted.begin() + end, 0.0) /
                  static_cast<double>(end - start);
    profile.clusters.push_back({mean, static_cast<int>(end - start)});
    start = end;
  }

  // merge neighbors whose representatives ended up within tolerance
  bool merged = true;
  while (merged && profile.clusters.size() > 1) {
    merged = false;
    for (size_t i = 0; i + 1 < profile.clusters.size(); ++i) {
      auto& a = profile.clusters[i];
      auto& b = profile.clusters[i + 1];
      if (relative_difference(a.value, b.value) <= rel_tol) {
        double w = a.multiplicity + b.multiplicity;
        a.value = (a.value * a.multiplicity + b.value * b.multiplicity) / w;
        a.multiplicity += b.multiplicity;
        profile.clusters.erase(profile.clusters.begin() + i + 1);
        merged = true;
        break;
      }
    }
  }
  return profile;
}

EnsembleParams params_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("params: invalid JSON: ") + e.what());
  }
  for (const char* field : {"n", "n_A", "n_B", "sigma_A", "sigma_B"}) {
    if (!doc.contains(field)) {
      throw std::invalid_argument(std::string("params: missing field ") + field);
    }
  }
  EnsembleParams p;
  if (!doc["n"].is_number_integer() || !doc["n_A"].is_number_integer() ||
      !doc["n_B"].is_number_integer()) {
    throw std::invalid_argument("params: n, n_A, n_B must be integers");
  }
  p.n = doc["n"].get<int>();
  p.n_a = doc["n_A"].get<int>();
  p.n_b = doc["n_B"].get<int>();
  p.sigma_a = sigma_from_json(doc["sigma_A"], "sigma_A");
  if (!doc["sigma_B"].is_array()) {
    throw std::invalid_argument("params: sigma_B must be an array");
  }
  for (const auto& v : doc["sigma_B"]) {
    p.sigma_b.push_back(sigma_from_json(v, "sigma_B"));
  }
  return validate(p);
}

EnsembleParams params_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("params: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return params_from_json(buf.str());
}

}  // namespace wishartsum::ensemble
