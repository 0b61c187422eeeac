#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biharm/biharmonic.hpp"
#include "biharm/chart.hpp"

namespace biharm {

/// Closed-form expectations for a catalog surface. Empty fields mean the
/// quantity has no closed form (e.g. non-constant mean curvature).
struct CatalogOracle {
  std::optional<double> mean_curvature;
  std::optional<double> second_form_norm2;  // |A|^2
  std::optional<std::vector<double>> principal_curvatures;  // ascending
  std::optional<double> area;
  std::optional<Classification> classification;
  std::optional<Eigen::VectorXd> hemisphere_witness;
};

struct CatalogEntry {
  Chart chart;
  CatalogOracle oracle;
};

/// Volume of the unit round sphere S^k.
double unit_sphere_volume(int k);

/// Slice of S^{n+1} at height sqrt(1 - a^2): a round S^n(a), oriented so H >= 0.
CatalogEntry make_small_hypersphere(int n, double a);
/// S^k(r) x S^{n-k}(sqrt(1 - r^2)) in S^{n+1}; normal (-s p, r q), so the
/// S^k directions carry curvature s/r and the others -r/s.
CatalogEntry make_clifford(int n, int k, double r);
/// Totally geodesic S^n in S^{n+1}.
CatalogEntry make_equator(int n);
/// Normal graph cos(eps h)(y, 0) + sin(eps h) e_{n+2} over the equator, with
/// mode 1: h = (n+1) y_{n+1}^2 - 1, mode 2: h = y_1, mode 3: h = y_1 y_2.
/// Oriented like the equator (N close to e_{n+2}).
Chart make_perturbed_equator(int n, double eps, int mode);

/// Parses descriptors such as "smallsphere:n=2,a=0.70710678",
/// "clifford:n=3,k=1,r=0.70710678", "equator:n=2", "perturbed:n=2,eps=0.1,mode=1".
/// Every kind also accepts flip=1 to reverse the normal. Throws
/// InvalidInputError naming the offending token.
CatalogEntry parse_descriptor(const std::string& descriptor);

}  // namespace biharm
