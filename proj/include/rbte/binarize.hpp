#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbte/image.hpp"
#include "rbte/random.hpp"
#include "rbte/thin.hpp"

namespace rbte::binarize {

inline constexpr int kBins = 256;

/// 256 bins over [0,1]; bin k covers [k/256, (k+1)/256), the last bin is
/// closed at 1.
struct Histogram {
  std::array<std::uint64_t, kBins> bins{};
  std::uint64_t total = 0;

  static int bin_of(float v) noexcept;
  static double center(int k) noexcept { return (k + 0.5) / kBins; }
  static double right_edge(int k) noexcept {
    return static_cast<double>(k + 1) / kBins;
  }
};

/// Throws EmptyHistogram if every pixel was dropped.
Histogram histogram(const GrayImage& img, bool ignore_zeros);

enum class Method { Otsu, Yen, Li, Isodata, Mean };

inline constexpr std::array<Method, 5> kAllMethods = {
    Method::Otsu, Method::Yen, Method::Li, Method::Isodata, Method::Mean};

std::string_view method_name(Method m) noexcept;
/// Throws DataError for unknown names.
Method parse_method(std::string_view name);

// Split-based estimators return the right edge of the optimal class-0 bin k*
// (class 0 = bins 0..k*). Ties go to the smallest k*. With a single occupied
// bin they return that bin's right edge.
double otsu(const Histogram& h);
double yen(const Histogram& h);
double li(const Histogram& h);

struct IsodataResult {
  double t = 0.0;
  bool converged = true;
  int iterations = 0;
};

/// Iterates t <- (mean_below + mean_above) / 2 from the global mean, with
/// bin centres as intensities, until |dt| < 1/512 or 100 iterations. The
/// returned t is the last iterate whose update moved less than 1/512, so
/// its fixed-point residual is below that bound.
IsodataResult isodata(const Histogram& h);

/// Count-weighted mean of the bin centres.
double mean_threshold(const Histogram& h);

struct ThresholdDecision {
  Method method = Method::Otsu;
  double t = 0.0;
  double low = 0.0;
  double high = 0.0;
  /// False only when Isodata hit its iteration cap.
  bool converged = true;

  bool operator==(const ThresholdDecision&) const = default;
};

/// low = 0.5 t, high = min(1.5 t, 1).
ThresholdDecision make_decision(Method m, double t, bool converged = true);

/// Runs `m` on `h` and packs the low/high pair.
ThresholdDecision estimate(Method m, const Histogram& h);

/// Uniform over `pool` (non-empty).
Method pick_thresholder(Rng& rng, const std::vector<Method>& pool);

/// True iff strength >= high, or strength >= low and 8-connected through
/// pixels >= low to some pixel >= high.
BinaryMap hysteresis(const thin::ThinField& thin, const ThresholdDecision& d);

/// 8-connected component labels; 0 is background, components are 1..n in
/// raster order of their first pixel.
struct Components {
  std::vector<std::int32_t> labels;
  std::vector<std::size_t> sizes;  // sizes[i] is the size of label i+1
  std::size_t count() const noexcept { return sizes.size(); }
};

Components label_components(const BinaryMap& map);

struct FilterResult {
  BinaryMap map;
  std::size_t components_before = 0;
  std::size_t components_after = 0;
};

/// Clears every 8-connected component with fewer than `min_size` pixels.
FilterResult remove_small_components(const BinaryMap& map,
                                     std::size_t min_size = 10);

}  // namespace rbte::binarize
