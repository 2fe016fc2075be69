#include "rbte/binarize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rbte/error.hpp"

namespace rbte::binarize {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();
constexpr double kLogEps = 0x1.0p-52;

// Running class-0 statistics for every split k (class 0 = bins 0..k), with
// bin indices as intensities.
struct Cumulative {
  std::array<double, kBins> n{};   // pixel counts
  std::array<double, kBins> s{};   // first moments
  double total = 0.0;
  double moment = 0.0;

  explicit Cumulative(const Histogram& h) {
    double cn = 0.0, cs = 0.0;
    for (int k = 0; k < kBins; ++k) {
      cn += static_cast<double>(h.bins[k]);
      cs += static_cast<double>(h.bins[k]) * k;
      n[k] = cn;
      s[k] = cs;
    }
    total = cn;
    moment = cs;
  }

  bool valid(int k) const noexcept { return n[k] > 0.0 && total - n[k] > 0.0; }
};

int single_bin(const Histogram& h) {
  for (int k = 0; k < kBins; ++k)
    if (h.bins[k] > 0) return k;
  return 0;
}

void require_nonempty(const Histogram& h) {
  if (h.total == 0) throw EmptyHistogram();
}

// Smallest k maximizing crit(k) over valid splits; -1 if none is valid.
template <typename Crit>
int argmax_split(const Cumulative& c, Crit crit) {
  int best = -1;
  double best_v = kNegInf;
  for (int k = 0; k + 1 < kBins; ++k) {
    if (!c.valid(k)) continue;
    const double v = crit(k);
    if (best < 0 || v > best_v) {
      best = k;
      best_v = v;
    }
  }
  return best;
}

}  // namespace

int Histogram::bin_of(float v) noexcept {
  if (!(v > 0.0f)) return 0;
  const int k = static_cast<int>(static_cast<double>(v) * kBins);
  return std::min(k, kBins - 1);
}

Histogram histogram(const GrayImage& img, bool ignore_zeros) {
  Histogram h;
  for (float v : img.pixels()) {
    if (ignore_zeros && v == 0.0f) continue;
    ++h.bins[Histogram::bin_of(v)];
    ++h.total;
  }
  if (h.total == 0) throw EmptyHistogram();
  return h;
}

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::Otsu: return "otsu";
    case Method::Yen: return "yen";
    case Method::Li: return "li";
    case Method::Isodata: return "isodata";
    case Method::Mean: return "mean";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (method_name(m) == name) return m;
  throw DataError("unknown threshold method '" + std::string(name) + "'");
}

double otsu(const Histogram& h) {
  require_nonempty(h);
  const Cumulative c(h);
  const int k = argmax_split(c, [&](int k) {
    const double n0 = c.n[k], n1 = c.total - c.n[k];
    const double mu0 = c.s[k] / n0;
    const double mu1 = (c.moment - c.s[k]) / n1;
    const double w0 = n0 / c.total, w1 = n1 / c.total;
    return w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
  });
  return Histogram::right_edge(k < 0 ? single_bin(h) : k);
}

double yen(const Histogram& h) {
  require_nonempty(h);
  const Cumulative c(h);
  std::array<double, kBins> sq_below{}, sq_above{};
  const double total = static_cast<double>(h.total);
  double acc = 0.0;
  for (int k = 0; k < kBins; ++k) {
    const double p = h.bins[k] / total;
    acc += p * p;
    sq_below[k] = acc;
  }
  acc = 0.0;
  for (int k = kBins - 1; k >= 0; --k) {
    sq_above[k] = acc;  // sum over bins > k
    const double p = h.bins[k] / total;
    acc += p * p;
  }
  const int k = argmax_split(c, [&](int k) {
    const double p0 = c.n[k] / c.total;
    const double p1 = (c.total - c.n[k]) / c.total;
    return -std::log(sq_below[k] * sq_above[k]) + 2.0 * std::log(p0 * p1);
  });
  return Histogram::right_edge(k < 0 ? single_bin(h) : k);
}

double li(const Histogram& h) {
  require_nonempty(h);
  const Cumulative c(h);
  // Minimum cross-entropy == maximum of the negated criterion.
  const int k = argmax_split(c, [&](int k) {
    const double m0 = c.s[k], m1 = c.moment - c.s[k];
    const double mu0 = m0 / c.n[k];
    const double mu1 = m1 / (c.total - c.n[k]);
    return m0 * std::log(mu0 + kLogEps) + m1 * std::log(mu1 + kLogEps);
  });
  return Histogram::right_edge(k < 0 ? single_bin(h) : k);
}

IsodataResult isodata(const Histogram& h) {
  require_nonempty(h);
  auto update = [&](double t) {
    double nb = 0, sb = 0, na = 0, sa = 0;
    for (int k = 0; k < kBins; ++k) {
      const double n = static_cast<double>(h.bins[k]);
      if (n == 0) continue;
      const double c = Histogram::center(k);
      if (c <= t) {
        nb += n;
        sb += n * c;
      } else {
        na += n;
        sa += n * c;
      }
    }
    const double mb = nb > 0 ? sb / nb : sa / na;
    const double ma = na > 0 ? sa / na : mb;
    return 0.5 * (mb + ma);
  };

  IsodataResult r;
  double t = mean_threshold(h);
  for (r.iterations = 1; r.iterations <= 100; ++r.iterations) {
    const double next = update(t);
    if (std::abs(next - t) < 1.0 / 512.0) {
      r.t = t;
      r.converged = true;
      return r;
    }
    t = next;
  }
  r.iterations = 100;
  r.t = t;
  r.converged = false;
  return r;
}

double mean_threshold(const Histogram& h) {
  require_nonempty(h);
  double s = 0.0;
  for (int k = 0; k < kBins; ++k)
    s += static_cast<double>(h.bins[k]) * Histogram::center(k);
  return s / static_cast<double>(h.total);
}

ThresholdDecision make_decision(Method m, double t, bool converged) {
  ThresholdDecision d;
  d.method = m;
  d.t = std::clamp(t, 0.0, 1.0);
  d.low = 0.5 * d.t;
  d.high = std::min(1.5 * d.t, 1.0);
  d.converged = converged;
  return d;
}

ThresholdDecision estimate(Method m, const Histogram& h) {
  switch (m) {
    case Method::Otsu: return make_decision(m, otsu(h));
    case Method::Yen: return make_decision(m, yen(h));
    case Method::Li: return make_decision(m, li(h));
    case Method::Isodata: {
      const auto r = isodata(h);
      return make_decision(m, r.t, r.converged);
    }
    case Method::Mean: return make_decision(m, mean_threshold(h));
  }
  throw DataError("unknown threshold method");
}

Method pick_thresholder(Rng& rng, const std::vector<Method>& pool) {
  if (pool.empty()) throw DataError("estimator pool is empty");
  return pool[static_cast<std::size_t>(rng.uniform_index(pool.size()))];
}

BinaryMap hysteresis(const thin::ThinField& thin, const ThresholdDecision& d) {
  const auto& s = thin.strength;
  const int w = s.width(), h = s.height();
  const auto px = s.pixels();
  // Compared in double so no pixel moves across a threshold by rounding.
  auto weak = [&](std::size_t i) { return static_cast<double>(px[i]) >= d.low; };

  BinaryMap out(w, h, false);
  auto bits = out.pixels();
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < px.size(); ++i)
    if (static_cast<double>(px[i]) >= d.high) {
      bits[i] = 1;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
        if (!bits[j] && weak(j)) {
          bits[j] = 1;
          stack.push_back(j);
        }
      }
  }
  return out;
}

Components label_components(const BinaryMap& map) {
  const int w = map.width(), h = map.height();
  const auto px = map.pixels();
  std::vector<std::int32_t> provisional(px.size(), 0);
  std::vector<std::int32_t> parent{0};

  auto find = [&](std::int32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  auto join = [&](std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };

  // First pass: provisional labels from the already visited neighbours
  // (W, NW, N, NE).
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (!px[i]) continue;
      std::int32_t label = 0;
      const int nbr[4][2] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
      for (const auto& d : nbr) {
        const int nx = x + d[0], ny = y + d[1];
        if (nx < 0 || ny < 0 || nx >= w) continue;
        const std::int32_t l = provisional[static_cast<std::size_t>(ny) * w + nx];
        if (l == 0) continue;
        if (label == 0)
          label = l;
        else
          join(label, l);
      }
      if (label == 0) {
        label = static_cast<std::int32_t>(parent.size());
        parent.push_back(label);
      }
      provisional[i] = label;
    }

  // Second pass: dense final labels in raster order of first appearance.
  Components c;
  c.labels.assign(px.size(), 0);
  std::vector<std::int32_t> final_of(parent.size(), 0);
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (provisional[i] == 0) continue;
    const std::int32_t root = find(provisional[i]);
    if (final_of[root] == 0) {
      c.sizes.push_back(0);
      final_of[root] = static_cast<std::int32_t>(c.sizes.size());
    }
    c.labels[i] = final_of[root];
    ++c.sizes[final_of[root] - 1];
  }
  return c;
}

FilterResult remove_small_components(const BinaryMap& map, std::size_t min_size) {
  const Components c = label_components(map);
  FilterResult r;
  r.map = map;
  r.components_before = c.count();
  auto bits = r.map.pixels();
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (c.labels[i] != 0 && c.sizes[c.labels[i] - 1] < min_size) bits[i] = 0;
  r.components_after = static_cast<std::size_t>(std::count_if(
      c.sizes.begin(), c.sizes.end(), [&](std::size_t n) { return n >= min_size; }));
  return r;
}

}  // namespace rbte::binarize
