#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

namespace oracle {

namespace fs = std::filesystem;
using rbte::binarize::Histogram;
using rbte::binarize::kBins;

std::vector<double> gaussian(double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w;
  double sum = 0;
  for (int k = -r; k <= r; ++k) {
    w.push_back(std::exp(-(k * k) / (2 * sigma * sigma)));
    sum += w.back();
  }
  for (auto& v : w) v /= sum;
  return w;
}

void gradient_direct(const rbte::GrayImage& img, double sigma, std::vector<double>& gx,
                     std::vector<double>& gy) {
  const int w = img.width(), h = img.height();
  const auto g = gaussian(sigma);
  const int r = static_cast<int>(g.size() / 2);
  auto cl = [](int v, int n) { return std::clamp(v, 0, n - 1); };
  std::vector<double> b(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int j = -r; j <= r; ++j)
        for (int i = -r; i <= r; ++i) acc += g[j + r] * g[i + r] * img(cl(x + i, w), cl(y + j, h));
      b[static_cast<std::size_t>(y) * w + x] = acc;
    }
  auto B = [&](int x, int y) { return b[static_cast<std::size_t>(cl(y, h)) * w + cl(x, w)]; };
  const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  gx.assign(b.size(), 0);
  gy.assign(b.size(), 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double sx = 0, sy = 0;
      for (int j = -1; j <= 1; ++j)
        for (int i = -1; i <= 1; ++i) {
          sx += kx[j + 1][i + 1] * B(x + i, y + j);
          sy += kx[i + 1][j + 1] * B(x + i, y + j);
        }
      gx[static_cast<std::size_t>(y) * w + x] = sx;
      gy[static_cast<std::size_t>(y) * w + x] = sy;
    }
}

double angle_diff(double a, double b) {
  const double pi = std::numbers::pi;
  double d = std::fmod(std::abs(a - b), pi);
  return std::min(d, pi - d);
}

std::vector<float> nms(const rbte::EdgeField& f) {
  const int w = f.width(), h = f.height();
  std::vector<float> out(static_cast<std::size_t>(w) * h, 0.0f);
  auto S = [&](int x, int y) {
    return f.strength(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double theta = f.orientation[static_cast<std::size_t>(y) * w + x];
      int bx = 0, by = 0;
      double best = std::numeric_limits<double>::infinity();
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const double d = angle_diff(std::atan2(dy, dx), theta);
          if (d < best - 1e-12) {
            best = d;
            bx = dx;
            by = dy;
          }
        }
      const float v = S(x, y);
      if (v > S(x + bx, y + by) && v > S(x - bx, y - by))
        out[static_cast<std::size_t>(y) * w + x] = v;
    }
  return out;
}

rbte::BinaryMap hysteresis(const rbte::GrayImage& s, double low, double high) {
  const int w = s.width(), h = s.height();
  rbte::BinaryMap out(w, h, false);
  std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
  for (int sy = 0; sy < h; ++sy)
    for (int sx = 0; sx < w; ++sx) {
      if (!(s(sx, sy) >= high) || seen[static_cast<std::size_t>(sy) * w + sx]) continue;
      std::queue<std::pair<int, int>> q;
      q.push({sx, sy});
      seen[static_cast<std::size_t>(sy) * w + sx] = 1;
      while (!q.empty()) {
        auto [x, y] = q.front();
        q.pop();
        out.set(x, y, true);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            auto& m = seen[static_cast<std::size_t>(ny) * w + nx];
            if (!m && s(nx, ny) >= low) {
              m = 1;
              q.push({nx, ny});
            }
          }
      }
    }
  return out;
}

std::vector<std::size_t> component_size_per_pixel(const rbte::BinaryMap& m) {
  const int w = m.width(), h = m.height();
  std::vector<std::size_t> size(static_cast<std::size_t>(w) * h, 0);
  std::vector<char> seen(size.size(), 0);
  for (int sy = 0; sy < h; ++sy)
    for (int sx = 0; sx < w; ++sx) {
      if (!m(sx, sy) || seen[static_cast<std::size_t>(sy) * w + sx]) continue;
      std::vector<std::size_t> members;
      std::queue<std::pair<int, int>> q;
      q.push({sx, sy});
      seen[static_cast<std::size_t>(sy) * w + sx] = 1;
      while (!q.empty()) {
        auto [x, y] = q.front();
        q.pop();
        members.push_back(static_cast<std::size_t>(y) * w + x);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h || !m(nx, ny)) continue;
            auto& v = seen[static_cast<std::size_t>(ny) * w + nx];
            if (!v) {
              v = 1;
              q.push({nx, ny});
            }
          }
      }
      for (auto i : members) size[i] = members.size();
    }
  return size;
}

rbte::BinaryMap remove_small(const rbte::BinaryMap& m, std::size_t min_size) {
  const auto sz = component_size_per_pixel(m);
  rbte::BinaryMap out(m.width(), m.height(), false);
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      out.set(x, y, m(x, y) && sz[static_cast<std::size_t>(y) * m.width() + x] >= min_size);
  return out;
}

namespace {

struct Classes {
  double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
};

Classes split(const Histogram& h, int k) {
  Classes c;
  for (int i = 0; i < kBins; ++i) {
    const double n = static_cast<double>(h.bins[i]);
    if (i <= k) {
      c.n0 += n;
      c.s0 += n * i;
    } else {
      c.n1 += n;
      c.s1 += n * i;
    }
  }
  return c;
}

int only_bin(const Histogram& h) {
  for (int i = 0; i < kBins; ++i)
    if (h.bins[i]) return i;
  return 0;
}

template <typename F>
int scan(const Histogram& h, F f, bool maximize) {
  int best = -1;
  double bv = 0;
  for (int k = 0; k < kBins - 1; ++k) {
    const Classes c = split(h, k);
    if (c.n0 == 0 || c.n1 == 0) continue;
    const double v = f(c, k);
    if (best < 0 || (maximize ? v > bv : v < bv)) {
      best = k;
      bv = v;
    }
  }
  return best < 0 ? only_bin(h) : best;
}

}  // namespace

int otsu_bin(const Histogram& h) {
  // Between-class variance written as (s0 n1 - s1 n0)^2 / (n0 n1 N^2),
  // algebraically equal to w0 w1 (mu0 - mu1)^2.
  return scan(
      h,
      [](const Classes& c, int) {
        const double N = c.n0 + c.n1;
        const double d = c.s0 * c.n1 - c.s1 * c.n0;
        return d * d / (c.n0 * c.n1 * N * N);
      },
      true);
}

double yen_value(const Histogram& h, int k) {
  double N = 0;
  for (auto b : h.bins) N += static_cast<double>(b);
  double p0 = 0, p1 = 0, q0 = 0, q1 = 0;
  for (int i = 0; i < kBins; ++i) {
    const double p = h.bins[i] / N;
    (i <= k ? p0 : p1) += p;
  }
  for (int i = 0; i < kBins; ++i) {
    const double p = h.bins[i] / N;
    if (i <= k)
      q0 += (p / p0) * (p / p0);
    else
      q1 += (p / p1) * (p / p1);
  }
  // Yen's total correlation of the two normalized class distributions.
  return -std::log(q0) - std::log(q1);
}

int yen_bin(const Histogram& h) {
  return scan(h, [&](const Classes&, int k) { return yen_value(h, k); }, true);
}

int li_bin(const Histogram& h) {
  // Cross entropy sum_i i h_i log(i / mu(class of i)), minimized.
  return scan(
      h,
      [&](const Classes& c, int k) {
        const double eps = 0x1.0p-52;
        const double mu0 = c.s0 / c.n0, mu1 = c.s1 / c.n1;
        double e = 0;
        for (int i = 1; i < kBins; ++i) {
          if (!h.bins[i]) continue;
          const double mu = i <= k ? mu0 : mu1;
          e += i * static_cast<double>(h.bins[i]) * (std::log(double(i)) - std::log(mu + eps));
        }
        return e;
      },
      false);
}

double isodata_residual(const Histogram& h, double t) {
  double nb = 0, sb = 0, na = 0, sa = 0;
  for (int k = 0; k < kBins; ++k) {
    const double c = (k + 0.5) / kBins, n = static_cast<double>(h.bins[k]);
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
  return std::abs(t - 0.5 * (mb + ma));
}

double bilinear_resize_pixel(const std::vector<float>& src, int sw, int sh, int dw, int dh,
                             int x, int y) {
  auto coord = [](int d, int s, int t) {
    return std::clamp((d + 0.5) * s / t - 0.5, 0.0, double(s - 1));
  };
  const double sx = coord(x, sw, dw), sy = coord(y, sh, dh);
  const int x0 = int(std::floor(sx)), y0 = int(std::floor(sy));
  const int x1 = std::min(x0 + 1, sw - 1), y1 = std::min(y0 + 1, sh - 1);
  const double fx = sx - x0, fy = sy - y0;
  auto S = [&](int xx, int yy) { return double(src[static_cast<std::size_t>(yy) * sw + xx]); };
  return (1 - fy) * ((1 - fx) * S(x0, y0) + fx * S(x1, y0)) +
         fy * ((1 - fx) * S(x0, y1) + fx * S(x1, y1));
}

Histogram random_histogram(std::mt19937_64& gen) {
  Histogram h;
  std::uniform_int_distribution<int> nbumps(1, 4), center(0, kBins - 1), count(0, 3000);
  std::uniform_real_distribution<double> width(1.0, 30.0), u(0, 1);
  const int nb = nbumps(gen);
  for (int b = 0; b < nb; ++b) {
    const int c = center(gen);
    const double wd = width(gen);
    const double amp = count(gen);
    for (int k = 0; k < kBins; ++k)
      h.bins[k] += static_cast<std::uint64_t>(amp * std::exp(-0.5 * (k - c) * (k - c) / (wd * wd)));
  }
  // sparse spikes and holes
  for (int k = 0; k < kBins; ++k) {
    const double r = u(gen);
    if (r < 0.05) h.bins[k] += count(gen) / 10;
    else if (r < 0.15) h.bins[k] = 0;
  }
  h.total = 0;
  for (auto b : h.bins) h.total += b;
  if (h.total == 0) {
    h.bins[center(gen)] = 1;
    h.total = 1;
  }
  return h;
}

rbte::EdgeField random_field(std::mt19937_64& gen, int w, int h) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::uniform_real_distribution<double> a(0.0, std::numbers::pi);
  std::vector<float> s(static_cast<std::size_t>(w) * h), o(s.size());
  for (auto& v : s) v = u(gen);
  for (auto& v : o) v = rbte::fold_angle(a(gen));
  return rbte::EdgeField(rbte::GrayImage(w, h, std::move(s)), std::move(o));
}

fs::path temp_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("rbte_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::uint64_t hash_tree(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::uint64_t hsh = 0xCBF29CE484222325ull;
  auto mix = [&](const std::string& bytes) {
    for (unsigned char c : bytes) {
      hsh ^= c;
      hsh *= 0x100000001B3ull;
    }
  };
  for (const auto& f : files) {
    mix(fs::relative(f, root).generic_string());
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    mix(ss.str());
  }
  return hsh;
}

}  // namespace oracle
