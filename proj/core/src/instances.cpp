#include "crossover/instances.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "crossover/random.hpp"

namespace crossover {

namespace {

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t k = items.size(); k > 1; --k) {
    const auto pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(k) - 1));
    std::swap(items[k - 1], items[pick]);
  }
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

std::vector<Point> random_points(int count, Rng& rng) {
  std::vector<Point> points(count);
  for (Point& p : points) {
    p.x = rng.uniform();
    p.y = rng.uniform();
  }
  return points;
}

Vec random_weights(int count, Rng& rng) {
  Vec w(count);
  for (int i = 0; i < count; ++i) w[i] = rng.uniform(0.1, 1.0);
  return w / w.sum();
}

}  // namespace

McfProblem gen_mcf(const McfSpec& spec) {
  const long n = spec.nodes;
  if (n < 2) throw std::invalid_argument("gen_mcf: need at least 2 nodes");
  if (spec.arcs < n - 1) throw std::invalid_argument("gen_mcf: need at least nodes - 1 arcs to connect the graph");
  if (spec.arcs > n * (n - 1)) throw std::invalid_argument("gen_mcf: more arcs than ordered node pairs");
  if (spec.min_cost > spec.max_cost || spec.min_capacity > spec.max_capacity || spec.min_capacity < 0) {
    throw std::invalid_argument("gen_mcf: empty cost or capacity range");
  }
  Rng rng(spec.seed);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  shuffle(perm, rng);

  std::set<std::pair<int, int>> used;
  std::vector<Arc> arcs;
  std::vector<char> on_tree;
  for (int k = 1; k < n; ++k) {
    const int a = perm[k];
    const int b = perm[rng.uniform_int(0, k - 1)];
    const Arc arc = rng.uniform() < 0.5 ? Arc{a, b} : Arc{b, a};
    arcs.push_back(arc);
    on_tree.push_back(1);
    used.insert({arc.tail, arc.head});
  }
  const long extra = spec.arcs - (n - 1);
  if (2 * (extra + n) > n * (n - 1)) {
    std::vector<Arc> free_pairs;
    for (int t = 0; t < n; ++t) {
      for (int h = 0; h < n; ++h) {
        if (t != h && !used.count({t, h})) free_pairs.push_back({t, h});
      }
    }
    shuffle(free_pairs, rng);
    for (long k = 0; k < extra; ++k) {
      arcs.push_back(free_pairs[k]);
      on_tree.push_back(0);
    }
  } else {
    while (static_cast<long>(arcs.size()) < spec.arcs) {
      const int t = static_cast<int>(rng.uniform_int(0, n - 1));
      const int h = static_cast<int>(rng.uniform_int(0, n - 1));
      if (t == h || !used.insert({t, h}).second) continue;
      arcs.push_back({t, h});
      on_tree.push_back(0);
    }
  }

  std::vector<int> order(arcs.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  shuffle(order, rng);

  McfProblem p;
  p.num_nodes = static_cast<int>(n);
  p.supply.assign(n, 0.0);
  for (int k : order) {
    const Arc arc = arcs[k];
    const double cost = static_cast<double>(rng.uniform_int(spec.min_cost, spec.max_cost));
    const double cap = static_cast<double>(rng.uniform_int(spec.min_capacity, spec.max_capacity));
    p.arcs.push_back(arc);
    p.cost.push_back(cost);
    p.capacity.push_back(cap);
    if (on_tree[k]) {
      const double flow = static_cast<double>(rng.uniform_int(0, static_cast<std::int64_t>(cap)));
      p.supply[arc.tail] += flow;
      p.supply[arc.head] -= flow;
    }
  }
  return p;
}

Raster random_raster(int rows, int cols, double density, std::uint64_t seed) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("random_raster: empty grid");
  Rng rng(seed);
  Raster r{rows, cols, std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0)};
  for (double& v : r.pixels) {
    if (rng.uniform() < density) v = 1.0 - rng.uniform();
  }
  if (std::all_of(r.pixels.begin(), r.pixels.end(), [](double v) { return v == 0.0; })) {
    r.pixels[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(r.pixels.size()) - 1))] = 1.0;
  }
  return r;
}

Raster read_pgm(std::istream& in) {
  auto next_token = [&]() {
    std::string token;
    while (in >> token) {
      if (token[0] != '#') return token;
      std::string rest;
      std::getline(in, rest);
    }
    throw std::runtime_error("read_pgm: truncated header");
  };
  const std::string magic = next_token();
  if (magic != "P2" && magic != "P5") throw std::runtime_error("read_pgm: unsupported magic " + magic);
  Raster r;
  r.cols = std::stoi(next_token());
  r.rows = std::stoi(next_token());
  const int max_value = std::stoi(next_token());
  if (r.rows <= 0 || r.cols <= 0 || max_value <= 0 || max_value > 65535) throw std::runtime_error("read_pgm: bad header");
  const std::size_t count = static_cast<std::size_t>(r.rows) * r.cols;
  r.pixels.resize(count);
  if (magic == "P2") {
    for (double& v : r.pixels) v = std::stod(next_token());
  } else {
    in.get();  // single whitespace after the header
    const int bytes = max_value < 256 ? 1 : 2;
    for (double& v : r.pixels) {
      int value = 0;
      for (int b = 0; b < bytes; ++b) {
        const int c = in.get();
        if (c == EOF) throw std::runtime_error("read_pgm: truncated pixel data");
        value = value * 256 + c;
      }
      v = value;
    }
  }
  return r;
}

Raster upscale(const Raster& raster, int alpha) {
  if (alpha < 1) throw std::invalid_argument("upscale: alpha must be >= 1");
  Raster out{raster.rows * alpha, raster.cols * alpha, {}};
  out.pixels.resize(static_cast<std::size_t>(out.rows) * out.cols);
  for (int r = 0; r < out.rows; ++r) {
    for (int c = 0; c < out.cols; ++c) out.pixels[static_cast<std::size_t>(r) * out.cols + c] = raster.at(r / alpha, c / alpha);
  }
  return out;
}

OtProblem gen_ot_from_images(const Raster& a, const Raster& b, int alpha, double power) {
  if (!(power > 0.0)) throw std::invalid_argument("gen_ot_from_images: power must be positive");
  auto support = [&](const Raster& raster, std::vector<Point>& points, std::vector<double>& mass) {
    const Raster big = upscale(raster, alpha);
    for (int r = 0; r < big.rows; ++r) {
      for (int c = 0; c < big.cols; ++c) {
        const double v = big.at(r, c);
        if (v < 0.0) throw std::invalid_argument("gen_ot_from_images: negative pixel");
        if (v > 0.0) {
          points.push_back({static_cast<double>(r), static_cast<double>(c)});
          mass.push_back(v);
        }
      }
    }
    if (points.empty()) throw std::invalid_argument("gen_ot_from_images: image has no nonzero pixel");
  };
  std::vector<Point> pa, pb;
  std::vector<double> ma, mb;
  support(a, pa, ma);
  support(b, pb, mb);
  OtProblem p;
  p.supply = Eigen::Map<Vec>(ma.data(), static_cast<Eigen::Index>(ma.size()));
  p.demand = Eigen::Map<Vec>(mb.data(), static_cast<Eigen::Index>(mb.size()));
  p.supply /= p.supply.sum();
  p.demand /= p.demand.sum();
  p.cost.resize(p.supply.size(), p.demand.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    for (std::size_t j = 0; j < pb.size(); ++j) {
      p.cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::pow(squared_distance(pa[i], pb[j]), power / 2.0);
    }
  }
  p.normalize();
  return p;
}

OtProblem gen_ot_random(int sources, int sinks, std::uint64_t seed) {
  if (sources <= 0 || sinks <= 0) throw std::invalid_argument("gen_ot_random: sizes must be positive");
  Rng rng(seed);
  const std::vector<Point> pa = random_points(sources, rng);
  const std::vector<Point> pb = random_points(sinks, rng);
  OtProblem p;
  p.supply = random_weights(sources, rng);
  p.demand = random_weights(sinks, rng);
  p.cost.resize(sources, sinks);
  for (int i = 0; i < sources; ++i) {
    for (int j = 0; j < sinks; ++j) p.cost(i, j) = 100.0 * squared_distance(pa[i], pb[j]);
  }
  p.normalize();
  return p;
}

WbProblem gen_wb(int measures, int atoms, int support, std::uint64_t seed) {
  if (measures <= 0 || atoms <= 0 || support <= 0) throw std::invalid_argument("gen_wb: sizes must be positive");
  Rng rng(seed);
  WbProblem p;
  p.support_size = support;
  const std::vector<Point> grid = random_points(support, rng);
  for (int k = 0; k < measures; ++k) {
    const std::vector<Point> pts = random_points(atoms, rng);
    p.weights.push_back(random_weights(atoms, rng));
    DenseMat c(atoms, support);
    for (int i = 0; i < atoms; ++i) {
      for (int j = 0; j < support; ++j) c(i, j) = 100.0 * squared_distance(pts[i], grid[j]);
    }
    p.costs.push_back(std::move(c));
  }
  p.omega = Vec::Constant(measures, 1.0 / measures);
  return p;
}

}  // namespace crossover
