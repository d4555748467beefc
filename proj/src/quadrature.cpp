#include "pathsum/quadrature.hpp"

#include "pathsum/error.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

namespace pathsum {

namespace {

constexpr double pi = boost::math::constants::pi<double>();

GaussRule make_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (n == 1) {
      x = 0.0;
      dp = 1.0;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

// c0 + cs * s_{k-1} + cS * S_{k-1}
struct Affine {
  double c0 = 0.0;
  double cs = 0.0;
  double cS = 0.0;
  bool budget = false;

  double at(double s, double S) const { return c0 + cs * s + cS * S; }
};

struct Limits {
  std::vector<Affine> lo;
  std::vector<Affine> hi;
  double sigma = 1.0;
};

struct Line {  // value = a + b * s_k
  double a;
  double b;
};

class Engine {
public:
  Engine(const NestedProblem& p, int nodes) : p_(p), rule_(gauss_legendre(nodes)) {
    const int n = p.levels;
    const bool finite = std::isfinite(p.budget);
    const double b = p.budget;
    for (int k = 1; k <= n; ++k) {
      Limits lim;
      const bool odd = k % 2 == 1;
      lim.sigma = odd ? 1.0 : -1.0;
      if (odd) {
        lim.lo.push_back({0.0, 1.0, 0.0});
        lim.hi.push_back({p.ceiling, 0.0, 0.0});
      } else {
        lim.lo.push_back({p.floor, 0.0, 0.0});
        lim.hi.push_back({0.0, 1.0, 0.0});
      }
      if (p.side == NestedProblem::Arrival::Left) {
        if (odd && k == n) lim.lo.push_back({p.arrival, 0.0, 0.0});
        if (finite && odd) lim.hi.push_back({0.5 * b, 0.0, -0.5, true});
        if (finite && !odd) lim.lo.push_back({p.arrival - 0.5 * b, 0.0, 0.5, true});
      } else {
        if (!odd && k == n) lim.hi.push_back({p.arrival, 0.0, 0.0});
        if (finite && odd) lim.hi.push_back({p.arrival + 0.5 * b, 0.0, -0.5, true});
        if (finite && !odd) lim.lo.push_back({-0.5 * b, 0.0, 0.5, true});
      }
      limits_.push_back(std::move(lim));
    }
  }

  double weight(double s) const { return p_.weight ? p_.weight(s) : 1.0; }

  // Integral over levels k..n given s_{k-1} and S_{k-1}.
  double level(int k, double s_prev, double S_prev, std::size_t& evals) const {
    const Limits& lim = limits_[k - 1];
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& a : lim.lo) lo = std::max(lo, a.at(s_prev, S_prev));
    for (const auto& a : lim.hi) hi = std::min(hi, a.at(s_prev, S_prev));
    if (k == p_.levels) return inner(lim, lo, hi, s_prev, S_prev, evals);
    if (!(hi > lo)) return 0.0;

    std::vector<double> edges = panel_edges(k, lo, hi, S_prev);
    double sum = 0.0;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      const double half = 0.5 * (edges[e + 1] - edges[e]);
      const double mid = 0.5 * (edges[e + 1] + edges[e]);
      double panel = 0.0;
      for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
        const double s = mid + half * rule_.nodes[i];
        const double g = weight(s);
        if (g == 0.0) continue;
        panel += rule_.weights[i] * g * level(k + 1, s, S_prev + 2.0 * lim.sigma * s, evals);
      }
      sum += half * panel;
    }
    return sum;
  }

  // Outermost level with its nodes spread across workers.
  double run(int workers, std::size_t& evals) const {
    const Limits& lim = limits_[0];
    const double s0 = p_.floor;
    if (p_.levels == 1) return level(1, s0, 0.0, evals);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& a : lim.lo) lo = std::max(lo, a.at(s0, 0.0));
    for (const auto& a : lim.hi) hi = std::min(hi, a.at(s0, 0.0));
    if (!(hi > lo)) return 0.0;

    const std::vector<double> edges = panel_edges(1, lo, hi, 0.0);
    std::vector<double> s;
    std::vector<double> w;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      const double half = 0.5 * (edges[e + 1] - edges[e]);
      const double mid = 0.5 * (edges[e + 1] + edges[e]);
      for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
        s.push_back(mid + half * rule_.nodes[i]);
        w.push_back(half * rule_.weights[i]);
      }
    }
    std::vector<double> terms(s.size(), 0.0);
    std::vector<std::size_t> counts(std::max(workers, 1), 0);
    auto task = [&](int id) {
      for (std::size_t i = id; i < s.size(); i += counts.size()) {
        const double g = weight(s[i]);
        if (g != 0.0) terms[i] = w[i] * g * level(2, s[i], 2.0 * lim.sigma * s[i], counts[id]);
      }
    };
    if (counts.size() == 1) {
      task(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t id = 0; id < counts.size(); ++id) pool.emplace_back(task, static_cast<int>(id));
      for (auto& t : pool) t.join();
    }
    double sum = 0.0;
    for (double v : terms) sum += v;
    for (std::size_t c : counts) evals += c;
    return sum;
  }

private:
  double inner(const Limits& lim, double lo, double hi, double s_prev, double S_prev,
               std::size_t& evals) const {
    ++evals;
    switch (p_.inner) {
      case NestedProblem::Inner::Antiderivative: {
        if (!(hi > lo)) return 0.0;
        if (!p_.antiderivative) return hi - lo;
        return p_.antiderivative(hi) - p_.antiderivative(lo);
      }
      case NestedProblem::Inner::Data: {
        if (!(hi > lo)) return 0.0;
        std::vector<double> edges{lo, hi};
        for (double x : p_.weight_breaks)
          if (x > lo && x < hi) edges.push_back(x);
        std::sort(edges.begin(), edges.end());
        edges = split_long(std::move(edges));
        double sum = 0.0;
        for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
          const double half = 0.5 * (edges[e + 1] - edges[e]);
          const double mid = 0.5 * (edges[e + 1] + edges[e]);
          double panel = 0.0;
          for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
            const double s = mid + half * rule_.nodes[i];
            const double remaining = p_.budget - (S_prev + 2.0 * lim.sigma * s);
            panel += rule_.weights[i] * weight(s) * p_.data(remaining);
          }
          sum += half * panel;
        }
        return sum;
      }
      case NestedProblem::Inner::BudgetEdge: {
        // Only the budget limit moves with the budget; it contributes when active.
        double edge = 0.0;
        if (lim.sigma > 0.0) {
          double other = std::numeric_limits<double>::infinity();
          for (const auto& a : lim.hi)
            if (a.budget) edge = a.at(s_prev, S_prev);
            else other = std::min(other, a.at(s_prev, S_prev));
          if (!(edge < other) || !(edge > lo)) return 0.0;
        } else {
          double other = -std::numeric_limits<double>::infinity();
          for (const auto& a : lim.lo)
            if (a.budget) edge = a.at(s_prev, S_prev);
            else other = std::max(other, a.at(s_prev, S_prev));
          if (!(edge > other) || !(edge < hi)) return 0.0;
        }
        return p_.edge_weight ? p_.edge_weight(edge) : 0.5 * weight(edge);
      }
    }
    return 0.0;
  }

  std::vector<double> panel_edges(int k, double lo, double hi, double S_prev) const {
    std::vector<double> cuts{lo, hi};
    auto keep = [&](double x) {
      if (std::isfinite(x) && x > lo && x < hi) cuts.push_back(x);
    };
    for (double x : p_.weight_breaks) keep(x);

    const double sk = limits_[k - 1].sigma;
    // Limits of level k+1 as lines in s_k.
    std::vector<Line> lines;
    const Limits& next = limits_[k];
    for (const auto* side : {&next.lo, &next.hi})
      for (const auto& a : *side) lines.push_back({a.c0 + a.cS * S_prev, a.cs + 2.0 * sk * a.cS});
    for (double x : p_.weight_breaks) lines.push_back({x, 0.0});
    for (std::size_t i = 0; i < lines.size(); ++i)
      for (std::size_t j = i + 1; j < lines.size(); ++j)
        if (lines[i].b != lines[j].b) keep((lines[j].a - lines[i].a) / (lines[i].b - lines[j].b));

    if (k + 2 <= p_.levels) {
      // Kinks of level k+2 are lines alpha + beta s_k + gamma s_{k+1} = 0.
      const Limits& far = limits_[k + 1];
      const double sk1 = next.sigma;
      std::vector<Affine> cands;
      for (const auto* side : {&far.lo, &far.hi})
        for (const auto& a : *side) cands.push_back(a);
      struct Kink {
        double alpha, beta, gamma;
      };
      std::vector<Kink> kinks;
      for (std::size_t i = 0; i < cands.size(); ++i)
        for (std::size_t j = i + 1; j < cands.size(); ++j) {
          const Affine& u = cands[i];
          const Affine& v = cands[j];
          const double dc0 = u.c0 - v.c0;
          const double dcs = u.cs - v.cs;
          const double dcS = u.cS - v.cS;
          kinks.push_back({dc0 + dcS * S_prev, 2.0 * sk * dcS, dcs + 2.0 * sk1 * dcS});
        }
      for (const auto& q : kinks) {
        if (q.gamma == 0.0 && q.beta != 0.0) keep(-q.alpha / q.beta);
        for (const auto& l : lines) {
          const double den = q.beta + q.gamma * l.b;
          if (den != 0.0) keep(-(q.alpha + q.gamma * l.a) / den);
        }
      }
      for (std::size_t i = 0; i < kinks.size(); ++i)
        for (std::size_t j = i + 1; j < kinks.size(); ++j) {
          const Kink& u = kinks[i];
          const Kink& v = kinks[j];
          const double det = u.beta * v.gamma - v.beta * u.gamma;
          if (det != 0.0) keep((-u.alpha * v.gamma + v.alpha * u.gamma) / det);
        }
    }

    std::sort(cuts.begin(), cuts.end());
    const double eps = 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)});
    std::vector<double> edges{cuts.front()};
    for (std::size_t i = 1; i < cuts.size(); ++i)
      if (cuts[i] - edges.back() > eps) edges.push_back(cuts[i]);
    edges.back() = hi;
    return split_long(std::move(edges));
  }

  std::vector<double> split_long(std::vector<double> edges) const {
    if (!std::isfinite(p_.max_panel)) return edges;
    std::vector<double> out{edges.front()};
    for (std::size_t i = 1; i < edges.size(); ++i) {
      const double len = edges[i] - edges[i - 1];
      const int parts = static_cast<int>(std::ceil(len / p_.max_panel - 1e-9));
      for (int k = 1; k < parts; ++k) out.push_back(edges[i - 1] + len * k / parts);
      out.push_back(edges[i]);
    }
    return out;
  }

  const NestedProblem& p_;
  const GaussRule& rule_;
  std::vector<Limits> limits_;
};

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre order must be >= 1");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
  return it->second;
}

NestedResult integrate_nested(const NestedProblem& problem, int nodes, int workers) {
  if (problem.levels < 1) throw Error(ErrorCode::InvalidArgument, "nested integral needs >= 1 level");
  if (problem.inner == NestedProblem::Inner::Data && !problem.data)
    throw Error(ErrorCode::InvalidArgument, "data integrand missing");
  if (problem.inner == NestedProblem::Inner::BudgetEdge && !std::isfinite(problem.budget))
    return {};
  const Engine engine(problem, nodes);
  NestedResult result;
  result.value = engine.run(workers, result.evaluations);
  return result;
}

int default_workers() {
  if (const char* env = std::getenv("PATHSUM_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

}  // namespace pathsum
