#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "curvelab/measures.hpp"
#include "measure_detail.hpp"

// Independent route to the flat norm.  For a fixed trade-off t in [0, 1] the
// best decomposition of the measure into a transported part and a disposed
// part is a min-cost flow on the node path (cycle when periodic) augmented
// with a disposal node: moving unit mass across an edge of length d costs
// (1 - t) d, dropping it costs t.  The flow value C(t) is concave in t and
// the flat norm equals max_t C(t).  Each evaluation yields both an explicit
// decomposition (upper bound max(disposed volume, transport work)) and
// feasible node potentials (a test function, hence a lower bound), so the
// returned bracket is certified no matter how accurate the search is.

namespace curvelab {
namespace {

struct Arc {
  std::size_t to;
  double cap;
  double cost;
  double flow;
  std::size_t rev;  // index of the paired reverse arc in graph[to]
};

class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t n) : graph_(n) {}

  void add_arc(std::size_t u, std::size_t v, double cap, double cost) {
    graph_[u].push_back({v, cap, cost, 0.0, graph_[v].size()});
    graph_[v].push_back({u, 0.0, -cost, 0.0, graph_[u].size() - 1});
  }

  // Undirected edge of unlimited capacity and symmetric cost.
  void add_edge(std::size_t u, std::size_t v, double cost) {
    add_arc(u, v, kInf, cost);
    add_arc(v, u, kInf, cost);
  }

  // Successive shortest augmenting paths with Dijkstra potentials.
  // `supply[i]` > 0 must leave node i, < 0 must arrive.  Throws when the
  // augmentation budget is exhausted, which indicates numerical breakdown.
  void route(std::vector<double> supply, double tol) {
    const std::size_t n = graph_.size();
    potential_.assign(n, 0.0);
    std::vector<double> dist(n);
    std::vector<std::pair<std::size_t, std::size_t>> parent(n);  // node, arc index
    std::size_t budget = 50 * n + 1000;
    for (;;) {
      std::size_t source = n;
      for (std::size_t i = 0; i < n; ++i)
        if (supply[i] > tol) {
          source = i;
          break;
        }
      if (source == n) break;
      if (budget-- == 0) throw LpNumericalError("flow augmentation budget exhausted");

      std::fill(dist.begin(), dist.end(), kInf);
      dist[source] = 0.0;
      using Item = std::pair<double, std::size_t>;
      std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
      heap.push({0.0, source});
      std::vector<bool> done(n, false);
      while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = true;
        for (std::size_t a = 0; a < graph_[u].size(); ++a) {
          const Arc& arc = graph_[u][a];
          if (arc.cap - arc.flow <= tol) continue;
          const double rc =
              std::max(0.0, arc.cost + potential_[u] - potential_[arc.to]);
          if (d + rc < dist[arc.to] - 1e-18) {
            dist[arc.to] = d + rc;
            parent[arc.to] = {u, a};
            heap.push({dist[arc.to], arc.to});
          }
        }
      }

      std::size_t sink = n;
      double best = kInf;
      for (std::size_t i = 0; i < n; ++i)
        if (supply[i] < -tol && dist[i] < best) {
          best = dist[i];
          sink = i;
        }
      if (sink == n) throw LpNumericalError("flow network disconnected");

      for (std::size_t i = 0; i < n; ++i)
        if (dist[i] < kInf) potential_[i] += dist[i];

      double amount = std::min(supply[source], -supply[sink]);
      for (std::size_t v = sink; v != source;) {
        const auto [u, a] = parent[v];
        amount = std::min(amount, graph_[u][a].cap - graph_[u][a].flow);
        v = u;
      }
      for (std::size_t v = sink; v != source;) {
        const auto [u, a] = parent[v];
        Arc& arc = graph_[u][a];
        arc.flow += amount;
        graph_[arc.to][arc.rev].flow -= amount;
        v = u;
      }
      supply[source] -= amount;
      supply[sink] += amount;
    }
  }

  // Net flow pushed from u along the undirected edge added as add_edge(u, v);
  // `slot` is the index of the forward arc in graph_[u].
  double net_flow(std::size_t u, std::size_t slot) const {
    return graph_[u][slot].flow;
  }

  const std::vector<double>& potentials() const { return potential_; }
  std::size_t arc_count(std::size_t u) const { return graph_[u].size(); }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<Arc>> graph_;
  std::vector<double> potential_;
};

struct Instance {
  std::vector<double> pos;   // cycle order for periodic mode
  std::vector<double> mass;
  std::vector<double> edge_len;  // edge i joins node i and i+1 (wraps when periodic)
  bool periodic = false;
  double mass_scale = 0.0;
};

Instance build_instance(const IntervalMeasure& mu, FlatMode mode,
                        std::size_t refinement) {
  IntervalMeasure refined = mu;
  if (refinement > 0) {
    // Extra zero-mass nodes only refine the test-function representation;
    // they cannot change the value and serve as a consistency knob.
    for (std::size_t k = 1; k <= refinement; ++k)
      refined.atoms.push_back(
          {mu.domain * double(k) / double(refinement + 1), 0.0});
  }
  const auto nodes =
      detail::lump_measure(refined, std::numeric_limits<std::size_t>::max());

  Instance inst;
  inst.periodic = mode == FlatMode::periodic;
  inst.pos = nodes.pos;
  inst.mass = nodes.mass;
  if (inst.periodic && inst.pos.size() > 1) {
    inst.mass.front() += inst.mass.back();  // identify 0 with D
    inst.pos.pop_back();
    inst.mass.pop_back();
  }
  const std::size_t n = inst.pos.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    inst.edge_len.push_back(inst.pos[i + 1] - inst.pos[i]);
  if (inst.periodic && n > 1)
    inst.edge_len.push_back(nodes.domain - inst.pos.back() + inst.pos.front());
  for (double m : inst.mass) inst.mass_scale += std::abs(m);
  return inst;
}

struct Evaluation {
  double disposed = 0.0;   // total annihilated volume
  double work = 0.0;       // transport work, independent of t
  double value = 0.0;      // t * disposed + (1 - t) * work
  double lower = 0.0;      // from clamped potentials
};

Evaluation evaluate(const Instance& inst, double t) {
  const std::size_t n = inst.pos.size();
  const std::size_t void_node = n;
  FlowNetwork net(n + 1);
  // Path/cycle edges first (slot bookkeeping relies on this order), then
  // the disposal star.
  for (std::size_t e = 0; e < inst.edge_len.size(); ++e) {
    const std::size_t u = e;
    const std::size_t v = (e + 1) % n;
    net.add_edge(u, v, (1.0 - t) * inst.edge_len[e]);
  }
  for (std::size_t i = 0; i < n; ++i) net.add_edge(i, void_node, t);

  std::vector<double> supply = inst.mass;
  supply.push_back(0.0);
  double total = 0.0;
  for (double m : inst.mass) total += m;
  supply[void_node] = -total;
  const double tol = 1e-14 * std::max(1.0, inst.mass_scale);
  net.route(std::move(supply), tol);

  Evaluation ev;
  // add_edge(u, v) appends two arcs at each endpoint: graph[u] gains the
  // forward arc u->v then the reverse stub of v->u, graph[v] the stub then
  // the forward arc v->u.  Walking edges in insertion order with per-node
  // cursors therefore lands on the forward arcs directly, and the net edge
  // flow is the difference of the two forward flows.
  std::vector<std::size_t> cursor(n + 1, 0);
  std::vector<double> edge_net(inst.edge_len.size(), 0.0);
  for (std::size_t e = 0; e < inst.edge_len.size(); ++e) {
    const std::size_t u = e;
    const std::size_t v = (e + 1) % n;
    const double uv = net.net_flow(u, cursor[u]);
    cursor[u] += 2;
    const double vu = net.net_flow(v, cursor[v] + 1);
    cursor[v] += 2;
    edge_net[e] = uv - vu;
    ev.work += std::abs(edge_net[e]) * inst.edge_len[e];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double iv = net.net_flow(i, cursor[i]);
    cursor[i] += 2;
    const double vi = net.net_flow(void_node, cursor[void_node] + 1);
    cursor[void_node] += 2;
    ev.disposed += std::abs(iv - vi);
  }
  ev.value = t * ev.disposed + (1.0 - t) * ev.work;

  // Potentials give a test function feasible up to roundoff; clamp it and
  // keep the better sign.
  const auto& pi = net.potentials();
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = pi[i] - pi[void_node];
  double sup = 0.0;
  for (double p : phi) sup = std::max(sup, std::abs(p));
  double lip = 0.0;
  for (std::size_t e = 0; e < inst.edge_len.size(); ++e) {
    const std::size_t u = e;
    const std::size_t v = (e + 1) % n;
    if (inst.edge_len[e] > 0.0)
      lip = std::max(lip, std::abs(phi[v] - phi[u]) / inst.edge_len[e]);
  }
  double scale = sup + lip;
  const double shrink = scale > 1.0 ? (1.0 - 1e-12) / scale : 1.0;
  double pairing = 0.0;
  for (std::size_t i = 0; i < n; ++i) pairing += inst.mass[i] * phi[i] * shrink;
  ev.lower = std::abs(pairing);
  return ev;
}

}  // namespace

FlatBracket flat_norm_oracle(const IntervalMeasure& mu, FlatMode mode,
                             std::size_t refinement) {
  const Instance inst = build_instance(mu, mode, refinement);
  FlatBracket out;
  if (inst.mass_scale == 0.0) return out;

  std::vector<std::pair<double, double>> decomps;  // (disposed, work)
  auto record = [&](const Evaluation& ev) {
    out.lower = std::max(out.lower, ev.lower);
    decomps.push_back({ev.disposed, ev.work});
  };

  // Golden-section maximization of the concave profile C(t).
  const double inv_phi = 0.6180339887498948482;
  double lo = 0.0, hi = 1.0;
  double t1 = hi - inv_phi * (hi - lo);
  double t2 = lo + inv_phi * (hi - lo);
  Evaluation e1 = evaluate(inst, t1);
  Evaluation e2 = evaluate(inst, t2);
  record(e1);
  record(e2);
  for (int it = 0; it < 60; ++it) {
    if (e1.value < e2.value) {
      lo = t1;
      t1 = t2;
      e1 = e2;
      t2 = lo + inv_phi * (hi - lo);
      e2 = evaluate(inst, t2);
      record(e2);
    } else {
      hi = t2;
      t2 = t1;
      e2 = e1;
      t1 = hi - inv_phi * (hi - lo);
      e1 = evaluate(inst, t1);
      record(e1);
    }
  }

  // Any single decomposition bounds the norm by max(disposed, work), but the
  // equalizing one is typically a mixture of flows from the two slopes at the
  // concave maximum, so minimize over convex combinations of all recorded
  // pairs (disposal volume and work are both convexly subadditive).
  out.upper = std::numeric_limits<double>::infinity();
  auto combo = [&](const std::pair<double, double>& p,
                   const std::pair<double, double>& q, double s) {
    const double a = s * p.first + (1.0 - s) * q.first;
    const double b = s * p.second + (1.0 - s) * q.second;
    out.upper = std::min(out.upper, std::max(a, b));
  };
  for (std::size_t i = 0; i < decomps.size(); ++i) {
    combo(decomps[i], decomps[i], 1.0);
    for (std::size_t j = i + 1; j < decomps.size(); ++j) {
      combo(decomps[i], decomps[j], 0.0);
      const double denom = (decomps[j].second - decomps[j].first) +
                           (decomps[i].first - decomps[i].second);
      if (denom != 0.0) {
        const double s = (decomps[j].second - decomps[j].first) / denom;
        if (s > 0.0 && s < 1.0) combo(decomps[i], decomps[j], s);
      }
    }
  }
  return out;
}

}  // namespace curvelab
