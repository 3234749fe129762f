#include "qcsp/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>

#include "calculi_detail.hpp"
#include "qcsp/certificates.hpp"

namespace qcsp {

namespace {

using Clock = std::chrono::steady_clock;

struct BagKey {
  std::vector<int> bag;
  std::vector<int> cons;  // indices into inst.constraints
  bool operator==(const BagKey&) const = default;
};

struct BagKeyHash {
  std::size_t operator()(const BagKey& k) const {
    std::uint64_t h = 0x100001b3ull;
    for (int v : k.bag) h = hash_mix(h, static_cast<std::uint64_t>(v) + 1);
    h = hash_mix(h, 0xabcdull);
    for (int c : k.cons) h = hash_mix(h, static_cast<std::uint64_t>(c) + 1);
    return static_cast<std::size_t>(h);
  }
};

// Enumerations repeat across nodes with the same (bag, constraint-set) key;
// cache them for the duration of one solve.
struct SolveContext {
  const Instance* inst;
  std::vector<std::vector<int>> cons_by_max;  // max scope var -> constraint indices
  std::unordered_map<BagKey, std::shared_ptr<const std::vector<AtomicNetwork>>, BagKeyHash> cache;
  std::mutex cache_mu;

  std::vector<int> active_for(const std::vector<int>& bag) const {
    std::vector<int> out;
    for (int v : bag)
      for (int ci : cons_by_max[static_cast<std::size_t>(v)]) {
        const Constraint& c = (*inst).constraints[static_cast<std::size_t>(ci)];
        bool inside = std::all_of(c.scope.begin(), c.scope.end(), [&](VarId w) {
          return std::binary_search(bag.begin(), bag.end(), w);
        });
        if (inside) out.push_back(ci);
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::shared_ptr<const std::vector<AtomicNetwork>> certificates(const std::vector<int>& bag) {
    BagKey key{bag, active_for(bag)};
    {
      std::lock_guard lock(cache_mu);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
    }
    std::vector<const Constraint*> active;
    for (int ci : key.cons) active.push_back(&inst->constraints[static_cast<std::size_t>(ci)]);
    auto certs = std::make_shared<std::vector<AtomicNetwork>>();
    std::vector<VarId> vars(bag.begin(), bag.end());
    const Calculus& calc = *inst->calc;
    auto sink = [&](const AtomicNetwork& n) {
      certs->push_back(n);
      return true;
    };
    if (calc.enumerate)
      calc.enumerate(active, vars, sink);
    else
      detail::generic_enumerate(calc, active, vars, sink);
    std::lock_guard lock(cache_mu);
    return cache.try_emplace(key, std::move(certs)).first->second;
  }
};

Record introduce_from_certs(const Record& child, const std::vector<AtomicNetwork>& certs,
                            std::span<const int> child_bag) {
  Record out;
  std::vector<VarId> cb(child_bag.begin(), child_bag.end());
  for (const AtomicNetwork& cert : certs) {
    std::int32_t at = child.find(project(cert, cb));
    if (at >= 0) out.add(cert, at);
  }
  return out;
}

}  // namespace

Record leaf_step() {
  Record r;
  r.add(AtomicNetwork{});
  return r;
}

Record introduce_step(const Record& child, const Instance& inst, std::span<const int> bag,
                      std::span<const int> child_bag) {
  std::vector<VarId> vars(bag.begin(), bag.end());
  std::vector<AtomicNetwork> certs;
  enumerate_certificates(*inst.calc, inst, vars, [&](const AtomicNetwork& n) {
    certs.push_back(n);
    return true;
  });
  return introduce_from_certs(child, certs, child_bag);
}

Record forget_step(const Record& child, VarId forgotten, std::span<const int> bag) {
  (void)forgotten;
  Record out;
  std::vector<VarId> keep(bag.begin(), bag.end());
  for (std::size_t i = 0; i < child.members.size(); ++i)
    out.add(project(child.members[i].net, keep), static_cast<std::int32_t>(i));
  return out;
}

Record join_step(const Record& r1, const Record& r2) {
  Record out;
  for (std::size_t i = 0; i < r1.members.size(); ++i) {
    std::int32_t j = r2.find(r1.members[i].net);
    if (j >= 0) out.add(r1.members[i].net, static_cast<std::int32_t>(i), j);
  }
  return out;
}

SolveOutcome solve(const Instance& inst, const NiceDecomposition& nd, SolveOptions opts) {
  Graph g = primal_graph(inst);
  if (auto err = validate_nice(nd, g))
    throw ContractError("solve: invalid nice decomposition: " + *err);

  SolveContext ctx;
  ctx.inst = &inst;
  ctx.cons_by_max.assign(inst.var_names.size(), {});
  for (std::size_t ci = 0; ci < inst.constraints.size(); ++ci) {
    const auto& scope = inst.constraints[ci].scope;
    VarId mx = *std::max_element(scope.begin(), scope.end());
    ctx.cons_by_max[static_cast<std::size_t>(mx)].push_back(static_cast<int>(ci));
  }

  auto t0 = Clock::now();
  std::size_t n = nd.nodes.size();
  std::vector<Record> records(n);
  std::vector<NodeStat> stats(n);
  std::vector<std::atomic<int>> pending(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = nd.nodes[i];
    pending[i].store((node.left >= 0) + (node.right >= 0));
  }

  std::mutex mu;
  std::condition_variable cv;
  std::vector<int> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (pending[i].load() == 0) ready.push_back(static_cast<int>(i));
  std::size_t done = 0;
  bool failed = false;
  std::exception_ptr error;

  auto process_node = [&](int t) {
    const auto& node = nd.nodes[static_cast<std::size_t>(t)];
    auto start = Clock::now();
    Record rec;
    switch (node.kind) {
      case NodeKind::Leaf:
        rec = leaf_step();
        break;
      case NodeKind::Introduce: {
        auto certs = ctx.certificates(node.bag);
        rec = introduce_from_certs(records[static_cast<std::size_t>(node.left)], *certs,
                                   nd.nodes[static_cast<std::size_t>(node.left)].bag);
        break;
      }
      case NodeKind::Forget:
        rec = forget_step(records[static_cast<std::size_t>(node.left)], node.var, node.bag);
        break;
      case NodeKind::Join:
        rec = join_step(records[static_cast<std::size_t>(node.left)],
                        records[static_cast<std::size_t>(node.right)]);
        break;
    }
    auto micros =
        std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
    stats[static_cast<std::size_t>(t)] = {t, node.kind, static_cast<int>(node.bag.size()),
                                          rec.size(), micros};
    if (!opts.retain_records) {
      if (node.left >= 0) records[static_cast<std::size_t>(node.left)] = Record{};
      if (node.right >= 0) records[static_cast<std::size_t>(node.right)] = Record{};
    }
    records[static_cast<std::size_t>(t)] = std::move(rec);
  };

  auto worker = [&] {
    std::unique_lock lock(mu);
    while (true) {
      cv.wait(lock, [&] { return failed || done == n || !ready.empty(); });
      if (failed || done == n) return;
      int t = ready.back();
      ready.pop_back();
      lock.unlock();
      try {
        process_node(t);
      } catch (...) {
        lock.lock();
        failed = true;
        if (!error) error = std::current_exception();
        cv.notify_all();
        return;
      }
      lock.lock();
      ++done;
      int parent = nd.nodes[static_cast<std::size_t>(t)].parent;
      if (parent >= 0 && pending[static_cast<std::size_t>(parent)].fetch_sub(1) == 1)
        ready.push_back(parent);
      cv.notify_all();
    }
  };

  if (opts.parallel) {
    unsigned workers = std::max(2u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  } else {
    worker();
  }
  if (error) std::rethrow_exception(error);

  SolveOutcome out;
  out.sat = !records[static_cast<std::size_t>(nd.root)].members.empty();
  out.stats.nodes = std::move(stats);
  for (const auto& s : out.stats.nodes) out.stats.peak_record = std::max(out.stats.peak_record, s.record_size);
  out.stats.wall_ms =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(Clock::now() - t0)
          .count();
  if (opts.retain_records) {
    for (auto& r : records) r.index.clear();  // back-pointers carry the provenance
    out.records = std::move(records);
  }
  return out;
}

AtomicNetwork extract_certificate(const Instance& inst, const NiceDecomposition& nd,
                                  const std::vector<Record>& records) {
  if (records.size() != nd.nodes.size() ||
      records[static_cast<std::size_t>(nd.root)].members.empty())
    throw ContractError("extract_certificate: needs a SAT solve with retained records");

  // Walk down from the root, stitching the chosen member of every record.
  AtomicNetwork acc;
  std::vector<std::pair<int, std::int32_t>> stack{{nd.root, 0}};
  while (!stack.empty()) {
    auto [t, idx] = stack.back();
    stack.pop_back();
    const RecordMember& m = records[static_cast<std::size_t>(t)].members[static_cast<std::size_t>(idx)];
    auto merged = union_networks(acc, m.net);
    if (!merged) throw Error("extract_certificate: record members disagree on a shared tuple");
    acc = std::move(*merged);
    const auto& node = nd.nodes[static_cast<std::size_t>(t)];
    if (node.left >= 0) stack.push_back({node.left, m.child_a});
    if (node.right >= 0) stack.push_back({node.right, m.child_b});
  }

  const Calculus& calc = *inst.calc;
  if (calc.has_realizer()) {
    auto model = calc.realize(acc);
    if (!model) throw Error("extract_certificate: stitched network failed to realize");
    return network_of_model(calc, *model, inst.vars);
  }

  // Enumerator path (RCC): pin the stitched entries as singleton constraints
  // and take the first completion.
  Instance pinned = inst;
  for (const auto& [t, r] : acc.entries()) {
    if (t.size() == 2 && t[0] == t[1]) continue;
    Constraint c;
    c.scope.assign(t.begin(), t.end());
    c.dnf = {{Atom{r, t, false}}};
    pinned.constraints.push_back(normalize_constraint(calc, std::move(c)));
  }
  std::optional<AtomicNetwork> full;
  enumerate_certificates(calc, pinned, pinned.vars, [&](const AtomicNetwork& n) {
    full = n;
    return false;
  });
  if (!full) throw Error("extract_certificate: completion failed");
  return *full;
}

std::string kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Leaf:
      return "leaf";
    case NodeKind::Introduce:
      return "introduce";
    case NodeKind::Forget:
      return "forget";
    case NodeKind::Join:
      return "join";
  }
  return "?";
}

void write_stats_csv(std::ostream& out, const SolveStats& stats) {
  out << "node_id,kind,bag_size,record_size,micros\n";
  for (const NodeStat& s : stats.nodes)
    out << s.node << ',' << kind_name(s.kind) << ',' << s.bag_size << ',' << s.record_size << ','
        << s.micros << '\n';
}

}  // namespace qcsp
