#include <algorithm>
#include <bit>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <sstream>
#include <string>

#include "calculi_detail.hpp"
#include "qcsp/calculi.hpp"

namespace qcsp {

namespace {

using Mask = std::uint16_t;

struct RccTable {
  int n = 0;
  std::vector<std::string> names;
  std::vector<RelId> conv;
  std::vector<std::vector<Mask>> comp;
  RelId eq = 0;

  Mask full() const { return static_cast<Mask>((1u << n) - 1); }
  Mask compose(Mask a, Mask b) const {
    Mask out = 0;
    for (int i = 0; i < n; ++i)
      if (a & (1u << i))
        for (int j = 0; j < n; ++j)
          if (b & (1u << j)) out |= comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
  }
  Mask converse(Mask a) const {
    Mask out = 0;
    for (int i = 0; i < n; ++i)
      if (a & (1u << i)) out |= static_cast<Mask>(1u << conv[static_cast<std::size_t>(i)]);
    return out;
  }
  void check() const;
};

// RCC8 ids: EQ PO DC EC NTPP NTPPi TPP TPPi
enum Rcc8 : RelId { EQ8 = 0, PO8, DC8, EC8, NTPP8, NTPPI8, TPP8, TPPI8 };
// RCC5 ids: EQ PO DR PP PPi
enum Rcc5 : RelId { EQ5 = 0, PO5, DR5, PP5, PPI5 };

constexpr Mask bit(int r) { return static_cast<Mask>(1u << r); }

template <typename... Rs>
constexpr Mask mask_of(Rs... rs) {
  return static_cast<Mask>((bit(rs) | ...));
}

RccTable builtin_rcc8() {
  RccTable t;
  t.n = 8;
  t.names = {"EQ", "PO", "DC", "EC", "NTPP", "NTPPi", "TPP", "TPPi"};
  t.conv = {EQ8, PO8, DC8, EC8, NTPPI8, NTPP8, TPPI8, TPP8};
  t.eq = EQ8;
  const Mask all = t.full();
  const Mask inside = mask_of(PO8, TPP8, NTPP8);                       // PO TPP NTPP
  const Mask d_inside = mask_of(DC8, EC8, PO8, TPP8, NTPP8);           // + DC EC
  const Mask outside = mask_of(PO8, TPPI8, NTPPI8);                    // PO TPPi NTPPi
  const Mask d_outside = mask_of(DC8, EC8, PO8, TPPI8, NTPPI8);        // + DC EC
  auto row = [&](RelId r) -> std::vector<Mask>& {
    return t.comp[static_cast<std::size_t>(r)];
  };
  t.comp.assign(8, std::vector<Mask>(8, 0));
  for (RelId s = 0; s < 8; ++s) {
    t.comp[EQ8][static_cast<std::size_t>(s)] = bit(s);
    t.comp[static_cast<std::size_t>(s)][EQ8] = bit(s);
  }
  row(DC8)[PO8] = d_inside;
  row(DC8)[DC8] = all;
  row(DC8)[EC8] = d_inside;
  row(DC8)[NTPP8] = d_inside;
  row(DC8)[NTPPI8] = bit(DC8);
  row(DC8)[TPP8] = d_inside;
  row(DC8)[TPPI8] = bit(DC8);
  row(EC8)[PO8] = d_inside;
  row(EC8)[DC8] = d_outside;
  row(EC8)[EC8] = mask_of(DC8, EC8, PO8, TPP8, TPPI8, EQ8);
  row(EC8)[NTPP8] = inside;
  row(EC8)[NTPPI8] = bit(DC8);
  row(EC8)[TPP8] = mask_of(EC8, PO8, TPP8, NTPP8);
  row(EC8)[TPPI8] = mask_of(DC8, EC8);
  row(PO8)[PO8] = all;
  row(PO8)[DC8] = d_outside;
  row(PO8)[EC8] = d_outside;
  row(PO8)[NTPP8] = inside;
  row(PO8)[NTPPI8] = d_outside;
  row(PO8)[TPP8] = inside;
  row(PO8)[TPPI8] = d_outside;
  row(TPP8)[PO8] = d_inside;
  row(TPP8)[DC8] = bit(DC8);
  row(TPP8)[EC8] = mask_of(DC8, EC8);
  row(TPP8)[NTPP8] = bit(NTPP8);
  row(TPP8)[NTPPI8] = d_outside;
  row(TPP8)[TPP8] = mask_of(TPP8, NTPP8);
  row(TPP8)[TPPI8] = mask_of(DC8, EC8, PO8, TPP8, TPPI8, EQ8);
  row(NTPP8)[PO8] = d_inside;
  row(NTPP8)[DC8] = bit(DC8);
  row(NTPP8)[EC8] = bit(DC8);
  row(NTPP8)[NTPP8] = bit(NTPP8);
  row(NTPP8)[NTPPI8] = all;
  row(NTPP8)[TPP8] = bit(NTPP8);
  row(NTPP8)[TPPI8] = d_inside;
  row(TPPI8)[PO8] = outside;
  row(TPPI8)[DC8] = d_outside;
  row(TPPI8)[EC8] = mask_of(EC8, PO8, TPPI8, NTPPI8);
  row(TPPI8)[NTPP8] = inside;
  row(TPPI8)[NTPPI8] = bit(NTPPI8);
  row(TPPI8)[TPP8] = mask_of(PO8, TPP8, TPPI8, EQ8);
  row(TPPI8)[TPPI8] = mask_of(TPPI8, NTPPI8);
  row(NTPPI8)[PO8] = outside;
  row(NTPPI8)[DC8] = d_outside;
  row(NTPPI8)[EC8] = outside;
  row(NTPPI8)[NTPP8] = mask_of(PO8, TPP8, NTPP8, TPPI8, NTPPI8, EQ8);
  row(NTPPI8)[NTPPI8] = bit(NTPPI8);
  row(NTPPI8)[TPP8] = outside;
  row(NTPPI8)[TPPI8] = bit(NTPPI8);
  return t;
}

RccTable builtin_rcc5() {
  RccTable t;
  t.n = 5;
  t.names = {"EQ", "PO", "DR", "PP", "PPi"};
  t.conv = {EQ5, PO5, DR5, PPI5, PP5};
  t.eq = EQ5;
  const Mask all = t.full();
  t.comp.assign(5, std::vector<Mask>(5, 0));
  for (RelId s = 0; s < 5; ++s) {
    t.comp[EQ5][static_cast<std::size_t>(s)] = bit(s);
    t.comp[static_cast<std::size_t>(s)][EQ5] = bit(s);
  }
  auto row = [&](RelId r) -> std::vector<Mask>& {
    return t.comp[static_cast<std::size_t>(r)];
  };
  row(DR5)[DR5] = all;
  row(DR5)[PO5] = mask_of(DR5, PO5, PP5);
  row(DR5)[PP5] = mask_of(DR5, PO5, PP5);
  row(DR5)[PPI5] = bit(DR5);
  row(PO5)[DR5] = mask_of(DR5, PO5, PPI5);
  row(PO5)[PO5] = all;
  row(PO5)[PP5] = mask_of(PO5, PP5);
  row(PO5)[PPI5] = mask_of(DR5, PO5, PPI5);
  row(PP5)[DR5] = bit(DR5);
  row(PP5)[PO5] = mask_of(DR5, PO5, PP5);
  row(PP5)[PP5] = bit(PP5);
  row(PP5)[PPI5] = all;
  row(PPI5)[DR5] = mask_of(DR5, PO5, PPI5);
  row(PPI5)[PO5] = mask_of(PO5, PPI5);
  row(PPI5)[PP5] = mask_of(PO5, PP5, PPI5, EQ5);
  row(PPI5)[PPI5] = bit(PPI5);
  return t;
}

void RccTable::check() const {
  for (int r = 0; r < n; ++r) {
    if (conv[static_cast<std::size_t>(conv[static_cast<std::size_t>(r)])] != r)
      throw Error("rcc table: converse is not an involution");
    if (comp[static_cast<std::size_t>(eq)][static_cast<std::size_t>(r)] != bit(r) ||
        comp[static_cast<std::size_t>(r)][static_cast<std::size_t>(eq)] != bit(r))
      throw Error("rcc table: identity row/column broken at " + names[static_cast<std::size_t>(r)]);
    for (int s = 0; s < n; ++s) {
      Mask lhs = converse(comp[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)]);
      Mask rhs = compose(converse(bit(s)), converse(bit(r)));
      if (lhs != rhs)
        throw Error("rcc table: converse closure broken at " + names[static_cast<std::size_t>(r)] +
                    " o " + names[static_cast<std::size_t>(s)]);
      // r must appear in conv(r) o r when composing through the same pair
      if (!(comp[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)]))
        throw Error("rcc table: empty composition cell");
    }
  }
}

// Composition tables can be overridden through data files found under
// $QCSP_DATA_DIR (rcc8.tbl / rcc5.tbl): lines `R S T1 T2 ...`, '#' comments.
// Loaded tables pass the same self-consistency checks as the built-in ones.
bool load_table_file(RccTable& t, const std::string& path) {
  std::ifstream in(path);
  if (!in) return false;
  auto rel_of = [&](const std::string& name) -> RelId {
    for (std::size_t i = 0; i < t.names.size(); ++i)
      if (t.names[i] == name) return static_cast<RelId>(i);
    throw ParseError(path + ": unknown relation '" + name + "'");
  };
  for (auto& r : t.comp)
    for (auto& cell : r) cell = 0;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string r, s, x;
    if (!(ls >> r >> s)) continue;
    Mask m = 0;
    while (ls >> x) m |= bit(rel_of(x));
    t.comp[static_cast<std::size_t>(rel_of(r))][static_cast<std::size_t>(rel_of(s))] = m;
  }
  return true;
}

const RccTable& rcc_table(RccVariant variant) {
  static const RccTable t8 = [] {
    RccTable t = builtin_rcc8();
    if (const char* dir = std::getenv("QCSP_DATA_DIR"))
      load_table_file(t, std::string(dir) + "/rcc8.tbl");
    t.check();
    return t;
  }();
  static const RccTable t5 = [] {
    RccTable t = builtin_rcc5();
    if (const char* dir = std::getenv("QCSP_DATA_DIR"))
      load_table_file(t, std::string(dir) + "/rcc5.tbl");
    t.check();
    return t;
  }();
  return variant == RccVariant::Rcc8 ? t8 : t5;
}

// Workspace for path consistency: full matrix with M[j][i] = conv(M[i][j])
// and M[i][i] = {EQ}.
struct ClosureState {
  const RccTable* t;
  int m = 0;
  std::vector<Mask> mat;

  Mask& at(int i, int j) { return mat[static_cast<std::size_t>(i * m + j)]; }
  Mask get(int i, int j) const { return mat[static_cast<std::size_t>(i * m + j)]; }

  void init(int vars) {
    m = vars;
    mat.assign(static_cast<std::size_t>(m * m), t->full());
    for (int i = 0; i < m; ++i) at(i, i) = bit(t->eq);
  }

  bool restrict_pair(int i, int j, Mask mk, std::deque<std::pair<int, int>>& queue) {
    Mask cur = get(i, j);
    Mask next = cur & mk;
    if (next == cur) return next != 0;
    at(i, j) = next;
    at(j, i) = t->converse(next);
    if (next == 0) return false;
    queue.push_back({i, j});
    return true;
  }

  bool close(std::deque<std::pair<int, int>> queue) {
    while (!queue.empty()) {
      auto [i, j] = queue.front();
      queue.pop_front();
      for (int k = 0; k < m; ++k) {
        if (k == i || k == j) continue;
        if (!restrict_pair(i, k, t->compose(get(i, j), get(j, k)), queue)) return false;
        if (!restrict_pair(k, j, t->compose(get(k, i), get(i, j)), queue)) return false;
      }
    }
    return true;
  }
};

}  // namespace

void rcc_check_table(RccVariant variant) { rcc_table(variant).check(); }

bool rcc_decide(const AtomicNetwork& network, RccVariant variant) {
  const RccTable& t = rcc_table(variant);
  std::vector<VarId> vars(network.vars().begin(), network.vars().end());
  auto idx = [&](VarId v) {
    return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
  };
  ClosureState st{&t, 0, {}};
  st.init(static_cast<int>(vars.size()));
  std::deque<std::pair<int, int>> queue;
  for (const auto& [tup, r] : network.entries()) {
    if (tup.size() != 2 || r < 0 || r >= t.n)
      throw ContractError("rcc_decide: entries must be binary over the variant's relations");
    int i = idx(tup[0]), j = idx(tup[1]);
    if (i == j) {
      if (r != t.eq) return false;
      continue;
    }
    if (!st.restrict_pair(i, j, bit(r), queue)) return false;
  }
  // Initial full sweep: enqueue every pair once.
  for (int i = 0; i < st.m; ++i)
    for (int j = i + 1; j < st.m; ++j) queue.push_back({i, j});
  return st.close(std::move(queue));
}

Rcc5SetModel rcc5_drpo_model(const AtomicNetwork& network) {
  std::vector<VarId> vars(network.vars().begin(), network.vars().end());
  auto idx = [&](VarId v) {
    return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin()) + 1;
  };
  Rcc5SetModel m;
  for (VarId v : vars) m.regions[v] = {"X" + std::to_string(idx(v))};
  for (const auto& [t, r] : network.entries()) {
    if (t.size() != 2) throw ContractError("rcc5_drpo_model: binary entries only");
    if (t[0] == t[1]) {
      if (r != EQ5) throw ContractError("rcc5_drpo_model: diagonal entry must be EQ");
      continue;
    }
    if (r != DR5 && r != PO5)
      throw ContractError("rcc5_drpo_model: off-diagonal entries must be DR or PO");
    if (r == PO5) {
      int i = idx(t[0]), j = idx(t[1]);
      std::string y = "Y" + std::to_string(std::min(i, j)) + "_" + std::to_string(std::max(i, j));
      m.regions[t[0]].insert(y);
      m.regions[t[1]].insert(y);
    }
  }
  return m;
}

namespace detail {

namespace {

struct RccEnum {
  const RccTable* t;
  std::vector<VarId> vars;  // sorted
  std::vector<std::pair<int, int>> pairs;
  std::vector<const Constraint*> leftovers;  // non-sugar: checked on leaves
  const CertSink* sink;
  ClosureState st;

  bool emit() {
    AtomicNetwork net = AtomicNetwork::on_vars(vars);
    int m = static_cast<int>(vars.size());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Mask mk = st.get(i, j);
        net.append(Tuple{vars[static_cast<std::size_t>(i)], vars[static_cast<std::size_t>(j)]},
                   static_cast<RelId>(std::countr_zero(mk)));
      }
    for (const Constraint* c : leftovers)
      if (!implies(net, *c)) return true;  // skip, keep enumerating
    return (*sink)(net);
  }

  bool refine(std::size_t p) {
    if (p == pairs.size()) return emit();
    auto [i, j] = pairs[p];
    Mask options = st.get(i, j);
    for (int r = 0; r < t->n; ++r) {
      if (!(options & bit(r))) continue;
      std::vector<Mask> saved = st.mat;
      std::deque<std::pair<int, int>> queue;
      if (st.restrict_pair(i, j, bit(r), queue) && st.close(std::move(queue))) {
        if (!refine(p + 1)) return false;
      }
      st.mat = std::move(saved);
    }
    return true;
  }
};

}  // namespace

bool rcc_enumerate(ActiveConstraints cons, std::span<const VarId> vars, const CertSink& sink,
                   bool rcc8) {
  const RccTable& t = rcc_table(rcc8 ? RccVariant::Rcc8 : RccVariant::Rcc5);
  RccEnum e;
  e.t = &t;
  e.vars.assign(vars.begin(), vars.end());
  std::sort(e.vars.begin(), e.vars.end());
  e.sink = &sink;
  int m = static_cast<int>(e.vars.size());
  e.st.t = &t;
  e.st.init(m);
  auto idx = [&](VarId v) {
    return static_cast<int>(std::lower_bound(e.vars.begin(), e.vars.end(), v) - e.vars.begin());
  };

  std::deque<std::pair<int, int>> queue;
  for (const Constraint* c : cons) {
    bool seeded = false;
    if (c->sugar && c->scope.size() == 2) {
      int i = idx(c->scope[0]), j = idx(c->scope[1]);
      Mask allowed = 0;
      for (RelId r : c->sugar_rels) allowed |= bit(r);
      if (i == j) {
        if (!(allowed & bit(t.eq))) return true;  // no certificate can satisfy it
        seeded = true;
      } else {
        if (!e.st.restrict_pair(i, j, allowed, queue)) return true;
        seeded = true;
      }
    }
    if (!seeded) e.leftovers.push_back(c);
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      e.pairs.push_back({i, j});
      queue.push_back({i, j});
    }
  if (!e.st.close(std::move(queue))) return true;
  return e.refine(0);
}

const Calculus& rcc_calculus(bool rcc8) {
  static const Calculus c8 = [] {
    Calculus c;
    c.name = "rcc8";
    const RccTable& t = rcc_table(RccVariant::Rcc8);
    for (RelId i = 0; i < t.n; ++i)
      c.relations.push_back({i, t.names[static_cast<std::size_t>(i)], 2, i == t.eq});
    c.arities = {2};
    c.decide = [](const AtomicNetwork& n) { return rcc_decide(n, RccVariant::Rcc8); };
    c.enumerate = [](std::span<const Constraint* const> cons, std::span<const VarId> vars,
                     const CertSink& sink) { return rcc_enumerate(cons, vars, sink, true); };
    c.finalize();
    return c;
  }();
  static const Calculus c5 = [] {
    Calculus c;
    c.name = "rcc5";
    const RccTable& t = rcc_table(RccVariant::Rcc5);
    for (RelId i = 0; i < t.n; ++i)
      c.relations.push_back({i, t.names[static_cast<std::size_t>(i)], 2, i == t.eq});
    c.arities = {2};
    c.decide = [](const AtomicNetwork& n) { return rcc_decide(n, RccVariant::Rcc5); };
    c.enumerate = [](std::span<const Constraint* const> cons, std::span<const VarId> vars,
                     const CertSink& sink) { return rcc_enumerate(cons, vars, sink, false); };
    c.finalize();
    return c;
  }();
  return rcc8 ? c8 : c5;
}

}  // namespace detail

bool rcc_certificates_by_refinement(const Instance& inst, std::span<const VarId> vars,
                                    const CertSink& sink, RccVariant variant) {
  auto active = detail::active_constraints(inst, vars);
  return detail::rcc_enumerate(active, vars, sink, variant == RccVariant::Rcc8);
}

}  // namespace qcsp
