#include "forcelab/creature.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>

namespace forcelab::creature {

namespace icl = boost::icl;

namespace {

constexpr ChildIndex kIndexCap = std::numeric_limits<ChildIndex>::max();

Node prefix(const Node& t, std::size_t n) { return Node(t.begin(), t.begin() + n); }

bool is_prefix(const Node& p, const Node& t) {
  return p.size() <= t.size() && std::equal(p.begin(), p.end(), t.begin());
}

Node child(const Node& t, ChildIndex c) {
  Node out = t;
  out.push_back(c);
  return out;
}

IndexSet clip(const IndexSet& s, ChildIndex limit) { return s & index_range(0, limit); }

static_assert(sizeof(unsigned long) == sizeof(ChildIndex));
Natural nat(ChildIndex v) { return Natural(static_cast<unsigned long>(v)); }

// Interval bounds as a half-open range, whatever closedness icl chose.
template <class Iv>
ChildIndex lo_of(const Iv& iv) { return icl::first(iv); }
template <class Iv>
ChildIndex hi_of(const Iv& iv) { return icl::last(iv) + 1; }

}  // namespace

IndexSet index_range(ChildIndex lo, ChildIndex hi) {
  IndexSet s;
  if (lo < hi) s.add(icl::interval<ChildIndex>::right_open(lo, hi));
  return s;
}

IndexSet index_set(std::initializer_list<ChildIndex> elems) {
  IndexSet s;
  for (ChildIndex e : elems) s.add(e);
  return s;
}

Natural cardinality(const IndexSet& s) {
  Natural n = 0;
  for (const auto& iv : s) n += nat(hi_of(iv) - lo_of(iv));
  return n;
}

ChildIndex least_outside(const IndexSet& s) {
  if (s.empty() || lo_of(*s.begin()) > 0) return 0;
  return hi_of(*s.begin());
}

// ---------------------------------------------------------------------------
// Space

CreatureSpace::CreatureSpace(std::vector<Natural> succCount, std::vector<Natural> base)
    : succ_(std::move(succCount)), base_(std::move(base)) {
  require(succ_.size() == base_.size(), "succCount and base lengths differ");
  for (const auto& m : succ_) require(m >= 2, "every succCount entry must be >= 2");
  for (const auto& a : base_) require(a >= 2, "every base entry must be >= 2");
}

bool CreatureSpace::edValid(unsigned h) const { return base(h) > forcelab::pow(Natural(2), h); }

bool CreatureSpace::intersectValid(unsigned h, unsigned long j) const {
  return base(h) > forcelab::pow(Natural(j), h);
}

bool CreatureSpace::fubiniValid(unsigned h) const {
  return base(h) > forcelab::pow(Natural(h), 2UL * h);
}

bool CreatureSpace::countValid(unsigned h) const {
  return base(h) > Natural(h) * Natural(h);
}

Natural CreatureSpace::level_size(unsigned from, unsigned to) const {
  Natural n = 1;
  for (unsigned i = from; i < to; ++i) n *= succ_.at(i);
  return n;
}

ChildIndex CreatureSpace::index_limit(unsigned h) const {
  const Natural& m = succ_.at(h);
  if (m >= nat(kIndexCap)) return kIndexCap;
  return static_cast<ChildIndex>(m.get_ui());
}

bool CreatureSpace::valid_node(const Node& n) const {
  if (n.size() > height()) return false;
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n[i] >= index_limit(static_cast<unsigned>(i))) return false;
  return true;
}

SpacePtr make_space(std::vector<Natural> succCount, std::vector<Natural> base) {
  return std::make_shared<const CreatureSpace>(std::move(succCount), std::move(base));
}

// ---------------------------------------------------------------------------
// Norms

bool norm_cmp(const Natural& bigM, const Natural& base, const Natural& n,
              const Rational& threshold, bool strict) {
  require(n >= 0 && n <= bigM, "norm_cmp needs 0 <= n <= M");
  require(base >= 2, "norm base must be >= 2");
  if (n == bigM) return true;  // infinite norm
  Rational t(threshold);
  t.canonicalize();
  const Natural& p = t.get_num();
  const Natural& q = t.get_den();
  if (p < 0) return true;
  if (p == 0) return strict ? n > 0 : true;
  require(p.fits_ulong_p() && q.fits_ulong_p(), "threshold too large for exact comparison");
  // mu >= p/q  <=>  M^q >= base^p (M - n)^q
  Natural lhs = forcelab::pow(bigM, q.get_ui());
  Natural rhs = forcelab::pow(base, p.get_ui()) * forcelab::pow(Natural(bigM - n), q.get_ui());
  return strict ? lhs > rhs : lhs >= rhs;
}

Natural least_count_with_norm(const Natural& bigM, const Natural& base,
                              const Rational& threshold, bool strict) {
  Natural lo = 0, hi = bigM;  // norm at bigM is infinite, so hi always qualifies
  while (lo < hi) {
    Natural mid = (lo + hi) / 2;
    if (norm_cmp(bigM, base, mid, threshold, strict))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Condition

Condition Condition::full(SpacePtr space) { return make(std::move(space), {}, {}, {}); }

Condition Condition::make(SpacePtr space, Node stem, std::map<unsigned, IndexSet> levelOmitted,
                          Omissions nodeOmitted) {
  require(space != nullptr, "condition needs a space");
  require(space->height() >= 1, "space height must be >= 1");
  require(space->valid_node(stem), "stem is not a node of the space");
  Condition c;
  c.space_ = std::move(space);
  c.stem_ = std::move(stem);
  for (auto& [h, s] : levelOmitted) {
    require(h < c.space_->height(), "level omission beyond the space height");
    c.level_[h] = std::move(s);
  }
  for (auto& [t, s] : nodeOmitted) {
    require(t.size() < c.space_->height() && c.space_->valid_node(t),
            "node omission key is not an inner node");
    require(is_prefix(c.stem_, t), "node omission key does not extend the stem");
    c.nodes_[t] |= s;
  }
  c.canonicalize();
  return c;
}

void Condition::canonicalize() {
  const CreatureSpace& sp = *space_;
  for (auto it = level_.begin(); it != level_.end();) {
    it->second = clip(it->second, sp.index_limit(it->first));
    it = it->second.empty() ? level_.erase(it) : std::next(it);
  }
  for (auto it = nodes_.begin(); it != nodes_.end();) {
    it->second = clip(it->second, sp.index_limit(static_cast<unsigned>(it->first.size())));
    it = it->second.empty() ? nodes_.erase(it) : std::next(it);
  }
  // Slide the stem down single-successor nodes.
  while (stem_.size() < sp.height()) {
    const unsigned h = static_cast<unsigned>(stem_.size());
    IndexSet om = omitted_at(stem_);
    Natural kept = sp.succCount(h) - cardinality(om);
    require(kept > 0, "empty successor set at the stem", Errc::would_empty);
    if (kept != 1) break;
    nodes_.erase(stem_);
    stem_.push_back(least_outside(om));
  }
  for (auto it = level_.begin(); it != level_.end();)
    it = it->first < stem_.size() ? level_.erase(it) : std::next(it);
  // Drop keys that lost their node, or that only repeat the level omissions.
  special_.clear();
  for (auto it = nodes_.begin(); it != nodes_.end();) {
    if (!is_prefix(stem_, it->first) || !contains(it->first)) {
      it = nodes_.erase(it);
      continue;
    }
    if (auto lv = level_.find(static_cast<unsigned>(it->first.size())); lv != level_.end())
      it->second -= lv->second;
    it = it->second.empty() ? nodes_.erase(it) : std::next(it);
  }
  for (const auto& [t, s] : nodes_) {
    const unsigned h = static_cast<unsigned>(t.size());
    require(sp.succCount(h) > cardinality(omitted_at(t)), "empty successor set",
            Errc::would_empty);
    for (std::size_t n = stem_.size(); n <= t.size(); ++n) special_.push_back(prefix(t, n));
  }
  for (const auto& [h, s] : level_)
    require(sp.succCount(h) > cardinality(s), "level omission empties a level", Errc::would_empty);
  std::sort(special_.begin(), special_.end());
  special_.erase(std::unique(special_.begin(), special_.end()), special_.end());
}

Condition Condition::from_nodes(SpacePtr space, const std::vector<Node>& kept) {
  require(space != nullptr, "condition needs a space");
  const CreatureSpace& sp = *space;
  std::set<Node> all(kept.begin(), kept.end());
  require(all.count(Node{}) == 1, "node list must contain the root");
  std::map<Node, std::vector<ChildIndex>> children;
  for (const Node& t : all) {
    require(sp.valid_node(t), "node outside the space");
    if (!t.empty()) {
      Node parent = prefix(t, t.size() - 1);
      require(all.count(parent) == 1, "node list is not downward closed");
      children[parent].push_back(t.back());
    }
  }
  Node stem;
  for (;;) {
    if (stem.size() == sp.height()) break;
    auto it = children.find(stem);
    require(it != children.end(), "inner node without successors", Errc::would_empty);
    if (it->second.size() != 1) break;
    stem.push_back(it->second.front());
  }
  Omissions om;
  for (const Node& t : all) {
    if (t.size() >= sp.height() || !is_prefix(stem, t)) continue;
    auto it = children.find(t);
    require(it != children.end(), "inner node without successors", Errc::would_empty);
    const unsigned h = static_cast<unsigned>(t.size());
    require(sp.succCount(h) < nat(kIndexCap),
            "explicit node lists need narrow levels", Errc::enumeration_infeasible);
    IndexSet missing = index_range(0, sp.index_limit(h));
    for (ChildIndex c : it->second) missing.subtract(c);
    if (!missing.empty()) om[t] = missing;
  }
  return make(std::move(space), stem, {}, std::move(om));
}

IndexSet Condition::omitted_at(const Node& t) const {
  IndexSet out;
  if (auto lv = level_.find(static_cast<unsigned>(t.size())); lv != level_.end()) out = lv->second;
  if (auto it = nodes_.find(t); it != nodes_.end()) out |= it->second;
  return out;
}

Natural Condition::kept_successor_count(const Node& t) const {
  const unsigned h = static_cast<unsigned>(t.size());
  require(h < space_->height(), "leaves have no successors");
  if (h < stem_.size()) return 1;
  return space_->succCount(h) - cardinality(omitted_at(t));
}

bool Condition::keeps_child(const Node& t, ChildIndex c) const {
  const std::size_t h = t.size();
  if (h >= space_->height() || c >= space_->index_limit(static_cast<unsigned>(h))) return false;
  if (h < stem_.size()) return c == stem_[h];
  return !icl::contains(omitted_at(t), c);
}

bool Condition::contains(const Node& t) const {
  if (!space_->valid_node(t)) return false;
  Node cur;
  for (ChildIndex c : t) {
    if (!keeps_child(cur, c)) return false;
    cur.push_back(c);
  }
  return true;
}

bool Condition::is_special(const Node& t) const {
  return std::binary_search(special_.begin(), special_.end(), t);
}

Natural Condition::count_at(unsigned h) const {
  Natural n = 0;
  for (const auto& cls : node_classes(*this, {}, h)) n += cls.multiplicity;
  return n;
}

std::vector<Node> Condition::nodes_at(unsigned h, std::size_t cap) const {
  require(h <= space_->height(), "height beyond the space");
  require(count_at(h) <= Natural(static_cast<unsigned long>(cap)), "too many nodes to list",
          Errc::enumeration_infeasible);
  std::vector<Node> out;
  std::function<void(const Node&)> walk = [&](const Node& t) {
    if (t.size() == h) {
      out.push_back(t);
      return;
    }
    if (t.size() < stem_.size()) {
      walk(child(t, stem_[t.size()]));
      return;
    }
    const unsigned lvl = static_cast<unsigned>(t.size());
    IndexSet kept = index_range(0, space_->index_limit(lvl)) - omitted_at(t);
    for (const auto& iv : kept)
      for (ChildIndex c = lo_of(iv); c < hi_of(iv); ++c) walk(child(t, c));
  };
  walk(Node{});
  return out;
}

std::vector<Node> Condition::all_nodes(std::size_t cap) const {
  std::vector<Node> out;
  for (unsigned h = 0; h <= space_->height(); ++h) {
    auto level = nodes_at(h, cap);
    out.insert(out.end(), level.begin(), level.end());
    require(out.size() <= cap, "too many nodes to list", Errc::enumeration_infeasible);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Condition::refines(const Condition& p) const {
  require(space_->height() == p.space_->height(), "conditions on different spaces");
  const Condition* others[] = {&p};
  for (const auto& cls : node_classes(*this, others, space_->height()))
    if (!p.contains(cls.node)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Node classes

std::vector<NodeClass> node_classes(const Condition& base,
                                    std::span<const Condition* const> others, unsigned h,
                                    std::size_t cap) {
  const CreatureSpace& sp = base.space();
  require(h <= sp.height(), "height beyond the space");
  std::vector<const Condition*> all{&base};
  all.insert(all.end(), others.begin(), others.end());
  std::vector<NodeClass> out;

  std::function<void(const Node&, const Natural&, const std::vector<char>&)> visit =
      [&](const Node& s, const Natural& mult, const std::vector<char>& in) {
        if (s.size() == h) {
          out.push_back({s, mult});
          require(out.size() <= cap, "too many node classes", Errc::enumeration_infeasible);
          return;
        }
        const unsigned lvl = static_cast<unsigned>(s.size());
        const ChildIndex limit = sp.index_limit(lvl);
        std::set<ChildIndex> singles;
        std::set<ChildIndex> cuts{0};
        for (std::size_t j = 0; j < all.size(); ++j) {
          if (!in[j]) continue;
          const Condition& c = *all[j];
          if (lvl < c.stem_height()) {
            ChildIndex k = c.stem()[lvl];
            singles.insert(k);
            cuts.insert(k);
            if (k + 1 < limit) cuts.insert(k + 1);
            continue;
          }
          for (const auto& iv : c.omitted_at(s)) {
            cuts.insert(lo_of(iv));
            if (hi_of(iv) < limit) cuts.insert(hi_of(iv));
          }
          // Special children are the ones whose subtrees carry their own omissions.
          const auto& om = c.node_omissions();
          for (auto it = om.lower_bound(s); it != om.end() && is_prefix(s, it->first); ++it)
            if (it->first.size() > s.size()) singles.insert(it->first[s.size()]);
        }
        auto membership = [&](ChildIndex k) {
          std::vector<char> m(all.size(), 0);
          for (std::size_t j = 0; j < all.size(); ++j) m[j] = in[j] && all[j]->keeps_child(s, k);
          return m;
        };
        std::vector<ChildIndex> cutv(cuts.begin(), cuts.end());
        const Natural succ = sp.succCount(lvl);
        for (std::size_t i = 0; i < cutv.size(); ++i) {
          ChildIndex lo = cutv[i];
          Natural hiN = i + 1 < cutv.size() ? nat(cutv[i + 1]) : succ;
          Natural size = hiN - nat(lo);
          ChildIndex rep = lo;
          Natural count = size;
          for (auto it = singles.lower_bound(lo);
               it != singles.end() && nat(*it) < hiN; ++it) {
            --count;
            if (*it == rep) ++rep;
          }
          if (count <= 0) continue;
          auto m = membership(rep);
          if (!m[0]) continue;
          visit(child(s, rep), mult * count, m);
        }
        for (ChildIndex k : singles) {
          if (k >= limit) continue;
          auto m = membership(k);
          if (m[0]) visit(child(s, k), mult, m);
        }
      };
  visit(Node{}, Natural(1), std::vector<char>(all.size(), 1));
  return out;
}

// ---------------------------------------------------------------------------
// Norm predicates, loss

bool norms_at_least(const Condition& c, const Rational& threshold, bool strict, unsigned from) {
  const CreatureSpace& sp = c.space();
  const unsigned start = std::max(from, c.stem_height());
  for (const auto& [h, s] : c.level_omissions()) {
    if (h < start) continue;
    if (!norm_cmp(sp.succCount(h), sp.base(h), sp.succCount(h) - cardinality(s), threshold,
                  strict))
      return false;
  }
  for (const auto& [t, s] : c.node_omissions()) {
    const unsigned h = static_cast<unsigned>(t.size());
    if (h < start) continue;
    if (!norm_cmp(sp.succCount(h), sp.base(h), c.kept_successor_count(t), threshold, strict))
      return false;
  }
  return true;
}

bool is_condition(const Condition& c) {
  const unsigned hs = c.stem_height();
  if (hs == c.space().height()) return true;  // a single branch
  if (hs == 0) return c.level_omissions().empty() && c.node_omissions().empty();
  return norms_at_least(c, Rational(hs + 1, hs), false, hs);
}

std::optional<Rational> loss(const Condition& c) {
  const unsigned hs = c.stem_height();
  if (hs < 7) return std::nullopt;
  // Larger m only weakens the norm requirement, so the largest m with
  // hs > 3m decides.
  const unsigned m = (hs - 1) / 3;
  if (!norms_at_least(c, Rational(m + 1, m), false, hs)) return std::nullopt;
  return Rational(1, m);
}

// ---------------------------------------------------------------------------
// Intersections with pruning

namespace {

// Threshold applied from a given height upward; `infinite` demands full sets.
struct PruneRule {
  unsigned from = 0;
  bool infinite = false;
  Rational threshold;
};

struct Pruned {
  std::map<unsigned, IndexSet> level;
  Condition::Omissions nodes;
  bool anchorAlive = false;
};

Pruned intersect_and_prune(const CreatureSpace& sp, std::span<const Condition* const> conds,
                           const Node& x, const PruneRule& rule) {
  const unsigned H = sp.height();
  const unsigned hx = static_cast<unsigned>(x.size());
  Pruned out;
  for (const Condition* c : conds) {
    for (const auto& [h, s] : c->level_omissions())
      if (h >= hx) out.level[h] |= s;
    for (const auto& [t, s] : c->node_omissions())
      if (is_prefix(x, t)) out.nodes[t] |= s;
  }
  auto norm_ok = [&](unsigned h, const Natural& kept) {
    if (kept <= 0) return false;
    if (h < rule.from) return true;
    if (rule.infinite) return kept == sp.succCount(h);
    return norm_cmp(sp.succCount(h), sp.base(h), kept, rule.threshold, false);
  };
  auto level_set = [&](unsigned h) {
    auto it = out.level.find(h);
    return it == out.level.end() ? IndexSet{} : it->second;
  };
  // genericAlive[h]: a node of height h with no own omissions below it survives.
  std::vector<char> genericAlive(H + 1, 1);
  for (unsigned h = H; h-- > hx;) {
    Natural kept = sp.succCount(h) - cardinality(level_set(h));
    genericAlive[h] = genericAlive[h + 1] && norm_ok(h, kept);
  }
  std::set<Node> special;
  for (const auto& [t, s] : out.nodes)
    for (std::size_t n = hx; n <= t.size(); ++n) special.insert(prefix(t, n));
  std::vector<Node> order(special.begin(), special.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const Node& a, const Node& b) { return a.size() > b.size(); });
  std::map<Node, bool> alive;
  for (const Node& t : order) {
    const unsigned h = static_cast<unsigned>(t.size());
    IndexSet om = level_set(h);
    if (auto it = out.nodes.find(t); it != out.nodes.end()) om |= it->second;
    IndexSet dead;
    std::vector<ChildIndex> liveSpecial;
    for (auto it = special.upper_bound(t); it != special.end() && is_prefix(t, *it); ++it) {
      if (it->size() != t.size() + 1) continue;
      ChildIndex c = it->back();
      if (icl::contains(om, c)) continue;
      if (alive.at(*it))
        liveSpecial.push_back(c);
      else
        dead.add(c);
    }
    if (!genericAlive[h + 1]) {
      require(sp.succCount(h) < nat(kIndexCap),
              "pruning would need an unbounded complement", Errc::capacity);
      IndexSet rest = index_range(0, sp.index_limit(h));
      for (ChildIndex c : liveSpecial) rest.subtract(c);
      dead |= rest;
    }
    om |= dead;
    if (!dead.empty()) out.nodes[t] |= dead;
    alive[t] = norm_ok(h, sp.succCount(h) - cardinality(om));
  }
  auto it = alive.find(x);
  out.anchorAlive = it != alive.end() ? it->second : genericAlive[hx] != 0;
  return out;
}

// Least kept child of t in the pruned structure.
ChildIndex least_child(const Pruned& p, const Node& t) {
  IndexSet om;
  if (auto it = p.level.find(static_cast<unsigned>(t.size())); it != p.level.end()) om = it->second;
  if (auto it = p.nodes.find(t); it != p.nodes.end()) om |= it->second;
  return least_outside(om);
}

Condition build_from(const SpacePtr& space, const Pruned& p, const Node& stem) {
  std::map<unsigned, IndexSet> level;
  for (const auto& [h, s] : p.level)
    if (h >= stem.size()) level[h] = s;
  Condition::Omissions nodes;
  for (const auto& [t, s] : p.nodes)
    if (is_prefix(stem, t)) nodes[t] = s;
  return Condition::make(space, stem, std::move(level), std::move(nodes));
}

void check_common(std::span<const Condition* const> conds, const Node& x) {
  require(!conds.empty(), "no conditions given");
  for (const Condition* c : conds) {
    require(c->space().height() == conds.front()->space().height(), "conditions on different spaces");
    require(c->contains(x) && is_prefix(c->stem(), x),
            "witness is not a common node at or above every stem", Errc::witness_not_common);
  }
}

}  // namespace

std::optional<Condition> common_refinement(std::span<const Condition> conds, const Node& witness) {
  std::vector<const Condition*> ptrs;
  for (const auto& c : conds) ptrs.push_back(&c);
  check_common(ptrs, witness);
  const CreatureSpace& sp = conds.front().space();
  const unsigned h = static_cast<unsigned>(witness.size());
  require(sp.height() >= 2 * h, "space height must be at least twice the witness height");
  PruneRule rule;
  rule.from = 2 * h;
  if (h == 0)
    rule.infinite = true;
  else
    rule.threshold = Rational(2 * h + 1, 2 * h);
  Pruned p = intersect_and_prune(sp, ptrs, witness, rule);
  if (!p.anchorAlive) return std::nullopt;
  Node x = witness;
  while (x.size() < 2 * h) x.push_back(least_child(p, x));
  return build_from(conds.front().space_ptr(), p, x);
}

std::optional<Condition> refine_at_node(std::span<const Condition* const> conds, const Node& x) {
  check_common(conds, x);
  const CreatureSpace& sp = conds.front()->space();
  const unsigned H = sp.height();
  for (unsigned k = static_cast<unsigned>(x.size()); k <= H; ++k) {
    PruneRule rule;
    rule.from = k;
    if (k == 0)
      rule.infinite = true;
    else
      rule.threshold = Rational(k + 1, k);
    Pruned p = intersect_and_prune(sp, conds, x, rule);
    if (!p.anchorAlive) continue;
    Node y = x;
    while (y.size() < k) y.push_back(least_child(p, y));
    Condition out = build_from(conds.front()->space_ptr(), p, y);
    if (is_condition(out)) return out;
  }
  return std::nullopt;
}

std::optional<Condition> linked_refinement(std::span<const Condition> conds) {
  require(!conds.empty(), "no conditions given");
  std::vector<const Condition*> ptrs;
  unsigned from = 0;
  for (const auto& c : conds) {
    ptrs.push_back(&c);
    from = std::max(from, c.stem_height());
  }
  const unsigned H = conds.front().space().height();
  std::span<const Condition* const> others(ptrs.data() + 1, ptrs.size() - 1);
  for (unsigned h = from; h <= H; ++h) {
    for (const auto& cls : node_classes(conds.front(), others, h)) {
      bool common = true;
      for (const Condition* c : ptrs)
        if (!c->contains(cls.node) || !is_prefix(c->stem(), cls.node)) { common = false; break; }
      if (!common) continue;
      if (auto r = refine_at_node(ptrs, cls.node)) return r;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Level avoidance, counting

Condition avoid_level(const Condition& c, unsigned h, ChildIndex value) {
  const CreatureSpace& sp = c.space();
  require(h < sp.height(), "level must be an inner level");
  require(h >= c.stem_height(), "level must be at or above the stem");
  if (value >= sp.index_limit(h)) return c;
  auto level = c.level_omissions();
  IndexSet& lv = level[h];
  if (icl::contains(lv, value)) return c;
  if (sp.succCount(h) - cardinality(lv) == 1 && least_outside(lv) == value)
    throw Error(Errc::would_empty, "value is the only successor at level " + std::to_string(h));
  for (const auto& [t, s] : c.node_omissions()) {
    if (t.size() != h || !c.keeps_child(t, value)) continue;
    if (c.kept_successor_count(t) == 1)
      throw Error(Errc::would_empty, "value is the only successor of a node");
  }
  lv.add(value);
  return Condition::make(c.space_ptr(), c.stem(), std::move(level), c.node_omissions());
}

Rational relative_count(const Condition& c, unsigned h) {
  require(h > c.stem_height(), "relative_count needs h above the stem");
  require(h <= c.space().height(), "height beyond the space");
  Rational r(c.count_at(h), c.space().level_size(c.stem_height(), h));
  r.canonicalize();
  return r;
}

ChildSet weighted_success_set(const CreatureSpace& space, const Node& s,
                              std::span<const std::pair<ChildSet, Rational>> sets, unsigned h) {
  require(h >= 1, "weighted_success_set needs h >= 1");
  require(s.size() < space.height() && space.valid_node(s), "s must be an inner node");
  Rational total = 0;
  for (const auto& [set, w] : sets) {
    require(w >= 0, "weights must be nonnegative");
    total += w;
  }
  if (total != 1) throw Error(Errc::weight_sum, "weights sum to " + to_string(total));
  const unsigned lvl = static_cast<unsigned>(s.size());
  const ChildIndex limit = space.index_limit(lvl);
  const Rational bar = 1 - Rational(1, static_cast<unsigned long>(h) * h);
  std::set<ChildIndex> cuts{0};
  for (const auto& [set, w] : sets)
    for (const auto& iv : clip(set.omitted, limit)) {
      cuts.insert(lo_of(iv));
      if (hi_of(iv) < limit) cuts.insert(hi_of(iv));
    }
  ChildSet out;
  std::vector<ChildIndex> cutv(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i < cutv.size(); ++i) {
    ChildIndex lo = cutv[i];
    Rational mass = 0;
    for (const auto& [set, w] : sets)
      if (!icl::contains(set.omitted, lo)) mass += w;
    if (mass > bar) continue;
    ChildIndex hi = i + 1 < cutv.size() ? cutv[i + 1] : limit;
    out.omitted += index_range(lo, hi);
  }
  return out;
}

std::vector<Node> linked_family(const CreatureSpace& space, unsigned h, std::size_t cap) {
  require(h < space.height(), "linked_family needs h below the space height");
  require(space.level_size(0, h) <= Natural(static_cast<unsigned long>(cap)), "level too large to list",
          Errc::enumeration_infeasible);
  std::vector<Node> out{Node{}};
  for (unsigned lvl = 0; lvl < h; ++lvl) {
    std::vector<Node> next;
    for (const Node& t : out)
      for (ChildIndex c = 0; c < space.index_limit(lvl); ++c) next.push_back(child(t, c));
    out = std::move(next);
  }
  return out;
}

bool linked_member(const Condition& c, const Node& s) {
  return c.stem_height() <= s.size() && c.contains(s);
}

}  // namespace forcelab::creature
