#include "forcelab/famlimit.hpp"

#include <algorithm>
#include <functional>

#include "forcelab/fam.hpp"

namespace forcelab::famlimit {

namespace icl = boost::icl;
using creature::ChildIndex;
using creature::IndexSet;

namespace {

bool is_prefix(const Node& p, const Node& t) {
  return p.size() <= t.size() && std::equal(p.begin(), p.end(), t.begin());
}

Node child(const Node& t, ChildIndex c) {
  Node out = t;
  out.push_back(c);
  return out;
}

Natural nat(std::uint64_t v) { return Natural(static_cast<unsigned long>(v)); }

// Omitted children of s in c, counting the stem chain as one kept child.
IndexSet effective_omitted(const Condition& c, const Node& s) {
  const unsigned h = static_cast<unsigned>(s.size());
  const ChildIndex limit = c.space().index_limit(h);
  if (h < c.stem_height()) {
    IndexSet all = creature::index_range(0, limit);
    all.subtract(c.stem()[h]);
    return all;
  }
  return c.omitted_at(s) & creature::index_range(0, limit);
}

// Union of the segments cut by `sets` on which `omit(rep)` holds.
IndexSet omit_segments(ChildIndex limit, const std::vector<IndexSet>& sets,
                       const std::function<bool(ChildIndex)>& omit) {
  std::set<ChildIndex> cuts{0};
  for (const auto& s : sets)
    for (const auto& iv : s) {
      cuts.insert(icl::first(iv));
      if (icl::last(iv) + 1 < limit) cuts.insert(icl::last(iv) + 1);
    }
  IndexSet out;
  std::vector<ChildIndex> cv(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i < cv.size(); ++i) {
    if (cv[i] >= limit) break;
    ChildIndex hi = i + 1 < cv.size() ? cv[i + 1] : limit;
    if (omit(cv[i])) out += creature::index_range(cv[i], hi);
  }
  return out;
}

using Decide = std::function<IndexSet(const Node& s, const std::vector<char>& in,
                                      const std::vector<IndexSet>& omitted)>;

// Builds the tree above `root` whose successor set at each node is decided
// from the inputs containing that node. Nodes are walked by classes on which
// all inputs agree; a class of several nodes must get the level default.
Condition vote_tree(const creature::SpacePtr& space, const std::vector<const Condition*>& conds,
                    const Node& root, const Decide& decide, std::size_t cap = 1u << 20) {
  const creature::CreatureSpace& sp = *space;
  const unsigned H = sp.height();
  struct Entry {
    Node node;
    Natural mult;
    IndexSet omitted;
  };
  std::map<unsigned, std::vector<Entry>> entries;
  std::size_t total = 0;

  std::function<void(const Node&, const Natural&, const std::vector<char>&)> visit =
      [&](const Node& s, const Natural& mult, const std::vector<char>& in) {
        const unsigned h = static_cast<unsigned>(s.size());
        if (h == H) return;
        const ChildIndex limit = sp.index_limit(h);
        std::vector<IndexSet> om(conds.size());
        for (std::size_t j = 0; j < conds.size(); ++j)
          if (in[j]) om[j] = effective_omitted(*conds[j], s);
        IndexSet mine = decide(s, in, om) & creature::index_range(0, limit);
        require(sp.succCount(h) > creature::cardinality(mine),
                "no successor survives at a kept node", Errc::empty_level);
        require(++total <= cap, "too many node classes", Errc::enumeration_infeasible);
        entries[h].push_back({s, mult, mine});

        std::set<ChildIndex> singles;
        std::vector<IndexSet> cutSets = om;
        cutSets.push_back(mine);
        for (std::size_t j = 0; j < conds.size(); ++j) {
          if (!in[j]) continue;
          const Condition& c = *conds[j];
          if (h < c.stem_height()) {
            singles.insert(c.stem()[h]);
            continue;
          }
          const auto& nom = c.node_omissions();
          for (auto it = nom.lower_bound(s); it != nom.end() && is_prefix(s, it->first); ++it)
            if (it->first.size() > s.size()) singles.insert(it->first[h]);
        }
        for (ChildIndex k : singles)
          if (k < limit) {
            IndexSet pt;
            pt.add(k);
            if (k + 1 < limit) pt.add(k + 1);
            cutSets.push_back(pt);
          }
        std::set<ChildIndex> cuts{0};
        for (const auto& cs : cutSets)
          for (const auto& iv : cs) {
            cuts.insert(icl::first(iv));
            if (icl::last(iv) + 1 < limit) cuts.insert(icl::last(iv) + 1);
          }
        auto membership = [&](ChildIndex k) {
          std::vector<char> m(conds.size(), 0);
          for (std::size_t j = 0; j < conds.size(); ++j) m[j] = in[j] && conds[j]->keeps_child(s, k);
          return m;
        };
        std::vector<ChildIndex> cv(cuts.begin(), cuts.end());
        const Natural succ = sp.succCount(h);
        for (std::size_t i = 0; i < cv.size(); ++i) {
          const ChildIndex lo = cv[i];
          if (lo >= limit || icl::contains(mine, lo)) continue;
          const Natural hiN = i + 1 < cv.size() ? nat(cv[i + 1]) : succ;
          ChildIndex rep = lo;
          Natural count = hiN - nat(lo);
          for (auto it = singles.lower_bound(lo); it != singles.end() && nat(*it) < hiN; ++it) {
            --count;
            if (*it == rep) ++rep;
          }
          if (count <= 0) continue;
          visit(child(s, rep), mult * count, membership(rep));
        }
        for (ChildIndex k : singles)
          if (k < limit && !icl::contains(mine, k)) visit(child(s, k), mult, membership(k));
      };
  std::vector<char> in(conds.size());
  for (std::size_t j = 0; j < conds.size(); ++j) in[j] = conds[j]->contains(root);
  visit(root, Natural(1), in);

  std::map<unsigned, IndexSet> level;
  Condition::Omissions nodes;
  for (const auto& [h, list] : entries) {
    IndexSet def = list.front().omitted;
    for (const auto& e : list) def &= e.omitted;
    for (const auto& e : list) {
      if (e.omitted == def) continue;
      require(e.mult == 1, "a wide node class needs its own successor set",
              Errc::representation_overflow);
      nodes[e.node] = e.omitted - def;
    }
    if (!def.empty()) level[h] = def;
  }
  return Condition::make(space, root, std::move(level), std::move(nodes));
}

Node least_branch(const Condition& c, unsigned height) {
  Node x;
  while (x.size() < height) {
    const unsigned h = static_cast<unsigned>(x.size());
    x.push_back(h < c.stem_height() ? c.stem()[h] : creature::least_outside(c.omitted_at(x)));
  }
  return x;
}

}  // namespace

Rational zeta_tilde(unsigned hStar, unsigned h) {
  require(hStar >= 2 && hStar <= h, "zeta_tilde needs 2 <= hStar <= h");
  Rational prod = 1;
  for (unsigned long m = hStar; m < h; ++m) prod *= 1 - Rational(1, m * m);
  return 1 - prod;
}

Rational zeta_tilde_closed(unsigned hStar, unsigned h) {
  require(hStar >= 2 && hStar <= h, "zeta_tilde needs 2 <= hStar <= h");
  if (h == hStar) return 0;
  Rational r = 1 - Rational(hStar - 1, hStar) * Rational(h, h - 1);
  r.canonicalize();
  return r;
}

IntervalPartition::IntervalPartition(std::vector<std::uint64_t> boundaries)
    : bounds_(std::move(boundaries)) {
  require(bounds_.size() >= 2, "a partition needs at least one interval");
  require(bounds_.front() == 0, "boundaries must start at 0");
  for (std::size_t i = 1; i < bounds_.size(); ++i)
    require(bounds_[i] > bounds_[i - 1], "boundaries must be strictly increasing");
}

IntervalPartition IntervalPartition::from_sizes(const std::vector<std::uint64_t>& sizes) {
  std::vector<std::uint64_t> b{0};
  for (auto s : sizes) b.push_back(b.back() + s);
  return IntervalPartition(std::move(b));
}

void ConditionFamily::validate() const {
  require(!members.empty(), "a family needs members");
  for (const auto& p : members) {
    require(p.stem() == stemStar, "member stem differs from the family stem");
    auto l = creature::loss(p);
    require(l.has_value() && *l == lossStar, "member loss differs from the family loss");
  }
}

const Condition& ConditionFamily::member(std::uint64_t ell) const {
  require(ell >= offset && ell - offset < members.size(),
          "family has no member " + std::to_string(ell));
  return members[ell - offset];
}

WeightVector::WeightVector(std::map<std::uint64_t, Rational> weights) : w_(std::move(weights)) {
  Rational total = 0;
  for (const auto& [k, w] : w_) {
    require(w >= 0, "weights must be nonnegative");
    total += w;
  }
  require(total == 1, "weights sum to " + to_string(total), Errc::weight_sum);
}

Rational WeightVector::weight(std::uint64_t k) const {
  auto it = w_.find(k);
  return it == w_.end() ? Rational(0) : it->second;
}

Condition build_qk(const ConditionFamily& fam, const IntervalPartition& part, std::size_t k) {
  fam.validate();
  require(k < part.count(), "interval index outside the partition");
  std::vector<const Condition*> conds;
  for (std::uint64_t ell = part.lo(k); ell < part.hi(k); ++ell) conds.push_back(&fam.member(ell));
  const auto& space = conds.front()->space_ptr();
  const unsigned hStar = static_cast<unsigned>(fam.stemStar.size());
  require(hStar >= 2, "family stem must have height >= 2");
  require(space->height() > hStar, "space height must exceed the stem height");
  const Rational size(nat(part.size(k)));

  Decide decide = [&](const Node& s, const std::vector<char>& in, const std::vector<IndexSet>& om) {
    const unsigned h = static_cast<unsigned>(s.size());
    const Rational thr = size * (1 - zeta_tilde(hStar, h + 1));
    std::vector<IndexSet> live;
    for (std::size_t j = 0; j < in.size(); ++j)
      if (in[j]) live.push_back(om[j]);
    return omit_segments(space->index_limit(h), live, [&](ChildIndex c) {
      unsigned long count = 0;
      for (const auto& o : live) count += !icl::contains(o, c);
      return Rational(count) < thr;
    });
  };
  return vote_tree(space, conds, fam.stemStar, decide);
}

std::uint64_t branch_hit_count(const Node& x, const ConditionFamily& fam,
                               const IntervalPartition& part, std::size_t k, const Condition& qk) {
  require(x.size() == qk.space().height(), "x must be a full branch");
  require(qk.contains(x), "x is not a branch of q_k", Errc::branch_not_in_qk);
  std::uint64_t n = 0;
  for (std::uint64_t ell = part.lo(k); ell < part.hi(k); ++ell) n += fam.member(ell).contains(x);
  return n;
}

std::uint64_t branch_hit_count(const Node& x, const ConditionFamily& fam,
                               const IntervalPartition& part, std::size_t k) {
  return branch_hit_count(x, fam, part, k, build_qk(fam, part, k));
}

Rational limit_weight(std::span<const std::pair<Condition, Rational>> qks, const Node& s) {
  Rational w = 0;
  for (const auto& [q, wk] : qks)
    if (q.contains(s)) w += wk;
  return w;
}

Condition weighted_limit(std::span<const std::pair<Condition, Rational>> qks) {
  require(!qks.empty(), "weighted_limit needs at least one condition");
  Rational total = 0;
  for (const auto& [q, w] : qks) {
    require(w >= 0, "weights must be nonnegative");
    total += w;
  }
  require(total == 1, "weights sum to " + to_string(total), Errc::weight_sum);
  std::vector<const Condition*> conds;
  for (const auto& [q, w] : qks) conds.push_back(&q);
  const auto& space = conds.front()->space_ptr();
  Node root = conds.front()->stem();
  for (const Condition* c : conds) {
    std::size_t n = 0;
    while (n < root.size() && n < c->stem().size() && root[n] == c->stem()[n]) ++n;
    root.resize(n);
  }
  require(!root.empty(), "weighted_limit needs a common stem of height >= 1");

  Decide decide = [&](const Node& s, const std::vector<char>& in, const std::vector<IndexSet>& om) {
    Rational zs = 0;
    for (std::size_t j = 0; j < in.size(); ++j)
      if (in[j]) zs += qks[j].second;
    require(zs > 0, "kept node carries no weight", Errc::empty_level);
    // Group equal successor sets; their weights add.
    std::vector<std::pair<creature::ChildSet, Rational>> groups;
    for (std::size_t j = 0; j < in.size(); ++j) {
      if (!in[j]) continue;
      auto it = std::find_if(groups.begin(), groups.end(),
                             [&](const auto& g) { return g.first.omitted == om[j]; });
      if (it == groups.end())
        groups.push_back({creature::ChildSet{om[j]}, qks[j].second / zs});
      else
        it->second += qks[j].second / zs;
    }
    return creature::weighted_success_set(*space, s, groups, static_cast<unsigned>(s.size()))
        .omitted;
  };
  return vote_tree(space, conds, root, decide);
}

bool norms_above_bound(const Condition& c, const Rational& loss, unsigned slack, bool strict) {
  const unsigned H = c.space().height();
  for (unsigned h = std::max(1u, c.stem_height()); h < H; ++h) {
    const Rational thr = 1 + loss - Rational(slack, h);
    if (thr <= 0) continue;
    if (!creature::norms_at_least(c, thr, strict, h)) return false;
  }
  return true;
}

bool a_qbar_contains(std::size_t k, const Node& x, const ConditionFamily& fam,
                     const IntervalPartition& part) {
  const Natural size = nat(part.size(k));
  const Natural count = nat(branch_hit_count(x, fam, part, k));
  const Natural gap = size - count;
  return Rational(gap * gap) <= Rational(size * size) * fam.lossStar;
}

std::optional<StrongLimitWitness> strong_limit_witness(
    const std::vector<ConditionFamily>& families, const std::vector<Condition>& limits,
    const Condition& q, const IntervalPartition& part, const std::vector<Block>& blocks,
    const Rational& eps, std::uint64_t kStar, std::size_t sizeCap) {
  require(families.size() == limits.size(), "one limit per family");
  require(sizeCap >= 1, "sizeCap must be positive");
  for (const auto& l : limits) require(q.refines(l), "q must refine every limit");
  const std::uint64_t K = part.count();
  const unsigned H = q.space().height();

  std::map<std::string, fam::PointSet> sets;
  std::vector<fam::AtomWeight> atoms;
  std::vector<fam::PointSet> cells;
  for (std::size_t m = 0; m < blocks.size(); ++m) {
    fam::PointSet cell(blocks[m].ks.begin(), blocks[m].ks.end());
    require(!cell.empty(), "blocks must be nonempty");
    sets["B" + std::to_string(m)] = cell;
    atoms.push_back({cell, blocks[m].weight});
    cells.push_back(cell);
  }
  require(!blocks.empty(), "at least one block is needed");
  fam::MeasureAssignment xi(K, sets, atoms);

  // q^j_k for every represented k.
  std::vector<std::vector<Condition>> qs(families.size());
  unsigned hs = std::max<unsigned>(q.stem_height(),
                                   static_cast<unsigned>(sizeCap * families.size() + 1));
  if (families.empty()) hs = q.stem_height();
  for (std::size_t j = 0; j < families.size(); ++j)
    for (std::size_t k = 0; k < K; ++k) {
      qs[j].push_back(build_qk(families[j], part, k));
      hs = std::max(hs, qs[j].back().stem_height());
    }
  require(hs <= H, "no node of q is high enough", Errc::refinement_failure);
  const Node s = least_branch(q, hs);

  std::vector<fam::AverageSequence> seqs;
  for (std::size_t j = 0; j < families.size(); ++j) {
    fam::AverageSequence seq;
    for (std::size_t k = 0; k < K; ++k) seq.a.push_back(qs[j][k].contains(s) ? 1 : 0);
    seq.b = 1 - families[j].lossStar / 3;
    seqs.push_back(std::move(seq));
  }
  auto found = fam::check_average_hypothesis(xi, cells, seqs, eps, kStar, sizeCap);
  if (!found) return std::nullopt;

  StrongLimitWitness w{found->u, q, s, {}, {}, true, true};
  if (families.empty()) return w;

  std::vector<Condition> conds{q};
  for (std::size_t j = 0; j < families.size(); ++j)
    for (auto k : w.u)
      if (qs[j][k].contains(s)) conds.push_back(qs[j][k]);
  require(H >= 2 * hs, "space too shallow to refine at the chosen node", Errc::refinement_failure);
  auto r = creature::common_refinement(conds, s);
  require(r.has_value(), "the chosen conditions have no common refinement",
          Errc::refinement_failure);
  const Node x = least_branch(*r, H);
  w.qPrime = Condition::make(q.space_ptr(), x, {}, {});

  const Rational card(nat(w.u.size()));
  for (std::size_t j = 0; j < families.size(); ++j) {
    Rational hits = 0, avg = 0;
    for (auto k : w.u) {
      hits += seqs[j].a[k];
      std::uint64_t n = 0;
      for (std::uint64_t ell = part.lo(k); ell < part.hi(k); ++ell)
        n += families[j].member(ell).contains(x);
      Rational frac(nat(n), nat(part.size(k)));
      frac.canonicalize();
      avg += frac;
    }
    w.zFrequency.push_back(hits / card);
    w.average.push_back(avg / card);
    if (w.average.back() < 1 - families[j].lossStar - eps) w.averageBullet = false;
  }
  return w;
}

}  // namespace forcelab::famlimit
