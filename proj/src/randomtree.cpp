#include "forcelab/randomtree.hpp"

#include <algorithm>

namespace forcelab::randomtree {

RandomCondition::RandomCondition(unsigned depth, std::set<std::string> words)
    : depth_(depth), words_(std::move(words)) {
  require(!words_.empty(), "random condition needs at least one word");
  for (const auto& w : words_) {
    require(w.size() == depth_, "word '" + w + "' has the wrong length");
    require(w.find_first_not_of("01") == std::string::npos, "word '" + w + "' is not binary");
  }
}

std::string RandomCondition::stem() const {
  const std::string& first = *words_.begin();
  const std::string& last = *words_.rbegin();
  // In sorted order the common prefix of all words is that of the extremes.
  std::size_t n = 0;
  while (n < first.size() && first[n] == last[n]) ++n;
  return first.substr(0, n);
}

RandomCondition RandomCondition::refined_to(unsigned depth) const {
  require(depth >= depth_, "cannot coarsen a random condition");
  std::set<std::string> out = words_;
  for (unsigned d = depth_; d < depth; ++d) {
    std::set<std::string> next;
    for (const auto& w : out) {
      next.insert(w + "0");
      next.insert(w + "1");
    }
    out = std::move(next);
  }
  return RandomCondition(depth, std::move(out));
}

RandomCondition full(unsigned depth) {
  std::set<std::string> words{""};
  return RandomCondition(0, words).refined_to(depth);
}

Rational leb(const RandomCondition& c) {
  Rational r(Natural(static_cast<unsigned long>(c.words().size())),
             forcelab::pow(Natural(2), c.depth()));
  r.canonicalize();
  return r;
}

Rational stem_leb(const RandomCondition& c) {
  Rational r(1, forcelab::pow(Natural(2), c.stem().size()));
  r.canonicalize();
  return r;
}

Rational loss_random(const RandomCondition& c) {
  const Rational ratio = leb(c) / stem_leb(c);
  if (ratio == 1) return 0;
  // Largest m with ratio > 1 - 1/m, i.e. m < 1/(1 - ratio).
  Rational bound = 1 / (1 - ratio);
  Natural m = bound.get_num() / bound.get_den();
  if (Rational(m) == bound) --m;
  return Rational(1, m);
}

std::optional<RandomCondition> intersect(const RandomCondition& a, const RandomCondition& b) {
  const unsigned d = std::max(a.depth(), b.depth());
  RandomCondition x = a.refined_to(d), y = b.refined_to(d);
  std::set<std::string> common;
  std::set_intersection(x.words().begin(), x.words().end(), y.words().begin(), y.words().end(),
                        std::inserter(common, common.end()));
  if (common.empty()) return std::nullopt;
  return RandomCondition(d, std::move(common));
}

Rational creature_measure(const creature::Condition& c, unsigned depth) {
  Rational r(c.count_at(depth), c.space().level_size(0, depth));
  r.canonicalize();
  return r;
}

CreatureMeasureSet from_creature(const creature::Condition& c, unsigned depth, std::size_t cap) {
  require(depth <= c.space().height(), "depth beyond the space height");
  CreatureMeasureSet out;
  out.depth = depth;
  out.nodes = c.nodes_at(depth, cap);
  out.nodeWeight = Rational(1, c.space().level_size(0, depth));
  out.nodeWeight.canonicalize();
  out.measure = creature_measure(c, depth);
  return out;
}

std::optional<creature::Condition> common_extension(const creature::Condition& a,
                                                    const creature::Condition& b) {
  const creature::Node& deep = a.stem_height() >= b.stem_height() ? a.stem() : b.stem();
  const creature::Node& shallow = a.stem_height() >= b.stem_height() ? b.stem() : a.stem();
  if (!std::equal(shallow.begin(), shallow.end(), deep.begin())) return std::nullopt;
  if (!a.contains(deep) || !b.contains(deep)) return std::nullopt;
  const creature::Condition* both[] = {&a, &b};
  return creature::refine_at_node(both, deep);
}

}  // namespace forcelab::randomtree
