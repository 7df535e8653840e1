#include "forcelab/deltasys.hpp"

#include <algorithm>
#include <tuple>

namespace forcelab::deltasys {

std::string_view tag_name(Tag t) {
  switch (t) {
    case Tag::S0: return "S0";
    case Tag::S3: return "S3";
    case Tag::S4: return "S4";
  }
  return "?";
}

Tag parse_tag(std::string_view s) {
  if (s == "S0") return Tag::S0;
  if (s == "S3") return Tag::S3;
  if (s == "S4") return Tag::S4;
  throw Error(Errc::parse, "unknown class tag '" + std::string(s) + "'");
}

void LabeledSupport::validate() const {
  require(coords.size() == labels.size(), "one label per coordinate");
  for (std::size_t i = 1; i < coords.size(); ++i)
    require(coords[i - 1] < coords[i], "coordinates must be strictly increasing");
  for (const auto& l : labels)
    require(l.loss >= 0, "labels carry nonnegative losses");
}

namespace {

using Signature = std::vector<std::tuple<int, std::string, std::string>>;

Signature signature_of(const LabeledSupport& s) {
  Signature sig;
  for (const auto& l : s.labels) {
    if (l.tag == Tag::S0)
      sig.emplace_back(0, "", "");
    else
      sig.emplace_back(static_cast<int>(l.tag), l.token, to_string(l.loss));
  }
  return sig;
}

std::set<Coord> as_set(const LabeledSupport& s) { return {s.coords.begin(), s.coords.end()}; }

std::set<Coord> meet(const std::set<Coord>& a, const std::set<Coord>& b) {
  std::set<Coord> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

// A support with some positions already claimed by the heart.
struct Remaining {
  std::size_t index;
  std::vector<std::pair<std::size_t, Coord>> items;  // (position, coord)
};

// Erdős–Rado style search that fixes heart elements position by position.
std::vector<std::size_t> greedy_sunflower(std::vector<Remaining> fam, std::size_t m) {
  while (!fam.empty()) {
    std::vector<std::size_t> disjoint;
    std::set<Coord> used;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      bool ok = true;
      for (const auto& [p, c] : fam[i].items)
        if (used.count(c)) { ok = false; break; }
      if (!ok) continue;
      disjoint.push_back(i);
      for (const auto& [p, c] : fam[i].items) used.insert(c);
    }
    if (disjoint.size() >= m) {
      std::vector<std::size_t> out;
      for (std::size_t i : disjoint) out.push_back(fam[i].index);
      return out;
    }
    // Every set meets `used`; move the most frequent (position, coord) into the heart.
    std::map<std::pair<std::size_t, Coord>, std::size_t> freq;
    for (const auto& r : fam)
      for (const auto& pc : r.items)
        if (used.count(pc.second)) ++freq[pc];
    if (freq.empty()) return {};
    auto best = std::max_element(freq.begin(), freq.end(), [](const auto& a, const auto& b) {
      return a.second < b.second;
    });
    const auto key = best->first;
    std::vector<Remaining> next;
    for (auto& r : fam) {
      auto it = std::find(r.items.begin(), r.items.end(), key);
      if (it == r.items.end()) continue;
      r.items.erase(it);
      next.push_back(std::move(r));
    }
    if (next.size() < m) return {};
    fam = std::move(next);
  }
  return {};
}

// Exhaustive backtracking over index-increasing choices.
struct ExactSearch {
  const std::vector<LabeledSupport>& family;
  const std::vector<std::size_t>& group;
  std::size_t m;
  std::uint64_t budget;
  std::uint64_t steps = 0;
  bool exhausted = false;

  std::vector<std::size_t> chosen;
  std::set<Coord> heart;
  std::map<Coord, std::size_t> heartPos;  // coord -> position
  std::set<Coord> petals;

  bool fits(const LabeledSupport& s) const {
    if (chosen.empty()) return true;
    const LabeledSupport& first = family[chosen.front()];
    if (chosen.size() == 1) {
      // Heart is the intersection; its elements must sit at the same positions.
      for (std::size_t i = 0; i < s.coords.size(); ++i) {
        auto it = std::find(first.coords.begin(), first.coords.end(), s.coords[i]);
        if (it != first.coords.end() && static_cast<std::size_t>(it - first.coords.begin()) != i)
          return false;
      }
      return true;
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < s.coords.size(); ++i) {
      const Coord c = s.coords[i];
      if (auto it = heartPos.find(c); it != heartPos.end()) {
        if (it->second != i) return false;
        ++hits;
      } else if (petals.count(c)) {
        return false;
      }
    }
    return hits == heart.size();
  }

  void push(std::size_t idx) {
    const LabeledSupport& s = family[idx];
    chosen.push_back(idx);
    if (chosen.size() == 2) {
      const LabeledSupport& first = family[chosen.front()];
      heart = meet(as_set(first), as_set(s));
      for (std::size_t i = 0; i < s.coords.size(); ++i)
        if (heart.count(s.coords[i])) heartPos[s.coords[i]] = i;
      for (Coord c : first.coords)
        if (!heart.count(c)) petals.insert(c);
    }
    if (chosen.size() >= 2)
      for (Coord c : s.coords)
        if (!heart.count(c)) petals.insert(c);
  }

  void pop() {
    const std::size_t idx = chosen.back();
    chosen.pop_back();
    if (chosen.size() < 2) {
      heart.clear();
      heartPos.clear();
      petals.clear();
      return;
    }
    for (Coord c : family[idx].coords)
      if (!heart.count(c)) petals.erase(c);
  }

  bool run(std::size_t from) {
    if (chosen.size() >= m) return true;
    for (std::size_t g = from; g < group.size(); ++g) {
      if (group.size() - g < m - chosen.size()) return false;
      if (++steps > budget) {
        exhausted = true;
        return false;
      }
      if (!fits(family[group[g]])) continue;
      push(group[g]);
      if (run(g + 1)) return true;
      pop();
      if (exhausted) return false;
    }
    return false;
  }
};

}  // namespace

DeltaSystem make_system(std::vector<LabeledSupport> members) {
  DeltaSystem ds;
  require(!members.empty(), "a system needs members");
  std::set<Coord> heart = as_set(members.front());
  for (const auto& s : members) heart = meet(heart, as_set(s));
  ds.heart = std::move(heart);
  ds.size = members.front().coords.size();
  for (std::size_t i = 0; i < members.front().coords.size(); ++i)
    if (ds.heart.count(members.front().coords[i])) ds.heartPositions.insert(i);
  ds.members = std::move(members);
  return ds;
}

std::vector<std::string> violations(const DeltaSystem& ds) {
  std::vector<std::string> out;
  if (ds.members.empty()) return {"no members"};
  for (const auto& s : ds.members) {
    try {
      s.validate();
    } catch (const Error& e) {
      out.push_back(e.what());
    }
    if (s.coords.size() != ds.size) out.push_back("support sizes differ");
  }
  if (!out.empty()) return out;
  for (std::size_t i = 0; i < ds.members.size(); ++i)
    for (std::size_t j = i + 1; j < ds.members.size(); ++j)
      if (meet(as_set(ds.members[i]), as_set(ds.members[j])) != ds.heart)
        out.push_back("members " + std::to_string(i) + " and " + std::to_string(j) +
                      " do not meet exactly in the heart");
  if (ds.members.size() == 1)
    for (Coord c : ds.heart)
      if (!as_set(ds.members.front()).count(c)) out.push_back("heart outside the single member");
  const std::vector<Coord> heartv(ds.heart.begin(), ds.heart.end());
  for (std::size_t n = 0; n < ds.size; ++n) {
    const LabeledSupport& first = ds.members.front();
    const bool isHeart = ds.heartPositions.count(n) > 0;
    for (const auto& s : ds.members) {
      const Coord c = s.coords[n];
      if ((ds.heart.count(c) > 0) != isHeart)
        out.push_back("position " + std::to_string(n) + " disagrees on heart membership");
      for (Coord hk : heartv)
        if ((c < hk) != (first.coords[n] < hk) || (c == hk) != (first.coords[n] == hk))
          out.push_back("position " + std::to_string(n) + " changes order against the heart");
      if (s.labels[n].tag != first.labels[n].tag)
        out.push_back("position " + std::to_string(n) + " changes class tag");
      else if (s.labels[n].tag != Tag::S0 &&
               (s.labels[n].token != first.labels[n].token || s.labels[n].loss != first.labels[n].loss))
        out.push_back("position " + std::to_string(n) + " changes (stem, loss)");
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> countable_violations(const DeltaSystem& ds) {
  auto out = violations(ds);
  if (!out.empty()) return out;
  for (std::size_t n = 0; n < ds.size; ++n) {
    if (ds.heartPositions.count(n)) continue;
    for (std::size_t i = 1; i < ds.members.size(); ++i)
      if (ds.members[i - 1].coords[n] >= ds.members[i].coords[n]) {
        out.push_back("position " + std::to_string(n) + " is not strictly increasing");
        break;
      }
  }
  return out;
}

std::optional<DeltaSystem> extract_delta(const std::vector<LabeledSupport>& family,
                                         std::size_t minSize, std::uint64_t searchBudget) {
  for (const auto& s : family) s.validate();
  if (family.empty()) return std::nullopt;
  const std::size_t m = std::max<std::size_t>(minSize, 1);
  std::map<Signature, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < family.size(); ++i) groups[signature_of(family[i])].push_back(i);

  for (const auto& [sig, group] : groups) {
    if (group.size() < m) continue;
    std::vector<std::size_t> picked;
    if (m == 1) {
      picked = {group.front()};
    } else {
      std::vector<Remaining> fam;
      for (std::size_t i : group) {
        Remaining r{i, {}};
        for (std::size_t p = 0; p < family[i].coords.size(); ++p)
          r.items.emplace_back(p, family[i].coords[p]);
        fam.push_back(std::move(r));
      }
      picked = greedy_sunflower(std::move(fam), m);
      if (picked.size() < m) {
        ExactSearch search{family, group, m, searchBudget, 0, false, {}, {}, {}, {}};
        picked = search.run(0) ? search.chosen : std::vector<std::size_t>{};
      }
    }
    if (picked.size() < m) continue;
    std::sort(picked.begin(), picked.end());
    std::vector<LabeledSupport> members;
    for (std::size_t i : picked) members.push_back(family[i]);
    DeltaSystem ds = make_system(std::move(members));
    if (violations(ds).empty()) return ds;
  }
  return std::nullopt;
}

DeltaSystem countable_subsystem(const DeltaSystem& ds) {
  const auto bad = violations(ds);
  require(bad.empty(), "input is not a Δ-system: " + (bad.empty() ? "" : bad.front()));
  std::vector<std::size_t> free;
  for (std::size_t n = 0; n < ds.size; ++n)
    if (!ds.heartPositions.count(n)) free.push_back(n);
  if (free.empty()) {
    require(ds.members.size() >= 2, "fewer than two members remain", Errc::too_few_members);
    return ds;
  }
  std::vector<LabeledSupport> sorted = ds.members;
  std::stable_sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
    return a.coords[free.front()] < b.coords[free.front()];
  });
  auto below = [&](const LabeledSupport& a, const LabeledSupport& b) {
    for (std::size_t n : free)
      if (a.coords[n] >= b.coords[n]) return false;
    return true;
  };
  // Longest chain by dynamic programming; earliest predecessor on ties.
  const std::size_t n = sorted.size();
  std::vector<std::size_t> len(n, 1), prev(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (below(sorted[i], sorted[j]) && len[i] + 1 > len[j]) {
        len[j] = len[i] + 1;
        prev[j] = i;
      }
  std::size_t end = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (len[j] > len[end]) end = j;
  require(len[end] >= 2, "fewer than two members remain", Errc::too_few_members);
  std::vector<LabeledSupport> chain;
  for (std::size_t j = end; j != n; j = prev[j]) chain.push_back(sorted[j]);
  std::reverse(chain.begin(), chain.end());
  DeltaSystem out = ds;
  out.members = std::move(chain);
  return out;
}

DeltaSystem restrict(const DeltaSystem& ds, Coord beta) {
  const auto bad = violations(ds);
  require(bad.empty(), "input is not a Δ-system: " + (bad.empty() ? "" : bad.front()));
  Coord top = 0;
  for (const auto& s : ds.members)
    if (!s.coords.empty()) top = std::max(top, s.coords.back() + 1);
  const Coord next = ds.heart.empty() ? 0 : *ds.heart.rbegin() + 1;
  require(ds.heart.count(beta) || beta == next || beta >= top,
          "beta must be a heart element, max(heart)+1, or above every coordinate",
          Errc::invalid_beta);
  DeltaSystem out;
  for (const auto& s : ds.members) {
    LabeledSupport t;
    for (std::size_t i = 0; i < s.coords.size() && s.coords[i] < beta; ++i) {
      t.coords.push_back(s.coords[i]);
      t.labels.push_back(s.labels[i]);
    }
    out.members.push_back(std::move(t));
  }
  for (Coord c : ds.heart)
    if (c < beta) out.heart.insert(c);
  out.size = out.members.front().coords.size();
  for (std::size_t p : ds.heartPositions)
    if (p < out.size) out.heartPositions.insert(p);
  return out;
}

bool extends(const Guardrail& total, const Guardrail& partial) {
  for (const auto& [c, v] : partial) {
    auto it = total.find(c);
    if (it == total.end() || it->second != v) return false;
  }
  return true;
}

std::vector<Guardrail> guardrail_cover(const std::vector<Guardrail>& partials,
                                       const std::map<Coord, std::vector<std::string>>& labelUniverse) {
  std::set<Coord> domain;
  for (const auto& g : partials)
    for (const auto& [c, v] : g) {
      domain.insert(c);
      if (auto it = labelUniverse.find(c); it != labelUniverse.end())
        require(std::find(it->second.begin(), it->second.end(), v) != it->second.end(),
                "label '" + v + "' is not in the universe of coordinate " + std::to_string(c));
    }
  // First-fit merging: a partial joins the first group it agrees with.
  std::vector<Guardrail> groups;
  for (const auto& g : partials) {
    bool placed = false;
    for (auto& grp : groups) {
      bool ok = true;
      for (const auto& [c, v] : g)
        if (auto it = grp.find(c); it != grp.end() && it->second != v) { ok = false; break; }
      if (!ok) continue;
      grp.insert(g.begin(), g.end());
      placed = true;
      break;
    }
    if (!placed) groups.push_back(g);
  }
  if (groups.empty() && !domain.empty()) groups.emplace_back();
  for (auto& grp : groups)
    for (Coord c : domain) {
      if (grp.count(c)) continue;
      auto it = labelUniverse.find(c);
      if (it != labelUniverse.end() && !it->second.empty()) {
        grp[c] = it->second.front();
        continue;
      }
      for (const auto& g : partials)
        if (auto v = g.find(c); v != g.end()) {
          grp[c] = v->second;
          break;
        }
    }
  return groups;
}

}  // namespace forcelab::deltasys
