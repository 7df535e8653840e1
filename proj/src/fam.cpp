#include "forcelab/fam.hpp"

#include <algorithm>
#include <numeric>

namespace forcelab::fam {

namespace {

// Membership signature of each window point in the named sets.
std::map<std::vector<bool>, PointSet> generated_atoms(Point window,
                                                      const std::map<std::string, PointSet>& sets) {
  std::map<std::vector<bool>, PointSet> out;
  for (Point p = 0; p < window; ++p) {
    std::vector<bool> sig;
    sig.reserve(sets.size());
    for (const auto& [name, s] : sets) sig.push_back(s.count(p) > 0);
    out[sig].insert(p);
  }
  return out;
}

bool subset_of(const PointSet& a, const PointSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool meets(const PointSet& a, const PointSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

}  // namespace

MeasureAssignment::MeasureAssignment(Point window, std::map<std::string, PointSet> sets,
                                     std::vector<AtomWeight> atoms)
    : window_(window), sets_(std::move(sets)), atoms_(std::move(atoms)) {
  require(window_ >= 1, "window must be nonempty");
  require(window_ <= (Point{1} << 24), "window too large to enumerate", Errc::enumeration_infeasible);
  for (const auto& [name, s] : sets_)
    require(s.empty() || *s.rbegin() < window_, "set '" + name + "' leaves the window");

  std::set<PointSet> expected;
  for (auto& [sig, atom] : generated_atoms(window_, sets_)) expected.insert(std::move(atom));
  std::set<PointSet> given;
  Rational total = 0;
  for (const auto& aw : atoms_) {
    require(aw.weight >= 0, "atom weights must be nonnegative");
    require(given.insert(aw.atom).second, "duplicate atom");
    total += aw.weight;
  }
  require(given == expected, "atoms must be exactly the atoms generated by the named sets");
  require(total == 1, "atom weights must sum to 1", Errc::weight_sum);
  std::sort(atoms_.begin(), atoms_.end(),
            [](const AtomWeight& x, const AtomWeight& y) { return *x.atom.begin() < *y.atom.begin(); });
}

bool MeasureAssignment::is_union_of_atoms(const PointSet& s) const {
  for (const auto& aw : atoms_) {
    const bool in = subset_of(aw.atom, s);
    if (!in && meets(aw.atom, s)) return false;
  }
  return s.empty() || *s.rbegin() < window_;
}

Rational MeasureAssignment::xi(const PointSet& s) const {
  require(is_union_of_atoms(s), "set is not a union of atoms");
  Rational r = 0;
  for (const auto& aw : atoms_)
    if (subset_of(aw.atom, s)) r += aw.weight;
  return r;
}

Rational frequency(const PointSet& s, const PointSet& u) {
  require(!u.empty(), "frequency over an empty support");
  std::size_t hit = 0;
  for (Point p : u) hit += s.count(p);
  Rational r(static_cast<unsigned long>(hit), static_cast<unsigned long>(u.size()));
  r.canonicalize();
  return r;
}

Natural size_bound(unsigned n, const Rational& eps) {
  require(eps > 0, "eps must be positive");
  Rational inv = 1 / eps;
  Natural c = inv.get_num() / inv.get_den();
  if (Rational(c) != inv) ++c;
  return c * forcelab::pow(Natural(2), n);
}

SupportWitness approximate_support(const MeasureAssignment& m, const Rational& eps, Point kStar) {
  require(eps > 0 && eps <= 1 && eps.get_num() == 1, "eps must be 1/L for an integer L >= 1",
          Errc::eps_not_unit_fraction);
  const Natural total = size_bound(static_cast<unsigned>(m.sets().size()), eps);
  require(total.fits_ulong_p() && total <= Natural(1UL << 32), "support size too large",
          Errc::enumeration_infeasible);

  // Largest-remainder rounding: floor every scaled weight, then give the
  // missing units to the largest fractional parts. Every error stays < 1 unit
  // and atoms whose scaled weight is an integer are never moved.
  struct Slot {
    std::size_t atom;
    Natural ell;
    Rational rem;
  };
  std::vector<Slot> slots;
  Natural assigned = 0;
  for (std::size_t i = 0; i < m.atoms().size(); ++i) {
    const Rational scaled = m.atoms()[i].weight * Rational(total);
    Natural fl = scaled.get_num() / scaled.get_den();
    slots.push_back({i, fl, scaled - Rational(fl)});
    assigned += fl;
  }
  std::vector<std::size_t> order(slots.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (slots[x].rem != slots[y].rem) return slots[x].rem > slots[y].rem;
    return m.atoms()[slots[x].atom].weight > m.atoms()[slots[y].atom].weight;
  });
  Natural missing = total - assigned;
  for (std::size_t k : order) {
    if (missing == 0) break;
    if (slots[k].rem == 0) break;
    ++slots[k].ell;
    --missing;
  }

  SupportWitness w;
  for (const auto& s : slots) {
    const PointSet& atom = m.atoms()[s.atom].atom;
    unsigned long need = s.ell.get_ui();
    for (auto it = atom.upper_bound(kStar); it != atom.end() && need > 0; ++it, --need)
      w.u.insert(*it);
    require(need == 0, "atom lacks enough points above kStar", Errc::infeasible_window);
  }
  for (const auto& [name, s] : m.sets()) w.perSetError[name] = abs(frequency(s, w.u) - m.xi(s));
  return w;
}

IntersectionReport check_intersection_hypothesis(const MeasureAssignment& m,
                                                 const std::vector<PointSet>& candidates) {
  require(candidates.size() <= 24, "too many candidates for subfamily enumeration",
          Errc::enumeration_infeasible);
  for (const auto& c : candidates)
    require(c.empty() || *c.rbegin() < m.window(), "candidate leaves the window");
  // Every positive union of atoms contains a positive atom, so atoms suffice.
  std::vector<const PointSet*> positive;
  for (const auto& aw : m.atoms())
    if (aw.weight > 0) positive.push_back(&aw.atom);

  const std::size_t n = candidates.size();
  for (std::size_t size = 1; size <= n; ++size) {
    std::vector<std::size_t> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      for (const PointSet* atom : positive) {
        bool any = false;
        for (Point p : *atom) {
          bool all = true;
          for (std::size_t i : idx)
            if (!candidates[i].count(p)) { all = false; break; }
          if (all) { any = true; break; }
        }
        if (!any) return {false, idx, *atom};
      }
      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == n - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return {};
}

std::optional<SupportWitness> check_average_hypothesis(
    const MeasureAssignment& m, const std::vector<PointSet>& partition,
    const std::vector<AverageSequence>& seqs, const Rational& eps, Point kStar,
    std::size_t sizeCap, std::uint64_t budget) {
  require(eps > 0, "eps must be positive");
  std::vector<Rational> target;
  std::set<Point> covered;
  for (const auto& cell : partition) {
    target.push_back(m.xi(cell));
    for (Point p : cell) require(covered.insert(p).second, "partition cells overlap");
  }
  require(partition.empty() || covered.size() == m.window(), "partition must cover the window");
  for (const auto& s : seqs) {
    require(s.a.size() == m.window(), "sequence length must equal the window");
    for (const auto& v : s.a) require(v >= 0, "sequence values must be nonnegative");
  }

  std::vector<Point> pool;
  for (Point p = kStar + 1; p < m.window(); ++p) pool.push_back(p);
  // Cell index per point for quick counting.
  std::vector<std::size_t> cellOf(m.window(), 0);
  for (std::size_t c = 0; c < partition.size(); ++c)
    for (Point p : partition[c]) cellOf[p] = c;

  std::uint64_t visited = 0;
  const std::size_t n = pool.size();
  for (std::size_t size = 1; size <= std::min(sizeCap, n); ++size) {
    std::vector<std::size_t> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    const Rational card(static_cast<unsigned long>(size));
    while (true) {
      require(++visited <= budget, "support search exceeded its budget",
              Errc::enumeration_infeasible);
      bool ok = true;
      std::vector<unsigned long> hits(partition.size(), 0);
      for (std::size_t i : idx) ++hits[cellOf[pool[i]]];
      for (std::size_t c = 0; ok && c < partition.size(); ++c) {
        const Rational f = Rational(hits[c]) / card;
        ok = f >= target[c] - eps && f <= target[c] + eps;
      }
      for (std::size_t s = 0; ok && s < seqs.size(); ++s) {
        Rational sum = 0;
        for (std::size_t i : idx) sum += seqs[s].a[pool[i]];
        ok = sum / card >= seqs[s].b - eps;
      }
      if (ok) {
        SupportWitness w;
        for (std::size_t i : idx) w.u.insert(pool[i]);
        for (std::size_t c = 0; c < partition.size(); ++c)
          w.perSetError["B" + std::to_string(c)] = abs(frequency(partition[c], w.u) - target[c]);
        return w;
      }
      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == n - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return std::nullopt;
}

}  // namespace forcelab::fam
