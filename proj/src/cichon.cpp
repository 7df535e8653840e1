#include "forcelab/cichon.hpp"

#include <algorithm>

namespace forcelab::cichon {

namespace {

struct Names {
  std::string_view key, display;
};

constexpr std::array<Names, kEntries> kNames{{
    {"aleph1", "ℵ₁"},
    {"addN", "add(𝒩)"},
    {"covN", "cov(𝒩)"},
    {"addM", "add(ℳ)"},
    {"b", "𝔟"},
    {"nonM", "non(ℳ)"},
    {"covM", "cov(ℳ)"},
    {"d", "𝔡"},
    {"nonN", "non(𝒩)"},
    {"cofM", "cof(ℳ)"},
    {"cofN", "cof(𝒩)"},
    {"c", "2^ℵ₀"},
}};

std::size_t idx(Entry e) { return static_cast<std::size_t>(e); }

}  // namespace

std::string_view key(Entry e) { return kNames[idx(e)].key; }
std::string_view display(Entry e) { return kNames[idx(e)].display; }

std::optional<Entry> parse_entry(std::string_view s) {
  for (Entry e : all_entries())
    if (key(e) == s || display(e) == s) return e;
  return std::nullopt;
}

const std::array<Entry, kEntries>& all_entries() {
  static const std::array<Entry, kEntries> all{Entry::aleph1, Entry::addN, Entry::covN, Entry::addM,
                                               Entry::b,      Entry::nonM, Entry::covM, Entry::d,
                                               Entry::nonN,   Entry::cofM, Entry::cofN, Entry::c};
  return all;
}

const std::vector<Arrow>& arrows() {
  using E = Entry;
  static const std::vector<Arrow> list{
      {E::aleph1, E::addN}, {E::addN, E::addM}, {E::addN, E::covN}, {E::addM, E::b},
      {E::addM, E::covM},   {E::b, E::nonM},    {E::b, E::d},       {E::covN, E::nonM},
      {E::nonM, E::cofM},   {E::covM, E::d},    {E::covM, E::nonN}, {E::d, E::cofM},
      {E::nonN, E::cofN},   {E::cofM, E::cofN}, {E::cofN, E::c},
  };
  return list;
}

std::string arrow_key(const Arrow& ar) {
  return std::string(key(ar.from)) + "<=" + std::string(key(ar.to));
}

std::vector<Violation> check(const Assignment& a) {
  std::vector<Violation> out;
  for (const auto& ar : arrows())
    if (at(a, ar.from) > at(a, ar.to))
      out.push_back({arrow_key(ar), std::string(display(ar.from)) + "≤" + std::string(display(ar.to))});
  if (at(a, Entry::addM) != std::min(at(a, Entry::b), at(a, Entry::covM)))
    out.push_back({"addM=min(b,covM)", "add(ℳ)=min(𝔟,cov(ℳ))"});
  if (at(a, Entry::cofM) != std::max(at(a, Entry::d), at(a, Entry::nonM)))
    out.push_back({"cofM=max(d,nonM)", "cof(ℳ)=max(𝔡,non(ℳ))"});
  return out;
}

Assignment complete(Assignment a) {
  at(a, Entry::addM) = std::min(at(a, Entry::b), at(a, Entry::covM));
  at(a, Entry::cofM) = std::max(at(a, Entry::d), at(a, Entry::nonM));
  return a;
}

std::vector<Assignment> enumerate_two_valued() {
  std::vector<Entry> free;
  for (Entry e : all_entries())
    if (e != Entry::aleph1 && e != Entry::c) free.push_back(e);
  std::vector<Assignment> out;
  for (unsigned mask = 0; mask < (1u << free.size()); ++mask) {
    Assignment a{};
    at(a, Entry::aleph1) = 1;
    at(a, Entry::c) = 2;
    for (std::size_t i = 0; i < free.size(); ++i) at(a, free[i]) = (mask >> i) & 1 ? 2 : 1;
    if (check(a).empty()) out.push_back(a);
  }
  return out;
}

std::vector<Fixture> fixtures() {
  // Values listed as (add𝒩, cov𝒩, 𝔟, non ℳ, cov ℳ, 𝔡, non 𝒩, cof 𝒩, 2^ℵ₀); ℵ₁ is 0.
  auto make = [](std::string name, std::array<long, 9> v) {
    Assignment a{};
    at(a, Entry::aleph1) = 0;
    at(a, Entry::addN) = v[0];
    at(a, Entry::covN) = v[1];
    at(a, Entry::b) = v[2];
    at(a, Entry::nonM) = v[3];
    at(a, Entry::covM) = v[4];
    at(a, Entry::d) = v[5];
    at(a, Entry::nonN) = v[6];
    at(a, Entry::cofN) = v[7];
    at(a, Entry::c) = v[8];
    return Fixture{std::move(name), complete(a)};
  };
  return {
      make("left-theorem", {1, 3, 2, 4, 5, 5, 5, 5, 5}),
      make("ten-theorem", {1, 3, 2, 4, 5, 7, 6, 8, 9}),
      make("old-order", {1, 2, 3, 4, 5, 6, 7, 8, 9}),
      make("step-5", {1, 3, 2, 4, 5, 5, 5, 5, 5}),
      make("step-6", {1, 3, 2, 4, 5, 6, 6, 6, 6}),
      make("step-7", {1, 3, 2, 4, 5, 7, 6, 7, 7}),
      make("step-8", {1, 3, 2, 4, 5, 7, 6, 8, 8}),
      make("step-9", {1, 3, 2, 4, 5, 7, 6, 8, 9}),
  };
}

}  // namespace forcelab::cichon
