#pragma once

// Cichoń's diagram as an order constraint system over ranks. Ranks stand in
// for cardinals; only their relative order is meaningful.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forcelab::cichon {

enum class Entry { aleph1, addN, covN, addM, b, nonM, covM, d, nonN, cofM, cofN, c };
inline constexpr std::size_t kEntries = 12;

std::string_view key(Entry e);      // ASCII identifier, e.g. "addN"
std::string_view display(Entry e);  // e.g. "add(𝒩)"
std::optional<Entry> parse_entry(std::string_view s);
const std::array<Entry, kEntries>& all_entries();

using Assignment = std::array<long, kEntries>;
inline long& at(Assignment& a, Entry e) { return a[static_cast<std::size_t>(e)]; }
inline long at(const Assignment& a, Entry e) { return a[static_cast<std::size_t>(e)]; }

struct Arrow {
  Entry from, to;  // from <= to
};
const std::vector<Arrow>& arrows();

struct Violation {
  std::string key;      // "b<=d", "addM=min(b,covM)"
  std::string display;  // "𝔟≤𝔡"
};

std::vector<Violation> check(const Assignment& a);
std::string arrow_key(const Arrow& ar);

/// Fills add(ℳ) and cof(ℳ) from the ten free entries.
Assignment complete(Assignment tenEntries);

std::vector<Assignment> enumerate_two_valued();

struct Fixture {
  std::string name;
  Assignment values;
};
std::vector<Fixture> fixtures();

}  // namespace forcelab::cichon
