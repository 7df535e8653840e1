// Thin bindings: rationals cross as "p/q" strings, structured data as JSON text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "forcelab/cichon.hpp"
#include "forcelab/deltasys.hpp"
#include "forcelab/fam.hpp"
#include "forcelab/famlimit.hpp"
#include "forcelab/io.hpp"
#include "forcelab/probtree.hpp"
#include "forcelab/suites.hpp"

namespace py = pybind11;
using namespace forcelab;

namespace {

Rational q(const std::string& s) { return parse_rational(s); }

std::string dump(const io::Json& j) { return j.dump(); }

std::string suite(const std::string& name, std::uint64_t trials, std::uint64_t seed) {
  using Fn = suites::SuiteResult (*)(std::uint64_t, std::uint64_t);
  static const std::map<std::string, Fn> table{
      {"counting_a", suites::counting_a}, {"counting_b", suites::counting_b}, {"counting_c", suites::counting_c},
      {"counting_d", suites::counting_d}, {"loss", suites::loss_facts},      {"measure", suites::measure_bound},
      {"linked", suites::linkedness}};
  auto it = table.find(name);
  if (it == table.end()) throw Error(Errc::precondition, "unknown suite '" + name + "'");
  auto r = it->second(trials, seed);
  return dump({{"name", r.name}, {"trials", r.trials}, {"checks", r.checks}, {"violations", r.violations},
               {"examples", r.examples}});
}

std::string approx(const std::string& measure, const std::string& eps, std::uint64_t kStar) {
  auto m = io::measure_from(io::parse_json(measure));
  return dump(io::to_json(fam::approximate_support(m, q(eps), kStar)));
}

std::string extract(const std::string& supports, std::size_t minSize) {
  std::vector<deltasys::LabeledSupport> fam;
  for (const auto& e : io::parse_json(supports)) fam.push_back(io::support_from(e));
  auto ds = deltasys::extract_delta(fam, minSize);
  return ds ? dump(io::to_json(*ds)) : "null";
}

std::string bad_measure(const std::string& tree, const std::vector<std::pair<std::vector<std::size_t>, std::uint64_t>>& jobs) {
  std::vector<probtree::JobQuery> qs;
  for (const auto& [levels, t] : jobs) qs.push_back({levels, t});
  auto r = probtree::bad_branch_measure(io::probtree_from(io::parse_json(tree)), qs);
  io::Json per = io::Json::array();
  for (const auto& x : r.perJob) per.push_back(io::to_json(x));
  return dump({{"perJob", per}, {"anyJob", io::to_json(r.anyJob)}});
}

std::vector<std::string> cichon_check(const std::string& assignment) {
  std::vector<std::string> keys;
  for (const auto& v : cichon::check(io::assignment_from(io::parse_json(assignment)))) keys.push_back(v.key);
  return keys;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact combinatorics of creature forcing, limits and Cichon diagram checks";

  py::register_exception<Error>(m, "ForcelabError", PyExc_ValueError);

  m.def("binom_cdf", [](long l, unsigned long n, const std::string& p) { return to_string(probtree::binom_cdf(l, n, q(p))); },
        py::arg("l"), py::arg("n"), py::arg("p"));
  m.def("success_probs", [](const std::string& loss, unsigned bits) {
        auto s = probtree::success_probs(q(loss), bits);
        return std::make_pair(to_string(s.pPrimeUpper), to_string(s.pLower));
      }, py::arg("loss"), py::arg("bits") = 64);
  m.def("find_k", [](const std::vector<std::uint64_t>& sizes, const std::vector<std::string>& losses) {
        std::vector<Rational> ls;
        for (const auto& l : losses) ls.push_back(q(l));
        return probtree::find_k(famlimit::IntervalPartition::from_sizes(sizes), ls);
      }, py::arg("sizes"), py::arg("losses"));
  m.def("zeta_tilde", [](unsigned hStar, unsigned h) { return to_string(famlimit::zeta_tilde(hStar, h)); },
        py::arg("h_star"), py::arg("h"));
  m.def("fam_size_bound", [](unsigned n, const std::string& eps) { return to_string(fam::size_bound(n, q(eps))); },
        py::arg("n"), py::arg("eps"));
  m.def("approximate_support", &approx, py::arg("measure_json"), py::arg("eps"), py::arg("k_star") = 0);
  m.def("extract_delta", &extract, py::arg("supports_json"), py::arg("min_size"));
  m.def("bad_branch_measure", &bad_measure, py::arg("tree_json"), py::arg("jobs"));
  m.def("cichon_check", &cichon_check, py::arg("assignment_json"));
  m.def("cichon_two_valued_count", [] { return cichon::enumerate_two_valued().size(); });
  m.def("run_suite", &suite, py::arg("name"), py::arg("trials"), py::arg("seed"));
}
