// forcelab command-line front end. Every subcommand prints one report and
// exits 0 on pass, 1 when a property fails or an inconsistency is found, and
// 2 on usage or input errors.

#include <CLI11.hpp>

#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "forcelab/io.hpp"
#include "forcelab/params.hpp"
#include "forcelab/suites.hpp"

using namespace forcelab;
using io::Json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

unsigned default_precision() {
  if (const char* env = std::getenv("FORCELAB_PRECISION")) {
    try {
      unsigned long v = std::stoul(env);
      if (v >= 16 && v <= 1u << 20) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring FORCELAB_PRECISION=" << env << "\n";
  }
  return 256;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

Json rationals(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(io::to_json(q));
  return out;
}

Json set_json(const std::set<std::uint64_t>& s) { return Json(std::vector<std::uint64_t>(s.begin(), s.end())); }

// ---------------------------------------------------------------------------
// params

struct ParamsOpts {
  unsigned hMax = 2;
  unsigned long threshold = 1UL << 20;
  unsigned precision = 0;
  std::string format = "json";
};

struct ParamRecord {
  unsigned h;
  std::string field;
  const params::ParamValue* v;
};

int run_params(const ParamsOpts& o) {
  params::TowerConfig cfg;
  cfg.hMax = o.hMax;
  cfg.exactBitThreshold = o.threshold;
  cfg.precisionBits = o.precision;
  auto t = params::tower(cfg);
  auto checks = params::verify_tower_identities(t);
  std::vector<ParamRecord> recs;
  for (unsigned h = 0; h <= t.maxHeight(); ++h) {
    const auto& L = t.level(h);
    for (auto [name, v] : {std::pair{"levelCount", &L.levelCount}, {"rho", &L.rho}, {"pi", &L.pi},
                           {"a", &L.a}, {"M", &L.bigM}, {"b", &L.b}})
      recs.push_back({h, name, v});
  }
  bool ok = true;
  for (const auto& c : checks) ok = ok && c.passed;

  if (o.format == "csv") {
    std::cout << "h,field,exact,depth,log2lo,log2hi\n";
    for (const auto& r : recs) {
      std::cout << r.h << "," << r.field << ",";
      if (r.v->is_exact())
        std::cout << to_string(*r.v->exact) << ",,,";
      else
        std::cout << "," << r.v->depth << "," << to_string(r.v->lo) << "," << to_string(r.v->hi);
      std::cout << "\n";
    }
    return ok ? kPass : kFail;
  }
  if (o.format == "text") {
    for (const auto& r : recs) {
      std::cout << "h=" << r.h << " " << r.field << " ";
      if (r.v->is_exact())
        std::cout << "= " << to_string(*r.v->exact);
      else
        std::cout << "log2^" << r.v->depth << " in [" << to_string(r.v->lo) << ", " << to_string(r.v->hi) << "]";
      std::cout << "\n";
    }
    for (const auto& c : checks)
      std::cout << "h=" << c.h << " " << c.name << " " << (c.passed ? "ok" : "FAIL") << " ("
                << params::method_name(c.method) << ")\n";
    return ok ? kPass : kFail;
  }
  Json values = Json::array();
  for (const auto& r : recs) {
    Json e{{"h", r.h}, {"field", r.field}};
    if (r.v->is_exact()) {
      e["exact"] = to_string(*r.v->exact);
    } else {
      e["depth"] = r.v->depth;
      e["log2lo"] = io::to_json(r.v->lo);
      e["log2hi"] = io::to_json(r.v->hi);
    }
    values.push_back(e);
  }
  Json ids = Json::array();
  for (const auto& c : checks)
    ids.push_back({{"h", c.h}, {"identity", c.name}, {"passed", c.passed}, {"method", params::method_name(c.method)}});
  emit({{"hMax", o.hMax}, {"precisionBits", o.precision}, {"values", values}, {"identities", ids}, {"pass", ok}});
  return ok ? kPass : kFail;
}

// ---------------------------------------------------------------------------
// verify

Json suite_json(const suites::SuiteResult& r) {
  return {{"name", r.name},         {"trials", r.trials},     {"checks", r.checks},
          {"violations", r.violations}, {"examples", r.examples}};
}

int report_suites(const std::string& name, std::uint64_t seed, const std::vector<suites::SuiteResult>& rs,
                  Json extra = Json::object()) {
  bool ok = true;
  Json arr = Json::array();
  for (const auto& r : rs) {
    ok = ok && r.violations == 0;
    arr.push_back(suite_json(r));
  }
  Json out{{"suite", name}, {"seed", seed}, {"results", arr}, {"pass", ok}};
  for (auto& [k, v] : extra.items()) out[k] = v;
  emit(out);
  return ok ? kPass : kFail;
}

int run_ramsey(std::uint64_t trials, std::uint64_t seed, const std::string& item) {
  using Fn = suites::SuiteResult (*)(std::uint64_t, std::uint64_t);
  const std::vector<std::pair<std::string, Fn>> items{
      {"a", suites::counting_a}, {"b", suites::counting_b}, {"c", suites::counting_c}, {"d", suites::counting_d}};
  std::vector<suites::SuiteResult> rs;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (item == "all" || item == items[i].first) rs.push_back(items[i].second(trials, seed + i));
  Json extra = Json::object();
  if (item == "all" || item == "b") {
    auto ex = suites::counting_b_boundary();
    extra["boundary"] = {{"M", to_string(ex.bigM)},
                         {"a", to_string(ex.base)},
                         {"h", ex.h},
                         {"n", to_string(ex.n)},
                         {"normBefore", io::to_json(ex.normBefore)},
                         {"normAfter", io::to_json(ex.normAfter)},
                         {"dropBelowOneOverH", ex.dropBelowOneOverH}};
  }
  return report_suites("ramsey", seed, rs, extra);
}

// ---------------------------------------------------------------------------
// limit

Rational family_loss(const famlimit::ConditionFamily& fam) { return fam.lossStar; }

int run_build_qk(const std::string& path, std::size_t k, std::size_t cap) {
  Json in = io::read_json_file(path);
  auto space = io::space_from(in.at("space"));
  auto fam = io::family_from(space, in.at("family"));
  auto part = io::partition_from(in.at("partition"));
  fam.validate();
  auto qk = famlimit::build_qk(fam, part, k);
  const unsigned H = space->height();
  const unsigned hStar = static_cast<unsigned>(fam.stemStar.size());
  const bool norms = famlimit::norms_above_bound(qk, family_loss(fam), 1, true);
  // every branch class of q_k against the members of I_k
  std::vector<const creature::Condition*> others;
  for (std::uint64_t ell = part.lo(k); ell < part.hi(k); ++ell) others.push_back(&fam.member(ell));
  auto classes = creature::node_classes(qk, others, H, cap);
  const Rational bound = Rational(part.size(k)) * (1 - famlimit::zeta_tilde(hStar, H));
  std::optional<std::uint64_t> minHits;
  for (const auto& cls : classes) {
    auto hits = famlimit::branch_hit_count(cls.node, fam, part, k, qk);
    if (!minHits || hits < *minHits) minHits = hits;
  }
  const bool hitsOk = !minHits || Rational(*minHits) >= bound;
  emit({{"k", k},
        {"qk", io::to_json(qk)},
        {"normBound", norms},
        {"branchClasses", classes.size()},
        {"minBranchHits", minHits ? Json(*minHits) : Json(nullptr)},
        {"hitBound", io::to_json(bound)},
        {"hitBoundHolds", hitsOk},
        {"pass", norms && hitsOk}});
  return norms && hitsOk ? kPass : kFail;
}

int run_weighted(const std::string& path, std::size_t cap) {
  Json in = io::read_json_file(path);
  auto space = io::space_from(in.at("space"));
  std::vector<std::pair<creature::Condition, Rational>> qks;
  for (const auto& e : in.at("qks")) qks.push_back({io::condition_from(space, e.at("condition")), io::rational_from(e.at("weight"))});
  require(!qks.empty(), "no q_k given", Errc::parse);
  auto limit = famlimit::weighted_limit(qks);
  Rational lossStar;
  if (in.contains("loss")) {
    lossStar = io::rational_from(in.at("loss"));
  } else {
    auto l = creature::loss(qks.front().first);
    require(l.has_value(), "loss of the inputs is undefined; pass 'loss'", Errc::parse);
    lossStar = *l;
  }
  const bool norms = famlimit::norms_above_bound(limit, lossStar, 2, false);
  const unsigned hStar = limit.stem_height();
  std::vector<const creature::Condition*> others;
  for (const auto& [c, w] : qks) others.push_back(&c);
  bool weightsOk = true;
  Json worst = nullptr;
  for (unsigned h = hStar; h <= space->height(); ++h) {
    const Rational bound = 1 - famlimit::zeta_tilde(hStar, std::max(h, hStar));
    for (const auto& cls : creature::node_classes(limit, others, h, cap)) {
      Rational w = famlimit::limit_weight(qks, cls.node);
      if (w < bound) {
        weightsOk = false;
        if (worst.is_null()) worst = {{"node", cls.node}, {"weight", io::to_json(w)}, {"bound", io::to_json(bound)}};
      }
    }
  }
  emit({{"limit", io::to_json(limit)},
        {"loss", io::to_json(lossStar)},
        {"normBound", norms},
        {"weightBound", weightsOk},
        {"firstWeightFailure", worst},
        {"pass", norms && weightsOk}});
  return norms && weightsOk ? kPass : kFail;
}

int run_witness(const std::string& path) {
  Json in = io::read_json_file(path);
  auto space = io::space_from(in.at("space"));
  std::vector<famlimit::ConditionFamily> fams;
  for (const auto& f : in.at("families")) fams.push_back(io::family_from(space, f));
  std::vector<creature::Condition> limits;
  for (const auto& c : in.at("limits")) limits.push_back(io::condition_from(space, c));
  auto q = io::condition_from(space, in.at("q"));
  auto part = io::partition_from(in.at("partition"));
  std::vector<famlimit::Block> blocks;
  for (const auto& b : in.at("blocks"))
    blocks.push_back({b.at("ks").get<std::set<std::uint64_t>>(), io::rational_from(b.at("weight"))});
  auto w = famlimit::strong_limit_witness(fams, limits, q, part, blocks, io::rational_from(in.at("eps")),
                                          in.value("kStar", std::uint64_t{0}), in.value("sizeCap", std::size_t{4}));
  if (!w) {
    emit({{"found", false}, {"pass", false}});
    return kFail;
  }
  const bool ok = w->blockBullet && w->averageBullet;
  emit({{"found", true},
        {"u", set_json(w->u)},
        {"s", w->s},
        {"qPrime", io::to_json(w->qPrime)},
        {"zFrequency", rationals(w->zFrequency)},
        {"average", rationals(w->average)},
        {"blockBullet", w->blockBullet},
        {"averageBullet", w->averageBullet},
        {"pass", ok}});
  return ok ? kPass : kFail;
}

// ---------------------------------------------------------------------------
// probtree

std::vector<probtree::JobQuery> jobs_from(const Json& j) {
  std::vector<probtree::JobQuery> out;
  for (const auto& e : j)
    out.push_back({e.at("levels").get<std::vector<std::size_t>>(), e.at("threshold").get<std::uint64_t>()});
  return out;
}

int run_simulate(const std::string& path, std::size_t cap) {
  Json in = io::read_json_file(path);
  auto tree = io::probtree_from(in.at("tree"));
  auto jobs = jobs_from(in.at("jobs"));
  auto bad = probtree::bad_branch_measure(tree, jobs, cap);
  Json out{{"perJob", rationals(bad.perJob)}, {"anyJob", io::to_json(bad.anyJob)}, {"good", io::to_json(1 - bad.anyJob)}};
  bool ok = true;
  if (in.contains("goodAtLeast")) {
    ok = 1 - bad.anyJob >= io::rational_from(in.at("goodAtLeast"));
    out["pass"] = ok;
  }
  emit(out);
  return ok ? kPass : kFail;
}

// ---------------------------------------------------------------------------
// delta, fam, cichon

std::vector<deltasys::LabeledSupport> supports_from(const Json& in) {
  const Json& arr = in.is_array() ? in : in.at("supports");
  std::vector<deltasys::LabeledSupport> out;
  for (const auto& e : arr) out.push_back(io::support_from(e));
  return out;
}

int run_extract(const std::string& path, std::size_t minSize, bool countable, std::uint64_t budget) {
  auto family = supports_from(io::read_json_file(path));
  auto ds = deltasys::extract_delta(family, minSize, budget);
  if (!ds) {
    emit({{"found", false}, {"pass", false}});
    return kFail;
  }
  if (countable) *ds = deltasys::countable_subsystem(*ds);
  auto bad = countable ? deltasys::countable_violations(*ds) : deltasys::violations(*ds);
  emit({{"found", true}, {"system", io::to_json(*ds)}, {"violations", bad}, {"pass", bad.empty()}});
  return bad.empty() ? kPass : kFail;
}

int run_cover(const std::string& path) {
  Json in = io::read_json_file(path);
  std::vector<deltasys::Guardrail> partials;
  for (const auto& p : in.at("partials")) partials.push_back(io::guardrail_from(p));
  std::map<deltasys::Coord, std::vector<std::string>> universe;
  if (in.contains("universe"))
    for (const auto& [k, v] : in.at("universe").items()) universe[std::stoull(k)] = v.get<std::vector<std::string>>();
  auto cover = deltasys::guardrail_cover(partials, universe);
  bool ok = true;
  Json uncovered = Json::array();
  for (std::size_t i = 0; i < partials.size(); ++i) {
    bool hit = false;
    for (const auto& g : cover) hit = hit || deltasys::extends(g, partials[i]);
    if (!hit) {
      ok = false;
      uncovered.push_back(i);
    }
  }
  Json arr = Json::array();
  for (const auto& g : cover) arr.push_back(io::to_json(g));
  emit({{"cover", arr}, {"size", cover.size()}, {"uncovered", uncovered}, {"pass", ok}});
  return ok ? kPass : kFail;
}

int run_fam_approx(const std::string& path, const std::string& epsText, std::uint64_t kStar) {
  Json in = io::read_json_file(path);
  auto m = io::measure_from(in.contains("measure") ? in.at("measure") : in);
  const Rational eps = parse_rational(epsText);
  auto w = fam::approximate_support(m, eps, kStar);
  const Natural bound = fam::size_bound(static_cast<unsigned>(m.sets().size()), eps);
  bool ok = Natural(static_cast<unsigned long>(w.u.size())) <= bound;
  for (const auto& [name, err] : w.perSetError) ok = ok && err < eps;
  emit({{"witness", io::to_json(w)}, {"size", w.u.size()}, {"sizeBound", to_string(bound)}, {"pass", ok}});
  return ok ? kPass : kFail;
}

std::vector<fam::PointSet> point_sets(const Json& j) {
  std::vector<fam::PointSet> out;
  for (const auto& e : j) out.push_back(e.get<fam::PointSet>());
  return out;
}

int run_fam_check(const std::string& path) {
  Json in = io::read_json_file(path);
  auto m = io::measure_from(in.at("measure"));
  if (in.contains("candidates")) {
    auto rep = fam::check_intersection_hypothesis(m, point_sets(in.at("candidates")));
    Json out{{"hypothesis", "intersection"}, {"holds", rep.holds}};
    if (!rep.holds) {
      out["subfamily"] = rep.subfamily;
      out["atom"] = rep.atom;
    }
    emit(out);
    return rep.holds ? kPass : kFail;
  }
  std::vector<fam::AverageSequence> seqs;
  for (const auto& s : in.at("sequences")) {
    fam::AverageSequence q;
    for (const auto& v : s.at("a")) q.a.push_back(io::rational_from(v));
    q.b = io::rational_from(s.at("b"));
    seqs.push_back(std::move(q));
  }
  auto w = fam::check_average_hypothesis(m, point_sets(in.at("partition")), seqs, io::rational_from(in.at("eps")),
                                         in.value("kStar", std::uint64_t{0}), in.value("sizeCap", std::size_t{4}));
  Json out{{"hypothesis", "average"}, {"holds", w.has_value()}};
  if (w) out["witness"] = io::to_json(*w);
  emit(out);
  return w ? kPass : kFail;
}

Json violations_json(const std::vector<cichon::Violation>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back({{"key", x.key}, {"display", x.display}});
  return out;
}

int run_cichon_check(const std::string& path) {
  auto a = io::assignment_from(io::read_json_file(path));
  auto v = cichon::check(a);
  emit({{"assignment", io::to_json(a)}, {"consistent", v.empty()}, {"violations", violations_json(v)}});
  return v.empty() ? kPass : kFail;
}

int run_cichon_enumerate() {
  auto all = cichon::enumerate_two_valued();
  Json arr = Json::array();
  for (const auto& a : all) arr.push_back(io::to_json(a));
  emit({{"count", all.size()}, {"assignments", arr}});
  return kPass;
}

int run_cichon_fixtures() {
  bool ok = true;
  Json arr = Json::array();
  for (const auto& f : cichon::fixtures()) {
    auto v = cichon::check(f.values);
    ok = ok && v.empty();
    arr.push_back({{"name", f.name}, {"values", io::to_json(f.values)}, {"pass", v.empty()}, {"violations", violations_json(v)}});
  }
  emit(arr);
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forcelab: finite checks for creature-forcing combinatorics"};
  app.require_subcommand(1);
  std::function<int()> action;

  // params
  ParamsOpts po;
  po.precision = default_precision();
  auto* params = app.add_subcommand("params", "Parameter tower values and identity checks");
  params->add_option("--hmax", po.hMax, "Largest height")->check(CLI::Range(0u, 8u));
  params->add_option("--exact-bits", po.threshold, "Largest bit length kept exactly");
  params->add_option("--precision", po.precision, "MPFR precision in bits")->check(CLI::Range(16u, 1u << 20));
  params->add_option("--format", po.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  params->callback([&] { action = [&] { return run_params(po); }; });

  // verify
  std::string item = "all";
  auto* verify = app.add_subcommand("verify", "Seeded property suites");
  verify->require_subcommand(1);
  using SuiteFn = std::function<int(std::uint64_t, std::uint64_t)>;
  auto add_suite = [&](const char* name, const char* desc, std::uint64_t defTrials, SuiteFn fn) {
    auto* s = verify->add_subcommand(name, desc);
    auto opts = std::make_shared<std::pair<std::uint64_t, std::uint64_t>>(defTrials, 0);
    s->add_option("--trials", opts->first, "Random instances")->capture_default_str();
    s->add_option("--seed", opts->second, "RNG seed")->capture_default_str();
    s->callback([&action, opts, fn] { action = [opts, fn] { return fn(opts->first, opts->second); }; });
    return s;
  };
  add_suite("ramsey", "Counting checks a-d", 1000,
            [&](std::uint64_t t, std::uint64_t sd) { return run_ramsey(t, sd, item); })
      ->add_option("--item", item, "a, b, c, d or all")
      ->check(CLI::IsMember({"a", "b", "c", "d", "all"}));
  add_suite("loss", "Basic properties of loss", 500, [](std::uint64_t t, std::uint64_t sd) {
    return report_suites("loss", sd, {suites::loss_facts(t, sd)});
  });
  add_suite("linked", "Common refinements of same-(stem, loss) conditions", 200, [](std::uint64_t t, std::uint64_t sd) {
    return report_suites("linked", sd, {suites::linkedness(t, sd)});
  });
  add_suite("measure", "Relative count bound", 500, [](std::uint64_t t, std::uint64_t sd) {
    return report_suites("measure", sd, {suites::measure_bound(t, sd)});
  });

  // limit
  std::string input;
  std::size_t k = 0, cap = 1u << 16;
  auto* limit = app.add_subcommand("limit", "Limits of condition families");
  limit->require_subcommand(1);
  auto* bq = limit->add_subcommand("build-qk", "Majority condition q_k for one interval");
  bq->add_option("--input", input, "JSON {space, family, partition}")->required();
  bq->add_option("--k", k, "Interval index")->required();
  bq->add_option("--cap", cap, "Largest number of branch classes to check");
  bq->callback([&] { action = [&] { return run_build_qk(input, k, cap); }; });
  auto* wl = limit->add_subcommand("weighted", "Weighted limit of q_k");
  wl->add_option("--input", input, "JSON {space, qks: [{condition, weight}], loss?}")->required();
  wl->add_option("--cap", cap, "Largest number of node classes per level");
  wl->callback([&] { action = [&] { return run_weighted(input, cap); }; });
  auto* wt = limit->add_subcommand("witness", "Finite strong-limit witness");
  wt->add_option("--input", input, "JSON {space, families, limits, q, partition, blocks, eps, kStar, sizeCap}")->required();
  wt->callback([&] { action = [&] { return run_witness(input); }; });

  // probtree
  long cdfL = 0;
  unsigned long cdfN = 0;
  std::string cdfP, sizes, losses;
  unsigned bits = 64;
  auto* pt = app.add_subcommand("probtree", "Binomial tails and bad-branch measures");
  pt->require_subcommand(1);
  auto* cdf = pt->add_subcommand("cdf", "P(Bin(n, p) <= l), exactly");
  cdf->add_option("--l", cdfL, "Successes")->required();
  cdf->add_option("--n", cdfN, "Trials")->required();
  cdf->add_option("--p", cdfP, "Success probability as p/q")->required();
  cdf->callback([&] {
    action = [&] {
      std::cout << to_string(probtree::binom_cdf(cdfL, cdfN, parse_rational(cdfP))) << "\n";
      return kPass;
    };
  });
  auto* fk = pt->add_subcommand("find-k", "Least interval whose binomial tail is small for every job");
  fk->add_option("--sizes", sizes, "Interval sizes, comma separated")->required();
  fk->add_option("--losses", losses, "Job losses, comma separated")->required();
  fk->add_option("--bits", bits, "Bits for the square-root brackets");
  fk->callback([&] {
    action = [&] {
      std::vector<std::uint64_t> sz;
      std::vector<Rational> ls;
      std::stringstream a(sizes), b(losses);
      for (std::string t; std::getline(a, t, ',');) sz.push_back(std::stoull(t));
      for (std::string t; std::getline(b, t, ',');) ls.push_back(parse_rational(t));
      auto part = famlimit::IntervalPartition::from_sizes(sz);
      try {
        const auto kk = probtree::find_k(part, ls, bits);
        emit({{"k", kk}, {"found", true}});
        return kPass;
      } catch (const Error& e) {
        if (e.code() != Errc::prefix_exhausted) throw;
        emit({{"found", false}, {"reason", e.what()}});
        return kFail;
      }
    };
  });
  auto* sim = pt->add_subcommand("simulate", "Exact bad-branch measure of a probability tree");
  sim->add_option("--input", input, "JSON {tree, jobs: [{levels, threshold}], goodAtLeast?}")->required();
  sim->add_option("--cap", cap, "State-space cap")->default_val(1u << 22);
  sim->callback([&] { action = [&] { return run_simulate(input, cap); }; });

  // delta
  std::size_t minSize = 2;
  bool countable = false;
  std::uint64_t budget = 2'000'000;
  auto* delta = app.add_subcommand("delta", "Delta-systems and guardrails");
  delta->require_subcommand(1);
  auto* ex = delta->add_subcommand("extract", "Find a Delta-subsystem");
  ex->add_option("--input", input, "JSON list of {coords, labels}")->required();
  ex->add_option("--min-size", minSize, "Members required")->default_val(2);
  ex->add_flag("--countable", countable, "Also thin to an increasing subsystem");
  ex->add_option("--budget", budget, "Search node budget");
  ex->callback([&] { action = [&] { return run_extract(input, minSize, countable, budget); }; });
  auto* cv = delta->add_subcommand("cover", "Guardrails extending every partial map");
  cv->add_option("--input", input, "JSON {partials, universe?}")->required();
  cv->callback([&] { action = [&] { return run_cover(input); }; });

  // fam
  std::string eps;
  std::uint64_t kStar = 0;
  auto* famc = app.add_subcommand("fam", "Finite traces of finitely additive measures");
  famc->require_subcommand(1);
  auto* ap = famc->add_subcommand("approx", "Counting-measure approximation");
  ap->add_option("--input", input, "JSON measure assignment")->required();
  ap->add_option("--eps", eps, "Error bound 1/L")->required();
  ap->add_option("--kstar", kStar, "Points must exceed this");
  ap->callback([&] { action = [&] { return run_fam_approx(input, eps, kStar); }; });
  auto* ck = famc->add_subcommand("check", "Extension hypotheses (intersection or average)");
  ck->add_option("--input", input, "JSON {measure, candidates} or {measure, partition, sequences, eps, kStar, sizeCap}")
      ->required();
  ck->callback([&] { action = [&] { return run_fam_check(input); }; });

  // cichon
  std::string file;
  auto* ci = app.add_subcommand("cichon", "Cichon's diagram constraints");
  ci->require_subcommand(1);
  auto* cc = ci->add_subcommand("check", "Check an assignment of ranks");
  cc->add_option("file", file, "JSON object entry -> rank")->required();
  cc->callback([&] { action = [&] { return run_cichon_check(file); }; });
  ci->add_subcommand("enumerate", "All consistent two-valued assignments")->callback([&] {
    action = run_cichon_enumerate;
  });
  ci->add_subcommand("fixtures", "Value tables as fixtures")->callback([&] { action = run_cichon_fixtures; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }
  try {
    return action ? action() : kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Json::exception& e) {
    std::cerr << "error: input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
