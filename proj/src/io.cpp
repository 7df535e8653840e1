#include "forcelab/io.hpp"

#include <fstream>
#include <sstream>

namespace forcelab::io {

namespace icl = boost::icl;

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(Errc::parse, source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                 ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open '" + path + "'", Errc::parse);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

Rational rational_from(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_unsigned()) return Rational(Natural(std::to_string(j.get<std::uint64_t>())));
  if (j.is_number_integer()) return Rational(Natural(std::to_string(j.get<std::int64_t>())));
  throw Error(Errc::parse, "expected a rational string or an integer, got " + j.dump());
}

Natural natural_from(const Json& j) {
  Rational q = rational_from(j);
  require(q.get_den() == 1 && q >= 0, "expected a natural number, got " + j.dump(), Errc::parse);
  return q.get_num();
}

Json to_json(const Rational& q) { return to_string(q); }
Json to_json(const Natural& n) { return to_string(n); }

namespace {

template <class T>
T get_as(const Json& j, const char* field) {
  require(j.contains(field), std::string("missing field '") + field + "'", Errc::parse);
  try {
    return j.at(field).get<T>();
  } catch (const Json::exception& e) {
    throw Error(Errc::parse, std::string("field '") + field + "': " + e.what());
  }
}

Json index_set_json(const creature::IndexSet& s) {
  Json out = Json::array();
  for (const auto& iv : s) out.push_back({icl::first(iv), icl::last(iv) + 1});
  return out;
}

creature::IndexSet index_set_from(const Json& j) {
  creature::IndexSet s;
  require(j.is_array(), "index sets are lists of [lo, hi) pairs or indices", Errc::parse);
  for (const auto& e : j) {
    if (e.is_array()) {
      require(e.size() == 2, "index ranges are [lo, hi) pairs", Errc::parse);
      auto lo = e[0].get<std::uint64_t>(), hi = e[1].get<std::uint64_t>();
      require(lo < hi, "empty index range", Errc::parse);
      s += creature::index_range(lo, hi);
    } else {
      s.add(e.get<std::uint64_t>());
    }
  }
  return s;
}

creature::Node node_from(const Json& j) {
  require(j.is_array(), "nodes are lists of child indices", Errc::parse);
  return j.get<creature::Node>();
}

}  // namespace

Json to_json(const creature::CreatureSpace& s) {
  Json succ = Json::array(), base = Json::array();
  for (const auto& n : s.succCounts()) succ.push_back(to_json(n));
  for (const auto& n : s.bases()) base.push_back(to_json(n));
  return {{"succ", succ}, {"base", base}};
}

creature::SpacePtr space_from(const Json& j) {
  std::vector<Natural> succ, base;
  require(j.contains("succ") && j.contains("base"), "space needs 'succ' and 'base'", Errc::parse);
  for (const auto& e : j.at("succ")) succ.push_back(natural_from(e));
  for (const auto& e : j.at("base")) base.push_back(natural_from(e));
  return creature::make_space(std::move(succ), std::move(base));
}

Json to_json(const creature::Condition& c) {
  Json levels = Json::object();
  for (const auto& [h, s] : c.level_omissions()) levels[std::to_string(h)] = index_set_json(s);
  Json nodes = Json::array();
  for (const auto& [t, s] : c.node_omissions())
    nodes.push_back({{"node", t}, {"omit", index_set_json(s)}});
  return {{"stem", c.stem()}, {"levelOmitted", levels}, {"nodeOmitted", nodes}};
}

creature::Condition condition_from(const creature::SpacePtr& space, const Json& j) {
  if (j.contains("nodes")) {
    std::vector<creature::Node> nodes;
    for (const auto& n : j.at("nodes")) nodes.push_back(node_from(n));
    return creature::Condition::from_nodes(space, nodes);
  }
  creature::Node stem = j.contains("stem") ? node_from(j.at("stem")) : creature::Node{};
  std::map<unsigned, creature::IndexSet> level;
  if (j.contains("levelOmitted"))
    for (const auto& [h, s] : j.at("levelOmitted").items())
      level[static_cast<unsigned>(std::stoul(h))] = index_set_from(s);
  creature::Condition::Omissions nodes;
  if (j.contains("nodeOmitted"))
    for (const auto& e : j.at("nodeOmitted"))
      nodes[node_from(e.at("node"))] |= index_set_from(e.at("omit"));
  return creature::Condition::make(space, std::move(stem), std::move(level), std::move(nodes));
}

Json to_json(const randomtree::RandomCondition& c) {
  return {{"depth", c.depth()}, {"words", Json(std::vector<std::string>(c.words().begin(), c.words().end()))}};
}

randomtree::RandomCondition random_condition_from(const Json& j) {
  auto words = get_as<std::vector<std::string>>(j, "words");
  return randomtree::RandomCondition(get_as<unsigned>(j, "depth"),
                                     std::set<std::string>(words.begin(), words.end()));
}

Json to_json(const fam::MeasureAssignment& m) {
  Json sets = Json::object();
  for (const auto& [name, s] : m.sets()) sets[name] = Json(std::vector<fam::Point>(s.begin(), s.end()));
  Json atoms = Json::array();
  for (const auto& a : m.atoms())
    atoms.push_back({{"atom", std::vector<fam::Point>(a.atom.begin(), a.atom.end())}, {"w", to_json(a.weight)}});
  return {{"window", m.window()}, {"sets", sets}, {"atomWeights", atoms}};
}

fam::MeasureAssignment measure_from(const Json& j) {
  std::map<std::string, fam::PointSet> sets;
  require(j.contains("sets"), "missing field 'sets'", Errc::parse);
  for (const auto& [name, s] : j.at("sets").items()) {
    auto v = s.get<std::vector<fam::Point>>();
    sets[name] = fam::PointSet(v.begin(), v.end());
  }
  std::vector<fam::AtomWeight> atoms;
  require(j.contains("atomWeights"), "missing field 'atomWeights'", Errc::parse);
  for (const auto& a : j.at("atomWeights")) {
    auto v = get_as<std::vector<fam::Point>>(a, "atom");
    atoms.push_back({fam::PointSet(v.begin(), v.end()), rational_from(a.at("w"))});
  }
  return fam::MeasureAssignment(get_as<fam::Point>(j, "window"), std::move(sets), std::move(atoms));
}

Json to_json(const fam::SupportWitness& w) {
  Json err = Json::object();
  for (const auto& [name, e] : w.perSetError) err[name] = to_json(e);
  return {{"u", std::vector<fam::Point>(w.u.begin(), w.u.end())}, {"perSetError", err}};
}

famlimit::IntervalPartition partition_from(const Json& j) {
  if (j.is_array()) return famlimit::IntervalPartition::from_sizes(j.get<std::vector<std::uint64_t>>());
  if (j.contains("sizes"))
    return famlimit::IntervalPartition::from_sizes(get_as<std::vector<std::uint64_t>>(j, "sizes"));
  return famlimit::IntervalPartition(get_as<std::vector<std::uint64_t>>(j, "boundaries"));
}

famlimit::ConditionFamily family_from(const creature::SpacePtr& space, const Json& j) {
  famlimit::ConditionFamily fam;
  require(j.contains("members"), "missing field 'members'", Errc::parse);
  for (const auto& m : j.at("members")) fam.members.push_back(condition_from(space, m));
  fam.stemStar = j.contains("stem") ? node_from(j.at("stem")) : fam.members.at(0).stem();
  if (j.contains("loss")) {
    fam.lossStar = rational_from(j.at("loss"));
  } else {
    auto l = creature::loss(fam.members.at(0));
    require(l.has_value(), "first member has no loss", Errc::parse);
    fam.lossStar = *l;
  }
  fam.offset = j.value("offset", std::uint64_t{0});
  return fam;
}

famlimit::ConditionFamily family_from(const Json& j) {
  require(j.contains("space"), "missing field 'space'", Errc::parse);
  return family_from(space_from(j.at("space")), j);
}

Json to_json(const deltasys::LabeledSupport& s) {
  Json labels = Json::array();
  for (const auto& l : s.labels) {
    Json e{{"class", std::string(deltasys::tag_name(l.tag))}};
    if (l.tag == deltasys::Tag::S0) {
      e["index"] = l.token;
    } else {
      e["stem"] = l.token;
      e["loss"] = to_json(l.loss);
    }
    labels.push_back(e);
  }
  return {{"coords", s.coords}, {"labels", labels}};
}

deltasys::LabeledSupport support_from(const Json& j) {
  deltasys::LabeledSupport s;
  s.coords = get_as<std::vector<deltasys::Coord>>(j, "coords");
  if (j.contains("labels")) {
    for (const auto& e : j.at("labels")) {
      deltasys::Label l;
      l.tag = deltasys::parse_tag(get_as<std::string>(e, "class"));
      if (l.tag == deltasys::Tag::S0) {
        l.token = e.value("index", std::string());
        l.loss = 0;
      } else {
        l.token = get_as<std::string>(e, "stem");
        l.loss = rational_from(e.at("loss"));
      }
      s.labels.push_back(std::move(l));
    }
  } else {
    // Unlabeled supports default to one uniform random-forcing label.
    s.labels.assign(s.coords.size(), deltasys::Label{deltasys::Tag::S3, "", Rational(0)});
  }
  s.validate();
  return s;
}

Json to_json(const deltasys::DeltaSystem& ds) {
  Json members = Json::array();
  for (const auto& m : ds.members) members.push_back(to_json(m));
  return {{"members", members},
          {"heart", std::vector<deltasys::Coord>(ds.heart.begin(), ds.heart.end())},
          {"size", ds.size},
          {"heartPositions", std::vector<std::size_t>(ds.heartPositions.begin(), ds.heartPositions.end())}};
}

Json to_json(const deltasys::Guardrail& g) {
  Json out = Json::object();
  for (const auto& [c, v] : g) out[std::to_string(c)] = v;
  return out;
}

deltasys::Guardrail guardrail_from(const Json& j) {
  deltasys::Guardrail g;
  require(j.is_object(), "guardrails are objects mapping coordinates to labels", Errc::parse);
  for (const auto& [c, v] : j.items()) g[std::stoull(c)] = v.get<std::string>();
  return g;
}

probtree::ProbTree probtree_from(const Json& j) {
  std::vector<probtree::TreeLevel> levels;
  for (const auto& lv : j.at("levels")) {
    probtree::TreeLevel level;
    if (lv.contains("job") && !lv.at("job").is_null()) level.job = lv.at("job").get<std::size_t>();
    for (const auto& nd : lv.at("nodes")) {
      probtree::TreeNode node;
      for (const auto& o : nd.at("outcomes"))
        node.outcomes.push_back({rational_from(o.at("p")), o.at("success").get<std::vector<bool>>(),
                                 o.value("next", std::int64_t{-1})});
      level.nodes.push_back(std::move(node));
    }
    levels.push_back(std::move(level));
  }
  return probtree::ProbTree(get_as<std::size_t>(j, "jobs"), std::move(levels));
}

Json to_json(const probtree::ProbTree& t) {
  Json levels = Json::array();
  for (const auto& lv : t.levels()) {
    Json nodes = Json::array();
    for (const auto& nd : lv.nodes) {
      Json outs = Json::array();
      for (const auto& o : nd.outcomes)
        outs.push_back({{"p", to_json(o.prob)}, {"success", o.success}, {"next", o.next}});
      nodes.push_back({{"outcomes", outs}});
    }
    levels.push_back({{"job", lv.job ? Json(*lv.job) : Json(nullptr)}, {"nodes", nodes}});
  }
  return {{"jobs", t.job_count()}, {"levels", levels}};
}

cichon::Assignment assignment_from(const Json& j) {
  require(j.is_object(), "an assignment is an object of entry ranks", Errc::parse);
  cichon::Assignment a{};
  std::array<bool, cichon::kEntries> seen{};
  for (const auto& [k, v] : j.items()) {
    auto e = cichon::parse_entry(k);
    require(e.has_value(), "unknown diagram entry '" + k + "'", Errc::parse);
    cichon::at(a, *e) = v.get<long>();
    seen[static_cast<std::size_t>(*e)] = true;
  }
  const bool hasAddM = seen[static_cast<std::size_t>(cichon::Entry::addM)];
  const bool hasCofM = seen[static_cast<std::size_t>(cichon::Entry::cofM)];
  for (cichon::Entry e : cichon::all_entries()) {
    if (e == cichon::Entry::addM || e == cichon::Entry::cofM) continue;
    require(seen[static_cast<std::size_t>(e)],
            "missing diagram entry '" + std::string(cichon::key(e)) + "'", Errc::parse);
  }
  require(hasAddM == hasCofM, "give both add(M) and cof(M) or neither", Errc::parse);
  return hasAddM ? a : cichon::complete(a);
}

Json to_json(const cichon::Assignment& a) {
  Json out = Json::object();
  for (cichon::Entry e : cichon::all_entries()) out[std::string(cichon::key(e))] = cichon::at(a, e);
  return out;
}

}  // namespace forcelab::io
