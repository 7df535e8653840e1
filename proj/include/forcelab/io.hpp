#pragma once

// JSON forms of the library types. Rationals and big naturals are written as
// strings ("p/q", "123"); readers also accept plain JSON integers.

#include <json.hpp>

#include <string>

#include "forcelab/cichon.hpp"
#include "forcelab/creature.hpp"
#include "forcelab/deltasys.hpp"
#include "forcelab/fam.hpp"
#include "forcelab/famlimit.hpp"
#include "forcelab/probtree.hpp"
#include "forcelab/randomtree.hpp"

namespace forcelab::io {

using Json = nlohmann::json;

/// Parses JSON text; errors carry "source:line:column".
Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);

Rational rational_from(const Json& j);
Natural natural_from(const Json& j);
Json to_json(const Rational& q);
Json to_json(const Natural& n);

Json to_json(const creature::CreatureSpace& s);
creature::SpacePtr space_from(const Json& j);

/// {"stem", "levelOmitted": {"h": [[lo, hi), ...]}, "nodeOmitted": [{"node", "omit"}]}
/// or {"nodes": [[...], ...]} for an explicit node list.
Json to_json(const creature::Condition& c);
creature::Condition condition_from(const creature::SpacePtr& space, const Json& j);

Json to_json(const randomtree::RandomCondition& c);
randomtree::RandomCondition random_condition_from(const Json& j);

Json to_json(const fam::MeasureAssignment& m);
fam::MeasureAssignment measure_from(const Json& j);
Json to_json(const fam::SupportWitness& w);

famlimit::IntervalPartition partition_from(const Json& j);
/// {"space", "stem", "loss", "offset", "members": [condition, ...]}
famlimit::ConditionFamily family_from(const Json& j);
famlimit::ConditionFamily family_from(const creature::SpacePtr& space, const Json& j);

Json to_json(const deltasys::LabeledSupport& s);
deltasys::LabeledSupport support_from(const Json& j);
Json to_json(const deltasys::DeltaSystem& ds);
Json to_json(const deltasys::Guardrail& g);
deltasys::Guardrail guardrail_from(const Json& j);

probtree::ProbTree probtree_from(const Json& j);
Json to_json(const probtree::ProbTree& t);

/// Twelve entries, or ten with add(ℳ) and cof(ℳ) filled in.
cichon::Assignment assignment_from(const Json& j);
Json to_json(const cichon::Assignment& a);

}  // namespace forcelab::io
