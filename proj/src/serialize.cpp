#include "mixcex/serialize.hpp"

#include <fstream>
#include <sstream>

#include "mixcex/errors.hpp"

namespace mixcex {

namespace {

using nlohmann::json;

json rat_pair(const RatBounds& b) {
  return json::array({rational_string(b.lo), rational_string(b.hi)});
}

json profile_constants(const BumpProfile& p) {
  json c;
  c["argmax"] = rational_string(p.argmax());
  c["max"] = rat_pair(p.max_value());
  c["integral"] = rat_pair(p.integral());
  c["sup_d1"] = rat_pair(p.sup_d1());
  c["sup_d2"] = rat_pair(p.sup_d2());
  return c;
}

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw io_error(std::string("instance file: missing key '") + key + "'");
  return *it;
}

Rat rat_field(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_string()) throw io_error(std::string("instance file: '") + key + "' must be a string");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const error& ex) {
    throw io_error(std::string("instance file: bad rational in '") + key + "': " + ex.what());
  }
}

}  // namespace

json instance_to_json(const Instance& inst) {
  json doc;
  doc["schema_version"] = kSchemaVersion;

  json cantor;
  cantor["depth"] = inst.set.depth;
  cantor["ratio"] = rational_string(inst.set.ratio);
  json intervals = json::array();
  for (const Interval& iv : inst.set.intervals) {
    json one;
    one["n"] = iv.index;
    one["g"] = iv.generation;
    one["a"] = rational_string(iv.a);
    one["b"] = rational_string(iv.b);
    intervals.push_back(std::move(one));
  }
  cantor["intervals"] = std::move(intervals);
  doc["cantor"] = std::move(cantor);

  json profile;
  profile["id"] = inst.profile.id();
  profile["constants"] = profile_constants(inst.profile);
  doc["profile"] = std::move(profile);

  json schedule = json::array();
  for (const ScheduleEntry& e : inst.schedule.entries()) {
    json one;
    one["n"] = e.index;
    one["eps"] = rational_string(e.eps);
    one["delta"] = rational_string(e.delta);
    one["q"] = integer_string(e.freq);
    schedule.push_back(std::move(one));
  }
  doc["schedule"] = std::move(schedule);

  json prov;
  prov["builder"] = "mixcex";
  prov["version"] = kToolVersion;
  prov["depth"] = inst.set.depth;
  prov["ratio"] = rational_string(inst.set.ratio);
  prov["eps_rule"] = inst.schedule.eps_rule();
  prov["delta_rule"] = inst.schedule.delta_rule();
  prov["profile"] = inst.profile.id();
  doc["provenance"] = std::move(prov);
  return doc;
}

Instance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw io_error("instance file: root must be an object");
  if (require(doc, "schema_version").get<int>() != kSchemaVersion)
    throw io_error("instance file: unsupported schema_version");

  const json& cantor = require(doc, "cantor");
  const int depth = require(cantor, "depth").get<int>();
  const Rat ratio = rat_field(cantor, "ratio");

  CantorSet set;
  try {
    set = build_cantor(depth, ratio);
  } catch (const error& ex) {
    throw io_error(std::string("instance file: bad construction parameters: ") + ex.what());
  }

  const json& intervals = require(cantor, "intervals");
  if (!intervals.is_array() || static_cast<int>(intervals.size()) != set.count())
    throw io_error("instance file: interval list inconsistent with depth");
  for (int n = 1; n <= set.count(); ++n) {
    const json& one = intervals[static_cast<std::size_t>(n - 1)];
    const Interval& iv = set.interval(n);
    if (require(one, "n").get<int>() != iv.index || require(one, "g").get<int>() != iv.generation ||
        rat_field(one, "a") != iv.a || rat_field(one, "b") != iv.b)
      throw io_error("instance file: interval " + std::to_string(n) +
                     " disagrees with the construction rule");
  }

  const json& profile_doc = require(doc, "profile");
  BumpProfile profile = BumpProfile::by_name(require(profile_doc, "id").get<std::string>());

  const json& prov = require(doc, "provenance");
  const std::string eps_rule = require(prov, "eps_rule").get<std::string>();
  const std::string delta_rule = require(prov, "delta_rule").get<std::string>();

  const json& schedule_doc = require(doc, "schedule");
  if (!schedule_doc.is_array() || static_cast<int>(schedule_doc.size()) != set.count())
    throw io_error("instance file: schedule length inconsistent with depth");

  KernelSchedule schedule;
  if (eps_rule == "cube" && delta_rule == "triangular") {
    schedule = make_schedule(set);
  } else {
    std::vector<Rat> eps_table, delta_table;
    eps_table.reserve(schedule_doc.size());
    delta_table.reserve(schedule_doc.size());
    for (const json& one : schedule_doc) {
      eps_table.push_back(rat_field(one, "eps"));
      delta_table.push_back(rat_field(one, "delta"));
    }
    try {
      schedule = make_schedule(set, eps_table, delta_table);
    } catch (const error& ex) {
      throw io_error(std::string("instance file: stored schedule rejected: ") + ex.what());
    }
  }
  for (int n = 1; n <= set.count(); ++n) {
    const json& one = schedule_doc[static_cast<std::size_t>(n - 1)];
    const ScheduleEntry& e = schedule.entry(n);
    Int q;
    if (q.set_str(require(one, "q").get<std::string>(), 10) != 0)
      throw io_error("instance file: bad integer in 'q'");
    if (require(one, "n").get<int>() != e.index || rat_field(one, "eps") != e.eps ||
        rat_field(one, "delta") != e.delta || q != e.freq)
      throw io_error("instance file: schedule entry " + std::to_string(n) +
                     " disagrees with the stored rules");
  }

  return assemble(std::move(set), std::move(profile), std::move(schedule));
}

std::string canonical_dump(const json& doc) { return doc.dump(2) + "\n"; }

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for write: " + path);
  out << canonical_dump(instance_to_json(inst));
  if (!out) throw io_error("write failed: " + path);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& ex) {
    throw io_error("parse failed for " + path + ": " + ex.what());
  }
  return instance_from_json(doc);
}

json eval_to_json(const Eval& e) {
  json doc;
  doc["x"] = rational_string(e.x);
  doc["y"] = rational_string(e.y);
  doc["f"] = e.f;
  doc["fx"] = e.fx;
  doc["fy"] = e.fy;
  doc["fxx"] = e.fxx;
  doc["fyy"] = e.fyy;
  doc["f_err"] = e.f_err;
  doc["fx_err"] = e.fx_err;
  doc["fy_err"] = e.fy_err;
  doc["fxx_err"] = e.fxx_err;
  doc["fyy_err"] = e.fyy_err;
  if (e.active)
    doc["active"] = *e.active;
  else
    doc["active"] = nullptr;
  doc["exact_zero"] = e.exact_zero;
  return doc;
}

json witness_to_json(const Witness& w) {
  json doc;
  doc["x0"] = rational_string(w.x0);
  doc["y0"] = rational_string(w.y0);
  doc["m"] = w.m;
  doc["k"] = w.k;
  doc["y_k"] = rational_string(w.y_k);
  doc["delta"] = rational_string(w.delta);
  doc["osc"] = w.osc;
  doc["osc_err"] = w.osc_err;
  doc["bound"] = rational_string(w.bound);
  doc["certified"] = w.certified;
  return doc;
}

json probe_to_json(const std::vector<QuotientProbeRow>& rows) {
  json arr = json::array();
  for (const QuotientProbeRow& r : rows) {
    json one;
    one["step"] = rational_string(r.step);
    one["quotient"] = r.quotient;
    one["lower_bound"] = r.lower_bound;
    arr.push_back(std::move(one));
  }
  return arr;
}

json tail_certificate_to_json(const TailCertificate& t) {
  json doc;
  doc["sup_d1"] = rational_string(t.sup_d1);
  doc["sup_d2"] = rational_string(t.sup_d2);
  doc["d1_nonincreasing"] = t.d1_nonincreasing;
  doc["d2_nonincreasing"] = t.d2_nonincreasing;
  json arr = json::array();
  for (const TailBound& b : t.per_index) {
    json one;
    one["n"] = b.index;
    one["g"] = b.generation;
    one["d1_bound"] = rational_string(b.d1_bound);
    one["d2_bound"] = rational_string(b.d2_bound);
    arr.push_back(std::move(one));
  }
  doc["per_index"] = std::move(arr);
  return doc;
}

}  // namespace mixcex
