#include "fmmde/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fmmde/error.hpp"
#include "json.hpp"

namespace fmmde {

namespace {

using nlohmann::json;

struct Fnv1a {
  std::uint64_t state = 0xcbf29ce484222325ULL;
  void bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      state ^= p[i];
      state *= 0x100000001b3ULL;
    }
  }
  void text(const std::string& s) {
    bytes(s.data(), s.size());
    bytes("\0", 1);
  }
  template <class T>
  void value(T v) {
    bytes(&v, sizeof v);
  }
};

json record_to_json(const ForecastRecord& r) {
  json j = {{"target", r.target},         {"target_index", r.target_index}, {"origin", r.origin.iso()},
            {"origin_index", r.origin_index}, {"horizon", r.horizon},       {"model", model_name(r.model)},
            {"y_hat", r.y_hat},           {"y_true", r.y_true},             {"r", r.r_used},
            {"p", r.p_used}};
  if (r.k0_used) j["k0"] = *r.k0_used;
  return j;
}

ForecastRecord record_from_json(const json& j) {
  ForecastRecord r;
  r.target = j.at("target").get<std::string>();
  r.target_index = j.at("target_index").get<int>();
  r.origin = parse_date(j.at("origin").get<std::string>());
  r.origin_index = j.at("origin_index").get<int>();
  r.horizon = j.at("horizon").get<int>();
  r.model = parse_model(j.at("model").get<std::string>());
  r.y_hat = j.at("y_hat").get<double>();
  r.y_true = j.at("y_true").get<double>();
  r.r_used = j.at("r").get<int>();
  r.p_used = j.at("p").get<int>();
  if (j.contains("k0")) r.k0_used = j.at("k0").get<int>();
  return r;
}

json failure_to_json(const ForecastFailure& f) {
  return {{"target", f.target}, {"origin", f.origin.iso()}, {"horizon", f.horizon},
          {"model", model_name(f.model)}, {"message", f.message}};
}

ForecastFailure failure_from_json(const json& j) {
  ForecastFailure f;
  f.target = j.at("target").get<std::string>();
  f.origin = parse_date(j.at("origin").get<std::string>());
  f.horizon = j.at("horizon").get<int>();
  f.model = parse_model(j.at("model").get<std::string>());
  f.message = j.at("message").get<std::string>();
  return f;
}

json cv_to_json(const CvEntry& e) {
  return {{"target_index", e.target_index}, {"horizon", e.horizon}, {"k0", e.k0}, {"y_hat", e.y_hat},
          {"y_true", e.y_true},             {"r", e.r_used},        {"p", e.p_used}};
}

CvEntry cv_from_json(const json& j) {
  CvEntry e;
  e.target_index = j.at("target_index").get<int>();
  e.horizon = j.at("horizon").get<int>();
  e.k0 = j.at("k0").get<int>();
  e.y_hat = j.at("y_hat").get<double>();
  e.y_true = j.at("y_true").get<double>();
  e.r_used = j.at("r").get<int>();
  e.p_used = j.at("p").get<int>();
  return e;
}

}  // namespace

std::string run_fingerprint(const RawPanel& raw, const ForecastSpec& spec) {
  Fnv1a h;
  h.text(spec.describe());
  h.value(raw.values.rows());
  h.value(raw.values.cols());
  h.bytes(raw.values.data(), sizeof(double) * static_cast<std::size_t>(raw.values.size()));
  for (const auto& d : raw.dates) h.value(d.ordinal());
  for (const auto& m : raw.meta) {
    h.text(m.mnemonic);
    h.value(m.tcode);
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h.state;
  return os.str();
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  json doc;
  doc["format"] = "fmmde-checkpoint-1";
  doc["fingerprint"] = checkpoint.fingerprint;
  json origins = json::array();
  for (const auto& o : checkpoint.origins) {
    json jo;
    jo["origin_index"] = o.origin_index;
    jo["records"] = json::array();
    for (const auto& r : o.records) jo["records"].push_back(record_to_json(r));
    jo["failures"] = json::array();
    for (const auto& f : o.failures) jo["failures"].push_back(failure_to_json(f));
    jo["cv"] = json::array();
    for (const auto& e : o.cv) jo["cv"].push_back(cv_to_json(e));
    origins.push_back(std::move(jo));
  }
  doc["origins"] = std::move(origins);

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw InputError("cannot write checkpoint '" + tmp + "'");
    out << doc.dump();
    if (!out) throw InputError("failed writing checkpoint '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InputError("cannot move checkpoint into place: " + ec.message());
}

std::optional<Checkpoint> load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    const json doc = json::parse(in);
    if (doc.value("format", "") != "fmmde-checkpoint-1") throw InputError("unknown checkpoint format");
    Checkpoint cp;
    cp.fingerprint = doc.at("fingerprint").get<std::string>();
    for (const auto& jo : doc.at("origins")) {
      OriginResult o;
      o.origin_index = jo.at("origin_index").get<int>();
      for (const auto& r : jo.at("records")) o.records.push_back(record_from_json(r));
      for (const auto& f : jo.at("failures")) o.failures.push_back(failure_from_json(f));
      for (const auto& e : jo.at("cv")) o.cv.push_back(cv_from_json(e));
      cp.origins.push_back(std::move(o));
    }
    return cp;
  } catch (const json::exception& e) {
    throw InputError("corrupt checkpoint '" + path + "': " + e.what());
  }
}

}  // namespace fmmde
