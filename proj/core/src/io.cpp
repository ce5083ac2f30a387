#include "mpnormal/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mpnormal {

using nlohmann::json;

namespace {

// Collects violations while walking a document so one pass reports them all.
struct Collector {
  std::vector<std::string> errors;
  void add(std::string msg) { errors.push_back(std::move(msg)); }
};

std::optional<double> read_number(const json& j, const std::string& where, Collector& c) {
  if (!j.is_number()) {
    c.add(where + ": expected a number");
    return std::nullopt;
  }
  return j.get<double>();
}

std::optional<Matrix> read_matrix(const json& j, const std::string& where, Collector& c) {
  if (!j.is_array() || j.empty()) {
    c.add(where + ": expected a non-empty array of rows");
    return std::nullopt;
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  bool ok = true;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      c.add(rw + ": expected " + std::to_string(rows) + " entries (square matrix)");
      ok = false;
      continue;
    }
    for (Eigen::Index col = 0; col < rows; ++col) {
      const json& e = row[static_cast<std::size_t>(col)];
      const std::string ew = rw + "[" + std::to_string(col) + "]";
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        c.add(ew + ": expected [re, im]");
        ok = false;
        continue;
      }
      m(r, col) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (!ok) return std::nullopt;
  return m;
}

std::optional<Sequence> read_sequence(const json& j, const std::string& where, Collector& c) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    c.add(where + ": expected an object with a string 'kind'");
    return std::nullopt;
  }
  const auto kind = j["kind"].get<std::string>();
  auto field = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key)) {
      c.add(where + ": missing '" + key + "'");
      return std::nullopt;
    }
    return read_number(j[key], where + "." + key, c);
  };
  try {
    if (kind == "constant") {
      auto v = field("value");
      if (v) return Sequence::constant(*v);
    } else if (kind == "linear") {
      auto s = field("slope");
      auto i = field("intercept");
      if (s && i) return Sequence::linear(*s, *i);
    } else if (kind == "power") {
      auto k = field("coefficient");
      auto e = field("exponent");
      if (k && e) return Sequence::power(*k, *e);
    } else if (kind == "table") {
      std::vector<double> values;
      bool ok = j.contains("values") && j["values"].is_array();
      if (!ok) c.add(where + ": missing 'values' array");
      if (ok) {
        for (std::size_t i = 0; i < j["values"].size(); ++i) {
          auto v = read_number(j["values"][i], where + ".values[" + std::to_string(i) + "]", c);
          if (!v) ok = false;
          else values.push_back(*v);
        }
      }
      std::optional<Sequence> tail;
      if (!j.contains("tail")) {
        c.add(where + ": missing 'tail'");
      } else {
        tail = read_sequence(j["tail"], where + ".tail", c);
      }
      if (ok && tail) return Sequence::table(std::move(values), std::move(*tail));
    } else {
      c.add(where + ": unknown sequence kind '" + kind + "'");
    }
  } catch (const Error& e) {
    c.add(where + ": " + e.what());
  }
  return std::nullopt;
}

json sequence_to_json(const Sequence& s) {
  json j;
  j["kind"] = to_string(s.kind());
  switch (s.kind()) {
    case Sequence::Kind::constant: j["value"] = s.p0(); break;
    case Sequence::Kind::linear:
      j["slope"] = s.p0();
      j["intercept"] = s.p1();
      break;
    case Sequence::Kind::power:
      j["coefficient"] = s.p0();
      j["exponent"] = s.p1();
      break;
    case Sequence::Kind::table:
      j["values"] = s.values();
      j["tail"] = sequence_to_json(*s.tail());
      break;
  }
  return j;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const InstanceFile& file) {
  json j;
  j["version"] = file.version;
  j["blocks"] = json::array();
  for (const auto& b : file.blocks) {
    j["blocks"].push_back({{"interval", {b.interval().a(), b.interval().b()}},
                           {"A", matrix_to_json(b.A())},
                           {"W", matrix_to_json(b.W())}});
  }
  if (file.growth_model) {
    const auto& g = *file.growth_model;
    json gm;
    gm["lambda1"] = sequence_to_json(g.lambda1);
    gm["dims"] = sequence_to_json(g.dims);
    if (g.lengths) gm["lengths"] = sequence_to_json(*g.lengths);
    gm["scalar_blocks"] = g.scalar_blocks;
    j["growth_model"] = std::move(gm);
  }
  if (!file.tolerances.empty()) j["tolerances"] = file.tolerances;
  return j;
}

}  // namespace

InstanceError::InstanceError(ErrorCode code, std::vector<std::string> violations,
                             std::vector<std::pair<std::size_t, ValidationReport>> reports)
    : Error(code,
            [&] {
              std::ostringstream os;
              os << violations.size() << " violation(s)";
              for (const auto& v : violations) os << "\n  " << v;
              return os.str();
            }()),
      violations_(std::move(violations)),
      reports_(std::move(reports)) {}

Tolerances InstanceFile::effective_tolerances(Tolerances base) const {
  for (const auto& [name, value] : tolerances) base.set(name, value);
  return base;
}

InstanceFile parse_instance_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InstanceError(ErrorCode::ParseError, {std::string("malformed JSON: ") + e.what()});
  }

  Collector c;
  InstanceFile file;
  if (!doc.is_object()) throw InstanceError(ErrorCode::ParseError, {"top level must be an object"});

  if (!doc.contains("version") || !doc["version"].is_string()) {
    c.add("version: expected a string");
  } else {
    file.version = doc["version"].get<std::string>();
    if (file.version != kInstanceFormatVersion) c.add("version: unsupported '" + file.version + "'");
  }

  if (!doc.contains("blocks") || !doc["blocks"].is_array() || doc["blocks"].empty()) {
    c.add("blocks: expected a non-empty array");
  } else {
    for (std::size_t n = 0; n < doc["blocks"].size(); ++n) {
      const json& jb = doc["blocks"][n];
      const std::string where = "blocks[" + std::to_string(n) + "]";
      if (!jb.is_object()) {
        c.add(where + ": expected an object");
        continue;
      }
      std::optional<double> a, b;
      if (!jb.contains("interval") || !jb["interval"].is_array() || jb["interval"].size() != 2) {
        c.add(where + ".interval: expected [a, b]");
      } else {
        a = read_number(jb["interval"][0], where + ".interval[0]", c);
        b = read_number(jb["interval"][1], where + ".interval[1]", c);
      }
      std::optional<Matrix> am, wm;
      if (!jb.contains("A")) c.add(where + ": missing 'A'");
      else am = read_matrix(jb["A"], where + ".A", c);
      if (!jb.contains("W")) c.add(where + ": missing 'W'");
      else wm = read_matrix(jb["W"], where + ".W", c);
      if (!(a && b && am && wm)) continue;
      try {
        file.blocks.emplace_back(Interval(*a, *b), std::move(*am), std::move(*wm));
      } catch (const Error& e) {
        c.add(where + ": " + e.what());
      }
    }
  }

  if (doc.contains("growth_model")) {
    const json& g = doc["growth_model"];
    if (!g.is_object()) {
      c.add("growth_model: expected an object");
    } else {
      GrowthModel model;
      bool ok = true;
      for (const char* key : {"lambda1", "dims"}) {
        if (!g.contains(key)) {
          c.add(std::string("growth_model: missing '") + key + "'");
          ok = false;
          continue;
        }
        auto s = read_sequence(g[key], std::string("growth_model.") + key, c);
        if (!s) ok = false;
        else if (std::string(key) == "lambda1") model.lambda1 = *s;
        else model.dims = *s;
      }
      if (g.contains("lengths")) {
        auto s = read_sequence(g["lengths"], "growth_model.lengths", c);
        if (!s) ok = false;
        else model.lengths = *s;
      }
      if (g.contains("scalar_blocks")) {
        if (!g["scalar_blocks"].is_boolean()) {
          c.add("growth_model.scalar_blocks: expected a boolean");
          ok = false;
        } else {
          model.scalar_blocks = g["scalar_blocks"].get<bool>();
        }
      }
      if (ok) {
        try {
          model.validate();
          file.growth_model = std::move(model);
        } catch (const Error& e) {
          c.add(std::string("growth_model: ") + e.what());
        }
      }
    }
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) {
      c.add("tolerances: expected an object");
    } else {
      Tolerances probe;
      for (const auto& [key, value] : t.items()) {
        auto v = read_number(value, "tolerances." + key, c);
        if (!v) continue;
        try {
          probe.set(key, *v);
          file.tolerances[key] = *v;
        } catch (const Error& e) {
          c.add("tolerances." + key + ": " + e.what());
        }
      }
    }
  }

  if (!c.errors.empty()) throw InstanceError(ErrorCode::ParseError, std::move(c.errors));
  return file;
}

void validate_instance_file(const InstanceFile& file, const Tolerances& tol) {
  const Tolerances effective = file.effective_tolerances(tol);
  std::vector<std::string> violations;
  std::vector<std::pair<std::size_t, ValidationReport>> reports;
  for (std::size_t n = 0; n < file.blocks.size(); ++n) {
    auto report = validate_block(file.blocks[n], effective.validation);
    if (!report.valid) {
      for (const auto& r : report.reasons) violations.push_back("block " + std::to_string(n + 1) + ": " + r);
      reports.emplace_back(n + 1, std::move(report));
    }
  }
  bool order_ok = true;
  for (std::size_t n = 1; n < file.blocks.size(); ++n) {
    const auto& prev = file.blocks[n - 1].interval();
    const auto& next = file.blocks[n].interval();
    if (!(prev.b() < next.a())) {
      std::ostringstream os;
      os << "blocks " << n << " and " << n + 1 << ": intervals (" << prev.a() << ", " << prev.b() << ") and ("
         << next.a() << ", " << next.b() << ") are not disjoint and increasing";
      violations.push_back(os.str());
      order_ok = false;
    }
  }
  if (!reports.empty()) throw InstanceError(ErrorCode::ValidationError, std::move(violations), std::move(reports));
  if (!order_ok) throw InstanceError(ErrorCode::OrderError, std::move(violations));
}

InstanceFile parse_instance(const std::filesystem::path& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) throw InstanceError(ErrorCode::ParseError, {"cannot open '" + path.string() + "'"});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  InstanceFile file = parse_instance_text(buffer.str());
  validate_instance_file(file, tol);
  return file;
}

std::string serialize_instance(const InstanceFile& file) { return to_json(file).dump(2) + "\n"; }

std::string instance_digest(const InstanceFile& file) {
  const std::string canonical = to_json(file).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

}  // namespace mpnormal
