#include "credal_mcdm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "credal_mcdm/error.hpp"
#include "credal_mcdm/group_model.hpp"

namespace credal_mcdm {

namespace {

using nlohmann::json;

int line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::string regex_escape(const std::string& s) {
  static const std::regex special(R"([.^$|()\[\]{}*+?\\])");
  return std::regex_replace(s, special, R"(\$&)");
}

// Line of the first `"key": ...` in the raw text, 0 if absent.
int line_of_key(std::string_view text, const std::string& key) {
  const std::string needle = "\"" + key + "\"";
  const auto pos = text.find(needle);
  return pos == std::string_view::npos ? 0 : line_at(text, pos);
}

// Line of the decision-maker object whose "id" is `id`.
int line_of_dm(std::string_view text, const std::string& id) {
  const std::regex pattern("\"id\"\\s*:\\s*\"" + regex_escape(id) + "\"");
  std::match_results<std::string_view::const_iterator> m;
  if (std::regex_search(text.begin(), text.end(), m, pattern)) {
    return line_at(text, static_cast<std::size_t>(m.position(0)));
  }
  return 0;
}

struct Context {
  std::string_view text;
  int line = 0;

  [[noreturn]] void fail(const std::string& message) const { throw DatasetError(line, message); }
};

double parse_number(const json& j, const Context& ctx, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    auto to_double = [&](std::string_view part) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (ec != std::errc() || ptr != part.data() + part.size()) ctx.fail(where + ": cannot read '" + s + "' as a number");
      return v;
    };
    if (slash == std::string::npos) return to_double(s);
    const double den = to_double(std::string_view(s).substr(slash + 1));
    if (den == 0.0) ctx.fail(where + ": division by zero in '" + s + "'");
    return to_double(std::string_view(s).substr(0, slash)) / den;
  }
  ctx.fail(where + ": expected a number");
}

double field(const json& obj, const char* key, const Context& ctx, const std::string& where) {
  if (!obj.contains(key)) ctx.fail(where + ": missing \"" + key + "\"");
  return parse_number(obj.at(key), ctx, where + "." + key);
}

UncertainValue parse_value(const json& j, const Context& ctx, const std::string& where) {
  if (!j.is_object()) return UncertainValue::point(parse_number(j, ctx, where));
  if (!j.contains("kind") || !j.at("kind").is_string()) ctx.fail(where + ": uncertain entry needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "point") return UncertainValue::point(field(j, "value", ctx, where));
  if (kind == "normal") {
    const double mean = field(j, "mean", ctx, where);
    const double sd = field(j, "sd", ctx, where);
    if (j.contains("lo") || j.contains("hi")) {
      return UncertainValue::truncated_normal(mean, sd, field(j, "lo", ctx, where), field(j, "hi", ctx, where));
    }
    return UncertainValue::normal(mean, sd);
  }
  if (kind == "interval") return UncertainValue::interval(field(j, "lo", ctx, where), field(j, "hi", ctx, where));
  if (kind == "triangular") {
    return UncertainValue::triangular(field(j, "lo", ctx, where), field(j, "hi", ctx, where));
  }
  ctx.fail(where + ": unknown kind '" + kind + "'");
}

std::vector<UncertainValue> parse_vector(const json& j, const Context& ctx, const std::string& where) {
  if (!j.is_array()) ctx.fail(where + ": expected an array");
  std::vector<UncertainValue> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(parse_value(j[k], ctx, where + "[" + std::to_string(k + 1) + "]"));
  }
  return out;
}

Eigen::Index criterion_index(const json& j, const std::vector<std::string>& criteria, const Context& ctx,
                             const std::string& where) {
  if (j.is_string()) {
    const auto it = std::find(criteria.begin(), criteria.end(), j.get<std::string>());
    if (it == criteria.end()) ctx.fail(where + ": unknown criterion '" + j.get<std::string>() + "'");
    return static_cast<Eigen::Index>(it - criteria.begin());
  }
  if (j.is_number_integer()) {
    const auto k = j.get<long long>();
    if (k < 1 || k > static_cast<long long>(criteria.size())) ctx.fail(where + ": criterion index out of range");
    return static_cast<Eigen::Index>(k - 1);
  }
  ctx.fail(where + ": expected a criterion label or 1-based index");
}

Eigen::Index first_unit(const std::vector<UncertainValue>& values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k].is_point() && values[k].first == 1.0) return static_cast<Eigen::Index>(k);
  }
  return -1;
}

PreferenceRecord parse_record(const json& j, const std::vector<std::string>& criteria, Context& ctx,
                              std::size_t position) {
  if (!j.is_object()) ctx.fail("decisionMakers[" + std::to_string(position + 1) + "] must be an object");
  if (!j.contains("id") || !j.at("id").is_string()) {
    ctx.fail("decisionMakers[" + std::to_string(position + 1) + "] needs a string \"id\"");
  }
  PreferenceRecord record;
  record.dm_id = j.at("id").get<std::string>();
  ctx.line = line_of_dm(ctx.text, record.dm_id);
  const std::string who = "DM '" + record.dm_id + "'";
  if (!j.contains("method") || !j.at("method").is_string()) ctx.fail(who + ": missing \"method\"");
  const std::string method = j.at("method").get<std::string>();

  if (method == "ahp") {
    if (!j.contains("pcm") || !j.at("pcm").is_array()) ctx.fail(who + ": missing \"pcm\"");
    const json& rows = j.at("pcm");
    const auto n = static_cast<Eigen::Index>(rows.size());
    PairwiseMatrix m;
    m.size = n;
    m.entries.resize(static_cast<std::size_t>(n * n));
    std::vector<bool> missing(static_cast<std::size_t>(n * n), false);
    for (Eigen::Index i = 0; i < n; ++i) {
      const json& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) ctx.fail(who + ": pcm must be square");
      for (Eigen::Index k = 0; k < n; ++k) {
        const json& e = row[static_cast<std::size_t>(k)];
        if (e.is_null()) {
          missing[static_cast<std::size_t>(i * n + k)] = true;
          continue;
        }
        m.at(i, k) = parse_value(e, ctx, who + " pcm(" + std::to_string(i + 1) + "," + std::to_string(k + 1) + ")");
      }
    }
    // Null lower-triangle entries mirror the upper triangle.
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < n; ++k) {
        if (!missing[static_cast<std::size_t>(i * n + k)]) continue;
        if (k >= i || missing[static_cast<std::size_t>(k * n + i)]) {
          ctx.fail(who + ": only lower-triangle pcm entries may be null");
        }
        m.at(i, k) = UncertainValue::point(1.0 / m.at(k, i).initial_value());
      }
    }
    record.payload = std::move(m);
  } else if (method == "bwm") {
    for (const char* key : {"bestToOthers", "othersToWorst"}) {
      if (!j.contains(key)) ctx.fail(who + ": missing \"" + key + "\"");
    }
    BestWorst b;
    b.best_to_others = parse_vector(j.at("bestToOthers"), ctx, who + " bestToOthers");
    b.others_to_worst = parse_vector(j.at("othersToWorst"), ctx, who + " othersToWorst");
    b.best = j.contains("best") ? criterion_index(j.at("best"), criteria, ctx, who + " best") : first_unit(b.best_to_others);
    b.worst = j.contains("worst") ? criterion_index(j.at("worst"), criteria, ctx, who + " worst")
                                  : first_unit(b.others_to_worst);
    if (b.best < 0 || b.worst < 0) ctx.fail(who + ": cannot infer the best or worst criterion; give \"best\"/\"worst\"");
    record.payload = std::move(b);
  } else if (method == "pointAllocation" || method == "smart" || method == "swing") {
    if (!j.contains("values")) ctx.fail(who + ": missing \"values\"");
    ValueVector v;
    v.method = method == "smart" ? ValueMethod::smart
                                 : (method == "swing" ? ValueMethod::swing : ValueMethod::point_allocation);
    v.values = parse_vector(j.at("values"), ctx, who + " values");
    record.payload = std::move(v);
  } else {
    ctx.fail(who + ": unknown method '" + method + "'");
  }

  if (record.criteria_count() != static_cast<Eigen::Index>(criteria.size())) {
    ctx.fail(who + " rates " + std::to_string(record.criteria_count()) + " criteria, the dataset has " +
             std::to_string(criteria.size()));
  }
  try {
    validate(record);
  } catch (const Error& e) {
    ctx.fail(e.what());
  }
  return record;
}

std::vector<std::string> parse_labels(const json& j, Context& ctx, const char* key) {
  ctx.line = line_of_key(ctx.text, key);
  if (!j.contains(key) || !j.at(key).is_array()) ctx.fail(std::string("missing \"") + key + "\" list");
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (const auto& e : j.at(key)) {
    if (!e.is_string()) ctx.fail(std::string(key) + " entries must be strings");
    const std::string label = e.get<std::string>();
    if (!seen.insert(label).second) ctx.fail(std::string(key) + ": duplicate label '" + label + "'");
    labels.push_back(label);
  }
  return labels;
}

Eigen::MatrixXd parse_matrix(const json& j, Eigen::Index rows, Eigen::Index cols, const Context& ctx,
                             const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    ctx.fail(where + ": expected " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      ctx.fail(where + ": row " + std::to_string(i + 1) + " needs " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      m(i, k) = parse_number(row[static_cast<std::size_t>(k)], ctx, where);
    }
  }
  return m;
}

}  // namespace

DatasetError::DatasetError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

Dataset parse_dataset(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw DatasetError(line_at(text, e.byte > 0 ? e.byte - 1 : 0), std::string("invalid JSON: ") + e.what());
  }
  Context ctx{text, 1};
  if (!root.is_object()) ctx.fail("dataset must be a JSON object");

  Dataset data;
  ctx.line = line_of_key(text, "schemaVersion");
  if (!root.contains("schemaVersion") || !root.at("schemaVersion").is_string()) {
    ctx.fail("missing \"schemaVersion\"");
  }
  data.schema_version = root.at("schemaVersion").get<std::string>();
  if (data.schema_version != "1") ctx.fail("unsupported schemaVersion '" + data.schema_version + "'");

  data.criteria = parse_labels(root, ctx, "criteria");
  if (data.criteria.size() < 2) ctx.fail("at least two criteria are required");

  ctx.line = line_of_key(text, "decisionMakers");
  if (!root.contains("decisionMakers") || !root.at("decisionMakers").is_array() || root.at("decisionMakers").empty()) {
    ctx.fail("\"decisionMakers\" must be a non-empty list");
  }
  std::set<std::string> ids;
  const json& dms = root.at("decisionMakers");
  for (std::size_t r = 0; r < dms.size(); ++r) {
    data.records.push_back(parse_record(dms[r], data.criteria, ctx, r));
    if (!ids.insert(data.records.back().dm_id).second) {
      ctx.fail("duplicate decision-maker id '" + data.records.back().dm_id + "'");
    }
  }

  if (root.contains("performance")) {
    const json& p = root.at("performance");
    ctx.line = line_of_key(text, "performance");
    if (!p.is_object()) ctx.fail("\"performance\" must be an object");
    const auto alternatives = parse_labels(p, ctx, "alternatives");
    ctx.line = line_of_key(text, "performance");
    if (!p.contains("values")) ctx.fail("performance needs \"values\"");
    const Eigen::MatrixXd raw = parse_matrix(p.at("values"), static_cast<Eigen::Index>(alternatives.size()),
                                             static_cast<Eigen::Index>(data.criteria.size()), ctx, "performance values");
    std::vector<CriterionType> types(data.criteria.size(), CriterionType::benefit);
    if (p.contains("criterionTypes")) {
      const json& t = p.at("criterionTypes");
      if (!t.is_array() || t.size() != data.criteria.size()) ctx.fail("criterionTypes needs one entry per criterion");
      for (std::size_t k = 0; k < t.size(); ++k) {
        const std::string s = t[k].is_string() ? t[k].get<std::string>() : "";
        if (s == "cost") {
          types[k] = CriterionType::cost;
        } else if (s != "benefit") {
          ctx.fail("criterionTypes entries must be \"benefit\" or \"cost\"");
        }
      }
    }
    const bool normalized = p.contains("normalized") && p.at("normalized").is_boolean() && p.at("normalized").get<bool>();
    try {
      data.performance = PerformanceMatrix::from_values(alternatives, data.criteria,
                                                        normalized ? raw : normalize_performance(raw, types));
    } catch (const Error& e) {
      ctx.fail(e.what());
    }
  }

  if (root.contains("covariance")) {
    const json& c = root.at("covariance");
    ctx.line = line_of_key(text, "covariance");
    const auto n = static_cast<Eigen::Index>(data.criteria.size());
    if (c.is_string()) {
      if (c.get<std::string>() != "fromPerformance") ctx.fail("covariance must be a matrix or \"fromPerformance\"");
      if (!data.performance) ctx.fail("covariance \"fromPerformance\" needs a performance block");
      try {
        data.covariance = covariance_from_performance(data.performance->values);
      } catch (const Error& e) {
        ctx.fail(e.what());
      }
    } else {
      data.covariance = parse_matrix(c, n, n, ctx, "covariance");
    }
  }
  return data;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(0, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

Eigen::MatrixXd normalize_performance(const Eigen::MatrixXd& raw, const std::vector<CriterionType>& types) {
  if (static_cast<Eigen::Index>(types.size()) != raw.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "one criterion type per column required");
  }
  Eigen::MatrixXd out(raw.rows(), raw.cols());
  for (Eigen::Index k = 0; k < raw.cols(); ++k) {
    const double lo = raw.col(k).minCoeff();
    const double hi = raw.col(k).maxCoeff();
    if (!(hi > lo)) {
      out.col(k).setOnes();
      continue;
    }
    out.col(k) = (raw.col(k).array() - lo) / (hi - lo);
    if (types[static_cast<std::size_t>(k)] == CriterionType::cost) out.col(k) = (1.0 - out.col(k).array()).matrix();
  }
  return out;
}

std::string format_number(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string samples_csv(const PosteriorSamples& samples) {
  std::string out = "chain,iteration";
  for (const auto& name : samples.column_names()) out += "," + name;
  out += "\n";
  for (std::size_t c = 0; c < samples.chains.size(); ++c) {
    const Eigen::MatrixXd& draws = samples.chains[c];
    for (Eigen::Index q = 0; q < draws.rows(); ++q) {
      out += std::to_string(c + 1) + "," + std::to_string(q + 1);
      for (Eigen::Index k = 0; k < draws.cols(); ++k) {
        out += ",";
        out += format_number(draws(q, k));
      }
      out += "\n";
    }
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace credal_mcdm
