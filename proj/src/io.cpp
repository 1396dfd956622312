#include "freelip/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace freelip {

NumberMode parse_mode(std::string_view text) {
  if (text == "exact") return NumberMode::exact;
  if (text == "float") return NumberMode::floating;
  throw Error(Errc::parse, "unknown mode '" + std::string(text) + "' (expected exact or float)");
}

const char* mode_name(NumberMode mode) { return mode == NumberMode::exact ? "exact" : "float"; }

namespace {

// A numeric cell as read: exact value plus whether the text was a plain
// integer or an explicit fraction (either keeps exact mode by default).
struct Cell {
  Rational value;
  double approx;
  bool exact_literal;
};

Cell parse_cell_text(std::string_view text) {
  const bool fraction = text.find('/') != std::string_view::npos;
  const bool decimal = text.find_first_of(".eE") != std::string_view::npos;
  Rational v = parse_rational(text);
  return {v, to_double(v), fraction || !decimal};
}

Cell parse_cell(const Json& j) {
  if (j.is_string()) return parse_cell_text(j.get<std::string>());
  if (j.is_number_integer()) {
    Rational v = parse_rational(j.dump());
    return {v, to_double(v), true};
  }
  if (j.is_number_float()) {
    const double d = j.get<double>();
    return {rational_from_double(d), d, false};
  }
  throw Error(Errc::parse, "expected a number or \"num/den\" string, got " + j.dump());
}

Index resolve_base(const std::vector<std::string>& labels, const Json* base_json, const LoadOptions& options) {
  auto by_label = [&](const std::string& name) -> Index {
    auto it = std::find(labels.begin(), labels.end(), name);
    if (it == labels.end()) throw Error(Errc::parse, "base '" + name + "' is not a label");
    return static_cast<Index>(it - labels.begin());
  };
  if (options.base) return by_label(*options.base);
  if (base_json && !base_json->is_null()) {
    if (base_json->is_string()) return by_label(base_json->get<std::string>());
    if (base_json->is_number_integer()) return base_json->get<Index>();
    throw Error(Errc::parse, "base must be a label or an index");
  }
  return 0;
}

void fill_matrices(SpaceInput& input, const std::vector<std::vector<Cell>>& cells, std::optional<NumberMode> file_mode,
                   const LoadOptions& options) {
  bool all_exact = true;
  for (const auto& row : cells)
    for (const auto& c : row) all_exact = all_exact && c.exact_literal;
  input.mode = options.mode ? *options.mode : file_mode ? *file_mode : (all_exact ? NumberMode::exact : NumberMode::floating);
  const Index n = static_cast<Index>(cells.size());
  if (input.mode == NumberMode::exact) {
    input.exact.resize(n, n);
  } else {
    input.floating.resize(n, n);
  }
  for (Index i = 0; i < n; ++i) {
    if (static_cast<Index>(cells[static_cast<std::size_t>(i)].size()) != n) {
      throw Error(Errc::parse, "matrix row " + std::to_string(i) + " has " +
                                   std::to_string(cells[static_cast<std::size_t>(i)].size()) + " entries, expected " +
                                   std::to_string(n));
    }
    for (Index j = 0; j < n; ++j) {
      const Cell& c = cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (input.mode == NumberMode::exact) {
        input.exact(i, j) = c.value;
      } else {
        input.floating(i, j) = c.approx;
      }
    }
  }
}

}  // namespace

SpaceInput parse_space_json(const Json& doc, const LoadOptions& options) {
  if (!doc.is_object()) throw Error(Errc::parse, "space document must be a JSON object");
  SpaceInput input;
  if (doc.contains("tolerance")) input.relative_tolerance = doc.at("tolerance").get<double>();
  if (options.relative_tolerance) input.relative_tolerance = *options.relative_tolerance;
  if (doc.contains("provenance")) input.metadata = doc.at("provenance");
  std::optional<NumberMode> file_mode;
  if (doc.contains("mode")) file_mode = parse_mode(doc.at("mode").get<std::string>());

  if (doc.contains("points")) {
    const Json& pts = doc.at("points");
    if (!pts.is_object() || pts.empty()) throw Error(Errc::parse, "points must be a non-empty object label -> coordinates");
    const NormKind norm = parse_norm(doc.value("norm", std::string("l2")));
    Index dim = -1;
    std::vector<std::vector<Rational>> rows;
    for (auto it = pts.begin(); it != pts.end(); ++it) {
      input.labels.push_back(it.key());
      if (!it.value().is_array()) throw Error(Errc::parse, "coordinates of '" + it.key() + "' must be a list");
      std::vector<Rational> row;
      for (const Json& c : it.value()) row.push_back(parse_cell(c).value);
      if (dim >= 0 && static_cast<Index>(row.size()) != dim) throw Error(Errc::parse, "points have different dimensions");
      dim = static_cast<Index>(row.size());
      rows.push_back(std::move(row));
    }
    Matrix<Rational> coords(static_cast<Index>(rows.size()), dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (Index c = 0; c < dim; ++c) coords(static_cast<Index>(i), c) = rows[i][static_cast<std::size_t>(c)];
    input.base = resolve_base(input.labels, doc.contains("base") ? &doc.at("base") : nullptr, options);
    const Index n = coords.rows();
    if (norm == NormKind::l2) {
      if (options.mode == NumberMode::exact || file_mode == NumberMode::exact) {
        throw Error(Errc::parse, "l2 point clouds have irrational distances; exact mode is unavailable");
      }
      input.mode = NumberMode::floating;
      auto geometry = std::make_shared<const EuclideanGeometry>(coords);
      input.floating.resize(n, n);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) input.floating(i, j) = std::sqrt(to_double(geometry->squared_distance(i, j)));
      input.geometry = std::move(geometry);
    } else {
      // Polyhedral norms: exact distances, metric excess test.
      Matrix<Rational> dist = Matrix<Rational>::Zero(n, n);
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          Rational value = 0;
          for (Index c = 0; c < dim; ++c) {
            const Rational a = abs_value(Rational(coords(i, c) - coords(j, c)));
            value = norm == NormKind::l1 ? Rational(value + a) : std::max(value, a);
          }
          dist(i, j) = value;
        }
      }
      input.mode = options.mode ? *options.mode : file_mode ? *file_mode : NumberMode::exact;
      if (input.mode == NumberMode::exact) {
        input.exact = std::move(dist);
      } else {
        input.floating = dist.unaryExpr([](const Rational& r) { return to_double(r); });
      }
    }
    return input;
  }

  if (!doc.contains("matrix")) throw Error(Errc::parse, "space document needs 'matrix' or 'points'");
  const Json& m = doc.at("matrix");
  if (!m.is_array()) throw Error(Errc::parse, "matrix must be a list of rows");
  std::vector<std::vector<Cell>> cells;
  for (const Json& row : m) {
    if (!row.is_array()) throw Error(Errc::parse, "matrix rows must be lists");
    std::vector<Cell> r;
    for (const Json& c : row) r.push_back(parse_cell(c));
    cells.push_back(std::move(r));
  }
  if (doc.contains("labels")) {
    input.labels = doc.at("labels").get<std::vector<std::string>>();
  } else {
    for (std::size_t i = 0; i < cells.size(); ++i) input.labels.push_back(std::to_string(i));
  }
  if (input.labels.size() != cells.size()) {
    throw Error(Errc::parse, std::to_string(input.labels.size()) + " labels for a matrix with " +
                                 std::to_string(cells.size()) + " rows");
  }
  input.base = resolve_base(input.labels, doc.contains("base") ? &doc.at("base") : nullptr, options);
  fill_matrices(input, cells, file_mode, options);
  return input;
}

SpaceInput parse_space_csv(std::string_view text, const LoadOptions& options) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::istringstream in{std::string(text)};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\"");
      const auto e = cell.find_last_not_of(" \t\"");
      cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw Error(Errc::parse, "empty CSV");
  SpaceInput input;
  std::vector<std::string> header = rows.front();
  if (!header.empty() && header.front().empty()) header.erase(header.begin());
  input.labels = header;
  const std::size_t n = header.size();
  if (rows.size() - 1 != n) {
    throw Error(Errc::parse, "CSV has " + std::to_string(n) + " labels but " + std::to_string(rows.size() - 1) + " rows");
  }
  std::vector<std::vector<Cell>> cells;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::vector<std::string> row = rows[r];
    if (row.size() == n + 1) row.erase(row.begin());
    std::vector<Cell> parsed;
    for (const auto& c : row) parsed.push_back(parse_cell_text(c));
    cells.push_back(std::move(parsed));
  }
  input.base = resolve_base(input.labels, nullptr, options);
  if (options.relative_tolerance) input.relative_tolerance = *options.relative_tolerance;
  fill_matrices(input, cells, std::nullopt, options);
  return input;
}

SpaceInput read_space_input(const std::string& path, const LoadOptions& options) {
  std::ifstream file(path);
  if (!file) throw Error(Errc::parse, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();
  const std::string text = buffer.str();
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  if (csv) return parse_space_csv(text, options);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("malformed JSON: ") + e.what());
  }
  try {
    return parse_space_json(doc, options);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("unexpected JSON structure: ") + e.what());
  }
}

AnySpace build_space(const SpaceInput& input) {
  if (input.mode == NumberMode::exact) {
    return ExactSpace::create(input.exact, input.labels, input.base).with_metadata(input.metadata);
  }
  return FloatSpace::create(input.floating, input.labels, input.base, input.geometry, input.relative_tolerance)
      .with_metadata(input.metadata);
}

AnySpace load_space(const std::string& path, const LoadOptions& options) {
  return build_space(read_space_input(path, options));
}

Json space_to_json(const AnySpace& any) {
  return std::visit(
      [](const auto& space) {
        Json out;
        if (space.metadata().is_object() && !space.metadata().empty()) out["provenance"] = space.metadata();
        if (const EuclideanGeometry* g = space.geometry()) {
          Json points = Json::object();
          for (Index i = 0; i < space.size(); ++i) {
            Json row = Json::array();
            for (Index c = 0; c < g->dimension(); ++c) row.push_back(format_rational(g->coords()(i, c)));
            points[space.label(i)] = std::move(row);
          }
          out["points"] = std::move(points);
          out["norm"] = "l2";
          out["base"] = space.label(space.base());
          out["mode"] = "float";
          out["tolerance"] = space.relative_tolerance();
          return out;
        }
        out["labels"] = space.labels();
        out["base"] = space.label(space.base());
        out["mode"] = mode_name(space.mode());
        if (space.mode() == NumberMode::floating) out["tolerance"] = space.relative_tolerance();
        Json matrix = Json::array();
        for (Index i = 0; i < space.size(); ++i) {
          Json row = Json::array();
          for (Index j = 0; j < space.size(); ++j) row.push_back(scalar_json(space.d(i, j)));
          matrix.push_back(std::move(row));
        }
        out["matrix"] = std::move(matrix);
        return out;
      },
      any);
}

std::string space_digest(const AnySpace& any) {
  const std::string canonical = std::visit(
      [](const auto& space) {
        std::vector<Index> order(static_cast<std::size_t>(space.size()));
        std::iota(order.begin(), order.end(), Index(0));
        std::sort(order.begin(), order.end(), [&](Index a, Index b) { return space.label(a) < space.label(b); });
        std::ostringstream s;
        s << mode_name(space.mode()) << ";base=" << space.label(space.base()) << ";labels=";
        for (Index i : order) s << space.label(i) << '\x1f';
        s << ";d=";
        for (std::size_t a = 0; a < order.size(); ++a)
          for (std::size_t b = a + 1; b < order.size(); ++b) s << format_scalar(space.d(order[a], order[b])) << ',';
        if (const EuclideanGeometry* g = space.geometry()) {
          s << ";coords=";
          for (Index i : order)
            for (Index c = 0; c < g->dimension(); ++c) s << format_rational(g->coords()(i, c)) << ',';
        }
        return s.str();
      },
      any);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(canonical.data(), canonical.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return "sha256:" + hex.str();
}

namespace {
Json number_or_inf(double x) {
  if (!std::isfinite(x)) return format_double(x);
  return x;
}
}  // namespace

Json sequence_json(const SequenceDiagnostics& d) {
  Json out;
  out["pair"] = Json::array({d.p, d.q});
  out["anchor"] = d.anchor;
  Json records = Json::array();
  for (const auto& r : d.records) {
    Json j;
    j["n"] = r.n;
    j["point"] = r.label;
    j["excess"] = number_or_inf(r.excess);
    j["distance_to_anchor"] = number_or_inf(r.distance_to_anchor);
    j["ratio"] = number_or_inf(r.ratio);
    records.push_back(std::move(j));
  }
  out["records"] = std::move(records);
  Json per_depth = Json::array();
  for (const auto& v : d.per_depth) per_depth.push_back(Json::array({v.depth, number_or_inf(v.value)}));
  out["per_depth"] = std::move(per_depth);
  out["monotone_decreasing"] = d.monotone_decreasing;
  out["limit_estimate"] = number_or_inf(d.limit_estimate);
  out["threshold"] = d.threshold;
  out["flag"] = d.flag;
  return out;
}

Json strongly_exposed_json(const StronglyExposedDiagnostics& d) {
  Json out;
  out["pair"] = Json::array({d.p, d.q});
  Json rows = Json::array();
  for (const auto& v : d.per_depth) {
    Json j;
    j["depth"] = v.depth;
    j["min_ratio"] = number_or_inf(v.min_ratio);
    j["property_z"] = v.has_property_z;
    j["witness"] = v.witness;
    j["verdict"] = v.verdict;
    rows.push_back(std::move(j));
  }
  out["per_depth"] = std::move(rows);
  out["threshold"] = d.threshold;
  out["limit_property_z"] = d.limit_property_z;
  return out;
}

Json envelope(const std::string& command, const std::string& digest, Json payload, bool with_timestamp) {
  Json out;
  out["tool"] = "freelip";
  out["version"] = kToolVersion;
  out["command"] = command;
  out["input_digest"] = digest;
  if (with_timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ts;
    ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    out["timestamp"] = ts.str();
  }
  out["payload"] = std::move(payload);
  return out;
}

}  // namespace freelip
