#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "freelip/io.hpp"

using namespace freelip;

namespace {

enum Exit { ok = 0, failure = 1, invalid_space = 2, inconsistent = 3 };

struct Options {
  std::string path;
  std::string format;
  std::string mode;
  std::optional<double> tolerance;
  std::string base;
  bool json = false;
  bool no_timestamp = false;
};

class OracleDisagreement : public std::runtime_error {
 public:
  OracleDisagreement(const std::string& what, Json dump) : std::runtime_error(what), dump_(std::move(dump)) {}
  const Json& dump() const { return dump_; }

 private:
  Json dump_;
};

// Raised once invalid input has been reported; carries the exit code.
struct Reported {
  int code;
};

LoadOptions load_options(const Options& o) {
  LoadOptions out;
  if (!o.mode.empty()) out.mode = parse_mode(o.mode);
  out.relative_tolerance = o.tolerance;
  if (!o.base.empty()) out.base = o.base;
  return out;
}

SpaceInput read_input(const Options& o) {
  if (o.format.empty()) return read_space_input(o.path, load_options(o));
  if (o.format == "csv") {
    std::ifstream f(o.path);
    if (!f) throw Error(Errc::parse, "cannot open '" + o.path + "'");
    std::stringstream s;
    s << f.rdbuf();
    return parse_space_csv(s.str(), load_options(o));
  }
  if (o.format == "json") {
    std::ifstream f(o.path);
    if (!f) throw Error(Errc::parse, "cannot open '" + o.path + "'");
    Json doc;
    try {
      doc = Json::parse(f);
      return parse_space_json(doc, load_options(o));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::parse, e.what());
    }
  }
  throw Error(Errc::parse, "unknown format '" + o.format + "' (expected json or csv)");
}

void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      out << std::left << std::setw(static_cast<int>(width[c])) << r[c];
      out << (c + 1 < r.size() ? "  " : "");
    }
    out << '\n';
  };
  line(header);
  std::vector<std::string> rule;
  for (auto w : width) rule.push_back(std::string(w, '-'));
  line(rule);
  for (const auto& r : rows) line(r);
}

std::string text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

template <class Scalar>
void report_violations(const Options& o, const std::vector<Violation<Scalar>>& violations,
                       const std::vector<std::string>& labels, std::ostream& out) {
  const Json list = violations_json(violations, labels);
  if (o.json) {
    Json doc;
    doc["valid"] = false;
    doc["violations"] = list;
    out << doc.dump(2) << '\n';
    return;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& v : list) {
    rows.push_back({text(v["kind"]), v.contains("i") ? text(v["i"]) : "", v.contains("j") ? text(v["j"]) : "",
                    v.contains("k") ? text(v["k"]) : "", v.contains("deficit") ? text(v["deficit"]) : ""});
  }
  out << "invalid metric: " << list.size() << " violation(s)\n";
  print_table(out, {"kind", "i", "j", "k", "deficit"}, rows);
}

/// Loads and validates; invalid spaces are itemized on `out` and abort the
/// command with exit 2.
AnySpace load(const Options& o, std::ostream& violations_out) {
  const SpaceInput input = read_input(o);
  try {
    return build_space(input);
  } catch (const ValidationError<Rational>& e) {
    report_violations(o, e.violations(), input.labels, violations_out);
  } catch (const ValidationError<double>& e) {
    report_violations(o, e.violations(), input.labels, violations_out);
  }
  throw Reported{invalid_space};
}

void emit(const Options& o, const std::string& command, const std::string& digest, const Json& payload,
          const std::function<void()>& table) {
  if (o.json) {
    std::cout << envelope(command, digest, payload, !o.no_timestamp).dump(2) << '\n';
  } else {
    table();
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& o) {
  const AnySpace space = load(o, std::cout);
  const std::string digest = space_digest(space);
  const Index n = std::visit([](const auto& s) { return s.size(); }, space);
  Json payload;
  payload["valid"] = true;
  payload["points"] = n;
  payload["mode"] = std::visit([](const auto& s) { return std::string(mode_name(s.mode())); }, space);
  payload["space_digest"] = digest;
  emit(o, "validate", digest, payload, [&] {
    std::cout << "valid metric space: " << n << " points, " << text(payload["mode"]) << " mode, " << digest << '\n';
  });
  return ok;
}

template <class Scalar>
std::vector<std::string> verdict_row(const MetricSpace<Scalar>& s, const PairVerdict<Scalar>& v) {
  return {s.label(v.p), s.label(v.q), v.is_extreme ? "yes" : "no",
          v.witness_middle ? s.label(*v.witness_middle) : "-",
          v.is_extreme ? "yes" : "no",
          v.min_ratio ? format_scalar(*v.min_ratio) : "inf"};
}

template <class Scalar>
Json oracle_check(const MetricSpace<Scalar>& space, const std::vector<PairVerdict<Scalar>>& verdicts) {
  Json certificates = Json::array();
  for (const auto& v : verdicts) {
    for (const auto& [p, q] : {std::pair{v.p, v.q}, std::pair{v.q, v.p}}) {
      VertexCertificate<Scalar> cert;
      try {
        cert = is_vertex(space, p, q);
      } catch (const Error& e) {
        if (e.code() != Errc::lp_failure) throw;
        Json dump;
        dump["verdict"] = verdict_json(space, v);
        dump["oracle_error"] = e.what();
        throw OracleDisagreement(e.what(), dump);
      }
      Json c = vertex_certificate_json(space, p, q, cert);
      if (cert.vertex != v.is_extreme) {
        Json dump;
        dump["verdict"] = verdict_json(space, v);
        dump["oracle"] = c;
        throw OracleDisagreement("oracle disagrees on (" + space.label(p) + "," + space.label(q) + ")", dump);
      }
      certificates.push_back(std::move(c));
    }
  }
  return certificates;
}

int cmd_classify(const Options& o, const std::vector<std::string>& pair, bool oracle) {
  const AnySpace any = load(o, std::cerr);
  const std::string digest = space_digest(any);
  return std::visit(
      [&](const auto& space) {
        using S = std::decay_t<decltype(space.d(0, 0))>;
        Json payload;
        std::vector<PairVerdict<S>> verdicts;
        std::vector<AlignedTriple> triples;
        bool concave = true;
        if (!pair.empty()) {
          verdicts.push_back(classify_pair(space, space.index_of(pair[0]), space.index_of(pair[1])));
          payload = verdict_json(space, verdicts.front());
        } else {
          ConcavityReport<S> report = classify_all(space, thread_budget());
          payload = concavity_json(space, report);
          triples = report.violating_triples;
          concave = report.is_concave;
          verdicts = std::move(report.verdicts);
        }
        if (oracle) {
          detail::require_oracle(space, OracleOptions{});
          payload["oracle"] = oracle_check(space, verdicts);
          payload["oracle_agrees"] = true;
        }
        emit(o, "classify", digest, payload, [&] {
          std::vector<std::vector<std::string>> rows;
          for (const auto& v : verdicts) rows.push_back(verdict_row(space, v));
          print_table(std::cout, {"p", "q", "extreme", "middle", "strongly_exposed", "min_ratio"}, rows);
          if (pair.empty()) {
            std::cout << "\nconcave: " << (concave ? "yes" : "no") << ", aligned triples: " << triples.size() << '\n';
            for (const auto& t : triples) {
              std::cout << "  " << space.label(t.middle) << " between " << space.label(t.end1) << " and "
                        << space.label(t.end2) << '\n';
            }
          }
          if (oracle) std::cout << "oracle: agrees on all " << 2 * verdicts.size() << " ordered pairs\n";
        });
        return int(ok);
      },
      any);
}

int cmd_modulus(const Options& o, const std::string& p_label, const std::string& q_label,
                const std::string& eps_list) {
  const AnySpace any = load(o, std::cerr);
  const std::string digest = space_digest(any);
  return std::visit(
      [&](const auto& space) {
        using S = std::decay_t<decltype(space.d(0, 0))>;
        std::vector<S> grid;
        for (const auto& e : split_list(eps_list)) {
          const Rational r = parse_rational(e);
          if constexpr (is_exact_v<S>) {
            grid.push_back(r);
          } else {
            grid.push_back(to_double(r));
          }
        }
        const Index p = space.index_of(p_label), q = space.index_of(q_label);
        if (grid.empty()) grid = modulus_breakpoints(space, p, q);
        const ModulusTable<S> table = concavity_modulus(space, p, q, grid);
        const Json payload = modulus_table_json(space, table);
        emit(o, "modulus", digest, payload, [&] {
          std::vector<std::vector<std::string>> rows;
          for (const auto& e : table.entries) {
            rows.push_back({format_scalar(e.epsilon), e.delta ? format_scalar(*e.delta) : "inf",
                            e.witness ? space.label(*e.witness) : "-"});
          }
          std::cout << "concavity modulus of (" << p_label << "," << q_label << ")\n";
          print_table(std::cout, {"epsilon", "delta", "witness"}, rows);
        });
        return int(ok);
      },
      any);
}

struct FamilyFlags {
  std::string family;
  std::string lambda = "1/2";
  std::uint64_t seed = 0;
  std::string alpha = "1/2";
  std::string input;
  std::string inner;
};

FamilySpec family_spec(const FamilyFlags& f, const Options& o) {
  FamilySpec spec;
  spec.id = parse_family(f.family);
  spec.lambda = parse_rational(f.lambda);
  spec.seed = f.seed;
  spec.alpha = parse_rational(f.alpha);
  auto input_space = [&]() {
    if (f.input.empty()) throw Error(Errc::unknown_family, f.family + " needs --input");
    Options in = o;
    in.path = f.input;
    return std::make_shared<const AnySpace>(load(in, std::cerr));
  };
  if (spec.id == FamilyId::constant) spec.space = input_space();
  if (spec.id == FamilyId::holder_of) {
    if (!f.inner.empty()) {
      FamilyFlags inner = f;
      inner.family = f.inner;
      inner.inner.clear();
      spec.base = std::make_shared<const FamilySpec>(family_spec(inner, o));
    } else {
      FamilySpec constant;
      constant.id = FamilyId::constant;
      constant.space = input_space();
      spec.base = std::make_shared<const FamilySpec>(std::move(constant));
    }
  }
  return spec;
}

int cmd_generate(const Options& o, const FamilyFlags& flags, int depth, const std::string& out_path) {
  const FamilySpec spec = family_spec(flags, o);
  const AnySpace space = generate(spec, depth);
  Json doc = space_to_json(space);
  Json& provenance = doc["provenance"];
  if (!provenance.is_object()) provenance = Json::object();
  provenance["generator"] = family_to_json(spec);
  provenance["generator"]["depth"] = depth;
  const std::string rendered = doc.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << rendered;
  } else {
    std::ofstream f(out_path);
    if (!f) throw Error(Errc::parse, "cannot write '" + out_path + "'");
    f << rendered;
    const Index n = std::visit([](const auto& s) { return s.size(); }, space);
    std::cerr << "wrote " << n << " points to " << out_path << '\n';
  }
  return ok;
}

int cmd_attainment(const Options& o, const std::string& p_label, const std::string& q_label) {
  const AnySpace any = load(o, std::cerr);
  const std::string digest = space_digest(any);
  return std::visit(
      [&](const auto& space) {
        const auto set = attainment_set(space, space.index_of(p_label), space.index_of(q_label));
        const Json payload = attainment_json(space, set);
        emit(o, "attainment", digest, payload, [&] {
          std::cout << "attainment set of (" << p_label << "," << q_label << "):";
          for (const auto& [x, y] : set.members) std::cout << " (" << space.label(x) << "," << space.label(y) << ")";
          std::cout << "\n\n";
          std::vector<std::vector<std::string>> rows;
          for (const auto& iv : set.intervals) {
            rows.push_back({space.label(iv.x), space.label(iv.y), format_scalar(iv.low), format_scalar(iv.high),
                            set.contains(iv.x, iv.y) ? "yes" : ""});
          }
          print_table(std::cout, {"x", "y", "phi_min", "phi_max", "member"}, rows);
        });
        return int(ok);
      },
      any);
}

int cmd_diagnose(const Options& o, const FamilyFlags& flags, const std::string& p_label, const std::string& q_label,
                 const std::string& depth_list, const std::string& prefix, const std::string& anchor,
                 double threshold) {
  const FamilySpec spec = family_spec(flags, o);
  std::vector<int> depths;
  for (const auto& d : split_list(depth_list)) {
    try {
      depths.push_back(std::stoi(d));
    } catch (const std::exception&) {
      throw Error(Errc::parse, "bad depth '" + d + "'");
    }
  }
  if (depths.empty()) depths = kDefaultDepths;

  std::vector<SequenceSelector> selectors;
  if (!prefix.empty() || !anchor.empty()) {
    selectors.push_back({prefix, anchor});
  } else if (spec.id == FamilyId::planar_spiral) {
    selectors = {{"p", "p"}, {"q", "q"}};
  } else if (spec.id == FamilyId::planar_spiral_one_sided) {
    selectors = {{"q", "q"}};
  } else {
    selectors.push_back({"", ""});
  }

  Json payload;
  payload["family"] = family_to_json(spec);
  payload["depths"] = depths;
  Json sequences = Json::array();
  std::vector<SequenceDiagnostics> diags;
  for (const auto& sel : selectors) {
    diags.push_back(sequence_diagnostics(spec, p_label, q_label, depths, sel, threshold));
    Json j = sequence_json(diags.back());
    j["prefix"] = sel.prefix;
    sequences.push_back(std::move(j));
  }
  payload["sequences"] = std::move(sequences);
  const StronglyExposedDiagnostics exposed = strongly_exposed_verdict(spec, p_label, q_label, depths, threshold);
  payload["strongly_exposed"] = strongly_exposed_json(exposed);
  bool any_flag = exposed.limit_property_z;
  for (const auto& d : diags) any_flag = any_flag || d.flag;
  payload["flagged"] = any_flag;

  // The digest covers the deepest truncation actually analysed.
  const std::string digest = space_digest(generate(spec, depths.back()));
  emit(o, "diagnose", digest, payload, [&] {
    for (std::size_t s = 0; s < diags.size(); ++s) {
      const auto& d = diags[s];
      std::cout << "sequence " << (selectors[s].prefix.empty() ? "<all>" : selectors[s].prefix + "<n>")
                << " -> " << d.anchor << ": ratio E(x;" << d.p << "," << d.q << ")/d(x," << d.anchor << ")\n";
      std::vector<std::vector<std::string>> rows;
      for (const auto& v : d.per_depth) rows.push_back({std::to_string(v.depth), format_double(v.value)});
      print_table(std::cout, {"depth", "ratio"}, rows);
      std::cout << "decreasing: " << (d.monotone_decreasing ? "yes" : "no")
                << ", flag (deepest < " << format_double(d.threshold) << " x shallowest): " << (d.flag ? "SET" : "no")
                << "\n\n";
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto& v : exposed.per_depth) {
      rows.push_back({std::to_string(v.depth), format_double(v.min_ratio), v.has_property_z ? "yes" : "no",
                      v.witness, v.verdict});
    }
    std::cout << "property (Z) for (" << p_label << "," << q_label << ")\n";
    print_table(std::cout, {"depth", "min_ratio", "property_z", "at", "verdict"}, rows);
    std::cout << "trend toward property (Z): " << (exposed.limit_property_z ? "SET" : "no") << '\n';
  });
  return ok;
}

void add_space_options(CLI::App* cmd, Options& o, bool with_path = true) {
  if (with_path) cmd->add_option("path", o.path, "space file (.json or .csv)")->required();
  cmd->add_option("--format", o.format, "input format: json or csv (default: by extension)");
  cmd->add_option("--mode", o.mode, "number mode: exact or float");
  cmd->add_option("--tolerance", o.tolerance, "relative tolerance in float mode");
  cmd->add_option("--base", o.base, "base point label");
  cmd->add_flag("--json", o.json, "JSON report on stdout");
  cmd->add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp from JSON reports");
}

void add_family_options(CLI::App* cmd, FamilyFlags& f) {
  cmd->add_option("family", f.family, "spiral, spiral-one-sided, c0, l2, holder or constant")->required();
  cmd->add_option("--lambda", f.lambda, "spiral contraction in (0,1)");
  cmd->add_option("--seed", f.seed, "spiral sampler seed");
  cmd->add_option("--alpha", f.alpha, "Hoelder exponent in (0,1)");
  cmd->add_option("--input", f.input, "space file for holder and constant families");
  cmd->add_option("--inner", f.inner, "generated family to snowflake (holder)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extreme and exposed molecules of Lipschitz-free spaces over finite metric spaces"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  Options o;
  FamilyFlags family;
  std::vector<std::string> pair;
  bool oracle = false;
  std::string p_label, q_label, eps_list, out_path, depth_list, prefix, anchor;
  int depth = 8;
  double threshold = kDefaultDecayThreshold;

  auto* validate = app.add_subcommand("validate", "check the metric axioms (exit 2 on violations)");
  add_space_options(validate, o);

  auto* classify = app.add_subcommand("classify", "extreme / strongly exposed verdict for every molecule");
  add_space_options(classify, o);
  classify->add_option("--pair", pair, "classify a single pair")->expected(2);
  classify->add_flag("--oracle", oracle, "cross-check each verdict with the polytope oracle");

  auto* modulus = app.add_subcommand("modulus", "concavity modulus table for a pair");
  add_space_options(modulus, o);
  modulus->add_option("p", p_label)->required();
  modulus->add_option("q", q_label)->required();
  modulus->add_option("--eps", eps_list, "comma-separated scales (default: every breakpoint)");

  auto* gen = app.add_subcommand("generate", "emit a space of a parametric family");
  add_family_options(gen, family);
  gen->add_option("--depth", depth, "truncation depth");
  gen->add_option("--out", out_path, "output file (default: stdout)");

  auto* attain = app.add_subcommand("attainment", "norm attainment set of a molecule");
  add_space_options(attain, o);
  attain->add_option("p", p_label)->required();
  attain->add_option("q", q_label)->required();

  auto* diagnose = app.add_subcommand("diagnose", "trend diagnostics across truncation depths");
  add_family_options(diagnose, family);
  add_space_options(diagnose, o, false);
  diagnose->add_option("p", p_label)->required();
  diagnose->add_option("q", q_label)->required();
  diagnose->add_option("--depths", depth_list, "comma-separated increasing depths (default 4,8,16,32)");
  diagnose->add_option("--sequence", prefix, "label prefix of the sequence points");
  diagnose->add_option("--anchor", anchor, "accumulation point of the sequence (default q)");
  diagnose->add_option("--threshold", threshold, "decay factor that sets the flag");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : failure;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*classify) return cmd_classify(o, pair, oracle);
    if (*modulus) return cmd_modulus(o, p_label, q_label, eps_list);
    if (*gen) return cmd_generate(o, family, depth, out_path);
    if (*attain) return cmd_attainment(o, p_label, q_label);
    if (*diagnose) return cmd_diagnose(o, family, p_label, q_label, depth_list, prefix, anchor, threshold);
  } catch (const Reported& r) {
    return r.code;
  } catch (const OracleDisagreement& e) {
    std::cerr << "internal inconsistency: " << e.what() << '\n' << e.dump().dump(2) << '\n';
    return inconsistent;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  }
  return failure;
}
