#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "meanstream/core.hpp"
#include "meanstream/error.hpp"
#include "meanstream/families.hpp"
#include "meanstream/myhill.hpp"
#include "meanstream/verify.hpp"

namespace meanstream::cli {
namespace {

using nlohmann::json;

struct FamilyOptions {
  std::string family;
  std::string spec;
  std::optional<std::string> p, q, r, c, d, f, g, kind;
};

struct InputOptions {
  std::string input;
  std::string column;
};

struct Options {
  FamilyOptions family;
  InputOptions input;
  std::string format = "text";
  std::uint64_t seed = verify::kDefaultSeed;
  std::string out;
  bool print_value = false;
  std::vector<std::string> state_files;
  std::string alphabet = "0,1,2";
  std::size_t max_len = 8;
  std::size_t probe_len = 2;
};

// A failure inside the CLI layer that already knows its exit status.
class CliError : public std::runtime_error {
 public:
  CliError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
  [[nodiscard]] int status() const noexcept { return status_; }

 private:
  int status_;
};

void add_family_flags(CLI::App& cmd, FamilyOptions& o) {
  cmd.add_option("--family", o.family, "Family name");
  cmd.add_option("--spec", o.spec, "Family spec as JSON, e.g. {\"family\":\"gini\",\"p\":2,\"q\":1}");
  cmd.add_option("--p", o.p, "Exponent p");
  cmd.add_option("--q", o.q, "Exponent q");
  cmd.add_option("--r", o.r, "Order r (hamy, sympoly)");
  cmd.add_option("--c", o.c, "Multiplicity c (biplanar)");
  cmd.add_option("--d", o.d, "Multiplicity d (biplanar)");
  cmd.add_option("--f", o.f, "Generator name for f");
  cmd.add_option("--g", o.g, "Generator name for g (bajraktarevic)");
  cmd.add_option("--kind", o.kind, "Median kind: lower or upper");
}

void add_format_flag(CLI::App& cmd, std::string& format) {
  cmd.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

MeanDescriptor resolve_family(const FamilyOptions& o) {
  json spec = json::object();
  if (!o.spec.empty()) {
    try {
      spec = json::parse(o.spec);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::InvalidDescriptor, std::string("--spec is not valid JSON: ") + e.what());
    }
    if (!spec.is_object()) throw Error(ErrorCode::InvalidDescriptor, "--spec must be a JSON object");
  }
  if (!o.family.empty()) spec["family"] = o.family;
  const std::pair<const char*, const std::optional<std::string>*> flags[] = {
      {"p", &o.p}, {"q", &o.q}, {"r", &o.r}, {"c", &o.c},
      {"d", &o.d}, {"f", &o.f}, {"g", &o.g}, {"kind", &o.kind}};
  for (const auto& [key, value] : flags) {
    if (*value) spec[key] = **value;
  }
  if (!spec.contains("family")) throw Error(ErrorCode::InvalidDescriptor, "--family or --spec is required");
  return descriptor_from_json(spec);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double parse_real(const std::string& token, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size()) {
    throw CliError(kParseError, "line " + std::to_string(line) + ": cannot parse '" + token + "'");
  }
  return v;
}

std::optional<std::size_t> column_index(const std::string& column) {
  if (column.empty() || column.find_first_not_of("0123456789") != std::string::npos) return {};
  return std::stoul(column);
}

// Streams reals into `sink` in input order. "#" on its own line ends the stream.
template <typename Sink>
void read_reals(std::istream& in, const std::string& column, Sink&& sink) {
  std::string raw;
  std::size_t line = 0;
  std::optional<std::size_t> index = column_index(column);
  const bool csv = !column.empty();
  bool header_pending = csv && !index;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text == "#") return;
    if (text.empty()) continue;
    if (csv) {
      const auto fields = split(text, ',');
      if (header_pending) {
        const auto it = std::find(fields.begin(), fields.end(), column);
        if (it == fields.end()) {
          throw CliError(kParseError, "line " + std::to_string(line) + ": no column named '" + column + "'");
        }
        index = static_cast<std::size_t>(it - fields.begin());
        header_pending = false;
        continue;
      }
      if (*index >= fields.size()) {
        throw CliError(kParseError, "line " + std::to_string(line) + ": missing column " + column);
      }
      sink(parse_real(fields[*index], line), line);
      continue;
    }
    for (const auto& token : split(text, ',')) {
      if (token.empty()) continue;
      sink(parse_real(token, line), line);
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw CliError(kFailure, "cannot open " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw CliError(kFailure, "cannot write " + path);
  file << text << '\n';
}

std::vector<double> parse_alphabet(const std::string& text) {
  std::vector<double> out;
  for (const auto& token : split(text, ',')) out.push_back(parse_real(token, 1));
  return out;
}

int cmd_eval(const Options& o, std::istream& in, std::ostream& out) {
  const auto descriptor = std::make_shared<const MeanDescriptor>(resolve_family(o.family));
  AccumulatorState state = init(descriptor);
  std::size_t absorbed = 0;
  auto sink = [&](double x, std::size_t line) {
    try {
      state.absorb_in_place(x);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DomainError) {
        throw CliError(kDomainError, "line " + std::to_string(line) + ": " + e.what());
      }
      throw;
    }
    ++absorbed;
  };
  if (o.input.input.empty()) {
    read_reals(in, o.input.column, sink);
  } else {
    std::ifstream file(o.input.input);
    if (!file) throw CliError(kFailure, "cannot open " + o.input.input);
    read_reals(file, o.input.column, sink);
  }
  if (!o.out.empty()) write_text(o.out, serialize_state(state));
  if (absorbed == 0) {
    if (!o.out.empty()) return kOk;
    throw CliError(kEmptyInput, "empty input");
  }
  if (o.out.empty() || o.print_value) out << format_real(finalize(state)) << '\n';
  return kOk;
}

int cmd_merge(const Options& o, std::ostream& out) {
  std::optional<AccumulatorState> merged;
  for (const auto& path : o.state_files) {
    const std::string text = read_file(path);
    AccumulatorState next = [&] {
      try {
        return parse_state(text);
      } catch (const ParseError& e) {
        throw CliError(kParseError, path + ": " + e.what());
      }
    }();
    if (merged) {
      merged->merge_in_place(next);
    } else {
      merged = std::move(next);
    }
  }
  const std::string serialized = serialize_state(*merged);
  if (o.out.empty()) {
    out << serialized << '\n';
  } else {
    write_text(o.out, serialized);
  }
  if (o.print_value) out << format_real(finalize(*merged)) << '\n';
  return kOk;
}

int cmd_classify(const Options& o, std::ostream& out) {
  const auto report = classify(resolve_family(o.family));
  if (o.format == "json") {
    out << report.to_json().dump() << '\n';
  } else {
    out << report.to_text();
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const auto descriptor = resolve_family(o.family);
  const auto reports = verify::run_suite(descriptor, o.seed);
  if (o.format == "json") {
    for (const auto& r : reports) out << r.to_json().dump() << '\n';
    return kOk;
  }
  out << descriptor.label() << "  seed " << o.seed << '\n';
  out << std::left << std::setw(28) << "property" << std::setw(8) << "holds" << std::setw(8)
      << "trials" << "detail" << '\n';
  for (const auto& r : reports) {
    out << std::left << std::setw(28) << r.property << std::setw(8) << (r.holds ? "yes" : "no")
        << std::setw(8) << r.trials << r.detail << '\n';
  }
  return kOk;
}

int cmd_myhill(const Options& o, std::ostream& out) {
  const auto descriptor = resolve_family(o.family);
  const auto alphabet = parse_alphabet(o.alphabet);
  const auto probes = myhill::default_probes(alphabet, o.probe_len);
  const auto profile =
      myhill::enumerate_classes(verify::from_descriptor(descriptor), alphabet, o.max_len, probes);
  std::optional<myhill::GrowthReport> growth;
  if (profile.max_len >= 4) growth = myhill::growth_report(profile);
  if (o.format == "json") {
    json doc = profile.to_json();
    doc["probe_len"] = o.probe_len;
    doc["growth"] = growth ? growth->to_json() : json(nullptr);
    out << doc.dump() << '\n';
    return kOk;
  }
  out << "mean: " << profile.mean << '\n';
  out << "probe_len: " << o.probe_len << " (" << probes.size() << " probes)\n";
  out << "length  classes\n";
  for (std::size_t i = 0; i < profile.counts.size(); ++i) {
    out << std::left << std::setw(8) << i + 1 << profile.counts[i] << '\n';
  }
  if (growth) {
    out << "growth: " << myhill::growth_name(growth->classification) << '\n';
    out << "fit: " << growth->fit << '\n';
  }
  return kOk;
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return kParseError;
    case ErrorCode::DomainError: return kDomainError;
    case ErrorCode::EmptyState: return kEmptyInput;
    case ErrorCode::FamilyMismatch: return kFamilyMismatch;
    default: return kFailure;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  Options o;
  CLI::App app{"Streaming symmetric means with mergeable states", "meanstream"};
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "Evaluate a mean over a stream of reals");
  add_family_flags(*eval, o.family);
  eval->add_option("--input", o.input.input, "Input file (default stdin)");
  eval->add_option("--column", o.input.column, "CSV column: 0-based index or header name");
  eval->add_option("--out", o.out, "Write the accumulator state to this file");
  eval->add_flag("--print-value", o.print_value, "Print the value even when --out is given");

  auto* merge = app.add_subcommand("merge", "Merge serialized partial states");
  merge->add_option("states", o.state_files, "State files")->required();
  merge->add_option("--out", o.out, "Write the merged state here (default stdout)");
  merge->add_flag("--print-value", o.print_value, "Also print the merged value");

  auto* classify_cmd = app.add_subcommand("classify", "Report a family's complexity type");
  add_family_flags(*classify_cmd, o.family);
  add_format_flag(*classify_cmd, o.format);

  auto* verify_cmd = app.add_subcommand("verify", "Run the property suite on a family");
  add_family_flags(*verify_cmd, o.family);
  add_format_flag(*verify_cmd, o.format);
  verify_cmd->add_option("--seed", o.seed, "Master seed (MEANSTREAM_SEED overrides)");

  auto* myhill_cmd = app.add_subcommand("myhill", "Count approximate Myhill classes");
  add_family_flags(*myhill_cmd, o.family);
  add_format_flag(*myhill_cmd, o.format);
  myhill_cmd->add_option("--alphabet", o.alphabet, "Comma-separated letters");
  myhill_cmd->add_option("--max-len", o.max_len, "Longest word length");
  myhill_cmd->add_option("--probe-len", o.probe_len, "Longest probe suffix");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e, out, err);
    return status == 0 ? kOk : kFailure;
  }

  if (const char* env = std::getenv("MEANSTREAM_SEED")) {
    try {
      o.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: MEANSTREAM_SEED must be a nonnegative integer\n";
      return kFailure;
    }
  }

  try {
    if (eval->parsed()) return cmd_eval(o, in, out);
    if (merge->parsed()) return cmd_merge(o, out);
    if (classify_cmd->parsed()) return cmd_classify(o, out);
    if (verify_cmd->parsed()) return cmd_verify(o, out);
    return cmd_myhill(o, out);
  } catch (const CliError& e) {
    err << "error: " << e.what() << '\n';
    return e.status();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return status_for(e.code());
  }
}

}  // namespace meanstream::cli
