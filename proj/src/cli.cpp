#include "ipq/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipq/bounds.hpp"
#include "ipq/codec.hpp"
#include "ipq/container.hpp"
#include "ipq/dataio.hpp"
#include "ipq/estimator.hpp"
#include "ipq/quantizer.hpp"
#include "ipq/vecmath.hpp"
#include "ipq/parallel.hpp"

namespace ipq {

namespace {

using nlohmann::json;

struct Common {
  bool json_out = false;
};

struct EncodeArgs {
  std::string input, format, output, delta;
  double epsilon = 0.0, alpha = 0.0, beta = 0.0;
  bool csv_header = false;
};

struct EvalArgs {
  std::string input, format;
  std::vector<std::string> deltas;
  std::size_t pairs = 2000;
  std::uint64_t seed = 0;
  bool csv_header = false;
};

struct FilterArgs {
  std::string input, format, pairs_file;
  double alpha = 0.0, beta = 0.0;
  bool csv_header = false;
};

struct BoundsArgs {
  double alpha = 0.0, beta = 0.0;
  std::uint32_t dim = 0;
};

double space_ratio(const Codec& codec) {
  return static_cast<double>(codec.code_length()) / (32.0 * static_cast<double>(codec.grid().dim()));
}

VectorSet load_normalized(const std::string& path, const std::string& format, bool csv_header) {
  return normalize(load(path, parse_format(format), LoadOptions{csv_header}));
}

std::vector<CodeWord> encode_rows(const Codec& codec, const VectorSet& set, const std::vector<char>* wanted = nullptr) {
  std::vector<std::optional<CodeWord>> slots(set.size());
  detail::parallel_for(set.size(), [&](std::size_t i) {
    if (wanted && !(*wanted)[i]) return;
    slots[i] = codec.encode(quantize(set.row(i), codec.grid()));
  });
  std::vector<CodeWord> out;
  out.reserve(set.size());
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  return out;
}

// Nearest rank: the ceil(p·n)-th smallest value.
double percentile(const std::vector<double>& sorted, double p) {
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  return sorted[std::max<std::size_t>(rank, 1) - 1];
}

int cmd_encode(const EncodeArgs& a, const Common& c, bool has_delta, bool has_eps, bool has_alpha, bool has_beta,
               std::ostream& out) {
  if (has_alpha != has_beta) throw Error(ErrorCode::InvalidArgument, "--alpha and --beta go together");
  if (int(has_delta) + int(has_eps) + int(has_alpha) != 1) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --delta, --epsilon, or --alpha/--beta");
  }
  Rational delta = has_delta ? Rational::parse(a.delta)
                   : has_eps ? plan_estimate(a.epsilon).delta
                             : plan_distinguish(a.alpha, a.beta).delta;
  const VectorSet set = load_normalized(a.input, a.format, a.csv_header);
  const Codec codec(GridParams(set.dim, delta));
  const std::vector<CodeWord> codes = encode_rows(codec, set);
  write_container_file(a.output, codec.grid(), codes, &set.norms);

  if (c.json_out) {
    out << json{{"command", "encode"},
                {"d", set.dim},
                {"delta", delta.to_string()},
                {"budget", codec.grid().budget()},
                {"code_length", codec.code_length()},
                {"record_bytes", codec.record_bytes()},
                {"space_ratio", space_ratio(codec)},
                {"count", codes.size()},
                {"dropped", set.dropped},
                {"output", a.output}}
               .dump()
        << '\n';
  } else {
    out << "encoded " << codes.size() << " vectors (d=" << set.dim << ", dropped " << set.dropped << " zero)\n"
        << "delta        " << delta.to_string() << '\n'
        << "s            " << codec.grid().budget() << '\n'
        << "l (bits)     " << codec.code_length() << '\n'
        << "space_ratio  " << space_ratio(codec) << '\n';
  }
  return kExitOk;
}

int cmd_eval(const EvalArgs& a, const Common& c, std::ostream& out) {
  if (a.pairs == 0) throw Error(ErrorCode::InvalidArgument, "--pairs must be at least 1");
  std::vector<Rational> deltas;
  for (const auto& text : a.deltas) deltas.push_back(Rational::parse(text));
  const VectorSet set = load_normalized(a.input, a.format, a.csv_header);
  const std::vector<IndexPair> pairs = sample_pairs(set.size(), a.pairs, a.seed);

  std::vector<char> wanted(set.size(), 0);
  for (const auto& p : pairs) wanted[p.first] = wanted[p.second] = 1;
  std::vector<double> exact(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) exact[i] = dot(set.row(pairs[i].first), set.row(pairs[i].second));

  json reports = json::array();
  for (const Rational& delta : deltas) {
    const Codec codec(GridParams(set.dim, delta));
    std::vector<UnitVector> decoded(set.size());
    detail::parallel_for(set.size(), [&](std::size_t i) {
      if (!wanted[i]) return;
      decoded[i] = reconstruct(codec.decode(codec.encode(quantize(set.row(i), codec.grid()))));
    });
    std::vector<double> errs(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      errs[i] = std::abs(dot(decoded[pairs[i].first].coords, decoded[pairs[i].second].coords) - exact[i]);
    }
    std::sort(errs.begin(), errs.end());
    reports.push_back({{"dataset", set.source},
                       {"d", set.dim},
                       {"delta", delta.to_string()},
                       {"code_length", codec.code_length()},
                       {"space_ratio", space_ratio(codec)},
                       {"median_err", percentile(errs, 0.5)},
                       {"p90_err", percentile(errs, 0.9)},
                       {"max_err", errs.back()},
                       {"worst_case_error", worst_case_error(delta)},
                       {"pair_count", pairs.size()},
                       {"seed", a.seed}});
  }

  if (c.json_out) {
    out << json{{"command", "eval"}, {"reports", reports}}.dump() << '\n';
    return kExitOk;
  }
  out << "dataset " << set.source << "  d=" << set.dim << "  pairs=" << pairs.size() << "  seed=" << a.seed << '\n';
  out << std::left << std::setw(10) << "delta" << std::setw(8) << "bits" << std::setw(10) << "space" << std::setw(12)
      << "median" << std::setw(12) << "p90" << std::setw(12) << "max" << "bound\n";
  for (const auto& r : reports) {
    out << std::left << std::setw(10) << r["delta"].get<std::string>() << std::setw(8) << r["code_length"].get<std::uint64_t>()
        << std::setw(10) << r["space_ratio"].get<double>() << std::setw(12) << r["median_err"].get<double>()
        << std::setw(12) << r["p90_err"].get<double>() << std::setw(12) << r["max_err"].get<double>()
        << r["worst_case_error"].get<double>() << '\n';
  }
  return kExitOk;
}

int cmd_filter(const FilterArgs& a, const Common& c, std::ostream& out) {
  const ThresholdSpec spec = plan_distinguish(a.alpha, a.beta);
  const std::vector<IndexPair> raw_pairs = read_pairs_file(a.pairs_file);

  std::optional<Codec> codec;
  std::vector<CodeWord> codes;
  std::vector<IndexPair> pairs = raw_pairs;
  if (a.format.empty()) {
    Container box = read_container_file(a.input);
    codec.emplace(box.grid);
    codes = std::move(box.codes);
  } else {
    const VectorSet set = load_normalized(a.input, a.format, a.csv_header);
    codec.emplace(GridParams(set.dim, spec.delta));
    // Pair indices name input rows; zero rows were dropped by normalize.
    std::vector<std::size_t> row_of(set.origin.empty() ? 0 : set.origin.back() + 1 + set.dropped, SIZE_MAX);
    for (std::size_t i = 0; i < set.size(); ++i) row_of[set.origin[i]] = i;
    for (auto& p : pairs) {
      for (std::size_t* idx : {&p.first, &p.second}) {
        if (*idx >= row_of.size() || row_of[*idx] == SIZE_MAX) {
          throw Error(ErrorCode::IndexOutOfRange, "pair references missing or zero row " + std::to_string(*idx));
        }
        *idx = row_of[*idx];
      }
    }
    codes = encode_rows(*codec, set);
  }

  const FilterResult result = filter_pairs(*codec, codes, pairs, spec);
  std::vector<FilteredPair> ranked = result.survivors;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const FilteredPair& x, const FilteredPair& y) { return x.verdict.estimate > y.verdict.estimate; });
  const double t = ranked.empty() && result.eliminated.empty() ? spec.threshold_for(codec->grid().delta())
                   : ranked.empty()                             ? result.eliminated.front().verdict.threshold
                                                                : ranked.front().verdict.threshold;

  if (c.json_out) {
    json survivors = json::array();
    for (const auto& s : ranked) {
      survivors.push_back(
          {{"first", raw_pairs[s.pair].first}, {"second", raw_pairs[s.pair].second}, {"estimate", s.verdict.estimate}});
    }
    out << json{{"command", "filter"},
                {"alpha", a.alpha},
                {"beta", a.beta},
                {"delta", codec->grid().delta().to_string()},
                {"threshold", t},
                {"candidates", pairs.size()},
                {"survived", result.survivors.size()},
                {"eliminated", result.eliminated.size()},
                {"survivors", survivors}}
               .dump()
        << '\n';
    return kExitOk;
  }
  out << "threshold " << t << " (delta " << codec->grid().delta().to_string() << ")\n";
  for (const auto& s : ranked) {
    out << raw_pairs[s.pair].first << ' ' << raw_pairs[s.pair].second << ' ' << s.verdict.estimate << '\n';
  }
  out << "candidates " << pairs.size() << "  survived " << result.survivors.size() << "  eliminated "
      << result.eliminated.size() << '\n';
  return kExitOk;
}

int cmd_bounds(const BoundsArgs& a, const Common& c, std::ostream& out) {
  if (a.dim == 0) throw Error(ErrorCode::InvalidArgument, "--d must be positive");
  const ThresholdSpec spec = plan_distinguish(a.alpha, a.beta);
  const Codec codec(GridParams(a.dim, spec.delta));
  const SpaceBound lb = space_lb(a.alpha, a.beta, a.dim);
  const double gap = (static_cast<double>(codec.code_length()) - lb.bits) / static_cast<double>(a.dim);
  if (c.json_out) {
    out << json{{"command", "bounds"},
                {"alpha", a.alpha},
                {"beta", a.beta},
                {"d", a.dim},
                {"delta", spec.delta.to_string()},
                {"threshold", spec.threshold},
                {"budget", codec.grid().budget()},
                {"code_length", codec.code_length()},
                {"asymptotic", lb.asymptotic},
                {"space_lb", lb.bits},
                {"theta", lb.theta},
                {"gap_per_dim", gap}}
               .dump()
        << '\n';
    return kExitOk;
  }
  out << "delta        " << spec.delta.to_string() << " (" << spec.delta.to_double() << ")\n"
      << "threshold    " << spec.threshold << '\n'
      << "s            " << codec.grid().budget() << '\n'
      << "l (bits)     " << codec.code_length() << '\n'
      << "d*log2(sqrt(1-beta)/(alpha-beta))  " << lb.asymptotic << '\n'
      << "lower bound  " << lb.bits << " (theta " << lb.theta << ")\n"
      << "gap per dim  " << gap << '\n';
  return kExitOk;
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::SetTooSmall:
      return kExitUsage;
    case ErrorCode::ParseError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::BadMagic:
    case ErrorCode::VersionUnsupported:
    case ErrorCode::TruncatedFile:
    case ErrorCode::ChecksumMismatch:
    case ErrorCode::MalformedCode:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::IoError:
      return kExitParse;
    default:
      return kExitNumeric;
  }
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inner-product-preserving vector quantization", "ipq"};
  app.require_subcommand(1);
  Common common;

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "Quantize and encode a dataset into an IPQZ container");
  encode->add_option("--input", enc.input, "Dataset path")->required();
  encode->add_option("--format", enc.format, "fvecs, bvecs, idx or csv")->required();
  encode->add_option("--output", enc.output, "Container path")->required();
  auto* o_delta = encode->add_option("--delta", enc.delta, "Grid resolution p/q or decimal");
  auto* o_eps = encode->add_option("--epsilon", enc.epsilon, "Additive inner-product error");
  auto* o_alpha = encode->add_option("--alpha", enc.alpha, "Similarity threshold alpha");
  auto* o_beta = encode->add_option("--beta", enc.beta, "Similarity threshold beta");
  encode->add_flag("--csv-header", enc.csv_header, "Skip the first CSV line");
  encode->add_flag("--json", common.json_out, "Machine-readable output");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Measure inner-product error and space on sampled pairs");
  eval->add_option("--input", ev.input, "Dataset path")->required();
  eval->add_option("--format", ev.format, "fvecs, bvecs, idx or csv")->required();
  eval->add_option("--delta", ev.deltas, "Grid resolutions, comma separated")->required()->delimiter(',');
  eval->add_option("--pairs", ev.pairs, "Number of sampled pairs")->capture_default_str();
  eval->add_option("--seed", ev.seed, "Pair sampling seed")->capture_default_str();
  eval->add_flag("--csv-header", ev.csv_header, "Skip the first CSV line");
  eval->add_flag("--json", common.json_out, "Machine-readable output");

  FilterArgs fl;
  auto* filter = app.add_subcommand("filter", "Keep candidate pairs whose estimate clears the threshold");
  filter->add_option("--input", fl.input, "IPQZ container, or a dataset when --format is given")->required();
  filter->add_option("--format", fl.format, "Dataset format; omit for a container");
  filter->add_option("--pairs-file", fl.pairs_file, "Two indices per line")->required();
  filter->add_option("--alpha", fl.alpha, "Similarity threshold alpha")->required();
  filter->add_option("--beta", fl.beta, "Similarity threshold beta")->required();
  filter->add_flag("--csv-header", fl.csv_header, "Skip the first CSV line");
  filter->add_flag("--json", common.json_out, "Machine-readable output");

  BoundsArgs bd;
  auto* bounds = app.add_subcommand("bounds", "Print the planned grid, code length and space lower bound");
  bounds->add_option("--alpha", bd.alpha, "Similarity threshold alpha")->required();
  bounds->add_option("--beta", bd.beta, "Similarity threshold beta")->required();
  bounds->add_option("--d", bd.dim, "Dimension")->required();
  bounds->add_flag("--json", common.json_out, "Machine-readable output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*encode) return cmd_encode(enc, common, o_delta->count() > 0, o_eps->count() > 0, o_alpha->count() > 0,
                                   o_beta->count() > 0, out);
    if (*eval) return cmd_eval(ev, common, out);
    if (*filter) return cmd_filter(fl, common, out);
    return cmd_bounds(bd, common, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace ipq
