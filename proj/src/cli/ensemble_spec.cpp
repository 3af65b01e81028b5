#include <fstream>
#include <sstream>

#include "hypereig/cli.hpp"
#include "hypereig/error.hpp"
#include "hypereig/hypergraph.hpp"
#include "hypereig/hypermatrix_json.hpp"

namespace hypereig::cli {

namespace {

double parse_probability(const std::string& text, const std::string& keyword) {
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParameterError(keyword + " needs a probability, got '" + text + "'");
  }
  if (used != text.size()) throw ParameterError(keyword + " needs a probability, got '" + text + "'");
  if (!(p > 0.0 && p < 1.0)) throw ParameterError(keyword + " probability must lie in (0, 1)");
  return p;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

EnsembleChoice parse_ensemble(const std::string& text) {
  if (text.empty()) throw ParameterError("empty ensemble specifier");
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  EnsembleChoice c;
  auto no_argument = [&](EnsembleKeyword kw) {
    if (colon != std::string::npos) throw ParameterError("'" + head + "' takes no argument");
    c.keyword = kw;
    return c;
  };
  if (head == "identity") return no_argument(EnsembleKeyword::kIdentity);
  if (head == "ones") return no_argument(EnsembleKeyword::kOnes);
  if (head == "complete-gap") return no_argument(EnsembleKeyword::kCompleteGap);
  if (head == "sign") return no_argument(EnsembleKeyword::kSign);
  if (head == "random-gap" || head == "upper") {
    if (colon == std::string::npos) throw ParameterError("'" + head + "' needs :p");
    c.keyword = head == "upper" ? EnsembleKeyword::kUpper : EnsembleKeyword::kRandomGap;
    c.p = parse_probability(tail, head);
    return c;
  }
  c.keyword = EnsembleKeyword::kFile;
  c.path = head == "file" ? tail : text;
  if (c.path.empty()) throw ParameterError("file: needs a path");
  return c;
}

std::string format_ensemble(const EnsembleChoice& c) {
  std::ostringstream s;
  s.precision(17);
  switch (c.keyword) {
    case EnsembleKeyword::kIdentity: return "identity";
    case EnsembleKeyword::kOnes: return "ones";
    case EnsembleKeyword::kCompleteGap: return "complete-gap";
    case EnsembleKeyword::kSign: return "sign";
    case EnsembleKeyword::kRandomGap: s << "random-gap:" << c.p; return s.str();
    case EnsembleKeyword::kUpper: s << "upper:" << c.p; return s.str();
    case EnsembleKeyword::kFile: return "file:" + c.path;
  }
  return {};
}

SymmetricHypermatrix build_ensemble(const EnsembleChoice& c, int n, int k, std::uint64_t seed) {
  if (c.keyword == EnsembleKeyword::kFile) {
    if (ends_with(c.path, ".json")) {
      std::ifstream in(c.path);
      if (!in) throw ParameterError("cannot open " + c.path);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(c.path + ": " + e.what());
      }
      return symmetric_from_json(doc);
    }
    return adjacency_hypermatrix(read_hypergraph_file(c.path));
  }
  if (n < 1 || k < 2) throw ParameterError("--n must be >= 1 and --k >= 2");
  switch (c.keyword) {
    case EnsembleKeyword::kIdentity: return identity_hypermatrix(n, k);
    case EnsembleKeyword::kOnes: return all_ones_hypermatrix(n, k);
    case EnsembleKeyword::kCompleteGap: return complete_gap(n, k);
    case EnsembleKeyword::kRandomGap: return random_gap(n, k, c.p, seed);
    case EnsembleKeyword::kSign: return sign_ensemble(n, k, seed);
    case EnsembleKeyword::kUpper:
      throw ParameterError("upper:p is not symmetric; it is only available to the tail subcommand");
    case EnsembleKeyword::kFile: break;
  }
  throw ParameterError("unknown ensemble");
}

}  // namespace hypereig::cli
