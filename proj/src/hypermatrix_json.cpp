#include "hypereig/hypermatrix_json.hpp"

#include <algorithm>

#include "hypereig/error.hpp"

namespace hypereig {

nlohmann::json to_json(const SymmetricHypermatrix& a) {
  nlohmann::json entries = nlohmann::json::array();
  a.for_each([&](std::span<const int> sorted, const Complex& value) {
    if (value == Complex{0.0, 0.0}) return;
    nlohmann::json index = nlohmann::json::array();
    for (int i : sorted) index.push_back(i + 1);
    entries.push_back(nlohmann::json::array({index, value.real(), value.imag()}));
  });
  return {{"order", a.order()}, {"dim", a.dim()}, {"entries", entries}};
}

SymmetricHypermatrix symmetric_from_json(const nlohmann::json& doc) {
  try {
    const int order = doc.at("order").get<int>();
    const int dim = doc.at("dim").get<int>();
    SymmetricHypermatrix out(order, dim);
    for (const auto& entry : doc.at("entries")) {
      if (!entry.is_array() || entry.size() != 3) throw ParseError("entry must be [index, re, im]");
      MultiIndex index;
      for (const auto& i : entry[0]) index.push_back(i.get<int>() - 1);
      if (!std::is_sorted(index.begin(), index.end())) throw ParseError("multiindex must be sorted");
      out.set(index, Complex{entry[1].get<double>(), entry[2].get<double>()});
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed hypermatrix JSON: ") + e.what());
  } catch (const ParameterError& e) {
    throw ParseError(std::string("malformed hypermatrix JSON: ") + e.what());
  } catch (const ShapeError& e) {
    throw ParseError(std::string("malformed hypermatrix JSON: ") + e.what());
  }
}

}  // namespace hypereig
