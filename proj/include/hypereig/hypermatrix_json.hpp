#pragma once

#include <json.hpp>

#include "hypereig/hypermatrix.hpp"

namespace hypereig {

// Debug/fixture form: {"order": k, "dim": n, "entries": [[[i1..ik], re, im], ...]}
// with one-based sorted multiindices. Only nonzero entries are written; absent
// entries read back as zero.
nlohmann::json to_json(const SymmetricHypermatrix& a);
SymmetricHypermatrix symmetric_from_json(const nlohmann::json& doc);

}  // namespace hypereig
