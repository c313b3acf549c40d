#pragma once

#include "ctxkit/model.hpp"
#include "ctxkit/sheaf.hpp"

#include <string>

namespace ctxkit {

struct BundleDiagram {
  std::string dot;
  // True when extendability marks were left out because the model is
  // signalling at the support level (they would be meaningless).
  bool marks_omitted = false;
};

// Graphviz source for the bundle picture of a model whose contexts are all
// pairs: a base layer with one vertex per measurement and one edge per
// context (oriented contexts become arrows), and a fibre layer with one
// vertex per outcome and one edge per support tuple. Support tuples that
// extend to no consistent global assignment are drawn in red, endpoints
// included. Deterministic output. Throws ShapeError when some context is
// not a pair or the model has no contexts.
BundleDiagram bundle_dot(const EmpiricalModel& model,
                         std::uint64_t product_cap = sheaf::default_product_cap);

}  // namespace ctxkit
