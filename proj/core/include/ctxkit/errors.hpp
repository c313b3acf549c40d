#pragma once

#include <stdexcept>
#include <string>

namespace ctxkit {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text: fractions, JSON documents, scenario files.
struct ParseError : Error {
  using Error::Error;
};

// Structurally broken model; what() carries the full violation listing.
struct ValidationError : Error {
  using Error::Error;
};

// A combinatorial guard tripped (product-space or variable-count cap).
struct SizeCapError : Error {
  using Error::Error;
};

// The solver's pivot budget ran out before termination.
struct ResourceLimitError : Error {
  using Error::Error;
};

// The model has the wrong shape for the requested analysis.
struct ShapeError : Error {
  using Error::Error;
};

// A floating-point table could not be turned into exact fractions.
struct RoundingError : Error {
  using Error::Error;
};

}  // namespace ctxkit
