#pragma once

// One-call check of a catalogue model: generator classifications, the algebra they
// span, jet-counted dimensions against the recorded expectations, and curvature flags.

#include "jetsym/catalogue.hpp"
#include "jetsym/jet.hpp"

namespace jetsym {

struct VerifyItem {
  std::string item;    // e.g. "generator x*d_x", "dim_projective", "flag flat"
  bool ok = false;
  std::string detail;  // expected vs obtained
};

struct VerificationReport {
  ModelDescriptor descriptor;
  std::optional<SymmetryReport> profile;  // metric models
  std::map<SystemKind, JetRankReport> dims;
  std::optional<StructureConstantsTable> algebra;
  std::vector<VerifyItem> items;

  bool ok() const;
  /// The first failing item, if any.
  const VerifyItem* first_failure() const;
};

/// Throws CatalogueError for unknown models or bad parameters; every other problem is
/// recorded as a failing item.
VerificationReport verify_model(const std::string& name, const std::map<std::string, Rational>& params = {},
                                int n = 0, const JetOptions& opts = {});

}  // namespace jetsym
