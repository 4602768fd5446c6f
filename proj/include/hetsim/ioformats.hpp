#pragma once

// Text formats: the native system format, Aldebaran `.aut`, the connector
// DSL, and tab-separated relations.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hetsim/connectors.hpp"
#include "hetsim/functors.hpp"
#include "hetsim/relcore.hpp"

namespace hetsim {

/// Native format:
///
///     functor PLTS labels=a,b        # or DLTS / DET / PMAP / TMAP / NEMAP, or SUSP|SUSPIE in=.. out=..
///     states s0 s1
///     s0: a->s1 b->s0                # DLTS arrows carry weights: a->s1:1/2
///
/// A state without a line has the empty successor structure. Throws
/// ParseError (with line) on syntax errors and ValidationError naming the
/// state on invalid terms.
Coalgebra parse_chc(std::string_view text);
/// Canonical text; parse_chc(serialize_chc(c)) == c.
std::string serialize_chc(const Coalgebra& c);

struct AutSystem {
  Coalgebra system;
  std::size_t initial = 0;
  std::vector<std::string> warnings;
};

/// `des (init, ntrans, nstates)` followed by `(src,"label",dst)` lines; bare
/// labels end at the first comma. States are renamed `s<i>`. Labels come from
/// `labels` when given (undeclared labels are an error), else are inferred.
AutSystem parse_aut(std::string_view text, const std::optional<FinSet>& labels = std::nullopt);
std::string serialize_aut(const Coalgebra& c, std::size_t initial = 0);

/// Connector DSL, e.g. `(comp (lr (rel (b c))) (lr (rel (a b))))`.
ConnectorExpr parse_connector(std::string_view text);

/// `x<TAB>y` lines in sorted order, each newline-terminated.
std::string write_relation(const Rel& r);
/// Reads `x<TAB>y` (or space separated) lines over the given carriers.
Rel parse_relation(std::string_view text, const FinSet& src, const FinSet& dst);

/// Whole file contents; throws Error if it cannot be read.
std::string read_file(const std::string& path);
/// Throws Error if the file cannot be written.
void write_file(const std::string& path, std::string_view contents);

/// Loads a `.aut` file (via parse_aut) or a native file, by extension.
Coalgebra load_system(const std::string& path);

}  // namespace hetsim
