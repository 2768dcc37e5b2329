#pragma once

#include <iosfwd>
#include <string>

#include "pltor/developing.hpp"

namespace pltor {

/// A parsed triangulation file: complex, optional placement lifts and the
/// group line.
struct TriFile {
  PreComplex complex;
  Representation rep = Representation::trivial(3);
  std::optional<CoverPlacement> placement;
};

/// Line-oriented text format:
///   dim <3|4>
///   group <trivial | cyclic p k | zline alpha a>     (optional)
///   vertex <name>                                    (one per vertex)
///   simplex <+|-> <v[@copy]> ... (d+1 tokens)
///   glue <top> <facet> <top> <facet> <shift>         (optional, complete)
///   lift <vertex> <copy> <x> <y> <z> [<t>]           (optional)
/// Coordinates are printed with 17 significant digits; emit followed by
/// parse reproduces the complex and lifts exactly. Glue lines are written
/// only when multiset matching would not reconstruct the same gluing.
std::string emit_tri(const PreComplex& c, const Representation& rep,
                     const CoverPlacement* placement);

TriFile parse_tri(const std::string& text);
TriFile parse_tri_file(const std::string& path);

void write_file(const std::string& path, const std::string& content);

}  // namespace pltor
