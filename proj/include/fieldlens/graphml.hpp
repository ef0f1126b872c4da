#pragma once

#include <iosfwd>
#include <string>

#include "fieldlens/citegraph.hpp"
#include "fieldlens/socionet.hpp"

namespace fieldlens {

/// GraphML with node attributes doi/field_a/field_b/boundary/seeded, edge
/// attribute kind, and the scope as a graph attribute.
void write_graphml(const CitationGraph& g, std::ostream& out);

/// Reads the subset of GraphML this library emits (keys declared up front,
/// one element per line is not required). Throws IoError on malformed input.
CitationGraph read_citation_graphml(std::istream& in);

/// GraphML with node attribute label and edge attributes weight / witnesses.
void write_graphml(const SocioNetwork& net, std::ostream& out);

/// Edge list `citing_doi,cited_doi`, one row per edge, header included.
void write_edge_csv(const CitationGraph& g, std::ostream& out);

}  // namespace fieldlens
