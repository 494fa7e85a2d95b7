#pragma once

#include <string>

#include "pizza/bolyai.hpp"
#include "pizza/dihedral.hpp"

namespace pizza {

/// Pieces of a dihedral certificate over the sectors, clipped to the proxy polygon.
/// Positive pieces and sectors get the darker fill.
std::string svg_dissection(const DissectionCertificate& c);

/// Source pieces on the left, their images on the right, matching colours.
std::string svg_bg(const BgCertificate& c);

}  // namespace pizza
