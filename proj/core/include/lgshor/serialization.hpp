#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lgshor/elements.hpp"
#include "lgshor/interference.hpp"
#include "lgshor/shor.hpp"

namespace lgshor {

/// JSON array of {l, pol, re, im} objects, ordered by (l, pol).
std::string state_to_json(const ModeState& state);
ModeState state_from_json(const std::string& text);

/// Circuit graph as {nodes: [...], edges: [...]}; parse(dump) rebuilds an
/// identical graph. Throws std::invalid_argument on malformed input.
std::string circuit_to_json(const CircuitPath& circuit);
CircuitPath circuit_from_json(const std::string& text);

std::string geometry_to_json(const ScreenGeometry& geom);

/// Sidecar written next to each rendered image: geometry, the four source
/// amplitudes (when given) and the fringe signature.
std::string image_sidecar_json(const FringeImage& image, const SourceSet* sources);

/// Full run report: problem, per-stage serialized states, readout, the
/// oracle verdict and relative image paths. Deterministic (no timestamps).
std::string pipeline_report_json(
    const PipelineRun& run, const OracleReport* oracle,
    const std::vector<std::pair<std::string, std::string>>& image_paths = {});

}  // namespace lgshor
