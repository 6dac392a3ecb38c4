#include "lgshor/serialization.hpp"

#include <stdexcept>

#include "json.hpp"

namespace lgshor {

using nlohmann::json;

namespace {

json state_json(const ModeState& state) {
  json arr = json::array();
  for (const auto& [key, amp] : state.terms()) {
    arr.push_back({{"l", key.l},
                   {"pol", std::string(1, pol_char(key.pol))},
                   {"re", amp.real()},
                   {"im", amp.imag()}});
  }
  return arr;
}

Polarization pol_from_string(const std::string& s) {
  if (s == "H") return Polarization::H;
  if (s == "V") return Polarization::V;
  throw std::invalid_argument("state_from_json: polarization must be H or V");
}

ModeState state_from(const json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("state_from_json: expected an array");
  ModeState state;
  for (const auto& term : arr) {
    state.add(term.at("l").get<int>(), pol_from_string(term.at("pol").get<std::string>()),
              Complex{term.at("re").get<double>(), term.at("im").get<double>()});
  }
  return state;
}

json element_json(const OpticalElement& element) {
  json obj{{"kind", element_kind_name(element.kind)}};
  switch (element.kind) {
    case ElementKind::SpiralPhasePlate:
      obj["delta_l"] = element.delta_l;
      break;
    case ElementKind::SlmPhase:
      obj["target_l"] = element.target_l;
      obj["phase"] = element.phase;
      break;
    case ElementKind::OamSorter:
      obj["split"] = element.split_set;
      break;
    case ElementKind::Polarizer:
      obj["axis"] = std::string(1, pol_char(element.axis));
      break;
    default:
      break;
  }
  return obj;
}

OpticalElement element_from(const json& obj) {
  const ElementKind kind = element_kind_from_name(obj.at("kind").get<std::string>());
  switch (kind) {
    case ElementKind::BeamSplitter50: return OpticalElement::beam_splitter();
    case ElementKind::PolarizingBeamSplitter: return OpticalElement::polarizing_beam_splitter();
    case ElementKind::SpiralPhasePlate:
      return OpticalElement::spiral_phase_plate(obj.at("delta_l").get<int>());
    case ElementKind::DovePrism: return OpticalElement::dove_prism();
    case ElementKind::PolarizerFlip: return OpticalElement::polarizer_flip();
    case ElementKind::SlmPhase:
      return OpticalElement::slm_phase(obj.at("target_l").get<int>(),
                                       obj.at("phase").get<double>());
    case ElementKind::OamSorter:
      return OpticalElement::oam_sorter(obj.at("split").get<std::set<int>>());
    case ElementKind::HalfWavePlate: return OpticalElement::half_wave_plate();
    case ElementKind::QuarterWavePlate: return OpticalElement::quarter_wave_plate();
    case ElementKind::Polarizer:
      return OpticalElement::polarizer(pol_from_string(obj.at("axis").get<std::string>()));
  }
  throw std::invalid_argument("circuit_from_json: unknown element kind");
}

json composite_json(const TransferOperator& op) {
  json columns = json::array();
  for (const auto& [l_in, terms] : op.columns) {
    json column{{"l_in", l_in}, {"terms", json::array()}};
    for (const auto& [l_out, amp] : terms) {
      column["terms"].push_back({{"l", l_out}, {"re", amp.real()}, {"im", amp.imag()}});
    }
    columns.push_back(std::move(column));
  }
  return {{"label", op.label}, {"note", op.note}, {"columns", std::move(columns)}};
}

TransferOperator composite_from(const json& obj) {
  TransferOperator op;
  op.label = obj.at("label").get<std::string>();
  op.note = obj.value("note", std::string{});
  for (const auto& column : obj.at("columns")) {
    auto& terms = op.columns[column.at("l_in").get<int>()];
    for (const auto& term : column.at("terms")) {
      terms.emplace_back(term.at("l").get<int>(),
                         Complex{term.at("re").get<double>(), term.at("im").get<double>()});
    }
  }
  return op;
}

const char* node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Source: return "source";
    case NodeKind::Element: return "element";
    case NodeKind::Composite: return "composite";
    case NodeKind::Merge: return "merge";
    case NodeKind::Sink: return "sink";
  }
  return "unknown";
}

}  // namespace

std::string state_to_json(const ModeState& state) { return state_json(state).dump(); }

ModeState state_from_json(const std::string& text) {
  return state_from(json::parse(text));
}

std::string circuit_to_json(const CircuitPath& circuit) {
  json nodes = json::array();
  for (std::size_t i = 0; i < circuit.nodes().size(); ++i) {
    const CircuitNode& node = circuit.nodes()[i];
    json obj{{"id", i}, {"kind", node_kind_name(node.kind)}};
    if (node.kind == NodeKind::Source || node.kind == NodeKind::Sink) obj["name"] = node.name;
    if (node.element) obj["element"] = element_json(*node.element);
    if (node.composite) obj["composite"] = composite_json(*node.composite);
    nodes.push_back(std::move(obj));
  }
  json edges = json::array();
  for (const CircuitEdge& edge : circuit.edges()) {
    json obj{{"from", {edge.from_node, edge.from_port}}, {"to", {edge.to_node, edge.to_port}}};
    if (edge.phase != 0.0) obj["phase"] = edge.phase;
    edges.push_back(std::move(obj));
  }
  return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}}.dump(2);
}

CircuitPath circuit_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("circuit_from_json: ") + err.what());
  }
  CircuitPath circuit;
  for (const auto& obj : doc.at("nodes")) {
    const std::string kind = obj.at("kind").get<std::string>();
    int id = -1;
    if (kind == "source") {
      id = circuit.add_source(obj.at("name").get<std::string>());
    } else if (kind == "sink") {
      id = circuit.add_sink(obj.at("name").get<std::string>());
    } else if (kind == "element") {
      id = circuit.add_element(element_from(obj.at("element")));
    } else if (kind == "composite") {
      id = circuit.add_composite(composite_from(obj.at("composite")));
    } else if (kind == "merge") {
      id = circuit.add_merge();
    } else {
      throw std::invalid_argument("circuit_from_json: unknown node kind " + kind);
    }
    if (id != obj.at("id").get<int>()) {
      throw std::invalid_argument("circuit_from_json: node ids must be dense and in order");
    }
  }
  for (const auto& obj : doc.at("edges")) {
    circuit.connect(obj.at("from").at(0).get<int>(), obj.at("from").at(1).get<int>(),
                    obj.at("to").at(0).get<int>(), obj.at("to").at(1).get<int>(),
                    obj.value("phase", 0.0));
  }
  circuit.validate();
  return circuit;
}

namespace {

json geometry_json(const ScreenGeometry& geom) {
  return {{"hole_gap", geom.hole_gap},
          {"screen_distance", geom.screen_distance},
          {"extent", {geom.extent_x, geom.extent_y}},
          {"resolution", {geom.res_x, geom.res_y}},
          {"wavelength", geom.wavelength},
          {"paraxial", geom.paraxial}};
}

}  // namespace

std::string geometry_to_json(const ScreenGeometry& geom) { return geometry_json(geom).dump(2); }

std::string image_sidecar_json(const FringeImage& image, const SourceSet* sources) {
  json doc{{"geometry", geometry_json(image.geometry())},
           {"max_intensity", image.max_intensity()}};
  if (sources) {
    static constexpr const char* names[] = {"A", "B", "C", "D"};
    json arr = json::array();
    for (int i = 0; i < 4; ++i) {
      const PointSource& s = sources->sources[i];
      arr.push_back({{"hole", names[i]},
                     {"x", s.x},
                     {"y", s.y},
                     {"re", s.amplitude.real()},
                     {"im", s.amplitude.imag()},
                     {"active", s.active}});
    }
    doc["sources"] = std::move(arr);
  }
  if (image.total_power() > 0.0) {
    const FringeSignature sig = signature(image);
    doc["signature"] = {{"center_contrast", sig.center_contrast},
                        {"symmetry_axis", std::string(1, sig.symmetry_axis)},
                        {"total_power", sig.total_power},
                        {"diagonal_moment", sig.diagonal_moment}};
  }
  return doc.dump(2);
}

std::string pipeline_report_json(
    const PipelineRun& run, const OracleReport* oracle,
    const std::vector<std::pair<std::string, std::string>>& image_paths) {
  json doc;
  doc["problem"] = {{"N", run.problem.modulus()},
                    {"a", run.problem.base()},
                    {"n", run.problem.control_bits()}};
  doc["mode"] = run_mode_name(run.mode);

  json stages = json::array();
  for (const auto& record : run.stages) {
    stages.push_back({{"name", record.name}, {"state", state_json(record.state)}});
  }
  doc["stages"] = std::move(stages);

  json readout;
  readout["j_values"] = run.readout.j_values;
  if (run.readout.r) readout["r"] = *run.readout.r;
  if (run.readout.factors) {
    readout["factors"] = {run.readout.factors->first, run.readout.factors->second};
  }
  if (run.readout.failure_reason) readout["failure_reason"] = *run.readout.failure_reason;
  doc["readout"] = std::move(readout);

  if (run.classifications) {
    auto classification_json = [](const Classification& c) {
      return json{{"label", c.label},
                  {"score", c.best_score},
                  {"margin", c.margin},
                  {"recognized", c.recognized}};
    };
    doc["classifications"] = {{"H", classification_json(run.classifications->first)},
                              {"V", classification_json(run.classifications->second)}};
  }

  if (oracle) {
    doc["oracle"] = {{"passed", oracle->passed},
                     {"expected_order", oracle->expected_order},
                     {"order_match", oracle->order_match},
                     {"factors_ok", oracle->factors_ok},
                     {"lines", oracle->lines}};
  }

  if (!image_paths.empty()) {
    json arr = json::array();
    for (const auto& [stage, path] : image_paths) {
      arr.push_back({{"stage", stage}, {"path", path}});
    }
    doc["images"] = std::move(arr);
  }
  return doc.dump(2);
}

}  // namespace lgshor
