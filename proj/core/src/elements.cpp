#include "lgshor/elements.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <numbers>
#include <stdexcept>

namespace lgshor {

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

// exp(i phase) with quarter-turn arguments made exact.
Complex phase_factor(double phase) {
  const double half_pi = std::numbers::pi / 2.0;
  if (phase == 0.0) return {1.0, 0.0};
  if (phase == half_pi) return {0.0, 1.0};
  if (phase == -half_pi) return {0.0, -1.0};
  if (phase == std::numbers::pi || phase == -std::numbers::pi) return {-1.0, 0.0};
  return {std::cos(phase), std::sin(phase)};
}

}  // namespace

const char* element_kind_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::BeamSplitter50: return "beam_splitter";
    case ElementKind::PolarizingBeamSplitter: return "polarizing_beam_splitter";
    case ElementKind::SpiralPhasePlate: return "spiral_phase_plate";
    case ElementKind::DovePrism: return "dove_prism";
    case ElementKind::PolarizerFlip: return "polarizer_flip";
    case ElementKind::SlmPhase: return "slm_phase";
    case ElementKind::OamSorter: return "oam_sorter";
    case ElementKind::HalfWavePlate: return "half_wave_plate";
    case ElementKind::QuarterWavePlate: return "quarter_wave_plate";
    case ElementKind::Polarizer: return "polarizer";
  }
  return "unknown";
}

ElementKind element_kind_from_name(const std::string& name) {
  static const std::map<std::string, ElementKind> table = {
      {"beam_splitter", ElementKind::BeamSplitter50},
      {"polarizing_beam_splitter", ElementKind::PolarizingBeamSplitter},
      {"spiral_phase_plate", ElementKind::SpiralPhasePlate},
      {"dove_prism", ElementKind::DovePrism},
      {"polarizer_flip", ElementKind::PolarizerFlip},
      {"slm_phase", ElementKind::SlmPhase},
      {"oam_sorter", ElementKind::OamSorter},
      {"half_wave_plate", ElementKind::HalfWavePlate},
      {"quarter_wave_plate", ElementKind::QuarterWavePlate},
      {"polarizer", ElementKind::Polarizer},
  };
  auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown element kind: " + name);
  return it->second;
}

OpticalElement OpticalElement::beam_splitter() {
  return {.kind = ElementKind::BeamSplitter50};
}

OpticalElement OpticalElement::polarizing_beam_splitter() {
  return {.kind = ElementKind::PolarizingBeamSplitter};
}

OpticalElement OpticalElement::spiral_phase_plate(int delta_l) {
  if (delta_l == 0) throw std::invalid_argument("spiral_phase_plate: delta_l must be nonzero");
  return {.kind = ElementKind::SpiralPhasePlate, .delta_l = delta_l};
}

OpticalElement OpticalElement::dove_prism() { return {.kind = ElementKind::DovePrism}; }

OpticalElement OpticalElement::polarizer_flip() {
  return {.kind = ElementKind::PolarizerFlip};
}

OpticalElement OpticalElement::slm_phase(int target_l, double phase) {
  if (!(phase > -std::numbers::pi && phase <= std::numbers::pi)) {
    throw std::invalid_argument("slm_phase: phase must lie in (-pi, pi]");
  }
  return {.kind = ElementKind::SlmPhase, .target_l = target_l, .phase = phase};
}

OpticalElement OpticalElement::oam_sorter(std::set<int> split_set) {
  if (split_set.empty()) throw std::invalid_argument("oam_sorter: empty split set");
  return {.kind = ElementKind::OamSorter, .split_set = std::move(split_set)};
}

OpticalElement OpticalElement::half_wave_plate() {
  return {.kind = ElementKind::HalfWavePlate};
}

OpticalElement OpticalElement::quarter_wave_plate() {
  return {.kind = ElementKind::QuarterWavePlate};
}

OpticalElement OpticalElement::polarizer(Polarization axis) {
  return {.kind = ElementKind::Polarizer, .axis = axis};
}

int OpticalElement::output_ports() const {
  switch (kind) {
    case ElementKind::BeamSplitter50:
    case ElementKind::PolarizingBeamSplitter:
    case ElementKind::OamSorter:
      return 2;
    default:
      return 1;
  }
}

int OpticalElement::input_ports() const {
  return kind == ElementKind::BeamSplitter50 ? 2 : 1;
}

bool OpticalElement::lossless() const {
  switch (kind) {
    case ElementKind::SpiralPhasePlate:
    case ElementKind::DovePrism:
    case ElementKind::PolarizerFlip:
    case ElementKind::SlmPhase:
    case ElementKind::HalfWavePlate:
    case ElementKind::QuarterWavePlate:
      return true;
    default:
      return false;  // two-port elements conserve power across both ports
  }
}

ElementOutputs apply_beam_splitter(const ModeState& in0, const ModeState& in1) {
  const Complex t{kInvSqrt2, 0.0};
  const Complex r{0.0, kInvSqrt2};
  ElementOutputs out;
  out.port0 = in0.scaled(t) + in1.scaled(r);
  out.port1 = in0.scaled(r) + in1.scaled(t);
  return out;
}

ElementOutputs apply_element(const OpticalElement& element, const ModeState& input) {
  ElementOutputs out;
  switch (element.kind) {
    case ElementKind::BeamSplitter50:
      return apply_beam_splitter(input, ModeState{});
    case ElementKind::PolarizingBeamSplitter:
      out.port0 = project_work(input, Polarization::H);
      out.port1 = project_work(input, Polarization::V);
      return out;
    case ElementKind::OamSorter:
      for (const auto& [key, amp] : input.terms()) {
        if (element.split_set.count(key.l)) {
          out.port0.set(key.l, key.pol, amp);
        } else {
          out.port1.set(key.l, key.pol, amp);
        }
      }
      return out;
    case ElementKind::SpiralPhasePlate:
      for (const auto& [key, amp] : input.terms()) {
        out.port0.add(key.l + element.delta_l, key.pol, amp);
      }
      return out;
    case ElementKind::DovePrism:
      for (const auto& [key, amp] : input.terms()) {
        out.port0.add(-key.l, key.pol, amp);
      }
      return out;
    case ElementKind::PolarizerFlip:
      for (const auto& [key, amp] : input.terms()) {
        out.port0.add(key.l, flipped(key.pol), amp);
      }
      return out;
    case ElementKind::SlmPhase: {
      const Complex factor = phase_factor(element.phase);
      for (const auto& [key, amp] : input.terms()) {
        out.port0.set(key.l, key.pol, key.l == element.target_l ? amp * factor : amp);
      }
      return out;
    }
    case ElementKind::HalfWavePlate:
    case ElementKind::QuarterWavePlate:
      out.port0 = input;
      return out;
    case ElementKind::Polarizer:
      out.port0 = project_work(input, element.axis);
      return out;
  }
  return out;
}

ModeState TransferOperator::apply(const ModeState& input) const {
  ModeState out;
  for (const auto& [key, amp] : input.terms()) {
    if (amp == Complex{}) continue;
    auto col = columns.find(key.l);
    if (col == columns.end()) {
      throw std::domain_error("TransferOperator '" + label + "': no column for l = " +
                              std::to_string(key.l));
    }
    for (const auto& [l_out, weight] : col->second) {
      out.add(l_out, key.pol, amp * weight);
    }
  }
  return out;
}

namespace {

int node_input_ports(const CircuitNode& node) {
  switch (node.kind) {
    case NodeKind::Source: return 0;
    case NodeKind::Element: return node.element->input_ports();
    case NodeKind::Composite: return 1;
    case NodeKind::Merge: return 2;
    case NodeKind::Sink: return 1;
  }
  return 0;
}

int node_output_ports(const CircuitNode& node) {
  switch (node.kind) {
    case NodeKind::Source: return 1;
    case NodeKind::Element: return node.element->output_ports();
    case NodeKind::Composite: return 1;
    case NodeKind::Merge: return 1;
    case NodeKind::Sink: return 0;
  }
  return 0;
}

}  // namespace

int CircuitPath::add_node(CircuitNode node) {
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

int CircuitPath::add_source(std::string name) {
  return add_node({.kind = NodeKind::Source, .name = std::move(name)});
}

int CircuitPath::add_element(OpticalElement element) {
  return add_node({.kind = NodeKind::Element, .element = std::move(element)});
}

int CircuitPath::add_composite(TransferOperator op) {
  return add_node({.kind = NodeKind::Composite, .composite = std::move(op)});
}

int CircuitPath::add_merge() { return add_node({.kind = NodeKind::Merge}); }

int CircuitPath::add_sink(std::string name) {
  return add_node({.kind = NodeKind::Sink, .name = std::move(name)});
}

void CircuitPath::connect(int from_node, int from_port, int to_node, int to_port,
                          double phase) {
  edges_.push_back({from_node, from_port, to_node, to_port, phase});
}

std::vector<std::string> CircuitPath::source_names() const {
  std::vector<std::string> names;
  for (const auto& node : nodes_) {
    if (node.kind == NodeKind::Source) names.push_back(node.name);
  }
  return names;
}

std::vector<std::string> CircuitPath::sink_names() const {
  std::vector<std::string> names;
  for (const auto& node : nodes_) {
    if (node.kind == NodeKind::Sink) names.push_back(node.name);
  }
  return names;
}

std::map<ElementKind, int> CircuitPath::element_census() const {
  std::map<ElementKind, int> census;
  for (const auto& node : nodes_) {
    if (node.kind == NodeKind::Element) ++census[node.element->kind];
  }
  return census;
}

int CircuitPath::composite_count() const {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(), [](const auto& n) {
    return n.kind == NodeKind::Composite;
  }));
}

void CircuitPath::validate() const {
  if (source_names().empty()) throw std::invalid_argument("circuit: no source");
  if (sink_names().empty()) throw std::invalid_argument("circuit: no sink");

  std::set<std::pair<int, int>> bound_inputs;
  std::set<std::pair<int, int>> bound_outputs;
  for (const auto& edge : edges_) {
    if (edge.from_node < 0 || edge.from_node >= static_cast<int>(nodes_.size()) ||
        edge.to_node < 0 || edge.to_node >= static_cast<int>(nodes_.size())) {
      throw std::invalid_argument("circuit: edge references a missing node");
    }
    const auto& from = nodes_[edge.from_node];
    const auto& to = nodes_[edge.to_node];
    if (edge.from_port < 0 || edge.from_port >= node_output_ports(from)) {
      throw std::invalid_argument("circuit: bad output port");
    }
    if (edge.to_port < 0 || edge.to_port >= node_input_ports(to)) {
      throw std::invalid_argument("circuit: bad input port");
    }
    if (!bound_outputs.emplace(edge.from_node, edge.from_port).second) {
      throw std::invalid_argument("circuit: output port with two edges (beams do not fan out)");
    }
    if (!bound_inputs.emplace(edge.to_node, edge.to_port).second) {
      throw std::invalid_argument("circuit: input port with two edges");
    }
  }
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
    const auto& node = nodes_[i];
    if (node.kind == NodeKind::Source) continue;
    // Port 0 must always be fed; a beam splitter's second input may stay
    // open (vacuum), every other multi-input node needs both.
    if (!bound_inputs.count({i, 0})) {
      throw std::invalid_argument("circuit: node without an input beam");
    }
    if (node.kind == NodeKind::Merge && !bound_inputs.count({i, 1})) {
      throw std::invalid_argument("circuit: merge node needs two input beams");
    }
  }
}

SimulationResult simulate_path(const CircuitPath& circuit,
                               const std::map<std::string, ModeState>& sources) {
  circuit.validate();
  const auto& nodes = circuit.nodes();
  const auto& edges = circuit.edges();
  const int n = static_cast<int>(nodes.size());

  std::vector<int> in_degree(n, 0);
  std::vector<std::vector<int>> out_edges(n);  // edge indices by from_node
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    ++in_degree[edges[e].to_node];
    out_edges[edges[e].from_node].push_back(e);
  }

  // Gathered input states per (node, port).
  std::vector<std::array<ModeState, 2>> inputs(n);

  SimulationResult result;
  std::deque<int> ready;
  for (int i = 0; i < n; ++i) {
    if (nodes[i].kind == NodeKind::Source) {
      auto it = sources.find(nodes[i].name);
      if (it == sources.end()) {
        throw std::invalid_argument("simulate_path: unbound source '" + nodes[i].name + "'");
      }
      inputs[i][0] = it->second;
    }
    if (in_degree[i] == 0) ready.push_back(i);
  }

  int processed = 0;
  std::set<std::pair<int, int>> connected_outputs;
  for (const auto& edge : edges) connected_outputs.emplace(edge.from_node, edge.from_port);

  while (!ready.empty()) {
    const int id = ready.front();
    ready.pop_front();
    ++processed;
    const auto& node = nodes[id];

    std::array<ModeState, 2> outputs;
    int out_ports = 0;
    switch (node.kind) {
      case NodeKind::Source:
        outputs[0] = inputs[id][0];
        out_ports = 1;
        break;
      case NodeKind::Element: {
        ElementOutputs r = node.element->kind == ElementKind::BeamSplitter50
                               ? apply_beam_splitter(inputs[id][0], inputs[id][1])
                               : apply_element(*node.element, inputs[id][0]);
        outputs[0] = std::move(r.port0);
        outputs[1] = std::move(r.port1);
        out_ports = node.element->output_ports();
        break;
      }
      case NodeKind::Composite:
        outputs[0] = node.composite->apply(inputs[id][0]);
        out_ports = 1;
        break;
      case NodeKind::Merge:
        outputs[0] = inputs[id][0] + inputs[id][1];
        out_ports = 1;
        break;
      case NodeKind::Sink:
        result.sinks[node.name] = inputs[id][0];
        out_ports = 0;
        break;
    }

    for (int port = 0; port < out_ports; ++port) {
      if (!connected_outputs.count({id, port})) {
        result.discarded_power += outputs[port].norm2();
      }
    }
    for (int e : out_edges[id]) {
      const auto& edge = edges[e];
      ModeState state = outputs[edge.from_port];
      if (edge.phase != 0.0) state = state.scaled(phase_factor(edge.phase));
      inputs[edge.to_node][edge.to_port] = inputs[edge.to_node][edge.to_port] + state;
      if (--in_degree[edge.to_node] == 0) ready.push_back(edge.to_node);
    }
  }
  if (processed != n) {
    throw std::runtime_error("simulate_path: circuit graph has a cycle");
  }
  return result;
}

CircuitPath build_mef_circuit(const ShorProblem& problem, const BasisMap& basis,
                              const WorkMap& work_map) {
  if (problem.dim() != 4 || basis.dim() < 4) {
    throw std::domain_error("build_mef_circuit: needs the n = 2 compiled register");
  }
  const auto values = problem.distinct_mef_values();
  if (values.size() != 2) {
    throw std::domain_error("build_mef_circuit: needs a two-valued instance");
  }
  for (long long v : values) {
    if (!work_map.count(v)) {
      throw std::domain_error("build_mef_circuit: work map does not cover value " +
                              std::to_string(v));
    }
  }
  if (work_map.at(values.front()) == work_map.at(values.back())) {
    throw std::domain_error("build_mef_circuit: work map must separate the two values");
  }
  if (basis.l_of(1) != -basis.l_of(0) || basis.l_of(3) != -basis.l_of(2)) {
    throw std::domain_error(
        "build_mef_circuit: Dove-prism arms need l(odd x) = -l(even x) label pairs");
  }

  // a^x takes value 1 on even x (transmitted arms) and `a` on odd x (the
  // Dove-prism arms). The flips sit on whichever side the work map sends
  // away from the even-x polarization.
  const Polarization even_pol = work_map.at(problem.mef_value(0));
  const bool flips_on_reflected = even_pol == Polarization::H;

  CircuitPath c;
  const int src = c.add_source("laser");
  const int pol = c.add_element(OpticalElement::polarizer(Polarization::H));
  const int bs1 = c.add_element(OpticalElement::beam_splitter());
  const int spp1 = c.add_element(OpticalElement::spiral_phase_plate(basis.l_of(0)));
  const int spp2 = c.add_element(OpticalElement::spiral_phase_plate(basis.l_of(2)));
  const int bs2 = c.add_element(OpticalElement::beam_splitter());
  const int bs3 = c.add_element(OpticalElement::beam_splitter());
  const int dp1 = c.add_element(OpticalElement::dove_prism());
  const int dp2 = c.add_element(OpticalElement::dove_prism());
  const int flip1 = c.add_element(OpticalElement::polarizer_flip());
  const int flip2 = c.add_element(OpticalElement::polarizer_flip());
  const int bs4 = c.add_element(OpticalElement::beam_splitter());
  const int bs5 = c.add_element(OpticalElement::beam_splitter());
  const int merge = c.add_merge();
  const int sink = c.add_sink("out");

  c.connect(src, 0, pol, 0);
  c.connect(pol, 0, bs1, 0);
  c.connect(bs1, 0, spp1, 0);
  c.connect(bs1, 1, spp2, 0);
  c.connect(spp1, 0, bs2, 0);
  c.connect(spp2, 0, bs3, 0);

  // Transmitted arms keep the generated mode; reflected arms invert OAM.
  if (flips_on_reflected) {
    c.connect(bs2, 0, bs4, 0);
    c.connect(bs2, 1, dp1, 0);
    c.connect(dp1, 0, flip1, 0);
    c.connect(flip1, 0, bs4, 1);
    c.connect(bs3, 0, bs5, 0);
    c.connect(bs3, 1, dp2, 0);
    c.connect(dp2, 0, flip2, 0);
    c.connect(flip2, 0, bs5, 1);
  } else {
    c.connect(bs2, 0, flip1, 0);
    c.connect(flip1, 0, bs4, 0);
    c.connect(bs2, 1, dp1, 0);
    c.connect(dp1, 0, bs4, 1);
    c.connect(bs3, 0, flip2, 0);
    c.connect(flip2, 0, bs5, 0);
    c.connect(bs3, 1, dp2, 0);
    c.connect(dp2, 0, bs5, 1);
  }

  // The cross ports of the recombiners carry the balanced sums; a quarter
  // wave of extra path on the first pair aligns the two (the delay stages'
  // job in the physical setup).
  c.connect(bs4, 1, merge, 0, std::numbers::pi / 2.0);
  c.connect(bs5, 1, merge, 1);
  c.connect(merge, 0, sink, 0);
  return c;
}

CircuitPath build_mef_circuit(const ShorProblem& problem) {
  return build_mef_circuit(problem, BasisMap::compiled_default(), default_work_map(problem));
}

namespace {

TransferOperator sagnac_operator(const BasisMap& basis, const std::vector<int>& group) {
  const std::size_t dim = basis.dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  TransferOperator op;
  op.label = "sagnac_abs" + std::to_string(std::abs(group.front()));
  op.note =
      "Net loop transfer for this mode pair: a BS and Dove prism create the "
      "opposite-OAM pair, SPPs relabel onto the output basis and SLMs imprint "
      "exp(i 2 pi j x / 2^n); arm-level placement inside the loop is not pinned "
      "by this model.";
  for (int l_in : group) {
    const std::size_t x = *basis.x_of(l_in);
    auto& column = op.columns[l_in];
    for (std::size_t j = 0; j < dim; ++j) {
      // exp(i 2 pi j x / dim), quarter turns exact.
      const std::size_t m = (j * x) % dim;
      Complex w;
      if (4 * m % dim == 0) {
        switch (4 * m / dim) {
          case 0: w = {1.0, 0.0}; break;
          case 1: w = {0.0, 1.0}; break;
          case 2: w = {-1.0, 0.0}; break;
          default: w = {0.0, -1.0}; break;
        }
      } else {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(dim);
        w = {std::cos(angle), std::sin(angle)};
      }
      column.emplace_back(basis.l_of(j), scale * w);
    }
  }
  return op;
}

}  // namespace

CircuitPath build_dft_circuit(const BasisMap& basis) {
  if (basis.dim() != 4) {
    throw std::domain_error("build_dft_circuit: needs the four-dimensional basis");
  }
  // Partition the labels into the two |l| groups the sorters separate.
  std::map<int, std::vector<int>> groups;
  for (int l : basis.labels()) groups[std::abs(l)].push_back(l);
  if (groups.size() != 2) {
    throw std::domain_error("build_dft_circuit: basis labels must form two |l| groups");
  }
  const auto& low = groups.begin()->second;
  const auto& high = std::next(groups.begin())->second;
  std::set<int> low_set(low.begin(), low.end());

  CircuitPath c;
  const int src = c.add_source("in");
  const int pbs = c.add_element(OpticalElement::polarizing_beam_splitter());
  c.connect(src, 0, pbs, 0);

  for (int branch = 0; branch < 2; ++branch) {
    const int sorter = c.add_element(OpticalElement::oam_sorter(low_set));
    const int sag_low = c.add_composite(sagnac_operator(basis, low));
    const int sag_high = c.add_composite(sagnac_operator(basis, high));
    const int bs = c.add_element(OpticalElement::beam_splitter());
    const int sink = c.add_sink(branch == 0 ? "H" : "V");

    c.connect(pbs, branch, sorter, 0);
    c.connect(sorter, 0, sag_low, 0);
    c.connect(sorter, 1, sag_high, 0);
    c.connect(sag_low, 0, bs, 0);
    // A quarter wave less path on the second arm turns the combiner's
    // i-reflection into a plain sum on port 0.
    c.connect(sag_high, 0, bs, 1, -std::numbers::pi / 2.0);
    c.connect(bs, 0, sink, 0);
  }
  return c;
}

}  // namespace lgshor
