#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lgshor/modespace.hpp"

namespace lgshor {

enum class ElementKind {
  BeamSplitter50,
  PolarizingBeamSplitter,
  SpiralPhasePlate,
  DovePrism,
  PolarizerFlip,
  SlmPhase,
  OamSorter,
  HalfWavePlate,
  QuarterWavePlate,
  Polarizer,
};

const char* element_kind_name(ElementKind kind);
ElementKind element_kind_from_name(const std::string& name);

/// One optical component and its parameters. Use the factory functions;
/// they validate the parameter ranges (SPP shift nonzero, SLM phase in
/// (-pi, pi]). Wave plates act as exact identities here: their physical
/// role is compensating beam-splitter phase shifts, which the circuit
/// builders express as explicit edge phases instead.
struct OpticalElement {
  ElementKind kind = ElementKind::HalfWavePlate;
  int delta_l = 0;                          // SpiralPhasePlate
  int target_l = 0;                         // SlmPhase
  double phase = 0.0;                       // SlmPhase, radians
  std::set<int> split_set;                  // OamSorter: l values routed to port 0
  Polarization axis = Polarization::H;      // Polarizer

  static OpticalElement beam_splitter();
  static OpticalElement polarizing_beam_splitter();
  static OpticalElement spiral_phase_plate(int delta_l);
  static OpticalElement dove_prism();
  static OpticalElement polarizer_flip();
  static OpticalElement slm_phase(int target_l, double phase);
  static OpticalElement oam_sorter(std::set<int> split_set);
  static OpticalElement half_wave_plate();
  static OpticalElement quarter_wave_plate();
  static OpticalElement polarizer(Polarization axis);

  /// Two for BS, PBS and the sorter, one otherwise.
  int output_ports() const;
  /// Two for BS (second input may stay unbound: vacuum), one otherwise.
  int input_ports() const;
  /// True when the single-output action preserves the norm exactly.
  bool lossless() const;

  friend bool operator==(const OpticalElement&, const OpticalElement&) = default;
};

struct ElementOutputs {
  ModeState port0;
  ModeState port1;  // empty unless the element has two output ports
};

/// Action of an element on a single input beam. Conventions:
///   BS    port0 = s/sqrt(2) (transmitted), port1 = i s/sqrt(2) (reflected)
///   PBS   port0 = H component, port1 = V component
///   sorter port0 = l in split_set, port1 = remainder
///   SPP   l -> l + delta_l;  DP  l -> -l;  flip  H <-> V
///   SLM   amplitude of target_l terms times exp(i phase)
///   HWP/QWP identity;  polarizer  projection onto axis
ElementOutputs apply_element(const OpticalElement& element, const ModeState& input);

/// Symmetric lossless combiner: out0 = (in0 + i in1)/sqrt(2),
/// out1 = (i in0 + in1)/sqrt(2). With in1 empty this is apply_element(BS).
ElementOutputs apply_beam_splitter(const ModeState& in0, const ModeState& in1);

/// Linear operator on the OAM index alone, polarization carried through.
/// Used for the Sagnac interferometer composites, whose internal loop
/// (BS + Dove prism producing the opposite-OAM pair, SPP relabeling, SLM
/// phases) is precomputed instead of modeled as a cyclic graph.
struct TransferOperator {
  // columns[l_in] = list of (l_out, amplitude)
  std::map<int, std::vector<std::pair<int, Complex>>> columns;
  std::string label;
  std::string note;

  /// Throws std::domain_error when the input holds an OAM value without a
  /// column.
  ModeState apply(const ModeState& input) const;

  friend bool operator==(const TransferOperator& a, const TransferOperator& b) {
    return a.columns == b.columns && a.label == b.label;
  }
};

enum class NodeKind { Source, Element, Composite, Merge, Sink };

struct CircuitNode {
  NodeKind kind = NodeKind::Source;
  std::string name;                          // sources and sinks
  std::optional<OpticalElement> element;     // NodeKind::Element
  std::optional<TransferOperator> composite;  // NodeKind::Composite
};

struct CircuitEdge {
  int from_node = 0;
  int from_port = 0;
  int to_node = 0;
  int to_port = 0;
  double phase = 0.0;  // path-length phase knob, radians

  friend bool operator==(const CircuitEdge&, const CircuitEdge&) = default;
};

/// Directed acyclic beam-path graph. Nodes are sources, element actions,
/// Sagnac composites, merges (complex sum of two beams) and named sinks;
/// edges connect output ports to input ports and may carry a path phase.
/// Output ports without an edge are discarded (their power is still
/// accounted for by the simulator).
class CircuitPath {
public:
  int add_source(std::string name);
  int add_element(OpticalElement element);
  int add_composite(TransferOperator op);
  int add_merge();
  int add_sink(std::string name);

  void connect(int from_node, int from_port, int to_node, int to_port,
               double phase = 0.0);

  const std::vector<CircuitNode>& nodes() const { return nodes_; }
  std::vector<CircuitNode>& nodes() { return nodes_; }
  const std::vector<CircuitEdge>& edges() const { return edges_; }

  std::vector<std::string> source_names() const;
  std::vector<std::string> sink_names() const;

  /// Count of element nodes per kind (composites and merges not included).
  std::map<ElementKind, int> element_census() const;
  int composite_count() const;

  /// Structural checks: port ranges, single edge per input port, at least
  /// one source and one sink. Throws std::invalid_argument on violation.
  void validate() const;

private:
  int add_node(CircuitNode node);

  std::vector<CircuitNode> nodes_;
  std::vector<CircuitEdge> edges_;
};

struct SimulationResult {
  std::map<std::string, ModeState> sinks;
  /// Squared norm that left through unconnected output ports.
  double discarded_power = 0.0;
};

/// Evaluates the graph in topological order; merge nodes sum their two
/// inputs. Every source must be bound. Throws std::invalid_argument for
/// unbound sources and std::runtime_error when the graph has a cycle.
SimulationResult simulate_path(const CircuitPath& circuit,
                               const std::map<std::string, ModeState>& sources);

/// Modular-exponentiation light path: polarizer, a splitting BS feeding
/// SPP(+1) and SPP(+2) arms, per-arm BSs whose reflected beams pass a Dove
/// prism and a polarizer flip, and recombining BSs balanced by explicit
/// quarter-turn path phases. Source "laser" (the l = 0 Gaussian beam),
/// sink "out" carrying the post-MEF state.
CircuitPath build_mef_circuit(const ShorProblem& problem, const BasisMap& basis,
                              const WorkMap& work_map);
CircuitPath build_mef_circuit(const ShorProblem& problem);

/// DFT light path: PBS, one OAM sorter per polarization branch splitting
/// |l| = 1 from |l| = 2, one Sagnac composite per sorter port implementing
/// the DFT columns of its mode pair, and a balanced recombining BS per
/// branch. Source "in", sinks "H" and "V". Requires the four-dimensional
/// basis (n = 2).
CircuitPath build_dft_circuit(const BasisMap& basis);

}  // namespace lgshor
