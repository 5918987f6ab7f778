#pragma once

#include "treelip/funcspace.hpp"
#include "treelip/symbol.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace treelip {

class AnalysisError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Limits over an infinite tree cannot be decided from a truncation, so every
/// classifier answers yes / no / inconclusive together with its evidence.
enum class Verdict { yes, no, inconclusive };

std::string_view to_string(Verdict v);

struct AnalysisOptions {
  std::size_t window = 8;    // depth levels in a tail window
  double tolerance = 1e-3;   // relative convergence threshold
};

/// A symbol psi materialized on a tree, with its (declared or certified) tail class.
struct Symbol {
  TreeFunction values;
  TailClass tail = TailClass::unknown;
  /// Radial value at the deepest level when the tail is eventually constant.
  std::optional<Complex> tail_value;
};

Symbol make_symbol(const SymbolSpec& spec, std::shared_ptr<const Tree> tree,
                   const WeightTable& table);

/// Tail behavior of a depth profile over the last `window` levels.
struct TailDiagnostic {
  std::string quantity;
  double sup = 0.0;              // over every depth
  double window_sup = 0.0;       // over depths [N - W, N]
  double window_min = 0.0;
  double relative_change = 0.0;  // growth of the running sup across the window
  bool converged = false;        // running sup changed by at most tol (relative)
  bool growing = false;          // running sup rose at every step of the last two windows
  bool decayed = false;          // window values at most tol * sup
  bool positive_envelope = false;  // window stays above tol * sup and is not falling
};

TailDiagnostic diagnose(std::string quantity, const DepthProfile& profile,
                        const AnalysisOptions& options);

struct Classification {
  Verdict verdict = Verdict::inconclusive;
  std::string reason;
  std::string quantity;  // the witnessing quantity
  double value = 0.0;
};

/// Per-depth quantities every analysis is built from.
struct SymbolProfiles {
  DepthProfile modulus_sup;        // d -> max_{|v|=d} |psi(v)|, d >= 0
  DepthProfile modulus_inf;        // d -> min_{|v|=d} |psi(v)|, d >= 0
  DepthProfile weighted_next_sup;  // d -> max_{|v|=d} mu_{k+1}(d) Dpsi(v), d >= 1
  std::vector<VertexId> weighted_next_argmax;  // one vertex per depth >= 1
};

SymbolProfiles symbol_profiles(const Symbol& psi, const WeightTable& table);

struct BoundedResult {
  Classification classification;
  double sup_modulus = 0.0;        // S_inf
  double sup_weighted_next = 0.0;  // S_{k+1}
  TailDiagnostic modulus;
  TailDiagnostic weighted;
};

BoundedResult classify_bounded(const Symbol& psi, const WeightTable& table,
                               const AnalysisOptions& options = {});

struct OperatorNormBounds {
  double lower = 0.0;  // max{S_inf, ||psi||_k}
  double upper = 0.0;  // S_inf + S_{k+1}
  double sup_modulus = 0.0;
  double norm_k = 0.0;
  double sup_weighted_next = 0.0;
};

/// Requires the bounded verdict not to be "no".
OperatorNormBounds opnorm_bounds(const Symbol& psi, const WeightTable& table,
                                 const AnalysisOptions& options = {});

enum ProbeFamily : unsigned {
  probe_constant = 1u << 0,
  probe_point_masses = 1u << 1,  // chi at the |psi|-maximizing vertex of each level
  probe_sectors = 1u << 2,       // f_w per level
  probe_plateaus = 1u << 3,      // g_w per level
  probe_shells = 1u << 4,
  probe_powers = 1u << 5,        // f_p, p in {0.25, 0.5, 0.75}
  probe_ellk = 1u << 6,
  probe_all = (1u << 7) - 1,
};

struct EmpiricalNorm {
  double value = 0.0;
  std::string best_probe;
  std::size_t probes = 0;
};

/// max over probe functions f of ||psi f||_k / ||f||_k.
EmpiricalNorm empirical_opnorm_lower(const Symbol& psi, const WeightTable& table,
                                     unsigned families = probe_all);

struct CompactResult {
  Classification classification;
  TailDiagnostic modulus;
  TailDiagnostic weighted;
};

CompactResult classify_compact(const Symbol& psi, const WeightTable& table,
                               const AnalysisOptions& options = {});

struct ShellSequence {
  std::vector<std::size_t> shell_index;
  std::vector<double> values;  // ||psi shell(n)||_k
  double tail_max = 0.0;       // over n in the tail window
};

ShellSequence compact_sequence_check(const Symbol& psi, const WeightTable& table,
                                     const AnalysisOptions& options = {});

struct SpectralPoint {
  Complex value;
  VertexId witness = kRoot;  // psi(witness) == value
};

struct SpectrumReport {
  std::vector<SpectralPoint> point_spectrum;
  std::vector<Complex> closure_extras;
  std::vector<Complex> sigma;
  std::vector<Complex> sigma_ap;
  /// False when a closure point is a truncation estimate of a limit rather than exact.
  bool closure_exact = true;
  std::string note;
};

/// Throws AnalysisError when the tail is unknown and the sampled range has not stabilized,
/// or when the operator is classified unbounded.
SpectrumReport spectrum(const Symbol& psi, const WeightTable& table,
                        const AnalysisOptions& options = {});

struct BoundedBelowResult {
  Classification classification;
  double inf_modulus = 0.0;
  VertexId inf_vertex = kRoot;
  TailDiagnostic modulus_inf;
};

BoundedBelowResult bounded_below(const Symbol& psi, const WeightTable& table,
                                 const AnalysisOptions& options = {});

struct WindowSample {
  std::size_t end_depth = 0;
  double a = 0.0;
  double b = 0.0;
};

struct EssentialNormBounds {
  double a = 0.0;  // A_N: window sup of |psi|
  double b = 0.0;  // B_N: window sup of mu_{k+1} Dpsi
  double lower = 0.0;
  double upper = 0.0;
  std::vector<WindowSample> history;
  TailDiagnostic a_tail;
  TailDiagnostic b_tail;
};

EssentialNormBounds essential_norm_bounds(const Symbol& psi, const WeightTable& table,
                                          const AnalysisOptions& options = {});

struct EssentialWitness {
  double a_route = 0.0;   // tail max of ||psi shell(n)||_k / ||shell(n)||_k
  double b_route = 0.0;   // mu_k(m) ell_k(m) Dpsi(v_n) / ||h_n||_k
  double hn_norm = 0.0;
  double p = 0.5;
  VertexId vertex = kRoot;  // v_n
  std::size_t depth = 0;    // m = |v_n|
};

EssentialWitness essnorm_lower_witness(const Symbol& psi, const WeightTable& table, double p,
                                       const AnalysisOptions& options = {});

struct IsometryResult {
  bool consistent = true;
  std::string witness;  // probe name when not consistent
  double image_norm = 0.0;
  double probe_norm = 0.0;
  std::size_t probes = 0;
};

IsometryResult isometry_check(const Symbol& psi, const WeightTable& table,
                              double relative_tolerance = 1e-12);

struct AnalysisReport {
  unsigned k = 1;
  AnalysisOptions options;
  BoundedResult bounded;
  CompactResult compact;
  std::optional<BoundedBelowResult> below;
  std::optional<OperatorNormBounds> opnorm;
  std::optional<EssentialNormBounds> essnorm;

  bool any_inconclusive() const;
};

AnalysisReport analyze(const Symbol& psi, const WeightTable& table,
                       const AnalysisOptions& options = {});

}  // namespace treelip
