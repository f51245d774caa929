#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfst/automaton.hpp"
#include "pfst/decode.hpp"
#include "pfst/estimate.hpp"
#include "pfst/semiring.hpp"

namespace pfst {

class WorkerPool;

// Linearizable max over packed words (compare-and-exchange loop).
void atomic_max_packed(PackedCell& cell, PackedCell candidate);

// Linearizable log-add-exp accumulation (compare-and-exchange loop).
void atomic_log_add(double& cell, double value, bool fast_math = false);

// The thread-pool substrate has no fixed execution width; this is the
// number of arcs one work unit processes by default.
inline constexpr std::size_t kPoolPreferredGroupSize = 1024;

struct ParallelConfig {
  // Arcs handled per work unit; 0 selects the substrate default.
  std::size_t work_group_size = 0;
  // Threads taking part in each step, caller included; 0 selects
  // max(4, hardware concurrency).
  std::size_t num_workers = 0;
  // Single-precision transcendentals in forward/backward accumulation.
  bool fast_math = false;
  std::string backend_name = "threads";
  // Invoked after each completed step with the row index and the
  // row_checksum of the row just written.
  std::function<void(std::size_t row, std::uint64_t checksum)> step_checksum;
};

// Throws std::invalid_argument for an unknown backend name.
ParallelConfig resolve(ParallelConfig config);

// Data-parallel Viterbi and forward-backward: for each input symbol one
// work item per arc in its segment, with the time steps separated by
// barriers. S, T and the weights are copied into backend-owned arrays; R
// and O are read from the host model.
//
// Safe to call from several threads; calls are serialized on the pool.
class ParallelBackend {
 public:
  explicit ParallelBackend(const TransducerModel& model, ParallelConfig config = {});
  ~ParallelBackend();

  ParallelBackend(const ParallelBackend&) = delete;
  ParallelBackend& operator=(const ParallelBackend&) = delete;

  const ParallelConfig& config() const { return config_; }
  const TransducerModel& model() const { return *model_; }

  ViterbiChart viterbi_fill(std::span<const SymbolId> input,
                            WeightDomain domain = WeightDomain::log);
  LogChart forward_fill(std::span<const SymbolId> input);
  LogChart backward_fill(std::span<const SymbolId> input);
  PosteriorTable expected_counts(std::span<const SymbolId> input);

  // Picks the best final entry and walks the back-pointers against the
  // backend's own arrays; only the arc indices come back, outputs are then
  // looked up in the host model. Throws NoPath or CorruptChart.
  DecodePath reconstruct(const ViterbiChart& chart, std::span<const SymbolId> input);

  DecodePath decode(std::string_view sentence, WeightDomain domain = WeightDomain::log);

 private:
  struct DeviceArcs {
    std::vector<StateId> source;
    std::vector<StateId> target;
    std::vector<double> log_weight;
    std::vector<double> weight;
  };

  template <class PerArc>
  void launch(ArcRange range, PerArc&& per_arc);
  void report(std::size_t row, std::uint64_t checksum) const;

  const TransducerModel* model_;
  ParallelConfig config_;
  DeviceArcs device_;
  std::unique_ptr<WorkerPool> pool_;
};

// Convenience wrappers building a throwaway backend.
ViterbiChart par_viterbi_fill(const TransducerModel& model, std::span<const SymbolId> input,
                              const ParallelConfig& config = {},
                              WeightDomain domain = WeightDomain::log);
LogChart par_forward_fill(const TransducerModel& model, std::span<const SymbolId> input,
                          const ParallelConfig& config = {});
LogChart par_backward_fill(const TransducerModel& model, std::span<const SymbolId> input,
                           const ParallelConfig& config = {});
PosteriorTable par_expected_counts(const TransducerModel& model, std::span<const SymbolId> input,
                                   const ParallelConfig& config = {});
DecodePath reconstruct_on_device(const ViterbiChart& chart, const TransducerModel& model,
                                 std::span<const SymbolId> input,
                                 const ParallelConfig& config = {});

}  // namespace pfst
