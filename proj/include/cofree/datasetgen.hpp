#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cofree/sample.hpp"
#include "cofree/world.hpp"

namespace cofree {

inline constexpr int kDatasetVersion = 1;

struct DatagenConfig {
    std::vector<TaskId> tasks = {TaskId::crossing_transfer, TaskId::parallel_place};
    int episodes_per_task = 200;
    int candidates = 8;
    double sigma_a = 0.01;
    std::vector<int> horizons = {2, 3, 5};  // curriculum phases, equal episode shares
    double inflation = 0.01;
    double scene_noise = 0.005;
    double near_miss_threshold = 0.05;
    int oversample_factor = 3;
    std::uint64_t seed = 1;

    void validate(const WorldConfig& world) const;
    /// Hex digest of every field; changes whenever the configuration does.
    std::string digest() const;
};

struct DatasetHeader {
    int format_version = kDatasetVersion;
    std::vector<int> horizons;
    std::size_t count = 0;
    std::map<int, std::size_t> phase_counts;
    std::size_t positives = 0;
    std::uint64_t seed = 0;
    std::string config_digest;
};

struct Dataset {
    DatasetHeader header;
    std::vector<Sample> samples;  // grouped by phase in increasing H

    /// Samples split by horizon, increasing H.
    std::vector<std::vector<Sample>> phases() const;
    /// Recomputes count, phase counts and positives from the samples.
    void refresh_header();
};

/// Candidate 0 is the nominal plan; the rest add i.i.d. N(0, sigma_a) noise
/// per component, clipped to +-a_max.
std::vector<PlanSequence> sample_candidates(const PlanSequence& nominal, int n, double sigma_a, double a_max,
                                            Rng& rng);

RiskLabel label_plan(const WorldConfig& cfg, const DualArmState& state, const PlanSequence& plan,
                     double inflation);

/// Samples from one expert episode. When `states` is non-null it receives the
/// world state each sample was taken from (same order).
std::vector<Sample> generate_episode(const WorldConfig& world, const TaskSettings& settings,
                                     const DatagenConfig& cfg, TaskId task, std::uint64_t episode_seed,
                                     int horizon, std::vector<DualArmState>* states = nullptr);

/// Seed of episode `e` of task index `task_index`.
std::uint64_t episode_seed(const DatagenConfig& cfg, std::size_t task_index, std::size_t e);

/// Throws RuntimeFailure when no samples are produced.
Dataset generate_dataset(const WorldConfig& world, const TaskSettings& settings, const DatagenConfig& cfg);

/// Duplicates samples with y_d < d_thresh (factor - 1) extra times and
/// shuffles each phase with `seed`.
Dataset oversample_near_miss(const Dataset& dataset, double d_thresh, int factor, std::uint64_t seed);

void write_dataset(const std::string& path, const Dataset& dataset);
Dataset read_dataset(const std::string& path);

/// Deterministic split by episode seed: roughly `fraction` of episodes go to
/// the held-out side.
std::pair<Dataset, Dataset> split_by_episode(const Dataset& dataset, double fraction, std::uint64_t seed);

}  // namespace cofree
