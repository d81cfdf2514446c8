#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "deskball/planner.hpp"
#include "deskball/world.hpp"

namespace deskball {

inline constexpr int kFeatureSchemaVersion = 1;
inline constexpr int kFeatureCount = 4 + 4 * kPlayerCount;  // 92
inline constexpr int kReceiverClasses = kTeamSize;
inline constexpr std::array<int, 5> kPassNetworkDims{kFeatureCount, 128, 64, 32, kReceiverClasses};

/// Ball (x, y, vx, vy), then own players 1..11 and opposing players 1..11 as
/// (x, y, vx, vy). Positions are scaled by the half-pitch, velocities by the
/// maximum ball speed, and everything is seen from the side attacking +x.
using FeatureVector = std::array<double, kFeatureCount>;

FeatureVector extract_features(const WorldState& state, Side perspective, const Physics& phys = kDefaultPhysics);

struct Sample {
    FeatureVector features{};
    int label = 1;  // receiver uniform number
};

/// Appends labelled rows to a CSV stream: a `#schema_version=N` line, then
/// the `f0..f91,label` header, then one row per sample.
class DatasetWriter {
public:
    explicit DatasetWriter(std::ostream& out);

    /// False once the underlying stream has failed; later calls are no-ops.
    bool write(const Sample& sample);
    bool ok() const { return ok_; }
    std::size_t rows() const { return rows_; }

    static void write_header(std::ostream& out);
    static void write_row(std::ostream& out, const Sample& sample);

private:
    std::ostream* out_;
    bool ok_ = true;
    std::size_t rows_ = 0;
};

/// Records the state seen by the kickable holder together with the chosen receiver.
bool record_sample(const WorldState& state, PlayerId holder, int chosen_receiver, DatasetWriter& sink,
                   const Physics& phys = kDefaultPhysics);

// --- feed-forward network ----------------------------------------------------

enum class Activation : std::uint8_t { relu, softmax };

struct MlpLayer {
    int inputs = 0;
    int outputs = 0;
    std::vector<double> weights;  // row-major [outputs][inputs]
    std::vector<double> bias;
    Activation activation = Activation::relu;
};

struct MlpWeights {
    int schema_version = kFeatureSchemaVersion;
    std::vector<MlpLayer> layers;

    std::vector<int> dims() const;
};

class WeightsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape and activation checks for any network; throws WeightsError.
void validate_network(const MlpWeights& weights);

/// validate_network plus the 92-128-64-32-11 chain and schema version.
void validate_pass_network(const MlpWeights& weights);

MlpWeights parse_weights(const std::string& text);
std::string serialize_weights(const MlpWeights& weights);
MlpWeights load_weights(const std::filesystem::path& path);
void save_weights(const MlpWeights& weights, const std::filesystem::path& path);

/// Pass network with uniform(-scale, scale) weights and zero biases.
MlpWeights random_pass_network(std::uint64_t seed, double scale = 0.2);
MlpWeights zero_pass_network();

std::vector<double> forward(const MlpWeights& weights, std::span<const double> input);

/// Probability per teammate: element i is uniform number i + 1.
std::array<double, kReceiverClasses> mlp_forward(const MlpWeights& weights, const FeatureVector& features);

// --- pass tree -----------------------------------------------------------------

struct PassTreeNode {
    int id = 0;
    std::optional<int> parent;
    int owner = 1;
    WorldState state;
    double incoming_probability = 1.0;
};

struct PassTree {
    std::vector<PassTreeNode> nodes;

    const PassTreeNode* find_owner(int unum) const;
};

struct PassTreeParams {
    double prob_limit = 0.1;
    int max_nodes = 10;
};

/// Grows a tree of likely future ball owners. The root is root_state's ball
/// owner; each expansion offers the two most likely receivers above the
/// limit that own no node yet, and the most likely offer overall becomes the
/// next node. Stops at max_nodes or when no offer is left.
PassTree build_pass_tree(const WorldState& root_state, const MlpWeights& weights, const PassTreeParams& params = {},
                         const PlannerContext& ctx = PlannerContext{});

/// Owner of the parent of my node; empty when I own the root or no node.
std::optional<int> select_passer_v11(const PassTree& tree, int me);

} // namespace deskball
