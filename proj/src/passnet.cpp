#include "deskball/passnet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

#include "json.hpp"

namespace deskball {

using nlohmann::json;

FeatureVector extract_features(const WorldState& state, Side perspective, const Physics& phys) {
    const bool flip = perspective == Side::right;
    const double sx = 1.0 / phys.half_length;
    const double sy = 1.0 / phys.half_width;
    const double sv = 1.0 / phys.ball_speed_max;
    FeatureVector f{};
    std::size_t i = 0;
    auto put = [&](Vec2 pos, Vec2 vel) {
        if (flip) {
            pos = -pos;
            vel = -vel;
        }
        f[i++] = pos.x * sx;
        f[i++] = pos.y * sy;
        f[i++] = vel.x * sv;
        f[i++] = vel.y * sv;
    };
    put(state.ball.position, state.ball.velocity);
    for (Side side : {perspective, opposite(perspective)}) {
        for (const auto& p : state.team(side)) {
            if (p.active) {
                put(p.position, p.velocity);
            } else {
                i += 4;
            }
        }
    }
    return f;
}

DatasetWriter::DatasetWriter(std::ostream& out) : out_(&out) {
    write_header(out);
    ok_ = static_cast<bool>(out);
}

void DatasetWriter::write_header(std::ostream& out) {
    out << "#schema_version=" << kFeatureSchemaVersion << '\n';
    for (int i = 0; i < kFeatureCount; ++i) out << 'f' << i << ',';
    out << "label\n";
}

void DatasetWriter::write_row(std::ostream& out, const Sample& sample) {
    char buf[32];
    for (double v : sample.features) {
        std::snprintf(buf, sizeof buf, "%.9g,", v);
        out << buf;
    }
    out << sample.label << '\n';
}

bool DatasetWriter::write(const Sample& sample) {
    if (!ok_) return false;
    write_row(*out_, sample);
    ok_ = static_cast<bool>(*out_);
    if (ok_) ++rows_;
    return ok_;
}

bool record_sample(const WorldState& state, PlayerId holder, int chosen_receiver, DatasetWriter& sink,
                   const Physics& phys) {
    if (chosen_receiver < 1 || chosen_receiver > kTeamSize) {
        throw std::invalid_argument("record_sample: receiver must be a uniform number in 1..11");
    }
    return sink.write(Sample{extract_features(state, holder.side, phys), chosen_receiver});
}

// --- network -------------------------------------------------------------------

std::vector<int> MlpWeights::dims() const {
    std::vector<int> d;
    if (layers.empty()) return d;
    d.push_back(layers.front().inputs);
    for (const auto& l : layers) d.push_back(l.outputs);
    return d;
}

void validate_network(const MlpWeights& weights) {
    if (weights.layers.empty()) throw WeightsError("network has no layers");
    for (std::size_t i = 0; i < weights.layers.size(); ++i) {
        const auto& l = weights.layers[i];
        const std::string where = "layer " + std::to_string(i);
        if (l.inputs <= 0 || l.outputs <= 0) throw WeightsError(where + ": non-positive dimensions");
        if (l.weights.size() != static_cast<std::size_t>(l.inputs) * static_cast<std::size_t>(l.outputs)) {
            throw WeightsError(where + ": weight matrix does not match " + std::to_string(l.outputs) + "x" +
                               std::to_string(l.inputs));
        }
        if (l.bias.size() != static_cast<std::size_t>(l.outputs)) throw WeightsError(where + ": bias length mismatch");
        if (i > 0 && l.inputs != weights.layers[i - 1].outputs) {
            throw WeightsError(where + ": input dimension " + std::to_string(l.inputs) +
                               " does not match previous output " + std::to_string(weights.layers[i - 1].outputs));
        }
        const bool last = i + 1 == weights.layers.size();
        if (last && l.activation != Activation::softmax) throw WeightsError(where + ": final layer must be softmax");
        if (!last && l.activation != Activation::relu) throw WeightsError(where + ": hidden layers must be relu");
        for (double v : l.weights) {
            if (!std::isfinite(v)) throw WeightsError(where + ": non-finite weight");
        }
        for (double v : l.bias) {
            if (!std::isfinite(v)) throw WeightsError(where + ": non-finite bias");
        }
    }
}

void validate_pass_network(const MlpWeights& weights) {
    validate_network(weights);
    if (weights.schema_version != kFeatureSchemaVersion) {
        throw WeightsError("schema_version " + std::to_string(weights.schema_version) + " but engine expects " +
                           std::to_string(kFeatureSchemaVersion));
    }
    auto dims = weights.dims();
    if (!std::equal(dims.begin(), dims.end(), kPassNetworkDims.begin(), kPassNetworkDims.end())) {
        std::string got;
        for (std::size_t i = 0; i < dims.size(); ++i) got += (i ? "," : "") + std::to_string(dims[i]);
        throw WeightsError("dimension mismatch: expected 92,128,64,32,11 but got " + got);
    }
}

namespace {

Activation parse_activation(const std::string& name) {
    if (name == "relu") return Activation::relu;
    if (name == "softmax") return Activation::softmax;
    throw WeightsError("unknown activation '" + name + "'");
}

const char* activation_name(Activation a) { return a == Activation::relu ? "relu" : "softmax"; }

} // namespace

MlpWeights parse_weights(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw WeightsError(std::string("malformed weights file: ") + e.what());
    }
    try {
        MlpWeights w;
        w.schema_version = doc.at("schema_version").get<int>();
        auto declared = doc.at("dims").get<std::vector<int>>();
        const auto& layers = doc.at("layers");
        if (!layers.is_array()) throw WeightsError("'layers' must be an array");
        if (declared.size() != layers.size() + 1) {
            throw WeightsError("dims lists " + std::to_string(declared.size()) + " sizes for " +
                               std::to_string(layers.size()) + " layers");
        }
        for (std::size_t i = 0; i < layers.size(); ++i) {
            const auto& jl = layers[i];
            MlpLayer l;
            l.inputs = declared[i];
            l.outputs = declared[i + 1];
            const auto& rows = jl.at("w");
            if (!rows.is_array() || rows.size() != static_cast<std::size_t>(l.outputs)) {
                throw WeightsError("layer " + std::to_string(i) + ": expected " + std::to_string(l.outputs) +
                                   " weight rows");
            }
            l.weights.reserve(static_cast<std::size_t>(l.inputs) * static_cast<std::size_t>(l.outputs));
            for (const auto& row : rows) {
                if (!row.is_array() || row.size() != static_cast<std::size_t>(l.inputs)) {
                    throw WeightsError("layer " + std::to_string(i) + ": expected rows of length " +
                                       std::to_string(l.inputs));
                }
                for (const auto& v : row) l.weights.push_back(v.get<double>());
            }
            l.bias = jl.at("b").get<std::vector<double>>();
            l.activation = parse_activation(jl.at("act").get<std::string>());
            w.layers.push_back(std::move(l));
        }
        validate_network(w);
        return w;
    } catch (const json::exception& e) {
        throw WeightsError(std::string("malformed weights file: ") + e.what());
    }
}

std::string serialize_weights(const MlpWeights& weights) {
    json doc;
    doc["schema_version"] = weights.schema_version;
    doc["dims"] = weights.dims();
    json layers = json::array();
    for (const auto& l : weights.layers) {
        json rows = json::array();
        for (int r = 0; r < l.outputs; ++r) {
            auto begin = l.weights.begin() + static_cast<std::ptrdiff_t>(r) * l.inputs;
            rows.push_back(std::vector<double>(begin, begin + l.inputs));
        }
        layers.push_back({{"w", rows}, {"b", l.bias}, {"act", activation_name(l.activation)}});
    }
    doc["layers"] = layers;
    return doc.dump();
}

MlpWeights load_weights(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw WeightsError("cannot open weights file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    MlpWeights w = parse_weights(buf.str());
    validate_pass_network(w);
    return w;
}

void save_weights(const MlpWeights& weights, const std::filesystem::path& path) {
    std::ofstream out(path);
    out << serialize_weights(weights) << '\n';
    if (!out) throw WeightsError("cannot write weights file " + path.string());
}

MlpWeights zero_pass_network() {
    MlpWeights w;
    for (std::size_t i = 0; i + 1 < kPassNetworkDims.size(); ++i) {
        MlpLayer l;
        l.inputs = kPassNetworkDims[i];
        l.outputs = kPassNetworkDims[i + 1];
        l.weights.assign(static_cast<std::size_t>(l.inputs) * static_cast<std::size_t>(l.outputs), 0.0);
        l.bias.assign(static_cast<std::size_t>(l.outputs), 0.0);
        l.activation = i + 2 == kPassNetworkDims.size() ? Activation::softmax : Activation::relu;
        w.layers.push_back(std::move(l));
    }
    return w;
}

MlpWeights random_pass_network(std::uint64_t seed, double scale) {
    MlpWeights w = zero_pass_network();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-scale, scale);
    for (auto& l : w.layers) {
        for (auto& v : l.weights) v = dist(rng);
    }
    return w;
}

std::vector<double> forward(const MlpWeights& weights, std::span<const double> input) {
    std::vector<double> x(input.begin(), input.end());
    std::vector<double> y;
    for (const auto& l : weights.layers) {
        if (x.size() != static_cast<std::size_t>(l.inputs)) {
            throw std::invalid_argument("forward: input length " + std::to_string(x.size()) + " but layer expects " +
                                        std::to_string(l.inputs));
        }
        y.assign(l.bias.begin(), l.bias.end());
        for (int r = 0; r < l.outputs; ++r) {
            const double* row = l.weights.data() + static_cast<std::ptrdiff_t>(r) * l.inputs;
            double acc = y[static_cast<std::size_t>(r)];
            for (int c = 0; c < l.inputs; ++c) acc += row[c] * x[static_cast<std::size_t>(c)];
            y[static_cast<std::size_t>(r)] = acc;
        }
        if (l.activation == Activation::relu) {
            for (auto& v : y) v = std::max(0.0, v);
        } else {
            double peak = *std::max_element(y.begin(), y.end());
            double total = 0.0;
            for (auto& v : y) {
                v = std::exp(v - peak);
                total += v;
            }
            for (auto& v : y) v /= total;
        }
        x.swap(y);
    }
    return x;
}

std::array<double, kReceiverClasses> mlp_forward(const MlpWeights& weights, const FeatureVector& features) {
    auto out = forward(weights, features);
    if (out.size() != static_cast<std::size_t>(kReceiverClasses)) {
        throw std::invalid_argument("mlp_forward: network does not produce 11 outputs");
    }
    std::array<double, kReceiverClasses> probs{};
    std::copy(out.begin(), out.end(), probs.begin());
    return probs;
}

// --- pass tree -------------------------------------------------------------------

const PassTreeNode* PassTree::find_owner(int unum) const {
    for (const auto& n : nodes) {
        if (n.owner == unum) return &n;
    }
    return nullptr;
}

namespace {

struct Offer {
    double probability;
    int receiver;
    int parent;
};

struct OfferOrder {
    bool operator()(const Offer& a, const Offer& b) const {
        if (a.probability != b.probability) return a.probability < b.probability;
        if (a.receiver != b.receiver) return a.receiver > b.receiver;
        return a.parent > b.parent;
    }
};

} // namespace

PassTree build_pass_tree(const WorldState& root_state, const MlpWeights& weights, const PassTreeParams& params,
                         const PlannerContext& ctx) {
    if (!root_state.ball_owner) throw std::invalid_argument("build_pass_tree: root state has no ball owner");
    const Side side = root_state.ball_owner->side;
    PassTree tree;
    tree.nodes.push_back(PassTreeNode{0, std::nullopt, root_state.ball_owner->unum, root_state, 1.0});
    std::array<bool, kTeamSize + 1> owned{};
    owned[static_cast<std::size_t>(root_state.ball_owner->unum)] = true;

    std::priority_queue<Offer, std::vector<Offer>, OfferOrder> pass_list;
    auto offer_from = [&](const PassTreeNode& node) {
        auto probs = mlp_forward(weights, extract_features(node.state, side, ctx.physics));
        std::vector<Offer> candidates;
        for (int r = 1; r <= kTeamSize; ++r) {
            double p = probs[static_cast<std::size_t>(r - 1)];
            if (owned[static_cast<std::size_t>(r)] || !(p > params.prob_limit)) continue;
            if (!node.state.player(side, r).active) continue;
            candidates.push_back(Offer{p, r, node.id});
        }
        std::sort(candidates.begin(), candidates.end(), [](const Offer& a, const Offer& b) { return OfferOrder{}(b, a); });
        for (std::size_t i = 0; i < candidates.size() && i < 2; ++i) pass_list.push(candidates[i]);
    };

    offer_from(tree.nodes.front());
    while (static_cast<int>(tree.nodes.size()) < params.max_nodes && !pass_list.empty()) {
        Offer offer = pass_list.top();
        pass_list.pop();
        if (owned[static_cast<std::size_t>(offer.receiver)]) continue;
        const WorldState& from = tree.nodes[static_cast<std::size_t>(offer.parent)].state;
        const Vec2 target = from.player(side, offer.receiver).position;
        const int duration = std::max(1, static_cast<int>(std::ceil(from.ball.position.dist(target) / ctx.planner.pass_speed)));
        ActionDescriptor pass{ActionKind::direct_pass, target, offer.receiver, duration};
        PassTreeNode node{static_cast<int>(tree.nodes.size()), offer.parent, offer.receiver, predict(from, pass, ctx),
                          offer.probability};
        owned[static_cast<std::size_t>(offer.receiver)] = true;
        tree.nodes.push_back(std::move(node));
        offer_from(tree.nodes.back());
    }
    return tree;
}

std::optional<int> select_passer_v11(const PassTree& tree, int me) {
    const PassTreeNode* node = tree.find_owner(me);
    if (!node || !node->parent) return std::nullopt;
    return tree.nodes[static_cast<std::size_t>(*node->parent)].owner;
}

} // namespace deskball
