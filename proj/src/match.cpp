#include "deskball/match.hpp"

#include <ostream>
#include <random>
#include <stdexcept>

namespace deskball {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    auto splitmix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    };
    return splitmix(splitmix(splitmix(a) ^ b) ^ c);
}

WorldState match_start(std::uint64_t seed, const Physics& phys) {
    WorldState s = initial_state(phys);
    const Side kicking = (seed & 1u) ? Side::right : Side::left;
    kickoff_reset(s, kicking, phys);
    std::mt19937_64 rng(seed);
    auto jitter = [&rng] {
        // 53-bit fraction so the stream does not depend on the library's distributions.
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return (u * 2.0 - 1.0) * 1.5;
    };
    for (auto& p : s.players) {
        if (p.unum == 1 || (p.unum == 10 && p.side == kicking)) continue;
        Vec2 offset{jitter(), jitter()};
        p.position += offset;
    }
    s.ball_owner = kickable_owner(s, phys);
    return s;
}

MatchResult run_match(const AgentConfig& left, const AgentConfig& right, std::uint64_t seed, int max_cycles,
                      const MatchOptions& options) {
    if (max_cycles <= 0) throw std::invalid_argument("max_cycles must be positive");
    TeamAgent l(left, Side::left);
    TeamAgent r(right, Side::right);
    return run_match(l, r, seed, max_cycles, options);
}

MatchResult run_match(TeamAgent& left, TeamAgent& right, std::uint64_t seed, int max_cycles,
                      const MatchOptions& options) {
    if (max_cycles <= 0) throw std::invalid_argument("max_cycles must be positive");
    if (left.side() != Side::left || right.side() != Side::right) {
        throw std::invalid_argument("run_match: agents must be built for their sides");
    }
    const Physics& phys = left.config().physics;
    if (!(phys == right.config().physics)) throw std::invalid_argument("run_match: both teams must share physics");

    left.reset();
    right.reset();
    WorldState state = match_start(seed, phys);
    if (options.mirror) state = mirrored(state);

    ChainObserver observer = options.on_chain;
    if (options.tree_log) {
        observer = [&options](const WorldState& s, PlayerId holder, const ChainTree& tree) {
            *options.tree_log << "# cycle " << s.cycle << ' ' << to_string(holder.side) << ' ' << holder.unum << '\n';
            write_chain_tree(*options.tree_log, tree);
            if (options.on_chain) options.on_chain(s, holder, tree);
        };
    }

    MatchResult result;
    result.seed = seed;
    std::uint64_t trace = state_hash(state);
    TeamDecision left_decision;
    TeamDecision right_decision;
    for (int c = 0; c < max_cycles; ++c) {
        TeamCommands lc = left.decide(state, &left_decision, observer);
        TeamCommands rc = right.decide(state, &right_decision, observer);
        Commands all{};
        std::copy(lc.begin(), lc.end(), all.begin());
        std::copy(rc.begin(), rc.end(), all.begin() + kTeamSize);
        if (options.on_cycle) options.on_cycle(state, all, left_decision, right_decision);
        state = step(state, all, mix_seed(seed, static_cast<std::uint64_t>(c)), phys);
        std::uint64_t h = state_hash(state);
        trace = mix_seed(trace, h);
        if (options.state_log) {
            *options.state_log << state.cycle << ' ' << state.ball.position.x << ' ' << state.ball.position.y << ' '
                               << state.score_left << ' ' << state.score_right << ' ' << std::hex << h << std::dec
                               << '\n';
        }
    }
    result.goals_left = state.score_left;
    result.goals_right = state.score_right;
    result.cycles_played = max_cycles;
    result.trace_hash = trace;
    return result;
}

std::optional<double> win_rate(std::span<const MatchResult> results, Side side) {
    if (results.empty()) throw std::invalid_argument("win_rate: no results");
    int wins = 0;
    int draws = 0;
    for (const auto& r : results) {
        int mine = side == Side::left ? r.goals_left : r.goals_right;
        int theirs = side == Side::left ? r.goals_right : r.goals_left;
        if (mine == theirs) ++draws;
        else if (mine > theirs) ++wins;
    }
    const int decided = static_cast<int>(results.size()) - draws;
    if (decided == 0) return std::nullopt;
    return static_cast<double>(wins) / decided;
}

} // namespace deskball
