#pragma once

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/resource.h>

namespace mitl {

// ============================================================================
// Resource limits and exploration statistics
// ============================================================================

struct ResourceLimitError : std::runtime_error {
    enum Kind { Timeout, Memory };
    ResourceLimitError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

struct ExploreLimits {
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::optional<std::size_t> max_rss_kb;

    void check() const {
        if (deadline && std::chrono::steady_clock::now() > *deadline)
            throw ResourceLimitError(ResourceLimitError::Timeout, "time limit exceeded");
        if (max_rss_kb) {
            struct rusage ru;
            getrusage(RUSAGE_SELF, &ru);
            if (static_cast<std::size_t>(ru.ru_maxrss) > *max_rss_kb)
                throw ResourceLimitError(ResourceLimitError::Memory, "memory limit exceeded");
        }
    }
};

struct ExploreStats {
    std::size_t visited = 0;         // states inserted during the first reachability pass
    std::size_t peak_frontier = 0;
    std::size_t gfp_iterations = 0;
};

// ============================================================================
// Symbolic exploration, generic over the state abstraction
// ============================================================================
//
// A Space provides:
//   using State;
//   State initial();
//   std::vector<State> post(const State&);
//   bool accepting(const State&) const;
//   std::string key(const State&) const;        // canonical identity
//   std::string disc_key(const State&) const;   // subsumption bucket
//   bool subsumes(const State&, const State&) const;
//   bool use_subsumption() const;

template <class Space>
class Explorer {
public:
    using State = typename Space::State;

    Explorer(Space& space, const ExploreLimits& limits) : space_(space), limits_(limits) {}

    // Least fixpoint of reachability including the seeds (Post*).
    std::vector<State> post_star(const std::vector<State>& seeds, ExploreStats* stats = nullptr) {
        return explore(seeds, stats);
    }

    // States reachable in at least one step (Post+).
    std::vector<State> post_plus(const std::vector<State>& seeds, ExploreStats* stats = nullptr) {
        std::vector<State> starts;
        for (const State& s : seeds) {
            limits_.check();
            for (State& t : space_.post(s)) starts.push_back(std::move(t));
        }
        return explore(starts, stats);
    }

private:
    // BFS with canonical deduplication; when the space supports subsumption,
    // a new state covered by a visited one is pruned.
    std::vector<State> explore(const std::vector<State>& seeds, ExploreStats* stats) {
        std::map<std::string, std::vector<State>> buckets;  // disc_key -> states
        std::map<std::string, bool> seen;                   // full key -> present
        std::deque<State> frontier;
        std::size_t inserted = 0;

        auto try_insert = [&](State&& s) {
            std::string k = space_.key(s);
            if (seen.count(k)) return;
            if (space_.use_subsumption()) {
                auto& bucket = buckets[space_.disc_key(s)];
                for (const State& old : bucket)
                    if (space_.subsumes(old, s)) return;
                bucket.push_back(s);
            } else {
                buckets[k].push_back(s);
            }
            seen.emplace(std::move(k), true);
            ++inserted;
            frontier.push_back(std::move(s));
        };

        for (State s : seeds) try_insert(std::move(s));

        std::size_t peak = frontier.size();
        std::size_t ticks = 0;
        while (!frontier.empty()) {
            if (++ticks % 64 == 0) limits_.check();
            State s = std::move(frontier.front());
            frontier.pop_front();
            for (State& t : space_.post(s)) try_insert(std::move(t));
            peak = std::max(peak, frontier.size());
        }

        std::vector<State> out;
        for (auto& [dk, bucket] : buckets)
            for (State& s : bucket) out.push_back(std::move(s));
        if (stats) {
            stats->visited += inserted;
            stats->peak_frontier = std::max(stats->peak_frontier, peak);
        }
        return out;
    }

    Space& space_;
    const ExploreLimits& limits_;
};

// Algorithm: D <- Post*(init) ∩ F; iterate D <- Post+(D) ∩ F until stable;
// the language is empty iff D ends empty.
template <class Space>
bool gfp_empty(Space& space, const ExploreLimits& limits, ExploreStats* stats = nullptr) {
    Explorer<Space> ex(space, limits);
    using State = typename Space::State;

    // With subsumption active the iterate is pruned to its maximal elements,
    // which canonically represent its downward closure; the closures shrink
    // monotonically, so key-set comparison terminates.
    auto accepting_canonical = [&](std::vector<State> v) {
        std::vector<State> acc;
        for (auto& s : v)
            if (space.accepting(s)) acc.push_back(std::move(s));
        if (!space.use_subsumption()) return acc;
        std::vector<State> out;
        for (std::size_t i = 0; i < acc.size(); ++i) {
            bool covered = false;
            for (std::size_t j = 0; j < acc.size() && !covered; ++j) {
                if (i == j) continue;
                if (space.disc_key(acc[i]) != space.disc_key(acc[j])) continue;
                if (space.subsumes(acc[j], acc[i]) && !space.subsumes(acc[i], acc[j]))
                    covered = true;
            }
            if (!covered) out.push_back(std::move(acc[i]));
        }
        return out;
    };
    auto keys_of = [&](const std::vector<State>& v) {
        std::vector<std::string> ks;
        for (const auto& s : v) ks.push_back(space.key(s));
        std::sort(ks.begin(), ks.end());
        return ks;
    };

    std::vector<State> d = accepting_canonical(ex.post_star({space.initial()}, stats));
    std::vector<std::string> dk = keys_of(d);
    std::vector<std::vector<std::string>> history{dk};
    while (!d.empty()) {
        if (stats) ++stats->gfp_iterations;
        std::vector<State> d2 = accepting_canonical(ex.post_plus(d));
        std::vector<std::string> d2k = keys_of(d2);
        if (d2k == dk) break;
        if (std::find(history.begin(), history.end(), d2k) != history.end())
            throw std::logic_error("gfp iteration cycled");
        history.push_back(d2k);
        d = std::move(d2);
        dk = std::move(d2k);
    }
    return d.empty();
}

}  // namespace mitl
