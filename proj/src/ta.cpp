// ============================================================================
// ta.cpp — Büchi timed automata: JSON format, universal TA, lift generator
// ============================================================================

#include "mitl/ta.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mitl {

// ============================================================================
// BuchiTA basics
// ============================================================================

namespace {

int index_of(const std::vector<std::string>& v, const std::string& s, const char* what) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it == v.end()) throw TaError(std::string("unknown ") + what + ": " + s);
    return static_cast<int>(it - v.begin());
}

}  // namespace

int BuchiTA::letter_index(const std::string& s) const { return index_of(alphabet, s, "letter"); }
int BuchiTA::location_index(const std::string& s) const {
    return index_of(locations, s, "location");
}
int BuchiTA::clock_index(const std::string& s) const { return index_of(clocks, s, "clock"); }

std::vector<const TaEdge*> BuchiTA::edges_from(int loc, int letter) const {
    std::vector<const TaEdge*> out;
    for (const TaEdge& e : edges)
        if (e.from == loc && e.letter == letter) out.push_back(&e);
    return out;
}

bool ta_guard_holds(const std::vector<TaConstraint>& guard, const std::vector<TimePoint>& vals) {
    for (const TaConstraint& c : guard) {
        TimePoint v = vals[c.clock];
        TimePoint b(static_cast<long long>(c.bound));
        bool ok = false;
        switch (c.op) {
            case ClockConstraint::LT: ok = v < b; break;
            case ClockConstraint::LE: ok = v <= b; break;
            case ClockConstraint::GT: ok = v > b; break;
            case ClockConstraint::GE: ok = v >= b; break;
        }
        if (!ok) return false;
    }
    return true;
}

// ============================================================================
// JSON format
// ============================================================================

namespace {

using nlohmann::json;

void parse_guard_atom(const std::string& atom, const BuchiTA& b, std::vector<TaConstraint>& out) {
    std::size_t p = atom.find_first_of("<>=");
    if (p == std::string::npos || p == 0) throw TaError("malformed guard atom: " + atom);
    std::string clock = atom.substr(0, p);
    while (!clock.empty() && clock.back() == ' ') clock.pop_back();
    int ci = b.clock_index(clock);

    std::string rest = atom.substr(p);
    ClockConstraint::Op op;
    std::size_t skip;
    bool equality = false;
    if (rest.rfind("<=", 0) == 0) {
        op = ClockConstraint::LE;
        skip = 2;
    } else if (rest.rfind(">=", 0) == 0) {
        op = ClockConstraint::GE;
        skip = 2;
    } else if (rest[0] == '<') {
        op = ClockConstraint::LT;
        skip = 1;
    } else if (rest[0] == '>') {
        op = ClockConstraint::GT;
        skip = 1;
    } else if (rest[0] == '=') {
        equality = true;
        op = ClockConstraint::LE;
        skip = 1;
    } else {
        throw TaError("malformed guard atom: " + atom);
    }
    std::string num = rest.substr(skip);
    std::size_t idx = 0;
    while (idx < num.size() && num[idx] == ' ') ++idx;
    num = num.substr(idx);
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
        throw TaError("malformed guard bound: " + atom);
    std::uint64_t bound = std::stoull(num);
    if (equality) {
        out.push_back({ci, ClockConstraint::GE, bound});
        out.push_back({ci, ClockConstraint::LE, bound});
    } else {
        out.push_back({ci, op, bound});
    }
}

}  // namespace

BuchiTA parse_ta(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw TaError(std::string("invalid TA file: ") + e.what());
    }
    BuchiTA b;
    try {
        for (const auto& s : j.at("alphabet")) b.alphabet.push_back(s.get<std::string>());
        std::sort(b.alphabet.begin(), b.alphabet.end());
        b.alphabet.erase(std::unique(b.alphabet.begin(), b.alphabet.end()), b.alphabet.end());
        if (b.alphabet.empty()) throw TaError("TA alphabet is empty");

        if (j.contains("clocks"))
            for (const auto& s : j.at("clocks")) b.clocks.push_back(s.get<std::string>());

        for (const auto& l : j.at("locations")) {
            b.locations.push_back(l.at("name").get<std::string>());
            b.accepting.push_back(l.value("accepting", false));
        }
        if (b.locations.empty()) throw TaError("TA has no locations");
        {
            std::set<std::string> names(b.locations.begin(), b.locations.end());
            if (names.size() != b.locations.size())
                throw TaError("duplicate location names");
        }
        b.initial = b.location_index(j.at("initial").get<std::string>());

        for (const auto& e : j.value("edges", json::array())) {
            TaEdge edge;
            edge.from = b.location_index(e.at("from").get<std::string>());
            edge.to = b.location_index(e.at("to").get<std::string>());
            edge.letter = b.letter_index(e.at("letter").get<std::string>());
            for (const auto& g : e.value("guard", json::array()))
                parse_guard_atom(g.get<std::string>(), b, edge.guard);
            for (const auto& r : e.value("reset", json::array()))
                edge.resets.push_back(b.clock_index(r.get<std::string>()));
            std::sort(edge.resets.begin(), edge.resets.end());
            edge.resets.erase(std::unique(edge.resets.begin(), edge.resets.end()),
                              edge.resets.end());
            b.edges.push_back(std::move(edge));
        }
    } catch (const json::exception& e) {
        throw TaError(std::string("invalid TA file: ") + e.what());
    }

    for (const TaEdge& e : b.edges)
        for (const TaConstraint& c : e.guard) b.cmax = std::max(b.cmax, c.bound);
    return b;
}

BuchiTA load_ta_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TaError("cannot open TA file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_ta(ss.str());
}

std::string ta_to_json(const BuchiTA& b) {
    json j;
    j["alphabet"] = b.alphabet;
    j["clocks"] = b.clocks;
    j["locations"] = json::array();
    for (std::size_t i = 0; i < b.locations.size(); ++i)
        j["locations"].push_back({{"name", b.locations[i]}, {"accepting", (bool)b.accepting[i]}});
    j["initial"] = b.locations[b.initial];
    j["edges"] = json::array();
    static const char* ops[] = {"<", "<=", ">", ">="};
    for (const TaEdge& e : b.edges) {
        json je;
        je["from"] = b.locations[e.from];
        je["to"] = b.locations[e.to];
        je["letter"] = b.alphabet[e.letter];
        je["guard"] = json::array();
        for (const TaConstraint& c : e.guard)
            je["guard"].push_back(b.clocks[c.clock] + ops[c.op] + std::to_string(c.bound));
        je["reset"] = json::array();
        for (int r : e.resets) je["reset"].push_back(b.clocks[r]);
        j["edges"].push_back(std::move(je));
    }
    return j.dump(2);
}

// ============================================================================
// Universal TA
// ============================================================================

BuchiTA universal_ta(const std::vector<std::string>& alphabet) {
    if (alphabet.empty()) throw TaError("universal TA needs a nonempty alphabet");
    BuchiTA b;
    b.alphabet = alphabet;
    std::sort(b.alphabet.begin(), b.alphabet.end());
    b.alphabet.erase(std::unique(b.alphabet.begin(), b.alphabet.end()), b.alphabet.end());
    b.locations = {"u"};
    b.accepting = {true};
    b.initial = 0;
    for (std::size_t s = 0; s < b.alphabet.size(); ++s)
        b.edges.push_back({0, 0, static_cast<int>(s), {}, {}});
    return b;
}

// ============================================================================
// Lift model
// ============================================================================
//
// State (n, dir, go, open): cabin floor, committed direction (u/d/h), the
// set of floors still to serve, doors open or closed.  Timing: moving one
// floor takes 1 unit (p_i at x=1 when passing), serving takes the move plus
// the door opening (o_i at x=2), and an open cabin stays open one unit
// before the doors finish closing (c_i at x=2).  The idle cabin parks open
// at the middle floor.  Every location is accepting.  k = 2 carries one
// figure-faithful exception noted below.

namespace {

struct LiftState {
    int n;
    char dir;  // 'u', 'd', 'h'
    unsigned go;
    bool open;

    bool operator<(const LiftState& o) const {
        return std::tie(n, dir, go, open) < std::tie(o.n, o.dir, o.go, o.open);
    }
    bool operator==(const LiftState& o) const {
        return n == o.n && dir == o.dir && go == o.go && open == o.open;
    }
};

std::string lift_name(const LiftState& s, int k) {
    std::string g;
    for (int i = 0; i < k; ++i)
        if (s.go & (1u << i)) {
            if (!g.empty()) g += ",";
            g += std::to_string(i);
        }
    std::string d(1, s.dir);
    return "(" + std::to_string(s.n) + "," + d + ",{" + g + "}," + (s.open ? "o" : "c") + ")";
}

bool go_beyond(unsigned go, int n, char dir, int k) {
    for (int i = 0; i < k; ++i) {
        if (!(go & (1u << i))) continue;
        if (dir == 'u' && i > n) return true;
        if (dir == 'd' && i < n) return true;
    }
    return false;
}

}  // namespace

BuchiTA lift_model(int floors) {
    if (floors < 2) throw TaError("lift model needs at least 2 floors");
    const int k = floors;
    const int mid = (k - 1) / 2;

    BuchiTA b;
    for (int i = 0; i < k; ++i) {
        b.alphabet.push_back("l" + std::to_string(i));
        b.alphabet.push_back("b" + std::to_string(i));
        b.alphabet.push_back("o" + std::to_string(i));
        b.alphabet.push_back("c" + std::to_string(i));
        b.alphabet.push_back("p" + std::to_string(i));
    }
    std::sort(b.alphabet.begin(), b.alphabet.end());
    b.clocks = {"x"};
    b.cmax = 2;

    LiftState init{mid, 'h', 0, true};
    std::map<LiftState, int> ids;
    std::deque<LiftState> queue;
    auto intern = [&](const LiftState& s) {
        auto [it, fresh] = ids.emplace(s, static_cast<int>(ids.size()));
        if (fresh) {
            b.locations.push_back(lift_name(s, k));
            b.accepting.push_back(true);
            queue.push_back(s);
        }
        return it->second;
    };
    intern(init);
    b.initial = 0;

    const std::vector<TaConstraint> at1{{0, ClockConstraint::GE, 1}, {0, ClockConstraint::LE, 1}};
    const std::vector<TaConstraint> at2{{0, ClockConstraint::GE, 2}, {0, ClockConstraint::LE, 2}};
    auto add_edge = [&](int from, const LiftState& to, const std::string& letter,
                        const std::vector<TaConstraint>& guard, bool reset) {
        b.edges.push_back({from, intern(to), b.letter_index(letter), guard,
                           reset ? std::vector<int>{0} : std::vector<int>{}});
    };

    while (!queue.empty()) {
        LiftState s = queue.front();
        queue.pop_front();
        int from = ids.at(s);

        if (s.open) {
            // calls: floors not yet requested and not the current one;
            // the parked cabin restarts its clock on the first call
            for (int i = 0; i < k; ++i) {
                if (i == s.n || (s.go & (1u << i))) continue;
                char dir = s.dir == 'h' ? (i > s.n ? 'u' : 'd') : s.dir;
                LiftState t{s.n, dir, s.go | (1u << i), true};
                add_edge(from, t, "l" + std::to_string(i), {}, s.dir == 'h');
                add_edge(from, t, "b" + std::to_string(i), {}, s.dir == 'h');
            }
            // doors close when there is anywhere to go
            if (s.go != 0 || s.n != mid)
                add_edge(from, {s.n, s.dir, s.go, false}, "c" + std::to_string(s.n), at2, true);
            continue;
        }

        // closed cabin: calls keep the committed direction; the cabin
        // button cannot re-select the floor just left
        for (int i = 0; i < k; ++i) {
            if (s.go & (1u << i)) continue;
            LiftState t{s.n, s.dir, s.go | (1u << i), false};
            add_edge(from, t, "l" + std::to_string(i), {}, false);
            if (i != s.n) add_edge(from, t, "b" + std::to_string(i), {}, false);
        }

        // movement toward the next floor in the committed direction
        int next = s.n + (s.dir == 'u' ? 1 : -1);
        if (next < 0 || next >= k) continue;
        bool serve = (s.go & (1u << next)) || (s.go == 0 && next == mid);
        if (serve) {
            unsigned rest = s.go & ~(1u << next);
            char dir;
            if (rest != 0)
                dir = go_beyond(rest, next, s.dir, k) ? s.dir : (s.dir == 'u' ? 'd' : 'u');
            else
                dir = next == mid ? 'h' : (mid > next ? 'u' : 'd');
            // figure fidelity for k = 2: the doubly-requested descent opens
            // at x = 1 rather than x = 2
            bool quirk = (k == 2 && s.n == 1 && s.dir == 'd' && s.go == 3u && !s.open);
            add_edge(from, {next, dir, rest, true}, "o" + std::to_string(next),
                     quirk ? at1 : at2, true);
        } else {
            char dir = go_beyond(s.go != 0 ? s.go : (1u << mid), next, s.dir, k)
                           ? s.dir
                           : (s.dir == 'u' ? 'd' : 'u');
            add_edge(from, {next, dir, s.go, false}, "p" + std::to_string(next), at1, true);
        }
    }
    return b;
}

}  // namespace mitl
