#include "tlab/solver.hpp"

#include <algorithm>
#include <stdexcept>

namespace tlab {

namespace {

// Counter-based DPLL state. Satisfied clauses keep a count of their true
// literals so assignments undo in O(occurrences).
struct DpllState {
    struct Occurrence {
        std::int32_t clause;
        bool negated;
    };

    std::int32_t n = 0;
    std::vector<std::vector<Occurrence>> occ;
    std::vector<std::int32_t> true_lits;  // per clause
    std::vector<std::int32_t> open_lits;  // per clause: unassigned literals
    std::vector<std::int8_t> value;       // per var: -1 unset, 0, 1
    const Formula* f = nullptr;
    std::int64_t unsatisfied = 0; // clauses with no true literal yet
    std::int64_t nodes = 0;
    std::int64_t node_budget = 0;

    // Applies every counter update even on conflict so undo_to stays an
    // exact inverse.
    bool assign(std::int32_t var, std::int8_t val, std::vector<std::int32_t>& trail,
                std::vector<std::int32_t>& units) {
        value[static_cast<std::size_t>(var)] = val;
        trail.push_back(var);
        bool ok = true;
        for (const auto& o : occ[static_cast<std::size_t>(var)]) {
            std::size_t c = static_cast<std::size_t>(o.clause);
            bool lit_true = o.negated == (val == 0);
            if (lit_true) {
                if (true_lits[c]++ == 0) --unsatisfied;
            } else {
                --open_lits[c];
                if (true_lits[c] == 0) {
                    if (open_lits[c] == 0) ok = false;
                    if (open_lits[c] == 1) units.push_back(o.clause);
                }
            }
        }
        return ok;
    }

    void undo_to(std::size_t mark, std::vector<std::int32_t>& trail) {
        while (trail.size() > mark) {
            std::int32_t var = trail.back();
            trail.pop_back();
            std::int8_t val = value[static_cast<std::size_t>(var)];
            value[static_cast<std::size_t>(var)] = -1;
            for (const auto& o : occ[static_cast<std::size_t>(var)]) {
                std::size_t c = static_cast<std::size_t>(o.clause);
                bool lit_true = o.negated == (val == 0);
                if (lit_true) {
                    if (--true_lits[c] == 0) ++unsatisfied;
                } else {
                    ++open_lits[c];
                }
            }
        }
    }

    // Returns false on conflict. Unit queue may hold stale entries; they
    // are revalidated before use.
    bool propagate(std::vector<std::int32_t>& trail, std::vector<std::int32_t>& units) {
        while (!units.empty()) {
            std::int32_t ci = units.back();
            units.pop_back();
            std::size_t c = static_cast<std::size_t>(ci);
            if (true_lits[c] > 0 || open_lits[c] != 1) continue;
            for (const auto& lit : f->clauses[c]) {
                if (value[static_cast<std::size_t>(lit.var)] == -1) {
                    if (!assign(lit.var, lit.negated ? 0 : 1, trail, units)) return false;
                    break;
                }
            }
        }
        return true;
    }

    bool search(std::vector<std::int32_t>& trail) {
        if (++nodes > node_budget)
            throw std::runtime_error("oracle_sat: node budget exhausted");
        std::vector<std::int32_t> units;
        if (unsatisfied == 0) return true;
        // Branch on the first open literal of some unsatisfied clause.
        std::int32_t branch_var = 0;
        for (std::size_t c = 0; c < f->clauses.size() && branch_var == 0; ++c) {
            if (true_lits[c] > 0) continue;
            for (const auto& lit : f->clauses[c]) {
                if (value[static_cast<std::size_t>(lit.var)] == -1) {
                    branch_var = lit.var;
                    break;
                }
            }
        }
        if (branch_var == 0) return false; // some clause has no open literal
        for (std::int8_t val : {static_cast<std::int8_t>(1), static_cast<std::int8_t>(0)}) {
            std::size_t mark = trail.size();
            units.clear();
            if (assign(branch_var, val, trail, units) && propagate(trail, units) &&
                search(trail))
                return true;
            undo_to(mark, trail);
        }
        return false;
    }
};

} // namespace

bool oracle_sat(const Formula& f, std::int32_t var_cap, std::int64_t node_budget) {
    if (f.n > var_cap)
        throw std::invalid_argument("oracle_sat: variable count exceeds the cap");
    for (const auto& c : f.clauses)
        if (c.empty()) return false;

    DpllState st;
    st.n = f.n;
    st.f = &f;
    st.node_budget = node_budget;
    st.occ.resize(static_cast<std::size_t>(f.n) + 1);
    st.true_lits.assign(f.clauses.size(), 0);
    st.open_lits.assign(f.clauses.size(), 0);
    st.value.assign(static_cast<std::size_t>(f.n) + 1, -1);
    st.unsatisfied = static_cast<std::int64_t>(f.clauses.size());
    for (std::size_t c = 0; c < f.clauses.size(); ++c) {
        for (const auto& lit : f.clauses[c]) {
            st.occ[static_cast<std::size_t>(lit.var)].push_back(
                {static_cast<std::int32_t>(c), lit.negated});
            ++st.open_lits[c];
        }
    }

    std::vector<std::int32_t> trail;
    std::vector<std::int32_t> units;
    for (std::size_t c = 0; c < f.clauses.size(); ++c)
        if (st.open_lits[c] == 1) units.push_back(static_cast<std::int32_t>(c));
    if (!st.propagate(trail, units)) return false;
    return st.search(trail);
}

namespace {

// Tarjan SCC over the implication graph: vertex 2v is "v true", 2v+1 is
// "v false"; clause (l1 or l2) adds edges !l1 -> l2 and !l2 -> l1.
struct Tarjan {
    const std::vector<std::vector<std::int32_t>>& adj;
    std::vector<std::int32_t> index, low, comp;
    std::vector<std::int32_t> stack;
    std::vector<bool> on_stack;
    std::int32_t counter = 0, comps = 0;

    explicit Tarjan(const std::vector<std::vector<std::int32_t>>& a)
        : adj(a),
          index(a.size(), -1),
          low(a.size(), 0),
          comp(a.size(), -1),
          on_stack(a.size(), false) {}

    void run(std::int32_t root) {
        // Iterative DFS; frames hold the next edge offset.
        std::vector<std::pair<std::int32_t, std::size_t>> frames{{root, 0}};
        index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = true;
        while (!frames.empty()) {
            auto& [v, ei] = frames.back();
            std::size_t sv = static_cast<std::size_t>(v);
            if (ei < adj[sv].size()) {
                std::int32_t w = adj[sv][ei++];
                std::size_t sw = static_cast<std::size_t>(w);
                if (index[sw] < 0) {
                    index[sw] = low[sw] = counter++;
                    stack.push_back(w);
                    on_stack[sw] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[sw]) {
                    low[sv] = std::min(low[sv], index[sw]);
                }
                continue;
            }
            if (low[sv] == index[sv]) {
                for (;;) {
                    std::int32_t w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = false;
                    comp[static_cast<std::size_t>(w)] = comps;
                    if (w == v) break;
                }
                ++comps;
            }
            frames.pop_back();
            if (!frames.empty()) {
                std::size_t sp = static_cast<std::size_t>(frames.back().first);
                low[sp] = std::min(low[sp], low[sv]);
            }
        }
    }
};

} // namespace

bool sat2_scc(const Formula& f) {
    auto node = [](const Literal& lit) {
        return 2 * (lit.var - 1) + (lit.negated ? 1 : 0);
    };
    auto negated_node = [](const Literal& lit) {
        return 2 * (lit.var - 1) + (lit.negated ? 0 : 1);
    };
    std::vector<std::vector<std::int32_t>> adj(2 * static_cast<std::size_t>(f.n));
    for (const auto& c : f.clauses) {
        if (c.empty()) return false;
        if (c.size() == 1) {
            adj[static_cast<std::size_t>(negated_node(c[0]))].push_back(node(c[0]));
        } else if (c.size() == 2) {
            adj[static_cast<std::size_t>(negated_node(c[0]))].push_back(node(c[1]));
            adj[static_cast<std::size_t>(negated_node(c[1]))].push_back(node(c[0]));
        } else {
            throw std::invalid_argument("sat2_scc: clause size exceeds 2");
        }
    }
    Tarjan t(adj);
    for (std::int32_t v = 0; v < 2 * f.n; ++v)
        if (t.index[static_cast<std::size_t>(v)] < 0) t.run(v);
    for (std::int32_t v = 0; v < f.n; ++v)
        if (t.comp[static_cast<std::size_t>(2 * v)] == t.comp[static_cast<std::size_t>(2 * v + 1)])
            return false;
    return true;
}

EndpointPrediction endpoint_predictor(const Formula& f) {
    EndpointPrediction out;
    out.zero_satisfies = satisfies(f, std::vector<bool>(static_cast<std::size_t>(f.n), false));
    out.one_satisfies = satisfies(f, std::vector<bool>(static_cast<std::size_t>(f.n), true));
    out.predicted_sat = out.zero_satisfies || out.one_satisfies;
    return out;
}

} // namespace tlab
