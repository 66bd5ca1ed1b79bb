#include "tlab/solver.hpp"

#include <sstream>
#include <stdexcept>

namespace tlab {

namespace {

struct Occurrence {
    std::int32_t clause;
    bool negated;
};

// Shared propagation engine; the trace is optional because the stage
// snapshots cost 2k words per assignment.
template <bool kRecord>
void run_pur(const Formula& f, Rng& rng, PurResult& result, PurTrace* trace,
             std::int32_t stage_limit) {
    const std::int32_t n = f.n;
    const std::int32_t m = static_cast<std::int32_t>(f.clauses.size());
    // Cell slot 1 is read by the accept test even when no clause exists.
    const std::int32_t k = std::max(f.max_clause_size(), 1);

    std::vector<std::int32_t> size(static_cast<std::size_t>(m));
    std::vector<std::int32_t> positive(static_cast<std::size_t>(m));
    std::vector<bool> alive(static_cast<std::size_t>(m), true);
    std::vector<bool> assigned(static_cast<std::size_t>(n) + 1, false);
    std::vector<std::uint32_t> neg_units(static_cast<std::size_t>(n) + 1, 0);
    std::vector<std::vector<Occurrence>> occ(static_cast<std::size_t>(n) + 1);
    std::vector<std::int32_t> pos_units;

    // Counters indexed by clause size, maintained for trace snapshots and
    // the accept test (p_count[1]).
    std::vector<std::uint32_t> p_count(static_cast<std::size_t>(k) + 1, 0);
    std::vector<std::uint32_t> n_count(static_cast<std::size_t>(k) + 1, 0);

    auto cell_add = [&](std::int32_t c, std::int32_t delta) {
        if (positive[static_cast<std::size_t>(c)] == 1)
            p_count[static_cast<std::size_t>(size[static_cast<std::size_t>(c)])] +=
                static_cast<std::uint32_t>(delta);
        else if (positive[static_cast<std::size_t>(c)] == 0)
            n_count[static_cast<std::size_t>(size[static_cast<std::size_t>(c)])] +=
                static_cast<std::uint32_t>(delta);
    };

    for (std::int32_t c = 0; c < m; ++c) {
        const Clause& cl = f.clauses[static_cast<std::size_t>(c)];
        if (cl.empty()) throw std::invalid_argument("pur: empty clause in input");
        std::int32_t pos = 0;
        for (const auto& lit : cl) {
            occ[static_cast<std::size_t>(lit.var)].push_back({c, lit.negated});
            if (!lit.negated) ++pos;
        }
        size[static_cast<std::size_t>(c)] = static_cast<std::int32_t>(cl.size());
        positive[static_cast<std::size_t>(c)] = pos;
        cell_add(c, 1);
        if (cl.size() == 1) {
            if (pos == 1)
                pos_units.push_back(c);
            else
                ++neg_units[static_cast<std::size_t>(cl[0].var)];
        }
    }

    // The unit literal of a live unit clause is the one whose variable is
    // still unassigned.
    auto unit_var = [&](std::int32_t c) {
        for (const auto& lit : f.clauses[static_cast<std::size_t>(c)])
            if (!assigned[static_cast<std::size_t>(lit.var)]) return lit.var;
        throw std::logic_error("pur: unit clause with no unassigned literal");
    };

    std::int32_t t = n;
    if (trace) trace->k = k;
    for (;;) {
        if (kRecord) {
            PurStage st;
            st.t = t;
            st.p_count = p_count;
            st.n_count = n_count;
            trace->stages.push_back(std::move(st));
        }
        if (p_count[1] == 0) {
            result = {PurOutcome::Accept, t};
            break;
        }
        if (kRecord && stage_limit > 0 &&
            trace->stages.size() >= static_cast<std::size_t>(stage_limit)) {
            trace->completed = false;
            result = {PurOutcome::Accept, t};
            break;
        }
        // Uniform over live positive units: stale ids are swapped out as
        // they are drawn, which keeps the live ones equally likely.
        std::int32_t chosen = -1;
        while (chosen < 0) {
            std::size_t idx = static_cast<std::size_t>(rng.below(pos_units.size()));
            std::int32_t c = pos_units[idx];
            if (alive[static_cast<std::size_t>(c)]) {
                chosen = c;
            } else {
                pos_units[idx] = pos_units.back();
                pos_units.pop_back();
            }
        }
        std::int32_t x = unit_var(chosen);
        if (neg_units[static_cast<std::size_t>(x)] > 0) {
            result = {PurOutcome::Reject, t};
            break;
        }
        // x := 1. Clauses holding the positive literal are satisfied;
        // clauses holding the negated literal shrink by one. The flag is
        // set before the pass so unit_var never resolves to x itself.
        assigned[static_cast<std::size_t>(x)] = true;
        bool contradiction = false;
        for (const auto& o : occ[static_cast<std::size_t>(x)]) {
            std::size_t c = static_cast<std::size_t>(o.clause);
            if (!alive[c]) continue;
            if (!o.negated) {
                cell_add(o.clause, -1);
                alive[c] = false;
                continue;
            }
            cell_add(o.clause, -1);
            --size[c];
            cell_add(o.clause, +1);
            if (size[c] == 1) {
                if (positive[c] == 1) {
                    pos_units.push_back(o.clause);
                } else {
                    ++neg_units[static_cast<std::size_t>(unit_var(o.clause))];
                }
            } else if (size[c] == 0) {
                contradiction = true; // unreachable: the complement check runs first
            }
        }
        --t;
        if (contradiction) {
            if (kRecord) {
                PurStage st;
                st.t = t;
                st.p_count = p_count;
                st.n_count = n_count;
                trace->stages.push_back(std::move(st));
            }
            result = {PurOutcome::Reject, t};
            break;
        }
    }
    if (trace) {
        trace->outcome = result.outcome;
        trace->halt_stage = result.halt_stage;
    }
}

} // namespace

PurResult pur(const Formula& f, Rng& rng) {
    PurResult r;
    run_pur<false>(f, rng, r, nullptr, 0);
    return r;
}

PurTrace pur_trace(const Formula& f, Rng& rng, std::int32_t stage_limit) {
    PurResult r;
    PurTrace trace;
    run_pur<true>(f, rng, r, &trace, stage_limit);
    return trace;
}

std::string trace_to_csv(const PurTrace& trace) {
    std::ostringstream out;
    out << "t,i,P_i,N_i\n";
    for (const auto& st : trace.stages) {
        for (std::int32_t i = 1; i <= trace.k; ++i) {
            out << st.t << ',' << i << ',' << st.p_count[static_cast<std::size_t>(i)] << ','
                << st.n_count[static_cast<std::size_t>(i)] << '\n';
        }
    }
    return out.str();
}

} // namespace tlab
