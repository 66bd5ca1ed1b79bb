#include "tlab/formula.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tlab {

std::int32_t Formula::max_clause_size() const {
    std::size_t k = 0;
    for (const auto& c : clauses) k = std::max(k, c.size());
    return static_cast<std::int32_t>(k);
}

std::uint64_t binom_u64(std::int64_t n, std::int64_t r) {
    if (r < 0 || n < 0 || r > n) return 0;
    r = std::min(r, n - r);
    unsigned __int128 acc = 1;
    for (std::int64_t i = 1; i <= r; ++i) {
        acc = acc * static_cast<unsigned __int128>(n - r + i);
        acc /= static_cast<unsigned __int128>(i);
        if (acc > std::numeric_limits<std::uint64_t>::max())
            throw std::overflow_error("binom_u64: value exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

ClauseTemplate clause_template(const Clause& c) {
    ClauseTemplate t;
    for (const auto& lit : c) (lit.negated ? t.a : t.b)++;
    return t;
}

std::uint64_t template_count(ClauseTemplate t, std::int32_t n) {
    unsigned __int128 v = static_cast<unsigned __int128>(binom_u64(n, t.arity())) *
                          binom_u64(t.arity(), t.a);
    if (v > std::numeric_limits<std::uint64_t>::max())
        throw std::overflow_error("template_count: value exceeds 64 bits");
    return static_cast<std::uint64_t>(v);
}

namespace {

void require_fits(const ConstraintSet& s, std::int32_t n, const char* who) {
    if (s.empty()) throw std::invalid_argument(std::string(who) + ": constraint set is empty");
    if (n < s.max_arity())
        throw std::invalid_argument(std::string(who) +
                                    ": need at least as many variables as the max arity");
}

} // namespace

std::uint64_t universe_size(const ConstraintSet& s, std::int32_t n) {
    require_fits(s, n, "universe_size");
    unsigned __int128 total = 0;
    for (const auto& t : s.templates()) {
        total += template_count(t, n);
        if (total > std::numeric_limits<std::uint64_t>::max())
            throw std::overflow_error("universe_size: value exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(total);
}

namespace {

// One uniform instantiation of a template: a uniform variable subset and
// a uniform choice of which of them are negated.
Clause sample_clause(ClauseTemplate t, std::int32_t n, Rng& rng) {
    std::vector<std::int32_t> vars = rng.distinct(n, t.arity());
    std::vector<std::int32_t> neg_pos = rng.distinct(t.arity(), t.a);
    Clause c(t.arity());
    std::size_t np = 0;
    for (std::int32_t i = 0; i < t.arity(); ++i) {
        bool neg = np < neg_pos.size() && neg_pos[np] == i;
        if (neg) ++np;
        c[static_cast<std::size_t>(i)] = Literal{vars[static_cast<std::size_t>(i)] + 1, neg};
    }
    return c;
}

std::vector<std::int64_t> encode_clause(const Clause& c) {
    std::vector<std::int64_t> key;
    key.reserve(c.size());
    for (const auto& lit : c) key.push_back(lit.var * 2 + (lit.negated ? 1 : 0));
    return key;
}

// All instantiations of one template, for dense inclusion sampling.
void enumerate_template(ClauseTemplate t, std::int32_t n, std::vector<Clause>& out) {
    std::vector<std::int32_t> vars(static_cast<std::size_t>(t.arity()));
    std::vector<std::int32_t> negs(static_cast<std::size_t>(t.a));
    auto emit = [&] {
        Clause c;
        c.reserve(vars.size());
        std::size_t ni = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            bool neg = ni < negs.size() && negs[ni] == static_cast<std::int32_t>(i);
            if (neg) ++ni;
            c.push_back({vars[i] + 1, neg});
        }
        out.push_back(std::move(c));
    };
    // Nested combination walk: variable subset, then negated positions.
    auto next_comb = [](std::vector<std::int32_t>& comb, std::int32_t limit) {
        int r = static_cast<int>(comb.size());
        for (int i = r - 1; i >= 0; --i) {
            if (comb[static_cast<std::size_t>(i)] < limit - (r - i)) {
                ++comb[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < r; ++j)
                    comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
                return true;
            }
        }
        return false;
    };
    for (std::int32_t i = 0; i < t.arity(); ++i) vars[static_cast<std::size_t>(i)] = i;
    do {
        for (std::int32_t i = 0; i < t.a; ++i) negs[static_cast<std::size_t>(i)] = i;
        if (t.a == 0) {
            emit();
        } else {
            do {
                emit();
            } while (next_comb(negs, t.arity()));
        }
    } while (next_comb(vars, n));
}

} // namespace

Formula sample_multiset(const ConstraintSet& s, std::int32_t n, std::int64_t m, Rng& rng) {
    require_fits(s, n, "sample_multiset");
    if (m < 0) throw std::invalid_argument("sample_multiset: m must be nonnegative");

    std::vector<std::uint64_t> cum;
    cum.reserve(s.size());
    std::uint64_t total = 0;
    for (const auto& t : s.templates()) {
        total += template_count(t, n);
        cum.push_back(total);
    }
    if (total == 0) throw std::invalid_argument("sample_multiset: clause universe is empty");

    Formula f;
    f.n = n;
    f.clauses.reserve(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) {
        std::uint64_t u = rng.below(total);
        std::size_t which = static_cast<std::size_t>(
            std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
        f.clauses.push_back(sample_clause(s.templates()[which], n, rng));
    }
    return f;
}

Formula sample_const_prob(const ConstraintSet& s, std::int32_t n, double p, Rng& rng) {
    require_fits(s, n, "sample_const_prob");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("sample_const_prob: p must lie in [0, 1]");

    Formula f;
    f.n = n;
    for (const auto& t : s.templates()) {
        std::uint64_t count = template_count(t, n);
        if (count == 0) continue;
        if (count > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            throw std::overflow_error("sample_const_prob: universe too large");
        std::int64_t want = rng.binomial(static_cast<std::int64_t>(count), p);
        if (want == 0) continue;
        if (static_cast<std::uint64_t>(want) * 2 <= count) {
            // Sparse: rejection-sample distinct clauses.
            std::set<std::vector<std::int64_t>> seen;
            while (static_cast<std::int64_t>(seen.size()) < want) {
                Clause c = sample_clause(t, n, rng);
                if (seen.insert(encode_clause(c)).second) f.clauses.push_back(std::move(c));
            }
        } else {
            // Dense: materialize the template universe and take a uniform
            // subset via partial shuffle.
            if (count > (1u << 22))
                throw std::invalid_argument(
                    "sample_const_prob: p too dense for this universe size");
            std::vector<Clause> all;
            all.reserve(static_cast<std::size_t>(count));
            enumerate_template(t, n, all);
            for (std::int64_t i = 0; i < want; ++i) {
                std::size_t j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.below(
                                    static_cast<std::uint64_t>(all.size() - static_cast<std::size_t>(i))));
                std::swap(all[static_cast<std::size_t>(i)], all[j]);
                f.clauses.push_back(all[static_cast<std::size_t>(i)]);
            }
        }
    }
    return f;
}

Formula deletion_transform(const Formula& f, int b0, DeletionMode mode, Rng& rng) {
    if (b0 < 1) throw std::invalid_argument("deletion_transform: b0 must be at least 1");
    Formula out;
    out.n = f.n;
    out.clauses.reserve(f.clauses.size());
    std::vector<std::size_t> pos, neg;
    for (const auto& c : f.clauses) {
        if (static_cast<int>(c.size()) < b0)
            throw std::invalid_argument("deletion_transform: clause shorter than b0");
        pos.clear();
        neg.clear();
        for (std::size_t i = 0; i < c.size(); ++i)
            (c[i].negated ? neg : pos).push_back(i);

        std::vector<bool> drop(c.size(), false);
        int s = static_cast<int>(pos.size());
        int neg_drops;
        if (s >= b0) {
            // Keep a single positive literal, chosen uniformly.
            std::size_t keep = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(s)));
            for (std::size_t i = 0; i < pos.size(); ++i)
                if (i != keep) drop[pos[i]] = true;
            neg_drops = 0;
        } else if (mode == DeletionMode::KeepLastPositive && s >= 1) {
            std::size_t keep = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(s)));
            for (std::size_t i = 0; i < pos.size(); ++i)
                if (i != keep) drop[pos[i]] = true;
            neg_drops = b0 - s;
        } else {
            for (std::size_t i : pos) drop[i] = true;
            neg_drops = b0 - 1 - s;
        }
        if (neg_drops > 0) {
            for (std::int32_t i :
                 rng.distinct(static_cast<std::int32_t>(neg.size()), neg_drops))
                drop[neg[static_cast<std::size_t>(i)]] = true;
        }
        Clause shrunk;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!drop[i]) shrunk.push_back(c[i]);
        out.clauses.push_back(std::move(shrunk));
    }
    return out;
}

bool satisfies(const Formula& f, const std::vector<bool>& assignment) {
    if (assignment.size() != static_cast<std::size_t>(f.n))
        throw std::invalid_argument("satisfies: assignment size mismatch");
    for (const auto& c : f.clauses) {
        bool sat = false;
        for (const auto& lit : c) {
            if (assignment[static_cast<std::size_t>(lit.var - 1)] != lit.negated) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

void write_dimacs(const Formula& f, std::ostream& out) {
    out << "p cnf " << f.n << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses) {
        for (const auto& lit : c) out << (lit.negated ? -lit.var : lit.var) << ' ';
        out << "0\n";
    }
}

std::string to_dimacs(const Formula& f) {
    std::ostringstream ss;
    write_dimacs(f, ss);
    return ss.str();
}

Formula parse_dimacs(std::istream& in) {
    std::string tok;
    Formula f;
    std::int64_t m = -1;
    while (in >> tok) {
        if (tok == "c") {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (tok == "p") {
            std::string fmt;
            if (!(in >> fmt >> f.n >> m) || fmt != "cnf" || f.n < 0 || m < 0)
                throw std::runtime_error("DIMACS: malformed problem line");
            break;
        }
        throw std::runtime_error("DIMACS: expected problem line, got '" + tok + "'");
    }
    if (m < 0) throw std::runtime_error("DIMACS: missing problem line");
    f.clauses.reserve(static_cast<std::size_t>(m));
    Clause cur;
    std::int64_t lit;
    while (static_cast<std::int64_t>(f.clauses.size()) < m) {
        if (!(in >> tok)) throw std::runtime_error("DIMACS: unexpected end of input");
        if (tok == "c") {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        try {
            lit = std::stoll(tok);
        } catch (const std::exception&) {
            throw std::runtime_error("DIMACS: bad literal '" + tok + "'");
        }
        if (lit == 0) {
            std::sort(cur.begin(), cur.end());
            for (std::size_t i = 1; i < cur.size(); ++i)
                if (cur[i].var == cur[i - 1].var)
                    throw std::runtime_error("DIMACS: repeated variable within a clause");
            f.clauses.push_back(cur);
            cur.clear();
            continue;
        }
        std::int64_t v = lit < 0 ? -lit : lit;
        if (v > f.n) throw std::runtime_error("DIMACS: literal out of range");
        cur.push_back({static_cast<std::int32_t>(v), lit < 0});
    }
    if (!cur.empty()) throw std::runtime_error("DIMACS: trailing unterminated clause");
    return f;
}

Formula load_dimacs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open DIMACS file: " + path);
    return parse_dimacs(in);
}

void save_dimacs(const Formula& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write DIMACS file: " + path);
    write_dimacs(f, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace tlab
