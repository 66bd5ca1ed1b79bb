#include "tlab/constraints.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tlab {

ConstraintSet::ConstraintSet(std::vector<ClauseTemplate> templates)
    : templates_(std::move(templates)) {
    for (const auto& t : templates_) {
        if (t.a < 0 || t.b < 0)
            throw std::invalid_argument("ConstraintSet: literal counts must be nonnegative");
        if (t.arity() < 1)
            throw std::invalid_argument("ConstraintSet: template arity must be at least 1");
    }
    std::sort(templates_.begin(), templates_.end());
    templates_.erase(std::unique(templates_.begin(), templates_.end()), templates_.end());
}

bool ConstraintSet::contains(int a, int b) const {
    return std::binary_search(templates_.begin(), templates_.end(), ClauseTemplate{a, b});
}

int ConstraintSet::max_arity() const {
    int k = 0;
    for (const auto& t : templates_) k = std::max(k, t.arity());
    return k;
}

ConstraintSet ConstraintSet::mirrored() const {
    std::vector<ClauseTemplate> out;
    out.reserve(templates_.size());
    for (const auto& t : templates_) out.push_back({t.b, t.a});
    return ConstraintSet(std::move(out));
}

const char* to_string(ThresholdClass c) {
    switch (c) {
        case ThresholdClass::Trivial: return "Trivial";
        case ThresholdClass::Coarse: return "Coarse";
        case ThresholdClass::Sharp: return "Sharp";
    }
    return "?";
}

const char* to_string(SchaeferClass c) {
    switch (c) {
        case SchaeferClass::TrivialP: return "TrivialP";
        case SchaeferClass::P: return "P";
        case SchaeferClass::NPComplete: return "NPComplete";
    }
    return "?";
}

const char* to_string(CorollaryCase c) {
    switch (c) {
        case CorollaryCase::HornCase: return "HornCase";
        case CorollaryCase::NegHornCase: return "NegHornCase";
        case CorollaryCase::ZeroEndpointCase: return "ZeroEndpointCase";
        case CorollaryCase::OneEndpointCase: return "OneEndpointCase";
        case CorollaryCase::None: return "None";
    }
    return "?";
}

bool is_0valid(const ConstraintSet& s) {
    return std::all_of(s.templates().begin(), s.templates().end(), template_0valid);
}

bool is_1valid(const ConstraintSet& s) {
    return std::all_of(s.templates().begin(), s.templates().end(), template_1valid);
}

bool is_horn(const ConstraintSet& s) {
    return std::all_of(s.templates().begin(), s.templates().end(), template_horn);
}

bool is_neg_horn(const ConstraintSet& s) {
    return std::all_of(s.templates().begin(), s.templates().end(), template_neg_horn);
}

ConstraintStats compute_stats(const ConstraintSet& s) {
    if (s.empty()) throw std::invalid_argument("compute_stats: constraint set is empty");
    ConstraintStats st;
    st.k = s.max_arity();
    st.p.assign(st.k + 1, 0);
    st.n.assign(st.k + 1, 0);
    for (int i = 1; i <= st.k; ++i) {
        st.p[i] = s.contains(i - 1, 1) ? 1 : 0;
        st.n[i] = s.contains(i, 0) ? 1 : 0;
    }
    st.delta_k = st.k * st.p[st.k] + st.n[st.k];
    for (const auto& t : s.templates()) {
        if (t.b == 0) st.a0 = std::max(st.a0, t.a);
        if (t.b >= 1) st.a_ge1 = std::max(st.a_ge1, t.a);
        if (t.a == 0) st.b0 = std::max(st.b0, t.b);
        if (t.a >= 1) st.b_ge1 = std::max(st.b_ge1, t.b);
    }
    return st;
}

ThresholdClassification classify_threshold(const ConstraintSet& s) {
    if (s.empty()) throw std::invalid_argument("classify_threshold: constraint set is empty");
    if (s.max_arity() < 2)
        throw std::invalid_argument("classify_threshold: max arity must be at least 2");

    ThresholdClassification out;
    if (is_0valid(s) || is_1valid(s)) {
        out.cls = ThresholdClass::Trivial;
        out.rule = 'a';
        return out;
    }
    auto horn_or_0valid = [](ClauseTemplate t) { return template_horn(t) || template_0valid(t); };
    auto neghorn_or_1valid = [](ClauseTemplate t) {
        return template_neg_horn(t) || template_1valid(t);
    };
    if (std::all_of(s.templates().begin(), s.templates().end(), horn_or_0valid) ||
        std::all_of(s.templates().begin(), s.templates().end(), neghorn_or_1valid)) {
        out.cls = ThresholdClass::Coarse;
        out.rule = 'b';
        return out;
    }

    ConstraintStats st = compute_stats(s);
    out.rule = 'c';
    out.narrow_endpoint_warning = st.a0 < 2 || st.b0 < 2;
    bool sharp = (st.a_ge1 < st.a0 && st.a0 <= st.b0) ||
                 (st.b_ge1 < st.b0 && st.b0 <= st.a0) ||
                 (st.a0 == st.b0 && st.a0 == std::min(st.a_ge1, st.b_ge1));
    out.cls = sharp ? ThresholdClass::Sharp : ThresholdClass::Coarse;
    return out;
}

ThresholdClass threshold_class(const ConstraintSet& s) { return classify_threshold(s).cls; }

SchaeferClass schaefer_class_clausal(const ConstraintSet& s) {
    if (s.empty()) throw std::invalid_argument("schaefer_class_clausal: constraint set is empty");
    if (is_0valid(s) || is_1valid(s)) return SchaeferClass::TrivialP;
    bool all_binary = std::all_of(s.templates().begin(), s.templates().end(),
                                  [](ClauseTemplate t) { return t.arity() <= 2; });
    if (is_horn(s) || is_neg_horn(s) || all_binary) return SchaeferClass::P;
    return SchaeferClass::NPComplete;
}

std::set<CorollaryCase> corollary_case(const ConstraintSet& s) {
    if (threshold_class(s) != ThresholdClass::Coarse)
        throw std::invalid_argument("corollary_case: set does not have a coarse transition");
    std::set<CorollaryCase> out;
    if (is_horn(s)) out.insert(CorollaryCase::HornCase);
    if (is_neg_horn(s)) out.insert(CorollaryCase::NegHornCase);
    if (schaefer_class_clausal(s) == SchaeferClass::NPComplete) {
        ConstraintStats st = compute_stats(s);
        // The transition sits at the scale where copies of the narrower
        // endpoint template become likely, so satisfiability tracks the
        // endpoint whose obstructions die out last. On ties both hold.
        if (st.b0 >= 1 && st.b0 <= st.a0 && s.contains(0, st.b0))
            out.insert(CorollaryCase::ZeroEndpointCase);
        if (st.a0 >= 1 && st.a0 <= st.b0 && s.contains(st.a0, 0))
            out.insert(CorollaryCase::OneEndpointCase);
    }
    if (out.empty()) out.insert(CorollaryCase::None);
    return out;
}

ConstraintSet parse_constraint_set(const std::string& text) {
    std::vector<ClauseTemplate> templates;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long a, b;
        if (!(ls >> a)) continue; // blank or comment-only line
        std::string trailing;
        if (!(ls >> b) || (ls >> trailing)) {
            throw std::runtime_error("constraint set line " + std::to_string(lineno) +
                                     ": expected exactly two integers");
        }
        if (a < 0 || b < 0 || a + b < 1 || a > 64 || b > 64) {
            throw std::runtime_error("constraint set line " + std::to_string(lineno) +
                                     ": counts out of range");
        }
        templates.push_back({static_cast<int>(a), static_cast<int>(b)});
    }
    if (templates.empty()) throw std::runtime_error("constraint set: no templates found");
    return ConstraintSet(std::move(templates));
}

ConstraintSet load_constraint_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open constraint set file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_constraint_set(ss.str());
}

std::string format_constraint_set(const ConstraintSet& s) {
    std::ostringstream out;
    for (const auto& t : s.templates()) out << t.a << ' ' << t.b << '\n';
    return out.str();
}

} // namespace tlab
