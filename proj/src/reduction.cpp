#include "koszulhh/reduction.hpp"

#include "koszulhh/errors.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>

namespace koszulhh {

namespace {

Path concat3(const Path& a, const Path& b, const Path& c)
{
    auto ab = compose(a, b);
    if (!ab) throw PreconditionError("paths do not compose");
    auto abc = compose(*ab, c);
    if (!abc) throw PreconditionError("paths do not compose");
    return *abc;
}

/// prefix · x · suffix for an element parallel to the replaced subpath.
PathElement in_context(const Path& prefix, const PathElement& x, const Path& suffix)
{
    PathElement out;
    for (const auto& [p, c] : x.terms()) out.add(concat3(prefix, p, suffix), c);
    return out;
}

class RightmostReducer {
public:
    explicit RightmostReducer(const ReductionSystem& R) : R_(R) {}

    const PathElement& path(const Path& p)
    {
        if (auto it = memo_.find(p); it != memo_.end()) return it->second;
        if (!active_.insert(p).second)
            throw MathError("reduction cycle through " + format_path(R_.quiver(), p) + " (system is not reduction-finite)");
        PathElement result;
        if (auto occ = R_.rightmost_occurrence(p)) {
            if (++steps_ > R_.limits().max_steps) throw MathError("rewrite step cap exceeded");
            auto [pos, rule] = *occ;
            const Path& lhs = R_.rules()[rule].lhs;
            Path prefix = p.subpath(R_.quiver(), 0, pos);
            Path suffix = p.subpath(R_.quiver(), pos + lhs.length(), p.length() - pos - lhs.length());
            if (prefix.length() == 0) prefix = Path::vertex(p.origin);
            if (suffix.length() == 0) suffix = Path::vertex(p.terminal);
            PathElement next = in_context(prefix, R_.rules()[rule].rhs, suffix);
            for (const auto& [q, c] : next.terms()) {
                PathElement part = path(q);
                part *= c;
                result += part;
            }
        } else {
            result = PathElement(p, Scalar(1).in(R_.field()));
        }
        active_.erase(p);
        return memo_.emplace(p, std::move(result)).first->second;
    }

    PathElement element(const PathElement& x)
    {
        PathElement out;
        for (const auto& [p, c] : x.terms()) {
            PathElement part = path(p);
            part *= c;
            out += part;
        }
        return out;
    }

private:
    const ReductionSystem& R_;
    std::map<Path, PathElement> memo_;
    std::set<Path> active_;
    std::size_t steps_ = 0;
};

PathElement apply_step(const PathElement& x, const RewriteStep& step, const ReductionSystem& R)
{
    Scalar c = x.coefficient(step.path);
    if (c.is_zero()) throw PreconditionError("rewrite step refers to an absent term");
    const auto& rule = R.rules().at(step.rule);
    if (!step.path.occurs_at(rule.lhs, step.position)) throw PreconditionError("rewrite step does not match");
    const Path& p = step.path;
    Path prefix = step.position == 0 ? Path::vertex(p.origin) : p.subpath(R.quiver(), 0, step.position);
    std::size_t tail = p.length() - step.position - rule.lhs.length();
    Path suffix = tail == 0 ? Path::vertex(p.terminal) : p.subpath(R.quiver(), step.position + rule.lhs.length(), tail);
    PathElement out = x;
    out.add(p, -c);
    out += in_context(prefix, rule.rhs, suffix) * c;
    return out;
}

}  // namespace

ReductionSystem::ReductionSystem(Quiver q, Field f, std::vector<ReductionRule> rules, Limits limits)
    : quiver_(std::move(q)), field_(f), limits_(limits)
{
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const auto& r = rules[i];
        std::string name = format_path(quiver_, r.lhs);
        if (r.lhs.length() < 2) throw PreconditionError("rule lhs '" + name + "' must have length at least 2");
        for (const auto& [p, c] : r.rhs.terms())
            if (!p.parallel_to(r.lhs))
                throw PreconditionError("rule '" + name + "': rhs term " + format_path(quiver_, p) + " is not parallel");
        if (!index_.emplace(r.lhs, i).second) throw PreconditionError("duplicate rule lhs '" + name + "'");
        max_lhs_ = std::max(max_lhs_, r.lhs.length());
    }
    for (const auto& a : rules)
        for (const auto& b : rules)
            if (!(a.lhs == b.lhs) && b.lhs.contains(a.lhs))
                throw PreconditionError("rule lhs '" + format_path(quiver_, a.lhs) + "' is a subpath of '" +
                                        format_path(quiver_, b.lhs) + "'");
    rules_ = std::move(rules);
    for (auto& r : rules_) {
        PathElement rhs;
        for (const auto& [p, c] : r.rhs.terms()) rhs.add(p, c.in(field_));
        r.rhs = std::move(rhs);
    }
    // Bring every rhs to normal form; a rule rewriting into itself is not reduction-finite.
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        for (const auto& [p, c] : rules_[i].rhs.terms())
            if (p.contains(rules_[i].lhs))
                throw MathError("rule '" + format_path(quiver_, rules_[i].lhs) + "' is not reduction-finite");
        rules_[i].rhs = normal_form(rules_[i].rhs, *this);
    }
}

std::optional<std::size_t> ReductionSystem::rule_for(const Path& p) const
{
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::pair<std::size_t, std::size_t>> ReductionSystem::rightmost_occurrence(const Path& p) const
{
    for (std::size_t pos = p.length(); pos-- > 0;)
        for (const auto& r : rules_)
            if (p.occurs_at(r.lhs, pos)) return std::pair{pos, index_.at(r.lhs)};
    return std::nullopt;
}

std::optional<std::pair<std::size_t, std::size_t>> ReductionSystem::leftmost_occurrence(const Path& p) const
{
    for (std::size_t pos = 0; pos < p.length(); ++pos)
        for (const auto& r : rules_)
            if (p.occurs_at(r.lhs, pos)) return std::pair{pos, index_.at(r.lhs)};
    return std::nullopt;
}

PathElement normal_form(const PathElement& x, const ReductionSystem& R)
{
    RightmostReducer red(R);
    return red.element(x);
}

PathElement normal_form(const Path& p, const ReductionSystem& R)
{
    RightmostReducer red(R);
    return red.path(p);
}

PathElement normal_form(const PathElement& x, const ReductionSystem& R, Strategy s, NormalFormTrace* trace)
{
    PathElement cur = x;
    std::vector<RewriteStep> steps;
    for (std::size_t n = 0;; ++n) {
        std::optional<RewriteStep> step;
        for (auto it = cur.terms().rbegin(); it != cur.terms().rend() && !step; ++it) {
            auto occ = s == Strategy::Rightmost ? R.rightmost_occurrence(it->first) : R.leftmost_occurrence(it->first);
            if (occ) step = RewriteStep{it->first, occ->first, occ->second};
        }
        if (!step) break;
        if (n >= R.limits().max_steps) throw MathError("rewrite step cap exceeded");
        cur = apply_step(cur, *step, R);
        if (trace) steps.push_back(std::move(*step));
    }
    if (trace) *trace = NormalFormTrace{x, std::move(steps), cur};
    return cur;
}

PathElement replay(const NormalFormTrace& trace, const ReductionSystem& R)
{
    PathElement cur = trace.input;
    for (const auto& step : trace.steps) cur = apply_step(cur, step, R);
    return cur;
}

PathElement multiply(const PathElement& x, const PathElement& y, const ReductionSystem& R)
{
    return normal_form(multiply(x, y), R);
}

Path Overlap::word(const Quiver&) const { return concat3(p, q, r); }

std::vector<Overlap> overlaps(const ReductionSystem& R)
{
    const Quiver& Q = R.quiver();
    std::vector<Overlap> out;
    for (std::size_t i = 0; i < R.size(); ++i) {
        const Path& s1 = R.rules()[i].lhs;
        for (std::size_t j = 0; j < R.size(); ++j) {
            const Path& s2 = R.rules()[j].lhs;
            for (std::size_t k = 1; k < s1.length() && k < s2.length(); ++k) {
                Path q = s1.subpath(Q, s1.length() - k, k);
                if (!s2.occurs_at(q, 0)) continue;
                out.push_back({s1.subpath(Q, 0, s1.length() - k), q, s2.subpath(Q, k, s2.length() - k), i, j});
            }
        }
    }
    auto key = [&](const Overlap& o) { return std::tuple(o.word(Q), o.p.length(), o.q.length()); };
    std::sort(out.begin(), out.end(), [&](const Overlap& a, const Overlap& b) { return key(a) < key(b); });
    out.erase(std::unique(out.begin(), out.end(), [&](const Overlap& a, const Overlap& b) { return key(a) == key(b); }),
              out.end());
    return out;
}

DiamondReport check_diamond(const ReductionSystem& R)
{
    DiamondReport report;
    report.overlaps = overlaps(R);
    for (const auto& o : report.overlaps) {
        PathElement left = normal_form(in_context(Path::vertex(o.p.origin), R.rules()[o.left_rule].rhs, o.r), R);
        PathElement right = normal_form(in_context(o.p, R.rules()[o.right_rule].rhs, Path::vertex(o.r.terminal)), R);
        if (!(left == right)) {
            report.resolvable = false;
            report.failures.push_back({o, std::move(left), std::move(right)});
        }
    }
    return report;
}

IrreducibleBasis::IrreducibleBasis(std::vector<Path> paths) : paths_(std::move(paths))
{
    for (std::size_t i = 0; i < paths_.size(); ++i) index_.emplace(paths_[i], i);
}

std::optional<std::size_t> IrreducibleBasis::index_of(const Path& p) const
{
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<Path> IrreducibleBasis::parallel(VertexId origin, VertexId terminal) const
{
    std::vector<Path> out;
    for (const auto& p : paths_)
        if (p.origin == origin && p.terminal == terminal) out.push_back(p);
    return out;
}

namespace {

IrreducibleBasis enumerate_irreducible(const ReductionSystem& R, std::optional<std::size_t> max_length)
{
    const Quiver& Q = R.quiver();
    std::vector<Path> found;
    std::deque<Path> queue;
    for (VertexId v = 0; v < Q.vertex_count(); ++v) queue.push_back(Path::vertex(v));
    while (!queue.empty()) {
        Path p = std::move(queue.front());
        queue.pop_front();
        found.push_back(p);
        if (found.size() > R.limits().max_basis)
            throw MathError("irreducible basis exceeds " + std::to_string(R.limits().max_basis) + " paths");
        if (max_length && p.length() >= *max_length) continue;
        for (ArrowId a = 0; a < Q.arrow_count(); ++a) {
            auto next = compose(p, Path::arrow(Q, a));
            if (!next) continue;
            bool reducible = false;
            for (const auto& rule : R.rules())
                if (rule.lhs.length() <= next->length() && next->occurs_at(rule.lhs, next->length() - rule.lhs.length()))
                    reducible = true;
            if (!reducible) queue.push_back(std::move(*next));
        }
    }
    std::sort(found.begin(), found.end());
    return IrreducibleBasis(std::move(found));
}

}  // namespace

IrreducibleBasis irr_basis(const ReductionSystem& R) { return enumerate_irreducible(R, std::nullopt); }

IrreducibleBasis irr_basis_up_to(const ReductionSystem& R, std::size_t max_length)
{
    return enumerate_irreducible(R, max_length);
}

ReductionSystem default_reduction_system(const PresentedAlgebra& A, Limits limits)
{
    struct Row {
        Path lead;
        PathElement element;
    };
    std::vector<Row> rows;
    for (const auto& rel : A.relations) {
        PathElement x;
        for (const auto& [p, c] : rel.terms()) x.add(p, c.in(A.field));
        for (const auto& row : rows) {
            Scalar c = x.coefficient(row.lead);
            if (!c.is_zero()) x -= row.element * c;
        }
        if (x.is_zero()) continue;
        Path lead = x.leading_path();
        x *= x.coefficient(lead).inverse();
        for (auto& row : rows) {
            Scalar c = row.element.coefficient(lead);
            if (!c.is_zero()) row.element -= x * c;
        }
        rows.push_back({lead, std::move(x)});
    }
    std::vector<ReductionRule> rules;
    for (auto& row : rows) {
        PathElement rhs = row.element;
        rhs.add(row.lead, -rhs.coefficient(row.lead));
        rules.push_back({row.lead, -rhs});
    }
    return ReductionSystem(A.quiver, A.field, std::move(rules), limits);
}

ReductionSystem reduction_system_for(const SpecDocument& doc, Limits limits)
{
    if (doc.reduction_rules.empty()) return default_reduction_system(doc.algebra, limits);
    const auto& A = doc.algebra;
    std::vector<ReductionRule> rules;
    for (const auto& r : doc.reduction_rules)
        rules.push_back({parse_path(A.quiver, r.lhs), parse_element(A.quiver, r.rhs, A.field)});
    return ReductionSystem(A.quiver, A.field, std::move(rules), limits);
}

}  // namespace koszulhh
