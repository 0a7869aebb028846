#include "tnsched/layers.hpp"
#include "tnsched/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

namespace tnsched {

DenseTensor primitive_tensor(const PrimitiveSpec& spec, std::size_t P, std::size_t H) {
    const auto a = static_cast<std::size_t>(spec.a);
    const auto b = static_cast<std::size_t>(spec.b);
    const auto c = static_cast<std::size_t>(spec.c);
    switch (spec.kind) {
    case PrimitiveKind::Id3: {
        DenseTensor t({P, P, H});
        for (std::size_t i = 0; i < P; ++i)
            for (std::size_t j = 0; j < H; ++j) t.at({i, i, j}) = 1.0;
        return t;
    }
    case PrimitiveKind::Id4: {
        DenseTensor t({P, P, H, H});
        for (std::size_t i = 0; i < P; ++i)
            for (std::size_t j = 0; j < H; ++j) t.at({i, i, j, j}) = 1.0;
        return t;
    }
    case PrimitiveKind::Ctrl: {
        DenseTensor t({P, P, H});
        for (std::size_t j = 0; j < P; ++j)
            if (j != a) t.at({j, j, 0}) = 1.0;
        t.at({a, a, b}) = 1.0;
        return t;
    }
    case PrimitiveKind::Cctrl: {
        DenseTensor t({P, P, H, H});
        for (std::size_t i = 0; i < P; ++i)
            for (std::size_t k = 0; k < H; ++k)
                if (k != b) t.at({i, i, k, 0}) = 1.0;
        for (std::size_t j = 0; j < P; ++j)
            if (j != a) t.at({j, j, b, 0}) = 1.0;
        t.at({a, a, b, c}) = 1.0;
        return t;
    }
    case PrimitiveKind::CProy: {
        DenseTensor t({P, P, H});
        for (std::size_t i = 0; i < P; ++i)
            for (std::size_t k = 0; k < H; ++k)
                if (k != b) t.at({i, i, k}) = 1.0;
        t.at({a, a, b}) = 1.0;
        return t;
    }
    case PrimitiveKind::CcProy: {
        DenseTensor t({P, P, H, H});
        for (std::size_t i = 0; i < P; ++i)
            for (std::size_t k = 0; k < H; ++k)
                for (std::size_t l = 0; l < H; ++l)
                    if (!(k == b && l == b)) t.at({i, i, k, l}) = 1.0;
        t.at({a, a, b, b}) = 1.0;
        return t;
    }
    }
    throw ShapeError("unknown primitive kind");
}

std::pair<int, int> involved_span(const Rule& rule) {
    int lo = rule.target_machine, hi = rule.target_machine;
    for (const auto& c : rule.conditions) {
        lo = std::min(lo, c.machine);
        hi = std::max(hi, c.machine);
    }
    return {lo, hi};
}

std::vector<std::vector<int>> rearrange_rules(const std::vector<Rule>& rules) {
    std::map<int, std::vector<int>> buckets;
    for (std::size_t r = 0; r < rules.size(); ++r)
        buckets[involved_span(rules[r]).first].push_back(static_cast<int>(r));
    std::vector<std::vector<int>> out;
    for (auto& [first, members] : buckets) {
        std::stable_sort(members.begin(), members.end(), [&](int a, int b) {
            return involved_span(rules[a]).second < involved_span(rules[b]).second;
        });
        out.push_back(std::move(members));
    }
    return out;
}

namespace {

// Condition value of `rule` at `machine`, if any.
std::optional<int> condition_value(const Rule& rule, int machine) {
    for (const auto& c : rule.conditions)
        if (c.machine == machine) return c.task;
    return std::nullopt;
}

} // namespace

std::vector<RuleGroup> condense(const std::vector<Rule>& rules,
                                const std::vector<int>& bucket,
                                const Instance& inst) {
    std::vector<RuleGroup> groups;
    for (int r : bucket) {
        const Rule& rule = rules[r];
        const auto [first, last] = involved_span(rule);
        const std::size_t cap = static_cast<std::size_t>(inst.task_count(first));
        bool placed = false;
        for (RuleGroup& g : groups) {
            if (g.first != first || g.last != last || g.target != rule.target_machine) continue;
            if (g.members.size() >= cap) continue;
            // Every control end must dispatch each member to a distinct
            // channel, so condition values there may not repeat.
            bool clash = false;
            for (int end : {first, last}) {
                if (end == rule.target_machine) continue;
                const auto mine = condition_value(rule, end);
                for (int other : g.members)
                    if (condition_value(rules[other], end) == mine) { clash = true; break; }
                if (clash) break;
            }
            if (clash) continue;
            g.members.push_back(r);
            placed = true;
            break;
        }
        if (!placed) {
            RuleGroup g;
            g.members = {r};
            g.first = first;
            g.last = last;
            g.target = rule.target_machine;
            groups.push_back(std::move(g));
        }
    }
    return groups;
}

namespace {

struct SiteBuilder {
    std::size_t P;
    std::size_t H;
    bool edge_left;    // machine is the first of the span (left extent 1)
    bool edge_right;   // machine is the last of the span (right extent 1)
    DenseTensor t;

    SiteBuilder(std::size_t P_, std::size_t H_, bool el, bool er)
        : P(P_), H(H_), edge_left(el), edge_right(er),
          t({P_, P_, el ? 1 : H_, er ? 1 : H_}) {}

    // set entry with logical (state, left channel, right channel)
    void set(std::size_t v, std::size_t l, std::size_t r, double w) {
        t.at({v, v, edge_left ? 0 : l, edge_right ? 0 : r}) = w;
    }
};

} // namespace

RuleLayer compile_group(const RuleGroup& group, const Instance& inst, double tau) {
    if (group.members.empty()) throw ShapeError("empty rule group");
    RuleLayer layer;
    layer.first = group.first;
    layer.last = group.last;
    layer.target = group.target;
    layer.members = group.members;
    const std::size_t R = group.members.size();
    layer.channels = R + 1;
    const std::size_t H = layer.channels;

    // Pass weight per member: 1 for hard rules, exp(-tau*extra) for soft.
    std::vector<double> pass(R, 1.0);
    for (std::size_t k = 0; k < R; ++k) {
        const Rule& rule = inst.rules[group.members[k]];
        if (rule.target_machine != group.target)
            throw ShapeError("condensation bug: mixed target machines in one group");
        const auto [f, l] = involved_span(rule);
        if (f != group.first || l != group.last)
            throw ShapeError("condensation bug: mixed spans in one group");
        if (rule.extra_cost) pass[k] = std::exp(-tau * *rule.extra_cost);
    }

    for (int m = group.first; m <= group.last; ++m) {
        const std::size_t P = static_cast<std::size_t>(inst.task_count(m));
        SiteBuilder sb(P, H, m == group.first, m == group.last);
        std::ostringstream kind;

        if (m == group.target) {
            const bool from_left = group.target > group.first;   // rightward signal arrives
            const bool from_right = group.target < group.last;   // leftward signal arrives
            if (from_left && from_right) {
                // conjunction projector: a rule fires only when both segments
                // carry its channel
                for (std::size_t kl = 0; kl < H; ++kl)
                    for (std::size_t kr = 0; kr < H; ++kr) {
                        if (kl == kr && kl >= 1) {
                            const Rule& rule = inst.rules[group.members[kl - 1]];
                            for (int task : rule.target_tasks)
                                sb.set(static_cast<std::size_t>(task), kl, kr, pass[kl - 1]);
                        } else {
                            for (std::size_t v = 0; v < P; ++v) sb.set(v, kl, kr, 1.0);
                        }
                    }
                kind << "proj2";
            } else {
                // one-sided projector; the active channel selects the
                // member's allowed tasks, channel 0 passes everything
                for (std::size_t k = 0; k < H; ++k) {
                    if (k == 0) {
                        for (std::size_t v = 0; v < P; ++v) sb.set(v, k, k, 1.0);
                    } else {
                        const Rule& rule = inst.rules[group.members[k - 1]];
                        for (int task : rule.target_tasks)
                            sb.set(static_cast<std::size_t>(task), k, k, pass[k - 1]);
                    }
                }
                kind << (from_left ? "proj<" : "proj>"); // arrow = signal source side
            }
            kind << "(";
            for (std::size_t k = 0; k < R; ++k) {
                const Rule& rule = inst.rules[group.members[k]];
                if (k) kind << ";";
                kind << "ch" << k + 1 << "->{";
                for (std::size_t i = 0; i < rule.target_tasks.size(); ++i)
                    kind << (i ? "," : "") << rule.target_tasks[i];
                kind << "}";
                if (rule.extra_cost) kind << "*w";
            }
            kind << ")";
        } else if (m == group.first || m == group.last) {
            // multiplexer end: the machine state picks which member's channel
            // is emitted toward the target (0 when no member matches)
            std::vector<std::size_t> emit(P, 0);
            for (std::size_t k = 0; k < R; ++k) {
                const auto v = condition_value(inst.rules[group.members[k]], m);
                if (!v) throw ShapeError("condensation bug: control end without condition");
                if (emit[static_cast<std::size_t>(*v)] != 0)
                    throw ShapeError("condensation bug: duplicate control value");
                emit[static_cast<std::size_t>(*v)] = k + 1;
            }
            for (std::size_t v = 0; v < P; ++v) sb.set(v, emit[v], emit[v], 1.0);
            kind << "mux(";
            bool any = false;
            for (std::size_t v = 0; v < P; ++v)
                if (emit[v]) {
                    if (any) kind << ",";
                    kind << "t" << v << "->ch" << emit[v];
                    any = true;
                }
            kind << ")";
        } else {
            // interior machine: per channel, either verify this member's
            // condition (mismatch kills the signal) or pass it through
            const bool leftward = m > group.target;  // which side feeds the signal
            for (std::size_t v = 0; v < P; ++v) sb.set(v, 0, 0, 1.0);
            bool checks = false;
            for (std::size_t k = 1; k < H; ++k) {
                const auto cv = condition_value(inst.rules[group.members[k - 1]], m);
                for (std::size_t v = 0; v < P; ++v) {
                    if (cv && static_cast<std::size_t>(*cv) != v) {
                        // signal dies: incoming channel k maps to 0 on the
                        // outgoing (target-facing) side
                        if (leftward) sb.set(v, 0, k, 1.0);
                        else          sb.set(v, k, 0, 1.0);
                    } else {
                        sb.set(v, k, k, 1.0);
                    }
                }
                checks = checks || cv.has_value();
            }
            kind << (checks ? "check" : "pass");
            if (checks) {
                kind << "(";
                bool any = false;
                for (std::size_t k = 1; k < H; ++k)
                    if (auto cv = condition_value(inst.rules[group.members[k - 1]], m)) {
                        if (any) kind << ",";
                        kind << "ch" << k << ":t" << *cv;
                        any = true;
                    }
                kind << ")";
            }
        }

        layer.sites.push_back(std::move(sb.t));
        layer.site_kinds.push_back(kind.str());
    }
    return layer;
}

std::vector<RuleLayer> compile_all(const Instance& inst, double tau) {
    std::vector<RuleLayer> layers;
    for (const auto& bucket : rearrange_rules(inst.rules))
        for (const RuleGroup& g : condense(inst.rules, bucket, inst))
            layers.push_back(compile_group(g, inst, tau));
    return layers;
}

std::string describe_layers(const std::vector<RuleLayer>& layers) {
    std::ostringstream os;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const RuleLayer& L = layers[i];
        os << "layer " << i << ": span m" << L.first << "..m" << L.last
           << " target m" << L.target << " channels " << L.channels << " rules [";
        for (std::size_t k = 0; k < L.members.size(); ++k)
            os << (k ? "," : "") << L.members[k];
        os << "]\n";
        for (std::size_t s = 0; s < L.sites.size(); ++s) {
            const DenseTensor& t = L.sites[s];
            std::size_t nnz = 0;
            for (double x : t.data) nnz += (x != 0.0);
            os << "  m" << (L.first + static_cast<int>(s)) << ": " << L.site_kinds[s] << " [";
            for (std::size_t a = 0; a < t.shape.size(); ++a)
                os << (a ? "x" : "") << t.shape[a];
            os << "] nnz " << nnz << "\n";
        }
    }
    return os.str();
}

} // namespace tnsched
