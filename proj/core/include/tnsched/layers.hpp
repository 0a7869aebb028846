#pragma once
#include "tnsched/model.hpp"
#include "tnsched/tensor.hpp"

#include <string>
#include <vector>

namespace tnsched {

// The five primitive site tensors rules are built from.  Indices are
// [vertical-in, vertical-out, horizontal...]: rank 3 for the single-sided
// kinds, rank 4 for the pass-through / two-sided kinds.
enum class PrimitiveKind { Id3, Id4, Ctrl, Cctrl, CProy, CcProy };

struct PrimitiveSpec {
    PrimitiveKind kind = PrimitiveKind::Id3;
    int a = 0;   // controlled/projected task
    int b = 0;   // activation channel
    int c = 0;   // emitted channel (Cctrl only)
};

// Exact nonzero patterns (all entries 1):
//   Id3   [i,i,j]                 for all i, j
//   Id4   [i,i,j,j]               for all i, j
//   Ctrl  [j,j,0] j!=a; [a,a,b]
//   Cctrl [i,i,k,0] k!=b; [j,j,b,0] j!=a; [a,a,b,c]
//   CProy [i,i,k] k!=b; [a,a,b]
//   CcProy[i,i,k,l] (k,l)!=(b,b); [a,a,b,b]
DenseTensor primitive_tensor(const PrimitiveSpec& spec, std::size_t vertical, std::size_t channels);

// Rules that share one compiled layer.  All members have the same first
// involved machine, last involved machine and target machine; member r uses
// signal channel r+1 (channel 0 = no signal).
struct RuleGroup {
    std::vector<int> members;   // indices into the instance rule list
    int first = 0;
    int last = 0;
    int target = 0;
    int channel_of(int member_pos) const { return member_pos + 1; }
};

// Positions of the first and last machine a rule touches (conditions+target).
std::pair<int, int> involved_span(const Rule& rule);

// Buckets rule indices by first involved machine (ascending buckets), each
// bucket sorted by last involved machine (stable).
std::vector<std::vector<int>> rearrange_rules(const std::vector<Rule>& rules);

// Greedy first-fit packing of one bucket into groups.  A rule joins a group
// only when it shares (last, target), keeps the condition values at every
// control end (first/last machine when not the target) pairwise distinct,
// and the group stays within P_first channels.
std::vector<RuleGroup> condense(const std::vector<Rule>& rules,
                                const std::vector<int>& bucket,
                                const Instance& inst);

// One horizontal operator layer: site tensors for machines first..last
// ([P,P,L,R] each), identity elsewhere.
struct RuleLayer {
    int first = 0;
    int last = 0;
    int target = 0;
    std::size_t channels = 1;            // horizontal extent inside the span
    std::vector<int> members;            // rule indices
    std::vector<DenseTensor> sites;      // index 0 = machine `first`
    std::vector<std::string> site_kinds; // printable kind per site

    const DenseTensor* site(int machine) const {
        if (machine < first || machine > last) return nullptr;
        return &sites[machine - first];
    }
};

// Builds the multiplexer/pass/projector sites for one group.  Soft rules set
// the projector pass entries to exp(-tau * extra_cost).  Signals left of the
// target flow rightward; signals right of it flow leftward (sites on that
// side are horizontal transposes of the rightward forms).
RuleLayer compile_group(const RuleGroup& group, const Instance& inst, double tau);

// rearrange + condense + compile for every rule of the instance; layers come
// out in emission order (ascending bucket, then packing order).
std::vector<RuleLayer> compile_all(const Instance& inst, double tau);

// Human-readable dump of a compiled layer stack (stable; golden-tested).
std::string describe_layers(const std::vector<RuleLayer>& layers);

} // namespace tnsched
