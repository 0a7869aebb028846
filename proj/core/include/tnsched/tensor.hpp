#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace tnsched {

// Row-major dense tensor of small rank.  All network machinery below treats
// site tensors as rank 4: [vertical-in, vertical-out, horizontal-left,
// horizontal-right], with extent-1 horizontals at chain edges.
struct DenseTensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    DenseTensor() = default;
    explicit DenseTensor(std::vector<std::size_t> s);

    std::size_t size() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }
    double& at(std::initializer_list<std::size_t> idx);
    double at(std::initializer_list<std::size_t> idx) const;
    // Drops extent-1 axes (for comparisons against lower-rank references).
    DenseTensor squeezed() const;
    // Swaps the two horizontal axes of a rank-4 site tensor.
    DenseTensor transposed_horizontals() const;
};

// What closes the top of a column: Trace sums the vertical index (identity
// observable), Open leaves it free (this column's task marginal), Basis
// plugs a unit vector (matrix-element probes).
struct Plug {
    enum class Kind { Trace, Open, Basis };
    Kind kind = Kind::Trace;
    int basis_index = 0;
};

// One machine of the network: evolved input vector at the bottom, one site
// tensor per rule layer stacked above it (nullopt = layer does not cross
// this machine and acts as identity), plug on top.
struct SiteColumn {
    int machine = 0;
    std::vector<double> input;
    std::vector<std::optional<DenseTensor>> sites;
    Plug top;
};

// Contraction state between two columns: one channel extent per layer
// (extent 1 where the layer is not present at this cut) plus an optional
// open vertical index kept from an Open column.  data is row-major over
// [channel_0, ..., channel_{L-1}, open].
struct Boundary {
    std::vector<std::size_t> channel_extents;
    std::size_t open_extent = 1;     // 1 while no Open column has been folded
    bool has_open = false;
    std::vector<double> data;

    static Boundary initial(std::size_t layer_count);
    std::size_t channel_volume() const;
};

// Peak allocation / boundary probes for complexity assertions and caps.
struct ContractionStats {
    std::size_t max_boundary_elems = 0;
    std::size_t max_intermediate_elems = 0;
    void record_boundary(std::size_t n) { if (n > max_boundary_elems) max_boundary_elems = n; }
    void record_intermediate(std::size_t n) { if (n > max_intermediate_elems) max_intermediate_elems = n; }
};

struct ContractionOptions {
    std::size_t memory_limit_bytes = 0;  // 0 = unlimited; counts one live intermediate
    ContractionStats* stats = nullptr;
};

// Folds one column into the boundary arriving from its left.  Throws
// ShapeError on extent mismatches and MemoryLimitError past the budget.
Boundary contract_column(const Boundary& left, const SiteColumn& column,
                         const ContractionOptions& opts = {});

struct ContractionResult {
    std::vector<double> values;   // size 1 for fully traced networks
    bool open = false;            // true when exactly one column was Open
    double scalar() const { return values.at(0); }
};

// Left-to-right fold over all columns starting from the trivial boundary.
ContractionResult full_contract(const std::vector<SiteColumn>& columns,
                                const ContractionOptions& opts = {});

// Diagonal matrix element <x|R|x> of the stacked rule layers: contracts with
// machine i's input and plug both replaced by the basis vector at x[i], which
// strips the evolution weights off the result.
double apply_operator_to_basis(const std::vector<SiteColumn>& columns, const std::vector<int>& x);

// General <bra|R|ket> probe (bra on the plugs, ket on the inputs).
double basis_matrix_element(std::vector<SiteColumn> columns,
                            const std::vector<int>& bra, const std::vector<int>& ket);

} // namespace tnsched
