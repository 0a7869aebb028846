#include "tnsched/tensor.hpp"
#include "tnsched/errors.hpp"

#include <numeric>
#include <string>

namespace tnsched {

DenseTensor::DenseTensor(std::vector<std::size_t> s) : shape(std::move(s)) {
    std::size_t n = 1;
    for (std::size_t e : shape) n *= e;
    data.assign(n, 0.0);
}

static std::size_t flat_index(const std::vector<std::size_t>& shape,
                              std::initializer_list<std::size_t> idx) {
    if (idx.size() != shape.size()) throw ShapeError("index rank mismatch");
    std::size_t flat = 0, axis = 0;
    for (std::size_t i : idx) {
        if (i >= shape[axis]) throw ShapeError("index out of range on axis " + std::to_string(axis));
        flat = flat * shape[axis] + i;
        ++axis;
    }
    return flat;
}

double& DenseTensor::at(std::initializer_list<std::size_t> idx) {
    return data[flat_index(shape, idx)];
}
double DenseTensor::at(std::initializer_list<std::size_t> idx) const {
    return data[flat_index(shape, idx)];
}

DenseTensor DenseTensor::squeezed() const {
    DenseTensor out;
    for (std::size_t e : shape)
        if (e != 1) out.shape.push_back(e);
    out.data = data;
    return out;
}

DenseTensor DenseTensor::transposed_horizontals() const {
    if (rank() != 4) throw ShapeError("horizontal transpose needs a rank-4 site");
    const std::size_t P = shape[0], Q = shape[1], L = shape[2], R = shape[3];
    DenseTensor out({P, Q, R, L});
    for (std::size_t a = 0; a < P; ++a)
        for (std::size_t b = 0; b < Q; ++b)
            for (std::size_t l = 0; l < L; ++l)
                for (std::size_t r = 0; r < R; ++r)
                    out.at({a, b, r, l}) = at({a, b, l, r});
    return out;
}

Boundary Boundary::initial(std::size_t layer_count) {
    Boundary b;
    b.channel_extents.assign(layer_count, 1);
    b.data.assign(1, 1.0);
    return b;
}

std::size_t Boundary::channel_volume() const {
    std::size_t n = 1;
    for (std::size_t e : channel_extents) n *= e;
    return n;
}

namespace {

void check_budget(std::size_t elems, const ContractionOptions& opts) {
    if (opts.stats) opts.stats->record_intermediate(elems);
    if (opts.memory_limit_bytes && elems * sizeof(double) > opts.memory_limit_bytes)
        throw MemoryLimitError("contraction intermediate of " +
                               std::to_string(elems * sizeof(double)) +
                               " bytes exceeds the memory budget");
}

} // namespace

Boundary contract_column(const Boundary& left, const SiteColumn& column,
                         const ContractionOptions& opts) {
    const std::size_t L = column.sites.size();
    if (left.channel_extents.size() != L)
        throw ShapeError("boundary layer count does not match column");
    const std::size_t P = column.input.size();
    if (P == 0) throw ShapeError("empty input vector");

    // Per-layer extents entering (li) and leaving (ri) this column.
    std::vector<std::size_t> lext(L), rext(L);
    for (std::size_t t = 0; t < L; ++t) {
        if (column.sites[t]) {
            const DenseTensor& s = *column.sites[t];
            if (s.rank() != 4) throw ShapeError("site tensors must be rank 4");
            if (s.shape[0] != P || s.shape[1] != P)
                throw ShapeError("site vertical extent does not match input vector");
            lext[t] = s.shape[2];
            rext[t] = s.shape[3];
        } else {
            lext[t] = rext[t] = 1;   // layer absent here: identity passthrough
        }
        if (left.channel_extents[t] != lext[t])
            throw ShapeError("left boundary extent mismatch on layer " + std::to_string(t));
    }

    const std::size_t O = left.open_extent;

    // Working tensor M laid out [v, done-right-extents..., pending-left-extents..., open].
    // Start: M[v, l_0..l_{L-1}, o] = input[v] * left[l_0..l_{L-1}, o].
    const std::size_t left_vol = left.channel_volume() * O;
    check_budget(P * left_vol, opts);
    std::vector<double> M(P * left_vol);
    for (std::size_t v = 0; v < P; ++v)
        for (std::size_t c = 0; c < left_vol; ++c)
            M[v * left_vol + c] = column.input[v] * left.data[c];

    // Fold layers bottom-up.  At step t, M has blocks
    //   [v][A = r_0..r_{t-1}][l_t][B = l_{t+1}..l_{L-1}, o]
    // and we contract (v, l_t) against site_t[v, v', l_t, r_t].
    std::size_t A = 1;
    std::size_t B = O;
    for (std::size_t t = L; t-- > 0;) B *= lext[t];
    for (std::size_t t = 0; t < L; ++t) {
        B /= lext[t];
        if (!column.sites[t]) {      // identity layer: nothing to do
            A *= rext[t];            // extents are 1; blocks unchanged
            continue;
        }
        const DenseTensor& s = *column.sites[t];
        const std::size_t Hl = lext[t], Hr = rext[t];
        check_budget(P * A * Hr * B, opts);
        std::vector<double> next(P * A * Hr * B, 0.0);
        // next[v', a, r, b] += M[v, a, l, b] * s[v, v', l, r]
        for (std::size_t v = 0; v < P; ++v) {
            for (std::size_t vp = 0; vp < P; ++vp) {
                const double* srow = &s.data[(v * P + vp) * Hl * Hr];
                for (std::size_t l = 0; l < Hl; ++l) {
                    for (std::size_t r = 0; r < Hr; ++r) {
                        const double w = srow[l * Hr + r];
                        if (w == 0.0) continue;
                        for (std::size_t a = 0; a < A; ++a) {
                            const double* src = &M[((v * A + a) * Hl + l) * B];
                            double* dst = &next[((vp * A + a) * Hr + r) * B];
                            for (std::size_t b = 0; b < B; ++b) dst[b] += w * src[b];
                        }
                    }
                }
            }
        }
        M = std::move(next);
        A *= Hr;
    }

    // Apply the plug to the vertical index.
    Boundary out;
    out.channel_extents = rext;
    out.open_extent = O;
    out.has_open = left.has_open;
    const std::size_t body = A * B;   // channels x existing open
    switch (column.top.kind) {
    case Plug::Kind::Trace: {
        out.data.assign(body, 0.0);
        for (std::size_t v = 0; v < P; ++v)
            for (std::size_t c = 0; c < body; ++c) out.data[c] += M[v * body + c];
        break;
    }
    case Plug::Kind::Basis: {
        const std::size_t v = static_cast<std::size_t>(column.top.basis_index);
        if (v >= P) throw ShapeError("basis plug index out of range");
        out.data.assign(M.begin() + v * body, M.begin() + (v + 1) * body);
        break;
    }
    case Plug::Kind::Open: {
        if (left.has_open)
            throw ShapeError("two Open columns in one network");
        out.has_open = true;
        out.open_extent = P;
        // reorder [v, channels, o=1] -> [channels, v]
        out.data.assign(body * P, 0.0);
        for (std::size_t v = 0; v < P; ++v)
            for (std::size_t c = 0; c < body; ++c)
                out.data[c * P + v] = M[v * body + c];
        break;
    }
    }
    if (opts.stats) opts.stats->record_boundary(out.data.size());
    return out;
}

ContractionResult full_contract(const std::vector<SiteColumn>& columns,
                                const ContractionOptions& opts) {
    if (columns.empty()) throw ShapeError("contracting an empty network");
    const std::size_t L = columns.front().sites.size();
    Boundary b = Boundary::initial(L);
    if (opts.stats) opts.stats->record_boundary(b.data.size());
    for (const SiteColumn& col : columns) b = contract_column(b, col, opts);
    for (std::size_t e : b.channel_extents)
        if (e != 1) throw ShapeError("network does not close: dangling channel extent");
    ContractionResult res;
    res.open = b.has_open;
    res.values = std::move(b.data);
    return res;
}

double basis_matrix_element(std::vector<SiteColumn> columns,
                            const std::vector<int>& bra, const std::vector<int>& ket) {
    if (bra.size() != columns.size() || ket.size() != columns.size())
        throw ShapeError("basis vector length does not match network");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        SiteColumn& col = columns[i];
        const std::size_t P = col.input.size();
        if (ket[i] < 0 || static_cast<std::size_t>(ket[i]) >= P ||
            bra[i] < 0 || static_cast<std::size_t>(bra[i]) >= P)
            throw ShapeError("basis index out of range");
        col.input.assign(P, 0.0);
        col.input[ket[i]] = 1.0;
        col.top = {Plug::Kind::Basis, bra[i]};
    }
    return full_contract(columns).scalar();
}

double apply_operator_to_basis(const std::vector<SiteColumn>& columns, const std::vector<int>& x) {
    return basis_matrix_element(columns, x, x);
}

} // namespace tnsched
