// Copyright 2026 The adiatherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// In-place amplitude kernels. Everything here works on a flat array of
// 2^nbits complex numbers. A statevector uses one bit per qubit; a density
// matrix uses two adjacent bits per qubit (row bit 2j, column bit 2j+1), so a
// single-qubit channel is a 4x4 matrix on a bit pair.

#ifndef ADIATHERM_SRC_KERNELS_HPP
#define ADIATHERM_SRC_KERNELS_HPP

#include <algorithm>
#include <array>
#include <span>
#include <vector>

#include "adiatherm/types.hpp"

namespace adiatherm::kernels {

/// Row-major (2^W x 2^W) matrix acting on bits [pos, pos+W).
template <int W>
struct LocalOp {
    static constexpr int kDim = 1 << W;
    int pos = 0;
    std::array<Complex, kDim * kDim> m{};
};

using Op1 = LocalOp<1>;
using Op2 = LocalOp<2>;

template <int W>
LocalOp<W> identity_op(int pos) {
    LocalOp<W> op;
    op.pos = pos;
    for (int i = 0; i < LocalOp<W>::kDim; ++i) op.m[i * LocalOp<W>::kDim + i] = 1.0;
    return op;
}

/// lhs * rhs (rhs acts first).
template <int W>
LocalOp<W> compose(const LocalOp<W>& lhs, const LocalOp<W>& rhs) {
    constexpr int D = LocalOp<W>::kDim;
    LocalOp<W> out;
    out.pos = lhs.pos;
    for (int i = 0; i < D; ++i) {
        for (int j = 0; j < D; ++j) {
            Complex acc = 0.0;
            for (int k = 0; k < D; ++k) acc += lhs.m[i * D + k] * rhs.m[k * D + j];
            out.m[i * D + j] = acc;
        }
    }
    return out;
}

/// Applies op to every group of 2^W amplitudes that differ only in bits
/// [pos, pos+W), restricted to the index range [begin, end). The range must be
/// aligned to 2^(pos+W). Real and imaginary parts are combined explicitly so
/// that the inner loop over the stride vectorizes.
template <int W>
inline void apply_local_range(Complex* amps, Index begin, Index end, const LocalOp<W>& op) {
    constexpr int D = LocalOp<W>::kDim;
    const Index stride = Index{1} << op.pos;
    const Index span = stride << W;
    std::array<double, D * D> mr{};
    std::array<double, D * D> mi{};
    for (int k = 0; k < D * D; ++k) {
        mr[k] = op.m[k].real();
        mi[k] = op.m[k].imag();
    }
    for (Index base = begin; base < end; base += span) {
        std::array<double*, D> p{};
        for (int k = 0; k < D; ++k) p[k] = reinterpret_cast<double*>(amps + base + k * stride);
        for (Index i = 0; i < stride; ++i) {
            std::array<double, D> re{};
            std::array<double, D> im{};
            for (int k = 0; k < D; ++k) {
                re[k] = p[k][2 * i];
                im[k] = p[k][2 * i + 1];
            }
            for (int r = 0; r < D; ++r) {
                double out_re = 0.0;
                double out_im = 0.0;
                for (int k = 0; k < D; ++k) {
                    out_re += mr[r * D + k] * re[k] - mi[r * D + k] * im[k];
                    out_im += mr[r * D + k] * im[k] + mi[r * D + k] * re[k];
                }
                p[r][2 * i] = out_re;
                p[r][2 * i + 1] = out_im;
            }
        }
    }
}

/// Same update on split storage: re[i] + i im[i] is amplitude i.
template <int W>
inline void apply_local_split(double* re, double* im, Index size, const LocalOp<W>& op) {
    constexpr int D = LocalOp<W>::kDim;
    const Index stride = Index{1} << op.pos;
    const Index span = stride << W;
    std::array<double, D * D> mr{};
    std::array<double, D * D> mi{};
    for (int k = 0; k < D * D; ++k) {
        mr[k] = op.m[k].real();
        mi[k] = op.m[k].imag();
    }
    for (Index base = 0; base < size; base += span) {
        std::array<double*, D> pr{};
        std::array<double*, D> pi{};
        for (int k = 0; k < D; ++k) {
            pr[k] = re + base + k * stride;
            pi[k] = im + base + k * stride;
        }
#pragma GCC ivdep
        for (Index i = 0; i < stride; ++i) {
            std::array<double, D> xr{};
            std::array<double, D> xi{};
            for (int k = 0; k < D; ++k) {
                xr[k] = pr[k][i];
                xi[k] = pi[k][i];
            }
            for (int r = 0; r < D; ++r) {
                double out_re = 0.0;
                double out_im = 0.0;
                for (int k = 0; k < D; ++k) {
                    out_re += mr[r * D + k] * xr[k] - mi[r * D + k] * xi[k];
                    out_im += mr[r * D + k] * xi[k] + mi[r * D + k] * xr[k];
                }
                pr[r][i] = out_re;
                pi[r][i] = out_im;
            }
        }
    }
}

/// Applies ops living on bits [g0, gtop) in one sweep. For every setting of
/// the other bits, the group amplitudes are gathered into an L2-sized split
/// real/imaginary tile together with 2^lane_bits "lane" neighbours taken from
/// bits outside the group; lanes become the contiguous inner dimension so
/// every op sees a stride of at least 2^lane_bits.
template <int W>
void apply_group_tiled(std::span<Complex> amps, int nbits, int g0, int gtop,
                       std::span<const LocalOp<W>* const> ops, std::vector<double>& tile) {
    const int gbits = gtop - g0;
    const int lane_bits = std::min(3, nbits - gbits);
    // Lanes come from the lowest bits outside the group.
    const int lane_pos = g0 >= lane_bits ? 0 : gtop;
    const Index h_count = Index{1} << gbits;
    const Index l_count = Index{1} << lane_bits;
    const Index size = h_count * l_count;
    tile.resize(2 * size);
    double* re = tile.data();
    double* im = tile.data() + size;
    std::vector<LocalOp<W>> shifted;
    for (const auto* op : ops) {
        shifted.push_back(*op);
        shifted.back().pos = op->pos - g0 + lane_bits;
    }
    // The remaining bits enumerate tiles.
    const Index fixed_mask = ((h_count - 1) << g0) | ((l_count - 1) << lane_pos);
    const Index n = amps.size();
    Index base = 0;
    do {
        for (Index h = 0; h < h_count; ++h) {
            const Index row = base | (h << g0);
            const Index t = h << lane_bits;
            for (Index l = 0; l < l_count; ++l) {
                const Complex v = amps[row | (l << lane_pos)];
                re[t + l] = v.real();
                im[t + l] = v.imag();
            }
        }
        for (const auto& op : shifted) apply_local_split<W>(re, im, size, op);
        for (Index h = 0; h < h_count; ++h) {
            const Index row = base | (h << g0);
            const Index t = h << lane_bits;
            for (Index l = 0; l < l_count; ++l) amps[row | (l << lane_pos)] = Complex(re[t + l], im[t + l]);
        }
        base = ((base | fixed_mask) + 1) & ~fixed_mask;
    } while (base != 0 && base < n);
}

/// Applies a batch of local ops on pairwise disjoint bit ranges. Ops are
/// grouped by position into windows of at most 12 bits; each window costs one
/// pass over the array.
template <int W>
void apply_local_ops(std::span<Complex> amps, int nbits, std::span<const LocalOp<W>> ops) {
    constexpr int kGroupBits = 12;
    if (ops.empty()) return;
    std::vector<const LocalOp<W>*> sorted;
    for (const auto& op : ops) sorted.push_back(&op);
    std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->pos < b->pos; });
    if (nbits <= kGroupBits + 3) {
        for (const auto* op : sorted) apply_local_range<W>(amps.data(), 0, amps.size(), *op);
        return;
    }
    std::vector<double> tile;
    std::size_t first = 0;
    while (first < sorted.size()) {
        const int g0 = sorted[first]->pos;
        std::size_t last = first + 1;
        while (last < sorted.size() && sorted[last]->pos + W - g0 <= kGroupBits) ++last;
        const int gtop = sorted[last - 1]->pos + W;
        apply_group_tiled<W>(amps, nbits, g0, gtop, std::span(sorted).subspan(first, last - first), tile);
        first = last;
    }
}

/// amps[i] *= phases[key(i)] where key maps an index to a small table slot.
template <class KeyFn>
void apply_diagonal(std::span<Complex> amps, std::span<const Complex> table, KeyFn key) {
    const Index n = amps.size();
    for (Index i = 0; i < n; ++i) amps[i] *= table[key(i)];
}

/// Number of edges whose endpoints carry different bits in `basis`.
inline int unsatisfied_edges(Index basis, std::span<const std::pair<int, int>> edges) {
    int count = 0;
    for (const auto& [a, b] : edges) count += static_cast<int>(((basis >> a) ^ (basis >> b)) & 1U);
    return count;
}

/// Interleave/deinterleave helpers for the density-matrix layout.
struct BitInterleave {
    /// spread[x] places bit k of a 12-bit x at position 2k.
    std::array<std::uint32_t, 4096> spread{};
    /// compact[y] gathers the even bits of a 12-bit y into 6 bits.
    std::array<std::uint16_t, 4096> compact{};

    BitInterleave() {
        for (std::uint32_t x = 0; x < 4096; ++x) {
            std::uint32_t s = 0;
            std::uint16_t c = 0;
            for (int k = 0; k < 12; ++k) {
                s |= ((x >> k) & 1U) << (2 * k);
                if (k % 2 == 0) c |= static_cast<std::uint16_t>(((x >> k) & 1U) << (k / 2));
            }
            spread[x] = s;
            compact[x] = c;
        }
    }

    /// Row index and column index of qubits <= 12 -> vectorized position.
    Index join(Index row, Index col) const {
        const Index r = spread[row & 0xFFF] | (Index{spread[(row >> 12) & 0xFFF]} << 24);
        const Index c = spread[col & 0xFFF] | (Index{spread[(col >> 12) & 0xFFF]} << 24);
        return r | (c << 1);
    }
    /// Even bits of v (up to 48 bits) compacted.
    Index even_bits(Index v) const {
        Index out = 0;
        for (int chunk = 0; v != 0; ++chunk, v >>= 12) out |= Index{compact[v & 0xFFF]} << (6 * chunk);
        return out;
    }
};

const BitInterleave& interleave();

}  // namespace adiatherm::kernels

#endif  // ADIATHERM_SRC_KERNELS_HPP
