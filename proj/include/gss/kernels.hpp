#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gss::kernels {

// One contiguous matrix row in the split bucket layout:
//   [occupancy byte][l index bytes][pad][l fp-pair u32][pad][l weight i64]
// fp pair packs the source fingerprint in the high half, destination in the
// low half; index byte packs (i_s << 4) | i_d.
struct RowView {
    const uint8_t* base = nullptr;  // first bucket of the row
    uint32_t buckets = 0;           // m
    uint32_t rooms = 0;             // l
    size_t stride = 0;              // bucket stride in bytes
    size_t fp_offset = 0;           // offset of the fp-pair area in a bucket
};

struct RowMatch {
    uint32_t col;
    uint8_t room;

    friend bool operator==(const RowMatch&, const RowMatch&) = default;
};

enum class Impl { Auto, Scalar, Avx2 };

// Appends every occupied room in the row whose source fingerprint equals fs
// and whose source index equals idx, in (col, room) ascending order. This is
// the hot loop behind successor, node and BFS queries.
void scan_row_source(const RowView& row, uint16_t fs, uint8_t idx,
                     std::vector<RowMatch>& out, Impl impl = Impl::Auto);

// Reference implementation; the contract all variants must match exactly.
void scan_row_source_scalar(const RowView& row, uint16_t fs, uint8_t idx,
                            std::vector<RowMatch>& out);

#if defined(GSS_HAVE_AVX2_BUILD)
// Requires rooms <= 3 (header dword holds the occupancy byte plus indexes).
void scan_row_source_avx2(const RowView& row, uint16_t fs, uint8_t idx,
                          std::vector<RowMatch>& out);
#endif

bool avx2_available();

// Name of the variant Auto would pick for this row geometry.
const char* active_impl_name(const RowView& row);

// Force a specific default (used by --no-simd and the equivalence tests).
void set_default_impl(Impl impl);

}  // namespace gss::kernels
