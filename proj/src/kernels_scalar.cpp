#include <cstring>

#include "gss/kernels.hpp"

namespace gss::kernels {

void scan_row_source_scalar(const RowView& row, uint16_t fs, uint8_t idx,
                            std::vector<RowMatch>& out) {
    const uint8_t want_idx = static_cast<uint8_t>(idx << 4);
    const uint32_t want_fp = static_cast<uint32_t>(fs) << 16;
    const uint8_t* bucket = row.base;
    for (uint32_t col = 0; col < row.buckets; ++col, bucket += row.stride) {
        const uint8_t occ = bucket[0];
        if (occ == 0) continue;
        for (uint32_t j = 0; j < row.rooms; ++j) {
            if (!(occ & (1u << j))) continue;
            if ((bucket[1 + j] & 0xf0) != want_idx) continue;
            uint32_t fp;
            std::memcpy(&fp, bucket + row.fp_offset + 4 * j, sizeof(fp));
            if ((fp & 0xffff0000u) == want_fp)
                out.push_back({col, static_cast<uint8_t>(j)});
        }
    }
}

}  // namespace gss::kernels
