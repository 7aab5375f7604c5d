#include <immintrin.h>

#include "gss/kernels.hpp"

namespace gss::kernels {

// Processes 8 buckets per iteration. One gather pulls the header dword
// (occupancy byte + up to 3 index bytes), one gather per room pulls the
// fp-pair dwords. Matches are rare, so hits drain through a scalar tail that
// re-reads nothing. Emission order equals the scalar kernel: columns
// ascending, rooms ascending within a column.
void scan_row_source_avx2(const RowView& row, uint16_t fs, uint8_t idx,
                          std::vector<RowMatch>& out) {
    const uint32_t l = row.rooms;
    const int stride = static_cast<int>(row.stride);
    const __m256i want_idx = _mm256_set1_epi32(static_cast<uint8_t>(idx << 4));
    const __m256i idx_mask = _mm256_set1_epi32(0xf0);
    const __m256i want_fp = _mm256_set1_epi32(static_cast<int>(static_cast<uint32_t>(fs) << 16));
    const __m256i fp_mask = _mm256_set1_epi32(static_cast<int>(0xffff0000u));
    const __m256i one = _mm256_set1_epi32(1);

    const __m256i lane_step =
        _mm256_setr_epi32(0, stride, 2 * stride, 3 * stride, 4 * stride, 5 * stride,
                          6 * stride, 7 * stride);

    uint32_t col = 0;
    for (; col + 8 <= row.buckets; col += 8) {
        const uint8_t* chunk = row.base + static_cast<size_t>(col) * row.stride;
        const __m256i hdr = _mm256_i32gather_epi32(
            reinterpret_cast<const int*>(chunk), lane_step, 1);

        uint32_t room_hits[3] = {0, 0, 0};
        uint32_t any = 0;
        for (uint32_t j = 0; j < l; ++j) {
            const __m256i occ =
                _mm256_cmpeq_epi32(_mm256_and_si256(_mm256_srli_epi32(hdr, j), one), one);
            if (_mm256_testz_si256(occ, occ)) continue;
            const __m256i idxb = _mm256_and_si256(
                _mm256_srli_epi32(hdr, 8 * (1 + j)), idx_mask);
            __m256i match = _mm256_and_si256(occ, _mm256_cmpeq_epi32(idxb, want_idx));
            if (_mm256_testz_si256(match, match)) continue;
            const __m256i fp = _mm256_i32gather_epi32(
                reinterpret_cast<const int*>(chunk + row.fp_offset + 4 * j), lane_step, 1);
            match = _mm256_and_si256(
                match, _mm256_cmpeq_epi32(_mm256_and_si256(fp, fp_mask), want_fp));
            const uint32_t bits =
                static_cast<uint32_t>(_mm256_movemask_ps(_mm256_castsi256_ps(match)));
            room_hits[j] = bits;
            any |= bits;
        }
        if (!any) continue;
        for (uint32_t lane = 0; lane < 8; ++lane)
            for (uint32_t j = 0; j < l; ++j)
                if (room_hits[j] & (1u << lane))
                    out.push_back({col + lane, static_cast<uint8_t>(j)});
    }

    if (col < row.buckets) {
        RowView tail = row;
        tail.base = row.base + static_cast<size_t>(col) * row.stride;
        tail.buckets = row.buckets - col;
        const size_t before = out.size();
        scan_row_source_scalar(tail, fs, idx, out);
        for (size_t i = before; i < out.size(); ++i) out[i].col += col;
    }
}

}  // namespace gss::kernels
