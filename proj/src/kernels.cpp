#include <atomic>

#include "gss/kernels.hpp"

namespace gss::kernels {
namespace {

std::atomic<Impl> g_default{Impl::Auto};

bool cpu_has_avx2() {
#if defined(GSS_HAVE_AVX2_BUILD)
    static const bool has = __builtin_cpu_supports("avx2");
    return has;
#else
    return false;
#endif
}

// The AVX2 variant reads occupancy plus index bytes as one dword, which
// limits it to rooms <= 3; wider buckets fall back to the scalar kernel.
bool avx2_usable(const RowView& row) {
    return cpu_has_avx2() && row.rooms <= 3 &&
           static_cast<uint64_t>(row.buckets) * row.stride < (1ull << 31);
}

}  // namespace

bool avx2_available() { return cpu_has_avx2(); }

void set_default_impl(Impl impl) { g_default.store(impl, std::memory_order_relaxed); }

const char* active_impl_name(const RowView& row) {
    Impl d = g_default.load(std::memory_order_relaxed);
    if (d == Impl::Scalar) return "scalar";
#if defined(GSS_HAVE_AVX2_BUILD)
    if ((d == Impl::Auto || d == Impl::Avx2) && avx2_usable(row)) return "avx2";
#endif
    return "scalar";
}

void scan_row_source(const RowView& row, uint16_t fs, uint8_t idx,
                     std::vector<RowMatch>& out, Impl impl) {
    if (impl == Impl::Auto) impl = g_default.load(std::memory_order_relaxed);
#if defined(GSS_HAVE_AVX2_BUILD)
    if (impl != Impl::Scalar && avx2_usable(row)) {
        scan_row_source_avx2(row, fs, idx, out);
        return;
    }
#endif
    scan_row_source_scalar(row, fs, idx, out);
}

}  // namespace gss::kernels
