#include "gpofdm/chanest.hpp"

#include "gpofdm/spectral.hpp"

namespace gpofdm {

void validate_plan(const PilotPlan& plan, std::size_t n) {
    if (const auto* block = std::get_if<BlockPilots>(&plan)) {
        if (block->symbols_per_slot < 2)
            throw std::invalid_argument("BlockPilots: a slot needs a pilot and at least one data symbol");
        if (!is_unit_modulus(block->pilot_value))
            throw std::invalid_argument("BlockPilots: pilot value must have unit magnitude");
        return;
    }
    const auto& comb = std::get<CombPilots>(plan);
    if (comb.spacing < 2 || n % comb.spacing != 0)
        throw std::invalid_argument("CombPilots: spacing " + std::to_string(comb.spacing) +
                                    " must be >= 2 and divide N=" + std::to_string(n));
    if (!is_unit_modulus(comb.pilot_value))
        throw std::invalid_argument("CombPilots: pilot value must have unit magnitude");
}

std::vector<std::size_t> pilot_bins(const CombPilots& plan, std::size_t n) {
    validate_plan(plan, n);
    std::vector<std::size_t> bins;
    for (std::size_t k = 0; k < n; k += plan.spacing) bins.push_back(k);
    return bins;
}

std::vector<std::size_t> data_bins(const CombPilots& plan, std::size_t n) {
    validate_plan(plan, n);
    std::vector<std::size_t> bins;
    for (std::size_t k = 0; k < n; ++k)
        if (k % plan.spacing != 0) bins.push_back(k);
    return bins;
}

ComplexSequence ls_estimate_block(std::span<const cplx> y_freq, std::span<const cplx> pilots) {
    if (y_freq.size() != pilots.size())
        throw std::invalid_argument("ls_estimate_block: pilot and received lengths differ");
    ComplexSequence h(y_freq.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (pilots[k] == cplx{}) throw std::invalid_argument("ls_estimate_block: zero pilot at bin " + std::to_string(k));
        h[k] = y_freq[k] / pilots[k];
    }
    return h;
}

ComplexSequence ls_estimate_comb(std::span<const cplx> y_freq, const CombPilots& plan) {
    const std::size_t n = y_freq.size();
    validate_plan(plan, n);
    const std::size_t count = n / plan.spacing;
    ComplexSequence at_pilots(count);
    for (std::size_t m = 0; m < count; ++m) at_pilots[m] = y_freq[m * plan.spacing] / plan.pilot_value;
    // H[s m] = sum_l h[l] e^{-2 pi i m l / (N/s)}, so the short inverse transform
    // returns h itself when L <= N/s.
    auto taps = idft(at_pilots);
    return dft(zero_pad(taps, n));
}

}  // namespace gpofdm
