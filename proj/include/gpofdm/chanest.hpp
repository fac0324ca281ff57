#pragma once

#include <span>
#include <variant>

#include "gpofdm/types.hpp"

namespace gpofdm {

/// Whole OFDM symbol of pilots at the start of each slot.
struct BlockPilots {
    std::size_t symbols_per_slot = 7;
    cplx pilot_value{1.0, 0.0};
};

/// Pilots on every `spacing`-th subcarrier (bins 0, s, 2s, ...) of every symbol.
/// spacing = 4 is a 1:4 pilot insertion rate.
struct CombPilots {
    std::size_t spacing = 4;
    cplx pilot_value{1.0, 0.0};
};

using PilotPlan = std::variant<BlockPilots, CombPilots>;

void validate_plan(const PilotPlan& plan, std::size_t n);

/// Subcarrier indices carrying comb pilots.
std::vector<std::size_t> pilot_bins(const CombPilots& plan, std::size_t n);

/// Subcarrier indices left for data under a comb plan.
std::vector<std::size_t> data_bins(const CombPilots& plan, std::size_t n);

/// H[k] = Y[k] / P[k] on every bin.
ComplexSequence ls_estimate_block(std::span<const cplx> y_freq, std::span<const cplx> pilots);

/// LS at the pilot bins, then transform-domain low-pass interpolation: the
/// N/s pilot estimates are inverse transformed, zero-padded to N taps and
/// transformed back. Exact for channels of at most N/s taps.
ComplexSequence ls_estimate_comb(std::span<const cplx> y_freq, const CombPilots& plan);

}  // namespace gpofdm
