#pragma once

#include <span>
#include <vector>

#include "stbicm/channel.hpp"
#include "stbicm/common.hpp"
#include "stbicm/modem.hpp"
#include "stbicm/precode.hpp"

namespace stbicm {

// All 2^(m * dim) candidate received points x = z * (S * H_ext) for one
// precoding period, where candidate index bit l*m+k is coded bit k of the
// symbol on precoder input l.
struct CandidateTable {
    int m = 0;
    int dim = 0; // precoder input dimension s * n_t
    int n_bits = 0;
    std::vector<CVec> points; // size 2^n_bits, each of length dim_out
};

CandidateTable precompute_candidates(const Constellation& cst, const CMat& smat,
                                     const CMat& h_ext);

// Exhaustive a-posteriori probability detection of one precoding period.
// prior: one LLR per coded bit of the period (log P(0)/P(1)); returns the
// extrinsic LLRs (posterior with the bit's own prior removed).
std::vector<double> app_detect(const CandidateTable& tab, const CVec& y,
                               double n0, std::span<const double> prior);

} // namespace stbicm
