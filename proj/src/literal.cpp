// Copyright 2026 The qcharm Authors
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

#include "qcharm/quarkmodel.hpp"

namespace qcharm {

namespace {

HamiltonianMatrix make_literal(const RealMatrix& m, std::string channel, MatrixUnits units) {
    HamiltonianMatrix h;
    h.entries = to_complex(m);
    h.units = units;
    h.source = MatrixSource::Literal;
    h.channel = std::move(channel);
    return h;
}

// Reference 1S0 matrix. The verbatim (1,1) entry reads 3.33652, one digit too
// many: the coefficient list, the spectrum and the 3S1 splitting all need 3.3652.
RealMatrix singlet_s(LiteralVariant v) {
    const double m11 = v == LiteralVariant::Corrected ? 3.3652 : 3.33652;
    return RealMatrix::from_rows({{0.9431, -0.8733, -0.7690, -0.5601},
                                  {-0.8733, m11, -0.5646, -0.8648},
                                  {-0.7690, -0.5646, 5.4382, -0.1566},
                                  {-0.5601, -0.8648, -0.1566, 7.3451}});
}

// 3S1: the (2,3) sign is flipped in the verbatim listing.
RealMatrix triplet_s(LiteralVariant v) {
    const double m23 = v == LiteralVariant::Corrected ? 0.0119 : -0.0119;
    return RealMatrix::from_rows({{1.0946, -0.7114, -0.6111, -0.4112},
                                  {-0.7114, 3.5406, -0.3910, -0.6989},
                                  {-0.6111, -0.3910, 5.6122, m23},
                                  {-0.4112, -0.6989, m23, 7.5104}});
}

// 1P1: verbatim (1,2) has the wrong sign and (3,3) repeats the 3S1 value.
// 8.6035 is fixed by the trace of the tabulated spectrum.
RealMatrix singlet_p(LiteralVariant v) {
    const bool fix = v == LiteralVariant::Corrected;
    const double m12 = fix ? 0.0373 : -0.0373;
    const double m33 = fix ? 8.6035 : 7.5104;
    return RealMatrix::from_rows({{2.8561, -0.2395, -0.3827, -0.2282},
                                  {-0.2395, 4.919, m12, -0.5097},
                                  {-0.3827, m12, 6.8114, 0.4058},
                                  {-0.2282, -0.5097, 0.4058, m33}});
}

}  // namespace

HamiltonianMatrix literal_hamiltonian(ChannelId id, LiteralVariant variant) {
    const Channel ch = channel(id);
    switch (id) {
        case ChannelId::Singlet1S0: return make_literal(singlet_s(variant), std::string(ch.label), MatrixUnits::InverseFm);
        case ChannelId::Triplet3S1: return make_literal(triplet_s(variant), std::string(ch.label), MatrixUnits::InverseFm);
        case ChannelId::Singlet1P1: return make_literal(singlet_p(variant), std::string(ch.label), MatrixUnits::InverseFm);
    }
    throw std::invalid_argument("literal_hamiltonian: unknown channel");
}

// Rows index the P-wave basis, columns the S-wave basis. The verbatim (2,2)
// entry duplicates a Hamiltonian element and the (2,3) magnitude is off; the
// closed forms b sqrt(n + 3/2) and -b sqrt(n + 1) give 0.8821 and -0.8167.
HamiltonianMatrix literal_e1(LiteralVariant variant) {
    const bool fix = variant == LiteralVariant::Corrected;
    const double m22 = fix ? 0.8821 : 5.4382;
    const double m23 = fix ? -0.8167 : -0.9166;
    return make_literal(RealMatrix::from_rows({{0.57751, -0.4715, 0.0, 0.0},
                                               {0.0, 0.7455, -0.6668, 0.0},
                                               {0.0, 0.0, m22, m23},
                                               {0.0, 0.0, 0.0, 1.0002}}),
                        "E1", MatrixUnits::Fm);
}

std::array<double, 4> published_truncated_spectrum(ChannelId id) {
    switch (id) {
        case ChannelId::Singlet1S0: return {0.395, 3.506, 5.664, 7.546};
        case ChannelId::Triplet3S1: return {0.753, 3.634, 5.723, 7.648};
        case ChannelId::Singlet1P1: return {2.783, 4.875, 6.765, 8.767};
    }
    throw std::invalid_argument("published_truncated_spectrum: unknown channel");
}

}  // namespace qcharm
